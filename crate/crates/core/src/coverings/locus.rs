use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permsurf::{is_transitive, Perm, Stratum, StratumKind};

/// A cover `π: Y → P¹` branched over `{0, 1, ∞}`, given by the monodromy
/// around the three points (`h0·h1·h∞ = id`, left to right).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BelyiCover {
    pub h0: Perm,
    pub h1: Perm,
    pub hinf: Perm,
}

impl BelyiCover {
    pub fn new(h0: Perm, h1: Perm, hinf: Perm) -> Result<Self> {
        let d = h0.degree();
        if d == 0 || h1.degree() != d || hinf.degree() != d {
            return Err(Error::Monodromy("h0, h1, h∞ must share a positive degree".into()));
        }
        let product = h0.then(&h1).then(&hinf);
        if !product.is_identity() {
            return Err(Error::Locus(format!(
                "h0·h1·h∞ = {product} is not the identity: π is branched outside {{0, 1, ∞}}"
            )));
        }
        if !is_transitive(d, &[&h0, &h1, &hinf]) {
            return Err(Error::Connectivity("monodromy of π is not transitive".into()));
        }
        Ok(BelyiCover { h0, h1, hinf })
    }

    /// The identity cover `P¹ → P¹`.
    pub fn trivial() -> BelyiCover {
        let id = Perm::identity(1);
        BelyiCover { h0: id.clone(), h1: id.clone(), hinf: id }
    }

    /// The cyclic cover `w^N = z^{a0} (z - 1)^{a1}` with `a∞ = -a0 - a1`
    /// mod `N`, exponents taken mod `N`.
    pub fn cyclic(n: usize, a0: usize, a1: usize) -> Result<BelyiCover> {
        let h0 = Perm::rotation(n, a0 % n);
        let h1 = Perm::rotation(n, a1 % n);
        let hinf = h0.then(&h1).inverse();
        BelyiCover::new(h0, h1, hinf)
    }

    pub fn degree(&self) -> usize {
        self.h0.degree()
    }

    fn all(&self) -> [&Perm; 3] {
        [&self.h0, &self.h1, &self.hinf]
    }

    /// Riemann–Hurwitz genus of `Y`.
    pub fn genus(&self) -> u32 {
        let ram: i64 = self.all().iter().flat_map(|h| h.cycle_type()).map(|l| l as i64 - 1).sum();
        ((2 - 2 * self.degree() as i64 + ram) / 2) as u32
    }
}

/// The locus obtained by pulling back quadratic differentials in the
/// stratum with zeros `m` and `k` simple poles (three of them at `0, 1, ∞`)
/// along a fixed Belyi cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocusSpec {
    pub m: Vec<u32>,
    pub k: u32,
    pub cover: BelyiCover,
}

impl LocusSpec {
    pub fn new(m: Vec<u32>, k: u32, cover: BelyiCover) -> Result<Self> {
        if m.contains(&0) {
            return Err(Error::Locus("zero orders must be positive".into()));
        }
        let total: i64 = m.iter().map(|&x| x as i64).sum();
        if total - k as i64 != -4 {
            return Err(Error::Locus(format!("sum of zero orders {total} minus k = {k} is not -4")));
        }
        Ok(LocusSpec { m, k, cover })
    }
}

impl fmt::Display for LocusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.m.iter().map(u32::to_string).collect();
        let c = &self.cover;
        write!(f, "{}; {}; {}; {}; {}; {}", m.join(" "), self.k, c.degree(), c.h0, c.h1, c.hinf)
    }
}

impl FromStr for LocusSpec {
    type Err = Error;

    /// `m1 m2 ...; k; d; h0; h1; hinf` (the zero list may be empty).
    fn from_str(s: &str) -> Result<Self> {
        let fields: Vec<&str> = s.split(';').map(str::trim).collect();
        if fields.len() != 6 {
            return Err(Error::Parse(format!("locus line needs `m...; k; d; h0; h1; hinf`, got `{s}`")));
        }
        let m: Vec<u32> = fields[0]
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad zero order `{t}`"))))
            .collect::<Result<_>>()?;
        let k: u32 = fields[1].parse().map_err(|_| Error::Parse(format!("bad k `{}`", fields[1])))?;
        let d: usize = fields[2].parse().map_err(|_| Error::Parse(format!("bad degree `{}`", fields[2])))?;
        if d == 0 {
            return Err(Error::Parse("degree must be positive".into()));
        }
        let h0 = Perm::parse_cycles(fields[3], d)?;
        let h1 = Perm::parse_cycles(fields[4], d)?;
        let hinf = Perm::parse_cycles(fields[5], d)?;
        LocusSpec::new(m, k, BelyiCover::new(h0, h1, hinf)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocusMetadata {
    /// Simple poles of the pulled-back differential.
    pub n: usize,
    /// Dimension `r + k - 2` of the locus.
    pub dim: usize,
    pub target_stratum: Stratum,
    /// Genus of `Y`.
    pub genus: u32,
}

/// Pole count, dimension and stratum of the pulled-back locus.
///
/// Over `0, 1, ∞` a point of ramification `e` lies over a simple pole and
/// gets order `e - 2`; the `k - 3` other poles and the zeros have `d`
/// unramified preimages each.
pub fn locus_metadata(l: &LocusSpec) -> Result<LocusMetadata> {
    let d = l.cover.degree();
    let mut orders: Vec<i64> =
        l.cover.all().iter().flat_map(|h| h.cycle_type()).map(|e| e as i64 - 2).collect();
    let extra_poles = l.k as usize - 3;
    orders.extend(std::iter::repeat_n(-1, d * extra_poles));
    for &mj in &l.m {
        orders.extend(std::iter::repeat_n(mj as i64, d));
    }
    let genus = l.cover.genus();
    let target_stratum = Stratum::new(StratumKind::Quadratic, orders, genus)?;
    let fixed: usize = l.cover.all().iter().map(|h| h.fixed_points()).sum();
    let n = fixed + d * extra_poles;
    debug_assert_eq!(n, target_stratum.poles());
    Ok(LocusMetadata { n, dim: l.m.len() + l.k as usize - 2, target_stratum, genus })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_family_locus() {
        let l = LocusSpec::new(vec![], 4, BelyiCover::cyclic(5, 1, 2).unwrap()).unwrap();
        let meta = locus_metadata(&l).unwrap();
        assert_eq!((meta.n, meta.dim, meta.genus), (5, 2, 2));
        assert_eq!(meta.target_stratum.orders, vec![3, 3, 3, -1, -1, -1, -1, -1]);
    }

    #[test]
    fn degree_one_cover() {
        let l = LocusSpec::new(vec![1], 5, BelyiCover::trivial()).unwrap();
        let meta = locus_metadata(&l).unwrap();
        assert_eq!((meta.n, meta.dim, meta.genus), (5, 4, 0));
    }

    #[test]
    fn degree_six_with_two_fixed_points_at_infinity() {
        let h0 = Perm::parse_cycles("(1 2 3)(4 5 6)", 6).unwrap();
        let hinf = Perm::parse_cycles("(1 4)(2 5)", 6).unwrap();
        let h1 = h0.inverse().then(&hinf.inverse());
        assert_eq!(h1, Perm::parse_cycles("(1 3 5)(2 4 6)", 6).unwrap());
        let l = LocusSpec::new(vec![], 4, BelyiCover::new(h0, h1, hinf).unwrap()).unwrap();
        let meta = locus_metadata(&l).unwrap();
        assert_eq!(meta.n, 2 + 6);
        assert_eq!(meta.genus, 0);
    }

    #[test]
    fn branching_outside_three_points_rejected() {
        let t = Perm::parse_cycles("(1 2)", 2).unwrap();
        let err = BelyiCover::new(t.clone(), Perm::identity(2), Perm::identity(2)).unwrap_err();
        assert!(matches!(err, Error::Locus(_)));
    }

    #[test]
    fn text_format() {
        let l: LocusSpec = "1; 5; 1; (); (); ()".parse().unwrap();
        assert_eq!(l.m, vec![1]);
        assert_eq!(l.to_string().parse::<LocusSpec>().unwrap(), l);
        let l: LocusSpec = "; 4; 3; (1 2 3); (1 2 3); (1 2 3)".parse().unwrap();
        assert_eq!(locus_metadata(&l).unwrap().n, 3);
        assert!("2; 4; 1; (); (); ()".parse::<LocusSpec>().is_err());
    }
}
