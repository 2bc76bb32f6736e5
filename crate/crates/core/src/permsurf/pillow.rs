//! Pillow-tiled surfaces as branched covers of the pillowcase.
//!
//! The pillowcase is the sphere glued from a front square `F = [0,1]²` and a
//! back square `B`, with the standard quadratic differential having simple
//! poles at the four corners `c0 = (0,0)`, `c1 = (1,0)`, `c2 = (1,1)`,
//! `c3 = (0,1)` of `F`. A degree-`d` cover is given by the monodromy
//! `g_k` of a counterclockwise loop around `c_k`, based in the interior of
//! `F`. Products are read left to right (`g0` acts first) and satisfy
//! `g0·g1·g2·g3 = id`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::perm::{is_transitive, Perm};
use super::stratum::{Stratum, StratumKind};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PillowCover {
    monodromy: [Perm; 4],
}

impl PillowCover {
    pub fn new(g0: Perm, g1: Perm, g2: Perm, g3: Perm) -> Result<Self> {
        let d = g0.degree();
        if d == 0 || [&g1, &g2, &g3].iter().any(|g| g.degree() != d) {
            return Err(Error::Monodromy("corner permutations must share a positive degree".into()));
        }
        let product = g0.then(&g1).then(&g2).then(&g3);
        if !product.is_identity() {
            return Err(Error::Monodromy(format!(
                "g0·g1·g2·g3 = {product}, expected the identity"
            )));
        }
        if !is_transitive(d, &[&g0, &g1, &g2, &g3]) {
            return Err(Error::Connectivity(format!(
                "monodromy ({g0}, {g1}, {g2}, {g3}) is not transitive"
            )));
        }
        Ok(PillowCover { monodromy: [g0, g1, g2, g3] })
    }

    /// Completes `(g0, g1, g2)` with `g3 = (g0·g1·g2)⁻¹`.
    pub fn from_three(g0: Perm, g1: Perm, g2: Perm) -> Result<Self> {
        let g3 = g0.then(&g1).then(&g2).inverse();
        PillowCover::new(g0, g1, g2, g3)
    }

    /// The pillowcase itself.
    pub fn pillowcase() -> PillowCover {
        let id = Perm::identity(1);
        PillowCover { monodromy: [id.clone(), id.clone(), id.clone(), id] }
    }

    pub fn degree(&self) -> usize {
        self.monodromy[0].degree()
    }

    pub fn monodromy(&self) -> &[Perm; 4] {
        &self.monodromy
    }

    pub fn corner(&self, k: usize) -> &Perm {
        &self.monodromy[k]
    }

    /// Number of corners over which the cover is actually branched.
    pub fn branch_count(&self) -> usize {
        self.monodromy.iter().filter(|g| !g.is_identity()).count()
    }

    /// Genus by Riemann–Hurwitz: `2 - 2g = 2d - Σ (ℓ - 1)` over all cycles
    /// of all four corner permutations.
    pub fn genus(&self) -> u32 {
        let d = self.degree() as i64;
        let ramification: i64 = self
            .monodromy
            .iter()
            .flat_map(|g| g.cycle_type())
            .map(|l| l as i64 - 1)
            .sum();
        let two_g = 2 - 2 * d + ramification;
        debug_assert!(two_g >= 0 && two_g % 2 == 0);
        (two_g / 2) as u32
    }

    /// Quadratic stratum of the pulled-back differential: a cycle of length
    /// `ℓ` over a corner gives a point of order `ℓ - 2`.
    pub fn stratum(&self) -> Stratum {
        let orders: Vec<i64> = self
            .monodromy
            .iter()
            .flat_map(|g| g.cycle_type())
            .map(|l| l as i64 - 2)
            .collect();
        Stratum::new(StratumKind::Quadratic, orders, self.genus())
            .expect("Riemann–Hurwitz and the local model agree")
    }

    /// Simultaneous relabeling of the sheets.
    pub fn relabel(&self, relabel: &Perm) -> PillowCover {
        PillowCover { monodromy: self.monodromy.clone().map(|g| g.relabel(relabel)) }
    }
}

/// See [`PillowCover::stratum`].
pub fn pillow_stratum(p: &PillowCover) -> Stratum {
    p.stratum()
}

impl fmt::Display for PillowCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [g0, g1, g2, g3] = &self.monodromy;
        write!(f, "{}; {g0}; {g1}; {g2}; {g3}", self.degree())
    }
}

impl fmt::Debug for PillowCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PillowCover({self})")
    }
}

impl FromStr for PillowCover {
    type Err = Error;

    /// `d; g0; g1; g2; g3`.
    fn from_str(s: &str) -> Result<Self> {
        let fields: Vec<&str> = s.split(';').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(Error::Parse(format!("cover line needs `d; g0; g1; g2; g3`, got `{s}`")));
        }
        let d: usize = fields[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad degree `{}`", fields[0])))?;
        if d == 0 {
            return Err(Error::Parse("degree must be positive".into()));
        }
        let g: Vec<Perm> =
            fields[1..].iter().map(|t| Perm::parse_cycles(t, d)).collect::<Result<_>>()?;
        let [g0, g1, g2, g3]: [Perm; 4] = g.try_into().expect("four fields");
        PillowCover::new(g0, g1, g2, g3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pillowcase_has_four_poles() {
        let p = PillowCover::pillowcase();
        let s = p.stratum();
        assert_eq!(s.orders, vec![-1, -1, -1, -1]);
        assert_eq!(s.genus, 0);
    }

    #[test]
    fn text_format_example() {
        // rotations by 1, 2, 2, 0 on Z/5: the product is rotation by 5 = id
        let p: PillowCover = "5; (1 2 3 4 5); (1 3 5 2 4); (1 3 5 2 4); ()".parse().unwrap();
        assert_eq!(p.branch_count(), 3);
        assert_eq!(p.to_string().parse::<PillowCover>().unwrap(), p);
    }

    #[test]
    fn product_relation_enforced() {
        let err = "2; (1 2); (); (); ()".parse::<PillowCover>().unwrap_err();
        assert!(matches!(err, Error::Monodromy(_)));
        let err = "2; (); (); (); ()".parse::<PillowCover>().unwrap_err();
        assert!(matches!(err, Error::Connectivity(_)));
    }

    #[test]
    fn stratum_is_relabeling_invariant() {
        let p: PillowCover = "3; (1 2 3); (1 2 3); (1 2 3); ()".parse().unwrap();
        let r = Perm::parse_cycles("(1 3)", 3).unwrap();
        assert_eq!(p.relabel(&r).stratum(), p.stratum());
        assert_eq!(p.stratum().to_string(), "Q(1^3, -1^3)");
    }
}
