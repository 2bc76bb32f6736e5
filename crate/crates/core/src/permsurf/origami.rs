use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::perm::{is_transitive, Perm};
use super::stratum::{Stratum, StratumKind};
use crate::error::{Error, Result};

/// A square-tiled translation surface: `h` maps a square to its right
/// neighbour, `v` to its top neighbour.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Origami {
    h: Perm,
    v: Perm,
}

impl Origami {
    pub fn new(h: Perm, v: Perm) -> Result<Self> {
        if h.degree() != v.degree() || h.degree() == 0 {
            return Err(Error::Parse(format!(
                "h and v must have the same positive degree ({} vs {})",
                h.degree(),
                v.degree()
            )));
        }
        if !is_transitive(h.degree(), &[&h, &v]) {
            return Err(Error::Connectivity(format!("<h, v> is not transitive for h={h}, v={v}")));
        }
        Ok(Origami { h, v })
    }

    pub(crate) fn new_unchecked(h: Perm, v: Perm) -> Self {
        Origami { h, v }
    }

    pub fn torus() -> Origami {
        Origami::new_unchecked(Perm::identity(1), Perm::identity(1))
    }

    #[inline]
    pub fn squares(&self) -> usize {
        self.h.degree()
    }

    pub fn h(&self) -> &Perm {
        &self.h
    }

    pub fn v(&self) -> &Perm {
        &self.v
    }

    /// Turning counterclockwise around the lower-left corner of square `i`
    /// visits the lower-left corners of `i`, `c(i)`, `c²(i)`, … with
    /// `c = v ∘ h ∘ v⁻¹ ∘ h⁻¹`. Its cycles are the vertices of the tiling;
    /// a cycle of length `ℓ` is a cone point of angle `2πℓ`.
    pub fn vertex_permutation(&self) -> Perm {
        self.h.inverse().then(&self.v.inverse()).then(&self.h).then(&self.v)
    }

    /// Index of the vertex at the lower-left corner of each square, together
    /// with the vertex count. Vertices are numbered by their smallest square.
    pub fn vertex_labels(&self) -> (Vec<usize>, usize) {
        let c = self.vertex_permutation();
        let mut label = vec![0; self.squares()];
        let cycles = c.cycles();
        for (k, cycle) in cycles.iter().enumerate() {
            for &i in cycle {
                label[i] = k;
            }
        }
        (label, cycles.len())
    }

    /// Abelian stratum; every vertex is listed, regular ones with order 0.
    pub fn stratum(&self) -> Stratum {
        let orders: Vec<i64> =
            self.vertex_permutation().cycle_type().iter().map(|&l| l as i64 - 1).collect();
        Stratum::from_orders(StratumKind::Abelian, orders)
            .expect("Euler characteristic of a square complex is even")
    }

    pub fn genus(&self) -> u32 {
        self.stratum().genus
    }

    /// Relabels squares by `relabel` (old label `i` becomes `relabel(i)`).
    pub fn relabel(&self, relabel: &Perm) -> Origami {
        Origami::new_unchecked(self.h.relabel(relabel), self.v.relabel(relabel))
    }
}

/// Stratum of an origami; see [`Origami::stratum`].
pub fn origami_stratum(o: &Origami) -> Stratum {
    o.stratum()
}

impl fmt::Display for Origami {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; {}; {}", self.squares(), self.h, self.v)
    }
}

impl fmt::Debug for Origami {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Origami({self})")
    }
}

impl FromStr for Origami {
    type Err = Error;

    /// `d; h; v` with permutations in one-based cycle notation.
    fn from_str(s: &str) -> Result<Self> {
        let fields: Vec<&str> = s.split(';').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::Parse(format!("origami line needs `d; h; v`, got `{s}`")));
        }
        let d: usize = fields[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad square count `{}`", fields[0])))?;
        if d == 0 {
            return Err(Error::Parse("an origami needs at least one square".into()));
        }
        Origami::new(Perm::parse_cycles(fields[1], d)?, Perm::parse_cycles(fields[2], d)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_square_torus() {
        let t = Origami::torus();
        let s = t.stratum();
        assert_eq!(s.orders, vec![0]);
        assert_eq!(s.genus, 1);
    }

    #[test]
    fn l_shaped_three_squares() {
        // hand trace: the four corners of the L meet in a single vertex of
        // angle 6π, so the vertex permutation is one 3-cycle
        let o: Origami = "3; (1 2 3); (1 2)".parse().unwrap();
        assert_eq!(o.vertex_permutation().cycle_type(), vec![3]);
        let s = o.stratum();
        assert_eq!(s.orders, vec![2]);
        assert_eq!(s.genus, 2);
    }

    #[test]
    fn disconnected_is_rejected() {
        let err = "2; (); ()".parse::<Origami>().unwrap_err();
        assert!(matches!(err, Error::Connectivity(_)));
        assert!("2; (1 2)".parse::<Origami>().is_err());
    }

    #[test]
    fn display_round_trip() {
        let o: Origami = "4; (1 2 3 4); (1 3)".parse().unwrap();
        assert_eq!(o.to_string().parse::<Origami>().unwrap(), o);
    }
}
