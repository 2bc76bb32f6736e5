//! Orientation double cover of a pillow-tiled surface.
//!
//! The pillowcase's own double cover is the torus `C / 2Z²`, tiled by four
//! unit squares whose vertices are its 2-torsion points. Accordingly the
//! double cover of a degree-`d` pillow cover is an origami with `4d`
//! squares, indexed as follows for a sheet `s`:
//!
//! | square  | index      |
//! |---------|------------|
//! | `F_s, +`| `s`        |
//! | `B_s, +`| `d + s`    |
//! | `F_s, −`| `2d + s`   |
//! | `B_s, −`| `3d + s`   |
//!
//! `±` records whether the flat chart of the pillow tile is kept or turned
//! by a half-turn. The deck involution swaps the two signs.
//!
//! Gluings of the pillow tiles (sheets normalized so that the right edge of
//! `F_s` is glued to `B_s`): `B_s` right → `F_{τ(s)}`, `F_s` bottom →
//! `B_{α(s)}` bottom by a half-turn, `F_s` top → `B_{β(s)}` top by a
//! half-turn. Tracking loops around the corners gives `g1 = α`,
//! `g2 = β⁻¹`, `g3 = τ∘β` and `g0 = α⁻¹∘τ⁻¹`, so the product relation is
//! automatic.

use serde::{Deserialize, Serialize};

use super::origami::Origami;
use super::perm::{orbits, Perm};
use super::pillow::PillowCover;
use super::stratum::{Stratum, StratumKind};
use crate::error::{Error, Result};

/// Result of [`orientation_double_cover`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum DoubleCover {
    /// The holonomy is nontrivial: a connected origami with `4d` squares and
    /// the deck involution, which has no fixed square.
    NonOrientable { surface: Origami, involution: Perm },
    /// The differential is a global square `ω²`; the cover splits into two
    /// copies of the pillow-tiled surface, of which one (`2d` squares) is
    /// kept as a translation surface.
    Orientable { surface: Origami },
}

impl DoubleCover {
    pub fn surface(&self) -> &Origami {
        match self {
            DoubleCover::NonOrientable { surface, .. } | DoubleCover::Orientable { surface } => surface,
        }
    }

    pub fn involution(&self) -> Option<&Perm> {
        match self {
            DoubleCover::NonOrientable { involution, .. } => Some(involution),
            DoubleCover::Orientable { .. } => None,
        }
    }

    pub fn is_orientable(&self) -> bool {
        matches!(self, DoubleCover::Orientable { .. })
    }

    /// Recovers the quadratic stratum downstairs from the vertex data.
    ///
    /// A vertex fixed by the involution with abelian order `k` sits over a
    /// point of odd quadratic order `k - 1`; a swapped pair of vertices of
    /// order `k` sits over a point of even order `2k`.
    pub fn quotient_stratum(&self) -> Result<Stratum> {
        match self {
            DoubleCover::Orientable { surface } => {
                let orders = surface.stratum().orders.iter().map(|&k| 2 * k).collect();
                Stratum::from_orders(StratumKind::Quadratic, orders)
            }
            DoubleCover::NonOrientable { surface, involution } => {
                let (vertex, count) = surface.vertex_labels();
                let mut size = vec![0usize; count];
                for &x in &vertex {
                    size[x] += 1;
                }
                // ι sends the lower-left corner of i to the upper-right corner
                // of ι(i), which is the lower-left corner of v(h(ι(i))).
                let mut image = vec![usize::MAX; count];
                for i in 0..surface.squares() {
                    let j = surface.v().apply(surface.h().apply(involution.apply(i)));
                    let (a, b) = (vertex[i], vertex[j]);
                    if image[a] == usize::MAX {
                        image[a] = b;
                    } else if image[a] != b {
                        return Err(Error::Internal("involution does not act on vertices".into()));
                    }
                }
                let mut orders = Vec::new();
                for x in 0..count {
                    let y = image[x];
                    let k = size[x] as i64 - 1;
                    if y == x {
                        orders.push(k - 1);
                    } else if x < y {
                        orders.push(2 * k);
                    }
                }
                Stratum::from_orders(StratumKind::Quadratic, orders)
            }
        }
    }
}

/// Builds the orientation double cover; see the module documentation for
/// the square indexing.
pub fn orientation_double_cover(p: &PillowCover) -> DoubleCover {
    let d = p.degree();
    let [_, g1, g2, g3] = p.monodromy();
    let alpha = g1.clone();
    let beta = g2.inverse();
    let tau = g2.then(g3);
    let (alpha_inv, beta_inv, tau_inv) = (alpha.inverse(), beta.inverse(), tau.inverse());

    let f_plus = |s: usize| s;
    let b_plus = |s: usize| d + s;
    let f_minus = |s: usize| 2 * d + s;
    let b_minus = |s: usize| 3 * d + s;

    let mut h = vec![0u32; 4 * d];
    let mut v = vec![0u32; 4 * d];
    let mut iota = vec![0u32; 4 * d];
    for s in 0..d {
        h[f_plus(s)] = b_plus(s) as u32;
        h[b_plus(s)] = f_plus(tau.apply(s)) as u32;
        h[f_minus(s)] = b_minus(tau_inv.apply(s)) as u32;
        h[b_minus(s)] = f_minus(s) as u32;

        v[f_plus(s)] = b_minus(beta.apply(s)) as u32;
        v[b_plus(s)] = f_minus(beta_inv.apply(s)) as u32;
        v[f_minus(s)] = b_plus(alpha.apply(s)) as u32;
        v[b_minus(s)] = f_plus(alpha_inv.apply(s)) as u32;

        iota[f_plus(s)] = f_minus(s) as u32;
        iota[f_minus(s)] = f_plus(s) as u32;
        iota[b_plus(s)] = b_minus(s) as u32;
        iota[b_minus(s)] = b_plus(s) as u32;
    }
    let h = Perm::new(h).expect("gluing is a bijection");
    let v = Perm::new(v).expect("gluing is a bijection");
    let iota = Perm::new(iota).expect("sign swap is a bijection");

    let components = orbits(4 * d, &[&h, &v]);
    if components.len() == 1 {
        return DoubleCover::NonOrientable {
            surface: Origami::new_unchecked(h, v),
            involution: iota,
        };
    }
    debug_assert_eq!(components.len(), 2);
    let keep = &components[0];
    let mut position = vec![usize::MAX; 4 * d];
    for (k, &x) in keep.iter().enumerate() {
        position[x] = k;
    }
    let restrict = |g: &Perm| -> Perm {
        Perm::new(keep.iter().map(|&x| position[g.apply(x)] as u32).collect())
            .expect("component is invariant")
    };
    DoubleCover::Orientable { surface: Origami::new_unchecked(restrict(&h), restrict(&v)) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize, a: [usize; 4]) -> PillowCover {
        let g = a.map(|ai| Perm::rotation(n, ai % n));
        let [g0, g1, g2, g3] = g;
        PillowCover::new(g0, g1, g2, g3).unwrap()
    }

    #[test]
    fn pillowcase_lifts_to_torus() {
        let dc = orientation_double_cover(&PillowCover::pillowcase());
        let DoubleCover::NonOrientable { surface, involution } = &dc else {
            panic!("pillowcase is not orientable")
        };
        assert_eq!(surface.squares(), 4);
        assert_eq!(surface.genus(), 1);
        assert!(involution.then(involution).is_identity());
        assert_eq!(involution.fixed_points(), 0);
        assert_eq!(dc.quotient_stratum().unwrap().orders, vec![-1, -1, -1, -1]);
    }

    #[test]
    fn involution_reverses_both_directions() {
        let p = cyclic(5, [1, 2, 2, 5]);
        let dc = orientation_double_cover(&p);
        let (o, i) = (dc.surface(), dc.involution().unwrap());
        assert!(i.then(o.h()).then(i).then(o.h()).is_identity());
        assert!(i.then(o.v()).then(i).then(o.v()).is_identity());
    }

    #[test]
    fn p5_double_cover() {
        let p = cyclic(5, [1, 2, 2, 5]);
        let dc = orientation_double_cover(&p);
        assert!(!dc.is_orientable());
        let o = dc.surface();
        assert_eq!(o.squares(), 20);
        // Riemann–Hurwitz for the double cover: each order-3 zero becomes a
        // single order-4 zero, each pole a regular point: 2ĝ - 2 = 12.
        assert_eq!(o.genus(), 7);
        let orders: i64 = o.stratum().orders.iter().sum();
        assert_eq!(orders, 2 * o.genus() as i64 - 2);
        assert_eq!(dc.quotient_stratum().unwrap(), p.stratum());
    }

    #[test]
    fn square_of_abelian_differential_splits() {
        for (n, a) in [(2, [1, 1, 1, 1]), (4, [1, 1, 1, 1])] {
            let p = cyclic(n, a);
            let dc = orientation_double_cover(&p);
            assert!(dc.is_orientable(), "({n}, {a:?})");
            assert_eq!(dc.surface().squares(), 2 * n);
            assert_eq!(dc.quotient_stratum().unwrap(), p.stratum());
        }
    }
}
