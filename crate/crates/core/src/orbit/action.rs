use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permsurf::{orientation_double_cover, DoubleCover, Origami, Perm, PillowCover};

/// Generators of `SL(2, Z)` acting on square-tiled surfaces.
///
/// `T = [[1, 1], [0, 1]]` is the horizontal shear. `S` is the quarter turn
/// realized by `(h, v) ↦ (v, h⁻¹)`: the top neighbour becomes the right
/// neighbour, so on the plane it is the clockwise rotation `[[0, 1], [-1, 0]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Move {
    S,
    T,
    TInv,
    SInv,
}

impl Move {
    pub fn inverse(self) -> Move {
        match self {
            Move::S => Move::SInv,
            Move::SInv => Move::S,
            Move::T => Move::TInv,
            Move::TInv => Move::T,
        }
    }

    /// The matrix acting on the plane.
    pub fn matrix(self) -> [[i64; 2]; 2] {
        match self {
            Move::T => [[1, 1], [0, 1]],
            Move::TInv => [[1, -1], [0, 1]],
            Move::S => [[0, 1], [-1, 0]],
            Move::SInv => [[0, -1], [1, 0]],
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Move::S => "S",
            Move::T => "T",
            Move::TInv => "T-",
            Move::SInv => "S-",
        })
    }
}

impl FromStr for Move {
    type Err = Error;

    fn from_str(s: &str) -> Result<Move> {
        match s.trim() {
            "S" => Ok(Move::S),
            "T" => Ok(Move::T),
            "T-" | "T^-1" | "Ti" => Ok(Move::TInv),
            "S-" | "S^-1" | "Si" => Ok(Move::SInv),
            other => Err(Error::Parse(format!("unknown move `{other}`"))),
        }
    }
}

/// An origami together with an optional deck involution (the half-turn
/// of an orientation double cover). The involution satisfies
/// `ι h ι = h⁻¹` and `ι v ι = v⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeckSurface {
    pub origami: Origami,
    pub involution: Option<Perm>,
}

impl DeckSurface {
    pub fn plain(origami: Origami) -> DeckSurface {
        DeckSurface { origami, involution: None }
    }

    /// The orientation double cover of a pillow cover, with its involution
    /// when the cover is connected.
    pub fn from_pillow(p: &PillowCover) -> DeckSurface {
        match orientation_double_cover(p) {
            DoubleCover::NonOrientable { surface, involution } => {
                DeckSurface { origami: surface, involution: Some(involution) }
            }
            DoubleCover::Orientable { surface } => DeckSurface::plain(surface),
        }
    }

    pub fn squares(&self) -> usize {
        self.origami.squares()
    }

    pub fn h(&self) -> &Perm {
        self.origami.h()
    }

    pub fn v(&self) -> &Perm {
        self.origami.v()
    }

    pub fn relabel(&self, r: &Perm) -> DeckSurface {
        DeckSurface {
            origami: self.origami.relabel(r),
            involution: self.involution.as_ref().map(|i| i.relabel(r)),
        }
    }

    /// Concatenated images of `h`, `v` and `ι`; canonical forms compare by
    /// this key.
    pub fn key(&self) -> Vec<u32> {
        let mut key = Vec::with_capacity(3 * self.squares());
        key.extend_from_slice(self.h().images());
        key.extend_from_slice(self.v().images());
        if let Some(i) = &self.involution {
            key.extend_from_slice(i.images());
        }
        key
    }
}

/// Applies one generator. Squares keep their labels:
///
/// * `T·(h, v) = (h, v∘h⁻¹)`, `ι ↦ h∘ι`
/// * `S·(h, v) = (v, h⁻¹)`, `ι ↦ ι`
///
/// and the inverses accordingly.
pub fn apply_generator(s: &DeckSurface, gen: Move) -> DeckSurface {
    let (h, v) = (s.h(), s.v());
    let (nh, nv, shift) = match gen {
        Move::T => (h.clone(), h.inverse().then(v), Some(h.clone())),
        Move::TInv => (h.clone(), h.then(v), Some(h.inverse())),
        Move::S => (v.clone(), h.inverse(), None),
        Move::SInv => (v.inverse(), h.clone(), None),
    };
    let involution = s.involution.as_ref().map(|i| match &shift {
        Some(g) => i.then(g),
        None => i.clone(),
    });
    DeckSurface { origami: Origami::new_unchecked(nh, nv), involution }
}

/// Applies a word, leftmost move first.
pub fn apply_word(s: &DeckSurface, word: &[Move]) -> DeckSurface {
    word.iter().fold(s.clone(), |acc, &g| apply_generator(&acc, g))
}

/// Canonical representative under relabeling of squares, and the
/// relabeling that produces it (`canonical = s.relabel(&r)`).
///
/// For every choice of the square that becomes `0`, the remaining squares
/// are numbered in breadth-first order following `h` then `v`; the
/// lexicographically smallest key wins.
pub fn canonical_form(s: &DeckSurface) -> (DeckSurface, Perm) {
    let d = s.squares();
    let mut best: Option<(Vec<u32>, Vec<u32>)> = None;
    let mut label = vec![u32::MAX; d];
    let mut order = Vec::with_capacity(d);
    for start in 0..d {
        label.iter_mut().for_each(|x| *x = u32::MAX);
        order.clear();
        label[start] = 0;
        order.push(start);
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for y in [s.h().apply(x), s.v().apply(x)] {
                if label[y] == u32::MAX {
                    label[y] = order.len() as u32;
                    order.push(y);
                }
            }
        }
        let key = relabeled_key(s, &label, &order);
        let better = match &best {
            None => true,
            Some((k, _)) => key.cmp(k) == Ordering::Less,
        };
        if better {
            best = Some((key, label.clone()));
        }
    }
    let (_, label) = best.expect("an origami has at least one square");
    let r = Perm::new(label).expect("breadth-first labels form a bijection");
    (s.relabel(&r), r)
}

fn relabeled_key(s: &DeckSurface, label: &[u32], order: &[usize]) -> Vec<u32> {
    let mut key = Vec::with_capacity(3 * order.len());
    for g in [Some(s.h()), Some(s.v()), s.involution.as_ref()].into_iter().flatten() {
        key.extend(order.iter().map(|&x| label[g.apply(x)]));
    }
    key
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permsurf::PillowCover;

    fn origami(text: &str) -> DeckSurface {
        DeckSurface::plain(text.parse().unwrap())
    }

    #[test]
    fn torus_is_fixed() {
        let t = DeckSurface::plain(Origami::torus());
        for g in [Move::S, Move::T, Move::TInv, Move::SInv] {
            assert_eq!(apply_generator(&t, g), t);
        }
    }

    #[test]
    fn inverse_moves_undo() {
        let o = origami("4; (1 2 3)(4); (1 4)(2 3)");
        for g in [Move::S, Move::T, Move::TInv, Move::SInv] {
            assert_eq!(apply_generator(&apply_generator(&o, g), g.inverse()), o);
        }
    }

    #[test]
    fn shear_by_row_lengths_is_identity() {
        let o = origami("5; (1 2)(3 4 5); (1 3)(2 5)");
        let w = 6; // lcm(2, 3)
        let word = vec![Move::T; w];
        assert_eq!(apply_word(&o, &word), o);
    }

    #[test]
    fn canonical_form_is_idempotent_and_invariant() {
        let o = origami("4; (1 2 3 4); (1 3)");
        let (c, r) = canonical_form(&o);
        assert_eq!(o.relabel(&r), c);
        assert_eq!(canonical_form(&c).0, c);
        let shuffle = Perm::parse_cycles("(1 4 2)", 4).unwrap();
        assert_eq!(canonical_form(&o.relabel(&shuffle)).0, c);
    }

    #[test]
    fn involution_is_transported() {
        let p: PillowCover = "5; (1 2 3 4 5); (1 3 5 2 4); (1 3 5 2 4); ()".parse().unwrap();
        let s = DeckSurface::from_pillow(&p);
        let word = [Move::T, Move::S, Move::T, Move::T, Move::SInv, Move::TInv, Move::S];
        let mut cur = s.clone();
        for &g in &word {
            cur = apply_generator(&cur, g);
            let (h, v, i) = (cur.h(), cur.v(), cur.involution.clone().unwrap());
            assert!(i.then(&i).is_identity());
            assert_eq!(i.fixed_points(), 0);
            assert!(i.then(h).then(&i).then(h).is_identity());
            assert!(i.then(v).then(&i).then(v).is_identity());
        }
    }
}
