use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::exact::{integer_inverse, IntMatrix};
use super::homology::{bottom, homology_basis, involution_on_chain, left, Chain, HomologyBasis};
use crate::error::{Error, Result};
use crate::orbit::{apply_generator, DeckSurface, Move, OrbitGraph};
use crate::permsurf::{Origami, Perm};

/// Image of an edge chain of `o` under the affine move `gen`, as a chain on
/// `gen·o` (squares keep their labels).
///
/// * `T`: `b_i ↦ b_i`, `l_i ↦ l_i + b_{v'(i)}` with `v' = v∘h⁻¹`
/// * `T⁻¹`: `b_i ↦ b_i`, `l_i ↦ l_i - b_{v(i)}`
/// * `S`: `b_i ↦ -l_i`, `l_i ↦ b_{h⁻¹(i)}`
/// * `S⁻¹`: `b_i ↦ l_{v⁻¹(i)}`, `l_i ↦ -b_i`
pub fn push_chain(o: &Origami, gen: Move, chain: &[i64]) -> Chain {
    let d = o.squares();
    let mut out = vec![0i64; 2 * d];
    match gen {
        Move::T => {
            let h_inv = o.h().inverse();
            for i in 0..d {
                out[bottom(i)] += chain[bottom(i)];
                out[left(d, i)] += chain[left(d, i)];
                out[bottom(o.v().apply(h_inv.apply(i)))] += chain[left(d, i)];
            }
        }
        Move::TInv => {
            for i in 0..d {
                out[bottom(i)] += chain[bottom(i)];
                out[left(d, i)] += chain[left(d, i)];
                out[bottom(o.v().apply(i))] -= chain[left(d, i)];
            }
        }
        Move::S => {
            let h_inv = o.h().inverse();
            for i in 0..d {
                out[left(d, i)] -= chain[bottom(i)];
                out[bottom(h_inv.apply(i))] += chain[left(d, i)];
            }
        }
        Move::SInv => {
            let v_inv = o.v().inverse();
            for i in 0..d {
                out[left(d, v_inv.apply(i))] += chain[bottom(i)];
                out[bottom(i)] -= chain[left(d, i)];
            }
        }
    }
    out
}

/// Moves chain coefficients along a relabeling of squares.
pub fn relabel_chain(r: &Perm, chain: &[i64]) -> Chain {
    let d = r.degree();
    let mut out = vec![0i64; 2 * d];
    for i in 0..d {
        out[bottom(r.apply(i))] = chain[bottom(i)];
        out[left(d, r.apply(i))] = chain[left(d, i)];
    }
    out
}

/// Matrix of a chain map between two homology bases: column `k` holds the
/// target coordinates of the image of basis cycle `k`.
fn matrix_of(source: &HomologyBasis, target: &HomologyBasis, map: impl Fn(&[i64]) -> Chain) -> IntMatrix {
    let mut m = IntMatrix::zeros(target.rank, source.rank);
    for (k, z) in source.cycles.iter().enumerate() {
        let image = target.coordinates(&map(z));
        for (r, x) in image.into_iter().enumerate() {
            m[(r, k)] = x;
        }
    }
    m
}

/// The action on `H₁` of the deck involution.
pub fn involution_matrix(o: &Origami, iota: &Perm, basis: &HomologyBasis) -> IntMatrix {
    matrix_of(basis, basis, |z| involution_on_chain(o, iota, z))
}

/// Integer matrix of the cocycle along a word of moves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocycleMatrix {
    pub matrix: IntMatrix,
    pub word: Vec<Move>,
}

/// The cocycle along `word` (leftmost move first) from the basis at `o`
/// to the basis at the final surface, which is returned too. Intermediate
/// surfaces keep the square labels of `o`.
pub fn induced_cocycle(o: &Origami, word: &[Move]) -> Result<(CocycleMatrix, Origami)> {
    if word.is_empty() {
        return Err(Error::Precondition("empty move word".into()));
    }
    let start = homology_basis(o)?;
    let mut current = o.clone();
    let mut basis = start.clone();
    let mut total = IntMatrix::identity(start.rank, start.rank);
    for &g in word {
        let next = apply_generator(&DeckSurface::plain(current.clone()), g).origami;
        let next_basis = homology_basis(&next)?;
        let step = matrix_of(&basis, &next_basis, |z| push_chain(&current, g, z));
        total = step * total;
        current = next;
        basis = next_basis;
    }
    Ok((CocycleMatrix { matrix: total, word: word.to_vec() }, current))
}

/// The `±1` eigenspaces of the involution on `H₁`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvolutionSplitting {
    pub iota: IntMatrix,
    /// `(I + ι*) / 2`, projection onto the invariant part.
    pub p_plus: nalgebra::DMatrix<f64>,
    pub p_minus: nalgebra::DMatrix<f64>,
    pub dim_plus: usize,
    pub dim_minus: usize,
}

impl InvolutionSplitting {
    pub fn new(iota: IntMatrix) -> Result<Self> {
        let n = iota.nrows();
        if &iota * &iota != IntMatrix::identity(n, n) {
            return Err(Error::Internal("ι* is not an involution".into()));
        }
        let trace: i64 = (0..n).map(|k| iota[(k, k)]).sum();
        let dim_plus = ((n as i64 + trace) / 2) as usize;
        let f = iota.map(|x| x as f64);
        let id = nalgebra::DMatrix::<f64>::identity(n, n);
        Ok(InvolutionSplitting {
            p_plus: (&id + &f) * 0.5,
            p_minus: (&id - &f) * 0.5,
            iota,
            dim_plus,
            dim_minus: n - dim_plus,
        })
    }
}

/// Per-vertex homology data of an orbit and the cocycle on every edge.
#[derive(Debug, Clone)]
pub struct OrbitCocycle {
    pub bases: Vec<HomologyBasis>,
    pub splittings: Vec<Option<InvolutionSplitting>>,
    /// `[S, T, S⁻¹, T⁻¹]` cocycle matrices and targets, per vertex.
    pub steps: Vec<[(IntMatrix, usize); 4]>,
}

fn slot(g: Move) -> usize {
    match g {
        Move::S => 0,
        Move::T => 1,
        Move::SInv => 2,
        Move::TInv => 3,
    }
}

impl OrbitCocycle {
    pub fn new(g: &OrbitGraph) -> Result<Self> {
        let bases: Vec<HomologyBasis> =
            g.vertices.par_iter().map(|s| homology_basis(&s.origami)).collect::<Result<_>>()?;
        let splittings: Vec<Option<InvolutionSplitting>> = g
            .vertices
            .iter()
            .zip(&bases)
            .map(|(s, b)| {
                s.involution
                    .as_ref()
                    .map(|i| InvolutionSplitting::new(involution_matrix(&s.origami, i, b)))
                    .transpose()
            })
            .collect::<Result<_>>()?;
        let n = g.size();
        let mut forward: Vec<[(IntMatrix, usize); 2]> = Vec::with_capacity(n);
        for u in 0..n {
            let src = &g.vertices[u];
            let pair = [Move::S, Move::T].map(|gen| {
                let e = g.edge(u, gen);
                let m = matrix_of(&bases[u], &bases[e.to], |z| {
                    relabel_chain(&e.relabel, &push_chain(&src.origami, gen, z))
                });
                (m, e.to)
            });
            forward.push(pair);
        }
        let mut backward: Vec<[Option<(IntMatrix, usize)>; 2]> = vec![[None, None]; n];
        for (u, pair) in forward.iter().enumerate() {
            for (k, (m, to)) in pair.iter().enumerate() {
                backward[*to][k] = Some((integer_inverse(m)?, u));
            }
        }
        let steps = forward
            .into_iter()
            .zip(backward)
            .map(|([s, t], [si, ti])| {
                let si = si.expect("S permutes the orbit");
                let ti = ti.expect("T permutes the orbit");
                [s, t, si, ti]
            })
            .collect();
        Ok(OrbitCocycle { bases, splittings, steps })
    }

    pub fn step(&self, u: usize, g: Move) -> (&IntMatrix, usize) {
        let (m, to) = &self.steps[u][slot(g)];
        (m, *to)
    }

    pub fn rank(&self) -> usize {
        self.bases[0].rank
    }

    /// Composes the cocycle along a word starting at vertex `u`.
    pub fn along(&self, mut u: usize, word: &[Move]) -> (IntMatrix, usize) {
        let n = self.rank();
        let mut total = IntMatrix::identity(n, n);
        for &g in word {
            let (m, to) = self.step(u, g);
            total = m * total;
            u = to;
        }
        (total, u)
    }
}
