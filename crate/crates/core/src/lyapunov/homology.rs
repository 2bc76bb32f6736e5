//! Integral first homology of a square-tiled surface.
//!
//! The cell structure has the lower-left corners as vertices and two edges
//! per square `i`: the bottom edge `b_i` (index `i`), running from the
//! vertex of `i` to the vertex of `h(i)`, and the left edge `l_i` (index
//! `d + i`), running from the vertex of `i` to the vertex of `v(i)`. The
//! boundary of square `i` is `b_i + l_{h(i)} - b_{v(i)} - l_i`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::exact::{determinant, integer_inverse, IntMatrix};
use crate::error::{Error, Result};
use crate::permsurf::{Origami, Perm};
use crate::rational::Q;

pub type Chain = Vec<i64>;

#[inline]
pub fn bottom(i: usize) -> usize {
    i
}

#[inline]
pub fn left(d: usize, i: usize) -> usize {
    d + i
}

/// Boundary of square `i` as `(edge, coefficient)` pairs.
fn square_boundary(o: &Origami, i: usize) -> [(usize, i64); 4] {
    let d = o.squares();
    [
        (bottom(i), 1),
        (left(d, o.h().apply(i)), 1),
        (bottom(o.v().apply(i)), -1),
        (left(d, i), -1),
    ]
}

/// A basis of `H₁(X; Z)` together with the dual coordinate map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomologyBasis {
    pub rank: usize,
    /// Basis cycles as edge chains (length `2d`).
    pub cycles: Vec<Chain>,
    /// `rank × 2d` matrix whose rows are cocycles dual to the basis: the
    /// coordinates of a cycle `z` are `coords · z`.
    pub coords: IntMatrix,
    /// Algebraic intersection numbers `J[k][l] = γ_k · γ_l`.
    pub intersection: IntMatrix,
}

impl HomologyBasis {
    pub fn coordinates(&self, chain: &[i64]) -> Vec<i64> {
        (0..self.rank)
            .map(|k| chain.iter().enumerate().map(|(e, &c)| self.coords[(k, e)] * c).sum())
            .collect()
    }

    /// Basis cycles as the columns of a `2d × rank` matrix.
    pub fn cycle_matrix(&self) -> IntMatrix {
        let e = self.cycles.first().map_or(0, Vec::len);
        IntMatrix::from_fn(e, self.rank, |r, c| self.cycles[c][r])
    }
}

/// Tree–cotree construction: a spanning tree of the 1-skeleton, a spanning
/// tree of the dual graph among the remaining edges, and one basis cycle
/// for each of the `2g` leftover edges. The intersection matrix comes from
/// the cup product of the dual cocycles and is checked to be unimodular.
pub fn homology_basis(o: &Origami) -> Result<HomologyBasis> {
    let d = o.squares();
    let n_edges = 2 * d;
    let (vertex, n_vertices) = o.vertex_labels();
    let endpoints: Vec<(usize, usize)> = (0..n_edges)
        .map(|e| {
            if e < d {
                (vertex[e], vertex[o.h().apply(e)])
            } else {
                (vertex[e - d], vertex[o.v().apply(e - d)])
            }
        })
        .collect();

    // primal spanning tree, with the signed path from each vertex to the root
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n_vertices];
    for (e, &(a, b)) in endpoints.iter().enumerate() {
        incident[a].push(e);
        if b != a {
            incident[b].push(e);
        }
    }
    let mut in_tree = vec![false; n_edges];
    let mut parent: Vec<Option<(usize, i64)>> = vec![None; n_vertices];
    let mut reached = vec![false; n_vertices];
    let mut order = vec![0usize];
    reached[0] = true;
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        for &e in &incident[x] {
            let (a, b) = endpoints[e];
            let (y, sign) = if a == x { (b, -1) } else { (a, 1) };
            // `sign` orients e from y towards x
            if !reached[y] {
                reached[y] = true;
                in_tree[e] = true;
                parent[y] = Some((e, sign));
                order.push(y);
            }
        }
    }
    if order.len() != n_vertices {
        return Err(Error::Connectivity("1-skeleton is not connected".into()));
    }
    let path_to_root = |mut x: usize| -> Chain {
        let mut chain = vec![0i64; n_edges];
        while let Some((e, sign)) = parent[x] {
            chain[e] += sign;
            let (a, b) = endpoints[e];
            x = if sign == 1 { b } else { a };
        }
        chain
    };

    // dual spanning tree through non-tree edges
    let (h_inv, v_inv) = (o.h().inverse(), o.v().inverse());
    let sides = |e: usize| -> (usize, usize) {
        if e < d {
            (e, v_inv.apply(e))
        } else {
            (e - d, h_inv.apply(e - d))
        }
    };
    let mut dual_incident: Vec<Vec<usize>> = vec![Vec::new(); d];
    for e in (0..n_edges).filter(|&e| !in_tree[e]) {
        let (p, q) = sides(e);
        if p != q {
            dual_incident[p].push(e);
            dual_incident[q].push(e);
        }
    }
    let mut in_cotree = vec![false; n_edges];
    let mut cotree_edge: Vec<Option<usize>> = vec![None; d];
    let mut seen = vec![false; d];
    let mut queue = VecDeque::from([0usize]);
    let mut dual_order = Vec::with_capacity(d);
    seen[0] = true;
    while let Some(x) = queue.pop_front() {
        dual_order.push(x);
        for &e in &dual_incident[x] {
            let (p, q) = sides(e);
            let y = if p == x { q } else { p };
            if !seen[y] {
                seen[y] = true;
                in_cotree[e] = true;
                cotree_edge[y] = Some(e);
                queue.push_back(y);
            }
        }
    }
    if dual_order.len() != d {
        return Err(Error::Internal("dual graph is not connected".into()));
    }

    let leftover: Vec<usize> = (0..n_edges).filter(|&e| !in_tree[e] && !in_cotree[e]).collect();
    let genus = o.genus() as usize;
    if leftover.len() != 2 * genus {
        return Err(Error::Internal(format!(
            "tree-cotree left {} edges, expected 2g = {}",
            leftover.len(),
            2 * genus
        )));
    }
    let rank = leftover.len();

    let cycles: Vec<Chain> = leftover
        .iter()
        .map(|&e| {
            let (a, b) = endpoints[e];
            let (pa, pb) = (path_to_root(a), path_to_root(b));
            let mut z: Chain = pb.iter().zip(&pa).map(|(x, y)| x - y).collect();
            z[e] += 1;
            z
        })
        .collect();

    // coordinates: push every edge off the cotree using square boundaries,
    // parents before children, then read the leftover coefficients
    let boundaries: Vec<[(usize, i64); 4]> = (0..d).map(|i| square_boundary(o, i)).collect();
    let mut coords = IntMatrix::zeros(rank, n_edges);
    for e in 0..n_edges {
        let mut z = vec![0i64; n_edges];
        z[e] = 1;
        for &sq in &dual_order[1..] {
            let c = cotree_edge[sq].expect("non-root square has a cotree edge");
            if z[c] == 0 {
                continue;
            }
            let s: i64 = boundaries[sq].iter().filter(|b| b.0 == c).map(|b| b.1).sum();
            debug_assert!(s == 1 || s == -1);
            let factor = z[c] * s;
            for &(edge, coef) in &boundaries[sq] {
                z[edge] -= factor * coef;
            }
            debug_assert_eq!(z[c], 0);
        }
        for (k, &l) in leftover.iter().enumerate() {
            coords[(k, e)] = z[l];
        }
    }

    // cup product of the dual cocycles, then J = (C⁻¹)ᵀ
    let mut cup = IntMatrix::zeros(rank, rank);
    for i in 0..d {
        let b = bottom(i);
        let r = left(d, o.h().apply(i));
        let l = left(d, i);
        let t = bottom(o.v().apply(i));
        for k in 0..rank {
            for m in 0..rank {
                cup[(k, m)] += coords[(k, b)] * coords[(m, r)] - coords[(k, l)] * coords[(m, t)];
            }
        }
    }
    let intersection = integer_inverse(&cup)
        .map_err(|e| Error::Internal(format!("cup product not unimodular: {e}")))?
        .transpose();
    if determinant(&intersection) != Q::from_integer(1.into()) || intersection != -intersection.transpose() {
        return Err(Error::Internal("intersection form is not unimodular antisymmetric".into()));
    }
    Ok(HomologyBasis { rank, cycles, coords, intersection })
}

/// Action on edge chains of the deck involution `ι` (a half-turn): the
/// bottom edge of `i` goes to the reversed top edge of `ι(i)`, the left edge
/// to the reversed right edge.
pub fn involution_on_chain(o: &Origami, iota: &Perm, chain: &[i64]) -> Chain {
    let d = o.squares();
    let mut out = vec![0i64; 2 * d];
    for i in 0..d {
        let j = iota.apply(i);
        out[bottom(o.v().apply(j))] -= chain[bottom(i)];
        out[left(d, o.h().apply(j))] -= chain[left(d, i)];
    }
    out
}

/// `Σ b_i` and `Σ l_i`, the horizontal and vertical tautological cycles.
pub fn tautological_cycles(d: usize) -> [Chain; 2] {
    let mut horizontal = vec![0i64; 2 * d];
    let mut vertical = vec![0i64; 2 * d];
    for i in 0..d {
        horizontal[bottom(i)] = 1;
        vertical[left(d, i)] = 1;
    }
    [horizontal, vertical]
}
