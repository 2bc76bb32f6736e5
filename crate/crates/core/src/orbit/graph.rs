use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::action::{apply_generator, canonical_form, DeckSurface, Move};
use crate::error::{Error, Result};
use crate::permsurf::Perm;

/// Default bound on the number of orbit vertices.
pub const DEFAULT_ORBIT_CAP: usize = 10_000;

/// One generator edge. Applying `gen` to vertex `from` and relabeling the
/// squares by `relabel` gives exactly vertex `to`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitEdge {
    pub from: usize,
    pub gen: Move,
    pub to: usize,
    pub relabel: Perm,
}

/// The `SL(2, Z)`-orbit of a square-tiled surface (with its involution, if
/// any). Vertices are canonical forms sorted by key; every vertex has one
/// outgoing `S` edge and one outgoing `T` edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitGraph {
    pub vertices: Vec<DeckSurface>,
    pub edges: Vec<OrbitEdge>,
    /// Index of the seed's canonical form.
    pub base: usize,
}

impl OrbitGraph {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    /// The outgoing edge of `from` labeled `gen` (`S` or `T`).
    pub fn edge(&self, from: usize, gen: Move) -> &OrbitEdge {
        let slot = match gen {
            Move::S => 0,
            Move::T => 1,
            _ => panic!("orbit graphs store S and T edges only"),
        };
        &self.edges[2 * from + slot]
    }

    /// Text dump: one vertex per line, `index: d; h; v[; ι]`, then one edge
    /// per line, `from gen to`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (k, s) in self.vertices.iter().enumerate() {
            out.push_str(&format!("{k}: {}", s.origami));
            if let Some(i) = &s.involution {
                out.push_str(&format!("; {i}"));
            }
            out.push('\n');
        }
        for e in &self.edges {
            out.push_str(&format!("{} {} {}\n", e.from, e.gen, e.to));
        }
        out
    }
}

/// Breadth-first closure of `seed` under `S` and `T`.
///
/// Each frontier is expanded in parallel; new vertices are merged in a
/// fixed order, so the result does not depend on scheduling. Fails with
/// [`Error::OrbitCap`] once more than `cap` vertices are found.
pub fn enumerate_orbit(seed: &DeckSurface, cap: usize) -> Result<OrbitGraph> {
    let (root, _) = canonical_form(seed);
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    index.insert(root.key(), 0);
    let mut vertices = vec![root];
    // raw edges: (from, gen, to, relabel) in discovery numbering
    let mut raw: Vec<(usize, Move, usize, Perm)> = Vec::new();
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let images: Vec<(usize, Move, DeckSurface, Perm)> = frontier
            .par_iter()
            .flat_map_iter(|&u| {
                let src = &vertices[u];
                [Move::S, Move::T].into_iter().map(move |g| {
                    let (c, r) = canonical_form(&apply_generator(src, g));
                    (u, g, c, r)
                })
            })
            .collect();
        let mut next = Vec::new();
        for (u, g, c, r) in images {
            let key = c.key();
            let to = match index.get(&key) {
                Some(&k) => k,
                None => {
                    let k = vertices.len();
                    if k + 1 > cap {
                        return Err(Error::OrbitCap { cap });
                    }
                    index.insert(key, k);
                    vertices.push(c);
                    next.push(k);
                    k
                }
            };
            raw.push((u, g, to, r));
        }
        frontier = next;
    }

    // sort vertices by key for a stable dump
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    let keys: Vec<Vec<u32>> = vertices.iter().map(DeckSurface::key).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut new_index = vec![0; vertices.len()];
    for (pos, &old) in order.iter().enumerate() {
        new_index[old] = pos;
    }
    let mut slots: Vec<Option<DeckSurface>> = vertices.into_iter().map(Some).collect();
    let sorted: Vec<DeckSurface> =
        order.iter().map(|&old| slots[old].take().expect("each vertex moved once")).collect();
    let mut edges: Vec<OrbitEdge> = raw
        .into_iter()
        .map(|(u, g, to, relabel)| OrbitEdge { from: new_index[u], gen: g, to: new_index[to], relabel })
        .collect();
    edges.sort_by_key(|e| (e.from, e.gen));
    Ok(OrbitGraph { vertices: sorted, edges, base: new_index[0] })
}
