//! Random surfaces shared by the integration tests.
#![allow(dead_code)]

use pillowtile::lyapunov::{homology_basis, induced_cocycle, IntMatrix};
use pillowtile::orbit::Move;
use pillowtile::permsurf::{Origami, Perm, PillowCover};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn perm(d: usize) -> impl Strategy<Value = Perm> {
    Just((0..d as u32).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Perm::new(v).unwrap())
}

pub fn origami(max_degree: usize) -> impl Strategy<Value = Origami> {
    (1..=max_degree)
        .prop_flat_map(|d| (perm(d), perm(d)))
        .prop_filter_map("connected", |(h, v)| Origami::new(h, v).ok())
}

pub fn pillow(max_degree: usize) -> impl Strategy<Value = PillowCover> {
    (1..=max_degree)
        .prop_flat_map(|d| (perm(d), perm(d), perm(d)))
        .prop_filter_map("transitive", |(a, b, c)| PillowCover::from_three(a, b, c).ok())
}

pub fn random_perm<R: Rng>(rng: &mut R, d: usize) -> Perm {
    let mut images: Vec<u32> = (0..d as u32).collect();
    images.shuffle(rng);
    Perm::new(images).unwrap()
}

/// A connected origami with between 1 and `max_degree` squares.
pub fn random_origami<R: Rng>(rng: &mut R, max_degree: usize) -> Origami {
    loop {
        let d = rng.random_range(1..=max_degree);
        if let Ok(o) = Origami::new(random_perm(rng, d), random_perm(rng, d)) {
            return o;
        }
    }
}

pub fn random_pillow<R: Rng>(rng: &mut R, max_degree: usize) -> PillowCover {
    loop {
        let d = rng.random_range(1..=max_degree);
        if let Ok(p) = PillowCover::from_three(random_perm(rng, d), random_perm(rng, d), random_perm(rng, d)) {
            return p;
        }
    }
}

/// `Mᵀ J' M = J` for the cocycle of every generator at `o`.
pub fn generators_symplectic(o: &Origami) -> bool {
    let j = homology_basis(o).unwrap().intersection;
    [Move::S, Move::T, Move::SInv, Move::TInv].into_iter().all(|g| {
        let (c, end) = induced_cocycle(o, &[g]).unwrap();
        let j_end = homology_basis(&end).unwrap().intersection;
        let m: &IntMatrix = &c.matrix;
        &(m.transpose() * j_end) * m == j
    })
}
