mod common;

use std::collections::{HashMap, HashSet};

use common::{origami, perm, pillow};
use pillowtile::coverings::{cyclic_to_pillow, CyclicCoverSpec};
use pillowtile::cylinders::{horizontal_cylinders, MarkedPoints};
use pillowtile::orbit::{apply_generator, apply_word, canonical_form, enumerate_orbit, DeckSurface, Move};
use pillowtile::permsurf::{Origami, Perm};
use proptest::prelude::*;
use rand::SeedableRng;

fn canon(s: &DeckSurface) -> DeckSurface {
    canonical_form(s).0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn canonical_form_is_idempotent_and_relabeling_invariant(
        (o, r) in origami(9).prop_flat_map(|o| { let d = o.squares(); (Just(o), perm(d)) })
    ) {
        let s = DeckSurface::plain(o);
        let (c, relabel) = canonical_form(&s);
        prop_assert_eq!(s.relabel(&relabel), c.clone());
        prop_assert_eq!(canon(&c), c.clone());
        prop_assert_eq!(canon(&s.relabel(&r)), c);
    }

    #[test]
    fn deck_canonical_form_is_relabeling_invariant(
        (p, r) in pillow(5).prop_flat_map(|p| { let d = 4 * p.degree(); (Just(p), perm(d)) })
    ) {
        let s = DeckSurface::from_pillow(&p);
        prop_assume!(s.involution.is_some());
        let c = canon(&s);
        prop_assert_eq!(canon(&c), c.clone());
        prop_assert_eq!(canon(&s.relabel(&r)), c);
    }

    #[test]
    fn generators_preserve_stratum(o in origami(9)) {
        let s = DeckSurface::plain(o.clone());
        for g in [Move::S, Move::T, Move::SInv, Move::TInv] {
            let image = apply_generator(&s, g).origami;
            prop_assert_eq!(image.stratum(), o.stratum());
            prop_assert_eq!(image.squares(), o.squares());
        }
    }

    #[test]
    fn s_has_order_four(o in origami(9)) {
        let s = DeckSurface::plain(o);
        prop_assert_eq!(apply_word(&s, &[Move::S; 4]), s.clone());
        prop_assert_eq!(apply_word(&s, &[Move::S, Move::SInv]), s.clone());
        prop_assert_eq!(apply_word(&s, &[Move::T, Move::TInv]), s);
    }

    #[test]
    fn half_turn_fixes_deck_surfaces(p in pillow(5)) {
        // the deck involution realizes -id, so S² is trivial up to relabeling
        let s = DeckSurface::from_pillow(&p);
        prop_assume!(s.involution.is_some());
        prop_assert_eq!(canon(&apply_word(&s, &[Move::S, Move::S])), canon(&s));
    }

    #[test]
    fn shear_by_width_lcm_is_trivial(o in origami(9)) {
        let w = horizontal_cylinders(&o, MarkedPoints::Singular).width_lcm();
        let s = DeckSurface::plain(o);
        let sheared = apply_word(&s, &vec![Move::T; w]);
        prop_assert_eq!(canon(&sheared), canon(&s));
    }
}

#[test]
fn half_turn_in_genus_two() {
    // genus ≤ 2 surfaces are hyperelliptic, and the hyperelliptic
    // involution acts as -id on the plane
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let mut seen = 0;
    while seen < 100 {
        let o = common::random_origami(&mut rng, 8);
        if o.genus() > 2 {
            continue;
        }
        seen += 1;
        let s = DeckSurface::plain(o);
        assert_eq!(canon(&apply_word(&s, &[Move::S, Move::S])), canon(&s));
    }
}

#[test]
fn half_turn_can_fail_in_higher_genus() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let found = (0..500).any(|_| {
        let s = DeckSurface::plain(common::random_origami(&mut rng, 9));
        canon(&apply_word(&s, &[Move::S, Move::S])) != canon(&s)
    });
    assert!(found);
}

fn all_perms(d: usize) -> Vec<Perm> {
    fn rec(prefix: &mut Vec<u32>, left: &mut Vec<u32>, out: &mut Vec<Perm>) {
        if left.is_empty() {
            out.push(Perm::new(prefix.clone()).unwrap());
            return;
        }
        for k in 0..left.len() {
            let x = left.remove(k);
            prefix.push(x);
            rec(prefix, left, out);
            prefix.pop();
            left.insert(k, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (0..d as u32).collect(), &mut out);
    out
}

/// Classes of all connected `d`-square origamis under the action, computed
/// by union-find on raw labelled pairs with no canonical forms involved.
fn brute_force_classes(d: usize) -> (Vec<Origami>, Vec<usize>) {
    let perms = all_perms(d);
    let all: Vec<Origami> = perms
        .iter()
        .flat_map(|h| perms.iter().filter_map(move |v| Origami::new(h.clone(), v.clone()).ok()))
        .collect();
    let index: HashMap<Origami, usize> = all.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();
    let mut parent: Vec<usize> = (0..all.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let union = |p: &mut Vec<usize>, a: usize, b: usize| {
        let (ra, rb) = (find(p, a), find(p, b));
        p[ra] = rb;
    };
    for (i, o) in all.iter().enumerate() {
        let mut images = vec![apply_generator(&DeckSurface::plain(o.clone()), Move::S).origami];
        images.push(apply_generator(&DeckSurface::plain(o.clone()), Move::T).origami);
        // relabelings are isomorphisms
        for r in &perms {
            images.push(o.relabel(r));
        }
        for img in images {
            union(&mut parent, i, index[&img]);
        }
    }
    let roots = (0..all.len()).map(|i| find(&mut parent, i)).collect();
    (all, roots)
}

#[test]
fn three_square_orbit_matches_brute_force() {
    let (all, roots) = brute_force_classes(3);
    let seed: Origami = "3; (1 2 3); (1 2)".parse().unwrap();
    let seed_root = roots[all.iter().position(|o| *o == seed).unwrap()];
    // isomorphism classes within the seed's class
    let classes: HashSet<Vec<u32>> = all
        .iter()
        .zip(&roots)
        .filter(|(_, &r)| r == seed_root)
        .map(|(o, _)| canon(&DeckSurface::plain(o.clone())).key())
        .collect();
    let g = enumerate_orbit(&DeckSurface::plain(seed.clone()), 1000).unwrap();
    assert_eq!(g.size(), classes.len());
    assert!(all.iter().zip(&roots).filter(|(_, &r)| r == seed_root).all(|(o, _)| o.stratum() == seed.stratum()));
}

#[test]
fn orbit_is_independent_of_seed() {
    let (p, _) = cyclic_to_pillow(&CyclicCoverSpec::new(5, [1, 2, 2, 5]).unwrap());
    let g = enumerate_orbit(&DeckSurface::from_pillow(&p), 10_000).unwrap();
    let keys: HashSet<Vec<u32>> = g.vertices.iter().map(DeckSurface::key).collect();
    let stratum = g.vertices[0].origami.stratum();
    assert!(g.vertices.iter().all(|v| v.origami.stratum() == stratum && v.squares() == 20));
    for start in [1, g.size() / 2, g.size() - 1] {
        let h = enumerate_orbit(&g.vertices[start], 10_000).unwrap();
        let other: HashSet<Vec<u32>> = h.vertices.iter().map(DeckSurface::key).collect();
        assert_eq!(other, keys);
    }
}

#[test]
fn orbit_cap_is_reported() {
    let (p, _) = cyclic_to_pillow(&CyclicCoverSpec::new(5, [1, 2, 2, 5]).unwrap());
    let err = enumerate_orbit(&DeckSurface::from_pillow(&p), 2).unwrap_err();
    assert_eq!(err, pillowtile::Error::OrbitCap { cap: 2 });
}
