mod common;

use common::{origami, perm, pillow};
use pillowtile::cylinders::{horizontal_cylinders, MarkedPoints};
use pillowtile::permsurf::{orientation_double_cover, DoubleCover, PillowCover, StratumKind};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn origami_orders_sum_to_euler_characteristic(o in origami(9)) {
        let s = o.stratum();
        prop_assert_eq!(s.kind, StratumKind::Abelian);
        prop_assert_eq!(s.orders.iter().sum::<i64>(), 2 * s.genus as i64 - 2);
    }

    #[test]
    fn pillow_orders_sum_to_euler_characteristic(p in pillow(7)) {
        let s = p.stratum();
        prop_assert_eq!(s.orders.iter().sum::<i64>(), 4 * s.genus as i64 - 4);
    }

    #[test]
    fn double_cover_round_trip(p in pillow(7)) {
        let dc = orientation_double_cover(&p);
        prop_assert_eq!(dc.quotient_stratum().unwrap(), p.stratum());
        match &dc {
            DoubleCover::NonOrientable { surface, involution } => {
                prop_assert_eq!(surface.squares(), 4 * p.degree());
                prop_assert!(involution.then(involution).is_identity());
                prop_assert_eq!(involution.fixed_points(), 0);
                // the half-turn reverses both directions
                prop_assert_eq!(involution.then(surface.h()).then(involution), surface.h().inverse());
                prop_assert_eq!(involution.then(surface.v()).then(involution), surface.v().inverse());
            }
            DoubleCover::Orientable { surface } => prop_assert_eq!(surface.squares(), 2 * p.degree()),
        }
        // Riemann–Hurwitz upstairs
        let up = dc.surface().stratum();
        prop_assert_eq!(up.orders.iter().sum::<i64>(), 2 * up.genus as i64 - 2);
    }

    #[test]
    fn pillow_stratum_is_relabeling_invariant((p, r) in pillow(7).prop_flat_map(|p| { let d = p.degree(); (Just(p), perm(d)) })) {
        let q = p.relabel(&r);
        prop_assert_eq!(q.stratum(), p.stratum());
        let [g0, g1, g2, g3] = p.monodromy().clone();
        let conj = |g: &pillowtile::permsurf::Perm| r.inverse().then(g).then(&r);
        let direct = PillowCover::new(conj(&g0), conj(&g1), conj(&g2), conj(&g3)).unwrap();
        prop_assert_eq!(direct.stratum(), p.stratum());
    }

    #[test]
    fn cylinders_tile_the_surface(o in origami(12)) {
        for mode in [MarkedPoints::Singular, MarkedPoints::Regular] {
            let c = horizontal_cylinders(&o, mode);
            prop_assert_eq!(c.area(), o.squares());
        }
        prop_assert_eq!(
            horizontal_cylinders(&o, MarkedPoints::Singular).modulus_sum(),
            horizontal_cylinders(&o, MarkedPoints::Regular).modulus_sum()
        );
    }
}

#[test]
fn degenerate_cover_double_cover_has_twenty_squares() {
    let (p, _) = pillowtile::coverings::cyclic_to_pillow(&"5 1 2 2 5".parse().unwrap());
    let dc = orientation_double_cover(&p);
    assert!(!dc.is_orientable());
    assert_eq!(dc.surface().squares(), 20);
    let up = dc.surface().stratum();
    assert_eq!(up.orders.iter().sum::<i64>(), 2 * up.genus as i64 - 2);
}

#[test]
fn three_square_cylinder_areas() {
    // every 3-square origami, checked against a direct count of rows
    let perms: Vec<_> = (0..6).map(|k| {
        let all = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        pillowtile::permsurf::Perm::new(all[k].to_vec()).unwrap()
    }).collect();
    for h in &perms {
        for v in &perms {
            let Ok(o) = pillowtile::permsurf::Origami::new(h.clone(), v.clone()) else { continue };
            let c = horizontal_cylinders(&o, MarkedPoints::Singular);
            let widths: Vec<usize> = c.cylinders.iter().map(|c| c.width).collect();
            let mut rows: Vec<usize> = h.cycles().iter().map(Vec::len).collect();
            rows.sort();
            let mut w = widths.clone();
            w.sort();
            assert_eq!(w, rows);
            assert_eq!(c.area(), 3);
        }
    }
}
