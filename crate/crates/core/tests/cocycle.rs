mod common;

use common::{generators_symplectic, origami, pillow};
use pillowtile::coverings::{cyclic_to_pillow, CyclicCoverSpec};
use pillowtile::lyapunov::{induced_cocycle, CocycleWalk, IntMatrix, OrbitCocycle, DEFAULT_REORTHO};
use pillowtile::orbit::{enumerate_orbit, DeckSurface, Move, DEFAULT_ORBIT_CAP};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn generator_cocycles_are_symplectic(o in origami(8)) {
        prop_assert!(generators_symplectic(&o));
    }

    #[test]
    fn four_quarter_turns_are_the_identity(o in origami(8)) {
        let (c, end) = induced_cocycle(&o, &[Move::S; 4]).unwrap();
        prop_assert_eq!(end, o);
        let k = c.matrix.nrows();
        prop_assert_eq!(c.matrix, IntMatrix::identity(k, k));
    }

    #[test]
    fn orbit_cocycle_respects_the_splitting(p in pillow(4)) {
        let g = enumerate_orbit(&DeckSurface::from_pillow(&p), 2_000).unwrap();
        let oc = OrbitCocycle::new(&g).unwrap();
        for u in 0..g.size() {
            for gen in [Move::S, Move::T, Move::SInv, Move::TInv] {
                let (m, to) = oc.step(u, gen);
                let j_from = &oc.bases[u].intersection;
                let j_to = &oc.bases[to].intersection;
                prop_assert_eq!(&(m.transpose() * j_to) * m, j_from.clone());
                if let (Some(a), Some(b)) = (&oc.splittings[u], &oc.splittings[to]) {
                    prop_assert_eq!(&(&b.iota * m) * &a.iota, m.clone());
                    let mf = m.map(|x| x as f64);
                    let leak = &b.p_minus * &mf * &a.p_plus;
                    prop_assert_eq!(leak.amax(), 0.0);
                    let leak = &b.p_plus * &mf * &a.p_minus;
                    prop_assert_eq!(leak.amax(), 0.0);
                }
            }
        }
    }
}

fn walk(n: u32, a: [u32; 4]) -> CocycleWalk {
    let (p, _) = cyclic_to_pillow(&CyclicCoverSpec::new(n, a).unwrap());
    CocycleWalk::new(&p, DEFAULT_ORBIT_CAP).unwrap()
}

#[test]
fn same_seed_same_estimate() {
    let w = walk(5, [1, 1, 4, 4]);
    let a = w.run(20_000, 9, 20, DEFAULT_REORTHO).unwrap();
    let b = w.run(20_000, 9, 20, DEFAULT_REORTHO).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let c = w.run(20_000, 10, 20, DEFAULT_REORTHO).unwrap();
    assert_ne!(a.lambda_plus, c.lambda_plus);
}

#[test]
fn tautological_exponent_lives_in_the_minus_part() {
    let w = walk(5, [1, 2, 2, 5]);
    let e = w.run(100_000, 3, 20, DEFAULT_REORTHO).unwrap();
    assert!(e.lambda_minus.iter().any(|l| (l - 1.0).abs() < 0.02), "{:?}", e.lambda_minus);
    assert!(e.taut_slope > 0.0);
    assert!(e.taut_slope_spread < 0.2, "{}", e.taut_slope_spread);
    for l in e.lambda_plus.iter().chain(&e.lambda_minus) {
        assert!((-0.05..=1.05).contains(l));
    }
    let sorted = e.lambda_minus.windows(2).all(|w| w[0] >= w[1]);
    assert!(sorted);
}
