use num_traits::Zero;
use pillowtile::coverings::{cyclic_to_pillow, is_determinant_locus, CyclicCoverSpec};
use pillowtile::cylinders::{ekz_for_pillow, ekz_sum, kappa_term, EKZReport};
use pillowtile::orbit::DEFAULT_ORBIT_CAP;
use pillowtile::permsurf::{Stratum, StratumKind};
use pillowtile::rational::{q, q_int, Q};

fn report(n: u32, a: [u32; 4]) -> EKZReport {
    let (p, _) = cyclic_to_pillow(&CyclicCoverSpec::new(n, a).unwrap());
    ekz_for_pillow(&p, DEFAULT_ORBIT_CAP).unwrap().1
}

/// `(1/24) Σ m(m+4)/(m+2)` over every point, poles included.
fn formula_without_sv(orders: &[i64]) -> Q {
    orders.iter().map(|&m| q(m * (m + 4), 24 * (m + 2))).sum()
}

#[test]
fn p_family_decomposition() {
    for p in [3u32, 5, 7] {
        for a1 in 1..p {
            for a2 in 1..p - a1 {
                let r = report(p, [a1, a2, p - a1 - a2, p]);
                let p = p as i64;
                assert!(r.lyap_sum.is_zero(), "p = {p}: {}", r.lyap_sum);
                assert_eq!(r.decomposition, vec![q_int(p - 3), q(3 * p - 6, p), q(6, p)]);
                assert_eq!(r.residual_over_sv, Some(q_int(12)));
            }
        }
    }
}

#[test]
fn every_degenerate_spec_has_zero_sum() {
    let mut checked = 0;
    for n in 2..=12 {
        for s in CyclicCoverSpec::enumerate(n) {
            if !is_determinant_locus(&s).unwrap().degenerate {
                continue;
            }
            let (p, _) = cyclic_to_pillow(&s);
            let r = ekz_for_pillow(&p, DEFAULT_ORBIT_CAP).unwrap().1;
            let st = p.stratum();
            if st.genus == 0 {
                continue;
            }
            assert!(r.lyap_sum.is_zero(), "{s}: {}", r.lyap_sum);
            checked += 1;
        }
    }
    assert!(checked > 20);
}

#[test]
fn nondegenerate_sums_match_known_values() {
    // Forni–Matheus–Zorich: (4,1,1,1,1) and (2,1,1,1,1) have λ⁺ = 1
    for (n, a) in [(2, [1, 1, 1, 1]), (4, [1, 1, 1, 1])] {
        assert_eq!(report(n, a).lyap_sum, q_int(1));
    }
}

#[test]
fn decomposition_identity_and_formula() {
    for n in 2..=6 {
        for s in CyclicCoverSpec::enumerate(n) {
            let (p, _) = cyclic_to_pillow(&s);
            let r = ekz_for_pillow(&p, DEFAULT_ORBIT_CAP).unwrap().1;
            let total: Q = r.decomposition.iter().sum();
            assert_eq!(total, q_int(r.n as i64), "{s}");
            assert_eq!(r.lyap_sum, formula_without_sv(&r.stratum_orders) + &r.sv_term, "{s}");
        }
    }
}

#[test]
fn pure_formula_mode_and_marked_points() {
    let st = Stratum::new(StratumKind::Quadratic, vec![3, 3, 3, -1, -1, -1, -1, -1], 2).unwrap();
    let r = ekz_sum(&st, 5, &Q::zero()).unwrap();
    assert_eq!(r.lyap_sum, &r.kappa_term - &r.pole_term);
    assert_eq!(r.lyap_sum, q(21, 40) - q(25, 40));
    assert_eq!(ekz_sum(&st, 5, &q(1, 10)).unwrap().lyap_sum, Q::zero());

    let marked = Stratum::new(StratumKind::Quadratic, vec![3, 3, 3, 0, -1, -1, -1, -1, -1], 2).unwrap();
    assert_eq!(kappa_term(&marked), kappa_term(&st));
    assert!(ekz_sum(&st, 4, &Q::zero()).is_err());
}
