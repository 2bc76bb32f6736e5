use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::decomposition::{horizontal_cylinders, MarkedPoints};
use crate::coverings::{cyclic_to_pillow, CyclicCoverSpec};
use crate::error::{Error, Result};
use crate::orbit::{enumerate_orbit, DeckSurface, OrbitGraph};
use crate::permsurf::{PillowCover, Stratum, StratumKind};
use crate::rational::{self, q, q_int, Q};

/// Normalization of the combinatorial Siegel–Veech term, `1/2`.
///
/// The cylinder sum is taken on the orientation double cover, whose area
/// is twice that of the pillow-tiled surface. [`calibrate_sv_normalization`]
/// re-derives the constant from surfaces with known exponents.
pub fn sv_normalization() -> Q {
    q(1, 2)
}

/// Average of `Σ h/w` over the orbit, cylinders taken on the double cover.
///
/// A vertex without involution stands for a double cover that splits into
/// two copies of the surface and therefore counts twice. For an orbit of
/// plain origamis this makes `sv_term` the usual abelian Siegel–Veech
/// contribution.
pub fn raw_cylinder_average(g: &OrbitGraph) -> Q {
    let total: Q = g
        .vertices
        .par_iter()
        .map(|s| {
            let weight = if s.involution.is_some() { 1 } else { 2 };
            horizontal_cylinders(&s.origami, MarkedPoints::Singular).modulus_sum() * q_int(weight)
        })
        .reduce(Q::zero, |a, b| a + b);
    total / q_int(g.size() as i64)
}

/// `κ_sv · (1/|G|) Σ_{o ∈ G} Σ_cyl h/w`.
pub fn sv_term(g: &OrbitGraph) -> Q {
    sv_normalization() * raw_cylinder_average(g)
}

/// `(1/24) Σ m(m+4)/(m+2)` over orders `m >= 0`.
pub fn kappa_term(stratum: &Stratum) -> Q {
    stratum
        .orders
        .iter()
        .filter(|&&m| m >= 0)
        .map(|&m| q(m * (m + 4), m + 2))
        .sum::<Q>()
        / q_int(24)
}

/// Exact Lyapunov sum `λ⁺₁ + … + λ⁺_g` with its ingredients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EKZReport {
    pub stratum: String,
    pub stratum_orders: Vec<i64>,
    pub n: usize,
    #[serde(with = "rational::text")]
    pub kappa_term: Q,
    #[serde(with = "rational::text")]
    pub pole_term: Q,
    #[serde(with = "rational::text")]
    pub sv_term: Q,
    #[serde(with = "rational::text")]
    pub lyap_sum: Q,
    /// `(2g - 2, Σ m/(m+2), residual)`, summing to `n`.
    #[serde(with = "rational::text_vec")]
    pub decomposition: Vec<Q>,
    /// `residual / sv_term`; equals 12 whenever the Lyapunov sum vanishes.
    #[serde(with = "rational::text_opt")]
    pub residual_over_sv: Option<Q>,
    /// `[2g - 2, 2g - 2 + Σ m/(m+2), n]`, present when the sum vanishes.
    #[serde(with = "rational::text_vec")]
    pub bound_chain: Vec<Q>,
}

impl EKZReport {
    pub fn is_degenerate(&self) -> bool {
        self.lyap_sum.is_zero()
    }
}

/// `λ⁺ sum = κ - n/8 + sv` in exact arithmetic.
pub fn ekz_sum(stratum: &Stratum, n: usize, sv: &Q) -> Result<EKZReport> {
    if stratum.kind != StratumKind::Quadratic {
        return Err(Error::Consistency(format!("{stratum} is not a quadratic stratum")));
    }
    if stratum.poles() != n {
        return Err(Error::Consistency(format!(
            "n = {n} but {stratum} has {} simple poles",
            stratum.poles()
        )));
    }
    let kappa = kappa_term(stratum);
    let pole = q(n as i64, 8);
    let lyap = &kappa - &pole + sv;
    let euler = q_int(2 * stratum.genus as i64 - 2);
    let zeros: Q = stratum.zeros().iter().map(|&m| q(m, m + 2)).sum();
    let residual = q_int(n as i64) - &euler - &zeros;
    let residual_over_sv = (!sv.is_zero()).then(|| &residual / sv);
    let bound_chain = if lyap.is_zero() {
        vec![euler.clone(), &euler + &zeros, q_int(n as i64)]
    } else {
        Vec::new()
    };
    Ok(EKZReport {
        stratum: stratum.to_string(),
        stratum_orders: stratum.orders.clone(),
        n,
        kappa_term: kappa,
        pole_term: pole,
        sv_term: sv.clone(),
        lyap_sum: lyap,
        decomposition: vec![euler, zeros, residual],
        residual_over_sv,
        bound_chain,
    })
}

/// Orbit of the double cover of `p` and the resulting EKZ report.
pub fn ekz_for_pillow(p: &PillowCover, cap: usize) -> Result<(OrbitGraph, EKZReport)> {
    let g = enumerate_orbit(&DeckSurface::from_pillow(p), cap)?;
    let st = p.stratum();
    let report = ekz_sum(&st, st.poles(), &sv_term(&g))?;
    Ok((g, report))
}

fn raw_for_spec(n: u32, a: [u32; 4], cap: usize) -> Result<(Stratum, Q)> {
    let (p, _) = cyclic_to_pillow(&CyclicCoverSpec::new(n, a)?);
    let g = enumerate_orbit(&DeckSurface::from_pillow(&p), cap)?;
    Ok((p.stratum(), raw_cylinder_average(&g)))
}

/// Solves for the Siegel–Veech normalization on `(3,1,1,1,3)`, where the
/// Lyapunov sum must vanish, and checks the value on `(5,1,2,2,5)` (sum 0)
/// and on the torus cover `(2,1,1,1,1)` (sum 1). Any disagreement is a
/// calibration error; the result is compared with [`sv_normalization`].
pub fn calibrate_sv_normalization(cap: usize) -> Result<Q> {
    let (st3, raw3) = raw_for_spec(3, [1, 1, 1, 3], cap)?;
    if raw3.is_zero() {
        return Err(Error::Calibration("vanishing cylinder average on (3,1,1,1,3)".into()));
    }
    let target3 = q(st3.poles() as i64, 8) - kappa_term(&st3);
    let kappa = target3 / raw3;
    let checks: [(u32, [u32; 4], Q); 2] = [(5, [1, 2, 2, 5], q_int(0)), (2, [1, 1, 1, 1], q_int(1))];
    for (n, a, expected) in checks {
        let (st, raw) = raw_for_spec(n, a, cap)?;
        let sum = kappa_term(&st) - q(st.poles() as i64, 8) + &kappa * raw;
        if sum != expected {
            return Err(Error::Calibration(format!(
                "normalization {} from (3,1,1,1,3) gives Lyapunov sum {} on ({n},{:?}), expected {}",
                rational::to_text(&kappa),
                rational::to_text(&sum),
                a,
                rational::to_text(&expected)
            )));
        }
    }
    if kappa != sv_normalization() {
        return Err(Error::Calibration(format!(
            "calibrated normalization {} differs from the built-in {}",
            rational::to_text(&kappa),
            rational::to_text(&sv_normalization())
        )));
    }
    debug_assert!(kappa.is_positive());
    Ok(kappa)
}
