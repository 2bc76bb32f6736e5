use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::montecarlo::{CocycleWalk, DEFAULT_REORTHO};
use crate::coverings::{cyclic_to_pillow, is_determinant_locus, CyclicCoverSpec};
use crate::cylinders::{ekz_sum, sv_term};
use crate::error::{Error, Result};
use crate::orbit::DEFAULT_ORBIT_CAP;
use crate::permsurf::PillowCover;
use crate::rational;

pub const DEFAULT_EPSILON: f64 = 0.02;
pub const DEFAULT_STEPS: usize = 100_000;
pub const DEFAULT_SEEDS: usize = 5;
pub const DEFAULT_BLOCKS: usize = 20;

/// What is being certified.
#[derive(Debug, Clone)]
pub enum CertifyInput {
    Cyclic(CyclicCoverSpec),
    Pillow(PillowCover),
}

impl fmt::Display for CertifyInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertifyInput::Cyclic(s) => write!(f, "{s}"),
            CertifyInput::Pillow(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    pub epsilon: f64,
    pub steps: usize,
    pub seeds: Vec<u64>,
    pub blocks: usize,
    pub orbit_cap: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            epsilon: DEFAULT_EPSILON,
            steps: DEFAULT_STEPS,
            seeds: (1..=DEFAULT_SEEDS as u64).collect(),
            blocks: DEFAULT_BLOCKS,
            orbit_cap: DEFAULT_ORBIT_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// The evidence channels disagree; the certificate is void.
    Contradiction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolicCriterion {
    pub degenerate: bool,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub input: String,
    /// Closed-form criterion, present for cyclic data.
    pub criterion: Option<SymbolicCriterion>,
    /// `λ⁺` per seed.
    pub exponents: Vec<Vec<f64>>,
    pub stderr: Vec<Vec<f64>>,
    pub seeds: Vec<u64>,
    pub steps: usize,
    pub epsilon: f64,
    pub max_exponent: f64,
    /// Exact Lyapunov sum as a fraction string.
    pub exact_sum: Option<String>,
    pub verdict: Verdict,
    pub contradictions: Vec<String>,
    pub diagnostics: Vec<String>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Certifies full degeneracy of the `λ⁺` spectrum from two independent
/// channels, the Monte-Carlo estimate over several seeds and the exact
/// Lyapunov sum, plus the closed-form criterion for cyclic data. The verdict
/// is PASS when every estimate is below `ε` and the exact sum vanishes.
pub fn certify_degenerate(input: &CertifyInput, opts: &CertifyOptions) -> Result<Certificate> {
    if !(opts.epsilon > 0.0 && opts.epsilon < 0.1) {
        return Err(Error::Precondition(format!("epsilon must lie in (0, 0.1), got {}", opts.epsilon)));
    }
    if opts.seeds.len() < 3 {
        return Err(Error::Precondition(format!("at least 3 seeds required, got {}", opts.seeds.len())));
    }
    let (pillow, criterion) = match input {
        CertifyInput::Cyclic(s) => {
            let v = is_determinant_locus(s)?;
            (cyclic_to_pillow(s).0, Some(SymbolicCriterion { degenerate: v.degenerate, reason: v.reason }))
        }
        CertifyInput::Pillow(p) => (p.clone(), None),
    };

    let walk = CocycleWalk::new(&pillow, opts.orbit_cap)?;
    let stratum = pillow.stratum();
    let exact = ekz_sum(&stratum, stratum.poles(), &sv_term(&walk.graph))?;
    let estimates = walk.run_seeds(opts.steps, &opts.seeds, opts.blocks, DEFAULT_REORTHO)?;

    let max_exponent = estimates.iter().flat_map(|e| e.lambda_plus.iter().copied()).fold(0.0, f64::max);
    let numeric_zero = max_exponent < opts.epsilon;
    let exact_zero = exact.lyap_sum.is_zero();

    let mut contradictions = Vec::new();
    if numeric_zero != exact_zero {
        contradictions.push(format!(
            "Monte-Carlo max λ⁺ = {max_exponent:.4} but exact sum = {}",
            rational::to_text(&exact.lyap_sum)
        ));
    }
    if let Some(c) = &criterion {
        if c.degenerate != exact_zero {
            contradictions.push(format!(
                "closed-form criterion says degenerate = {} but exact sum = {}",
                c.degenerate,
                rational::to_text(&exact.lyap_sum)
            ));
        }
    }
    let verdict = if !contradictions.is_empty() {
        Verdict::Contradiction
    } else if numeric_zero && exact_zero {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let diagnostics = estimates
        .iter()
        .flat_map(|e| e.diagnostics.iter().map(move |d| format!("seed {}: {d}", e.seed)))
        .collect();
    Ok(Certificate {
        input: input.to_string(),
        criterion,
        exponents: estimates.iter().map(|e| e.lambda_plus.clone()).collect(),
        stderr: estimates.iter().map(|e| e.stderr_plus.clone()).collect(),
        seeds: opts.seeds.clone(),
        steps: opts.steps,
        epsilon: opts.epsilon,
        max_exponent,
        exact_sum: Some(rational::to_text(&exact.lyap_sum)),
        verdict,
        contradictions,
        diagnostics,
    })
}
