use serde::{Deserialize, Serialize};

use super::cyclic::CoverReport;
use crate::permsurf::Stratum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundStatus {
    Pass,
    Fail,
    Skipped,
}

/// One inequality `lhs >= rhs` together with its outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub status: BoundStatus,
    /// `None` when the check did not apply.
    pub pass: Option<bool>,
    pub lhs: i64,
    pub rhs: i64,
}

impl BoundCheck {
    fn evaluate(name: &str, applies: bool, lhs: i64, rhs: i64) -> BoundCheck {
        let status = match (applies, lhs >= rhs) {
            (false, _) => BoundStatus::Skipped,
            (true, true) => BoundStatus::Pass,
            (true, false) => BoundStatus::Fail,
        };
        let pass = applies.then_some(lhs >= rhs);
        BoundCheck { name: name.to_string(), status, pass, lhs, rhs }
    }
}

/// The inequalities every surface in the determinant locus must satisfy.
///
/// * `pole_count`: `n >= max(2g - 2, 2)`, for `g >= 1`.
/// * `degree`: `d >= 3(g - 1)`, only for covers branched over all four
///   corners (the three-point p-family violates it for `p >= 11`).
/// * `unbranched_pole`: a Galois cover has a corner it is unbranched over.
///
/// With `degenerate = false` every check is reported as skipped.
pub fn check_bounds(r: &CoverReport, degenerate: bool) -> Vec<BoundCheck> {
    let g = r.genus as i64;
    vec![
        BoundCheck::evaluate("pole_count", degenerate && g >= 1, r.n as i64, (2 * g - 2).max(2)),
        BoundCheck::evaluate(
            "degree",
            degenerate && r.branch_count == 4,
            r.degree as i64,
            3 * (g - 1),
        ),
        BoundCheck::evaluate(
            "unbranched_pole",
            degenerate && r.galois,
            r.unbranched_corners.len() as i64,
            1,
        ),
    ]
}

/// `n - (2g - 2)`, the slack in the pole-count bound.
pub fn pole_gap(r: &CoverReport) -> i64 {
    r.n as i64 - (2 * r.genus as i64 - 2)
}

/// JSON record for one input line of the `bounds` command.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundVerdict {
    pub spec: String,
    pub genus: u32,
    pub stratum: String,
    pub stratum_orders: Vec<i64>,
    pub n: usize,
    pub degenerate: bool,
    pub checks: Vec<BoundCheck>,
}

impl BoundVerdict {
    pub fn new(spec: String, r: &CoverReport, degenerate: bool) -> BoundVerdict {
        let stratum: &Stratum = &r.stratum;
        BoundVerdict {
            spec,
            genus: r.genus,
            stratum: stratum.to_string(),
            stratum_orders: stratum.orders.clone(),
            n: r.n,
            degenerate,
            checks: check_bounds(r, degenerate),
        }
    }

    /// True unless some applicable check failed.
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.status != BoundStatus::Fail)
    }
}
