use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::curve::{EigenForm, LiftedQuadratic, SuperellipticCurve};
use super::quadrature::{Partition, Resolution};
use crate::error::{Error, Result};

const COINCIDENCE_TOL: f64 = 1e-12;
/// Allowed excess of a θ value over 1.
pub const THETA_SLACK: f64 = 1e-3;

#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    /// Absolute tolerance per matrix entry.
    pub tol: f64,
    pub min_level: u32,
    pub max_level: u32,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { tol: 1e-6, min_level: 2, max_level: 6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub n: u32,
    pub points: Vec<[f64; 2]>,
    pub exponents: Vec<u32>,
    pub exponent_at_infinity: u32,
    pub genus: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticSummary {
    pub scale: [f64; 2],
    /// `(point, order)` of the rational factor.
    pub factors: Vec<([f64; 2], i64)>,
    pub w_power: i32,
    pub has_simple_pole: bool,
}

/// B-form and Hodge Gram matrix of a holomorphic basis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BFormReport {
    pub curve: CurveSummary,
    pub q: QuadraticSummary,
    pub basis: Vec<EigenForm>,
    /// `B[α][β] = ∫ αβ/q |q|`, entries as `[re, im]`.
    #[serde(rename = "B")]
    pub b: Vec<Vec<[f64; 2]>>,
    /// `H[α][β] = ∫ α ∧ conj(β)` up to the factor `i/2`.
    #[serde(rename = "H")]
    pub h: Vec<Vec<[f64; 2]>>,
    /// Entries of `B` computed by quadrature; the others vanish by the
    /// character selection rule.
    pub b_computed: Vec<Vec<bool>>,
    pub theta: Vec<f64>,
    /// `1 - θ₁`, reported when `q` has a simple pole.
    pub delta: Option<f64>,
    pub quad_error: f64,
    pub level: u32,
}

fn to_pairs(m: &DMatrix<Complex64>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

fn from_pairs(rows: &[Vec<[f64; 2]>]) -> DMatrix<Complex64> {
    let n = rows.len();
    DMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1]))
}

impl BFormReport {
    pub fn b_matrix(&self) -> DMatrix<Complex64> {
        from_pairs(&self.b)
    }

    pub fn h_matrix(&self) -> DMatrix<Complex64> {
        from_pairs(&self.h)
    }

    pub fn max_b_entry(&self) -> f64 {
        self.b.iter().flatten().map(|e| e[0].hypot(e[1])).fold(0.0, f64::max)
    }
}

/// Singular values of `L⁻¹ B L⁻ᵀ` with `H = L L*`, nonincreasing. These are
/// the moduli of the B-form on Hodge-orthonormal bases.
pub fn theta_spectrum(report: &BFormReport) -> Result<Vec<f64>> {
    theta_from(&report.b_matrix(), &report.h_matrix())
}

fn theta_from(b: &DMatrix<Complex64>, h: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let g = b.nrows();
    if g == 0 {
        return Ok(Vec::new());
    }
    let hs = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let chol = hs
        .cholesky()
        .ok_or_else(|| Error::Numerical("Hodge Gram matrix is not positive definite".into()))?;
    let l = chol.l();
    let l_inv = l
        .solve_lower_triangular(&DMatrix::identity(g, g))
        .ok_or_else(|| Error::Numerical("singular Cholesky factor".into()))?;
    let normalized = &l_inv * b * l_inv.transpose();
    let mut sv: Vec<f64> = normalized.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// What the integrands need at each point.
struct Integrands<'a> {
    curve: &'a SuperellipticCurve,
    q: &'a LiftedQuadratic,
    polys: Vec<Vec<(Complex64, i32)>>,
    bs: Vec<u32>,
}

impl Integrands<'_> {
    /// `Σ (a_i / N) Log(z - z_i)`, the logarithm of one branch of `w`.
    fn log_w(&self, z: Complex64) -> Complex64 {
        let n = self.curve.n as f64;
        self.curve
            .points
            .iter()
            .zip(&self.curve.exponents)
            .map(|(&p, &a)| (z - p).ln() * (a as f64 / n))
            .sum()
    }

    /// `P_α(z) w^{-b_α}` on the branch `exp(log_w)`.
    fn form(&self, k: usize, z: Complex64, log_w: Complex64) -> Complex64 {
        let poly = self.polys[k].iter().fold(Complex64::new(1.0, 0.0), |acc, &(p, m)| acc * (z - p).powi(m));
        poly * (-(self.bs[k] as f64) * log_w).exp()
    }

    /// Fiber sums for every pair in the group: `N` times the value on one
    /// sheet. For the B-form the power of `w` is a multiple of `N`, so one
    /// sheet determines every other.
    fn group(&self, g: &Group, z: Complex64, out: &mut [Complex64]) {
        let lw = self.log_w(z);
        let n = self.curve.n as f64;
        let mut forms = vec![None; self.bs.len()];
        let mut form = |k: usize| *forms[k].get_or_insert_with(|| self.form(k, z, lw));
        match g.kind {
            Kind::Hodge => {
                for (o, &(i, j)) in out.iter_mut().zip(&g.pairs) {
                    *o = form(i) * form(j).conj() * n;
                }
            }
            Kind::BForm => {
                let qz = self.q.base.eval(z);
                let phase = qz.conj() / qz.norm() * Complex64::new(0.0, -(self.q.w_power as f64) * lw.im).exp() * n;
                for (o, &(i, j)) in out.iter_mut().zip(&g.pairs) {
                    *o = form(i) * form(j) * phase;
                }
            }
        }
    }

    fn multiplicity(&self, k: usize, c: Complex64) -> i32 {
        self.polys[k].iter().filter(|(p, _)| (p - c).norm() < COINCIDENCE_TOL).map(|e| e.1).sum()
    }

    /// `|integrand| ~ |z - c|^μ` at each center, for the pair `(i, j)`.
    fn exponents(&self, i: usize, j: usize, centers: &[Complex64]) -> Vec<f64> {
        let n = self.curve.n as f64;
        let bsum = (self.bs[i] + self.bs[j]) as f64;
        centers
            .iter()
            .map(|&c| {
                let a = self
                    .curve
                    .points
                    .iter()
                    .zip(&self.curve.exponents)
                    .find(|(p, _)| (*p - c).norm() < COINCIDENCE_TOL)
                    .map_or(0.0, |(_, &a)| a as f64);
                (self.multiplicity(i, c) + self.multiplicity(j, c)) as f64 - bsum * a / n
            })
            .collect()
    }

    fn degree_at_infinity(&self, i: usize, j: usize) -> f64 {
        let deg = |k: usize| self.polys[k].iter().map(|e| e.1).sum::<i32>() as f64;
        let total = self.curve.total_exponent() as f64;
        deg(i) + deg(j) - (self.bs[i] + self.bs[j]) as f64 * total / self.curve.n as f64
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Hodge,
    BForm,
}

/// Entries of one kind whose characters sum to the same value. Their
/// integrands share the branch of `w` and differ only by polynomial factors,
/// so they are integrated together.
struct Group {
    kind: Kind,
    pairs: Vec<(usize, usize)>,
}

impl Group {
    /// Per-center exponent and degree at `∞` that bound every member.
    fn singularities(&self, ctx: &Integrands, centers: &[Complex64]) -> (Vec<f64>, f64) {
        let mut mu = vec![f64::INFINITY; centers.len()];
        let mut deg = f64::NEG_INFINITY;
        for &(i, j) in &self.pairs {
            for (m, e) in mu.iter_mut().zip(ctx.exponents(i, j, centers)) {
                *m = m.min(e);
            }
            deg = deg.max(ctx.degree_at_infinity(i, j));
        }
        (mu, deg)
    }
}

/// B and H with the character selection rule applied exactly and the
/// remaining entries by quadrature, refined until consecutive levels agree
/// to `tol`. Fails with a quadrature error naming the worst entry and
/// piece if `max_level` is reached first.
pub fn pairing_matrices(
    c: &SuperellipticCurve,
    q: &LiftedQuadratic,
    basis: &[EigenForm],
    opts: &QuadratureOptions,
) -> Result<BFormReport> {
    let orders = q.orders(c);
    if let Some((p, o)) = orders.iter().find(|o| o.1 < -1) {
        return Err(Error::Precondition(format!("q has a pole of order {} at {p:?}; only simple poles are allowed", -o)));
    }
    let ctx = Integrands {
        curve: c,
        q,
        polys: basis.iter().map(|f| f.polynomial(c)).collect(),
        bs: basis.iter().map(|f| f.b).collect(),
    };
    let g = basis.len();
    let n = c.n;
    let mut centers: Vec<Complex64> = c.points.clone();
    for &(p, _) in &q.base.factors {
        if !centers.iter().any(|z| (z - p).norm() < COINCIDENCE_TOL) {
            centers.push(p);
        }
    }
    let partition = Partition::new(centers.clone())?;

    let mut groups: Vec<(Kind, u32, Group)> = Vec::new();
    let mut b_computed = vec![vec![false; g]; g];
    let mut add = |kind: Kind, i: usize, j: usize, bsum: u32| match groups.iter_mut().find(|e| e.0 == kind && e.1 == bsum)
    {
        Some(e) => e.2.pairs.push((i, j)),
        None => groups.push((kind, bsum, Group { kind, pairs: vec![(i, j)] })),
    };
    for i in 0..g {
        for j in i..g {
            let bsum = ctx.bs[i] + ctx.bs[j];
            if ctx.bs[i] == ctx.bs[j] {
                add(Kind::Hodge, i, j, bsum);
            }
            let m = bsum as i64 + q.w_power as i64;
            if m.rem_euclid(n as i64) == 0 {
                add(Kind::BForm, i, j, bsum);
                b_computed[i][j] = true;
                b_computed[j][i] = true;
            }
        }
    }
    let groups: Vec<Group> = groups.into_iter().map(|e| e.2).collect();
    let bounds: Vec<(Vec<f64>, f64)> = groups.iter().map(|gr| gr.singularities(&ctx, &centers)).collect();

    // per group: totals, then per piece the vector of entry contributions
    type Values = Vec<(Vec<Complex64>, Vec<Vec<Complex64>>)>;
    let evaluate = |level: u32| -> Result<Values> {
        let res = Resolution::level(level);
        groups
            .par_iter()
            .zip(&bounds)
            .map(|(gr, (mu, deg))| {
                partition.integrate(&|z, out: &mut [Complex64]| ctx.group(gr, z, out), gr.pairs.len(), mu, *deg, res)
            })
            .collect()
    };

    let mut previous = evaluate(opts.min_level.saturating_sub(1).max(1))?;
    let mut level = opts.min_level.max(2);
    let (values, error) = loop {
        let current = evaluate(level)?;
        let scale = current.iter().flat_map(|v| v.0.iter()).map(|v| v.norm()).fold(1.0, f64::max);
        // (change, group, member, piece)
        let mut worst = (0.0f64, 0usize, 0usize, 0usize);
        let mut error = 0.0f64;
        for (k, (cur, prev)) in current.iter().zip(&previous).enumerate() {
            for (a, b) in cur.0.iter().zip(&prev.0) {
                error = error.max((a - b).norm());
            }
            for (piece, (pa, pb)) in cur.1.iter().zip(&prev.1).enumerate() {
                for (m, (a, b)) in pa.iter().zip(pb).enumerate() {
                    let d = (a - b).norm();
                    if d > worst.0 {
                        worst = (d, k, m, piece);
                    }
                }
            }
        }
        let error = error.max(64.0 * f64::EPSILON * scale);
        if error <= opts.tol {
            break (current, error);
        }
        if level >= opts.max_level {
            let gr = &groups[worst.1];
            let (i, j) = gr.pairs[worst.2];
            let piece = if worst.3 < centers.len() { format!("center {}", centers[worst.3]) } else { "∞".to_string() };
            return Err(Error::Quadrature(format!(
                "{} entry ({i}, {j}) changed by {:.3e} > {:.1e} at level {level}; worst cell: polar piece at {piece}",
                if gr.kind == Kind::Hodge { "H" } else { "B" },
                error,
                opts.tol
            )));
        }
        previous = current;
        level += 1;
    };

    let zero = Complex64::new(0.0, 0.0);
    let mut bm = DMatrix::from_element(g, g, zero);
    let mut hm = DMatrix::from_element(g, g, zero);
    for (gr, v) in groups.iter().zip(&values) {
        for (&(i, j), &x) in gr.pairs.iter().zip(&v.0) {
            match gr.kind {
                Kind::Hodge => {
                    hm[(i, j)] = x;
                    hm[(j, i)] = x.conj();
                }
                Kind::BForm => {
                    bm[(i, j)] = x;
                    bm[(j, i)] = x;
                }
            }
        }
    }
    for i in 0..g {
        hm[(i, i)].im = 0.0;
    }
    let theta = theta_from(&bm, &hm)?;
    if let Some(t) = theta.first().filter(|&&t| t > 1.0 + THETA_SLACK) {
        return Err(Error::Numerical(format!("θ₁ = {t} exceeds 1; Cauchy–Schwarz violated by the quadrature")));
    }
    let has_simple_pole = orders.iter().any(|o| o.1 == -1);
    Ok(BFormReport {
        curve: CurveSummary {
            n: c.n,
            points: c.points.iter().map(|p| [p.re, p.im]).collect(),
            exponents: c.exponents.clone(),
            exponent_at_infinity: c.exponent_at_infinity(),
            genus: c.genus(),
        },
        q: QuadraticSummary {
            scale: [q.base.scale.re, q.base.scale.im],
            factors: q.base.factors.iter().map(|(p, k)| ([p.re, p.im], *k)).collect(),
            w_power: q.w_power,
            has_simple_pole,
        },
        basis: basis.to_vec(),
        b: to_pairs(&bm),
        h: to_pairs(&hm),
        b_computed,
        delta: if has_simple_pole { Some(1.0 - theta.first().copied().unwrap_or(0.0)) } else { None },
        theta,
        quad_error: error,
        level,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bform::holomorphic_basis;
    use crate::coverings::{CyclicCoverSpec, SphereDifferential};

    fn report(spec: (u32, [u32; 4]), t: Complex64) -> BFormReport {
        let spec = CyclicCoverSpec::new(spec.0, spec.1).unwrap();
        let curve = SuperellipticCurve::from_cyclic(&spec, t).unwrap();
        let q = LiftedQuadratic::pullback(SphereDifferential::standard(t).unwrap());
        let basis = holomorphic_basis(&curve).unwrap();
        pairing_matrices(&curve, &q, &basis, &QuadratureOptions::default()).unwrap()
    }

    #[test]
    fn torus_saturates_cauchy_schwarz() {
        let r = report((2, [1, 1, 1, 1]), Complex64::new(0.3, 0.0));
        assert_eq!(r.theta.len(), 1);
        assert!((r.theta[0] - 1.0).abs() < 1e-6, "{:?}", r.theta);
        assert!(r.delta.is_none());
    }

    #[test]
    fn simple_pole_gives_gap() {
        // extra simple pole at u and a zero at v, neither a branch point
        let c = |re, im| Complex64::new(re, im);
        let t = c(0.4, 0.3);
        let curve =
            SuperellipticCurve::from_cyclic(&CyclicCoverSpec::new(3, [1, 1, 2, 2]).unwrap(), t).unwrap();
        let base = SphereDifferential::new(
            c(1.0, 0.0),
            vec![(c(0.0, 0.0), -1), (c(1.0, 0.0), -1), (t, -1), (c(-0.7, 0.5), -1), (c(0.5, -0.8), 1)],
        )
        .unwrap();
        let q = LiftedQuadratic::pullback(base);
        assert!(q.has_simple_pole(&curve));
        let basis = holomorphic_basis(&curve).unwrap();
        let r = pairing_matrices(&curve, &q, &basis, &QuadratureOptions::default()).unwrap();
        assert_eq!(r.theta.len(), 2);
        let d = r.delta.unwrap();
        assert!(d > 0.01 && r.theta[0] > 0.05, "{:?}", r.theta);
        let b = r.b_matrix();
        assert!((&b - b.transpose()).norm() == 0.0);
    }
}
