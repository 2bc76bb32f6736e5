//! Integration over the Riemann sphere of integrands with algebraic
//! singularities at a known finite set of centers.
//!
//! A Shepard partition of unity with weights `(ρ_c / |z - c|)^p` (and
//! `(|z| / R)^p` for `∞`) is real-analytic away from the centers and equal
//! to 1 to order `p` at its own center, so each piece `ψ_c F` is singular
//! only at `c`. Each piece is integrated in polar coordinates about its
//! center: Gauss–Jacobi in the radius with the weight `r^{μ+1}` matching
//! the local exponent `μ`, composite Gauss–Legendre in `log r` further out,
//! and the trapezoidal rule in the angle. The piece at `∞` uses the chart
//! `s = 1/z`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Order of the Shepard weights.
const SHEPARD_POWER: i32 = 12;
const PANEL_NODES: usize = 10;
/// Outer radius of each piece relative to the size of the configuration.
const FAR_FACTOR: f64 = 20.0;

/// Nodes and weights on `[0, 1]` for the weight `x^β`, `β > -1`, by the
/// Golub–Welsch eigenvalue method.
pub fn gauss_jacobi(n: usize, beta: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if beta.is_nan() || beta <= -1.0 || n == 0 {
        return Err(Error::Precondition(format!("Gauss–Jacobi needs n > 0 and β > -1 (n={n}, β={beta})")));
    }
    // Jacobi polynomials with (α, β) = (0, β) on [-1, 1], weight (1 + x)^β
    let (a, b) = (0.0f64, beta);
    let mut jm = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        jm[(k, k)] = if k == 0 { (b - a) / (a + b + 2.0) } else { (b * b - a * a) / (s * (s + 2.0)) };
        if k + 1 < n {
            let k1 = kf + 1.0;
            let s1 = 2.0 * k1 + a + b;
            let off = (4.0 * k1 * (k1 + a) * (k1 + b) * (k1 + a + b) / (s1 * s1 * (s1 + 1.0) * (s1 - 1.0))).sqrt();
            jm[(k, k + 1)] = off;
            jm[(k + 1, k)] = off;
        }
    }
    let mu0 = 2f64.powf(b + 1.0) / (b + 1.0);
    let eig = SymmetricEigen::new(jm);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let x = eig.eigenvalues[k];
            let w = mu0 * eig.eigenvectors[(0, k)].powi(2);
            // map to [0, 1]: (1 + x)^β dx = 2^{β+1} u^β du
            ((1.0 + x) / 2.0, w / 2f64.powf(b + 1.0))
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    Ok(pairs.into_iter().unzip())
}

/// Resolution of one pass; every parameter doubles (or grows) with the level.
#[derive(Debug, Clone, Copy)]
pub struct Resolution {
    pub jacobi_nodes: usize,
    pub angles: usize,
    pub panels: usize,
}

impl Resolution {
    pub fn level(l: u32) -> Self {
        Resolution { jacobi_nodes: 8 + 8 * l as usize, angles: 32 << l, panels: 8 << l }
    }
}

/// The partition of unity and the geometry of the pieces.
#[derive(Debug, Clone)]
pub struct Partition {
    pub finite: Vec<Complex64>,
    /// Distance from each finite center to its nearest neighbour.
    pub spacing: Vec<f64>,
    /// Scale of the weight at `∞`.
    pub outer: f64,
}

impl Partition {
    pub fn new(finite: Vec<Complex64>) -> Result<Self> {
        if finite.is_empty() {
            return Err(Error::Precondition("at least one finite center is required".into()));
        }
        let spacing: Vec<f64> = finite
            .iter()
            .map(|c| {
                finite
                    .iter()
                    .filter(|d| *d != c)
                    .map(|d| (c - d).norm())
                    .fold(f64::INFINITY, f64::min)
                    .min(1.0)
            })
            .collect();
        if spacing.iter().any(|&s| s.is_nan() || s <= 0.0) {
            return Err(Error::Geometry("coincident quadrature centers".into()));
        }
        let outer = finite.iter().zip(&spacing).map(|(c, s)| c.norm() + s).fold(1.0, f64::max);
        Ok(Partition { finite, spacing, outer })
    }

    /// `ψ` of the piece `which` (finite index, or `None` for `∞`) at `z`.
    fn weight(&self, which: Option<usize>, z: Complex64) -> f64 {
        let half = SHEPARD_POWER / 2;
        let w = |k: Option<usize>| -> f64 {
            match k {
                Some(i) => (self.spacing[i] * self.spacing[i] / (z - self.finite[i]).norm_sqr()).powi(half),
                None => (z.norm_sqr() / (self.outer * self.outer)).powi(half),
            }
        };
        let own = w(which);
        if own.is_infinite() {
            return 1.0;
        }
        let mut total = 0.0;
        for k in (0..self.finite.len()).map(Some).chain(std::iter::once(None)) {
            let wk = w(k);
            if wk.is_infinite() {
                return 0.0;
            }
            total += wk;
        }
        own / total
    }

    /// `∫ F dA` over the sphere for a vector-valued `F` of length `dim`,
    /// given in the coordinate `z` and written into its output slice. The
    /// exponents give `|F| ~ |z - c|^μ` at each finite center and
    /// `|F| ~ |z|^D` at `∞`; components may differ from these by integer
    /// powers. Returns the total and the contribution of each piece, `∞`
    /// last.
    pub fn integrate<F>(
        &self,
        f: &F,
        dim: usize,
        mu: &[f64],
        degree_at_infinity: f64,
        res: Resolution,
    ) -> Result<(Vec<Complex64>, Vec<Vec<Complex64>>)>
    where
        F: Fn(Complex64, &mut [Complex64]) + Sync,
    {
        let mut parts = Vec::with_capacity(self.finite.len() + 1);
        for (i, &c) in self.finite.iter().enumerate() {
            let inner = self.spacing[i] / 2.0;
            let outer = FAR_FACTOR * self.outer;
            let piece = |r: f64, theta: f64, out: &mut [Complex64]| -> bool {
                let z = c + Complex64::from_polar(r, theta);
                let psi = self.weight(Some(i), z);
                if psi < 1e-300 {
                    return false;
                }
                f(z, out);
                out.iter_mut().for_each(|v| *v *= psi);
                true
            };
            parts.push(polar(&piece, dim, mu[i], inner, outer, res)?);
        }
        // s = 1/z, dA_z = |s|^{-4} dA_s; near s = 0 the exponent is -D - 4
        let mu_inf = -degree_at_infinity - 4.0;
        let inner = 1.0 / (2.0 * self.outer);
        let min_spacing = self.spacing.iter().copied().fold(f64::INFINITY, f64::min);
        let outer = FAR_FACTOR * self.outer.max(1.0 / min_spacing);
        let piece = |r: f64, theta: f64, out: &mut [Complex64]| -> bool {
            let z = Complex64::from_polar(r, theta).inv();
            let psi = self.weight(None, z);
            if psi < 1e-300 {
                return false;
            }
            f(z, out);
            let factor = psi / r.powi(4);
            out.iter_mut().for_each(|v| *v *= factor);
            true
        };
        parts.push(polar(&piece, dim, mu_inf, inner, outer, res)?);
        let mut total = vec![Complex64::new(0.0, 0.0); dim];
        for part in &parts {
            for (t, v) in total.iter_mut().zip(part) {
                *t += v;
            }
        }
        Ok((total, parts))
    }
}

/// `∫_0^∞ ∫_0^{2π} g(r, θ) r dθ dr` with `|g| ~ r^μ` at `r = 0`. `g`
/// writes its value and returns false where it vanishes.
fn polar<G>(g: &G, dim: usize, mu: f64, inner: f64, outer: f64, res: Resolution) -> Result<Vec<Complex64>>
where
    G: Fn(f64, f64, &mut [Complex64]) -> bool,
{
    if mu.is_nan() || mu <= -2.0 {
        return Err(Error::Precondition(format!("integrand exponent {mu} is not integrable in the plane")));
    }
    let m = res.angles;
    let dtheta = 2.0 * PI / m as f64;
    let mut total = vec![Complex64::new(0.0, 0.0); dim];
    let mut value = vec![Complex64::new(0.0, 0.0); dim];
    let mut ring = |r: f64, weight: f64, total: &mut [Complex64]| {
        for j in 0..m {
            if g(r, dtheta * (j as f64 + 0.5), &mut value) {
                for (t, v) in total.iter_mut().zip(&value) {
                    *t += v * (weight * dtheta);
                }
            }
        }
    };
    // [0, inner]: weight r^{μ+1}
    let (x, w) = gauss_jacobi(res.jacobi_nodes, mu + 1.0)?;
    let scale = inner.powf(mu + 2.0);
    for (xi, wi) in x.iter().zip(&w) {
        let r = inner * xi;
        ring(r, wi * scale / r.powf(mu), &mut total);
    }
    // [inner, outer] in t = log r: r dr = r² dt
    let (gx, gw) = gauss_jacobi(PANEL_NODES, 0.0)?;
    let (t0, t1) = (inner.ln(), outer.ln());
    let h = (t1 - t0) / res.panels as f64;
    for p in 0..res.panels {
        let a = t0 + h * p as f64;
        for (xi, wi) in gx.iter().zip(&gw) {
            let r = (a + h * xi).exp();
            ring(r, r * r * h * wi, &mut total);
        }
    }
    Ok(total)
}
