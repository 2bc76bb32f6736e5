use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two finite points closer than this are treated as coincident.
const COINCIDENCE_TOL: f64 = 1e-12;

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

/// A rational quadratic differential `c · Π (z - p_j)^{k_j} dz²` on the
/// sphere, stored in factored form so that orders are exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereDifferential {
    pub scale: Complex64,
    /// Distinct points with nonzero exponents.
    pub factors: Vec<(Complex64, i64)>,
}

impl SphereDifferential {
    pub fn new(scale: Complex64, factors: Vec<(Complex64, i64)>) -> Result<Self> {
        if scale == Complex64::new(0.0, 0.0) || !scale.is_finite() {
            return Err(Error::Geometry("scale must be a finite nonzero number".into()));
        }
        ensure_distinct(factors.iter().map(|f| f.0))?;
        let factors = factors.into_iter().filter(|f| f.1 != 0).collect();
        Ok(SphereDifferential { scale, factors })
    }

    /// `dz² / [z (z - 1) (z - t)]`, simple poles at `0, 1, t, ∞`.
    pub fn standard(t: Complex64) -> Result<Self> {
        SphereDifferential::new(
            Complex64::new(1.0, 0.0),
            vec![(Complex64::new(0.0, 0.0), -1), (Complex64::new(1.0, 0.0), -1), (t, -1)],
        )
    }

    pub fn order_at(&self, p: SpherePoint) -> i64 {
        match p {
            SpherePoint::Infinity => -self.factors.iter().map(|f| f.1).sum::<i64>() - 4,
            SpherePoint::Finite(z) => self
                .factors
                .iter()
                .filter(|f| (f.0 - z).norm() < COINCIDENCE_TOL)
                .map(|f| f.1)
                .sum(),
        }
    }

    /// Every point with nonzero order, finite ones first, then `∞` if
    /// nonzero there.
    pub fn divisor(&self) -> Vec<(SpherePoint, i64)> {
        let mut out: Vec<(SpherePoint, i64)> =
            self.factors.iter().map(|&(z, k)| (SpherePoint::Finite(z), k)).collect();
        let at_inf = self.order_at(SpherePoint::Infinity);
        if at_inf != 0 {
            out.push((SpherePoint::Infinity, at_inf));
        }
        out
    }

    /// Total degree of the divisor; always `-4` on the sphere.
    pub fn degree(&self) -> i64 {
        self.divisor().iter().map(|d| d.1).sum()
    }

    /// The coefficient of `dz²` at a finite point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.factors.iter().fold(self.scale, |acc, &(p, k)| acc * (z - p).powi(k as i32))
    }

    /// Multiplies by a nonzero constant.
    pub fn scaled(&self, c: Complex64) -> Result<Self> {
        SphereDifferential::new(self.scale * c, self.factors.clone())
    }
}

fn ensure_distinct(points: impl Iterator<Item = Complex64>) -> Result<()> {
    let pts: Vec<Complex64> = points.collect();
    if let Some(p) = pts.iter().find(|p| !p.is_finite()) {
        return Err(Error::Geometry(format!("point {p} is not finite")));
    }
    for i in 0..pts.len() {
        for j in 0..i {
            if (pts[i] - pts[j]).norm() < COINCIDENCE_TOL {
                return Err(Error::Geometry(format!("points {} and {} coincide", pts[j], pts[i])));
            }
        }
    }
    Ok(())
}

/// `q = Π (z - y_j)^{m_j} / [z (z - 1) Π (z - x_i)] dz²`: simple poles at
/// `0, 1, x_i` and (by degree count) at `∞`, zeros of order `m_j` at `y_j`.
pub fn sample_base_differential(
    m: &[u32],
    k: u32,
    zeros: &[Complex64],
    poles: &[Complex64],
) -> Result<SphereDifferential> {
    let total: i64 = m.iter().map(|&x| x as i64).sum();
    if total - k as i64 != -4 {
        return Err(Error::Locus(format!("sum of zero orders {total} minus k = {k} is not -4")));
    }
    if zeros.len() != m.len() {
        return Err(Error::Locus(format!("{} zero orders but {} zero positions", m.len(), zeros.len())));
    }
    if poles.len() + 3 != k as usize {
        return Err(Error::Locus(format!("k = {k} needs {} extra poles, got {}", k - 3, poles.len())));
    }
    let mut factors = vec![(Complex64::new(0.0, 0.0), -1), (Complex64::new(1.0, 0.0), -1)];
    factors.extend(poles.iter().map(|&x| (x, -1)));
    factors.extend(zeros.iter().zip(m).map(|(&y, &mj)| (y, mj as i64)));
    SphereDifferential::new(Complex64::new(1.0, 0.0), factors)
}
