use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::coverings::{CyclicCoverSpec, SphereDifferential, SpherePoint};
use crate::error::{Error, Result};

const COINCIDENCE_TOL: f64 = 1e-12;

/// The curve `w^N = Π (z - z_i)^{a_i}` over the Riemann sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperellipticCurve {
    pub n: u32,
    pub points: Vec<Complex64>,
    pub exponents: Vec<u32>,
}

impl SuperellipticCurve {
    pub fn new(n: u32, points: Vec<Complex64>, exponents: Vec<u32>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Datum(format!("N = {n}, expected at least 2")));
        }
        if points.len() != exponents.len() || points.is_empty() {
            return Err(Error::Datum(format!("{} points but {} exponents", points.len(), exponents.len())));
        }
        if let Some(&a) = exponents.iter().find(|&&a| a == 0 || a > n) {
            return Err(Error::Datum(format!("exponent {a} outside 0 < a <= {n}")));
        }
        if exponents.iter().fold(n, |g, &a| g.gcd(&a)) != 1 {
            return Err(Error::Datum("gcd of the exponents and N is not 1; the curve is disconnected".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::Geometry(format!("branch point {p} is not finite")));
            }
            if points[..i].iter().any(|q| (p - q).norm() < COINCIDENCE_TOL) {
                return Err(Error::Geometry(format!("branch point {p} is repeated")));
            }
        }
        Ok(SuperellipticCurve { n, points, exponents })
    }

    /// `w^2 = Π (z - z_i)`.
    pub fn hyperelliptic(points: Vec<Complex64>) -> Result<Self> {
        let k = points.len();
        SuperellipticCurve::new(2, points, vec![1; k])
    }

    /// The cyclic cover `(N, a1, a2, a3, a4)` with branch values `0, 1, ∞, t`
    /// in that order; the exponent at infinity is implied by the others.
    pub fn from_cyclic(spec: &CyclicCoverSpec, t: Complex64) -> Result<Self> {
        let [a1, a2, _, a4] = spec.a;
        SuperellipticCurve::new(spec.n, vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), t], vec![a1, a2, a4])
    }

    /// Exponent over `∞` in `[0, N)`; zero means unbranched.
    pub fn exponent_at_infinity(&self) -> u32 {
        let total: u64 = self.exponents.iter().map(|&a| a as u64).sum();
        ((self.n as u64 - total % self.n as u64) % self.n as u64) as u32
    }

    pub fn total_exponent(&self) -> u64 {
        self.exponents.iter().map(|&a| a as u64).sum()
    }

    /// `N / gcd(N, a)`, the ramification index over a point with exponent `a`.
    pub fn ramification(&self, a: u32) -> u32 {
        self.n / self.n.gcd(&a)
    }

    /// Riemann–Hurwitz: `2g - 2 = -2N + Σ (N - gcd(N, a_i))` over all
    /// branch values including `∞`.
    pub fn genus(&self) -> usize {
        let n = self.n as i64;
        let defect: i64 = self
            .exponents
            .iter()
            .copied()
            .chain(std::iter::once(self.exponent_at_infinity()))
            .map(|a| n - n.gcd(&(a as i64)))
            .sum();
        ((defect - 2 * n + 2) / 2) as usize
    }
}

/// `z^r Π (z - z_i)^{⌊b a_i / N⌋} w^{-b} dz` with its orders of vanishing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenForm {
    pub r: u32,
    pub b: u32,
    /// `⌊b a_i / N⌋` per finite branch point.
    pub floors: Vec<u32>,
    /// Order at each point over `z_i`, then over `∞`.
    pub valuations: Vec<i64>,
}

impl EigenForm {
    /// Zeros of the polynomial factor as `(point, multiplicity)` pairs.
    pub fn polynomial(&self, c: &SuperellipticCurve) -> Vec<(Complex64, i32)> {
        let mut out: Vec<(Complex64, i32)> =
            c.points.iter().zip(&self.floors).filter(|(_, &f)| f > 0).map(|(&p, &f)| (p, f as i32)).collect();
        if self.r > 0 {
            let origin = Complex64::new(0.0, 0.0);
            match out.iter_mut().find(|(p, _)| p.norm() < COINCIDENCE_TOL) {
                Some(entry) => entry.1 += self.r as i32,
                None => out.push((origin, self.r as i32)),
            }
        }
        out
    }

    pub fn degree(&self) -> u32 {
        self.r + self.floors.iter().sum::<u32>()
    }
}

/// Orders of `z^r Π (z - z_i)^{f_i} w^{-b} dz` at the points over each `z_i`
/// and over `∞`, in the local parameter `t` with `z - z_i = t^e` (resp.
/// `1/z = t^e`). Multiplying through by `N` keeps everything integral.
fn valuations(c: &SuperellipticCurve, r: u32, b: u32, floors: &[u32]) -> Vec<i64> {
    let n = c.n as i64;
    let mut out: Vec<i64> = c
        .points
        .iter()
        .zip(&c.exponents)
        .zip(floors)
        .map(|((p, &a), &f)| {
            let e = c.ramification(a) as i64;
            let at_origin = if p.norm() < COINCIDENCE_TOL { r as i64 } else { 0 };
            // e (f + [z_i = 0] r) - e b a / N + e - 1
            (e * (f as i64 + at_origin) * n - e * b as i64 * a as i64 + (e - 1) * n) / n
        })
        .collect();
    let e = c.ramification(c.exponent_at_infinity()) as i64;
    let big_f: i64 = floors.iter().map(|&f| f as i64).sum();
    let total = c.total_exponent() as i64;
    // z ~ t^{-e}: order e (b A / N - F - r - 1) - 1
    out.push((e * (b as i64 * total - n * (big_f + r as i64 + 1)) - n) / n);
    out
}

/// A basis of holomorphic one-forms by valuation arithmetic: for each
/// character `b`, the admissible `r` are those keeping the order at `∞`
/// nonnegative. The count is checked against Riemann–Hurwitz.
pub fn holomorphic_basis(c: &SuperellipticCurve) -> Result<Vec<EigenForm>> {
    let n = c.n;
    let mut basis = Vec::new();
    for b in 1..n {
        let floors: Vec<u32> = c.exponents.iter().map(|&a| b * a / n).collect();
        for r in 0.. {
            let v = valuations(c, r, b, &floors);
            if v[v.len() - 1] < 0 {
                break;
            }
            if let Some(bad) = v.iter().find(|&&x| x < 0) {
                return Err(Error::Internal(format!("form r={r} b={b} has order {bad} at a finite point")));
            }
            basis.push(EigenForm { r, b, floors: floors.clone(), valuations: v });
        }
    }
    let g = c.genus();
    if basis.len() != g {
        return Err(Error::Internal(format!("valuation count gives {} forms, Riemann–Hurwitz genus is {g}", basis.len())));
    }
    Ok(basis)
}

/// The quadratic differential `Q(z) w^s dz²` on the curve, `Q` rational.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftedQuadratic {
    pub base: SphereDifferential,
    pub w_power: i32,
}

impl LiftedQuadratic {
    /// Pullback of a differential on the sphere.
    pub fn pullback(base: SphereDifferential) -> Self {
        LiftedQuadratic { base, w_power: 0 }
    }

    /// `w^{-1} dz²` on a hyperelliptic curve; the hyperelliptic involution
    /// negates it.
    pub fn anti_invariant() -> Self {
        let base = SphereDifferential::new(Complex64::new(1.0, 0.0), Vec::new()).expect("constant differential");
        LiftedQuadratic { base, w_power: -1 }
    }

    /// Orders on the curve at the points over every finite branch point, at
    /// the other finite zeros and poles of `Q`, and over `∞`.
    pub fn orders(&self, c: &SuperellipticCurve) -> Vec<(SpherePoint, i64)> {
        let n = c.n as i64;
        let s = self.w_power as i64;
        let mut out = Vec::new();
        for (&p, &a) in c.points.iter().zip(&c.exponents) {
            let e = c.ramification(a) as i64;
            let k = self.base.order_at(SpherePoint::Finite(p));
            out.push((SpherePoint::Finite(p), (e * k * n + e * s * a as i64) / n + 2 * (e - 1)));
        }
        for &(p, k) in &self.base.factors {
            if !c.points.iter().any(|z| (z - p).norm() < COINCIDENCE_TOL) {
                out.push((SpherePoint::Finite(p), k));
            }
        }
        let e = c.ramification(c.exponent_at_infinity()) as i64;
        let k_inf = self.base.order_at(SpherePoint::Infinity);
        let total = c.total_exponent() as i64;
        // Q dz² has order k_inf in 1/z, w^s contributes -s A / N
        out.push((SpherePoint::Infinity, (e * k_inf * n - e * s * total) / n + 2 * (e - 1)));
        out
    }

    pub fn has_simple_pole(&self, c: &SuperellipticCurve) -> bool {
        self.orders(c).iter().any(|o| o.1 == -1)
    }
}
