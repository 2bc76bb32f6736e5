//! Monte-Carlo estimation of Lyapunov exponents.
//!
//! A random direction is encoded by the continued-fraction digits
//! `a1, a2, …` of a uniform random slope. The renormalizing moves are
//! `T^{a1}`, `L^{a2}`, `T^{a3}`, … with `L = [[1, 0], [1, 1]]`, realized as
//! `S⁻¹ T^{-a} S`. Frames of the invariant and anti-invariant parts of
//! `H₁` are pushed along the induced walk on the orbit graph and
//! re-orthonormalized periodically; exponents are log-growth rates divided
//! by the growth rate of the tautological plane, whose exponent is 1.

use std::fmt::Write as _;

use nalgebra::{DMatrix, Matrix2, Vector2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cocycle::OrbitCocycle;
use crate::error::{Error, Result};
use crate::orbit::{enumerate_orbit, DeckSurface, Move, OrbitGraph};
use crate::permsurf::PillowCover;

/// Frames are re-orthonormalized after this many moves by default.
pub const DEFAULT_REORTHO: usize = 20;
/// A block standard error above this marks the estimate as unconverged.
pub const STDERR_ALARM: f64 = 0.05;
const GAUSS_RESEED: f64 = 1e-10;
const OVERFLOW_GUARD: f64 = 1e6;
/// Digits at least this large are followed by an immediate re-orthonormalization.
const LARGE_DIGIT: u64 = 1000;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceRow {
    pub seed: u64,
    pub block: usize,
    pub digits: usize,
    pub lambda_plus: Vec<f64>,
    pub lambda_minus: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LyapunovEstimate {
    /// The `g` exponents of the invariant part, nonincreasing.
    pub lambda_plus: Vec<f64>,
    /// Exponents of the anti-invariant part, nonincreasing.
    pub lambda_minus: Vec<f64>,
    pub stderr_plus: Vec<f64>,
    pub stderr_minus: Vec<f64>,
    /// Number of continued-fraction digits consumed.
    pub steps: usize,
    pub seed: u64,
    pub blocks: usize,
    /// Growth of the tautological plane per digit, before normalization.
    pub taut_slope: f64,
    /// `(max - min) / mean` of the per-block tautological slopes.
    pub taut_slope_spread: f64,
    pub converged: bool,
    pub diagnostics: Vec<String>,
    #[serde(skip)]
    pub trace: Vec<TraceRow>,
}

impl LyapunovEstimate {
    pub fn sum_plus(&self) -> f64 {
        self.lambda_plus.iter().sum()
    }

    pub fn max_plus(&self) -> f64 {
        self.lambda_plus.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Per-block partial exponents of several runs as CSV.
pub fn trace_csv(estimates: &[LyapunovEstimate]) -> String {
    let width_p = estimates.iter().map(|e| e.lambda_plus.len()).max().unwrap_or(0);
    let width_m = estimates.iter().map(|e| e.lambda_minus.len()).max().unwrap_or(0);
    let mut out = String::from("seed,block,digits");
    for i in 1..=width_p {
        let _ = write!(out, ",lambda_plus_{i}");
    }
    for i in 1..=width_m {
        let _ = write!(out, ",lambda_minus_{i}");
    }
    out.push('\n');
    for row in estimates.iter().flat_map(|e| &e.trace) {
        let _ = write!(out, "{},{},{}", row.seed, row.block, row.digits);
        for x in row.lambda_plus.iter().chain(&row.lambda_minus) {
            let _ = write!(out, ",{x:.6}");
        }
        out.push('\n');
    }
    out
}

/// A frame of `k` vectors in an `n`-dimensional coordinate space with the
/// accumulated logarithms of the Gram–Schmidt diagonal.
struct Frame {
    vectors: DMatrix<f64>,
    logs: Vec<f64>,
}

impl Frame {
    fn orthonormalize(&mut self, projector: Option<&DMatrix<f64>>) -> Result<()> {
        if let Some(p) = projector {
            self.vectors = p * &self.vectors;
        }
        let k = self.vectors.ncols();
        for j in 0..k {
            for i in 0..j {
                let r = self.vectors.column(i).dot(&self.vectors.column(j));
                let qi = self.vectors.column(i).clone_owned();
                self.vectors.column_mut(j).axpy(-r, &qi, 1.0);
            }
            let norm = self.vectors.column(j).norm();
            if !(norm.is_finite() && norm > 0.0) {
                return Err(Error::Numerical(format!("frame collapsed (column {j}, norm {norm})")));
            }
            self.logs[j] += norm.ln();
            self.vectors.column_mut(j).scale_mut(1.0 / norm);
        }
        Ok(())
    }
}

/// The orbit of a pillow cover with everything the walk needs, shared by
/// all seeds.
pub struct CocycleWalk {
    pub graph: OrbitGraph,
    pub cocycle: OrbitCocycle,
    /// Floating copies of the step matrices, `[S, T, S⁻¹, T⁻¹]`.
    float_steps: Vec<[DMatrix<f64>; 4]>,
    /// Product of the cocycle once around the `T` (resp. `T⁻¹`) cycle
    /// through each vertex, and the cycle length.
    t_cycles: Vec<[(DMatrix<f64>, usize); 2]>,
    orientable: bool,
}

fn slot(g: Move) -> usize {
    match g {
        Move::S => 0,
        Move::T => 1,
        Move::SInv => 2,
        Move::TInv => 3,
    }
}

fn move_matrix(g: Move) -> Matrix2<f64> {
    let m = g.matrix();
    Matrix2::new(m[0][0] as f64, m[0][1] as f64, m[1][0] as f64, m[1][1] as f64)
}

fn matrix_power(m: &DMatrix<f64>, mut e: u64) -> DMatrix<f64> {
    let n = m.nrows();
    let mut result = DMatrix::<f64>::identity(n, n);
    let mut base = m.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = &base * &result;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    result
}

impl CocycleWalk {
    pub fn new(p: &PillowCover, cap: usize) -> Result<Self> {
        let graph = enumerate_orbit(&DeckSurface::from_pillow(p), cap)?;
        CocycleWalk::from_graph(graph)
    }

    pub fn from_graph(graph: OrbitGraph) -> Result<Self> {
        let cocycle = OrbitCocycle::new(&graph)?;
        let n = graph.size();
        let float_steps: Vec<[DMatrix<f64>; 4]> = (0..n)
            .map(|u| [Move::S, Move::T, Move::SInv, Move::TInv].map(|g| cocycle.step(u, g).0.map(|x| x as f64)))
            .collect();
        let rank = cocycle.rank();
        let t_cycles = (0..n)
            .map(|u| {
                [Move::T, Move::TInv].map(|g| {
                    let mut prod = DMatrix::<f64>::identity(rank, rank);
                    let mut w = u;
                    let mut len = 0;
                    loop {
                        prod = &float_steps[w][slot(g)] * &prod;
                        w = cocycle.step(w, g).1;
                        len += 1;
                        if w == u {
                            break;
                        }
                    }
                    (prod, len)
                })
            })
            .collect();
        let orientable = graph.vertices[graph.base].involution.is_none();
        Ok(CocycleWalk { graph, cocycle, float_steps, t_cycles, orientable })
    }

    pub fn is_orientable(&self) -> bool {
        self.orientable
    }

    /// One seeded run of `steps` digits split into `blocks` blocks.
    pub fn run(&self, steps: usize, seed: u64, blocks: usize, reortho: usize) -> Result<LyapunovEstimate> {
        if blocks < 2 || steps < blocks {
            return Err(Error::Precondition(format!("need steps >= blocks >= 2 (steps {steps}, blocks {blocks})")));
        }
        let reortho = reortho.max(1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.cocycle.rank();
        let mut u = self.graph.base;

        let dims = match &self.cocycle.splittings[u] {
            Some(sp) => vec![sp.dim_plus, sp.dim_minus],
            None => vec![n],
        };
        let mut frames: Vec<Frame> = dims
            .iter()
            .map(|&k| Frame {
                vectors: DMatrix::from_fn(n, k, |_, _| rng.random::<f64>() - 0.5),
                logs: vec![0.0; k],
            })
            .collect();
        let projectors = |u: usize| -> Vec<Option<&DMatrix<f64>>> {
            match &self.cocycle.splittings[u] {
                Some(sp) => vec![Some(&sp.p_plus), Some(&sp.p_minus)],
                None => vec![None],
            }
        };
        for (f, p) in frames.iter_mut().zip(projectors(u)) {
            f.orthonormalize(p)?;
            f.logs.iter_mut().for_each(|x| *x = 0.0);
        }
        let mut taut = Vector2::new(rng.random::<f64>() + 0.5, rng.random::<f64>() + 0.5);
        taut /= taut.norm();
        let mut taut_log = 0.0f64;

        let mut x: f64 = fresh_slope(&mut rng);
        let mut since_ortho = 0usize;
        let mut block_rows: Vec<(Vec<f64>, Vec<Vec<f64>>, usize)> = Vec::with_capacity(blocks);
        let mut last_taut = 0.0;
        let mut last_logs: Vec<Vec<f64>> = frames.iter().map(|f| f.logs.clone()).collect();
        let mut trace = Vec::new();
        let mut cumulative_taut = 0.0;
        let mut cumulative_logs: Vec<Vec<f64>> = dims.iter().map(|&k| vec![0.0; k]).collect();

        for b in 0..blocks {
            let start = b * steps / blocks;
            let end = (b + 1) * steps / blocks;
            for k in start..end {
                let inv = 1.0 / x;
                let a = inv.floor();
                x = inv - a;
                if x < GAUSS_RESEED {
                    x = fresh_slope(&mut rng);
                }
                let a = a as u64;
                if k % 2 == 0 {
                    self.shear(&mut u, Move::T, a, &mut frames, &mut taut);
                } else {
                    self.single(&mut u, Move::SInv, &mut frames, &mut taut);
                    self.shear(&mut u, Move::TInv, a, &mut frames, &mut taut);
                    self.single(&mut u, Move::S, &mut frames, &mut taut);
                }
                since_ortho += if k % 2 == 0 { 1 } else { 3 };
                let big = frames.iter().any(|f| f.vectors.amax() > OVERFLOW_GUARD);
                if since_ortho >= reortho || big || a >= LARGE_DIGIT {
                    since_ortho = 0;
                    for (f, p) in frames.iter_mut().zip(projectors(u)) {
                        f.orthonormalize(p)?;
                    }
                    let t = taut.norm();
                    taut_log += t.ln();
                    taut /= t;
                }
            }
            for (f, p) in frames.iter_mut().zip(projectors(u)) {
                f.orthonormalize(p)?;
            }
            let t = taut.norm();
            taut_log += t.ln();
            taut /= t;
            since_ortho = 0;

            let d_taut = taut_log - last_taut;
            let d_logs: Vec<Vec<f64>> =
                frames.iter().zip(&last_logs).map(|(f, l)| f.logs.iter().zip(l).map(|(a, b)| a - b).collect()).collect();
            last_taut = taut_log;
            last_logs = frames.iter().map(|f| f.logs.clone()).collect();
            cumulative_taut += d_taut;
            for (c, dl) in cumulative_logs.iter_mut().zip(&d_logs) {
                for (ci, di) in c.iter_mut().zip(dl) {
                    *ci += di;
                }
            }
            let partial: Vec<Vec<f64>> =
                cumulative_logs.iter().map(|l| symmetrized(l, cumulative_taut)).collect();
            trace.push(TraceRow {
                seed,
                block: b,
                digits: end,
                lambda_plus: partial[0].clone(),
                lambda_minus: partial.get(1).unwrap_or(&partial[0]).clone(),
            });
            block_rows.push((vec![d_taut], d_logs, end - start));
        }

        let total_logs: Vec<Vec<f64>> = cumulative_logs;
        let finals: Vec<Vec<f64>> = total_logs.iter().map(|l| symmetrized(l, cumulative_taut)).collect();
        let per_block: Vec<Vec<Vec<f64>>> = block_rows
            .iter()
            .map(|(dt, dl, _)| dl.iter().map(|l| symmetrized(l, dt[0])).collect())
            .collect();
        let stderr: Vec<Vec<f64>> = (0..finals.len())
            .map(|s| {
                (0..finals[s].len())
                    .map(|i| {
                        let xs: Vec<f64> = per_block.iter().map(|pb| pb[s][i]).collect();
                        standard_error(&xs)
                    })
                    .collect()
            })
            .collect();
        let slopes: Vec<f64> = block_rows.iter().map(|(dt, _, len)| dt[0] / *len as f64).collect();
        let mean_slope = cumulative_taut / steps as f64;
        let spread = (slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            - slopes.iter().copied().fold(f64::INFINITY, f64::min))
            / mean_slope;

        let (lambda_plus, stderr_plus) = (finals[0].clone(), stderr[0].clone());
        let (lambda_minus, stderr_minus) = match finals.get(1) {
            Some(m) => (m.clone(), stderr[1].clone()),
            None => (lambda_plus.clone(), stderr_plus.clone()),
        };
        let mut diagnostics = Vec::new();
        if mean_slope.is_nan() || mean_slope <= 0.0 {
            diagnostics.push(format!("tautological slope {mean_slope} is not positive"));
        }
        if spread > 0.2 {
            diagnostics.push(format!("tautological slope varies by {:.1}% across blocks", 100.0 * spread));
        }
        let worst = stderr_plus.iter().chain(&stderr_minus).copied().fold(0.0, f64::max);
        if worst > STDERR_ALARM {
            diagnostics.push(format!("block standard error {worst:.3} exceeds {STDERR_ALARM}"));
        }
        if let Some(x) = lambda_plus.iter().chain(&lambda_minus).find(|x| !(-0.05..=1.05).contains(*x)) {
            diagnostics.push(format!("exponent {x:.4} outside [-0.05, 1.05]"));
        }
        Ok(LyapunovEstimate {
            lambda_plus,
            lambda_minus,
            stderr_plus,
            stderr_minus,
            steps,
            seed,
            blocks,
            taut_slope: mean_slope,
            taut_slope_spread: spread,
            converged: diagnostics.is_empty(),
            diagnostics,
            trace,
        })
    }

    fn single(&self, u: &mut usize, g: Move, frames: &mut [Frame], taut: &mut Vector2<f64>) {
        let m = &self.float_steps[*u][slot(g)];
        for f in frames.iter_mut() {
            f.vectors = m * &f.vectors;
        }
        *taut = move_matrix(g) * *taut;
        *u = self.cocycle.step(*u, g).1;
    }

    /// `g^a` for `g = T` or `T⁻¹`, using the cycle product for full turns.
    fn shear(&self, u: &mut usize, g: Move, a: u64, frames: &mut [Frame], taut: &mut Vector2<f64>) {
        let (cycle, len) = &self.t_cycles[*u][if g == Move::T { 0 } else { 1 }];
        let (turns, rest) = (a / *len as u64, a % *len as u64);
        if turns > 0 {
            let power = matrix_power(cycle, turns);
            for f in frames.iter_mut() {
                f.vectors = &power * &f.vectors;
            }
            let shift = if g == Move::T { 1.0 } else { -1.0 } * (turns * *len as u64) as f64;
            *taut = Matrix2::new(1.0, shift, 0.0, 1.0) * *taut;
        }
        for _ in 0..rest {
            self.single(u, g, frames, taut);
        }
    }

    /// Runs every seed in parallel.
    pub fn run_seeds(&self, steps: usize, seeds: &[u64], blocks: usize, reortho: usize) -> Result<Vec<LyapunovEstimate>> {
        seeds.par_iter().map(|&s| self.run(steps, s, blocks, reortho)).collect()
    }
}

fn fresh_slope(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let x: f64 = rng.random();
        if x > GAUSS_RESEED {
            return x;
        }
    }
}

/// Sorts the log-growths, pairs the `i`-th largest with the `i`-th
/// smallest, and returns `(μ_i - μ_{k+1-i}) / (2 τ)` for the top half.
fn symmetrized(logs: &[f64], taut: f64) -> Vec<f64> {
    let mut m = logs.to_vec();
    m.sort_by(|a, b| b.total_cmp(a));
    let k = m.len();
    (0..k / 2).map(|i| (m[i] - m[k - 1 - i]) / (2.0 * taut)).collect()
}

fn standard_error(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (var / n).sqrt()
}

/// One Monte-Carlo run for a pillow cover; `block` is the number of blocks.
pub fn run_monte_carlo(p: &PillowCover, steps: usize, seed: u64, block: usize) -> Result<LyapunovEstimate> {
    if block < 10 {
        return Err(Error::Precondition(format!("at least 10 blocks required, got {block}")));
    }
    CocycleWalk::new(p, crate::orbit::DEFAULT_ORBIT_CAP)?.run(steps, seed, block, DEFAULT_REORTHO)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: u32, a: [u32; 4]) -> PillowCover {
        crate::coverings::cyclic_to_pillow(&crate::coverings::CyclicCoverSpec::new(n, a).unwrap()).0
    }

    #[test]
    fn symmetrization() {
        assert_eq!(symmetrized(&[-2.0, 2.0, 0.5, -0.5], 2.0), vec![1.0, 0.25]);
    }

    #[test]
    fn torus_control_is_one() {
        let est = run_monte_carlo(&cyclic(2, [1, 1, 1, 1]), 4000, 7, 10).unwrap();
        assert_eq!(est.lambda_plus.len(), 1);
        assert!((est.lambda_plus[0] - 1.0).abs() < 0.02, "{:?}", est.lambda_plus);
    }

    #[test]
    fn reproducible() {
        let walk = CocycleWalk::new(&cyclic(5, [1, 2, 2, 5]), 1000).unwrap();
        let a = walk.run(2000, 3, 10, DEFAULT_REORTHO).unwrap();
        let b = walk.run(2000, 3, 10, DEFAULT_REORTHO).unwrap();
        assert_eq!(a.lambda_plus, b.lambda_plus);
        assert_eq!(a.lambda_minus, b.lambda_minus);
        assert_eq!(a.lambda_plus.len(), 2);
        assert!(a.max_plus() < 0.05, "{:?}", a.lambda_plus);
        assert!((a.lambda_minus[0] - 1.0).abs() < 0.05, "{:?}", a.lambda_minus);
    }

    #[test]
    fn too_few_blocks() {
        assert!(matches!(run_monte_carlo(&cyclic(2, [1, 1, 1, 1]), 1000, 1, 5), Err(Error::Precondition(_))));
    }
}
