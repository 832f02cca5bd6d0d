//! Bifurcation curves `beta_0(c)` and `beta_1(c)`, the CJ point and the
//! turning point of `beta_1`.
//!
//! `beta_0(c)` solves `Z_0(beta, c) = 1`; `beta_1(c)` solves `Z_1(beta, c) = 1`.
//! Both residuals increase with `beta`, so a bracket plus bisection is enough.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::FlowParams;
use crate::transition::{Branch, WaveSystem};

/// Roots above this value are reported as diverged.
pub const BETA_CAP: f64 = 50.0;
pub const DEFAULT_BETA_TOL: f64 = 1e-8;
const MAX_EXPANSIONS: usize = 60;
const COLD_LO: f64 = 0.01;
const COLD_HI: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub c: f64,
    pub beta: f64,
    /// `Z(beta, c) - 1` at the returned root.
    pub residual: f64,
    pub bracket: (f64, f64),
    pub n_evals: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PointFailure {
    Diverged,
    OutsideDomain,
    Failed(String),
}

impl PointFailure {
    pub fn status(&self) -> &'static str {
        match self {
            PointFailure::Diverged => "diverged",
            PointFailure::OutsideDomain => "outside",
            PointFailure::Failed(_) => "failed",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveEntry {
    pub c: f64,
    pub result: std::result::Result<CurvePoint, PointFailure>,
}

impl CurveEntry {
    pub fn beta(&self) -> Option<f64> {
        self.result.as_ref().ok().map(|p| p.beta)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationCurve {
    pub branch: Branch,
    pub entries: Vec<CurveEntry>,
}

impl BifurcationCurve {
    pub fn solved(&self) -> impl Iterator<Item = &CurvePoint> {
        self.entries.iter().filter_map(|e| e.result.as_ref().ok())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceMode {
    /// Continuation along the grid, each solve seeded by its neighbour.
    Sequential,
    /// Independent cold solves spread over `jobs` threads.
    Parallel { jobs: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TurningPoint {
    pub c: f64,
    pub beta: f64,
    /// Every interior local minimum of the sampled curve, as `(c, beta)`.
    pub local_minima: Vec<(f64, f64)>,
}

/// Uniform grid `c_min, c_min + step, ...` up to `c_max` inclusive.
pub fn c_grid(c_min: f64, c_max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(c_max >= c_min) || !c_min.is_finite() || !c_max.is_finite() {
        return Err(Error::InvalidParameter {
            field: "c grid",
            reason: format!("need c_min <= c_max and step > 0, got [{c_min}, {c_max}] step {step}"),
        });
    }
    let n = ((c_max - c_min) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| c_min + k as f64 * step).collect())
}

impl WaveSystem {
    fn branch_residual(&self, branch: Branch, beta: f64, c: f64) -> Result<f64> {
        let flow = FlowParams::new(beta, c);
        let z = match branch {
            Branch::Strong => self.z0(flow)?,
            Branch::Weak => self.z1(flow)?,
        };
        Ok(z - 1.0)
    }

    /// Root of `Z(beta, c) = 1` on one branch.
    ///
    /// A cold solve expands `[0.01, 1]` geometrically; a warm solve starts
    /// from `[0.9 w, 1.1 w]` around the seed `w`.
    pub fn solve_beta(
        &self,
        branch: Branch,
        c: f64,
        beta_tol: f64,
        warm: Option<f64>,
    ) -> Result<CurvePoint> {
        let p = &self.params;
        if !(beta_tol > 0.0) {
            return Err(Error::InvalidParameter {
                field: "beta_tol",
                reason: format!("must be positive, got {beta_tol}"),
            });
        }
        p.equilibria(c)?;
        if branch == Branch::Weak && c >= p.c_star() {
            return Err(Error::Domain(format!(
                "beta_1 undefined for c = {c} >= c_star = {}",
                p.c_star()
            )));
        }
        let mut n_evals = 0usize;
        let mut f = |beta: f64| {
            n_evals += 1;
            self.branch_residual(branch, beta, c)
        };
        let (mut lo, mut hi) = match warm {
            Some(w) if w > 0.0 && w.is_finite() => ((0.9 * w).max(1e-12), (1.1 * w).min(BETA_CAP)),
            _ => (COLD_LO, COLD_HI),
        };
        let mut f_lo = f(lo)?;
        let mut f_hi = f(hi)?;
        let mut expansions = 0;
        while f_lo > 0.0 {
            if expansions == MAX_EXPANSIONS {
                return Err(Error::BracketFailure { c, expansions });
            }
            expansions += 1;
            hi = lo;
            f_hi = f_lo;
            lo *= 0.5;
            f_lo = f(lo)?;
        }
        while f_hi < 0.0 {
            if hi >= BETA_CAP {
                return Err(Error::Diverged { c, cap: BETA_CAP });
            }
            if expansions == MAX_EXPANSIONS {
                return Err(Error::BracketFailure { c, expansions });
            }
            expansions += 1;
            lo = hi;
            f_lo = f_hi;
            hi = (2.0 * hi).min(BETA_CAP);
            f_hi = f(hi)?;
        }
        let bracket = (lo, hi);
        if f_lo == 0.0 {
            hi = lo;
            f_hi = 0.0;
        }
        while hi - lo > beta_tol {
            let mid = 0.5 * (lo + hi);
            let fm = f(mid)?;
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                f_hi = 0.0;
                break;
            }
            if fm < 0.0 {
                lo = mid;
                f_lo = fm;
            } else {
                hi = mid;
                f_hi = fm;
            }
        }
        let (beta, residual) = if f_hi.abs() <= f_lo.abs() {
            (hi, f_hi)
        } else {
            (lo, f_lo)
        };
        Ok(CurvePoint {
            c,
            beta,
            residual,
            bracket,
            n_evals,
        })
    }

    pub fn solve_beta0(&self, c: f64, beta_tol: f64, warm: Option<f64>) -> Result<CurvePoint> {
        self.solve_beta(Branch::Strong, c, beta_tol, warm)
    }

    pub fn solve_beta1(&self, c: f64, beta_tol: f64, warm: Option<f64>) -> Result<CurvePoint> {
        self.solve_beta(Branch::Weak, c, beta_tol, warm)
    }

    fn entry(&self, branch: Branch, c: f64, beta_tol: f64, warm: Option<f64>) -> CurveEntry {
        let result = if branch == Branch::Weak && c >= self.params.c_star() {
            Err(PointFailure::OutsideDomain)
        } else {
            self.solve_beta(branch, c, beta_tol, warm)
                .map_err(|e| match e {
                    Error::Diverged { .. } => PointFailure::Diverged,
                    Error::Domain(_) => PointFailure::OutsideDomain,
                    other => PointFailure::Failed(other.to_string()),
                })
        };
        CurveEntry { c, result }
    }

    /// Solve one branch over a grid of speeds.
    ///
    /// Once `beta_1` has left the cap it is not searched for again further
    /// along the grid; those entries are marked diverged.
    pub fn trace_curve(
        &self,
        branch: Branch,
        grid: &[f64],
        beta_tol: f64,
        mode: TraceMode,
    ) -> BifurcationCurve {
        let mut entries: Vec<CurveEntry> = match mode {
            TraceMode::Sequential => {
                let mut out = Vec::with_capacity(grid.len());
                let mut warm = None;
                for &c in grid {
                    let mut e = self.entry(branch, c, beta_tol, warm);
                    if warm.is_some() && matches!(e.result, Err(PointFailure::Failed(_))) {
                        e = self.entry(branch, c, beta_tol, None);
                    }
                    warm = e.beta();
                    out.push(e);
                }
                out
            }
            TraceMode::Parallel { jobs } => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs.max(1))
                    .build()
                    .expect("thread pool");
                pool.install(|| {
                    grid.par_iter()
                        .map(|&c| self.entry(branch, c, beta_tol, None))
                        .collect()
                })
            }
        };
        if branch == Branch::Weak {
            if let Some(k) = entries
                .iter()
                .position(|e| e.result == Err(PointFailure::Diverged))
            {
                for e in &mut entries[k..] {
                    if e.result.is_ok() {
                        e.result = Err(PointFailure::Diverged);
                    }
                }
            }
        }
        BifurcationCurve { branch, entries }
    }

    /// Both branches over the same grid.
    pub fn trace_curves(
        &self,
        grid: &[f64],
        beta_tol: f64,
        mode: TraceMode,
    ) -> (BifurcationCurve, BifurcationCurve) {
        (
            self.trace_curve(Branch::Strong, grid, beta_tol, mode),
            self.trace_curve(Branch::Weak, grid, beta_tol, mode),
        )
    }

    /// The CJ point `(c_cj, beta_cj)`, where `beta_0` and `beta_1` meet.
    pub fn find_cj_point(&self, beta_tol: f64) -> Result<(f64, f64)> {
        let c_cj = self.params.cj_velocity();
        let b0 = self.solve_beta0(c_cj, beta_tol, None)?.beta;
        // both equilibria coincide at c_cj, so the weak branch must close onto it
        let b1 = self.solve_beta1(c_cj, beta_tol, None)?.beta;
        if (b1 - b0).abs() > 10.0 * beta_tol {
            return Err(Error::Inconsistent(format!(
                "branches do not meet at c_cj: beta_0 = {b0}, beta_1 = {b1}"
            )));
        }
        Ok((c_cj, b0))
    }
}

/// Minimum of the sampled `beta_1` curve refined by the parabola through
/// the grid minimum and its two neighbours.
pub fn find_turning_point(curve: &BifurcationCurve) -> Result<TurningPoint> {
    let pts: Vec<(f64, f64)> = curve.solved().map(|p| (p.c, p.beta)).collect();
    if pts.len() < 3 {
        return Err(Error::NoInteriorMinimum);
    }
    let local_minima: Vec<(f64, f64)> = pts
        .windows(3)
        .filter(|w| w[1].1 < w[0].1 && w[1].1 <= w[2].1)
        .map(|w| w[1])
        .collect();
    let (k, _) = pts
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .expect("non-empty");
    if k == 0 || k == pts.len() - 1 {
        return Err(Error::NoInteriorMinimum);
    }
    let (c, beta) = parabola_vertex(pts[k - 1], pts[k], pts[k + 1]);
    Ok(TurningPoint {
        c,
        beta,
        local_minima,
    })
}

fn parabola_vertex((x0, y0): (f64, f64), (x1, y1): (f64, f64), (x2, y2): (f64, f64)) -> (f64, f64) {
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let a = (d12 - d01) / (x2 - x0);
    if a <= 0.0 {
        return (x1, y1);
    }
    let b = d01 - a * (x0 + x1);
    let xv = -b / (2.0 * a);
    let yv = y1 + a * (xv - x1) * (xv - x1) + (b + 2.0 * a * x1) * (xv - x1);
    (xv, yv)
}
