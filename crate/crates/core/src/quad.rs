//! Finite-interval quadrature used by the oscillatory engine.
//!
//! Each segment gets a 15-point Gauss–Legendre rule; the estimate is accepted
//! when it agrees with the two-half refinement, otherwise the segment is
//! bisected. Segments come from the caller (phase nodes), so each one holds
//! at most about half an oscillation and the rule converges immediately.

use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;

/// Numerical budget shared by every integrator in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_segments: usize,
    pub acceleration_depth: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_segments: 1_000_000,
            acceleration_depth: 12,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::usage("quadrature tolerances must be positive"));
        }
        if self.max_segments < 1 || self.acceleration_depth < 1 {
            return Err(Error::usage("segment budget and acceleration depth must be >= 1"));
        }
        Ok(())
    }
}

/// Values the integrators can accumulate: `f64` and `Complex64`.
pub trait Scalar:
    Copy + Send + Sync + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(&self) -> f64;
    fn to_complex(self) -> Complex64;
}

impl Scalar for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Scalar for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn to_complex(self) -> Complex64 {
        self
    }
}

const GAUSS_ORDER: usize = 15;

struct GaussRule {
    nodes: [f64; GAUSS_ORDER],
    weights: [f64; GAUSS_ORDER],
}

/// Nodes and weights on [-1, 1] from Newton iteration on P_15.
fn gauss_rule() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GAUSS_ORDER;
        let mut nodes = [0.0; GAUSS_ORDER];
        let mut weights = [0.0; GAUSS_ORDER];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        GaussRule { nodes, weights }
    })
}

/// Plain 15-point Gauss–Legendre on [lo, hi].
pub fn gauss15<T: Scalar>(f: &impl Fn(f64) -> T, lo: f64, hi: f64) -> T {
    let rule = gauss_rule();
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let mut acc = T::default();
    for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
        acc = acc + f(mid + half * x) * (*w);
    }
    acc * half
}

/// Result of a segmented integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral<T> {
    pub value: T,
    pub error_bound: f64,
    /// Top-level segments (before refinement).
    pub segments: usize,
}

fn refine<T: Scalar>(
    f: &(impl Fn(f64) -> T + Sync),
    lo: f64,
    hi: f64,
    whole: T,
    tol: f64,
    rel_tol: f64,
    budget: usize,
    depth: u32,
) -> (T, f64, usize) {
    let mid = 0.5 * (lo + hi);
    let left = gauss15(f, lo, mid);
    let right = gauss15(f, mid, hi);
    let refined = left + right;
    let diff = (refined - whole).magnitude();
    let floor = 64.0 * f64::EPSILON * refined.magnitude().max(1e-300) + 1e-300;
    if diff <= tol.max(rel_tol * refined.magnitude()).max(floor) || budget <= 2 || depth > 40 {
        return (refined, diff, 2);
    }
    let (lv, le, ln) = refine(f, lo, mid, left, 0.5 * tol, rel_tol, budget / 2, depth + 1);
    let (rv, re, rn) = refine(f, mid, hi, right, 0.5 * tol, rel_tol, budget - budget / 2, depth + 1);
    (lv + rv, le + re, ln + rn)
}

/// Per-segment integrals of `f` over `nodes[i]..nodes[i+1]`, each with its
/// refinement error. Segments are independent (parallel when enabled); the
/// output is in segment order.
pub fn segment_values<T: Scalar>(
    f: &(impl Fn(f64) -> T + Sync),
    nodes: &[f64],
    cfg: &QuadratureConfig,
    context: &'static str,
) -> Result<Vec<(T, f64)>> {
    if nodes.len() < 2 {
        return Ok(Vec::new());
    }
    let n_seg = nodes.len() - 1;
    if n_seg > cfg.max_segments {
        return Err(Error::Accuracy {
            context,
            estimate: Complex64::new(f64::NAN, f64::NAN),
            error_bound: f64::INFINITY,
        });
    }
    let seg_tol = cfg.abs_tol / n_seg as f64;
    let per_seg_budget = (cfg.max_segments / n_seg).max(2);
    let pairs: Vec<(f64, f64)> = nodes.windows(2).map(|w| (w[0], w[1])).collect();
    let pieces: Vec<(T, f64, usize)> = exec::map_ordered(&pairs, |&(lo, hi)| {
        if hi == lo {
            return (T::default(), 0.0, 0);
        }
        let whole = gauss15(f, lo, hi);
        refine(f, lo, hi, whole, seg_tol, cfg.rel_tol, per_seg_budget, 0)
    });
    let used: usize = pieces.iter().map(|p| p.2).sum();
    if used > cfg.max_segments {
        let mut est = T::default();
        for p in &pieces {
            est = est + p.0;
        }
        return Err(accuracy(context, est, f64::INFINITY));
    }
    Ok(pieces.into_iter().map(|(v, e, _)| (v, e)).collect())
}

fn accuracy<T: Scalar>(context: &'static str, estimate: T, error_bound: f64) -> Error {
    Error::Accuracy { context, estimate: estimate.to_complex(), error_bound }
}

/// Integrate `f` over consecutive segments `nodes[i]..nodes[i+1]`, summed in
/// segment order.
pub fn integrate_segments<T: Scalar>(
    f: &(impl Fn(f64) -> T + Sync),
    nodes: &[f64],
    cfg: &QuadratureConfig,
    context: &'static str,
) -> Result<Integral<T>> {
    let pieces = segment_values(f, nodes, cfg, context)?;
    let mut value = T::default();
    let mut error_bound = 0.0;
    for (v, e) in &pieces {
        value = value + *v;
        error_bound += e;
    }
    let allowed = cfg.abs_tol + cfg.rel_tol * value.magnitude();
    if !(error_bound <= allowed) {
        return Err(accuracy(context, value, error_bound));
    }
    Ok(Integral { value, error_bound, segments: pieces.len() })
}

/// Split [lo, hi] into `pieces` equal segments.
pub fn uniform_nodes(lo: f64, hi: f64, pieces: usize) -> Vec<f64> {
    let pieces = pieces.max(1);
    (0..=pieces)
        .map(|i| if i == pieces { hi } else { lo + (hi - lo) * i as f64 / pieces as f64 })
        .collect()
}
