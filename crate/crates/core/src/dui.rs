//! Numeric check of differentiation under the integral sign.
//!
//! For `F(b) = int_0^inf q(ax^2) l(bx) dx` the formal derivative
//! `int_0^inf d/db[q(ax^2) l(bx)] dx` is a weight-x integral. The interchange
//! is accepted only when that integral converges and matches the outer
//! derivative `F'(b)`. The sup over a band of `b` of the tail between two
//! cutoffs is reported alongside: it stays of order `1/a` for the table
//! families and vanishes for the control.

use serde::Serialize;

use crate::classify::{self, ClassifyOptions, ConvergenceVerdict, GridKind, PartialIntegralTrace, VerdictKind};
use crate::closedform::{self, IntegrandSpec, SourceEq, Trig, Weight};
use crate::error::{Error, Result};
use crate::exec;
use crate::oscquad;
use crate::quad::{self, QuadratureConfig};

/// A parameter-dependent integral whose b-derivative is being probed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DifferentiatedFamily {
    /// `int q(ax^2) l(bx) dx` with `source` one of the weight-one forms.
    Table { source: SourceEq, quad_trig: Trig, a: f64 },
    /// `int e^{-x} cos(bx) dx = 1/(1+b^2)`, where the interchange is legitimate.
    Control,
}

impl DifferentiatedFamily {
    pub fn table(source: SourceEq, quad_trig: Trig, a: f64) -> Result<Self> {
        if source.shape().0 != Weight::One {
            return Err(Error::usage(format!("{source} is not a weight-one form, nothing to differentiate")));
        }
        IntegrandSpec::new(Weight::One, quad_trig, Trig::Cos, a, 1.0)?;
        Ok(DifferentiatedFamily::Table { source, quad_trig, a })
    }

    pub fn label(&self) -> String {
        match self {
            DifferentiatedFamily::Table { source, quad_trig, a } => format!("{source}:{}[a={a}]", quad_trig.name()),
            DifferentiatedFamily::Control => "control:exp(-x)*cos(bx)".into(),
        }
    }

    /// `F(b)`.
    pub fn value(&self, b: f64) -> Result<f64> {
        match *self {
            DifferentiatedFamily::Table { source, quad_trig, a } => {
                let spec = IntegrandSpec::new(Weight::One, quad_trig, source.shape().1, a, b)?;
                Ok(closedform::eval_convergent(&spec)?.value)
            }
            DifferentiatedFamily::Control => Ok(1.0 / (1.0 + b * b)),
        }
    }

    /// Exact `F'(b)`.
    pub fn exact_derivative(&self, b: f64) -> Result<f64> {
        match *self {
            DifferentiatedFamily::Table { source, quad_trig, a } => closedform::closed_form_b_derivative(a, b, source, quad_trig),
            DifferentiatedFamily::Control => Ok(-2.0 * b / ((1.0 + b * b) * (1.0 + b * b))),
        }
    }

    /// Weight-x spec and sign such that the formal derivative is `sign * spec`.
    fn formal_spec(&self, b: f64) -> Result<Option<(f64, IntegrandSpec)>> {
        match *self {
            DifferentiatedFamily::Table { source, quad_trig, a } => {
                // d/db cos(bx) = -x sin(bx), d/db sin(bx) = x cos(bx)
                let (sign, lin) = match source.shape().1 {
                    Trig::Cos => (-1.0, Trig::Sin),
                    Trig::Sin => (1.0, Trig::Cos),
                };
                Ok(Some((sign, IntegrandSpec::new(Weight::X, quad_trig, lin, a, b)?)))
            }
            DifferentiatedFamily::Control => Ok(None),
        }
    }

    /// `int_{t0}^{t1}` of the formal derivative's integrand.
    pub fn formal_between(&self, b: f64, t0: f64, t1: f64, cfg: &QuadratureConfig) -> Result<f64> {
        match self.formal_spec(b)? {
            Some((sign, spec)) => Ok(sign * oscquad::partial_between(&spec, t0, t1, cfg)?),
            None => {
                let f = move |x: f64| -x * (-x).exp() * (b * x).sin();
                let pieces = ((t1 - t0) * (1.0 + b.abs()) / std::f64::consts::PI).ceil().max(1.0) as usize;
                let nodes = quad::uniform_nodes(t0, t1, pieces);
                Ok(quad::integrate_segments(&f, &nodes, cfg, "control derivative")?.value)
            }
        }
    }

    /// Partial-integral trace of the formal derivative.
    pub fn formal_trace(&self, b: f64, t_max: f64, n: usize, cfg: &QuadratureConfig) -> Result<PartialIntegralTrace> {
        match self.formal_spec(b)? {
            Some((sign, spec)) => {
                let tr = classify::build_trace(&spec, t_max, n, GridKind::UniformPhase, cfg)?;
                Ok(if sign < 0.0 { tr.scaled(sign) } else { tr })
            }
            None => {
                if n < classify::MIN_TRACE_SAMPLES || !(t_max > 0.0 && t_max.is_finite()) {
                    return Err(Error::usage("control trace needs T_max > 0 and at least 32 samples"));
                }
                let ts = classify::uniform_t_grid(t_max, n);
                let (ps, annotated) = classify::accumulate(&ts, |t0, t1| self.formal_between(b, t0, t1, cfg))?;
                let mut tr = PartialIntegralTrace::real(format!("d/db {}[b={b}]", self.label()), GridKind::UniformT, 1, &ts, &ps);
                tr.annotated = annotated;
                Ok(tr)
            }
        }
    }
}

/// `sup_{b in [b_lo, b_hi]} |int_{t1}^{t2}|` of the formal derivative, over
/// `n_b` equally spaced values of b.
pub fn uniform_tail_probe(
    family: &DifferentiatedFamily,
    b_lo: f64,
    b_hi: f64,
    n_b: usize,
    t1: f64,
    t2: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(b_lo > 0.0 && b_lo <= b_hi && t1 >= 0.0 && t1 < t2) || n_b < 2 {
        return Err(Error::usage("tail probe needs 0 < b_lo <= b_hi, 0 <= t1 < t2 and n_b >= 2"));
    }
    let bs: Vec<f64> = (0..n_b).map(|k| b_lo + (b_hi - b_lo) * k as f64 / (n_b - 1) as f64).collect();
    let tails = exec::map_ordered_coarse(&bs, |&b| family.formal_between(b, t1, t2, cfg));
    let mut sup: f64 = 0.0;
    for t in tails {
        sup = sup.max(t?.abs());
    }
    Ok(sup)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InterchangeDecision {
    Valid,
    Invalid,
    Inconclusive,
}

impl std::fmt::Display for InterchangeDecision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            InterchangeDecision::Valid => "valid",
            InterchangeDecision::Invalid => "invalid",
            InterchangeDecision::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DuiOptions {
    pub t_max: f64,
    pub samples: usize,
    pub classify: ClassifyOptions,
    /// Central-difference step relative to b.
    pub fd_rel_step: f64,
    /// Allowed gap between the formal limit and `F'(b)`, on top of `classify.tol`.
    pub match_tol: f64,
    pub tail_t1: f64,
    pub tail_t2: f64,
    pub tail_b_samples: usize,
}

impl Default for DuiOptions {
    fn default() -> Self {
        DuiOptions {
            t_max: 40.0,
            samples: 512,
            classify: ClassifyOptions::default(),
            fd_rel_step: 1e-5,
            match_tol: 1e-4,
            tail_t1: 20.0,
            tail_t2: 40.0,
            tail_b_samples: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DuiReport {
    pub family: String,
    pub b: f64,
    /// Central difference of `F`.
    pub outer_derivative: f64,
    pub exact_derivative: f64,
    pub formal_verdict: ConvergenceVerdict,
    pub formal_limit: Option<f64>,
    pub uniform_tail_sup: f64,
    pub decision: InterchangeDecision,
    pub reason: String,
}

pub fn check_interchange(family: &DifferentiatedFamily, b: f64, opts: &DuiOptions, cfg: &QuadratureConfig) -> Result<DuiReport> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::domain("interchange check needs finite b > 0"));
    }
    let h = b * opts.fd_rel_step;
    let outer = (family.value(b + h)? - family.value(b - h)?) / (2.0 * h);
    let exact = family.exact_derivative(b)?;
    let tail_sup = uniform_tail_probe(family, b / 2.0, 2.0 * b, opts.tail_b_samples, opts.tail_t1, opts.tail_t2, cfg)?;
    let trace = family.formal_trace(b, opts.t_max, opts.samples, cfg)?;
    let verdict = classify::classify(&trace, &opts.classify)?;
    let limit = verdict.limit_estimate.map(|z| z.re);

    let (decision, reason) = if !trace.annotated.is_empty() {
        (InterchangeDecision::Inconclusive, "formal trace rests on quadrature that missed its tolerance".to_string())
    } else {
        match (verdict.kind, limit) {
            (VerdictKind::Convergent, Some(l)) => {
                let gap = (l - outer).abs();
                if gap <= opts.match_tol + opts.classify.tol {
                    (InterchangeDecision::Valid, format!("formal integral converges to F'(b), gap {gap:.3e}"))
                } else {
                    (InterchangeDecision::Invalid, format!("formal integral converges but misses F'(b) by {gap:.3e}"))
                }
            }
            (VerdictKind::DivergentBounded, _) | (VerdictKind::DivergentUnbounded, _) => {
                (InterchangeDecision::Invalid, format!("formal integral is {}", verdict.kind))
            }
            _ => (InterchangeDecision::Inconclusive, "formal trace is inconclusive".to_string()),
        }
    };
    Ok(DuiReport {
        family: family.label(),
        b,
        outer_derivative: outer,
        exact_derivative: exact,
        formal_verdict: verdict,
        formal_limit: limit,
        uniform_tail_sup: tail_sup,
        decision,
        reason,
    })
}
