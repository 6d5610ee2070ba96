//! Convergence verdicts from partial-integral traces.
//!
//! A trace is split into geometric windows `(T/2^{j+1}, T/2^j]` ending at its
//! last sample. Per window we record the spread (width of the sample set) of
//! the raw samples and of the accelerated samples. A convergent oscillatory
//! integral shows raw spread shrinking window over window while the
//! accelerated samples have already settled; a bounded divergent one shows
//! raw spread that does not shrink, however well the accelerated samples
//! settle. Iterated averaging of a divergent trace settles too (that is how
//! the table values arise), so the raw trend is what decides.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};

use crate::accel;
use crate::closedform::IntegrandSpec;
use crate::error::{Error, Result};
use crate::exec;
use crate::oscquad;
use crate::quad::QuadratureConfig;

pub const MIN_TRACE_SAMPLES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    UniformT,
    UniformPhase,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    pub t: f64,
    pub p: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartialIntegralTrace {
    pub samples: Vec<TraceSample>,
    /// Whether the imaginary part carries data.
    pub complex: bool,
    pub spec_id: String,
    pub grid_kind: GridKind,
    /// Number of samples over which the grid's quadratic phase advances by pi.
    pub phase_stride: usize,
    /// Indices of samples whose value rests on a quadrature result that
    /// missed its tolerance.
    pub annotated: Vec<usize>,
}

impl PartialIntegralTrace {
    pub fn real(spec_id: impl Into<String>, grid_kind: GridKind, phase_stride: usize, ts: &[f64], ps: &[f64]) -> Self {
        PartialIntegralTrace {
            samples: ts.iter().zip(ps).map(|(&t, &p)| TraceSample { t, p: Complex64::new(p, 0.0) }).collect(),
            complex: false,
            spec_id: spec_id.into(),
            grid_kind,
            phase_stride: phase_stride.max(1),
            annotated: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `c * trace`, same grid.
    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        for s in &mut out.samples {
            s.p *= c;
        }
        out
    }

    fn validate(&self) -> Result<()> {
        if self.samples.len() < MIN_TRACE_SAMPLES {
            return Err(Error::usage(format!(
                "trace has {} samples, classification needs at least {MIN_TRACE_SAMPLES}",
                self.samples.len()
            )));
        }
        if !self.samples.windows(2).all(|w| w[0].t < w[1].t) {
            return Err(Error::usage("trace T values must be strictly increasing"));
        }
        if !self.samples.iter().all(|s| s.t.is_finite() && s.p.re.is_finite() && s.p.im.is_finite()) {
            return Err(Error::usage("trace contains non-finite values"));
        }
        Ok(())
    }
}

/// `n` equally spaced points on (0, t_max].
pub fn uniform_t_grid(t_max: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|k| if k == n { t_max } else { t_max * k as f64 / n as f64 }).collect()
}

/// Sampling points equally spaced in the phase `a T^2`, with the phase
/// offset so that neither `sin(aT^2)` nor `cos(aT^2)` vanishes at a node.
///
/// The phase step is `pi/q` or an odd multiple of `pi`, whichever keeps at
/// least `n` nodes up to `t_max`; the second value returned is the number of
/// samples per half period (`q`, or 1). The node count lies in `[n, 3n)`.
pub fn uniform_phase_grid(a: f64, t_max: f64, n: usize) -> (Vec<f64>, usize) {
    let phase_max = a * t_max * t_max;
    let n = n.max(1);
    let (step, stride) = if phase_max / n as f64 >= PI {
        let mut r = (phase_max / (n as f64 * PI)).floor() as usize;
        if r.is_multiple_of(2) {
            r -= 1;
        }
        (r as f64 * PI, 1usize)
    } else {
        let q = ((n as f64 * PI) / phase_max).ceil() as usize;
        (PI / q as f64, q)
    };
    let offset = if stride == 1 { PI / 4.0 } else { step / 4.0 };
    let count = ((phase_max - offset) / step).floor() as usize + 1;
    let ts = (0..count).map(|k| ((offset + k as f64 * step) / a).sqrt()).collect();
    (ts, stride)
}

fn grid_for(spec: &IntegrandSpec, t_max: f64, n: usize, grid_kind: GridKind) -> (Vec<f64>, usize) {
    match grid_kind {
        GridKind::UniformT => (uniform_t_grid(t_max, n), 1),
        GridKind::UniformPhase => uniform_phase_grid(spec.a, t_max, n),
    }
}

fn check_trace_args(t_max: f64, n: usize) -> Result<()> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::usage("T_max must be positive and finite"));
    }
    if n < MIN_TRACE_SAMPLES {
        return Err(Error::usage(format!("need at least {MIN_TRACE_SAMPLES} samples, got {n}")));
    }
    Ok(())
}

/// Increments between consecutive points, accumulated in order. Increments
/// that miss their tolerance contribute their best estimate and mark every
/// later sample.
pub(crate) fn accumulate(ts: &[f64], f: impl Fn(f64, f64) -> Result<f64> + Sync + Send) -> Result<(Vec<f64>, Vec<usize>)> {
    let mut intervals = Vec::with_capacity(ts.len());
    let mut prev = 0.0;
    for &t in ts {
        intervals.push((prev, t));
        prev = t;
    }
    let incs = exec::map_ordered(&intervals, |&(t0, t1)| f(t0, t1));
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(ts.len());
    let mut annotated = Vec::new();
    let mut tainted = false;
    for (k, inc) in incs.into_iter().enumerate() {
        match inc {
            Ok(v) => acc += v,
            Err(Error::Accuracy { estimate, .. }) if estimate.re.is_finite() => {
                acc += estimate.re;
                tainted = true;
            }
            Err(e) => return Err(e),
        }
        if tainted {
            annotated.push(k);
        }
        out.push(acc);
    }
    Ok((out, annotated))
}

/// Trace of `P(T)` for the spec.
pub fn build_trace(
    spec: &IntegrandSpec,
    t_max: f64,
    n: usize,
    grid_kind: GridKind,
    cfg: &QuadratureConfig,
) -> Result<PartialIntegralTrace> {
    check_trace_args(t_max, n)?;
    let (ts, stride) = grid_for(spec, t_max, n, grid_kind);
    let (ps, annotated) = accumulate(&ts, |t0, t1| oscquad::partial_between(spec, t0, t1, cfg))?;
    let mut trace = PartialIntegralTrace::real(spec.id(), grid_kind, stride, &ts, &ps);
    trace.annotated = annotated;
    Ok(trace)
}

/// Trace of `P(T) - B(T)` for a weight-x spec.
pub fn build_residual_trace(
    spec: &IntegrandSpec,
    t_max: f64,
    n: usize,
    grid_kind: GridKind,
    cfg: &QuadratureConfig,
) -> Result<PartialIntegralTrace> {
    let mut trace = build_trace(spec, t_max, n, grid_kind, cfg)?;
    for s in &mut trace.samples {
        s.p.re -= oscquad::boundary_term(spec, s.t)?;
    }
    trace.spec_id = format!("residual:{}", trace.spec_id);
    Ok(trace)
}

/// Trace of `A_T`, the symmetric partial integral of `x e^{i(x^2+x)}`.
pub fn symmetric_trace(t_max: f64, n: usize, cfg: &QuadratureConfig) -> Result<PartialIntegralTrace> {
    check_trace_args(t_max, n)?;
    let ts = uniform_t_grid(t_max, n);
    let upper: Vec<f64> = ts.iter().map(|t| t + 0.5).collect();
    let lower: Vec<f64> = ts.iter().map(|t| 0.5 - t).collect();
    let ku = oscquad::cumulative_kernel(&upper, cfg)?;
    let kl = oscquad::cumulative_kernel(&lower, cfg)?;
    let rot = Complex64::from_polar(0.5, -0.25);
    let samples = ts
        .iter()
        .zip(ku.iter().zip(&kl))
        .map(|(&t, (u, l))| TraceSample { t, p: Complex64::from_polar(t.sin(), t * t) - rot * (u - l) })
        .collect();
    Ok(PartialIntegralTrace {
        samples,
        complex: true,
        spec_id: "symmetric:x*exp(i(x^2+x))".into(),
        grid_kind: GridKind::UniformT,
        phase_stride: 1,
        annotated: Vec::new(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictKind {
    Convergent,
    DivergentBounded,
    DivergentUnbounded,
    Inconclusive,
}

impl std::fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowOscillation {
    pub t_lo: f64,
    pub t_hi: f64,
    pub samples: usize,
    /// Width of the raw samples in the window.
    pub oscillation: f64,
    /// Width of the accelerated samples in the window.
    pub accelerated_oscillation: f64,
}

fn serialize_complex_opt<S: Serializer>(v: &Option<Complex64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(z) => [z.re, z.im].serialize(s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceVerdict {
    pub kind: VerdictKind,
    /// `[re, im]`; present iff `kind == Convergent`.
    #[serde(serialize_with = "serialize_complex_opt")]
    pub limit_estimate: Option<Complex64>,
    pub limit_error: Option<f64>,
    /// Half the last window's width; present iff `kind == DivergentBounded`.
    pub oscillation_envelope: Option<f64>,
    pub window_report: Vec<WindowOscillation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub tol: f64,
    pub windows: usize,
    pub acceleration_depth: usize,
    /// Windows with fewer samples carry no trend information and are skipped.
    pub min_window_samples: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { tol: 1e-3, windows: 8, acceleration_depth: 12, min_window_samples: 4 }
    }
}

/// Width of a planar point set: the largest extent over 16 projection
/// directions. Exact for real data.
fn width(points: &[Complex64], complex: bool) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let dirs = if complex { 16 } else { 1 };
    (0..dirs)
        .map(|d| {
            let u = Complex64::from_polar(1.0, PI * d as f64 / dirs as f64);
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for p in points {
                let x = p.re * u.re + p.im * u.im;
                lo = lo.min(x);
                hi = hi.max(x);
            }
            hi - lo
        })
        .fold(0.0, f64::max)
}

const DECAY_RATIO: f64 = 0.7;
const DECAY_RATIO_TWO_WINDOWS: f64 = 0.6;
const GROWTH_FACTOR: f64 = 2.0;

pub fn classify(trace: &PartialIntegralTrace, opts: &ClassifyOptions) -> Result<ConvergenceVerdict> {
    trace.validate()?;
    if !(opts.tol > 0.0) || opts.windows < 3 {
        return Err(Error::usage("classifier needs tol > 0 and at least 3 windows"));
    }
    let ts: Vec<f64> = trace.samples.iter().map(|s| s.t).collect();
    let ps: Vec<Complex64> = trace.samples.iter().map(|s| s.p).collect();
    let stride = trace.phase_stride.max(1);
    let acc = accel::iterated_average(&ps, stride, opts.acceleration_depth);
    let lag = (ps.len() - acc.len()) / 2;

    let t_end = *ts.last().unwrap();
    let mut report = Vec::new();
    for j in (0..opts.windows).rev() {
        let hi = t_end / 2f64.powi(j as i32);
        let lo = hi / 2.0;
        let idx: Vec<usize> = (0..ts.len()).filter(|&k| ts[k] > lo && ts[k] <= hi).collect();
        if idx.len() < opts.min_window_samples {
            continue;
        }
        let raw: Vec<Complex64> = idx.iter().map(|&k| ps[k]).collect();
        let accel_pts: Vec<Complex64> = (0..acc.len()).filter(|&k| ts[k + lag] > lo && ts[k + lag] <= hi).map(|k| acc[k]).collect();
        report.push(WindowOscillation {
            t_lo: lo,
            t_hi: hi,
            samples: idx.len(),
            oscillation: width(&raw, trace.complex),
            accelerated_oscillation: width(&accel_pts, trace.complex),
        });
    }

    let inconclusive = |report| ConvergenceVerdict {
        kind: VerdictKind::Inconclusive,
        limit_estimate: None,
        limit_error: None,
        oscillation_envelope: None,
        window_report: report,
    };
    let k = report.len();
    if k < 3 {
        return Ok(inconclusive(report));
    }
    let o: Vec<f64> = report.iter().map(|w| w.oscillation).collect();
    let (o3, o2, o1) = (o[k - 3], o[k - 2], o[k - 1]);
    let tol = opts.tol;
    let slack = 1e-12 * o3.max(o2).max(o1) + 1e-300;

    let settled = o1 < tol && o1 <= o2 + slack && o2 <= o3 + slack;
    // beats between the two linear frequencies can stall one window, so the
    // last window is compared with both predecessors
    let decaying = o1 <= DECAY_RATIO * o2 && o1 <= DECAY_RATIO_TWO_WINDOWS * o3;
    let growing = o3 < o2 && o2 < o1 && o1 >= GROWTH_FACTOR * o3;
    let accel_last = report[k - 1].accelerated_oscillation;

    if accel_last < tol && (settled || decaying) {
        let est = accel::iterated_average_limit(&ps, stride, opts.acceleration_depth);
        return Ok(ConvergenceVerdict {
            kind: VerdictKind::Convergent,
            limit_estimate: Some(est.value),
            limit_error: Some(est.error),
            oscillation_envelope: None,
            window_report: report,
        });
    }
    if growing {
        return Ok(ConvergenceVerdict {
            kind: VerdictKind::DivergentUnbounded,
            limit_estimate: None,
            limit_error: None,
            oscillation_envelope: None,
            window_report: report,
        });
    }
    let mut sorted = o.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let bounded = [o3, o2, o1].iter().all(|&x| x >= tol && x <= 10.0 * median);
    if bounded && !decaying {
        return Ok(ConvergenceVerdict {
            kind: VerdictKind::DivergentBounded,
            limit_estimate: None,
            limit_error: None,
            oscillation_envelope: Some(0.5 * o1),
            window_report: report,
        });
    }
    Ok(inconclusive(report))
}

/// Classify the symmetric partials `A_T`: the Cauchy principal value probe.
pub fn principal_value_probe(t_max: f64, n: usize, cfg: &QuadratureConfig) -> Result<ConvergenceVerdict> {
    classify(&symmetric_trace(t_max, n, cfg)?, &ClassifyOptions { acceleration_depth: cfg.acceleration_depth, ..Default::default() })
}
