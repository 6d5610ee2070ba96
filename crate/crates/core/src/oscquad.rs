//! Oscillatory engine for the quadratic-phase family.
//!
//! Every integrand is reduced to the kernel `e^{i v^2}` by completing the
//! square,
//!
//! ```text
//! a x^2 + beta x = a (x + beta/2a)^2 - beta^2/4a,    v = sqrt(a) (x + beta/2a),
//! ```
//!
//! and weight-x integrands first lose their exact derivative part,
//! `x = (2ax + beta)/2a - beta/2a`. Kernel integrals over finite ranges are
//! split at the phase nodes `v^2 = k pi` and summed in node order. Infinite
//! tails sum the node-to-node pieces, whose partial sums alternate around
//! the limit, and accelerate them by iterated averaging.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::accel;
use crate::closedform::{IntegrandSpec, Trig, Weight};
use crate::error::{Error, Result};
use crate::exec;
use crate::quad::{segment_values, QuadratureConfig};

pub type ComplexValue = Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// First phase node used by the accelerated tail.
const TAIL_START_NODE: f64 = 8.0;
const TAIL_MAX_NODES: usize = 1 << 14;

fn kernel(v: f64) -> Complex64 {
    Complex64::from_polar(1.0, v * v)
}

/// Sorted nodes in [lo, hi] (lo <= hi) at which v^2 is a multiple of pi,
/// including both ends.
fn kernel_nodes(lo: f64, hi: f64) -> Vec<f64> {
    let mut nodes = vec![lo];
    let sq = |k: f64| (k * PI).sqrt();
    if lo < 0.0 {
        // Negative side, walking towards zero: -sqrt(k pi) for k decreasing.
        let k_hi = (lo * lo / PI).floor();
        let k_lo = if hi < 0.0 { (hi * hi / PI).ceil() } else { 0.0 };
        let mut k = k_hi;
        while k >= k_lo {
            let v = -sq(k);
            if v > lo && v < hi {
                nodes.push(v);
            }
            k -= 1.0;
        }
    }
    if hi > 0.0 {
        let k_lo = if lo > 0.0 { (lo * lo / PI).ceil() } else { 0.0 };
        let k_hi = (hi * hi / PI).floor();
        let mut k = k_lo;
        while k <= k_hi {
            let v = sq(k);
            if v > lo && v < hi && v > *nodes.last().unwrap() {
                nodes.push(v);
            }
            k += 1.0;
        }
    }
    if hi > *nodes.last().unwrap() {
        nodes.push(hi);
    }
    nodes
}

fn sum_ordered(pieces: &[(Complex64, f64)]) -> (Complex64, f64) {
    pieces.iter().fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), (pv, pe)| (v + pv, e + pe))
}

/// `int_c^d e^{i x^2} dx` for finite `c <= d`.
pub fn integrate_gauss_kernel(c: f64, d: f64, cfg: &QuadratureConfig) -> Result<ComplexValue> {
    if !(c.is_finite() && d.is_finite()) {
        return Err(Error::domain("kernel limits must be finite"));
    }
    if c > d {
        return Err(Error::domain(format!("kernel limits out of order: {c} > {d}")));
    }
    kernel_between(c, d, cfg)
}

/// Same as [`integrate_gauss_kernel`] but accepts reversed limits.
fn kernel_between(c: f64, d: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    if c == d {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if c > d {
        return kernel_between(d, c, cfg).map(|v| -v);
    }
    let nodes = kernel_nodes(c, d);
    let pieces = segment_values(&kernel, &nodes, cfg, "gauss kernel")?;
    let (value, err) = sum_ordered(&pieces);
    if !(err <= cfg.abs_tol + cfg.rel_tol * value.norm()) {
        return Err(Error::Accuracy { context: "gauss kernel", estimate: value, error_bound: err });
    }
    Ok(value)
}

/// `int_{v0}^inf e^{i v^2} dv`.
pub fn kernel_tail(v0: f64, cfg: &QuadratureConfig) -> Result<ComplexValue> {
    if !v0.is_finite() {
        return Err(Error::domain("tail start must be finite"));
    }
    let k0 = (v0.max(0.0).powi(2) / PI).ceil().max(TAIL_START_NODE);
    let start = (k0 * PI).sqrt();
    let head = kernel_between(v0, start, cfg)?;
    let depth = cfg.acceleration_depth;

    let mut n_nodes = (8 * depth).max(32);
    let mut last_err = f64::INFINITY;
    loop {
        let nodes: Vec<f64> = (0..=n_nodes).map(|j| ((k0 + j as f64) * PI).sqrt()).collect();
        let pieces = segment_values(&kernel, &nodes, cfg, "kernel tail")?;
        let mut partial = Vec::with_capacity(pieces.len() + 1);
        let mut acc = Complex64::new(0.0, 0.0);
        partial.push(acc);
        for (v, _) in &pieces {
            acc += *v;
            partial.push(acc);
        }
        let est = accel::iterated_average_limit(&partial, 1, depth);
        let value = head + est.value;
        if est.error <= 0.1 * cfg.abs_tol {
            return Ok(value);
        }
        if n_nodes >= TAIL_MAX_NODES || est.error >= last_err {
            return Err(Error::Accuracy { context: "kernel tail acceleration", estimate: value, error_bound: est.error });
        }
        last_err = est.error;
        n_nodes *= 2;
    }
}

/// `int_{t0}^{t1} w(x) e^{i(a x^2 + beta x)} dx` through the canonical kernel.
pub fn complex_partial(
    weight: Weight,
    a: f64,
    beta: f64,
    t0: f64,
    t1: f64,
    cfg: &QuadratureConfig,
) -> Result<ComplexValue> {
    let shift = beta / (2.0 * a);
    let root = a.sqrt();
    let rotation = Complex64::from_polar(1.0 / root, -beta * beta / (4.0 * a));
    let plain = rotation * kernel_between(root * (t0 + shift), root * (t1 + shift), cfg)?;
    Ok(match weight {
        Weight::One => plain,
        Weight::X => {
            let phase = |t: f64| Complex64::from_polar(1.0, a * t * t + beta * t);
            (phase(t1) - phase(t0)) / (2.0 * a * I) - shift * plain
        }
    })
}

/// `int_0^inf e^{i(a x^2 + beta x)} dx`.
pub fn complex_improper(a: f64, beta: f64, cfg: &QuadratureConfig) -> Result<ComplexValue> {
    let rotation = Complex64::from_polar(1.0 / a.sqrt(), -beta * beta / (4.0 * a));
    Ok(rotation * kernel_tail(beta / (2.0 * a.sqrt()), cfg)?)
}

/// Direct phase-segmented quadrature of `w(x) e^{i(a x^2 + beta x)}` on
/// [lo, hi], without completing the square. Used for identity checks.
pub fn direct_complex_partial(
    weight: Weight,
    a: f64,
    beta: f64,
    lo: f64,
    hi: f64,
    cfg: &QuadratureConfig,
) -> Result<ComplexValue> {
    if lo > hi {
        return direct_complex_partial(weight, a, beta, hi, lo, cfg).map(|v| -v);
    }
    let shift = beta / (2.0 * a);
    let root = a.sqrt();
    let nodes: Vec<f64> = kernel_nodes(root * (lo + shift), root * (hi + shift))
        .into_iter()
        .map(|v| v / root - shift)
        .collect();
    let f = |x: f64| {
        let w = match weight {
            Weight::One => 1.0,
            Weight::X => x,
        };
        Complex64::from_polar(w, a * x * x + beta * x)
    };
    let pieces = segment_values(&f, &nodes, cfg, "direct quadrature")?;
    Ok(sum_ordered(&pieces).0)
}

/// Real integrand value from the two complex pieces `E(+b)`, `E(-b)`.
fn combine(spec: &IntegrandSpec, plus: Complex64, minus: Complex64) -> f64 {
    let z = match spec.lin_trig {
        Trig::Cos => (plus + minus) * 0.5,
        Trig::Sin => (plus - minus) / (2.0 * I),
    };
    match spec.quad_trig {
        Trig::Cos => z.re,
        Trig::Sin => z.im,
    }
}

/// `int_{t0}^{t1}` of the spec's integrand.
pub fn partial_between(spec: &IntegrandSpec, t0: f64, t1: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let plus = complex_partial(spec.weight, spec.a, spec.b, t0, t1, cfg)?;
    let minus = if spec.b == 0.0 { plus } else { complex_partial(spec.weight, spec.a, -spec.b, t0, t1, cfg)? };
    Ok(combine(spec, plus, minus))
}

/// P(T) = `int_0^T` of the spec's integrand.
pub fn partial_integral(spec: &IntegrandSpec, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain(format!("truncation point must be finite and >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    partial_between(spec, 0.0, t, cfg)
}

/// P(T_k) for an increasing list of truncation points. The increments
/// between consecutive points are independent; they are computed in
/// parallel and accumulated in order.
pub fn cumulative_partials(spec: &IntegrandSpec, ts: &[f64], cfg: &QuadratureConfig) -> Result<Vec<f64>> {
    let mut prev = 0.0;
    let mut intervals = Vec::with_capacity(ts.len());
    for &t in ts {
        if !(t.is_finite() && t >= prev) {
            return Err(Error::domain("truncation points must be finite, nonnegative and increasing"));
        }
        intervals.push((prev, t));
        prev = t;
    }
    let increments: Vec<Result<f64>> =
        exec::map_ordered(&intervals, |&(t0, t1)| if t0 == t1 { Ok(0.0) } else { partial_between(spec, t0, t1, cfg) });
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(ts.len());
    for inc in increments {
        acc += inc?;
        out.push(acc);
    }
    Ok(out)
}

/// `int_0^{x_k} e^{i v^2} dv` for a monotone list of endpoints.
pub fn cumulative_kernel(ends: &[f64], cfg: &QuadratureConfig) -> Result<Vec<Complex64>> {
    let mut prev = 0.0;
    let mut intervals = Vec::with_capacity(ends.len());
    for &x in ends {
        intervals.push((prev, x));
        prev = x;
    }
    let increments: Vec<Result<Complex64>> = exec::map_ordered(&intervals, |&(c, d)| kernel_between(c, d, cfg));
    let mut acc = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(ends.len());
    for inc in increments {
        acc += inc?;
        out.push(acc);
    }
    Ok(out)
}

/// Right side of the integration-by-parts identity for
/// `int_{-T1}^{T2} x e^{i(x^2 + x)} dx`:
///
/// ```text
/// (1/2i) [e^{i(T2^2+T2)} - e^{i(T1^2-T1)}] - (e^{-i/4}/2) int_{1/2-T1}^{T2+1/2} e^{i x^2} dx
/// ```
pub fn ibp_identity_rhs(t1: f64, t2: f64, cfg: &QuadratureConfig) -> Result<ComplexValue> {
    if !(t1 > 0.0 && t2 > 0.0 && t1.is_finite() && t2.is_finite()) {
        return Err(Error::domain("T1 and T2 must be positive and finite"));
    }
    let bracket = (Complex64::from_polar(1.0, t2 * t2 + t2) - Complex64::from_polar(1.0, t1 * t1 - t1)) / (2.0 * I);
    let k = integrate_gauss_kernel(0.5 - t1, t2 + 0.5, cfg)?;
    Ok(bracket - Complex64::from_polar(0.5, -0.25) * k)
}

/// Direct quadrature of `int_{-T1}^{T2} x e^{i(x^2 + x)} dx`, the left side
/// of the identity.
pub fn ibp_identity_lhs(t1: f64, t2: f64, cfg: &QuadratureConfig) -> Result<ComplexValue> {
    direct_complex_partial(Weight::X, 1.0, 1.0, -t1, t2, cfg)
}

/// The two parts of `A_T = int_{-T}^{T} x e^{i(x^2+x)} dx`.
#[derive(Debug, Clone, Copy)]
pub struct SymmetricParts {
    /// `e^{iT^2} sin T`, which never settles.
    pub boundary: ComplexValue,
    /// `(e^{-i/4}/2) int_{1/2-T}^{T+1/2} e^{i x^2} dx`, which tends to
    /// `(sqrt(pi)/2) e^{i(pi-1)/4}`.
    pub convergent: ComplexValue,
}

impl SymmetricParts {
    pub fn total(&self) -> ComplexValue {
        self.boundary - self.convergent
    }
}

pub fn symmetric_partial_parts(t: f64, cfg: &QuadratureConfig) -> Result<SymmetricParts> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain("T must be positive and finite"));
    }
    let boundary = Complex64::from_polar(t.sin(), t * t);
    let convergent = Complex64::from_polar(0.5, -0.25) * integrate_gauss_kernel(0.5 - t, t + 0.5, cfg)?;
    Ok(SymmetricParts { boundary, convergent })
}

/// `A_T`.
pub fn symmetric_partial(t: f64, cfg: &QuadratureConfig) -> Result<ComplexValue> {
    symmetric_partial_parts(t, cfg).map(|p| p.total())
}

/// The non-decaying term left by one integration by parts of a weight-x
/// integrand (upper limit only). `P(T) - B(T)` converges.
pub fn boundary_term(spec: &IntegrandSpec, t: f64) -> Result<f64> {
    if spec.weight != Weight::X {
        return Err(Error::usage("boundary terms are defined for weight-x integrands"));
    }
    let (a, b) = (spec.a, spec.b);
    let q = a * t * t;
    let l = spec.lin_trig.eval(b * t);
    Ok(match spec.quad_trig {
        Trig::Cos => q.sin() * l / (2.0 * a),
        Trig::Sin => -q.cos() * l / (2.0 * a),
    })
}

/// `P(T) - B(T)`.
pub fn residual_partial(spec: &IntegrandSpec, t: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(partial_integral(spec, t, cfg)? - boundary_term(spec, t)?)
}

/// Value of a convergent (weight-one) member of the family on [0, inf).
pub fn improper_value(spec: &IntegrandSpec, cfg: &QuadratureConfig) -> Result<f64> {
    if spec.weight != Weight::One {
        return Err(Error::usage("weight-x integrals diverge; improper_value needs weight one"));
    }
    cfg.validate()?;
    let plus = complex_improper(spec.a, spec.b, cfg)?;
    let minus = if spec.b == 0.0 { plus } else { complex_improper(spec.a, -spec.b, cfg)? };
    Ok(combine(spec, plus, minus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::{eval_convergent_cos_family, purported_value};

    use crate::test_oracle as oracle;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn spec(w: Weight, q: Trig, l: Trig, a: f64, b: f64) -> IntegrandSpec {
        IntegrandSpec::new(w, q, l, a, b).unwrap()
    }

    #[test]
    fn nodes_cover_interval_in_order() {
        for &(lo, hi) in &[(-5.0, 7.0), (0.0, 3.0), (1.0, 1.5), (-3.0, -1.0), (-0.1, 0.1)] {
            let n = kernel_nodes(lo, hi);
            assert_eq!(n[0], lo);
            assert_eq!(*n.last().unwrap(), hi);
            assert!(n.windows(2).all(|w| w[0] < w[1]), "{lo} {hi}: {n:?}");
        }
    }

    #[test]
    fn kernel_empty_and_unit() {
        assert_eq!(integrate_gauss_kernel(0.0, 0.0, &cfg()).unwrap(), Complex64::new(0.0, 0.0));
        let v = integrate_gauss_kernel(0.0, 1.0, &cfg()).unwrap();
        let (re, im) = oracle::kernel_unit_series();
        assert!((v.re - re).abs() < 1e-13 && (v.im - im).abs() < 1e-13);
        assert!(integrate_gauss_kernel(1.0, 0.0, &cfg()).is_err());
    }

    #[test]
    fn kernel_tail_from_zero_is_half_the_limit() {
        let v = kernel_tail(0.0, &cfg()).unwrap();
        let half = crate::fresnel::fresnel_limit() * 0.5;
        assert!((v - half).norm() < 1e-11, "{v}");
        let v = kernel_tail(-2.0, &cfg()).unwrap() - integrate_gauss_kernel(-2.0, 0.0, &cfg()).unwrap();
        assert!((v - half).norm() < 1e-11);
    }

    #[test]
    fn partial_examples() {
        let s = spec(Weight::X, Trig::Sin, Trig::Sin, 1.0, 1.0);
        assert_eq!(partial_integral(&s, 0.0, &cfg()).unwrap(), 0.0);
        let s = spec(Weight::One, Trig::Cos, Trig::Cos, 1.0, 0.0);
        let p = partial_integral(&s, 40.0, &cfg()).unwrap();
        // tail of int cos(x^2) beyond T is bounded by 1/(2T)
        let gap = (p - 0.5 * (PI / 2.0).sqrt()).abs();
        assert!(gap <= 1.0 / 80.0, "{gap}");
        let exact_tail = kernel_tail(40.0, &cfg()).unwrap().re;
        assert!((gap - exact_tail.abs()).abs() < 1e-9);
    }

    #[test]
    fn partial_matches_oracle() {
        for w in [Weight::One, Weight::X] {
            for q in [Trig::Sin, Trig::Cos] {
                for l in [Trig::Sin, Trig::Cos] {
                    let s = spec(w, q, l, 1.3, 0.7);
                    let p = partial_integral(&s, 6.0, &cfg()).unwrap();
                    let o = oracle::integrate(&|x| s.eval(x), 0.0, 6.0, 1e-12);
                    assert!((p - o).abs() < 1e-9, "{}: {p} {o}", s.id());
                }
            }
        }
    }

    #[test]
    fn cumulative_matches_pointwise() {
        let s = spec(Weight::X, Trig::Cos, Trig::Sin, 0.5, 2.0);
        let ts: Vec<f64> = (1..=20).map(|k| k as f64 * 0.9).collect();
        let cum = cumulative_partials(&s, &ts, &cfg()).unwrap();
        for (t, c) in ts.iter().zip(&cum) {
            assert!((partial_integral(&s, *t, &cfg()).unwrap() - c).abs() < 1e-10);
        }
    }

    #[test]
    fn ibp_identity_examples() {
        // equal limits: the bracket is e^{iT^2} sin T
        let t = 2.7;
        let br = (Complex64::from_polar(1.0, t * t + t) - Complex64::from_polar(1.0, t * t - t)) / (2.0 * I);
        assert!((br - Complex64::from_polar(t.sin(), t * t)).norm() < 1e-15);
        let rhs = ibp_identity_rhs(1.0, 1.0, &cfg()).unwrap();
        assert!((rhs - symmetric_partial(1.0, &cfg()).unwrap()).norm() < 1e-14);
        let (re, im) = oracle::integrate_complex(
            &|x| {
                let p = x * x + x;
                (x * p.cos(), x * p.sin())
            },
            -2.0,
            5.0,
            1e-12,
        );
        let rhs = ibp_identity_rhs(2.0, 5.0, &cfg()).unwrap();
        assert!((rhs.re - re).abs() < 1e-8 && (rhs.im - im).abs() < 1e-8);
    }

    #[test]
    fn symmetric_partial_at_pi_has_no_boundary() {
        let parts = symmetric_partial_parts(PI, &cfg()).unwrap();
        assert!(parts.boundary.norm() < 1e-15);
    }

    #[test]
    fn boundary_term_examples() {
        let s = spec(Weight::X, Trig::Cos, Trig::Cos, 1.0, 1.0);
        assert_eq!(boundary_term(&s, 0.0).unwrap(), 0.0);
        let s = spec(Weight::One, Trig::Cos, Trig::Cos, 1.0, 1.0);
        assert!(matches!(boundary_term(&s, 1.0), Err(Error::Usage(_))));
    }

    #[test]
    fn boundary_term_derivative_accounts_for_integrand() {
        // d/dT B(T) + r(T) = integrand, with r the residual integrand left by
        // the integration by parts.
        for q in [Trig::Sin, Trig::Cos] {
            for l in [Trig::Sin, Trig::Cos] {
                let s = spec(Weight::X, q, l, 0.8, 1.7);
                let (a, b) = (s.a, s.b);
                let other = match q {
                    Trig::Sin => Trig::Cos,
                    Trig::Cos => Trig::Sin,
                };
                let dl = |x: f64| match l {
                    Trig::Sin => b * (b * x).cos(),
                    Trig::Cos => -b * (b * x).sin(),
                };
                let primitive_sign = match q {
                    Trig::Sin => -1.0,
                    Trig::Cos => 1.0,
                };
                for k in 1..30 {
                    let t = 0.37 * k as f64;
                    let h = 1e-5;
                    let db = (boundary_term(&s, t + h).unwrap() - boundary_term(&s, t - h).unwrap()) / (2.0 * h);
                    let resid = -primitive_sign * other.eval(a * t * t) / (2.0 * a) * dl(t);
                    assert!((db + resid - s.eval(t)).abs() < 1e-7);
                }
            }
        }
    }

    #[test]
    fn residual_settles_on_purported_value() {
        let s = spec(Weight::X, Trig::Sin, Trig::Sin, 1.0, 2.0);
        let target = purported_value(&s).unwrap().value;
        // average over a full phase period at large T
        let n = 64;
        let t0 = (400.0 * PI).sqrt();
        let mean: f64 = (0..n)
            .map(|k| {
                let t = (t0 * t0 + 2.0 * PI * k as f64 / n as f64).sqrt();
                residual_partial(&s, t, &cfg()).unwrap()
            })
            .sum::<f64>()
            / n as f64;
        assert!((mean - target).abs() < 2e-3, "{mean} {target}");
    }

    #[test]
    fn improper_examples() {
        let s = spec(Weight::One, Trig::Sin, Trig::Cos, 3.1, 2.2);
        let v = improper_value(&s, &cfg()).unwrap();
        let c = eval_convergent_cos_family(3.1, 2.2, Trig::Sin).unwrap().value;
        assert!((v - c).abs() < 1e-9, "{v} {c}");
        let s = spec(Weight::One, Trig::Cos, Trig::Cos, 1.0, 0.0);
        assert!((improper_value(&s, &cfg()).unwrap() - 0.5 * (PI / 2.0).sqrt()).abs() < 1e-9);
        let s = spec(Weight::X, Trig::Cos, Trig::Cos, 1.0, 0.0);
        assert!(matches!(improper_value(&s, &cfg()), Err(Error::Usage(_))));
    }
}
