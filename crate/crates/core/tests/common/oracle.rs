//! Independent reference integrators for tests.
//!
//! Deliberately shares nothing with the library's quadrature path: adaptive
//! Gauss–Kronrod (7/15) with recursive bisection, plus a power series for the
//! Fresnel-type kernel integral.

#![allow(dead_code, clippy::excessive_precision)]

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    (rk * h, ((rk - rg) * h).abs())
}

fn adapt(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (whole, err) = gk15(f, a, b);
    if err <= tol || depth >= 60 {
        return whole;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth + 1) + adapt(f, m, b, 0.5 * tol, depth + 1)
}

/// Adaptive Gauss–Kronrod integral of a real function, absolute tolerance `tol`.
/// The interval is pre-split into `pieces` to give the recursion a start on
/// oscillatory integrands.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let pieces = 64usize;
    let w = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let lo = a + w * i as f64;
            let hi = if i + 1 == pieces { b } else { lo + w };
            adapt(f, lo, hi, tol / pieces as f64, 0)
        })
        .sum()
}

/// Real and imaginary parts of a complex integrand, integrated separately.
pub fn integrate_complex(f: &dyn Fn(f64) -> (f64, f64), a: f64, b: f64, tol: f64) -> (f64, f64) {
    let re = integrate(&|x| f(x).0, a, b, tol);
    let im = integrate(&|x| f(x).1, a, b, tol);
    (re, im)
}

/// Fresnel integrals in the 1/sqrt(2 pi) * int_0^x trig(t)/sqrt(t) dt
/// normalization, after t = u^2 removes the endpoint singularity.
pub fn fresnel(x: f64) -> (f64, f64) {
    let k = (2.0 / std::f64::consts::PI).sqrt();
    let r = x.sqrt();
    let c = integrate(&|u| (u * u).cos(), 0.0, r, 1e-14);
    let s = integrate(&|u| (u * u).sin(), 0.0, r, 1e-14);
    (k * c, k * s)
}

/// int_0^1 exp(i x^2) dx = sum_n i^n / (n! (2n + 1)).
pub fn kernel_unit_series() -> (f64, f64) {
    let (mut re, mut im) = (0.0, 0.0);
    let mut fact = 1.0;
    for n in 0..40 {
        if n > 0 {
            fact *= n as f64;
        }
        let t = 1.0 / (fact * (2 * n + 1) as f64);
        match n % 4 {
            0 => re += t,
            1 => im += t,
            2 => re -= t,
            _ => im -= t,
        }
    }
    (re, im)
}
