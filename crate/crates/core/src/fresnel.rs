//! Fresnel integrals
//!
//! ```text
//! C(x) = 1/sqrt(2 pi) * int_0^x cos(t) / sqrt(t) dt
//! S(x) = 1/sqrt(2 pi) * int_0^x sin(t) / sqrt(t) dt
//! ```
//!
//! This normalization (tag `paper`) is the one used throughout the crate; both
//! functions tend to 1/2. Two other conventions are common and can be
//! converted to:
//!
//! | convention  | definition                        | argument map       | value map        |
//! |-------------|-----------------------------------|--------------------|------------------|
//! | `paper`     | as above, argument `x`            | –                  | –                |
//! | `classical` | `int_0^u cos(pi t^2 / 2) dt`      | `u = sqrt(2x/pi)`  | equal            |
//! | `amplitude` | `int_0^u cos(t^2) dt`             | `u = sqrt(x)`      | `sqrt(pi/2) * C` |
//!
//! Evaluation: Maclaurin series of `sqrt(x) * sum i^k x^k / (k! (2k+1))` for
//! `x <= 9`, and for `x > 9` the complementary integral
//! `int_x^inf e^{it} t^{-1/2} dt = e^{ix} sqrt(x) h(x)`, where the auxiliary
//! function `h` is the continued fraction of the incomplete gamma function
//! `Gamma(1/2, -ix)`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Switch from the power series to the continued fraction.
const SERIES_LIMIT: f64 = 9.0;

const SERIES_TERMS: usize = 120;
const CF_MAX_ITER: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Paper,
    Classical,
    Amplitude,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Paper => "paper",
            Convention::Classical => "classical",
            Convention::Amplitude => "amplitude",
        })
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Convention::Paper),
            "classical" => Ok(Convention::Classical),
            "amplitude" => Ok(Convention::Amplitude),
            other => Err(Error::usage(format!("unknown Fresnel convention `{other}`"))),
        }
    }
}

/// (C, S) at argument `arg`, expressed in `convention`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FresnelPair {
    pub c: f64,
    pub s: f64,
    pub convention: Convention,
    /// The argument in this convention's own scaling.
    pub arg: f64,
}

/// C(x), S(x) for finite `x >= 0`.
pub fn fresnel_cs(x: f64) -> Result<FresnelPair> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain(format!("Fresnel argument must be finite and >= 0, got {x}")));
    }
    let (c, s) = if x <= SERIES_LIMIT { series(x) } else { complementary(x) };
    Ok(FresnelPair { c, s, convention: Convention::Paper, arg: x })
}

/// `int_{-inf}^{inf} e^{i x^2} dx = e^{i pi/4} sqrt(pi)`.
pub fn fresnel_limit() -> Complex64 {
    // sqrt(pi) * e^{i pi/4} = sqrt(pi/2) * (1 + i)
    let r = (PI / 2.0).sqrt();
    Complex64::new(r, r)
}

fn series(x: f64) -> (f64, f64) {
    // term_k = x^k / k!; even k feed C with sign (-1)^{k/2}, odd k feed S.
    let mut term = 1.0f64;
    let (mut c, mut s) = (0.0f64, 0.0f64);
    let (mut cc, mut sc) = (0.0f64, 0.0f64);
    for k in 0..SERIES_TERMS {
        if k > 0 {
            term *= x / k as f64;
        }
        let contrib = term / (2 * k + 1) as f64;
        let signed = if (k / 2) % 2 == 0 { contrib } else { -contrib };
        // Neumaier summation; the alternating terms peak near 1e3 at x = 9.
        if k % 2 == 0 {
            let t = c + signed;
            cc += if c.abs() >= signed.abs() { (c - t) + signed } else { (signed - t) + c };
            c = t;
        } else {
            let t = s + signed;
            sc += if s.abs() >= signed.abs() { (s - t) + signed } else { (signed - t) + s };
            s = t;
        }
        if k > 2 && contrib < 1e-18 * (c.abs() + s.abs() + 1e-300) {
            break;
        }
    }
    let scale = (2.0 / PI).sqrt() * x.sqrt();
    (scale * (c + cc), scale * (s + sc))
}

/// Continued fraction for `Gamma(1/2, z) / (e^{-z} z^{1/2})` by modified Lentz.
fn gamma_half_cf(z: Complex64) -> Complex64 {
    let tiny = 1e-300;
    let a = 0.5;
    let mut b = z + 1.0 - a;
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..CF_MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.norm() < tiny {
            d = Complex64::new(tiny, 0.0);
        }
        c = b + an / c;
        if c.norm() < tiny {
            c = Complex64::new(tiny, 0.0);
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h
}

/// `int_x^inf e^{it} t^{-1/2} dt` for `x > 0`.
pub(crate) fn complementary_integral(x: f64) -> Complex64 {
    let h = gamma_half_cf(Complex64::new(0.0, -x));
    Complex64::from_polar(1.0, x) * x.sqrt() * h
}

fn complementary(x: f64) -> (f64, f64) {
    let tail = complementary_integral(x) / (2.0 * PI).sqrt();
    (0.5 - tail.re, 0.5 - tail.im)
}

/// Convert a pair between conventions; the argument is rescaled alongside.
pub fn convert_normalization(p: FresnelPair, target: Convention) -> Result<FresnelPair> {
    if !(p.c.is_finite() && p.s.is_finite() && p.arg.is_finite()) {
        return Err(Error::domain("Fresnel pair must be finite"));
    }
    if target == p.convention {
        return Ok(p);
    }
    let amp = (PI / 2.0).sqrt();
    // Normalize to the `paper` convention first.
    let (x, c, s) = match p.convention {
        Convention::Paper => (p.arg, p.c, p.s),
        Convention::Classical => (PI * p.arg * p.arg / 2.0, p.c, p.s),
        Convention::Amplitude => (p.arg * p.arg, p.c / amp, p.s / amp),
    };
    let out = match target {
        Convention::Paper => FresnelPair { c, s, convention: target, arg: x },
        Convention::Classical => FresnelPair { c, s, convention: target, arg: (2.0 * x / PI).sqrt() },
        Convention::Amplitude => FresnelPair { c: c * amp, s: s * amp, convention: target, arg: x.sqrt() },
    };
    Ok(out)
}

/// Evaluate directly in another convention at that convention's argument.
pub fn fresnel_in(convention: Convention, arg: f64) -> Result<FresnelPair> {
    let x = match convention {
        Convention::Paper => arg,
        Convention::Classical => PI * arg * arg / 2.0,
        Convention::Amplitude => arg * arg,
    };
    if !arg.is_finite() || arg < 0.0 {
        return Err(Error::domain(format!("Fresnel argument must be finite and >= 0, got {arg}")));
    }
    let p = fresnel_cs(x)?;
    let mut out = convert_normalization(p, convention)?;
    out.arg = arg;
    Ok(out)
}

/// C'(x) = cos x / sqrt(2 pi x), S'(x) = sin x / sqrt(2 pi x).
pub fn fresnel_derivative(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain("Fresnel derivative needs x > 0"));
    }
    let k = 1.0 / (2.0 * PI * x).sqrt();
    Ok((k * x.cos(), k * x.sin()))
}

#[cfg(test)]
mod tests {
    use super::*;

    use crate::test_oracle as oracle;

    #[test]
    fn zero_is_fixed() {
        let p = fresnel_cs(0.0).unwrap();
        assert_eq!((p.c, p.s), (0.0, 0.0));
        assert_eq!(p.convention, Convention::Paper);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(fresnel_cs(-1.0), Err(Error::Domain(_))));
        assert!(matches!(fresnel_cs(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(fresnel_cs(f64::INFINITY), Err(Error::Domain(_))));
        assert!(matches!("radians".parse::<Convention>(), Err(Error::Usage(_))));
    }

    #[test]
    fn value_at_one_matches_oracle() {
        let p = fresnel_cs(1.0).unwrap();
        let (c, s) = oracle::fresnel(1.0);
        assert!((p.c - c).abs() < 1e-13, "{} vs {}", p.c, c);
        assert!((p.s - s).abs() < 1e-13, "{} vs {}", p.s, s);
    }

    #[test]
    fn branches_agree_across_the_split() {
        for &x in &[8.5, 8.99, 9.0, 9.01, 9.5, 10.0] {
            let (c1, s1) = series(x);
            let (c2, s2) = complementary(x);
            assert!((c1 - c2).abs() < 1e-12 && (s1 - s2).abs() < 1e-12, "x={x}: {c1} {c2} {s1} {s2}");
        }
    }

    #[test]
    fn limit_is_root_pi_on_the_diagonal() {
        let l = fresnel_limit();
        assert_eq!(l.re, l.im);
        assert!((l.norm() - PI.sqrt()).abs() < 1e-15);
        assert!((l.re - PI.sqrt() * (PI / 4.0).cos()).abs() < 1e-15);
        // C(inf) = S(inf) = 1/2 after dividing by sqrt(2 pi).
        let half = l / (2.0 * PI).sqrt();
        assert!((half.re - 0.5).abs() < 1e-15 && (half.im - 0.5).abs() < 1e-15);
    }

    #[test]
    fn converts_between_conventions() {
        let z = convert_normalization(fresnel_cs(0.0).unwrap(), Convention::Classical).unwrap();
        assert_eq!((z.c, z.s, z.arg), (0.0, 0.0, 0.0));

        let x = 2.0;
        let p = fresnel_cs(x).unwrap();
        let cl = convert_normalization(p, Convention::Classical).unwrap();
        assert!((cl.arg - (2.0 * x / PI).sqrt()).abs() < 1e-15);
        // Classical definition by direct quadrature at the mapped argument.
        let direct = oracle::integrate(&|t| (PI * t * t / 2.0).cos(), 0.0, cl.arg, 1e-14);
        assert!((cl.c - direct).abs() < 1e-12);
        let am = convert_normalization(p, Convention::Amplitude).unwrap();
        let direct = oracle::integrate(&|t| (t * t).sin(), 0.0, am.arg, 1e-14);
        assert!((am.s - direct).abs() < 1e-12);
        let back = convert_normalization(am, Convention::Paper).unwrap();
        assert!((back.c - p.c).abs() < 1e-14 && (back.s - p.s).abs() < 1e-14);
        assert!((back.arg - x).abs() < 1e-14);
    }

    #[test]
    fn evaluates_in_other_conventions() {
        let u = 1.3;
        let cl = fresnel_in(Convention::Classical, u).unwrap();
        let direct = oracle::integrate(&|t| (PI * t * t / 2.0).sin(), 0.0, u, 1e-14);
        assert!((cl.s - direct).abs() < 1e-12);
        assert_eq!(cl.arg, u);
    }

    #[test]
    fn large_arguments_stay_finite_and_bounded() {
        for &x in &[1e2, 1e3, 1e4, 1e6, 1e9] {
            let p = fresnel_cs(x).unwrap();
            let env = 1.0 / (2.0 * PI * x).sqrt() + 1e-10;
            assert!((p.c - 0.5).abs() <= env && (p.s - 0.5).abs() <= env, "x={x}");
        }
    }
}
