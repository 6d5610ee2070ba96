//! Closed-form right-hand sides for the quadratic-phase family
//!
//! ```text
//! int_0^inf w(x) q(a x^2) l(b x) dx,   w in {1, x},  q, l in {sin, cos}
//! ```
//!
//! With `phi = b^2 / (4a)`, `k = sqrt(pi / (2a))` and `C`, `S` the Fresnel
//! integrals of [`crate::fresnel`], the sign table is:
//!
//! | eq | integrand                 | value                                                   | status    |
//! |----|---------------------------|---------------------------------------------------------|-----------|
//! | E5 | sin(ax^2) cos(bx)         | `k/2 [cos phi - sin phi]`                               | valid     |
//! | E5 | cos(ax^2) cos(bx)         | `k/2 [cos phi + sin phi]`                               | valid     |
//! | E6 | sin(ax^2) sin(bx)         | `k [cos phi C(phi) + sin phi S(phi)]`                   | valid     |
//! | E6 | cos(ax^2) sin(bx)         | `k [sin phi C(phi) - cos phi S(phi)]`                   | valid     |
//! | E1 | x sin(ax^2) sin(bx)       | `b/(4a) k [sin phi + cos phi]`                          | purported |
//! | E1 | x cos(ax^2) sin(bx)       | `b/(4a) k [sin phi - cos phi]`                          | purported |
//! | E2 | x sin(ax^2) cos(bx)       | `1/(2a) - b/(2a) k [sin phi C(phi) - cos phi S(phi)]`   | purported |
//! | E2 | x cos(ax^2) cos(bx)       | `b/(2a) k [cos phi C(phi) + sin phi S(phi)]`            | purported |
//!
//! E1/E2 are divergent integrals; their "values" are the historical table
//! entries, obtained by differentiating E5/E6 in `b` under the integral sign.
//! They are reproduced exactly and always tagged `purported_erroneous`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fresnel::{fresnel_cs, fresnel_derivative};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trig {
    Sin,
    Cos,
}

impl Trig {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Trig::Sin => x.sin(),
            Trig::Cos => x.cos(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Trig::Sin => "sin",
            Trig::Cos => "cos",
        }
    }
}

impl FromStr for Trig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sin" => Ok(Trig::Sin),
            "cos" => Ok(Trig::Cos),
            other => Err(Error::usage(format!("expected sin or cos, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weight {
    One,
    X,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SourceEq {
    E1,
    E2,
    E5,
    E6,
}

impl SourceEq {
    /// Linear trig factor and weight implied by the source form.
    pub fn shape(self) -> (Weight, Trig) {
        match self {
            SourceEq::E1 => (Weight::X, Trig::Sin),
            SourceEq::E2 => (Weight::X, Trig::Cos),
            SourceEq::E5 => (Weight::One, Trig::Cos),
            SourceEq::E6 => (Weight::One, Trig::Sin),
        }
    }

    pub fn for_shape(weight: Weight, lin: Trig) -> SourceEq {
        match (weight, lin) {
            (Weight::X, Trig::Sin) => SourceEq::E1,
            (Weight::X, Trig::Cos) => SourceEq::E2,
            (Weight::One, Trig::Cos) => SourceEq::E5,
            (Weight::One, Trig::Sin) => SourceEq::E6,
        }
    }
}

impl fmt::Display for SourceEq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for SourceEq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "E1" => Ok(SourceEq::E1),
            "E2" => Ok(SourceEq::E2),
            "E5" => Ok(SourceEq::E5),
            "E6" => Ok(SourceEq::E6),
            other => Err(Error::usage(format!("unknown family `{other}` (expected E1, E2, E5 or E6)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Valid,
    PurportedErroneous,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Valid => "valid",
            Status::PurportedErroneous => "purported_erroneous",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormValue {
    pub value: f64,
    pub status: Status,
    pub source_eq: SourceEq,
}

impl ClosedFormValue {
    pub(crate) fn new(value: f64, source_eq: SourceEq) -> Self {
        let status = match source_eq {
            SourceEq::E1 | SourceEq::E2 => Status::PurportedErroneous,
            SourceEq::E5 | SourceEq::E6 => Status::Valid,
        };
        ClosedFormValue { value, status, source_eq }
    }
}

/// One member of `w(x) q(a x^2) l(b x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrandSpec {
    pub weight: Weight,
    pub quad_trig: Trig,
    pub lin_trig: Trig,
    pub a: f64,
    pub b: f64,
}

impl IntegrandSpec {
    pub fn new(weight: Weight, quad_trig: Trig, lin_trig: Trig, a: f64, b: f64) -> Result<Self> {
        check_ab(a, b)?;
        Ok(IntegrandSpec { weight, quad_trig, lin_trig, a, b })
    }

    pub fn source_eq(&self) -> SourceEq {
        SourceEq::for_shape(self.weight, self.lin_trig)
    }

    /// Pointwise value of the integrand.
    pub fn eval(&self, x: f64) -> f64 {
        let w = match self.weight {
            Weight::One => 1.0,
            Weight::X => x,
        };
        w * self.quad_trig.eval(self.a * x * x) * self.lin_trig.eval(self.b * x)
    }

    /// Stable human-readable identifier, e.g. `x*sin(ax^2)*cos(bx)[a=1,b=2]`.
    pub fn id(&self) -> String {
        let w = match self.weight {
            Weight::One => "",
            Weight::X => "x*",
        };
        format!("{w}{}(ax^2)*{}(bx)[a={},b={}]", self.quad_trig.name(), self.lin_trig.name(), self.a, self.b)
    }
}

fn check_ab(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::domain(format!("a must be positive and finite, got {a}")));
    }
    if !(b.is_finite() && b >= 0.0) {
        return Err(Error::domain(format!("b must be nonnegative and finite, got {b}")));
    }
    Ok(())
}

fn phase_and_scale(a: f64, b: f64) -> (f64, f64) {
    (b * b / (4.0 * a), (std::f64::consts::PI / (2.0 * a)).sqrt())
}

/// `int_0^inf q(a x^2) cos(b x) dx`.
pub fn eval_convergent_cos_family(a: f64, b: f64, quad_trig: Trig) -> Result<ClosedFormValue> {
    check_ab(a, b)?;
    let (phi, k) = phase_and_scale(a, b);
    let (s, c) = phi.sin_cos();
    let value = match quad_trig {
        Trig::Sin => 0.5 * k * (c - s),
        Trig::Cos => 0.5 * k * (c + s),
    };
    Ok(ClosedFormValue::new(value, SourceEq::E5))
}

/// `int_0^inf q(a x^2) sin(b x) dx`.
pub fn eval_convergent_sin_family(a: f64, b: f64, quad_trig: Trig) -> Result<ClosedFormValue> {
    check_ab(a, b)?;
    let (phi, k) = phase_and_scale(a, b);
    let (s, c) = phi.sin_cos();
    let f = fresnel_cs(phi)?;
    let value = match quad_trig {
        Trig::Sin => k * (c * f.c + s * f.s),
        Trig::Cos => k * (s * f.c - c * f.s),
    };
    Ok(ClosedFormValue::new(value, SourceEq::E6))
}

/// Closed form for a weight-one spec, dispatching on its linear factor.
pub fn eval_convergent(spec: &IntegrandSpec) -> Result<ClosedFormValue> {
    match (spec.weight, spec.lin_trig) {
        (Weight::X, _) => Err(Error::usage("weight-x integrals diverge; use purported_value")),
        (Weight::One, Trig::Cos) => eval_convergent_cos_family(spec.a, spec.b, spec.quad_trig),
        (Weight::One, Trig::Sin) => eval_convergent_sin_family(spec.a, spec.b, spec.quad_trig),
    }
}

/// The historical table entry for a (divergent) weight-x spec.
pub fn purported_value(spec: &IntegrandSpec) -> Result<ClosedFormValue> {
    if spec.weight != Weight::X {
        return Err(Error::usage("purported values exist only for weight-x integrands"));
    }
    check_ab(spec.a, spec.b)?;
    if spec.b <= 0.0 {
        return Err(Error::domain("purported values need b > 0"));
    }
    let (a, b) = (spec.a, spec.b);
    let (phi, k) = phase_and_scale(a, b);
    let (s, c) = phi.sin_cos();
    let value = match (spec.quad_trig, spec.lin_trig) {
        (Trig::Sin, Trig::Sin) => b / (4.0 * a) * k * (s + c),
        (Trig::Cos, Trig::Sin) => b / (4.0 * a) * k * (s - c),
        (quad, Trig::Cos) => {
            let f = fresnel_cs(phi)?;
            match quad {
                Trig::Sin => 1.0 / (2.0 * a) - b / (2.0 * a) * k * (s * f.c - c * f.s),
                Trig::Cos => b / (2.0 * a) * k * (c * f.c + s * f.s),
            }
        }
    };
    Ok(ClosedFormValue::new(value, spec.source_eq()))
}

/// d/db of the E5 or E6 right-hand side, by the chain rule with
/// `C'(x) = cos x / sqrt(2 pi x)`, `S'(x) = sin x / sqrt(2 pi x)`.
pub fn closed_form_b_derivative(a: f64, b: f64, source_eq: SourceEq, quad_trig: Trig) -> Result<f64> {
    check_ab(a, b)?;
    if b <= 0.0 {
        return Err(Error::domain("b-derivative needs b > 0"));
    }
    let (phi, k) = phase_and_scale(a, b);
    let dphi = b / (2.0 * a);
    let (s, c) = phi.sin_cos();
    match source_eq {
        SourceEq::E5 => Ok(match quad_trig {
            Trig::Sin => 0.5 * k * dphi * (-s - c),
            Trig::Cos => 0.5 * k * dphi * (-s + c),
        }),
        SourceEq::E6 => {
            let f = fresnel_cs(phi)?;
            let (dc, ds) = fresnel_derivative(phi)?;
            Ok(match quad_trig {
                Trig::Sin => k * dphi * (-s * f.c + c * dc + c * f.s + s * ds),
                Trig::Cos => k * dphi * (c * f.c + s * dc + s * f.s - c * ds),
            })
        }
        other => Err(Error::usage(format!("b-derivative is defined for E5 and E6, not {other}"))),
    }
}
