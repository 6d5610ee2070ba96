//! Fresnel-type oscillatory integrals: accurate Fresnel functions, closed
//! forms for `int_0^inf w(x) q(ax^2) l(bx) dx`, a phase-segmented quadrature
//! engine, a convergence classifier for partial-integral traces, and
//! numeric probes for differentiation under the integral sign.

pub mod accel;
pub mod classify;
pub mod cli;
pub mod closedform;
pub mod corpus;
pub mod dui;
pub mod error;
pub mod exec;
pub mod fresnel;
pub mod oscquad;
pub mod quad;
pub mod report;
pub mod trace_csv;

#[cfg(test)]
#[path = "../tests/common/oracle.rs"]
pub(crate) mod test_oracle;

pub use classify::{ConvergenceVerdict, GridKind, PartialIntegralTrace, VerdictKind};
pub use closedform::{ClosedFormValue, IntegrandSpec, SourceEq, Status, Trig, Weight};
pub use error::{Error, Result};
pub use fresnel::{Convention, FresnelPair};
pub use oscquad::ComplexValue;
pub use quad::QuadratureConfig;
