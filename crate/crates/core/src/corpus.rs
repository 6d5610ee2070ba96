//! Built-in regression corpus: the table entries and CAS answers for the
//! `x q(ax^2) l(bx)` family and its convergent weight-one relatives.
//!
//! Parameters (1,1) and (1,2) are desk-scale choices and are labeled as
//! such; (3.1, 2.2) is the numeric case on which Maple V.4 returned 0.

use serde::Serialize;

use crate::closedform::{self, ClosedFormValue, IntegrandSpec, Trig, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Truth {
    ConvergentWithClosedForm,
    Divergent,
}

/// A value printed by some other source for the same integral.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlternateClaim {
    pub value: f64,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusEntry {
    pub case_id: String,
    pub spec: IntegrandSpec,
    pub truth: Truth,
    /// The finite value a table or CAS printed, if any.
    pub claimed_value: Option<ClosedFormValue>,
    pub alternate_claims: Vec<AlternateClaim>,
    pub source_label: String,
    pub cas_notes: String,
}

const TRIGS: [Trig; 2] = [Trig::Sin, Trig::Cos];

pub fn case_id(spec: &IntegrandSpec) -> String {
    format!("{}_{}_{}_a{}_b{}", spec.source_eq(), spec.quad_trig.name(), spec.lin_trig.name(), spec.a, spec.b)
}

fn desk_scale(a: f64, b: f64) -> String {
    format!("desk-scale parameters (a,b)=({a},{b})")
}

fn divergent_entry(quad: Trig, lin: Trig, a: f64, b: f64) -> CorpusEntry {
    let spec = IntegrandSpec::new(Weight::X, quad, lin, a, b).expect("corpus parameters are valid");
    let claimed = closedform::purported_value(&spec).expect("corpus parameters have b > 0");
    let (haan, alternates) = match lin {
        Trig::Sin => ("de Haan 150.4/150.7", Vec::new()),
        Trig::Cos => (
            "de Haan 1862 p.443",
            vec![AlternateClaim { value: 0.0, source: "de Haan 1862 p.443".into() }],
        ),
    };
    CorpusEntry {
        case_id: case_id(&spec),
        spec,
        truth: Truth::Divergent,
        claimed_value: Some(claimed),
        alternate_claims: alternates,
        source_label: format!("G&R 3.851; Prudnikov I 2.5.22; {haan}; {}", desk_scale(a, b)),
        cas_notes: "Mathematica 4.0 returns the table value; Maple V.4 reports divergence".into(),
    }
}

fn convergent_entry(quad: Trig, lin: Trig, a: f64, b: f64) -> CorpusEntry {
    let spec = IntegrandSpec::new(Weight::One, quad, lin, a, b).expect("corpus parameters are valid");
    let claimed = closedform::eval_convergent(&spec).expect("corpus parameters are valid");
    let source = match lin {
        Trig::Cos => "Cauchy 1815/1825",
        Trig::Sin => "de Haan 1862 p.443",
    };
    CorpusEntry {
        case_id: case_id(&spec),
        spec,
        truth: Truth::ConvergentWithClosedForm,
        claimed_value: Some(claimed),
        alternate_claims: Vec::new(),
        source_label: format!("{source}; {}", desk_scale(a, b)),
        cas_notes: "Maple V.4 and Mathematica 4.0 evaluate the symbolic form correctly".into(),
    }
}

/// 13 entries, ordered by case id.
pub fn builtin_corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for &(a, b) in &[(1.0, 1.0), (1.0, 2.0)] {
        for &q in &TRIGS {
            for &l in &TRIGS {
                out.push(divergent_entry(q, l, a, b));
            }
        }
    }
    for &q in &TRIGS {
        for &l in &TRIGS {
            out.push(convergent_entry(q, l, 1.0, 1.0));
        }
    }
    let spec = IntegrandSpec::new(Weight::One, Trig::Sin, Trig::Cos, 3.1, 2.2).expect("valid");
    out.push(CorpusEntry {
        case_id: case_id(&spec),
        spec,
        truth: Truth::ConvergentWithClosedForm,
        claimed_value: Some(closedform::eval_convergent(&spec).expect("valid")),
        alternate_claims: vec![AlternateClaim { value: 0.0, source: "Maple V.4".into() }],
        source_label: "Maple V.4 numeric evaluation, parameters as published".into(),
        cas_notes: "Maple V.4 returns 0 for the numeric case although its symbolic form is right; Mathematica 4.0 is correct".into(),
    });
    out.sort_by(|x, y| x.case_id.cmp(&y.case_id));
    out
}
