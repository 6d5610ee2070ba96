//! Corpus runs: classify every entry, compare with what was claimed for it,
//! and write one JSON report (plus optional per-entry trace CSVs).
//!
//! Everything except the trailing `timing` block is a pure function of the
//! corpus and the configuration, independent of the thread count.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::classify::{self, ClassifyOptions, ConvergenceVerdict, GridKind, PartialIntegralTrace, VerdictKind};
use crate::closedform::{self, ClosedFormValue, SourceEq, Trig, Weight};
use crate::corpus::{CorpusEntry, Truth};
use crate::dui::{self, DifferentiatedFamily, DuiOptions, DuiReport, InterchangeDecision};
use crate::error::{Error, Result};
use crate::exec;
use crate::oscquad;
use crate::quad::QuadratureConfig;
use crate::trace_csv;

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReportConfig {
    pub quadrature: QuadratureConfig,
    pub t_max: f64,
    pub samples: usize,
    pub grid: GridKind,
    pub classify: ClassifyOptions,
    pub dui: DuiOptions,
    /// Largest gap between a claimed value and the computed one still
    /// counted as agreement.
    pub agreement_tol: f64,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            quadrature: QuadratureConfig::default(),
            t_max: 40.0,
            samples: 512,
            grid: GridKind::UniformPhase,
            classify: ClassifyOptions::default(),
            dui: DuiOptions::default(),
            agreement_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Agreement {
    Agreement,
    Mismatch,
    NotApplicable,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimCheck {
    pub value: f64,
    pub source: String,
    pub agreement_flag: Agreement,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryReport {
    pub case_id: String,
    pub integrand: String,
    pub truth: Truth,
    pub source_label: String,
    pub cas_notes: String,
    pub verdict: ConvergenceVerdict,
    /// Improper integral by quadrature (weight-one entries).
    pub numeric_value: Option<f64>,
    /// Valid closed form (weight-one entries).
    pub closed_form: Option<ClosedFormValue>,
    pub claimed_value: Option<ClosedFormValue>,
    pub agreement_flag: Agreement,
    pub alternate_claims: Vec<ClaimCheck>,
    /// Limit of `P(T) - B(T)` (weight-x entries).
    pub residual_limit: Option<f64>,
    pub dui_decision: Option<InterchangeDecision>,
    pub dui: Option<DuiReport>,
    pub trace_file: Option<String>,
    pub errors: Vec<String>,
}

impl EntryReport {
    pub fn is_inconclusive(&self) -> bool {
        self.verdict.kind == VerdictKind::Inconclusive || !self.errors.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryTiming {
    pub case_id: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub entries: Vec<EntryTiming>,
    pub total_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub tool_version: String,
    pub config: ReportConfig,
    pub entries: Vec<EntryReport>,
    pub timing: Timing,
}

impl RunReport {
    /// 0 when every entry was decided, 2 when any is inconclusive.
    pub fn exit_code(&self) -> i32 {
        if self.entries.iter().any(EntryReport::is_inconclusive) {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// The report without its timing block: the part that is reproducible.
    pub fn deterministic_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Stable<'a> {
            tool_version: &'a str,
            config: &'a ReportConfig,
            entries: &'a [EntryReport],
        }
        Ok(serde_json::to_string_pretty(&Stable { tool_version: &self.tool_version, config: &self.config, entries: &self.entries })?)
    }
}

/// The weight-one family whose formal b-derivative is this weight-x spec.
fn parent_family(entry: &CorpusEntry) -> Result<DifferentiatedFamily> {
    let s = &entry.spec;
    let source = match (s.weight, s.lin_trig) {
        (Weight::One, Trig::Cos) | (Weight::X, Trig::Sin) => SourceEq::E5,
        (Weight::One, Trig::Sin) | (Weight::X, Trig::Cos) => SourceEq::E6,
    };
    DifferentiatedFamily::table(source, s.quad_trig, s.a)
}

fn check_claim(value: f64, verdict: &ConvergenceVerdict, reference: Option<f64>, tol: f64) -> Agreement {
    match verdict.kind {
        VerdictKind::DivergentBounded | VerdictKind::DivergentUnbounded => Agreement::Mismatch,
        VerdictKind::Inconclusive => Agreement::Inconclusive,
        VerdictKind::Convergent => match reference {
            Some(r) if (r - value).abs() <= tol => Agreement::Agreement,
            Some(_) => Agreement::Mismatch,
            None => Agreement::Inconclusive,
        },
    }
}

fn note<T>(errors: &mut Vec<String>, r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e) if e.is_numerical() => {
            errors.push(e.to_string());
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn inconclusive() -> ConvergenceVerdict {
    ConvergenceVerdict {
        kind: VerdictKind::Inconclusive,
        limit_estimate: None,
        limit_error: None,
        oscillation_envelope: None,
        window_report: Vec::new(),
    }
}

fn evaluate(entry: &CorpusEntry, cfg: &ReportConfig) -> Result<(EntryReport, Option<PartialIntegralTrace>)> {
    let q = &cfg.quadrature;
    let spec = &entry.spec;
    let mut errors = Vec::new();

    let trace = note(&mut errors, classify::build_trace(spec, cfg.t_max, cfg.samples, cfg.grid, q))?;
    if let Some(tr) = &trace {
        if !tr.annotated.is_empty() {
            errors.push(format!("{} trace samples rest on quadrature that missed its tolerance", tr.annotated.len()));
        }
    }
    let verdict = match &trace {
        Some(tr) => classify::classify(tr, &cfg.classify)?,
        None => inconclusive(),
    };

    let (numeric_value, closed_form, residual_limit) = match spec.weight {
        Weight::One => (
            note(&mut errors, oscquad::improper_value(spec, q))?,
            Some(closedform::eval_convergent(spec)?),
            None,
        ),
        Weight::X => {
            let residual = note(&mut errors, classify::build_residual_trace(spec, cfg.t_max, cfg.samples, cfg.grid, q))?;
            let limit = match residual {
                Some(r) => classify::classify(&r, &cfg.classify)?.limit_estimate.map(|z| z.re),
                None => None,
            };
            (None, None, limit)
        }
    };

    let reference = numeric_value.or(verdict.limit_estimate.map(|z| z.re));
    let agreement_flag = match &entry.claimed_value {
        Some(c) => check_claim(c.value, &verdict, reference, cfg.agreement_tol),
        None => Agreement::NotApplicable,
    };
    let alternate_claims = entry
        .alternate_claims
        .iter()
        .map(|c| ClaimCheck {
            value: c.value,
            source: c.source.clone(),
            agreement_flag: check_claim(c.value, &verdict, reference, cfg.agreement_tol),
        })
        .collect();

    let dui = match spec.b > 0.0 {
        true => note(&mut errors, dui::check_interchange(&parent_family(entry)?, spec.b, &cfg.dui, q))?,
        false => None,
    };

    let report = EntryReport {
        case_id: entry.case_id.clone(),
        integrand: spec.id(),
        truth: entry.truth,
        source_label: entry.source_label.clone(),
        cas_notes: entry.cas_notes.clone(),
        verdict,
        numeric_value,
        closed_form,
        claimed_value: entry.claimed_value,
        agreement_flag,
        alternate_claims,
        residual_limit,
        dui_decision: dui.as_ref().map(|d| d.decision),
        dui,
        trace_file: None,
        errors,
    };
    Ok((report, trace))
}

/// Write `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial report.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Evaluate the corpus. Entries run concurrently; the report lists them in
/// case-id order. When `trace_dir` is given, each entry's trace is written
/// there as `<case_id>.csv`.
pub fn build_report(corpus: &[CorpusEntry], cfg: &ReportConfig, trace_dir: Option<&Path>) -> Result<RunReport> {
    cfg.quadrature.validate()?;
    let start = Instant::now();
    let results = exec::map_ordered_coarse(corpus, |e| {
        let t0 = Instant::now();
        evaluate(e, cfg).map(|r| (r, t0.elapsed().as_secs_f64()))
    });
    let mut evaluated = Vec::with_capacity(results.len());
    for r in results {
        evaluated.push(r?);
    }
    evaluated.sort_by(|x, y| x.0 .0.case_id.cmp(&y.0 .0.case_id));

    if let Some(dir) = trace_dir {
        std::fs::create_dir_all(dir)?;
    }
    let mut entries = Vec::with_capacity(evaluated.len());
    let mut timing = Vec::with_capacity(evaluated.len());
    for ((mut entry, trace), secs) in evaluated {
        if let (Some(dir), Some(tr)) = (trace_dir, trace) {
            let path = dir.join(format!("{}.csv", entry.case_id));
            trace_csv::write_trace_file(&tr, &path)?;
            entry.trace_file = Some(path.display().to_string());
        }
        timing.push(EntryTiming { case_id: entry.case_id.clone(), seconds: secs });
        entries.push(entry);
    }
    Ok(RunReport {
        tool_version: TOOL_VERSION.to_string(),
        config: *cfg,
        entries,
        timing: Timing { entries: timing, total_seconds: start.elapsed().as_secs_f64() },
    })
}

/// Build the report and write it atomically to `out_path`.
pub fn run_report(corpus: &[CorpusEntry], cfg: &ReportConfig, out_path: &Path, trace_dir: Option<&Path>) -> Result<RunReport> {
    let report = build_report(corpus, cfg, trace_dir)?;
    write_atomic(out_path, report.to_json()?.as_bytes())?;
    Ok(report)
}
