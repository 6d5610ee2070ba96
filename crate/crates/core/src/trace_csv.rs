//! CSV encoding of partial-integral traces: header `T,p_re[,p_im]`, one row
//! per sample. Values are written with 17 significant digits, so a
//! write/read round trip reproduces every sample bit for bit.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::classify::{GridKind, PartialIntegralTrace, TraceSample};
use crate::error::{Error, Result};

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_trace<W: Write>(trace: &PartialIntegralTrace, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if trace.complex {
        w.write_record(["T", "p_re", "p_im"])?;
    } else {
        w.write_record(["T", "p_re"])?;
    }
    for s in &trace.samples {
        if trace.complex {
            w.write_record([fmt(s.t), fmt(s.p.re), fmt(s.p.im)])?;
        } else {
            w.write_record([fmt(s.t), fmt(s.p.re)])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_trace_file(trace: &PartialIntegralTrace, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_trace(trace, std::io::BufWriter::new(file))
}

/// Samples only; grid metadata is not part of the CSV and is filled with
/// neutral values (`UniformT`, stride 1).
pub fn read_trace<R: Read>(input: R) -> Result<PartialIntegralTrace> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let complex = match header.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["T", "p_re"] => false,
        ["T", "p_re", "p_im"] => true,
        _ => return Err(Error::usage(format!("unexpected trace header {header:?}"))),
    };
    let mut samples = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let field = |i: usize| -> Result<f64> {
            rec.get(i)
                .ok_or_else(|| Error::usage("short trace row"))?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::usage(format!("bad number in trace: {e}")))
        };
        let im = if complex { field(2)? } else { 0.0 };
        samples.push(TraceSample { t: field(0)?, p: Complex64::new(field(1)?, im) });
    }
    Ok(PartialIntegralTrace {
        samples,
        complex,
        spec_id: String::new(),
        grid_kind: GridKind::UniformT,
        phase_stride: 1,
        annotated: Vec::new(),
    })
}

pub fn read_trace_file(path: &Path) -> Result<PartialIntegralTrace> {
    read_trace(std::fs::File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample_trace(ps: &[(f64, f64)], complex: bool) -> PartialIntegralTrace {
        let samples = ps
            .iter()
            .enumerate()
            .map(|(k, &(re, im))| TraceSample { t: k as f64 * 0.37 + 1e-3, p: Complex64::new(re, if complex { im } else { 0.0 }) })
            .collect();
        PartialIntegralTrace { samples, complex, spec_id: String::new(), grid_kind: GridKind::UniformT, phase_stride: 1, annotated: vec![] }
    }

    #[test]
    fn header_matches_kind() {
        let mut buf = Vec::new();
        write_trace(&sample_trace(&[(1.0, 2.0)], false), &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("T,p_re\n"));
        let mut buf = Vec::new();
        write_trace(&sample_trace(&[(1.0, 2.0)], true), &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("T,p_re,p_im\n"));
    }

    #[test]
    fn rejects_foreign_header() {
        assert!(read_trace("x,y\n1,2\n".as_bytes()).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_is_exact(ps in prop::collection::vec((-1e300f64..1e300, -1e-300f64..1e-300), 0..50), complex: bool) {
            let tr = sample_trace(&ps, complex);
            let mut buf = Vec::new();
            write_trace(&tr, &mut buf).unwrap();
            let back = read_trace(buf.as_slice()).unwrap();
            prop_assert_eq!(back.complex, complex);
            prop_assert_eq!(back.samples.len(), tr.samples.len());
            for (a, b) in tr.samples.iter().zip(&back.samples) {
                prop_assert_eq!(a.t.to_bits(), b.t.to_bits());
                prop_assert_eq!(a.p.re.to_bits(), b.p.re.to_bits());
                prop_assert_eq!(a.p.im.to_bits(), b.p.im.to_bits());
            }
        }
    }
}
