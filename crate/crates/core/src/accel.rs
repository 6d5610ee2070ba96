//! Iterated averaging of oscillating sequences.
//!
//! For `s_k = L + (-1)^k A_k` with slowly varying `A_k`, each averaging pass
//! `(s_k + s_{k+1}) / 2` replaces `A_k` by half its forward difference, so a
//! few passes push the oscillation far below the raw amplitude. `stride`
//! generalizes the pairing to sequences whose sign flips every `stride`
//! samples.

use crate::quad::Scalar;

/// Apply `depth` averaging passes with the given stride. Stops early when
/// the sequence becomes too short; never returns an empty vector for
/// nonempty input.
pub fn iterated_average<T: Scalar>(seq: &[T], stride: usize, depth: usize) -> Vec<T> {
    let stride = stride.max(1);
    let mut cur = seq.to_vec();
    for _ in 0..depth {
        if cur.len() <= stride {
            break;
        }
        cur = (0..cur.len() - stride).map(|k| (cur[k] + cur[k + stride]) * 0.5).collect();
    }
    cur
}

#[derive(Debug, Clone, Copy)]
pub struct LimitEstimate<T> {
    pub value: T,
    pub error: f64,
}

/// Limit of an oscillating sequence from its accelerated tail. The error is
/// the larger of the last step in the final row and the change from the
/// previous depth.
pub fn iterated_average_limit<T: Scalar>(seq: &[T], stride: usize, depth: usize) -> LimitEstimate<T> {
    let depth = depth.max(1);
    let last = iterated_average(seq, stride, depth);
    let prev = iterated_average(seq, stride, depth - 1);
    let value = *last.last().expect("nonempty sequence");
    let mut error = (value - *prev.last().expect("nonempty")).magnitude();
    if last.len() >= 2 {
        error = error.max((value - last[last.len() - 2]).magnitude());
    } else {
        error = f64::INFINITY;
    }
    LimitEstimate { value, error }
}
