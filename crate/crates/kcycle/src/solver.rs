//! Decision procedures for the terminal-cycle question: an
//! orientation-sum detector evaluating 2^(k-1) determinants, an
//! inclusion-exclusion detector evaluating 2^(2k), polynomial-time
//! special cases for k <= 1, and the top-level dispatch.
//!
//! Both detectors sum determinants of random evaluations of the encoded
//! matrix. A nonzero sum proves a cycle through all terminals exists; a
//! zero sum is wrong with probability at most n/2^64, where n is the
//! matrix dimension, and only when the true answer is YES.

use crate::encode::{build_matrix, EncodedMatrix, TagMode, TargetSet};
use crate::field::FieldElement;
use crate::graph::{self, Graph, TerminalSet};
use rayon::prelude::*;
use std::ops::Add;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    /// Polynomial-time handling of k <= 1.
    Special,
    /// Inclusion-exclusion over target-variable subsets: 2^(2k) determinants.
    Det4k,
    /// Orientation sum: 2^(k-1) determinants.
    Det2k,
    /// Orientation sum over a compressed 3k x 3k instance.
    Compressed,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Special => "special",
            Algorithm::Det4k => "4k",
            Algorithm::Det2k => "2k",
            Algorithm::Compressed => "compressed",
        }
    }
}

/// Outcome of a decision run.
///
/// A YES answer is always correct: the summed polynomial evaluated
/// nonzero, so it is nonzero as a polynomial and the cycle exists. A NO
/// answer is a false negative with probability at most
/// `false_negative_numerator / 2^64` over the seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub answer: Answer,
    pub algorithm: Algorithm,
    pub seed: u64,
    /// Numerator of the false-negative bound over 2^64: the dimension
    /// of the evaluated matrix, or 0 when the answer is exact.
    pub false_negative_numerator: u64,
    pub determinant_evaluations: u64,
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }

    pub fn answer_str(&self) -> &'static str {
        match self.answer {
            Answer::Yes => "YES",
            Answer::No => "NO",
        }
    }

    pub fn bound_str(&self) -> String {
        if self.false_negative_numerator == 0 {
            "0 (exact)".to_string()
        } else {
            format!("{}/2^64", self.false_negative_numerator)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgorithmChoice {
    /// 2k for k >= 2; special cases below that.
    Auto,
    TwoK,
    FourK,
}

#[derive(Clone, Copy, Debug)]
pub struct SolveConfig {
    pub seed: u64,
    pub algorithm: AlgorithmChoice,
}

/// Decides whether the graph has a simple cycle through every terminal.
pub fn solve(g: &Graph, terminals: &TerminalSet, config: &SolveConfig) -> Verdict {
    match terminals.k() {
        0 => special(graph::has_any_cycle(g), config.seed),
        1 => special(graph::on_some_cycle(g, terminals.verts()[0]), config.seed),
        _ => {
            let reduced = graph::reduce_terminals(g, terminals);
            let (m, target) = build_matrix(&reduced);
            let m = m.apply_evaluation(config.seed);
            match config.algorithm {
                AlgorithmChoice::FourK => detect_4k(&m, &target),
                AlgorithmChoice::Auto | AlgorithmChoice::TwoK => detect_2k(&m),
            }
        }
    }
}

fn special(yes: bool, seed: u64) -> Verdict {
    Verdict {
        answer: if yes { Answer::Yes } else { Answer::No },
        algorithm: Algorithm::Special,
        seed,
        false_negative_numerator: 0,
        determinant_evaluations: 0,
    }
}

/// Orientation-sum detector: sums the determinant over all 2^(k-1)
/// direction assignments for terminals 2..=k.
pub fn detect_2k(m: &EncodedMatrix) -> Verdict {
    let k = m.k();
    assert!(k >= 2, "orientation sum requires at least 2 terminals");
    let bits = u32::try_from(k - 1).unwrap();
    let sum = subset_zero_sum(bits, FieldElement::ZERO, |mask| {
        m.instantiate(TagMode::Assign(mask)).into_determinant()
    });
    verdict_from_sum(sum, Algorithm::Det2k, m, 1u64 << bits)
}

/// Inclusion-exclusion detector: sums, over all subsets of the 2k
/// target variables, the determinant with that subset zeroed and all
/// orientation tags erased. The sum keeps exactly the monomials
/// divisible by the full target product, which exist iff a cycle
/// through all terminals does.
pub fn detect_4k(m: &EncodedMatrix, target: &TargetSet) -> Verdict {
    assert!(m.k() >= 2, "subset sum requires at least 2 terminals");
    let bits = u32::try_from(target.len()).unwrap();
    let sum = subset_zero_sum(bits, FieldElement::ZERO, |mask| {
        m.instantiate_zeroed(TagMode::Erase, target, mask).into_determinant()
    });
    verdict_from_sum(sum, Algorithm::Det4k, m, 1u64 << bits)
}

fn verdict_from_sum(
    sum: FieldElement,
    algorithm: Algorithm,
    m: &EncodedMatrix,
    evaluations: u64,
) -> Verdict {
    Verdict {
        answer: if sum.is_zero() { Answer::No } else { Answer::Yes },
        algorithm,
        seed: m.seed().expect("matrix must be evaluated"),
        false_negative_numerator: m.n() as u64,
        determinant_evaluations: evaluations,
    }
}

/// Sums `eval(mask)` over all 2^num_bits masks. Masks are derived in
/// Gray-code order; the evaluations are independent and fan out to the
/// current thread pool, and the result is identical for any worker
/// count because the sum is associative and commutative.
pub fn subset_zero_sum<V, F>(num_bits: u32, zero: V, eval: F) -> V
where
    V: Clone + Send + Sync + Add<Output = V>,
    F: Fn(u64) -> V + Sync,
{
    assert!(num_bits < 63, "subset space too large to enumerate");
    (0..1u64 << num_bits)
        .into_par_iter()
        .map(|i| eval(i ^ (i >> 1)))
        .reduce(|| zero.clone(), |a, b| a + b)
}
