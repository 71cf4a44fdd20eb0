//! Compression of a reduced instance to a 3k x 3k matrix of affine
//! entries: evaluate the edge variables at random field points, eliminate
//! everything outside the orientation-tagged block with exact row and
//! column operations, and fold the eliminated block's determinant into
//! the first row. The result decides the instance with the same
//! orientation sum as the full matrix, at a size depending on k alone.

use std::fmt::Write as _;

use thiserror::Error;

use crate::encode::build_matrix;
use crate::field::{mix64, FieldElement};
use crate::graph::ReducedInstance;
use crate::linalg::{block_eliminate, AffineEntry, AffineMatrix};
use crate::solver::{subset_zero_sum, Algorithm, Answer, Verdict};

/// Attempts before concluding the evaluation randomness is defective.
/// Each retry hits a singular trailing block with probability about
/// n/2^64, so two failures in a row already signal a broken generator.
pub const RETRY_LIMIT: u64 = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CompressError {
    #[error("compression needs at least 2 terminals, got {k}")]
    TooFewTerminals { k: usize },
    #[error("trailing block stayed singular through {attempts} seeds; the randomness source looks defective")]
    RetriesExhausted { attempts: u64 },
}

/// A compressed instance: a 3k x 3k matrix over GF(2^64) whose entries
/// are affine in the orientation variables a_2..a_k, plus the seed that
/// produced it. Summing `det` over all orientation assignments gives the
/// same answer as the full matrix of the source instance, with identical
/// false-negative bound `n / 2^64`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressedInstance {
    pub k: usize,
    /// Dimension of the full evaluated matrix this was eliminated from;
    /// numerator of the false-negative bound.
    pub n: usize,
    /// Evaluation seed actually used (differs from the requested seed
    /// only if singular-block retries fired).
    pub seed: u64,
    /// 3k x 3k, with the eliminated block's determinant folded into row 1.
    pub entries: AffineMatrix,
}

/// Compresses a reduced instance under the given seed. Retries with
/// derived seeds if the trailing concrete block of the evaluation is
/// singular, which for an honest generator is vanishingly rare.
pub fn compress(r: &ReducedInstance, seed: u64) -> Result<CompressedInstance, CompressError> {
    let k = r.k;
    if k < 2 {
        return Err(CompressError::TooFewTerminals { k });
    }
    let (encoded, _) = build_matrix(r);
    let n = encoded.n();
    for attempt in 0..RETRY_LIMIT {
        let eval_seed = if attempt == 0 { seed } else { mix64(seed, attempt) };
        let evaluated = encoded.apply_evaluation(eval_seed);
        if let Ok((mut block, det_c)) = block_eliminate(evaluated.affine_matrix(), 3 * k) {
            block.scale_row(0, det_c);
            return Ok(CompressedInstance { k, n, seed: eval_seed, entries: block });
        }
    }
    Err(CompressError::RetriesExhausted { attempts: RETRY_LIMIT })
}

/// Decides a compressed instance: the orientation sum of 2^(k-1)
/// determinants of the 3k x 3k matrix. Exactly reproduces the verdict
/// the full matrix would give under the recorded seed.
pub fn evaluate_compressed(c: &CompressedInstance) -> Verdict {
    let num_bits = (c.k - 1) as u32;
    let sum = subset_zero_sum(num_bits, FieldElement::ZERO, |mask| {
        c.entries
            .instantiate(|var| (mask >> (var - 2)) & 1 == 1)
            .into_determinant()
    });
    Verdict {
        answer: if sum.is_zero() { Answer::No } else { Answer::Yes },
        algorithm: Algorithm::Compressed,
        seed: c.seed,
        false_negative_numerator: c.n as u64,
        determinant_evaluations: 1 << num_bits,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("empty input, expected a KCYC header")]
    MissingHeader,
    #[error("unsupported format version in header {content:?}")]
    UnsupportedVersion { content: String },
    #[error("malformed header {content:?}")]
    BadHeader { content: String },
    #[error("line {line}: malformed entry {entry:?}")]
    BadEntry { line: usize, entry: String },
    #[error("line {line}: invalid hex field {text:?}")]
    InvalidHex { line: usize, text: String },
    #[error("line {line}: orientation variable {var} outside 2..={k}")]
    VarOutOfRange { line: usize, var: usize, k: usize },
    #[error("line {line}: entry without orientation variable has nonzero coefficient")]
    ConstantWithCoefficient { line: usize },
    #[error("line {line}: expected {expected} entries, found {found}")]
    BadEntryCount { line: usize, expected: usize, found: usize },
    #[error("input ends after {found} of {expected} matrix rows")]
    Truncated { expected: usize, found: usize },
    #[error("line {line}: trailing content {content:?}")]
    TrailingContent { line: usize, content: String },
}

/// Renders the versioned text format: one fixed-width header line, then
/// 3k lines of 3k entries `var:c1:c0` with `-` marking entries that carry
/// no orientation variable. Byte length is a function of k alone.
pub fn serialize(c: &CompressedInstance) -> String {
    let d = 3 * c.k;
    assert_eq!(c.entries.n(), d, "entry matrix must be 3k x 3k");
    let mut out = String::new();
    writeln!(
        out,
        "KCYC v1 k={} n={:010} ell=64 mod=0x1B seed={:016x} detc=folded",
        c.k, c.n, c.seed
    )
    .unwrap();
    for r in 0..d {
        for col in 0..d {
            if col > 0 {
                out.push(' ');
            }
            let e = &c.entries[(r, col)];
            match e.var {
                None => {
                    debug_assert!(e.c1.is_zero(), "concrete entry with nonzero coefficient");
                    write!(out, "-:0:{}", e.c0.to_hex()).unwrap();
                }
                Some(v) => {
                    write!(out, "{}:{}:{}", v, e.c1.to_hex(), e.c0.to_hex()).unwrap();
                }
            }
        }
        out.push('\n');
    }
    out
}

/// Parses the text format back; inverse of `serialize` on its image.
pub fn deserialize(text: &str) -> Result<CompressedInstance, FormatError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().filter(|(_, l)| !l.is_empty()).ok_or(FormatError::MissingHeader)?;
    let (k, n, seed) = parse_header(header)?;
    let d = 3 * k;

    let mut entries = AffineMatrix::zero(d);
    let mut rows_done = 0;
    for (idx, line) in &mut lines {
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split(' ').collect();
        if fields.len() != d {
            return Err(FormatError::BadEntryCount {
                line: lineno,
                expected: d,
                found: fields.len(),
            });
        }
        for (col, field) in fields.iter().enumerate() {
            entries[(rows_done, col)] = parse_entry(field, lineno, k)?;
        }
        rows_done += 1;
        if rows_done == d {
            break;
        }
    }
    if rows_done < d {
        return Err(FormatError::Truncated { expected: d, found: rows_done });
    }
    for (idx, line) in lines {
        if !line.trim().is_empty() {
            return Err(FormatError::TrailingContent {
                line: idx + 1,
                content: line.to_string(),
            });
        }
    }
    Ok(CompressedInstance { k, n, seed, entries })
}

fn parse_header(header: &str) -> Result<(usize, usize, u64), FormatError> {
    let bad = || FormatError::BadHeader { content: header.to_string() };
    let fields: Vec<&str> = header.split(' ').collect();
    if fields.len() < 2 || fields[0] != "KCYC" || fields[1] != "v1" {
        return Err(FormatError::UnsupportedVersion { content: header.to_string() });
    }
    if fields.len() != 8 || fields[4] != "ell=64" || fields[5] != "mod=0x1B" || fields[7] != "detc=folded"
    {
        return Err(bad());
    }
    let k: usize = fields[2]
        .strip_prefix("k=")
        .and_then(|s| s.parse().ok())
        .filter(|&k| k >= 2)
        .ok_or_else(bad)?;
    let n: usize = fields[3]
        .strip_prefix("n=")
        .and_then(|s| s.parse().ok())
        .ok_or_else(bad)?;
    let seed = fields[6]
        .strip_prefix("seed=")
        .filter(|s| s.len() == 16)
        .and_then(FieldElement::from_hex)
        .ok_or_else(bad)?
        .bits();
    Ok((k, n, seed))
}

fn parse_entry(field: &str, line: usize, k: usize) -> Result<AffineEntry, FormatError> {
    let bad = || FormatError::BadEntry { line, entry: field.to_string() };
    let mut parts = field.split(':');
    let (var_part, c1_part, c0_part) = match (parts.next(), parts.next(), parts.next(), parts.next()) {
        (Some(v), Some(c1), Some(c0), None) => (v, c1, c0),
        _ => return Err(bad()),
    };
    let hex = |s: &str| {
        FieldElement::from_hex(s).ok_or(FormatError::InvalidHex { line, text: s.to_string() })
    };
    let c1 = hex(c1_part)?;
    let c0 = hex(c0_part)?;
    if var_part == "-" {
        if !c1.is_zero() {
            return Err(FormatError::ConstantWithCoefficient { line });
        }
        return Ok(AffineEntry { var: None, c1, c0 });
    }
    let var: usize = var_part.parse().map_err(|_| bad())?;
    if !(2..=k).contains(&var) {
        return Err(FormatError::VarOutOfRange { line, var, k });
    }
    Ok(AffineEntry { var: Some(var), c1, c0 })
}
