//! Kernel scans behind `milnor scan`: the matrix of an operation word on a
//! single bidegree, its rank, and a canonical basis of its kernel.
//!
//! The word maps the basis of the source bidegree into the basis of the
//! target bidegree (source shifted by the word's bidegree shift).  Both
//! bases are enumerated, the images are expanded in target coordinates, and
//! the kernel is read off from a row reduction of the augmented matrix
//! [A | I] over F_l.  The kernel rows are reduced once more so the reported
//! basis is canonical.  Rank plus kernel dimension must equal the source
//! dimension; a violation is reported as an internal defect.

use milnor_core::{Bidegree, Monomial, OperationWord, RingContext};
use serde::Serialize;

use crate::CliError;

/// Refuse to scan bidegrees whose basis is larger than this.
pub const MAX_SCAN_DIMENSION: u128 = 200_000;

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub prime: u32,
    pub rank: u32,
    pub word: String,
    pub source_bidegree: [i64; 2],
    pub target_bidegree: [i64; 2],
    pub source_dimension: usize,
    pub target_dimension: usize,
    pub matrix_rank: usize,
    pub kernel_dimension: usize,
    pub kernel_basis: Vec<String>,
}

/// Count the basis of a bidegree without enumerating it, so oversized
/// requests are rejected up front.  Saturates at `u128::MAX` on overflow.
fn basis_dimension(ctx: &RingContext, b: Bidegree) -> u128 {
    let (m, w) = (b.degree, b.weight);
    if m < 0 || w < 0 {
        return 0;
    }
    let n = ctx.rank() as i64;
    let mut total: u128 = 0;
    for ext in 0..=n.min(m) {
        let rem = m - ext;
        if rem % 2 != 0 {
            continue;
        }
        let poly = rem / 2;
        if w - ext - poly < 0 {
            continue;
        }
        let subsets = binomial(n as u128, ext as u128);
        let compositions = binomial(poly as u128 + n as u128 - 1, n as u128 - 1);
        total = total
            .saturating_add(subsets.saturating_mul(compositions));
    }
    total
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Scan one bidegree: matrix of the word, rank, and kernel basis.
pub fn scan(
    prime: u32,
    rank: u32,
    source: Bidegree,
    word: &OperationWord,
) -> Result<ScanReport, CliError> {
    let ctx = RingContext::new(prime, rank).map_err(|e| CliError::Usage(e.to_string()))?;
    let target = source + word.shift(prime);

    for (name, b) in [("source", source), ("target", target)] {
        let dim = basis_dimension(&ctx, b);
        if dim > MAX_SCAN_DIMENSION {
            return Err(CliError::Usage(format!(
                "{name} bidegree {b} has {dim} basis monomials, above the scan limit of {MAX_SCAN_DIMENSION}"
            )));
        }
    }

    let source_basis = ctx.basis(source);
    let target_basis = ctx.basis(target);
    let source_dim = source_basis.len();
    let target_dim = target_basis.len();

    // Coordinates of each image in the target basis; the canonical order of
    // basis() makes the column indexing reproducible.
    let column_of = |mono: &Monomial| -> Result<usize, CliError> {
        target_basis
            .binary_search(mono)
            .map_err(|_| CliError::Internal(format!("image monomial {mono} missing from the target basis {target}")))
    };

    // Augmented rows [image coordinates | indicator of the source monomial].
    let p = prime as u64;
    let width = target_dim + source_dim;
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(source_dim);
    for (i, mono) in source_basis.iter().enumerate() {
        let image = word.apply(&ctx.combine([(mono.clone(), 1)]).expect("basis monomial"));
        let mut row = vec![0u64; width];
        for (m, c) in image.terms() {
            row[column_of(m)?] = c as u64;
        }
        row[target_dim + i] = 1;
        rows.push(row);
    }

    let matrix_rank = row_reduce(&mut rows, target_dim, p);

    // Rows whose image part vanished carry kernel vectors in the indicator
    // part; reduce those again so the printed basis is canonical.
    let mut kernel_rows: Vec<Vec<u64>> = rows
        .iter()
        .filter(|row| row[..target_dim].iter().all(|&c| c == 0))
        .map(|row| row[target_dim..].to_vec())
        .collect();
    let kernel_dimension = row_reduce(&mut kernel_rows, source_dim, p);
    kernel_rows.truncate(kernel_dimension);

    if matrix_rank + kernel_dimension != source_dim {
        return Err(CliError::Internal(format!(
            "rank {matrix_rank} plus kernel dimension {kernel_dimension} differs from the source dimension {source_dim}"
        )));
    }

    let kernel_basis = kernel_rows
        .iter()
        .map(|row| {
            ctx.combine(
                row.iter()
                    .zip(&source_basis)
                    .map(|(&c, m)| (m.clone(), c as i64)),
            )
            .expect("kernel vectors live in the source basis")
            .to_string()
        })
        .collect();

    Ok(ScanReport {
        prime,
        rank,
        word: word.to_string(),
        source_bidegree: [source.degree, source.weight],
        target_bidegree: [target.degree, target.weight],
        source_dimension: source_dim,
        target_dimension: target_dim,
        matrix_rank,
        kernel_dimension,
        kernel_basis,
    })
}

/// In-place reduced row echelon form over F_p, using only the first
/// `pivot_width` columns for pivot selection but normalizing full rows.
/// Returns the rank of the pivot part.  Rows end up sorted with pivot rows
/// first, in pivot-column order.
fn row_reduce(rows: &mut [Vec<u64>], pivot_width: usize, p: u64) -> usize {
    let mut pivot_row = 0;
    for col in 0..pivot_width {
        let Some(found) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(pivot_row, found);
        let inv = inverse_mod(rows[pivot_row][col] % p, p);
        for entry in rows[pivot_row].iter_mut() {
            *entry = *entry * inv % p;
        }
        for r in 0..rows.len() {
            if r != pivot_row && !rows[r][col].is_multiple_of(p) {
                let factor = rows[r][col] % p;
                for c in 0..rows[r].len() {
                    let sub = factor * rows[pivot_row][c] % p;
                    rows[r][c] = (rows[r][c] + p - sub) % p;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    pivot_row
}

fn inverse_mod(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p for prime p.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Human rendering of a scan report.
pub fn render_human(report: &ScanReport) -> String {
    let mut out = format!(
        "scan of {} on bidegree ({}, {}) at l = {}, rank {}\n\
         \x20 target bidegree:   ({}, {})\n\
         \x20 source dimension:  {}\n\
         \x20 target dimension:  {}\n\
         \x20 matrix rank:       {}\n\
         \x20 kernel dimension:  {}",
        report.word,
        report.source_bidegree[0],
        report.source_bidegree[1],
        report.prime,
        report.rank,
        report.target_bidegree[0],
        report.target_bidegree[1],
        report.source_dimension,
        report.target_dimension,
        report.matrix_rank,
        report.kernel_dimension,
    );
    for (i, vector) in report.kernel_basis.iter().enumerate() {
        out.push_str(&format!("\n  kernel[{i}] = {vector}"));
    }
    out
}
