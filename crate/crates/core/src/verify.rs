//! Certification of candidate pairs.
//!
//! [`verify_sds`] and [`verify_matrix_equation`] are the two exact tests of a
//! solution; they are equivalent and both run in `O(v²)`. For small orders
//! [`verify_ehlich`] additionally computes the determinant of the block
//! matrix and compares it to Ehlich's bound.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::constraints::ParamSet;
use crate::error::{Error, Result};
use crate::seqcore::{paf, set_paf, PmSequence};

/// Default largest `v` for which [`verify_ehlich`] computes a determinant.
pub const DEFAULT_DET_CAP: usize = 15;

/// Outcome of checking `(X, Y)` against `(v; r, s; λ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdsCertificate {
    pub params: ParamSet,
    pub sizes: (usize, usize),
    /// `|X ∩ (X+d)| + |Y ∩ (Y+d)|` for `d = 1..v`, at index `d − 1`.
    pub difference_counts: Vec<i64>,
}

impl SdsCertificate {
    pub fn sizes_ok(&self) -> bool {
        self.sizes == (self.params.r, self.params.s)
    }

    /// `(d, count)` for every shift whose count differs from `λ`.
    pub fn violations(&self) -> Vec<(usize, i64)> {
        let lambda = self.params.lambda as i64;
        self.difference_counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != lambda)
            .map(|(i, &c)| (i + 1, c))
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.sizes_ok() && self.violations().is_empty()
    }
}

impl fmt::Display for SdsCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        writeln!(f, "parameters ({}; {}, {}; {})", p.v, p.r, p.s, p.lambda)?;
        writeln!(
            f,
            "sizes |X|={} |Y|={}: {}",
            self.sizes.0,
            self.sizes.1,
            if self.sizes_ok() { "ok" } else { "FAIL" }
        )?;
        let violations = self.violations();
        if violations.is_empty() {
            writeln!(
                f,
                "difference counts: all {} equal {}",
                self.difference_counts.len(),
                p.lambda
            )?;
        } else {
            for (d, c) in violations.iter().take(10) {
                writeln!(f, "difference count at d={d}: {c} != {}", p.lambda)?;
            }
            if violations.len() > 10 {
                writeln!(f, "... {} more", violations.len() - 10)?;
            }
        }
        write!(f, "result: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

pub fn verify_sds(x: &[usize], y: &[usize], params: &ParamSet) -> Result<SdsCertificate> {
    let v = params.v;
    let (x, y) = (dedup_checked(v, x)?, dedup_checked(v, y)?);
    let px = set_paf(v, &x);
    let py = set_paf(v, &y);
    Ok(SdsCertificate {
        params: *params,
        sizes: (x.len(), y.len()),
        difference_counts: (1..v).map(|d| px[d] + py[d]).collect(),
    })
}

fn dedup_checked(v: usize, set: &[usize]) -> Result<Vec<usize>> {
    let mut out = set.to_vec();
    out.sort_unstable();
    out.dedup();
    if let Some(&bad) = out.iter().find(|&&i| i >= v) {
        return Err(Error::IndexOutOfRange { v, index: bad });
    }
    Ok(out)
}

/// `A Aᵀ + B Bᵀ = 2(v−1) I + 2J` for the circulants with first rows `a`, `b`,
/// checked through `PAF_A(d) + PAF_B(d)`: `2v` at `d = 0` and `2` elsewhere.
pub fn verify_matrix_equation(a: &PmSequence, b: &PmSequence) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let v = a.len() as i64;
    let (pa, pb) = (paf(a), paf(b));
    Ok(pa
        .iter()
        .zip(&pb)
        .enumerate()
        .all(|(d, (x, y))| x + y == if d == 0 { 2 * v } else { 2 }))
}

/// The `2v × 2v` matrix `[[A, B], [−Bᵀ, Aᵀ]]` built from two circulants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DMatrix {
    v: usize,
    rows: Vec<Vec<i64>>,
}

impl DMatrix {
    pub fn order(&self) -> usize {
        2 * self.v
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }
}

pub fn build_dmatrix(a: &PmSequence, b: &PmSequence) -> Result<DMatrix> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let v = a.len();
    // Circulant entry (i, j) is c_{(j − i) mod v}; its transpose is c_{(i − j) mod v}.
    let circ = |seq: &PmSequence, i: usize, j: usize| seq.get((j + v - i) % v);
    let rows = (0..2 * v)
        .map(|i| {
            (0..2 * v)
                .map(|j| match (i < v, j < v) {
                    (true, true) => circ(a, i, j),
                    (true, false) => circ(b, i, j - v),
                    (false, true) => -circ(b, j, i - v),
                    (false, false) => circ(a, j - v, i - v),
                })
                .collect()
        })
        .collect();
    Ok(DMatrix { v, rows })
}

/// Exact determinant by fraction-free (Bareiss) elimination.
///
/// Runs in `i128` while every intermediate fits and restarts in `BigInt`
/// otherwise.
pub fn exact_determinant(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
    let small: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    if let Some(det) = bareiss_i128(small) {
        return BigInt::from(det);
    }
    let big = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    bareiss_big(big)
}

fn bareiss_i128(mut m: Vec<Vec<i128>>) -> Option<i128> {
    let n = m.len();
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Some(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j]
                    .checked_mul(m[k][k])?
                    .checked_sub(m[i][k].checked_mul(m[k][j])?)?;
                m[i][j] = t / prev;
            }
        }
        prev = m[k][k];
    }
    m[n - 1][n - 1].checked_mul(sign)
}

fn bareiss_big(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// `2^v (2v − 1)(v − 1)^{v−1}`.
pub fn ehlich_bound(v: usize) -> BigInt {
    let v_big = BigInt::from(v);
    let two_pow = BigInt::one() << v;
    let base = &v_big - 1;
    let mut power = BigInt::one();
    for _ in 0..v.saturating_sub(1) {
        power *= &base;
    }
    two_pow * (2 * &v_big - 1) * power
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhlichReport {
    pub v: usize,
    pub bound: BigInt,
    /// `None` when `v` is above the determinant cap.
    pub det: Option<BigInt>,
}

impl EhlichReport {
    pub fn attained(&self) -> Option<bool> {
        self.det.as_ref().map(|d| d.abs() == self.bound)
    }
}

pub fn verify_ehlich(a: &PmSequence, b: &PmSequence, cap: usize) -> Result<EhlichReport> {
    let v = a.len();
    let bound = ehlich_bound(v);
    let det = if v <= cap {
        Some(exact_determinant(build_dmatrix(a, b)?.rows()))
    } else {
        if b.len() != v {
            return Err(Error::LengthMismatch(v, b.len()));
        }
        None
    };
    Ok(EhlichReport { v, bound, det })
}
