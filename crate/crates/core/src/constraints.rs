//! Feasible parameters and the necessary conditions a candidate pair must meet.
//!
//! Everything here is exact integer arithmetic except [`psd_criterion`] and
//! [`sine_identity_check`], which need irrational coefficients.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{divisors, ModRing};
use crate::seqcore::{psd_at_many, psd_tolerance, PmSequence};

/// Parameters `(v; r, s; λ)` of a D-optimal SDS with row sums `a = v − 2r`,
/// `b = v − 2s`, `0 < a ≤ b` and `a² + b² = 4v − 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamSet {
    pub v: usize,
    pub r: usize,
    pub s: usize,
    #[serde(rename = "lambda")]
    pub lambda: usize,
    pub a: usize,
    pub b: usize,
}

impl ParamSet {
    /// Validates `(v; r, s)` and derives `λ`, `a`, `b`.
    pub fn new(v: usize, r: usize, s: usize) -> Result<Self> {
        ModRing::new(v)?;
        let invalid = |reason| Error::InvalidParams { v, r, s, reason };
        if 2 * r >= v || 2 * s >= v {
            return Err(invalid("row sums must be positive"));
        }
        if r < s {
            return Err(invalid("expected r >= s"));
        }
        let (a, b) = (v - 2 * r, v - 2 * s);
        if a * a + b * b != 4 * v - 2 {
            return Err(invalid("a^2 + b^2 != 4v - 2"));
        }
        if r + s < (v - 1) / 2 {
            return Err(invalid("lambda would be negative"));
        }
        let lambda = r + s - (v - 1) / 2;
        Ok(ParamSet {
            v,
            r,
            s,
            lambda,
            a,
            b,
        })
    }
}

impl fmt::Display for ParamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}; {}, {}; {}) [a={}, b={}]",
            self.v, self.r, self.s, self.lambda, self.a, self.b
        )
    }
}

/// All parameter sets for `v`, by ascending `a` (descending `r`). Empty when `4v − 2` is not
/// a sum of two squares.
pub fn feasible_params(v: usize) -> Result<Vec<ParamSet>> {
    ModRing::new(v)?;
    let target = 4 * v - 2;
    let mut out = Vec::new();
    // a ≤ b means a² ≤ 2v − 1; both must be odd since target ≡ 2 (mod 4).
    let mut a = 1;
    while a * a <= target / 2 {
        let rest = target - a * a;
        let b = isqrt(rest);
        if b * b == rest && b % 2 == 1 && b <= v {
            out.push(ParamSet::new(v, (v - a) / 2, (v - b) / 2)?);
        }
        a += 2;
    }
    Ok(out)
}

fn isqrt(n: usize) -> usize {
    let mut x = (n as f64).sqrt() as usize;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Rejects a sequence if some PSD value exceeds `2v − 2`; the partner's PSD
/// would have to be negative.
pub fn psd_criterion(seq: &PmSequence) -> bool {
    let v = seq.len();
    let ks: Vec<usize> = (1..=(v - 1) / 2).collect();
    psd_criterion_at(seq, &ks)
}

/// [`psd_criterion`] restricted to the given frequencies.
pub fn psd_criterion_at(seq: &PmSequence, ks: &[usize]) -> bool {
    let v = seq.len();
    let bound = (2 * v - 2) as f64 + psd_tolerance(v);
    psd_at_many(seq, ks).into_iter().all(|p| p <= bound)
}

/// Strided partial sums of a pair for a divisor `d` of `v`:
/// `A_j = a_j + a_{j+d} + … + a_{j+(m−1)d}`, `m = v / d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorProfile {
    pub v: usize,
    pub d: usize,
    pub m: usize,
    pub a_sums: Vec<i64>,
    pub b_sums: Vec<i64>,
}

pub fn strided_sums(a: &PmSequence, b: &PmSequence, d: usize) -> Result<DivisorProfile> {
    let v = a.len();
    if b.len() != v {
        return Err(Error::LengthMismatch(v, b.len()));
    }
    if d == 0 || v % d != 0 {
        return Err(Error::NotADivisor { v, d });
    }
    let sums = |seq: &PmSequence| {
        let mut out = vec![0i64; d];
        for (i, &x) in seq.entries().iter().enumerate() {
            out[i % d] += x as i64;
        }
        out
    };
    Ok(DivisorProfile {
        v,
        d,
        m: v / d,
        a_sums: sums(a),
        b_sums: sums(b),
    })
}

impl DivisorProfile {
    pub fn sum_of_squares(&self) -> i64 {
        self.a_sums.iter().chain(&self.b_sums).map(|x| x * x).sum()
    }

    /// `A_k A_l + B_k B_l`.
    fn cross(&self, k: usize, l: usize) -> i64 {
        self.a_sums[k] * self.a_sums[l] + self.b_sums[k] * self.b_sums[l]
    }

    /// `Σ_{k<l} (A_k A_l + B_k B_l)` over pairs whose gap `l − k` passes `keep`.
    pub fn cross_sum_where(&self, keep: impl Fn(usize) -> bool) -> i64 {
        let mut total = 0;
        for k in 0..self.d {
            for l in k + 1..self.d {
                if keep(l - k) {
                    total += self.cross(k, l);
                }
            }
        }
        total
    }

    pub fn cross_sum(&self) -> i64 {
        self.cross_sum_where(|_| true)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DivisorSumReport {
    pub sum_squares: i64,
    pub expected_sum_squares: i64,
    pub cross: i64,
    pub expected_cross: i64,
    pub sum_squares_ok: bool,
    pub cross_ok: bool,
}

impl DivisorSumReport {
    pub fn passed(&self) -> bool {
        self.sum_squares_ok && self.cross_ok
    }
}

/// `Σ (A_j² + B_j²) = 2(v + m − 1)` and `Σ_{k<l} (A_k A_l + B_k B_l) = v − m`.
pub fn divisor_sum_check(profile: &DivisorProfile) -> DivisorSumReport {
    let (v, m) = (profile.v as i64, profile.m as i64);
    let sum_squares = profile.sum_of_squares();
    let cross = profile.cross_sum();
    let expected_sum_squares = 2 * (v + m - 1);
    let expected_cross = v - m;
    DivisorSumReport {
        sum_squares,
        expected_sum_squares,
        cross,
        expected_cross,
        sum_squares_ok: sum_squares == expected_sum_squares,
        cross_ok: cross == expected_cross,
    }
}

/// Runs [`divisor_sum_check`] for every divisor `1 < d < v`. Empty for prime `v`.
pub fn divisor_sums_all(a: &PmSequence, b: &PmSequence) -> Result<Vec<(usize, DivisorSumReport)>> {
    let v = a.len();
    divisors(v)
        .into_iter()
        .filter(|&d| d > 1 && d < v)
        .map(|d| Ok((d, divisor_sum_check(&strided_sums(a, b, d)?))))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Corollary {
    /// `d = 3`: `Σ_{j<3} (A_j² + B_j²) = 8m − 2`.
    Vertical,
    /// `d = v/3`: `Σ_i (A_i² + B_i²) = 2v + 4`.
    Horizontal,
    /// `d = 5`: cross sum `= 4m` and the gap-{2,3} and gap-{1,4} cross sums agree.
    Mod5,
}

impl Corollary {
    pub fn name(&self) -> &'static str {
        match self {
            Corollary::Vertical => "vertical",
            Corollary::Horizontal => "horizontal",
            Corollary::Mod5 => "mod-5",
        }
    }

    /// The divisor this corollary uses for `v`, if it applies.
    pub fn divisor(&self, v: usize) -> Option<usize> {
        match self {
            Corollary::Vertical if v % 3 == 0 => Some(3),
            Corollary::Horizontal if v % 3 == 0 => Some(v / 3),
            Corollary::Mod5 if v % 5 == 0 => Some(5),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorollaryReport {
    pub corollary: Corollary,
    /// `(observed, expected)` per equation.
    pub equations: Vec<(i64, i64)>,
}

impl CorollaryReport {
    pub fn passed(&self) -> bool {
        self.equations.iter().all(|(got, want)| got == want)
    }
}

pub fn corollary_check(profile: &DivisorProfile, corollary: Corollary) -> Result<CorollaryReport> {
    let (v, d, m) = (profile.v, profile.d, profile.m as i64);
    if corollary.divisor(v) != Some(d) {
        return Err(Error::CorollaryNotApplicable {
            corollary: corollary.name(),
            v,
            d,
        });
    }
    let equations = match corollary {
        Corollary::Vertical => vec![(profile.sum_of_squares(), 8 * m - 2)],
        Corollary::Horizontal => vec![(profile.sum_of_squares(), 2 * v as i64 + 4)],
        Corollary::Mod5 => {
            let near = profile.cross_sum_where(|gap| gap == 1 || gap == 4);
            let far = profile.cross_sum_where(|gap| gap == 2 || gap == 3);
            vec![(near + far, 4 * m), (far - near, 0)]
        }
    };
    Ok(CorollaryReport {
        corollary,
        equations,
    })
}

/// Every corollary that applies to `v`, evaluated on the pair.
pub fn applicable_corollaries(a: &PmSequence, b: &PmSequence) -> Result<Vec<CorollaryReport>> {
    [Corollary::Vertical, Corollary::Horizontal, Corollary::Mod5]
        .into_iter()
        .filter_map(|c| c.divisor(a.len()).map(|d| (c, d)))
        .map(|(c, d)| corollary_check(&strided_sums(a, b, d)?, c))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SineIdentity {
    pub value: f64,
    pub expected: f64,
    pub passed: bool,
}

/// `Σ_{k<l} (A_k A_l + B_k B_l) sin²(π(l−k)r/d) = v/2`, within `10⁻⁶·v`.
pub fn sine_identity_check(profile: &DivisorProfile, residue: usize) -> SineIdentity {
    let d = profile.d;
    let mut value = 0.0;
    for k in 0..d {
        for l in k + 1..d {
            let s = (PI * ((l - k) * residue) as f64 / d as f64).sin();
            value += profile.cross(k, l) as f64 * s * s;
        }
    }
    let expected = profile.v as f64 / 2.0;
    SineIdentity {
        value,
        expected,
        passed: (value - expected).abs() <= psd_tolerance(profile.v),
    }
}
