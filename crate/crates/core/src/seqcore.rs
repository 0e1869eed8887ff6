//! ±1 sequences and their periodic autocorrelation and power spectrum.
//!
//! A subset `X ⊆ Z_v` is identified with the sequence that is `−1` on `X`
//! and `+1` elsewhere. Two autocorrelation forms are provided: [`paf`] on the
//! sequence and [`set_paf`] counting `|X ∩ (X + d)|`. They are related by
//! `paf(d) = v − 4(|X| − set_paf(d))`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numtheory::OrbitSystem;

/// Absolute tolerance used for floating-point PSD comparisons at length `v`.
pub fn psd_tolerance(v: usize) -> f64 {
    1e-6 * v as f64
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PmSequence {
    entries: Vec<i8>,
}

impl PmSequence {
    /// `−1` at the indices in `support`, `+1` elsewhere.
    pub fn from_set(v: usize, support: &[usize]) -> Result<Self> {
        let mut entries = vec![1i8; v];
        for &i in support {
            if i >= v {
                return Err(Error::IndexOutOfRange { v, index: i });
            }
            entries[i] = -1;
        }
        Ok(PmSequence { entries })
    }

    pub fn from_entries(entries: &[i64]) -> Result<Self> {
        let entries = entries
            .iter()
            .enumerate()
            .map(|(position, &value)| match value {
                1 => Ok(1),
                -1 => Ok(-1),
                _ => Err(Error::NotPlusMinusOne { position, value }),
            })
            .collect::<Result<Vec<i8>>>()?;
        Ok(PmSequence { entries })
    }

    pub fn all_ones(v: usize) -> Self {
        PmSequence {
            entries: vec![1; v],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> i64 {
        self.entries[i % self.len()] as i64
    }

    /// The sorted index set where the sequence is `−1`.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.entries[i] < 0).collect()
    }

    pub fn row_sum(&self) -> i64 {
        self.entries.iter().map(|&x| x as i64).sum()
    }
}

/// Periodic autocorrelation `Σ_i a_i a_{i+d}`, indexed by `d = 0..v`.
pub fn paf(seq: &PmSequence) -> Vec<i64> {
    let v = seq.len();
    let a = seq.entries();
    (0..v)
        .map(|d| (0..v).map(|i| (a[i] * a[(i + d) % v]) as i64).sum())
        .collect()
}

/// `|X ∩ (X + d)|` for `d = 0..v`.
pub fn set_paf(v: usize, set: &[usize]) -> Vec<i64> {
    let mut member = vec![false; v];
    for &x in set {
        member[x % v] = true;
    }
    set_paf_at(&member, set, 0..v)
}

/// `|X ∩ (X + d)|` for the requested shifts only, given a membership mask.
pub(crate) fn set_paf_at(
    member: &[bool],
    set: &[usize],
    shifts: impl IntoIterator<Item = usize>,
) -> Vec<i64> {
    let v = member.len();
    shifts
        .into_iter()
        .map(|d| set.iter().filter(|&&x| member[(x + d) % v]).count() as i64)
        .collect()
}

/// Cosine/sine of `2π t / v` for `t = 0..v`.
struct RootTable {
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl RootTable {
    fn new(v: usize) -> Self {
        let (cos, sin) = (0..v)
            .map(|t| {
                let theta = 2.0 * PI * t as f64 / v as f64;
                (theta.cos(), theta.sin())
            })
            .unzip();
        RootTable { cos, sin }
    }

    fn psd_at(&self, seq: &PmSequence, k: usize) -> f64 {
        let v = seq.len();
        let (mut re, mut im) = (0.0, 0.0);
        for (alpha, &x) in seq.entries().iter().enumerate() {
            let t = (alpha * k) % v;
            re += x as f64 * self.cos[t];
            im += x as f64 * self.sin[t];
        }
        re * re + im * im
    }
}

/// `|DFT(k)|²` for a single frequency.
pub fn psd_at(seq: &PmSequence, k: usize) -> f64 {
    RootTable::new(seq.len()).psd_at(seq, k % seq.len())
}

/// All PSD values `|Σ_α x_α ω^{αk}|²`, `k = 0..v`, by direct evaluation.
pub fn psd(seq: &PmSequence) -> Vec<f64> {
    let table = RootTable::new(seq.len());
    (0..seq.len()).map(|k| table.psd_at(seq, k)).collect()
}

/// PSD values at selected frequencies, sharing one table of roots of unity.
pub fn psd_at_many(seq: &PmSequence, ks: &[usize]) -> Vec<f64> {
    let table = RootTable::new(seq.len());
    ks.iter()
        .map(|&k| table.psd_at(seq, k % seq.len()))
        .collect()
}

/// Checks that `support` is a union of orbits of `sys`.
pub fn check_orbit_closed(support: &[usize], sys: &OrbitSystem) -> Result<()> {
    sys.labels_of(support).map(|_| ())
}

/// One PSD value per nonzero orbit of `H*`, evaluated at its representative.
///
/// The support of `seq` must be a union of `H`-orbits, which makes the PSD
/// constant on each `H*`-orbit.
pub fn psd_on_orbit_reps(seq: &PmSequence, sys: &OrbitSystem) -> Result<Vec<(usize, f64)>> {
    if seq.len() != sys.modulus() {
        return Err(Error::LengthMismatch(seq.len(), sys.modulus()));
    }
    check_orbit_closed(&seq.support(), sys)?;
    let reps = sys.with_negation().nonzero_representatives();
    let values = psd_at_many(seq, &reps);
    Ok(reps.into_iter().zip(values).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sequence_from_set_basic() {
        let s = PmSequence::from_set(3, &[0]).unwrap();
        assert_eq!(s.entries(), &[-1, 1, 1]);
        assert_eq!(s.row_sum(), 1);
        assert_eq!(PmSequence::from_set(5, &[]).unwrap().row_sum(), 5);
        assert!(matches!(
            PmSequence::from_set(5, &[5]),
            Err(Error::IndexOutOfRange { v: 5, index: 5 })
        ));
        assert!(PmSequence::from_entries(&[1, 0, -1]).is_err());
    }

    #[test]
    fn paf_small() {
        assert_eq!(paf(&PmSequence::all_ones(5)), vec![5; 5]);
        let s = PmSequence::from_set(3, &[0]).unwrap();
        // d=1: (-1)(1) + (1)(1) + (1)(-1) = -1
        assert_eq!(paf(&s), vec![3, -1, -1]);
    }

    #[test]
    fn set_paf_small() {
        let full: Vec<usize> = (0..7).collect();
        assert_eq!(set_paf(7, &full), vec![7; 7]);
        assert_eq!(set_paf(3, &[0]), vec![1, 0, 0]);
    }

    #[test]
    fn psd_of_constant() {
        let p = psd(&PmSequence::all_ones(5));
        assert!((p[0] - 25.0).abs() < 1e-9);
        assert!(p[1..].iter().all(|x| x.abs() < 1e-9));
    }

    #[test]
    fn orbit_reps_counts() {
        let sys = OrbitSystem::from_generators(131, &[53]).unwrap();
        let x = sys.union_of(&[0, 1, 12]);
        let seq = PmSequence::from_set(131, &x).unwrap();
        assert_eq!(psd_on_orbit_reps(&seq, &sys).unwrap().len(), 13);

        let trivial = OrbitSystem::from_generators(11, &[]).unwrap();
        let seq = PmSequence::from_set(11, &[0, 3, 4]).unwrap();
        assert_eq!(psd_on_orbit_reps(&seq, &trivial).unwrap().len(), 5);
    }

    #[test]
    fn orbit_reps_rejects_non_closed_support() {
        let sys = OrbitSystem::from_generators(13, &[3]).unwrap();
        let seq = PmSequence::from_set(13, &[1, 3]).unwrap();
        assert!(matches!(
            psd_on_orbit_reps(&seq, &sys),
            Err(Error::NotOrbitClosed { .. })
        ));
    }

    fn pm_sequence(max_len: usize) -> impl Strategy<Value = PmSequence> {
        (1..max_len / 2)
            .prop_map(|h| 2 * h + 1)
            .prop_flat_map(|v| proptest::collection::vec(any::<bool>(), v))
            .prop_map(|bits| {
                let entries: Vec<i64> = bits.iter().map(|&b| if b { -1 } else { 1 }).collect();
                PmSequence::from_entries(&entries).unwrap()
            })
    }

    proptest! {
        #[test]
        fn support_roundtrip(seq in pm_sequence(41)) {
            let again = PmSequence::from_set(seq.len(), &seq.support()).unwrap();
            prop_assert_eq!(&again, &seq);
            prop_assert_eq!(seq.row_sum(), seq.len() as i64 - 2 * seq.support().len() as i64);
        }

        #[test]
        fn paf_symmetric_and_congruent(seq in pm_sequence(41)) {
            let v = seq.len();
            let p = paf(&seq);
            prop_assert_eq!(p[0], v as i64);
            for d in 1..v {
                prop_assert_eq!(p[d], p[v - d]);
                prop_assert_eq!((p[d] - v as i64).rem_euclid(4), 0);
            }
        }

        #[test]
        fn paf_agrees_with_set_form(seq in pm_sequence(41)) {
            let v = seq.len();
            let x = seq.support();
            let p = paf(&seq);
            let sp = set_paf(v, &x);
            for d in 1..v {
                prop_assert_eq!(p[d], v as i64 - 4 * (x.len() as i64 - sp[d]));
            }
        }

        #[test]
        fn wiener_khinchin(seq in pm_sequence(41)) {
            let v = seq.len();
            let p = paf(&seq);
            let spectrum = psd(&seq);
            let tol = psd_tolerance(v);
            for k in 0..v {
                let via_paf: f64 = (0..v)
                    .map(|d| p[d] as f64 * (2.0 * PI * (d * k % v) as f64 / v as f64).cos())
                    .sum();
                prop_assert!((via_paf - spectrum[k]).abs() < tol);
            }
        }

        #[test]
        fn psd_symmetry_and_parseval(seq in pm_sequence(41)) {
            let v = seq.len();
            let spectrum = psd(&seq);
            let tol = psd_tolerance(v);
            for k in 1..v {
                prop_assert!((spectrum[k] - spectrum[v - k]).abs() < tol);
                prop_assert!(spectrum[k] > -tol);
            }
            prop_assert!((spectrum[0] - (seq.row_sum() * seq.row_sum()) as f64).abs() < tol);
            let total: f64 = spectrum.iter().sum();
            prop_assert!((total - (v * v) as f64).abs() < tol * v as f64);
        }
    }
}
