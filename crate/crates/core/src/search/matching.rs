use std::path::Path;

use super::pool::PoolReader;
use super::{CandidateRecord, SdsSolution, SearchSpace, Side};
use crate::error::{Error, Result};
use crate::verify::verify_sds;

/// Groups a sorted record stream into runs of equal fingerprint, checking
/// order and side consistency on the way.
struct Runs<I: Iterator> {
    records: std::iter::Peekable<I>,
    last: Option<CandidateRecord>,
    side: Option<Side>,
    position: usize,
    path: std::path::PathBuf,
}

impl<I: Iterator<Item = Result<CandidateRecord>>> Runs<I> {
    fn new(records: I, path: &Path) -> Self {
        Runs {
            records: records.peekable(),
            last: None,
            side: None,
            position: 1,
            path: path.to_path_buf(),
        }
    }

    fn pull(&mut self) -> Result<Option<CandidateRecord>> {
        let Some(rec) = self.records.next().transpose()? else {
            return Ok(None);
        };
        self.position += 1;
        if let Some(prev) = &self.last {
            if rec.sort_key() < prev.sort_key() {
                return Err(Error::Unsorted {
                    path: self.path.clone(),
                    line: self.position,
                });
            }
        }
        match self.side {
            Some(side) if side != rec.side => {
                return Err(Error::PoolMismatch(format!(
                    "{} mixes side {} and side {} records",
                    self.path.display(),
                    side,
                    rec.side
                )))
            }
            _ => self.side = Some(rec.side),
        }
        self.last = Some(rec.clone());
        Ok(Some(rec))
    }

    fn next_run(&mut self) -> Result<Option<Vec<CandidateRecord>>> {
        let Some(first) = self.pull()? else {
            return Ok(None);
        };
        let mut run = vec![first];
        loop {
            let same = match self.records.peek() {
                Some(Ok(next)) => next.fingerprint == run[0].fingerprint,
                Some(Err(_)) => true,
                None => false,
            };
            if !same {
                break;
            }
            match self.pull()? {
                Some(rec) => run.push(rec),
                None => break,
            }
        }
        Ok(Some(run))
    }
}

/// Every `(left, right)` pair with equal fingerprints from two sorted record
/// streams, in one linear pass.
pub fn match_records<L, R>(
    left: L,
    right: R,
    left_name: &Path,
    right_name: &Path,
) -> Result<Vec<(CandidateRecord, CandidateRecord)>>
where
    L: IntoIterator<Item = Result<CandidateRecord>>,
    R: IntoIterator<Item = Result<CandidateRecord>>,
{
    let mut lruns = Runs::new(left.into_iter(), left_name);
    let mut rruns = Runs::new(right.into_iter(), right_name);
    let mut out = Vec::new();
    let mut l = lruns.next_run()?;
    let mut r = rruns.next_run()?;
    while let (Some(lrun), Some(rrun)) = (&l, &r) {
        if let (Some(ls), Some(rs)) = (lruns.side, rruns.side) {
            if ls == rs {
                return Err(Error::PoolMismatch(format!(
                    "both pools hold side {ls} records"
                )));
            }
        }
        match lrun[0].fingerprint.cmp(&rrun[0].fingerprint) {
            std::cmp::Ordering::Less => l = lruns.next_run()?,
            std::cmp::Ordering::Greater => r = rruns.next_run()?,
            std::cmp::Ordering::Equal => {
                for a in lrun {
                    for b in rrun {
                        out.push((a.clone(), b.clone()));
                    }
                }
                l = lruns.next_run()?;
                r = rruns.next_run()?;
            }
        }
    }
    // Drain the rest so ordering errors past the last match still surface.
    while lruns.next_run()?.is_some() {}
    while rruns.next_run()?.is_some() {}
    Ok(out)
}

/// Matches two sorted pool files built for the same parameters and subgroup.
pub fn match_pool_files(
    left: &Path,
    right: &Path,
) -> Result<Vec<(CandidateRecord, CandidateRecord)>> {
    let lreader = PoolReader::open(left)?;
    let rreader = PoolReader::open(right)?;
    if lreader.header() != rreader.header() {
        return Err(Error::PoolMismatch(format!(
            "headers differ: {:?} vs {:?}",
            lreader.header().to_string(),
            rreader.header().to_string()
        )));
    }
    match_records(lreader, rreader, left, right)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reconstruction {
    Solution(SdsSolution),
    /// Fingerprints agreed but the rebuilt pair is not an SDS.
    Collision {
        a_labels: Vec<usize>,
        b_labels: Vec<usize>,
        violations: Vec<(usize, i64)>,
    },
}

/// Rebuilds `X = ∪_{j∈J} H·j`, `Y = ∪_{k∈K} H·k` from a matched pair and
/// certifies it over every shift.
pub fn reconstruct(
    pair: &(CandidateRecord, CandidateRecord),
    space: &SearchSpace,
) -> Result<Reconstruction> {
    let (a, b) = match (pair.0.side, pair.1.side) {
        (Side::A, Side::B) => (&pair.0, &pair.1),
        (Side::B, Side::A) => (&pair.1, &pair.0),
        (s, _) => return Err(Error::PoolMismatch(format!("both records are side {s}"))),
    };
    let sys = space.orbits();
    let x = sys.union_of(&a.labels);
    let y = sys.union_of(&b.labels);
    let cert = verify_sds(&x, &y, space.params())?;
    if cert.passed() {
        Ok(Reconstruction::Solution(SdsSolution {
            params: *space.params(),
            x,
            y,
            j: Some(a.labels.clone()),
            k: Some(b.labels.clone()),
            provenance: format!("search gens={}", super::join(space.generators())),
        }))
    } else {
        Ok(Reconstruction::Collision {
            a_labels: a.labels.clone(),
            b_labels: b.labels.clone(),
            violations: cert.violations(),
        })
    }
}
