//! Sort-and-match search for orbit-structured SDSs.
//!
//! The pipeline runs in four stages, each usable on its own:
//!
//! 1. [`generate_candidates`] draws random unions of `H`-orbits of the right
//!    size for one side and keeps those passing the PSD criterion.
//! 2. Each candidate is keyed by its fingerprint: the set-form PAF at one
//!    representative per nonzero `H*`-orbit. For side B every value is
//!    subtracted from `λ`, so an A and a B candidate form an SDS exactly when
//!    their fingerprints are equal.
//! 3. [`sort_pool`] orders a pool file by fingerprint with a chunked external
//!    merge sort.
//! 4. [`match_pool_files`] walks two sorted pools in one linear pass and
//!    [`reconstruct`] rebuilds and certifies every matched pair.

mod generate;
mod matching;
mod pool;
mod solutions;
mod sort;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

pub use generate::{
    count_orbit_unions, default_max_draws, generate_candidates, generate_parallel,
    generate_with_budget, GenerateStats,
};
pub use matching::{match_pool_files, match_records, reconstruct, Reconstruction};
pub use pool::{read_pool, write_pool, PoolHeader, PoolReader, PoolWriter};
pub use solutions::{read_solutions, write_solutions, SdsSolution};
pub use sort::{sort_pool, SortStats};

use crate::constraints::ParamSet;
use crate::error::{Error, Result};
use crate::numtheory::{OrbitSystem, Subgroup};
use crate::seqcore::set_paf_at;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::B => "B",
        })
    }
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" | "a" => Ok(Side::A),
            "B" | "b" => Ok(Side::B),
            other => Err(format!("side must be A or B, got {other:?}")),
        }
    }
}

/// Everything a search run is parameterised by: the target parameters, the
/// subgroup `H` with its orbits, and the `H*` representatives the
/// fingerprints are taken at.
#[derive(Clone, Debug)]
pub struct SearchSpace {
    params: ParamSet,
    generators: Vec<usize>,
    orbits: OrbitSystem,
    fingerprint_reps: Vec<usize>,
}

impl SearchSpace {
    pub fn new(params: ParamSet, generators: &[usize]) -> Result<Self> {
        let generators = if generators.is_empty() {
            vec![1]
        } else {
            generators.to_vec()
        };
        let subgroup = Subgroup::from_generators(params.v, &generators)?;
        let orbits = OrbitSystem::new(subgroup);
        let fingerprint_reps = orbits.with_negation().nonzero_representatives();
        Ok(SearchSpace {
            params,
            generators,
            orbits,
            fingerprint_reps,
        })
    }

    pub fn params(&self) -> &ParamSet {
        &self.params
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn orbits(&self) -> &OrbitSystem {
        &self.orbits
    }

    /// Shifts `d` at which fingerprints are evaluated, ascending.
    pub fn fingerprint_reps(&self) -> &[usize] {
        &self.fingerprint_reps
    }

    pub fn target_size(&self, side: Side) -> usize {
        match side {
            Side::A => self.params.r,
            Side::B => self.params.s,
        }
    }

    pub fn header(&self) -> PoolHeader {
        PoolHeader {
            v: self.params.v,
            h: self.orbits.subgroup().order(),
            generators: self.generators.clone(),
            r: self.params.r,
            s: self.params.s,
            lambda: self.params.lambda,
        }
    }

    /// Builds a record from orbit labels.
    pub fn record(&self, side: Side, labels: &[usize]) -> CandidateRecord {
        let mut labels: Vec<usize> = labels
            .iter()
            .map(|&j| self.orbits.representative_of(j))
            .collect();
        labels.sort_unstable();
        labels.dedup();
        let support = self.orbits.union_of(&labels);
        CandidateRecord {
            side,
            v: self.params.v,
            size: support.len(),
            lambda: self.params.lambda,
            fingerprint: encode_fingerprint(&support, side, self),
            labels,
        }
    }
}

/// One side of a potential solution: its orbit labels and fingerprint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CandidateRecord {
    pub side: Side,
    pub v: usize,
    /// `r` for side A, `s` for side B.
    pub size: usize,
    pub lambda: usize,
    pub fingerprint: Vec<i64>,
    /// Minimal elements of the orbits whose union is the support.
    pub labels: Vec<usize>,
}

impl CandidateRecord {
    /// The order used by [`sort_pool`]: fingerprint, then labels.
    pub fn sort_key(&self) -> (&[i64], &[usize]) {
        (&self.fingerprint, &self.labels)
    }
}

/// `set_paf(X)[d]` at each fingerprint representative for side A, and
/// `λ − set_paf(Y)[d]` for side B.
pub fn encode_fingerprint(support: &[usize], side: Side, space: &SearchSpace) -> Vec<i64> {
    let v = space.params.v;
    let mut member = vec![false; v];
    for &x in support {
        member[x] = true;
    }
    let values = set_paf_at(&member, support, space.fingerprint_reps.iter().copied());
    match side {
        Side::A => values,
        Side::B => {
            let lambda = space.params.lambda as i64;
            values.into_iter().map(|p| lambda - p).collect()
        }
    }
}

/// Counts from one end-to-end run of [`run_pipeline`].
#[derive(Clone, Debug, Default)]
pub struct PipelineReport {
    pub a_candidates: usize,
    pub b_candidates: usize,
    pub matches: usize,
    pub solutions: Vec<SdsSolution>,
    pub collisions: usize,
}

/// Generate both pools into `dir`, sort them, match and reconstruct.
pub fn run_pipeline(
    space: &SearchSpace,
    count: usize,
    seed: u64,
    workers: usize,
    chunk_records: usize,
    dir: &Path,
) -> Result<PipelineReport> {
    let mut report = PipelineReport::default();
    let mut paths = Vec::new();
    for (i, side) in [Side::A, Side::B].into_iter().enumerate() {
        let records = generate_parallel(space, side, count, seed + i as u64, workers, None)?.0;
        match side {
            Side::A => report.a_candidates = records.len(),
            Side::B => report.b_candidates = records.len(),
        }
        let path = dir.join(format!("pool_{side}.tsv"));
        write_pool(&path, &space.header(), &records)?;
        sort_pool(&path, &path, chunk_records)?;
        paths.push(path);
    }
    let matches = match_pool_files(&paths[0], &paths[1])?;
    report.matches = matches.len();
    for pair in &matches {
        match reconstruct(pair, space)? {
            Reconstruction::Solution(sol) => report.solutions.push(sol),
            Reconstruction::Collision { .. } => report.collisions += 1,
        }
    }
    Ok(report)
}

pub(crate) fn parse_list(field: &str) -> Result<Vec<i64>, String> {
    if field.is_empty() || field == "-" {
        return Ok(Vec::new());
    }
    field
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| format!("bad integer {t:?}: {e}"))
        })
        .collect()
}

pub(crate) fn parse_index_list(field: &str) -> Result<Vec<usize>, String> {
    if field.is_empty() || field == "-" {
        return Ok(Vec::new());
    }
    field
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad index {t:?}: {e}"))
        })
        .collect()
}

pub(crate) fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub(crate) fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}
