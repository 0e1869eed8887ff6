//! Chunked external merge sort for pool files.
//!
//! The input is cut into runs of at most `chunk_records` records, each run is
//! sorted in memory and spilled to a temporary file, and the runs are merged
//! with a binary heap. Ties between runs resolve by run index, so the sort is
//! stable.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use rayon::prelude::*;
use tempfile::NamedTempFile;

use super::pool::{PoolReader, PoolWriter};
use super::CandidateRecord;
use crate::error::Result;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SortStats {
    pub records: usize,
    pub runs: usize,
}

fn compare(a: &CandidateRecord, b: &CandidateRecord) -> Ordering {
    a.sort_key().cmp(&b.sort_key())
}

struct HeapEntry {
    record: CandidateRecord,
    run: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapEntry {}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        compare(&self.record, &other.record).then(self.run.cmp(&other.run))
    }
}

/// Sorts the pool at `input` into `output` by fingerprint, then labels.
/// `input` and `output` may be the same path.
pub fn sort_pool(input: &Path, output: &Path, chunk_records: usize) -> Result<SortStats> {
    let chunk_records = chunk_records.max(1);
    let mut reader = PoolReader::open(input)?;
    let header = reader.header().clone();
    let out_dir = match output.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => std::env::current_dir()?,
    };

    let mut stats = SortStats::default();
    let mut runs: Vec<NamedTempFile> = Vec::new();
    let mut first_run: Option<Vec<CandidateRecord>> = None;
    loop {
        let mut chunk = Vec::with_capacity(chunk_records.min(1 << 20));
        for rec in reader.by_ref().take(chunk_records) {
            chunk.push(rec?);
        }
        if chunk.is_empty() {
            break;
        }
        stats.records += chunk.len();
        chunk.par_sort_by(compare);
        let last = chunk.len() < chunk_records;
        if runs.is_empty() && first_run.is_none() && last {
            first_run = Some(chunk);
            break;
        }
        if let Some(prev) = first_run.take() {
            runs.push(spill(&out_dir, &header, &prev)?);
        }
        runs.push(spill(&out_dir, &header, &chunk)?);
        if last {
            break;
        }
    }

    let target = NamedTempFile::new_in(&out_dir)?;
    let mut writer = PoolWriter::new(BufWriter::new(target.reopen()?), &header)?;
    if runs.is_empty() {
        stats.runs = usize::from(first_run.is_some());
        for rec in first_run.iter().flatten() {
            writer.write(rec)?;
        }
    } else {
        stats.runs = runs.len();
        merge_runs(&runs, &mut writer)?;
    }
    writer.finish()?;
    target.persist(output).map_err(|e| e.error)?;
    Ok(stats)
}

fn spill(
    dir: &Path,
    header: &super::PoolHeader,
    records: &[CandidateRecord],
) -> Result<NamedTempFile> {
    let file = NamedTempFile::new_in(dir)?;
    let mut writer = PoolWriter::new(BufWriter::new(file.reopen()?), header)?;
    for rec in records {
        writer.write(rec)?;
    }
    writer.finish()?;
    Ok(file)
}

fn merge_runs<W: std::io::Write>(runs: &[NamedTempFile], writer: &mut PoolWriter<W>) -> Result<()> {
    let mut readers = runs
        .iter()
        .map(|f| PoolReader::new(BufReader::new(File::open(f.path())?), f.path()))
        .collect::<Result<Vec<_>>>()?;
    let mut heap = BinaryHeap::with_capacity(readers.len());
    for (run, reader) in readers.iter_mut().enumerate() {
        if let Some(record) = reader.next().transpose()? {
            heap.push(Reverse(HeapEntry { record, run }));
        }
    }
    while let Some(Reverse(HeapEntry { record, run })) = heap.pop() {
        writer.write(&record)?;
        if let Some(next) = readers[run].next().transpose()? {
            heap.push(Reverse(HeapEntry { record: next, run }));
        }
    }
    Ok(())
}
