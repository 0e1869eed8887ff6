//! Candidate pool files.
//!
//! ```text
//! #dopt-pool v=13 h=3 gens=3 params=(6,3,3)
//! 13<TAB>A<TAB>6<TAB>3<TAB>2,2,2,2,2,2<TAB>1,2
//! ```
//!
//! Record columns are `v`, side, `r` or `s`, `λ`, fingerprint and orbit
//! labels; lists are comma separated and may be empty.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Lines, Write};
use std::path::{Path, PathBuf};

use super::{join, parse_error, parse_index_list, parse_list, CandidateRecord};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoolHeader {
    pub v: usize,
    pub h: usize,
    pub generators: Vec<usize>,
    pub r: usize,
    pub s: usize,
    pub lambda: usize,
}

impl fmt::Display for PoolHeader {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "#dopt-pool v={} h={} gens={} params=({},{},{})",
            self.v,
            self.h,
            join(&self.generators),
            self.r,
            self.s,
            self.lambda
        )
    }
}

impl PoolHeader {
    pub fn parse(line: &str) -> Result<Self, String> {
        let rest = line
            .strip_prefix("#dopt-pool")
            .ok_or_else(|| "missing #dopt-pool header".to_string())?;
        let (mut v, mut h, mut generators, mut params) = (None, None, None, None);
        for field in rest.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| format!("bad header field {field:?}"))?;
            let number = |s: &str| s.parse::<usize>().map_err(|e| format!("{key}: {e}"));
            match key {
                "v" => v = Some(number(value)?),
                "h" => h = Some(number(value)?),
                "gens" => generators = Some(parse_index_list(value)?),
                "params" => {
                    let inner = value
                        .strip_prefix('(')
                        .and_then(|s| s.strip_suffix(')'))
                        .ok_or_else(|| format!("bad params {value:?}"))?;
                    let nums = parse_index_list(inner)?;
                    if nums.len() != 3 {
                        return Err(format!("params needs 3 values, got {}", nums.len()));
                    }
                    params = Some((nums[0], nums[1], nums[2]));
                }
                _ => return Err(format!("unknown header field {key:?}")),
            }
        }
        let missing = |name: &str| format!("header lacks {name}");
        let (r, s, lambda) = params.ok_or_else(|| missing("params"))?;
        Ok(PoolHeader {
            v: v.ok_or_else(|| missing("v"))?,
            h: h.ok_or_else(|| missing("h"))?,
            generators: generators.ok_or_else(|| missing("gens"))?,
            r,
            s,
            lambda,
        })
    }
}

pub(crate) fn format_record(rec: &CandidateRecord) -> String {
    format!(
        "{}\t{}\t{}\t{}\t{}\t{}",
        rec.v,
        rec.side,
        rec.size,
        rec.lambda,
        join(&rec.fingerprint),
        join(&rec.labels)
    )
}

pub(crate) fn parse_record(line: &str) -> Result<CandidateRecord, String> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != 6 {
        return Err(format!(
            "expected 6 tab-separated columns, got {}",
            cols.len()
        ));
    }
    let number = |s: &str, what: &str| s.parse::<usize>().map_err(|e| format!("{what}: {e}"));
    Ok(CandidateRecord {
        v: number(cols[0], "v")?,
        side: cols[1].parse()?,
        size: number(cols[2], "size")?,
        lambda: number(cols[3], "lambda")?,
        fingerprint: parse_list(cols[4])?,
        labels: parse_index_list(cols[5])?,
    })
}

pub struct PoolWriter<W: Write> {
    out: W,
}

impl PoolWriter<BufWriter<File>> {
    pub fn create(path: &Path, header: &PoolHeader) -> Result<Self> {
        Self::new(BufWriter::new(File::create(path)?), header)
    }
}

impl<W: Write> PoolWriter<W> {
    pub fn new(mut out: W, header: &PoolHeader) -> Result<Self> {
        writeln!(out, "{header}")?;
        Ok(PoolWriter { out })
    }

    pub fn write(&mut self, rec: &CandidateRecord) -> Result<()> {
        writeln!(self.out, "{}", format_record(rec))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

/// Streams records from a pool file, tracking line numbers for errors.
pub struct PoolReader<R: BufRead> {
    path: PathBuf,
    header: PoolHeader,
    lines: Lines<R>,
    line: usize,
}

impl PoolReader<BufReader<File>> {
    pub fn open(path: &Path) -> Result<Self> {
        Self::new(BufReader::new(File::open(path)?), path)
    }
}

impl<R: BufRead> PoolReader<R> {
    pub fn new(input: R, path: &Path) -> Result<Self> {
        let mut lines = input.lines();
        let first = lines
            .next()
            .transpose()?
            .ok_or_else(|| parse_error(path, 1, "empty pool file"))?;
        let header = PoolHeader::parse(&first).map_err(|m| parse_error(path, 1, m))?;
        Ok(PoolReader {
            path: path.to_path_buf(),
            header,
            lines,
            line: 1,
        })
    }

    pub fn header(&self) -> &PoolHeader {
        &self.header
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Line number of the most recently returned record.
    pub fn line(&self) -> usize {
        self.line
    }
}

impl<R: BufRead> Iterator for PoolReader<R> {
    type Item = Result<CandidateRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let text = match self.lines.next()? {
                Ok(t) => t,
                Err(e) => return Some(Err(e.into())),
            };
            self.line += 1;
            if text.is_empty() {
                continue;
            }
            return Some(parse_record(&text).map_err(|m| parse_error(&self.path, self.line, m)));
        }
    }
}

pub fn write_pool(path: &Path, header: &PoolHeader, records: &[CandidateRecord]) -> Result<()> {
    let mut writer = PoolWriter::create(path, header)?;
    for rec in records {
        writer.write(rec)?;
    }
    writer.finish()?;
    Ok(())
}

pub fn read_pool(path: &Path) -> Result<(PoolHeader, Vec<CandidateRecord>)> {
    let reader = PoolReader::open(path)?;
    let header = reader.header().clone();
    let records = reader.collect::<Result<Vec<_>>>()?;
    Ok((header, records))
}
