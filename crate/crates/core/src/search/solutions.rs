//! Verified solutions and their TSV file.
//!
//! ```text
//! #dopt-solutions
//! v<TAB>r<TAB>s<TAB>lambda<TAB>X<TAB>Y<TAB>J<TAB>K<TAB>provenance
//! ```
//!
//! `J` and `K` are `-` when the solution is not orbit-structured.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::{join, parse_error, parse_index_list};
use crate::constraints::ParamSet;
use crate::error::Result;
use crate::seqcore::PmSequence;

const HEADER: &str = "#dopt-solutions";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdsSolution {
    pub params: ParamSet,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub j: Option<Vec<usize>>,
    pub k: Option<Vec<usize>>,
    pub provenance: String,
}

impl SdsSolution {
    pub fn sequences(&self) -> Result<(PmSequence, PmSequence)> {
        Ok((
            PmSequence::from_set(self.params.v, &self.x)?,
            PmSequence::from_set(self.params.v, &self.y)?,
        ))
    }
}

pub fn write_solutions(path: &Path, solutions: &[SdsSolution]) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{HEADER}")?;
    let opt = |o: &Option<Vec<usize>>| o.as_ref().map_or("-".to_string(), |l| join(l));
    for sol in solutions {
        let p = &sol.params;
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            p.v,
            p.r,
            p.s,
            p.lambda,
            join(&sol.x),
            join(&sol.y),
            opt(&sol.j),
            opt(&sol.k),
            sol.provenance
        )?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_solutions(path: &Path) -> Result<Vec<SdsSolution>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |m: String| parse_error(path, lineno, m);
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 9 {
            return Err(err(format!("expected 9 columns, got {}", cols.len())));
        }
        let number = |s: &str| s.parse::<usize>().map_err(|e| err(e.to_string()));
        let (v, r, s, lambda) = (
            number(cols[0])?,
            number(cols[1])?,
            number(cols[2])?,
            number(cols[3])?,
        );
        let params = ParamSet::new(v, r, s).map_err(|e| err(e.to_string()))?;
        if params.lambda != lambda {
            return Err(err(format!("lambda {lambda} != {}", params.lambda)));
        }
        let list = |s: &str| parse_index_list(s).map_err(err);
        let opt = |s: &str| {
            if s == "-" {
                Ok(None)
            } else {
                list(s).map(Some)
            }
        };
        out.push(SdsSolution {
            params,
            x: list(cols[4])?,
            y: list(cols[5])?,
            j: opt(cols[6])?,
            k: opt(cols[7])?,
            provenance: cols[8].to_string(),
        });
    }
    Ok(out)
}
