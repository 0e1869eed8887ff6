//! Published D-optimal SDSs and the existence table for odd `v < 200`.
//!
//! The data lives in `data/catalog.json`, compiled into the library. Entries
//! with `J`/`K` are orbit unions under the subgroup generated by
//! `generators`; the `v = 63` entry lists `X`/`Y` directly. Rows without data
//! record only whether a solution is known (`known`) or not (`open`).

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::constraints::{applicable_corollaries, divisor_sums_all, feasible_params, ParamSet};
use crate::error::Result;
use crate::numtheory::{OrbitSystem, Subgroup};
use crate::search::{encode_fingerprint, SearchSpace, Side};
use crate::seqcore::{psd, psd_tolerance, PmSequence};
use crate::verify::{verify_matrix_equation, verify_sds};

const CATALOG_JSON: &str = include_str!("../data/catalog.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Known,
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub v: usize,
    pub r: usize,
    pub s: usize,
    pub lambda: usize,
    pub a: usize,
    pub b: usize,
    pub status: Status,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<usize>>,
    #[serde(rename = "J", default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<usize>>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<Vec<usize>>,
    #[serde(rename = "X", default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<usize>>,
    #[serde(rename = "Y", default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<usize>>,
}

impl CatalogEntry {
    pub fn params(&self) -> Result<ParamSet> {
        ParamSet::new(self.v, self.r, self.s)
    }

    pub fn has_data(&self) -> bool {
        self.x.is_some() || self.j.is_some()
    }

    pub fn orbit_system(&self) -> Result<OrbitSystem> {
        let gens = self.generators.clone().unwrap_or_else(|| vec![1]);
        Ok(OrbitSystem::new(Subgroup::from_generators(self.v, &gens)?))
    }

    /// The explicit blocks `(X, Y)`, expanding `J`/`K` when needed.
    pub fn blocks(&self) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
        if let (Some(x), Some(y)) = (&self.x, &self.y) {
            return Ok(Some((x.clone(), y.clone())));
        }
        match (&self.j, &self.k) {
            (Some(j), Some(k)) => {
                let sys = self.orbit_system()?;
                Ok(Some((sys.union_of(j), sys.union_of(k))))
            }
            _ => Ok(None),
        }
    }
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}; {}, {}; {}) {:<5} {}",
            self.v,
            self.r,
            self.s,
            self.lambda,
            match self.status {
                Status::Known => "yes",
                Status::Open => "?",
            },
            self.source
        )?;
        if let Some(g) = &self.generators {
            write!(f, " gens={g:?}")?;
        }
        if let (Some(j), Some(k)) = (&self.j, &self.k) {
            write!(f, " J={j:?} K={k:?}")?;
        }
        if let (Some(x), Some(y)) = (&self.x, &self.y) {
            write!(f, " X={x:?} Y={y:?}")?;
        }
        Ok(())
    }
}

/// Every catalog entry, ordered by `v` then descending `r`.
pub fn catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG
        .get_or_init(|| serde_json::from_str(CATALOG_JSON).expect("embedded catalog is valid JSON"))
}

/// The embedded catalog as JSON, exactly as shipped.
pub fn catalog_json() -> &'static str {
    CATALOG_JSON
}

pub fn catalog_lookup(v: usize) -> Vec<&'static CatalogEntry> {
    catalog().iter().filter(|e| e.v == v).collect()
}

/// Entries carrying explicit solution data.
pub fn explicit_entries() -> Vec<&'static CatalogEntry> {
    catalog().iter().filter(|e| e.has_data()).collect()
}

/// One named check inside a [`SelftestEntry`].
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelftestEntry {
    pub label: String,
    pub checks: Vec<Check>,
}

impl SelftestEntry {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SelftestReport {
    pub entries: Vec<SelftestEntry>,
    /// Entries skipped for lack of data.
    pub skipped: usize,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed())
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for entry in &self.entries {
            writeln!(
                f,
                "{} {}",
                if entry.passed() { "PASS" } else { "FAIL" },
                entry.label
            )?;
            for check in entry.checks.iter().filter(|c| !c.passed) {
                writeln!(f, "    {}: {}", check.name, check.detail)?;
            }
        }
        write!(
            f,
            "{} checked, {} failed, {} without data skipped",
            self.entries.len(),
            self.entries.iter().filter(|e| !e.passed()).count(),
            self.skipped
        )
    }
}

/// Runs every certification check on the full catalog.
pub fn selftest() -> SelftestReport {
    selftest_entries(catalog())
}

pub fn selftest_entries(entries: &[CatalogEntry]) -> SelftestReport {
    let mut report = SelftestReport::default();
    for entry in entries {
        if !entry.has_data() {
            report.skipped += 1;
            continue;
        }
        let label = format!(
            "({}; {}, {}; {}) {}",
            entry.v, entry.r, entry.s, entry.lambda, entry.source
        );
        let checks = match check_entry(entry) {
            Ok(checks) => checks,
            Err(e) => vec![Check {
                name: "data",
                passed: false,
                detail: e.to_string(),
            }],
        };
        report.entries.push(SelftestEntry { label, checks });
    }
    report
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name,
        passed,
        detail: detail.into(),
    }
}

fn check_entry(entry: &CatalogEntry) -> Result<Vec<Check>> {
    let params = entry.params()?;
    let (x, y) = entry.blocks()?.expect("entry has data");
    let (a, b) = (
        PmSequence::from_set(entry.v, &x)?,
        PmSequence::from_set(entry.v, &y)?,
    );
    let mut checks = Vec::new();

    let feasible = feasible_params(entry.v)?.contains(&params) && params.lambda == entry.lambda;
    checks.push(check(
        "parameters",
        feasible,
        format!("{params} not feasible"),
    ));

    let cert = verify_sds(&x, &y, &params)?;
    checks.push(check(
        "sds",
        cert.passed(),
        format!(
            "sizes {:?}, violations at (d, count) {:?}",
            cert.sizes,
            cert.violations()
        ),
    ));

    checks.push(check(
        "matrix-equation",
        verify_matrix_equation(&a, &b)?,
        "PAF_A(d) + PAF_B(d) != 2 for some d != 0",
    ));

    let divisors = divisor_sums_all(&a, &b)?;
    let bad: Vec<usize> = divisors
        .iter()
        .filter(|(_, r)| !r.passed())
        .map(|(d, _)| *d)
        .collect();
    checks.push(check(
        "divisor-sums",
        bad.is_empty(),
        format!("failed for d in {bad:?}"),
    ));
    let bad: Vec<&str> = applicable_corollaries(&a, &b)?
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.corollary.name())
        .collect();
    checks.push(check(
        "corollaries",
        bad.is_empty(),
        format!("failed: {bad:?}"),
    ));

    let v = entry.v;
    let tol = psd_tolerance(v);
    let (pa, pb) = (psd(&a), psd(&b));
    let bad_k: Vec<usize> = (1..v)
        .filter(|&k| (pa[k] + pb[k] - (2 * v - 2) as f64).abs() > tol)
        .collect();
    checks.push(check(
        "psd-sum",
        bad_k.is_empty(),
        format!("PSD_A + PSD_B != 2v-2 at k in {bad_k:?}"),
    ));

    let star = entry.orbit_system()?.with_negation();
    let mut nonconstant = Vec::new();
    for orbit in star.orbits() {
        let k0 = orbit[0];
        for &k in orbit {
            if (pa[k] - pa[k0]).abs() > tol || (pb[k] - pb[k0]).abs() > tol {
                nonconstant.push(k);
            }
        }
    }
    checks.push(check(
        "psd-orbit-constancy",
        nonconstant.is_empty(),
        format!("PSD differs from orbit representative at k in {nonconstant:?}"),
    ));

    let space = SearchSpace::new(params, entry.generators.as_deref().unwrap_or(&[]))?;
    let fa = encode_fingerprint(&x, Side::A, &space);
    let fb = encode_fingerprint(&y, Side::B, &space);
    checks.push(check(
        "fingerprint",
        fa == fb,
        "A and B fingerprints differ",
    ));

    Ok(checks)
}
