use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use dopt_core::catalog::{self, Status};
use dopt_core::numtheory::{is_prime, OrbitSystem, Subgroup};
use dopt_core::search::{
    generate_parallel, match_pool_files, read_solutions, reconstruct, sort_pool, write_pool,
    write_solutions, PoolReader, Reconstruction, SearchSpace, Side,
};
use dopt_core::verify::{
    build_dmatrix, ehlich_bound, exact_determinant, verify_matrix_equation, verify_sds,
    DEFAULT_DET_CAP,
};
use dopt_core::{feasible_params, Error, ParamSet, PmSequence};

#[derive(Parser)]
#[command(
    name = "dopt",
    version,
    about = "Supplementary difference sets and circulant D-optimal matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the orbits of a subgroup of the units mod v.
    Orbits {
        v: usize,
        /// Subgroup generators, comma separated.
        #[arg(long = "gen", value_delimiter = ',', default_value = "1")]
        generators: Vec<usize>,
        /// Adjoin -1 to the subgroup.
        #[arg(long)]
        neg: bool,
    },
    /// List the feasible (v; r, s; λ) parameter sets.
    Params { v: usize },
    /// Generate a candidate pool for one side.
    Gen(GenArgs),
    /// Sort a pool file by fingerprint.
    Sort {
        file: PathBuf,
        /// Output path; defaults to sorting in place.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000_000)]
        chunk_records: usize,
    },
    /// Match two sorted pools and write certified solutions.
    Match {
        a_file: PathBuf,
        b_file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Certify an SDS given as two index sets, or every line of a solutions file.
    Verify(VerifyArgs),
    /// Check the block matrix equation and optionally the determinant bound.
    CheckMatrix {
        #[arg(long)]
        v: usize,
        #[arg(long = "X", value_delimiter = ',')]
        x: Vec<usize>,
        #[arg(long = "Y", value_delimiter = ',')]
        y: Vec<usize>,
        /// Compute the exact determinant and compare it with the Ehlich bound.
        #[arg(long)]
        det: bool,
        /// Largest v for which the determinant is computed.
        #[arg(long, default_value_t = DEFAULT_DET_CAP)]
        cap: usize,
    },
    /// Show the built-in catalog of parameters and known solutions.
    Catalog {
        #[arg(long)]
        v: Option<usize>,
        #[arg(long)]
        open_only: bool,
        #[arg(long)]
        json: bool,
    },
    /// Re-certify every solution in the catalog.
    Selftest,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    v: usize,
    #[arg(long = "gen", value_delimiter = ',', default_value = "1")]
    generators: Vec<usize>,
    /// Index into the list printed by `params`, starting at 0.
    #[arg(long, default_value_t = 0)]
    param_index: usize,
    #[arg(long)]
    side: Side,
    #[arg(long)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Cap on random draws; defaults to 1024 per requested candidate plus 4096.
    #[arg(long)]
    max_draws: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, requires_all = ["x", "y"], conflicts_with = "solutions")]
    v: Option<usize>,
    #[arg(long = "X", value_delimiter = ',')]
    x: Option<Vec<usize>>,
    #[arg(long = "Y", value_delimiter = ',')]
    y: Option<Vec<usize>>,
    #[arg(long, required_unless_present = "v")]
    solutions: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    match run(cli, &mut out).and_then(|ok| Ok(out.flush().map(|_| ok)?)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        // A closed pipe (`dopt catalog | head`) is not an error.
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.downcast_ref::<io::Error>()
        .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
}

/// `Ok(false)` means the command ran but a check failed.
fn run(cli: Cli, out: &mut impl Write) -> Result<bool> {
    match cli.command {
        Command::Orbits { v, generators, neg } => {
            let mut subgroup = Subgroup::from_generators(v, &generators)?;
            if neg {
                subgroup = subgroup.extend_with_negation();
            }
            let sys = OrbitSystem::new(subgroup);
            writeln!(
                out,
                "# v={v} |H|={} orbits={}",
                sys.subgroup().order(),
                sys.len()
            )?;
            write!(out, "{sys}")?;
        }
        Command::Params { v } => {
            let params = feasible_params(v)?;
            if params.is_empty() {
                writeln!(out, "none")?;
            }
            for p in params {
                writeln!(out, "{p}")?;
            }
        }
        Command::Gen(args) => generate(args)?,
        Command::Sort {
            file,
            out,
            chunk_records,
        } => {
            let out = out.unwrap_or_else(|| file.clone());
            let stats = sort_pool(&file, &out, chunk_records)?;
            eprintln!(
                "sorted {} records in {} runs into {}",
                stats.records,
                stats.runs,
                out.display()
            );
        }
        Command::Match {
            a_file,
            b_file,
            out: out_file,
        } => return match_pools(&a_file, &b_file, &out_file, out),
        Command::Verify(args) => return verify(args, out),
        Command::CheckMatrix { v, x, y, det, cap } => {
            let a = PmSequence::from_set(v, &x)?;
            let b = PmSequence::from_set(v, &y)?;
            let ok = verify_matrix_equation(&a, &b)?;
            writeln!(
                out,
                "matrix equation AA^T + BB^T = (2v-2)I + 2J: {}",
                verdict(ok)
            )?;
            if !det {
                return Ok(ok);
            }
            let bound = ehlich_bound(v);
            writeln!(out, "Ehlich bound for order {}: {bound}", 2 * v)?;
            if v > cap {
                writeln!(out, "determinant skipped: v={v} exceeds --cap {cap}")?;
                return Ok(ok);
            }
            let d = exact_determinant(build_dmatrix(&a, &b)?.rows());
            let attained = d.magnitude() == bound.magnitude();
            writeln!(out, "determinant: {d}")?;
            writeln!(out, "bound attained: {}", verdict(attained))?;
            return Ok(ok && attained);
        }
        Command::Catalog { v, open_only, json } => {
            let entries: Vec<_> = catalog::catalog()
                .iter()
                .filter(|e| v.is_none_or(|v| e.v == v))
                .filter(|e| !open_only || e.status == Status::Open)
                .collect();
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&entries)?)?;
            } else if entries.is_empty() {
                writeln!(out, "none")?;
            } else {
                for e in entries {
                    writeln!(out, "{e}")?;
                }
            }
        }
        Command::Selftest => {
            let report = catalog::selftest();
            writeln!(out, "{report}")?;
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn generate(args: GenArgs) -> Result<()> {
    let all = feasible_params(args.v)?;
    let params = *all
        .get(args.param_index)
        .ok_or(Error::ParamIndexOutOfRange {
            v: args.v,
            index: args.param_index,
            available: all.len(),
        })?;
    let space = SearchSpace::new(params, &args.generators)?;
    let (records, stats) = generate_parallel(
        &space,
        args.side,
        args.count,
        args.seed,
        args.workers,
        args.max_draws,
    )?;
    write_pool(&args.out, &space.header(), &records)
        .with_context(|| format!("writing {}", args.out.display()))?;
    eprintln!(
        "{params} side {}: {} candidates from {} draws ({} rejected by PSD{})",
        args.side,
        records.len(),
        stats.drawn,
        stats.psd_rejected,
        if stats.exhaustive {
            ", space enumerated"
        } else {
            ""
        }
    );
    Ok(())
}

fn match_pools(
    a_file: &Path,
    b_file: &Path,
    solutions_path: &Path,
    out: &mut impl Write,
) -> Result<bool> {
    let header = PoolReader::open(a_file)?.header().clone();
    let params = ParamSet::new(header.v, header.r, header.s)?;
    if params.lambda != header.lambda {
        bail!("pool header λ={} does not match (v, r, s)", header.lambda);
    }
    let space = SearchSpace::new(params, &header.generators)?;
    if is_prime(header.v) {
        eprintln!(
            "note: v={} is prime, so the divisor-sum constraints do not apply",
            header.v
        );
    }
    let matches = match_pool_files(a_file, b_file)?;
    let mut solutions = Vec::new();
    let mut collisions = 0;
    for pair in &matches {
        match reconstruct(pair, &space)? {
            Reconstruction::Solution(sol) => solutions.push(sol),
            Reconstruction::Collision {
                a_labels,
                b_labels,
                violations,
            } => {
                collisions += 1;
                eprintln!("collision J={a_labels:?} K={b_labels:?} violations={violations:?}");
            }
        }
    }
    write_solutions(solutions_path, &solutions)?;
    writeln!(
        out,
        "{} matches, {} solutions, {} collisions -> {}",
        matches.len(),
        solutions.len(),
        collisions,
        solutions_path.display()
    )?;
    Ok(collisions == 0)
}

fn verify(args: VerifyArgs, out: &mut impl Write) -> Result<bool> {
    if let Some(path) = args.solutions {
        let solutions = read_solutions(&path)?;
        let mut all_ok = true;
        for (i, sol) in solutions.iter().enumerate() {
            let cert = verify_sds(&sol.x, &sol.y, &sol.params)?;
            writeln!(out, "# solution {} ({})", i + 1, sol.provenance)?;
            writeln!(out, "{cert}")?;
            all_ok &= cert.passed();
        }
        writeln!(
            out,
            "{} solutions, {}",
            solutions.len(),
            if all_ok { "all certified" } else { "FAILURES" }
        )?;
        return Ok(all_ok);
    }
    let (Some(v), Some(x), Some(y)) = (args.v, args.x, args.y) else {
        bail!("give --v with --X and --Y, or --solutions");
    };
    let params = ParamSet::new(v, x.len(), y.len()).with_context(|| {
        format!(
            "|X|={} and |Y|={} are not a feasible (r, s) for v={v}",
            x.len(),
            y.len()
        )
    })?;
    let cert = verify_sds(&x, &y, &params)?;
    writeln!(out, "{cert}")?;
    Ok(cert.passed())
}
