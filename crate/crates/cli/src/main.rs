//! `ogclab`: enumerate graph catalogs, compute Betti tables and verify the
//! spanning-forest quasi-isomorphism from the command line.

mod error;
mod job;

use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ogclab_core::complex::{betti, euler_characteristic, BettiOptions, BettiTable};
use ogclab_core::enumerate::{Flavor, GenerateOptions, StratumCount};
use ogclab_core::linalg::{write_matrix_market, RankStrategy, SparseMatrix};
use ogclab_core::zivkovic::verify_zivkovic;
use serde::Serialize;

use error::CliError;
use job::{catalog_dir_name, pairs, parse_range, profile_for, CatalogSource, Pair};

#[derive(Parser)]
#[command(
    name = "ogclab",
    version,
    about = "Weight-zero marked and oriented graph complexes"
)]
struct Cli {
    /// Worker threads (0 = all cores). Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate graph catalogs and print their sizes per degree.
    Enumerate {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long, value_enum)]
        flavor: FlavorArg,
        /// Write catalogs into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Compute per-degree Betti numbers.
    Betti {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long, value_enum)]
        flavor: FlavorArg,
        /// Write the table to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Also recompute every rank over the rationals.
        #[arg(long)]
        exact: bool,
    },
    /// Build the forest map and check it is a chain map and a quasi-isomorphism.
    VerifyZivkovic {
        #[command(flatten)]
        job: JobArgs,
        /// Write the JSON report to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write catalogs, differentials and forest-map matrices (MatrixMarket).
    Export {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct JobArgs {
    /// Genus, or an inclusive range A..B.
    #[arg(short = 'g', long = "genus", value_parser = parse_range)]
    genus: RangeInclusive<u32>,
    /// Number of markings, or an inclusive range A..B. Labels are 1..=n.
    #[arg(short = 'n', long = "markings", value_parser = parse_range)]
    markings: RangeInclusive<u32>,
    /// Stability profile: marked, oriented or oriented-strict.
    #[arg(long)]
    profile: Option<String>,
    /// Seed for the random primes of the rank consensus.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Stop once one degree holds more graphs than this.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_cells: Option<u64>,
}

impl JobArgs {
    fn source(&self) -> CatalogSource {
        CatalogSource::from_env(GenerateOptions {
            max_cells: self.max_cells.map(|c| c as usize),
        })
    }

    fn betti_options(&self, exact: bool) -> BettiOptions {
        BettiOptions {
            strategy: RankStrategy::consensus(self.seed),
            verify_rational: exact,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    Marked,
    Oriented,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Self {
        match f {
            FlavorArg::Marked => Flavor::Marked,
            FlavorArg::Oriented => Flavor::Oriented,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .expect("thread pool");
    match pool.install(|| run(cli.command)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Enumerate {
            job,
            flavor,
            out,
            format,
        } => enumerate(&job, flavor.into(), out.as_deref(), format),
        Command::Betti {
            job,
            flavor,
            out,
            format,
            exact,
        } => betti_tables(&job, flavor.into(), out.as_deref(), format, exact),
        Command::VerifyZivkovic { job, out } => verify(&job, out.as_deref()),
        Command::Export { job, out } => export(&job, &out),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(p.to_path_buf(), e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(PathBuf::from("<stdout>"), e)),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

#[derive(Serialize)]
struct CatalogSummary {
    flavor: Flavor,
    genus: u32,
    markings: usize,
    profile: &'static str,
    strata: Vec<StratumCount>,
}

fn enumerate(
    job: &JobArgs,
    flavor: Flavor,
    out: Option<&Path>,
    format: Format,
) -> Result<u8, CliError> {
    let profile = profile_for(flavor, job.profile.as_deref())?;
    let source = job.source();
    let mut summaries = Vec::new();
    for pair in pairs(&job.genus, &job.markings)? {
        let catalog = source.catalog(flavor, &pair, profile)?;
        if let Some(dir) = out {
            let dir = dir.join(catalog_dir_name(flavor, &pair, &profile));
            catalog
                .save(&dir)
                .map_err(|e| CliError::Io(dir.clone(), e))?;
        }
        summaries.push(CatalogSummary {
            flavor,
            genus: pair.genus,
            markings: pair.markings(),
            profile: profile.name(),
            strata: catalog.counts(),
        });
    }
    let text = match format {
        Format::Json => to_json(&summaries),
        Format::Csv => {
            let mut s = String::from("flavor,g,|S|,degree,count,nonzero\n");
            for c in &summaries {
                for r in &c.strata {
                    s += &format!(
                        "{},{},{},{},{},{}\n",
                        c.flavor.name(),
                        c.genus,
                        c.markings,
                        r.degree,
                        r.count,
                        r.nonzero
                    );
                }
            }
            s
        }
    };
    emit(None, &text)?;
    Ok(0)
}

fn betti_tables(
    job: &JobArgs,
    flavor: Flavor,
    out: Option<&Path>,
    format: Format,
    exact: bool,
) -> Result<u8, CliError> {
    let profile = profile_for(flavor, job.profile.as_deref())?;
    let source = job.source();
    let opts = job.betti_options(exact);
    let mut tables: Vec<BettiTable> = Vec::new();
    for pair in pairs(&job.genus, &job.markings)? {
        let complex = source.complex(flavor, &pair, profile)?;
        let table = betti(&complex, opts)?;
        euler_characteristic(&complex, &table)?;
        tables.push(table);
    }
    let text = match format {
        Format::Json => to_json(&tables),
        Format::Csv => {
            let mut s = format!("{}\n", BettiTable::CSV_HEADER);
            for t in &tables {
                s += &t.csv_rows();
            }
            s
        }
    };
    emit(out, &text)?;
    Ok(0)
}

fn require_markings(pair: &Pair) -> Result<(), CliError> {
    if pair.labels.is_empty() {
        return Err(CliError::Usage(format!(
            "the forest map needs at least one marking (g={}, |S|=0)",
            pair.genus
        )));
    }
    Ok(())
}

fn verify(job: &JobArgs, out: Option<&Path>) -> Result<u8, CliError> {
    if job.profile.is_some() {
        return Err(CliError::Usage(
            "verify-zivkovic uses the default profiles of both flavors".into(),
        ));
    }
    let source = job.source();
    let opts = job.betti_options(false);
    let pairs = pairs(&job.genus, &job.markings)?;
    pairs.iter().try_for_each(require_markings)?;
    let mut reports = Vec::new();
    for pair in &pairs {
        let marked = source.complex(Flavor::Marked, pair, job::default_profile(Flavor::Marked))?;
        let oriented = source.complex(
            Flavor::Oriented,
            pair,
            job::default_profile(Flavor::Oriented),
        )?;
        let (_, report) = verify_zivkovic(&marked, &oriented, opts)?;
        reports.push(report);
    }
    let passed = reports.iter().all(|r| r.passed);
    emit(out, &to_json(&reports))?;
    for r in reports.iter().filter(|r| !r.passed) {
        eprintln!("verification failed for (g={}, S={:?})", r.genus, r.labels);
    }
    Ok(if passed { 0 } else { error::EXIT_MATH as u8 })
}

fn write_matrix(path: &Path, m: &SparseMatrix) -> Result<(), CliError> {
    let io = |e| CliError::Io(path.to_path_buf(), e);
    let file = fs::File::create(path).map_err(io)?;
    let mut w = std::io::BufWriter::new(file);
    write_matrix_market(m, &mut w).map_err(io)?;
    w.flush().map_err(io)
}

fn export(job: &JobArgs, out: &Path) -> Result<u8, CliError> {
    if job.profile.is_some() {
        return Err(CliError::Usage("export uses the default profiles".into()));
    }
    let source = job.source();
    let opts = job.betti_options(false);
    for pair in pairs(&job.genus, &job.markings)? {
        let mut complexes = Vec::new();
        for flavor in [Flavor::Marked, Flavor::Oriented] {
            let profile = job::default_profile(flavor);
            let complex = source.complex(flavor, &pair, profile)?;
            let dir = out.join(catalog_dir_name(flavor, &pair, &profile));
            complex
                .catalog()
                .save(&dir)
                .map_err(|e| CliError::Io(dir.clone(), e))?;
            for k in complex.degrees() {
                if let Some(d) = complex.differential_ref(k) {
                    write_matrix(&dir.join(format!("d-{k:02}.mtx")), d)?;
                }
            }
            complexes.push(complex);
        }
        if pair.labels.is_empty() {
            continue;
        }
        let (psi, report) = verify_zivkovic(&complexes[0], &complexes[1], opts)?;
        let dir = out.join(format!("psi-g{}-n{}", pair.genus, pair.markings()));
        fs::create_dir_all(&dir).map_err(|e| CliError::Io(dir.clone(), e))?;
        for (k, m) in &psi.matrices {
            write_matrix(&dir.join(format!("psi-{k:02}.mtx")), m)?;
        }
        let path = dir.join("report.json");
        fs::write(&path, to_json(&report)).map_err(|e| CliError::Io(path, e))?;
    }
    Ok(0)
}
