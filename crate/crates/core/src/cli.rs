//! Command-line driver.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
#[cfg(unix)]
use std::os::unix::fs::PermissionsExt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{invalid, Error, Result};
use crate::manifest::{parse_manifest, RunManifest};
use crate::report::{to_csv, VerificationReport};
use crate::verify::{run_configured, SuiteId, SweepConfig, TGrid};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

pub const THREADS_ENV: &str = "BOTTLAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "bottlab",
    version,
    about = "Numerical checks for real graded Bott periodicity"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// B² identity and spectrum of the Bott operator.
    Spectrum(SweepArgs),
    /// Mehler factorization and the s1/s2 asymptotics.
    Mehler(SweepArgs),
    /// Commutator decay and asymptotic multiplicativity of α_t.
    Commutators(SweepArgs),
    /// Composition with the Bott map against γ_t.
    Composition(SweepArgs),
    /// Contraction to the kernel projection and the flip endpoints.
    Homotopy(SweepArgs),
    /// Comultiplication on the generators via X_R.
    Delta(SweepArgs),
    /// Clifford relations, periodicity witnesses and graded sign laws.
    CliffordIso(SweepArgs),
    /// Singular value decay of f(D) M_h.
    Compactness(SweepArgs),
    /// Every suite.
    ReportAll(SweepArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Both,
}

#[derive(Clone, Debug, Args)]
pub struct SweepArgs {
    /// Spatial dimension n.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Maximal total Hermite level K.
    #[arg(long, default_value_t = 12)]
    pub levels: usize,
    #[arg(long, default_value_t = 1.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 16.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 9)]
    pub t_points: usize,
    /// Overrides each suite's primary tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Both)]
    pub format: Format,
    #[arg(long, default_value = "bottlab-out")]
    pub out: PathBuf,
    /// Restrict to these suite ids (comma separated or repeated).
    #[arg(long, value_delimiter = ',')]
    pub suite: Vec<String>,
    /// Spatial level of the probe window used by decay suites.
    #[arg(long)]
    pub probe_level: Option<usize>,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Rerun the suites and configurations recorded in a manifest.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Mehler(_) => "mehler",
            Command::Commutators(_) => "commutators",
            Command::Composition(_) => "composition",
            Command::Homotopy(_) => "homotopy",
            Command::Delta(_) => "delta",
            Command::CliffordIso(_) => "clifford-iso",
            Command::Compactness(_) => "compactness",
            Command::ReportAll(_) => "report-all",
        }
    }

    pub fn args(&self) -> &SweepArgs {
        match self {
            Command::Spectrum(a)
            | Command::Mehler(a)
            | Command::Commutators(a)
            | Command::Composition(a)
            | Command::Homotopy(a)
            | Command::Delta(a)
            | Command::CliffordIso(a)
            | Command::Compactness(a)
            | Command::ReportAll(a) => a,
        }
    }

    pub fn suites(&self) -> Vec<SuiteId> {
        use SuiteId::*;
        match self {
            Command::Spectrum(_) => vec![BSquared, Spectrum],
            Command::Mehler(_) => vec![Mehler, S1s2Asymptotics],
            Command::Commutators(_) => vec![CommutatorDirac, CommutatorCd, AlphaMultiplicativity],
            Command::Composition(_) => vec![BottMap, CompositionGamma],
            Command::Homotopy(_) => vec![HomotopyProjection, FlipEndpoints],
            Command::Delta(_) => vec![DeltaXr],
            Command::CliffordIso(_) => vec![CliffordRelations, CliffordIso, GradedLaws],
            Command::Compactness(_) => vec![Compactness],
            Command::ReportAll(_) => SuiteId::ALL.to_vec(),
        }
    }
}

impl SweepArgs {
    pub fn sweep_config(&self) -> Result<SweepConfig> {
        let cfg = SweepConfig {
            dim: self.dim,
            levels: self.levels,
            t_grid: TGrid::geometric(self.t_min, self.t_max, self.t_points)?,
            tol: self.tol,
            probe_level: self.probe_level,
            seed: self.seed,
            ..SweepConfig::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses arguments, runs, and returns the process exit code.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return EXIT_CONFIG;
    }
    let mut stdout = std::io::stdout().lock();
    match run(&cli.command, &mut stdout) {
        Ok(all_pass) => {
            if all_pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| invalid(format!("{THREADS_ENV} must be a positive integer, got {value:?}")))?;
    // A pool may already exist when called twice in one process.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn resolve_configs(command: &Command) -> Result<BTreeMap<SuiteId, SweepConfig>> {
    let args = command.args();
    let allowed = command.suites();
    let filter: Vec<SuiteId> = args.suite.iter().map(|s| s.parse()).collect::<Result<_>>()?;
    if let Some(id) = filter.iter().find(|id| !allowed.contains(id)) {
        return Err(invalid(format!("suite {id} is not part of {}", command.name())));
    }
    let keep = |id: &SuiteId| filter.is_empty() || filter.contains(id);

    let configs: BTreeMap<SuiteId, SweepConfig> = match &args.manifest {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            parse_manifest(&text)?
                .suites
                .into_iter()
                .filter(|(id, _)| allowed.contains(id) && keep(id))
                .collect()
        }
        None => {
            let cfg = args.sweep_config()?;
            allowed.into_iter().filter(keep).map(|id| (id, cfg.clone())).collect()
        }
    };
    if configs.is_empty() {
        return Err(invalid("no suites selected"));
    }
    Ok(configs)
}

fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let mut builder = tempfile::Builder::new();
    builder.prefix(".bottlab-");
    #[cfg(unix)]
    builder.permissions(fs::Permissions::from_mode(0o644));
    let mut tmp = builder.tempfile_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    let target = dir.join(name);
    tmp.persist(&target).map_err(|e| Error::Io(e.error))?;
    Ok(target)
}

/// Runs a parsed command, writing reports and a summary. Returns whether
/// every suite passed.
pub fn run(command: &Command, out: &mut impl Write) -> Result<bool> {
    let configs = resolve_configs(command)?;
    let args = command.args();
    fs::create_dir_all(&args.out)?;

    let results = run_configured(&configs);
    let mut reports: Vec<VerificationReport> = Vec::new();
    let mut errors: Vec<(SuiteId, Error)> = Vec::new();
    for (id, res) in results {
        match res {
            Ok(r) => reports.push(r),
            Err(e) => errors.push((id, e)),
        }
    }

    let mut manifest = RunManifest::new(command.name(), configs);
    if matches!(args.format, Format::Json | Format::Both) {
        for r in &reports {
            let name = format!("{}.json", r.suite);
            write_atomic(&args.out, &name, &r.to_json()?)?;
            manifest.outputs.push(name);
        }
    }
    if matches!(args.format, Format::Csv | Format::Both) {
        let name = format!("{}.csv", command.name());
        write_atomic(&args.out, &name, &to_csv(&reports))?;
        manifest.outputs.push(name);
    }
    write_atomic(&args.out, "manifest.json", &manifest.to_json()?)?;

    write_summary(out, &reports, &errors)?;
    Ok(errors.is_empty() && reports.iter().all(|r| r.pass))
}

fn write_summary(out: &mut impl Write, reports: &[VerificationReport], errors: &[(SuiteId, Error)]) -> Result<()> {
    writeln!(out, "{:<24} {:>12} {:>10}  result", "suite", "final", "exponent")?;
    for r in reports {
        let final_value = r.final_value().map_or("-".to_string(), |v| format!("{v:.3e}"));
        let exponent = r.fit.map_or("-".to_string(), |f| format!("{:.3}", f.exponent));
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        writeln!(out, "{:<24} {:>12} {:>10}  {}", r.suite, final_value, exponent, verdict)?;
        if !r.pass {
            for note in r.notes.iter().filter(|n| n.starts_with("FAIL")) {
                writeln!(out, "    {note}")?;
            }
        }
    }
    for (id, e) in errors {
        writeln!(out, "{:<24} {:>12} {:>10}  ERROR {e}", id.name(), "-", "-")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("bottlab").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn defaults() {
        let cli = parse(&["spectrum"]);
        let cfg = cli.command.args().sweep_config().unwrap();
        assert_eq!((cfg.dim, cfg.levels), (1, 12));
        assert_eq!(cfg.t_grid.values().len(), 9);
        assert_eq!(cli.command.args().format, Format::Both);
    }

    #[test]
    fn dim_zero_is_a_config_error() {
        let cli = parse(&["spectrum", "--dim", "0"]);
        let err = cli.command.args().sweep_config().unwrap_err();
        assert_eq!(err.to_string(), "invalid parameter: dim must be ≥ 1");
    }

    #[test]
    fn suite_filter_must_match_command() {
        let cli = parse(&["spectrum", "--suite", "mehler"]);
        assert!(resolve_configs(&cli.command).is_err());
        let cli = parse(&["report-all", "--suite", "mehler,spectrum"]);
        let configs = resolve_configs(&cli.command).unwrap();
        assert_eq!(
            configs.keys().copied().collect::<Vec<_>>(),
            vec![SuiteId::Spectrum, SuiteId::Mehler]
        );
    }

    #[test]
    fn every_suite_has_a_command() {
        let all = parse(&["report-all"]).command.suites();
        let mut covered: Vec<SuiteId> = [
            "spectrum",
            "mehler",
            "commutators",
            "composition",
            "homotopy",
            "delta",
            "clifford-iso",
            "compactness",
        ]
        .iter()
        .flat_map(|c| parse(&[c]).command.suites())
        .collect();
        covered.sort();
        assert_eq!(covered, all);
    }
}
