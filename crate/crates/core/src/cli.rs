//! The `convexflow` command-line tool.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{ColorChoice, CommandFactory, FromArgMatches, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flows::{run, FlowSpec, StepControl, Termination};
use crate::geometry::{parallel_offset, summarize};
use crate::inequalities::{self, InequalityReport, CHECK_NAMES};
use crate::io::{self, fmt_f64};
use crate::mixed::{self, mixed_report};
use crate::random::random_convex;
use crate::support::FourierSupport;

/// Exit status for success.
pub const EXIT_OK: i32 = 0;
/// Exit status for invalid arguments or unreadable input.
pub const EXIT_INVALID: i32 = 1;
/// Exit status when a check fails or a flow does not finish cleanly.
pub const EXIT_FAILED: i32 = 2;

const FAMILIES: [&str; 14] = [
    "csf", "unit", "gage", "jiangpan", "mazhu", "panyang", "macheng", "dual", "gradipd", "gradipr",
    "s1", "s2", "s3", "s4",
];

#[derive(Parser, Debug)]
#[command(name = "convexflow", version, about = "Nonlocal flows and inequalities for convex curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate random strictly convex curves.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        decay: f64,
        /// Lower bound on the radius of curvature.
        #[arg(long)]
        margin: f64,
        /// Number of curves; more than one writes a directory.
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Print length, area and related quantities of a curve as JSON.
    Summarize { curve: PathBuf },
    /// Evolve a curve and write its trace.
    Flow {
        #[arg(long, value_parser = FAMILIES)]
        family: String,
        #[arg(long)]
        curve: PathBuf,
        #[arg(long = "t-max")]
        t_max: f64,
        #[arg(long = "ipr-tol")]
        ipr_tol: Option<f64>,
        #[arg(long = "dt-init")]
        dt_init: Option<f64>,
        /// Constant speed for the `unit` family (default -1, inward unit speed).
        #[arg(long, allow_hyphen_values = true)]
        lambda0: Option<f64>,
        #[arg(long)]
        snapshots: Option<PathBuf>,
        #[arg(long = "snapshot-every")]
        snapshot_every: Option<usize>,
        #[arg(long)]
        trace: PathBuf,
    },
    /// Check the inequality battery on curve files or directories.
    Verify {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Comma-separated subset of checks.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<String>>,
        #[arg(long, default_value_t = inequalities::DEFAULT_TOL)]
        tol: f64,
    },
    /// Mixed area data and homothetic/parallel classification of two curves.
    Relate {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = mixed::DEFAULT_TOL)]
        tol: f64,
    },
    /// Tabulate parallel curves at evenly spaced offsets.
    ParallelSweep {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long = "r-max")]
        r_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        /// Also write each offset curve as JSON into this directory.
        #[arg(long = "emit-curves")]
        emit_curves: Option<PathBuf>,
    },
}

/// Runs the tool with process-level standard streams; returns the exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the tool writing data to `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let color = if std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty()) {
        ColorChoice::Never
    } else {
        ColorChoice::Auto
    };
    let matches = Cli::command().color(color).try_get_matches_from(args);
    let cli = match matches.and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_INVALID
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

fn print_json(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string(value).map_err(|e| Error::Parse(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn require(cond: bool, msg: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg.into()))
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Gen {
            seed,
            order,
            decay,
            margin,
            count,
            output,
        } => gen(seed, order, decay, margin, count, &output),
        Command::Summarize { curve } => {
            let fs = io::read_curve(&curve)?;
            print_json(out, &summarize(&fs))?;
            Ok(EXIT_OK)
        }
        Command::Flow {
            family,
            curve,
            t_max,
            ipr_tol,
            dt_init,
            lambda0,
            snapshots,
            snapshot_every,
            trace,
        } => {
            let spec = match FlowSpec::from_name(&family) {
                Some(FlowSpec::UnitNormal { .. }) => FlowSpec::UnitNormal {
                    lambda0: lambda0.unwrap_or(-1.0),
                },
                Some(spec) => {
                    require(lambda0.is_none(), "--lambda0 only applies to --family unit")?;
                    spec
                }
                None => return Err(Error::Domain(format!("unknown family {family}"))),
            };
            require(t_max >= 0.0 && t_max.is_finite(), "--t-max must be finite and non-negative")?;
            let defaults = StepControl::default();
            let control = StepControl {
                t_max,
                ipr_tol: ipr_tol.unwrap_or(defaults.ipr_tol),
                dt_init: dt_init.unwrap_or(defaults.dt_init),
                snapshot_every: snapshot_every.unwrap_or(defaults.snapshot_every),
                ..defaults
            };
            let fs = io::read_curve(&curve)?;
            let result = run(&spec, &fs, &control)?;
            fs::write(&trace, io::trace_to_csv(&result.records))?;
            if let Some(dir) = snapshots {
                io::write_snapshots(&dir, &result)?;
            }
            writeln!(
                err,
                "{}: {} after {} steps, t = {}",
                spec.name(),
                result.termination,
                result.records.len() - 1,
                result.final_time()
            )?;
            Ok(match result.termination {
                Termination::Converged | Termination::TimeExhausted => EXIT_OK,
                Termination::ConvexityLost { .. } | Termination::NumericFailure { .. } => EXIT_FAILED,
            })
        }
        Command::Verify { paths, only, tol } => verify(&paths, only, tol, out, err),
        Command::Relate { a, b, tol } => {
            require(tol >= 0.0 && tol.is_finite(), "--tol must be non-negative")?;
            let (fa, fb) = (io::read_curve(&a)?, io::read_curve(&b)?);
            print_json(out, &mixed_report(&fa, &fb, tol)?)?;
            Ok(EXIT_OK)
        }
        Command::ParallelSweep {
            curve,
            r_max,
            steps,
            output,
            emit_curves,
        } => parallel_sweep(&curve, r_max, steps, &output, emit_curves.as_deref()),
    }
}

fn gen(seed: u64, order: usize, decay: f64, margin: f64, count: usize, output: &Path) -> Result<i32> {
    require(count >= 1, "--count must be at least 1")?;
    let curves = (0..count as u64)
        .map(|i| random_convex(seed.wrapping_add(i), order, decay, margin))
        .collect::<Result<Vec<_>>>()?;
    if count == 1 {
        io::write_curve(output, &curves[0])?;
    } else {
        fs::create_dir_all(output)?;
        let width = (count - 1).to_string().len().max(4);
        for (i, fs) in curves.iter().enumerate() {
            io::write_curve(&output.join(format!("curve_{i:0width$}.json")), fs)?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct FileReports<'a> {
    file: String,
    reports: &'a [InequalityReport],
}

fn verify(paths: &[PathBuf], only: Option<Vec<String>>, tol: f64, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    require(tol >= 0.0 && tol.is_finite(), "--tol must be non-negative")?;
    let names: Vec<String> = match only {
        Some(list) => {
            for name in &list {
                require(
                    CHECK_NAMES.contains(&name.as_str()),
                    format!("unknown check {name:?}; expected one of {}", CHECK_NAMES.join(",")),
                )?;
            }
            list
        }
        None => CHECK_NAMES.iter().map(|s| s.to_string()).collect(),
    };
    let mut files = Vec::new();
    for path in paths {
        if path.is_dir() {
            files.extend(io::json_files_in(path)?);
        } else {
            files.push(path.clone());
        }
    }
    let curves = files
        .iter()
        .map(|p| Ok((p, io::read_curve(p)?)))
        .collect::<Result<Vec<(&PathBuf, FourierSupport)>>>()?;

    let mut failures = 0;
    for (path, fs) in &curves {
        let reports = names
            .iter()
            .map(|n| inequalities::run_check(n, fs, tol))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Domain(format!("{}: {e}", path.display())))?;
        for r in reports.iter().filter(|r| !r.holds) {
            failures += 1;
            writeln!(err, "{}: {} fails with slack {}", path.display(), r.name, fmt_f64(r.slack))?;
        }
        print_json(
            out,
            &FileReports {
                file: path.display().to_string(),
                reports: &reports,
            },
        )?;
    }
    Ok(if failures == 0 { EXIT_OK } else { EXIT_FAILED })
}

fn parallel_sweep(curve: &Path, r_max: f64, steps: usize, output: &Path, emit: Option<&Path>) -> Result<i32> {
    require(r_max > 0.0 && r_max.is_finite(), "--r-max must be positive")?;
    require(steps >= 1, "--steps must be at least 1")?;
    let fs = io::read_curve(curve)?;
    crate::geometry::require_convex(&fs)?;
    if let Some(dir) = emit {
        fs::create_dir_all(dir)?;
    }
    let mut csv = String::from("r,L,A,ipd,ipr,entropy\n");
    for i in 0..=steps {
        let r = r_max * i as f64 / steps as f64;
        let offset = parallel_offset(&fs, r)?;
        let s = summarize(&offset);
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_f64(r),
            fmt_f64(s.length),
            fmt_f64(s.area),
            fmt_f64(s.ipd),
            fmt_f64(s.ipr),
            s.entropy.map(fmt_f64).unwrap_or_default()
        ));
        if let Some(dir) = emit {
            io::write_curve(&dir.join(format!("offset_{i:04}.json")), &offset)?;
        }
    }
    fs::write(output, csv)?;
    Ok(EXIT_OK)
}
