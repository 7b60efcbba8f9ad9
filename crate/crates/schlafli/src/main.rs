//! Command-line frontend: solve, jacobian, verify, volume, dual.
//!
//! Exit codes: 0 on success, 1 for usage/parse problems (bad flags, unreadable
//! or malformed input, malformed sweep config), 2 for domain failures (invalid
//! tetrahedra, wrong geometry, near-degenerate configurations, or verification
//! sweeps whose residuals exceed tolerance).

// Flag validation writes `!(v > 0.0)` so NaN fails the check too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use schlafli::io::{
    edge_map, matrix_csv, read_tetra, to_json, DualOutput, FdCheckOutput, InputError,
    JacobianOutput, RMatrixOutput, SolveOutput, VolumeOutput,
};
use schlafli::tetra::EDGES;
use schlafli::{
    curvature_map, dual, euclidean_volume_cm, jacobian_fd, jacobian_with_mode, p_from_jacobian,
    r_from_jacobian, relative_gap, run_sweep, tolerances, volume_gradient_check, volume_schlaefli,
    AssemblyMode, Error, Geometry, SweepConfig, SweepReport, TetraLengths, Tolerances,
};

#[derive(Parser)]
#[command(
    name = "schlafli",
    version,
    about = "Dihedral angles, curvature-map Jacobians, and volumes of constant-curvature tetrahedra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum ModeArg {
    Direct,
    Minimal,
}

impl From<ModeArg> for AssemblyMode {
    fn from(m: ModeArg) -> AssemblyMode {
        match m {
            ModeArg::Direct => AssemblyMode::Direct,
            ModeArg::Minimal => AssemblyMode::Minimal,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the six dihedral angles from the six edge lengths
    Solve {
        /// JSON file: {"geometry": ..., "lengths": {"12": ..., ..., "34": ...}}
        input: PathBuf,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Assemble the analytic Jacobian da/dx, optionally with its normalized forms
    Jacobian {
        input: PathBuf,
        /// Entry assembly: every entry from its own chain rule (direct) or
        /// three entries plus the symmetry identities (minimal)
        #[arg(long, value_enum, default_value_t = ModeArg::Direct)]
        mode: ModeArg,
        /// Compare against a central-difference Jacobian
        #[arg(long)]
        fd_check: bool,
        /// Include the angle-normalized matrix P
        #[arg(long)]
        p_matrix: bool,
        /// Include the length-normalized inverse R (curved geometries only)
        #[arg(long)]
        r_matrix: bool,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sample tetrahedra and verify the P/R identity suites
    Verify {
        /// spherical, euclidean, hyperbolic, or all
        #[arg(long, default_value = "all")]
        geometry: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, env = "SCHLAFLI_SEED", default_value_t = 42)]
        seed: u64,
        /// Edge-length sampling range lo:hi
        #[arg(long, default_value = "0.3:1.2")]
        range: String,
        /// Evaluation threads; never changes the report
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Residual tolerance for the P-identity suite
        #[arg(long)]
        tol_p: Option<f64>,
        /// Residual tolerance for the R-identity suite
        #[arg(long)]
        tol_r: Option<f64>,
        /// Tolerance for the inverse residual
        #[arg(long)]
        tol_inverse: Option<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Volume: length-angle integral for curved inputs, squared-distance
    /// determinant for flat ones
    Volume {
        input: PathBuf,
        /// Midpoint panels for the quadrature (even)
        #[arg(long, default_value_t = 4096)]
        steps: usize,
        /// Also check dV against the angle increments under edge perturbations
        #[arg(long)]
        check_gradient: bool,
        /// Forward step for --check-gradient
        #[arg(long, default_value_t = 1e-4)]
        grad_h: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Spherical polar dual: lengths and angles swap through pi-complements
    Dual {
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

struct Failure {
    message: String,
    code: u8,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { message: message.into(), code: 1 }
}

fn domain(e: Error) -> Failure {
    Failure { message: e.to_string(), code: 2 }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { message, code }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

fn load(path: &PathBuf) -> Result<TetraLengths, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    read_tetra(&text).map_err(|e| match e {
        InputError::Parse(msg) => usage(format!("{}: {msg}", path.display())),
        InputError::Domain(err) => domain(err),
    })
}

fn emit(output: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, format!("{content}\n"))
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            // A closed pipe (e.g. piping into `head`) is a normal way for the
            // reader to stop listening, not an error worth reporting.
            if let Err(e) = writeln!(std::io::stdout(), "{content}") {
                if e.kind() == std::io::ErrorKind::BrokenPipe {
                    std::process::exit(0);
                }
                return Err(usage(format!("cannot write to stdout: {e}")));
            }
            Ok(())
        }
    }
}

fn parse_range(range: &str) -> Result<(f64, f64), Failure> {
    let err = || usage(format!("range {range:?} must have the form lo:hi with numbers"));
    let (lo, hi) = range.split_once(':').ok_or_else(err)?;
    Ok((lo.trim().parse().map_err(|_| err())?, hi.trim().parse().map_err(|_| err())?))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Solve { input, output } => {
            let x = load(&input)?;
            let a = curvature_map(&x).map_err(domain)?;
            emit(&output, &to_json(&SolveOutput::new(&x, &a)))
        }
        Command::Jacobian { input, mode, fd_check, p_matrix, r_matrix, format, output } => {
            let x = load(&input)?;
            let j = jacobian_with_mode(&x, mode.into()).map_err(domain)?;
            let p = if p_matrix { Some(p_from_jacobian(&j).map_err(domain)?) } else { None };
            let r = if r_matrix { Some(r_from_jacobian(&j, &x).map_err(domain)?) } else { None };
            let fd = if fd_check {
                let fdj = jacobian_fd(&x, tolerances::FD_STEP).map_err(domain)?;
                Some(FdCheckOutput {
                    h: tolerances::FD_STEP,
                    max_relative_error: relative_gap(&j, &fdj),
                })
            } else {
                None
            };
            let content = match format {
                FormatArg::Json => to_json(&JacobianOutput {
                    geometry: x.geometry(),
                    mode: j.mode(),
                    edge_order: EDGES.map(|e| e.label()),
                    angles: edge_map(j.angles().values()),
                    jacobian: schlafli::io::matrix_rows(j.matrix()),
                    p_matrix: p.as_ref().map(|m| schlafli::io::matrix_rows(m.matrix())),
                    r_matrix: r.as_ref().map(|m| RMatrixOutput {
                        matrix: schlafli::io::matrix_rows(m.matrix()),
                        condition: m.condition(),
                    }),
                    fd_check: fd,
                }),
                FormatArg::Csv => {
                    let mut s = matrix_csv("jacobian", j.matrix());
                    if let Some(p) = &p {
                        s.push('\n');
                        s.push_str(&matrix_csv("p_matrix", p.matrix()));
                    }
                    if let Some(r) = &r {
                        s.push('\n');
                        s.push_str(&matrix_csv("r_matrix", r.matrix()));
                        s.push_str(&format!("condition,{:.16e}\n", r.condition()));
                    }
                    if let Some(fd) = &fd {
                        s.push('\n');
                        s.push_str(&format!(
                            "fd_check_h,{:.16e}\nfd_max_relative_error,{:.16e}\n",
                            fd.h, fd.max_relative_error
                        ));
                    }
                    s.truncate(s.trim_end().len());
                    s
                }
            };
            emit(&output, &content)
        }
        Command::Verify {
            geometry,
            samples,
            seed,
            range,
            workers,
            tol_p,
            tol_r,
            tol_inverse,
            output,
        } => {
            let geometry = match geometry.as_str() {
                "all" => None,
                name => Some(name.parse::<Geometry>().map_err(usage)?),
            };
            let (lo, hi) = parse_range(&range)?;
            let defaults = Tolerances::default();
            let cfg = SweepConfig {
                geometry,
                samples,
                lo,
                hi,
                seed,
                workers,
                tolerances: Tolerances {
                    p_identities: tol_p.unwrap_or(defaults.p_identities),
                    r_identities: tol_r.unwrap_or(defaults.r_identities),
                    inverse: tol_inverse.unwrap_or(defaults.inverse),
                },
            };
            cfg.validate().map_err(usage)?;
            let report = run_sweep(&cfg).map_err(domain)?;
            print_table(&report);
            emit(&output, &to_json(&report))?;
            if report.pass {
                Ok(())
            } else {
                Err(Failure { message: "identity residuals exceeded tolerance".into(), code: 2 })
            }
        }
        Command::Volume { input, steps, check_gradient, grad_h, output } => {
            let x = load(&input)?;
            let report = if x.geometry().is_curved() {
                if steps < 2 || steps % 2 != 0 {
                    return Err(usage("--steps must be an even number, at least 2"));
                }
                if !(grad_h > 0.0) {
                    return Err(usage("--grad-h must be positive"));
                }
                let v = volume_schlaefli(&x, steps).map_err(domain)?;
                let gradient_check = if check_gradient {
                    Some(volume_gradient_check(&x, grad_h, steps).map_err(domain)?)
                } else {
                    None
                };
                VolumeOutput {
                    geometry: x.geometry(),
                    method: "schlaefli_integral",
                    value: v.value,
                    n_steps: Some(v.n_steps),
                    error_estimate: Some(v.error_estimate),
                    gradient_check,
                }
            } else {
                if check_gradient {
                    return Err(domain(Error::needs_curved("volume_gradient_check")));
                }
                VolumeOutput {
                    geometry: x.geometry(),
                    method: "cayley_menger",
                    value: euclidean_volume_cm(&x).map_err(domain)?,
                    n_steps: None,
                    error_estimate: None,
                    gradient_check: None,
                }
            };
            emit(&output, &to_json(&report))
        }
        Command::Dual { input, output } => {
            let x = load(&input)?;
            let a = curvature_map(&x).map_err(domain)?;
            let (xd, ad) = dual(&x, &a).map_err(domain)?;
            emit(
                &output,
                &to_json(&DualOutput {
                    geometry: xd.geometry(),
                    lengths: edge_map(xd.values()),
                    angles: edge_map(ad.values()),
                }),
            )
        }
    }
}

/// Human-readable summary on stderr; stdout stays machine-parseable.
fn print_table(report: &SweepReport) {
    eprintln!(
        "{:<11} {:<6} {:<11} {:>13} {:>7} {:>9}  verdict",
        "geometry", "suite", "check", "max residual", "sample", "tol"
    );
    for geo in &report.results {
        let mut rows: Vec<(&str, &schlafli::WorstCase)> =
            geo.p_identities.iter().map(|w| ("p", w)).collect();
        if let Some(r) = &geo.r_identities {
            rows.extend(r.iter().map(|w| ("r", w)));
        }
        for (suite, w) in rows {
            eprintln!(
                "{:<11} {:<6} {:<11} {:>13.3e} {:>7} {:>9.1e}  {}",
                geo.geometry.name(),
                suite,
                w.name,
                w.max_residual,
                w.sample_index,
                w.tolerance,
                if w.pass { "PASS" } else { "FAIL" }
            );
        }
    }
}
