//! `trisym` — rule inspection and derivation, mesh generation, convergence
//! studies, and the subdivision-ratio experiment from the command line.
//!
//! Exit codes: 0 on success, 1 when a computation fails (or a rate gate
//! misses), 2 on usage errors.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use trisym::geometry::Triangle;
use trisym::lab::{
    expected_rate, mode_rule, run_study, standard_integrand, study_csv, study_plot,
    study_summary_json, subdivision_ratio_experiment, LabError, Sequence, StudyPlan,
};
use trisym::mesh::{
    nested_mesh, structured_mesh, unstructured_mesh, MeshMetadata, TriangleMesh,
};
use trisym::refine::refine_rule;
use trisym::rules::load_builtin_rule;
use trisym::scalar::{PrecisionMode, Qd, Real};

#[derive(Parser)]
#[command(name = "trisym", version, about = "Symmetric triangle quadrature laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect, derive, and verify quadrature rules.
    Rules {
        #[command(subcommand)]
        action: RulesAction,
    },
    /// Generate a mesh and write it with its metadata.
    Mesh(MeshArgs),
    /// Run a convergence study and write CSV, summary, and plot files.
    Study(StudyArgs),
    /// Run the single-triangle subdivision-ratio experiment.
    Ratio(RatioArgs),
}

#[derive(Subcommand)]
enum RulesAction {
    /// Print the degree/points/rate table of the built-in rules.
    List,
    /// Print the orbits and expanded points of one built-in rule.
    Show {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=11))]
        degree: u32,
        /// Precision mode for the expansion (default from TRISYM_PRECISION,
        /// then double).
        #[arg(long)]
        precision: Option<PrecisionMode>,
    },
    /// Re-polish a built-in rule in extended precision and emit it as JSON.
    Derive {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=11))]
        degree: u32,
        /// Residual-norm target (full-precision decimal).
        #[arg(long, default_value = "1e-30")]
        tol: String,
        #[arg(long, default_value_t = 100)]
        max_iter: u32,
        /// Write the rule JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check which monomial degrees a built-in rule integrates exactly.
    Verify {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=11))]
        degree: u32,
        /// Relative-residual tolerance (full-precision decimal; defaults to
        /// 1e-13 in double mode, 1e-28 in extended).
        #[arg(long)]
        tol: Option<String>,
        #[arg(long)]
        precision: Option<PrecisionMode>,
    },
}

#[derive(Args)]
struct MeshArgs {
    /// structured | nested | unstructured
    sequence: Sequence,
    /// Refinement level; meshes have base·k divisions per side.
    #[arg(value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(1..))]
    base: u32,
    /// RNG seed for the unstructured generator (and the nested coarse mesh).
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Interior-vertex warp amplitude (structured only).
    #[arg(long, default_value_t = 0.0)]
    warp: f64,
    /// Mesh file path; metadata lands next to it with a .meta.json suffix.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StudyArgs {
    #[arg(long)]
    sequence: Sequence,
    #[arg(long)]
    degree: u32,
    #[arg(long, default_value_t = 5)]
    kmax: u32,
    #[arg(long, default_value_t = 5)]
    base: u32,
    /// double | extended (default from TRISYM_PRECISION, then double).
    #[arg(long)]
    precision: Option<PrecisionMode>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Interior-vertex warp amplitude (structured only).
    #[arg(long, default_value_t = 0.0)]
    warp: f64,
    /// Average each level over four quarter-turn rotations
    /// (unstructured only).
    #[arg(long)]
    rotations: bool,
    /// Fail (exit 1) when |fitted global rate − expected| exceeds this.
    #[arg(long)]
    gate: Option<f64>,
    /// Directory for the CSV, summary, and plot files.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Run at the full study scale: base 15, k_max 10.
    #[arg(long, conflicts_with_all = ["base", "kmax"])]
    full_scale: bool,
}

#[derive(Args)]
struct RatioArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=11))]
    degree: u32,
    #[arg(long, default_value_t = 6)]
    levels: u32,
    #[arg(long)]
    precision: Option<PrecisionMode>,
}

fn main() -> ExitCode {
    // Rust's default SIGPIPE handling turns `trisym ... | head` into a
    // panic; dying silently is what shell pipelines expect.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {failure}");
            failure.exit_code()
        }
    }
}

/// A failed run, split by exit-code class.
enum Failure {
    Usage(String),
    Computation(String),
}

impl Failure {
    fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Usage(_) => ExitCode::from(2),
            Failure::Computation(_) => ExitCode::from(1),
        }
    }
}

impl Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(msg) | Failure::Computation(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        match e {
            LabError::InvalidConfig { .. } | LabError::InsufficientLevels { .. } => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Computation(other.to_string()),
        }
    }
}

fn computation(e: impl Display) -> Failure {
    Failure::Computation(e.to_string())
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Rules { action } => match action {
            RulesAction::List => cmd_rules_list(),
            RulesAction::Show { degree, precision } => {
                match effective_precision(precision)? {
                    PrecisionMode::Double => cmd_rules_show::<f64>(degree),
                    PrecisionMode::Extended => cmd_rules_show::<Qd>(degree),
                }
            }
            RulesAction::Derive {
                degree,
                tol,
                max_iter,
                out,
            } => cmd_rules_derive(degree, &tol, max_iter, out.as_deref()),
            RulesAction::Verify {
                degree,
                tol,
                precision,
            } => match effective_precision(precision)? {
                PrecisionMode::Double => cmd_rules_verify::<f64>(degree, tol.as_deref()),
                PrecisionMode::Extended => cmd_rules_verify::<Qd>(degree, tol.as_deref()),
            },
        },
        Command::Mesh(args) => cmd_mesh(args),
        Command::Study(args) => match effective_precision(args.precision)? {
            PrecisionMode::Double => cmd_study::<f64>(args),
            PrecisionMode::Extended => cmd_study::<Qd>(args),
        },
        Command::Ratio(args) => match effective_precision(args.precision)? {
            PrecisionMode::Double => cmd_ratio::<f64>(args),
            PrecisionMode::Extended => cmd_ratio::<Qd>(args),
        },
    }
}

/// Explicit flag, then the TRISYM_PRECISION environment variable, then
/// double.
fn effective_precision(flag: Option<PrecisionMode>) -> Result<PrecisionMode, Failure> {
    if let Some(mode) = flag {
        return Ok(mode);
    }
    match std::env::var("TRISYM_PRECISION") {
        Ok(value) => PrecisionMode::from_str(&value)
            .map_err(|e| Failure::Usage(format!("TRISYM_PRECISION: {e}"))),
        Err(_) => Ok(PrecisionMode::Double),
    }
}

fn cmd_rules_list() -> Result<ExitCode, Failure> {
    println!("{:>2}  {:>3}  {:>3}", "d", "n", "p");
    for degree in 1..=11 {
        let rule = load_builtin_rule::<f64>(degree).map_err(computation)?;
        println!(
            "{:>2}  {:>3}  {:>3}",
            degree,
            rule.point_count(),
            expected_rate(degree)
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_rules_show<R: Real>(degree: u32) -> Result<ExitCode, Failure> {
    let rule = load_builtin_rule::<R>(degree).map_err(computation)?;
    let (n0, n1, n2) = rule.orbit_counts();
    println!(
        "degree {} rule: {} points ({} centroid, {} three-point, {} six-point orbits)",
        rule.degree,
        rule.point_count(),
        n0,
        n1,
        n2
    );
    println!("orbits:");
    for orbit in &rule.orbits {
        match orbit {
            trisym::rules::Orbit::Type0 { weight } => {
                println!("  type0  w={}", weight.to_decimal_string())
            }
            trisym::rules::Orbit::Type1 { lambda1, weight } => println!(
                "  type1  l1={}  w={}",
                lambda1.to_decimal_string(),
                weight.to_decimal_string()
            ),
            trisym::rules::Orbit::Type2 {
                lambda1,
                lambda2,
                weight,
            } => println!(
                "  type2  l1={}  l2={}  w={}",
                lambda1.to_decimal_string(),
                lambda2.to_decimal_string(),
                weight.to_decimal_string()
            ),
        }
    }
    println!("points (l1 l2 l3 w):");
    for (b, w) in rule.points().map_err(computation)? {
        println!(
            "  {} {} {} {}",
            b.lambda[0].to_decimal_string(),
            b.lambda[1].to_decimal_string(),
            b.lambda[2].to_decimal_string(),
            w.to_decimal_string()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_rules_derive(
    degree: u32,
    tol: &str,
    max_iter: u32,
    out: Option<&Path>,
) -> Result<ExitCode, Failure> {
    let tol = Qd::parse_decimal(tol)
        .map_err(|e| Failure::Usage(format!("--tol: {e}")))?;
    if tol <= Qd::ZERO {
        return Err(Failure::Usage("--tol must be positive".into()));
    }
    let seed = load_builtin_rule::<Qd>(degree).map_err(computation)?;
    let (rule, report) = refine_rule(&seed, tol, max_iter).map_err(computation)?;
    eprintln!(
        "degree {}: residual {} -> {} in {} iterations (converged: {})",
        degree,
        report.initial_residual_norm.to_decimal_string(),
        report.final_residual_norm.to_decimal_string(),
        report.iterations,
        report.converged
    );
    let json = serde_json::to_string_pretty(&rule.to_json()).expect("rule serializes");
    match out {
        Some(path) => {
            write_atomic(path, &(json + "\n"))?;
            println!("wrote {}", path.display());
        }
        None => println!("{json}"),
    }
    if report.converged {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Failure::Computation(format!(
            "refinement did not converge within {max_iter} iterations"
        )))
    }
}

fn cmd_rules_verify<R: Real>(degree: u32, tol: Option<&str>) -> Result<ExitCode, Failure> {
    let tol = match tol {
        Some(s) => R::parse_decimal(s).map_err(|e| Failure::Usage(format!("--tol: {e}")))?,
        None => match R::MODE {
            PrecisionMode::Double => R::from_f64(1e-13),
            PrecisionMode::Extended => R::parse_decimal("1e-28").expect("constant parses"),
        },
    };
    let rule = mode_rule::<R>(degree)?;
    let check = rule.verify_degree(tol).map_err(computation)?;
    println!("max relative residual by total degree:");
    for (m, r) in check.max_residual_by_degree.iter().enumerate() {
        println!("  {m:>2}  {}", r.to_decimal_string());
    }
    match check.achieved_degree {
        Some(achieved) => {
            println!("achieved_degree {achieved} (stated {degree})");
            if achieved >= degree {
                Ok(ExitCode::SUCCESS)
            } else {
                Err(Failure::Computation(format!(
                    "rule verifies only to degree {achieved}, stated {degree}"
                )))
            }
        }
        None => Err(Failure::Computation(
            "rule fails at degree 0 (weights do not sum to 1)".into(),
        )),
    }
}

fn cmd_mesh(args: MeshArgs) -> Result<ExitCode, Failure> {
    let mesh: TriangleMesh<f64> = match args.sequence {
        Sequence::Structured => {
            structured_mesh(args.k, args.base, args.warp).map_err(computation)?
        }
        Sequence::NestedUnstructured => {
            let coarse = unstructured_mesh(1, args.base, args.seed).map_err(computation)?;
            nested_mesh(&coarse, args.k).map_err(computation)?
        }
        Sequence::IndependentUnstructured => {
            unstructured_mesh(args.k, args.base, args.seed).map_err(computation)?
        }
    };

    let path = args.out.unwrap_or_else(|| {
        PathBuf::from(format!("mesh-{}-k{}.txt", args.sequence.name(), args.k))
    });
    write_atomic(&path, &mesh.to_text())?;

    let metadata = MeshMetadata {
        provenance: mesh.provenance,
        k: args.k,
        seed: match args.sequence {
            Sequence::Structured => None,
            _ => Some(args.seed),
        },
        warp: match args.sequence {
            Sequence::Structured => Some(args.warp.to_decimal_string()),
            _ => None,
        },
    };
    let meta_path = path.with_extension("meta.json");
    write_atomic(&meta_path, &(metadata.to_json() + "\n"))?;

    println!(
        "N={} total_area={}",
        mesh.triangles.len(),
        mesh.total_area().to_decimal_string()
    );
    println!("wrote {} and {}", path.display(), meta_path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_study<R: Real>(args: StudyArgs) -> Result<ExitCode, Failure> {
    let (base, k_max) = if args.full_scale {
        (15, 10)
    } else {
        (args.base, args.kmax)
    };
    let plan = StudyPlan {
        sequence: args.sequence,
        degree: args.degree,
        k_max,
        base,
        warp: args.warp,
        seed: args.seed,
        rotations: args.rotations,
    };
    plan.validate()?;

    let study = run_study::<R>(&plan)?;

    let stem = format!(
        "study-{}-d{}-{}",
        plan.sequence.name(),
        plan.degree,
        R::MODE.name()
    );
    let csv_path = args.out_dir.join(format!("{stem}.csv"));
    write_atomic(&csv_path, &study_csv(&study))?;
    let json_path = args.out_dir.join(format!("{stem}.json"));
    write_atomic(&json_path, &study_summary_json(&study))?;
    let plot_path = args.out_dir.join(format!("{stem}.dat"));
    write_atomic(&plot_path, &study_plot(&study))?;

    let expected = study.expected_rate();
    println!(
        "fitted global rate {:.4}, expected {} (pairwise {})",
        study.fitted_rate_global,
        expected,
        study
            .fitted_rate_pairwise
            .iter()
            .map(|p| format!("{p:.4}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    for level in study.levels.iter().filter(|l| l.dropped) {
        println!(
            "level k={} sits at the precision floor and was dropped from the fit",
            level.k
        );
    }
    println!(
        "wrote {}, {}, {}",
        csv_path.display(),
        json_path.display(),
        plot_path.display()
    );

    if let Some(gate) = args.gate {
        let miss = (study.fitted_rate_global - expected as f64).abs();
        if miss > gate {
            return Err(Failure::Computation(format!(
                "rate gate missed: |{:.4} - {expected}| = {miss:.4} > {gate}",
                study.fitted_rate_global
            )));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_ratio<R: Real>(args: RatioArgs) -> Result<ExitCode, Failure> {
    let rule = mode_rule::<R>(args.degree)?;
    let f = standard_integrand::<R>();
    let tri = Triangle::<R>::reference();
    let experiment = subdivision_ratio_experiment(&rule, &f, &tri, args.levels)?;

    println!("level  h  e_h");
    for (level, record) in experiment.levels.iter().enumerate() {
        println!(
            "{level}  {}  {}",
            record.h.to_decimal_string(),
            record.e.to_decimal_string()
        );
    }
    println!(
        "predicted ratio {}",
        experiment.predicted_ratio.to_decimal_string()
    );
    for (i, ratio) in experiment.measured_ratios.iter().enumerate() {
        println!(
            "measured e_{}/e_{}: {}",
            i + 1,
            i,
            ratio.to_decimal_string()
        );
    }
    Ok(ExitCode::SUCCESS)
}

/// Writes via a sibling temp file and rename, so readers never observe a
/// half-written file.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let file_name = path
        .file_name()
        .ok_or_else(|| Failure::Usage(format!("{} is not a file path", path.display())))?;
    let mut tmp = parent.join(file_name);
    tmp.as_mut_os_string().push(".tmp");
    std::fs::write(&tmp, contents)
        .map_err(|e| Failure::Computation(format!("writing {}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path)
        .map_err(|e| Failure::Computation(format!("renaming to {}: {e}", path.display())))
}
