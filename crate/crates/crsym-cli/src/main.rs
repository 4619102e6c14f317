use clap::{Parser, Subcommand, ValueEnum};
use crsym::dsl::{self, Ambient};
use crsym::quadric::{self, Family};
use crsym::report::{self, Verification, VerificationReport, VerifyOptions};
use crsym::prolong;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "crsym", version, about = "Exact symmetry algebras of quadric CR models")]
struct Cli {
    /// Worker threads; defaults to the available hardware concurrency.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check generators, solver dimensions and the Lie-algebra certificate.
    Verify {
        /// `e2`, `e3`, `so:<n>` or `su:<l>,<m>,<n>`.
        model: String,
        /// Comma-separated subset of weights in -2..=2.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Option<Vec<i32>>,
        /// Write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Skip the vanishing solves at weights -3, 3 and 4.
        #[arg(long)]
        skip_vanishing: bool,
    },
    /// Solve one graded piece.
    Solve {
        model: String,
        #[arg(long, allow_hyphen_values = true)]
        weight: i32,
        /// Print the basis in field syntax.
        #[arg(long)]
        print_basis: bool,
    },
    /// Summarize the structure constants by weight pair.
    Table { model: String },
    /// Print the Killing form inertia.
    Killing { model: String },
    /// Write structure constants, the Killing form or the report as JSON.
    Export { model: String, kind: ExportKind, path: PathBuf },
    /// Parse a fixture file (or `-` for stdin) and print it canonically.
    Parse { model: String, file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportKind {
    Sc,
    Killing,
    Report,
}

enum Failure {
    Usage(String),
    Io(String),
    Failed,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_IO,
            Failure::Failed => EXIT_FAILED,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) | Failure::Io(m) => eprintln!("error: {m}"),
                Failure::Failed => eprintln!("verification failed"),
            }
            ExitCode::from(f.code())
        }
    }
}

fn family(selector: &str) -> Result<Family, Failure> {
    let family = quadric::parse_selector(selector).map_err(|e| Failure::Usage(e.to_string()))?;
    quadric::build(family).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(family)
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn verify(selector: &str, options: &VerifyOptions) -> Result<Verification, Failure> {
    let family = family(selector)?;
    if let Some(k) = options.weights.iter().flatten().find(|k| !(-2..=2).contains(*k)) {
        return Err(Failure::Usage(format!("weight {k} outside -2..=2")));
    }
    report::verify(family, options).map_err(|e| Failure::Usage(e.to_string()))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Verify { model, weights, json, skip_vanishing } => {
            let v = verify(&model, &VerifyOptions { weights, skip_vanishing })?;
            print_summary(&v.report);
            if let Some(path) = json {
                write(&path, &v.report.to_json())?;
            }
            if v.report.passed() {
                Ok(())
            } else {
                Err(Failure::Failed)
            }
        }
        Command::Solve { model, weight, print_basis } => {
            let m = quadric::build(family(&model)?).map_err(|e| Failure::Usage(e.to_string()))?;
            let solved = prolong::solve_graded(&m, weight);
            println!("{} weight {weight}: dimension {}", m.name, solved.real_dimension);
            if print_basis {
                for (n, f) in solved.basis.iter().enumerate() {
                    println!("X^{weight}_{n} := {}", dsl::print_field(f));
                }
            }
            Ok(())
        }
        Command::Table { model } => {
            let v = lie(&model)?;
            let sc = v.structure.as_ref().ok_or(Failure::Failed)?;
            let weights: Vec<i32> = v.set.iter().map(|g| g.weight).collect();
            println!("{}: dimension {}, {} nonzero brackets", v.report.model.name, sc.dim, sc.c.values().filter(|x| !x.is_empty()).count());
            println!("{:>4} {:>4} {:>8}", "a", "b", "nonzero");
            for a in -2..=2 {
                for b in a..=2 {
                    let count = sc
                        .c
                        .iter()
                        .filter(|((i, j), x)| !x.is_empty() && {
                            let (wi, wj) = (weights[*i], weights[*j]);
                            (wi, wj) == (a, b) || (wi, wj) == (b, a)
                        })
                        .count();
                    println!("{a:>4} {b:>4} {count:>8}");
                }
            }
            Ok(())
        }
        Command::Killing { model } => {
            let v = lie(&model)?;
            let k = v.report.killing.as_ref().ok_or(Failure::Failed)?;
            println!(
                "{}: inertia ({}, {}, {}), {}",
                v.report.model.name,
                k.inertia[0],
                k.inertia[1],
                k.inertia[2],
                if k.nondegenerate { "nondegenerate" } else { "degenerate" }
            );
            Ok(())
        }
        Command::Export { model, kind, path } => {
            let v = lie(&model)?;
            let text = match kind {
                ExportKind::Report => v.report.to_json(),
                ExportKind::Sc => report::structure_constants_json(v.structure.as_ref().ok_or(Failure::Failed)?, &v.basis_names),
                ExportKind::Killing => report::killing_json(v.killing.as_ref().ok_or(Failure::Failed)?),
            };
            write(&path, &text)
        }
        Command::Parse { model, file } => {
            let m = quadric::build(family(&model)?).map_err(|e| Failure::Usage(e.to_string()))?;
            let text = if file.as_os_str() == "-" {
                std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::Io(e.to_string()))?
            } else {
                std::fs::read_to_string(&file).map_err(|e| Failure::Io(format!("{}: {e}", file.display())))?
            };
            let entries = dsl::parse_fixture(&text, &Ambient::of_model(&m)).map_err(|e| Failure::Usage(e.to_string()))?;
            for e in entries {
                println!("{} := {}", e.name, dsl::print_field(&e.field));
            }
            Ok(())
        }
    }
}

/// Full verification without the vanishing solves, for the Lie-algebra commands.
fn lie(selector: &str) -> Result<Verification, Failure> {
    let v = verify(selector, &VerifyOptions { weights: None, skip_vanishing: true })?;
    if v.structure.is_none() {
        eprintln!("{}", v.report.conclusion);
        return Err(Failure::Failed);
    }
    Ok(v)
}

fn print_summary(r: &VerificationReport) {
    println!("model {} ({}), CR dimension {}, codimension {}", r.model.name, r.model.selector, r.model.crdim, r.model.codim);
    println!("{:>5} {:>8} {:>6} {:>10} {:>8} {:>5}", "kappa", "expected", "solved", "generators", "failures", "span");
    for w in &r.weights {
        println!(
            "{:>5} {:>8} {:>6} {:>10} {:>8} {:>5}",
            w.kappa,
            w.expected_dim,
            w.solved_dim,
            w.generator_count,
            w.tangency_failures.len(),
            if w.span_match { "ok" } else { "FAIL" }
        );
        for f in &w.tangency_failures {
            println!("      not a symmetry: {} at equations {:?}", f.name, f.equations);
        }
    }
    for c in &r.combinations {
        println!("combination {}: {}", c.name, if c.is_symmetry { "symmetry" } else { "NOT a symmetry" });
    }
    if !r.typo_arbitration.is_empty() {
        println!("{} displayed formulas repaired:", r.typo_arbitration.len());
        for a in &r.typo_arbitration {
            println!(
                "  {} (weight {}): printed form fails equations {:?}; repaired form {}",
                a.name,
                a.kappa,
                a.literal_failing_equations,
                if a.repaired_is_symmetry { "passes" } else { "FAILS" }
            );
        }
    }
    for v in &r.vanishing {
        println!("weight {:>2}: dimension {}", v.kappa, v.solved_dim);
    }
    let t = &r.totals;
    println!("total dimension {} (expected {})", t.total_dim, t.expected_total);
    let flag = |b: Option<bool>| match b {
        Some(true) => "ok",
        Some(false) => "FAIL",
        None => "skipped",
    };
    println!("closure {}, grading {}, Jacobi {}", flag(t.bracket_closed), flag(t.grading_ok), flag(t.jacobi_ok));
    if let Some(k) = &r.killing {
        println!("Killing inertia ({}, {}, {})", k.inertia[0], k.inertia[1], k.inertia[2]);
    }
    if let (Some(c), Some(d)) = (r.center_dim, r.derived_dim) {
        println!("center dimension {c}, derived dimension {d}");
    }
    println!("{}", r.conclusion);
}
