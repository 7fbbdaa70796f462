//! Command-line front end: validate and classify spaces, decide properties,
//! compute hom-limits and contraction defaults, enumerate extensions, build
//! counterexample packages, and drive the seeded verification suites.
//!
//! Exit codes: 0 — the computation succeeded / the property holds;
//! 1 — a property failed or a witness was found; 2 — usage or parse error.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use caplab::constructions::{self, ConstructionReport, RefutationOutcome};
use caplab::extension::ExtensionProblem;
use caplab::homspace::{self, FunctionSpace};
use caplab::io;
use caplab::properties::{self, classify};
use caplab::spaces::{FiniteCapSpace, SpaceMap};
use caplab::suite::{run_suite, OutputFormat, SuiteConfig, SuiteName, TensorChoice};
use caplab::{Error, Tensor, Weight};

#[derive(Parser)]
#[command(
    name = "caplab",
    about = "Exact workbench for finite convergence-approach spaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Tensor to compute with (verify runs both when omitted; other
    /// commands default to plus).
    #[arg(long, global = true, value_enum)]
    oplus: Option<TensorArg>,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Trial count for randomized suites (0 = suite default).
    #[arg(long, global = true, default_value_t = 0)]
    trials: usize,
    /// Transcript format for verify.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TensorArg {
    Plus,
    Max,
}

impl From<TensorArg> for Tensor {
    fn from(arg: TensorArg) -> Tensor {
        match arg {
            TensorArg::Plus => Tensor::Plus,
            TensorArg::Max => Tensor::Max,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Kv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PropertyArg {
    /// The three-point regularity inequality at every triple.
    Regular,
    /// The three-point diagonality inequality at every triple.
    Diagonal,
    /// α-strictness of a subset (add --uniform for the uniform variant).
    Strict,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstructArg {
    /// Counterexample to the converse of the continuity bound.
    Thm1,
    /// Admissible non-contractive extension package.
    Extension,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a space file and report the structural axioms it satisfies.
    Validate {
        #[arg(long)]
        space: PathBuf,
    },
    /// Decide a property of a space; exit 1 and print the witness if it
    /// fails.
    Check {
        #[arg(value_enum)]
        property: PropertyArg,
        #[arg(long)]
        space: PathBuf,
        /// Subset literal like {p,q} (required for strict).
        #[arg(long)]
        subset: Option<String>,
        /// Enlargement level; strict checks every grid level when omitted.
        #[arg(long)]
        alpha: Option<String>,
        /// Check uniform strictness (one C per B serving every x at once).
        #[arg(long)]
        uniform: bool,
    },
    /// Print the full classification of a space.
    Classify {
        #[arg(long)]
        space: PathBuf,
    },
    /// Hom-limit of the filter generated by a function file, at a map.
    HomLimit {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long = "filter-file")]
        filter_file: PathBuf,
        #[arg(long)]
        at: PathBuf,
    },
    /// Contraction default m of a map.
    Default {
        #[arg(long)]
        map: PathBuf,
    },
    /// Enumerate extensions of a partial map over its extension domain.
    Extend {
        #[arg(long)]
        x: PathBuf,
        /// Subset literal like {s1,s2} naming S inside X.
        #[arg(long)]
        subset: String,
        /// Map file whose source is the subspace on S.
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        alpha: String,
        /// Keep only extensions through regularity points.
        #[arg(long = "regular-only")]
        regular_only: bool,
    },
    /// Build a verified counterexample package from a non-regular target.
    Construct {
        #[arg(value_enum)]
        kind: ConstructArg,
        #[arg(long)]
        space: PathBuf,
        /// Directory to write the built .cap/.map/.fns files and transcript.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a regularity violation and build both counterexample
    /// packages; exit 1 when one is found.
    Refute {
        #[arg(long)]
        space: PathBuf,
    },
    /// Run a named verification suite.
    Verify {
        suite: String,
        /// Point count for the exhaustive sweep (equivalence suite).
        #[arg(long)]
        exhaustive: Option<usize>,
        /// Largest random-space size for corpus suites.
        #[arg(long = "max-points")]
        max_points: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn tensor_of(cli: &Cli) -> Tensor {
    cli.oplus.map(Tensor::from).unwrap_or(Tensor::Plus)
}

fn run(cli: &Cli) -> caplab::Result<ExitCode> {
    match &cli.command {
        Command::Validate { space } => {
            let space = io::load_space(space)?;
            let report = space.validate();
            println!("{report}");
            Ok(exit(report.ok()))
        }
        Command::Check {
            property,
            space,
            subset,
            alpha,
            uniform,
        } => {
            let space = io::load_space(space)?;
            run_check(cli, *property, &space, subset.as_deref(), alpha.as_deref(), *uniform)
        }
        Command::Classify { space } => {
            let space = io::load_space(space)?;
            println!("{}", classify(&space));
            Ok(ExitCode::SUCCESS)
        }
        Command::HomLimit {
            x,
            y,
            filter_file,
            at,
        } => run_hom_limit(x, y, filter_file, at),
        Command::Default { map } => {
            let map = io::load_map(map)?;
            let tensor = tensor_of(cli);
            let m = homspace::contraction_default(&map, tensor);
            println!("default ({tensor}) = {m}");
            println!("contraction: {}", if m.is_zero() { "yes" } else { "no" });
            Ok(ExitCode::SUCCESS)
        }
        Command::Extend {
            x,
            subset,
            map,
            alpha,
            regular_only,
        } => run_extend(cli, x, subset, map, alpha, *regular_only),
        Command::Construct { kind, space, out } => run_construct(cli, *kind, space, out.as_deref()),
        Command::Refute { space } => {
            let space = io::load_space(space)?;
            let tensor = tensor_of(cli);
            match constructions::find_and_refute(&space, tensor)? {
                RefutationOutcome::Regular => {
                    println!(
                        "{} is {tensor}-regular: no violation to refute",
                        space.name()
                    );
                    Ok(ExitCode::SUCCESS)
                }
                RefutationOutcome::Refuted {
                    witness,
                    hom,
                    extension,
                } => {
                    println!(
                        "selection violation on {} ({tensor}): lhs={} > rhs={}",
                        space.name(),
                        witness.lhs,
                        witness.rhs
                    );
                    println!();
                    println!("{hom}");
                    println!();
                    println!("{extension}");
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        Command::Verify {
            suite,
            exhaustive,
            max_points,
        } => {
            let Some(name) = SuiteName::parse(suite) else {
                return Err(Error::Precondition(format!(
                    "unknown suite `{suite}`; expected one of {} or all",
                    SuiteName::EACH.map(|s| s.token()).join(", ")
                )));
            };
            let mut config = SuiteConfig::new(name);
            config.trials = cli.trials;
            config.seed = cli.seed;
            config.tensors = match cli.oplus {
                None => TensorChoice::Both,
                Some(t) => TensorChoice::One(t.into()),
            };
            config.format = match cli.format {
                FormatArg::Text => OutputFormat::Text,
                FormatArg::Kv => OutputFormat::Kv,
            };
            if let Some(n) = exhaustive {
                config.exhaustive = *n;
            }
            if let Some(n) = max_points {
                config.max_points = *n;
            }
            let report = run_suite(&config)?;
            print!("{}", report.transcript);
            Ok(ExitCode::from(report.exit_code() as u8))
        }
    }
}

fn exit(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn run_check(
    cli: &Cli,
    property: PropertyArg,
    space: &FiniteCapSpace,
    subset: Option<&str>,
    alpha: Option<&str>,
    uniform: bool,
) -> caplab::Result<ExitCode> {
    let tensor = tensor_of(cli);
    match property {
        PropertyArg::Regular => match properties::is_regular(space, tensor) {
            None => {
                println!("regular ({tensor}): yes");
                Ok(ExitCode::SUCCESS)
            }
            Some(violation) => {
                println!("regular ({tensor}): no");
                println!("witness: {}", violation.render(space));
                Ok(ExitCode::FAILURE)
            }
        },
        PropertyArg::Diagonal => match properties::is_diagonal(space, tensor) {
            None => {
                println!("diagonal ({tensor}): yes");
                Ok(ExitCode::SUCCESS)
            }
            Some(violation) => {
                println!("diagonal ({tensor}): no");
                println!("witness: {}", violation.render(space));
                Ok(ExitCode::FAILURE)
            }
        },
        PropertyArg::Strict => {
            let Some(subset) = subset else {
                return Err(Error::Precondition(
                    "check strict needs --subset {…}".into(),
                ));
            };
            let subset = io::parse_subset(subset, space)?;
            let label = if uniform { "uniformly strict" } else { "strict" };
            let witness = match alpha {
                Some(text) => {
                    let alpha: Weight = text.parse()?;
                    properties::is_strict(space, &subset, alpha, tensor, uniform)?
                }
                None => properties::is_strict_on_grid(space, &subset, tensor, uniform)?,
            };
            match witness {
                None => {
                    println!("{label} ({tensor}): yes");
                    Ok(ExitCode::SUCCESS)
                }
                Some(witness) => {
                    println!("{label} ({tensor}): no");
                    println!("witness: {}", witness.render(space));
                    Ok(ExitCode::FAILURE)
                }
            }
        }
    }
}

fn run_hom_limit(
    x: &Path,
    y: &Path,
    filter_file: &Path,
    at: &Path,
) -> caplab::Result<ExitCode> {
    let x = io::load_space(x)?;
    let y = io::load_space(y)?;
    let functions = io::load_functions(filter_file, &x, &y)?;
    let text = std::fs::read_to_string(at)?;
    let map = io::parse_map_str(&text, &at.display().to_string(), &[x.clone(), y.clone()])?;
    if map.source() != &x {
        return Err(Error::Precondition(format!(
            "map `{}` must be defined on the whole of {}",
            map.name(),
            x.name()
        )));
    }

    // Assemble one function set holding the filter core plus the map.
    let mut elements: Vec<(String, Vec<usize>)> = (0..functions.len())
        .map(|i| (functions.name(i).to_string(), functions.table(i).to_vec()))
        .collect();
    let core: BTreeSet<usize> = (0..functions.len()).collect();
    let at_index = match functions.index_of(map.table()) {
        Some(i) => i,
        None => {
            let mut name = map.name().to_string();
            while elements.iter().any(|(n, _)| n == &name) {
                name.push('_');
            }
            elements.push((name, map.table().to_vec()));
            elements.len() - 1
        }
    };
    let space = FunctionSpace::from_elements(&x, &y, elements)?;
    let filter = space.filter_of(&core)?;
    let value = homspace::hom_limit(&space, &filter, at_index)?;
    println!("hom-limit = {value}");
    Ok(ExitCode::SUCCESS)
}

fn run_extend(
    cli: &Cli,
    x: &Path,
    subset: &str,
    map: &Path,
    alpha: &str,
    regular_only: bool,
) -> caplab::Result<ExitCode> {
    let tensor = tensor_of(cli);
    let ambient = io::load_space(x)?;
    let subset = io::parse_subset(subset, &ambient)?;
    let restricted = ambient.subspace(&subset)?;
    let map = io::load_map(map)?;
    if map.source().carrier() != restricted.carrier() || map.source().matrix() != restricted.matrix()
    {
        return Err(Error::Precondition(format!(
            "map `{}` is not defined on the subspace of {} over {}",
            map.name(),
            ambient.name(),
            ambient.carrier().render_subset(&subset)
        )));
    }
    let alpha: Weight = alpha.parse()?;
    let assignment = subset
        .iter()
        .enumerate()
        .map(|(pos, &p)| (p, map.apply(pos)))
        .collect();
    let problem = ExtensionProblem::new(
        &ambient,
        map.target(),
        subset,
        assignment,
        tensor,
        alpha,
    )?;
    let domain = problem.extension_domain()?;
    println!(
        "domain = {}",
        ambient.carrier().render_subset(&domain)
    );
    let candidates = problem.enumerate_extensions(regular_only)?;
    println!("candidates = {}", candidates.len());
    for candidate in &candidates {
        let g = candidate.to_map(&problem)?;
        let m = homspace::contraction_default(&g, tensor);
        let mut flags = String::new();
        if candidate.admissible {
            flags.push_str(" admissible");
        }
        if candidate.regular {
            flags.push_str(" regular");
        }
        println!("g: {} m={m}{flags}", candidate.render(&problem));
    }
    Ok(ExitCode::SUCCESS)
}

fn run_construct(
    cli: &Cli,
    kind: ConstructArg,
    space: &Path,
    out: Option<&Path>,
) -> caplab::Result<ExitCode> {
    let tensor = tensor_of(cli);
    let target = io::load_space(space)?;
    let outcome = constructions::find_and_refute(&target, tensor)?;
    let report = match outcome {
        RefutationOutcome::Regular => {
            println!(
                "{} is {tensor}-regular: nothing to construct",
                target.name()
            );
            return Ok(ExitCode::FAILURE);
        }
        RefutationOutcome::Refuted { hom, extension, .. } => match kind {
            ConstructArg::Thm1 => *hom,
            ConstructArg::Extension => *extension,
        },
    };
    println!("{report}");
    if let Some(dir) = out {
        let written = write_package(&report, dir)?;
        for file in written {
            println!("wrote {}", file.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Write a construction package as plain files: every involved space, the
/// maps, the filter-core functions (hom kind), and the transcript.
fn write_package(report: &ConstructionReport, dir: &Path) -> caplab::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let save_space = |space: &FiniteCapSpace, written: &mut Vec<PathBuf>| -> caplab::Result<()> {
        let path = dir.join(format!("{}.cap", space.name()));
        if !written.contains(&path) {
            io::save_space(space, &path)?;
            written.push(path);
        }
        Ok(())
    };
    let save_map = |map: &SpaceMap, written: &mut Vec<PathBuf>| -> caplab::Result<()> {
        let path = dir.join(format!("{}.map", map.name()));
        io::save_map(map, &path)?;
        written.push(path);
        Ok(())
    };

    save_space(&report.space, &mut written)?;
    save_space(report.f.target(), &mut written)?;
    save_map(&report.f, &mut written)?;
    if let Some(g) = &report.g {
        save_space(g.source(), &mut written)?;
        save_map(g, &mut written)?;
    }
    if let Some(functions) = &report.functions {
        let elements: Vec<(String, Vec<usize>)> = report
            .filter
            .core()
            .iter()
            .map(|&h| (functions.name(h).to_string(), functions.table(h).to_vec()))
            .collect();
        let core_set = FunctionSpace::from_elements(functions.source(), functions.target(), elements)?;
        let path = dir.join("filter.fns");
        io::save_functions(&core_set, &path)?;
        written.push(path);
    }
    let path = dir.join("transcript.txt");
    std::fs::write(&path, format!("{report}\n"))?;
    written.push(path);
    Ok(written)
}
