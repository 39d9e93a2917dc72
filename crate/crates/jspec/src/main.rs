//! `jspec` command line: generate tuple files, compute joint spectra, verify
//! perturbation bounds, inspect Clifford-operator identities, run batch
//! experiments, and print Birkhoff decompositions.
//!
//! Exit codes are a stable contract: 0 success (bound holds), 1 bound
//! violated, 2 usage error, 3 I/O or parse failure, 4 hypothesis or numerical
//! failure, 5 materialization capacity exceeded.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use jspec::bounds::{self, BoundKind};
use jspec::clifford::{CliffordOperator, DEFAULT_MATERIALIZE_LIMIT};
use jspec::error::Error;
use jspec::generators::{
    extremal_shift_example, perturb_within_class, random_commuting_diagonalizable_tuple,
    random_commuting_normal_tuple, GeneratedTuple, GeneratorConfig, PerturbationClass,
};
use jspec::io::{self, ReportFile};
use jspec::spectrum::{self, TransformKind};
use jspec::{birkhoff, MatrixTuple, Tolerances};

#[derive(Parser)]
#[command(
    name = "jspec",
    version,
    about = "Joint spectra of commuting matrix tuples and relative perturbation-bound certification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate tuple files (random normal, random diagonalizable, or the
    /// extremal shift pair), optionally with a structured perturbation.
    Gen(GenArgs),
    /// Compute and print the joint spectrum of a tuple file.
    Spectrum(SpectrumArgs),
    /// Verify a relative perturbation bound for a tuple pair.
    Verify(VerifyArgs),
    /// Print Clifford-operator norm and trace diagnostics for a tuple file.
    Clifford(CliffordArgs),
    /// Run seeded bound-verification trials and write a CSV of statistics.
    Experiment(ExperimentArgs),
    /// Print the overlap matrix of two normal tuples and its Birkhoff
    /// decomposition.
    Birkhoff(BirkhoffArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Normal,
    Diagonalizable,
    Extremal,
}

#[derive(Clone, Copy, ValueEnum)]
enum PerturbClass {
    Normal,
    Arbitrary,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundFlag {
    Normal,
    Remark,
    Diag,
}

impl From<BoundFlag> for BoundKind {
    fn from(flag: BoundFlag) -> Self {
        match flag {
            BoundFlag::Normal => BoundKind::Normal,
            BoundFlag::Remark => BoundKind::Remark,
            BoundFlag::Diag => BoundKind::Diagonalizable,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SpectrumMethod {
    Normal,
    General,
}

#[derive(Args, Clone, Copy)]
struct ToleranceArgs {
    /// Verification slack factor: holds iff lhs <= rhs + tol * (1 + rhs).
    #[arg(long, default_value_t = 1e-8, allow_negative_numbers = true)]
    tol: f64,
    /// Relative commutation tolerance.
    #[arg(long, default_value_t = 1e-8)]
    commutation_tol: f64,
    /// Relative normality tolerance.
    #[arg(long, default_value_t = 1e-8)]
    normality_tol: f64,
    /// Relative diagonalization residual tolerance.
    #[arg(long, default_value_t = 1e-7)]
    diagonalization_tol: f64,
}

impl From<ToleranceArgs> for Tolerances {
    fn from(args: ToleranceArgs) -> Self {
        Tolerances {
            commutation: args.commutation_tol,
            normality: args.normality_tol,
            diagonalization: args.diagonalization_tol,
            verification: args.tol,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum)]
    kind: GenKind,
    /// Perturbation scale; writes the perturbed tuple to --out-b.
    #[arg(long)]
    perturb: Option<f64>,
    /// Perturbation class used with --perturb.
    #[arg(long, value_enum, default_value = "normal")]
    class: PerturbClass,
    #[arg(long)]
    out: PathBuf,
    /// Output path for the second tuple (extremal pair or perturbation).
    #[arg(long)]
    out_b: Option<PathBuf>,
    /// Eigenvalue modulus floor for random generation.
    #[arg(long, default_value_t = 0.1)]
    min_modulus: f64,
    /// Eigenvalues are drawn in the complex square [-box, box]^2.
    #[arg(long, default_value_t = 2.0)]
    eigenvalue_box: f64,
    /// Condition-number cap for the diagonalizable transform.
    #[arg(long, default_value_t = 1e3)]
    max_condition: f64,
    /// Print a JSON manifest of the written files.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "normal")]
    method: SpectrumMethod,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    tolerances: ToleranceArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    perturbed: PathBuf,
    #[arg(long, value_enum)]
    bound: BoundFlag,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
    /// Also write the report JSON to this path.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    tolerances: ToleranceArgs,
}

#[derive(Args)]
struct CliffordArgs {
    #[arg(long)]
    input: PathBuf,
    /// Cap on the materialized dimension 2^m * n for the oracle route.
    #[arg(long, default_value_t = DEFAULT_MATERIALIZE_LIMIT)]
    materialize_limit: usize,
    /// Fail (exit 5) if the materialized oracle exceeds the capacity limit.
    #[arg(long)]
    require_oracle: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    trials: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, value_enum)]
    bound: BoundFlag,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-2)]
    perturb_scale: f64,
    /// Output CSV path; rows are trial,seed,lhs,rhs,slack,ratio,holds and the
    /// final row is summary,<seed>,<min_ratio>,<median_ratio>,<max_ratio>,,<all_holds>.
    #[arg(long)]
    csv: PathBuf,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    tolerances: ToleranceArgs,
}

#[derive(Args)]
struct BirkhoffArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    perturbed: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    tolerances: ToleranceArgs,
}

fn exit_code_for(error: &Error) -> u8 {
    match error {
        Error::Io(_) | Error::Json(_) | Error::SchemaVersion { .. } | Error::FileFormat(_) => 3,
        Error::CapacityExceeded { .. } => 5,
        Error::InvalidArgument(_) => 2,
        _ => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Clifford(args) => cmd_clifford(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Birkhoff(args) => cmd_birkhoff(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn metadata_for(
    generator: &str,
    seed: Option<u64>,
    scale: Option<f64>,
    class: Option<&str>,
) -> BTreeMap<String, serde_json::Value> {
    let mut map = BTreeMap::new();
    map.insert("generator".to_string(), generator.into());
    if let Some(seed) = seed {
        map.insert("seed".to_string(), seed.into());
    }
    if let Some(scale) = scale {
        map.insert("perturbation_scale".to_string(), scale.into());
    }
    if let Some(class) = class {
        map.insert("class".to_string(), class.into());
    }
    map
}

#[derive(Serialize)]
struct GenManifest<'a> {
    command: &'a str,
    kind: &'a str,
    n: usize,
    m: usize,
    seed: u64,
    written: Vec<String>,
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode, Error> {
    if args.n == 0 || args.m == 0 {
        return Err(Error::InvalidArgument("n and m must be positive".into()));
    }
    let mut written = Vec::new();
    let kind_name = match args.kind {
        GenKind::Normal => "normal",
        GenKind::Diagonalizable => "diagonalizable",
        GenKind::Extremal => "extremal",
    };

    match args.kind {
        GenKind::Extremal => {
            let out_b = args.out_b.as_ref().ok_or_else(|| {
                Error::InvalidArgument(
                    "--kind extremal requires --out-b for the second tuple".into(),
                )
            })?;
            let (a, b) = extremal_shift_example(args.n, args.m)?;
            io::write_tuple_file(
                &args.out,
                &a,
                Some(metadata_for("extremal-a", None, None, None)),
            )?;
            io::write_tuple_file(
                out_b,
                &b,
                Some(metadata_for("extremal-b", None, None, None)),
            )?;
            written.push(args.out.display().to_string());
            written.push(out_b.display().to_string());
        }
        GenKind::Normal | GenKind::Diagonalizable => {
            let mut cfg = GeneratorConfig::new(args.n, args.m, args.seed);
            cfg.eigenvalue_min_modulus = args.min_modulus;
            cfg.eigenvalue_box = args.eigenvalue_box;
            cfg.max_condition = args.max_condition;
            if let Some(scale) = args.perturb {
                cfg.perturbation_scale = scale;
            }
            let generated: GeneratedTuple = match args.kind {
                GenKind::Normal => random_commuting_normal_tuple(&cfg)?,
                GenKind::Diagonalizable => random_commuting_diagonalizable_tuple(&cfg)?,
                GenKind::Extremal => unreachable!(),
            };
            io::write_tuple_file(
                &args.out,
                &generated.tuple,
                Some(metadata_for(kind_name, Some(args.seed), None, None)),
            )?;
            written.push(args.out.display().to_string());

            if let Some(scale) = args.perturb {
                let out_b = args.out_b.as_ref().ok_or_else(|| {
                    Error::InvalidArgument(
                        "--perturb requires --out-b for the perturbed tuple".into(),
                    )
                })?;
                let (class, class_name) = match args.class {
                    PerturbClass::Normal => (PerturbationClass::Normal, "normal"),
                    PerturbClass::Arbitrary => (PerturbationClass::ArbitraryCommuting, "arbitrary"),
                };
                let perturbed = perturb_within_class(&generated, &cfg, class)?;
                io::write_tuple_file(
                    out_b,
                    &perturbed.tuple,
                    Some(metadata_for(
                        kind_name,
                        Some(args.seed),
                        Some(scale),
                        Some(class_name),
                    )),
                )?;
                written.push(out_b.display().to_string());
            }
        }
    }

    if args.json {
        let manifest = GenManifest {
            command: "gen",
            kind: kind_name,
            n: args.n,
            m: args.m,
            seed: args.seed,
            written: written.clone(),
        };
        print!("{}", io::to_json_string(&manifest)?);
    } else {
        for path in &written {
            println!("wrote {path}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SpectrumOutput {
    n: usize,
    m: usize,
    method: String,
    transform_kind: TransformKind,
    /// Row j holds the m coordinates of joint eigenvalue j as `[re, im]` pairs.
    eigenvalues: Vec<Vec<[f64; 2]>>,
    residual: f64,
}

fn cmd_spectrum(args: SpectrumArgs) -> Result<ExitCode, Error> {
    let tuple = io::read_tuple_file(&args.input)?;
    let tol: Tolerances = args.tolerances.into();
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let spec = match args.method {
        SpectrumMethod::Normal => spectrum::simultaneous_diagonalize(&tuple, &mut rng, &tol)?,
        SpectrumMethod::General => spectrum::diagonalize_general(&tuple, &mut rng, &tol)?,
    };

    if args.json {
        let output = SpectrumOutput {
            n: spec.n(),
            m: spec.m(),
            method: match args.method {
                SpectrumMethod::Normal => "normal".to_string(),
                SpectrumMethod::General => "general".to_string(),
            },
            transform_kind: spec.kind(),
            eigenvalues: spec
                .eigenvalue_rows()
                .iter()
                .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            residual: spec.residual(),
        };
        print!("{}", io::to_json_string(&output)?);
    } else {
        for (j, row) in spec.eigenvalue_rows().iter().enumerate() {
            let coords: Vec<String> = row
                .iter()
                .map(|z| format!("{:+.12e}{:+.12e}i", z.re, z.im))
                .collect();
            println!("{}: ({})", j + 1, coords.join(", "));
        }
        println!("residual: {:e}", spec.residual());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Error> {
    let a = io::read_tuple_file(&args.input)?;
    let b = io::read_tuple_file(&args.perturbed)?;
    let tol: Tolerances = args.tolerances.into();
    let report = bounds::verify_bound(&a, &b, args.bound.into(), args.seed, &tol)?;
    let file = ReportFile::from_report(&report);

    if let Some(path) = &args.out {
        io::write_json_file(path, &file)?;
    }
    if args.json {
        print!("{}", io::to_json_string(&file)?);
    } else {
        println!("bound:       {}", report.kind);
        println!(
            "lhs:         {:e}  (sqrt {:e})",
            report.lhs, report.lhs_sqrt
        );
        println!("rhs:         {:e}", report.rhs);
        println!("slack:       {:e}", report.slack);
        println!("holds:       {}", report.holds);
        println!("permutation: {:?}", file.permutation);
        println!(
            "hypotheses:  A pass = {}, B pass = {}",
            report.hypothesis_a.pass, report.hypothesis_b.pass
        );
    }
    if report.holds {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

#[derive(Serialize)]
struct CliffordOutput {
    n: usize,
    m: u32,
    materialized_dimension: usize,
    materialize_limit: usize,
    structured_frobenius: f64,
    oracle_frobenius: Option<f64>,
    difference: Option<f64>,
    trace: [f64; 2],
}

fn cmd_clifford(args: CliffordArgs) -> Result<ExitCode, Error> {
    let tuple = io::read_tuple_file(&args.input)?;
    let op = CliffordOperator::from_tuple(&tuple);
    let structured = op.frobenius_norm_structured();
    let trace = op.trace();
    let dimension = (1usize << op.generator_count()) * op.dimension();

    let oracle = match op.frobenius_norm_materialized(args.materialize_limit) {
        Ok(v) => Some(v),
        Err(Error::CapacityExceeded { required, limit }) => {
            if args.require_oracle {
                return Err(Error::CapacityExceeded { required, limit });
            }
            None
        }
        Err(e) => return Err(e),
    };
    let difference = oracle.map(|v| (v - structured).abs());

    if args.json {
        let output = CliffordOutput {
            n: op.dimension(),
            m: op.generator_count(),
            materialized_dimension: dimension,
            materialize_limit: args.materialize_limit,
            structured_frobenius: structured,
            oracle_frobenius: oracle,
            difference,
            trace: [trace.re, trace.im],
        };
        print!("{}", io::to_json_string(&output)?);
    } else {
        println!("frobenius (structured identity): {structured:e}");
        match oracle {
            Some(v) => {
                println!("frobenius (materialized oracle): {v:e}");
                println!("difference:                      {:e}", difference.unwrap());
            }
            None => println!(
                "frobenius (materialized oracle): skipped (dimension {dimension} exceeds limit {})",
                args.materialize_limit
            ),
        }
        println!(
            "trace:                           {:e}{:+e}i",
            trace.re, trace.im
        );
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ExperimentSummary {
    trials: usize,
    bound: BoundKind,
    all_hold: bool,
    min_ratio: Option<f64>,
    median_ratio: Option<f64>,
    max_ratio: Option<f64>,
    csv: String,
}

fn cmd_experiment(args: ExperimentArgs) -> Result<ExitCode, Error> {
    if args.n == 0 || args.m == 0 {
        return Err(Error::InvalidArgument("n and m must be positive".into()));
    }
    let tol: Tolerances = args.tolerances.into();
    let kind: BoundKind = args.bound.into();

    let mut rows = String::from("trial,seed,lhs,rhs,slack,ratio,holds\n");
    let mut ratios: Vec<f64> = Vec::with_capacity(args.trials);
    let mut all_hold = true;

    for trial in 0..args.trials {
        let trial_seed = args.seed.wrapping_add(trial as u64);
        let mut cfg = GeneratorConfig::new(args.n, args.m, trial_seed);
        cfg.perturbation_scale = args.perturb_scale;
        let (a, b): (MatrixTuple, MatrixTuple) = match kind {
            BoundKind::Normal => {
                let base = random_commuting_normal_tuple(&cfg)?;
                let perturbed = perturb_within_class(&base, &cfg, PerturbationClass::Normal)?;
                (base.tuple, perturbed.tuple)
            }
            BoundKind::Remark => {
                let base = random_commuting_normal_tuple(&cfg)?;
                let perturbed =
                    perturb_within_class(&base, &cfg, PerturbationClass::ArbitraryCommuting)?;
                (base.tuple, perturbed.tuple)
            }
            BoundKind::Diagonalizable => {
                let base = random_commuting_diagonalizable_tuple(&cfg)?;
                let perturbed =
                    perturb_within_class(&base, &cfg, PerturbationClass::ArbitraryCommuting)?;
                (base.tuple, perturbed.tuple)
            }
        };
        let report = bounds::verify_bound(&a, &b, kind, trial_seed, &tol)?;
        let ratio = report.lhs / report.rhs;
        ratios.push(ratio);
        all_hold &= report.holds;
        rows.push_str(&format!(
            "{trial},{trial_seed},{},{},{},{},{}\n",
            report.lhs, report.rhs, report.slack, ratio, report.holds
        ));
    }

    let (min_ratio, median_ratio, max_ratio) = if ratios.is_empty() {
        (None, None, None)
    } else {
        let mut sorted = ratios.clone();
        sorted.sort_by(|a, b| a.total_cmp(b));
        let median = if sorted.len() % 2 == 1 {
            sorted[sorted.len() / 2]
        } else {
            0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
        };
        (Some(sorted[0]), Some(median), Some(*sorted.last().unwrap()))
    };
    if let (Some(min), Some(median), Some(max)) = (min_ratio, median_ratio, max_ratio) {
        rows.push_str(&format!(
            "summary,{},{min},{median},{max},,{all_hold}\n",
            args.seed
        ));
    }
    std::fs::write(&args.csv, rows)?;

    if args.json {
        let summary = ExperimentSummary {
            trials: args.trials,
            bound: kind,
            all_hold,
            min_ratio,
            median_ratio,
            max_ratio,
            csv: args.csv.display().to_string(),
        };
        print!("{}", io::to_json_string(&summary)?);
    } else {
        println!(
            "{} trials, all_hold = {all_hold}, ratio min/median/max = {:?}/{:?}/{:?}",
            args.trials, min_ratio, median_ratio, max_ratio
        );
        println!("wrote {}", args.csv.display());
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct BirkhoffTermOutput {
    weight: f64,
    /// 1-indexed permutation: row j maps to column permutation[j-1].
    permutation: Vec<usize>,
}

#[derive(Serialize)]
struct BirkhoffOutput {
    n: usize,
    overlap: Vec<Vec<f64>>,
    terms: Vec<BirkhoffTermOutput>,
    reconstruction_error: f64,
}

fn cmd_birkhoff(args: BirkhoffArgs) -> Result<ExitCode, Error> {
    let a = io::read_tuple_file(&args.input)?;
    let b = io::read_tuple_file(&args.perturbed)?;
    let tol: Tolerances = args.tolerances.into();
    let (spec_a, spec_b) = bounds::normal_spectra(&a, &b, args.seed, &tol)?;
    let overlap = spectrum::overlap_matrix(&spec_a, &spec_b)?;
    let decomposition = birkhoff::birkhoff_decompose(&overlap)?;
    let error = decomposition.reconstruction_error(&overlap);
    let n = overlap.n();

    if args.json {
        let output = BirkhoffOutput {
            n,
            overlap: (0..n)
                .map(|i| (0..n).map(|j| overlap.get(i, j)).collect())
                .collect(),
            terms: decomposition
                .terms()
                .iter()
                .map(|t| BirkhoffTermOutput {
                    weight: t.weight,
                    permutation: t.permutation.iter().map(|&j| j + 1).collect(),
                })
                .collect(),
            reconstruction_error: error,
        };
        print!("{}", io::to_json_string(&output)?);
    } else {
        println!("overlap matrix W (doubly stochastic):");
        for i in 0..n {
            let row: Vec<String> = (0..n)
                .map(|j| format!("{:.6}", overlap.get(i, j)))
                .collect();
            println!("  [{}]", row.join(", "));
        }
        println!("birkhoff terms:");
        for term in decomposition.terms() {
            let perm: Vec<usize> = term.permutation.iter().map(|&j| j + 1).collect();
            println!("  weight {:.6}  permutation {perm:?}", term.weight);
        }
        println!("reconstruction error: {error:e}");
    }
    Ok(ExitCode::SUCCESS)
}
