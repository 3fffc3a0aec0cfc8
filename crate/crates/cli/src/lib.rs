//! Batch front end over the classification library: JSON in, JSON report
//! out, exit code tells scripts what happened.
//!
//! Exit codes: `0` the computation ran and any checked property holds, `1`
//! the computation ran and the property fails, `2` invalid input or an
//! internal error (reported as `{"error": {"code", "message"}}`). Reports
//! carry `schema_version` and serialize with sorted keys, so identical
//! inputs give byte-identical output. Any file flag accepts `-` to read
//! that document from standard input.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde_json::{json, Value};

use cnormal::json as enc;
use cnormal::{
    c_normal_decompose, classification_battery, classify_composition, classify_multiplication,
    conjugate_normal_canonical, generate_c_normal, is_c_normal_toeplitz, CanonicalBlocks,
    Conjugation, DecompositionVariant, Error, Matrix, Tolerance64,
};

#[derive(Parser)]
#[command(
    name = "cnormal",
    version,
    about = "Classify operators against conjugations, reduce to canonical form, and check symbol or measure-space criteria"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Absolute and relative tolerance for residual checks.
    #[arg(long)]
    tol: Option<f64>,
    /// Print a human summary on stderr in addition to the JSON report.
    #[arg(long)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full equivalence battery on an operator and a conjugation.
    Classify {
        /// Matrix JSON file ('-' for stdin).
        #[arg(long)]
        matrix: String,
        /// Conjugation JSON file ('-' for stdin).
        #[arg(long)]
        conjugation: String,
        #[command(flatten)]
        common: Common,
    },
    /// Reduce a conjugate-normal matrix, or a C-normal pair, to canonical
    /// block form.
    Canonical {
        /// Matrix JSON file ('-' for stdin).
        #[arg(long)]
        matrix: String,
        /// Conjugation JSON file; when present the matrix is treated as an
        /// operator that is C-normal for it.
        #[arg(long)]
        conjugation: Option<String>,
        /// Which product of the pair to reduce when --conjugation is given.
        #[arg(long, value_enum, default_value_t = Variant::OperatorConjugation)]
        variant: Variant,
        #[command(flatten)]
        common: Common,
    },
    /// Build a C-normal operator from canonical block data and a seed.
    Generate {
        /// Block data JSON file ('-' for stdin).
        #[arg(long)]
        blocks: String,
        /// Conjugation JSON file ('-' for stdin).
        #[arg(long)]
        conjugation: String,
        /// Seed for the random unitary similarity.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Classify a Toeplitz symbol against the diagonal conjugation family.
    ToeplitzCheck {
        /// Symbol JSON file ('-' for stdin).
        #[arg(long)]
        symbol: String,
        /// Conjugation angle theta (radians).
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        /// Conjugation phase xi (radians).
        #[arg(long, default_value_t = 0.0)]
        xi: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Classify a composition or multiplication operator on a discrete
    /// measure space.
    MeasureCheck {
        /// Space JSON file ('-' for stdin).
        #[arg(long)]
        space: String,
        /// Involution JSON file ('-' for stdin).
        #[arg(long)]
        involution: String,
        /// Point map JSON file: classify its composition operator.
        #[arg(long)]
        map: Option<String>,
        /// Function values JSON file: classify its multiplication operator.
        #[arg(long)]
        symbol: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Re-run the equivalence battery on seeded random instances and count
    /// disagreements.
    Audit {
        /// Dimension or dimension range, e.g. '4' or '2-8'.
        #[arg(long, default_value = "2-8")]
        dim: String,
        /// Number of trials.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Base seed; every instance derives its own seed from it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    /// Reduce the matrix of (operator, then conjugation).
    OperatorConjugation,
    /// Reduce the matrix of (conjugation, then operator).
    ConjugationOperator,
}

impl From<Variant> for DecompositionVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::OperatorConjugation => DecompositionVariant::OperatorConjugation,
            Variant::ConjugationOperator => DecompositionVariant::ConjugationOperator,
        }
    }
}

/// Reads file-flag documents, honoring a single `-` for stdin.
struct Loader<'a> {
    stdin: &'a mut dyn Read,
    stdin_used: bool,
}

impl<'a> Loader<'a> {
    fn new(stdin: &'a mut dyn Read) -> Self {
        Loader { stdin, stdin_used: false }
    }

    fn load(&mut self, path: &str) -> Result<Value, Error> {
        let text = if path == "-" {
            if self.stdin_used {
                return Err(Error::InvalidInput(
                    "only one input may come from stdin".into(),
                ));
            }
            self.stdin_used = true;
            let mut buf = String::new();
            self.stdin
                .read_to_string(&mut buf)
                .map_err(|e| Error::InvalidInput(format!("reading stdin: {e}")))?;
            buf
        } else {
            std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("reading {path}: {e}")))?
        };
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidInput(format!("parsing {path}: {e}")))
    }
}

fn tolerance(tol: Option<f64>) -> Tolerance64 {
    match tol {
        None => Tolerance64::default(),
        Some(t) => Tolerance64 { abs_tol: t, rel_tol: t },
    }
}

fn error_code(e: &Error) -> &'static str {
    match e {
        Error::ShapeMismatch(_) => "shape_mismatch",
        Error::NotHermitian { .. } => "not_hermitian",
        Error::NotNormal { .. } => "not_normal",
        Error::ConvergenceFailure(_) => "convergence_failure",
        Error::InvalidConjugation(_) => "invalid_conjugation",
        Error::NotUnitary { .. } => "not_unitary",
        Error::NotRankOne { .. } => "not_rank_one",
        Error::DimensionTooSmall { .. } => "dimension_too_small",
        Error::NotConjugateNormal { .. } => "not_conjugate_normal",
        Error::NotCNormal { .. } => "not_c_normal",
        Error::DecompositionFailed(_) => "decomposition_failed",
        Error::EtaNotUnimodular { .. } => "eta_not_unimodular",
        Error::SectionTooSmall { .. } => "section_too_small",
        Error::InvalidParameter(_) => "invalid_parameter",
        Error::UnboundedDensity(_) => "unbounded_density",
        Error::BoundaryLeak(_) => "boundary_leak",
        Error::InvalidInvolution(_) => "invalid_involution",
        Error::InvalidInput(_) => "invalid_input",
    }
}

struct Outcome {
    report: Value,
    exit: i32,
    summary: String,
}

fn envelope(verb: &str, report: Value) -> Value {
    json!({"schema_version": enc::SCHEMA_VERSION, "verb": verb, "report": report})
}

/// Entry point shared by the binary and the tests.
pub fn run(
    argv: &[String],
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let doc = json!({
                        "error": {"code": "usage", "message": e.to_string()},
                        "schema_version": enc::SCHEMA_VERSION,
                    });
                    let _ = writeln!(stdout, "{doc}");
                    let _ = writeln!(stderr, "{e}");
                    2
                }
            };
        }
    };
    let verbose = match &cli.command {
        Command::Classify { common, .. }
        | Command::Canonical { common, .. }
        | Command::Generate { common, .. }
        | Command::ToeplitzCheck { common, .. }
        | Command::MeasureCheck { common, .. }
        | Command::Audit { common, .. } => common.verbose,
    };
    let mut loader = Loader::new(stdin);
    match execute(cli.command, &mut loader) {
        Ok(outcome) => {
            let _ = writeln!(stdout, "{}", outcome.report);
            if verbose {
                let _ = writeln!(stderr, "{}", outcome.summary);
            }
            outcome.exit
        }
        Err(e) => {
            let doc = json!({
                "error": {"code": error_code(&e), "message": e.to_string()},
                "schema_version": enc::SCHEMA_VERSION,
            });
            let _ = writeln!(stdout, "{doc}");
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn execute(command: Command, loader: &mut Loader) -> Result<Outcome, Error> {
    match command {
        Command::Classify { matrix, conjugation, common } => {
            let tol = tolerance(common.tol);
            let n = enc::matrix_from_json(&loader.load(&matrix)?)?;
            let c = enc::conjugation_from_json(&loader.load(&conjugation)?, &tol)?;
            let report = classification_battery(&n, &c, &tol)?;
            let exit = if report.c_normal { 0 } else { 1 };
            let summary = format!(
                "dim {}: c_normal = {}, c_symmetric = {}, c_skew_symmetric = {}, normal = {}",
                report.dim, report.c_normal, report.c_symmetric, report.c_skew_symmetric,
                report.normal
            );
            Ok(Outcome {
                report: envelope("classify", enc::classification_report_to_json(&report)),
                exit,
                summary,
            })
        }
        Command::Canonical { matrix, conjugation, variant, common } => {
            let tol = tolerance(common.tol);
            let m = enc::matrix_from_json(&loader.load(&matrix)?)?;
            match conjugation {
                None => {
                    let dec = conjugate_normal_canonical(&m, &tol)?;
                    let summary = format!(
                        "canonical form with {} singles, {} pairs, residual {:.3e}",
                        dec.blocks.singles.len(),
                        dec.blocks.pairs.len(),
                        dec.residual
                    );
                    Ok(Outcome {
                        report: envelope("canonical", enc::canonical_decomposition_to_json(&dec)),
                        exit: 0,
                        summary,
                    })
                }
                Some(cpath) => {
                    let c = enc::conjugation_from_json(&loader.load(&cpath)?, &tol)?;
                    let dec = c_normal_decompose(&m, &c, variant.into(), &tol)?;
                    let summary = format!(
                        "canonical form with {} singles, {} pairs, reconstruction residual {:.3e}",
                        dec.canonical.blocks.singles.len(),
                        dec.canonical.blocks.pairs.len(),
                        dec.reconstruction_residual
                    );
                    Ok(Outcome {
                        report: envelope("canonical", enc::c_normal_decomposition_to_json(&dec)),
                        exit: 0,
                        summary,
                    })
                }
            }
        }
        Command::Generate { blocks, conjugation, seed, common } => {
            let tol = tolerance(common.tol);
            let b = enc::blocks_from_json(&loader.load(&blocks)?)?;
            let c = enc::conjugation_from_json(&loader.load(&conjugation)?, &tol)?;
            let n = generate_c_normal(&c, &b, seed)?;
            let report = json!({
                "matrix": enc::matrix_to_json(&n),
                "conjugation": enc::conjugation_to_json(&c),
                "blocks": enc::blocks_to_json(&b),
                "seed": seed,
            });
            Ok(Outcome {
                report: envelope("generate", report),
                exit: 0,
                summary: format!("generated a {0}x{0} C-normal operator", c.dim()),
            })
        }
        Command::ToeplitzCheck { symbol, theta, xi, common } => {
            let tol = tolerance(common.tol);
            let sym = enc::symbol_from_json(&loader.load(&symbol)?)?;
            let report = is_c_normal_toeplitz(&sym, xi, theta, &tol);
            let exit = if report.c_normal { 0 } else { 1 };
            let eta = report
                .eta
                .map(|e| format!("{:.6} + {:.6}i", e.re, e.im))
                .unwrap_or_else(|| "absent".into());
            let summary = format!(
                "c_normal = {}, c_symmetric = {}, c_skew_symmetric = {}, eta = {}",
                report.c_normal, report.c_symmetric, report.c_skew_symmetric, eta
            );
            Ok(Outcome {
                report: envelope("toeplitz-check", enc::toeplitz_report_to_json(&report)),
                exit,
                summary,
            })
        }
        Command::MeasureCheck { space, involution, map, symbol, common } => {
            let tol = tolerance(common.tol);
            let parsed = enc::space_from_json(&loader.load(&space)?)?;
            let alpha = enc::point_map_from_json(&loader.load(&involution)?)?;
            match (map, symbol) {
                (Some(mpath), None) => {
                    let t = enc::point_map_from_json(&loader.load(&mpath)?)?;
                    let (body, exit, summary) = match &parsed {
                        enc::ParsedSpace::Float(sp) => {
                            let r = classify_composition(&t, &alpha, sp, &tol)?;
                            let h = cnormal::radon_nikodym(&t, sp)?;
                            composition_outcome(r, enc::density_to_json(&h, sp))
                        }
                        enc::ParsedSpace::Rational(sp) => {
                            let r = classify_composition(&t, &alpha, sp, &tol)?;
                            let h = cnormal::radon_nikodym(&t, sp)?;
                            composition_outcome(r, enc::density_to_json(&h, sp))
                        }
                    };
                    Ok(Outcome { report: envelope("measure-check", body), exit, summary })
                }
                (None, Some(fpath)) => {
                    let phi = enc::function_values_from_json(&loader.load(&fpath)?)?;
                    let r = match &parsed {
                        enc::ParsedSpace::Float(sp) => {
                            classify_multiplication(&phi, &alpha, sp, &tol)?
                        }
                        enc::ParsedSpace::Rational(sp) => {
                            classify_multiplication(&phi, &alpha, sp, &tol)?
                        }
                    };
                    let exit = if r.c_normal { 0 } else { 1 };
                    let summary = format!(
                        "multiplication operator: c_normal = {}, criterion = {}",
                        r.c_normal, r.criterion
                    );
                    let body = json!({
                        "kind": "multiplication",
                        "classification": enc::multiplication_classification_to_json(&r),
                    });
                    Ok(Outcome { report: envelope("measure-check", body), exit, summary })
                }
                _ => Err(Error::InvalidInput(
                    "measure-check needs exactly one of --map (composition) or --symbol (multiplication)"
                        .into(),
                )),
            }
        }
        Command::Audit { dim, trials, seed, common } => {
            let tol = tolerance(common.tol);
            let (lo, hi) = parse_dims(&dim)?;
            if trials == 0 {
                return Err(Error::InvalidParameter("audit needs at least one trial".into()));
            }
            let report = audit(lo, hi, trials, seed, &tol);
            let disagreements = report["disagreements"].as_array().map(Vec::len).unwrap_or(0);
            let exit = if disagreements == 0 { 0 } else { 1 };
            let summary = format!(
                "{} instances across dims {lo}-{hi}: {disagreements} disagreement(s)",
                report["instances"]
            );
            Ok(Outcome { report: envelope("audit", report), exit, summary })
        }
    }
}

fn composition_outcome(
    r: cnormal::CompositionClassification,
    density: Value,
) -> (Value, i32, String) {
    let exit = if r.c_normal { 0 } else { 1 };
    let summary = format!(
        "composition operator: c_normal = {}, criterion = {}, normal = {}, normal_criterion = {}",
        r.c_normal, r.criterion, r.normal, r.normal_criterion
    );
    let body = json!({
        "kind": "composition",
        "classification": enc::composition_classification_to_json(&r),
        "derivative": density,
    });
    (body, exit, summary)
}

fn parse_dims(spec: &str) -> Result<(usize, usize), Error> {
    let parse_one = |s: &str| -> Result<usize, Error> {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidParameter(format!("bad dimension `{s}`")))
    };
    let (lo, hi) = match spec.split_once('-') {
        Some((a, b)) => (parse_one(a)?, parse_one(b)?),
        None => {
            let d = parse_one(spec)?;
            (d, d)
        }
    };
    if lo < 1 || hi < lo || hi > 32 {
        return Err(Error::InvalidParameter(format!(
            "dimension range {lo}-{hi} must satisfy 1 <= lo <= hi <= 32"
        )));
    }
    Ok((lo, hi))
}

fn random_blocks(dim: usize, rng: &mut ChaCha20Rng) -> CanonicalBlocks<f64> {
    let mut singles = Vec::new();
    let mut pairs = Vec::new();
    let mut left = dim;
    while left > 0 {
        if left >= 2 && rng.gen_bool(0.4) {
            let s = rng.gen_range(-1.5..1.5);
            let t = 0.1 + rng.gen_range(0.0..1.5);
            pairs.push((s, t));
            left -= 2;
        } else {
            let r = if rng.gen_bool(0.15) { 0.0 } else { rng.gen_range(0.05..2.0) };
            singles.push(r);
            left -= 1;
        }
    }
    CanonicalBlocks::new(singles, pairs)
}

fn random_conjugation(dim: usize, rng: &mut ChaCha20Rng) -> Conjugation<f64> {
    match rng.gen_range(0..4u8) {
        0 => Conjugation::identity(dim),
        1 => Conjugation::flip(dim),
        2 => Conjugation::xi_theta(
            dim,
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        ),
        _ => Conjugation::random(dim, rng),
    }
}

/// Seeded random audit of the equivalence battery. Each trial runs two
/// instances at one dimension: an operator generated to be C-normal (all
/// condition flags must be true) and an unstructured random operator (the
/// flags must still agree with one another, whichever way they fall).
fn audit(lo: usize, hi: usize, trials: usize, seed: u64, tol: &Tolerance64) -> Value {
    let mut instances = 0usize;
    let mut agreements = 0usize;
    let mut disagreements: Vec<Value> = Vec::new();
    let mut record =
        |trial: usize, dim: usize, case: &str, issue: &str, flags: &BTreeMap<&str, bool>| {
            let flags: BTreeMap<String, bool> =
                flags.iter().map(|(&k, &v)| (k.to_string(), v)).collect();
            disagreements.push(json!({
                "trial": trial,
                "dim": dim,
                "case": case,
                "issue": issue,
                "flags": flags,
            }));
        };
    for trial in 0..trials {
        let dim = lo + trial % (hi - lo + 1);
        let mut rng =
            ChaCha20Rng::seed_from_u64(seed ^ (trial as u64).wrapping_mul(0x9e3779b97f4a7c15));
        let c = random_conjugation(dim, &mut rng);

        let blocks = random_blocks(dim, &mut rng);
        let inner_seed = rng.gen::<u64>();
        instances += 1;
        match generate_c_normal(&c, &blocks, inner_seed)
            .and_then(|n| classification_battery(&n, &c, tol))
        {
            Ok(report) => {
                if !report.flags_agree() {
                    record(trial, dim, "generated_c_normal", "flags_disagree", &report.flags);
                } else if !report.c_normal {
                    record(trial, dim, "generated_c_normal", "c_normal_expected", &report.flags);
                } else {
                    agreements += 1;
                }
            }
            Err(e) => record(trial, dim, "generated_c_normal", &e.to_string(), &BTreeMap::new()),
        }

        let n: Matrix<f64> = cnormal::eigen::gaussian_matrix(dim, &mut rng);
        instances += 1;
        match classification_battery(&n, &c, tol) {
            Ok(report) => {
                if report.flags_agree() {
                    agreements += 1;
                } else {
                    record(trial, dim, "unstructured", "flags_disagree", &report.flags);
                }
            }
            Err(e) => record(trial, dim, "unstructured", &e.to_string(), &BTreeMap::new()),
        }
    }
    json!({
        "dims": [lo, hi],
        "trials": trials,
        "seed": seed,
        "abs_tol": tol.abs_tol,
        "rel_tol": tol.rel_tol,
        "instances": instances,
        "agreements": agreements,
        "disagreements": disagreements,
    })
}
