//! `fricke`: compute form spaces, run verification checks, evaluate completed
//! L-functions and manipulate SL2(Z) words.
//!
//! Exit codes: 0 success, 1 failed check, 2 usage error, 3 precision error.

mod cache;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use fricke_core::analytic::{
    self, chi_sample_points, default_chi_words, fricke_sample_points, i_pow_even,
    lambda_incomplete_gamma, verify_chi_automorphy, verify_fricke, verify_functional_equation,
    AnalyticError, FunctionalEquationParams, NumericSeries,
};
use fricke_core::generators::{
    default_precision, default_precision_chi, space_for, CharacterLabel, FormSpace, GeneratorError,
    GroupLabel,
};
use fricke_core::heckeforms::{
    newspace_level4, verify_chi_lift, verify_newspace_odd_support, HeckeError,
};
use fricke_core::report::{to_canonical_json, Report};
use fricke_core::sl2words::{
    char_eval, decompose_gamma0_4, matrix_to_word, verify_character_enumeration,
    verify_gamma0_4_generators, word_to_matrix, Character, GroupWord, Mat2, WordError,
};

use cache::Cache;

const GAMMA2_SAMPLES: usize = 200;
const GAMMA04_SAMPLES: usize = 500;
const SL2_SAMPLES: usize = 1000;
const FRICKE_RANDOM_POINTS: usize = 2;
const FRICKE_CONTROL_THRESHOLD: f64 = 1e-2;
const CHI_RANDOM_WORDS: usize = 3;

#[derive(Parser, Debug)]
#[command(
    name = "fricke",
    version,
    about = "Modular forms of level 1, 2 and 4 with exact q-expansions"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Series precision in twice-exponent units (exact computations only).
    #[arg(long, global = true)]
    precision: Option<u64>,
    /// Twice-exponent cutoff for numerical series evaluation.
    #[arg(long, global = true, default_value_t = 400)]
    terms: u64,
    /// Tolerance for numerical residuals.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Seed for sampled matrices and points.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cache directory; overrides FRICKE_CACHE_DIR.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Output format; `word` defaults to text, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Exit with status 1 when an `lfunction` residual exceeds the tolerance.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    #[value(name = "M")]
    M,
    #[value(name = "S")]
    S,
    #[value(name = "Snew")]
    Snew,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Target {
    #[value(name = "characters", alias = "lemma-2-1")]
    Characters,
    #[value(name = "gamma0-4-generators", alias = "prop-2-2")]
    Gamma04Generators,
    #[value(name = "newspace-odd-support", alias = "lemma-3-1")]
    NewspaceOddSupport,
    #[value(name = "chi-lift", alias = "theorem-1-2")]
    ChiLift,
    #[value(name = "fricke-sign", alias = "theorem-1-3")]
    FrickeSign,
    #[value(name = "functional-equation", alias = "corollary-1-4")]
    FunctionalEquation,
    #[value(name = "chi-automorphy")]
    ChiAutomorphy,
}

impl Target {
    fn default_weights(self) -> &'static str {
        match self {
            Target::NewspaceOddSupport | Target::ChiLift => "6..24",
            Target::FrickeSign => "6,10,12",
            _ => "6",
        }
    }

    fn uses_weights(self) -> bool {
        !matches!(self, Target::Characters | Target::Gamma04Generators)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the echelon basis of a space of forms.
    Space {
        #[arg(long, value_parser = parse_group)]
        group: GroupLabel,
        #[arg(long, value_parser = parse::parse_weight)]
        weight: u32,
        #[arg(long, default_value = "trivial", value_parser = parse_character)]
        character: CharacterLabel,
        #[arg(long, value_enum)]
        kind: Kind,
    },
    /// Run a verification check and print one report per weight.
    Verify {
        #[arg(value_enum)]
        target: Target,
        /// `6..24` (even steps), `6,10,12` or a single weight.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Completed L-function values of the level-four newspace and the
    /// functional-equation residuals `|L(s) + i^k L(k-s)|`.
    Lfunction {
        #[arg(long, value_parser = parse::parse_weight)]
        weight: u32,
        /// Comma-separated points such as `2,3,3+2i`.
        #[arg(long, default_value = "2,3,4,3+2i")]
        s: String,
        /// Fricke sign assumed by the incomplete-gamma expansion.
        #[arg(long, default_value_t = -1, allow_hyphen_values = true, value_parser = parse_eps)]
        eps: i8,
    },
    /// Words in S and T.
    Word {
        #[command(subcommand)]
        action: WordAction,
    },
    /// Inspect or empty the space cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
enum WordAction {
    /// Write a matrix as a signed word in S and T.
    Decompose { matrix: String },
    /// Value of the character with `chi(T) = zeta6^a` on a matrix.
    EvalChar {
        #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
        chi: i64,
        matrix: String,
    },
    /// Write an element of Gamma0(4) over T, ST^4S and -I.
    Gamma04Decompose { matrix: String },
    /// Multiply out a word such as `-S T^-1 S`.
    Compose {
        #[arg(allow_hyphen_values = true)]
        word: String,
    },
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    List,
    Clear,
}

fn parse_group(s: &str) -> Result<GroupLabel, String> {
    s.parse()
        .map_err(|_| format!("unknown group {s:?}; use sl2z, g0_2 or g0_4"))
}

fn parse_character(s: &str) -> Result<CharacterLabel, String> {
    s.parse()
        .map_err(|_| format!("unknown character {s:?}; use trivial or chi"))
}

fn parse_eps(s: &str) -> Result<i8, String> {
    match s {
        "1" | "+1" => Ok(1),
        "-1" => Ok(-1),
        _ => Err(format!("eps must be +1 or -1, got {s:?}")),
    }
}

// Errors ------------------------------------------------------------------------

#[derive(Debug)]
enum Failure {
    Usage(String),
    Precision(String),
    Compute(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Compute(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Precision(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Precision(m) | Failure::Compute(m) => m,
        }
    }
}

impl From<GeneratorError> for Failure {
    fn from(e: GeneratorError) -> Self {
        match e {
            GeneratorError::InsufficientPrecision { .. } => Failure::Precision(e.to_string()),
            GeneratorError::OddWeight(_)
            | GeneratorError::UnsupportedWeight(_)
            | GeneratorError::CharacterNotSupported => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

impl From<HeckeError> for Failure {
    fn from(e: HeckeError) -> Self {
        match e {
            HeckeError::Generator(g) => g.into(),
            HeckeError::InsufficientPrecision { .. } => Failure::Precision(e.to_string()),
            HeckeError::UnsupportedWeight(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

impl From<AnalyticError> for Failure {
    fn from(e: AnalyticError) -> Self {
        match e {
            AnalyticError::Hecke(h) => h.into(),
            AnalyticError::Generator(g) => g.into(),
            AnalyticError::TermsExceedPrecision { .. } => Failure::Precision(e.to_string()),
            AnalyticError::OutsideConvergenceRegion { .. } | AnalyticError::EmptyNewspace(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Compute(e.to_string()),
        }
    }
}

impl From<WordError> for Failure {
    fn from(e: WordError) -> Self {
        Failure::Usage(e.to_string())
    }
}

// Commands ----------------------------------------------------------------------

struct Context {
    global: GlobalArgs,
    cache: Option<Cache>,
}

impl Context {
    fn format(&self, default: Format) -> Format {
        self.global.format.unwrap_or(default)
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let g = &cli.global;
    if g.tol.is_nan() || g.tol <= 0.0 {
        return Err(Failure::Usage("--tol must be positive".into()));
    }
    if g.terms == 0 {
        return Err(Failure::Usage("--terms must be positive".into()));
    }
    let cache = if g.no_cache {
        None
    } else {
        Cache::locate(g.cache_dir.as_deref())
    };
    let ctx = Context {
        global: cli.global,
        cache,
    };
    match cli.command {
        Command::Space {
            group,
            weight,
            character,
            kind,
        } => cmd_space(&ctx, group, weight, character, kind),
        Command::Verify { target, weights } => cmd_verify(&ctx, target, weights.as_deref()),
        Command::Lfunction { weight, s, eps } => cmd_lfunction(&ctx, weight, &s, eps),
        Command::Word { action } => cmd_word(&ctx, action),
        Command::Cache { action } => cmd_cache(&ctx, action),
    }
}

fn cmd_space(
    ctx: &Context,
    group: GroupLabel,
    k: u32,
    character: CharacterLabel,
    kind: Kind,
) -> Result<u8, Failure> {
    let precision = ctx.global.precision.unwrap_or(match character {
        CharacterLabel::Chi => default_precision_chi(k),
        CharacterLabel::Trivial => default_precision(group, k),
    });
    let kind_label = match kind {
        Kind::M => "M",
        Kind::S => "S",
        Kind::Snew => "Snew",
    };
    let key = format!(
        "{}-{}-{kind_label}-k{k}-p{precision}",
        group.label(),
        character.label()
    );
    let cached = ctx.cache.as_ref().and_then(|c| c.load_space(&key));
    let space = match cached {
        Some(s) => s,
        None => {
            let space = compute_space(group, k, character, kind, precision)?;
            if let Some(c) = &ctx.cache {
                if let Err(e) = c.store_space(&key, &space) {
                    eprintln!("warning: could not write cache entry: {e}");
                }
            }
            space
        }
    };
    match ctx.format(Format::Json) {
        Format::Json => println!("{}", to_canonical_json(&space)),
        Format::Text => print_space_text(&space, kind_label),
    }
    Ok(0)
}

fn compute_space(
    group: GroupLabel,
    k: u32,
    character: CharacterLabel,
    kind: Kind,
    precision: u64,
) -> Result<FormSpace, Failure> {
    match kind {
        Kind::M | Kind::S => Ok(space_for(group, k, character, kind == Kind::S, precision)?),
        Kind::Snew => {
            if group != GroupLabel::Gamma0_4 || character != CharacterLabel::Trivial {
                return Err(Failure::Usage(
                    "Snew is only available for --group g0_4 with the trivial character".into(),
                ));
            }
            Ok(newspace_level4(k, Some(precision))?)
        }
    }
}

fn print_space_text(space: &FormSpace, kind: &str) {
    println!(
        "{kind}_{}({}, {}): dim {}, precision {}, sturm {}",
        space.weight,
        space.group.label(),
        space.character.label(),
        space.dim(),
        space.precision,
        space.sturm
    );
    for f in &space.basis {
        println!("{f}");
    }
}

fn cmd_verify(ctx: &Context, target: Target, weights: Option<&str>) -> Result<u8, Failure> {
    let g = &ctx.global;
    let reports: Vec<Result<Report, Failure>> = if target.uses_weights() {
        let ws = parse::parse_weights(weights.unwrap_or(target.default_weights()))
            .map_err(Failure::Usage)?;
        ws.par_iter().map(|&k| verify_one(ctx, target, k)).collect()
    } else {
        if weights.is_some() {
            return Err(Failure::Usage(
                "this check does not depend on a weight; drop --weights".into(),
            ));
        }
        vec![match target {
            Target::Characters => Ok(verify_character_enumeration(g.seed, GAMMA2_SAMPLES)),
            _ => Ok(verify_gamma0_4_generators(
                g.seed,
                GAMMA04_SAMPLES,
                SL2_SAMPLES,
            )),
        }]
    };
    let mut code = 0u8;
    for r in reports {
        match r {
            Ok(report) => {
                match ctx.format(Format::Json) {
                    Format::Json => println!("{}", report.to_json()),
                    Format::Text => println!(
                        "{} k={} {}",
                        report.check,
                        report.weight.map(|k| k.to_string()).unwrap_or("-".into()),
                        if report.pass { "PASS" } else { "FAIL" }
                    ),
                }
                if !report.pass {
                    code = code.max(1);
                }
            }
            Err(f) => {
                eprintln!("error: {}", f.message());
                code = code.max(f.code());
            }
        }
    }
    Ok(code)
}

fn verify_one(ctx: &Context, target: Target, k: u32) -> Result<Report, Failure> {
    let g = &ctx.global;
    Ok(match target {
        Target::NewspaceOddSupport => verify_newspace_odd_support(k, g.precision)?,
        Target::ChiLift => verify_chi_lift(k, g.precision)?,
        Target::FrickeSign => {
            let points = fricke_sample_points(g.seed, FRICKE_RANDOM_POINTS);
            let mut r = verify_fricke(k, &points, g.terms, g.tol, FRICKE_CONTROL_THRESHOLD)?;
            r.seed = Some(g.seed);
            r.to_report()
        }
        Target::FunctionalEquation => {
            let mut params = FunctionalEquationParams::standard(k);
            params.terms = g.terms;
            params.tol = g.tol;
            verify_functional_equation(k, &params)?.to_report()
        }
        Target::ChiAutomorphy => {
            let points = chi_sample_points();
            let words = default_chi_words(g.seed, CHI_RANDOM_WORDS, &points);
            let mut r = verify_chi_automorphy(k, &words, &points, g.terms, g.tol)?;
            r.seed = Some(g.seed);
            r.to_report()
        }
        Target::Characters | Target::Gamma04Generators => {
            unreachable!("weight-free targets are handled above")
        }
    })
}

fn cmd_lfunction(ctx: &Context, k: u32, s_text: &str, eps: i8) -> Result<u8, Failure> {
    let g = &ctx.global;
    let points = parse::parse_complex_list(s_text).map_err(Failure::Usage)?;
    let precision = default_precision(GroupLabel::Gamma0_4, k).max(g.terms + 2);
    let space = newspace_level4(k, Some(precision))?;
    if space.dim() == 0 {
        return Err(AnalyticError::EmptyNewspace(k).into());
    }
    let ik = i_pow_even(k);
    let mut rows = Vec::new();
    let mut pass = true;
    for (j, f) in space.basis.iter().enumerate() {
        let series = NumericSeries::new(f, k, g.terms)?;
        let values: Vec<(Complex64, Complex64)> = points
            .iter()
            .map(|&s| {
                let dual = Complex64::new(k as f64, 0.0) - s;
                (
                    lambda_incomplete_gamma(&series, k, s, eps).value,
                    lambda_incomplete_gamma(&series, k, dual, eps).value,
                )
            })
            .collect();
        let peak = values.iter().map(|(a, _)| a.norm()).fold(0.0, f64::max);
        let floor = (analytic::RELATIVE_FLOOR * peak).max(f64::MIN_POSITIVE);
        for (s, (a, b)) in points.iter().zip(values) {
            let residual = (a + ik * b).norm() / a.norm().max(floor);
            pass &= residual < g.tol;
            rows.push(json!({
                "basis": j,
                "s": [s.re, s.im],
                "lambda_s": [a.re, a.im],
                "lambda_dual": [b.re, b.im],
                "residual": residual,
            }));
        }
    }
    let out = json!({
        "weight": k,
        "eps": eps,
        "terms": g.terms,
        "tolerance": g.tol,
        "pass": pass,
        "rows": rows,
    });
    match ctx.format(Format::Json) {
        Format::Json => println!("{}", to_canonical_json(&out)),
        Format::Text => {
            println!("weight {k}, eps {eps:+}, tolerance {:e}", g.tol);
            for r in out["rows"].as_array().into_iter().flatten() {
                println!(
                    "basis {} s={} L(s)={} L(k-s)={} residual={:e}",
                    r["basis"],
                    r["s"],
                    r["lambda_s"],
                    r["lambda_dual"],
                    r["residual"].as_f64().unwrap_or(f64::NAN)
                );
            }
            println!("{}", if pass { "PASS" } else { "FAIL" });
        }
    }
    Ok(if g.strict && !pass { 1 } else { 0 })
}

fn cmd_word(ctx: &Context, action: WordAction) -> Result<u8, Failure> {
    let (name, input, output) = match &action {
        WordAction::Decompose { matrix } => {
            let m: Mat2 = matrix.parse()?;
            ("decompose", matrix, matrix_to_word(&m)?.to_string())
        }
        WordAction::EvalChar { chi, matrix } => {
            let m: Mat2 = matrix.parse()?;
            (
                "eval-char",
                matrix,
                char_eval(Character::new(*chi), &m)?.to_string(),
            )
        }
        WordAction::Gamma04Decompose { matrix } => {
            let m: Mat2 = matrix.parse()?;
            (
                "gamma04-decompose",
                matrix,
                decompose_gamma0_4(&m)?.to_string(),
            )
        }
        WordAction::Compose { word } => {
            let w: GroupWord = word.parse()?;
            ("compose", word, word_to_matrix(&w).to_string())
        }
    };
    match ctx.format(Format::Text) {
        Format::Text => println!("{output}"),
        Format::Json => println!(
            "{}",
            to_canonical_json(&json!({"action": name, "input": input, "output": output}))
        ),
    }
    Ok(0)
}

fn cmd_cache(ctx: &Context, action: CacheAction) -> Result<u8, Failure> {
    let Some(cache) = &ctx.cache else {
        return Err(Failure::Usage(format!(
            "no cache directory: pass --cache-dir or set {}",
            cache::ENV_VAR
        )));
    };
    let io = |e: std::io::Error| Failure::Compute(format!("{}: {e}", cache.dir().display()));
    match action {
        CacheAction::List => {
            for name in cache.entries().map_err(io)? {
                println!("{name}");
            }
        }
        CacheAction::Clear => {
            let n = cache.clear().map_err(io)?;
            println!("removed {n} entries from {}", cache.dir().display());
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
