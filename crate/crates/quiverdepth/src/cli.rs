//! Command-line surface: depth computations, tensor dimension tables, the
//! reproduction suite, and the Jordan-subalgebra sweep.
//!
//! Exit codes: 0 resolved, 3 depth unresolved at the cutoff (a bound, not
//! an error), 1 usage error, 2 invalid input.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::algebra::{path_algebra, subalgebra_closure, ArcAlgebra, SubalgebraEmbedding};
use crate::bimodule::TensorChain;
use crate::depth::DepthEngine;
use crate::error::{Error, Result};
use crate::exactlin::{sv_collect, SparseVec};
use crate::families::{arrow_subalgebra, jordan_subalgebra, t_n, top_subalgebra};
use crate::field::{Field, FieldSpec, PrimeField, Rationals};
use crate::quiver::Quiver;
use crate::suite::{run_suite, Section};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNRESOLVED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "quiverdepth",
    about = "Exact subalgebra depth in path algebras of acyclic quivers",
    disable_help_subcommand = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the depth report of a subalgebra pair.
    Depth(DepthArgs),
    /// Print the dimension table of the relative tensor powers C_n.
    TensorDims(TensorDimsArgs),
    /// Run the whole reproduction suite and print one line per item.
    PaperSuite(PaperSuiteArgs),
    /// Sweep the Jordan subalgebras J_n inside T_n.
    ExploreJordan(ExploreJordanArgs),
}

#[derive(Args, Debug)]
pub struct JobArgs {
    /// Named family: T<n> (the linear quiver on n vertices).
    #[arg(long, value_name = "T<n>", conflicts_with = "quiver")]
    pub family: Option<String>,

    /// Quiver file (UTF-8: 'vertices <n>' then 'arrow <label> <src> <tgt>').
    #[arg(long, value_name = "FILE")]
    pub quiver: Option<std::path::PathBuf>,

    /// Subalgebra selector: top|arrow|diagonal|jordan|custom <file>.
    /// `custom` takes the generator file as a second value.
    #[arg(long, num_args = 1..=2, required = true, value_name = "SELECTOR [FILE]")]
    pub sub: Vec<String>,

    /// Ground field: q (rationals) or fp:<p> (prime field).
    #[arg(long, default_value = "q")]
    pub field: String,

    /// Largest depth value examined before reporting a lower bound.
    #[arg(long, default_value_t = 6)]
    pub cutoff: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug)]
pub struct DepthArgs {
    #[command(flatten)]
    pub job: JobArgs,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct TensorDimsArgs {
    #[command(flatten)]
    pub job: JobArgs,

    /// Largest tensor power to tabulate.
    #[arg(long, default_value_t = 4)]
    pub max_n: usize,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct PaperSuiteArgs {
    /// Run only one section: sec3|sec4|sec5|sec6|prop.
    #[arg(long, value_name = "SECTION")]
    pub only: Option<String>,
}

#[derive(Args, Debug)]
pub struct ExploreJordanArgs {
    /// First n of the sweep (n >= 2).
    #[arg(long, default_value_t = 2)]
    pub from: usize,

    /// Last n of the sweep (inclusive).
    #[arg(long, default_value_t = 4)]
    pub to: usize,

    #[arg(long, default_value_t = 6)]
    pub cutoff: u32,
}

/// How the subalgebra is selected, parsed from `--sub`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selector {
    Top,
    Arrow,
    Diagonal,
    Jordan,
    Custom(std::path::PathBuf),
}

impl Selector {
    fn parse(values: &[String]) -> Result<Self> {
        match values {
            [one] => match one.as_str() {
                "top" => Ok(Selector::Top),
                "arrow" => Ok(Selector::Arrow),
                "diagonal" => Ok(Selector::Diagonal),
                "jordan" => Ok(Selector::Jordan),
                "custom" => Err(Error::invalid(
                    "--sub custom needs a generator file: --sub custom <file>",
                )),
                other => Err(Error::invalid(format!(
                    "unknown subalgebra selector '{other}' (top|arrow|diagonal|jordan|custom <file>)"
                ))),
            },
            [kw, file] if kw == "custom" => Ok(Selector::Custom(file.into())),
            _ => Err(Error::invalid(
                "--sub takes a selector and, for 'custom', one generator file",
            )),
        }
    }
}

/// Where the ambient algebra comes from.
enum QuiverSource {
    Family(usize),
    File(Quiver),
}

fn parse_family(name: &str) -> Result<usize> {
    let rest = name
        .strip_prefix('T')
        .or_else(|| name.strip_prefix('t'))
        .ok_or_else(|| Error::invalid(format!("unknown family '{name}' (expected T<n>)")))?;
    let n: usize = rest
        .parse()
        .map_err(|_| Error::invalid(format!("unknown family '{name}' (expected T<n>)")))?;
    if n == 0 {
        return Err(Error::invalid("family T<n> needs n >= 1"));
    }
    Ok(n)
}

fn quiver_source(job: &JobArgs) -> Result<QuiverSource> {
    match (&job.family, &job.quiver) {
        (Some(name), None) => Ok(QuiverSource::Family(parse_family(name)?)),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            let quiver = Quiver::parse(&text)?;
            let v = quiver.validate();
            if !v.acyclic {
                return Err(Error::CyclicQuiver(format!(
                    "{} contains a directed cycle",
                    path.display()
                )));
            }
            Ok(QuiverSource::File(quiver))
        }
        _ => Err(Error::invalid(
            "exactly one of --family or --quiver is required",
        )),
    }
}

/// Parses one generator per line: terms `[coeff*]<path-label>` joined by
/// `+`/`-`; `1` denotes the unit. `#` starts a comment.
pub fn parse_generator_file<F: Field>(
    text: &str,
    ambient: &ArcAlgebra<F>,
) -> Result<Vec<SparseVec<F::Elem>>> {
    let f = ambient.field();
    let mut gens = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.split_once('#') {
            Some((before, _)) => before,
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let mut entries: Vec<(usize, F::Elem)> = Vec::new();
        // split into signed terms
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for (i, c) in line.chars().enumerate() {
            if (c == '+' || c == '-') && i > 0 {
                if current.trim().is_empty() {
                    return Err(Error::parse(line_no, "empty term"));
                }
                terms.push((negative, current.trim().to_string()));
                current = String::new();
                negative = c == '-';
            } else if c == '-' && i == 0 {
                negative = true;
            } else {
                current.push(c);
            }
        }
        if current.trim().is_empty() {
            return Err(Error::parse(line_no, "empty term"));
        }
        terms.push((negative, current.trim().to_string()));
        for (neg, term) in terms {
            let (coeff, label) = match term.split_once('*') {
                Some((prefix, rest)) if f.parse(prefix.trim()).is_ok() => {
                    (f.parse(prefix.trim())?, rest.trim().to_string())
                }
                _ => (f.one(), term.clone()),
            };
            let coeff = if neg { f.neg(&coeff) } else { coeff };
            if label == "1" {
                entries.extend(ambient.unit().iter().map(|(k, c)| (*k, f.mul(c, &coeff))));
                continue;
            }
            let k = ambient.label_index(&label).ok_or_else(|| {
                Error::parse(
                    line_no,
                    format!("unknown basis label '{label}' in the ambient algebra"),
                )
            })?;
            entries.push((k, coeff));
        }
        let v = sv_collect(f, entries);
        gens.push(v);
    }
    if gens.is_empty() {
        return Err(Error::invalid("generator file defines no generators"));
    }
    Ok(gens)
}

fn build_embedding<F: Field>(
    source: &QuiverSource,
    selector: &Selector,
    field: F,
) -> Result<SubalgebraEmbedding<F>> {
    let ambient: ArcAlgebra<F> = match source {
        QuiverSource::Family(n) => t_n(*n, field)?,
        QuiverSource::File(quiver) => path_algebra(quiver, field)?,
    };
    match selector {
        Selector::Top | Selector::Diagonal => top_subalgebra(&ambient),
        Selector::Arrow => arrow_subalgebra(&ambient),
        Selector::Jordan => match source {
            QuiverSource::Family(n) => jordan_subalgebra(*n, ambient.field().clone()),
            QuiverSource::File(_) => Err(Error::invalid(
                "the jordan selector is only defined for the linear-quiver family (--family T<n>)",
            )),
        },
        Selector::Custom(path) => {
            let text = std::fs::read_to_string(path)?;
            let gens = parse_generator_file(&text, &ambient)?;
            subalgebra_closure(&ambient, &gens)
        }
    }
}

fn with_field_dispatch<T>(
    job: &JobArgs,
    run: impl FnOnce(EmbeddingEither) -> Result<T>,
) -> Result<T> {
    let spec: FieldSpec = job.field.parse()?;
    spec.validate()?;
    let source = quiver_source(job)?;
    let selector = Selector::parse(&job.sub)?;
    match spec {
        FieldSpec::Rationals => {
            let e = build_embedding(&source, &selector, Rationals)?;
            run(EmbeddingEither::Rational(Box::new(e)))
        }
        FieldSpec::PrimeField(p) => {
            let e = build_embedding(&source, &selector, PrimeField::new(p)?)?;
            run(EmbeddingEither::Prime(Box::new(e)))
        }
    }
}

/// Runtime dispatch over the two supported scalar types.
pub enum EmbeddingEither {
    Rational(Box<SubalgebraEmbedding<Rationals>>),
    Prime(Box<SubalgebraEmbedding<PrimeField>>),
}

pub fn cmd_depth(args: &DepthArgs) -> Result<i32> {
    if args.job.cutoff < 1 {
        return Err(Error::invalid("--cutoff must be at least 1"));
    }
    with_field_dispatch(&args.job, |either| {
        let report = match either {
            EmbeddingEither::Rational(e) => DepthEngine::new(*e)?.report(args.job.cutoff)?,
            EmbeddingEither::Prime(e) => DepthEngine::new(*e)?.report(args.job.cutoff)?,
        };
        match args.format {
            Format::Json => println!("{}", serde_json::to_string_pretty(&report.to_json())?),
            Format::Csv => print!("{}", report.to_csv()),
            Format::Text => print!("{}", report.to_text()),
        }
        Ok(if report.min_depth.resolved().is_some() {
            EXIT_OK
        } else {
            EXIT_UNRESOLVED
        })
    })
}

pub fn cmd_tensor_dims(args: &TensorDimsArgs) -> Result<i32> {
    with_field_dispatch(&args.job, |either| {
        let dims: Vec<(usize, usize)> = match either {
            EmbeddingEither::Rational(e) => {
                let mut chain = TensorChain::new(*e)?;
                (0..=args.max_n)
                    .map(|n| Ok((n, chain.dim_c_n(n)?)))
                    .collect::<Result<_>>()?
            }
            EmbeddingEither::Prime(e) => {
                let mut chain = TensorChain::new(*e)?;
                (0..=args.max_n)
                    .map(|n| Ok((n, chain.dim_c_n(n)?)))
                    .collect::<Result<_>>()?
            }
        };
        match args.format {
            Format::Json => {
                let rows: Vec<_> = dims
                    .iter()
                    .map(|(n, d)| json!({"n": n, "dim": d}))
                    .collect();
                println!("{}", serde_json::to_string_pretty(&json!(rows))?);
            }
            Format::Csv => {
                let mut out = String::from("n,dim\n");
                for (n, d) in &dims {
                    writeln!(out, "{n},{d}").unwrap();
                }
                print!("{out}");
            }
            Format::Text => {
                for (n, d) in &dims {
                    println!("dim C_{n} = {d}");
                }
            }
        }
        Ok(EXIT_OK)
    })
}

pub fn cmd_paper_suite(args: &PaperSuiteArgs) -> Result<i32> {
    let only = match &args.only {
        Some(s) => Some(s.parse::<Section>()?),
        None => None,
    };
    let items = run_suite(only);
    if items.is_empty() {
        return Err(Error::invalid("no suite items matched the filter"));
    }
    let mut failed = 0usize;
    for item in &items {
        println!(
            "{} {} [{}] ({} ms): {}",
            if item.passed { "PASS" } else { "FAIL" },
            item.id,
            item.section.as_str(),
            item.millis,
            item.detail
        );
        if !item.passed {
            failed += 1;
        }
    }
    println!(
        "{} items, {} passed, {} failed",
        items.len(),
        items.len() - failed,
        failed
    );
    Ok(if failed == 0 { EXIT_OK } else { EXIT_USAGE })
}

pub fn cmd_explore_jordan(args: &ExploreJordanArgs) -> Result<i32> {
    if args.from < 2 {
        return Err(Error::invalid("--from must be at least 2"));
    }
    if args.to < args.from {
        return Err(Error::invalid("--to must be >= --from"));
    }
    if args.cutoff < 1 {
        return Err(Error::invalid("--cutoff must be at least 1"));
    }
    println!("# exploratory sweep; unresolved rows report certified lower bounds");
    println!("n,depth,resolved");
    let mut any_unresolved = false;
    for n in args.from..=args.to {
        let e = jordan_subalgebra(n, Rationals)?;
        let mut engine = DepthEngine::new(e)?;
        let d = engine.min_depth(args.cutoff)?;
        let resolved = d.resolved().is_some();
        any_unresolved |= !resolved;
        println!("{n},{},{}", d.render(), resolved);
    }
    Ok(if any_unresolved {
        EXIT_UNRESOLVED
    } else {
        EXIT_OK
    })
}

/// Entry point used by `main`; maps errors to the documented exit codes.
pub fn run(cli: &Cli) -> i32 {
    let outcome = match &cli.command {
        Command::Depth(args) => cmd_depth(args),
        Command::TensorDims(args) => cmd_tensor_dims(args),
        Command::PaperSuite(args) => cmd_paper_suite(args),
        Command::ExploreJordan(args) => cmd_explore_jordan(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            EXIT_INVALID
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names() {
        assert_eq!(parse_family("T3").unwrap(), 3);
        assert_eq!(parse_family("t12").unwrap(), 12);
        assert!(parse_family("T0").is_err());
        assert!(parse_family("U3").is_err());
        assert!(parse_family("T").is_err());
    }

    #[test]
    fn selector_parsing() {
        assert_eq!(Selector::parse(&["top".into()]).unwrap(), Selector::Top);
        assert_eq!(
            Selector::parse(&["diagonal".into()]).unwrap(),
            Selector::Diagonal
        );
        assert!(matches!(
            Selector::parse(&["custom".into(), "gens.txt".into()]).unwrap(),
            Selector::Custom(_)
        ));
        assert!(Selector::parse(&["custom".into()]).is_err());
        assert!(Selector::parse(&["middle".into()]).is_err());
    }

    #[test]
    fn generator_file_parsing() {
        let a = t_n(2, Rationals).unwrap();
        // U_2 generators: the unit and the arrow
        let gens = parse_generator_file("1\na_2_1\n", &a).unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[0], a.unit().clone());
        // signed sums with coefficients, and comments
        let gens = parse_generator_file("# gens\ne_1 - e_2\n2*a_2_1 + 1/2*e_1\n", &a).unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[0].len(), 2);
        assert!(parse_generator_file("nope\n", &a).is_err());
        assert!(parse_generator_file("", &a).is_err());
        assert!(parse_generator_file("e_1 + \n", &a).is_err());
    }

    #[test]
    fn custom_selector_matches_named_family() {
        // the closure of {1, a_2_1} is the arrow subalgebra of T_2
        let a = t_n(2, Rationals).unwrap();
        let gens = parse_generator_file("1\na_2_1\n", &a).unwrap();
        let custom = subalgebra_closure(&a, &gens).unwrap();
        let named = arrow_subalgebra(&a).unwrap();
        assert_eq!(custom.sub().dim(), named.sub().dim());
        let mut s1 = crate::exactlin::RowSpan::new(Rationals, a.dim());
        for v in custom.image_basis() {
            s1.insert(&v);
        }
        let mut s2 = crate::exactlin::RowSpan::new(Rationals, a.dim());
        for v in named.image_basis() {
            s2.insert(&v);
        }
        assert!(s1.same_span(&s2));
    }

    #[test]
    fn jordan_requires_linear_family() {
        let quiver = crate::quiver::kronecker_quiver();
        let source = QuiverSource::File(quiver);
        let err = build_embedding(&source, &Selector::Jordan, Rationals).unwrap_err();
        assert!(err.to_string().contains("linear-quiver"), "{err}");
    }

    #[test]
    fn prime_field_job_runs() {
        let source = QuiverSource::Family(2);
        let f = PrimeField::new(5).unwrap();
        let e = build_embedding(&source, &Selector::Top, f).unwrap();
        let mut engine = DepthEngine::new(e).unwrap();
        assert_eq!(
            engine.min_depth(6).unwrap(),
            crate::depth::DepthValue::Resolved(3)
        );
    }
}
