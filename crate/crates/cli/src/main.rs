use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tmbin::factorization::{
    enumerate_factorizations, image_prefix, image_suffix, DTDecomposition, SigmaFactorization,
};
use tmbin::formulas::{abelian_b1, edge_count_e, y_count_y};
use tmbin::rauzy::{build_graph, eulerian_check, export_graph, shift_isomorphism_check, y_sets, GraphFormat};
use tmbin::verify::{complexity_rows, run_suite, ComplexityKind, InstanceMode, Suite, SuiteParams};
use tmbin::{limits, tm_prefix, Error, FormulaDomainError, Limits, Word};

const EXIT_MISMATCH: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "tmbin", version, about = "Binomial complexities of generalized Thue-Morse words")]
struct Cli {
    #[command(flatten)]
    caps: Caps,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Caps {
    /// Longest prefix of t_m (or letter image) that may be built.
    #[arg(long, global = true, env = "TMBIN_MAX_PREFIX", value_parser = clap::value_parser!(u64).range(1..))]
    max_prefix: Option<u64>,

    /// Largest number of subwords tracked by one signature.
    #[arg(long, global = true, env = "TMBIN_MAX_SIGNATURE_DOMAIN", value_parser = clap::value_parser!(u64).range(1..))]
    max_signature_domain: Option<u64>,

    /// Longest factor length that may be enumerated.
    #[arg(long, global = true, env = "TMBIN_MAX_FACTOR_LENGTH", value_parser = clap::value_parser!(u64).range(1..))]
    max_factor_length: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Csv,
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Factor,
    Abelian,
    Binomial,
}

#[derive(Subcommand)]
enum Command {
    /// Print a prefix of t_m.
    Generate {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Tabulate a complexity function next to its closed form.
    Complexity {
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Depth for --kind binomial.
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        /// Exit with status 1 if any row disagrees with the formula.
        #[arg(long)]
        check: bool,
        /// Emit only `n,value` rows.
        #[arg(long)]
        bare: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// List the sigma^k-factorizations of a factor.
    Factorize {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: u32,
        /// Digits for m <= 10, otherwise comma-separated letters.
        #[arg(long)]
        word: String,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
    /// Export the abelian Rauzy graph G_{m,order}.
    Rauzy {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
        /// Compare vertex, edge and Y-set counts with their formulas.
        #[arg(long)]
        check: bool,
    },
    /// Run brute-force verification suites.
    Verify {
        #[arg(long, default_value = "all", value_parser = clap::builder::PossibleValuesParser::new(Suite::NAMES))]
        suite: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long, default_value_t = tmbin::verify::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = tmbin::verify::DEFAULT_INSTANCES)]
        instances: usize,
        /// Draw big-difference instances from arbitrary words.
        #[arg(long)]
        arbitrary: bool,
        /// Report elapsed_ms as 0 so output is byte-stable.
        #[arg(long)]
        no_timing: bool,
        #[arg(long, value_enum, default_value = "plain")]
        format: Format,
    },
}

enum Failure {
    Lib(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<FormulaDomainError> for Failure {
    fn from(e: FormulaDomainError) -> Self {
        Failure::Lib(e.into())
    }
}

struct Outcome {
    text: String,
    code: u8,
}

impl Outcome {
    fn ok(text: String) -> Outcome {
        Outcome { text, code: 0 }
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

fn formats(given: Format, allowed: &[Format]) -> Result<(), Failure> {
    if allowed.contains(&given) {
        Ok(())
    } else {
        usage("this command does not support that --format")
    }
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn generate(m: usize, length: usize, format: Format) -> Result<Outcome, Failure> {
    formats(format, &[Format::Plain, Format::Json])?;
    let w = tm_prefix(m, length)?;
    let text = match format {
        Format::Json => json_text(&json!({ "m": m, "length": length, "word": w.to_string() })),
        _ if w.is_empty() => String::new(),
        _ => format!("{w}\n"),
    };
    Ok(Outcome::ok(text))
}

#[allow(clippy::too_many_arguments)]
fn complexity(
    m: usize,
    kind: Kind,
    k: usize,
    from: usize,
    to: usize,
    check: bool,
    bare: bool,
    format: Format,
) -> Result<Outcome, Failure> {
    formats(format, &[Format::Csv, Format::Json])?;
    if from > to {
        return usage(format!("empty range --from {from} --to {to}"));
    }
    let kind = match kind {
        Kind::Factor => ComplexityKind::Factor,
        Kind::Abelian => ComplexityKind::Abelian,
        Kind::Binomial if k == 0 => return usage("--k must be >= 1"),
        Kind::Binomial => ComplexityKind::Binomial(k),
    };
    let rows = complexity_rows(m, kind, from..=to)?;
    let all_match = rows.iter().all(|r| r.matches());
    let text = match (format, bare) {
        (Format::Json, _) => json_text(&json!(rows
            .iter()
            .map(|r| json!({ "n": r.n, "computed": r.computed, "formula": r.formula, "match": r.matches() }))
            .collect::<Vec<_>>())),
        (_, true) => tmbin::factors::complexity_csv(
            &rows.iter().map(|r| (r.n, r.computed as usize)).collect::<Vec<_>>(),
        ),
        _ => {
            let mut s = String::from("n,computed,formula,match\n");
            for r in &rows {
                s.push_str(&format!("{},{},{},{}\n", r.n, r.computed, r.formula, r.matches()));
            }
            s
        }
    };
    let code = if check && !all_match { EXIT_MISMATCH } else { 0 };
    Ok(Outcome { text, code })
}

fn decompositions(
    m: usize,
    f: &SigmaFactorization,
) -> Result<(Option<DTDecomposition>, Option<DTDecomposition>), Failure> {
    let x = match f.a {
        Some(a) => Some(image_suffix(m, f.k, a, f.x.len())?.1),
        None => None,
    };
    let y = match f.b {
        Some(b) => Some(image_prefix(m, f.k, b, f.y.len())?.1),
        None => None,
    };
    Ok((x, y))
}

fn describe(d: &Option<DTDecomposition>, what: &str, k: u32) -> String {
    match d {
        None => "empty".to_string(),
        Some(d) => {
            let parts: Vec<String> = d
                .parts
                .iter()
                .map(|v| if v.is_empty() { "ε".to_string() } else { v.to_string() })
                .collect();
            let digits: Vec<String> = d.digits.iter().map(|c| c.to_string()).collect();
            format!(
                "{what} of sigma^{k}({}), digits [{}], parts [{}]",
                d.anchor,
                digits.join(","),
                parts.join(",")
            )
        }
    }
}

fn factorize(m: usize, k: u32, word: &str, format: Format) -> Result<Outcome, Failure> {
    formats(format, &[Format::Plain, Format::Json])?;
    let w = Word::parse(m, word)?;
    let all = enumerate_factorizations(m, k, &w)?;
    let unique_len = (m as u128)
        .checked_pow(k)
        .is_some_and(|b| (w.len() as u128) >= 2 * b);
    if unique_len && all.len() != 1 {
        return Err(Error::InternalInvariant(format!(
            "{} factorizations of a factor of length >= 2m^k",
            all.len()
        ))
        .into());
    }
    let mut items = Vec::new();
    let mut plain = format!("word {w} (m={m}, k={k}, length {})\n", w.len());
    plain.push_str(&format!("{} factorization(s)\n", all.len()));
    for (i, f) in all.iter().enumerate() {
        let (dx, dy) = decompositions(m, f)?;
        let letter = |l: Option<tmbin::Letter>| l.map_or("-".to_string(), |l| l.to_string());
        plain.push_str(&format!(
            "[{}] x={} u={} y={} a={} b={}\n    x: {}\n    y: {}\n",
            i + 1,
            f.x,
            f.u,
            f.y,
            letter(f.a),
            letter(f.b),
            describe(&dx, "suffix", k),
            describe(&dy, "prefix", k)
        ));
        let mut v = f.to_json();
        v["x_decomposition"] = dx.map_or(serde_json::Value::Null, |d| d.to_json());
        v["y_decomposition"] = dy.map_or(serde_json::Value::Null, |d| d.to_json());
        items.push(v);
    }
    let pair = if unique_len {
        plain.push_str(&format!("p_U={} s_U={}\n", all[0].x, all[0].y));
        json!({ "p": all[0].x.to_string(), "s": all[0].y.to_string() })
    } else {
        serde_json::Value::Null
    };
    let text = match format {
        Format::Json => json_text(&json!({
            "word": w.to_string(), "m": m, "k": k, "unique": unique_len,
            "factorizations": items, "ps_pair": pair,
        })),
        _ => plain,
    };
    Ok(Outcome::ok(text))
}

fn rauzy(m: usize, order: usize, format: Format, check: bool) -> Result<Outcome, Failure> {
    formats(format, &[Format::Dot, Format::Json])?;
    let g = build_graph(m, order)?;
    let text = export_graph(
        &g,
        if format == Format::Json { GraphFormat::Json } else { GraphFormat::Dot },
    );
    let mut code = 0;
    if check {
        let (mm, ll) = (m as u128, order as u128);
        let mut lines = Vec::new();
        let mut compare = |name: &str, got: u128, want: u128| {
            let ok = got == want;
            lines.push(format!("{} {name}: {got} (formula {want})", if ok { "PASS" } else { "FAIL" }));
            ok
        };
        let mut ok = compare("vertices", g.vertex_count() as u128, abelian_b1(mm, ll)?);
        if order <= 2 * m {
            ok &= compare("edges", g.edge_count() as u128, edge_count_e(mm, ll)?);
        }
        if order < 2 * m {
            let y = y_sets(m, order)?;
            ok &= compare("Y", y.total() as u128, y_count_y(mm, ll)?);
            ok &= compare("Y_R - Y_L", y.right.len() as u128, y.left.len() as u128);
        }
        if order < m {
            let e = eulerian_check(&g);
            lines.push(format!("{} eulerian", if e { "PASS" } else { "FAIL" }));
            ok &= e;
        } else if order < 2 * m {
            let s = shift_isomorphism_check(m, order, 1)?;
            lines.push(format!("{} shift isomorphism (t=1)", if s { "PASS" } else { "FAIL" }));
            ok &= s;
        }
        for l in lines {
            eprintln!("{l}");
        }
        if !ok {
            code = EXIT_MISMATCH;
        }
    }
    Ok(Outcome { text, code })
}

#[allow(clippy::too_many_arguments)]
fn verify(
    suite: &str,
    m: usize,
    k: u32,
    max_n: Option<usize>,
    seed: u64,
    instances: usize,
    arbitrary: bool,
    no_timing: bool,
    format: Format,
) -> Result<Outcome, Failure> {
    formats(format, &[Format::Plain, Format::Json])?;
    let Some(suite) = Suite::parse(suite) else {
        return usage(format!("unknown suite {suite}"));
    };
    let params = SuiteParams {
        m,
        k,
        max_n,
        seed,
        instances,
        mode: if arbitrary { InstanceMode::Arbitrary } else { InstanceMode::Context },
    };
    let mut reports = run_suite(suite, &params)?;
    if no_timing {
        for r in &mut reports {
            r.elapsed_ms = 0;
        }
    }
    let passed = reports.iter().all(|r| r.passed());
    let text = match format {
        Format::Json => json_text(&json!(reports.iter().map(|r| r.to_json()).collect::<Vec<_>>())),
        _ => {
            let mut s = String::new();
            for r in &reports {
                s.push_str(&format!(
                    "{} {} instances={} failures={} elapsed_ms={}",
                    if r.passed() { "PASS" } else { "FAIL" },
                    r.check,
                    r.instances,
                    r.failures.len(),
                    r.elapsed_ms
                ));
                if let Some(d) = r.details.get("difference").and_then(|d| d.as_str()) {
                    s.push_str(&format!(" difference={d}"));
                }
                s.push('\n');
                if let Some(first) = r.failures.first() {
                    s.push_str(&format!("  first failure: {first}\n"));
                }
            }
            s
        }
    };
    Ok(Outcome {
        text,
        code: if passed { 0 } else { EXIT_MISMATCH },
    })
}

fn apply_caps(caps: &Caps) {
    let mut l: Limits = limits::current();
    let clamp = |v: u64| usize::try_from(v).unwrap_or(usize::MAX);
    if let Some(v) = caps.max_prefix {
        l.max_prefix_len = clamp(v);
    }
    if let Some(v) = caps.max_signature_domain {
        l.max_signature_domain = clamp(v);
    }
    if let Some(v) = caps.max_factor_length {
        l.max_factor_len = clamp(v);
    }
    limits::set(l);
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    apply_caps(&cli.caps);
    match cli.command {
        Command::Generate { m, length, format } => generate(m, length, format),
        Command::Complexity { m, kind, k, from, to, check, bare, format } => {
            complexity(m, kind, k, from, to, check, bare, format)
        }
        Command::Factorize { m, k, word, format } => factorize(m, k, &word, format),
        Command::Rauzy { m, order, format, check } => rauzy(m, order, format, check),
        Command::Verify { suite, m, k, max_n, seed, instances, arbitrary, no_timing, format } => {
            verify(&suite, m, k, max_n, seed, instances, arbitrary, no_timing, format)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceCap { .. } => EXIT_CAP,
        Error::InternalInvariant(_) => EXIT_MISMATCH,
        _ => EXIT_INVALID,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    match run(cli) {
        Ok(out) => {
            let written = match &output {
                Some(path) => fs::write(path, &out.text),
                None => io::stdout().write_all(out.text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(EXIT_INVALID);
            }
            ExitCode::from(out.code)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
