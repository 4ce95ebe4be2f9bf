//! Command-line front end: single computations (`engel`), word iteration
//! (`iterate`), the full check suite (`verify`), and oracle transport
//! (`oracle`). Exit status is 0 when every requested check passes, 1 when
//! a check fails, 2 on configuration or syntax errors.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use iterid::theorem::{curried_word, GammaGenerators};
use iterid::verify::{check_oracle_for_prime, run_all, CheckRecord, VerifyConfig};
use iterid::words::{scan_vanishing, Word, DEFAULT_SEARCH_BOUND};
use iterid::{Error, GroupElement, Prime, PruferElement, WreathElement};

#[derive(Parser)]
#[command(
    name = "iterid",
    about = "Exact computations in the wreath product of two quasi-cyclic groups",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the Engel bracket element [z_i,_j y_i^(p-1)] and its exact order
    Engel {
        /// Ambient prime
        #[arg(long)]
        p: u64,
        /// Scenario parameter (depth of the generator images), >= 1
        #[arg(long)]
        i: u32,
        /// Number of Engel bracket folds
        #[arg(long)]
        j: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Iterate a word at an assignment and report the minimal vanishing index
    Iterate {
        /// Ambient prime
        #[arg(long)]
        p: u64,
        /// Word in the DSL grammar; defaults to the scenario word for theorem assignments
        #[arg(long)]
        word: Option<String>,
        /// Assignment: comma-separated elements (wreath `(base; u^top)` or
        /// quasi-cyclic `a/b`), or the shorthand `theorem:i=N`
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        assign: Vec<String>,
        /// Search bound for the vanishing index
        #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND)]
        bound: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run the full verification suite
    Verify {
        /// Primes to sweep, comma separated
        #[arg(long, value_delimiter = ',', default_values_t = vec![2u64, 3, 5])]
        p: Vec<u64>,
        /// Largest scenario parameter in the sweeps
        #[arg(long = "i-max", default_value_t = 6)]
        i_max: u32,
        /// Seed for all randomized suites
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Cross-validate the exact arithmetic against brute-force finite wreath products
    Oracle {
        /// Ambient prime
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// Seed for the random pair sampling
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        // a closed pipe on stdout is how consumers stop reading, not an error
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

enum CliError {
    Usage(String),
    Io(io::Error),
}

impl From<String> for CliError {
    fn from(message: String) -> Self {
        CliError::Usage(message)
    }
}

impl From<&str> for CliError {
    fn from(message: &str) -> Self {
        CliError::Usage(message.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.into())
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Engel { p, i, j, format } => cmd_engel(p, i, j, format),
        Command::Iterate {
            p,
            word,
            assign,
            bound,
            format,
        } => cmd_iterate(p, word, assign, bound, format),
        Command::Verify {
            p,
            i_max,
            seed,
            format,
        } => cmd_verify(p, i_max, seed, format),
        Command::Oracle { p, seed, format } => cmd_oracle(p, seed, format),
    }
}

fn parse_prime(p: u64) -> Result<Prime, CliError> {
    Prime::new(p).map_err(|e| CliError::Usage(e.to_string()))
}

fn emit_records(records: &[CheckRecord]) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for record in records {
        serde_json::to_writer(&mut out, record)?;
        writeln!(out)?;
    }
    Ok(())
}

fn cmd_engel(p: u64, i: u32, j: u32, format: Format) -> Result<ExitCode, CliError> {
    let prime = parse_prime(p)?;
    if i < 1 {
        return Err("--i must be at least 1".into());
    }
    let generators = GammaGenerators::new(prime, i);
    let element = generators.bracket_element(j);
    let order = element.order();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Text => {
            writeln!(out, "bracket [z_i,_j y_i^(p-1)] at p={p} i={i} j={j}")?;
            writeln!(out, "element: {element}")?;
            writeln!(out, "order: {order}")?;
            writeln!(out, "trivial: {}", element.is_identity())?;
        }
        Format::JsonLines => {
            emit_records(&[CheckRecord::info(
                "engel",
                format!("p={p} i={i} j={j}"),
                format!("order={order} element={element}"),
            )])?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// What the assignment text resolved to: either wreath-product elements, a
/// quasi-cyclic tuple, or the scenario shorthand.
enum Assignment {
    Gamma(Vec<WreathElement>),
    QuasiCyclic(Vec<PruferElement>),
    Theorem(u32),
}

fn parse_assignment(prime: Prime, specs: &[String]) -> Result<Assignment, CliError> {
    if specs.is_empty() {
        return Err("--assign requires at least one element".into());
    }
    if let Some(rest) = specs[0].trim().strip_prefix("theorem:") {
        if specs.len() != 1 {
            return Err("theorem:i=N cannot be combined with other assignments".into());
        }
        let i = rest
            .strip_prefix("i=")
            .and_then(|v| v.parse::<u32>().ok())
            .ok_or_else(|| format!("cannot parse {:?}: expected theorem:i=N", specs[0]))?;
        if i < 1 {
            return Err("theorem parameter i must be at least 1".into());
        }
        return Ok(Assignment::Theorem(i));
    }
    if specs.iter().all(|s| s.trim_start().starts_with('(')) {
        let elements = specs
            .iter()
            .map(|s| WreathElement::parse(prime, s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        return Ok(Assignment::Gamma(elements));
    }
    let elements = specs
        .iter()
        .map(|s| PruferElement::parse(prime, s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(Assignment::QuasiCyclic(elements))
}

/// Formats a word syntax error with a caret under the offending position.
fn word_error(text: &str, err: Error) -> String {
    match err {
        Error::Syntax { pos, msg } => {
            let caret = " ".repeat(text[..pos.min(text.len())].chars().count());
            format!("syntax error at position {pos}: {msg}\n  {text}\n  {caret}^")
        }
        other => other.to_string(),
    }
}

struct IterateReport {
    values: Vec<String>,
    outcome: Option<u32>,
    bound: u32,
    /// theorem mode reports applications of the word (index + 1)
    theorem_mode: bool,
}

fn scan_to_report<G: GroupElement + std::fmt::Display>(
    word: &Word,
    assignment: &[G],
    bound: u32,
    theorem_mode: bool,
) -> Result<IterateReport, CliError> {
    let scan =
        scan_vanishing(word, assignment, bound).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(IterateReport {
        values: scan.values.iter().map(|v| v.to_string()).collect(),
        outcome: scan.outcome.found(),
        bound,
        theorem_mode,
    })
}

fn cmd_iterate(
    p: u64,
    word_text: Option<String>,
    assign: Vec<String>,
    bound: u32,
    format: Format,
) -> Result<ExitCode, CliError> {
    let prime = parse_prime(p)?;
    if bound < 1 {
        return Err("--bound must be at least 1".into());
    }
    let assignment = parse_assignment(prime, &assign)?;

    let word = match (&word_text, &assignment) {
        (Some(text), _) => Word::parse(text).map_err(|e| word_error(text, e))?,
        (None, Assignment::Theorem(_)) => curried_word(prime),
        (None, _) => return Err("--word is required unless the assignment is theorem:i=N".into()),
    };

    let report = match &assignment {
        Assignment::Gamma(elements) => scan_to_report(&word, elements, bound, false)?,
        Assignment::QuasiCyclic(elements) => scan_to_report(&word, elements, bound, false)?,
        Assignment::Theorem(i) => {
            let generators = GammaGenerators::new(prime, *i);
            let elements = [generators.z().clone(), generators.y_power()];
            scan_to_report(&word, &elements, bound, true)?
        }
    };

    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Text => {
            writeln!(out, "word: {word}")?;
            for (j, value) in report.values.iter().enumerate() {
                writeln!(out, "iterate j={j}: {value}")?;
            }
            match report.outcome {
                Some(index) if report.theorem_mode => {
                    writeln!(
                        out,
                        "minimal index: {} (applications of the word; first trivial iterate at j={index})",
                        index + 1
                    )?;
                }
                Some(index) => writeln!(out, "minimal index: {index}")?,
                None => writeln!(out, "status: exhausted at bound {}", report.bound)?,
            }
        }
        Format::JsonLines => {
            let mut records: Vec<CheckRecord> = report
                .values
                .iter()
                .enumerate()
                .map(|(j, value)| CheckRecord::info("iterate", format!("j={j}"), value.clone()))
                .collect();
            records.push(match report.outcome {
                Some(index) if report.theorem_mode => CheckRecord::info(
                    "minimal_index",
                    "mode=theorem".into(),
                    (index + 1).to_string(),
                ),
                Some(index) => CheckRecord::info("minimal_index", String::new(), index.to_string()),
                None => CheckRecord::info(
                    "minimal_index",
                    String::new(),
                    format!("exhausted at bound {}", report.bound),
                ),
            });
            emit_records(&records)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(p: Vec<u64>, i_max: u32, seed: u64, format: Format) -> Result<ExitCode, CliError> {
    if p.is_empty() {
        return Err("--p requires at least one prime".into());
    }
    if i_max < 1 {
        return Err("--i-max must be at least 1".into());
    }
    let primes = p
        .into_iter()
        .map(parse_prime)
        .collect::<Result<Vec<_>, _>>()?;
    let config = VerifyConfig {
        primes,
        i_max,
        seed,
        ..VerifyConfig::default()
    };
    let report = run_all(&config);
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Text => report.render_text(&mut out)?,
        Format::JsonLines => report.render_json_lines(&mut out)?,
    }
    if report.all_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_oracle(p: u64, seed: u64, format: Format) -> Result<ExitCode, CliError> {
    let prime = parse_prime(p)?;
    let group = check_oracle_for_prime(prime, seed, 500);
    let failures = group.failures();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Text => {
            for record in &group.records {
                writeln!(
                    out,
                    "[{}] {} {} {}",
                    record.result, record.check, record.params, record.value
                )?;
            }
            writeln!(
                out,
                "{} transport checks, {} failed ({:?})",
                group.records.len(),
                failures,
                group.elapsed
            )?;
        }
        Format::JsonLines => emit_records(&group.records)?,
    }
    if failures == 0 {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
