use std::io::{self, BufRead, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use arcnest::bijection::{ptr_coloured, ptr_with, BijectionError, ColourSemantics, Step4};
use arcnest::diagram::{
    natural_kind, parse, serialize, ArcDiagram, ClassKind, Layer, ObjectClass, VertexRole,
};
use arcnest::enumerate::{self, EnumError};
use arcnest::render::{render_ascii, render_svg};
use arcnest::stats::{label_of, max_crossing, max_nesting};
use arcnest::structure::is_admissible;

const OK: u8 = 0;
const USAGE: u8 = 1;
const INADMISSIBLE: u8 = 2;
const INVARIANT: u8 = 3;

const DEFAULT_MAX_N: usize = 10;

#[derive(Parser)]
#[command(
    name = "arcnest",
    version,
    about = "Crossings and nestings of arc diagrams"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Label, maximal crossing/nesting numbers, roles and admissibility.
    Stats {
        /// Diagram text, or `-` to read one diagram per line from stdin.
        input: String,
        /// Use enhanced statistics for matchings and set partitions.
        #[arg(long)]
        enhanced: bool,
    },
    /// Apply the crossing/nesting involution.
    Ptr {
        input: String,
        #[arg(long)]
        enhanced: bool,
        #[arg(long, value_enum, default_value_t = Semantics::Def1)]
        coloured_semantics: Semantics,
        /// Apply the map twice and fail unless the input comes back.
        #[arg(long)]
        verify: bool,
        /// Endpoints reversed among the connecting arcs (experimental).
        #[arg(long, value_enum, default_value_t = Step4Arg::Closers)]
        step4: Step4Arg,
    },
    /// Exhaustive involution and label-swap sweep.
    Check {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long)]
        enhanced: bool,
        #[arg(long)]
        max_n: usize,
        /// Include elapsed time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Counts of admissible objects by size.
    Enum {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long)]
        enhanced: bool,
        #[arg(long)]
        terms: usize,
        /// Compare the first terms against exhaustive counts.
        #[arg(long)]
        oracle_check_up_to: Option<usize>,
        /// Count by exhaustive enumeration instead of the series.
        #[arg(long)]
        brute_force: bool,
        #[arg(long, conflicts_with = "oeis")]
        json: bool,
        /// Index/value pairs, one per line.
        #[arg(long)]
        oeis: bool,
    },
    /// Draw a diagram.
    Render {
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Matching,
    SetPartition,
    Permutation,
}

impl ClassArg {
    fn kind(self) -> ClassKind {
        match self {
            ClassArg::Matching => ClassKind::Matching,
            ClassArg::SetPartition => ClassKind::SetPartition,
            ClassArg::Permutation => ClassKind::Permutation,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Semantics {
    Def1,
    Def2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Step4Arg {
    Closers,
    Openers,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Ascii,
    Svg,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn max_n_cap() -> usize {
    std::env::var("ARCNEST_MAX_N")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_N)
}

fn read_input(input: &str, enhanced: bool) -> Result<(ObjectClass, ArcDiagram), Failure> {
    let (mut class, d) = parse(input).map_err(|e| fail(USAGE, format!("parse error: {e}")))?;
    if class.kind != ClassKind::Permutation {
        class.enhanced = enhanced;
    }
    Ok((class, d))
}

fn roles_json(d: &ArcDiagram, layer: Layer) -> Value {
    let roles = d.roles(layer);
    let pick =
        |r: VertexRole| -> Vec<usize> { (1..=d.n()).filter(|&v| roles[v - 1] == r).collect() };
    json!({
        "fixed": pick(VertexRole::FixedPoint),
        "openers": pick(VertexRole::Opener),
        "closers": pick(VertexRole::Closer),
        "transitory": pick(VertexRole::Transitory),
    })
}

fn cmd_stats(input: &str, enhanced: bool) -> Result<String, Failure> {
    let (class, d) = read_input(input, enhanced)?;
    let mut out = serde_json::Map::new();
    if let Value::Object(label) = serde_json::to_value(label_of(class, &d)).unwrap() {
        out.extend(label);
    }
    out.insert("cr".into(), json!(max_crossing(class, &d)));
    out.insert("ne".into(), json!(max_nesting(class, &d)));
    let roles = match class.kind {
        ClassKind::Permutation => json!({
            "upper": roles_json(&d, Layer::Upper),
            "lower": roles_json(&d, Layer::Lower),
        }),
        _ => roles_json(&d, Layer::Upper),
    };
    out.insert("roles".into(), roles);
    let report = is_admissible(class, &d).map_err(|e| fail(INVARIANT, e.to_string()))?;
    out.insert(
        "admissibility".into(),
        serde_json::to_value(report).unwrap(),
    );
    Ok(Value::Object(out).to_string())
}

fn cmd_ptr(
    input: &str,
    enhanced: bool,
    semantics: Semantics,
    verify: bool,
    step4: Step4Arg,
) -> Result<String, Failure> {
    let (class, d) = read_input(input, enhanced)?;
    let apply = |x: &ArcDiagram| match (semantics, step4) {
        (Semantics::Def1, Step4Arg::Closers) => {
            ptr_coloured(class, x, ColourSemantics::WholeDiagram)
        }
        (Semantics::Def1, Step4Arg::Openers) => ptr_with(class, x, Step4::Openers),
        (Semantics::Def2, _) => ptr_coloured(class, x, ColourSemantics::PerColourClass),
    };
    let image = apply(&d).map_err(|e| match e {
        BijectionError::Inadmissible(_) | BijectionError::ColourClassNotPermutation(_) => {
            fail(INADMISSIBLE, e.to_string())
        }
        other => fail(INVARIANT, other.to_string()),
    })?;
    if verify {
        match apply(&image) {
            Ok(back) if back == d => {}
            Ok(back) => {
                return Err(fail(
                    INVARIANT,
                    format!(
                        "not an involution: image maps to {}",
                        serialize(natural_kind(class.kind, &back), &back)
                    ),
                ))
            }
            Err(e) => return Err(fail(INVARIANT, format!("image rejected: {e}"))),
        }
    }
    Ok(serialize(natural_kind(class.kind, &image), &image))
}

fn enum_failure(e: EnumError) -> Failure {
    match e {
        EnumError::Asymmetric { .. } => fail(INVARIANT, e.to_string()),
        _ => fail(USAGE, e.to_string()),
    }
}

fn guard_sweep(n: usize) -> Result<(), Failure> {
    let cap = max_n_cap();
    if n > cap {
        return Err(fail(USAGE, format!("size {n} exceeds ARCNEST_MAX_N={cap}")));
    }
    Ok(())
}

fn cmd_check(
    class: ClassArg,
    enhanced: bool,
    max_n: usize,
    timing: bool,
) -> Result<String, Failure> {
    guard_sweep(max_n)?;
    let kind = class.kind();
    let class = ObjectClass::new(kind, enhanced || kind == ClassKind::Permutation);
    let mut report = enumerate::check(class, max_n).map_err(enum_failure)?;
    if !timing {
        report.elapsed_ms = None;
    }
    let text = serde_json::to_string(&report).unwrap();
    if report.passed() {
        Ok(text)
    } else {
        Err(fail(INVARIANT, text))
    }
}

fn cmd_enum(
    class: ClassArg,
    enhanced: bool,
    terms: usize,
    oracle_up_to: Option<usize>,
    brute_force: bool,
    as_json: bool,
    oeis: bool,
) -> Result<String, Failure> {
    let class = ObjectClass::new(
        class.kind(),
        enhanced || class.kind() == ClassKind::Permutation,
    );
    let seq = if brute_force {
        guard_sweep(terms.saturating_sub(1))?;
        enumerate::brute_force_sequence(class, terms).map_err(enum_failure)?
    } else {
        enumerate::sequence_for(class, terms)
            .map_err(|e| fail(USAGE, format!("{e}; use --brute-force")))?
    };
    if let Some(k) = oracle_up_to {
        guard_sweep(k)?;
        let oracle =
            enumerate::brute_force_sequence(class, (k + 1).min(terms)).map_err(enum_failure)?;
        for (n, (a, b)) in seq.terms.iter().zip(&oracle.terms).enumerate() {
            if a != b {
                return Err(fail(
                    INVARIANT,
                    format!("term {n}: series {a}, exhaustive count {b}"),
                ));
            }
        }
    }
    Ok(if as_json {
        seq.to_json()
    } else if oeis {
        seq.to_b_file().trim_end().to_string()
    } else {
        seq.terms
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("\n")
    })
}

fn cmd_render(input: &str, format: Format) -> Result<String, Failure> {
    let (_, d) = read_input(input, false)?;
    let text = match format {
        Format::Ascii => render_ascii(&d),
        Format::Svg => render_svg(&d),
    };
    Ok(text.trim_end().to_string())
}

/// Runs `f` on the inline input, or on every non-empty stdin line for `-`.
/// Returns the highest exit code seen.
fn each_input(input: &str, f: impl Fn(&str) -> Result<String, Failure>) -> u8 {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut worst = OK;
    let mut run = |line: &str| match f(line) {
        Ok(text) => {
            let _ = writeln!(out, "{text}");
        }
        Err(e) => {
            eprintln!("{}", e.message);
            worst = worst.max(e.code);
        }
    };
    if input == "-" {
        for line in io::stdin().lock().lines() {
            match line {
                Ok(l) if !l.trim().is_empty() => run(l.trim()),
                Ok(_) => {}
                Err(e) => {
                    eprintln!("stdin: {e}");
                    return USAGE;
                }
            }
        }
    } else {
        run(input);
    }
    worst
}

fn single(result: Result<String, Failure>) -> u8 {
    match result {
        Ok(text) => {
            println!("{text}");
            OK
        }
        Err(e) => {
            // failing check reports still go to stdout for tooling
            if e.code == INVARIANT && e.message.starts_with('{') {
                println!("{}", e.message);
            } else {
                eprintln!("{}", e.message);
            }
            e.code
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    let code = match cli.command {
        Cmd::Stats { input, enhanced } => each_input(&input, |s| cmd_stats(s, enhanced)),
        Cmd::Ptr {
            input,
            enhanced,
            coloured_semantics,
            verify,
            step4,
        } => each_input(&input, |s| {
            cmd_ptr(s, enhanced, coloured_semantics, verify, step4)
        }),
        Cmd::Check {
            class,
            enhanced,
            max_n,
            timing,
        } => single(cmd_check(class, enhanced, max_n, timing)),
        Cmd::Enum {
            class,
            enhanced,
            terms,
            oracle_check_up_to,
            brute_force,
            json,
            oeis,
        } => single(cmd_enum(
            class,
            enhanced,
            terms,
            oracle_check_up_to,
            brute_force,
            json,
            oeis,
        )),
        Cmd::Render { input, format } => each_input(&input, |s| cmd_render(s, format)),
    };
    ExitCode::from(code)
}
