//! `mm` — analyze finite Markov sources with vector-valued output functions.
//!
//! Chains are read as JSON chain files (`-` for stdin) and analyzed exactly
//! over rationals, or in binary64 with `--float` for inputs that have no
//! rational representation. Reports are JSON on stdout; `--human` renders the
//! analyze report as text.
//!
//! Exit codes: 0 success, 1 semantic failure (failed validation verdicts,
//! enumeration caps, engine disagreement), 2 usage or parse errors.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use markov_moments::builders::{
    block_chain, block_chain_with_source, independence_curve_10_11, product, wnaf_transducer,
    BlockKind,
};
use markov_moments::report::{
    analysis_json, finite_moments_json, mc_report_json, moment_report_json, validation_json,
};
use markov_moments::{
    analyze, exact_dp_moments, final_component, forest_sum, functional_digraphs, laplacian,
    laplacian_minor, moments_combinatorial, moments_determinant, monte_carlo, parse_chain,
    serialize_chain, simple_cycles, Cycle, Error, MarkovChain, Rational, Scalar, DEFAULT_ENUM_CAP,
};

#[derive(Parser)]
#[command(
    name = "mm",
    version,
    about = "Exact output statistics of finite Markov sources"
)]
struct Cli {
    /// Evaluate in binary64 instead of exact rationals (verdicts become
    /// tolerance-based).
    #[arg(long, global = true)]
    float: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ChainArg {
    /// Chain file, or `-` for stdin.
    path: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Check the structural assumptions: stochastic rows, reachability,
    /// a unique terminal component, aperiodicity. Exit 0 only if all hold.
    Validate(ChainArg),
    /// Full analysis: moment constants by both engines, regularity of Sigma,
    /// independence verdicts, variance-zero constants.
    Analyze {
        #[command(flatten)]
        chain: ChainArg,
        /// Render a text report instead of JSON.
        #[arg(long)]
        human: bool,
    },
    /// Enumerate the simple cycles of the final component.
    Cycles {
        #[command(flatten)]
        chain: ChainArg,
        /// Stop after this many cycles and set `truncated`.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Enumerate the spanning functional digraphs of the final component.
    Digraphs {
        #[command(flatten)]
        chain: ChainArg,
        /// Number of weakly connected components (1 or 2).
        #[arg(long, default_value_t = 1)]
        parts: usize,
    },
    /// Compute moment constants or finite-n moments by the chosen engine.
    Moments {
        #[command(flatten)]
        chain: ChainArg,
        /// digraph | determinant | dp | mc
        #[arg(long)]
        method: String,
        /// Path length for dp and mc.
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Sample count for mc.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// RNG seed for mc; fixed seed means bit-identical output.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate both sides of the All-Minors Matrix-Tree identity on the
    /// final component for root set A and marker set B (state names).
    Matrixtree {
        #[command(flatten)]
        chain: ChainArg,
        #[arg(long = "A", value_delimiter = ',', num_args = 0..)]
        a: Vec<String>,
        #[arg(long = "B", value_delimiter = ',', num_args = 0..)]
        b: Vec<String>,
    },
    /// Emit a chain file for one of the built-in example families.
    Example {
        #[command(subcommand)]
        family: ExampleCommand,
    },
}

#[derive(Subcommand)]
enum ExampleCommand {
    /// Product of the w-NAF Hamming-weight transducers for two widths.
    Wnaf {
        #[arg(long)]
        w1: u32,
        #[arg(long)]
        w2: u32,
        /// Probability of input letter 0.
        #[arg(long, default_value = "1/2")]
        p0: String,
    },
    /// Two-state block-counting chain.
    Blocks {
        /// 10-11 or 00-11
        #[arg(long)]
        kind: BlockKind,
        #[arg(long)]
        p00: String,
        #[arg(long)]
        p11: String,
        /// Prepend the explicit initial state of the 00/11 figure.
        #[arg(long)]
        with_source: bool,
        /// Place p00 on the 10/11 independence curve (float mode, overrides --p00).
        #[arg(long)]
        on_curve: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// 1 for semantic failures, 2 for parse and usage errors.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Syntax { .. }
        | Error::Number(_)
        | Error::NonpositiveProbability { .. }
        | Error::RowSumNotOne { .. }
        | Error::UnknownState(_)
        | Error::OutputDimension { .. }
        | Error::OutputIndex { .. }
        | Error::VertexIndex { .. }
        | Error::BadTransducer { .. }
        | Error::WidthTooSmall(_)
        | Error::ProbabilityRange(_) => 2,
        _ => 1,
    }
}

fn enum_cap() -> u64 {
    match std::env::var("MM_ENUM_CAP") {
        Ok(value) => value.parse().unwrap_or_else(|_| {
            eprintln!("warning: ignoring unparsable MM_ENUM_CAP=`{value}`");
            DEFAULT_ENUM_CAP
        }),
        Err(_) => DEFAULT_ENUM_CAP,
    }
}

fn read_chain_text(path: &PathBuf) -> Result<String, Error> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::Syntax {
                line: 0,
                column: 0,
                message: format!("cannot read stdin: {e}"),
            })?;
        return Ok(text);
    }
    std::fs::read_to_string(path).map_err(|e| Error::Syntax {
        line: 0,
        column: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

/// Writes a line to stdout, exiting quietly when the reader closed the pipe.
fn print_line(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    if writeln!(out, "{text}").is_err() {
        std::process::exit(0);
    }
}

fn emit(value: &Value) {
    print_line(&serde_json::to_string_pretty(value).expect("json"));
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    if cli.float {
        dispatch::<f64>(cli.command)
    } else {
        dispatch::<Rational>(cli.command)
    }
}

fn dispatch<S: Scalar>(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Validate(arg) => {
            let chain: MarkovChain<S> = parse_chain(&read_chain_text(&arg.path)?)?;
            let report = chain.validate();
            emit(&validation_json(&report));
            Ok(if report.is_valid() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Analyze { chain, human } => {
            let chain: MarkovChain<S> = parse_chain(&read_chain_text(&chain.path)?)?;
            let analysis = analyze(&chain, enum_cap())?;
            if human {
                print_line(render_human(&analysis).trim_end());
            } else {
                emit(&analysis_json(&analysis));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Cycles { chain, limit } => {
            let chain: MarkovChain<S> = parse_chain(&read_chain_text(&chain.path)?)?;
            let comp = final_component(&chain)?;
            let list = simple_cycles(&comp, limit);
            emit(&json!({
                "component": comp.names(),
                "count": list.cycles.len(),
                "truncated": list.truncated,
                "cycles": list.cycles.iter().map(|c| cycle_json(c, &comp)).collect::<Vec<_>>(),
            }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Digraphs { chain, parts } => {
            let chain: MarkovChain<S> = parse_chain(&read_chain_text(&chain.path)?)?;
            let comp = final_component(&chain)?;
            let digraphs = functional_digraphs(&comp, parts, enum_cap())?;
            emit(&json!({
                "component": comp.names(),
                "parts": parts,
                "count": digraphs.len(),
                "digraphs": digraphs
                    .iter()
                    .map(|d| json!({
                        "weight": d.weight.render(),
                        "edges": d.choice,
                        "cycles": d.cycles.iter().map(|c| cycle_json(c, &comp)).collect::<Vec<_>>(),
                    }))
                    .collect::<Vec<_>>(),
            }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Moments {
            chain,
            method,
            n,
            samples,
            seed,
        } => {
            let chain: MarkovChain<S> = parse_chain(&read_chain_text(&chain.path)?)?;
            let value = match method.as_str() {
                "digraph" => {
                    let comp = final_component(&chain)?;
                    let report = moments_combinatorial(&comp, enum_cap()).map_err(|e| match e {
                        Error::EnumerationCap { candidates, cap } => Error::InvalidChain(format!(
                            "digraph enumeration needs {candidates} candidates (cap {cap}); \
                             use --method determinant or raise MM_ENUM_CAP"
                        )),
                        other => other,
                    })?;
                    moment_report_json(&report, chain.outputs())
                }
                "determinant" => {
                    let comp = final_component(&chain)?;
                    moment_report_json(&moments_determinant(&comp)?, chain.outputs())
                }
                "dp" => {
                    let now = exact_dp_moments(&chain, n);
                    let mut value = finite_moments_json(&now, "dp");
                    if n > 0 {
                        let prev = exact_dp_moments(&chain, n - 1);
                        let slope = |a: &[S], b: &[S]| -> Vec<String> {
                            a.iter()
                                .zip(b)
                                .map(|(x, y)| (x.clone() - y.clone()).render())
                                .collect()
                        };
                        value["mean_slope"] = json!(slope(&now.mean, &prev.mean));
                        value["variance_slope"] = json!(slope(&now.variance, &prev.variance));
                        value["covariance_slope"] = json!(now
                            .covariance
                            .iter()
                            .zip(&prev.covariance)
                            .map(|(a, b)| slope(a, b))
                            .collect::<Vec<_>>());
                    }
                    value
                }
                "mc" => {
                    let report = monte_carlo(&chain, n, samples, seed)?;
                    let mut value = mc_report_json(&report);
                    let per_step = |v: f64| v / n.max(1) as f64;
                    value["mean_per_step"] =
                        json!(report.mean.iter().map(|&x| per_step(x)).collect::<Vec<_>>());
                    value["covariance_per_step"] = json!(report
                        .covariance
                        .iter()
                        .map(|row| row.iter().map(|&x| per_step(x)).collect::<Vec<_>>())
                        .collect::<Vec<_>>());
                    value
                }
                other => {
                    return Err(Error::InvalidChain(format!(
                        "unknown method `{other}`; use digraph, determinant, dp, or mc"
                    )))
                }
            };
            emit(&value);
            Ok(ExitCode::SUCCESS)
        }
        Command::Matrixtree { chain, a, b } => {
            let chain: MarkovChain<S> = parse_chain(&read_chain_text(&chain.path)?)?;
            let comp = final_component(&chain)?;
            let resolve = |names: &[String]| -> Result<Vec<usize>, Error> {
                names
                    .iter()
                    .map(|name| {
                        comp.names()
                            .iter()
                            .position(|s| s == name)
                            .ok_or_else(|| Error::UnknownState(name.clone()))
                    })
                    .collect()
            };
            let roots = resolve(&a)?;
            let markers = resolve(&b)?;
            let l = laplacian(&comp);
            let minor = laplacian_minor(&l, &roots, &markers);
            let forests = forest_sum(&comp, &roots, &markers, enum_cap())?;
            emit(&json!({
                "component_order": comp.names(),
                "A": a,
                "B": b,
                "laplacian_minor": minor.render(),
                "forest_sum": forests.render(),
                "equal": minor == forests,
            }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Example { family } => {
            let chain: MarkovChain<S> = build_example(family)?;
            print_line(&serialize_chain(&chain));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn build_example<S: Scalar>(family: ExampleCommand) -> Result<MarkovChain<S>, Error> {
    match family {
        ExampleCommand::Wnaf { w1, w2, p0 } => {
            let p0 = S::parse(&p0)?;
            let p1 = S::one() - p0.clone();
            let a = wnaf_transducer(w1)?;
            let b = wnaf_transducer(w2)?;
            product(&a, &b, &[p0, p1])
        }
        ExampleCommand::Blocks {
            kind,
            p00,
            p11,
            with_source,
            on_curve,
        } => {
            let p11 = S::parse(&p11)?;
            let p00 = if on_curve {
                S::parse(&independence_curve_10_11(p11.to_f64())?.to_string())?
            } else {
                S::parse(&p00)?
            };
            if with_source {
                block_chain_with_source(kind, p00, p11)
            } else {
                block_chain(kind, p00, p11)
            }
        }
    }
}

fn cycle_json<S: Scalar>(cycle: &Cycle<S>, comp: &markov_moments::Component<S>) -> Value {
    json!({
        "vertices": cycle.vertices.iter().map(|&v| comp.names()[v].clone()).collect::<Vec<_>>(),
        "length": cycle.len(),
        "value": cycle.value.iter().map(Scalar::render).collect::<Vec<_>>(),
        "weight": cycle.weight(comp).render(),
    })
}

fn render_human<S: Scalar>(analysis: &markov_moments::Analysis<S>) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let m = analysis.moments.dim();
    let _ = writeln!(
        out,
        "final component: {{{}}}, period {}",
        analysis.component_states.join(", "),
        analysis.period
    );
    for i in 0..m {
        let _ = writeln!(
            out,
            "E[{}] ~ {} n + O(1), V[{}] ~ {} n + O(1)",
            analysis.output_names[i],
            analysis.moments.e[i].render(),
            analysis.output_names[i],
            analysis.moments.sigma[i][i].render()
        );
    }
    for i in 0..m {
        for j in i + 1..m {
            let _ = writeln!(
                out,
                "Cov[{}, {}] ~ {} n + O(1) -> asymptotically {}",
                analysis.output_names[i],
                analysis.output_names[j],
                analysis.moments.sigma[i][j].render(),
                if analysis.moments.pairwise_independent[i][j] {
                    "independent"
                } else {
                    "dependent"
                }
            );
        }
    }
    let _ = writeln!(
        out,
        "Sigma regular: {} ({})",
        analysis.moments.sigma_regular,
        if analysis.moments.sigma_regular {
            "joint CLT holds"
        } else {
            "no joint CLT"
        }
    );
    if let Some(cert) = analysis.certificate.coefficients() {
        let rendered: Vec<String> = cert.iter().map(Scalar::render).collect();
        let _ = writeln!(out, "dependence certificate: ({})", rendered.join(", "));
    }
    for (i, vz) in analysis.variance_zero.iter().enumerate() {
        if let Some(a) = vz {
            let _ = writeln!(
                out,
                "{} is quasi-deterministic with constant {}",
                analysis.output_names[i],
                a.render()
            );
        }
    }
    out
}
