//! `wormhole`: command-line front end for wormhole-core.
//!
//! Every command prints JSON on stdout (render prints SVG or text, scan prints
//! JSONL). Failures print a one-line `{"error":{...}}` object on stderr and exit
//! with 1 for bad input or 2 for a broken invariant.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};
use wormhole_core::coherent::{build_coherent_graph, consistency};
use wormhole_core::continued_fraction::{
    dual_chain, eval_chain, expand_rational, l_operation, r_operation, recognize_w_chain, singularity_from_dual,
};
use wormhole_core::oracle::{verify_at_most_two, write_scan_jsonl};
use wormhole_core::render::{render_coherent_graph, render_triangulation, Format};
use wormhole_core::triangulation::{from_extended_chain, ExtendedZeroChain};
use wormhole_core::wormhole::{
    classify_families, htu_reduce, p_resolution_report, recover_singularity, ww_decompositions, ww_index, WWSequence,
};
use wormhole_core::{Error, ExactRational, HJChain, SingularityLabel};

/// Relative `--out` paths are resolved against this directory when it is set.
const OUT_DIR_VAR: &str = "WORMHOLE_OUT_DIR";

#[derive(Parser)]
#[command(name = "wormhole", version, about = "Continued fractions, zero chains and wormhole singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hirzebruch-Jung continued fraction arithmetic
    Hj {
        #[command(subcommand)]
        op: HjOp,
    },
    /// Recognize a W-chain, or build one from a word in L and R applied to [4]
    Wchain {
        /// Chain to recognize, e.g. 2,5,3
        chain: Option<String>,
        /// Word such as LRR; letters apply left to right
        #[arg(long, conflicts_with = "chain")]
        word: Option<String>,
    },
    /// Extremal P-resolution report for 1/m(1,q)
    Pres { m: String, q: String },
    /// Wormhole decompositions of a dual sequence k1,...,ks
    Decomp { sequence: String },
    /// HTU reduction of a WW-index-1 sequence
    Reduce { sequence: String },
    /// Basic wormhole families with n weights
    Classify {
        #[arg(long)]
        weights: usize,
        /// Parameter values t or t1,t2,... applied to every family with that many parameters
        #[arg(long)]
        instantiate: Option<String>,
    },
    /// Decomposition counts for every coprime (m,q) with m <= max-m, as JSONL
    Scan {
        #[arg(long)]
        max_m: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks that no label up to max-m has more than two decompositions
    Verify {
        #[arg(long)]
        max_m: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Draws the triangulation (or its coherent graph) of an extended chain
    Render {
        /// Extended zero chain "b1,...,bs|b0"
        #[arg(long)]
        chain: String,
        #[arg(long, default_value = "svg")]
        format: String,
        /// Draw the coherent graph instead of the polygon
        #[arg(long)]
        graph: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum HjOp {
    /// Value of a chain, e.g. 2,1,2
    Eval { chain: String },
    /// Chain of a rational > 1, e.g. 31901/10000
    Expand { value: String },
    /// Dual chain via the dot diagram
    Dual { chain: String },
}

enum Output {
    Json(Value),
    Text(String),
    /// Already written to a file; print the summary.
    Written(Value),
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Usage(String),
    Io(String),
    /// Command ran but found a counterexample; the report is still printed.
    Finding(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn to_json(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("outputs serialize")
}

fn chain(s: &str) -> Result<HJChain, Error> {
    s.parse()
}

fn bigint(name: &str, s: &str) -> Result<BigInt, Error> {
    s.trim().parse().map_err(|_| Error::Parse(format!("{name} = {s:?} is not an integer")))
}

fn out_path(p: PathBuf) -> PathBuf {
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if p.is_relative() => PathBuf::from(dir).join(p),
        _ => p,
    }
}

fn create(p: &PathBuf) -> Result<fs::File, Failure> {
    if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Failure::Io(format!("{}: {e}", parent.display())))?;
    }
    fs::File::create(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))
}

fn hj(op: HjOp) -> Result<Output, Failure> {
    Ok(Output::Json(match op {
        HjOp::Eval { chain: c } => {
            let c = chain(&c)?;
            let v = eval_chain(&c).ok_or_else(|| Error::InvalidChain(format!("{c} is not admissible")))?;
            json!({ "value": v.to_string() })
        }
        HjOp::Expand { value } => {
            let v: ExactRational = value.parse()?;
            json!({ "value": v.to_string(), "chain": expand_rational(&v)? })
        }
        HjOp::Dual { chain: c } => {
            let c = chain(&c)?;
            json!({ "chain": c, "dual": dual_chain(&c)? })
        }
    }))
}

fn wchain(c: Option<String>, word: Option<String>) -> Result<Output, Failure> {
    let (c, word) = match (c, word) {
        (Some(c), None) => (chain(&c)?, None),
        (None, Some(w)) => {
            let mut c = HJChain::new(vec![4])?;
            for ch in w.chars() {
                c = match ch {
                    'L' | 'l' => l_operation(&c),
                    'R' | 'r' => r_operation(&c),
                    other => return Err(Error::Parse(format!("word letter {other:?} is not L or R")).into()),
                };
            }
            (c, Some(w.to_uppercase()))
        }
        _ => return Err(Failure::Usage("give either a chain or --word".into())),
    };
    let params = recognize_w_chain(&c);
    let mut out = json!({ "chain": c, "w_chain": params.is_some() });
    if let Some(p) = params {
        out["n"] = json!(p.n.to_string());
        out["a"] = json!(p.a.to_string());
    }
    if let Some(w) = word {
        out["word"] = json!(w);
    }
    Ok(Output::Json(out))
}

fn classify(n: usize, instantiate: Option<String>) -> Result<Output, Failure> {
    let families = classify_families(n)?;
    let inconsistent: Vec<usize> = (1..n).filter(|&m| !consistency(n, m)).collect();
    let Some(raw) = instantiate else {
        return Ok(Output::Json(json!({ "n": n, "families": families, "inconsistent_m": inconsistent })));
    };
    let params: Vec<i64> = raw
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad parameter {t:?}"))))
        .collect::<Result<_, _>>()?;
    let mut instances = Vec::new();
    for f in families.iter().filter(|f| f.family.param_count == params.len()) {
        let mut entry = json!({ "m": f.family.m, "weights": f.weights });
        match f.instantiate(&params) {
            Ok(inst) => {
                let rec = recover_singularity(&inst.p0, &inst.pm)?;
                entry["instance"] = to_json(&inst);
                entry["singularity"] = to_json(&rec);
            }
            Err(e) if e.is_finding() => return Err(e.into()),
            Err(e) => entry["error"] = json!({ "kind": e.kind(), "message": e.to_string() }),
        }
        instances.push(entry);
    }
    Ok(Output::Json(json!({ "n": n, "params": params, "families": instances, "inconsistent_m": inconsistent })))
}

fn scan(max_m: u64, jobs: usize, out: Option<PathBuf>) -> Result<Output, Failure> {
    if jobs == 0 {
        return Err(Error::OutOfRange("--jobs must be at least 1".into()).into());
    }
    match out {
        Some(p) => {
            let p = out_path(p);
            let mut w = BufWriter::new(create(&p)?);
            let records = write_scan_jsonl(max_m, jobs, &mut w)?;
            w.flush().map_err(|e| Failure::Io(e.to_string()))?;
            Ok(Output::Written(json!({ "records": records, "out": p.display().to_string() })))
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            match write_scan_jsonl(max_m, jobs, &mut w).and_then(|_| w.flush().map_err(|e| Error::Precondition(e.to_string()))) {
                Ok(()) => Ok(Output::Text(String::new())),
                // the reader went away
                Err(Error::Precondition(msg)) if msg.contains("Broken pipe") => Ok(Output::Text(String::new())),
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn verify(max_m: u64, jobs: usize) -> Result<Output, Failure> {
    let report = verify_at_most_two(max_m, jobs)?;
    let value = to_json(&report);
    if !report.violations.is_empty() || !report.library_disagreements.is_empty() {
        return Err(Failure::Finding(value));
    }
    Ok(Output::Json(value))
}

fn render(c: &str, format: &str, graph: bool, out: Option<PathBuf>) -> Result<Output, Failure> {
    let format: Format = format.parse()?;
    let c: ExtendedZeroChain = c.parse()?;
    let ft = from_extended_chain(&c)?;
    let text = if graph { render_coherent_graph(&build_coherent_graph(&ft)?, format) } else { render_triangulation(&ft, format) };
    match out {
        Some(p) => {
            let p = out_path(p);
            create(&p)?.write_all(text.as_bytes()).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            Ok(Output::Written(json!({ "chain": c.to_string(), "out": p.display().to_string() })))
        }
        None => Ok(Output::Text(text)),
    }
}

fn run(cli: Cli) -> Result<Output, Failure> {
    match cli.command {
        Command::Hj { op } => hj(op),
        Command::Wchain { chain, word } => wchain(chain, word),
        Command::Pres { m, q } => {
            let label = SingularityLabel::new(bigint("m", &m)?, bigint("q", &q)?)?;
            Ok(Output::Json(to_json(&p_resolution_report(&label))))
        }
        Command::Decomp { sequence } => {
            let seq: WWSequence = sequence.parse()?;
            let decompositions = ww_decompositions(&seq);
            let label = singularity_from_dual(&seq.to_chain())?;
            Ok(Output::Json(json!({
                "sequence": seq,
                "label": label,
                "count": decompositions.len(),
                "ww_index": ww_index(&seq),
                "decompositions": decompositions,
            })))
        }
        Command::Reduce { sequence } => {
            let seq: WWSequence = sequence.parse()?;
            Ok(Output::Json(to_json(&htu_reduce(&seq)?)))
        }
        Command::Classify { weights, instantiate } => classify(weights, instantiate),
        Command::Scan { max_m, jobs, out } => scan(max_m, jobs, out),
        Command::Verify { max_m, jobs } => verify(max_m, jobs),
        Command::Render { chain, format, graph, out } => render(&chain, &format, graph, out),
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    let mut out = io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn error_line(kind: &str, message: &str) -> String {
    json!({ "error": { "kind": kind, "message": message } }).to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            emit(&e.to_string());
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("{}", error_line("usage", first));
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(Output::Json(v)) | Ok(Output::Written(v)) => {
            emit(&format!("{v}\n"));
            ExitCode::SUCCESS
        }
        Ok(Output::Text(t)) => {
            emit(&t);
            ExitCode::SUCCESS
        }
        Err(Failure::Core(e)) => {
            eprintln!("{}", error_line(e.kind(), &e.to_string()));
            ExitCode::from(if e.is_finding() { 2 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("{}", error_line("usage", &msg));
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("{}", error_line("io", &msg));
            ExitCode::from(1)
        }
        Err(Failure::Finding(report)) => {
            emit(&format!("{report}\n"));
            eprintln!("{}", error_line("finding", "a label has more than two decompositions or the library and oracle disagree"));
            ExitCode::from(2)
        }
    }
}
