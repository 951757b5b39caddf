//! `pcac` command-line tool.
//!
//! Exit codes: 0 pass, 1 fail with witness, 2 unverified within budget,
//! 3 usage or input error.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use rayon::prelude::*;
use serde_json::{json, Value};

use pcac::codes::{
    bounds, bounds_weight3_real, is_pcac, is_ui, pcac_violation, PcacVerdict, SequenceSet, UiOptions, UiVerdict,
};
use pcac::constructions::{
    compare_periods, find_dds, gf_max_active, gf_ui, loglog_slope, pcac_ui, shrink_blocks, sweep, tdma_ui, Approach,
    CompareOptions, CSV_HEADER, CSV_VERSION_LINE,
};
use pcac::diffsets::{
    bose_dds, dts_to_dds, is_dds, is_dts, singer_dds, skolem_dts, DdsVerdict, DisjointDifferenceSet, DtsVerdict,
};
use pcac::formats::{
    parse_dds, parse_dts, parse_packing, parse_sequences_unchecked, read_sequence_set, sequence_set_to_json, write_dds,
    write_sequence_set, Provenance,
};
use pcac::numtheory::primes_in;
use pcac::packing::{is_packing, PackingVerdict};
use pcac::search::{df_search, max_packing_exact, table3_row, DfOutcome, DEFAULT_NODE_BUDGET};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Unverified,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Unverified => 2,
        }
    }
}

const USAGE_ERROR: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "pcac",
    version,
    about = "Construct, verify and compare protocol sequence sets"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a sequence set and verify it before writing.
    Construct(ConstructArgs),
    /// Check a file against one of the properties.
    Verify(VerifyArgs),
    /// Bounds on the maximum code size.
    Bounds(BoundsArgs),
    /// Exhaustive and backtracking searches.
    Search(SearchArgs),
    /// Minimal periods per approach.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Tdma,
    Gf,
    Singer,
    Bose,
    Skolem,
    DdsFile,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Txt,
    Json,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    method: Method,
    /// Period (skolem only; defaults to twice the scope plus one).
    #[arg(long)]
    n: Option<usize>,
    /// Weight: number of users for tdma; block size to shrink to for
    /// singer and bose.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    delta: usize,
    /// Field order (gf, singer, bose).
    #[arg(long)]
    q: Option<u64>,
    /// Polynomial degree bound (gf).
    #[arg(long, default_value_t = 2)]
    m: u32,
    /// Number of blocks (skolem).
    #[arg(long)]
    r: Option<u64>,
    /// DDS file (dds-file).
    #[arg(long)]
    dds: Option<PathBuf>,
    /// Output file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Txt)]
    format: OutputFormat,
    /// Configurations the UI check may enumerate (tdma, gf).
    #[arg(long, default_value_t = pcac::codes::DEFAULT_UI_BUDGET)]
    budget: u128,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VerifyMode {
    Pcac,
    Ui,
    Packing,
    Dds,
    Dts,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    mode: VerifyMode,
    #[arg(long = "in")]
    input: PathBuf,
    /// Shift bound overriding the file header.
    #[arg(long)]
    delta: Option<usize>,
    /// Active users for ui mode (default: the weight).
    #[arg(long)]
    active: Option<usize>,
    /// Configurations ui mode may enumerate exhaustively.
    #[arg(long, default_value_t = pcac::codes::DEFAULT_UI_BUDGET)]
    budget: u128,
    /// Random configurations to test when the budget is exceeded.
    #[arg(long)]
    samples: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DeltaConvention {
    /// Δ = √n as a real number.
    RealSqrt,
    /// Δ = ⌊√n⌋.
    Integer,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long, required_unless_present_any = ["table2", "table3"])]
    n: Option<usize>,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Shift bound; when absent Δ is derived from √n.
    #[arg(long)]
    delta: Option<usize>,
    #[arg(long, value_enum, default_value_t = DeltaConvention::RealSqrt)]
    delta_convention: DeltaConvention,
    /// CSV of weight-3 bounds for n = 200, 400, ..., 3600.
    #[arg(long, conflicts_with = "table3")]
    table2: bool,
    /// CSV of difference-family lower bounds for weights 4 to 7.
    #[arg(long)]
    table3: bool,
    /// Skip table3 columns with n above this.
    #[arg(long)]
    max_n: Option<usize>,
    /// Node budget per difference-family search (table3).
    #[arg(long, default_value_t = 2_000_000)]
    budget: u64,
    /// Output file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Task {
    MaxPacking,
    Dds,
    Df,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, value_enum)]
    task: Task,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    delta: usize,
    /// Number of blocks (dds, df; df defaults to (n-1)/(k(k-1))).
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Output file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Potential users N.
    #[arg(long, required_unless_present = "sweep")]
    users: Option<u64>,
    /// Active users K.
    #[arg(long, required_unless_present = "sweep")]
    active: Option<usize>,
    #[arg(long, required_unless_present = "sweep")]
    delta: Option<usize>,
    /// For every prime k in [k-min, k-max], compare at N = k³, Δ = k - 1.
    #[arg(long)]
    sweep: bool,
    #[arg(long, default_value_t = 31)]
    k_min: u64,
    #[arg(long, default_value_t = 97)]
    k_max: u64,
    /// Skip the constructed DDS row.
    #[arg(long)]
    no_construct: bool,
    /// Node budget per DDS search.
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    /// CSV output file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn need<T>(value: Option<T>, flag: &str, method: &str) -> Result<T> {
    value.ok_or_else(|| anyhow!("--{flag} is required for {method}"))
}

fn ui_status(verdict: &UiVerdict) -> Status {
    match verdict {
        UiVerdict::Verified => Status::Pass,
        UiVerdict::Violated(_) => Status::Fail,
        UiVerdict::Unverified { .. } | UiVerdict::SampledClean { .. } => Status::Unverified,
    }
}

fn construct(args: &ConstructArgs, seed: u64) -> Result<Status> {
    let mut params: BTreeMap<String, Value> = BTreeMap::new();
    params.insert("delta".into(), json!(args.delta));
    let dds_code = |dds: DisjointDifferenceSet, params: &mut BTreeMap<String, Value>| -> Result<SequenceSet> {
        let dds = match args.k {
            Some(k) if k != dds.block_size() => shrink_blocks(&dds, k)?,
            _ => dds,
        };
        params.insert("dds".into(), json!(dds.blocks()));
        Ok(pcac_ui(&dds, args.delta)?)
    };
    let (method, code) = match args.method {
        Method::Tdma => {
            let k = need(args.k, "k", "tdma")?;
            params.insert("k".into(), json!(k));
            ("tdma", tdma_ui(k, args.delta)?)
        }
        Method::Gf => {
            let q = need(args.q, "q", "gf")?;
            params.insert("q".into(), json!(q));
            params.insert("m".into(), json!(args.m));
            ("gf", gf_ui(q, args.m, args.delta)?)
        }
        Method::Singer => {
            let q = need(args.q, "q", "singer")?;
            params.insert("q".into(), json!(q));
            ("singer", dds_code(singer_dds(q)?, &mut params)?)
        }
        Method::Bose => {
            let q = need(args.q, "q", "bose")?;
            params.insert("q".into(), json!(q));
            ("bose", dds_code(bose_dds(q)?, &mut params)?)
        }
        Method::Skolem => {
            let r = need(args.r, "r", "skolem")?;
            let dts = skolem_dts(r)?;
            let n = args.n.unwrap_or(2 * dts.scope() as usize + 1);
            params.insert("r".into(), json!(r));
            params.insert("n".into(), json!(n));
            ("skolem", dds_code(dts_to_dds(&dts, n)?, &mut params)?)
        }
        Method::DdsFile => {
            let path = need(args.dds.as_deref(), "dds", "dds-file")?;
            let file = parse_dds(&read(path)?)?;
            (
                "dds-file",
                dds_code(DisjointDifferenceSet::new(file.n, file.blocks)?, &mut params)?,
            )
        }
    };

    // DDS translates are checked inside pcac_ui; the others need the UI check.
    let (verified_by, status) = match args.method {
        Method::Tdma | Method::Gf => {
            let active = match args.method {
                Method::Gf => gf_max_active(args.q.unwrap_or(2), args.m).min(code.len() as u64) as usize,
                _ => code.len(),
            };
            let opts = UiOptions {
                budget: args.budget,
                seed,
                ..UiOptions::default()
            };
            let report = is_ui(code.sequences(), active, args.delta, &opts)?;
            let status = ui_status(&report.verdict);
            if status == Status::Fail {
                report_failed_construction(json!({"check": "ui", "k": active, "verdict": report.verdict}));
                return Ok(Status::Fail);
            }
            (format!("ui k={active}: {:?}", report.verdict), status)
        }
        _ => match is_pcac(&code) {
            PcacVerdict::Valid => ("pcac: valid".to_string(), Status::Pass),
            v => {
                report_failed_construction(json!({"check": "pcac", "verdict": v}));
                return Ok(Status::Fail);
            }
        },
    };
    info!(
        "{method}: {} sequences of period {}, {verified_by}",
        code.len(),
        code.period()
    );
    let text = match args.format {
        OutputFormat::Txt => write_sequence_set(&code),
        OutputFormat::Json => {
            let prov = Provenance {
                method: method.into(),
                parameters: params,
                verified_by: Some(verified_by),
            };
            sequence_set_to_json(&code, Some(&prov))
        }
    };
    emit(args.out.as_deref(), &text)?;
    if status == Status::Unverified {
        eprintln!("warning: UI property not fully verified within budget");
    }
    Ok(status)
}

/// Reports a construction that failed its own verifier.
fn report_failed_construction(witness: Value) {
    println!("{}", json!({"result": "FAIL", "witness": witness}));
    eprintln!("error: constructed set failed verification; nothing written");
}

fn verdict_line(status: Status, mode: &str, detail: Value) -> Status {
    let result = match status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Unverified => "UNVERIFIED",
    };
    println!("{}", json!({"result": result, "mode": mode, "detail": detail}));
    status
}

fn pcac_line(verdict: PcacVerdict, pass_detail: Value) -> Status {
    match verdict {
        PcacVerdict::Valid => verdict_line(Status::Pass, "pcac", pass_detail),
        PcacVerdict::Violation {
            first,
            second,
            tau,
            count,
        } => verdict_line(
            Status::Fail,
            "pcac",
            json!({"pair": [first, second], "tau": tau, "count": count}),
        ),
    }
}

fn verify(args: &VerifyArgs, seed: u64) -> Result<Status> {
    let text = read(&args.input)?;
    Ok(match args.mode {
        VerifyMode::Pcac => match read_sequence_set(&text) {
            Ok(code) => {
                let code = match args.delta {
                    Some(d) => code.with_delta(d)?,
                    None => code,
                };
                pcac_line(is_pcac(&code), json!({"sequences": code.len(), "delta": code.delta()}))
            }
            Err(strict) if !text.trim_start().starts_with('{') => {
                // Unequal weights or repeats: still look for a correlation witness.
                let ([_, _, header_delta, _], seqs) = parse_sequences_unchecked(&text)?;
                let delta = args.delta.unwrap_or(header_delta);
                match pcac_violation(&seqs, delta) {
                    PcacVerdict::Valid => verdict_line(Status::Fail, "pcac", json!({"invalid": strict.to_string()})),
                    v => pcac_line(v, Value::Null),
                }
            }
            Err(e) => return Err(e.into()),
        },
        VerifyMode::Ui => {
            let code = read_sequence_set(&text)?;
            let delta = args.delta.unwrap_or(code.delta());
            let k = args.active.unwrap_or(code.weight());
            let opts = UiOptions {
                budget: args.budget,
                samples: args.samples,
                seed,
                cross_check: true,
            };
            let report = is_ui(code.sequences(), k, delta, &opts)?;
            let detail =
                json!({"k": k, "delta": delta, "evaluated": report.evaluated.to_string(), "verdict": report.verdict});
            verdict_line(ui_status(&report.verdict), "ui", detail)
        }
        VerifyMode::Packing => {
            let file = parse_packing(&text)?;
            let delta = args.delta.unwrap_or(file.delta);
            match is_packing(&file.members, file.n, delta)? {
                PackingVerdict::Valid => verdict_line(
                    Status::Pass,
                    "packing",
                    json!({"members": file.members.len(), "delta": delta}),
                ),
                PackingVerdict::Collision { first, second, edge } => {
                    let (u, v) = edge.endpoints();
                    verdict_line(
                        Status::Fail,
                        "packing",
                        json!({"pair": [first, second], "edge": [u, v]}),
                    )
                }
            }
        }
        VerifyMode::Dds => {
            let file = parse_dds(&text)?;
            match is_dds(&file.blocks, file.n)? {
                DdsVerdict::Valid => {
                    verdict_line(Status::Pass, "dds", json!({"n": file.n, "blocks": file.blocks.len()}))
                }
                DdsVerdict::Repeated { residue, first, second } => verdict_line(
                    Status::Fail,
                    "dds",
                    json!({"residue": residue, "first": [first.0, first.1], "second": [second.0, second.1]}),
                ),
            }
        }
        VerifyMode::Dts => {
            let blocks = parse_dts(&text)?;
            match is_dts(&blocks)? {
                DtsVerdict::Valid { scope } => verdict_line(Status::Pass, "dts", json!({"scope": scope})),
                DtsVerdict::NotNormalized { block } => {
                    verdict_line(Status::Fail, "dts", json!({"not_normalized": block}))
                }
                DtsVerdict::RepeatedDifference { difference } => {
                    verdict_line(Status::Fail, "dts", json!({"repeated_difference": difference}))
                }
            }
        }
    })
}

const TABLE3_COLUMNS: [(usize, [usize; 12]); 4] = [
    (4, [13, 37, 61, 73, 97, 109, 157, 181, 193, 229, 241, 277]),
    (5, [41, 61, 101, 181, 241, 281, 401, 421, 461, 521, 541, 601]),
    (6, [31, 151, 181, 211, 241, 271, 331, 421, 541, 571, 601, 631]),
    (7, [337, 379, 421, 463, 547, 631, 673, 757, 883, 967, 1009, 1051]),
];

fn shift_bound(n: usize, convention: DeltaConvention) -> f64 {
    match convention {
        DeltaConvention::RealSqrt => (n as f64).sqrt(),
        DeltaConvention::Integer => (n as u64).isqrt() as f64,
    }
}

fn bounds_cmd(args: &BoundsArgs) -> Result<Status> {
    if args.table2 {
        let mut out = String::from("# pcac-table2 v1\nn,delta,lower,upper\n");
        for n in (200..=3600).step_by(200) {
            let d = shift_bound(n, args.delta_convention);
            let b = bounds_weight3_real(n, d)?;
            out.push_str(&format!("{n},{d:.4},{},{}\n", b.lower, b.upper.unwrap_or_default()));
        }
        emit(args.out.as_deref(), &out)?;
        return Ok(Status::Pass);
    }
    if args.table3 {
        let rows: Vec<(usize, usize)> = TABLE3_COLUMNS
            .iter()
            .flat_map(|&(k, ns)| ns.into_iter().map(move |n| (n, k)))
            .filter(|&(n, _)| args.max_n.is_none_or(|m| n <= m))
            .collect();
        let results: Vec<String> = rows
            .par_iter()
            .map(|&(n, k)| {
                let r = (n - 1) / (k * (k - 1));
                let formula = r * (n as f64 / ((n as f64).sqrt() + 1.0)).floor() as usize;
                match table3_row(n, k, args.budget) {
                    Ok(row) => format!("{n},{k},{r},{},constructed", row.value),
                    Err(e) => {
                        info!("({n},{k}): {e}");
                        format!("{n},{k},{r},{formula},not-constructed")
                    }
                }
            })
            .collect();
        let mut out = String::from("# pcac-table3 v1\nn,k,r,value,status\n");
        for line in results {
            out.push_str(&line);
            out.push('\n');
        }
        emit(args.out.as_deref(), &out)?;
        return Ok(Status::Pass);
    }
    let n = args.n.expect("clap enforces --n");
    let report = match args.delta {
        Some(d) => bounds(n, args.k, d)?,
        None if args.k == 3 => bounds_weight3_real(n, shift_bound(n, args.delta_convention))?,
        None => {
            let mut r = bounds(n, args.k, (n as u64).isqrt() as usize)?;
            if args.delta_convention == DeltaConvention::RealSqrt {
                r.note = Some(format!(
                    "{}; weight {} uses the integer shift bound",
                    r.note.unwrap_or_default(),
                    args.k
                ));
            }
            r
        }
    };
    emit(
        args.out.as_deref(),
        &format!("{}\n", serde_json::to_string_pretty(&report)?),
    )?;
    Ok(Status::Pass)
}

fn search(args: &SearchArgs) -> Result<Status> {
    match args.task {
        Task::MaxPacking => {
            let r = max_packing_exact(args.n, args.k, args.delta, args.budget)?;
            info!(
                "nodes={} root_bound={} size={} complete={}",
                r.nodes, r.root_bound, r.size, r.complete
            );
            let members: Vec<&[usize]> = r.witness.members().iter().map(|m| m.elements()).collect();
            let doc = json!({
                "task": "max-packing",
                "n": args.n, "k": args.k, "delta": args.delta,
                "size": r.size,
                "complete": r.complete,
                "nodes": r.nodes,
                "root_bound": r.root_bound,
                "witness": members,
            });
            emit(
                args.out.as_deref(),
                &format!("{}\n", serde_json::to_string_pretty(&doc)?),
            )?;
            Ok(if r.complete { Status::Pass } else { Status::Unverified })
        }
        Task::Dds => {
            let r = need(args.r, "r", "dds")?;
            match find_dds(args.n, args.k, r, args.budget)? {
                Some((dds, method)) => {
                    emit(args.out.as_deref(), &format!("# method: {method}\n{}", write_dds(&dds)))?;
                    Ok(Status::Pass)
                }
                None => {
                    eprintln!("no ({},{},{})-DDS found", args.n, args.k, r);
                    Ok(Status::Unverified)
                }
            }
        }
        Task::Df => {
            let r = match args.r {
                Some(r) => r,
                None => {
                    let kk = args.k * args.k.saturating_sub(1);
                    if kk == 0 || args.n == 0 || !(args.n - 1).is_multiple_of(kk) {
                        bail!("--r is required unless k(k-1) divides n - 1");
                    }
                    (args.n - 1) / kk
                }
            };
            let result = df_search(args.n, args.k, r, args.budget)?;
            info!("nodes={}", result.nodes);
            match result.outcome {
                DfOutcome::Found(dds) => {
                    emit(args.out.as_deref(), &write_dds(&dds))?;
                    Ok(Status::Pass)
                }
                DfOutcome::Exhausted => {
                    println!(
                        "{}",
                        json!({"result": "FAIL", "exhausted": true, "nodes": result.nodes})
                    );
                    Ok(Status::Fail)
                }
                DfOutcome::BudgetExceeded => {
                    println!(
                        "{}",
                        json!({"result": "UNVERIFIED", "budget": args.budget, "nodes": result.nodes})
                    );
                    Ok(Status::Unverified)
                }
            }
        }
    }
}

fn compare(args: &CompareArgs) -> Result<Status> {
    let opts = CompareOptions {
        construct: !args.no_construct,
        search_budget: args.budget,
        ..CompareOptions::default()
    };
    let mut csv = format!("{CSV_VERSION_LINE}\n{CSV_HEADER}\n");
    if args.sweep {
        let ks = primes_in(args.k_min, args.k_max);
        if ks.len() < 2 {
            bail!("need at least two primes in [{}, {}]", args.k_min, args.k_max);
        }
        let rows = sweep(&ks, &opts)?;
        let mut pcac = Vec::new();
        let mut tdma = Vec::new();
        for (k, c) in ks.iter().zip(&rows) {
            csv.push_str(&c.csv_rows());
            if let (Some(p), Some(t)) = (c.pcac_period(), c.period(Approach::Tdma)) {
                pcac.push((*k as f64, p as f64));
                tdma.push((*k as f64, t as f64));
            }
        }
        emit(args.out.as_deref(), &csv)?;
        eprintln!(
            "log-log slope: pcac {:.3}, tdma {:.3}",
            loglog_slope(&pcac),
            loglog_slope(&tdma)
        );
        return Ok(Status::Pass);
    }
    let (n, k, d) = (
        args.users.expect("clap enforces --users"),
        args.active.expect("clap enforces --active"),
        args.delta.expect("clap enforces --delta"),
    );
    let c = compare_periods(n, k, d, &opts)?;
    csv.push_str(&c.csv_rows());
    emit(args.out.as_deref(), &csv)?;
    if let Some(w) = c.winner() {
        eprintln!(
            "shortest period: {} with n = {}",
            w.approach.name(),
            w.period.unwrap_or_default()
        );
    }
    Ok(Status::Pass)
}

fn run(cli: Cli) -> Result<Status> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    match &cli.command {
        Command::Construct(a) => construct(a, cli.seed),
        Command::Verify(a) => verify(a, cli.seed),
        Command::Bounds(a) => bounds_cmd(a),
        Command::Search(a) => search(a),
        Command::Compare(a) => compare(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(USAGE_ERROR),
            };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}
