//! Command-line front end. [`run`] returns the process exit code.

use std::fmt::Write as _;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::bfmod::{bf_module, bf_module_with, bf_order, Presentation};
use crate::error::Error;
use crate::graphs::{cuntz_splice, rose, spliced_rose, DirectedGraph};
use crate::homdec::{
    brute_limit_from_env, hom_exists, hom_exists_bruteforce, HomVerdict, InfiniteVerdict,
};
use crate::order::Order;
use crate::paperverify::{
    is_prime, verify_certificate_step1, verify_certificate_step2, verify_diag_splice,
    verify_genej_ideal, verify_main1, verify_main2_cases, verify_theorems_sweep,
    VerificationReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "spliceguard",
    version,
    about = "Bowen-Franks modules and graded homomorphism obstructions"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Worker threads for sweeps; defaults to the number of CPUs.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// A grading group size: an integer ≥ 2 or `inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MArg {
    Finite(usize),
    Infinite,
}

impl FromStr for MArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("inf") {
            return Ok(MArg::Infinite);
        }
        match s.parse::<usize>() {
            Ok(m) if m >= 2 => Ok(MArg::Finite(m)),
            Ok(m) => Err(format!("m must be at least 2, got {m}")),
            Err(_) => Err(format!("expected an integer >= 2 or `inf`, got {s:?}")),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structure of the Bowen-Franks module of a graph.
    Bf {
        #[command(flatten)]
        graph: GraphSource,
        #[arg(long)]
        m: MArg,
        /// Use the block presentation over ℤ instead of the compact one.
        #[arg(long)]
        block: bool,
    },
    /// Cuntz splice at a vertex; prints the resulting graph.
    Splice {
        #[arg(long, conflicts_with = "rose")]
        graph: Option<String>,
        #[arg(long)]
        rose: Option<u64>,
        #[arg(long, default_value = "v")]
        vertex: String,
    },
    /// Whether a unit-preserving equivariant module map exists.
    Hom {
        #[command(flatten)]
        from: FromSource,
        #[command(flatten)]
        to: ToSource,
        #[arg(long)]
        m: MArg,
        #[arg(long, value_enum, default_value_t = HomMethod::Linear)]
        method: HomMethod,
    },
    /// Run verification checks; exits 1 if any fails.
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[arg(long)]
        n_max: Option<u64>,
        #[arg(long)]
        m_max: Option<usize>,
        /// `inf` answers the main1/main2/sweep checks through the m = 2 case.
        #[arg(long)]
        m: Option<MArg>,
    },
    /// Module orders of roses and spliced roses.
    Sweep {
        #[arg(long, default_value_t = 10)]
        n_max: u64,
        #[arg(long, default_value_t = 8)]
        m_max: usize,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct GraphSource {
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    rose: Option<u64>,
    #[arg(long)]
    rose_splice: Option<u64>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct FromSource {
    #[arg(long)]
    from: Option<String>,
    #[arg(long)]
    from_rose: Option<u64>,
    #[arg(long)]
    from_rose_splice: Option<u64>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct ToSource {
    #[arg(long)]
    to: Option<String>,
    #[arg(long)]
    to_rose: Option<u64>,
    #[arg(long)]
    to_rose_splice: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HomMethod {
    Linear,
    Brute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    DiagSplice,
    Certificates,
    Genej,
    Main1,
    Main2,
    Sweep,
    All,
}

enum Failure {
    BadInput(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::BadInput(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn load_graph(
    path: Option<&String>,
    rose_n: Option<u64>,
    splice_n: Option<u64>,
) -> CliResult<DirectedGraph> {
    match (path, rose_n, splice_n) {
        (Some(p), _, _) => {
            let text =
                std::fs::read_to_string(p).map_err(|e| Failure::BadInput(format!("{p}: {e}")))?;
            Ok(DirectedGraph::from_json(&text)
                .map_err(|e| Failure::BadInput(format!("{p}: {e}")))?)
        }
        (None, Some(n), _) => Ok(rose(n)?),
        (None, None, Some(n)) => Ok(spliced_rose(n)?),
        (None, None, None) => Err(Failure::BadInput("no graph given".into())),
    }
}

fn finite_m(m: MArg, what: &str) -> CliResult<usize> {
    match m {
        MArg::Finite(m) => Ok(m),
        MArg::Infinite => Err(Failure::BadInput(format!("{what} does not accept m = inf"))),
    }
}

struct Output {
    format: Format,
    buf: String,
}

impl Output {
    fn line(&mut self, s: impl AsRef<str>) {
        self.buf.push_str(s.as_ref());
        self.buf.push('\n');
    }

    fn value(&mut self, v: &Value) {
        let s = match self.format {
            Format::Json => serde_json::to_string(v),
            Format::Text => serde_json::to_string_pretty(v),
        }
        .expect("json value serializes");
        self.line(s);
    }
}

fn verdict_text(v: &HomVerdict) -> String {
    let mut s = format!(
        "exists: {} ({})",
        v.exists,
        serde_json::to_value(v.method)
            .expect("method")
            .as_str()
            .unwrap_or("")
    );
    if let Some(w) = &v.witness {
        let _ = write!(s, "\nwitness:\n{w}");
    }
    s
}

fn cmd_bf(out: &mut Output, graph: &GraphSource, m: MArg, block: bool) -> CliResult<i32> {
    let g = load_graph(graph.graph.as_ref(), graph.rose, graph.rose_splice)?;
    let m = finite_m(m, "bf")?;
    let presentation = if block {
        Presentation::Block
    } else {
        Presentation::Compact
    };
    let structure = bf_module_with(&g, m, presentation)?.structure();
    match out.format {
        Format::Json => out.line(serde_json::to_string(&structure).expect("structure serializes")),
        Format::Text => {
            let factors: Vec<String> = structure
                .invariant_factors
                .iter()
                .map(|d| d.to_string())
                .collect();
            out.line(format!("invariant factors: {}", factors.join(" ")));
            out.line(format!("order: {}", structure.order()));
            out.line(format!("tau action:\n{}", structure.action));
            let unit: Vec<String> = structure.unit.iter().map(|d| d.to_string()).collect();
            out.line(format!("unit: {}", unit.join(" ")));
        }
    }
    Ok(EXIT_OK)
}

fn cmd_splice(
    out: &mut Output,
    graph: Option<&String>,
    rose_n: Option<u64>,
    vertex: &str,
) -> CliResult<i32> {
    let g = load_graph(graph, rose_n, None)?;
    let s = cuntz_splice(&g, vertex)?;
    out.line(s.to_json());
    Ok(EXIT_OK)
}

fn cmd_hom(
    out: &mut Output,
    from: &FromSource,
    to: &ToSource,
    m: MArg,
    method: HomMethod,
) -> CliResult<i32> {
    let a = load_graph(from.from.as_ref(), from.from_rose, from.from_rose_splice)?;
    let b = load_graph(to.to.as_ref(), to.to_rose, to.to_rose_splice)?;
    let decide = |m: usize| -> CliResult<HomVerdict> {
        let (s, t) = (bf_module(&a, m)?, bf_module(&b, m)?);
        Ok(match method {
            HomMethod::Linear => hom_exists(&s, &t)?,
            HomMethod::Brute => hom_exists_bruteforce(&s, &t, brute_limit_from_env())?,
        })
    };
    match m {
        MArg::Finite(m) => {
            let v = decide(m)?;
            match out.format {
                Format::Json => out.line(serde_json::to_string(&v).expect("verdict serializes")),
                Format::Text => out.line(verdict_text(&v)),
            }
        }
        MArg::Infinite => {
            let reduced = decide(2)?;
            let verdict = if reduced.exists {
                InfiniteVerdict::Inconclusive(reduced)
            } else {
                InfiniteVerdict::NonexistenceViaC2(reduced)
            };
            let v = verdict.to_json();
            match out.format {
                Format::Json => out.value(&v),
                Format::Text => {
                    out.line(format!("m = inf: {}", v["verdict"].as_str().unwrap_or("")))
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn primes_up_to(m_max: usize) -> Vec<usize> {
    (2..=m_max).filter(|&p| is_prime(p)).collect()
}

fn grid<T: Send>(
    ns: impl Iterator<Item = u64>,
    ms: &[usize],
    f: impl Fn(u64, usize) -> crate::error::Result<T> + Sync,
) -> crate::error::Result<Vec<T>> {
    let cells: Vec<(u64, usize)> = ns.flat_map(|n| ms.iter().map(move |&m| (n, m))).collect();
    cells.par_iter().map(|&(n, m)| f(n, m)).collect()
}

fn mark_infinite(mut r: VerificationReport) -> VerificationReport {
    r.params.insert("m".into(), Value::from("inf"));
    r.params.insert("reduction".into(), Value::from("C₂"));
    r
}

fn run_check(
    check: Check,
    n_max: Option<u64>,
    m_max: Option<usize>,
    m: Option<MArg>,
) -> CliResult<Vec<VerificationReport>> {
    let infinite = m == Some(MArg::Infinite);
    let fixed_m = match m {
        Some(MArg::Finite(m)) => Some(m),
        _ => None,
    };
    let ms = |lo: usize, default_max: usize| -> Vec<usize> {
        match fixed_m {
            Some(m) => vec![m],
            None => (lo..=m_max.unwrap_or(default_max)).collect(),
        }
    };
    let reports = match check {
        Check::DiagSplice | Check::Certificates | Check::Genej if infinite => {
            return Err(Failure::BadInput(
                "m = inf applies to main1, main2 and sweep only".into(),
            ))
        }
        Check::DiagSplice => grid(1..=n_max.unwrap_or(10), &ms(2, 6), verify_diag_splice)?,
        Check::Certificates => {
            let ns: Vec<u64> = (2..=n_max.unwrap_or(100)).collect();
            let mut v = ns
                .par_iter()
                .map(|&n| verify_certificate_step1(n))
                .collect::<crate::error::Result<Vec<_>>>()?;
            v.extend(
                ns.par_iter()
                    .map(|&n| verify_certificate_step2(n))
                    .collect::<crate::error::Result<Vec<_>>>()?,
            );
            v
        }
        Check::Genej => grid(2..=n_max.unwrap_or(12), &ms(2, 13), verify_genej_ideal)?,
        Check::Main1 if infinite => grid(2..=n_max.unwrap_or(10), &[2], verify_main1)?
            .into_iter()
            .map(mark_infinite)
            .collect(),
        Check::Main1 => grid(2..=n_max.unwrap_or(10), &ms(2, 8), verify_main1)?,
        Check::Main2 => {
            let primes = if infinite {
                vec![2]
            } else {
                match fixed_m {
                    Some(m) => vec![m],
                    None => primes_up_to(m_max.unwrap_or(13)),
                }
            };
            let v = grid(2..=n_max.unwrap_or(12), &primes, verify_main2_cases)?;
            if infinite {
                v.into_iter().map(mark_infinite).collect()
            } else {
                v
            }
        }
        Check::Sweep if infinite => vec![mark_infinite(verify_theorems_sweep(
            n_max.unwrap_or(10),
            2,
        )?)],
        Check::Sweep => vec![verify_theorems_sweep(
            n_max.unwrap_or(10),
            fixed_m.or(m_max).unwrap_or(8),
        )?],
        Check::All => {
            let mut v = Vec::new();
            for c in [
                Check::DiagSplice,
                Check::Certificates,
                Check::Genej,
                Check::Main1,
                Check::Main2,
                Check::Sweep,
            ] {
                v.extend(run_check(c, None, None, None)?);
            }
            v
        }
    };
    Ok(reports)
}

fn report_text(r: &VerificationReport) -> String {
    let status = if r.passed() { "PASS" } else { "FAIL" };
    let params: Vec<String> = r
        .params
        .iter()
        .map(|(k, v)| match v {
            Value::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        })
        .collect();
    let mut s = format!("{status} {} {}", r.check, params.join(" "));
    if !r.passed() {
        let _ = write!(s, "\n  evidence: {}", r.evidence);
    }
    s
}

fn cmd_verify(
    out: &mut Output,
    check: Check,
    n_max: Option<u64>,
    m_max: Option<usize>,
    m: Option<MArg>,
) -> CliResult<i32> {
    let reports = run_check(check, n_max, m_max, m)?;
    let mut failed = 0usize;
    for r in &reports {
        failed += usize::from(!r.passed());
        match out.format {
            Format::Json => out.line(r.to_json_line()),
            Format::Text => out.line(report_text(r)),
        }
    }
    if out.format == Format::Text {
        out.line(format!("{} checks, {} failed", reports.len(), failed));
    }
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILED })
}

fn order_value(o: &Order) -> Value {
    match o {
        Order::Finite(n) => Value::Number(crate::json::number(n)),
        Order::Infinite => Value::from("infinite"),
    }
}

fn cmd_sweep(out: &mut Output, n_max: u64, m_max: usize) -> CliResult<i32> {
    if n_max < 1 || m_max < 2 {
        return Err(Failure::BadInput("need n_max >= 1 and m_max >= 2".into()));
    }
    let ns: Vec<u64> = (1..=n_max).collect();
    let ms: Vec<usize> = (2..=m_max).collect();
    let rows = ns
        .par_iter()
        .map(
            |&n| -> crate::error::Result<(u64, Vec<Order>, Vec<Order>)> {
                let r = rose(n)?;
                let s = spliced_rose(n)?;
                let ro = ms
                    .iter()
                    .map(|&m| bf_order(&r, m))
                    .collect::<crate::error::Result<Vec<_>>>()?;
                let so = ms
                    .iter()
                    .map(|&m| bf_order(&s, m))
                    .collect::<crate::error::Result<Vec<_>>>()?;
                Ok((n, ro, so))
            },
        )
        .collect::<crate::error::Result<Vec<_>>>()?;
    match out.format {
        Format::Json => {
            for (n, ro, so) in &rows {
                let v = json!({
                    "n": n,
                    "m": ms,
                    "rose": ro.iter().map(order_value).collect::<Vec<_>>(),
                    "splice": so.iter().map(order_value).collect::<Vec<_>>(),
                });
                out.line(serde_json::to_string(&v).expect("row serializes"));
            }
        }
        Format::Text => {
            let show = |o: &Order| {
                o.finite()
                    .map_or_else(|| "inf".to_string(), |n| n.to_string())
            };
            for (label, pick) in [("rose", 0usize), ("splice", 1)] {
                out.line(format!("{label} |BF_m|"));
                let header: Vec<String> = ms.iter().map(|m| format!("m={m}")).collect();
                out.line(format!("n\t{}", header.join("\t")));
                for (n, ro, so) in &rows {
                    let cells = if pick == 0 { ro } else { so };
                    let cells: Vec<String> = cells.iter().map(show).collect();
                    out.line(format!("{n}\t{}", cells.join("\t")));
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn dispatch(cli: &Cli, out: &mut Output) -> CliResult<i32> {
    match &cli.command {
        Command::Bf { graph, m, block } => cmd_bf(out, graph, *m, *block),
        Command::Splice {
            graph,
            rose,
            vertex,
        } => cmd_splice(out, graph.as_ref(), *rose, vertex),
        Command::Hom {
            from,
            to,
            m,
            method,
        } => cmd_hom(out, from, to, *m, *method),
        Command::Verify {
            check,
            n_max,
            m_max,
            m,
        } => cmd_verify(out, *check, *n_max, *m_max, *m),
        Command::Sweep { n_max, m_max } => cmd_sweep(out, *n_max, *m_max),
    }
}

/// Parses `argv` (including the program name), runs the command and writes
/// its output to stdout in one piece.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_BAD_INPUT
            } else {
                EXIT_OK
            };
        }
    };
    let mut out = Output {
        format: cli.format,
        buf: String::new(),
    };
    let result = match cli.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
        {
            Ok(pool) => pool.install(|| dispatch(&cli, &mut out)),
            Err(e) => Err(Failure::BadInput(e.to_string())),
        },
        None => dispatch(&cli, &mut out),
    };
    match result {
        Ok(code) => {
            print!("{}", out.buf);
            code
        }
        Err(Failure::BadInput(msg)) => {
            eprintln!("error: {msg}");
            EXIT_BAD_INPUT
        }
    }
}
