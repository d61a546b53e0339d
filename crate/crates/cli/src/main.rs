//! `lieverify`: batch front-end for the engine, verifier, representation
//! model and schedule auditor.

use clap::{Args, Parser, Subcommand, ValueEnum};
use lieverify_core::constructions::constructions_json;
use lieverify_core::model_rep::{run_scenario, Scenario};
use lieverify_core::tame_kam::{
    audit_schedule, constant_chain, ledger_replay, simulate_iteration, smoothing_grid, ConstantChain, LedgerProof,
    SimConfig,
};
use lieverify_core::verifier::{full_report, ReportOptions, FAMILIES};
use lieverify_core::{LieAlgebra, LieType, Q};
use num_bigint::BigInt;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::process::ExitCode;
use std::str::FromStr;

const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "lieverify",
    version,
    about = "Exact Lie-algebra constructions, verification reports and KAM schedule audits"
)]
struct Cli {
    /// key=value file merged under explicit flags.
    #[arg(long, global = true)]
    config: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List roots and named constructions of an algebra.
    Atlas {
        type_tag: String,
        rank: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the verification suite and emit a report.
    Verify {
        type_tag: String,
        rank: usize,
        /// Comma-separated check families.
        #[arg(long)]
        checks: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated permutation of 1..=9 for the chain slots.
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Representation-model scenarios.
    Model {
        #[command(subcommand)]
        cmd: ModelCmd,
    },
    /// Constant chain, loss ledger and iteration schedule.
    Kam {
        #[command(subcommand)]
        cmd: KamCmd,
    },
}

#[derive(Subcommand, Debug)]
enum ModelCmd {
    Run {
        file: String,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct ChainArgs {
    #[arg(long = "dim-g")]
    dim_g: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    lambda1: Option<String>,
    /// Use this ϱ directly instead of evaluating the chain.
    #[arg(long)]
    varrho: Option<String>,
}

#[derive(Subcommand, Debug)]
enum KamCmd {
    /// Print the constant chain.
    Chain {
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Replay derivative losses of a splitting proof.
    Ledger {
        #[command(flatten)]
        chain: ChainArgs,
        /// splitting_reducible | splitting_simple | almost_cocycle | jordan_block_cocycle
        #[arg(long)]
        proof: String,
        /// `l` for the Jordan-block proof.
        #[arg(long)]
        l: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Exact audit of the iteration schedule.
    Audit {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long)]
        l0: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Log-space simulation of the worst-case recurrences.
    Simulate {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long)]
        l0: Option<String>,
        #[arg(long)]
        eps0: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long = "const")]
        c_assumed: Option<f64>,
        /// Also write the trajectory as CSV.
        #[arg(long)]
        csv: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sweep the torus smoothing bounds over the (s, s', t) grid.
    Smoothing {
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

/// A failed run: message plus exit code.
struct Fail(u8, String);

fn usage(msg: impl Into<String>) -> Fail {
    Fail(EXIT_USAGE, msg.into())
}

type Config = BTreeMap<String, String>;

fn read_config(path: &str) -> Result<Config, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read config {path}: {e}")))?;
    let mut map = Config::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| usage(format!("{path}:{}: expected key=value", n + 1)))?;
        map.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(map)
}

/// Flag value, falling back to the config file.
fn pick<T: FromStr>(flag: Option<T>, cfg: &Config, key: &str) -> Result<Option<T>, Fail> {
    if flag.is_some() {
        return Ok(flag);
    }
    match cfg.get(key) {
        None => Ok(None),
        Some(v) => v.parse().map(Some).map_err(|_| usage(format!("bad config value for {key}: {v}"))),
    }
}

fn parse_q(s: &str, what: &str) -> Result<Q, Fail> {
    Q::from_str(s.trim()).map_err(|_| usage(format!("{what}: expected an integer or p/q, got {s:?}")))
}

fn parse_int(s: &str, what: &str) -> Result<BigInt, Fail> {
    BigInt::from_str(s.trim()).map_err(|_| usage(format!("{what}: expected an integer, got {s:?}")))
}

fn parse_alg(type_tag: &str, rank: usize) -> Result<LieType, Fail> {
    LieType::parse(&type_tag.to_uppercase()).ok_or_else(|| usage(format!("unknown Lie type {type_tag:?}"))).and_then(
        |t| {
            let (lo, hi) = t.rank_range();
            if rank < lo || rank > hi {
                Err(usage(format!("{}{rank}: rank must lie in {lo}..={hi}", t.letter())))
            } else {
                Ok(t)
            }
        },
    )
}

fn emit(out: &OutputArgs, cfg: &Config, json_val: &Value, text: impl FnOnce() -> String) -> Result<(), Fail> {
    let format = pick(out.format.map(|f| format!("{f:?}").to_lowercase()), cfg, "format")?;
    let body = match format.as_deref() {
        None | Some("json") => {
            let mut s = serde_json::to_string_pretty(json_val).expect("serializable");
            s.push('\n');
            s
        }
        Some("text") => text(),
        Some(other) => return Err(usage(format!("unknown format {other:?}"))),
    };
    match pick(out.output.clone(), cfg, "output")? {
        Some(path) => std::fs::write(&path, body).map_err(|e| Fail(1, format!("cannot write {path}: {e}"))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn cmd_atlas(type_tag: &str, rank: usize, out: &OutputArgs, cfg: &Config) -> Result<u8, Fail> {
    let t = parse_alg(type_tag, rank)?;
    let alg = LieAlgebra::new(t, rank).map_err(|e| usage(e.to_string()))?;
    let rs = &alg.root_system;
    let names = |it: &mut dyn Iterator<Item = usize>| it.map(|i| rs.root(i).to_string()).collect::<Vec<_>>();
    let positive = names(&mut (0..rs.len()).filter(|&i| rs.is_positive(i)));
    let all = names(&mut (0..rs.len()));
    let simple: Vec<String> = rs.simple_roots.iter().map(|r| r.to_string()).collect();
    let cons = constructions_json(&alg);
    let val = json!({
        "type": t.letter().to_string(),
        "rank": rank,
        "dim": alg.dim(),
        "simple_roots": simple,
        "positive_roots": positive,
        "roots": all,
        "constructions": cons,
    });
    emit(out, cfg, &val, || {
        let mut s = format!("{}{} dim {} roots {}\n", t.letter(), rank, alg.dim(), all.len());
        s += &format!("simple roots: {}\n", simple.join(", "));
        s += &format!("positive roots ({}): {}\n", positive.len(), positive.join(", "));
        if let Some(obj) = cons.as_object() {
            for (k, v) in obj {
                s += &format!("{k}: {v}\n");
            }
        }
        s
    })?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    type_tag: &str,
    rank: usize,
    checks: Option<String>,
    seed: Option<u64>,
    order: Option<String>,
    timings: bool,
    out: &OutputArgs,
    cfg: &Config,
) -> Result<u8, Fail> {
    let t = parse_alg(type_tag, rank)?;
    let mut opts = ReportOptions { seed: pick(seed, cfg, "seed")?.unwrap_or(0), ..Default::default() };
    opts.timings = timings || pick(None::<bool>, cfg, "timings")?.unwrap_or(false);
    if let Some(c) = pick(checks, cfg, "checks")? {
        let list: Vec<String> = c.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect();
        if let Some(bad) = list.iter().find(|x| !FAMILIES.contains(&x.as_str())) {
            return Err(usage(format!("unknown check family {bad:?}; known: {}", FAMILIES.join(","))));
        }
        opts.checks = Some(list);
    }
    if let Some(o) = pick(order, cfg, "order")? {
        opts.order = o
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| usage(format!("bad --order entry {x:?}"))))
            .collect::<Result<_, _>>()?;
    }
    let report = full_report(t, rank, &opts).map_err(|e| usage(e.to_string()))?;
    let val: Value = serde_json::from_str(&report.to_json()).expect("report JSON");
    emit(out, cfg, &val, || report.to_text())?;
    Ok(report.exit_code() as u8)
}

fn cmd_model(file: &str, out: &OutputArgs, cfg: &Config) -> Result<u8, Fail> {
    let text = std::fs::read_to_string(file).map_err(|e| usage(format!("cannot read {file}: {e}")))?;
    let sc: Scenario = serde_json::from_str(&text).map_err(|e| usage(format!("bad scenario {file}: {e}")))?;
    let val = run_scenario(&sc).map_err(|e| usage(e.to_string()))?;
    let pass = val["pass"].as_bool().unwrap_or(false);
    emit(out, cfg, &val, || {
        let mut s = String::new();
        if let Some(obj) = val.as_object() {
            for (k, v) in obj {
                let p = v.get("pass").and_then(Value::as_bool);
                match p {
                    Some(b) => s += &format!("{:<22} {}\n", k, if b { "pass" } else { "FAIL" }),
                    None if k != "pass" => s += &format!("{k:<22} {v}\n"),
                    None => {}
                }
            }
        }
        s += &format!("overall {}\n", if pass { "pass" } else { "FAIL" });
        s
    })?;
    Ok(if pass { 0 } else { 1 })
}

fn chain_from(a: &ChainArgs, cfg: &Config) -> Result<ConstantChain, Fail> {
    if let Some(v) = pick(a.varrho.clone(), cfg, "varrho")? {
        return Ok(ConstantChain::from_varrho(parse_q(&v, "--varrho")?));
    }
    let dim_g = pick(a.dim_g.clone(), cfg, "dim_g")?.ok_or_else(|| usage("need --dim-g or --varrho"))?;
    let get = |f: &Option<String>, k: &str| -> Result<Q, Fail> {
        Ok(match pick(f.clone(), cfg, k)? {
            Some(v) => parse_q(&v, k)?,
            None => Q::from_integer(0.into()),
        })
    };
    constant_chain(
        parse_q(&dim_g, "--dim-g")?,
        get(&a.beta, "beta")?,
        get(&a.lambda, "lambda")?,
        get(&a.lambda1, "lambda1")?,
    )
    .map_err(|e| usage(e.to_string()))
}

fn l0_from(l0: &Option<String>, cfg: &Config) -> Result<BigInt, Fail> {
    let v = pick(l0.clone(), cfg, "l0")?.ok_or_else(|| usage("need --l0"))?;
    parse_int(&v, "--l0")
}

fn cmd_kam(cmd: &KamCmd, cfg: &Config) -> Result<u8, Fail> {
    match cmd {
        KamCmd::Chain { chain, out } => {
            let c = chain_from(chain, cfg)?;
            let val = c.to_json();
            emit(out, cfg, &val, || {
                val.as_object().unwrap().iter().map(|(k, v)| format!("{k:<8} {}\n", v.as_str().unwrap_or(""))).collect()
            })?;
            Ok(0)
        }
        KamCmd::Ledger { chain, proof, l, out } => {
            let c = chain_from(chain, cfg)?;
            let p = match proof.as_str() {
                "splitting_reducible" => LedgerProof::SplittingReducible,
                "splitting_simple" => LedgerProof::SplittingSimple,
                "almost_cocycle" => LedgerProof::AlmostCocycle,
                "jordan_block_cocycle" => {
                    LedgerProof::JordanBlockCocycle { l: parse_q(l.as_deref().unwrap_or("0"), "--l")? }
                }
                other => return Err(usage(format!("unknown proof {other:?}"))),
            };
            let r = ledger_replay(&p, &c);
            let val = serde_json::to_value(&r).expect("ledger JSON");
            emit(out, cfg, &val, || {
                let mut s = String::new();
                for st in &r.steps {
                    s += &format!(
                        "{:<40} {:<16} +{:<8} = {:<10} claimed {:<10} {}\n",
                        st.step,
                        st.track,
                        st.op_loss,
                        st.cumulative,
                        st.claimed,
                        if st.matches { "ok" } else { "MISMATCH" }
                    );
                }
                s += &format!("final {} budget {} slack {}\n", r.final_loss, r.budget, r.slack);
                for n in &r.notes {
                    s += &format!("note: {n}\n");
                }
                s += if r.pass { "pass\n" } else { "FAIL\n" };
                s
            })?;
            Ok(if r.pass { 0 } else { 1 })
        }
        KamCmd::Audit { chain, l0, out } => {
            let c = chain_from(chain, cfg)?;
            let l0 = l0_from(l0, cfg)?;
            let r = audit_schedule(&c, &l0).map_err(|e| usage(e.to_string()))?;
            let val = serde_json::to_value(&r).expect("audit JSON");
            emit(out, cfg, &val, || {
                let mut s = format!("varrho {} l0 {} a {} b {}\n", r.varrho, r.l0, r.a, r.b);
                for i in &r.inequalities {
                    s += &format!("{:<32} margin {:<28} {}\n", i.name, i.margin, if i.holds { "pass" } else { "FAIL" });
                }
                s += &format!(
                    "stated threshold l0 > {}; repaired threshold l0 > {}; admissible {}\n",
                    r.stated_threshold, r.repaired_threshold, r.admissible
                );
                s += if r.pass { "pass\n" } else { "FAIL\n" };
                s
            })?;
            Ok(if r.pass { 0 } else { 1 })
        }
        KamCmd::Simulate { chain, l0, eps0, steps, c_assumed, csv, out } => {
            let c = chain_from(chain, cfg)?;
            let l0 = l0_from(l0, cfg)?;
            let sim = SimConfig {
                eps0: pick(*eps0, cfg, "eps0")?.unwrap_or(1e-4),
                c_assumed: pick(*c_assumed, cfg, "const")?.unwrap_or(1.0),
                n_steps: pick(*steps, cfg, "steps")?.unwrap_or(50),
                c_bar: pick(None, cfg, "c_bar")?.unwrap_or(0.5),
            };
            let tr = simulate_iteration(&c, &l0, &sim).map_err(|e| usage(e.to_string()))?;
            if let Some(path) = pick(csv.clone(), cfg, "csv")? {
                let mut s = String::from("n,ln_eps,ln_t,ln_c0,ln_cl,c0_ok,cl_ok\n");
                for st in &tr.states {
                    s += &format!(
                        "{},{},{},{},{},{},{}\n",
                        st.n, st.ln_eps, st.ln_t, st.ln_c0, st.ln_cl, st.c0_ok, st.cl_ok
                    );
                }
                std::fs::write(&path, s).map_err(|e| Fail(1, format!("cannot write {path}: {e}")))?;
            }
            let val = serde_json::to_value(&tr).expect("trajectory JSON");
            emit(out, cfg, &val, || {
                let mut s =
                    format!("varrho {} l0 {} a {:.6e} b {:.6e} C {}\n", tr.varrho, tr.l0, tr.a, tr.b, tr.c_assumed);
                for st in &tr.states {
                    s += &format!(
                        "n {:>3} ln_eps {:>14.6e} ln_c0 {:>14.6e} ln_cl {:>14.6e} {}\n",
                        st.n,
                        st.ln_eps,
                        st.ln_c0,
                        st.ln_cl,
                        if st.c0_ok && st.cl_ok { "ok" } else { "VIOLATION" }
                    );
                }
                s
            })?;
            Ok(if tr.first_violation.is_none() { 0 } else { 1 })
        }
        KamCmd::Smoothing { seed, out } => {
            let seed = pick(*seed, cfg, "seed")?.unwrap_or(0);
            let g = smoothing_grid(4, &[2.0, 4.0, 8.0, 16.0], 24, 3, seed).map_err(|e| usage(e.to_string()))?;
            let val = serde_json::to_value(&g).expect("grid JSON");
            emit(out, cfg, &val, || {
                format!(
                    "cases {} max constant {:.6} allowed {} {}\n",
                    g.cases.len(),
                    g.max_constant,
                    g.allowed,
                    if g.pass { "pass" } else { "FAIL" }
                )
            })?;
            Ok(if g.pass { 0 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Result<u8, Fail> {
    let cfg = match &cli.config {
        Some(p) => read_config(p)?,
        None => Config::new(),
    };
    match cli.command {
        Command::Atlas { type_tag, rank, out } => cmd_atlas(&type_tag, rank, &out, &cfg),
        Command::Verify { type_tag, rank, checks, seed, order, timings, out } => {
            cmd_verify(&type_tag, rank, checks, seed, order, timings, &out, &cfg)
        }
        Command::Model { cmd: ModelCmd::Run { file, out } } => cmd_model(&file, &out, &cfg),
        Command::Kam { cmd } => cmd_kam(&cmd, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("lieverify: {msg}");
            ExitCode::from(code)
        }
    }
}
