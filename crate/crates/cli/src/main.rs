use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ncg::constructions::{
    check_coset_invariance, check_t1_rank_equality, countable_semidirect, rank_bound, semidirect, wreath, ActionTable,
    BoundKind, ConstructionError, SemidirectProduct,
};
use ncg::extension::{extension_bound_check, ExtensionError, ExtensionInstance};
use ncg::groups::{chain_orbit_tree, CayleyTable, ChainSpec, GroupError, OrbitSet, Perm, PermGroupChain, DEFAULT_CAP};
use ncg::trees::{to_dot, WfTree};
use ncg::ugroup::{self, conjugation_window, fixing_depth, window, IntMatrix, SweepConfig, UElement};
use ncg::verify::{run_suite, Suite, VerifyOptions};
use ncg::{Ordinal, Status, Truncated};

/// `println!` that stops quietly when stdout is closed.
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_TRUNCATED: u8 = 3;

#[derive(Parser)]
#[command(name = "ncg", version, about = "Orbit trees, ranks and CLI bounds for non-archimedean groups")]
struct Cli {
    /// Largest group or coset space that may be enumerated.
    #[arg(long, global = true, env = "NCG_CAP", default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SetKind {
    Coset,
    Points,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Per-node ranks and the rank of a tree.
    Rank { input: PathBuf },
    /// Orbit tree of a chain on its points or its coset space.
    OrbitTree {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "coset")]
        set: SetKind,
        #[arg(long, value_enum, default_value = "json")]
        out: OutFormat,
        /// Add the singleton classes of level 0.
        #[arg(long)]
        plus: bool,
        /// Write here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run the seeded verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        /// Record per-case wall time (reports are then no longer byte-stable).
        #[arg(long)]
        timings: bool,
        /// Truncation for the U sweeps.
        #[arg(long, default_value_t = 12)]
        k: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Symbolic rank bound of a construction.
    Bound {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
    },
    /// Build a semidirect product, wreath product or countable semidirect
    /// product and check its orbit tree ranks.
    Construct { input: PathBuf },
    /// Run the extension pipeline on an instance.
    Extension {
        input: PathBuf,
        /// Include T_B and every fibre tree in the output.
        #[arg(long)]
        full: bool,
    },
    /// Computations in the unitriangular group U.
    Ugroup {
        #[command(subcommand)]
        command: UCommand,
    },
}

#[derive(Subcommand)]
enum UCommand {
    /// Window profile and fixing depth of an element.
    Window {
        input: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Sampled sweep from a config file.
    Sweep { input: PathBuf },
    /// Least M with g L_M g⁻¹ ⊆ L_n for an integer matrix given as rows.
    ConjWindow {
        input: PathBuf,
        #[arg(long)]
        n: usize,
    },
}

/// A failure with the exit code it maps to.
struct Exit(u8, String);

impl Exit {
    fn input(msg: impl std::fmt::Display) -> Self {
        Exit(EXIT_INPUT, msg.to_string())
    }
}

impl From<GroupError> for Exit {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::CapExceeded { .. } => Exit(EXIT_TRUNCATED, e.to_string()),
            _ => Exit::input(e),
        }
    }
}

impl From<ConstructionError> for Exit {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::CapExceeded { .. } | ConstructionError::Group(GroupError::CapExceeded { .. }) => {
                Exit(EXIT_TRUNCATED, e.to_string())
            }
            _ => Exit::input(e),
        }
    }
}

impl From<ExtensionError> for Exit {
    fn from(e: ExtensionError) -> Self {
        match e {
            ExtensionError::ExceedsTruncation | ExtensionError::Group(GroupError::CapExceeded { .. }) => {
                Exit(EXIT_TRUNCATED, e.to_string())
            }
            _ => Exit::input(e),
        }
    }
}

fn read(path: &Path) -> Result<String, Exit> {
    fs::read_to_string(path).map_err(|e| Exit::input(format!("{}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Exit> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Exit::input(format!("{}: {e}", p.display()))),
        None => {
            say!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json")
}

fn cmd_rank(input: &Path) -> Result<u8, Exit> {
    let t = WfTree::from_json(&read(input)?).map_err(Exit::input)?;
    let ranks = t.ranks();
    for n in t.nodes() {
        say!("node {} level {} rank {}", n.id, n.level, ranks[&n.id]);
    }
    say!("rho(T)={}", t.rank());
    Ok(0)
}

fn cmd_orbit_tree(input: &Path, set: SetKind, out: OutFormat, plus: bool, output: Option<&Path>, cap: usize) -> Result<u8, Exit> {
    let chain = PermGroupChain::from_json(&read(input)?, cap)?;
    let set = match set {
        SetKind::Coset => OrbitSet::Cosets,
        SetKind::Points => OrbitSet::Points,
    };
    let t = chain_orbit_tree(&chain, set, plus, cap)?;
    let text = match out {
        OutFormat::Json => t.tree().to_json(),
        OutFormat::Dot => to_dot(t.tree()),
    };
    emit(&text, output)?;
    Ok(0)
}

fn cmd_verify(suite: &str, opts: &VerifyOptions, output: Option<&Path>) -> Result<u8, Exit> {
    let suite: Suite = suite.parse().map_err(Exit::input)?;
    let report = run_suite(suite, opts);
    emit(&report.to_json(), output)?;
    eprintln!(
        "{}: {} pass, {} fail, {} inconclusive, {} exceed truncation",
        report.suite,
        report.count(Status::Pass),
        report.count(Status::Fail),
        report.count(Status::Inconclusive),
        report.count(Status::ExceedsTruncation)
    );
    Ok(if report.has_failures() { EXIT_FAIL } else { 0 })
}

fn cmd_bound(kind: &str, alpha: &str, beta: &str) -> Result<u8, Exit> {
    let kind: BoundKind = kind.parse().map_err(Exit::input)?;
    let alpha: Ordinal = alpha.parse().map_err(|e| Exit::input(format!("alpha: {e}")))?;
    let beta: Ordinal = beta.parse().map_err(|e| Exit::input(format!("beta: {e}")))?;
    say!("{}", rank_bound(kind, &alpha, &beta).bound);
    Ok(0)
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, Exit> {
    v.get(key).ok_or_else(|| Exit::input(format!("missing field {key:?}")))
}

fn chain_field(v: &Value, key: &str, cap: usize) -> Result<PermGroupChain, Exit> {
    let spec: ChainSpec = serde_json::from_value(field(v, key)?.clone()).map_err(|e| Exit::input(format!("{key}: {e}")))?;
    Ok(PermGroupChain::from_spec(&spec, cap)?)
}

fn product_report(a: &SemidirectProduct, g: &PermGroupChain, h: &PermGroupChain, cap: usize) -> Result<(Value, bool), Exit> {
    let mut levels = Vec::new();
    let mut ok = true;
    for n in 0..=a.depth() {
        let cond = check_coset_invariance(g, h, a.rho(), n);
        let t1 = if cond.holds() {
            let r = check_t1_rank_equality(a, n, cap)?;
            ok &= r.holds();
            json!(r)
        } else {
            Value::Null
        };
        levels.push(json!({ "level": n, "condition": cond, "t1": t1 }));
    }
    let v = json!({
        "order": a.order(),
        "chain": a.chain().to_spec(),
        "level_orders": a.chain().levels().iter().map(|l| l.order()).collect::<Vec<_>>(),
        "levels": levels,
    });
    Ok((v, ok))
}

fn cmd_construct(input: &Path, cap: usize) -> Result<u8, Exit> {
    let v: Value = serde_json::from_str(&read(input)?).map_err(Exit::input)?;
    let op = field(&v, "op")?.as_str().ok_or_else(|| Exit::input("op must be a string"))?;
    let (out, ok) = match op {
        "semidirect" => {
            let g = chain_field(&v, "g", cap)?;
            let h = chain_field(&v, "h", cap)?;
            let rho = match v.get("rho") {
                Some(r) => serde_json::from_value(r.clone()).map_err(|e| Exit::input(format!("rho: {e}")))?,
                None => ActionTable::trivial(g.group(), h.group()),
            };
            let a = semidirect(&g, &h, &rho, cap)?;
            product_report(&a, &g, &h, cap)?
        }
        "wreath" => {
            let g = chain_field(&v, "g", cap)?;
            let h = chain_field(&v, "h", cap)?;
            let a = wreath(&g, &h, cap)?;
            let (gc, hc) = (a.g_chain().clone(), a.h_chain().clone());
            product_report(&a, &gc, &hc, cap)?
        }
        "countable_semidirect" => {
            let gamma: CayleyTable =
                serde_json::from_value(field(&v, "gamma")?.clone()).map_err(|e| Exit::input(format!("gamma: {e}")))?;
            gamma.validate()?;
            let gens: Vec<Perm> = match v.get("generators") {
                Some(g) => serde_json::from_value(g.clone()).map_err(|e| Exit::input(format!("generators: {e}")))?,
                None => gamma.automorphisms(),
            };
            let c = countable_semidirect(&gamma, &gens, cap)?;
            let ok = c.report.holds();
            (json!({ "chain": c.chain.to_spec(), "report": c.report }), ok)
        }
        other => return Err(Exit::input(format!("unknown op {other:?}"))),
    };
    say!("{}", pretty(&out));
    Ok(if ok { 0 } else { EXIT_FAIL })
}

fn cmd_extension(input: &Path, full: bool, cap: usize) -> Result<u8, Exit> {
    let inst = ExtensionInstance::from_json(&read(input)?, cap)?;
    let mut r = extension_bound_check(&inst)?;
    if !full {
        r.tb = None;
        r.phi.clear();
    }
    say!("{}", pretty(&json!(r)));
    Ok(if !r.holds() {
        EXIT_FAIL
    } else if r.truncated {
        EXIT_TRUNCATED
    } else {
        0
    })
}

fn cmd_ugroup(cmd: &UCommand) -> Result<u8, Exit> {
    match cmd {
        UCommand::Window { input, n } => {
            let x = UElement::from_json(&read(input)?).map_err(Exit::input)?;
            if *n == 0 || *n > x.k {
                return Err(Exit::input(format!("n must lie in 1..={}", x.k)));
            }
            let w = window(&x, *n);
            let (depth, witness) = fixing_depth(&x, *n);
            let out = json!({
                "window": w,
                "fixing_depth": depth,
                "moving_witness": witness.map(|g| g.to_string()),
                "node_rank": w.n3.saturating_sub(w.n2 + 1),
            });
            say!("{}", pretty(&out));
            Ok(0)
        }
        UCommand::Sweep { input } => {
            let cfg: SweepConfig = serde_json::from_str(&read(input)?).map_err(Exit::input)?;
            if cfg.n == 0 || cfg.n > cfg.k {
                return Err(Exit::input(format!("n must lie in 1..={}", cfg.k)));
            }
            let r = ugroup::run_sweep(&cfg);
            let fails: Vec<_> = r.cases.iter().filter(|c| c.status == Status::Fail).collect();
            let out = json!({
                "config": cfg,
                "pass": r.count(Status::Pass),
                "fail": fails.len(),
                "inconclusive": r.count(Status::Inconclusive),
                "failures": fails,
            });
            say!("{}", pretty(&out));
            Ok(if fails.is_empty() { 0 } else { EXIT_FAIL })
        }
        UCommand::ConjWindow { input, n } => {
            let g: IntMatrix = serde_json::from_str(&read(input)?).map_err(Exit::input)?;
            match conjugation_window(&g, *n).map_err(Exit::input)? {
                Truncated::Closed(m) => {
                    say!("{m}");
                    Ok(0)
                }
                Truncated::ExceedsTruncation => {
                    say!("exceeds truncation");
                    Ok(EXIT_TRUNCATED)
                }
            }
        }
    }
}

fn run(cli: Cli) -> Result<u8, Exit> {
    let cap = cli.cap;
    match cli.command {
        Command::Rank { input } => cmd_rank(&input),
        Command::OrbitTree {
            input,
            set,
            out,
            plus,
            output,
        } => cmd_orbit_tree(&input, set, out, plus, output.as_deref(), cap),
        Command::Verify {
            suite,
            seed,
            cases,
            timings,
            k,
            output,
        } => {
            let opts = VerifyOptions {
                seed,
                cases,
                timings,
                cap,
                k,
            };
            cmd_verify(&suite, &opts, output.as_deref())
        }
        Command::Bound { kind, alpha, beta } => cmd_bound(&kind, &alpha, &beta),
        Command::Construct { input } => cmd_construct(&input, cap),
        Command::Extension { input, full } => cmd_extension(&input, full, cap),
        Command::Ugroup { command } => cmd_ugroup(&command),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
