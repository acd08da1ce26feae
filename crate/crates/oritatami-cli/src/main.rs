//! Command-line interface for the oritatami toolkit: simulation,
//! determinism checks, rule design, the 3-SAT reduction, tag-system runs,
//! construction geometry, and the counter harness.
//!
//! Exit codes: 0 success/feasible, 1 infeasible/FAIL, 2 usage, 3 resource
//! limit.

use clap::{Args, Parser, Subcommand};
use oritatami::blocks::{block_automaton_run, BlocksError};
use oritatami::counter::{
    decode_row, encode_seed, verify_counter, BitOrder, CounterError, RowBlock, RowSource,
};
use oritatami::dynamics::{run, DynamicsError, RunConfig, RunStatus};
use oritatami::format::{
    instance_file_with_names, parse_instance, parse_rule, parse_system, serialize_instance,
    serialize_rule, BeadNames,
};
use oritatami::render::{render_conformation, RenderStyle};
use oritatami::ruledesign::{
    design_rule_bruteforce, design_rule_fpt, DesignError, DesignOutcome, SolveConfig,
};
use oritatami::satreduce::{decode_assignment, parse_dimacs, reduce_3sat, Lit, ReductionLayout};
use oritatami::scts::{parse_word, scts_run, word_string, Scts, SctsError};
use oritatami::turing::{bead_budget, turing_geometry};
use std::fs;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "oritatami", version, about = "co-transcriptional folding toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fold a system file and report the outcome.
    Simulate(SimulateArgs),
    /// Check a system for deterministic folding within a horizon.
    CheckDeterminism(CheckArgs),
    /// Solve a rule-design instance file.
    DesignRule(DesignArgs),
    /// Generate rule-design instances from other problems.
    Reduce(ReduceArgs),
    /// Decode a satisfying assignment from a designed rule.
    DecodeAssignment(DecodeArgs),
    /// Skipping cyclic tag system tools.
    Scts(SctsArgs),
    /// Tag-system construction geometry.
    Turing(TuringArgs),
    /// Binary counter encoding and verification.
    Counter(CounterArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// System file.
    system: String,
    /// Step budget.
    #[arg(long)]
    steps: Option<usize>,
    /// Write an SVG of the folded conformation.
    #[arg(long)]
    render: Option<String>,
    /// Print the frontier sizes per step.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct CheckArgs {
    /// System file.
    system: String,
    /// Number of steps to check.
    #[arg(long)]
    horizon: usize,
}

#[derive(Args)]
struct DesignArgs {
    /// Instance file.
    instance: String,
    /// Use the exhaustive brute-force oracle instead of the layered solver.
    #[arg(long)]
    oracle: bool,
    /// Write the designed rule to a file.
    #[arg(long)]
    emit: Option<String>,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(subcommand)]
    kind: ReduceKind,
}

#[derive(Subcommand)]
enum ReduceKind {
    /// Reduce a 3-CNF formula in DIMACS format.
    #[command(name = "3sat")]
    ThreeSat {
        /// DIMACS CNF file.
        cnf: String,
        /// Delay time of the generated instance (1 or 2).
        #[arg(long)]
        delay: usize,
        /// Output instance file.
        #[arg(long)]
        out: String,
    },
}

#[derive(Args)]
struct DecodeArgs {
    /// Rule file produced by design-rule on a reduced instance.
    rule: String,
    /// The DIMACS CNF the instance was reduced from.
    cnf: String,
}

#[derive(Args)]
struct SctsArgs {
    #[command(subcommand)]
    kind: SctsKind,
}

#[derive(Subcommand)]
enum SctsKind {
    /// Run the tag system and print the pair trace.
    Run {
        /// Comma-separated productions; `e` is the empty word.
        #[arg(long)]
        productions: String,
        /// Initial word.
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 100_000)]
        max_steps: usize,
    },
    /// Run the production-block automaton and print events and the grid.
    Blocks {
        #[arg(long)]
        productions: String,
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 100_000)]
        max_swipes: usize,
    },
}

#[derive(Args)]
struct TuringArgs {
    #[command(subcommand)]
    kind: TuringKind,
}

#[derive(Subcommand)]
enum TuringKind {
    /// Compute block dimensions, module lengths, congruences, and budgets.
    Geometry {
        /// Production count (multiple of 4).
        #[arg(long)]
        n: u64,
        /// Maximum production length.
        #[arg(long = "L")]
        max_len: u64,
    },
}

#[derive(Args)]
struct CounterArgs {
    #[command(subcommand)]
    kind: CounterKind,
}

#[derive(Subcommand)]
enum CounterKind {
    /// Encode a value as a counter row descriptor.
    Encode {
        #[arg(long)]
        value: u64,
        #[arg(long)]
        bits: usize,
    },
    /// Verify a rows file against the counting contract.
    Verify {
        /// Rows file: lines of `index: S 1 . 0 . 1`.
        rows: String,
        #[arg(long)]
        start: u64,
        #[arg(long)]
        bits: usize,
        /// Least-significant bit adjacent to the start signal.
        #[arg(long)]
        lsb: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::CheckDeterminism(args) => check_determinism(args),
        Command::DesignRule(args) => design_rule(args),
        Command::Reduce(args) => reduce(args),
        Command::DecodeAssignment(args) => decode(args),
        Command::Scts(args) => scts(args),
        Command::Turing(args) => turing(args),
        Command::Counter(args) => counter(args),
    };
    ExitCode::from(code)
}

fn usage_error(message: impl std::fmt::Display) -> u8 {
    eprintln!("error: {message}");
    EXIT_USAGE
}

fn read_file(path: &str) -> Result<String, u8> {
    fs::read_to_string(path).map_err(|e| usage_error(format_args!("cannot read {path}: {e}")))
}

fn frontier_cap() -> Result<usize, u8> {
    match std::env::var("ORITATAMI_MAX_FRONTIER") {
        Ok(v) => v
            .parse()
            .map_err(|_| usage_error(format_args!("bad ORITATAMI_MAX_FRONTIER value {v:?}"))),
        Err(_) => Ok(1_000_000),
    }
}

fn simulate(args: SimulateArgs) -> u8 {
    let text = match read_file(&args.system) {
        Ok(t) => t,
        Err(c) => return c,
    };
    let file = match parse_system(&text) {
        Ok(f) => f,
        Err(e) => return usage_error(e),
    };
    let max_frontier = match frontier_cap() {
        Ok(v) => v,
        Err(c) => return c,
    };
    let config = RunConfig {
        max_steps: args.steps.unwrap_or(usize::MAX),
        max_frontier,
    };
    let outcome = match run(&file.system, &file.seed, file.dynamics, &config) {
        Ok(o) => o,
        Err(DynamicsError::FrontierLimit { time, size, cap }) => {
            eprintln!("frontier limit: {size} members at time {time} (cap {cap})");
            return EXIT_RESOURCE;
        }
    };
    if args.trace {
        for f in &outcome.trace {
            println!("t={} frontier={}", f.time, f.len());
        }
    }
    match outcome.status {
        RunStatus::Completed => println!("completed: all {} beads placed", file.system.primary.len()),
        RunStatus::Trapped(t) => println!("trapped at time {t}"),
        RunStatus::NondeterministicAt(i) => println!("nondeterministic at bead {i}"),
        RunStatus::StepLimit => println!("step limit reached"),
    }
    let frontier = outcome.final_frontier();
    if let Some(c) = frontier.members().first() {
        println!(
            "final: {} beads, energy {}, {} bonds, {} conformation(s)",
            c.len(),
            c.energy(&file.system.rule),
            c.bonds(&file.system.rule).len(),
            frontier.len()
        );
        if let Some(path) = args.render {
            let svg = render_conformation(c, &file.system.rule, RenderStyle::Svg);
            if let Err(e) = fs::write(&path, svg) {
                return usage_error(format_args!("cannot write {path}: {e}"));
            }
            println!("wrote {path}");
        }
    } else {
        println!("final frontier is empty");
    }
    EXIT_OK
}

fn check_determinism(args: CheckArgs) -> u8 {
    let text = match read_file(&args.system) {
        Ok(t) => t,
        Err(c) => return c,
    };
    let file = match parse_system(&text) {
        Ok(f) => f,
        Err(e) => return usage_error(e),
    };
    let max_frontier = match frontier_cap() {
        Ok(v) => v,
        Err(c) => return c,
    };
    let config = RunConfig {
        max_steps: args.horizon,
        max_frontier,
    };
    match run(&file.system, &file.seed, file.dynamics, &config) {
        Ok(outcome) => match outcome.status {
            RunStatus::NondeterministicAt(i) => {
                println!("nondeterministic at bead {i}");
                EXIT_FAIL
            }
            _ => {
                println!("deterministic through horizon {}", args.horizon);
                EXIT_OK
            }
        },
        Err(DynamicsError::FrontierLimit { time, size, cap }) => {
            eprintln!("frontier limit: {size} members at time {time} (cap {cap})");
            EXIT_RESOURCE
        }
    }
}

fn design_rule(args: DesignArgs) -> u8 {
    let text = match read_file(&args.instance) {
        Ok(t) => t,
        Err(c) => return c,
    };
    let file = match parse_instance(&text) {
        Ok(f) => f,
        Err(e) => return usage_error(e),
    };
    let outcome = if args.oracle {
        design_rule_bruteforce(&file.instance)
    } else {
        design_rule_fpt(&file.instance, &SolveConfig::default())
    };
    match outcome {
        Ok(DesignOutcome::Feasible(rule)) => {
            let serialized = serialize_rule(&rule, &file.names);
            print!("FEASIBLE\n{serialized}");
            if let Some(path) = args.emit {
                if let Err(e) = fs::write(&path, serialized) {
                    return usage_error(format_args!("cannot write {path}: {e}"));
                }
            }
            EXIT_OK
        }
        Ok(DesignOutcome::Infeasible) => {
            println!("INFEASIBLE");
            EXIT_FAIL
        }
        Err(e @ DesignError::ResourceLimit { .. }) => {
            eprintln!("{e}");
            EXIT_RESOURCE
        }
        Err(e @ DesignError::OracleTooLarge { .. }) => usage_error(e),
    }
}

/// Canonical names of the reduction layout, indexed by bead id. Index 0 is
/// a sentinel: layout ids start at 1.
fn reduction_names(num_vars: usize, delay: usize) -> Vec<String> {
    let layout = ReductionLayout::new(num_vars, delay);
    let mut names = vec![String::from("_"); layout.universe().len() + 1];
    let set = |names: &mut Vec<String>, b: oritatami::BeadType, s: String| {
        names[b.0 as usize] = s;
    };
    for v in 0..num_vars {
        set(&mut names, layout.literal(Lit::pos(v)), format!("x{v}"));
        set(&mut names, layout.literal(Lit::neg(v)), format!("nx{v}"));
    }
    set(&mut names, layout.wall(), "w".into());
    set(&mut names, layout.pull(), "r".into());
    set(&mut names, layout.head(), "h".into());
    set(&mut names, layout.anchor(), "anchor".into());
    for i in 1..=layout.primary_len() {
        set(&mut names, layout.primary_bead(i), format!("p{i}"));
    }
    names
}

fn reduce(args: ReduceArgs) -> u8 {
    match args.kind {
        ReduceKind::ThreeSat { cnf, delay, out } => {
            if !(1..=2).contains(&delay) {
                return usage_error("the reduction supports --delay 1 or 2");
            }
            let text = match read_file(&cnf) {
                Ok(t) => t,
                Err(c) => return c,
            };
            let formula = match parse_dimacs(&text) {
                Ok(f) => f,
                Err(e) => return usage_error(e),
            };
            let instance = reduce_3sat(&formula, delay);
            let names = reduction_names(formula.num_vars, delay);
            let file = instance_file_with_names(&instance, |b| names[b.0 as usize].clone());
            if let Err(e) = fs::write(&out, serialize_instance(&file)) {
                return usage_error(format_args!("cannot write {out}: {e}"));
            }
            println!(
                "wrote {out}: {} scenarios over {} bead types",
                file.instance.scenarios.len(),
                file.instance.beads.len()
            );
            EXIT_OK
        }
    }
}

fn decode(args: DecodeArgs) -> u8 {
    let cnf_text = match read_file(&args.cnf) {
        Ok(t) => t,
        Err(c) => return c,
    };
    let formula = match parse_dimacs(&cnf_text) {
        Ok(f) => f,
        Err(e) => return usage_error(e),
    };
    let rule_text = match read_file(&args.rule) {
        Ok(t) => t,
        Err(c) => return c,
    };
    // delay 2 names cover the delay 1 names; positions align with layout
    // ids thanks to the sentinel at index 0
    let names = BeadNames::new(reduction_names(formula.num_vars, 2));
    let rule = match parse_rule(&rule_text, &names) {
        Ok(r) => r,
        Err(e) => return usage_error(e),
    };
    let assignment = decode_assignment(&rule, &formula);
    for (v, value) in assignment.iter().enumerate() {
        println!("x{v} = {value}");
    }
    if formula.satisfies(&assignment) {
        println!("assignment satisfies the formula");
        EXIT_OK
    } else {
        println!("assignment does NOT satisfy the formula");
        EXIT_FAIL
    }
}

fn scts(args: SctsArgs) -> u8 {
    match args.kind {
        SctsKind::Run {
            productions,
            input,
            max_steps,
        } => {
            let sys = match Scts::parse(&productions) {
                Ok(s) => s,
                Err(e) => return usage_error(e),
            };
            let w0 = match parse_word(&input) {
                Ok(w) => w,
                Err(e) => return usage_error(e),
            };
            match scts_run(&sys, &w0, max_steps) {
                Ok(trace) => {
                    for (w, p) in &trace.pairs {
                        println!("<{}, {}>", word_string(w), word_string(p));
                    }
                    println!(
                        "halts after {} steps with pointer {}",
                        trace.words.len() - 1,
                        trace.halt.expect("finished runs halt")
                    );
                    EXIT_OK
                }
                Err(e @ SctsError::StepLimit(_)) => {
                    eprintln!("{e}");
                    EXIT_RESOURCE
                }
                Err(e) => usage_error(e),
            }
        }
        SctsKind::Blocks {
            productions,
            input,
            max_swipes,
        } => {
            let sys = match Scts::parse(&productions) {
                Ok(s) => s,
                Err(e) => return usage_error(e),
            };
            let w0 = match parse_word(&input) {
                Ok(w) => w,
                Err(e) => return usage_error(e),
            };
            match block_automaton_run(&sys, &w0, max_swipes) {
                Ok(run) => {
                    for e in &run.events {
                        println!(
                            "{:?} production={} letters={}",
                            e.kind,
                            e.production,
                            word_string(&e.letters)
                        );
                    }
                    for (row, (symbols, step)) in
                        run.grid.iter().zip(&run.boundary_steps).enumerate()
                    {
                        let line: String = symbols.iter().map(|s| s.to_char()).collect();
                        println!("row {row} (step {step}): {line}");
                    }
                    if let Some(q) = run.halted {
                        println!("halts with pointer {q}");
                    }
                    EXIT_OK
                }
                Err(e @ BlocksError::SwipeLimit(_)) => {
                    eprintln!("{e}");
                    EXIT_RESOURCE
                }
                Err(e) => usage_error(e),
            }
        }
    }
}

fn turing(args: TuringArgs) -> u8 {
    match args.kind {
        TuringKind::Geometry { n, max_len } => {
            let g = match turing_geometry(n, max_len) {
                Ok(g) => g,
                Err(e) => return usage_error(e),
            };
            println!("width w = {}", g.width);
            println!("height h = {}", g.height);
            println!("module A length = {}", g.a_len);
            println!("module B length = {}", g.b_len);
            println!("module C length = {}", g.c_len);
            println!("module D length = {}", g.d_len);
            for (k, len) in g.e_lens.iter().enumerate() {
                println!("module E(k={k}) length = {len}");
            }
            println!("module F length = {}", g.f_len);
            println!("module G length = {}", g.g_len);
            for c in g.congruences() {
                println!(
                    "{}: {} mod {} = {} ({})",
                    c.name,
                    c.value,
                    c.modulus,
                    c.value % c.modulus,
                    if c.holds() { "ok" } else { "VIOLATED" }
                );
            }
            for m in bead_budget(&g) {
                let parts: Vec<String> = m
                    .parts
                    .iter()
                    .map(|(label, count)| format!("{label} {count}"))
                    .collect();
                println!("module {} bead budget: {} ({})", m.module, m.total, parts.join(", "));
            }
            EXIT_OK
        }
    }
}

fn block_to_str(b: &RowBlock) -> &'static str {
    match b {
        RowBlock::Start => "S",
        RowBlock::Bit(false) => "0",
        RowBlock::Bit(true) => "1",
        RowBlock::Silent => ".",
    }
}

fn parse_rows_file(text: &str) -> Result<Vec<(usize, Vec<RowBlock>)>, String> {
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (index, body) = line
            .split_once(':')
            .ok_or(format!("line {}: expected `index: blocks`", idx + 1))?;
        let index: usize = index
            .trim()
            .parse()
            .map_err(|_| format!("line {}: bad row index", idx + 1))?;
        let mut blocks = Vec::new();
        for tok in body.split_whitespace() {
            blocks.push(match tok {
                "S" => RowBlock::Start,
                "0" => RowBlock::Bit(false),
                "1" => RowBlock::Bit(true),
                "." => RowBlock::Silent,
                other => return Err(format!("line {}: unknown block {other:?}", idx + 1)),
            });
        }
        rows.push((index, blocks));
    }
    Ok(rows)
}

fn counter(args: CounterArgs) -> u8 {
    match args.kind {
        CounterKind::Encode { value, bits } => match encode_seed(value, bits) {
            Ok(row) => {
                let text: Vec<&str> = row.iter().map(block_to_str).collect();
                println!("{}", text.join(" "));
                let check = decode_row(&row, BitOrder::MsbFirst).expect("encoded rows decode");
                debug_assert_eq!(check, value);
                EXIT_OK
            }
            Err(e) => usage_error(e),
        },
        CounterKind::Verify {
            rows,
            start,
            bits,
            lsb,
        } => {
            let text = match read_file(&rows) {
                Ok(t) => t,
                Err(c) => return c,
            };
            let parsed = match parse_rows_file(&text) {
                Ok(r) => r,
                Err(e) => return usage_error(e),
            };
            let order = if lsb { BitOrder::LsbFirst } else { BitOrder::MsbFirst };
            let source: &dyn RowSource = &parsed;
            match verify_counter(source, start, bits, order) {
                Ok(report) => {
                    println!("PASS: {} rows verified", report.checked);
                    EXIT_OK
                }
                Err(e @ (CounterError::BadWidth(_) | CounterError::RangeError { .. })) => {
                    usage_error(e)
                }
                Err(e) => {
                    println!("FAIL: {e}");
                    EXIT_FAIL
                }
            }
        }
    }
}
