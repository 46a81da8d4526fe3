//! The `boxball` command line: simulate, invariants, verify, render.

use std::fmt::Write as _;

use anyhow::{bail, Result};
use boxball::corpus::CorpusSpec;
use boxball::matching::{match_stack, stack_permutation};
use boxball::poset::{poset_of_seq, Point};
use boxball::rsk::p_symbol;
use boxball::state::{evolve_tts, BoxBallState};
use boxball::verify::{corrupted_r_step, orbit_invariants, run_suite, run_suite_on, InvariantReport, SuiteConfig, SuiteReport};
use boxball::walkpath::{group_partition, to_walk, GroupPartition, Walk};
use boxball::{matching::ParenSeq, Tableau};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "boxball", version, about = "Box-ball system simulator and conservation-law verifier")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve a state and print one row per time step.
    Simulate(RunArgs),
    /// Report shape, depth histogram and energies along an orbit.
    Invariants(RunArgs),
    /// Run the full cross-check suite; exits 1 on any failure.
    Verify(RunArgs),
    /// Draw the parenthesis sequence, depths and lattice walk of a state.
    Render(RunArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Options shared by every subcommand.
#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    /// State as `bits` or `bits@offset`, e.g. `10011011@2`.
    #[arg(long, conflicts_with_all = ["seed", "count"])]
    pub state: Option<BoxBallState>,
    /// Seed of the random corpus.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of random states.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, default_value_t = 40)]
    pub max_window: usize,
    #[arg(long, default_value_t = 12)]
    pub max_balls: usize,
    /// Time steps (default 20 for verify, 10 otherwise).
    #[arg(long)]
    pub steps: Option<usize>,
    /// Largest carrier capacity reported (default: number of balls).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub lmax: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Swap in a broken carrier rule to check that verify notices.
    #[arg(long, hide = true)]
    pub corrupt_r_step: bool,
}

/// Where the states come from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StateSource {
    Explicit(BoxBallState),
    Random(CorpusSpec),
}

/// Validated run configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub source: StateSource,
    pub steps: usize,
    pub lmax: Option<usize>,
    pub json: bool,
    pub corrupt_r_step: bool,
}

impl RunConfig {
    pub fn from_args(args: &RunArgs, default_steps: usize) -> Self {
        let source = match &args.state {
            Some(p) => StateSource::Explicit(p.clone()),
            None => {
                let d = CorpusSpec::default();
                StateSource::Random(CorpusSpec {
                    seed: args.seed.unwrap_or(d.seed),
                    count: args.count.unwrap_or(d.count),
                    max_window: args.max_window,
                    max_balls: args.max_balls,
                })
            }
        };
        Self {
            source,
            steps: args.steps.unwrap_or(default_steps),
            lmax: args.lmax.map(|l| l as usize),
            json: args.format == Format::Json,
            corrupt_r_step: args.corrupt_r_step,
        }
    }

    pub fn states(&self) -> Vec<BoxBallState> {
        match &self.source {
            StateSource::Explicit(p) => vec![p.clone()],
            StateSource::Random(spec) => spec.states(),
        }
    }

    fn lmax_for(&self, p: &BoxBallState) -> usize {
        self.lmax.unwrap_or(p.ball_count().max(1))
    }
}

/// Text or JSON written to stdout, and the process exit code.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Simulate(a) => cmd_simulate(&RunConfig::from_args(a, 10)),
        Command::Invariants(a) => cmd_invariants(&RunConfig::from_args(a, 10)),
        Command::Verify(a) => cmd_verify(&RunConfig::from_args(a, 20)),
        Command::Render(a) => cmd_render(&RunConfig::from_args(a, 0)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationRow {
    pub t: usize,
    pub state: BoxBallState,
    pub offset: i64,
}

pub fn simulate(p: &BoxBallState, steps: usize) -> Vec<SimulationRow> {
    let mut rows = Vec::with_capacity(steps + 1);
    let mut q = p.clone();
    for t in 0..=steps {
        rows.push(SimulationRow { t, offset: q.offset(), state: q.clone() });
        q = evolve_tts(&q);
    }
    rows
}

/// Rows aligned on absolute positions, with two empty cells of margin.
pub fn render_rows(rows: &[SimulationRow]) -> String {
    let occupied: Vec<&SimulationRow> = rows.iter().filter(|r| !r.state.is_empty()).collect();
    let lo = occupied.iter().map(|r| r.state.offset()).min().unwrap_or(0) - 2;
    let hi = occupied.iter().map(|r| r.state.end()).max().unwrap_or(0) + 2;
    let width = rows.last().map(|r| r.t.to_string().len()).unwrap_or(1);
    let mut out = format!("{:>w$}   x = {lo}..{}\n", "", hi - 1, w = width + 2);
    for r in rows {
        let cells: Vec<String> = r.state.render_range(lo, hi).chars().map(String::from).collect();
        let _ = writeln!(out, "t={:<width$} : {}", r.t, cells.join(" "));
    }
    out
}

pub fn cmd_simulate(cfg: &RunConfig) -> Result<Output> {
    let runs: Vec<Vec<SimulationRow>> = cfg.states().iter().map(|p| simulate(p, cfg.steps)).collect();
    let text = if cfg.json {
        match &cfg.source {
            StateSource::Explicit(_) => serde_json::to_string_pretty(&runs[0])?,
            StateSource::Random(_) => serde_json::to_string_pretty(&runs)?,
        }
    } else {
        runs.iter().map(|rows| render_rows(rows)).collect::<Vec<_>>().join("\n")
    };
    Ok(Output { text, code: EXIT_OK })
}

fn render_invariants(report: &InvariantReport) -> String {
    let mut out = String::new();
    for r in &report.records {
        let energies: Vec<String> = r.energy.values.values().map(|e| e.to_string()).collect();
        let _ = writeln!(
            out,
            "t={:<3} {:<24} w = {:<20} lambda = {:<12} depths = {:?}  E = ({})  E_inf = {}",
            r.step,
            r.state.to_string(),
            r.stack_permutation.to_string(),
            r.shape.to_string(),
            r.depth_histogram,
            energies.join(","),
            r.energy.infinity,
        );
    }
    for v in &report.verdicts {
        let status = if v.passed { "PASS" } else { "FAIL" };
        match &v.counterexample {
            None => {
                let _ = writeln!(out, "{status}  {}  {}", v.name, v.detail);
            }
            Some(c) => {
                let _ = writeln!(out, "{status}  {}  state {} step {} l {:?}: {}", v.name, c.state, c.step, c.l, c.detail);
            }
        }
    }
    out
}

pub fn cmd_invariants(cfg: &RunConfig) -> Result<Output> {
    let reports: Vec<InvariantReport> =
        cfg.states().iter().map(|p| orbit_invariants(p, cfg.steps, cfg.lmax_for(p))).collect();
    let code = if reports.iter().all(InvariantReport::passed) { EXIT_OK } else { EXIT_FAILURE };
    let text = if cfg.json {
        match &cfg.source {
            StateSource::Explicit(_) => serde_json::to_string_pretty(&reports[0])?,
            StateSource::Random(_) => serde_json::to_string_pretty(&reports)?,
        }
    } else {
        reports.iter().map(render_invariants).collect::<Vec<_>>().join("\n")
    };
    Ok(Output { text, code })
}

pub fn render_suite(report: &SuiteReport) -> String {
    let mut out = String::new();
    for v in &report.verdicts {
        let status = if v.passed { "PASS" } else { "FAIL" };
        let _ = write!(out, "{status}  {:<42} {:>5} checked", v.check.name(), v.checked);
        if let Some(c) = &v.counterexample {
            let l = c.l.map(|l| format!(" l={l}")).unwrap_or_default();
            let _ = write!(out, "  counterexample: state={} step={}{l}: {}", c.state, c.step, c.detail);
        }
        out.push('\n');
    }
    let failed = report.verdicts.iter().filter(|v| !v.passed).count();
    let _ = writeln!(
        out,
        "{} states, {} steps each: {}",
        report.states,
        report.steps,
        if failed == 0 { "all checks passed".to_string() } else { format!("{failed} checks FAILED") }
    );
    out
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Output> {
    let mut suite = SuiteConfig { steps: cfg.steps, ..SuiteConfig::default() };
    if cfg.corrupt_r_step {
        suite.rule = corrupted_r_step;
    }
    let report = match &cfg.source {
        StateSource::Random(spec) => run_suite(spec, &suite),
        StateSource::Explicit(p) => {
            let spec = CorpusSpec { count: 1, ..CorpusSpec::default() };
            run_suite_on(&spec, std::slice::from_ref(p), &[], &suite)
        }
    };
    let code = if report.passed() { EXIT_OK } else { EXIT_FAILURE };
    let text = if cfg.json { serde_json::to_string_pretty(&report)? } else { render_suite(&report) };
    Ok(Output { text, code })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetExport {
    pub points: Vec<Point>,
    pub covers: Vec<(Point, Point)>,
}

/// Everything `render` shows, in machine-readable form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rendering {
    pub state: BoxBallState,
    pub parens: ParenSeq,
    pub walk: Walk,
    pub groups: GroupPartition,
    pub stack_permutation: Vec<usize>,
    pub poset: PosetExport,
    pub p_symbol: Tableau,
}

pub fn rendering(p: &BoxBallState) -> Result<Rendering> {
    let seq = match_stack(p);
    let walk = to_walk(&seq);
    let groups = group_partition(&walk)?;
    let perm = stack_permutation(&seq);
    let poset = poset_of_seq(&seq);
    Ok(Rendering {
        state: p.clone(),
        poset: PosetExport { points: poset.points().to_vec(), covers: poset.covers() },
        p_symbol: p_symbol(&perm.word),
        stack_permutation: perm.word,
        parens: seq,
        walk,
        groups,
    })
}

pub fn render_text(r: &Rendering) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "state   {}", r.state);
    let _ = writeln!(out, "parens  {}", r.parens.render());
    let _ = writeln!(out, "depths  {}", r.parens.render_depths());
    let _ = writeln!(out, "w       {}", r.stack_permutation.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
    let _ = writeln!(out, "walk    {} (first up step at x = {})", r.walk, r.walk.anchor_x);
    let groups: Vec<String> = r.groups.groups.iter().map(|g| format!("[{}..{})", g.start, g.end)).collect();
    let _ = writeln!(out, "groups  {}", groups.join(" "));
    let _ = writeln!(out, "P-symbol");
    for line in r.p_symbol.to_string().lines() {
        let _ = writeln!(out, "  {line}");
    }
    out.push('\n');
    out.push_str(&r.walk.render());
    out.push('\n');
    out
}

pub fn cmd_render(cfg: &RunConfig) -> Result<Output> {
    let states = cfg.states();
    if states.is_empty() {
        bail!("no states to render");
    }
    let renderings = states.iter().map(rendering).collect::<Result<Vec<_>>>()?;
    let text = if cfg.json {
        match &cfg.source {
            StateSource::Explicit(_) => serde_json::to_string_pretty(&renderings[0])?,
            StateSource::Random(_) => serde_json::to_string_pretty(&renderings)?,
        }
    } else {
        renderings.iter().map(render_text).collect::<Vec<_>>().join("\n")
    };
    Ok(Output { text, code: EXIT_OK })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("boxball").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn example_simulation_rows() {
        let out = run(&cli(&["simulate", "--state", "0010011011", "--steps", "1"])).unwrap();
        let lines: Vec<&str> = out.text.lines().collect();
        assert_eq!(lines[1], "t=0 : 0 0 1 0 0 1 1 0 1 1 0 0 0 0 0");
        assert_eq!(lines[2], "t=1 : 0 0 0 1 0 0 0 1 0 0 1 1 1 0 0");
    }

    #[test]
    fn state_and_seed_conflict() {
        let err = Cli::try_parse_from(["boxball", "verify", "--state", "101", "--seed", "3"]).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_USAGE);
        let err = Cli::try_parse_from(["boxball", "invariants", "--lmax", "0"]).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_USAGE);
        let err = Cli::try_parse_from(["boxball", "render", "--state", "10x"]).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_USAGE);
    }

    #[test]
    fn render_example() {
        let out = run(&cli(&["render", "--state", "0010011011"])).unwrap();
        assert!(out.text.contains("parens  ( ) 0 ( ( ) ( ( ) ) )"));
        assert!(out.text.contains("depths  1 1 . 3 1 1 2 1 1 2 3"));
        assert!(out.text.contains("w       1 3 5 4 2"));
    }
}
