//! Command-line front end.
//!
//! Results go to stdout (a table, or JSON with `--json`); timings and other
//! run statistics go to stderr, so stdout is identical across runs and
//! thread counts. Exit status is 0 on success, 1 when a check fails or the
//! input is invalid, and 2 when a search budget is exhausted.

mod play;

use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analysis::suite::{self, run_suite, SuiteOptions};
use crate::analysis::{
    check_distributivity, equivalence_audit, generate_corpus, maximality_ablation, threshold_scan, CorpusInstance,
    DistributivityVariant, DEFAULT_SEED, DEFAULT_SIZE,
};
use crate::engine::{verify_winning_strategy, GameInstance, InstanceFile, Variant, Verification, Width};
use crate::error::{Error, Result};
use crate::solver::{solve_with, DiskCache, SolveOptions, StrategyTable, DEFAULT_STATE_BUDGET};
use crate::structures::FamilySpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_CAPACITY: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "cutchoose", version, about = "Solve and analyse finite cut-and-choose and Banach-Mazur games")]
struct Cli {
    /// Print machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Budgets {
    /// Memoized states the solver may visit.
    #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
    state_budget: usize,
    /// Complete plays explored when verifying a strategy.
    #[arg(long, default_value_t = 2_000_000)]
    node_budget: usize,
    /// Store and reuse winners in this directory (or $CUTCHOOSE_CACHE_DIR).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

impl Budgets {
    fn solve(&self) -> SolveOptions {
        let cache = self.cache_dir.clone().map(DiskCache::new).or_else(DiskCache::from_env);
        SolveOptions { state_budget: self.state_budget, cache, ..SolveOptions::default() }
    }

    fn suite(&self) -> SuiteOptions {
        SuiteOptions { solve: self.solve(), node_budget: self.node_budget, ..SuiteOptions::default() }
    }
}

/// An instance file, or the seeded corpus.
#[derive(Args, Debug, Clone)]
struct Target {
    /// Instance file (JSON).
    instance: Option<PathBuf>,
    /// Use a generated corpus instead; only `default` is known.
    #[arg(long, conflicts_with = "instance")]
    corpus: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_SIZE)]
    size: usize,
}

impl Target {
    fn instances(&self) -> Result<Vec<CorpusInstance>> {
        match (&self.instance, self.corpus.as_deref()) {
            (Some(path), _) => {
                let file = read_instance(path)?;
                Ok(vec![CorpusInstance { id: 0, seed: file.seed.unwrap_or(0), game: file.build()? }])
            }
            (None, Some("default")) => generate_corpus(self.seed, self.size),
            (None, Some(other)) => Err(Error::Parse(format!("unknown corpus `{other}`"))),
            (None, None) => Err(Error::Parse("give an instance file or --corpus default".into())),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Exact,
    Weak,
    StrictPrefix,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Exact => Variant::Exact,
            VariantArg::Weak => Variant::Weak,
            VariantArg::StrictPrefix => Variant::StrictPrefix,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DistArg {
    Plain,
    Uniform,
    IdealWeak,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve an instance and name the player with a winning strategy.
    Solve {
        instance: PathBuf,
        /// Write the winner's strategy table here.
        #[arg(long)]
        strategy: Option<PathBuf>,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Check a strategy table against every opponent line.
    Verify {
        instance: PathBuf,
        strategy: PathBuf,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Certify every strategy transformation applicable to an instance.
    Transform {
        #[command(flatten)]
        target: Target,
        /// Run only this transformation.
        #[arg(long)]
        only: Option<String>,
        #[arg(long, default_value_t = 200_000)]
        max_plays: usize,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Decide distributivity of an instance's structure below its start.
    Check {
        instance: PathBuf,
        #[arg(long, value_enum)]
        variant: Option<DistArg>,
        /// Levels (default: the instance's rounds).
        #[arg(long)]
        levels: Option<usize>,
        /// `unbounded` or a number (default: the instance's width).
        #[arg(long, value_parser = parse_width)]
        width: Option<Width>,
    },
    /// Tabulate winners of U games over rounds and ground sizes.
    Scan {
        /// Family: `size_at_most:K`.
        #[arg(long, value_parser = parse_family, default_value = "size_at_most:1")]
        family: FamilySpec,
        #[arg(long, default_value_t = 2)]
        width: usize,
        /// Rounds, as `A..B` (inclusive).
        #[arg(long, value_parser = parse_range, default_value = "1..3")]
        rounds: RangeInclusive<usize>,
        /// Ground-set sizes, as `A..B` (inclusive).
        #[arg(long, value_parser = parse_range, default_value = "2..10")]
        ground: RangeInclusive<usize>,
        #[arg(long, value_enum, default_value = "exact")]
        variant: VariantArg,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Compare every applicable equivalence on an instance or a corpus.
    Audit {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Run the non-maximal-cut ablation.
    Ablate {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Play against the solver, or replay a recorded transcript.
    Play {
        instance: PathBuf,
        /// Role you play (default: the first mover).
        #[arg(long = "as", value_parser = parse_role)]
        role: Option<crate::engine::Role>,
        /// Replay this transcript instead of playing.
        #[arg(long)]
        replay: Option<PathBuf>,
        /// Save the finished play as a transcript.
        #[arg(long)]
        record: Option<PathBuf>,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Generate the seeded corpus and run the whole check suite on it.
    Corpus {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SIZE)]
        size: usize,
        /// Only list the instances.
        #[arg(long)]
        list: bool,
        /// Write each instance to `DIR/NNN.json` instead of checking.
        #[arg(long)]
        export: Option<PathBuf>,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Inspect or clear the on-disk winner cache.
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CacheAction {
    Stats,
    Clear,
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected A..B or a number, got `{s}`");
    match s.split_once("..") {
        Some((a, b)) => {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok(a..=b)
        }
        None => s.trim().parse().map(|n| n..=n).map_err(|_| bad()),
    }
}

fn parse_family(s: &str) -> std::result::Result<FamilySpec, String> {
    match s.split_once(':') {
        Some(("size_at_most", k)) => k.parse().map(|k| FamilySpec::SizeAtMost { k }).map_err(|e| e.to_string()),
        _ => Err(format!("expected size_at_most:K, got `{s}`")),
    }
}

fn parse_width(s: &str) -> std::result::Result<Width, String> {
    if s == "unbounded" {
        return Ok(Width::Unbounded);
    }
    s.parse().map(Width::Bounded).map_err(|_| format!("expected a number or `unbounded`, got `{s}`"))
}

fn parse_role(s: &str) -> std::result::Result<crate::engine::Role, String> {
    use crate::engine::Role;
    match s.to_ascii_lowercase().as_str() {
        "cut" => Ok(Role::Cut),
        "choose" => Ok(Role::Choose),
        "empty" => Ok(Role::Empty),
        "nonempty" => Ok(Role::Nonempty),
        _ => Err(format!("unknown role `{s}`")),
    }
}

fn read_instance(path: &Path) -> Result<InstanceFile> {
    InstanceFile::parse(&fs::read_to_string(path)?)
}

fn load(path: &Path) -> Result<GameInstance> {
    read_instance(path)?.build()
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
    } else {
        print!("{}", text());
    }
}

fn status(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_INVALID
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    let outcome = match cli.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::Precondition(e.to_string()))
            .and_then(|pool| pool.install(|| dispatch(cli.command, cli.json))),
        None => dispatch(cli.command, cli.json),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_capacity() {
                EXIT_CAPACITY
            } else {
                EXIT_INVALID
            }
        }
    }
}

pub fn main() -> i32 {
    run(std::env::args_os())
}

fn dispatch(command: Command, json: bool) -> Result<i32> {
    match command {
        Command::Solve { instance, strategy, budgets } => {
            let game = load(&instance)?;
            let solved = solve_with(&game, &budgets.solve())?;
            eprintln!(
                "states {} memo hits {} in {:.1?}{}",
                solved.stats.states_visited,
                solved.stats.memo_hits,
                solved.stats.elapsed,
                if solved.stats.from_cache { " (cached)" } else { "" }
            );
            if let Some(path) = strategy {
                fs::write(path, solved.strategy.to_table(budgets.state_budget)?.to_json())?;
            }
            #[derive(Serialize)]
            struct Out {
                instance: String,
                winner: crate::engine::Role,
            }
            let out = Out { instance: game.summary(), winner: solved.winner };
            emit(json, &out, || format!("{}\nwinner: {}\n", out.instance, out.winner));
            Ok(EXIT_OK)
        }
        Command::Verify { instance, strategy, budgets } => {
            let game = load(&instance)?;
            let table = StrategyTable::parse(&fs::read_to_string(strategy)?)?;
            let v = verify_winning_strategy(&game, &table.strategy(), table.owner, budgets.node_budget)?;
            #[derive(Serialize)]
            struct Out {
                owner: crate::engine::Role,
                wins: bool,
                plays: Option<usize>,
                counterexample: Option<crate::engine::Transcript>,
            }
            let out = match v {
                Verification::Wins { plays } => Out { owner: table.owner, wins: true, plays: Some(plays), counterexample: None },
                Verification::Counterexample(t) => Out { owner: table.owner, wins: false, plays: None, counterexample: Some(t) },
            };
            emit(json, &out, || match (&out.plays, &out.counterexample) {
                (Some(p), _) => format!("{} strategy wins all {p} plays\n", out.owner),
                (_, Some(t)) => format!("{} strategy loses:\n{}", out.owner, t.render()),
                _ => unreachable!(),
            });
            Ok(status(out.wins))
        }
        Command::Transform { target, only, max_plays, budgets } => {
            let opts = SuiteOptions { max_plays, ..budgets.suite() };
            let rows = suite::over(&target.instances()?, |i| suite::transform_checks(i, &opts))?;
            let rows: Vec<_> =
                rows.into_iter().flatten().filter(|r| only.as_ref().is_none_or(|o| &r.transform == o)).collect();
            emit(json, &rows, || {
                rows.iter().map(|r| format!("#{:<4} {:<24} {}\n", r.id, r.transform, describe(&r.status))).collect()
            });
            Ok(status(rows.iter().all(|r| r.passed())))
        }
        Command::Check { instance, variant, levels, width } => {
            let game = load(&instance)?;
            let variant = variant.map_or(DistributivityVariant::for_game_variant(game.variant()), |v| match v {
                DistArg::Plain => DistributivityVariant::Plain,
                DistArg::Uniform => DistributivityVariant::Uniform,
                DistArg::IdealWeak => DistributivityVariant::IdealWeak,
            });
            let levels = levels.unwrap_or(game.rounds());
            let width = width.unwrap_or(game.width());
            let verdict = check_distributivity(game.structure(), game.start(), levels, width, variant)?;
            emit(json, &verdict, || match &verdict {
                crate::analysis::Distributivity::Holds { nodes } => {
                    format!("{variant:?} distributivity holds at {levels} levels, width {width} ({nodes} nodes)\n")
                }
                crate::analysis::Distributivity::Fails { sequence, .. } => {
                    let cuts: Vec<String> = sequence.iter().map(|m| m.to_string()).collect();
                    format!("{variant:?} distributivity fails; branchless cuts:\n  {}\n", cuts.join("\n  "))
                }
            });
            Ok(EXIT_OK)
        }
        Command::Scan { family, width, rounds, ground, variant, budgets } => {
            let table = threshold_scan(&family, width, rounds, ground, variant.into(), &budgets.solve())?;
            emit(json, &table, || table.render());
            Ok(EXIT_OK)
        }
        Command::Audit { target, budgets } => {
            let opts = budgets.solve();
            let reports = suite::over(&target.instances()?, |i| equivalence_audit(&i.game, &opts))?;
            let bad: usize = reports.iter().map(|r| r.disagreements()).sum();
            emit(json, &reports, || {
                let mut s: String = reports.iter().map(|r| r.render() + "\n").collect();
                s.push_str(&format!("{} instances, {bad} disagreements\n", reports.len()));
                s
            });
            Ok(status(bad == 0))
        }
        Command::Ablate { target, budgets } => {
            let opts = budgets.suite();
            let single = target.instance.is_some();
            if single {
                let game = &target.instances()?[0].game;
                let r = maximality_ablation(game, opts.node_budget, &opts.solve)?;
                emit(json, &r, || {
                    format!(
                        "{}\nablated: {}\nforcing pair {} / {}: {}\nwith maximal cuts: {} wins\n",
                        r.instance,
                        r.ablated,
                        r.pair.0,
                        r.pair.1,
                        if r.forcing_verified { "Cut wins every line" } else { "FAILED" },
                        r.restored_winner
                    )
                });
                return Ok(status(r.forcing_verified && r.restored_winner == crate::engine::Role::Choose));
            }
            let rows = suite::over(&target.instances()?, |i| suite::ablation(i, &opts))?;
            emit(json, &rows, || rows.iter().map(|r| format!("{r:?}\n")).collect());
            Ok(status(rows.iter().all(|r| r.passed())))
        }
        Command::Play { instance, role, replay, record, budgets } => {
            play::run(&load(&instance)?, role, replay.as_deref(), record.as_deref(), &budgets.solve(), json)
        }
        Command::Corpus { seed, size, list, export, budgets } => {
            if let Some(dir) = export {
                fs::create_dir_all(&dir)?;
                for inst in generate_corpus(seed, size)? {
                    fs::write(dir.join(format!("{:03}.json", inst.id)), inst.file().to_json())?;
                }
                eprintln!("wrote {size} instances to {}", dir.display());
                return Ok(EXIT_OK);
            }
            if list {
                let entries: Vec<crate::analysis::CorpusEntry> = generate_corpus(seed, size)?
                    .into_iter()
                    .map(|i| crate::analysis::CorpusEntry { id: i.id, summary: i.game.summary(), instance: i.file() })
                    .collect();
                emit(json, &entries, || entries.iter().map(|e| format!("#{:<4} {}\n", e.id, e.summary)).collect());
                return Ok(EXIT_OK);
            }
            let started = std::time::Instant::now();
            let report = run_suite(seed, size, &budgets.suite())?;
            eprintln!("suite finished in {:.1?}", started.elapsed());
            emit(json, &report, || report.render());
            Ok(status(report.failures().is_empty()))
        }
        Command::Cache { action, dir } => {
            let cache = dir.map(DiskCache::new).or_else(DiskCache::from_env).ok_or_else(|| {
                Error::Precondition(format!("give --dir or set {}", crate::solver::CACHE_DIR_ENV))
            })?;
            match action {
                CacheAction::Stats => {
                    let (entries, bytes) = cache.stats()?;
                    #[derive(Serialize)]
                    struct Out {
                        entries: usize,
                        bytes: u64,
                    }
                    emit(json, &Out { entries, bytes }, || format!("{entries} entries, {bytes} bytes\n"));
                }
                CacheAction::Clear => {
                    let removed = cache.clear()?;
                    emit(json, &removed, || format!("removed {removed} entries\n"));
                }
            }
            Ok(EXIT_OK)
        }
    }
}

fn describe(s: &suite::TransformStatus) -> String {
    use suite::TransformStatus::*;
    match s {
        Checked { plays, valid, input_wins, output_always_won } => format!(
            "{valid}/{plays} plays sound{}",
            match (input_wins, output_always_won) {
                (true, true) => ", win transported",
                (true, false) => ", WIN NOT TRANSPORTED",
                _ => "",
            }
        ),
        Agreement { agrees } => if *agrees { "agrees" } else { "DISAGREES" }.to_string(),
        NotApplicable { reason } => format!("n/a: {reason}"),
    }
}
