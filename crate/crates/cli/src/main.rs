use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use bitrade_core::canon::canonical_form;
use bitrade_core::enumerate::{run_tasks, split_tasks, SearchTask, MIN_SIZE};
use bitrade_core::moves::{slide_contract, slide_expand};
use bitrade_core::oracle::{naive_closure, verify_class_invariants, DEFAULT_BOUND};
use bitrade_core::{from_pair, to_pair, CensusTable, Direction, SlideSite, TauTriple, TradePair};

#[derive(Parser)]
#[command(name = "bitrade", version, about = "Spherical latin bitrades: conversion, moves, canonical forms and census")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count τ-isomorphism classes of spherical bitrades by canonical augmentation
    Enumerate(EnumerateArgs),
    /// Count classes with the brute-force closure (small sizes only)
    Oracle(OracleArgs),
    /// Check (T1)-(T4) and report the genus
    Validate(InputArgs),
    /// Print the genus of a bitrade
    Genus(InputArgs),
    /// Convert between the .tau and .trade formats
    Convert(ConvertArgs),
    /// Write the inverse bitrade
    Inverse(InputArgs),
    /// Print the canonical code
    Canon(InputArgs),
    /// Slide expansion at a point and direction
    Expand(MoveArgs),
    /// Slide contraction at a point and direction
    Contract(MoveArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Counts,
    Forms,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Tau,
    Pair,
}

fn parse_max_size(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < MIN_SIZE {
        return Err(format!("must be at least {MIN_SIZE}"));
    }
    Ok(n)
}

fn parse_workers(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long, value_parser = parse_max_size)]
    max_size: usize,
    #[arg(long, default_value_t = 1, value_parser = parse_workers)]
    workers: usize,
    /// Depth at which the search tree is cut into independent tasks
    #[arg(long, default_value_t = 3)]
    split_depth: usize,
    #[arg(long, value_enum, default_value_t = Emit::Counts)]
    emit: Emit,
    /// Directory holding the task list and completed task censuses
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, value_parser = parse_max_size)]
    max_size: usize,
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    bound: usize,
    #[arg(long, value_enum, default_value_t = Emit::Counts)]
    emit: Emit,
    /// Also re-check every stored class and fail on any violation
    #[arg(long)]
    verify: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InputArgs {
    /// A .tau or .trade file, or `-` for stdin
    file: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConvertArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum)]
    to: Target,
}

#[derive(Args)]
struct MoveArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    point: usize,
    /// Direction 1, 2 or 3
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    dir: u8,
}

impl MoveArgs {
    fn site(&self) -> SlideSite {
        SlideSite::new(
            Direction::from_number(self.dir as usize).expect("clap checks the range"),
            self.point,
        )
    }
}

enum Input {
    Tau(Box<TauTriple>),
    Pair(TradePair),
}

impl Input {
    fn into_triple(self) -> Result<TauTriple> {
        match self {
            Input::Tau(t) => Ok(*t),
            Input::Pair(p) => Ok(from_pair(&p)?),
        }
    }
}

fn read_input(path: &Path) -> Result<Input> {
    let mut text = String::new();
    if path == Path::new("-") {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    }
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .and_then(|l| l.split_whitespace().next())
        .unwrap_or("");
    let parsed = match first {
        "size" => text.parse().map(|t| Input::Tau(Box::new(t))),
        "A" | "B" => text.parse().map(Input::Pair),
        other => bail!(
            "{}: cannot tell the format from leading token {other:?}; expected `size` or `A`",
            path.display()
        ),
    };
    parsed.with_context(|| path.display().to_string())
}

fn read_triple(path: &Path) -> Result<TauTriple> {
    read_input(path)?.into_triple()
}

fn write_output(out: Option<&Path>, data: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, data).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(data.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn require_bitrade(t: &TauTriple) -> Result<()> {
    let r = t.validate();
    ensure!(r.is_bitrade(), "input is not a bitrade:\n{r}");
    Ok(())
}

fn cmd_enumerate(args: &EnumerateArgs) -> Result<()> {
    let forms = args.emit == Emit::Forms;
    ensure!(
        !(forms && args.checkpoint.is_some()),
        "--emit forms cannot be combined with --checkpoint"
    );
    #[cfg(not(feature = "parallel"))]
    if args.workers > 1 {
        log::warn!("built without the `parallel` feature; running on one thread");
    }

    let split = split_tasks(args.max_size, args.split_depth, forms);
    info!(
        "split at depth {} into {} tasks ({} classes above the split)",
        args.split_depth,
        split.tasks.len(),
        split.prefix.total()
    );
    let mut census = split.prefix;

    let (pending, journal) = match &args.checkpoint {
        Some(dir) => {
            let cp = Checkpoint::open(dir, &split.tasks)?;
            for done in &cp.completed {
                census.merge(done);
            }
            info!("resuming: {} of {} tasks already done", cp.done_ids.len(), split.tasks.len());
            let pending: Vec<(usize, SearchTask)> = split
                .tasks
                .iter()
                .cloned()
                .enumerate()
                .filter(|(i, _)| !cp.done_ids.contains(i))
                .collect();
            (pending, Some(Mutex::new(cp.journal)))
        }
        None => (split.tasks.into_iter().enumerate().collect(), None),
    };

    let ids: Vec<usize> = pending.iter().map(|(i, _)| *i).collect();
    let tasks: Vec<SearchTask> = pending.into_iter().map(|(_, t)| t).collect();
    let total = tasks.len();
    let finished = std::sync::atomic::AtomicUsize::new(0);
    let journal_error = Mutex::new(None::<io::Error>);
    let parts = run_tasks(&tasks, args.workers, forms, |i, c| {
        let n = finished.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
        log::debug!("task {} finished ({n}/{total}), {} classes", ids[i], c.total());
        if let Some(j) = &journal {
            let mut f = j.lock().unwrap();
            if let Err(e) = writeln!(f, "{}\t{}", ids[i], encode_counts(c)).and_then(|_| f.flush()) {
                journal_error.lock().unwrap().get_or_insert(e);
            }
        }
    })?;
    if let Some(e) = journal_error.into_inner().unwrap() {
        return Err(e).context("writing checkpoint journal");
    }
    for p in &parts {
        census.merge(p);
    }
    census.normalize();
    let text = if forms {
        census.forms_text()
    } else {
        census.to_string()
    };
    write_output(args.out.as_deref(), &text)
}

/// `size:count,size:count,...`
fn encode_counts(c: &CensusTable) -> String {
    c.counts()
        .iter()
        .filter(|(_, &n)| n > 0)
        .map(|(s, n)| format!("{s}:{n}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn decode_counts(text: &str) -> Option<CensusTable> {
    let mut c = CensusTable::default();
    for item in text.split(',').filter(|s| !s.is_empty()) {
        let (s, n) = item.split_once(':')?;
        c.add_count(s.parse().ok()?, n.parse().ok()?);
    }
    Some(c)
}

struct Checkpoint {
    done_ids: std::collections::BTreeSet<usize>,
    completed: Vec<CensusTable>,
    journal: fs::File,
}

impl Checkpoint {
    const TASKS: &'static str = "tasks.txt";
    const DONE: &'static str = "done.txt";

    fn open(dir: &Path, tasks: &[SearchTask]) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let listing: String = tasks.iter().map(|t| format!("{t}\n")).collect();
        let tasks_path = dir.join(Self::TASKS);
        match fs::read_to_string(&tasks_path) {
            Ok(existing) => ensure!(
                existing == listing,
                "{} was written for a different --max-size or --split-depth",
                tasks_path.display()
            ),
            Err(e) if e.kind() == io::ErrorKind::NotFound => fs::write(&tasks_path, &listing)
                .with_context(|| format!("writing {}", tasks_path.display()))?,
            Err(e) => return Err(e).context(format!("reading {}", tasks_path.display())),
        }

        let done_path = dir.join(Self::DONE);
        let mut done_ids = std::collections::BTreeSet::new();
        let mut completed = Vec::new();
        if let Ok(text) = fs::read_to_string(&done_path) {
            for (n, line) in text.lines().enumerate() {
                // a torn final line from an interrupted run is ignored
                let parsed = line.split_once('\t').and_then(|(id, counts)| {
                    Some((id.parse::<usize>().ok()?, decode_counts(counts)?))
                });
                match parsed {
                    Some((id, c)) if id < tasks.len() && done_ids.insert(id) => completed.push(c),
                    Some(_) => {}
                    None if n + 1 == text.lines().count() => {}
                    None => bail!("{}: line {} is corrupt", done_path.display(), n + 1),
                }
            }
        }
        let journal = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&done_path)
            .with_context(|| format!("opening {}", done_path.display()))?;
        Ok(Checkpoint {
            done_ids,
            completed,
            journal,
        })
    }
}

fn cmd_oracle(args: &OracleArgs) -> Result<()> {
    let store = naive_closure(args.max_size, args.bound)?;
    if args.verify {
        let report = verify_class_invariants(&store);
        eprint!("{report}");
        ensure!(report.is_clean(), "class invariants violated");
    }
    let census = store.census(args.max_size);
    let text = match args.emit {
        Emit::Counts => census.to_string(),
        Emit::Forms => census.forms_text(),
    };
    write_output(args.out.as_deref(), &text)
}

fn cmd_validate(args: &InputArgs) -> Result<()> {
    let t = read_triple(&args.file)?;
    write_output(args.out.as_deref(), &t.validate().to_string())
}

fn cmd_genus(args: &InputArgs) -> Result<()> {
    let t = read_triple(&args.file)?;
    require_bitrade(&t)?;
    write_output(args.out.as_deref(), &format!("{}\n", t.genus()?))
}

fn cmd_convert(args: &ConvertArgs) -> Result<()> {
    let text = match (read_input(&args.input.file)?, args.to) {
        (Input::Tau(t), Target::Tau) => t.to_string(),
        (Input::Pair(p), Target::Tau) => from_pair(&p)?.to_string(),
        (Input::Tau(t), Target::Pair) => {
            require_bitrade(&t)?;
            to_pair(&t).to_string()
        }
        (Input::Pair(p), Target::Pair) => {
            from_pair(&p)?;
            p.to_string()
        }
    };
    write_output(args.input.out.as_deref(), &text)
}

fn cmd_inverse(args: &InputArgs) -> Result<()> {
    let t = read_triple(&args.file)?;
    require_bitrade(&t)?;
    write_output(args.out.as_deref(), &t.inverse().to_string())
}

fn cmd_canon(args: &InputArgs) -> Result<()> {
    let t = read_triple(&args.file)?;
    require_bitrade(&t)?;
    ensure!(t.is_transitive(), "input is not transitive; no canonical form");
    let (form, _) = canonical_form(&t);
    write_output(args.out.as_deref(), &format!("{form}\n"))
}

fn cmd_expand(args: &MoveArgs) -> Result<()> {
    let t = read_triple(&args.input.file)?;
    require_bitrade(&t)?;
    let child = slide_expand(&t, args.site())?;
    write_output(args.input.out.as_deref(), &child.to_string())
}

fn cmd_contract(args: &MoveArgs) -> Result<()> {
    let t = read_triple(&args.input.file)?;
    require_bitrade(&t)?;
    let parent = slide_contract(&t, args.site())?;
    write_output(args.input.out.as_deref(), &parent.to_string())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp_secs()
        .init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Genus(a) => cmd_genus(a),
        Command::Convert(a) => cmd_convert(a),
        Command::Inverse(a) => cmd_inverse(a),
        Command::Canon(a) => cmd_canon(a),
        Command::Expand(a) => cmd_expand(a),
        Command::Contract(a) => cmd_contract(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
