//! `reca` — command-line workbench for cellular-automaton reservoir
//! experiments.
//!
//! Subcommands map onto the library's experiment operations: `run` executes
//! one configured arm, `sweep` compares many rules against the ablation
//! baseline, `ablate` runs the two-arm comparison, `report` re-renders
//! report files from saved records, and `dump-trajectory` / `list-rules`
//! expose the automaton layer directly. Exit codes: 0 success, 2 config
//! error, 3 data error, 4 internal error.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use reca::ca::{evolve, minimum_equivalent_rules, BinaryState, RuleTable};
use reca::experiments::{
    build_report_rows, read_records_jsonl, render_plot_data, render_report_csv,
    write_records_jsonl, ExperimentConfig, ResultRecord, RuleField, Runner, DEFAULT_ALPHA,
};
use reca::{Error, ErrorCategory, Result};

const DEFAULTS_NOTE: &str = "Defaults: reservoir steps 3, repetitions 10 (base seed 42), \
simexp expansion 16 bits, significance level 0.05. Config-file values are overridden only \
by flags passed explicitly.";

#[derive(Parser)]
#[command(
    name = "reca",
    version,
    about = "Cellular-automaton reservoir experiment workbench",
    after_help = DEFAULTS_NOTE
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every experiment-executing subcommand.
#[derive(Args)]
struct ExperimentArgs {
    /// Experiment config file (TOML)
    #[arg(long, value_name = "FILE")]
    config: PathBuf,

    /// Override the reservoir rule: a number 0..=255 or "none"
    #[arg(long, value_name = "RULE")]
    rule: Option<String>,

    /// Override the number of reservoir update steps [config default: 3]
    #[arg(long, value_name = "N")]
    steps: Option<usize>,

    /// Override the base repetition seed (replaces any explicit seed list)
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,

    /// Directory to load the config's dataset file names from instead of
    /// the configured locations
    #[arg(long, value_name = "DIR")]
    dataset: Option<PathBuf>,

    /// Output directory (created if missing)
    #[arg(long, value_name = "DIR", default_value = "reca-out")]
    out: PathBuf,

    /// Cap on parallel worker threads [default: all cores]
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured experiment arm and write its result record
    Run(ExperimentArgs),

    /// Run the ablation baseline plus a set of rules; write records and a report
    Sweep {
        #[command(flatten)]
        common: ExperimentArgs,

        /// Rules to sweep: "min88" (one per equivalence class), "all256",
        /// or a comma-separated list of rule numbers
        #[arg(long, value_name = "SET", default_value = "min88")]
        rules: String,

        /// Significance level before multiple-comparison correction
        #[arg(long, value_name = "A", default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
    },

    /// Compare the configured rule against the identity (no-CA) reservoir
    Ablate {
        #[command(flatten)]
        common: ExperimentArgs,

        /// Significance level for the two-arm comparison
        #[arg(long, value_name = "A", default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
    },

    /// Re-render report files from a saved records file
    Report {
        /// Records file (JSON lines) written by sweep
        #[arg(long, value_name = "FILE")]
        records: PathBuf,

        /// Output directory (created if missing)
        #[arg(long, value_name = "DIR", default_value = "reca-out")]
        out: PathBuf,

        /// Significance level before multiple-comparison correction
        #[arg(long, value_name = "A", default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
    },

    /// Print a rule's space-time pattern as rows of 0/1 text
    DumpTrajectory {
        /// Rule number 0..=255
        #[arg(long, value_name = "RULE")]
        rule: u64,

        /// Number of cells per row (at least 3)
        #[arg(long, value_name = "N")]
        width: usize,

        /// Number of update steps; the initial row is also printed
        #[arg(long, value_name = "N", default_value_t = 3)]
        steps: usize,

        /// Start from a single set cell at the center (the default)
        #[arg(long, group = "init")]
        center: bool,

        /// Start from a uniformly random row drawn with this seed
        #[arg(long, value_name = "SEED", group = "init")]
        random_seed: Option<u64>,

        /// Start from an explicit row of '0'/'1' characters (length --width)
        #[arg(long, value_name = "BITS", group = "init")]
        pattern: Option<String>,
    },

    /// Print the 88 minimum-equivalent rule numbers, one per line
    ListRules,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category().as_str());
            ExitCode::from(match e.category() {
                ErrorCategory::Config => 2,
                ErrorCategory::Data => 3,
                ErrorCategory::Internal => 4,
            })
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Run(common) => cmd_run(common),
        Command::Sweep {
            common,
            rules,
            alpha,
        } => cmd_sweep(common, &rules, alpha),
        Command::Ablate { common, alpha } => cmd_ablate(common, alpha),
        Command::Report {
            records,
            out,
            alpha,
        } => cmd_report(&records, &out, alpha),
        Command::DumpTrajectory {
            rule,
            width,
            steps,
            center,
            random_seed,
            pattern,
        } => cmd_dump_trajectory(rule, width, steps, center, random_seed, pattern.as_deref()),
        Command::ListRules => {
            for rule in minimum_equivalent_rules() {
                println!("{}", rule.number());
            }
            Ok(())
        }
    }
}

/// Loads the config file and layers the override flags over it.
fn effective_config(args: &ExperimentArgs) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::from_toml_path(&args.config)?;
    if let Some(dir) = &args.dataset {
        cfg.retarget_dataset_dir(dir);
    }
    if let Some(rule) = &args.rule {
        cfg.reservoir.rule = match rule.parse::<u64>() {
            Ok(n) => RuleField::Number(n),
            Err(_) => RuleField::Name(rule.clone()),
        };
    }
    if let Some(steps) = args.steps {
        cfg.reservoir.steps = steps;
    }
    if let Some(seed) = args.seed {
        cfg.repetitions.base_seed = seed;
        cfg.repetitions.seeds = None;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn prepare(args: &ExperimentArgs) -> Result<Runner> {
    if let Some(jobs) = args.jobs {
        if jobs == 0 {
            return Err(Error::Config("--jobs must be at least 1".into()));
        }
        // Ignore the error from a pool that is already initialized (e.g. a
        // second prepare in one process); the cap still applies to the first.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let cfg = effective_config(args)?;
    std::fs::create_dir_all(&args.out).map_err(|e| Error::io(&args.out, e))?;
    let runner = Runner::new(cfg)?;
    write_effective_config(&args.out, &runner)?;
    write_holdout_sidecar(&args.out, &runner)?;
    Ok(runner)
}

fn write_text_file(path: &Path, text: &str) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_json_file<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| Error::Serialize(e.to_string()))?;
    text.push('\n');
    write_text_file(path, &text)
}

/// Echoes the effective config (file + overrides) into the output directory
/// so every result can be reproduced from its own artifacts.
fn write_effective_config(out: &Path, runner: &Runner) -> Result<()> {
    let toml = runner.config().to_toml_string()?;
    let text = format!("# config_hash={}\n{toml}", runner.config_hash());
    write_text_file(&out.join("config_effective.toml"), &text)
}

/// Persists the holdout indices each repetition seed set aside. Nothing in
/// the experiment pipeline reads this file back; it exists so the untouched
/// portion of the data is identifiable later.
fn write_holdout_sidecar(out: &Path, runner: &Runner) -> Result<()> {
    if runner.config().split.holdout_fraction <= 0.0 {
        return Ok(());
    }
    let mut text = format!("# config_hash={}\n", runner.config_hash());
    for (seed, indices) in runner.holdout_sets()? {
        let joined: Vec<String> = indices.iter().map(|i| i.to_string()).collect();
        text.push_str(&format!("{seed}\t{}\n", joined.join(",")));
    }
    write_text_file(&out.join("holdout_indices.tsv"), &text)
}

fn print_record_summary(record: &ResultRecord) {
    println!(
        "arm {}: mean accuracy {:.4}% / error {:.4}% over {} repetitions \
         (train {}, test {})",
        record.payload.arm,
        100.0 * record.payload.mean_accuracy,
        100.0 * record.payload.mean_error_rate,
        record.payload.repetition_seeds.len(),
        record.payload.train_size,
        record.payload.test_size,
    );
}

fn cmd_run(common: ExperimentArgs) -> Result<()> {
    let runner = prepare(&common)?;
    println!(
        "run {}: config {}",
        runner.config().name,
        runner.config_hash()
    );
    let record = runner.run()?;
    print_record_summary(&record);
    let path = common.out.join("result.json");
    write_json_file(&path, &record)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn parse_rule_set(selector: &str) -> Result<Vec<u8>> {
    match selector {
        "min88" => Ok(minimum_equivalent_rules()
            .iter()
            .map(RuleTable::number)
            .collect()),
        "all256" => Ok((0..=255).collect()),
        list => list
            .split(',')
            .map(|part| {
                let part = part.trim();
                let n: u64 = part.parse().map_err(|_| {
                    Error::Config(format!(
                        "--rules must be \"min88\", \"all256\", or comma-separated \
                         rule numbers; got {part:?}"
                    ))
                })?;
                if n > 255 {
                    return Err(Error::InvalidRule(n));
                }
                Ok(n as u8)
            })
            .collect(),
    }
}

fn cmd_sweep(common: ExperimentArgs, rules: &str, alpha: f64) -> Result<()> {
    let rules = parse_rule_set(rules)?;
    let runner = prepare(&common)?;
    println!(
        "sweep {}: {} rules + baseline, config {}",
        runner.config().name,
        rules.len(),
        runner.config_hash()
    );
    let records = runner.sweep(&rules)?;
    let records_path = common.out.join("records.jsonl");
    write_records_jsonl(&records, &records_path)?;
    emit_report_files(&records, &common.out, alpha)?;
    println!(
        "wrote {} records to {}",
        records.len(),
        records_path.display()
    );
    Ok(())
}

fn cmd_ablate(common: ExperimentArgs, alpha: f64) -> Result<()> {
    let runner = prepare(&common)?;
    println!(
        "ablate {}: config {}",
        runner.config().name,
        runner.config_hash()
    );
    let report = runner.ablate(alpha)?;
    print_record_summary(&report.with_ca);
    print_record_summary(&report.without_ca);
    println!(
        "improvement {:+.4} points ({:+.4}% of baseline error), p = {:.6e}, {}",
        100.0 * report.improvement,
        100.0 * report.improvement_pct,
        report.p_value,
        if report.significant {
            "significant"
        } else {
            "not significant"
        },
    );
    let path = common.out.join("ablation.json");
    write_json_file(&path, &report)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_report(records_path: &Path, out: &Path, alpha: f64) -> Result<()> {
    let records = read_records_jsonl(records_path)?;
    let hash = records[0].payload.config_hash.clone();
    for (idx, record) in records.iter().enumerate() {
        if record.payload.config_hash != hash {
            return Err(Error::ReportParse {
                line: idx + 1,
                message: "record's config_hash differs from the first record's".into(),
            });
        }
    }
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let rows = build_report_rows(&records, alpha)?;
    let csv_path = out.join("report.csv");
    write_text_file(&csv_path, &render_report_csv(&rows, &hash))?;
    let plot_path = out.join("plot.tsv");
    write_text_file(&plot_path, &render_plot_data(&rows, &hash))?;
    println!("wrote {} and {}", csv_path.display(), plot_path.display());
    Ok(())
}

fn emit_report_files(records: &[ResultRecord], out: &Path, alpha: f64) -> Result<()> {
    let hash = &records[0].payload.config_hash;
    let rows = build_report_rows(records, alpha)?;
    write_text_file(&out.join("report.csv"), &render_report_csv(&rows, hash))?;
    write_text_file(&out.join("plot.tsv"), &render_plot_data(&rows, hash))?;
    Ok(())
}

fn cmd_dump_trajectory(
    rule: u64,
    width: usize,
    steps: usize,
    _center: bool,
    random_seed: Option<u64>,
    pattern: Option<&str>,
) -> Result<()> {
    let rule = RuleTable::from_number(rule)?;
    if width < 3 {
        return Err(Error::Config(format!(
            "--width must be at least 3, got {width}"
        )));
    }
    let initial = if let Some(text) = pattern {
        if text.len() != width {
            return Err(Error::Config(format!(
                "--pattern length {} does not match --width {width}",
                text.len()
            )));
        }
        BinaryState::from_text(text).map_err(|e| Error::Config(e.to_string()))?
    } else if let Some(seed) = random_seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        BinaryState::random(width, &mut rng)?
    } else {
        BinaryState::single_centered(width)?
    };
    let trajectory = evolve(rule, &initial, steps)?;
    print!("{}", trajectory.to_text());
    Ok(())
}
