use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qgrid_cli::config::{parse_coords, parse_dims};
use qgrid_cli::{load_summary_config, run_single, run_sweep, Overrides, RunConfig, SweepConfig, UsageError};
use qgrid_core::Preset;

#[derive(Parser)]
#[command(name = "qgrid", version, about = "Tabular Q-learning on N-dimensional gridworlds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train one agent and write episodes.csv, path.csv and summary.json.
    Run(Box<RunArgs>),
    /// Run every preset x seed combination from a JSON sweep file.
    Sweep(SweepArgs),
    /// Re-run the configuration recorded in an earlier summary.json.
    Replay(ReplayArgs),
}

#[derive(Args)]
struct RunArgs {
    /// paper-2d or paper-3d; other flags override its values.
    #[arg(long)]
    preset: Option<Preset>,
    /// Grid extents, e.g. 50x50 or 10x10x10x10.
    #[arg(long, value_parser = parse_dims)]
    dims: Option<::std::vec::Vec<u32>>,
    #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
    start: Option<::std::vec::Vec<i32>>,
    #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
    goal: Option<::std::vec::Vec<i32>>,
    #[arg(long)]
    episodes: Option<usize>,
    #[arg(long)]
    max_steps: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    goal_reward: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    step_reward: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Stabilization window (episodes).
    #[arg(long)]
    window: Option<usize>,
    /// Stabilization tolerance relative to the final plateau.
    #[arg(long)]
    tolerance: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CommonArgs {
    /// Output directory; defaults to a name under $QGRID_OUT_DIR (or ".").
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print one line per finished episode.
    #[arg(long)]
    verbose: bool,
    /// Worker threads for sweeps; single runs are always sequential.
    #[arg(long)]
    jobs: Option<usize>,
    /// Also write qtable.txt.
    #[arg(long)]
    dump_q: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON file: {"presets": [...], "seeds": [...]} or base_seed/num_seeds.
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ReplayArgs {
    summary: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
}

fn out_root() -> PathBuf {
    std::env::var_os("QGRID_OUT_DIR").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."))
}

fn execute_run(cfg: RunConfig, common: &CommonArgs) -> anyhow::Result<()> {
    let out = common.out.clone().unwrap_or_else(|| out_root().join(cfg.default_dir_name()));
    let summary = run_single(&cfg, &out, common.dump_q, common.verbose)?;
    println!(
        "{}: stabilization episode {}, final plateau {} steps, greedy path {} steps (Manhattan {}){}",
        out.display(),
        summary.stabilization.episode.map_or("-".into(), |e| e.to_string()),
        summary.stabilization.final_plateau_steps,
        summary.greedy_path.steps,
        summary.manhattan_distance,
        if summary.greedy_path.reached_goal { "" } else { ", goal not reached" },
    );
    Ok(())
}

fn execute(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Run(args) => {
            let cfg = RunConfig::resolve(Overrides {
                preset: args.preset,
                dims: args.dims,
                start: args.start,
                goal: args.goal,
                episodes: args.episodes,
                max_steps: args.max_steps,
                alpha: args.alpha,
                gamma: args.gamma,
                epsilon: args.epsilon,
                goal_reward: args.goal_reward,
                step_reward: args.step_reward,
                seed: args.seed,
                window: args.window,
                tolerance: args.tolerance,
            })?;
            execute_run(cfg, &args.common)?;
            Ok(true)
        }
        Command::Replay(args) => {
            let cfg = load_summary_config(&args.summary)?;
            execute_run(cfg, &args.common)?;
            Ok(true)
        }
        Command::Sweep(args) => {
            let text = std::fs::read_to_string(&args.config)
                .map_err(|e| UsageError::new(format!("cannot read {}: {e}", args.config.display())))?;
            let cfg = SweepConfig::from_json(&text)?;
            let root = args.common.out.clone().unwrap_or_else(|| out_root().join("sweep"));
            let summary = run_sweep(&cfg, &root, args.common.jobs, args.common.verbose)?;
            for p in &summary.presets {
                println!(
                    "{}: stabilization episodes {:?}, median {}",
                    p.name,
                    p.stabilization_episodes,
                    p.median_stabilization.map_or("-".into(), |m| m.to_string())
                );
            }
            if let Some(r) = summary.scaling_ratio {
                println!("scaling ratio: {r:.3}");
            }
            for f in &summary.failures {
                eprintln!("run {} seed {} failed: {}", f.preset, f.seed, f.error);
            }
            Ok(summary.failures.is_empty())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
