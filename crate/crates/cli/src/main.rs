use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ecsim::harness::{self, RunOptions, SweepSpec};
use ecsim::scenario::load_config;
use ecsim::toa::calibrate_offset;
use ecsim::{ConfigId, Error, SimConfig};

/// Statistical channel simulator: K-factor statistics, K_EC-grouped ToA
/// error and UE height sweeps.
#[derive(Parser, Debug)]
#[command(name = "ecsim", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Config file (`key = value` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override a config key, e.g. `--set scenario.r_tau=2.5`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    sets: Vec<String>,
    /// RNG seed (decimal or 0x-hex).
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Drops per configuration.
    #[arg(long, global = true)]
    drops: Option<usize>,
    /// Output directory for CSV files.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Comma-separated configuration IDs.
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        default_value = "104.20,104.60,104.63,104.66"
    )]
    configs: Vec<ConfigId>,
    /// Worker threads; 1 runs serially. Defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Overall-K and K_EC CDFs per configuration.
    Stats,
    /// ToA error CDFs grouped by K_EC, pooled over the configurations.
    ToaCdf {
        /// K_EC bin edges in dB.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0,5,10,15",
            allow_hyphen_values = true
        )]
        bins: Vec<f64>,
    },
    /// Band power and first-path power versus UE height on one realization.
    HeightSweep {
        #[arg(long, default_value = "104.60")]
        config_id: ConfigId,
        #[arg(long, default_value_t = 0.7)]
        h_min: f64,
        #[arg(long, default_value_t = 3.3)]
        h_max: f64,
        #[arg(long, default_value_t = 261)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        drop: u64,
    },
    /// Wideband taps and band-limited trace of one drop.
    DumpCir {
        #[arg(long, default_value = "104.60")]
        config_id: ConfigId,
        #[arg(long, default_value_t = 0)]
        drop: u64,
    },
    /// Prints the ToA calibration offset for the configured signal.
    Calibrate,
    /// Prints the effective configuration.
    ShowConfig,
    /// Writes a gnuplot script for one subcommand's CSVs.
    PlotScript {
        /// stats, toa-cdf, height-sweep or dump-cir
        kind: String,
    },
}

fn load(common: &Common) -> ecsim::Result<SimConfig> {
    let mut sets = common.sets.clone();
    if let Some(s) = &common.seed {
        sets.push(format!("sim.seed={s}"));
    }
    if let Some(d) = common.drops {
        sets.push(format!("sim.num_drops={d}"));
    }
    let cfg = load_config(common.config.as_deref(), &sets)?;
    cfg.validate()?;
    Ok(cfg)
}

fn write(path: &Path, text: &str) -> ecsim::Result<()> {
    std::fs::create_dir_all(path.parent().unwrap_or(Path::new(".")))
        .and_then(|_| std::fs::write(path, text))
        .map_err(|e| Error::Io {
            path: path.to_path_buf(),
            source: e,
        })
}

fn run(cli: Cli) -> ecsim::Result<()> {
    let c = &cli.common;
    let opts = RunOptions {
        threads: c.threads,
        waveform: false,
    };
    if let Command::PlotScript { kind } = &cli.cmd {
        let path = c.out_dir.join(format!("{kind}.gp"));
        write(&path, &harness::plot_script(kind)?)?;
        println!("wrote {}", path.display());
        return Ok(());
    }
    let sim = load(c)?;
    let out = Some(c.out_dir.as_path());
    match &cli.cmd {
        Command::Stats => {
            write(&c.out_dir.join("run_config.conf"), &sim.to_config_string())?;
            for s in harness::run_stats(&sim, &c.configs, out, opts)? {
                println!("{}", s.line());
            }
        }
        Command::ToaCdf { bins } => {
            write(&c.out_dir.join("run_config.conf"), &sim.to_config_string())?;
            let s = harness::run_toa_cdf(&sim, &c.configs, bins, out, opts)?;
            for l in s.lines() {
                println!("{l}");
            }
        }
        Command::HeightSweep {
            config_id,
            h_min,
            h_max,
            steps,
            drop,
        } => {
            let sweep = SweepSpec {
                h_min: *h_min,
                h_max: *h_max,
                steps: *steps,
            };
            let rows = harness::run_height_sweep(&sim, &sweep, *config_id, *drop, out)?;
            let span = |f: &dyn Fn(&harness::SweepRow) -> Option<f64>| {
                let v: Vec<f64> = rows.iter().filter_map(f).collect();
                v.iter().cloned().fold(f64::MIN, f64::max)
                    - v.iter().cloned().fold(f64::MAX, f64::min)
            };
            println!(
                "{config_id}: {} heights, RSRP span {:.2} dB, RSRPP span {:.2} dB",
                rows.len(),
                span(&|r| Some(r.rsrp_db)),
                span(&|r| r.rsrpp_db)
            );
        }
        Command::DumpCir { config_id, drop } => {
            let d = harness::dump_cir(&sim, *config_id, *drop, out)?;
            for f in &d.files {
                println!("wrote {}", f.display());
            }
        }
        Command::Calibrate => {
            let off = calibrate_offset(&sim.signal, &sim.toa)?;
            println!("calibration offset: {:.6} ns", off * 1e9);
        }
        Command::ShowConfig => print!("{}", sim.to_config_string()),
        Command::PlotScript { .. } => unreachable!(),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}
