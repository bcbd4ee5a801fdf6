use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fbi::output::{write_csv, write_csv_file, write_json_file};
use fbi::{run, CliError, Command, Outcome, RunConfig, SymbolOp, WavefrontOp};

#[derive(Parser)]
#[command(name = "fbi", version, about = "FBI transforms, phase-space quantization and wavefront sets")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for CSV and JSON outputs; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides the configuration seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (0 picks the number of cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the isometry ‖T_φ u‖ = ‖u‖ on a ladder of h.
    Unitarity,
    /// Reproducing identities and adjoint gaps of the Bergman projector.
    Bergman,
    /// Exact Egorov conjugation for linear symbols.
    Egorov,
    /// Quantization-multiplication residuals and their h-slope.
    Quantmult,
    /// Stationary-phase remainders on a battery of amplitudes.
    StationaryPhase,
    /// Fourier inversion through the split weight.
    FourierPair,
    /// Formal symbol calculus.
    Symbol {
        #[command(subcommand)]
        op: SymbolCmd,
    },
    /// WKB quasimode construction and decay ladder.
    Wkb,
    /// Wavefront-set diagnostics.
    Wavefront {
        #[command(subcommand)]
        op: WavefrontCmd,
    },
    /// Run every acceptance criterion.
    Acceptance,
}

#[derive(Subcommand)]
enum SymbolCmd {
    Compose,
    Invert,
    Norms,
}

#[derive(Subcommand)]
enum WavefrontCmd {
    Probe,
    Scan,
    Independence,
    Propagation,
}

impl Cmd {
    fn command(&self) -> Command {
        match self {
            Cmd::Unitarity => Command::Unitarity,
            Cmd::Bergman => Command::Bergman,
            Cmd::Egorov => Command::Egorov,
            Cmd::Quantmult => Command::QuantMult,
            Cmd::StationaryPhase => Command::StationaryPhase,
            Cmd::FourierPair => Command::FourierPair,
            Cmd::Symbol { op } => Command::Symbol(match op {
                SymbolCmd::Compose => SymbolOp::Compose,
                SymbolCmd::Invert => SymbolOp::Invert,
                SymbolCmd::Norms => SymbolOp::Norms,
            }),
            Cmd::Wkb => Command::Wkb,
            Cmd::Wavefront { op } => Command::Wavefront(match op {
                WavefrontCmd::Probe => WavefrontOp::Probe,
                WavefrontCmd::Scan => WavefrontOp::Scan,
                WavefrontCmd::Independence => WavefrontOp::Independence,
                WavefrontCmd::Propagation => WavefrontOp::Propagation,
            }),
            Cmd::Acceptance => Command::Acceptance,
        }
    }
}

fn load(common: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::from_json(&std::fs::read_to_string(p)?)?,
        None => RunConfig::default(),
    };
    if common.seed.is_some() {
        cfg.seed = common.seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(cmd: Command, cfg: &RunConfig, out: &Option<PathBuf>, o: &Outcome) -> Result<(), CliError> {
    let hash = cfg.sha256();
    for l in &o.lines {
        println!("{l}");
    }
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let stem = cfg
                .output
                .as_ref()
                .and_then(|s| s.stem.clone())
                .unwrap_or_else(|| cmd.name().to_string());
            for t in &o.tables {
                write_csv_file(dir, &stem, t, &hash)?;
            }
            let summary = serde_json::json!({
                "command": cmd.name(),
                "config_sha256": hash,
                "config": cfg,
                "summary": o.summary,
            });
            write_json_file(dir, &stem, &summary)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            if o.lines.is_empty() {
                for t in &o.tables {
                    write_csv(&mut w, t, &hash)?;
                }
            }
            println!("{}", serde_json::to_string_pretty(&o.summary).map_err(CliError::from)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cmd = cli.cmd.command();
    let res = load(&cli.common).and_then(|cfg| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.common.threads)
            .build_global()
            .map_err(|e| CliError::usage(format!("thread pool: {e}")))?;
        let o = run(cmd, &cfg)?;
        emit(cmd, &cfg, &cli.common.out, &o)?;
        Ok(o.passed)
    });
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("fbi: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
