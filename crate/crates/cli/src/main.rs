//! `triwalk`: momentum-space sweeps for the three-step quantum walk.

use clap::{Parser, Subcommand};

use triwalk_cli::commands::{
    cmd_acceptance, cmd_critical_scan, cmd_exponents, cmd_phase_diagram, cmd_rg_flow,
    cmd_velocity, cmd_wannier, cmd_winding_trace, CommandError,
};
use triwalk_cli::config::RawScanArgs;
use triwalk_cli::exit_codes;

#[derive(Parser)]
#[command(
    name = "triwalk",
    version,
    about = "Topological phase and criticality sweeps for a three-step discrete-time quantum walk",
    after_help = "Angles are radians everywhere. Each data file gets a <output>.manifest.json \
                  companion recording the resolved configuration."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Winding-number phase diagram over the (theta1, theta2) torus.
    PhaseDiagram(RawScanArgs),
    /// Curvature peaks and gapless winding along one critical line.
    CriticalScan(RawScanArgs),
    /// Critical exponents gamma, nu and z at the transition points.
    Exponents(RawScanArgs),
    /// Renormalization-group flow of one critical-line family.
    RgFlow(RawScanArgs),
    /// Wannier-state correlation decay near a multicritical point.
    Wannier(RawScanArgs),
    /// Group-velocity profile at fixed coin angles.
    Velocity(RawScanArgs),
    /// Normalized winding-vector trace (gapped or on a critical line).
    WindingTrace(RawScanArgs),
    /// Run the acceptance suite.
    Acceptance {
        /// Enumerate the criteria without running them.
        #[arg(long)]
        list: bool,
        /// Run only criteria whose id or name contains this string.
        #[arg(long)]
        only: Option<String>,
        /// Worker threads (0 = rayon default).
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn in_pool<T: Send>(jobs: usize, run: impl FnOnce() -> T + Send) -> T {
    if jobs == 0 {
        return run();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool")
        .install(run)
}

fn run_scan(
    raw: &RawScanArgs,
    cmd: fn(&triwalk_cli::config::ScanConfig) -> Result<(), CommandError>,
) -> i32 {
    let cfg = match raw.resolve() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{e}");
            return exit_codes::CONFIG_ERROR;
        }
    };
    match in_pool(cfg.jobs, || cmd(&cfg)) {
        Ok(()) => exit_codes::OK,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::PhaseDiagram(raw) => run_scan(raw, cmd_phase_diagram),
        Command::CriticalScan(raw) => run_scan(raw, cmd_critical_scan),
        Command::Exponents(raw) => run_scan(raw, cmd_exponents),
        Command::RgFlow(raw) => run_scan(raw, cmd_rg_flow),
        Command::Wannier(raw) => run_scan(raw, cmd_wannier),
        Command::Velocity(raw) => run_scan(raw, cmd_velocity),
        Command::WindingTrace(raw) => run_scan(raw, cmd_winding_trace),
        Command::Acceptance { list, only, jobs } => {
            let ok = in_pool(jobs.unwrap_or(0), || cmd_acceptance(*list, only.as_deref()));
            if ok {
                exit_codes::OK
            } else {
                exit_codes::ACCEPTANCE_FAILURE
            }
        }
    };
    std::process::exit(code);
}
