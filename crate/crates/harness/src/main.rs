use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use teich_core::quantum_maps::KashaevParams;
use teich_core::surface::{builtin_surfaces, find_move_path, SurfaceError, DEFAULT_SEARCH_DEPTH};
use teich_harness::{run_suite, HarnessError, SuiteConfig, Surface};

#[derive(Parser)]
#[command(name = "teich", version, about = "Checks coordinate changes on triangulated punctured surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites against one surface.
    Verify {
        /// Bundled surface name or triangulation file.
        #[arg(long)]
        surface: String,
        /// Suite or group names (classical-all, quantum-all, all).
        #[arg(long = "suite", num_args = 0.., value_delimiter = ',')]
        suites: Vec<String>,
        /// Exponent k in a = q^k; repeat together with --b for several pairs.
        #[arg(long = "a", allow_hyphen_values = true)]
        a: Vec<i32>,
        /// Exponent k in b = q^k.
        #[arg(long = "b", allow_hyphen_values = true)]
        b: Vec<i32>,
        /// Root-of-unity orders, odd and at least 3.
        #[arg(long = "N", value_delimiter = ',', default_values_t = [3usize, 5])]
        orders: Vec<usize>,
        #[arg(long, default_value_t = 8)]
        q1_points: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Search depth for path-independence.
        #[arg(long, default_value_t = DEFAULT_SEARCH_DEPTH)]
        depth: usize,
        /// Also write the report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bundled surfaces.
    Surfaces {
        #[command(subcommand)]
        action: SurfacesAction,
    },
    /// Find a shortest move sequence between two triangulations.
    Path {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = DEFAULT_SEARCH_DEPTH)]
        depth: usize,
    },
}

#[derive(Subcommand)]
enum SurfacesAction {
    List,
}

fn verify(cli: Command) -> Result<bool, HarnessError> {
    let Command::Verify { surface, suites, a, b, orders, q1_points, tol, seed, depth, out } = cli else {
        unreachable!()
    };
    if a.len() != b.len() {
        return Err(HarnessError::UnpairedParams);
    }
    let mut cfg = SuiteConfig::new(Surface::load(&surface)?).with_suites(&suites)?;
    if !a.is_empty() {
        cfg.params = a.iter().zip(&b).map(|(&ka, &kb)| KashaevParams::q_powers(ka, kb)).collect();
    }
    cfg.policy.rou_levels = orders;
    cfg.policy.q1_points = q1_points;
    cfg.policy.tolerance = tol;
    cfg.policy.seed = seed;
    cfg.depth = depth;
    cfg.out = out;
    let report = run_suite(&cfg)?;
    print!("{}", report.to_text());
    Ok(report.passed())
}

fn path(from: &str, to: &str, depth: usize) -> Result<bool, HarnessError> {
    let (from, to) = (Surface::load(from)?, Surface::load(to)?);
    // Ideal files are searched as ideal triangulations, without marks.
    let found = if from.marked && to.marked {
        find_move_path(&from.decorated, &to.decorated, depth)
    } else {
        find_move_path(&from.ideal, &to.ideal, depth)
    };
    match found {
        Ok(moves) => {
            println!("# {} moves", moves.len());
            for mv in moves {
                println!("{mv}");
            }
            Ok(true)
        }
        Err(SurfaceError::SearchBoundExceeded(_)) => {
            println!("# no path within depth {depth}");
            Ok(false)
        }
        Err(source) => Err(HarnessError::Surface { path: to.name, source }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        cmd @ Command::Verify { .. } => verify(cmd),
        Command::Surfaces { action: SurfacesAction::List } => {
            for s in builtin_surfaces() {
                println!("{}\t{}", s.name, s.description);
            }
            Ok(true)
        }
        Command::Path { from, to, depth } => path(&from, &to, depth),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
