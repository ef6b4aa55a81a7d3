use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mutvis::engine::{run_with, Colliding, Controller, Outcome, Standard};
use mutvis::render::render_trace;
use mutvis::scenario::{default_spread, generate, Scenario};
use mutvis::{verify, FramePolicy, TraceFile};

#[derive(Parser)]
#[command(name = "mutvis", version, about = "Two-color mutual visibility simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random scenario.
    Generate {
        #[arg(short, long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Side of the sampling square (default 3*sqrt(n)).
        #[arg(long)]
        spread: Option<f64>,
        /// Place the robots on a line.
        #[arg(long)]
        collinear: bool,
        #[arg(long, default_value = "rotated")]
        frames: FramePolicy,
        #[arg(long)]
        no_predict: bool,
        #[arg(long)]
        k_samples: Option<usize>,
        #[arg(long)]
        max_rounds: Option<u64>,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run a scenario. Exits 0 iff the run is solved.
    Run {
        scenario: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        svg_dir: Option<PathBuf>,
        #[arg(long)]
        max_rounds: Option<u64>,
        #[arg(long)]
        no_predict: bool,
        #[arg(long)]
        frames: Option<FramePolicy>,
        #[arg(long)]
        k_samples: Option<usize>,
        /// Replace Compute with a controller that drives robots into each
        /// other; the run must end in a violation.
        #[arg(long)]
        broken_compute: bool,
    },
    /// Re-check a trace and print one line per check.
    Verify { trace: PathBuf },
    /// Write one SVG per round of a trace.
    Render { trace: PathBuf, dir: PathBuf },
}

enum Failure {
    Usage(String),
    Failed,
}

impl From<mutvis::FormatError> for Failure {
    fn from(e: mutvis::FormatError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Failed) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Generate {
            n,
            seed,
            spread,
            collinear,
            frames,
            no_predict,
            k_samples,
            max_rounds,
            out,
        } => {
            let mut s = generate(n, seed, spread.unwrap_or_else(|| default_spread(n)), collinear)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            s.frames = frames;
            s.predict = !no_predict;
            if let Some(k) = k_samples {
                s.samples = k;
            }
            if let Some(m) = max_rounds {
                s.max_rounds = m;
            }
            s.validate()?;
            match out {
                Some(path) => s.write(&path)?,
                None => print!("{}", s.to_text()),
            }
            Ok(())
        }
        Command::Run {
            scenario,
            trace,
            svg_dir,
            max_rounds,
            no_predict,
            frames,
            k_samples,
            broken_compute,
        } => {
            let mut s = Scenario::read(&scenario)?;
            if let Some(m) = max_rounds {
                s.max_rounds = m;
            }
            if no_predict {
                s.predict = false;
            }
            if let Some(f) = frames {
                s.frames = f;
            }
            if let Some(k) = k_samples {
                s.samples = k;
            }
            s.validate()?;
            let controller: &dyn Controller = if broken_compute { &Colliding } else { &Standard };
            let t = run_with(&s, controller);
            let tf = TraceFile::from(&t);
            if let Some(path) = trace {
                tf.write(&path)?;
            }
            if let Some(dir) = svg_dir {
                render_trace(&tf, &dir)?;
            }
            println!("outcome {} rounds={} n={}", t.outcome, t.rounds_used(), s.len());
            for r in &t.rounds {
                for v in &r.events.violations {
                    eprintln!("round {}: violation {v}", r.start.round + 1);
                }
            }
            if t.outcome == Outcome::Solved {
                Ok(())
            } else {
                Err(Failure::Failed)
            }
        }
        Command::Verify { trace } => {
            let tf = TraceFile::read(&trace)?;
            let report = verify(&tf);
            print!("{report}");
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Failed)
            }
        }
        Command::Render { trace, dir } => {
            let tf = TraceFile::read(&trace)?;
            let files = render_trace(&tf, &dir)?;
            println!("wrote {} frames to {}", files.len(), dir.display());
            Ok(())
        }
    }
}
