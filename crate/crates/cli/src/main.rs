use std::path::PathBuf;
use std::process::ExitCode;

use circlelab::lab::{exit_code, run_experiment, LabConfig, Params, EXPERIMENTS};
use circlelab::zoo::{from_ref, ZOO_REFS};
use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "circlelab", version, about = "Experiments on groups of projective circle maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Uniform expansion constants on a grid
    Constants(Common),
    /// Greedy lines of expansion and their quasi-geodesic audit
    Line(Common),
    /// Convergence of pairs of lines of expansion
    Converge(Common),
    /// Quasi-isometry of the expansion graph
    GammaGraph(Common),
    /// Thin-triangle constant of a ball
    Hyperbolicity(Common),
    /// Covering degree of the boundary map
    BoundaryDegree(Common),
    /// Near-identity search and discreteness verdict
    Discreteness(Common),
    /// Schwarzian derivative of the generators
    Schwarzian(Common),
    /// Koebe distortion on sampled words
    Koebe(Common),
    /// List the built-in groups
    ZooList {
        /// Print the group file of this reference instead
        #[arg(long)]
        export: Option<String>,
    },
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Group file path or `zoo:REF`
    #[arg(long)]
    group: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for the CSV and JSON report; CSV goes to stdout otherwise
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores)
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Use every element of norm at most this as a generator
    #[arg(long)]
    enrich: Option<u32>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    radius: Option<u32>,
    /// Comma-separated increasing radii
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<u32>>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    length: Option<usize>,
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long)]
    max_depth: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    directions: Option<usize>,
    #[arg(long)]
    threshold: Option<f64>,
    /// Rate of the lines of expansion
    #[arg(long)]
    c: Option<f64>,
    /// Probe interval as LO,HI
    #[arg(long, value_delimiter = ',', num_args = 2)]
    interval: Option<Vec<f64>>,
    /// Log-derivative band as A,B
    #[arg(long, value_delimiter = ',', num_args = 2, allow_negative_numbers = true)]
    band: Option<Vec<f64>>,
    #[arg(long)]
    words: Option<usize>,
    #[arg(long)]
    word_length: Option<usize>,
}

impl Common {
    fn config(&self) -> LabConfig {
        let pair = |v: &Option<Vec<f64>>| v.as_ref().map(|v| (v[0], v[1]));
        LabConfig {
            group: self.group.clone(),
            seed: self.seed,
            params: Params {
                enrich: self.enrich,
                grid: self.grid,
                radius: self.radius,
                radii: self.radii.clone(),
                points: self.points,
                length: self.length,
                depth: self.depth,
                max_depth: self.max_depth,
                trials: self.trials,
                directions: self.directions,
                threshold: self.threshold,
                c: self.c,
                interval: pair(&self.interval),
                band: pair(&self.band),
                words: self.words,
                word_length: self.word_length,
            },
        }
    }
}

fn schema_help(name: &str, columns: &[&str]) -> String {
    format!("CSV columns of `{name}`:\n  config_hash,version,{}", columns.join(","))
}

fn run(name: &str, args: &Common) -> u8 {
    let config = args.config();
    let result = circlelab::par::with_threads(args.threads, || run_experiment(&config, name));
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e) as u8;
        }
    };
    match &args.out {
        Some(dir) => {
            if let Err(e) = report.write(dir) {
                eprintln!("error: {e}");
                return exit_code(&e) as u8;
            }
        }
        None => print!("{}", report.csv),
    }
    for c in &report.checks {
        let status = if c.pass { "ok" } else { "FAIL" };
        eprintln!("{status} {}: expected {}, observed {}", c.name, c.expected, c.observed);
    }
    eprintln!("{}", report.summary);
    if report.passed() {
        0
    } else {
        1
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let mut cmd = Cli::command();
    for (name, _, columns) in EXPERIMENTS {
        cmd = cmd.mut_subcommand(*name, |s| s.after_help(schema_help(name, columns)));
    }
    let cli = match cmd.try_get_matches().and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let code = match &cli.command {
        Command::Constants(a) => run("constants", a),
        Command::Line(a) => run("line", a),
        Command::Converge(a) => run("converge", a),
        Command::GammaGraph(a) => run("gamma-graph", a),
        Command::Hyperbolicity(a) => run("hyperbolicity", a),
        Command::BoundaryDegree(a) => run("boundary-degree", a),
        Command::Discreteness(a) => run("discreteness", a),
        Command::Schwarzian(a) => run("schwarzian", a),
        Command::Koebe(a) => run("koebe", a),
        Command::ZooList { export: Some(r) } => match from_ref(r.strip_prefix("zoo:").unwrap_or(r)) {
            Ok(spec) => {
                println!("{}", circlelab::lab::export_group(&spec));
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                exit_code(&e) as u8
            }
        },
        Command::ZooList { export: None } => {
            for (r, description) in ZOO_REFS {
                println!("zoo:{r}\t{description}");
            }
            0
        }
    };
    ExitCode::from(code)
}
