use clap::{Parser, Subcommand};

use aeppli::cli::{self, Format, RunConfig};

/// Cohomological and metric structure computations on invariant-form models
/// of compact complex manifolds.
#[derive(Parser)]
#[command(name = "aeppli", version, about)]
struct Args {
    #[command(subcommand)]
    command: Command,

    /// Random seed for sampled checks.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    /// Twist parameters h (comma separated, nonzero).
    #[arg(long, global = true, value_delimiter = ',', num_args = 1..)]
    h: Vec<f64>,

    /// Degrees p for the (p,p) structure kinds (defaults to 1 and n−1).
    #[arg(long, global = true, value_delimiter = ',')]
    p: Vec<usize>,

    /// Report-level residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Output format.
    #[arg(long, global = true, default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in model catalog.
    Catalog,
    /// Cohomology dimension tables of a model (all flavors).
    Cohomology { target: String },
    /// Check the ∂∂̄- and h-∂∂̄-lemmas, with witnesses on failure.
    LemmaCheck { target: String },
    /// Exact randomized verification of the chart contraction identities.
    VerifyLemma {
        /// Chart dimension (2..=4).
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Number of random trials.
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// The ω-minimal d-closed representative of the Gauduchon Aeppli class.
    MinimalRep { target: String },
    /// Check and search all structure kinds on a model.
    Structures { target: String },
    /// Audit the structure equivalences on a model.
    Audit { target: String },
    /// Co-polarised deformation subspace and condition comparisons.
    Copolarised { target: String },
    /// Weil-Petersson and period-map metrics on the co-polarised basis.
    WpMetrics { target: String },
    /// Deformation family experiments (catalog family or Maurer-Cartan).
    Deform {
        target: String,
        /// Half-width of the parameter grid.
        #[arg(long, default_value_t = 0.2)]
        t_max: f64,
        /// Number of grid points.
        #[arg(long, default_value_t = 9)]
        steps: usize,
        /// Maurer-Cartan solution order.
        #[arg(long, default_value_t = 2)]
        order: usize,
    },
}

fn main() {
    let args = Args::parse();
    let format = match args.format.as_str() {
        "tsv" => Format::Tsv,
        _ => Format::Json,
    };
    let mut cfg = RunConfig {
        seed: args.seed,
        p_list: args.p.clone(),
        tol: args.tol,
        format,
        ..Default::default()
    };
    if !args.h.is_empty() {
        cfg.h_list = args.h.clone();
    }

    let (name, target) = match &args.command {
        Command::Catalog => ("catalog", None),
        Command::Cohomology { target } => ("cohomology", Some(target.as_str())),
        Command::LemmaCheck { target } => ("lemma-check", Some(target.as_str())),
        Command::VerifyLemma { n, trials } => {
            cfg.chart_n = *n;
            cfg.trials = *trials;
            ("verify-lemma", None)
        }
        Command::MinimalRep { target } => ("minimal-rep", Some(target.as_str())),
        Command::Structures { target } => ("structures", Some(target.as_str())),
        Command::Audit { target } => ("audit", Some(target.as_str())),
        Command::Copolarised { target } => ("copolarised", Some(target.as_str())),
        Command::WpMetrics { target } => ("wp-metrics", Some(target.as_str())),
        Command::Deform { target, t_max, steps, order } => {
            cfg.t_max = *t_max;
            cfg.steps = *steps;
            cfg.order = *order;
            ("deform", Some(target.as_str()))
        }
    };

    let (report, code) = cli::run(name, target, &cfg);
    print!("{}", cli::render(&report, cfg.format));
    std::process::exit(code);
}
