use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use valtower::genseq::Family;
use valtower::monomial::Matrix2;
use valtower::report::{self, Format, RunConfig, JOBS_ENV};
use valtower::values::Value;

#[derive(Parser)]
#[command(name = "valtower", version, about = "Valuations on 2D regular local rings over finite fields")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    #[arg(long, global = true, default_value_t = 2)]
    p: u64,
    /// Defaults to p - 1.
    #[arg(long, global = true)]
    c: Option<u64>,
    /// Defaults to p.
    #[arg(long, global = true)]
    q: Option<u64>,
    #[arg(long, global = true, default_value_t = 3)]
    levels: usize,
    /// Semigroup bound, an exact fraction.
    #[arg(long, global = true, default_value = "10")]
    bound: Value,
    /// Series precision; derived per check when omitted.
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 200)]
    samples: usize,
    #[arg(long, global = true, default_value = "tsv")]
    format: Format,
    #[arg(long, global = true, env = JOBS_ENV)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Value of a polynomial under a family's valuation.
    Value {
        #[arg(long, default_value = "Q")]
        family: Family,
        poly: String,
    },
    /// Value semigroup up to --bound.
    Semigroup {
        #[arg(long, default_value = "Q")]
        family: Family,
    },
    /// Validity table of a family's generating sequence.
    Validate {
        #[arg(long, default_value = "Q")]
        family: Family,
    },
    /// Composite quadratic transforms with round-trip checks.
    Transform {
        #[arg(long, default_value = "Q")]
        family: Family,
    },
    /// Alternation table of the tower.
    Tower,
    /// Index, Smith form and substitution word of an exponent matrix.
    Monomialize {
        #[arg(long)]
        matrix: Matrix2,
    },
    /// All tower verifications.
    Report,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let c = &cli.common;
    if let Some(j) = c.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let cfg = RunConfig {
        p: c.p,
        c: c.c.unwrap_or(c.p.saturating_sub(1)),
        q: c.q.unwrap_or(c.p),
        levels: c.levels,
        bound: c.bound.clone(),
        precision: c.precision,
        seed: c.seed,
        samples: c.samples,
        format: c.format,
    };
    let result = match &cli.cmd {
        Cmd::Value { family, poly } => report::value_report(&cfg, *family, poly),
        Cmd::Semigroup { family } => report::semigroup_report(&cfg, *family),
        Cmd::Validate { family } => report::validate_report(&cfg, *family),
        Cmd::Transform { family } => report::transform_report(&cfg, *family),
        Cmd::Tower => report::tower_report(&cfg),
        Cmd::Monomialize { matrix } => report::monomialize_report(&cfg, matrix),
        Cmd::Report => report::suite_report(&cfg),
    };
    match result {
        Ok(r) => {
            print!("{}", r.render(cfg.format));
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
