//! Command-line front end: matching counts, the even/odd involution,
//! certification runs, exact Pfaffians, and the well-behaved embedding.
//!
//! Machine-readable output goes to stdout (JSON, or CSV for count
//! tables); diagnostics and timings go to stderr. Exit codes: 0 success,
//! 1 failed certification checks, 2 usage errors, 3 malformed matching
//! files.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use torus_match_core::{
    canonical_cycle, certify, count_table, embed_well_behaved, four_pfaffians, phi,
    vanishing_indices, CertifyOptions, Error, PerfectMatching, SampleSpec, TorusDims,
    DEFAULT_GUARD, LAYER_CONVENTION, ORIENTATION_FLIPS,
};

#[derive(Parser)]
#[command(
    name = "torus-match",
    version,
    about = "Perfect matchings of toroidal grids: counts, the even/odd involution, \
             certification, and exact Pfaffian cross-checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DimArgs {
    /// Number of rows (even, at least 4)
    #[arg(long)]
    m: usize,
    /// Number of columns (even, at least 4)
    #[arg(long)]
    n: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Count the perfect matchings of an m x n torus
    #[command(name = "enum")]
    Enumerate {
        #[command(flatten)]
        dims: DimArgs,
        /// Split counts by (h, v) profile cell
        #[arg(long)]
        by_profile: bool,
        /// Emit JSON (the default)
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// Emit CSV; only valid together with --by-profile
        #[arg(long)]
        csv: bool,
        /// Worker threads (default: all cores); output does not depend on it
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Apply the involution to a matching read from a file ("-" for stdin)
    Phi {
        /// Matching file in the canonical JSON format
        #[arg(long)]
        input: String,
        /// Also report the driving dicycle and the types involved
        #[arg(long)]
        trace: bool,
    },
    /// Run the full invariant suite and emit a certification report
    Certify {
        #[command(flatten)]
        dims: DimArgs,
        /// Worker threads (default: all cores); output does not depend on it
        #[arg(long)]
        threads: Option<usize>,
        /// Check this many seeded random matchings instead of the full
        /// enumeration (bypasses the guard)
        #[arg(long)]
        sample: Option<u64>,
        /// Seed for --sample
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compute the four exact Pfaffians and report the vanishing one
    Pfaffian {
        #[command(flatten)]
        dims: DimArgs,
    },
    /// Lift a matching to the torus four rows and four columns larger
    Embed {
        /// Matching file in the canonical JSON format ("-" for stdin)
        #[arg(long)]
        input: String,
    },
}

enum Failure {
    Usage(String),
    File(String),
    ChecksFailed,
    Internal(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::File(_) => 3,
            Failure::ChecksFailed => 1,
            Failure::Internal(_) => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::File(msg) => eprintln!("error: {msg}"),
                Failure::ChecksFailed => eprintln!("error: one or more checks failed"),
                Failure::Internal(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(failure.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Enumerate {
            dims,
            by_profile,
            json: _,
            csv,
            threads,
        } => run_enumerate(dims, by_profile, csv, threads),
        Command::Phi { input, trace } => run_phi(&input, trace),
        Command::Certify {
            dims,
            threads,
            sample,
            seed,
        } => run_certify(dims, threads, sample, seed),
        Command::Pfaffian { dims } => run_pfaffian(dims),
        Command::Embed { input } => run_embed(&input),
    }
}

fn parse_dims(args: &DimArgs) -> Result<TorusDims, Failure> {
    TorusDims::new(args.m, args.n).map_err(|e| Failure::Usage(e.to_string()))
}

/// Guard limit for exhaustive runs, overridable with TORUS_MATCH_GUARD.
fn guard_limit() -> Result<usize, Failure> {
    match std::env::var("TORUS_MATCH_GUARD") {
        Err(_) => Ok(DEFAULT_GUARD),
        Ok(raw) => raw.parse().map_err(|_| {
            Failure::Usage(format!(
                "TORUS_MATCH_GUARD must be a node-count limit, got {raw:?}"
            ))
        }),
    }
}

fn map_core_error(e: Error) -> Failure {
    match e {
        Error::InvalidDims { .. } | Error::GuardExceeded { .. } => Failure::Usage(e.to_string()),
        Error::Parse(_) => Failure::File(e.to_string()),
        other => Failure::Internal(other.to_string()),
    }
}

fn read_matching(input: &str) -> Result<PerfectMatching, Failure> {
    let text = if input == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::File(format!("failed to read stdin: {e}")))?;
        buf
    } else {
        fs::read_to_string(input)
            .map_err(|e| Failure::File(format!("failed to read {input}: {e}")))?
    };
    PerfectMatching::from_json(&text).map_err(|e| Failure::File(e.to_string()))
}

fn run_enumerate(
    dims: DimArgs,
    by_profile: bool,
    csv: bool,
    threads: Option<usize>,
) -> Result<(), Failure> {
    let d = parse_dims(&dims)?;
    if csv && !by_profile {
        return Err(Failure::Usage(
            "--csv applies only to --by-profile count tables".into(),
        ));
    }
    let table = count_table(d, guard_limit()?, threads).map_err(map_core_error)?;
    if by_profile {
        if csv {
            print!("{}", table.to_csv());
        } else {
            println!("{}", table.to_json());
        }
    } else {
        let totals = table.type_totals();
        println!(
            "{}",
            json!({
                "m": d.m(),
                "n": d.n(),
                "layer_convention": LAYER_CONVENTION,
                "total": table.total(),
                "types": totals,
            })
        );
    }
    Ok(())
}

fn run_phi(input: &str, trace: bool) -> Result<(), Failure> {
    let matching = read_matching(input)?;
    let cycle = canonical_cycle(&matching);
    let image = phi(&matching).map_err(map_core_error)?;
    if trace {
        let nodes: Vec<[usize; 2]> = cycle.nodes().iter().map(|v| [v.row, v.col]).collect();
        println!(
            "{}",
            json!({
                "input_type": matching.match_type().as_str(),
                "cycle": {
                    "nodes": nodes,
                    "type": cycle.cycle_type().as_str(),
                    "length": cycle.len(),
                },
                "output_type": image.match_type().as_str(),
                "result": serde_json::from_str::<serde_json::Value>(&image.to_json())
                    .expect("matching serialization is valid JSON"),
            })
        );
    } else {
        println!("{}", image.to_json());
    }
    Ok(())
}

fn run_certify(
    dims: DimArgs,
    threads: Option<usize>,
    sample: Option<u64>,
    seed: u64,
) -> Result<(), Failure> {
    let d = parse_dims(&dims)?;
    let opts = CertifyOptions {
        guard_limit: guard_limit()?,
        threads,
        samples: sample.map(|count| SampleSpec { count, seed }),
    };
    let report = certify(d, &opts).map_err(map_core_error)?;
    println!("{}", report.to_json());
    for (name, duration) in &report.timings {
        eprintln!("{name}: {duration:?}");
    }
    if report.all_passed {
        Ok(())
    } else {
        Err(Failure::ChecksFailed)
    }
}

fn run_pfaffian(dims: DimArgs) -> Result<(), Failure> {
    let d = parse_dims(&dims)?;
    let pfaffians = four_pfaffians(d);
    let zeros = vanishing_indices(&pfaffians);
    let entries: Vec<serde_json::Value> = ORIENTATION_FLIPS
        .iter()
        .zip(pfaffians.iter())
        .map(|((theta, tau), pf)| {
            json!({
                "theta": u8::from(*theta),
                "tau": u8::from(*tau),
                "value": pf.to_string(),
            })
        })
        .collect();
    let vanishing = if zeros.len() == 1 {
        let (theta, tau) = ORIENTATION_FLIPS[zeros[0]];
        json!({"index": zeros[0], "theta": u8::from(theta), "tau": u8::from(tau)})
    } else {
        serde_json::Value::Null
    };
    println!(
        "{}",
        json!({
            "m": d.m(),
            "n": d.n(),
            "layer_convention": LAYER_CONVENTION,
            "pfaffians": entries,
            "zero_count": zeros.len(),
            "vanishing": vanishing,
        })
    );
    Ok(())
}

fn run_embed(input: &str) -> Result<(), Failure> {
    let matching = read_matching(input)?;
    let lifted = embed_well_behaved(&matching).map_err(map_core_error)?;
    println!("{}", lifted.to_json());
    Ok(())
}
