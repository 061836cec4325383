use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use cosetlab::group::{Group, GroupSet, DEFAULT_SUBGROUP_BUDGET};
use cosetlab::report::StructureRepr;
use cosetlab::structure::{
    boolean_synthesis, theorem_a_search, wn_representation_verify, Synthesis,
    DEFAULT_SYNTH_SET_BUDGET,
};
use cosetlab::sweep::{analyze_instance, resolve_set, run_experiment};

#[derive(Parser)]
#[command(name = "cosetlab", version, about = "Finite-group sumset laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InstanceArgs {
    /// Group descriptor: cyclic:n, vector:p,d, dihedral:n, symmetric:m,
    /// product:<a>+<b>, table:<path>
    #[arg(long)]
    group: String,
    /// Element literal "0,1,6" or generator "gen:interval(5)"
    #[arg(long)]
    set: String,
    /// Seed for generator randomness
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Full growth/stability report for one instance
    Analyze {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Ladder rank cap for the stability profile
        #[arg(long, default_value_t = 4)]
        max_ladder: usize,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive coset-structure search (Pareto frontier and eps list)
    Structure {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Tolerance as a rational p/q for the ratio |A symdiff C'H| / |H|
        #[arg(long)]
        eps: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify an (r,k,l)-weakly-normal representation
    Rep {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        r: usize,
        /// Positive parts, each an element literal (repeatable)
        #[arg(long = "b")]
        b: Vec<String>,
        /// Complemented parts, each an element literal (repeatable)
        #[arg(long = "c")]
        c: Vec<String>,
    },
    /// Synthesize a target set from translates of A
    Synth {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Target set as an element literal
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 6)]
        max_complexity: usize,
    },
    /// Run a configuration-driven experiment sweep
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn resolve(args: &InstanceArgs) -> cosetlab::Result<(Arc<Group>, GroupSet)> {
    let group = Group::parse(&args.group)?;
    let set = resolve_set(&group, &args.set, args.seed)?;
    Ok((group, set))
}

fn parse_eps(text: &str) -> cosetlab::Result<num_rational::BigRational> {
    let err = || cosetlab::Error::InvalidParam(format!("eps {text:?}: expected p/q"));
    let (p, q) = text.split_once('/').ok_or_else(err)?;
    let p: u64 = p.trim().parse().map_err(|_| err())?;
    let q: u64 = q.trim().parse().map_err(|_| err())?;
    if q == 0 {
        return Err(err());
    }
    Ok(num_rational::BigRational::new(p.into(), q.into()))
}

fn emit(out: Option<&PathBuf>, bytes: &[u8]) -> cosetlab::Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes)?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> cosetlab::Result<ExitCode> {
    match cli.command {
        Command::Analyze {
            instance,
            max_ladder,
            out,
        } => {
            let (_, a) = resolve(&instance)?;
            let report = analyze_instance(
                "analyze",
                &instance.group,
                &instance.set,
                instance.seed,
                &a,
                max_ladder,
                None,
                &[],
                true,
            )?;
            emit(out.as_ref(), &report.to_bytes()?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Structure { instance, eps, out } => {
            let (_, a) = resolve(&instance)?;
            let eps = parse_eps(&eps)?;
            let found = theorem_a_search(&a, &eps, DEFAULT_SUBGROUP_BUDGET)?;
            let repr = |list: &[cosetlab::structure::CosetStructure]| {
                list.iter()
                    .map(StructureRepr::from_structure)
                    .collect::<cosetlab::Result<Vec<_>>>()
            };
            let value = serde_json::json!({
                "pareto": repr(&found.pareto)?,
                "within_eps": repr(&found.within_eps)?,
                "empirical_n": found.empirical_n,
            });
            let mut bytes = serde_json::to_vec_pretty(&value)?;
            bytes.push(b'\n');
            emit(out.as_ref(), &bytes)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Rep { instance, r, b, c } => {
            let (group, a) = resolve(&instance)?;
            let parse_sets = |texts: &[String]| {
                texts
                    .iter()
                    .map(|t| GroupSet::parse_literal(&group, t))
                    .collect::<cosetlab::Result<Vec<_>>>()
            };
            let cert = wn_representation_verify(&a, r, parse_sets(&b)?, parse_sets(&c)?)?;
            let value = serde_json::json!({
                "r": cert.r,
                "k": cert.k(),
                "l": cert.l(),
                "valid": cert.valid,
                "degrees_b": cert.degrees_b,
                "degrees_c": cert.degrees_c,
            });
            println!("{}", serde_json::to_string_pretty(&value)?);
            Ok(if cert.valid {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Synth {
            instance,
            target,
            max_complexity,
        } => {
            let (group, a) = resolve(&instance)?;
            let target = GroupSet::parse_literal(&group, &target)?;
            match boolean_synthesis(&target, &a, max_complexity, DEFAULT_SYNTH_SET_BUDGET)? {
                Synthesis::Found(expr) => {
                    println!("{expr}  (complexity {})", expr.complexity());
                    Ok(ExitCode::SUCCESS)
                }
                Synthesis::Exhausted { distinct_sets } => {
                    println!(
                        "no expression up to complexity {max_complexity}; \
                         {distinct_sets} distinct sets reached"
                    );
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        Command::Sweep { config, out_dir } => {
            Ok(ExitCode::from(run_experiment(&config, &out_dir) as u8))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
