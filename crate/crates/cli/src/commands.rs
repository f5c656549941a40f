use std::io::Write;
use std::path::PathBuf;

use evoforge::bench::{ga_throughput, run_experiment, ExperimentConfig};
use evoforge::foundry::{print_irace, EncodedAlgorithm, FastGaFoundry, IraceBinding};
use evoforge::mo::landscape::{
    adaptive_walk_length, autocorrelation, density_of_states, fitness_distance_correlation,
    random_walk,
};
use evoforge::param::Parameter;
use evoforge::problems::BitProblem;
use evoforge::{Objective, RngStream, Solution};

use crate::args::{help_text, parse, CliError, ParsedArgs};

const USAGE: &str = "usage: evoforge <run|irace-config|count|landscape|bench> [--flag=value ...]";

/// Run the subcommand named by `argv[0]`, writing results to `out` and
/// diagnostics to `err`.
pub fn dispatch(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let Some((cmd, rest)) = argv.split_first() else {
        return Err(CliError::Usage(USAGE.into()));
    };
    match cmd.as_str() {
        "run" => cmd_run(rest, out, err),
        "irace-config" => cmd_irace_config(rest, out),
        "count" => cmd_count(rest, out),
        "landscape" => cmd_landscape(rest, out),
        "bench" => cmd_bench(rest, out),
        "--help" | "-h" | "help" => {
            writeln!(out, "{USAGE}")?;
            Ok(())
        }
        other => Err(CliError::Usage(format!(
            "unknown command `{other}`\n{USAGE}"
        ))),
    }
}

/// One integer parameter per slot of `foundry`, named after the slot.
pub fn slot_parameters(foundry: &FastGaFoundry) -> Vec<Parameter> {
    foundry
        .slots()
        .iter()
        .map(|s| {
            let p = Parameter::integer(s.name(), 0)
                .help(format!(
                    "index into {} alternatives of `{}`",
                    s.size(),
                    s.name()
                ))
                .section("Operator Choice");
            if s.name() == "crossover" {
                p.flag('c')
            } else {
                p
            }
        })
        .collect()
}

fn parse_or_help(
    argv: &[String],
    params: &[Parameter],
    usage: &str,
    description: &str,
    out: &mut dyn Write,
) -> Result<Option<ParsedArgs>, CliError> {
    let args = parse(argv, params)?;
    if args.help {
        write!(out, "{}", help_text(usage, description, params))?;
        return Ok(None);
    }
    Ok(Some(args))
}

fn problems(spec: &str) -> Result<Vec<BitProblem>, CliError> {
    spec.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<BitProblem>()
                .map_err(|e| CliError::TypeMismatch {
                    flag: "problem".into(),
                    value: s.to_string(),
                    expected: format!("a problem such as onemax:n=100 ({e})"),
                })
        })
        .collect::<Result<Vec<_>, _>>()
        .and_then(|v| {
            if v.is_empty() {
                Err(CliError::MissingValue("problem".into()))
            } else {
                Ok(v)
            }
        })
}

fn run_parameters(foundry: &FastGaFoundry) -> Vec<Parameter> {
    let mut params = vec![
        Parameter::text("problem", "onemax:n=100")
            .help("problem(s), `;`-separated: onemax:n=N, leadingones:n=N, wmodel:n=N,m=M,mu=U[,rug=adjswap]")
            .section("Problem"),
        Parameter::integer("budget", 1000)
            .help("evaluations per run")
            .section("Problem"),
        Parameter::integer("runs", 1).help("runs per problem").section("Problem"),
        Parameter::integer("seed", 0)
            .help("master seed; run k uses stream (seed, k)")
            .section("Problem"),
        Parameter::integer("workers", 1)
            .help("threads evaluating each generation")
            .section("Execution"),
        Parameter::boolean("parallel-runs")
            .help("run independent runs concurrently")
            .section("Execution"),
        Parameter::text("out", "")
            .help("directory for per-run trajectory CSV files")
            .section("Execution"),
        Parameter::integer("target-buckets", 10)
            .help("ECDF buckets on the quality axis")
            .section("Performance"),
        Parameter::integer("budget-buckets", 10)
            .help("ECDF buckets on the evaluation axis")
            .section("Performance"),
    ];
    params.extend(slot_parameters(foundry));
    params
}

fn positive(args: &ParsedArgs, name: &str) -> Result<u64, CliError> {
    let v = args.count(name)?;
    if v == 0 {
        return Err(CliError::TypeMismatch {
            flag: name.into(),
            value: "0".into(),
            expected: "a positive integer".into(),
        });
    }
    Ok(v)
}

fn cmd_run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let foundry = FastGaFoundry::shipped();
    let params = run_parameters(&foundry);
    let Some(args) = parse_or_help(
        argv,
        &params,
        "usage: evoforge run [flags]",
        "Run one encoded FastGA on a benchmark and print its cost (-ECDF sum) as the last line.",
        out,
    )?
    else {
        return Ok(());
    };
    let problems = problems(args.text("problem")?)?;
    let mut indices = Vec::new();
    for s in foundry.slots() {
        indices.push(args.count(s.name())? as usize);
    }
    let encoding = EncodedAlgorithm(indices);
    let names: Vec<&str> = foundry.slots().iter().map(|s| s.name()).collect();
    encoding
        .validate(&foundry.sizes(), &names)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let workers = positive(&args, "workers")? as usize;
    let out_dir = args.text("out")?;
    let cfg = ExperimentConfig {
        runs: positive(&args, "runs")? as usize,
        seed: args.count("seed")?,
        budget: args.count("budget")?,
        target_buckets: positive(&args, "target-buckets")? as usize,
        budget_buckets: positive(&args, "budget-buckets")? as usize,
        parallel_runs: args.flag("parallel-runs")?,
        trajectory_dir: (!out_dir.is_empty()).then(|| PathBuf::from(out_dir)),
    };
    if let Some(dir) = &cfg.trajectory_dir {
        std::fs::create_dir_all(dir).map_err(|source| evoforge::Error::Io {
            path: dir.clone(),
            source,
        })?;
    }
    let make = || {
        let mut f = FastGaFoundry::shipped();
        f.workers = workers;
        f
    };
    let result = run_experiment(make, &encoding, &problems, &cfg)?;
    for r in &result.records {
        let best = r.best.map_or("none".to_string(), |b| b.to_string());
        writeln!(
            err,
            "run={} problem={} best={best} evaluations={}",
            r.run, r.problem, r.evaluations
        )?;
    }
    writeln!(out, "{}", result.cost)?;
    Ok(())
}

fn cmd_irace_config(argv: &[String], out: &mut dyn Write) -> Result<(), CliError> {
    let foundry = FastGaFoundry::shipped();
    let params = slot_parameters(&foundry);
    if parse_or_help(
        argv,
        &[],
        "usage: evoforge irace-config",
        "Print the irace parameter file for the `run` command.",
        out,
    )?
    .is_none()
    {
        return Ok(());
    }
    let slots = foundry.slots();
    let bindings: Vec<IraceBinding<'_>> = params
        .iter()
        .zip(slots.iter())
        .map(|(p, s)| IraceBinding::slot(p, *s))
        .collect();
    print_irace(&bindings, out)?;
    Ok(())
}

fn cmd_count(argv: &[String], out: &mut dyn Write) -> Result<(), CliError> {
    let params = [Parameter::boolean("list").help("print the size of every slot")];
    let Some(args) = parse_or_help(
        argv,
        &params,
        "usage: evoforge count [--list]",
        "Print the number of distinct algorithms the shipped foundry can assemble.",
        out,
    )?
    else {
        return Ok(());
    };
    let foundry = FastGaFoundry::shipped();
    if args.flag("list")? {
        for s in foundry.slots() {
            writeln!(out, "{}\t{}\t{}", s.name(), s.size(), s.labels().join(","))?;
        }
    }
    writeln!(out, "{}", foundry.design_space_size())?;
    Ok(())
}

fn cmd_landscape(argv: &[String], out: &mut dyn Write) -> Result<(), CliError> {
    let params = [
        Parameter::text("problem", "onemax:n=20").help("problem to analyse"),
        Parameter::integer("steps", 1000).help("random walk length for autocorrelation"),
        Parameter::integer("lag", 1).help("autocorrelation lag"),
        Parameter::integer("samples", 10_000).help("uniform samples for FDC and density of states"),
        Parameter::integer("restarts", 100).help("adaptive walks"),
        Parameter::integer("seed", 0),
    ];
    let Some(args) = parse_or_help(
        argv,
        &params,
        "usage: evoforge landscape [flags]",
        "Print landscape features as CSV.",
        out,
    )?
    else {
        return Ok(());
    };
    let problem = problems(args.text("problem")?)?.remove(0);
    let steps = positive(&args, "steps")? as usize;
    let lag = args.count("lag")? as usize;
    let samples = positive(&args, "samples")? as usize;
    let restarts = positive(&args, "restarts")? as usize;
    let seed = args.count("seed")?;
    if lag > steps {
        return Err(CliError::Usage(format!(
            "lag {lag} must be below steps + 1 = {}",
            steps + 1
        )));
    }
    let mut rng = RngStream::new(seed);
    let n = problem.dimension();
    let sample: Vec<_> = (0..samples)
        .map(|_| {
            let g = evoforge::ea::random_bits(n, &mut rng);
            let f = problem.evaluate(&g).map_err(evoforge::Error::from)?;
            Ok((g, f))
        })
        .collect::<Result<_, CliError>>()?;
    let fdc = fitness_distance_correlation(&sample, &problem.optimum_genotype())?;
    let start = Solution::new(evoforge::ea::random_bits(n, &mut rng));
    let walk = random_walk(&problem, &start, steps, &mut rng)?;
    let rho = autocorrelation(&walk.fitness, lag)?;
    let walks = adaptive_walk_length(&problem, restarts, &mut rng)?;
    let dos = density_of_states(&problem, samples, &mut rng)?;

    writeln!(out, "feature,value,sample_size,seed")?;
    writeln!(out, "fdc,{fdc},{samples},{seed}")?;
    writeln!(out, "autocorrelation_lag{lag},{rho},{steps},{seed}")?;
    writeln!(
        out,
        "adaptive_walk_length_mean,{},{restarts},{seed}",
        walks.mean()
    )?;
    let total = dos.total() as f64;
    for (level, count) in &dos.levels {
        writeln!(
            out,
            "density_of_states[{level}],{},{samples},{seed}",
            *count as f64 / total
        )?;
    }
    Ok(())
}

fn cmd_bench(argv: &[String], out: &mut dyn Write) -> Result<(), CliError> {
    let params = [
        Parameter::integer("n", 100).help("OneMax length"),
        Parameter::integer("mu", 10).help("parents"),
        Parameter::integer("lambda", 10).help("offspring per generation"),
        Parameter::integer("evaluations", 1_000_000).help("evaluations to time"),
        Parameter::integer("seed", 0),
    ];
    let Some(args) = parse_or_help(
        argv,
        &params,
        "usage: evoforge bench [flags]",
        "Time a (mu+lambda) GA on OneMax and report evaluations per second.",
        out,
    )?
    else {
        return Ok(());
    };
    let t = ga_throughput(
        positive(&args, "n")? as usize,
        positive(&args, "mu")? as usize,
        positive(&args, "lambda")? as usize,
        positive(&args, "evaluations")?,
        args.count("seed")?,
    )?;
    writeln!(
        out,
        "evaluations={} seconds={} evals_per_second={}",
        t.evaluations, t.seconds, t.per_second
    )?;
    Ok(())
}
