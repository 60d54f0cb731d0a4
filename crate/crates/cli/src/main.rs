mod parse;

use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use factormap::oracle::{json, CampaignConfig, CampaignReport, Suite};
use factormap::sampling::case_rng;
use factormap::{
    factor_map, lift, orbit_equivalent, orbit_equivalent_via_pi0, random_group_element, GroupElement64,
    Point3C64, SolverConfig, Target64,
};
use serde_json::{json, Value};

/// Evaluate, invert and verify the factorization map of G(1,1,n).
///
/// Tuples are written as `re,imi` entries separated by `;`, for example
/// `"1,0i; 0,1i; 2,0i"`. Targets end with a real entry: `"0,0i; 0,0i; -4"`.
#[derive(Parser, Debug)]
#[command(name = "factormap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate F at a w-frame point.
    Eval {
        #[command(flatten)]
        n: Degree,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Decide whether two points lie in the same orbit.
    Equiv {
        #[command(flatten)]
        n: Degree,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Construct a point in the fiber of F over a target.
    Lift {
        #[command(flatten)]
        n: Degree,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
    },
    /// Print random points of the orbit of a point.
    SampleOrbit {
        #[command(flatten)]
        n: Degree,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run randomized verification campaigns.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct Degree {
    /// Exponent n of the group action.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Exponents to test, comma separated. Defaults to 1,2,3,5.
    #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u32).range(1..))]
    n: Vec<u32>,
    /// `all` or one suite name.
    #[arg(long, default_value = "all", value_parser = suite_name)]
    suite: String,
    /// Samples per exponent.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// θ-grid size for the brute-force orbit distance.
    #[arg(long, default_value_t = 2048)]
    grid: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Report elapsed_ms as 0 so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

fn suite_name(s: &str) -> Result<String, String> {
    if s == "all" || Suite::from_name(s).is_some() {
        return Ok(s.to_string());
    }
    let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
    Err(format!("unknown suite `{s}`; expected all, {}", names.join(", ")))
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Parse(#[from] parse::ParseError),
    #[error(transparent)]
    Core(#[from] factormap::Error),
}

struct Output {
    body: String,
    passed: bool,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, passed: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.body.as_bytes());
            if out.passed {
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

fn run(cli: &Cli) -> Result<Output, CliError> {
    let fmt = cli.format;
    match &cli.command {
        Command::Eval { n, point } => {
            let w = parse::point(point)?;
            Ok(Output::ok(eval(&w, n.n, fmt)?))
        }
        Command::Equiv { n, x, y, tol } => {
            let (x, y) = (parse::point(x)?, parse::point(y)?);
            Ok(Output::ok(equiv(&x, &y, n.n, *tol, fmt)?))
        }
        Command::Lift { n, target } => {
            let t = parse::target(target)?;
            Ok(Output::ok(lift_target(&t, n.n, fmt)?))
        }
        Command::SampleOrbit { n, point, samples, seed } => {
            let w = parse::point(point)?;
            Ok(Output::ok(sample_orbit(&w, n.n, *samples, *seed, fmt)?))
        }
        Command::Verify(args) => verify(args, fmt),
    }
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("values serialize");
    s.push('\n');
    s
}

/// Shortest round-trip form, shared with the JSON output.
fn num(x: f64) -> String {
    Value::from(x).to_string()
}

fn eval(w: &Point3C64, n: u32, fmt: Format) -> Result<String, CliError> {
    let t = factor_map(w, n)?;
    Ok(match fmt {
        Format::Json => to_json(&json::target(&t)),
        Format::Csv => format!(
            "a_re,a_im,b_re,b_im,c\n{},{},{},{},{}\n",
            num(t.a.re),
            num(t.a.im),
            num(t.b.re),
            num(t.b.im),
            num(t.c)
        ),
    })
}

fn equiv(x: &Point3C64, y: &Point3C64, n: u32, tol: f64, fmt: Format) -> Result<String, CliError> {
    let fx = factor_map(x, n)?;
    let distance = factor_map(y, n)?.relative_error(&fx);
    let equivalent = orbit_equivalent(x, y, n, tol)?;
    let pi0_route = orbit_equivalent_via_pi0(x, y, n, tol)?;
    Ok(match fmt {
        Format::Json => to_json(&json!({
            "equivalent": equivalent,
            "pi0_route": pi0_route,
            "distance": distance,
            "tol": tol,
        })),
        Format::Csv => format!("equivalent,pi0_route,distance,tol\n{equivalent},{pi0_route},{},{}\n", num(distance), num(tol)),
    })
}

fn lift_target(t: &Target64, n: u32, fmt: Format) -> Result<String, CliError> {
    let w = lift(t, n, &SolverConfig::default())?;
    let residual = factor_map(&w, n)?.relative_error(t);
    Ok(match fmt {
        Format::Json => to_json(&json!({ "point": json::point(&w), "residual": residual })),
        Format::Csv => {
            let mut s = String::from("w1_re,w1_im,w2_re,w2_im,w3_re,w3_im,residual\n");
            for z in &w.c {
                let _ = write!(s, "{},{},", num(z.re), num(z.im));
            }
            let _ = writeln!(s, "{}", num(residual));
            s
        }
    })
}

fn sample_orbit(w: &Point3C64, n: u32, samples: usize, seed: u64, fmt: Format) -> Result<String, CliError> {
    const ORBIT_STREAM: u8 = 0xff;
    let mut rows = Vec::with_capacity(samples);
    for i in 0..samples {
        let g: GroupElement64 = random_group_element(&mut case_rng(seed, ORBIT_STREAM, n, i as u64));
        rows.push((g, g.act_w(w, n)?));
    }
    Ok(match fmt {
        Format::Json => {
            let points: Vec<Value> = rows
                .iter()
                .map(|(g, p)| json!({ "g": json::group(g), "point": json::point(p) }))
                .collect();
            to_json(&json!({ "n": n, "seed": seed, "base": json::point(w), "orbit": points }))
        }
        Format::Csv => {
            let mut s = String::from("theta,tau,w1_re,w1_im,w2_re,w2_im,w3_re,w3_im\n");
            for (g, p) in &rows {
                let _ = write!(s, "{},{}", num(g.theta()), g.is_reflection());
                for z in &p.c {
                    let _ = write!(s, ",{},{}", num(z.re), num(z.im));
                }
                s.push('\n');
            }
            s
        }
    })
}

fn verify(args: &VerifyArgs, fmt: Format) -> Result<Output, CliError> {
    let mut cfg = CampaignConfig {
        samples: args.samples,
        seed: args.seed,
        grid_size: args.grid,
        tol: args.tol,
        ..CampaignConfig::default()
    };
    if !args.n.is_empty() {
        cfg.n_values = args.n.clone();
    }
    cfg.validate()?;

    let suites: Vec<Suite> = match Suite::from_name(&args.suite) {
        Some(s) => vec![s],
        None => Suite::ALL.to_vec(),
    };
    let mut reports = suites.iter().map(|s| s.run(&cfg)).collect::<factormap::Result<Vec<_>>>()?;
    if args.no_timing {
        for r in &mut reports {
            r.elapsed_ms = 0;
        }
    }
    let passed = reports.iter().all(|r| r.passed);

    let body = match fmt {
        Format::Json if reports.len() == 1 => to_json(&serde_json::to_value(&reports[0]).expect("report serializes")),
        Format::Json => to_json(&aggregate(&cfg, &reports)),
        Format::Csv => {
            let mut s = String::from("suite,check,threshold,strict,evaluated,failures,max_residual\n");
            for r in &reports {
                for c in &r.checks {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{},{}",
                        r.suite,
                        c.name,
                        num(c.threshold),
                        c.strict,
                        c.evaluated,
                        c.failures,
                        num(c.max_residual)
                    );
                }
            }
            s
        }
    };
    Ok(Output { body, passed })
}

fn aggregate(cfg: &CampaignConfig, reports: &[CampaignReport]) -> Value {
    let failures: Vec<Value> = reports
        .iter()
        .flat_map(|r| {
            r.failures.iter().map(move |f| {
                let mut v = serde_json::to_value(f).expect("failure serializes");
                v["suite"] = json!(r.suite);
                v
            })
        })
        .collect();
    let max_residual = reports.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    json!({
        "suite": "all",
        "n": cfg.n_values,
        "samples": cfg.samples,
        "seed": cfg.seed,
        "passed": reports.iter().all(|r| r.passed),
        "failures": failures,
        "max_residual": max_residual,
        "elapsed_ms": reports.iter().map(|r| r.elapsed_ms).sum::<u64>(),
        "reports": reports,
    })
}
