use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use wittforge::api::{self, Output};
use wittforge::sampling::{parse_seed, rng_for, seed_from_env};
use wittforge::witt::random_vector;
use wittforge::{Ring, Strategy};

#[derive(Parser)]
#[command(name = "wittforge", version, about = "Exact Witt vector, prism and coequalizer computations over finite rings")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Sampling seed (decimal or 0x-hex); overrides WITTFORGE_SEED.
    #[arg(long, global = true, value_parser = seed_arg)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn seed_arg(s: &str) -> Result<u64, String> {
    parse_seed(s).ok_or_else(|| format!("invalid seed {s:?}"))
}

#[derive(Subcommand)]
enum Cmd {
    /// Witt vector arithmetic.
    #[command(subcommand)]
    Witt(WittCmd),
    /// Points of the economic presentation and the group action.
    #[command(subcommand)]
    Sigma(SigmaCmd),
    /// The coequalizer of the toy model.
    #[command(subcommand)]
    Coeq(CoeqCmd),
    /// Toy categories.
    #[command(subcommand)]
    Toy(ToyCmd),
    /// q-de Rham and Lubin-Tate prisms.
    #[command(subcommand)]
    Prism(PrismCmd),
    /// The check registry.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Timings.
    #[command(subcommand)]
    Bench(BenchCmd),
}

#[derive(Subcommand)]
enum WittCmd {
    /// Apply add, sub, mul, neg, frob, ver or inv.
    Eval {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        op: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: Option<String>,
        /// Length; shorter inputs are padded with zeros.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        degree: i64,
        #[arg(long, default_value = "auto")]
        strategy: String,
    },
    /// Ghost components.
    Ghost {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        vec: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        degree: i64,
    },
    /// Lift a ghost sequence satisfying the Dwork congruences.
    Dwork {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        ghost: String,
        /// Image of the ring variable under the Frobenius lift; default t^p.
        #[arg(long)]
        phi: Option<String>,
    },
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    ring: String,
    #[arg(long)]
    v: String,
    #[arg(long)]
    zeta: String,
    /// Defaults to 1.
    #[arg(long)]
    gamma: Option<String>,
}

#[derive(Subcommand)]
enum SigmaCmd {
    Classify(PointArgs),
    Act {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long)]
        alpha: String,
        /// Defaults to 1 - [v^p] alpha.
        #[arg(long)]
        w: Option<String>,
    },
    Fprime(PointArgs),
}

#[derive(Subcommand)]
enum CoeqCmd {
    /// One hom-set, e.g. --src "(1,0)" --dst "(0,1)" --degree -1.
    Homs {
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long)]
        src: String,
        #[arg(long)]
        dst: String,
        #[arg(long, allow_hyphen_values = true)]
        degree: i64,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
    /// All nonempty hom-sets in a range of degrees.
    Count {
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        min_degree: i64,
        #[arg(long, default_value_t = 3)]
        max_degree: i64,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
}

#[derive(Subcommand)]
enum ToyCmd {
    Gamma2 {
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        max_degree: i64,
    },
}

#[derive(Args)]
struct PrismArgs {
    /// qde, lt or econ.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    p: u64,
    /// p-adic precision.
    #[arg(long, default_value_t = 4)]
    k: u32,
    /// Variable order.
    #[arg(long, default_value_t = 4)]
    m: usize,
    /// The unit of the Lubin-Tate and economic models.
    #[arg(long, allow_hyphen_values = true)]
    u: Option<i64>,
}

#[derive(Subcommand)]
enum PrismCmd {
    Make(PrismArgs),
    Delta {
        #[command(flatten)]
        prism: PrismArgs,
        #[arg(long)]
        a: String,
    },
    Split {
        #[command(flatten)]
        prism: PrismArgs,
        #[arg(long)]
        a: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    Check {
        #[command(flatten)]
        prism: PrismArgs,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Run checks by id or glob.
    Run { pattern: String },
    /// List checks whose module or id matches the filter.
    List { filter: Option<String> },
}

#[derive(Subcommand)]
enum BenchCmd {
    /// Compare Witt multiplication strategies on the same random inputs.
    Strategies {
        #[arg(long, default_value = "Zmod(3^4)[t]/(t^3)")]
        ring: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

fn bench(ring: &str, n: usize, samples: usize, seed: u64) -> wittforge::Result<Output> {
    let r = Ring::parse(ring)?;
    let mut rng = rng_for(seed, "bench");
    let pairs: Vec<_> = (0..samples).map(|_| (random_vector(&r, n, 0, &mut rng), random_vector(&r, n, 0, &mut rng))).collect();
    let strategies = [Strategy::Universal, Strategy::Ghost, Strategy::Differential];
    let reference: Vec<_> = pairs.iter().map(|(x, y)| x.mul_with(y, Strategy::Universal)).collect::<Result<_, _>>()?;
    for s in &strategies[1..] {
        for ((x, y), want) in pairs.iter().zip(&reference) {
            if x.mul_with(y, *s)? != *want {
                return Err(wittforge::Error::StrategyDisagreement(format!("{s:?} at {x} * {y}")));
            }
        }
    }
    let mut rows = Vec::new();
    let mut text = vec![format!("{samples} products in W_{n}({ring}), all strategies agree")];
    for s in strategies {
        let start = Instant::now();
        for (x, y) in &pairs {
            x.mul_with(y, s)?;
        }
        let micros = start.elapsed().as_micros() as u64;
        text.push(format!("{:<12} {micros:>10} us", format!("{s:?}").to_lowercase()));
        rows.push(json!({ "strategy": format!("{s:?}").to_lowercase(), "micros": micros }));
    }
    Ok(Output { json: json!({ "ring": ring, "n": n, "samples": samples, "agree": true, "timings": rows }), text: text.join("\n") })
}

fn dispatch(cmd: Cmd, seed: u64) -> wittforge::Result<(Output, bool)> {
    let ok = |o: Output| (o, true);
    Ok(match cmd {
        Cmd::Witt(WittCmd::Eval { ring, op, a, b, n, degree, strategy }) => ok(api::witt_eval(&ring, &op, &a, b.as_deref(), n, degree, &strategy)?),
        Cmd::Witt(WittCmd::Ghost { ring, vec, degree }) => ok(api::witt_ghost(&ring, &vec, degree)?),
        Cmd::Witt(WittCmd::Dwork { ring, ghost, phi }) => ok(api::witt_dwork(&ring, &ghost, phi.as_deref())?),
        Cmd::Sigma(SigmaCmd::Classify(pt)) => ok(api::sigma_classify(&pt.ring, &pt.v, &pt.zeta, pt.gamma.as_deref())?),
        Cmd::Sigma(SigmaCmd::Act { point: pt, alpha, w }) => {
            ok(api::sigma_act(&pt.ring, &pt.v, &pt.zeta, pt.gamma.as_deref(), &alpha, w.as_deref())?)
        }
        Cmd::Sigma(SigmaCmd::Fprime(pt)) => ok(api::sigma_fprime(&pt.ring, &pt.v, &pt.zeta, pt.gamma.as_deref())?),
        Cmd::Coeq(CoeqCmd::Homs { q, src, dst, degree, max_len }) => ok(api::coeq_homs(q, &src, &dst, degree, max_len)?),
        Cmd::Coeq(CoeqCmd::Count { q, min_degree, max_degree, max_len }) => ok(api::coeq_count(q, (min_degree, max_degree), max_len)?),
        Cmd::Toy(ToyCmd::Gamma2 { q, max_degree }) => ok(api::toy_gamma2(q, max_degree)?),
        Cmd::Prism(PrismCmd::Make(a)) => ok(api::prism_make(&a.kind, a.u, a.p, a.k, a.m)?),
        Cmd::Prism(PrismCmd::Delta { prism: a, a: x }) => ok(api::prism_delta(&a.kind, a.u, a.p, a.k, a.m, &x)?),
        Cmd::Prism(PrismCmd::Split { prism: a, a: x, n }) => ok(api::prism_split(&a.kind, a.u, a.p, a.k, a.m, &x, n)?),
        Cmd::Prism(PrismCmd::Check { prism: a, n }) => api::prism_check(&a.kind, a.u, a.p, a.k, a.m, n)?,
        Cmd::Check(CheckCmd::Run { pattern }) => api::check_run(&pattern, seed)?,
        Cmd::Check(CheckCmd::List { filter }) => ok(api::check_list(filter.as_deref(), seed)),
        Cmd::Bench(BenchCmd::Strategies { ring, n, samples }) => ok(bench(&ring, n, samples, seed)?),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = cli.seed.unwrap_or_else(seed_from_env);
    match dispatch(cli.cmd, seed) {
        Ok((out, passed)) => {
            let body = match cli.format {
                Format::Text => out.text,
                Format::Json => serde_json::to_string_pretty(&out.json).expect("values serialize"),
            };
            // a closed pipe (e.g. `| head`) is not an error worth reporting
            let _ = writeln!(std::io::stdout(), "{body}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
