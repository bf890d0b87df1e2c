//! `ccma`: construct, optimize, run and check interpolation multiplication
//! algorithms over finite fields.
//!
//! Exit codes: 0 success, 1 verification or feasibility failure, 2 invalid
//! configuration, 3 search target not attained within the budget.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ccma::instance::{curve_feasibility, Algorithm, ComplexityReport};
use ccma::optimizer::{optimize, Criterion, Scope, Strategy};
use ccma::{CcmaInstance, CountRule, Curve, Elem, Error, Field, InstanceDocument, RunConfig};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "ccma", version, about = "Interpolation multiplication algorithms over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check whether a curve supports an algorithm for F_{q^n}.
    Feasibility {
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "auto")]
        curve: NamedCurve,
        /// Take field and curve from a run configuration instead.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build an instance from a run configuration and write its document.
    Construct {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Search for a basis of L(D) with lower scalar complexity.
    Optimize {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Search log (CSV); defaults to the output path with a `.log.csv` suffix.
        #[arg(long)]
        log: Option<PathBuf>,
        #[arg(long, value_enum)]
        criterion: Option<CriterionArg>,
        #[arg(long, value_enum)]
        scope: Option<ScopeArg>,
        #[arg(long, value_enum)]
        strategy: Option<StrategyArg>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        target: Option<usize>,
    },
    /// Multiply two elements of F_{q^n}, given by power-basis coordinate codes.
    Multiply {
        /// Run configuration or instance document.
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',')]
        x: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        y: Vec<u32>,
    },
    /// Check an instance against schoolbook multiplication.
    Verify {
        /// Run configuration or instance document.
        #[arg(long)]
        config: PathBuf,
        /// Check this many random pairs instead of all of them.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the complexity table of an instance.
    Report {
        /// Run configuration or instance document.
        #[arg(long)]
        config: PathBuf,
        /// Also write the table as CSV.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum NamedCurve {
    /// The projective line when n <= q/2 + 1, otherwise the case-study curve
    Auto,
    /// y^2 + y = x^3 + 1
    CaseStudy,
    /// y^2 + y = x^3 + 1 over F_2
    CaseStudyOverF2,
    Line,
}

#[derive(Clone, Copy, ValueEnum)]
enum CriterionArg {
    Zeros,
    Ones,
    #[value(name = "zeros+ones")]
    ZerosOnes,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    TdOnly,
    Joint,
    CodeFirst,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    ExhaustiveProjective,
    ExhaustiveScaled,
    GreedyMinweight,
    Hillclimb,
}

/// A failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }

    fn check(message: impl Into<String>) -> Failure {
        Failure { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::BoundViolated(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::config(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::check(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// An input file that is either a run configuration or an instance document.
enum Input {
    Config(RunConfig),
    Document(InstanceDocument),
}

fn load(path: &Path) -> Result<Input, Failure> {
    let text = read(path)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Failure::config(e.to_string()))?;
    if value.get("format").is_some() {
        Ok(Input::Document(InstanceDocument::from_json(&text)?))
    } else {
        Ok(Input::Config(RunConfig::from_json(&text)?))
    }
}

impl Input {
    fn instance(&self) -> Result<CcmaInstance, Failure> {
        Ok(match self {
            Input::Config(c) => c.build()?,
            Input::Document(d) => d.rebuild()?,
        })
    }

    fn count_rule(&self) -> CountRule {
        match self {
            Input::Config(c) => c.count_rule(),
            Input::Document(d) => d.count_rule,
        }
    }

    /// The algorithm to execute: stored matrices for documents.
    fn algorithm(&self) -> Result<Algorithm, Failure> {
        Ok(match self {
            Input::Config(c) => c.build()?.algorithm().clone(),
            Input::Document(d) => d.stored_algorithm()?,
        })
    }
}

fn field_of_order(q: u32) -> Result<Field, Failure> {
    let p = (2..=q).find(|d| q % d == 0).ok_or_else(|| Failure::config(format!("q = {q} is not a prime power")))?;
    let mut m = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        m += 1;
    }
    if r != 1 {
        return Err(Failure::config(format!("q = {q} is not a prime power")));
    }
    Ok(Field::make_extension(p, m, None)?)
}

fn feasibility(q: Option<u32>, n: usize, curve: NamedCurve, config: Option<&Path>, output: Option<&Path>) -> Outcome {
    let curve = match config {
        Some(path) => match load(path)? {
            Input::Config(c) => c.curve()?,
            Input::Document(d) => Curve::from_model(d.field.build()?, d.curve.clone())?,
        },
        None => {
            let q = match curve {
                NamedCurve::CaseStudyOverF2 => 2,
                _ => q.ok_or_else(|| Failure::config("--q is required without --config"))?,
            };
            let field = field_of_order(q)?;
            let small = 2 * n as u32 <= q + 2;
            match curve {
                NamedCurve::Line => Curve::projective_line(field),
                NamedCurve::Auto if small => Curve::projective_line(field),
                _ => Curve::weierstrass(field, [Elem(0), Elem(0), Elem(1), Elem(0), Elem(1)])?,
            }
        }
    };
    let report = curve_feasibility(&curve, n);
    let mut text = format!(
        "q = {}, n = {}, genus = {}: {}\n  rational places N1 = {}, places of degree n = {}, 2n+2g-2 = {}\n",
        report.q,
        report.n,
        report.genus,
        if report.feasible { "feasible" } else { "infeasible" },
        report.rational_places,
        report.degree_n_places,
        report.required
    );
    for note in &report.notes {
        text.push_str(&format!("  note: {note}\n"));
    }
    print!("{text}");
    if let Some(p) = output {
        write(p, &(serde_json::to_string_pretty(&report).expect("serializable") + "\n"))?;
    }
    Ok(if report.feasible { 0 } else { 1 })
}

fn construct(config: &Path, output: Option<&Path>) -> Outcome {
    let cfg = match load(config)? {
        Input::Config(c) => c,
        Input::Document(_) => return Err(Failure::config("construct needs a run configuration")),
    };
    let inst = cfg.build()?;
    let doc = InstanceDocument::new(&inst, cfg.count_rule(), None)?;
    emit(output, &(doc.to_json() + "\n"))?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn run_optimize(
    config: &Path,
    seed: Option<u64>,
    jobs: usize,
    output: Option<&Path>,
    log: Option<&Path>,
    criterion: Option<CriterionArg>,
    scope: Option<ScopeArg>,
    strategy: Option<StrategyArg>,
    budget: Option<u64>,
    target: Option<usize>,
) -> Outcome {
    let cfg = match load(config)? {
        Input::Config(c) => c,
        Input::Document(_) => return Err(Failure::config("optimize needs a run configuration")),
    };
    let mut search = match (&cfg.search, criterion, scope, strategy) {
        (Some(s), ..) => s.clone(),
        (None, Some(_), Some(_), Some(_)) => ccma::SearchConfig::new(Criterion::Zeros, Scope::Joint, Strategy::ExhaustiveProjective),
        (None, ..) => {
            return Err(Failure::config(
                "no search section in the configuration; pass --criterion, --scope and --strategy",
            ))
        }
    };
    search.count_rule = cfg.count_rule();
    if let Some(c) = criterion {
        search.criterion = match c {
            CriterionArg::Zeros => Criterion::Zeros,
            CriterionArg::Ones => Criterion::Ones,
            CriterionArg::ZerosOnes => Criterion::ZerosOnes,
        };
    }
    if let Some(s) = scope {
        search.scope = match s {
            ScopeArg::TdOnly => Scope::TdOnly,
            ScopeArg::Joint => Scope::Joint,
            ScopeArg::CodeFirst => Scope::CodeFirst,
        };
    }
    if let Some(s) = strategy {
        search.strategy = match s {
            StrategyArg::ExhaustiveProjective => Strategy::ExhaustiveProjective,
            StrategyArg::ExhaustiveScaled => Strategy::ExhaustiveScaled,
            StrategyArg::GreedyMinweight => Strategy::GreedyMinweight,
            StrategyArg::Hillclimb => Strategy::Hillclimb,
        };
    }
    if let Some(s) = seed {
        search.seed = s;
    }
    if let Some(b) = budget {
        search.budget = b;
    }
    if target.is_some() {
        search.target = target;
    }
    if jobs == 0 {
        return Err(Failure::config("--jobs must be at least 1"));
    }
    let inst = cfg.build()?;
    let result = optimize(&inst, &search, jobs)?;
    let doc = InstanceDocument::new(&result.instance, search.count_rule, Some(&result))?;
    emit(output, &(doc.to_json() + "\n"))?;
    let log_path = log.map(Path::to_path_buf).or_else(|| output.map(|p| p.with_extension("log.csv")));
    if let Some(p) = log_path {
        write(&p, &result.log_csv())?;
    }
    let r = &result.report;
    eprintln!(
        "evaluated {} candidates{}; N_z(T_D) = {} (bound {}), N_z(R) = {}, mu_s = {}, mu_s0 = {}, mu_s1 = {}",
        result.candidates_evaluated,
        if result.budget_exhausted { " (budget exhausted)" } else { "" },
        r.nz_td,
        result.nz_bound,
        r.nz_r,
        r.mu_s,
        r.mu_s0,
        r.mu_s1
    );
    if let Some(b) = result.reference_beaten {
        eprintln!("reference {} beaten: {b}", search.reference.unwrap_or_default());
    }
    match result.target_met {
        Some(false) => {
            eprintln!("target {} not attained", search.target.unwrap_or_default());
            Ok(3)
        }
        _ => Ok(0),
    }
}

fn parse_vector(codes: &[u32], alg: &Algorithm, name: &str) -> Result<Vec<Elem>, Failure> {
    if codes.len() != alg.n() {
        return Err(Failure::config(format!("--{name} needs {} coordinates", alg.n())));
    }
    codes
        .iter()
        .map(|&c| alg.field().elem(c).map_err(Failure::from))
        .collect()
}

fn multiply(config: &Path, x: &[u32], y: &[u32]) -> Outcome {
    let input = load(config)?;
    let alg = input.algorithm()?;
    let a = parse_vector(x, &alg, "x")?;
    let b = parse_vector(y, &alg, "y")?;
    let (_, counts) = alg.instrumented_multiply(&alg.from_power(&a), &alg.from_power(&b));
    let z = alg.multiply_power(&a, &b);
    let codes: Vec<String> = z.iter().map(|e| e.0.to_string()).collect();
    println!("{}", codes.join(","));
    eprintln!(
        "scalar {}, bilinear {}, additions {}",
        counts.scalar, counts.bilinear, counts.additions
    );
    Ok(0)
}

fn verify(config: &Path, random: Option<usize>, seed: u64) -> Outcome {
    let input = load(config)?;
    let mut failed = false;
    if let Input::Document(d) = &input {
        for diff in d.verify()? {
            println!("FAIL {diff}");
            failed = true;
        }
    }
    let alg = input.algorithm()?;
    let (label, mismatch) = match random {
        Some(k) => (format!("{k} random pairs"), alg.find_mismatch(alg.random_pairs(k, seed))),
        None => {
            let total = (alg.field().order() as u64).pow(2 * alg.n() as u32);
            (format!("{total} pairs"), alg.find_mismatch(alg.all_pairs()))
        }
    };
    match mismatch {
        Some(m) => {
            let fmt = |v: &[Elem]| v.iter().map(|e| e.0.to_string()).collect::<Vec<_>>().join(",");
            println!(
                "FAIL product of [{}] and [{}]: got [{}], expected [{}] (pair {})",
                fmt(&m.x),
                fmt(&m.y),
                fmt(&m.got),
                fmt(&m.want),
                m.checked
            );
            failed = true;
        }
        None => println!("PASS {label} agree with schoolbook multiplication"),
    }
    Ok(if failed { 1 } else { 0 })
}

const COLUMNS: &str = "row,n,N,nz_td,nz_r,n1_td,n1_r,mu_s,mu_s0,mu_s1,mu_b,mu_m,mu_s_ua,mu_s_ur,additions";

fn csv_row(name: &str, m: &ComplexityReport) -> String {
    format!(
        "{name},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        m.n, m.big_n, m.nz_td, m.nz_r, m.n1_td, m.n1_r, m.mu_s, m.mu_s0, m.mu_s1, m.mu_b, m.mu_m, m.mu_s_ua, m.mu_s_ur, m.additions
    )
}

fn report(config: &Path, output: Option<&Path>) -> Outcome {
    let input = load(config)?;
    let inst = input.instance()?;
    let m = inst.algorithm().metrics(input.count_rule());
    let g = inst.curve().genus() as usize;
    let worst = 3 * m.n * (2 * m.n + g - 1);
    println!("n = {}, N = {}, genus = {g}", m.n, m.big_n);
    println!("{:>10} {:>4} {:>4}", "", "T_D", "R");
    println!("{:>10} {:>4} {:>4}", "zeros", m.nz_td, m.nz_r);
    println!("{:>10} {:>4} {:>4}", "ones", m.n1_td, m.n1_r);
    println!(
        "mu_s = {}, mu_s0 = {}, mu_s1 = {}, mu_b = {}, mu_m = {}",
        m.mu_s, m.mu_s0, m.mu_s1, m.mu_b, m.mu_m
    );
    println!("mu_s(U_A) = {}, mu_s(U_R) = {}, additions = {}", m.mu_s_ua, m.mu_s_ur, m.additions);
    println!("worst case: mu_s <= 3n(2n+g-1) = {worst}");
    if let Some(p) = output {
        let mut csv = format!("{COLUMNS}\n{}\n", csv_row("instance", &m));
        csv.push_str(&format!("worst-case,{},{},0,0,0,0,{worst},{worst},{worst},{},{},,,\n", m.n, m.big_n, m.mu_b, worst + m.mu_b));
        write(p, &csv)?;
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Feasibility { q, n, curve, config, output } => {
            feasibility(q, n, curve, config.as_deref(), output.as_deref())
        }
        Command::Construct { config, output } => construct(&config, output.as_deref()),
        Command::Optimize { config, seed, jobs, output, log, criterion, scope, strategy, budget, target } => run_optimize(
            &config,
            seed,
            jobs,
            output.as_deref(),
            log.as_deref(),
            criterion,
            scope,
            strategy,
            budget,
            target,
        ),
        Command::Multiply { config, x, y } => multiply(&config, &x, &y),
        Command::Verify { config, random, seed } => verify(&config, random, seed),
        Command::Report { config, output } => report(&config, output.as_deref()),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
