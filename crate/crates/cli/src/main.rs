use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bd_lab_core::cantor::OdometerAlgebra;
use bd_lab_core::coeff::{Angle, CircleRotation, CoefficientAlgebra, FiniteCyclicShift};
use bd_lab_core::crossed::{CrossedProduct, StageAlgebra};
use bd_lab_core::invariants::{
    decide_amplification, decide_isomorphism, decide_simplicity_finite_model, decide_trace_uniqueness_finite_model,
    k0_limit_normalize, k0_positive, k0_tau_value, k1_limit_normalize, K0Class, SupernaturalNumber, ThetaEnclosure,
    DEFAULT_BUDGET,
};
use bd_lab_core::limits::{amplification_shuffle, amplify_angle, Gamma, StageSequence};
use bd_lab_core::scalar::Rational;
use bd_lab_core::suites::{run_suite, AlgebraChoice, Suite, SuiteConfig};
use bd_lab_core::{Error, Execution};

#[derive(Parser)]
#[command(name = "bd-lab", version, about = "Exact computations in generalized Bunce-Deddens algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and print its report.
    Verify(VerifyArgs),
    /// Apply a map to an element read as JSON.
    Apply(ApplyArgs),
    /// Print the normalized trace of a stage element: a rational string, or scalar terms.
    Trace(TraceArgs),
    /// Decide isomorphism, amplification and finite-model structure questions.
    Classify(ClassifyArgs),
    /// Print the K-theory normal forms of a sequence.
    Ktheory(KtheoryArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgebraKind {
    Circle,
    Cyclic,
}

#[derive(Args, Clone)]
struct AlgebraArgs {
    /// Coefficient algebra.
    #[arg(long, value_enum, default_value = "circle")]
    algebra: AlgebraKind,
    /// Rotation angle `q + r*theta` for the circle algebra.
    #[arg(long, default_value = "theta")]
    angle: String,
    /// Number of points for the cyclic algebra.
    #[arg(long, default_value_t = 2)]
    modulus: usize,
}

impl AlgebraArgs {
    fn choice(&self) -> Result<AlgebraChoice, Error> {
        Ok(match self.algebra {
            AlgebraKind::Circle => AlgebraChoice::Circle(self.angle.parse()?),
            AlgebraKind::Cyclic => AlgebraChoice::Cyclic(self.modulus),
        })
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, e.g. gamma-hom, rg, flip.
    suite: String,
    /// Stage sizes `1,n_2,...`, each dividing the next.
    #[arg(long, default_value = "1,2")]
    sizes: String,
    #[command(flatten)]
    algebra: AlgebraArgs,
    /// Fock truncation depth.
    #[arg(long)]
    depth: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random cases per parameter set.
    #[arg(long, default_value_t = 20)]
    count: usize,
    /// Weight periods for fock-blocks.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    periods: Vec<usize>,
    /// Amplification factor for the amplification suite.
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// Run cases one after another instead of in parallel.
    #[arg(long)]
    sequential: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapKind {
    Gamma,
    Rho,
    Shuffle,
    Psi,
}

#[derive(Args)]
struct ApplyArgs {
    map: MapKind,
    /// Element JSON file; stdin when absent or `-`.
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    algebra: AlgebraArgs,
    /// Source size for gamma.
    #[arg(long)]
    from: Option<u64>,
    /// Target size for gamma.
    #[arg(long)]
    to: Option<u64>,
    /// Stage sizes for rho and psi.
    #[arg(long, default_value = "1,2")]
    sizes: String,
    /// Stage of the input for rho.
    #[arg(long)]
    stage: Option<usize>,
    /// Block count for shuffle.
    #[arg(long)]
    p: Option<u64>,
    /// Block size for shuffle.
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    algebra: AlgebraArgs,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    angle1: Option<String>,
    /// Supernatural number (`2^inf*3`), JSON, or sizes with optional tail (`1,2,4;tail=2`).
    #[arg(long)]
    delta1: Option<String>,
    #[arg(long)]
    angle2: Option<String>,
    #[arg(long)]
    delta2: Option<String>,
    /// Replace the first algebra by its `p x p` matrix algebra.
    #[arg(long)]
    amplify: Option<u64>,
    /// Cyclic modulus for the finite-model deciders (with --sizes).
    #[arg(long)]
    modulus: Option<usize>,
    #[arg(long)]
    sizes: Option<String>,
}

#[derive(Args)]
struct KtheoryArgs {
    #[arg(long, default_value = "1,2")]
    sizes: String,
    /// Primes with infinite exponent beyond the listed sizes.
    #[arg(long, value_delimiter = ',')]
    tail: Option<Vec<u64>>,
    /// Stage of a class `(a, b)` to normalize.
    #[arg(long)]
    stage: Option<usize>,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    a: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    b: i64,
    /// Continued fraction of θ as `a0;prefix...;period...`, e.g. `0;;2` for √2 - 1.
    #[arg(long)]
    theta_cf: Option<String>,
    /// Interval width for the trace value.
    #[arg(long, default_value = "1/1000000")]
    precision: String,
    /// Enclosure refinement budget.
    #[arg(long, env = "BD_LAB_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

enum Failure {
    Usage(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded(_) | Error::DegreeCap { .. } | Error::ConductorTooLarge { .. } => Failure::Budget(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn read_input(path: &Option<PathBuf>) -> CliResult<Value> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display())))?
        }
        _ => {
            std::io::stdin().read_to_string(&mut text).map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
        }
    }
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("input is not JSON: {e}")))
}

fn emit(value: &Value, out: &Option<PathBuf>) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).expect("JSON values always serialize") + "\n";
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn require<T>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| Failure::Usage(format!("missing --{flag}")))
}

fn verify(args: VerifyArgs) -> CliResult<bool> {
    let suite: Suite = args.suite.parse()?;
    let mut config = SuiteConfig::new(args.sizes.parse()?, args.algebra.choice()?);
    config.depth = args.depth;
    config.seed = args.seed;
    config.count = args.count;
    config.periods = args.periods;
    config.p = args.p;
    config.exec = if args.sequential { Execution::Sequential } else { Execution::default() };
    let start = Instant::now();
    let report = run_suite(suite, &config)?;
    eprintln!(
        "{}: {} cases, {} failures, {:.2}s",
        suite,
        report.cases,
        report.failures.len(),
        start.elapsed().as_secs_f64()
    );
    emit(&report.to_json(), &args.out)?;
    Ok(report.passed())
}

fn apply_with<A: CoefficientAlgebra>(alg: A, args: &ApplyArgs, input: &Value) -> CliResult<Value> {
    match args.map {
        MapKind::Gamma => {
            let gamma = Gamma::new(alg, require(args.from, "from")?, require(args.to, "to")?)?;
            let x = gamma.source.from_json(input)?;
            Ok(gamma.target.to_json(&gamma.apply(&x)?))
        }
        MapKind::Rho => {
            let o = OdometerAlgebra::new(alg, args.sizes.parse()?);
            let stage = require(args.stage, "stage")?;
            let s = StageAlgebra::stage(o.alg.clone(), o.sequence.size(stage)?);
            Ok(o.to_json(&o.rho(stage, &s.from_json(input)?)?))
        }
        MapKind::Psi => {
            let o = OdometerAlgebra::new(alg, args.sizes.parse()?);
            Ok(o.reversed().to_json(&o.psi(&o.from_json(input)?)))
        }
        MapKind::Shuffle => unreachable!("shuffle is dispatched on the angle"),
    }
}

fn apply(args: ApplyArgs) -> CliResult<()> {
    let input = read_input(&args.input)?;
    let out = match (args.map, args.algebra.choice()?) {
        (MapKind::Shuffle, AlgebraChoice::Circle(angle)) => {
            let (p, n) = (require(args.p, "p")?, require(args.n, "n")?);
            if p == 0 || n == 0 {
                return Err(Failure::Usage("--p and --n must be positive".into()));
            }
            let source = StageAlgebra::new(CrossedProduct::new(CircleRotation::new(angle.clone()), n), (p * n) as usize);
            let target = StageAlgebra::stage(CircleRotation::new(amplify_angle(&angle, p)?), p * n);
            let x = source.from_json(&input)?;
            target.to_json(&amplification_shuffle(p as usize, n as usize, &x)?.reinterpret(p * n))
        }
        (MapKind::Shuffle, AlgebraChoice::Cyclic(_)) => {
            return Err(Failure::Usage("shuffle divides the rotation angle and needs --algebra circle".into()))
        }
        (_, AlgebraChoice::Circle(angle)) => apply_with(CircleRotation::new(angle), &args, &input)?,
        (_, AlgebraChoice::Cyclic(d)) => apply_with(FiniteCyclicShift::new(d)?, &args, &input)?,
    };
    emit(&out, &args.out)
}

fn trace_with<A: CoefficientAlgebra>(alg: A, input: &Value) -> CliResult<Value> {
    let size = input.get("size").and_then(Value::as_u64).ok_or_else(|| Failure::Usage("matrix element needs \"size\"".into()))?;
    let s = StageAlgebra::stage(alg, size);
    let t = s.matrix_trace(&s.from_json(input)?);
    Ok(match t.as_rational() {
        Some(r) => Value::String(r.to_string()),
        None => t.to_json(),
    })
}

fn trace(args: TraceArgs) -> CliResult<()> {
    let input = read_input(&args.input)?;
    let out = match args.algebra.choice()? {
        AlgebraChoice::Circle(angle) => trace_with(CircleRotation::new(angle), &input)?,
        AlgebraChoice::Cyclic(d) => trace_with(FiniteCyclicShift::new(d)?, &input)?,
    };
    emit(&out, &None)
}

fn parse_delta(text: &str) -> CliResult<SupernaturalNumber> {
    let text = text.trim();
    if text.starts_with('{') {
        let v: Value = serde_json::from_str(text).map_err(|e| Failure::Usage(format!("bad supernatural JSON: {e}")))?;
        return Ok(SupernaturalNumber::from_json(&v)?);
    }
    if text.contains(',') {
        let (sizes, tail) = match text.split_once(";tail=") {
            Some((s, t)) => (s, Some(t)),
            None => (text, None),
        };
        let sizes: StageSequence = sizes.parse()?;
        let tail: Option<Vec<u64>> = tail
            .map(|t| t.split(',').map(|p| p.trim().parse::<u64>().map_err(|_| Failure::Usage(format!("bad prime {p:?}")))).collect())
            .transpose()?;
        return Ok(SupernaturalNumber::from_sequence(sizes.sizes(), tail.as_deref())?);
    }
    Ok(text.parse()?)
}

fn classify(args: ClassifyArgs) -> CliResult<()> {
    let mut out = serde_json::Map::new();
    if let (Some(d), Some(sizes)) = (args.modulus, &args.sizes) {
        let seq: StageSequence = sizes.parse()?;
        out.insert("simplicity".into(), decide_simplicity_finite_model(d, &seq)?.to_json());
        out.insert("traceUniqueness".into(), decide_trace_uniqueness_finite_model(d, &seq)?.to_json());
    } else if args.modulus.is_some() || args.sizes.is_some() {
        return Err(Failure::Usage("--modulus and --sizes go together".into()));
    }
    if let Some(a1) = &args.angle1 {
        let mut a1: Angle = a1.parse()?;
        let mut d1 = parse_delta(require(args.delta1.as_deref(), "delta1")?)?;
        if let Some(p) = args.amplify {
            (a1, d1) = decide_amplification(p, &a1, &d1)?;
            out.insert("amplified".into(), json!({ "p": p, "angle": a1.to_string(), "delta": d1.to_json() }));
        }
        if let Some(a2) = &args.angle2 {
            let a2: Angle = a2.parse()?;
            let d2 = parse_delta(require(args.delta2.as_deref(), "delta2")?)?;
            out.insert("decision".into(), decide_isomorphism(&a1, &d1, &a2, &d2)?.to_json());
        }
    }
    if out.is_empty() {
        return Err(Failure::Usage("nothing to classify: give --angle1/--delta1 or --modulus/--sizes".into()));
    }
    emit(&Value::Object(out), &None)
}

fn parse_cf(text: &str) -> CliResult<ThetaEnclosure> {
    let parts: Vec<&str> = text.split(';').collect();
    let bad = || Failure::Usage(format!("bad continued fraction {text:?}; expected a0;prefix;period"));
    let list = |s: &str| -> CliResult<Vec<u64>> {
        s.split(',').filter(|t| !t.trim().is_empty()).map(|t| t.trim().parse().map_err(|_| bad())).collect()
    };
    match parts.as_slice() {
        [a0, prefix, period] => {
            let period = list(period)?;
            if period.is_empty() {
                return Err(bad());
            }
            Ok(ThetaEnclosure::continued_fraction(a0.trim().parse().map_err(|_| bad())?, list(prefix)?, period)?)
        }
        _ => Err(bad()),
    }
}

fn ktheory(args: KtheoryArgs) -> CliResult<()> {
    let seq: StageSequence = args.sizes.parse()?;
    let delta = SupernaturalNumber::from_sequence(seq.sizes(), args.tail.as_deref())?;
    let mut out = json!({
        "sizes": seq.sizes(),
        "delta": delta.to_json(),
        "K0": { "group": "Q(delta) + theta Z", "positiveCone": "(Q(delta) + theta Z) ∩ [0, inf)", "orderUnit": K0Class::order_unit().to_json() },
        "K1": { "group": "Q(delta) + Z" },
        "stages": seq.sizes().iter().enumerate().map(|(k, n)| json!({
            "stage": k + 1,
            "K0": format!("(1/{n})Z + theta Z"),
            "K1": format!("(1/{n})Z + Z"),
        })).collect::<Vec<_>>(),
    });
    if let Some(stage) = args.stage {
        let k0 = k0_limit_normalize(&seq, stage, args.a, args.b)?;
        out["class"] = json!({
            "stage": stage,
            "a": args.a,
            "b": args.b,
            "K0": k0.to_json(),
            "K1": k1_limit_normalize(&seq, stage, args.a, args.b)?.to_json(),
        });
        if let Some(cf) = &args.theta_cf {
            let theta = parse_cf(cf)?;
            let precision: Rational = args.precision.parse()?;
            let (lo, hi) = k0_tau_value(&k0, &theta, &precision, args.budget)?;
            out["class"]["tau"] = json!({ "lo": lo.to_string(), "hi": hi.to_string() });
            out["class"]["positive"] = json!(k0_positive(&k0, &theta, args.budget)?);
        }
    }
    emit(&out, &None)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Apply(args) => apply(args).map(|_| true),
        Command::Trace(args) => trace(args).map(|_| true),
        Command::Classify(args) => classify(args).map(|_| true),
        Command::Ktheory(args) => ktheory(args).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
