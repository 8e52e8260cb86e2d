use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cubenorm::approx::approx_spectral_norm_with;
use cubenorm::connectivity::{dichotomy_lower_bound_check, is_k_affine_connected_with_budget, ConnectivityVerdict};
use cubenorm::constructions::{mela_approximator, quadratic_example, QuadraticOptions};
use cubenorm::coset::{coset_complexity, ring_membership_decompose, Coset, Subspace};
use cubenorm::error::{Error, Result};
use cubenorm::fourier::{fwht, inverse_fwht, reduced_spectral_norm, spectral_norm, CubeFunction, Side};
use cubenorm::induction::{
    case_probe, decompose_experimental, verify_property_ledger, DecomposeOptions, DecomposeOutcome, LedgerOptions,
    ObstructionSet, ProbeOptions, PropertyLedger,
};
use cubenorm::io::{read_json, write_json};
use cubenorm::lp::LpOptions;
use cubenorm::report::{Check, Report, RunConfig};
use cubenorm::set::SubsetOfCube;
use cubenorm::structure::{additive_energy, find_dense_coset, good_subgroup, regularize_subgroup, GoodSubgroupParams};
use cubenorm::suite::{dichotomy_suite, Family, SuiteParams};
use cubenorm::tower::{tower_bound, tower_bound_single, TowerParams, TowerValue, DEFAULT_DIGIT_CAP};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

/// Environment variable naming the default report directory.
const OUT_DIR_VAR: &str = "CUBENORM_OUT_DIR";

#[derive(Parser)]
#[command(name = "cubenorm", version, about = "Spectral norms, affine connectivity and coset structure on F_2^n")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Report path. Defaults to `<command>.json` under $CUBENORM_OUT_DIR, or the working directory.
    #[arg(long, global = true, alias = "report")]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = RunConfig::default().seed)]
    seed: u64,
    /// Cap on search nodes for exhaustive tuple searches (accepts 1e9).
    #[arg(long, global = true, value_parser = parse_count, default_value = "1e9")]
    tuple_budget: u64,
    /// Monte Carlo samples where sampling replaces enumeration.
    #[arg(long, global = true, value_parser = parse_count, default_value = "1e5")]
    mc_samples: u64,
    #[arg(long, global = true, default_value_t = LpOptions::default().max_iterations)]
    lp_max_iterations: usize,
    /// Absolute tolerance for floating assertions.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Walsh-Hadamard transform of a function (or of an indicator).
    Fwht {
        #[arg(long)]
        input: PathBuf,
        /// Treat the input values as a spectrum and invert.
        #[arg(long)]
        inverse: bool,
    },
    /// Spectral norm and reduced spectral norm.
    Norm {
        #[arg(long)]
        input: PathBuf,
    },
    /// epsilon-approximate spectral norm by linear programming (n <= 10).
    ApproxNorm {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        epsilon: f64,
    },
    /// k-affine connectivity of a set and its complement, with witnesses.
    Connectivity {
        #[arg(long, alias = "input")]
        set: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "both")]
        complement: Sides,
    },
    /// Additive energy by pair counting and by the Fourier identity.
    Energy {
        #[arg(long, alias = "input")]
        set: PathBuf,
    },
    /// Regularize a subgroup against the spectrum of a function.
    Regularize {
        #[arg(long = "f", alias = "input")]
        f: PathBuf,
        /// Starting subspace; the whole space when omitted.
        #[arg(long = "V")]
        v: Option<PathBuf>,
        #[arg(long)]
        delta: f64,
        /// Norm bound M; the spectral norm of f when omitted.
        #[arg(long = "M")]
        m: Option<f64>,
    },
    /// Good subgroup for a set and an approximating function, from a JSON config.
    GoodSubgroup {
        #[arg(long)]
        config: PathBuf,
    },
    /// Chebyshev-weighted approximation of the Hamming ball indicator.
    Mela {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        epsilon: f64,
    },
    /// Quadratic-form example: norm growth and fourth-derivative identity.
    Quadratic {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = QuadraticOptions::default().samples)]
        samples: usize,
        #[arg(long, default_value_t = QuadraticOptions::default().connectivity_n_max)]
        connectivity_n_max: usize,
    },
    /// Least number of cosets whose ring contains the set.
    Complexity {
        #[arg(long, alias = "input")]
        set: PathBuf,
        #[arg(long, default_value_t = 3)]
        l_max: usize,
    },
    /// Experimental decomposition of a set into a signed sum of cosets (n <= 6).
    Decompose {
        #[arg(long, alias = "input")]
        set: PathBuf,
        /// Approximating function; the indicator of the set when omitted.
        #[arg(long)]
        g: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DecomposeOptions::default().depth_cap)]
        depth: usize,
        #[arg(long, value_parser = parse_count, default_value = "1e8")]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        k_exponent: u32,
        /// Also write the driver trace to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Tower-type bound from the induction recursion.
    Tower {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        offset: Option<u64>,
        /// Evaluate the single-parameter bound instead.
        #[arg(long)]
        single: bool,
        #[arg(long, default_value_t = DEFAULT_DIGIT_CAP)]
        digit_cap: u64,
    },
    /// Connectivity dichotomy over a family of sets.
    DichotomySuite {
        #[arg(long, value_enum, required_unless_present = "config")]
        family: Option<FamilyName>,
        /// JSON file with `family` and optional `params`.
        #[arg(long, conflicts_with = "family")]
        config: Option<PathBuf>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Generators per ring for coset-rings.
        #[arg(long, default_value_t = 2)]
        l: usize,
        #[arg(long, default_value_t = 8)]
        k_max: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, value_parser = parse_count, default_value = "1e5")]
        max_instances: u64,
        #[arg(long)]
        approx_epsilon: Option<f64>,
        #[arg(long, default_value_t = 3)]
        complexity_l_max: usize,
    },
    /// Checks the induction property for a concrete set, function and obstruction set.
    Ledger {
        #[arg(long)]
        config: PathBuf,
    },
    /// Probabilities behind the two cases of the induction step.
    CaseProbe {
        #[arg(long, alias = "input")]
        set: PathBuf,
        /// Obstruction set; `{0}` when omitted.
        #[arg(long)]
        x: Option<PathBuf>,
        #[arg(long)]
        r: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Sides {
    Set,
    Complement,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    AllSubsets,
    Random,
    Balls,
    Cosets,
    CosetRings,
    Quadratic,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Fwht { .. } => "fwht",
            Command::Norm { .. } => "norm",
            Command::ApproxNorm { .. } => "approx-norm",
            Command::Connectivity { .. } => "connectivity",
            Command::Energy { .. } => "energy",
            Command::Regularize { .. } => "regularize",
            Command::GoodSubgroup { .. } => "good-subgroup",
            Command::Mela { .. } => "mela",
            Command::Quadratic { .. } => "quadratic",
            Command::Complexity { .. } => "complexity",
            Command::Decompose { .. } => "decompose",
            Command::Tower { .. } => "tower",
            Command::DichotomySuite { .. } => "dichotomy-suite",
            Command::Ledger { .. } => "ledger",
            Command::CaseProbe { .. } => "case-probe",
        }
    }
}

fn parse_count(s: &str) -> std::result::Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 => Ok(v as u64),
        _ => Err(format!("expected a nonnegative integer, got {s}")),
    }
}

fn report_path(out: &Option<PathBuf>, name: &str) -> PathBuf {
    match out {
        Some(p) => p.clone(),
        None => {
            let dir = std::env::var_os(OUT_DIR_VAR).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
            dir.join(format!("{name}.json"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let out = report_path(&cli.common.out, name);
    let c = &cli.common;
    let config = RunConfig {
        seed: c.seed,
        tuple_budget: c.tuple_budget,
        mc_samples: c.mc_samples,
        lp_max_iterations: c.lp_max_iterations,
        tolerance: c.tolerance,
        output_dir: out.parent().map(|p| p.display().to_string()),
    };
    let mut report = Report::new(name, config);
    let start = Instant::now();
    let outcome = run(&cli.command, &mut report);
    report.time("total", start.elapsed().as_secs_f64() * 1e3);
    if let Err(e) = outcome {
        match e {
            Error::Verification(_) | Error::Solver(_) => report.assert(Check::new("internal verification", false, e.to_string())),
            _ => {
                eprintln!("cubenorm {name}: {e}");
                return ExitCode::from(2);
            }
        }
    }
    if let Err(e) = write_json(&out, &report) {
        eprintln!("cubenorm {name}: {e}");
        return ExitCode::from(2);
    }
    println!("report: {}", out.display());
    if report.passed {
        ExitCode::SUCCESS
    } else {
        for check in report.assertions.iter().filter(|c| !c.passed) {
            eprintln!("FAILED {}: {}", check.name, check.detail);
        }
        ExitCode::from(1)
    }
}

fn load<T: DeserializeOwned>(report: &mut Report, name: &str, path: &Path) -> Result<T> {
    let loaded = read_json::<Value>(path)?;
    report.add_input(name, &loaded.bytes);
    from_value(path, loaded.value)
}

fn from_value<T: DeserializeOwned>(path: &Path, v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

enum Input {
    Function(CubeFunction),
    Set(SubsetOfCube),
}

/// A function file, a set file, or a coset file, told apart by their keys.
fn load_any(report: &mut Report, name: &str, path: &Path) -> Result<Input> {
    let v: Value = load(report, name, path)?;
    if v.get("values").is_some() {
        Ok(Input::Function(from_value(path, v)?))
    } else if v.get("basis").is_some() {
        Ok(Input::Set(from_value::<Coset>(path, v)?.to_subset()))
    } else {
        Ok(Input::Set(from_value(path, v)?))
    }
}

fn load_function(report: &mut Report, name: &str, path: &Path) -> Result<CubeFunction> {
    Ok(match load_any(report, name, path)? {
        Input::Function(f) => f,
        Input::Set(s) => s.indicator(),
    })
}

fn load_set(report: &mut Report, name: &str, path: &Path) -> Result<SubsetOfCube> {
    match load_any(report, name, path)? {
        Input::Set(s) => Ok(s),
        Input::Function(_) => Err(Error::Parse(format!("{}: expected a set or a coset, found a function", path.display()))),
    }
}

fn is_coset(a: &SubsetOfCube) -> bool {
    match a.members().next() {
        None => false,
        Some(a0) => {
            let shifted: Vec<usize> = a.members().map(|x| x ^ a0).collect();
            Subspace::span(a.n(), &shifted).size() == a.size()
        }
    }
}

fn run(cmd: &Command, report: &mut Report) -> Result<()> {
    let tol = report.config.tolerance;
    match cmd {
        Command::Fwht { input, inverse } => {
            let f = load_function(report, "input", input)?;
            let (out, point, spectrum) = if *inverse {
                let spec = CubeFunction::with_side(f.n(), f.values().to_vec(), Side::Spectral)?;
                let g = inverse_fwht(&spec)?;
                (g.clone(), g, spec)
            } else {
                let s = fwht(&f)?;
                (s.clone(), f, s)
            };
            let energy: f64 = point.values().iter().map(|v| v * v).sum::<f64>() / point.len() as f64;
            let parseval: f64 = spectrum.values().iter().map(|c| c * c).sum();
            report.assert(Check::new(
                "Parseval",
                (energy - parseval).abs() <= 1e-10 * (1.0 + energy),
                format!("{parseval} vs {energy}"),
            ));
            println!("n = {}, {} values", out.n(), out.len());
            report.set_results(&out)
        }
        Command::Norm { input } => {
            let (f, set) = match load_any(report, "input", input)? {
                Input::Function(f) => (f, None),
                Input::Set(s) => (s.indicator(), Some(s)),
            };
            let norm = spectral_norm(&f)?;
            let reduced = reduced_spectral_norm(&f)?;
            let coset = set.as_ref().map(is_coset);
            if let (Some(a), Some(c)) = (&set, coset) {
                if !a.is_empty() {
                    report.assert(Check::new(
                        "unit norm exactly for cosets",
                        (norm <= 1.0 + tol) == c,
                        format!("norm {norm}, coset {c}"),
                    ));
                }
            }
            println!("norm = {norm}");
            report.set_results(&json!({ "n": f.n(), "norm": norm, "reduced_norm": reduced, "is_coset": coset }))
        }
        Command::ApproxNorm { input, epsilon } => {
            let f = load_function(report, "input", input)?;
            let opts = LpOptions { max_iterations: report.config.lp_max_iterations, ..LpOptions::default() };
            let r = approx_spectral_norm_with(&f, *epsilon, &opts)?;
            let sup = r.witness.sup_distance(&f)?;
            let witness_norm = spectral_norm(&r.witness)?;
            report.assert(Check::new("witness within epsilon", sup <= epsilon + tol, format!("{sup}")));
            report.assert(Check::new(
                "witness norm equals value",
                (witness_norm - r.value).abs() <= 1e-6 * (1.0 + r.value),
                format!("{witness_norm} vs {}", r.value),
            ));
            report.assert(Check::new("value at most the exact norm", r.value <= spectral_norm(&f)? + tol, ""));
            println!("value = {}", r.value);
            report.set_results(&r)
        }
        Command::Connectivity { set, k, complement } => {
            let a = load_set(report, "set", set)?;
            let budget = report.config.tuple_budget;
            let ac = a.complement();
            let set_v = match complement {
                Sides::Set | Sides::Both => Some(is_k_affine_connected_with_budget(&a, *k, budget)?),
                Sides::Complement => None,
            };
            let comp_v = match complement {
                Sides::Complement | Sides::Both => Some(is_k_affine_connected_with_budget(&ac, *k, budget)?),
                Sides::Set => None,
            };
            let verify = |report: &mut Report, side: &str, v: &Option<ConnectivityVerdict>, s: &SubsetOfCube| {
                if let Some(w) = v.as_ref().and_then(|v| v.witness.as_ref()) {
                    report.assert(Check::new(format!("{side} witness re-verifies"), w.verify(s), ""));
                }
            };
            verify(report, "set", &set_v, &a);
            verify(report, "complement", &comp_v, &ac);
            let dichotomy = match (&set_v, &comp_v) {
                (Some(s), Some(c)) => {
                    let d = dichotomy_lower_bound_check(&a, s, c)?;
                    if d.applies {
                        report.assert(Check::new("norm >= sqrt(k)/2", d.passed, format!("{} vs {}", d.norm, d.lower_bound)));
                    }
                    Some(d)
                }
                _ => None,
            };
            let show = |v: &Option<ConnectivityVerdict>| v.as_ref().map_or("-".to_string(), |v| v.connected.to_string());
            println!("k = {k}: set connected {}, complement connected {}", show(&set_v), show(&comp_v));
            report.set_results(&json!({ "k": k, "set": set_v, "complement": comp_v, "dichotomy": dichotomy }))
        }
        Command::Energy { set } => {
            let a = load_set(report, "set", set)?;
            let e = additive_energy(&a)?;
            report.assert(Check::new(
                "pair count equals Fourier form",
                (e.fourier - e.energy as f64).abs() <= 1e-6 * (1.0 + e.energy as f64),
                format!("{} vs {}", e.energy, e.fourier),
            ));
            println!("energy = {}", e.energy);
            report.set_results(&json!({ "n": a.n(), "size": a.size(), "energy": e.energy.to_string(), "fourier": e.fourier }))
        }
        Command::Regularize { f, v, delta, m } => {
            let f = load_function(report, "f", f)?;
            let v = match v {
                Some(p) => load::<Subspace>(report, "V", p)?,
                None => Subspace::full(f.n()),
            };
            let m = match m {
                Some(m) => *m,
                None => spectral_norm(&f)?,
            };
            let r = regularize_subgroup(&f, &v, *delta, m)?;
            report.assert(Check::new(
                "dimension drop within ceil(M/delta)",
                r.dim_drop <= r.dim_drop_bound,
                format!("{} vs {}", r.dim_drop, r.dim_drop_bound),
            ));
            report.assert(Check::new(
                "coset variances within delta*M",
                r.max_variance <= r.variance_bound + tol,
                format!("{} vs {}", r.max_variance, r.variance_bound),
            ));
            println!("dim W = {}, dropped {}", r.w.dim(), r.dim_drop);
            report.set_results(&r)
        }
        Command::GoodSubgroup { config } => {
            let cfg: GoodSubgroupConfig = load(report, "config", config)?;
            let a = cfg.set;
            let g = cfg.g.unwrap_or_else(|| a.indicator());
            let (v, shift, density) = match cfg.v {
                Some(v) => {
                    let shift = cfg.shift.unwrap_or(0);
                    let hits = v.members().filter(|&y| a.contains(y ^ shift)).count();
                    let density = hits as f64 / v.size() as f64;
                    (v, shift, density)
                }
                None => {
                    let d = find_dense_coset(&a, None, None)?
                        .ok_or_else(|| Error::Precondition("the set is empty, so no dense coset exists".into()))?;
                    (d.coset.space().clone(), d.coset.rep(), d.density)
                }
            };
            let epsilon = cfg.epsilon;
            let epsilon1 = cfg.epsilon1.unwrap_or_else(|| (v.size() as f64 / a.size().max(1) as f64).min(1.0));
            let epsilon2 = cfg.epsilon2.unwrap_or(density);
            let delta = cfg.delta.unwrap_or_else(|| ((1.0 - 2.0 * epsilon) / 8.0).min(epsilon2 / 2.0));
            let m = match cfg.m {
                Some(m) => m,
                None => spectral_norm(&g)?,
            };
            let p = GoodSubgroupParams { epsilon, delta, epsilon1, epsilon2, m };
            let r = good_subgroup(&a, &g, &v, shift, &p)?;
            report.extend_assertions(r.checks.iter().cloned());
            println!("dim W = {}, |F_W| = {}", r.w.dim(), r.f_w.len());
            report.set_results(&json!({ "params": p, "v": v, "shift": shift, "result": r }))
        }
        Command::Mela { k, epsilon } => {
            let r = mela_approximator(*k, *epsilon)?;
            report.extend_assertions(r.checks.iter().cloned());
            println!("m = {}, norm of approximation = {}", r.m, r.approx_norm);
            report.set_results(&r)
        }
        Command::Quadratic { n, samples, connectivity_n_max } => {
            let opts = QuadraticOptions {
                seed: report.config.seed,
                samples: *samples,
                connectivity_n_max: *connectivity_n_max,
                tuple_budget: report.config.tuple_budget,
            };
            let (_, r) = quadratic_example(*n, &opts)?;
            report.extend_assertions(r.checks.iter().cloned());
            println!("norm = {}, ratio to 2^(n/2) = {}", r.norm, r.ratio);
            report.set_results(&r)
        }
        Command::Complexity { set, l_max } => {
            let a = load_set(report, "set", set)?;
            let c = coset_complexity(&a, *l_max)?;
            if c.value.is_some() {
                let sum = ring_membership_decompose(&a, &c.generators)?;
                report.assert(Check::new(
                    "generators span a ring containing the set",
                    sum.is_some_and(|s| s.represents(&a)),
                    "",
                ));
            }
            match c.value {
                Some(l) => println!("complexity {} {l}", if c.exact { "=" } else { "<=" }),
                None => println!("complexity unknown up to {l_max}"),
            }
            report.set_results(&c)
        }
        Command::Decompose { set, g, epsilon, k, depth, budget, k_exponent, trace } => {
            let a = load_set(report, "set", set)?;
            let g = match g {
                Some(p) => load_function(report, "g", p)?,
                None => a.indicator(),
            };
            let opts = DecomposeOptions { depth_cap: *depth, budget: *budget, seed: report.config.seed, k_exponent: *k_exponent };
            let d = decompose_experimental(&a, &g, *epsilon, *k, &opts)?;
            match &d.outcome {
                DecomposeOutcome::Success { sum, generators } => {
                    report.assert(Check::new("signed sum evaluates to the set", sum.represents(&a), ""));
                    println!("success: {} terms over {} generators", sum.len(), generators.len());
                }
                DecomposeOutcome::Failure { reason } => println!("no decomposition: {reason}"),
            }
            if let Some(p) = trace {
                write_json(p, &d.trace)?;
            }
            report.set_results(&d)
        }
        Command::Tower { k, m, r, t, epsilon, offset, single, digit_cap } => {
            let p = TowerParams { offset: *offset, digit_cap: *digit_cap, ..TowerParams::new(*k, *m, *r, *t, *epsilon) };
            let b = if *single { tower_bound_single(&p)? } else { tower_bound(&p)? };
            match &b.value {
                TowerValue::Exact(v) => println!("{v}"),
                TowerValue::Tower { base, height } => println!("tower_{base}({height})"),
            }
            report.set_results(&b)
        }
        Command::DichotomySuite {
            family,
            config,
            n,
            count,
            l,
            k_max,
            k,
            max_instances,
            approx_epsilon,
            complexity_l_max,
        } => {
            let base = SuiteParams { seed: report.config.seed, tuple_budget: report.config.tuple_budget, ..SuiteParams::default() };
            let (family, params) = match config {
                Some(path) => {
                    let cfg: SuiteConfig = load(report, "config", path)?;
                    let params = cfg.params.unwrap_or(SuiteParams {
                        k: *k,
                        max_instances: *max_instances,
                        approx_epsilon: *approx_epsilon,
                        complexity_l_max: *complexity_l_max,
                        ..base
                    });
                    (cfg.family, params)
                }
                None => {
                    let need_n = || n.ok_or_else(|| Error::Usage("this family needs --n".into()));
                    let family = match family.expect("clap requires --family without --config") {
                        FamilyName::AllSubsets => Family::AllSubsets { n: need_n()? },
                        FamilyName::Random => Family::Random { n: need_n()?, count: *count },
                        FamilyName::Balls => Family::Balls { k_max: *k_max },
                        FamilyName::Cosets => Family::Cosets { n: need_n()? },
                        FamilyName::CosetRings => Family::CosetRings { n: need_n()?, count: *count, l: *l },
                        FamilyName::Quadratic => Family::Quadratic { n: need_n()? },
                    };
                    let params = SuiteParams {
                        k: *k,
                        max_instances: *max_instances,
                        approx_epsilon: *approx_epsilon,
                        complexity_l_max: *complexity_l_max,
                        ..base
                    };
                    (family, params)
                }
            };
            let s = dichotomy_suite(&family, &params)?;
            let failing: Vec<String> = s.rows.iter().filter(|r| !r.passed).take(8).map(|r| format!("{:?} at k={}", r.set, r.k)).collect();
            report.assert(Check::new(
                "lower bound on every branch (i) row",
                s.violations == 0,
                if failing.is_empty() { String::new() } else { failing.join("; ") },
            ));
            println!(
                "{} instances ({}): branch i {}, branch ii {}, violations {}",
                s.instances,
                if s.exhaustive { "exhaustive" } else { "sampled" },
                s.branch_one,
                s.branch_two,
                s.violations
            );
            report.set_results(&s)
        }
        Command::Ledger { config } => {
            let ledger: PropertyLedger = load(report, "config", config)?;
            let opts = LedgerOptions {
                budget: report.config.tuple_budget,
                monte_carlo: Some((report.config.mc_samples, report.config.seed)),
            };
            let r = verify_property_ledger(&ledger, &opts)?;
            report.extend_assertions(r.checks.iter().cloned());
            match r.holds {
                Some(h) => println!("property holds: {h}"),
                None => println!("property not refuted by sampling"),
            }
            report.set_results(&r)
        }
        Command::CaseProbe { set, x, r } => {
            let a = load_set(report, "set", set)?;
            let x = match x {
                Some(p) => load::<ObstructionSet>(report, "x", p)?,
                None => ObstructionSet::origin(a.n()),
            };
            let opts = ProbeOptions { budget: report.config.tuple_budget, samples: report.config.mc_samples, seed: report.config.seed };
            let c = case_probe(&a, &x, *r, &opts)?;
            println!("case I: {}, case II: {}", c.case_one, c.case_two);
            report.set_results(&c)
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GoodSubgroupConfig {
    set: SubsetOfCube,
    #[serde(default)]
    g: Option<CubeFunction>,
    /// Starting subspace; a densest small-codimension coset of the set when omitted.
    #[serde(default)]
    v: Option<Subspace>,
    #[serde(default)]
    shift: Option<usize>,
    #[serde(default)]
    epsilon: f64,
    #[serde(default)]
    delta: Option<f64>,
    #[serde(default)]
    epsilon1: Option<f64>,
    #[serde(default)]
    epsilon2: Option<f64>,
    #[serde(default, rename = "M", alias = "m")]
    m: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteConfig {
    family: Family,
    #[serde(default)]
    params: Option<SuiteParams>,
}
