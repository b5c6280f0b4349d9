use std::fs;
use std::path::Path;

use locality_core::adversary::{self, AdversaryError, AdversaryOutput};
use locality_core::analysis::{self, AnalysisError, TrialParams};
use locality_core::parametric::{self, KnapsackInstance, ParametricError, PerceptronDataset};
use locality_core::policies::PolicyError;
use locality_core::rational;
use locality_core::simulator::{self, SimError, SimulationResult};
use locality_core::working_set::{
    conforms, conforms_naive, empirical_profile, format_table, parse_table, WorkingSetError,
};
use locality_core::{Builtin, CacheConfig, PolicyKind, Rational, WorkingSetFunction};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::args::*;
use crate::report::ReportDocument;
use crate::trace::{TraceError, TraceFile};

/// Everything here maps to exit code 2; verification failures are reported
/// through `pass` instead.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Trace { path: String, source: TraceError },
    #[error("{path}: {source}")]
    Table {
        path: String,
        source: WorkingSetError,
    },
    #[error("{path}: {source}")]
    Data {
        path: String,
        source: ParametricError,
    },
    #[error(transparent)]
    Function(#[from] WorkingSetError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Simulation(#[from] SimError),
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Parametric(#[from] ParametricError),
}

pub fn execute(command: Command) -> Result<ReportDocument, CliError> {
    match command {
        Command::Simulate(a) => simulate(a),
        Command::Adversary(a) => adversary(a),
        Command::Bounds(a) => bounds(a),
        Command::Conform(a) => conform(a),
        Command::Profile(a) => profile(a),
        Command::Verify(v) => verify(v),
        Command::Knapsack { solver, instance } => knapsack(solver, &instance),
        Command::Perceptron(p) => perceptron(p),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn read_trace(path: &Path) -> Result<TraceFile, CliError> {
    TraceFile::parse(&read(path)?).map_err(|source| CliError::Trace {
        path: path.display().to_string(),
        source,
    })
}

/// `identity`, `sqrt`, `log2`, `witness` or `table:PATH`.
pub fn load_function(spec: &str) -> Result<WorkingSetFunction, CliError> {
    if let Some(path) = spec.strip_prefix("table:") {
        let path = Path::new(path);
        return parse_table(&read(path)?).map_err(|source| CliError::Table {
            path: path.display().to_string(),
            source,
        });
    }
    if spec == "witness" {
        return Ok(adversary::fifo_witness_function());
    }
    let builtin: Builtin = spec.parse().map_err(|_| {
        CliError::Usage(format!(
            "unknown function `{spec}`: expected identity, sqrt, log2, witness or table:PATH"
        ))
    })?;
    Ok(WorkingSetFunction::builtin(builtin))
}

fn kind(p: OnlinePolicyArg) -> PolicyKind {
    match p {
        OnlinePolicyArg::Lru => PolicyKind::Lru,
        OnlinePolicyArg::Fifo => PolicyKind::Fifo,
    }
}

fn ratio(r: &Rational) -> String {
    rational::format(r)
}

fn ratio_f64(r: &Rational) -> f64 {
    rational::to_f64(r)
}

#[derive(Serialize)]
struct SimulateResults<'a> {
    policy: &'a str,
    total_requests: u64,
    faults: u64,
    fault_rate: String,
    fault_rate_value: f64,
    distinct_pages: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    fault_indices: Option<&'a [usize]>,
    /// `(request index, evicted token)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    eviction_log: Option<Vec<(usize, &'a str)>>,
}

fn simulate_results<'a>(result: &'a SimulationResult, trace: &'a TraceFile) -> SimulateResults<'a> {
    let rate = result.fault_rate();
    SimulateResults {
        policy: &result.policy_name,
        total_requests: result.total_requests,
        faults: result.faults,
        fault_rate: ratio(&rate),
        fault_rate_value: ratio_f64(&rate),
        distinct_pages: trace.distinct_pages(),
        fault_indices: result.fault_indices.as_deref(),
        eviction_log: result.eviction_log.as_ref().map(|log| {
            log.iter()
                .map(|&(i, page)| (i, trace.name(page).unwrap_or("?")))
                .collect()
        }),
    }
}

fn simulate(a: SimulateArgs) -> Result<ReportDocument, CliError> {
    let mut trace = read_trace(&a.trace)?;
    let config = match &a.warm {
        None => CacheConfig::cold(a.k),
        Some(tokens) => {
            if tokens.len() != a.k {
                return Err(CliError::Usage(format!(
                    "--warm lists {} pages but --k is {}",
                    tokens.len(),
                    a.k
                )));
            }
            let pages = tokens
                .iter()
                .map(|t| trace.intern(t))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|source| CliError::Trace {
                    path: "--warm".to_string(),
                    source,
                })?;
            CacheConfig::warm(pages)
        }
    };
    config.validate()?;
    let result = match a.policy {
        PolicyArg::Lru => simulator::run(PolicyKind::Lru, &config, trace.requests(), a.detail)?,
        PolicyArg::Fifo => simulator::run(PolicyKind::Fifo, &config, trace.requests(), a.detail)?,
        PolicyArg::Opt => simulator::run_optimal(&config, trace.requests(), a.detail)?,
    };
    Ok(ReportDocument::new("simulate")
        .input("policy", a.policy.to_possible_value_name())
        .input("k", a.k)
        .input("warm", &a.warm)
        .input("trace", a.trace.display().to_string())
        .input("detail", a.detail)
        .results(simulate_results(&result, &trace)))
}

trait PossibleValueName {
    fn to_possible_value_name(&self) -> String;
}

impl<T: clap::ValueEnum> PossibleValueName for T {
    fn to_possible_value_name(&self) -> String {
        self.to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default()
    }
}

fn adversary(a: AdversaryArgs) -> Result<ReportDocument, CliError> {
    let kind = kind(a.policy);
    let mut doc = ReportDocument::new("adversary")
        .input("policy", kind.name())
        .input("k", a.k)
        .input("out", a.out.as_ref().map(|p| p.display().to_string()));

    let (out, alpha, f) = match a.always_miss {
        Some(len) => {
            doc = doc.input("always_miss", len);
            (adversary::always_miss(kind, a.k, len)?, None, None)
        }
        None => {
            doc = doc.input("f", &a.f).input("reps", a.reps);
            let f = load_function(&a.f)?;
            let out = adversary::afg_lower_bound(kind, &f, a.k, a.reps)?;
            (out, Some(f.alpha(a.k as u64)?), Some(f))
        }
    };
    if let Some(path) = &a.out {
        write(path, &TraceFile::from_pages(&out.sequence).to_text())?;
    }

    // Replay through fresh policies rather than trusting the generator.
    let config = out.config();
    let realized = simulator::run(kind, &config, &out.sequence, false)?;
    let opt = simulator::run_optimal(&config, &out.sequence, false)?;
    let rate = realized.fault_rate();
    let expected = alpha.unwrap_or_else(|| Rational::from_integer(1));
    let conformance = f.as_ref().map(|f| conforms(&out.sequence, f).conforms);
    let pass =
        rate == expected && realized.faults == out.predicted_faults && conformance.unwrap_or(true);

    let AdversaryOutput {
        universe,
        predicted_faults,
        predicted_length,
        warm_start,
        ..
    } = &out;
    let mut results = json!({
        "function": f.as_ref().map(|f| f.to_string()),
        "universe": universe,
        "warm_start": warm_start,
        "predicted_faults": predicted_faults,
        "predicted_length": predicted_length,
        "faults": realized.faults,
        "fault_rate": ratio(&rate),
        "fault_rate_value": ratio_f64(&rate),
        "expected_rate": ratio(&expected),
        "opt_faults": opt.faults,
        "opt_fault_rate": ratio(&opt.fault_rate()),
        "conforms": conformance,
    });
    if let Some(alpha) = alpha {
        results["alpha"] = Value::from(ratio(&alpha));
    }
    Ok(doc.results(results).pass(pass))
}

fn bounds(a: BoundsArgs) -> Result<ReportDocument, CliError> {
    let f = load_function(&a.f)?;
    let k = a.k as u64;
    let alpha = f.alpha(k)?;
    let fifo = f.fifo_bound(k)?;
    let window = f.inverse(k + 1)?;
    Ok(ReportDocument::new("bounds")
        .input("f", &a.f)
        .input("k", a.k)
        .results(json!({
            "function": f.to_string(),
            "multiplicities": f.multiplicities(),
            "tail": f.tail().to_string(),
            "window": window,
            "alpha": ratio(&alpha),
            "alpha_value": ratio_f64(&alpha),
            "fifo_bound": ratio(&fifo),
            "fifo_bound_value": ratio_f64(&fifo),
        })))
}

fn conform(a: ConformArgs) -> Result<ReportDocument, CliError> {
    let f = load_function(&a.f)?;
    let trace = read_trace(&a.trace)?;
    let report = if a.naive {
        conforms_naive(trace.requests(), &f)
    } else {
        conforms(trace.requests(), &f)
    };
    Ok(ReportDocument::new("conform")
        .input("f", &a.f)
        .input("trace", a.trace.display().to_string())
        .input("naive", a.naive)
        .results(json!({
            "function": f.to_string(),
            "requests": trace.len(),
            "distinct_pages": trace.distinct_pages(),
            "conforms": report.conforms,
            "first_violation": report.first_violation,
        }))
        .pass(report.conforms))
}

fn profile(a: ProfileArgs) -> Result<ReportDocument, CliError> {
    let trace = read_trace(&a.trace)?;
    let max_window = a.max_window.unwrap_or(trace.len());
    let raw = empirical_profile(trace.requests(), max_window)?;
    let normalized = match WorkingSetFunction::normalize(&raw) {
        Ok(f) => {
            // Table files only load when the stored multiplicities never decrease.
            let loadable = WorkingSetFunction::new(f.multiplicities().to_vec(), f.tail()).is_ok();
            if let Some(path) = &a.out {
                if !loadable {
                    return Err(CliError::Usage(format!(
                        "normalized multiplicities decrease; {} not written",
                        path.display()
                    )));
                }
                write(path, &format_table(&f))?;
            }
            json!({
                "function": f.to_string(),
                "multiplicities": f.multiplicities(),
                "tail": f.tail().to_string(),
                "nondecreasing_table": loadable,
            })
        }
        // A single-page trace: no proper locality function describes it.
        Err(WorkingSetError::Degenerate) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    Ok(ReportDocument::new("profile")
        .input("trace", a.trace.display().to_string())
        .input("max_window", a.max_window)
        .input("out", a.out.as_ref().map(|p| p.display().to_string()))
        .results(json!({
            "requests": trace.len(),
            "distinct_pages": trace.distinct_pages(),
            "profile": raw,
            "normalized": normalized,
        })))
}

fn verify(v: VerifyCommand) -> Result<ReportDocument, CliError> {
    match v {
        VerifyCommand::Lower { policy, f, k, reps } => {
            let func = load_function(&f)?;
            let report = analysis::verify_lower_bound(kind(policy), &func, k, reps)?;
            Ok(ReportDocument::new("verify lower")
                .input("policy", kind(policy).name())
                .input("f", &f)
                .input("k", k)
                .input("reps", reps)
                .pass(report.pass)
                .results(report))
        }
        VerifyCommand::LruUpper(a) => {
            verify_upper("verify lru-upper", a, analysis::verify_lru_upper)
        }
        VerifyCommand::FifoUpper(a) => {
            verify_upper("verify fifo-upper", a, analysis::verify_fifo_upper)
        }
        VerifyCommand::Separation { reps } => {
            let report = analysis::separation_demo(reps)?;
            let rates = json!({
                "lru": ratio(&report.lru.fault_rate()),
                "fifo": ratio(&report.fifo.fault_rate()),
                "opt": ratio(&report.opt.fault_rate()),
            });
            let mut results = crate::report::to_value(&report);
            results["rates"] = rates;
            Ok(ReportDocument::new("verify separation")
                .input("reps", reps)
                .pass(report.pass)
                .results(results))
        }
    }
}

type UpperHarness =
    fn(&WorkingSetFunction, usize, &TrialParams) -> Result<analysis::BoundReport, AnalysisError>;

fn verify_upper(
    name: &str,
    a: UpperArgs,
    harness: UpperHarness,
) -> Result<ReportDocument, CliError> {
    let f = load_function(&a.f)?;
    let params = TrialParams {
        trials: a.trials,
        length: a.len,
        num_pages: a.pages.unwrap_or(a.k + 1),
        seed: a.seed,
    };
    let report = harness(&f, a.k, &params)?;
    Ok(ReportDocument::new(name)
        .input("f", &a.f)
        .input("k", a.k)
        .input("trials", params.trials)
        .input("len", params.length)
        .input("pages", params.num_pages)
        .input("seed", params.seed)
        .pass(report.pass)
        .results(report))
}

fn knapsack(solver: KnapsackSolver, path: &Path) -> Result<ReportDocument, CliError> {
    let instance = KnapsackInstance::parse(&read(path)?).map_err(|source| CliError::Data {
        path: path.display().to_string(),
        source,
    })?;
    let solution = match solver {
        KnapsackSolver::Greedy => parametric::greedy_knapsack(&instance),
        KnapsackSolver::Exact => parametric::exact_knapsack(&instance)?,
    };
    Ok(ReportDocument::new("knapsack")
        .input("solver", solver.to_possible_value_name())
        .input("instance", path.display().to_string())
        .results(json!({
            "items": instance.items().len(),
            "capacity": instance.capacity(),
            "alpha": instance.alpha(),
            "selected": solution.selected,
            "total_value": solution.total_value,
            "total_size": solution.total_size,
        })))
}

fn perceptron(p: PerceptronCommand) -> Result<ReportDocument, CliError> {
    match p {
        PerceptronCommand::Gen {
            d,
            n,
            mu,
            seed,
            out,
        } => {
            let ds = parametric::margin_dataset(d, n, mu, seed)?;
            write(&out, &ds.to_text())?;
            let witness = ds.witness().expect("generated datasets carry a witness");
            Ok(ReportDocument::new("perceptron gen")
                .input("d", d)
                .input("n", n)
                .input("mu", mu)
                .input("seed", seed)
                .input("out", out.display().to_string())
                .results(json!({
                    "points": ds.len(),
                    "positive": ds.labels().iter().filter(|&&b| b > 0).count(),
                    "w_star": witness.w_star,
                    "mu": witness.mu,
                })))
        }
        PerceptronCommand::Train {
            data,
            max_updates,
            mu,
            log,
        } => {
            let ds = PerceptronDataset::parse(&read(&data)?).map_err(|source| CliError::Data {
                path: data.display().to_string(),
                source,
            })?;
            if let Some(mu) = mu {
                if !(mu > 0.0 && mu <= 1.0) {
                    return Err(CliError::Usage(format!(
                        "--mu must lie in (0, 1], got {mu}"
                    )));
                }
            }
            let trace = parametric::perceptron_train(&ds, max_updates);
            let margin = if trace.converged {
                parametric::margin_lower_bound(&ds, &trace.final_w).ok()
            } else {
                None
            };
            let mistake_bound = mu.map(|mu| (1.0 / (mu * mu)).ceil() as usize);
            let pass = trace.converged && mistake_bound.is_none_or(|b| trace.updates <= b);
            let mut results = json!({
                "points": ds.len(),
                "dim": ds.dim(),
                "updates": trace.updates,
                "converged": trace.converged,
                "final_w": trace.final_w,
                "margin_lower_bound": margin,
                "mistake_bound": mistake_bound,
            });
            if log {
                let norms: Vec<f64> = trace.step_log.iter().map(|s| s.norm_sq).collect();
                results["norm_sq_log"] = json!(norms);
            }
            Ok(ReportDocument::new("perceptron train")
                .input("data", data.display().to_string())
                .input("max_updates", max_updates)
                .input("mu", mu)
                .input("log", log)
                .pass(pass)
                .results(results))
        }
    }
}
