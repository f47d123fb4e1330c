use std::cell::RefCell;

use anyhow::Context;
use num_traits::One;
use serde_json::{json, Map, Value};

use permsearch::classical_engine::{baseline_perm_solver, truncated_scan_solver, TruncatedScanSolver};
use permsearch::measurement::{
    exact_error_perm, exact_error_search, hoeffding_halfwidth, induced_h_distribution, mc_error, sample_induced_h,
    uniformity_test, Decider, ErrorReport, InputDistribution, Rate, MC_ALPHA, PERMUTATION_ENUMERATION_CAP,
};
use permsearch::oracles::{q_size, sample_uniform_in_class, InstanceClass, MuVariant, SearchInstance};
use permsearch::quantum_engine::{
    grover_circuit, grover_iteration_count, grover_search, run_quantum, GroverSearch, OracleUnitary, QuantumError,
    QuantumOracle, QuantumOutcome, QuantumQueryAlgorithm, SimulationMode, EXACT_TOLERANCE,
};
use permsearch::random::{prob_to_f64, Prob, RandomSource, SeededStream};
use permsearch::reductions::{
    grover_inversion, mu_error_bound, rebalance, symmetrize_search, worst_case_error_bound, ErrorPair, GroverInversion,
    QuantumRebalanced, QuantumReductionB, ReductionB,
};

use crate::{rate_value, usage, Command, Mode, Options, Report};

const DEFAULT_REDUCTION_N: usize = 6;
const DEFAULT_SCAN_SIZES: [usize; 3] = [4, 16, 64];
const DEFAULT_SAMPLING_SIZES: [usize; 2] = [4, 6];
const DEFAULT_TRIALS: u64 = 10_000;
const DEFAULT_DRAWS: u64 = 60_000;
const EXACT_SAMPLING_CAP: usize = 6;
const WORST_CASE_ENUMERATION_CAP: usize = 6;
const CHI_SQUARE_CAP: usize = 8;
const GROWTH_RANGE: (f64, f64) = (1.2, 1.7);

fn config(options: &Options, n: &[usize], trials: Option<u64>) -> Map<String, Value> {
    let mut c = Map::new();
    c.insert("n".into(), json!(n));
    c.insert("seed".into(), json!(options.seed));
    c.insert(
        "mode".into(),
        json!(match options.mode {
            Mode::Exact => "exact",
            Mode::Mc => "mc",
        }),
    );
    c.insert("trials".into(), json!(trials));
    c
}

fn to_prob(x: f64) -> Prob {
    const SCALE: i128 = 1_000_000_000_000;
    Prob::new((x.clamp(0.0, 1.0) * SCALE as f64).round() as i128, SCALE)
}

fn bound(eps: Rate, f: fn(Prob) -> Prob) -> Rate {
    match eps {
        Rate::Exact(p) => Rate::Exact(f(p)),
        Rate::Approx(x) => Rate::Approx(prob_to_f64(f(to_prob(x)))),
    }
}

fn le(x: &Rate, b: &Rate, tol: f64) -> bool {
    match (x, b) {
        (Rate::Exact(x), Rate::Exact(b)) => x <= b,
        _ => x.value() <= b.value() + tol,
    }
}

fn is_half(x: &Rate, tol: f64) -> bool {
    match x {
        Rate::Exact(p) => *p == Prob::new(1, 2),
        Rate::Approx(v) => (v - 0.5).abs() <= tol,
    }
}

fn class_errors(rep: &ErrorReport) -> anyhow::Result<(Rate, Rate)> {
    let e0 = rep.eps0.context("no unmarked instance was sampled")?;
    let e1 = rep.eps1.context("no marked instance was sampled")?;
    Ok((e0, e1))
}

fn error_pair(e0: &Rate, e1: &Rate) -> anyhow::Result<ErrorPair> {
    let p = |r: &Rate| r.exact().unwrap_or_else(|| to_prob(r.value()));
    Ok(ErrorPair::new(p(e0), p(e1))?)
}

/// Search reduction over a quantum solver that draws its hidden permutation
/// from a stream on every run, for Monte Carlo estimates.
struct SampledReduction {
    b: QuantumReductionB<GroverInversion>,
    rng: RefCell<SeededStream>,
}

impl QuantumQueryAlgorithm for SampledReduction {
    fn name(&self) -> String {
        self.b.name()
    }
    fn domain_size(&self) -> usize {
        self.b.domain_size()
    }
    fn run_exact(&self, oracle: &mut dyn QuantumOracle) -> Result<QuantumOutcome, QuantumError> {
        self.b.run(oracle, &mut *self.rng.borrow_mut())
    }
}

enum Fixture {
    Classical(TruncatedScanSolver),
    Quantum(GroverInversion),
}

fn fixtures(n: usize) -> anyhow::Result<Vec<Fixture>> {
    let mut out = vec![Fixture::Classical(baseline_perm_solver(n)?)];
    let mut budgets = vec![1, n / 2, n - 1];
    budgets.dedup();
    for b in budgets.into_iter().filter(|&b| b < n) {
        out.push(Fixture::Classical(truncated_scan_solver(n, b)?));
    }
    out.push(Fixture::Quantum(grover_inversion(n)?));
    Ok(out)
}

/// Measurements for one fixture: the solver's own error, the reduction's
/// profile on `μ`, and the rebalanced symmetrized reduction's worst case.
struct Measured {
    name: String,
    kind: &'static str,
    eps: Rate,
    solver_queries: usize,
    reduction: ErrorReport,
    worst: Rate,
    worst_source: &'static str,
    query_factor: usize,
}

fn measure_classical(
    a: TruncatedScanSolver,
    n: usize,
    mode: Mode,
    trials: u64,
    rng: &mut SeededStream,
) -> anyhow::Result<Measured> {
    let m = n / 2;
    let b = ReductionB::new(a)?;
    let (eps, solver_queries, reduction) = match mode {
        Mode::Exact => {
            let ra = exact_error_perm(Decider::Classical(&a), n)?;
            (ra.eps_mu, ra.query_max, exact_error_search(Decider::Classical(&b), m, MuVariant::Mu)?)
        }
        Mode::Mc => {
            let ra = mc_error(Decider::Classical(&a), n, InputDistribution::UniformPermutation, trials, rng)?;
            let rb = mc_error(Decider::Classical(&b), m, InputDistribution::Search(MuVariant::Mu), trials, rng)?;
            (ra.error, ra.query_max, rb)
        }
    };
    let (e0, e1) = class_errors(&reduction)?;
    let errs = error_pair(&e0, &e1)?;
    let (worst, worst_source) = match mode {
        Mode::Exact if n <= WORST_CASE_ENUMERATION_CAP => {
            let w = rebalance(symmetrize_search(&b), errs)?;
            let rw = exact_error_search(Decider::Classical(&w), m, MuVariant::Mu)?;
            (rw.worst_case.context("exact report carries a worst case")?, "enumerated")
        }
        Mode::Exact => {
            let w = rebalance(&b, errs)?;
            let (w0, w1) = class_errors(&exact_error_search(Decider::Classical(&w), m, MuVariant::Mu)?)?;
            (w0.max(w1), "class-average")
        }
        Mode::Mc => {
            let w = rebalance(symmetrize_search(&b), errs)?;
            let no = mc_error(Decider::Classical(&w), m, InputDistribution::Search(MuVariant::Mu0), trials, rng)?;
            let yes = mc_error(Decider::Classical(&w), m, InputDistribution::Search(MuVariant::Mu1), trials, rng)?;
            (no.error.max(yes.error), "class-average")
        }
    };
    Ok(Measured {
        name: a_name(&a),
        kind: "classical",
        eps,
        solver_queries,
        reduction,
        worst,
        worst_source,
        query_factor: 1,
    })
}

fn a_name(a: &TruncatedScanSolver) -> String {
    use permsearch::classical_engine::ClassicalAlgorithm;
    a.name()
}

fn measure_quantum(
    g: GroverInversion,
    n: usize,
    mode: Mode,
    trials: u64,
    rng: &mut SeededStream,
) -> anyhow::Result<Measured> {
    let m = n / 2;
    let name = g.name();
    let b = QuantumReductionB::new(g.clone())?;
    let sampled = SampledReduction { b: b.clone(), rng: RefCell::new(rng.fork()) };
    let (eps, solver_queries, reduction) = match mode {
        Mode::Exact => {
            let ra = exact_error_perm(Decider::Quantum(&g), n)?;
            (ra.eps_mu, ra.query_max, exact_error_search(Decider::Quantum(&b), m, MuVariant::Mu)?)
        }
        Mode::Mc => {
            let ra = mc_error(Decider::Quantum(&g), n, InputDistribution::UniformPermutation, trials, rng)?;
            let rb = mc_error(Decider::Quantum(&sampled), m, InputDistribution::Search(MuVariant::Mu), trials, rng)?;
            (ra.error, ra.query_max, rb)
        }
    };
    let (e0, e1) = class_errors(&reduction)?;
    let errs = error_pair(&e0, &e1)?;
    // Symmetrizing over relabelings of f keeps the no-instance error and
    // the μ¹ average, and makes every yes instance err at that average, so
    // the worst case is the larger class error of the rebalanced reduction.
    let worst = match mode {
        Mode::Exact => {
            let w = QuantumRebalanced::new(&b, errs)?;
            let rw = exact_error_search(Decider::Quantum(&w), m, MuVariant::Mu)?;
            let (w0, w1) = class_errors(&rw)?;
            w0.max(w1)
        }
        Mode::Mc => {
            let w = QuantumRebalanced::new(&sampled, errs)?;
            let no = mc_error(Decider::Quantum(&w), m, InputDistribution::Search(MuVariant::Mu0), trials, rng)?;
            let yes = mc_error(Decider::Quantum(&w), m, InputDistribution::Search(MuVariant::Mu1), trials, rng)?;
            no.error.max(yes.error)
        }
    };
    Ok(Measured {
        name,
        kind: "quantum",
        eps,
        solver_queries,
        reduction,
        worst,
        worst_source: "class-average",
        query_factor: 2,
    })
}

fn reduction_row(m: &Measured, mode: Mode, tol: f64) -> anyhow::Result<(Map<String, Value>, bool)> {
    let (e0, e1) = class_errors(&m.reduction)?;
    let bound_mu = bound(m.eps, mu_error_bound);
    let bound_worst = bound(m.eps, worst_case_error_bound);
    let queries_bound = m.query_factor * m.solver_queries;
    let queries_ok = match m.kind {
        "quantum" => m.reduction.query_max == queries_bound,
        _ => m.reduction.query_max <= queries_bound,
    };
    let checks = json!({
        "eps0_within_eps": le(&e0, &m.eps, tol),
        "eps1_is_half": is_half(&e1, tol),
        "mu_within_bound": le(&m.reduction.eps_mu, &bound_mu, tol),
        "worst_within_bound": le(&m.worst, &bound_worst, tol),
        "queries_within_bound": queries_ok,
    });
    let pass = checks.as_object().is_some_and(|c| c.values().all(|v| v == &json!(true)));
    let mut row = Map::new();
    row.insert("fixture".into(), json!(m.name));
    row.insert("kind".into(), json!(m.kind));
    row.insert("eps".into(), rate_value(&m.eps, mode));
    row.insert("eps0".into(), rate_value(&e0, mode));
    row.insert("eps1".into(), rate_value(&e1, mode));
    row.insert("eps_mu".into(), rate_value(&m.reduction.eps_mu, mode));
    row.insert("bound_mu".into(), rate_value(&bound_mu, mode));
    row.insert("worst_case".into(), rate_value(&m.worst, mode));
    row.insert("worst_case_source".into(), json!(m.worst_source));
    row.insert("bound_worst".into(), rate_value(&bound_worst, mode));
    row.insert("queries_max".into(), json!(m.reduction.query_max));
    row.insert("queries_bound".into(), json!(queries_bound));
    row.insert("ci_halfwidth".into(), json!(m.reduction.ci_halfwidth));
    row.insert("checks".into(), checks);
    row.insert("pass".into(), json!(pass));
    Ok((row, pass))
}

/// Runs the search reduction on every fixture solver and checks the
/// propagated error and query bounds.
pub fn verify_reduction(options: &Options) -> anyhow::Result<Report> {
    let n = match options.n.as_slice() {
        [] => DEFAULT_REDUCTION_N,
        [n] => *n,
        _ => return Err(usage("verify-reduction takes a single --n")),
    };
    if n < 2 || n % 2 != 0 {
        return Err(usage(format!("verify-reduction needs an even n >= 2, got {n}")));
    }
    if options.mode == Mode::Exact && n > PERMUTATION_ENUMERATION_CAP {
        return Err(usage(format!(
            "exact mode enumerates all n! permutations and is capped at n = {PERMUTATION_ENUMERATION_CAP}; \
             use --mode mc for n = {n}"
        )));
    }
    let trials = options.trials.unwrap_or(DEFAULT_TRIALS);
    if options.mode == Mode::Mc && trials == 0 {
        return Err(usage("--trials must be positive"));
    }
    let tol = match options.mode {
        Mode::Exact => EXACT_TOLERANCE,
        // two estimates, each over roughly half the trials
        Mode::Mc => 2.0 * hoeffding_halfwidth((trials / 2).max(1), MC_ALPHA),
    };
    let mut rng = SeededStream::new(options.seed);
    let mut rows = Vec::new();
    let mut pass = true;
    for fixture in fixtures(n)? {
        let measured = match fixture {
            Fixture::Classical(a) => measure_classical(a, n, options.mode, trials, &mut rng)?,
            Fixture::Quantum(g) => measure_quantum(g, n, options.mode, trials, &mut rng)?,
        };
        let (row, ok) = reduction_row(&measured, options.mode, tol)?;
        pass &= ok;
        rows.push(row);
    }
    let mut extra = Map::new();
    extra.insert("tolerance".into(), json!(tol));
    let trials = (options.mode == Mode::Mc).then_some(trials);
    Ok(Report { command: Command::VerifyReduction, config: config(options, &[n], trials), rows, extra, pass })
}

fn growth_per_doubling(prev: Option<(usize, usize)>, n: usize, queries: usize) -> Option<f64> {
    let (pn, pq) = prev?;
    if n <= pn || !n.is_multiple_of(pn) || !(n / pn).is_power_of_two() {
        return None;
    }
    let doublings = (n / pn).trailing_zeros() as f64;
    Some((queries as f64 / pq as f64).powf(1.0 / doublings))
}

/// Grover success probability and query counts per size, including the
/// inversion solver that runs Grover over the two-query search oracle.
pub fn grover_scan(options: &Options) -> anyhow::Result<Report> {
    let sizes = if options.n.is_empty() { DEFAULT_SCAN_SIZES.to_vec() } else { options.n.clone() };
    if sizes.contains(&0) {
        return Err(usage("sizes must be positive"));
    }
    let shots = options.trials.unwrap_or(DEFAULT_TRIALS);
    let mut rng = SeededStream::new(options.seed);
    let mut rows = Vec::new();
    let mut pass = true;
    let mut prev: Option<(usize, usize)> = None;
    for &n in &sizes {
        let k = grover_iteration_count(n);
        let closed_form = GroverSearch::new(n).closed_form_success();
        let marked = rng.choose(n)? + 1;
        let f = SearchInstance::marked_at(n, marked)?;
        let out = grover_search(&mut OracleUnitary::from(&f), n)?;
        let unmarked = grover_search(&mut OracleUnitary::from(&SearchInstance::unmarked(n)?), n)?;
        let success = out.accept_probability();
        let mut ok = (success - closed_form).abs() < EXACT_TOLERANCE
            && out.query_count == k + 1
            && unmarked.accept_probability() < EXACT_TOLERANCE;

        let mut row = Map::new();
        row.insert("n".into(), json!(n));
        row.insert("iterations".into(), json!(k));
        row.insert("queries".into(), json!(out.query_count));
        row.insert("marked".into(), json!(marked));
        row.insert("success_probability".into(), rate_value(&Rate::Approx(success), Mode::Exact));
        row.insert("closed_form".into(), json!(closed_form));
        row.insert("abs_diff".into(), json!((success - closed_form).abs()));
        row.insert("unmarked_accept".into(), json!(unmarked.accept_probability()));
        if options.mode == Mode::Mc {
            let seed = rng.next_u64();
            let sampled = run_quantum(
                &grover_circuit(n)?,
                &mut OracleUnitary::from(&f),
                SimulationMode::Shots { shots: shots as usize, seed },
            )?;
            let mean = sampled.sample_mean().unwrap_or(0.0);
            row.insert("sampled_success".into(), rate_value(&Rate::Approx(mean), Mode::Mc));
        }

        let (inv_queries, inv_success, growth) = if n % 2 == 0 {
            let p = sample_uniform_in_class(n, InstanceClass::P1, &mut rng)?;
            let inv = grover_inversion(n)?.run_exact(&mut OracleUnitary::from(&p))?;
            ok &= inv.query_count == 2 * (k + 1) && (inv.accept_probability() - closed_form).abs() < EXACT_TOLERANCE;
            let growth = growth_per_doubling(prev, n, inv.query_count);
            if let Some(g) = growth {
                ok &= (GROWTH_RANGE.0..=GROWTH_RANGE.1).contains(&g);
            }
            prev = Some((n, inv.query_count));
            (json!(inv.query_count), json!(inv.accept_probability()), json!(growth))
        } else {
            (Value::Null, Value::Null, Value::Null)
        };
        row.insert("inversion_queries".into(), inv_queries);
        row.insert("inversion_success".into(), inv_success);
        row.insert("growth_per_doubling".into(), growth);
        row.insert("pass".into(), json!(ok));
        pass &= ok;
        rows.push(row);
    }
    let mut extra = Map::new();
    extra.insert("growth_range".into(), json!([GROWTH_RANGE.0, GROWTH_RANGE.1]));
    let trials = (options.mode == Mode::Mc).then_some(shots);
    Ok(Report { command: Command::GroverScan, config: config(options, &sizes, trials), rows, extra, pass })
}

/// Exact and sampled checks that `h_{π,f}` is uniform on `Q` when `π` is
/// uniform in either class.
pub fn sampling_tests(options: &Options) -> anyhow::Result<Report> {
    let sizes = if options.n.is_empty() { DEFAULT_SAMPLING_SIZES.to_vec() } else { options.n.clone() };
    if let Some(&bad) = sizes.iter().find(|&&n| n < 2 || n % 2 != 0 || n > CHI_SQUARE_CAP) {
        return Err(usage(format!("sampling-tests needs even sizes in 2..={CHI_SQUARE_CAP}, got {bad}")));
    }
    let draws = options.trials.unwrap_or(DEFAULT_DRAWS);
    if draws == 0 {
        return Err(usage("--trials must be positive"));
    }
    let alpha = 0.01;
    let mut rng = SeededStream::new(options.seed);
    let mut rows = Vec::new();
    let mut pass = true;
    for &n in &sizes {
        let q = q_size(n);
        for (label, class) in [("P0", InstanceClass::P0), ("P1", InstanceClass::P1)] {
            let (exact_uniform, support) = if n <= EXACT_SAMPLING_CAP {
                let dist = induced_h_distribution(n, class)?;
                let target = Prob::one() / Prob::from_integer(q as i128);
                let uniform = dist.len() as u128 == q && dist.values().all(|&w| w == target);
                (json!(uniform), json!(dist.len()))
            } else {
                (Value::Null, Value::Null)
            };
            let (labels, size) = sample_induced_h(n, class, draws as usize, &mut rng)?;
            let res = uniformity_test(&labels, size, alpha)?;
            let ok = res.pass && exact_uniform != json!(false);
            pass &= ok;
            let mut row = Map::new();
            row.insert("n".into(), json!(n));
            row.insert("class".into(), json!(label));
            row.insert("q_size".into(), json!(q as u64));
            row.insert("exact_uniform".into(), exact_uniform);
            row.insert("support_size".into(), support);
            row.insert("draws".into(), json!(draws));
            row.insert("chi_square".into(), json!(res.statistic));
            row.insert("degrees_of_freedom".into(), json!(res.degrees_of_freedom));
            row.insert("p_value".into(), json!(res.p_value));
            row.insert("alpha".into(), json!(alpha));
            row.insert("pass".into(), json!(ok));
            rows.push(row);
        }
    }
    Ok(Report {
        command: Command::SamplingTests,
        config: config(options, &sizes, Some(draws)),
        rows,
        extra: Map::new(),
        pass,
    })
}
