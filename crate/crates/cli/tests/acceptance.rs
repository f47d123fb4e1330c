//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use permsearch::classical_engine::{baseline_perm_solver, truncated_scan_solver, NoisyScanSearch};
use permsearch::measurement::{exact_error_perm, exact_error_search, induced_h_distribution, Decider, Rate};
use permsearch::oracles::{
    build_h, q_size, sample_uniform_permutation, InstanceClass, MuVariant, Permutation, SearchInstance,
};
use permsearch::quantum_engine::{
    apply_function_oracle, clean_h_query, grover_iteration_count, grover_search, max_entry_distance, operator_matrix,
    GroverSearch, Layout, OracleUnitary, QuantumQueryAlgorithm, EXACT_TOLERANCE,
};
use permsearch::random::{Prob, SeededStream};
use permsearch::reductions::{
    forward_search_instance, grover_inversion, odd_error_combination, odd_n_wrapper, permutation_symmetrize, rebalance,
    single_query_probe, symmetrize_search, ErrorPair, QuantumReductionB, ReductionB,
};

type Outcome = Result<(), String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn r(a: i128, b: i128) -> Prob {
    Prob::new(a, b)
}

fn exact(rate: Option<Rate>) -> Result<Prob, String> {
    rate.and_then(|r| r.exact()).ok_or_else(|| "expected an exact rate".to_string())
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn exact_reduction_n6() -> Outcome {
    let b = ReductionB::new(baseline_perm_solver(6).map_err(err)?).map_err(err)?;
    let rep = exact_error_search(Decider::Classical(&b), 3, MuVariant::Mu).map_err(err)?;
    let (e0, e1, mu) = (exact(rep.eps0)?, exact(rep.eps1)?, exact(Some(rep.eps_mu))?);
    ensure(e0.is_zero() && e1 == r(1, 2) && mu == r(1, 4), || format!("errors {e0}, {e1}, {mu}"))?;
    ensure(rep.query_max <= 6, || format!("{} f-queries", rep.query_max))
}

fn bound_propagation_n4() -> Outcome {
    let a = truncated_scan_solver(4, 2).map_err(err)?;
    let eps = exact(Some(exact_error_perm(Decider::Classical(&a), 4).map_err(err)?.eps_mu))?;
    ensure(eps == r(1, 4), || format!("solver error {eps}"))?;
    let b = ReductionB::new(a).map_err(err)?;
    let rep = exact_error_search(Decider::Classical(&b), 2, MuVariant::Mu).map_err(err)?;
    let (e0, mu) = (exact(rep.eps0)?, exact(Some(rep.eps_mu))?);
    ensure(mu <= r(3, 8) && e0 <= r(1, 4), || format!("mu error {mu}, no-error {e0}"))
}

fn rebalanced_worst_case_n6() -> Outcome {
    let b = ReductionB::new(baseline_perm_solver(6).map_err(err)?).map_err(err)?;
    let errs = ErrorPair::new(Prob::zero(), r(1, 2)).map_err(err)?;
    let w = rebalance(symmetrize_search(&b), errs).map_err(err)?;
    let worst = exact(exact_error_search(Decider::Classical(&w), 3, MuVariant::Mu).map_err(err)?.worst_case)?;
    ensure(worst == r(1, 3), || format!("worst case {worst}"))
}

fn rebalance_closed_form() -> Outcome {
    let fixtures = [(2, Prob::zero(), Prob::zero()), (3, r(1, 10), r(1, 10)), (3, r(1, 4), r(1, 12))];
    let targets = [(Prob::zero(), r(1, 2)), (r(1, 10), r(3, 10)), (r(1, 4), r(1, 4))];
    for ((budget, fa, miss), (t0, t1)) in fixtures.into_iter().zip(targets) {
        let noisy = NoisyScanSearch::new(4, budget, fa, miss).map_err(err)?;
        let rep = exact_error_search(Decider::Classical(&noisy), 4, MuVariant::Mu).map_err(err)?;
        let (e0, e1) = (exact(rep.eps0)?, exact(rep.eps1)?);
        ensure((e0, e1) == (t0, t1), || format!("fixture errors ({e0}, {e1}), wanted ({t0}, {t1})"))?;
        let errs = ErrorPair::new(e0, e1).map_err(err)?;
        let w = rebalance(symmetrize_search(noisy), errs).map_err(err)?;
        let worst = exact(exact_error_search(Decider::Classical(&w), 4, MuVariant::Mu).map_err(err)?.worst_case)?;
        let diff = if e0 > e1 { e0 - e1 } else { e1 - e0 };
        let expected = errs.max() / (Prob::one() + diff);
        ensure(worst == expected, || format!("({e0}, {e1}): worst {worst}, closed form {expected}"))?;
    }
    Ok(())
}

fn sampling_lemma() -> Outcome {
    for n in [4, 6] {
        let target = r(1, q_size(n) as i128);
        for class in [InstanceClass::P0, InstanceClass::P1] {
            let dist = induced_h_distribution(n, class).map_err(err)?;
            ensure(dist.len() as u128 == q_size(n) && dist.values().all(|&w| w == target), || {
                format!("n={n} {class:?}: support {} of {}", dist.len(), q_size(n))
            })?;
        }
    }
    Ok(())
}

fn clean_h_simulation() -> Outcome {
    let n = 4;
    let layout = Layout::new(n, 2, 1);
    let dim = 1usize << layout.qubits();
    for p in Permutation::all(n).map_err(err)? {
        for f in SearchInstance::all(n / 2).map_err(err)? {
            let mut f_oracle = OracleUnitary::from(&f);
            let clean =
                operator_matrix(layout.qubits(), |s| clean_h_query(s, &p, &mut f_oracle, &layout)).map_err(err)?;
            let mut direct = OracleUnitary::from(&build_h(&p, &f).map_err(err)?);
            let expected =
                operator_matrix(layout.qubits(), |s| apply_function_oracle(s, &mut direct, &layout)).map_err(err)?;
            let d = max_entry_distance(&clean, &expected);
            ensure(d < 1e-9, || format!("{p} {f}: distance {d:e}"))?;
            ensure(f_oracle.tally() == 2 * dim, || {
                format!("{p} {f}: {} f-queries over {dim} calls", f_oracle.tally())
            })?;
        }
    }
    Ok(())
}

fn grover_correctness() -> Outcome {
    for n in [2, 4, 8, 16] {
        let k = grover_iteration_count(n);
        let closed = GroverSearch::new(n).closed_form_success();
        for f in SearchInstance::all(n).map_err(err)? {
            let out = grover_search(&mut OracleUnitary::from(&f), n).map_err(err)?;
            let p = out.accept_probability();
            let expected = if f.answer() { closed } else { 0.0 };
            ensure((p - expected).abs() < EXACT_TOLERANCE, || format!("n={n} {f}: accept {p}, expected {expected}"))?;
            ensure(out.query_count == k + 1, || format!("n={n}: {} queries, k={k}", out.query_count))?;
        }
    }
    Ok(())
}

fn forward_reduction_n8() -> Outcome {
    let n = 8;
    let k = grover_iteration_count(n);
    let solver = grover_inversion(n).map_err(err)?;
    let mut rng = SeededStream::new(8);
    for _ in 0..100 {
        let p = sample_uniform_permutation(n, &mut rng).map_err(err)?;
        let answer = p.class() == InstanceClass::P1;
        let composed = solver.run_exact(&mut OracleUnitary::from(&p)).map_err(err)?;
        let direct = grover_search(&mut OracleUnitary::from(&forward_search_instance(&p)), n).map_err(err)?;
        let (ec, ed) = (composed.error(answer), direct.error(answer));
        ensure((ec - ed).abs() < EXACT_TOLERANCE, || format!("{p}: error {ec} vs {ed}"))?;
        ensure(composed.query_count == 2 * (k + 1), || format!("{p}: {} queries", composed.query_count))?;
    }
    Ok(())
}

fn quantum_query_factor() -> Outcome {
    let probe = single_query_probe(4).map_err(err)?;
    let mut pi = OracleUnitary::from(&Permutation::identity(4).map_err(err)?);
    let own = probe.run_exact(&mut pi).map_err(err)?.query_count;
    ensure(own == 1, || format!("probe makes {own} queries"))?;
    let b = QuantumReductionB::new(probe).map_err(err)?;
    for f in SearchInstance::all(2).map_err(err)? {
        let q = b.run_exact(&mut OracleUnitary::from(&f)).map_err(err)?.query_count;
        ensure(q == 2 * own, || format!("{f}: {q} f-queries"))?;
    }
    Ok(())
}

fn query_scaling() -> Outcome {
    let mut rng = SeededStream::new(10);
    let mut prev: Option<usize> = None;
    let mut ratios = Vec::new();
    for n in [4, 8, 16, 32, 64] {
        let p = permsearch::oracles::sample_uniform_in_class(n, InstanceClass::P1, &mut rng).map_err(err)?;
        let q = grover_inversion(n).map_err(err)?.run_exact(&mut OracleUnitary::from(&p)).map_err(err)?.query_count;
        if let Some(prev) = prev {
            ratios.push(q as f64 / prev as f64);
        }
        prev = Some(q);
    }
    ensure(ratios.iter().all(|x| (1.2..=1.7).contains(x)), || format!("ratios {ratios:?}"))
}

fn odd_sizes() -> Outcome {
    for budget in 1..=3 {
        let inner = permutation_symmetrize(truncated_scan_solver(4, budget).map_err(err)?);
        let rep = exact_error_perm(Decider::Classical(&inner), 4).map_err(err)?;
        let errs = ErrorPair::new(exact(rep.eps0)?, exact(rep.eps1)?).map_err(err)?;
        let wrapped = odd_n_wrapper(&inner).map_err(err)?;
        let measured = exact(Some(exact_error_perm(Decider::Classical(&wrapped), 3).map_err(err)?.eps_mu))?;
        let formula = odd_error_combination(&errs, 3).map_err(err)?;
        ensure(measured == formula, || format!("budget {budget}: enumerated {measured}, formula {formula}"))?;
    }
    for n in [3, 5] {
        let a = odd_n_wrapper(permutation_symmetrize(baseline_perm_solver(n + 1).map_err(err)?)).map_err(err)?;
        let rep = exact_error_perm(Decider::Classical(&a), n).map_err(err)?;
        let worst = exact(rep.worst_case)?;
        ensure(worst.is_zero(), || format!("n={n}: worst case {worst}"))?;
    }
    Ok(())
}

fn cli_run(args: &[&str], out: &std::path::Path) -> Result<(Vec<u8>, Vec<u8>), String> {
    let bin = env!("CARGO_BIN_EXE_permsearch");
    let res = Command::new(bin).args(args).arg("--out").arg(out).output().map_err(err)?;
    ensure(res.status.success(), || format!("{args:?} exited with {}", res.status))?;
    let file = std::fs::read(out).map_err(err)?;
    let stdout = Command::new(bin).args(args).output().map_err(err)?.stdout;
    Ok((file, stdout))
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    let cases: [&[&str]; 5] = [
        &["verify-reduction", "--n", "6", "--seed", "3"],
        &["verify-reduction", "--n", "6", "--mode", "mc", "--trials", "2000", "--seed", "3"],
        &["grover-scan", "--n", "4,16,64", "--seed", "3"],
        &["grover-scan", "--n", "4,8", "--mode", "mc", "--trials", "200", "--seed", "3", "--format", "csv"],
        &["sampling-tests", "--n", "4,6", "--trials", "20000", "--seed", "3"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let first = cli_run(args, &dir.path().join(format!("{i}-a")))?;
        let second = cli_run(args, &dir.path().join(format!("{i}-b")))?;
        ensure(first == second, || format!("{args:?} differs between runs"))?;
        ensure(first.0 == first.1, || format!("{args:?}: --out and stdout differ"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("exact search reduction at n=6", 10, exact_reduction_n6),
        ("error bound propagation at n=4", 5, bound_propagation_n4),
        ("rebalanced worst case 1/3 at n=6", 10, rebalanced_worst_case_n6),
        ("rebalance closed form on noisy fixtures", 10, rebalance_closed_form),
        ("induced h uniform on Q at n=4,6", 30, sampling_lemma),
        ("clean two-query h oracle at n=4", 60, clean_h_simulation),
        ("Grover success and query counts", 30, grover_correctness),
        ("forward reduction at n=8", 60, forward_reduction_n8),
        ("quantum query factor 2", 10, quantum_query_factor),
        ("query growth per doubling in [1.2, 1.7]", 60, query_scaling),
        ("odd sizes", 10, odd_sizes),
        ("CLI determinism", 600, cli_determinism),
    ];
    let mut failures = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed <= Duration::from_secs(*limit), || format!("took {elapsed:.2?}, limit {limit}s"))
        });
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({elapsed:.2?})", i + 1),
            Err(msg) => {
                failures += 1;
                println!("criterion {:>2}: FAIL  {name} ({elapsed:.2?}): {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
