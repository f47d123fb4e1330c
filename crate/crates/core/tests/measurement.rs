use num_traits::Zero;
use permsearch::classical_engine::{
    baseline_perm_solver, exact_acceptance, run_classical, truncated_scan_solver, CountedOracle, Randomness,
};
use permsearch::measurement::{
    exact_error_perm, exact_error_search, hoeffding_halfwidth, mc_error, Decider, InputDistribution, MC_ALPHA,
};
use permsearch::oracles::{FunctionTable, MuVariant, Permutation, SearchInstance};
use permsearch::quantum_engine::{
    grover_circuit, run_quantum, GroverSearch, OracleUnitary, QuantumQueryAlgorithm, SimulationMode,
};
use permsearch::random::{prob_to_f64, Prob, SeededStream};
use permsearch::reductions::{
    grover_inversion, rebalance, ErrorPair, QuantumRebalanced, QuantumReductionB, QuantumSymmetrizedSearch, ReductionB,
};

#[test]
fn transcripts_record_queries() {
    let a = baseline_perm_solver(4).unwrap();
    let p: Permutation = "perm n=4 map=3,4,1,2".parse().unwrap();
    let mut oracle = CountedOracle::new(FunctionTable::from(&p));
    let t = run_classical(&a, &mut oracle, Randomness::Explicit(vec![])).unwrap();
    assert!(!t.output());
    assert_eq!(t.query_count(), oracle.count());
    assert_eq!(t.queries().last(), Some(&(3, 1)));
}

#[test]
fn truncated_scan_error_by_budget() {
    for (budget, eps) in [(1, 0.375), (2, 0.25), (3, 0.125), (4, 0.0)] {
        let a = truncated_scan_solver(4, budget).unwrap();
        let rep = exact_error_perm(Decider::Classical(&a), 4).unwrap();
        assert_eq!(rep.eps_mu.value(), eps, "budget {budget}");
        assert!(rep.query_max <= budget);
    }
}

#[test]
fn monte_carlo_agrees_with_enumeration() {
    let b = ReductionB::new(truncated_scan_solver(6, 3).unwrap()).unwrap();
    let exact = exact_error_search(Decider::Classical(&b), 3, MuVariant::Mu).unwrap();
    let trials = 20_000;
    let mut rng = SeededStream::new(1);
    let dist = InputDistribution::Search(MuVariant::Mu);
    let mc = mc_error(Decider::Classical(&b), 3, dist, trials, &mut rng).unwrap();
    let tol = hoeffding_halfwidth(trials, MC_ALPHA);
    assert_eq!(mc.ci_halfwidth, Some(tol));
    assert!((mc.eps_mu.value() - exact.eps_mu.value()).abs() <= tol);
}

#[test]
fn shots_concentrate_on_the_exact_distribution() {
    let f = SearchInstance::marked_at(16, 5).unwrap();
    let out = run_quantum(
        &grover_circuit(16).unwrap(),
        &mut OracleUnitary::from(&f),
        SimulationMode::Shots { shots: 4000, seed: 2 },
    )
    .unwrap();
    let mean = out.sample_mean().unwrap();
    let exact = GroverSearch::new(16).closed_form_success();
    assert!((mean - exact).abs() <= hoeffding_halfwidth(4000, MC_ALPHA));
}

#[test]
fn symmetrized_quantum_worst_case_is_the_class_average() {
    let b = QuantumReductionB::new(grover_inversion(4).unwrap()).unwrap();
    let rb = exact_error_search(Decider::Quantum(&b), 2, MuVariant::Mu).unwrap();
    let errs = ErrorPair::new(Prob::zero(), Prob::new(1, 2)).unwrap();
    assert!(rb.eps0.unwrap().value().abs() < 1e-9);
    assert!((rb.eps1.unwrap().value() - 0.5).abs() < 1e-9);

    let unsymmetrized = QuantumRebalanced::new(&b, errs).unwrap();
    let ru = exact_error_search(Decider::Quantum(&unsymmetrized), 2, MuVariant::Mu).unwrap();
    let class_max = ru.eps0.unwrap().max(ru.eps1.unwrap()).value();

    let full = QuantumRebalanced::new(QuantumSymmetrizedSearch::new(&b), errs).unwrap();
    let rf = exact_error_search(Decider::Quantum(&full), 2, MuVariant::Mu).unwrap();
    let worst = rf.worst_case.unwrap().value();
    assert!((worst - class_max).abs() < 1e-9);
    assert!((worst - prob_to_f64(errs.rebalanced_worst_case())).abs() < 1e-9);
    assert_eq!(b.domain_size(), 2);
}

#[test]
fn classical_rebalance_matches_the_bound() {
    let b = ReductionB::new(baseline_perm_solver(4).unwrap()).unwrap();
    let rb = exact_error_search(Decider::Classical(&b), 2, MuVariant::Mu).unwrap();
    let errs = ErrorPair::new(rb.eps0.unwrap().exact().unwrap(), rb.eps1.unwrap().exact().unwrap()).unwrap();
    let w = rebalance(&b, errs).unwrap();
    let rw = exact_error_search(Decider::Classical(&w), 2, MuVariant::Mu).unwrap();
    assert_eq!(rw.eps0.unwrap().exact(), Some(errs.rebalanced_worst_case()));
    assert_eq!(rw.eps1.unwrap().exact(), Some(errs.rebalanced_worst_case()));
    let run = exact_acceptance(&w, &FunctionTable::from(&SearchInstance::unmarked(2).unwrap())).unwrap();
    assert_eq!(run.accept, errs.rebalanced_worst_case());
}
