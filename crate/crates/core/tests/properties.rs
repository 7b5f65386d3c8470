use std::collections::{BTreeSet, HashSet};

use proptest::prelude::*;

use tplog::engine::trace::check_all;
use tplog::engine::{tp_solve, EngineConfig, EngineError, Solver};
use tplog::gen::{random_case, GenConfig};
use tplog::oracle::{bottomup_solve, ground_over, sld_solve, universe, SldConfig};
use tplog::program::{parse, parse_query, Program, Query};
use tplog::terms::{
    canonicalize, canonicalize_terms, is_variant, unify, Atom, Substitution, Term, VarId,
};

/// Smaller than the default budget; these suites check answers, and
/// termination within the default budget is measured separately.
const BUDGET: u64 = 200_000;

fn cfg() -> EngineConfig {
    EngineConfig { trace: true, step_budget: BUDGET, ..EngineConfig::default() }
}

/// Ground tp answers and the bottom-up answer set, or `None` when tp runs
/// out of budget.
fn compare(program: &Program, query: &Query, strict: bool) -> Option<(BTreeSet<Vec<Term>>, BTreeSet<Vec<Term>>)> {
    let run = match tp_solve(program, query, &EngineConfig { strict_alg2: strict, ..cfg() }) {
        Ok(run) => run,
        Err(EngineError::StepBudgetExceeded(_)) => return None,
        Err(e) => panic!("{e}"),
    };
    check_all(&run.trace, true).unwrap();
    let u = universe(program, query);
    let tp: Vec<Vec<Term>> = run.answers.iter().map(|a| a.values.clone()).collect();
    let oracle = bottomup_solve(program, query).unwrap();
    Some((ground_over(&tp, &u), oracle.answers))
}

/// Compares every halting run over `seeds`; returns how many halted.
fn differential(seeds: std::ops::Range<u64>, tabled_query: bool, strict: bool) -> usize {
    let gen = GenConfig::default();
    let mut halted = 0;
    for seed in seeds {
        let case = random_case(seed, &gen, tabled_query);
        if let Some((tp, oracle)) = compare(&case.program, &case.query, strict) {
            assert_eq!(tp, oracle, "seed {seed}\n{}?- {}", case.source, case.query_text);
            halted += 1;
        }
    }
    halted
}

#[test]
fn differential_tabled_queries() {
    assert!(differential(0..2000, true, false) >= 1900);
}

#[test]
fn differential_strict_mode() {
    assert!(differential(5000..5500, true, true) >= 450);
}

#[test]
fn differential_any_query() {
    assert!(differential(10_000..10_500, false, false) >= 450);
}

#[test]
fn tabled_queries_never_repeat_answers() {
    let gen = GenConfig::default();
    for seed in 0..500 {
        let case = random_case(seed, &gen, true);
        let mut solver = Solver::new(&case.program, &case.query, EngineConfig { trace: false, ..cfg() });
        let mut seen = HashSet::new();
        while let Ok(Some(a)) = solver.next_answer() {
            assert!(seen.insert(a.canonical()), "seed {seed}: repeated answer {:?}", a.values);
        }
    }
}

#[test]
fn sld_agrees_on_loop_free_programs() {
    let gen = GenConfig::default();
    let mut checked = 0;
    for seed in 20_000..21_000 {
        let case = random_case(seed, &gen, false);
        if !case.program.tabled.is_empty() {
            continue;
        }
        let sld = sld_solve(&case.program, &case.query, &SldConfig::with_bound(64));
        assert!(sld.is_complete());
        let u = universe(&case.program, &case.query);
        let bu = bottomup_solve(&case.program, &case.query).unwrap();
        assert_eq!(ground_over(&sld.ordered, &u), bu.answers, "seed {seed}");
        checked += 1;
    }
    assert!(checked > 50);
}

#[test]
fn bottomup_monotone_in_facts() {
    let gen = GenConfig::default();
    for seed in 0..200 {
        let case = random_case(seed, &gen, false);
        let before = bottomup_solve(&case.program, &case.query).unwrap();
        let extra = format!("{}{}.\n", case.source, case.query_text.replace(['X', 'Y', 'Z', 'W'], "c0"));
        let bigger = parse(&extra).unwrap();
        let after = bottomup_solve(&bigger, &case.query).unwrap();
        let u = universe(&bigger, &case.query);
        let before_grounded = ground_over(&before.answers.iter().cloned().collect::<Vec<_>>(), &u);
        assert!(before_grounded.is_subset(&ground_over(&after.answers.iter().cloned().collect::<Vec<_>>(), &u)));
    }
}

#[test]
fn query_answers_are_instances_of_the_query() {
    let p = parse("p(X,Y) :- q(X,Y). q(X,Y) :- p(X,Z), t(Z,Y). q(a,b). t(b,c).").unwrap();
    let q = parse_query("p(a,Y)").unwrap();
    let run = tp_solve(&p, &q, &cfg()).unwrap();
    let ys: Vec<String> = run.answers.iter().map(|a| a.values[0].to_string()).collect();
    assert_eq!(ys, ["b", "c"]);
}

fn small_term(depth: u32) -> BoxedStrategy<Term> {
    let leaf = prop_oneof![
        (0u32..3).prop_map(Term::var),
        prop::sample::select(vec!["a", "b"]).prop_map(Term::constant),
    ];
    leaf.prop_recursive(depth, 8, 2, |inner| {
        (prop::sample::select(vec!["f", "g"]), prop::collection::vec(inner, 1..=2))
            .prop_map(|(f, args)| Term::compound(f, args))
    })
    .boxed()
}

fn small_atom() -> impl Strategy<Value = Atom> {
    prop::collection::vec(small_term(2), 0..=3).prop_map(|args| Atom::new("p", args))
}

fn shift(a: &Atom, by: u32) -> Atom {
    let vars = a.vars();
    let to: Vec<Term> = vars.iter().map(|v| Term::var(v.0 + by)).collect();
    Substitution::from_pairs(&vars, &to).apply_atom(a)
}

proptest! {
    #[test]
    fn unifier_unifies_and_is_idempotent(a in small_atom(), b in small_atom()) {
        if let Some(s) = unify(&a, &b, true) {
            prop_assert_eq!(s.apply_atom(&a), s.apply_atom(&b));
            let once = s.apply_atom(&a);
            prop_assert_eq!(s.apply_atom(&once), once);
            for (v, t) in s.iter() {
                prop_assert_ne!(t, &Term::Var(*v));
            }
        }
    }

    #[test]
    fn unifier_is_most_general(a in small_atom(), b in small_atom(), ground in prop::collection::vec(prop::sample::select(vec!["a", "b"]), 3)) {
        // Any grounding that unifies a and b factors through the mgu.
        let vars: Vec<VarId> = (0..3).map(VarId).collect();
        let g: Vec<Term> = ground.iter().map(|c| Term::constant(c)).collect();
        let sigma = Substitution::from_pairs(&vars, &g);
        if sigma.apply_atom(&a) == sigma.apply_atom(&b) {
            let mgu = unify(&a, &b, true);
            prop_assert!(mgu.is_some());
            let mgu = mgu.unwrap();
            let through = mgu.compose(&sigma);
            prop_assert_eq!(sigma.apply_atom(&through.apply_atom(&a)), sigma.apply_atom(&a));
        }
    }

    #[test]
    fn variance_matches_canonical_form(a in small_atom(), b in small_atom(), by in 0u32..5) {
        prop_assert!(is_variant(&a, &a));
        prop_assert!(is_variant(&a, &shift(&a, by)));
        prop_assert_eq!(is_variant(&a, &b), canonicalize(&a) == canonicalize(&b));
        prop_assert_eq!(is_variant(&a, &b), is_variant(&b, &a));
        prop_assert_eq!(canonicalize(&canonicalize(&a)), canonicalize(&a));
    }

    #[test]
    fn variance_is_transitive(a in small_atom(), by1 in 0u32..4, by2 in 0u32..4) {
        let b = shift(&a, by1);
        let c = shift(&b, by2);
        prop_assert!(is_variant(&a, &c));
    }

    #[test]
    fn compose_matches_sequential_application(t in small_term(3), x in small_term(1), y in small_term(1)) {
        let s1 = Substitution::from_pairs(&[VarId(0)], &[x]);
        let s2 = Substitution::from_pairs(&[VarId(1)], &[y]);
        prop_assert_eq!(s1.compose(&s2).apply(&t), s2.apply(&s1.apply(&t)));
    }

    #[test]
    fn canonical_tuples_are_stable(ts in prop::collection::vec(small_term(2), 0..4)) {
        let c = canonicalize_terms(&ts);
        prop_assert_eq!(canonicalize_terms(&c), c);
    }

    #[test]
    fn print_parse_roundtrip(seed in 0u64..10_000) {
        let case = random_case(seed, &GenConfig::default(), false);
        let again = parse(&case.program.to_string()).unwrap();
        prop_assert_eq!(&again.clauses, &case.program.clauses);
        prop_assert_eq!(&again.tabled, &case.program.tabled);
    }

    #[test]
    fn differential_random_seeds(seed in 100_000u64..1_000_000) {
        let case = random_case(seed, &GenConfig::default(), false);
        if let Some((tp, oracle)) = compare(&case.program, &case.query, false) {
            prop_assert_eq!(tp, oracle);
        }
    }
}
