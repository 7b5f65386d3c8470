//! Seeded random function-free, cut-free programs for differential testing.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::program::{parse, parse_query, Program, Query};

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub max_preds: usize,
    pub max_arity: usize,
    pub max_consts: usize,
    pub max_clauses: usize,
    pub max_body: usize,
    /// Probability that a fact argument is a variable.
    pub fact_var_prob: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { max_preds: 4, max_arity: 2, max_consts: 8, max_clauses: 12, max_body: 3, fact_var_prob: 0.1 }
    }
}

#[derive(Clone, Debug)]
pub struct Case {
    pub seed: u64,
    pub source: String,
    pub query_text: String,
    pub program: Program,
    pub query: Query,
}

const VARS: [&str; 4] = ["X", "Y", "Z", "W"];

fn arg(rng: &mut impl Rng, consts: &[String], var_prob: f64, nvars: usize) -> String {
    if rng.gen_bool(var_prob) {
        VARS[rng.gen_range(0..nvars)].to_string()
    } else {
        consts.choose(rng).expect("at least one constant").clone()
    }
}

fn atom(rng: &mut impl Rng, name: &str, arity: usize, consts: &[String], var_prob: f64, nvars: usize) -> String {
    if arity == 0 {
        return name.to_string();
    }
    let args: Vec<String> = (0..arity).map(|_| arg(rng, consts, var_prob, nvars)).collect();
    format!("{name}({})", args.join(","))
}

/// Program source text drawn from `rng`.
pub fn random_source(rng: &mut impl Rng, cfg: &GenConfig) -> (String, Vec<(String, usize)>, Vec<String>) {
    let npreds = rng.gen_range(1..=cfg.max_preds);
    let preds: Vec<(String, usize)> = (0..npreds)
        .map(|i| (format!("p{i}"), rng.gen_range(0..=cfg.max_arity)))
        .collect();
    let nconsts = rng.gen_range(1..=cfg.max_consts);
    let consts: Vec<String> = (0..nconsts).map(|i| format!("c{i}")).collect();
    let nclauses = rng.gen_range(1..=cfg.max_clauses);
    let mut src = String::new();
    for _ in 0..nclauses {
        let (name, arity) = preds.choose(rng).expect("a predicate");
        if rng.gen_bool(0.4) {
            src += &atom(rng, name, *arity, &consts, cfg.fact_var_prob, 2);
        } else {
            let nvars = rng.gen_range(1..=VARS.len());
            src += &atom(rng, name, *arity, &consts, 0.75, nvars);
            src += " :- ";
            let body: Vec<String> = (0..rng.gen_range(1..=cfg.max_body))
                .map(|_| {
                    let (b, ar) = preds.choose(rng).expect("a predicate");
                    atom(rng, b, *ar, &consts, 0.8, nvars)
                })
                .collect();
            src += &body.join(", ");
        }
        src += ".\n";
    }
    (src, preds, consts)
}

/// A program and a single-atom query. With `tabled_query`, programs are
/// redrawn until some predicate is tabled and the query uses one of them.
pub fn random_case(seed: u64, cfg: &GenConfig, tabled_query: bool) -> Case {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let (source, preds, consts) = random_source(&mut rng, cfg);
        let program = parse(&source).expect("generated programs parse");
        let candidates: Vec<&(String, usize)> = if tabled_query {
            preds.iter().filter(|(n, a)| program.is_tabled(&crate::terms::PredKey::new(n, *a))).collect()
        } else {
            preds.iter().collect()
        };
        let Some((name, arity)) = candidates.choose(&mut rng).copied() else { continue };
        let query_text = atom(&mut rng, name, *arity, &consts, 0.7, VARS.len());
        let query = parse_query(&query_text).expect("generated queries parse");
        return Case { seed, source, query_text, program, query };
    }
}
