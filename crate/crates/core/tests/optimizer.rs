use std::path::PathBuf;

use ccma::optimizer::{
    enumerate_codewords, objective_of, optimize, Criterion, OptimizationResult, Scope, SearchConfig, Strategy,
};
use ccma::{CcmaInstance, Elem, Field, Matrix, RunConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn build(name: &str) -> CcmaInstance {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    RunConfig::from_json(&std::fs::read_to_string(path).unwrap()).unwrap().build().unwrap()
}

fn gl2(f: &Field) -> Vec<Matrix> {
    let q = f.order();
    let mut out = Vec::new();
    for code in 0..q.pow(4) {
        let e: Vec<Elem> = (0..4).map(|i| Elem(code / q.pow(i) % q)).collect();
        let m = Matrix::from_rows(&[e[..2].to_vec(), e[2..].to_vec()]).unwrap();
        if m.inverse(f).is_some() {
            out.push(m);
        }
    }
    out
}

fn oracle_sample(inst: &CcmaInstance, seed: u64) {
    let alg = inst.algorithm();
    assert!(alg.find_mismatch(alg.random_pairs(100, seed)).is_none());
}

#[test]
fn codeword_table_of_the_case_study() {
    let inst = build("kernel.json");
    let t = enumerate_codewords(&inst).unwrap();
    assert_eq!(t.words.len(), 256);
    assert_eq!(t.classes.len(), 85);
    assert_eq!(t.words[0].weight, 0);
    assert_eq!(t.min_nonzero_weight(), Some(4));
    let f = inst.field();
    for c in &t.classes {
        for l in 2..4 {
            let scaled: Vec<Elem> = c.word.iter().map(|&a| f.mul(Elem(l), a)).collect();
            let w = scaled.iter().filter(|e| !e.is_zero()).count();
            assert_eq!(w, c.weight);
        }
    }
}

#[test]
fn greedy_reaches_the_zero_bound() {
    let inst = build("kernel.json");
    let cfg = SearchConfig::new(Criterion::Zeros, Scope::TdOnly, Strategy::GreedyMinweight);
    let r = optimize(&inst, &cfg, 1).unwrap();
    assert_eq!(r.report.nz_td, 16);
    assert!(r.nz_bound_attained);
    // every selected codeword has minimum weight
    let td = r.instance.td();
    for j in 0..td.cols() {
        assert_eq!(td.column(j).iter().filter(|e| !e.is_zero()).count(), 4);
    }
}

#[test]
fn results_never_fall_below_the_starting_basis() {
    let inst = build("kernel.json");
    for criterion in [Criterion::Zeros, Criterion::Ones, Criterion::ZerosOnes] {
        for scope in [Scope::TdOnly, Scope::Joint, Scope::CodeFirst] {
            for strategy in [Strategy::ExhaustiveScaled, Strategy::GreedyMinweight, Strategy::Hillclimb] {
                let mut cfg = SearchConfig::new(criterion, scope, strategy);
                cfg.budget = 3_000;
                cfg.restarts = 3;
                let r = optimize(&inst, &cfg, 1).unwrap();
                assert!(r.objective >= r.initial_objective, "{criterion:?} {scope:?} {strategy:?}");
                assert_eq!(objective_of(&r.instance, &cfg), r.objective);
                r.instance.bounds_check().unwrap();
                oracle_sample(&r.instance, 1);
            }
        }
    }
}

#[test]
fn small_budget_is_flagged() {
    let inst = build("kernel.json");
    let mut cfg = SearchConfig::new(Criterion::Zeros, Scope::Joint, Strategy::ExhaustiveProjective);
    cfg.budget = 10_000;
    cfg.target = Some(40);
    let r = optimize(&inst, &cfg, 2).unwrap();
    assert!(r.budget_exhausted && !r.complete);
    assert_eq!(r.candidates_evaluated, 10_000);
    assert_eq!(r.target_met, Some(false));
    let again = optimize(&inst, &cfg, 3).unwrap();
    assert_eq!(again.sigma, r.sigma);
}

#[test]
fn hillclimb_is_reproducible() {
    let inst = build("kernel.json");
    let mut cfg = SearchConfig::new(Criterion::ZerosOnes, Scope::Joint, Strategy::Hillclimb);
    cfg.budget = 8_000;
    cfg.seed = 3;
    let a = optimize(&inst, &cfg, 1).unwrap();
    let b = optimize(&inst, &cfg, 2).unwrap();
    assert_eq!(a.sigma, b.sigma);
    assert_eq!(a.log_csv(), b.log_csv());
}

#[test]
fn projective_search_rejects_ones_criteria() {
    let inst = build("kernel.json");
    let cfg = SearchConfig::new(Criterion::Ones, Scope::TdOnly, Strategy::ExhaustiveProjective);
    assert!(optimize(&inst, &cfg, 1).is_err());
    // the starting basis must be kernel-type
    let cfg = SearchConfig::new(Criterion::Zeros, Scope::TdOnly, Strategy::GreedyMinweight);
    assert!(optimize(&build("baseline.json"), &cfg, 1).is_err());
}

/// With scalings, exhaustive search covers every basis up to order, so it
/// must match a full enumeration of GL_2 for every criterion.
#[test]
fn scaled_search_matches_gl2_on_the_line() {
    let inst = build("line_f3.json");
    let gl = gl2(inst.field());
    assert_eq!(gl.len(), 48);
    for criterion in [Criterion::Zeros, Criterion::Ones, Criterion::ZerosOnes] {
        for scope in [Scope::TdOnly, Scope::Joint, Scope::CodeFirst] {
            let cfg = SearchConfig::new(criterion, scope, Strategy::ExhaustiveScaled);
            let brute = gl.iter().map(|s| objective_of(&inst.rebase(s).unwrap(), &cfg)).max().unwrap();
            let r: OptimizationResult = optimize(&inst, &cfg, 1).unwrap();
            assert_eq!(r.objective, brute, "{criterion:?} {scope:?}");
        }
    }
}

#[test]
fn basis_changes_preserve_the_product() {
    let inst = build("kernel.json");
    let f = inst.field().clone();
    let same = inst.rebase(&Matrix::identity(4)).unwrap();
    assert_eq!(same.metrics(), inst.metrics());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..20 {
        let sigma = loop {
            let rows: Vec<Vec<Elem>> = (0..4).map(|_| (0..4).map(|_| Elem(rng.gen_range(0..4))).collect()).collect();
            let m = Matrix::from_rows(&rows).unwrap();
            if m.inverse(&f).is_some() {
                break m;
            }
        };
        let b = inst.rebase(&sigma).unwrap();
        oracle_sample(&b, i);
        // a pure scaling keeps both zero patterns
        let mut diag = Matrix::identity(4);
        for k in 0..4 {
            diag[(k, k)] = Elem(rng.gen_range(1..4));
        }
        let s = b.rebase(&diag).unwrap();
        assert_eq!((s.metrics().nz_td, s.metrics().nz_r), (b.metrics().nz_td, b.metrics().nz_r));
    }
    let singular = Matrix::zeros(4, 4);
    assert!(inst.rebase(&singular).is_err());
}
