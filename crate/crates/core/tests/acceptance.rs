//! End-to-end acceptance run over the case-study curve y^2 + y = x^3 + 1 over F_4
//! and a small projective-line instance over F_3. Prints one line per criterion.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ccma::document::{grid, InstanceDocument};
use ccma::optimizer::{objective_of, optimize, Criterion, OptimizationResult, Scope, SearchConfig, Strategy};
use ccma::{CcmaInstance, CountRule, Elem, Field, Matrix, RunConfig};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn fixture(name: &str) -> RunConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    RunConfig::from_json(&text).unwrap()
}

fn build(name: &str) -> CcmaInstance {
    fixture(name).build().unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rows(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn random_invertible(n: usize, f: &Field, rng: &mut ChaCha8Rng) -> Matrix {
    loop {
        let rows: Vec<Vec<Elem>> =
            (0..n).map(|_| (0..n).map(|_| Elem(rng.gen_range(0..f.order()))).collect()).collect();
        let m = Matrix::from_rows(&rows).unwrap();
        if m.inverse(f).is_some() {
            return m;
        }
    }
}

fn baseline_reproduction() -> Check {
    let start = Instant::now();
    let inst = build("baseline.json");
    let f = inst.field();
    let t2d = rows(&[
        "0 0 0 1 0 0 0 0",
        "w2 0 1 0 w 0 w2 0",
        "w2 0 w 0 w 0 1 0",
        "w2 w2 0 w2 w 0 0 w",
        "w2 w2 w2 w2 w w w w",
        "w w2 0 1 w2 0 0 1",
        "w w2 w 1 w2 1 w2 1",
        "w 1 0 w2 w2 0 0 w",
    ]);
    let c = rows(&["1 0 0 0 w 0 w2 w", "0 1 0 0 0 w2 w 0", "0 0 1 0 1 0 0 1", "0 0 0 1 1 w 0 w"]);
    let ct = rows(&["1 w 1 w 1 1 w 0", "1 0 w2 w 1 w2 1 w", "1 w w w2 1 w2 w w", "0 w w2 w 1 w2 0 0"]);
    ensure(grid(inst.t2d(), f) == t2d, || format!("T_2D = {:?}", grid(inst.t2d(), f)))?;
    ensure(grid(inst.c(), f) == c, || format!("C = {:?}", grid(inst.c(), f)))?;
    ensure(grid(inst.r(), f) == ct, || format!("C T^-1 = {:?}", grid(inst.r(), f)))?;
    let m = inst.metrics();
    let got = (m.nz_td, m.nz_r, m.n1_td, m.n1_r, m.mu_s0, m.mu_s1, m.mu_s);
    ensure(got == (10, 5, 5, 10, 71, 76, 51), || format!("metrics {got:?}"))?;
    let took = start.elapsed();
    ensure(took < Duration::from_secs(1), || format!("took {took:?}"))?;
    Ok(format!("matrices and metrics match, {took:.2?}"))
}

fn exhaustive_oracle(label: &str, inst: &CcmaInstance) -> Result<Duration, String> {
    let start = Instant::now();
    let alg = inst.algorithm();
    if let Some(m) = alg.find_mismatch(alg.all_pairs()) {
        return Err(format!("{label}: mismatch at {:?} * {:?} after {} pairs", m.x, m.y, m.checked));
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(30), || format!("{label}: took {took:?}"))?;
    Ok(took)
}

fn correctness_oracle(results: &[(&str, &OptimizationResult)]) -> Check {
    let mut slowest = Duration::ZERO;
    let mut count = 0;
    for name in ["baseline.json", "design_a.json", "design_b.json"] {
        slowest = slowest.max(exhaustive_oracle(name, &build(name))?);
        count += 1;
    }
    for (label, r) in results {
        slowest = slowest.max(exhaustive_oracle(label, &r.instance)?);
        count += 1;
    }
    Ok(format!("{count} instances x 65536 pairs agree with schoolbook multiplication, slowest {slowest:.2?}"))
}

fn search(scope: Scope, jobs: usize) -> OptimizationResult {
    let mut cfg = SearchConfig::new(Criterion::Zeros, scope, Strategy::ExhaustiveProjective);
    cfg.reference = Some(52);
    optimize(&build("kernel.json"), &cfg, jobs).unwrap()
}

fn optimization_targets(td: &OptimizationResult, joint: &OptimizationResult, cf: &OptimizationResult, took: Duration) -> Check {
    for r in [td, joint, cf] {
        ensure(r.complete, || format!("{:?} search did not complete", r.config.scope))?;
    }
    ensure(td.report.nz_td == 16, || format!("TD-only reached N_z(T_D) = {}", td.report.nz_td))?;
    ensure(joint.report.mu_s0 <= 53, || format!("joint reached mu_s0 = {}", joint.report.mu_s0))?;
    ensure(cf.report.mu_s0 <= 52, || format!("code-first reached mu_s0 = {}", cf.report.mu_s0))?;
    let doc = InstanceDocument::new(&cf.instance, CountRule::default(), Some(cf)).map_err(|e| e.to_string())?;
    let beaten = doc.search.as_ref().and_then(|s| s.reference_beaten);
    ensure(beaten.is_some(), || "document does not record the comparison with 52".into())?;
    ensure(took < Duration::from_secs(15 * 60), || format!("searches took {took:?}"))?;
    Ok(format!(
        "N_z(T_D) = {}, joint mu_s0 = {}, code-first mu_s0 = {} (52 beaten: {}), {:.1?} single-threaded",
        td.report.nz_td,
        joint.report.mu_s0,
        cf.report.mu_s0,
        beaten.unwrap(),
        took
    ))
}

fn theorem_invariants() -> Check {
    let inst = build("baseline.json");
    let f = inst.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let trials = 10_000;
    let mut worst = (0, usize::MAX, usize::MAX, usize::MAX);
    for _ in 0..trials {
        let sigma = random_invertible(inst.n(), &f, &mut rng);
        let b = inst.rebase(&sigma).map_err(|e| e.to_string())?;
        let m = b.metrics();
        let w = b.min_codeword_weight().unwrap();
        ensure(m.nz_td <= 16, || format!("N_z(T_D) = {}", m.nz_td))?;
        ensure(m.mu_s0_ua >= 32 && m.mu_s0 > 32, || format!("mu_s0(U_A) = {}, mu_s0 = {}", m.mu_s0_ua, m.mu_s0))?;
        ensure(w >= 4, || format!("codeword of weight {w}"))?;
        worst = (worst.0.max(m.nz_td), worst.1.min(m.mu_s0_ua), worst.2.min(m.mu_s0), worst.3.min(w));
    }
    Ok(format!(
        "{trials} basis changes: max N_z(T_D) = {}, min mu_s0(U_A) = {}, min mu_s0 = {}, min weight = {}",
        worst.0, worst.1, worst.2, worst.3
    ))
}

fn counter_agreement() -> Check {
    let inst = build("baseline.json");
    let f = inst.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let b = inst.rebase(&random_invertible(inst.n(), &f, &mut rng)).map_err(|e| e.to_string())?;
        let x: Vec<Elem> = (0..4).map(|_| Elem(rng.gen_range(0..4))).collect();
        let y: Vec<Elem> = (0..4).map(|_| Elem(rng.gen_range(0..4))).collect();
        let (_, counts) = b.algorithm().instrumented_multiply(&x, &y);
        let m = b.metrics();
        ensure(counts.scalar == m.mu_s, || format!("counted {} scalar, formula {}", counts.scalar, m.mu_s))?;
        ensure(counts.bilinear == 8, || format!("counted {} bilinear", counts.bilinear))?;
    }
    Ok("100 instances: counted scalar multiplications equal mu_s, bilinear = 8".into())
}

fn invariance_suites() -> Check {
    let inst = build("baseline.json");
    let f = inst.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let m0 = inst.metrics();
    let counts = |m: &ccma::ComplexityReport| (m.nz_td, m.nz_r, m.n1_td, m.n1_r);
    for _ in 0..100 {
        let mut perm: Vec<usize> = (0..inst.big_n()).collect();
        perm.shuffle(&mut rng);
        let p = inst.permute_places(&perm).map_err(|e| e.to_string())?;
        ensure(counts(&p.metrics()) == counts(&m0), || format!("permutation {perm:?} changed the counts"))?;
    }
    let k = inst.supplement().len();
    for _ in 0..100 {
        let tau = random_invertible(k, &f, &mut rng);
        let sup: Vec<_> = (0..k)
            .map(|i| ccma::CurveFunction::combine(tau.row(i), inst.supplement(), &f))
            .collect();
        let s = inst.with_supplement(&sup).map_err(|e| e.to_string())?;
        ensure(s.r() == inst.r(), || "re-based supplement changed R".into())?;
    }
    for name in ["kernel.json", "design_a.json", "design_b.json"] {
        let i = build(name);
        let inv = i.t2d().inverse(i.field()).unwrap();
        ensure(i.is_kernel_type() && *i.r() == inv.row_range(0..i.n()), || format!("{name}: R is not the top of T_2D^-1"))?;
    }
    Ok("100 place permutations, 100 supplement re-basings, 3 kernel-type fixtures".into())
}

fn quotient_completeness() -> Check {
    let start = Instant::now();
    let inst = build("line_f3.json");
    let f = inst.field().clone();
    let mut gl = Vec::new();
    for code in 0..81u32 {
        let e: Vec<Elem> = (0..4).map(|i| Elem(code / 3u32.pow(i) % 3)).collect();
        let m = Matrix::from_rows(&[e[..2].to_vec(), e[2..].to_vec()]).unwrap();
        if m.inverse(&f).is_some() {
            gl.push(m);
        }
    }
    ensure(gl.len() == 48, || format!("|GL_2(F_3)| = {}", gl.len()))?;
    let mut summary = Vec::new();
    for scope in [Scope::TdOnly, Scope::Joint, Scope::CodeFirst] {
        let cfg = SearchConfig::new(Criterion::Zeros, scope, Strategy::ExhaustiveProjective);
        let brute = gl
            .iter()
            .map(|s| objective_of(&inst.rebase(s).unwrap(), &cfg))
            .max()
            .unwrap();
        let found = optimize(&inst, &cfg, 1).map_err(|e| e.to_string())?.objective;
        ensure(found == brute, || format!("{scope:?}: search {found:?}, brute force {brute:?}"))?;
        summary.push(format!("{scope:?} {found:?}"));
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(60), || format!("took {took:?}"))?;
    Ok(format!("optima equal over all 48 elements of GL_2(F_3): {}", summary.join(", ")))
}

fn determinism(serial: &OptimizationResult, parallel: &OptimizationResult) -> Check {
    let inst = build("baseline.json");
    let a = InstanceDocument::new(&inst, CountRule::default(), None).unwrap().to_json();
    let b = InstanceDocument::new(&build("baseline.json"), CountRule::default(), None).unwrap().to_json();
    ensure(a == b, || "construct documents differ".into())?;
    ensure(serial.sigma == parallel.sigma, || "1 and 4 workers chose different bases".into())?;
    let doc = |r: &OptimizationResult| InstanceDocument::new(&r.instance, CountRule::default(), Some(r)).unwrap().to_json();
    ensure(doc(serial) == doc(parallel), || "1 and 4 workers wrote different documents".into())?;
    ensure(serial.log_csv() == parallel.log_csv(), || "search logs differ".into())?;
    let kernel = build("kernel.json");
    let mut cfg = SearchConfig::new(Criterion::ZerosOnes, Scope::Joint, Strategy::Hillclimb);
    cfg.budget = 20_000;
    cfg.seed = 17;
    let h1 = optimize(&kernel, &cfg, 1).map_err(|e| e.to_string())?;
    let h2 = optimize(&kernel, &cfg, 4).map_err(|e| e.to_string())?;
    ensure(doc(&h1) == doc(&h2) && h1.log_csv() == h2.log_csv(), || "hillclimb runs differ".into())?;
    Ok("construct, exhaustive (1 vs 4 workers) and seeded hillclimb outputs are byte-identical".into())
}

fn main() -> ExitCode {
    let mut failures = 0;
    let mut report = |n: usize, name: &str, c: Check| match c {
        Ok(msg) => println!("criterion {n} PASS  {name}: {msg}"),
        Err(msg) => {
            failures += 1;
            println!("criterion {n} FAIL  {name}: {msg}");
        }
    };

    report(1, "baseline reproduction", baseline_reproduction());

    let start = Instant::now();
    let td = search(Scope::TdOnly, 1);
    let joint = search(Scope::Joint, 1);
    let cf = search(Scope::CodeFirst, 1);
    let took = start.elapsed();
    let joint_parallel = search(Scope::Joint, 4);

    report(2, "correctness oracle", correctness_oracle(&[("td-only", &td), ("joint", &joint), ("code-first", &cf)]));
    report(3, "optimization targets", optimization_targets(&td, &joint, &cf, took));
    report(4, "theorem-backed invariants", theorem_invariants());
    report(5, "counter agreement", counter_agreement());
    report(6, "invariance suites", invariance_suites());
    report(7, "quotient completeness", quotient_completeness());
    report(8, "determinism", determinism(&joint, &joint_parallel));

    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
