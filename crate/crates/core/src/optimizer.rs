//! Search over bases of `L(D)` for algorithms with fewer scalar
//! multiplications.
//!
//! A basis of `L(D)` is determined, up to order, by the `n` codewords it
//! produces in `T_D`. With the kernel supplement fixed, `R` for a new set of
//! codewords `W` is `(K W)^{-1} K` where `K` spans the left kernel of the
//! supplement columns of `T_2D`, so candidates are scored without rebuilding
//! an instance. Zero counts do not depend on scaling the codewords, so for the
//! zeros criterion it is enough to visit one representative per scalar class.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Elem, Field, Matrix};
use crate::error::{Error, Result};
use crate::instance::{CcmaInstance, ComplexityReport, CountRule};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Criterion {
    #[serde(rename = "zeros")]
    Zeros,
    #[serde(rename = "ones")]
    Ones,
    #[serde(rename = "zeros+ones")]
    ZerosOnes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    /// Maximize the criterion on `T_D`.
    TdOnly,
    /// Maximize `2 crit(T_D) + crit(R)`.
    Joint,
    /// Among bases reaching the most zeros in `T_D`, maximize `crit(R)`.
    CodeFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    ExhaustiveProjective,
    ExhaustiveScaled,
    GreedyMinweight,
    #[serde(alias = "random-restart-hillclimb")]
    Hillclimb,
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

fn default_restarts() -> usize {
    16
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub criterion: Criterion,
    pub scope: Scope,
    pub strategy: Strategy,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    /// Success threshold on the complexity matching the criterion
    /// (`mu_s0` for zeros, `mu_s1` for ones, `mu_s` for both).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<usize>,
    /// A published value to compare against; the result records whether it is beaten.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<usize>,
    #[serde(default)]
    pub count_rule: CountRule,
}

impl SearchConfig {
    pub fn new(criterion: Criterion, scope: Scope, strategy: Strategy) -> SearchConfig {
        SearchConfig {
            criterion,
            scope,
            strategy,
            budget: DEFAULT_BUDGET,
            seed: 0,
            restarts: default_restarts(),
            target: None,
            reference: None,
            count_rule: CountRule::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.strategy == Strategy::ExhaustiveProjective && self.criterion != Criterion::Zeros {
            return Err(Error::InvalidSearch(
                "exhaustive-projective only supports the zeros criterion; use exhaustive-scaled".into(),
            ));
        }
        if self.strategy == Strategy::Hillclimb && self.restarts == 0 {
            return Err(Error::InvalidSearch("hillclimb needs at least one restart".into()));
        }
        Ok(())
    }

    /// The complexity a target or reference is compared with.
    pub fn headline(&self, m: &ComplexityReport) -> usize {
        match self.criterion {
            Criterion::Zeros => m.mu_s0,
            Criterion::Ones => m.mu_s1,
            Criterion::ZerosOnes => m.mu_s,
        }
    }
}

/// One codeword of the code `Ev_P(L(D))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    /// Coordinates in the current basis of `L(D)`.
    pub message: Vec<Elem>,
    pub word: Vec<Elem>,
    pub weight: usize,
}

#[derive(Clone, Debug)]
pub struct CodewordTable {
    /// All `q^n` codewords, indexed by message in base-`q` order.
    pub words: Vec<Codeword>,
    /// One codeword per scalar class (first nonzero entry 1), sorted by encoding.
    pub classes: Vec<Codeword>,
}

impl CodewordTable {
    pub fn min_nonzero_weight(&self) -> Option<usize> {
        self.words.iter().filter(|c| c.weight > 0).map(|c| c.weight).min()
    }
}

/// All codewords spanned by the columns of `T_D`.
pub fn enumerate_codewords(inst: &CcmaInstance) -> Result<CodewordTable> {
    let f = inst.field();
    let n = inst.n();
    let q = f.order() as u64;
    let total = q
        .checked_pow(n as u32)
        .filter(|&t| t <= 1 << 22)
        .ok_or_else(|| Error::InvalidSearch("code too large to enumerate".into()))?;
    let td = inst.td();
    let mut words = Vec::with_capacity(total as usize);
    for i in 0..total {
        let mut x = i;
        let message: Vec<Elem> = (0..n)
            .map(|_| {
                let d = x % q;
                x /= q;
                Elem(d as u32)
            })
            .collect();
        let word = td.mul_vec(&message, f);
        let weight = word.iter().filter(|e| !e.is_zero()).count();
        words.push(Codeword { message, word, weight });
    }
    let mut classes: Vec<Codeword> = words
        .iter()
        .filter(|c| c.word.iter().find(|e| !e.is_zero()).is_some_and(|e| e.is_one()))
        .cloned()
        .collect();
    classes.sort_by(|a, b| a.word.cmp(&b.word));
    Ok(CodewordTable { words, classes })
}

/// Objective value; larger is better, compared lexicographically.
pub type Objective = (i64, i64);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub evaluated: u64,
    pub objective: i64,
    pub secondary: i64,
}

#[derive(Clone, Debug)]
pub struct OptimizationResult {
    pub config: SearchConfig,
    /// Basis change from the starting basis: row `i` gives the new function `i`.
    pub sigma: Matrix,
    pub instance: CcmaInstance,
    pub report: ComplexityReport,
    pub initial_report: ComplexityReport,
    pub objective: Objective,
    pub initial_objective: Objective,
    pub candidates_evaluated: u64,
    pub independent_candidates: u64,
    pub total_candidates: Option<u64>,
    pub complete: bool,
    pub budget_exhausted: bool,
    /// `n (n + g - 1)`.
    pub nz_bound: usize,
    pub nz_bound_attained: bool,
    /// Code-first only: no basis reached the bound, so the best attained value was used.
    pub code_first_fallback: bool,
    pub target_met: Option<bool>,
    pub reference_beaten: Option<bool>,
    pub trajectory: Vec<TrajectoryPoint>,
}

impl OptimizationResult {
    pub fn log_csv(&self) -> String {
        let mut s = String::from("evaluated,objective,secondary\n");
        for p in &self.trajectory {
            s.push_str(&format!("{},{},{}\n", p.evaluated, p.objective, p.secondary));
        }
        s
    }
}

/// A candidate: `n` codewords (columns of the new `T_D`) with their messages.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Candidate {
    objective: Objective,
    /// Concatenated codeword encodings, codewords in ascending order.
    key: Vec<u32>,
    messages: Vec<Vec<Elem>>,
}

fn better(a: &Candidate, b: &Candidate) -> bool {
    match a.objective.cmp(&b.objective) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => a.key < b.key,
    }
}

fn pick(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if better(&b, &a) { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Precomputed data shared by all candidate evaluations.
struct Evaluator<'a> {
    field: &'a Field,
    n: usize,
    big_n: usize,
    config: &'a SearchConfig,
    /// Left kernel of the supplement columns, `n x N`.
    k: Matrix,
    bound: usize,
    classes: Vec<ClassData>,
}

struct ClassData {
    word: Vec<Elem>,
    message: Vec<Elem>,
    zeros: usize,
    /// `K * word`.
    kw: Vec<Elem>,
}

struct Scratch {
    m: Vec<Elem>,
    inv: Vec<Elem>,
    r: Vec<Elem>,
}

impl<'a> Evaluator<'a> {
    fn new(inst: &'a CcmaInstance, table: &CodewordTable, config: &'a SearchConfig) -> Result<Evaluator<'a>> {
        let f = inst.field();
        let n = inst.n();
        let big_n = inst.big_n();
        if !inst.is_kernel_type() {
            return Err(Error::InvalidSearch("the search needs a kernel-type instance".into()));
        }
        let tc = inst.t2d().columns(n..big_n);
        let k = tc.left_null_space(f);
        if k.rows() != n {
            return Err(Error::InvalidSearch("supplement columns have unexpected rank".into()));
        }
        let g = inst.curve().genus() as usize;
        let bound = n * (n + g - 1);
        let deg_d = inst.divisor().degree() as usize;
        let classes = table
            .classes
            .iter()
            .map(|c| {
                let zeros = big_n - c.weight;
                if zeros > deg_d {
                    return Err(Error::BoundViolated(format!(
                        "codeword with {zeros} zeros exceeds deg D = {deg_d}"
                    )));
                }
                Ok(ClassData {
                    word: c.word.clone(),
                    message: c.message.clone(),
                    zeros,
                    kw: k.mul_vec(&c.word, f),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Evaluator { field: f, n, big_n, config, k, bound, classes })
    }

    fn scratch(&self) -> Scratch {
        Scratch {
            m: vec![Elem::ZERO; self.n * self.n],
            inv: vec![Elem::ZERO; self.n * self.n],
            r: vec![Elem::ZERO; self.n * self.big_n],
        }
    }

    fn needs_r(&self) -> bool {
        self.config.scope != Scope::TdOnly
    }

    fn weigh_zeros(&self) -> bool {
        self.config.criterion != Criterion::Ones
    }

    fn weigh_ones(&self) -> bool {
        self.config.criterion != Criterion::Zeros
    }

    /// Inverts `K W` in place; false when the codewords are dependent.
    fn invert(&self, idx: &[usize], s: &mut Scratch) -> bool {
        let n = self.n;
        let f = self.field;
        for (j, &c) in idx.iter().enumerate() {
            for i in 0..n {
                s.m[i * n + j] = self.classes[c].kw[i];
            }
        }
        for i in 0..n {
            for j in 0..n {
                s.inv[i * n + j] = if i == j { Elem::ONE } else { Elem::ZERO };
            }
        }
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !s.m[r * n + col].is_zero()) else {
                return false;
            };
            if p != col {
                for j in 0..n {
                    s.m.swap(p * n + j, col * n + j);
                    s.inv.swap(p * n + j, col * n + j);
                }
            }
            let pinv = f.inv(s.m[col * n + col]).expect("pivot");
            for j in 0..n {
                s.m[col * n + j] = f.mul(s.m[col * n + j], pinv);
                s.inv[col * n + j] = f.mul(s.inv[col * n + j], pinv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = s.m[r * n + col];
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    s.m[r * n + j] = f.sub(s.m[r * n + j], f.mul(factor, s.m[col * n + j]));
                    s.inv[r * n + j] = f.sub(s.inv[r * n + j], f.mul(factor, s.inv[col * n + j]));
                }
            }
        }
        true
    }

    /// `R = (K W)^{-1} K` into the scratch buffer, row `j` matching codeword `j`.
    fn fill_r(&self, s: &mut Scratch) {
        let (n, big_n, f) = (self.n, self.big_n, self.field);
        for i in 0..n {
            for c in 0..big_n {
                let mut acc = Elem::ZERO;
                for t in 0..n {
                    let a = s.inv[i * n + t];
                    if !a.is_zero() {
                        acc = f.add(acc, f.mul(a, self.k[(t, c)]));
                    }
                }
                s.r[i * big_n + c] = acc;
            }
        }
    }

    /// Score a set of class indices. With `scaled`, each codeword is also
    /// rescaled to maximize the ones part; the choice is separable by column.
    fn evaluate(&self, idx: &[usize], scaled: bool, s: &mut Scratch) -> Result<Option<Candidate>> {
        if !self.invert(idx, s) {
            return Ok(None);
        }
        let f = self.field;
        let rule = self.config.count_rule;
        let nz_td: usize = idx.iter().map(|&c| self.classes[c].zeros).sum();
        if nz_td > self.bound {
            return Err(Error::BoundViolated(format!("N_z(T_D) = {nz_td} > {}", self.bound)));
        }
        if self.needs_r() {
            self.fill_r(s);
        }
        let nz_r = if self.needs_r() { s.r.iter().filter(|e| e.is_zero()).count() } else { 0 };
        let mut ones_td = 0usize;
        let mut ones_r = 0usize;
        let mut scales = vec![Elem::ONE; self.n];
        if self.weigh_ones() {
            for (j, &c) in idx.iter().enumerate() {
                let word = &self.classes[c].word;
                let row = &s.r[j * self.big_n..(j + 1) * self.big_n];
                let count = |lambda: Elem| -> (usize, usize) {
                    let li = f.inv(lambda).expect("nonzero");
                    let td = word.iter().filter(|&&a| rule.is_unit_like(f.mul(lambda, a), f)).count();
                    let r = if self.needs_r() {
                        row.iter().filter(|&&b| rule.is_unit_like(f.mul(li, b), f)).count()
                    } else {
                        0
                    };
                    (td, r)
                };
                let score = |(td, r): (usize, usize)| match self.config.scope {
                    Scope::TdOnly => td,
                    Scope::Joint => 2 * td + r,
                    Scope::CodeFirst => r,
                };
                let mut best = (Elem::ONE, count(Elem::ONE));
                if scaled {
                    for lambda in f.elements().skip(2) {
                        let c = count(lambda);
                        // ties keep the smaller scaled codeword
                        if score(c) > score(best.1)
                            || (score(c) == score(best.1) && scaled_word(word, lambda, f) < scaled_word(word, best.0, f))
                        {
                            best = (lambda, c);
                        }
                    }
                }
                scales[j] = best.0;
                ones_td += best.1 .0;
                ones_r += best.1 .1;
            }
        }
        let crit_td = (if self.weigh_zeros() { nz_td } else { 0 } + ones_td) as i64;
        let crit_r = (if self.weigh_zeros() { nz_r } else { 0 } + ones_r) as i64;
        let objective = match self.config.scope {
            Scope::TdOnly => (crit_td, 0),
            Scope::Joint => (2 * crit_td + crit_r, 0),
            Scope::CodeFirst => (nz_td as i64, crit_r),
        };
        let mut pairs: Vec<(Vec<Elem>, Vec<Elem>)> = idx
            .iter()
            .zip(&scales)
            .map(|(&c, &l)| {
                let cd = &self.classes[c];
                (scaled_word(&cd.word, l, f), cd.message.iter().map(|&m| f.mul(m, l)).collect())
            })
            .collect();
        pairs.sort();
        let key = pairs.iter().flat_map(|(w, _)| w.iter().map(|e| e.0)).collect();
        let messages = pairs.into_iter().map(|(_, m)| m).collect();
        Ok(Some(Candidate { objective, key, messages }))
    }
}

fn scaled_word(word: &[Elem], lambda: Elem, f: &Field) -> Vec<Elem> {
    word.iter().map(|&a| f.mul(lambda, a)).collect()
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc.min(u64::MAX as u128) as u64
}

/// Objective of an instance computed from its matrices, for cross-checking
/// the fast evaluation.
pub fn objective_of(inst: &CcmaInstance, config: &SearchConfig) -> Objective {
    let f = inst.field();
    let rule = config.count_rule;
    let crit = |m: &Matrix| -> i64 {
        let z = if config.criterion != Criterion::Ones { m.count_zeros() } else { 0 };
        let o = if config.criterion != Criterion::Zeros {
            m.entries().iter().filter(|&&a| rule.is_unit_like(a, f)).count()
        } else {
            0
        };
        (z + o) as i64
    };
    match config.scope {
        Scope::TdOnly => (crit(inst.td()), 0),
        Scope::Joint => (2 * crit(inst.td()) + crit(inst.r()), 0),
        Scope::CodeFirst => (inst.td().count_zeros() as i64, crit(inst.r())),
    }
}

struct ChunkOutcome {
    best: Option<Candidate>,
    evaluated: u64,
    independent: u64,
    trajectory: Vec<(u64, Objective)>,
}

/// Visit the `k`-subsets of `0..m` whose first element is `first`, in
/// lexicographic order, stopping after `limit` subsets.
fn scan_chunk(ev: &Evaluator, first: usize, k: usize, limit: u64, scaled: bool) -> Result<ChunkOutcome> {
    let m = ev.classes.len();
    let mut out = ChunkOutcome { best: None, evaluated: 0, independent: 0, trajectory: Vec::new() };
    let mut s = ev.scratch();
    let mut idx: Vec<usize> = (0..k).map(|i| first + i).collect();
    if idx.last().is_some_and(|&l| l >= m) {
        return Ok(out);
    }
    loop {
        if out.evaluated >= limit {
            break;
        }
        out.evaluated += 1;
        if let Some(c) = ev.evaluate(&idx, scaled, &mut s)? {
            out.independent += 1;
            if out.best.as_ref().map_or(true, |b| better(&c, b)) {
                if out.best.as_ref().map_or(true, |b| c.objective > b.objective) {
                    out.trajectory.push((out.evaluated, c.objective));
                }
                out.best = Some(c);
            }
        }
        // advance positions 1..k, keeping idx[0] fixed
        let mut pos = k;
        loop {
            if pos <= 1 {
                return Ok(out);
            }
            pos -= 1;
            if idx[pos] < m - (k - pos) {
                idx[pos] += 1;
                for t in pos + 1..k {
                    idx[t] = idx[t - 1] + 1;
                }
                break;
            }
        }
    }
    Ok(out)
}

fn run_exhaustive(ev: &Evaluator, config: &SearchConfig, jobs: usize) -> Result<SearchOutcome> {
    let m = ev.classes.len() as u64;
    let k = ev.n as u64;
    let scaled = config.strategy == Strategy::ExhaustiveScaled;
    let total = binomial(m, k);
    if k == 0 || m < k {
        return Ok(SearchOutcome { total: Some(0), complete: true, ..SearchOutcome::default() });
    }
    let firsts: Vec<usize> = (0..=(m - k) as usize).collect();
    let mut limits = Vec::with_capacity(firsts.len());
    let mut used = 0u64;
    for &i in &firsts {
        let size = binomial(m - 1 - i as u64, k - 1);
        let lim = size.min(config.budget.saturating_sub(used));
        used += lim;
        limits.push(lim);
    }
    let work = |i: usize| scan_chunk(ev, firsts[i], k as usize, limits[i], scaled);
    let outcomes: Vec<ChunkOutcome> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidSearch(e.to_string()))?;
        pool.install(|| (0..firsts.len()).into_par_iter().map(work).collect::<Result<Vec<_>>>())?
    } else {
        (0..firsts.len()).map(work).collect::<Result<Vec<_>>>()?
    };
    let mut res = SearchOutcome { total: Some(total), ..SearchOutcome::default() };
    let mut offset = 0u64;
    for o in outcomes {
        for (at, obj) in o.trajectory {
            if res.best.as_ref().map_or(true, |b| obj > b.objective) {
                res.trajectory.push(TrajectoryPoint { evaluated: offset + at, objective: obj.0, secondary: obj.1 });
            }
        }
        offset += o.evaluated;
        res.evaluated += o.evaluated;
        res.independent += o.independent;
        res.best = pick(res.best, o.best);
    }
    res.complete = res.evaluated == total;
    res.budget_exhausted = !res.complete;
    Ok(res)
}

#[derive(Default)]
struct SearchOutcome {
    best: Option<Candidate>,
    evaluated: u64,
    independent: u64,
    total: Option<u64>,
    complete: bool,
    budget_exhausted: bool,
    trajectory: Vec<TrajectoryPoint>,
}

/// Improve `set` by single replacements until no replacement helps or the
/// budget runs out. Returns the final candidate and the evaluations used.
fn local_search(
    ev: &Evaluator,
    mut set: Vec<usize>,
    mut current: Candidate,
    budget: u64,
    s: &mut Scratch,
    trajectory: &mut Vec<(u64, Objective)>,
    evaluated: &mut u64,
) -> Result<(Candidate, bool)> {
    let m = ev.classes.len();
    loop {
        let mut improved = false;
        'scan: for pos in 0..set.len() {
            for c in 0..m {
                if set.contains(&c) {
                    continue;
                }
                if *evaluated >= budget {
                    return Ok((current, true));
                }
                let mut trial = set.clone();
                trial[pos] = c;
                trial.sort_unstable();
                *evaluated += 1;
                if let Some(cand) = ev.evaluate(&trial, ev.config.criterion != Criterion::Zeros, s)? {
                    if better(&cand, &current) {
                        if cand.objective > current.objective {
                            trajectory.push((*evaluated, cand.objective));
                        }
                        current = cand;
                        set = trial;
                        improved = true;
                        break 'scan;
                    }
                }
            }
        }
        if !improved {
            return Ok((current, false));
        }
    }
}

fn run_greedy(ev: &Evaluator, config: &SearchConfig) -> Result<SearchOutcome> {
    let mut order: Vec<usize> = (0..ev.classes.len()).collect();
    order.sort_by_key(|&c| (ev.big_n - ev.classes[c].zeros, c));
    let mut s = ev.scratch();
    let mut set: Vec<usize> = Vec::new();
    for &c in &order {
        if set.len() == ev.n {
            break;
        }
        let mut trial = set.clone();
        trial.push(c);
        if rank_of(ev, &trial) == trial.len() {
            set = trial;
        }
    }
    set.sort_unstable();
    let mut evaluated = 1u64;
    let scaled = config.criterion != Criterion::Zeros;
    let start = ev
        .evaluate(&set, scaled, &mut s)?
        .ok_or_else(|| Error::InvalidSearch("greedy selection is dependent".into()))?;
    let mut traj = vec![(1, start.objective)];
    let (best, exhausted) = local_search(ev, set, start, config.budget, &mut s, &mut traj, &mut evaluated)?;
    Ok(SearchOutcome {
        best: Some(best),
        evaluated,
        independent: evaluated,
        total: None,
        complete: false,
        budget_exhausted: exhausted,
        trajectory: traj
            .into_iter()
            .map(|(e, o)| TrajectoryPoint { evaluated: e, objective: o.0, secondary: o.1 })
            .collect(),
    })
}

/// Rank of a set of class codewords.
fn rank_of(ev: &Evaluator, idx: &[usize]) -> usize {
    let cols: Vec<Vec<Elem>> = idx.iter().map(|&c| ev.classes[c].word.clone()).collect();
    Matrix::from_columns(&cols).map(|m| m.rank(ev.field)).unwrap_or(0)
}

fn run_hillclimb(ev: &Evaluator, config: &SearchConfig, jobs: usize) -> Result<SearchOutcome> {
    let restarts = config.restarts as u64;
    let per = (config.budget / restarts).max(1);
    let scaled = config.criterion != Criterion::Zeros;
    let one = |r: u64| -> Result<(Option<Candidate>, u64, Vec<(u64, Objective)>)> {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ r.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let m = ev.classes.len();
        let mut s = ev.scratch();
        let mut used = 0u64;
        let mut set: Vec<usize> = Vec::new();
        let mut current = None;
        while current.is_none() && used < per {
            set = rand::seq::index::sample(&mut rng, m, ev.n).into_vec();
            set.sort_unstable();
            used += 1;
            current = ev.evaluate(&set, scaled, &mut s)?;
        }
        let Some(mut current) = current else {
            return Ok((None, used, Vec::new()));
        };
        let mut best = current.clone();
        let mut traj = vec![(used, best.objective)];
        while used < per {
            let pos = rng.gen_range(0..ev.n);
            let c = rng.gen_range(0..m);
            if set.contains(&c) {
                continue;
            }
            let mut trial = set.clone();
            trial[pos] = c;
            trial.sort_unstable();
            used += 1;
            if let Some(cand) = ev.evaluate(&trial, scaled, &mut s)? {
                // sideways moves allowed, so plateaus get explored
                if cand.objective >= current.objective {
                    current = cand;
                    set = trial;
                    if better(&current, &best) {
                        if current.objective > best.objective {
                            traj.push((used, current.objective));
                        }
                        best = current.clone();
                    }
                }
            }
        }
        Ok((Some(best), used, traj))
    };
    let runs: Vec<_> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidSearch(e.to_string()))?;
        pool.install(|| (0..restarts).into_par_iter().map(one).collect::<Result<Vec<_>>>())?
    } else {
        (0..restarts).map(one).collect::<Result<Vec<_>>>()?
    };
    let mut res = SearchOutcome::default();
    for (best, used, traj) in runs {
        for (at, obj) in traj {
            if res.best.as_ref().map_or(true, |b| obj > b.objective) {
                res.trajectory.push(TrajectoryPoint { evaluated: res.evaluated + at, objective: obj.0, secondary: obj.1 });
            }
        }
        res.evaluated += used;
        res.best = pick(res.best, best);
    }
    res.independent = res.evaluated;
    Ok(res)
}

/// Replace `B_D` by `sigma * B_D` and rebuild.
pub fn apply_basis_change(inst: &CcmaInstance, sigma: &Matrix) -> Result<CcmaInstance> {
    inst.rebase(sigma)
}

/// Search for a better basis of `L(D)`; `jobs` worker threads (1 = serial).
/// The result does not depend on `jobs`.
pub fn optimize(inst: &CcmaInstance, config: &SearchConfig, jobs: usize) -> Result<OptimizationResult> {
    config.validate()?;
    let table = enumerate_codewords(inst)?;
    let ev = Evaluator::new(inst, &table, config)?;
    let n = inst.n();

    // the starting basis competes as an ordinary candidate
    let initial_objective = objective_of(inst, config);
    let mut init_pairs: Vec<(Vec<Elem>, Vec<Elem>)> = (0..n)
        .map(|j| {
            let mut msg = vec![Elem::ZERO; n];
            msg[j] = Elem::ONE;
            (inst.td().column(j), msg)
        })
        .collect();
    init_pairs.sort();
    let incumbent = Candidate {
        objective: initial_objective,
        key: init_pairs.iter().flat_map(|(w, _)| w.iter().map(|e| e.0)).collect(),
        messages: init_pairs.into_iter().map(|(_, m)| m).collect(),
    };

    let outcome = match config.strategy {
        Strategy::ExhaustiveProjective | Strategy::ExhaustiveScaled => run_exhaustive(&ev, config, jobs)?,
        Strategy::GreedyMinweight => run_greedy(&ev, config)?,
        Strategy::Hillclimb => run_hillclimb(&ev, config, jobs)?,
    };
    let mut trajectory = vec![TrajectoryPoint { evaluated: 0, objective: initial_objective.0, secondary: initial_objective.1 }];
    trajectory.extend(outcome.trajectory.into_iter().filter(|p| (p.objective, p.secondary) > initial_objective));
    let best = pick(Some(incumbent), outcome.best).expect("incumbent present");

    let sigma = Matrix::from_rows(&best.messages)?;
    let rebuilt = inst.rebase(&sigma)?;
    let check = objective_of(&rebuilt, config);
    if check != best.objective {
        return Err(Error::InvalidSearch(format!(
            "fast objective {:?} disagrees with rebuilt instance {:?}",
            best.objective, check
        )));
    }
    rebuilt.bounds_check()?;
    let report = rebuilt.algorithm().metrics(config.count_rule);
    let initial_report = inst.algorithm().metrics(config.count_rule);
    let nz_bound_attained = report.nz_td == ev.bound;
    let headline = config.headline(&report);
    Ok(OptimizationResult {
        config: config.clone(),
        sigma,
        report: report.clone(),
        initial_report,
        objective: best.objective,
        initial_objective,
        candidates_evaluated: outcome.evaluated,
        independent_candidates: outcome.independent,
        total_candidates: outcome.total,
        complete: outcome.complete,
        budget_exhausted: outcome.budget_exhausted,
        nz_bound: ev.bound,
        nz_bound_attained,
        code_first_fallback: config.scope == Scope::CodeFirst && !nz_bound_attained,
        target_met: config.target.map(|t| headline <= t),
        reference_beaten: config.reference.map(|r| headline < r),
        trajectory,
        instance: rebuilt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(85, 4), 2_024_785);
        assert_eq!(binomial(4, 5), 0);
        assert_eq!(binomial(10, 0), 1);
    }

    #[test]
    fn projective_search_rejects_ones() {
        let c = SearchConfig::new(Criterion::Ones, Scope::Joint, Strategy::ExhaustiveProjective);
        assert!(c.validate().is_err());
        let c = SearchConfig::new(Criterion::Ones, Scope::Joint, Strategy::ExhaustiveScaled);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn config_names() {
        let c = SearchConfig::new(Criterion::ZerosOnes, Scope::CodeFirst, Strategy::Hillclimb);
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains(r#""criterion":"zeros+ones""#));
        assert!(s.contains(r#""scope":"code-first""#));
        assert!(s.contains(r#""strategy":"hillclimb""#));
        let alias: Strategy = serde_json::from_str(r#""random-restart-hillclimb""#).unwrap();
        assert_eq!(alias, Strategy::Hillclimb);
    }
}
