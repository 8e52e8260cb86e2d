//! Desk-scale induction machinery: the property ledger, Case I/II probes,
//! obstruction-set augmentation, and an experimental decomposition driver.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coset::{find_large_coset_inside, ring_membership_decompose, Coset, SignedCosetSum, Subspace, RING_GENERATORS_MAX};
use crate::error::{Error, Result};
use crate::fourier::{reduced_spectral_norm, restrict_to_coset, spectral_norm, CubeFunction, TOL};
use crate::report::Check;
use crate::set::SubsetOfCube;
use crate::structure::{find_dense_coset, good_subgroup, GoodSubgroupParams};

pub const DEFAULT_LEDGER_BUDGET: u64 = 100_000_000;
pub const DEFAULT_MC_SAMPLES: u64 = 100_000;

/// A union of cosets together with its materialized point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ObstructionRepr", into = "ObstructionRepr")]
pub struct ObstructionSet {
    n: usize,
    cosets: Vec<Coset>,
    materialized: SubsetOfCube,
}

#[derive(Serialize, Deserialize)]
struct ObstructionRepr {
    n: usize,
    cosets: Vec<Coset>,
}

impl TryFrom<ObstructionRepr> for ObstructionSet {
    type Error = Error;

    fn try_from(r: ObstructionRepr) -> Result<Self> {
        ObstructionSet::new(r.n, r.cosets)
    }
}

impl From<ObstructionSet> for ObstructionRepr {
    fn from(x: ObstructionSet) -> Self {
        ObstructionRepr { n: x.n, cosets: x.cosets }
    }
}

impl ObstructionSet {
    pub fn new(n: usize, cosets: Vec<Coset>) -> Result<Self> {
        let mut materialized = SubsetOfCube::empty(n);
        for c in &cosets {
            if c.n() != n {
                return Err(Error::usage(format!("coset in F_2^{} inside an obstruction set in F_2^{n}", c.n())));
            }
            for x in c.members() {
                materialized.insert(x);
            }
        }
        Ok(ObstructionSet { n, cosets, materialized })
    }

    /// `{0}`.
    pub fn origin(n: usize) -> Self {
        ObstructionSet::new(n, vec![Coset::point(n, 0)]).expect("dimensions agree")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cosets(&self) -> &[Coset] {
        &self.cosets
    }

    pub fn t(&self) -> usize {
        self.cosets.len()
    }

    pub fn materialized(&self) -> &SubsetOfCube {
        &self.materialized
    }

    pub fn contains(&self, x: usize) -> bool {
        self.materialized.contains(x)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PropertyLedger {
    pub a: SubsetOfCube,
    pub g: CubeFunction,
    pub k: usize,
    pub m: usize,
    pub r: usize,
    pub t: usize,
    pub epsilon: f64,
    pub x: ObstructionSet,
    /// Whether the primed property (with `|A| ≤ 2^{n−1}`) is claimed.
    #[serde(default = "default_true")]
    pub primed: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LedgerOptions {
    /// Largest `|A∖X|^r` enumerated exhaustively.
    pub budget: u64,
    /// Monte Carlo fallback `(samples, seed)` when the budget is exceeded.
    pub monte_carlo: Option<(u64, u64)>,
}

impl Default for LedgerOptions {
    fn default() -> Self {
        LedgerOptions { budget: DEFAULT_LEDGER_BUDGET, monte_carlo: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleVerdict {
    pub exhaustive: bool,
    pub tuples_checked: u64,
    /// First tuple from `A∖X` satisfying neither clause, re-verified.
    pub violation: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LedgerReport {
    pub checks: Vec<Check>,
    pub tuples: TupleVerdict,
    /// `Some(true)` only when every check passed and (iv) was enumerated;
    /// `None` when (iv) was only sampled without finding a violation.
    pub holds: Option<bool>,
}

/// Whether `x_1..x_r` satisfies clause (a) or (b): some odd `|S| > 1` sum in `A∖X`,
/// or some nonempty sum in `X`.
pub fn tuple_is_covered(a: &SubsetOfCube, x: &ObstructionSet, tuple: &[usize]) -> bool {
    let r = tuple.len();
    (1usize..1 << r).any(|s| {
        let sum = (0..r).filter(|i| s >> i & 1 == 1).fold(0, |acc, i| acc ^ tuple[i]);
        let size = s.count_ones();
        x.contains(sum) || (size > 1 && size % 2 == 1 && a.contains(sum))
    })
}

struct TupleSearch<'a> {
    a: &'a SubsetOfCube,
    x: &'a ObstructionSet,
    pool: &'a [usize],
    r: usize,
    nodes: u64,
    tuple: Vec<usize>,
}

impl TupleSearch<'_> {
    /// Nondecreasing tuples, pruning any prefix that is already covered
    /// (the clauses are monotone under extension).
    fn run(&mut self, start: usize, sums: &[(usize, u32)]) -> bool {
        if self.tuple.len() == self.r {
            return true;
        }
        for idx in start..self.pool.len() {
            self.nodes += 1;
            let b = self.pool[idx];
            let mut next = Vec::with_capacity(2 * sums.len() + 1);
            next.extend_from_slice(sums);
            let mut covered = false;
            for (s, size) in sums.iter().copied().chain(std::iter::once((0, 0))) {
                let (sum, size) = (s ^ b, size + 1);
                if self.x.contains(sum) || (size > 1 && size % 2 == 1 && self.a.contains(sum)) {
                    covered = true;
                    break;
                }
                next.push((sum, size));
            }
            if covered {
                continue;
            }
            self.tuple.push(b);
            if self.run(idx, &next) {
                return true;
            }
            self.tuple.pop();
        }
        false
    }
}

/// Clause (iv) over all `r`-tuples from `A∖X`, exhaustively or by sampling.
pub fn check_tuples(a: &SubsetOfCube, x: &ObstructionSet, r: usize, opts: &LedgerOptions) -> Result<TupleVerdict> {
    let pool: Vec<usize> = a.difference(x.materialized()).members().collect();
    let total = (pool.len() as f64).powi(r as i32);
    if total <= opts.budget as f64 {
        let mut search = TupleSearch { a, x, pool: &pool, r, nodes: 0, tuple: Vec::with_capacity(r) };
        let found = search.run(0, &[]);
        let violation = found.then(|| search.tuple.clone());
        return Ok(TupleVerdict { exhaustive: true, tuples_checked: search.nodes, violation });
    }
    let Some((samples, seed)) = opts.monte_carlo else {
        return Err(Error::capability(
            format!("exhaustive check of {total:.3e} tuples"),
            format!("{} tuples (enable Monte Carlo to sample instead)", opts.budget),
        ));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..samples {
        let tuple: Vec<usize> = (0..r).map(|_| pool[rng.random_range(0..pool.len())]).collect();
        if !tuple_is_covered(a, x, &tuple) {
            return Ok(TupleVerdict { exhaustive: false, tuples_checked: i + 1, violation: Some(tuple) });
        }
    }
    Ok(TupleVerdict { exhaustive: false, tuples_checked: samples, violation: None })
}

pub fn verify_property_ledger(ledger: &PropertyLedger, opts: &LedgerOptions) -> Result<LedgerReport> {
    let PropertyLedger { a, g, k, m, r, t, epsilon, x, primed } = ledger;
    let n = a.n();
    if g.n() != n || x.n() != n {
        return Err(Error::usage("set, function and obstruction set must share the dimension"));
    }
    if !(0.0..0.5).contains(epsilon) {
        return Err(Error::usage(format!("epsilon = {epsilon} not in [0, 1/2)")));
    }
    let scale = (1.0 - 2.0 * epsilon) / 4.0;
    let sup = a.indicator().sup_distance(g)?;
    let reduced = reduced_spectral_norm(g)?;
    let mut checks = vec![
        Check::new("(i) ||1_A - g||_inf <= epsilon", sup <= epsilon + TOL, format!("{sup}")),
        Check::new(
            "(ii) ||g||_reduced <= (1-2eps)/4 m",
            reduced <= scale * *m as f64 + TOL,
            format!("{reduced} vs {}", scale * *m as f64),
        ),
        Check::new("r <= k + 1", *r <= k + 1, format!("r = {r}, k = {k}")),
        Check::new("X is a union of t cosets", x.t() == *t, format!("{} cosets, t = {t}", x.t())),
    ];
    if *primed {
        checks.push(Check::new("|A| <= 2^(n-1)", 2 * a.size() <= 1 << n, format!("|A| = {}", a.size())));
    }
    let bound = scale * (*m as f64 - 1.0);
    let mut worst: f64 = 0.0;
    for c in x.cosets() {
        for rep in c.space().coset_reps() {
            worst = worst.max(reduced_spectral_norm(&restrict_to_coset(g, c.space(), rep)?)?);
        }
    }
    checks.push(Check::new(
        "(iii) restricted reduced norms <= (1-2eps)/4 (m-1)",
        worst <= bound + TOL,
        format!("max {worst} vs {bound}"),
    ));
    let tuples = check_tuples(a, x, *r, opts)?;
    if let Some(v) = &tuples.violation {
        if tuple_is_covered(a, x, v) {
            return Err(Error::Verification(format!("reported violating tuple {v:?} is covered")));
        }
    }
    checks.push(Check::new(
        "(iv) every r-tuple from A\\X satisfies (a) or (b)",
        tuples.violation.is_none(),
        match (&tuples.violation, tuples.exhaustive) {
            (Some(v), _) => format!("violated by {v:?}"),
            (None, true) => format!("{} search nodes", tuples.tuples_checked),
            (None, false) => format!("estimate: no violation in {} samples", tuples.tuples_checked),
        },
    ));
    let all = checks.iter().all(|c| c.passed);
    let holds = if !all { Some(false) } else if tuples.exhaustive { Some(true) } else { None };
    Ok(LedgerReport { checks, tuples, holds })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeCase {
    /// `x_1 + … + x_d ∈ A∖X` for odd `d ∈ [3, r]`.
    One,
    /// `x_1 + … + x_d ∈ X` for `d ∈ [1, r]`.
    Two,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub case: ProbeCase,
    pub d: usize,
    /// Exact count of hitting tuples over `|A∖X|^d`, when enumerated.
    pub numerator: Option<u128>,
    pub denominator: Option<u128>,
    pub probability: f64,
    /// Standard error of a sampled estimate.
    pub std_error: Option<f64>,
    pub estimate: bool,
    pub clears: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub r: usize,
    pub size: usize,
    /// `2^{−(r+1)}`.
    pub threshold: f64,
    pub rows: Vec<ProbeRow>,
    pub case_one: bool,
    pub case_two: bool,
    /// `A∖X` is empty, so every probability is undefined.
    pub vacuous: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbeOptions {
    /// Largest `2^n · |A∖X| · r` computed by exact census.
    pub budget: u64,
    pub samples: u64,
    pub seed: u64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions { budget: DEFAULT_LEDGER_BUDGET, samples: DEFAULT_MC_SAMPLES, seed: 0x5eed_cafe }
    }
}

/// Probability that a sum of `d` independent uniform draws from `A∖X` lands in
/// `A∖X` (Case I, odd `d ≥ 3`) or in `X` (Case II), against the `2^{−(r+1)}` threshold.
pub fn case_probe(a: &SubsetOfCube, x: &ObstructionSet, r: usize, opts: &ProbeOptions) -> Result<CaseReport> {
    let n = a.n();
    if x.n() != n {
        return Err(Error::usage("set and obstruction set must share the dimension"));
    }
    if r == 0 {
        return Err(Error::usage("r must be positive"));
    }
    let b = a.difference(x.materialized());
    let pool: Vec<usize> = b.members().collect();
    let threshold = 0.5f64.powi(r as i32 + 1);
    let mut report =
        CaseReport { r, size: pool.len(), threshold, rows: Vec::new(), case_one: false, case_two: false, vacuous: pool.is_empty() };
    if pool.is_empty() {
        return Ok(report);
    }
    let wanted = |case: ProbeCase, d: usize| match case {
        ProbeCase::One => d >= 3 && d % 2 == 1,
        ProbeCase::Two => true,
    };
    let hit = |case: ProbeCase, s: usize| match case {
        ProbeCase::One => b.contains(s),
        ProbeCase::Two => x.contains(s),
    };
    let cost = ((1u128 << n) * pool.len() as u128 * r as u128).min(u64::MAX as u128) as u64;
    let size = pool.len() as u128;
    if cost <= opts.budget && size.checked_pow(r as u32).is_some() {
        // counts[s] = number of d-tuples summing to s
        let mut counts = vec![0u128; 1 << n];
        counts[0] = 1;
        for d in 1..=r {
            let mut next = vec![0u128; 1 << n];
            for (s, &c) in counts.iter().enumerate() {
                if c != 0 {
                    for &p in &pool {
                        next[s ^ p] += c;
                    }
                }
            }
            counts = next;
            let denominator = size.pow(d as u32);
            for case in [ProbeCase::One, ProbeCase::Two] {
                if !wanted(case, d) {
                    continue;
                }
                let numerator: u128 = counts.iter().enumerate().filter(|&(s, _)| hit(case, s)).map(|(_, &c)| c).sum();
                let probability = numerator as f64 / denominator as f64;
                report.rows.push(ProbeRow {
                    case,
                    d,
                    numerator: Some(numerator),
                    denominator: Some(denominator),
                    probability,
                    std_error: None,
                    estimate: false,
                    // numerator / denominator ≥ 2^{−(r+1)}, exactly
                    clears: numerator << (r + 1) >= denominator,
                });
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for d in 1..=r {
            for case in [ProbeCase::One, ProbeCase::Two] {
                if !wanted(case, d) {
                    continue;
                }
                let hits = (0..opts.samples)
                    .filter(|_| hit(case, (0..d).fold(0, |s, _| s ^ pool[rng.random_range(0..pool.len())])))
                    .count();
                let p = hits as f64 / opts.samples as f64;
                report.rows.push(ProbeRow {
                    case,
                    d,
                    numerator: None,
                    denominator: None,
                    probability: p,
                    std_error: Some((p * (1.0 - p) / opts.samples as f64).sqrt()),
                    estimate: true,
                    clears: p >= threshold,
                });
            }
        }
    }
    report.case_one = report.rows.iter().any(|row| row.case == ProbeCase::One && row.clears);
    report.case_two = report.rows.iter().any(|row| row.case == ProbeCase::Two && row.clears);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusEntry {
    /// Canonical representative of `a` modulo `W_i`.
    pub a: usize,
    /// `|{y ∈ W + c_0 : y ∈ W_i + a_i + a}|`, over `|W|`.
    pub hits: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Augmentation {
    /// `2^{−2k}/t`.
    pub gamma: f64,
    /// `E_i` for each coset of `X`, with the census counts behind it.
    pub e: Vec<Vec<CensusEntry>>,
    pub x_prime: ObstructionSet,
    pub t_prime: usize,
    /// `t + 2|F_W| + Σ|E_i|`.
    pub t_prime_bound: usize,
    /// Largest reduced norm of `g` restricted to a coset of `W`.
    pub max_reduced_norm_on_w: f64,
    pub checks: Vec<Check>,
}

/// `X' = X ∪ (W + F_W) ∪ (W + F_W + c_0) ∪ ⋃_i (W_i + E_i)`, where `E_i` collects the
/// classes `a` modulo `W_i` with `Pr_{y ∈ W + c_0}[y ∈ W_i + a_i + a] ≥ γ`.
pub fn augment_obstruction(
    g: &CubeFunction,
    x: &ObstructionSet,
    w: &Subspace,
    f_w: &[usize],
    c0: usize,
    k: usize,
) -> Result<Augmentation> {
    let n = x.n();
    if g.n() != n || w.n() != n {
        return Err(Error::usage("function, subspace and obstruction set must share the dimension"));
    }
    if x.t() == 0 {
        return Err(Error::usage("obstruction set has no cosets"));
    }
    let classes: BTreeSet<usize> = f_w.iter().map(|&c| w.reduce(c)).collect();
    if !classes.contains(&w.reduce(c0)) {
        return Err(Error::Precondition(format!("c0 = {c0} is not in F_W")));
    }
    let t = x.t();
    let gamma = 0.25f64.powi(k as i32) / t as f64;
    let shifted = Coset::new(w.clone(), c0);
    let mut e = Vec::with_capacity(t);
    let mut cosets: Vec<Coset> = x.cosets().to_vec();
    for wi in x.cosets() {
        let mut census: BTreeMap<usize, usize> = BTreeMap::new();
        for y in shifted.members() {
            *census.entry(wi.space().reduce(y ^ wi.rep())).or_insert(0) += 1;
        }
        // hits / |W| ≥ 2^{−2k}/t, exactly
        let entries: Vec<CensusEntry> = census
            .into_iter()
            .filter(|&(_, hits)| (hits as u128) * ((t as u128) << (2 * k)) >= w.size() as u128)
            .map(|(a, hits)| CensusEntry { a, hits })
            .collect();
        cosets.extend(entries.iter().map(|en| Coset::new(wi.space().clone(), en.a)));
        e.push(entries);
    }
    for &c in &classes {
        cosets.push(Coset::new(w.clone(), c));
        cosets.push(Coset::new(w.clone(), c ^ c0));
    }
    let t_prime_bound = t + 2 * classes.len() + e.iter().map(Vec::len).sum::<usize>();
    let mut seen = BTreeSet::new();
    cosets.retain(|c| seen.insert(c.clone()));
    let x_prime = ObstructionSet::new(n, cosets)?;
    let t_prime = x_prime.t();
    let mut max_reduced_norm_on_w: f64 = 0.0;
    for rep in w.coset_reps() {
        max_reduced_norm_on_w = max_reduced_norm_on_w.max(reduced_spectral_norm(&restrict_to_coset(g, w, rep)?)?);
    }
    let checks = vec![
        Check::new(
            "|E_i| <= 1/gamma",
            e.iter().all(|ei| ei.len() as f64 <= 1.0 / gamma + TOL),
            format!("sizes {:?}, 1/gamma = {}", e.iter().map(Vec::len).collect::<Vec<_>>(), 1.0 / gamma),
        ),
        Check::new("t' <= t + 2|F_W| + sum |E_i|", t_prime <= t_prime_bound, format!("{t_prime} <= {t_prime_bound}")),
        Check::new("X is contained in X'", x.materialized().is_subset_of(x_prime.materialized()), ""),
    ];
    if let Some(c) = checks.iter().find(|c| !c.passed) {
        return Err(Error::Verification(format!("augmentation: {} failed ({})", c.name, c.detail)));
    }
    Ok(Augmentation { gamma, e, x_prime, t_prime, t_prime_bound, max_reduced_norm_on_w, checks })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnionBound {
    pub delta: f64,
    pub r: usize,
    pub t: usize,
    pub gamma: f64,
    /// `δ + 2^{r−1}δ + 2^{r−1}tγ`.
    pub lhs: f64,
    pub holds: bool,
}

pub fn union_bound(delta: f64, r: usize, t: usize, gamma: f64) -> UnionBound {
    let p = 2f64.powi(r as i32 - 1);
    let lhs = delta + p * delta + p * t as f64 * gamma;
    UnionBound { delta, r, t, gamma, lhs, holds: lhs < 1.0 }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecomposeOptions {
    pub depth_cap: usize,
    /// Cap on work units (census operations and driver steps) across the run.
    pub budget: u64,
    pub seed: u64,
    /// Exponent `K` in the `2^{−k^K}` density scale, reported for comparison only.
    pub k_exponent: u32,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions { depth_cap: 5, budget: 100_000_000, seed: 0x5eed_cafe, k_exponent: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub depth: usize,
    pub r: usize,
    pub t: usize,
    pub action: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum DecomposeOutcome {
    Success { sum: SignedCosetSum, generators: Vec<Coset> },
    Failure { reason: String },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Decomposition {
    pub outcome: DecomposeOutcome,
    pub trace: Vec<TraceStep>,
    pub work: u64,
}

pub const DECOMPOSE_N_MAX: usize = 6;

/// Best-effort driver following the two-parameter induction at `n ≤ 6`.
///
/// Starting from `X = {0}` and `r = k + 1`, each round probes Cases I and II, finds
/// a dense coset (by search in Case I, through a recursive decomposition of the
/// heaviest coset of `X` in Case II), extracts a good subgroup, and augments `X`
/// while lowering `r`. Once `A ⊆ X` the pieces `A ∩ C` are decomposed recursively and
/// the collected cosets are turned into a signed sum, verified pointwise. Caps end
/// the run with a failure outcome and the full trace.
pub fn decompose_experimental(
    a: &SubsetOfCube,
    g: &CubeFunction,
    epsilon: f64,
    k: usize,
    opts: &DecomposeOptions,
) -> Result<Decomposition> {
    let n = a.n();
    if n > DECOMPOSE_N_MAX {
        return Err(Error::capability(format!("decomposition in F_2^{n}"), format!("n <= {DECOMPOSE_N_MAX}")));
    }
    if g.n() != n {
        return Err(Error::usage("set and function must share the dimension"));
    }
    if !(0.0..0.5).contains(&epsilon) || k == 0 {
        return Err(Error::usage("need epsilon in [0, 1/2) and k >= 1"));
    }
    let mut driver = Driver { epsilon, k, opts, trace: Vec::new(), work: 0 };
    let outcome = match driver.solve(a, g, 0) {
        Ok(gens) => match ring_membership_decompose(a, &gens)? {
            Some(sum) if sum.represents(a) => DecomposeOutcome::Success { sum, generators: gens },
            Some(_) => return Err(Error::Verification("signed sum does not evaluate to 1_A".into())),
            None => DecomposeOutcome::Failure { reason: "A is not in the ring of the collected cosets".into() },
        },
        Err(Halt(reason)) => DecomposeOutcome::Failure { reason },
    };
    if let Some(bug) = driver.trace.iter().find(|s| s.action == "bug") {
        return Err(Error::Verification(bug.detail.clone()));
    }
    Ok(Decomposition { outcome, trace: driver.trace, work: driver.work })
}

struct Halt(String);

struct Driver<'a> {
    epsilon: f64,
    k: usize,
    opts: &'a DecomposeOptions,
    trace: Vec<TraceStep>,
    work: u64,
}

fn as_coset(a: &SubsetOfCube) -> Option<Coset> {
    let base = a.members().next()?;
    let dirs: Vec<usize> = a.members().map(|x| x ^ base).collect();
    let c = Coset::new(Subspace::span(a.n(), &dirs), base);
    (c.size() == a.size()).then_some(c)
}

fn minimize_generators(a: &SubsetOfCube, mut gens: Vec<Coset>) -> Vec<Coset> {
    let mut i = 0;
    while i < gens.len() {
        let mut trial = gens.clone();
        trial.remove(i);
        if in_ring(a, &trial) {
            gens = trial;
        } else {
            i += 1;
        }
    }
    gens
}

fn in_ring(a: &SubsetOfCube, gens: &[Coset]) -> bool {
    let mut atoms: HashMap<Vec<bool>, (bool, bool)> = HashMap::new();
    for x in 0..1usize << a.n() {
        let sig: Vec<bool> = gens.iter().map(|g| g.contains(x)).collect();
        let e = atoms.entry(sig).or_insert((false, false));
        if a.contains(x) {
            e.0 = true;
        } else {
            e.1 = true;
        }
    }
    atoms.values().all(|&(i, o)| !(i && o))
}

impl Driver<'_> {
    fn log(&mut self, depth: usize, r: usize, t: usize, action: &str, detail: impl Into<String>) {
        self.trace.push(TraceStep { depth, r, t, action: action.into(), detail: detail.into() });
    }

    fn spend(&mut self, units: u64) -> std::result::Result<(), Halt> {
        self.work += units;
        if self.work > self.opts.budget {
            return Err(Halt(format!("work budget of {} exhausted", self.opts.budget)));
        }
        Ok(())
    }

    /// Generators of a ring containing `A`.
    fn solve(&mut self, a: &SubsetOfCube, g: &CubeFunction, depth: usize) -> std::result::Result<Vec<Coset>, Halt> {
        let n = a.n();
        self.spend(1 << n)?;
        if a.is_empty() {
            self.log(depth, 0, 0, "empty", "");
            return Ok(Vec::new());
        }
        if let Some(c) = as_coset(a) {
            self.log(depth, 0, 0, "coset", format!("dim {} rep {}", c.dim(), c.rep()));
            return Ok(vec![c]);
        }
        if depth >= self.opts.depth_cap {
            self.log(depth, 0, 0, "depth cap", format!("|A| = {}", a.size()));
            return Err(Halt(format!("depth cap {} reached", self.opts.depth_cap)));
        }
        if 2 * a.size() > 1 << n {
            self.log(depth, 0, 0, "complement", format!("|A| = {} > 2^(n-1)", a.size()));
            return self.solve(&a.complement(), &g.map(|v| 1.0 - v), depth);
        }
        if a.contains(0) {
            let z = a.complement().members().next().expect("|A| <= 2^(n-1) leaves a point outside");
            self.log(depth, 0, 0, "translate", format!("by {z} so that 0 is outside A"));
            let shifted_g = CubeFunction::from_fn(n, |x| g.get(x ^ z));
            let gens = self.induct(&a.translate(z), &shifted_g, depth)?;
            return Ok(gens.iter().map(|c| c.translate(z)).collect());
        }
        self.induct(a, g, depth)
    }

    fn induct(&mut self, a: &SubsetOfCube, g: &CubeFunction, depth: usize) -> std::result::Result<Vec<Coset>, Halt> {
        let n = a.n();
        let bug = |e: Error| Halt(format!("internal error: {e}"));
        let mut x = ObstructionSet::origin(n);
        let mut r = self.k + 1;
        loop {
            let b = a.difference(x.materialized());
            if b.is_empty() || r == 1 {
                break;
            }
            self.spend(((1u64 << n) * b.size() as u64 * r as u64).max(1))?;
            let probe = case_probe(a, &x, r, &ProbeOptions { seed: self.opts.seed, ..ProbeOptions::default() })
                .map_err(bug)?;
            let (v, shift) = if probe.case_one {
                let dense = find_dense_coset(&b, None, None).map_err(bug)?.expect("B is nonempty");
                self.log(
                    depth,
                    r,
                    x.t(),
                    "case I",
                    format!("dense coset dim {} rep {} with {}/{} points", dense.coset.dim(), dense.coset.rep(), dense.hits, dense.coset.size()),
                );
                (dense.coset.space().clone(), dense.coset.rep())
            } else if probe.case_two {
                let (piece, host) = heaviest_piece(&b, &x);
                self.log(depth, r, x.t(), "case II", format!("coset dim {} rep {} holds {} points of A\\X", host.dim(), host.rep(), piece.size()));
                let restricted = a.intersection(&host.to_subset());
                let mut gens = self.solve(&restricted, g, depth + 1)?;
                gens.extend(x.cosets().iter().cloned());
                gens.push(host.clone());
                let gens = minimize_generators(&piece, gens);
                if gens.len() > RING_GENERATORS_MAX {
                    self.log(depth, r, x.t(), "generator cap", format!("{} generators", gens.len()));
                    return Err(Halt(format!("more than {RING_GENERATORS_MAX} generators for a large-coset search")));
                }
                let inside = find_large_coset_inside(&piece, &gens).map_err(bug)?;
                (inside.space().clone(), inside.rep())
            } else {
                self.log(depth, r, x.t(), "no case", format!("{probe:?}"));
                return Err(Halt("neither case clears the threshold, so clause (iv) fails".into()));
            };

            let hits = Coset::new(v.clone(), shift).members().filter(|&y| b.contains(y)).count();
            let epsilon2 = hits as f64 / v.size() as f64;
            let epsilon1 = (v.size() as f64 / b.size() as f64).min(1.0);
            let delta = ((1.0 - 2.0 * self.epsilon) / 8.0).min(epsilon2 / 2.0);
            let indicator = b.indicator();
            let (approx, eps) = if indicator.sup_distance(g).map_err(bug)? <= self.epsilon + TOL {
                (g.clone(), self.epsilon)
            } else {
                self.log(depth, r, x.t(), "exact approximant", "g is not close to 1_{A\\X}; using the indicator itself");
                (indicator, 0.0)
            };
            let m_norm = spectral_norm(&approx).map_err(bug)?.max(0.5);
            let params = GoodSubgroupParams { epsilon: eps, delta, epsilon1, epsilon2, m: m_norm };
            let result = match good_subgroup(&b, &approx, &v, shift, &params) {
                Ok(res) => res,
                Err(Error::Precondition(p)) => {
                    self.log(depth, r, x.t(), "good subgroup precondition", p.clone());
                    return Err(Halt(format!("good-subgroup hypotheses fail: {p}")));
                }
                Err(e) => {
                    self.log(depth, r, x.t(), "bug", e.to_string());
                    return Err(bug(e));
                }
            };
            self.log(
                depth,
                r,
                x.t(),
                "good subgroup",
                format!(
                    "dim W = {}, |F_W| = {}, delta = {delta}, eps1 = {epsilon1}, eps2 = {epsilon2} (2^-k^K = {})",
                    result.w.dim(),
                    result.f_w.len(),
                    2f64.powf(-(self.k as f64).powi(self.opts.k_exponent as i32))
                ),
            );
            let c0 = result.f_w[0];
            let aug = match augment_obstruction(g, &x, &result.w, &result.f_w, c0, self.k) {
                Ok(aug) => aug,
                Err(e) => {
                    self.log(depth, r, x.t(), "bug", e.to_string());
                    return Err(bug(e));
                }
            };
            let ub = union_bound(delta, r, x.t(), aug.gamma);
            self.log(
                depth,
                r,
                x.t(),
                "augment",
                format!("t' = {} (bound {}), union bound lhs {} < 1: {}", aug.t_prime, aug.t_prime_bound, ub.lhs, ub.holds),
            );
            x = aug.x_prime;
            r -= 1;
        }

        let rest = a.difference(x.materialized());
        if !rest.is_empty() {
            self.log(depth, r, x.t(), "r = 1 residue", format!("{} points of A outside X", rest.size()));
            return Err(Halt("A is not covered by X at r = 1".into()));
        }
        let mut gens = Vec::new();
        for c in x.cosets().to_vec() {
            let piece = a.intersection(&c.to_subset());
            if piece.is_empty() {
                continue;
            }
            gens.push(c.clone());
            if &piece != a {
                gens.extend(self.solve(&piece, g, depth + 1)?);
            } else {
                self.log(depth, r, x.t(), "no progress", format!("coset dim {} contains all of A", c.dim()));
                return Err(Halt("a single coset of X contains all of A".into()));
            }
        }
        let mut seen = BTreeSet::new();
        gens.retain(|c| seen.insert(c.clone()));
        let gens = minimize_generators(a, gens);
        self.log(depth, r, x.t(), "assembled", format!("{} generators", gens.len()));
        if gens.len() > RING_GENERATORS_MAX {
            return Err(Halt(format!("more than {RING_GENERATORS_MAX} generators")));
        }
        Ok(gens)
    }
}

/// The coset `W_i + c` (over cosets of `X` and all `c`) holding the most of `B`.
fn heaviest_piece(b: &SubsetOfCube, x: &ObstructionSet) -> (SubsetOfCube, Coset) {
    let mut best: Option<(usize, Coset)> = None;
    for wi in x.cosets() {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for y in b.members() {
            *counts.entry(wi.space().reduce(y)).or_insert(0) += 1;
        }
        for (rep, hits) in counts {
            let c = Coset::new(wi.space().clone(), rep);
            if best.as_ref().is_none_or(|(h, bc)| hits > *h || (hits == *h && c < *bc)) {
                best = Some((hits, c));
            }
        }
    }
    let (_, host) = best.expect("B is nonempty");
    (b.intersection(&host.to_subset()), host)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(n: usize, k: usize) -> SubsetOfCube {
        SubsetOfCube::from_members(n, std::iter::once(0).chain((0..k).map(|i| 1 << i))).unwrap()
    }

    fn brute_probability(b: &[usize], target: impl Fn(usize) -> bool, d: usize) -> (u128, u128) {
        let mut hits = 0u128;
        let total = (b.len() as u128).pow(d as u32);
        for idx in 0..total {
            let mut rest = idx;
            let mut s = 0;
            for _ in 0..d {
                s ^= b[(rest % b.len() as u128) as usize];
                rest /= b.len() as u128;
            }
            hits += target(s) as u128;
        }
        (hits, total)
    }

    #[test]
    fn probe_matches_tuple_enumeration() {
        let a = SubsetOfCube::from_members(4, [1, 2, 3, 5, 9, 14]).unwrap();
        let x = ObstructionSet::new(4, vec![Coset::point(4, 0), Coset::new(Subspace::span(4, &[1]), 2)]).unwrap();
        let rep = case_probe(&a, &x, 4, &ProbeOptions::default()).unwrap();
        let b: Vec<usize> = a.difference(x.materialized()).members().collect();
        for row in &rep.rows {
            let (h, t) = match row.case {
                ProbeCase::One => brute_probability(&b, |s| b.contains(&s), row.d),
                ProbeCase::Two => brute_probability(&b, |s| x.contains(s), row.d),
            };
            assert_eq!((row.numerator.unwrap(), row.denominator.unwrap()), (h, t), "{row:?}");
        }
    }

    #[test]
    fn probe_examples() {
        let a = ball(4, 4);
        let x = ObstructionSet::origin(4);
        let rep = case_probe(&a, &x, 4, &ProbeOptions::default()).unwrap();
        let d2 = rep.rows.iter().find(|r| r.case == ProbeCase::Two && r.d == 2).unwrap();
        assert_eq!((d2.numerator, d2.denominator), (Some(4), Some(16)));
        assert!(d2.clears && rep.case_two);

        let c = Coset::new(Subspace::span(4, &[0b0110, 0b1010]), 1).to_subset();
        let rep = case_probe(&c, &x, 3, &ProbeOptions::default()).unwrap();
        let d3 = rep.rows.iter().find(|r| r.case == ProbeCase::One && r.d == 3).unwrap();
        assert_eq!(d3.probability, 1.0);
        assert!(rep.case_one);

        let rep = case_probe(&SubsetOfCube::empty(3), &ObstructionSet::origin(3), 3, &ProbeOptions::default()).unwrap();
        assert!(rep.vacuous && rep.rows.is_empty());
    }

    #[test]
    fn ledger_on_connected_set() {
        // a hyperplane coset avoiding 0 is k-affine connected for every k
        let a = Coset::hyperplane(4, 0b1111, true).to_subset();
        let g = a.indicator();
        let m = (4.0 * reduced_spectral_norm(&g).unwrap()).ceil() as usize;
        for k in 2..=3 {
            let ledger = PropertyLedger { a: a.clone(), g: g.clone(), k, m, r: k + 1, t: 1, epsilon: 0.0, x: ObstructionSet::origin(4), primed: true };
            let rep = verify_property_ledger(&ledger, &LedgerOptions::default()).unwrap();
            assert_eq!(rep.holds, Some(true), "{:?}", rep.checks);
        }
    }

    #[test]
    fn ledger_finds_ball_violation() {
        let a = ball(3, 3).difference(&SubsetOfCube::from_members(3, [0]).unwrap());
        let ledger = PropertyLedger {
            g: a.indicator(),
            a,
            k: 2,
            m: 8,
            r: 3,
            t: 1,
            epsilon: 0.0,
            x: ObstructionSet::origin(3),
            primed: true,
        };
        let rep = verify_property_ledger(&ledger, &LedgerOptions::default()).unwrap();
        assert_eq!(rep.holds, Some(false));
        assert_eq!(rep.tuples.violation, Some(vec![1, 2, 4]));
    }

    #[test]
    fn ledger_budget_and_sampling() {
        let a = SubsetOfCube::from_predicate(6, |x| x.count_ones() == 3);
        let ledger = PropertyLedger { g: a.indicator(), a, k: 5, m: 100, r: 6, t: 1, epsilon: 0.0, x: ObstructionSet::origin(6), primed: true };
        let opts = LedgerOptions { budget: 10, monte_carlo: None };
        assert!(matches!(verify_property_ledger(&ledger, &opts), Err(Error::Capability { .. })));
        let opts = LedgerOptions { budget: 10, monte_carlo: Some((1000, 7)) };
        let rep = verify_property_ledger(&ledger, &opts).unwrap();
        assert!(!rep.tuples.exhaustive);
        assert_ne!(rep.holds, Some(true));
    }

    #[test]
    fn augmentation_census() {
        let n = 4;
        let x = ObstructionSet::origin(n);
        let w = Subspace::span(n, &[0b0011, 0b0101]);
        let g = CubeFunction::zeros(n);
        let aug = augment_obstruction(&g, &x, &w, &[0b1000], 0b1000, 1).unwrap();
        // W + c0 has 4 points; each point class of {0} gets probability 1/4 ≥ γ = 1/4
        assert_eq!(aug.e[0].len(), 4);
        assert!(aug.t_prime <= aug.t_prime_bound);
        assert!(augment_obstruction(&g, &x, &w, &[0b1000], 0b0100, 1).is_err());

        let full = augment_obstruction(&g, &x, &Subspace::full(n), &[0], 0, 2).unwrap();
        assert_eq!(full.x_prime.materialized(), &SubsetOfCube::full(n));
    }

    #[test]
    fn decompose_coset_and_two_cosets() {
        let c = Coset::new(Subspace::span(4, &[0b0011]), 0b0100);
        let a = c.to_subset();
        let d = decompose_experimental(&a, &a.indicator(), 0.0, 2, &DecomposeOptions::default()).unwrap();
        match d.outcome {
            DecomposeOutcome::Success { sum, .. } => {
                assert_eq!(sum.len(), 1);
                assert!(sum.represents(&a));
            }
            other => panic!("{other:?}"),
        }
        let v = Subspace::span(4, &[0b0011]);
        let a = Coset::new(v.clone(), 0b0100).to_subset().union(&Coset::new(v, 0b1000).to_subset());
        let d = decompose_experimental(&a, &a.indicator(), 0.0, 3, &DecomposeOptions { depth_cap: 3, ..Default::default() }).unwrap();
        match d.outcome {
            DecomposeOutcome::Success { sum, .. } => assert!(sum.represents(&a)),
            other => panic!("{other:?} {:#?}", d.trace),
        }
    }

    #[test]
    fn decompose_ball_records_trace() {
        let a = ball(4, 4);
        let d = decompose_experimental(&a, &a.indicator(), 0.0, 4, &DecomposeOptions::default()).unwrap();
        assert!(!d.trace.is_empty());
        if let DecomposeOutcome::Success { sum, .. } = &d.outcome {
            assert!(sum.represents(&a));
        }
    }
}
