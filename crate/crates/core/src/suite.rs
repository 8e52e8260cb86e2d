//! Dichotomy experiments over families of sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::approx::approx_spectral_norm;
use crate::connectivity::{
    dichotomy_lower_bound_check, is_k_affine_connected_with_budget, ConnectivityVerdict, ConnectivityWitness, K_MAX,
};
use crate::constructions::{hamming_ball, quadratic_form};
use crate::coset::{coset_complexity, enumerate_cosets, Coset, Subspace, GREEDY_COMPLEXITY_N_MAX};
use crate::error::{Error, Result};
use crate::fourier::spectral_norm;
use crate::set::SubsetOfCube;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    /// Every subset of `F_2^n`, `n ≤ 4`; sampled when `2^{2^n}` exceeds `max_instances`.
    AllSubsets { n: usize },
    /// Uniformly random subsets of `F_2^n`, `n ≤ 6`.
    Random { n: usize, count: usize },
    /// `B_j ⊆ F_2^j` for `j = 1..=k_max`, tested at `k = j`.
    Balls { k_max: usize },
    /// Every coset of `F_2^n`, `n ≤ 4`.
    Cosets { n: usize },
    /// Random members of rings generated by `l` random cosets, `n ≤ 6`.
    CosetRings { n: usize, count: usize, l: usize },
    /// Support of `x_1x_2 + … + x_{n−1}x_n` for even `n ≤ 6`.
    Quadratic { n: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteParams {
    pub k: usize,
    pub seed: u64,
    pub tuple_budget: u64,
    pub max_instances: u64,
    /// When set, the `ε`-approximate norm is computed for `n ≤ 8`.
    pub approx_epsilon: Option<f64>,
    /// Largest `ℓ` tried for the coset complexity of branch (ii) rows.
    pub complexity_l_max: usize,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            k: 2,
            seed: 0x5eed_cafe,
            tuple_budget: crate::connectivity::DEFAULT_TUPLE_BUDGET,
            max_instances: 100_000,
            approx_epsilon: None,
            complexity_l_max: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteRow {
    pub set: SubsetOfCube,
    pub k: usize,
    pub size: usize,
    pub set_connected: bool,
    pub complement_connected: bool,
    /// `"i"` when some side fails connectivity, `"ii"` otherwise.
    pub branch: String,
    pub norm: f64,
    pub lower_bound: f64,
    pub witness_side: Option<String>,
    pub restriction_norm: Option<f64>,
    pub approx_norm: Option<f64>,
    /// Coset complexity for branch (ii) rows: `Some(l)` or `None` when unresolved within the cap.
    pub complexity: Option<usize>,
    pub complexity_exact: Option<bool>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub family: Family,
    pub params: SuiteParams,
    pub exhaustive: bool,
    pub instances: usize,
    pub branch_one: usize,
    pub branch_two: usize,
    pub violations: usize,
    pub rows: Vec<SuiteRow>,
}

const SUITE_N_MAX: usize = 6;
const APPROX_SUITE_N_MAX: usize = 8;

fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> SubsetOfCube {
    let bits: Vec<bool> = (0..1usize << n).map(|_| rng.random_bool(0.5)).collect();
    SubsetOfCube::from_predicate(n, |x| bits[x])
}

fn random_coset(rng: &mut ChaCha8Rng, n: usize) -> Coset {
    let d = rng.random_range(0..=n);
    let vecs: Vec<usize> = (0..d).map(|_| rng.random_range(0..1usize << n)).collect();
    Coset::new(Subspace::span(n, &vecs), rng.random_range(0..1usize << n))
}

/// A random union of atoms of the ring generated by `l` random cosets.
pub fn random_ring_member(rng: &mut ChaCha8Rng, n: usize, l: usize) -> (SubsetOfCube, Vec<Coset>) {
    let gens: Vec<Coset> = (0..l).map(|_| random_coset(rng, n)).collect();
    let keep: Vec<bool> = (0..1usize << l).map(|_| rng.random_bool(0.5)).collect();
    let a = SubsetOfCube::from_predicate(n, |x| {
        let sig = gens.iter().enumerate().fold(0, |s, (i, g)| s | (g.contains(x) as usize) << i);
        keep[sig]
    });
    (a, gens)
}

fn instances(family: &Family, params: &SuiteParams) -> Result<(Vec<(SubsetOfCube, usize)>, bool)> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let k = params.k;
    let cap = |n: usize, max: usize, what: &str| -> Result<()> {
        if n > max {
            return Err(Error::capability(format!("{what} family in F_2^{n}"), format!("n <= {max}")));
        }
        Ok(())
    };
    Ok(match family {
        Family::AllSubsets { n } => {
            cap(*n, 4, "all-subsets")?;
            let total = 1u64 << (1u64 << n);
            if total <= params.max_instances {
                ((0..total).map(|mask| (SubsetOfCube::from_mask(*n, mask), k)).collect(), true)
            } else {
                ((0..params.max_instances).map(|_| (random_subset(&mut rng, *n), k)).collect(), false)
            }
        }
        Family::Random { n, count } => {
            cap(*n, SUITE_N_MAX, "random")?;
            ((0..*count).map(|_| (random_subset(&mut rng, *n), k)).collect(), false)
        }
        Family::Balls { k_max } => {
            cap(*k_max, crate::constructions::BALL_K_MAX, "balls")?;
            ((1..=*k_max).map(|j| (hamming_ball(j), j)).collect(), true)
        }
        Family::Cosets { n } => {
            cap(*n, 4, "cosets")?;
            (enumerate_cosets(*n)?.into_iter().map(|c| (c.to_subset(), k)).collect(), true)
        }
        Family::CosetRings { n, count, l } => {
            cap(*n, SUITE_N_MAX, "coset-rings")?;
            ((0..*count).map(|_| (random_ring_member(&mut rng, *n, *l).0, k)).collect(), false)
        }
        Family::Quadratic { n } => {
            cap(*n, SUITE_N_MAX, "quadratic")?;
            if n % 2 == 1 {
                return Err(Error::usage("the quadratic family needs even n"));
            }
            (vec![(quadratic_form(*n)?, k)], true)
        }
    })
}

/// Connectivity verdict; for `k` above the search cap only `B_k` itself is
/// decided, by its explicit witness `a_0 = 0`, `a_i = e_i`.
fn verdict(a: &SubsetOfCube, k: usize, budget: u64) -> Result<ConnectivityVerdict> {
    if k <= K_MAX {
        return is_k_affine_connected_with_budget(a, k, budget);
    }
    let a_form: Vec<usize> = std::iter::once(0).chain((0..k).map(|i| 1 << i)).collect();
    let w = ConnectivityWitness { b: std::iter::once(0).chain((0..k).map(|i| 1 << i)).collect(), a: a_form };
    if a.n() >= k && w.verify(a) {
        return Ok(ConnectivityVerdict { k, connected: false, witness: Some(w), checks: 1 });
    }
    Err(Error::capability(format!("{k}-affine connectivity"), format!("k <= {K_MAX}")))
}

pub fn evaluate_instance(a: &SubsetOfCube, k: usize, params: &SuiteParams) -> Result<SuiteRow> {
    let set_verdict = verdict(a, k, params.tuple_budget)?;
    let complement = a.complement();
    let complement_verdict = if set_verdict.connected || k <= K_MAX {
        verdict(&complement, k, params.tuple_budget)?
    } else {
        // beyond the search cap only the failing side is needed for branch (i)
        ConnectivityVerdict { k, connected: true, witness: None, checks: 0 }
    };
    let check = dichotomy_lower_bound_check(a, &set_verdict, &complement_verdict)?;
    let approx_norm = match params.approx_epsilon {
        Some(eps) if a.n() <= APPROX_SUITE_N_MAX => Some(approx_spectral_norm(&a.indicator(), eps)?.value),
        _ => None,
    };
    let (complexity, complexity_exact) = if !check.applies && a.n() <= GREEDY_COMPLEXITY_N_MAX {
        let c = coset_complexity(a, params.complexity_l_max)?;
        (c.value, Some(c.exact))
    } else {
        (None, None)
    };
    Ok(SuiteRow {
        set: a.clone(),
        k,
        size: a.size(),
        set_connected: set_verdict.connected,
        complement_connected: complement_verdict.connected,
        branch: if check.applies { "i" } else { "ii" }.to_string(),
        norm: spectral_norm(&a.indicator())?,
        lower_bound: check.lower_bound,
        witness_side: check.witness_side,
        restriction_norm: check.restriction_norm,
        approx_norm,
        complexity,
        complexity_exact,
        passed: check.passed,
    })
}

/// Runs every instance of the family, asserting the lower bound on branch (i)
/// rows and recording the coset complexity on branch (ii) rows.
pub fn dichotomy_suite(family: &Family, params: &SuiteParams) -> Result<SuiteSummary> {
    if params.k == 0 {
        return Err(Error::usage("k must be positive"));
    }
    let (sets, exhaustive) = instances(family, params)?;
    let rows = sets.iter().map(|(a, k)| evaluate_instance(a, *k, params)).collect::<Result<Vec<_>>>()?;
    let branch_one = rows.iter().filter(|r| r.branch == "i").count();
    Ok(SuiteSummary {
        family: family.clone(),
        params: params.clone(),
        exhaustive,
        instances: rows.len(),
        branch_one,
        branch_two: rows.len() - branch_one,
        violations: rows.iter().filter(|r| !r.passed).count(),
        rows,
    })
}
