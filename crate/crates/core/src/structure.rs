//! Additive energy, dense cosets, and subgroups on whose cosets a function of
//! small spectral norm is nearly constant.

use serde::{Deserialize, Serialize};

use crate::coset::{enumerate_subspaces, for_each_subspace_of_dim, Coset, Subspace, ENUMERATION_N_MAX};
use crate::error::{Error, Result};
use crate::fourier::{
    butterfly_i64, coset_variance, fwht, reduced_spectral_norm, restrict_to_coset, spectral_norm, CubeFunction,
};
use crate::report::Check;
use crate::set::SubsetOfCube;

pub const ENERGY_N_MAX: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdditiveEnergy {
    /// `Σ_s r_A(s)²`, exact.
    pub energy: u128,
    /// `2^{3n} Σ_a 1̂_A(a)⁴` in floating point.
    pub fourier: f64,
}

/// `E(A) = #{(a₁,a₂,a₃,a₄) ∈ A⁴ : a₁ + a₂ = a₃ + a₄}`, by pair counting and
/// cross-checked against the Fourier form.
pub fn additive_energy(a: &SubsetOfCube) -> Result<AdditiveEnergy> {
    let n = a.n();
    if n > ENERGY_N_MAX {
        return Err(Error::capability(format!("additive energy in F_2^{n}"), format!("n <= {ENERGY_N_MAX}")));
    }
    let size = 1usize << n;
    let members: Vec<usize> = a.members().collect();
    let r: Vec<u64> = if (members.len() as u64).pow(2) <= 1 << 32 {
        let mut r = vec![0u64; size];
        for &x in &members {
            for &y in &members {
                r[x ^ y] += 1;
            }
        }
        r
    } else {
        // r = 2^{-n} H((H 1_A)²), all in exact integers
        let mut h: Vec<i64> = (0..size).map(|x| a.contains(x) as i64).collect();
        butterfly_i64(&mut h);
        h.iter_mut().for_each(|v| *v *= *v);
        butterfly_i64(&mut h);
        h.iter().map(|&v| (v >> n) as u64).collect()
    };
    let energy: u128 = r.iter().map(|&v| v as u128 * v as u128).sum();

    let spectrum = fwht(&a.indicator())?;
    let fourier = spectrum.values().iter().map(|c| c.powi(4)).sum::<f64>() * 2f64.powi(3 * n as i32);
    let rel = (fourier - energy as f64).abs() / (energy as f64).max(1.0);
    if rel > 1e-6 {
        return Err(Error::Verification(format!("energy {energy} disagrees with Fourier form {fourier}")));
    }
    Ok(AdditiveEnergy { energy, fourier })
}

/// Largest `n` for the restricted (`codim ≤ 3`) dense-coset search.
pub const DENSE_COSET_N_MAX: usize = 10;
pub const DENSE_COSET_CODIM_MAX: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DenseCoset {
    pub coset: Coset,
    /// `|A ∩ (V + a)|`.
    pub hits: usize,
    pub density: f64,
}

/// The coset `V + a` maximizing `|A ∩ (V+a)| / |V|` among those with
/// `|V| ≥ threshold · |A|` and codimension at most `codim_max`.
///
/// Ties prefer larger `V`, then the smallest coset in canonical order. Full
/// enumeration needs `n ≤ 6`; beyond that `codim_max ≤ 3` and `n ≤ 10` are required.
pub fn find_dense_coset(a: &SubsetOfCube, codim_max: Option<usize>, threshold: Option<f64>) -> Result<Option<DenseCoset>> {
    let n = a.n();
    let codim_max = codim_max.unwrap_or(n).min(n);
    if n > ENUMERATION_N_MAX && (codim_max > DENSE_COSET_CODIM_MAX || n > DENSE_COSET_N_MAX) {
        return Err(Error::capability(
            format!("dense-coset search in F_2^{n} with codimension <= {codim_max}"),
            format!(
                "n <= {ENUMERATION_N_MAX}, or codim <= {DENSE_COSET_CODIM_MAX} with n <= {DENSE_COSET_N_MAX}"
            ),
        ));
    }
    if a.is_empty() {
        return Ok(None);
    }
    let threshold = threshold.unwrap_or(2f64.powi(-(n as i32)));
    let min_size = threshold * a.size() as f64;
    let members: Vec<usize> = a.members().collect();

    let mut best: Option<(usize, Coset)> = None;
    let mut consider = |v: Subspace| {
        if (v.size() as f64) < min_size - 1e-12 {
            return;
        }
        let mut counts = std::collections::BTreeMap::new();
        for &x in &members {
            *counts.entry(v.reduce(x)).or_insert(0usize) += 1;
        }
        for (rep, hits) in counts {
            let cand = Coset::new(v.clone(), rep);
            let better = match &best {
                None => true,
                Some((bh, bc)) => {
                    let lhs = hits as u128 * bc.size() as u128;
                    let rhs = *bh as u128 * cand.size() as u128;
                    lhs > rhs || (lhs == rhs && (cand.dim() > bc.dim() || (cand.dim() == bc.dim() && cand < *bc)))
                }
            };
            if better {
                best = Some((hits, cand));
            }
        }
    };
    if n <= ENUMERATION_N_MAX {
        for v in enumerate_subspaces(n, n - codim_max..=n)? {
            consider(v);
        }
    } else {
        for d in 0..=codim_max {
            for_each_subspace_of_dim(n, d, &mut |u| consider(u.annihilator()));
        }
    }
    Ok(best.map(|(hits, coset)| {
        let density = hits as f64 / coset.size() as f64;
        DenseCoset { coset, hits, density }
    }))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Regularization {
    pub w: Subspace,
    /// Canonical representatives `r` of the absorbed classes, in order.
    pub absorbed: Vec<usize>,
    pub dim_drop: usize,
    /// `⌈M/δ⌉`.
    pub dim_drop_bound: usize,
    pub max_variance: f64,
    /// `δM`.
    pub variance_bound: f64,
}

/// Shrinks `V` to `W ⊆ V` until every class `r + W^⊥` with `r ∉ W^⊥` carries
/// spectral mass at most `δ`; each step absorbs the heaviest class by passing to
/// `W ∩ r^⊥`. Afterwards `Var[f | W + c] ≤ δM` on every coset and
/// `dim V − dim W ≤ ⌈M/δ⌉` are verified directly.
pub fn regularize_subgroup(f: &CubeFunction, v: &Subspace, delta: f64, m: f64) -> Result<Regularization> {
    if delta.is_nan() || delta <= 0.0 || delta.is_infinite() {
        return Err(Error::Precondition(format!("delta must be positive, got {delta}")));
    }
    if v.n() != f.n() {
        return Err(Error::usage(format!("subspace lives in F_2^{}, function in F_2^{}", v.n(), f.n())));
    }
    let norm = spectral_norm(f)?;
    if norm > m + 1e-9 {
        return Err(Error::Precondition(format!("||f||_A = {norm} exceeds M = {m}")));
    }
    let spectrum = fwht(f)?;
    let mut w = v.clone();
    let mut absorbed = Vec::new();
    loop {
        let perp = w.annihilator();
        let mut mass = vec![0.0; f.len()];
        for (a, &c) in spectrum.values().iter().enumerate() {
            mass[perp.reduce(a)] += c.abs();
        }
        let heaviest = (1..f.len())
            .filter(|&r| perp.reduce(r) == r)
            .fold(None, |best: Option<usize>, r| match best {
                Some(b) if mass[b] >= mass[r] => Some(b),
                _ => Some(r),
            });
        match heaviest {
            Some(r) if mass[r] > delta => {
                w = w.intersection(&Subspace::span(f.n(), &[r]).annihilator());
                absorbed.push(r);
            }
            _ => break,
        }
    }
    let dim_drop = v.dim() - w.dim();
    let dim_drop_bound = (m / delta).ceil() as usize;
    let mut max_variance: f64 = 0.0;
    for c in w.coset_reps() {
        max_variance = max_variance.max(coset_variance(f, &w, c)?);
    }
    let variance_bound = delta * m;
    if max_variance > variance_bound + 1e-9 || dim_drop > dim_drop_bound {
        return Err(Error::Verification(format!(
            "regularization postconditions failed: max variance {max_variance} (bound {variance_bound}), \
             dimension drop {dim_drop} (bound {dim_drop_bound})"
        )));
    }
    Ok(Regularization { w, absorbed, dim_drop, dim_drop_bound, max_variance, variance_bound })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GoodSubgroupParams {
    pub epsilon: f64,
    pub delta: f64,
    pub epsilon1: f64,
    pub epsilon2: f64,
    pub m: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CosetCensus {
    pub rep: usize,
    pub hits: usize,
    pub density: f64,
    /// `‖g|_{W+c}‖_𝔸(W)`.
    pub reduced_norm: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GoodSubgroupResult {
    pub w: Subspace,
    /// Canonical representatives of the cosets of `W` on which `A` has density ≥ 1 − δ.
    pub f_w: Vec<usize>,
    pub delta: f64,
    /// Parameter handed to the regularizer: `(1−2ε)²δ/(4M)`.
    pub regularization_delta: f64,
    pub regularization: Regularization,
    pub cosets: Vec<CosetCensus>,
    pub reduced_norm_g: f64,
    /// `Σ_{r ∈ W^⊥∖0} |ĝ(r)|`.
    pub perp_mass: f64,
    /// `log₂` of the bound `2^{5M²/((1−2ε)²δ)} / ε₁` on `|F_W|`.
    pub f_w_log2_bound: f64,
    pub checks: Vec<Check>,
}

/// Checks the hypotheses, regularizes `g` inside `V`, and verifies the three
/// conclusions: density dichotomy at `δ`, `1 ≤ |F_W| ≤ 2^{5M²/((1−2ε)²δ)}/ε₁`, and the
/// reduced-norm drop of `(1−2ε−2δ)/2` on every coset when `F_W` is not everything.
pub fn good_subgroup(
    a: &SubsetOfCube,
    g: &CubeFunction,
    v: &Subspace,
    shift: usize,
    p: &GoodSubgroupParams,
) -> Result<GoodSubgroupResult> {
    let n = a.n();
    if g.n() != n || v.n() != n {
        return Err(Error::usage("set, function and subspace must share the dimension"));
    }
    let GoodSubgroupParams { epsilon, delta, epsilon1, epsilon2, m } = *p;
    let coset = Coset::new(v.clone(), shift);
    let hits_v = coset.members().filter(|&x| a.contains(x)).count();
    let sup = g.sup_distance(&a.indicator())?;
    let g_norm = spectral_norm(g)?;
    let mut failed = Vec::new();
    let mut require = |ok: bool, what: String| {
        if !ok {
            failed.push(what);
        }
    };
    require((0.0..0.5).contains(&epsilon), format!("epsilon = {epsilon} not in [0, 1/2)"));
    require(epsilon1 > 0.0 && epsilon2 > 0.0, "epsilon1 and epsilon2 must be positive".into());
    require(delta > 0.0 && delta < 0.5_f64.min(epsilon2), format!("delta = {delta} not in (0, min(1/2, epsilon2))"));
    require(m >= 0.5, format!("M = {m} < 1/2"));
    require(sup <= epsilon + 1e-9, format!("||1_A - g||_inf = {sup} > epsilon = {epsilon}"));
    require(g_norm <= m + 1e-9, format!("||g||_A = {g_norm} > M = {m}"));
    require(
        coset.size() as f64 >= epsilon1 * a.size() as f64 - 1e-12,
        format!("|V+a| = {} < epsilon1 |A| = {}", coset.size(), epsilon1 * a.size() as f64),
    );
    require(
        hits_v as f64 >= epsilon2 * v.size() as f64 - 1e-12,
        format!("|A ∩ (V+a)| = {hits_v} < epsilon2 |V| = {}", epsilon2 * v.size() as f64),
    );
    if !failed.is_empty() {
        return Err(Error::Precondition(failed.join("; ")));
    }

    let gap = 1.0 - 2.0 * epsilon;
    let regularization_delta = gap * gap * delta / (4.0 * m);
    let regularization = regularize_subgroup(g, v, regularization_delta, m)?;
    let w = regularization.w.clone();

    let spectrum = fwht(g)?;
    let perp = w.annihilator();
    let perp_mass: f64 = perp.members().filter(|&r| r != 0).map(|r| spectrum.get(r).abs()).sum();
    let reduced_norm_g = reduced_spectral_norm(g)?;
    let mut cosets = Vec::new();
    for rep in w.coset_reps() {
        let hits = w.members().filter(|&y| a.contains(y ^ rep)).count();
        let restricted = restrict_to_coset(g, &w, rep)?;
        cosets.push(CosetCensus {
            rep,
            hits,
            density: hits as f64 / w.size() as f64,
            reduced_norm: reduced_spectral_norm(&restricted)?,
        });
    }
    let f_w: Vec<usize> = cosets.iter().filter(|c| c.density >= 1.0 - delta).map(|c| c.rep).collect();
    let f_w_log2_bound = 5.0 * m * m / (gap * gap * delta) - epsilon1.log2();

    let tol = 1e-9;
    let mut checks = vec![Check::new(
        "(i) every coset density <= delta or >= 1 - delta",
        cosets.iter().all(|c| c.density <= delta + tol || c.density >= 1.0 - delta - tol),
        "",
    )];
    checks.push(Check::new(
        "(ii) 1 <= |F_W| <= bound",
        !f_w.is_empty() && (f_w.len() as f64).log2() <= f_w_log2_bound + tol,
        format!("|F_W| = {}, log2 bound {f_w_log2_bound}", f_w.len()),
    ));
    let chain = cosets.iter().all(|c| c.reduced_norm <= reduced_norm_g - perp_mass + 1e-10);
    checks.push(Check::new("norm-decrease chain ||g|W+c|| <= ||g|| - perp mass", chain, ""));
    if f_w.len() < w.coset_reps().count() {
        let drop = (gap - 2.0 * delta) / 2.0;
        checks.push(Check::new(
            "(iii) reduced norm drops by (1-2eps-2delta)/2 on every coset",
            cosets.iter().all(|c| c.reduced_norm <= reduced_norm_g - drop + tol),
            format!("required drop {drop}"),
        ));
    }
    if let Some(c) = checks.iter().find(|c| !c.passed) {
        return Err(Error::Verification(format!("good subgroup: {} failed ({})", c.name, c.detail)));
    }
    Ok(GoodSubgroupResult {
        w,
        f_w,
        delta,
        regularization_delta,
        regularization,
        cosets,
        reduced_norm_g,
        perp_mass,
        f_w_log2_bound,
        checks,
    })
}
