//! End-to-end acceptance criteria. Each criterion prints one PASS/FAIL line.

use std::time::{Duration, Instant};

use cubenorm::approx::approx_spectral_norm;
use cubenorm::constructions::{ball_norm_bounds_check, chebyshev_weights, hamming_ball, mela_approximator, quadratic_example, QuadraticOptions};
use cubenorm::coset::{enumerate_cosets, find_large_coset_inside, ring_membership_decompose, Coset, Subspace};
use cubenorm::fourier::{fwht, inverse_fwht, reduced_spectral_norm, spectral_norm, CubeFunction, Side};
use cubenorm::report::{Report, RunConfig};
use cubenorm::set::SubsetOfCube;
use cubenorm::structure::{additive_energy, find_dense_coset, good_subgroup, regularize_subgroup, GoodSubgroupParams};
use cubenorm::suite::{dichotomy_suite, random_ring_member, Family, SuiteParams};
use cubenorm::tower::{tower_bound, tower_bound_single, TowerParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn ball_norm_bounds() -> Outcome {
    let start = Instant::now();
    for k in 1..=16usize {
        let r = ball_norm_bounds_check(k).map_err(|e| e.to_string())?;
        // E|1 + Σ z_i| over z ∈ {±1}^k, by the binomial distribution of the number of −1s
        let exact: f64 = (0..=k)
            .map(|j| binomial(k, j) * (1.0 + k as f64 - 2.0 * j as f64).abs())
            .sum::<f64>()
            / 2f64.powi(k as i32);
        ensure((r.norm - exact).abs() <= 1e-9, || format!("k={k}: transform {} vs exact {exact}", r.norm))?;
        ensure((k as f64).sqrt() / 2.0 <= r.norm + 1e-9, || format!("k={k}: lower bound fails at {}", r.norm))?;
        ensure(r.norm <= ((k + 1) as f64).sqrt() + 1e-9, || format!("k={k}: upper bound fails at {}", r.norm))?;
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("k = 1..16 in {:?}", start.elapsed()))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn mela_construction() -> Outcome {
    let start = Instant::now();
    let mut worst = String::new();
    for k in [4usize, 8, 16] {
        let ball = hamming_ball(k).indicator();
        for eps in [0.25, 0.125, 0.0625] {
            let m = mela_approximator(k, eps).map_err(|e| e.to_string())?;
            let log = (1.0f64 / eps).log2();
            let sup = m.approx.sup_distance(&ball).map_err(|e| e.to_string())?;
            let h_norm = spectral_norm(&m.h).map_err(|e| e.to_string())?;
            let total = spectral_norm(&m.approx).map_err(|e| e.to_string())?;
            ensure(sup <= eps + 1e-12, || format!("k={k} eps={eps}: sup error {sup}"))?;
            ensure(h_norm <= 4.0 * log + 1e-9, || format!("k={k} eps={eps}: ||h|| = {h_norm} > {}", 4.0 * log))?;
            ensure(total <= 5.0 * log + 1e-9, || format!("k={k} eps={eps}: total {total} > {}", 5.0 * log))?;
            worst = format!("k={k} eps={eps}: sup {sup:.4}, ||h|| {h_norm:.4}, total {total:.4}");
        }
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("9 cases, last {worst}, {:?}", start.elapsed()))
}

fn chebyshev() -> Outcome {
    for m in 2..=12usize {
        let w = chebyshev_weights(m).map_err(|e| e.to_string())?;
        // constraints evaluated here independently of the library's residual
        for j in 1..=m {
            let s: f64 = w.eta.iter().zip(&w.sigma).map(|(e, s)| e.powi(2 * j as i32 - 1) * s).sum();
            let target = if j == 1 { 1.0 } else { 0.0 };
            ensure((s - target).abs() <= 1e-10, || format!("m={m}, j={j}: residual {}", (s - target).abs()))?;
        }
        let l1: f64 = w.sigma.iter().map(|s| s.abs()).sum();
        ensure(l1 <= (2 * m - 1) as f64 + 1e-8, || format!("m={m}: sum |sigma| = {l1}"))?;
    }
    let w = chebyshev_weights(2).map_err(|e| e.to_string())?;
    ensure(
        (w.sigma[0] - 8.0 / 3.0).abs() <= 1e-12 && (w.sigma[1] + 1.0 / 3.0).abs() <= 1e-12,
        || format!("m=2 weights {:?}", w.sigma),
    )?;
    Ok("m = 2..12, m=2 fixture (8/3, -1/3)".into())
}

fn lp_consistency() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut max_gap: f64 = 0.0;
    for i in 0..50 {
        let n = 1 + i % 6;
        let f = CubeFunction::from_fn(n, |_| 0.0);
        let values: Vec<f64> = (0..f.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let f = CubeFunction::new(n, values).map_err(|e| e.to_string())?;
        let lp = approx_spectral_norm(&f, 0.0).map_err(|e| e.to_string())?.value;
        let exact = spectral_norm(&f).map_err(|e| e.to_string())?;
        max_gap = max_gap.max((lp - exact).abs());
        ensure((lp - exact).abs() <= 1e-6, || format!("instance {i} (n={n}): LP {lp} vs norm {exact}"))?;
    }
    let mut rows = Vec::new();
    for k in 1..=8usize {
        let ball = hamming_ball(k).indicator();
        for eps in [0.25, 0.125, 0.0625] {
            let lp = approx_spectral_norm(&ball, eps).map_err(|e| e.to_string())?.value;
            let mela = spectral_norm(&mela_approximator(k, eps).map_err(|e| e.to_string())?.approx).map_err(|e| e.to_string())?;
            ensure(lp <= mela + 1e-6, || format!("k={k} eps={eps}: LP {lp} > Mela {mela}"))?;
            if k == 8 {
                rows.push(format!("{lp:.4}<={mela:.4}"));
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok(format!("max |LP - norm| {max_gap:.2e}; k=8: {}; {:?}", rows.join(", "), start.elapsed()))
}

fn coset_norm_characterization() -> Outcome {
    let start = Instant::now();
    let cosets: Vec<u64> = enumerate_cosets(3).map_err(|e| e.to_string())?.iter().map(Coset::mask).collect();
    let mut count = 0;
    for mask in 1u64..256 {
        let a = SubsetOfCube::from_mask(3, mask);
        let norm = spectral_norm(&a.indicator()).map_err(|e| e.to_string())?;
        let is_coset = cosets.contains(&mask);
        ensure((norm <= 1.0 + 1e-9) == is_coset, || format!("set {mask:#x}: norm {norm}, coset {is_coset}"))?;
        count += is_coset as usize;
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("255 sets, {count} cosets"))
}

fn energy_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let n = 1 + i % 8;
        let density = rng.random_range(0.05..0.95);
        let members: Vec<usize> = (0..1usize << n).filter(|_| rng.random_bool(density)).collect();
        let a = SubsetOfCube::from_members(n, members).map_err(|e| e.to_string())?;
        let e = additive_energy(&a).map_err(|e| e.to_string())?;
        // Fourier form recomputed here from the transform
        let spec = fwht(&a.indicator()).map_err(|e| e.to_string())?;
        let fourier: f64 = spec.values().iter().map(|c| c.powi(4)).sum::<f64>() * 2f64.powi(3 * n as i32);
        let rel = (fourier - e.energy as f64).abs() / (e.energy as f64).max(1.0);
        worst = worst.max(rel);
        ensure(rel <= 1e-6, || format!("instance {i}: {} vs {fourier}", e.energy))?;
    }
    for (n, basis) in [(4usize, vec![0b0011usize, 0b0101]), (6, vec![1, 2, 4, 8]), (8, vec![0b1000_0001, 0b0110_0000, 0b0001_1100])] {
        let w = Coset::new(Subspace::span(n, &basis), 0).to_subset();
        let e = additive_energy(&w).map_err(|e| e.to_string())?.energy;
        ensure(e == (w.size() as u128).pow(3), || format!("E(W) = {e} for |W| = {}", w.size()))?;
    }
    Ok(format!("100 random sets, max relative gap {worst:.2e}; E(W) = |W|^3"))
}

/// 100 ring members with ℓ ≤ 3 generators in `F_2^n`, `n ≤ 5`.
fn ring_corpus() -> Vec<(SubsetOfCube, Vec<Coset>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    (0..100)
        .map(|i| {
            let n = 2 + i % 4;
            let l = 1 + (i / 4) % 3;
            random_ring_member(&mut rng, n, l)
        })
        .collect()
}

fn signed_coset_sums() -> Outcome {
    let mut max_terms = 0;
    for (i, (a, gens)) in ring_corpus().iter().enumerate() {
        let sum = ring_membership_decompose(a, gens)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("instance {i}: not decomposed"))?;
        for x in 0..1usize << a.n() {
            let v: i64 = sum.terms.iter().filter(|t| t.coset.contains(x)).map(|t| t.sign as i64).sum();
            ensure(v == a.contains(x) as i64, || format!("instance {i}: value {v} at {x}"))?;
        }
        let l = gens.len() as u32;
        ensure(sum.len() <= 3usize.pow(l), || format!("instance {i}: {} terms for l = {l}", sum.len()))?;
        let norm = spectral_norm(&a.indicator()).map_err(|e| e.to_string())?;
        ensure(norm <= sum.len() as f64 + 1e-9, || format!("instance {i}: norm {norm} > {} terms", sum.len()))?;
        max_terms = max_terms.max(sum.len());
    }
    Ok(format!("100 instances, at most {max_terms} terms"))
}

fn large_coset_inside() -> Outcome {
    let mut empty = 0;
    for (i, (a, gens)) in ring_corpus().iter().enumerate() {
        if a.is_empty() {
            empty += 1;
            continue;
        }
        let c = find_large_coset_inside(a, gens).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(c.members().all(|x| a.contains(x)), || format!("instance {i}: coset leaves A"))?;
        ensure(c.size() << gens.len() >= a.size(), || format!("instance {i}: |V| = {}, |A| = {}, l = {}", c.size(), a.size(), gens.len()))?;
    }
    Ok(format!("{} nonempty instances ({empty} empty skipped)", 100 - empty))
}

fn random_bounded_norm(rng: &mut ChaCha8Rng, n: usize, bound: f64) -> CubeFunction {
    let size = 1usize << n;
    let mut spec = vec![0.0; size];
    for _ in 0..rng.random_range(1..=8) {
        spec[rng.random_range(0..size)] += rng.random_range(-1.0..1.0);
    }
    let l1: f64 = spec.iter().map(|c: &f64| c.abs()).sum();
    let scale = bound * rng.random_range(0.2..1.0) / l1.max(1e-12);
    let spec = CubeFunction::with_side(n, spec.iter().map(|c| c * scale).collect(), Side::Spectral).unwrap();
    inverse_fwht(&spec).unwrap()
}

fn direct_coset_variance(f: &CubeFunction, w: &Subspace, c: usize) -> f64 {
    let vals: Vec<f64> = w.members().map(|y| f.get(y ^ c)).collect();
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / vals.len() as f64
}

fn regularizer() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut max_drop = 0;
    for i in 0..50 {
        let n = 1 + i % 8;
        let f = random_bounded_norm(&mut rng, n, 3.0);
        let m = spectral_norm(&f).map_err(|e| e.to_string())?;
        for delta in [0.1, 0.2, 0.5] {
            let v = Subspace::full(n);
            let r = regularize_subgroup(&f, &v, delta, m).map_err(|e| format!("instance {i}: {e}"))?;
            for c in r.w.coset_reps() {
                let var = direct_coset_variance(&f, &r.w, c);
                ensure(var <= delta * m + 1e-9, || format!("instance {i}, delta {delta}: variance {var} > {}", delta * m))?;
            }
            let drop = v.dim() - r.w.dim();
            ensure(drop <= (m / delta).ceil() as usize, || format!("instance {i}: drop {drop} for M/delta = {}", m / delta))?;
            max_drop = max_drop.max(drop);
        }
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("150 runs, max dimension drop {max_drop}, {:?}", start.elapsed()))
}

/// Reduced norm of `y ↦ g(y + c)` on `W`, by direct character sums over `W`.
fn direct_restricted_reduced_norm(g: &CubeFunction, w: &Subspace, c: usize) -> f64 {
    let d = w.dim();
    let size = 1usize << d;
    (1..size)
        .map(|b| {
            let s: f64 = (0..size)
                .map(|y| {
                    let sign = if (b & y).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    sign * g.get(w.from_coords(y) ^ c)
                })
                .sum();
            (s / size as f64).abs()
        })
        .sum()
}

fn good_subgroup_corpus() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut done = 0;
    let mut sizes = Vec::new();
    while done < 20 {
        let n = 4 + done % 3;
        let (a, _) = random_ring_member(&mut rng, n, 1 + done % 3);
        if a.is_empty() {
            continue;
        }
        let eps = if done % 2 == 0 { 0.0 } else { 0.1 };
        let r = rng.random_range(0..1usize << n);
        let s = rng.random_range(-1.0..1.0);
        let g = CubeFunction::from_fn(n, |x| a.contains(x) as u8 as f64 + eps * s * if (r & x).count_ones() % 2 == 0 { 1.0 } else { -1.0 });
        let dense = find_dense_coset(&a, None, None).map_err(|e| e.to_string())?.expect("nonempty");
        let (v, shift) = (dense.coset.space().clone(), dense.coset.rep());
        let epsilon1 = (v.size() as f64 / a.size() as f64).min(1.0);
        let epsilon2 = dense.density;
        let delta = ((1.0 - 2.0 * eps) / 8.0).min(epsilon2 / 2.0);
        let m = spectral_norm(&g).map_err(|e| e.to_string())?;
        let p = GoodSubgroupParams { epsilon: eps, delta, epsilon1, epsilon2, m };
        let res = good_subgroup(&a, &g, &v, shift, &p).map_err(|e| format!("instance {done}: {e}"))?;

        let w = &res.w;
        let reps: Vec<usize> = w.coset_reps().collect();
        let mut f_w = Vec::new();
        for &c in &reps {
            let density = w.members().filter(|&y| a.contains(y ^ c)).count() as f64 / w.size() as f64;
            ensure(density <= delta + 1e-9 || density >= 1.0 - delta - 1e-9, || format!("instance {done}: density {density}"))?;
            if density >= 1.0 - delta {
                f_w.push(c);
            }
        }
        ensure(f_w == res.f_w, || format!("instance {done}: F_W {:?} vs {:?}", f_w, res.f_w))?;
        let log_bound = 5.0 * m * m / ((1.0 - 2.0 * eps).powi(2) * delta) - epsilon1.log2();
        ensure(!f_w.is_empty() && (f_w.len() as f64).log2() <= log_bound + 1e-9, || format!("instance {done}: |F_W| = {}", f_w.len()))?;
        if f_w.len() < reps.len() {
            let reduced = reduced_spectral_norm(&g).map_err(|e| e.to_string())?;
            let target = reduced - (1.0 - 2.0 * eps - 2.0 * delta) / 2.0;
            for &c in &reps {
                let rn = direct_restricted_reduced_norm(&g, w, c);
                ensure(rn <= target + 1e-9, || format!("instance {done}: restricted norm {rn} > {target}"))?;
            }
        }
        sizes.push(f_w.len());
        done += 1;
    }
    Ok(format!("20 instances, |F_W| = {sizes:?}"))
}

fn quadratic() -> Outcome {
    let opts = QuadraticOptions { connectivity_n_max: 6, ..QuadraticOptions::default() };
    let mut ratios = Vec::new();
    for n in [2usize, 4, 6, 8, 10, 12] {
        let (_, r) = quadratic_example(n, &opts).map_err(|e| e.to_string())?;
        if n == 4 {
            ensure(r.identity_exhaustive && r.identity_tuples == 16u64.pow(5), || format!("n=4: {} tuples", r.identity_tuples))?;
        }
        if [6, 8, 10].contains(&n) {
            ensure(r.identity_tuples == 10_000, || format!("n={n}: {} tuples", r.identity_tuples))?;
        }
        ensure(r.identity_violations == 0, || format!("n={n}: {} identity violations", r.identity_violations))?;
        ensure((0.25..=4.0).contains(&r.ratio), || format!("n={n}: ratio {}", r.ratio))?;
        if n == 6 {
            let s = r.support_connected.as_ref().map(|v| v.connected);
            let c = r.complement_connected.as_ref().map(|v| v.connected);
            ensure(s == Some(true) && c == Some(true), || format!("n=6: support {s:?}, complement {c:?}"))?;
        }
        ratios.push(format!("{:.3}", r.ratio));
    }
    Ok(format!("ratios for n = 2..12: {}", ratios.join(", ")))
}

fn dichotomy() -> Outcome {
    let mut parts = Vec::new();
    for (n, k) in [(3usize, 2usize), (4, 2), (4, 3), (4, 4)] {
        let params = SuiteParams { k, ..SuiteParams::default() };
        let s = dichotomy_suite(&Family::AllSubsets { n }, &params).map_err(|e| e.to_string())?;
        ensure(s.exhaustive, || format!("n={n} was sampled"))?;
        ensure(s.violations == 0, || format!("n={n}, k={k}: {} violations", s.violations))?;
        parts.push(format!("n={n} k={k}: {} sets, {} in branch (i)", s.instances, s.branch_one));
    }
    Ok(parts.join("; "))
}

fn tower_formulas() -> Outcome {
    let mut checked = 0;
    for eps in [0.0, 0.25, 0.45] {
        for k in 1..=4u64 {
            for m in 1..=4u64 {
                let single = tower_bound_single(&TowerParams::new(k, m, 1, 1, eps)).map_err(|e| e.to_string())?;
                let primed = tower_bound(&TowerParams::new(k, m, k + 1, 1, eps)).map_err(|e| e.to_string())?;
                ensure(single.value == primed.value, || format!("identity fails at k={k} m={m} eps={eps}"))?;
                for r in 1..=4u64 {
                    for t in 1..=4u64 {
                        let here = tower_bound(&TowerParams::new(k, m, r, t, eps)).map_err(|e| e.to_string())?;
                        if m == 1 && r <= k {
                            ensure(here.value.exact().is_some_and(|v| *v == 1u32.into()), || format!("base case at k={k} r={r}"))?;
                        }
                        for (dm, dr, dt) in [(1, 0, 0), (0, 1, 0), (0, 0, 1)] {
                            if m + dm > 4 || r + dr > 4 || t + dt > 4 {
                                continue;
                            }
                            let next = tower_bound(&TowerParams::new(k, m + dm, r + dr, t + dt, eps)).map_err(|e| e.to_string())?;
                            let ord = here.value.compare(&next.value).map_err(|e| e.to_string())?;
                            ensure(ord.is_le(), || format!("not monotone at k={k} m={m} r={r} t={t} step {:?}", (dm, dr, dt)))?;
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} grid points"))
}

fn full_suite(seed: u64) -> Result<String, String> {
    let config = RunConfig { seed, ..RunConfig::default() };
    let mut report = Report::new("dichotomy-suite", config);
    let families = [
        Family::AllSubsets { n: 3 },
        Family::Random { n: 5, count: 30 },
        Family::Balls { k_max: 8 },
        Family::Cosets { n: 3 },
        Family::CosetRings { n: 5, count: 30, l: 3 },
        Family::Quadratic { n: 6 },
    ];
    let mut summaries = Vec::new();
    for family in &families {
        let start = Instant::now();
        let params = SuiteParams { k: 3, seed, approx_epsilon: Some(0.25), ..SuiteParams::default() };
        let s = dichotomy_suite(family, &params).map_err(|e| e.to_string())?;
        report.time(format!("{family:?}"), start.elapsed().as_secs_f64() * 1e3);
        report.assert(cubenorm::report::Check::new(format!("{family:?}"), s.violations == 0, ""));
        summaries.push(s);
    }
    report.set_results(&summaries).map_err(|e| e.to_string())?;
    report.result_section().map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let first = full_suite(0x5eed)?;
    let second = full_suite(0x5eed)?;
    ensure(first == second, || "result sections differ".into())?;
    let other = full_suite(0x5eee)?;
    ensure(first != other, || "seed has no effect".into())?;
    Ok(format!("{} identical bytes", first.len()))
}

fn main() {
    let criteria: [Criterion; 14] = [
        ("ball norm bounds", ball_norm_bounds),
        ("Mela construction", mela_construction),
        ("Chebyshev weights", chebyshev),
        ("LP consistency", lp_consistency),
        ("norm-one sets are cosets in F_2^3", coset_norm_characterization),
        ("additive energy identity", energy_identity),
        ("signed coset sums", signed_coset_sums),
        ("large coset inside", large_coset_inside),
        ("regularizer", regularizer),
        ("good subgroup", good_subgroup_corpus),
        ("quadratic example", quadratic),
        ("dichotomy suite", dichotomy),
        ("tower formulas", tower_formulas),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} [{secs:.2}s]: {detail}", i + 1),
            Err(detail) => {
                println!("FAIL {:>2} {name} [{secs:.2}s]: {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
