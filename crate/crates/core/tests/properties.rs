use cubenorm::approx::approx_spectral_norm;
use cubenorm::connectivity::is_k_affine_connected;
use cubenorm::constructions::{mela_approximator, product_function_g, product_function_g_spectrum};
use cubenorm::coset::{find_large_coset_inside, ring_membership_decompose, Coset, Subspace};
use cubenorm::fourier::{
    butterfly, fwht, inverse_fwht, project_subgroup, reduced_spectral_norm, restrict_to_coset, spectral_norm, CubeFunction,
};
use cubenorm::induction::{decompose_experimental, DecomposeOptions, DecomposeOutcome};
use cubenorm::set::SubsetOfCube;
use cubenorm::structure::{additive_energy, find_dense_coset, good_subgroup, regularize_subgroup, GoodSubgroupParams};
use cubenorm::suite::random_ring_member;
use cubenorm::tower::{tower_bound, TowerParams};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn function(n_max: usize) -> impl Strategy<Value = CubeFunction> {
    (0..=n_max).prop_flat_map(|n| {
        prop::collection::vec(-2.0f64..2.0, 1 << n).prop_map(move |v| CubeFunction::new(n, v).unwrap())
    })
}

fn pair(n_max: usize) -> impl Strategy<Value = (CubeFunction, CubeFunction)> {
    (0..=n_max).prop_flat_map(|n| {
        let side = prop::collection::vec(-2.0f64..2.0, 1 << n);
        (side.clone(), side).prop_map(move |(a, b)| (CubeFunction::new(n, a).unwrap(), CubeFunction::new(n, b).unwrap()))
    })
}

fn subset(n_lo: usize, n_hi: usize) -> impl Strategy<Value = SubsetOfCube> {
    (n_lo..=n_hi).prop_flat_map(|n| prop::collection::vec(any::<bool>(), 1 << n).prop_map(move |bits| {
        SubsetOfCube::from_predicate(n, |x| bits[x])
    }))
}

fn subspace(n: usize) -> impl Strategy<Value = Subspace> {
    prop::collection::vec(0..1usize << n, 0..=n).prop_map(move |v| Subspace::span(n, &v))
}

/// `f̂(a)` straight from the definition.
fn coefficient(f: &CubeFunction, a: usize) -> f64 {
    let sum: f64 = (0..f.len()).map(|x| if (a & x).count_ones().is_multiple_of(2) { f.get(x) } else { -f.get(x) }).sum();
    sum / f.len() as f64
}

fn rank(vectors: &[usize]) -> usize {
    let mut rows: Vec<usize> = vectors.to_vec();
    let mut r = 0;
    for bit in (0..usize::BITS).rev() {
        let Some(p) = (r..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i] >> bit & 1 == 1 {
                rows[i] ^= rows[r];
            }
        }
        r += 1;
    }
    r
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval(f in function(12)) {
        let spec = fwht(&f).unwrap();
        let lhs: f64 = spec.values().iter().map(|c| c * c).sum();
        let rhs = f.values().iter().map(|v| v * v).sum::<f64>() / f.len() as f64;
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs), "{lhs} vs {rhs}");
    }

    #[test]
    fn butterfly_twice_scales_by_cube_size(f in function(10)) {
        let mut v = f.values().to_vec();
        butterfly(&mut v);
        butterfly(&mut v);
        let scale = f.len() as f64;
        for (x, y) in f.values().iter().zip(&v) {
            prop_assert!((x * scale - y).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn transform_matches_definition(f in function(6)) {
        let spec = fwht(&f).unwrap();
        for a in 0..f.len() {
            prop_assert!((spec.get(a) - coefficient(&f, a)).abs() <= 1e-12);
        }
        let back = inverse_fwht(&spec).unwrap();
        prop_assert!(back.sup_distance(&f).unwrap() <= 1e-12);
    }

    #[test]
    fn submultiplicative((f, g) in pair(9)) {
        let fg = f.zip_with(&g, |x, y| x * y).unwrap();
        let lhs = spectral_norm(&fg).unwrap();
        let rhs = spectral_norm(&f).unwrap() * spectral_norm(&g).unwrap();
        prop_assert!(lhs <= rhs + 1e-9, "{lhs} > {rhs}");
    }

    #[test]
    fn norm_splits_over_a_subgroup((f, w) in (0..=8usize).prop_flat_map(|n| {
        (prop::collection::vec(-2.0f64..2.0, 1 << n), subspace(n))
            .prop_map(move |(v, w)| (CubeFunction::new(n, v).unwrap(), w))
    })) {
        let low = project_subgroup(&f, &w).unwrap();
        let high = f.zip_with(&low, |x, y| x - y).unwrap();
        let total = spectral_norm(&f).unwrap();
        let split = spectral_norm(&low).unwrap() + spectral_norm(&high).unwrap();
        prop_assert!((total - split).abs() <= 1e-9 * (1.0 + total), "{total} vs {split}");
        // the low part lives on W^⊥ and the high part off it
        let perp = w.annihilator();
        let low_spec = fwht(&low).unwrap();
        let high_spec = fwht(&high).unwrap();
        for a in 0..f.len() {
            if perp.contains(a) {
                prop_assert!(high_spec.get(a).abs() <= 1e-12);
            } else {
                prop_assert!(low_spec.get(a).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn reduced_norm_drops_the_mean(f in function(10)) {
        let mean = f.mean();
        let centred = f.map(|v| v - mean);
        let lhs = reduced_spectral_norm(&f).unwrap();
        prop_assert!((lhs - spectral_norm(&centred).unwrap()).abs() <= 1e-10 * (1.0 + lhs));
    }

    #[test]
    fn double_annihilator(w in (0..=10usize).prop_flat_map(subspace)) {
        let perp = w.annihilator();
        prop_assert_eq!(perp.dim(), w.n() - w.dim());
        for r in perp.members() {
            for x in w.basis() {
                prop_assert_eq!((r & x).count_ones() % 2, 0);
            }
        }
        prop_assert_eq!(perp.annihilator(), w);
    }

    #[test]
    fn ring_sums_are_exact_and_bound_the_norm(seed in any::<u64>(), n in 1..=5usize, l in 1..=3usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, gens) = random_ring_member(&mut rng, n, l);
        let sum = ring_membership_decompose(&a, &gens).unwrap().expect("ring member");
        prop_assert!(sum.len() <= 3usize.pow(l as u32));
        for x in 0..1usize << n {
            let v: i64 = sum.terms.iter().map(|t| if t.coset.contains(x) { t.sign as i64 } else { 0 }).sum();
            prop_assert_eq!(v, a.contains(x) as i64);
        }
        let norm = spectral_norm(&a.indicator()).unwrap();
        prop_assert!(norm <= sum.len().max(1) as f64 + 1e-9);
    }

    #[test]
    fn large_coset_lies_inside(seed in any::<u64>(), n in 1..=5usize, l in 1..=3usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, gens) = random_ring_member(&mut rng, n, l);
        prop_assume!(!a.is_empty());
        let c = find_large_coset_inside(&a, &gens).unwrap();
        prop_assert!(c.members().all(|x| a.contains(x)));
        prop_assert!(c.size() << l >= a.size(), "|coset| = {}, |A| = {}, l = {l}", c.size(), a.size());
    }

    #[test]
    fn product_spectrum_matches_transform(k in 0..=10usize, s in -1.0f64..=1.0) {
        let by_transform = fwht(&product_function_g(k, s).unwrap()).unwrap();
        let closed = product_function_g_spectrum(k, s).unwrap();
        for a in 0..1usize << k {
            prop_assert!((by_transform.get(a) - closed.get(a)).abs() <= 1e-12);
        }
    }

    #[test]
    fn energy_forms_agree(a in subset(0, 9)) {
        let e = additive_energy(&a).unwrap();
        let mut count = 0u128;
        for x in a.members() {
            for y in a.members() {
                for z in a.members() {
                    count += a.contains(x ^ y ^ z) as u128;
                }
            }
        }
        prop_assert_eq!(e.energy, count);
        prop_assert!((e.fourier - count as f64).abs() <= 1e-6 * (1.0 + count as f64));
    }

    #[test]
    fn regularizer_step_count(f in function(8), delta in 0.01f64..1.0) {
        let m = spectral_norm(&f).unwrap().max(1e-3);
        let v = Subspace::full(f.n());
        let reg = regularize_subgroup(&f, &v, delta, m).unwrap();
        prop_assert!(reg.absorbed.len() <= (m / delta).ceil() as usize);
        prop_assert_eq!(reg.dim_drop, v.dim() - reg.w.dim());
        prop_assert_eq!(reg.dim_drop, reg.absorbed.len());
    }

    #[test]
    fn tower_monotone(k in 1..=3u64, m in 1..=3u64, r in 1..=4u64, t in 1..=4u64, eps in 0.0f64..0.45) {
        let at = |m, r, t| tower_bound(&TowerParams::new(k, m, r, t, eps)).unwrap().value;
        let here = at(m, r, t);
        for next in [at(m + 1, r, t), at(m, r + 1, t), at(m, r, t + 1)] {
            prop_assert!(here.compare(&next).unwrap().is_le(), "{here:?} vs {next:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn approx_norm_is_monotone_in_epsilon(f in function(6), e1 in 0.0f64..0.49, e2 in 0.0f64..0.49) {
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let v_lo = approx_spectral_norm(&f, lo).unwrap();
        let v_hi = approx_spectral_norm(&f, hi).unwrap();
        prop_assert!(v_lo.value >= v_hi.value - 1e-7, "{} < {}", v_lo.value, v_hi.value);
        for r in [&v_lo, &v_hi] {
            prop_assert!(r.witness.sup_distance(&f).unwrap() <= r.epsilon + 1e-9);
            prop_assert!((spectral_norm(&r.witness).unwrap() - r.value).abs() <= 1e-6 * (1.0 + r.value));
        }
    }

    #[test]
    fn approx_norm_sandwich(f in function(4), eps in 0.0f64..0.49) {
        let r = approx_spectral_norm(&f, eps).unwrap();
        prop_assert!(r.value >= 0.0);
        prop_assert!(r.value <= spectral_norm(&f).unwrap() + 1e-9);
        let zero_feasible = f.sup_norm() <= eps;
        prop_assert_eq!(r.value <= 1e-9, zero_feasible, "value {} sup {}", r.value, f.sup_norm());
    }

    #[test]
    fn small_reduced_norm_forces_empty_set(
        n in 1..=3usize,
        eps in 0.0f64..0.49,
        top in any::<bool>(),
        offset in -0.2f64..0.2,
        raw in prop::collection::vec(-1.0f64..1.0, 8),
        theta in 0.0f64..=1.0,
    ) {
        let size = 1usize << n;
        let mut spec = raw[..size].to_vec();
        spec[0] = 0.0;
        let l1: f64 = spec.iter().map(|c| c.abs()).sum();
        let target = theta * (1.0 - 2.0 * eps) / 4.0;
        if l1 > 0.0 {
            spec.iter_mut().for_each(|c| *c *= target / l1);
        }
        spec[0] = if top { 1.0 } else { 0.0 } + offset;
        let g = inverse_fwht(&CubeFunction::with_side(n, spec, cubenorm::fourier::Side::Spectral).unwrap()).unwrap();
        prop_assert!(reduced_spectral_norm(&g).unwrap() <= (1.0 - 2.0 * eps) / 4.0 + 1e-12);
        for mask in 0..1u64 << size {
            let a = SubsetOfCube::from_mask(n, mask);
            if a.size() > size / 2 {
                continue;
            }
            if a.indicator().sup_distance(&g).unwrap() <= eps {
                prop_assert!(a.is_empty(), "A = {a:?} is close to g");
            }
        }
    }

    #[test]
    fn mela_norm_chain(k in 1..=10usize, eps in 0.01f64..0.49) {
        let r = mela_approximator(k, eps).unwrap();
        let l1 = r.weights.l1();
        prop_assert!(r.h_norm <= 2.0 * l1 + 1e-9, "{} > 2·{l1}", r.h_norm);
        prop_assert!(l1 <= (2 * r.m - 1) as f64 + 1e-9);
    }

    #[test]
    fn good_subgroup_chain(seed in any::<u64>(), n in 3..=6usize, l in 1..=3usize, noisy in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, _) = random_ring_member(&mut rng, n, l);
        prop_assume!(!a.is_empty());
        let eps = if noisy { 0.1 } else { 0.0 };
        let g = CubeFunction::from_fn(n, |x| a.contains(x) as u8 as f64 + eps * if x.count_ones() % 2 == 0 { 1.0 } else { -1.0 });
        let dense = find_dense_coset(&a, None, None).unwrap().expect("nonempty");
        let v = dense.coset.space().clone();
        let epsilon1 = (v.size() as f64 / a.size() as f64).min(1.0);
        let delta = ((1.0 - 2.0 * eps) / 8.0).min(dense.density / 2.0);
        let m = spectral_norm(&g).unwrap();
        let p = GoodSubgroupParams { epsilon: eps, delta, epsilon1, epsilon2: dense.density, m };
        let res = good_subgroup(&a, &g, &v, dense.coset.rep(), &p).unwrap();
        let spec = fwht(&g).unwrap();
        let perp = res.w.annihilator();
        let perp_mass: f64 = perp.members().filter(|&r| r != 0).map(|r| spec.get(r).abs()).sum();
        let bound = reduced_spectral_norm(&g).unwrap() - perp_mass;
        for c in res.w.coset_reps() {
            let restricted = reduced_spectral_norm(&restrict_to_coset(&g, &res.w, c).unwrap()).unwrap();
            prop_assert!(restricted <= bound + 1e-10, "coset {c}: {restricted} > {bound}");
        }
    }

    #[test]
    fn decompositions_evaluate_to_the_set(a in subset(1, 4), k in 2..=3usize) {
        let out = decompose_experimental(&a, &a.indicator(), 0.0, k, &DecomposeOptions::default()).unwrap();
        if let DecomposeOutcome::Success { sum, .. } = out.outcome {
            for x in 0..1usize << a.n() {
                let v: i64 = sum.terms.iter().map(|t| if t.coset.contains(x) { t.sign as i64 } else { 0 }).sum();
                prop_assert_eq!(v, a.contains(x) as i64, "point {}", x);
            }
        }
    }
}

/// Direct search: `a_0 ∈ A`, independent `a_1..a_k` with `a_0 + a_i ∈ A`, and
/// every sum of two or more of them (shifted by `a_0`) outside `A`.
fn has_ball_copy(a: &SubsetOfCube, k: usize) -> bool {
    let members: Vec<usize> = a.members().collect();
    for &a0 in &members {
        let dirs: Vec<usize> = members.iter().filter(|&&x| x != a0).map(|&x| x ^ a0).collect();
        let mut pick = Vec::with_capacity(k);
        if choose(&dirs, 0, k, &mut pick, &|p: &[usize]| {
            rank(p) == k
                && (0..1usize << k).filter(|t| t.count_ones() >= 2).all(|t| {
                    let x = (0..k).filter(|i| t >> i & 1 == 1).fold(a0, |acc, i| acc ^ p[i]);
                    !a.contains(x)
                })
        }) {
            return true;
        }
    }
    false
}

fn choose(pool: &[usize], from: usize, k: usize, pick: &mut Vec<usize>, ok: &dyn Fn(&[usize]) -> bool) -> bool {
    if pick.len() == k {
        return ok(pick);
    }
    for i in from..pool.len() {
        pick.push(pool[i]);
        let hit = choose(pool, i + 1, k, pick, ok);
        pick.pop();
        if hit {
            return true;
        }
    }
    false
}

#[test]
fn connectivity_agrees_with_definition_on_f2_to_the_fourth() {
    for k in 1..=3 {
        for mask in 0..1u64 << 16 {
            let a = SubsetOfCube::from_mask(4, mask);
            let verdict = is_k_affine_connected(&a, k).unwrap();
            assert_eq!(verdict.connected, !has_ball_copy(&a, k), "k = {k}, A = {a:?}");
            if let Some(w) = &verdict.witness {
                assert!(w.verify(&a));
                let coset = Coset::new(Subspace::span(4, &w.a[1..]), w.a[0]);
                assert_eq!(coset.dim(), k);
                let inside: Vec<usize> = coset.members().filter(|&x| a.contains(x)).collect();
                assert_eq!(inside.len(), k + 1, "k = {k}, A = {a:?}");
            }
        }
    }
}

#[test]
fn mela_chain_reaches_the_log_bound_at_dyadic_epsilon() {
    for j in 2..=8 {
        let eps = 2f64.powi(-j);
        for k in [1, 4, 9, 12] {
            let r = mela_approximator(k, eps).unwrap();
            assert!(2.0 * (2 * r.m - 1) as f64 <= 4.0 * j as f64 + 1e-9, "eps = {eps}");
            assert!(r.h_norm <= 4.0 * j as f64 + 1e-9);
        }
    }
}
