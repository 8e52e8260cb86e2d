//! Explicit functions: Hamming balls, the product family `g_s` and its odd part
//! `h_s`, Chebyshev dual weights, the Mélas approximator of the ball, and the
//! quadratic form `x_1x_2 + x_3x_4 + …`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::connectivity::{is_k_affine_connected_with_budget, ConnectivityVerdict};
use crate::error::{Error, Result};
use crate::fourier::{spectral_norm, CubeFunction, Side, N_MAX};
use crate::report::Check;
use crate::set::SubsetOfCube;

/// `B_k = {x ∈ F_2^k : |x| ≤ 1}`.
pub fn hamming_ball(k: usize) -> SubsetOfCube {
    assert!((1..=N_MAX).contains(&k), "ball dimension {k} out of range");
    let mut s = SubsetOfCube::empty(k);
    s.insert(0);
    for i in 0..k {
        s.insert(1 << i);
    }
    s
}

fn weight(x: usize) -> i32 {
    x.count_ones() as i32
}

/// `g_s(x) = s^{|x|}`, with `0^0 = 1`.
pub fn product_function_g(k: usize, s: f64) -> Result<CubeFunction> {
    if !(-1.0..=1.0).contains(&s) {
        return Err(Error::usage(format!("s must lie in [-1, 1], got {s}")));
    }
    Ok(CubeFunction::from_fn(k, |x| s.powi(weight(x))))
}

/// Closed-form spectrum of `g_s`: `2^{-k} ∏_i (1 + s(−1)^{a_i})`.
pub fn product_function_g_spectrum(k: usize, s: f64) -> Result<CubeFunction> {
    if !(-1.0..=1.0).contains(&s) {
        return Err(Error::usage(format!("s must lie in [-1, 1], got {s}")));
    }
    let values = (0..1usize << k)
        .map(|a| {
            let w = weight(a);
            ((1.0 + s) / 2.0).powi(k as i32 - w) * ((1.0 - s) / 2.0).powi(w)
        })
        .collect();
    CubeFunction::with_side(k, values, Side::Spectral)
}

/// `h_s = (g_s − g_{−s}) / 2`: `s^{|x|}` on odd weights, 0 on even weights.
pub fn odd_part_h(k: usize, s: f64) -> Result<CubeFunction> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::usage(format!("s must lie in [0, 1], got {s}")));
    }
    Ok(CubeFunction::from_fn(k, |x| if weight(x) % 2 == 1 { s.powi(weight(x)) } else { 0.0 }))
}

/// Chebyshev polynomial `T_d(t)` by the three-term recurrence.
pub fn chebyshev_t(d: usize, t: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, t);
    if d == 0 {
        return prev;
    }
    for _ in 1..d {
        (prev, cur) = (cur, 2.0 * t * cur - prev);
    }
    cur
}

pub const CHEBYSHEV_M_MAX: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChebyshevWeights {
    pub m: usize,
    /// `η_i = cos((m − i)π / (2m − 1))`, `i = 1..m`.
    pub eta: Vec<f64>,
    pub sigma: Vec<f64>,
}

impl ChebyshevWeights {
    /// Max of `|Σ η_i σ_i − 1|` and `|Σ η_i^{2j−1} σ_i|` over `2 ≤ j ≤ m`.
    pub fn residual(&self) -> f64 {
        (1..=self.m)
            .map(|j| {
                let target = if j == 1 { 1.0 } else { 0.0 };
                let s: f64 = self.eta.iter().zip(&self.sigma).map(|(e, s)| e.powi(2 * j as i32 - 1) * s).sum();
                (s - target).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn l1(&self) -> f64 {
        self.sigma.iter().map(|s| s.abs()).sum()
    }
}

/// Weights `σ` with `Σ η_i σ_i = 1` and `Σ η_i^{2j−1} σ_i = 0` for `2 ≤ j ≤ m`.
///
/// Writing `τ_i = η_i σ_i` and `y_i = η_i²` turns the system into a Vandermonde
/// system in `y` whose solution is the Lagrange basis evaluated at 0, so
/// `σ_i = η_i^{-1} ∏_{j≠i} y_j / (y_j − y_i)`.
pub fn chebyshev_weights(m: usize) -> Result<ChebyshevWeights> {
    if m < 2 {
        return Err(Error::usage(format!("m must be at least 2, got {m}")));
    }
    if m > CHEBYSHEV_M_MAX {
        return Err(Error::capability(format!("Chebyshev weights for m = {m}"), format!("m <= {CHEBYSHEV_M_MAX}")));
    }
    let d = 2 * m - 1;
    let eta: Vec<f64> = (1..=m).map(|i| ((m - i) as f64 * PI / d as f64).cos()).collect();
    let y: Vec<f64> = eta.iter().map(|e| e * e).collect();
    let sigma: Vec<f64> = (0..m)
        .map(|i| {
            let prod: f64 = (0..m).filter(|&j| j != i).map(|j| y[j] / (y[j] - y[i])).product();
            prod / eta[i]
        })
        .collect();
    let w = ChebyshevWeights { m, eta, sigma };
    let res = w.residual();
    if res > 1e-10 {
        return Err(Error::Verification(format!("Chebyshev constraint residual {res:.3e} for m = {m}")));
    }
    if w.l1() > d as f64 + 1e-8 {
        return Err(Error::Verification(format!("sum |sigma| = {} exceeds 2m-1 = {d}", w.l1())));
    }
    if let Some(e) = w.eta.iter().find(|&&e| (chebyshev_t(d, e).abs() - 1.0).abs() > 1e-9) {
        return Err(Error::Verification(format!("|T_{d}({e})| != 1")));
    }
    Ok(w)
}

pub const MELA_K_MAX: usize = 16;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MelaApproximation {
    pub k: usize,
    pub epsilon: f64,
    pub m: usize,
    pub weights: ChebyshevWeights,
    pub h: CubeFunction,
    /// `h + 1_{0}`.
    pub approx: CubeFunction,
    pub h_norm: f64,
    pub approx_norm: f64,
    /// `‖approx − 1_{B_k}‖_∞`.
    pub sup_error: f64,
    pub checks: Vec<Check>,
}

/// `m = ⌈log₂(1/ε)⌉`.
pub fn mela_degree(epsilon: f64) -> usize {
    (1.0 / epsilon).log2().ceil() as usize
}

/// `h = 2 Σ σ(i) h_{η_i/2}`, which matches `1_{B_k} − 1_{0}` to within `ε`.
///
/// The pointwise case analysis (odd weight 1, odd weights `3..2m−1`, larger odd
/// weights, even weights) is verified and reported in `checks`; failures there are
/// errors. The norm bounds are reported without being enforced, since
/// `2(2m − 1) ≤ 4 log₂(1/ε)` needs `⌈log₂(1/ε)⌉ ≤ log₂(1/ε) + ½`.
pub fn mela_approximator(k: usize, epsilon: f64) -> Result<MelaApproximation> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::usage(format!("epsilon must lie in (0, 1/2), got {epsilon}")));
    }
    if !(1..=MELA_K_MAX).contains(&k) {
        return Err(Error::usage(format!("k must lie in [1, {MELA_K_MAX}], got {k}")));
    }
    let m = mela_degree(epsilon);
    let weights = chebyshev_weights(m)?;
    let mut values = vec![0.0; 1 << k];
    for (&eta, &sigma) in weights.eta.iter().zip(&weights.sigma) {
        let hs = odd_part_h(k, eta / 2.0)?;
        for (v, &hv) in values.iter_mut().zip(hs.values()) {
            *v += 2.0 * sigma * hv;
        }
    }
    let h = CubeFunction::new(k, values)?;
    let approx = CubeFunction::from_fn(k, |x| h.get(x) + if x == 0 { 1.0 } else { 0.0 });
    let ball = hamming_ball(k).indicator();
    let sup_error = approx.sup_distance(&ball)?;
    let h_norm = spectral_norm(&h)?;
    let approx_norm = spectral_norm(&approx)?;

    let tol = 1e-9;
    let by_weight = |pred: &dyn Fn(i32) -> bool, target: &dyn Fn(f64) -> bool| {
        (0..1usize << k).filter(|&x| pred(weight(x))).all(|x| target(h.get(x)))
    };
    let d = 2 * m as i32 - 1;
    let structural = vec![
        Check::new("h vanishes on even weights", by_weight(&|w| w % 2 == 0, &|v| v == 0.0), ""),
        Check::new("h = 1 at weight 1", by_weight(&|w| w == 1, &|v| (v - 1.0).abs() <= tol), ""),
        Check::new(
            "h = 0 at odd weights 3..2m-1",
            by_weight(&|w| w % 2 == 1 && (3..=d).contains(&w), &|v| v.abs() <= tol),
            "",
        ),
        Check::new(
            "|h| <= epsilon at odd weights >= 2m+1",
            by_weight(&|w| w % 2 == 1 && w > d, &|v| v.abs() <= epsilon + tol),
            "",
        ),
        Check::new("sup error <= epsilon", sup_error <= epsilon + tol, format!("{sup_error}")),
    ];
    if let Some(c) = structural.iter().find(|c| !c.passed) {
        return Err(Error::Verification(format!("Mélas approximator: {} failed", c.name)));
    }
    let log_inv = (1.0 / epsilon).log2();
    let mut checks = structural;
    checks.push(Check::new(
        "||h||_A <= 2 sum|sigma|",
        h_norm <= 2.0 * weights.l1() + 1e-9,
        format!("{h_norm} vs {}", 2.0 * weights.l1()),
    ));
    checks.push(Check::new("||h||_A <= 4 log2(1/eps)", h_norm <= 4.0 * log_inv + 1e-6, format!("{h_norm} vs {}", 4.0 * log_inv)));
    checks.push(Check::new(
        "||h + 1_0||_A <= 5 log2(1/eps)",
        approx_norm <= 5.0 * log_inv + 1e-6,
        format!("{approx_norm} vs {}", 5.0 * log_inv),
    ));
    Ok(MelaApproximation { k, epsilon, m, weights, h, approx, h_norm, approx_norm, sup_error, checks })
}

pub const BALL_K_MAX: usize = 20;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BallNormReport {
    pub k: usize,
    /// Spectral norm of `1_{B_k}` from the transform.
    pub norm: f64,
    /// Exact norm is `numerator / 2^k`.
    pub exact_numerator: u64,
    pub lower: f64,
    pub upper: f64,
    pub checks: Vec<Check>,
}

/// `‖1_{B_k}‖_A` by transform and exactly as `E_z |1 + Σ z_i|` over `z ∈ {±1}^k`,
/// together with the bounds `√k/2 ≤ ‖1_{B_k}‖_A ≤ √(k+1)`.
pub fn ball_norm_bounds_check(k: usize) -> Result<BallNormReport> {
    if !(1..=BALL_K_MAX).contains(&k) {
        return Err(Error::usage(format!("k must lie in [1, {BALL_K_MAX}], got {k}")));
    }
    let norm = spectral_norm(&hamming_ball(k).indicator())?;
    let mut binom: u64 = 1;
    let mut exact_numerator: u64 = 0;
    for j in 0..=k as u64 {
        // j coordinates equal to −1
        exact_numerator += binom * (1 + k as i64 - 2 * j as i64).unsigned_abs();
        binom = binom * (k as u64 - j) / (j + 1);
    }
    let exact = exact_numerator as f64 / (1u64 << k) as f64;
    let lower = (k as f64).sqrt() / 2.0;
    let upper = ((k + 1) as f64).sqrt();
    let checks = vec![
        Check::new("transform matches exact dyadic value", (norm - exact).abs() <= 1e-9, format!("{norm} vs {exact}")),
        Check::new("sqrt(k)/2 <= norm", lower <= norm + 1e-9, format!("{lower} <= {norm}")),
        Check::new("norm <= sqrt(k+1)", norm <= upper + 1e-9, format!("{norm} <= {upper}")),
    ];
    Ok(BallNormReport { k, norm, exact_numerator, lower, upper, checks })
}

pub const QUADRATIC_N_MAX: usize = 20;

/// `f(x) = x_1x_2 + x_3x_4 + … + x_{n−1}x_n` over `F_2`.
pub fn quadratic_form(n: usize) -> Result<SubsetOfCube> {
    if n % 2 == 1 || n == 0 || n > QUADRATIC_N_MAX {
        return Err(Error::usage(format!("n must be even and in [2, {QUADRATIC_N_MAX}], got {n}")));
    }
    Ok(SubsetOfCube::from_predicate(n, |x| (x & (x >> 1) & 0x5555_5555).count_ones() % 2 == 1))
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct QuadraticOptions {
    pub seed: u64,
    pub samples: usize,
    /// Largest `n` for which connectivity is attempted.
    pub connectivity_n_max: usize,
    pub tuple_budget: u64,
}

impl Default for QuadraticOptions {
    fn default() -> Self {
        QuadraticOptions { seed: 1, samples: 10_000, connectivity_n_max: 8, tuple_budget: 1_000_000_000 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadraticReport {
    pub n: usize,
    /// Tuples on which the fourth-derivative identity was checked.
    pub identity_tuples: u64,
    pub identity_exhaustive: bool,
    pub identity_violations: u64,
    pub norm: f64,
    /// `‖f‖_A / 2^{n/2}`.
    pub ratio: f64,
    pub support_connected: Option<ConnectivityVerdict>,
    pub complement_connected: Option<ConnectivityVerdict>,
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
}

fn fourth_derivative(f: &SubsetOfCube, a: [usize; 5]) -> bool {
    (0..16usize).fold(false, |acc, s| {
        let x = (0..4).fold(a[0], |x, i| if s >> i & 1 == 1 { x ^ a[i + 1] } else { x });
        acc ^ f.contains(x)
    })
}

pub fn quadratic_example(n: usize, opts: &QuadraticOptions) -> Result<(CubeFunction, QuadraticReport)> {
    let supp = quadratic_form(n)?;
    let f = supp.indicator();
    let size = 1usize << n;
    let exhaustive = n <= 4;
    let mut tuples = 0u64;
    let mut violations = 0u64;
    if exhaustive {
        for code in 0..size.pow(5) {
            let mut a = [0usize; 5];
            let mut c = code;
            for slot in a.iter_mut() {
                *slot = c % size;
                c /= size;
            }
            tuples += 1;
            violations += fourth_derivative(&supp, a) as u64;
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.samples {
            let a: [usize; 5] = std::array::from_fn(|_| rng.random_range(0..size));
            tuples += 1;
            violations += fourth_derivative(&supp, a) as u64;
        }
    }
    let norm = spectral_norm(&f)?;
    let ratio = norm / 2f64.powi(n as i32 / 2);
    let mut notes = Vec::new();
    let mut checks = vec![
        Check::new("fourth-derivative identity", violations == 0, format!("{violations} of {tuples} tuples violate")),
        Check::new("norm / 2^(n/2) in [1/4, 4]", (0.25..=4.0).contains(&ratio), format!("{ratio}")),
    ];
    let (mut support_connected, mut complement_connected) = (None, None);
    if n <= opts.connectivity_n_max {
        for (label, set, slot) in [
            ("support", supp.clone(), &mut support_connected),
            ("complement", supp.complement(), &mut complement_connected),
        ] {
            match is_k_affine_connected_with_budget(&set, 4, opts.tuple_budget) {
                Ok(v) => {
                    checks.push(Check::new(format!("{label} is 4-affine connected"), v.connected, ""));
                    *slot = Some(v);
                }
                Err(Error::Capability { what, cap }) => notes.push(format!("{label} connectivity skipped: {what} ({cap})")),
                Err(e) => return Err(e),
            }
        }
    }
    let report = QuadraticReport {
        n,
        identity_tuples: tuples,
        identity_exhaustive: exhaustive,
        identity_violations: violations,
        norm,
        ratio,
        support_connected,
        complement_connected,
        notes,
        checks,
    };
    Ok((f, report))
}
