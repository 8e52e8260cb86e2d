//! Exact Fourier analysis on the Boolean cube.
//!
//! Points and characters are both encoded as `n`-bit integers: bit `i` holds
//! coordinate `x_{i+1}`, and `a` names the character `x ↦ (-1)^{popcount(a & x)}`.
//! The forward transform is expectation-normalized, so `fwht(f)[a] = E_x f(x) χ_a(x)`,
//! and the inverse carries no factor.

use serde::{Deserialize, Serialize};

use crate::coset::Subspace;
use crate::error::{Error, Result};

/// Largest dimension accepted by the dense transforms.
pub const N_MAX: usize = 24;

/// Default absolute tolerance for floating comparisons.
pub const TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Point,
    Spectral,
}

/// A real-valued function on `F_2^n`, stored densely in index order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CubeFunctionRepr", into = "CubeFunctionRepr")]
pub struct CubeFunction {
    n: usize,
    values: Vec<f64>,
    side: Side,
}

#[derive(Serialize, Deserialize)]
struct CubeFunctionRepr {
    n: usize,
    values: Vec<f64>,
    #[serde(default = "point_side", skip_serializing_if = "is_point_side")]
    side: Side,
}

fn point_side() -> Side {
    Side::Point
}

fn is_point_side(s: &Side) -> bool {
    *s == Side::Point
}

impl TryFrom<CubeFunctionRepr> for CubeFunction {
    type Error = Error;

    fn try_from(r: CubeFunctionRepr) -> Result<Self> {
        CubeFunction::with_side(r.n, r.values, r.side)
    }
}

impl From<CubeFunction> for CubeFunctionRepr {
    fn from(f: CubeFunction) -> Self {
        CubeFunctionRepr { n: f.n, values: f.values, side: f.side }
    }
}

#[inline]
pub fn chi(a: usize, x: usize) -> f64 {
    if (a & x).count_ones() & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n > N_MAX {
        return Err(Error::capability(format!("dimension n = {n}"), format!("n <= {N_MAX}")));
    }
    Ok(())
}

impl CubeFunction {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        Self::with_side(n, values, Side::Point)
    }

    pub fn with_side(n: usize, values: Vec<f64>, side: Side) -> Result<Self> {
        check_dim(n)?;
        if values.len() != 1 << n {
            return Err(Error::usage(format!(
                "expected 2^{n} = {} values, got {}",
                1usize << n,
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::usage(format!("value at index {i} is not finite")));
        }
        Ok(CubeFunction { n, values, side })
    }

    pub fn zeros(n: usize) -> Self {
        Self::constant(n, 0.0)
    }

    pub fn constant(n: usize, c: f64) -> Self {
        assert!(n <= N_MAX);
        CubeFunction { n, values: vec![c; 1 << n], side: Side::Point }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> f64) -> Self {
        assert!(n <= N_MAX);
        CubeFunction { n, values: (0..1usize << n).map(f).collect(), side: Side::Point }
    }

    /// The character `χ_a` as a point-side function.
    pub fn character(n: usize, a: usize) -> Self {
        Self::from_fn(n, |x| chi(a, x))
    }

    pub fn point_mass(n: usize, at: usize) -> Self {
        Self::from_fn(n, |x| if x == at { 1.0 } else { 0.0 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, x: usize) -> f64 {
        self.values[x]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `‖self − other‖_∞`.
    pub fn sup_distance(&self, other: &CubeFunction) -> Result<f64> {
        same_dim(self, other)?;
        Ok(self.values.iter().zip(&other.values).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> CubeFunction {
        CubeFunction { n: self.n, values: self.values.iter().map(|&v| f(v)).collect(), side: self.side }
    }

    pub fn zip_with(&self, other: &CubeFunction, f: impl Fn(f64, f64) -> f64) -> Result<CubeFunction> {
        same_dim(self, other)?;
        if self.side != other.side {
            return Err(Error::usage("cannot combine point-side and spectral-side functions"));
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(CubeFunction { n: self.n, values, side: self.side })
    }

    fn expect_side(&self, side: Side) -> Result<()> {
        if self.side != side {
            return Err(Error::usage(format!("expected a {side:?}-side function, got {:?}-side", self.side)));
        }
        Ok(())
    }
}

fn same_dim(a: &CubeFunction, b: &CubeFunction) -> Result<()> {
    if a.n != b.n {
        return Err(Error::usage(format!("dimension mismatch: {} vs {}", a.n, b.n)));
    }
    Ok(())
}

/// Unnormalized in-place Walsh–Hadamard butterfly. Applying it twice scales by `2^n`.
pub fn butterfly(values: &mut [f64]) {
    let len = values.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for block in values.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let (a, b) = (*u, *v);
                *u = a + b;
                *v = a - b;
            }
        }
        h *= 2;
    }
}

/// Integer butterfly, used where exact counts are needed.
pub fn butterfly_i64(values: &mut [i64]) {
    let len = values.len();
    let mut h = 1;
    while h < len {
        for block in values.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let (a, b) = (*u, *v);
                *u = a + b;
                *v = a - b;
            }
        }
        h *= 2;
    }
}

/// Forward transform: `f̂(a) = 2^{-n} Σ_x f(x) (−1)^{a·x}`.
pub fn fwht(f: &CubeFunction) -> Result<CubeFunction> {
    f.expect_side(Side::Point)?;
    let mut values = f.values.clone();
    butterfly(&mut values);
    let scale = 1.0 / values.len() as f64;
    values.iter_mut().for_each(|v| *v *= scale);
    Ok(CubeFunction { n: f.n, values, side: Side::Spectral })
}

/// Inverse transform: `f(x) = Σ_a F(a) (−1)^{a·x}`.
pub fn inverse_fwht(spectrum: &CubeFunction) -> Result<CubeFunction> {
    spectrum.expect_side(Side::Spectral)?;
    let mut values = spectrum.values.clone();
    butterfly(&mut values);
    Ok(CubeFunction { n: spectrum.n, values, side: Side::Point })
}

/// `‖f‖_A = Σ_a |f̂(a)|`.
pub fn spectral_norm(f: &CubeFunction) -> Result<f64> {
    Ok(fwht(f)?.values.iter().map(|c| c.abs()).sum())
}

/// `‖f‖_𝔸 = Σ_{a≠0} |f̂(a)|`.
pub fn reduced_spectral_norm(f: &CubeFunction) -> Result<f64> {
    Ok(fwht(f)?.values[1..].iter().map(|c| c.abs()).sum())
}

/// `f1 * f2 (x) = E_y f1(x + y) f2(y)`, computed through the spectrum.
pub fn convolve(f1: &CubeFunction, f2: &CubeFunction) -> Result<CubeFunction> {
    same_dim(f1, f2)?;
    let a = fwht(f1)?;
    let b = fwht(f2)?;
    inverse_fwht(&a.zip_with(&b, |x, y| x * y)?)
}

/// `f * μ_W`: keeps only the Fourier coefficients on `W^⊥`.
///
/// Computed as the average of `f` over each coset of `W`.
pub fn project_subgroup(f: &CubeFunction, w: &Subspace) -> Result<CubeFunction> {
    f.expect_side(Side::Point)?;
    if w.n() != f.n {
        return Err(Error::usage(format!("subspace lives in F_2^{}, function in F_2^{}", w.n(), f.n)));
    }
    let mut sums = vec![0.0; f.len()];
    for (x, &v) in f.values.iter().enumerate() {
        sums[w.reduce(x)] += v;
    }
    let size = (1usize << w.dim()) as f64;
    let values = (0..f.len()).map(|x| sums[w.reduce(x)] / size).collect();
    Ok(CubeFunction { n: f.n, values, side: Side::Point })
}

/// The restriction `w ↦ f(w + a)` as a function on `W ≅ F_2^{dim W}`,
/// indexed by coordinates in the canonical basis of `W`.
pub fn restrict_to_coset(f: &CubeFunction, w: &Subspace, a: usize) -> Result<CubeFunction> {
    f.expect_side(Side::Point)?;
    if w.n() != f.n {
        return Err(Error::usage(format!("subspace lives in F_2^{}, function in F_2^{}", w.n(), f.n)));
    }
    if a >> f.n != 0 {
        return Err(Error::usage(format!("point {a} is outside F_2^{}", f.n)));
    }
    let d = w.dim();
    let values = (0..1usize << d).map(|y| f.values[w.from_coords(y) ^ a]).collect();
    Ok(CubeFunction { n: d, values, side: Side::Point })
}

/// Fourier coefficients of `f|_{W+a}` from the spectrum of `f`:
/// the coefficient at `s ∈ F_2^{dim W}` sums `f̂(b) χ_b(a)` over all `b` with `b·w_i = s_i`.
pub fn restricted_spectrum(spectrum: &CubeFunction, w: &Subspace, a: usize) -> Result<CubeFunction> {
    spectrum.expect_side(Side::Spectral)?;
    let d = w.dim();
    let basis = w.basis();
    let mut out = vec![0.0; 1 << d];
    for (b, &c) in spectrum.values.iter().enumerate() {
        let s = basis
            .iter()
            .enumerate()
            .fold(0usize, |s, (i, &wi)| s | ((((b & wi).count_ones() & 1) as usize) << i));
        out[s] += c * chi(b, a);
    }
    CubeFunction::with_side(d, out, Side::Spectral)
}

/// `Var[f | W + c]` for the coset containing `c`.
pub fn coset_variance(f: &CubeFunction, w: &Subspace, c: usize) -> Result<f64> {
    let r = restrict_to_coset(f, w, c)?;
    let mean = r.mean();
    Ok(r.values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / r.len() as f64)
}
