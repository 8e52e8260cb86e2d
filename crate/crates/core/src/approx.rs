//! The ε-approximate spectral norm `inf{‖g‖_A : ‖f − g‖_∞ ≤ ε}` as a linear program
//! over the Fourier coefficients of `g`, split into positive and negative parts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{chi, inverse_fwht, spectral_norm, CubeFunction, Side};
use crate::lp::{solve_lp_with, LinearProgram, LpOptions, Sense};

pub const APPROX_N_MAX: usize = 10;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ApproxNormResult {
    pub value: f64,
    pub epsilon: f64,
    pub witness: CubeFunction,
    pub iterations: usize,
}

pub fn approx_spectral_norm(f: &CubeFunction, epsilon: f64) -> Result<ApproxNormResult> {
    approx_spectral_norm_with(f, epsilon, &LpOptions::default())
}

pub fn approx_spectral_norm_with(f: &CubeFunction, epsilon: f64, opts: &LpOptions) -> Result<ApproxNormResult> {
    if !(0.0..0.5).contains(&epsilon) {
        return Err(Error::usage(format!("epsilon must lie in [0, 1/2), got {epsilon}")));
    }
    if f.side() != Side::Point {
        return Err(Error::usage("approximate norm expects a point-side function"));
    }
    let n = f.n();
    if n > APPROX_N_MAX {
        return Err(Error::capability(format!("approximate norm in F_2^{n}"), format!("n <= {APPROX_N_MAX}")));
    }
    let size = 1usize << n;
    // variables: u_0..u_{N-1}, v_0..v_{N-1}
    let mut lp = LinearProgram::new(vec![1.0; 2 * size]);
    for x in 0..size {
        let row: Vec<f64> = (0..2 * size).map(|j| if j < size { chi(j, x) } else { -chi(j - size, x) }).collect();
        lp.add(row.clone(), Sense::Le, f.get(x) + epsilon);
        lp.add(row, Sense::Ge, f.get(x) - epsilon);
    }
    let sol = solve_lp_with(&lp, opts)?;
    let spectrum: Vec<f64> = (0..size).map(|a| sol.x[a] - sol.x[a + size]).collect();
    let witness = inverse_fwht(&CubeFunction::with_side(n, spectrum, Side::Spectral)?)?;

    let distance = f.sup_distance(&witness)?;
    if distance > epsilon + 1e-9 {
        return Err(Error::Verification(format!("witness is {distance} from f, above epsilon {epsilon}")));
    }
    let norm = spectral_norm(&witness)?;
    if (norm - sol.objective).abs() > 1e-6 * (1.0 + sol.objective) {
        return Err(Error::Verification(format!("witness norm {norm} disagrees with LP value {}", sol.objective)));
    }
    Ok(ApproxNormResult { value: sol.objective, epsilon, witness, iterations: sol.iterations })
}
