//! k-affine connectivity.
//!
//! `A` is k-affine connected when no affinely independent `b_0 < … < b_k` in `A`
//! avoids `A` with all of its odd sub-sums of size at least 3. With `a_0 = b_0` and
//! `a_i = b_0 + b_i` this is the statement that no `k`-dimensional coset meets `A`
//! in an affine copy of the Hamming ball `B_k` anchored at `a_0`.

use serde::{Deserialize, Serialize};

use crate::coset::{Coset, Subspace};
use crate::error::{Error, Result};
use crate::fourier::{restrict_to_coset, spectral_norm};
use crate::set::SubsetOfCube;

pub const K_MAX: usize = 6;
pub const DEFAULT_TUPLE_BUDGET: u64 = 1_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectivityWitness {
    /// `a_0, a_1, …, a_k` with `a_0 + a_i ∈ A`.
    pub a: Vec<usize>,
    /// `b_0 = a_0`, `b_i = a_0 + a_i`.
    pub b: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectivityVerdict {
    pub k: usize,
    pub connected: bool,
    pub witness: Option<ConnectivityWitness>,
    /// Search nodes visited.
    pub checks: u64,
}

impl ConnectivityWitness {
    /// Re-verifies the witness against `A` by direct enumeration.
    pub fn verify(&self, a_set: &SubsetOfCube) -> bool {
        let k = self.a.len() - 1;
        let a0 = self.a[0];
        let dirs = &self.a[1..];
        if Subspace::span(a_set.n(), dirs).dim() != k {
            return false;
        }
        (0..1usize << k).all(|t| {
            let x = dirs.iter().enumerate().fold(a0, |acc, (i, &d)| if t >> i & 1 == 1 { acc ^ d } else { acc });
            a_set.contains(x) == (t.count_ones() <= 1)
        })
    }

    /// The `k`-dimensional coset `a_0 + span(a_1, …, a_k)` on which `A` is a copy of `B_k`.
    pub fn coset(&self, n: usize) -> Coset {
        Coset::new(Subspace::span(n, &self.a[1..]), self.a[0])
    }
}

pub fn is_k_affine_connected(a: &SubsetOfCube, k: usize) -> Result<ConnectivityVerdict> {
    is_k_affine_connected_with_budget(a, k, DEFAULT_TUPLE_BUDGET)
}

pub fn is_k_affine_connected_with_budget(a: &SubsetOfCube, k: usize, budget: u64) -> Result<ConnectivityVerdict> {
    if !(1..=K_MAX).contains(&k) {
        return Err(Error::usage(format!("k must lie in [1, {K_MAX}], got {k}")));
    }
    let members: Vec<usize> = a.members().collect();
    let mut search = Search { a, members: &members, k, budget, checks: 0, tuple: Vec::with_capacity(k + 1) };
    let found = search.extend(0, &Frame::default())?;
    let witness = found.then(|| {
        let b = search.tuple.clone();
        let a_form = std::iter::once(b[0]).chain(b[1..].iter().map(|&x| x ^ b[0])).collect();
        ConnectivityWitness { a: a_form, b }
    });
    if let Some(w) = &witness {
        if !w.verify(a) {
            return Err(Error::Verification(format!("connectivity witness {w:?} does not re-verify")));
        }
    }
    Ok(ConnectivityVerdict { k, connected: witness.is_none(), witness, checks: search.checks })
}

#[derive(Default, Clone)]
struct Frame {
    /// Echelon basis of `b_i − b_0`.
    echelon: Vec<usize>,
    singles: Vec<usize>,
    /// Sums of even-size subsets of size ≥ 2.
    even: Vec<usize>,
    /// Sums of odd-size subsets of size ≥ 3.
    odd: Vec<usize>,
}

struct Search<'a> {
    a: &'a SubsetOfCube,
    members: &'a [usize],
    k: usize,
    budget: u64,
    checks: u64,
    tuple: Vec<usize>,
}

impl Search<'_> {
    /// Depth-first over increasing tuples; returns true once a violating tuple is in `self.tuple`.
    fn extend(&mut self, start: usize, frame: &Frame) -> Result<bool> {
        if self.tuple.len() == self.k + 1 {
            return Ok(true);
        }
        for idx in start..self.members.len() {
            let remaining = self.k + 1 - self.tuple.len();
            if self.members.len() - idx < remaining {
                break;
            }
            self.checks += 1;
            if self.checks > self.budget {
                return Err(Error::capability(
                    format!("{}-affine connectivity search on a set of size {}", self.k, self.members.len()),
                    format!("{} tuple checks", self.budget),
                ));
            }
            let b = self.members[idx];
            let mut echelon = frame.echelon.clone();
            if let Some(&b0) = self.tuple.first() {
                let mut d = b ^ b0;
                for &e in &echelon {
                    d = d.min(d ^ e);
                }
                if d == 0 {
                    continue;
                }
                echelon.push(d);
                echelon.sort_unstable_by(|x, y| y.cmp(x));
            }
            let new_odd: Vec<usize> = frame.even.iter().map(|&s| s ^ b).collect();
            if new_odd.iter().any(|&s| self.a.contains(s)) {
                continue;
            }
            let mut next = Frame { echelon, ..Frame::default() };
            next.odd = frame.odd.iter().copied().chain(new_odd).collect();
            next.even = frame.even.iter().copied().chain(frame.odd.iter().chain(&frame.singles).map(|&s| s ^ b)).collect();
            next.singles = frame.singles.iter().copied().chain(std::iter::once(b)).collect();
            self.tuple.push(b);
            if self.extend(idx + 1, &next)? {
                return Ok(true);
            }
            self.tuple.pop();
        }
        Ok(false)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DichotomyCheck {
    pub k: usize,
    pub set_connected: bool,
    pub complement_connected: bool,
    pub norm: f64,
    pub lower_bound: f64,
    /// Whether the lower-bound branch applies (some side fails connectivity).
    pub applies: bool,
    /// Which side supplied the witness: "set" or "complement".
    pub witness_side: Option<String>,
    pub witness_coset: Option<Coset>,
    /// Spectral norm of `1_A` restricted to the witness coset.
    pub restriction_norm: Option<f64>,
    pub passed: bool,
}

/// Given verdicts for `A` and `A^c`, checks `‖1_A‖_A ≥ √k/2` when either fails.
pub fn dichotomy_lower_bound_check(
    a: &SubsetOfCube,
    set_verdict: &ConnectivityVerdict,
    complement_verdict: &ConnectivityVerdict,
) -> Result<DichotomyCheck> {
    let k = set_verdict.k;
    if complement_verdict.k != k {
        return Err(Error::usage("verdicts were computed for different k"));
    }
    let indicator = a.indicator();
    let norm = spectral_norm(&indicator)?;
    let lower_bound = (k as f64).sqrt() / 2.0;
    let (side, witness) = match (&set_verdict.witness, &complement_verdict.witness) {
        (Some(w), _) => (Some("set"), Some(w)),
        (None, Some(w)) => (Some("complement"), Some(w)),
        (None, None) => (None, None),
    };
    let applies = witness.is_some();
    let (witness_coset, restriction_norm) = match witness {
        Some(w) => {
            let c = w.coset(a.n());
            let r = restrict_to_coset(&indicator, c.space(), c.rep())?;
            (Some(c), Some(spectral_norm(&r)?))
        }
        None => (None, None),
    };
    let passed = !applies
        || (norm >= lower_bound - 1e-9 && restriction_norm.is_some_and(|r| r <= norm + 1e-9));
    Ok(DichotomyCheck {
        k,
        set_connected: set_verdict.connected,
        complement_connected: complement_verdict.connected,
        norm,
        lower_bound,
        applies,
        witness_side: side.map(str::to_string),
        witness_coset,
        restriction_norm,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(k: usize) -> SubsetOfCube {
        SubsetOfCube::from_members(k, std::iter::once(0).chain((0..k).map(|i| 1 << i))).unwrap()
    }

    #[test]
    fn ball_is_not_connected() {
        for k in 1..=5 {
            let v = is_k_affine_connected(&ball(k), k).unwrap();
            assert!(!v.connected);
            let w = v.witness.unwrap();
            assert_eq!(w.a[0], 0);
            assert_eq!(w.a[1..], (0..k).map(|i| 1 << i).collect::<Vec<_>>()[..]);
        }
    }

    #[test]
    fn cosets_are_connected() {
        let c = Coset::new(Subspace::span(5, &[0b00011, 0b00101, 0b01001, 0b10001]), 0b00001);
        for k in 2..=4 {
            assert!(is_k_affine_connected(&c.to_subset(), k).unwrap().connected);
        }
    }

    #[test]
    fn small_sets_are_vacuously_connected() {
        let a = SubsetOfCube::from_members(4, [1, 2]).unwrap();
        assert!(is_k_affine_connected(&a, 2).unwrap().connected);
    }

    #[test]
    fn budget_is_enforced() {
        let a = SubsetOfCube::full(6);
        assert!(matches!(is_k_affine_connected_with_budget(&a, 3, 10), Err(Error::Capability { .. })));
    }

    #[test]
    fn ball_dichotomy() {
        let a = ball(4);
        let v = is_k_affine_connected(&a, 4).unwrap();
        let vc = is_k_affine_connected(&a.complement(), 4).unwrap();
        let d = dichotomy_lower_bound_check(&a, &v, &vc).unwrap();
        assert!(d.applies && d.passed);
        assert!(d.norm >= 1.0 - 1e-9);
        assert!((d.restriction_norm.unwrap() - d.norm).abs() < 1e-12);
    }
}
