//! Towers of exponentials, iterated logarithms, and the recursive complexity
//! bounds `ℓ_{k,ε}(m)` and `ℓ_{k,ε}(m, r, t)`.
//!
//! Every nontrivial bound has the form `tower₁₆(h)`, so values are carried as
//! heights and only materialized when they fit under the digit cap.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_DIGIT_CAP: u64 = 1_000_000;
pub const BASE: u32 = 16;

/// Either an exact integer or `tower_base(height)` when that exceeds the digit cap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TowerValue {
    /// Decimal digits.
    Exact(#[serde(with = "decimal")] BigUint),
    Tower { base: u32, height: u64 },
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| D::Error::custom(format!("not a decimal integer: {s}")))
    }
}

impl TowerValue {
    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            TowerValue::Exact(v) => Some(v),
            TowerValue::Tower { .. } => None,
        }
    }

    /// Decimal digit count when materialized.
    pub fn digits(&self) -> Option<u64> {
        self.exact().map(|v| v.to_str_radix(10).len() as u64)
    }

    /// Exact comparison; symbolic values must share a base.
    pub fn compare(&self, other: &TowerValue) -> Result<Ordering> {
        use TowerValue::*;
        match (self, other) {
            (Exact(a), Exact(b)) => Ok(a.cmp(b)),
            (Tower { base: b1, height: h1 }, Tower { base: b2, height: h2 }) if b1 == b2 => Ok(h1.cmp(h2)),
            (Tower { .. }, Tower { .. }) => Err(Error::usage("cannot compare towers of different bases")),
            (Exact(x), Tower { base, height }) => compare_exact_tower(x, *base, *height),
            (Tower { base, height }, Exact(x)) => compare_exact_tower(x, *base, *height).map(Ordering::reverse),
        }
    }
}

fn compare_exact_tower(x: &BigUint, base: u32, height: u64) -> Result<Ordering> {
    let level = log_star(base, x)?;
    Ok(match level.cmp(&height) {
        Ordering::Less => Ordering::Less,
        Ordering::Greater => Ordering::Greater,
        Ordering::Equal => match tower(base, height, x.bits() / 3 + 2)? {
            TowerValue::Exact(y) => x.cmp(&y),
            TowerValue::Tower { .. } => Ordering::Less,
        },
    })
}

/// `tower_s(t)` with `tower_s(0) = 1`, symbolic once it would exceed `digit_cap` digits.
pub fn tower(s: u32, t: u64, digit_cap: u64) -> Result<TowerValue> {
    if s == 0 {
        return Err(Error::usage("tower base must be positive"));
    }
    let digits_per_unit = (s as f64).log10();
    let mut v = BigUint::one();
    for _ in 0..t {
        if s == 1 {
            break;
        }
        let exponent = match u32::try_from(&v) {
            Ok(e) if (e as f64) * digits_per_unit <= digit_cap as f64 => e,
            _ => return Ok(TowerValue::Tower { base: s, height: t }),
        };
        v = BigUint::from(s).pow(exponent);
    }
    Ok(TowerValue::Exact(v))
}

/// Smallest `t ≥ 0` with `tower_s(t) ≥ x`.
pub fn log_star(s: u32, x: &BigUint) -> Result<u64> {
    if s < 2 {
        return Err(Error::usage("log* needs a base of at least 2"));
    }
    let mut t = 0;
    let mut cur = BigUint::one();
    while &cur < x {
        t += 1;
        // cur < x fits in memory, so s^cur exceeds x as soon as cur passes bits(x)
        match u32::try_from(&cur) {
            Ok(e) if (e as u64) <= x.bits() => cur = BigUint::from(s).pow(e),
            _ => break,
        }
    }
    Ok(t)
}

/// `log*_s` of a positive real.
pub fn log_star_real(s: u32, x: f64) -> Result<u64> {
    if s < 2 || !(x.is_finite()) {
        return Err(Error::usage(format!("log* of {x} in base {s}")));
    }
    let mut t = 0;
    let mut cur = 1.0f64;
    while cur < x {
        t += 1;
        cur = (s as f64).powf(cur);
    }
    Ok(t)
}

pub fn log_star_value(s: u32, v: &TowerValue) -> Result<u64> {
    match v {
        TowerValue::Exact(x) => log_star(s, x),
        TowerValue::Tower { base, height } if *base == s => Ok(*height),
        TowerValue::Tower { .. } => Err(Error::usage("log* of a tower in a different base")),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TowerParams {
    pub k: u64,
    pub m: u64,
    pub r: u64,
    pub t: u64,
    pub epsilon: f64,
    /// Additive slack in the height of `ℓ_{k,ε}(m)`; must be at least `k`. Defaults to `k`.
    pub offset: Option<u64>,
    pub digit_cap: u64,
}

impl TowerParams {
    pub fn new(k: u64, m: u64, r: u64, t: u64, epsilon: f64) -> Self {
        TowerParams { k, m, r, t, epsilon, offset: None, digit_cap: DEFAULT_DIGIT_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TowerBound {
    pub params: TowerParams,
    pub offset: u64,
    /// `None` for the base case value 1; otherwise the value is `tower₁₆(height)`.
    pub height: Option<u64>,
    pub value: TowerValue,
}

fn checked(p: &TowerParams) -> Result<u64> {
    if p.k == 0 || p.m == 0 || p.r == 0 || p.t == 0 {
        return Err(Error::usage("k, m, r and t must be positive"));
    }
    if !(0.0..0.5).contains(&p.epsilon) {
        return Err(Error::usage(format!("epsilon = {} not in [0, 1/2)", p.epsilon)));
    }
    let offset = p.offset.unwrap_or(p.k);
    if offset < p.k {
        return Err(Error::usage(format!("offset {offset} must be at least k = {}", p.k)));
    }
    Ok(offset)
}

/// Height of `ℓ_{k,ε}(m) = tower₁₆((m−1)(k+1) + 1 + log*₁₆(1/(1−2ε)) + offset)`, extended to
/// `m = 0` by the same formula.
fn single_height(k: u64, m: u64, epsilon: f64, offset: u64) -> Result<u64> {
    let l = log_star_real(BASE, 1.0 / (1.0 - 2.0 * epsilon))?;
    // (m−1)(k+1) + 1 + l + offset, which stays nonnegative for m = 0 because offset ≥ k
    Ok(m * (k + 1) + 1 + l + offset - (k + 1))
}

/// `ℓ_{k,ε}(m)`.
pub fn tower_bound_single(p: &TowerParams) -> Result<TowerBound> {
    let offset = checked(p)?;
    let height = single_height(p.k, p.m, p.epsilon, offset)?;
    Ok(TowerBound { params: p.clone(), offset, height: Some(height), value: tower(BASE, height, p.digit_cap)? })
}

/// `ℓ_{k,ε}(m, r, t)`: 1 when `m = 1` and `r ≤ k`, else `tower₁₆(r + log*₁₆ max{t, ℓ_{k,ε}(m−1)})`.
pub fn tower_bound(p: &TowerParams) -> Result<TowerBound> {
    let offset = checked(p)?;
    if p.m == 1 && p.r <= p.k {
        return Ok(TowerBound { params: p.clone(), offset, height: None, value: TowerValue::Exact(BigUint::one()) });
    }
    // log*₁₆ tower₁₆(h) = h, and log* is monotone, so the max can be taken on levels
    let prev = single_height(p.k, p.m - 1, p.epsilon, offset)?;
    let level = log_star(BASE, &BigUint::from(p.t))?.max(prev);
    let height = p.r + level;
    Ok(TowerBound { params: p.clone(), offset, height: Some(height), value: tower(BASE, height, p.digit_cap)? })
}
