use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{CubeFunction, N_MAX};

/// A subset of `F_2^n` stored as a `2^n`-bit membership set.
///
/// JSON form is `{"n": 3, "bits": "8b"}` or `{"n": 3, "members": [0, 1, 3, 7]}`;
/// serialization always writes `bits`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "SubsetRepr", into = "SubsetRepr")]
pub struct SubsetOfCube {
    n: usize,
    bits: Vec<u64>,
}

fn words(n: usize) -> usize {
    (1usize << n).div_ceil(64)
}

impl SubsetOfCube {
    pub fn empty(n: usize) -> Self {
        assert!(n <= N_MAX, "dimension {n} above cap {N_MAX}");
        SubsetOfCube { n, bits: vec![0; words(n)] }
    }

    pub fn full(n: usize) -> Self {
        Self::empty(n).complement()
    }

    pub fn from_members(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        if n > N_MAX {
            return Err(Error::capability(format!("dimension n = {n}"), format!("n <= {N_MAX}")));
        }
        let mut s = Self::empty(n);
        for x in members {
            if x >> n != 0 {
                return Err(Error::usage(format!("member {x} is outside F_2^{n}")));
            }
            s.insert(x);
        }
        Ok(s)
    }

    pub fn from_predicate(n: usize, pred: impl Fn(usize) -> bool) -> Self {
        let mut s = Self::empty(n);
        for x in 0..1usize << n {
            if pred(x) {
                s.insert(x);
            }
        }
        s
    }

    /// Builds a set from the low `2^n` bits of `mask` (n ≤ 6).
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= 6);
        let keep = if n == 6 { u64::MAX } else { (1u64 << (1 << n)) - 1 };
        SubsetOfCube { n, bits: vec![mask & keep] }
    }

    /// The membership bits as a single word (n ≤ 6).
    pub fn mask(&self) -> u64 {
        assert!(self.n <= 6);
        self.bits[0]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, x: usize) -> bool {
        x >> self.n == 0 && (self.bits[x >> 6] >> (x & 63)) & 1 == 1
    }

    pub fn insert(&mut self, x: usize) {
        self.bits[x >> 6] |= 1 << (x & 63);
    }

    pub fn remove(&mut self, x: usize) {
        self.bits[x >> 6] &= !(1 << (x & 63));
    }

    pub fn size(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }

    pub fn complement(&self) -> Self {
        let mut bits: Vec<u64> = self.bits.iter().map(|w| !w).collect();
        let total = 1usize << self.n;
        if total < 64 {
            bits[0] &= (1u64 << total) - 1;
        }
        SubsetOfCube { n: self.n, bits }
    }

    fn combine(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        SubsetOfCube { n: self.n, bits: self.bits.iter().zip(&other.bits).map(|(&a, &b)| op(a, b)).collect() }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a & !b)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.n == other.n && self.bits.iter().zip(&other.bits).all(|(&a, &b)| a & !b == 0)
    }

    /// `{x + c : x ∈ self}`.
    pub fn translate(&self, c: usize) -> Self {
        let mut out = Self::empty(self.n);
        for x in self.members() {
            out.insert(x ^ c);
        }
        out
    }

    /// The `{0,1}`-valued indicator function.
    pub fn indicator(&self) -> CubeFunction {
        CubeFunction::from_fn(self.n, |x| if self.contains(x) { 1.0 } else { 0.0 })
    }

    /// Hex encoding, big-endian over the `2^n` membership bits (bit `x` is point `x`).
    pub fn to_hex(&self) -> String {
        let digits = (1usize << self.n).div_ceil(4);
        let mut s = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let nibble = (0..4).fold(0u32, |acc, j| acc | ((self.contains(4 * d + j) as u32) << j));
            s.push(char::from_digit(nibble, 16).unwrap());
        }
        s
    }

    pub fn from_hex(n: usize, hex: &str) -> Result<Self> {
        let mut s = Self::empty(n);
        let hex = hex.trim_start_matches("0x");
        for (d, c) in hex.chars().rev().enumerate() {
            let nibble = c.to_digit(16).ok_or_else(|| Error::Parse(format!("invalid hex digit '{c}'")))? as usize;
            for j in 0..4 {
                if nibble >> j & 1 == 1 {
                    let x = 4 * d + j;
                    if x >> n != 0 {
                        return Err(Error::Parse(format!("hex bitset sets point {x} outside F_2^{n}")));
                    }
                    s.insert(x);
                }
            }
        }
        Ok(s)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubsetRepr {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bits: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    members: Option<Vec<usize>>,
}

impl TryFrom<SubsetRepr> for SubsetOfCube {
    type Error = Error;

    fn try_from(r: SubsetRepr) -> Result<Self> {
        if r.n > N_MAX {
            return Err(Error::capability(format!("dimension n = {}", r.n), format!("n <= {N_MAX}")));
        }
        match (r.bits, r.members) {
            (Some(h), None) => SubsetOfCube::from_hex(r.n, &h),
            (None, Some(m)) => SubsetOfCube::from_members(r.n, m),
            _ => Err(Error::Parse("a set needs exactly one of \"bits\" or \"members\"".into())),
        }
    }
}

impl From<SubsetOfCube> for SubsetRepr {
    fn from(s: SubsetOfCube) -> Self {
        SubsetRepr { n: s.n, bits: Some(s.to_hex()), members: None }
    }
}

impl fmt::Debug for SubsetOfCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubsetOfCube(n={}, ", self.n)?;
        f.debug_set().entries(self.members()).finish()?;
        write!(f, ")")
    }
}
