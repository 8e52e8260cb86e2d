//! Linear algebra over `F_2`: subspaces, cosets, annihilators, and
//! decompositions of sets in the ring generated by a family of cosets.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::ops::RangeInclusive;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::N_MAX;
use crate::set::SubsetOfCube;

#[inline]
fn dot(a: usize, b: usize) -> bool {
    (a & b).count_ones() & 1 == 1
}

#[inline]
fn lead(v: usize) -> usize {
    usize::BITS as usize - 1 - v.leading_zeros() as usize
}

/// A linear subspace of `F_2^n` in canonical form.
///
/// The basis is fully reduced with pivot = leading bit of each vector: no
/// basis vector has another vector's pivot bit set. Vectors are sorted by
/// pivot, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SubspaceRepr", into = "SubspaceRepr")]
pub struct Subspace {
    n: usize,
    basis: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    n: usize,
    basis: Vec<usize>,
}

impl TryFrom<SubspaceRepr> for Subspace {
    type Error = Error;

    fn try_from(r: SubspaceRepr) -> Result<Self> {
        Subspace::try_span(r.n, &r.basis)
    }
}

impl From<Subspace> for SubspaceRepr {
    fn from(s: Subspace) -> Self {
        SubspaceRepr { n: s.n, basis: s.basis }
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.basis.len(), &self.basis).cmp(&(other.n, other.basis.len(), &other.basis))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        assert!(n <= N_MAX);
        Subspace { n, basis: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= N_MAX);
        Subspace { n, basis: (0..n).map(|i| 1 << i).collect() }
    }

    /// Span of the given vectors. Panics on vectors outside `F_2^n`.
    pub fn span(n: usize, vectors: &[usize]) -> Self {
        Self::try_span(n, vectors).expect("invalid spanning set")
    }

    pub fn try_span(n: usize, vectors: &[usize]) -> Result<Self> {
        if n > N_MAX {
            return Err(Error::capability(format!("dimension n = {n}"), format!("n <= {N_MAX}")));
        }
        let mut basis: Vec<usize> = Vec::new();
        for &v in vectors {
            if v >> n != 0 {
                return Err(Error::usage(format!("vector {v} is outside F_2^{n}")));
            }
            let r = reduce_by(&basis, v);
            if r != 0 {
                let p = lead(r);
                for b in basis.iter_mut() {
                    if *b >> p & 1 == 1 {
                        *b ^= r;
                    }
                }
                basis.push(r);
            }
        }
        basis.sort_unstable();
        Ok(Subspace { n, basis })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn size(&self) -> usize {
        1 << self.dim()
    }

    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn pivot_mask(&self) -> usize {
        self.basis.iter().fold(0, |m, &b| m | 1 << lead(b))
    }

    /// Minimal element of `x + W`.
    pub fn reduce(&self, x: usize) -> usize {
        reduce_by(&self.basis, x)
    }

    pub fn contains(&self, x: usize) -> bool {
        x >> self.n == 0 && self.reduce(x) == 0
    }

    /// The element of `W` with coordinates `y` in the canonical basis.
    pub fn from_coords(&self, y: usize) -> usize {
        self.basis.iter().enumerate().fold(0, |acc, (i, &b)| if y >> i & 1 == 1 { acc ^ b } else { acc })
    }

    /// Coordinates of `x ∈ W` in the canonical basis.
    pub fn coords(&self, x: usize) -> usize {
        self.basis.iter().enumerate().fold(0, |acc, (i, &b)| acc | ((x >> lead(b) & 1) << i))
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.size()).map(move |y| self.from_coords(y))
    }

    /// Canonical (minimal) representatives of the cosets of `W`, ascending.
    pub fn coset_reps(&self) -> impl Iterator<Item = usize> + '_ {
        let free: Vec<usize> = (0..self.n).filter(|&i| self.pivot_mask() >> i & 1 == 0).collect();
        (0..1usize << free.len())
            .map(move |z| free.iter().enumerate().fold(0, |acc, (j, &bit)| acc | ((z >> j & 1) << bit)))
    }

    /// `W^⊥ = {r : r·w = 0 for all w ∈ W}`.
    pub fn annihilator(&self) -> Subspace {
        let pivots = self.pivot_mask();
        let vectors: Vec<usize> = (0..self.n)
            .filter(|&f| pivots >> f & 1 == 0)
            .map(|f| {
                self.basis.iter().fold(1 << f, |r, &b| if b >> f & 1 == 1 { r | 1 << lead(b) } else { r })
            })
            .collect();
        Subspace::span(self.n, &vectors)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.n, other.n);
        let all: Vec<usize> = self.basis.iter().chain(&other.basis).copied().collect();
        Subspace::span(self.n, &all)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        self.annihilator().sum(&other.annihilator()).annihilator()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|&b| other.contains(b))
    }
}

fn reduce_by(basis: &[usize], mut x: usize) -> usize {
    for &b in basis.iter().rev() {
        if x >> lead(b) & 1 == 1 {
            x ^= b;
        }
    }
    x
}

/// Solves `r_i · x = rhs_i` over `F_2`; returns one solution or `None` if inconsistent.
pub fn solve_affine(rows: &[(usize, bool)]) -> Option<usize> {
    let mut echelon: Vec<(usize, bool)> = Vec::new();
    for &(r, rhs) in rows {
        let (mut v, mut c) = (r, rhs);
        for &(e, ec) in &echelon {
            if v >> lead(e) & 1 == 1 {
                v ^= e;
                c ^= ec;
            }
        }
        if v == 0 {
            if c {
                return None;
            }
            continue;
        }
        let p = lead(v);
        for e in echelon.iter_mut() {
            if e.0 >> p & 1 == 1 {
                e.0 ^= v;
                e.1 ^= c;
            }
        }
        echelon.push((v, c));
        echelon.sort_unstable_by_key(|e| std::cmp::Reverse(e.0));
    }
    Some(echelon.iter().fold(0, |x, &(e, c)| if c { x | 1 << lead(e) } else { x }))
}

/// Number of `d`-dimensional subspaces of `F_2^n` (Gaussian binomial).
pub fn gaussian_binomial(n: usize, d: usize) -> u128 {
    if d > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..d {
        num *= (1u128 << (n - i)) - 1;
        den *= (1u128 << (i + 1)) - 1;
    }
    num / den
}

/// Calls `visit` on every `d`-dimensional subspace of `F_2^n`, in canonical order.
/// No size cap; callers decide what is affordable.
pub fn for_each_subspace_of_dim(n: usize, d: usize, visit: &mut dyn FnMut(Subspace)) {
    if d > n {
        return;
    }
    let mut pivots = Vec::with_capacity(d);
    choose_pivots(n, d, 0, &mut pivots, visit);
}

fn choose_pivots(n: usize, d: usize, start: usize, pivots: &mut Vec<usize>, visit: &mut dyn FnMut(Subspace)) {
    if pivots.len() == d {
        let mask = pivots.iter().fold(0usize, |m, &p| m | 1 << p);
        // free bit positions available to each basis vector
        let frees: Vec<Vec<usize>> =
            pivots.iter().map(|&p| (0..p).filter(|&b| mask >> b & 1 == 0).collect()).collect();
        let total: usize = frees.iter().map(Vec::len).sum();
        for assignment in 0..1usize << total {
            let mut shift = 0;
            let basis: Vec<usize> = pivots
                .iter()
                .zip(&frees)
                .map(|(&p, free)| {
                    let v = free.iter().enumerate().fold(1 << p, |v, (j, &b)| v | ((assignment >> (shift + j) & 1) << b));
                    shift += free.len();
                    v
                })
                .collect();
            visit(Subspace { n, basis });
        }
        return;
    }
    for p in start..n {
        pivots.push(p);
        choose_pivots(n, d, p + 1, pivots, visit);
        pivots.pop();
    }
}

/// Cap on `n` for full subspace enumeration.
pub const ENUMERATION_N_MAX: usize = 6;

/// Every subspace of `F_2^n` with dimension in `dims`, each exactly once, ordered
/// by dimension and then canonical basis order.
pub fn enumerate_subspaces(n: usize, dims: RangeInclusive<usize>) -> Result<Vec<Subspace>> {
    if n > ENUMERATION_N_MAX {
        return Err(Error::capability(
            format!("full subspace enumeration in F_2^{n}"),
            format!("n <= {ENUMERATION_N_MAX}"),
        ));
    }
    let mut out = Vec::new();
    for d in dims.filter(|&d| d <= n) {
        for_each_subspace_of_dim(n, d, &mut |s| out.push(s));
    }
    Ok(out)
}

/// Every coset of every subspace of `F_2^n` (n ≤ 6).
pub fn enumerate_cosets(n: usize) -> Result<Vec<Coset>> {
    let mut out = Vec::new();
    for s in enumerate_subspaces(n, 0..=n)? {
        for rep in s.coset_reps().collect::<Vec<_>>() {
            out.push(Coset { space: s.clone(), rep });
        }
    }
    Ok(out)
}

/// An affine coset `W + rep` with `rep` the minimal element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "CosetRepr", into = "CosetRepr")]
pub struct Coset {
    space: Subspace,
    rep: usize,
}

#[derive(Serialize, Deserialize)]
struct CosetRepr {
    n: usize,
    basis: Vec<usize>,
    #[serde(default)]
    rep: usize,
}

impl TryFrom<CosetRepr> for Coset {
    type Error = Error;

    fn try_from(r: CosetRepr) -> Result<Self> {
        let space = Subspace::try_span(r.n, &r.basis)?;
        if r.rep >> r.n != 0 {
            return Err(Error::usage(format!("coset representative {} is outside F_2^{}", r.rep, r.n)));
        }
        Ok(Coset::new(space, r.rep))
    }
}

impl From<Coset> for CosetRepr {
    fn from(c: Coset) -> Self {
        CosetRepr { n: c.space.n, basis: c.space.basis, rep: c.rep }
    }
}

impl Coset {
    pub fn new(space: Subspace, point: usize) -> Self {
        let rep = space.reduce(point);
        Coset { space, rep }
    }

    pub fn full(n: usize) -> Self {
        Coset { space: Subspace::full(n), rep: 0 }
    }

    pub fn point(n: usize, x: usize) -> Self {
        Coset { space: Subspace::zero(n), rep: x }
    }

    /// `{x : r·x = value}` for nonzero `r`.
    pub fn hyperplane(n: usize, r: usize, value: bool) -> Self {
        assert!(r != 0 && r >> n == 0);
        let space = Subspace::span(n, &[r]).annihilator();
        Coset::new(space, if value { 1 << lead(r) } else { 0 })
    }

    pub fn n(&self) -> usize {
        self.space.n
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn rep(&self) -> usize {
        self.rep
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn size(&self) -> usize {
        self.space.size()
    }

    pub fn contains(&self, x: usize) -> bool {
        x >> self.n() == 0 && self.space.reduce(x) == self.rep
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.space.members().map(move |w| w ^ self.rep)
    }

    pub fn translate(&self, c: usize) -> Coset {
        Coset::new(self.space.clone(), self.rep ^ c)
    }

    pub fn to_subset(&self) -> SubsetOfCube {
        let mut s = SubsetOfCube::empty(self.n());
        for x in self.members() {
            s.insert(x);
        }
        s
    }

    /// Membership mask for `n ≤ 6`.
    pub fn mask(&self) -> u64 {
        assert!(self.n() <= 6);
        self.members().fold(0u64, |m, x| m | 1 << x)
    }

    /// The affine equations `r·x = r·rep` for `r` in a basis of `W^⊥`.
    fn equations(&self) -> Vec<(usize, bool)> {
        self.space.annihilator().basis.iter().map(|&r| (r, dot(r, self.rep))).collect()
    }

    pub fn intersect(&self, other: &Coset) -> Option<Coset> {
        assert_eq!(self.n(), other.n());
        let mut rows = self.equations();
        rows.extend(other.equations());
        let x = solve_affine(&rows)?;
        Some(Coset::new(self.space.intersection(&other.space), x))
    }

    pub fn is_subset_of(&self, other: &Coset) -> bool {
        self.space.is_subspace_of(&other.space) && other.contains(self.rep)
    }

    /// Codimension-1 cosets inside `self` that are disjoint from `inner`, where
    /// `inner` is a proper nonempty subcoset of `self`.
    pub fn halves_avoiding(&self, inner: &Coset) -> Vec<Coset> {
        let outer_perp = self.space.annihilator();
        let inner_perp = inner.space.annihilator();
        let mut seen = Vec::new();
        let mut out = Vec::new();
        for r in inner_perp.members() {
            let class = outer_perp.reduce(r);
            if class == 0 || seen.contains(&class) {
                continue;
            }
            seen.push(class);
            let h = Coset::hyperplane(self.n(), r, !dot(r, inner.rep));
            if let Some(half) = self.intersect(&h) {
                out.push(half);
            }
        }
        out.sort();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedTerm {
    pub sign: i8,
    pub coset: Coset,
}

/// `Σ sign_i · 1_{coset_i}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedCosetSum {
    pub terms: Vec<SignedTerm>,
}

impl SignedCosetSum {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self, x: usize) -> i64 {
        self.terms.iter().filter(|t| t.coset.contains(x)).map(|t| t.sign as i64).sum()
    }

    /// Pointwise values over all of `F_2^n`.
    pub fn evaluate_all(&self, n: usize) -> Vec<i64> {
        let mut out = vec![0i64; 1 << n];
        for t in &self.terms {
            for x in t.coset.members() {
                out[x] += t.sign as i64;
            }
        }
        out
    }

    /// True when the sum equals `1_A` at every point (integer arithmetic).
    pub fn represents(&self, a: &SubsetOfCube) -> bool {
        self.evaluate_all(a.n()).iter().enumerate().all(|(x, &v)| v == a.contains(x) as i64)
    }
}

/// Maximum number of generators accepted by [`ring_membership_decompose`].
pub const RING_GENERATORS_MAX: usize = 16;

/// Writes `1_A` as a signed sum of cosets if `A` is a union of atoms of the ring
/// generated by `gens`; returns `Ok(None)` otherwise.
///
/// Each atom `∩_{i∈S} C_i ∩ ∩_{j∉S} C_j^c` inside `A` expands into
/// `Σ_{T⊆S^c} (−1)^{|T|} 1_{∩_{i∈S∪T} C_i}`; empty intersections are dropped,
/// so the result has at most `3^ℓ` terms.
pub fn ring_membership_decompose(a: &SubsetOfCube, gens: &[Coset]) -> Result<Option<SignedCosetSum>> {
    let l = gens.len();
    if l > RING_GENERATORS_MAX {
        return Err(Error::capability(format!("{l} ring generators"), format!("<= {RING_GENERATORS_MAX}")));
    }
    let n = a.n();
    if let Some(g) = gens.iter().find(|g| g.n() != n) {
        return Err(Error::usage(format!("generator lives in F_2^{}, set in F_2^{n}", g.n())));
    }
    let mut inside = vec![0usize; 1 << l];
    let mut total = vec![0usize; 1 << l];
    for x in 0..1usize << n {
        let sig = gens.iter().enumerate().fold(0, |s, (i, g)| if g.contains(x) { s | 1 << i } else { s });
        total[sig] += 1;
        if a.contains(x) {
            inside[sig] += 1;
        }
    }
    if (0..1 << l).any(|s| inside[s] != 0 && inside[s] != total[s]) {
        return Ok(None);
    }
    let all = (1usize << l) - 1;
    let mut sum = SignedCosetSum::default();
    for s in 0..1usize << l {
        if inside[s] == 0 {
            continue;
        }
        let mut base = Some(Coset::full(n));
        for (i, g) in gens.iter().enumerate() {
            if s >> i & 1 == 1 {
                base = base.and_then(|b| b.intersect(g));
            }
        }
        let base = base.expect("a nonempty atom lies in the intersection of its generators");
        let rest = all & !s;
        // enumerate T ⊆ rest in increasing order
        let mut t = 0usize;
        loop {
            let mut c = Some(base.clone());
            for (j, g) in gens.iter().enumerate() {
                if t >> j & 1 == 1 {
                    c = c.and_then(|b| b.intersect(g));
                }
            }
            if let Some(coset) = c {
                let sign = if t.count_ones().is_multiple_of(2) { 1 } else { -1 };
                sum.terms.push(SignedTerm { sign, coset });
            }
            if t == rest {
                break;
            }
            t = (t.wrapping_sub(rest)) & rest;
        }
    }
    Ok(Some(sum))
}

/// Outcome of a coset-complexity computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetComplexity {
    /// Least `ℓ` found, or `None` when the search gave up ("Unknown").
    pub value: Option<usize>,
    /// Whether `value` is the proven minimum (exhaustive search) or only an upper bound.
    pub exact: bool,
    pub generators: Vec<Coset>,
}

pub const EXACT_COMPLEXITY_N_MAX: usize = 4;
pub const EXACT_COMPLEXITY_L_MAX: usize = 3;
pub const GREEDY_COMPLEXITY_N_MAX: usize = 6;

/// Exhaustive coset complexity: least `ℓ ∈ [1, l_max]` such that `A` lies in the
/// ring generated by some `ℓ` cosets. Requires `n ≤ 4` and `l_max ≤ 3`.
///
/// The search starts at `ℓ = 1`, so `∅` and `F_2^n` both report 1.
pub fn coset_complexity_exact(a: &SubsetOfCube, l_max: usize) -> Result<CosetComplexity> {
    let n = a.n();
    if n > EXACT_COMPLEXITY_N_MAX || l_max > EXACT_COMPLEXITY_L_MAX {
        return Err(Error::capability(
            format!("exact coset complexity with n = {n}, l_max = {l_max}"),
            format!("n <= {EXACT_COMPLEXITY_N_MAX}, l_max <= {EXACT_COMPLEXITY_L_MAX}"),
        ));
    }
    let (cosets, table) = complexity_table(n);
    Ok(match table[a.mask() as usize] {
        Some((l, idx)) if (l as usize) <= l_max => CosetComplexity {
            value: Some(l as usize),
            exact: true,
            generators: idx[..l as usize].iter().map(|&i| cosets[i as usize].clone()).collect(),
        },
        _ => CosetComplexity { value: None, exact: true, generators: Vec::new() },
    })
}

type ComplexityEntry = Option<(u8, [u16; 3])>;

/// For every subset of `F_2^n` (`n ≤ 4`): the least `ℓ ≤ 3` and the
/// lexicographically first `ℓ` cosets whose ring contains it.
fn complexity_table(n: usize) -> &'static (Vec<Coset>, Vec<ComplexityEntry>) {
    static TABLES: [OnceLock<(Vec<Coset>, Vec<ComplexityEntry>)>; EXACT_COMPLEXITY_N_MAX + 1] =
        [const { OnceLock::new() }; EXACT_COMPLEXITY_N_MAX + 1];
    TABLES[n].get_or_init(|| {
        let cosets = enumerate_cosets(n).expect("n is within the enumeration cap");
        let masks: Vec<u64> = cosets.iter().map(Coset::mask).collect();
        let full = SubsetOfCube::full(n).mask();
        let mut table: Vec<ComplexityEntry> = vec![None; 1 << (1 << n)];
        let mut seen_partitions = HashSet::new();
        for l in 1..=EXACT_COMPLEXITY_L_MAX.min(masks.len()) {
            let mut idx: Vec<usize> = (0..l).collect();
            loop {
                let mut atoms: Vec<u64> = (0..1usize << l)
                    .map(|p| idx.iter().enumerate().fold(full, |acc, (i, &g)| if p >> i & 1 == 1 { acc & masks[g] } else { acc & !masks[g] }))
                    .filter(|&m| m != 0)
                    .collect();
                atoms.sort_unstable();
                if seen_partitions.insert(atoms.clone()) {
                    let mut entry = [0u16; 3];
                    for (e, &i) in entry.iter_mut().zip(&idx) {
                        *e = i as u16;
                    }
                    for choice in 0..1usize << atoms.len() {
                        let union = atoms.iter().enumerate().filter(|(j, _)| choice >> j & 1 == 1).fold(0, |u, (_, &m)| u | m);
                        let slot = &mut table[union as usize];
                        if slot.is_none() {
                            *slot = Some((l as u8, entry));
                        }
                    }
                }
                if !next_combination(&mut idx, masks.len()) {
                    break;
                }
            }
        }
        (cosets, table)
    })
}

pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Greedy upper bound on coset complexity (n ≤ 6): repeatedly adds the coset whose
/// refinement of the current atom partition most reduces the symmetric difference
/// between `A` and its best ring approximation.
pub fn coset_complexity_greedy(a: &SubsetOfCube, l_max: usize) -> Result<CosetComplexity> {
    let n = a.n();
    if n > GREEDY_COMPLEXITY_N_MAX {
        return Err(Error::capability(
            format!("greedy coset complexity in F_2^{n}"),
            format!("n <= {GREEDY_COMPLEXITY_N_MAX}"),
        ));
    }
    let cosets = enumerate_cosets(n)?;
    let masks: Vec<u64> = cosets.iter().map(Coset::mask).collect();
    let full = SubsetOfCube::full(n).mask();
    let target = a.mask();
    let error = |atoms: &[u64]| -> u32 {
        atoms.iter().map(|&at| (at & target).count_ones().min((at & !target).count_ones())).sum()
    };
    let refine = |atoms: &[u64], g: u64| -> Vec<u64> {
        atoms.iter().flat_map(|&at| [at & g, at & !g]).filter(|&m| m != 0).collect()
    };
    let mut atoms = vec![full];
    let mut gens = Vec::new();
    // ℓ = 1 is the floor, matching the exact search.
    let mut current = u32::MAX;
    while gens.len() < l_max {
        let mut best: Option<(u32, usize)> = None;
        for (i, &m) in masks.iter().enumerate() {
            let e = error(&refine(&atoms, m));
            if best.is_none_or(|(be, _)| e < be) {
                best = Some((e, i));
            }
        }
        let Some((e, i)) = best else { break };
        if e >= current {
            break;
        }
        current = e;
        atoms = refine(&atoms, masks[i]);
        gens.push(cosets[i].clone());
        if e == 0 {
            return Ok(CosetComplexity { value: Some(gens.len()), exact: false, generators: gens });
        }
    }
    Ok(CosetComplexity { value: None, exact: false, generators: gens })
}

/// Exact search within the caps, greedy upper bound beyond them.
pub fn coset_complexity(a: &SubsetOfCube, l_max: usize) -> Result<CosetComplexity> {
    if a.n() <= EXACT_COMPLEXITY_N_MAX && l_max <= EXACT_COMPLEXITY_L_MAX {
        coset_complexity_exact(a, l_max)
    } else {
        coset_complexity_greedy(a, l_max)
    }
}

/// Finds a coset `V + a ⊆ A` with `|V + a| ≥ 2^{-ℓ}|A|` for `A` in the ring
/// generated by `ℓ = gens.len()` cosets.
///
/// Two constructions are tried and the larger result kept:
/// the generator-splitting recursion (universe shrinks to the chosen side of the
/// last generator) and direct carving of the atoms contained in `A`.
pub fn find_large_coset_inside(a: &SubsetOfCube, gens: &[Coset]) -> Result<Coset> {
    if a.is_empty() {
        return Err(Error::Precondition("set is empty".into()));
    }
    if ring_membership_decompose(a, gens)?.is_none() {
        return Err(Error::Precondition("set is not in the ring generated by the given cosets".into()));
    }
    let n = a.n();
    let mut candidates = vec![split_recursion(a, &Coset::full(n), gens.to_vec())?];
    candidates.extend(carve_atoms(a, gens));
    let best = candidates
        .into_iter()
        .filter(|c| c.members().all(|x| a.contains(x)))
        .max_by(|x, y| x.size().cmp(&y.size()).then_with(|| y.cmp(x)))
        .ok_or_else(|| Error::Verification("no candidate coset lies inside the set".into()))?;
    let l = gens.len() as u32;
    if (best.size() as u128) << l < a.size() as u128 {
        return Err(Error::Verification(format!(
            "largest coset found has size {} < 2^-{l} * {}",
            best.size(),
            a.size()
        )));
    }
    Ok(best)
}

fn split_recursion(a: &SubsetOfCube, universe: &Coset, gens: Vec<Coset>) -> Result<Coset> {
    let gens: Vec<Coset> =
        gens.iter().filter_map(|g| g.intersect(universe)).filter(|g| g.size() < universe.size()).collect();
    if a.size() == universe.size() {
        return Ok(universe.clone());
    }
    let not_in_ring = || Error::Verification("set left the generated ring during recursion".into());
    match gens.len() {
        0 => Err(not_in_ring()),
        1 => {
            let c = &gens[0];
            let cs = c.to_subset();
            if *a == cs {
                Ok(c.clone())
            } else if a.intersection(&cs).is_empty() && a.size() == universe.size() - c.size() {
                universe.halves_avoiding(c).into_iter().next().ok_or_else(not_in_ring)
            } else {
                Err(not_in_ring())
            }
        }
        l => {
            let c = &gens[l - 1];
            let rest = gens[..l - 1].to_vec();
            let cs = c.to_subset();
            let inside = a.intersection(&cs);
            let outside = a.difference(&cs);
            if inside.size() >= outside.size() {
                split_recursion(&inside, c, rest)
            } else {
                let half = universe
                    .halves_avoiding(c)
                    .into_iter()
                    .max_by(|x, y| {
                        let sx = a.intersection(&x.to_subset()).size();
                        let sy = a.intersection(&y.to_subset()).size();
                        sx.cmp(&sy).then_with(|| y.cmp(x))
                    })
                    .ok_or_else(not_in_ring)?;
                let restricted = a.intersection(&half.to_subset());
                split_recursion(&restricted, &half, rest)
            }
        }
    }
}

fn carve_atoms(a: &SubsetOfCube, gens: &[Coset]) -> Vec<Coset> {
    let n = a.n();
    let l = gens.len();
    let gen_sets: Vec<SubsetOfCube> = gens.iter().map(Coset::to_subset).collect();
    let mut out = Vec::new();
    for s in 0..1usize << l {
        let mut atom = a.clone();
        for (i, g) in gen_sets.iter().enumerate() {
            atom = if s >> i & 1 == 1 { atom.intersection(g) } else { atom.difference(g) };
        }
        if atom.is_empty() {
            continue;
        }
        let mut d = Some(Coset::full(n));
        for (i, g) in gens.iter().enumerate() {
            if s >> i & 1 == 1 {
                d = d.and_then(|c| c.intersect(g));
            }
        }
        let Some(mut d) = d else { continue };
        let mut ok = true;
        for (j, g) in gens.iter().enumerate() {
            if s >> j & 1 == 1 {
                continue;
            }
            let Some(overlap) = d.intersect(g) else { continue };
            if overlap.size() == d.size() {
                ok = false;
                break;
            }
            d = d
                .halves_avoiding(&overlap)
                .into_iter()
                .max_by(|x, y| {
                    let sx = atom.intersection(&x.to_subset()).size();
                    let sy = atom.intersection(&y.to_subset()).size();
                    sx.cmp(&sy).then_with(|| y.cmp(x))
                })
                .expect("a proper subcoset always has an avoiding half");
        }
        if ok {
            out.push(d);
        }
    }
    out
}
