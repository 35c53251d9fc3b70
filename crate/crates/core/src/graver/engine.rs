//! Completion kernel shared by the Graver drivers.
//!
//! Elements live in a flat store together with their sign masks. A phase
//! works on an active coordinate mask `M`: the order `⊑` and all norms are
//! evaluated on `M` only, while full vectors are carried along so every
//! stored element stays in the lattice. Pairs are queued by the `M`-norm of
//! their sum and popped in ascending order, ties broken by index.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::limits::Limits;

/// Integer coefficient used inside the completion.
pub(crate) trait Coeff: Clone + Ord + Eq + Hash + Debug + Send + Sync + 'static {
    fn from_big(x: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn is_negative(&self) -> bool;
    /// `|self|` as a `u64`, `None` if it does not fit.
    /// Absolute value, saturated to `u64::MAX`.
    fn abs_u64(&self) -> u64;
}

impl Coeff for i64 {
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i64().filter(|v| *v != i64::MIN)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    #[inline]
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o).filter(|v| *v != i64::MIN)
    }
    #[inline]
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o).filter(|v| *v != i64::MIN)
    }
    #[inline]
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    #[inline]
    fn is_zero(&self) -> bool {
        *self == 0
    }
    #[inline]
    fn is_positive(&self) -> bool {
        *self > 0
    }
    #[inline]
    fn is_negative(&self) -> bool {
        *self < 0
    }
    #[inline]
    fn abs_u64(&self) -> u64 {
        self.unsigned_abs()
    }
}

impl Coeff for BigInt {
    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_u64(&self) -> u64 {
        self.abs().to_u64().unwrap_or(u64::MAX)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum EngineError {
    /// Machine coefficients overflowed; rerun with arbitrary precision.
    Overflow,
    Cap { cap: &'static str, limit: u64 },
}

pub(crate) type EngineResult<T> = std::result::Result<T, EngineError>;

/// Which pairs a phase needs to examine.
#[derive(Debug, Clone, Copy)]
pub(crate) enum PairFilter {
    /// Pairs with a sign cancellation somewhere on the active mask.
    Cancelling,
    /// Pairs with strictly opposite signs on the newly lifted coordinate.
    OppositeAt(usize),
}

/// Coordinate mask as packed bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Mask {
    bits: Vec<u64>,
    n: usize,
}

impl Mask {
    pub fn empty(n: usize) -> Self {
        Mask { bits: vec![0; n.div_ceil(64).max(1)], n }
    }

    pub fn full(n: usize) -> Self {
        let mut m = Self::empty(n);
        for i in 0..n {
            m.insert(i);
        }
        m
    }

    pub fn insert(&mut self, i: usize) {
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    fn words(&self) -> usize {
        self.bits.len()
    }
}

/// Flat storage of lattice vectors with cached sign masks and norms.
pub(crate) struct Store<T: Coeff> {
    n: usize,
    words: usize,
    coords: Vec<T>,
    pos: Vec<u64>,
    neg: Vec<u64>,
    /// Norm on the current active mask.
    norm: Vec<u64>,
    mask: Mask,
    limits: Limits,
}

/// A vector under construction plus its masks restricted to the active set.
struct Work<T> {
    v: Vec<T>,
    pos: Vec<u64>,
    neg: Vec<u64>,
    norm: u64,
}

impl<T: Coeff> Store<T> {
    pub fn new(n: usize, mask: Mask, limits: Limits) -> Self {
        let words = mask.words();
        Store { n, words, coords: Vec::new(), pos: Vec::new(), neg: Vec::new(), norm: Vec::new(), mask, limits }
    }

    pub fn len(&self) -> usize {
        self.norm.len()
    }

    fn row(&self, i: usize) -> &[T] {
        &self.coords[i * self.n..(i + 1) * self.n]
    }

    fn pos_of(&self, i: usize) -> &[u64] {
        &self.pos[i * self.words..(i + 1) * self.words]
    }

    fn neg_of(&self, i: usize) -> &[u64] {
        &self.neg[i * self.words..(i + 1) * self.words]
    }

    pub fn vectors(&self) -> Vec<Vec<T>> {
        (0..self.len()).map(|i| self.row(i).to_vec()).collect()
    }

    /// Masks and active norm of `v`.
    fn describe(&self, v: &[T]) -> EngineResult<(Vec<u64>, Vec<u64>, u64)> {
        let mut pos = vec![0u64; self.words];
        let mut neg = vec![0u64; self.words];
        let mut norm = 0u64;
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() || !self.mask.contains(i) {
                continue;
            }
            if x.is_positive() {
                pos[i / 64] |= 1 << (i % 64);
            } else {
                neg[i / 64] |= 1 << (i % 64);
            }
            norm = norm.saturating_add(x.abs_u64());
        }
        Ok((pos, neg, norm))
    }

    fn work(&self, v: Vec<T>) -> EngineResult<Work<T>> {
        let (pos, neg, norm) = self.describe(&v)?;
        Ok(Work { v, pos, neg, norm })
    }

    fn full_norm(v: &[T]) -> u64 {
        v.iter().fold(0u64, |acc, x| acc.saturating_add(x.abs_u64()))
    }

    /// Appends `v` in canonical sign (first nonzero coordinate positive).
    pub fn push(&mut self, mut v: Vec<T>) -> EngineResult<usize> {
        if let Some(first) = v.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                for x in v.iter_mut() {
                    *x = x.neg().ok_or(EngineError::Overflow)?;
                }
            }
        }
        if self.len() >= self.limits.max_elements {
            return Err(EngineError::Cap { cap: "max-elements", limit: self.limits.max_elements as u64 });
        }
        let full = Self::full_norm(&v);
        if full > self.limits.max_norm {
            return Err(EngineError::Cap { cap: "max-norm", limit: self.limits.max_norm });
        }
        let (pos, neg, norm) = self.describe(&v)?;
        self.coords.extend(v);
        self.pos.extend(pos);
        self.neg.extend(neg);
        self.norm.push(norm);
        Ok(self.len() - 1)
    }

    /// Switches the active mask and refreshes cached masks and norms.
    pub fn set_mask(&mut self, mask: Mask) -> EngineResult<()> {
        self.mask = mask;
        for i in 0..self.len() {
            let (p, q, norm) = self.describe(self.row(i))?;
            self.pos[i * self.words..(i + 1) * self.words].copy_from_slice(&p);
            self.neg[i * self.words..(i + 1) * self.words].copy_from_slice(&q);
            self.norm[i] = norm;
        }
        Ok(())
    }

    /// Whether `sign·g_i ⊑ s` on the active mask.
    #[inline]
    fn reduces(&self, i: usize, negate: bool, s: &Work<T>) -> bool {
        if self.norm[i] > s.norm || self.norm[i] == 0 {
            return false;
        }
        let (gp, gn) = if negate { (self.neg_of(i), self.pos_of(i)) } else { (self.pos_of(i), self.neg_of(i)) };
        for w in 0..self.words {
            if gp[w] & !s.pos[w] != 0 || gn[w] & !s.neg[w] != 0 {
                return false;
            }
        }
        let g = self.row(i);
        for w in 0..self.words {
            let mut bits = gp[w] | gn[w];
            while bits != 0 {
                let k = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                // Same sign is already established; compare magnitudes.
                let (gk, sk) = (&g[k], &s.v[k]);
                let fits = if sk.is_positive() {
                    if negate {
                        gk.neg().is_some_and(|x| x <= *sk)
                    } else {
                        gk <= sk
                    }
                } else if negate {
                    gk.neg().is_some_and(|x| x >= *sk)
                } else {
                    gk >= sk
                };
                if !fits {
                    return false;
                }
            }
        }
        true
    }

    fn find_reducer(&self, s: &Work<T>) -> Option<(usize, bool)> {
        (0..self.len()).find_map(|i| {
            if self.reduces(i, false, s) {
                Some((i, false))
            } else if self.reduces(i, true, s) {
                Some((i, true))
            } else {
                None
            }
        })
    }

    /// Normal form of `s` under `⊑`-reduction by the stored elements.
    fn normal_form(&self, mut s: Work<T>) -> EngineResult<Work<T>> {
        while s.norm > 0 {
            let Some((i, negate)) = self.find_reducer(&s) else { break };
            loop {
                let g = self.row(i);
                let next: Vec<T> = if negate {
                    s.v.iter().zip(g).map(|(a, b)| a.add(b)).collect::<Option<_>>()
                } else {
                    s.v.iter().zip(g).map(|(a, b)| a.sub(b)).collect::<Option<_>>()
                }
                .ok_or(EngineError::Overflow)?;
                s = self.work(next)?;
                if !self.reduces(i, negate, &s) {
                    break;
                }
            }
        }
        Ok(s)
    }

    fn passes(&self, filter: PairFilter, i: usize, k: usize, negate: bool) -> bool {
        match filter {
            PairFilter::Cancelling => {
                let (kp, kn) = if negate { (self.neg_of(k), self.pos_of(k)) } else { (self.pos_of(k), self.neg_of(k)) };
                let (ip, in_) = (self.pos_of(i), self.neg_of(i));
                (0..self.words).any(|w| ip[w] & kn[w] != 0 || in_[w] & kp[w] != 0)
            }
            PairFilter::OppositeAt(j) => {
                let a = &self.row(i)[j];
                let b = &self.row(k)[j];
                if a.is_zero() || b.is_zero() {
                    return false;
                }
                (a.is_positive() == b.is_positive()) == negate
            }
        }
    }

    fn sum(&self, i: usize, k: usize, negate: bool) -> EngineResult<Vec<T>> {
        let (a, b) = (self.row(i), self.row(k));
        if negate {
            a.iter().zip(b).map(|(x, y)| x.sub(y)).collect::<Option<_>>()
        } else {
            a.iter().zip(b).map(|(x, y)| x.add(y)).collect::<Option<_>>()
        }
        .ok_or(EngineError::Overflow)
    }

    fn sum_norm(&self, i: usize, k: usize, negate: bool) -> EngineResult<u64> {
        let (a, b) = (self.row(i), self.row(k));
        let mut norm = 0u64;
        for idx in 0..self.n {
            if !self.mask.contains(idx) {
                continue;
            }
            let s = if negate { a[idx].sub(&b[idx]) } else { a[idx].add(&b[idx]) }.ok_or(EngineError::Overflow)?;
            norm = norm.saturating_add(s.abs_u64());
        }
        Ok(norm)
    }

    /// Runs the completion on the active mask until every filtered pair
    /// reduces to zero.
    pub fn complete(&mut self, filter: PairFilter) -> EngineResult<()> {
        // Entries: (norm of sum, i, k with bit 31 marking the difference).
        let mut heap: BinaryHeap<Reverse<(u64, u32, u32)>> = BinaryHeap::new();
        const NEG: u32 = 1 << 31;
        let enqueue = |store: &Self, heap: &mut BinaryHeap<Reverse<(u64, u32, u32)>>, k: usize| -> EngineResult<()> {
            for i in 0..k {
                for negate in [false, true] {
                    if store.passes(filter, i, k, negate) {
                        let norm = store.sum_norm(i, k, negate)?;
                        heap.push(Reverse((norm, i as u32, k as u32 | if negate { NEG } else { 0 })));
                    }
                }
            }
            Ok(())
        };
        for k in 0..self.len() {
            enqueue(self, &mut heap, k)?;
        }
        while let Some(Reverse((_, i, tagged))) = heap.pop() {
            let negate = tagged & NEG != 0;
            let k = (tagged & !NEG) as usize;
            let s = self.work(self.sum(i as usize, k, negate)?)?;
            let r = self.normal_form(s)?;
            if r.norm == 0 {
                continue;
            }
            let idx = self.push(r.v)?;
            enqueue(self, &mut heap, idx)?;
        }
        Ok(())
    }

    /// Drops every element that is not `⊑`-minimal on the active mask.
    pub fn retain_minimal(&mut self) {
        let keep: Vec<bool> = (0..self.len())
            .map(|i| {
                let w = Work {
                    v: self.row(i).to_vec(),
                    pos: self.pos_of(i).to_vec(),
                    neg: self.neg_of(i).to_vec(),
                    norm: self.norm[i],
                };
                self.norm[i] > 0
                    && !(0..self.len()).any(|k| k != i && (self.reduces(k, false, &w) || self.reduces(k, true, &w)))
            })
            .collect();
        let mut out = Store::new(self.n, self.mask.clone(), self.limits);
        out.words = self.words;
        for (i, keep) in keep.into_iter().enumerate() {
            if keep {
                out.coords.extend_from_slice(self.row(i));
                out.pos.extend_from_slice(self.pos_of(i));
                out.neg.extend_from_slice(self.neg_of(i));
                out.norm.push(self.norm[i]);
            }
        }
        *self = out;
    }
}

/// Converts big vectors into engine coefficients.
pub(crate) fn lower<T: Coeff>(v: &[BigInt]) -> EngineResult<Vec<T>> {
    v.iter().map(T::from_big).collect::<Option<_>>().ok_or(EngineError::Overflow)
}

/// Plain completion: start from `±basis` with every coordinate active.
pub(crate) fn plain_completion<T: Coeff>(basis: &[Vec<BigInt>], n: usize, limits: Limits) -> EngineResult<Vec<Vec<T>>> {
    let mut store = Store::<T>::new(n, Mask::full(n), limits);
    for b in basis {
        store.push(lower(b)?)?;
    }
    store.complete(PairFilter::Cancelling)?;
    store.retain_minimal();
    Ok(store.vectors())
}

/// Project-and-lift: complete on the pivot coordinates of the Hermite basis,
/// then activate the remaining coordinates one at a time.
pub(crate) fn project_and_lift<T: Coeff>(
    basis: &[Vec<BigInt>],
    n: usize,
    limits: Limits,
) -> EngineResult<Vec<Vec<T>>> {
    let mut mask = Mask::empty(n);
    for row in basis {
        if let Some(p) = row.iter().position(|x| !Zero::is_zero(x)) {
            mask.insert(p);
        }
    }
    let mut store = Store::<T>::new(n, mask.clone(), limits);
    for b in basis {
        store.push(lower(b)?)?;
    }
    store.complete(PairFilter::Cancelling)?;
    store.retain_minimal();
    for j in 0..n {
        if mask.contains(j) {
            continue;
        }
        mask.insert(j);
        store.set_mask(mask.clone())?;
        store.complete(PairFilter::OppositeAt(j))?;
        store.retain_minimal();
    }
    Ok(store.vectors())
}
