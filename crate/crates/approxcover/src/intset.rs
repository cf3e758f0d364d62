//! Finite sets of 64-bit integers with two interchangeable storage
//! layouts: a sorted element list, or a span bitmap anchored at the
//! minimum. The bitmap is used when the set fills at least 1/64 of its
//! span, which keeps memory at or below the sorted-list cost while
//! making sumsets a word-level shift-OR. All arithmetic is checked;
//! anything that would leave `i64` fails with [`Error::Overflow`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set is stored densely when `span <= 64 * len`.
const DENSE_SPAN_PER_ELEMENT: u128 = 64;

/// Hard cap on materialized bitmap size (bits), to keep pathological
/// interval requests from exhausting memory.
const MAX_SPAN_BITS: u128 = 1 << 31;

/// A finite set of integers. Equality, ordering of iteration, and
/// hashing of contents are extensional: two sets with the same
/// elements are equal regardless of internal layout.
#[derive(Clone, Serialize, Deserialize)]
#[serde(from = "Vec<i64>", into = "Vec<i64>")]
pub struct IntSet {
    repr: Repr,
}

#[derive(Clone)]
enum Repr {
    Sparse(Vec<i64>),
    Dense(Dense),
}

#[derive(Clone)]
struct Dense {
    /// Value of bit 0. Bit 0 and bit `span` are always set.
    offset: i64,
    /// Highest used bit index; the set occupies `span + 1` bits.
    span: usize,
    /// Number of elements (popcount of `words`).
    len: usize,
    words: Vec<u64>,
}

impl Dense {
    fn contains(&self, v: i64) -> bool {
        let Some(rel) = v.checked_sub(self.offset) else {
            return false;
        };
        if rel < 0 || rel as u128 > self.span as u128 {
            return false;
        }
        let rel = rel as usize;
        self.words[rel / 64] >> (rel % 64) & 1 == 1
    }

    fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        let offset = self.offset;
        self.words.iter().enumerate().flat_map(move |(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(offset + (wi * 64 + b) as i64)
            })
        })
    }
}

fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

fn span_of(min: i64, max: i64) -> u128 {
    (max as i128 - min as i128) as u128
}

fn dense_from_sorted(elems: &[i64]) -> Dense {
    let offset = elems[0];
    let span = span_of(offset, elems[elems.len() - 1]) as usize;
    let mut words = vec![0u64; span / 64 + 1];
    for &e in elems {
        let rel = (e as i128 - offset as i128) as usize;
        words[rel / 64] |= 1 << (rel % 64);
    }
    Dense { offset, span, len: elems.len(), words }
}

/// Builds the canonical representation for a sorted, deduplicated
/// element list.
fn canonical(elems: Vec<i64>) -> IntSet {
    if elems.is_empty() {
        return IntSet { repr: Repr::Sparse(elems) };
    }
    let span = span_of(elems[0], elems[elems.len() - 1]);
    if span <= DENSE_SPAN_PER_ELEMENT * elems.len() as u128 {
        IntSet { repr: Repr::Dense(dense_from_sorted(&elems)) }
    } else {
        IntSet { repr: Repr::Sparse(elems) }
    }
}

/// Canonicalizes a freshly computed bitmap whose bit 0 and bit `span`
/// are known to be set.
fn canonical_bits(offset: i64, span: usize, words: Vec<u64>) -> IntSet {
    let len = popcount(&words);
    if span as u128 <= DENSE_SPAN_PER_ELEMENT * len as u128 {
        IntSet { repr: Repr::Dense(Dense { offset, span, len, words }) }
    } else {
        let dense = Dense { offset, span, len, words };
        IntSet { repr: Repr::Sparse(dense.iter().collect()) }
    }
}

impl IntSet {
    /// Builds a set from arbitrary elements; sorts and deduplicates.
    pub fn new(elems: impl Into<Vec<i64>>) -> IntSet {
        let mut v: Vec<i64> = elems.into();
        v.sort_unstable();
        v.dedup();
        canonical(v)
    }

    /// The empty sentinel. No algebraic operation accepts it.
    pub fn empty() -> IntSet {
        IntSet { repr: Repr::Sparse(Vec::new()) }
    }

    pub fn singleton(a: i64) -> IntSet {
        canonical(vec![a])
    }

    /// The full interval `[lo, hi]`.
    pub fn interval(lo: i64, hi: i64) -> Result<IntSet> {
        if lo > hi {
            return Err(Error::EmptySet);
        }
        let span = span_of(lo, hi);
        if span + 1 > MAX_SPAN_BITS {
            return Err(Error::Overflow("interval materialization"));
        }
        let span = span as usize;
        let mut words = vec![u64::MAX; span / 64 + 1];
        let used = span % 64 + 1;
        if used < 64 {
            *words.last_mut().unwrap() = (1 << used) - 1;
        }
        Ok(IntSet { repr: Repr::Dense(Dense { offset: lo, span, len: span + 1, words }) })
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn len(&self) -> usize {
        match &self.repr {
            Repr::Sparse(v) => v.len(),
            Repr::Dense(d) => d.len,
        }
    }

    pub fn min(&self) -> Option<i64> {
        match &self.repr {
            Repr::Sparse(v) => v.first().copied(),
            Repr::Dense(d) => Some(d.offset),
        }
    }

    pub fn max(&self) -> Option<i64> {
        match &self.repr {
            Repr::Sparse(v) => v.last().copied(),
            Repr::Dense(d) => Some(d.offset + d.span as i64),
        }
    }

    pub fn contains(&self, v: i64) -> bool {
        match &self.repr {
            Repr::Sparse(elems) => elems.binary_search(&v).is_ok(),
            Repr::Dense(d) => d.contains(v),
        }
    }

    pub fn iter(&self) -> Box<dyn Iterator<Item = i64> + '_> {
        match &self.repr {
            Repr::Sparse(v) => Box::new(v.iter().copied()),
            Repr::Dense(d) => Box::new(d.iter()),
        }
    }

    pub fn to_vec(&self) -> Vec<i64> {
        self.iter().collect()
    }

    /// `max - min` as a width; 0 for singletons.
    pub fn span(&self) -> Option<u128> {
        Some(span_of(self.min()?, self.max()?))
    }

    /// True when the set is a gap-free run `[min, max]`.
    pub fn is_interval(&self) -> bool {
        match (self.span(), self.len()) {
            (Some(span), len) => span + 1 == len as u128,
            (None, _) => false,
        }
    }

    /// Largest difference between consecutive elements (0 for
    /// singletons).
    pub fn max_gap(&self) -> Option<u64> {
        if self.is_empty() {
            return None;
        }
        let mut prev = None;
        let mut best = 0u64;
        for e in self.iter() {
            if let Some(p) = prev {
                best = best.max((e as i128 - p as i128) as u64);
            }
            prev = Some(e);
        }
        Some(best)
    }

    /// `A + x`.
    pub fn translate(&self, x: i64) -> Result<IntSet> {
        let (min, max) = self.endpoints()?;
        min.checked_add(x).ok_or(Error::Overflow("translate"))?;
        max.checked_add(x).ok_or(Error::Overflow("translate"))?;
        Ok(match &self.repr {
            Repr::Sparse(v) => {
                IntSet { repr: Repr::Sparse(v.iter().map(|e| e + x).collect()) }
            }
            Repr::Dense(d) => {
                let mut d = d.clone();
                d.offset += x;
                IntSet { repr: Repr::Dense(d) }
            }
        })
    }

    /// `c * A = {c * a : a in A}`.
    pub fn dilate(&self, c: i64) -> Result<IntSet> {
        let (min, max) = self.endpoints()?;
        if c == 0 {
            return Ok(IntSet::singleton(0));
        }
        min.checked_mul(c).ok_or(Error::Overflow("dilate"))?;
        max.checked_mul(c).ok_or(Error::Overflow("dilate"))?;
        let mut v: Vec<i64> = self.iter().map(|e| e * c).collect();
        if c < 0 {
            v.reverse();
        }
        Ok(canonical(v))
    }

    /// Set union.
    pub fn union(&self, other: &IntSet) -> Result<IntSet> {
        self.endpoints()?;
        other.endpoints()?;
        let mut out = Vec::with_capacity(self.len() + other.len());
        let mut a = self.iter().peekable();
        let mut b = other.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some(&x), Some(&y)) => {
                    if x < y {
                        out.push(x);
                        a.next();
                    } else if y < x {
                        out.push(y);
                        b.next();
                    } else {
                        out.push(x);
                        a.next();
                        b.next();
                    }
                }
                (Some(&x), None) => {
                    out.push(x);
                    a.next();
                }
                (None, Some(&y)) => {
                    out.push(y);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Ok(canonical(out))
    }

    /// The pairwise sumset `A + B = {a + b}`. Uses a word-level
    /// shift-OR when the result is dense enough to live in a bitmap,
    /// and explicit pair enumeration otherwise.
    pub fn sumset(&self, other: &IntSet) -> Result<IntSet> {
        let (amin, amax) = self.endpoints()?;
        let (bmin, bmax) = other.endpoints()?;
        let lo = amin.checked_add(bmin).ok_or(Error::Overflow("sumset"))?;
        let hi = amax.checked_add(bmax).ok_or(Error::Overflow("sumset"))?;
        let span = span_of(lo, hi);
        let budget = DENSE_SPAN_PER_ELEMENT * (self.len() + other.len()) as u128;
        if span < MAX_SPAN_BITS && span <= budget {
            Ok(self.sumset_bitmap(other, lo, span as usize))
        } else {
            Ok(self.sumset_pairs(other))
        }
    }

    /// Shift-OR kernel. Exposed for kernel-equivalence tests and
    /// benchmarks; `sumset` picks between the kernels automatically.
    #[doc(hidden)]
    pub fn sumset_bitmap_kernel(&self, other: &IntSet) -> Result<IntSet> {
        let (amin, _) = self.endpoints()?;
        let (bmin, bmax) = other.endpoints()?;
        let lo = amin.checked_add(bmin).ok_or(Error::Overflow("sumset"))?;
        let hi = self.max().unwrap().checked_add(bmax).ok_or(Error::Overflow("sumset"))?;
        let span = span_of(lo, hi);
        if span + 1 > MAX_SPAN_BITS {
            return Err(Error::Overflow("sumset materialization"));
        }
        Ok(self.sumset_bitmap(other, lo, span as usize))
    }

    /// Pair-enumeration kernel; see `sumset_bitmap_kernel`.
    #[doc(hidden)]
    pub fn sumset_pairs_kernel(&self, other: &IntSet) -> Result<IntSet> {
        self.endpoints()?;
        other.endpoints()?;
        self.max().unwrap().checked_add(other.max().unwrap()).ok_or(Error::Overflow("sumset"))?;
        self.min().unwrap().checked_add(other.min().unwrap()).ok_or(Error::Overflow("sumset"))?;
        Ok(self.sumset_pairs(other))
    }

    fn sumset_bitmap(&self, other: &IntSet, lo: i64, span: usize) -> IntSet {
        // Shift the bitmap of the longer operand by each element of
        // the shorter one.
        let (shifts, table) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let table_bits = match &table.repr {
            Repr::Dense(d) => d.words.clone(),
            Repr::Sparse(_) => dense_from_sorted(&table.to_vec()).words,
        };
        let table_min = table.min().unwrap();
        let shift_min = shifts.min().unwrap();
        debug_assert_eq!(lo, table_min + shift_min);
        let mut out = vec![0u64; span / 64 + 1];
        for e in shifts.iter() {
            let delta = (e as i128 - shift_min as i128) as usize;
            let (wshift, bshift) = (delta / 64, delta % 64);
            if bshift == 0 {
                for (i, &w) in table_bits.iter().enumerate() {
                    out[i + wshift] |= w;
                }
            } else {
                for (i, &w) in table_bits.iter().enumerate() {
                    out[i + wshift] |= w << bshift;
                    let spill = w >> (64 - bshift);
                    if spill != 0 {
                        out[i + wshift + 1] |= spill;
                    }
                }
            }
        }
        canonical_bits(lo, span, out)
    }

    fn sumset_pairs(&self, other: &IntSet) -> IntSet {
        let a = self.to_vec();
        let b = other.to_vec();
        let mut out = Vec::with_capacity(a.len() * b.len());
        for &x in &a {
            for &y in &b {
                out.push(x + y);
            }
        }
        out.sort_unstable();
        out.dedup();
        canonical(out)
    }

    fn endpoints(&self) -> Result<(i64, i64)> {
        match (self.min(), self.max()) {
            (Some(lo), Some(hi)) => Ok((lo, hi)),
            _ => Err(Error::EmptySet),
        }
    }

    /// Same set, bitmap layout, regardless of the density rule.
    /// `None` when empty or beyond the bitmap size cap.
    #[doc(hidden)]
    pub fn forced_dense(&self) -> Option<IntSet> {
        let span = self.span()?;
        if span + 1 > MAX_SPAN_BITS {
            return None;
        }
        Some(IntSet { repr: Repr::Dense(dense_from_sorted(&self.to_vec())) })
    }

    /// Same set, sorted-list layout, regardless of the density rule.
    #[doc(hidden)]
    pub fn forced_sparse(&self) -> IntSet {
        IntSet { repr: Repr::Sparse(self.to_vec()) }
    }

    /// True when the set currently uses the bitmap layout.
    #[doc(hidden)]
    pub fn is_dense_repr(&self) -> bool {
        matches!(self.repr, Repr::Dense(_))
    }
}

impl PartialEq for IntSet {
    fn eq(&self, other: &Self) -> bool {
        if self.len() != other.len() || self.min() != other.min() || self.max() != other.max() {
            return false;
        }
        self.iter().zip(other.iter()).all(|(a, b)| a == b)
    }
}

impl Eq for IntSet {}

impl fmt::Debug for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for e in self.iter() {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for IntSet {
    type Err = Error;

    /// Parses a comma-separated integer list such as `"0, 1, 3"`.
    /// Elements are sorted and deduplicated; anything that is not an
    /// integer is rejected.
    fn from_str(s: &str) -> Result<IntSet> {
        if s.trim().is_empty() {
            return Err(Error::EmptySet);
        }
        let mut elems = Vec::new();
        for token in s.split(',') {
            let token = token.trim();
            let v: i64 = token.parse().map_err(|_| Error::Parse(token.to_string()))?;
            elems.push(v);
        }
        Ok(IntSet::new(elems))
    }
}

impl From<Vec<i64>> for IntSet {
    fn from(v: Vec<i64>) -> Self {
        IntSet::new(v)
    }
}

impl From<IntSet> for Vec<i64> {
    fn from(s: IntSet) -> Self {
        s.to_vec()
    }
}
