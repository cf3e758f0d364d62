//! Iterated sumsets `hA = A + ... + A` and arithmetic-progression
//! detection. Folding uses binary doubling, so `hA` costs `O(log h)`
//! pairwise sumsets, and collapses to interval arithmetic as soon as an
//! intermediate fold fills its whole span.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::intset::IntSet;

/// Shape of a finite arithmetic progression `{first + i * diff}`.
/// Singletons are reported with `diff = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ApShape {
    pub first: i64,
    pub diff: i64,
    pub size: usize,
}

/// Returns the progression shape of `a`, or `None` when the gaps are
/// not all equal. Pairs and singletons are always progressions.
pub fn detect_ap(a: &IntSet) -> Result<Option<ApShape>> {
    let first = a.min().ok_or(Error::EmptySet)?;
    if a.len() == 1 {
        return Ok(Some(ApShape { first, diff: 1, size: 1 }));
    }
    let mut iter = a.iter();
    let mut prev = iter.next().unwrap();
    let mut diff: Option<i128> = None;
    for e in iter {
        let gap = e as i128 - prev as i128;
        match diff {
            None => diff = Some(gap),
            Some(d) if d != gap => return Ok(None),
            Some(_) => {}
        }
        prev = e;
    }
    let d = i64::try_from(diff.unwrap()).map_err(|_| Error::Overflow("detect_ap"))?;
    Ok(Some(ApShape { first, diff: d, size: a.len() }))
}

/// The h-fold sumset `hA`.
pub fn hfold(a: &IntSet, h: u64) -> Result<IntSet> {
    let min = a.min().ok_or(Error::EmptySet)?;
    if h == 0 {
        return Err(Error::InvalidFold);
    }
    let neg_min = min.checked_neg().ok_or(Error::Overflow("hfold"))?;
    let shift = i64::try_from(min as i128 * h as i128).map_err(|_| Error::Overflow("hfold"))?;
    let zero_based = a.translate(neg_min)?;
    fold_zero_based(&zero_based, h)?.translate(shift)
}

/// Folds a set whose minimum is 0. Once some intermediate fold `kA` is
/// the full interval `[0, k*max]`, every higher fold is also a full
/// interval, so the remaining doublings reduce to endpoint arithmetic.
fn fold_zero_based(a: &IntSet, h: u64) -> Result<IntSet> {
    debug_assert_eq!(a.min(), Some(0));
    let max = a.max().unwrap();
    let hi = |k: u64| i64::try_from(k as i128 * max as i128).map_err(|_| Error::Overflow("hfold"));
    if h == 1 {
        return Ok(a.clone());
    }
    if a.is_interval() {
        return IntSet::interval(0, hi(h)?);
    }
    let half = fold_zero_based(a, h / 2)?;
    if half.is_interval() {
        return IntSet::interval(0, hi(h)?);
    }
    let mut folded = half.sumset(&half)?;
    if h % 2 == 1 {
        folded = folded.sumset(a)?;
    }
    Ok(folded)
}

/// All folds `1A, 2A, ..., h_max A`, computed incrementally. Useful
/// when a whole window of fold counts is needed at once.
pub fn hfold_upto(a: &IntSet, h_max: u64) -> Result<Vec<IntSet>> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if h_max == 0 {
        return Err(Error::InvalidFold);
    }
    let gap = a.max_gap().unwrap() as u128;
    let (amin, amax) = (a.min().unwrap(), a.max().unwrap());
    let mut out = Vec::with_capacity(h_max as usize);
    out.push(a.clone());
    for _ in 2..=h_max {
        let prev = out.last().unwrap();
        // An interval [x, y] plus A stays gap-free when no gap of A
        // exceeds the interval length.
        let next = if prev.is_interval() && gap <= prev.len() as u128 {
            let lo = prev.min().unwrap().checked_add(amin).ok_or(Error::Overflow("hfold"))?;
            let hi = prev.max().unwrap().checked_add(amax).ok_or(Error::Overflow("hfold"))?;
            IntSet::interval(lo, hi)?
        } else {
            prev.sumset(a)?
        };
        out.push(next);
    }
    Ok(out)
}

/// The size law for folds: progressions of size `m` satisfy
/// `|hA| = h*m - h + 1` exactly; every other set satisfies
/// `|hA| >= h*m`. Returns the bound together with the progression
/// flag.
pub fn hfold_size_bound(a: &IntSet, h: u64) -> Result<(u64, bool)> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if h == 0 {
        return Err(Error::InvalidFold);
    }
    let m = a.len() as u64;
    let is_ap = detect_ap(a)?.is_some();
    let hm = h.checked_mul(m).ok_or(Error::Overflow("hfold_size_bound"))?;
    if is_ap {
        Ok((hm - h + 1, true))
    } else {
        Ok((hm, false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(elems: &[i64]) -> IntSet {
        IntSet::new(elems.to_vec())
    }

    /// Reference fold: enumerate every h-element multiset directly.
    fn fold_by_enumeration(elems: &[i64], h: u64) -> Vec<i64> {
        fn rec(elems: &[i64], left: u64, start: usize, sum: i64, out: &mut Vec<i64>) {
            if left == 0 {
                out.push(sum);
                return;
            }
            for i in start..elems.len() {
                rec(elems, left - 1, i, sum + elems[i], out);
            }
        }
        let mut out = Vec::new();
        rec(elems, h, 0, 0, &mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    #[test]
    fn detect_ap_examples() {
        assert_eq!(
            detect_ap(&set(&[3, 5, 7, 9])).unwrap(),
            Some(ApShape { first: 3, diff: 2, size: 4 })
        );
        assert_eq!(detect_ap(&set(&[0, 1, 3])).unwrap(), None);
        assert_eq!(
            detect_ap(&set(&[4])).unwrap(),
            Some(ApShape { first: 4, diff: 1, size: 1 })
        );
        assert_eq!(
            detect_ap(&set(&[-1, 6])).unwrap(),
            Some(ApShape { first: -1, diff: 7, size: 2 })
        );
        assert_eq!(detect_ap(&IntSet::empty()), Err(Error::EmptySet));
    }

    #[test]
    fn hfold_examples() {
        assert_eq!(hfold(&set(&[0, 1, 3]), 2).unwrap(), set(&[0, 1, 2, 3, 4, 6]));
        assert_eq!(hfold(&set(&[0, 1, 3, 4]), 2).unwrap(), IntSet::interval(0, 8).unwrap());
        assert_eq!(hfold(&set(&[1, 3, 7]), 2).unwrap(), set(&[2, 4, 6, 8, 10, 14]));
        assert_eq!(hfold(&set(&[-2, 5]), 1).unwrap(), set(&[-2, 5]));
        assert_eq!(hfold(&set(&[9]), 5).unwrap(), set(&[45]));
        assert_eq!(hfold(&set(&[0, 1]), 0), Err(Error::InvalidFold));
        assert_eq!(hfold(&IntSet::empty(), 2), Err(Error::EmptySet));
    }

    #[test]
    fn hfold_matches_enumeration() {
        let cases: &[&[i64]] = &[
            &[0, 1, 3],
            &[0, 2, 3],
            &[-4, 0, 5],
            &[1, 10, 100],
            &[0, 1, 4, 9],
            &[-3, -1, 2, 7],
        ];
        for elems in cases {
            let s = set(elems);
            for h in 1..=6 {
                let expected = fold_by_enumeration(elems, h);
                assert_eq!(hfold(&s, h).unwrap().to_vec(), expected, "A={elems:?} h={h}");
            }
        }
    }

    #[test]
    fn hfold_upto_matches_hfold() {
        let s = set(&[0, 2, 3, 11]);
        let folds = hfold_upto(&s, 9).unwrap();
        assert_eq!(folds.len(), 9);
        for (i, f) in folds.iter().enumerate() {
            assert_eq!(f, &hfold(&s, i as u64 + 1).unwrap(), "h={}", i + 1);
        }
    }

    #[test]
    fn interval_fast_path_agrees_with_stepwise_folding() {
        // Both endpoint gaps are 1, so high folds become intervals and
        // the doubling path short-circuits.
        let s = set(&[0, 1, 2, 3, 4, 5, 6, 7, 99, 100]);
        let folds = hfold_upto(&s, 300).unwrap();
        assert_eq!(hfold(&s, 300).unwrap(), folds[299]);
        assert_eq!(hfold(&s, 137).unwrap(), folds[136]);
        assert!(folds[299].is_interval());
    }

    #[test]
    fn size_bound_examples() {
        assert_eq!(hfold_size_bound(&set(&[0, 2, 4]), 5).unwrap(), (11, true));
        assert_eq!(hfold(&set(&[0, 2, 4]), 5).unwrap().len(), 11);
        assert_eq!(hfold_size_bound(&set(&[0, 1, 3]), 2).unwrap(), (6, false));
        assert_eq!(hfold_size_bound(&set(&[5]), 9).unwrap(), (1, true));
        assert_eq!(hfold_size_bound(&set(&[0, 1]), 0), Err(Error::InvalidFold));
    }

    #[test]
    fn fold_overflow_is_loud() {
        let s = set(&[0, i64::MAX / 2]);
        assert!(matches!(hfold(&s, 4), Err(Error::Overflow(_))));
    }

    fn arb_set() -> impl Strategy<Value = IntSet> {
        proptest::collection::vec(-60i64..60, 1..7).prop_map(IntSet::new)
    }

    proptest! {
        #[test]
        fn prop_fold_splits_additively(a in arb_set(), h1 in 1u64..5, h2 in 1u64..5) {
            let whole = hfold(&a, h1 + h2).unwrap();
            let split = hfold(&a, h1).unwrap().sumset(&hfold(&a, h2).unwrap()).unwrap();
            prop_assert_eq!(whole, split);
        }

        #[test]
        fn prop_fold_translate_equivariance(a in arb_set(), x in -40i64..40, h in 1u64..6) {
            let lhs = hfold(&a.translate(x).unwrap(), h).unwrap();
            let rhs = hfold(&a, h).unwrap().translate((h as i64) * x).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn prop_fold_dilate_equivariance(a in arb_set(), c in -4i64..5, h in 1u64..6) {
            prop_assume!(c != 0);
            let lhs = hfold(&a.dilate(c).unwrap(), h).unwrap();
            let rhs = hfold(&a, h).unwrap().dilate(c).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn prop_size_law(a in arb_set(), h in 1u64..6) {
            let (bound, is_ap) = hfold_size_bound(&a, h).unwrap();
            let n = hfold(&a, h).unwrap().len() as u64;
            if is_ap {
                prop_assert_eq!(n, bound);
            } else {
                prop_assert!(n >= bound);
            }
        }
    }
}
