//! Exact covering numbers: the least number of translates of `A`
//! whose union contains the r-fold sumset `rA`.
//!
//! The search is an exact branch-and-bound over translate offsets. A
//! universe element `u` can only be covered by the offsets `u - a` for
//! `a` in `A`, so branching on one uncovered element fans out to at
//! most `|A|` children. A greedy cover seeds the upper bound. Each
//! node recounts what every candidate still covers; the largest such
//! count yields a counting bound that tightens as the frontier
//! shrinks, and candidates whose remaining coverage sits inside
//! another branch candidate's are dropped. Exhaustion certifies
//! optimality, and a second pass reconstructs the lexicographically
//! smallest witness of the optimal size.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::intset::IntSet;
use crate::sumsets::{detect_ap, hfold};

/// Default cap on search nodes before the solver gives up with
/// [`Error::BudgetExceeded`].
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// A fully materialized cover problem: cover `universe = rA` by
/// translates `A + x` with `x` drawn from `candidates`.
#[derive(Debug, Clone)]
pub struct CoverInstance {
    pub base: IntSet,
    pub r: u64,
    pub universe: IntSet,
    /// Sorted, deduplicated offsets `{c - a : c in rA, a in A}`; no
    /// other translate intersects the universe usefully.
    pub candidates: Vec<i64>,
}

impl CoverInstance {
    pub fn new(base: &IntSet, r: u64) -> Result<CoverInstance> {
        let universe = hfold(base, r)?;
        let mut candidates = Vec::with_capacity(universe.len() * base.len());
        for c in universe.iter() {
            for a in base.iter() {
                let x = (c as i128) - (a as i128);
                candidates.push(i64::try_from(x).map_err(|_| Error::Overflow("candidates"))?);
            }
        }
        candidates.sort_unstable();
        candidates.dedup();
        Ok(CoverInstance { base: base.clone(), r, universe, candidates })
    }
}

/// Result of an exact cover computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverResult {
    pub covering_number: u64,
    /// Lexicographically smallest optimal set of translate offsets.
    pub witness: IntSet,
    pub nodes_explored: u64,
    /// Always true when the solver returns; kept explicit so reports
    /// can state it.
    pub optimal: bool,
    /// Size of the covered universe `|rA|`.
    pub universe_size: u64,
}

/// Exact covering number with the default node budget.
pub fn covering_number(a: &IntSet, r: u64) -> Result<CoverResult> {
    covering_number_with(a, r, DEFAULT_NODE_BUDGET)
}

/// Exact covering number with an explicit node budget.
pub fn covering_number_with(a: &IntSet, r: u64, node_budget: u64) -> Result<CoverResult> {
    let min = a.min().ok_or(Error::EmptySet)?;
    if r == 0 {
        return Err(Error::InvalidFold);
    }
    if r == 1 || a.len() == 1 {
        // rA = A + (r-1)a when A = {a}, and 1A = A + 0: one translate,
        // and no smaller cover exists.
        let w = i64::try_from((r as i128 - 1) * min as i128).map_err(|_| Error::Overflow("cover"))?;
        return Ok(CoverResult {
            covering_number: 1,
            witness: IntSet::singleton(w),
            nodes_explored: 0,
            optimal: true,
            universe_size: if a.len() == 1 { 1 } else { a.len() as u64 },
        });
    }
    let instance = CoverInstance::new(a, r)?;
    Solver::build(&instance, node_budget)?.solve()
}

/// Certificate check: does `X` witness `rA` being covered by `A + X`?
/// Recomputes both sides from scratch; it shares nothing with the
/// solver's search state.
pub fn is_approximate_group(a: &IntSet, r: u64, x: &IntSet) -> Result<bool> {
    if a.is_empty() || x.is_empty() {
        return Err(Error::EmptySet);
    }
    if r == 0 {
        return Err(Error::InvalidFold);
    }
    let folded = hfold(a, r)?;
    let covered = a.sumset(x)?;
    let all_covered = folded.iter().all(|v| covered.contains(v));
    Ok(all_covered)
}

/// Counting lower bound on the covering number: `|rA| >= r*m - r + 1`
/// always, each translate covers at most `m` elements, and sets that
/// are not progressions need at least `r` translates.
pub fn lower_bound(a: &IntSet, r: u64) -> Result<u64> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if r == 0 {
        return Err(Error::InvalidFold);
    }
    let m = a.len() as u64;
    if m < 2 {
        return Err(Error::InvalidSize);
    }
    let numer = r
        .checked_mul(m)
        .and_then(|rm| rm.checked_sub(r))
        .and_then(|v| v.checked_add(1))
        .ok_or(Error::Overflow("lower_bound"))?;
    let base = numer.div_ceil(m);
    if detect_ap(a)?.is_some() {
        Ok(base)
    } else {
        Ok(base.max(r))
    }
}

/// Exact covering number of any arithmetic progression of size `m`:
/// `ceil((r*m - r + 1) / m)`, independent of first term and common
/// difference.
pub fn ap_covering_number(m: u64, r: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::InvalidSize);
    }
    if r == 0 {
        return Err(Error::InvalidFold);
    }
    let numer = r
        .checked_mul(m)
        .and_then(|rm| rm.checked_sub(r))
        .and_then(|v| v.checked_add(1))
        .ok_or(Error::Overflow("ap_covering_number"))?;
    Ok(numer.div_ceil(m))
}

struct Solver {
    n: usize,
    words: usize,
    /// Kept candidate offsets, ascending, coverage-deduplicated.
    offsets: Vec<i64>,
    /// Per kept candidate: bitmask over universe indices it covers.
    masks: Vec<Vec<u64>>,
    /// Per universe index: kept candidates covering it, ascending.
    elem_cands: Vec<Vec<u32>>,
    /// `ceil(n / m)`: no translate covers more than `m` elements. The
    /// search stops early once the incumbent reaches this, so it must
    /// stay a bound that needs no theory beyond counting.
    root_lb: u64,
    budget: u64,
    nodes: u64,
}

impl Solver {
    fn build(instance: &CoverInstance, budget: u64) -> Result<Solver> {
        let uni: Vec<i64> = instance.universe.to_vec();
        let n = uni.len();
        let words = n.div_ceil(64);
        let m = instance.base.len() as u64;

        let index_of: HashMap<i64, u32> = instance
            .candidates
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, i as u32))
            .collect();
        let mut masks = vec![vec![0u64; words]; instance.candidates.len()];
        for (i, &u) in uni.iter().enumerate() {
            for a in instance.base.iter() {
                let x = ((u as i128) - (a as i128)) as i64;
                let ci = index_of[&x] as usize;
                masks[ci][i / 64] |= 1 << (i % 64);
            }
        }

        // Offsets with identical coverage are interchangeable; keep the
        // smallest, which also preserves lexicographic minimality of
        // the witness.
        let mut seen: HashMap<Vec<u64>, u32> = HashMap::new();
        let mut kept_offsets = Vec::new();
        let mut kept_masks: Vec<Vec<u64>> = Vec::new();
        let mut remap = vec![u32::MAX; instance.candidates.len()];
        for (ci, mask) in masks.into_iter().enumerate() {
            if let Some(&k) = seen.get(&mask) {
                remap[ci] = k;
            } else {
                let k = kept_offsets.len() as u32;
                seen.insert(mask.clone(), k);
                kept_offsets.push(instance.candidates[ci]);
                kept_masks.push(mask);
                remap[ci] = k;
            }
        }

        let mut elem_cands = vec![Vec::new(); n];
        for (i, &u) in uni.iter().enumerate() {
            for a in instance.base.iter() {
                let x = ((u as i128) - (a as i128)) as i64;
                let k = remap[index_of[&x] as usize];
                if !elem_cands[i].contains(&k) {
                    elem_cands[i].push(k);
                }
            }
            elem_cands[i].sort_unstable();
        }

        let root_lb = (n as u64).div_ceil(m);

        Ok(Solver {
            n,
            words,
            offsets: kept_offsets,
            masks: kept_masks,
            elem_cands,
            root_lb,
            budget,
            nodes: 0,
        })
    }

    fn solve(mut self) -> Result<CoverResult> {
        let full = self.full_mask();
        let greedy = self.greedy(&full);
        let mut best = greedy.len() as u64;
        if best > self.root_lb {
            self.optimize(&full, self.n, 0, &mut best)?;
        }
        let witness = self.lex_min_witness(best)?;
        Ok(CoverResult {
            covering_number: best,
            witness: IntSet::new(witness),
            nodes_explored: self.nodes,
            optimal: true,
            universe_size: self.n as u64,
        })
    }

    fn full_mask(&self) -> Vec<u64> {
        let mut mask = vec![u64::MAX; self.words];
        let used = self.n % 64;
        if used != 0 {
            *mask.last_mut().unwrap() = (1 << used) - 1;
        }
        mask
    }

    fn greedy(&self, full: &[u64]) -> Vec<u32> {
        let mut uncovered = full.to_vec();
        let mut left = self.n;
        let mut picked = Vec::new();
        while left > 0 {
            let mut best_ci = 0u32;
            let mut best_gain = 0usize;
            for (ci, mask) in self.masks.iter().enumerate() {
                let gain: usize = mask
                    .iter()
                    .zip(&uncovered)
                    .map(|(a, b)| (a & b).count_ones() as usize)
                    .sum();
                if gain > best_gain {
                    best_gain = gain;
                    best_ci = ci as u32;
                }
            }
            debug_assert!(best_gain > 0);
            left -= best_gain;
            for (w, m) in uncovered.iter_mut().zip(&self.masks[best_ci as usize]) {
                *w &= !m;
            }
            picked.push(best_ci);
        }
        picked
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(Error::BudgetExceeded { explored: self.nodes })
        } else {
            Ok(())
        }
    }

    /// Branch and bound for the optimal cover size; prunes any branch
    /// that cannot strictly beat `best`.
    fn optimize(&mut self, uncovered: &[u64], left: usize, chosen: u64, best: &mut u64) -> Result<()> {
        self.tick()?;
        if *best == self.root_lb {
            return Ok(());
        }
        if left == 0 {
            *best = (*best).min(chosen);
            return Ok(());
        }
        let mut cnt = Vec::new();
        let maxcov = self.coverage(uncovered, 0, &mut cnt);
        let lb = cover_bound(maxcov, &cnt, left);
        if chosen.saturating_add(lb) >= *best {
            return Ok(());
        }
        let Some(u) = self.pick_element(uncovered, &cnt) else {
            return Ok(());
        };
        for ci in self.branch_candidates(u, uncovered, &cnt) {
            let (child, child_left) = self.subtract(uncovered, ci as usize);
            self.optimize(&child, child_left, chosen + 1, best)?;
            if *best == self.root_lb || chosen.saturating_add(lb) >= *best {
                return Ok(());
            }
        }
        Ok(())
    }

    /// Finds the lexicographically smallest witness of size `target`
    /// by choosing each offset in ascending order and testing that the
    /// remainder stays coverable.
    fn lex_min_witness(&mut self, target: u64) -> Result<Vec<i64>> {
        let mut uncovered = self.full_mask();
        let mut left = self.n;
        let mut from = 0usize;
        let mut picked = Vec::with_capacity(target as usize);
        for slot in 0..target {
            let remaining = target - slot - 1;
            let mut hit = None;
            for ci in from..self.offsets.len() {
                if !intersects(&self.masks[ci], &uncovered) {
                    continue;
                }
                let (child, child_left) = self.subtract(&uncovered, ci);
                if child_left == 0 && remaining == 0 {
                    hit = Some((ci, child, child_left));
                    break;
                }
                if child_left > 0 && self.coverable(&child, child_left, remaining, ci + 1)? {
                    hit = Some((ci, child, child_left));
                    break;
                }
            }
            let (ci, child, child_left) =
                hit.expect("optimal size from phase one admits a witness");
            picked.push(self.offsets[ci]);
            uncovered = child;
            left = child_left;
            from = ci + 1;
        }
        debug_assert_eq!(left, 0);
        Ok(picked)
    }

    /// Decision search: can `uncovered` be covered by at most `budget`
    /// candidates with index >= `from`?
    fn coverable(&mut self, uncovered: &[u64], left: usize, budget: u64, from: usize) -> Result<bool> {
        self.tick()?;
        if left == 0 {
            return Ok(true);
        }
        if budget == 0 {
            return Ok(false);
        }
        let mut cnt = Vec::new();
        let maxcov = self.coverage(uncovered, from, &mut cnt);
        if cover_bound(maxcov, &cnt, left) > budget {
            return Ok(false);
        }
        let Some(u) = self.pick_element(uncovered, &cnt) else {
            return Ok(false);
        };
        for ci in self.branch_candidates(u, uncovered, &cnt) {
            let (child, child_left) = self.subtract(uncovered, ci as usize);
            if self.coverable(&child, child_left, budget - 1, from)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Remaining coverage of every candidate with index >= `from`
    /// against `uncovered`; returns the largest single coverage.
    fn coverage(&self, uncovered: &[u64], from: usize, cnt: &mut Vec<u32>) -> u32 {
        cnt.clear();
        cnt.resize(self.masks.len(), 0);
        let mut maxcov = 0;
        for ci in from..self.masks.len() {
            let c: u32 = self.masks[ci]
                .iter()
                .zip(uncovered)
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            cnt[ci] = c;
            maxcov = maxcov.max(c);
        }
        maxcov
    }

    /// The uncovered element coverable by the fewest still-live
    /// candidates (ties broken toward the smallest element), or `None`
    /// when some element has no live candidate left.
    fn pick_element(&self, uncovered: &[u64], cnt: &[u32]) -> Option<usize> {
        let mut best = None;
        let mut best_deg = usize::MAX;
        for (wi, &w) in uncovered.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let i = wi * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let deg = self.elem_cands[i].iter().filter(|&&c| cnt[c as usize] > 0).count();
                if deg == 0 {
                    return None;
                }
                if deg < best_deg {
                    best_deg = deg;
                    best = Some(i);
                    if deg == 1 {
                        return best;
                    }
                }
            }
        }
        best
    }

    /// Candidates worth branching on for element `u`: live ones,
    /// largest remaining coverage first, minus any whose remaining
    /// coverage sits inside an earlier kept candidate's. Swapping a
    /// dropped candidate for the one that covers it never grows a
    /// cover, so some optimal cover survives the filter.
    fn branch_candidates(&self, u: usize, uncovered: &[u64], cnt: &[u32]) -> Vec<u32> {
        let mut live: Vec<u32> =
            self.elem_cands[u].iter().copied().filter(|&c| cnt[c as usize] > 0).collect();
        live.sort_by(|&a, &b| cnt[b as usize].cmp(&cnt[a as usize]).then(a.cmp(&b)));
        let mut kept: Vec<u32> = Vec::with_capacity(live.len());
        'next: for &c in &live {
            for &k in &kept {
                if covers_within(&self.masks[k as usize], &self.masks[c as usize], uncovered) {
                    continue 'next;
                }
            }
            kept.push(c);
        }
        kept
    }

    fn subtract(&self, uncovered: &[u64], ci: usize) -> (Vec<u64>, usize) {
        let mut child = uncovered.to_vec();
        let mut left = 0usize;
        for (w, m) in child.iter_mut().zip(&self.masks[ci]) {
            *w &= !m;
            left += w.count_ones() as usize;
        }
        (child, left)
    }
}

fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

/// Whether `big` covers everything `small` covers within `within`.
fn covers_within(big: &[u64], small: &[u64], within: &[u64]) -> bool {
    small.iter().zip(big).zip(within).all(|((s, b), w)| s & w & !b == 0)
}

/// Fewest candidates that could possibly cover `left` elements: the
/// shortest prefix of coverages in decreasing order summing to at
/// least `left`. `u64::MAX` when even all of them fall short.
fn cover_bound(maxcov: u32, cnt: &[u32], left: usize) -> u64 {
    if maxcov == 0 {
        return u64::MAX;
    }
    let mut buckets = vec![0u64; maxcov as usize + 1];
    for &c in cnt {
        if c > 0 {
            buckets[c as usize] += 1;
        }
    }
    let mut need = left as u64;
    let mut k = 0u64;
    for c in (1..=maxcov as u64).rev() {
        let take = buckets[c as usize].min(need.div_ceil(c));
        need = need.saturating_sub(take * c);
        k += take;
        if need == 0 {
            return k;
        }
    }
    u64::MAX
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use std::collections::BTreeSet;

    fn set(elems: &[i64]) -> IntSet {
        IntSet::new(elems.to_vec())
    }

    /// Reference covering number: iterative deepening over plain
    /// element-driven enumeration, with no bounds, no greedy seeding,
    /// and no bitmask machinery.
    fn reference_covering_number(elems: &[i64], r: u64) -> u64 {
        fn rfold(elems: &[i64], r: u64) -> BTreeSet<i64> {
            fn rec(elems: &[i64], left: u64, start: usize, sum: i64, out: &mut BTreeSet<i64>) {
                if left == 0 {
                    out.insert(sum);
                    return;
                }
                for i in start..elems.len() {
                    rec(elems, left - 1, i, sum + elems[i], out);
                }
            }
            let mut out = BTreeSet::new();
            rec(elems, r, 0, 0, &mut out);
            out
        }
        fn decide(uncovered: &[i64], l: u64, a: &BTreeSet<i64>) -> bool {
            if uncovered.is_empty() {
                return true;
            }
            if l == 0 {
                return false;
            }
            let u = uncovered[0];
            for &ai in a {
                let x = u - ai;
                let rest: Vec<i64> =
                    uncovered.iter().copied().filter(|&v| !a.contains(&(v - x))).collect();
                if decide(&rest, l - 1, a) {
                    return true;
                }
            }
            false
        }
        let a: BTreeSet<i64> = elems.iter().copied().collect();
        let universe: Vec<i64> = rfold(elems, r).into_iter().collect();
        (1..).find(|&l| decide(&universe, l, &a)).unwrap()
    }

    #[test]
    fn covering_examples() {
        let r = covering_number(&set(&[0, 1]), 3).unwrap();
        assert_eq!(r.covering_number, 2);
        assert_eq!(r.witness, set(&[0, 2]));
        assert!(r.optimal);

        let r = covering_number(&set(&[0, 1, 2]), 4).unwrap();
        assert_eq!(r.covering_number, 3);

        let r = covering_number(&set(&[0, 1, 3]), 2).unwrap();
        assert_eq!(r.covering_number, 3);
        assert!(is_approximate_group(&set(&[0, 1, 3]), 2, &r.witness).unwrap());
    }

    #[test]
    fn witness_is_lexicographically_smallest() {
        // Enumerating sorted candidate subsets in lexicographic order
        // and taking the first cover of optimal size is the definition
        // the solver's two-phase search must reproduce.
        let cases = [(set(&[0, 1, 3]), 2u64), (set(&[0, 1]), 3), (set(&[0, 2, 3]), 2)];
        for (a, r) in cases {
            let result = covering_number(&a, r).unwrap();
            let instance = CoverInstance::new(&a, r).unwrap();
            let uni = instance.universe.to_vec();
            let l = result.covering_number as usize;
            let expected = instance
                .candidates
                .iter()
                .combinations(l)
                .find(|combo| {
                    uni.iter().all(|&u| combo.iter().any(|&&x| a.contains(u - x)))
                })
                .map(|combo| combo.into_iter().copied().collect::<Vec<_>>())
                .unwrap();
            assert_eq!(result.witness.to_vec(), expected, "A={a:?} r={r}");
        }
    }

    #[test]
    fn degenerate_cases_skip_the_search() {
        let r = covering_number(&set(&[4, 9, 11]), 1).unwrap();
        assert_eq!((r.covering_number, r.nodes_explored), (1, 0));
        assert_eq!(r.witness, set(&[0]));

        let r = covering_number(&set(&[7]), 5).unwrap();
        assert_eq!(r.covering_number, 1);
        assert_eq!(r.witness, set(&[28]));
        assert!(is_approximate_group(&set(&[7]), 5, &r.witness).unwrap());
    }

    #[test]
    fn instance_construction() {
        let inst = CoverInstance::new(&set(&[0, 1]), 2).unwrap();
        assert_eq!(inst.universe, set(&[0, 1, 2]));
        assert_eq!(inst.candidates, vec![-1, 0, 1, 2]);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let a = set(&[0, 1, 4, 9, 11]);
        match covering_number_with(&a, 3, 5) {
            Err(Error::BudgetExceeded { explored }) => assert!(explored > 5),
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn certificate_rejects_non_covers() {
        let a = set(&[0, 1, 3]);
        assert!(is_approximate_group(&a, 2, &set(&[0, 1, 3])).unwrap());
        assert!(!is_approximate_group(&a, 2, &set(&[0])).unwrap());
        assert!(!is_approximate_group(&a, 2, &set(&[100, 200, 300])).unwrap());
        assert!(is_approximate_group(&a, 1, &set(&[0])).unwrap());
        assert_eq!(is_approximate_group(&a, 0, &set(&[0])), Err(Error::InvalidFold));
        assert_eq!(
            is_approximate_group(&a, 2, &IntSet::empty()),
            Err(Error::EmptySet)
        );
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lower_bound(&set(&[0, 1]), 2).unwrap(), 2);
        assert_eq!(lower_bound(&set(&[0, 1, 2, 3]), 3).unwrap(), 3);
        assert_eq!(lower_bound(&set(&[0, 1, 3]), 5).unwrap(), 5);
        assert_eq!(lower_bound(&set(&[9]), 2), Err(Error::InvalidSize));
    }

    #[test]
    fn ap_closed_form_examples() {
        assert_eq!(ap_covering_number(2, 7).unwrap(), 4);
        assert_eq!(ap_covering_number(3, 4).unwrap(), 3);
        assert_eq!(ap_covering_number(100, 2).unwrap(), 2);
        assert_eq!(ap_covering_number(1, 2), Err(Error::InvalidSize));
        assert_eq!(ap_covering_number(5, 0), Err(Error::InvalidFold));
    }

    #[test]
    fn solver_matches_reference_on_small_sets() {
        let cases: &[&[i64]] = &[
            &[0, 1],
            &[0, 3],
            &[0, 1, 2],
            &[0, 1, 3],
            &[0, 2, 3],
            &[0, 2, 5],
            &[0, 1, 4, 6],
            &[0, 3, 5, 9],
            &[-4, 0, 1, 7],
            &[1, 3, 7],
        ];
        for elems in cases {
            let a = set(elems);
            for r in 1..=4 {
                let got = covering_number(&a, r).unwrap();
                let expected = reference_covering_number(elems, r);
                assert_eq!(got.covering_number, expected, "A={elems:?} r={r}");
                assert!(is_approximate_group(&a, r, &got.witness).unwrap());
                assert!(got.covering_number >= lower_bound(&a, r).unwrap());
            }
        }
    }
}
