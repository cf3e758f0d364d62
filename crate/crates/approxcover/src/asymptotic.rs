//! Asymptotic covering behavior: for every finite set `A` with at
//! least two elements there is a fold count past which the covering
//! number of `hA` by translates of `hA` stops changing, and the
//! limiting value is determined entirely by the normal form of `A`.
//!
//! Writing `B = (A - min A) / gcd` for the normal form, the limit
//! equals `r` exactly when both endpoint gaps of `B` are 1, that is,
//! when the original gaps `a_2 - a_1` and `a_m - a_{m-1}` both equal
//! the gcd of all the gaps. Otherwise the limit is `r + 1`.

use serde::Serialize;

use crate::covering::covering_number_with;
use crate::error::{Error, Result};
use crate::exec::{map_ordered, Parallelism};
use crate::intset::IntSet;
use crate::sumsets::{detect_ap, hfold_upto};

/// A set rewritten as `(A - offset) / scale` so that it starts at 0
/// and its elements are coprime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub normalized: IntSet,
    pub offset: i64,
    pub scale: i64,
}

/// Rewrites `a` in normal form. Singletons normalize to `{0}` with
/// scale 1.
pub fn normalize(a: &IntSet) -> Result<NormalForm> {
    let min = a.min().ok_or(Error::EmptySet)?;
    let mut g: i128 = 0;
    for e in a.iter() {
        g = num_integer::gcd(g, (e as i128) - (min as i128));
    }
    if g == 0 {
        return Ok(NormalForm { normalized: IntSet::singleton(0), offset: min, scale: 1 });
    }
    let mut elems = Vec::with_capacity(a.len());
    for e in a.iter() {
        let v = ((e as i128) - (min as i128)) / g;
        elems.push(i64::try_from(v).map_err(|_| Error::Overflow("normalize"))?);
    }
    let scale = i64::try_from(g).map_err(|_| Error::Overflow("normalize"))?;
    Ok(NormalForm { normalized: IntSet::new(elems), offset: min, scale })
}

impl NormalForm {
    /// Inverts the normalization: `normalized * scale + offset`.
    pub fn reconstruct(&self) -> Result<IntSet> {
        self.normalized.dilate(self.scale)?.translate(self.offset)
    }
}

/// Whether both endpoint gaps equal the gcd of all the gaps: on the
/// normal form, the second element is 1 and the last two elements are
/// consecutive. This is the exact dividing line between limiting
/// covering number `r` and `r + 1`.
pub fn endpoint_gap_condition(a: &IntSet) -> Result<bool> {
    let nf = normalize(a)?;
    let b: Vec<i64> = nf.normalized.to_vec();
    let m = b.len();
    if m < 2 {
        return Err(Error::InvalidSize);
    }
    Ok(b[1] == 1 && b[m - 1] - b[m - 2] == 1)
}

/// The two possible limiting values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymptoticForm {
    R,
    RPlusOne,
}

impl AsymptoticForm {
    pub fn value(self, r: u64) -> u64 {
        match self {
            AsymptoticForm::R => r,
            AsymptoticForm::RPlusOne => r + 1,
        }
    }
}

/// Limiting covering number of `hA` for large `h`.
pub fn asymptotic_covering_number(a: &IntSet, r: u64) -> Result<u64> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if r == 0 {
        return Err(Error::InvalidFold);
    }
    if r == 1 {
        return Ok(1);
    }
    if a.len() < 2 {
        return Err(Error::InvalidSize);
    }
    let form = if endpoint_gap_condition(a)? { AsymptoticForm::R } else { AsymptoticForm::RPlusOne };
    Ok(form.value(r))
}

/// How the decision "is `hA` eventually a progression-like cover
/// target" was reached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AsymptoticReport {
    pub condition_holds: bool,
    pub form: AsymptoticForm,
    /// Fold count from which the dilated iterates are guaranteed to be
    /// progressions, when the condition holds: `max B - 2`, clamped to
    /// at least 1.
    pub theoretical_threshold: Option<i64>,
    /// First fold in the scanned window from which every iterate in
    /// the window is a progression.
    pub empirical_threshold: Option<u64>,
    pub window: (u64, u64),
}

/// Decides whether iterated sumsets of `a` are eventually arithmetic
/// progressions, scanning a default window wide enough to see the
/// theoretical threshold.
pub fn is_asymptotic_ap(a: &IntSet) -> Result<AsymptoticReport> {
    let nf = normalize(a)?;
    let b = nf.normalized.max().ok_or(Error::EmptySet)?;
    let hi = (b as u64 + 4).max(8);
    is_asymptotic_ap_with(a, (1, hi))
}

/// Same decision over an explicit window of fold counts.
pub fn is_asymptotic_ap_with(a: &IntSet, window: (u64, u64)) -> Result<AsymptoticReport> {
    if a.len() < 2 {
        return Err(Error::InvalidSize);
    }
    let (lo, hi) = window;
    if lo == 0 || hi < lo {
        return Err(Error::InvalidFold);
    }
    let condition_holds = endpoint_gap_condition(a)?;
    let form = if condition_holds { AsymptoticForm::R } else { AsymptoticForm::RPlusOne };
    let nf = normalize(a)?;
    let b = nf.normalized.max().unwrap();

    let folds = hfold_upto(&nf.normalized, hi)?;
    let mut empirical_threshold = None;
    for h in (lo..=hi).rev() {
        if detect_ap(&folds[(h - 1) as usize])?.is_some() {
            empirical_threshold = Some(h);
        } else {
            break;
        }
    }

    let theoretical_threshold = if condition_holds { Some((b - 2).max(1)) } else { None };
    Ok(AsymptoticReport { condition_holds, form, theoretical_threshold, empirical_threshold, window })
}

/// One fold count in a stabilization scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizationRow {
    pub h: u64,
    pub size: u64,
    pub is_ap: bool,
    pub covering_number: u64,
}

/// Outcome of scanning `C_r(hA)` over a window of fold counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizationOutcome {
    pub rows: Vec<StabilizationRow>,
    /// Value of the trailing constant run.
    pub tail_value: u64,
    /// First fold count of the trailing constant run.
    pub tail_start: u64,
    /// Whether the tail value equals the closed-form limit.
    pub matches_closed_form: bool,
    /// Whether every row with `h (m-1) + 2 > r` has covering number at
    /// least `r`.
    pub theorem_bound_holds: bool,
}

/// Computes `C_r(hA)` for every `h` in `window` and reports where the
/// values stabilize. Rows are computed independently, so the scan
/// parallelizes cleanly.
pub fn stabilization_check(
    a: &IntSet,
    r: u64,
    window: (u64, u64),
    mode: Parallelism,
    node_budget: u64,
) -> Result<StabilizationOutcome> {
    let (lo, hi) = window;
    if lo == 0 || hi < lo {
        return Err(Error::InvalidFold);
    }
    if a.len() < 2 {
        return Err(Error::InvalidSize);
    }
    let folds = hfold_upto(a, hi)?;
    let iterates: Vec<(u64, IntSet)> =
        (lo..=hi).map(|h| (h, folds[(h - 1) as usize].clone())).collect();
    let rows: Vec<StabilizationRow> = map_ordered(
        mode,
        iterates,
        |(h, iterate)| -> Result<StabilizationRow> {
            let is_ap = detect_ap(&iterate)?.is_some();
            let result = covering_number_with(&iterate, r, node_budget)?;
            Ok(StabilizationRow {
                h,
                size: iterate.len() as u64,
                is_ap,
                covering_number: result.covering_number,
            })
        },
    )
    .into_iter()
    .collect::<Result<_>>()?;

    let tail_value = rows.last().unwrap().covering_number;
    let tail_start = rows
        .iter()
        .rev()
        .take_while(|row| row.covering_number == tail_value)
        .last()
        .unwrap()
        .h;
    let closed_form = asymptotic_covering_number(a, r)?;
    let m = a.len() as u64;
    let theorem_bound_holds = rows.iter().all(|row| {
        let product = (row.h as u128) * ((m - 1) as u128) + 2;
        product <= r as u128 || row.covering_number >= r
    });
    Ok(StabilizationOutcome {
        rows,
        tail_value,
        tail_start,
        matches_closed_form: tail_value == closed_form,
        theorem_bound_holds,
    })
}

/// Fold threshold and interval anchors describing the long-run shape
/// of iterated sumsets of a normal-form set: for every `h` at or above
/// `h0`, the iterate splits into a fixed lower fringe below `c`, the
/// full interval `[c, h*max - dprime]`, and a fixed upper fringe at
/// fixed distances from `h*max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StructureConstants {
    pub h0: u64,
    pub c: u64,
    pub dprime: u64,
}

/// Measures the structure constants empirically: reads the fringe
/// decomposition off the highest scanned fold, then walks down to the
/// smallest fold where the same decomposition (same anchors, same
/// fringes, nonempty interval) still holds. Requires a normal-form set
/// (starts at 0, coprime, size at least 2).
pub fn structure_constants(a: &IntSet, scan_hi: u64) -> Result<StructureConstants> {
    let nf = normalize(a)?;
    if &nf.normalized != a {
        return Err(Error::NotNormalForm);
    }
    if a.len() < 2 {
        return Err(Error::InvalidSize);
    }
    if scan_hi < 2 {
        return Err(Error::NoStabilization);
    }
    let max = a.max().unwrap() as u64;
    let folds = hfold_upto(a, scan_hi)?;

    let shape = match decompose(folds.last().unwrap(), scan_hi * max) {
        Some(shape) => shape,
        None => return Err(Error::NoStabilization),
    };
    let mut h0 = scan_hi;
    for h in (1..scan_hi).rev() {
        if shape.holds_at(&folds[(h - 1) as usize], h * max) {
            h0 = h;
        } else {
            break;
        }
    }
    // A decomposition seen only at the top fold has no confirmation
    // that it persists.
    if h0 == scan_hi {
        return Err(Error::NoStabilization);
    }
    Ok(StructureConstants { h0, c: shape.c, dprime: shape.dprime })
}

struct FringeShape {
    c: u64,
    dprime: u64,
    /// Elements below `c`, ascending.
    lower: Vec<i64>,
    /// Distances from the top for elements above the interval, ascending.
    upper: Vec<u64>,
}

/// Reads the decomposition off one iterate: the strictly longest run
/// of consecutive integers is the interval, everything below it is the
/// lower fringe, everything above is the upper fringe recorded as
/// distances from the top. `None` when no run strictly dominates.
fn decompose(iterate: &IntSet, top: u64) -> Option<FringeShape> {
    let elems: Vec<i64> = iterate.to_vec();
    debug_assert_eq!(elems.first(), Some(&0));
    debug_assert_eq!(elems.last(), Some(&(top as i64)));
    let mut runs: Vec<(i64, i64)> = Vec::new();
    let mut start = elems[0];
    let mut prev = elems[0];
    for &v in &elems[1..] {
        if v != prev + 1 {
            runs.push((start, prev));
            start = v;
        }
        prev = v;
    }
    runs.push((start, prev));

    let mut best = 0usize;
    let mut tied = false;
    for (i, run) in runs.iter().enumerate().skip(1) {
        let len = run.1 - run.0 + 1;
        let best_len = runs[best].1 - runs[best].0 + 1;
        match len.cmp(&best_len) {
            std::cmp::Ordering::Greater => {
                best = i;
                tied = false;
            }
            std::cmp::Ordering::Equal => tied = true,
            std::cmp::Ordering::Less => {}
        }
    }
    if tied {
        return None;
    }
    let (c, end) = runs[best];
    let lower = elems.iter().copied().filter(|&v| v < c).collect();
    let upper = elems
        .iter()
        .rev()
        .map_while(|&v| if v > end { Some((top as i64 - v) as u64) } else { None })
        .collect();
    Some(FringeShape { c: c as u64, dprime: (top as i64 - end) as u64, lower, upper })
}

impl FringeShape {
    /// Does `iterate` equal `lower + [c, top - dprime] + (top - upper)`
    /// with a nonempty interval?
    fn holds_at(&self, iterate: &IntSet, top: u64) -> bool {
        let Some(interval_top) = top.checked_sub(self.c + self.dprime) else {
            return false;
        };
        let lo = self.c as i64;
        let hi = lo + interval_top as i64;
        let mut expected = self.lower.clone();
        expected.extend(lo..=hi);
        expected.extend(self.upper.iter().rev().map(|&u| (top - u) as i64));
        iterate.to_vec() == expected
    }
}
