//! Finite unions of closed intervals inside a bounded window `[0, window_hi]`.
//!
//! Every set handled by the covering scheme (uncovered sets, their shifts and
//! intersections) is stored in canonical form: sorted, pairwise disjoint,
//! separated by strictly positive gaps. Endpoints are plain `f64` values and
//! comparisons are exact.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{invalid, Result};

/// A closed interval `[lo, hi]` with `0 <= lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) {
            return invalid(format!("non-finite interval [{lo}, {hi}]"));
        }
        if lo < 0.0 {
            return invalid(format!("negative coordinate in [{lo}, {hi}]"));
        }
        if lo > hi {
            return invalid(format!("reversed interval [{lo}, {hi}]"));
        }
        Ok(Interval { lo, hi })
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi == self.lo
    }
}

/// Canonical finite union of closed intervals within `[0, window_hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSet {
    window_hi: f64,
    intervals: Vec<Interval>,
}

fn check_window(window_hi: f64) -> Result<()> {
    if !(window_hi.is_finite() && window_hi > 0.0) {
        return invalid(format!("window_hi must be positive and finite, got {window_hi}"));
    }
    Ok(())
}

/// Compensated (Neumaier) summation.
pub(crate) fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

impl IntervalSet {
    pub fn empty(window_hi: f64) -> Result<Self> {
        check_window(window_hi)?;
        Ok(IntervalSet { window_hi, intervals: Vec::new() })
    }

    /// The whole window `[0, window_hi]`.
    pub fn full(window_hi: f64) -> Result<Self> {
        check_window(window_hi)?;
        Ok(IntervalSet { window_hi, intervals: vec![Interval { lo: 0.0, hi: window_hi }] })
    }

    /// Sorts, clips to `[0, window_hi]` and merges overlapping or touching intervals.
    pub fn canonicalize(raw: &[Interval], window_hi: f64) -> Result<Self> {
        check_window(window_hi)?;
        for iv in raw {
            Interval::new(iv.lo, iv.hi)?;
        }
        let mut clipped: Vec<Interval> = raw
            .iter()
            .filter(|iv| iv.lo <= window_hi)
            .map(|iv| Interval { lo: iv.lo, hi: iv.hi.min(window_hi) })
            .collect();
        clipped.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        Ok(IntervalSet { window_hi, intervals: merge_sorted(clipped) })
    }

    /// Builds a set from `[lo, hi]` pairs, e.g. the JSON debug form.
    pub fn from_pairs(pairs: &[[f64; 2]], window_hi: f64) -> Result<Self> {
        let raw: Vec<Interval> = pairs.iter().map(|&[lo, hi]| Interval { lo, hi }).collect();
        Self::canonicalize(&raw, window_hi)
    }

    pub(crate) fn from_sorted_unchecked(intervals: Vec<Interval>, window_hi: f64) -> Self {
        IntervalSet { window_hi, intervals: merge_sorted(intervals) }
    }

    pub fn window_hi(&self) -> f64 {
        self.window_hi
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.intervals.iter().map(|iv| [iv.lo, iv.hi]).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("interval pairs always serialize")
    }

    pub fn from_json(json: &str, window_hi: f64) -> Result<Self> {
        let pairs: Vec<[f64; 2]> = serde_json::from_str(json)
            .map_err(|e| crate::Error::InvalidInput(format!("bad interval json: {e}")))?;
        Self::from_pairs(&pairs, window_hi)
    }

    /// Closure of `[0, window_hi] \ self`.
    pub fn complement_within(&self, window_hi: f64) -> Result<Self> {
        check_window(window_hi)?;
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        let mut cursor = 0.0_f64;
        for iv in &self.intervals {
            if iv.lo >= window_hi {
                break;
            }
            if iv.lo > cursor {
                out.push(Interval { lo: cursor, hi: iv.lo });
            }
            cursor = cursor.max(iv.hi);
        }
        if cursor < window_hi {
            out.push(Interval { lo: cursor, hi: window_hi });
        }
        Ok(IntervalSet { window_hi, intervals: out })
    }

    pub fn complement(&self) -> Self {
        self.complement_within(self.window_hi).expect("own window is valid")
    }

    /// Intersection of two sets sharing a window.
    pub fn intersect(&self, other: &IntervalSet) -> Result<Self> {
        if self.window_hi != other.window_hi {
            return invalid(format!(
                "window mismatch: {} vs {}",
                self.window_hi, other.window_hi
            ));
        }
        let (a, b) = (&self.intervals, &other.intervals);
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let lo = a[i].lo.max(b[j].lo);
            let hi = a[i].hi.min(b[j].hi);
            if lo <= hi {
                out.push(Interval { lo, hi });
            }
            if a[i].hi < b[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        Ok(IntervalSet::from_sorted_unchecked(out, self.window_hi))
    }

    /// Canonical intersection of several sets; all windows must agree.
    pub fn intersect_many<'a, I>(sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a IntervalSet>,
    {
        let mut iter = sets.into_iter();
        let first = match iter.next() {
            Some(s) => s.clone(),
            None => return invalid("intersect_many needs at least one set"),
        };
        iter.try_fold(first, |acc, s| acc.intersect(s))
    }

    /// Lebesgue measure of `self ∩ [0, t]`.
    pub fn measure_upto(&self, t: f64) -> Result<f64> {
        if !(0.0..=self.window_hi).contains(&t) {
            return invalid(format!("t = {t} outside window [0, {}]", self.window_hi));
        }
        Ok(self.measure_upto_unchecked(t))
    }

    pub(crate) fn measure_upto_unchecked(&self, t: f64) -> f64 {
        neumaier_sum(
            self.intervals
                .iter()
                .take_while(|iv| iv.lo < t)
                .map(|iv| iv.hi.min(t) - iv.lo),
        )
    }

    pub fn measure(&self) -> f64 {
        neumaier_sum(self.intervals.iter().map(Interval::len))
    }

    /// Translates by `v >= 0`, dropping whatever leaves the window.
    pub fn shift(&self, v: f64) -> Result<Self> {
        if !(v.is_finite() && v >= 0.0) {
            return invalid(format!("shift must be nonnegative, got {v}"));
        }
        let w = self.window_hi;
        let intervals = self
            .intervals
            .iter()
            .map(|iv| Interval { lo: iv.lo + v, hi: (iv.hi + v).min(w) })
            .take_while(|iv| iv.lo <= w)
            .collect();
        Ok(IntervalSet { window_hi: w, intervals })
    }

    /// Minkowski sum with `[-r/2, r/2]`, clipped to the window.
    pub fn dilate(&self, r: f64) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0) {
            return invalid(format!("dilation radius must be nonnegative, got {r}"));
        }
        let half = 0.5 * r;
        let w = self.window_hi;
        let grown = self
            .intervals
            .iter()
            .map(|iv| Interval { lo: (iv.lo - half).max(0.0), hi: (iv.hi + half).min(w) })
            .collect();
        Ok(IntervalSet::from_sorted_unchecked(grown, w))
    }

    /// `self ∩ [0, t]`, keeping the window.
    pub fn restrict_upto(&self, t: f64) -> Result<Self> {
        if !(0.0..=self.window_hi).contains(&t) {
            return invalid(format!("t = {t} outside window [0, {}]", self.window_hi));
        }
        let intervals = self
            .intervals
            .iter()
            .take_while(|iv| iv.lo <= t)
            .map(|iv| Interval { lo: iv.lo, hi: iv.hi.min(t) })
            .collect();
        Ok(IntervalSet { window_hi: self.window_hi, intervals })
    }

    pub fn contains(&self, x: f64) -> bool {
        let idx = self.intervals.partition_point(|iv| iv.hi < x);
        self.intervals.get(idx).is_some_and(|iv| iv.lo <= x)
    }

    /// Exact containment test against another canonical set.
    pub fn is_subset_of(&self, other: &IntervalSet) -> bool {
        let mut j = 0;
        for iv in &self.intervals {
            while j < other.intervals.len() && other.intervals[j].hi < iv.lo {
                j += 1;
            }
            match other.intervals.get(j) {
                Some(o) if o.lo <= iv.lo && iv.hi <= o.hi => {}
                _ => return false,
            }
        }
        true
    }

    /// Largest point of the set, if any.
    pub fn sup(&self) -> Option<f64> {
        self.intervals.last().map(|iv| iv.hi)
    }

    /// Smallest point of the set, if any.
    pub fn inf(&self) -> Option<f64> {
        self.intervals.first().map(|iv| iv.lo)
    }
}

fn merge_sorted(sorted: Vec<Interval>) -> Vec<Interval> {
    let mut out: Vec<Interval> = Vec::with_capacity(sorted.len());
    for iv in sorted {
        match out.last_mut() {
            Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
            _ => out.push(iv),
        }
    }
    out
}

impl Serialize for IntervalSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.intervals.len()))?;
        for iv in &self.intervals {
            seq.serialize_element(&[iv.lo, iv.hi])?;
        }
        seq.end()
    }
}
