//! Eventually periodic lamp configurations over the integers.
//!
//! A sequence assigns a state in `0..q` to every integer position. In one
//! direction it is eventually periodic (a finite word repeating forever); in
//! the other it is eventually zero. The canonical form pins a unique
//! representation: the periodic tail starts as early as possible, its word is
//! primitive, an all-zero tail is stored as the empty word, and the finite
//! head stores only nonzero states outside the tail region. Equality of
//! canonical forms is therefore equality of the underlying sequences.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    /// Periodic toward +∞, zero toward -∞.
    TowardPlus,
    /// Periodic toward -∞, zero toward +∞.
    TowardMinus,
}

/// Where the nonzero support ends on one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportBound {
    Empty,
    At(i64),
    Unbounded,
}

impl SupportBound {
    pub fn finite(self) -> Option<i64> {
        match self {
            SupportBound::At(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeriodicError {
    StateOutOfRange { state: u8, q: u8 },
    HeadInsideTail { position: i64 },
}

impl fmt::Display for PeriodicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PeriodicError::StateOutOfRange { state, q } => {
                write!(f, "state {state} out of range for q = {q}")
            }
            PeriodicError::HeadInsideTail { position } => {
                write!(
                    f,
                    "head entry at {position} lies inside the periodic tail region"
                )
            }
        }
    }
}

impl core::error::Error for PeriodicError {}

/// Canonical toward-plus representation; `TowardMinus` sequences store their
/// reflection, so all the interesting logic lives here.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct RawSeq {
    head: BTreeMap<i64, u8>,
    tail: Vec<u8>,
    tail_from: i64,
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

fn primitive_root(word: &[u8]) -> Vec<u8> {
    let len = word.len();
    for div in 1..=len {
        if !len.is_multiple_of(div) {
            continue;
        }
        if word.chunks(div).all(|chunk| chunk == &word[..div]) {
            return word[..div].to_vec();
        }
    }
    word.to_vec()
}

impl RawSeq {
    /// Canonicalizes: `explicit` gives states below `boundary`, `word` repeats
    /// on `[boundary, ∞)`. Explicit keys must already sit below `boundary`.
    pub(crate) fn build(mut explicit: BTreeMap<i64, u8>, word: Vec<u8>, boundary: i64) -> RawSeq {
        explicit.retain(|_, &mut v| v != 0);
        if word.iter().all(|&c| c == 0) {
            return RawSeq {
                head: explicit,
                tail: Vec::new(),
                tail_from: 0,
            };
        }
        debug_assert!(explicit.keys().all(|&k| k < boundary));
        let mut word = primitive_root(&word);
        let mut boundary = boundary;
        loop {
            let candidate = *word.last().unwrap();
            let below = boundary - 1;
            if explicit.get(&below).copied().unwrap_or(0) != candidate {
                break;
            }
            explicit.remove(&below);
            word.rotate_right(1);
            boundary = below;
        }
        RawSeq {
            head: explicit,
            tail: word,
            tail_from: boundary,
        }
    }

    pub(crate) fn zero() -> RawSeq {
        RawSeq {
            head: BTreeMap::new(),
            tail: Vec::new(),
            tail_from: 0,
        }
    }

    pub(crate) fn get(&self, p: i64) -> u8 {
        if let Some(&v) = self.head.get(&p) {
            return v;
        }
        if !self.tail.is_empty() && p >= self.tail_from {
            let idx = (p - self.tail_from).rem_euclid(self.tail.len() as i64) as usize;
            return self.tail[idx];
        }
        0
    }

    pub(crate) fn shift(&self, delta: i64) -> RawSeq {
        RawSeq {
            head: self.head.iter().map(|(&k, &v)| (k + delta, v)).collect(),
            tail: self.tail.clone(),
            tail_from: if self.tail.is_empty() {
                0
            } else {
                self.tail_from + delta
            },
        }
    }

    pub(crate) fn support_min(&self) -> SupportBound {
        if let Some((&k, _)) = self.head.iter().next() {
            return SupportBound::At(k);
        }
        if !self.tail.is_empty() {
            let first = self.tail.iter().position(|&c| c != 0).unwrap();
            return SupportBound::At(self.tail_from + first as i64);
        }
        SupportBound::Empty
    }

    pub(crate) fn support_max(&self) -> SupportBound {
        if !self.tail.is_empty() {
            return SupportBound::Unbounded;
        }
        match self.head.iter().next_back() {
            Some((&k, _)) => SupportBound::At(k),
            None => SupportBound::Empty,
        }
    }

    /// Replaces the states at the given positions (a zero replacement clears
    /// the position) and recanonicalizes.
    pub(crate) fn with_replacements(&self, replacements: &BTreeMap<i64, u8>) -> RawSeq {
        if self.tail.is_empty() {
            let mut explicit = self.head.clone();
            for (&p, &v) in replacements {
                if v == 0 {
                    explicit.remove(&p);
                } else {
                    explicit.insert(p, v);
                }
            }
            return RawSeq::build(explicit, Vec::new(), i64::MAX);
        }
        let len = self.tail.len() as i64;
        let max_rep = replacements.keys().next_back().copied().unwrap_or(i64::MIN);
        let boundary = self.tail_from.max(max_rep + 1);
        let shift = (boundary - self.tail_from).rem_euclid(len) as usize;
        let mut word = self.tail.clone();
        word.rotate_left(shift);
        let mut explicit: BTreeMap<i64, u8> = self
            .head
            .iter()
            .map(|(&k, &v)| (k, v))
            .chain((self.tail_from..boundary).map(|p| (p, self.get(p))))
            .collect();
        for (&p, &v) in replacements {
            explicit.insert(p, v);
        }
        RawSeq::build(explicit, word, boundary)
    }

    /// Smallest position where the sequences differ, or `None` when equal.
    pub(crate) fn first_difference(a: &RawSeq, b: &RawSeq) -> Option<i64> {
        let period = lcm(a.tail.len().max(1) as u64, b.tail.len().max(1) as u64) as i64;
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for s in [a, b] {
            if let Some((&k, _)) = s.head.iter().next() {
                lo = lo.min(k);
            }
            if let Some((&k, _)) = s.head.iter().next_back() {
                hi = hi.max(k + 1);
            }
            if !s.tail.is_empty() {
                lo = lo.min(s.tail_from);
                hi = hi.max(s.tail_from);
            }
        }
        if lo == i64::MAX {
            return None;
        }
        let hi = hi.max(lo) + period;
        (lo..hi).find(|&p| a.get(p) != b.get(p))
    }
}

/// An eventually periodic state assignment `ℤ -> {0, …, q-1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventuallyPeriodic {
    orient: Orientation,
    raw: RawSeq,
}

impl EventuallyPeriodic {
    pub fn zero(orient: Orientation) -> Self {
        EventuallyPeriodic {
            orient,
            raw: RawSeq::zero(),
        }
    }

    /// Builds from literal parts and canonicalizes. For `TowardPlus` the tail
    /// covers `[tail_from, ∞)` indexed by `(p - tail_from) mod len`; for
    /// `TowardMinus` it covers `(-∞, tail_from]` indexed by
    /// `(tail_from - p) mod len`. Head entries inside the tail region are
    /// rejected as ambiguous.
    pub fn new(
        orient: Orientation,
        head: BTreeMap<i64, u8>,
        tail: Vec<u8>,
        tail_from: i64,
        q: u8,
    ) -> Result<Self, PeriodicError> {
        for &state in head.values().chain(tail.iter()) {
            if state >= q {
                return Err(PeriodicError::StateOutOfRange { state, q });
            }
        }
        if !tail.iter().all(|&c| c == 0) {
            for &p in head.keys() {
                let inside = match orient {
                    Orientation::TowardPlus => p >= tail_from,
                    Orientation::TowardMinus => p <= tail_from,
                };
                if inside {
                    return Err(PeriodicError::HeadInsideTail { position: p });
                }
            }
        }
        let raw = match orient {
            Orientation::TowardPlus => RawSeq::build(head, tail, tail_from),
            Orientation::TowardMinus => RawSeq::build(
                head.into_iter().map(|(p, v)| (-p, v)).collect(),
                tail,
                -tail_from,
            ),
        };
        Ok(EventuallyPeriodic { orient, raw })
    }

    pub(crate) fn from_raw(orient: Orientation, raw: RawSeq) -> Self {
        EventuallyPeriodic { orient, raw }
    }

    pub(crate) fn raw(&self) -> &RawSeq {
        &self.raw
    }

    pub fn orientation(&self) -> Orientation {
        self.orient
    }

    pub fn get(&self, p: i64) -> u8 {
        match self.orient {
            Orientation::TowardPlus => self.raw.get(p),
            Orientation::TowardMinus => self.raw.get(-p),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.raw.head.is_empty() && self.raw.tail.is_empty()
    }

    pub fn head_literal(&self) -> BTreeMap<i64, u8> {
        match self.orient {
            Orientation::TowardPlus => self.raw.head.clone(),
            Orientation::TowardMinus => self.raw.head.iter().map(|(&k, &v)| (-k, v)).collect(),
        }
    }

    pub fn tail_literal(&self) -> &[u8] {
        &self.raw.tail
    }

    pub fn tail_from_literal(&self) -> i64 {
        match self.orient {
            Orientation::TowardPlus => self.raw.tail_from,
            Orientation::TowardMinus => {
                if self.raw.tail.is_empty() {
                    0
                } else {
                    -self.raw.tail_from
                }
            }
        }
    }

    /// Shifts every position by `delta` (the `t`-action on configurations).
    pub fn shift(&self, delta: i64) -> Self {
        let raw = match self.orient {
            Orientation::TowardPlus => self.raw.shift(delta),
            Orientation::TowardMinus => self.raw.shift(-delta),
        };
        EventuallyPeriodic {
            orient: self.orient,
            raw,
        }
    }

    pub fn support_min(&self) -> SupportBound {
        match self.orient {
            Orientation::TowardPlus => self.raw.support_min(),
            Orientation::TowardMinus => reflect_bound(self.raw.support_max()),
        }
    }

    pub fn support_max(&self) -> SupportBound {
        match self.orient {
            Orientation::TowardPlus => self.raw.support_max(),
            Orientation::TowardMinus => reflect_bound(self.raw.support_min()),
        }
    }

    /// Replaces states at the given literal positions and recanonicalizes.
    pub fn with_replacements(&self, replacements: &BTreeMap<i64, u8>) -> Self {
        let raw = match self.orient {
            Orientation::TowardPlus => self.raw.with_replacements(replacements),
            Orientation::TowardMinus => self
                .raw
                .with_replacements(&replacements.iter().map(|(&p, &v)| (-p, v)).collect()),
        };
        EventuallyPeriodic {
            orient: self.orient,
            raw,
        }
    }

    /// Position of the difference nearest the finitely-supported side
    /// (minimal for `TowardPlus`, maximal for `TowardMinus`); `None` when the
    /// sequences are equal. Both arguments must share an orientation.
    pub fn first_difference(a: &Self, b: &Self) -> Option<i64> {
        assert_eq!(a.orient, b.orient, "orientations must match");
        let raw = RawSeq::first_difference(&a.raw, &b.raw)?;
        Some(match a.orient {
            Orientation::TowardPlus => raw,
            Orientation::TowardMinus => -raw,
        })
    }
}

fn reflect_bound(b: SupportBound) -> SupportBound {
    match b {
        SupportBound::At(p) => SupportBound::At(-p),
        other => other,
    }
}

impl fmt::Display for EventuallyPeriodic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (p, v)) in self.head_literal().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}:{v}")?;
        }
        write!(f, "}}")?;
        if !self.raw.tail.is_empty() {
            let dir = match self.orient {
                Orientation::TowardPlus => "+",
                Orientation::TowardMinus => "-",
            };
            write!(
                f,
                " then {:?} from {} toward {dir}∞",
                self.raw.tail,
                self.tail_from_literal()
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn plus(head: &[(i64, u8)], tail: &[u8], from: i64) -> EventuallyPeriodic {
        EventuallyPeriodic::new(
            Orientation::TowardPlus,
            head.iter().copied().collect(),
            tail.to_vec(),
            from,
            4,
        )
        .unwrap()
    }

    #[test]
    fn canonicalization_examples() {
        // All-zero tail collapses to the empty word.
        let a = plus(&[(2, 1)], &[0, 0], 5);
        assert_eq!(a.tail_literal(), &[] as &[u8]);
        assert_eq!(a.tail_from_literal(), 0);
        assert_eq!(a.get(2), 1);
        assert_eq!(a.get(5), 0);

        // Non-primitive words reduce, and the zero at -1 is absorbed.
        let b = plus(&[], &[1, 0, 1, 0], 0);
        assert_eq!(b.tail_literal(), &[0, 1]);
        assert_eq!(b.tail_from_literal(), -1);
        assert_eq!(b.get(0), 1);
        assert_eq!(b.get(-1), 0);
        assert_eq!(b.get(-2), 0);

        // The tail absorbs matching head entries and leading zeros.
        let c = plus(&[(4, 1)], &[1], 5);
        assert_eq!(c.tail_from_literal(), 4);
        assert!(c.head_literal().is_empty());
        let d = plus(&[], &[1, 0, 0], 6);
        assert_eq!(d.get(6), 1);
        // positions 4, 5 are zero, so the word rotates down to 4.
        assert_eq!(d.tail_from_literal(), 4);
        assert_eq!(d.tail_literal(), &[0, 0, 1]);
        assert_eq!(d.get(4), 0);
        assert_eq!(d.get(7), 0);
        assert_eq!(d.get(9), 1);
    }

    #[test]
    fn minus_orientation_mirrors() {
        let m = EventuallyPeriodic::new(
            Orientation::TowardMinus,
            [(5, 2)].into_iter().collect(),
            alloc::vec![1, 0],
            3,
            4,
        )
        .unwrap();
        assert_eq!(m.get(5), 2);
        assert_eq!(m.get(3), 1);
        assert_eq!(m.get(2), 0);
        assert_eq!(m.get(1), 1);
        assert_eq!(m.get(4), 0);
        assert_eq!(m.support_max(), SupportBound::At(5));
        assert_eq!(m.support_min(), SupportBound::Unbounded);
        let shifted = m.shift(2);
        assert_eq!(shifted.get(7), 2);
        assert_eq!(shifted.get(5), 1);
    }

    #[test]
    fn head_inside_tail_rejected() {
        let err = EventuallyPeriodic::new(
            Orientation::TowardPlus,
            [(6, 1)].into_iter().collect(),
            alloc::vec![1],
            5,
            2,
        );
        assert_eq!(err, Err(PeriodicError::HeadInsideTail { position: 6 }));
        let err = EventuallyPeriodic::new(
            Orientation::TowardPlus,
            [(0, 3)].into_iter().collect(),
            alloc::vec![],
            0,
            2,
        );
        assert_eq!(err, Err(PeriodicError::StateOutOfRange { state: 3, q: 2 }));
    }

    #[test]
    fn replacements_and_differences() {
        let a = plus(&[], &[1], 0); // all ones from 0
        let b = a.with_replacements(&[(3, 0)].into_iter().collect());
        assert_eq!(b.get(3), 0);
        assert_eq!(b.get(2), 1);
        assert_eq!(b.get(4), 1);
        assert_eq!(EventuallyPeriodic::first_difference(&a, &b), Some(3));
        assert_eq!(EventuallyPeriodic::first_difference(&a, &a), None);

        // Restoring the replaced state recanonicalizes to the original.
        let c = b.with_replacements(&[(3, 1)].into_iter().collect());
        assert_eq!(c, a);

        let zero = EventuallyPeriodic::zero(Orientation::TowardPlus);
        assert_eq!(EventuallyPeriodic::first_difference(&a, &zero), Some(0));
    }

    proptest! {
        /// Rebuilding from any window split yields the same canonical form.
        #[test]
        fn canonical_form_is_split_independent(
            head in proptest::collection::btree_map(-6i64..6, 0u8..3, 0..4),
            tail in proptest::collection::vec(0u8..3, 0..4),
            from in -4i64..5,
            extra in 0i64..6,
        ) {
            let head: BTreeMap<i64, u8> =
                head.into_iter().filter(|&(p, _)| p < from).collect();
            let a = EventuallyPeriodic::new(
                Orientation::TowardPlus, head, tail.clone(), from, 3,
            ).unwrap();
            // Re-describe the same sequence with the boundary pushed right.
            let boundary = from + extra;
            let explicit: BTreeMap<i64, u8> =
                (-8..boundary).map(|p| (p, a.get(p))).collect();
            let len = tail.len().max(1) as i64;
            let word: Vec<u8> = (0..len).map(|j| a.get(boundary + j)).collect();
            let b = EventuallyPeriodic::from_raw(
                Orientation::TowardPlus,
                RawSeq::build(explicit, word, boundary),
            );
            prop_assert_eq!(a, b);
        }

        #[test]
        fn get_matches_literal_description(
            tail in proptest::collection::vec(0u8..3, 1..5),
            from in -4i64..5,
            p in -20i64..20,
        ) {
            let a = EventuallyPeriodic::new(
                Orientation::TowardPlus, BTreeMap::new(), tail.clone(), from, 3,
            ).unwrap();
            let expected = if p >= from {
                tail[((p - from).rem_euclid(tail.len() as i64)) as usize]
            } else {
                0
            };
            prop_assert_eq!(a.get(p), expected);
        }
    }
}
