//! The lamplighter group `L_q` as lamp stands: word evaluation, composition,
//! `exp_t`, element order, and the bijection with `DL_2(q)` vertices.
//!
//! A lamp stand is a finitely supported lamp configuration over the integers
//! (states mod q, state 0 implicit) plus the lamplighter's position.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::dlgraph::DLVertex;
use crate::tree::TreeVertex;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LampStand {
    lamps: BTreeMap<i64, u8>,
    pos: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(u32),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LamplighterError {
    StateOutOfRange { position: i64, state: u8, q: u8 },
    NotRankTwo { d: usize },
}

impl fmt::Display for LamplighterError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LamplighterError::StateOutOfRange { position, state, q } => {
                write!(
                    f,
                    "lamp state {state} at {position} out of range for q = {q}"
                )
            }
            LamplighterError::NotRankTwo { d } => {
                write!(f, "lamp stands correspond to DL_2(q) vertices, got d = {d}")
            }
        }
    }
}

impl core::error::Error for LamplighterError {}

impl LampStand {
    pub fn identity() -> Self {
        LampStand {
            lamps: BTreeMap::new(),
            pos: 0,
        }
    }

    pub fn new(lamps: BTreeMap<i64, u8>, pos: i64, q: u8) -> Result<Self, LamplighterError> {
        for (&position, &state) in &lamps {
            if state == 0 || state >= q {
                return Err(LamplighterError::StateOutOfRange { position, state, q });
            }
        }
        Ok(LampStand { lamps, pos })
    }

    pub fn lamps(&self) -> &BTreeMap<i64, u8> {
        &self.lamps
    }

    pub fn pos(&self) -> i64 {
        self.pos
    }

    pub fn lamp(&self, position: i64) -> u8 {
        self.lamps.get(&position).copied().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        self.lamps.is_empty() && self.pos == 0
    }

    /// The exponent sum of `t`, i.e. the lamplighter's position.
    pub fn exp_t(&self) -> i64 {
        self.pos
    }

    pub fn min_lit(&self) -> Option<i64> {
        self.lamps.keys().next().copied()
    }

    pub fn max_lit(&self) -> Option<i64> {
        self.lamps.keys().next_back().copied()
    }

    /// Group multiplication: compose `other`'s switching starting from
    /// `self`'s end position.
    pub fn multiply(&self, other: &LampStand, q: u8) -> LampStand {
        let mut lamps = self.lamps.clone();
        for (&p, &s) in &other.lamps {
            let key = p + self.pos;
            let merged = (lamps.get(&key).copied().unwrap_or(0) + s) % q;
            if merged == 0 {
                lamps.remove(&key);
            } else {
                lamps.insert(key, merged);
            }
        }
        LampStand {
            lamps,
            pos: self.pos + other.pos,
        }
    }

    pub fn inverse(&self, q: u8) -> LampStand {
        let lamps = self
            .lamps
            .iter()
            .map(|(&p, &s)| (p - self.pos, q - s))
            .collect();
        LampStand {
            lamps,
            pos: -self.pos,
        }
    }

    pub fn pow(&self, e: i64, q: u8) -> LampStand {
        let base = if e < 0 { self.inverse(q) } else { self.clone() };
        let mut acc = LampStand::identity();
        for _ in 0..e.unsigned_abs() {
            acc = acc.multiply(&base, q);
        }
        acc
    }

    /// Order of the element: infinite iff `exp_t != 0`, otherwise the least
    /// `n >= 1` with the n-th power trivial (at most q, by iteration).
    pub fn order(&self, q: u8) -> Order {
        if self.pos != 0 {
            return Order::Infinite;
        }
        let mut acc = self.clone();
        let mut n = 1u32;
        while !acc.is_identity() {
            acc = acc.multiply(self, q);
            n += 1;
            debug_assert!(n <= q as u32 + 1);
        }
        Order::Finite(n)
    }

    /// The `DL_2(q)` vertex for this element: `T_0` holds the lamps strictly
    /// left of the lamplighter, `T_1` holds lamp position `p >= pos` at level
    /// `-p - 1`.
    pub fn to_vertex(&self) -> DLVertex {
        let k = self.pos;
        let mut left = BTreeMap::new();
        let mut right = BTreeMap::new();
        for (&p, &s) in &self.lamps {
            if p < k {
                left.insert(p, s);
            } else {
                right.insert(-p - 1, s);
            }
        }
        let t0 = TreeVertex::new(k, left).expect("lamp positions below pos sit below height");
        let t1 = TreeVertex::new(-k, right).expect("mirrored positions sit below height");
        DLVertex::new(alloc::vec![t0, t1]).expect("heights cancel")
    }

    /// Inverse of [`LampStand::to_vertex`]; requires a `DL_2(q)` vertex.
    pub fn from_vertex(v: &DLVertex) -> Result<LampStand, LamplighterError> {
        if v.d() != 2 {
            return Err(LamplighterError::NotRankTwo { d: v.d() });
        }
        let k = v.height(0);
        let mut lamps = BTreeMap::new();
        for (&level, &label) in v.coord(0).branch() {
            lamps.insert(level, label);
        }
        for (&level, &label) in v.coord(1).branch() {
            lamps.insert(-level - 1, label);
        }
        Ok(LampStand { lamps, pos: k })
    }
}

impl fmt::Display for LampStand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[pos {}; lamps", self.pos)?;
        if self.lamps.is_empty() {
            write!(f, " -")?;
        }
        for (p, s) in &self.lamps {
            write!(f, " {p}:{s}")?;
        }
        write!(f, "]")
    }
}

/// The Cayley generating set `{t, at, ..., a^(q-1)t}` followed by the
/// inverses, in that order.
pub fn generators(q: u8) -> Vec<LampStand> {
    let mut out = Vec::with_capacity(2 * q as usize);
    for m in 0..q {
        let mut lamps = BTreeMap::new();
        if m != 0 {
            lamps.insert(0, m);
        }
        out.push(LampStand { lamps, pos: 1 });
    }
    let inverses: Vec<LampStand> = out.iter().map(|g| g.inverse(q)).collect();
    out.extend(inverses);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordError(String);

impl fmt::Display for WordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid word: {}", self.0)
    }
}

impl core::error::Error for WordError {}

/// Evaluates a group word over `t` and `a`, with parentheses and integer
/// exponents, e.g. `t^3 (at) t^-2 (at)^-2 t^-1`.
pub fn eval_word(word: &str, q: u8) -> Result<LampStand, WordError> {
    let chars: Vec<char> = word.chars().collect();
    let mut pos = 0usize;
    let result = eval_sequence(&chars, &mut pos, q, 0)?;
    if pos != chars.len() {
        return Err(WordError(format!("unexpected ')' at position {pos}")));
    }
    Ok(result)
}

fn eval_sequence(
    chars: &[char],
    pos: &mut usize,
    q: u8,
    depth: u32,
) -> Result<LampStand, WordError> {
    let mut acc = LampStand::identity();
    loop {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
        match chars.get(*pos) {
            None => {
                if depth > 0 {
                    return Err(WordError("unbalanced '('".to_owned()));
                }
                return Ok(acc);
            }
            Some(')') => {
                if depth == 0 {
                    return Ok(acc); // caller reports the stray ')'
                }
                return Ok(acc);
            }
            Some(&c) => {
                let base = match c {
                    't' => {
                        *pos += 1;
                        LampStand {
                            lamps: BTreeMap::new(),
                            pos: 1,
                        }
                    }
                    'a' => {
                        debug_assert!(q >= 2);
                        *pos += 1;
                        let mut lamps = BTreeMap::new();
                        lamps.insert(0, 1);
                        LampStand { lamps, pos: 0 }
                    }
                    '(' => {
                        *pos += 1;
                        let inner = eval_sequence(chars, pos, q, depth + 1)?;
                        if chars.get(*pos) != Some(&')') {
                            return Err(WordError("unbalanced '('".to_owned()));
                        }
                        *pos += 1;
                        inner
                    }
                    other => {
                        return Err(WordError(format!("unexpected character '{other}'")));
                    }
                };
                let exponent = parse_exponent(chars, pos)?;
                acc = acc.multiply(&base.pow(exponent, q), q);
            }
        }
    }
}

fn parse_exponent(chars: &[char], pos: &mut usize) -> Result<i64, WordError> {
    if chars.get(*pos) != Some(&'^') {
        return Ok(1);
    }
    *pos += 1;
    let start = *pos;
    if chars.get(*pos) == Some(&'-') {
        *pos += 1;
    }
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        *pos += 1;
    }
    let text: String = chars[start..*pos].iter().collect();
    text.parse::<i64>()
        .map_err(|_| WordError(format!("bad exponent '{text}'")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dlgraph::{ball, bfs_distance, neighbors, GraphParams};
    use alloc::collections::BTreeSet;
    use proptest::prelude::*;

    fn stand(entries: &[(i64, u8)], pos: i64, q: u8) -> LampStand {
        LampStand::new(entries.iter().copied().collect(), pos, q).unwrap()
    }

    #[test]
    fn figure_2_word_and_its_alternate() {
        let g = eval_word("t^3 (at) t^-2 (at)^-2 t^-1", 2).unwrap();
        assert_eq!(g, stand(&[(0, 1), (1, 1), (3, 1)], -1, 2));
        let h = eval_word("(at)^2 t (at) t^-5", 2).unwrap();
        assert_eq!(g, h);
        assert_eq!(eval_word("", 2).unwrap(), LampStand::identity());
        assert!(eval_word("b", 2).is_err());
        assert!(eval_word("(at", 2).is_err());
        assert!(eval_word("t)", 2).is_err());
    }

    #[test]
    fn multiply_examples() {
        let q = 2;
        let g = stand(&[(0, 1), (1, 1), (3, 1)], -1, q);
        let t = eval_word("t", q).unwrap();
        assert_eq!(g.multiply(&t, q), stand(&[(0, 1), (1, 1), (3, 1)], 0, q));
        let tat = eval_word("t a t", q).unwrap();
        assert_eq!(g.multiply(&tat, q), stand(&[(1, 1), (3, 1)], 1, q));
        assert_eq!(g.multiply(&LampStand::identity(), q), g);
        assert_eq!(LampStand::identity().multiply(&g, q), g);
    }

    #[test]
    fn exp_t_examples() {
        assert_eq!(LampStand::identity().exp_t(), 0);
        let g = eval_word("t^3 (at) t^-2 (at)^-2 t^-1", 2).unwrap();
        assert_eq!(g.exp_t(), -1);
    }

    #[test]
    fn order_examples() {
        let q = 2;
        assert_eq!(LampStand::identity().order(q), Order::Finite(1));
        let a5 = eval_word("t^5 a t^-5", q).unwrap();
        assert_eq!(a5.order(q), Order::Finite(2));
        assert_eq!(eval_word("t", q).unwrap().order(q), Order::Infinite);
        // q = 4: a has order 4, a^2 has order 2.
        let a = eval_word("a", 4).unwrap();
        assert_eq!(a.order(4), Order::Finite(4));
        assert_eq!(eval_word("a^2", 4).unwrap().order(4), Order::Finite(2));
    }

    #[test]
    fn vertex_bijection_examples() {
        let q = 2;
        assert_eq!(
            LampStand::identity().to_vertex(),
            DLVertex::origin(&GraphParams::new(2, q).unwrap())
        );
        let at = eval_word("at", q).unwrap();
        let v = at.to_vertex();
        assert_eq!(v.coord(0), &"(1; 0:1)".parse().unwrap());
        assert_eq!(v.coord(1), &"(-1;)".parse().unwrap());
        let params = GraphParams::new(2, q).unwrap();
        assert!(neighbors(&DLVertex::origin(&params), &params).contains(&v));
        assert_eq!(LampStand::from_vertex(&v).unwrap(), at);
    }

    #[test]
    fn generator_multiplication_walks_the_graph() {
        let q = 3;
        let params = GraphParams::new(2, q).unwrap();
        let g = eval_word("t^2 (a^2t) t^-3 a", q).unwrap();
        let v = g.to_vertex();
        let expected: BTreeSet<DLVertex> = neighbors(&v, &params).into_iter().collect();
        let reached: BTreeSet<DLVertex> = generators(q)
            .iter()
            .map(|s| g.multiply(s, q).to_vertex())
            .collect();
        assert_eq!(reached, expected);
    }

    #[test]
    fn cayley_word_length_agrees_with_graph_distance_smoke() {
        // Radius-3 smoke check of the two-oracle agreement; the acceptance
        // suite runs the full radii.
        let q = 2;
        let params = GraphParams::new(2, q).unwrap();
        let o = DLVertex::origin(&params);
        let gens = generators(q);
        let mut word_len: BTreeMap<DLVertex, u64> = BTreeMap::new();
        let mut frontier = alloc::vec![LampStand::identity()];
        word_len.insert(o.clone(), 0);
        for r in 1..=3u64 {
            let mut next = Vec::new();
            for g in &frontier {
                for s in &gens {
                    let h = g.multiply(s, q);
                    let v = h.to_vertex();
                    if let std::collections::btree_map::Entry::Vacant(e) = word_len.entry(v) {
                        e.insert(r);
                        next.push(h);
                    }
                }
            }
            frontier = next;
        }
        for (v, len) in &word_len {
            assert_eq!(bfs_distance(&o, v, &params, 8), Some(*len), "at {v}");
        }
        assert_eq!(word_len.len(), ball(&o, 3, &params).len());
    }

    fn arb_stand(q: u8) -> impl Strategy<Value = LampStand> {
        (
            proptest::collection::btree_map(-6i64..7, 1..q, 0..5),
            -5i64..6,
        )
            .prop_map(move |(lamps, pos)| LampStand::new(lamps, pos, q).unwrap())
    }

    proptest! {
        #[test]
        fn group_laws(g in arb_stand(3), h in arb_stand(3), k in arb_stand(3)) {
            let q = 3;
            prop_assert_eq!(
                g.multiply(&h, q).multiply(&k, q),
                g.multiply(&h.multiply(&k, q), q)
            );
            prop_assert_eq!(g.multiply(&g.inverse(q), q), LampStand::identity());
            prop_assert_eq!(g.inverse(q).multiply(&g, q), LampStand::identity());
            prop_assert_eq!(
                g.multiply(&h, q).exp_t(),
                g.exp_t() + h.exp_t()
            );
        }

        #[test]
        fn round_trip_via_vertex(g in arb_stand(3)) {
            prop_assert_eq!(LampStand::from_vertex(&g.to_vertex()).unwrap(), g);
        }

        #[test]
        fn involution_when_exp_t_vanishes(lamps in proptest::collection::btree_map(-6i64..7, 1u8..2, 1..5)) {
            let q = 2;
            let g = LampStand::new(lamps, 0, q).unwrap();
            prop_assert_eq!(g.multiply(&g, q), LampStand::identity());
        }
    }
}
