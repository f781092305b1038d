//! Typed moves, projections, turn counts, the edge-word rewriting calculus,
//! and geodesic testing/enumeration in `DL_d(q)`.
//!
//! A move has type `i(α)-j`: it ascends in tree `i` along the edge labeled `α`
//! and descends in tree `j`. The descending label is never stored; descent is
//! deterministic, so it is recomputed from coordinates where the rewrite rules
//! need it.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::dlgraph::{self, DLVertex, GraphParams};
use crate::tree::TreeVertex;

/// Default cap on path length for geodesic tests.
pub const DEFAULT_GEODESIC_CAP: u64 = 14;

/// One edge of `DL_d(q)`: ascend in `up_tree` along `up_label`, descend in
/// `down_tree`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Move {
    pub up_tree: usize,
    pub up_label: u8,
    pub down_tree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathsError {
    SameTree { index: usize },
    TreeOutOfRange { index: usize, tree: usize, d: usize },
    LabelOutOfRange { index: usize, label: u8, q: u8 },
    BaseMismatch { expected: usize, found: usize },
    CapExceeded { needed: u64, cap: u64 },
    BadShortcut(&'static str),
}

impl fmt::Display for PathsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathsError::SameTree { index } => {
                write!(f, "move {index} ascends and descends in the same tree")
            }
            PathsError::TreeOutOfRange { index, tree, d } => {
                write!(f, "move {index} uses tree {tree}, but d = {d}")
            }
            PathsError::LabelOutOfRange { index, label, q } => {
                write!(f, "move {index} uses label {label}, but q = {q}")
            }
            PathsError::BaseMismatch { expected, found } => {
                write!(
                    f,
                    "base vertex has {found} coordinates, expected {expected}"
                )
            }
            PathsError::CapExceeded { needed, cap } => {
                write!(f, "search needs radius {needed}, beyond the cap {cap}")
            }
            PathsError::BadShortcut(msg) => write!(f, "invalid shortcut parameters: {msg}"),
        }
    }
}

impl core::error::Error for PathsError {}

impl Move {
    pub fn validate(&self, index: usize, params: &GraphParams) -> Result<(), PathsError> {
        if self.up_tree == self.down_tree {
            return Err(PathsError::SameTree { index });
        }
        for tree in [self.up_tree, self.down_tree] {
            if tree >= params.d() {
                return Err(PathsError::TreeOutOfRange {
                    index,
                    tree,
                    d: params.d(),
                });
            }
        }
        if self.up_label >= params.q() {
            return Err(PathsError::LabelOutOfRange {
                index,
                label: self.up_label,
                q: params.q(),
            });
        }
        Ok(())
    }

    pub fn touches(&self, tree: usize) -> bool {
        self.up_tree == tree || self.down_tree == tree
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})-{}", self.up_tree, self.up_label, self.down_tree)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseMoveError(String);

impl fmt::Display for ParseMoveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid edge type: {}", self.0)
    }
}

impl core::error::Error for ParseMoveError {}

impl FromStr for Move {
    type Err = ParseMoveError;

    /// Parses the edge-type notation `i(α)-j`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (up_part, rest) = s
            .split_once('(')
            .ok_or_else(|| ParseMoveError(format!("'{s}': expected 'i(a)-j'")))?;
        let (label_part, down_part) = rest
            .split_once(")-")
            .ok_or_else(|| ParseMoveError(format!("'{s}': expected 'i(a)-j'")))?;
        let up_tree = up_part
            .trim()
            .parse()
            .map_err(|_| ParseMoveError(format!("bad tree index '{}'", up_part.trim())))?;
        let up_label = label_part
            .trim()
            .parse()
            .map_err(|_| ParseMoveError(format!("bad label '{}'", label_part.trim())))?;
        let down_tree = down_part
            .trim()
            .parse()
            .map_err(|_| ParseMoveError(format!("bad tree index '{}'", down_part.trim())))?;
        Ok(Move {
            up_tree,
            up_label,
            down_tree,
        })
    }
}

/// Parses a whitespace-separated edge-type word like `0(1)-1 2(0)-1`.
pub fn parse_edge_word(s: &str) -> Result<Vec<Move>, ParseMoveError> {
    s.split_whitespace().map(Move::from_str).collect()
}

/// A path: a base vertex and a sequence of moves, valid at every step.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    base: DLVertex,
    moves: Vec<Move>,
}

impl Path {
    pub fn empty(base: DLVertex) -> Self {
        Path {
            base,
            moves: Vec::new(),
        }
    }

    pub fn new(base: DLVertex, moves: Vec<Move>, params: &GraphParams) -> Result<Self, PathsError> {
        if base.d() != params.d() {
            return Err(PathsError::BaseMismatch {
                expected: params.d(),
                found: base.d(),
            });
        }
        for (index, mv) in moves.iter().enumerate() {
            mv.validate(index, params)?;
        }
        Ok(Path { base, moves })
    }

    /// Assembles a path from moves already known to be valid (derived from an
    /// existing validated path or descriptor).
    pub(crate) fn from_parts_unchecked(base: DLVertex, moves: Vec<Move>) -> Self {
        Path { base, moves }
    }

    pub fn base(&self) -> &DLVertex {
        &self.base
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn endpoint(&self) -> DLVertex {
        let mut cur = self.base.clone();
        for mv in &self.moves {
            cur = cur.apply_move(mv);
        }
        cur
    }

    /// The `len + 1` vertices visited, starting at the base.
    pub fn vertices(&self) -> Vec<DLVertex> {
        let mut out = Vec::with_capacity(self.moves.len() + 1);
        out.push(self.base.clone());
        for mv in &self.moves {
            let next = out.last().unwrap().apply_move(mv);
            out.push(next);
        }
        out
    }

    /// Projection to tree `j`: the `T_j` coordinate along the path,
    /// consecutive duplicates retained.
    pub fn project(&self, j: usize) -> Vec<TreeVertex> {
        self.vertices()
            .into_iter()
            .map(|v| v.coord(j).clone())
            .collect()
    }

    /// Per-tree turn counts: maximal subpaths descending in `T_i`, then
    /// ascending in `T_i`, with no intervening `T_i` move. A leading descent
    /// or trailing descent alone is not a turn.
    pub fn turns_per_tree(&self) -> Vec<u64> {
        let d = self.base.d();
        let mut counts = alloc::vec![0u64; d];
        let mut descending = alloc::vec![false; d];
        for mv in &self.moves {
            if descending[mv.up_tree] {
                counts[mv.up_tree] += 1;
            }
            descending[mv.up_tree] = false;
            descending[mv.down_tree] = true;
        }
        counts
    }

    /// Label of the edge the move at `idx` descends along, read from the
    /// coordinates just before the move.
    pub fn descent_label(&self, idx: usize) -> u8 {
        let mut cur = self.base.clone();
        for mv in &self.moves[..idx] {
            cur = cur.apply_move(mv);
        }
        let coord = cur.coord(self.moves[idx].down_tree);
        coord.label_at(coord.height() - 1)
    }

    /// Swaps the moves at `idx` and `idx + 1` when their types commute:
    /// all four trees pairwise distinct, or distinct ascents sharing the
    /// descent tree. Returns `None` when they do not commute.
    pub fn commute_adjacent(&self, idx: usize) -> Option<Path> {
        assert!(idx + 1 < self.moves.len(), "index {idx} out of range");
        let m1 = self.moves[idx];
        let m2 = self.moves[idx + 1];
        let commutes = m1.up_tree != m2.up_tree
            && (m1.down_tree == m2.down_tree
                || (m1.up_tree != m2.down_tree
                    && m1.down_tree != m2.up_tree
                    && m1.down_tree != m2.down_tree));
        if !commutes {
            return None;
        }
        let mut moves = self.moves.clone();
        moves.swap(idx, idx + 1);
        let swapped = Path {
            base: self.base.clone(),
            moves,
        };
        debug_assert_eq!(swapped.endpoint(), self.endpoint());
        Some(swapped)
    }

    /// Rewrites the adjacent pair at `idx`, `idx + 1` when it backtracks:
    ///
    /// - `(i(α)-j)(k(β)-i)`, `j != k`: the `T_i` excursion cancels, leaving
    ///   the single edge `(k(β)-j)`.
    /// - `(j(α)-i)(i(β)-k)`, `j != k`, with `β` matching the label removed
    ///   from `T_i`: leaves `(j(α)-k)`.
    /// - Both at once (`d = 2` shape): the pair cancels entirely.
    ///
    /// Returns `None` otherwise.
    pub fn shorten_at(&self, idx: usize) -> Option<Path> {
        assert!(idx + 1 < self.moves.len(), "index {idx} out of range");
        let m1 = self.moves[idx];
        let m2 = self.moves[idx + 1];
        let up_undone = m1.up_tree == m2.down_tree;
        let down_undone = m1.down_tree == m2.up_tree;

        let replacement: Option<Option<Move>> = if up_undone && down_undone {
            // Full backtrack iff the ascent retraces the removed edge.
            if m2.up_label == self.descent_label(idx) {
                Some(None)
            } else {
                None
            }
        } else if up_undone {
            Some(Some(Move {
                up_tree: m2.up_tree,
                up_label: m2.up_label,
                down_tree: m1.down_tree,
            }))
        } else if down_undone {
            if m2.up_label == self.descent_label(idx) {
                Some(Some(Move {
                    up_tree: m1.up_tree,
                    up_label: m1.up_label,
                    down_tree: m2.down_tree,
                }))
            } else {
                None
            }
        } else {
            None
        };

        let replacement = replacement?;
        let mut moves = Vec::with_capacity(self.moves.len() - 1);
        moves.extend_from_slice(&self.moves[..idx]);
        if let Some(mv) = replacement {
            moves.push(mv);
        }
        moves.extend_from_slice(&self.moves[idx + 2..]);
        let shortened = Path {
            base: self.base.clone(),
            moves,
        };
        debug_assert_eq!(shortened.endpoint(), self.endpoint());
        Some(shortened)
    }

    /// Eliminates every instance of the non-geodesic pattern: a descent in
    /// `T_i` whose removed edge is re-ascended later with no intervening `T_i`
    /// move. Commutes the ascent back toward the descent, then shortens.
    /// Endpoints are preserved and the length never increases.
    pub fn shorten_pass(&self) -> Path {
        let mut p = self.clone();
        while let Some((t, s)) = find_backtrack_instance(&p) {
            p = reduce_instance(p, t, s);
        }
        p
    }

    /// True when some descent's removed edge is re-ascended later with no
    /// intervening move in that tree: the pattern [`Path::shorten_pass`]
    /// eliminates.
    pub fn has_unresolved_backtrack(&self) -> bool {
        find_backtrack_instance(self).is_some()
    }

    /// True iff the path realizes the graph distance between its endpoints.
    pub fn is_geodesic(&self, params: &GraphParams, cap: u64) -> Result<bool, PathsError> {
        let len = self.moves.len() as u64;
        if len > cap {
            return Err(PathsError::CapExceeded { needed: len, cap });
        }
        let dist = dlgraph::bfs_distance(&self.base, &self.endpoint(), params, cap)
            .expect("distance bounded by the path length");
        Ok(dist == len)
    }
}

/// Applies a single validated move to a vertex.
pub fn apply(v: &DLVertex, mv: &Move, params: &GraphParams) -> Result<DLVertex, PathsError> {
    mv.validate(0, params)?;
    Ok(v.apply_move(mv))
}

/// Smallest ascent index `s` completing the backtrack pattern, with its
/// matching descent index `t`.
fn find_backtrack_instance(p: &Path) -> Option<(usize, usize)> {
    let moves = p.moves();
    for s in 1..moves.len() {
        let tree = moves[s].up_tree;
        let t = (0..s).rev().find(|&x| moves[x].touches(tree));
        let Some(t) = t else { continue };
        if moves[t].down_tree != tree {
            continue;
        }
        if p.descent_label(t) == moves[s].up_label {
            return Some((t, s));
        }
    }
    None
}

/// One reduction step of the rewrite: bring the ascent at `s` next to the
/// blocking move (or the descent at `t`) by commutation, then shorten.
fn reduce_instance(p: Path, t: usize, s: usize) -> Path {
    let k = p.moves()[s].down_tree;
    let blocker = (t + 1..s).rev().find(|&x| p.moves()[x].up_tree == k);
    let target = blocker.map_or(t + 1, |y| y + 1);
    let mut p = p;
    let mut cur = s;
    while cur > target {
        p = p
            .commute_adjacent(cur - 1)
            .expect("intervening moves commute past the ascent");
        cur -= 1;
    }
    p.shorten_at(target - 1)
        .expect("adjacent pair shortens after commutation")
}

/// Every geodesic from `v` to `w`, in the lexicographic order of move
/// sequences (by `up_tree`, then `up_label`, then `down_tree` at each step).
pub fn enumerate_geodesics(
    v: &DLVertex,
    w: &DLVertex,
    params: &GraphParams,
    cap: u64,
) -> Result<Vec<Path>, PathsError> {
    let dist = dlgraph::bfs_distance(v, w, params, cap).ok_or(PathsError::CapExceeded {
        needed: cap + 1,
        cap,
    })?;
    let from_w = dlgraph::ball(w, dist, params);
    let mut out = Vec::new();
    for_each_geodesic_with(v, w, params, dist, &|x| from_w.get(x).copied(), &mut |p| {
        out.push(p.clone())
    })?;
    Ok(out)
}

/// Geodesic enumeration driver with a caller-supplied exact distance oracle
/// `dist_to_w` (must answer for every vertex on some geodesic from `v`).
pub fn for_each_geodesic_with(
    v: &DLVertex,
    w: &DLVertex,
    params: &GraphParams,
    dist: u64,
    dist_to_w: &dyn Fn(&DLVertex) -> Option<u64>,
    visit: &mut dyn FnMut(&Path),
) -> Result<(), PathsError> {
    debug_assert_eq!(dist_to_w(v), Some(dist));
    let mut moves = Vec::with_capacity(dist as usize);
    descend_geodesics(v, w, params, dist, dist_to_w, v, &mut moves, visit);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn descend_geodesics(
    base: &DLVertex,
    target: &DLVertex,
    params: &GraphParams,
    remaining: u64,
    dist_to_w: &dyn Fn(&DLVertex) -> Option<u64>,
    cur: &DLVertex,
    moves: &mut Vec<Move>,
    visit: &mut dyn FnMut(&Path),
) {
    if remaining == 0 {
        debug_assert_eq!(cur, target);
        let path = Path {
            base: base.clone(),
            moves: moves.clone(),
        };
        visit(&path);
        return;
    }
    let d = params.d();
    for up_tree in 0..d {
        for up_label in 0..params.q() {
            for down_tree in 0..d {
                if down_tree == up_tree {
                    continue;
                }
                let mv = Move {
                    up_tree,
                    up_label,
                    down_tree,
                };
                let next = cur.apply_move(&mv);
                if dist_to_w(&next) == Some(remaining - 1) {
                    moves.push(mv);
                    descend_geodesics(
                        base,
                        target,
                        params,
                        remaining - 1,
                        dist_to_w,
                        &next,
                        moves,
                        visit,
                    );
                    moves.pop();
                }
            }
        }
    }
}

/// The no-2-turn-rays construction: a 2-turn prefix and its strictly shorter
/// replacement.
///
/// The long path descends `k` in `T_i`, ascends `l` (first label 1, avoiding a
/// backtrack), then descends in `T_i` / ascends in `T_{1-i}` for `l + tail`
/// more moves. The short path follows the `T_{1-i}` geodesic to the long
/// path's vertex at time `k + 2l`, compensating in `T_i`, and has length
/// `max(k, 2l - k)`.
pub fn two_turn_shortcut(
    i: usize,
    k: u64,
    l: u64,
    tail: u64,
    params: &GraphParams,
) -> Result<(Path, Path), PathsError> {
    if params.d() != 2 {
        return Err(PathsError::BadShortcut("requires d = 2"));
    }
    if i >= 2 {
        return Err(PathsError::BadShortcut("tree index must be 0 or 1"));
    }
    if k == 0 || l == 0 {
        return Err(PathsError::BadShortcut("k and l must be at least 1"));
    }
    let j = 1 - i;
    let origin = DLVertex::origin(params);

    let mut long_moves = Vec::new();
    for _ in 0..k {
        long_moves.push(Move {
            up_tree: j,
            up_label: 0,
            down_tree: i,
        });
    }
    for step in 0..l {
        long_moves.push(Move {
            up_tree: i,
            up_label: if step == 0 { 1 } else { 0 },
            down_tree: j,
        });
    }
    for step in 0..(l + tail) {
        long_moves.push(Move {
            up_tree: j,
            up_label: if step == 0 { 1 } else { 0 },
            down_tree: i,
        });
    }
    let long = Path::new(origin.clone(), long_moves, params)?;

    // T_{1-i} geodesic to the long path's position at time k + 2l: descend to
    // the common ancestor at height min(0, k - l), then ascend to height k,
    // crossing the labeled edge at level k - l.
    let ki = k as i64;
    let li = l as i64;
    let m = 0i64.min(ki - li);
    let mut short_moves = Vec::new();
    for _ in 0..(-m) {
        short_moves.push(Move {
            up_tree: i,
            up_label: 0,
            down_tree: j,
        });
    }
    for level in m..ki {
        short_moves.push(Move {
            up_tree: j,
            up_label: if level == ki - li { 1 } else { 0 },
            down_tree: i,
        });
    }
    let short = Path::new(origin, short_moves, params)?;

    debug_assert_eq!(short.endpoint(), long.vertices()[(k + 2 * l) as usize]);
    debug_assert_eq!(short.len() as u64, if l > k { 2 * l - k } else { k });
    Ok((long, short))
}
