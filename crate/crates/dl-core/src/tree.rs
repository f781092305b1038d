//! The oriented (q+1)-regular tree: horocyclic coordinates, Busemann height,
//! greatest common ancestor, and exact distance.
//!
//! Every vertex has one predecessor and q successors. A vertex is addressed by
//! its height together with the labels of the edges along its descending ray;
//! label 0 is implicit, so only nonzero labels are stored and equality is
//! structural. The distinguished end ω is the all-zero descending direction,
//! and the origin is `(0, {})`.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use core::fmt;
use core::str::FromStr;

/// Vertex of the oriented tree.
///
/// `branch` maps a level `j < height` to the nonzero label of the edge joining
/// heights `j` and `j + 1` on the descending ray from the vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeVertex {
    height: i64,
    branch: BTreeMap<i64, u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeError {
    /// Successor label must lie in `0..q`.
    LabelOutOfRange { label: u8, q: u8 },
    /// Canonical form stores only nonzero labels.
    ZeroLabel { level: i64 },
    /// Branch levels must lie strictly below the height.
    LevelNotBelowHeight { level: i64, height: i64 },
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::LabelOutOfRange { label, q } => {
                write!(f, "label {label} out of range for branching {q}")
            }
            TreeError::ZeroLabel { level } => {
                write!(f, "explicit zero label at level {level} is not canonical")
            }
            TreeError::LevelNotBelowHeight { level, height } => {
                write!(f, "branch level {level} not below height {height}")
            }
        }
    }
}

impl core::error::Error for TreeError {}

impl TreeVertex {
    /// The base vertex `o = (0, {})`.
    pub fn origin() -> Self {
        TreeVertex {
            height: 0,
            branch: BTreeMap::new(),
        }
    }

    /// Builds a vertex, rejecting non-canonical input (zero labels or levels
    /// at or above the height).
    pub fn new(height: i64, branch: BTreeMap<i64, u8>) -> Result<Self, TreeError> {
        for (&level, &label) in &branch {
            if label == 0 {
                return Err(TreeError::ZeroLabel { level });
            }
            if level >= height {
                return Err(TreeError::LevelNotBelowHeight { level, height });
            }
        }
        Ok(TreeVertex { height, branch })
    }

    pub fn height(&self) -> i64 {
        self.height
    }

    pub fn branch(&self) -> &BTreeMap<i64, u8> {
        &self.branch
    }

    /// Label of the edge between heights `level` and `level + 1` on the
    /// descending ray; 0 when not stored.
    pub fn label_at(&self, level: i64) -> u8 {
        self.branch.get(&level).copied().unwrap_or(0)
    }

    pub fn validate_labels(&self, q: u8) -> Result<(), TreeError> {
        for &label in self.branch.values() {
            if label >= q {
                return Err(TreeError::LabelOutOfRange { label, q });
            }
        }
        Ok(())
    }

    /// The unique vertex one step toward ω.
    pub fn predecessor(&self) -> TreeVertex {
        let new_height = self.height - 1;
        let mut branch = self.branch.clone();
        branch.retain(|&level, _| level < new_height);
        TreeVertex {
            height: new_height,
            branch,
        }
    }

    /// The successor reached along the upward edge labeled `label`.
    pub fn successor(&self, label: u8, q: u8) -> Result<TreeVertex, TreeError> {
        if label >= q {
            return Err(TreeError::LabelOutOfRange { label, q });
        }
        let mut branch = self.branch.clone();
        if label != 0 {
            branch.insert(self.height, label);
        }
        Ok(TreeVertex {
            height: self.height + 1,
            branch,
        })
    }

    /// Successor without the range check; callers guarantee `label < q`.
    pub(crate) fn successor_unchecked(&self, label: u8) -> TreeVertex {
        let mut branch = self.branch.clone();
        if label != 0 {
            branch.insert(self.height, label);
        }
        TreeVertex {
            height: self.height + 1,
            branch,
        }
    }

    /// True when `self` is an iterated predecessor of `other` (or equal).
    pub fn is_ancestor_of(&self, other: &TreeVertex) -> bool {
        self.height <= other.height
            && self.branch.iter().all(|(&j, &a)| other.label_at(j) == a)
            && other
                .branch
                .iter()
                .all(|(&j, &a)| j >= self.height || self.label_at(j) == a)
    }

    /// Greatest common ancestor `v ∧ w`: the deepest vertex below both.
    pub fn gca(&self, other: &TreeVertex) -> TreeVertex {
        let mut m = self.height.min(other.height);
        // Any level where the stored labels differ caps the agreement height.
        for (&j, &a) in &self.branch {
            if other.label_at(j) != a {
                m = m.min(j);
            }
        }
        for (&j, &b) in &other.branch {
            if self.label_at(j) != b {
                m = m.min(j);
            }
        }
        let mut branch = self.branch.clone();
        branch.retain(|&level, _| level < m);
        TreeVertex { height: m, branch }
    }

    /// Exact tree distance `d_T(v, w)` via the common ancestor.
    pub fn distance(&self, other: &TreeVertex) -> u64 {
        let m = self.gca(other).height;
        ((self.height - m) + (other.height - m)) as u64
    }
}

impl fmt::Display for TreeVertex {
    /// Canonical textual form `(k; j1:a1, j2:a2, ...)`, levels increasing.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.height)?;
        let mut first = true;
        for (level, label) in &self.branch {
            if first {
                write!(f, " {level}:{label}")?;
                first = false;
            } else {
                write!(f, ", {level}:{label}")?;
            }
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseVertexError(String);

impl fmt::Display for ParseVertexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid tree vertex: {}", self.0)
    }
}

impl core::error::Error for ParseVertexError {}

impl FromStr for TreeVertex {
    type Err = ParseVertexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let inner = s
            .strip_prefix('(')
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or_else(|| ParseVertexError("expected '(k; j:a, ...)'".to_owned()))?;
        let (height_part, branch_part) = inner
            .split_once(';')
            .ok_or_else(|| ParseVertexError("missing ';' after height".to_owned()))?;
        let height: i64 = height_part
            .trim()
            .parse()
            .map_err(|_| ParseVertexError(format!("bad height '{}'", height_part.trim())))?;
        let mut branch = BTreeMap::new();
        let mut last_level: Option<i64> = None;
        for entry in branch_part.split(',') {
            let entry = entry.trim();
            if entry.is_empty() {
                continue;
            }
            let (level_part, label_part) = entry
                .split_once(':')
                .ok_or_else(|| ParseVertexError(format!("bad entry '{entry}'")))?;
            let level: i64 = level_part
                .trim()
                .parse()
                .map_err(|_| ParseVertexError(format!("bad level '{}'", level_part.trim())))?;
            let label: u8 = label_part
                .trim()
                .parse()
                .map_err(|_| ParseVertexError(format!("bad label '{}'", label_part.trim())))?;
            if label == 0 {
                return Err(ParseVertexError(format!(
                    "zero label at level {level} is not canonical"
                )));
            }
            if level >= height {
                return Err(ParseVertexError(format!(
                    "level {level} not below height {height}"
                )));
            }
            if let Some(prev) = last_level {
                if level <= prev {
                    return Err(ParseVertexError(
                        "levels must be strictly increasing".to_owned(),
                    ));
                }
            }
            last_level = Some(level);
            branch.insert(level, label);
        }
        Ok(TreeVertex { height, branch })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn v(height: i64, entries: &[(i64, u8)]) -> TreeVertex {
        TreeVertex::new(height, entries.iter().copied().collect()).unwrap()
    }

    /// Independent oracle: gca via brute-force ancestor-set intersection.
    fn gca_brute(a: &TreeVertex, b: &TreeVertex) -> TreeVertex {
        let floor = a
            .height()
            .min(b.height())
            .min(a.branch().keys().min().copied().unwrap_or(0))
            .min(b.branch().keys().min().copied().unwrap_or(0))
            - 1;
        let ancestors = |start: &TreeVertex| -> BTreeSet<TreeVertex> {
            let mut out = BTreeSet::new();
            let mut cur = start.clone();
            while cur.height() >= floor {
                out.insert(cur.clone());
                cur = cur.predecessor();
            }
            out
        };
        ancestors(a)
            .intersection(&ancestors(b))
            .max_by_key(|x| x.height())
            .unwrap()
            .clone()
    }

    /// Independent oracle: BFS over {predecessor, successor} adjacency.
    fn bfs_tree_distance(a: &TreeVertex, b: &TreeVertex, q: u8, cap: u64) -> Option<u64> {
        let mut seen: BTreeMap<TreeVertex, u64> = BTreeMap::new();
        let mut frontier = alloc::vec![a.clone()];
        seen.insert(a.clone(), 0);
        for dist in 1..=cap {
            let mut next = Vec::new();
            for u in &frontier {
                let mut nbrs = alloc::vec![u.predecessor()];
                for label in 0..q {
                    nbrs.push(u.successor(label, q).unwrap());
                }
                for n in nbrs {
                    if !seen.contains_key(&n) {
                        seen.insert(n.clone(), dist);
                        next.push(n);
                    }
                }
            }
            if let Some(&d) = seen.get(b) {
                return Some(d);
            }
            frontier = next;
        }
        seen.get(b).copied()
    }

    #[test]
    fn predecessor_examples() {
        assert_eq!(v(0, &[]).predecessor(), v(-1, &[]));
        assert_eq!(v(2, &[(1, 1)]).predecessor(), v(1, &[]));
        assert_eq!(v(1, &[(-3, 1)]).predecessor(), v(0, &[(-3, 1)]));
    }

    #[test]
    fn successor_examples() {
        assert_eq!(v(0, &[]).successor(0, 2).unwrap(), v(1, &[]));
        assert_eq!(v(0, &[]).successor(1, 2).unwrap(), v(1, &[(0, 1)]));
        assert_eq!(v(-1, &[]).successor(1, 2).unwrap(), v(0, &[(-1, 1)]));
        assert!(v(0, &[]).successor(2, 2).is_err());
    }

    #[test]
    fn gca_examples() {
        let o = TreeVertex::origin();
        assert_eq!(o.gca(&o), o);
        // Expected values frozen from the ancestor-set oracle.
        let a = v(1, &[(0, 1)]);
        let b = v(1, &[]);
        assert_eq!(gca_brute(&a, &b), v(0, &[]));
        assert_eq!(a.gca(&b), v(0, &[]));
        let c = v(2, &[]);
        let d = v(-1, &[]);
        assert_eq!(gca_brute(&c, &d), v(-1, &[]));
        assert_eq!(c.gca(&d), v(-1, &[]));
    }

    #[test]
    fn distance_examples() {
        let o = TreeVertex::origin();
        assert_eq!(o.distance(&o), 0);
        // Frozen from the BFS oracle.
        let a = v(1, &[(0, 1)]);
        let b = v(1, &[]);
        assert_eq!(bfs_tree_distance(&a, &b, 2, 4), Some(2));
        assert_eq!(a.distance(&b), 2);
        assert_eq!(bfs_tree_distance(&v(-2, &[]), &v(0, &[]), 2, 4), Some(2));
        assert_eq!(v(-2, &[]).distance(&v(0, &[])), 2);
    }

    #[test]
    fn distance_matches_bfs_on_radius_4_ball() {
        let q = 2;
        // Enumerate the radius-4 ball around o by BFS.
        let mut ball: BTreeSet<TreeVertex> = BTreeSet::new();
        let mut frontier = alloc::vec![TreeVertex::origin()];
        ball.insert(TreeVertex::origin());
        for _ in 0..4 {
            let mut next = Vec::new();
            for u in &frontier {
                let mut nbrs = alloc::vec![u.predecessor()];
                for label in 0..q {
                    nbrs.push(u.successor(label, q).unwrap());
                }
                for n in nbrs {
                    if ball.insert(n.clone()) {
                        next.push(n);
                    }
                }
            }
            frontier = next;
        }
        for a in &ball {
            for b in &ball {
                assert_eq!(
                    Some(a.distance(b)),
                    bfs_tree_distance(a, b, q, 8),
                    "distance mismatch for {a} and {b}"
                );
            }
        }
    }

    #[test]
    fn textual_round_trip_and_rejects() {
        let a = v(2, &[(-3, 1), (1, 2)]);
        let shown = alloc::format!("{a}");
        assert_eq!(shown, "(2; -3:1, 1:2)");
        assert_eq!(shown.parse::<TreeVertex>().unwrap(), a);
        assert_eq!("(0;)".parse::<TreeVertex>().unwrap(), TreeVertex::origin());
        assert!("(1; 0:0)".parse::<TreeVertex>().is_err());
        assert!("(1; 1:1)".parse::<TreeVertex>().is_err());
        assert!("(1; 0:1, 0:1)".parse::<TreeVertex>().is_err());
        assert!("nope".parse::<TreeVertex>().is_err());
    }

    fn arb_vertex(q: u8) -> impl Strategy<Value = TreeVertex> {
        (
            -5i64..6,
            proptest::collection::btree_map(-8i64..8, 1..q, 0..5),
        )
            .prop_map(move |(height, mut branch)| {
                branch.retain(|&level, _| level < height);
                TreeVertex::new(height, branch).unwrap()
            })
    }

    proptest! {
        #[test]
        fn successor_then_predecessor_is_identity(v in arb_vertex(3), label in 0u8..3) {
            let up = v.successor(label, 3).unwrap();
            prop_assert_eq!(up.predecessor(), v);
        }

        #[test]
        fn gca_matches_brute(a in arb_vertex(3), b in arb_vertex(3)) {
            prop_assert_eq!(a.gca(&b), gca_brute(&a, &b));
        }

        #[test]
        fn gca_height_below_min(a in arb_vertex(3), b in arb_vertex(3)) {
            prop_assert!(a.gca(&b).height() <= a.height().min(b.height()));
        }

        #[test]
        fn distance_is_a_metric(a in arb_vertex(3), b in arb_vertex(3), c in arb_vertex(3)) {
            prop_assert_eq!(a.distance(&b), b.distance(&a));
            prop_assert_eq!(a.distance(&b) == 0, a == b);
            prop_assert!(a.distance(&c) <= a.distance(&b) + b.distance(&c));
        }
    }
}
