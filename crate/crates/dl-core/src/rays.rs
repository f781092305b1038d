//! Finite descriptors for eventually periodic geodesic rays, and the
//! certificates that confirm two rays are asymptotic.
//!
//! A descriptor is a finite prefix path plus an eventual pattern: beyond the
//! prefix every move ascends one fixed tree (labels repeating periodically)
//! and descends another. All rays this crate constructs have this shape.

use alloc::vec::Vec;
use core::fmt;

use crate::dlgraph::{DLVertex, GraphParams};
use crate::paths::{Move, Path, PathsError};
use crate::periodic::{lcm, EventuallyPeriodic, Orientation, RawSeq, SupportBound};
use crate::tree::TreeVertex;

/// Everything after the prefix: ascend `up_tree` with `labels` repeating,
/// descend `down_tree`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventualPattern {
    pub up_tree: usize,
    pub labels: Vec<u8>,
    pub down_tree: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeRole {
    Ascending,
    Descending,
    Constant,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RayError {
    Path(PathsError),
    EmptyLabels,
    SameTree,
    TreeOutOfRange { tree: usize, d: usize },
    LabelOutOfRange { label: u8, q: u8 },
    TruncationNotGeodesic { len: u64 },
}

impl fmt::Display for RayError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RayError::Path(e) => write!(f, "bad prefix: {e}"),
            RayError::EmptyLabels => write!(f, "eventual label word must be nonempty"),
            RayError::SameTree => write!(f, "eventual pattern must use two distinct trees"),
            RayError::TreeOutOfRange { tree, d } => {
                write!(f, "eventual pattern uses tree {tree}, but d = {d}")
            }
            RayError::LabelOutOfRange { label, q } => {
                write!(f, "eventual label {label} out of range for q = {q}")
            }
            RayError::TruncationNotGeodesic { len } => {
                write!(f, "length-{len} truncation is not geodesic")
            }
        }
    }
}

impl core::error::Error for RayError {}

impl From<PathsError> for RayError {
    fn from(e: PathsError) -> Self {
        RayError::Path(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RayDescriptor {
    prefix: Path,
    eventual: EventualPattern,
}

impl RayDescriptor {
    pub fn new(
        prefix: Path,
        eventual: EventualPattern,
        params: &GraphParams,
    ) -> Result<Self, RayError> {
        let revalidated = Path::new(prefix.base().clone(), prefix.moves().to_vec(), params)?;
        if eventual.labels.is_empty() {
            return Err(RayError::EmptyLabels);
        }
        if eventual.up_tree == eventual.down_tree {
            return Err(RayError::SameTree);
        }
        for tree in [eventual.up_tree, eventual.down_tree] {
            if tree >= params.d() {
                return Err(RayError::TreeOutOfRange {
                    tree,
                    d: params.d(),
                });
            }
        }
        for &label in &eventual.labels {
            if label >= params.q() {
                return Err(RayError::LabelOutOfRange {
                    label,
                    q: params.q(),
                });
            }
        }
        Ok(RayDescriptor {
            prefix: revalidated,
            eventual,
        })
    }

    pub fn prefix(&self) -> &Path {
        &self.prefix
    }

    pub fn eventual(&self) -> &EventualPattern {
        &self.eventual
    }

    pub fn base(&self) -> &DLVertex {
        self.prefix.base()
    }

    /// The move the ray makes at time `t`.
    pub fn move_at(&self, t: usize) -> Move {
        let plen = self.prefix.len();
        if t < plen {
            self.prefix.moves()[t]
        } else {
            let idx = (t - plen) % self.eventual.labels.len();
            Move {
                up_tree: self.eventual.up_tree,
                up_label: self.eventual.labels[idx],
                down_tree: self.eventual.down_tree,
            }
        }
    }

    pub fn vertex_at(&self, t: usize) -> DLVertex {
        let mut cur = self.prefix.base().clone();
        for i in 0..t {
            cur = cur.apply_move(&self.move_at(i));
        }
        cur
    }

    /// The length-`len` initial segment as a path.
    pub fn truncate(&self, len: usize) -> Path {
        let moves = (0..len).map(|t| self.move_at(t)).collect();
        Path::from_parts_unchecked(self.prefix.base().clone(), moves)
    }

    pub fn role(&self, tree: usize) -> TreeRole {
        if tree == self.eventual.up_tree {
            TreeRole::Ascending
        } else if tree == self.eventual.down_tree {
            TreeRole::Descending
        } else {
            TreeRole::Constant
        }
    }

    /// Coordinate of tree `i` once the prefix is exhausted.
    pub fn end_coord(&self, i: usize) -> TreeVertex {
        self.prefix.endpoint().coord(i).clone()
    }

    /// The full branch the ascending tree climbs along: prefix-endpoint labels
    /// below its height, then the periodic labels above, as a canonical
    /// eventually periodic sequence over levels.
    pub fn up_branch(&self) -> EventuallyPeriodic {
        let coord = self.end_coord(self.eventual.up_tree);
        let h_end = coord.height();
        let explicit = coord
            .branch()
            .iter()
            .map(|(&level, &label)| (level, label))
            .collect();
        EventuallyPeriodic::from_raw(
            Orientation::TowardPlus,
            RawSeq::build(explicit, self.eventual.labels.clone(), h_end),
        )
    }

    /// Renames one tree to another (which must be untouched) in every move.
    pub(crate) fn rename_tree(&self, from: usize, to: usize) -> RayDescriptor {
        let swap = |tree: usize| if tree == from { to } else { tree };
        let moves = self
            .prefix
            .moves()
            .iter()
            .map(|m| Move {
                up_tree: swap(m.up_tree),
                up_label: m.up_label,
                down_tree: swap(m.down_tree),
            })
            .collect();
        RayDescriptor {
            prefix: Path::from_parts_unchecked(self.prefix.base().clone(), moves),
            eventual: EventualPattern {
                up_tree: swap(self.eventual.up_tree),
                labels: self.eventual.labels.clone(),
                down_tree: swap(self.eventual.down_tree),
            },
        }
    }
}

/// Moves climbing `branch` in tree `ascending` from `from_level` upward while
/// descending in `descending`: the finite segment covering the branch's
/// non-periodic part, plus the periodic label word that continues it.
pub(crate) fn climb(
    branch: &EventuallyPeriodic,
    from_level: i64,
    ascending: usize,
    descending: usize,
) -> (Vec<Move>, Vec<u8>) {
    assert_eq!(branch.orientation(), Orientation::TowardPlus);
    let tail = branch.tail_literal().to_vec();
    let boundary = if tail.is_empty() {
        match branch.support_max() {
            SupportBound::At(m) => (m + 1).max(from_level),
            _ => from_level,
        }
    } else {
        branch.tail_from_literal().max(from_level)
    };
    let head = (from_level..boundary)
        .map(|level| Move {
            up_tree: ascending,
            up_label: branch.get(level),
            down_tree: descending,
        })
        .collect();
    let labels = if tail.is_empty() {
        alloc::vec![0]
    } else {
        let len = tail.len() as i64;
        let shift = (boundary - branch.tail_from_literal()).rem_euclid(len) as usize;
        let mut word = tail;
        word.rotate_left(shift);
        word
    };
    (head, labels)
}

/// The canonical ray from the origin that lives in two trees only: descend in
/// `ascending` far enough to pick up the branch's lowest nonzero label, then
/// climb along `branch` forever, descending in `descending` throughout
/// (label 0 on all pre-turn ascents).
pub fn two_tree_ray(
    ascending: usize,
    descending: usize,
    branch: &EventuallyPeriodic,
    params: &GraphParams,
) -> RayDescriptor {
    let depth = match branch.support_min() {
        SupportBound::At(s) if s < 0 => -s,
        _ => 0,
    };
    let mut moves = Vec::new();
    for _ in 0..depth {
        moves.push(Move {
            up_tree: descending,
            up_label: 0,
            down_tree: ascending,
        });
    }
    let (head, labels) = climb(branch, -depth, ascending, descending);
    moves.extend(head);

    let prefix =
        Path::new(DLVertex::origin(params), moves, params).expect("canonical ray moves are valid");
    RayDescriptor::new(
        prefix,
        EventualPattern {
            up_tree: ascending,
            labels,
            down_tree: descending,
        },
        params,
    )
    .expect("canonical ray descriptor is valid")
}

/// Result of comparing two descriptors move-by-move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SharedPrefix {
    /// The move sequences agree forever.
    Forever,
    /// The move sequences first differ at this index.
    Upto(usize),
}

impl SharedPrefix {
    pub fn at_least(self, n: usize) -> bool {
        match self {
            SharedPrefix::Forever => true,
            SharedPrefix::Upto(k) => k >= n,
        }
    }
}

/// How many leading moves two descriptors share.
pub fn shared_prefix_len(a: &RayDescriptor, b: &RayDescriptor) -> SharedPrefix {
    let pa = a.prefix.len();
    let pb = b.prefix.len();
    let la = a.eventual.labels.len() as u64;
    let lb = b.eventual.labels.len() as u64;
    let horizon = pa.max(pb) + lcm(la, lb) as usize;
    for t in 0..horizon {
        if a.move_at(t) != b.move_at(t) {
            return SharedPrefix::Upto(t);
        }
    }
    // Equal through a full joint period beyond both prefixes.
    SharedPrefix::Forever
}

/// Witness that two rays stay within a bounded distance of each other: beyond
/// `merge_index`, each per-tree distance is constant across a full joint
/// period, which pins it forever; their sum bounds the graph distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymptoticCertificate {
    pub merge_index: usize,
    pub window: usize,
    pub tree_distances: Vec<u64>,
    pub distance_bound: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertifyError {
    DimensionMismatch,
    /// A per-tree distance failed to settle: the rays are not asymptotic.
    NotConstant {
        tree: usize,
        at: usize,
    },
}

impl fmt::Display for CertifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertifyError::DimensionMismatch => write!(f, "descriptors live in different DL graphs"),
            CertifyError::NotConstant { tree, at } => {
                write!(f, "tree {tree} distance still changing at time {at}")
            }
        }
    }
}

impl core::error::Error for CertifyError {}

/// Certifies that two ray descriptors are asymptotic.
///
/// The start index is pushed past every prefix, past the level where the two
/// ascending branches first diverge, and far enough that every descending
/// coordinate has dropped below all branch labels in its tree; after that
/// each per-tree distance is eventually constant exactly when the rays share
/// that tree's end, so constancy over one joint period decides the question.
pub fn certify_asymptotic(
    a: &RayDescriptor,
    b: &RayDescriptor,
    params: &GraphParams,
) -> Result<AsymptoticCertificate, CertifyError> {
    let d = params.d();
    if a.base().d() != d || b.base().d() != d {
        return Err(CertifyError::DimensionMismatch);
    }
    let mut start = a.prefix.len().max(b.prefix.len());

    for tree in 0..d {
        // Low-water mark: every branch level either ray can expose in this tree.
        let mut low = 0i64;
        for r in [a, b] {
            for coord in [r.base().coord(tree), &r.end_coord(tree)] {
                low = low.min(coord.height());
                if let Some((&k, _)) = coord.branch().iter().next() {
                    low = low.min(k);
                }
            }
            if r.role(tree) == TreeRole::Ascending {
                if let SupportBound::At(s) = r.up_branch().support_min() {
                    low = low.min(s);
                }
            }
        }
        if a.role(tree) == TreeRole::Ascending && b.role(tree) == TreeRole::Ascending {
            if let Some(delta) =
                EventuallyPeriodic::first_difference(&a.up_branch(), &b.up_branch())
            {
                for r in [a, b] {
                    let h_end = r.end_coord(tree).height();
                    let need = r.prefix.len() as i64 + (delta + 1 - h_end);
                    start = start.max(need.max(0) as usize);
                }
            }
        }
        for r in [a, b] {
            if r.role(tree) == TreeRole::Descending {
                let h_end = r.end_coord(tree).height();
                let need = r.prefix.len() as i64 + (h_end - low + 1);
                start = start.max(need.max(0) as usize);
            }
        }
    }

    let window = lcm(
        a.eventual.labels.len() as u64,
        b.eventual.labels.len() as u64,
    ) as usize;
    let mut tree_distances = alloc::vec![0u64; d];
    for (offset, t) in (start..=start + window).enumerate() {
        let va = a.vertex_at(t);
        let vb = b.vertex_at(t);
        for (tree, settled) in tree_distances.iter_mut().enumerate() {
            let dist = va.coord(tree).distance(vb.coord(tree));
            if offset == 0 {
                *settled = dist;
            } else if *settled != dist {
                return Err(CertifyError::NotConstant { tree, at: t });
            }
        }
    }
    let distance_bound = tree_distances.iter().sum();
    Ok(AsymptoticCertificate {
        merge_index: start,
        window,
        tree_distances,
        distance_bound,
    })
}

/// Checks that every truncation up to `cap` realizes the graph distance.
pub fn certify_truncations_geodesic(
    r: &RayDescriptor,
    cap: u64,
    params: &GraphParams,
) -> Result<(), RayError> {
    for len in 0..=cap {
        let path = r.truncate(len as usize);
        if !path.is_geodesic(params, cap)? {
            return Err(RayError::TruncationNotGeodesic { len });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(d: usize, q: u8) -> GraphParams {
        GraphParams::new(d, q).unwrap()
    }

    fn branch(head: &[(i64, u8)], tail: &[u8], from: i64, q: u8) -> EventuallyPeriodic {
        EventuallyPeriodic::new(
            Orientation::TowardPlus,
            head.iter().copied().collect(),
            tail.to_vec(),
            from,
            q,
        )
        .unwrap()
    }

    #[test]
    fn two_tree_ray_shapes() {
        let params = p(2, 2);
        // All-zero branch: straight ascent.
        let straight = two_tree_ray(
            0,
            1,
            &EventuallyPeriodic::zero(Orientation::TowardPlus),
            &params,
        );
        assert_eq!(straight.prefix().len(), 0);
        assert_eq!(straight.eventual().labels, alloc::vec![0]);
        for t in 0..5 {
            assert_eq!(straight.vertex_at(t).height(0), t as i64);
        }

        // A branch with a label below the origin forces a descent first.
        let b = branch(&[(-2, 1)], &[], 0, 2);
        let ray = two_tree_ray(0, 1, &b, &params);
        assert_eq!(ray.prefix().len(), 2 + 1); // two descents, one labeled ascent
        assert_eq!(ray.vertex_at(2).height(0), -2);
        assert_eq!(ray.up_branch(), b);
    }

    #[test]
    fn two_tree_ray_truncations_are_geodesic() {
        let params = p(2, 2);
        for b in [
            EventuallyPeriodic::zero(Orientation::TowardPlus),
            branch(&[(-2, 1)], &[], 0, 2),
            branch(&[], &[1], 0, 2),
            branch(&[(-1, 1)], &[1, 0], 2, 2),
        ] {
            let ray = two_tree_ray(0, 1, &b, &params);
            certify_truncations_geodesic(&ray, 8, &params).unwrap();
        }
        let params3 = p(3, 2);
        let ray = two_tree_ray(2, 1, &branch(&[(-1, 1)], &[], 0, 2), &params3);
        certify_truncations_geodesic(&ray, 8, &params3).unwrap();
    }

    #[test]
    fn up_branch_round_trips_canonically() {
        let params = p(2, 3);
        for b in [
            branch(&[(-3, 2), (0, 1)], &[2, 0], 4, 3),
            branch(&[], &[1, 2], -2, 3),
            branch(&[(5, 1)], &[], 0, 3),
        ] {
            let ray = two_tree_ray(0, 1, &b, &params);
            assert_eq!(ray.up_branch(), b);
        }
    }

    #[test]
    fn certificates_accept_asymptotic_pairs() {
        let params = p(2, 2);

        // A ray from the neighbor ((1; 0:1), (-1;)) ascending T_0 with all-0
        // labels shares both ends with the origin ray along the branch {0:1}.
        let at = DLVertex::new(alloc::vec![
            "(1; 0:1)".parse().unwrap(),
            "(-1;)".parse().unwrap()
        ])
        .unwrap();
        let from_at = RayDescriptor::new(
            Path::empty(at),
            EventualPattern {
                up_tree: 0,
                labels: alloc::vec![0],
                down_tree: 1,
            },
            &params,
        )
        .unwrap();
        let canonical = two_tree_ray(0, 1, &branch(&[(0, 1)], &[], 0, 2), &params);
        let cert = certify_asymptotic(&from_at, &canonical, &params).unwrap();
        assert_eq!(cert.tree_distances, alloc::vec![1, 1]);
        assert_eq!(cert.distance_bound, 2);

        // Same ends, different pre-turn segment: descend and come straight
        // back up before running the canonical ray. Not geodesic, but a valid
        // descriptor sharing both ends, so the certificate still settles.
        let ray = two_tree_ray(0, 1, &branch(&[(-1, 1)], &[1], 3, 2), &params);
        let mut longer = alloc::vec![
            Move {
                up_tree: 1,
                up_label: 0,
                down_tree: 0
            },
            Move {
                up_tree: 0,
                up_label: 0,
                down_tree: 1
            },
        ];
        longer.extend_from_slice(ray.prefix().moves());
        let detour = RayDescriptor::new(
            Path::new(DLVertex::origin(&params), longer, &params).unwrap(),
            ray.eventual().clone(),
            &params,
        )
        .unwrap();
        certify_asymptotic(&ray, &detour, &params).unwrap();
    }

    #[test]
    fn certificates_reject_diverging_pairs() {
        let params = p(2, 2);
        let a = two_tree_ray(0, 1, &branch(&[], &[1], 0, 2), &params);
        let b = two_tree_ray(
            0,
            1,
            &EventuallyPeriodic::zero(Orientation::TowardPlus),
            &params,
        );
        assert!(matches!(
            certify_asymptotic(&a, &b, &params),
            Err(CertifyError::NotConstant { tree: 0, .. })
        ));

        // Opposite roles never settle either.
        let c = two_tree_ray(
            1,
            0,
            &EventuallyPeriodic::zero(Orientation::TowardPlus),
            &params,
        );
        assert!(certify_asymptotic(&b, &c, &params).is_err());
    }

    #[test]
    fn shared_prefix_comparisons() {
        let params = p(3, 2);
        let a = two_tree_ray(0, 1, &branch(&[], &[1], 0, 2), &params);
        let b = two_tree_ray(0, 1, &branch(&[], &[1], 0, 2), &params);
        assert_eq!(shared_prefix_len(&a, &b), SharedPrefix::Forever);
        let c = two_tree_ray(0, 1, &branch(&[(0, 1)], &[], 0, 2), &params);
        match shared_prefix_len(&a, &c) {
            SharedPrefix::Upto(k) => assert_eq!(k, 1),
            SharedPrefix::Forever => panic!("distinct rays"),
        }
    }
}
