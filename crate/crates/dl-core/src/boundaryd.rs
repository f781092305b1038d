//! Ray surgery in `DL_d(q)` for `d > 2`: per-tree end descriptions, tracking
//! rays that kill finite projections, projection swaps with their witness
//! sequences, and the shared-prefix witness pairs behind indiscreteness.
//!
//! A third tree lets a ray park its activity elsewhere: any ray is
//! topologically indistinguishable from one supported on two chosen trees,
//! and two such rays admit asymptotic companions sharing arbitrarily long
//! prefixes. The constructions here emit those companions as descriptors
//! together with asymptoticity certificates.

use alloc::vec::Vec;
use core::fmt;

use crate::dlgraph::{DLVertex, GraphParams};
use crate::paths::{Move, Path};
use crate::periodic::EventuallyPeriodic;
use crate::rays::{
    certify_asymptotic, climb, shared_prefix_len, two_tree_ray, AsymptoticCertificate,
    CertifyError, EventualPattern, RayDescriptor, RayError, SharedPrefix, TreeRole,
};
use crate::tree::TreeVertex;

/// Where a ray's projection to one tree ends up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeEnd {
    /// Finitely many edges; eventually constant at this vertex.
    Constant(TreeVertex),
    /// Ascends forever along this branch (levels toward +∞).
    AscendsTo(EventuallyPeriodic),
    /// Descends forever to the distinguished end.
    Omega,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundaryDError {
    NeedsThreeTrees { d: usize },
    BaseNotOrigin,
    ProjectionNotEmpty { tree: usize },
    ProjectionNotInfinite { tree: usize },
    NTooSmall { n: usize, min: usize },
    Ray(RayError),
    Certify(CertifyError),
}

impl fmt::Display for BoundaryDError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryDError::NeedsThreeTrees { d } => {
                write!(f, "construction needs d > 2, got d = {d}")
            }
            BoundaryDError::BaseNotOrigin => write!(f, "ray descriptors must start at the origin"),
            BoundaryDError::ProjectionNotEmpty { tree } => {
                write!(f, "projection to tree {tree} must be empty")
            }
            BoundaryDError::ProjectionNotInfinite { tree } => {
                write!(f, "projection to tree {tree} must be infinite")
            }
            BoundaryDError::NTooSmall { n, min } => {
                write!(f, "n = {n} too small, need at least {min}")
            }
            BoundaryDError::Ray(e) => write!(f, "{e}"),
            BoundaryDError::Certify(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for BoundaryDError {}

impl From<RayError> for BoundaryDError {
    fn from(e: RayError) -> Self {
        BoundaryDError::Ray(e)
    }
}

impl From<CertifyError> for BoundaryDError {
    fn from(e: CertifyError) -> Self {
        BoundaryDError::Certify(e)
    }
}

/// Per-tree end description of a ray descriptor.
pub fn ends_of(r: &RayDescriptor) -> Vec<TreeEnd> {
    (0..r.base().d())
        .map(|tree| match r.role(tree) {
            TreeRole::Ascending => TreeEnd::AscendsTo(r.up_branch()),
            TreeRole::Descending => TreeEnd::Omega,
            TreeRole::Constant => TreeEnd::Constant(r.end_coord(tree)),
        })
        .collect()
}

fn require_origin(r: &RayDescriptor, params: &GraphParams) -> Result<(), BoundaryDError> {
    if *r.base() != DLVertex::origin(params) {
        return Err(BoundaryDError::BaseNotOrigin);
    }
    Ok(())
}

/// Deepest height the ray's projection to `tree` reaches over the prefix.
fn descent_depth(r: &RayDescriptor, tree: usize) -> i64 {
    let mut min = 0;
    for t in 0..=r.prefix().len() {
        min = min.min(r.vertex_at(t).height(tree));
    }
    -min
}

/// A ray asymptotic to `ray` whose projection to every eventually-constant
/// tree is trivial: complete the single turn early, then follow the same
/// branch. All activity lands in `ray`'s two unbounded trees.
pub fn tracking_ray(
    ray: &RayDescriptor,
    params: &GraphParams,
) -> Result<RayDescriptor, BoundaryDError> {
    if params.d() <= 2 {
        return Err(BoundaryDError::NeedsThreeTrees { d: params.d() });
    }
    require_origin(ray, params)?;
    let up = ray.eventual().up_tree;
    let down = ray.eventual().down_tree;
    Ok(two_tree_ray(up, down, &ray.up_branch(), params))
}

/// Exchanges the roles of trees `i` (empty projection) and `j` (infinite
/// projection): the same edges, with every `T_j` edge re-routed through `T_i`.
pub fn swap_projection(
    ray: &RayDescriptor,
    i: usize,
    j: usize,
    params: &GraphParams,
) -> Result<RayDescriptor, BoundaryDError> {
    if params.d() <= 2 {
        return Err(BoundaryDError::NeedsThreeTrees { d: params.d() });
    }
    require_origin(ray, params)?;
    let touched = ray.prefix().moves().iter().any(|m| m.touches(i))
        || ray.eventual().up_tree == i
        || ray.eventual().down_tree == i;
    if touched {
        return Err(BoundaryDError::ProjectionNotEmpty { tree: i });
    }
    if ray.eventual().up_tree != j && ray.eventual().down_tree != j {
        return Err(BoundaryDError::ProjectionNotInfinite { tree: j });
    }
    Ok(ray.rename_tree(j, i))
}

/// The witness ray `τ_n` for a projection swap: follows the swapped ray for
/// `n` edges, then returns to `ray`'s asymptotic class (descending back into
/// `T_j` when `ray` ascended there, or just rejoining its pattern). Asymptotic
/// to `ray` while sharing its first `n` edges with the swapped ray.
pub fn swap_witness(
    ray: &RayDescriptor,
    i: usize,
    j: usize,
    n: usize,
    params: &GraphParams,
) -> Result<RayDescriptor, BoundaryDError> {
    let swapped = swap_projection(ray, i, j, params)?;
    let plen = ray.prefix().len();
    if n < plen {
        return Err(BoundaryDError::NTooSmall { n, min: plen });
    }
    let mut moves: Vec<Move> = (0..n).map(|t| swapped.move_at(t)).collect();

    let eventual = if ray.eventual().up_tree == j {
        // Ascending case: descend T_j to the turning vertex the original ray
        // used, then climb the same branch.
        let depth = descent_depth(ray, j);
        let other = ray.eventual().down_tree;
        for s in 0..depth as usize {
            let copied = swapped.move_at(n + s);
            moves.push(Move {
                up_tree: copied.up_tree,
                up_label: copied.up_label,
                down_tree: j,
            });
        }
        let (head, labels) = climb(&ray.up_branch(), -depth, j, other);
        moves.extend(head);
        EventualPattern {
            up_tree: j,
            labels,
            down_tree: other,
        }
    } else {
        // Descending case: resume the original pattern; the ascending tree
        // continues along the same branch from the height already reached.
        let up = ray.eventual().up_tree;
        let level = swapped.vertex_at(n).height(up);
        let (head, labels) = climb(&ray.up_branch(), level, up, j);
        moves.extend(head);
        EventualPattern {
            up_tree: up,
            labels,
            down_tree: j,
        }
    };

    let prefix = Path::new(DLVertex::origin(params), moves, params).map_err(RayError::from)?;
    Ok(RayDescriptor::new(prefix, eventual, params)?)
}

/// Normalizes a descriptor per the two-tree reduction: tracking first, then
/// projection swaps until the ascent lives in `T_0` and the descent in `T_1`.
pub fn normalize(
    ray: &RayDescriptor,
    params: &GraphParams,
) -> Result<RayDescriptor, BoundaryDError> {
    let mut cur = tracking_ray(ray, params)?;
    let mut up = cur.eventual().up_tree;
    let down = cur.eventual().down_tree;
    if down != 1 {
        if up == 1 {
            if down != 0 {
                cur = swap_projection(&cur, 0, 1, params)?;
                up = 0;
            } else {
                let spare = (0..params.d())
                    .find(|&t| t != up && t != down)
                    .expect("d > 2 leaves a spare tree");
                cur = swap_projection(&cur, spare, 1, params)?;
                up = spare;
            }
        }
        cur = swap_projection(&cur, 1, down, params)?;
    }
    if up != 0 {
        cur = swap_projection(&cur, 0, up, params)?;
    }
    debug_assert_eq!(cur.eventual().up_tree, 0);
    debug_assert_eq!(cur.eventual().down_tree, 1);
    Ok(cur)
}

/// A pair of rays sharing their first `n` edges, each certified asymptotic to
/// one of the (normalized) inputs: the operational content of indiscreteness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndiscreteWitness {
    pub tau: RayDescriptor,
    pub tau2: RayDescriptor,
    pub shared_prefix: SharedPrefix,
    pub cert: AsymptoticCertificate,
    pub cert2: AsymptoticCertificate,
    pub normalized: (RayDescriptor, RayDescriptor),
}

/// Builds the witness ray for one normalized input: `n` edges up `T_2`
/// (leftmost, label 0) and down `T_1`, then down `T_0` to the input's turning
/// vertex while still climbing `T_2`, then up `T_0` along the input's branch
/// and down `T_1` forever.
fn indiscrete_companion(
    normalized: &RayDescriptor,
    n: usize,
    params: &GraphParams,
) -> Result<RayDescriptor, BoundaryDError> {
    let depth = descent_depth(normalized, 0);
    let mut moves = Vec::with_capacity(n + depth as usize);
    for _ in 0..n {
        moves.push(Move {
            up_tree: 2,
            up_label: 0,
            down_tree: 1,
        });
    }
    for _ in 0..depth {
        moves.push(Move {
            up_tree: 2,
            up_label: 0,
            down_tree: 0,
        });
    }
    let (head, labels) = climb(&normalized.up_branch(), -depth, 0, 1);
    moves.extend(head);
    let prefix = Path::new(DLVertex::origin(params), moves, params).map_err(RayError::from)?;
    Ok(RayDescriptor::new(
        prefix,
        EventualPattern {
            up_tree: 0,
            labels,
            down_tree: 1,
        },
        params,
    )?)
}

pub fn indiscrete_witness(
    gamma: &RayDescriptor,
    gamma2: &RayDescriptor,
    n: usize,
    params: &GraphParams,
) -> Result<IndiscreteWitness, BoundaryDError> {
    if params.d() <= 2 {
        return Err(BoundaryDError::NeedsThreeTrees { d: params.d() });
    }
    let normalized = normalize(gamma, params)?;
    let normalized2 = normalize(gamma2, params)?;

    // All turns must complete before the shared prefix ends.
    let turn_bound = |r: &RayDescriptor| -> usize {
        let depth = descent_depth(r, 0);
        if depth > 0 {
            r.prefix()
                .moves()
                .iter()
                .position(|m| m.up_tree == 0)
                .map(|idx| idx + 1)
                .unwrap_or(r.prefix().len() + 1)
        } else {
            0
        }
    };
    let min = turn_bound(&normalized).max(turn_bound(&normalized2)).max(1);
    if n < min {
        return Err(BoundaryDError::NTooSmall { n, min });
    }

    let tau = indiscrete_companion(&normalized, n, params)?;
    let tau2 = indiscrete_companion(&normalized2, n, params)?;
    let cert = certify_asymptotic(&tau, &normalized, params)?;
    let cert2 = certify_asymptotic(&tau2, &normalized2, params)?;
    let shared_prefix = shared_prefix_len(&tau, &tau2);
    debug_assert!(shared_prefix.at_least(n));
    Ok(IndiscreteWitness {
        tau,
        tau2,
        shared_prefix,
        cert,
        cert2,
        normalized: (normalized, normalized2),
    })
}
