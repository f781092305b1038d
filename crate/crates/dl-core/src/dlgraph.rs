//! Vertices, adjacency, balls, and exact BFS distances in `DL_d(q)`.
//!
//! A vertex is a d-tuple of tree vertices whose heights sum to zero. An edge
//! raises the height in one tree and lowers it in another, holding every other
//! coordinate fixed, so each vertex has exactly `d(d-1)q` neighbors.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::paths::{Move, Path};
use crate::tree::TreeVertex;

/// Default search cap for [`bfs_distance`]; guards against unbounded search.
pub const DEFAULT_RADIUS_CAP: u64 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphParams {
    d: usize,
    q: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DlGraphError {
    BadParams { d: usize, q: u8 },
    HeightSumNonzero { sum: i64 },
    WrongDimension { expected: usize, found: usize },
}

impl fmt::Display for DlGraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DlGraphError::BadParams { d, q } => {
                write!(f, "DL_d(q) requires d >= 2 and q >= 2, got d={d}, q={q}")
            }
            DlGraphError::HeightSumNonzero { sum } => {
                write!(f, "tree heights must sum to 0, got {sum}")
            }
            DlGraphError::WrongDimension { expected, found } => {
                write!(f, "expected {expected} tree coordinates, found {found}")
            }
        }
    }
}

impl core::error::Error for DlGraphError {}

impl GraphParams {
    pub fn new(d: usize, q: u8) -> Result<Self, DlGraphError> {
        if d < 2 || q < 2 {
            return Err(DlGraphError::BadParams { d, q });
        }
        Ok(GraphParams { d, q })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn q(&self) -> u8 {
        self.q
    }
}

/// Vertex of `DL_d(q)`: one coordinate per tree, heights summing to zero.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DLVertex {
    coords: Vec<TreeVertex>,
}

impl DLVertex {
    pub fn origin(params: &GraphParams) -> Self {
        DLVertex {
            coords: (0..params.d()).map(|_| TreeVertex::origin()).collect(),
        }
    }

    pub fn new(coords: Vec<TreeVertex>) -> Result<Self, DlGraphError> {
        if coords.len() < 2 {
            return Err(DlGraphError::WrongDimension {
                expected: 2,
                found: coords.len(),
            });
        }
        let sum: i64 = coords.iter().map(|c| c.height()).sum();
        if sum != 0 {
            return Err(DlGraphError::HeightSumNonzero { sum });
        }
        Ok(DLVertex { coords })
    }

    pub(crate) fn from_coords_unchecked(coords: Vec<TreeVertex>) -> Self {
        debug_assert_eq!(coords.iter().map(|c| c.height()).sum::<i64>(), 0);
        DLVertex { coords }
    }

    pub fn d(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[TreeVertex] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &TreeVertex {
        &self.coords[i]
    }

    pub fn height(&self, i: usize) -> i64 {
        self.coords[i].height()
    }

    pub fn heights(&self) -> Vec<i64> {
        self.coords.iter().map(|c| c.height()).collect()
    }

    pub fn validate(&self, params: &GraphParams) -> Result<(), DlGraphError> {
        if self.coords.len() != params.d() {
            return Err(DlGraphError::WrongDimension {
                expected: params.d(),
                found: self.coords.len(),
            });
        }
        for c in &self.coords {
            if c.validate_labels(params.q()).is_err() {
                return Err(DlGraphError::BadParams {
                    d: params.d(),
                    q: params.q(),
                });
            }
        }
        Ok(())
    }

    /// Applies one move: ascend in `up_tree` along `up_label`, descend in
    /// `down_tree`. The move must already be validated against the params.
    pub(crate) fn apply_move(&self, mv: &Move) -> DLVertex {
        let mut coords = self.coords.clone();
        coords[mv.up_tree] = coords[mv.up_tree].successor_unchecked(mv.up_label);
        coords[mv.down_tree] = coords[mv.down_tree].predecessor();
        DLVertex { coords }
    }
}

impl fmt::Display for DLVertex {
    /// Coordinates joined by " x ", e.g. `(1; 0:1) x (-1;)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDlVertexError(alloc::string::String);

impl fmt::Display for ParseDlVertexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid DL vertex: {}", self.0)
    }
}

impl core::error::Error for ParseDlVertexError {}

impl core::str::FromStr for DLVertex {
    type Err = ParseDlVertexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use alloc::string::ToString;
        let coords = s
            .split('x')
            .map(|part| part.trim().parse::<TreeVertex>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| ParseDlVertexError(e.to_string()))?;
        DLVertex::new(coords).map_err(|e| ParseDlVertexError(e.to_string()))
    }
}

/// All `d(d-1)q` neighbors of `v`, in canonical sorted order.
pub fn neighbors(v: &DLVertex, params: &GraphParams) -> Vec<DLVertex> {
    let d = params.d();
    let mut out = Vec::with_capacity(d * (d - 1) * params.q() as usize);
    for up in 0..d {
        for label in 0..params.q() {
            for down in 0..d {
                if down == up {
                    continue;
                }
                out.push(v.apply_move(&Move {
                    up_tree: up,
                    up_label: label,
                    down_tree: down,
                }));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Exact distances to all vertices within `radius` of `center`.
pub fn ball(center: &DLVertex, radius: u64, params: &GraphParams) -> BTreeMap<DLVertex, u64> {
    let mut dist = BTreeMap::new();
    dist.insert(center.clone(), 0u64);
    let mut frontier = alloc::vec![center.clone()];
    for r in 1..=radius {
        let mut next = Vec::new();
        for u in &frontier {
            for n in neighbors(u, params) {
                if !dist.contains_key(&n) {
                    dist.insert(n.clone(), r);
                    next.push(n);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    dist
}

/// Exact graph distance between `v` and `w`, or `None` when it exceeds
/// `radius_cap`. `DL_d(q)` is connected, so `None` never means "no path".
///
/// Runs a bidirectional level-by-level search; both sides expand full levels,
/// so the first meeting confirmed against the expanded radii is exact.
pub fn bfs_distance(
    v: &DLVertex,
    w: &DLVertex,
    params: &GraphParams,
    radius_cap: u64,
) -> Option<u64> {
    if v == w {
        return Some(0);
    }
    let mut dist_a: BTreeMap<DLVertex, u64> = BTreeMap::new();
    let mut dist_b: BTreeMap<DLVertex, u64> = BTreeMap::new();
    dist_a.insert(v.clone(), 0);
    dist_b.insert(w.clone(), 0);
    let mut frontier_a = alloc::vec![v.clone()];
    let mut frontier_b = alloc::vec![w.clone()];
    let mut radius_a = 0u64;
    let mut radius_b = 0u64;
    let mut best: Option<u64> = None;

    while radius_a + radius_b < radius_cap {
        let from_a = frontier_a.len() <= frontier_b.len();
        let (own, other, frontier, radius) = if from_a {
            (&mut dist_a, &dist_b, &mut frontier_a, &mut radius_a)
        } else {
            (&mut dist_b, &dist_a, &mut frontier_b, &mut radius_b)
        };
        let mut next = Vec::new();
        for u in frontier.iter() {
            for n in neighbors(u, params) {
                if own.contains_key(&n) {
                    continue;
                }
                own.insert(n.clone(), *radius + 1);
                if let Some(&db) = other.get(&n) {
                    let cand = *radius + 1 + db;
                    best = Some(best.map_or(cand, |b| b.min(cand)));
                }
                next.push(n);
            }
        }
        *radius += 1;
        *frontier = next;
        if let Some(b) = best {
            if b <= radius_a + radius_b {
                return Some(b);
            }
        }
    }
    best.filter(|&b| b <= radius_cap)
}

/// Path witnessing the distance upper bound `d(v, w) <= Σ_i d_{T_i}(v_i, w_i)`.
///
/// Picks the tree `T_k` with the most negative height change, walks every
/// other tree's geodesic while compensating in `T_k` (label 0 on every free
/// ascent, staying on the descending ray through `v_k`), then finishes the
/// `T_k` geodesic while a spare tree absorbs the compensating steps.
pub fn upper_bound_path(v: &DLVertex, w: &DLVertex, params: &GraphParams) -> Path {
    let d = params.d();
    let mut k = 0usize;
    let mut best_delta = i64::MAX;
    for i in 0..d {
        let delta = w.height(i) - v.height(i);
        if delta < best_delta {
            best_delta = delta;
            k = i;
        }
    }

    let vk = v.coord(k);
    // Ascending in T_k keeps to the two-sided ray through v_k: below v_k's
    // height reuse its branch labels, above it use label 0.
    let ray_label = |h: i64| -> u8 {
        if h < vk.height() {
            vk.label_at(h)
        } else {
            0
        }
    };

    let mut moves = Vec::new();
    let mut hk = vk.height();
    for i in 0..d {
        if i == k {
            continue;
        }
        let vi = v.coord(i);
        let wi = w.coord(i);
        let m = vi.gca(wi).height();
        for _ in 0..(vi.height() - m) {
            moves.push(Move {
                up_tree: k,
                up_label: ray_label(hk),
                down_tree: i,
            });
            hk += 1;
        }
        for level in m..wi.height() {
            moves.push(Move {
                up_tree: i,
                up_label: wi.label_at(level),
                down_tree: k,
            });
            hk -= 1;
        }
    }
    debug_assert_eq!(hk, w.height(k));

    // T_k now sits on the ray through v_k at w's height; finish its geodesic
    // while the lowest-index spare tree absorbs the compensation and undoes it.
    let wk = w.coord(k);
    let m = vk.gca(wk).height();
    let spare = (0..d).find(|&i| i != k).expect("d >= 2");
    for _ in 0..(hk - m) {
        moves.push(Move {
            up_tree: spare,
            up_label: 0,
            down_tree: k,
        });
    }
    for level in m..wk.height() {
        moves.push(Move {
            up_tree: k,
            up_label: wk.label_at(level),
            down_tree: spare,
        });
    }

    let path = Path::new(v.clone(), moves, params).expect("constructed path is valid");
    debug_assert_eq!(path.endpoint(), *w);
    path
}

/// Image of `w` under the height-respecting automorphism carrying `v` to the
/// origin (shift heights by `-h_i(v)`, rotate labels by `-v`'s labels,
/// levelwise). Witnesses vertex transitivity: `d(v, w) = d(o, translate(v, w))`.
pub fn translate(v: &DLVertex, w: &DLVertex, params: &GraphParams) -> DLVertex {
    let q = params.q() as i16;
    let rotate = |a: u8, b: u8| -> u8 { ((a as i16 - b as i16).rem_euclid(q)) as u8 };
    let coords = v
        .coords()
        .iter()
        .zip(w.coords())
        .map(|(vc, wc)| {
            let shift = vc.height();
            let mut branch = BTreeMap::new();
            for &level in wc.branch().keys().chain(vc.branch().keys()) {
                if level >= wc.height() {
                    continue;
                }
                let rotated = rotate(wc.label_at(level), vc.label_at(level));
                if rotated != 0 {
                    branch.insert(level - shift, rotated);
                }
            }
            TreeVertex::new(wc.height() - shift, branch).expect("translated vertex is canonical")
        })
        .collect();
    DLVertex::from_coords_unchecked(coords)
}
