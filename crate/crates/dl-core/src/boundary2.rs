//! Points of the visual boundary of `DL_2(q)` in the lamp stand model.
//!
//! A boundary point is a side (0: lamplighter walking to +∞, 1: to -∞)
//! together with an eventually periodic lamp configuration. Side 0 configs
//! are zero below a minimum and periodic toward +∞; side 1 mirrors this.
//! Classification, basis neighborhoods, separation witnesses, the `L_q`
//! action, and the north-south dynamics of elements with nonzero `exp_t`
//! all operate on this data exactly.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::dlgraph::GraphParams;
use crate::lamplighter::LampStand;
use crate::paths::Path;
use crate::periodic::{EventuallyPeriodic, Orientation, PeriodicError, SupportBound};
use crate::rays::{
    certify_asymptotic, certify_truncations_geodesic, two_tree_ray, AsymptoticCertificate,
    CertifyError, RayDescriptor, RayError,
};

/// Which deleted Cantor set the point lives in: side 0 puts the lamplighter
/// at +∞ (nontrivial end in `T_0`), side 1 at -∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn index(self) -> u8 {
        match self {
            Side::Plus => 0,
            Side::Minus => 1,
        }
    }

    pub fn from_index(index: u8) -> Option<Side> {
        match index {
            0 => Some(Side::Plus),
            1 => Some(Side::Minus),
            _ => None,
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }

    /// The tree whose end is nontrivial for rays of this side.
    pub fn ascending_tree(self) -> usize {
        self.index() as usize
    }

    fn orientation(self) -> Orientation {
        match self {
            Side::Plus => Orientation::TowardPlus,
            Side::Minus => Orientation::TowardMinus,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// The class `C_n^side`: rays bottoming out after descending exactly `n`
/// edges in the side's tree (`n = 0`: never turning).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassIndex {
    pub side: Side,
    pub n: u64,
}

impl fmt::Display for ClassIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C_{}^{}", self.n, self.side)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundaryPoint {
    side: Side,
    config: EventuallyPeriodic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundaryError {
    Periodic(PeriodicError),
    OrientationMismatch,
    SamePoint,
    NotBothNeverTurning,
    DifferentSides,
    ZeroTranslation,
    WrongAttractorSide { expected: Side },
    NotRankTwo { d: usize },
    Ray(RayError),
    NotAsymptotic(CertifyError),
    SeparationSearchExhausted,
}

impl fmt::Display for BoundaryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryError::Periodic(e) => write!(f, "{e}"),
            BoundaryError::OrientationMismatch => {
                write!(f, "config orientation does not match the side")
            }
            BoundaryError::SamePoint => write!(f, "the two boundary points must be distinct"),
            BoundaryError::NotBothNeverTurning => {
                write!(f, "both points must lie in C_0 of the same side")
            }
            BoundaryError::DifferentSides => write!(f, "points lie on different sides"),
            BoundaryError::ZeroTranslation => {
                write!(
                    f,
                    "the element has exp_t = 0, so it has no attracting point"
                )
            }
            BoundaryError::WrongAttractorSide { expected } => {
                write!(
                    f,
                    "the point must lie on side {expected} for this iteration"
                )
            }
            BoundaryError::NotRankTwo { d } => {
                write!(f, "boundary points of DL_2(q) require d = 2, got {d}")
            }
            BoundaryError::Ray(e) => write!(f, "{e}"),
            BoundaryError::NotAsymptotic(e) => write!(f, "{e}"),
            BoundaryError::SeparationSearchExhausted => {
                write!(f, "no separating scale found (points may coincide)")
            }
        }
    }
}

impl core::error::Error for BoundaryError {}

impl From<PeriodicError> for BoundaryError {
    fn from(e: PeriodicError) -> Self {
        BoundaryError::Periodic(e)
    }
}

impl From<RayError> for BoundaryError {
    fn from(e: RayError) -> Self {
        BoundaryError::Ray(e)
    }
}

impl BoundaryPoint {
    pub fn new(side: Side, config: EventuallyPeriodic) -> Result<Self, BoundaryError> {
        if config.orientation() != side.orientation() {
            return Err(BoundaryError::OrientationMismatch);
        }
        Ok(BoundaryPoint { side, config })
    }

    /// Builds from literal head/tail data, canonicalizing.
    pub fn from_parts(
        side: Side,
        head: BTreeMap<i64, u8>,
        tail: Vec<u8>,
        tail_from: i64,
        q: u8,
    ) -> Result<Self, BoundaryError> {
        let config = EventuallyPeriodic::new(side.orientation(), head, tail, tail_from, q)?;
        Ok(BoundaryPoint { side, config })
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn config(&self) -> &EventuallyPeriodic {
        &self.config
    }

    pub fn lamp(&self, position: i64) -> u8 {
        self.config.get(position)
    }

    /// Which `C_n` class the point falls in.
    pub fn classify(&self) -> ClassIndex {
        let n = match self.side {
            Side::Plus => match self.config.support_min() {
                SupportBound::At(p) if p < 0 => (-p) as u64,
                _ => 0,
            },
            Side::Minus => match self.config.support_max() {
                SupportBound::At(p) if p >= 0 => (p + 1) as u64,
                _ => 0,
            },
        };
        ClassIndex { side: self.side, n }
    }

    /// The branch the canonical ray ascends, indexed by tree level.
    fn ascent_branch(&self) -> EventuallyPeriodic {
        match self.side {
            // Side 0: lamp position p is exposed at T_0 level p.
            Side::Plus => self.config.clone(),
            // Side 1: lamp position p sits at T_1 level -p - 1.
            Side::Minus => {
                EventuallyPeriodic::from_raw(Orientation::TowardPlus, self.config.raw().shift(-1))
            }
        }
    }

    fn from_ascent_branch(side: Side, branch: &EventuallyPeriodic) -> BoundaryPoint {
        let config = match side {
            Side::Plus => branch.clone(),
            Side::Minus => {
                EventuallyPeriodic::from_raw(Orientation::TowardMinus, branch.raw().shift(1))
            }
        };
        BoundaryPoint { side, config }
    }

    /// The canonical representative ray: descend `n` edges in the side's
    /// tree (label 0 on the pre-turn ascents), then climb its configuration
    /// forever.
    pub fn descriptor(&self, params: &GraphParams) -> RayDescriptor {
        let up = self.side.ascending_tree();
        two_tree_ray(up, 1 - up, &self.ascent_branch(), params)
    }

    /// Length-`len` prefix of the canonical representative.
    pub fn canonical_ray(&self, len: usize, params: &GraphParams) -> Path {
        self.descriptor(params).truncate(len)
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "side {} lamps {}", self.side, self.config)
    }
}

/// Do the canonical rays of two same-class points agree on `[0, k]`? The
/// shared descent exposes lamp positions only through the window the first
/// `k` moves can reach.
fn rays_agree_on_window(x: &BoundaryPoint, center: &BoundaryPoint, n: u64, k: u64) -> bool {
    let n = n as i64;
    let k = k as i64;
    let window = match x.side {
        Side::Plus => (-n, k - 2 * n - 1),
        Side::Minus => (2 * n - k, n - 1),
    };
    (window.0..=window.1).all(|p| x.lamp(p) == center.lamp(p))
}

/// Membership of `x` in the basis neighborhood `B_[0,k](center)` (the ε is
/// immaterial for 0 < ε < 1 and is dropped from the data model).
pub fn basis_membership(x: &BoundaryPoint, center: &BoundaryPoint, k: u64) -> bool {
    if k == 0 {
        // Every ray emanates from the origin, so the scale-0 neighborhood is
        // the whole boundary.
        return true;
    }
    let cc = center.classify();
    let cx = x.classify();
    if cc.n > 0 {
        if k <= cc.n {
            // B = C_{k,∞}^side ∪ C_0^(other side)
            (x.side() == center.side() && cx.n >= k) || (x.side() != center.side() && cx.n == 0)
        } else {
            x.side() == center.side() && cx.n == cc.n && rays_agree_on_window(x, center, cc.n, k)
        }
    } else {
        // B = C_{k,∞}^(other side) ∪ {same-class rays agreeing on [0,k]}
        (x.side() != center.side() && cx.n >= k)
            || (x.side() == center.side() && cx.n == 0 && rays_agree_on_window(x, center, 0, k))
    }
}

/// For distinct `x, y` never turning on the same side, a point of
/// `C_m^(other side)` with `m >= k` lying in both scale-`k` neighborhoods:
/// the limit construction behind non-Hausdorffness.
pub fn non_hausdorff_witness(
    x: &BoundaryPoint,
    y: &BoundaryPoint,
    k: u64,
) -> Result<BoundaryPoint, BoundaryError> {
    if x == y {
        return Err(BoundaryError::SamePoint);
    }
    if x.side() != y.side() {
        return Err(BoundaryError::DifferentSides);
    }
    if x.classify().n != 0 || y.classify().n != 0 {
        return Err(BoundaryError::NotBothNeverTurning);
    }
    let m = k.max(1) as i64;
    let side = x.side().other();
    let head: BTreeMap<i64, u8> = match side {
        // A point of C_m^1 has its highest lit lamp at m - 1.
        Side::Minus => [(m - 1, 1u8)].into_iter().collect(),
        // A point of C_m^0 has its lowest lit lamp at -m.
        Side::Plus => [(-m, 1u8)].into_iter().collect(),
    };
    let witness = BoundaryPoint::from_parts(side, head, Vec::new(), 0, 2)?;
    debug_assert!(basis_membership(&witness, x, k));
    debug_assert!(basis_membership(&witness, y, k));
    Ok(witness)
}

/// A scale separating two distinct boundary points, with the clopen class
/// that separates them when one is available.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationWitness {
    /// Minimal `k` with `y ∉ B_[0,k](x)` and `x ∉ B_[0,k](y)`.
    pub k: u64,
    /// `classify(x)` when it has `n > 0` and differs from `classify(y)`:
    /// a clopen set containing `x` but not `y`.
    pub clopen: Option<ClassIndex>,
}

pub fn separation_witness(
    x: &BoundaryPoint,
    y: &BoundaryPoint,
) -> Result<SeparationWitness, BoundaryError> {
    if x == y {
        return Err(BoundaryError::SamePoint);
    }
    let cx = x.classify();
    let cy = y.classify();
    // A scale that certainly separates, bounding the linear search.
    let bound = if cx != cy {
        cx.n.max(cy.n) + 1
    } else {
        let n = cx.n as i64;
        let p = EventuallyPeriodic::first_difference(x.config(), y.config())
            .expect("distinct same-class points differ somewhere");
        match x.side() {
            Side::Plus => (2 * n + p + 1) as u64,
            Side::Minus => (2 * n - p) as u64,
        }
    };
    for k in 0..=bound {
        if !basis_membership(y, x, k) && !basis_membership(x, y, k) {
            let clopen = if cx.n > 0 && cx != cy { Some(cx) } else { None };
            return Ok(SeparationWitness { k, clopen });
        }
    }
    Err(BoundaryError::SeparationSearchExhausted)
}

/// The action of `g` on a boundary point: shift the configuration by
/// `exp_t(g)` and switch `g`'s lamps on top. The side is invariant.
pub fn act(g: &LampStand, x: &BoundaryPoint, q: u8) -> BoundaryPoint {
    let shifted = x.config().shift(g.exp_t());
    let replacements: BTreeMap<i64, u8> = g
        .lamps()
        .iter()
        .map(|(&p, &s)| (p, (s + shifted.get(p)) % q))
        .collect();
    BoundaryPoint {
        side: x.side(),
        config: shifted.with_replacements(&replacements),
    }
}

/// The attracting fixed point `g^∞` of an element with `exp_t(g) != 0`: the
/// lamp stand limit of the powers of `g`. Its configuration at `p` is the
/// mod-q sum of `g`'s lamps over the backward orbit `p - j·exp_t(g)`, with
/// period dividing `|exp_t(g)|` beyond `g`'s support.
pub fn power_infinity(g: &LampStand, q: u8) -> Result<BoundaryPoint, BoundaryError> {
    let e = g.exp_t();
    if e == 0 {
        return Err(BoundaryError::ZeroTranslation);
    }
    let side = if e > 0 { Side::Plus } else { Side::Minus };
    let orient = side.orientation();
    let (Some(lo), Some(hi)) = (g.min_lit(), g.max_lit()) else {
        return Ok(BoundaryPoint {
            side,
            config: EventuallyPeriodic::zero(orient),
        });
    };
    let step = e.abs();
    let orbit_sum = |p: i64| -> u8 {
        let mut sum = 0u16;
        let mut s = p;
        while (e > 0 && s >= lo) || (e < 0 && s <= hi) {
            sum += g.lamp(s) as u16;
            s -= e;
        }
        (sum % q as u16) as u8
    };
    let (head, tail, tail_from) = match side {
        Side::Plus => {
            let head = (lo..hi).map(|p| (p, orbit_sum(p))).collect();
            let tail = (hi..hi + step).map(orbit_sum).collect();
            (head, tail, hi)
        }
        Side::Minus => {
            let head = ((lo + 1)..=hi).map(|p| (p, orbit_sum(p))).collect();
            let tail = ((lo - step + 1)..=lo).rev().map(orbit_sum).collect();
            (head, tail, lo)
        }
    };
    let config = EventuallyPeriodic::new(orient, head, tail, tail_from, q)?;
    Ok(BoundaryPoint { side, config })
}

/// How far `g^n · x` agrees with `g^∞` on the attractor side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    /// The configurations coincide entirely.
    Everywhere,
    /// Side 0: agreement on all positions `< bound`; side 1: on all `> bound`.
    Until(i64),
}

/// For `n = 1..=n_max`, the agreement window of `g^n · x` with `g^∞`.
pub fn dynamics_report(
    g: &LampStand,
    x: &BoundaryPoint,
    n_max: u32,
    q: u8,
) -> Result<Vec<Agreement>, BoundaryError> {
    let e = g.exp_t();
    if e == 0 {
        return Err(BoundaryError::ZeroTranslation);
    }
    let attractor = power_infinity(g, q)?;
    if x.side() != attractor.side() {
        return Err(BoundaryError::WrongAttractorSide {
            expected: attractor.side(),
        });
    }
    let mut out = Vec::with_capacity(n_max as usize);
    let mut cur = x.clone();
    for _ in 0..n_max {
        cur = act(g, &cur, q);
        out.push(
            match EventuallyPeriodic::first_difference(cur.config(), attractor.config()) {
                None => Agreement::Everywhere,
                Some(p) => Agreement::Until(p),
            },
        );
    }
    Ok(out)
}

/// Rebases a geodesic ray descriptor in `DL_2(q)` to the origin: the class
/// with the same pair of tree ends, validated by an asymptoticity
/// certificate against the canonical representative.
pub fn rebase_ray(
    r: &RayDescriptor,
    params: &GraphParams,
    geodesic_cap: u64,
) -> Result<(BoundaryPoint, AsymptoticCertificate), BoundaryError> {
    if params.d() != 2 || r.base().d() != 2 {
        return Err(BoundaryError::NotRankTwo {
            d: params.d().max(r.base().d()),
        });
    }
    certify_truncations_geodesic(r, geodesic_cap, params)?;
    let side = if r.eventual().up_tree == 0 {
        Side::Plus
    } else {
        Side::Minus
    };
    let class = BoundaryPoint::from_ascent_branch(side, &r.up_branch());
    let cert = certify_asymptotic(r, &class.descriptor(params), params)
        .map_err(BoundaryError::NotAsymptotic)?;
    Ok((class, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lamplighter::eval_word;
    use crate::paths::Move;

    fn params2(q: u8) -> GraphParams {
        GraphParams::new(2, q).unwrap()
    }

    fn point(side: Side, head: &[(i64, u8)], tail: &[u8], from: i64) -> BoundaryPoint {
        BoundaryPoint::from_parts(side, head.iter().copied().collect(), tail.to_vec(), from, 4)
            .unwrap()
    }

    fn class(side: Side, n: u64) -> ClassIndex {
        ClassIndex { side, n }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            point(Side::Plus, &[(-3, 1)], &[], 0).classify(),
            class(Side::Plus, 3)
        );
        assert_eq!(
            point(Side::Plus, &[], &[], 0).classify(),
            class(Side::Plus, 0)
        );
        assert_eq!(
            point(Side::Minus, &[(4, 1)], &[], 0).classify(),
            class(Side::Minus, 5)
        );
        assert_eq!(
            point(Side::Minus, &[(-2, 1)], &[], 0).classify(),
            class(Side::Minus, 0)
        );
        // Periodic tails count toward the class through their support.
        assert_eq!(
            point(Side::Plus, &[], &[1], -4).classify(),
            class(Side::Plus, 4)
        );
    }

    #[test]
    fn canonical_ray_examples() {
        let params = params2(2);
        // C_0^0 with no lamps: every move ascends T_0 with label 0.
        let x = point(Side::Plus, &[], &[], 0);
        let ray = x.canonical_ray(4, &params);
        assert_eq!(ray.len(), 4);
        for mv in ray.moves() {
            assert_eq!((mv.up_tree, mv.up_label, mv.down_tree), (0, 0, 1));
        }

        // C_2^0 with lamp -2 lit: down, down, then up with labels 1, 0, 0.
        let y = point(Side::Plus, &[(-2, 1)], &[], 0);
        let ray = y.canonical_ray(5, &params);
        let expected = [
            Move {
                up_tree: 1,
                up_label: 0,
                down_tree: 0,
            },
            Move {
                up_tree: 1,
                up_label: 0,
                down_tree: 0,
            },
            Move {
                up_tree: 0,
                up_label: 1,
                down_tree: 1,
            },
            Move {
                up_tree: 0,
                up_label: 0,
                down_tree: 1,
            },
            Move {
                up_tree: 0,
                up_label: 0,
                down_tree: 1,
            },
        ];
        assert_eq!(ray.moves(), expected);
        assert!(ray.is_geodesic(&params, 14).unwrap());

        // Well-definedness: equal data gives identical rays.
        let z = point(Side::Plus, &[(-2, 1)], &[], 0);
        assert_eq!(
            y.canonical_ray(9, &params).moves(),
            z.canonical_ray(9, &params).moves()
        );

        // Side 1 rays walk right first, then set lamps downward.
        let m = point(Side::Minus, &[(1, 1)], &[], 0);
        assert_eq!(m.classify(), class(Side::Minus, 2));
        let ray = m.canonical_ray(4, &params);
        assert_eq!(
            ray.moves()[0],
            Move {
                up_tree: 0,
                up_label: 0,
                down_tree: 1
            }
        );
        assert_eq!(
            ray.moves()[2],
            Move {
                up_tree: 1,
                up_label: 1,
                down_tree: 0
            }
        );
        assert!(ray.is_geodesic(&params, 14).unwrap());
    }

    #[test]
    fn canonical_rays_are_geodesic() {
        for q in [2u8, 3] {
            let params = params2(q);
            let samples = [
                point(Side::Plus, &[], &[], 0),
                point(Side::Plus, &[(-2, 1)], &[1, 0], 3),
                point(Side::Plus, &[(0, 1)], &[], 0),
                point(Side::Minus, &[], &[1], 2),
                point(Side::Minus, &[(3, 1), (-1, 1)], &[], 0),
            ];
            for x in samples {
                let ray = x.canonical_ray(12, &params);
                assert!(ray.is_geodesic(&params, 14).unwrap(), "{x}");
            }
        }
    }

    #[test]
    fn scale_zero_neighborhood_is_everything() {
        let pts = [
            point(Side::Plus, &[(-3, 1)], &[], 0),
            point(Side::Plus, &[], &[], 0),
            point(Side::Minus, &[(4, 1)], &[], 0),
            point(Side::Minus, &[], &[1], -2),
        ];
        for x in &pts {
            for y in &pts {
                assert!(basis_membership(x, y, 0));
            }
        }
    }

    #[test]
    fn basis_membership_cases() {
        // Center in C_3^0, small k: membership is class-level.
        let center = point(Side::Plus, &[(-3, 1)], &[], 0);
        let in_c5 = point(Side::Plus, &[(-5, 1)], &[], 0);
        let in_c1 = point(Side::Plus, &[(-1, 1)], &[], 0);
        let c0_other = point(Side::Minus, &[], &[], 0);
        assert!(basis_membership(&in_c5, &center, 2));
        assert!(!basis_membership(&in_c1, &center, 2));
        assert!(basis_membership(&c0_other, &center, 2));

        // k beyond n: class must match and the exposed lamps agree.
        let same_lamps = point(Side::Plus, &[(-3, 1), (2, 1)], &[], 0);
        let other_lamp = point(Side::Plus, &[(-3, 1), (-2, 1)], &[], 0);
        assert!(basis_membership(&same_lamps, &center, 5));
        assert!(!basis_membership(&other_lamp, &center, 5));
        assert!(!basis_membership(&in_c5, &center, 5));

        // Reflexivity at any scale.
        for k in 0..10 {
            assert!(basis_membership(&center, &center, k));
            assert!(basis_membership(&c0_other, &c0_other, k));
        }

        // Center never turning: the opposite deep classes pour in.
        let c0 = point(Side::Plus, &[(1, 1)], &[], 0);
        let deep_other = point(Side::Minus, &[(6, 1)], &[], 0);
        assert_eq!(deep_other.classify().n, 7);
        assert!(basis_membership(&deep_other, &c0, 4));
        assert!(!basis_membership(&c0_other, &c0, 4));
    }

    #[test]
    fn basis_membership_symmetric_within_a_class() {
        let a = point(Side::Plus, &[(-2, 1), (3, 1)], &[], 0);
        let b = point(Side::Plus, &[(-2, 1), (5, 2)], &[], 0);
        for k in 0..12 {
            assert_eq!(basis_membership(&a, &b, k), basis_membership(&b, &a, k));
        }
    }

    #[test]
    fn non_hausdorff_witness_examples() {
        let x = point(Side::Plus, &[(0, 1)], &[], 0);
        let y = point(Side::Plus, &[(2, 1)], &[], 0);
        for k in 0..=8 {
            let z = non_hausdorff_witness(&x, &y, k).unwrap();
            assert_eq!(z.side(), Side::Minus);
            assert!(z.classify().n >= k.max(1));
            assert!(basis_membership(&z, &x, k));
            assert!(basis_membership(&z, &y, k));
        }
        assert!(non_hausdorff_witness(&x, &x, 3).is_err());
        let turning = point(Side::Plus, &[(-1, 1)], &[], 0);
        assert!(non_hausdorff_witness(&x, &turning, 3).is_err());
    }

    #[test]
    fn separation_witness_examples() {
        // Different depths on the same side: k = max(n, n') + 1, clopen C_3^0.
        let x = point(Side::Plus, &[(-3, 1)], &[], 0);
        let y = point(Side::Plus, &[(-5, 1)], &[], 0);
        let w = separation_witness(&x, &y).unwrap();
        assert_eq!(w.k, 4);
        assert_eq!(w.clopen, Some(class(Side::Plus, 3)));

        // Same class C_2^0, first lamp difference at position 7:
        // k = 2n + p + 1 = 12, found by search.
        let a = point(Side::Plus, &[(-2, 1)], &[], 0);
        let b = point(Side::Plus, &[(-2, 1), (7, 1)], &[], 0);
        let w = separation_witness(&a, &b).unwrap();
        assert_eq!(w.k, 12);
        assert_eq!(w.clopen, None);

        // Opposite never-turning classes separate at k = 1.
        let c = point(Side::Plus, &[], &[], 0);
        let d = point(Side::Minus, &[], &[], 0);
        let w = separation_witness(&c, &d).unwrap();
        assert_eq!(w.k, 1);

        assert!(separation_witness(&c, &c).is_err());
    }

    #[test]
    fn separation_always_validates() {
        let pts = [
            point(Side::Plus, &[(-3, 1)], &[1], 2),
            point(Side::Plus, &[(-3, 2)], &[], 0),
            point(Side::Plus, &[], &[2, 1], 0),
            point(Side::Minus, &[(2, 1)], &[], 0),
            point(Side::Minus, &[], &[3], -1),
        ];
        for x in &pts {
            for y in &pts {
                if x == y {
                    continue;
                }
                let w = separation_witness(x, y).unwrap();
                assert!(!basis_membership(y, x, w.k));
                assert!(!basis_membership(x, y, w.k));
                if w.k > 0 {
                    // Minimality: one scale earlier fails to separate.
                    assert!(basis_membership(y, x, w.k - 1) || basis_membership(x, y, w.k - 1));
                }
                if let Some(c) = w.clopen {
                    assert_eq!(x.classify(), c);
                    assert_ne!(y.classify(), c);
                }
            }
        }
    }

    #[test]
    fn action_of_generators() {
        let q = 2;
        let x = point(Side::Plus, &[(0, 1), (3, 1)], &[], 0);
        let t = eval_word("t", q).unwrap();
        let shifted = act(&t, &x, q);
        assert_eq!(shifted.lamp(1), 1);
        assert_eq!(shifted.lamp(4), 1);
        assert_eq!(shifted.lamp(0), 0);
        assert_eq!(shifted.side(), Side::Plus);

        let t_inv = t.inverse(q);
        assert_eq!(act(&t_inv, &shifted, q), x);

        // a_k switches exactly lamp k.
        let a5 = eval_word("t^5 a t^-5", q).unwrap();
        let switched = act(&a5, &x, q);
        assert_eq!(switched.lamp(5), 1);
        assert_eq!(switched.lamp(0), 1);
        let back = act(&a5, &switched, q);
        assert_eq!(back, x);

        // at: shift right, then switch lamp 0.
        let at = eval_word("at", q).unwrap();
        let moved = act(&at, &x, q);
        assert_eq!(moved.lamp(0), 1);
        assert_eq!(moved.lamp(1), 1);
        assert_eq!(moved.lamp(4), 1);

        // (at)^-1: switch lamp 0, then shift left.
        let at_inv = at.inverse(q);
        assert_eq!(act(&at_inv, &moved, q), x);

        assert_eq!(act(&LampStand::identity(), &x, q), x);
    }

    #[test]
    fn action_is_a_group_action() {
        let q = 3;
        let words = ["t^2 (a^2t) t^-1", "a t a", "(at)^-2 a^2", "t^-3 a"];
        let x = point(Side::Minus, &[(1, 2)], &[1], -2);
        for gw in words {
            for hw in words {
                let g = eval_word(gw, q).unwrap();
                let h = eval_word(hw, q).unwrap();
                assert_eq!(act(&g, &act(&h, &x, q), q), act(&g.multiply(&h, q), &x, q));
            }
        }
    }

    #[test]
    fn shift_moves_the_class_down() {
        let q = 2;
        let t = eval_word("t", q).unwrap();
        for n in 2..6 {
            let x = point(Side::Plus, &[(-n, 1)], &[], 0);
            assert_eq!(x.classify().n, n as u64);
            assert_eq!(act(&t, &x, q).classify().n, (n - 1) as u64);
        }
    }

    #[test]
    fn power_infinity_examples() {
        let q = 2;
        let t = eval_word("t", q).unwrap();
        let tinf = power_infinity(&t, q).unwrap();
        assert_eq!(tinf.side(), Side::Plus);
        assert!(tinf.config().is_zero());

        let at = eval_word("at", q).unwrap();
        let atinf = power_infinity(&at, q).unwrap();
        assert_eq!(atinf.side(), Side::Plus);
        assert!(atinf.config().head_literal().is_empty());
        assert_eq!(atinf.config().tail_literal(), &[1]);
        assert_eq!(atinf.config().tail_from_literal(), 0);

        assert!(power_infinity(&eval_word("a", q).unwrap(), q).is_err());

        // g^-∞ = (g^-1)^∞ lands on the other side.
        let g = eval_word("t^2 a t^-1 (at)", q).unwrap();
        let ginv_inf = power_infinity(&g.inverse(q), q).unwrap();
        assert_eq!(ginv_inf.side(), Side::Minus);
    }

    #[test]
    fn power_infinity_freezes_iterated_composition() {
        let q = 3;
        for word in ["t (a^2 t)", "t^2 a", "(at)^3 t^-1", "t^-2 a^2", "a t^-1 a"] {
            let g = eval_word(word, q).unwrap();
            let limit = power_infinity(&g, q).unwrap();
            let e = g.exp_t();
            // Enough iterations to freeze the window [-30, 30].
            let n = (70 / e.unsigned_abs()).max(3) as i64;
            let gn = g.pow(n, q);
            for p in -30..=30 {
                assert_eq!(limit.lamp(p), gn.lamp(p), "word {word} at {p}");
            }
        }
    }

    #[test]
    fn dynamics_report_examples() {
        let q = 2;
        let t = eval_word("t", q).unwrap();
        let x = point(Side::Plus, &[(-1, 1)], &[], 0);
        let report = dynamics_report(&t, &x, 6, q).unwrap();
        // t^n · x has its lamp at n - 1 while t^∞ has none: agreement below
        // n - 1 exactly.
        for (i, a) in report.iter().enumerate() {
            let n = i as i64 + 1;
            assert_eq!(*a, Agreement::Until(n - 1));
        }

        // The attractor itself is fixed.
        let fixed = power_infinity(&t, q).unwrap();
        let report = dynamics_report(&t, &fixed, 3, q).unwrap();
        assert!(report.iter().all(|a| *a == Agreement::Everywhere));

        // Side mismatch and torsion elements are rejected.
        let wrong = point(Side::Minus, &[], &[], 0);
        assert!(dynamics_report(&t, &wrong, 3, q).is_err());
        let torsion = eval_word("a", q).unwrap();
        assert!(dynamics_report(&torsion, &x, 3, q).is_err());
    }

    #[test]
    fn dynamics_extrapolate_to_larger_q() {
        // q = 2 is the established case; the lamp model extends to general q,
        // so treat this as an extrapolation check.
        let q = 3;
        let g = eval_word("t (a^2 t)", q).unwrap();
        let limit = power_infinity(&g, q).unwrap();
        assert_eq!(limit.side(), Side::Plus);
        let x = point(Side::Plus, &[(0, 2)], &[], 0);
        let report = dynamics_report(&g, &x, 8, q).unwrap();
        let mut last = i64::MIN;
        for a in report {
            match a {
                Agreement::Until(w) => {
                    assert!(w > last);
                    last = w;
                }
                Agreement::Everywhere => {}
            }
        }
    }

    #[test]
    fn torsion_squares_to_identity_action() {
        let q = 2;
        let x = point(Side::Plus, &[(2, 1)], &[1, 0], 4);
        for word in ["a", "t a t^-1 a", "t^3 a t^-3"] {
            let g = eval_word(word, q).unwrap();
            assert_eq!(g.exp_t(), 0);
            assert_eq!(act(&g, &act(&g, &x, q), q), x);
        }
    }

    #[test]
    fn rebase_examples() {
        let params = params2(2);
        // A ray already based at the origin recovers its own class.
        let x = point(Side::Plus, &[(-2, 1), (1, 1)], &[], 0);
        let own = x.descriptor(&params);
        let (class, cert) = rebase_ray(&own, &params, 10).unwrap();
        assert_eq!(class, x);
        assert_eq!(cert.tree_distances, alloc::vec![0, 0]);

        // Based at the neighbor ((1; 0:1), (-1;)), ascending T_0 with all-0
        // labels: the class C_0^0 with lamp 0 lit.
        let at = crate::dlgraph::DLVertex::new(alloc::vec![
            "(1; 0:1)".parse().unwrap(),
            "(-1;)".parse().unwrap()
        ])
        .unwrap();
        let ray = RayDescriptor::new(
            Path::empty(at),
            crate::rays::EventualPattern {
                up_tree: 0,
                labels: alloc::vec![0],
                down_tree: 1,
            },
            &params,
        )
        .unwrap();
        let (class, cert) = rebase_ray(&ray, &params, 10).unwrap();
        assert_eq!(class, point(Side::Plus, &[(0, 1)], &[], 0));
        assert_eq!(
            class.classify(),
            ClassIndex {
                side: Side::Plus,
                n: 0
            }
        );
        assert!(cert.distance_bound > 0);

        // Side-1 rays land on side 1.
        let y = point(Side::Minus, &[(2, 1)], &[1], -1);
        let (back, _) = rebase_ray(&y.descriptor(&params), &params, 10).unwrap();
        assert_eq!(back, y);
    }

    #[test]
    fn rebase_rejects_non_geodesic_descriptors() {
        let params = params2(2);
        // Starts with an immediate backtrack: down T_0 then up the same edge.
        let bad = RayDescriptor::new(
            Path::new(
                crate::dlgraph::DLVertex::origin(&params),
                alloc::vec![
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
                ],
                &params,
            )
            .unwrap(),
            crate::rays::EventualPattern {
                up_tree: 0,
                labels: alloc::vec![0],
                down_tree: 1,
            },
            &params,
        )
        .unwrap();
        assert!(matches!(
            rebase_ray(&bad, &params, 8),
            Err(BoundaryError::Ray(RayError::TruncationNotGeodesic { .. }))
        ));
    }
}
