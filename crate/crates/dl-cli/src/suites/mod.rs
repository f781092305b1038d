//! Verification suites: one per acceptance criterion, independently runnable,
//! deterministic for a fixed seed and scale.

mod algebra;
mod graph;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

use dl_core::boundary2::{BoundaryPoint, Side};
use dl_core::lamplighter::LampStand;
use dl_core::periodic::EventuallyPeriodic;
use dl_core::periodic::Orientation;
use dl_core::rays::{two_tree_ray, RayDescriptor};
use dl_core::GraphParams;

use crate::report::SuiteReport;

/// Desk scale is the acceptance configuration; smoke is a fast CI subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Desk,
    Smoke,
}

impl Scale {
    pub fn parse(s: &str) -> Option<Scale> {
        match s {
            "desk" => Some(Scale::Desk),
            "smoke" => Some(Scale::Smoke),
            _ => None,
        }
    }

    /// Picks the desk or smoke value.
    pub fn pick<T>(self, desk: T, smoke: T) -> T {
        match self {
            Scale::Desk => desk,
            Scale::Smoke => smoke,
        }
    }
}

pub const SUITE_NAMES: [&str; 10] = [
    "cayley",
    "sandwich",
    "turns",
    "no2turn",
    "rewrite",
    "lamplighter",
    "action",
    "dynamics",
    "separation",
    "indiscrete",
];

/// Runs one suite by name. Each suite derives its own stream from the seed,
/// so suites can run independently or together with identical results.
pub fn run_suite(name: &str, scale: Scale, seed: u64) -> Option<SuiteReport> {
    let index = SUITE_NAMES.iter().position(|&n| n == name)?;
    let rng = rng_for(seed, index as u64);
    let start = std::time::Instant::now();
    let mut report = match name {
        "cayley" => graph::cayley(scale),
        "sandwich" => graph::sandwich(scale),
        "turns" => graph::turns(scale),
        "no2turn" => graph::no2turn(scale),
        "rewrite" => graph::rewrite(scale, rng),
        "lamplighter" => algebra::lamplighter(scale, rng),
        "action" => algebra::action(scale, rng),
        "dynamics" => algebra::dynamics(scale, rng),
        "separation" => algebra::separation(scale, rng),
        "indiscrete" => algebra::indiscrete(scale, rng),
        _ => return None,
    };
    report.wall_ms = start.elapsed().as_millis();
    Some(report)
}

/// Runs every suite in declaration order.
pub fn run_all(scale: Scale, seed: u64) -> Vec<SuiteReport> {
    SUITE_NAMES
        .iter()
        .map(|name| run_suite(name, scale, seed).expect("known suite"))
        .collect()
}

fn rng_for(seed: u64, suite_index: u64) -> ChaCha8Rng {
    // Distinct, stable streams per suite for one user-facing seed.
    ChaCha8Rng::seed_from_u64(
        seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(suite_index),
    )
}

pub(crate) fn random_lampstand(rng: &mut ChaCha8Rng, q: u8, spread: i64) -> LampStand {
    let count = rng.gen_range(0..5);
    let mut lamps = BTreeMap::new();
    for _ in 0..count {
        lamps.insert(rng.gen_range(-spread..=spread), rng.gen_range(1..q));
    }
    let pos = rng.gen_range(-spread..=spread);
    LampStand::new(lamps, pos, q).expect("generated states are in range")
}

pub(crate) fn random_translating(rng: &mut ChaCha8Rng, q: u8, spread: i64) -> LampStand {
    loop {
        let g = random_lampstand(rng, q, spread);
        if g.exp_t() != 0 {
            return g;
        }
    }
}

pub(crate) fn random_torsion(rng: &mut ChaCha8Rng, q: u8, spread: i64) -> LampStand {
    let mut lamps = BTreeMap::new();
    for _ in 0..rng.gen_range(1..5) {
        lamps.insert(rng.gen_range(-spread..=spread), rng.gen_range(1..q));
    }
    LampStand::new(lamps, 0, q).expect("generated states are in range")
}

/// A boundary point with optional side/class constraints. A `min_class_zero`
/// point never turns (no lit lamps strictly on the descent side).
pub(crate) fn random_boundary_point(
    rng: &mut ChaCha8Rng,
    q: u8,
    side: Side,
    class_zero: bool,
    with_tail: bool,
) -> BoundaryPoint {
    let mut head = BTreeMap::new();
    for _ in 0..rng.gen_range(0..4) {
        let p = if class_zero {
            match side {
                Side::Plus => rng.gen_range(0..8),
                Side::Minus => rng.gen_range(-8..0),
            }
        } else {
            rng.gen_range(-6..=6)
        };
        head.insert(p, rng.gen_range(1..q));
    }
    let (tail, tail_from) = if with_tail && rng.gen_bool(0.5) {
        let len = rng.gen_range(1..=3);
        let word: Vec<u8> = (0..len).map(|_| rng.gen_range(0..q)).collect();
        let from = match (side, class_zero) {
            (Side::Plus, true) => rng.gen_range(0..8),
            (Side::Plus, false) => rng.gen_range(-4..8),
            (Side::Minus, true) => rng.gen_range(-8..0),
            (Side::Minus, false) => rng.gen_range(-8..4),
        };
        head.retain(|&p, _| match side {
            Side::Plus => p < from,
            Side::Minus => p > from,
        });
        (word, from)
    } else {
        (Vec::new(), 0)
    };
    BoundaryPoint::from_parts(side, head, tail, tail_from, q)
        .expect("generated point is canonicalizable")
}

/// A normalized DL_d(q) ray descriptor: ascends `T_0` along a random branch
/// (descending `l` edges first), descends `T_1`, ignores every other tree.
pub(crate) fn random_normalized_descriptor(
    rng: &mut ChaCha8Rng,
    params: &GraphParams,
) -> RayDescriptor {
    let q = params.q();
    let depth = rng.gen_range(0..=2i64);
    let mut head = BTreeMap::new();
    if depth > 0 {
        // The first post-turn ascent must leave the descended edge.
        head.insert(-depth, rng.gen_range(1..q));
    }
    for level in (-depth + 1)..2 {
        let label = rng.gen_range(0..q);
        if label != 0 {
            head.insert(level, label);
        }
    }
    let (tail, tail_from) = if rng.gen_bool(0.7) {
        let len = rng.gen_range(1..=2);
        ((0..len).map(|_| rng.gen_range(0..q)).collect(), 2)
    } else {
        (Vec::new(), 0)
    };
    let branch = EventuallyPeriodic::new(Orientation::TowardPlus, head, tail, tail_from, q)
        .expect("generated branch is canonicalizable");
    two_tree_ray(0, 1, &branch, params)
}
