//! Graph-side suites: the two-oracle Cayley check, the distance sandwich,
//! the geodesic turn theorem, the no-2-turn-ray shortcuts, and rewriting
//! soundness.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use dl_core::dlgraph::{ball, bfs_distance, translate, upper_bound_path};
use dl_core::lamplighter::{generators, LampStand};
use dl_core::paths::{apply, two_turn_shortcut, Move, Path};
use dl_core::{DLVertex, GraphParams};

use super::Scale;
use crate::report::SuiteReport;

/// Criterion 1: coordinate-BFS distances agree exactly with word lengths from
/// generator-multiplication BFS, on full balls.
pub fn cayley(scale: Scale) -> SuiteReport {
    let mut report = SuiteReport::new("cayley");
    let configs: [(u8, u64); 2] = scale.pick([(2, 6), (3, 5)], [(2, 4), (3, 3)]);
    for (q, radius) in configs {
        let params = GraphParams::new(2, q).expect("valid params");
        let origin = DLVertex::origin(&params);
        let coord = ball(&origin, radius, &params);

        // Independent oracle: breadth-first search over the group itself,
        // multiplying by the generating set and mapping through the bijection.
        let gens = generators(q);
        let mut word_len: BTreeMap<DLVertex, u64> = BTreeMap::new();
        word_len.insert(origin.clone(), 0);
        let mut frontier = vec![LampStand::identity()];
        for r in 1..=radius {
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

        report.check(word_len.len() == coord.len(), || {
            (
                format!("q={q} r={radius}: ball sizes"),
                format!("{}", coord.len()),
                format!("{}", word_len.len()),
            )
        });
        for (v, &dist) in &coord {
            report.check(word_len.get(v) == Some(&dist), || {
                (
                    format!("q={q} r={radius}: {v}"),
                    format!("word length {dist}"),
                    format!("{:?}", word_len.get(v)),
                )
            });
        }
    }
    report
}

/// Criterion 2: `max_i d_(T_i) <= d <= Σ_i d_(T_i)` on all ball pairs, and the
/// compensating path always reaches its target within the upper bound.
pub fn sandwich(scale: Scale) -> SuiteReport {
    let mut report = SuiteReport::new("sandwich");
    let configs: [(usize, u8, u64); 2] = scale.pick([(2, 2, 5), (3, 2, 4)], [(2, 2, 3), (3, 2, 2)]);
    for (d, q, radius) in configs {
        let params = GraphParams::new(d, q).expect("valid params");
        let origin = DLVertex::origin(&params);
        let b = ball(&origin, radius, &params);
        // Pair distances via the height-respecting translation into one
        // origin-centered distance table (an exact isometry).
        let table = ball(&origin, 2 * radius, &params);
        for v in b.keys() {
            for w in b.keys() {
                let moved = translate(v, w, &params);
                let Some(&dist) = table.get(&moved) else {
                    report.check(false, || {
                        (
                            format!("d={d} q={q}: {v} to {w}"),
                            "translated vertex inside the distance table".into(),
                            "missing".into(),
                        )
                    });
                    continue;
                };
                let tree_dists: Vec<u64> =
                    (0..d).map(|i| v.coord(i).distance(w.coord(i))).collect();
                let lower = tree_dists.iter().copied().max().unwrap_or(0);
                let upper: u64 = tree_dists.iter().sum();
                report.check(lower <= dist && dist <= upper, || {
                    (
                        format!("d={d} q={q}: sandwich {v} to {w}"),
                        format!("{lower} <= d <= {upper}"),
                        format!("d = {dist}"),
                    )
                });
                let path = upper_bound_path(v, w, &params);
                report.check(path.endpoint() == *w && path.len() as u64 <= upper, || {
                    (
                        format!("d={d} q={q}: upper path {v} to {w}"),
                        format!("endpoint {w}, length <= {upper}"),
                        format!("endpoint {}, length {}", path.endpoint(), path.len()),
                    )
                });
            }
        }
    }
    report
}

/// Criterion 3: every geodesic from the origin into the stated balls has at
/// most one turn per tree, and at most two in total when `d = 2`.
///
/// Every geodesic prefix is itself a geodesic from the origin, so a single
/// depth-first walk over distance-increasing moves visits each geodesic to
/// each ball vertex exactly once.
pub fn turns(scale: Scale) -> SuiteReport {
    let mut report = SuiteReport::new("turns");
    let configs: [(usize, u8, u64); 3] = scale.pick(
        [(2, 2, 8), (2, 3, 6), (3, 2, 6)],
        [(2, 2, 5), (2, 3, 4), (3, 2, 4)],
    );
    for (d, q, radius) in configs {
        let params = GraphParams::new(d, q).expect("valid params");
        let origin = DLVertex::origin(&params);
        let dist = ball(&origin, radius, &params);
        let mut state = TurnsDfs {
            params: &params,
            dist: &dist,
            radius,
            descending: vec![false; d],
            counts: vec![0; d],
            total: 0,
            report: &mut report,
            label: format!("d={d} q={q} r={radius}"),
        };
        state.walk(&origin, 0);
    }
    report
}

struct TurnsDfs<'a> {
    params: &'a GraphParams,
    dist: &'a BTreeMap<DLVertex, u64>,
    radius: u64,
    descending: Vec<bool>,
    counts: Vec<u64>,
    total: u64,
    report: &'a mut SuiteReport,
    label: String,
}

impl TurnsDfs<'_> {
    fn walk(&mut self, cur: &DLVertex, len: u64) {
        if len == self.radius {
            return;
        }
        let d = self.params.d();
        for up_tree in 0..d {
            for up_label in 0..self.params.q() {
                for down_tree in 0..d {
                    if down_tree == up_tree {
                        continue;
                    }
                    let mv = Move {
                        up_tree,
                        up_label,
                        down_tree,
                    };
                    let next = apply(cur, &mv, self.params).expect("move is valid");
                    if self.dist.get(&next) != Some(&(len + 1)) {
                        continue;
                    }
                    let was_up = self.descending[up_tree];
                    let was_down = self.descending[down_tree];
                    let turned = was_up;
                    if turned {
                        self.counts[up_tree] += 1;
                        self.total += 1;
                    }
                    self.descending[up_tree] = false;
                    self.descending[down_tree] = true;

                    let count = self.counts[up_tree];
                    let total = self.total;
                    let label = &self.label;
                    self.report.check(count <= 1, || {
                        (
                            format!("{label}: geodesic to {next}"),
                            format!("at most 1 turn in tree {up_tree}"),
                            format!("{count}"),
                        )
                    });
                    if d == 2 {
                        self.report.check(total <= 2, || {
                            (
                                format!("{label}: geodesic to {next}"),
                                "at most 2 turns in total".into(),
                                format!("{total}"),
                            )
                        });
                    }

                    self.walk(&next, len + 1);

                    self.descending[up_tree] = was_up;
                    self.descending[down_tree] = was_down;
                    if turned {
                        self.counts[up_tree] -= 1;
                        self.total -= 1;
                    }
                }
            }
        }
    }
}

/// Criterion 4: the 2-turn shortcut reaches the prefix's vertex at time
/// `k + 2l` in exactly `max(k, 2l - k)` moves (confirmed by BFS), and every
/// 2-turn prefix extended past the second turn is non-geodesic.
pub fn no2turn(scale: Scale) -> SuiteReport {
    let mut report = SuiteReport::new("no2turn");
    let (max_kl, max_tail, qs): (u64, u64, &[u8]) =
        scale.pick((4, 3, &[2, 3][..]), (2, 1, &[2][..]));
    for &q in qs {
        let params = GraphParams::new(2, q).expect("valid params");
        let origin = DLVertex::origin(&params);
        for tree in 0..2 {
            for k in 1..=max_kl {
                for l in 1..=max_kl {
                    for tail in 0..=max_tail {
                        let (long, short) =
                            two_turn_shortcut(tree, k, l, tail, &params).expect("valid parameters");
                        let meet = long.vertices()[(k + 2 * l) as usize].clone();
                        let expected = if l > k { 2 * l - k } else { k };
                        let dist =
                            bfs_distance(&origin, &meet, &params, 20).expect("within the cap");
                        report.check(
                            short.len() as u64 == expected
                                && short.endpoint() == meet
                                && dist == expected
                                && expected < k + 2 * l,
                            || {
                                (
                                    format!("q={q} i={tree} k={k} l={l}"),
                                    format!("shortcut of length {expected} meeting the prefix"),
                                    format!(
                                        "length {}, endpoint match {}, bfs {dist}",
                                        short.len(),
                                        short.endpoint() == meet
                                    ),
                                )
                            },
                        );
                        // The prefix through the second turn, and every
                        // extension of it, exceeds the true distance.
                        for len in (k + 2 * l)..=(k + 2 * l + tail) {
                            let prefix = Path::new(
                                origin.clone(),
                                long.moves()[..len as usize].to_vec(),
                                &params,
                            )
                            .expect("prefix of a valid path");
                            let d = bfs_distance(&origin, &prefix.endpoint(), &params, 20)
                                .expect("within the cap");
                            report.check(d < len, || {
                                (
                                    format!("q={q} i={tree} k={k} l={l} len={len}"),
                                    "non-geodesic extension".into(),
                                    format!("distance {d} vs length {len}"),
                                )
                            });
                        }
                    }
                }
            }
        }
    }
    report
}

/// Criterion 5: on seeded random DL_4(2) paths, every commute/shorten
/// application preserves endpoints, and `shorten_pass` terminates, never
/// lengthens, and eliminates every backtrack pattern.
pub fn rewrite(scale: Scale, mut rng: ChaCha8Rng) -> SuiteReport {
    let mut report = SuiteReport::new("rewrite");
    let samples = scale.pick(1000, 100);
    let params = GraphParams::new(4, 2).expect("valid params");
    let origin = DLVertex::origin(&params);
    for sample in 0..samples {
        let len = rng.gen_range(0..=12);
        let moves: Vec<Move> = (0..len)
            .map(|_| {
                let up_tree = rng.gen_range(0..4);
                let down_tree = (up_tree + rng.gen_range(1..4)) % 4;
                Move {
                    up_tree,
                    up_label: rng.gen_range(0..2),
                    down_tree,
                }
            })
            .collect();
        let path = Path::new(origin.clone(), moves, &params).expect("generated moves are valid");
        let endpoint = path.endpoint();

        for idx in 0..path.len().saturating_sub(1) {
            if let Some(swapped) = path.commute_adjacent(idx) {
                report.check(
                    swapped.endpoint() == endpoint && swapped.len() == path.len(),
                    || {
                        (
                            format!("sample {sample}: commute at {idx}"),
                            "endpoint and length preserved".into(),
                            format!("{}", swapped.endpoint()),
                        )
                    },
                );
            }
            if let Some(shortened) = path.shorten_at(idx) {
                report.check(
                    shortened.endpoint() == endpoint && shortened.len() < path.len(),
                    || {
                        (
                            format!("sample {sample}: shorten at {idx}"),
                            "endpoint preserved, length reduced".into(),
                            format!("{} len {}", shortened.endpoint(), shortened.len()),
                        )
                    },
                );
            }
        }

        let reduced = path.shorten_pass();
        report.check(
            reduced.endpoint() == endpoint
                && reduced.len() <= path.len()
                && !reduced.has_unresolved_backtrack(),
            || {
                (
                    format!("sample {sample}: shorten_pass"),
                    "same endpoint, no growth, no remaining pattern".into(),
                    format!(
                        "endpoint match {}, {} -> {}, leftover {}",
                        reduced.endpoint() == endpoint,
                        path.len(),
                        reduced.len(),
                        reduced.has_unresolved_backtrack()
                    ),
                )
            },
        );

        // A path carrying the pattern is never geodesic: the pass exhibits a
        // strictly shorter path between the same endpoints.
        if path.has_unresolved_backtrack() {
            report.check(reduced.len() < path.len(), || {
                (
                    format!("sample {sample}: pattern implies non-geodesic"),
                    "a strict reduction".into(),
                    format!("{} -> {}", path.len(), reduced.len()),
                )
            });
        }
    }
    report
}
