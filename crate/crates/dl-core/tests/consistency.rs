//! Cross-module consistency: the distance-increasing DFS used for global
//! geodesic sweeps agrees with per-pair enumeration, and canonical boundary
//! rays replay the lamplighter's walk through the vertex bijection.

use std::collections::BTreeMap;

use dl_core::boundary2::{BoundaryPoint, Side};
use dl_core::dlgraph::{ball, bfs_distance};
use dl_core::lamplighter::LampStand;
use dl_core::paths::{apply, enumerate_geodesics, Move};
use dl_core::{DLVertex, GraphParams};

/// Counts geodesics ending at each vertex by walking distance-increasing
/// moves from the origin (the sweep the turn-theorem suite performs).
fn geodesic_counts_by_sweep(
    dist: &BTreeMap<DLVertex, u64>,
    radius: u64,
    params: &GraphParams,
) -> BTreeMap<DLVertex, u64> {
    let mut counts = BTreeMap::new();
    fn walk(
        cur: &DLVertex,
        len: u64,
        radius: u64,
        dist: &BTreeMap<DLVertex, u64>,
        params: &GraphParams,
        counts: &mut BTreeMap<DLVertex, u64>,
    ) {
        *counts.entry(cur.clone()).or_insert(0) += 1;
        if len == radius {
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
                    let next = apply(cur, &mv, params).expect("valid move");
                    if dist.get(&next) == Some(&(len + 1)) {
                        walk(&next, len + 1, radius, dist, params, counts);
                    }
                }
            }
        }
    }
    walk(
        &DLVertex::origin(params),
        0,
        radius,
        dist,
        params,
        &mut counts,
    );
    counts
}

#[test]
fn global_sweep_matches_per_pair_enumeration() {
    for (d, q, radius) in [(2usize, 2u8, 4u64), (3, 2, 3)] {
        let params = GraphParams::new(d, q).unwrap();
        let origin = DLVertex::origin(&params);
        let dist = ball(&origin, radius, &params);
        let counts = geodesic_counts_by_sweep(&dist, radius, &params);
        assert_eq!(counts.len(), dist.len(), "sweep reaches the whole ball");
        for (w, &expected) in &dist {
            let geodesics = enumerate_geodesics(&origin, w, &params, 14).unwrap();
            assert!(geodesics.iter().all(|g| g.len() as u64 == expected));
            assert_eq!(
                counts.get(w).copied(),
                Some(geodesics.len() as u64),
                "geodesic count to {w}"
            );
        }
    }
}

#[test]
fn canonical_rays_replay_the_lamplighter_walk() {
    let q = 2;
    let params = GraphParams::new(2, q).unwrap();
    let x = BoundaryPoint::from_parts(
        Side::Plus,
        [(-2, 1), (1, 1)].into_iter().collect(),
        vec![],
        0,
        q,
    )
    .unwrap();
    let ray = x.canonical_ray(10, &params);
    let stands: Vec<LampStand> = ray
        .vertices()
        .iter()
        .map(|v| LampStand::from_vertex(v).unwrap())
        .collect();
    // The walk descends to -2, then climbs: position = height of T_0.
    let positions: Vec<i64> = stands.iter().map(LampStand::pos).collect();
    assert_eq!(positions, vec![0, -1, -2, -1, 0, 1, 2, 3, 4, 5, 6]);
    // Once passed, each lamp keeps the class configuration's state.
    let last = stands.last().unwrap();
    for p in -4..=5 {
        assert_eq!(last.lamp(p), x.lamp(p), "lamp {p}");
    }
    // Every prefix is geodesic: the walk never wastes a move.
    for t in 0..stands.len() {
        assert_eq!(
            bfs_distance(&ray.vertices()[0], &ray.vertices()[t], &params, 14),
            Some(t as u64)
        );
    }
}
