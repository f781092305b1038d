//! Lamp-stand and boundary suites: group algebra, the boundary action,
//! north-south dynamics, separation properties, and the indiscreteness
//! witnesses.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use dl_core::boundary2::{
    act, basis_membership, dynamics_report, non_hausdorff_witness, power_infinity,
    separation_witness, Agreement, BoundaryPoint, Side,
};
use dl_core::boundaryd::indiscrete_witness;
use dl_core::lamplighter::{eval_word, LampStand, Order};
use dl_core::rays::certify_truncations_geodesic;
use dl_core::GraphParams;

use super::{
    random_boundary_point, random_lampstand, random_normalized_descriptor, random_torsion,
    random_translating, Scale,
};
use crate::report::SuiteReport;

/// Criterion 6: the worked lamp-stand words, the group laws, the `exp_t`
/// homomorphism, and the q = 2 order dichotomy.
pub fn lamplighter(scale: Scale, mut rng: ChaCha8Rng) -> SuiteReport {
    let mut report = SuiteReport::new("lamplighter");

    let expected =
        LampStand::new([(0, 1), (1, 1), (3, 1)].into_iter().collect(), -1, 2).expect("valid stand");
    for word in ["t^3 (at) t^-2 (at)^-2 t^-1", "(at)^2 t (at) t^-5"] {
        let got = eval_word(word, 2);
        report.check(got.as_ref() == Ok(&expected), || {
            (
                format!("evaluate '{word}'"),
                format!("{expected}"),
                format!("{got:?}"),
            )
        });
    }

    let triples = scale.pick(500, 100);
    for i in 0..triples {
        let q = if i % 2 == 0 { 2 } else { 3 };
        let g = random_lampstand(&mut rng, q, 6);
        let h = random_lampstand(&mut rng, q, 6);
        let k = random_lampstand(&mut rng, q, 6);
        let assoc = g.multiply(&h, q).multiply(&k, q) == g.multiply(&h.multiply(&k, q), q);
        let inverse = g.multiply(&g.inverse(q), q).is_identity();
        let homo = g.multiply(&h, q).exp_t() == g.exp_t() + h.exp_t();
        report.check(assoc && inverse && homo, || {
            (
                format!("triple {i} (q={q})"),
                "associativity, inverse, exp_t homomorphism".into(),
                format!("assoc {assoc}, inverse {inverse}, homo {homo}"),
            )
        });
    }

    let order_samples = scale.pick(200, 50);
    for i in 0..order_samples {
        let q = 2;
        if i % 2 == 0 {
            let g = random_torsion(&mut rng, q, 6);
            let expected = if g.is_identity() {
                Order::Finite(1)
            } else {
                Order::Finite(2)
            };
            let got = g.order(q);
            report.check(got == expected, || {
                (
                    format!("order sample {i}: {g}"),
                    format!("{expected:?}"),
                    format!("{got:?}"),
                )
            });
        } else {
            let g = random_translating(&mut rng, q, 6);
            let got = g.order(q);
            report.check(got == Order::Infinite, || {
                (
                    format!("order sample {i}: {g}"),
                    "Infinite".into(),
                    format!("{got:?}"),
                )
            });
        }
    }
    report
}

fn window_eq<F, G>(a: F, b: G, lo: i64, hi: i64) -> Option<i64>
where
    F: Fn(i64) -> u8,
    G: Fn(i64) -> u8,
{
    (lo..=hi).find(|&p| a(p) != b(p))
}

/// Criterion 7: generator actions behave verbatim, `a_k` switches exactly
/// lamp `k`, the action composes, and the side is invariant.
pub fn action(scale: Scale, mut rng: ChaCha8Rng) -> SuiteReport {
    let mut report = SuiteReport::new("action");
    let q = 2;
    let t = eval_word("t", q).expect("valid word");
    let t_inv = t.inverse(q);
    let at = eval_word("at", q).expect("valid word");
    let at_inv = at.inverse(q);
    let samples = scale.pick(200, 50);
    for i in 0..samples {
        let side = if rng.gen_bool(0.5) {
            Side::Plus
        } else {
            Side::Minus
        };
        let x = random_boundary_point(&mut rng, q, side, false, true);

        // t shifts right, t^-1 shifts left.
        let tx = act(&t, &x, q);
        let bad = window_eq(|p| tx.lamp(p), |p| x.lamp(p - 1), -14, 14);
        report.check(bad.is_none() && tx.side() == side, || {
            (
                format!("sample {i}: t on {x}"),
                "one-spot right shift".into(),
                format!("difference at {bad:?}"),
            )
        });
        let tix = act(&t_inv, &x, q);
        let bad = window_eq(|p| tix.lamp(p), |p| x.lamp(p + 1), -14, 14);
        report.check(bad.is_none(), || {
            (
                format!("sample {i}: t^-1 on {x}"),
                "one-spot left shift".into(),
                format!("difference at {bad:?}"),
            )
        });

        // at: shift right, then switch lamp 0.
        let atx = act(&at, &x, q);
        let bad = window_eq(
            |p| atx.lamp(p),
            |p| {
                let shifted = x.lamp(p - 1);
                if p == 0 {
                    (shifted + 1) % q
                } else {
                    shifted
                }
            },
            -14,
            14,
        );
        report.check(bad.is_none(), || {
            (
                format!("sample {i}: at on {x}"),
                "shift right then switch lamp 0".into(),
                format!("difference at {bad:?}"),
            )
        });

        // (at)^-1: switch lamp 0, then shift left.
        let atix = act(&at_inv, &x, q);
        let bad = window_eq(
            |p| atix.lamp(p),
            |p| {
                if p + 1 == 0 {
                    (x.lamp(0) + 1) % q
                } else {
                    x.lamp(p + 1)
                }
            },
            -14,
            14,
        );
        report.check(bad.is_none(), || {
            (
                format!("sample {i}: (at)^-1 on {x}"),
                "switch lamp 0 then shift left".into(),
                format!("difference at {bad:?}"),
            )
        });

        // a_k switches exactly lamp k.
        let k = rng.gen_range(-5..=5);
        let a_k = LampStand::new([(k, 1)].into_iter().collect(), 0, q).expect("valid stand");
        let akx = act(&a_k, &x, q);
        let bad = window_eq(
            |p| akx.lamp(p),
            |p| {
                if p == k {
                    (x.lamp(p) + 1) % q
                } else {
                    x.lamp(p)
                }
            },
            -14,
            14,
        );
        report.check(bad.is_none() && akx.side() == side, || {
            (
                format!("sample {i}: a_{k} on {x}"),
                format!("switch exactly lamp {k}"),
                format!("difference at {bad:?}"),
            )
        });

        // Group action and side invariance under random elements.
        let g = random_lampstand(&mut rng, q, 5);
        let h = random_lampstand(&mut rng, q, 5);
        let composed = act(&g, &act(&h, &x, q), q);
        let direct = act(&g.multiply(&h, q), &x, q);
        report.check(composed == direct && composed.side() == side, || {
            (
                format!("sample {i}: composition on {x}"),
                "g·(h·x) = (gh)·x with the side fixed".into(),
                format!("{composed} vs {direct}"),
            )
        });
    }
    report
}

/// Criterion 8: the agreement window of `g^n · x` with `g^∞` grows by
/// `|exp_t(g)|` a step (offset by the lowest interference position), `g^n · x`
/// matches `g^n`'s own lamps below the shift of `x`'s support, and torsion
/// elements square to the identity action.
pub fn dynamics(scale: Scale, mut rng: ChaCha8Rng) -> SuiteReport {
    let mut report = SuiteReport::new("dynamics");
    let q = 2;
    let samples = scale.pick(50, 10);
    let n_max = scale.pick(15u32, 8);
    for i in 0..samples {
        let g = random_translating(&mut rng, q, 4);
        let e = g.exp_t();
        let side = if e > 0 { Side::Plus } else { Side::Minus };
        // A compatible point with nonempty finite support keeps the proof's
        // offsets well-defined.
        let x = loop {
            let candidate = random_boundary_point(&mut rng, q, side, false, false);
            if !candidate.config().is_zero() {
                break candidate;
            }
        };
        let report_rows = dynamics_report(&g, &x, n_max, q).expect("compatible input");

        // Interference offsets: x's lamps arrive shifted by n·e, and g's own
        // lamps feed the tail of g^∞.
        let (m_x, m_g) = match side {
            Side::Plus => (
                x.config().support_min().finite().expect("nonempty"),
                g.min_lit(),
            ),
            Side::Minus => (
                x.config().support_max().finite().expect("nonempty"),
                g.max_lit(),
            ),
        };
        let mut cur = x.clone();
        for (idx, row) in report_rows.iter().enumerate() {
            let n = idx as i64 + 1;
            cur = act(&g, &cur, q);
            let ok = match (*row, side) {
                (Agreement::Everywhere, _) => true,
                (Agreement::Until(w), Side::Plus) => w >= n * e + m_g.map_or(m_x, |mg| mg.min(m_x)),
                (Agreement::Until(w), Side::Minus) => {
                    w <= n * e + m_g.map_or(m_x, |mg| mg.max(m_x))
                }
            };
            report.check(ok, || {
                (
                    format!("sample {i}: g={g} x={x} n={n}"),
                    format!("window beyond n·exp_t + offset (e={e})"),
                    format!("{row:?}"),
                )
            });

            // The proof's literal statement: below (above) the shifted support
            // of x, the lamps are exactly g^n's.
            let gn = g.pow(n, q);
            let mismatch = match side {
                Side::Plus => {
                    let cutoff = n * e + m_x;
                    let lo = gn.min_lit().unwrap_or(cutoff).min(cutoff) - 2;
                    window_eq(|p| cur.lamp(p), |p| gn.lamp(p), lo, cutoff - 1)
                }
                Side::Minus => {
                    let cutoff = n * e + m_x;
                    let hi = gn.max_lit().unwrap_or(cutoff).max(cutoff) + 2;
                    window_eq(|p| cur.lamp(p), |p| gn.lamp(p), cutoff + 1, hi)
                }
            };
            report.check(mismatch.is_none(), || {
                (
                    format!("sample {i}: g={g} x={x} n={n}"),
                    "agreement with g^n beyond the shifted support".into(),
                    format!("difference at {mismatch:?}"),
                )
            });
        }

        // The attractor is fixed by the action.
        let attractor = power_infinity(&g, q).expect("exp_t is nonzero");
        report.check(act(&g, &attractor, q) == attractor, || {
            (
                format!("sample {i}: g={g}"),
                "g fixes g^∞".into(),
                "moved".into(),
            )
        });
    }

    // Torsion elements act with period 2.
    for i in 0..samples {
        let g = random_torsion(&mut rng, q, 5);
        let side = if rng.gen_bool(0.5) {
            Side::Plus
        } else {
            Side::Minus
        };
        let x = random_boundary_point(&mut rng, q, side, false, true);
        let back = act(&g, &act(&g, &x, q), q);
        report.check(back == x, || {
            (
                format!("torsion sample {i}: g={g} x={x}"),
                "g² acts trivially".into(),
                format!("{back}"),
            )
        });
        report.check(dynamics_report(&g, &x, 3, q).is_err(), || {
            (
                format!("torsion sample {i}: g={g}"),
                "dynamics rejected for exp_t = 0".into(),
                "accepted".into(),
            )
        });
    }
    report
}

/// Criterion 9: separating scales validate on random distinct pairs, clopen
/// class separators validate where defined, and every never-turning pair has
/// a common neighbor at every scale up to 8.
pub fn separation(scale: Scale, mut rng: ChaCha8Rng) -> SuiteReport {
    let mut report = SuiteReport::new("separation");
    let pairs = scale.pick(100, 20);

    for i in 0..pairs {
        let q = if i % 2 == 0 { 2 } else { 3 };
        let side_x = if rng.gen_bool(0.5) {
            Side::Plus
        } else {
            Side::Minus
        };
        let x = random_boundary_point(&mut rng, q, side_x, false, true);
        let y = loop {
            let side_y = if rng.gen_bool(0.5) {
                Side::Plus
            } else {
                Side::Minus
            };
            let candidate = random_boundary_point(&mut rng, q, side_y, false, true);
            if candidate != x {
                break candidate;
            }
        };
        match separation_witness(&x, &y) {
            Ok(w) => {
                let separated = !basis_membership(&y, &x, w.k) && !basis_membership(&x, &y, w.k);
                report.check(separated, || {
                    (
                        format!("pair {i}: {x} vs {y}"),
                        format!("k = {} separates", w.k),
                        "membership persists".into(),
                    )
                });
                if let Some(clopen) = w.clopen {
                    report.check(x.classify() == clopen && y.classify() != clopen, || {
                        (
                            format!("pair {i}: clopen {clopen}"),
                            "contains x, avoids y".into(),
                            format!("{} vs {}", x.classify(), y.classify()),
                        )
                    });
                }
            }
            Err(e) => report.check(false, || {
                (
                    format!("pair {i}: {x} vs {y}"),
                    "a separating scale".into(),
                    format!("{e}"),
                )
            }),
        }
    }

    // Deterministic clopen showcase: different depths always produce one.
    let deep3 =
        BoundaryPoint::from_parts(Side::Plus, [(-3, 1)].into_iter().collect(), vec![], 0, 2)
            .expect("valid point");
    let deep5 =
        BoundaryPoint::from_parts(Side::Plus, [(-5, 1)].into_iter().collect(), vec![], 0, 2)
            .expect("valid point");
    let w = separation_witness(&deep3, &deep5).expect("distinct points");
    report.check(w.k == 4 && w.clopen.map(|c| c.n) == Some(3), || {
        (
            "C_3^0 vs C_5^0".into(),
            "k = 4 with clopen C_3^0".into(),
            format!("k = {}, clopen {:?}", w.k, w.clopen),
        )
    });

    for i in 0..pairs {
        let q = 2;
        let side = if rng.gen_bool(0.5) {
            Side::Plus
        } else {
            Side::Minus
        };
        let x = random_boundary_point(&mut rng, q, side, true, true);
        let y = loop {
            let candidate = random_boundary_point(&mut rng, q, side, true, true);
            if candidate != x {
                break candidate;
            }
        };
        for k in 0..=8 {
            match non_hausdorff_witness(&x, &y, k) {
                Ok(z) => {
                    let ok = basis_membership(&z, &x, k)
                        && basis_membership(&z, &y, k)
                        && z.side() == side.other()
                        && z.classify().n >= k.max(1);
                    report.check(ok, || {
                        (
                            format!("C_0 pair {i} at k={k}: {x} vs {y}"),
                            "common neighbor in the opposite deep classes".into(),
                            format!("witness {z}"),
                        )
                    });
                }
                Err(e) => report.check(false, || {
                    (
                        format!("C_0 pair {i} at k={k}"),
                        "a witness".into(),
                        format!("{e}"),
                    )
                }),
            }
        }
    }
    report
}

/// Criterion 10: witness pairs for the indiscrete topology share the claimed
/// prefixes, truncate to BFS-verified geodesics, and carry passing
/// asymptoticity certificates.
pub fn indiscrete(scale: Scale, mut rng: ChaCha8Rng) -> SuiteReport {
    let mut report = SuiteReport::new("indiscrete");
    let params = GraphParams::new(3, 2).expect("valid params");
    let pairs = scale.pick(20, 4);
    let trunc_cap = scale.pick(12u64, 8);
    for i in 0..pairs {
        let gamma = random_normalized_descriptor(&mut rng, &params);
        let gamma2 = random_normalized_descriptor(&mut rng, &params);
        let n = 4 + (i % 5);
        match indiscrete_witness(&gamma, &gamma2, n, &params) {
            Ok(w) => {
                report.check(w.shared_prefix.at_least(n), || {
                    (
                        format!("pair {i} (n={n}): shared prefix"),
                        format!("at least {n}"),
                        format!("{:?}", w.shared_prefix),
                    )
                });
                for (which, tau) in [("tau", &w.tau), ("tau2", &w.tau2)] {
                    let geo = certify_truncations_geodesic(tau, trunc_cap, &params);
                    report.check(geo.is_ok(), || {
                        (
                            format!("pair {i} (n={n}): {which} truncations"),
                            format!("geodesic up to {trunc_cap}"),
                            format!("{geo:?}"),
                        )
                    });
                }
                report.check(
                    w.cert.tree_distances.len() == 3 && w.cert2.tree_distances.len() == 3,
                    || {
                        (
                            format!("pair {i} (n={n}): certificates"),
                            "constant per-tree distances over a full period".into(),
                            format!("{:?} / {:?}", w.cert, w.cert2),
                        )
                    },
                );
            }
            Err(e) => report.check(false, || {
                (
                    format!("pair {i} (n={n})"),
                    "witness construction".into(),
                    format!("{e}"),
                )
            }),
        }
    }
    report
}
