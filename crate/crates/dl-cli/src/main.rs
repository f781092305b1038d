//! `dl`: exact computation in Diestel-Leader graphs and lamplighter groups.
//!
//! JSON goes to stdout (DOT for `ball --format dot`); timings and progress go
//! to stderr. Exit codes: 0 success, 1 verification failure, 2 usage error.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use dl_cli::dot::ball_to_dot;
use dl_cli::json::{
    dl_vertex_to_dto, shared_prefix_to_json, BoundaryPointDto, CertificateDto, ClassIndexDto,
    LampStandDto, RayDescriptorDto,
};
use dl_cli::report::SuiteReport;
use dl_cli::suites::{run_all, run_suite, Scale, SUITE_NAMES};

use dl_core::boundary2::{
    act, dynamics_report, non_hausdorff_witness, power_infinity, rebase_ray, separation_witness,
    Agreement,
};
use dl_core::boundaryd::indiscrete_witness;
use dl_core::dlgraph::{ball, bfs_distance, DEFAULT_RADIUS_CAP};
use dl_core::lamplighter::{eval_word, Order};
use dl_core::paths::{enumerate_geodesics, parse_edge_word, Path, DEFAULT_GEODESIC_CAP};
use dl_core::{DLVertex, GraphParams};

#[derive(Parser)]
#[command(
    name = "dl",
    version,
    about = "Exact computation in Diestel-Leader graphs DL_d(q)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ParamsArgs {
    /// Number of trees (d >= 2).
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Branching (q >= 2); each tree is (q+1)-regular.
    #[arg(long, default_value_t = 2)]
    q: u8,
}

impl ParamsArgs {
    fn build(&self) -> Result<GraphParams, String> {
        GraphParams::new(self.d, self.q).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BallFormat {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the ball around a vertex with exact distances.
    Ball {
        #[command(flatten)]
        params: ParamsArgs,
        #[arg(long)]
        radius: u64,
        /// Center vertex, e.g. "(0;) x (0;)"; defaults to the origin.
        #[arg(long)]
        center: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: BallFormat,
    },
    /// Exact distance between two vertices (BFS, capped).
    Dist {
        #[command(flatten)]
        params: ParamsArgs,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = DEFAULT_RADIUS_CAP)]
        cap: u64,
    },
    /// All geodesics between two vertices, with per-tree turn counts.
    Geodesics {
        #[command(flatten)]
        params: ParamsArgs,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = DEFAULT_GEODESIC_CAP)]
        cap: u64,
    },
    /// Normalize an edge-type word by the rewriting calculus.
    Rewrite {
        #[command(flatten)]
        params: ParamsArgs,
        /// Whitespace-separated edge types, e.g. "0(1)-1 2(0)-1".
        #[arg(long)]
        path: String,
        /// Base vertex; defaults to the origin.
        #[arg(long)]
        base: Option<String>,
    },
    /// Evaluate a lamplighter word to a lamp stand.
    Eval {
        #[arg(long, default_value_t = 2)]
        q: u8,
        #[arg(long)]
        word: String,
    },
    /// Multiply two lamplighter words.
    Mul {
        #[arg(long, default_value_t = 2)]
        q: u8,
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
    },
    /// Order of a lamplighter element.
    Order {
        #[arg(long, default_value_t = 2)]
        q: u8,
        #[arg(long)]
        g: String,
    },
    /// Classify a boundary point into its C_n^i class.
    Classify {
        #[arg(long, default_value_t = 2)]
        q: u8,
        /// Boundary point JSON: {"side":0,"head":{"-3":1},"tail":[],"tail_from":0}.
        #[arg(long)]
        x: String,
    },
    /// Act on a boundary point by a group element.
    Act {
        #[arg(long, default_value_t = 2)]
        q: u8,
        #[arg(long)]
        g: String,
        #[arg(long)]
        x: String,
    },
    /// The attracting boundary point g^∞ of an element with exp_t != 0.
    Ginf {
        #[arg(long, default_value_t = 2)]
        q: u8,
        #[arg(long)]
        g: String,
    },
    /// Agreement windows of g^n·x with g^∞ for n = 1..=n.
    Dynamics {
        #[arg(long, default_value_t = 2)]
        q: u8,
        #[arg(long)]
        g: String,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 15)]
        n: u32,
    },
    /// Separation and indistinguishability witnesses.
    Witness {
        #[command(flatten)]
        args: WitnessArgs,
    },
    /// Run the verification suites.
    Verify {
        /// Suite name, or "all".
        #[arg(long, default_value = "all")]
        suite: String,
        /// RNG seed (falls back to the DL_SEED environment variable, then 0).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "desk")]
        scale: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WitnessKind {
    Nonhausdorff,
    T1,
    Indiscrete,
    Rebase,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long, value_enum)]
    kind: WitnessKind,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 2)]
    q: u8,
    /// First boundary point (JSON), for nonhausdorff/t1.
    #[arg(long)]
    x: Option<String>,
    /// Second boundary point (JSON), for nonhausdorff/t1.
    #[arg(long)]
    y: Option<String>,
    /// Neighborhood scale, for nonhausdorff.
    #[arg(long, default_value_t = 3)]
    k: u64,
    /// Ray descriptor (inline JSON or a file path), for indiscrete/rebase.
    #[arg(long)]
    gamma: Option<String>,
    /// Second ray descriptor, for indiscrete.
    #[arg(long)]
    gamma2: Option<String>,
    /// Shared prefix length, for indiscrete.
    #[arg(long, default_value_t = 6)]
    n: usize,
    /// Geodesic verification cap for ray inputs.
    #[arg(long, default_value_t = 12)]
    cap: u64,
    /// Accepted for fidelity to the basis notation `B_[0,k](γ, ε)`; any value
    /// in (0, 1) yields the same sets, so it is range-checked and ignored.
    #[arg(long)]
    epsilon: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn parse_vertex(s: &str, params: &GraphParams) -> Result<DLVertex, String> {
    let v: DLVertex = s.parse().map_err(|e| format!("{e}"))?;
    v.validate(params).map_err(|e| e.to_string())?;
    Ok(v)
}

fn parse_boundary(s: &str, q: u8) -> Result<dl_core::boundary2::BoundaryPoint, String> {
    let dto: BoundaryPointDto =
        serde_json::from_str(s).map_err(|e| format!("boundary point JSON: {e}"))?;
    dto.to_core(q)
}

/// Inline JSON if it looks like JSON, otherwise a file path.
fn read_descriptor_arg(s: &str) -> Result<String, String> {
    if s.trim_start().starts_with('{') {
        Ok(s.to_string())
    } else {
        std::fs::read_to_string(s).map_err(|e| format!("reading {s}: {e}"))
    }
}

fn parse_descriptor(s: &str, params: &GraphParams) -> Result<dl_core::rays::RayDescriptor, String> {
    let text = read_descriptor_arg(s)?;
    let dto: RayDescriptorDto =
        serde_json::from_str(&text).map_err(|e| format!("ray descriptor JSON: {e}"))?;
    dto.to_core(params)
}

fn emit(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

fn agreement_to_json(a: Agreement) -> serde_json::Value {
    match a {
        Agreement::Everywhere => serde_json::Value::Null,
        Agreement::Until(p) => json!(p),
    }
}

fn dispatch(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Ball {
            params,
            radius,
            center,
            format,
        } => {
            let params = params.build()?;
            let center = match center {
                Some(s) => parse_vertex(&s, &params)?,
                None => DLVertex::origin(&params),
            };
            let b = ball(&center, radius, &params);
            match format {
                BallFormat::Dot => print!("{}", ball_to_dot(&b, &params)),
                BallFormat::Json => {
                    let mut by_dist: Vec<_> = b.iter().collect();
                    by_dist.sort_by_key(|(v, &d)| (d, (*v).clone()));
                    emit(&json!({
                        "d": params.d(),
                        "q": params.q(),
                        "center": dl_vertex_to_dto(&center),
                        "radius": radius,
                        "count": b.len(),
                        "vertices": by_dist
                            .iter()
                            .map(|(v, &dist)| json!({
                                "vertex": dl_vertex_to_dto(v),
                                "text": v.to_string(),
                                "dist": dist,
                            }))
                            .collect::<Vec<_>>(),
                    }));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Dist {
            params,
            from,
            to,
            cap,
        } => {
            let params = params.build()?;
            let from = parse_vertex(&from, &params)?;
            let to = parse_vertex(&to, &params)?;
            let dist = bfs_distance(&from, &to, &params, cap);
            emit(&json!({
                "distance": dist,
                "cap": cap,
            }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Geodesics {
            params,
            from,
            to,
            cap,
        } => {
            let params = params.build()?;
            let from = parse_vertex(&from, &params)?;
            let to = parse_vertex(&to, &params)?;
            let geodesics =
                enumerate_geodesics(&from, &to, &params, cap).map_err(|e| e.to_string())?;
            emit(&json!({
                "distance": geodesics.first().map(Path::len),
                "count": geodesics.len(),
                "geodesics": geodesics
                    .iter()
                    .map(|p| json!({
                        "moves": p.moves().iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                        "turns_per_tree": p.turns_per_tree(),
                    }))
                    .collect::<Vec<_>>(),
            }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Rewrite { params, path, base } => {
            let params = params.build()?;
            let base = match base {
                Some(s) => parse_vertex(&s, &params)?,
                None => DLVertex::origin(&params),
            };
            let moves = parse_edge_word(&path).map_err(|e| e.to_string())?;
            let original = Path::new(base, moves, &params).map_err(|e| e.to_string())?;
            let reduced = original.shorten_pass();
            emit(&json!({
                "input": original.moves().iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                "normalized": reduced.moves().iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                "length_before": original.len(),
                "length_after": reduced.len(),
                "endpoint": dl_vertex_to_dto(&original.endpoint()),
                "endpoints_match": original.endpoint() == reduced.endpoint(),
            }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval { q, word } => {
            require_q(q)?;
            let g = eval_word(&word, q).map_err(|e| e.to_string())?;
            emit(&serde_json::to_value(LampStandDto::from_core(&g)).expect("serializable"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Mul { q, g, h } => {
            require_q(q)?;
            let g = eval_word(&g, q).map_err(|e| e.to_string())?;
            let h = eval_word(&h, q).map_err(|e| e.to_string())?;
            let product = g.multiply(&h, q);
            emit(&serde_json::to_value(LampStandDto::from_core(&product)).expect("serializable"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Order { q, g } => {
            require_q(q)?;
            let g = eval_word(&g, q).map_err(|e| e.to_string())?;
            let order = match g.order(q) {
                Order::Finite(n) => json!(n),
                Order::Infinite => json!("infinite"),
            };
            emit(&json!({ "order": order }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { q, x } => {
            require_q(q)?;
            let x = parse_boundary(&x, q)?;
            emit(
                &serde_json::to_value(ClassIndexDto::from_core(x.classify()))
                    .expect("serializable"),
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Act { q, g, x } => {
            require_q(q)?;
            let g = eval_word(&g, q).map_err(|e| e.to_string())?;
            let x = parse_boundary(&x, q)?;
            let moved = act(&g, &x, q);
            emit(&serde_json::to_value(BoundaryPointDto::from_core(&moved)).expect("serializable"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Ginf { q, g } => {
            require_q(q)?;
            let g = eval_word(&g, q).map_err(|e| e.to_string())?;
            let limit = power_infinity(&g, q).map_err(|e| e.to_string())?;
            emit(&serde_json::to_value(BoundaryPointDto::from_core(&limit)).expect("serializable"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Dynamics { q, g, x, n } => {
            require_q(q)?;
            let g = eval_word(&g, q).map_err(|e| e.to_string())?;
            let x = parse_boundary(&x, q)?;
            let rows = dynamics_report(&g, &x, n, q).map_err(|e| e.to_string())?;
            emit(&json!({
                "side": x.side().index(),
                "attractor": BoundaryPointDto::from_core(
                    &power_infinity(&g, q).map_err(|e| e.to_string())?
                ),
                "windows": rows.iter().map(|a| agreement_to_json(*a)).collect::<Vec<_>>(),
            }));
            Ok(ExitCode::SUCCESS)
        }
        Command::Witness { args } => witness(args),
        Command::Verify { suite, seed, scale } => {
            let scale = Scale::parse(&scale).ok_or("scale must be 'desk' or 'smoke'")?;
            let seed = match seed {
                Some(s) => s,
                None => std::env::var("DL_SEED")
                    .ok()
                    .map(|s| s.parse().map_err(|_| "DL_SEED must be a u64"))
                    .transpose()?
                    .unwrap_or(0),
            };
            let reports = if suite == "all" {
                run_all(scale, seed)
            } else {
                vec![run_suite(&suite, scale, seed).ok_or_else(|| {
                    format!("unknown suite '{suite}'; expected one of {SUITE_NAMES:?} or 'all'")
                })?]
            };
            let all_passed = reports.iter().all(SuiteReport::passed);
            for r in &reports {
                eprintln!(
                    "{} {} ({} cases, {} ms)",
                    if r.passed() { "PASS" } else { "FAIL" },
                    r.suite,
                    r.cases,
                    r.wall_ms
                );
            }
            emit(&json!({
                "seed": seed,
                "scale": match scale { Scale::Desk => "desk", Scale::Smoke => "smoke" },
                "passed": all_passed,
                "suites": reports,
            }));
            Ok(if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn require_q(q: u8) -> Result<(), String> {
    if q < 2 {
        return Err("q must be at least 2".into());
    }
    Ok(())
}

fn check_epsilon(epsilon: Option<f64>) -> Result<(), String> {
    if let Some(e) = epsilon {
        if !(0.0 < e && e < 1.0) {
            return Err("epsilon must lie strictly between 0 and 1".into());
        }
        // Any such ε yields the same basis sets; the value is ignored.
    }
    Ok(())
}

fn witness(args: WitnessArgs) -> Result<ExitCode, String> {
    require_q(args.q)?;
    check_epsilon(args.epsilon)?;
    match args.kind {
        WitnessKind::Nonhausdorff => {
            let x = parse_boundary(args.x.as_deref().ok_or("--x required")?, args.q)?;
            let y = parse_boundary(args.y.as_deref().ok_or("--y required")?, args.q)?;
            let z = non_hausdorff_witness(&x, &y, args.k).map_err(|e| e.to_string())?;
            emit(&json!({
                "witness": BoundaryPointDto::from_core(&z),
                "class": ClassIndexDto::from_core(z.classify()),
                "k": args.k,
                "member_of_x": dl_core::boundary2::basis_membership(&z, &x, args.k),
                "member_of_y": dl_core::boundary2::basis_membership(&z, &y, args.k),
            }));
            Ok(ExitCode::SUCCESS)
        }
        WitnessKind::T1 => {
            let x = parse_boundary(args.x.as_deref().ok_or("--x required")?, args.q)?;
            let y = parse_boundary(args.y.as_deref().ok_or("--y required")?, args.q)?;
            let w = separation_witness(&x, &y).map_err(|e| e.to_string())?;
            emit(&json!({
                "k": w.k,
                "clopen": w.clopen.map(ClassIndexDto::from_core),
            }));
            Ok(ExitCode::SUCCESS)
        }
        WitnessKind::Indiscrete => {
            let params = GraphParams::new(args.d, args.q).map_err(|e| e.to_string())?;
            let gamma =
                parse_descriptor(args.gamma.as_deref().ok_or("--gamma required")?, &params)?;
            let gamma2 =
                parse_descriptor(args.gamma2.as_deref().ok_or("--gamma2 required")?, &params)?;
            let w =
                indiscrete_witness(&gamma, &gamma2, args.n, &params).map_err(|e| e.to_string())?;
            emit(&json!({
                "tau_n": RayDescriptorDto::from_core(&w.tau),
                "tau2_n": RayDescriptorDto::from_core(&w.tau2),
                "prefix_len": shared_prefix_to_json(w.shared_prefix),
                "n": args.n,
                "certificates": [
                    CertificateDto::from_core(&w.cert),
                    CertificateDto::from_core(&w.cert2),
                ],
                "normalized": [
                    RayDescriptorDto::from_core(&w.normalized.0),
                    RayDescriptorDto::from_core(&w.normalized.1),
                ],
            }));
            Ok(ExitCode::SUCCESS)
        }
        WitnessKind::Rebase => {
            let params = GraphParams::new(args.d, args.q).map_err(|e| e.to_string())?;
            let gamma =
                parse_descriptor(args.gamma.as_deref().ok_or("--gamma required")?, &params)?;
            let (class, cert) = rebase_ray(&gamma, &params, args.cap).map_err(|e| e.to_string())?;
            emit(&json!({
                "class": BoundaryPointDto::from_core(&class),
                "classified": ClassIndexDto::from_core(class.classify()),
                "certificate": CertificateDto::from_core(&cert),
            }));
            Ok(ExitCode::SUCCESS)
        }
    }
}
