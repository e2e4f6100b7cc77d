//! Command-line front end.
//!
//! Every subcommand produces a [`RunReport`]; `--json` prints it as one JSON
//! document, otherwise a flat `key: value` table is printed. Exit codes: 0 on
//! success, 2 on usage errors (including output-path collisions), 1 on
//! domain or numeric errors, which are reported as an error JSON document.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::corrgeom::{
    cube, cube_contains, elliptope_boundary_mesh, elliptope_contains, elliptope_value,
    mermin_functional, min_correlation_eigenvalue, psd_correlation_check, tetrahedron,
    tetrahedron_contains, CorrelationTriple,
};
use crate::error::Error;
use crate::games::{
    behavior_from_deterministic, best_classical, chsh_value, game_win_probability,
    no_signaling_check, optimize_quantum, pr_box, simulate_sharded, Behavior,
};
use crate::polytope::{convex_hull_3d, v_contains};
use crate::quantum::{joint_outcome_distribution, quantum_correlation, Direction};
use crate::raffle::{
    raffle_correlation, raffle_polytope, support_gap_profile, HullMethod, Raffle, Spin, Ticket,
};
use crate::scene::{export_scene, planned_paths, Body};
use crate::vec3::lattice_directions;

pub const SEED_ENV: &str = "RAFFLEPLEX_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "raffleplex",
    version,
    about = "Local, quantum and no-signaling correlation bodies"
)]
pub struct Cli {
    /// Print the full report as JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the JSON report to this path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Allow overwriting existing output files.
    #[arg(long, global = true)]
    pub force: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantum body: membership and boundary mesh.
    #[command(subcommand)]
    Elliptope(ElliptopeCmd),
    /// Local body of the spin-1/2 setup.
    #[command(subcommand)]
    Tetra(TetraCmd),
    /// Spin-s raffle polytopes and correlations.
    #[command(subcommand)]
    Raffle(RaffleCmd),
    /// Singlet-state statistics.
    #[command(subcommand)]
    Quantum(QuantumCmd),
    /// The CHSH game.
    #[command(subcommand)]
    Game(GameCmd),
    /// Support gaps between raffle polytopes and the elliptope.
    #[command(subcommand)]
    Gap(GapCmd),
}

#[derive(Debug, Subcommand)]
pub enum ElliptopeCmd {
    Check(CheckArgs),
    Mesh(MeshArgs),
}

#[derive(Debug, Subcommand)]
pub enum TetraCmd {
    Facets,
}

#[derive(Debug, Subcommand)]
pub enum RaffleCmd {
    Hull(HullArgs),
    Corr(RaffleCorrArgs),
}

#[derive(Debug, Subcommand)]
pub enum QuantumCmd {
    Corr(PairArgs),
    Joint(PairArgs),
}

#[derive(Debug, Subcommand)]
pub enum GameCmd {
    Classical,
    Quantum(QuantumGameArgs),
    Pr,
    Simulate(SimulateArgs),
}

#[derive(Debug, Subcommand)]
pub enum GapCmd {
    Profile(GapArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CheckArgs {
    /// Triple τ_ab τ_ac τ_bc.
    #[arg(long, num_args = 3, allow_negative_numbers = true, required = true)]
    pub tau: Vec<f64>,
    #[arg(long, default_value_t = crate::ANALYTIC_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct MeshArgs {
    #[arg(long, default_value_t = 24)]
    pub resolution: usize,
    /// Write the elliptope mesh as OBJ.
    #[arg(long)]
    pub obj: Option<PathBuf>,
    /// Write elliptope, tetrahedron, cube and raffle hulls plus a plot script here.
    #[arg(long)]
    pub scene: Option<PathBuf>,
    /// Spins whose exact raffle hulls join the scene.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub spins: Vec<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Exact,
    Sample,
}

#[derive(Debug, Args, Serialize)]
pub struct HullArgs {
    #[arg(long)]
    pub spin: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    pub method: MethodArg,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the hull boundary as OBJ.
    #[arg(long)]
    pub obj: Option<PathBuf>,
    /// Write the vertex representation as JSON.
    #[arg(long)]
    pub polytope: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct RaffleCorrArgs {
    /// Raffle JSON file.
    #[arg(long, conflicts_with_all = ["spin", "ticket"])]
    pub file: Option<PathBuf>,
    #[arg(long, requires = "ticket")]
    pub spin: Option<String>,
    /// Doubled ticket values `xa,xb,xc` with optional `:weight`; equal weights by default.
    #[arg(long, allow_hyphen_values = true)]
    pub ticket: Vec<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct PairArgs {
    #[arg(long)]
    pub spin: String,
    /// Alice's direction (normalized before use).
    #[arg(long, num_args = 3, allow_negative_numbers = true, required = true)]
    pub a: Vec<f64>,
    /// Bob's direction (normalized before use).
    #[arg(long, num_args = 3, allow_negative_numbers = true, required = true)]
    pub b: Vec<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct QuantumGameArgs {
    #[arg(long, default_value_t = 24)]
    pub grid: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    /// `pr`, `classical`, `quantum`, or a behavior JSON file.
    #[arg(long, default_value = "pr")]
    pub behavior: String,
    #[arg(long, default_value_t = 100_000)]
    pub rounds: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub shards: usize,
    #[arg(long, default_value_t = 10_000)]
    pub block: u64,
    /// Write per-block rates as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct GapArgs {
    #[arg(long, value_delimiter = ',', default_value = "1/2,1,3/2,2")]
    pub spins: Vec<String>,
}

/// Result document of one invocation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub subcommand: String,
    pub parameters: Value,
    pub results: Value,
    pub elapsed_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl RunReport {
    /// The report with the wall-clock field zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> RunReport {
        RunReport {
            elapsed_ms: 0.0,
            ..self.clone()
        }
    }
}

/// What [`run`] produced.
#[derive(Debug)]
pub struct RunOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<RunReport>,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

/// A file the subcommand will write once computation succeeds.
struct PendingFile {
    path: PathBuf,
    contents: Vec<u8>,
}

struct Output {
    name: &'static str,
    parameters: Value,
    results: Value,
    seed: Option<u64>,
    files: Vec<PendingFile>,
    scene: Option<(Vec<Body>, PathBuf)>,
}

pub fn run<I, T>(argv: I) -> RunOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            return if code == 0 {
                RunOutcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                    report: None,
                }
            } else {
                RunOutcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: error_json("Usage", &text),
                    report: None,
                }
            };
        }
    };
    run_cli(&cli)
}

fn error_json(code: &str, message: &str) -> String {
    let doc = json!({ "error": { "code": code, "message": message.trim_end() } });
    format!("{}\n", serde_json::to_string_pretty(&doc).expect("json"))
}

fn run_cli(cli: &Cli) -> RunOutcome {
    let start = Instant::now();
    if let Some(out) = &cli.out {
        if let Err(msg) = check_target(out, cli.force) {
            return usage_failure(msg);
        }
    }
    let result = dispatch(cli);
    let output = match result {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => return usage_failure(msg),
        Err(Failure::Domain(e)) => {
            return RunOutcome {
                code: 1,
                stdout: String::new(),
                stderr: error_json(e.code(), &e.to_string()),
                report: None,
            }
        }
    };
    let report = RunReport {
        subcommand: output.name.to_string(),
        parameters: output.parameters,
        results: output.results,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        seed: output.seed,
    };
    let mut writes: Vec<PendingFile> = output.files;
    let report_text = format!(
        "{}\n",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    if let Some(out) = &cli.out {
        writes.push(PendingFile {
            path: out.clone(),
            contents: report_text.clone().into_bytes(),
        });
    }
    for f in &writes {
        if let Some(parent) = f.path.parent().filter(|p| !p.as_os_str().is_empty()) {
            if let Err(e) = std::fs::create_dir_all(parent) {
                return domain_failure(Error::io(parent, e));
            }
        }
        if let Err(e) = std::fs::write(&f.path, &f.contents) {
            return domain_failure(Error::io(&f.path, e));
        }
    }
    if let Some((bodies, dir)) = &output.scene {
        if let Err(e) = export_scene(bodies, dir) {
            return domain_failure(e);
        }
    }
    let stdout = if cli.json {
        report_text
    } else {
        render_table(&report)
    };
    RunOutcome {
        code: 0,
        stdout,
        stderr: String::new(),
        report: Some(report),
    }
}

fn usage_failure(msg: String) -> RunOutcome {
    RunOutcome {
        code: 2,
        stdout: String::new(),
        stderr: error_json("Usage", &msg),
        report: None,
    }
}

fn domain_failure(e: Error) -> RunOutcome {
    RunOutcome {
        code: 1,
        stdout: String::new(),
        stderr: error_json(e.code(), &e.to_string()),
        report: None,
    }
}

fn check_target(path: &Path, force: bool) -> std::result::Result<(), String> {
    if path.exists() && !force {
        Err(format!(
            "output path {} already exists (pass --force to overwrite)",
            path.display()
        ))
    } else {
        Ok(())
    }
}

fn check_targets<'a>(
    paths: impl IntoIterator<Item = &'a PathBuf>,
    force: bool,
) -> std::result::Result<(), Failure> {
    let mut seen: Vec<&PathBuf> = Vec::new();
    for p in paths {
        if seen.contains(&p) {
            return Err(Failure::Usage(format!(
                "output path {} given twice",
                p.display()
            )));
        }
        check_target(p, force).map_err(Failure::Usage)?;
        seen.push(p);
    }
    Ok(())
}

fn render_table(report: &RunReport) -> String {
    let mut out = format!("{}\n", report.subcommand);
    if let Some(seed) = report.seed {
        out.push_str(&format!("  seed: {seed}\n"));
    }
    if let Value::Object(map) = &report.results {
        for (k, v) in map {
            let text = match v {
                Value::String(s) => s.clone(),
                other => serde_json::to_string(other).expect("json"),
            };
            out.push_str(&format!("  {k}: {text}\n"));
        }
    }
    out
}

fn resolve_seed(flag: Option<u64>) -> std::result::Result<u64, Failure> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

fn parse_spin(text: &str) -> std::result::Result<Spin, Failure> {
    text.parse()
        .map_err(|e: Error| Failure::Usage(e.to_string()))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn dispatch(cli: &Cli) -> std::result::Result<Output, Failure> {
    let force = cli.force;
    let base = |name: &'static str, parameters: Value, results: Value| Output {
        name,
        parameters,
        results,
        seed: None,
        files: Vec::new(),
        scene: None,
    };
    match &cli.command {
        Command::Elliptope(ElliptopeCmd::Check(args)) => {
            let t = CorrelationTriple::new(args.tau[0], args.tau[1], args.tau[2])?;
            let m = elliptope_contains(&t, args.tol)?;
            let results = json!({
                "tau": t,
                "classification": m.classification,
                "value": m.value,
                "psd": psd_correlation_check(&t, args.tol),
                "min_eigenvalue": min_correlation_eigenvalue(&t),
                "tetrahedron": tetrahedron_contains(&t, args.tol)?,
                "cube": cube_contains(&t.to_array(), args.tol)?,
                "mermin": mermin_functional(&t),
            });
            Ok(base("elliptope check", to_value(args), results))
        }
        Command::Elliptope(ElliptopeCmd::Mesh(args)) => {
            let spins: Vec<Spin> = args
                .spins
                .iter()
                .map(|s| parse_spin(s))
                .collect::<Result<_, _>>()?;
            let mut targets: Vec<PathBuf> = args.obj.iter().cloned().collect();
            if let Some(dir) = &args.scene {
                let names = scene_names(&spins);
                targets.extend(planned_paths_for(&names, dir));
            }
            check_targets(targets.iter().chain(cli.out.iter()), force)?;

            let mesh = elliptope_boundary_mesh(args.resolution)?;
            let max_abs = mesh
                .vertices
                .iter()
                .map(|v| {
                    CorrelationTriple::from_computed(*v, 1e-12).map(|t| elliptope_value(&t).abs())
                })
                .collect::<crate::Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            let results = json!({
                "resolution": args.resolution,
                "vertex_count": mesh.vertices.len(),
                "triangle_count": mesh.triangles.len(),
                "watertight": mesh.is_watertight(),
                "max_abs_determinant": max_abs,
            });
            let mut out = base("elliptope mesh", to_value(args), results);
            if let Some(path) = &args.obj {
                out.files.push(PendingFile {
                    path: path.clone(),
                    contents: mesh.to_obj(Some("elliptope")).into_bytes(),
                });
            }
            if let Some(dir) = &args.scene {
                let mut bodies = vec![
                    Body::Mesh {
                        name: "elliptope".into(),
                        mesh: mesh.clone(),
                    },
                    Body::Polytope {
                        name: "tetrahedron".into(),
                        hull: convex_hull_3d(&tetrahedron().vertices)?,
                    },
                    Body::Polytope {
                        name: "cube".into(),
                        hull: convex_hull_3d(&cube().vertices)?,
                    },
                ];
                for (s, name) in spins.iter().zip(scene_names(&spins).into_iter().skip(3)) {
                    bodies.push(Body::Polytope {
                        name,
                        hull: raffle_polytope(*s, HullMethod::ExactEnumeration)?,
                    });
                }
                out.scene = Some((bodies, dir.clone()));
            }
            Ok(out)
        }
        Command::Tetra(TetraCmd::Facets) => {
            let hull = convex_hull_3d(&tetrahedron().vertices)?;
            let mermin_min = hull
                .vertices
                .vertices
                .iter()
                .map(|v| v[0] + v[1] + v[2])
                .fold(f64::INFINITY, f64::min);
            let results = json!({
                "vertex_count": hull.vertex_count(),
                "facet_count": hull.facet_count(),
                "vertices": hull.vertices,
                "facets": hull.facets,
                "mermin_min": mermin_min,
            });
            Ok(base("tetra facets", json!({}), results))
        }
        Command::Raffle(RaffleCmd::Hull(args)) => {
            let spin = parse_spin(&args.spin)?;
            check_targets(
                args.obj.iter().chain(&args.polytope).chain(cli.out.iter()),
                force,
            )?;
            let (method, seed) = match args.method {
                MethodArg::Exact => (HullMethod::ExactEnumeration, None),
                MethodArg::Sample => {
                    let seed = resolve_seed(args.seed)?;
                    (
                        HullMethod::Sampling {
                            samples: args.samples,
                            seed,
                        },
                        Some(seed),
                    )
                }
            };
            let hull = raffle_polytope(spin, method)?;
            let verts = &hull.vertices.vertices;
            let mermin_min = verts
                .iter()
                .map(|v| v[0] + v[1] + v[2])
                .fold(f64::INFINITY, f64::min);
            let min_det = verts
                .iter()
                .map(|v| CorrelationTriple::from_computed(*v, 1e-12).map(|t| elliptope_value(&t)))
                .collect::<crate::Result<Vec<f64>>>()?
                .into_iter()
                .fold(f64::INFINITY, f64::min);
            let results = json!({
                "spin": spin.to_string(),
                "method": method,
                "vertex_count": hull.vertex_count(),
                "facet_count": hull.facet_count(),
                "contains_mermin_point": v_contains(&hull.vertices, &[-0.5; 3], crate::ANALYTIC_TOL)?,
                "mermin_min": mermin_min,
                "min_elliptope_value": min_det,
                "polytope": hull.vertices,
                "facets": hull.facets,
            });
            let mut out = base("raffle hull", to_value(args), results);
            out.seed = seed;
            if let Some(path) = &args.obj {
                out.files.push(PendingFile {
                    path: path.clone(),
                    contents: hull
                        .boundary_mesh()?
                        .to_obj(Some(&format!("raffle_spin_{spin}")))
                        .into_bytes(),
                });
            }
            if let Some(path) = &args.polytope {
                out.files.push(PendingFile {
                    path: path.clone(),
                    contents: format!(
                        "{}\n",
                        serde_json::to_string_pretty(&hull.vertices).expect("json")
                    )
                    .into_bytes(),
                });
            }
            Ok(out)
        }
        Command::Raffle(RaffleCmd::Corr(args)) => {
            check_targets(cli.out.iter(), force)?;
            let raffle = if let Some(path) = &args.file {
                let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                serde_json::from_str::<Raffle>(&text)
                    .map_err(|e| Error::domain(format!("invalid raffle JSON: {e}")))?
            } else {
                let spin = parse_spin(args.spin.as_deref().ok_or_else(|| {
                    Failure::Usage("either --file or --spin with --ticket is required".into())
                })?)?;
                parse_tickets(spin, &args.ticket)?
            };
            let admissible = raffle.is_admissible();
            let tau = raffle_correlation(&raffle)?;
            let results = json!({
                "raffle": raffle,
                "admissible": admissible,
                "tau": tau,
                "elliptope_value": elliptope_value(&tau),
                "tetrahedron": tetrahedron_contains(&tau, crate::ANALYTIC_TOL)?,
            });
            Ok(base("raffle corr", to_value(args), results))
        }
        Command::Quantum(QuantumCmd::Corr(args)) => {
            let (spin, a, b) = pair(args)?;
            let tau = quantum_correlation(spin, &a, &b)?;
            let results = json!({
                "spin": spin.to_string(),
                "a": a,
                "b": b,
                "tau": tau,
                "cosine": a.dot(&b),
            });
            Ok(base("quantum corr", to_value(args), results))
        }
        Command::Quantum(QuantumCmd::Joint(args)) => {
            let (spin, a, b) = pair(args)?;
            let dist = joint_outcome_distribution(spin, &a, &b)?;
            let results = json!({
                "spin": spin.to_string(),
                "distribution": dist,
                "marginal_alice": dist.marginal_alice(),
                "marginal_bob": dist.marginal_bob(),
                "product_expectation": dist.product_expectation(),
            });
            Ok(base("quantum joint", to_value(args), results))
        }
        Command::Game(GameCmd::Classical) => {
            let best = best_classical();
            let results = json!({
                "win": best.win,
                "chsh": best.chsh,
                "optimal_count": best.strategies.len(),
                "strategies": best.strategies,
            });
            Ok(base("game classical", json!({}), results))
        }
        Command::Game(GameCmd::Quantum(args)) => {
            let q = optimize_quantum(args.grid)?;
            let results = json!({
                "win": q.win,
                "chsh": q.chsh,
                "alice_angles": q.alice_angles,
                "bob_angles": q.bob_angles,
                "no_signaling": no_signaling_check(&q.behavior, crate::ANALYTIC_TOL),
                "behavior": q.behavior,
            });
            Ok(base("game quantum", to_value(args), results))
        }
        Command::Game(GameCmd::Pr) => {
            let pr = pr_box();
            let results = json!({
                "win": game_win_probability(&pr),
                "chsh": chsh_value(&pr),
                "no_signaling": no_signaling_check(&pr, crate::ANALYTIC_TOL),
                "behavior": pr,
            });
            Ok(base("game pr", json!({}), results))
        }
        Command::Game(GameCmd::Simulate(args)) => {
            check_targets(args.csv.iter().chain(cli.out.iter()), force)?;
            let seed = resolve_seed(args.seed)?;
            let beh = named_behavior(&args.behavior)?;
            let report = simulate_sharded(&beh, args.rounds, seed, args.shards, args.block)?;
            let analytic = game_win_probability(&beh);
            let se = (analytic * (1.0 - analytic) / args.rounds as f64).sqrt();
            let results = json!({
                "behavior": args.behavior,
                "analytic_win": analytic,
                "empirical_win": report.win_rate,
                "standard_error": se,
                "wins": report.wins,
                "rounds": report.rounds,
                "shards": report.shards,
                "blocks": report.blocks,
            });
            let mut out = base("game simulate", to_value(args), results);
            out.seed = Some(seed);
            if let Some(path) = &args.csv {
                out.files.push(PendingFile {
                    path: path.clone(),
                    contents: report.to_csv().into_bytes(),
                });
            }
            Ok(out)
        }
        Command::Gap(GapCmd::Profile(args)) => {
            let spins: Vec<Spin> = args
                .spins
                .iter()
                .map(|s| parse_spin(s))
                .collect::<Result<_, _>>()?;
            let dirs = lattice_directions();
            let mut profiles = Vec::new();
            for s in &spins {
                profiles.push(support_gap_profile(*s, &dirs)?);
            }
            let max_gaps: Vec<f64> = profiles.iter().map(|p| p.max_gap).collect();
            let non_increasing = max_gaps
                .windows(2)
                .all(|w| w[1] <= w[0] + crate::NUMERIC_TOL);
            let results = json!({
                "spins": spins.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                "max_gaps": max_gaps,
                "non_increasing": non_increasing,
                "profiles": profiles,
            });
            Ok(base("gap profile", to_value(args), results))
        }
    }
}

fn scene_names(spins: &[Spin]) -> Vec<String> {
    let mut names = vec!["elliptope".to_string(), "tetrahedron".into(), "cube".into()];
    names.extend(
        spins
            .iter()
            .map(|s| format!("raffle_spin_{}", s.to_string().replace('/', "_"))),
    );
    names
}

fn planned_paths_for(names: &[String], dir: &Path) -> Vec<PathBuf> {
    let bodies: Vec<Body> = names
        .iter()
        .map(|n| Body::Mesh {
            name: n.clone(),
            mesh: Default::default(),
        })
        .collect();
    planned_paths(&bodies, dir)
}

fn pair(args: &PairArgs) -> std::result::Result<(Spin, Direction, Direction), Failure> {
    let spin = parse_spin(&args.spin)?;
    let a = Direction::normalized([args.a[0], args.a[1], args.a[2]])?;
    let b = Direction::normalized([args.b[0], args.b[1], args.b[2]])?;
    Ok((spin, a, b))
}

fn parse_tickets(spin: Spin, specs: &[String]) -> std::result::Result<Raffle, Failure> {
    let mut entries = Vec::with_capacity(specs.len());
    let mut explicit = None;
    for spec in specs {
        let (vals, weight) = match spec.split_once(':') {
            Some((v, w)) => (
                v,
                Some(
                    w.trim()
                        .parse::<f64>()
                        .map_err(|_| Failure::Usage(format!("bad ticket weight in {spec:?}")))?,
                ),
            ),
            None => (spec.as_str(), None),
        };
        if explicit.is_some_and(|e| e != weight.is_some()) {
            return Err(Failure::Usage(
                "give weights for all tickets or for none".into(),
            ));
        }
        explicit = Some(weight.is_some());
        let xs: Vec<i32> = vals
            .split(',')
            .map(|x| x.trim().parse::<i32>())
            .collect::<Result<_, _>>()
            .map_err(|_| Failure::Usage(format!("bad ticket {spec:?}")))?;
        if xs.len() != 3 {
            return Err(Failure::Usage(format!(
                "ticket {spec:?} needs three values"
            )));
        }
        entries.push((Ticket([xs[0], xs[1], xs[2]]), weight.unwrap_or(f64::NAN)));
    }
    if entries.is_empty() {
        return Err(Failure::Usage("at least one --ticket is required".into()));
    }
    if explicit == Some(false) {
        let w = 1.0 / entries.len() as f64;
        for e in &mut entries {
            e.1 = w;
        }
    }
    Ok(Raffle::new(spin, entries)?)
}

fn named_behavior(name: &str) -> std::result::Result<Behavior, Failure> {
    match name {
        "pr" => Ok(pr_box()),
        "classical" => {
            let best = best_classical();
            Ok(behavior_from_deterministic(&best.strategies[0]))
        }
        "quantum" => Ok(optimize_quantum(24)?.behavior),
        path => {
            let p = Path::new(path);
            if !p.exists() {
                return Err(Failure::Usage(format!(
                    "--behavior must be pr, classical, quantum or an existing JSON file, got {path:?}"
                )));
            }
            let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            Ok(serde_json::from_str(&text)
                .map_err(|e| Error::domain(format!("invalid behavior JSON: {e}")))?)
        }
    }
}
