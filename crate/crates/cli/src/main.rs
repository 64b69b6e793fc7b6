//! Command-line driver: verification suites with JSON reports, figure
//! exports and the group presentation.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use horotube::complex::{self, edge_cycles, polyhedron_p, presentation};
use horotube::export::{self, MeshObject};
use horotube::ford::{self, FordReport, VerifyConfig};
use horotube::isometry::{classify, MAX_ELLIPTIC_ORDER};
use horotube::presentation::{abelianization, psi_check, s782_presentation};
use horotube::spheres::{SphereId, TraceGrid};
use horotube::triangle::TriangleGroup;
use horotube::Error;

/// Largest accepted `--tol` slack.
const MAX_SLACK: f64 = 1e-3;

#[derive(Debug, Parser)]
#[command(
    name = "horotube",
    version,
    about = "Ford domains of complex hyperbolic (4,4,inf) triangle groups"
)]
struct Cli {
    /// Parameter: a decimal or one of 0, pi/3, pi/4, pi/6.
    #[arg(long, global = true, default_value = "pi/3", value_parser = parse_theta)]
    theta: f64,
    /// Largest |k| of the isometric spheres considered.
    #[arg(long = "k-window", global = true, default_value_t = ford::DEFAULT_WINDOW)]
    k_window: i32,
    /// Grid resolution per geographic axis (at least 64).
    #[arg(long, global = true, default_value_t = 720, value_parser = parse_grid)]
    grid: usize,
    /// Extra slack added to every claim margin, in [0, 1e-3].
    #[arg(long, global = true, default_value_t = 0.0, value_parser = parse_tol)]
    tol: f64,
    /// Output directory for exports.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Write the JSON report here ("-" for stdout).
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Seed for randomized sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Traces and isometry classes of S, T, I1I3I2I3 and (T^-1 S^2)^2.
    Classify,
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Write CSV/OBJ/JSON exports into --out.
    Export {
        #[arg(value_enum)]
        what: Export,
    },
    /// Print the edge-cycle relations, the presentations and abelianizations.
    Presentation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Pairwise,
    Triple,
    Pairings,
    Cycles,
    Horoballs,
    Boundary,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Export {
    Spheres,
    Giraud,
    TripleCurves,
    C0,
    Complex,
    Polyhedron,
    Rcircle,
}

fn parse_theta(s: &str) -> Result<f64, String> {
    match s.trim() {
        "0" => Ok(0.0),
        "pi/3" => Ok(FRAC_PI_3),
        "pi/4" => Ok(FRAC_PI_4),
        "pi/6" => Ok(FRAC_PI_6),
        other => other
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| {
                format!("invalid theta '{other}': expected a decimal or 0, pi/3, pi/4, pi/6")
            }),
    }
}

fn parse_grid(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|_| format!("invalid grid '{s}'"))?;
    if n < 64 {
        return Err(format!("grid must be at least 64, got {n}"));
    }
    Ok(n)
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("invalid tolerance '{s}'"))?;
    if !(0.0..=MAX_SLACK).contains(&x) {
        return Err(format!("tolerance must lie in [0, {MAX_SLACK}], got {x}"));
    }
    Ok(x)
}

/// Outcome of a command, mapped to the exit-code contract.
enum Failure {
    Usage(String),
    Claims,
    Io(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::Io(e.to_string()),
            Error::Csv(ref c) if c.is_io_error() => Failure::Io(e.to_string()),
            Error::ThetaOutOfRange { .. }
            | Error::NotParabolicCase { .. }
            | Error::WindowTooSmall { .. } => Failure::Usage(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Claims) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Classify => cmd_classify(cli),
        Command::Verify { suite } => cmd_verify(cli, suite),
        Command::Export { what } => cmd_export(cli, what),
        Command::Presentation => cmd_presentation(cli),
    }
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    if path.as_os_str() == "-" {
        println!("{text}");
        Ok(())
    } else {
        std::fs::write(path, text + "\n")
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
    }
}

#[derive(serde::Serialize)]
struct ClassifyRow {
    name: &'static str,
    word: String,
    trace: [f64; 2],
    class: String,
}

fn cmd_classify(cli: &Cli) -> Result<(), Failure> {
    let group = TriangleGroup::build(cli.theta)?;
    let cusp = group.eval_str("tSS")?.pow(2);
    let rows: Vec<ClassifyRow> = [
        ("S", group.s.clone()),
        ("T", group.t.clone()),
        ("I1I3I2I3", group.i1i3i2i3()),
        ("(T^-1S^2)^2", cusp),
    ]
    .into_iter()
    .map(|(name, g)| {
        let tr = g.trace();
        let class = classify(&g, MAX_ELLIPTIC_ORDER)
            .map_or_else(|e| format!("error: {e}"), |c| class_name(&c));
        ClassifyRow {
            name,
            word: g.word.to_string(),
            trace: [tr.re, tr.im],
            class,
        }
    })
    .collect();
    println!("theta = {:.15}", cli.theta);
    for r in &rows {
        println!(
            "{:<12} tr = {:.12} {:+.12}i  {}",
            r.name, r.trace[0], r.trace[1], r.class
        );
    }
    if let Some(path) = &cli.json {
        write_json(path, &rows)?;
    }
    Ok(())
}

fn class_name(c: &horotube::isometry::IsometryClass) -> String {
    use horotube::isometry::IsometryClass::*;
    match c {
        Identity => "identity".into(),
        Loxodromic => "loxodromic".into(),
        Parabolic { unipotent: true } => "parabolic (unipotent)".into(),
        Parabolic { unipotent: false } => "parabolic (screw)".into(),
        Elliptic { order: Some(n) } => format!("elliptic (order {n})"),
        Elliptic { order: None } => "elliptic".into(),
    }
}

fn in_ford_range(theta: f64) -> bool {
    (0.0..=FRAC_PI_3 + 1e-12).contains(&theta)
}

fn is_parabolic(theta: f64) -> bool {
    (theta - FRAC_PI_3).abs() <= 1e-12
}

fn cmd_verify(cli: &Cli, suite: Suite) -> Result<(), Failure> {
    let theta = cli.theta;
    if !in_ford_range(theta) {
        return Err(Failure::Usage(format!(
            "theta = {theta} lies outside [0, pi/3]"
        )));
    }
    if matches!(suite, Suite::Horoballs | Suite::Boundary) && !is_parabolic(theta) {
        return Err(Failure::Usage(format!(
            "suite {suite:?} requires theta = pi/3"
        )));
    }
    if cli.k_window < 2 {
        return Err(Failure::Usage(format!(
            "k-window must be at least 2, got {}",
            cli.k_window
        )));
    }
    let config = VerifyConfig {
        window: cli.k_window,
        grid: TraceGrid::square(cli.grid),
        seed: cli.seed,
    };
    let mut report = FordReport::new(theta, cli.k_window);
    let run_all = suite == Suite::All;
    if run_all || suite == Suite::Pairwise {
        report.extend(ford::verify_pairwise(theta, &config)?);
    }
    if run_all || suite == Suite::Triple {
        report.extend(ford::verify_triple(theta)?);
    }
    if run_all || suite == Suite::Pairings {
        report.extend(ford::verify_pairings(theta, &config)?);
    }
    if run_all || suite == Suite::Cycles {
        report.extend(ford::cycle_check(theta, &config)?);
    }
    if (run_all && is_parabolic(theta)) || suite == Suite::Horoballs {
        report.extend(ford::horoball_consistency(theta)?);
    }
    if (run_all && is_parabolic(theta)) || suite == Suite::Boundary {
        report.extend(complex::verify_boundary(theta)?);
    }
    let report = report.with_slack(cli.tol);
    let s = report.summary;
    println!(
        "theta = {theta:.15}  K = {}  claims: {} passed, {} failed",
        cli.k_window, s.passed, s.failed
    );
    for c in report.failures() {
        println!(
            "FAIL {}  value {:.3e}  margin {:.3e}  {}",
            c.id, c.value, c.margin, c.detail
        );
    }
    if let Some(path) = &cli.json {
        write_json(path, &report)?;
    }
    if report.all_pass() {
        Ok(())
    } else {
        Err(Failure::Claims)
    }
}

fn write_text(dir: &Path, name: &str, text: &str) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn points_of(
    rows: &[export::ExportRow],
    label: &str,
) -> Vec<horotube::heisenberg::HeisenbergPoint> {
    rows.iter()
        .filter(|r| r.label == label)
        .map(|r| horotube::heisenberg::HeisenbergPoint::new(horotube::hermitian::c(r.x, r.y), r.t))
        .collect()
}

fn cmd_export(cli: &Cli, what: Export) -> Result<(), Failure> {
    let theta = cli.theta;
    let dir = &cli.out;
    let grid = TraceGrid::square(cli.grid);
    let needs_parabolic = matches!(what, Export::C0 | Export::Complex | Export::Polyhedron);
    if needs_parabolic && !is_parabolic(theta) {
        return Err(Failure::Usage(format!(
            "export {what:?} requires theta = pi/3"
        )));
    }
    if matches!(what, Export::Giraud | Export::TripleCurves) && !in_ford_range(theta) {
        return Err(Failure::Usage(format!(
            "theta = {theta} lies outside [0, pi/3]"
        )));
    }
    match what {
        Export::Spheres => {
            let objs = export::export_spheres(theta, cli.k_window, (cli.grid / 8).max(8))?;
            write_text(dir, "spheres.obj", &export::obj_string(&objs))?;
        }
        Export::Giraud => {
            let others = [SphereId::minus(-1), SphereId::minus(0), SphereId::star(0)];
            let rows = export::export_giraud(theta, &others, grid);
            write_text(dir, "giraud.csv", &export::csv_string(&rows)?)?;
        }
        Export::TripleCurves => {
            let rows = export::export_triple_curves(theta, cli.grid)?;
            write_text(dir, "triple-curves.csv", &export::csv_string(&rows)?)?;
            let objs: Vec<MeshObject> = ["L1", "C1", "C2"]
                .iter()
                .map(|l| MeshObject::polyline(*l, &points_of(&rows, l), false))
                .collect();
            write_text(dir, "triple-curves.obj", &export::obj_string(&objs))?;
        }
        Export::C0 => {
            let rows = export::export_c0(theta, 4 * cli.grid)?;
            write_text(dir, "c0.csv", &export::csv_string(&rows)?)?;
            let objs: Vec<MeshObject> = ["c0+", "c0-"]
                .iter()
                .map(|l| MeshObject::polyline(*l, &points_of(&rows, l), false))
                .collect();
            write_text(dir, "c0.obj", &export::obj_string(&objs))?;
        }
        Export::Complex => {
            let group = TriangleGroup::build(theta)?;
            write_text(dir, "complex.json", &(export::complex_json(&group)? + "\n"))?;
            let cx = complex::tube_complex(&group)?;
            write_text(
                dir,
                "complex.obj",
                &export::obj_string(&[export::complex_mesh(&cx)]),
            )?;
        }
        Export::Polyhedron => {
            let group = TriangleGroup::build(theta)?;
            write_text(
                dir,
                "polyhedron.json",
                &(export::polyhedron_json(&group)? + "\n"),
            )?;
            let poly = polyhedron_p(&group)?;
            write_text(
                dir,
                "polyhedron.obj",
                &export::obj_string(&[export::complex_mesh(&poly.complex)]),
            )?;
        }
        Export::Rcircle => {
            let rows = export::export_rcircle(cli.grid);
            write_text(dir, "rcircle.csv", &export::csv_string(&rows)?)?;
            let obj = MeshObject::polyline("L", &points_of(&rows, "L"), false);
            write_text(dir, "rcircle.obj", &export::obj_string(&[obj]))?;
        }
    }
    Ok(())
}

#[derive(serde::Serialize)]
struct PresentationOutput {
    edge_relations: Vec<String>,
    presentation: horotube::presentation::GroupPresentation,
    s782: horotube::presentation::GroupPresentation,
    abelianization: String,
    s782_abelianization: String,
    psi: horotube::presentation::PsiCheck,
}

fn cmd_presentation(cli: &Cli) -> Result<(), Failure> {
    let group = TriangleGroup::build(FRAC_PI_3)?;
    let poly = polyhedron_p(&group)?;
    let cycles = edge_cycles(&poly)?;
    println!("edge-cycle relations (x1 = T, x2 = S^-1 T, x3 = (S^-1 T)^2, x4 = S^-1,");
    println!("  x5 = S^-1 T^-1 S, x6 = S^-2, x7 = S^-1, x8 = S^-1):");
    for (i, (c, _)) in cycles.iter().enumerate() {
        println!(
            "  ({}) {} = id    [edge {}-{}]",
            i + 1,
            c.relator,
            c.edge[0],
            c.edge[1]
        );
    }
    let p = presentation();
    let s = s782_presentation();
    println!("presentation (u = x1, v = x2, w = x7): {p}");
    println!("s782: {s}");
    let a = abelianization(&p)?;
    let b = abelianization(&s)?;
    if a == b {
        println!("abelianization: {a} (both)");
    } else {
        println!("abelianization: {a} vs {b} (differ)");
    }
    let psi = psi_check();
    println!(
        "Psi: u -> c^-1 b^-1, v -> b^-1, w -> a; det {} on H1, relation lattices {}: necessary-condition check, not an isomorphism proof",
        psi.determinant,
        if psi.induces_isomorphism() { "match" } else { "differ" }
    );
    if let Some(path) = &cli.json {
        write_json(
            path,
            &PresentationOutput {
                edge_relations: cycles.iter().map(|(c, _)| c.relator.clone()).collect(),
                presentation: p,
                s782: s,
                abelianization: a.to_string(),
                s782_abelianization: b.to_string(),
                psi,
            },
        )?;
    }
    Ok(())
}
