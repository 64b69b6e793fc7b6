//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

use std::f64::consts::FRAC_PI_3;
use std::path::PathBuf;
use std::time::Instant;

use horotube::complex::{verify_incidences, verify_polyhedron, verify_relations, verify_tube};
use horotube::export::{figure_metas, read_golden, Figure};
use horotube::ford::{
    cycle_check, horoball_consistency, minimize_triple, p2, verify_pairings, verify_pairwise,
    FordReport, VerifyConfig,
};
use horotube::presentation::{abelianization, manifold_presentation, s782_presentation};
use horotube::spheres::{isometric_sphere, sphere_of, Family, SphereId};
use horotube::triangle::{eisenstein_residual, TriangleGroup};
use horotube::Result;

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict {
            pass,
            detail: detail.into(),
        }
    }
}

fn samples(n: usize, hi: f64) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| hi * i as f64 / (n - 1) as f64)
}

fn report_verdict(reports: &[FordReport], prefixes: &[&str]) -> Verdict {
    let mut total = 0;
    let mut failed = Vec::new();
    for r in reports {
        for claim in &r.claims {
            if !prefixes.is_empty() && !prefixes.iter().any(|p| claim.id.starts_with(p)) {
                continue;
            }
            total += 1;
            if !claim.passed() {
                let detail = if claim.detail.is_empty() {
                    format!("value {:.3e}", claim.value)
                } else {
                    claim.detail.clone()
                };
                failed.push(format!("{} ({detail})", claim.id));
            }
        }
    }
    if failed.is_empty() {
        Verdict::new(total > 0, format!("{total} claims"))
    } else {
        Verdict::new(
            false,
            format!("{}/{total} failed: {}", failed.len(), failed.join("; ")),
        )
    }
}

fn trace_law() -> Result<Verdict> {
    let mut worst = 0.0f64;
    for th in samples(50, FRAC_PI_3) {
        let g = TriangleGroup::build(th)?;
        let expected = 7.0 + 8.0 * (2.0 * th).cos();
        worst = worst.max((g.i1i3i2i3().trace() - expected).norm());
    }
    Ok(Verdict::new(
        worst < 1e-10,
        format!("max residual {worst:.2e} < 1e-10"),
    ))
}

fn order_relations() -> Result<Verdict> {
    let mut worst = 0.0f64;
    for th in samples(20, FRAC_PI_3) {
        let g = TriangleGroup::build(th)?;
        for w in ["SSSS", "tStStStS"] {
            worst = worst.max(g.eval_str(w)?.identity_residual());
        }
    }
    Ok(Verdict::new(
        worst < 1e-9,
        format!("max residual {worst:.2e} < 1e-9"),
    ))
}

fn sphere_table() -> Result<Verdict> {
    let mut worst = 0.0f64;
    for th in samples(10, FRAC_PI_3) {
        let g = TriangleGroup::build(th)?;
        for f in Family::ALL {
            for k in -3..=3 {
                let id = SphereId::new(f, k);
                let closed = sphere_of(id, th);
                let computed = isometric_sphere(&g.evaluate(&id.word()))?;
                worst = worst
                    .max(closed.center.coord_distance(&computed.center))
                    .max((closed.radius - computed.radius).abs());
            }
        }
    }
    Ok(Verdict::new(
        worst < 1e-9,
        format!("280 spheres, max deviation {worst:.2e} < 1e-9"),
    ))
}

fn triple_point() -> Result<Verdict> {
    let at = minimize_triple(FRAC_PI_3);
    let dist = at.point.base().coord_distance(&p2());
    let mut pass = dist < 1e-6;
    let mut mins = Vec::new();
    for th in [0.0, 0.3, 0.6, 0.9, FRAC_PI_3 - 0.02] {
        let r = minimize_triple(th).residual;
        pass &= r > 1e-3;
        mins.push(format!("{th:.2}:{r:.2e}"));
    }
    Ok(Verdict::new(
        pass,
        format!(
            "|min - p2| = {dist:.2e} < 1e-6; residuals > 1e-3 [{}]",
            mins.join(", ")
        ),
    ))
}

fn intersections() -> Result<Verdict> {
    let config = VerifyConfig::default();
    let mut reports = Vec::new();
    for th in [0.0, 0.5, FRAC_PI_3] {
        reports.push(verify_pairwise(th, &config)?);
    }
    Ok(report_verdict(&reports, &[]))
}

fn pairings_and_cycles() -> Result<Verdict> {
    let config = VerifyConfig::default();
    let reports = [
        verify_pairings(FRAC_PI_3, &config)?,
        cycle_check(FRAC_PI_3, &config)?,
        horoball_consistency(FRAC_PI_3)?,
    ];
    Ok(report_verdict(&reports, &[]))
}

fn boundary_complex() -> Result<Verdict> {
    let g = TriangleGroup::build(FRAC_PI_3)?;
    let reports = [
        verify_incidences(&g)?,
        verify_tube(&g)?,
        verify_polyhedron(&g)?,
    ];
    Ok(report_verdict(
        &reports,
        &[
            "incidence/",
            "tube/counts",
            "tube/euler",
            "polyhedron/census",
            "pairing/",
        ],
    ))
}

fn group_theory() -> Result<Verdict> {
    let g = TriangleGroup::build(FRAC_PI_3)?;
    let mut v = report_verdict(&[verify_relations(&g)?], &["cycles/", "presentation/"]);
    let a = abelianization(&manifold_presentation())?;
    let b = abelianization(&s782_presentation())?;
    let ok = |x: &horotube::smith::AbelianGroup| x.free_rank == 2 && x.torsion == [2];
    v.pass &= ok(&a) && ok(&b);
    v.detail = format!("{}; abelianizations {a} and {b}", v.detail);
    Ok(v)
}

fn eisenstein() -> Result<Verdict> {
    let g = TriangleGroup::build(FRAC_PI_3)?;
    let i31 = g.i3.mul(&g.i1);
    let worst =
        g.s.matrix
            .iter()
            .chain(i31.matrix.iter())
            .map(|&x| eisenstein_residual(x))
            .fold(0.0f64, f64::max);
    Ok(Verdict::new(
        worst < 1e-9,
        format!("max distance to Z + Z omega {worst:.2e} < 1e-9"),
    ))
}

fn figures() -> Result<Verdict> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden");
    let mut pass = true;
    let mut parts = Vec::new();
    for figure in Figure::ALL {
        let metas = figure_metas(figure)?;
        let golden = read_golden(&dir, figure)?;
        let ok = metas.len() == golden.len()
            && metas.iter().all(|m| m.points > 0)
            && golden.iter().zip(&metas).all(|(g, m)| g.matches(m));
        pass &= ok;
        let counts: Vec<String> = metas.iter().map(|m| m.points.to_string()).collect();
        parts.push(format!(
            "{}[{}]{}",
            figure.name(),
            counts.join(","),
            if ok { "" } else { " MISMATCH" }
        ));
    }
    Ok(Verdict::new(pass, parts.join(" ")))
}

type Criterion = (&'static str, fn() -> Result<Verdict>);

fn main() {
    let criteria: [Criterion; 10] = [
        ("trace law", trace_law),
        ("order relations", order_relations),
        ("isometric-sphere table", sphere_table),
        ("triple intersection", triple_point),
        ("pairwise intersections", intersections),
        ("side pairings and cycles", pairings_and_cycles),
        ("boundary complex", boundary_complex),
        ("group theory", group_theory),
        ("Eisenstein-Picard entries", eisenstein),
        ("figure metadata", figures),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run().unwrap_or_else(|e| Verdict::new(false, format!("error: {e}")));
        let tag = if verdict.pass { "PASS" } else { "FAIL" };
        failures += usize::from(!verdict.pass);
        println!(
            "criterion {:>2} {tag} {name}: {} ({:.1}s)",
            i + 1,
            verdict.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {}/{} criteria pass",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
