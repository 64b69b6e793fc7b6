//! The Ford domain `D`: membership margins, the pairwise intersection suite,
//! the triple-intersection minimization, side pairings, ridge cycles and the
//! cusp horoball cycle, all reported as JSON-serializable claims.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI, SQRT_2};

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::heisenberg::{
    cygan_distance, standard_lift, BoundaryPoint, HeisenbergPoint, HorosphericalPoint, Point,
};
use crate::hermitian::{c, h_product, mat_max_abs, re, su_normalize, CVec3, Projective};
use crate::isometry::{classify, fixed_residual, GroupElement, IsometryClass, MAX_ELLIPTIC_ORDER};
use crate::spheres::{
    f_eval, geographic_point, giraud_trace, side_of, sphere_of, tangency_points, trace_nodes,
    FFunction, Family, GeographicCoord, GiraudTrace, IsometricSphere, SphereChart, SphereId,
    Tangency, TraceGrid,
};
use crate::spheres::{trace_components, trace_connectivity_eps};
use crate::triangle::{TriangleGroup, Word};

/// Default sphere window `|k| <= K`.
pub const DEFAULT_WINDOW: i32 = 5;
/// Tolerance for "on the sphere" and matrix identity checks.
pub const INCIDENCE_TOL: f64 = 1e-9;
/// A containment sample violates its claim when its side exceeds this.
pub const CONTAINMENT_TOL: f64 = 1e-7;
/// Tangent point agreement.
pub const TANGENCY_POINT_TOL: f64 = 1e-8;
/// Upper bound on the refined minimum margin of a tangent pair.
pub const TANGENCY_BAND: f64 = 1e-6;
/// Lower bound on the triple-intersection residual when it is empty.
pub const TRIPLE_EMPTY_BOUND: f64 = 1e-3;
/// Distance from the minimizer to `p2` in the tangent case.
pub const TRIPLE_POINT_TOL: f64 = 1e-6;
/// Samples required by each containment claim.
pub const CONTAINMENT_SAMPLES: usize = 10_000;
/// Sampled points per pairing and ridge check.
pub const RIDGE_SAMPLES: usize = 100;

/// Outcome of a single claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// What a claim asserts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimKind {
    Disjoint,
    Intersect,
    Containment,
    Tangency,
    Triple,
    Pairing,
    Ridge,
    Cycle,
    Horoball,
    Incidence,
    PlaneSection,
    Curve,
    Complex,
    FacePairing,
    Relator,
    Abelianization,
}

/// One verified statement. `margin` is the slack of the tested inequality and
/// is nonnegative exactly when the claim passes.
#[derive(Debug, Clone, Serialize)]
pub struct Claim {
    pub id: String,
    pub kind: ClaimKind,
    pub status: Status,
    pub value: f64,
    pub margin: f64,
    pub witness: Option<HorosphericalPoint>,
    pub detail: String,
}

impl Claim {
    /// Claim that passes iff `margin >= 0`.
    pub fn from_margin(id: impl Into<String>, kind: ClaimKind, value: f64, margin: f64) -> Self {
        Claim {
            id: id.into(),
            kind,
            status: if margin >= 0.0 {
                Status::Pass
            } else {
                Status::Fail
            },
            value,
            margin,
            witness: None,
            detail: String::new(),
        }
    }

    /// Claim that passes iff `residual <= tol`.
    pub fn below(id: impl Into<String>, kind: ClaimKind, residual: f64, tol: f64) -> Self {
        let margin = if residual.is_nan() {
            f64::NEG_INFINITY
        } else {
            tol - residual
        };
        Claim::from_margin(id, kind, residual, margin)
    }

    /// Claim for a boolean fact.
    pub fn check(id: impl Into<String>, kind: ClaimKind, ok: bool) -> Self {
        Claim::from_margin(id, kind, ok as u8 as f64, if ok { 0.0 } else { -1.0 })
    }

    pub fn with_witness(mut self, p: impl Into<Point>) -> Self {
        self.witness = match p.into() {
            Point::Finite(q) => Some(q),
            Point::Infinity => None,
        };
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Aggregate counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub all_pass: bool,
}

/// Collected claims for one `theta` and window.
#[derive(Debug, Clone, Serialize)]
pub struct FordReport {
    pub theta: f64,
    #[serde(rename = "K")]
    pub window: i32,
    pub claims: Vec<Claim>,
    pub summary: Summary,
}

impl FordReport {
    pub fn new(theta: f64, window: i32) -> Self {
        FordReport {
            theta,
            window,
            claims: Vec::new(),
            summary: Summary {
                total: 0,
                passed: 0,
                failed: 0,
                all_pass: true,
            },
        }
    }

    pub fn push(&mut self, claim: Claim) {
        self.claims.push(claim);
        self.refresh();
    }

    pub fn extend(&mut self, other: FordReport) {
        self.claims.extend(other.claims);
        self.refresh();
    }

    fn refresh(&mut self) {
        let passed = self.claims.iter().filter(|c| c.passed()).count();
        self.summary = Summary {
            total: self.claims.len(),
            passed,
            failed: self.claims.len() - passed,
            all_pass: passed == self.claims.len(),
        };
    }

    pub fn all_pass(&self) -> bool {
        self.summary.all_pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| !c.passed())
    }

    /// Re-evaluate every claim with its margin widened by `slack >= 0`.
    pub fn with_slack(mut self, slack: f64) -> Self {
        for c in &mut self.claims {
            c.status = if c.margin + slack >= 0.0 {
                Status::Pass
            } else {
                Status::Fail
            };
        }
        self.refresh();
        self
    }

    pub fn get(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }
}

/// Settings shared by the suites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub window: i32,
    pub grid: TraceGrid,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            window: DEFAULT_WINDOW,
            grid: TraceGrid::default(),
            seed: 0,
        }
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..=FRAC_PI_3 + 1e-12).contains(&theta) {
        return Err(Error::ThetaOutOfRange {
            theta,
            range: "[0, pi/3]",
        });
    }
    Ok(())
}

fn require_parabolic(theta: f64) -> Result<()> {
    if (theta - FRAC_PI_3).abs() > 1e-12 {
        return Err(Error::NotParabolicCase { theta });
    }
    Ok(())
}

/// The spheres of a window, used for repeated membership tests.
#[derive(Debug, Clone)]
pub struct FordDomain {
    pub theta: f64,
    pub window: i32,
    pub spheres: Vec<IsometricSphere>,
}

impl FordDomain {
    pub fn new(theta: f64, window: i32) -> Result<Self> {
        if window < 2 {
            return Err(Error::WindowTooSmall { k: window });
        }
        Ok(FordDomain {
            theta,
            window,
            spheres: SphereId::window(window)
                .into_iter()
                .map(|id| sphere_of(id, theta))
                .collect(),
        })
    }

    /// Minimum side over the window with the minimizing sphere.
    pub fn margin(&self, p: impl Into<Point>) -> (f64, Option<SphereId>) {
        let p = p.into();
        self.spheres
            .iter()
            .map(|s| (side_of(p, s), s.id))
            .fold((f64::INFINITY, None), |a, b| if b.0 < a.0 { b } else { a })
    }

    /// Minimum side over the window, ignoring the listed spheres.
    pub fn margin_excluding(&self, p: impl Into<Point>, exclude: &[SphereId]) -> f64 {
        let p = p.into();
        self.spheres
            .iter()
            .filter(|s| s.id.is_none_or(|id| !exclude.contains(&id)))
            .map(|s| side_of(p, s))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Minimum of `side_of` over all spheres with `|k| <= window`; nonnegative
/// (up to tolerance) exactly on `D`.
pub fn ford_margin(p: impl Into<Point>, theta: f64, window: i32) -> Result<f64> {
    let p = p.into();
    if matches!(p, Point::Infinity) {
        return Err(Error::InfinityArgument);
    }
    Ok(FordDomain::new(theta, window)?.margin(p).0)
}

/// Expected relation of two distinct spheres for `theta` in `[0, pi/3]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// Allowed to meet.
    Intersect,
    /// Disjoint, except for a boundary tangency at `theta = pi/3`.
    TangentAtParabolic,
    Disjoint,
}

/// Relation between `a` and `b` predicted by the intersection pattern.
pub fn expected_relation(a: SphereId, b: SphereId) -> Relation {
    use Family::*;
    let d = b.k - a.k;
    let meets = match (a.family, b.family) {
        (Plus, Minus) => d == 0 || d == -1,
        (Plus, Star) => d == 0 || d == -1,
        (Plus, Diamond) => d == 0 || d == 1,
        (Minus, Plus) => d == 0 || d == 1,
        (Minus, Star) => d == 0 || d == 1,
        (Minus, Diamond) => d == 0 || d == 1,
        (Star, Plus) => d == 0 || d == 1,
        (Star, Minus) => d == 0 || d == -1,
        (Star, Diamond) => d == 0 || d == 1,
        (Diamond, Plus) => d == 0 || d == -1,
        (Diamond, Minus) => d == 0 || d == -1,
        (Diamond, Star) => d == 0 || d == -1,
        _ => false,
    };
    if meets {
        Relation::Intersect
    } else if matches!((a.family, b.family), (Star, Star) | (Diamond, Diamond)) && d.abs() == 1 {
        Relation::TangentAtParabolic
    } else {
        Relation::Disjoint
    }
}

/// Pairs up to `T`-translation: the first sphere has `k = 0`, the second
/// ranges over the window.
pub fn canonical_pairs(window: i32) -> Vec<(SphereId, SphereId)> {
    let mut out = Vec::new();
    for fa in Family::ALL {
        for b in SphereId::window(window) {
            let a = SphereId::new(fa, 0);
            if a == b {
                continue;
            }
            let mirror = (b.family, 0, a.family, -b.k);
            if (a.family, 0, b.family, b.k) <= mirror || b.k.abs() > window {
                out.push((a, b));
            }
        }
    }
    out
}

/// Zoom refinement of `min_w side_of(other)` over `(alpha, beta)` on the base
/// sphere, starting from a grid cell.
pub fn refine_min_margin(
    chart: &SphereChart,
    other: &IsometricSphere,
    start: (f64, f64),
    half: f64,
    rounds: usize,
) -> (f64, GeographicCoord) {
    let (mut ca, mut cb) = start;
    let mut h = half;
    let mut best = chart.min_side_over_w(other, ca, cb);
    for _ in 0..rounds {
        let n = 8;
        for i in 0..=2 * n {
            let a = (ca + h * (i as f64 - n as f64) / n as f64).clamp(-FRAC_PI_2, FRAC_PI_2);
            for j in 0..=2 * n {
                let b = cb + h * (j as f64 - n as f64) / n as f64;
                let m = chart.min_side_over_w(other, a, b);
                if m.0 < best.0 {
                    best = m;
                    ca = a;
                    cb = b;
                }
            }
        }
        h *= 0.5;
    }
    (best.0, GeographicCoord::new(ca, cb, best.1))
}

fn refined_trace_min(trace: &GiraudTrace) -> (f64, HorosphericalPoint) {
    let chart = SphereChart::new(trace.base.clone());
    let grid = trace.grid;
    let mut best = (f64::INFINITY, trace.min_witness);
    // Refine the best few cells; the grid minimum may sit in a neighboring basin.
    let mut cells: Vec<(f64, (f64, f64))> = grid
        .nodes()
        .into_iter()
        .map(|n| {
            (
                chart.min_side_over_w(&trace.other, n.alpha, n.beta).0,
                (n.alpha, n.beta),
            )
        })
        .collect();
    cells.sort_by(|x, y| x.0.total_cmp(&y.0));
    for &(_, start) in cells.iter().take(4) {
        let (m, coord) = refine_min_margin(&chart, &trace.other, start, grid.pitch(), 50);
        if m < best.0 {
            best = (m, chart.point(&coord));
        }
    }
    best
}

fn tangency_claims(tangencies: &[Tangency], a: SphereId, b: SphereId) -> Option<&Tangency> {
    tangencies.iter().find(|t| {
        t.touching.is_none() && ((t.first == a && t.second == b) || (t.first == b && t.second == a))
    })
}

/// Pairwise suite: disjointness, intersection connectivity, tangencies and the
/// six containment clauses.
pub fn verify_pairwise(theta: f64, config: &VerifyConfig) -> Result<FordReport> {
    check_theta(theta)?;
    FordDomain::new(theta, config.window)?;
    let group = TriangleGroup::build(theta)?;
    let parabolic = group.parabolic_case;
    let tangencies = if parabolic {
        tangency_points(&group, -1..=1)?
    } else {
        Vec::new()
    };
    let mut report = FordReport::new(theta, config.window);
    for (a, b) in canonical_pairs(config.window) {
        let (sa, sb) = (sphere_of(a, theta), sphere_of(b, theta));
        let id = format!("pair/{a}/{b}");
        let relation = expected_relation(a, b);
        let center_gap =
            cygan_distance(sa.center, sb.center).unwrap_or(f64::INFINITY) - sa.radius - sb.radius;
        match relation {
            Relation::Intersect => {
                let trace = giraud_trace(&sa, &sb, config.grid);
                let points: Vec<HorosphericalPoint> =
                    trace.samples.iter().map(|s| s.point).collect();
                let comps = trace_components(&trace, trace_connectivity_eps(&trace));
                let worst = trace
                    .samples
                    .iter()
                    .map(|s| side_of(s.point, &sa).abs().max(s.residual.abs()))
                    .fold(0.0, f64::max);
                let ok = comps <= 1 && worst < 1e-10;
                let mut claim = Claim::check(id, ClaimKind::Intersect, ok).with_detail(format!(
                    "{} samples, {} component(s), max residual {:.1e}",
                    points.len(),
                    comps,
                    worst
                ));
                claim.value = points.len() as f64;
                if let Some(p) = points.first() {
                    claim = claim.with_witness(*p);
                }
                report.push(claim);
            }
            Relation::TangentAtParabolic if parabolic => {
                let trace = giraud_trace(&sa, &sb, config.grid);
                let (m, witness) = refined_trace_min(&trace);
                let t = tangency_claims(&tangencies, a, b);
                let (inc, fix) = t
                    .map(|t| (t.incidence_residual, t.fixed_residual))
                    .unwrap_or((f64::INFINITY, f64::INFINITY));
                let ok = inc < TANGENCY_POINT_TOL
                    && fix < TANGENCY_POINT_TOL
                    && (-INCIDENCE_TOL..TANGENCY_BAND).contains(&m)
                    && trace.samples.iter().all(|s| s.residual.abs() < 1e-10);
                let mut claim = Claim::check(id, ClaimKind::Tangency, ok)
                    .with_witness(witness)
                    .with_detail(format!(
                        "word {}, point residual {:.1e}, fixed residual {:.1e}, min margin {:.2e}",
                        t.map(|t| t.word.to_string()).unwrap_or_default(),
                        inc,
                        fix,
                        m
                    ));
                claim.value = m;
                report.push(claim);
            }
            _ => {
                if center_gap > 1e-12 {
                    report.push(
                        Claim::from_margin(id, ClaimKind::Disjoint, center_gap, center_gap)
                            .with_witness(sb.center.at_height(0.0))
                            .with_detail("center distance exceeds sum of radii"),
                    );
                } else {
                    let trace = giraud_trace(&sa, &sb, config.grid);
                    let (m, witness) = refined_trace_min(&trace);
                    let m = m.min(trace.min_margin);
                    let ok = trace.samples.is_empty() && m > 0.0;
                    let mut claim = Claim::from_margin(
                        id,
                        ClaimKind::Disjoint,
                        m,
                        if ok { m } else { -m.abs() },
                    )
                    .with_witness(witness)
                    .with_detail("sampled minimum margin");
                    claim.status = if ok { Status::Pass } else { Status::Fail };
                    report.push(claim);
                }
            }
        }
    }
    for claim in containment_claims(theta, config, &tangencies)? {
        report.push(claim);
    }
    Ok(report)
}

/// A containment clause `a ∩ b ⊂ int(inside)` with its tangent word at
/// `theta = pi/3`.
#[derive(Debug, Clone, Copy)]
pub struct ContainmentClause {
    pub id: &'static str,
    pub a: SphereId,
    pub b: SphereId,
    pub inside: SphereId,
    pub tangent_word: Option<&'static str>,
}

/// The six containment clauses at `k = 0`.
pub fn containment_clauses() -> [ContainmentClause; 6] {
    [
        ContainmentClause {
            id: "C1",
            a: SphereId::plus(0),
            b: SphereId::star(-1),
            inside: SphereId::minus(-1),
            tangent_word: Some("SST"),
        },
        ContainmentClause {
            id: "C2",
            a: SphereId::plus(0),
            b: SphereId::diamond(1),
            inside: SphereId::minus(0),
            tangent_word: Some("sTs"),
        },
        ContainmentClause {
            id: "C3",
            a: SphereId::minus(0),
            b: SphereId::diamond(0),
            inside: SphereId::plus(0),
            tangent_word: Some("StS"),
        },
        ContainmentClause {
            id: "C4",
            a: SphereId::minus(0),
            b: SphereId::star(1),
            inside: SphereId::plus(1),
            tangent_word: Some("SSt"),
        },
        ContainmentClause {
            id: "C5",
            a: SphereId::star(0),
            b: SphereId::diamond(0),
            inside: SphereId::plus(0),
            tangent_word: None,
        },
        ContainmentClause {
            id: "C6",
            a: SphereId::star(0),
            b: SphereId::diamond(1),
            inside: SphereId::minus(0),
            tangent_word: None,
        },
    ]
}

/// Trace `a ∩ b`, refining on the bounding box of the first pass until at
/// least `want` samples are found or the resolution cap is reached.
pub fn trace_with_min_samples(
    a: &IsometricSphere,
    b: &IsometricSphere,
    grid: TraceGrid,
    want: usize,
) -> GiraudTrace {
    let mut trace = giraud_trace(a, b, grid);
    if trace.samples.is_empty() || trace.samples.len() >= want {
        return trace;
    }
    let pad = 2.0 * grid.pitch();
    let (mut a0, mut a1, mut b0, mut b1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for s in &trace.samples {
        a0 = a0.min(s.coord.alpha);
        a1 = a1.max(s.coord.alpha);
        b0 = b0.min(s.coord.beta);
        b1 = b1.max(s.coord.beta);
    }
    let alpha = ((a0 - pad).max(-FRAC_PI_2), (a1 + pad).min(FRAC_PI_2));
    let beta = ((b0 - pad).max(0.0), (b1 + pad).min(PI));
    let mut n = grid.n_alpha.max(grid.n_beta);
    while n <= 8192 {
        n *= 2;
        let fine = TraceGrid {
            n_alpha: n,
            n_beta: n,
            iterations: grid.iterations,
        };
        let nodes = fine.nodes_in(alpha, beta);
        let mut refined = trace_nodes(a, b, fine, &nodes);
        if refined.samples.len() >= want {
            // Keep the coarse pitch for connectivity thresholds of the full grid.
            refined.grid = TraceGrid {
                n_alpha: (PI / ((alpha.1 - alpha.0) / n as f64)).round() as usize,
                n_beta: (PI / ((beta.1 - beta.0) / n as f64)).round() as usize,
                iterations: grid.iterations,
            };
            return refined;
        }
        trace = refined;
    }
    trace
}

fn containment_claims(
    theta: f64,
    config: &VerifyConfig,
    tangencies: &[Tangency],
) -> Result<Vec<Claim>> {
    let group = TriangleGroup::build(theta)?;
    let mut out = Vec::new();
    for clause in containment_clauses() {
        let (sa, sb, si) = (
            sphere_of(clause.a, theta),
            sphere_of(clause.b, theta),
            sphere_of(clause.inside, theta),
        );
        let trace = trace_with_min_samples(&sa, &sb, config.grid, CONTAINMENT_SAMPLES);
        let mut worst = f64::NEG_INFINITY;
        let mut witness = None;
        let mut violations = 0usize;
        for s in &trace.samples {
            let side = side_of(s.point, &si);
            if side > CONTAINMENT_TOL {
                violations += 1;
            }
            if side > worst {
                worst = side;
                witness = Some(s.point);
            }
        }
        let n = trace.samples.len();
        let mut detail = format!("{n} samples, {violations} violation(s), max side {worst:.2e}");
        if n == 0 {
            // The spheres may still touch at a single point below grid resolution.
            let (m, touch) = refined_trace_min(&trace);
            if m <= TANGENCY_BAND {
                worst = side_of(touch, &si);
                witness = Some(touch);
                violations = usize::from(worst > CONTAINMENT_TOL);
                detail = format!("single touching point (margin {m:.1e}), side {worst:.2e}");
            } else {
                worst = -m;
                detail = format!("intersection empty, minimum margin {m:.3e}");
            }
        }
        let enough = n == 0 || n >= CONTAINMENT_SAMPLES;
        let ok = violations == 0 && enough;
        let id = format!(
            "containment/{}/{}^{}/in-{}",
            clause.id, clause.a, clause.b, clause.inside
        );
        let mut claim = Claim::check(id, ClaimKind::Containment, ok).with_detail(detail);
        claim.value = worst;
        if let Some(w) = witness {
            claim = claim.with_witness(w);
        }
        out.push(claim);

        if group.parabolic_case {
            if let Some(word) = clause.tangent_word {
                let t = tangencies.iter().find(|t| {
                    t.first == clause.a && t.second == clause.b && t.touching == Some(clause.inside)
                });
                let word = Word::parse(word)?;
                let ok = t.is_some_and(|t| {
                    t.word == word
                        && t.incidence_residual < TANGENCY_POINT_TOL
                        && t.fixed_residual < TANGENCY_POINT_TOL
                });
                let mut claim = Claim::check(
                    format!(
                        "tangency/{}/{}^{}^{}",
                        clause.id, clause.a, clause.b, clause.inside
                    ),
                    ClaimKind::Tangency,
                    ok,
                )
                .with_detail(format!("fixed point of {word}"));
                if let Some(t) = t {
                    claim.value = t.incidence_residual.max(t.fixed_residual);
                    claim = claim.with_witness(t.point);
                }
                out.push(claim);
            }
        }
    }
    Ok(out)
}

/// Result of minimizing `max(|f_0^*|, |f_{-1}^-|)` on `I_0^+`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TripleMinimum {
    pub residual: f64,
    pub coord: GeographicCoord,
    pub point: HorosphericalPoint,
}

fn triple_residual(theta: f64, alpha: f64, beta: f64, s: f64) -> f64 {
    let w = s * alpha.cos().max(0.0).sqrt();
    let c0 = GeographicCoord::new(alpha, beta, w);
    f_eval(FFunction::Star0, theta, &c0)
        .abs()
        .max(f_eval(FFunction::MinusMinus1, theta, &c0).abs())
}

/// Grid search followed by zoom refinement. The search variable is
/// `s = w / sqrt(cos alpha)` in `[-1, 1]`.
pub fn minimize_triple(theta: f64) -> TripleMinimum {
    let (na, nb, ns) = (90usize, 90usize, 41usize);
    let mut cells: Vec<(f64, [f64; 3])> = Vec::with_capacity(na * nb * ns);
    for i in 0..na {
        let a = -FRAC_PI_2 + PI * (i as f64 + 0.5) / na as f64;
        for j in 0..nb {
            let b = PI * (j as f64 + 0.5) / nb as f64;
            for l in 0..ns {
                let s = -1.0 + 2.0 * l as f64 / (ns - 1) as f64;
                cells.push((triple_residual(theta, a, b, s), [a, b, s]));
            }
        }
    }
    cells.sort_by(|x, y| x.0.total_cmp(&y.0));
    let steps = [PI / na as f64, PI / nb as f64, 2.0 / (ns - 1) as f64];
    let mut best = (f64::INFINITY, [0.0; 3]);
    for &(r0, start) in cells.iter().take(12) {
        let mut cur = (r0, start);
        let mut h = steps;
        for _ in 0..120 {
            let center = cur.1;
            let n = 5;
            for i in -n..=n {
                let a = (center[0] + h[0] * i as f64 / n as f64).clamp(-FRAC_PI_2, FRAC_PI_2);
                for j in -n..=n {
                    let b = center[1] + h[1] * j as f64 / n as f64;
                    for l in -n..=n {
                        let s = (center[2] + h[2] * l as f64 / n as f64).clamp(-1.0, 1.0);
                        let r = triple_residual(theta, a, b, s);
                        if r < cur.0 {
                            cur = (r, [a, b, s]);
                        }
                    }
                }
            }
            for x in h.iter_mut() {
                *x *= 0.7;
            }
        }
        if cur.0 < best.0 {
            best = cur;
        }
    }
    let [a, b, s] = best.1;
    let coord = GeographicCoord::new(a, b, s * a.cos().max(0.0).sqrt()).normalized();
    let base = sphere_of(SphereId::plus(0), theta);
    TripleMinimum {
        residual: best.0,
        coord,
        point: geographic_point(&base, &coord)
            .unwrap_or_else(|_| HeisenbergPoint::origin().at_height(0.0)),
    }
}

/// The point `p2 = [e^{2 pi i/3}, -sqrt 3]`.
pub fn p2() -> HeisenbergPoint {
    HeisenbergPoint::new(c(-0.5, 3f64.sqrt() / 2.0), -(3f64.sqrt()))
}

/// Emptiness of `I_0^+ ∩ I_0^* ∩ I_{-1}^-` off the parabolic parameter, and
/// the single point `p2` at `theta = pi/3`.
pub fn verify_triple(theta: f64) -> Result<FordReport> {
    check_theta(theta)?;
    let group = TriangleGroup::build(theta)?;
    let mut report = FordReport::new(theta, 0);
    let min = minimize_triple(theta);
    if group.parabolic_case {
        let target = p2();
        let d = min
            .point
            .base()
            .coord_distance(&target)
            .max(min.point.u.abs());
        report.push(
            Claim::below(
                "triple/minimizer-is-p2",
                ClaimKind::Triple,
                d,
                TRIPLE_POINT_TOL,
            )
            .with_witness(min.point)
            .with_detail(format!("residual {:.2e} at {:?}", min.residual, min.coord)),
        );
        let g = group.eval_str("tSS")?;
        report.push(
            Claim::below(
                "triple/p2-fixed-by-T^-1S^2",
                ClaimKind::Triple,
                fixed_residual(&g, BoundaryPoint::Finite(target)),
                INCIDENCE_TOL,
            )
            .with_witness(target.at_height(0.0)),
        );
    } else {
        report.push(
            Claim::from_margin(
                "triple/empty",
                ClaimKind::Triple,
                min.residual,
                min.residual - TRIPLE_EMPTY_BOUND,
            )
            .with_witness(min.point)
            .with_detail("minimum of max(|f_0^*|, |f_-1^-|)"),
        );
    }
    Ok(report)
}

/// A side pairing `map: side -> image`.
#[derive(Debug, Clone, Serialize)]
pub struct SidePairing {
    pub side: SphereId,
    pub map: Word,
    pub image: SphereId,
}

/// The pairings for `|k| <= window`.
pub fn side_pairing_table(window: i32) -> Vec<SidePairing> {
    let mut out = Vec::new();
    for k in -window..=window {
        out.push(SidePairing {
            side: SphereId::plus(k),
            map: Word::parse("S").unwrap_or_default().t_conjugate(k),
            image: SphereId::minus(k),
        });
        out.push(SidePairing {
            side: SphereId::star(k),
            map: Word::parse("SS").unwrap_or_default().t_conjugate(k),
            image: SphereId::star(k),
        });
        out.push(SidePairing {
            side: SphereId::diamond(k),
            map: Word::parse("tStS").unwrap_or_default().t_conjugate(k),
            image: SphereId::diamond(k),
        });
    }
    out
}

fn image_point(g: &GroupElement, p: HorosphericalPoint) -> Option<HorosphericalPoint> {
    match g.apply(p) {
        Ok(Point::Finite(q)) => Some(q),
        _ => None,
    }
}

fn random_sphere_point(rng: &mut ChaCha8Rng, s: &IsometricSphere) -> HorosphericalPoint {
    let alpha: f64 = rng.gen_range(-1.4..1.4);
    let beta: f64 = rng.gen_range(0.0..PI);
    let bound = alpha.cos().sqrt();
    let w = rng.gen_range(-bound..=bound);
    SphereChart::new(s.clone()).point(&GeographicCoord::new(alpha, beta, w))
}

/// Points of the ridge `s_a ∩ s_b` in the interior of the ridge: traced points
/// of `a ∩ b` whose margin against every other sphere is at least `clearance`.
pub fn ridge_samples(
    domain: &FordDomain,
    a: SphereId,
    b: SphereId,
    grid: TraceGrid,
    clearance: f64,
    count: usize,
) -> Vec<HorosphericalPoint> {
    let (sa, sb) = (sphere_of(a, domain.theta), sphere_of(b, domain.theta));
    let trace = giraud_trace(&sa, &sb, grid);
    let good: Vec<HorosphericalPoint> = trace
        .samples
        .iter()
        .map(|s| s.point)
        .filter(|p| domain.margin_excluding(*p, &[a, b]) >= clearance)
        .collect();
    if good.len() <= count {
        return good;
    }
    (0..count).map(|i| good[i * good.len() / count]).collect()
}

/// Side pairings: each map sends its sphere onto the image sphere and the
/// exterior into the interior, and the ridge `s_0^+ ∩ s_0^-` goes to
/// `s_0^- ∩ s_0^*` under `S`.
pub fn verify_pairings(theta: f64, config: &VerifyConfig) -> Result<FordReport> {
    check_theta(theta)?;
    let group = TriangleGroup::build(theta)?;
    let domain = FordDomain::new(theta, config.window)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut report = FordReport::new(theta, config.window);

    for pairing in side_pairing_table(0) {
        let g = group.evaluate(&pairing.map);
        let side = sphere_of(pairing.side, theta);
        let image = sphere_of(pairing.image, theta);
        let mut on_worst = (0.0f64, None);
        let mut ext_worst = (f64::NEG_INFINITY, None);
        for _ in 0..RIDGE_SAMPLES {
            let p = random_sphere_point(&mut rng, &side);
            let q = image_point(&g, p);
            let r = q.map(|q| side_of(q, &image).abs()).unwrap_or(f64::INFINITY);
            if r > on_worst.0 {
                on_worst = (r, Some(p));
            }
            let outside = p.base().at_height(p.u + rng.gen_range(0.05..1.0));
            let qe = image_point(&g, outside);
            let se = qe.map(|q| side_of(q, &image)).unwrap_or(f64::INFINITY);
            if se > ext_worst.0 {
                ext_worst = (se, Some(outside));
            }
        }
        let name = format!("{}->{}", pairing.side, pairing.image);
        let mut claim = Claim::below(
            format!("pairing/{name}/sphere-onto-sphere"),
            ClaimKind::Pairing,
            on_worst.0,
            INCIDENCE_TOL,
        )
        .with_detail(format!("map {}", pairing.map));
        if let Some(w) = on_worst.1 {
            claim = claim.with_witness(w);
        }
        report.push(claim);
        let mut claim = Claim::from_margin(
            format!("pairing/{name}/exterior-to-interior"),
            ClaimKind::Pairing,
            ext_worst.0,
            -ext_worst.0,
        );
        if let Some(w) = ext_worst.1 {
            claim = claim.with_witness(w);
        }
        report.push(claim);

        let shifted = group.evaluate(&pairing.map.t_conjugate(2));
        let t2 = group.evaluate(&Word::parse("TT")?);
        let conj = t2.mul(&g).mul(&t2.inverse());
        report.push(Claim::below(
            format!("pairing/{name}/T^2-equivariance"),
            ClaimKind::Pairing,
            shifted.matrix.projective_residual(&conj.matrix)?
                / mat_max_abs(&su_normalize(&conj.matrix)?),
            INCIDENCE_TOL,
        ));
    }

    // S maps the ridge s_0^+ ∩ s_0^- onto s_0^- ∩ s_0^*.
    let s = &group.s;
    let (minus0, star0) = (
        sphere_of(SphereId::minus(0), theta),
        sphere_of(SphereId::star(0), theta),
    );
    let ridge = ridge_samples(
        &domain,
        SphereId::plus(0),
        SphereId::minus(0),
        TraceGrid::square(240),
        1e-3,
        RIDGE_SAMPLES,
    );
    let mut worst = (
        if ridge.len() >= RIDGE_SAMPLES {
            0.0
        } else {
            f64::INFINITY
        },
        None,
    );
    for p in &ridge {
        let r = match image_point(s, *p) {
            Some(q) => side_of(q, &minus0)
                .abs()
                .max(side_of(q, &star0).abs())
                .max((-domain.margin(q).0).max(0.0)),
            None => f64::INFINITY,
        };
        if r > worst.0 {
            worst = (r, Some(*p));
        }
    }
    let mut claim = Claim::below(
        "pairing/ridge/S:plus0^minus0->minus0^star0",
        ClaimKind::Ridge,
        worst.0,
        INCIDENCE_TOL,
    )
    .with_detail(format!("{} ridge samples", ridge.len()));
    if let Some(w) = worst.1 {
        claim = claim.with_witness(w);
    }
    report.push(claim);

    let q = geographic_point(
        &sphere_of(SphereId::plus(0), theta),
        &GeographicCoord::new(FRAC_PI_3, FRAC_PI_6 + theta, SQRT_2 / 2.0),
    )?;
    let img = image_point(s, q);
    let plus0 = sphere_of(SphereId::plus(0), theta);
    let r = img
        .map(|x| side_of(x, &minus0).abs().max(side_of(x, &star0).abs()))
        .unwrap_or(f64::INFINITY);
    let ext = img.map(|x| side_of(x, &plus0)).unwrap_or(f64::NEG_INFINITY);
    report.push(
        Claim::check(
            "pairing/ridge/S-image-of-q(pi/3,pi/6+theta,sqrt2/2)",
            ClaimKind::Ridge,
            r < INCIDENCE_TOL && ext > 0.0,
        )
        .with_witness(q)
        .with_detail(format!("incidence {r:.1e}, side on plus0 {ext:.3}")),
    );
    Ok(report)
}

/// `|<z, h q_inf>|` for the lift `h (1, 0, 0)` of an SU representative.
fn horo_quantity(z: &CVec3, h: &GroupElement) -> f64 {
    let q = h.matrix * Vector3::new(re(1.0), re(0.0), re(0.0));
    h_product(z, &q).norm()
}

/// Three copies `{D, g^{-1} D, g D}` around the ridge `I(g) ∩ I(g^{-1})`:
/// on sampled ridge points the three horospherical quantities agree, and at
/// perturbed points the smallest one selects the unique copy containing it.
fn ridge_copies(
    domain: &FordDomain,
    group: &TriangleGroup,
    rng: &mut ChaCha8Rng,
    a: SphereId,
    b: SphereId,
    g_word: &str,
) -> Result<Vec<Claim>> {
    let g = group.eval_str(g_word)?;
    let copies = [GroupElement::identity(), g.inverse(), g.clone()];
    let samples = ridge_samples(domain, a, b, TraceGrid::square(240), 1e-3, RIDGE_SAMPLES);
    let mut equal_worst = (
        if samples.len() >= RIDGE_SAMPLES {
            0.0
        } else {
            f64::INFINITY
        },
        None,
    );
    let mut split_fail = (0usize, None);
    for p in &samples {
        let z = standard_lift(*p);
        let qs: Vec<f64> = copies.iter().map(|h| horo_quantity(&z, h)).collect();
        let spread = (qs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - qs.iter().cloned().fold(f64::INFINITY, f64::min))
            / qs[0];
        if spread > equal_worst.0 {
            equal_worst = (spread, Some(*p));
        }
        let eps = 1e-5;
        let pert = HorosphericalPoint::new(
            p.z + c(rng.gen_range(-eps..eps), rng.gen_range(-eps..eps)),
            p.t + rng.gen_range(-eps..eps),
            (p.u + rng.gen_range(-eps..eps)).abs(),
        );
        let zl = standard_lift(pert);
        let qs: Vec<f64> = copies.iter().map(|h| horo_quantity(&zl, h)).collect();
        let best = (0..3).min_by(|&i, &j| qs[i].total_cmp(&qs[j])).unwrap_or(0);
        let ok = copies.iter().enumerate().all(|(i, h)| {
            let m = match h.inverse().apply(pert) {
                Ok(x) => domain.margin(x).0,
                Err(_) => f64::NAN,
            };
            if i == best {
                m >= -1e-12
            } else {
                m < 0.0
            }
        });
        if !ok {
            split_fail = (split_fail.0 + 1, Some(pert));
        }
    }
    let name = format!("{a}^{b}");
    let mut c1 = Claim::below(
        format!("ridge/{name}/three-quantities-equal"),
        ClaimKind::Ridge,
        equal_worst.0,
        1e-8,
    )
    .with_detail(format!("{} ridge samples, g = {}", samples.len(), g.word));
    if let Some(w) = equal_worst.1 {
        c1 = c1.with_witness(w);
    }
    let mut c2 = Claim::check(
        format!("ridge/{name}/three-copies"),
        ClaimKind::Ridge,
        split_fail.0 == 0 && samples.len() >= RIDGE_SAMPLES,
    )
    .with_detail(format!("{} misclassified perturbations", split_fail.0));
    c2.value = split_fail.0 as f64;
    if let Some(w) = split_fail.1 {
        c2 = c2.with_witness(w);
    }
    Ok(vec![c1, c2])
}

/// Cycle transformations `T^k S^4 T^-k` and `T^k (T^-1 S)^4 T^-k` for
/// `|k| <= 2`, and the three-copies check on the two ridge types.
pub fn cycle_check(theta: f64, config: &VerifyConfig) -> Result<FordReport> {
    check_theta(theta)?;
    let group = TriangleGroup::build(theta)?;
    let domain = FordDomain::new(theta, config.window)?;
    let mut report = FordReport::new(theta, config.window);
    for base in ["SSSS", "tStStStS"] {
        let mut worst = 0.0f64;
        for k in -2..=2 {
            let w = Word::parse(base)?.t_conjugate(k);
            worst = worst.max(group.evaluate(&w).identity_residual());
        }
        report.push(Claim::below(
            format!("cycle/{}", Word::parse(base)?),
            ClaimKind::Cycle,
            worst,
            INCIDENCE_TOL,
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(1));
    for claim in ridge_copies(
        &domain,
        &group,
        &mut rng,
        SphereId::plus(0),
        SphereId::minus(0),
        "S",
    )? {
        report.push(claim);
    }
    for claim in ridge_copies(
        &domain,
        &group,
        &mut rng,
        SphereId::plus(0),
        SphereId::minus(-1),
        "tS",
    )? {
        report.push(claim);
    }
    Ok(report)
}

/// The cusp cycle at `theta = pi/3`.
pub fn horoball_consistency(theta: f64) -> Result<FordReport> {
    require_parabolic(theta)?;
    let group = TriangleGroup::build(theta)?;
    let mut report = FordReport::new(theta, 0);
    let sss = group.eval_str("SS")?.mul(&group.eval_str("ss")?);
    report.push(Claim::below(
        "horoball/S.S.S^-2",
        ClaimKind::Horoball,
        sss.identity_residual(),
        INCIDENCE_TOL,
    ));
    let cusp = group
        .eval_str("tST")?
        .mul(&group.eval_str("sT")?.pow(2).inverse())
        .mul(&group.s);
    let square = group.eval_str("tSStSS")?;
    report.push(Claim::below(
        "horoball/T^-1ST.(S^-1T)^-2.S=(T^-1S^2)^2",
        ClaimKind::Horoball,
        cusp.matrix.projective_residual(&square.matrix)?,
        INCIDENCE_TOL,
    ));
    let i = group.i1i3i2i3();
    report.push(Claim::below(
        "horoball/(T^-1S^2)^2=(I1I3I2I3)^2",
        ClaimKind::Horoball,
        square.matrix.projective_residual(&i.mul(&i).matrix)?,
        INCIDENCE_TOL,
    ));
    let tr = square.trace();
    report.push(Claim::below(
        "horoball/trace-3",
        ClaimKind::Horoball,
        (tr - re(3.0)).norm(),
        INCIDENCE_TOL,
    ));
    let class = classify(&square, MAX_ELLIPTIC_ORDER)?;
    report.push(
        Claim::check(
            "horoball/parabolic-non-identity",
            ClaimKind::Horoball,
            matches!(class, IsometryClass::Parabolic { .. }) && square.identity_residual() > 1e-3,
        )
        .with_detail(format!("{class:?}")),
    );
    report.push(
        Claim::below(
            "horoball/fixes-p2",
            ClaimKind::Horoball,
            fixed_residual(&square, BoundaryPoint::Finite(p2())),
            INCIDENCE_TOL,
        )
        .with_witness(p2().at_height(0.0)),
    );
    Ok(report)
}
