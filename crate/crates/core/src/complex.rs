//! The ideal boundary at `theta = pi/3`: named points and their incidences,
//! the plane sections `Sigma_0`, `Sigma_-1`, the curves `c_0`, `c_-1`, the
//! tube cell complex, the polyhedron `P` with its face pairings, the edge
//! cycles and the resulting presentation.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_PI_3, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ford::{Claim, ClaimKind, FordDomain, FordReport, INCIDENCE_TOL};
use crate::heisenberg::{BoundaryPoint, HeisenbergPoint};
use crate::hermitian::c;
use crate::isometry::{fixed_residual, GroupElement};
use crate::presentation::{
    abelianization, manifold_presentation, psi_check, s782_presentation, uvw_images, FreeWord,
    GroupPresentation,
};
use crate::spheres::{side_of, sphere_of, IsometricSphere, SphereId};
use crate::triangle::{tau_point, TriangleGroup, Word};

/// Tolerance for two named points to coincide.
pub const POINT_TOL: f64 = 1e-9;
/// Tolerance for a point to lie on a plane `Re z = x0`.
pub const PLANE_TOL: f64 = 1e-9;
/// Residual below which a matrix word counts as the identity.
pub const RELATOR_TOL: f64 = 1e-9;
/// Samples per traced plane-section circle.
pub const CIRCLE_SAMPLES: usize = 2000;
/// Tolerance for a traced corner of `c_k` to match its named point. The
/// circles cross with high contact order there, so bisection on the side
/// function resolves the corner only to a root of the round-off.
pub const CORNER_TOL: f64 = 1e-4;
/// Window used by the boundary checks.
pub const BOUNDARY_WINDOW: i32 = 4;

/// A labelled boundary point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedVertex {
    pub label: String,
    pub position: BoundaryPoint,
}

/// The named points of the boundary analysis, in a fixed order.
#[derive(Debug, Clone, Serialize)]
pub struct NamedPoints(Vec<NamedVertex>);

impl NamedPoints {
    pub fn get(&self, label: &str) -> Result<BoundaryPoint> {
        self.0
            .iter()
            .find(|v| v.label == label)
            .map(|v| v.position)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn finite(&self, label: &str) -> Result<HeisenbergPoint> {
        self.get(label)?.finite().ok_or(Error::InfinityArgument)
    }

    pub fn vertices(&self) -> &[NamedVertex] {
        &self.0
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|v| v.label.as_str())
    }
}

fn require_parabolic(group: &TriangleGroup) -> Result<()> {
    if !group.parabolic_case {
        return Err(Error::NotParabolicCase { theta: group.theta });
    }
    Ok(())
}

fn hp(x: f64, y: f64, t: f64) -> BoundaryPoint {
    BoundaryPoint::Finite(HeisenbergPoint::new(c(x, y), t))
}

/// All named points: `qinf`, `p1`..`p15`, `q2`, `q3`, the primed points
/// `p2' = S^-1 p2`, `p10' = S^-1 p10`, `v0`, `v-1 = T^-1 v0` and the
/// translates `T^-1p4`, `T^-1p7`.
pub fn named_points(group: &TriangleGroup) -> Result<NamedPoints> {
    require_parabolic(group)?;
    let (s2, s3, s6) = (2f64.sqrt(), 3f64.sqrt(), 6f64.sqrt());
    let h = 4.0 * s2 / 3.0;
    let mut v: Vec<(String, BoundaryPoint)> = vec![
        ("qinf".into(), BoundaryPoint::Infinity),
        ("p1".into(), hp(0.0, 0.0, 0.0)),
        ("q2".into(), hp(-1.5, s3 / 2.0, -s3)),
        ("q3".into(), hp(0.5, s3 / 2.0, s3)),
        ("p2".into(), hp(-0.5, s3 / 2.0, -s3)),
        ("p3".into(), hp(1.5, s3 / 2.0, s3)),
        (
            "p4".into(),
            hp((4.0 + s6) / 6.0, (4.0 * s3 - s2) / 6.0, 0.0),
        ),
        (
            "p5".into(),
            hp((4.0 - s6) / 6.0, (4.0 * s3 + s2) / 6.0, 0.0),
        ),
        ("p6".into(), hp((2.0 - s6) / 6.0, (2.0 * s3 + s2) / 6.0, -h)),
        ("p7".into(), hp((2.0 + s6) / 6.0, (2.0 * s3 - s2) / 6.0, h)),
        ("p8".into(), hp((-2.0 + s6) / 6.0, (2.0 * s3 + s2) / 6.0, h)),
        (
            "p9".into(),
            hp((-2.0 - s6) / 6.0, (2.0 * s3 - s2) / 6.0, -h),
        ),
        (
            "p10".into(),
            hp((-4.0 + s6) / 6.0, (4.0 * s3 + s2) / 6.0, 0.0),
        ),
        (
            "p11".into(),
            hp((-4.0 - s6) / 6.0, (4.0 * s3 - s2) / 6.0, 0.0),
        ),
        ("v0".into(), hp(0.5, s3 / 2.0, -s3)),
    ];
    let find = |v: &[(String, BoundaryPoint)], l: &str| {
        v.iter()
            .find(|(k, _)| k == l)
            .map(|(_, p)| *p)
            .ok_or_else(|| Error::UnknownLabel(l.into()))
    };
    let t = &group.t;
    let t_inv = group.t.inverse();
    let s_inv = group.s.inverse();
    for (label, map, src) in [
        ("p12", t, "p9"),
        ("p13", t, "p8"),
        ("p14", t, "p11"),
        ("p15", t, "p10"),
        ("p2'", &s_inv, "p2"),
        ("p10'", &s_inv, "p10"),
        ("v-1", &t_inv, "v0"),
        ("T^-1p4", &t_inv, "p4"),
        ("T^-1p7", &t_inv, "p7"),
    ] {
        let p = map.apply_boundary(find(&v, src)?)?;
        v.push((label.into(), p));
    }
    Ok(NamedPoints(
        v.into_iter()
            .map(|(label, position)| NamedVertex { label, position })
            .collect(),
    ))
}

fn point_claim(id: String, kind: ClaimKind, a: BoundaryPoint, b: BoundaryPoint) -> Claim {
    let scale = match (a, b) {
        (BoundaryPoint::Finite(x), _) => 1.0 + x.z.norm() + x.t.abs(),
        _ => 1.0,
    };
    Claim::below(id, kind, a.coord_distance(&b) / scale, POINT_TOL)
}

/// Check that `map` sends the `src` tuple onto the `dst` tuple pointwise.
fn tuple_claims(
    pts: &NamedPoints,
    prefix: &str,
    kind: ClaimKind,
    map: &GroupElement,
    src: &[&str],
    dst: &[&str],
) -> Result<Vec<Claim>> {
    src.iter()
        .zip(dst)
        .map(|(a, b)| {
            let img = map.apply_boundary(pts.get(a)?)?;
            Ok(point_claim(
                format!("{prefix}/{a}->{b}"),
                kind,
                img,
                pts.get(b)?,
            ))
        })
        .collect()
}

/// Sphere incidences of the named points.
pub fn incidence_table() -> Vec<(&'static str, Vec<SphereId>)> {
    let (p, m, s, d) = (
        SphereId::plus,
        SphereId::minus,
        SphereId::star,
        SphereId::diamond,
    );
    let mut v = Vec::new();
    for l in ["p4", "p5", "p6", "p7"] {
        v.push((l, vec![p(0), m(0), s(0)]));
    }
    for l in ["p8", "p9", "p10", "p11"] {
        v.push((l, vec![p(0), m(-1), d(0)]));
    }
    for l in ["p12", "p13", "p14", "p15"] {
        v.push((l, vec![p(1), m(0), d(1)]));
    }
    v.push(("p2", vec![p(0), m(-1), s(0), s(-1)]));
    v.push(("p3", vec![p(1), m(0), s(0), s(1)]));
    v.push(("q3", vec![p(0), m(0), d(0), d(1)]));
    v.push(("q2", vec![p(-1), m(-1), d(0), d(-1)]));
    v.push(("v0", vec![p(0), m(0)]));
    v
}

/// Parabolic words fixing the accidental vertices.
pub const FIXED_WORDS: [(&str, &str); 4] =
    [("p2", "tSS"), ("p3", "SSt"), ("q3", "StS"), ("q2", "tStST")];

/// Incidences, fixed points, `T`-images and the `I2`, `tau` vertex actions,
/// plus the base pairings of the sides.
pub fn verify_incidences(group: &TriangleGroup) -> Result<FordReport> {
    let pts = named_points(group)?;
    let theta = group.theta;
    let mut r = FordReport::new(theta, BOUNDARY_WINDOW);
    for (label, spheres) in incidence_table() {
        let p = pts.finite(label)?;
        for id in spheres {
            let res = side_of(p, &sphere_of(id, theta)).abs();
            r.push(
                Claim::below(
                    format!("incidence/{label}/{id}"),
                    ClaimKind::Incidence,
                    res,
                    INCIDENCE_TOL,
                )
                .with_witness(p),
            );
        }
    }
    for (label, word) in FIXED_WORDS {
        let g = group.eval_str(word)?;
        let res = fixed_residual(&g, pts.get(label)?);
        r.push(Claim::below(
            format!("fixed/{label}/{word}"),
            ClaimKind::Incidence,
            res,
            POINT_TOL,
        ));
    }
    for (src, dst) in [
        ("p2", "p3"),
        ("q2", "q3"),
        ("p9", "p12"),
        ("p8", "p13"),
        ("p11", "p14"),
        ("p10", "p15"),
    ] {
        let img = group.t.apply_boundary(pts.get(src)?)?;
        r.push(point_claim(
            format!("t-image/{src}->{dst}"),
            ClaimKind::Incidence,
            img,
            pts.get(dst)?,
        ));
    }
    let i2_src = ["q3", "p5", "p2", "p10", "p8", "p11", "p9", "p6"];
    let i2_dst = ["q3", "p7", "p3", "p12", "p14", "p13", "p15", "p4"];
    push_all(
        &mut r,
        tuple_claims(
            &pts,
            "i2",
            ClaimKind::Incidence,
            &group.i2,
            &i2_src,
            &i2_dst,
        )?,
    );
    push_all(
        &mut r,
        tuple_claims(
            &pts,
            "i2",
            ClaimKind::Incidence,
            &group.i2,
            &i2_dst,
            &i2_src,
        )?,
    );
    for (a, b) in [
        ("p2", "q3"),
        ("p5", "p10"),
        ("p4", "p11"),
        ("p6", "p8"),
        ("p7", "p9"),
    ] {
        r.push(point_claim(
            format!("tau/{a}->{b}"),
            ClaimKind::Incidence,
            tau_point(pts.get(a)?),
            pts.get(b)?,
        ));
        r.push(point_claim(
            format!("tau/{b}->{a}"),
            ClaimKind::Incidence,
            tau_point(pts.get(b)?),
            pts.get(a)?,
        ));
    }
    for (name, word, src, dst) in base_pairings() {
        let g = group.eval_str(word)?;
        push_all(
            &mut r,
            tuple_claims(
                &pts,
                &format!("base/{name}"),
                ClaimKind::FacePairing,
                &g,
                src,
                dst,
            )?,
        );
    }
    Ok(r)
}

fn push_all(r: &mut FordReport, claims: Vec<Claim>) {
    for c in claims {
        r.push(c);
    }
}

type BasePairing = (
    &'static str,
    &'static str,
    &'static [&'static str],
    &'static [&'static str],
);

/// Base pairings between the sides of `D` near `q_inf`.
pub fn base_pairings() -> Vec<BasePairing> {
    vec![
        (
            "O0- to O0+",
            "s",
            &["p3", "p4", "p6", "p5", "q3", "p14", "p13", "p15"],
            &["q3", "p7", "p4", "p6", "p2", "p9", "p11", "p8"],
        ),
        (
            "Q0+ to Q0-",
            "S",
            &["p2", "p5", "q3", "p10"],
            &["q3", "p7", "p3", "p12"],
        ),
        ("T1* to T2*", "SS", &["p2", "p5", "p6"], &["p3", "p4", "p7"]),
        (
            "T2<> to T1<>",
            "sTsT",
            &["q2", "p9", "p11"],
            &["q3", "p8", "p10"],
        ),
    ]
}

/// A vertical plane `Re z = x0` of the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Plane {
    pub name: &'static str,
    pub x0: f64,
}

/// `Sigma_0 = {Re z = 1/2}`.
pub const SIGMA_0: Plane = Plane {
    name: "Sigma0",
    x0: 0.5,
};
/// `Sigma_-1 = {Re z = -3/2}`.
pub const SIGMA_M1: Plane = Plane {
    name: "Sigma-1",
    x0: -1.5,
};

/// Shape of a plane section of a Cygan sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum SectionKind {
    Circle,
    Point { at: HeisenbergPoint },
    Empty,
}

/// Section of one sphere by a plane. `gap` is the minimum of
/// `|z - c|^2 - r^2` over the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlaneSection {
    pub sphere: SphereId,
    pub kind: SectionKind,
    pub gap: f64,
}

/// Classify the section of `s` by `plane`. On the plane the sphere equation
/// `|z-c|^4 + Delta^2 = r^4` is solvable iff `(x0 - Re c)^2 <= r^2`.
pub fn plane_section(s: &IsometricSphere, plane: Plane) -> PlaneSection {
    let a = plane.x0 - s.center.z.re;
    let gap = a * a - s.radius * s.radius;
    let kind = if gap.abs() <= PLANE_TOL {
        let z = c(plane.x0, s.center.z.im);
        let t = s.center.t - 2.0 * (z * s.center.z.conj()).im;
        SectionKind::Point {
            at: HeisenbergPoint::new(z, t),
        }
    } else if gap < 0.0 {
        SectionKind::Circle
    } else {
        SectionKind::Empty
    };
    PlaneSection {
        sphere: s.id.unwrap_or(SphereId::plus(0)),
        kind,
        gap,
    }
}

/// Sections of every sphere in the window by `plane`.
pub fn plane_sections(theta: f64, plane: Plane, window: i32) -> Vec<PlaneSection> {
    SphereId::window(window)
        .into_iter()
        .map(|id| plane_section(&sphere_of(id, theta), plane))
        .collect()
}

/// Point of the section circle of `s` by `plane` at parameter `psi`.
/// The circle is `phi = phi_max sin psi`, `|z-c|^2 = r^2 cos phi`,
/// `Delta = r^2 sin phi`, with the sign of `Im(z - c)` that of `cos psi`.
pub fn section_point(s: &IsometricSphere, plane: Plane, psi: f64) -> HeisenbergPoint {
    let a = plane.x0 - s.center.z.re;
    let r2 = s.radius * s.radius;
    let phi_max = (a * a / r2).clamp(-1.0, 1.0).acos();
    let phi = phi_max * psi.sin();
    let u = (r2 * phi.cos() - a * a).max(0.0).sqrt() * psi.cos().signum();
    let z = c(plane.x0, s.center.z.im + u);
    let t = r2 * phi.sin() + s.center.t - 2.0 * (z * s.center.z.conj()).im;
    HeisenbergPoint::new(z, t)
}

/// `n` samples of the section circle.
pub fn section_circle(s: &IsometricSphere, plane: Plane, n: usize) -> Vec<HeisenbergPoint> {
    (0..n)
        .map(|i| section_point(s, plane, 2.0 * PI * i as f64 / n as f64))
        .collect()
}

/// Expected section shapes at `theta = pi/3`.
fn expected_sections(plane: Plane, id: SphereId) -> &'static str {
    use crate::spheres::Family::*;
    let k0 = if plane.x0 > 0.0 { 0 } else { -1 };
    match (id.family, id.k - k0) {
        (Plus | Minus | Star, 0) => "circle",
        (Diamond, 0 | 1) => "point",
        _ => "empty",
    }
}

fn section_name(k: &SectionKind) -> &'static str {
    match k {
        SectionKind::Circle => "circle",
        SectionKind::Point { .. } => "point",
        SectionKind::Empty => "empty",
    }
}

/// One arc of `c_k`: the part of the section circle of `on` lying outside
/// `other`, from `start` to `end`.
#[derive(Debug, Clone, Serialize)]
pub struct Arc {
    pub label: String,
    pub on: SphereId,
    pub samples: Vec<HeisenbergPoint>,
}

/// A curve `c_k` cut into its two arcs.
#[derive(Debug, Clone, Serialize)]
pub struct SigmaCurve {
    pub plane: Plane,
    pub endpoints: Vec<HeisenbergPoint>,
    pub plus_arc: Arc,
    pub minus_arc: Arc,
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa = f(a);
    for _ in 0..100 {
        let m = 0.5 * (a + b);
        if (f(m) >= 0.0) == (fa >= 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Parameters where `side_of(other)` changes sign along the section circle.
fn section_roots(
    on: &IsometricSphere,
    other: &IsometricSphere,
    plane: Plane,
    n: usize,
) -> Vec<f64> {
    let f = |psi: f64| side_of(section_point(on, plane, psi), other);
    let step = 2.0 * PI / n as f64;
    (0..n)
        .filter_map(|i| {
            let (a, b) = (i as f64 * step, (i + 1) as f64 * step);
            ((f(a) >= 0.0) != (f(b) >= 0.0)).then(|| bisect(f, a, b))
        })
        .collect()
}

fn outside_arc(
    on: &IsometricSphere,
    other: &IsometricSphere,
    plane: Plane,
    roots: &[f64],
    n: usize,
    label: String,
) -> Arc {
    let f = |psi: f64| side_of(section_point(on, plane, psi), other);
    let (a, b) = (roots[0], roots[1]);
    let mid = 0.5 * (a + b);
    let (start, end) = if f(mid) >= 0.0 {
        (a, b)
    } else {
        (b, a + 2.0 * PI)
    };
    let samples = (0..=n)
        .map(|i| section_point(on, plane, start + (end - start) * i as f64 / n as f64))
        .collect();
    Arc {
        label,
        on: on.id.unwrap_or(SphereId::plus(0)),
        samples,
    }
}

/// `c_k = Sigma_k cap (I_k^+ cup I_k^-)` boundary, cut at its two corners.
pub fn sigma_curve(theta: f64, k: i32, n: usize) -> Result<SigmaCurve> {
    let plane = if k == 0 { SIGMA_0 } else { SIGMA_M1 };
    let plus = sphere_of(SphereId::plus(k), theta);
    let minus = sphere_of(SphereId::minus(k), theta);
    let roots = section_roots(&plus, &minus, plane, 4096);
    if roots.len() != 2 {
        return Err(Error::InvariantViolated(format!(
            "{} meets the second sphere in {} points",
            plane.name,
            roots.len()
        )));
    }
    let endpoints = roots
        .iter()
        .map(|&p| section_point(&plus, plane, p))
        .collect();
    let minus_roots = section_roots(&minus, &plus, plane, 4096);
    if minus_roots.len() != 2 {
        return Err(Error::InvariantViolated(format!(
            "{} corner mismatch",
            plane.name
        )));
    }
    Ok(SigmaCurve {
        plane,
        endpoints,
        plus_arc: outside_arc(&plus, &minus, plane, &roots, n, format!("c{k}+")),
        minus_arc: outside_arc(&minus, &plus, plane, &minus_roots, n, format!("c{k}-")),
    })
}

/// `c_0`, `c_-1`, and the `I2`, `T^-1` and star checks.
pub fn verify_curves(group: &TriangleGroup) -> Result<FordReport> {
    let pts = named_points(group)?;
    let theta = group.theta;
    let mut r = FordReport::new(theta, BOUNDARY_WINDOW);
    let domain = FordDomain::new(theta, BOUNDARY_WINDOW)?;
    let c0 = sigma_curve(theta, 0, 400)?;
    let cm1 = sigma_curve(theta, -1, 400)?;
    for (curve, corners) in [(&c0, ["q3", "v0"]), (&cm1, ["q2", "v-1"])] {
        for label in corners {
            let p = pts.finite(label)?;
            let d = curve
                .endpoints
                .iter()
                .map(|e| e.coord_distance(&p))
                .fold(f64::INFINITY, f64::min);
            r.push(
                Claim::below(
                    format!("curve/{}/corner/{label}", curve.plane.name),
                    ClaimKind::Curve,
                    d,
                    CORNER_TOL,
                )
                .with_witness(p),
            );
        }
        let on_boundary = [&curve.plus_arc, &curve.minus_arc]
            .iter()
            .flat_map(|a| a.samples.iter())
            .map(|p| domain.margin(*p).0)
            .fold(f64::INFINITY, f64::min);
        r.push(Claim::from_margin(
            format!("curve/{}/in-closure-of-D", curve.plane.name),
            ClaimKind::Curve,
            on_boundary,
            on_boundary + INCIDENCE_TOL,
        ));
    }
    let v0 = pts.finite("v0")?;
    for (label, p) in [("v0", v0), ("q3", pts.finite("q3")?)] {
        for id in [SphereId::plus(0), SphereId::minus(0)] {
            let res = side_of(p, &sphere_of(id, theta)).abs();
            r.push(Claim::below(
                format!("curve/{label}/on/{id}"),
                ClaimKind::Curve,
                res,
                INCIDENCE_TOL,
            ));
        }
    }
    let plus0 = sphere_of(SphereId::plus(0), theta);
    let minus0 = sphere_of(SphereId::minus(0), theta);
    let on_c0 = |p: HeisenbergPoint| -> f64 {
        let plane = (p.z.re - SIGMA_0.x0).abs();
        let (a, b) = (side_of(p, &plus0), side_of(p, &minus0));
        plane.max(a.min(b).abs().min(a.abs().max(-b)).min(b.abs().max(-a)))
    };
    let c0_samples: Vec<HeisenbergPoint> = c0
        .plus_arc
        .samples
        .iter()
        .chain(&c0.minus_arc.samples)
        .copied()
        .collect();
    let i2_res = c0_samples
        .iter()
        .map(
            |p| match group.i2.apply_boundary(BoundaryPoint::Finite(*p)) {
                Ok(BoundaryPoint::Finite(q)) => on_c0(q),
                _ => f64::INFINITY,
            },
        )
        .fold(0.0, f64::max);
    r.push(Claim::below(
        "curve/Sigma0/i2-invariant",
        ClaimKind::Curve,
        i2_res,
        1e-8,
    ));
    let i2_v0 = group.i2.apply_boundary(BoundaryPoint::Finite(v0))?;
    let res = i2_v0.finite().map_or(f64::INFINITY, on_c0);
    r.push(Claim::below(
        "curve/Sigma0/i2-v0",
        ClaimKind::Curve,
        res,
        1e-8,
    ));
    let t_inv = group.t.inverse();
    let plus_m1 = sphere_of(SphereId::plus(-1), theta);
    let minus_m1 = sphere_of(SphereId::minus(-1), theta);
    let tm1_res = c0_samples
        .iter()
        .map(|p| match t_inv.apply_boundary(BoundaryPoint::Finite(*p)) {
            Ok(BoundaryPoint::Finite(q)) => {
                let plane = (q.z.re - SIGMA_M1.x0).abs();
                plane.max(side_of(q, &plus_m1).abs().min(side_of(q, &minus_m1).abs()))
            }
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max);
    r.push(Claim::below(
        "curve/Sigma-1/t-inverse-image",
        ClaimKind::Curve,
        tm1_res,
        1e-8,
    ));
    let direct: Vec<HeisenbergPoint> = cm1
        .plus_arc
        .samples
        .iter()
        .chain(&cm1.minus_arc.samples)
        .copied()
        .collect();
    let images: Vec<HeisenbergPoint> = c0_samples
        .iter()
        .filter_map(|p| {
            t_inv
                .apply_boundary(BoundaryPoint::Finite(*p))
                .ok()?
                .finite()
        })
        .collect();
    let hausdorff = direct
        .iter()
        .map(|p| {
            images
                .iter()
                .map(|q| p.coord_distance(q))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    r.push(Claim::below(
        "curve/Sigma-1/matches-trace",
        ClaimKind::Curve,
        hausdorff,
        1e-3,
    ));
    let star0 = sphere_of(SphereId::star(0), theta);
    let star_margin = section_circle(&star0, SIGMA_0, CIRCLE_SAMPLES)
        .iter()
        .map(|p| side_of(*p, &plus0).min(side_of(*p, &minus0)))
        .fold(f64::NEG_INFINITY, f64::max);
    r.push(Claim::from_margin(
        "curve/Sigma0/star0-inside-plus0-or-minus0",
        ClaimKind::Curve,
        star_margin,
        -star_margin,
    ));
    Ok(r)
}

/// Plane-section claims for `Sigma_0` and `Sigma_-1`.
pub fn verify_plane_sections(group: &TriangleGroup) -> Result<FordReport> {
    let pts = named_points(group)?;
    let theta = group.theta;
    let mut r = FordReport::new(theta, BOUNDARY_WINDOW);
    for (plane, corner) in [(SIGMA_0, "q3"), (SIGMA_M1, "q2")] {
        for s in plane_sections(theta, plane, BOUNDARY_WINDOW) {
            let want = expected_sections(plane, s.sphere);
            let got = section_name(&s.kind);
            let id = format!("section/{}/{}", plane.name, s.sphere);
            let mut claim = Claim::check(&id, ClaimKind::PlaneSection, want == got)
                .with_detail(format!("expected {want}, found {got}, gap {:.3e}", s.gap));
            if let SectionKind::Point { at } = s.kind {
                let d = at.coord_distance(&pts.finite(corner)?);
                if d > POINT_TOL {
                    claim = Claim::below(&id, ClaimKind::PlaneSection, d, POINT_TOL)
                        .with_detail(format!("section point is not {corner}"));
                }
                claim = claim.with_witness(at);
            }
            r.push(claim);
        }
    }
    Ok(r)
}

/// The T-invariant R-circle `L = {[x + i sqrt3/2, sqrt3 x]}`.
pub fn line_l(x: f64) -> HeisenbergPoint {
    let s3 = 3f64.sqrt();
    HeisenbergPoint::new(c(x, s3 / 2.0), s3 * x)
}

/// `L cap D_T` lies inside `I_0^+ cup I_-1^-`, with the stated segments.
pub fn verify_rcircle(group: &TriangleGroup) -> Result<FordReport> {
    let theta = group.theta;
    let mut r = FordReport::new(theta, BOUNDARY_WINDOW);
    let n = 2001;
    let seg = |lo: f64, hi: f64| (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64);
    let plus0 = sphere_of(SphereId::plus(0), theta);
    let minus0 = sphere_of(SphereId::minus(0), theta);
    let m = seg(-0.5, 0.5)
        .map(|x| side_of(line_l(x), &plus0))
        .fold(f64::NEG_INFINITY, f64::max);
    r.push(Claim::from_margin(
        "rcircle/segment-in-plus0",
        ClaimKind::Curve,
        m,
        -m,
    ));
    let m = seg(0.5, 1.5)
        .map(|x| side_of(line_l(x), &minus0))
        .fold(f64::NEG_INFINITY, f64::max);
    r.push(Claim::from_margin(
        "rcircle/segment-in-minus0",
        ClaimKind::Curve,
        m,
        -m,
    ));
    let domain = FordDomain::new(theta, BOUNDARY_WINDOW)?;
    let m = seg(-1.5, 0.5)
        .map(|x| domain.margin(line_l(x)).0)
        .fold(f64::NEG_INFINITY, f64::max);
    r.push(Claim::from_margin(
        "rcircle/avoids-D",
        ClaimKind::Curve,
        m,
        -m,
    ));
    let t_res = seg(-1.5, 0.5)
        .map(
            |x| match group.t.apply_boundary(BoundaryPoint::Finite(line_l(x))) {
                Ok(BoundaryPoint::Finite(q)) => q.coord_distance(&line_l(q.z.re)),
                _ => f64::INFINITY,
            },
        )
        .fold(0.0, f64::max);
    r.push(Claim::below(
        "rcircle/t-invariant",
        ClaimKind::Curve,
        t_res,
        1e-9,
    ));
    Ok(r)
}

/// What a cell lies on.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Carrier {
    Sphere(SphereId),
    Plane(Plane),
    /// A face of `P`, named by its pairing and side.
    Pairing(String),
}

impl std::fmt::Display for Carrier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Carrier::Sphere(id) => write!(f, "{id}"),
            Carrier::Plane(p) => write!(f, "{}", p.name),
            Carrier::Pairing(s) => write!(f, "{s}"),
        }
    }
}

/// An edge with its endpoints and a description of where it lies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Edge {
    pub label: String,
    pub ends: [String; 2],
    pub carrier: String,
}

/// A face with its boundary cycle of vertices and edges.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Face {
    pub label: String,
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
    pub carrier: Carrier,
}

/// A 2-dimensional cell complex.
#[derive(Debug, Clone, Serialize)]
pub struct CellComplex {
    pub vertices: Vec<NamedVertex>,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
}

fn edge_key(a: &str, b: &str) -> String {
    if a <= b {
        format!("{a}~{b}")
    } else {
        format!("{b}~{a}")
    }
}

/// Face input: label, vertex cycle, edge-label overrides, carrier.
type FaceSpec<'a> = (String, Vec<&'a str>, Vec<(usize, &'a str)>, Carrier);

/// Pairing input: id, word, source and target tuples, optional closed cycles.
type PairingSpec = (
    &'static str,
    &'static str,
    &'static [&'static str],
    &'static [&'static str],
    Option<(&'static [&'static str], &'static [&'static str])>,
);

impl CellComplex {
    /// Build from faces given as vertex cycles; `arcs` names the edge
    /// leaving the vertex at a given position when it is not the default.
    fn from_faces(pts: &NamedPoints, faces: Vec<FaceSpec>) -> Result<Self> {
        let mut edges: BTreeMap<String, Edge> = BTreeMap::new();
        let mut order: Vec<String> = Vec::new();
        let mut out_faces = Vec::new();
        let mut used: BTreeSet<String> = BTreeSet::new();
        for (label, cycle, arcs, carrier) in faces {
            let mut face_edges = Vec::new();
            for i in 0..cycle.len() {
                let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
                let key = arcs
                    .iter()
                    .find(|(j, _)| *j == i)
                    .map(|(_, l)| l.to_string())
                    .unwrap_or_else(|| edge_key(a, b));
                if !edges.contains_key(&key) {
                    order.push(key.clone());
                    edges.insert(
                        key.clone(),
                        Edge {
                            label: key.clone(),
                            ends: [a.to_string(), b.to_string()],
                            carrier: String::new(),
                        },
                    );
                }
                face_edges.push(key);
                used.insert(a.to_string());
            }
            out_faces.push(Face {
                label,
                vertices: cycle.iter().map(|s| s.to_string()).collect(),
                edges: face_edges,
                carrier,
            });
        }
        for e in edges.values_mut() {
            let carriers: Vec<String> = out_faces
                .iter()
                .filter(|f| f.edges.contains(&e.label))
                .map(|f| f.carrier.to_string())
                .collect();
            e.carrier = carriers.join(" & ");
        }
        let vertices = pts
            .vertices()
            .iter()
            .filter(|v| used.contains(&v.label))
            .cloned()
            .collect();
        Ok(CellComplex {
            vertices,
            edges: order.into_iter().filter_map(|k| edges.remove(&k)).collect(),
            faces: out_faces,
        })
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Edges not bordering exactly two faces, with their face counts.
    pub fn non_manifold_edges(&self) -> Vec<(String, usize)> {
        self.edges
            .iter()
            .map(|e| {
                let n = self
                    .faces
                    .iter()
                    .filter(|f| f.edges.contains(&e.label))
                    .count();
                (e.label.clone(), n)
            })
            .filter(|(_, n)| *n != 2)
            .collect()
    }

    /// Number of faces with 3, 4, 5 and 6 sides.
    pub fn census(&self) -> [usize; 4] {
        let mut c = [0; 4];
        for f in &self.faces {
            if (3..=6).contains(&f.vertices.len()) {
                c[f.vertices.len() - 3] += 1;
            }
        }
        c
    }
}

/// The combinatorial boundary of `U^c cap D_T`.
pub fn tube_complex(group: &TriangleGroup) -> Result<CellComplex> {
    let pts = named_points(group)?;
    let (p, m, s, d) = (
        SphereId::plus,
        SphereId::minus,
        SphereId::star,
        SphereId::diamond,
    );
    let sp = |id| Carrier::Sphere(id);
    let faces = vec![
        (
            "Q0+".into(),
            vec!["p2", "p5", "q3", "p10"],
            vec![],
            sp(p(0)),
        ),
        (
            "H0+".into(),
            vec!["v0", "p6", "p2", "p9", "p11", "p8", "q3"],
            vec![(6, "c0+")],
            sp(p(0)),
        ),
        (
            "Q'0-".into(),
            vec!["q3", "p5", "p6", "v0"],
            vec![(3, "c0-")],
            sp(m(0)),
        ),
        ("(T1)0*".into(), vec!["p2", "p5", "p6"], vec![], sp(s(0))),
        ("(T1)0<>".into(), vec!["q3", "p10", "p8"], vec![], sp(d(0))),
        ("(T2)0<>".into(), vec!["p9", "p11", "q2"], vec![], sp(d(0))),
        (
            "H-1-".into(),
            vec!["p2", "T^-1p4", "v-1", "q2", "p11", "p8", "p10"],
            vec![(2, "c-1-")],
            sp(m(-1)),
        ),
        (
            "Q-1-".into(),
            vec!["q2", "T^-1p7", "p2", "p9"],
            vec![],
            sp(m(-1)),
        ),
        (
            "(T2)-1*".into(),
            vec!["p2", "T^-1p4", "T^-1p7"],
            vec![],
            sp(s(-1)),
        ),
        (
            "Q'-1+".into(),
            vec!["q2", "T^-1p7", "T^-1p4", "v-1"],
            vec![(3, "c-1+")],
            sp(p(-1)),
        ),
        (
            "Sigma0-disc".into(),
            vec!["q3", "v0"],
            vec![(0, "c0+"), (1, "c0-")],
            Carrier::Plane(SIGMA_0),
        ),
        (
            "Sigma-1-disc".into(),
            vec!["q2", "v-1"],
            vec![(0, "c-1+"), (1, "c-1-")],
            Carrier::Plane(SIGMA_M1),
        ),
    ];
    CellComplex::from_faces(&pts, faces)
}

fn carrier_residual(carrier: &Carrier, p: HeisenbergPoint, theta: f64) -> f64 {
    match carrier {
        Carrier::Sphere(id) => side_of(p, &sphere_of(*id, theta)).abs(),
        Carrier::Plane(pl) => (p.z.re - pl.x0).abs(),
        Carrier::Pairing(_) => 0.0,
    }
}

/// Euler characteristic, manifold edges, carriers and the `D_T` slab of the
/// tube complex.
pub fn verify_tube(group: &TriangleGroup) -> Result<FordReport> {
    let theta = group.theta;
    let pts = named_points(group)?;
    let cx = tube_complex(group)?;
    let mut r = FordReport::new(theta, BOUNDARY_WINDOW);
    let counts = (cx.vertices.len(), cx.edges.len(), cx.faces.len());
    r.push(
        Claim::check("tube/counts", ClaimKind::Complex, counts == (13, 23, 12))
            .with_detail(format!("V={} E={} F={}", counts.0, counts.1, counts.2)),
    );
    let chi = cx.euler_characteristic();
    r.push(
        Claim::check("tube/euler", ClaimKind::Complex, chi == 2).with_detail(format!("chi={chi}")),
    );
    let bad = cx.non_manifold_edges();
    r.push(
        Claim::check(
            "tube/edges-on-two-faces",
            ClaimKind::Complex,
            bad.is_empty(),
        )
        .with_detail(format!("{bad:?}")),
    );
    let arcs = [sigma_curve(theta, 0, 200)?, sigma_curve(theta, -1, 200)?];
    for f in &cx.faces {
        let mut res: f64 = 0.0;
        for v in &f.vertices {
            res = res.max(carrier_residual(&f.carrier, pts.finite(v)?, theta));
        }
        for e in &f.edges {
            for curve in &arcs {
                for arc in [&curve.plus_arc, &curve.minus_arc] {
                    if &arc.label == e {
                        for q in &arc.samples {
                            res = res.max(carrier_residual(&f.carrier, *q, theta));
                        }
                    }
                }
            }
        }
        r.push(Claim::below(
            format!("tube/carrier/{}", f.label),
            ClaimKind::Complex,
            res,
            1e-8,
        ));
    }
    let (lo, hi) = cx
        .vertices
        .iter()
        .filter_map(|v| v.position.finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
            (a.min(p.z.re), b.max(p.z.re))
        });
    let slack = (lo + 1.5).min(0.5 - hi);
    r.push(
        Claim::from_margin("tube/in-slab", ClaimKind::Complex, slack, slack + PLANE_TOL)
            .with_detail(format!("Re z in [{lo:.6}, {hi:.6}]")),
    );
    Ok(r)
}

/// One pairing of faces of `P`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FacePairing {
    pub id: String,
    #[serde(serialize_with = "crate::complex::ser_word")]
    pub map: Word,
    pub source: Vec<String>,
    pub target: Vec<String>,
    pub source_cycle: Vec<String>,
    pub target_cycle: Vec<String>,
}

pub(crate) fn ser_word<S: serde::Serializer>(
    w: &Word,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&w.to_string())
}

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// The eight face pairings of `P`. Pairings are checked on the listed vertex
/// tuples; the two `S^-1` faces of six listed vertices have five-vertex
/// boundary cycles in the closed complex.
pub fn face_pairings() -> Vec<FacePairing> {
    let list: [PairingSpec; 8] = [
        (
            "x1",
            "T",
            &["qinf", "p2", "p9", "q2"],
            &["qinf", "p3", "p12", "q3"],
            None,
        ),
        (
            "x2",
            "sT",
            &["qinf", "q2", "p11", "p8", "p10"],
            &["p1", "p2", "p9", "p11", "p8"],
            None,
        ),
        (
            "x3",
            "sTsT",
            &["q2", "p9", "p11"],
            &["q3", "p8", "p10"],
            None,
        ),
        (
            "x4",
            "s",
            &["qinf", "p10", "q3"],
            &["p1", "p10'", "p2"],
            None,
        ),
        (
            "x5",
            "stS",
            &["p1", "p8", "q3"],
            &["p1", "p10'", "p2'"],
            None,
        ),
        (
            "x6",
            "ss",
            &["q3", "p12", "p3", "p7"],
            &["p2'", "p10'", "p2", "p6"],
            None,
        ),
        (
            "x7",
            "s",
            &["qinf", "p2", "p6", "p2'", "p4", "p3"],
            &["p1", "p2'", "p4", "p3", "p7", "q3"],
            Some((
                &["qinf", "p2", "p6", "p4", "p3"],
                &["p1", "p2'", "p4", "p7", "q3"],
            )),
        ),
        ("x8", "s", &["p6", "p2'", "p4"], &["p4", "p3", "p7"], None),
    ];
    list.into_iter()
        .map(|(id, word, src, dst, cycles)| {
            let (sc, dc) = cycles.unwrap_or((src, dst));
            FacePairing {
                id: id.into(),
                map: Word::parse(word).unwrap_or_default(),
                source: strings(src),
                target: strings(dst),
                source_cycle: strings(sc),
                target_cycle: strings(dc),
            }
        })
        .collect()
}

/// The polyhedron `P` with its face pairings.
#[derive(Debug, Clone, Serialize)]
pub struct Polyhedron {
    pub complex: CellComplex,
    pub pairings: Vec<FacePairing>,
    /// Face census `[3, 4, 5, 6]` of the listed vertex tuples.
    pub listed_census: [usize; 4],
}

/// Assemble `P` from the closed boundary cycles of its paired faces.
pub fn polyhedron_p(group: &TriangleGroup) -> Result<Polyhedron> {
    let pts = named_points(group)?;
    let pairings = face_pairings();
    let mut faces = Vec::new();
    let mut listed_census = [0; 4];
    for fp in &pairings {
        for (side, cycle, listed) in [
            ("src", &fp.source_cycle, &fp.source),
            ("dst", &fp.target_cycle, &fp.target),
        ] {
            let carrier = Carrier::Pairing(format!("{} {side}", fp.id));
            faces.push((
                format!("{}-{side}", fp.id),
                cycle.iter().map(String::as_str).collect::<Vec<_>>(),
                vec![],
                carrier,
            ));
            listed_census[listed.len() - 3] += 1;
        }
    }
    let complex = CellComplex::from_faces(&pts, faces)?;
    Ok(Polyhedron {
        complex,
        pairings,
        listed_census,
    })
}

/// The listed face census: 8 triangles, 4 squares,
/// 2 pentagons, 2 hexagons.
pub const STATED_CENSUS: [usize; 4] = [8, 4, 2, 2];

fn census_string(c: &[usize; 4]) -> String {
    format!("{}/{}/{}/{}", c[0], c[1], c[2], c[3])
}

/// Face pairings, census and Euler characteristic of `P`.
pub fn verify_polyhedron(group: &TriangleGroup) -> Result<FordReport> {
    let pts = named_points(group)?;
    let poly = polyhedron_p(group)?;
    let mut r = FordReport::new(group.theta, BOUNDARY_WINDOW);
    for fp in &poly.pairings {
        let g = group.evaluate(&fp.map);
        let src: Vec<&str> = fp.source.iter().map(String::as_str).collect();
        let dst: Vec<&str> = fp.target.iter().map(String::as_str).collect();
        let claims = tuple_claims(
            &pts,
            &format!("pairing/{}", fp.id),
            ClaimKind::FacePairing,
            &g,
            &src,
            &dst,
        )?;
        let worst = claims.iter().map(|c| c.value).fold(0.0, f64::max);
        r.push(
            Claim::below(
                format!("pairing/{}", fp.id),
                ClaimKind::FacePairing,
                worst,
                POINT_TOL,
            )
            .with_detail(format!("{} on {} vertices", fp.map, src.len())),
        );
    }
    let cx = &poly.complex;
    let census = cx.census();
    r.push(
        Claim::check(
            "polyhedron/census",
            ClaimKind::Complex,
            census == STATED_CENSUS,
        )
        .with_detail(format!(
            "closed complex {} (tri/quad/pent/hex); listed tuples {}; stated {}",
            census_string(&census),
            census_string(&poly.listed_census),
            census_string(&STATED_CENSUS)
        )),
    );
    let chi = cx.euler_characteristic();
    r.push(
        Claim::check("polyhedron/euler", ClaimKind::Complex, chi == 2).with_detail(format!(
            "V={} E={} F={} chi={chi}",
            cx.vertices.len(),
            cx.edges.len(),
            cx.faces.len()
        )),
    );
    let bad = cx.non_manifold_edges();
    r.push(
        Claim::check(
            "polyhedron/edges-on-two-faces",
            ClaimKind::Complex,
            bad.is_empty(),
        )
        .with_detail(format!("{bad:?}")),
    );
    Ok(r)
}

/// One edge cycle of `P` and the relator it produces.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeCycle {
    pub edge: [String; 2],
    pub relator: String,
    pub length: usize,
}

/// Generator names `x1`..`x8`.
pub fn pairing_generators() -> Vec<String> {
    (1..=8).map(|i| format!("x{i}")).collect()
}

/// Follow each edge of `P` through the face pairings until it returns to
/// its starting face. The relator lists the last applied pairing first.
pub fn edge_cycles(poly: &Polyhedron) -> Result<Vec<(EdgeCycle, FreeWord)>> {
    struct PFace {
        generator: usize,
        sign: i32,
        edges: Vec<BTreeSet<String>>,
        map: BTreeMap<String, String>,
    }
    let mut faces = Vec::new();
    for (gi, fp) in poly.pairings.iter().enumerate() {
        let fwd: BTreeMap<String, String> = fp
            .source
            .iter()
            .cloned()
            .zip(fp.target.iter().cloned())
            .collect();
        let bwd: BTreeMap<String, String> =
            fwd.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        for (cycle, map, sign) in [(&fp.source_cycle, fwd, 1), (&fp.target_cycle, bwd, -1)] {
            let edges = (0..cycle.len())
                .map(|i| {
                    [cycle[i].clone(), cycle[(i + 1) % cycle.len()].clone()]
                        .into_iter()
                        .collect()
                })
                .collect();
            faces.push(PFace {
                generator: gi,
                sign,
                edges,
                map,
            });
        }
    }
    let mut edge_order: Vec<BTreeSet<String>> = Vec::new();
    let mut on: BTreeMap<BTreeSet<String>, Vec<usize>> = BTreeMap::new();
    for (i, f) in faces.iter().enumerate() {
        for e in &f.edges {
            if !on.contains_key(e) {
                edge_order.push(e.clone());
            }
            on.entry(e.clone()).or_default().push(i);
        }
    }
    let names = pairing_generators();
    let mut seen: BTreeSet<(BTreeSet<String>, usize)> = BTreeSet::new();
    let mut out = Vec::new();
    let limit = 4 * faces.len() * edge_order.len();
    for e0 in &edge_order {
        for &a0 in &on[e0] {
            if seen.contains(&(e0.clone(), a0)) {
                continue;
            }
            let (mut e, mut a) = (e0.clone(), a0);
            let mut word = Vec::new();
            loop {
                seen.insert((e.clone(), a));
                let f = &faces[a];
                word.push((f.generator, f.sign));
                let e2: BTreeSet<String> = e
                    .iter()
                    .map(|v| f.map.get(v).cloned())
                    .collect::<Option<_>>()
                    .ok_or_else(|| Error::CycleNotClosed {
                        edge: e.iter().cloned().collect::<Vec<_>>().join("-"),
                    })?;
                let b = a ^ 1;
                seen.insert((e2.clone(), b));
                let next = on
                    .get(&e2)
                    .and_then(|fs| fs.iter().copied().find(|&x| x != b))
                    .ok_or_else(|| Error::CycleNotClosed {
                        edge: e2.iter().cloned().collect::<Vec<_>>().join("-"),
                    })?;
                e = e2;
                if e == *e0 && next == a0 {
                    break;
                }
                a = next;
                if word.len() > limit {
                    return Err(Error::CycleNotClosed {
                        edge: e0.iter().cloned().collect::<Vec<_>>().join("-"),
                    });
                }
            }
            let fw = FreeWord::new(word.iter().rev().map(|&(g, s)| (g, s)));
            let ends: Vec<String> = e0.iter().cloned().collect();
            let relator = fw.display(&names).to_string();
            out.push((
                EdgeCycle {
                    edge: [ends[0].clone(), ends[1].clone()],
                    relator,
                    length: word.len(),
                },
                fw,
            ));
        }
    }
    Ok(out)
}

/// `S, T` words of the pairing generators.
pub fn pairing_words() -> Vec<Word> {
    face_pairings().into_iter().map(|f| f.map).collect()
}

/// The nine relators as strings, in the order the cycle search finds them.
pub const EXPECTED_RELATORS: [&str; 9] = [
    "x7^-1 x5 x7 x1",
    "x2 x3^-1 x4^-1 x6 x1",
    "x3^-1 x5^-1 x6 x1",
    "x2^-1 x4 x1",
    "x2 x3 x2",
    "x4^-1 x5 x2",
    "x8 x7 x6",
    "x7 x8 x6",
    "x8^-1 x7",
];

/// The presentation `<u, v, w | r1, r2>` with `u = x1`, `v = x2`, `w = x7`.
pub fn presentation() -> GroupPresentation {
    manifold_presentation()
}

/// Edge cycles, relator matrices, the presentation and the abelianization
/// comparison with s782.
pub fn verify_relations(group: &TriangleGroup) -> Result<FordReport> {
    let poly = polyhedron_p(group)?;
    let mut r = FordReport::new(group.theta, BOUNDARY_WINDOW);
    let cycles = edge_cycles(&poly)?;
    let found: Vec<&str> = cycles.iter().map(|(c, _)| c.relator.as_str()).collect();
    r.push(
        Claim::check(
            "cycles/relators",
            ClaimKind::Relator,
            found == EXPECTED_RELATORS,
        )
        .with_detail(found.join(", ")),
    );
    let words = pairing_words();
    for (i, (cyc, fw)) in cycles.iter().enumerate() {
        let res = group.evaluate(&fw.to_word(&words)).identity_residual();
        r.push(
            Claim::below(
                format!("cycles/{}", i + 1),
                ClaimKind::Relator,
                res,
                RELATOR_TOL,
            )
            .with_detail(cyc.relator.clone()),
        );
    }
    let p = presentation();
    let images = uvw_images();
    for (i, rel) in p.relators.iter().enumerate() {
        let res = group.evaluate(&rel.to_word(&images)).identity_residual();
        r.push(
            Claim::below(
                format!("presentation/r{}", i + 1),
                ClaimKind::Relator,
                res,
                RELATOR_TOL,
            )
            .with_detail(rel.display(&p.generators).to_string()),
        );
    }
    let a = abelianization(&p)?;
    let b = abelianization(&s782_presentation())?;
    r.push(
        Claim::check("abelianization/match", ClaimKind::Abelianization, a == b)
            .with_detail(format!("{a} vs {b}")),
    );
    let psi = psi_check();
    r.push(
        Claim::check(
            "abelianization/psi",
            ClaimKind::Abelianization,
            psi.induces_isomorphism(),
        )
        .with_detail("necessary-condition check, not an isomorphism proof"),
    );
    Ok(r)
}

/// Every boundary check at `theta = pi/3`.
pub fn verify_boundary(theta: f64) -> Result<FordReport> {
    if (theta - FRAC_PI_3).abs() > 1e-12 {
        return Err(Error::NotParabolicCase { theta });
    }
    let group = TriangleGroup::build(theta)?;
    let mut r = verify_incidences(&group)?;
    r.extend(verify_plane_sections(&group)?);
    r.extend(verify_curves(&group)?);
    r.extend(verify_rcircle(&group)?);
    r.extend(verify_tube(&group)?);
    r.extend(verify_polyhedron(&group)?);
    r.extend(verify_relations(&group)?);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group() -> TriangleGroup {
        TriangleGroup::build(FRAC_PI_3).unwrap()
    }

    #[test]
    fn named_point_examples() {
        let pts = named_points(&group()).unwrap();
        let s3 = 3f64.sqrt();
        let p3 = pts.finite("p3").unwrap();
        assert!(p3.coord_distance(&HeisenbergPoint::new(c(1.5, s3 / 2.0), s3)) < 1e-12);
        assert_eq!(pts.finite("p1").unwrap(), HeisenbergPoint::origin());
        assert!(matches!(pts.get("p99"), Err(Error::UnknownLabel(_))));
        assert!(matches!(
            named_points(&TriangleGroup::build(0.5).unwrap()),
            Err(Error::NotParabolicCase { .. })
        ));
    }

    #[test]
    fn incidences_hold() {
        let r = verify_incidences(&group()).unwrap();
        let bad: Vec<_> = r.failures().map(|c| (&c.id, c.value)).collect();
        assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn sections_and_curves() {
        let g = group();
        for r in [
            verify_plane_sections(&g).unwrap(),
            verify_curves(&g).unwrap(),
            verify_rcircle(&g).unwrap(),
        ] {
            let bad: Vec<_> = r.failures().map(|c| (&c.id, c.value, &c.detail)).collect();
            assert!(bad.is_empty(), "{bad:?}");
        }
    }

    #[test]
    fn tube_complex_is_a_sphere() {
        let g = group();
        let cx = tube_complex(&g).unwrap();
        assert_eq!(
            (cx.vertices.len(), cx.edges.len(), cx.faces.len()),
            (13, 23, 12)
        );
        assert_eq!(cx.euler_characteristic(), 2);
        let r = verify_tube(&g).unwrap();
        let bad: Vec<_> = r.failures().map(|c| (&c.id, c.value, &c.detail)).collect();
        assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn polyhedron_and_cycles() {
        let g = group();
        let poly = polyhedron_p(&g).unwrap();
        assert_eq!(poly.listed_census, STATED_CENSUS);
        assert_eq!(poly.complex.census(), [8, 4, 4, 0]);
        assert_eq!(poly.complex.euler_characteristic(), 2);
        let cycles = edge_cycles(&poly).unwrap();
        let found: Vec<&str> = cycles.iter().map(|(c, _)| c.relator.as_str()).collect();
        assert_eq!(found, EXPECTED_RELATORS);
        let r = verify_relations(&g).unwrap();
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn pairings_hold_on_listed_tuples() {
        let r = verify_polyhedron(&group()).unwrap();
        let bad: Vec<&str> = r.failures().map(|c| c.id.as_str()).collect();
        assert_eq!(bad, vec!["polyhedron/census"]);
    }
}
