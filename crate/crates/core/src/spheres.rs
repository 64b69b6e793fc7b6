//! Isometric spheres: the four families `I_k^{+,-,*,<>}`, geographic
//! coordinates, the f-functions on `I_0^+`, Giraud disk tracing, the triple
//! intersection curves and the parabolic tangency points at `theta = pi/3`.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI, SQRT_2};
use std::fmt;

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::heisenberg::{
    cygan_distance, cygan_distance_coords, heisenberg_product, BoundaryPoint, HeisenbergPoint,
    HorosphericalPoint, Point,
};
use crate::hermitian::{c, cis, h_product, re, CVec3};
use crate::isometry::{fixed_boundary_point, fixed_residual, GroupElement};
use crate::triangle::{TriangleGroup, Word};

/// Cells whose `w`-interval half-width is below this are skipped.
pub const POLE_CUTOFF: f64 = 1e-6;
/// Residual bound for accepted Giraud samples.
pub const TRACE_RESIDUAL: f64 = 1e-10;

/// The four sphere families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Plus,
    Minus,
    Star,
    Diamond,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Plus, Family::Minus, Family::Star, Family::Diamond];

    pub fn name(self) -> &'static str {
        match self {
            Family::Plus => "plus",
            Family::Minus => "minus",
            Family::Star => "star",
            Family::Diamond => "diamond",
        }
    }

    /// The defining word at `k = 0`.
    pub fn base_word(self) -> Word {
        let text = match self {
            Family::Plus => "S",
            Family::Minus => "s",
            Family::Star => "SS",
            Family::Diamond => "sTsT",
        };
        Word::parse(text).unwrap_or_default()
    }
}

/// A labeled sphere `I_k^family`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SphereId {
    pub family: Family,
    pub k: i32,
}

impl SphereId {
    pub fn new(family: Family, k: i32) -> Self {
        SphereId { family, k }
    }

    pub fn plus(k: i32) -> Self {
        SphereId::new(Family::Plus, k)
    }

    pub fn minus(k: i32) -> Self {
        SphereId::new(Family::Minus, k)
    }

    pub fn star(k: i32) -> Self {
        SphereId::new(Family::Star, k)
    }

    pub fn diamond(k: i32) -> Self {
        SphereId::new(Family::Diamond, k)
    }

    /// `T^k g T^{-k}` for the family's base element `g`.
    pub fn word(&self) -> Word {
        self.family.base_word().t_conjugate(self.k)
    }

    /// The same family shifted by `dk`.
    pub fn shift(&self, dk: i32) -> Self {
        SphereId::new(self.family, self.k + dk)
    }

    /// All spheres with `|k| <= window`.
    pub fn window(window: i32) -> Vec<SphereId> {
        (-window..=window)
            .flat_map(|k| Family::ALL.into_iter().map(move |f| SphereId::new(f, k)))
            .collect()
    }
}

impl fmt::Display for SphereId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.name(), self.k)
    }
}

/// A Cygan sphere arising as an isometric sphere.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsometricSphere {
    pub center: HeisenbergPoint,
    pub radius: f64,
    pub word: Word,
    pub id: Option<SphereId>,
}

/// Isometric sphere of `g` from its bottom row.
pub fn isometric_sphere(g: &GroupElement) -> Result<IsometricSphere> {
    let m = &g.matrix;
    let (g31, g32, g33) = (m[(2, 0)], m[(2, 1)], m[(2, 2)]);
    let scale = m.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if g31.norm() <= 1e-10 * scale {
        return Err(Error::FixesInfinity { g31: g31.norm() });
    }
    let z = g32.conj() / g31.conj();
    let t = 2.0 * (g33.conj() / g31.conj()).im;
    Ok(IsometricSphere {
        center: HeisenbergPoint::new(z, t),
        radius: (2.0 / g31.norm()).sqrt(),
        word: g.word.clone(),
        id: None,
    })
}

/// Closed-form center and radius of `I_k^family`.
pub fn sphere_of(id: SphereId, theta: f64) -> IsometricSphere {
    let k = id.k as f64;
    let shift = 4.0 * k * theta.cos();
    let (center, radius) = match id.family {
        Family::Plus => (
            HeisenbergPoint::new(re(shift), 8.0 * k * (2.0 * theta).sin()),
            SQRT_2,
        ),
        Family::Minus => (
            HeisenbergPoint::new(re(shift) + cis(theta) * 2.0, 0.0),
            SQRT_2,
        ),
        Family::Star => (
            HeisenbergPoint::new(re(shift) + cis(theta), 4.0 * k * (2.0 * theta).sin()),
            1.0,
        ),
        Family::Diamond => (
            HeisenbergPoint::new(re(shift) - cis(-theta), 4.0 * k * (2.0 * theta).sin()),
            1.0,
        ),
    };
    IsometricSphere {
        center,
        radius,
        word: id.word(),
        id: Some(id),
    }
}

/// `d_Cyg(p, center)^2 - radius^2`: positive outside, negative inside.
/// The point at infinity is outside every sphere.
pub fn side_of(p: impl Into<Point>, s: &IsometricSphere) -> f64 {
    match cygan_distance(p, s.center) {
        Ok(d) => d * d - s.radius * s.radius,
        Err(_) => f64::INFINITY,
    }
}

/// Geographic coordinates `(alpha, beta, w)` on a Cygan sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeographicCoord {
    pub alpha: f64,
    pub beta: f64,
    pub w: f64,
}

impl GeographicCoord {
    pub fn new(alpha: f64, beta: f64, w: f64) -> Self {
        GeographicCoord { alpha, beta, w }
    }

    /// Bring `beta` into `[0, pi)`; a shift by `pi` flips the sign of `w`.
    pub fn normalized(&self) -> Self {
        let turns = (self.beta / PI).floor();
        let sign = if (turns as i64).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        };
        GeographicCoord::new(self.alpha, self.beta - turns * PI, sign * self.w)
    }

    /// `sqrt(cos alpha)`, the bound on `|w|`.
    pub fn w_bound(&self) -> f64 {
        self.alpha.cos().max(0.0).sqrt()
    }
}

/// Lift `q(alpha, beta, w)` on the origin-centered sphere of radius `r`.
pub fn geographic_lift(coord: &GeographicCoord, r: f64) -> Result<CVec3> {
    let bound = coord.w_bound();
    if coord.w.abs() > bound + 1e-12 {
        return Err(Error::OutsideGeographic { w: coord.w, bound });
    }
    Ok(geographic_lift_unchecked(coord, r))
}

fn geographic_lift_unchecked(coord: &GeographicCoord, r: f64) -> CVec3 {
    Vector3::new(
        -cis(-coord.alpha) * (r * r / 2.0),
        cis(-coord.alpha / 2.0 + coord.beta) * (r * coord.w),
        re(1.0),
    )
}

/// Horospherical point `q(alpha, beta, w)` on the origin-centered sphere.
fn geographic_relative(coord: &GeographicCoord, r: f64) -> HorosphericalPoint {
    let r2 = r * r;
    let z = cis(-coord.alpha / 2.0 + coord.beta) * (r * coord.w);
    let u = (r2 * coord.alpha.cos() - z.norm_sqr()).max(0.0);
    HorosphericalPoint::new(z, r2 * coord.alpha.sin(), u)
}

/// The point with geographic coordinates `coord` on `sphere`, transported from
/// the origin-centered sphere by the Heisenberg translation to its center.
pub fn geographic_point(
    sphere: &IsometricSphere,
    coord: &GeographicCoord,
) -> Result<HorosphericalPoint> {
    let bound = coord.w_bound();
    if coord.w.abs() > bound + 1e-12 {
        return Err(Error::OutsideGeographic { w: coord.w, bound });
    }
    Ok(geographic_point_unchecked(sphere, coord))
}

fn geographic_point_unchecked(
    sphere: &IsometricSphere,
    coord: &GeographicCoord,
) -> HorosphericalPoint {
    let rel = geographic_relative(coord, sphere.radius);
    heisenberg_product(&sphere.center, &rel.base()).at_height(rel.u)
}

/// The three functions whose signs locate a point of `I_0^+` relative to
/// `I_0^*`, `I_0^-` and `I_{-1}^-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FFunction {
    Star0,
    Minus0,
    MinusMinus1,
}

impl FFunction {
    pub fn sphere(self) -> SphereId {
        match self {
            FFunction::Star0 => SphereId::star(0),
            FFunction::Minus0 => SphereId::minus(0),
            FFunction::MinusMinus1 => SphereId::minus(-1),
        }
    }
}

/// Evaluate an f-function at geographic coordinates on `I_0^+`.
pub fn f_eval(which: FFunction, theta: f64, c: &GeographicCoord) -> f64 {
    let (a, b, w) = (c.alpha, c.beta, c.w);
    let common = 2.0 * w * w + 1.0 + a.cos();
    match which {
        FFunction::Star0 => {
            common
                - SQRT_2 * w * (-a / 2.0 + b - theta).cos()
                - 2.0 * SQRT_2 * w * (a / 2.0 + b - theta).cos()
        }
        FFunction::Minus0 => {
            common
                - SQRT_2 * w * (a / 2.0 + b - theta).cos()
                - 2.0 * SQRT_2 * w * (-a / 2.0 + b - theta).cos()
        }
        FFunction::MinusMinus1 => {
            common
                + SQRT_2 * w * (a / 2.0 + b + theta).cos()
                + 2.0 * SQRT_2 * w * (-a / 2.0 + b + theta).cos()
        }
    }
}

/// Sampling resolution for Giraud tracing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceGrid {
    pub n_alpha: usize,
    pub n_beta: usize,
    pub iterations: u32,
}

impl Default for TraceGrid {
    fn default() -> Self {
        TraceGrid {
            n_alpha: 720,
            n_beta: 720,
            iterations: 60,
        }
    }
}

impl TraceGrid {
    pub fn square(n: usize) -> Self {
        TraceGrid {
            n_alpha: n,
            n_beta: n,
            ..TraceGrid::default()
        }
    }

    /// Cell-centered nodes in lexicographic order.
    pub fn nodes(&self) -> Vec<GridNode> {
        self.nodes_in((-FRAC_PI_2, FRAC_PI_2), (0.0, PI))
    }

    /// Same nodes restricted to a box.
    pub fn nodes_in(&self, alpha: (f64, f64), beta: (f64, f64)) -> Vec<GridNode> {
        let (na, nb) = (self.n_alpha.max(1), self.n_beta.max(1));
        let mut out = Vec::with_capacity(na * nb);
        for i in 0..na {
            let a = alpha.0 + (alpha.1 - alpha.0) * (i as f64 + 0.5) / na as f64;
            for j in 0..nb {
                out.push(GridNode {
                    cell: [i as u32, j as u32],
                    alpha: a,
                    beta: beta.0 + (beta.1 - beta.0) * (j as f64 + 0.5) / nb as f64,
                });
            }
        }
        out
    }

    /// Cell size in radians.
    pub fn pitch(&self) -> f64 {
        PI / self.n_alpha.min(self.n_beta).max(1) as f64
    }
}

/// A grid cell center with its `(alpha, beta)` index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridNode {
    pub cell: [u32; 2],
    pub alpha: f64,
    pub beta: f64,
}

/// The side residual of `other` along a `w`-segment of `base`, written as the
/// quadratic `|P + w Q|^2 - r^4` whose sign is the sign of `side_of`.
#[derive(Debug, Clone, Copy)]
struct Segment {
    p: Complex64,
    q: Complex64,
    r2: f64,
    bound: f64,
}

impl Segment {
    fn quad(&self, w: f64) -> f64 {
        (self.p + self.q * w).norm_sqr() - self.r2 * self.r2
    }

    fn side(&self, w: f64) -> f64 {
        (self.p + self.q * w).norm() - self.r2
    }

    /// Minimum of the side residual over `|w| <= bound`.
    fn min_side(&self) -> (f64, f64) {
        let a = self.q.norm_sqr();
        let mut best = (self.side(-self.bound), -self.bound);
        let hi = (self.side(self.bound), self.bound);
        if hi.0 < best.0 {
            best = hi;
        }
        if a > 0.0 {
            let vertex = -(self.p * self.q.conj()).re / a;
            if vertex.abs() < self.bound {
                let v = (self.side(vertex), vertex);
                if v.0 < best.0 {
                    best = v;
                }
            }
        }
        best
    }

    /// Sign changes of the quadratic on the interval, located by bisection on
    /// each monotone piece.
    fn roots(&self, iterations: u32) -> Vec<f64> {
        let a = self.q.norm_sqr();
        let mut cuts = vec![-self.bound];
        if a > 0.0 {
            let vertex = -(self.p * self.q.conj()).re / a;
            if vertex.abs() < self.bound {
                cuts.push(vertex);
            }
        }
        cuts.push(self.bound);
        let mut out = Vec::new();
        for pair in cuts.windows(2) {
            let (mut lo, mut hi) = (pair[0], pair[1]);
            let (flo, fhi) = (self.quad(lo), self.quad(hi));
            if flo == 0.0 {
                out.push(lo);
                continue;
            }
            if flo.signum() == fhi.signum() {
                continue;
            }
            for _ in 0..iterations {
                let mid = 0.5 * (lo + hi);
                if self.quad(mid).signum() == flo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        // A root exactly at the shared cut point is reported once.
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
        out
    }
}

/// Geographic chart on a base sphere, used to evaluate other spheres' side
/// residuals along `w`.
#[derive(Debug, Clone)]
pub struct SphereChart {
    pub base: IsometricSphere,
}

impl SphereChart {
    pub fn new(base: IsometricSphere) -> Self {
        SphereChart { base }
    }

    pub fn point(&self, coord: &GeographicCoord) -> HorosphericalPoint {
        geographic_point_unchecked(&self.base, coord)
    }

    fn segment(&self, other: &IsometricSphere, alpha: f64, beta: f64) -> Segment {
        // Move everything so that the base sphere is centered at the origin.
        let rel = heisenberg_product(&self.base.center.inverse(), &other.center);
        let lift_c1 = c(-rel.z.norm_sqr() / 2.0, rel.t / 2.0);
        let r = self.base.radius;
        let a = -cis(-alpha) * (r * r / 2.0);
        let b = cis(-alpha / 2.0 + beta) * r;
        Segment {
            p: (a + lift_c1.conj()) * 2.0,
            q: b * rel.z.conj() * 2.0,
            r2: other.radius * other.radius,
            bound: alpha.cos().max(0.0).sqrt(),
        }
    }

    /// Minimum over `w` of `side_of(other)` at fixed `(alpha, beta)`, with the
    /// minimizing `w`.
    pub fn min_side_over_w(&self, other: &IsometricSphere, alpha: f64, beta: f64) -> (f64, f64) {
        self.segment(other, alpha, beta).min_side()
    }

    /// Points of `base ∩ other` at fixed `(alpha, beta)`.
    pub fn crossings(
        &self,
        other: &IsometricSphere,
        alpha: f64,
        beta: f64,
        iterations: u32,
    ) -> Vec<GiraudSample> {
        let seg = self.segment(other, alpha, beta);
        if seg.bound < POLE_CUTOFF {
            return Vec::new();
        }
        seg.roots(iterations)
            .into_iter()
            .map(|w| {
                let coord = GeographicCoord::new(alpha, beta, w);
                let point = self.point(&coord);
                GiraudSample {
                    coord,
                    point,
                    residual: side_of(point, other),
                    cell: [0, 0],
                }
            })
            .filter(|s| s.residual.abs() < TRACE_RESIDUAL)
            .collect()
    }
}

/// A traced point of a Giraud disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GiraudSample {
    pub coord: GeographicCoord,
    pub point: HorosphericalPoint,
    pub residual: f64,
    /// Grid cell the sample was found in.
    pub cell: [u32; 2],
}

/// Sampled intersection of two spheres, in geographic coordinates of `base`.
#[derive(Debug, Clone, Serialize)]
pub struct GiraudTrace {
    pub base: IsometricSphere,
    pub other: IsometricSphere,
    pub samples: Vec<GiraudSample>,
    /// Minimum over the grid of `min_w side_of(other)` on `base`.
    pub min_margin: f64,
    /// Point of `base` realizing `min_margin`.
    pub min_witness: HorosphericalPoint,
    pub grid: TraceGrid,
}

impl GiraudTrace {
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Trace `base ∩ other` by per-cell bisection in `w`.
pub fn giraud_trace(
    base: &IsometricSphere,
    other: &IsometricSphere,
    grid: TraceGrid,
) -> GiraudTrace {
    trace_nodes(base, other, grid, &grid.nodes())
}

/// Trace on an explicit list of `(alpha, beta)` nodes.
pub fn trace_nodes(
    base: &IsometricSphere,
    other: &IsometricSphere,
    grid: TraceGrid,
    nodes: &[GridNode],
) -> GiraudTrace {
    let chart = SphereChart::new(base.clone());
    let mut samples = Vec::new();
    let mut min_margin = f64::INFINITY;
    let mut min_coord = GeographicCoord::new(0.0, 0.0, 0.0);
    for node in nodes {
        let (alpha, beta) = (node.alpha, node.beta);
        let seg = chart.segment(other, alpha, beta);
        if seg.bound < POLE_CUTOFF {
            continue;
        }
        let (m, w) = seg.min_side();
        if m < min_margin {
            min_margin = m;
            min_coord = GeographicCoord::new(alpha, beta, w);
        }
        samples.extend(
            chart
                .crossings(other, alpha, beta, grid.iterations)
                .into_iter()
                .map(|s| GiraudSample {
                    cell: node.cell,
                    ..s
                }),
        );
    }
    GiraudTrace {
        base: base.clone(),
        other: other.clone(),
        samples,
        min_margin,
        min_witness: chart.point(&min_coord),
        grid,
    }
}

/// Number of connected components of a point set under the graph joining
/// points closer than `eps` in the extended Cygan distance.
pub fn cygan_components(points: &[HorosphericalPoint], eps: f64) -> usize {
    if points.is_empty() {
        return 0;
    }
    let rmax = points.iter().map(|p| p.z.norm()).fold(0.0, f64::max);
    // d_Cyg < eps bounds |dz| by eps and |dt| by eps^2 + 2 eps |z|.
    let hz = eps;
    let ht = eps * eps + 2.0 * eps * rmax;
    let key = |p: &HorosphericalPoint| {
        (
            (p.z.re / hz).floor() as i64,
            (p.z.im / hz).floor() as i64,
            (p.t / ht).floor() as i64,
        )
    };
    let mut buckets: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        buckets.entry(key(p)).or_default().push(i);
    }
    let mut parent: Vec<usize> = (0..points.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (i, p) in points.iter().enumerate() {
        let (kx, ky, kt) = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dt in -1..=1 {
                    let Some(list) = buckets.get(&(kx + dx, ky + dy, kt + dt)) else {
                        continue;
                    };
                    for &j in list {
                        if j <= i {
                            continue;
                        }
                        let d = cygan_distance_coords(p, &points[j]);
                        if d < eps {
                            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                            if a != b {
                                parent[a] = b;
                            }
                        }
                    }
                }
            }
        }
    }
    (0..points.len())
        .filter(|&i| find(&mut parent, i) == i)
        .count()
}

/// Connected components of a traced sample set. Samples in the same or
/// adjacent grid cells are joined when their extended Cygan distance is below
/// `eps`; the `beta` direction wraps around.
pub fn trace_components(trace: &GiraudTrace, eps: f64) -> usize {
    let samples = &trace.samples;
    if samples.is_empty() {
        return 0;
    }
    let nb = trace.grid.n_beta.max(1) as i64;
    let mut cells: HashMap<[u32; 2], Vec<usize>> = HashMap::new();
    for (i, s) in samples.iter().enumerate() {
        cells.entry(s.cell).or_default().push(i);
    }
    let mut parent: Vec<usize> = (0..samples.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (i, s) in samples.iter().enumerate() {
        let [ci, cj] = s.cell;
        for di in -1i64..=1 {
            let ni = ci as i64 + di;
            if ni < 0 {
                continue;
            }
            for dj in -1i64..=1 {
                let nj = (cj as i64 + dj).rem_euclid(nb);
                let Some(list) = cells.get(&[ni as u32, nj as u32]) else {
                    continue;
                };
                for &j in list {
                    if j <= i || cygan_distance_coords(&s.point, &samples[j].point) >= eps {
                        continue;
                    }
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
    }
    (0..samples.len())
        .filter(|&i| find(&mut parent, i) == i)
        .count()
}

/// Connectivity threshold for a traced sample set: three grid steps measured
/// in the Cygan scale `r sqrt(pitch)` of the base sphere.
pub fn trace_connectivity_eps(trace: &GiraudTrace) -> f64 {
    3.0 * trace.base.radius * trace.grid.pitch().sqrt()
}

/// The crossed geodesics `L1`, `C1`, `C2` in `I_0^+ ∩ I_0^- ∩ I_0^*`.
#[derive(Debug, Clone, Serialize)]
pub struct TripleCurves {
    pub theta: f64,
    pub l1: Vec<GeographicCoord>,
    pub c1: Vec<GeographicCoord>,
    pub c2: Vec<GeographicCoord>,
    /// The fixed point of `S`, `q(0, theta, sqrt2/2)`.
    pub center: GeographicCoord,
    /// `q(±arccos(1/3), theta, sqrt3/3)` and `q(0, arccos(±2 sqrt2/3) + theta, ±1)`.
    pub endpoints: [GeographicCoord; 4],
}

/// Parametrize the triple intersection curves with `n` samples per arc.
pub fn triple_curves(theta: f64, n: usize) -> Result<TripleCurves> {
    if !(0.0..=FRAC_PI_3 + 1e-12).contains(&theta) {
        return Err(Error::ThetaOutOfRange {
            theta,
            range: "[0, pi/3]",
        });
    }
    let n = n.max(2);
    let amax = (1.0f64 / 3.0).acos();
    let l1 = (0..n)
        .map(|i| {
            let a = -amax + 2.0 * amax * i as f64 / (n - 1) as f64;
            GeographicCoord::new(a, theta, SQRT_2 / 2.0 * (a / 2.0).cos())
        })
        .collect();
    let c = 2.0 * SQRT_2 / 3.0;
    let branch = |t: f64, sign: f64| {
        let ct = t.cos();
        let disc = (9.0 * ct * ct - 8.0).max(0.0).sqrt();
        let w = (3.0 * ct + sign * disc) / (2.0 * SQRT_2);
        GeographicCoord::new(0.0, t + theta, w).normalized()
    };
    let t1 = c.acos();
    let c1 = (0..n)
        .map(|i| branch(t1 * i as f64 / (n - 1) as f64, -1.0))
        .collect();
    let t2 = (-c).acos();
    let c2 = (0..n)
        .map(|i| branch(PI - (PI - t2) * i as f64 / (n - 1) as f64, 1.0))
        .collect();
    Ok(TripleCurves {
        theta,
        l1,
        c1,
        c2,
        center: GeographicCoord::new(0.0, theta, SQRT_2 / 2.0),
        endpoints: [
            GeographicCoord::new(amax, theta, 3f64.sqrt() / 3.0),
            GeographicCoord::new(-amax, theta, 3f64.sqrt() / 3.0),
            GeographicCoord::new(0.0, t1 + theta, 1.0).normalized(),
            GeographicCoord::new(0.0, t2 + theta, -1.0).normalized(),
        ],
    })
}

/// A predicted parabolic tangency at `theta = pi/3`.
#[derive(Debug, Clone, Serialize)]
pub struct Tangency {
    /// The two tangent spheres; for a mixed tangency `first ∩ second` touches
    /// `touching`.
    pub first: SphereId,
    pub second: SphereId,
    pub touching: Option<SphereId>,
    pub word: Word,
    pub point: BoundaryPoint,
    /// Largest `|side_of|` of `point` over the spheres involved.
    pub incidence_residual: f64,
    /// Coordinate distance from `point` to its image under `word`.
    pub fixed_residual: f64,
}

/// Parabolic tangency points for `k` in `ks`, at `theta = pi/3`.
pub fn tangency_points(
    group: &TriangleGroup,
    ks: std::ops::RangeInclusive<i32>,
) -> Result<Vec<Tangency>> {
    if !group.parabolic_case {
        return Err(Error::NotParabolicCase { theta: group.theta });
    }
    let theta = group.theta;
    let mut out = Vec::new();
    for k in ks {
        let specs: [(SphereId, SphereId, Option<SphereId>, &str); 6] = [
            (SphereId::star(k), SphereId::star(k + 1), None, "SSt"),
            (SphereId::diamond(k), SphereId::diamond(k + 1), None, "StS"),
            (
                SphereId::plus(k),
                SphereId::star(k - 1),
                Some(SphereId::minus(k - 1)),
                "SST",
            ),
            (
                SphereId::plus(k),
                SphereId::diamond(k + 1),
                Some(SphereId::minus(k)),
                "sTs",
            ),
            (
                SphereId::minus(k),
                SphereId::diamond(k),
                Some(SphereId::plus(k)),
                "StS",
            ),
            (
                SphereId::minus(k),
                SphereId::star(k + 1),
                Some(SphereId::plus(k + 1)),
                "SSt",
            ),
        ];
        for (first, second, touching, base) in specs {
            let word = Word::parse(base)?.t_conjugate(k);
            let g = group.evaluate(&word);
            let point = fixed_boundary_point(&g)?
                .into_iter()
                .next()
                .ok_or_else(|| Error::FixedPoint("no fixed point".into()))?;
            let incidence_residual = [Some(first), Some(second), touching]
                .into_iter()
                .flatten()
                .map(|id| side_of(point, &sphere_of(id, theta)).abs())
                .fold(0.0, f64::max);
            out.push(Tangency {
                first,
                second,
                touching,
                fixed_residual: fixed_residual(&g, point),
                word,
                point,
                incidence_residual,
            });
        }
    }
    Ok(out)
}

/// `<p, c>` for a boundary point and the lift of a sphere center; helper for
/// the Ford criterion.
pub fn center_product(p: &CVec3, s: &IsometricSphere) -> Complex64 {
    h_product(p, &crate::heisenberg::standard_lift(s.center))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{vec_max_abs, Projective};

    #[test]
    fn table_examples() {
        let g = TriangleGroup::build(0.45).unwrap();
        let s = isometric_sphere(&g.s).unwrap();
        assert!(s.center.coord_distance(&HeisenbergPoint::origin()) < 1e-14);
        assert!((s.radius - SQRT_2).abs() < 1e-14);
        let s2 = isometric_sphere(&g.eval_str("SS").unwrap()).unwrap();
        assert!(
            s2.center
                .coord_distance(&HeisenbergPoint::new(cis(0.45), 0.0))
                < 1e-14
        );
        assert!((s2.radius - 1.0).abs() < 1e-14);
        assert!(matches!(
            isometric_sphere(&g.t),
            Err(Error::FixesInfinity { .. })
        ));
        let m = sphere_of(SphereId::minus(0), 0.45);
        assert!(
            m.center
                .coord_distance(&HeisenbergPoint::new(cis(0.45) * 2.0, 0.0))
                < 1e-15
        );
    }

    #[test]
    fn diamond_one_at_pi_over_3() {
        let d = sphere_of(SphereId::diamond(1), FRAC_PI_3);
        let s3 = 3f64.sqrt();
        let expected = HeisenbergPoint::new(c(1.5, s3 / 2.0), 2.0 * s3);
        assert!(d.center.coord_distance(&expected) < 1e-14);
        assert_eq!(d.radius, 1.0);
    }

    #[test]
    fn side_examples() {
        let p = sphere_of(SphereId::plus(0), 0.3);
        assert!((side_of(p.center, &p) + 2.0).abs() < 1e-15);
        assert!(side_of(HeisenbergPoint::new(re(100.0), 0.0), &p) > 0.0);
        assert_eq!(side_of(Point::Infinity, &p), f64::INFINITY);
    }

    #[test]
    fn geographic_examples() {
        let th = 0.6;
        let l = geographic_lift(&GeographicCoord::new(0.0, th, SQRT_2 / 2.0), SQRT_2).unwrap();
        let expected = Vector3::new(re(-1.0), cis(th), re(1.0));
        assert!(vec_max_abs(&(l - expected)) < 1e-14);
        let edge = GeographicCoord::new(0.4, 1.0, 0.4f64.cos().sqrt());
        let v = geographic_lift(&edge, 1.7).unwrap();
        assert!(h_product(&v, &v).norm() < 1e-12);
        assert!(geographic_lift(&GeographicCoord::new(1.2, 0.0, 0.9), 1.0).is_err());
    }

    #[test]
    fn p2_geographic_coordinates() {
        let l = geographic_lift(
            &GeographicCoord::new(-FRAC_PI_3, FRAC_PI_2, SQRT_2 / 2.0),
            SQRT_2,
        )
        .unwrap();
        let s3 = 3f64.sqrt();
        let p2 = crate::heisenberg::standard_lift(HeisenbergPoint::new(c(-0.5, s3 / 2.0), -s3));
        assert!(l.projective_residual(&p2).unwrap() < 1e-14);
    }

    #[test]
    fn f_examples() {
        for th in [0.0, 0.4, FRAC_PI_3] {
            for a in [-1.0, 0.2, 1.1] {
                let v = f_eval(
                    FFunction::Star0,
                    th,
                    &GeographicCoord::new(a, a / 2.0 + th, SQRT_2 / 2.0),
                );
                assert!((v - (1.0 - a.cos())).abs() < 1e-14);
            }
        }
        let p2 = GeographicCoord::new(-FRAC_PI_3, FRAC_PI_2, SQRT_2 / 2.0);
        assert!(f_eval(FFunction::MinusMinus1, FRAC_PI_3, &p2).abs() < 1e-14);
    }

    #[test]
    fn normalization_keeps_the_point() {
        let c0 = GeographicCoord::new(0.3, 3.9, 0.5);
        let n = c0.normalized();
        assert!((0.0..PI).contains(&n.beta));
        let a = geographic_lift_unchecked(&c0, 1.3);
        let b = geographic_lift_unchecked(&n, 1.3);
        assert!(vec_max_abs(&(a - b)) < 1e-14);
    }

    #[test]
    fn plus_minus_disk_is_connected() {
        let th = 0.5;
        let a = sphere_of(SphereId::plus(0), th);
        let b = sphere_of(SphereId::minus(0), th);
        let tr = giraud_trace(&a, &b, TraceGrid::square(200));
        assert!(tr.samples.len() > 1000);
        for s in &tr.samples {
            assert!(side_of(s.point, &a).abs() < 1e-10);
            assert!(s.residual.abs() < 1e-10);
        }
        assert_eq!(trace_components(&tr, trace_connectivity_eps(&tr)), 1);
    }

    #[test]
    fn triple_curves_lie_on_three_spheres() {
        for th in [0.0, 0.4, FRAC_PI_3] {
            let tc = triple_curves(th, 50).unwrap();
            let base = sphere_of(SphereId::plus(0), th);
            for c0 in tc
                .l1
                .iter()
                .chain(&tc.c1)
                .chain(&tc.c2)
                .chain(&tc.endpoints)
            {
                let p = geographic_point(&base, c0).unwrap();
                for id in [SphereId::plus(0), SphereId::minus(0), SphereId::star(0)] {
                    assert!(side_of(p, &sphere_of(id, th)).abs() < 1e-9, "{id} {c0:?}");
                }
            }
        }
    }

    #[test]
    fn s_cycles_triple_endpoints() {
        let th = 0.4;
        let g = TriangleGroup::build(th).unwrap();
        let tc = triple_curves(th, 3).unwrap();
        let base = sphere_of(SphereId::plus(0), th);
        let pts: Vec<HorosphericalPoint> = tc
            .endpoints
            .iter()
            .map(|c0| geographic_point(&base, c0).unwrap())
            .collect();
        let image = |p: HorosphericalPoint| match g.s.apply(Point::Finite(p)).unwrap() {
            Point::Finite(q) => q,
            Point::Infinity => panic!("infinity"),
        };
        let target = [3, 2, 0, 1];
        for (i, p) in pts.iter().enumerate() {
            let q = image(*p);
            let d = cygan_distance_coords(&q, &pts[target[i]]);
            assert!(d < 1e-6, "e{i}: {d}");
        }
        let ctr = geographic_point(&base, &tc.center).unwrap();
        assert!(cygan_distance_coords(&image(ctr), &ctr) < 1e-6);
    }

    #[test]
    fn tangencies_at_pi_over_3() {
        let g = TriangleGroup::build(FRAC_PI_3).unwrap();
        for t in tangency_points(&g, -1..=1).unwrap() {
            assert!(t.incidence_residual < 1e-8, "{t:?}");
            assert!(t.fixed_residual < 1e-8, "{t:?}");
        }
        let g = TriangleGroup::build(0.5).unwrap();
        assert!(tangency_points(&g, 0..=0).is_err());
    }
}
