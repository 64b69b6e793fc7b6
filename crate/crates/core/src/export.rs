//! Point clouds and meshes for figure reproduction: CSV rows with columns
//! `kind,label,alpha,beta,w,x,y,t` and Wavefront OBJ in `(x, y, t)`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::complex::{
    line_l, named_points, polyhedron_p, section_circle, sigma_curve, tube_complex, CellComplex,
    SIGMA_0,
};
use crate::error::{Error, Result};
use crate::heisenberg::HeisenbergPoint;
use crate::spheres::{
    geographic_point, giraud_trace, side_of, sphere_of, triple_curves, GeographicCoord,
    IsometricSphere, SphereId, TraceGrid,
};
use crate::triangle::TriangleGroup;

/// One CSV row. Geographic columns are empty for points not given on a
/// sphere chart.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExportRow {
    pub kind: String,
    pub label: String,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub w: Option<f64>,
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl ExportRow {
    pub fn point(kind: &str, label: &str, p: HeisenbergPoint) -> Self {
        ExportRow {
            kind: kind.into(),
            label: label.into(),
            alpha: None,
            beta: None,
            w: None,
            x: p.z.re,
            y: p.z.im,
            t: p.t,
        }
    }

    pub fn geographic(kind: &str, label: &str, c: GeographicCoord, p: HeisenbergPoint) -> Self {
        ExportRow {
            alpha: Some(c.alpha),
            beta: Some(c.beta),
            w: Some(c.w),
            ..ExportRow::point(kind, label, p)
        }
    }
}

/// CSV text with a header row.
pub fn csv_string(rows: &[ExportRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(["kind", "label", "alpha", "beta", "w", "x", "y", "t"])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvariantViolated(e.to_string()))
}

/// A named group of an OBJ file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MeshObject {
    pub name: String,
    pub vertices: Vec<[f64; 3]>,
    /// Polygons, as indices into `vertices`.
    pub faces: Vec<Vec<usize>>,
    /// Polylines, as indices into `vertices`.
    pub lines: Vec<Vec<usize>>,
}

impl MeshObject {
    pub fn polyline(name: impl Into<String>, points: &[HeisenbergPoint], closed: bool) -> Self {
        let vertices: Vec<[f64; 3]> = points.iter().map(xyt).collect();
        let mut line: Vec<usize> = (0..vertices.len()).collect();
        if closed && !line.is_empty() {
            line.push(0);
        }
        MeshObject {
            name: name.into(),
            vertices,
            faces: Vec::new(),
            lines: vec![line],
        }
    }
}

fn xyt(p: &HeisenbergPoint) -> [f64; 3] {
    [p.z.re, p.z.im, p.t]
}

/// OBJ text; indices are made global and 1-based.
pub fn obj_string(objects: &[MeshObject]) -> String {
    let mut s = String::new();
    let mut offset = 1;
    for o in objects {
        let _ = writeln!(s, "o {}", o.name);
        for v in &o.vertices {
            let _ = writeln!(s, "v {:.12} {:.12} {:.12}", v[0], v[1], v[2]);
        }
        for f in &o.faces {
            let idx: Vec<String> = f.iter().map(|i| (i + offset).to_string()).collect();
            let _ = writeln!(s, "f {}", idx.join(" "));
        }
        for l in &o.lines {
            let idx: Vec<String> = l.iter().map(|i| (i + offset).to_string()).collect();
            let _ = writeln!(s, "l {}", idx.join(" "));
        }
        offset += o.vertices.len();
    }
    s
}

/// Mesh of the ideal boundary of `s`: the `w = sqrt(cos alpha)` sheet over
/// `alpha` in `[-pi/2, pi/2]` and `beta` in `[0, 2 pi)`.
pub fn sphere_mesh(s: &IsometricSphere, n: usize) -> Result<MeshObject> {
    let n = n.max(4);
    let (rows, cols) = (n + 1, 2 * n);
    let mut vertices = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let alpha = -FRAC_PI_2 + PI * i as f64 / n as f64;
        for j in 0..cols {
            let beta = 2.0 * PI * j as f64 / cols as f64;
            let c = GeographicCoord::new(alpha, beta, 0.0);
            let c = GeographicCoord::new(alpha, beta, c.w_bound());
            vertices.push(xyt(&geographic_point(s, &c)?.base()));
        }
    }
    let mut faces = Vec::new();
    for i in 0..n {
        for j in 0..cols {
            let a = i * cols + j;
            let b = i * cols + (j + 1) % cols;
            faces.push(vec![a, b, b + cols, a + cols]);
        }
    }
    Ok(MeshObject {
        name: s.id.map_or_else(|| s.word.to_string(), |id| id.to_string()),
        vertices,
        faces,
        lines: Vec::new(),
    })
}

/// Meshes of every sphere with `|k| <= window`.
pub fn export_spheres(theta: f64, window: i32, n: usize) -> Result<Vec<MeshObject>> {
    SphereId::window(window)
        .into_iter()
        .map(|id| sphere_mesh(&sphere_of(id, theta), n))
        .collect()
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iterations: u32) -> f64 {
    let fa = f(a) >= 0.0;
    for _ in 0..iterations {
        let m = 0.5 * (a + b);
        if (f(m) >= 0.0) == fa {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Points of the ideal boundary of `base` where `side_of(other)` changes
/// sign, found by bisection in `beta` along each `alpha` row.
pub fn ideal_crossings(
    base: &IsometricSphere,
    other: &IsometricSphere,
    grid: TraceGrid,
) -> Vec<(GeographicCoord, HeisenbergPoint)> {
    let mut out = Vec::new();
    let (na, nb) = (grid.n_alpha.max(2), 2 * grid.n_beta.max(2));
    for i in 0..na {
        let alpha = -FRAC_PI_2 + PI * (i as f64 + 0.5) / na as f64;
        let point = |beta: f64| {
            let c = GeographicCoord::new(alpha, beta, alpha.cos().max(0.0).sqrt());
            (
                c,
                geographic_point(base, &c)
                    .map(|p| p.base())
                    .unwrap_or_else(|_| base.center),
            )
        };
        let f = |beta: f64| side_of(point(beta).1, other);
        for j in 0..nb {
            let (a, b) = (
                2.0 * PI * j as f64 / nb as f64,
                2.0 * PI * (j + 1) as f64 / nb as f64,
            );
            if (f(a) >= 0.0) != (f(b) >= 0.0) {
                let beta = bisect(f, a, b, grid.iterations);
                let (c, p) = point(beta);
                out.push((c.normalized(), p));
            }
        }
    }
    out
}

/// Giraud traces and ideal-boundary crossings of `I_0^+` with each of
/// `others`.
pub fn export_giraud(theta: f64, others: &[SphereId], grid: TraceGrid) -> Vec<ExportRow> {
    let base = sphere_of(SphereId::plus(0), theta);
    let mut rows = Vec::new();
    for &id in others {
        let other = sphere_of(id, theta);
        let label = format!("plus0/{id}");
        for s in giraud_trace(&base, &other, grid).samples {
            rows.push(ExportRow::geographic(
                "giraud",
                &label,
                s.coord,
                s.point.base(),
            ));
        }
        for (c, p) in ideal_crossings(&base, &other, grid) {
            rows.push(ExportRow::geographic("ideal", &label, c, p));
        }
    }
    rows
}

/// `L1`, `C1`, `C2` on `I_0^+` with `n` samples each.
pub fn export_triple_curves(theta: f64, n: usize) -> Result<Vec<ExportRow>> {
    let tc = triple_curves(theta, n)?;
    let base = sphere_of(SphereId::plus(0), theta);
    let mut rows = Vec::new();
    for (label, curve) in [("L1", &tc.l1), ("C1", &tc.c1), ("C2", &tc.c2)] {
        for c in curve {
            rows.push(ExportRow::geographic(
                "triple",
                label,
                *c,
                geographic_point(&base, c)?.base(),
            ));
        }
    }
    rows.push(ExportRow::geographic(
        "triple",
        "center",
        tc.center,
        geographic_point(&base, &tc.center)?.base(),
    ));
    Ok(rows)
}

/// `Sigma_0` sections of `I_0^+`, `I_0^-`, `I_0^*` and the arcs of `c_0`.
pub fn export_c0(theta: f64, n: usize) -> Result<Vec<ExportRow>> {
    let mut rows = Vec::new();
    for id in [SphereId::plus(0), SphereId::minus(0), SphereId::star(0)] {
        let label = id.to_string();
        for p in section_circle(&sphere_of(id, theta), SIGMA_0, n) {
            rows.push(ExportRow::point("section", &label, p));
        }
    }
    let curve = sigma_curve(theta, 0, n)?;
    for arc in [&curve.plus_arc, &curve.minus_arc] {
        for p in &arc.samples {
            rows.push(ExportRow::point("arc", &arc.label, *p));
        }
    }
    for (i, p) in curve.endpoints.iter().enumerate() {
        rows.push(ExportRow::point("corner", &format!("corner{i}"), *p));
    }
    Ok(rows)
}

/// The `T`-invariant R-circle over `x` in `[-3/2, 1/2]`.
pub fn export_rcircle(n: usize) -> Vec<ExportRow> {
    let n = n.max(2);
    (0..n)
        .map(|i| {
            ExportRow::point(
                "rcircle",
                "L",
                line_l(-1.5 + 2.0 * i as f64 / (n - 1) as f64),
            )
        })
        .collect()
}

/// Face boundary loops of a complex; vertices at infinity are dropped.
pub fn complex_mesh(cx: &CellComplex) -> MeshObject {
    let finite: Vec<(String, HeisenbergPoint)> = cx
        .vertices
        .iter()
        .filter_map(|v| Some((v.label.clone(), v.position.finite()?)))
        .collect();
    let index = |l: &str| finite.iter().position(|(k, _)| k == l);
    let lines = cx
        .faces
        .iter()
        .map(|f| {
            let mut l: Vec<usize> = f.vertices.iter().filter_map(|v| index(v)).collect();
            if l.len() == f.vertices.len() {
                if let Some(&first) = l.first() {
                    l.push(first);
                }
            }
            l
        })
        .collect();
    MeshObject {
        name: "complex".into(),
        vertices: finite.iter().map(|(_, p)| xyt(p)).collect(),
        faces: Vec::new(),
        lines,
    }
}

/// JSON of the tube complex.
pub fn complex_json(group: &TriangleGroup) -> Result<String> {
    Ok(serde_json::to_string_pretty(&tube_complex(group)?)?)
}

/// JSON of `P` with its pairings.
pub fn polyhedron_json(group: &TriangleGroup) -> Result<String> {
    Ok(serde_json::to_string_pretty(&polyhedron_p(group)?)?)
}

/// JSON of the named points.
pub fn points_json(group: &TriangleGroup) -> Result<String> {
    Ok(serde_json::to_string_pretty(&named_points(group)?)?)
}

/// Figures with committed golden metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Double,
    Triple,
    Cross,
    Curves,
    Fd,
}

impl Figure {
    pub const ALL: [Figure; 5] = [
        Figure::Double,
        Figure::Triple,
        Figure::Cross,
        Figure::Curves,
        Figure::Fd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Double => "double",
            Figure::Triple => "triple",
            Figure::Cross => "cross",
            Figure::Curves => "curves",
            Figure::Fd => "fd",
        }
    }

    /// Parameter values the figure is drawn at.
    pub fn thetas(self) -> Vec<f64> {
        match self {
            Figure::Double | Figure::Triple | Figure::Cross => {
                vec![0.0, std::f64::consts::FRAC_PI_3]
            }
            Figure::Curves | Figure::Fd => vec![std::f64::consts::FRAC_PI_3],
        }
    }
}

/// Grid used for golden figure exports.
pub const FIGURE_GRID: usize = 96;

/// Point count and `(x, y, t)` bounding box of one figure export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureMeta {
    pub figure: Figure,
    pub theta: f64,
    pub points: usize,
    pub min: [f64; 3],
    pub max: [f64; 3],
}

fn bbox(points: impl Iterator<Item = [f64; 3]>) -> (usize, [f64; 3], [f64; 3]) {
    let mut n = 0;
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in points {
        n += 1;
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    (n, lo, hi)
}

/// CSV rows or OBJ objects of a figure export.
pub enum FigureData {
    Rows(Vec<ExportRow>),
    Mesh(Vec<MeshObject>),
}

/// Export data for `figure` at `theta` on a `grid`-sized sampling.
pub fn figure_data(figure: Figure, theta: f64, grid: usize) -> Result<FigureData> {
    let tg = TraceGrid::square(grid);
    Ok(match figure {
        Figure::Double => FigureData::Rows(export_giraud(
            theta,
            &[SphereId::minus(-1), SphereId::star(0)],
            tg,
        )),
        Figure::Triple => FigureData::Rows(export_giraud(
            theta,
            &[SphereId::minus(0), SphereId::star(0)],
            tg,
        )),
        Figure::Cross => FigureData::Rows(export_triple_curves(theta, grid)?),
        Figure::Curves => FigureData::Rows(export_c0(theta, 4 * grid)?),
        Figure::Fd => {
            let mut objs = export_spheres(theta, 1, grid / 4)?;
            let line: Vec<HeisenbergPoint> = export_rcircle(grid)
                .iter()
                .map(|r| HeisenbergPoint::new(crate::hermitian::c(r.x, r.y), r.t))
                .collect();
            objs.push(MeshObject::polyline("L", &line, false));
            FigureData::Mesh(objs)
        }
    })
}

/// Metadata of a figure export.
pub fn figure_meta(figure: Figure, theta: f64, grid: usize) -> Result<FigureMeta> {
    let (points, min, max) = match figure_data(figure, theta, grid)? {
        FigureData::Rows(rows) => bbox(rows.iter().map(|r| [r.x, r.y, r.t])),
        FigureData::Mesh(objs) => bbox(objs.iter().flat_map(|o| o.vertices.iter().copied())),
    };
    Ok(FigureMeta {
        figure,
        theta,
        points,
        min,
        max,
    })
}

/// Tolerance on golden bounding boxes, relative to the box extent.
pub const GOLDEN_TOL: f64 = 1e-9;

impl FigureMeta {
    /// Same figure, parameter and point count, and bounding boxes within
    /// `GOLDEN_TOL`.
    pub fn matches(&self, other: &FigureMeta) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= GOLDEN_TOL * (1.0 + a.abs().max(b.abs()));
        self.figure == other.figure
            && close(self.theta, other.theta)
            && self.points == other.points
            && (0..3).all(|k| close(self.min[k], other.min[k]) && close(self.max[k], other.max[k]))
    }
}

/// Metadata of every parameter value of `figure` at the golden grid.
pub fn figure_metas(figure: Figure) -> Result<Vec<FigureMeta>> {
    figure
        .thetas()
        .into_iter()
        .map(|t| figure_meta(figure, t, FIGURE_GRID))
        .collect()
}

/// Read committed metadata from `dir/<figure>.json`.
pub fn read_golden(dir: &Path, figure: Figure) -> Result<Vec<FigureMeta>> {
    let text = std::fs::read_to_string(dir.join(format!("{}.json", figure.name())))?;
    Ok(serde_json::from_str(&text)?)
}

/// Write metadata to `dir/<figure>.json`.
pub fn write_golden(dir: &Path, figure: Figure, metas: &[FigureMeta]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let text = serde_json::to_string_pretty(metas)? + "\n";
    std::fs::write(dir.join(format!("{}.json", figure.name())), text)?;
    Ok(())
}

/// Write a figure export to `dir` as `<name>[-<theta>].csv|obj`.
pub fn write_figure(
    figure: Figure,
    theta: f64,
    grid: usize,
    dir: &Path,
) -> Result<std::path::PathBuf> {
    std::fs::create_dir_all(dir)?;
    let stem = format!("{}-{theta:.6}", figure.name());
    let (path, text) = match figure_data(figure, theta, grid)? {
        FigureData::Rows(rows) => (dir.join(format!("{stem}.csv")), csv_string(&rows)?),
        FigureData::Mesh(objs) => (dir.join(format!("{stem}.obj")), obj_string(&objs)),
    };
    std::fs::write(&path, text)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_3;

    #[test]
    fn csv_header_and_empty_fields() {
        let s = csv_string(&[ExportRow::point("k", "l", HeisenbergPoint::origin())]).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("kind,label,alpha,beta,w,x,y,t"));
        assert_eq!(lines.next(), Some("k,l,,,,0.0,0.0,0.0"));
        assert_eq!(
            csv_string(&[]).unwrap().trim(),
            "kind,label,alpha,beta,w,x,y,t"
        );
    }

    #[test]
    fn sphere_mesh_lies_on_the_sphere() {
        let s = sphere_of(SphereId::star(1), FRAC_PI_3);
        let m = sphere_mesh(&s, 8).unwrap();
        assert_eq!(m.vertices.len(), 9 * 16);
        for v in &m.vertices {
            let p = HeisenbergPoint::new(crate::hermitian::c(v[0], v[1]), v[2]);
            assert!(side_of(p, &s).abs() < 1e-12);
        }
        let obj = obj_string(&[m]);
        assert!(obj.starts_with("o star1\nv "));
        assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 8 * 16);
    }

    #[test]
    fn ideal_crossings_are_on_both_spheres() {
        let base = sphere_of(SphereId::plus(0), 0.0);
        let other = sphere_of(SphereId::minus(-1), 0.0);
        let pts = ideal_crossings(&base, &other, TraceGrid::square(32));
        assert!(!pts.is_empty());
        for (_, p) in pts {
            assert!(side_of(p, &base).abs() < 1e-9 && side_of(p, &other).abs() < 1e-9);
        }
    }

    #[test]
    fn exports_are_deterministic() {
        let a = figure_meta(Figure::Curves, FRAC_PI_3, 32).unwrap();
        let b = figure_meta(Figure::Curves, FRAC_PI_3, 32).unwrap();
        assert_eq!(a, b);
        assert!(a.points > 0);
    }
}
