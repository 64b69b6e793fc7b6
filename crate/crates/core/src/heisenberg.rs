//! The boundary `N u {q_inf}`: Heisenberg group law, standard lifts,
//! horospherical coordinates, the extended Cygan distance and sampling of
//! C-circles and R-circles.

use nalgebra::Vector3;
use num_complex::Complex64;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hermitian::{c, cis, h_product, re, vec_max_abs, CVec3};

/// Relative size below which the third lift coordinate counts as zero.
pub const INFINITY_THRESHOLD: f64 = 1e-10;

/// A point `[z, t]` of the Heisenberg group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeisenbergPoint {
    pub z: Complex64,
    pub t: f64,
}

impl HeisenbergPoint {
    pub fn new(z: Complex64, t: f64) -> Self {
        HeisenbergPoint { z, t }
    }

    /// Identity `[0, 0]`.
    pub fn origin() -> Self {
        HeisenbergPoint::new(re(0.0), 0.0)
    }

    /// Group inverse `[-z, -t]`.
    pub fn inverse(&self) -> Self {
        HeisenbergPoint::new(-self.z, -self.t)
    }

    /// The point at height `u` above this one.
    pub fn at_height(&self, u: f64) -> HorosphericalPoint {
        HorosphericalPoint {
            z: self.z,
            t: self.t,
            u,
        }
    }

    /// Max of the coordinate differences, used for point comparisons.
    pub fn coord_distance(&self, other: &HeisenbergPoint) -> f64 {
        (self.z - other.z).norm().max((self.t - other.t).abs())
    }
}

impl Serialize for HeisenbergPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HeisenbergPoint", 3)?;
        st.serialize_field("x", &self.z.re)?;
        st.serialize_field("y", &self.z.im)?;
        st.serialize_field("t", &self.t)?;
        st.end()
    }
}

/// A boundary point: `q_inf` or a finite Heisenberg point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BoundaryPoint {
    Infinity,
    Finite(HeisenbergPoint),
}

impl BoundaryPoint {
    pub fn finite(&self) -> Option<HeisenbergPoint> {
        match self {
            BoundaryPoint::Infinity => None,
            BoundaryPoint::Finite(p) => Some(*p),
        }
    }

    /// Coordinate distance, infinite when exactly one side is `q_inf`.
    pub fn coord_distance(&self, other: &BoundaryPoint) -> f64 {
        match (self, other) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => 0.0,
            (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => a.coord_distance(b),
            _ => f64::INFINITY,
        }
    }
}

/// Horospherical coordinates `(z, t, u)` with `u >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorosphericalPoint {
    pub z: Complex64,
    pub t: f64,
    pub u: f64,
}

impl HorosphericalPoint {
    pub fn new(z: Complex64, t: f64, u: f64) -> Self {
        HorosphericalPoint { z, t, u }
    }

    /// The boundary point below this one.
    pub fn base(&self) -> HeisenbergPoint {
        HeisenbergPoint::new(self.z, self.t)
    }
}

impl Serialize for HorosphericalPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HorosphericalPoint", 4)?;
        st.serialize_field("x", &self.z.re)?;
        st.serialize_field("y", &self.z.im)?;
        st.serialize_field("t", &self.t)?;
        st.serialize_field("u", &self.u)?;
        st.end()
    }
}

/// Any point of the closed Siegel domain: `q_inf` or a point `(z, t, u)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Point {
    Infinity,
    Finite(HorosphericalPoint),
}

impl Point {
    /// The standard lift of this point.
    pub fn lift(&self) -> CVec3 {
        standard_lift(*self)
    }

    pub fn finite(&self) -> Option<HorosphericalPoint> {
        match self {
            Point::Infinity => None,
            Point::Finite(p) => Some(*p),
        }
    }

    /// The boundary point when `u` is zero.
    pub fn as_boundary(&self) -> Option<BoundaryPoint> {
        match self {
            Point::Infinity => Some(BoundaryPoint::Infinity),
            Point::Finite(p) if p.u == 0.0 => Some(BoundaryPoint::Finite(p.base())),
            Point::Finite(_) => None,
        }
    }
}

impl From<HeisenbergPoint> for Point {
    fn from(p: HeisenbergPoint) -> Self {
        Point::Finite(p.at_height(0.0))
    }
}

impl From<HorosphericalPoint> for Point {
    fn from(p: HorosphericalPoint) -> Self {
        Point::Finite(p)
    }
}

impl From<BoundaryPoint> for Point {
    fn from(p: BoundaryPoint) -> Self {
        match p {
            BoundaryPoint::Infinity => Point::Infinity,
            BoundaryPoint::Finite(h) => h.into(),
        }
    }
}

/// Group law `[z,t].[w,s] = [z+w, t+s-2 Im(conj(z) w)]`.
pub fn heisenberg_product(a: &HeisenbergPoint, b: &HeisenbergPoint) -> HeisenbergPoint {
    HeisenbergPoint::new(a.z + b.z, a.t + b.t - 2.0 * (a.z.conj() * b.z).im)
}

/// Standard lift: `q_inf -> (1,0,0)`, `(z,t,u) -> ((-|z|^2-u+it)/2, z, 1)`.
pub fn standard_lift(p: impl Into<Point>) -> CVec3 {
    match p.into() {
        Point::Infinity => Vector3::new(re(1.0), re(0.0), re(0.0)),
        Point::Finite(q) => Vector3::new(c((-q.z.norm_sqr() - q.u) / 2.0, q.t / 2.0), q.z, re(1.0)),
    }
}

/// Inverse of the standard lift on the null and negative cones.
pub fn from_lift(v: &CVec3) -> Result<Point> {
    let scale = vec_max_abs(v);
    if scale == 0.0 {
        return Err(Error::ZeroInput);
    }
    if v[2].norm() <= INFINITY_THRESHOLD * scale {
        let null = h_product(v, v).re;
        if null > INFINITY_THRESHOLD * scale * scale {
            return Err(Error::PositiveVector { self_product: null });
        }
        return Ok(Point::Infinity);
    }
    let w = v / v[2];
    let z = w[1];
    let t = 2.0 * w[0].im;
    let u = -2.0 * w[0].re - z.norm_sqr();
    let tol = INFINITY_THRESHOLD * vec_max_abs(&w).max(1.0).powi(2);
    if u < -tol {
        return Err(Error::PositiveVector { self_product: -u });
    }
    // Heights within round-off of zero are boundary points.
    let u = if u.abs() <= tol { 0.0 } else { u };
    Ok(Point::Finite(HorosphericalPoint::new(z, t, u)))
}

/// Boundary point of a null lift; interior lifts are projected to `u = 0`.
pub fn boundary_from_lift(v: &CVec3) -> Result<BoundaryPoint> {
    Ok(match from_lift(v)? {
        Point::Infinity => BoundaryPoint::Infinity,
        Point::Finite(p) => BoundaryPoint::Finite(p.base()),
    })
}

/// Extended Cygan distance `|2 <p, q>|^{1/2}` on standard lifts.
pub fn cygan_distance(p: impl Into<Point>, q: impl Into<Point>) -> Result<f64> {
    Ok(cygan_distance_sq(p, q)?.sqrt())
}

/// Square of the extended Cygan distance, `|2 <p, q>|`.
pub fn cygan_distance_sq(p: impl Into<Point>, q: impl Into<Point>) -> Result<f64> {
    let (p, q) = (p.into(), q.into());
    if p == Point::Infinity || q == Point::Infinity {
        return Err(Error::InfinityArgument);
    }
    Ok((2.0 * h_product(&p.lift(), &q.lift())).norm())
}

/// Coordinate form of the extended Cygan distance,
/// `||z-w|^2 + |u-v| - i(t - s + 2 Im(z conj w))|^{1/2}`.
pub fn cygan_distance_coords(p: &HorosphericalPoint, q: &HorosphericalPoint) -> f64 {
    let a = (p.z - q.z).norm_sqr() + (p.u - q.u).abs();
    let b = p.t - q.t + 2.0 * (p.z * q.z.conj()).im;
    c(a, -b).norm().sqrt()
}

/// A C-circle in Heisenberg coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CCircle {
    /// Vertical line `{[z, t]}` sampled for `t` in the range.
    Vertical { z: Complex64, t_range: (f64, f64) },
    /// Ellipse `[c, s] . [r e^{i phi}, 0]`.
    Finite {
        center: HeisenbergPoint,
        radius: f64,
    },
}

/// An R-circle in Heisenberg coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RCircle {
    /// Straight line `[c, s] . [x e^{i phi}, 0]` sampled for `x` in the range.
    Line {
        base: HeisenbergPoint,
        phi: f64,
        x_range: (f64, f64),
    },
    /// Lemniscate: ideal boundary of the meridian `beta` of the Cygan sphere
    /// of the given center and radius.
    Lemniscate {
        center: HeisenbergPoint,
        radius: f64,
        beta: f64,
    },
}

impl RCircle {
    /// The T-invariant line `L = {[x + i sqrt3/2, sqrt3 x]}`.
    pub fn t_invariant_line(x_range: (f64, f64)) -> Self {
        RCircle::Line {
            base: HeisenbergPoint::new(c(0.0, 3f64.sqrt() / 2.0), 0.0),
            phi: 0.0,
            x_range,
        }
    }
}

fn lerp(range: (f64, f64), i: usize, n: usize) -> f64 {
    range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64
}

/// `n >= 2` samples of a C-circle; closed curves are sampled without repeating
/// the start point.
pub fn sample_ccircle(circle: &CCircle, n: usize) -> Vec<HeisenbergPoint> {
    let n = n.max(2);
    match *circle {
        CCircle::Vertical { z, t_range } => (0..n)
            .map(|i| HeisenbergPoint::new(z, lerp(t_range, i, n)))
            .collect(),
        CCircle::Finite { center, radius } => (0..n)
            .map(|i| {
                let phi = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                heisenberg_product(&center, &HeisenbergPoint::new(cis(phi) * radius, 0.0))
            })
            .collect(),
    }
}

/// `n >= 2` samples of an R-circle.
pub fn sample_rcircle(circle: &RCircle, n: usize) -> Vec<HeisenbergPoint> {
    use std::f64::consts::{FRAC_PI_2, PI};
    let n = n.max(2);
    match *circle {
        RCircle::Line { base, phi, x_range } => (0..n)
            .map(|i| {
                let x = lerp(x_range, i, n);
                heisenberg_product(&base, &HeisenbergPoint::new(cis(phi) * x, 0.0))
            })
            .collect(),
        RCircle::Lemniscate {
            center,
            radius,
            beta,
        } => (0..n)
            .map(|i| {
                let psi = 2.0 * PI * i as f64 / n as f64;
                let (alpha, sign) = if psi <= PI {
                    (psi - FRAC_PI_2, 1.0)
                } else {
                    (3.0 * FRAC_PI_2 - psi, -1.0)
                };
                let w = sign * alpha.cos().max(0.0).sqrt();
                let lift = Vector3::new(
                    -cis(-alpha) * (radius * radius / 2.0),
                    cis(-alpha / 2.0 + beta) * (radius * w),
                    re(1.0),
                );
                let p = from_lift(&lift)
                    .ok()
                    .and_then(|p| p.finite())
                    .map(|p| p.base())
                    .unwrap_or_else(HeisenbergPoint::origin);
                heisenberg_product(&center, &p)
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn s3() -> f64 {
        3f64.sqrt()
    }

    #[test]
    fn product_examples() {
        let z = HeisenbergPoint::new(c(1.0, -2.0), 0.5);
        assert_eq!(heisenberg_product(&HeisenbergPoint::origin(), &z), z);
        let a = HeisenbergPoint::new(re(2.0), 4.0 * s3());
        let b = HeisenbergPoint::new(c(-0.5, s3() / 2.0), -s3());
        let p = heisenberg_product(&a, &b);
        assert!(p.coord_distance(&HeisenbergPoint::new(c(1.5, s3() / 2.0), s3())) < 1e-14);
        let e = heisenberg_product(&z, &z.inverse());
        assert!(e.coord_distance(&HeisenbergPoint::origin()) < 1e-15);
    }

    #[test]
    fn lift_examples() {
        let o = standard_lift(HeisenbergPoint::origin());
        assert_eq!(o, Vector3::new(re(0.0), re(0.0), re(1.0)));
        assert_eq!(
            standard_lift(Point::Infinity),
            Vector3::new(re(1.0), re(0.0), re(0.0))
        );
        let p2 = HeisenbergPoint::new(cis(2.0 * PI / 3.0), -s3());
        let l = standard_lift(p2);
        let expected = Vector3::new(c(-0.5, -s3() / 2.0), cis(2.0 * PI / 3.0), re(1.0));
        assert!(vec_max_abs(&(l - expected)) < 1e-15);
        let back = from_lift(&expected).unwrap().finite().unwrap();
        assert!(back.base().coord_distance(&p2) < 1e-14 && back.u == 0.0);
    }

    #[test]
    fn from_lift_examples() {
        assert_eq!(
            from_lift(&Vector3::new(re(1.0), re(0.0), re(0.0))).unwrap(),
            Point::Infinity
        );
        let p = from_lift(&Vector3::new(re(0.0), re(0.0), re(5.0))).unwrap();
        assert_eq!(p, Point::from(HeisenbergPoint::origin()));
        assert!(matches!(
            from_lift(&Vector3::new(re(1.0), re(0.0), re(1.0))),
            Err(Error::PositiveVector { .. })
        ));
    }

    #[test]
    fn cygan_examples() {
        let o = HeisenbergPoint::origin();
        let d = cygan_distance(o, HeisenbergPoint::new(re(1.0), 0.0)).unwrap();
        assert!((d - 1.0).abs() < 1e-15);
        let d = cygan_distance(o, o.at_height(0.36)).unwrap();
        assert!((d - 0.6).abs() < 1e-15);
        assert!(matches!(
            cygan_distance(o, Point::Infinity),
            Err(Error::InfinityArgument)
        ));
    }

    #[test]
    fn sampling_examples() {
        let z = cis(0.4);
        let v = sample_ccircle(
            &CCircle::Vertical {
                z,
                t_range: (-1.0, 1.0),
            },
            3,
        );
        assert!(v.len() == 3 && v.iter().all(|p| p.z == z));
        let l = sample_rcircle(&RCircle::t_invariant_line((0.0, 0.0)), 2);
        assert!(l[0].coord_distance(&HeisenbergPoint::new(c(0.0, s3() / 2.0), 0.0)) < 1e-15);
        let x = sample_rcircle(
            &RCircle::Line {
                base: HeisenbergPoint::origin(),
                phi: 0.0,
                x_range: (-1.0, 1.0),
            },
            2,
        );
        assert_eq!(x[0], HeisenbergPoint::new(re(-1.0), 0.0));
        assert_eq!(x[1], HeisenbergPoint::new(re(1.0), 0.0));
    }

    #[test]
    fn finite_curves_lie_on_expected_sets() {
        let center = HeisenbergPoint::new(c(0.3, -0.2), 1.1);
        for p in sample_ccircle(
            &CCircle::Finite {
                center,
                radius: 0.7,
            },
            16,
        ) {
            let rel = heisenberg_product(&center.inverse(), &p);
            assert!((rel.z.norm() - 0.7).abs() < 1e-12 && rel.t.abs() < 1e-12);
        }
        let lem = RCircle::Lemniscate {
            center,
            radius: 1.3,
            beta: 0.4,
        };
        for p in sample_rcircle(&lem, 32) {
            let d = cygan_distance(p, center).unwrap();
            assert!((d - 1.3).abs() < 1e-12);
        }
    }
}
