//! Hermitian linear algebra on C^3: the Siegel and ball forms, the Cayley
//! transform, projective comparison and the Bergman distance.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Column vector of homogeneous coordinates.
pub type CVec3 = Vector3<Complex64>;
/// Complex 3x3 matrix.
pub type CMat3 = Matrix3<Complex64>;

/// Shorthand for a complex number.
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Real number as a complex number.
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `e^{i x}`.
pub fn cis(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

/// Primitive cube root of unity `(-1 + i sqrt 3) / 2`.
pub fn omega() -> Complex64 {
    c(-0.5, 3f64.sqrt() / 2.0)
}

/// Largest entry modulus of a vector.
pub fn vec_max_abs(v: &CVec3) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Largest entry modulus of a matrix.
pub fn mat_max_abs(m: &CMat3) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// A fixed Hermitian matrix defining a form `<z, w> = w* F z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianForm {
    pub matrix: CMat3,
}

impl HermitianForm {
    /// The Siegel form `H` with ones on the anti-diagonal.
    pub fn siegel() -> Self {
        let o = re(0.0);
        let l = re(1.0);
        HermitianForm {
            matrix: Matrix3::new(o, o, l, o, l, o, l, o, o),
        }
    }

    /// The ball form `J = diag(1, 1, -1)`.
    pub fn ball() -> Self {
        HermitianForm {
            matrix: Matrix3::from_diagonal(&Vector3::new(re(1.0), re(1.0), re(-1.0))),
        }
    }

    /// `<z, w> = w* F z`.
    pub fn product(&self, z: &CVec3, w: &CVec3) -> Complex64 {
        (w.adjoint() * self.matrix * z)[(0, 0)]
    }

    /// Entrywise residual of `A* F A - F`.
    pub fn unitarity_residual(&self, a: &CMat3) -> f64 {
        mat_max_abs(&(a.adjoint() * self.matrix * a - self.matrix))
    }
}

/// Hermitian product `<z, w>` for the given form.
pub fn hermitian_product(z: &CVec3, w: &CVec3, form: &HermitianForm) -> Complex64 {
    form.product(z, w)
}

/// Hermitian product for the Siegel form `H`.
pub fn h_product(z: &CVec3, w: &CVec3) -> Complex64 {
    // w* H z with H the anti-diagonal, written out to avoid a matrix product.
    z[0] * w[2].conj() + z[1] * w[1].conj() + z[2] * w[0].conj()
}

/// Direction of the Cayley transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CayleyDirection {
    ToBall,
    ToSiegel,
}

/// The Cayley matrix; it squares to the identity and satisfies `C* H C = J`.
pub fn cayley_matrix() -> CMat3 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let o = re(0.0);
    Matrix3::new(re(s), o, re(s), o, re(1.0), o, re(s), o, re(-s))
}

/// Apply the Cayley transform in either direction.
pub fn cayley_transform(p: &CVec3, direction: CayleyDirection) -> CVec3 {
    // C is its own inverse, so both directions use the same matrix.
    match direction {
        CayleyDirection::ToBall | CayleyDirection::ToSiegel => cayley_matrix() * p,
    }
}

/// Bergman distance between two interior points given by lifts.
pub fn bergman_distance(u: &CVec3, v: &CVec3) -> Result<f64> {
    let uu = h_product(u, u).re;
    let vv = h_product(v, v).re;
    for (x, w) in [(uu, u), (vv, v)] {
        let scale = vec_max_abs(w).powi(2);
        if x >= -1e-12 * scale {
            return Err(Error::NotInterior { self_product: x });
        }
    }
    let cosh2 = (h_product(u, v) * h_product(v, u)).re / (uu * vv);
    Ok(2.0 * cosh2.max(1.0).sqrt().acosh())
}

/// Divide a matrix by the cube root of its determinant whose argument lies in
/// `(-pi/3, pi/3]`.
pub fn su_normalize(m: &CMat3) -> Result<CMat3> {
    let det = m.determinant();
    if det.norm() < 1e-300 {
        return Err(Error::ZeroInput);
    }
    let root = Complex64::from_polar(det.norm().cbrt(), det.arg() / 3.0);
    Ok(m.map(|x| x / root))
}

/// Objects compared up to a scalar.
pub trait Projective {
    /// Residual of the best scalar match, in the max-entry norm.
    fn projective_residual(&self, other: &Self) -> Result<f64>;
}

impl Projective for CVec3 {
    fn projective_residual(&self, other: &Self) -> Result<f64> {
        let (na, nb) = (vec_max_abs(self), vec_max_abs(other));
        if na == 0.0 || nb == 0.0 {
            return Err(Error::ZeroInput);
        }
        let a = self.unscale(na);
        let b = other.unscale(nb);
        let lambda = b.dotc(&a) / b.dotc(&b);
        Ok(vec_max_abs(&(a - b * lambda)))
    }
}

impl Projective for CMat3 {
    fn projective_residual(&self, other: &Self) -> Result<f64> {
        let a = su_normalize(self)?;
        let b = su_normalize(other)?;
        let w = omega();
        Ok([re(1.0), w, w * w]
            .iter()
            .map(|&l| mat_max_abs(&(a - b * l)))
            .fold(f64::INFINITY, f64::min))
    }
}

/// Projective equality with its residual.
pub fn projective_equal<P: Projective>(a: &P, b: &P, tol: f64) -> Result<(bool, f64)> {
    let r = a.projective_residual(b)?;
    Ok((r <= tol, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n3_self_product_is_two() {
        let n3 = Vector3::new(re(1.0), re(0.0), re(1.0));
        let h = HermitianForm::siegel();
        assert!((hermitian_product(&n3, &n3, &h) - re(2.0)).norm() < 1e-15);
    }

    #[test]
    fn infinity_is_null() {
        let q = Vector3::new(re(1.0), re(0.0), re(0.0));
        assert_eq!(h_product(&q, &q), re(0.0));
    }

    #[test]
    fn cayley_conjugates_h_to_j() {
        let cm = cayley_matrix();
        let lhs = cm.adjoint() * HermitianForm::siegel().matrix * cm;
        assert!(mat_max_abs(&(lhs - HermitianForm::ball().matrix)) < 1e-12);
    }

    #[test]
    fn cayley_first_column() {
        let q = Vector3::new(re(1.0), re(0.0), re(0.0));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let img = cayley_transform(&q, CayleyDirection::ToBall);
        assert!(vec_max_abs(&(img - Vector3::new(re(s), re(0.0), re(s)))) < 1e-15);
    }

    #[test]
    fn cayley_sends_fixed_point_of_s_to_vertical_axis() {
        let theta = 0.7;
        let p = Vector3::new(re(-1.0), cis(theta), re(1.0));
        let b = cayley_transform(&p, CayleyDirection::ToBall);
        let b = b / b[2];
        let expected = Vector3::new(re(0.0), -cis(theta) / 2f64.sqrt(), re(1.0));
        assert!(vec_max_abs(&(b - expected)) < 1e-12);
    }

    #[test]
    fn cayley_round_trip() {
        let p = Vector3::new(c(0.3, -1.0), c(2.0, 0.5), c(-0.7, 0.1));
        let b = cayley_transform(&p, CayleyDirection::ToBall);
        let back = cayley_transform(&b, CayleyDirection::ToSiegel);
        assert!(vec_max_abs(&(back - p)) < 1e-12);
    }

    #[test]
    fn bergman_horospherical_pair() {
        let u = Vector3::new(re(-0.5), re(0.0), re(1.0));
        let v = Vector3::new(re(-2.0), re(0.0), re(1.0));
        let d = bergman_distance(&u, &v).unwrap();
        let cosh2 = (d / 2.0).cosh().powi(2);
        assert!((cosh2 - 25.0 / 16.0).abs() < 1e-12);
        assert!(bergman_distance(&u, &u).unwrap() < 1e-7);
    }

    #[test]
    fn bergman_rejects_boundary() {
        let p = Vector3::new(re(0.0), re(0.0), re(1.0));
        let u = Vector3::new(re(-0.5), re(0.0), re(1.0));
        assert!(matches!(
            bergman_distance(&p, &u),
            Err(Error::NotInterior { .. })
        ));
    }

    #[test]
    fn projective_vectors() {
        let a = Vector3::new(re(1.0), re(2.0), re(3.0));
        let b = Vector3::new(c(0.0, 1.0), c(0.0, 2.0), c(0.0, 3.0));
        let (eq, r) = projective_equal(&a, &b, 1e-12).unwrap();
        assert!(eq && r < 1e-15);
        let e1 = Vector3::new(re(1.0), re(0.0), re(0.0));
        let e2 = Vector3::new(re(0.0), re(1.0), re(0.0));
        assert!(!projective_equal(&e1, &e2, 1e-6).unwrap().0);
        assert!(matches!(
            projective_equal(&e1, &CVec3::zeros(), 1e-6),
            Err(Error::ZeroInput)
        ));
    }

    #[test]
    fn projective_matrices_modulo_center() {
        let m = Matrix3::new(
            c(1.0, 0.5),
            re(2.0),
            re(0.0),
            re(0.0),
            c(0.0, 1.0),
            re(1.0),
            re(3.0),
            re(0.0),
            re(1.0),
        );
        let w = omega();
        let (eq, r) = projective_equal(&m, &m.map(|x| x * w * 2.5), 1e-12).unwrap();
        assert!(eq, "residual {r}");
    }

    #[test]
    fn su_normalization_has_unit_determinant() {
        let m = Matrix3::new(
            c(1.0, 0.5),
            re(2.0),
            re(0.0),
            re(0.0),
            c(0.0, 1.0),
            re(1.0),
            re(3.0),
            re(0.0),
            re(1.0),
        );
        let n = su_normalize(&m).unwrap();
        assert!((n.determinant() - re(1.0)).norm() < 1e-12);
    }
}
