//! Isometries of the complex hyperbolic plane: group elements, trace based
//! classification, complex involutions, Heisenberg translations and boundary
//! fixed points.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::heisenberg::{
    boundary_from_lift, from_lift, standard_lift, BoundaryPoint, HeisenbergPoint, Point,
};
use crate::hermitian::{
    c, h_product, mat_max_abs, omega, re, su_normalize, vec_max_abs, CMat3, CVec3, HermitianForm,
    Projective,
};
use crate::triangle::Word;

/// Tolerance for "real trace" and "trace equals 3".
pub const TRACE_TOL: f64 = 1e-9;
/// Default cap for the elliptic order search.
pub const MAX_ELLIPTIC_ORDER: u32 = 12;
/// Tolerance for a power being the projective identity.
const ORDER_TOL: f64 = 1e-8;
/// Tolerance for an eigenvalue modulus to count as 1.
const UNIT_MODULUS_TOL: f64 = 1e-7;

/// Isometry type of an element of PU(2,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IsometryClass {
    Identity,
    Loxodromic,
    Parabolic { unipotent: bool },
    Elliptic { order: Option<u32> },
}

/// A normalized SU(2,1) matrix together with the word it was evaluated from.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    pub matrix: CMat3,
    pub word: Word,
}

impl GroupElement {
    /// Normalize `matrix` into SU(2,1).
    pub fn new(matrix: CMat3, word: Word) -> Result<Self> {
        Ok(GroupElement {
            matrix: su_normalize(&matrix)?,
            word,
        })
    }

    pub fn identity() -> Self {
        GroupElement {
            matrix: CMat3::identity(),
            word: Word::empty(),
        }
    }

    /// Inverse through `A^{-1} = H A* H`, exact for H-unitary matrices.
    pub fn inverse(&self) -> Self {
        let h = HermitianForm::siegel().matrix;
        GroupElement {
            matrix: h * self.matrix.adjoint() * h,
            word: self.word.inverse(),
        }
    }

    /// Product `self * other`.
    pub fn mul(&self, other: &GroupElement) -> Self {
        GroupElement {
            matrix: self.matrix * other.matrix,
            word: self.word.concat(&other.word),
        }
    }

    /// Image of a point.
    pub fn apply(&self, p: impl Into<Point>) -> Result<Point> {
        from_lift(&(self.matrix * standard_lift(p)))
    }

    /// Image of a boundary point.
    pub fn apply_boundary(&self, p: BoundaryPoint) -> Result<BoundaryPoint> {
        boundary_from_lift(&(self.matrix * standard_lift(p)))
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Residual of `A* H A - H`.
    pub fn unitarity_residual(&self) -> f64 {
        HermitianForm::siegel().unitarity_residual(&self.matrix)
    }

    /// Projective distance to the identity.
    pub fn identity_residual(&self) -> f64 {
        self.matrix
            .projective_residual(&CMat3::identity())
            .unwrap_or(f64::INFINITY)
    }

    /// `g^n`.
    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(GroupElement::identity(), |acc, _| acc.mul(self))
    }
}

/// Classify an H-unitary element.
pub fn classify(g: &GroupElement, max_order: u32) -> Result<IsometryClass> {
    let scale = mat_max_abs(&g.matrix).max(1.0).powi(2);
    let res = g.unitarity_residual();
    if res > 1e-8 * scale {
        return Err(Error::NonUnitary { residual: res });
    }
    let tr = g.trace();
    if tr.im.abs() < TRACE_TOL {
        let x = tr.re;
        if (x - 3.0).abs() < TRACE_TOL {
            return Ok(if g.identity_residual() < ORDER_TOL {
                IsometryClass::Identity
            } else {
                IsometryClass::Parabolic { unipotent: true }
            });
        }
        if !(-1.0 - TRACE_TOL..=3.0).contains(&x) {
            return Ok(IsometryClass::Loxodromic);
        }
        return Ok(IsometryClass::Elliptic {
            order: elliptic_order(g, max_order),
        });
    }
    classify_by_eigenvalues(g, max_order)
}

fn classify_by_eigenvalues(g: &GroupElement, max_order: u32) -> Result<IsometryClass> {
    let ev = eigenvalues(&g.matrix);
    if ev.iter().any(|l| (l.norm() - 1.0).abs() > UNIT_MODULUS_TOL) {
        return Ok(IsometryClass::Loxodromic);
    }
    if g.identity_residual() < ORDER_TOL {
        return Ok(IsometryClass::Identity);
    }
    let scale = mat_max_abs(&g.matrix).max(1.0);
    let diagonalizable = ev.iter().all(|&l| {
        let mult = ev.iter().filter(|&&m| (m - l).norm() < 1e-5).count();
        mult == 1 || rank(&(g.matrix - CMat3::identity() * l), 1e-6 * scale) <= 3 - mult
    });
    if diagonalizable {
        return Ok(IsometryClass::Elliptic {
            order: elliptic_order(g, max_order),
        });
    }
    let all_equal = ev.iter().all(|&l| (l - ev[0]).norm() < 1e-5);
    Ok(IsometryClass::Parabolic {
        unipotent: all_equal,
    })
}

fn rank(m: &CMat3, tol: f64) -> usize {
    m.svd(false, false)
        .singular_values
        .iter()
        .filter(|&&s| s > tol)
        .count()
}

/// Least `n` in `2..=max_order` with `g^n` projectively the identity.
pub fn elliptic_order(g: &GroupElement, max_order: u32) -> Option<u32> {
    let mut acc = g.clone();
    for n in 2..=max_order {
        acc = acc.mul(g);
        if acc.identity_residual() < ORDER_TOL {
            return Some(n);
        }
    }
    None
}

/// Eigenvalues of a 3x3 matrix from the characteristic cubic, solved in closed
/// form and polished by Newton steps.
pub fn eigenvalues(m: &CMat3) -> [Complex64; 3] {
    let tr = m.trace();
    let minors = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)] + m[(0, 0)] * m[(2, 2)]
        - m[(0, 2)] * m[(2, 0)]
        + m[(1, 1)] * m[(2, 2)]
        - m[(1, 2)] * m[(2, 1)];
    let det = m.determinant();
    solve_monic_cubic(-tr, minors, -det)
}

/// Roots of `x^3 + a x^2 + b x + c`.
pub fn solve_monic_cubic(a: Complex64, b: Complex64, c0: Complex64) -> [Complex64; 3] {
    let p = b - a * a / 3.0;
    let q = a * a * a * (2.0 / 27.0) - a * b / 3.0 + c0;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    // Take the larger of the two candidates for u^3 to avoid cancellation.
    let u3 = {
        let plus = -q / 2.0 + disc;
        let minus = -q / 2.0 - disc;
        if plus.norm() >= minus.norm() {
            plus
        } else {
            minus
        }
    };
    let shift = -a / 3.0;
    let w = omega();
    let mut roots = if u3.norm() == 0.0 {
        [shift; 3]
    } else {
        let u = u3.powf(1.0 / 3.0);
        let mut r = [re(0.0); 3];
        let mut uk = u;
        for slot in r.iter_mut() {
            *slot = uk - p / (uk * 3.0) + shift;
            uk *= w;
        }
        r
    };
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let f = ((*r + a) * *r + b) * *r + c0;
            let df = (*r * 3.0 + a * 2.0) * *r + b;
            if df.norm() < 1e-8 {
                break;
            }
            let step = f / df;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *r -= step;
        }
    }
    roots
}

/// Complex involution `z -> -z + 2 <z,n>/<n,n> n` for a positive polar vector.
pub fn complex_involution(n: &CVec3, word: Word) -> Result<GroupElement> {
    let nn = h_product(n, n).re;
    if nn <= 1e-12 * vec_max_abs(n).powi(2) {
        return Err(Error::NonPositivePolar { self_product: nn });
    }
    let h = HermitianForm::siegel().matrix;
    let proj = n * (n.adjoint() * h);
    let m = -CMat3::identity() + proj * re(2.0 / nn);
    GroupElement::new(m, word)
}

/// Left Heisenberg translation by `[z, t]`.
pub fn heisenberg_translation(z: Complex64, t: f64) -> GroupElement {
    let o = re(0.0);
    let l = re(1.0);
    GroupElement {
        matrix: Matrix3::new(
            l,
            -z.conj(),
            c(-z.norm_sqr() / 2.0, t / 2.0),
            o,
            l,
            z,
            o,
            o,
            l,
        ),
        word: Word::empty(),
    }
}

/// Boundary fixed point(s): one for parabolic, two for loxodromic elements.
pub fn fixed_boundary_point(g: &GroupElement) -> Result<Vec<BoundaryPoint>> {
    match classify(g, MAX_ELLIPTIC_ORDER)? {
        IsometryClass::Elliptic { .. } => Err(Error::EllipticFixedPoint),
        IsometryClass::Identity => Err(Error::FixedPoint("identity fixes every point".into())),
        IsometryClass::Parabolic { .. } => Ok(vec![parabolic_fixed_point(&g.matrix)?]),
        IsometryClass::Loxodromic => {
            let ev = eigenvalues(&g.matrix);
            let mut out = Vec::new();
            for l in ev
                .iter()
                .filter(|l| (l.norm() - 1.0).abs() > UNIT_MODULUS_TOL)
            {
                let v = kernel_vector(&(g.matrix - CMat3::identity() * *l));
                out.push(boundary_from_lift(&v)?);
            }
            if out.len() != 2 {
                return Err(Error::FixedPoint(
                    "expected two loxodromic fixed points".into(),
                ));
            }
            Ok(out)
        }
    }
}

/// Fixed null vector of a parabolic matrix.
fn parabolic_fixed_point(m: &CMat3) -> Result<BoundaryPoint> {
    let tr = m.trace();
    let w = omega();
    let unit = [re(1.0), w, w * w]
        .into_iter()
        .find(|&l| (tr - l * 3.0).norm() < 1e-6);
    let v = match unit {
        Some(l) => {
            // Unipotent up to the center: N = m - l I is nilpotent and the
            // fixed line is the image of N^2, or of N when N^2 vanishes.
            let n = m - CMat3::identity() * l;
            let n2 = n * n;
            let scale = mat_max_abs(m).max(1.0);
            if mat_max_abs(&n2) > 1e-7 * scale * scale {
                largest_column(&n2)
            } else {
                largest_column(&n)
            }
        }
        None => {
            // Screw parabolic: the simple eigenvalue mu is well conditioned,
            // the double one follows from the trace.
            let ev = eigenvalues(m);
            let mu = (0..3)
                .map(|i| {
                    let others = (0..3).filter(|&j| j != i);
                    let gap = others
                        .map(|j| (ev[i] - ev[j]).norm())
                        .fold(f64::INFINITY, f64::min);
                    (gap, ev[i])
                })
                .max_by(|a, b| a.0.total_cmp(&b.0))
                .map(|x| x.1)
                .ok_or_else(|| Error::FixedPoint("no eigenvalues".into()))?;
            let lambda = (tr - mu) / 2.0;
            let id = CMat3::identity();
            largest_column(&((m - id * mu) * (m - id * lambda)))
        }
    };
    let null = h_product(&v, &v).norm() / vec_max_abs(&v).powi(2);
    if null > 1e-6 {
        return Err(Error::FixedPoint(format!(
            "fixed vector is not null (relative self product {null:e})"
        )));
    }
    boundary_from_lift(&v)
}

fn largest_column(m: &CMat3) -> CVec3 {
    (0..3)
        .map(|j| m.column(j).into_owned())
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or_else(CVec3::zeros)
}

/// A vector spanning the kernel of a rank-2 matrix: the largest cross product
/// of two of its rows.
pub fn kernel_vector(m: &CMat3) -> CVec3 {
    let rows: Vec<CVec3> = (0..3).map(|i| m.row(i).transpose()).collect();
    let cross = |a: &CVec3, b: &CVec3| {
        Vector3::new(
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        )
    };
    [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| cross(&rows[i], &rows[j]))
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or_else(CVec3::zeros)
}

/// Distance from `p` to its image under `g`, in coordinates.
pub fn fixed_residual(g: &GroupElement, p: BoundaryPoint) -> f64 {
    match g.apply_boundary(p) {
        Ok(q) => q.coord_distance(&p),
        Err(_) => f64::INFINITY,
    }
}

/// `[z, t]` as the image of the origin under `g`.
pub fn image_of_origin(g: &GroupElement) -> Result<BoundaryPoint> {
    g.apply_boundary(BoundaryPoint::Finite(HeisenbergPoint::origin()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::cis;

    #[test]
    fn translation_basics() {
        let id = heisenberg_translation(re(0.0), 0.0);
        assert!(mat_max_abs(&(id.matrix - CMat3::identity())) == 0.0);
        let g = heisenberg_translation(re(1.0), 2.0);
        let p = image_of_origin(&g).unwrap().finite().unwrap();
        assert!(p.coord_distance(&HeisenbergPoint::new(re(1.0), 2.0)) < 1e-15);
        assert_eq!(
            fixed_boundary_point(&g).unwrap(),
            vec![BoundaryPoint::Infinity]
        );
    }

    #[test]
    fn translation_realizes_group_law() {
        let a = HeisenbergPoint::new(c(0.4, -1.2), 0.3);
        let b = HeisenbergPoint::new(c(-2.0, 0.5), 1.7);
        let g = heisenberg_translation(a.z, a.t);
        let img = g
            .apply_boundary(BoundaryPoint::Finite(b))
            .unwrap()
            .finite()
            .unwrap();
        let expected = crate::heisenberg::heisenberg_product(&a, &b);
        assert!(img.coord_distance(&expected) < 1e-13);
    }

    #[test]
    fn involution_is_involutive_and_fixes_polar() {
        let n = Vector3::new(cis(0.3), re(1.0), re(0.0));
        let g = complex_involution(&n, Word::empty()).unwrap();
        assert!(g.mul(&g).identity_residual() < 1e-12);
        assert!((g.matrix * n).projective_residual(&n).unwrap() < 1e-12);
        let null = Vector3::new(re(1.0), re(0.0), re(0.0));
        assert!(complex_involution(&null, Word::empty()).is_err());
    }

    #[test]
    fn cubic_roots() {
        let roots = solve_monic_cubic(re(-6.0), re(11.0), re(-6.0));
        for target in [1.0, 2.0, 3.0] {
            assert!(roots.iter().any(|r| (r - re(target)).norm() < 1e-12));
        }
        let triple = solve_monic_cubic(re(-3.0), re(3.0), re(-1.0));
        assert!(triple.iter().all(|r| (r - re(1.0)).norm() < 1e-4));
    }

    #[test]
    fn loxodromic_fixed_points() {
        // A real diagonal boost in the Siegel model: diag(r, 1, 1/r).
        let r = 2.5;
        let m = Matrix3::from_diagonal(&Vector3::new(re(r), re(1.0), re(1.0 / r)));
        let g = GroupElement::new(m, Word::empty()).unwrap();
        assert_eq!(classify(&g, 12).unwrap(), IsometryClass::Loxodromic);
        let pts = fixed_boundary_point(&g).unwrap();
        assert!(pts.contains(&BoundaryPoint::Infinity));
        assert!(pts
            .iter()
            .any(|p| p.coord_distance(&BoundaryPoint::Finite(HeisenbergPoint::origin())) < 1e-12));
    }

    #[test]
    fn non_unitary_is_rejected() {
        let m = Matrix3::from_diagonal(&Vector3::new(re(2.0), re(1.0), re(0.5)));
        let mut g = GroupElement::identity();
        g.matrix = m * re(1.3);
        g.matrix[(0, 1)] = re(4.0);
        assert!(matches!(classify(&g, 12), Err(Error::NonUnitary { .. })));
    }
}
