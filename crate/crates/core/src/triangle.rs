//! The one-parameter family of complex hyperbolic (4,4,inf) triangle groups:
//! polar vectors, involutions, the generators `S = I2 I3` and `T = I2 I1`,
//! words in `S` and `T`, and the symmetries `tau` and `I2`.

use std::fmt;

use nalgebra::{Matrix3, Vector3};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::heisenberg::{boundary_from_lift, standard_lift, BoundaryPoint};
use crate::hermitian::{cis, omega, re, CMat3, CVec3};
use crate::isometry::{classify, complex_involution, GroupElement, IsometryClass};

/// Cutoff for treating `theta` as the tangency value `pi/3`.
pub const PARABOLIC_CUTOFF: f64 = 1e-12;

/// Residual allowed by the build-time invariant checks.
const BUILD_TOL: f64 = 1e-9;

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    S,
    SInv,
    T,
    TInv,
}

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::S => Letter::SInv,
            Letter::SInv => Letter::S,
            Letter::T => Letter::TInv,
            Letter::TInv => Letter::T,
        }
    }

    fn base(self) -> char {
        match self {
            Letter::S | Letter::SInv => 'S',
            Letter::T | Letter::TInv => 'T',
        }
    }

    fn sign(self) -> i64 {
        match self {
            Letter::S | Letter::T => 1,
            Letter::SInv | Letter::TInv => -1,
        }
    }
}

/// A word over `S^{+-1}, T^{+-1}`, stored freely reduced.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Build from letters and freely reduce.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Parse a compact word: `S`, `T` are generators, `s`, `t` their inverses.
    /// Whitespace is ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let letters = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'S' => Ok(Letter::S),
                's' => Ok(Letter::SInv),
                'T' => Ok(Letter::T),
                't' => Ok(Letter::TInv),
                other => Err(Error::InvalidLetter(other)),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word::new(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Self {
        Word::new(self.0.iter().chain(other.0.iter()).copied())
    }

    /// `w^n` for any integer `n`.
    pub fn pow(&self, n: i32) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Word::empty(), |acc, _| acc.concat(&base))
    }

    /// `T^k w T^{-k}`.
    pub fn t_conjugate(&self, k: i32) -> Self {
        let tk = Word(vec![Letter::T]).pow(k);
        tk.concat(self).concat(&tk.inverse())
    }

    /// Exponent sums in `(S, T)`.
    pub fn exponent_sums(&self) -> (i64, i64) {
        self.0.iter().fold((0, 0), |(s, t), l| match l.base() {
            'S' => (s + l.sign(), t),
            _ => (s, t + l.sign()),
        })
    }

    /// Image under a letter substitution.
    pub fn substitute(&self, f: impl Fn(Letter) -> Word) -> Word {
        self.0
            .iter()
            .fold(Word::empty(), |acc, &l| acc.concat(&f(l)))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            let e = (j - i) as i64 * l.sign();
            parts.push(if e == 1 {
                l.base().to_string()
            } else {
                format!("{}^{}", l.base(), e)
            });
            i = j;
        }
        write!(f, "{}", parts.join(" "))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The group `<I1, I2, I3>` at parameter `theta`, with `S = I2 I3`, `T = I2 I1`.
#[derive(Debug, Clone)]
pub struct TriangleGroup {
    pub theta: f64,
    pub n1: CVec3,
    pub n2: CVec3,
    pub n3: CVec3,
    pub i1: GroupElement,
    pub i2: GroupElement,
    pub i3: GroupElement,
    pub s: GroupElement,
    pub t: GroupElement,
    s_inv: GroupElement,
    t_inv: GroupElement,
    pub parabolic_case: bool,
}

impl TriangleGroup {
    /// Build the group for `theta` in `[0, pi/2)` and check its defining
    /// relations.
    pub fn build(theta: f64) -> Result<Self> {
        if !(0.0..std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(Error::ThetaOutOfRange {
                theta,
                range: "[0, pi/2)",
            });
        }
        let n1 = Vector3::new(cis(theta), re(1.0), re(0.0));
        let n2 = Vector3::new(-cis(-theta), re(1.0), re(0.0));
        let n3 = Vector3::new(re(1.0), re(0.0), re(1.0));
        let i1 = complex_involution(&n1, Word::empty())?;
        let i2 = complex_involution(&n2, Word::empty())?;
        let i3 = complex_involution(&n3, Word::empty())?;
        let s = GroupElement {
            matrix: i2.matrix * i3.matrix,
            word: Word::new([Letter::S]),
        };
        let t = GroupElement {
            matrix: i2.matrix * i1.matrix,
            word: Word::new([Letter::T]),
        };
        let g = TriangleGroup {
            theta,
            n1,
            n2,
            n3,
            s_inv: s.inverse(),
            t_inv: t.inverse(),
            i1,
            i2,
            i3,
            s,
            t,
            parabolic_case: (theta - std::f64::consts::FRAC_PI_3).abs() < PARABOLIC_CUTOFF,
        };
        g.check_invariants()?;
        Ok(g)
    }

    fn check_invariants(&self) -> Result<()> {
        for (name, inv) in [("I1", &self.i1), ("I2", &self.i2), ("I3", &self.i3)] {
            let r = inv.mul(inv).identity_residual();
            if r > BUILD_TOL {
                return Err(Error::InvariantViolated(format!("{name}^2 residual {r:e}")));
            }
        }
        let s4 = self.s.pow(4).identity_residual();
        if s4 > BUILD_TOL {
            return Err(Error::InvariantViolated(format!("S^4 residual {s4:e}")));
        }
        if classify(&self.t, 12)? != (IsometryClass::Parabolic { unipotent: true }) {
            return Err(Error::InvariantViolated("T is not unipotent".into()));
        }
        let tr = self.i1i3i2i3().trace();
        let law = 7.0 + 8.0 * (2.0 * self.theta).cos();
        if (tr - re(law)).norm() > BUILD_TOL {
            return Err(Error::InvariantViolated(format!(
                "trace of I1I3I2I3 is {tr}, expected {law}"
            )));
        }
        Ok(())
    }

    /// `I1 I3 I2 I3`, the element whose type changes at `pi/3`.
    pub fn i1i3i2i3(&self) -> GroupElement {
        GroupElement {
            matrix: self.i1.matrix * self.i3.matrix * self.i2.matrix * self.i3.matrix,
            word: Word::empty(),
        }
    }

    pub fn letter(&self, l: Letter) -> &GroupElement {
        match l {
            Letter::S => &self.s,
            Letter::SInv => &self.s_inv,
            Letter::T => &self.t,
            Letter::TInv => &self.t_inv,
        }
    }

    /// Left-to-right product of the letter matrices.
    pub fn evaluate(&self, w: &Word) -> GroupElement {
        let matrix = w
            .letters()
            .iter()
            .fold(CMat3::identity(), |acc, &l| acc * self.letter(l).matrix);
        GroupElement {
            matrix,
            word: w.clone(),
        }
    }

    /// Parse and evaluate a compact word.
    pub fn eval_str(&self, text: &str) -> Result<GroupElement> {
        Ok(self.evaluate(&Word::parse(text)?))
    }

    /// Conjugation by the antiholomorphic involution `tau`:
    /// `m -> D conj(m) D` with `D = diag(1, -1, 1)`.
    pub fn tau_conjugate(&self, m: &GroupElement) -> GroupElement {
        let d = tau_d();
        GroupElement {
            matrix: d * m.matrix.map(|x| x.conj()) * d,
            word: m.word.substitute(|l| match l {
                Letter::S => Word::new([Letter::TInv, Letter::S]),
                Letter::SInv => Word::new([Letter::SInv, Letter::T]),
                Letter::T => Word::new([Letter::TInv]),
                Letter::TInv => Word::new([Letter::T]),
            }),
        }
    }

    /// `I2 m I2`.
    pub fn i2_conjugate(&self, m: &GroupElement) -> GroupElement {
        GroupElement {
            matrix: self.i2.matrix * m.matrix * self.i2.matrix,
            word: m.word.substitute(|l| Word::new([l.inverse()])),
        }
    }
}

fn tau_d() -> CMat3 {
    Matrix3::from_diagonal(&Vector3::new(re(1.0), re(-1.0), re(1.0)))
}

/// `tau` on C^3: `(z1, z2, z3) -> (conj z1, -conj z2, conj z3)`.
pub fn tau_vector(v: &CVec3) -> CVec3 {
    Vector3::new(v[0].conj(), -v[1].conj(), v[2].conj())
}

/// `tau` on boundary points, through lifts. In coordinates it is
/// `[z, t] -> [-conj z, -t]`.
pub fn tau_point(p: BoundaryPoint) -> BoundaryPoint {
    boundary_from_lift(&tau_vector(&standard_lift(p))).unwrap_or(BoundaryPoint::Infinity)
}

/// Distance from a complex number to the Eisenstein lattice `Z + Z omega`.
pub fn eisenstein_residual(x: num_complex::Complex64) -> f64 {
    let w = omega();
    let b = (x.im / w.im).round();
    let a = (x.re - b * w.re).round();
    (x - re(a) - w * b).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{c, mat_max_abs, Projective};
    use std::f64::consts::{FRAC_PI_3, PI};

    #[test]
    fn word_parse_display_reduce() {
        let w = Word::parse("tSS").unwrap();
        assert_eq!(w.to_string(), "T^-1 S^2");
        assert_eq!(Word::parse("StTs").unwrap(), Word::empty());
        assert_eq!(Word::empty().to_string(), "1");
        assert!(Word::parse("X").is_err());
        assert_eq!(
            Word::parse("S").unwrap().t_conjugate(2).to_string(),
            "T^2 S T^-2"
        );
        assert_eq!(Word::parse("SStTTs").unwrap().exponent_sums(), (1, 1));
    }

    #[test]
    fn involution_displays() {
        let th = 0.37;
        let g = TriangleGroup::build(th).unwrap();
        let o = re(0.0);
        let i1 = Matrix3::new(
            re(-1.0),
            cis(th) * 2.0,
            re(2.0),
            o,
            re(1.0),
            cis(-th) * 2.0,
            o,
            o,
            re(-1.0),
        );
        assert!(mat_max_abs(&(g.i1.matrix - i1)) < 1e-14);
        let i3 = Matrix3::new(o, o, re(1.0), o, re(-1.0), o, re(1.0), o, o);
        assert!(mat_max_abs(&(g.i3.matrix - i3)) < 1e-14);
    }

    #[test]
    fn s_at_pi_over_3() {
        let g = TriangleGroup::build(FRAC_PI_3).unwrap();
        let s3 = 3f64.sqrt();
        let o = re(0.0);
        let expected = Matrix3::new(
            re(2.0),
            c(1.0, -s3),
            re(-1.0),
            c(-1.0, -s3),
            re(-1.0),
            o,
            re(-1.0),
            o,
            o,
        );
        assert!(mat_max_abs(&(g.s.matrix - expected)) < 1e-14);
        assert!(g.parabolic_case);
    }

    #[test]
    fn real_at_theta_zero() {
        let g = TriangleGroup::build(0.0).unwrap();
        for m in [&g.i1, &g.i2, &g.i3, &g.s, &g.t] {
            assert!(m.matrix.iter().all(|x| x.im.abs() < 1e-15));
        }
    }

    #[test]
    fn theta_range_is_enforced() {
        assert!(TriangleGroup::build(-0.1).is_err());
        assert!(TriangleGroup::build(PI / 2.0).is_err());
    }

    #[test]
    fn evaluation_relations() {
        let g = TriangleGroup::build(0.3).unwrap();
        assert!(g.eval_str("SSSS").unwrap().identity_residual() < 1e-12);
        assert!(g.eval_str("tStStStS").unwrap().identity_residual() < 1e-12);
        assert_eq!(g.evaluate(&Word::empty()).matrix, CMat3::identity());
    }

    #[test]
    fn symmetries() {
        let g = TriangleGroup::build(0.8).unwrap();
        let tt = g.tau_conjugate(&g.t);
        assert!(
            tt.matrix
                .projective_residual(&g.eval_str("t").unwrap().matrix)
                .unwrap()
                < 1e-12
        );
        let ts = g.tau_conjugate(&g.s);
        assert!(
            ts.matrix
                .projective_residual(&g.eval_str("tS").unwrap().matrix)
                .unwrap()
                < 1e-12
        );
        assert_eq!(ts.word, Word::parse("tS").unwrap());
        let ti3 = g.tau_conjugate(&g.i3);
        assert!(ti3.matrix.projective_residual(&g.i3.matrix).unwrap() < 1e-12);
        let is = g.i2_conjugate(&g.s);
        assert!(
            is.matrix
                .projective_residual(&g.eval_str("s").unwrap().matrix)
                .unwrap()
                < 1e-12
        );
        let it = g.i2_conjugate(&g.t);
        assert!(
            it.matrix
                .projective_residual(&g.eval_str("t").unwrap().matrix)
                .unwrap()
                < 1e-12
        );
        let ie = g.i2_conjugate(&GroupElement::identity());
        assert!(ie.identity_residual() < 1e-12);
    }

    #[test]
    fn tau_fixes_n3_and_swaps_n1_n2() {
        let g = TriangleGroup::build(0.55).unwrap();
        let d = tau_vector(&g.n3);
        assert!(d.projective_residual(&g.n3).unwrap() < 1e-15);
        assert!(tau_vector(&g.n1).projective_residual(&g.n2).unwrap() < 1e-15);
        assert!(tau_vector(&g.n2).projective_residual(&g.n1).unwrap() < 1e-15);
    }

    #[test]
    fn eisenstein_lattice() {
        assert!(eisenstein_residual(omega() * 3.0 - re(2.0)) < 1e-15);
        assert!(eisenstein_residual(c(0.5, 0.0)) > 0.4);
    }
}
