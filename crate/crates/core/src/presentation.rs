//! Finitely presented groups: words over named generators, the two-relator
//! presentations of the quotient manifold and of s782, and abelianization.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::smith::AbelianGroup;
use crate::triangle::Word;

/// A reduced word in generators indexed from zero, as `(generator, exponent)`
/// syllables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FreeWord(Vec<(usize, i32)>);

impl FreeWord {
    pub fn new(syllables: impl IntoIterator<Item = (usize, i32)>) -> Self {
        let mut out: Vec<(usize, i32)> = Vec::new();
        for (g, e) in syllables {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((h, f)) if *h == g => {
                    *f += e;
                    if *f == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        FreeWord(out)
    }

    /// Parse space-separated tokens `name` or `name^e`.
    pub fn parse(text: &str, generators: &[String]) -> Result<Self> {
        let mut syl = Vec::new();
        for tok in text.split_whitespace() {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<i32>()
                        .map_err(|_| Error::UnknownLabel(tok.to_string()))?,
                ),
                None => (tok, 1),
            };
            let g = generators
                .iter()
                .position(|x| x == name)
                .ok_or_else(|| Error::UnknownLabel(name.to_string()))?;
            syl.push((g, exp));
        }
        Ok(FreeWord::new(syl))
    }

    pub fn syllables(&self) -> &[(usize, i32)] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        FreeWord::new(self.0.iter().rev().map(|&(g, e)| (g, -e)))
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, generators: usize) -> Vec<i64> {
        let mut v = vec![0i64; generators];
        for &(g, e) in &self.0 {
            v[g] += e as i64;
        }
        v
    }

    /// Replace each generator by a word in `S`, `T`.
    pub fn to_word(&self, images: &[Word]) -> Word {
        let mut w = Word::empty();
        for &(g, e) in &self.0 {
            w = w.concat(&images[g].pow(e));
        }
        w
    }

    /// Replace each generator by a word over another generating set.
    pub fn substitute(&self, images: &[FreeWord]) -> FreeWord {
        let mut syl = Vec::new();
        for &(g, e) in &self.0 {
            let img = if e > 0 {
                images[g].clone()
            } else {
                images[g].inverse()
            };
            for _ in 0..e.unsigned_abs() {
                syl.extend(img.0.iter().copied());
            }
        }
        FreeWord::new(syl)
    }

    /// Cyclic reduction followed by a check that `other` is a rotation of it.
    pub fn cyclically_equal(&self, other: &FreeWord) -> bool {
        let a = self.letters();
        let b = other.letters();
        if a.len() != b.len() {
            return false;
        }
        a.is_empty() || (0..a.len()).any(|r| (0..a.len()).all(|i| a[(i + r) % a.len()] == b[i]))
    }

    fn letters(&self) -> Vec<(usize, i32)> {
        let mut v: Vec<(usize, i32)> = self
            .0
            .iter()
            .flat_map(|&(g, e)| std::iter::repeat_n((g, e.signum()), e.unsigned_abs() as usize))
            .collect();
        while v.len() > 1 && v[0].0 == v[v.len() - 1].0 && v[0].1 == -v[v.len() - 1].1 {
            v.remove(0);
            v.pop();
        }
        v
    }

    pub fn display<'a>(&'a self, generators: &'a [String]) -> impl fmt::Display + 'a {
        DisplayWord {
            word: self,
            generators,
        }
    }
}

struct DisplayWord<'a> {
    word: &'a FreeWord,
    generators: &'a [String],
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .word
            .0
            .iter()
            .map(|&(g, e)| {
                let name = &self.generators[g];
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A presentation `<generators | relators>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<FreeWord>,
}

impl GroupPresentation {
    pub fn parse(generators: &[&str], relators: &[&str]) -> Result<Self> {
        let generators: Vec<String> = generators.iter().map(|s| s.to_string()).collect();
        let relators = relators
            .iter()
            .map(|r| FreeWord::parse(r, &generators))
            .collect::<Result<_>>()?;
        Ok(GroupPresentation {
            generators,
            relators,
        })
    }

    pub fn relator_strings(&self) -> Vec<String> {
        self.relators
            .iter()
            .map(|r| r.display(&self.generators).to_string())
            .collect()
    }

    /// Relator exponent matrix, one row per relator.
    pub fn relation_matrix(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| r.exponent_sums(self.generators.len()))
            .collect()
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<{} | {}>",
            self.generators.join(", "),
            self.relator_strings().join(", ")
        )
    }
}

impl Serialize for GroupPresentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GroupPresentation", 2)?;
        st.serialize_field("generators", &self.generators)?;
        st.serialize_field("relators", &self.relator_strings())?;
        st.end()
    }
}

/// Abelianization via the Smith normal form of the relation matrix.
pub fn abelianization(p: &GroupPresentation) -> Result<AbelianGroup> {
    AbelianGroup::from_relations(&p.relation_matrix(), p.generators.len())
}

/// `<u, v, w | w^-1 v u^-1 v^-1 w u, v^2 w u w^-3 u>`.
pub fn manifold_presentation() -> GroupPresentation {
    GroupPresentation::parse(
        &["u", "v", "w"],
        &["w^-1 v u^-1 v^-1 w u", "v^2 w u w^-3 u"],
    )
    .expect("static presentation")
}

/// `<a, b, c | a^2 c b^4 c, a b c a^-1 b^-1 c^-1>`.
pub fn s782_presentation() -> GroupPresentation {
    GroupPresentation::parse(&["a", "b", "c"], &["a^2 c b^4 c", "a b c a^-1 b^-1 c^-1"])
        .expect("static presentation")
}

/// `S, T` words for `u = x1 = T`, `v = x2 = S^-1 T`, `w = x7 = S^-1`.
pub fn uvw_images() -> [Word; 3] {
    [
        Word::parse("T").unwrap_or_default(),
        Word::parse("sT").unwrap_or_default(),
        Word::parse("s").unwrap_or_default(),
    ]
}

/// Images of `u, v, w` in the s782 generators: `c^-1 b^-1`, `b^-1`, `a`.
pub fn psi_images() -> [FreeWord; 3] {
    [
        FreeWord::new([(2, -1), (1, -1)]),
        FreeWord::new([(1, -1)]),
        FreeWord::new([(0, 1)]),
    ]
}

/// Necessary-condition check on the map `Psi`: it induces a unimodular map of
/// `Z^3` carrying the manifold relation lattice onto the s782 one.
#[derive(Debug, Clone, Serialize)]
pub struct PsiCheck {
    pub determinant: i64,
    pub relators_in_lattice: bool,
    pub lattice_images_span: bool,
    /// Relators of the manifold presentation whose image is a cyclic
    /// rotation of an s782 relator or its inverse.
    pub cyclic_matches: Vec<bool>,
}

impl PsiCheck {
    pub fn induces_isomorphism(&self) -> bool {
        self.determinant.abs() == 1 && self.relators_in_lattice && self.lattice_images_span
    }
}

fn in_row_lattice(v: &[i64], rows: &[Vec<i64>]) -> bool {
    // The s782 relation lattice has a single nonzero row r; v must be an
    // integer multiple of it.
    let nonzero: Vec<&Vec<i64>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
    match nonzero.as_slice() {
        [] => v.iter().all(|&x| x == 0),
        [r] => {
            let Some(k) = r.iter().position(|&x| x != 0) else {
                return false;
            };
            v[k] % r[k] == 0 && {
                let m = v[k] / r[k];
                v.iter().zip(r.iter()).all(|(a, b)| *a == m * b)
            }
        }
        _ => false,
    }
}

pub fn psi_check() -> PsiCheck {
    let src = manifold_presentation();
    let dst = s782_presentation();
    let images = psi_images();
    let cols: Vec<Vec<i64>> = images.iter().map(|w| w.exponent_sums(3)).collect();
    let det = cols[0][0] * (cols[1][1] * cols[2][2] - cols[1][2] * cols[2][1])
        - cols[1][0] * (cols[0][1] * cols[2][2] - cols[0][2] * cols[2][1])
        + cols[2][0] * (cols[0][1] * cols[1][2] - cols[0][2] * cols[1][1]);
    let dst_rows = dst.relation_matrix();
    let mapped: Vec<Vec<i64>> = src
        .relators
        .iter()
        .map(|r| r.substitute(&images).exponent_sums(3))
        .collect();
    let relators_in_lattice = mapped.iter().all(|v| in_row_lattice(v, &dst_rows));
    let lattice_images_span = dst_rows
        .iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .all(|r| {
            mapped
                .iter()
                .any(|v| v == r || v.iter().zip(r).all(|(a, b)| *a == -b))
        });
    let cyclic_matches = src
        .relators
        .iter()
        .map(|r| {
            let img = r.substitute(&images);
            dst.relators
                .iter()
                .any(|d| img.cyclically_equal(d) || img.cyclically_equal(&d.inverse()))
        })
        .collect();
    PsiCheck {
        determinant: det,
        relators_in_lattice,
        lattice_images_span,
        cyclic_matches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangle::TriangleGroup;

    #[test]
    fn display_round_trip() {
        let p = manifold_presentation();
        assert_eq!(p.relator_strings()[1], "v^2 w u w^-3 u");
        assert_eq!(s782_presentation().relator_strings()[0], "a^2 c b^4 c");
    }

    #[test]
    fn relation_matrices() {
        assert_eq!(
            manifold_presentation().relation_matrix(),
            vec![vec![0, 0, 0], vec![2, 2, -2]]
        );
        assert_eq!(
            s782_presentation().relation_matrix(),
            vec![vec![2, 4, 2], vec![0, 0, 0]]
        );
    }

    #[test]
    fn abelianizations_agree() {
        let a = abelianization(&manifold_presentation()).unwrap();
        let b = abelianization(&s782_presentation()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "Z^2 + Z/2");
        let g = GroupPresentation::parse(&["g"], &["g"]).unwrap();
        assert_eq!(abelianization(&g).unwrap().free_rank, 0);
    }

    #[test]
    fn relators_hold_in_the_group() {
        let g = TriangleGroup::build(std::f64::consts::FRAC_PI_3).unwrap();
        let images = uvw_images();
        for r in &manifold_presentation().relators {
            let w = r.to_word(&images);
            assert!(g.evaluate(&w).identity_residual() < 1e-9, "{w}");
        }
        let r1 = manifold_presentation().relators[0].to_word(&images);
        assert_eq!(r1.exponent_sums(), (0, 0));
    }

    #[test]
    fn psi_is_unimodular_on_homology() {
        let c = psi_check();
        assert!(c.induces_isomorphism(), "{c:?}");
        assert!(c.cyclic_matches[0]);
    }
}
