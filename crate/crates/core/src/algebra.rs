//! The algebra as a free module of rank 96 with left multiplication by
//! generators, products of arbitrary elements and the trace.

use std::fmt;
use std::ops::{Add, Index, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::basis::{self, Gen, Letter, Word, RANK};
use crate::laurent::LaurentPoly;
use crate::matrix::Matrix;
use crate::scalar::Ring;
use crate::ExactMatrix;

/// Coordinates on the basis `b_1..b_96`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HeckeElement {
    coords: Vec<LaurentPoly>,
}

impl HeckeElement {
    pub fn zero() -> Self {
        HeckeElement { coords: vec![LaurentPoly::zero(); RANK] }
    }

    /// `e_i`, the basis element `b_i` (1-based).
    pub fn basis(i: usize) -> Self {
        assert!((1..=RANK).contains(&i), "basis index {i} out of range");
        let mut h = Self::zero();
        h.coords[i - 1] = LaurentPoly::one();
        h
    }

    pub fn one() -> Self {
        Self::basis(1)
    }

    pub fn from_coords(coords: Vec<LaurentPoly>) -> Self {
        assert_eq!(coords.len(), RANK);
        HeckeElement { coords }
    }

    pub fn coords(&self) -> &[LaurentPoly] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<LaurentPoly> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        HeckeElement { coords: self.coords.iter().map(|x| x * c).collect() }
    }

    /// Non-zero coordinates as `(index, coefficient)`, 1-based.
    pub fn support(&self) -> impl Iterator<Item = (usize, &LaurentPoly)> {
        self.coords.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i + 1, c))
    }
}

impl Index<usize> for HeckeElement {
    type Output = LaurentPoly;

    /// 1-based coordinate.
    fn index(&self, i: usize) -> &LaurentPoly {
        &self.coords[i - 1]
    }
}

impl Add for &HeckeElement {
    type Output = HeckeElement;
    fn add(self, o: &HeckeElement) -> HeckeElement {
        HeckeElement { coords: self.coords.iter().zip(&o.coords).map(|(x, y)| x + y).collect() }
    }
}

impl Sub for &HeckeElement {
    type Output = HeckeElement;
    fn sub(self, o: &HeckeElement) -> HeckeElement {
        HeckeElement { coords: self.coords.iter().zip(&o.coords).map(|(x, y)| x - y).collect() }
    }
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.support().map(|(i, c)| format!("({c})*b_{i}")).collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixTag {
    S,
    T,
    U,
    Z,
}

impl From<Gen> for MatrixTag {
    fn from(g: Gen) -> Self {
        match g {
            Gen::S => MatrixTag::S,
            Gen::T => MatrixTag::T,
            Gen::U => MatrixTag::U,
        }
    }
}

/// Left multiplication by a generator (or by `z`): column `j` holds the
/// coordinates of `g * b_j`, so entry `(n, j)` is the coefficient of `b_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct MulMatrix {
    pub tag: MatrixTag,
    pub entries: ExactMatrix,
    /// Non-zero entries of each column.
    columns: Vec<Vec<(usize, LaurentPoly)>>,
}

impl MulMatrix {
    pub fn new(tag: MatrixTag, entries: ExactMatrix) -> Self {
        assert!(entries.rows() == RANK && entries.cols() == RANK);
        let columns = (0..RANK)
            .map(|j| (0..RANK).filter(|&n| !entries[(n, j)].is_zero()).map(|n| (n, entries[(n, j)].clone())).collect())
            .collect();
        MulMatrix { tag, entries, columns }
    }

    /// `λ_{j,n}`: coefficient of `b_n` in `g * b_j` (1-based).
    pub fn lambda(&self, j: usize, n: usize) -> &LaurentPoly {
        &self.entries[(n - 1, j - 1)]
    }

    pub fn apply(&self, h: &HeckeElement) -> HeckeElement {
        let mut out = vec![LaurentPoly::zero(); RANK];
        for (j, x) in h.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (n, y) in &self.columns[j] {
                out[*n].add_mul_assign(x, y);
            }
        }
        HeckeElement { coords: out }
    }
}

/// The generator matrices together with the derived data every consumer
/// needs: `M_z` and the coordinates of `z^4`.
#[derive(Clone, Debug)]
pub struct HeckeAlgebra {
    gens: [MulMatrix; 3],
    z: MulMatrix,
    mu: Vec<LaurentPoly>,
}

impl HeckeAlgebra {
    /// Builds `M_z = (M_s M_t M_u)^3` and `μ` from the three tables.
    pub fn new(ms: ExactMatrix, mt: ExactMatrix, mu: ExactMatrix) -> Self {
        let stu = ms.mul(&mt).mul(&mu);
        let mz = stu.mul(&stu).mul(&stu);
        let mu_vec = z4_coefficients(&ms, &mt, &mu);
        HeckeAlgebra {
            gens: [
                MulMatrix::new(MatrixTag::S, ms),
                MulMatrix::new(MatrixTag::T, mt),
                MulMatrix::new(MatrixTag::U, mu),
            ],
            z: MulMatrix::new(MatrixTag::Z, mz),
            mu: mu_vec,
        }
    }

    pub fn generator(&self, g: Gen) -> &MulMatrix {
        &self.gens[g.index()]
    }

    pub fn z_matrix(&self) -> &MulMatrix {
        &self.z
    }

    /// Coordinates of `z^4`.
    pub fn z4(&self) -> &[LaurentPoly] {
        &self.mu
    }

    pub fn left_mul(&self, l: Letter, h: &HeckeElement) -> HeckeElement {
        match l {
            Letter::Gen(g) => self.generator(g).apply(h),
            Letter::Z => self.z.apply(h),
            Letter::Inv(g) => {
                // g^-1 = q^-1 g - q^-1 p for g^2 = p g + q
                let (p, q) = quadratic(g);
                let qinv = q.unit_inverse().expect("unit");
                let gh = self.generator(g).apply(h);
                (&gh.scale(&qinv)) - &h.scale(&(&p * &qinv))
            }
            Letter::ZInv => {
                let inv = Word(vec![Letter::Z]).expand_z().inverse();
                self.apply_word(&inv, h)
            }
        }
    }

    /// `w * h`, applying the letters of `w` from the right.
    pub fn apply_word(&self, w: &Word, h: &HeckeElement) -> HeckeElement {
        w.letters().iter().rev().fold(h.clone(), |acc, l| self.left_mul(*l, &acc))
    }

    /// Coordinates of the image of a word.
    pub fn word_element(&self, w: &Word) -> HeckeElement {
        self.apply_word(w, &HeckeElement::one())
    }

    pub fn mul(&self, h1: &HeckeElement, h2: &HeckeElement) -> HeckeElement {
        let mut acc = HeckeElement::zero();
        for (i, c) in h1.support() {
            let w = basis::word_of(i).expect("basis index");
            let prod = self.apply_word(&w, h2);
            for (o, x) in acc.coords.iter_mut().zip(&prod.coords) {
                o.add_mul_assign(c, x);
            }
        }
        acc
    }

    /// `b_i^{-1}`: the reversed word with inverted letters applied to `1`.
    pub fn inverse_of_basis(&self, i: usize) -> HeckeElement {
        let w = basis::word_of(i).expect("basis index");
        self.word_element(&w.inverse())
    }

    pub fn z4_element(&self) -> HeckeElement {
        HeckeElement::from_coords(self.mu.clone())
    }
}

/// `τ(h)`: the coefficient of `b_1`.
pub fn tau(h: &HeckeElement) -> LaurentPoly {
    h.coords[0].clone()
}

/// `(p, q)` with `g^2 = p g + q`.
pub fn quadratic(g: Gen) -> (LaurentPoly, LaurentPoly) {
    match g {
        Gen::S => (LaurentPoly::a(), LaurentPoly::b()),
        Gen::T | Gen::U => (LaurentPoly::c(), LaurentPoly::d()),
    }
}

/// `z^4 = z^3 * ustustust = ustus * b_93`, contracted one table at a time.
pub fn z4_coefficients(ms: &ExactMatrix, mt: &ExactMatrix, mu: &ExactMatrix) -> Vec<LaurentPoly> {
    let mut v = vec![LaurentPoly::zero(); RANK];
    v[92] = LaurentPoly::one();
    for m in [ms, mu, mt, ms, mu] {
        v = m.mul_vec(&v);
    }
    v
}

/// The three generator matrices evaluated into another ring.
pub fn map_generators<R: Ring>(
    alg: &HeckeAlgebra,
    f: impl Fn(&LaurentPoly) -> R + Sync + Send + Copy,
) -> [Matrix<R>; 3] {
    Gen::ALL.map(|g| alg.generator(g).entries.map(f))
}
