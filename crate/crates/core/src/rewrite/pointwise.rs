//! Generator matrices of the Hecke algebra at a single parameter point,
//! obtained from the completed presentation over a field.

use crate::basis::{self, Gen, Letter, RANK};
use crate::matrix::Matrix;
use crate::rewrite::completion::{Completion, CompletionError, DlWord, NcPoly};
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PointError {
    #[error(transparent)]
    Completion(#[from] CompletionError),
    #[error("quotient has {0} normal words, expected 96")]
    WrongRank(usize),
    #[error("basis words are dependent at this point")]
    Singular,
    #[error("parameter b or d vanishes")]
    ZeroUnit,
}

const MAX_RULES: usize = 400;

fn letter(g: Gen) -> u8 {
    g.index() as u8
}

/// The five defining relations at `(a, b, c, d)`.
pub fn relations<F: Field>([a, b, c, d]: [F; 4]) -> Vec<NcPoly<F>> {
    let (s, t, u) = (letter(Gen::S), letter(Gen::T), letter(Gen::U));
    let quad =
        |g: u8, x: F, y: F| NcPoly::from_terms([(vec![g, g], F::one()), (vec![g], x.neg_ref()), (vec![], y.neg_ref())]);
    vec![
        quad(s, a, b),
        quad(t, c, d),
        quad(u, c, d),
        NcPoly::from_terms([(vec![t, u, s, t], F::one()), (vec![u, s, t, u], F::one().neg_ref())]),
        NcPoly::from_terms([(vec![s, t, u, s, t], F::one()), (vec![u, s, t, u, s], F::one().neg_ref())]),
    ]
}

/// Left regular representation at a point: `m[g]` has column `j` equal to
/// the coordinates of `g * b_j` on the basis.
#[derive(Clone, Debug)]
pub struct PointTables<F> {
    pub params: [F; 4],
    pub m: [Matrix<F>; 3],
}

impl<F: Field> PointTables<F> {
    pub fn compute(params: [F; 4]) -> Result<Self, PointError> {
        if params[1].is_zero() || params[3].is_zero() {
            return Err(PointError::ZeroUnit);
        }
        let gb = Completion::new(3, &relations(params), MAX_RULES)?;
        let words = gb.normal_words(RANK).ok_or(PointError::WrongRank(RANK + 1))?;
        if words.len() != RANK {
            return Err(PointError::WrongRank(words.len()));
        }
        let index = |w: &DlWord| words.binary_search_by(|x| DlWord(x.clone()).cmp(w)).ok();
        // Left multiplication on normal words.
        let mut left: Vec<Matrix<F>> = Vec::with_capacity(3);
        for g in Gen::ALL {
            let mut m = Matrix::zeros(RANK, RANK);
            for (j, w) in words.iter().enumerate() {
                let mut v = vec![letter(g)];
                v.extend_from_slice(w);
                for (t, c) in gb.normal_form_word(&v).terms() {
                    let i = index(t).expect("normal form uses normal words");
                    m[(i, j)] = *c;
                }
            }
            left.push(m);
        }
        // Column i of p: normal-word coordinates of b_i.
        let mut p = Matrix::zeros(RANK, RANK);
        for i in 1..=RANK {
            let word = basis::word_of(i).expect("basis index").expand_z();
            let mut v = vec![F::zero(); RANK];
            v[0] = F::one();
            for l in word.letters().iter().rev() {
                let Letter::Gen(g) = l else { unreachable!("basis words are positive") };
                v = left[g.index()].mul_vec(&v);
            }
            p.set_column(i - 1, &v);
        }
        let pinv = p.inverse().ok_or(PointError::Singular)?;
        let conj = |l: &Matrix<F>| pinv.mul(&l.mul(&p));
        Ok(PointTables { params, m: [conj(&left[0]), conj(&left[1]), conj(&left[2])] })
    }

    pub fn get(&self, g: Gen) -> &Matrix<F> {
        &self.m[g.index()]
    }
}
