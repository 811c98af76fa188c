//! The Gram matrix `A[i][j] = τ(b_i b_j)` and its checks.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{tau, HeckeAlgebra, HeckeElement};
use crate::basis::{self, RANK, ROW_ORDER};
use crate::field::{Fp, P61, P61_B};
use crate::laurent::LaurentPoly;
use crate::matrix::Matrix;
use crate::scalar::Ring;
use crate::ExactMatrix;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GramError {
    #[error("Gram row {0} was never filled")]
    Unfilled(usize),
    #[error("Gram matrix is not symmetric at ({row}, {col})")]
    AsymmetryFound { row: usize, col: usize },
    #[error("det(A) at {point:?} mod {prime} is {got}, expected {expected}")]
    DeterminantMismatch { prime: u64, point: [u64; 4], got: u64, expected: u64 },
    #[error("exact determinant is {got}, expected {expected}")]
    ExactDeterminantMismatch { got: LaurentPoly, expected: LaurentPoly },
    #[error("exact determinant failed: a Bareiss division was not exact")]
    InexactDivision,
    #[error("A[{row}][{col}] = {stored} but tau(b_{row} b_{col}) = {direct}")]
    OracleMismatch { row: usize, col: usize, stored: LaurentPoly, direct: LaurentPoly },
}

/// Row `24k + m` is `b_{24k+m'} g` for its parent `m'`, so
/// `A[24k+m][j] = sum_n λ^g_{j,n} A[24k+m'][n]`. Rows `24k + 1` (that is
/// `z^k`) come from the coordinates of `z^4`.
pub fn build_gram(alg: &HeckeAlgebra) -> Result<ExactMatrix, GramError> {
    let mut rows: Vec<Option<Vec<LaurentPoly>>> = vec![None; RANK];
    let mu = alg.z4();
    for k in 0..4 {
        let first: Vec<LaurentPoly> = (1..=RANK)
            .map(|j| {
                if k == 0 {
                    return if j == 1 { LaurentPoly::one() } else { LaurentPoly::zero() };
                }
                if j <= 24 * (4 - k) {
                    return LaurentPoly::zero();
                }
                // z^k b_j = b_{j'} z^4 with j' = 24k + j - 96
                let prev = rows[24 * k + j - 97].as_ref().expect("earlier block");
                dot(mu, prev)
            })
            .collect();
        rows[24 * k] = Some(first);
        for m in ROW_ORDER {
            let (mp, g) = basis::parent(m).expect("row order");
            let prev = rows[24 * k + mp - 1].clone().ok_or(GramError::Unfilled(24 * k + mp))?;
            let table = alg.generator(g);
            let row = (1..=RANK)
                .into_par_iter()
                .map(|j| {
                    let col = table.apply(&HeckeElement::basis(j));
                    dot(col.coords(), &prev)
                })
                .collect();
            rows[24 * k + m - 1] = Some(row);
        }
    }
    let rows = rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.ok_or(GramError::Unfilled(i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Matrix::from_rows(rows))
}

fn dot(x: &[LaurentPoly], y: &[LaurentPoly]) -> LaurentPoly {
    let mut acc = LaurentPoly::zero();
    for (a, b) in x.iter().zip(y) {
        if !a.is_zero() && !b.is_zero() {
            acc.add_mul_assign(a, b);
        }
    }
    acc
}

pub fn check_symmetry(a: &ExactMatrix) -> Result<(), GramError> {
    match a.first_asymmetry() {
        None => Ok(()),
        Some((i, j)) => Err(GramError::AsymmetryFound { row: i + 1, col: j + 1 }),
    }
}

/// `b^512 d^1032`
pub fn expected_determinant() -> LaurentPoly {
    LaurentPoly::monomial(0, 512, 0, 1032)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetMode {
    Probabilistic,
    Exact,
}

impl FromStr for DetMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "probabilistic" | "prob" => Ok(DetMode::Probabilistic),
            "exact" => Ok(DetMode::Exact),
            _ => Err(format!("unknown determinant mode {s:?}")),
        }
    }
}

impl fmt::Display for DetMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DetMode::Probabilistic => "probabilistic",
            DetMode::Exact => "exact",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetConfig {
    pub mode: DetMode,
    pub seed: u64,
    /// Evaluation points per prime.
    pub points: usize,
}

impl Default for DetConfig {
    fn default() -> Self {
        DetConfig { mode: DetMode::Probabilistic, seed: 0, points: 20 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetReport {
    pub mode: DetMode,
    pub primes: Vec<u64>,
    pub points_checked: usize,
    /// `(prime, [a, b, c, d])` for every evaluation.
    pub points: Vec<(u64, [u64; 4])>,
}

fn det_at_points<const P: u64>(
    a: &ExactMatrix,
    rng: &mut ChaCha8Rng,
    points: usize,
) -> Result<Vec<(u64, [u64; 4])>, GramError> {
    let expected = expected_determinant();
    let pts: Vec<[Fp<P>; 4]> = (0..points)
        .map(|_| [Fp::random(rng), Fp::random_nonzero(rng), Fp::random(rng), Fp::random_nonzero(rng)])
        .collect();
    for pt in &pts {
        let pt = *pt;
        let m = a.map(|x| x.evaluate_fp(pt).expect("units are non-zero"));
        let got = m.det();
        let want = expected.evaluate_fp(pt).expect("units are non-zero");
        if got != want {
            return Err(GramError::DeterminantMismatch {
                prime: P,
                point: pt.map(|x| x.value()),
                got: got.value(),
                expected: want.value(),
            });
        }
    }
    Ok(pts.iter().map(|pt| (P, pt.map(|x| x.value()))).collect())
}

/// `det(A) = b^512 d^1032`, either at random points modulo two primes near
/// `2^61` or exactly by fraction-free elimination.
pub fn determinant_check(a: &ExactMatrix, cfg: &DetConfig) -> Result<DetReport, GramError> {
    match cfg.mode {
        DetMode::Probabilistic => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut points = det_at_points::<P61>(a, &mut rng, cfg.points)?;
            points.extend(det_at_points::<P61_B>(a, &mut rng, cfg.points)?);
            Ok(DetReport { mode: cfg.mode, primes: vec![P61, P61_B], points_checked: points.len(), points })
        }
        DetMode::Exact => {
            let got = exact_determinant(a)?;
            let expected = expected_determinant();
            if got != expected {
                return Err(GramError::ExactDeterminantMismatch { got, expected });
            }
            Ok(DetReport { mode: cfg.mode, primes: Vec::new(), points_checked: 0, points: Vec::new() })
        }
    }
}

/// Bareiss elimination over the Laurent ring.
pub fn exact_determinant(a: &ExactMatrix) -> Result<LaurentPoly, GramError> {
    a.det_bareiss().ok_or(GramError::InexactDivision)
}

/// Which entries the oracle recomputes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OraclePairs {
    Sampled { count: usize, seed: u64 },
    All,
}

/// Recompute `τ(b_i b_j)` by applying the word of `b_i` to `b_j` and compare
/// with the stored Gram entries. Returns the number of pairs checked.
pub fn oracle_check(alg: &HeckeAlgebra, a: &ExactMatrix, pairs: OraclePairs) -> Result<usize, GramError> {
    let list: Vec<(usize, usize)> = match pairs {
        OraclePairs::All => (1..=RANK).flat_map(|i| (1..=RANK).map(move |j| (i, j))).collect(),
        OraclePairs::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut v: Vec<usize> = sample(&mut rng, RANK * RANK, count.min(RANK * RANK)).into_vec();
            v.sort_unstable();
            v.into_iter().map(|x| (x / RANK + 1, x % RANK + 1)).collect()
        }
    };
    let failures: Vec<GramError> = list
        .par_iter()
        .filter_map(|&(i, j)| {
            let w = basis::word_of(i).expect("basis index");
            let direct = tau(&alg.apply_word(&w, &HeckeElement::basis(j)));
            let stored = &a[(i - 1, j - 1)];
            (direct != *stored).then(|| GramError::OracleMismatch { row: i, col: j, stored: stored.clone(), direct })
        })
        .collect();
    match failures.into_iter().next() {
        Some(e) => Err(e),
        None => Ok(list.len()),
    }
}

/// `A` evaluated at one point, for callers that want a numeric view.
pub fn evaluate_gram<const P: u64>(a: &ExactMatrix, point: [Fp<P>; 4]) -> Matrix<Fp<P>> {
    a.map(|x| x.evaluate_fp(point).expect("units are non-zero"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_mode_parsing() {
        assert_eq!("exact".parse::<DetMode>().unwrap(), DetMode::Exact);
        assert_eq!("probabilistic".parse::<DetMode>().unwrap(), DetMode::Probabilistic);
        assert!("fast".parse::<DetMode>().is_err());
        assert_eq!(DetMode::Exact.to_string(), "exact");
    }

    #[test]
    fn expected_value() {
        assert_eq!(expected_determinant().to_string(), "b^512*d^1032");
    }

    #[test]
    fn symmetry_detection() {
        let mut m: ExactMatrix = Matrix::identity(3);
        assert!(check_symmetry(&m).is_ok());
        m[(0, 2)] = LaurentPoly::a();
        assert_eq!(check_symmetry(&m), Err(GramError::AsymmetryFound { row: 1, col: 3 }));
    }

    #[test]
    fn small_exact_determinant() {
        // [[b, a], [c, d]] has determinant bd - ac
        let m =
            Matrix::from_rows(vec![vec![LaurentPoly::b(), LaurentPoly::a()], vec![LaurentPoly::c(), LaurentPoly::d()]]);
        let want = &(&LaurentPoly::b() * &LaurentPoly::d()) - &(&LaurentPoly::a() * &LaurentPoly::c());
        assert_eq!(exact_determinant(&m).unwrap(), want);
    }

    #[test]
    fn dot_skips_zeros() {
        let x = vec![LaurentPoly::a(), LaurentPoly::zero()];
        let y = vec![LaurentPoly::b(), LaurentPoly::c()];
        assert_eq!(dot(&x, &y), &LaurentPoly::a() * &LaurentPoly::b());
    }
}
