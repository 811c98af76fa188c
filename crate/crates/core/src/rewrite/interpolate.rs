//! Recover exact generator matrices from pointwise evaluations.
//!
//! All relations are bihomogeneous for `deg s = deg a = (1,0)`,
//! `deg b = (2,0)`, `deg t = deg u = deg c = (0,1)`, `deg d = (0,2)`, so
//! every coordinate of `g * b_j` on `b_n` is bihomogeneous of degree
//! `deg g + deg b_j - deg b_n`. Evaluating at `b = d = 1` therefore loses
//! nothing: a term `a^i c^k` lifts to a unique monomial. Interpolation runs
//! in the two remaining variables over a 61-bit prime field.

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::basis::{self, Gen, RANK};
use crate::laurent::{Integer, LaurentPoly, Monomial};
use crate::matrix::Matrix;
use crate::rewrite::pointwise::{PointError, PointTables};
use crate::scalar::Ring;
use crate::{ExactMatrix, Fp61};

const MAX_DEGREE: usize = 40;
const EXTRA_CHECKS: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InterpolationError {
    #[error("evaluation failed: {0}")]
    Point(#[from] PointError),
    #[error("degree in {0} exceeds {MAX_DEGREE}")]
    DegreeTooLarge(&'static str),
    #[error("entry ({row}, {col}) of M_{gen} is not bihomogeneous")]
    NotHomogeneous { gen: Gen, row: usize, col: usize },
    #[error("interpolant disagrees with a fresh evaluation")]
    CheckFailed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolationStats {
    pub degree_a: usize,
    pub degree_c: usize,
    pub evaluations: usize,
}

/// All entries of the three matrices at `(a, 1, c, 1)`, flattened.
fn sample(a: Fp61, c: Fp61) -> Result<Vec<Fp61>, PointError> {
    let t = PointTables::compute([a, Fp61::from_i64(1), c, Fp61::from_i64(1)])?;
    Ok(t.m.iter().flat_map(|m| m.entries().map(|(_, v)| *v).collect::<Vec<_>>()).collect())
}

/// Newton divided differences, updated one node at a time.
struct Newton {
    nodes: Vec<Fp61>,
    /// `table[e]` holds the current diagonal for entry `e`.
    table: Vec<Vec<Fp61>>,
}

impl Newton {
    fn new(entries: usize) -> Self {
        Newton { nodes: Vec::new(), table: vec![Vec::new(); entries] }
    }

    /// Add a node; returns whether every new top coefficient vanished.
    fn push(&mut self, x: Fp61, values: &[Fp61]) -> bool {
        let k = self.nodes.len();
        let inv: Vec<Fp61> = self.nodes.iter().map(|&y| (x - y).inverse().expect("distinct nodes")).collect();
        let mut all_zero = true;
        for (row, &v) in self.table.iter_mut().zip(values) {
            // row[i] = f[x_{k-i}, ..., x_k] after the update
            let mut cur = v;
            let mut next = Vec::with_capacity(k + 1);
            next.push(cur);
            for i in 0..k {
                cur = (cur - row[i]) * inv[k - 1 - i];
                next.push(cur);
            }
            if !cur.is_zero() && k > 0 {
                all_zero = false;
            }
            *row = next;
        }
        self.nodes.push(x);
        all_zero
    }
}

/// Inverse Vandermonde: maps values at `nodes` to monomial coefficients.
fn vandermonde_inverse(nodes: &[Fp61]) -> Matrix<Fp61> {
    let n = nodes.len();
    Matrix::from_fn(n, n, |i, j| nodes[i].pow_u64(j as u64)).inverse().expect("distinct nodes")
}

fn distinct_nodes(rng: &mut ChaCha8Rng, n: usize) -> Vec<Fp61> {
    let mut v: Vec<Fp61> = Vec::with_capacity(n);
    while v.len() < n {
        let x = Fp61::random(rng);
        if !v.contains(&x) {
            v.push(x);
        }
    }
    v
}

/// Lift `a^i c^k` coefficients of the entry at `(row, col)` of `M_g`.
fn lift_entry(gen: Gen, row: usize, col: usize, coeffs: &[Vec<Fp61>]) -> Result<LaurentPoly, InterpolationError> {
    let (g1, g2) = gen.bidegree();
    let (j1, j2) = basis::bidegree_of(col + 1).expect("basis index");
    let (n1, n2) = basis::bidegree_of(row + 1).expect("basis index");
    let (d1, d2) = (g1 + j1 - n1, g2 + j2 - n2);
    let mut terms = Vec::new();
    for (i, by_c) in coeffs.iter().enumerate() {
        for (k, x) in by_c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let (ra, rc) = (d1 - i as i32, d2 - k as i32);
            if ra % 2 != 0 || rc % 2 != 0 {
                return Err(InterpolationError::NotHomogeneous { gen, row, col });
            }
            terms.push((Monomial::new(i as i32, ra / 2, k as i32, rc / 2), Integer::from(x.symmetric())));
        }
    }
    Ok(LaurentPoly::from_terms(terms))
}

fn evaluate_at(coeffs: &[Vec<Fp61>], a: Fp61, c: Fp61) -> Fp61 {
    let mut acc = Fp61::from_i64(0);
    for by_c in coeffs.iter().rev() {
        let mut inner = Fp61::from_i64(0);
        for x in by_c.iter().rev() {
            inner = inner * c + *x;
        }
        acc = acc * a + inner;
    }
    acc
}

/// Exact `M_s, M_t, M_u` over the Laurent ring.
pub fn exact_generator_matrices(seed: u64) -> Result<([ExactMatrix; 3], InterpolationStats), InterpolationError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = 3 * RANK * RANK;
    let mut evaluations = 0usize;
    let mut eval = |a: Fp61, c: Fp61| {
        evaluations += 1;
        sample(a, c)
    };

    // Degree detection along each axis through a common base point.
    let pool = distinct_nodes(&mut rng, 2 * (MAX_DEGREE + 3));
    let (a_pool, c_pool) = pool.split_at(MAX_DEGREE + 3);
    let base = eval(a_pool[0], c_pool[0])?;
    let mut axis_samples = Vec::with_capacity(2);
    let mut degrees = Vec::with_capacity(2);
    for axis in ["a", "c"] {
        let pool = if axis == "a" { a_pool } else { c_pool };
        let mut newton = Newton::new(entries);
        let mut samples = vec![base.clone()];
        newton.push(pool[0], &base);
        let mut zero_run = 0;
        let mut found = None;
        for (k, &x) in pool.iter().enumerate().skip(1) {
            let v = if axis == "a" { eval(x, c_pool[0])? } else { eval(a_pool[0], x)? };
            zero_run = if newton.push(x, &v) { zero_run + 1 } else { 0 };
            samples.push(v);
            if zero_run == 2 {
                found = Some(k - 2);
                break;
            }
        }
        degrees.push(found.ok_or(InterpolationError::DegreeTooLarge(axis))?);
        axis_samples.push(samples);
    }
    let (mut da, mut dc) = (degrees[0], degrees[1]);
    let (row0, col0) = (&axis_samples[0], &axis_samples[1]);

    for _attempt in 0..3 {
        let a_nodes = &a_pool[..=da];
        let c_nodes = &c_pool[..=dc];
        // grid[i][j] = sample at (a_i, c_j)
        let mut grid: Vec<Vec<Vec<Fp61>>> = Vec::with_capacity(da + 1);
        for (i, &a) in a_nodes.iter().enumerate() {
            let mut row = Vec::with_capacity(dc + 1);
            for (j, &c) in c_nodes.iter().enumerate() {
                row.push(match (i, j) {
                    (_, 0) if i < row0.len() => row0[i].clone(),
                    (0, _) if j < col0.len() => col0[j].clone(),
                    _ => eval(a, c)?,
                });
            }
            grid.push(row);
        }
        let va = vandermonde_inverse(a_nodes);
        let vc = vandermonde_inverse(c_nodes);
        // coeffs[e][i][k]: coefficient of a^i c^k in entry e
        let coeffs: Vec<Vec<Vec<Fp61>>> = (0..entries)
            .map(|e| {
                let vals = Matrix::from_fn(da + 1, dc + 1, |i, j| grid[i][j][e]);
                let m = va.mul(&vals).mul(&vc.transpose());
                (0..=da).map(|i| m.row(i).to_vec()).collect()
            })
            .collect();

        let mut ok = true;
        for _ in 0..EXTRA_CHECKS {
            let (a, c) = (Fp61::random(&mut rng), Fp61::random(&mut rng));
            let v = eval(a, c)?;
            if coeffs.iter().zip(&v).any(|(p, x)| evaluate_at(p, a, c) != *x) {
                ok = false;
                break;
            }
        }
        if !ok {
            da += 2;
            dc += 2;
            if da > MAX_DEGREE || dc > MAX_DEGREE {
                break;
            }
            continue;
        }

        let mut mats = Vec::with_capacity(3);
        for g in Gen::ALL {
            let off = g.index() * RANK * RANK;
            let rows = (0..RANK)
                .map(|r| (0..RANK).map(|c| lift_entry(g, r, c, &coeffs[off + r * RANK + c])).collect())
                .collect::<Result<Vec<Vec<_>>, _>>()?;
            mats.push(Matrix::from_rows(rows));
        }
        let [ms, mt, mu]: [ExactMatrix; 3] = mats.try_into().expect("three generators");
        let stats = InterpolationStats { degree_a: da, degree_c: dc, evaluations };
        return Ok(([ms, mt, mu], stats));
    }
    Err(InterpolationError::CheckFailed)
}
