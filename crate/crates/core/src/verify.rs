//! Certification of the multiplication tables and the three trace
//! conditions.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{tau, HeckeAlgebra, HeckeElement};
use crate::basis::{self, Gen, Word, RANK};
use crate::gram::{self, DetConfig, OraclePairs};
use crate::group::FiniteGroup;
use crate::laurent::LaurentPoly;
use crate::matrix::Matrix;
use crate::ExactMatrix;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("relation {name} violated at ({row}, {col})")]
    RelationViolated { name: String, row: usize, col: usize },
    #[error("word of b_{0} applied to 1 is not e_{0}")]
    BasisInconsistent(usize),
    #[error("specialisation failure: {0}")]
    SpecialisationFailure(String),
    #[error("tau(z^4 * b_{index}^-1) = {value}, expected 0")]
    NonzeroTrace { index: usize, value: LaurentPoly },
    #[error("trace value {name} = {value}, expected {expected}")]
    TraceValue { name: String, value: LaurentPoly, expected: LaurentPoly },
    #[error("coefficient of b_{index} in t * b_58 is {got}, expected {expected}")]
    GoldenMismatch { index: usize, got: LaurentPoly, expected: LaurentPoly },
    #[error("skipped: {0}")]
    Skipped(String),
}

fn first_difference(x: &ExactMatrix, y: &ExactMatrix) -> Option<(usize, usize)> {
    (0..x.rows()).flat_map(|i| (0..x.cols()).map(move |j| (i, j))).find(|&(i, j)| x[(i, j)] != y[(i, j)])
}

fn check(name: &str, lhs: &ExactMatrix, rhs: &ExactMatrix) -> Result<(), VerifyError> {
    match first_difference(lhs, rhs) {
        None => Ok(()),
        Some((row, col)) => Err(VerifyError::RelationViolated { name: name.to_string(), row: row + 1, col: col + 1 }),
    }
}

/// The five defining relations as exact matrix identities, and
/// `word_of(i) * 1 = b_i` for every basis index. Together these say the
/// tables are the left regular representation on the basis.
pub fn certify_matrices(ms: &ExactMatrix, mt: &ExactMatrix, mu: &ExactMatrix) -> Result<(), VerifyError> {
    let id = Matrix::identity(RANK);
    let quad = |m: &ExactMatrix, p: LaurentPoly, q: LaurentPoly| m.scale(&p).add(&id.scale(&q));
    check("s^2 = a*s + b", &ms.mul(ms), &quad(ms, LaurentPoly::a(), LaurentPoly::b()))?;
    check("t^2 = c*t + d", &mt.mul(mt), &quad(mt, LaurentPoly::c(), LaurentPoly::d()))?;
    check("u^2 = c*u + d", &mu.mul(mu), &quad(mu, LaurentPoly::c(), LaurentPoly::d()))?;
    let (tu, us, st) = (mt.mul(mu), mu.mul(ms), ms.mul(mt));
    check("tust = ustu", &tu.mul(&st), &us.mul(&tu))?;
    check("stust = ustus", &st.mul(&us).mul(mt), &us.mul(&tu).mul(ms))?;

    let gens = [ms, mt, mu];
    for i in 1..=RANK {
        let w = basis::word_of(i).expect("basis index").expand_z();
        let mut v = vec![LaurentPoly::zero(); RANK];
        v[0] = LaurentPoly::one();
        for l in w.letters().iter().rev() {
            let basis::Letter::Gen(g) = l else { unreachable!("positive word") };
            v = gens[g.index()].mul_vec(&v);
        }
        let ok = v.iter().enumerate().all(|(n, x)| if n + 1 == i { x.is_one() } else { x.is_zero() });
        if !ok {
            return Err(VerifyError::BasisInconsistent(i));
        }
    }
    Ok(())
}

/// `M_z` from the three cyclic words agree and commutes with the generators.
pub fn certify_centre(alg: &HeckeAlgebra) -> Result<(), VerifyError> {
    let m = |g: Gen| &alg.generator(g).entries;
    let cube = |x: &ExactMatrix| x.mul(x).mul(x);
    let mz = &alg.z_matrix().entries;
    check("z = (tus)^3", mz, &cube(&m(Gen::T).mul(m(Gen::U)).mul(m(Gen::S))))?;
    check("z = (ust)^3", mz, &cube(&m(Gen::U).mul(m(Gen::S)).mul(m(Gen::T))))?;
    for g in Gen::ALL {
        check(&format!("z{g} = {g}z"), &mz.mul(m(g)), &m(g).mul(mz))?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Verdict {
    pub fn from_result<T>(name: &str, r: &Result<T, VerifyError>, ok_detail: impl FnOnce(&T) -> String) -> Self {
        match r {
            Ok(v) => Verdict { name: name.to_string(), passed: true, detail: ok_detail(v) },
            Err(e) => Verdict { name: name.to_string(), passed: false, detail: e.to_string() },
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {}: {}", self.name, self.detail)
    }
}

/// `τ(z^4 b_i^{-1})` for `i = 2..96`: the inverse word is applied to `1`,
/// then `M_z` four times.
pub fn condition3_values(alg: &HeckeAlgebra) -> Vec<(usize, LaurentPoly)> {
    use rayon::prelude::*;
    (2..=RANK).into_par_iter().map(|i| (i, tau(&times_z4(alg, &alg.inverse_of_basis(i))))).collect()
}

fn times_z4(alg: &HeckeAlgebra, h: &HeckeElement) -> HeckeElement {
    (0..4).fold(h.clone(), |acc, _| alg.z_matrix().apply(&acc))
}

/// Stops at the first non-vanishing trace.
pub fn check_condition3(alg: &HeckeAlgebra) -> Result<Vec<(usize, LaurentPoly)>, VerifyError> {
    let mut values = Vec::with_capacity(RANK - 1);
    for i in 2..=RANK {
        let v = tau(&times_z4(alg, &alg.inverse_of_basis(i)));
        if !v.is_zero() {
            return Err(VerifyError::NonzeroTrace { index: i, value: v });
        }
        values.push((i, v));
    }
    Ok(values)
}

/// `τ(z^4) = b^6 d^12`, `τ(z^4 u) = τ(z^4 t) = c b^6 d^12`,
/// `τ(z^4 s) = a b^6 d^12`.
pub fn check_trace_values(alg: &HeckeAlgebra) -> Result<Vec<(String, LaurentPoly)>, VerifyError> {
    let base = LaurentPoly::monomial(0, 6, 0, 12);
    let cases = [
        ("tau(z^4)", "1", LaurentPoly::one()),
        ("tau(z^4 u)", "u", LaurentPoly::c()),
        ("tau(z^4 t)", "t", LaurentPoly::c()),
        ("tau(z^4 s)", "s", LaurentPoly::a()),
    ];
    let mut out = Vec::new();
    for (name, word, factor) in cases {
        let w: Word = word.parse().expect("word literal");
        let value = tau(&times_z4(alg, &alg.word_element(&w)));
        let expected = &factor * &base;
        if value != expected {
            return Err(VerifyError::TraceValue { name: name.to_string(), value, expected });
        }
        out.push((name.to_string(), value));
    }
    Ok(out)
}

/// Anchored coefficients of `t * b_58`.
pub fn golden_anchors() -> Vec<(usize, LaurentPoly)> {
    let p = |s: &str| s.parse::<LaurentPoly>().expect("literal");
    vec![(22, p("b^3*d^6")), (58, p("c")), (64, p("a")), (52, p("-a*c")), (63, p("-a*c")), (61, p("b*c + a^2*c"))]
}

pub fn check_golden(t_b58: &HeckeElement) -> Result<(), VerifyError> {
    for (index, expected) in golden_anchors() {
        let got = t_b58[index].clone();
        if got != expected {
            return Err(VerifyError::GoldenMismatch { index, got, expected });
        }
    }
    Ok(())
}

type Perm = Vec<usize>;

fn compose(p: &Perm, q: &Perm) -> Perm {
    q.iter().map(|&x| p[x]).collect()
}

/// Column `j` goes to the row holding its single 1.
fn as_permutation(m: &Matrix<i64>) -> Option<Perm> {
    let n = m.rows();
    let mut perm = vec![usize::MAX; n];
    let mut hit = vec![false; n];
    for j in 0..n {
        for i in 0..n {
            match m[(i, j)] {
                0 => {}
                1 if perm[j] == usize::MAX && !hit[i] => {
                    perm[j] = i;
                    hit[i] = true;
                }
                _ => return None,
            }
        }
    }
    perm.iter().all(|&x| x != usize::MAX).then_some(perm)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition2Summary {
    pub order: usize,
    pub centre: usize,
}

/// The group-algebra specialisation `(a, b, c, d) = (0, 1, 0, 1)`.
pub fn check_condition2(
    alg: &HeckeAlgebra,
    a: &ExactMatrix,
    group: &FiniteGroup,
) -> Result<Condition2Summary, VerifyError> {
    let fail = |msg: String| VerifyError::SpecialisationFailure(msg);
    let specialised = |x: &LaurentPoly| i64::try_from(x.specialise_group_algebra()).unwrap_or(i64::MAX);
    let mut gens = Vec::new();
    for g in Gen::ALL {
        let p = as_permutation(&alg.generator(g).entries.map(specialised))
            .ok_or_else(|| fail(format!("specialised M_{g} is not a permutation matrix")))?;
        if compose(&p, &p) != (0..RANK).collect::<Perm>() {
            return Err(fail(format!("specialised M_{g} does not square to I")));
        }
        gens.push(p);
    }
    let identity: Perm = (0..RANK).collect();
    let images: Vec<Perm> = (1..=RANK)
        .map(|i| {
            let w = basis::word_of(i).expect("basis index").expand_z();
            w.letters().iter().fold(identity.clone(), |acc, l| match l {
                basis::Letter::Gen(g) => compose(&acc, &gens[g.index()]),
                _ => unreachable!("positive expanded word"),
            })
        })
        .collect();
    let set: HashSet<&Perm> = images.iter().collect();
    if set.len() != RANK {
        return Err(fail(format!("only {} distinct basis images", set.len())));
    }
    for p in &images {
        for q in &images {
            if !set.contains(&compose(p, q)) {
                return Err(fail("basis images not closed under composition".into()));
            }
        }
    }
    let centre = images.iter().filter(|p| images.iter().all(|q| compose(p, q) == compose(q, p))).count();
    if centre != 4 {
        return Err(fail(format!("centre has order {centre}")));
    }
    // τ(b_i b_j) specialises to 1 exactly when b_i b_j is the identity.
    for i in 0..RANK {
        for j in 0..RANK {
            let want = i64::from(compose(&images[i], &images[j]) == identity);
            if specialised(&a[(i, j)]) != want {
                return Err(fail(format!("tau does not specialise to delta at ({}, {})", i + 1, j + 1)));
            }
        }
    }
    // Independent oracle: the permutations are the left regular action of
    // the enumerated group, transported along b_i -> element of its word.
    let elements: Vec<usize> = (1..=RANK).map(|i| group.element_of(&basis::word_of(i).unwrap())).collect();
    if group.order() != RANK || elements.iter().collect::<HashSet<_>>().len() != RANK {
        return Err(fail("basis words do not enumerate the group".into()));
    }
    let mut position = vec![0; RANK];
    for (i, e) in elements.iter().enumerate() {
        position[*e] = i;
    }
    for g in Gen::ALL {
        let left = group.left_perm(g);
        for j in 0..RANK {
            if gens[g.index()][j] != position[left[elements[j]]] {
                return Err(fail(format!("specialised M_{g} differs from the group action at b_{}", j + 1)));
            }
        }
    }
    Ok(Condition2Summary { order: set.len(), centre })
}

/// Everything [`run_all`] needs besides the tables.
#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub det: DetConfig,
    pub oracle: OraclePairs,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { det: DetConfig::default(), oracle: OraclePairs::Sampled { count: 200, seed: 0 } }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub certification: Verdict,
    pub centre: Verdict,
    pub symmetry: Verdict,
    pub determinant: Verdict,
    pub oracle: Verdict,
    pub condition2: Verdict,
    pub condition3: Verdict,
    pub trace_values: Verdict,
    pub golden: Verdict,
    /// `τ(z^4 b_i^{-1})` for `i = 2..96`.
    pub condition3_values: Vec<(usize, LaurentPoly)>,
}

impl VerificationReport {
    pub fn verdicts(&self) -> [&Verdict; 9] {
        [
            &self.certification,
            &self.centre,
            &self.symmetry,
            &self.determinant,
            &self.oracle,
            &self.condition2,
            &self.condition3,
            &self.trace_values,
            &self.golden,
        ]
    }

    pub fn passed(&self) -> bool {
        self.verdicts().iter().all(|v| v.passed)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in self.verdicts() {
            writeln!(f, "{v}")?;
        }
        write!(f, "overall: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

fn gram_verdict<T>(name: &str, r: Result<T, gram::GramError>, detail: impl FnOnce(&T) -> String) -> Verdict {
    match r {
        Ok(v) => Verdict { name: name.to_string(), passed: true, detail: detail(&v) },
        Err(e) => Verdict { name: name.to_string(), passed: false, detail: e.to_string() },
    }
}

/// All checks in dependency order. A failed check does not stop the
/// independent ones; checks that need the Gram matrix are marked skipped if
/// it could not be built, and condition 3 waits for Gram symmetry.
pub fn run_all(alg: &HeckeAlgebra, group: &FiniteGroup, cfg: &VerifyConfig) -> VerificationReport {
    let [ms, mt, mu] = Gen::ALL.map(|g| &alg.generator(g).entries);
    let certification = Verdict::from_result("certification", &certify_matrices(ms, mt, mu), |_| {
        "five relations hold exactly; word_of(i) e_1 = e_i for i = 1..96".into()
    });
    let centre =
        Verdict::from_result("centre", &certify_centre(alg), |_| "z = (stu)^3 = (tus)^3 = (ust)^3 is central".into());
    let built = gram::build_gram(alg);
    let (symmetry, determinant, oracle, condition2) = match &built {
        Ok(a) => {
            let symmetry =
                gram_verdict("gram symmetry", gram::check_symmetry(a), |_| "4560 off-diagonal pairs agree".into());
            let ((determinant, oracle), condition2) = rayon::join(
                || {
                    (
                        gram_verdict("determinant", gram::determinant_check(a, &cfg.det), |r| match r.mode {
                            gram::DetMode::Probabilistic => {
                                format!("b^512*d^1032 at {} points mod {} primes", r.points_checked, r.primes.len())
                            }
                            gram::DetMode::Exact => "b^512*d^1032 exactly".into(),
                        }),
                        gram_verdict("oracle", gram::oracle_check(alg, a, cfg.oracle), |n| format!("{n} pairs agree")),
                    )
                },
                || {
                    Verdict::from_result("condition 2", &check_condition2(alg, a, group), |s| {
                        format!("group of order {} with centre of order {}; tau -> delta", s.order, s.centre)
                    })
                },
            );
            (symmetry, determinant, oracle, condition2)
        }
        Err(e) => {
            let skipped = |name: &str| {
                Verdict::from_result::<()>(name, &Err(VerifyError::Skipped(e.to_string())), |_| String::new())
            };
            (skipped("gram symmetry"), skipped("determinant"), skipped("oracle"), skipped("condition 2"))
        }
    };
    let (condition3, condition3_values) = if symmetry.passed {
        let r = check_condition3(alg);
        let values = r.clone().unwrap_or_else(|_| condition3_values(alg));
        (Verdict::from_result("condition 3", &r, |v| format!("tau(z^4 b_i^-1) = 0 for {} indices", v.len())), values)
    } else {
        let r: Result<(), _> = Err(VerifyError::Skipped("trace property not established".into()));
        (Verdict::from_result("condition 3", &r, |_| String::new()), Vec::new())
    };
    let trace_values = Verdict::from_result("trace values", &check_trace_values(alg), |v| {
        v.iter().map(|(n, x)| format!("{n} = {x}")).collect::<Vec<_>>().join(", ")
    });
    let t58 = alg.generator(Gen::T).apply(&HeckeElement::basis(58));
    let golden =
        Verdict::from_result("golden vector", &check_golden(&t58), |_| "t * b_58 matches at all anchors".into());
    VerificationReport {
        certification,
        centre,
        symmetry,
        determinant,
        oracle,
        condition2,
        condition3,
        trace_values,
        golden,
        condition3_values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_recognition() {
        let mut m: Matrix<i64> = Matrix::zeros(3, 3);
        m[(1, 0)] = 1;
        m[(0, 1)] = 1;
        m[(2, 2)] = 1;
        assert_eq!(as_permutation(&m), Some(vec![1, 0, 2]));
        m[(2, 0)] = 1;
        assert_eq!(as_permutation(&m), None);
        let mut n: Matrix<i64> = Matrix::identity(2);
        n[(0, 0)] = 2;
        assert_eq!(as_permutation(&n), None);
    }

    #[test]
    fn composition_order() {
        let p = vec![1, 2, 0];
        let q = vec![1, 0, 2];
        // (p after q)(0) = p(1) = 2
        assert_eq!(compose(&p, &q)[0], 2);
    }

    #[test]
    fn golden_anchor_mismatch() {
        let err = check_golden(&HeckeElement::basis(58)).unwrap_err();
        assert!(matches!(err, VerifyError::GoldenMismatch { index: 22, .. }));
    }

    #[test]
    fn verdict_display() {
        let v = Verdict { name: "x".into(), passed: false, detail: "y".into() };
        assert_eq!(v.to_string(), "[FAIL] x: y");
    }
}
