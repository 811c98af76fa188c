//! The rule-driven reducer and the table-building steps built on it.

use std::collections::{HashMap, HashSet, VecDeque};

use num_traits::Zero;

use crate::algebra::{quadratic, MulMatrix};
use crate::basis::{self, Gen, Letter, Word, RANK, SHORT_WORDS};
use crate::laurent::LaurentPoly;
use crate::matrix::Matrix;
use crate::rewrite::rules::RuleTable;
use crate::rewrite::LinComb;
use crate::ExactMatrix;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RewriteError {
    #[error("reduction budget of {0} steps exhausted")]
    BudgetExhausted(u64),
    #[error("intermediate word of length {len} exceeds the limit {limit}")]
    WordTooLong { len: usize, limit: usize },
    #[error("reduction of {gen} * b_{index} does not terminate")]
    NonTerminating { gen: Gen, index: usize },
    #[error("no rule rewrites {0}")]
    MissingRule(String),
    #[error("vanishing pattern violated: row {row} has a non-zero entry at b_{index}")]
    VanishingPatternViolated { row: usize, index: usize },
    #[error("route mismatch in M_{gen} at ({row}, {col})")]
    TableMismatch { gen: Gen, row: usize, col: usize },
    #[error("while reducing {gen} * b_{index}: {source}")]
    AtProduct { gen: Gen, index: usize, source: Box<RewriteError> },
}

impl RewriteError {
    /// Whether the failure is the reducer running out of budget.
    pub fn is_budget(&self) -> bool {
        match self {
            RewriteError::BudgetExhausted(_)
            | RewriteError::WordTooLong { .. }
            | RewriteError::NonTerminating { .. } => true,
            RewriteError::AtProduct { source, .. } => source.is_budget(),
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_steps: u64,
    /// Intermediate words may have length at most `factor * |input| + slack`.
    pub length_factor: usize,
    pub length_slack: usize,
    /// States visited by one braid-class search.
    pub braid_states: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_steps: 1_000_000, length_factor: 4, length_slack: 12, braid_states: 10_000 }
    }
}

impl Budget {
    pub fn word_limit(&self, input_len: usize) -> usize {
        self.length_factor * input_len + self.length_slack
    }
}

/// Outcome of a braid-class search from a positive word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BraidMove {
    /// An equivalent word is the basis word `b_n`.
    Basis(usize),
    /// An equivalent word has a square `gg` at `pos`.
    Square { word: Vec<Gen>, pos: usize },
}

/// The rule that fires first on `g * z^k E[m] t^l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TopRule {
    TSuffix,
    Hecke,
    Basis(usize),
    Printed(usize),
    Central,
    Braid(BraidMove),
    Special(usize),
    Missing,
}

const BRAIDS: [(&[Gen], &[Gen]); 2] = [
    (&[Gen::T, Gen::U, Gen::S, Gen::T], &[Gen::U, Gen::S, Gen::T, Gen::U]),
    (&[Gen::S, Gen::T, Gen::U, Gen::S, Gen::T], &[Gen::U, Gen::S, Gen::T, Gen::U, Gen::S]),
];

fn braid_neighbours(w: &[Gen]) -> Vec<Vec<Gen>> {
    let mut out = Vec::new();
    for (x, y) in BRAIDS {
        for (from, to) in [(x, y), (y, x)] {
            if w.len() < from.len() {
                continue;
            }
            for i in 0..=w.len() - from.len() {
                if &w[i..i + from.len()] == from {
                    let mut v = w[..i].to_vec();
                    v.extend_from_slice(to);
                    v.extend_from_slice(&w[i + from.len()..]);
                    out.push(v);
                }
            }
        }
    }
    out
}

/// Breadth-first search through the braid class of `w`, preferring a basis
/// word over a square.
pub fn braid_search(w: &[Gen], max_states: usize) -> Option<BraidMove> {
    let mut seen = HashSet::from([w.to_vec()]);
    let mut queue = VecDeque::from([w.to_vec()]);
    let mut square = None;
    while let Some(x) = queue.pop_front() {
        if let Some(n) = basis::index_of_tail(0, &x) {
            return Some(BraidMove::Basis(n));
        }
        if square.is_none() {
            if let Some(pos) = x.windows(2).position(|p| p[0] == p[1]) {
                square = Some(BraidMove::Square { word: x.clone(), pos });
            }
        }
        for y in braid_neighbours(&x) {
            if seen.len() >= max_states {
                break;
            }
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    square
}

pub(crate) fn classify(table: &RuleTable, g: Gen, k: usize, l: usize, m: usize, braid_states: usize) -> TopRule {
    if l == 1 {
        return TopRule::TSuffix;
    }
    let tail = SHORT_WORDS[m - 1];
    if tail.first() == Some(&g) {
        return TopRule::Hecke;
    }
    let mut w = vec![g];
    w.extend_from_slice(tail);
    if let Some(n) = basis::index_of_tail(k, &w) {
        return TopRule::Basis(n);
    }
    if let Some(i) = table.printed.iter().position(|c| c.applies(g, k, tail)) {
        return TopRule::Printed(i);
    }
    if k > 0 {
        return TopRule::Central;
    }
    if let Some(mv) = braid_search(&w, braid_states) {
        return TopRule::Braid(mv);
    }
    match table.product_rule(g, m) {
        Some(_) => TopRule::Special(m),
        None => TopRule::Missing,
    }
}

/// Which rule fires on `g * E[m]`.
pub fn top_rule(table: &RuleTable, g: Gen, m: usize) -> TopRule {
    classify(table, g, 0, 0, m, Budget::default().braid_states)
}

/// Memoised reducer over a fixed rule table. Products `g * b_j` are cached;
/// a product that is requested while it is being computed is reported as
/// non-terminating instead of recursing.
pub struct Reducer {
    table: RuleTable,
    budget: Budget,
    memo: HashMap<(Gen, usize), LinComb>,
    active: HashSet<(Gen, usize)>,
    steps: u64,
    limit: usize,
}

impl Reducer {
    pub fn new(table: RuleTable, budget: Budget) -> Self {
        Reducer { table, budget, memo: HashMap::new(), active: HashSet::new(), steps: 0, limit: usize::MAX }
    }

    pub fn table(&self) -> &RuleTable {
        &self.table
    }

    pub fn cached(&self) -> usize {
        self.memo.len()
    }

    fn start(&mut self, input_len: usize) {
        self.steps = 0;
        self.limit = self.budget.word_limit(input_len);
    }

    /// Coordinates of the image of `w`.
    pub fn reduce(&mut self, w: &Word) -> Result<LinComb, RewriteError> {
        self.start(w.len());
        self.reduce_inner(w)
    }

    /// `g * b_j` on the basis.
    pub fn product(&mut self, g: Gen, j: usize) -> Result<LinComb, RewriteError> {
        self.start(1 + basis::word_of(j).map(|w| w.len()).unwrap_or(0));
        self.left_gen(g, j)
    }

    fn reduce_inner(&mut self, w: &Word) -> Result<LinComb, RewriteError> {
        if w.len() > self.limit {
            return Err(RewriteError::WordTooLong { len: w.len(), limit: self.limit });
        }
        let mut acc = LinComb::unit(1);
        for l in w.letters().iter().rev() {
            acc = self.left_letter(*l, &acc)?;
        }
        Ok(acc)
    }

    fn left_letter(&mut self, l: Letter, x: &LinComb) -> Result<LinComb, RewriteError> {
        let mut out = LinComb::zero();
        match l {
            Letter::Gen(g) => {
                for (j, c) in x.iter() {
                    let p = self.left_gen(g, j)?;
                    out.add_scaled(&p, c);
                }
            }
            Letter::Z => {
                for (j, c) in x.iter() {
                    let p = self.left_z(j)?;
                    out.add_scaled(&p, c);
                }
            }
            Letter::Inv(g) => {
                // g^-1 = q^-1 g - q^-1 p
                let (p, q) = quadratic(g);
                let qinv = q.unit_inverse().expect("unit");
                out = self.left_letter(Letter::Gen(g), x)?.scale(&qinv);
                out.add_scaled(x, &-(&p * &qinv));
            }
            Letter::ZInv => {
                let inv = Word(vec![Letter::Z]).expand_z().inverse();
                out = x.clone();
                for l in inv.letters().iter().rev() {
                    out = self.left_letter(*l, &out)?;
                }
            }
        }
        Ok(out)
    }

    fn left_z(&mut self, j: usize) -> Result<LinComb, RewriteError> {
        let (k, l, m) = basis::decompose(j).map_err(|_| RewriteError::MissingRule(format!("z * b_{j}")))?;
        if k < 3 {
            return Ok(LinComb::unit(j + 24));
        }
        let rule = self.table.overflow_rule(m).ok_or_else(|| RewriteError::MissingRule(format!("z * b_{}", 72 + m)))?;
        let r = rule.rhs.clone();
        Ok(if l == 1 { r.times_t() } else { r })
    }

    fn tick(&mut self) -> Result<(), RewriteError> {
        self.steps += 1;
        if self.steps > self.budget.max_steps {
            return Err(RewriteError::BudgetExhausted(self.budget.max_steps));
        }
        Ok(())
    }

    fn left_gen(&mut self, g: Gen, j: usize) -> Result<LinComb, RewriteError> {
        self.tick()?;
        if let Some(r) = self.memo.get(&(g, j)) {
            return Ok(r.clone());
        }
        if j > RANK {
            return Err(RewriteError::MissingRule(format!("{g} * b_{j}")));
        }
        if !self.active.insert((g, j)) {
            return Err(RewriteError::NonTerminating { gen: g, index: j });
        }
        let r = self.compute(g, j);
        self.active.remove(&(g, j));
        let r = r?;
        self.memo.insert((g, j), r.clone());
        Ok(r)
    }

    fn compute(&mut self, g: Gen, j: usize) -> Result<LinComb, RewriteError> {
        let (k, l, m) = basis::decompose(j).expect("basis index");
        let tail = SHORT_WORDS[m - 1];
        match classify(&self.table, g, k, l, m, self.budget.braid_states) {
            TopRule::TSuffix => Ok(self.left_gen(g, j - 12)?.times_t()),
            TopRule::Hecke => {
                let (p, q) = quadratic(g);
                let rest = basis::index_of_tail(k, &tail[1..]).expect("suffix of a basis word");
                let mut r = LinComb::zero();
                r.add_term(j, &p);
                r.add_term(rest, &q);
                Ok(r)
            }
            TopRule::Basis(n) => Ok(LinComb::unit(n)),
            TopRule::Printed(i) => {
                let terms = self.table.printed[i].rhs_words(k, 0);
                let mut r = LinComb::zero();
                for (c, w) in terms {
                    let x = self.reduce_inner(&w)?;
                    r.add_scaled(&x, &c);
                }
                Ok(r)
            }
            TopRule::Central => {
                let mut r = self.left_gen(g, j - 24 * k)?;
                for _ in 0..k {
                    r = self.left_letter(Letter::Z, &r)?;
                }
                Ok(r)
            }
            TopRule::Braid(BraidMove::Basis(n)) => Ok(LinComb::unit(n)),
            TopRule::Braid(BraidMove::Square { word, pos }) => {
                let x = word[pos];
                let (p, q) = quadratic(x);
                let to_word = |v: Vec<Gen>| Word(v.into_iter().map(Letter::Gen).collect());
                let mut once = word[..pos].to_vec();
                once.extend_from_slice(&word[pos + 1..]);
                let mut none = word[..pos].to_vec();
                none.extend_from_slice(&word[pos + 2..]);
                let mut r = self.reduce_inner(&to_word(once))?.scale(&p);
                r.add_scaled(&self.reduce_inner(&to_word(none))?, &q);
                Ok(r)
            }
            TopRule::Special(m) => Ok(self.table.product_rule(g, m).expect("classified").rhs.clone()),
            TopRule::Missing => Err(RewriteError::MissingRule(format!("{g} * b_{j}"))),
        }
    }
}

/// `M * x` for a multiplication table and a combination on the basis.
fn apply(mm: &MulMatrix, x: &LinComb) -> LinComb {
    LinComb::from_element(&mm.apply(&x.to_element().expect("basis combination")))
}

/// The rows `s * b_81` and `s * b_93`, from `b_81 = d^-1 (tu b_94 - c tu b_82)`
/// and `b_93 = tu b_82` after left multiplication by `s`.
pub fn s81_s93(mt: &MulMatrix, mu: &MulMatrix) -> (LinComb, LinComb) {
    let tu = |j| apply(mt, &apply(mu, &LinComb::unit(j)));
    let (x94, x82) = (tu(94), tu(82));
    let dinv = LaurentPoly::d().unit_inverse().expect("unit");
    let mut r81 = x94.scale(&dinv);
    r81.add_scaled(&x82, &-(&LaurentPoly::c() * &dinv));
    (r81, x82)
}

/// Replace the extra elements `b_97..b_100` in the rows of `s` by their
/// coordinates: `b_97 = t (s b_8)`, `b_98 = t (s b_20)`, `b_99 = u (t b_36)`,
/// `b_100 = u (t b_48)`.
pub fn eliminate_extras(rows: &[LinComb], mt: &MulMatrix, mu: &MulMatrix) -> Result<Vec<LinComb>, RewriteError> {
    assert_eq!(rows.len(), RANK);
    for (row, banned) in [(8, [97, 98, 100]), (20, [97, 98, 99])] {
        for index in banned {
            if !rows[row - 1].get(index).is_zero() {
                return Err(RewriteError::VanishingPatternViolated { row, index });
            }
        }
    }
    let d99 = apply(mu, &apply(mt, &LinComb::unit(36)));
    let d100 = apply(mu, &apply(mt, &LinComb::unit(48)));
    let fold = |row: &LinComb, extras: &[(usize, &LinComb)]| {
        let mut out = LinComb::zero();
        for (i, c) in row.iter().filter(|(i, _)| *i <= RANK) {
            out.add_term(i, c);
        }
        for (e, d) in extras {
            out.add_scaled(d, &row.get(*e));
        }
        out
    };
    let s8 = fold(&rows[7], &[(99, &d99)]);
    let s20 = fold(&rows[19], &[(100, &d100)]);
    let d97 = apply(mt, &s8);
    let d98 = apply(mt, &s20);
    let extras = [(97, &d97), (98, &d98), (99, &d99), (100, &d100)];
    Ok((1..=RANK)
        .map(|j| match j {
            8 => s8.clone(),
            20 => s20.clone(),
            _ => fold(&rows[j - 1], &extras),
        })
        .collect())
}

/// Column `j` of the result holds row `j` of `rows`.
pub fn rows_to_matrix(rows: &[LinComb]) -> ExactMatrix {
    let mut m = Matrix::zeros(RANK, RANK);
    for (j, r) in rows.iter().enumerate() {
        for (n, c) in r.iter() {
            assert!(n <= RANK, "extra element in a finished row");
            m[(n - 1, j)] = c.clone();
        }
    }
    m
}

/// The three generator tables through the reducer. The rows `s b_81` and
/// `s b_93` come from the `t` and `u` tables, then the extra elements are
/// eliminated from the `s` rows.
pub fn generator_coeffs(reducer: &mut Reducer) -> Result<[ExactMatrix; 3], RewriteError> {
    let mut rows = |g: Gen, skip: &[usize]| -> Result<Vec<LinComb>, RewriteError> {
        (1..=RANK)
            .map(|j| {
                if skip.contains(&j) {
                    return Ok(LinComb::zero());
                }
                reducer.product(g, j).map_err(|e| RewriteError::AtProduct { gen: g, index: j, source: Box::new(e) })
            })
            .collect()
    };
    let t_rows = rows(Gen::T, &[])?;
    let u_rows = rows(Gen::U, &[])?;
    let mut s_rows = rows(Gen::S, &[81, 93])?;
    let mt = MulMatrix::new(crate::algebra::MatrixTag::T, rows_to_matrix(&t_rows));
    let mu = MulMatrix::new(crate::algebra::MatrixTag::U, rows_to_matrix(&u_rows));
    let (r81, r93) = s81_s93(&mt, &mu);
    s_rows[80] = r81;
    s_rows[92] = r93;
    let s_rows = eliminate_extras(&s_rows, &mt, &mu)?;
    Ok([rows_to_matrix(&s_rows), mt.entries, mu.entries])
}

/// Entry-for-entry agreement of two sets of tables.
pub fn compare_routes(x: &[ExactMatrix; 3], y: &[ExactMatrix; 3]) -> Result<(), RewriteError> {
    for g in Gen::ALL {
        let (a, b) = (&x[g.index()], &y[g.index()]);
        for n in 0..RANK {
            for j in 0..RANK {
                if a[(n, j)] != b[(n, j)] {
                    return Err(RewriteError::TableMismatch { gen: g, row: j + 1, col: n + 1 });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn printed_only() -> Reducer {
        Reducer::new(RuleTable::printed_only(), Budget::default())
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn worked_examples() {
        let mut r = printed_only();
        assert_eq!(r.reduce(&w("ts")).unwrap(), LinComb::unit(4));
        let x = r.reduce(&w("tts")).unwrap();
        assert_eq!(x.get(4), LaurentPoly::c());
        assert_eq!(x.get(3), LaurentPoly::d());
        assert_eq!(x.len(), 2);
        let y = r.reduce(&w("ssts")).unwrap();
        assert_eq!(y.get(10), LaurentPoly::a());
        assert_eq!(y.get(4), LaurentPoly::b());
        assert_eq!(y.len(), 2);
    }

    #[test]
    fn basis_words_reduce_to_units() {
        let mut r = printed_only();
        for i in 1..=RANK {
            let word = basis::word_of(i).unwrap();
            assert_eq!(r.reduce(&word).unwrap(), LinComb::unit(i), "b_{i}");
        }
    }

    #[test]
    fn inverse_letters() {
        let mut r = printed_only();
        // s^-1 s = 1
        assert_eq!(r.reduce(&w("s^-1*s")).unwrap(), LinComb::unit(1));
        assert_eq!(r.reduce(&w("t*u^-1*u")).unwrap(), LinComb::unit(13));
    }

    #[test]
    fn braid_class_search() {
        // ustu = tust, and tust is b_21 = tus * t
        assert_eq!(braid_search(&[Gen::U, Gen::S, Gen::T, Gen::U], 100), Some(BraidMove::Basis(21)));
        match braid_search(&[Gen::S, Gen::S], 100) {
            Some(BraidMove::Square { pos: 0, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_rules_are_reported() {
        let mut r = printed_only();
        let err = r.reduce(&w("z^3*z*u")).unwrap_err();
        assert!(matches!(err, RewriteError::MissingRule(_)), "{err}");
    }

    #[test]
    fn step_budget() {
        let budget = Budget { max_steps: 3, ..Budget::default() };
        let mut r = Reducer::new(RuleTable::printed_only(), budget);
        assert_eq!(r.reduce(&w("tsutsu")), Err(RewriteError::BudgetExhausted(3)));
    }

    #[test]
    fn word_limit() {
        let mut r = printed_only();
        r.limit = 2;
        assert!(matches!(r.reduce_inner(&w("sts")), Err(RewriteError::WordTooLong { len: 3, limit: 2 })));
    }

    #[test]
    fn vanishing_pattern() {
        let mt = MulMatrix::new(crate::algebra::MatrixTag::T, Matrix::identity(RANK));
        let mu = MulMatrix::new(crate::algebra::MatrixTag::U, Matrix::identity(RANK));
        let mut rows: Vec<LinComb> = (1..=RANK).map(LinComb::unit).collect();
        rows[7].add_term(97, &LaurentPoly::a());
        assert_eq!(
            eliminate_extras(&rows, &mt, &mu),
            Err(RewriteError::VanishingPatternViolated { row: 8, index: 97 })
        );
    }
}
