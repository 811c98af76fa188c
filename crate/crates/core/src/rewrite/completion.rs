//! Noncommutative Buchberger completion over a field.
//!
//! Polynomials live in the free algebra on the letters `0..n` with the
//! degree-lexicographic order. For the Hecke presentation over a prime field
//! the completed system has 96 normal words, which is what makes it usable
//! as an evaluation oracle: every product can be normalised at a point.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use crate::scalar::Field;

/// A word in the free monoid, ordered by length and then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DlWord(pub Vec<u8>);

impl Ord for DlWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for DlWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of the free algebra, terms sorted by decreasing word.
#[derive(Clone, Debug, PartialEq)]
pub struct NcPoly<F> {
    terms: Vec<(DlWord, F)>,
}

impl<F: Field> NcPoly<F> {
    pub fn zero() -> Self {
        NcPoly { terms: Vec::new() }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Vec<u8>, F)>) -> Self {
        let mut map: BTreeMap<DlWord, F> = BTreeMap::new();
        for (w, c) in terms {
            let e = map.entry(DlWord(w)).or_insert_with(F::zero);
            *e = e.add_ref(&c);
        }
        Self::from_map(map)
    }

    fn from_map(map: BTreeMap<DlWord, F>) -> Self {
        NcPoly { terms: map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(DlWord, F)] {
        &self.terms
    }

    pub fn lead(&self) -> Option<&(DlWord, F)> {
        self.terms.first()
    }

    /// `left * self * right` for words `left`, `right`.
    fn sandwich(&self, left: &[u8], right: &[u8]) -> impl Iterator<Item = (Vec<u8>, F)> + '_ {
        let (left, right) = (left.to_vec(), right.to_vec());
        self.terms.iter().map(move |(w, c)| {
            let mut v = left.clone();
            v.extend_from_slice(&w.0);
            v.extend_from_slice(&right);
            (v, *c)
        })
    }
}

#[derive(Clone, Debug)]
struct Rule<F> {
    lead: Vec<u8>,
    /// `lead = rhs` in the quotient.
    rhs: Vec<(Vec<u8>, F)>,
    alive: bool,
}

impl<F: Field> Rule<F> {
    fn as_poly(&self) -> NcPoly<F> {
        let mut t = vec![(self.lead.clone(), F::one())];
        t.extend(self.rhs.iter().map(|(w, c)| (w.clone(), c.neg_ref())));
        NcPoly::from_terms(t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompletionError {
    #[error("completion did not finish within {0} rules")]
    TooManyRules(usize),
    #[error("relation {0} is zero")]
    ZeroRelation(usize),
}

/// Pending overlap between two rules, ordered by the length of the
/// ambiguous word (shortest first).
#[derive(PartialEq, Eq)]
struct Pair {
    len: usize,
    seq: usize,
    i: usize,
    j: usize,
    kind: PairKind,
}

#[derive(PartialEq, Eq, Clone, Copy)]
enum PairKind {
    /// suffix of lead i of length k equals prefix of lead j
    Overlap(usize),
}

impl Ord for Pair {
    fn cmp(&self, o: &Self) -> Ordering {
        o.len.cmp(&self.len).then_with(|| o.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Pair {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// A completed (Gröbner) rewriting system.
#[derive(Clone, Debug)]
pub struct Completion<F> {
    letters: u8,
    rules: Vec<Rule<F>>,
    by_first: Vec<Vec<usize>>,
}

impl<F: Field> Completion<F> {
    fn empty(letters: u8) -> Self {
        Completion { letters, rules: Vec::new(), by_first: vec![Vec::new(); letters as usize] }
    }

    /// Complete the two-sided ideal generated by `relations`.
    pub fn new(letters: u8, relations: &[NcPoly<F>], max_rules: usize) -> Result<Self, CompletionError> {
        let mut gb = Self::empty(letters);
        let mut pairs = BinaryHeap::new();
        let mut seq = 0usize;
        let mut queue: Vec<NcPoly<F>> = Vec::new();
        for (n, r) in relations.iter().enumerate() {
            if r.is_zero() {
                return Err(CompletionError::ZeroRelation(n));
            }
            queue.push(r.clone());
        }
        loop {
            while let Some(p) = queue.pop() {
                let p = gb.normal_form(&p);
                if p.is_zero() {
                    continue;
                }
                if gb.rules.len() >= max_rules {
                    return Err(CompletionError::TooManyRules(max_rules));
                }
                let idx = gb.insert(p);
                // Retire rules whose lead became reducible; their polynomial
                // goes back into the queue.
                let lead = gb.rules[idx].lead.clone();
                for q in 0..idx {
                    if gb.rules[q].alive && contains(&gb.rules[q].lead, &lead) {
                        gb.rules[q].alive = false;
                        gb.by_first[gb.rules[q].lead[0] as usize].retain(|&x| x != q);
                        queue.push(gb.rules[q].as_poly());
                    }
                }
                for q in 0..=idx {
                    if !gb.rules[q].alive {
                        continue;
                    }
                    for (i, j) in [(idx, q), (q, idx)] {
                        let (li, lj) = (&gb.rules[i].lead, &gb.rules[j].lead);
                        for k in 1..li.len().min(lj.len()) {
                            if li[li.len() - k..] == lj[..k] {
                                seq += 1;
                                pairs.push(Pair {
                                    len: li.len() + lj.len() - k,
                                    seq,
                                    i,
                                    j,
                                    kind: PairKind::Overlap(k),
                                });
                            }
                        }
                        if i == j {
                            break;
                        }
                    }
                }
            }
            let Some(pair) = pairs.pop() else { break };
            let (ri, rj) = (&gb.rules[pair.i], &gb.rules[pair.j]);
            if !ri.alive || !rj.alive {
                continue;
            }
            let PairKind::Overlap(k) = pair.kind;
            let right = &rj.lead[k..];
            let left = &ri.lead[..ri.lead.len() - k];
            let pi = ri.as_poly();
            let pj = rj.as_poly();
            let mut terms: Vec<(Vec<u8>, F)> = pi.sandwich(&[], right).collect();
            terms.extend(pj.sandwich(left, &[]).map(|(w, c)| (w, c.neg_ref())));
            queue.push(NcPoly::from_terms(terms));
        }
        gb.interreduce();
        Ok(gb)
    }

    fn insert(&mut self, p: NcPoly<F>) -> usize {
        let (lead, lc) = p.terms[0].clone();
        let inv = lc.inv().expect("non-zero leading coefficient");
        let rhs = p.terms[1..].iter().map(|(w, c)| (w.0.clone(), c.mul_ref(&inv).neg_ref())).collect();
        let idx = self.rules.len();
        self.by_first[lead.0[0] as usize].push(idx);
        self.rules.push(Rule { lead: lead.0, rhs, alive: true });
        idx
    }

    /// Drop retired rules and normalise right-hand sides.
    fn interreduce(&mut self) {
        let alive: Vec<Rule<F>> = self.rules.iter().filter(|r| r.alive).cloned().collect();
        let mut out = Self::empty(self.letters);
        for r in &alive {
            let idx = out.rules.len();
            out.by_first[r.lead[0] as usize].push(idx);
            out.rules.push(r.clone());
        }
        for idx in 0..out.rules.len() {
            let tail = NcPoly::from_terms(out.rules[idx].rhs.clone());
            let nf = out.normal_form(&tail);
            out.rules[idx].rhs = nf.terms.into_iter().map(|(w, c)| (w.0, c)).collect();
        }
        *self = out;
    }

    pub fn num_rules(&self) -> usize {
        self.rules.len()
    }

    pub fn leads(&self) -> impl Iterator<Item = &[u8]> {
        self.rules.iter().filter(|r| r.alive).map(|r| r.lead.as_slice())
    }

    /// First (rule, position) whose lead occurs in `w`, scanning left to right.
    fn find_match(&self, w: &[u8]) -> Option<(usize, usize)> {
        for pos in 0..w.len() {
            for &r in &self.by_first[w[pos] as usize] {
                let lead = &self.rules[r].lead;
                if w.len() - pos >= lead.len() && w[pos..pos + lead.len()] == lead[..] {
                    return Some((r, pos));
                }
            }
        }
        None
    }

    pub fn is_normal(&self, w: &[u8]) -> bool {
        self.find_match(w).is_none()
    }

    pub fn normal_form(&self, p: &NcPoly<F>) -> NcPoly<F> {
        let mut work: BTreeMap<DlWord, F> = p.terms.iter().cloned().collect();
        let mut done: BTreeMap<DlWord, F> = BTreeMap::new();
        while let Some((w, c)) = work.pop_last() {
            if c.is_zero() {
                continue;
            }
            match self.find_match(&w.0) {
                None => {
                    done.insert(w, c);
                }
                Some((r, pos)) => {
                    let rule = &self.rules[r];
                    let (left, right) = (&w.0[..pos], &w.0[pos + rule.lead.len()..]);
                    for (t, x) in &rule.rhs {
                        let mut v = Vec::with_capacity(left.len() + t.len() + right.len());
                        v.extend_from_slice(left);
                        v.extend_from_slice(t);
                        v.extend_from_slice(right);
                        let e = work.entry(DlWord(v)).or_insert_with(F::zero);
                        e.add_mul_assign(&c, x);
                    }
                }
            }
        }
        NcPoly::from_map(done)
    }

    pub fn normal_form_word(&self, w: &[u8]) -> NcPoly<F> {
        self.normal_form(&NcPoly::from_terms([(w.to_vec(), F::one())]))
    }

    /// All normal words, in increasing order. `None` if there are more than
    /// `limit` of them (the quotient is then not the expected finite one).
    pub fn normal_words(&self, limit: usize) -> Option<Vec<Vec<u8>>> {
        let mut out = vec![Vec::new()];
        let mut frontier = vec![Vec::new()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                for x in 0..self.letters {
                    let mut v: Vec<u8> = w.clone();
                    v.push(x);
                    // Only suffixes can create a new match.
                    if self.suffix_match(&v) {
                        continue;
                    }
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            if out.len() > limit {
                return None;
            }
            frontier = next;
        }
        out.sort_by_key(|a| DlWord(a.clone()));
        Some(out)
    }

    fn suffix_match(&self, w: &[u8]) -> bool {
        self.rules.iter().any(|r| r.alive && w.ends_with(&r.lead))
    }
}

fn contains(hay: &[u8], needle: &[u8]) -> bool {
    hay.len() >= needle.len() && hay.windows(needle.len()).any(|x| x == needle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, P61};
    use crate::scalar::Ring;

    type F = Fp<P61>;

    fn f(x: i64) -> F {
        F::from_i64(x)
    }

    #[test]
    fn commutative_polynomial_ring_quotient() {
        // x^2 = 1, y^2 = 1, yx = xy: four normal words.
        let rels = vec![
            NcPoly::from_terms([(vec![0, 0], f(1)), (vec![], f(-1))]),
            NcPoly::from_terms([(vec![1, 1], f(1)), (vec![], f(-1))]),
            NcPoly::from_terms([(vec![1, 0], f(1)), (vec![0, 1], f(-1))]),
        ];
        let gb = Completion::new(2, &rels, 100).unwrap();
        let nw = gb.normal_words(100).unwrap();
        assert_eq!(nw, vec![vec![], vec![0], vec![1], vec![0, 1]]);
        let nf = gb.normal_form_word(&[1, 0, 1, 0, 1]);
        assert_eq!(nf.terms(), &[(DlWord(vec![1]), f(1))]);
    }

    #[test]
    fn symmetric_group_s3() {
        // Coxeter presentation of S3 with Hecke-type quadratics at q = 1.
        let rels = vec![
            NcPoly::from_terms([(vec![0, 0], f(1)), (vec![], f(-1))]),
            NcPoly::from_terms([(vec![1, 1], f(1)), (vec![], f(-1))]),
            NcPoly::from_terms([(vec![0, 1, 0], f(1)), (vec![1, 0, 1], f(-1))]),
        ];
        let gb = Completion::new(2, &rels, 100).unwrap();
        assert_eq!(gb.normal_words(100).unwrap().len(), 6);
    }

    #[test]
    fn deglex_order() {
        assert!(DlWord(vec![2]) < DlWord(vec![0, 0]));
        assert!(DlWord(vec![0, 1]) < DlWord(vec![1, 0]));
    }
}
