//! The finite group G13 as a permutation group, built by coset enumeration
//! from the presentation `<s, t, u | s^2, t^2, u^2, tust = ustu,
//! stust = ustus>`. It is independent of every matrix computed elsewhere and
//! serves as the oracle for the group-algebra specialisation.

use std::collections::VecDeque;

use crate::basis::{Gen, Letter, Word};

const MAX_COSETS: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("coset enumeration exceeded {0} cosets")]
    TooManyCosets(usize),
}

/// Coset enumeration over the trivial subgroup for a presentation whose
/// generators are all involutions (HLT strategy).
struct Enumerator {
    gens: usize,
    table: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
}

impl Enumerator {
    fn new(gens: usize) -> Self {
        Enumerator { gens, table: vec![vec![None; gens]], parent: vec![0] }
    }

    fn rep(&mut self, mut c: usize) -> usize {
        while self.parent[c] != c {
            let p = self.parent[c];
            self.parent[c] = self.parent[p];
            c = p;
        }
        c
    }

    fn alive(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, g: usize) -> Result<usize, GroupError> {
        let n = self.table.len();
        if n >= MAX_COSETS {
            return Err(GroupError::TooManyCosets(MAX_COSETS));
        }
        self.table.push(vec![None; self.gens]);
        self.parent.push(n);
        self.table[c][g] = Some(n);
        self.table[n][g] = Some(c);
        Ok(n)
    }

    fn merge(&mut self, k: usize, l: usize, queue: &mut Vec<usize>) {
        let (k, l) = (self.rep(k), self.rep(l));
        if k == l {
            return;
        }
        let (m, n) = (k.min(l), k.max(l));
        self.parent[n] = m;
        queue.push(n);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for g in 0..self.gens {
                let Some(f) = self.table[e][g] else { continue };
                self.table[f][g] = None;
                let (e1, f1) = (self.rep(e), self.rep(f));
                if let Some(x) = self.table[e1][g] {
                    self.merge(f1, x, &mut queue);
                } else if let Some(x) = self.table[f1][g] {
                    self.merge(e1, x, &mut queue);
                } else {
                    self.table[e1][g] = Some(f1);
                    self.table[f1][g] = Some(e1);
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, rel: &[usize]) -> Result<(), GroupError> {
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, rel.len() as isize - 1);
        loop {
            while (i as isize) <= j {
                match self.table[f][rel[i]] {
                    Some(x) => {
                        f = x;
                        i += 1;
                    }
                    None => break,
                }
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize {
                match self.table[b][rel[j as usize]] {
                    Some(x) => {
                        b = x;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.table[f][rel[i]] = Some(b);
                self.table[b][rel[i]] = Some(f);
                return Ok(());
            }
            self.define(f, rel[i])?;
        }
    }

    fn run(mut self, relators: &[Vec<usize>]) -> Result<Vec<Vec<usize>>, GroupError> {
        let mut c = 0;
        while c < self.table.len() {
            if self.alive(c) {
                for rel in relators {
                    self.scan_and_fill(c, rel)?;
                    if !self.alive(c) {
                        break;
                    }
                }
                if self.alive(c) {
                    for g in 0..self.gens {
                        if self.table[c][g].is_none() {
                            self.define(c, g)?;
                        }
                    }
                }
            }
            c += 1;
        }
        // Renumber the surviving cosets, keeping coset 0 first.
        let live: Vec<usize> = (0..self.table.len()).filter(|&c| self.alive(c)).collect();
        let mut index = vec![usize::MAX; self.table.len()];
        for (k, &c) in live.iter().enumerate() {
            index[c] = k;
        }
        let mut perms = vec![vec![0; live.len()]; self.gens];
        for (k, &c) in live.iter().enumerate() {
            for (g, perm) in perms.iter_mut().enumerate() {
                let target = self.table[c][g].expect("complete table");
                let target = self.rep(target);
                perm[k] = index[target];
            }
        }
        Ok(perms)
    }
}

/// A group element, identified with the coset `1 * w` it reaches.
pub type Element = usize;

/// G13 with its elements numbered `0..96`; element 0 is the identity.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    /// `right[g][x] = x * g`
    right: Vec<Vec<Element>>,
    /// Shortest word for each element, found breadth first.
    words: Vec<Vec<Gen>>,
}

impl FiniteGroup {
    pub fn g13() -> Result<Self, GroupError> {
        use Gen::*;
        let rels: [&[Gen]; 5] = [&[S, S], &[T, T], &[U, U], &[T, U, S, T, U, T, S, U], &[S, T, U, S, T, S, U, T, S, U]];
        let rels: Vec<Vec<usize>> = rels.iter().map(|r| r.iter().map(|g| g.index()).collect()).collect();
        let right = Enumerator::new(3).run(&rels)?;
        let n = right[0].len();
        let mut words: Vec<Option<Vec<Gen>>> = vec![None; n];
        words[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for g in Gen::ALL {
                let y = right[g.index()][x];
                if words[y].is_none() {
                    let mut w = words[x].clone().expect("visited");
                    w.push(g);
                    words[y] = Some(w);
                    queue.push_back(y);
                }
            }
        }
        let words = words.into_iter().map(|w| w.expect("connected")).collect();
        Ok(FiniteGroup { right, words })
    }

    pub fn order(&self) -> usize {
        self.right[0].len()
    }

    pub fn identity(&self) -> Element {
        0
    }

    pub fn generator(&self, g: Gen) -> Element {
        self.right[g.index()][0]
    }

    /// `x * g`
    pub fn mul_gen(&self, x: Element, g: Gen) -> Element {
        self.right[g.index()][x]
    }

    pub fn mul(&self, x: Element, y: Element) -> Element {
        self.words[y].iter().fold(x, |acc, g| self.mul_gen(acc, *g))
    }

    pub fn inverse(&self, x: Element) -> Element {
        // Generators are involutions: reverse the word.
        self.words[x].iter().rev().fold(0, |acc, g| self.mul_gen(acc, *g))
    }

    /// Image of a braid word under `s, t, u -> generators`; inverses map to
    /// the same involution and `z` to `(stu)^3`.
    pub fn element_of(&self, w: &Word) -> Element {
        w.expand_z().letters().iter().fold(0, |acc, l| match l {
            Letter::Gen(g) | Letter::Inv(g) => self.mul_gen(acc, *g),
            Letter::Z | Letter::ZInv => unreachable!("expanded"),
        })
    }

    pub fn word(&self, x: Element) -> &[Gen] {
        &self.words[x]
    }

    pub fn is_central(&self, x: Element) -> bool {
        Gen::ALL.iter().all(|&g| {
            let gx = self.mul(self.generator(g), x);
            self.mul_gen(x, g) == gx
        })
    }

    pub fn center(&self) -> Vec<Element> {
        (0..self.order()).filter(|&x| self.is_central(x)).collect()
    }

    /// Left multiplication by `g` as a permutation of the elements.
    pub fn left_perm(&self, g: Gen) -> Vec<Element> {
        let gen = self.generator(g);
        (0..self.order()).map(|x| self.mul(gen, x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_and_centre() {
        let g = FiniteGroup::g13().unwrap();
        assert_eq!(g.order(), 96);
        let z = g.element_of(&"z".parse().unwrap());
        assert!(g.is_central(z));
        assert_eq!(g.center().len(), 4);
        // z has order 4 and its powers are the centre
        let mut powers = vec![0];
        let mut x = z;
        while x != 0 {
            powers.push(x);
            x = g.mul(x, z);
        }
        powers.sort();
        assert_eq!(powers, g.center());
    }

    #[test]
    fn relations_hold() {
        let g = FiniteGroup::g13().unwrap();
        let e = |s: &str| g.element_of(&s.parse().unwrap());
        assert_eq!(e("tust"), e("ustu"));
        assert_eq!(e("stust"), e("ustus"));
        assert_eq!(e("ss"), 0);
        assert_eq!(e("stustustu"), e("tustustus"));
        for x in 0..g.order() {
            assert_eq!(g.mul(x, g.inverse(x)), 0);
        }
    }

    #[test]
    fn small_presentation() {
        // S3 = <x, y | x^2, y^2, (xy)^3>
        let perms = Enumerator::new(2).run(&[vec![0, 0], vec![1, 1], vec![0, 1, 0, 1, 0, 1]]).unwrap();
        assert_eq!(perms[0].len(), 6);
    }
}
