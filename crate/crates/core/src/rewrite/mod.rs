//! Reduction of words to coordinates on the basis.
//!
//! Two independent routes produce the generator tables. The first completes
//! the presentation over a prime field, evaluates the regular representation
//! at many points and interpolates ([`interpolate`]). The second is the
//! rule-driven reducer ([`reduce`]): Hecke and inverse relations, centrality
//! of `z`, the printed special cases and braid moves, with the remaining
//! hard products supplied by certified identities read off the first route.
//! The two must agree entry for entry.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::HeckeElement;
use crate::basis::{self, RANK};
use crate::laurent::LaurentPoly;
use crate::scalar::Ring;

pub mod completion;
pub mod interpolate;
pub mod pointwise;
pub mod reduce;
pub mod rules;

pub use reduce::{
    compare_routes, eliminate_extras, generator_coeffs, rows_to_matrix, s81_s93, Budget, Reducer, RewriteError,
};
pub use rules::{derive_special_rules, PrintedCase, RuleTable, SpecialRule};

/// Sparse combination of `b_1..b_100`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LinComb {
    coeffs: BTreeMap<usize, LaurentPoly>,
}

impl LinComb {
    pub fn zero() -> Self {
        LinComb::default()
    }

    pub fn unit(i: usize) -> Self {
        assert!((1..=basis::EXTENDED).contains(&i));
        let mut c = LinComb::zero();
        c.coeffs.insert(i, LaurentPoly::one());
        c
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, i: usize) -> LaurentPoly {
        self.coeffs.get(&i).cloned().unwrap_or_else(LaurentPoly::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &LaurentPoly)> {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `self += c * e_i`
    pub fn add_term(&mut self, i: usize, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(i).or_insert_with(LaurentPoly::zero);
        e.add_assign_ref(c);
        if e.is_zero() {
            self.coeffs.remove(&i);
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &LinComb, c: &LaurentPoly) {
        for (i, x) in other.iter() {
            self.add_term(i, &(x * c));
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> LinComb {
        let mut out = LinComb::zero();
        out.add_scaled(self, c);
        out
    }

    /// Largest index present.
    pub fn max_index(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn only_basis(&self) -> bool {
        self.max_index().is_none_or(|i| i <= RANK)
    }

    pub fn to_element(&self) -> Option<HeckeElement> {
        if !self.only_basis() {
            return None;
        }
        let mut v = vec![LaurentPoly::zero(); RANK];
        for (i, c) in self.iter() {
            v[i - 1] = c.clone();
        }
        Some(HeckeElement::from_coords(v))
    }

    pub fn from_element(h: &HeckeElement) -> Self {
        let mut out = LinComb::zero();
        for (i, c) in h.support() {
            out.add_term(i, c);
        }
        out
    }

    /// Right multiplication by `t`: `b_n t = b_{n+12}` when `b_n` does not
    /// end in `t`, and `c b_n + d b_{n-12}` when it does.
    pub fn times_t(&self) -> LinComb {
        let mut out = LinComb::zero();
        for (n, x) in self.iter() {
            let ends_in_t = match n {
                97 | 99 => false,
                98 | 100 => true,
                _ => basis::decompose(n).expect("basis index").1 == 1,
            };
            if ends_in_t {
                let prev = if n > RANK { n - 1 } else { n - 12 };
                out.add_term(n, &(x * &LaurentPoly::c()));
                out.add_term(prev, &(x * &LaurentPoly::d()));
            } else {
                let next = if n > RANK { n + 1 } else { n + 12 };
                out.add_term(next, x);
            }
        }
        out
    }
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.iter().map(|(i, c)| format!("({c})*b_{i}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_t_shortcut() {
        let x = LinComb::unit(4).times_t();
        assert_eq!(x, LinComb::unit(16));
        let y = LinComb::unit(16).times_t();
        assert_eq!(y.get(16), LaurentPoly::c());
        assert_eq!(y.get(4), LaurentPoly::d());
        assert_eq!(LinComb::unit(97).times_t(), LinComb::unit(98));
        assert_eq!(LinComb::unit(100).times_t().get(99), LaurentPoly::d());
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut x = LinComb::unit(3);
        x.add_term(3, &LaurentPoly::constant(-1));
        assert!(x.is_zero());
        assert!(LinComb::unit(97).to_element().is_none());
        assert_eq!(LinComb::from_element(&LinComb::unit(5).to_element().unwrap()), LinComb::unit(5));
    }
}
