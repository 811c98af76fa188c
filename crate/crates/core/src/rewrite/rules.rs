//! The rule table: printed special cases and derived identities.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{HeckeAlgebra, HeckeElement};
use crate::basis::{self, Gen, Letter, Word, RANK};
use crate::group::FiniteGroup;
use crate::laurent::LaurentPoly;
use crate::rewrite::reduce::{top_rule, TopRule};
use crate::rewrite::LinComb;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RuleError {
    #[error("certification failed for {rule}: {reason}")]
    CertificationFailed { rule: String, reason: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertStatus {
    Pending,
    Certified,
}

/// One summand `coeff * z^(k + z_shift) * body * t^(l + t_shift)` of a
/// printed case.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseTerm {
    pub coeff: LaurentPoly,
    pub z_shift: i32,
    pub body: Word,
    pub t_shift: i32,
}

/// `z^k * g * tail * t^l = sum of terms`, for `k` in `k_min..=k_max` and
/// `l` in `{0, 1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrintedCase {
    pub number: u8,
    pub gen: Gen,
    pub tail: Vec<Gen>,
    pub k_min: usize,
    pub k_max: usize,
    pub rhs: Vec<CaseTerm>,
    pub status: CertStatus,
}

fn power(letter: Letter, inverse: Letter, e: i32) -> Vec<Letter> {
    let l = if e < 0 { inverse } else { letter };
    vec![l; e.unsigned_abs() as usize]
}

impl PrintedCase {
    pub fn applies(&self, g: Gen, k: usize, tail: &[Gen]) -> bool {
        self.gen == g && self.tail == tail && (self.k_min..=self.k_max).contains(&k)
    }

    pub fn lhs(&self, k: usize, l: usize) -> Word {
        let mut v = vec![Letter::Z; k];
        v.push(Letter::Gen(self.gen));
        v.extend(self.tail.iter().map(|g| Letter::Gen(*g)));
        v.extend(vec![Letter::Gen(Gen::T); l]);
        Word(v)
    }

    pub fn rhs_words(&self, k: usize, l: usize) -> Vec<(LaurentPoly, Word)> {
        self.rhs
            .iter()
            .map(|term| {
                let mut v = power(Letter::Z, Letter::ZInv, k as i32 + term.z_shift);
                v.extend_from_slice(term.body.letters());
                v.extend(power(Letter::Gen(Gen::T), Letter::Inv(Gen::T), l as i32 + term.t_shift));
                (term.coeff.clone(), Word(v))
            })
            .collect()
    }

    pub fn name(&self) -> String {
        format!("case {}", self.number)
    }
}

fn term(coeff: &str, z_shift: i32, body: &str, t_shift: i32) -> CaseTerm {
    CaseTerm {
        coeff: coeff.parse().expect("coefficient literal"),
        z_shift,
        body: body.parse().expect("word literal"),
        t_shift,
    }
}

/// The special cases whose statements are printed (5, 8, 12, 14).
pub fn printed_cases() -> Vec<PrintedCase> {
    use Gen::*;
    let case = |number, gen, tail: &[Gen], k_min, k_max, rhs| PrintedCase {
        number,
        gen,
        tail: tail.to_vec(),
        k_min,
        k_max,
        rhs,
        status: CertStatus::Pending,
    };
    vec![
        case(5, S, &[T, U, S], 0, 2, vec![term("1", 1, "t^-1*s^-1*u^-1", -2)]),
        case(
            8,
            T,
            &[S, T, S],
            2,
            3,
            vec![
                term("c", 0, "s*t*s", 0),
                term("a*d", 0, "s", 0),
                term("b*c*d", 0, "1", -1),
                term("a*b*d^2", 0, "t^-1*s^-1", -1),
                term("b^2*d^2", -1, "u*s*t^2*u", 0),
            ],
        ),
        case(12, U, &[S, T, U], 0, 3, vec![term("1", 0, "t*u*s", 1)]),
        case(
            14,
            U,
            &[S, U],
            1,
            3,
            vec![
                term("c", 0, "u*s", 0),
                term("a*d", 0, "1", 0),
                term("b*c*d", 0, "s^-1*u^-1", 0),
                term("b*d^2", -1, "s*t*u^2*s", 1),
            ],
        ),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RuleOrigin {
    /// `g * E[m]` with `k = 0`
    Product { gen: Gen, m: usize },
    /// `z * z^3 * E[m]`
    CentreOverflow { m: usize },
}

/// A derived identity `lhs = rhs` with `rhs` on the basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecialRule {
    pub origin: RuleOrigin,
    pub lhs: Word,
    pub rhs: LinComb,
    pub status: CertStatus,
}

#[derive(Clone, Debug, Default)]
pub struct RuleTable {
    pub printed: Vec<PrintedCase>,
    pub special: Vec<SpecialRule>,
}

impl RuleTable {
    /// Printed cases only; enough to classify which products still need a
    /// derived rule.
    pub fn printed_only() -> Self {
        RuleTable { printed: printed_cases(), special: Vec::new() }
    }

    pub fn product_rule(&self, g: Gen, m: usize) -> Option<&SpecialRule> {
        self.special.iter().find(|r| r.origin == RuleOrigin::Product { gen: g, m })
    }

    pub fn overflow_rule(&self, m: usize) -> Option<&SpecialRule> {
        self.special.iter().find(|r| r.origin == RuleOrigin::CentreOverflow { m })
    }

    pub fn all_certified(&self) -> bool {
        self.printed.iter().all(|c| c.status == CertStatus::Certified)
            && self.special.iter().all(|r| r.status == CertStatus::Certified)
    }
}

impl fmt::Display for RuleTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# printed cases")?;
        for c in &self.printed {
            let rhs: Vec<String> = c.rhs_words(c.k_min, 0).iter().map(|(x, w)| format!("({x})*{w}")).collect();
            writeln!(
                f,
                "case {:>2}  k={}..{}  {} = {}  [{:?}]",
                c.number,
                c.k_min,
                c.k_max,
                c.lhs(c.k_min, 0),
                rhs.join(" + "),
                c.status
            )?;
        }
        writeln!(f, "# derived rules")?;
        for r in &self.special {
            writeln!(f, "{} = {}  [{:?}]", r.lhs, r.rhs, r.status)?;
        }
        Ok(())
    }
}

/// The group-algebra image of `sum coeff * word` as a map element -> integer.
fn group_image(group: &FiniteGroup, terms: &[(LaurentPoly, Word)]) -> Vec<i64> {
    let mut v = vec![0i64; group.order()];
    for (c, w) in terms {
        let x = i64::try_from(c.specialise_group_algebra()).expect("small coefficient");
        v[group.element_of(w)] += x;
    }
    v
}

fn certify_identity(
    name: &str,
    alg: &HeckeAlgebra,
    group: &FiniteGroup,
    lhs: &Word,
    rhs_terms: &[(LaurentPoly, Word)],
) -> Result<(), RuleError> {
    let fail = |reason: &str| RuleError::CertificationFailed { rule: name.to_string(), reason: reason.to_string() };
    let left = group_image(group, &[(LaurentPoly::one(), lhs.clone())]);
    if left != group_image(group, rhs_terms) {
        return Err(fail("group-algebra images differ"));
    }
    let mut right = HeckeElement::zero();
    for (c, w) in rhs_terms {
        right = &right + &alg.word_element(w).scale(c);
    }
    if alg.word_element(lhs) != right {
        return Err(fail("matrix images differ"));
    }
    Ok(())
}

/// Check every instance `(k, l)` of every printed case against the group and
/// the certified tables.
pub fn certify_printed(cases: &mut [PrintedCase], alg: &HeckeAlgebra, group: &FiniteGroup) -> Result<(), RuleError> {
    for case in cases.iter_mut() {
        for k in case.k_min..=case.k_max {
            for l in 0..2 {
                let name = format!("{} (k={k}, l={l})", case.name());
                certify_identity(&name, alg, group, &case.lhs(k, l), &case.rhs_words(k, l))?;
            }
        }
        case.status = CertStatus::Certified;
    }
    Ok(())
}

fn lincomb_terms(rhs: &LinComb) -> Vec<(LaurentPoly, Word)> {
    rhs.iter().map(|(i, c)| (c.clone(), basis::word_of(i).expect("index"))).collect()
}

/// Identities for the products the structural rules cannot resolve, read
/// off certified tables and certified again one by one.
pub fn derive_special_rules(alg: &HeckeAlgebra, group: &FiniteGroup) -> Result<RuleTable, RuleError> {
    let mut table = RuleTable::printed_only();
    certify_printed(&mut table.printed, alg, group)?;
    let mut special = Vec::new();
    for g in Gen::ALL {
        for m in 1..=12 {
            if top_rule(&table, g, m) != TopRule::Missing {
                continue;
            }
            let lhs = Word([Letter::Gen(g)].into_iter().chain(basis::word_of(m).unwrap().0).collect());
            let col = alg.generator(g).apply(&HeckeElement::basis(m));
            special.push(SpecialRule {
                origin: RuleOrigin::Product { gen: g, m },
                lhs,
                rhs: LinComb::from_element(&col),
                status: CertStatus::Pending,
            });
        }
    }
    for m in 1..=12 {
        let j = 72 + m;
        let mut lhs = vec![Letter::Z];
        lhs.extend(basis::word_of(j).unwrap().0);
        let col = alg.z_matrix().apply(&HeckeElement::basis(j));
        special.push(SpecialRule {
            origin: RuleOrigin::CentreOverflow { m },
            lhs: Word(lhs),
            rhs: LinComb::from_element(&col),
            status: CertStatus::Pending,
        });
    }
    for rule in &mut special {
        certify_identity(&rule.lhs.to_string(), alg, group, &rule.lhs, &lincomb_terms(&rule.rhs))?;
        if rule.rhs.max_index().is_some_and(|i| i > RANK) || rule.rhs.iter().any(|(_, c)| c.is_zero()) {
            return Err(RuleError::CertificationFailed { rule: rule.lhs.to_string(), reason: "malformed".into() });
        }
        rule.status = CertStatus::Certified;
    }
    table.special = special;
    Ok(table)
}
