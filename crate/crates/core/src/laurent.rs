//! Sparse Laurent polynomials over Z in the four parameters `a, b, c, d`,
//! with `b` and `d` invertible.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use dashu_int::IBig;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::field::{DynFp, Fp};
use crate::scalar::Ring;

/// Arbitrary-precision coefficient type.
pub type Integer = IBig;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("{0} is not a unit of the coefficient ring")]
    NotAUnit(String),
    #[error("evaluation point sends a unit parameter to zero")]
    ZeroAtUnit,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("exact division failed: {0}")]
    NotDivisible(String),
}

/// Exponent vector `(ea, eb, ec, ed)`; `ea, ec >= 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub [i32; 4]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 4]);

    pub fn new(ea: i32, eb: i32, ec: i32, ed: i32) -> Self {
        assert!(ea >= 0 && ec >= 0, "a and c are not invertible");
        Monomial([ea, eb, ec, ed])
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|e| (*e as i64).abs()).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2], self.0[3] + o.0[3]])
    }

    /// Bidegree in the grading `deg a = (1,0)`, `deg b = (2,0)`,
    /// `deg c = (0,1)`, `deg d = (0,2)`.
    pub fn bidegree(&self) -> (i32, i32) {
        (self.0[0] + 2 * self.0[1], self.0[2] + 2 * self.0[3])
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree().cmp(&other.total_degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of Z[a, b^±1, c, d^±1] in canonical form: terms sorted by the
/// graded monomial order, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(Monomial, Integer)>,
}

impl LaurentPoly {
    pub fn constant(c: impl Into<Integer>) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn term(m: Monomial, c: impl Into<Integer>) -> Self {
        let c = c.into();
        if c == IBig::ZERO {
            Self::default()
        } else {
            LaurentPoly { terms: vec![(m, c)] }
        }
    }

    pub fn monomial(ea: i32, eb: i32, ec: i32, ed: i32) -> Self {
        Self::term(Monomial::new(ea, eb, ec, ed), 1)
    }

    pub fn a() -> Self {
        Self::monomial(1, 0, 0, 0)
    }
    pub fn b() -> Self {
        Self::monomial(0, 1, 0, 0)
    }
    pub fn c() -> Self {
        Self::monomial(0, 0, 1, 0)
    }
    pub fn d() -> Self {
        Self::monomial(0, 0, 0, 1)
    }

    /// Build from arbitrary terms; merges duplicates and drops zeros.
    pub fn from_terms(mut terms: Vec<(Monomial, Integer)>) -> Self {
        terms.sort_unstable_by_key(|x| x.0);
        let mut out: Vec<(Monomial, Integer)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| *c != IBig::ZERO);
        LaurentPoly { terms: out }
    }

    pub fn terms(&self) -> &[(Monomial, Integer)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (x, y) = (&self.terms, &other.terms);
        while i < x.len() && j < y.len() {
            match x[i].0.cmp(&y[j].0) {
                Ordering::Less => {
                    out.push(x[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let c = if negate_other { -&y[j].1 } else { y[j].1.clone() };
                    out.push((y[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other { &x[i].1 - &y[j].1 } else { &x[i].1 + &y[j].1 };
                    if c != IBig::ZERO {
                        out.push((x[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&x[i..]);
        for t in &y[j..] {
            let c = if negate_other { -&t.1 } else { t.1.clone() };
            out.push((t.0, c));
        }
        LaurentPoly { terms: out }
    }

    pub fn scale_monomial(&self, m: &Monomial, c: &Integer) -> Self {
        if *c == IBig::ZERO {
            return Self::default();
        }
        let mut terms: Vec<_> = self.terms.iter().map(|(tm, tc)| (tm.mul(m), tc * c)).collect();
        // Multiplying by a monomial can reorder terms under a graded order.
        terms.sort_unstable_by_key(|x| x.0);
        LaurentPoly { terms }
    }

    /// Inverse of `self` if it is a unit: a single term `±b^i d^j`.
    pub fn unit_inverse(&self) -> Option<Self> {
        match self.terms.as_slice() {
            [(m, c)] if m.0[0] == 0 && m.0[2] == 0 && (*c == IBig::ONE || *c == -IBig::ONE) => {
                Some(Self::term(Monomial([0, -m.0[1], 0, -m.0[3]]), c.clone()))
            }
            _ => None,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.unit_inverse().is_some()
    }

    pub fn div_unit(&self, u: &LaurentPoly) -> Result<Self, LaurentError> {
        let inv = u.unit_inverse().ok_or_else(|| LaurentError::NotAUnit(u.to_string()))?;
        Ok(self.mul_ref(&inv))
    }

    /// Image under `a -> 0, b -> 1, c -> 0, d -> 1`.
    pub fn specialise_group_algebra(&self) -> Integer {
        self.terms.iter().filter(|(m, _)| m.0[0] == 0 && m.0[2] == 0).fold(IBig::ZERO, |acc, (_, c)| acc + c)
    }

    /// Evaluate in a prime field of run-time modulus.
    pub fn evaluate(&self, point: [DynFp; 4]) -> Result<DynFp, LaurentError> {
        let p = point[0].modulus;
        if point[1].is_zero() || point[3].is_zero() {
            return Err(LaurentError::ZeroAtUnit);
        }
        let mut acc = DynFp::new(0, p);
        for (m, c) in &self.terms {
            let mut v = coeff_mod(c, p);
            for (k, x) in point.iter().enumerate() {
                if m.0[k] != 0 {
                    v = v * x.powi(m.0[k] as i64).expect("units checked above");
                }
            }
            acc = acc + v;
        }
        Ok(acc)
    }

    /// Evaluate in the const-generic prime field.
    pub fn evaluate_fp<const P: u64>(&self, point: [Fp<P>; 4]) -> Result<Fp<P>, LaurentError> {
        let dyn_point = point.map(|x| DynFp::new(x.value(), P));
        self.evaluate(dyn_point).map(|v| Fp::new(v.value))
    }

    /// Whether every term has the given bidegree.
    pub fn is_homogeneous_of(&self, deg: (i32, i32)) -> bool {
        self.terms.iter().all(|(m, _)| m.bidegree() == deg)
    }

    /// Per-variable exponent range over all terms.
    fn exponent_box(&self) -> ([i32; 4], [i32; 4]) {
        let mut lo = [i32::MAX; 4];
        let mut hi = [i32::MIN; 4];
        for (m, _) in &self.terms {
            for k in 0..4 {
                lo[k] = lo[k].min(m.0[k]);
                hi[k] = hi[k].max(m.0[k]);
            }
        }
        (lo, hi)
    }

    /// Exact quotient by an arbitrary divisor, by long division in lex order.
    /// Lowest and highest degree in each variable are additive, so every
    /// quotient exponent is confined to a box; that bounds the loop. `a` and
    /// `c` are not invertible, so their exponents must also stay non-negative.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Result<Self, LaurentError> {
        if divisor.is_zero() {
            return Err(LaurentError::NotDivisible("division by zero".into()));
        }
        if let Some(inv) = divisor.unit_inverse() {
            return Ok(self.mul_ref(&inv));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let fail = || LaurentError::NotDivisible(format!("{} by {}", self, divisor));
        let (nlo, nhi) = self.exponent_box();
        let (dlo, dhi) = divisor.exponent_box();
        let lead_d = divisor.terms.iter().max_by_key(|(m, _)| m.0).cloned().expect("non-zero");
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some(lead_r) = rem.terms.iter().max_by_key(|(m, _)| m.0).cloned() {
            let qm = Monomial(std::array::from_fn(|k| lead_r.0 .0[k] - lead_d.0 .0[k]));
            let outside = (0..4).any(|k| qm.0[k] < nlo[k] - dlo[k] || qm.0[k] > nhi[k] - dhi[k]);
            if outside || qm.0[0] < 0 || qm.0[2] < 0 {
                return Err(fail());
            }
            let (q, r) = (&lead_r.1 / &lead_d.1, &lead_r.1 % &lead_d.1);
            if r != IBig::ZERO {
                return Err(fail());
            }
            rem = rem.sub_ref(&divisor.scale_monomial(&qm, &q));
            quot.push((qm, q));
        }
        Ok(LaurentPoly::from_terms(quot))
    }
}

impl crate::matrix::ExactDiv for LaurentPoly {
    fn div_exact(&self, divisor: &Self) -> Option<Self> {
        LaurentPoly::div_exact(self, divisor).ok()
    }
}

fn coeff_mod(c: &Integer, p: u64) -> DynFp {
    let m = IBig::from(p);
    let r = ((c % &m) + &m) % &m;
    DynFp::new(u64::try_from(r).expect("reduced below modulus"), p)
}

/// Coefficient of a Laurent polynomial reduced into `Fp<P>`.
pub fn integer_to_fp<const P: u64>(c: &Integer) -> Fp<P> {
    Fp::new(coeff_mod(c, P).value)
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = *c < IBig::ZERO;
            let abs = if neg { -c } else { c.clone() };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mut factors = Vec::new();
            if abs != IBig::ONE || *m == Monomial::ONE {
                factors.push(abs.to_string());
            }
            for (k, name) in ["a", "b", "c", "d"].iter().enumerate() {
                match m.0[k] {
                    0 => {}
                    1 => factors.push((*name).to_string()),
                    e => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for LaurentPoly {
    type Err = LaurentError;

    /// Parses sums of products such as `"b^3*d^6 - 2*a*c + d^-1"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || LaurentError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        // Split into signed terms; a '-' directly after '^' belongs to an exponent.
        let mut pieces = Vec::new();
        let mut current = String::new();
        let mut prev = '\0';
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !current.is_empty() && prev != '^' && prev != '(' {
                pieces.push(std::mem::take(&mut current));
            }
            current.push(ch);
            prev = ch;
        }
        pieces.push(current);
        let mut terms = Vec::new();
        for piece in pieces {
            let (sign, body) = match piece.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, piece.strip_prefix('+').unwrap_or(&piece)),
            };
            let mut coeff = IBig::from(sign);
            let mut exps = [0i32; 4];
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(err());
                }
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => {
                        let e = e.trim_start_matches('(').trim_end_matches(')');
                        let e = e.trim_start_matches('{').trim_end_matches('}');
                        (b, e.parse::<i32>().map_err(|_| err())?)
                    }
                    None => (factor, 1),
                };
                match base {
                    "a" => exps[0] += exp,
                    "b" => exps[1] += exp,
                    "c" => exps[2] += exp,
                    "d" => exps[3] += exp,
                    digits => {
                        let v = IBig::from_str_radix(digits, 10).map_err(|_| err())?;
                        if exp < 0 {
                            return Err(err());
                        }
                        coeff *= v.pow(exp as usize);
                    }
                }
            }
            if exps[0] < 0 || exps[2] < 0 {
                return Err(LaurentError::Parse(format!("{s}: negative power of a or c")));
            }
            terms.push((Monomial(exps), coeff));
        }
        Ok(LaurentPoly::from_terms(terms))
    }
}

impl Add for LaurentPoly {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        self.merge(&o, false)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        self.merge(o, false)
    }
}

impl Sub for LaurentPoly {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self.merge(&o, true)
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self.merge(o, true)
    }
}

impl Neg for LaurentPoly {
    type Output = Self;
    fn neg(self) -> Self {
        LaurentPoly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Mul for LaurentPoly {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        self.mul_ref(&o)
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        self.mul_ref(o)
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        Self::constant(1)
    }
}

impl Ring for LaurentPoly {
    fn add_ref(&self, o: &Self) -> Self {
        self.merge(o, false)
    }

    fn sub_ref(&self, o: &Self) -> Self {
        self.merge(o, true)
    }

    fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::default();
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return o.scale_monomial(m, c);
        }
        if o.terms.len() == 1 {
            let (m, c) = &o.terms[0];
            return self.scale_monomial(m, c);
        }
        let mut prods = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                prods.push((m1.mul(m2), c1 * c2));
            }
        }
        LaurentPoly::from_terms(prods)
    }

    fn neg_ref(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    fn from_i64(v: i64) -> Self {
        Self::constant(v)
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coeff: String,
    exp: [i32; 4],
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<TermRepr> = self.terms.iter().map(|(m, c)| TermRepr { coeff: c.to_string(), exp: m.0 }).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let v: Vec<TermRepr> = Vec::deserialize(d)?;
        let mut terms = Vec::with_capacity(v.len());
        for t in v {
            if t.exp[0] < 0 || t.exp[2] < 0 {
                return Err(D::Error::custom("negative exponent of a or c"));
            }
            let c = IBig::from_str_radix(&t.coeff, 10).map_err(D::Error::custom)?;
            terms.push((Monomial(t.exp), c));
        }
        let canonical = terms.windows(2).all(|w| w[0].0 < w[1].0) && terms.iter().all(|(_, c)| *c != IBig::ZERO);
        if !canonical {
            return Err(D::Error::custom("terms not in canonical order"));
        }
        Ok(LaurentPoly { terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn identities() {
        let q = p("3*a*b^-2 - c*d + 7");
        assert_eq!(q.add_ref(&LaurentPoly::zero()), q);
        assert!(p("a").add_ref(&p("-a")).is_zero());
        assert_eq!(LaurentPoly::one().mul_ref(&q), q);
        assert_eq!(p("b").mul_ref(&p("b^-1")), LaurentPoly::one());
    }

    #[test]
    fn sum_and_product_oracles() {
        // term-merge oracle: four distinct monomials, each coefficient 1
        let sum = p("a + b").add_ref(&p("c + d"));
        assert_eq!(sum.len(), 4);
        assert!(sum.terms().iter().all(|(_, c)| *c == IBig::ONE));
        assert_eq!(sum, p("d + c + b + a"));
        let prod = p("a + b").mul_ref(&p("c + d"));
        assert_eq!(prod, p("a*c + a*d + b*c + b*d"));
    }

    #[test]
    fn unit_division() {
        assert_eq!(p("b*d^2").div_unit(&p("d")).unwrap(), p("b*d"));
        assert_eq!(p("c*b^6*d^12").div_unit(&p("d")).unwrap(), p("c*b^6*d^11"));
        assert!(matches!(p("b").div_unit(&p("a")), Err(LaurentError::NotAUnit(_))));
        assert!(matches!(p("b").div_unit(&p("2*b")), Err(LaurentError::NotAUnit(_))));
        assert_eq!(p("b").div_unit(&p("-b^-1*d")).unwrap(), p("-b^2*d^-1"));
    }

    #[test]
    fn evaluation() {
        let pt = |xs: [u64; 4]| xs.map(|x| DynFp::new(x, 101));
        assert_eq!(LaurentPoly::one().evaluate(pt([5, 6, 7, 8])).unwrap().value, 1);
        assert_eq!(p("b*d").evaluate(pt([9, 2, 9, 3])).unwrap().value, 6);
        assert_eq!(p("b^-1").evaluate(pt([0, 2, 0, 1])).unwrap().value, 51);
        assert_eq!(p("b").evaluate(pt([1, 0, 1, 1])), Err(LaurentError::ZeroAtUnit));
        assert_eq!(p("-3").evaluate(pt([1, 1, 1, 1])).unwrap().value, 98);
    }

    #[test]
    fn group_algebra_specialisation() {
        assert_eq!(p("b^6*d^12").specialise_group_algebra(), IBig::ONE);
        assert_eq!(p("c*b^6*d^12").specialise_group_algebra(), IBig::ZERO);
        assert_eq!(p("a*b + 2*b^-1 - d^3 + a*c").specialise_group_algebra(), IBig::ONE);
    }

    #[test]
    fn display_and_parse_roundtrip() {
        let q = p("-a*c + b^3*d^6 + 2*a^2*c - d^-1 + 5");
        assert_eq!(p(&q.to_string()), q);
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert!("a^-1".parse::<LaurentPoly>().is_err());
        assert!("x".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn json_format() {
        let q = p("b^3*d^6 - a*c");
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, r#"[{"coeff":"-1","exp":[1,0,1,0]},{"coeff":"1","exp":[0,3,0,6]}]"#);
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
        assert!(serde_json::from_str::<LaurentPoly>(
            r#"[{"coeff":"1","exp":[0,3,0,6]},{"coeff":"-1","exp":[1,0,1,0]}]"#
        )
        .is_err());
    }

    #[test]
    fn exact_division() {
        let x = p("a + b^-1*c");
        let y = p("c^2 - 3*a*d + b");
        let prod = x.mul_ref(&y);
        assert_eq!(prod.div_exact(&y).unwrap(), x);
        assert_eq!(prod.div_exact(&x).unwrap(), y);
        assert!(p("a + 1").div_exact(&p("c")).is_err());
        assert!(p("a + 1").div_exact(&p("2*a")).is_err());
        // quotient with a b exponent below both operands'
        let q = p("3*a^2*b^-3*c + 10*d^-2");
        let m = p("-6*a*b^2*d^3");
        assert_eq!(q.mul_ref(&m).div_exact(&m).unwrap(), q);
    }

    #[test]
    fn homogeneity() {
        // deg(b^3 d^6) = (6, 12)
        assert!(p("b^3*d^6 + a^2*b^2*d^6 + a^2*b^2*c^2*d^5").is_homogeneous_of((6, 12)));
        assert!(!p("a + b").is_homogeneous_of((1, 0)));
    }
}
