//! Index scheme for the 96-element basis and the four auxiliary spanning
//! elements, and the words that define them.
//!
//! Index `i = 24k + 12l + m` (`k < 4`, `l < 2`, `1 <= m <= 12`) names
//! `z^k * E[m] * t^l`, where `E` lists the twelve short words below.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const RANK: usize = 96;
pub const EXTENDED: usize = 100;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BasisError {
    #[error("index {0} out of range")]
    OutOfRange(usize),
    #[error("cannot parse word: {0}")]
    Parse(String),
}

/// The three Hecke generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gen {
    S,
    T,
    U,
}

impl Gen {
    pub const ALL: [Gen; 3] = [Gen::S, Gen::T, Gen::U];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Gen::S => "s",
            Gen::T => "t",
            Gen::U => "u",
        }
    }

    /// Bidegree `(#s, #t + #u)`.
    pub fn bidegree(self) -> (i32, i32) {
        match self {
            Gen::S => (1, 0),
            Gen::T | Gen::U => (0, 1),
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A letter of a braid word: a generator, its inverse, or the central
/// element `z = (stu)^3` and its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    Gen(Gen),
    Inv(Gen),
    Z,
    ZInv,
}

pub const S: Letter = Letter::Gen(Gen::S);
pub const T: Letter = Letter::Gen(Gen::T);
pub const U: Letter = Letter::Gen(Gen::U);
pub const Z: Letter = Letter::Z;

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::Gen(g) => Letter::Inv(g),
            Letter::Inv(g) => Letter::Gen(g),
            Letter::Z => Letter::ZInv,
            Letter::ZInv => Letter::Z,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Gen(g) => write!(f, "{g}"),
            Letter::Inv(g) => write!(f, "{g}^-1"),
            Letter::Z => f.write_str("z"),
            Letter::ZInv => f.write_str("z^-1"),
        }
    }
}

/// A finite sequence of letters; the empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|l| matches!(l, Letter::Gen(_) | Letter::Z))
    }

    /// Replace every `z` by `stustustu` (and `z^-1` by its inverse), giving
    /// a word in the generators and their inverses only.
    pub fn expand_z(&self) -> Word {
        let z_word = [S, T, U, S, T, U, S, T, U];
        let mut out = Vec::with_capacity(self.0.len());
        for l in &self.0 {
            match l {
                Letter::Z => out.extend_from_slice(&z_word),
                Letter::ZInv => out.extend(z_word.iter().rev().map(|x| x.inverse())),
                other => out.push(*other),
            }
        }
        Word(out)
    }

    /// Bidegree `(#s, #t + #u)` of a positive word, `z` counting as `(3, 6)`.
    pub fn bidegree(&self) -> (i32, i32) {
        self.0.iter().fold((0, 0), |(x, y), l| match l {
            Letter::Gen(g) => (x + g.bidegree().0, y + g.bidegree().1),
            Letter::Inv(g) => (x - g.bidegree().0, y - g.bidegree().1),
            Letter::Z => (x + 3, y + 6),
            Letter::ZInv => (x - 3, y - 6),
        })
    }

    /// Generators only (no inverses, no `z`), as a slice of [`Gen`].
    pub fn as_generators(&self) -> Option<Vec<Gen>> {
        self.0
            .iter()
            .map(|l| match l {
                Letter::Gen(g) => Some(*g),
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        // Collapse runs of equal letters into powers.
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let mut j = i;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            let run = j - i;
            let (base, sign) = match self.0[i] {
                Letter::Gen(g) => (g.name(), 1i64),
                Letter::Inv(g) => (g.name(), -1),
                Letter::Z => ("z", 1),
                Letter::ZInv => ("z", -1),
            };
            let e = sign * run as i64;
            if e == 1 {
                parts.push(base.to_string());
            } else {
                parts.push(format!("{base}^{e}"));
            }
            i = j;
        }
        f.write_str(&parts.join("*"))
    }
}

impl FromStr for Word {
    type Err = BasisError;

    /// Accepts `"z^2*u*t*s*t"`, `"tsts"`, `"t^-1*s^-1"`, or `"1"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || BasisError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact == "1" || compact.is_empty() {
            return Ok(Word::empty());
        }
        let mut out = Vec::new();
        let chars: Vec<char> = compact.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c == '*' {
                i += 1;
                continue;
            }
            let (pos, neg) = match c {
                's' => (S, Letter::Inv(Gen::S)),
                't' => (T, Letter::Inv(Gen::T)),
                'u' => (U, Letter::Inv(Gen::U)),
                'z' => (Letter::Z, Letter::ZInv),
                _ => return Err(err()),
            };
            i += 1;
            let mut exp: i64 = 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let start = i;
                if i < chars.len() && (chars[i] == '-' || chars[i] == '+') {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let txt: String = chars[start..i].iter().collect();
                exp = txt.parse().map_err(|_| err())?;
            }
            let letter = if exp < 0 { neg } else { pos };
            for _ in 0..exp.unsigned_abs() {
                out.push(letter);
            }
        }
        Ok(Word(out))
    }
}

/// The twelve words `E[1..=12]` in their fixed order.
pub const SHORT_WORDS: [&[Gen]; 12] = [
    &[],
    &[Gen::U],
    &[Gen::S],
    &[Gen::T, Gen::S],
    &[Gen::S, Gen::U],
    &[Gen::U, Gen::S],
    &[Gen::T, Gen::U],
    &[Gen::T, Gen::S, Gen::U],
    &[Gen::T, Gen::U, Gen::S],
    &[Gen::S, Gen::T, Gen::S],
    &[Gen::S, Gen::T, Gen::U],
    &[Gen::U, Gen::T, Gen::S],
];

/// Index into the extended spanning set, `1..=100`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisIndex(usize);

impl BasisIndex {
    pub fn new(i: usize) -> Result<Self, BasisError> {
        if (1..=EXTENDED).contains(&i) {
            Ok(BasisIndex(i))
        } else {
            Err(BasisError::OutOfRange(i))
        }
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Zero-based position in a length-96 (or 100) vector.
    pub fn pos(self) -> usize {
        self.0 - 1
    }

    pub fn is_basis(self) -> bool {
        self.0 <= RANK
    }
}

/// Decompose `i = 24k + 12l + m`.
pub fn decompose(i: usize) -> Result<(usize, usize, usize), BasisError> {
    if !(1..=RANK).contains(&i) {
        return Err(BasisError::OutOfRange(i));
    }
    let r = i - 1;
    Ok((r / 24, (r % 24) / 12, r % 12 + 1))
}

/// Inverse of [`decompose`].
pub fn compose(k: usize, l: usize, m: usize) -> usize {
    debug_assert!(k < 4 && l < 2 && (1..=12).contains(&m));
    24 * k + 12 * l + m
}

/// Defining word of `b_i` for `1 <= i <= 100`.
pub fn word_of(i: usize) -> Result<Word, BasisError> {
    match i {
        97 => Ok("tstsu".parse().unwrap()),
        98 => Ok("tstsut".parse().unwrap()),
        99 => Ok("z*ututs".parse().unwrap()),
        100 => Ok("z*ututst".parse().unwrap()),
        _ => {
            let (k, l, m) = decompose(i)?;
            let mut letters = vec![Letter::Z; k];
            letters.extend(SHORT_WORDS[m - 1].iter().map(|g| Letter::Gen(*g)));
            if l == 1 {
                letters.push(T);
            }
            Ok(Word(letters))
        }
    }
}

/// The generator-only tail of `b_i` (its defining word without the `z^k` prefix).
pub fn tail_of(i: usize) -> Result<Vec<Gen>, BasisError> {
    let (_, l, m) = decompose(i)?;
    let mut v = SHORT_WORDS[m - 1].to_vec();
    if l == 1 {
        v.push(Gen::T);
    }
    Ok(v)
}

/// Bidegree of `b_i`.
pub fn bidegree_of(i: usize) -> Result<(i32, i32), BasisError> {
    word_of(i).map(|w| w.bidegree())
}

/// Index of the basis element whose defining word is `z^k * w`, if any.
pub fn index_of_tail(k: usize, tail: &[Gen]) -> Option<usize> {
    if k > 3 {
        return None;
    }
    let (body, l) = match tail.last() {
        Some(Gen::T) => {
            let body = &tail[..tail.len() - 1];
            match SHORT_WORDS.iter().position(|w| *w == body) {
                Some(m) => return Some(compose(k, 1, m + 1)),
                None => (tail, 0),
            }
        }
        _ => (tail, 0),
    };
    SHORT_WORDS.iter().position(|w| *w == body).map(|m| compose(k, l, m + 1))
}

/// `b_{24k+m} = b_{24k+m'} * g` for `2 <= m <= 24`; the same pair works
/// for every `k`.
pub fn parent(m: usize) -> Result<(usize, Gen), BasisError> {
    let r = match m {
        2 => (1, Gen::U),
        3 => (1, Gen::S),
        13 => (1, Gen::T),
        4 => (13, Gen::S),
        5 => (3, Gen::U),
        6 => (2, Gen::S),
        7 => (13, Gen::U),
        8 => (4, Gen::U),
        9 => (7, Gen::S),
        15 => (3, Gen::T),
        10 => (15, Gen::S),
        11 => (15, Gen::U),
        14 => (2, Gen::T),
        12 => (14, Gen::S),
        16..=24 => (m - 12, Gen::T),
        _ => return Err(BasisError::OutOfRange(m)),
    };
    Ok(r)
}

/// Order in which rows `24k + m` are completed so every parent row is
/// already available.
pub const ROW_ORDER: [usize; 23] = [2, 3, 13, 4, 5, 6, 7, 8, 9, 15, 10, 11, 14, 12, 16, 17, 18, 19, 20, 21, 22, 23, 24];
