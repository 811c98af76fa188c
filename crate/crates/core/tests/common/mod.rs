#![allow(dead_code)]

use std::sync::OnceLock;

use hecke13::laurent::Integer;
use hecke13::pipeline::{self, BuildConfig, Built};
use hecke13::{LaurentPoly, Monomial};
use proptest::prelude::*;
use rand::Rng;

/// One pipeline run shared by every test in a binary.
pub fn built() -> &'static Built {
    static BUILT: OnceLock<Built> = OnceLock::new();
    BUILT.get_or_init(|| pipeline::build(&BuildConfig::default()).expect("pipeline builds"))
}

pub fn gram() -> &'static hecke13::ExactMatrix {
    static GRAM: OnceLock<hecke13::ExactMatrix> = OnceLock::new();
    GRAM.get_or_init(|| hecke13::gram::build_gram(&built().algebra).expect("gram builds"))
}

pub fn random_poly<R: Rng>(rng: &mut R, max_terms: usize) -> LaurentPoly {
    let n = rng.gen_range(0..=max_terms);
    let terms = (0..n)
        .map(|_| {
            let m = Monomial::new(rng.gen_range(0..4), rng.gen_range(-3..4), rng.gen_range(0..4), rng.gen_range(-3..4));
            (m, Integer::from(rng.gen_range(-20i64..=20)))
        })
        .collect();
    LaurentPoly::from_terms(terms)
}

pub fn poly() -> impl Strategy<Value = LaurentPoly> {
    let term = (0..4i32, -3..4i32, 0..4i32, -3..4i32, -20i64..=20);
    prop::collection::vec(term, 0..6).prop_map(|ts| {
        LaurentPoly::from_terms(
            ts.into_iter().map(|(a, b, c, d, k)| (Monomial::new(a, b, c, d), Integer::from(k))).collect(),
        )
    })
}
