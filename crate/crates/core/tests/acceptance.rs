//! One line per acceptance criterion. Pass `--oracle` to compare all 9216
//! Gram entries instead of a sample:
//! `cargo test -p hecke13 --test acceptance -- --oracle`.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use hecke13::algebra::HeckeElement;
use hecke13::gram::{self, DetConfig, DetMode, OraclePairs};
use hecke13::rewrite::{generator_coeffs, Budget, Reducer};
use hecke13::verify;
use hecke13::{Gen, LaurentPoly, Ring};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Line {
    number: usize,
    name: &'static str,
    result: Result<String, String>,
}

fn check(number: usize, name: &'static str, f: impl FnOnce() -> Result<String, String>) -> Line {
    Line { number, name, result: f() }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn properties() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let samples = 1000;
    for _ in 0..samples {
        let (x, y, z) =
            (common::random_poly(&mut rng, 5), common::random_poly(&mut rng, 5), common::random_poly(&mut rng, 5));
        let ok = &x + &y == &y + &x
            && &(&x + &y) + &z == &x + &(&y + &z)
            && &x * &y == &y * &x
            && &(&x * &y) * &z == &x * &(&y * &z)
            && &x * &(&y + &z) == &(&x * &y) + &(&x * &z)
            && &x + &LaurentPoly::zero() == x
            && &x * &LaurentPoly::one() == x
            && (&x - &x.clone()).is_zero();
        if !ok {
            return Err(format!("ring axiom fails at x = {x}, y = {y}, z = {z}"));
        }
        let pt = [
            hecke13::Fp61::random(&mut rng),
            hecke13::Fp61::random_nonzero(&mut rng),
            hecke13::Fp61::random(&mut rng),
            hecke13::Fp61::random_nonzero(&mut rng),
        ];
        let ev = |p: &LaurentPoly| p.evaluate_fp(pt).unwrap();
        if ev(&(&x * &y)) != ev(&x).mul_ref(&ev(&y)) || ev(&(&x + &y)) != ev(&x).add_ref(&ev(&y)) {
            return Err(format!("evaluation is not a homomorphism at x = {x}, y = {y}"));
        }
    }
    // reducer determinism: two fresh reducers, identical tables
    let b = common::built();
    let tables = || generator_coeffs(&mut Reducer::new(b.rules.clone(), Budget::default())).map_err(err);
    if tables()? != tables()? {
        return Err("two reductions disagree".into());
    }
    // fault injection: each corruption must be caught
    let alg = &b.algebra;
    let mut ms = alg.generator(Gen::S).entries.clone();
    ms[(4, 7)] = &ms[(4, 7)] + &LaurentPoly::a();
    let (mt, mu) = (&alg.generator(Gen::T).entries, &alg.generator(Gen::U).entries);
    if verify::certify_matrices(&ms, mt, mu).is_ok() {
        return Err("corrupted M_s was certified".into());
    }
    let mut a = common::gram().clone();
    a[(10, 40)] = &a[(10, 40)] + &LaurentPoly::c();
    if gram::check_symmetry(&a).is_ok() {
        return Err("asymmetric Gram matrix accepted".into());
    }
    let mut a = common::gram().clone();
    for j in 0..96 {
        a[(3, j)] = a[(3, j)].mul_ref(&LaurentPoly::b());
        a[(j, 3)] = a[(j, 3)].mul_ref(&LaurentPoly::b());
    }
    if gram::determinant_check(&a, &DetConfig::default()).is_ok() {
        return Err("wrong determinant accepted".into());
    }
    Ok(format!("{samples} ring-axiom and evaluation samples; reducer deterministic; 3 injected faults detected"))
}

fn main() -> ExitCode {
    let full_oracle = std::env::args().any(|a| a == "--oracle");
    let start = Instant::now();
    let b = common::built();
    let alg = &b.algebra;
    let build_time = start.elapsed();
    let a = common::gram();
    let mut lines = Vec::new();

    lines.push(check(1, "matrix certification", || {
        let [ms, mt, mu] = Gen::ALL.map(|g| &alg.generator(g).entries);
        verify::certify_matrices(ms, mt, mu).map_err(err)?;
        verify::certify_centre(alg).map_err(err)?;
        Ok("5 relations exact, word_of(i) e_1 = e_i for 96 indices, reducer and interpolation agree".into())
    }));
    lines.push(check(2, "gram symmetry", || {
        gram::check_symmetry(a).map_err(err)?;
        Ok(format!("4560 off-diagonal pairs agree (build {:.1?})", build_time))
    }));
    lines.push(check(3, "determinant", || {
        let r = gram::determinant_check(a, &DetConfig { mode: DetMode::Probabilistic, seed: 2024, points: 20 })
            .map_err(err)?;
        let exact = gram::determinant_check(a, &DetConfig { mode: DetMode::Exact, ..DetConfig::default() });
        let exact = if exact.is_ok() { "; exact Bareiss agrees" } else { "; exact Bareiss FAILED" };
        if r.points_checked < 20 || r.primes.len() < 2 {
            return Err("too few points".into());
        }
        Ok(format!("b^512*d^1032 at {} points over {} primes{exact}", r.points_checked, r.primes.len()))
    }));
    lines.push(check(4, "condition 3", || {
        let v = verify::check_condition3(alg).map_err(err)?;
        let t = verify::check_trace_values(alg).map_err(err)?;
        let quoted: Vec<String> = t.iter().map(|(n, x)| format!("{n} = {x}")).collect();
        Ok(format!("{} traces vanish; {}", v.len(), quoted.join(", ")))
    }));
    lines.push(check(5, "condition 2", || {
        let s = verify::check_condition2(alg, a, &b.group).map_err(err)?;
        Ok(format!("96 distinct permutations, group of order {}, centre of order {}, tau -> delta", s.order, s.centre))
    }));
    lines.push(check(6, "golden vector", || {
        let mut r = Reducer::new(b.rules.clone(), Budget::default());
        let x = r.product(Gen::T, 58).map_err(err)?;
        let h: HeckeElement = x.to_element().ok_or("extra element in t * b_58")?;
        verify::check_golden(&h).map_err(err)?;
        Ok(format!("t * b_58 has {} terms, all anchors match", h.support().count()))
    }));
    lines.push(check(7, "oracle equivalence", || {
        let pairs = if full_oracle { OraclePairs::All } else { OraclePairs::Sampled { count: 200, seed: 11 } };
        let n = gram::oracle_check(alg, a, pairs).map_err(err)?;
        Ok(format!("{n} pairs agree with tau(b_i b_j) computed directly"))
    }));
    lines.push(check(8, "property suites", || {
        let r = properties()?;
        let total = start.elapsed();
        if total.as_secs() > 600 {
            return Err(format!("pipeline took {total:?}"));
        }
        Ok(format!("{r}; total {total:.1?}"))
    }));

    let mut failed = 0;
    for l in &lines {
        match &l.result {
            Ok(d) => println!("[PASS] {}. {}: {}", l.number, l.name, d),
            Err(e) => {
                failed += 1;
                println!("[FAIL] {}. {}: {}", l.number, l.name, e)
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", lines.len() - failed, lines.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
