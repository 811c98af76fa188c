mod common;

use hecke13::algebra::{HeckeElement, MatrixTag, MulMatrix};
use hecke13::basis::{self, Gen, RANK};
use hecke13::rewrite::reduce::{top_rule, TopRule};
use hecke13::rewrite::rules::{printed_cases, CertStatus, RuleOrigin};
use hecke13::rewrite::{
    compare_routes, eliminate_extras, generator_coeffs, rows_to_matrix, s81_s93, Budget, LinComb, Reducer,
    RewriteError, RuleTable,
};
use hecke13::{LaurentPoly, Word};
use num_traits::Zero;

fn reducer() -> Reducer {
    Reducer::new(common::built().rules.clone(), Budget::default())
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn p(s: &str) -> LaurentPoly {
    s.parse().unwrap()
}

#[test]
fn documented_examples() {
    let mut r = reducer();
    assert_eq!(r.reduce(&w("ts")).unwrap(), LinComb::unit(4));
    let x = r.reduce(&w("t*t*s")).unwrap();
    assert_eq!((x.get(4), x.get(3), x.len()), (p("c"), p("d"), 2));
    // s^2 t s = a sts + b ts = a b_10 + b b_4
    let y = r.reduce(&w("s*s*t*s")).unwrap();
    assert_eq!((y.get(10), y.get(4), y.len()), (p("a"), p("b"), 2));
    assert_eq!(r.product(Gen::S, 4).unwrap(), LinComb::unit(10));
    assert_eq!(r.product(Gen::U, 1).unwrap(), LinComb::unit(2));
}

#[test]
fn printed_case_instances_reduce_alike() {
    let mut r = reducer();
    assert_eq!(r.reduce(&w("u*s*t*u")).unwrap(), r.reduce(&w("t*u*s*t")).unwrap());
    assert_eq!(r.reduce(&w("s*t*u*s")).unwrap(), r.reduce(&w("z*t^-1*s^-1*u^-1*t^-2")).unwrap());
}

#[test]
fn full_golden_expansion() {
    let x = reducer().product(Gen::T, 58).unwrap();
    let expected = [
        (22, "b^3*d^6"),
        (25, "a*b^2*d^4 + 2*a*b^2*c^2*d^3 + a*b^2*c^4*d^2"),
        (26, "-a*b^2*c*d^3 - a*b^2*c^3*d^2"),
        (27, "-b^2*c^2*d^3 - b^2*c^4*d^2"),
        (28, "b^2*c^3*d^2"),
        (29, "b^2*c*d^3 + b^2*c^3*d^2"),
        (30, "b^2*c*d^3"),
        (31, "a*b^2*c^2*d^2"),
        (32, "-b^2*c^2*d^2"),
        (37, "-a*b^2*c^3*d^2"),
        (38, "a*b^2*c^2*d^2"),
        (39, "b^2*c^3*d^2"),
        (40, "-b^2*c^2*d^2"),
        (41, "-b^2*c^2*d^2"),
        (43, "-a*b^2*c*d^2"),
        (44, "b^2*c*d^2"),
        (45, "b^2*c*d^2"),
        (49, "-b*c^2 - a^2*d - a^2*c^2"),
        (51, "a*d + a*c^2"),
        (52, "-a*c"),
        (58, "c"),
        (61, "b*c + a^2*c"),
        (63, "-a*c"),
        (64, "a"),
    ];
    assert_eq!(x.len(), expected.len());
    for (i, c) in expected {
        assert_eq!(x.get(i), p(c), "coefficient of b_{i}");
    }
}

#[test]
fn routes_agree_and_reduction_is_deterministic() {
    let b = common::built();
    let first = generator_coeffs(&mut reducer()).unwrap();
    let second = generator_coeffs(&mut reducer()).unwrap();
    assert_eq!(first, second);
    let tables = Gen::ALL.map(|g| b.algebra.generator(g).entries.clone());
    compare_routes(&first, &tables).unwrap();
    let mut off = tables.clone();
    off[1][(5, 5)] = &off[1][(5, 5)] + &p("1");
    assert_eq!(compare_routes(&first, &off), Err(RewriteError::TableMismatch { gen: Gen::T, row: 6, col: 6 }));
}

#[test]
fn basis_words_are_fixed_points() {
    let mut r = reducer();
    for i in 1..=RANK {
        assert_eq!(r.reduce(&basis::word_of(i).unwrap()).unwrap(), LinComb::unit(i));
    }
}

#[test]
fn t_suffix_shortcut_is_consistent() {
    let mut r = reducer();
    for g in Gen::ALL {
        for k in 0..4 {
            for m in 1..=12 {
                let j = basis::compose(k, 1, m);
                let direct = r.product(g, j).unwrap();
                assert_eq!(direct, r.product(g, j - 12).unwrap().times_t(), "{g} * b_{j}");
            }
        }
    }
}

#[test]
fn group_algebra_images_are_permutations() {
    let b = common::built();
    let mut r = reducer();
    for g in Gen::ALL {
        for j in 1..=RANK {
            let x = r.product(g, j).unwrap();
            let specialised: Vec<(usize, i64)> = x
                .iter()
                .map(|(n, c)| (n, i64::try_from(c.specialise_group_algebra()).unwrap()))
                .filter(|(_, v)| *v != 0)
                .collect();
            assert_eq!(specialised.len(), 1, "{g} * b_{j}");
            let (n, v) = specialised[0];
            assert_eq!(v, 1);
            let mut word = vec![hecke13::Letter::Gen(g)];
            word.extend(basis::word_of(j).unwrap().0);
            assert_eq!(b.group.element_of(&Word(word)), b.group.element_of(&basis::word_of(n).unwrap()));
        }
    }
}

#[test]
fn derived_rules_are_certified_and_minimal() {
    let table = &common::built().rules;
    assert!(table.all_certified());
    assert_eq!(table.printed.iter().map(|c| c.number).collect::<Vec<_>>(), vec![5, 8, 12, 14]);
    let mut products: Vec<(Gen, usize)> = table
        .special
        .iter()
        .filter_map(|r| match r.origin {
            RuleOrigin::Product { gen, m } => Some((gen, m)),
            RuleOrigin::CentreOverflow { .. } => None,
        })
        .collect();
    products.sort();
    let names: Vec<String> = products
        .iter()
        .map(|(g, m)| format!("{g}{}", basis::word_of(*m).unwrap().to_string().replace('*', "")))
        .collect();
    assert_eq!(names, ["sus", "stsu", "suts", "tsts", "tstu", "tuts", "usu", "utu", "utsu", "utus", "usts"]);
    assert_eq!(table.special.iter().filter(|r| matches!(r.origin, RuleOrigin::CentreOverflow { .. })).count(), 12);
    // without them the structural rules get stuck exactly there
    let bare = RuleTable::printed_only();
    for (g, m) in products {
        assert_eq!(top_rule(&bare, g, m), TopRule::Missing);
    }
    assert!(table.special.iter().all(|r| r.status == CertStatus::Certified));
    assert!(printed_cases().iter().all(|c| c.status == CertStatus::Pending));
}

#[test]
fn budget_exhaustion_names_the_product() {
    let mut r = Reducer::new(common::built().rules.clone(), Budget { max_steps: 1, ..Budget::default() });
    let e = generator_coeffs(&mut r).unwrap_err();
    assert!(e.is_budget());
    assert!(matches!(e, RewriteError::AtProduct { .. }), "{e}");
}

fn mulmatrix(g: Gen) -> &'static MulMatrix {
    common::built().algebra.generator(g)
}

#[test]
fn rows_81_and_93() {
    let (mt, mu) = (mulmatrix(Gen::T), mulmatrix(Gen::U));
    let (r81, r93) = s81_s93(mt, mu);
    let ms = mulmatrix(Gen::S);
    let col = |j| LinComb::from_element(&ms.apply(&HeckeElement::basis(j)));
    assert_eq!(r81, col(81));
    assert_eq!(r93, col(93));
    assert!(r81.only_basis() && r93.only_basis());
    // d r81 + c r93 = t u b_94
    let mut lhs = r81.scale(&p("d"));
    lhs.add_scaled(&r93, &p("c"));
    let rhs = LinComb::from_element(&mt.apply(&mu.apply(&HeckeElement::basis(94))));
    assert_eq!(lhs, rhs);
}

#[test]
fn extras_are_eliminated() {
    let (ms, mt, mu) = (mulmatrix(Gen::S), mulmatrix(Gen::T), mulmatrix(Gen::U));
    let truth: Vec<LinComb> = (1..=RANK).map(|j| LinComb::from_element(&ms.apply(&HeckeElement::basis(j)))).collect();
    assert_eq!(eliminate_extras(&truth, mt, mu).unwrap(), truth);

    // Rewrite parts of some rows through b_97..b_100 and expect them back.
    let coords = |word: &str| LinComb::from_element(&common::built().algebra.word_element(&w(word)));
    let extras = [(97, coords("tstsu")), (98, coords("tstsut")), (99, coords("z*ututs")), (100, coords("z*ututst"))];
    let mut rows = truth.clone();
    let x = p("a*c - 2*b^-1");
    let inject = |row: &mut LinComb, (e, d): &(usize, LinComb)| {
        row.add_term(*e, &x);
        row.add_scaled(d, &-x.clone());
    };
    inject(&mut rows[7], &extras[2]);
    inject(&mut rows[19], &extras[3]);
    for (j, e) in [(1, 0), (30, 1), (57, 2), (90, 3), (44, 0)] {
        inject(&mut rows[j], &extras[e]);
    }
    assert_ne!(rows, truth);
    assert_eq!(eliminate_extras(&rows, mt, mu).unwrap(), truth);
    assert_eq!(rows_to_matrix(&truth), ms.entries);

    let mut bad = truth.clone();
    bad[19].add_term(99, &x);
    assert_eq!(eliminate_extras(&bad, mt, mu), Err(RewriteError::VanishingPatternViolated { row: 20, index: 99 }));
}

#[test]
fn inverse_letters_cancel() {
    let mut r = reducer();
    for word in ["s^-1*s", "t*t^-1", "u^-1*u", "z*z^-1", "z^-1*z", "s*t^-1*t*s^-1"] {
        assert_eq!(r.reduce(&w(word)).unwrap(), LinComb::unit(1), "{word}");
    }
    // z^4 lands on the coordinates of z^4
    let z4 = r.reduce(&w("z^4")).unwrap();
    assert_eq!(z4, LinComb::from_element(&common::built().algebra.z4_element()));
    let _ = MatrixTag::S;
    assert!(!z4.get(1).is_zero());
}
