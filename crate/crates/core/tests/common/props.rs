//! Randomized invariants, written against explicit `TestRunner`s so the
//! same checks back both the proptest suite and the acceptance target.

use dessins::belyi::{parse_poly, parse_ratfunc};
use dessins::dessin::{
    coset_graph_of, dessin_of, genus, ramification, validate, CosetGraph, DessinError,
};
use dessins::modular::{word_action, word_to_matrix, GroupWord, Letter, Matrix2};
use dessins::{Constellation, Partition, Permutation, RatFunc, Rational, RationalPoly};
use num_bigint::BigInt;
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestError, TestRunner};

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn report<T: std::fmt::Debug>(r: Result<(), TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

fn shuffled(d: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..d).collect::<Vec<usize>>()).prop_shuffle()
}

fn perm(images: &[usize]) -> Permutation {
    Permutation::from_images0(images.to_vec()).unwrap()
}

/// Two arbitrary permutations of a common degree.
fn pair() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    (1usize..=10).prop_flat_map(|d| (shuffled(d), shuffled(d)))
}

/// A canonical-shaped `(x, y)` relabelled by a random permutation: `x` a
/// fixed-point-free involution, `y` a product of 3-cycles.
fn clean_pair() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    (1usize..=4)
        .prop_flat_map(|k| (shuffled(6 * k), shuffled(6 * k)))
        .prop_map(|(pairing, relabel)| {
            let d = pairing.len();
            let mut x = vec![0; d];
            for c in pairing.chunks(2) {
                x[c[0]] = c[1];
                x[c[1]] = c[0];
            }
            let mut y = vec![0; d];
            for c in relabel.chunks(3) {
                y[c[0]] = c[1];
                y[c[1]] = c[2];
                y[c[2]] = c[0];
            }
            (x, y)
        })
}

fn word() -> impl Strategy<Value = GroupWord> {
    vec(0u8..4, 0..14).prop_map(|ls| {
        GroupWord::new(
            ls.into_iter()
                .map(|l| match l {
                    0 => Letter::X,
                    1 => Letter::XInv,
                    2 => Letter::Y,
                    _ => Letter::YInv,
                })
                .collect(),
        )
    })
}

fn poly() -> impl Strategy<Value = RationalPoly> {
    vec((-40i64..40, 1i64..7), 0..8).prop_map(|cs| {
        RationalPoly::new(
            cs.into_iter()
                .map(|(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)))
                .collect(),
        )
    })
}

/// `sigma0 sigma1 sigma_inf = 1` for every constellation built from a
/// transitive pair; intransitive pairs are refused.
pub fn triple_product(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&pair(), |(a, b)| {
        let d = a.len();
        let (s0, s1) = (perm(&a), perm(&b));
        let connected = crate::common::transitive(&[&a, &b]);
        match Constellation::from_pair(s0.clone(), s1.clone()) {
            Ok(c) => {
                prop_assert!(connected);
                let inf = c.sigma_inf();
                for p in 1..=d {
                    prop_assert_eq!(inf.image(s1.image(s0.image(p))), p);
                }
                prop_assert!(validate(c.sigma0(), c.sigma1(), c.sigma_inf())
                    .unwrap()
                    .is_valid());
                if d > 1 {
                    let r = validate(&s0, &s1, &s0).unwrap();
                    let holds = (1..=d).all(|p| s0.image(s1.image(s0.image(p))) == p);
                    prop_assert_eq!(r.product_identity, holds);
                }
            }
            Err(e) => {
                prop_assert!(!connected);
                prop_assert_eq!(e, DessinError::Disconnected);
            }
        }
        Ok(())
    }))
}

/// Coset graph and back is the identity, also through the text format.
pub fn coset_roundtrip(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&clean_pair(), |(x, y)| {
        let connected = crate::common::transitive(&[&x, &y]);
        match Constellation::from_generators(perm(&x), perm(&y)) {
            Ok(c) => {
                let g = coset_graph_of(&c).map_err(|e| TestCaseError::fail(e.to_string()))?;
                prop_assert_eq!(g.x_edges.len(), x.len() / 2);
                prop_assert_eq!(g.triangles.len(), x.len() / 3);
                prop_assert_eq!(&dessin_of(&g).unwrap(), &c);
                let back: CosetGraph = g.to_text().parse().unwrap();
                prop_assert_eq!(back, g);
            }
            Err(_) => prop_assert!(!connected),
        }
        Ok(())
    }))
}

fn product(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    a.mul(b).canonical()
}

/// Word evaluation respects concatenation, inversion and normal forms.
pub fn matrix_homomorphism(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&(word(), word()), |(u, v)| {
        let (mu, mv) = (word_to_matrix(&u), word_to_matrix(&v));
        prop_assert_eq!(word_to_matrix(&(&u * &v)), product(&mu, &mv));
        prop_assert_eq!(word_to_matrix(&(&u * &u.inverse())), Matrix2::identity());
        prop_assert_eq!(word_to_matrix(&u.normal_form()), mu.clone());
        prop_assert!(mu.is_unimodular());
        Ok(())
    }))
}

/// The coset action respects concatenation and normal forms.
pub fn action_homomorphism(cases: u32) -> Result<(), String> {
    let strat = (clean_pair(), word(), word());
    report(runner(cases).run(&strat, |((x, y), u, v)| {
        let Ok(c) = Constellation::from_generators(perm(&x), perm(&y)) else {
            return Ok(());
        };
        let (au, av) = (word_action(&u, &c), word_action(&v, &c));
        prop_assert_eq!(word_action(&(&u * &v), &c), au.then(&av).unwrap());
        prop_assert_eq!(word_action(&u.normal_form(), &c), au.clone());
        prop_assert!(word_action(&(&u * &u.inverse()), &c).is_identity());
        Ok(())
    }))
}

/// Simultaneous conjugation keeps ramification and genus.
pub fn conjugation_invariance(cases: u32) -> Result<(), String> {
    let strat = pair().prop_flat_map(|(a, b)| {
        let d = a.len();
        (Just(a), Just(b), shuffled(d))
    });
    report(runner(cases).run(&strat, |(a, b, g)| {
        let Ok(c) = Constellation::from_pair(perm(&a), perm(&b)) else {
            return Ok(());
        };
        let k = c.conjugate_by(&perm(&g)).unwrap();
        prop_assert_eq!(ramification(&k), ramification(&c));
        prop_assert_eq!(genus(&k).unwrap(), genus(&c).unwrap());
        Ok(())
    }))
}

/// `parse(render(v)) = v` for permutations, partitions, words,
/// polynomials, rational functions and constellations.
pub fn parse_render(cases: u32) -> Result<(), String> {
    let strat = (pair(), word(), poly(), poly());
    report(runner(cases).run(&strat, |((a, b), w, p, q)| {
        let d = a.len();
        let s = perm(&a);
        prop_assert_eq!(
            Permutation::parse_cycles(&s.to_string(), d).unwrap(),
            s.clone()
        );
        let part = Partition::new(a.iter().map(|v| v + 1).collect());
        prop_assert_eq!(part.to_string().parse::<Partition>().unwrap(), part.clone());
        prop_assert_eq!(
            part.to_exponent_string().parse::<Partition>().unwrap(),
            part
        );
        prop_assert_eq!(w.to_string().parse::<GroupWord>().unwrap(), w);
        prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p.clone());
        prop_assert_eq!(parse_poly(&p.to_coeff_list()).unwrap(), p.clone());
        if !q.is_zero() {
            let r = RatFunc::new(p, q).unwrap();
            prop_assert_eq!(parse_ratfunc(&r.to_string()).unwrap(), r);
        }
        if let Ok(c) = Constellation::from_pair(s, perm(&b)) {
            prop_assert_eq!(c.to_text().parse::<Constellation>().unwrap(), c);
        }
        Ok(())
    }))
}

pub type Suite = fn(u32) -> Result<(), String>;

pub const SUITES: [(&str, Suite); 6] = [
    ("triple product identity", triple_product),
    ("coset graph roundtrip", coset_roundtrip),
    ("word_to_matrix homomorphism", matrix_homomorphism),
    ("word_action homomorphism", action_homomorphism),
    (
        "conjugation invariance of ramification",
        conjugation_invariance,
    ),
    ("parse/render roundtrips", parse_render),
];
