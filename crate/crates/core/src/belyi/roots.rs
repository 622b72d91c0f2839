//! Exact rational roots of rational polynomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::Polynomial;

type Q = Polynomial<BigRational>;

fn int_poly_eval(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn sign_changes(seq: &[Q], x: &BigRational) -> usize {
    let mut last: Option<bool> = None;
    let mut changes = 0;
    for p in seq {
        let v = p.eval(x);
        if v.is_zero() {
            continue;
        }
        let pos = v.is_positive();
        if last.is_some_and(|l| l != pos) {
            changes += 1;
        }
        last = Some(pos);
    }
    changes
}

fn sturm_sequence(p: &Q) -> Vec<Q> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].div_rem(&seq[n - 1]).1;
        if r.is_zero() {
            break;
        }
        seq.push(-&r);
    }
    seq
}

/// Distinct integer roots of a monic integer polynomial, ascending.
fn integer_roots(coeffs: &[BigInt]) -> Vec<BigInt> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let bound = coeffs[..n]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::zero)
        + BigInt::one();
    let q = Q::new(
        coeffs
            .iter()
            .cloned()
            .map(BigRational::from_integer)
            .collect(),
    );
    let seq = sturm_sequence(&q);
    let changes = |x: &BigInt| sign_changes(&seq, &BigRational::from_integer(x.clone()));
    let mut roots = Vec::new();
    // Stack of half-open intervals (lo, hi] with known Sturm counts at the ends.
    let lo = -bound.clone() - BigInt::one();
    let mut stack = vec![(lo.clone(), changes(&lo), bound.clone(), changes(&bound))];
    while let Some((lo, vlo, hi, vhi)) = stack.pop() {
        if vlo <= vhi {
            continue;
        }
        if &hi - &lo == BigInt::one() {
            if int_poly_eval(coeffs, &hi).is_zero() {
                roots.push(hi);
            }
            continue;
        }
        let mid: BigInt = (&lo + &hi) / 2;
        let vmid = changes(&mid);
        stack.push((lo, vlo, mid.clone(), vmid));
        stack.push((mid, vmid, hi, vhi));
    }
    roots.sort();
    roots
}

/// Distinct rational roots, ascending.
pub fn rational_roots(p: &Q) -> Vec<BigRational> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let (prim, _) = p.squarefree_part().primitive_part();
    let n = prim.len() - 1;
    let lc = prim[n].clone();
    // Q(y) = lc^{n-1} P(y / lc) is monic with integer coefficients; the
    // coefficient of y^i picks up lc^{n-1-i}.
    let mut monic = vec![BigInt::zero(); n + 1];
    let mut pow = BigInt::one();
    monic[n] = BigInt::one();
    for i in (0..n).rev() {
        monic[i] = &prim[i] * &pow;
        pow *= &lc;
    }
    let mut roots: Vec<BigRational> = integer_roots(&monic)
        .into_iter()
        .map(|y| BigRational::new(y, lc.clone()))
        .collect();
    roots.sort();
    roots
}
