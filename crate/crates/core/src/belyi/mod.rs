//! Exact Belyi-map checks, Weierstrass extraction and homogenization over Q.

pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod roots;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::dessin::RamificationData;
use crate::perm::Partition;
use crate::scalar::rational_root;
use poly::{rat, Polynomial};
use ratfunc::RationalFunction;

pub use parse::{parse_poly, parse_ratfunc};
pub use roots::rational_roots;

type Q = Polynomial<BigRational>;
type R = RationalFunction<BigRational>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BelyiError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("exponent too large")]
    ExponentTooLarge,
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("expression is not a polynomial")]
    NotPolynomial,
    #[error("constant map has no ramification data")]
    Constant,
    #[error(
        "not a Belyi map over {{0, {lambda}, oo}}: extra critical values are roots of {leftover}"
    )]
    NotBelyi {
        lambda: BigRational,
        leftover: String,
    },
    #[error("numerator of j is not a cube")]
    NotCube,
    #[error("numerator of j - 1728 is not a square")]
    NotSquare,
    #[error("no rational (a, b) satisfies the normalization")]
    NoRationalNormalization,
    #[error("homogenization needs nonconstant inputs")]
    DegreeTooSmall,
}

/// `num / den` with common factors cancelled and a monic denominator.
pub fn normalize(num: Q, den: Q) -> Result<R, BelyiError> {
    R::new(num, den)
}

/// Ramification of `j` over `0`, `lambda` and infinity, together with the
/// critical values that fall outside those three points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalProfile {
    pub degree: usize,
    pub lambda: BigRational,
    pub over0: Partition,
    pub over_lambda: Partition,
    pub over_inf: Partition,
    /// Monic squarefree polynomial (in the value variable `v`) whose roots
    /// are the extra critical values; `1` when there are none.
    pub leftover: Q,
}

impl CriticalProfile {
    pub fn is_belyi(&self) -> bool {
        self.leftover.is_constant()
    }

    pub fn ramification(&self) -> RamificationData {
        RamificationData::new(
            self.over0.clone(),
            self.over_lambda.clone(),
            self.over_inf.clone(),
        )
    }
}

impl fmt::Display for CriticalProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{}; {}; {}}} lambda = {}",
            self.over0.to_exponent_string(),
            self.over_lambda.to_exponent_string(),
            self.over_inf.to_exponent_string(),
            self.lambda
        )?;
        if !self.is_belyi() {
            write!(
                f,
                ", extra critical values: roots of {}",
                self.leftover.render("v")
            )?;
        }
        Ok(())
    }
}

fn deg(p: &Q) -> usize {
    p.degree().unwrap_or(0)
}

/// Adds the points of `p` with their multiplicities to `parts` and returns
/// `prod s_k^(k-1)` over its squarefree factors.
fn collect_points(p: &Q, parts: &mut Vec<usize>) -> Q {
    let mut excess = Q::one();
    for (factor, k) in p.squarefree_decomposition() {
        parts.extend(std::iter::repeat_n(k, deg(&factor)));
        if k > 1 {
            excess = &excess * &factor.pow(k as u32 - 1);
        }
    }
    excess
}

/// Critical-point analysis of `j` with a fixed finite branch value `lambda`.
pub fn critical_profile_at(j: &R, lambda: &BigRational) -> Result<CriticalProfile, BelyiError> {
    let (profile, rest) = fibres(j, lambda)?;
    Ok(finish(profile, &rest, j))
}

/// Folds the values of the unaccounted critical points `rest` into the
/// leftover polynomial.
fn finish(mut profile: CriticalProfile, rest: &Q, j: &R) -> CriticalProfile {
    if !rest.is_constant() {
        let values = critical_values(rest, j.num(), j.den(), j.degree());
        profile.leftover = (&profile.leftover * &values).squarefree_part();
    }
    profile
}

/// Points over `0`, `lambda` and `oo`, plus the critical points elsewhere
/// as the roots of the returned polynomial.
fn fibres(j: &R, lambda: &BigRational) -> Result<(CriticalProfile, Q), BelyiError> {
    if j.is_constant() {
        return Err(BelyiError::Constant);
    }
    let num = j.num();
    let den = j.den();
    let d = j.degree();
    let shifted = num - &den.scale(lambda);
    let (dn, dd) = (deg(num), deg(den));

    let mut over0 = Vec::new();
    let mut over_lambda = Vec::new();
    let mut over_inf = Vec::new();
    let mut excess = collect_points(num, &mut over0);
    excess = &excess * &collect_points(&shifted, &mut over_lambda);
    excess = &excess * &collect_points(den, &mut over_inf);

    // The point t = oo.
    let mut leftover = Q::one();
    if dn > dd {
        over_inf.push(dn - dd);
    } else if dn < dd {
        over0.push(dd - dn);
    } else {
        let c = num.leading();
        let e = dd - deg(&(num - &den.scale(&c)));
        if &c == lambda {
            over_lambda.push(e);
        } else if e > 1 {
            leftover = Q::new(vec![-c, BigRational::one()]);
        }
    }

    let wronskian = &(&num.derivative() * den) - &(num * &den.derivative());
    let rest = wronskian
        .exact_div(&excess)
        .expect("multiple points divide the Wronskian");

    let profile = CriticalProfile {
        degree: d,
        lambda: lambda.clone(),
        over0: Partition::new(over0),
        over_lambda: Partition::new(over_lambda),
        over_inf: Partition::new(over_inf),
        leftover,
    };
    Ok((profile, rest))
}

/// `Res_t(r, num - v den)` as a polynomial in `v`, by interpolation. Values
/// of `v` at which `num - v den` drops below degree `d` are skipped so every
/// sample uses the same Sylvester shape.
fn critical_values(r: &Q, num: &Q, den: &Q, d: usize) -> Q {
    let need = deg(r) + 1;
    let mut points = Vec::with_capacity(need);
    let mut v = 0i64;
    while points.len() < need {
        let value = rat(v);
        v += 1;
        let h = num - &den.scale(&value);
        if deg(&h) != d {
            continue;
        }
        points.push((value, r.resultant(&h)));
    }
    Q::interpolate(&points).monic()
}

/// Tries `lambda = 1` and then `lambda = 1728`. Returns the first profile
/// without extra critical values, or the one with fewer of them.
pub fn critical_profile(j: &R) -> Result<CriticalProfile, BelyiError> {
    let (first, rest1) = fibres(j, &rat(1))?;
    if first.is_belyi() && rest1.is_constant() {
        return Ok(first);
    }
    let (second, rest2) = fibres(j, &rat(1728))?;
    if second.is_belyi() && rest2.is_constant() {
        return Ok(second);
    }
    let first = finish(first, &rest1, j);
    if first.is_belyi() {
        return Ok(first);
    }
    let second = finish(second, &rest2, j);
    if second.is_belyi() || deg(&second.leftover) < deg(&first.leftover) {
        Ok(second)
    } else {
        Ok(first)
    }
}

/// Whether `j` is ramified only over `{0, lambda, oo}` for some
/// `lambda` in `{1, 1728}`, and which one matched.
pub fn is_belyi(j: &R) -> Result<(bool, BigRational), BelyiError> {
    let p = critical_profile(j)?;
    Ok((p.is_belyi(), p.lambda))
}

/// `j = N^3 / D` and `j - 1728 = P^2 / D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassData {
    pub n: Q,
    pub p: Q,
    pub d: Q,
    pub mu: usize,
}

impl WeierstrassData {
    pub fn identity_holds(&self) -> bool {
        &self.n.pow(3) - &self.p.pow(2) == self.d.scale(&rat(1728))
    }
}

pub fn weierstrass_from_j(j: &R) -> Result<WeierstrassData, BelyiError> {
    let profile = critical_profile_at(j, &rat(1728))?;
    if !profile.is_belyi() {
        return Err(BelyiError::NotBelyi {
            lambda: profile.lambda,
            leftover: profile.leftover.render("v"),
        });
    }
    let a = j.num().clone();
    let b = j.den().clone();
    let shifted = &a - &b.scale(&rat(1728));
    let alpha = a.leading();
    let beta = shifted.leading();
    let n_m = a.monic().monic_kth_root(3).ok_or(BelyiError::NotCube)?;
    let p_m = shifted
        .monic()
        .monic_kth_root(2)
        .ok_or(BelyiError::NotSquare)?;

    let data = match (rational_root(&alpha, 3), rational_root(&beta, 2)) {
        (Some(r), Some(s)) => WeierstrassData {
            n: n_m.scale(&r),
            p: p_m.scale(&s),
            d: b,
            mu: j.degree(),
        },
        _ => {
            // Rescale so that both leading coefficients become powers.
            let k = &alpha * &alpha * &beta * &beta * &beta;
            let ab = &alpha * &beta;
            WeierstrassData {
                n: n_m.scale(&ab),
                p: p_m.scale(&(&ab * &beta)),
                d: b.scale(&k),
                mu: j.degree(),
            }
        }
    };
    assert!(data.identity_holds(), "N^3 - P^2 = 1728 D");
    Ok(data)
}

/// Homogeneous polynomial in `z1, z2`; `coeffs[i]` multiplies
/// `z1^i z2^(degree - i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousPoly {
    pub degree: usize,
    pub coeffs: Vec<BigRational>,
}

impl HomogeneousPoly {
    /// `H(t + a, t + b)`.
    pub fn substitute(&self, a: &BigRational, b: &BigRational) -> Q {
        let z1 = Q::new(vec![a.clone(), BigRational::one()]);
        let z2 = Q::new(vec![b.clone(), BigRational::one()]);
        let mut out = Q::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = &z1.pow(i as u32) * &z2.pow((self.degree - i) as u32);
            out = &out + &term.scale(c);
        }
        out
    }

    fn scale(&self, c: &BigRational) -> Self {
        HomogeneousPoly {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Positive multiplier that turns the coefficients into coprime integers.
    fn integer_scale(&self) -> BigRational {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let content = self.coeffs.iter().fold(BigInt::zero(), |acc, c| {
            acc.gcd(&(c * BigRational::from_integer(lcm.clone())).to_integer())
        });
        BigRational::new(lcm, content.abs())
    }
}

impl fmt::Display for HomogeneousPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for i in (0..=self.degree).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            let mut factors = Vec::new();
            let abs = c.abs();
            if !abs.is_one() {
                factors.push(abs.to_string());
            }
            for (var, e) in [("z1", i), ("z2", self.degree - i)] {
                match e {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{e}")),
                }
            }
            if factors.is_empty() {
                factors.push("1".to_string());
            }
            f.write_str(&factors.join("*"))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Integer homogeneous forms `F`, `G` and the shift `(a, b)` with
/// `F(t + a, t + b) = f_scale * f(t)` and likewise for `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogenizedPair {
    pub f: HomogeneousPoly,
    pub g: HomogeneousPoly,
    pub a: BigRational,
    pub b: BigRational,
    pub f_scale: BigRational,
    pub g_scale: BigRational,
}

/// `H(z1, z2)` with `H(t + a, t + b) = p(t)`, using
/// `t = (b z1 - a z2) / (b - a)` and `1 = (z1 - z2) / (a - b)`.
fn homogeneous_lift(p: &Q, n: usize, a: &BigRational, b: &BigRational) -> HomogeneousPoly {
    let delta = b - a;
    // Work in u = z1 / z2.
    let l1 = Q::new(vec![-a / &delta, b / &delta]);
    let l2 = Q::new(vec![
        BigRational::one() / &delta,
        -BigRational::one() / &delta,
    ]);
    let mut h = Q::zero();
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = &l1.pow(k as u32) * &l2.pow((n - k) as u32);
        h = &h + &term.scale(c);
    }
    HomogeneousPoly {
        degree: n,
        coeffs: (0..=n).map(|i| h.coeff(i)).collect(),
    }
}

/// All rational `(a, b)` with `a != b` for which the `z1 z2^(n-1)`
/// coefficients of both lifts vanish, sorted by decreasing `a`.
///
/// That coefficient is proportional to `(b - a) p'(-a) - n p(-a)`, so a
/// common solution makes `-a` a root of `n_g g f' - n_f f g'`.
pub fn normalization_solutions(
    f: &Q,
    g: &Q,
) -> Result<Vec<(BigRational, BigRational)>, BelyiError> {
    let (nf, ng) = (deg(f), deg(g));
    if nf == 0 || ng == 0 {
        return Err(BelyiError::DegreeTooSmall);
    }
    let w = &(g * &f.derivative()).scale(&rat(ng as i64))
        - &(f * &g.derivative()).scale(&rat(nf as i64));
    if w.is_zero() {
        return Err(BelyiError::NoRationalNormalization);
    }
    let mut out = Vec::new();
    for x in rational_roots(&w) {
        let delta_for = |p: &Q, n: usize| -> Option<Option<BigRational>> {
            let (v, dv) = (p.eval(&x), p.derivative().eval(&x));
            if dv.is_zero() {
                // Unconstrained when both vanish, impossible otherwise.
                return v.is_zero().then_some(None);
            }
            Some(Some(rat(n as i64) * v / dv))
        };
        let (Some(df), Some(dg)) = (delta_for(f, nf), delta_for(g, ng)) else {
            continue;
        };
        let delta = match (df, dg) {
            (Some(p), Some(q)) if p == q => p,
            (Some(p), None) | (None, Some(p)) => p,
            _ => continue,
        };
        if delta.is_zero() {
            continue;
        }
        let a = -x;
        let b = &a + &delta;
        out.push((a, b));
    }
    out.sort_by(|l, r| r.0.cmp(&l.0));
    Ok(out)
}

/// Homogenizes with the normalization that kills the `z1 z2^(n-1)`
/// coefficients, choosing the solution with the largest `a`.
pub fn homogenize(f: &Q, g: &Q) -> Result<HomogenizedPair, BelyiError> {
    let (a, b) = normalization_solutions(f, g)?
        .into_iter()
        .next()
        .ok_or(BelyiError::NoRationalNormalization)?;
    homogenize_at(f, g, &a, &b)
}

/// Homogenizes with a given shift `(a, b)`, `a != b`.
pub fn homogenize_at(
    f: &Q,
    g: &Q,
    a: &BigRational,
    b: &BigRational,
) -> Result<HomogenizedPair, BelyiError> {
    let (nf, ng) = (deg(f), deg(g));
    if nf == 0 || ng == 0 {
        return Err(BelyiError::DegreeTooSmall);
    }
    if a == b {
        return Err(BelyiError::NoRationalNormalization);
    }
    let hf = homogeneous_lift(f, nf, a, b);
    let hg = homogeneous_lift(g, ng, a, b);
    let (sf, sg) = (hf.integer_scale(), hg.integer_scale());
    Ok(HomogenizedPair {
        f: hf.scale(&sf),
        g: hg.scale(&sg),
        a: a.clone(),
        b: b.clone(),
        f_scale: sf,
        g_scale: sg,
    })
}

/// Inverse of [`homogenize`]: recovers `f` and `g`.
pub fn dehomogenize(pair: &HomogenizedPair) -> (Q, Q) {
    let f = pair.f.substitute(&pair.a, &pair.b);
    let g = pair.g.substitute(&pair.a, &pair.b);
    (
        f.scale(&(BigRational::one() / &pair.f_scale)),
        g.scale(&(BigRational::one() / &pair.g_scale)),
    )
}
