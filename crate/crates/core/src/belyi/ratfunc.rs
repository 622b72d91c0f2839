//! Reduced rational functions `num / den`.

use std::fmt;

use num_rational::BigRational;

use super::poly::Polynomial;
use super::BelyiError;
use crate::scalar::Field;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalFunction<F> {
    num: Polynomial<F>,
    den: Polynomial<F>,
}

impl<F: Field> RationalFunction<F> {
    /// Builds `num / den` in normal form: coprime, monic denominator.
    pub fn new(num: Polynomial<F>, den: Polynomial<F>) -> Result<Self, BelyiError> {
        if den.is_zero() {
            return Err(BelyiError::ZeroDenominator);
        }
        Ok(Self::normalize_parts(num, den))
    }

    fn normalize_parts(num: Polynomial<F>, den: Polynomial<F>) -> Self {
        if num.is_zero() {
            return RationalFunction {
                num,
                den: Polynomial::one(),
            };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides"),
                den.exact_div(&g).expect("gcd divides"),
            )
        };
        let lc = den.leading();
        if !lc.is_one() {
            let inv = F::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RationalFunction { num, den }
    }

    pub fn from_poly(p: Polynomial<F>) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn num(&self) -> &Polynomial<F> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// Degree as a map of the projective line.
    pub fn degree(&self) -> usize {
        self.num
            .degree()
            .unwrap_or(0)
            .max(self.den.degree().unwrap_or(0))
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        Self::normalize_parts(num, &self.den * &other.den)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::normalize_parts(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn div(&self, other: &Self) -> Result<Self, BelyiError> {
        if other.is_zero() {
            return Err(BelyiError::ZeroDenominator);
        }
        Ok(Self::normalize_parts(
            &self.num * &other.den,
            &self.den * &other.num,
        ))
    }

    pub fn pow(&self, exp: i64) -> Result<Self, BelyiError> {
        let e = u32::try_from(exp.unsigned_abs()).map_err(|_| BelyiError::ExponentTooLarge)?;
        let r = RationalFunction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        };
        if exp < 0 {
            Self::constant(F::one()).div(&r)
        } else {
            Ok(r)
        }
    }

    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::normalize_parts(num, self.den.pow(2))
    }

    /// Evaluates at a finite point; `None` at a pole.
    pub fn eval(&self, x: &F) -> Option<F> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }
}

impl fmt::Display for RationalFunction<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl<F: Field> Polynomial<F> {
    pub(crate) fn is_one_poly(&self) -> bool {
        self.coeffs().len() == 1 && self.coeffs()[0].is_one()
    }
}
