//! Rational functions over ℚ, kept in reduced form with a monic denominator.
//! Used for adjoint computations, where weight log-derivatives and inverse
//! poly parts leave the polynomial ring temporarily; results are converted
//! back with `as_poly` and rejected if a true denominator survives.

use crate::poly::Poly;
use crate::ring::{Field, Ring};
use crate::scalar::Rat;

#[derive(Debug, Clone, PartialEq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    // ---- Construction ----

    /// Reduce `num/den` to lowest terms with monic denominator.
    /// Panics on a zero denominator (a programming error, not a data error).
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g).unwrap();
        let den = den.div_exact(&g).unwrap();
        let lead_inv = Rat::from_integer(1.into()) / den.leading();
        RatFunc {
            num: num.scale(&lead_inv),
            den: den.scale(&lead_inv),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn zero() -> Self {
        RatFunc::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }

    pub fn constant(c: Rat) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    // ---- Inspection ----

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den == Poly::one()
    }

    /// The numerator when the denominator is 1, else `None`.
    pub fn as_poly(&self) -> Option<Poly> {
        self.is_poly().then(|| self.num.clone())
    }

    // ---- Arithmetic ----

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    /// `None` for zero.
    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        Some(RatFunc::new(self.den.clone(), self.num.clone()))
    }

    /// Quotient rule.
    pub fn derivative(&self) -> RatFunc {
        RatFunc::new(
            self.num
                .derivative()
                .mul(&self.den)
                .sub(&self.num.mul(&self.den.derivative())),
            self.den.mul(&self.den),
        )
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_poly() {
            self.num.fmt_var(var)
        } else {
            format!("({}) / ({})", self.num.fmt_var(var), self.den.fmt_var(var))
        }
    }
}

impl Ring for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn sub(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn neg(&self) -> Self {
        self.neg()
    }
}

impl Field for RatFunc {
    fn inv(&self) -> Option<Self> {
        self.inv()
    }
}
