//! Symbolic weight units. The total mass of each classical weight is a
//! transcendental constant (√π·e^{b²}, Γ(α+1), 2^{α+β+1}B(α+1,β+1)); moments
//! and norms are exact rationals times such a unit, so the unit is carried as
//! a tag and never evaluated. Two tags are commensurable when their ratio is
//! rational, and only then can values be converted or compared across tags.
//!
//! `UnitScalar` is a formal ℚ-linear combination of pairwise incommensurable
//! tags. That makes addition total (terms merge within a commensurability
//! class and accumulate side by side otherwise), while extraction to a single
//! `(coefficient, tag)` pair reports `IncommensurableUnits` on genuine mixing.

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::scalar::{as_i64, rat_int, Rat};
use num_traits::Signed;
use std::fmt;

// ---- Tags ----

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UnitTag {
    /// Dimensionless (user-supplied moments, eigenvalue data).
    One,
    /// ∫ e^{−x²+2bx} dx = √π·e^{b²}.
    Hermite { b: Rat },
    /// ∫₀^∞ x^α e^{−x} dx = Γ(α+1).
    Laguerre { alpha: Rat },
    /// ∫_{−1}^{1} (1−x)^α(1+x)^β dx = 2^{α+β+1} B(α+1, β+1).
    Jacobi { alpha: Rat, beta: Rat },
}

impl UnitTag {
    /// Whether `self / other` is a rational number.
    pub fn commensurable(&self, other: &UnitTag) -> bool {
        unit_ratio(self, other).is_ok()
    }
}

impl fmt::Display for UnitTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitTag::One => write!(f, "1"),
            UnitTag::Hermite { b } => write!(f, "hermiteU(b={b})"),
            UnitTag::Laguerre { alpha } => write!(f, "laguerreU(alpha={alpha})"),
            UnitTag::Jacobi { alpha, beta } => {
                write!(f, "jacobiU(alpha={alpha},beta={beta})")
            }
        }
    }
}

/// The exact rational `from / to`, or `IncommensurableUnits`.
///
/// Laguerre masses shift by Γ-recurrence: Γ(α+k+1)/Γ(α+1) = (α+1)⋯(α+k).
/// Jacobi masses shift one parameter at a time:
/// U(α+1,β)/U(α,β) = 2(α+1)/(α+β+2) and U(α,β+1)/U(α,β) = 2(β+1)/(α+β+2).
/// Hermite masses are only comparable at equal shift b.
pub fn unit_ratio(from: &UnitTag, to: &UnitTag) -> Result<Rat> {
    let fail = || {
        Error::IncommensurableUnits(format!(
            "no rational ratio between units {from} and {to}"
        ))
    };
    match (from, to) {
        (UnitTag::One, UnitTag::One) => Ok(rat_int(1)),
        (UnitTag::Hermite { b: b1 }, UnitTag::Hermite { b: b2 }) => {
            if b1 == b2 {
                Ok(rat_int(1))
            } else {
                Err(fail())
            }
        }
        (UnitTag::Laguerre { alpha: a1 }, UnitTag::Laguerre { alpha: a2 }) => {
            let d = a1 - a2;
            if !d.is_integer() {
                return Err(fail());
            }
            let d = as_i64(&d).ok_or_else(|| {
                Error::ParameterConstraintViolated("unit parameter shift too large".into())
            })?;
            let mut r = rat_int(1);
            if d >= 0 {
                for j in 1..=d {
                    r *= a2 + rat_int(j);
                }
            } else {
                for j in 1..=(-d) {
                    r /= a1 + rat_int(j);
                }
            }
            Ok(r)
        }
        (
            UnitTag::Jacobi { alpha: a1, beta: b1 },
            UnitTag::Jacobi { alpha: a2, beta: b2 },
        ) => {
            let da = a1 - a2;
            let db = b1 - b2;
            if !da.is_integer() || !db.is_integer() {
                return Err(fail());
            }
            let too_big =
                || Error::ParameterConstraintViolated("unit parameter shift too large".into());
            let da = as_i64(&da).ok_or_else(too_big)?;
            let db = as_i64(&db).ok_or_else(too_big)?;
            // Walk from (a2, b2) to (a1, b1), one unit step per factor.
            let mut a = a2.clone();
            let mut b = b2.clone();
            let mut r = rat_int(1);
            let two = rat_int(2);
            for _ in 0..da.abs() {
                if da > 0 {
                    r *= &two * (&a + rat_int(1)) / (&a + &b + &two);
                    a += rat_int(1);
                } else {
                    a -= rat_int(1);
                    r /= &two * (&a + rat_int(1)) / (&a + &b + &two);
                }
            }
            for _ in 0..db.abs() {
                if db > 0 {
                    r *= &two * (&b + rat_int(1)) / (&a + &b + &two);
                    b += rat_int(1);
                } else {
                    b -= rat_int(1);
                    r /= &two * (&b + rat_int(1)) / (&a + &b + &two);
                }
            }
            Ok(r)
        }
        _ => Err(fail()),
    }
}

// ---- Tagged scalars ----

/// Formal sum Σ cᵢ·Uᵢ over pairwise incommensurable tags, kept sorted with
/// nonzero coefficients. Values are equal iff their difference collapses to
/// the empty sum.
#[derive(Debug, Clone)]
pub struct UnitScalar {
    terms: Vec<(UnitTag, Rat)>,
}

impl UnitScalar {
    pub fn zero() -> Self {
        UnitScalar { terms: Vec::new() }
    }

    pub fn new(coeff: Rat, tag: UnitTag) -> Self {
        if coeff.is_zero() {
            return UnitScalar::zero();
        }
        UnitScalar {
            terms: vec![(tag, coeff)],
        }
    }

    pub fn from_rat(c: Rat) -> Self {
        UnitScalar::new(c, UnitTag::One)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The (tag, coefficient) terms of the formal sum; pairwise
    /// incommensurable tags, nonzero coefficients.
    pub fn terms(&self) -> &[(UnitTag, Rat)] {
        &self.terms
    }

    /// Merge a single term into the sum.
    fn push(&mut self, tag: UnitTag, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        for (t, c) in &mut self.terms {
            if let Ok(r) = unit_ratio(&tag, t) {
                *c += coeff * r;
                if c.is_zero() {
                    let keep = t.clone();
                    self.terms.retain(|(u, _)| *u != keep);
                }
                return;
            }
        }
        self.terms.push((tag, coeff));
        self.terms.sort_by(|a, b| a.0.cmp(&b.0));
    }

    pub fn add(&self, other: &UnitScalar) -> UnitScalar {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.push(t.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &UnitScalar) -> UnitScalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> UnitScalar {
        UnitScalar {
            terms: self.terms.iter().map(|(t, c)| (t.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, r: &Rat) -> UnitScalar {
        if r.is_zero() {
            return UnitScalar::zero();
        }
        UnitScalar {
            terms: self.terms.iter().map(|(t, c)| (t.clone(), c * r)).collect(),
        }
    }

    /// The value as `coefficient · target-unit`. Every term must be
    /// commensurable with `target`.
    pub fn in_unit(&self, target: &UnitTag) -> Result<Rat> {
        let mut acc = rat_int(0);
        for (t, c) in &self.terms {
            acc += c * unit_ratio(t, target)?;
        }
        Ok(acc)
    }

    /// The unique `(coefficient, tag)` pair; zero reports `(0, One)`.
    /// A genuine mix of incommensurable units is an error.
    pub fn single(&self) -> Result<(Rat, UnitTag)> {
        match self.terms.len() {
            0 => Ok((rat_int(0), UnitTag::One)),
            1 => Ok((self.terms[0].1.clone(), self.terms[0].0.clone())),
            _ => Err(Error::IncommensurableUnits(format!(
                "value mixes incommensurable units: {self}"
            ))),
        }
    }

    /// Rational value when dimensionless, else `None`.
    pub fn as_rat(&self) -> Option<Rat> {
        match self.terms.as_slice() {
            [] => Some(rat_int(0)),
            [(UnitTag::One, c)] => Some(c.clone()),
            [(t, c)] => unit_ratio(t, &UnitTag::One).ok().map(|r| c * r),
            _ => None,
        }
    }

    /// Strictly positive coefficient on a single unit (positivity is
    /// unit-independent because unit ratios within a class are positive).
    pub fn is_positive(&self) -> bool {
        matches!(self.terms.as_slice(), [(_, c)] if c.is_positive())
    }
}

impl PartialEq for UnitScalar {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl Ring for UnitScalar {
    fn zero() -> Self {
        UnitScalar::zero()
    }
    fn one() -> Self {
        UnitScalar::from_rat(rat_int(1))
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
        // Products of two transcendental units have no tag in this system;
        // all engine paths multiply a tagged value by a dimensionless one.
        if self.is_zero() || other.is_zero() {
            return UnitScalar::zero();
        }
        if let Some(c) = self.as_rat() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_rat() {
            return self.scale(&c);
        }
        panic!("product of two unit-tagged scalars is not representable: ({self})·({other})");
    }
    fn neg(&self) -> Self {
        self.neg()
    }
}

impl fmt::Display for UnitScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(t, c)| match t {
                UnitTag::One => c.to_string(),
                _ => format!("{c}*{t}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
