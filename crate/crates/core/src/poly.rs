//! Dense univariate polynomials over exact rationals.
//!
//! Coefficients are stored in ascending order with no trailing zeros, so two
//! polynomials are equal iff their coefficient vectors are equal. The zero
//! polynomial is the empty vector and has degree `None`. The indeterminate is
//! contextual (the spectral variable for operator coefficients, the sequence
//! index for eigenvalue matrices); `fmt_var` names it at display time.

use crate::ring::Ring;
use crate::scalar::{rat_int, Rat};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    // ---- Construction ----

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(rat_int(1))
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Poly::from_coeffs(vec![rat_int(0), rat_int(1)])
    }

    pub fn constant(c: Rat) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// Build from ascending coefficients; trailing zeros are trimmed.
    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        let mut p = Poly { coeffs };
        p.normalize();
        p
    }

    /// The monomial `c·x^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![rat_int(0); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    // ---- Inspection ----

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(|| rat_int(0))
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(|| rat_int(0))
    }

    // ---- Arithmetic ----

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![rat_int(0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * rat_int(k as i64))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    /// Horner evaluation.
    pub fn eval(&self, at: &Rat) -> Rat {
        let mut acc = rat_int(0);
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    /// Substitute a polynomial for the indeterminate.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// Euclidean division: `self = q·d + r` with `deg r < deg d`.
    /// `None` when `d` is zero.
    pub fn divrem(&self, d: &Poly) -> Option<(Poly, Poly)> {
        if d.is_zero() {
            return None;
        }
        let dd = d.degree().unwrap();
        let lead_inv = rat_int(1) / d.leading();
        let mut rem = self.clone();
        let mut q = vec![rat_int(0); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let f = rem.leading() * &lead_inv;
            let shift = rd - dd;
            q[shift] = f.clone();
            rem = rem.sub(&d.mul(&Poly::monomial(f, shift)));
        }
        Some((Poly::from_coeffs(q), rem))
    }

    /// Exact quotient, or `None` when division leaves a remainder.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(d)?;
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (1-normalized; gcd with zero is the
    /// other argument made monic).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).unwrap();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scale to leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = rat_int(1) / self.leading();
        self.scale(&inv)
    }

    // ---- Root certificates ----

    /// All roots in ℕ₀, found exactly: every real root has absolute value at
    /// most the Cauchy bound `1 + max|a_i/a_d|`, so testing the integers up to
    /// that bound is exhaustive. `None` for the zero polynomial (everything is
    /// a root).
    pub fn nonneg_integer_roots(&self) -> Option<(Vec<u64>, u64)> {
        if self.is_zero() {
            return None;
        }
        let lead = self.leading();
        let mut max_ratio = rat_int(0);
        for c in &self.coeffs {
            let r = (c / &lead).abs();
            if r > max_ratio {
                max_ratio = r;
            }
        }
        let bound = (max_ratio + rat_int(1)).ceil().to_integer();
        let bound = bound.to_u64().unwrap_or(u64::MAX);
        let mut roots = Vec::new();
        for k in 0..=bound {
            if self.eval(&Rat::from_integer(BigInt::from(k))).is_zero() {
                roots.push(k);
            }
        }
        Some((roots, bound))
    }

    // ---- Display ----

    /// Render with a named indeterminate, e.g. `"x^2 - 1/3"`.
    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = match k {
                0 => mag.to_string(),
                _ => {
                    let xp = if k == 1 {
                        var.to_string()
                    } else {
                        format!("{var}^{k}")
                    };
                    if mag == rat_int(1) {
                        xp
                    } else {
                        format!("{mag}*{xp}")
                    }
                }
            };
            if parts.is_empty() {
                parts.push(if c.is_negative() {
                    format!("-{body}")
                } else {
                    body
                });
            } else {
                parts.push(format!("{} {body}", if c.is_negative() { "-" } else { "+" }));
            }
        }
        parts.join(" ")
    }
}

impl Ring for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
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
