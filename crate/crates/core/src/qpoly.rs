//! Sparse univariate polynomials with exact rational coefficients, used for
//! the closed-form order/normalizer/Moebius data of the line table.
//!
//! The indeterminate is the field size q. No floating point is involved:
//! coefficients are `BigRational`, evaluation is exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QPoly {
    /// exponent -> nonzero coefficient
    coeffs: BTreeMap<u32, BigRational>,
}

impl QPoly {
    pub fn zero() -> QPoly {
        QPoly::default()
    }

    pub fn constant(c: i64) -> QPoly {
        QPoly::from_big(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn from_big(c: BigRational) -> QPoly {
        let mut p = QPoly::zero();
        if !c.is_zero() {
            p.coeffs.insert(0, c);
        }
        p
    }

    /// c * q^e
    pub fn term(c: i64, e: u32) -> QPoly {
        QPoly::term_big(BigRational::from_integer(BigInt::from(c)), e)
    }

    pub fn term_big(c: BigRational, e: u32) -> QPoly {
        let mut p = QPoly::zero();
        if !c.is_zero() {
            p.coeffs.insert(e, c);
        }
        p
    }

    /// c/d * q^e; panics if d == 0.
    pub fn frac_term(c: i64, d: i64, e: u32) -> QPoly {
        QPoly::term_big(
            BigRational::new(BigInt::from(c), BigInt::from(d)),
            e,
        )
    }

    /// the monomial q
    pub fn q() -> QPoly {
        QPoly::term(1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeff(&self, e: u32) -> BigRational {
        self.coeffs.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let mut out = self.clone();
        for (&e, c) in &other.coeffs {
            let entry = out.coeffs.entry(e).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                out.coeffs.remove(&e);
            }
        }
        out
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        self.add(&other.scale_int(-1))
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        let mut out = QPoly::zero();
        for (&e1, c1) in &self.coeffs {
            for (&e2, c2) in &other.coeffs {
                let e = e1 + e2;
                let entry = out.coeffs.entry(e).or_insert_with(BigRational::zero);
                *entry += c1 * c2;
                if entry.is_zero() {
                    out.coeffs.remove(&e);
                }
            }
        }
        out
    }

    pub fn scale_int(&self, s: i64) -> QPoly {
        self.scale(&BigRational::from_integer(BigInt::from(s)))
    }

    pub fn scale(&self, s: &BigRational) -> QPoly {
        if s.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, c * s)).collect(),
        }
    }

    /// Exact polynomial division; returns None unless `self = q * other`
    /// for some polynomial q (zero remainder).
    pub fn div_exact(&self, other: &QPoly) -> Option<QPoly> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(QPoly::zero());
        }
        let de = other.degree().unwrap();
        let dc = other.coeff(de);
        let mut rem = self.clone();
        let mut quot = QPoly::zero();
        while let Some(dr) = rem.degree() {
            if dr < de {
                return None;
            }
            let c = rem.coeff(dr) / &dc;
            let t = QPoly::term_big(c, dr - de);
            quot = quot.add(&t);
            rem = rem.sub(&t.mul(other));
        }
        Some(quot)
    }

    /// Exact evaluation at an integer q; the result must be an integer
    /// (asserted), which holds for all polynomials in the line table at the
    /// field sizes they are evaluated at.
    pub fn eval_int(&self, q: &BigInt) -> BigInt {
        let mut acc = BigRational::zero();
        let qr = BigRational::from_integer(q.clone());
        for (&e, c) in &self.coeffs {
            let mut pw = BigRational::one();
            for _ in 0..e {
                pw *= &qr;
            }
            acc += c * pw;
        }
        assert!(acc.is_integer(), "non-integral evaluation of {} at q={}", self, q);
        acc.to_integer()
    }

    pub fn eval_u64(&self, q: u64) -> BigInt {
        self.eval_int(&BigInt::from(q))
    }

    /// Build from a list of (numerator, denominator, exponent) terms.
    pub fn from_terms(terms: &[(i64, i64, u32)]) -> QPoly {
        let mut p = QPoly::zero();
        for &(n, d, e) in terms {
            p = p.add(&QPoly::frac_term(n, d, e));
        }
        p
    }

    /// Product of linear-type factors given as polynomials.
    pub fn product(factors: &[QPoly]) -> QPoly {
        let mut acc = QPoly::constant(1);
        for f in factors {
            acc = acc.mul(f);
        }
        acc
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(w, "0");
        }
        let mut first = true;
        for (&e, c) in self.coeffs.iter().rev() {
            if first {
                first = false;
                if c.is_negative() {
                    write!(w, "-")?;
                }
            } else if c.is_negative() {
                write!(w, " - ")?;
            } else {
                write!(w, " + ")?;
            }
            let a = c.abs();
            let show_coeff = !a.is_one() || e == 0;
            if show_coeff {
                if a.is_integer() {
                    write!(w, "{}", a.to_integer())?;
                } else {
                    write!(w, "{}/{}", a.numer(), a.denom())?;
                }
            }
            match e {
                0 => {}
                1 => write!(w, "{}q", if show_coeff { "*" } else { "" })?,
                _ => write!(w, "{}q^{}", if show_coeff { "*" } else { "" }, e)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_eval() {
        // (q-1)(q+1) = q^2 - 1
        let qm1 = QPoly::q().sub(&QPoly::constant(1));
        let qp1 = QPoly::q().add(&QPoly::constant(1));
        let prod = qm1.mul(&qp1);
        assert_eq!(prod, QPoly::term(1, 2).sub(&QPoly::constant(1)));
        assert_eq!(prod.eval_u64(8), BigInt::from(63));
        assert!(prod.sub(&prod).is_zero());
    }

    #[test]
    fn rational_coefficients_evaluate_exactly() {
        // q/2 is integral at even q
        let half_q = QPoly::frac_term(1, 2, 1);
        assert_eq!(half_q.eval_u64(8), BigInt::from(4));
        assert_eq!(half_q.degree(), Some(1));
    }

    #[test]
    #[should_panic(expected = "non-integral")]
    fn non_integral_evaluation_panics() {
        QPoly::frac_term(1, 2, 1).eval_u64(3);
    }

    #[test]
    fn display_is_readable() {
        let p = QPoly::from_terms(&[(1, 1, 3), (-1, 2, 1), (7, 1, 0)]);
        assert_eq!(p.to_string(), "q^3 - 1/2*q + 7");
        assert_eq!(QPoly::zero().to_string(), "0");
    }
}
