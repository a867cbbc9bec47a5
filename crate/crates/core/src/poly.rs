//! Dense univariate polynomials over an exact field, ascending coefficient
//! order. Supports the ring operations plus division, gcd and exact root
//! extraction — everything the resultant/discriminant machinery and the
//! Weierstrass-point computations need.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::scalar::{FieldTag, Scalar};
use crate::Result;

/// Coefficients ascending in the variable; no trailing zeros; the zero
/// polynomial has an empty coefficient list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    tag: FieldTag,
    coeffs: Vec<Scalar>,
}

impl Polynomial {
    pub fn new(tag: FieldTag, mut coeffs: Vec<Scalar>) -> Polynomial {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        for c in &coeffs {
            assert_eq!(c.tag(), tag, "coefficient field mismatch");
        }
        Polynomial { tag, coeffs }
    }

    pub fn zero(tag: FieldTag) -> Polynomial {
        Polynomial {
            tag,
            coeffs: vec![],
        }
    }

    pub fn constant(c: Scalar) -> Polynomial {
        Polynomial::new(c.tag(), vec![c])
    }

    pub fn from_integer_coeffs(tag: FieldTag, coeffs: &[i64]) -> Polynomial {
        Polynomial::new(
            tag,
            coeffs
                .iter()
                .map(|&c| Scalar::from_integer(c, tag))
                .collect(),
        )
    }

    /// Monic product of `x - r` over the given roots.
    pub fn from_roots(tag: FieldTag, roots: &[Scalar]) -> Polynomial {
        let mut acc = Polynomial::new(tag, vec![tag.one()]);
        for r in roots {
            let factor = Polynomial::new(tag, vec![-r, tag.one()]);
            acc = acc.mul(&factor);
        }
        acc
    }

    pub fn tag(&self) -> FieldTag {
        self.tag
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.tag.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.tag.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| &Scalar::from_integer(i as i64, self.tag) * c)
            .collect();
        Polynomial::new(self.tag, coeffs)
    }

    pub fn add(&self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect();
        Polynomial::new(self.tag, coeffs)
    }

    pub fn sub(&self, rhs: &Polynomial) -> Polynomial {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial::new(self.tag, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, s: &Scalar) -> Polynomial {
        Polynomial::new(self.tag, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.tag);
        }
        let mut coeffs = vec![self.tag.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Polynomial::new(self.tag, coeffs)
    }

    /// Euclidean division by a nonzero divisor.
    pub fn div_rem(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let d_deg = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = divisor.leading().unwrap().invert()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.tag.zero(); self.coeffs.len().saturating_sub(d_deg)];
        while rem.len() > d_deg {
            let k = rem.len() - 1 - d_deg;
            let q = &rem[rem.len() - 1] * &lead_inv;
            for i in 0..=d_deg {
                let t = &divisor.coeffs[i] * &q;
                rem[k + i] = &rem[k + i] - &t;
            }
            debug_assert!(rem.last().unwrap().is_zero());
            rem.pop();
            while rem.last().is_some_and(Scalar::is_zero) {
                rem.pop();
            }
            quot[k] = q;
            if rem.len() <= d_deg {
                break;
            }
        }
        Ok((
            Polynomial::new(self.tag, quot),
            Polynomial::new(self.tag, rem),
        ))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, rhs: &Polynomial) -> Result<Polynomial> {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Divides out the leading coefficient (errors on the zero polynomial).
    pub fn monic(&self) -> Result<Polynomial> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        let inv = self.leading().unwrap().invert()?;
        Ok(self.scale(&inv))
    }

    /// All roots in the base field, with multiplicity, plus the nonsplit
    /// cofactor (constant when the polynomial splits).
    pub fn roots_in_field(&self) -> Result<(Vec<Scalar>, Polynomial)> {
        if self.is_zero() {
            return Err(Error::DegenerateInput("zero polynomial".into()));
        }
        match self.tag {
            FieldTag::PrimeField(p) => self.roots_mod_p(p),
            FieldTag::Rational => self.rational_roots(),
        }
    }

    fn roots_mod_p(&self, p: u64) -> Result<(Vec<Scalar>, Polynomial)> {
        if p > 1_000_000 {
            return Err(Error::FieldTooLarge(p));
        }
        let mut roots = Vec::new();
        let mut rest = self.clone();
        for x in 0..p {
            let candidate = Scalar::residue(x, p);
            while !rest.is_zero() && rest.degree() != Some(0) && rest.eval(&candidate).is_zero() {
                let factor = Polynomial::new(self.tag, vec![-&candidate, self.tag.one()]);
                let (q, r) = rest.div_rem(&factor)?;
                debug_assert!(r.is_zero());
                rest = q;
                roots.push(candidate.clone());
            }
            if rest.degree().is_none_or(|d| d == 0) {
                break;
            }
        }
        Ok((roots, rest))
    }

    /// Rational root theorem on the integer-cleared polynomial; divisor
    /// enumeration is by trial division of leading and constant coefficients.
    fn rational_roots(&self) -> Result<(Vec<Scalar>, Polynomial)> {
        let mut roots = Vec::new();
        let mut rest = self.clone();
        // strip powers of x
        while !rest.is_zero() && rest.coeff(0).is_zero() && rest.degree() != Some(0) {
            let (q, _) = rest.div_rem(&Polynomial::from_integer_coeffs(self.tag, &[0, 1]))?;
            rest = q;
            roots.push(self.tag.zero());
        }
        loop {
            if rest.degree().is_none_or(|d| d == 0) {
                break;
            }
            let ints = rest.integer_cleared();
            let lead = ints.last().unwrap().magnitude().clone();
            let cons = ints.first().unwrap().magnitude().clone();
            let num_divs = divisors(&cons)?;
            let den_divs = divisors(&lead)?;
            let mut found = None;
            'search: for n in &num_divs {
                for d in &den_divs {
                    for sign in [1i64, -1] {
                        let cand = Scalar::Rational(BigRational::new(
                            BigInt::from(sign)
                                * BigInt::from_biguint(num_bigint::Sign::Plus, n.clone()),
                            BigInt::from_biguint(num_bigint::Sign::Plus, d.clone()),
                        ));
                        if rest.eval(&cand).is_zero() {
                            found = Some(cand);
                            break 'search;
                        }
                    }
                }
            }
            match found {
                Some(r) => {
                    let factor = Polynomial::new(self.tag, vec![-&r, self.tag.one()]);
                    let (q, rem) = rest.div_rem(&factor)?;
                    debug_assert!(rem.is_zero());
                    rest = q;
                    roots.push(r);
                }
                None => break,
            }
        }
        Ok((roots, rest))
    }

    /// Integer coefficient list after clearing denominators (rationals only).
    fn integer_cleared(&self) -> Vec<BigInt> {
        let mut lcm = BigInt::one();
        for c in &self.coeffs {
            if let Scalar::Rational(r) = c {
                lcm = lcm.lcm(r.denom());
            }
        }
        self.coeffs
            .iter()
            .map(|c| match c {
                Scalar::Rational(r) => r.numer() * (&lcm / r.denom()),
                _ => unreachable!(),
            })
            .collect()
    }
}

/// All positive divisors of `n`, via trial-division factorization bounded by
/// the scalar module's default factor bound.
fn divisors(n: &num_bigint::BigUint) -> Result<Vec<num_bigint::BigUint>> {
    use num_bigint::BigUint;
    if n.is_zero() {
        return Ok(vec![]);
    }
    let mut rest = n.clone();
    let mut factors: Vec<(BigUint, u32)> = Vec::new();
    let mut d = 2u64;
    while d <= crate::scalar::DEFAULT_FACTOR_BOUND {
        let big_d = BigUint::from(d);
        if &big_d * &big_d > rest {
            break;
        }
        let mut exp = 0u32;
        while (&rest % &big_d).is_zero() {
            rest /= &big_d;
            exp += 1;
        }
        if exp > 0 {
            factors.push((big_d, exp));
        }
        d = if d == 2 { 3 } else { d + 2 };
    }
    if !rest.is_one() {
        let bound = BigUint::from(crate::scalar::DEFAULT_FACTOR_BOUND);
        if rest <= &bound * &bound {
            factors.push((rest, 1));
        } else {
            return Err(Error::FactorBoundExceeded(
                crate::scalar::DEFAULT_FACTOR_BOUND,
            ));
        }
    }
    let mut divs = vec![BigUint::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = BigUint::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    Ok(divs)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => write!(f, "x")?,
                1 => write!(f, "({c})*x")?,
                _ if c.is_one() => write!(f, "x^{i}")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldTag {
        FieldTag::Rational
    }

    #[test]
    fn eval_and_derivative() {
        // x^3 - 2x + 1
        let p = Polynomial::from_integer_coeffs(q(), &[1, -2, 0, 1]);
        assert_eq!(p.eval(&Scalar::rational(2, 1)), Scalar::rational(5, 1));
        let d = p.derivative();
        assert_eq!(d, Polynomial::from_integer_coeffs(q(), &[-2, 0, 3]));
    }

    #[test]
    fn div_rem_inverts_mul() {
        let a = Polynomial::from_integer_coeffs(q(), &[1, 2, 3, 4]);
        let b = Polynomial::from_integer_coeffs(q(), &[5, -1, 2]);
        let prod = a.mul(&b);
        let (quot, rem) = prod.div_rem(&b).unwrap();
        assert_eq!(quot, a);
        assert!(rem.is_zero());
        let shifted = prod.add(&Polynomial::from_integer_coeffs(q(), &[7]));
        let (quot, rem) = shifted.div_rem(&b).unwrap();
        assert_eq!(quot, a);
        assert_eq!(rem, Polynomial::from_integer_coeffs(q(), &[7]));
    }

    #[test]
    fn gcd_detects_common_roots() {
        let tag = FieldTag::prime_field(7).unwrap();
        let a = Polynomial::from_roots(
            tag,
            &[
                Scalar::residue(1, 7),
                Scalar::residue(2, 7),
                Scalar::residue(3, 7),
            ],
        );
        let b = Polynomial::from_roots(tag, &[Scalar::residue(2, 7), Scalar::residue(5, 7)]);
        let g = a.gcd(&b).unwrap();
        assert_eq!(g, Polynomial::from_roots(tag, &[Scalar::residue(2, 7)]));
    }

    #[test]
    fn roots_mod_p() {
        let tag = FieldTag::prime_field(11).unwrap();
        // x^6 - x = x (x^5 - 1): roots {0} ∪ mu_5 in F_11
        let p = Polynomial::from_integer_coeffs(tag, &[0, -1, 0, 0, 0, 0, 1]);
        let (mut roots, rest) = p.roots_in_field().unwrap();
        roots.sort_by(|a, b| a.canonical_cmp(b));
        let expect: Vec<Scalar> = [0u64, 1, 3, 4, 5, 9]
            .iter()
            .map(|&v| Scalar::residue(v, 11))
            .collect();
        assert_eq!(roots, expect);
        assert_eq!(rest.degree(), Some(0));
    }

    #[test]
    fn rational_roots_via_divisor_search() {
        // (2x - 3)(x + 5)(3x + 1) = 6x^3 + 23x^2 - 38x - 15
        let p = Polynomial::from_integer_coeffs(q(), &[-15, -38, 23, 6]);
        let (mut roots, rest) = p.roots_in_field().unwrap();
        roots.sort_by(|a, b| a.canonical_cmp(b));
        assert_eq!(
            roots,
            vec![
                Scalar::rational(-5, 1),
                Scalar::rational(-1, 3),
                Scalar::rational(3, 2)
            ]
        );
        assert_eq!(rest.degree(), Some(0));
        // x^2 + 1 has no rational roots
        let p = Polynomial::from_integer_coeffs(q(), &[1, 0, 1]);
        let (roots, rest) = p.roots_in_field().unwrap();
        assert!(roots.is_empty());
        assert_eq!(rest.degree(), Some(2));
    }
}
