//! Exact field elements: arbitrary-precision rationals and residues modulo an
//! odd prime, with square-class computation and small number-theoretic
//! helpers (primality, roots of unity) used by the rest of the crate.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::Result;

/// Trial-division bound used by `square_class` over the rationals when no
/// explicit bound is supplied.
pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000;

/// The field a scalar lives in: `Q` or `F_p` with `p` an odd prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldTag {
    Rational,
    PrimeField(u64),
}

impl FieldTag {
    /// Builds the prime-field tag, rejecting 2 and composites.
    pub fn prime_field(p: u64) -> Result<FieldTag> {
        if p == 2 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        Ok(FieldTag::PrimeField(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldTag::Rational => 0,
            FieldTag::PrimeField(p) => *p,
        }
    }

    /// Does the field characteristic divide `n`? Always false over `Q`.
    pub fn char_divides(&self, n: u64) -> bool {
        match self {
            FieldTag::Rational => false,
            FieldTag::PrimeField(p) => n.is_multiple_of(*p),
        }
    }

    /// Errors out when the characteristic divides `n`.
    pub fn require_char_not_dividing(&self, n: u64) -> Result<()> {
        match self {
            FieldTag::PrimeField(p) if n.is_multiple_of(*p) => {
                Err(Error::BadCharacteristic { p: *p, n })
            }
            _ => Ok(()),
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::from_integer(0, *self)
    }

    pub fn one(&self) -> Scalar {
        Scalar::from_integer(1, *self)
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rational => write!(f, "Q"),
            FieldTag::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<FieldTag> {
        if s == "Q" {
            return Ok(FieldTag::Rational);
        }
        if let Some(rest) = s.strip_prefix("Fp:") {
            let p: u64 = rest.parse().map_err(|_| Error::ParseField(s.into()))?;
            return FieldTag::prime_field(p);
        }
        Err(Error::ParseField(s.into()))
    }
}

/// The class of a nonzero element in `k*/(k*)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SquareClass {
    Square,
    NonSquare,
}

impl SquareClass {
    /// Group law of `{±1}`.
    pub fn compose(self, other: SquareClass) -> SquareClass {
        if self == other {
            SquareClass::Square
        } else {
            SquareClass::NonSquare
        }
    }

    pub fn is_square(self) -> bool {
        self == SquareClass::Square
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SquareClass::Square => write!(f, "square"),
            SquareClass::NonSquare => write!(f, "nonsquare"),
        }
    }
}

/// Exact field element. Residues are kept reduced to `0..p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, prime: u64 },
}

impl Scalar {
    pub fn from_integer(n: i64, tag: FieldTag) -> Scalar {
        match tag {
            FieldTag::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            FieldTag::PrimeField(p) => Scalar::Residue {
                value: n.rem_euclid(p as i64) as u64,
                prime: p,
            },
        }
    }

    pub fn residue(value: u64, prime: u64) -> Scalar {
        Scalar::Residue {
            value: value % prime,
            prime,
        }
    }

    pub fn rational(num: i64, den: i64) -> Scalar {
        assert!(den != 0, "rational with zero denominator");
        Scalar::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn tag(&self) -> FieldTag {
        match self {
            Scalar::Rational(_) => FieldTag::Rational,
            Scalar::Residue { prime, .. } => FieldTag::PrimeField(*prime),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn invert(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Residue { value, prime } => Scalar::Residue {
                value: mod_pow(*value, prime - 2, *prime),
                prime: *prime,
            },
        })
    }

    pub fn divide(&self, rhs: &Scalar) -> Result<Scalar> {
        Ok(self * &rhs.invert()?)
    }

    pub fn pow(&self, exp: u64) -> Scalar {
        match self {
            Scalar::Rational(r) => {
                let e = i32::try_from(exp).expect("rational exponent too large");
                Scalar::Rational(r.pow(e))
            }
            Scalar::Residue { value, prime } => Scalar::Residue {
                value: mod_pow(*value, exp, *prime),
                prime: *prime,
            },
        }
    }

    /// Signed power; negative exponents invert first.
    pub fn pow_i64(&self, exp: i64) -> Result<Scalar> {
        if exp >= 0 {
            Ok(self.pow(exp as u64))
        } else {
            Ok(self.invert()?.pow(exp.unsigned_abs()))
        }
    }

    /// Class of `self` in `k*/(k*)^2` with the default factor bound.
    pub fn square_class(&self) -> Result<SquareClass> {
        self.square_class_bounded(DEFAULT_FACTOR_BOUND)
    }

    /// Over `F_p` this is Euler's criterion; over `Q` the squarefree part of
    /// numerator times denominator is computed by trial division up to
    /// `bound`, and inputs whose factorization cannot be certified within the
    /// bound are rejected.
    pub fn square_class_bounded(&self, bound: u64) -> Result<SquareClass> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        match self {
            Scalar::Residue { value, prime } => {
                let euler = mod_pow(*value, (prime - 1) / 2, *prime);
                Ok(if euler == 1 {
                    SquareClass::Square
                } else {
                    SquareClass::NonSquare
                })
            }
            Scalar::Rational(r) => {
                if r.is_negative() {
                    return Ok(SquareClass::NonSquare);
                }
                let m = (r.numer() * r.denom()).magnitude().clone();
                Ok(if squarefree_part_is_trivial(&m, bound)? {
                    SquareClass::Square
                } else {
                    SquareClass::NonSquare
                })
            }
        }
    }

    /// Total order used for canonical sorting: rationals numerically,
    /// residues by value (fields compared by tag first).
    pub fn canonical_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Residue { value: a, prime: p }, Scalar::Residue { value: b, prime: q }) => {
                p.cmp(q).then(a.cmp(b))
            }
            (Scalar::Rational(_), Scalar::Residue { .. }) => Ordering::Less,
            (Scalar::Residue { .. }, Scalar::Rational(_)) => Ordering::Greater,
        }
    }

    pub fn parse(s: &str, tag: FieldTag) -> Result<Scalar> {
        match tag {
            FieldTag::Rational => {
                let r = BigRational::from_str(s).map_err(|_| Error::ParseScalar(s.into()))?;
                Ok(Scalar::Rational(r))
            }
            FieldTag::PrimeField(p) => {
                let n = BigInt::from_str(s).map_err(|_| Error::ParseScalar(s.into()))?;
                let v = n.mod_floor_u64(p);
                Ok(Scalar::Residue { value: v, prime: p })
            }
        }
    }

    fn expect_same_field(&self, other: &Scalar) {
        assert_eq!(
            self.tag(),
            other.tag(),
            "scalar arithmetic across different fields"
        );
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        use num_integer::Integer;
        self.mod_floor(&BigInt::from(p)).to_u64().unwrap()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        self.expect_same_field(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, prime }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: mod_add(*a, *b, *prime),
                    prime: *prime,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        self.expect_same_field(rhs);
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, prime }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: mod_mul(*a, *b, *prime),
                    prime: *prime,
                }
            }
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, prime } => Scalar::Residue {
                value: if *value == 0 { 0 } else { prime - value },
                prime: *prime,
            },
        }
    }
}

/// True iff the squarefree part of `m` is 1. After trial division up to
/// `bound`, a leftover cofactor is accepted only when it is a perfect square
/// or certified prime by the bound (`cofactor <= bound^2`).
fn squarefree_part_is_trivial(m: &BigUint, bound: u64) -> Result<bool> {
    debug_assert!(!m.is_zero());
    let mut trivial = true;
    let mut rest = m.clone();
    let mut d = 2u64;
    while d <= bound {
        let dd = BigUint::from(d) * BigUint::from(d);
        if dd > rest {
            break;
        }
        let big_d = BigUint::from(d);
        let mut exp = 0u64;
        while (&rest % &big_d).is_zero() {
            rest /= &big_d;
            exp += 1;
        }
        if exp % 2 == 1 {
            trivial = false;
        }
        d = if d == 2 { 3 } else { d + 2 };
    }
    if rest.is_one() {
        return Ok(trivial);
    }
    let s = rest.sqrt();
    if &s * &s == rest {
        return Ok(trivial);
    }
    // No factor <= bound, not a square: prime iff rest <= bound^2.
    if rest <= BigUint::from(bound) * BigUint::from(bound) {
        return Ok(false);
    }
    Err(Error::FactorBoundExceeded(bound))
}

pub(crate) fn mod_add(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

pub(crate) fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    base %= p;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, p);
        }
        base = mod_mul(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, valid for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest odd prime `p ≡ 1 (mod m)`, so that `F_p` contains the `m`-th
/// roots of unity.
pub fn prime_with_unity_roots(m: u64) -> u64 {
    assert!(m >= 1);
    let mut k = 1u64;
    loop {
        let candidate = k * m + 1;
        if candidate > 2 && candidate % 2 == 1 && is_prime(candidate) {
            return candidate;
        }
        k += 1;
    }
}

/// Smallest prime `>= n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n.max(2);
    loop {
        if is_prime(c) {
            return c;
        }
        c += 1;
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Multiplicative order of `z` modulo `p` (for `z` nonzero).
pub fn multiplicative_order(z: u64, p: u64) -> u64 {
    assert!(!z.is_multiple_of(p));
    let mut order = p - 1;
    for q in prime_factors(p - 1) {
        while order.is_multiple_of(q) && mod_pow(z, order / q, p) == 1 {
            order /= q;
        }
    }
    order
}

/// Smallest residue of multiplicative order exactly `m` in `F_p`, if any
/// (requires `m | p - 1`).
pub fn root_of_unity(p: u64, m: u64) -> Option<u64> {
    if m == 0 || !(p - 1).is_multiple_of(m) {
        return None;
    }
    if m == 1 {
        return Some(1);
    }
    let factors = prime_factors(m);
    (2..p).find(|&z| mod_pow(z, m, p) == 1 && factors.iter().all(|&q| mod_pow(z, m / q, p) != 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> FieldTag {
        FieldTag::prime_field(p).unwrap()
    }

    #[test]
    fn field_tag_rejects_two_and_composites() {
        assert!(FieldTag::prime_field(2).is_err());
        assert!(FieldTag::prime_field(9).is_err());
        assert!(FieldTag::prime_field(1).is_err());
        assert!(FieldTag::prime_field(7).is_ok());
    }

    #[test]
    fn char_divides_predicate() {
        assert!(!FieldTag::Rational.char_divides(6));
        assert!(fp(3).char_divides(6));
        assert!(!fp(5).char_divides(6));
        assert!(fp(5).require_char_not_dividing(10).is_err());
    }

    #[test]
    fn square_class_examples() {
        // (1, Q) -> Square
        let one = Scalar::rational(1, 1);
        assert_eq!(one.square_class().unwrap(), SquareClass::Square);
        // (4, F_7) -> Square since 2^2 = 4
        let four = Scalar::residue(4, 7);
        assert_eq!(four.square_class().unwrap(), SquareClass::Square);
        // (3, F_7) -> NonSquare: 3^3 = 27 ≡ -1 (mod 7)
        assert_eq!(mod_pow(3, 3, 7), 6);
        let three = Scalar::residue(3, 7);
        assert_eq!(three.square_class().unwrap(), SquareClass::NonSquare);
    }

    #[test]
    fn square_class_zero_is_error() {
        assert_eq!(
            Scalar::residue(0, 7).square_class().unwrap_err(),
            Error::ZeroInput
        );
        assert_eq!(
            Scalar::rational(0, 1).square_class().unwrap_err(),
            Error::ZeroInput
        );
    }

    #[test]
    fn square_class_rationals() {
        assert_eq!(
            Scalar::rational(9, 4).square_class().unwrap(),
            SquareClass::Square
        );
        assert_eq!(
            Scalar::rational(3, 4).square_class().unwrap(),
            SquareClass::NonSquare
        );
        // 2/3: squarefree part of 6 is 6
        assert_eq!(
            Scalar::rational(2, 3).square_class().unwrap(),
            SquareClass::NonSquare
        );
        // 27/3 = 9
        assert_eq!(
            Scalar::rational(27, 3).square_class().unwrap(),
            SquareClass::Square
        );
        // negative values are never squares
        assert_eq!(
            Scalar::rational(-4, 1).square_class().unwrap(),
            SquareClass::NonSquare
        );
    }

    #[test]
    fn square_class_large_prime_cofactor() {
        // 10007 is prime, above the bound 1000 but below 1000^2, so the
        // cofactor is certified prime.
        let s = Scalar::rational(10_007, 1);
        assert_eq!(
            s.square_class_bounded(1000).unwrap(),
            SquareClass::NonSquare
        );
        // A product of two distinct primes above the bound cannot be certified.
        let big = 10_007i64 * 10_009;
        let s = Scalar::Rational(BigRational::from_integer(BigInt::from(big)));
        assert_eq!(
            s.square_class_bounded(1000).unwrap_err(),
            Error::FactorBoundExceeded(1000)
        );
        // ... unless it is a perfect square.
        let sq = BigInt::from(10_007i64) * BigInt::from(10_007i64);
        let s = Scalar::Rational(BigRational::from_integer(sq));
        assert_eq!(s.square_class_bounded(1000).unwrap(), SquareClass::Square);
    }

    #[test]
    fn square_class_is_multiplicative_over_fp() {
        for p in [7u64, 11, 101] {
            for a in 1..p {
                for b in 1..p {
                    let ca = Scalar::residue(a, p).square_class().unwrap();
                    let cb = Scalar::residue(b, p).square_class().unwrap();
                    let cab = (&Scalar::residue(a, p) * &Scalar::residue(b, p))
                        .square_class()
                        .unwrap();
                    assert_eq!(cab, ca.compose(cb));
                }
            }
        }
    }

    #[test]
    fn half_the_units_are_squares() {
        let mut p = 3u64;
        while p <= 101 {
            let squares = (1..p)
                .filter(|&a| Scalar::residue(a, p).square_class().unwrap() == SquareClass::Square)
                .count() as u64;
            assert_eq!(squares, (p - 1) / 2, "p = {p}");
            p = next_prime(p + 1);
        }
    }

    #[test]
    fn field_axioms_randomized() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for tag in [FieldTag::Rational, fp(1009)] {
            for _ in 0..200 {
                let draw = |n: u64, tag: FieldTag| match tag {
                    FieldTag::Rational => {
                        Scalar::rational((n % 41) as i64 - 20, (n % 7 + 1) as i64)
                    }
                    FieldTag::PrimeField(p) => Scalar::residue(n % p, p),
                };
                let a = draw(next(), tag);
                let b = draw(next(), tag);
                let c = draw(next(), tag);
                assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                assert_eq!(&a + &(-&a), tag.zero());
                if !a.is_zero() {
                    assert_eq!(&a * &a.invert().unwrap(), tag.one());
                }
            }
        }
    }

    #[test]
    fn division_by_zero_reported() {
        let a = Scalar::residue(3, 7);
        assert_eq!(
            a.divide(&Scalar::residue(0, 7)).unwrap_err(),
            Error::DivisionByZero
        );
        assert_eq!(
            Scalar::rational(1, 2)
                .divide(&Scalar::rational(0, 1))
                .unwrap_err(),
            Error::DivisionByZero
        );
    }

    #[test]
    fn serialization_round_trip() {
        let tag = FieldTag::Rational;
        for s in ["3/4", "-3/4", "5", "0"] {
            let v = Scalar::parse(s, tag).unwrap();
            assert_eq!(v.to_string(), s);
        }
        let tag = fp(7);
        assert_eq!(Scalar::parse("5", tag).unwrap(), Scalar::residue(5, 7));
        assert_eq!(Scalar::parse("-1", tag).unwrap(), Scalar::residue(6, 7));
        assert_eq!(Scalar::parse("12", tag).unwrap(), Scalar::residue(5, 7));
        assert_eq!("Fp:7".parse::<FieldTag>().unwrap(), tag);
        assert_eq!("Q".parse::<FieldTag>().unwrap(), FieldTag::Rational);
        assert!("Fp:4".parse::<FieldTag>().is_err());
        assert!("R".parse::<FieldTag>().is_err());
    }

    #[test]
    fn primality_and_unity_roots() {
        assert!(is_prime(2));
        assert!(is_prime(1009));
        assert!(!is_prime(1));
        assert!(!is_prime(1_000_001));
        assert_eq!(prime_with_unity_roots(30), 31);
        assert_eq!(prime_with_unity_roots(56), 113);
        assert_eq!(prime_with_unity_roots(1722), 1723);
        // zeta_5 = 3 in F_11: 3 has multiplicative order 5 mod 11
        assert_eq!(root_of_unity(11, 5), Some(3));
        assert_eq!(multiplicative_order(3, 11), 5);
        assert_eq!(root_of_unity(11, 7), None);
    }
}
