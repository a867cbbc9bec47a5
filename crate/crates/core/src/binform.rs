//! Binary forms of degree `2g+2`, the weighted `GL_2` action
//! `A . f = det(A)^{g+1} f(A^{-1} x)`, Sylvester resultants and the
//! discriminant. The discriminant is normalized so that it agrees with the
//! root-difference-product `lead^{2n-2} * prod_{i<j} (r_i - r_j)^2` on split
//! forms, which makes it exactly invariant under the weighted action.

use std::fmt;

use crate::error::Error;
use crate::moebius::Matrix2;
use crate::poly::Polynomial;
use crate::scalar::{FieldTag, Scalar};
use crate::Result;

/// Homogeneous form `f(X, Y) = sum c_i X^i Y^{n-i}` of degree `n = 2g+2`,
/// coefficients ascending in `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    genus: usize,
    coeffs: Vec<Scalar>,
}

impl BinaryForm {
    pub fn new(genus: usize, coeffs: Vec<Scalar>) -> Result<BinaryForm> {
        if genus < 2 {
            return Err(Error::PreconditionViolated(format!(
                "genus must be at least 2, got {genus}"
            )));
        }
        if coeffs.len() != 2 * genus + 3 {
            return Err(Error::PreconditionViolated(format!(
                "degree {} form needs {} coefficients, got {}",
                2 * genus + 2,
                2 * genus + 3,
                coeffs.len()
            )));
        }
        let tag = coeffs[0].tag();
        if coeffs.iter().any(|c| c.tag() != tag) {
            return Err(Error::FieldMismatch);
        }
        if coeffs.iter().all(Scalar::is_zero) {
            return Err(Error::DegenerateInput("all coefficients vanish".into()));
        }
        Ok(BinaryForm { genus, coeffs })
    }

    pub fn from_integer_coeffs(genus: usize, tag: FieldTag, coeffs: &[i64]) -> Result<BinaryForm> {
        BinaryForm::new(
            genus,
            coeffs
                .iter()
                .map(|&c| Scalar::from_integer(c, tag))
                .collect(),
        )
    }

    /// Monic form with the given finite roots (degree must be 2g+2).
    pub fn from_finite_roots(genus: usize, tag: FieldTag, roots: &[Scalar]) -> Result<BinaryForm> {
        if roots.len() != 2 * genus + 2 {
            return Err(Error::PreconditionViolated(format!(
                "need {} roots, got {}",
                2 * genus + 2,
                roots.len()
            )));
        }
        let poly = Polynomial::from_roots(tag, roots);
        BinaryForm::new(genus, (0..2 * genus + 3).map(|i| poly.coeff(i)).collect())
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn degree(&self) -> usize {
        2 * self.genus + 2
    }

    pub fn tag(&self) -> FieldTag {
        self.coeffs[0].tag()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Scalar {
        &self.coeffs[i]
    }

    /// Coefficient of `X^n`; zero exactly when `(1:0)` is a root.
    pub fn leading(&self) -> &Scalar {
        self.coeffs.last().unwrap()
    }

    pub fn scale(&self, s: &Scalar) -> BinaryForm {
        BinaryForm {
            genus: self.genus,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `f(x, 1)` as a univariate polynomial.
    pub fn dehomogenize(&self) -> Polynomial {
        Polynomial::new(self.tag(), self.coeffs.clone())
    }

    pub fn eval(&self, x: &Scalar, y: &Scalar) -> Scalar {
        let n = self.degree();
        let mut acc = self.tag().zero();
        let mut xp = vec![self.tag().one()];
        let mut yp = vec![self.tag().one()];
        for i in 0..n {
            xp.push(&xp[i] * x);
            yp.push(&yp[i] * y);
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            acc = &acc + &(&(c * &xp[i]) * &yp[n - i]);
        }
        acc
    }

    /// Plain substitution `f(aX + bY, cX + dY)`.
    pub fn substitute(&self, m: &Matrix2) -> BinaryForm {
        let n = self.degree();
        let tag = self.tag();
        // Dehomogenize at Y = 1: every term of the substituted form has
        // total degree n, so the t^k coefficient of
        // (a t + b)^i (c t + d)^{n-i} is its X^k Y^{n-k} coefficient.
        let u = Polynomial::new(tag, vec![m.b.clone(), m.a.clone()]);
        let v = Polynomial::new(tag, vec![m.d.clone(), m.c.clone()]);
        let mut u_pows = vec![Polynomial::new(tag, vec![tag.one()])];
        let mut v_pows = vec![Polynomial::new(tag, vec![tag.one()])];
        for i in 0..n {
            u_pows.push(u_pows[i].mul(&u));
            v_pows.push(v_pows[i].mul(&v));
        }
        let mut acc = Polynomial::zero(tag);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = u_pows[i].mul(&v_pows[n - i]).scale(c);
            acc = acc.add(&term);
        }
        BinaryForm {
            genus: self.genus,
            coeffs: (0..=n).map(|i| acc.coeff(i)).collect(),
        }
    }

    /// The scalar `mu` with `self = mu * other`, if the two forms are
    /// proportional.
    pub fn proportionality(&self, other: &BinaryForm) -> Option<Scalar> {
        if self.genus != other.genus || self.tag() != other.tag() {
            return None;
        }
        let k = other.coeffs.iter().position(|c| !c.is_zero())?;
        if self.coeffs[k].is_zero() {
            return None;
        }
        let mu = self.coeffs[k].divide(&other.coeffs[k]).ok()?;
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            if *a != &mu * b {
                return None;
            }
        }
        Some(mu)
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if i > 0 {
                write!(f, "*X^{i}")?;
            }
            if n - i > 0 {
                write!(f, "*Y^{}", n - i)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The weighted action `det(A)^{g+1} f(A^{-1} x)`; on projective classes this
/// is the natural `PGL_2` action on root divisors.
pub fn gl2_act(a: &Matrix2, f: &BinaryForm) -> Result<BinaryForm> {
    let det = a.det();
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    // f(A^{-1} x) = det^{-n} f(adj(A) x) since f is homogeneous of degree n,
    // so the weighted action is det^{-(g+1)} f(adj(A) x).
    let sub = f.substitute(&a.adjugate());
    let factor = det.invert()?.pow((f.genus() + 1) as u64);
    Ok(sub.scale(&factor))
}

/// Determinant by exact Gaussian elimination.
fn determinant(mut m: Vec<Vec<Scalar>>, tag: FieldTag) -> Result<Scalar> {
    let n = m.len();
    let mut sign_flip = false;
    let mut det = tag.one();
    for col in 0..n {
        let pivot_row = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(r) => r,
            None => return Ok(tag.zero()),
        };
        if pivot_row != col {
            m.swap(pivot_row, col);
            sign_flip = !sign_flip;
        }
        let pivot = m[col][col].clone();
        det = &det * &pivot;
        let pivot_inv = pivot.invert()?;
        for row in col + 1..n {
            if m[row][col].is_zero() {
                continue;
            }
            let factor = &m[row][col] * &pivot_inv;
            let (upper, lower) = m.split_at_mut(row);
            let pivot_row = &upper[col];
            for (target, source) in lower[0].iter_mut().zip(pivot_row).skip(col) {
                let t = source * &factor;
                *target = &*target - &t;
            }
        }
    }
    Ok(if sign_flip { -&det } else { det })
}

/// Determinant of the `(m+r) x (m+r)` Sylvester matrix of `f` (degree m) and
/// `h` (degree r), arranged so that the value equals
/// `lead(h)^m * prod f(beta_i)` over the roots `beta_i` of `h`.
pub fn sylvester_resultant(f: &Polynomial, h: &Polynomial) -> Result<Scalar> {
    let m = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::DegenerateInput("f must have degree >= 1".into())),
    };
    let r = match h.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::DegenerateInput("h must have degree >= 1".into())),
    };
    let tag = f.tag();
    if tag != h.tag() {
        return Err(Error::FieldMismatch);
    }
    let size = m + r;
    let mut rows = Vec::with_capacity(size);
    // m rows of h's coefficients (descending), then r rows of f's.
    for i in 0..m {
        let mut row = vec![tag.zero(); size];
        for (k, j) in (0..=r).rev().enumerate() {
            row[i + k] = h.coeff(j);
        }
        rows.push(row);
    }
    for i in 0..r {
        let mut row = vec![tag.zero(); size];
        for (k, j) in (0..=m).rev().enumerate() {
            row[i + k] = f.coeff(j);
        }
        rows.push(row);
    }
    determinant(rows, tag)
}

/// Discriminant of a degree-`n >= 1` polynomial with nonzero leading
/// coefficient: `(-1)^{n(n-1)/2} Res(p, p') / lead(p)`. Requires the
/// characteristic not to divide `n`.
pub fn discriminant_poly(p: &Polynomial) -> Result<Scalar> {
    let n = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::DegenerateInput("degree must be >= 1".into())),
    };
    p.tag().require_char_not_dividing(n as u64)?;
    let lead = p.leading().unwrap().clone();
    if n == 1 {
        return Ok(p.tag().one());
    }
    let res = sylvester_resultant(p, &p.derivative())?;
    let signed = if (n * (n - 1) / 2) % 2 == 1 {
        -&res
    } else {
        res
    };
    signed.divide(&lead)
}

/// Discriminant of a binary form. A vanishing leading coefficient (a root at
/// infinity) is handled by the deterministic unimodular shift
/// `(X, Y) -> (X, tX + Y)`, under which the discriminant is exactly
/// invariant.
pub fn discriminant(f: &BinaryForm) -> Result<Scalar> {
    let n = f.degree();
    f.tag().require_char_not_dividing(n as u64)?;
    let tag = f.tag();
    let mut t = 0i64;
    loop {
        let shifted = if t == 0 {
            f.clone()
        } else {
            f.substitute(&Matrix2::from_integers(tag, 1, 0, t, 1))
        };
        if !shifted.leading().is_zero() {
            return discriminant_poly(&shifted.dehomogenize());
        }
        t += 1;
        if t as usize > n + 1 {
            // impossible for a nonzero form over a field with > n elements
            return Err(Error::DegenerateInput(
                "could not move roots away from infinity".into(),
            ));
        }
    }
}

/// A form is smooth exactly when its discriminant does not vanish.
pub fn is_smooth(f: &BinaryForm) -> Result<bool> {
    Ok(!discriminant(f)?.is_zero())
}
