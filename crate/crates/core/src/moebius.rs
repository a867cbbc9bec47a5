//! Elements of `PGL_2(k)` as canonically normalized 2x2 matrices, points of
//! the projective line, three-point interpolation, order computation, and
//! the explicit involution pairing two prescribed point pairs.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Error;
use crate::scalar::{FieldTag, Scalar};
use crate::Result;

/// Plain 2x2 matrix over the field; lifts of Möbius maps and inputs of the
/// weighted action on binary forms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix2 {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl Matrix2 {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Matrix2 {
        let tag = a.tag();
        assert!(
            b.tag() == tag && c.tag() == tag && d.tag() == tag,
            "matrix entries from different fields"
        );
        Matrix2 { a, b, c, d }
    }

    pub fn from_integers(tag: FieldTag, a: i64, b: i64, c: i64, d: i64) -> Matrix2 {
        Matrix2::new(
            Scalar::from_integer(a, tag),
            Scalar::from_integer(b, tag),
            Scalar::from_integer(c, tag),
            Scalar::from_integer(d, tag),
        )
    }

    pub fn identity(tag: FieldTag) -> Matrix2 {
        Matrix2::from_integers(tag, 1, 0, 0, 1)
    }

    pub fn tag(&self) -> FieldTag {
        self.a.tag()
    }

    pub fn det(&self) -> Scalar {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn adjugate(&self) -> Matrix2 {
        Matrix2 {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn mul(&self, rhs: &Matrix2) -> Matrix2 {
        Matrix2 {
            a: &(&self.a * &rhs.a) + &(&self.b * &rhs.c),
            b: &(&self.a * &rhs.b) + &(&self.b * &rhs.d),
            c: &(&self.c * &rhs.a) + &(&self.d * &rhs.c),
            d: &(&self.c * &rhs.b) + &(&self.d * &rhs.d),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix2 {
        Matrix2 {
            a: &self.a * s,
            b: &self.b * s,
            c: &self.c * s,
            d: &self.d * s,
        }
    }

    pub fn entries(&self) -> [&Scalar; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

/// A point of `P^1(k)`, stored normalized: `(x : 1)` for finite points and
/// `(1 : 0)` for the point at infinity, so equality is coordinate equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    x: Scalar,
    y: Scalar,
}

impl ProjectivePoint {
    pub fn new(x: Scalar, y: Scalar) -> Result<ProjectivePoint> {
        if x.tag() != y.tag() {
            return Err(Error::FieldMismatch);
        }
        if x.is_zero() && y.is_zero() {
            return Err(Error::DegenerateInput("(0 : 0) is not a point".into()));
        }
        Ok(if y.is_zero() {
            ProjectivePoint {
                x: x.tag().one(),
                y: x.tag().zero(),
            }
        } else {
            let inv = y.invert().expect("nonzero");
            ProjectivePoint {
                x: &x * &inv,
                y: y.tag().one(),
            }
        })
    }

    pub fn finite(x: Scalar) -> ProjectivePoint {
        let tag = x.tag();
        ProjectivePoint { x, y: tag.one() }
    }

    pub fn infinity(tag: FieldTag) -> ProjectivePoint {
        ProjectivePoint {
            x: tag.one(),
            y: tag.zero(),
        }
    }

    pub fn from_integer(n: i64, tag: FieldTag) -> ProjectivePoint {
        ProjectivePoint::finite(Scalar::from_integer(n, tag))
    }

    pub fn tag(&self) -> FieldTag {
        self.x.tag()
    }

    pub fn is_infinity(&self) -> bool {
        self.y.is_zero()
    }

    pub fn x(&self) -> &Scalar {
        &self.x
    }

    pub fn y(&self) -> &Scalar {
        &self.y
    }

    /// Canonical order: finite points by coordinate, infinity last.
    pub fn canonical_cmp(&self, other: &ProjectivePoint) -> Ordering {
        match (self.is_infinity(), other.is_infinity()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => self.x.canonical_cmp(&other.x),
        }
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {})", self.x, self.y)
    }
}

/// An element of `PGL_2(k)`: an invertible matrix class, stored with the
/// first nonzero entry (row-major) scaled to 1 so that projective equality
/// is plain equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MoebiusMap {
    m: Matrix2,
}

impl MoebiusMap {
    pub fn new(m: Matrix2) -> Result<MoebiusMap> {
        if m.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        let pivot = m
            .entries()
            .into_iter()
            .find(|e| !e.is_zero())
            .expect("invertible matrix has a nonzero entry")
            .clone();
        let inv = pivot.invert().expect("nonzero");
        Ok(MoebiusMap { m: m.scale(&inv) })
    }

    pub fn from_integers(tag: FieldTag, a: i64, b: i64, c: i64, d: i64) -> Result<MoebiusMap> {
        MoebiusMap::new(Matrix2::from_integers(tag, a, b, c, d))
    }

    pub fn identity(tag: FieldTag) -> MoebiusMap {
        MoebiusMap {
            m: Matrix2::identity(tag),
        }
    }

    pub fn tag(&self) -> FieldTag {
        self.m.tag()
    }

    /// The normalized matrix representative.
    pub fn matrix(&self) -> &Matrix2 {
        &self.m
    }

    pub fn is_identity(&self) -> bool {
        self.m == Matrix2::identity(self.tag())
    }

    pub fn apply(&self, p: &ProjectivePoint) -> ProjectivePoint {
        let x = &(&self.m.a * p.x()) + &(&self.m.b * p.y());
        let y = &(&self.m.c * p.x()) + &(&self.m.d * p.y());
        ProjectivePoint::new(x, y).expect("invertible matrix maps points to points")
    }

    pub fn compose(&self, rhs: &MoebiusMap) -> MoebiusMap {
        MoebiusMap::new(self.m.mul(&rhs.m)).expect("product of invertible matrices")
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap::new(self.m.adjugate()).expect("adjugate of invertible matrix")
    }

    /// Least `n <= bound` with `self^n = 1` in `PGL_2`, or `None`.
    pub fn element_order(&self, bound: u64) -> Option<u64> {
        let mut acc = self.clone();
        for n in 1..=bound {
            if acc.is_identity() {
                return Some(n);
            }
            acc = acc.compose(self);
        }
        None
    }

    /// Entry tuple for the canonical ordering of group elements.
    pub fn canonical_cmp(&self, other: &MoebiusMap) -> Ordering {
        for (a, b) in self.m.entries().into_iter().zip(other.m.entries()) {
            match a.canonical_cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.m.a, self.m.b, self.m.c, self.m.d
        )
    }
}

/// Matrix sending the standard triple `(1:0), (0:1), (1:1)` to `q1, q2, q3`.
fn standard_to_triple(q1: &ProjectivePoint, q2: &ProjectivePoint, q3: &ProjectivePoint) -> Matrix2 {
    // Solve lambda*q1 + mu*q2 = q3 (as vectors); the solution exists and has
    // nonzero entries exactly because the three points are pairwise distinct.
    let det = &(q1.x() * q2.y()) - &(q2.x() * q1.y());
    let det_inv = det
        .invert()
        .expect("distinct points give independent vectors");
    let lambda = &(&(q3.x() * q2.y()) - &(q2.x() * q3.y())) * &det_inv;
    let mu = &(&(q1.x() * q3.y()) - &(q3.x() * q1.y())) * &det_inv;
    Matrix2::new(
        &lambda * q1.x(),
        &mu * q2.x(),
        &lambda * q1.y(),
        &mu * q2.y(),
    )
}

/// The unique Möbius map with `src[i] -> dst[i]` for three distinct sources
/// and three distinct destinations.
pub fn from_three_points(
    src: [&ProjectivePoint; 3],
    dst: [&ProjectivePoint; 3],
) -> Result<MoebiusMap> {
    for triple in [&src, &dst] {
        if triple[0] == triple[1] || triple[0] == triple[2] || triple[1] == triple[2] {
            return Err(Error::DegenerateTriple);
        }
    }
    let to_dst = standard_to_triple(dst[0], dst[1], dst[2]);
    let to_src = standard_to_triple(src[0], src[1], src[2]);
    MoebiusMap::new(to_dst.mul(&to_src.adjugate()))
}

/// The unique involution `A` with `A(p1) = p2` and `A(p3) = p4`, for four
/// pairwise distinct points. After moving `(p1, p2, p3)` to the normalized
/// basis `(1:0), (1:1), (0:1)` the fourth point `(c:d)` must satisfy
/// `c != 0`, `d != 0`, `c != d`, and the involution is `[[1, -c/d], [1, -1]]`
/// conjugated back.
pub fn solve_pairing_involution(
    p1: &ProjectivePoint,
    p2: &ProjectivePoint,
    p3: &ProjectivePoint,
    p4: &ProjectivePoint,
) -> Result<MoebiusMap> {
    let pts = [p1, p2, p3, p4];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i] == pts[j] {
                return Err(Error::DegenerateConfiguration(format!(
                    "points {} and {} coincide",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let tag = p1.tag();
    let basis = [
        ProjectivePoint::infinity(tag),
        ProjectivePoint::from_integer(1, tag),
        ProjectivePoint::finite(tag.zero()),
    ];
    let t = from_three_points([p1, p2, p3], [&basis[0], &basis[1], &basis[2]])?;
    let q = t.apply(p4);
    let (c, d) = (q.x().clone(), q.y().clone());
    if c.is_zero() || d.is_zero() || c == d {
        return Err(Error::DegenerateConfiguration(
            "normalized fourth point must avoid 0, 1 and infinity".into(),
        ));
    }
    let lambda = -&d.invert()?;
    let normalized = Matrix2::new(tag.one(), &lambda * &c, tag.one(), &lambda * &d);
    let t_inv = t.inverse();
    Ok(t_inv.compose(&MoebiusMap::new(normalized)?).compose(&t))
}
