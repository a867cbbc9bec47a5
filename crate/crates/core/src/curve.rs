//! Curve-level constructions: the double cover `a y^2 = f(x)` attached to a
//! ramification configuration, Weierstrass points, reduced automorphism
//! groups, isomorphism over the base field versus over the closure (twist
//! classification by square classes), naive point counting over prime
//! fields, the parity predicates for tautological families and global degree
//! two pencils, and the genus-1 demonstration family.

use std::fmt;

use crate::binform::{discriminant, BinaryForm};
use crate::config::{ConfigAutGroup, PointConfiguration};
use crate::error::Error;
use crate::moebius::{MoebiusMap, ProjectivePoint};
use crate::scalar::{FieldTag, Scalar, SquareClass};
use crate::Result;

/// Affine model `twist * y^2 = f(x, 1)` for a smooth form `f` of degree
/// `2g+2`. When the source configuration contained the point at infinity it
/// was first moved by a recorded Möbius shift, so the Weierstrass set can be
/// reported in the original coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperellipticCurve {
    form: BinaryForm,
    twist: Scalar,
    shift: Option<MoebiusMap>,
}

impl HyperellipticCurve {
    pub fn new(form: BinaryForm, twist: Scalar) -> Result<HyperellipticCurve> {
        if twist.tag() != form.tag() {
            return Err(Error::FieldMismatch);
        }
        if twist.is_zero() {
            return Err(Error::ZeroTwist);
        }
        if discriminant(&form)?.is_zero() {
            return Err(Error::DegenerateInput(
                "the form has a repeated root".into(),
            ));
        }
        Ok(HyperellipticCurve {
            form,
            twist,
            shift: None,
        })
    }

    pub fn genus(&self) -> usize {
        self.form.genus()
    }

    pub fn tag(&self) -> FieldTag {
        self.form.tag()
    }

    pub fn form(&self) -> &BinaryForm {
        &self.form
    }

    pub fn twist(&self) -> &Scalar {
        &self.twist
    }

    pub fn coordinate_shift(&self) -> Option<&MoebiusMap> {
        self.shift.as_ref()
    }

    /// Same underlying form, different twist.
    pub fn with_twist(&self, twist: Scalar) -> Result<HyperellipticCurve> {
        if twist.is_zero() {
            return Err(Error::ZeroTwist);
        }
        if twist.tag() != self.tag() {
            return Err(Error::FieldMismatch);
        }
        Ok(HyperellipticCurve {
            form: self.form.clone(),
            twist,
            shift: self.shift.clone(),
        })
    }

    /// The 2g+2 ramification points, reported in the coordinates of the
    /// original configuration (the recorded shift is undone). Errors with
    /// the unsplit factor when the form does not split over the field.
    pub fn weierstrass_points(&self) -> Result<PointConfiguration> {
        let poly = self.form.dehomogenize();
        let (roots, rest) = poly.roots_in_field()?;
        let mut points: Vec<ProjectivePoint> =
            roots.into_iter().map(ProjectivePoint::finite).collect();
        match rest.degree() {
            Some(0) | None => {}
            _ => return Err(Error::NonSplitForm(rest.to_string())),
        }
        if self.form.leading().is_zero() {
            points.push(ProjectivePoint::infinity(self.tag()));
        }
        if points.len() != 2 * self.genus() + 2 {
            return Err(Error::InternalInconsistency(format!(
                "smooth form of degree {} produced {} roots",
                2 * self.genus() + 2,
                points.len()
            )));
        }
        if let Some(shift) = &self.shift {
            let undo = shift.inverse();
            points = points.iter().map(|p| undo.apply(p)).collect();
        }
        PointConfiguration::new(self.tag(), points)
    }

    /// Reduced automorphism group `G` (the stabilizer of the ramification
    /// set) with the order `2|G|` of the full automorphism group, every
    /// configuration automorphism lifting in exactly two ways. Explicit
    /// curve automorphisms are not constructed: the `y`-component of a lift
    /// of `A` multiplies `y` by a square root of the pullback scalar
    /// `mu_A = (f ∘ A) / f`, so the report carries the field degree over
    /// which all lifts exist instead (2 when some `mu_A` is a nonsquare).
    pub fn reduced_automorphism_group(&self) -> Result<ReducedAutomorphisms> {
        let group = self.weierstrass_points()?.automorphism_group()?;
        let full_order = 2 * group.order() as u64;
        let mut lift_extension_degree = 1;
        for (a, _) in &group.elements {
            // move the automorphism into the form's own coordinates
            let b = match &self.shift {
                Some(s) => s.compose(a).compose(&s.inverse()),
                None => a.clone(),
            };
            let pulled = self.form.substitute(b.matrix());
            let mu = pulled.proportionality(&self.form).ok_or_else(|| {
                Error::InternalInconsistency(
                    "a ramification automorphism must scale the form".into(),
                )
            })?;
            if !mu.square_class()?.is_square() {
                lift_extension_degree = 2;
            }
        }
        Ok(ReducedAutomorphisms {
            group,
            full_order,
            lift_extension_degree,
        })
    }

    /// Twists are invisible over the closure: delegate to configuration
    /// equivalence.
    pub fn isomorphic_over_closure(
        &self,
        other: &HyperellipticCurve,
    ) -> Result<Option<MoebiusMap>> {
        if self.genus() != other.genus() {
            return Ok(None);
        }
        let w1 = self.weierstrass_points()?;
        let w2 = other.weierstrass_points()?;
        Ok(w1.equivalent_to(&w2))
    }

    /// Isomorphism over the base field: for every Möbius witness matching
    /// the ramification sets, pull the second form back by plain
    /// substitution, read off the proportionality scalar `mu`, and test
    /// whether `twist1 * twist2 * mu` is a square. Plain substitution is the
    /// right weight: rescaling the witness matrix changes `mu` by a 2g+2
    /// power, so the square class is well defined.
    pub fn isomorphic_over_field(
        &self,
        other: &HyperellipticCurve,
    ) -> Result<Option<CurveIsoWitness>> {
        if self.tag() != other.tag() {
            return Err(Error::FieldMismatch);
        }
        if self.genus() != other.genus() {
            return Ok(None);
        }
        let w1 = self.effective_weierstrass()?;
        let w2 = other.effective_weierstrass()?;
        for a in w1.equivalence_witnesses(&w2, false) {
            let pulled = other.form.substitute(a.matrix());
            let mu = pulled.proportionality(&self.form).ok_or_else(|| {
                Error::InternalInconsistency("pullback along a witness must be proportional".into())
            })?;
            let obstruction = &(&self.twist * &other.twist) * &mu;
            if obstruction.square_class()?.is_square() {
                return Ok(Some(CurveIsoWitness {
                    moebius: a,
                    scale: mu,
                    scale_class: SquareClass::Square,
                }));
            }
        }
        Ok(None)
    }

    /// Weierstrass set in the form's own coordinates (shift not undone);
    /// this is the set the form substitution sees.
    fn effective_weierstrass(&self) -> Result<PointConfiguration> {
        let unshifted = HyperellipticCurve {
            form: self.form.clone(),
            twist: self.twist.clone(),
            shift: None,
        };
        unshifted.weierstrass_points()
    }

    /// Number of points of the smooth projective model over `F_p` by
    /// exhaustive scan: `y^2 = f(x)/a` solutions plus 2, 1 or 0 points at
    /// infinity according to the square class of `lead(f)/a` (zero leading
    /// coefficient contributes the single branch point at infinity).
    pub fn count_points(&self) -> Result<u64> {
        let p = match self.tag() {
            FieldTag::PrimeField(p) => p,
            FieldTag::Rational => return Err(Error::NotFinite),
        };
        if p > 1_000_000 {
            return Err(Error::FieldTooLarge(p));
        }
        let poly = self.form.dehomogenize();
        let mut count = 0u64;
        for x in 0..p {
            let value = poly.eval(&Scalar::residue(x, p));
            if value.is_zero() {
                count += 1;
            } else if (&value * &self.twist).square_class()?.is_square() {
                count += 2;
            }
        }
        let lead = self.form.leading();
        if lead.is_zero() {
            count += 1;
        } else if (lead * &self.twist).square_class()?.is_square() {
            count += 2;
        }
        Ok(count)
    }

    /// Affine solutions only (no points at infinity); used by the twist-sum
    /// identity.
    pub fn count_affine_points(&self) -> Result<u64> {
        let total = self.count_points()?;
        let lead = self.form.leading();
        let at_infinity = if lead.is_zero() {
            1
        } else if (lead * &self.twist).square_class()?.is_square() {
            2
        } else {
            0
        };
        Ok(total - at_infinity)
    }
}

impl fmt::Display for HyperellipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) y^2 = {}", self.twist, self.form.dehomogenize())
    }
}

/// Witness of a field isomorphism: the Möbius part and the square class
/// reconciling the twists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveIsoWitness {
    pub moebius: MoebiusMap,
    pub scale: Scalar,
    pub scale_class: SquareClass,
}

/// Automorphism data of a curve: the reduced group acting on the
/// ramification points, the full order `2|G|`, and the smallest field degree
/// over which every automorphism lifts to the curve.
#[derive(Debug, Clone)]
pub struct ReducedAutomorphisms {
    pub group: ConfigAutGroup,
    pub full_order: u64,
    pub lift_extension_degree: u64,
}

/// Double cover ramified over the configuration, `twist * y^2 = f(x)` with
/// `f` the monic form vanishing on it. A configuration containing infinity
/// is first moved by the deterministic shift `x -> 1/(x - t)` with the least
/// `t` avoiding the finite points; the shift is recorded on the curve.
pub fn curve_from_config(config: &PointConfiguration, twist: Scalar) -> Result<HyperellipticCurve> {
    let genus = config.genus().ok_or_else(|| {
        Error::PreconditionViolated(format!(
            "a ramification configuration needs an even size of at least 6, got {}",
            config.len()
        ))
    })?;
    if twist.is_zero() {
        return Err(Error::ZeroTwist);
    }
    let tag = config.tag();
    if twist.tag() != tag {
        return Err(Error::FieldMismatch);
    }
    let has_infinity = config.points().iter().any(ProjectivePoint::is_infinity);
    let (points, shift) = if has_infinity {
        let mut t = 0i64;
        let shift = loop {
            let candidate = Scalar::from_integer(t, tag);
            let hits = config
                .points()
                .iter()
                .any(|p| !p.is_infinity() && *p.x() == candidate);
            if !hits {
                break MoebiusMap::from_integers(tag, 0, 1, 1, -t)
                    .expect("antidiagonal shift is invertible");
            }
            t += 1;
        };
        (config.apply_map(&shift), Some(shift))
    } else {
        (config.clone(), None)
    };
    let roots: Vec<Scalar> = points.points().iter().map(|p| p.x().clone()).collect();
    let form = BinaryForm::from_finite_roots(genus, tag, &roots)?;
    let mut curve = HyperellipticCurve::new(form, twist)?;
    curve.shift = shift;
    Ok(curve)
}

/// A tautological family over a dense open part of the moduli space exists
/// exactly for odd genus.
pub fn tautological_family_exists(g: u64) -> bool {
    g % 2 == 1
}

/// Availability of a globally defined degree-2 pencil on families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum G12Availability {
    /// Even genus: always defined globally.
    Global,
    /// Odd genus: families without one exist, so existence is not
    /// guaranteed.
    NotGuaranteed,
}

impl fmt::Display for G12Availability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            G12Availability::Global => write!(f, "global"),
            G12Availability::NotGuaranteed => write!(f, "not-guaranteed"),
        }
    }
}

pub fn global_g12_for_genus(g: u64) -> G12Availability {
    if g.is_multiple_of(2) {
        G12Availability::Global
    } else {
        G12Availability::NotGuaranteed
    }
}

/// `y^2 = x^3 + t x + t` member of the genus-1 demonstration family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticDemoCurve {
    pub t: Scalar,
    pub j: Scalar,
}

/// j-invariant of `y^2 = x^3 + a x + b`.
pub fn j_invariant(a: &Scalar, b: &Scalar) -> Result<Scalar> {
    let tag = a.tag();
    let four = Scalar::from_integer(4, tag);
    let twenty_seven = Scalar::from_integer(27, tag);
    let a3 = &four * &a.pow(3);
    let denom = &a3 + &(&twenty_seven * &(b * b));
    if denom.is_zero() {
        return Err(Error::DegenerateInput("curve is singular".into()));
    }
    (&Scalar::from_integer(1728, tag) * &a3).divide(&denom)
}

/// The member of the family `y^2 = x^3 + t(x + 1)` with prescribed
/// j-invariant: `t = (27/4) j / (1728 - j)`, verified against the
/// j-invariant formula before returning. Requires `j != 0, 1728` and the
/// characteristic prime to 6.
pub fn elliptic_taut_curve(j0: &Scalar) -> Result<EllipticDemoCurve> {
    let tag = j0.tag();
    tag.require_char_not_dividing(6)?;
    let t1728 = Scalar::from_integer(1728, tag);
    if j0.is_zero() || *j0 == t1728 {
        return Err(Error::ExcludedJ(j0.to_string()));
    }
    let numerator = &Scalar::from_integer(27, tag) * j0;
    let denominator = &Scalar::from_integer(4, tag) * &(&t1728 - j0);
    let t = numerator.divide(&denominator)?;
    let j = j_invariant(&t, &t)?;
    if j != *j0 {
        return Err(Error::InternalInconsistency(format!(
            "family member has j = {j}, wanted {j0}"
        )));
    }
    Ok(EllipticDemoCurve { t, j })
}
