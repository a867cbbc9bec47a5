//! Exact character and order arithmetic for the class group and the two
//! stack-style Picard groups attached to genus-`g` hyperelliptic moduli:
//! cyclic orders, stabilizer fiber characters on probe forms, the descent
//! intersection that forces the coarse Picard group to vanish, and the
//! exponent table expressing pushforward determinants in the distinguished
//! generator.

use num_integer::Integer;

use crate::binform::{gl2_act, BinaryForm};
use crate::config::{cyclic_probe_configuration, dihedral_probe_configuration};
use crate::error::Error;
use crate::moebius::MoebiusMap;
use crate::scalar::{
    multiplicative_order, prime_with_unity_roots, root_of_unity, FieldTag, Scalar,
};
use crate::Result;

/// Residue class in `Z/N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclicClass {
    pub modulus: u64,
    pub residue: u64,
}

impl CyclicClass {
    pub fn new(modulus: u64, residue: i64) -> CyclicClass {
        CyclicClass {
            modulus,
            residue: residue.rem_euclid(modulus as i64) as u64,
        }
    }

    /// Index of the subgroup the class generates.
    pub fn subgroup_index(&self) -> u64 {
        self.residue.gcd(&self.modulus)
    }
}

/// How a stabilizer element scales the fiber line `k·f`: the exact scalar,
/// its order, and the discrete log against the canonical root of unity of
/// that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberCharacter {
    pub order: u64,
    pub exponent: u64,
    pub scalar: Scalar,
}

/// The four cyclic orders attached to a genus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupOrders {
    pub class_group: u64,
    pub stack_picard: u64,
    pub divisor_stack: u64,
    pub comparison_index: u64,
}

/// Orders of the divisor class group of the coarse space, the stack Picard
/// group, and the divisor-stack Picard group, with the index of the
/// comparison map. Callers are responsible for the characteristic
/// hypotheses (`char` not dividing `2g+2`, and different from 5 when `g=2`).
pub fn group_orders(g: u64) -> Result<GroupOrders> {
    if g < 2 {
        return Err(Error::PreconditionViolated(format!(
            "genus must be at least 2, got {g}"
        )));
    }
    if g > u64::MAX / 16 {
        return Err(Error::PreconditionViolated(format!("genus {g} too large")));
    }
    let class_group = if g == 2 { 5 } else { 4 * g + 2 };
    let stack_picard = if g.is_multiple_of(2) {
        4 * g + 2
    } else {
        2 * (4 * g + 2)
    };
    let divisor_stack = 4 * g + 2;
    Ok(GroupOrders {
        class_group,
        stack_picard,
        divisor_stack,
        comparison_index: stack_picard / divisor_stack,
    })
}

/// Exact scalar by which the (lift of the) map scales the fiber line of the
/// form, expressed against the canonical root of unity of the element's
/// order. Fails with `NotInStabilizer` when the map does not fix the
/// projective class of `f`.
pub fn stabilizer_fiber_character(f: &BinaryForm, a: &MoebiusMap) -> Result<FiberCharacter> {
    let n = f.degree() as u64;
    let bound = 2 * n * n;
    let order = a.element_order(bound).ok_or(Error::NotInStabilizer)?;
    let acted = gl2_act(a.matrix(), f)?;
    let scalar = acted.proportionality(f).ok_or(Error::NotInStabilizer)?;
    if !scalar.pow(order).is_one() {
        return Err(Error::InternalInconsistency(format!(
            "fiber scalar {scalar} is not an {order}-th root of unity"
        )));
    }
    let exponent = discrete_log_root_of_unity(&scalar, order)?;
    Ok(FiberCharacter {
        order,
        exponent,
        scalar,
    })
}

/// Exponent of `value` against the canonical primitive `order`-th root of
/// unity (the smallest residue of that multiplicative order; `-1` over `Q`).
fn discrete_log_root_of_unity(value: &Scalar, order: u64) -> Result<u64> {
    let base = match value.tag() {
        FieldTag::Rational => Scalar::from_integer(-1, FieldTag::Rational),
        FieldTag::PrimeField(p) => {
            let z = root_of_unity(p, order).ok_or_else(|| {
                Error::InternalInconsistency(format!("F_{p} lacks {order}-th roots of unity"))
            })?;
            Scalar::residue(z, p)
        }
    };
    let mut acc = value.tag().one();
    for e in 0..order.max(2) {
        if acc == *value {
            return Ok(e);
        }
        acc = &acc * &base;
    }
    Err(Error::InternalInconsistency(format!(
        "no discrete log of {value} at order {order}"
    )))
}

/// The probe form `X^{2g+1} Y - Y^{2g+2}` (cyclic stabilizer of order 2g+1).
pub fn cyclic_probe_form(g: usize, p: u64) -> Result<BinaryForm> {
    let tag = FieldTag::prime_field(p)?;
    tag.require_char_not_dividing((2 * g + 1) as u64)?;
    let mut coeffs = vec![0i64; 2 * g + 3];
    coeffs[0] = -1;
    coeffs[2 * g + 1] = 1;
    BinaryForm::from_integer_coeffs(g, tag, &coeffs)
}

/// The probe form `X^{2g+2} - Y^{2g+2}` (dihedral stabilizer of order 4g+4).
pub fn dihedral_probe_form(g: usize, p: u64) -> Result<BinaryForm> {
    let tag = FieldTag::prime_field(p)?;
    tag.require_char_not_dividing((2 * g + 2) as u64)?;
    let mut coeffs = vec![0i64; 2 * g + 3];
    coeffs[0] = -1;
    coeffs[2 * g + 2] = 1;
    BinaryForm::from_integer_coeffs(g, tag, &coeffs)
}

/// Smallest prime whose multiplicative group contains both probe stabilizers
/// rationally.
pub fn descent_prime(g: u64) -> u64 {
    prime_with_unity_roots((2 * g + 1).lcm(&(2 * g + 2)))
}

/// Per-probe descent data: the twists `d` in `Z/(4g+2)` on which every
/// stabilizer element acts trivially.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeDescent {
    pub stabilizer_order: usize,
    pub characters: Vec<FiberCharacter>,
    pub allowed_twists: Vec<u64>,
}

/// The full descent computation at genus `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentReport {
    pub g: u64,
    pub prime: u64,
    pub modulus: u64,
    pub cyclic_probe: ProbeDescent,
    pub dihedral_probe: ProbeDescent,
    /// Intersection of the two allowed sets: the subgroup of twists
    /// descending to the coarse space.
    pub descent_subgroup: Vec<u64>,
}

fn probe_descent(
    f: &BinaryForm,
    config: &crate::config::PointConfiguration,
    modulus: u64,
) -> Result<ProbeDescent> {
    let group = config.automorphism_group()?;
    let mut characters = Vec::with_capacity(group.order());
    for a in group.maps() {
        characters.push(stabilizer_fiber_character(f, a)?);
    }
    let allowed_twists = (0..modulus)
        .filter(|&d| characters.iter().all(|c| c.scalar.pow(d).is_one()))
        .collect();
    Ok(ProbeDescent {
        stabilizer_order: group.order(),
        characters,
        allowed_twists,
    })
}

/// Runs the two-probe descent over an automatically chosen prime (or a
/// caller-supplied one congruent to 1 mod lcm(2g+1, 2g+2)). The probe
/// stabilizer orders are recomputed and checked against 2g+1 and 4g+4.
pub fn descent_report(g: u64, prime: Option<u64>) -> Result<DescentReport> {
    if !(2..=100_000).contains(&g) {
        return Err(Error::PreconditionViolated(format!(
            "descent genus must lie in 2..=100000, got {g}"
        )));
    }
    let p = prime.unwrap_or_else(|| descent_prime(g));
    let needed = (2 * g + 1).lcm(&(2 * g + 2));
    if !(p - 1).is_multiple_of(needed) {
        return Err(Error::PreconditionViolated(format!(
            "prime {p} is not congruent to 1 mod {needed}"
        )));
    }
    let tag = FieldTag::prime_field(p)?;
    tag.require_char_not_dividing(2 * g + 2)?;
    tag.require_char_not_dividing(2 * g + 1)?;
    let modulus = 4 * g + 2;
    let gu = g as usize;

    let f1 = cyclic_probe_form(gu, p)?;
    let c1 = cyclic_probe_configuration(gu, p)?;
    let cyclic_probe = probe_descent(&f1, &c1, modulus)?;
    if cyclic_probe.stabilizer_order != 2 * gu + 1 {
        return Err(Error::InternalInconsistency(format!(
            "cyclic probe stabilizer has order {}, expected {}",
            cyclic_probe.stabilizer_order,
            2 * gu + 1
        )));
    }

    let f2 = dihedral_probe_form(gu, p)?;
    let c2 = dihedral_probe_configuration(gu, p)?;
    let dihedral_probe = probe_descent(&f2, &c2, modulus)?;
    if dihedral_probe.stabilizer_order != 4 * gu + 4 {
        return Err(Error::InternalInconsistency(format!(
            "dihedral probe stabilizer has order {}, expected {}",
            dihedral_probe.stabilizer_order,
            4 * gu + 4
        )));
    }

    let descent_subgroup = cyclic_probe
        .allowed_twists
        .iter()
        .copied()
        .filter(|d| dihedral_probe.allowed_twists.contains(d))
        .collect();
    Ok(DescentReport {
        g,
        prime: p,
        modulus,
        cyclic_probe,
        dihedral_probe,
        descent_subgroup,
    })
}

/// The subgroup of `Z/(4g+2)` of twists descending to the coarse moduli
/// space; trivial exactly when its Picard group vanishes.
pub fn descent_subgroup(g: u64) -> Result<Vec<u64>> {
    Ok(descent_report(g, None)?.descent_subgroup)
}

fn arithmetic_overflow() -> Error {
    Error::PreconditionViolated("inputs overflow the exponent arithmetic".into())
}

/// Fiber degree `m(a, b) = (a+b) g + (b-a)` of the combination
/// `omega^a (b W)` on one curve; must be nonnegative.
pub fn m_of(a: i64, b: i64, g: u64) -> Result<i64> {
    let gi = i64::try_from(g).map_err(|_| arithmetic_overflow())?;
    let m = a
        .checked_add(b)
        .and_then(|s| s.checked_mul(gi))
        .and_then(|t| t.checked_add(b.checked_sub(a)?))
        .ok_or_else(arithmetic_overflow)?;
    if m < 0 {
        return Err(Error::NegativeDegree(m));
    }
    Ok(m)
}

/// Rank `m(a,b) + 1` of the pushforward of `omega^a (b W)`.
pub fn pushforward_rank(a: i64, b: i64, g: u64) -> Result<u64> {
    Ok((m_of(a, b, g)? + 1) as u64)
}

/// Exponent of the distinguished generator expressing the determinant of the
/// pushforward of `omega^a (b W)` in the stack Picard group. For even genus
/// the stated halving is exact; that is checked, not assumed.
pub fn tab_exponent(a: i64, b: i64, g: u64) -> Result<CyclicClass> {
    let m = m_of(a, b, g)?;
    let orders = group_orders(g)?;
    let gi = g as i64;
    let raw = if m < gi + 1 {
        a.checked_add(b)
            .and_then(|s| s.checked_mul(m + 1))
            .ok_or_else(arithmetic_overflow)?
    } else {
        a.checked_add(b)
            .and_then(|s| s.checked_sub(1))
            .and_then(|s| s.checked_mul(m - gi))
            .ok_or_else(arithmetic_overflow)?
    };
    let exponent = if g.is_multiple_of(2) {
        if raw % 2 != 0 {
            return Err(Error::InternalInconsistency(format!(
                "exponent {raw} is odd at even genus {g}"
            )));
        }
        raw / 2
    } else {
        raw
    };
    Ok(CyclicClass::new(orders.stack_picard, exponent))
}

/// Exponent of the Hodge class: `tab_exponent(1, 0, g)`.
pub fn hodge_class(g: u64) -> Result<CyclicClass> {
    tab_exponent(1, 0, g)
}

/// Index of the subgroup generated by the Hodge class in the stack Picard
/// group: 2 exactly when 4 divides `g`, else 1 (it then generates).
pub fn hodge_index(g: u64) -> Result<u64> {
    Ok(hodge_class(g)?.subgroup_index())
}

/// Human-readable descriptor of the distinguished generator as a pushforward
/// (rank-1 by `m(g+1, -(g-1)) = 0`); the sheaf itself is symbolic only.
#[allow(clippy::manual_div_ceil)] // (g+1)/2 with g odd, matching (g-1)/2
pub fn generator_descriptor(g: u64) -> String {
    if g.is_multiple_of(2) {
        format!("pi_*( omega^{}( -{} W ) )", g + 1, g - 1)
    } else {
        format!("pi_*( omega^{}( -{} W ) )", (g + 1) / 2, (g - 1) / 2)
    }
}

/// Everything the `picard-report` surface exposes for one genus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PicardReport {
    pub g: u64,
    pub class_group_order: u64,
    pub stack_picard_order: u64,
    pub divisor_stack_order: u64,
    pub comparison_index: u64,
    pub descent_subgroup_order: u64,
    pub hodge_exponent: u64,
    pub hodge_index: u64,
    pub generator: String,
    pub descent: DescentReport,
}

pub fn picard_report(g: u64) -> Result<PicardReport> {
    let orders = group_orders(g)?;
    let descent = descent_report(g, None)?;
    let hodge = hodge_class(g)?;
    Ok(PicardReport {
        g,
        class_group_order: orders.class_group,
        stack_picard_order: orders.stack_picard,
        divisor_stack_order: orders.divisor_stack,
        comparison_index: orders.comparison_index,
        descent_subgroup_order: descent.descent_subgroup.len() as u64,
        hodge_exponent: hodge.residue,
        hodge_index: hodge.subgroup_index(),
        generator: generator_descriptor(g),
        descent,
    })
}

/// Order of the scalar in the multiplicative group (used by tests on
/// characters).
pub fn scalar_order(s: &Scalar) -> Result<u64> {
    match s {
        Scalar::Residue { value, prime } => {
            if *value == 0 {
                Err(Error::ZeroInput)
            } else {
                Ok(multiplicative_order(*value, *prime))
            }
        }
        Scalar::Rational(_) => {
            if s.is_one() {
                Ok(1)
            } else if (-s).is_one() {
                Ok(2)
            } else {
                Err(Error::PreconditionViolated(
                    "rational scalar is not a root of unity".into(),
                ))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::Matrix2;

    #[test]
    fn group_orders_table() {
        let o = group_orders(2).unwrap();
        assert_eq!(
            (
                o.class_group,
                o.stack_picard,
                o.divisor_stack,
                o.comparison_index
            ),
            (5, 10, 10, 1)
        );
        let o = group_orders(3).unwrap();
        assert_eq!(
            (
                o.class_group,
                o.stack_picard,
                o.divisor_stack,
                o.comparison_index
            ),
            (14, 28, 14, 2)
        );
        let o = group_orders(4).unwrap();
        assert_eq!(
            (
                o.class_group,
                o.stack_picard,
                o.divisor_stack,
                o.comparison_index
            ),
            (18, 18, 18, 1)
        );
        assert!(group_orders(1).is_err());
    }

    #[test]
    fn probe_characters() {
        for g in [2usize, 3] {
            let p = descent_prime(g as u64);
            let tag = FieldTag::prime_field(p).unwrap();
            // diag(zeta_{2g+1}, 1) acts on the cyclic probe by zeta^{g+1}
            let zeta = root_of_unity(p, (2 * g + 1) as u64).unwrap();
            let a = MoebiusMap::new(Matrix2::new(
                Scalar::residue(zeta, p),
                tag.zero(),
                tag.zero(),
                tag.one(),
            ))
            .unwrap();
            let f1 = cyclic_probe_form(g, p).unwrap();
            let ch = stabilizer_fiber_character(&f1, &a).unwrap();
            assert_eq!(ch.order, (2 * g + 1) as u64);
            assert_eq!(ch.exponent, (g + 1) as u64);
            assert_eq!(ch.scalar, Scalar::residue(zeta, p).pow((g + 1) as u64));
            // gcd(g+1, 2g+1) = 1, so the fiber scalar is itself primitive
            assert_eq!(scalar_order(&ch.scalar).unwrap(), ch.order);

            // diag(zeta_{2g+2}, 1) acts on the dihedral probe by -1, the
            // antidiagonal swap by (-1)^g
            let zeta2 = root_of_unity(p, (2 * g + 2) as u64).unwrap();
            let b = MoebiusMap::new(Matrix2::new(
                Scalar::residue(zeta2, p),
                tag.zero(),
                tag.zero(),
                tag.one(),
            ))
            .unwrap();
            let f2 = dihedral_probe_form(g, p).unwrap();
            let ch = stabilizer_fiber_character(&f2, &b).unwrap();
            assert_eq!(ch.scalar, Scalar::from_integer(-1, tag));
            let swap = MoebiusMap::from_integers(tag, 0, 1, 1, 0).unwrap();
            let ch = stabilizer_fiber_character(&f2, &swap).unwrap();
            let expected = Scalar::from_integer(if g % 2 == 0 { 1 } else { -1 }, tag);
            assert_eq!(ch.scalar, expected);

            // identity acts trivially on any form
            let id = MoebiusMap::identity(tag);
            let ch = stabilizer_fiber_character(&f1, &id).unwrap();
            assert_eq!((ch.order, ch.exponent), (1, 0));
        }
    }

    #[test]
    fn character_rejects_non_stabilizing_maps() {
        let g = 2;
        let p = descent_prime(2);
        let f1 = cyclic_probe_form(g, p).unwrap();
        let tag = FieldTag::prime_field(p).unwrap();
        let shift = MoebiusMap::from_integers(tag, 1, 1, 0, 1).unwrap();
        assert_eq!(
            stabilizer_fiber_character(&f1, &shift).unwrap_err(),
            Error::NotInStabilizer
        );
    }

    #[test]
    fn character_is_lift_independent_and_multiplicative() {
        let g = 3usize;
        let p = descent_prime(g as u64);
        let f2 = dihedral_probe_form(g, p).unwrap();
        let config = dihedral_probe_configuration(g, p).unwrap();
        let group = config.automorphism_group().unwrap();
        // two lifts differ by a scalar lambda, which the weighted action
        // kills: lambda^{2(g+1) - (2g+2)} = 1
        let mut rng = crate::rng::SplitMix64::new(19);
        for (a, _) in &group.elements {
            let lambda = Scalar::residue(rng.unit(p), p);
            let scaled = crate::binform::gl2_act(&a.matrix().scale(&lambda), &f2).unwrap();
            let plain = crate::binform::gl2_act(a.matrix(), &f2).unwrap();
            assert_eq!(scaled, plain);
        }
        for (a, _) in &group.elements {
            let ca = stabilizer_fiber_character(&f2, a).unwrap();
            for (b, _) in &group.elements {
                let cb = stabilizer_fiber_character(&f2, b).unwrap();
                let cab = stabilizer_fiber_character(&f2, &a.compose(b)).unwrap();
                assert_eq!(cab.scalar, &ca.scalar * &cb.scalar);
            }
        }
    }

    #[test]
    fn descent_examples() {
        // g = 2: cyclic probe forces d ≡ 0 mod 5, dihedral forces d even
        let report = descent_report(2, None).unwrap();
        assert_eq!(report.modulus, 10);
        assert_eq!(report.cyclic_probe.allowed_twists, vec![0, 5]);
        assert_eq!(report.dihedral_probe.allowed_twists, vec![0, 2, 4, 6, 8]);
        assert_eq!(report.descent_subgroup, vec![0]);
        // g = 3: d ≡ 0 mod 7 meets d even in {0} ⊂ Z/14
        let report = descent_report(3, None).unwrap();
        assert_eq!(report.modulus, 14);
        assert_eq!(report.cyclic_probe.allowed_twists, vec![0, 7]);
        assert_eq!(report.descent_subgroup, vec![0]);
    }

    #[test]
    fn descent_trivial_small_range() {
        for g in 2..=6 {
            assert_eq!(descent_subgroup(g).unwrap(), vec![0], "g = {g}");
        }
    }

    #[test]
    fn m_and_rank_examples() {
        assert_eq!(m_of(1, 0, 5).unwrap(), 4); // g - 1
        assert_eq!(m_of(0, 1, 5).unwrap(), 6); // g + 1
        assert_eq!(m_of(0, 0, 5).unwrap(), 0);
        assert!(matches!(
            m_of(-2, 1, 5).unwrap_err(),
            Error::NegativeDegree(_)
        ));
        assert_eq!(pushforward_rank(1, 0, 2).unwrap(), 2); // Hodge bundle rank g
        assert_eq!(pushforward_rank(0, 1, 2).unwrap(), 4);
        assert_eq!(pushforward_rank(0, 0, 7).unwrap(), 1);
    }

    #[test]
    fn tab_exponent_examples() {
        let c = tab_exponent(1, 0, 4).unwrap();
        assert_eq!((c.modulus, c.residue), (18, 2));
        let c = tab_exponent(1, 0, 3).unwrap();
        assert_eq!((c.modulus, c.residue), (28, 3));
        // (0, 2, g=2): m = 6 >= 3, exponent (1)(6-2)/2 = 2 mod 10
        let c = tab_exponent(0, 2, 2).unwrap();
        assert_eq!((c.modulus, c.residue), (10, 2));
    }

    #[test]
    fn hodge_specialization_and_index() {
        for g in 2..=40u64 {
            let c = hodge_class(g).unwrap();
            let expect = if g % 2 == 0 { g / 2 } else { g };
            assert_eq!(c.residue, expect % c.modulus, "g = {g}");
            let idx = hodge_index(g).unwrap();
            assert_eq!(idx == 2, g % 4 == 0, "g = {g}");
            assert!(idx == 1 || idx == 2);
        }
        assert_eq!(hodge_index(4).unwrap(), 2);
        assert_eq!(hodge_index(3).unwrap(), 1);
        assert_eq!(hodge_index(2).unwrap(), 1);
    }

    #[test]
    fn delta_character_identity() {
        // scaling f by alpha^{-2} scales the discriminant by alpha^{-2(4g+2)}
        let mut rng = crate::rng::SplitMix64::new(3);
        let p = 10007u64;
        for g in [2usize, 3] {
            let n = 2 * g + 2;
            let f = loop {
                let coeffs: Vec<Scalar> = (0..n + 1)
                    .map(|_| Scalar::residue(rng.below(p), p))
                    .collect();
                match BinaryForm::new(g, coeffs) {
                    Ok(f) if !crate::binform::discriminant(&f).unwrap().is_zero() => break f,
                    _ => continue,
                }
            };
            let alpha = Scalar::residue(rng.unit(p), p);
            let scaled = f.scale(&alpha.invert().unwrap().pow(2));
            let lhs = crate::binform::discriminant(&scaled).unwrap();
            let rhs = &alpha.invert().unwrap().pow(2 * (4 * g as u64 + 2))
                * &crate::binform::discriminant(&f).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn report_assembles() {
        let r = picard_report(2).unwrap();
        assert_eq!(r.class_group_order, 5);
        assert_eq!(r.stack_picard_order, 10);
        assert_eq!(r.descent_subgroup_order, 1);
        assert_eq!(r.hodge_exponent, 1);
        assert_eq!(r.hodge_index, 1);
        assert_eq!(r.descent.prime, 31);
    }
}
