//! Point configurations on the projective line: canonical sorted storage,
//! the full `PGL_2` stabilizer by ordered-triple enumeration, equivalence
//! testing, extra-involution detection and the genus-2 singular-point test.
//!
//! For a configuration whose points all have coordinates in the ground
//! field, every stabilizer element over the algebraic closure is itself
//! defined over the ground field (its matrix is Galois-fixed because it is
//! pinned by its action on three rational points), so the enumeration below
//! computes the full geometric group.

use std::collections::HashMap;

use crate::error::Error;
use crate::moebius::{from_three_points, MoebiusMap, ProjectivePoint};
use crate::scalar::{root_of_unity, FieldTag, Scalar};
use crate::strata::Permutation;
use crate::Result;

/// At least three pairwise distinct points, canonically sorted (finite
/// points by coordinate, infinity last).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointConfiguration {
    tag: FieldTag,
    points: Vec<ProjectivePoint>,
}

impl PointConfiguration {
    pub fn new(tag: FieldTag, mut points: Vec<ProjectivePoint>) -> Result<PointConfiguration> {
        if points.len() < 3 {
            return Err(Error::TooFewPoints(points.len()));
        }
        if points.iter().any(|p| p.tag() != tag) {
            return Err(Error::FieldMismatch);
        }
        points.sort_by(|a, b| a.canonical_cmp(b));
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint);
        }
        Ok(PointConfiguration { tag, points })
    }

    /// The `m`-th roots of unity as a configuration (requires them in the
    /// field).
    pub fn roots_of_unity(p: u64, m: u64) -> Result<PointConfiguration> {
        let tag = FieldTag::prime_field(p)?;
        let zeta = root_of_unity(p, m).ok_or_else(|| {
            Error::PreconditionViolated(format!("F_{p} has no primitive {m}-th root of unity"))
        })?;
        let z = Scalar::residue(zeta, p);
        let mut points = Vec::with_capacity(m as usize);
        let mut acc = tag.one();
        for _ in 0..m {
            points.push(ProjectivePoint::finite(acc.clone()));
            acc = &acc * &z;
        }
        PointConfiguration::new(tag, points)
    }

    pub fn tag(&self) -> FieldTag {
        self.tag
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn contains(&self, p: &ProjectivePoint) -> bool {
        self.points.binary_search_by(|q| q.canonical_cmp(p)).is_ok()
    }

    /// Genus of the hyperelliptic curve ramified here, when `N = 2g+2`.
    pub fn genus(&self) -> Option<usize> {
        let n = self.points.len();
        if n >= 6 && n.is_multiple_of(2) {
            Some((n - 2) / 2)
        } else {
            None
        }
    }

    /// Image configuration under a Möbius map.
    pub fn apply_map(&self, a: &MoebiusMap) -> PointConfiguration {
        let points = self.points.iter().map(|p| a.apply(p)).collect();
        PointConfiguration::new(self.tag, points).expect("images of distinct points are distinct")
    }

    fn index_lookup(&self) -> HashMap<&ProjectivePoint, usize> {
        self.points
            .iter()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect()
    }

    /// Induced permutation of the sorted point list, if the map stabilizes
    /// the set.
    fn induced_permutation(
        &self,
        a: &MoebiusMap,
        lookup: &HashMap<&ProjectivePoint, usize>,
    ) -> Option<Permutation> {
        let mut images = Vec::with_capacity(self.points.len());
        for p in &self.points {
            match lookup.get(&a.apply(p)) {
                Some(&i) => images.push(i),
                None => return None,
            }
        }
        Some(Permutation::from_images(images).expect("injective map on a finite set"))
    }

    /// Full stabilizer of the point set in `PGL_2(k)`: the base triple is the
    /// first three sorted points, and every ordered triple of configuration
    /// points is tried as its image. Elements are sorted by their normalized
    /// matrices, so the output is deterministic and independent of `jobs`.
    pub fn automorphism_group_jobs(&self, jobs: usize) -> Result<ConfigAutGroup> {
        let n = self.points.len();
        if n < 3 {
            return Err(Error::TooFewPoints(n));
        }
        let jobs = jobs.max(1);
        let lookup = self.index_lookup();
        let triples: Vec<(usize, usize, usize)> = ordered_triples(n);
        let chunk = triples.len().div_ceil(jobs);
        let mut found: Vec<(MoebiusMap, Permutation)> = if jobs == 1 {
            self.scan_triples(&triples, &lookup)
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = triples
                    .chunks(chunk)
                    .map(|block| scope.spawn(|| self.scan_triples(block, &self.index_lookup())))
                    .collect();
                handles
                    .into_iter()
                    .flat_map(|h| h.join().unwrap())
                    .collect()
            })
        };
        found.sort_by(|(a, _), (b, _)| a.canonical_cmp(b));
        Ok(ConfigAutGroup { elements: found })
    }

    pub fn automorphism_group(&self) -> Result<ConfigAutGroup> {
        self.automorphism_group_jobs(1)
    }

    fn scan_triples(
        &self,
        triples: &[(usize, usize, usize)],
        lookup: &HashMap<&ProjectivePoint, usize>,
    ) -> Vec<(MoebiusMap, Permutation)> {
        let base = [&self.points[0], &self.points[1], &self.points[2]];
        let mut out = Vec::new();
        for &(i, j, k) in triples {
            let dst = [&self.points[i], &self.points[j], &self.points[k]];
            let a = from_three_points(base, dst).expect("triples of distinct points");
            if let Some(perm) = self.induced_permutation(&a, lookup) {
                out.push((a, perm));
            }
        }
        out
    }

    /// Some Möbius map with `A(self) = other`, or `None`. Size or field
    /// mismatch means inequivalent.
    pub fn equivalent_to(&self, other: &PointConfiguration) -> Option<MoebiusMap> {
        self.equivalence_witnesses(other, true).into_iter().next()
    }

    /// Witness maps sending `self` onto `other`; with `first_only` the search
    /// stops at the first hit. The full list is exactly one stabilizer coset,
    /// so its length is the automorphism group order.
    pub fn equivalence_witnesses(
        &self,
        other: &PointConfiguration,
        first_only: bool,
    ) -> Vec<MoebiusMap> {
        let mut out = Vec::new();
        if self.tag != other.tag || self.points.len() != other.points.len() {
            return out;
        }
        let base = [&self.points[0], &self.points[1], &self.points[2]];
        let lookup = other.index_lookup();
        for (i, j, k) in ordered_triples(other.points.len()) {
            let dst = [&other.points[i], &other.points[j], &other.points[k]];
            let a = from_three_points(base, dst).expect("triples of distinct points");
            if self.points.iter().all(|p| lookup.contains_key(&a.apply(p))) {
                out.push(a);
                if first_only {
                    return out;
                }
            }
        }
        out.sort_by(|a, b| a.canonical_cmp(b));
        out
    }

    /// An order-2 automorphism acting on the points without fixed points
    /// (cycle type `2^{g+1}`), if one exists. Detects the maximal stratum of
    /// the extra-automorphism locus.
    pub fn extra_involution_type(&self) -> Result<Option<Permutation>> {
        let n = self.points.len();
        if !n.is_multiple_of(2) {
            return Err(Error::PreconditionViolated(format!(
                "configuration size must be even (2g+2), got {n}"
            )));
        }
        let group = self.automorphism_group()?;
        for (_, perm) in &group.elements {
            if perm.cycle_type() == vec![2; n / 2] {
                return Ok(Some(perm.clone()));
            }
        }
        Ok(None)
    }

    /// Is the corresponding moduli point singular? For `g >= 3` this is the
    /// presence of any extra automorphism; for `g = 2` (and characteristic
    /// not 5) it is membership in the orbit of the six-point set
    /// `{0} ∪ mu_5`, the root set of `x^6 - x`. When that set does not split
    /// over the ground field the orbit test is replaced by the equivalent
    /// criterion "some automorphism of order 5 exists": an order-5 map fixes
    /// two points of the line and must act on the six points as one 5-cycle
    /// plus one fixed point, which pins the configuration to that orbit.
    pub fn moduli_point_is_singular(&self, g: usize) -> Result<bool> {
        let n = self.points.len();
        if n != 2 * g + 2 {
            return Err(Error::PreconditionViolated(format!(
                "genus {g} needs {} points, got {n}",
                2 * g + 2
            )));
        }
        if g >= 3 {
            return Ok(self.automorphism_group()?.order() > 1);
        }
        if g != 2 {
            return Err(Error::PreconditionViolated(format!(
                "genus must be at least 2, got {g}"
            )));
        }
        self.tag.require_char_not_dividing(5)?;
        if let FieldTag::PrimeField(p) = self.tag {
            if (p - 1) % 5 == 0 {
                let mut reference = PointConfiguration::roots_of_unity(p, 5)?;
                reference
                    .points
                    .push(ProjectivePoint::finite(self.tag.zero()));
                let reference = PointConfiguration::new(self.tag, reference.points)?;
                return Ok(self.equivalent_to(&reference).is_some());
            }
        }
        let group = self.automorphism_group()?;
        Ok(group.elements.iter().any(|(_, perm)| perm.order() == 5))
    }
}

/// A finite subgroup of `PGL_2(k)` with its faithful action on the sorted
/// point list.
#[derive(Debug, Clone)]
pub struct ConfigAutGroup {
    /// Canonically sorted (map, induced permutation) pairs.
    pub elements: Vec<(MoebiusMap, Permutation)>,
}

impl ConfigAutGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn maps(&self) -> impl Iterator<Item = &MoebiusMap> {
        self.elements.iter().map(|(m, _)| m)
    }

    pub fn contains(&self, a: &MoebiusMap) -> bool {
        self.elements.iter().any(|(m, _)| m == a)
    }

    /// Closure, inverses and the identity — checked exhaustively.
    pub fn satisfies_group_axioms(&self, tag: FieldTag) -> bool {
        if !self.contains(&MoebiusMap::identity(tag)) {
            return false;
        }
        for (a, _) in &self.elements {
            if !self.contains(&a.inverse()) {
                return false;
            }
            for (b, _) in &self.elements {
                if !self.contains(&a.compose(b)) {
                    return false;
                }
            }
        }
        true
    }

    /// Conjugated group `A G A^{-1}`, for the equivariance property.
    pub fn conjugate_maps(&self, a: &MoebiusMap) -> Vec<MoebiusMap> {
        let inv = a.inverse();
        let mut out: Vec<MoebiusMap> = self
            .elements
            .iter()
            .map(|(m, _)| a.compose(m).compose(&inv))
            .collect();
        out.sort_by(|x, y| x.canonical_cmp(y));
        out
    }

    pub fn sorted_maps(&self) -> Vec<MoebiusMap> {
        self.elements.iter().map(|(m, _)| m.clone()).collect()
    }
}

fn ordered_triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::with_capacity(n * (n - 1) * (n - 2));
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            for k in 0..n {
                if k != i && k != j {
                    out.push((i, j, k));
                }
            }
        }
    }
    out
}

/// `{infinity} ∪ mu_{2g+1}`: the root divisor of `X^{2g+1} Y - Y^{2g+2}`.
pub fn cyclic_probe_configuration(g: usize, p: u64) -> Result<PointConfiguration> {
    let tag = FieldTag::prime_field(p)?;
    let base = PointConfiguration::roots_of_unity(p, (2 * g + 1) as u64)?;
    let mut points = base.points;
    points.push(ProjectivePoint::infinity(tag));
    PointConfiguration::new(tag, points)
}

/// `mu_{2g+2}`: the root divisor of `X^{2g+2} - Y^{2g+2}`.
pub fn dihedral_probe_configuration(g: usize, p: u64) -> Result<PointConfiguration> {
    PointConfiguration::roots_of_unity(p, (2 * g + 2) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn fp(p: u64) -> FieldTag {
        FieldTag::prime_field(p).unwrap()
    }

    fn random_configuration(rng: &mut SplitMix64, p: u64, n: usize) -> PointConfiguration {
        let tag = fp(p);
        loop {
            let mut points = Vec::new();
            while points.len() < n {
                let q = if rng.below(p + 1) == p {
                    ProjectivePoint::infinity(tag)
                } else {
                    ProjectivePoint::finite(Scalar::residue(rng.below(p), p))
                };
                if !points.contains(&q) {
                    points.push(q);
                }
            }
            if let Ok(c) = PointConfiguration::new(tag, points) {
                return c;
            }
        }
    }

    #[test]
    fn construction_guards() {
        let tag = fp(7);
        let p0 = ProjectivePoint::finite(Scalar::residue(1, 7));
        assert_eq!(
            PointConfiguration::new(tag, vec![p0.clone(), p0.clone()]).unwrap_err(),
            Error::TooFewPoints(2)
        );
        let p1 = ProjectivePoint::finite(Scalar::residue(2, 7));
        assert_eq!(
            PointConfiguration::new(tag, vec![p0.clone(), p0.clone(), p1]).unwrap_err(),
            Error::DuplicatePoint
        );
        // over F_3 at most 4 distinct points exist, so 6 cannot be drawn
        let tag3 = fp(3);
        let pts: Vec<ProjectivePoint> = (0..3)
            .map(|i| ProjectivePoint::from_integer(i, tag3))
            .chain([ProjectivePoint::infinity(tag3)])
            .collect();
        assert_eq!(pts.len(), 4);
        let mut extended = pts.clone();
        extended.push(ProjectivePoint::from_integer(3, tag3)); // = 0 mod 3
        assert_eq!(
            PointConfiguration::new(tag3, extended).unwrap_err(),
            Error::DuplicatePoint
        );
    }

    #[test]
    fn sixth_roots_have_dihedral_group() {
        // mu_6 in F_7 (6 | 7 - 1): stabilizer is dihedral of order 12 = 4g+4
        let c = PointConfiguration::roots_of_unity(7, 6).unwrap();
        let group = c.automorphism_group().unwrap();
        assert_eq!(group.order(), 12);
        assert!(group.satisfies_group_axioms(fp(7)));
    }

    #[test]
    fn zero_and_fifth_roots_have_cyclic_group() {
        // {0} ∪ mu_5 over F_11: cyclic of order 5 = 2g+1
        let tag = fp(11);
        let mut points: Vec<ProjectivePoint> = PointConfiguration::roots_of_unity(11, 5)
            .unwrap()
            .points()
            .to_vec();
        points.push(ProjectivePoint::finite(tag.zero()));
        let c = PointConfiguration::new(tag, points).unwrap();
        let group = c.automorphism_group().unwrap();
        assert_eq!(group.order(), 5);
        assert!(group.satisfies_group_axioms(tag));
        // odd order: no involution, hence no extra-involution type
        assert_eq!(c.extra_involution_type().unwrap(), None);
    }

    #[test]
    fn random_configuration_is_rigid() {
        let mut rng = SplitMix64::new(2024);
        let c = random_configuration(&mut rng, 1_000_003, 6);
        let group = c.automorphism_group().unwrap();
        assert_eq!(group.order(), 1);
    }

    #[test]
    fn probe_orders_across_genus() {
        for g in 2..=6usize {
            let m = num_integer::lcm((2 * g + 1) as u64, (2 * g + 2) as u64);
            let p = crate::scalar::prime_with_unity_roots(m);
            let cyc = cyclic_probe_configuration(g, p).unwrap();
            assert_eq!(cyc.automorphism_group().unwrap().order(), 2 * g + 1);
            let dih = dihedral_probe_configuration(g, p).unwrap();
            assert_eq!(dih.automorphism_group().unwrap().order(), 4 * g + 4);
        }
    }

    #[test]
    fn group_is_job_count_independent() {
        let c = PointConfiguration::roots_of_unity(31, 6).unwrap();
        let a = c.automorphism_group_jobs(1).unwrap();
        let b = c.automorphism_group_jobs(4).unwrap();
        assert_eq!(a.sorted_maps(), b.sorted_maps());
    }

    #[test]
    fn equivalence_examples() {
        let mut rng = SplitMix64::new(7);
        let c = random_configuration(&mut rng, 101, 6);
        // constructed equivalence is found with a witness
        let a = MoebiusMap::from_integers(fp(101), 3, 1, 5, 2).unwrap();
        let image = c.apply_map(&a);
        let witness = c.equivalent_to(&image).expect("equivalent by construction");
        assert_eq!(c.apply_map(&witness), image);
        // identity is a valid witness for (C, C)
        let w = c.equivalent_to(&c).unwrap();
        assert_eq!(c.apply_map(&w), c);
        // mu_6 vs {0} ∪ mu_5 over F_31: automorphism orders 12 vs 5 differ
        let mu6 = PointConfiguration::roots_of_unity(31, 6).unwrap();
        let tag = fp(31);
        let mut pts = PointConfiguration::roots_of_unity(31, 5)
            .unwrap()
            .points()
            .to_vec();
        pts.push(ProjectivePoint::finite(tag.zero()));
        let zmu5 = PointConfiguration::new(tag, pts).unwrap();
        assert!(mu6.equivalent_to(&zmu5).is_none());
        assert!(zmu5.equivalent_to(&mu6).is_none());
    }

    #[test]
    fn equivalence_is_an_equivalence_relation() {
        let mut rng = SplitMix64::new(31);
        let tag = fp(101);
        let c0 = random_configuration(&mut rng, 101, 6);
        let a1 = MoebiusMap::from_integers(tag, 1, 7, 0, 3).unwrap();
        let a2 = MoebiusMap::from_integers(tag, 2, 1, 9, 4).unwrap();
        let c1 = c0.apply_map(&a1);
        let c2 = c1.apply_map(&a2);
        // reflexive
        assert!(c0.equivalent_to(&c0).is_some());
        // symmetric via the inverse witness
        let w = c0.equivalent_to(&c1).unwrap();
        assert_eq!(c1.apply_map(&w.inverse()), c0);
        // transitive via composition of witnesses
        let w12 = c1.equivalent_to(&c2).unwrap();
        let composed = w12.compose(&w);
        assert_eq!(c0.apply_map(&composed), c2);
    }

    #[test]
    fn equivariance_of_automorphism_groups() {
        let mut rng = SplitMix64::new(15);
        let tag = fp(31);
        let c = PointConfiguration::roots_of_unity(31, 6).unwrap();
        for _ in 0..5 {
            let a = loop {
                let m = MoebiusMap::from_integers(
                    tag,
                    rng.below(31) as i64,
                    rng.below(31) as i64,
                    rng.below(31) as i64,
                    rng.below(31) as i64,
                );
                if let Ok(m) = m {
                    break m;
                }
            };
            let image = c.apply_map(&a);
            let lhs = image.automorphism_group().unwrap().sorted_maps();
            let rhs = c.automorphism_group().unwrap().conjugate_maps(&a);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn extra_involution_detection() {
        // mu_6: x -> -x pairs antipodal roots, three disjoint transpositions
        let c = PointConfiguration::roots_of_unity(31, 6).unwrap();
        let perm = c.extra_involution_type().unwrap().expect("2^3 involution");
        assert_eq!(perm.cycle_type(), vec![2, 2, 2]);
        // random 8 points (g = 3): trivial group, no involution
        let mut rng = SplitMix64::new(4);
        let c = random_configuration(&mut rng, 1_000_003, 8);
        assert_eq!(c.extra_involution_type().unwrap(), None);
    }

    #[test]
    fn singular_point_detection_genus_two() {
        // reference set {0} ∪ mu_5 over F_31 is the singular point
        let tag = fp(31);
        let mut pts = PointConfiguration::roots_of_unity(31, 5)
            .unwrap()
            .points()
            .to_vec();
        pts.push(ProjectivePoint::finite(tag.zero()));
        let reference = PointConfiguration::new(tag, pts).unwrap();
        assert!(reference.moduli_point_is_singular(2).unwrap());
        // a translate stays in the orbit
        let a = MoebiusMap::from_integers(tag, 2, 3, 1, 4).unwrap();
        assert!(reference.apply_map(&a).moduli_point_is_singular(2).unwrap());
        // mu_6 has extra automorphisms yet maps to a smooth point
        let mu6 = PointConfiguration::roots_of_unity(31, 6).unwrap();
        assert!(!mu6.moduli_point_is_singular(2).unwrap());
        // characteristic 5 is excluded
        let tag5 = fp(5);
        let pts5: Vec<ProjectivePoint> = (0..5)
            .map(|i| ProjectivePoint::from_integer(i, tag5))
            .chain([ProjectivePoint::infinity(tag5)])
            .collect();
        let c5 = PointConfiguration::new(tag5, pts5).unwrap();
        assert_eq!(
            c5.moduli_point_is_singular(2).unwrap_err(),
            Error::BadCharacteristic { p: 5, n: 5 }
        );
    }

    #[test]
    fn singular_point_fallback_without_mu5() {
        // over F_7 (5 does not divide 6) the order-5 criterion decides;
        // random configurations and mu_6 are smooth points
        let mu6 = PointConfiguration::roots_of_unity(7, 6).unwrap();
        assert!(!mu6.moduli_point_is_singular(2).unwrap());
        // genus 3: any extra automorphism makes the point singular
        let mu8 = PointConfiguration::roots_of_unity(17, 8).unwrap();
        assert!(mu8.moduli_point_is_singular(3).unwrap());
        let mut rng = SplitMix64::new(77);
        let c = random_configuration(&mut rng, 1_000_003, 8);
        assert!(!c.moduli_point_is_singular(3).unwrap());
    }
}
