//! Combinatorics of the extra-automorphism locus: permutations with their
//! cycle types, the exhaustive 4-subset intersection search, and the stratum
//! dimension formula `(2g+2-i)/p - 1`.

use std::collections::BTreeMap;

use crate::error::Error;
use crate::scalar::is_prime;
use crate::Result;

/// A permutation of `{1..N}`, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Permutation {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// From 0-based images; must be a bijection.
    pub fn from_images(images: Vec<usize>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::PreconditionViolated(
                    "images do not form a bijection".into(),
                ));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// From disjoint cycles in 1-based labels, e.g. `(12)(34)(56)`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Permutation> {
        let mut images: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for w in 0..cycle.len() {
                let from = cycle[w]
                    .checked_sub(1)
                    .ok_or_else(|| Error::PreconditionViolated("labels are 1-based".into()))?;
                let to = cycle[(w + 1) % cycle.len()] - 1;
                if from >= n || to >= n {
                    return Err(Error::PreconditionViolated("label out of range".into()));
                }
                images[from] = to;
            }
        }
        Permutation::from_images(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    /// `self` after `rhs`.
    pub fn compose(&self, rhs: &Permutation) -> Permutation {
        assert_eq!(self.len(), rhs.len());
        Permutation {
            images: rhs.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn conjugate_by(&self, sigma: &Permutation) -> Permutation {
        sigma.compose(self).compose(&sigma.inverse())
    }

    pub fn fixed_points(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &j)| *i == j)
            .count()
    }

    /// Cycle lengths sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            lengths.push(len);
        }
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    pub fn order(&self) -> u64 {
        self.cycle_type()
            .into_iter()
            .fold(1u64, |acc, l| num_integer::lcm(acc, l as u64))
    }
}

/// The `k`-th permutation of `{0..n}` in lexicographic order (Lehmer decode);
/// lets exhaustive scans shard the index space.
pub fn kth_permutation(n: usize, mut k: u64) -> Permutation {
    let mut factorials = vec![1u64; n];
    for i in 1..n {
        factorials[i] = factorials[i - 1] * i as u64;
    }
    let mut pool: Vec<usize> = (0..n).collect();
    let mut images = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let f = factorials[i];
        let idx = (k / f) as usize;
        k %= f;
        images.push(pool.remove(idx));
    }
    Permutation { images }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Witness pair for the 4-subset intersection lemma: two 4-element subsets
/// whose intersection counts with their images differ, both below 4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourTuplePair {
    /// 1-based labels, sorted.
    pub n1: Vec<usize>,
    pub n2: Vec<usize>,
    pub k1: usize,
    pub k2: usize,
}

fn subset_labels(mask: u64) -> Vec<usize> {
    (0..64)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

/// Exhaustive search over 4-subsets for a pair `N1, N2` with
/// `|N1 ∩ rho(N1)| != |N2 ∩ rho(N2)|`, both intersections below 4.
/// Requires at least 6 points and at most two fixed points. `None` occurs
/// exactly for the six-point permutations of cycle type 2+2+2.
pub fn find_lemma_pairs(rho: &Permutation) -> Result<Option<FourTuplePair>> {
    let n = rho.len();
    if n < 6 {
        return Err(Error::PreconditionViolated(format!(
            "need at least 6 points, got {n}"
        )));
    }
    if n > 64 {
        return Err(Error::PreconditionViolated(
            "subset masks support at most 64 points".into(),
        ));
    }
    if rho.fixed_points() > 2 {
        return Err(Error::PreconditionViolated(format!(
            "{} fixed points exceed the allowed two",
            rho.fixed_points()
        )));
    }
    // k(S) = |S ∩ rho(S)| per 4-subset S; a witness pair exists iff two
    // distinct values below 4 occur.
    let mut first_with_k: [Option<u64>; 4] = [None; 4];
    let mut masks = Vec::new();
    four_subset_masks(n, &mut masks);
    for &mask in &masks {
        let mut image = 0u64;
        for i in 0..n {
            if mask >> i & 1 == 1 {
                image |= 1 << rho.apply(i);
            }
        }
        let k = (mask & image).count_ones() as usize;
        if k < 4 && first_with_k[k].is_none() {
            first_with_k[k] = Some(mask);
        }
    }
    let found: Vec<(usize, u64)> = first_with_k
        .iter()
        .enumerate()
        .filter_map(|(k, m)| m.map(|m| (k, m)))
        .collect();
    if found.len() >= 2 {
        let (k1, m1) = found[0];
        let (k2, m2) = found[1];
        Ok(Some(FourTuplePair {
            n1: subset_labels(m1),
            n2: subset_labels(m2),
            k1,
            k2,
        }))
    } else {
        Ok(None)
    }
}

fn four_subset_masks(n: usize, out: &mut Vec<u64>) {
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    out.push(1 << a | 1 << b | 1 << c | 1 << d);
                }
            }
        }
    }
}

/// Per-cycle-type tally of an exhaustive lemma run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleTypeCount {
    pub n: usize,
    pub cycle_type: Vec<usize>,
    pub tested: u64,
    pub witnesses_found: u64,
    pub failures: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub n_max: usize,
    pub entries: Vec<CycleTypeCount>,
}

impl LemmaReport {
    pub fn total_failures(&self) -> u64 {
        self.entries.iter().map(|e| e.failures).sum()
    }

    pub fn failures_for(&self, n: usize, cycle_type: &[usize]) -> u64 {
        self.entries
            .iter()
            .find(|e| e.n == n && e.cycle_type == cycle_type)
            .map_or(0, |e| e.failures)
    }
}

/// Runs `find_lemma_pairs` over every permutation of sizes `6..=n_max`
/// meeting the fixed-point hypothesis, tallying per cycle type. Sizes beyond
/// 9 are rejected: the scan is factorial.
pub fn verify_lemma_combin(n_max: usize, jobs: usize) -> Result<LemmaReport> {
    if !(6..=9).contains(&n_max) {
        return Err(Error::PreconditionViolated(format!(
            "n_max must lie in 6..=9, got {n_max}"
        )));
    }
    let jobs = jobs.max(1);
    let mut entries: BTreeMap<(usize, Vec<usize>), (u64, u64, u64)> = BTreeMap::new();
    for n in 6..=n_max {
        let total = factorial(n);
        let chunk = total.div_ceil(jobs as u64);
        let shards: Vec<BTreeMap<Vec<usize>, (u64, u64, u64)>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..jobs as u64)
                .map(|w| {
                    scope.spawn(move || {
                        let lo = w * chunk;
                        let hi = ((w + 1) * chunk).min(total);
                        let mut tally: BTreeMap<Vec<usize>, (u64, u64, u64)> = BTreeMap::new();
                        for k in lo..hi {
                            let rho = kth_permutation(n, k);
                            if rho.fixed_points() > 2 {
                                continue;
                            }
                            let entry = tally.entry(rho.cycle_type()).or_insert((0, 0, 0));
                            entry.0 += 1;
                            match find_lemma_pairs(&rho).expect("preconditions hold") {
                                Some(pair) => {
                                    debug_assert!(pair.k1 != pair.k2 && pair.k1 < 4 && pair.k2 < 4);
                                    entry.1 += 1;
                                }
                                None => entry.2 += 1,
                            }
                        }
                        tally
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for shard in shards {
            for (ty, (t, w, f)) in shard {
                let e = entries.entry((n, ty)).or_insert((0, 0, 0));
                e.0 += t;
                e.1 += w;
                e.2 += f;
            }
        }
    }
    Ok(LemmaReport {
        n_max,
        entries: entries
            .into_iter()
            .map(
                |((n, cycle_type), (tested, witnesses_found, failures))| CycleTypeCount {
                    n,
                    cycle_type,
                    tested,
                    witnesses_found,
                    failures,
                },
            )
            .collect(),
    })
}

/// True iff the permutation of six points has cycle type 2+2+2.
pub fn is_triple_transposition_class(rho: &Permutation) -> Result<bool> {
    if rho.len() != 6 {
        return Err(Error::WrongDegree(rho.len()));
    }
    Ok(rho.cycle_type() == [2, 2, 2])
}

/// Dimension `(2g+2-i)/p - 1` of the stratum of configurations fixed by an
/// order-`p` map with `i` ramification points in the divisor.
pub fn stratum_dimension(g: u64, p: u64, i: u64) -> Result<u64> {
    if !(2..=1_000_000_000).contains(&g) {
        return Err(Error::PreconditionViolated(format!(
            "genus must lie in 2..=10^9, got {g}"
        )));
    }
    if i > 2 {
        return Err(Error::PreconditionViolated(format!(
            "i must be 0, 1 or 2, got {i}"
        )));
    }
    if !is_prime(p) || p > 2 * g + 2 {
        return Err(Error::PreconditionViolated(format!(
            "p must be a prime at most 2g+2 = {}, got {p}",
            2 * g + 2
        )));
    }
    if p == 2 && i == 1 {
        return Err(Error::ImpossibleCase);
    }
    let numerator = 2 * g + 2 - i;
    if !numerator.is_multiple_of(p) {
        return Err(Error::NotDivisible { p, n: numerator });
    }
    Ok(numerator / p - 1)
}

/// All `(p, i)` meeting the divisibility hypotheses for the given genus.
pub fn admissible_strata(g: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for p in 2..=2 * g + 2 {
        if !is_prime(p) {
            continue;
        }
        for i in 0..=2u64 {
            if p == 2 && i == 1 {
                continue;
            }
            if (2 * g + 2 - i).is_multiple_of(p) {
                out.push((p, i));
            }
        }
    }
    out
}

/// The maximal dimension over all strata, which is `g`, attained only at
/// `(p, i) = (2, 0)`; both facts are recomputed, not assumed.
pub fn max_aut_locus_dimension(g: u64) -> Result<u64> {
    if !(2..=1_000_000_000).contains(&g) {
        return Err(Error::PreconditionViolated(format!(
            "genus must lie in 2..=10^9, got {g}"
        )));
    }
    let mut max = 0;
    for (p, i) in admissible_strata(g) {
        let d = stratum_dimension(g, p, i)?;
        if (p, i) == (2, 0) {
            if d != g {
                return Err(Error::InternalInconsistency(format!(
                    "stratum (2, 0) has dimension {d}, expected {g}"
                )));
            }
        } else if d > g - 1 {
            return Err(Error::InternalInconsistency(format!(
                "stratum ({p}, {i}) has dimension {d} > g - 1"
            )));
        }
        max = max.max(d);
    }
    debug_assert_eq!(max, g);
    Ok(max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_types_and_composition() {
        let rho = Permutation::from_cycles(6, &[&[1, 2, 3, 4, 5, 6]]).unwrap();
        assert_eq!(rho.cycle_type(), vec![6]);
        assert_eq!(rho.order(), 6);
        let triple = Permutation::from_cycles(6, &[&[1, 2], &[3, 4], &[5, 6]]).unwrap();
        assert_eq!(triple.cycle_type(), vec![2, 2, 2]);
        assert_eq!(triple.fixed_points(), 0);
        assert!(triple.compose(&triple.inverse()) == Permutation::identity(6));
        assert_eq!(rho.compose(&rho.inverse()), Permutation::identity(6));
    }

    #[test]
    fn kth_permutation_enumerates_all() {
        let mut seen = std::collections::HashSet::new();
        for k in 0..factorial(4) {
            seen.insert(kth_permutation(4, k).images().to_vec());
        }
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn lemma_pairs_long_cycle() {
        let rho = Permutation::from_cycles(6, &[&[1, 2, 3, 4, 5, 6]]).unwrap();
        let pair = find_lemma_pairs(&rho).unwrap().expect("witness exists");
        assert_ne!(pair.k1, pair.k2);
        assert!(pair.k1 < 4 && pair.k2 < 4);
        // re-verify the recorded counts straight from rho
        for (subset, k) in [(&pair.n1, pair.k1), (&pair.n2, pair.k2)] {
            let image: Vec<usize> = subset.iter().map(|&x| rho.apply(x - 1) + 1).collect();
            let count = subset.iter().filter(|x| image.contains(x)).count();
            assert_eq!(count, k);
        }
    }

    #[test]
    fn lemma_pairs_triple_transposition_fails() {
        let rho = Permutation::from_cycles(6, &[&[1, 2], &[3, 4], &[5, 6]]).unwrap();
        assert_eq!(find_lemma_pairs(&rho).unwrap(), None);
    }

    #[test]
    fn lemma_pairs_identity_rejected() {
        let id = Permutation::identity(6);
        assert!(matches!(
            find_lemma_pairs(&id).unwrap_err(),
            Error::PreconditionViolated(_)
        ));
    }

    #[test]
    fn lemma_verification_small() {
        let report = verify_lemma_combin(6, 2).unwrap();
        assert_eq!(report.total_failures(), 15);
        assert_eq!(report.failures_for(6, &[2, 2, 2]), 15);
        // the failing class is tested exactly 15 times: 6!/(2^3 3!) = 15
        let entry = report
            .entries
            .iter()
            .find(|e| e.n == 6 && e.cycle_type == [2, 2, 2])
            .unwrap();
        assert_eq!(entry.tested, 15);
        assert_eq!(entry.witnesses_found, 0);
    }

    #[test]
    fn lemma_verification_seven_clean() {
        let report = verify_lemma_combin(7, 4).unwrap();
        assert_eq!(report.failures_for(6, &[2, 2, 2]), 15);
        let failures_at_7: u64 = report
            .entries
            .iter()
            .filter(|e| e.n == 7)
            .map(|e| e.failures)
            .sum();
        assert_eq!(failures_at_7, 0);
    }

    #[test]
    fn lemma_report_independent_of_jobs() {
        let a = verify_lemma_combin(6, 1).unwrap();
        let b = verify_lemma_combin(6, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn lemma_bounds_rejected() {
        assert!(verify_lemma_combin(5, 1).is_err());
        assert!(verify_lemma_combin(10, 1).is_err());
    }

    #[test]
    fn conjugation_transports_witnesses() {
        let mut rng = crate::rng::SplitMix64::new(5);
        for _ in 0..50 {
            let rho = kth_permutation(7, rng.below(factorial(7)));
            if rho.fixed_points() > 2 {
                continue;
            }
            let sigma = kth_permutation(7, rng.below(factorial(7)));
            let conj = rho.conjugate_by(&sigma);
            assert_eq!(
                find_lemma_pairs(&rho).unwrap().is_some(),
                find_lemma_pairs(&conj).unwrap().is_some()
            );
        }
    }

    #[test]
    fn triple_transposition_class() {
        let t = Permutation::from_cycles(6, &[&[1, 2], &[3, 4], &[5, 6]]).unwrap();
        assert!(is_triple_transposition_class(&t).unwrap());
        let c = Permutation::from_cycles(6, &[&[1, 2, 3, 4, 5, 6]]).unwrap();
        assert!(!is_triple_transposition_class(&c).unwrap());
        let wrong = Permutation::identity(5);
        assert_eq!(
            is_triple_transposition_class(&wrong).unwrap_err(),
            Error::WrongDegree(5)
        );
        // 15 elements of S_6 have type 2+2+2
        let count = (0..factorial(6))
            .filter(|&k| is_triple_transposition_class(&kth_permutation(6, k)).unwrap())
            .count();
        assert_eq!(count, 15);
    }

    #[test]
    fn stratum_dimension_examples() {
        assert_eq!(stratum_dimension(2, 2, 0).unwrap(), 2);
        assert_eq!(stratum_dimension(2, 3, 0).unwrap(), 1);
        assert_eq!(
            stratum_dimension(2, 2, 1).unwrap_err(),
            Error::ImpossibleCase
        );
        assert_eq!(
            stratum_dimension(3, 3, 0).unwrap_err(),
            Error::NotDivisible { p: 3, n: 8 }
        );
        assert!(stratum_dimension(2, 4, 0).is_err());
    }

    #[test]
    fn max_locus_dimension() {
        assert_eq!(max_aut_locus_dimension(2).unwrap(), 2);
        assert_eq!(max_aut_locus_dimension(3).unwrap(), 3);
        // no stratum other than (2, 0) attains the maximum at g = 5
        let g = 5;
        for (p, i) in admissible_strata(g) {
            if (p, i) != (2, 0) {
                assert!(stratum_dimension(g, p, i).unwrap() < g);
            }
        }
        assert_eq!(max_aut_locus_dimension(5).unwrap(), 5);
    }
}
