//! The full verification suite: every numeric claim the library reproduces,
//! packaged as twelve named criteria with per-criterion wall-clock budgets.
//! The CLI subcommand `verify-all` and the `acceptance` integration test
//! both run these functions; all randomness is seeded, so runs are
//! reproducible.

use std::time::{Duration, Instant};

use crate::binform::{discriminant, gl2_act, BinaryForm};
use crate::config::PointConfiguration;
use crate::curve::{curve_from_config, elliptic_taut_curve, j_invariant};
use crate::moebius::{
    from_three_points, solve_pairing_involution, Matrix2, MoebiusMap, ProjectivePoint,
};
use crate::picard;
use crate::rng::SplitMix64;
use crate::scalar::{next_prime, root_of_unity, FieldTag, Scalar};
use crate::strata;
use crate::Result;

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl CriterionOutcome {
    pub fn within_budget(&self) -> bool {
        self.elapsed <= self.budget
    }

    /// One-line summary, the format `verify-all` prints.
    pub fn summary_line(&self) -> String {
        format!(
            "criterion {:2} {:<28} {}  [{:>7.2?} / budget {:?}] {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.elapsed,
            self.budget,
            self.details
        )
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Upper genus for the descent and order-table sweeps.
    pub gmax: u64,
    /// Worker threads for the shardable scans.
    pub jobs: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { gmax: 20, jobs: 1 }
    }
}

pub const CRITERIA: [(u32, &str); 12] = [
    (1, "discriminant-homogeneity"),
    (2, "discriminant-invariance"),
    (3, "stabilizer-orders"),
    (4, "fiber-characters-descent"),
    (5, "group-order-table"),
    (6, "hodge-class"),
    (7, "four-subset-lemma"),
    (8, "stratum-dimensions"),
    (9, "involution-solver"),
    (10, "twist-dichotomy"),
    (11, "singular-point"),
    (12, "elliptic-family"),
];

pub fn run_all(cfg: &VerifyConfig) -> Vec<CriterionOutcome> {
    CRITERIA
        .iter()
        .map(|&(id, _)| run_criterion(id, cfg))
        .collect()
}

type CriterionFn = fn(&VerifyConfig) -> Result<String>;

pub fn run_criterion(id: u32, cfg: &VerifyConfig) -> CriterionOutcome {
    let (name, budget, body): (&str, u64, CriterionFn) = match id {
        1 => ("discriminant-homogeneity", 5, criterion_homogeneity),
        2 => ("discriminant-invariance", 5, criterion_invariance),
        3 => ("stabilizer-orders", 30, criterion_stabilizer_orders),
        4 => ("fiber-characters-descent", 60, criterion_characters_descent),
        5 => ("group-order-table", 1, criterion_order_table),
        6 => ("hodge-class", 1, criterion_hodge),
        7 => ("four-subset-lemma", 120, criterion_lemma),
        8 => ("stratum-dimensions", 1, criterion_strata),
        9 => ("involution-solver", 10, criterion_involutions),
        10 => ("twist-dichotomy", 30, criterion_twists),
        11 => ("singular-point", 30, criterion_singular_point),
        12 => ("elliptic-family", 1, criterion_elliptic),
        other => {
            return CriterionOutcome {
                id: other,
                name: "unknown",
                passed: false,
                details: format!("no criterion {other}"),
                elapsed: Duration::ZERO,
                budget: Duration::ZERO,
            }
        }
    };
    let start = Instant::now();
    let result = body(cfg);
    let elapsed = start.elapsed();
    match result {
        Ok(details) => CriterionOutcome {
            id,
            name,
            passed: true,
            details,
            elapsed,
            budget: Duration::from_secs(budget),
        },
        Err(e) => CriterionOutcome {
            id,
            name,
            passed: false,
            details: e.to_string(),
            elapsed,
            budget: Duration::from_secs(budget),
        },
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(crate::Error::InternalInconsistency(msg()))
    }
}

fn random_smooth_form(rng: &mut SplitMix64, genus: usize, p: u64) -> Result<BinaryForm> {
    let n = 2 * genus + 2;
    loop {
        let coeffs: Vec<Scalar> = (0..=n).map(|_| Scalar::residue(rng.below(p), p)).collect();
        match BinaryForm::new(genus, coeffs) {
            Ok(f) if !discriminant(&f)?.is_zero() => return Ok(f),
            _ => continue,
        }
    }
}

fn random_invertible(rng: &mut SplitMix64, p: u64) -> Matrix2 {
    loop {
        let m = Matrix2::new(
            Scalar::residue(rng.below(p), p),
            Scalar::residue(rng.below(p), p),
            Scalar::residue(rng.below(p), p),
            Scalar::residue(rng.below(p), p),
        );
        if !m.det().is_zero() {
            return m;
        }
    }
}

fn random_configuration(rng: &mut SplitMix64, p: u64, n: usize) -> PointConfiguration {
    let tag = FieldTag::prime_field(p).expect("prime");
    loop {
        let mut points: Vec<ProjectivePoint> = Vec::new();
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

/// Criterion 1: `disc(lambda f) / disc(f) = lambda^{4g+2}` for 100 random pairs at
/// each genus in 2..=5.
fn criterion_homogeneity(_cfg: &VerifyConfig) -> Result<String> {
    let p = next_prime(1_000_000);
    let mut rng = SplitMix64::new(0xd15c);
    let mut checked = 0u64;
    for genus in 2..=5usize {
        for _ in 0..100 {
            let f = random_smooth_form(&mut rng, genus, p)?;
            let lambda = Scalar::residue(rng.unit(p), p);
            let ratio = discriminant(&f.scale(&lambda))?.divide(&discriminant(&f)?)?;
            check(ratio == lambda.pow(4 * genus as u64 + 2), || {
                format!("homogeneity failed at genus {genus}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} random (lambda, f) pairs over F_{p}"))
}

/// Criterion 2: `disc(A . f) = disc(f)` exactly, 100 random pairs at genus 2 and 3.
fn criterion_invariance(_cfg: &VerifyConfig) -> Result<String> {
    let p = next_prime(1_000_000);
    let mut rng = SplitMix64::new(0x11a7);
    let mut checked = 0u64;
    for genus in [2usize, 3] {
        for _ in 0..100 {
            let f = random_smooth_form(&mut rng, genus, p)?;
            let a = random_invertible(&mut rng, p);
            check(
                discriminant(&gl2_act(&a, &f)?)? == discriminant(&f)?,
                || format!("invariance failed at genus {genus}"),
            )?;
            checked += 1;
        }
    }
    Ok(format!("{checked} random (A, f) pairs over F_{p}"))
}

/// Criterion 3: Probe stabilizer orders 2g+1 and 4g+4 for genus 2..=5.
fn criterion_stabilizer_orders(_cfg: &VerifyConfig) -> Result<String> {
    let mut lines = Vec::new();
    for g in 2..=5usize {
        let p = picard::descent_prime(g as u64);
        let cyc = crate::config::cyclic_probe_configuration(g, p)?
            .automorphism_group()?
            .order();
        check(cyc == 2 * g + 1, || {
            format!("cyclic probe order {cyc}, expected {}", 2 * g + 1)
        })?;
        let dih = crate::config::dihedral_probe_configuration(g, p)?
            .automorphism_group()?
            .order();
        check(dih == 4 * g + 4, || {
            format!("dihedral probe order {dih}, expected {}", 4 * g + 4)
        })?;
        lines.push(format!("g={g}: {cyc}/{dih} over F_{p}"));
    }
    Ok(lines.join("; "))
}

/// Criterion 4: Probe fiber characters (`zeta^{g+1}`, `-1`, `(-1)^g`) and trivial
/// descent subgroup for genus 2 up to the configured maximum.
fn criterion_characters_descent(cfg: &VerifyConfig) -> Result<String> {
    for g in 2..=5usize {
        let p = picard::descent_prime(g as u64);
        let tag = FieldTag::prime_field(p)?;
        let zeta = root_of_unity(p, (2 * g + 1) as u64).expect("chosen prime");
        let gen_cyc = MoebiusMap::new(Matrix2::new(
            Scalar::residue(zeta, p),
            tag.zero(),
            tag.zero(),
            tag.one(),
        ))?;
        let f1 = picard::cyclic_probe_form(g, p)?;
        let ch = picard::stabilizer_fiber_character(&f1, &gen_cyc)?;
        check(
            ch.order == (2 * g + 1) as u64 && ch.exponent == (g + 1) as u64,
            || format!("cyclic character exponent {} at g={g}", ch.exponent),
        )?;
        let zeta2 = root_of_unity(p, (2 * g + 2) as u64).expect("chosen prime");
        let gen_dih = MoebiusMap::new(Matrix2::new(
            Scalar::residue(zeta2, p),
            tag.zero(),
            tag.zero(),
            tag.one(),
        ))?;
        let f2 = picard::dihedral_probe_form(g, p)?;
        let ch = picard::stabilizer_fiber_character(&f2, &gen_dih)?;
        check(ch.scalar == Scalar::from_integer(-1, tag), || {
            format!("rotation character {} at g={g}", ch.scalar)
        })?;
        let swap = MoebiusMap::from_integers(tag, 0, 1, 1, 0)?;
        let ch = picard::stabilizer_fiber_character(&f2, &swap)?;
        let want = Scalar::from_integer(if g % 2 == 0 { 1 } else { -1 }, tag);
        check(ch.scalar == want, || {
            format!("swap character {} at g={g}", ch.scalar)
        })?;
    }
    let gmax = cfg.gmax.max(2);
    for g in 2..=gmax {
        let subgroup = picard::descent_subgroup(g)?;
        check(subgroup == vec![0], || {
            format!("descent subgroup at g={g} is {subgroup:?}")
        })?;
    }
    Ok(format!(
        "probe characters at g=2..5; descent trivial for g=2..{gmax}"
    ))
}

/// Criterion 5: Order table: class group, stack and divisor-stack orders with the
/// comparison index, for genus 2 up to the configured maximum.
fn criterion_order_table(cfg: &VerifyConfig) -> Result<String> {
    // first rows pinned as literals
    let frozen: [(u64, u64, u64, u64, u64); 5] = [
        (2, 5, 10, 10, 1),
        (3, 14, 28, 14, 2),
        (4, 18, 18, 18, 1),
        (5, 22, 44, 22, 2),
        (6, 26, 26, 26, 1),
    ];
    for (g, class, stack, divisor, index) in frozen {
        let o = picard::group_orders(g)?;
        check(
            (
                o.class_group,
                o.stack_picard,
                o.divisor_stack,
                o.comparison_index,
            ) == (class, stack, divisor, index),
            || format!("order table row g={g} is {o:?}"),
        )?;
    }
    let gmax = cfg.gmax.max(6);
    for g in 2..=gmax {
        let o = picard::group_orders(g)?;
        let class = if g == 2 { 5 } else { 4 * g + 2 };
        let stack = if g % 2 == 0 {
            4 * g + 2
        } else {
            2 * (4 * g + 2)
        };
        check(o.class_group == class, || format!("class group at g={g}"))?;
        check(o.stack_picard == stack, || format!("stack order at g={g}"))?;
        check(o.divisor_stack == 4 * g + 2, || {
            format!("divisor stack order at g={g}")
        })?;
        check((o.comparison_index == 2) == (g % 2 == 1), || {
            format!("comparison index at g={g}")
        })?;
    }
    Ok(format!("orders verified for g=2..{gmax}"))
}

/// Criterion 6: Hodge class exponent (g/2 or g) and index 2 exactly when 4 | g, for
/// genus 2..=40.
fn criterion_hodge(_cfg: &VerifyConfig) -> Result<String> {
    for g in 2..=40u64 {
        let c = picard::hodge_class(g)?;
        let expect = if g % 2 == 0 { g / 2 } else { g };
        check(c.residue == expect % c.modulus, || {
            format!("hodge exponent at g={g} is {}", c.residue)
        })?;
        let idx = picard::hodge_index(g)?;
        check((idx == 2) == (g % 4 == 0) && (idx == 1 || idx == 2), || {
            format!("hodge index at g={g} is {idx}")
        })?;
    }
    Ok("exponent and index verified for g=2..40".into())
}

/// Criterion 7: Exhaustive four-subset lemma for 6..=8 points: the only failures are
/// the 15 triple transpositions at six points.
fn criterion_lemma(cfg: &VerifyConfig) -> Result<String> {
    let report = strata::verify_lemma_combin(8, cfg.jobs)?;
    check(report.failures_for(6, &[2, 2, 2]) == 15, || {
        format!(
            "type 2+2+2 failures: {}",
            report.failures_for(6, &[2, 2, 2])
        )
    })?;
    check(report.total_failures() == 15, || {
        format!("total failures {}", report.total_failures())
    })?;
    let tested: u64 = report.entries.iter().map(|e| e.tested).sum();
    Ok(format!(
        "{tested} permutations over sizes 6..8; failures exactly the 15 of type 2+2+2"
    ))
}

/// Criterion 8: Strata: dimension g at (2,0), at most g-1 elsewhere, for genus 2..=50.
fn criterion_strata(_cfg: &VerifyConfig) -> Result<String> {
    for g in 2..=50u64 {
        check(strata::stratum_dimension(g, 2, 0)? == g, || {
            format!("stratum (2,0) at g={g}")
        })?;
        for (p, i) in strata::admissible_strata(g) {
            if (p, i) != (2, 0) {
                let d = strata::stratum_dimension(g, p, i)?;
                check(d < g, || format!("stratum ({p},{i}) at g={g} has dim {d}"))?;
            }
        }
        check(strata::max_aut_locus_dimension(g)? == g, || {
            format!("max locus dimension at g={g}")
        })?;
    }
    Ok("dimension table verified for g=2..50".into())
}

/// Criterion 9: The pairing involution: for 100 random admissible quadruples over
/// F_101 the solver output squares to the identity, sends the prescribed
/// points correctly, and is the unique involution among all triple
/// candidates with the same two constraints.
fn criterion_involutions(_cfg: &VerifyConfig) -> Result<String> {
    let p = 101u64;
    let tag = FieldTag::prime_field(p)?;
    let mut rng = SplitMix64::new(0x1770);
    let all_points: Vec<ProjectivePoint> = (0..p)
        .map(|i| ProjectivePoint::finite(Scalar::residue(i, p)))
        .chain([ProjectivePoint::infinity(tag)])
        .collect();
    for _ in 0..100 {
        let mut picks = Vec::new();
        while picks.len() < 4 {
            let q = all_points[rng.below(p + 1) as usize].clone();
            if !picks.contains(&q) {
                picks.push(q);
            }
        }
        let (p1, p2, p3, p4) = (&picks[0], &picks[1], &picks[2], &picks[3]);
        let a = solve_pairing_involution(p1, p2, p3, p4)?;
        check(a.compose(&a).is_identity(), || "A^2 != 1".into())?;
        check(a.apply(p1) == *p2 && a.apply(p3) == *p4, || {
            "prescribed images missed".into()
        })?;
        // every map with A(p1)=p2, A(p3)=p4 arises as the triple candidate
        // sending (p1, p3, p2) to (p2, p4, q) for exactly one point q
        let mut involutions = 0u64;
        for q in &all_points {
            if q == p2 || q == p4 {
                continue;
            }
            let b = from_three_points([p1, p3, p2], [p2, p4, q])?;
            if b.compose(&b).is_identity() {
                involutions += 1;
                check(b == a, || "different involution with the same pairs".into())?;
            }
        }
        check(involutions == 1, || {
            format!("{involutions} involutions among candidates")
        })?;
    }
    Ok("100 random quadruples over F_101, uniqueness by full candidate scan".into())
}

/// Criterion 10: Twist dichotomy. Over F_101 and F_1009 an automorphism-free
/// configuration is drawn; its square and nonsquare twists are isomorphic
/// over the closure, not over the field, and every unit twist falls into one
/// of exactly two classes. Over F_11 no automorphism-free configuration of
/// any admissible even size exists (|PGL_2(F_11)| = 1320 exceeds the 924
/// six-point subsets, and 8- or 10-point sets have their complement's
/// stabilizer), so the hypothesis is vacuous there; the emptiness is
/// re-proved by exhaustive scan.
fn criterion_twists(_cfg: &VerifyConfig) -> Result<String> {
    // exhaustive emptiness proof at p = 11
    {
        let p = 11u64;
        let tag = FieldTag::prime_field(p)?;
        let all: Vec<ProjectivePoint> = (0..p)
            .map(|i| ProjectivePoint::finite(Scalar::residue(i, p)))
            .chain([ProjectivePoint::infinity(tag)])
            .collect();
        let mut free = 0u64;
        for mask in 0u32..(1 << 12) {
            if mask.count_ones() != 6 {
                continue;
            }
            let pts: Vec<ProjectivePoint> = (0..12)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| all[i].clone())
                .collect();
            let c = PointConfiguration::new(tag, pts)?;
            if c.automorphism_group()?.order() == 1 {
                free += 1;
            }
        }
        check(free == 0, || {
            format!("found {free} automorphism-free six-point sets over F_11")
        })?;
    }
    let mut notes = vec!["F_11: no automorphism-free configuration exists (vacuous)".to_string()];
    for p in [101u64, 1009] {
        let tag = FieldTag::prime_field(p)?;
        let mut rng = SplitMix64::new(0x7157 + p);
        let config = loop {
            let c = random_configuration(&mut rng, p, 6);
            if c.automorphism_group()?.order() == 1 {
                break c;
            }
        };
        let base = curve_from_config(&config, tag.one())?;
        let nonsquare = (2..p)
            .map(|v| Scalar::residue(v, p))
            .find(|s| !s.square_class().unwrap().is_square())
            .expect("half the units are nonsquares");
        let twisted = base.with_twist(nonsquare.clone())?;
        check(base.isomorphic_over_field(&twisted)?.is_none(), || {
            format!("nonsquare twist isomorphic over F_{p}")
        })?;
        check(base.isomorphic_over_closure(&twisted)?.is_some(), || {
            format!("twists not closure-isomorphic over F_{p}")
        })?;
        // exactly two classes: every unit twist joins base or twisted
        let sample: Vec<u64> = if p == 101 {
            (1..p).collect()
        } else {
            (0..60).map(|_| rng.unit(p)).collect()
        };
        for v in sample {
            let candidate = base.with_twist(Scalar::residue(v, p))?;
            let in_base = base.isomorphic_over_field(&candidate)?.is_some();
            let in_twisted = twisted.isomorphic_over_field(&candidate)?.is_some();
            check(in_base != in_twisted, || {
                format!(
                    "twist {v} over F_{p} is in {} classes",
                    in_base as u8 + in_twisted as u8
                )
            })?;
            check(
                in_base == Scalar::residue(v, p).square_class()?.is_square(),
                || format!("twist {v} over F_{p} lands in the wrong class"),
            )?;
        }
        notes.push(format!("F_{p}: dichotomy verified"));
    }
    Ok(notes.join("; "))
}

/// Criterion 11: The genus-2 singular point: detected exactly on the orbit of
/// `{0} ∪ mu_5` among translates, `mu_6` and 20 random configurations over
/// F_31.
fn criterion_singular_point(_cfg: &VerifyConfig) -> Result<String> {
    let p = 31u64;
    let tag = FieldTag::prime_field(p)?;
    let mut pts = PointConfiguration::roots_of_unity(p, 5)?.points().to_vec();
    pts.push(ProjectivePoint::finite(tag.zero()));
    let reference = PointConfiguration::new(tag, pts)?;
    check(reference.moduli_point_is_singular(2)?, || {
        "reference set not flagged".into()
    })?;
    let mut rng = SplitMix64::new(0x516);
    for _ in 0..3 {
        let a = loop {
            match MoebiusMap::from_integers(
                tag,
                rng.below(p) as i64,
                rng.below(p) as i64,
                rng.below(p) as i64,
                rng.below(p) as i64,
            ) {
                Ok(m) => break m,
                Err(_) => continue,
            }
        };
        check(reference.apply_map(&a).moduli_point_is_singular(2)?, || {
            "translate of the reference not flagged".into()
        })?;
    }
    let mu6 = PointConfiguration::roots_of_unity(p, 6)?;
    check(!mu6.moduli_point_is_singular(2)?, || {
        "mu_6 wrongly flagged singular".into()
    })?;
    let mut random_flagged = 0u64;
    for _ in 0..20 {
        let c = random_configuration(&mut rng, p, 6);
        let singular = c.moduli_point_is_singular(2)?;
        let equivalent = c.equivalent_to(&reference).is_some();
        check(singular == equivalent, || {
            "singularity disagrees with orbit membership".into()
        })?;
        if singular {
            random_flagged += 1;
        }
    }
    Ok(format!(
        "orbit detection exact over F_31; {random_flagged}/20 random draws on the orbit"
    ))
}

/// Criterion 12: The genus-1 family hits 20 random rational j-invariants exactly.
fn criterion_elliptic(_cfg: &VerifyConfig) -> Result<String> {
    let mut rng = SplitMix64::new(0xe111);
    let mut done = 0;
    while done < 20 {
        let j0 = Scalar::rational(
            rng.below(1_000_000) as i64 - 500_000,
            rng.below(999) as i64 + 1,
        );
        if j0.is_zero() || j0 == Scalar::rational(1728, 1) {
            continue;
        }
        let member = elliptic_taut_curve(&j0)?;
        check(member.j == j0, || format!("family misses j = {j0}"))?;
        check(j_invariant(&member.t, &member.t)? == j0, || {
            format!("oracle disagrees at j = {j0}")
        })?;
        done += 1;
    }
    check(
        elliptic_taut_curve(&Scalar::rational(0, 1)).is_err(),
        || "j = 0 not excluded".into(),
    )?;
    check(
        elliptic_taut_curve(&Scalar::rational(1728, 1)).is_err(),
        || "j = 1728 not excluded".into(),
    )?;
    Ok("20 random rational j-invariants matched exactly".into())
}
