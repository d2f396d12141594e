//! Acceptance run: one line per criterion, nonzero exit if any fails.

use klein_lattice::abelian::{h1_abelian, random_module, AbelianModule};
use klein_lattice::catalog::{
    cohomology_corpus, dihedral_group, klein_cases, pell_certificate, pell_cone, pell_group, pell_matrix,
    pell_reflection, random_parabolic_configuration, real_structure_cases, transvection_control,
};
use klein_lattice::cohomology::{les_of_pointed_sets, twist_fiber_check, ShortExactSequence};
use klein_lattice::domain::{siegel_intersections, verify_fundamental_domain, VerifyOptions};
use klein_lattice::filtration::infinite_dihedral_example;
use klein_lattice::group::FiniteGroup;
use klein_lattice::hilbert::hilbert_square_extension;
use klein_lattice::hodge::anti_invariant_class;
use klein_lattice::isometry::{characteristic_polynomial, fixes_pointwise_implies_identity, is_isometry, FixVerdict};
use klein_lattice::lattice::{k3_lattice, IntegerLattice, LatticeType, Signature};
use klein_lattice::matrix::IntMatrix;
use klein_lattice::num::{int_vec, Int, IntVec, Rat};
use klein_lattice::real_forms::real_structure_classifier;
use klein_lattice::reduction::{classify_finite_subgroups_on_cone, cross_check_classes};
use klein_lattice::subgroups::finite_subgroup_classes_matrix;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::process::ExitCode;
use std::time::{Duration, Instant};

/// Seed shared by every randomized criterion.
const SEED: u64 = 20_241_015;
const RANDOM_LATTICES: usize = 100;
const MAX_RANDOM_RANK: usize = 6;
const RANDOM_MODULES: usize = 60;
const DOMAIN_SAMPLES: usize = 1000;
const DOMAIN_DEPTH: usize = 20;
const DOMAIN_EARLY_DEPTH: usize = 2;
const DISJOINTNESS_DEPTH: usize = 8;
const SIEGEL_DEPTHS: (usize, usize) = (10, 20);
const DIHEDRAL_CLASSES: usize = 3;
const PARABOLIC_CASES: usize = 20;
const HILBERT_RANGE: std::ops::RangeInclusive<usize> = 2..=6;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Signature from Descartes' rule of signs on the characteristic polynomial,
/// exact because a symmetric matrix has only real eigenvalues.
fn descartes_signature(g: &IntMatrix) -> Signature {
    let p = characteristic_polynomial(g);
    let zero = p.iter().position(|c| !c.is_zero()).unwrap_or(p.len() - 1);
    let changes = |coeffs: &[Int]| {
        let signs: Vec<bool> = coeffs.iter().filter(|c| !c.is_zero()).map(|c| c.is_positive()).collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let reflected: Vec<Int> =
        p.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() }).collect();
    Signature::new(changes(&p), zero, changes(&reflected))
}

fn expected_type(s: &Signature) -> LatticeType {
    let rho = s.positive + s.zero + s.negative;
    if s.positive == 1 && s.zero == 0 {
        LatticeType::Hyperbolic
    } else if s.positive == 0 && s.zero == 0 && s.negative == rho {
        LatticeType::Elliptic
    } else if s.positive == 0 && s.zero == 1 {
        LatticeType::Parabolic
    } else {
        LatticeType::Other
    }
}

fn random_lattice(rng: &mut ChaCha8Rng) -> IntegerLattice {
    let n = rng.random_range(1..=MAX_RANDOM_RANK);
    let mut g = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = Int::from(rng.random_range(-3..=3i64));
            g.set(i, j, v.clone());
            g.set(j, i, v);
        }
    }
    IntegerLattice::new(g).expect("symmetric")
}

fn lattice_suite() -> Outcome {
    let k3 = k3_lattice().signature() == Signature::new(3, 0, 19);
    let disc = HILBERT_RANGE.clone().all(|n| {
        let d = 2 * (n as i64 - 1);
        IntegerLattice::diagonal(&[-d]).discriminant_group().map(|g| g.invariant_factors) == Ok(vec![Int::from(d)])
    });
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mismatches = (0..RANDOM_LATTICES)
        .filter(|_| {
            let l = random_lattice(&mut rng);
            let s = descartes_signature(l.gram());
            l.signature() != s || l.classify_type() != expected_type(&s)
        })
        .count();
    outcome(
        k3 && disc && mismatches == 0,
        format!("K3 signature {k3}, discriminants {disc}, {mismatches}/{RANDOM_LATTICES} trichotomy mismatches"),
    )
}

fn cohomology_oracles() -> Outcome {
    let corpus = cohomology_corpus();
    let mut failures = Vec::new();
    for entry in &corpus {
        let ok = ShortExactSequence::from_normal_subgroup(&entry.mid, &entry.normal).is_ok_and(|ses| {
            les_of_pointed_sets(&ses).is_exact() && twist_fiber_check(&ses).is_ok_and(|f| f.all_bijective)
        });
        if !ok {
            failures.push(entry.label.clone());
        }
    }
    outcome(
        failures.is_empty() && !corpus.is_empty(),
        format!("{} sequences, failures: {:?}", corpus.len(), failures),
    )
}

/// `|G| f = ∂(−Σ_h f(h))` from summing the cocycle identity over `h`.
fn averaging_witness(module: &AbelianModule, f: &[IntVec]) -> bool {
    let g = module.acting();
    let order = Int::from(g.order());
    let mut s = vec![Int::zero(); module.dim()];
    for v in f {
        for (a, b) in s.iter_mut().zip(v) {
            *a += b;
        }
    }
    let minus_s: IntVec = s.iter().map(|x| -x.clone()).collect();
    let boundary = module.coboundary(&minus_s);
    g.elements().all(|x| {
        let scaled: IntVec = f[x].iter().map(|c| c * &order).collect();
        module.reduce(&scaled) == module.reduce(&boundary[x])
    })
}

fn torsion_law() -> Outcome {
    let groups = ["Z2", "Z3", "V4", "Z4", "S3", "Z6"].map(|n| FiniteGroup::named(n).expect("known group"));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = 0;
    let mut nontrivial = 0;
    for i in 0..RANDOM_MODULES {
        let module = random_module(&mut rng, &groups[i % groups.len()], 4);
        let h1 = h1_abelian(&module);
        nontrivial += usize::from(!h1.is_trivial());
        let witnesses = h1.generators.iter().all(|f| module.is_cocycle(f) && averaging_witness(&module, f));
        if !h1.torsion_law_holds(&module) || !witnesses {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{RANDOM_MODULES} modules ({nontrivial} with nonzero H¹), {bad} failures"))
}

fn fundamental_domain() -> Outcome {
    let early = pell_certificate(DOMAIN_EARLY_DEPTH);
    let cert = pell_certificate(DOMAIN_DEPTH);
    // Bisector of (1,0) and M(1,0) = (3,2) under diag(2,−4): a = ±2b.
    let expected = [int_vec(&[2, -1]), int_vec(&[2, 1])];
    let shape = cert.domain.rays() == expected && early.domain == cert.domain && cert.first_complete_depth <= DOMAIN_EARLY_DEPTH;
    let opts = VerifyOptions { samples: DOMAIN_SAMPLES, seed: SEED, disjointness_depth: DISJOINTNESS_DEPTH, ..Default::default() };
    let verified = verify_fundamental_domain(&cert, &opts);
    // Independent covering check: reduced points satisfy |b| ≤ a/2.
    let reduced_ok = klein_lattice::domain::sample_cone_points(&cert.cone, DOMAIN_SAMPLES, SEED, opts.coordinate_bound)
        .iter()
        .all(|p| {
            let x: Vec<Rat> = p.iter().cloned().map(Rat::from_integer).collect();
            cert.reduce(&x, opts.max_steps).is_some_and(|r| {
                let (a, b) = (&r.point[0], &r.point[1]);
                a.is_positive() && b.abs() * Rat::from_integer(2.into()) <= *a
            })
        });
    let detail = match &verified {
        Ok(r) => format!(
            "halfspaces stable from depth {} (equal at {DOMAIN_EARLY_DEPTH} and {DOMAIN_DEPTH}), {} samples covered (longest word {}), {} translates disjoint",
            cert.first_complete_depth, r.covering.samples, r.covering.longest_reduction, r.disjointness.elements_checked
        ),
        Err(e) => format!("verification failed: {e}"),
    };
    outcome(shape && verified.is_ok() && reduced_ok, detail)
}

/// Slope of `(a, b)` with `a > 0`.
fn slope(v: &[Int]) -> Rat {
    Rat::new(v[1].clone(), v[0].clone())
}

fn siegel_witness() -> Outcome {
    let cert = pell_certificate(DOMAIN_DEPTH);
    let (d1, d2) = SIEGEL_DEPTHS;
    let at = |d| siegel_intersections(&pell_cone(), &cert.domain, &cert.domain, &pell_group(d));
    let (Ok(r1), Ok(r2)) = (at(d1), at(d2)) else {
        return outcome(false, "Siegel computation failed");
    };
    // Oracle: in slope coordinates every cone is a closed interval; count the
    // distinct nonempty overlaps of M^k D with D for |k| ≤ depth.
    let interval = |m: &IntMatrix| {
        let s: Vec<Rat> = cert.domain.rays().iter().map(|r| slope(&m.mul_vec(r))).collect();
        (s.iter().min().cloned().expect("two rays"), s.iter().max().cloned().expect("two rays"))
    };
    let base = interval(&IntMatrix::identity(2));
    let m = pell_matrix();
    let minv = m.inverse_unimodular().expect("unimodular");
    let mut overlaps = std::collections::BTreeSet::new();
    for k in -(d2 as i64)..=(d2 as i64) {
        let g = if k >= 0 { m.pow(k as u64) } else { minv.pow(k.unsigned_abs()) };
        let (lo, hi) = interval(&g);
        let (a, b) = (lo.max(base.0.clone()), hi.min(base.1.clone()));
        if a <= b {
            overlaps.insert((a, b));
        }
    }
    let pass = r1.intersections == r2.intersections && r2.intersections.len() == overlaps.len();
    outcome(
        pass,
        format!(
            "{} intersections at depth {d1}, {} at depth {d2}, oracle {}",
            r1.intersections.len(),
            r2.intersections.len(),
            overlaps.len()
        ),
    )
}

fn dihedral_cross_check() -> Outcome {
    let cert = pell_certificate(DOMAIN_DEPTH);
    let group = dihedral_group(DOMAIN_DEPTH);
    let ball_classes = finite_subgroup_classes_matrix(2, &group, DOMAIN_DEPTH);
    let cone_classes = classify_finite_subgroups_on_cone(&group, &cert);
    let check = cross_check_classes(
        &infinite_dihedral_example(),
        &[pell_matrix()],
        &[IntMatrix::identity(2), pell_reflection()],
        &group,
        &cert,
    );
    match (cone_classes, check) {
        (Ok(c), Ok(x)) => outcome(
            c.representatives.len() == DIHEDRAL_CLASSES
                && x.cohomology_classes.len() == DIHEDRAL_CLASSES
                && ball_classes.representatives.len() == DIHEDRAL_CLASSES
                && x.agree,
            format!(
                "cone pipeline {} classes, cohomology {} classes, ball enumeration {} classes, matching {:?}",
                c.representatives.len(),
                x.cohomology_classes.len(),
                ball_classes.representatives.len(),
                x.matching
            ),
        ),
        (Err(e), _) | (_, Err(e)) => outcome(false, format!("pipeline error: {e}")),
    }
}

fn pointwise_fixing() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut identity_only = 0;
    for i in 0..PARABOLIC_CASES {
        let (l, n) = random_parabolic_configuration(&mut rng, 1 + i % 4);
        let parabolic = n.restricted_lattice(&l).classify_type() == LatticeType::Parabolic;
        if parabolic && fixes_pointwise_implies_identity(&l, &n) == Ok(FixVerdict::IdentityOnly) {
            identity_only += 1;
        }
    }
    let (l, n) = transvection_control();
    let control = match fixes_pointwise_implies_identity(&l, &n) {
        Ok(FixVerdict::Counterexample { matrix }) => {
            is_isometry(&l, &matrix).unwrap_or(false)
                && !matrix.is_identity()
                && n.basis().iter().all(|b| &matrix.mul_vec(b) == b)
        }
        _ => false,
    };
    outcome(
        identity_only == PARABOLIC_CASES && control,
        format!("{identity_only}/{PARABOLIC_CASES} parabolic cases identity-only, control counterexample {control}"),
    )
}

fn hilbert_operator() -> Outcome {
    let mut failures = Vec::new();
    let mut runs = 0;
    for case in real_structure_cases() {
        for n in HILBERT_RANGE.clone() {
            runs += 1;
            let ok = hilbert_square_extension(&case.hodge, n, &case.sigma_star, Some(&case.kahler)).is_ok_and(|ext| {
                let r = &ext.report;
                let Some(k) = &r.kahler else { return false };
                let c = anti_invariant_class(&k.model, &ext.operator);
                let exact = c.is_ok_and(|c| {
                    let image = ext.operator.matrix.to_rat().mul_vec(&c.ambient);
                    image.iter().zip(&c.ambient).all(|(a, b)| *a == -b.clone())
                });
                r.involution && r.isometry && r.anti_hodge && r.discriminant_minus_id && exact
            });
            if !ok {
                failures.push(format!("{} n={n}", case.name));
            }
        }
    }
    outcome(failures.is_empty(), format!("{runs} extensions, failures: {failures:?}"))
}

fn real_forms() -> Outcome {
    let cases = klein_cases();
    let failures: Vec<String> = cases
        .iter()
        .filter(|c| !real_structure_classifier(&c.group, c.sigma).is_ok_and(|r| r.agree()))
        .map(|c| c.name.clone())
        .collect();
    outcome(failures.is_empty() && !cases.is_empty(), format!("{} (group, character, involution) cases, failures: {failures:?}", cases.len()))
}

type Criterion = (usize, &'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, "lattice suite", Duration::from_secs(5), lattice_suite),
        (2, "cohomology oracle equivalence", Duration::from_secs(120), cohomology_oracles),
        (3, "torsion law", Duration::from_secs(30), torsion_law),
        (4, "fundamental domain", Duration::from_secs(60), fundamental_domain),
        (5, "Siegel property witness", Duration::from_secs(60), siegel_witness),
        (6, "finite-subgroup cross-check", Duration::from_secs(120), dihedral_cross_check),
        (7, "pointwise-fixing decision", Duration::from_secs(30), pointwise_fixing),
        (8, "Hilbert operator", Duration::from_secs(30), hilbert_operator),
        (9, "real-form classifier", Duration::from_secs(30), real_forms),
    ];
    let mut all = true;
    for (id, name, budget, run) in criteria {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let pass = o.pass && in_time;
        all &= pass;
        println!(
            "criterion {id} [{}] {name}: {} ({:.2?} of {:?})",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed,
            budget
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
