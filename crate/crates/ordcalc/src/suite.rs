//! The theorem suites: every property battery the engine is accepted
//! against, runnable from the CLI (`check --suite ...`) and from the
//! integration tests. Random inputs are drawn from a fixed-seed generator,
//! so reports are byte-identical across runs.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::completion::{complete, dyn_compat, idempotence_check, lattice_transfer, sequence_class_check};
use crate::dynamics::{
    dyn_pair, dyn_quotient, invariant_closed_ideals, shift_generators, swap_generators,
    universal_property_check, validate_action, GroupAction, DEFAULT_GROUP_CAP,
};
use crate::error::Result;
use crate::functional::{
    almost_unperforated, dyn_strict_comparison, functional_transfer_check,
    soft_embedding_harness, validate_ext_state,
};
use crate::genpair::{fixpoint_oracle, generate_normal, generate_prenormal};
use crate::ideal::galois_check;
use crate::iso::verify_iso;
use crate::pairs::{classify_pair, minimal_pair, pair_leq};
use crate::quotient::{factor_through, kernel};
use crate::rel::Relation;
use crate::wsemi::{check_morphism, check_w2, make_fixture, FixtureSpec, WMorphism, WSemigroup};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    fn new(name: &str) -> Self {
        SuiteOutcome {
            name: name.to_string(),
            passed: true,
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn case(&mut self, label: &str, ok: bool) {
        self.cases += 1;
        if !ok {
            self.passed = false;
            if self.failures.len() < 20 {
                self.failures.push(label.to_string());
            }
        }
    }

    fn check(&mut self, label: &str, result: Result<bool>) {
        match result {
            Ok(ok) => self.case(label, ok),
            Err(e) => self.case(&format!("{label}: {e}"), false),
        }
    }
}

/// Fixture corpus used by the suites: all carriers at most 9 except the
/// flagship squares.
fn oracle_fixtures() -> Vec<(String, WSemigroup)> {
    let specs = vec![
        FixtureSpec::Nbar(1),
        FixtureSpec::Nbar(2),
        FixtureSpec::Nbar(3),
        FixtureSpec::Ninf(1),
        FixtureSpec::Ninf(2),
        FixtureSpec::lat_antichain(2),
        FixtureSpec::lat_chain(3),
        FixtureSpec::Lat {
            poset_size: 3,
            poset_leq: vec![(0, 2), (1, 2)],
        },
        // Diamond: bottom below two incomparable middles below a top.
        FixtureSpec::Lat {
            poset_size: 4,
            poset_leq: vec![(0, 1), (0, 2), (1, 3), (2, 3)],
        },
        FixtureSpec::Prod(vec![FixtureSpec::Nbar(1), FixtureSpec::Nbar(1)]),
        FixtureSpec::Prod(vec![FixtureSpec::Nbar(1), FixtureSpec::Nbar(2)]),
        FixtureSpec::Prod(vec![FixtureSpec::Nbar(2), FixtureSpec::Nbar(2)]),
        FixtureSpec::Prod(vec![
            FixtureSpec::Nbar(1),
            FixtureSpec::Nbar(1),
            FixtureSpec::Nbar(1),
        ]),
    ];
    specs
        .into_iter()
        .map(|spec| (spec.label(), make_fixture(&spec).expect("fixture")))
        .collect()
}

fn random_relation(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Relation {
    let mut r = Relation::empty(n);
    for a in 0..n {
        for b in 0..n {
            if rng.random_bool(density) {
                r.insert(a, b);
            }
        }
    }
    r
}

/// Criterion 1: the chain-form generators agree bit-exactly with the
/// least-fixpoint oracle on the fixture corpus and random seeds.
pub fn suite_oracle_equivalence() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("oracle_equivalence");
    let mut rng = ChaCha8Rng::seed_from_u64(0x0AC1E);
    let fixtures = oracle_fixtures();
    let mut random_budget = 200usize;
    let per_fixture = random_budget.div_ceil(fixtures.len());
    for (label, s) in &fixtures {
        let n = s.size();
        let mut seeds = vec![
            Relation::empty(n),
            Relation::identity(n),
            s.prec.clone(),
        ];
        for _ in 0..per_fixture.min(random_budget) {
            seeds.push(random_relation(&mut rng, n, 0.18));
            random_budget = random_budget.saturating_sub(1);
        }
        for (i, seed) in seeds.iter().enumerate() {
            let case = format!("{label} seed {i}");
            let pren = generate_prenormal(s, seed).and_then(|g| {
                Ok(g.pair.order == fixpoint_oracle(s, seed, false)?)
            });
            out.check(&format!("{case} prenormal"), pren);
            let norm = generate_normal(s, seed).and_then(|g| {
                Ok(g.pair.order == fixpoint_oracle(s, seed, true)?)
            });
            out.check(&format!("{case} normal"), norm);
        }
    }
    out
}

/// Criterion 2: minimality of the generated pair, its classification, and
/// W2 for the extension pair.
pub fn suite_minimality() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("minimality");
    let mut rng = ChaCha8Rng::seed_from_u64(0x517E);
    for (label, s) in oracle_fixtures() {
        let n = s.size();
        let base_seed = random_relation(&mut rng, n, 0.12);
        let g = match generate_normal(&s, &base_seed) {
            Ok(g) => g,
            Err(e) => {
                out.case(&format!("{label}: {e}"), false);
                continue;
            }
        };
        let prof = match classify_pair(&s, &g.pair) {
            Ok(p) => p,
            Err(e) => {
                out.case(&format!("{label}: {e}"), false);
                continue;
            }
        };
        out.case(&format!("{label} normal"), prof.is_normal());
        out.case(&format!("{label} left_closed"), prof.is_left_closed());
        out.case(&format!("{label} admissible"), prof.is_admissible());
        out.case(
            &format!("{label} w2"),
            check_w2(&s, &g.extension.aux, &g.extension.order).all_passed(),
        );
        for i in 0..100 {
            let extra = random_relation(&mut rng, n, 0.10);
            let enlarged = match generate_normal(&s, &base_seed.union(&extra)) {
                Ok(e) => e,
                Err(e) => {
                    out.case(&format!("{label} enlarge {i}: {e}"), false);
                    continue;
                }
            };
            out.check(
                &format!("{label} minimal_below {i}"),
                pair_leq(&s, &g.pair, &enlarged.pair),
            );
        }
    }
    out
}

/// The validated morphism corpus: identities, saturating additions,
/// truncations, projections, diagonals, zero maps and swaps.
pub fn morphism_corpus() -> Vec<(String, WMorphism)> {
    let mut out: Vec<(String, WMorphism)> = Vec::new();
    let mut push = |label: String, f: WMorphism| {
        debug_assert!(check_morphism(&f).all_passed(), "{label}");
        out.push((label, f));
    };

    for (label, s) in oracle_fixtures().into_iter().take(6) {
        push(format!("id[{label}]"), WMorphism::identity(&s));
    }
    for k in 1..=4usize {
        let m = k + 1;
        let sq = make_fixture(&FixtureSpec::Prod(vec![
            FixtureSpec::Nbar(k),
            FixtureSpec::Nbar(k),
        ]))
        .unwrap();
        let line = make_fixture(&FixtureSpec::Nbar(k)).unwrap();
        let map: Vec<usize> = (0..sq.size()).map(|i| (i / m + i % m).min(k)).collect();
        push(format!("add[{k}]"), WMorphism::new(sq, line, map).unwrap());
    }
    for (k, j) in [(2usize, 1usize), (3, 1), (3, 2), (4, 2)] {
        let src = make_fixture(&FixtureSpec::Nbar(k)).unwrap();
        let dst = make_fixture(&FixtureSpec::Nbar(j)).unwrap();
        let map: Vec<usize> = (0..=k).map(|x| x.min(j)).collect();
        push(
            format!("trunc[{k}->{j}]"),
            WMorphism::new(src, dst, map).unwrap(),
        );
    }
    for k in [1usize, 2] {
        let m = k + 1;
        let sq = make_fixture(&FixtureSpec::Prod(vec![
            FixtureSpec::Nbar(k),
            FixtureSpec::Nbar(k),
        ]))
        .unwrap();
        let line = make_fixture(&FixtureSpec::Nbar(k)).unwrap();
        let proj: Vec<usize> = (0..sq.size()).map(|i| i / m).collect();
        push(
            format!("proj1[{k}]"),
            WMorphism::new(sq.clone(), line.clone(), proj).unwrap(),
        );
        let diag: Vec<usize> = (0..line.size()).map(|x| x * m + x).collect();
        push(format!("diag[{k}]"), WMorphism::new(line, sq, diag).unwrap());
    }
    for k in [1usize, 2, 3] {
        let s = make_fixture(&FixtureSpec::Nbar(k)).unwrap();
        let z = vec![0usize; s.size()];
        push(format!("zero[{k}]"), WMorphism::new(s.clone(), s, z).unwrap());
    }
    for k in [1usize, 2] {
        let m = k + 1;
        let sq = make_fixture(&FixtureSpec::Prod(vec![
            FixtureSpec::Nbar(k),
            FixtureSpec::Nbar(k),
        ]))
        .unwrap();
        let swap: Vec<usize> = (0..sq.size()).map(|i| (i % m) * m + i / m).collect();
        push(
            format!("swap[{k}]"),
            WMorphism::new(sq.clone(), sq, swap).unwrap(),
        );
    }
    out
}

/// Criterion 3: factorization succeeds exactly below the kernel, and the
/// induced map embeds exactly at the kernel.
pub fn suite_fundamental_theorem() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("fundamental_theorem");
    let corpus = morphism_corpus();
    out.case("corpus_size>=20", corpus.len() >= 20);
    let mut rng = ChaCha8Rng::seed_from_u64(0xFAC7);
    for (label, f) in &corpus {
        out.case(
            &format!("{label} valid"),
            check_morphism(f).all_passed(),
        );
        let ker = kernel(f);
        // Kernels of validated morphisms are admissible normal left-closed.
        match classify_pair(&f.source, &ker) {
            Ok(prof) => out.case(
                &format!("{label} kernel_classifies"),
                prof.is_admissible() && prof.is_normal() && prof.is_left_closed(),
            ),
            Err(e) => out.case(&format!("{label} kernel_classifies: {e}"), false),
        }
        let mut pairs = vec![
            ("minimal".to_string(), minimal_pair(&f.source)),
            ("kernel".to_string(), ker.clone()),
        ];
        for i in 0..3 {
            let seed = random_relation(&mut rng, f.source.size(), 0.12);
            if let Ok(g) = generate_normal(&f.source, &seed) {
                pairs.push((format!("gen{i}"), g.pair));
            }
        }
        // A pair strictly larger than the kernel, when the kernel is not
        // already everything.
        if let Ok(g) = generate_normal(&f.source, &Relation::full(f.source.size())) {
            pairs.push(("full".to_string(), g.pair));
        }
        for (plabel, p) in pairs {
            let case = format!("{label}/{plabel}");
            let below = match pair_leq(&f.source, &p, &ker) {
                Ok(b) => b,
                Err(e) => {
                    out.case(&format!("{case}: {e}"), false);
                    continue;
                }
            };
            match factor_through(f, &p) {
                Ok(fac) => {
                    out.case(&format!("{case} exists_iff_below"), below);
                    out.case(
                        &format!("{case} embedding_iff_kernel"),
                        fac.is_order_embedding == (p.order == ker.order),
                    );
                    out.case(
                        &format!("{case} induced_valid"),
                        check_morphism(&fac.induced).all_passed(),
                    );
                }
                Err(crate::Error::NoFactorization(_, _)) => {
                    out.case(&format!("{case} fails_iff_above"), !below);
                }
                Err(e) => out.case(&format!("{case}: {e}"), false),
            }
        }
    }
    out
}

/// Criterion 4: the flagship dynamical quotient and its factorization.
pub fn suite_flagship() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("flagship_dynamical_quotient");
    for k in 1..=4usize {
        let m = k + 1;
        let sq = make_fixture(&FixtureSpec::Prod(vec![
            FixtureSpec::Nbar(k),
            FixtureSpec::Nbar(k),
        ]))
        .unwrap();
        let line = make_fixture(&FixtureSpec::Nbar(k)).unwrap();
        let g = match validate_action(&sq, &swap_generators(m), DEFAULT_GROUP_CAP) {
            Ok(g) => g,
            Err(e) => {
                out.case(&format!("k={k} action: {e}"), false);
                continue;
            }
        };
        let q = match dyn_quotient(&sq, &g) {
            Ok(q) => q,
            Err(e) => {
                out.case(&format!("k={k} quotient: {e}"), false);
                continue;
            }
        };
        // Explicit isomorphism class((x, y)) = min(x + y, k).
        let mut iso = vec![usize::MAX; q.quotient.size()];
        let mut consistent = true;
        for x in 0..m {
            for y in 0..m {
                let cls = q.class_of[x * m + y];
                let val = (x + y).min(k);
                if iso[cls] == usize::MAX {
                    iso[cls] = val;
                } else if iso[cls] != val {
                    consistent = false;
                }
            }
        }
        out.case(&format!("k={k} classes_by_saturating_sum"), consistent);
        out.case(
            &format!("k={k} iso_to_nbar"),
            consistent && verify_iso(&q.quotient, &line, &iso),
        );

        let map: Vec<usize> = (0..sq.size()).map(|i| (i / m + i % m).min(k)).collect();
        let f = WMorphism::new(sq.clone(), line.clone(), map).unwrap();
        match dyn_pair(&sq, &g).and_then(|p| factor_through(&f, &p.pair)) {
            Ok(fac) => out.case(&format!("k={k} addition_embeds"), fac.is_order_embedding),
            Err(e) => out.case(&format!("k={k} factorization: {e}"), false),
        }
    }
    out
}

/// Criterion 5: the Galois connection batteries on every fixture within
/// budget.
pub fn suite_galois() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("galois_connection");
    for (label, s) in oracle_fixtures() {
        if s.size() > 12 {
            continue;
        }
        match galois_check(&s, crate::budget().max(12)) {
            Ok(rep) => out.case(&label, rep.all_passed()),
            Err(e) => out.case(&format!("{label}: {e}"), false),
        }
    }
    out
}

/// The fixture-by-action corpus for the dynamical suites.
pub fn action_corpus() -> Vec<(String, WSemigroup, GroupAction)> {
    let mut out = Vec::new();
    let mut push = |label: &str, s: WSemigroup, gens: Vec<Vec<usize>>| {
        let g = if gens.is_empty() {
            GroupAction::trivial(s.size())
        } else {
            validate_action(&s, &gens, DEFAULT_GROUP_CAP).expect("corpus action")
        };
        out.push((label.to_string(), s, g));
    };

    for k in 1..=3usize {
        let sq = make_fixture(&FixtureSpec::Prod(vec![
            FixtureSpec::Nbar(k),
            FixtureSpec::Nbar(k),
        ]))
        .unwrap();
        push(&format!("NBAR({k})^2/swap"), sq, swap_generators(k + 1));
    }
    let latsq = make_fixture(&FixtureSpec::Prod(vec![
        FixtureSpec::lat_antichain(1),
        FixtureSpec::lat_antichain(1),
    ]))
    .unwrap();
    push("LAT(1)^2/swap", latsq.clone(), swap_generators(2));
    push("LAT(1)^2/trivial", latsq, vec![]);
    let cube = make_fixture(&FixtureSpec::Prod(vec![
        FixtureSpec::Nbar(1),
        FixtureSpec::Nbar(1),
        FixtureSpec::Nbar(1),
    ]))
    .unwrap();
    push("NBAR(1)^3/shift", cube, shift_generators(2, 3));
    for spec in [
        FixtureSpec::Nbar(2),
        FixtureSpec::Ninf(1),
        FixtureSpec::lat_antichain(2),
        FixtureSpec::lat_chain(3),
    ] {
        let s = make_fixture(&spec).unwrap();
        push(&format!("{}/trivial", spec.label()), s, vec![]);
    }
    let prodsq = make_fixture(&FixtureSpec::Prod(vec![
        FixtureSpec::Nbar(2),
        FixtureSpec::Nbar(2),
    ]))
    .unwrap();
    push("NBAR(2)^2/trivial", prodsq, vec![]);
    let latac2sq = make_fixture(&FixtureSpec::Prod(vec![
        FixtureSpec::lat_antichain(2),
        FixtureSpec::lat_antichain(2),
    ]))
    .unwrap();
    push("LAT(2)^2/swap", latac2sq, swap_generators(4));
    out
}

/// Criterion 6: dynamics and ideals: lattice bijection, two-stage
/// quotients, principal identity, minimality against simplicity.
pub fn suite_dynamics_ideals() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("dynamics_ideal_compat");
    let corpus = action_corpus();
    out.case("corpus_size>=12", corpus.len() >= 12);
    for (label, s, g) in corpus {
        if s.size() > 16 {
            continue;
        }
        let ideals = match invariant_closed_ideals(&s, &g, crate::budget()) {
            Ok(i) => i,
            Err(e) => {
                out.case(&format!("{label}: {e}"), false);
                continue;
            }
        };
        for i in ideals {
            match crate::dynamics::dyn_ideal_compat_check(&s, &g, i, crate::budget()) {
                Ok(rep) => out.case(
                    &format!("{label} ideal {:#x}", i.mask),
                    rep.all_passed(),
                ),
                Err(e) => out.case(&format!("{label} ideal {:#x}: {e}", i.mask), false),
            }
        }
        // Universal property on the projection composed with nothing else:
        // the projection itself is invariant.
        if let Ok(q) = dyn_quotient(&s, &g) {
            match universal_property_check(&s, &g, &q.projection) {
                Ok(rep) => out.case(&format!("{label} universal"), rep.all_passed()),
                Err(e) => out.case(&format!("{label} universal: {e}"), false),
            }
        }
    }
    out
}

/// Criterion 7: completions: Cu axioms, dense embedding, idempotence,
/// lattice transfer, dynamical compatibility, and the sequence-class
/// encoding bijection.
pub fn suite_completion() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("completion");
    for (label, s) in oracle_fixtures() {
        match idempotence_check(&s) {
            Ok(rep) => out.case(&format!("{label} battery"), rep.all_passed()),
            Err(e) => out.case(&format!("{label} battery: {e}"), false),
        }
        if s.size() <= 7 {
            match sequence_class_check(&s) {
                Ok(rep) => out.case(&format!("{label} sequences"), rep.all_passed()),
                Err(e) => out.case(&format!("{label} sequences: {e}"), false),
            }
        }
        if s.size() <= 12 {
            match lattice_transfer(&s, crate::budget().max(12)) {
                Ok(rep) => out.case(&format!("{label} lattice"), rep.all_passed()),
                Err(e) => out.case(&format!("{label} lattice: {e}"), false),
            }
        }
    }
    for (label, s, g) in action_corpus() {
        if s.size() > 16 {
            continue;
        }
        match dyn_compat(&s, &g) {
            Ok(rep) => out.case(&format!("{label} dyn_compat"), rep.all_passed()),
            Err(e) => out.case(&format!("{label} dyn_compat: {e}"), false),
        }
    }
    out
}

/// Criterion 8: dynamical strict comparison routes agree everywhere, with
/// the designed negative and positive instances pinned.
pub fn suite_comparison() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("comparison");
    for (label, s, g) in action_corpus() {
        if s.size() > 16 {
            continue;
        }
        match dyn_strict_comparison(&s, &g, crate::budget()) {
            Ok(rep) => {
                out.case(&format!("{label} routes_agree"), rep.passed("routes_agree"));
                match label.as_str() {
                    "NBAR(2)^2/swap" => {
                        out.case(&format!("{label} negative"), !rep.passed("verdict"));
                        let q = dyn_quotient(&s, &g).expect("flagship quotient");
                        let au = almost_unperforated(&q.quotient);
                        out.case(
                            &format!("{label} witness"),
                            au.witness == Some((2, 1, 2)),
                        );
                        if let Some((a, b, k)) = au.witness {
                            // Witness re-validates: (k+1)a prec kb, a not below b.
                            let lhs = q.quotient.monoid.multiple(a, k + 1);
                            let rhs = q.quotient.monoid.multiple(b, k);
                            out.case(
                                &format!("{label} witness_revalidates"),
                                q.quotient.prec.contains(lhs, rhs)
                                    && !q.quotient.leq_contains(a, b),
                            );
                        }
                    }
                    "LAT(1)^2/swap" | "LAT(2)^2/swap" | "LAT(1)^2/trivial" => {
                        out.case(&format!("{label} positive"), rep.passed("verdict"));
                    }
                    _ => {}
                }
            }
            Err(e) => out.case(&format!("{label}: {e}"), false),
        }
    }
    // Almost unperforation transfers across the completion on every fixture.
    for (label, s) in oracle_fixtures() {
        match complete(&s) {
            Ok(c) => out.case(
                &format!("{label} au_transfer"),
                almost_unperforated(&s).holds == almost_unperforated(&c.completed).holds,
            ),
            Err(e) => out.case(&format!("{label} au_transfer: {e}"), false),
        }
    }
    out
}

/// Order units per fixture label, for the transfer suite.
fn unit_of(s: &WSemigroup) -> Option<usize> {
    (0..s.size()).find(|&u| !s.equivalent(u, s.zero()) && crate::ideal::is_order_unit(s, u))
}

/// Criterion 9: functional transfer with identity round trips, plus the
/// soft-embedding harness on the dynamical projection.
pub fn suite_functionals() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("functional_transfer");
    for (label, s, g) in action_corpus() {
        if s.size() > 16 {
            continue;
        }
        let Some(unit) = unit_of(&s) else {
            continue;
        };
        // The unit must be fixed by the action for the invariant transfer.
        if !g.elements.iter().all(|p| p[unit] == unit) {
            continue;
        }
        match functional_transfer_check(&s, &g, unit, crate::budget()) {
            Ok(rep) => out.case(&label, rep.all_passed()),
            Err(e) => out.case(&format!("{label}: {e}"), false),
        }
        if let Ok(q) = dyn_quotient(&s, &g) {
            match soft_embedding_harness(&s, &g, &q.projection, unit, crate::budget()) {
                Ok(rep) => out.case(&format!("{label} soft"), rep.all_passed()),
                Err(e) => out.case(&format!("{label} soft: {e}"), false),
            }
        }
        // Separation witnesses re-validate as states.
        for a in 0..s.size().min(4) {
            for b in 0..s.size().min(4) {
                if let Ok(Some(st)) =
                    crate::functional::separate(&s, a, b, Some(&g), crate::budget())
                {
                    out.case(
                        &format!("{label} witness({a},{b})"),
                        validate_ext_state(&s, &st, Some(&g)).all_passed(),
                    );
                }
            }
        }
    }
    out
}

pub const SUITE_NAMES: [&str; 9] = [
    "oracle_equivalence",
    "minimality",
    "fundamental_theorem",
    "flagship_dynamical_quotient",
    "galois_connection",
    "dynamics_ideal_compat",
    "completion",
    "comparison",
    "functional_transfer",
];

pub fn run_suite(name: &str) -> Option<SuiteOutcome> {
    match name {
        "oracle_equivalence" => Some(suite_oracle_equivalence()),
        "minimality" => Some(suite_minimality()),
        "fundamental_theorem" => Some(suite_fundamental_theorem()),
        "flagship_dynamical_quotient" => Some(suite_flagship()),
        "galois_connection" => Some(suite_galois()),
        "dynamics_ideal_compat" => Some(suite_dynamics_ideals()),
        "completion" => Some(suite_completion()),
        "comparison" => Some(suite_comparison()),
        "functional_transfer" => Some(suite_functionals()),
        _ => None,
    }
}

pub fn run_all() -> Vec<SuiteOutcome> {
    SUITE_NAMES
        .iter()
        .map(|name| run_suite(name).expect("known suite"))
        .collect()
}
