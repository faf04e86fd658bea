//! Group actions by W-automorphisms, the orbit relation, dynamical pairs and
//! quotients, invariant ideals, and the universal property.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::genpair::{generate_normal, one_step_normal, Generated};
use crate::ideal::{
    enumerate_ideals, is_closed_ideal, is_simple, pair_of_ideal,
    principal, Ideal,
};
use crate::pairs::minimal_pair;
use crate::quotient::{quotient, QuotientResult};
use crate::rel::{semigroup_has_almost_refinement, Relation};
use crate::report::AxiomReport;
use crate::wsemi::{check_morphism, WMorphism, WSemigroup};

/// Default cap on the materialized group order.
pub const DEFAULT_GROUP_CAP: usize = 10_000;

/// A finite permutation group acting on the carrier by W-automorphisms.
/// All elements are materialized.
#[derive(Clone, Debug)]
pub struct GroupAction {
    pub base_size: usize,
    pub generators: Vec<Vec<usize>>,
    pub elements: Vec<Vec<usize>>,
}

impl GroupAction {
    pub fn trivial(n: usize) -> Self {
        GroupAction {
            base_size: n,
            generators: Vec::new(),
            elements: vec![(0..n).collect()],
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

/// Validates generators as W-automorphisms and materializes the group.
///
/// A monotone additive permutation automatically has a monotone additive
/// inverse (the image of a finite relation under a bijection preserves
/// cardinality), so generator-level checks suffice; the materialized
/// elements are re-checked cheaply anyway.
pub fn validate_action(s: &WSemigroup, gens: &[Vec<usize>], cap: usize) -> Result<GroupAction> {
    let n = s.size();
    for (gi, g) in gens.iter().enumerate() {
        if g.len() != n {
            return Err(Error::InvalidAction(format!(
                "generator {gi} has length {}, carrier is {n}",
                g.len()
            )));
        }
        let mut seen = vec![false; n];
        for &x in g {
            if x >= n || seen[x] {
                return Err(Error::InvalidAction(format!(
                    "generator {gi} is not a permutation"
                )));
            }
            seen[x] = true;
        }
        if g[s.zero()] != s.zero() {
            return Err(Error::InvalidAction(format!(
                "generator {gi} moves zero"
            )));
        }
        for a in 0..n {
            for b in 0..n {
                if g[s.monoid.add(a, b)] != s.monoid.add(g[a], g[b]) {
                    return Err(Error::InvalidAction(format!(
                        "generator {gi} breaks addition at ({a}, {b})"
                    )));
                }
            }
        }
        for (a, b) in s.prec.pairs() {
            if !s.prec.contains(g[a], g[b]) {
                return Err(Error::InvalidAction(format!(
                    "generator {gi} breaks prec at ({a}, {b})"
                )));
            }
        }
    }

    // BFS closure under composition.
    let identity: Vec<usize> = (0..n).collect();
    let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
    set.insert(identity.clone());
    let mut frontier = vec![identity];
    while let Some(g) = frontier.pop() {
        for h in gens {
            let gh: Vec<usize> = (0..n).map(|x| g[h[x]]).collect();
            if set.insert(gh.clone()) {
                if set.len() > cap {
                    return Err(Error::Budget(format!(
                        "group order exceeds the cap {cap}"
                    )));
                }
                frontier.push(gh);
            }
        }
    }
    let elements: Vec<Vec<usize>> = set.into_iter().collect();
    Ok(GroupAction {
        base_size: n,
        generators: gens.to_vec(),
        elements,
    })
}

/// The orbit relation: `a` related to `b` when `a = g b` for some group
/// element. Uses the full group, so it is reflexive and symmetric.
pub fn orbit_relation(s: &WSemigroup, g: &GroupAction) -> Relation {
    assert_eq!(s.size(), g.base_size);
    let n = s.size();
    let mut rel = Relation::empty(n);
    for perm in &g.elements {
        for b in 0..n {
            rel.insert(perm[b], b);
        }
    }
    rel
}

/// The dynamical pair: the normal closed pair generated by the orbit
/// relation. When the semigroup has almost refinement, the one-step form of
/// the dynamical subequivalence is computed as well and must agree.
pub fn dyn_pair(s: &WSemigroup, g: &GroupAction) -> Result<Generated> {
    let orbit = orbit_relation(s, g);
    let gen = generate_normal(s, &orbit)?;
    if semigroup_has_almost_refinement(&s.prec, &s.monoid) {
        let one = one_step_normal(s, &orbit)?;
        if one.order != gen.pair.order {
            return Err(Error::Precondition(
                "one-step dynamical order disagrees with the chain form".into(),
            ));
        }
    }
    Ok(gen)
}

/// The dynamical quotient. The projection is invariant: group translates
/// land in the same class.
pub fn dyn_quotient(s: &WSemigroup, g: &GroupAction) -> Result<QuotientResult> {
    let pair = dyn_pair(s, g)?.pair;
    let q = quotient(s, &pair)?;
    for perm in &g.elements {
        for a in 0..s.size() {
            if q.class_of[perm[a]] != q.class_of[a] {
                return Err(Error::Precondition(format!(
                    "projection is not invariant at {a}"
                )));
            }
        }
    }
    Ok(q)
}

/// Universal property of the dynamical quotient: every invariant morphism
/// factors uniquely through the projection, after antisymmetrizing the
/// target.
pub fn universal_property_check(
    s: &WSemigroup,
    g: &GroupAction,
    f: &WMorphism,
) -> Result<AxiomReport> {
    let mut rep = AxiomReport::new("universal_property");
    for perm in &g.elements {
        for a in 0..s.size() {
            if f.apply(perm[a]) != f.apply(a) {
                return Err(Error::Precondition(format!(
                    "morphism is not invariant at {a}"
                )));
            }
        }
    }
    let q = dyn_quotient(s, g)?;
    let tq = quotient(&f.target, &minimal_pair(&f.target))?;

    // Induced class map: well-defined because the kernel contains the
    // dynamical pair (checked structurally below).
    let k = q.reps.len();
    let mut map = vec![0usize; k];
    let mut well_defined = None;
    for (i, &rep_elem) in q.reps.iter().enumerate() {
        map[i] = tq.class_of[f.apply(rep_elem)];
    }
    for a in 0..s.size() {
        if tq.class_of[f.apply(a)] != map[q.class_of[a]] {
            well_defined = Some(vec![a]);
            break;
        }
    }
    rep.record("induced_map_well_defined", well_defined.clone());
    if well_defined.is_some() {
        return Ok(rep);
    }

    let induced = WMorphism::new(q.quotient.clone(), tq.quotient.clone(), map.clone())?;
    let mrep = check_morphism(&induced);
    rep.record_bool("induced_is_w_morphism", mrep.all_passed(), vec![]);

    // Order preservation.
    let mut order_ok = None;
    'ord: for x in 0..k {
        for y in 0..k {
            if q.quotient.leq_contains(x, y)
                && !tq.quotient.leq_contains(induced.apply(x), induced.apply(y))
            {
                order_ok = Some(vec![x, y]);
                break 'ord;
            }
        }
    }
    rep.record("induced_order_preserving", order_ok);

    // Commutation.
    let mut comm = None;
    for a in 0..s.size() {
        if induced.apply(q.class_of[a]) != tq.class_of[f.apply(a)] {
            comm = Some(vec![a]);
            break;
        }
    }
    rep.record("diagram_commutes", comm);

    // Uniqueness: the projection is surjective on classes, so any map
    // agreeing with the diagram is determined pointwise.
    let mut hit = vec![false; k];
    for a in 0..s.size() {
        hit[q.class_of[a]] = true;
    }
    rep.record_bool("uniqueness", hit.iter().all(|&b| b), vec![]);

    Ok(rep)
}

/// Invariant ideal machinery: the invariant closed ideal lattice, the
/// smallest invariant closed ideal containing an element, and minimality of
/// the action.
#[derive(Clone, Debug)]
pub struct GIdeals {
    pub invariant_closed: Vec<Ideal>,
    pub minimal: bool,
}

pub fn invariant_closed_ideals(
    s: &WSemigroup,
    g: &GroupAction,
    budget: usize,
) -> Result<Vec<Ideal>> {
    let all = enumerate_ideals(s, true, budget)?;
    Ok(all
        .into_iter()
        .filter(|i| {
            g.generators.iter().all(|perm| {
                (0..s.size()).all(|a| !i.contains(a) || i.contains(perm[a]))
            })
        })
        .collect())
}

/// The smallest invariant closed ideal containing `a`: elements whose
/// approximants sit below some finite sum of translates of `a`.
pub fn invariant_principal(s: &WSemigroup, g: &GroupAction, a: usize) -> Ideal {
    let n = s.size();
    // All sums of one or more translates of a.
    let translates: BTreeSet<usize> = g.elements.iter().map(|perm| perm[a]).collect();
    let mut sums: BTreeSet<usize> = translates.clone();
    loop {
        let mut grew = false;
        let snapshot: Vec<usize> = sums.iter().copied().collect();
        for &x in &snapshot {
            for &t in &translates {
                if sums.insert(s.monoid.add(x, t)) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut mask = 0u64;
    for z in 0..n {
        let ok = (0..n).all(|zp| {
            !s.prec.contains(zp, z) || sums.iter().any(|&w| s.prec.contains(zp, w))
        });
        if ok {
            mask |= 1 << z;
        }
    }
    let ideal = Ideal { mask };
    debug_assert!(is_closed_ideal(s, ideal));
    ideal
}

pub fn g_ideal_ops(s: &WSemigroup, g: &GroupAction, budget: usize) -> Result<GIdeals> {
    let invariant_closed = invariant_closed_ideals(s, g, budget)?;
    let minimal = (0..s.size()).all(|a| {
        s.equivalent(a, s.zero()) || invariant_principal(s, g, a).count() as usize == s.size()
    });
    Ok(GIdeals {
        invariant_closed,
        minimal,
    })
}

/// Compatibility battery for an invariant closed ideal: the image is a
/// closed ideal of the dynamical quotient, image/preimage is a lattice
/// bijection, the two quotient routes agree, and principal invariant ideals
/// project onto principal ideals.
pub fn dyn_ideal_compat_check(
    s: &WSemigroup,
    g: &GroupAction,
    i: Ideal,
    budget: usize,
) -> Result<AxiomReport> {
    let mut rep = AxiomReport::new("dyn_ideal_compat");
    let invariant = g
        .generators
        .iter()
        .all(|perm| (0..s.size()).all(|a| !i.contains(a) || i.contains(perm[a])));
    if !invariant || !is_closed_ideal(s, i) {
        return Err(Error::Precondition(
            "ideal must be invariant and closed".into(),
        ));
    }

    let q = dyn_quotient(s, g)?;
    let qs = &q.quotient;

    // Image of the ideal in the quotient.
    let mut image_mask = 0u64;
    for a in i.members(s.size()) {
        image_mask |= 1 << q.class_of[a];
    }
    let image = Ideal { mask: image_mask };
    rep.record_bool(
        "image_is_closed_ideal",
        is_closed_ideal(qs, image),
        vec![image.mask as usize],
    );

    // Lattice bijection between invariant closed ideals and closed ideals
    // of the quotient.
    let invariant_ideals = invariant_closed_ideals(s, g, budget)?;
    let quotient_ideals = enumerate_ideals(qs, true, budget)?;
    let mut images: Vec<Ideal> = invariant_ideals
        .iter()
        .map(|&j| {
            let mut m = 0u64;
            for a in j.members(s.size()) {
                m |= 1 << q.class_of[a];
            }
            Ideal { mask: m }
        })
        .collect();
    images.sort();
    images.dedup();
    let injective = images.len() == invariant_ideals.len();
    let surjective = images == quotient_ideals;
    rep.record_bool("lattice_bijection_injective", injective, vec![]);
    rep.record_bool("lattice_bijection_surjective", surjective, vec![]);
    // Preimage inverts the image map.
    let mut preimage_ok = None;
    for &j in &invariant_ideals {
        let mut m = 0u64;
        for a in j.members(s.size()) {
            m |= 1 << q.class_of[a];
        }
        let back: u64 = (0..s.size())
            .filter(|&a| m & (1 << q.class_of[a]) != 0)
            .fold(0, |acc, a| acc | (1 << a));
        if back != j.mask {
            preimage_ok = Some(vec![j.mask as usize]);
            break;
        }
    }
    rep.record("preimage_inverts_image", preimage_ok);

    // Two-stage quotient isomorphism: (S/G)/(I/G) vs (S/I)/G, compared
    // through the elementwise class maps and verified as a W-isomorphism.
    let (route_a, quot_a) = {
        let by_image = quotient(qs, &pair_of_ideal(qs, image))?;
        let classes: Vec<usize> = (0..s.size())
            .map(|a| by_image.class_of[q.class_of[a]])
            .collect();
        (classes, by_image.quotient)
    };
    let (route_b, quot_b) = {
        let by_ideal = quotient(s, &pair_of_ideal(s, i))?;
        // The action descends to S/I.
        let mut class_perms = Vec::new();
        for perm in &g.generators {
            let k = by_ideal.reps.len();
            let mut cperm = vec![0usize; k];
            for (ci, &r) in by_ideal.reps.iter().enumerate() {
                cperm[ci] = by_ideal.class_of[perm[r]];
            }
            for a in 0..s.size() {
                if by_ideal.class_of[perm[a]] != cperm[by_ideal.class_of[a]] {
                    return Err(Error::Precondition(format!(
                        "action does not descend to the ideal quotient at {a}"
                    )));
                }
            }
            class_perms.push(cperm);
        }
        let g2 = validate_action(&by_ideal.quotient, &class_perms, DEFAULT_GROUP_CAP)?;
        let dq = dyn_quotient(&by_ideal.quotient, &g2)?;
        let classes: Vec<usize> = (0..s.size())
            .map(|a| dq.class_of[by_ideal.class_of[a]])
            .collect();
        (classes, dq.quotient)
    };
    let same_partition = (0..s.size()).all(|a| {
        (0..s.size()).all(|b| (route_a[a] == route_a[b]) == (route_b[a] == route_b[b]))
    });
    rep.record_bool("two_stage_iso_classes", same_partition, vec![]);
    if same_partition {
        // The induced class bijection preserves addition and the relation.
        let mut map = vec![usize::MAX; quot_a.size()];
        for a in 0..s.size() {
            map[route_a[a]] = route_b[a];
        }
        rep.record_bool(
            "two_stage_iso_structure",
            map.iter().all(|&x| x != usize::MAX)
                && crate::iso::verify_iso(&quot_a, &quot_b, &map),
            vec![],
        );
    }

    // Principal identity: the projection of the smallest invariant closed
    // ideal of `a` equals the principal ideal of the class of `a`.
    let mut principal_ok = None;
    for a in 0..s.size() {
        let inv = invariant_principal(s, g, a);
        let mut proj = 0u64;
        for x in inv.members(s.size()) {
            proj |= 1 << q.class_of[x];
        }
        if (Ideal { mask: proj }) != principal(qs, q.class_of[a]) {
            principal_ok = Some(vec![a]);
            break;
        }
    }
    rep.record("principal_identity", principal_ok);

    // Minimality of the action matches simplicity of the quotient.
    let ops = g_ideal_ops(s, g, budget)?;
    rep.record_bool(
        "minimal_iff_quotient_simple",
        ops.minimal == is_simple(qs),
        vec![],
    );

    Ok(rep)
}

/// The swap action on a square product fixture of component size `m`
/// (carrier indices are base-m pairs).
pub fn swap_generators(m: usize) -> Vec<Vec<usize>> {
    let n = m * m;
    vec![(0..n).map(|i| (i % m) * m + i / m).collect()]
}

/// Cyclic coordinate shift on an m^w product fixture.
pub fn shift_generators(m: usize, w: usize) -> Vec<Vec<usize>> {
    let n = m.pow(w as u32);
    let unrank = |mut i: usize| -> Vec<usize> {
        let mut c = vec![0; w];
        for slot in c.iter_mut().rev() {
            *slot = i % m;
            i /= m;
        }
        c
    };
    let rank = |c: &[usize]| -> usize { c.iter().fold(0, |acc, &x| acc * m + x) };
    vec![(0..n)
        .map(|i| {
            let mut c = unrank(i);
            c.rotate_left(1);
            rank(&c)
        })
        .collect()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::{closure, generated_ideal, DEFAULT_BUDGET};
    use crate::wsemi::{make_fixture, FixtureSpec};

    fn nbar_sq(k: usize) -> WSemigroup {
        make_fixture(&FixtureSpec::Prod(vec![
            FixtureSpec::Nbar(k),
            FixtureSpec::Nbar(k),
        ]))
        .unwrap()
    }

    #[test]
    fn swap_action_has_order_two() {
        let s = nbar_sq(2);
        let g = validate_action(&s, &swap_generators(3), DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn cyclic_shift_has_order_three() {
        let s = make_fixture(&FixtureSpec::Prod(vec![
            FixtureSpec::Nbar(1),
            FixtureSpec::Nbar(1),
            FixtureSpec::Nbar(1),
        ]))
        .unwrap();
        let g = validate_action(&s, &shift_generators(2, 3), DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(g.order(), 3);
    }

    #[test]
    fn addition_breaking_permutation_rejected() {
        let s = make_fixture(&FixtureSpec::Nbar(2)).unwrap();
        // Transposing 1 and 2 breaks 1 + 1 = 2.
        let bad = vec![vec![0, 2, 1]];
        match validate_action(&s, &bad, DEFAULT_GROUP_CAP) {
            Err(Error::InvalidAction(msg)) => assert!(msg.contains("addition")),
            other => panic!("expected InvalidAction, got {other:?}"),
        }
    }

    #[test]
    fn group_cap_is_enforced() {
        let s = nbar_sq(1);
        match validate_action(&s, &swap_generators(2), 1) {
            Err(Error::Budget(_)) => {}
            other => panic!("expected a budget error, got {other:?}"),
        }
    }

    #[test]
    fn orbit_relation_of_trivial_group_is_identity() {
        let s = make_fixture(&FixtureSpec::Nbar(2)).unwrap();
        let g = GroupAction::trivial(3);
        assert_eq!(orbit_relation(&s, &g), Relation::identity(3));
    }

    #[test]
    fn orbit_relation_is_left_continuous() {
        for (s, gens) in [
            (nbar_sq(2), swap_generators(3)),
            (
                make_fixture(&FixtureSpec::Prod(vec![
                    FixtureSpec::lat_antichain(1),
                    FixtureSpec::lat_antichain(1),
                ]))
                .unwrap(),
                swap_generators(2),
            ),
        ] {
            let g = validate_action(&s, &gens, DEFAULT_GROUP_CAP).unwrap();
            let orbit = orbit_relation(&s, &g);
            let leq = s.leq().clone();
            let profile =
                crate::rel::classify(&orbit, &s.prec, &leq, &s.monoid, (1, 1)).unwrap();
            assert!(profile.left_prec_continuous);
            assert!(profile.prec_almost_transitive);
        }
    }

    #[test]
    fn orbit_relation_swap_on_nbar1_sq() {
        let s = nbar_sq(1);
        let g = validate_action(&s, &swap_generators(2), DEFAULT_GROUP_CAP).unwrap();
        let orbit = orbit_relation(&s, &g);
        // (0,1) ~ (1,0): indices 1 and 2.
        assert!(orbit.contains(1, 2));
        assert!(orbit.contains(2, 1));
        assert!(crate::rel::is_reflexive(&orbit));
        assert!(crate::rel::is_symmetric(&orbit));
    }

    #[test]
    fn trivial_action_gives_minimal_pair() {
        for spec in [
            FixtureSpec::Nbar(2),
            FixtureSpec::lat_antichain(2),
            FixtureSpec::Prod(vec![FixtureSpec::Nbar(1), FixtureSpec::Nbar(1)]),
        ] {
            let s = make_fixture(&spec).unwrap();
            let g = GroupAction::trivial(s.size());
            let pair = dyn_pair(&s, &g).unwrap().pair;
            assert_eq!(pair, minimal_pair(&s), "{}", spec.label());
        }
    }

    #[test]
    fn dyn_pair_contains_orbit_and_order() {
        let s = nbar_sq(2);
        let g = validate_action(&s, &swap_generators(3), DEFAULT_GROUP_CAP).unwrap();
        let pair = dyn_pair(&s, &g).unwrap().pair;
        assert!(orbit_relation(&s, &g).is_subset(&pair.order));
        assert!(s.leq().is_subset(&pair.order));
        // (1,1) below (2,0): (1,1) = (1,0) + (0,1), and (0,1) ~ (1,0).
        let idx = |x: usize, y: usize| 3 * x + y;
        assert!(pair.order.contains(idx(1, 1), idx(2, 0)));
    }

    #[test]
    fn flagship_quotient_is_nbar_k() {
        for k in 1..=3 {
            let s = nbar_sq(k);
            let m = k + 1;
            let g = validate_action(&s, &swap_generators(m), DEFAULT_GROUP_CAP).unwrap();
            let q = dyn_quotient(&s, &g).unwrap();
            assert_eq!(q.quotient.size(), k + 1, "k={k}");
            // class((x, y)) is determined by min(x + y, k).
            for x in 0..m {
                for y in 0..m {
                    for x2 in 0..m {
                        for y2 in 0..m {
                            let same =
                                q.class_of[x * m + y] == q.class_of[x2 * m + y2];
                            assert_eq!(same, (x + y).min(k) == (x2 + y2).min(k));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn shift_on_boolean_cube_collapses_to_two_classes() {
        // Rotations of a single bit OR together to any weight, so every
        // nonzero element is dynamically equivalent: chains like
        // (1,1,0) <= (1,0,0) OR rot(0,1,0) witness the collapse.
        let s = make_fixture(&FixtureSpec::Prod(vec![
            FixtureSpec::Nbar(1),
            FixtureSpec::Nbar(1),
            FixtureSpec::Nbar(1),
        ]))
        .unwrap();
        let g = validate_action(&s, &shift_generators(2, 3), DEFAULT_GROUP_CAP).unwrap();
        let q = dyn_quotient(&s, &g).unwrap();
        assert_eq!(q.quotient.size(), 2);
        assert_eq!(q.class_of, vec![0, 1, 1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn universal_property_flagship() {
        let k = 2;
        let s = nbar_sq(k);
        let line = make_fixture(&FixtureSpec::Nbar(k)).unwrap();
        let m = k + 1;
        let map: Vec<usize> = (0..s.size()).map(|i| (i / m + i % m).min(k)).collect();
        let f = WMorphism::new(s.clone(), line, map).unwrap();
        let g = validate_action(&s, &swap_generators(m), DEFAULT_GROUP_CAP).unwrap();
        let rep = universal_property_check(&s, &g, &f).unwrap();
        assert!(rep.all_passed(), "{rep:?}");
    }

    #[test]
    fn universal_property_zero_morphism() {
        let s = nbar_sq(1);
        let line = make_fixture(&FixtureSpec::Nbar(1)).unwrap();
        let f = WMorphism::new(s.clone(), line, vec![0; 4]).unwrap();
        let g = validate_action(&s, &swap_generators(2), DEFAULT_GROUP_CAP).unwrap();
        let rep = universal_property_check(&s, &g, &f).unwrap();
        assert!(rep.all_passed(), "{rep:?}");
    }

    #[test]
    fn invariant_principal_reduces_to_principal_for_trivial_action() {
        let s = nbar_sq(1);
        let g = GroupAction::trivial(4);
        for a in 0..4 {
            assert_eq!(invariant_principal(&s, &g, a), principal(&s, a));
        }
    }

    #[test]
    fn swap_makes_product_minimal() {
        // On NBAR(1)^2 with swap: (0,1) prec (1,0) + swap((1,0)) = (1,1).
        let s = nbar_sq(1);
        let g = validate_action(&s, &swap_generators(2), DEFAULT_GROUP_CAP).unwrap();
        let ops = g_ideal_ops(&s, &g, DEFAULT_BUDGET).unwrap();
        assert!(ops.minimal);
        // Without the action the product is not simple.
        assert!(!is_simple(&s));
    }

    #[test]
    fn dyn_ideal_compat_on_trivial_ideals() {
        let s = nbar_sq(2);
        let g = validate_action(&s, &swap_generators(3), DEFAULT_GROUP_CAP).unwrap();
        let zero = closure(&s, generated_ideal(&s, 0));
        let full = Ideal {
            mask: (1 << s.size()) - 1,
        };
        for i in [zero, full] {
            let rep = dyn_ideal_compat_check(&s, &g, i, DEFAULT_BUDGET).unwrap();
            assert!(rep.all_passed(), "{rep:?}");
        }
    }

    #[test]
    fn dyn_ideal_compat_on_diagonal_ideal() {
        // PROD(NBAR(2), NBAR(2)) with swap; the invariant ideal generated by
        // (1, 1) is everything reachable below its multiples.
        let s = nbar_sq(2);
        let g = validate_action(&s, &swap_generators(3), DEFAULT_GROUP_CAP).unwrap();
        let idx = |x: usize, y: usize| 3 * x + y;
        let diag = invariant_principal(&s, &g, idx(1, 1));
        let rep = dyn_ideal_compat_check(&s, &g, diag, DEFAULT_BUDGET).unwrap();
        assert!(rep.all_passed(), "{rep:?}");
    }
}
