//! Ideals and closed ideals of a finite W-semigroup, the lattice walk, and
//! the Galois connection with normal closed pairs.

use crate::error::{Error, Result};
use crate::genpair::generate_normal;
use crate::pairs::{classify_pair, pair_leq_unchecked, Pair};
use crate::quotient::{quotient, QuotientResult};
use crate::rel::{compose, Relation};
use crate::report::AxiomReport;
use crate::wsemi::{waybelow, WSemigroup};

/// Carrier cap for ideal machinery; masks are single words.
pub const IDEAL_CARRIER_CAP: usize = 64;

/// Default enumeration budget (carrier size) for ideal lattices.
pub const DEFAULT_BUDGET: usize = 20;

/// A subset of the carrier, as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ideal {
    pub mask: u64,
}

impl Ideal {
    pub fn contains(&self, a: usize) -> bool {
        self.mask & (1 << a) != 0
    }

    pub fn members(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|&a| self.contains(a)).collect()
    }

    pub fn count(&self) -> u32 {
        self.mask.count_ones()
    }
}

fn cap_check(s: &WSemigroup) -> Result<()> {
    if s.size() > IDEAL_CARRIER_CAP {
        return Err(Error::Budget(format!(
            "ideal operations support carriers up to {IDEAL_CARRIER_CAP}, got {}",
            s.size()
        )));
    }
    Ok(())
}

/// Ideal invariants: contains zero, closed under addition, prec-hereditary.
pub fn is_ideal(s: &WSemigroup, i: Ideal) -> bool {
    if !i.contains(s.zero()) {
        return false;
    }
    let n = s.size();
    for a in i.members(n) {
        for b in i.members(n) {
            if !i.contains(s.monoid.add(a, b)) {
                return false;
            }
        }
    }
    for b in i.members(n) {
        for a in 0..n {
            if s.prec.contains(a, b) && !i.contains(a) {
                return false;
            }
        }
    }
    true
}

/// Closedness: membership is determined by prec-approximants.
pub fn is_closed_ideal(s: &WSemigroup, i: Ideal) -> bool {
    if !is_ideal(s, i) {
        return false;
    }
    let n = s.size();
    for a in 0..n {
        if i.contains(a) {
            continue;
        }
        let below_in = (0..n).all(|b| !s.prec.contains(b, a) || i.contains(b));
        if below_in {
            return false;
        }
    }
    true
}

/// The closure of an ideal: everything whose prec-down-set lies inside.
pub fn closure(s: &WSemigroup, i: Ideal) -> Ideal {
    let n = s.size();
    let mut mask = 0u64;
    for a in 0..n {
        let below_in = (0..n).all(|b| !s.prec.contains(b, a) || i.contains(b));
        if below_in {
            mask |= 1 << a;
        }
    }
    Ideal { mask }
}

/// Least ideal containing the seed set: closure under addition and
/// prec-heredity.
pub fn generated_ideal(s: &WSemigroup, seed: u64) -> Ideal {
    let n = s.size();
    let mut mask = seed | (1 << s.zero());
    loop {
        let mut next = mask;
        let members: Vec<usize> = (0..n).filter(|&a| mask & (1 << a) != 0).collect();
        for &a in &members {
            for &b in &members {
                next |= 1 << s.monoid.add(a, b);
            }
        }
        for b in 0..n {
            if next & (1 << b) != 0 {
                for a in 0..n {
                    if s.prec.contains(a, b) {
                        next |= 1 << a;
                    }
                }
            }
        }
        if next == mask {
            return Ideal { mask };
        }
        mask = next;
    }
}

/// All (closed) ideals, by walking joins of principal generated ideals.
/// Every ideal is the join of the ideals generated by its members, so the
/// walk is exhaustive; the result is sorted by mask and closed under
/// intersection.
pub fn enumerate_ideals(s: &WSemigroup, closed_only: bool, budget: usize) -> Result<Vec<Ideal>> {
    cap_check(s)?;
    if s.size() > budget {
        return Err(Error::Budget(format!(
            "carrier size {} exceeds the enumeration budget {budget}",
            s.size()
        )));
    }
    let n = s.size();
    let mut set: std::collections::BTreeSet<u64> = std::collections::BTreeSet::new();
    set.insert(generated_ideal(s, 0).mask);
    for a in 0..n {
        set.insert(generated_ideal(s, 1 << a).mask);
    }
    loop {
        let snapshot: Vec<u64> = set.iter().copied().collect();
        let before = set.len();
        for (i, &x) in snapshot.iter().enumerate() {
            for &y in &snapshot[i + 1..] {
                set.insert(generated_ideal(s, x | y).mask);
            }
        }
        if set.len() == before {
            break;
        }
    }
    let mut out: Vec<Ideal> = if closed_only {
        let closed: std::collections::BTreeSet<u64> = set
            .iter()
            .map(|&m| closure(s, Ideal { mask: m }).mask)
            .collect();
        closed.into_iter().map(|mask| Ideal { mask }).collect()
    } else {
        set.into_iter().map(|mask| Ideal { mask }).collect()
    };
    out.sort();
    debug_assert!(out.iter().all(|&i| if closed_only {
        is_closed_ideal(s, i)
    } else {
        is_ideal(s, i)
    }));
    Ok(out)
}

/// The smallest closed ideal containing `a`: everything whose
/// prec-approximants sit below some multiple of `a`.
pub fn principal(s: &WSemigroup, a: usize) -> Ideal {
    let n = s.size();
    let mults = s.monoid.multiples(a);
    let mut mask = 0u64;
    for b in 0..n {
        let ok = (0..n).all(|bp| {
            !s.prec.contains(bp, b) || mults.iter().any(|&m| s.prec.contains(bp, m))
        });
        if ok {
            mask |= 1 << b;
        }
    }
    let ideal = Ideal { mask };
    debug_assert!(is_closed_ideal(s, ideal));
    ideal
}

pub fn is_order_unit(s: &WSemigroup, a: usize) -> bool {
    principal(s, a).count() as usize == s.size()
}

/// Simplicity: every nonzero element generates everything.
pub fn is_simple(s: &WSemigroup) -> bool {
    (0..s.size()).all(|a| s.equivalent(a, s.zero()) || is_order_unit(s, a))
}

/// The pair of an ideal: `(prec, leq_I)` where `a leq_I b` iff every
/// `x prec a` admits `y` in the ideal with `x prec b + y`.
pub fn pair_of_ideal(s: &WSemigroup, i: Ideal) -> Pair {
    let n = s.size();
    let mut order = Relation::empty(n);
    let members = i.members(n);
    for a in 0..n {
        for b in 0..n {
            let ok = (0..n).all(|x| {
                !s.prec.contains(x, a)
                    || members.iter().any(|&y| s.prec.contains(x, s.monoid.add(b, y)))
            });
            if ok {
                order.insert(a, b);
            }
        }
    }
    Pair::new(s.prec.clone(), order)
}

/// The ideal of a pair: the elements below zero.
pub fn ideal_of_pair(s: &WSemigroup, p: &Pair) -> Ideal {
    let n = s.size();
    let mut mask = 0u64;
    for a in 0..n {
        if p.order.contains(a, s.zero()) {
            mask |= 1 << a;
        }
    }
    Ideal { mask }
}

/// Quotient of a semigroup by a closed ideal.
pub fn quotient_by_ideal(s: &WSemigroup, i: Ideal) -> Result<QuotientResult> {
    quotient(s, &pair_of_ideal(s, i))
}

/// The Galois connection between closed ideals and normal closed pairs,
/// checked against a generated pair corpus.
pub fn galois_check(s: &WSemigroup, budget: usize) -> Result<AxiomReport> {
    let mut rep = AxiomReport::new("galois");
    let leq = s.leq();

    // Hypotheses: O1 (automatic on finite carriers once the induced order is
    // a preorder), prec absorbs the order on the right, prec below waybelow.
    let po = compose(&s.prec, leq)?;
    let hyp_absorb = po.is_subset(&s.prec);
    let wb = waybelow(leq);
    let hyp_wb = s.prec.is_subset(&wb);
    if !hyp_absorb || !hyp_wb {
        rep.skip(
            "hypotheses",
            format!("prec.leq<=prec: {hyp_absorb}, prec<=waybelow: {hyp_wb}"),
        );
        return Ok(rep);
    }
    rep.pass("hypotheses");

    let closed = enumerate_ideals(s, true, budget)?;

    // psi(phi(I)) = I for every closed ideal.
    let mut round_trip = None;
    for &i in &closed {
        let p = pair_of_ideal(s, i);
        let back = ideal_of_pair(s, &p);
        if back != i {
            round_trip = Some(vec![i.mask as usize, back.mask as usize]);
            break;
        }
    }
    rep.record("ideal_round_trip", round_trip);

    // phi(psi(alpha)) <= alpha for generated left-closed normal pairs.
    let mut pair_drop = None;
    let seeds: Vec<Relation> = collapse_seeds(s);
    for (idx, seed) in seeds.iter().enumerate() {
        let g = generate_normal(s, seed)?;
        let p = g.pair;
        let prof = classify_pair(s, &p)?;
        if !prof.is_left_closed() {
            continue;
        }
        let i = ideal_of_pair(s, &p);
        if !is_ideal(s, i) {
            pair_drop = Some(vec![idx]);
            break;
        }
        let back = pair_of_ideal(s, i);
        if !pair_leq_unchecked(&back, &p) {
            pair_drop = Some(vec![idx]);
            break;
        }
    }
    rep.record("pair_round_trip_below", pair_drop);

    // Closed ideals of the prequotient by the minimal pair coincide with
    // closed ideals of the original semigroup.
    let pre = crate::quotient::prequotient(s, &crate::pairs::minimal_pair(s))?;
    let closed_pre = enumerate_ideals(&pre, true, budget)?;
    rep.record_bool(
        "lattice_transfer_prequotient",
        closed == closed_pre,
        vec![],
    );

    // Quotient by an ideal agrees with the quotient by its pair, and with
    // the direct one-step order (exists y in I with a <= b + y).
    let mut quot_mismatch = None;
    for &i in &closed {
        let via_pair = quotient_by_ideal(s, i)?;
        let n = s.size();
        let mut direct = Relation::empty(n);
        for a in 0..n {
            for b in 0..n {
                if i.members(n)
                    .iter()
                    .any(|&y| leq.contains(a, s.monoid.add(b, y)))
                {
                    direct.insert(a, b);
                }
            }
        }
        let pair_order = pair_of_ideal(s, i).order;
        if direct != pair_order {
            quot_mismatch = Some(vec![i.mask as usize]);
            break;
        }
        // Classes of the direct order match the computed quotient.
        let same = (0..n).all(|a| {
            (0..n).all(|b| {
                (via_pair.class_of[a] == via_pair.class_of[b])
                    == (direct.contains(a, b) && direct.contains(b, a))
            })
        });
        if !same {
            quot_mismatch = Some(vec![i.mask as usize]);
            break;
        }
    }
    rep.record("quotient_by_ideal_agrees", quot_mismatch);

    // Containment equivalence: I inside I_alpha iff alpha_I <= alpha, over
    // closed ideals crossed with ideal pairs.
    let mut containment = None;
    'outer: for &i in &closed {
        for &j in &closed {
            let alpha = pair_of_ideal(s, j);
            let lhs = i.mask & !ideal_of_pair(s, &alpha).mask == 0;
            let rhs = pair_leq_unchecked(&pair_of_ideal(s, i), &alpha);
            if lhs != rhs {
                containment = Some(vec![i.mask as usize, j.mask as usize]);
                break 'outer;
            }
        }
    }
    rep.record("containment_equivalence", containment);

    Ok(rep)
}

/// Deterministic seed relations for pair corpora: single collapses plus a
/// couple of unions. Every returned relation is left prec-continuous on
/// fixtures with reflexive prec.
pub fn collapse_seeds(s: &WSemigroup) -> Vec<Relation> {
    let n = s.size();
    let mut seeds = vec![Relation::empty(n)];
    for a in 0..n.min(6) {
        for b in 0..n.min(6) {
            if a != b {
                seeds.push(Relation::from_pairs(n, &[(a, b)]));
            }
        }
    }
    if n >= 3 {
        seeds.push(Relation::from_pairs(n, &[(1, 0), (2, 1)]));
        seeds.push(Relation::from_pairs(n, &[(n - 1, 0)]));
    }
    seeds
}
