//! Finite W-semigroups: commutative monoids carrying a transitive relation
//! `prec`, validated against the W-axioms, plus morphisms and fixtures.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rel::{
    self, compose, induced_preorder, is_reflexive, is_transitive, Relation,
};
use crate::report::AxiomReport;

/// A finite commutative monoid given by its full addition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMonoid {
    size: usize,
    zero: usize,
    add: Vec<usize>, // row-major n x n
}

impl FiniteMonoid {
    /// Validates commutativity, associativity and the identity exhaustively.
    pub fn new(size: usize, zero: usize, add: Vec<usize>) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidMonoid("empty carrier".into()));
        }
        if add.len() != size * size {
            return Err(Error::InvalidMonoid(format!(
                "addition table has {} entries, expected {}",
                add.len(),
                size * size
            )));
        }
        if zero >= size || add.iter().any(|&x| x >= size) {
            return Err(Error::InvalidMonoid("index out of range".into()));
        }
        let m = FiniteMonoid { size, zero, add };
        for a in 0..size {
            if m.add(zero, a) != a {
                return Err(Error::InvalidMonoid(format!("0 + {a} != {a}")));
            }
            for b in 0..size {
                if m.add(a, b) != m.add(b, a) {
                    return Err(Error::InvalidMonoid(format!("{a} + {b} not commutative")));
                }
                for c in 0..size {
                    if m.add(m.add(a, b), c) != m.add(a, m.add(b, c)) {
                        return Err(Error::InvalidMonoid(format!(
                            "({a} + {b}) + {c} not associative"
                        )));
                    }
                }
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn zero(&self) -> usize {
        self.zero
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b]
    }

    /// n-fold sum of `a`, n >= 0.
    pub fn multiple(&self, a: usize, n: usize) -> usize {
        let mut acc = self.zero;
        for _ in 0..n {
            acc = self.add(acc, a);
        }
        acc
    }

    /// The set `{n * a : n >= 1}`, closed by cycle detection.
    pub fn multiples(&self, a: usize) -> Vec<usize> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        let mut cur = a;
        loop {
            if seen[cur] {
                break;
            }
            seen[cur] = true;
            out.push(cur);
            cur = self.add(cur, a);
        }
        out
    }
}

/// A finite W-semigroup: monoid plus the distinguished transitive relation.
/// The induced preorder (down-set containment for `prec`) and the per-element
/// W1 witness are computed once at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WSemigroup {
    pub monoid: FiniteMonoid,
    pub prec: Relation,
    leq: Relation,
    cofinal: Vec<Option<usize>>,
}

impl WSemigroup {
    pub fn new(monoid: FiniteMonoid, prec: Relation) -> Result<Self> {
        if prec.size() != monoid.size() {
            return Err(Error::SizeMismatch {
                left: prec.size(),
                right: monoid.size(),
            });
        }
        let leq = induced_preorder(&prec);
        let cofinal = compute_cofinal(&prec);
        Ok(WSemigroup {
            monoid,
            prec,
            leq,
            cofinal,
        })
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.monoid.size()
    }

    #[inline]
    pub fn zero(&self) -> usize {
        self.monoid.zero()
    }

    /// The induced preorder: `a <= b` iff the prec-down-set of `a` is
    /// contained in that of `b`.
    #[inline]
    pub fn leq(&self) -> &Relation {
        &self.leq
    }

    /// The distinguished W1 witness below `a`: the smallest `c` with
    /// `c prec a`, `c prec c`, and every `b prec a` satisfying `b prec c`.
    /// `None` when W1 fails at `a`.
    pub fn cofinal_below(&self, a: usize) -> Option<usize> {
        self.cofinal[a]
    }

    pub fn leq_contains(&self, a: usize, b: usize) -> bool {
        self.leq.contains(a, b)
    }

    /// Mutual `leq`: the equivalence used by antisymmetrization.
    pub fn equivalent(&self, a: usize, b: usize) -> bool {
        self.leq.contains(a, b) && self.leq.contains(b, a)
    }
}

fn compute_cofinal(prec: &Relation) -> Vec<Option<usize>> {
    let n = prec.size();
    let t = prec.transpose();
    (0..n)
        .map(|a| {
            (0..n).find(|&c| {
                prec.contains(c, a) && prec.contains(c, c) && t.row_subset(a, &t, c)
            })
        })
        .collect()
}

/// W-axioms on a finite carrier.
///
/// W1 uses the finite criterion: an infinite prec-increasing cofinal sequence
/// below `a` must enter a mutual-prec cycle, and any cycle element serves as
/// a single self-related cofinal bound.
pub fn check_w_axioms(s: &WSemigroup) -> AxiomReport {
    let mut rep = AxiomReport::new("w_axioms");
    let n = s.size();
    let prec = &s.prec;

    let sq = compose(prec, prec).expect("same carrier");
    rep.record("transitive", sq.subset_witness(prec).map(|(a, b)| vec![a, b]));

    let zero_bad = (0..n).find(|&a| !prec.contains(s.zero(), a));
    rep.record("zero_below_all", zero_bad.map(|a| vec![a]));

    let w1_bad = (0..n).find(|&a| s.cofinal_below(a).is_none());
    rep.record("w1", w1_bad.map(|a| vec![a]));

    // W3: prec is additively closed.
    let mut w3_witness = None;
    'w3: for (a1, b1) in prec.pairs() {
        for (a2, b2) in prec.pairs() {
            if !prec.contains(s.monoid.add(a1, a2), s.monoid.add(b1, b2)) {
                w3_witness = Some(vec![a1, b1, a2, b2]);
                break 'w3;
            }
        }
    }
    rep.record("w3_additive", w3_witness);

    // W4: decomposition below sums.
    let mut w4_witness = None;
    'w4: for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if !prec.contains(a, s.monoid.add(b, c)) {
                    continue;
                }
                let ok = (0..n).any(|bp| {
                    prec.contains(bp, b)
                        && (0..n).any(|cp| {
                            prec.contains(cp, c) && prec.contains(a, s.monoid.add(bp, cp))
                        })
                });
                if !ok {
                    w4_witness = Some(vec![a, b, c]);
                    break 'w4;
                }
            }
        }
    }
    rep.record("w4_decomposition", w4_witness);

    // Density is implied by W1; report it for diagnostics.
    rep.record(
        "dense",
        prec.subset_witness(&sq).map(|(a, b)| vec![a, b]),
    );

    rep
}

/// W2 for an explicit pair: every `a` is the `order`-supremum of its
/// `aux`-down-set.
pub fn check_w2(s: &WSemigroup, aux: &Relation, order: &Relation) -> AxiomReport {
    let mut rep = AxiomReport::new("w2");
    let n = s.size();
    let mut witness = None;
    'outer: for a in 0..n {
        for c in 0..n {
            let bounds_all = (0..n).all(|b| !aux.contains(b, a) || order.contains(b, c));
            if bounds_all && !order.contains(a, c) {
                witness = Some(vec![a, c]);
                break 'outer;
            }
        }
    }
    rep.record("w2_sup", witness);
    rep
}

/// Generic compact containment over a preorder on a finite carrier:
/// `a` is way below `b` iff every `c` above `b` dominates `a`. Increasing
/// sequences in a finite preorder have their terminal values as suprema,
/// which reduces the sequence quantifier to this form.
pub fn waybelow(order: &Relation) -> Relation {
    let n = order.size();
    let mut out = Relation::empty(n);
    for a in 0..n {
        for b in 0..n {
            if (0..n).all(|c| !order.contains(b, c) || order.contains(a, c)) {
                out.insert(a, b);
            }
        }
    }
    out
}

/// Cu-axioms O1-O4 interpreted on the finite carrier, over the induced order.
pub fn check_cu_axioms(s: &WSemigroup) -> AxiomReport {
    let mut rep = AxiomReport::new("cu_axioms");
    let n = s.size();
    let leq = s.leq();

    // Positively ordered monoid precheck.
    let anti = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .find(|&(a, b)| a != b && leq.contains(a, b) && leq.contains(b, a));
    rep.record("order_antisymmetric", anti.map(|(a, b)| vec![a, b]));
    let zero_bad = (0..n).find(|&a| !leq.contains(s.zero(), a));
    rep.record("zero_least", zero_bad.map(|a| vec![a]));
    let mut mono = None;
    'mono: for (a, b) in leq.pairs() {
        for (c, d) in leq.pairs() {
            if !leq.contains(s.monoid.add(a, c), s.monoid.add(b, d)) {
                mono = Some(vec![a, b, c, d]);
                break 'mono;
            }
        }
    }
    rep.record("addition_monotone", mono.clone());

    // O1. On a finite preorder every directed subset contains an upper bound
    // of itself, which is then a supremum; exhaustively confirmed on small
    // carriers.
    if !is_reflexive(leq) || !is_transitive(leq) {
        rep.fail("o1_directed_suprema", vec![]);
    } else if n <= 12 {
        rep.record("o1_directed_suprema", o1_exhaustive(leq));
    } else {
        rep.pass("o1_directed_suprema");
    }

    let wb = waybelow(leq);

    // O2: every element is the supremum of a waybelow-increasing sequence;
    // on a finite carrier the constant sequence at `a` works iff `a << a`.
    let o2_bad = (0..n).find(|&a| !wb.contains(a, a));
    rep.record("o2_compact_approximation", o2_bad.map(|a| vec![a]));

    // O3: compact containment is additive.
    let mut o3 = None;
    'o3: for (a1, b1) in wb.pairs() {
        for (a2, b2) in wb.pairs() {
            if !wb.contains(s.monoid.add(a1, a2), s.monoid.add(b1, b2)) {
                o3 = Some(vec![a1, b1, a2, b2]);
                break 'o3;
            }
        }
    }
    rep.record("o3_waybelow_additive", o3);

    // O4: suprema of increasing sequences add. On a finite carrier suprema
    // are terminal values, so this is addition monotonicity on chains.
    rep.record("o4_suprema_additive", mono);

    rep
}

fn o1_exhaustive(leq: &Relation) -> Option<Vec<usize>> {
    let n = leq.size();
    for mask in 1u32..(1u32 << n) {
        let members: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let directed = members.iter().all(|&x| {
            members.iter().all(|&y| {
                members
                    .iter()
                    .any(|&z| leq.contains(x, z) && leq.contains(y, z))
            })
        });
        if !directed {
            continue;
        }
        // A supremum: an upper bound below every upper bound.
        let has_sup = (0..n).any(|u| {
            members.iter().all(|&x| leq.contains(x, u))
                && (0..n).all(|v| {
                    !members.iter().all(|&x| leq.contains(x, v)) || leq.contains(u, v)
                })
        });
        if !has_sup {
            return Some(members);
        }
    }
    None
}

/// A W-morphism between finite W-semigroups: an index map together with the
/// semigroups it connects.
#[derive(Clone, Debug)]
pub struct WMorphism {
    pub source: WSemigroup,
    pub target: WSemigroup,
    pub map: Vec<usize>,
}

impl WMorphism {
    pub fn new(source: WSemigroup, target: WSemigroup, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.size() {
            return Err(Error::SizeMismatch {
                left: map.len(),
                right: source.size(),
            });
        }
        if map.iter().any(|&x| x >= target.size()) {
            return Err(Error::Precondition("morphism image out of range".into()));
        }
        Ok(WMorphism {
            source,
            target,
            map,
        })
    }

    pub fn identity(s: &WSemigroup) -> Self {
        WMorphism {
            source: s.clone(),
            target: s.clone(),
            map: (0..s.size()).collect(),
        }
    }

    #[inline]
    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn compose_with(&self, then: &WMorphism) -> WMorphism {
        WMorphism {
            source: self.source.clone(),
            target: then.target.clone(),
            map: self.map.iter().map(|&a| then.apply(a)).collect(),
        }
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.size()];
        for &x in &self.map {
            hit[x] = true;
        }
        hit.into_iter().all(|b| b)
    }
}

/// Validates additivity, zero preservation, monotonicity and continuity of a
/// morphism candidate, with lexicographically minimal failure witnesses.
pub fn check_morphism(f: &WMorphism) -> AxiomReport {
    let mut rep = AxiomReport::new("morphism");
    let ns = f.source.size();
    let sm = &f.source.monoid;
    let tm = &f.target.monoid;

    rep.record_bool(
        "zero_preserved",
        f.apply(f.source.zero()) == f.target.zero(),
        vec![f.source.zero()],
    );

    let mut additive = None;
    'add: for a in 0..ns {
        for b in 0..ns {
            if f.apply(sm.add(a, b)) != tm.add(f.apply(a), f.apply(b)) {
                additive = Some(vec![a, b]);
                break 'add;
            }
        }
    }
    rep.record("additive", additive);

    let mono = f
        .source
        .prec
        .pairs()
        .into_iter()
        .find(|&(a, b)| !f.target.prec.contains(f.apply(a), f.apply(b)));
    rep.record("monotone", mono.map(|(a, b)| vec![a, b]));

    // Continuity: every y prec f(a) is dominated through some a' prec a.
    let nt = f.target.size();
    let mut cont = None;
    'cont: for a in 0..ns {
        for y in 0..nt {
            if !f.target.prec.contains(y, f.apply(a)) {
                continue;
            }
            let ok = (0..ns).any(|ap| {
                f.source.prec.contains(ap, a) && f.target.prec.contains(y, f.apply(ap))
            });
            if !ok {
                cont = Some(vec![a, y]);
                break 'cont;
            }
        }
    }
    rep.record("continuous", cont);

    rep
}

/// Fixture constructors. Carriers stay small; these approximate the familiar
/// examples (truncated counting semigroups, lattices of open sets, products).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FixtureSpec {
    /// `{0..k}` with saturating addition and the total order.
    Nbar(usize),
    /// `{0..k, inf}` with overflow to infinity.
    Ninf(usize),
    /// Down-sets of a finite poset under union, ordered by containment.
    /// Pairs are `(lower, upper)` in the generating poset.
    Lat {
        poset_size: usize,
        poset_leq: Vec<(usize, usize)>,
    },
    /// Componentwise product.
    Prod(Vec<FixtureSpec>),
}

impl FixtureSpec {
    /// 2-antichain lattice: the 4-element Boolean lattice under join.
    pub fn lat_antichain(k: usize) -> FixtureSpec {
        FixtureSpec::Lat {
            poset_size: k,
            poset_leq: vec![],
        }
    }

    /// A chain poset of length k (gives the k+1 element chain lattice).
    pub fn lat_chain(k: usize) -> FixtureSpec {
        FixtureSpec::Lat {
            poset_size: k,
            poset_leq: (0..k.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            FixtureSpec::Nbar(k) => format!("NBAR({k})"),
            FixtureSpec::Ninf(k) => format!("NINF({k})"),
            FixtureSpec::Lat {
                poset_size,
                poset_leq,
            } => format!("LAT({poset_size};{})", poset_leq.len()),
            FixtureSpec::Prod(parts) => {
                let inner: Vec<String> = parts.iter().map(|p| p.label()).collect();
                format!("PROD({})", inner.join(","))
            }
        }
    }
}

pub fn make_fixture(spec: &FixtureSpec) -> Result<WSemigroup> {
    match spec {
        FixtureSpec::Nbar(k) => {
            let n = k + 1;
            let mut add = vec![0; n * n];
            for a in 0..n {
                for b in 0..n {
                    add[a * n + b] = (a + b).min(*k);
                }
            }
            let mut prec = Relation::empty(n);
            for a in 0..n {
                for b in a..n {
                    prec.insert(a, b);
                }
            }
            WSemigroup::new(FiniteMonoid::new(n, 0, add)?, prec)
        }
        FixtureSpec::Ninf(k) => {
            let n = k + 2; // 0..k plus infinity at index k+1
            let inf = k + 1;
            let mut add = vec![0; n * n];
            for a in 0..n {
                for b in 0..n {
                    add[a * n + b] = if a == inf || b == inf || a + b > *k {
                        inf
                    } else {
                        a + b
                    };
                }
            }
            let mut prec = Relation::empty(n);
            for a in 0..n {
                for b in a..n {
                    prec.insert(a, b);
                }
            }
            WSemigroup::new(FiniteMonoid::new(n, 0, add)?, prec)
        }
        FixtureSpec::Lat {
            poset_size,
            poset_leq,
        } => {
            let p = *poset_size;
            if p > 16 {
                return Err(Error::InvalidFixture(format!(
                    "poset too large for LAT fixture: {p}"
                )));
            }
            for &(a, b) in poset_leq {
                if a >= p || b >= p {
                    return Err(Error::InvalidFixture(format!(
                        "poset pair ({a},{b}) out of range"
                    )));
                }
            }
            // Reflexive-transitive closure of the given poset relation.
            let base = Relation::from_pairs(p.max(1), poset_leq);
            let poset = rel::preorder_closure(&base);
            // Down-sets as bitmasks, ascending.
            let mut downsets: Vec<u32> = Vec::new();
            for mask in 0..(1u32 << p) {
                let is_down = (0..p).all(|b| {
                    mask & (1 << b) == 0
                        || (0..p).all(|a| !poset.contains(a, b) || mask & (1 << a) != 0)
                });
                if is_down {
                    downsets.push(mask);
                }
            }
            let n = downsets.len();
            let index_of = |m: u32| downsets.binary_search(&m).expect("closed under union");
            let mut add = vec![0; n * n];
            for (i, &di) in downsets.iter().enumerate() {
                for (j, &dj) in downsets.iter().enumerate() {
                    add[i * n + j] = index_of(di | dj);
                }
            }
            let mut prec = Relation::empty(n);
            for (i, &di) in downsets.iter().enumerate() {
                for (j, &dj) in downsets.iter().enumerate() {
                    if di & !dj == 0 {
                        prec.insert(i, j);
                    }
                }
            }
            let zero = index_of(0);
            WSemigroup::new(FiniteMonoid::new(n, zero, add)?, prec)
        }
        FixtureSpec::Prod(parts) => {
            if parts.is_empty() {
                return Err(Error::InvalidFixture("empty product".into()));
            }
            let comps: Vec<WSemigroup> = parts.iter().map(make_fixture).collect::<Result<_>>()?;
            let sizes: Vec<usize> = comps.iter().map(|c| c.size()).collect();
            let n: usize = sizes.iter().product();
            if n > rel::MAX_CARRIER {
                return Err(Error::InvalidFixture(format!("product too large: {n}")));
            }
            let unrank = |mut i: usize| -> Vec<usize> {
                let mut coords = vec![0; sizes.len()];
                for (c, &s) in coords.iter_mut().zip(&sizes).rev() {
                    *c = i % s;
                    i /= s;
                }
                coords
            };
            let rank = |coords: &[usize]| -> usize {
                coords
                    .iter()
                    .zip(&sizes)
                    .fold(0, |acc, (&c, &s)| acc * s + c)
            };
            let mut add = vec![0; n * n];
            let mut prec = Relation::empty(n);
            for i in 0..n {
                let ci = unrank(i);
                for j in 0..n {
                    let cj = unrank(j);
                    let sum: Vec<usize> = ci
                        .iter()
                        .zip(&cj)
                        .zip(&comps)
                        .map(|((&a, &b), comp)| comp.monoid.add(a, b))
                        .collect();
                    add[i * n + j] = rank(&sum);
                    if ci
                        .iter()
                        .zip(&cj)
                        .zip(&comps)
                        .all(|((&a, &b), comp)| comp.prec.contains(a, b))
                    {
                        prec.insert(i, j);
                    }
                }
            }
            let zero = rank(&comps.iter().map(|c| c.zero()).collect::<Vec<_>>());
            WSemigroup::new(FiniteMonoid::new(n, zero, add)?, prec)
        }
    }
}

/// Canonical element names for fixtures, used by the I/O layer and reports.
pub fn fixture_names(spec: &FixtureSpec) -> Result<Vec<String>> {
    match spec {
        FixtureSpec::Nbar(k) => Ok((0..=*k).map(|i| i.to_string()).collect()),
        FixtureSpec::Ninf(k) => {
            let mut v: Vec<String> = (0..=*k).map(|i| i.to_string()).collect();
            v.push("inf".to_string());
            Ok(v)
        }
        FixtureSpec::Lat { poset_size, .. } => {
            let p = *poset_size;
            let mut names = Vec::new();
            let s = make_fixture(spec)?;
            // Recompute the down-set masks in the same order as make_fixture.
            let mut downsets: Vec<u32> = Vec::new();
            {
                let base = Relation::from_pairs(
                    p.max(1),
                    match spec {
                        FixtureSpec::Lat { poset_leq, .. } => poset_leq,
                        _ => unreachable!(),
                    },
                );
                let poset = rel::preorder_closure(&base);
                for mask in 0..(1u32 << p) {
                    let is_down = (0..p).all(|b| {
                        mask & (1 << b) == 0
                            || (0..p).all(|a| !poset.contains(a, b) || mask & (1 << a) != 0)
                    });
                    if is_down {
                        downsets.push(mask);
                    }
                }
            }
            debug_assert_eq!(downsets.len(), s.size());
            for mask in downsets {
                let elems: Vec<String> = (0..p)
                    .filter(|&i| mask & (1 << i) != 0)
                    .map(|i| ((b'a' + i as u8) as char).to_string())
                    .collect();
                names.push(if elems.is_empty() {
                    "{}".to_string()
                } else {
                    format!("{{{}}}", elems.join(""))
                });
            }
            Ok(names)
        }
        FixtureSpec::Prod(parts) => {
            let part_names: Vec<Vec<String>> =
                parts.iter().map(fixture_names).collect::<Result<_>>()?;
            let mut names = vec![String::new()];
            for pn in &part_names {
                let mut next = Vec::with_capacity(names.len() * pn.len());
                for prefix in &names {
                    for suffix in pn {
                        next.push(if prefix.is_empty() {
                            suffix.clone()
                        } else {
                            format!("{prefix},{suffix}")
                        });
                    }
                }
                names = next;
            }
            Ok(names.into_iter().map(|n| format!("({n})")).collect())
        }
    }
}
