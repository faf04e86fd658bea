//! Isomorphism search between finite W-semigroups: canonical invariants
//! first, bounded backtracking as a fallback.

use crate::wsemi::WSemigroup;

/// How a witness isomorphism was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsoMethod {
    Explicit,
    Canonical,
    Searched,
}

#[derive(Clone, Debug)]
pub struct Iso {
    /// Index map from the first semigroup onto the second.
    pub map: Vec<usize>,
    pub method: IsoMethod,
}

/// Per-element invariant: (down-set size, up-set size, idempotent?,
/// sorted multiset of down-set sizes of addition row).
fn invariant(s: &WSemigroup, a: usize) -> (usize, usize, bool, Vec<usize>) {
    let n = s.size();
    let down = (0..n).filter(|&b| s.prec.contains(b, a)).count();
    let up = (0..n).filter(|&b| s.prec.contains(a, b)).count();
    let idem = s.monoid.add(a, a) == a;
    let mut row: Vec<usize> = (0..n)
        .map(|b| {
            let c = s.monoid.add(a, b);
            (0..n).filter(|&x| s.prec.contains(x, c)).count()
        })
        .collect();
    row.sort_unstable();
    (down, up, idem, row)
}

/// Verifies that `map` is a W-isomorphism from `s` onto `t`.
pub fn verify_iso(s: &WSemigroup, t: &WSemigroup, map: &[usize]) -> bool {
    let n = s.size();
    if t.size() != n || map.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &x in map {
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    if map[s.zero()] != t.zero() {
        return false;
    }
    for a in 0..n {
        for b in 0..n {
            if map[s.monoid.add(a, b)] != t.monoid.add(map[a], map[b]) {
                return false;
            }
            if s.prec.contains(a, b) != t.prec.contains(map[a], map[b]) {
                return false;
            }
        }
    }
    true
}

/// Finds a W-isomorphism, trying the invariant-sorted bijection first and a
/// pruned backtracking search after. Returns `None` when no isomorphism
/// exists (exhaustive for the supported sizes).
pub fn find_iso(s: &WSemigroup, t: &WSemigroup) -> Option<Iso> {
    let n = s.size();
    if t.size() != n {
        return None;
    }
    let inv_s: Vec<_> = (0..n).map(|a| invariant(s, a)).collect();
    let inv_t: Vec<_> = (0..n).map(|a| invariant(t, a)).collect();

    {
        let mut order_s: Vec<usize> = (0..n).collect();
        let mut order_t: Vec<usize> = (0..n).collect();
        order_s.sort_by(|&a, &b| inv_s[a].cmp(&inv_s[b]).then(a.cmp(&b)));
        order_t.sort_by(|&a, &b| inv_t[a].cmp(&inv_t[b]).then(a.cmp(&b)));
        let mut map = vec![0usize; n];
        for (x, y) in order_s.iter().zip(&order_t) {
            map[*x] = *y;
        }
        if verify_iso(s, t, &map) {
            return Some(Iso {
                map,
                method: IsoMethod::Canonical,
            });
        }
    }

    // Backtracking over invariant-compatible candidates.
    let mut candidates: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).filter(|&b| inv_s[a] == inv_t[b]).collect())
        .collect();
    if candidates.iter().any(|c| c.is_empty()) {
        return None;
    }
    // Force zero onto zero.
    candidates[s.zero()].retain(|&b| b == t.zero());

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    // Assign most-constrained elements first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&a| candidates[a].len());

    fn consistent(s: &WSemigroup, t: &WSemigroup, map: &[usize], a: usize) -> bool {
        let n = s.size();
        for b in 0..n {
            if map[b] == usize::MAX {
                continue;
            }
            if s.prec.contains(a, b) != t.prec.contains(map[a], map[b]) {
                return false;
            }
            if s.prec.contains(b, a) != t.prec.contains(map[b], map[a]) {
                return false;
            }
            let ab = s.monoid.add(a, b);
            if map[ab] != usize::MAX && map[ab] != t.monoid.add(map[a], map[b]) {
                return false;
            }
            let ba = s.monoid.add(b, a);
            if map[ba] != usize::MAX && map[ba] != t.monoid.add(map[b], map[a]) {
                return false;
            }
        }
        true
    }

    fn backtrack(
        s: &WSemigroup,
        t: &WSemigroup,
        order: &[usize],
        candidates: &[Vec<usize>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        depth: usize,
    ) -> bool {
        if depth == order.len() {
            return verify_iso(s, t, map);
        }
        let a = order[depth];
        for &b in &candidates[a] {
            if used[b] {
                continue;
            }
            map[a] = b;
            used[b] = true;
            if consistent(s, t, map, a)
                && backtrack(s, t, order, candidates, map, used, depth + 1)
            {
                return true;
            }
            map[a] = usize::MAX;
            used[b] = false;
        }
        false
    }

    if backtrack(s, t, &order, &candidates, &mut map, &mut used, 0) {
        Some(Iso {
            map,
            method: IsoMethod::Searched,
        })
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wsemi::{make_fixture, FixtureSpec, WSemigroup};

    #[test]
    fn identity_iso_found() {
        let s = make_fixture(&FixtureSpec::Nbar(3)).unwrap();
        let iso = find_iso(&s, &s).unwrap();
        assert!(verify_iso(&s, &s, &iso.map));
    }

    #[test]
    fn relabelled_fixture_is_isomorphic() {
        let s = make_fixture(&FixtureSpec::Nbar(2)).unwrap();
        // Relabel 0,1,2 -> 0,2,1.
        let perm = [0usize, 2, 1];
        let mut add = vec![0; 9];
        for a in 0..3 {
            for b in 0..3 {
                add[perm[a] * 3 + perm[b]] = perm[s.monoid.add(a, b)];
            }
        }
        let mut prec = crate::rel::Relation::empty(3);
        for (a, b) in s.prec.pairs() {
            prec.insert(perm[a], perm[b]);
        }
        let t = WSemigroup::new(
            crate::wsemi::FiniteMonoid::new(3, 0, add).unwrap(),
            prec,
        )
        .unwrap();
        let iso = find_iso(&s, &t).unwrap();
        assert!(verify_iso(&s, &t, &iso.map));
    }

    #[test]
    fn non_isomorphic_rejected() {
        let s = make_fixture(&FixtureSpec::Nbar(3)).unwrap();
        let t = make_fixture(&FixtureSpec::lat_antichain(2)).unwrap();
        assert!(find_iso(&s, &t).is_none());
    }
}
