//! Exact rational linear feasibility and vertex enumeration.
//!
//! No floating point anywhere: coefficients are arbitrary-precision
//! rationals. Feasibility runs Gauss-Jordan on the equalities, then
//! Fourier-Motzkin with redundancy pruning on the reduced inequalities,
//! reconstructing a witness point backwards through the eliminations. An
//! exact simplex (Phase I, Bland's rule) covers systems whose reduced
//! dimension is too large for elimination.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// `coeffs . x (op) rhs` rows. Inequalities are all `<=`.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    pub nvars: usize,
    pub equalities: Vec<(Vec<Rat>, Rat)>,
    pub inequalities: Vec<(Vec<Rat>, Rat)>,
    /// All variables are known nonnegative (they still need explicit rows if
    /// the bound should constrain elimination); enables the simplex path.
    pub nonneg: bool,
}

impl LinearSystem {
    pub fn new(nvars: usize, nonneg: bool) -> Self {
        LinearSystem {
            nvars,
            equalities: Vec::new(),
            inequalities: Vec::new(),
            nonneg,
        }
    }

    pub fn eq(&mut self, coeffs: Vec<Rat>, rhs: Rat) {
        debug_assert_eq!(coeffs.len(), self.nvars);
        self.equalities.push((coeffs, rhs));
    }

    pub fn le(&mut self, coeffs: Vec<Rat>, rhs: Rat) {
        debug_assert_eq!(coeffs.len(), self.nvars);
        self.inequalities.push((coeffs, rhs));
    }

    /// Checks a candidate point against every row.
    pub fn satisfied_by(&self, x: &[Rat]) -> bool {
        let dot = |c: &[Rat]| -> Rat {
            c.iter()
                .zip(x)
                .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
        };
        self.equalities.iter().all(|(c, r)| dot(c) == *r)
            && self.inequalities.iter().all(|(c, r)| dot(c) <= *r)
            && (!self.nonneg || x.iter().all(|v| !v.is_negative()))
    }
}

/// Result of the equality reduction: pivot variables expressed affinely in
/// the free variables.
struct Reduced {
    free: Vec<usize>,
    /// For each original variable: either `Free(k)` (k-th free var) or
    /// `Affine(coeffs over free vars, constant)`.
    expr: Vec<VarExpr>,
}

enum VarExpr {
    Free(usize),
    Affine(Vec<Rat>, Rat),
}

fn reduce_equalities(sys: &LinearSystem) -> Option<Reduced> {
    let n = sys.nvars;
    let mut rows: Vec<(Vec<Rat>, Rat)> = sys.equalities.clone();
    let mut pivot_of_row: Vec<usize> = Vec::new();
    let mut is_pivot = vec![false; n];
    let mut r = 0;
    for col in 0..n {
        let Some(sel) = (r..rows.len()).find(|&i| !rows[i].0[col].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let div = rows[r].0[col].clone();
        for c in rows[r].0.iter_mut() {
            *c /= div.clone();
        }
        rows[r].1 /= div;
        for i in 0..rows.len() {
            if i != r && !rows[i].0[col].is_zero() {
                let f = rows[i].0[col].clone();
                for c in 0..n {
                    let t = rows[r].0[c].clone() * f.clone();
                    rows[i].0[c] -= t;
                }
                let t = rows[r].1.clone() * f;
                rows[i].1 -= t;
            }
        }
        pivot_of_row.push(col);
        is_pivot[col] = true;
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    // Inconsistent 0 = c rows.
    for row in rows.iter().skip(r) {
        if !row.1.is_zero() {
            return None;
        }
    }
    let free: Vec<usize> = (0..n).filter(|&v| !is_pivot[v]).collect();
    let free_index = |v: usize| free.iter().position(|&f| f == v).unwrap();
    let mut expr: Vec<VarExpr> = Vec::with_capacity(n);
    for v in 0..n {
        if !is_pivot[v] {
            expr.push(VarExpr::Free(free_index(v)));
        } else {
            let row = pivot_of_row.iter().position(|&p| p == v).unwrap();
            let mut coeffs = vec![Rat::zero(); free.len()];
            for (k, &fv) in free.iter().enumerate() {
                coeffs[k] = -rows[row].0[fv].clone();
            }
            expr.push(VarExpr::Affine(coeffs, rows[row].1.clone()));
        }
    }
    Some(Reduced { free, expr })
}

/// Substitutes the equality reduction into the inequalities, producing rows
/// over the free variables only.
fn reduced_inequalities(sys: &LinearSystem, red: &Reduced) -> Vec<(Vec<Rat>, Rat)> {
    let d = red.free.len();
    let mut out = Vec::new();
    let mut rows: Vec<(Vec<Rat>, Rat)> = sys.inequalities.clone();
    if sys.nonneg {
        for v in 0..sys.nvars {
            let mut c = vec![Rat::zero(); sys.nvars];
            c[v] = -Rat::one();
            rows.push((c, Rat::zero()));
        }
    }
    for (coeffs, rhs) in rows {
        let mut c = vec![Rat::zero(); d];
        let mut r = rhs;
        for (v, coef) in coeffs.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            match &red.expr[v] {
                VarExpr::Free(k) => c[*k] += coef.clone(),
                VarExpr::Affine(fc, cst) => {
                    for (k, fcoef) in fc.iter().enumerate() {
                        c[k] += coef.clone() * fcoef.clone();
                    }
                    r -= coef.clone() * cst.clone();
                }
            }
        }
        // Constant rows stay in; elimination checks their consistency.
        out.push((c, r));
    }
    out
}

fn normalize_row(row: &mut (Vec<Rat>, Rat)) {
    if let Some(lead) = row.0.iter().find(|c| !c.is_zero()) {
        let scale = lead.abs();
        for c in row.0.iter_mut() {
            *c /= scale.clone();
        }
        row.1 /= scale;
    }
}

fn dedup_rows(rows: Vec<(Vec<Rat>, Rat)>) -> Vec<(Vec<Rat>, Rat)> {
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut out = Vec::new();
    for mut row in rows {
        normalize_row(&mut row);
        let key = format!("{:?}|{:?}", row.0, row.1);
        if seen.insert(key) {
            out.push(row);
        }
    }
    out
}

/// Fourier-Motzkin feasibility over the free variables, with witness
/// reconstruction. `None` when infeasible.
fn fm_feasible(rows: Vec<(Vec<Rat>, Rat)>, d: usize) -> Option<Vec<Rat>> {
    // Stages: for each eliminated variable, the rows mentioning it just
    // before elimination (over the then-current variable set).
    struct Stage {
        var: usize,
        rows: Vec<(Vec<Rat>, Rat)>,
    }
    let mut current = dedup_rows(rows);
    let mut alive: Vec<usize> = (0..d).collect();
    let mut stages: Vec<Stage> = Vec::new();

    while !alive.is_empty() {
        // Eliminate the variable minimizing the product of bound counts.
        let (pos, &var) = alive
            .iter()
            .enumerate()
            .min_by_key(|&(_, &v)| {
                let pos = current.iter().filter(|r| r.0[v].is_positive()).count();
                let neg = current.iter().filter(|r| r.0[v].is_negative()).count();
                pos * neg + pos + neg
            })
            .unwrap();
        alive.remove(pos);

        let involved: Vec<(Vec<Rat>, Rat)> = current
            .iter()
            .filter(|r| !r.0[var].is_zero())
            .cloned()
            .collect();
        let mut next: Vec<(Vec<Rat>, Rat)> = current
            .iter()
            .filter(|r| r.0[var].is_zero())
            .cloned()
            .collect();
        let uppers: Vec<&(Vec<Rat>, Rat)> =
            involved.iter().filter(|r| r.0[var].is_positive()).collect();
        let lowers: Vec<&(Vec<Rat>, Rat)> =
            involved.iter().filter(|r| r.0[var].is_negative()).collect();
        for up in &uppers {
            for lo in &lowers {
                // up: a x <= r (a > 0); lo: b x <= t (b < 0). Combine to
                // eliminate var: (1/a) up + (-1/b) lo.
                let a = up.0[var].clone();
                let b = lo.0[var].clone();
                let mut c = vec![Rat::zero(); d];
                for k in 0..d {
                    c[k] = up.0[k].clone() / a.clone() - lo.0[k].clone() / b.clone();
                }
                c[var] = Rat::zero();
                let r = up.1.clone() / a.clone() - lo.1.clone() / b.clone();
                next.push((c, r));
            }
        }
        stages.push(Stage {
            var,
            rows: involved,
        });
        current = dedup_rows(next);
        // Early exit on an inconsistent constant row.
        for (c, r) in &current {
            if c.iter().all(|x| x.is_zero()) && r.is_negative() {
                return None;
            }
        }
    }
    for (c, r) in &current {
        debug_assert!(c.iter().all(|x| x.is_zero()));
        if r.is_negative() {
            return None;
        }
    }

    // Reconstruct a witness backwards.
    let mut x = vec![Rat::zero(); d];
    for stage in stages.iter().rev() {
        let v = stage.var;
        let mut lo: Option<Rat> = None;
        let mut hi: Option<Rat> = None;
        for (coeffs, rhs) in &stage.rows {
            let a = coeffs[v].clone();
            let mut rest = rhs.clone();
            for (k, c) in coeffs.iter().enumerate() {
                if k != v && !c.is_zero() {
                    rest -= c.clone() * x[k].clone();
                }
            }
            let bound = rest / a.clone();
            if a.is_positive() {
                hi = Some(match hi {
                    Some(h) if h < bound => h,
                    _ => bound,
                });
            } else {
                lo = Some(match lo {
                    Some(l) if l > bound => l,
                    _ => bound,
                });
            }
        }
        x[v] = match (lo, hi) {
            (Some(l), Some(h)) => {
                debug_assert!(l <= h, "reconstruction bounds crossed");
                (l + h) / rat(2)
            }
            (Some(l), None) => l,
            (None, Some(h)) => h,
            (None, None) => Rat::zero(),
        };
    }
    Some(x)
}

const FM_VAR_CAP: usize = 40;

/// A feasible point of the system, exactly, or `None`.
pub fn feasible_point(sys: &LinearSystem) -> Option<Vec<Rat>> {
    let red = reduce_equalities(sys)?;
    let rows = reduced_inequalities(sys, &red);
    let d = red.free.len();
    let free_point = if d <= FM_VAR_CAP {
        fm_feasible(rows, d)?
    } else if sys.nonneg {
        return simplex_feasible(sys);
    } else {
        // Elimination on a pruned system anyway; systems this large do not
        // occur in the fixture corpus.
        fm_feasible(rows, d)?
    };
    let point = expand_point(&red, &free_point);
    debug_assert!(sys.satisfied_by(&point));
    Some(point)
}

fn expand_point(red: &Reduced, free_point: &[Rat]) -> Vec<Rat> {
    red.expr
        .iter()
        .map(|e| match e {
            VarExpr::Free(k) => free_point[*k].clone(),
            VarExpr::Affine(coeffs, cst) => coeffs
                .iter()
                .zip(free_point)
                .fold(cst.clone(), |acc, (c, v)| acc + c.clone() * v.clone()),
        })
        .collect()
}

/// Exact Phase-I simplex over nonnegative variables with Bland's rule.
/// Equalities become rows with artificials; inequalities gain slacks.
pub fn simplex_feasible(sys: &LinearSystem) -> Option<Vec<Rat>> {
    assert!(sys.nonneg, "simplex path requires nonnegative variables");
    let n = sys.nvars;
    let m = sys.equalities.len() + sys.inequalities.len();
    let nslack = sys.inequalities.len();
    // Columns: n vars, nslack slacks, m artificials.
    let total = n + nslack + m;
    let mut a: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut b: Vec<Rat> = Vec::with_capacity(m);
    for (i, (coeffs, rhs)) in sys
        .equalities
        .iter()
        .chain(sys.inequalities.iter())
        .enumerate()
    {
        let mut row = vec![Rat::zero(); total];
        row[..n].clone_from_slice(coeffs);
        if i >= sys.equalities.len() {
            row[n + (i - sys.equalities.len())] = Rat::one();
        }
        let mut rhs = rhs.clone();
        if rhs.is_negative() {
            for c in row.iter_mut() {
                *c = -c.clone();
            }
            rhs = -rhs;
        }
        row[n + nslack + i] = Rat::one();
        a.push(row);
        b.push(rhs);
    }
    let mut basis: Vec<usize> = (0..m).map(|i| n + nslack + i).collect();

    // Phase-I objective: minimize the sum of artificials. Reduced costs are
    // maintained implicitly via the tableau.
    let mut cost = vec![Rat::zero(); total];
    for i in 0..m {
        cost[n + nslack + i] = Rat::one();
    }
    // z row = sum of artificial rows (since artificials are basic).
    let mut z = vec![Rat::zero(); total];
    let mut zval = Rat::zero();
    for i in 0..m {
        for j in 0..total {
            z[j] += a[i][j].clone();
        }
        zval += b[i].clone();
    }
    for (j, zj) in z.iter_mut().enumerate() {
        *zj -= cost[j].clone();
    }

    let iteration_cap = 10_000;
    for _ in 0..iteration_cap {
        // Entering: smallest index with positive reduced cost (Bland).
        let Some(enter) = (0..total).find(|&j| z[j].is_positive()) else {
            break;
        };
        // Leaving: min ratio, ties by smallest basis index (Bland).
        let mut leave: Option<usize> = None;
        let mut best: Option<Rat> = None;
        for i in 0..m {
            if a[i][enter].is_positive() {
                let ratio = b[i].clone() / a[i][enter].clone();
                let better = match &best {
                    None => true,
                    Some(r) => {
                        ratio < *r || (ratio == *r && basis[i] < basis[leave.unwrap()])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        let leave = leave?; // unbounded cannot happen in Phase I
        // Pivot.
        let piv = a[leave][enter].clone();
        for j in 0..total {
            a[leave][j] /= piv.clone();
        }
        b[leave] /= piv;
        for i in 0..m {
            if i != leave && !a[i][enter].is_zero() {
                let f = a[i][enter].clone();
                for j in 0..total {
                    let t = a[leave][j].clone() * f.clone();
                    a[i][j] -= t;
                }
                let t = b[leave].clone() * f;
                b[i] -= t;
            }
        }
        if !z[enter].is_zero() {
            let f = z[enter].clone();
            for j in 0..total {
                let t = a[leave][j].clone() * f.clone();
                z[j] -= t;
            }
            let t = b[leave].clone() * f;
            zval -= t;
        }
        basis[leave] = enter;
    }
    if !zval.is_zero() {
        return None;
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = b[i].clone();
        }
    }
    if sys.satisfied_by(&x) {
        Some(x)
    } else {
        None
    }
}

/// Vertices (extreme points) of the feasible region, assuming it is a
/// bounded polytope. Enumerates basic solutions of the reduced system.
pub fn vertices(sys: &LinearSystem) -> Vec<Vec<Rat>> {
    let Some(red) = reduce_equalities(sys) else {
        return Vec::new();
    };
    let rows = dedup_rows(reduced_inequalities(sys, &red));
    let d = red.free.len();
    let mut out: Vec<Vec<Rat>> = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    if d == 0 {
        let point = expand_point(&red, &[]);
        if sys.satisfied_by(&point) {
            out.push(point);
        }
        return out;
    }
    // All d-subsets of rows; solve for tight constraints.
    let m = rows.len();
    let mut idx: Vec<usize> = (0..d).collect();
    if m < d {
        return out;
    }
    loop {
        // Solve rows[idx] . y = rhs.
        if let Some(y) = solve_square(&rows, &idx, d) {
            let ok = rows.iter().all(|(c, r)| {
                c.iter()
                    .zip(&y)
                    .fold(Rat::zero(), |acc, (a, b)| acc + a * b)
                    <= *r
            });
            if ok {
                let point = expand_point(&red, &y);
                if sys.satisfied_by(&point) {
                    let key = format!("{point:?}");
                    if seen.insert(key) {
                        out.push(point);
                    }
                }
            }
        }
        // Next combination.
        let mut i = d;
        loop {
            if i == 0 {
                return sort_points(out);
            }
            i -= 1;
            if idx[i] != i + m - d {
                idx[i] += 1;
                for j in (i + 1)..d {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn sort_points(mut pts: Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
    pts.sort_by(|a, b| {
        for (x, y) in a.iter().zip(b) {
            match x.cmp(y) {
                std::cmp::Ordering::Equal => continue,
                other => return other,
            }
        }
        std::cmp::Ordering::Equal
    });
    pts
}

fn solve_square(rows: &[(Vec<Rat>, Rat)], idx: &[usize], d: usize) -> Option<Vec<Rat>> {
    let mut a: Vec<Vec<Rat>> = idx.iter().map(|&i| rows[i].0.clone()).collect();
    let mut b: Vec<Rat> = idx.iter().map(|&i| rows[i].1.clone()).collect();
    for col in 0..d {
        let Some(p) = (col..d).find(|&r| !a[r][col].is_zero()) else {
            return None; // singular
        };
        a.swap(col, p);
        b.swap(col, p);
        let div = a[col][col].clone();
        for c in a[col].iter_mut() {
            *c /= div.clone();
        }
        b[col] /= div;
        for r in 0..d {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..d {
                    let t = a[col][c].clone() * f.clone();
                    a[r][c] -= t;
                }
                let t = b[col].clone() * f;
                b[r] -= t;
            }
        }
    }
    Some(b)
}
