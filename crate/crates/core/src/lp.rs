//! Dense two-phase primal simplex for `min c'q  s.t.  Aq = b, q >= 0`.
//!
//! Pivoting follows Bland's rule, so the method terminates on degenerate
//! problems. The feasible basis found by phase 1 is kept, and several
//! objectives can be minimized over the same polytope without repeating it.

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-9;
const FEAS_TOL: f64 = 1e-8;
const MAX_PIVOTS: usize = 200_000;

/// Equality-form constraint system with dense rows.
#[derive(Debug, Clone, Default)]
pub struct Constraints {
    cols: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl Constraints {
    pub fn new(cols: usize) -> Self {
        Self { cols, a: Vec::new(), b: Vec::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.b.len()
    }

    pub fn push_dense(&mut self, row: &[f64], rhs: f64) {
        assert_eq!(row.len(), self.cols, "row width");
        self.a.extend_from_slice(row);
        self.b.push(rhs);
    }

    pub fn push_sparse(&mut self, row: &[(usize, f64)], rhs: f64) {
        let start = self.a.len();
        self.a.resize(start + self.cols, 0.0);
        for &(j, v) in row {
            self.a[start + j] += v;
        }
        self.b.push(rhs);
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.a[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    /// `max_r |A_r q - b_r|`.
    pub fn residual(&self, q: &[f64]) -> f64 {
        (0..self.rows())
            .map(|r| (self.row(r).iter().zip(q).map(|(a, x)| a * x).sum::<f64>() - self.b[r]).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub value: f64,
    pub point: Vec<f64>,
}

impl LpSolution {
    fn infeasible(n: usize) -> Self {
        Self { status: LpStatus::Infeasible, value: f64::INFINITY, point: vec![0.0; n] }
    }
}

/// A simplex tableau positioned at a basic feasible solution.
#[derive(Debug, Clone)]
pub struct FeasibleBasis {
    n: usize,
    /// `m x (n + 1)` rows of `B^-1 [A | b]`, redundant rows removed.
    t: Vec<f64>,
    basis: Vec<usize>,
    system: Constraints,
}

impl FeasibleBasis {
    /// Phase 1. Returns `Ok(None)` when the system has no nonnegative solution.
    pub fn find(system: &Constraints) -> Result<Option<Self>> {
        let n = system.cols;
        let m = system.rows();
        let w = n + m + 1;
        let mut t = vec![0.0; m * w];
        for r in 0..m {
            let sign = if system.b[r] < 0.0 { -1.0 } else { 1.0 };
            for j in 0..n {
                t[r * w + j] = sign * system.a[r * n + j];
            }
            t[r * w + n + r] = 1.0;
            t[r * w + w - 1] = sign * system.b[r];
        }
        let mut basis: Vec<usize> = (n..n + m).collect();
        let mut cost = vec![0.0; n + m];
        cost[n..].iter_mut().for_each(|c| *c = 1.0);
        let mut tab = Tableau { t, w, basis: &mut basis };
        match tab.optimize(&cost, n + m)? {
            PhaseEnd::Optimal(v) if v > FEAS_TOL * (1.0 + inf_norm(&system.b)) => return Ok(None),
            PhaseEnd::Optimal(_) => {}
            PhaseEnd::Unbounded => unreachable!("phase 1 objective is bounded below"),
        }
        let mut t = tab.t;

        // Drive artificials out of the basis; rows where that is impossible
        // are linear combinations of the others and are dropped.
        let mut keep = Vec::with_capacity(m);
        for r in 0..m {
            if basis[r] >= n {
                let enter = (0..n).find(|&j| t[r * w + j].abs() > PIVOT_TOL);
                match enter {
                    Some(j) => {
                        pivot(&mut t, w, r, j);
                        basis[r] = j;
                    }
                    None => continue,
                }
            }
            keep.push(r);
        }
        let mut reduced = Vec::with_capacity(keep.len() * (n + 1));
        for &r in &keep {
            reduced.extend_from_slice(&t[r * w..r * w + n]);
            reduced.push(t[r * w + w - 1]);
        }
        let basis = keep.iter().map(|&r| basis[r]).collect();
        Ok(Some(Self { n, t: reduced, basis, system: system.clone() }))
    }

    /// Phase 2 from this basis.
    pub fn minimize(&self, c: &[f64]) -> Result<LpSolution> {
        assert_eq!(c.len(), self.n, "objective width");
        let mut basis = self.basis.clone();
        let mut tab = Tableau { t: self.t.clone(), w: self.n + 1, basis: &mut basis };
        let end = tab.optimize(c, self.n)?;
        let t = tab.t;
        if let PhaseEnd::Unbounded = end {
            return Ok(LpSolution { status: LpStatus::Unbounded, value: f64::NEG_INFINITY, point: vec![0.0; self.n] });
        }
        let mut point = vec![0.0; self.n];
        for (r, &j) in basis.iter().enumerate() {
            point[j] = t[r * (self.n + 1) + self.n].max(0.0);
        }
        let residual = self.system.residual(&point);
        let scale = 1.0 + inf_norm(&self.system.b);
        if residual > FEAS_TOL * scale {
            return Err(Error::Numerical(format!(
                "simplex residual {residual:.3e} exceeds tolerance ({} rows, {} columns, basis size {})",
                self.system.rows(),
                self.n,
                basis.len()
            )));
        }
        let value = c.iter().zip(&point).map(|(a, b)| a * b).sum();
        Ok(LpSolution { status: LpStatus::Optimal, value, point })
    }

    /// Any feasible point (the phase-1 vertex).
    pub fn point(&self) -> Vec<f64> {
        let mut point = vec![0.0; self.n];
        for (r, &j) in self.basis.iter().enumerate() {
            point[j] = self.t[r * (self.n + 1) + self.n].max(0.0);
        }
        point
    }
}

/// One-shot solve.
pub fn solve_lp(system: &Constraints, c: &[f64]) -> Result<LpSolution> {
    match FeasibleBasis::find(system)? {
        Some(basis) => basis.minimize(c),
        None => Ok(LpSolution::infeasible(system.cols)),
    }
}

enum PhaseEnd {
    Optimal(f64),
    Unbounded,
}

struct Tableau<'a> {
    t: Vec<f64>,
    w: usize,
    basis: &'a mut Vec<usize>,
}

impl Tableau<'_> {
    /// Minimizes `cost` over the first `cols` columns (Bland's rule).
    fn optimize(&mut self, cost: &[f64], cols: usize) -> Result<PhaseEnd> {
        let m = self.basis.len();
        let w = self.w;
        let rhs = w - 1;
        // reduced costs: c_j - c_B' B^-1 A_j
        let mut red = cost[..cols].to_vec();
        let mut obj = 0.0;
        for r in 0..m {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                for j in 0..cols {
                    red[j] -= cb * self.t[r * w + j];
                }
                obj += cb * self.t[r * w + rhs];
            }
        }
        for _ in 0..MAX_PIVOTS {
            let Some(enter) = (0..cols).find(|&j| red[j] < -PIVOT_TOL) else {
                return Ok(PhaseEnd::Optimal(obj));
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..m {
                let a = self.t[r * w + enter];
                if a > PIVOT_TOL {
                    let ratio = self.t[r * w + rhs] / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - 1e-12
                                || (ratio <= lratio + 1e-12 && self.basis[r] < self.basis[lr])
                            {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else {
                return Ok(PhaseEnd::Unbounded);
            };
            pivot(&mut self.t, w, r, enter);
            let f = red[enter];
            for j in 0..cols {
                red[j] -= f * self.t[r * w + j];
            }
            obj += f * self.t[r * w + rhs];
            self.basis[r] = enter;
        }
        Err(Error::Numerical(format!("simplex exceeded {MAX_PIVOTS} pivots ({m} rows)")))
    }
}

fn pivot(t: &mut [f64], w: usize, r: usize, j: usize) {
    let m = t.len() / w;
    let p = t[r * w + j];
    for k in 0..w {
        t[r * w + k] /= p;
    }
    t[r * w + j] = 1.0;
    let (before, rest) = t.split_at_mut(r * w);
    let (prow, after) = rest.split_at_mut(w);
    for other in before.chunks_mut(w).chain(after.chunks_mut(w)) {
        let f = other[j];
        if f != 0.0 {
            for k in 0..w {
                other[k] -= f * prow[k];
            }
            other[j] = 0.0;
        }
    }
    debug_assert_eq!(m * w, t.len());
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |a, x| a.max(x.abs()))
}

/// Incremental row-space basis used to discard linearly dependent rows.
#[derive(Debug, Clone)]
pub struct RowSpace {
    /// Reduced rows with their pivot column.
    rows: Vec<(usize, Vec<f64>)>,
    tol: f64,
}

impl RowSpace {
    pub fn new(tol: f64) -> Self {
        Self { rows: Vec::new(), tol }
    }

    /// Adds `row` if it is independent of the rows seen so far.
    pub fn insert(&mut self, row: &[f64]) -> bool {
        let scale = inf_norm(row);
        if scale == 0.0 {
            return false;
        }
        let mut v: Vec<f64> = row.iter().map(|x| x / scale).collect();
        for (p, b) in &self.rows {
            let f = v[*p];
            if f != 0.0 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= f * y;
                }
            }
        }
        let (p, &mx) = v
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .expect("nonempty row");
        if mx.abs() <= self.tol {
            return false;
        }
        v.iter_mut().for_each(|x| *x /= mx);
        for (_, b) in self.rows.iter_mut() {
            let f = b[p];
            if f != 0.0 {
                for (x, y) in b.iter_mut().zip(&v) {
                    *x -= f * y;
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_programs() {
        let mut s = Constraints::new(2);
        s.push_dense(&[1.0, 1.0], 1.0);
        let sol = solve_lp(&s, &[1.0, 0.0]).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert!(sol.value.abs() < 1e-12);

        let mut bad = Constraints::new(1);
        bad.push_dense(&[1.0], -1.0);
        assert_eq!(solve_lp(&bad, &[0.0]).unwrap().status, LpStatus::Infeasible);

        let mut open = Constraints::new(2);
        open.push_dense(&[1.0, -1.0], 0.0);
        assert_eq!(solve_lp(&open, &[-1.0, 0.0]).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let mut s = Constraints::new(3);
        s.push_dense(&[1.0, 1.0, 1.0], 1.0);
        s.push_dense(&[2.0, 2.0, 2.0], 2.0);
        s.push_dense(&[1.0, 0.0, -1.0], 0.0);
        let sol = solve_lp(&s, &[0.0, 1.0, 0.0]).unwrap();
        assert!((sol.point[0] - 0.5).abs() < 1e-12 && (sol.point[2] - 0.5).abs() < 1e-12);
        let basis = FeasibleBasis::find(&s).unwrap().unwrap();
        assert_eq!(basis.basis.len(), 2);
    }

    #[test]
    fn row_space_rank() {
        let mut rs = RowSpace::new(1e-9);
        assert!(rs.insert(&[1.0, 1.0, 0.0]));
        assert!(rs.insert(&[0.0, 1.0, 1.0]));
        assert!(!rs.insert(&[1.0, 2.0, 1.0]));
        assert!(rs.insert(&[0.0, 0.0, 3.0]));
        assert!(!rs.insert(&[5.0, -1.0, 2.0]));
        assert_eq!(rs.rank(), 3);
    }

    /// Vertex-enumeration oracle: every basic solution of `Aq = b`.
    fn vertex_oracle(s: &Constraints, c: &[f64]) -> Option<f64> {
        let (m, n) = (s.rows(), s.cols());
        let mut best: Option<f64> = None;
        let mut pick = Vec::new();
        fn combos(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for j in start..n {
                cur.push(j);
                combos(n, k, j + 1, cur, out);
                cur.pop();
            }
        }
        let mut sets = Vec::new();
        combos(n, m, 0, &mut pick, &mut sets);
        for set in sets {
            // Gaussian elimination on the m x m submatrix
            let mut a: Vec<Vec<f64>> = (0..m)
                .map(|r| set.iter().map(|&j| s.row(r)[j]).chain([s.rhs()[r]]).collect())
                .collect();
            let mut ok = true;
            for col in 0..m {
                let p = (col..m).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs())).unwrap();
                if a[p][col].abs() < 1e-10 {
                    ok = false;
                    break;
                }
                a.swap(col, p);
                for r in 0..m {
                    if r != col {
                        let f = a[r][col] / a[col][col];
                        for k in col..=m {
                            a[r][k] -= f * a[col][k];
                        }
                    }
                }
            }
            if !ok {
                continue;
            }
            let xs: Vec<f64> = (0..m).map(|r| a[r][m] / a[r][r]).collect();
            if xs.iter().any(|&x| x < -1e-10) {
                continue;
            }
            let v: f64 = set.iter().zip(&xs).map(|(&j, x)| c[j] * x).sum();
            best = Some(best.map_or(v, |b: f64| b.min(v)));
        }
        best
    }

    #[test]
    fn agrees_with_vertex_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        for _ in 0..200 {
            let n = rng.random_range(4..=12);
            let m = rng.random_range(1..=3.min(n - 1));
            let mut s = Constraints::new(n);
            // rows with positive entries keep the polytope bounded
            for _ in 0..m {
                let row: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..2.0)).collect();
                s.push_dense(&row, rng.random_range(0.5..3.0));
            }
            let c: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let sol = solve_lp(&s, &c).unwrap();
            match vertex_oracle(&s, &c) {
                Some(v) => {
                    assert_eq!(sol.status, LpStatus::Optimal);
                    assert!((sol.value - v).abs() < 1e-8, "{} vs {v}", sol.value);
                    assert!(s.residual(&sol.point) < 1e-8);
                    checked += 1;
                }
                None => assert_eq!(sol.status, LpStatus::Infeasible),
            }
        }
        assert!(checked > 100);
    }

    #[test]
    fn one_basis_many_objectives() {
        let mut s = Constraints::new(3);
        s.push_dense(&[1.0, 1.0, 1.0], 1.0);
        let basis = FeasibleBasis::find(&s).unwrap().unwrap();
        for k in 0..3 {
            let mut c = vec![1.0; 3];
            c[k] = -1.0;
            let sol = basis.minimize(&c).unwrap();
            assert!((sol.value + 1.0).abs() < 1e-12);
            assert!((sol.point[k] - 1.0).abs() < 1e-12);
        }
    }
}
