//! Worst-case memoryless jammer for one rate constraint.
//!
//! The jammer picks `P(s|u)` subject to `sum_u P(u) sum_s P(s|u) g(s) <= Lambda`
//! to minimize one of `I(x;z|y,u)`, `I(y;z|x,u)` or `I(x,y;z|u)`. Each is convex in
//! the mixed channel `V_u = sum_s P(s|u) W(.|., ., s)`, so the problem is a
//! smooth convex program over a product of simplices cut by one halfspace.
//! Frank-Wolfe steps (each linear subproblem is a tiny LP) pick the active
//! face and a Newton step on that face settles its optimum.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::channel::{DiscreteAvmac, InputDistribution};
use crate::dist::{cond_mutual_information, CondDistribution, JointDistribution};
use crate::error::{Error, Result};
use crate::lp::{Constraints, FeasibleBasis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// `I(x; z | y, u)`
    R1,
    /// `I(y; z | x, u)`
    R2,
    /// `I(x, y; z | u)`
    Sum,
}

pub const MAX_ITERATIONS: usize = 500;
pub const GAP_TOLERANCE: f64 = 1e-8;
const LINE_SEARCH_STEPS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct JammerSolution {
    pub value: f64,
    /// `P(s|u)`, one row per time-sharing symbol.
    pub witness: CondDistribution,
    pub iterations: usize,
    pub gap: f64,
}

/// The conditional information as a function of the flat table `r[u * |S| + s]`.
struct MixedInformation<'a> {
    ch: &'a DiscreteAvmac,
    input: &'a InputDistribution,
    kind: Objective,
}

impl MixedInformation<'_> {
    fn dims(&self) -> (usize, usize, usize, usize) {
        (self.ch.card_x, self.ch.card_y, self.ch.card_s, self.ch.card_z)
    }

    /// Mixed channel `V_u(z|x,y)` for one `u`, flat `(x, y, z)`.
    fn mixed(&self, r: &[f64]) -> Vec<f64> {
        let (cx, cy, cs, cz) = self.dims();
        let mut v = vec![0.0; cx * cy * cz];
        for x in 0..cx {
            for y in 0..cy {
                let out = &mut v[(x * cy + y) * cz..(x * cy + y + 1) * cz];
                for (s, &rs) in r.iter().enumerate().take(cs) {
                    if rs != 0.0 {
                        for (o, w) in out.iter_mut().zip(self.ch.row(x, y, s)) {
                            *o += rs * w;
                        }
                    }
                }
            }
        }
        v
    }

    /// Reference output law the information is measured against, per `(x, y, z)`.
    fn reference(&self, u: usize, v: &[f64]) -> Vec<f64> {
        let (cx, cy, _, cz) = self.dims();
        let px = &self.input.p_x_given_u[u];
        let py = &self.input.p_y_given_u[u];
        let mut q = vec![0.0; cx * cy * cz];
        match self.kind {
            Objective::Sum => {
                let mut out = vec![0.0; cz];
                for x in 0..cx {
                    for y in 0..cy {
                        for z in 0..cz {
                            out[z] += px[x] * py[y] * v[(x * cy + y) * cz + z];
                        }
                    }
                }
                for k in 0..cx * cy {
                    q[k * cz..(k + 1) * cz].copy_from_slice(&out);
                }
            }
            Objective::R1 => {
                for y in 0..cy {
                    for z in 0..cz {
                        let m: f64 = (0..cx).map(|x| px[x] * v[(x * cy + y) * cz + z]).sum();
                        (0..cx).for_each(|x| q[(x * cy + y) * cz + z] = m);
                    }
                }
            }
            Objective::R2 => {
                for x in 0..cx {
                    for z in 0..cz {
                        let m: f64 = (0..cy).map(|y| py[y] * v[(x * cy + y) * cz + z]).sum();
                        (0..cy).for_each(|y| q[(x * cy + y) * cz + z] = m);
                    }
                }
            }
        }
        q
    }

    /// Hessian in `r`, dense `n x n` (block diagonal over `u`).
    fn hessian(&self, r: &[f64]) -> Vec<f64> {
        let (cx, cy, cs, cz) = self.dims();
        let n = r.len();
        let mut h = vec![0.0; n * n];
        let groups = match self.kind {
            Objective::Sum => 1,
            Objective::R1 => cy,
            Objective::R2 => cx,
        };
        let group_of = |x: usize, y: usize| match self.kind {
            Objective::Sum => 0,
            Objective::R1 => y,
            Objective::R2 => x,
        };
        for (u, &pu) in self.input.p_u.iter().enumerate() {
            if pu == 0.0 {
                continue;
            }
            let v = self.mixed(&r[u * cs..(u + 1) * cs]);
            let px = &self.input.p_x_given_u[u];
            let py = &self.input.p_y_given_u[u];
            let scale = pu / std::f64::consts::LN_2;
            let mut block = vec![0.0; cs * cs];
            for z in 0..cz {
                let mut mass = vec![0.0; groups];
                let mut along = vec![0.0; groups * cs];
                for x in 0..cx {
                    for y in 0..cy {
                        let m = px[x] * py[y];
                        let vz = v[(x * cy + y) * cz + z];
                        if m == 0.0 || vz == 0.0 {
                            continue;
                        }
                        let g = group_of(x, y);
                        mass[g] += m * vz;
                        for s in 0..cs {
                            let ws = self.ch.w(x, y, s, z);
                            along[g * cs + s] += m * ws;
                            for t in 0..cs {
                                block[s * cs + t] += m * ws * self.ch.w(x, y, t, z) / vz;
                            }
                        }
                    }
                }
                for g in 0..groups {
                    if mass[g] > 0.0 {
                        for s in 0..cs {
                            for t in 0..cs {
                                block[s * cs + t] -= along[g * cs + s] * along[g * cs + t] / mass[g];
                            }
                        }
                    }
                }
            }
            for s in 0..cs {
                for t in 0..cs {
                    h[(u * cs + s) * n + u * cs + t] = scale * block[s * cs + t];
                }
            }
        }
        h
    }

    fn value(&self, r: &[f64]) -> f64 {
        self.evaluate(r, false).0
    }

    fn evaluate(&self, r: &[f64], with_grad: bool) -> (f64, Vec<f64>) {
        let (cx, cy, cs, cz) = self.dims();
        let mut total = 0.0;
        let mut grad = if with_grad { vec![0.0; r.len()] } else { Vec::new() };
        for (u, &pu) in self.input.p_u.iter().enumerate() {
            if pu == 0.0 {
                continue;
            }
            let ru = &r[u * cs..(u + 1) * cs];
            let v = self.mixed(ru);
            let q = self.reference(u, &v);
            let px = &self.input.p_x_given_u[u];
            let py = &self.input.p_y_given_u[u];
            for x in 0..cx {
                for y in 0..cy {
                    let pxy = px[x] * py[y];
                    if pxy == 0.0 {
                        continue;
                    }
                    for z in 0..cz {
                        let k = (x * cy + y) * cz + z;
                        // log(0) terms are clamped to 0; they carry zero mass
                        let l = if v[k] > 0.0 && q[k] > 0.0 { (v[k] / q[k]).log2() } else { 0.0 };
                        total += pu * pxy * v[k] * l;
                        if with_grad && l != 0.0 {
                            for s in 0..cs {
                                grad[u * cs + s] += pu * pxy * l * self.ch.w(x, y, s, z);
                            }
                        }
                    }
                }
            }
        }
        (total.max(0.0), grad)
    }
}

/// Minimizes the chosen information quantity over admissible state laws.
pub fn worst_case_jammer(ch: &DiscreteAvmac, input: &InputDistribution, kind: Objective) -> Result<JammerSolution> {
    input.check_against(ch)?;
    if ch.lambda < ch.g_min() {
        return Err(Error::InvalidParameter(format!(
            "state budget {} is below the cheapest state cost {}",
            ch.lambda,
            ch.g_min()
        )));
    }
    let (cu, cs) = (input.card_u(), ch.card_s);
    let n = cu * cs;
    let f = MixedInformation { ch, input, kind };

    // LMO polytope: simplex per u, budget row with a slack column
    let mut poly = Constraints::new(n + 1);
    for u in 0..cu {
        let row: Vec<(usize, f64)> = (0..cs).map(|s| (u * cs + s, 1.0)).collect();
        poly.push_sparse(&row, 1.0);
    }
    let mut budget: Vec<(usize, f64)> = Vec::with_capacity(n + 1);
    for u in 0..cu {
        for s in 0..cs {
            budget.push((u * cs + s, input.p_u[u] * ch.g[s]));
        }
    }
    budget.push((n, 1.0));
    poly.push_sparse(&budget, ch.lambda);
    let basis = FeasibleBasis::find(&poly)?
        .ok_or_else(|| Error::Numerical("jammer polytope unexpectedly empty".into()))?;
    let lmo = |grad: &[f64]| -> Result<Vec<f64>> {
        let mut c = grad.to_vec();
        c.push(0.0);
        let mut v = basis.minimize(&c)?.point;
        v.truncate(n);
        Ok(v)
    };

    // start at the cheapest state for every u
    let mut start = vec![0.0; n];
    let cheap = ch.argmin_g();
    (0..cu).for_each(|u| start[u * cs + cheap] = 1.0);
    let mut x = start;
    let (mut value, mut grad) = f.evaluate(&x, true);
    let mut gap = f64::INFINITY;
    let mut iterations = 0;

    while iterations < MAX_ITERATIONS {
        let s = lmo(&grad)?;
        gap = dot(&grad, &x) - dot(&grad, &s);
        if gap < GAP_TOLERANCE {
            break;
        }
        iterations += 1;
        let dir: Vec<f64> = s.iter().zip(&x).map(|(a, b)| a - b).collect();
        let gamma = line_search(|t| f.value(&axpy(&x, t, &dir)), 1.0);
        if gamma > 0.0 {
            x = axpy(&x, gamma, &dir);
        }
        // the linear steps pick the face; Newton settles on its optimum
        let polished = newton_on_face(&f, &x, &budget_row(ch, input), ch.lambda);
        if gamma <= 0.0 && polished.is_none() {
            break;
        }
        if let Some(y) = polished {
            x = y;
        }
        (value, grad) = f.evaluate(&x, true);
    }

    let witness = CondDistribution::from_solver(vec![cu], cs, x.clone())?;
    value = value.min(f.value(witness.rows()));
    Ok(JammerSolution { value, witness, iterations, gap })
}

/// Golden-section search for the minimizer of a convex function on `[0, hi]`.
fn line_search(phi: impl Fn(f64) -> f64, hi: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0, hi);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (phi(c), phi(d));
    for _ in 0..LINE_SEARCH_STEPS {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = phi(d);
        }
    }
    let mid = 0.5 * (a + b);
    // endpoints matter for drop steps and for linear pieces
    let candidates = [(0.0, phi(0.0)), (mid, phi(mid)), (hi, phi(hi))];
    let best = candidates.iter().min_by(|p, q| p.1.total_cmp(&q.1)).expect("nonempty");
    if best.1 < candidates[0].1 {
        best.0
    } else {
        0.0
    }
}

/// Per-coordinate budget weights `P(u) g(s)`.
fn budget_row(ch: &DiscreteAvmac, input: &InputDistribution) -> Vec<f64> {
    input.p_u.iter().flat_map(|&pu| ch.g.iter().map(move |&g| pu * g)).collect()
}

/// One damped Newton step for the objective restricted to the smallest face
/// containing `x`; `None` when it does not decrease the objective.
fn newton_on_face(f: &MixedInformation<'_>, x: &[f64], c: &[f64], lambda: f64) -> Option<Vec<f64>> {
    let cs = f.ch.card_s;
    let free: Vec<usize> = (0..x.len()).filter(|&k| x[k] > 1e-12 && f.input.p_u[k / cs] > 0.0).collect();
    if free.is_empty() {
        return None;
    }
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for u in 0..f.input.card_u() {
        let row: Vec<f64> = free.iter().map(|&k| if k / cs == u { 1.0 } else { 0.0 }).collect();
        if row.iter().any(|&v| v != 0.0) {
            rows.push(row);
        }
    }
    let slack = lambda - dot(c, x);
    let tight = slack <= 1e-10 * lambda.max(1.0);
    if tight {
        let row: Vec<f64> = free.iter().map(|&k| c[k]).collect();
        if row.iter().any(|&v| v != 0.0) {
            rows.push(row);
        }
    }
    let (nf, m) = (free.len(), rows.len());
    let n = x.len();
    let (value, grad) = f.evaluate(x, true);
    let h = f.hessian(x);
    let scale = free.iter().map(|&k| h[k * n + k].abs()).fold(0.0, f64::max);
    let mut kkt = DMatrix::<f64>::zeros(nf + m, nf + m);
    let mut rhs = DVector::<f64>::zeros(nf + m);
    for (a, &ka) in free.iter().enumerate() {
        for (b, &kb) in free.iter().enumerate() {
            kkt[(a, b)] = h[ka * n + kb];
        }
        kkt[(a, a)] += 1e-12 * (1.0 + scale);
        rhs[a] = -grad[ka];
        for (r, row) in rows.iter().enumerate() {
            kkt[(a, nf + r)] = row[a];
            kkt[(nf + r, a)] = row[a];
        }
    }
    let sol = kkt.lu().solve(&rhs)?;
    let mut d = vec![0.0; n];
    free.iter().enumerate().for_each(|(a, &k)| d[k] = sol[a]);
    if d.iter().all(|v| v.abs() < 1e-15) || !d.iter().all(|v| v.is_finite()) {
        return None;
    }
    // largest step that stays in the polytope
    let mut t_max: f64 = 1.0;
    for k in 0..n {
        if d[k] < 0.0 {
            t_max = t_max.min(x[k] / -d[k]);
        }
    }
    let cd = dot(c, &d);
    if !tight && cd > 0.0 {
        t_max = t_max.min(slack / cd);
    }
    let mut t = t_max;
    for _ in 0..40 {
        let y: Vec<f64> = axpy(x, t, &d).into_iter().map(|v| if v < 1e-15 { 0.0 } else { v }).collect();
        if dot(c, &y) <= lambda + 1e-12 && f.value(&y) < value {
            return Some(y);
        }
        t *= 0.5;
    }
    None
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(x: &[f64], t: f64, d: &[f64]) -> Vec<f64> {
    x.iter().zip(d).map(|(a, b)| (a + t * b).max(0.0)).collect()
}


/// Evaluates the objective for a given state law through the generic
/// information routines on the full joint law of `(u, x, y, s, z)`.
pub fn evaluate_objective(
    ch: &DiscreteAvmac,
    input: &InputDistribution,
    p_s_given_u: &CondDistribution,
    kind: Objective,
) -> Result<f64> {
    let arity = vec![input.card_u(), ch.card_x, ch.card_y, ch.card_s, ch.card_z];
    let joint = JointDistribution::from_fn(arity, |i| {
        let (u, x, y, s, z) = (i[0], i[1], i[2], i[3], i[4]);
        input.p_u[u]
            * input.p_x_given_u[u][x]
            * input.p_y_given_u[u][y]
            * p_s_given_u.row(u)[s]
            * ch.w(x, y, s, z)
    })
    .or_else(|_| {
        // tolerate rounding from solver-produced laws
        let mut probs = Vec::new();
        crate::dist::for_each_index(&[input.card_u(), ch.card_x, ch.card_y, ch.card_s, ch.card_z], |i| {
            probs.push(
                input.p_u[i[0]]
                    * input.p_x_given_u[i[0]][i[1]]
                    * input.p_y_given_u[i[0]][i[2]]
                    * p_s_given_u.row(i[0])[i[3]]
                    * ch.w(i[1], i[2], i[3], i[4]),
            )
        });
        let t: f64 = probs.iter().sum();
        JointDistribution::new(
            vec![input.card_u(), ch.card_x, ch.card_y, ch.card_s, ch.card_z],
            probs.into_iter().map(|p| p / t).collect(),
        )
    })?;
    match kind {
        Objective::R1 => cond_mutual_information(&joint, &[1], &[4], &[2, 0]),
        Objective::R2 => cond_mutual_information(&joint, &[2], &[4], &[1, 0]),
        Objective::Sum => cond_mutual_information(&joint, &[1, 2], &[4], &[0]),
    }
}

/// Exhaustive minimization over state laws on a simplex grid (per `u`), for
/// checking the iterative solver on small alphabets.
pub fn grid_jammer_oracle(ch: &DiscreteAvmac, input: &InputDistribution, kind: Objective, step: f64) -> Result<f64> {
    let points = crate::grid::simplex_grid(ch.card_s, step)?;
    let cu = input.card_u();
    let f = MixedInformation { ch, input, kind };
    let costs: Vec<f64> = points.iter().map(|p| crate::channel::dot(p, &ch.g)).collect();
    let mut best = f64::INFINITY;
    let mut idx = vec![0usize; cu];
    loop {
        let cost: f64 = (0..cu).map(|u| input.p_u[u] * costs[idx[u]]).sum();
        if cost <= ch.lambda + 1e-12 {
            let r: Vec<f64> = idx.iter().flat_map(|&k| points[k].iter().copied()).collect();
            best = best.min(f.value(&r));
        }
        let mut k = 0;
        loop {
            if k == cu {
                return Ok(best);
            }
            idx[k] += 1;
            if idx[k] < points.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
