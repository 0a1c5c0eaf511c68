//! Strong symmetrizability: the spoofed words may follow any coupled law
//! whose marginals match the codebook composition.
//!
//! For one time-sharing symbol the value is
//!
//! ```text
//! min_{q in Q_symm}  max_{P in coupled laws}  sum_t P(t) h_t(q),   h_t(q) = sum_s q(s|t) g(s)
//! ```
//!
//! (the order of min and max is immaterial by the minimax theorem). Writing the
//! inner maximum `max { h'P : CP = d, P >= 0 }` through its dual
//! `min { d'mu : C'mu >= h }` turns the whole problem into a single LP in
//! `(q, mu)`, whose optimal `q` is a minimax jammer law.

use crate::error::Result;
use crate::lp::{solve_lp, Constraints, FeasibleBasis, LpStatus};

use super::lp_build::{decode, tuple_probs, SymmetrizingLp};

/// Linear description `C P = d` of the coupled laws over the conditioning
/// tuples `t = (x^{I-1}, y^{J-1})`:
///
/// * total mass one;
/// * every x-coordinate has marginal `px`, every y-coordinate has marginal `py`;
/// * for every graph edge `(k, l)` whose endpoints both index a coordinate of
///   `t`, the pair `(x_k, y_l)` has law `px x py`.
pub fn coupling_constraints(lp: &SymmetrizingLp, px: &[f64], py: &[f64]) -> Constraints {
    let (ix, jy) = (lp.graph.i - 1, lp.graph.j - 1);
    let (cx, cy) = (lp.card_x, lp.card_y);
    let tuples: Vec<(Vec<usize>, Vec<usize>)> = (0..lp.num_conditionings())
        .map(|t| (decode(t / lp.y_tuples, cx, ix), decode(t % lp.y_tuples, cy, jy)))
        .collect();
    let mut c = Constraints::new(tuples.len());
    c.push_dense(&vec![1.0; tuples.len()], 1.0);
    for k in 0..ix {
        for a in 0..cx {
            let row: Vec<f64> = tuples.iter().map(|(x, _)| f64::from(u8::from(x[k] == a))).collect();
            c.push_dense(&row, px[a]);
        }
    }
    for l in 0..jy {
        for b in 0..cy {
            let row: Vec<f64> = tuples.iter().map(|(_, y)| f64::from(u8::from(y[l] == b))).collect();
            c.push_dense(&row, py[b]);
        }
    }
    for &(k, l) in &lp.graph.edges {
        if k >= ix || l >= jy {
            continue;
        }
        for a in 0..cx {
            for b in 0..cy {
                let row: Vec<f64> =
                    tuples.iter().map(|(x, y)| f64::from(u8::from(x[k] == a && y[l] == b))).collect();
                c.push_dense(&row, px[a] * py[b]);
            }
        }
    }
    c
}

/// Minimax value and jammer law for one time-sharing symbol; `None` when the
/// graph admits no symmetrizing law.
pub fn strong_cost(lp: &SymmetrizingLp, px: &[f64], py: &[f64], g: &[f64]) -> Result<Option<(f64, Vec<f64>)>> {
    if !lp.is_feasible() {
        return Ok(None);
    }
    let coupling = coupling_constraints(lp, px, py);
    let nq = lp.num_vars();
    let nt = lp.num_conditionings();
    let nc = coupling.rows();
    let ncols = nq + 2 * nc + nt;
    let mut sys = Constraints::new(ncols);
    let mut row = vec![0.0; ncols];
    for r in 0..lp.constraints.rows() {
        row.iter_mut().for_each(|v| *v = 0.0);
        row[..nq].copy_from_slice(lp.constraints.row(r));
        sys.push_dense(&row, lp.constraints.rhs()[r]);
    }
    // (C' mu)_t - h_t(q) - slack_t = 0
    for t in 0..nt {
        row.iter_mut().for_each(|v| *v = 0.0);
        for c in 0..nc {
            let a = coupling.row(c)[t];
            row[nq + c] = a;
            row[nq + nc + c] = -a;
        }
        for (s, gs) in g.iter().enumerate() {
            row[lp.var(s, t)] = -gs;
        }
        row[nq + 2 * nc + t] = -1.0;
        sys.push_dense(&row, 0.0);
    }
    let mut obj = vec![0.0; ncols];
    for (c, d) in coupling.rhs().iter().enumerate() {
        obj[nq + c] = *d;
        obj[nq + nc + c] = -d;
    }
    let sol = match FeasibleBasis::find(&sys)? {
        Some(basis) => basis.minimize(&obj)?,
        None => return Ok(None),
    };
    debug_assert_eq!(sol.status, LpStatus::Optimal);
    Ok(Some((sol.value, sol.point[..nq].to_vec())))
}

/// `max_P sum_t P(t) h_t(q)` over coupled laws, for a fixed jammer law.
pub fn worst_coupled_cost(lp: &SymmetrizingLp, px: &[f64], py: &[f64], g: &[f64], q: &[f64]) -> Result<f64> {
    let coupling = coupling_constraints(lp, px, py);
    let h: Vec<f64> = (0..lp.num_conditionings())
        .map(|t| -(0..lp.card_s).map(|s| q[lp.var(s, t)] * g[s]).sum::<f64>())
        .collect();
    let sol = solve_lp(&coupling, &h)?;
    Ok(-sol.value)
}

/// Expected cost under the product law (the weak objective), for a fixed law.
pub fn product_law_cost(lp: &SymmetrizingLp, px: &[f64], py: &[f64], g: &[f64], q: &[f64]) -> f64 {
    let wx = tuple_probs(px, lp.graph.i - 1);
    let wy = tuple_probs(py, lp.graph.j - 1);
    let mut total = 0.0;
    for (a, pa) in wx.iter().enumerate() {
        for (b, pb) in wy.iter().enumerate() {
            let t = a * lp.y_tuples + b;
            total += pa * pb * (0..lp.card_s).map(|s| q[lp.var(s, t)] * g[s]).sum::<f64>();
        }
    }
    total
}

/// Linear system in `Q(x^{I-1}, y^{J-1})` expressing that
/// `Q(x_{-i}, y_{-j}) p1(x_i) p2(y_j)` is the same for every cell `(i, j)` of
/// the full `I x J` grid, plus total mass one. For `I, J >= 2` and fully
/// supported `p1, p2` its only solution is the product law.
pub fn pairwise_swap_system(i: usize, j: usize, p1: &[f64], p2: &[f64]) -> Constraints {
    let (cx, cy) = (p1.len(), p2.len());
    let xt = cx.pow(i as u32 - 1);
    let yt = cy.pow(j as u32 - 1);
    let mut sys = Constraints::new(xt * yt);
    sys.push_dense(&vec![1.0; xt * yt], 1.0);
    let cells: Vec<(usize, usize)> = (0..i).flat_map(|a| (0..j).map(move |b| (a, b))).collect();
    for xi in 0..cx.pow(i as u32) {
        let x = decode(xi, cx, i);
        for yi in 0..cy.pow(j as u32) {
            let y = decode(yi, cy, j);
            let first = cells[0];
            for &other in &cells[1..] {
                let mut row = vec![0.0; xt * yt];
                row[super::lp_build::edge_conditioning(&x, &y, first, cx, cy)] += p1[x[first.0]] * p2[y[first.1]];
                row[super::lp_build::edge_conditioning(&x, &y, other, cx, cy)] -= p1[x[other.0]] * p2[y[other.1]];
                sys.push_dense(&row, 0.0);
            }
        }
    }
    sys
}
