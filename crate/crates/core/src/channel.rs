//! Discrete two-user channel with an adversarial state, plus the factorized
//! input laws `P_u P_{x|u} P_{y|u}` that drive every bound computation.

use crate::error::{Error, Result};

const ROW_TOL: f64 = 1e-12;

/// A two-user oblivious arbitrarily varying multiple-access channel with
/// per-letter input costs `f1`, `f2`, state cost `g` and average budgets.
///
/// The transition law is stored densely, indexed `(x, y, s, z)` in row-major
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteAvmac {
    pub card_x: usize,
    pub card_y: usize,
    pub card_s: usize,
    pub card_z: usize,
    pub w: Vec<f64>,
    pub f1: Vec<f64>,
    pub f2: Vec<f64>,
    pub g: Vec<f64>,
    pub gamma1: f64,
    pub gamma2: f64,
    pub lambda: f64,
    pub name: Option<String>,
}

impl DiscreteAvmac {
    /// Builds a channel from a transition function and validates it.
    #[allow(clippy::too_many_arguments)]
    pub fn from_fn(
        card_x: usize,
        card_y: usize,
        card_s: usize,
        card_z: usize,
        mut law: impl FnMut(usize, usize, usize, usize) -> f64,
        f1: Vec<f64>,
        f2: Vec<f64>,
        g: Vec<f64>,
        budgets: (f64, f64, f64),
    ) -> Result<Self> {
        let mut w = Vec::with_capacity(card_x * card_y * card_s * card_z);
        for x in 0..card_x {
            for y in 0..card_y {
                for s in 0..card_s {
                    for z in 0..card_z {
                        w.push(law(x, y, s, z));
                    }
                }
            }
        }
        let ch = Self {
            card_x,
            card_y,
            card_s,
            card_z,
            w,
            f1,
            f2,
            g,
            gamma1: budgets.0,
            gamma2: budgets.1,
            lambda: budgets.2,
            name: None,
        };
        ch.validate()?;
        Ok(ch)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Returns a copy with the budgets replaced (not re-validated).
    pub fn with_budgets(&self, gamma1: f64, gamma2: f64, lambda: f64) -> Self {
        Self { gamma1, gamma2, lambda, ..self.clone() }
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        Self { lambda, ..self.clone() }
    }

    /// Budgets that no codeword or state sequence can exceed. The state budget
    /// sits strictly above `max g` so that every state law is admissible under
    /// the strict symmetrizability inequality.
    pub fn unconstrained(&self) -> Self {
        self.with_budgets(max_of(&self.f1), max_of(&self.f2), max_of(&self.g) + 1.0)
    }

    /// Checks every structural invariant, reporting the first violation.
    pub fn validate(&self) -> Result<()> {
        for (name, card) in [
            ("x", self.card_x),
            ("y", self.card_y),
            ("s", self.card_s),
            ("z", self.card_z),
        ] {
            if card == 0 {
                return Err(Error::EmptyAlphabet(name));
            }
        }
        let expected = self.card_x * self.card_y * self.card_s * self.card_z;
        if self.w.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "expected |X||Y||S||Z| = {expected} entries in W, found {}",
                self.w.len()
            )));
        }
        for (table, costs, card) in [
            ("f1", &self.f1, self.card_x),
            ("f2", &self.f2, self.card_y),
            ("g", &self.g, self.card_s),
        ] {
            if costs.len() != card {
                return Err(Error::DimensionMismatch(format!(
                    "cost table `{table}` has {} entries, alphabet has {card}",
                    costs.len()
                )));
            }
            if let Some((index, &value)) =
                costs.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0)
            {
                return Err(Error::InvalidCost { table, index, value });
            }
        }
        for x in 0..self.card_x {
            for y in 0..self.card_y {
                for s in 0..self.card_s {
                    let row = self.row(x, y, s);
                    if let Some(z) = row.iter().position(|p| *p < 0.0 || !p.is_finite()) {
                        return Err(Error::NegativeProbability { x, y, s, z });
                    }
                    let sum: f64 = row.iter().sum();
                    if (sum - 1.0).abs() > ROW_TOL {
                        return Err(Error::NonStochasticRow { x, y, s, sum });
                    }
                }
            }
        }
        for (name, value) in [
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("lambda", self.lambda),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidBudget { name, value });
            }
        }
        let min_f1 = min_of(&self.f1);
        if self.gamma1 < min_f1 {
            return Err(Error::InfeasibleInputBudget { user: 1, budget: self.gamma1, min_cost: min_f1 });
        }
        let min_f2 = min_of(&self.f2);
        if self.gamma2 < min_f2 {
            return Err(Error::InfeasibleInputBudget { user: 2, budget: self.gamma2, min_cost: min_f2 });
        }
        Ok(())
    }

    #[inline]
    pub fn w(&self, x: usize, y: usize, s: usize, z: usize) -> f64 {
        self.w[((x * self.card_y + y) * self.card_s + s) * self.card_z + z]
    }

    /// The output distribution `W(.|x, y, s)`.
    #[inline]
    pub fn row(&self, x: usize, y: usize, s: usize) -> &[f64] {
        let start = ((x * self.card_y + y) * self.card_s + s) * self.card_z;
        &self.w[start..start + self.card_z]
    }

    pub fn g_min(&self) -> f64 {
        min_of(&self.g)
    }

    pub fn g_max(&self) -> f64 {
        max_of(&self.g)
    }

    /// Cheapest state symbol (lowest index among ties).
    pub fn argmin_g(&self) -> usize {
        argmin(&self.g)
    }

    /// The largest admissible symmetrizing cost: strict `< lambda` is checked
    /// as `<= lambda - eps` with `eps = 1e-9 * max(1, lambda)`.
    pub fn strict_state_threshold(&self) -> f64 {
        self.lambda - 1e-9 * self.lambda.max(1.0)
    }
}

/// Factorized input law `P_u(u) P_{x|u}(x|u) P_{y|u}(y|u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InputDistribution {
    pub p_u: Vec<f64>,
    pub p_x_given_u: Vec<Vec<f64>>,
    pub p_y_given_u: Vec<Vec<f64>>,
}

impl InputDistribution {
    pub fn new(p_u: Vec<f64>, p_x_given_u: Vec<Vec<f64>>, p_y_given_u: Vec<Vec<f64>>) -> Result<Self> {
        let input = Self { p_u, p_x_given_u, p_y_given_u };
        input.check_shape()?;
        Ok(input)
    }

    /// Single time-sharing symbol with the given marginals.
    pub fn product(p_x: Vec<f64>, p_y: Vec<f64>) -> Result<Self> {
        Self::new(vec![1.0], vec![p_x], vec![p_y])
    }

    pub fn uniform(card_x: usize, card_y: usize) -> Self {
        Self {
            p_u: vec![1.0],
            p_x_given_u: vec![vec![1.0 / card_x as f64; card_x]],
            p_y_given_u: vec![vec![1.0 / card_y as f64; card_y]],
        }
    }

    pub fn card_u(&self) -> usize {
        self.p_u.len()
    }

    fn check_shape(&self) -> Result<()> {
        if self.p_u.is_empty() {
            return Err(Error::NonFactorizedInput("empty time-sharing alphabet".into()));
        }
        if self.p_x_given_u.len() != self.p_u.len() || self.p_y_given_u.len() != self.p_u.len() {
            return Err(Error::NonFactorizedInput(
                "need one conditional input law per time-sharing symbol".into(),
            ));
        }
        check_simplex("P_u", &self.p_u)?;
        for (u, (px, py)) in self.p_x_given_u.iter().zip(&self.p_y_given_u).enumerate() {
            check_simplex(&format!("P_x|u={u}"), px)?;
            check_simplex(&format!("P_y|u={u}"), py)?;
        }
        let cx = self.p_x_given_u[0].len();
        let cy = self.p_y_given_u[0].len();
        if self.p_x_given_u.iter().any(|p| p.len() != cx) || self.p_y_given_u.iter().any(|p| p.len() != cy) {
            return Err(Error::NonFactorizedInput("ragged conditional input laws".into()));
        }
        Ok(())
    }

    /// Checks alphabet sizes against the channel and the input cost budgets.
    pub fn check_against(&self, ch: &DiscreteAvmac) -> Result<()> {
        self.check_shape()?;
        if self.p_x_given_u[0].len() != ch.card_x || self.p_y_given_u[0].len() != ch.card_y {
            return Err(Error::DimensionMismatch(format!(
                "input law over {}x{} symbols, channel has {}x{}",
                self.p_x_given_u[0].len(),
                self.p_y_given_u[0].len(),
                ch.card_x,
                ch.card_y
            )));
        }
        let (c1, c2) = self.expected_costs(ch);
        if c1 > ch.gamma1 + 1e-12 {
            return Err(Error::InvalidParameter(format!("E[f1] = {c1} exceeds gamma1 = {}", ch.gamma1)));
        }
        if c2 > ch.gamma2 + 1e-12 {
            return Err(Error::InvalidParameter(format!("E[f2] = {c2} exceeds gamma2 = {}", ch.gamma2)));
        }
        Ok(())
    }

    pub fn expected_costs(&self, ch: &DiscreteAvmac) -> (f64, f64) {
        let mut c1 = 0.0;
        let mut c2 = 0.0;
        for (u, pu) in self.p_u.iter().enumerate() {
            c1 += pu * dot(&self.p_x_given_u[u], &ch.f1);
            c2 += pu * dot(&self.p_y_given_u[u], &ch.f2);
        }
        (c1, c2)
    }

    /// Returns true when the input meets both input budgets.
    pub fn meets_budgets(&self, ch: &DiscreteAvmac) -> bool {
        let (c1, c2) = self.expected_costs(ch);
        c1 <= ch.gamma1 + 1e-12 && c2 <= ch.gamma2 + 1e-12
    }
}

fn check_simplex(name: &str, p: &[f64]) -> Result<()> {
    if p.is_empty() || p.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::NotADistribution(format!("{name} has a negative or non-finite entry")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::NotADistribution(format!("{name} sums to {sum}")));
    }
    Ok(())
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn min_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

pub(crate) fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

pub(crate) fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x < v[best] {
            best = i;
        }
    }
    best
}

/// A few reference channels used throughout the examples and tests.
pub mod library {
    use super::DiscreteAvmac;

    /// `z = x XOR y XOR s` over bits, state cost `g(s) = s`, zero input costs.
    pub fn binary_xor(lambda: f64) -> DiscreteAvmac {
        DiscreteAvmac::from_fn(
            2,
            2,
            2,
            2,
            |x, y, s, z| if z == x ^ y ^ s { 1.0 } else { 0.0 },
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            (0.0, 0.0, lambda),
        )
        .expect("xor channel is valid")
        .with_name("binary-xor")
    }

    /// Noiseless binary adder `z = x + y` with a single (free) state.
    pub fn noiseless_adder() -> DiscreteAvmac {
        DiscreteAvmac::from_fn(
            2,
            2,
            1,
            3,
            |x, y, _s, z| if z == x + y { 1.0 } else { 0.0 },
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![0.0],
            (0.0, 0.0, 0.0),
        )
        .expect("adder channel is valid")
        .with_name("noiseless-adder")
    }

    /// Binary adder whose output is cyclically shifted by the state:
    /// `z = (x + y + s) mod 3`, `g(s) = s`.
    pub fn shifted_adder(lambda: f64) -> DiscreteAvmac {
        DiscreteAvmac::from_fn(
            2,
            2,
            2,
            3,
            |x, y, s, z| if z == (x + y + s) % 3 { 1.0 } else { 0.0 },
            vec![0.0, 0.0],
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            (0.0, 0.0, lambda),
        )
        .expect("shifted adder is valid")
        .with_name("shifted-adder")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_channel_validates() {
        let ch = library::binary_xor(1.0);
        assert!(ch.validate().is_ok());
        assert_eq!(ch.w(1, 0, 1, 0), 1.0);
        assert_eq!(ch.w(1, 0, 0, 0), 0.0);
    }

    #[test]
    fn short_row_is_rejected() {
        let mut ch = library::binary_xor(1.0);
        // W(.|0,1,1) = (0.9, 0.0)
        let start = ((1) * 2 + 1) * 2;
        ch.w[start] = 0.9;
        ch.w[start + 1] = 0.0;
        let err = ch.validate().unwrap_err();
        assert!(matches!(err, Error::NonStochasticRow { x: 0, y: 1, s: 1, .. }), "{err}");
        assert!(err.to_string().starts_with("non-stochastic row"));
    }

    #[test]
    fn infeasible_input_budget() {
        let mut ch = library::binary_xor(1.0);
        ch.f1 = vec![0.5, 1.0];
        ch.gamma1 = 0.0;
        let err = ch.validate().unwrap_err();
        assert!(err.to_string().contains("infeasible input budget user 1"), "{err}");
    }

    #[test]
    fn negative_cost_is_rejected() {
        let mut ch = library::binary_xor(1.0);
        ch.g = vec![0.0, -1.0];
        assert!(matches!(ch.validate(), Err(Error::InvalidCost { table: "g", index: 1, .. })));
    }

    #[test]
    fn input_costs() {
        let mut ch = library::binary_xor(1.0);
        ch.f1 = vec![0.0, 1.0];
        ch.f2 = vec![0.0, 2.0];
        ch.gamma1 = 0.5;
        ch.gamma2 = 1.0;
        let input = InputDistribution::product(vec![0.5, 0.5], vec![0.5, 0.5]).unwrap();
        assert_eq!(input.expected_costs(&ch), (0.5, 1.0));
        assert!(input.check_against(&ch).is_ok());
        let heavy = InputDistribution::product(vec![0.2, 0.8], vec![0.5, 0.5]).unwrap();
        assert!(heavy.check_against(&ch).is_err());
    }

    #[test]
    fn ragged_input_is_not_factorized() {
        let err = InputDistribution::new(vec![0.5, 0.5], vec![vec![1.0, 0.0]], vec![vec![1.0, 0.0]; 2]);
        assert!(matches!(err, Err(Error::NonFactorizedInput(_))));
    }
}
