//! Closed-form planning: identity envelope, gap bound, the sufficient
//! imaginary time for a target fidelity, query depth and CNOT estimates.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::fpaa_engine::analytic_pl;

/// A threshold on imaginary time that may not exist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaThreshold {
    Finite(f64),
    /// No finite imaginary time reaches the target (zero ground overlap).
    Unreachable,
}

impl BetaThreshold {
    pub fn finite(self) -> Option<f64> {
        match self {
            Self::Finite(b) => Some(b),
            Self::Unreachable => None,
        }
    }
}

/// `gamma_0 e^{-2 beta (W + E_0)}`.
pub fn envelope(gamma0: f64, w_norm: f64, e0: f64, beta: f64) -> f64 {
    gamma0 * (-2.0 * beta * (w_norm + e0)).exp()
}

/// Lower bound `gamma_0 / (gamma_0 + (1 - gamma_0) e^{-2 beta Delta})` on `F_g`.
pub fn gap_bound_f(gamma0: f64, delta_gap: f64, beta: f64) -> f64 {
    if gamma0 <= 0.0 {
        return 0.0;
    }
    gamma0 / (gamma0 + (1.0 - gamma0) * (-2.0 * beta * delta_gap).exp())
}

fn check_unit_open(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must lie in (0, 1), got {v}")))
    }
}

fn check_gamma0(gamma0: f64) -> Result<()> {
    if (0.0..=1.0).contains(&gamma0) {
        Ok(())
    } else {
        Err(invalid(format!("gamma0 must lie in [0, 1], got {gamma0}")))
    }
}

fn check_gap(delta_gap: f64) -> Result<()> {
    if delta_gap > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!(
            "spectral gap must be > 0, got {delta_gap}"
        )))
    }
}

/// Smallest imaginary time at which the gap bound certifies `F_g >= target_f`.
pub fn beta_star(gamma0: f64, delta_gap: f64, target_f: f64) -> Result<BetaThreshold> {
    check_unit_open("target fidelity", target_f)?;
    check_gamma0(gamma0)?;
    if gamma0 == 0.0 {
        return Ok(BetaThreshold::Unreachable);
    }
    if gamma0 >= 1.0 || target_f <= gamma0 {
        return Ok(BetaThreshold::Finite(0.0));
    }
    check_gap(delta_gap)?;
    let ratio = target_f * (1.0 - gamma0) / (gamma0 * (1.0 - target_f));
    Ok(BetaThreshold::Finite(
        (ratio.ln() / (2.0 * delta_gap)).max(0.0),
    ))
}

/// Bounds `[gamma_0 e^{-2 beta* (W+E_0)}, that / target_f]` on `P_LCU(beta*)`.
pub fn p_sandwich(gamma0: f64, w_norm: f64, e0: f64, beta_star: f64, target_f: f64) -> (f64, f64) {
    let lower = envelope(gamma0, w_norm, e0, beta_star);
    (lower, lower / target_f)
}

/// Query depths for a lower bound `lambda_star` on the success probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QueryPlan {
    /// Smallest odd `L` whose amplified probability reaches `1 - delta^2`.
    pub exact: usize,
    /// `ceil(ln(2/delta) / sqrt(lambda_star))`.
    pub asymptotic: u64,
}

pub fn plan_queries(lambda_star: f64, fpaa_delta: f64) -> Result<QueryPlan> {
    check_unit_open("FPAA delta", fpaa_delta)?;
    if !(0.0..=1.0).contains(&lambda_star) {
        return Err(invalid(format!(
            "lambda must lie in (0, 1], got {lambda_star}"
        )));
    }
    if lambda_star == 0.0 {
        return Err(Error::Unbounded(
            "a zero success-probability bound admits no finite query depth".into(),
        ));
    }
    let target = 1.0 - fpaa_delta * fpaa_delta;
    let reaches = |l: usize| -> Result<bool> {
        let depth = 2 * l + 1;
        Ok(analytic_pl(lambda_star, depth, fpaa_delta)? >= target)
    };
    // Exponential search on l = (L - 1) / 2, then bisection.
    let mut hi = 0usize;
    while !reaches(hi)? {
        hi = if hi == 0 { 1 } else { hi * 2 };
        if hi > 1 << 40 {
            return Err(Error::Unbounded(format!(
                "query depth for lambda = {lambda_star} exceeds 2^41"
            )));
        }
    }
    let mut lo = hi / 2;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid)? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let asymptotic = ((2.0 / fpaa_delta).ln() / lambda_star.sqrt()).ceil() as u64;
    Ok(QueryPlan {
        exact: 2 * hi + 1,
        asymptotic,
    })
}

/// Imaginary time at which the post-selected state is within `eps` (2-norm)
/// of the normalized ground projection of the initial state.
pub fn state_error_beta(gamma0: f64, delta_gap: f64, eps: f64) -> Result<BetaThreshold> {
    check_gamma0(gamma0)?;
    if eps.is_nan() || eps <= 0.0 {
        return Err(invalid(format!("epsilon must be > 0, got {eps}")));
    }
    if gamma0 == 0.0 {
        return Ok(BetaThreshold::Unreachable);
    }
    if gamma0 >= 1.0 || eps >= (2.0 - 2.0 * gamma0.sqrt()).sqrt() {
        return Ok(BetaThreshold::Finite(0.0));
    }
    check_gap(delta_gap)?;
    let base = 1.0 - eps * eps / 2.0;
    let denom = base.powi(-2) - 1.0;
    let ratio = ((1.0 - gamma0) / gamma0) / denom;
    Ok(BetaThreshold::Finite(
        (ratio.ln() / (2.0 * delta_gap)).max(0.0),
    ))
}

/// Leading-order CNOT estimate with every decomposition constant set to 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CnotReport {
    pub label: &'static str,
    /// Two-qubit gates in one LCU pass, `sum_mu k_mu`.
    pub lcu_pass: u64,
    /// Good-subspace oracle on `M` controls, `M^2`.
    pub oracle: u64,
    /// Reflection on `M + n` controls plus two CNOTs, `(M + n)^2 + 2`.
    pub reflection: u64,
    pub iterations: u64,
    /// `iterations * (lcu_pass + oracle + reflection) + lcu_pass`.
    pub total: u64,
    /// `n + M + 1`.
    pub qubits_total: u64,
}

pub fn cnot_estimate(n: usize, localities: &[usize], iterations: u64) -> CnotReport {
    let lcu_pass: u64 = localities.iter().map(|&k| k as u64).sum();
    let m = localities.len() as u64;
    let width = m + n as u64;
    let oracle = m * m;
    let reflection = width * width + 2;
    CnotReport {
        label: "ESTIMATE",
        lcu_pass,
        oracle,
        reflection,
        iterations,
        total: iterations * (lcu_pass + oracle + reflection) + lcu_pass,
        qubits_total: width + 1,
    }
}

/// Inputs to [`plan`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanInputs {
    pub gamma0: f64,
    pub delta_gap: f64,
    pub w_norm: f64,
    pub e0: f64,
    pub target_f: f64,
    pub fpaa_delta: f64,
}

impl PlanInputs {
    pub fn validate(&self) -> Result<()> {
        check_gamma0(self.gamma0)?;
        check_unit_open("target fidelity", self.target_f)?;
        check_unit_open("FPAA delta", self.fpaa_delta)?;
        if self.w_norm < 0.0 {
            return Err(invalid("W must be >= 0"));
        }
        // Tolerate rounding in enumerated energies.
        if self.w_norm + self.e0 < -1e-9 * self.w_norm.max(1.0) {
            return Err(invalid(format!(
                "W + E0 = {} < 0 violates the triangle inequality",
                self.w_norm + self.e0
            )));
        }
        Ok(())
    }
}

/// Everything needed to run at the fidelity threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Plan {
    pub beta_star: f64,
    pub p_lower: f64,
    pub p_upper: f64,
    pub lambda_star: f64,
    pub queries: QueryPlan,
    pub cnot: CnotReport,
    pub error_beta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PlanOutcome {
    Reachable(Plan),
    Unreachable { reason: String },
}

/// Builds a full plan for a Hamiltonian with `num_terms` terms of the given
/// localities on `n` qubits. `epsilon` additionally requests the state-error
/// threshold.
pub fn plan(
    inputs: &PlanInputs,
    n: usize,
    localities: &[usize],
    epsilon: Option<f64>,
) -> Result<PlanOutcome> {
    inputs.validate()?;
    let beta = match beta_star(inputs.gamma0, inputs.delta_gap, inputs.target_f)? {
        BetaThreshold::Finite(b) => b,
        BetaThreshold::Unreachable => {
            return Ok(PlanOutcome::Unreachable {
                reason: "initial state has zero overlap with the ground subspace".into(),
            })
        }
    };
    let (p_lower, p_upper) = p_sandwich(
        inputs.gamma0,
        inputs.w_norm,
        inputs.e0,
        beta,
        inputs.target_f,
    );
    let lambda_star = p_lower.min(1.0);
    let queries = plan_queries(lambda_star, inputs.fpaa_delta)?;
    let cnot = cnot_estimate(n, localities, queries.exact as u64);
    let error_beta = match epsilon {
        Some(eps) => state_error_beta(inputs.gamma0, inputs.delta_gap, eps)?.finite(),
        None => None,
    };
    Ok(PlanOutcome::Reachable(Plan {
        beta_star: beta,
        p_lower,
        p_upper,
        lambda_star,
        queries,
        cnot,
        error_beta,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MAXCUT_G0: f64 = 3.0 / 16.0;

    fn finite(t: BetaThreshold) -> f64 {
        t.finite().expect("finite threshold")
    }

    #[test]
    fn envelope_values() {
        for beta in [0.0f64, 0.4, 1.7] {
            let want = MAXCUT_G0 * (-4.0 * beta).exp();
            assert!((envelope(MAXCUT_G0, 5.0, -3.0, beta) - want).abs() < 1e-16);
            let hubo = envelope(1.0 / 32.0, 11.4, -6.6, beta);
            assert!((hubo - (-9.6 * beta).exp() / 32.0).abs() < 1e-15);
        }
        assert_eq!(envelope(0.3, 2.0, -1.0, 0.0), 0.3);
    }

    #[test]
    fn gap_bound_values() {
        assert_eq!(gap_bound_f(0.0, 2.0, 1.0), 0.0);
        assert_eq!(gap_bound_f(0.4, 2.0, 0.0), 0.4);
        assert!(gap_bound_f(MAXCUT_G0, 2.0, 0.92) >= 0.9);
    }

    #[test]
    fn beta_star_on_benchmark_graph() {
        for (target, want) in [(0.5, 0.37), (0.9, 0.92), (0.98, 1.34)] {
            let b = finite(beta_star(MAXCUT_G0, 2.0, target).unwrap());
            assert!((b - want).abs() <= 0.01, "{target}: {b}");
        }
    }

    #[test]
    fn beta_star_edge_cases() {
        assert_eq!(
            beta_star(0.3, 1.0, 0.2).unwrap(),
            BetaThreshold::Finite(0.0)
        );
        assert_eq!(
            beta_star(0.3, 1.0, 0.3).unwrap(),
            BetaThreshold::Finite(0.0)
        );
        assert_eq!(
            beta_star(0.0, 1.0, 0.9).unwrap(),
            BetaThreshold::Unreachable
        );
        assert_eq!(
            beta_star(1.0, 1.0, 0.9).unwrap(),
            BetaThreshold::Finite(0.0)
        );
        assert!(beta_star(0.3, 1.0, 1.0).is_err());
        assert!(beta_star(0.3, 1.0, 0.0).is_err());
        assert!(beta_star(0.3, 0.0, 0.9).is_err());
    }

    #[test]
    fn beta_star_hubo_uniform() {
        let b = finite(beta_star(1.0 / 32.0, 1.2, 0.9).unwrap());
        assert!((b - 279f64.ln() / 2.4).abs() < 1e-12);
        assert!((b - 2.35).abs() < 0.01);
    }

    #[test]
    fn sandwich_values() {
        let (lo, hi) = p_sandwich(MAXCUT_G0, 5.0, -3.0, 0.92, 0.9);
        assert!((lo - MAXCUT_G0 * (-4.0f64 * 0.92).exp()).abs() < 1e-16);
        assert!((hi - lo / 0.9).abs() < 1e-16);
        let (lo, hi) = p_sandwich(MAXCUT_G0, 5.0, -3.0, 0.92, 1.0 - 1e-12);
        assert!((hi - lo).abs() < 1e-12);
    }

    #[test]
    fn query_planning() {
        assert_eq!(plan_queries(0.995, 0.1).unwrap().exact, 1);
        let lambda = MAXCUT_G0 * (-4.0f64 * 1.34).exp();
        let q = plan_queries(lambda, 0.1).unwrap();
        assert!(q.exact % 2 == 1 && q.exact > 1);
        assert!(analytic_pl(lambda, q.exact, 0.1).unwrap() >= 0.99);
        assert!(analytic_pl(lambda, q.exact - 2, 0.1).unwrap() < 0.99);
        assert!(plan_queries(2.0 * lambda, 0.1).unwrap().exact <= q.exact);
        assert!(matches!(plan_queries(0.0, 0.1), Err(Error::Unbounded(_))));
    }

    #[test]
    fn state_error_threshold_cases() {
        let g = MAXCUT_G0;
        let trivial = (2.0 - 2.0 * g.sqrt()).sqrt();
        assert_eq!(
            state_error_beta(g, 2.0, trivial).unwrap(),
            BetaThreshold::Finite(0.0)
        );
        assert_eq!(
            state_error_beta(g, 2.0, 1.5).unwrap(),
            BetaThreshold::Finite(0.0)
        );
        assert_eq!(
            state_error_beta(1.0, 2.0, 0.01).unwrap(),
            BetaThreshold::Finite(0.0)
        );
        let b = finite(state_error_beta(g, 2.0, 0.1).unwrap());
        let expected = ((13.0 / 3.0) / (0.995f64.powi(-2) - 1.0)).ln() / 4.0;
        assert!((b - expected).abs() < 1e-14);
        // At that beta the gap bound gives a state error of exactly eps.
        let f = gap_bound_f(g, 2.0, b);
        assert!(((2.0 - 2.0 * f.sqrt()).sqrt() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn cnot_breakdown() {
        let r = cnot_estimate(5, &[2; 5], 0);
        assert_eq!((r.lcu_pass, r.total, r.qubits_total), (10, 10, 11));
        let r = cnot_estimate(5, &[2; 5], 3);
        assert_eq!(r.oracle, 25);
        assert_eq!(r.reflection, 102);
        assert_eq!(r.total, 3 * (10 + 25 + 102) + 10);
    }

    #[test]
    fn plan_unreachable_and_reachable() {
        let mut inputs = PlanInputs {
            gamma0: 0.0,
            delta_gap: 2.0,
            w_norm: 5.0,
            e0: -3.0,
            target_f: 0.9,
            fpaa_delta: 0.1,
        };
        assert!(matches!(
            plan(&inputs, 5, &[2; 5], None).unwrap(),
            PlanOutcome::Unreachable { .. }
        ));
        inputs.gamma0 = MAXCUT_G0;
        let PlanOutcome::Reachable(p) = plan(&inputs, 5, &[2; 5], Some(0.1)).unwrap() else {
            panic!("expected a plan");
        };
        assert!((p.beta_star - 0.92).abs() < 0.01);
        assert!(p.p_lower <= p.p_upper);
        assert!(p.error_beta.unwrap() > 0.0);
        assert_eq!(p.cnot.qubits_total, 11);
        inputs.e0 = -6.0;
        assert!(plan(&inputs, 5, &[2; 5], None).is_err());
    }
}
