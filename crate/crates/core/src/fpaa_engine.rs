//! Fixed-point amplitude amplification of the LCU success event.
//!
//! The marked subspace is "every LCU ancilla reads 0". Reflections are
//! applied as phase masks on the joint statevector, and the reflection about
//! the prepared state is realised literally as `A (phase on |0...0>) A^dagger`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::lcu_engine::{JointState, LcuProgram};
use crate::pauli_model::Spectrum;
use crate::state_prep::{ground_overlap, Preparer};

/// Chebyshev polynomial of the first kind, `T_order(x)`, continued to
/// fractional order and to `x > 1` through `cosh(order * arccosh x)`.
pub fn chebyshev_t(order: f64, x: f64) -> Result<f64> {
    if !(order > 0.0 && order.is_finite()) || x.is_nan() {
        return Err(Error::Domain(format!("T_{order}({x}) is undefined")));
    }
    let integer = order.fract() == 0.0;
    if !integer && x < 1.0 {
        return Err(Error::Domain(format!(
            "fractional-order T_{order} needs x >= 1, got {x}"
        )));
    }
    Ok(if x.abs() <= 1.0 {
        (order * x.acos()).cos()
    } else if x > 1.0 {
        (order * x.acosh()).cosh()
    } else {
        let parity = if order % 2.0 == 0.0 { 1.0 } else { -1.0 };
        parity * (order * (-x).acosh()).cosh()
    })
}

fn check_depth(query_depth: usize, delta: f64) -> Result<()> {
    if query_depth.is_multiple_of(2) {
        return Err(invalid(format!(
            "query depth L must be odd and >= 1, got {query_depth}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

/// `gamma = 1 / T_{1/L}(1/delta)`.
pub fn chebyshev_gamma(query_depth: usize, delta: f64) -> Result<f64> {
    check_depth(query_depth, delta)?;
    Ok(chebyshev_t(1.0 / query_depth as f64, 1.0 / delta)?.recip())
}

/// `arccot` valued in `(0, pi)`.
fn arccot(x: f64) -> f64 {
    FRAC_PI_2 - x.atan()
}

/// Phase-matched schedule for `l = (L - 1) / 2` generalized Grover iterates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FpaaSchedule {
    query_depth: usize,
    delta: f64,
    gamma_cheb: f64,
    alphas: Vec<f64>,
    betas: Vec<f64>,
}

impl FpaaSchedule {
    /// `L = 2l + 1`, the number of applications of the LCU circuit.
    pub fn query_depth(&self) -> usize {
        self.query_depth
    }

    /// `l`, the number of generalized Grover iterates.
    pub fn iterations(&self) -> usize {
        self.alphas.len()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn gamma_cheb(&self) -> f64 {
        self.gamma_cheb
    }

    /// Phases of the reflections about the prepared state.
    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// Phases of the reflections about the good subspace.
    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// Smallest success probability for which `1 - delta^2` is guaranteed.
    pub fn admissible_lambda(&self) -> f64 {
        1.0 - self.gamma_cheb * self.gamma_cheb
    }
}

pub fn phase_schedule(query_depth: usize, delta: f64) -> Result<FpaaSchedule> {
    let gamma = chebyshev_gamma(query_depth, delta)?;
    let l = (query_depth - 1) / 2;
    let root = (1.0 - gamma * gamma).max(0.0).sqrt();
    let alphas: Vec<f64> = (1..=l)
        .map(|j| {
            let angle = 2.0 * PI * j as f64 / query_depth as f64;
            2.0 * arccot(angle.tan() * root)
        })
        .collect();
    let betas = (1..=l).map(|j| -alphas[l - j]).collect();
    Ok(FpaaSchedule {
        query_depth,
        delta,
        gamma_cheb: gamma,
        alphas,
        betas,
    })
}

/// `1 - delta^2 T_L(sqrt(1 - lambda) / gamma)^2`, clamped to `[0, 1]`.
pub fn analytic_pl(lambda: f64, query_depth: usize, delta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(invalid(format!("lambda must lie in [0, 1], got {lambda}")));
    }
    let gamma = chebyshev_gamma(query_depth, delta)?;
    let t = chebyshev_t(query_depth as f64, (1.0 - lambda).sqrt() / gamma)?;
    Ok((1.0 - delta * delta * t * t).clamp(0.0, 1.0))
}

/// Success statistics after amplification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplifiedOutcome {
    /// Probability that every ancilla reads 0 after the full sequence.
    pub p_amplified: f64,
    /// Ground weight of the post-selected system state.
    pub f_ground: f64,
    /// `p_amplified * f_ground`.
    pub p_g: f64,
}

fn apply_a(program: &LcuProgram, preparer: &Preparer, amps: &mut [Complex64]) {
    preparer.apply(amps);
    program.apply(amps);
}

fn apply_a_adjoint(program: &LcuProgram, preparer: &Preparer, amps: &mut [Complex64]) {
    program.apply_adjoint(amps);
    preparer.apply_adjoint(amps);
}

/// Runs `A = program . preparer` once, then the `l` phased iterates
/// `S_0(alpha_j) S_good(beta_j)` for `j = 1..l`, and measures the good subspace.
pub fn amplify(
    program: &LcuProgram,
    preparer: &Preparer,
    spectrum: &Spectrum,
    schedule: &FpaaSchedule,
) -> Result<AmplifiedOutcome> {
    let joint = amplified_state(program, preparer, schedule)?;
    let p_amplified = joint.success_probability();
    let post = joint.post_selected()?;
    let f_ground = ground_overlap(&post, spectrum)?;
    Ok(AmplifiedOutcome {
        p_amplified,
        f_ground,
        p_g: p_amplified * f_ground,
    })
}

/// Joint register at the end of the amplification sequence.
pub fn amplified_state(
    program: &LcuProgram,
    preparer: &Preparer,
    schedule: &FpaaSchedule,
) -> Result<JointState> {
    if preparer.n_qubits() != program.n_system() {
        return Err(invalid(format!(
            "preparer acts on {} qubits, program on {}",
            preparer.n_qubits(),
            program.n_system()
        )));
    }
    if schedule.alphas.len() != schedule.betas.len() {
        return Err(invalid("schedule phase lists differ in length"));
    }
    let good = 1usize << program.n_system();
    let mut joint = JointState::from_raw(
        program.n_system(),
        program.n_ancillas(),
        vec![Complex64::from(0.0); 1usize << program.n_joint()],
    );
    let amps = joint.amplitudes_mut();
    amps[0] = Complex64::from(1.0);
    apply_a(program, preparer, amps);
    for (&alpha, &beta) in schedule.alphas.iter().zip(&schedule.betas) {
        let mark = Complex64::from_polar(1.0, -beta);
        for a in &mut amps[..good] {
            *a *= mark;
        }
        apply_a_adjoint(program, preparer, amps);
        amps[0] *= Complex64::from_polar(1.0, alpha);
        apply_a(program, preparer, amps);
    }
    Ok(joint)
}
