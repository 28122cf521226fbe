//! Termwise LCU block-encoding of `e^{-beta W} e^{-beta H}`.
//!
//! Two independent routes produce the same [`LcuOutcome`]: a closed-form
//! spectral evaluation ([`analytic_outcome`]) and a gate-level simulation of
//! the joint system + ancilla register ([`run_gate_level`]).
//!
//! Joint register layout: system qubit `i` is bit `i`, and the ancilla of
//! term `mu` is bit `n + mu`. The success event (all ancillas in `|0>`) is the
//! set of joint indices below `2^n`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::limits::Limits;
use crate::pauli_model::{format_bits, z_sign, PauliHamiltonian, PauliTerm, Spectrum};
use crate::state_prep::{apply_real_rotation, ground_overlap, QuantumState};

fn check_beta(beta: f64) -> Result<()> {
    if beta >= 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("beta must be finite and >= 0, got {beta}")))
    }
}

/// One two-unitary LCU block encoding `alpha_w I - gamma_w sgn(x) Z_mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LcuBlock {
    term: PauliTerm,
    beta: f64,
    alpha_w: f64,
    gamma_w: f64,
}

impl LcuBlock {
    pub fn new(term: PauliTerm, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        let y = beta * term.coeff().abs();
        let gamma_w = -(-2.0 * y).exp_m1() / 2.0;
        let alpha_w = (1.0 + (-2.0 * y).exp()) / 2.0;
        Ok(Self {
            term,
            beta,
            alpha_w,
            gamma_w,
        })
    }

    pub fn term(&self) -> &PauliTerm {
        &self.term
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn alpha_w(&self) -> f64 {
        self.alpha_w
    }

    pub fn gamma_w(&self) -> f64 {
        self.gamma_w
    }

    /// `coth(beta |x|)`; undefined at `beta |x| = 0`.
    pub fn kappa(&self) -> Option<f64> {
        (self.gamma_w > 0.0).then(|| self.alpha_w / self.gamma_w)
    }

    /// Diagonal entry of the encoded block on the system basis state `bits`.
    pub fn block_entry(&self, bits: u64) -> f64 {
        self.alpha_w - self.gamma_w * self.term.sign() * z_sign(self.term.mask(), bits)
    }
}

/// Gates of the termwise LCU circuit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "gate", rename_all = "snake_case")]
pub enum Gate {
    /// Real rotation `[[cos, -sin], [sin, cos]]` on one qubit.
    Rotation { qubit: usize, cos: f64, sin: f64 },
    /// If `control` is set, multiply by `sign * (-1)^{popcount(mask & system bits)}`.
    ControlledZString {
        control: usize,
        mask: u64,
        sign: f64,
    },
}

impl Gate {
    fn apply(&self, amps: &mut [Complex64], system_mask: u64) {
        match *self {
            Gate::Rotation { qubit, cos, sin } => apply_real_rotation(amps, qubit, cos, sin),
            Gate::ControlledZString {
                control,
                mask,
                sign,
            } => {
                let stride = 1usize << control;
                for base in (stride..amps.len()).step_by(stride << 1) {
                    for (i, a) in amps[base..base + stride].iter_mut().enumerate() {
                        let bits = (base + i) as u64 & system_mask;
                        *a *= sign * z_sign(mask, bits);
                    }
                }
            }
        }
    }

    fn inverse(&self) -> Gate {
        match *self {
            Gate::Rotation { qubit, cos, sin } => Gate::Rotation {
                qubit,
                cos,
                sin: -sin,
            },
            phase @ Gate::ControlledZString { .. } => phase,
        }
    }
}

/// Ordered gate list realising every LCU block on the joint register.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LcuProgram {
    n_system: usize,
    beta: f64,
    blocks: Vec<LcuBlock>,
    gates: Vec<Gate>,
}

/// Builds the circuit `prod_mu V_mu^T C(-sgn(x_mu) Z_mu) V_mu`.
pub fn build_lcu_program(h: &PauliHamiltonian, beta: f64) -> Result<LcuProgram> {
    check_beta(beta)?;
    let n = h.n();
    Limits::global().check_joint(n + h.num_terms())?;
    let blocks = h
        .terms()
        .iter()
        .map(|&t| LcuBlock::new(t, beta))
        .collect::<Result<Vec<_>>>()?;
    let mut gates = Vec::with_capacity(3 * blocks.len());
    for (mu, b) in blocks.iter().enumerate() {
        let ancilla = n + mu;
        let open = Gate::Rotation {
            qubit: ancilla,
            cos: b.alpha_w.sqrt(),
            sin: b.gamma_w.sqrt(),
        };
        gates.push(open);
        gates.push(Gate::ControlledZString {
            control: ancilla,
            mask: b.term.mask(),
            sign: -b.term.sign(),
        });
        gates.push(open.inverse());
    }
    Ok(LcuProgram {
        n_system: n,
        beta,
        blocks,
        gates,
    })
}

impl LcuProgram {
    pub fn n_system(&self) -> usize {
        self.n_system
    }

    pub fn n_ancillas(&self) -> usize {
        self.blocks.len()
    }

    pub fn n_joint(&self) -> usize {
        self.n_system + self.blocks.len()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn blocks(&self) -> &[LcuBlock] {
        &self.blocks
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Joint qubit carrying the ancilla of term `mu`.
    pub fn ancilla_qubit(&self, mu: usize) -> usize {
        self.n_system + mu
    }

    fn system_mask(&self) -> u64 {
        (1u64 << self.n_system) - 1
    }

    pub fn apply(&self, amps: &mut [Complex64]) {
        let sys = self.system_mask();
        for g in &self.gates {
            g.apply(amps, sys);
        }
    }

    pub fn apply_adjoint(&self, amps: &mut [Complex64]) {
        let sys = self.system_mask();
        for g in self.gates.iter().rev() {
            g.inverse().apply(amps, sys);
        }
    }
}

/// Dense state of the system register joined with one ancilla per term.
#[derive(Debug, Clone)]
pub struct JointState {
    n_system: usize,
    n_ancillas: usize,
    amps: Vec<Complex64>,
}

impl JointState {
    /// `|0>^M (x) system`.
    pub fn new(program: &LcuProgram, system: &QuantumState) -> Result<Self> {
        if system.n_qubits() != program.n_system() {
            return Err(invalid(format!(
                "state has {} qubits, program expects {}",
                system.n_qubits(),
                program.n_system()
            )));
        }
        let mut amps = vec![Complex64::from(0.0); 1usize << program.n_joint()];
        amps[..system.dim()].copy_from_slice(system.amplitudes());
        Ok(Self {
            n_system: program.n_system(),
            n_ancillas: program.n_ancillas(),
            amps,
        })
    }

    pub(crate) fn from_raw(n_system: usize, n_ancillas: usize, amps: Vec<Complex64>) -> Self {
        Self {
            n_system,
            n_ancillas,
            amps,
        }
    }

    pub fn n_system(&self) -> usize {
        self.n_system
    }

    pub fn n_ancillas(&self) -> usize {
        self.n_ancillas
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability that every ancilla reads `0`.
    pub fn success_probability(&self) -> f64 {
        self.amps[..1usize << self.n_system]
            .iter()
            .map(|a| a.norm_sqr())
            .sum()
    }

    /// Normalized system state on the success event.
    pub fn post_selected(&self) -> Result<QuantumState> {
        if self.success_probability() == 0.0 {
            return Err(Error::Domain(
                "post-selection event has zero probability".into(),
            ));
        }
        QuantumState::from_amplitudes(self.amps[..1usize << self.n_system].to_vec())
    }
}

/// Result of one LCU pass followed by post-selection.
#[derive(Debug, Clone, PartialEq)]
pub struct LcuOutcome {
    /// `P_LCU`.
    pub p_success: f64,
    /// `ln P_LCU`, finite even when `p_success` underflows.
    pub ln_p_success: f64,
    pub post_state: QuantumState,
    /// `F_g`: ground-subspace weight of `post_state`.
    pub f_ground: f64,
}

/// Closed-form outcome from the spectrum.
///
/// Weights are shifted by the lowest energy in the state's support before
/// summing, so nothing overflows and the partition sum stays positive.
pub fn analytic_outcome(
    h: &PauliHamiltonian,
    spectrum: &Spectrum,
    state: &QuantumState,
    beta: f64,
) -> Result<LcuOutcome> {
    check_beta(beta)?;
    if state.dim() != spectrum.dim() {
        return Err(invalid("state and spectrum dimensions differ"));
    }
    let energies = spectrum.energies();
    let amps = state.amplitudes();
    let e_ref = amps
        .iter()
        .zip(energies)
        .filter(|(a, _)| a.norm_sqr() > 0.0)
        .map(|(_, &e)| e)
        .fold(f64::INFINITY, f64::min);

    let mut partition = 0.0;
    let mut ground = 0.0;
    let mut post = Vec::with_capacity(amps.len());
    for (x, (a, &e)) in amps.iter().zip(energies).enumerate() {
        let damp = (-beta * (e - e_ref)).exp();
        let w = a.norm_sqr() * damp * damp;
        partition += w;
        if spectrum.is_ground(x as u64) {
            ground += w;
        }
        post.push(a * damp);
    }
    let exponent = -2.0 * beta * (h.l1_norm() + e_ref);
    Ok(LcuOutcome {
        p_success: exponent.exp() * partition,
        ln_p_success: exponent + partition.ln(),
        post_state: QuantumState::from_amplitudes(post)?,
        f_ground: ground / partition,
    })
}

/// Simulates the LCU program on `|0>^M (x) state` and post-selects.
pub fn run_gate_level(
    h: &PauliHamiltonian,
    spectrum: &Spectrum,
    state: &QuantumState,
    beta: f64,
) -> Result<LcuOutcome> {
    let joint = simulate_joint(h, state, beta)?;
    let p = joint.success_probability();
    let post_state = joint.post_selected()?;
    let f_ground = ground_overlap(&post_state, spectrum)?;
    Ok(LcuOutcome {
        p_success: p,
        ln_p_success: p.ln(),
        post_state,
        f_ground,
    })
}

/// Joint register after one LCU pass.
pub fn simulate_joint(h: &PauliHamiltonian, state: &QuantumState, beta: f64) -> Result<JointState> {
    let program = build_lcu_program(h, beta)?;
    let mut joint = JointState::new(&program, state)?;
    program.apply(&mut joint.amps);
    Ok(joint)
}

/// Counts from repeated full-register measurements after one LCU pass.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShotReport {
    pub shots: u64,
    pub seed: u64,
    /// Shots with every ancilla in `0`.
    pub successes: u64,
    /// Successful shots whose system bits lie in the ground set.
    pub ground_hits: u64,
    /// Joint bitstring (ancilla `M-1` leftmost, system qubit 0 rightmost) to count.
    pub histogram: BTreeMap<String, u64>,
}

impl ShotReport {
    pub fn success_fraction(&self) -> f64 {
        self.successes as f64 / self.shots as f64
    }

    /// Ground hits among successful shots; `NaN` when nothing succeeded.
    pub fn conditional_ground_fraction(&self) -> f64 {
        self.ground_hits as f64 / self.successes as f64
    }
}

/// Draws `shots` measurements of the joint register by inverse-CDF sampling
/// with a ChaCha8 generator seeded from `seed`.
pub fn sample_shots(
    h: &PauliHamiltonian,
    spectrum: &Spectrum,
    state: &QuantumState,
    beta: f64,
    shots: u64,
    seed: u64,
) -> Result<ShotReport> {
    if shots == 0 {
        return Err(invalid("shots must be at least 1"));
    }
    let joint = simulate_joint(h, state, beta)?;
    let n = joint.n_system;
    let width = n + joint.n_ancillas;
    let mut cdf = Vec::with_capacity(joint.amps.len());
    let mut total = 0.0;
    for a in &joint.amps {
        total += a.norm_sqr();
        cdf.push(total);
    }
    let last_nonzero = joint
        .amps
        .iter()
        .rposition(|a| a.norm_sqr() > 0.0)
        .ok_or_else(|| Error::Domain("joint state has no support".into()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    let (mut successes, mut ground_hits) = (0, 0);
    let system_mask = (1u64 << n) - 1;
    for _ in 0..shots {
        let u = rng.gen::<f64>() * total;
        let idx = cdf.partition_point(|&c| c <= u).min(last_nonzero) as u64;
        *counts.entry(idx).or_insert(0) += 1;
        if idx >> n == 0 {
            successes += 1;
            if spectrum.is_ground(idx & system_mask) {
                ground_hits += 1;
            }
        }
    }
    Ok(ShotReport {
        shots,
        seed,
        successes,
        ground_hits,
        histogram: counts
            .into_iter()
            .map(|(k, v)| (format_bits(k, width), v))
            .collect(),
    })
}
