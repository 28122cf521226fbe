//! Initial states and their preparation unitaries.

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::limits::Limits;
use crate::pauli_model::Spectrum;

/// Tolerance on the squared norm of every state the crate hands out.
pub const NORM_TOL: f64 = 1e-12;

/// A normalized amplitude vector over `2^n` computational basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl QuantumState {
    /// Normalizes `amplitudes`, whose length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(invalid(format!("{dim} amplitudes is not a power of two")));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !(norm_sqr > 0.0 && norm_sqr.is_finite()) {
            return Err(invalid("state has zero or non-finite norm"));
        }
        let scale = norm_sqr.sqrt().recip();
        Ok(Self {
            n_qubits: dim.trailing_zeros() as usize,
            amplitudes: amplitudes.into_iter().map(|a| a * scale).collect(),
        })
    }

    /// Builds from real nonnegative amplitudes that are already normalized.
    fn from_real(n_qubits: usize, amplitudes: Vec<f64>) -> Self {
        Self {
            n_qubits,
            amplitudes: amplitudes.into_iter().map(Complex64::from).collect(),
        }
    }

    /// The computational basis state `|bits>`.
    pub fn basis(n: usize, bits: u64) -> Result<Self> {
        Limits::global().check_system(n)?;
        if n < 64 && bits >> n != 0 {
            return Err(invalid(format!(
                "basis index {bits} out of range for n = {n}"
            )));
        }
        let mut amps = vec![0.0; 1 << n];
        amps[bits as usize] = 1.0;
        Ok(Self::from_real(n, amps))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &QuantumState) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(invalid("fidelity between states of different dimension"));
        }
        let overlap: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(overlap.norm_sqr())
    }
}

/// `|+>^n`.
pub fn uniform_state(n: usize) -> Result<QuantumState> {
    Limits::global().check_system(n)?;
    let dim = 1usize << n;
    Ok(QuantumState::from_real(
        n,
        vec![(dim as f64).sqrt().recip(); dim],
    ))
}

/// Product warm start biased towards a target bitstring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarmStartSpec {
    target: u64,
    bias: f64,
}

impl WarmStartSpec {
    /// Each qubit `q` agrees with `target[q]` with probability `bias`.
    pub fn new(target: u64, bias: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&bias) {
            return Err(invalid(format!("warm-start bias {bias} outside [0, 1]")));
        }
        Ok(Self { target, bias })
    }

    pub fn target(&self) -> u64 {
        self.target
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }
}

/// `prod_q (sqrt(p)|g[q]> + sqrt(1-p)|1 - g[q]>)` with real nonnegative amplitudes.
pub fn warm_start(n: usize, spec: &WarmStartSpec) -> Result<QuantumState> {
    Limits::global().check_system(n)?;
    if n < 64 && spec.target >> n != 0 {
        return Err(invalid(format!(
            "warm-start target does not fit {n} qubits"
        )));
    }
    let agree = spec.bias.sqrt();
    let flip = (1.0 - spec.bias).sqrt();
    let mut amps = vec![1.0f64];
    for q in 0..n {
        let (a0, a1) = if (spec.target >> q) & 1 == 0 {
            (agree, flip)
        } else {
            (flip, agree)
        };
        // Qubit q is the new most significant bit.
        let mut next = Vec::with_capacity(amps.len() * 2);
        next.extend(amps.iter().map(|&a| a * a0));
        next.extend(amps.iter().map(|&a| a * a1));
        amps = next;
    }
    Ok(QuantumState::from_real(n, amps))
}

/// `gamma_0`: total probability on the ground subspace.
pub fn ground_overlap(state: &QuantumState, spectrum: &Spectrum) -> Result<f64> {
    if state.dim() != spectrum.dim() {
        return Err(invalid(format!(
            "state has dimension {}, spectrum has {}",
            state.dim(),
            spectrum.dim()
        )));
    }
    Ok(spectrum
        .ground_set()
        .iter()
        .map(|&g| state.amplitudes[g as usize].norm_sqr())
        .sum())
}

/// Ground overlap of a warm start from Hamming distances alone.
pub fn warm_overlap_closed_form(ground_set: &[u64], target: u64, bias: f64, n: usize) -> f64 {
    ground_set
        .iter()
        .map(|&g| {
            let d = (g ^ target).count_ones() as i32;
            bias.powi(n as i32 - d) * (1.0 - bias).powi(d)
        })
        .sum()
}

/// A unitary `P` on the system register with `P|0...0> = |psi_0>`.
///
/// Product states use one `R_y` rotation per qubit; anything else uses a
/// Householder reflection (times a global phase).
#[derive(Debug, Clone, PartialEq)]
pub enum Preparer {
    /// `R_y(theta_q)` on every qubit `q`.
    ProductRy { angles: Vec<f64> },
    /// `e^{i phase} (I - 2 |w><w|)`; `w = None` means the target is `|0>` itself.
    Householder {
        n_qubits: usize,
        phase: f64,
        w: Option<Vec<Complex64>>,
    },
}

impl Preparer {
    pub fn uniform(n: usize) -> Self {
        Self::ProductRy {
            angles: vec![std::f64::consts::FRAC_PI_2; n],
        }
    }

    pub fn warm_start(n: usize, spec: &WarmStartSpec) -> Self {
        let angles = (0..n)
            .map(|q| {
                let (cos, sin) = if (spec.target >> q) & 1 == 0 {
                    (spec.bias.sqrt(), (1.0 - spec.bias).sqrt())
                } else {
                    ((1.0 - spec.bias).sqrt(), spec.bias.sqrt())
                };
                2.0 * sin.atan2(cos)
            })
            .collect();
        Self::ProductRy { angles }
    }

    /// Reflection mapping `|0>` onto `state`.
    pub fn householder(state: &QuantumState) -> Self {
        let amps = state.amplitudes();
        let first = amps[0];
        let phase = first.arg();
        let rot = Complex64::from_polar(1.0, -phase);
        // e^{-i phase}|psi> has a real nonnegative first component.
        let mut w: Vec<Complex64> = amps.iter().map(|&a| -(a * rot)).collect();
        w[0] += Complex64::from(1.0);
        let norm: f64 = w.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let w = if norm < 1e-15 {
            None
        } else {
            Some(w.into_iter().map(|a| a / norm).collect())
        };
        Self::Householder {
            n_qubits: state.n_qubits(),
            phase,
            w,
        }
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            Self::ProductRy { angles } => angles.len(),
            Self::Householder { n_qubits, .. } => *n_qubits,
        }
    }

    /// Applies `P` to the low `n_qubits` of a register of any width.
    pub fn apply(&self, amps: &mut [Complex64]) {
        self.apply_signed(amps, false);
    }

    /// Applies `P^dagger`.
    pub fn apply_adjoint(&self, amps: &mut [Complex64]) {
        self.apply_signed(amps, true);
    }

    fn apply_signed(&self, amps: &mut [Complex64], adjoint: bool) {
        match self {
            Self::ProductRy { angles } => {
                for (q, &theta) in angles.iter().enumerate() {
                    let theta = if adjoint { -theta } else { theta };
                    let (s, c) = (theta / 2.0).sin_cos();
                    apply_real_rotation(amps, q, c, s);
                }
            }
            Self::Householder { n_qubits, phase, w } => {
                let global = Complex64::from_polar(1.0, if adjoint { -phase } else { *phase });
                let block = 1usize << n_qubits;
                for chunk in amps.chunks_mut(block) {
                    if let Some(w) = w {
                        let proj: Complex64 = w
                            .iter()
                            .zip(chunk.iter())
                            .map(|(wi, ai)| wi.conj() * ai)
                            .sum();
                        for (ai, wi) in chunk.iter_mut().zip(w) {
                            *ai -= wi * proj * 2.0;
                        }
                    }
                    for ai in chunk.iter_mut() {
                        *ai *= global;
                    }
                }
            }
        }
    }

    /// `P|0...0>`.
    pub fn prepared_state(&self) -> QuantumState {
        let n = self.n_qubits();
        let mut amps = vec![Complex64::from(0.0); 1 << n];
        amps[0] = Complex64::from(1.0);
        self.apply(&mut amps);
        QuantumState {
            n_qubits: n,
            amplitudes: amps,
        }
    }
}

/// `[[c, -s], [s, c]]` on `qubit`.
pub(crate) fn apply_real_rotation(amps: &mut [Complex64], qubit: usize, c: f64, s: f64) {
    let stride = 1usize << qubit;
    for base in (0..amps.len()).step_by(stride << 1) {
        for i in base..base + stride {
            let x = amps[i];
            let y = amps[i + stride];
            amps[i] = x * c - y * s;
            amps[i + stride] = x * s + y * c;
        }
    }
}
