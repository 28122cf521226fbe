//! Parallel sweeps over an imaginary-time grid, written as CSV rows in grid order.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fpaa_engine::{amplify, analytic_pl, phase_schedule};
use crate::lcu_engine::{analytic_outcome, build_lcu_program, run_gate_level};
use crate::pauli_model::{PauliHamiltonian, Spectrum};
use crate::planner::envelope;
use crate::state_prep::{ground_overlap, Preparer, QuantumState};

/// Amplitude updates allowed in one gate-level LCU sweep.
pub const GATE_LEVEL_BUDGET: u128 = 1 << 27;
/// Amplitude updates (rows x queries x register size) allowed in one FPAA sweep.
pub const FPAA_BUDGET: u128 = 1 << 33;

/// Evenly spaced `beta` values `start, start + step, ...` up to `stop`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaGrid {
    start: f64,
    stop: f64,
    step: f64,
}

impl BetaGrid {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(invalid("beta grid values must be finite"));
        }
        if start < 0.0 || stop < start {
            return Err(invalid(format!(
                "beta grid needs 0 <= start <= stop, got [{start}, {stop}]"
            )));
        }
        if step <= 0.0 {
            return Err(invalid(format!("beta step must be > 0, got {step}")));
        }
        Ok(Self { start, stop, step })
    }

    pub fn single(beta: f64) -> Result<Self> {
        Self::new(beta, beta, 1.0)
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Points `start + i * step`, rounded to 12 decimals so that grid values
    /// print as written.
    pub fn points(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| ((self.start + i as f64 * self.step) * 1e12).round() / 1e12)
            .collect()
    }
}

/// One row of the LCU sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub beta: f64,
    pub p_lcu: f64,
    pub f_g: f64,
    pub product: f64,
    pub envelope: f64,
    pub rel_err: f64,
}

/// One row of the amplification sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FpaaRow {
    pub beta: f64,
    #[serde(rename = "L")]
    pub query_depth: usize,
    pub delta: f64,
    pub p_unamp: f64,
    pub p_amp: f64,
    pub p_amp_formula: f64,
    pub f_g: f64,
    pub p_g: f64,
}

impl FpaaRow {
    pub fn formula_gap(&self) -> f64 {
        (self.p_amp - self.p_amp_formula).abs()
    }
}

/// A Hamiltonian together with an initial state and its ground overlap.
#[derive(Debug, Clone)]
pub struct SweepSetup<'a> {
    pub hamiltonian: &'a PauliHamiltonian,
    pub spectrum: &'a Spectrum,
    pub state: &'a QuantumState,
    pub gamma0: f64,
}

impl<'a> SweepSetup<'a> {
    pub fn new(
        hamiltonian: &'a PauliHamiltonian,
        spectrum: &'a Spectrum,
        state: &'a QuantumState,
    ) -> Result<Self> {
        let gamma0 = ground_overlap(state, spectrum)?;
        Ok(Self {
            hamiltonian,
            spectrum,
            state,
            gamma0,
        })
    }

    fn ln_envelope(&self, beta: f64) -> f64 {
        self.gamma0.ln() - 2.0 * beta * (self.hamiltonian.l1_norm() + self.spectrum.e0())
    }

    fn lcu_row(&self, beta: f64, gate_level: bool) -> Result<SweepRow> {
        let out = if gate_level {
            run_gate_level(self.hamiltonian, self.spectrum, self.state, beta)?
        } else {
            analytic_outcome(self.hamiltonian, self.spectrum, self.state, beta)?
        };
        let env = envelope(
            self.gamma0,
            self.hamiltonian.l1_norm(),
            self.spectrum.e0(),
            beta,
        );
        let product = out.p_success * out.f_ground;
        let rel_err = if self.gamma0 == 0.0 {
            product.abs()
        } else if env < 1e-300 || product < 1e-300 {
            (out.ln_p_success + out.f_ground.ln() - self.ln_envelope(beta))
                .exp_m1()
                .abs()
        } else {
            (product - env).abs() / env
        };
        Ok(SweepRow {
            beta,
            p_lcu: out.p_success,
            f_g: out.f_ground,
            product,
            envelope: env,
            rel_err,
        })
    }

    fn fpaa_row(
        &self,
        preparer: &Preparer,
        beta: f64,
        query_depth: usize,
        delta: f64,
    ) -> Result<FpaaRow> {
        let analytic = analytic_outcome(self.hamiltonian, self.spectrum, self.state, beta)?;
        let p_unamp = analytic.p_success.clamp(0.0, 1.0);
        if query_depth == 0 {
            return Ok(FpaaRow {
                beta,
                query_depth,
                delta,
                p_unamp,
                p_amp: p_unamp,
                p_amp_formula: p_unamp,
                f_g: analytic.f_ground,
                p_g: p_unamp * analytic.f_ground,
            });
        }
        let schedule = phase_schedule(query_depth, delta)?;
        let program = build_lcu_program(self.hamiltonian, beta)?;
        let amp = amplify(&program, preparer, self.spectrum, &schedule)?;
        Ok(FpaaRow {
            beta,
            query_depth,
            delta,
            p_unamp,
            p_amp: amp.p_amplified,
            p_amp_formula: analytic_pl(p_unamp, query_depth, delta)?,
            f_g: amp.f_ground,
            p_g: amp.p_g,
        })
    }
}

fn register_size(h: &PauliHamiltonian) -> u128 {
    1u128 << (h.n() + h.num_terms())
}

/// LCU sweep; `gate_level` replaces the analytic `p_lcu` and `f_g` with
/// circuit simulation (the envelope stays analytic).
pub fn lcu_sweep(
    setup: &SweepSetup<'_>,
    grid: &BetaGrid,
    gate_level: bool,
) -> Result<Vec<SweepRow>> {
    if gate_level {
        let work = grid.len() as u128 * register_size(setup.hamiltonian);
        if work > GATE_LEVEL_BUDGET {
            return Err(Error::Resource(format!(
                "gate-level sweep of {} points on a {}-qubit register exceeds the work budget; use a coarser beta step",
                grid.len(),
                setup.hamiltonian.n() + setup.hamiltonian.num_terms()
            )));
        }
    }
    grid.points()
        .into_par_iter()
        .map(|beta| setup.lcu_row(beta, gate_level))
        .collect()
}

/// Checks that every query depth is `0` or odd.
pub fn validate_query_depths(depths: &[usize]) -> Result<()> {
    if depths.is_empty() {
        return Err(invalid("at least one query depth is required"));
    }
    match depths.iter().find(|&&l| l != 0 && l % 2 == 0) {
        Some(l) => Err(invalid(format!("query depth must be 0 or odd, got {l}"))),
        None => Ok(()),
    }
}

/// Amplification sweep over `grid x depths`, rows ordered by `beta` then depth.
pub fn fpaa_sweep(
    setup: &SweepSetup<'_>,
    preparer: &Preparer,
    grid: &BetaGrid,
    depths: &[usize],
    delta: f64,
) -> Result<Vec<FpaaRow>> {
    validate_query_depths(depths)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    let queries: u128 = depths.iter().map(|&l| l as u128 + 1).sum();
    let work = grid.len() as u128 * queries * register_size(setup.hamiltonian);
    if work > FPAA_BUDGET {
        return Err(Error::Resource(format!(
            "amplification sweep of {} points x {:?} exceeds the work budget; use a coarser beta step or fewer depths",
            grid.len(),
            depths
        )));
    }
    let jobs: Vec<(f64, usize)> = grid
        .points()
        .into_iter()
        .flat_map(|b| depths.iter().map(move |&l| (b, l)))
        .collect();
    jobs.into_par_iter()
        .map(|(beta, l)| setup.fpaa_row(preparer, beta, l, delta))
        .collect()
}

/// Writes rows as CSV with a header line.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    }
    writer.flush()?;
    Ok(())
}
