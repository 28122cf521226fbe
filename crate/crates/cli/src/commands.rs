use std::fs::File;
use std::io::{self, BufWriter, Write};

use finite_core::error::Result;
use finite_core::instances::{load_instance, InitSpec, InstanceKind};
use finite_core::lcu_engine::{analytic_outcome, build_lcu_program, sample_shots};
use finite_core::pauli_model::{format_bits, PauliHamiltonian, Spectrum};
use finite_core::planner::{plan as build_plan, PlanInputs, PlanOutcome};
use finite_core::state_prep::{ground_overlap, Preparer, QuantumState};
use finite_core::sweep::{fpaa_sweep, lcu_sweep, write_csv, BetaGrid, SweepSetup};
use finite_core::Error;
use serde::Serialize;
use serde_json::json;

use crate::{Common, Format, PlanArgs, EXIT_UNREACHABLE};

/// Mismatch between simulated and closed-form amplified success that flags a row.
const FORMULA_FLAG_TOL: f64 = 1e-8;

struct Loaded {
    kind: InstanceKind,
    hamiltonian: PauliHamiltonian,
    spectrum: Spectrum,
    state: QuantumState,
    preparer: Preparer,
    gamma0: f64,
}

fn load(c: &Common) -> Result<Loaded> {
    let kind = c
        .kind
        .map(InstanceKind::from)
        .unwrap_or_else(|| InstanceKind::infer(&c.instance));
    let hamiltonian = load_instance(&c.instance, Some(kind))?;
    let spectrum = hamiltonian.spectrum()?;
    let init: InitSpec = c.init.parse()?;
    let (state, preparer) = init.resolve(hamiltonian.n(), Some(&spectrum))?;
    let gamma0 = ground_overlap(&state, &spectrum)?;
    Ok(Loaded {
        kind,
        hamiltonian,
        spectrum,
        state,
        preparer,
        gamma0,
    })
}

fn grid(c: &Common, default: (f64, f64, f64)) -> Result<BetaGrid> {
    match c.beta.as_deref() {
        None => BetaGrid::new(default.0, default.1, default.2),
        Some(&[b]) => BetaGrid::single(b),
        Some(&[start, stop, step]) => BetaGrid::new(start, stop, step),
        Some(other) => Err(Error::Invalid(format!(
            "--beta takes one value or start stop step, got {} values",
            other.len()
        ))),
    }
}

fn single_beta(c: &Common) -> Result<f64> {
    match c.beta.as_deref() {
        Some(&[b]) => Ok(b),
        _ => Err(Error::Invalid(
            "this command needs exactly one --beta value".into(),
        )),
    }
}

fn output(c: &Common) -> Result<Box<dyn Write>> {
    Ok(match &c.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit_json<T: Serialize>(c: &Common, value: &T) -> Result<()> {
    if c.format == Some(Format::Csv) {
        return Err(Error::Invalid("this report is JSON only".into()));
    }
    let mut out = output(c)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(io::Error::from)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn emit_rows<T: Serialize>(c: &Common, rows: &[T]) -> Result<()> {
    let mut out = output(c)?;
    match c.format.unwrap_or(Format::Csv) {
        Format::Csv => write_csv(rows, &mut out)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, rows).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn spectrum(c: &Common) -> Result<u8> {
    let l = load(c)?;
    let s = &l.spectrum;
    let n = l.hamiltonian.n();
    if s.gap().is_none() {
        eprintln!("warning: degenerate spectrum, every basis state is a ground state");
    }
    let ground: Vec<String> = s.ground_set().iter().map(|&g| format_bits(g, n)).collect();
    emit_json(
        c,
        &json!({
            "n": n,
            "num_terms": l.hamiltonian.num_terms(),
            "l1_norm": l.hamiltonian.l1_norm(),
            "e0": s.e0(),
            "gap": s.gap(),
            "ground_set_size": ground.len(),
            "identity_shift": l.hamiltonian.identity_shift(),
            "init": c.init,
            "gamma0": l.gamma0,
            "ground_set": ground,
        }),
    )?;
    Ok(0)
}

pub fn sweep(c: &Common) -> Result<u8> {
    let l = load(c)?;
    let default = match (l.kind, c.gate_level) {
        (InstanceKind::MaxCut, _) => (0.0, 2.0, 0.001),
        (InstanceKind::Hubo, false) => (0.0, 3.0, 0.001),
        (InstanceKind::Hubo, true) => (0.0, 3.0, 0.01),
    };
    let grid = grid(c, default)?;
    let setup = SweepSetup::new(&l.hamiltonian, &l.spectrum, &l.state)?;
    let rows = lcu_sweep(&setup, &grid, c.gate_level)?;
    let worst = rows.iter().map(|r| r.rel_err).fold(0.0, f64::max);
    eprintln!(
        "{} rows, gamma0 = {}, max relative error of P*F_g against the envelope = {worst:e}",
        rows.len(),
        l.gamma0
    );
    emit_rows(c, &rows)?;
    Ok(0)
}

pub fn fpaa(c: &Common) -> Result<u8> {
    let l = load(c)?;
    let default = match l.kind {
        InstanceKind::MaxCut => (0.0, 2.0, 0.001),
        InstanceKind::Hubo => (0.0, 3.0, 0.01),
    };
    let grid = grid(c, default)?;
    let setup = SweepSetup::new(&l.hamiltonian, &l.spectrum, &l.state)?;
    let rows = fpaa_sweep(&setup, &l.preparer, &grid, &c.depths, c.delta)?;
    let flagged = rows
        .iter()
        .filter(|r| r.formula_gap() > FORMULA_FLAG_TOL)
        .count();
    eprintln!(
        "{} rows, {flagged} rows where circuit and formula differ by more than {FORMULA_FLAG_TOL:e}",
        rows.len()
    );
    emit_rows(c, &rows)?;
    Ok(0)
}

pub fn plan(p: &PlanArgs) -> Result<u8> {
    let c = &p.common;
    let l = load(c)?;
    let measured_gap = l.spectrum.gap().unwrap_or(f64::INFINITY);
    let pick = |given: Option<f64>, measured: f64| {
        if p.measured {
            measured
        } else {
            given.unwrap_or(measured)
        }
    };
    let inputs = PlanInputs {
        gamma0: pick(p.gamma0, l.gamma0),
        delta_gap: pick(p.gap, measured_gap),
        w_norm: l.hamiltonian.l1_norm(),
        e0: pick(p.e0, l.spectrum.e0()),
        target_f: p.target,
        fpaa_delta: c.delta,
    };
    let localities: Vec<usize> = l.hamiltonian.terms().iter().map(|t| t.locality()).collect();
    match build_plan(&inputs, l.hamiltonian.n(), &localities, p.epsilon)? {
        PlanOutcome::Unreachable { reason } => {
            eprintln!("unreachable target: {reason}");
            emit_json(
                c,
                &json!({ "status": "unreachable", "reason": reason, "inputs": inputs }),
            )?;
            Ok(EXIT_UNREACHABLE)
        }
        PlanOutcome::Reachable(plan) => {
            let at_star = analytic_outcome(&l.hamiltonian, &l.spectrum, &l.state, plan.beta_star)?;
            emit_json(
                c,
                &json!({
                    "status": "reachable",
                    "inputs": inputs,
                    "n": l.hamiltonian.n(),
                    "num_terms": l.hamiltonian.num_terms(),
                    "beta_star": plan.beta_star,
                    "p_lower": plan.p_lower,
                    "p_upper": plan.p_upper,
                    "lambda_star": plan.lambda_star,
                    "queries": plan.queries,
                    "cnot": plan.cnot,
                    "state_error_beta": plan.error_beta,
                    "instance_at_beta_star": {
                        "p_lcu": at_star.p_success,
                        "f_g": at_star.f_ground,
                    },
                }),
            )?;
            Ok(0)
        }
    }
}

pub fn sample(c: &Common) -> Result<u8> {
    let l = load(c)?;
    let beta = single_beta(c)?;
    let report = sample_shots(&l.hamiltonian, &l.spectrum, &l.state, beta, c.shots, c.seed)?;
    emit_json(c, &report)?;
    Ok(0)
}

pub fn gates(c: &Common) -> Result<u8> {
    let l = load(c)?;
    let beta = single_beta(c)?;
    let program = build_lcu_program(&l.hamiltonian, beta)?;
    emit_json(c, &program)?;
    Ok(0)
}
