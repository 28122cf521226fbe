//! Register and enumeration caps.
//!
//! Every dense array in the crate has length `2^k` for some qubit count `k`;
//! these caps bound `k` before any allocation happens.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Environment variable that overrides every cap with a single qubit count.
pub const MAX_QUBITS_ENV: &str = "FINITE_MAX_QUBITS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest system register accepted when building Hamiltonians and states.
    pub max_system_qubits: usize,
    /// Largest register whose spectrum may be enumerated.
    pub max_enumeration_qubits: usize,
    /// Largest joint (system + ancilla) register that may be simulated.
    pub max_joint_qubits: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_system_qubits: 20,
            max_enumeration_qubits: 24,
            max_joint_qubits: 26,
        }
    }
}

impl Limits {
    /// Defaults, with every cap replaced by `FINITE_MAX_QUBITS` when it is set
    /// to a valid integer. Masks are 64-bit, so the override saturates at 63.
    pub fn from_env() -> Self {
        match std::env::var(MAX_QUBITS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            Some(k) => {
                let k = k.min(63);
                Self {
                    max_system_qubits: k,
                    max_enumeration_qubits: k,
                    max_joint_qubits: k,
                }
            }
            None => Self::default(),
        }
    }

    /// Process-wide caps, read from the environment once.
    pub fn global() -> &'static Limits {
        static LIMITS: OnceLock<Limits> = OnceLock::new();
        LIMITS.get_or_init(Limits::from_env)
    }

    pub fn check_system(&self, n: usize) -> Result<()> {
        check(n, self.max_system_qubits, "system register")
    }

    pub fn check_enumeration(&self, n: usize) -> Result<()> {
        check(n, self.max_enumeration_qubits, "spectral enumeration")
    }

    pub fn check_joint(&self, n: usize) -> Result<()> {
        check(n, self.max_joint_qubits, "joint register")
    }
}

fn check(n: usize, cap: usize, what: &str) -> Result<()> {
    if n > cap {
        Err(Error::Resource(format!(
            "{what} needs {n} qubits, cap is {cap} (set {MAX_QUBITS_ENV} to raise it)"
        )))
    } else {
        Ok(())
    }
}
