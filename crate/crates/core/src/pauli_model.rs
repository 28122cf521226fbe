//! PUBO cost polynomials and their diagonal Pauli-Z Hamiltonians.
//!
//! Qubit `i` is bit `i` of every bitstring and statevector index (qubit 0 is
//! the least significant bit). Pauli-Z strings are stored as 64-bit masks.

use std::collections::BTreeMap;

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::limits::Limits;

/// Absolute tolerance used to group energies into degenerate levels.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Eigenvalue of the Z-string `mask` on the computational basis state `bits`.
#[inline]
pub fn z_sign(mask: u64, bits: u64) -> f64 {
    if (mask & bits).count_ones() & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Renders `bits` with qubit `n - 1` leftmost, so string order equals integer order.
pub fn format_bits(bits: u64, n: usize) -> String {
    (0..n)
        .rev()
        .map(|q| if (bits >> q) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Inverse of [`format_bits`].
pub fn parse_bits(text: &str, n: usize) -> Result<u64> {
    let text = text.trim();
    if text.len() != n {
        return Err(invalid(format!(
            "bitstring {text:?} has {} characters, expected {n}",
            text.len()
        )));
    }
    text.chars().try_fold(0u64, |acc, c| match c {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        other => Err(invalid(format!("bitstring contains {other:?}"))),
    })
}

fn mask_of(n: usize, qubits: &[usize]) -> Result<u64> {
    if n > 64 {
        return Err(invalid(format!("{n} qubits do not fit a 64-bit mask")));
    }
    let mut mask = 0u64;
    for &q in qubits {
        if q >= n {
            return Err(invalid(format!("qubit index {q} out of range for n = {n}")));
        }
        mask |= 1 << q;
    }
    Ok(mask)
}

fn mask_qubits(mask: u64) -> Vec<usize> {
    (0..64).filter(|q| (mask >> q) & 1 == 1).collect()
}

/// One monomial `coeff * prod_{i in vars} x_i` of a binary cost polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub vars: Vec<usize>,
    pub coeff: f64,
}

/// A polynomial cost function `C(x)` over `n` binary variables.
#[derive(Debug, Clone, PartialEq)]
pub struct PuboPolynomial {
    n: usize,
    monomials: Vec<Monomial>,
}

impl PuboPolynomial {
    /// Builds the polynomial, sorting each index set and merging repeated
    /// monomials. Repeated variables inside a monomial collapse (`x_i^2 = x_i`).
    pub fn new<I>(n: usize, monomials: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, f64)>,
    {
        let mut merged: BTreeMap<(u32, u64), f64> = BTreeMap::new();
        for (vars, coeff) in monomials {
            if !coeff.is_finite() {
                return Err(invalid("monomial coefficient is not finite"));
            }
            let mask = mask_of(n, &vars)?;
            *merged.entry((mask.count_ones(), mask)).or_insert(0.0) += coeff;
        }
        let monomials = merged
            .into_iter()
            .filter(|&(_, c)| c != 0.0)
            .map(|((_, mask), coeff)| Monomial {
                vars: mask_qubits(mask),
                coeff,
            })
            .collect();
        Ok(Self { n, monomials })
    }

    /// Quadratic cost `sum_i h_i x_i + sum_{i<j} J_ij x_i x_j`.
    pub fn qubo(n: usize, linear: &[f64], quadratic: &[(usize, usize, f64)]) -> Result<Self> {
        if linear.len() > n {
            return Err(invalid("more linear coefficients than variables"));
        }
        let lin = linear.iter().enumerate().map(|(i, &h)| (vec![i], h));
        let quad = quadratic.iter().map(|&(i, j, w)| (vec![i, j], w));
        Self::new(n, lin.chain(quad))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// `C(x)` at the bitstring `bits`.
    pub fn evaluate(&self, bits: u64) -> f64 {
        self.monomials
            .iter()
            .filter(|m| m.vars.iter().all(|&i| (bits >> i) & 1 == 1))
            .map(|m| m.coeff)
            .sum()
    }

    /// Substitutes `x_i = (I - Z_i)/2` and expands every product exactly.
    pub fn to_hamiltonian(&self) -> Result<PauliHamiltonian> {
        Limits::global().check_system(self.n)?;
        let mut acc: BTreeMap<(u32, u64), f64> = BTreeMap::new();
        for m in &self.monomials {
            let support = mask_of(self.n, &m.vars)?;
            let scale = m.coeff / f64::powi(2.0, support.count_ones() as i32);
            // Every subset T of the support contributes (-1)^{|T|} Z_T.
            let mut sub = support;
            loop {
                let sign = if sub.count_ones() & 1 == 1 { -1.0 } else { 1.0 };
                *acc.entry((sub.count_ones(), sub)).or_insert(0.0) += sign * scale;
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & support;
            }
        }
        PauliHamiltonian::from_masks(self.n, acc.into_iter().map(|((_, m), c)| (m, c)), 0.0)
    }
}

/// A signed Z-string `coeff * prod_{i in mask} Z_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PauliTerm {
    mask: u64,
    coeff: f64,
}

impl PauliTerm {
    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    /// Number of qubits the string acts on.
    pub fn locality(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn qubits(&self) -> Vec<usize> {
        mask_qubits(self.mask)
    }

    /// `+1` or `-1`.
    pub fn sign(&self) -> f64 {
        self.coeff.signum()
    }

    /// Eigenvalue of this term on `bits`.
    #[inline]
    pub fn value(&self, bits: u64) -> f64 {
        self.coeff * z_sign(self.mask, bits)
    }
}

/// A diagonal Hamiltonian `sum_mu x_mu Z_mu + c I` with the identity part `c`
/// held apart from the term list.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliHamiltonian {
    n: usize,
    terms: Vec<PauliTerm>,
    identity_shift: f64,
}

impl PauliHamiltonian {
    /// Builds from `(mask, coeff)` pairs. Equal masks are merged by summing
    /// (first occurrence fixes the order), the empty mask moves into the
    /// identity shift, and zero coefficients are dropped.
    pub fn from_masks<I>(n: usize, terms: I, identity_shift: f64) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, f64)>,
    {
        if n > 64 {
            return Err(invalid(format!("{n} qubits do not fit a 64-bit mask")));
        }
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut shift = identity_shift;
        let mut merged: IndexMap<u64, f64> = IndexMap::new();
        for (mask, coeff) in terms {
            if !coeff.is_finite() {
                return Err(invalid("term coefficient is not finite"));
            }
            if mask & !full != 0 {
                return Err(invalid(format!(
                    "term mask {mask:#x} touches qubits outside n = {n}"
                )));
            }
            if mask == 0 {
                shift += coeff;
            } else {
                *merged.entry(mask).or_insert(0.0) += coeff;
            }
        }
        if !shift.is_finite() {
            return Err(invalid("identity shift is not finite"));
        }
        let terms = merged
            .into_iter()
            .filter(|&(_, c)| c != 0.0)
            .map(|(mask, coeff)| PauliTerm { mask, coeff })
            .collect();
        Ok(Self {
            n,
            terms,
            identity_shift: shift,
        })
    }

    /// Builds from `(qubit list, coeff)` pairs; a qubit may not repeat inside a term.
    pub fn from_qubit_terms<I>(n: usize, terms: I, identity_shift: f64) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, f64)>,
    {
        let mut masks = Vec::new();
        for (qubits, coeff) in terms {
            let mask = mask_of(n, &qubits)?;
            if mask.count_ones() as usize != qubits.len() {
                return Err(invalid(format!("term {qubits:?} repeats a qubit")));
            }
            masks.push((mask, coeff));
        }
        Self::from_masks(n, masks, identity_shift)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    /// Number of stored (non-identity) terms, `M`.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn identity_shift(&self) -> f64 {
        self.identity_shift
    }

    /// `W`: the l1 norm of the non-identity coefficients.
    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).sum()
    }

    /// Energy of `bits` without the identity shift.
    pub fn energy(&self, bits: u64) -> f64 {
        self.terms.iter().map(|t| t.value(bits)).sum()
    }

    /// Energies of every basis state, indexed by bitstring.
    pub fn energies(&self) -> Result<Vec<f64>> {
        Limits::global().check_enumeration(self.n)?;
        let dim = 1usize << self.n;
        Ok((0..dim as u64)
            .into_par_iter()
            .map(|x| self.energy(x))
            .collect())
    }

    /// Full spectral summary by enumeration.
    pub fn spectrum(&self) -> Result<Spectrum> {
        Spectrum::from_energies(self.n, self.energies()?)
    }

    /// Number of basis states on which every term takes the eigenvalue
    /// `-sgn(coeff)`: the rank of the large-imaginary-time LCU projector.
    pub fn limit_projector_rank(&self) -> Result<u64> {
        Limits::global().check_enumeration(self.n)?;
        let dim = 1u64 << self.n;
        Ok((0..dim)
            .into_par_iter()
            .filter(|&x| self.terms.iter().all(|t| z_sign(t.mask, x) == -t.sign()))
            .count() as u64)
    }
}

/// A weighted undirected edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

impl Edge {
    pub fn new(u: usize, v: usize) -> Self {
        Self { u, v, weight: 1.0 }
    }

    pub fn weighted(u: usize, v: usize, weight: f64) -> Self {
        Self { u, v, weight }
    }
}

/// Ising MaxCut Hamiltonian `sum_{(u,v)} w_uv Z_u Z_v` on `n` vertices.
pub fn maxcut_hamiltonian(n: usize, edges: &[Edge]) -> Result<PauliHamiltonian> {
    let mut terms = Vec::with_capacity(edges.len());
    for e in edges {
        if e.u == e.v {
            return Err(invalid(format!("self-loop on vertex {}", e.u)));
        }
        terms.push((mask_of(n, &[e.u, e.v])?, e.weight));
    }
    PauliHamiltonian::from_masks(n, terms, 0.0)
}

/// Exact spectrum of a diagonal Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    n: usize,
    e0: f64,
    delta: Option<f64>,
    ground_set: Vec<u64>,
    energies: Vec<f64>,
}

impl Spectrum {
    /// Summarises a dense energy table of length `2^n`.
    pub fn from_energies(n: usize, energies: Vec<f64>) -> Result<Self> {
        if energies.len() != 1usize << n {
            return Err(invalid(format!(
                "energy table has {} entries, expected 2^{n}",
                energies.len()
            )));
        }
        let e0 = energies.iter().copied().fold(f64::INFINITY, f64::min);
        let mut ground_set = Vec::new();
        let mut delta: Option<f64> = None;
        for (x, &e) in energies.iter().enumerate() {
            let excess = e - e0;
            if excess <= DEGENERACY_TOL {
                ground_set.push(x as u64);
            } else {
                delta = Some(delta.map_or(excess, |d| d.min(excess)));
            }
        }
        Ok(Self {
            n,
            e0,
            delta,
            ground_set,
            energies,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn e0(&self) -> f64 {
        self.e0
    }

    /// Spectral gap above the ground level; `None` when every state is ground.
    pub fn gap(&self) -> Option<f64> {
        self.delta
    }

    /// Ground bitstrings in ascending order.
    pub fn ground_set(&self) -> &[u64] {
        &self.ground_set
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn is_ground(&self, bits: u64) -> bool {
        self.ground_set.binary_search(&bits).is_ok()
    }

    /// Smallest ground bitstring, the deterministic warm-start target.
    pub fn first_ground(&self) -> u64 {
        self.ground_set[0]
    }
}
