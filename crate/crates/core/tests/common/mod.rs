#![allow(dead_code)]

use finite_core::pauli_model::PauliHamiltonian;
use finite_core::state_prep::QuantumState;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random commuting instance: `n <= max_n` qubits, `1..=10` Z strings with
/// coefficients in `[-2, 2]`, and a random product state with phases.
pub struct RandomInstance {
    pub hamiltonian: PauliHamiltonian,
    pub state: QuantumState,
}

pub fn product_state(n: usize, thetas: &[f64], phis: &[f64]) -> QuantumState {
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    for q in 0..n {
        let zero = Complex64::new(thetas[q].cos(), 0.0);
        let one = Complex64::from_polar(thetas[q].sin(), phis[q]);
        // Qubit q becomes the new most significant bit.
        let mut next: Vec<Complex64> = amps.iter().map(|&a| a * zero).collect();
        next.extend(amps.iter().map(|&a| a * one));
        amps = next;
    }
    QuantumState::from_amplitudes(amps).unwrap()
}

pub fn random_instance(rng: &mut ChaCha8Rng, max_n: usize) -> RandomInstance {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=10);
    let terms: Vec<(u64, f64)> = (0..m)
        .map(|_| (rng.gen_range(1..(1u64 << n)), rng.gen_range(-2.0..=2.0)))
        .collect();
    let hamiltonian = PauliHamiltonian::from_masks(n, terms, 0.0).unwrap();
    let thetas: Vec<f64> = (0..n)
        .map(|_| rng.gen_range(0.0..std::f64::consts::PI))
        .collect();
    let phis: Vec<f64> = (0..n)
        .map(|_| rng.gen_range(0.0..2.0 * std::f64::consts::PI))
        .collect();
    RandomInstance {
        hamiltonian,
        state: product_state(n, &thetas, &phis),
    }
}

/// The seeded 100-instance set used by the acceptance criteria.
pub fn random_instance_set() -> Vec<RandomInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    (0..100).map(|_| random_instance(&mut rng, 8)).collect()
}

/// Independent enumeration oracle: `(P_LCU, F_g)` from raw amplitudes and
/// energies, without the library spectrum or shifting.
pub fn brute_force_outcome(h: &PauliHamiltonian, state: &QuantumState, beta: f64) -> (f64, f64) {
    let n = h.n();
    let energies: Vec<f64> = (0..1u64 << n)
        .map(|x| {
            h.terms()
                .iter()
                .map(|t| {
                    let parity = (t.mask() & x).count_ones() % 2;
                    if parity == 0 {
                        t.coeff()
                    } else {
                        -t.coeff()
                    }
                })
                .sum()
        })
        .collect();
    let e0 = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    let w: f64 = h.terms().iter().map(|t| t.coeff().abs()).sum();
    let mut total = 0.0;
    let mut ground = 0.0;
    for (x, a) in state.amplitudes().iter().enumerate() {
        let weight = a.norm_sqr() * (-2.0 * beta * energies[x]).exp();
        total += weight;
        if energies[x] - e0 <= 1e-9 {
            ground += weight;
        }
    }
    ((-2.0 * beta * w).exp() * total, ground / total)
}
