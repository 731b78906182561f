//! Fixtures shared by the integration tests.

#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use separability::states::{complex_rank2_terms, phi_minus, phi_plus, qutrit_shift_terms};
use separability::{
    Complex64, ComplexMatrix, ComplexVector, PartyStructure, RangeVector, SpectralBasis,
    StateVector,
};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub fn basis_from(states: &[StateVector], eigenvalues: &[f64]) -> SpectralBasis {
    let structure = states[0].structure().clone();
    let n = structure.total_dim();
    let vectors = ComplexMatrix::from_fn(n, states.len(), |r, col| states[col].amplitudes()[r]);
    SpectralBasis::new(structure, eigenvalues.to_vec(), vectors, 1e-12).unwrap()
}

/// `(phi+, phi-)` with eigenvalues `(lambda, 1 - lambda)`.
pub fn example1_basis(lambda: f64) -> SpectralBasis {
    basis_from(&[phi_plus(), phi_minus()], &[lambda, 1.0 - lambda])
}

/// The two pure terms in their natural order, eigenvalues `(1/4, 3/4)`.
pub fn example2_basis() -> SpectralBasis {
    basis_from(&complex_rank2_terms(), &[0.25, 0.75])
}

pub fn example3_basis(lambda: f64) -> SpectralBasis {
    basis_from(&qutrit_shift_terms(), &[lambda, 1.0 - lambda])
}

pub fn ket(dims: &[usize], digits: &[usize]) -> StateVector {
    let s = PartyStructure::new(dims.to_vec()).unwrap();
    let mut amp = ComplexVector::zeros(s.total_dim());
    amp[s.index(digits)] = c(1.0, 0.0);
    StateVector::new(s, amp).unwrap()
}

pub fn alpha() -> ComplexVector {
    ComplexVector::from_vec(vec![c(H, 0.0), c(0.0, H)])
}

pub fn rv(y: &[Complex64]) -> RangeVector {
    RangeVector::from_slice(y).unwrap()
}

pub fn gaussian(rng: &mut ChaCha20Rng, len: usize) -> ComplexVector {
    ComplexVector::from_fn(len, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c(re, im)
    })
}

pub fn unit(rng: &mut ChaCha20Rng, len: usize) -> ComplexVector {
    let v = gaussian(rng, len);
    let n = v.norm();
    v / c(n, 0.0)
}

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Random orthonormal `n x k` frame (Gram-Schmidt on Gaussian columns).
pub fn random_frame(rng: &mut ChaCha20Rng, n: usize, k: usize) -> ComplexMatrix {
    let mut cols: Vec<ComplexVector> = Vec::new();
    while cols.len() < k {
        let mut v = gaussian(rng, n);
        for q in &cols {
            let proj = q.dotc(&v);
            v -= q * proj;
        }
        let norm = v.norm();
        if norm > 1e-6 {
            cols.push(v / c(norm, 0.0));
        }
    }
    ComplexMatrix::from_columns(&cols)
}

pub fn random_basis(seed: u64, dims: &[usize], k: usize) -> SpectralBasis {
    let s = PartyStructure::new(dims.to_vec()).unwrap();
    let mut r = rng(seed);
    let frame = random_frame(&mut r, s.total_dim(), k);
    SpectralBasis::new(s, vec![1.0 / k as f64; k], frame, 1e-10).unwrap()
}

/// Distance between two vectors after removing the relative global phase.
pub fn phase_distance(a: &ComplexVector, b: &ComplexVector) -> f64 {
    let overlap = a.dotc(b);
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        c(1.0, 0.0)
    };
    (a * phase - b).norm()
}
