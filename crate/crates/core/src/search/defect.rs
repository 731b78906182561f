//! Purity defect of the reduced single-party states and its gradient.
//!
//! For a normalized joint vector with party-`a` flattening `C` (rows indexed
//! by the local index of `a`, columns by the remaining parties),
//! `1 - tr(sigma_a^2) = 2 * sum |C_ir C_js - C_is C_jr|^2` over row pairs
//! `i < j` and column pairs `r < s`. Summing squared 2x2 minors keeps the
//! value nonnegative and accurate far below machine epsilon, which the
//! naive `1 - tr(sigma^2)` cannot do.

use num_complex::Complex64;

use crate::tensor::{single_party_reduced, ComplexMatrix, ComplexVector, PartyStructure};

/// Per-party purity defects `1 - tr(sigma_a^2)` and their sum.
#[derive(Debug, Clone, PartialEq)]
pub struct PurityDefect {
    pub total: f64,
    pub per_party: Vec<f64>,
}

/// Precomputed flattening layout for a party structure.
#[derive(Debug, Clone)]
pub(crate) struct Flattenings {
    structure: PartyStructure,
    /// For each party, the joint indices whose local digit is zero; adding
    /// `a * stride` selects row `a` of the flattening.
    rest: Vec<Vec<usize>>,
}

impl Flattenings {
    pub(crate) fn new(structure: &PartyStructure) -> Self {
        let rest = (0..structure.parties())
            .map(|a| {
                (0..structure.total_dim())
                    .filter(|&n| structure.digit(n, a) == 0)
                    .collect()
            })
            .collect();
        Self {
            structure: structure.clone(),
            rest,
        }
    }

    /// Purity defects of `amp / |amp|`.
    pub(crate) fn defect(&self, amp: &[Complex64]) -> PurityDefect {
        let norm2: f64 = amp.iter().map(|z| z.norm_sqr()).sum();
        let scale = 2.0 / (norm2 * norm2);
        let per_party: Vec<f64> = (0..self.structure.parties())
            .map(|a| scale * self.minor_sum(amp, a))
            .collect();
        PurityDefect {
            total: per_party.iter().sum(),
            per_party,
        }
    }

    fn minor_sum(&self, amp: &[Complex64], party: usize) -> f64 {
        let d = self.structure.dim(party);
        let stride = self.structure.stride(party);
        let rest = &self.rest[party];
        let mut sum = 0.0;
        for i in 0..d {
            for j in i + 1..d {
                for (r, &nr) in rest.iter().enumerate() {
                    let (a_ir, a_jr) = (amp[nr + i * stride], amp[nr + j * stride]);
                    for &ns in &rest[r + 1..] {
                        let minor = a_ir * amp[ns + j * stride] - amp[ns + i * stride] * a_jr;
                        sum += minor.norm_sqr();
                    }
                }
            }
        }
        sum
    }

    /// Real gradient of `F(psi) = sum_a (|psi|^4 - tr(sigma_a^2))`, packed
    /// as complex numbers `dF/dRe + i dF/dIm`.
    pub(crate) fn state_gradient(&self, amp: &[Complex64]) -> Vec<Complex64> {
        let norm2: f64 = amp.iter().map(|z| z.norm_sqr()).sum();
        let m = self.structure.parties();
        let mut grad: Vec<Complex64> = amp.iter().map(|z| z * (4.0 * norm2 * m as f64)).collect();
        for a in 0..m {
            let sigma = single_party_reduced(&self.structure, amp, a);
            let stride = self.structure.stride(a);
            let d = self.structure.dim(a);
            for (n, g) in grad.iter_mut().enumerate() {
                let row = self.structure.digit(n, a);
                let base = n - row * stride;
                let mut acc = Complex64::new(0.0, 0.0);
                for b in 0..d {
                    acc += sigma[(row, b)] * amp[base + b * stride];
                }
                *g -= acc * 4.0;
            }
        }
        grad
    }
}

/// Objective on coefficient vectors over a fixed spectral basis.
#[derive(Debug, Clone)]
pub(crate) struct RangeObjective {
    flat: Flattenings,
    vectors: ComplexMatrix,
}

impl RangeObjective {
    pub(crate) fn new(structure: &PartyStructure, vectors: &ComplexMatrix) -> Self {
        Self {
            flat: Flattenings::new(structure),
            vectors: vectors.clone(),
        }
    }

    pub(crate) fn state(&self, y: &ComplexVector) -> ComplexVector {
        &self.vectors * y
    }

    pub(crate) fn defect(&self, y: &ComplexVector) -> PurityDefect {
        self.flat.defect(self.state(y).as_slice())
    }

    pub(crate) fn value(&self, y: &ComplexVector) -> f64 {
        self.defect(y).total
    }

    /// Tangent-space gradient at a unit vector `y`, complex-packed.
    pub(crate) fn gradient(&self, y: &ComplexVector) -> ComplexVector {
        let psi = self.state(y);
        let g_state = ComplexVector::from_vec(self.flat.state_gradient(psi.as_slice()));
        let g = self.vectors.adjoint() * g_state;
        let radial = y.dotc(&g).re;
        g - y * Complex64::new(radial, 0.0)
    }
}

/// Unpacks a complex-packed gradient into interleaved `(Re, Im)` pairs.
pub(crate) fn interleave(g: &ComplexVector) -> Vec<f64> {
    g.iter().flat_map(|z| [z.re, z.im]).collect()
}
