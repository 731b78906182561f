//! Analytic product-vector enumeration for rank-2 bipartite ranges.
//!
//! Reshaping the two basis vectors into `d1 x d2` matrices `M1`, `M2`, the
//! range vector `y1 phi1 + y2 phi2` is a product exactly when the pencil
//! `y1 M1 + y2 M2` has rank one, i.e. when every 2x2 minor vanishes. Each
//! minor is a binary quadratic form in `(y1, y2)`, so any single nonzero
//! minor has at most two projective roots and every product vector is
//! among them.

use num_complex::Complex64;

use super::defect::RangeObjective;
use super::numeric::{descend, find_product_vectors_numeric};
use super::{gauge_fix_dedup, CandidateSet, Completeness, RangeVector, SearchConfig};
use crate::error::{Error, Result};
use crate::tensor::{ComplexMatrix, ComplexVector, SpectralBasis};

/// Coefficient magnitude below which a minor form counts as identically zero.
const PENCIL_TOL: f64 = 1e-10;
/// Defect a root must reach before it is polished; anything above is a
/// root of the chosen minor that the other minors reject.
const ROOT_GATE: f64 = 1e-8;

/// `q0 y1^2 + q1 y1 y2 + q2 y2^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct BinaryQuadratic {
    pub q0: Complex64,
    pub q1: Complex64,
    pub q2: Complex64,
}

impl BinaryQuadratic {
    fn magnitude(&self) -> f64 {
        self.q0.norm().max(self.q1.norm()).max(self.q2.norm())
    }

    #[cfg(test)]
    pub(crate) fn eval(&self, y1: Complex64, y2: Complex64) -> Complex64 {
        self.q0 * y1 * y1 + self.q1 * y1 * y2 + self.q2 * y2 * y2
    }

    /// Projective roots `(y1, y2)`, computed without division. A form of
    /// degree below two in `y2` has a root at `y1 = 0`.
    pub(crate) fn projective_roots(&self) -> Vec<(Complex64, Complex64)> {
        let disc = (self.q1 * self.q1 - self.q0 * self.q2 * 4.0).sqrt();
        let plus = -(self.q1 + disc) * 0.5;
        let minus = -(self.q1 - disc) * 0.5;
        let w = if plus.norm() >= minus.norm() {
            plus
        } else {
            minus
        };
        if w.norm() <= f64::MIN_POSITIVE * 1e3 {
            let one = Complex64::new(1.0, 0.0);
            let zero = Complex64::new(0.0, 0.0);
            return vec![(one, zero), (zero, one)];
        }
        vec![(self.q2, w), (w, self.q0)]
    }
}

fn reshape(basis: &SpectralBasis, col: usize) -> ComplexMatrix {
    let (d1, d2) = (basis.structure().dim(0), basis.structure().dim(1));
    ComplexMatrix::from_fn(d1, d2, |i, j| basis.vectors()[(i * d2 + j, col)])
}

/// All 2x2 minors of the pencil `y1 M1 + y2 M2` as binary quadratic forms.
pub(crate) fn pencil_minors(m1: &ComplexMatrix, m2: &ComplexMatrix) -> Vec<BinaryQuadratic> {
    let (rows, cols) = m1.shape();
    let mut out = Vec::new();
    for a in 0..rows {
        for b in a + 1..rows {
            for c in 0..cols {
                for e in c + 1..cols {
                    let q0 = m1[(a, c)] * m1[(b, e)] - m1[(a, e)] * m1[(b, c)];
                    let q2 = m2[(a, c)] * m2[(b, e)] - m2[(a, e)] * m2[(b, c)];
                    let q1 = m1[(a, c)] * m2[(b, e)] + m2[(a, c)] * m1[(b, e)]
                        - m1[(a, e)] * m2[(b, c)]
                        - m2[(a, e)] * m1[(b, c)];
                    out.push(BinaryQuadratic { q0, q1, q2 });
                }
            }
        }
    }
    out
}

/// Enumerates the product vectors of a rank-2 bipartite range.
///
/// Returns `CertifiedComplete` when a nonvanishing minor pins the solutions
/// to its roots and every surviving root polished to `cfg.defect_tol`,
/// `CertifiedEmpty` when no root of that minor is a product vector, and
/// `SampledIncomplete` (with numerically sampled representatives) when the
/// whole pencil has rank at most one or a root failed to polish.
pub fn find_product_vectors_rank2_bipartite(
    basis: &SpectralBasis,
    cfg: &SearchConfig,
) -> Result<CandidateSet> {
    let parties = basis.structure().parties();
    if parties != 2 {
        return Err(Error::NotBipartite(parties));
    }
    if basis.rank() != 2 {
        return Err(Error::NotRank2(basis.rank()));
    }
    cfg.validate()?;

    let minors = pencil_minors(&reshape(basis, 0), &reshape(basis, 1));
    let Some(pivot) = minors
        .iter()
        .copied()
        .max_by(|a, b| a.magnitude().total_cmp(&b.magnitude()))
        .filter(|q| q.magnitude() > PENCIL_TOL)
    else {
        // Every member of the pencil has rank <= 1: a continuum of solutions.
        return find_product_vectors_numeric(basis, cfg);
    };

    let objective = RangeObjective::new(basis.structure(), basis.vectors());
    let mut accepted = Vec::new();
    let mut unresolved = false;
    for (y1, y2) in pivot.projective_roots() {
        let y = ComplexVector::from_vec(vec![y1, y2]);
        let y = &y / Complex64::new(y.norm(), 0.0);
        if objective.value(&y) > ROOT_GATE {
            continue;
        }
        let polished = descend(&objective, y, cfg.max_iters, cfg.grad_tol);
        if polished.value <= cfg.defect_tol {
            accepted.push(RangeVector::new(polished.y)?);
        } else {
            unresolved = true;
        }
    }
    let vectors = gauge_fix_dedup(&accepted, cfg.dedup_tol)?;
    let completeness = if unresolved {
        Completeness::SampledIncomplete
    } else if vectors.is_empty() {
        Completeness::CertifiedEmpty
    } else {
        Completeness::CertifiedComplete
    };
    Ok(CandidateSet {
        vectors,
        completeness,
    })
}
