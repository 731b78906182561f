//! Multistart projected-gradient search on the unit sphere of C^k.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::defect::RangeObjective;
use super::{gauge_fix_dedup, CandidateSet, Completeness, RangeVector, SearchConfig};
use crate::error::Result;
use crate::tensor::{ComplexVector, SpectralBasis};

const ARMIJO: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;

/// Outcome of one local descent.
#[derive(Debug, Clone)]
pub(crate) struct LocalMinimum {
    pub y: ComplexVector,
    pub value: f64,
}

fn normalize(v: ComplexVector) -> ComplexVector {
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

/// Projected gradient descent with Barzilai-Borwein trial steps and
/// Armijo backtracking; iterates are retracted onto the sphere by
/// normalization.
pub(crate) fn descend(
    objective: &RangeObjective,
    start: ComplexVector,
    max_iters: usize,
    grad_tol: f64,
) -> LocalMinimum {
    let mut y = normalize(start);
    let mut f = objective.value(&y);
    let mut g = objective.gradient(&y);
    let mut step = 1.0;
    for _ in 0..max_iters {
        let g2 = g.norm_squared();
        if g2.sqrt() <= grad_tol || f == 0.0 {
            break;
        }
        let mut s = step;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial = normalize(&y - &g * Complex64::new(s, 0.0));
            let f_trial = objective.value(&trial);
            if f_trial <= f - ARMIJO * s * g2 {
                accepted = Some((trial, f_trial));
                break;
            }
            s *= 0.5;
        }
        let Some((y_new, f_new)) = accepted else {
            break;
        };
        let g_new = objective.gradient(&y_new);
        let dy = &y_new - &y;
        let dg = &g_new - &g;
        let curvature = dy.dotc(&dg).re;
        step = if curvature > 0.0 {
            (dy.norm_squared() / curvature).clamp(1e-8, 1e8)
        } else {
            (2.0 * s).min(1e8)
        };
        y = y_new;
        f = f_new;
        g = g_new;
    }
    LocalMinimum { y, value: f }
}

/// Uniform draw from the unit sphere of C^k for start `index`. The stream
/// depends only on `(seed, index)`.
pub(crate) fn sphere_start(seed: u64, index: u64, k: usize) -> ComplexVector {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let v = ComplexVector::from_fn(k, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        Complex64::new(re, im)
    });
    normalize(v)
}

/// Product vectors in the range of `basis` found by multistart descent on
/// the summed purity defect. The result is always reported as
/// [`Completeness::SampledIncomplete`]; a numerical search cannot prove it
/// found every solution.
pub fn find_product_vectors_numeric(
    basis: &SpectralBasis,
    cfg: &SearchConfig,
) -> Result<CandidateSet> {
    cfg.validate()?;
    let objective = RangeObjective::new(basis.structure(), basis.vectors());
    let k = basis.rank();
    let starts = cfg.starts_for(k);
    let minima: Vec<LocalMinimum> = (0..starts as u64)
        .into_par_iter()
        .map(|i| {
            descend(
                &objective,
                sphere_start(cfg.seed, i, k),
                cfg.max_iters,
                cfg.grad_tol,
            )
        })
        .collect();
    let raw: Vec<RangeVector> = minima
        .into_iter()
        .filter(|m| m.value <= cfg.defect_tol)
        .map(|m| RangeVector::new(m.y))
        .collect::<Result<_>>()?;
    Ok(CandidateSet {
        vectors: gauge_fix_dedup(&raw, cfg.dedup_tol)?,
        completeness: Completeness::SampledIncomplete,
    })
}
