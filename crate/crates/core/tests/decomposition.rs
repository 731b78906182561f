mod common;

use common::*;
use separability::decomposition::{
    build_decomposition, extract_factors, isometry_defect, isometry_matrix, solve_weights,
    verify_decomposition,
};
use separability::search::{purity_defect, CandidateSet};
use separability::states::{phi_plus, random_product_state};
use separability::{
    spectral_decompose, Completeness, ComplexVector, DecompositionConfig, DensityMatrix, Error,
    RangeVector, SeparableDecomposition, SpectralBasis, StateVector, WeightSolution,
};

const R3: f64 = 0.866_025_403_784_438_6;

fn set(vectors: Vec<RangeVector>) -> CandidateSet {
    CandidateSet {
        vectors,
        completeness: Completeness::CertifiedComplete,
    }
}

fn ex1_candidates() -> CandidateSet {
    set(vec![rv(&[c(H, 0.), c(H, 0.)]), rv(&[c(H, 0.), c(-H, 0.)])])
}

fn ex2_candidates() -> CandidateSet {
    set(vec![
        rv(&[c(0.5, 0.), c(0., R3)]),
        rv(&[c(0.5, 0.), c(0., -R3)]),
    ])
}

fn e0() -> ComplexVector {
    ComplexVector::from_vec(vec![c(1., 0.), c(0., 0.)])
}

fn feasible(sol: WeightSolution) -> (Vec<f64>, f64) {
    match sol {
        WeightSolution::Feasible { weights, residual } => (weights.values().to_vec(), residual),
        other => panic!("expected feasible weights, got {other:?}"),
    }
}

fn decompose(basis: &SpectralBasis, candidates: &CandidateSet) -> SeparableDecomposition {
    let WeightSolution::Feasible { weights, .. } =
        solve_weights(candidates, basis.eigenvalues(), 1e-9).unwrap()
    else {
        panic!("infeasible");
    };
    build_decomposition(basis, candidates, &weights, &DecompositionConfig::default()).unwrap()
}

#[test]
fn weights_for_the_worked_examples() {
    let (p, res) = feasible(solve_weights(&ex1_candidates(), &[0.5, 0.5], 1e-9).unwrap());
    assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12 && res < 1e-12);

    // Off-diagonal forces p1 = p2; the diagonal then needs 0.7 = 0.5.
    match solve_weights(&ex1_candidates(), &[0.7, 0.3], 1e-9).unwrap() {
        WeightSolution::Infeasible { residual } => assert!(residual > 0.1),
        other => panic!("{other:?}"),
    }

    let (p, _) = feasible(solve_weights(&ex2_candidates(), &[0.25, 0.75], 1e-9).unwrap());
    assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
}

#[test]
fn solve_weights_rejects_bad_input() {
    let empty = set(vec![]);
    assert!(matches!(
        solve_weights(&empty, &[1.0], 1e-9),
        Err(Error::EmptyCandidates)
    ));
    assert!(matches!(
        solve_weights(&ex1_candidates(), &[0.2, 0.3, 0.5], 1e-9),
        Err(Error::LengthMismatch { .. })
    ));
}

#[test]
fn factor_extraction_examples() {
    let f = extract_factors(&ket(&[2, 2], &[0, 0]), 1e-12).unwrap();
    assert!(phase_distance(&f[0], &e0()) < 1e-15);
    assert!(phase_distance(&f[1], &e0()) < 1e-15);

    let joint = separability::search::assemble_range_vector(
        &rv(&[c(0.5, 0.), c(0., -R3)]),
        &example2_basis(),
    )
    .unwrap();
    let f = extract_factors(&joint, 1e-12).unwrap();
    for v in &f {
        assert!(phase_distance(v, &alpha()) < 1e-12);
    }
    let rebuilt = separability::tensor::kron_vectors(&f);
    assert!((rebuilt - joint.amplitudes()).norm() < 1e-8);

    match extract_factors(&phi_plus(), 1e-12) {
        Err(Error::NotProduct(d)) => assert!((d - 0.5).abs() < 1e-15),
        other => panic!("{other:?}"),
    }
}

#[test]
fn example1_decomposition_is_the_computational_mixture() {
    let rho =
        separability::generate(&separability::StateSpec::PhiPlusMinusMix { lambda: 0.5 }).unwrap();
    let basis = example1_basis(0.5);
    let d = decompose(&basis, &ex1_candidates());
    assert_eq!(d.terms().len(), 2);
    assert!(d.residual() <= 1e-12);
    let kets = [ket(&[2, 2], &[0, 0]), ket(&[2, 2], &[1, 1])];
    for t in d.terms() {
        assert!((t.weight - 0.5).abs() < 1e-12);
        assert!(kets
            .iter()
            .any(|k| phase_distance(t.joint.amplitudes(), k.amplitudes()) < 1e-12));
    }
    assert!(verify_decomposition(&d, &rho).unwrap() <= 1e-12);
}

#[test]
fn example2_decomposition_has_the_expected_factors() {
    let rho = separability::generate(&separability::StateSpec::ComplexRank2Separable).unwrap();
    let d = decompose(&example2_basis(), &ex2_candidates());
    let zero = e0();
    let mut seen = [false, false];
    for t in d.terms() {
        assert!((t.weight - 0.5).abs() < 1e-12);
        if t.factors.iter().all(|f| phase_distance(f, &zero) < 1e-12) {
            seen[0] = true;
        }
        if t.factors
            .iter()
            .all(|f| phase_distance(f, &alpha()) < 1e-12)
        {
            seen[1] = true;
        }
    }
    assert_eq!(seen, [true, true]);
    assert!(verify_decomposition(&d, &rho).unwrap() <= 1e-12);
}

#[test]
fn pure_product_gives_a_single_term() {
    let psi = random_product_state(5, &[2, 3]).unwrap();
    let rho = DensityMatrix::from_pure(&psi).unwrap();
    assert_eq!(spectral_decompose(&rho, 1e-9).unwrap().rank(), 1);
    let basis = basis_from(std::slice::from_ref(&psi), &[1.0]);
    let d = decompose(&basis, &set(vec![rv(&[c(1., 0.)])]));
    assert_eq!(d.terms().len(), 1);
    assert!((d.weights()[0] - 1.0).abs() <= 1e-12);
    let r = verify_decomposition(&d, &rho).unwrap();
    assert!(r <= 1e-15, "{r:e}");
}

#[test]
fn perturbed_weights_fail_verification() {
    let rho = separability::generate(&separability::StateSpec::ComplexRank2Separable).unwrap();
    let d = decompose(&example2_basis(), &ex2_candidates());
    let mut w = d.weights();
    w[0] += 0.01;
    let total: f64 = w.iter().sum();
    let perturbed: Vec<(f64, StateVector)> = d
        .terms()
        .iter()
        .zip(&w)
        .map(|(t, &p)| (p / total, StateVector::product(&t.factors).unwrap()))
        .collect();
    let m = DensityMatrix::mixture(&perturbed).unwrap();
    let residual = separability::tensor::max_abs_entry(&(m.matrix() - rho.matrix()));
    assert!(residual >= 1e-3, "{residual}");
}

/// Builds `sum_i p_i |x_i><x_i|` from seeded products and returns the
/// state together with the products.
fn known_mixture(seed: u64, dims: &[usize], terms: usize) -> (DensityMatrix, Vec<StateVector>) {
    let products: Vec<StateVector> = (0..terms)
        .map(|i| random_product_state(seed * 100 + i as u64, dims).unwrap())
        .collect();
    let raw: Vec<f64> = (0..terms)
        .map(|i| 1.0 + ((seed + i as u64) % 5) as f64)
        .collect();
    let total: f64 = raw.iter().sum();
    let mix: Vec<(f64, StateVector)> = raw
        .iter()
        .map(|w| w / total)
        .zip(products.iter().cloned())
        .collect();
    (DensityMatrix::mixture(&mix).unwrap(), products)
}

fn coordinates(basis: &SpectralBasis, x: &StateVector) -> RangeVector {
    let y = basis.vectors().adjoint() * x.amplitudes();
    RangeVector::new(y).unwrap()
}

#[test]
fn known_product_mixtures_pass_the_range_conditions() {
    let dims_set: [&[usize]; 3] = [&[2, 2], &[2, 3], &[2, 2, 2]];
    for seed in 0..200u64 {
        let dims = dims_set[seed as usize % 3];
        let terms = 2 + seed as usize % 3;
        let (rho, products) = known_mixture(seed, dims, terms);
        let basis = spectral_decompose(&rho, 1e-9).unwrap();
        let pool: Vec<RangeVector> = products.iter().map(|x| coordinates(&basis, x)).collect();
        for y in &pool {
            let f = purity_defect(y, &basis).unwrap().total;
            assert!(f <= 1e-14, "seed {seed}: f = {f:e}");
        }
        let candidates = set(pool);
        let (p, residual) =
            feasible(solve_weights(&candidates, basis.eigenvalues(), 1e-9).unwrap());
        assert!(residual <= 1e-9, "seed {seed}");
        assert!(p.iter().all(|&x| x >= 0.0));
        assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        let weights = match solve_weights(&candidates, basis.eigenvalues(), 1e-9).unwrap() {
            WeightSolution::Feasible { weights, .. } => weights,
            _ => unreachable!(),
        };
        let m = isometry_matrix(&candidates, &weights, basis.eigenvalues());
        assert!(isometry_defect(&m) <= 1e-8, "seed {seed}");
        let d = build_decomposition(
            &basis,
            &candidates,
            &weights,
            &DecompositionConfig::default(),
        )
        .unwrap();
        assert!(verify_decomposition(&d, &rho).unwrap() <= 1e-8);
    }
}

#[test]
fn large_pools_are_reduced_to_at_most_k_squared_terms() {
    for seed in 0..20u64 {
        let (rho, products) = known_mixture(900 + seed, &[2, 2], 30);
        let basis = spectral_decompose(&rho, 1e-9).unwrap();
        let k = basis.rank();
        let candidates = set(products.iter().map(|x| coordinates(&basis, x)).collect());
        let (p, residual) =
            feasible(solve_weights(&candidates, basis.eigenvalues(), 1e-9).unwrap());
        assert!(
            p.iter().filter(|&&x| x > 0.0).count() <= k * k,
            "seed {seed}"
        );
        assert!(residual <= 1e-9);
    }
}

#[test]
fn isometry_matrix_of_example2_is_unitary() {
    let candidates = ex2_candidates();
    let WeightSolution::Feasible { weights, .. } =
        solve_weights(&candidates, &[0.25, 0.75], 1e-9).unwrap()
    else {
        panic!()
    };
    let m = isometry_matrix(&candidates, &weights, &[0.25, 0.75]);
    assert!(isometry_defect(&m) <= 1e-12);
    // Row l is sqrt(p_l / lambda_j) y_j^(l): (1/sqrt2) (sqrt2 * 1/2 ... ).
    let expected = ComplexVector::from_vec(vec![c(H, 0.), c(0., H)]);
    assert!((m.row(0).transpose() - expected).norm() < 1e-12);
}
