mod common;
mod oracle;

use common::*;
use separability::states::{complex_rank2_terms, random_product_state};
use separability::tensor::max_abs_entry;
use separability::{
    generate, spectral_decompose, validate_density, ComplexMatrix, DensityMatrix, Error, StateSpec,
    Tolerances,
};

fn all_families() -> Vec<StateSpec> {
    let mut v = vec![
        StateSpec::BellPhiPlus,
        StateSpec::BellPhiMinus,
        StateSpec::BellPsiPlus,
        StateSpec::BellPsiMinus,
        StateSpec::ComplexRank2Separable,
        StateSpec::Ghz { parties: 3, dim: 2 },
        StateSpec::Ghz { parties: 2, dim: 3 },
    ];
    for x in [0.0, 0.1, 0.5, 0.9, 1.0] {
        v.push(StateSpec::PhiPlusMinusMix { lambda: x });
        v.push(StateSpec::QutritShiftMix { lambda: x });
        v.push(StateSpec::Werner { p: x });
    }
    for seed in 0..20 {
        v.push(StateSpec::RandomSeparable {
            seed,
            dims: vec![2, 3],
            terms: 3,
        });
        v.push(StateSpec::RandomDensity {
            seed,
            dims: vec![2, 2, 2],
            rank: 1 + seed as usize % 8,
        });
    }
    v
}

#[test]
fn every_generated_state_is_a_valid_density() {
    for spec in all_families() {
        let rho = generate(&spec).unwrap();
        validate_density(
            rho.matrix().clone(),
            rho.structure().clone(),
            &Tolerances::default(),
        )
        .unwrap_or_else(|e| panic!("{spec:?}: {e}"));
    }
}

#[test]
fn example1_at_one_half_is_the_classical_mixture() {
    let rho = generate(&StateSpec::PhiPlusMinusMix { lambda: 0.5 }).unwrap();
    let mut expected = ComplexMatrix::zeros(4, 4);
    expected[(0, 0)] = c(0.5, 0.0);
    expected[(3, 3)] = c(0.5, 0.0);
    assert!(max_abs_entry(&(rho.matrix() - expected)) < 1e-15);
    let basis = spectral_decompose(&rho, 1e-9).unwrap();
    assert_eq!(basis.rank(), 2);
    assert!(basis.eigenvalues().iter().all(|l| (l - 0.5).abs() < 1e-15));
}

#[test]
fn example3_reduces_to_maximally_mixed() {
    let third = oracle::to_dense(&(ComplexMatrix::identity(3, 3) * c(1.0 / 3.0, 0.0)));
    for lambda in [0.0, 0.2, 0.5, 0.77, 1.0] {
        let rho = generate(&StateSpec::QutritShiftMix { lambda }).unwrap();
        let dense = oracle::to_dense(rho.matrix());
        for keep in 0..2 {
            let brute = oracle::partial_trace_2(&dense, 3, 3, keep);
            assert!(oracle::max_diff(&brute, &third) < 1e-15);
            let ours = oracle::to_dense(&rho.partial_trace(&[keep]).unwrap());
            assert!(oracle::max_diff(&ours, &third) < 1e-15);
        }
    }
}

#[test]
fn example2_spectrum_matches_its_pure_terms() {
    let [a, b] = complex_rank2_terms();
    assert!(a.inner(&b).norm() < 1e-15);
    let rho = generate(&StateSpec::ComplexRank2Separable).unwrap();
    let basis = spectral_decompose(&rho, 1e-9).unwrap();
    assert_eq!(basis.rank(), 2);
    assert!((basis.eigenvalues()[0] - 0.75).abs() < 1e-14);
    assert!((basis.eigenvalues()[1] - 0.25).abs() < 1e-14);
    assert!(phase_distance(basis.eigenvector(0).amplitudes(), b.amplitudes()) < 1e-12);
    assert!(phase_distance(basis.eigenvector(1).amplitudes(), a.amplitudes()) < 1e-12);
}

#[test]
fn random_products_are_deterministic_and_spread_out() {
    let a = random_product_state(11, &[2, 3, 2]).unwrap();
    let b = random_product_state(11, &[2, 3, 2]).unwrap();
    assert_eq!(a, b);
    assert!(separability::search::state_purity_defect(&a).total <= 1e-16);

    let states: Vec<_> = (1..=100)
        .map(|s| random_product_state(s, &[2, 2]).unwrap())
        .collect();
    let mut sum = 0.0;
    let mut count = 0;
    for i in 0..states.len() {
        for j in i + 1..states.len() {
            sum += states[i].inner(&states[j]).norm_sqr();
            count += 1;
        }
    }
    let mean = sum / count as f64;
    assert!((mean - 0.25).abs() <= 0.05, "{mean}");
}

#[test]
fn generators_are_deterministic() {
    for spec in all_families() {
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
    }
}

#[test]
fn invalid_parameters_are_rejected() {
    let bad = [
        StateSpec::PhiPlusMinusMix { lambda: 1.5 },
        StateSpec::QutritShiftMix { lambda: -0.1 },
        StateSpec::Werner { p: f64::NAN },
        StateSpec::Ghz { parties: 1, dim: 2 },
        StateSpec::RandomSeparable {
            seed: 0,
            dims: vec![2, 2],
            terms: 0,
        },
        StateSpec::RandomDensity {
            seed: 0,
            dims: vec![2, 2],
            rank: 0,
        },
        StateSpec::RandomDensity {
            seed: 0,
            dims: vec![2, 2],
            rank: 5,
        },
    ];
    for spec in bad {
        assert!(
            matches!(generate(&spec), Err(Error::InvalidParameter(_))),
            "{spec:?}"
        );
    }
}

#[test]
fn mixtures_of_bell_states_are_bell_diagonal() {
    let rho = generate(&StateSpec::Werner { p: 1.0 }).unwrap();
    let psi = DensityMatrix::from_pure(&separability::states::psi_minus()).unwrap();
    assert!(max_abs_entry(&(rho.matrix() - psi.matrix())) < 1e-15);
}
