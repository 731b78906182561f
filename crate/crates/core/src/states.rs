//! Deterministic state generators.
//!
//! Bell conventions: `|phi+-> = (|00> +- |11>)/sqrt2`,
//! `|psi+-> = (|01> +- |10>)/sqrt2`. Random families draw from ChaCha20
//! seeded with `ChaCha20Rng::seed_from_u64(seed)` and standard normal
//! samples from `rand_distr`, so a given seed produces the same matrix on
//! every platform.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::tensor::{
    validate_density, ComplexMatrix, ComplexVector, DensityMatrix, PartyStructure, StateVector,
    Tolerances,
};

/// A generator request.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    BellPhiPlus,
    BellPhiMinus,
    BellPsiPlus,
    BellPsiMinus,
    /// `lambda |phi+><phi+| + (1 - lambda) |phi-><phi-|` on two qubits;
    /// separable only at `lambda = 1/2`.
    PhiPlusMinusMix {
        lambda: f64,
    },
    /// Rank-2 two-qubit state with eigenvalues 1/4 and 3/4 whose range
    /// holds the products `|00>` and `|aa>`, `|a> = (|0> + i|1>)/sqrt2`.
    ComplexRank2Separable,
    /// `lambda |Phi3><Phi3| + (1 - lambda) |S><S|` on two qutrits, with
    /// `|Phi3> = (|00>+|11>+|22>)/sqrt3` and `|S> = (|01>+|12>+|20>)/sqrt3`.
    /// Entangled for every `lambda`.
    QutritShiftMix {
        lambda: f64,
    },
    /// `p |psi-><psi-| + (1 - p) I/4`.
    Werner {
        p: f64,
    },
    Ghz {
        parties: usize,
        dim: usize,
    },
    RandomSeparable {
        seed: u64,
        dims: Vec<usize>,
        terms: usize,
    },
    RandomDensity {
        seed: u64,
        dims: Vec<usize>,
        rank: usize,
    },
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn two_qubits() -> PartyStructure {
    PartyStructure::new(vec![2, 2]).expect("static dims")
}

fn pure(structure: PartyStructure, amp: Vec<Complex64>) -> StateVector {
    StateVector::normalized(structure, ComplexVector::from_vec(amp)).expect("static state")
}

pub fn phi_plus() -> StateVector {
    pure(
        two_qubits(),
        vec![c(1., 0.), c(0., 0.), c(0., 0.), c(1., 0.)],
    )
}

pub fn phi_minus() -> StateVector {
    pure(
        two_qubits(),
        vec![c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)],
    )
}

pub fn psi_plus() -> StateVector {
    pure(
        two_qubits(),
        vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)],
    )
}

pub fn psi_minus() -> StateVector {
    pure(
        two_qubits(),
        vec![c(0., 0.), c(1., 0.), c(-1., 0.), c(0., 0.)],
    )
}

/// The two orthogonal pure terms of [`StateSpec::ComplexRank2Separable`],
/// weighted 1/4 and 3/4 respectively.
pub fn complex_rank2_terms() -> [StateVector; 2] {
    // (|phi+> - i|psi+>)/sqrt2 = (|00> - i|01> - i|10> + |11>)/2
    let first = pure(
        two_qubits(),
        vec![c(0.5, 0.), c(0., -0.5), c(0., -0.5), c(0.5, 0.)],
    );
    let n = 1.0 / (2.0 * 3f64.sqrt());
    let second = pure(
        two_qubits(),
        vec![c(0., -3. * n), c(n, 0.), c(n, 0.), c(0., n)],
    );
    [first, second]
}

/// The two maximally entangled terms of [`StateSpec::QutritShiftMix`].
pub fn qutrit_shift_terms() -> [StateVector; 2] {
    let s = PartyStructure::new(vec![3, 3]).expect("static dims");
    let mut diag = vec![c(0., 0.); 9];
    let mut shift = vec![c(0., 0.); 9];
    for i in 0..3 {
        diag[s.index(&[i, i])] = c(1., 0.);
        shift[s.index(&[i, (i + 1) % 3])] = c(1., 0.);
    }
    [pure(s.clone(), diag), pure(s, shift)]
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::InvalidParameter(format!(
            "{name} = {v} outside [0, 1]"
        )));
    }
    Ok(())
}

fn mixture(structure: PartyStructure, terms: &[(f64, &StateVector)]) -> Result<DensityMatrix> {
    let n = structure.total_dim();
    let mut m = ComplexMatrix::zeros(n, n);
    for (w, psi) in terms {
        m += psi.projector() * c(*w, 0.);
    }
    validate_density(m, structure, &Tolerances::default())
}

fn gaussian_vector(rng: &mut ChaCha20Rng, len: usize) -> ComplexVector {
    ComplexVector::from_fn(len, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c(re, im)
    })
}

fn random_product_from(rng: &mut ChaCha20Rng, structure: &PartyStructure) -> Result<StateVector> {
    let factors: Vec<ComplexVector> = structure
        .dims()
        .iter()
        .map(|&d| gaussian_vector(rng, d).normalize())
        .collect();
    StateVector::product(&factors)
}

/// Tensor product of independent normalized complex Gaussian local states.
pub fn random_product_state(seed: u64, dims: &[usize]) -> Result<StateVector> {
    let structure = PartyStructure::new(dims.to_vec())?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    random_product_from(&mut rng, &structure)
}

/// Builds the requested state.
pub fn generate(spec: &StateSpec) -> Result<DensityMatrix> {
    match spec {
        StateSpec::BellPhiPlus => DensityMatrix::from_pure(&phi_plus()),
        StateSpec::BellPhiMinus => DensityMatrix::from_pure(&phi_minus()),
        StateSpec::BellPsiPlus => DensityMatrix::from_pure(&psi_plus()),
        StateSpec::BellPsiMinus => DensityMatrix::from_pure(&psi_minus()),
        StateSpec::PhiPlusMinusMix { lambda } => {
            check_unit("lambda", *lambda)?;
            mixture(
                two_qubits(),
                &[(*lambda, &phi_plus()), (1.0 - lambda, &phi_minus())],
            )
        }
        StateSpec::ComplexRank2Separable => {
            let [a, b] = complex_rank2_terms();
            mixture(two_qubits(), &[(0.25, &a), (0.75, &b)])
        }
        StateSpec::QutritShiftMix { lambda } => {
            check_unit("lambda", *lambda)?;
            let [a, b] = qutrit_shift_terms();
            mixture(a.structure().clone(), &[(*lambda, &a), (1.0 - lambda, &b)])
        }
        StateSpec::Werner { p } => {
            check_unit("p", *p)?;
            let m = psi_minus().projector() * c(*p, 0.)
                + ComplexMatrix::identity(4, 4) * c((1.0 - p) / 4.0, 0.);
            validate_density(m, two_qubits(), &Tolerances::default())
        }
        StateSpec::Ghz { parties, dim } => {
            if *parties < 2 || *dim < 2 {
                return Err(Error::InvalidParameter(format!(
                    "GHZ needs at least 2 parties of dimension >= 2, got {parties} x {dim}"
                )));
            }
            let structure = PartyStructure::new(vec![*dim; *parties])?;
            let mut amp = vec![c(0., 0.); structure.total_dim()];
            for i in 0..*dim {
                amp[structure.index(&vec![i; *parties])] = c(1., 0.);
            }
            DensityMatrix::from_pure(&StateVector::normalized(
                structure,
                ComplexVector::from_vec(amp),
            )?)
        }
        StateSpec::RandomSeparable { seed, dims, terms } => {
            if *terms == 0 {
                return Err(Error::InvalidParameter("terms must be at least 1".into()));
            }
            let structure = PartyStructure::new(dims.clone())?;
            let mut rng = ChaCha20Rng::seed_from_u64(*seed);
            let mut weights = Vec::with_capacity(*terms);
            let mut states = Vec::with_capacity(*terms);
            for _ in 0..*terms {
                weights.push(rng.random_range(0.1..1.0));
                states.push(random_product_from(&mut rng, &structure)?);
            }
            let total: f64 = weights.iter().sum();
            let terms: Vec<(f64, &StateVector)> = weights
                .iter()
                .map(|w| w / total)
                .zip(states.iter())
                .collect();
            mixture(structure, &terms)
        }
        StateSpec::RandomDensity { seed, dims, rank } => {
            let structure = PartyStructure::new(dims.clone())?;
            let n = structure.total_dim();
            if *rank == 0 || *rank > n {
                return Err(Error::InvalidParameter(format!(
                    "rank {rank} outside 1..={n}"
                )));
            }
            let mut rng = ChaCha20Rng::seed_from_u64(*seed);
            let g = DMatrix::from_columns(
                &(0..*rank)
                    .map(|_| gaussian_vector(&mut rng, n))
                    .collect::<Vec<_>>(),
            );
            let m = &g * g.adjoint();
            let trace = m.trace();
            validate_density(m / trace, structure, &Tolerances::default())
        }
    }
}
