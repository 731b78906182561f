//! Dense complex linear algebra over multipartite Hilbert spaces.
//!
//! Joint basis indices follow a row-major convention over parties in their
//! declared order: party 1 is the slowest-varying digit. For dims
//! `[d1, d2, d3]` the joint index of `|i1 i2 i3>` is `(i1 * d2 + i2) * d3 + i3`.
//! Every operation in this crate, including the reshaping used by the
//! product-vector search and the JSON state format, uses this embedding.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Threshold below which a component is treated as zero when choosing
/// the phase reference of a vector.
pub const GAUGE_EPS: f64 = 1e-7;

/// Numerical tolerances shared by validation and spectral analysis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub herm: f64,
    pub psd: f64,
    pub trace: f64,
    pub rank: f64,
    pub ortho: f64,
    pub recon: f64,
    pub norm: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-10,
            psd: 1e-10,
            trace: 1e-10,
            rank: 1e-9,
            ortho: 1e-10,
            recon: 1e-9,
            norm: 1e-10,
        }
    }
}

/// Local dimensions `d_1..d_m` of an `m`-party tensor-product space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartyStructure {
    dims: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl PartyStructure {
    pub fn new(dims: impl Into<Vec<usize>>) -> Result<Self> {
        let dims = dims.into();
        if dims.len() < 2 {
            return Err(Error::InvalidStructure(format!(
                "need at least two parties, got {}",
                dims.len()
            )));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidStructure(format!(
                "local dimension {d} is below 2"
            )));
        }
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| Error::InvalidStructure("total dimension overflows".into()))?;
        let mut strides = vec![1; dims.len()];
        for a in (0..dims.len() - 1).rev() {
            strides[a] = strides[a + 1] * dims[a + 1];
        }
        Ok(Self {
            dims,
            strides,
            total,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn dim(&self, party: usize) -> usize {
        self.dims[party]
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    /// Joint-index step of one unit in `party`'s local index.
    pub fn stride(&self, party: usize) -> usize {
        self.strides[party]
    }

    /// Local index of `party` inside joint index `n`.
    #[inline]
    pub fn digit(&self, n: usize, party: usize) -> usize {
        (n / self.strides[party]) % self.dims[party]
    }

    pub fn digits(&self, n: usize) -> Vec<usize> {
        (0..self.parties()).map(|a| self.digit(n, a)).collect()
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.strides).map(|(d, s)| d * s).sum()
    }

    /// Sorts and deduplicates a party set, rejecting out-of-range,
    /// empty, and full sets.
    pub fn proper_subset(&self, parties: &[usize]) -> Result<Vec<usize>> {
        let m = self.parties();
        if let Some(&bad) = parties.iter().find(|&&a| a >= m) {
            return Err(Error::PartyOutOfRange {
                index: bad,
                parties: m,
            });
        }
        let mut set = parties.to_vec();
        set.sort_unstable();
        set.dedup();
        if set.is_empty() || set.len() == m {
            return Err(Error::EmptyOrFullPartySet);
        }
        Ok(set)
    }

    /// Product of the local dimensions of `parties`.
    pub fn subsystem_dim(&self, parties: &[usize]) -> usize {
        parties.iter().map(|&a| self.dims[a]).product()
    }
}

/// A normalized pure state on a [`PartyStructure`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    structure: PartyStructure,
    amp: ComplexVector,
}

impl StateVector {
    pub fn new(structure: PartyStructure, amp: ComplexVector) -> Result<Self> {
        Self::with_tolerance(structure, amp, Tolerances::default().norm)
    }

    pub fn with_tolerance(
        structure: PartyStructure,
        amp: ComplexVector,
        norm_tol: f64,
    ) -> Result<Self> {
        if amp.len() != structure.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: structure.total_dim(),
                actual: amp.len(),
            });
        }
        if amp.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = amp.norm();
        if (norm - 1.0).abs() > norm_tol {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { structure, amp })
    }

    /// Normalizes `amp` and wraps it.
    pub fn normalized(structure: PartyStructure, amp: ComplexVector) -> Result<Self> {
        let norm = amp.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Self::new(structure, amp / Complex64::new(norm, 0.0))
    }

    /// Tensor product of local vectors, party 1 first.
    pub fn product(factors: &[ComplexVector]) -> Result<Self> {
        let structure = PartyStructure::new(factors.iter().map(|f| f.len()).collect::<Vec<_>>())?;
        let amp = kron_vectors(factors);
        Self::normalized(structure, amp)
    }

    pub fn structure(&self) -> &PartyStructure {
        &self.structure
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amp
    }

    pub fn into_amplitudes(self) -> ComplexVector {
        self.amp
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amp.dotc(&other.amp)
    }

    pub fn projector(&self) -> ComplexMatrix {
        &self.amp * self.amp.adjoint()
    }

    /// Reduced state of a single party.
    pub fn reduced(&self, party: usize) -> ComplexMatrix {
        single_party_reduced(&self.structure, self.amp.as_slice(), party)
    }
}

/// Kronecker product of column vectors with the first factor slowest-varying.
pub fn kron_vectors(factors: &[ComplexVector]) -> ComplexVector {
    let mut out = ComplexVector::from_element(1, Complex64::new(1.0, 0.0));
    for f in factors {
        out = out.kronecker(f);
    }
    out
}

/// A validated density matrix: Hermitian, PSD and unit trace within the
/// tolerances it was validated against.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    structure: PartyStructure,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn structure(&self) -> &PartyStructure {
        &self.structure
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn from_pure(state: &StateVector) -> Result<Self> {
        validate_density(
            state.projector(),
            state.structure().clone(),
            &Tolerances::default(),
        )
    }

    /// Convex mixture `sum_i w_i |psi_i><psi_i|`. Weights are used as given.
    pub fn mixture(terms: &[(f64, StateVector)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let structure = first.1.structure().clone();
        let n = structure.total_dim();
        let mut mat = ComplexMatrix::zeros(n, n);
        for (w, psi) in terms {
            if psi.structure() != &structure {
                return Err(Error::InvalidParameter(
                    "mixture terms on different structures".into(),
                ));
            }
            mat += psi.projector() * Complex64::new(*w, 0.0);
        }
        validate_density(mat, structure, &Tolerances::default())
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<ComplexMatrix> {
        partial_trace(&self.mat, &self.structure, keep)
    }

    pub fn partial_transpose(&self, parties: &[usize]) -> Result<ComplexMatrix> {
        partial_transpose(&self.mat, &self.structure, parties)
    }
}

/// Largest entry modulus of a matrix.
pub fn max_abs_entry(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn hermiticity_defect(m: &ComplexMatrix) -> f64 {
    max_abs_entry(&(m - m.adjoint()))
}

fn symmetrize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

fn check_square(m: &ComplexMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

fn check_joint_square(m: &ComplexMatrix, structure: &PartyStructure) -> Result<()> {
    check_square(m)?;
    if m.nrows() != structure.total_dim() {
        return Err(Error::DimensionMismatch {
            expected: structure.total_dim(),
            actual: m.nrows(),
        });
    }
    Ok(())
}

/// Validates a candidate density matrix. Inputs within the Hermiticity
/// tolerance are symmetrized before the spectral checks.
pub fn validate_density(
    mat: ComplexMatrix,
    structure: PartyStructure,
    tol: &Tolerances,
) -> Result<DensityMatrix> {
    check_joint_square(&mat, &structure)?;
    if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let defect = hermiticity_defect(&mat);
    if defect > tol.herm {
        return Err(Error::NotHermitian(defect));
    }
    let mat = symmetrize(&mat);
    let trace = mat.trace().re;
    if (trace - 1.0).abs() > tol.trace {
        return Err(Error::TraceNotOne(trace));
    }
    let eig = hermitian_eigensystem(&mat)?;
    let min_eig = eig.values.last().copied().unwrap_or(0.0);
    if min_eig < -tol.psd {
        return Err(Error::NotPsd(min_eig));
    }
    Ok(DensityMatrix { structure, mat })
}

/// Traces out every party not in `keep`. The kept parties retain their
/// declared order in the output basis.
pub fn partial_trace(
    mat: &ComplexMatrix,
    structure: &PartyStructure,
    keep: &[usize],
) -> Result<ComplexMatrix> {
    check_joint_square(mat, structure)?;
    let keep = structure.proper_subset(keep)?;
    let n = structure.total_dim();
    let m = structure.parties();
    let mut kept = vec![0usize; n];
    let mut traced = vec![0usize; n];
    for idx in 0..n {
        let (mut k, mut t) = (0, 0);
        for a in 0..m {
            let d = structure.digit(idx, a);
            if keep.binary_search(&a).is_ok() {
                k = k * structure.dim(a) + d;
            } else {
                t = t * structure.dim(a) + d;
            }
        }
        kept[idx] = k;
        traced[idx] = t;
    }
    let out_dim = structure.subsystem_dim(&keep);
    let mut groups = vec![Vec::new(); n / out_dim];
    for idx in 0..n {
        groups[traced[idx]].push(idx);
    }
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for g in &groups {
        for &r in g {
            for &c in g {
                out[(kept[r], kept[c])] += mat[(r, c)];
            }
        }
    }
    Ok(out)
}

/// Single-party reduced matrix of a (not necessarily normalized) vector.
pub(crate) fn single_party_reduced(
    structure: &PartyStructure,
    amp: &[Complex64],
    party: usize,
) -> ComplexMatrix {
    let d = structure.dim(party);
    let stride = structure.stride(party);
    let mut out = ComplexMatrix::zeros(d, d);
    for (n, z) in amp.iter().enumerate() {
        let a = structure.digit(n, party);
        let base = n - a * stride;
        for b in 0..d {
            out[(a, b)] += z * amp[base + b * stride].conj();
        }
    }
    out
}

/// Transposes the local indices of `parties`.
pub fn partial_transpose(
    mat: &ComplexMatrix,
    structure: &PartyStructure,
    parties: &[usize],
) -> Result<ComplexMatrix> {
    check_joint_square(mat, structure)?;
    let parties = structure.proper_subset(parties)?;
    let n = structure.total_dim();
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        let (mut sr, mut sc) = (r, c);
        for &a in &parties {
            let (dr, dc) = (structure.digit(r, a), structure.digit(c, a));
            let s = structure.stride(a);
            sr = sr - dr * s + dc * s;
            sc = sc - dc * s + dr * s;
        }
        mat[(sr, sc)]
    }))
}

/// Eigenvalues in descending order with matching orthonormal eigenvector
/// columns. Each column is phase-fixed so its first component of modulus
/// above [`GAUGE_EPS`] is real and positive.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

pub fn hermitian_eigensystem(h: &ComplexMatrix) -> Result<HermitianEigen> {
    check_square(h)?;
    if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let eig = SymmetricEigen::new(symmetrize(h));
    let mut order: Vec<usize> = (0..h.nrows()).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = ComplexMatrix::zeros(h.nrows(), h.ncols());
    for (dst, &src) in order.iter().enumerate() {
        let mut col: Vec<Complex64> = eig.eigenvectors.column(src).iter().copied().collect();
        gauge_fix_slice(&mut col);
        vectors.set_column(dst, &ComplexVector::from_vec(col));
    }
    Ok(HermitianEigen { values, vectors })
}

/// Rotates `v` by a unit phase so its first component with modulus above
/// [`GAUGE_EPS`] becomes real and nonnegative. Returns `false` when no
/// component qualifies.
pub(crate) fn gauge_fix_slice(v: &mut [Complex64]) -> bool {
    let Some(at) = v.iter().position(|z| z.norm() > GAUGE_EPS) else {
        return false;
    };
    let pivot = v[at];
    let phase = pivot.conj() / pivot.norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
    v[at] = Complex64::new(pivot.norm(), 0.0);
    true
}

/// Nonzero part of the spectrum of a density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralBasis {
    structure: PartyStructure,
    eigenvalues: Vec<f64>,
    vectors: ComplexMatrix,
    unstable_cut: Option<f64>,
}

impl SpectralBasis {
    /// Builds a basis from explicit eigenpairs; `vectors` holds one
    /// eigenvector per column. Used to inject rotated degenerate blocks.
    pub fn new(
        structure: PartyStructure,
        eigenvalues: Vec<f64>,
        vectors: ComplexMatrix,
        ortho_tol: f64,
    ) -> Result<Self> {
        if vectors.nrows() != structure.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: structure.total_dim(),
                actual: vectors.nrows(),
            });
        }
        if vectors.ncols() != eigenvalues.len() || eigenvalues.is_empty() {
            return Err(Error::LengthMismatch {
                expected: vectors.ncols(),
                actual: eigenvalues.len(),
            });
        }
        let k = eigenvalues.len();
        let gram = vectors.adjoint() * &vectors;
        let defect = max_abs_entry(&(gram - ComplexMatrix::identity(k, k)));
        if defect > ortho_tol {
            return Err(Error::NotOrthonormal(defect));
        }
        Ok(Self {
            structure,
            eigenvalues,
            vectors,
            unstable_cut: None,
        })
    }

    pub fn structure(&self) -> &PartyStructure {
        &self.structure
    }

    pub fn rank(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Eigenvectors as the columns of a `total_dim x k` matrix.
    pub fn vectors(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn eigenvector(&self, i: usize) -> StateVector {
        StateVector {
            structure: self.structure.clone(),
            amp: self.vectors.column(i).into_owned(),
        }
    }

    /// Smallest eigenvalue lying within a decade of the rank cutoff, if any.
    /// Such a value makes the rank decision sensitive to noise.
    pub fn unstable_cut(&self) -> Option<f64> {
        self.unstable_cut
    }

    /// `sum_i lambda_i |phi_i><phi_i|`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let lambda = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
            self.rank(),
            self.eigenvalues.iter().map(|&l| Complex64::new(l, 0.0)),
        ));
        &self.vectors * lambda * self.vectors.adjoint()
    }
}

/// Orthogonal representation of `rho` restricted to eigenvalues above `rank_tol`.
pub fn spectral_decompose(rho: &DensityMatrix, rank_tol: f64) -> Result<SpectralBasis> {
    let tol = Tolerances::default();
    let eig = hermitian_eigensystem(rho.matrix())?;
    let k = eig.values.iter().filter(|&&l| l > rank_tol).count();
    let unstable_cut = eig
        .values
        .iter()
        .copied()
        .filter(|&l| l >= rank_tol / 10.0 && l <= rank_tol * 10.0)
        .fold(None, |acc: Option<f64>, l| {
            Some(acc.map_or(l, |a| a.min(l)))
        });
    let vectors = eig.vectors.columns(0, k).into_owned();
    let mut basis = SpectralBasis::new(
        rho.structure().clone(),
        eig.values[..k].to_vec(),
        vectors,
        tol.ortho,
    )?;
    basis.unstable_cut = unstable_cut;
    let residual = max_abs_entry(&(rho.matrix() - basis.reconstruct()));
    if residual > tol.recon.max(rank_tol) {
        return Err(Error::Reconstruction(residual));
    }
    Ok(basis)
}
