//! Necessary conditions for separability: positive partial transpose,
//! the rank criterion and the reduction criterion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{
    hermitian_eigensystem, ComplexMatrix, DensityMatrix, PartyStructure, Tolerances,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CriterionName {
    #[serde(rename = "PPT")]
    Ppt,
    Rank,
    Reduction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionOutcome {
    PassedNecessary,
    ViolatedEntangled,
    /// Only produced by PPT on 2x2 and 2x3 cuts.
    SufficientSeparable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionVerdict {
    pub name: CriterionName,
    /// The cut (`"1|2,3"`, 1-based) or party (`"2"`) that was tested.
    pub cut: String,
    pub outcome: CriterionOutcome,
    /// Minimum eigenvalue for PPT and reduction, rank gap for the rank test.
    pub witness: f64,
}

impl CriterionVerdict {
    pub fn is_violation(&self) -> bool {
        self.outcome == CriterionOutcome::ViolatedEntangled
    }
}

/// Split of the parties into a side `A` and its complement `B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bipartition {
    side: Vec<usize>,
    complement: Vec<usize>,
}

impl Bipartition {
    pub fn new(structure: &PartyStructure, side: &[usize]) -> Result<Self> {
        let side = structure
            .proper_subset(side)
            .map_err(|e| Error::InvalidCut(e.to_string()))?;
        let complement = (0..structure.parties())
            .filter(|a| side.binary_search(a).is_err())
            .collect();
        Ok(Self { side, complement })
    }

    pub fn side(&self) -> &[usize] {
        &self.side
    }

    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    fn parties(&self) -> usize {
        self.side.len() + self.complement.len()
    }

    pub fn describe(&self) -> String {
        let list = |v: &[usize]| {
            v.iter()
                .map(|a| (a + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        format!("{}|{}", list(&self.side), list(&self.complement))
    }
}

/// Which bipartitions the pipeline tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutMode {
    /// Each single party against the rest.
    #[default]
    Single,
    /// Every bipartition.
    All,
}

/// Distinct bipartitions selected by `mode`, each listed once.
pub fn cuts(structure: &PartyStructure, mode: CutMode) -> Vec<Bipartition> {
    let m = structure.parties();
    match mode {
        CutMode::Single if m == 2 => vec![Bipartition::new(structure, &[0]).expect("valid cut")],
        CutMode::Single => (0..m)
            .map(|a| Bipartition::new(structure, &[a]).expect("valid cut"))
            .collect(),
        CutMode::All => (0..(1usize << (m - 1)) - 1)
            .map(|mask| {
                // Party 1 is always on side A; the other parties follow the mask bits.
                let side: Vec<usize> = std::iter::once(0)
                    .chain((1..m).filter(|a| mask & (1 << (a - 1)) != 0))
                    .collect();
                Bipartition::new(structure, &side).expect("valid cut")
            })
            .collect(),
    }
}

fn check_cut(rho: &DensityMatrix, cut: &Bipartition) -> Result<()> {
    if cut.parties() != rho.structure().parties() {
        return Err(Error::InvalidCut(format!(
            "cut covers {} parties, state has {}",
            cut.parties(),
            rho.structure().parties()
        )));
    }
    Ok(())
}

fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigensystem(m)?
        .values
        .last()
        .copied()
        .unwrap_or(0.0))
}

/// Rank as the number of eigenvalues above `rank_tol`.
pub fn numerical_rank(m: &ComplexMatrix, rank_tol: f64) -> Result<usize> {
    Ok(hermitian_eigensystem(m)?
        .values
        .iter()
        .filter(|&&l| l > rank_tol)
        .count())
}

/// Positive-partial-transpose test across `cut`.
pub fn ppt_check(
    rho: &DensityMatrix,
    cut: &Bipartition,
    tol: &Tolerances,
) -> Result<CriterionVerdict> {
    check_cut(rho, cut)?;
    let witness = min_eigenvalue(&rho.partial_transpose(cut.side())?)?;
    let mut dims = [
        rho.structure().subsystem_dim(cut.side()),
        rho.structure().subsystem_dim(cut.complement()),
    ];
    dims.sort_unstable();
    let outcome = if witness < -tol.psd {
        CriterionOutcome::ViolatedEntangled
    } else if dims == [2, 2] || dims == [2, 3] {
        CriterionOutcome::SufficientSeparable
    } else {
        CriterionOutcome::PassedNecessary
    };
    Ok(CriterionVerdict {
        name: CriterionName::Ppt,
        cut: cut.describe(),
        outcome,
        witness,
    })
}

/// Compares the total rank with each single-party reduced rank.
pub fn rank_check(rho: &DensityMatrix, tol: &Tolerances) -> Result<Vec<CriterionVerdict>> {
    let total = numerical_rank(rho.matrix(), tol.rank)? as f64;
    (0..rho.structure().parties())
        .map(|a| {
            let reduced = numerical_rank(&rho.partial_trace(&[a])?, tol.rank)? as f64;
            let witness = total - reduced;
            Ok(CriterionVerdict {
                name: CriterionName::Rank,
                cut: (a + 1).to_string(),
                outcome: if witness < 0.0 {
                    CriterionOutcome::ViolatedEntangled
                } else {
                    CriterionOutcome::PassedNecessary
                },
                witness,
            })
        })
        .collect()
}

/// `op (x) I` on the joint space, where `op` acts on the parties in `side`
/// in their declared order.
fn embed_local(structure: &PartyStructure, side: &[usize], op: &ComplexMatrix) -> ComplexMatrix {
    let n = structure.total_dim();
    let split = |idx: usize| {
        let (mut s, mut rest) = (0, 0);
        for a in 0..structure.parties() {
            let d = structure.digit(idx, a);
            if side.contains(&a) {
                s = s * structure.dim(a) + d;
            } else {
                rest = rest * structure.dim(a) + d;
            }
        }
        (s, rest)
    };
    let parts: Vec<(usize, usize)> = (0..n).map(split).collect();
    ComplexMatrix::from_fn(n, n, |r, c| {
        if parts[r].1 == parts[c].1 {
            op[(parts[r].0, parts[c].0)]
        } else {
            Default::default()
        }
    })
}

/// Reduction test: `sigma_A (x) I - rho >= 0` and `I (x) sigma_B - rho >= 0`.
pub fn reduction_check(
    rho: &DensityMatrix,
    cut: &Bipartition,
    tol: &Tolerances,
) -> Result<CriterionVerdict> {
    check_cut(rho, cut)?;
    let s = rho.structure();
    let mut witness = f64::INFINITY;
    for side in [cut.side(), cut.complement()] {
        let reduced = rho.partial_trace(side)?;
        let test = embed_local(s, side, &reduced) - rho.matrix();
        witness = witness.min(min_eigenvalue(&test)?);
    }
    Ok(CriterionVerdict {
        name: CriterionName::Reduction,
        cut: cut.describe(),
        outcome: if witness < -tol.psd {
            CriterionOutcome::ViolatedEntangled
        } else {
            CriterionOutcome::PassedNecessary
        },
        witness,
    })
}

/// PPT and reduction on every cut selected by `mode`, then the rank test.
pub fn run_criteria(
    rho: &DensityMatrix,
    mode: CutMode,
    tol: &Tolerances,
) -> Result<Vec<CriterionVerdict>> {
    let mut out = Vec::new();
    for cut in cuts(rho.structure(), mode) {
        out.push(ppt_check(rho, &cut, tol)?);
    }
    out.extend(rank_check(rho, tol)?);
    for cut in cuts(rho.structure(), mode) {
        out.push(reduction_check(rho, &cut, tol)?);
    }
    Ok(out)
}
