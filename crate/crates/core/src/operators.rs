//! The closure operators on sets of desirable gamble sets, as certificate
//! builders and checkers.
//!
//! `Posi` has an uncountable image, so it is never materialised. A
//! [`PosiCertificate`] names one element of `Posi(L>0^s ∪ A)`: a list of
//! bases, each either a member of the assessment or a singleton `{e}` with
//! `e` strictly positive, and one coefficient vector per tuple in the
//! product of the bases. The checkers below apply the operator definitions
//! literally and report a [`CertificateDefect`] when something does not hold.
//!
//! The set-level operators act on a finite list of base sets `K`:
//!
//! * `Su(K)`: every superset of a member of `K`;
//! * `Rn(K)`: every `A` with `B' \ L<=0 ⊆ A ⊆ B'` for some `B'` in `K`;
//! * `Rs(K)`: every `A` with `B' \ L<=0 ⊆ A` for some `B'` in `K`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::desirability::combination;
use crate::gambles::{rational_strings, Assessment, Gamble, GambleSet, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseTag {
    Assessment,
    PositiveSingleton,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Base {
    pub tag: BaseTag,
    pub set: GambleSet,
}

/// Coefficients for one tuple; `tuple[k]` indexes base `k` in canonical
/// member order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffEntry {
    pub tuple: Vec<usize>,
    #[serde(with = "rational_strings")]
    pub lambda: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosiCertificate {
    pub bases: Vec<Base>,
    pub coeffs: Vec<CoeffEntry>,
}

/// Why a certificate was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateDefect {
    #[error("base {0} is not a member of the assessment")]
    BaseNotInAssessment(usize),
    #[error("base {0} is not a strictly positive singleton")]
    BadPositiveSingleton(usize),
    #[error("base {0} has gambles of the wrong dimension")]
    DimensionMismatch(usize),
    #[error("tuple table does not cover the product of the bases exactly")]
    TupleCoverage,
    #[error("coefficient vector has the wrong length")]
    CoefficientArity,
    #[error("negative coefficient")]
    NegativeCoefficient,
    #[error("coefficient sum not positive")]
    CoefficientSumNotPositive,
    #[error("rs_step failed")]
    RsStepFailed,
    #[error("produced set is not exactly {{0}}")]
    NotZeroSet,
    #[error("the assessment contains the empty set")]
    EmptySetInAssessment,
    #[error("selection evidence is defective: {0}")]
    BadEvidence(&'static str),
}

impl CertificateDefect {
    /// Stable machine-readable reason code.
    pub fn code(&self) -> &'static str {
        match self {
            CertificateDefect::BaseNotInAssessment(_) => "base not in assessment",
            CertificateDefect::BadPositiveSingleton(_) => "bad positive singleton",
            CertificateDefect::DimensionMismatch(_) => "dimension mismatch",
            CertificateDefect::TupleCoverage => "tuple coverage",
            CertificateDefect::CoefficientArity => "coefficient arity",
            CertificateDefect::NegativeCoefficient => "negative coefficient",
            CertificateDefect::CoefficientSumNotPositive => "coefficient sum not positive",
            CertificateDefect::RsStepFailed => "rs_step failed",
            CertificateDefect::NotZeroSet => "produced set not {0}",
            CertificateDefect::EmptySetInAssessment => "empty set in assessment",
            CertificateDefect::BadEvidence(_) => "bad evidence",
        }
    }
}

impl PosiCertificate {
    fn check_tuples(&self) -> Result<(), CertificateDefect> {
        let n = self.bases.len();
        let sizes: Vec<usize> = self.bases.iter().map(|b| b.set.len()).collect();
        let expected = sizes
            .iter()
            .try_fold(1usize, |acc, &s| acc.checked_mul(s))
            .ok_or(CertificateDefect::TupleCoverage)?;
        if self.coeffs.len() != expected {
            return Err(CertificateDefect::TupleCoverage);
        }
        let mut seen = std::collections::BTreeSet::new();
        for entry in &self.coeffs {
            if entry.tuple.len() != n
                || entry.tuple.iter().zip(&sizes).any(|(&i, &s)| i >= s)
                || !seen.insert(entry.tuple.as_slice())
            {
                return Err(CertificateDefect::TupleCoverage);
            }
            if entry.lambda.len() != n {
                return Err(CertificateDefect::CoefficientArity);
            }
            if entry.lambda.iter().any(Signed::is_negative) {
                return Err(CertificateDefect::NegativeCoefficient);
            }
            if !entry.lambda.iter().sum::<Rational>().is_positive() {
                return Err(CertificateDefect::CoefficientSumNotPositive);
            }
        }
        Ok(())
    }

    fn check_dims(&self, dim: usize) -> Result<(), CertificateDefect> {
        for (k, base) in self.bases.iter().enumerate() {
            if base.set.iter().any(|g| g.dim() != dim) {
                return Err(CertificateDefect::DimensionMismatch(k));
            }
        }
        Ok(())
    }

    /// `{Σ_k λ_k^{u_{1:n}} u_k : u_{1:n} in ×Q_k}`, deduplicated.
    pub fn produced_set(&self) -> Result<GambleSet, CertificateDefect> {
        self.check_tuples()?;
        let dim = self
            .bases
            .iter()
            .find_map(|b| b.set.dim())
            .unwrap_or_default();
        self.check_dims(dim)?;
        let produced = self.coeffs.iter().map(|entry| {
            let picked: Vec<Gamble> = entry
                .tuple
                .iter()
                .zip(&self.bases)
                .map(|(&i, base)| base.set.members()[i].clone())
                .collect();
            combination(dim, &picked, &entry.lambda)
        });
        GambleSet::new(produced).map_err(|_| CertificateDefect::DimensionMismatch(0))
    }

    /// Bases are drawn from `L>0^s ∪ A`.
    fn check_bases(&self, assessment: &Assessment) -> Result<(), CertificateDefect> {
        self.check_dims(assessment.dim())?;
        for (k, base) in self.bases.iter().enumerate() {
            match base.tag {
                BaseTag::Assessment if !assessment.contains(&base.set) => {
                    return Err(CertificateDefect::BaseNotInAssessment(k));
                }
                BaseTag::PositiveSingleton
                    if base.set.len() != 1 || !base.set.members()[0].is_strictly_positive() =>
                {
                    return Err(CertificateDefect::BadPositiveSingleton(k));
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("certificate serializes")
    }
}

/// `B ∈ Rs({produced})`: the positive part of `produced` lies inside `B`.
pub fn rs_step(produced: &GambleSet, set: &GambleSet) -> bool {
    produced.strip_nonpositive().is_subset(set)
}

/// Checks that `cert` literally witnesses `B ∈ Rs(Posi(L>0^s ∪ A))`.
pub fn verify_membership_certificate(
    assessment: &Assessment,
    set: &GambleSet,
    cert: &PosiCertificate,
) -> Result<(), CertificateDefect> {
    cert.check_bases(assessment)?;
    let produced = cert.produced_set()?;
    if !rs_step(&produced, set) {
        return Err(CertificateDefect::RsStepFailed);
    }
    Ok(())
}

/// A certificate that `{0} ∈ Posi(L>0^s ∪ A)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InconsistencyCertificate(pub PosiCertificate);

pub fn verify_inconsistency_certificate(
    assessment: &Assessment,
    cert: &InconsistencyCertificate,
) -> Result<(), CertificateDefect> {
    cert.0.check_bases(assessment)?;
    let produced = cert.0.produced_set()?;
    if produced != GambleSet::singleton(Gamble::zero(assessment.dim())) {
        return Err(CertificateDefect::NotZeroSet);
    }
    Ok(())
}

/// What the engine learned about one selection, in the terms the
/// certificate builders need. `picks[k]` indexes assessment set `k`;
/// `weights[k]` multiplies the picked gamble of set `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SelectionEvidence {
    /// `member` indexes `B`, and `B[member] - Σ_k weights_k σ_k >= 0`.
    Member {
        picks: Vec<usize>,
        member: usize,
        weights: Vec<Rational>,
    },
    /// `weights >= 0`, not all zero, and `Σ_k weights_k σ_k <= 0`.
    Incoherent {
        picks: Vec<usize>,
        weights: Vec<Rational>,
    },
}

/// Assembles coefficient rows over the assessment bases followed by the
/// indicator singletons, then drops indicator bases that are never used.
fn assemble(
    assessment: &Assessment,
    rows: Vec<(Vec<usize>, Vec<Rational>, Vec<Rational>)>,
) -> PosiCertificate {
    let dim = assessment.dim();
    let used: Vec<usize> = (0..dim)
        .filter(|&x| rows.iter().any(|(_, _, extra)| !extra[x].is_zero()))
        .collect();
    let mut bases: Vec<Base> = assessment
        .sets()
        .iter()
        .map(|set| Base {
            tag: BaseTag::Assessment,
            set: set.clone(),
        })
        .collect();
    bases.extend(used.iter().map(|&x| Base {
        tag: BaseTag::PositiveSingleton,
        set: GambleSet::singleton(Gamble::indicator(dim, x)),
    }));
    let mut coeffs: Vec<CoeffEntry> = rows
        .into_iter()
        .map(|(picks, weights, extra)| {
            let mut tuple = picks;
            tuple.extend(std::iter::repeat_n(0, used.len()));
            let mut lambda = weights;
            lambda.extend(used.iter().map(|&x| extra[x].clone()));
            CoeffEntry { tuple, lambda }
        })
        .collect();
    coeffs.sort_by(|a, b| a.tuple.cmp(&b.tuple));
    PosiCertificate { bases, coeffs }
}

fn picked(assessment: &Assessment, picks: &[usize]) -> Result<Vec<Gamble>, CertificateDefect> {
    if picks.len() != assessment.len() {
        return Err(CertificateDefect::BadEvidence("selection arity"));
    }
    picks
        .iter()
        .zip(assessment.sets())
        .map(|(&i, set)| {
            set.members()
                .get(i)
                .cloned()
                .ok_or(CertificateDefect::BadEvidence("pick out of range"))
        })
        .collect()
}

fn check_weights(weights: &[Rational], arity: usize) -> Result<(), CertificateDefect> {
    if weights.len() != arity {
        return Err(CertificateDefect::BadEvidence("weight arity"));
    }
    if weights.iter().any(Signed::is_negative) {
        return Err(CertificateDefect::BadEvidence("negative weight"));
    }
    Ok(())
}

/// Lifts per-selection evidence to a certificate for `B ∈ E(A)`.
///
/// A member selection contributes `B[member]` exactly: its nonnegative
/// remainder is carried by indicator singletons. An incoherent selection
/// contributes a non-positive combination, which `Rs` removes.
pub fn build_membership_certificate(
    assessment: &Assessment,
    set: &GambleSet,
    evidence: &[SelectionEvidence],
) -> Result<PosiCertificate, CertificateDefect> {
    let dim = assessment.dim();
    let zero = Gamble::zero(dim);
    let mut rows = Vec::with_capacity(evidence.len());
    for item in evidence {
        match item {
            SelectionEvidence::Member {
                picks,
                member,
                weights,
            } => {
                let gambles = picked(assessment, picks)?;
                check_weights(weights, gambles.len())?;
                let target = set
                    .members()
                    .get(*member)
                    .ok_or(CertificateDefect::BadEvidence("member out of range"))?;
                let residual = target - &combination(dim, &gambles, weights);
                if !residual.dominates(&zero) {
                    return Err(CertificateDefect::BadEvidence("residual not nonnegative"));
                }
                rows.push((picks.clone(), weights.clone(), residual.values().to_vec()));
            }
            SelectionEvidence::Incoherent { picks, weights } => {
                let gambles = picked(assessment, picks)?;
                check_weights(weights, gambles.len())?;
                if !combination(dim, &gambles, weights).is_nonpositive() {
                    return Err(CertificateDefect::BadEvidence(
                        "combination not non-positive",
                    ));
                }
                rows.push((picks.clone(), weights.clone(), zero.values().to_vec()));
            }
        }
    }
    Ok(assemble(assessment, rows))
}

/// Builds `{0} ∈ Posi(L>0^s ∪ A)` from one non-positive combination per
/// selection, topping each up to exactly zero with indicator singletons.
pub fn build_inconsistency_certificate(
    assessment: &Assessment,
    evidence: &[(Vec<usize>, Vec<Rational>)],
) -> Result<InconsistencyCertificate, CertificateDefect> {
    if assessment.position_of_empty().is_some() {
        return Err(CertificateDefect::EmptySetInAssessment);
    }
    let dim = assessment.dim();
    let mut rows = Vec::with_capacity(evidence.len());
    for (picks, weights) in evidence {
        let gambles = picked(assessment, picks)?;
        check_weights(weights, gambles.len())?;
        let total = combination(dim, &gambles, weights);
        if !total.is_nonpositive() {
            return Err(CertificateDefect::BadEvidence(
                "combination not non-positive",
            ));
        }
        let topup: Vec<Rational> = total.values().iter().map(|v| -v).collect();
        rows.push((picks.clone(), weights.clone(), topup));
    }
    Ok(InconsistencyCertificate(assemble(assessment, rows)))
}

/// `B ∈ Su(K)`.
pub fn su_member(base: &[GambleSet], set: &GambleSet) -> bool {
    base.iter().any(|b| b.is_subset(set))
}

/// `B ∈ Rn(K)`.
pub fn rn_member(base: &[GambleSet], set: &GambleSet) -> bool {
    base.iter()
        .any(|b| b.strip_nonpositive().is_subset(set) && set.is_subset(b))
}

/// `B ∈ Rs(K)`.
pub fn rs_member(base: &[GambleSet], set: &GambleSet) -> bool {
    base.iter().any(|b| rs_step(b, set))
}

/// The members of `Su(K)` that can matter for `B ∈ Rn(Su(K))`: any
/// qualifying superset `C` of some `B'` can be replaced by `B' ∪ B`.
pub fn su_candidates(base: &[GambleSet], set: &GambleSet) -> Vec<GambleSet> {
    base.iter().filter_map(|b| b.union(set).ok()).collect()
}
