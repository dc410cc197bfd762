//! Consistency, natural extension membership and the induced choice
//! function of a finite assessment.
//!
//! A selection picks one gamble from every assessment set and generates the
//! cone `D_σ = posi(L>0 ∪ σ(A))`. The engine decides:
//!
//! * `A` is consistent iff `∅ ∉ A` and some `D_σ` is coherent;
//! * `B ∈ E(A)` iff `B` meets every coherent `D_σ`.
//!
//! Every coherent set of desirable gamble sets is an intersection of the
//! binary models that dominate it, and any such model that includes `A`
//! contains some `D_σ`; a coherent `D_σ` that misses `B` is itself a
//! dominating binary model excluding `B`. Answers are not taken on trust:
//! a positive answer carries a [`PosiCertificate`] checked against the
//! operator definitions, a negative one a [`BinaryWitness`].
//!
//! Selections are enumerated in lexicographic order of their index tuples
//! (last set fastest). Witnesses are always the first qualifying selection
//! in that order, so sequential and parallel runs agree exactly.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::desirability::{Coherence, DesirError, DesirGenerators};
use crate::gambles::{Assessment, Gamble, GambleError, GambleSet, Rational};
use crate::operators::{
    build_inconsistency_certificate, build_membership_certificate,
    verify_inconsistency_certificate, verify_membership_certificate, CertificateDefect,
    InconsistencyCertificate, PosiCertificate, SelectionEvidence,
};

pub const DEFAULT_SELECTION_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum ExecMode {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    #[default]
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    pub cap: usize,
    pub mode: ExecMode,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            cap: DEFAULT_SELECTION_CAP,
            mode: ExecMode::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Gamble(#[from] GambleError),
    #[error("assessment needs {count} selections, above the cap of {cap}")]
    CapExceeded { count: String, cap: usize },
    #[error("the assessment is inconsistent")]
    Inconsistent,
    #[error("gamble {0} is not a member of the option set")]
    NotAnOption(Gamble),
    #[error("internal certificate construction failed: {0}")]
    Certificate(#[from] CertificateDefect),
}

impl From<DesirError> for EngineError {
    fn from(err: DesirError) -> Self {
        match err {
            DesirError::Gamble(e) => EngineError::Gamble(e),
            DesirError::Incoherent => EngineError::Inconsistent,
        }
    }
}

fn map_indexed<T, F>(mode: ExecMode, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == ExecMode::Parallel {
        use rayon::prelude::*;
        return (0..len).into_par_iter().map(f).collect();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = mode;
    (0..len).map(f).collect()
}

/// One pick per assessment set, given as indices in canonical member order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Selection {
    pub picks: Vec<usize>,
}

impl Selection {
    /// The `index`-th selection in lexicographic order.
    fn decode(assessment: &Assessment, mut index: usize) -> Self {
        let mut picks = vec![0; assessment.len()];
        for (k, set) in assessment.sets().iter().enumerate().rev() {
            picks[k] = index % set.len();
            index /= set.len();
        }
        Self { picks }
    }

    pub fn gambles(&self, assessment: &Assessment) -> Vec<Gamble> {
        self.picks
            .iter()
            .zip(assessment.sets())
            .map(|(&i, set)| set.members()[i].clone())
            .collect()
    }
}

/// A selection whose cone is coherent and, for negative membership
/// answers, disjoint from the queried set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinaryWitness {
    pub selection: Vec<Gamble>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessDefect {
    #[error("selection does not pick one member from each assessment set")]
    NotASelection,
    #[error("the selected cone is incoherent")]
    Incoherent,
    #[error("the selected cone contains {0}")]
    MeetsSet(Gamble),
    #[error(transparent)]
    Gamble(#[from] GambleError),
}

impl BinaryWitness {
    fn cone(&self, assessment: &Assessment) -> Result<DesirGenerators, WitnessDefect> {
        let picks_ok = self.selection.len() == assessment.len()
            && self
                .selection
                .iter()
                .zip(assessment.sets())
                .all(|(g, set)| set.contains(g));
        if !picks_ok {
            return Err(WitnessDefect::NotASelection);
        }
        DesirGenerators::new(assessment.dim(), self.selection.iter().cloned()).map_err(
            |e| match e {
                DesirError::Gamble(e) => WitnessDefect::Gamble(e),
                DesirError::Incoherent => WitnessDefect::Incoherent,
            },
        )
    }

    /// The selection is valid and its cone is coherent.
    pub fn check_coherent(&self, assessment: &Assessment) -> Result<(), WitnessDefect> {
        if !self.cone(assessment)?.is_coherent() {
            return Err(WitnessDefect::Incoherent);
        }
        Ok(())
    }

    /// The selection's cone is coherent and misses every member of `set`.
    pub fn check_excludes(
        &self,
        assessment: &Assessment,
        set: &GambleSet,
    ) -> Result<(), WitnessDefect> {
        let cone = self.cone(assessment)?;
        if !cone.is_coherent() {
            return Err(WitnessDefect::Incoherent);
        }
        for b in set {
            let inside = cone.cone_contains(b).map_err(|e| match e {
                DesirError::Gamble(e) => WitnessDefect::Gamble(e),
                DesirError::Incoherent => WitnessDefect::Incoherent,
            })?;
            if inside {
                return Err(WitnessDefect::MeetsSet(b.clone()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    /// `B ∈ Rs(Posi(L>0^s ∪ A))`.
    PosiCertificate(PosiCertificate),
    /// A coherent selection whose cone misses `B`.
    BinaryWitness(BinaryWitness),
    /// A coherent selection, proving consistency.
    CoherentSelection(BinaryWitness),
    /// `∅ ∈ A`.
    EmptySet { index: usize },
    /// `{0} ∈ Posi(L>0^s ∪ A)`.
    InconsistencyCertificate(InconsistencyCertificate),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub answer: bool,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvidenceDefect {
    #[error("evidence kind does not fit the answer")]
    WrongKind,
    #[error(transparent)]
    Certificate(#[from] CertificateDefect),
    #[error(transparent)]
    Witness(#[from] WitnessDefect),
    #[error("claimed empty set is not in the assessment")]
    NoEmptySet,
}

impl Verdict {
    /// Re-checks a membership verdict for `B ∈ E(A)`.
    pub fn verify_membership(
        &self,
        assessment: &Assessment,
        set: &GambleSet,
    ) -> Result<(), EvidenceDefect> {
        match (self.answer, &self.evidence) {
            (true, Evidence::PosiCertificate(cert)) => {
                verify_membership_certificate(assessment, set, cert)?
            }
            (false, Evidence::BinaryWitness(w)) => w.check_excludes(assessment, set)?,
            _ => return Err(EvidenceDefect::WrongKind),
        }
        Ok(())
    }

    /// Re-checks a consistency verdict.
    pub fn verify_consistency(&self, assessment: &Assessment) -> Result<(), EvidenceDefect> {
        match (self.answer, &self.evidence) {
            (true, Evidence::CoherentSelection(w)) => {
                if assessment.position_of_empty().is_some() {
                    return Err(EvidenceDefect::WrongKind);
                }
                w.check_coherent(assessment)?
            }
            (false, Evidence::EmptySet { index }) => {
                if !assessment
                    .sets()
                    .get(*index)
                    .is_some_and(GambleSet::is_empty)
                {
                    return Err(EvidenceDefect::NoEmptySet);
                }
            }
            (false, Evidence::InconsistencyCertificate(cert)) => {
                verify_inconsistency_certificate(assessment, cert)?
            }
            _ => return Err(EvidenceDefect::WrongKind),
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("verdict serializes")
    }
}

/// A coherent selection with its cone. `slot[j]` is the first assessment
/// position whose pick is generator `j`.
#[derive(Debug, Clone)]
struct Branch {
    selection: Selection,
    cone: DesirGenerators,
    slot: Vec<usize>,
}

impl Branch {
    fn new(assessment: &Assessment, selection: Selection) -> Result<Self, EngineError> {
        let picked = selection.gambles(assessment);
        let cone = DesirGenerators::new(assessment.dim(), picked.iter().cloned())?;
        let slot = cone
            .gens()
            .iter()
            .map(|g| {
                picked
                    .iter()
                    .position(|p| p == g)
                    .expect("generator was picked")
            })
            .collect();
        Ok(Self {
            selection,
            cone,
            slot,
        })
    }

    /// Generator weights spread onto assessment positions.
    fn positional(&self, weights: &[Rational], arity: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); arity];
        for (w, &k) in weights.iter().zip(&self.slot) {
            out[k] = w.clone();
        }
        out
    }

    fn witness(&self, assessment: &Assessment) -> BinaryWitness {
        BinaryWitness {
            selection: self.selection.gambles(assessment),
        }
    }
}

enum Classified {
    Coherent(Branch),
    Incoherent(Vec<usize>, Vec<Rational>),
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Engine {
    config: EngineConfig,
}

impl Engine {
    pub fn new(config: EngineConfig) -> Self {
        Self { config }
    }

    pub fn with_mode(mode: ExecMode) -> Self {
        Self::new(EngineConfig {
            mode,
            ..EngineConfig::default()
        })
    }

    pub fn config(&self) -> EngineConfig {
        self.config
    }

    fn classify(&self, assessment: &Assessment) -> Result<Vec<Classified>, EngineError> {
        let count = assessment.selection_count();
        let count = match count {
            Some(c) if c <= self.config.cap => c,
            _ => {
                return Err(EngineError::CapExceeded {
                    count: count.map_or_else(|| "more than usize::MAX".into(), |c| c.to_string()),
                    cap: self.config.cap,
                })
            }
        };
        map_indexed(self.config.mode, count, |index| {
            let branch = Branch::new(assessment, Selection::decode(assessment, index))?;
            Ok(match branch.cone.coherence() {
                Coherence::Coherent => Classified::Coherent(branch),
                Coherence::Incoherent { weights } => {
                    let positional = branch.positional(&weights, assessment.len());
                    Classified::Incoherent(branch.selection.picks, positional)
                }
            })
        })
        .into_iter()
        .collect()
    }

    pub fn consistent(&self, assessment: &Assessment) -> Result<Verdict, EngineError> {
        if let Some(index) = assessment.position_of_empty() {
            return Ok(Verdict {
                answer: false,
                evidence: Evidence::EmptySet { index },
            });
        }
        let classified = self.classify(assessment)?;
        if let Some(branch) = classified.iter().find_map(|c| match c {
            Classified::Coherent(b) => Some(b),
            Classified::Incoherent(..) => None,
        }) {
            return Ok(Verdict {
                answer: true,
                evidence: Evidence::CoherentSelection(branch.witness(assessment)),
            });
        }
        let evidence: Vec<(Vec<usize>, Vec<Rational>)> = classified
            .into_iter()
            .filter_map(|c| match c {
                Classified::Incoherent(picks, weights) => Some((picks, weights)),
                Classified::Coherent(_) => None,
            })
            .collect();
        let cert = build_inconsistency_certificate(assessment, &evidence)?;
        Ok(Verdict {
            answer: false,
            evidence: Evidence::InconsistencyCertificate(cert),
        })
    }

    /// Prepares `E(A)` for repeated queries. Fails if `A` is inconsistent.
    pub fn extend(&self, assessment: &Assessment) -> Result<NaturalExtension, EngineError> {
        if assessment.position_of_empty().is_some() {
            return Err(EngineError::Inconsistent);
        }
        let mut coherent = Vec::new();
        let mut incoherent = Vec::new();
        for c in self.classify(assessment)? {
            match c {
                Classified::Coherent(b) => coherent.push(b),
                Classified::Incoherent(picks, weights) => incoherent.push((picks, weights)),
            }
        }
        if coherent.is_empty() {
            return Err(EngineError::Inconsistent);
        }
        Ok(NaturalExtension {
            assessment: assessment.clone(),
            mode: self.config.mode,
            coherent,
            incoherent,
        })
    }

    pub fn natex_contains(
        &self,
        assessment: &Assessment,
        set: &GambleSet,
    ) -> Result<Verdict, EngineError> {
        self.extend(assessment)?.contains(set)
    }

    pub fn reject(
        &self,
        assessment: &Assessment,
        options: &GambleSet,
        u: &Gamble,
    ) -> Result<Verdict, EngineError> {
        self.extend(assessment)?.reject(options, u)
    }

    pub fn choose(
        &self,
        assessment: &Assessment,
        options: &GambleSet,
    ) -> Result<ChoiceOutcome, EngineError> {
        self.extend(assessment)?.choose(options)
    }

    pub fn singleton_desirable(
        &self,
        assessment: &Assessment,
        u: &Gamble,
    ) -> Result<Verdict, EngineError> {
        self.extend(assessment)?.singleton_desirable(u)
    }

    pub fn binarity_evidence(
        &self,
        assessment: &Assessment,
        set: &GambleSet,
    ) -> Result<BinarityReport, EngineError> {
        self.extend(assessment)?.binarity_evidence(set)
    }
}

/// `E(A)` for a consistent `A`, with every selection already classified.
#[derive(Debug, Clone)]
pub struct NaturalExtension {
    assessment: Assessment,
    mode: ExecMode,
    coherent: Vec<Branch>,
    incoherent: Vec<(Vec<usize>, Vec<Rational>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceOutcome {
    pub chosen: GambleSet,
    pub rejected: GambleSet,
    /// The rejection verdict for every option, in canonical order.
    pub verdicts: Vec<(Gamble, Verdict)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum BinarityReport {
    /// `B ∉ E(A)`.
    NotMember { witness: BinaryWitness },
    /// `B ∈ E(A)` because `{gamble} ∈ E(A)` for this `gamble ∈ B`.
    Binary {
        gamble: Gamble,
        certificate: PosiCertificate,
    },
    /// `B ∈ E(A)` but no singleton of `B` is, so `E(A)` is not binary.
    NonBinary {
        certificate: PosiCertificate,
        singletons: Vec<SingletonWitness>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingletonWitness {
    pub gamble: Gamble,
    pub witness: BinaryWitness,
}

impl BinarityReport {
    pub fn case(&self) -> &'static str {
        match self {
            BinarityReport::NotMember { .. } => "not-member",
            BinarityReport::Binary { .. } => "binary",
            BinarityReport::NonBinary { .. } => "non-binary",
        }
    }
}

impl NaturalExtension {
    pub fn assessment(&self) -> &Assessment {
        &self.assessment
    }

    /// The first coherent selection, in enumeration order.
    pub fn coherent_selection(&self) -> BinaryWitness {
        self.coherent[0].witness(&self.assessment)
    }

    pub fn coherent_count(&self) -> usize {
        self.coherent.len()
    }

    /// `B ∈ E(A)`.
    pub fn contains(&self, set: &GambleSet) -> Result<Verdict, EngineError> {
        self.assessment.space().check_set(set)?;
        let coherent = &self.coherent;
        let hits = map_indexed(self.mode, coherent.len(), |i| {
            coherent[i].cone.first_member_in(set)
        });
        let mut evidence = Vec::with_capacity(hits.len() + self.incoherent.len());
        for (branch, hit) in coherent.iter().zip(hits) {
            match hit? {
                Some((member, cone_evidence)) => evidence.push(SelectionEvidence::Member {
                    picks: branch.selection.picks.clone(),
                    member,
                    weights: branch.positional(&cone_evidence.weights, self.assessment.len()),
                }),
                None => {
                    return Ok(Verdict {
                        answer: false,
                        evidence: Evidence::BinaryWitness(branch.witness(&self.assessment)),
                    })
                }
            }
        }
        evidence.extend(self.incoherent.iter().map(|(picks, weights)| {
            SelectionEvidence::Incoherent {
                picks: picks.clone(),
                weights: weights.clone(),
            }
        }));
        let cert = build_membership_certificate(&self.assessment, set, &evidence)?;
        Ok(Verdict {
            answer: true,
            evidence: Evidence::PosiCertificate(cert),
        })
    }

    /// `u ∈ R(O)`, i.e. `O - {u} ∈ E(A)`.
    pub fn reject(&self, options: &GambleSet, u: &Gamble) -> Result<Verdict, EngineError> {
        self.assessment.space().check_gamble(u)?;
        if !options.contains(u) {
            return Err(EngineError::NotAnOption(u.clone()));
        }
        self.contains(&options.shift(u)?)
    }

    pub fn choose(&self, options: &GambleSet) -> Result<ChoiceOutcome, EngineError> {
        let mut chosen = Vec::new();
        let mut rejected = Vec::new();
        let mut verdicts = Vec::with_capacity(options.len());
        for u in options {
            let verdict = self.reject(options, u)?;
            if verdict.answer {
                rejected.push(u.clone());
            } else {
                chosen.push(u.clone());
            }
            verdicts.push((u.clone(), verdict));
        }
        Ok(ChoiceOutcome {
            chosen: GambleSet::new(chosen)?,
            rejected: GambleSet::new(rejected)?,
            verdicts,
        })
    }

    /// `{u} ∈ E(A)`.
    pub fn singleton_desirable(&self, u: &Gamble) -> Result<Verdict, EngineError> {
        self.contains(&GambleSet::singleton(u.clone()))
    }

    pub fn binarity_evidence(&self, set: &GambleSet) -> Result<BinarityReport, EngineError> {
        let verdict = self.contains(set)?;
        let certificate = match verdict.evidence {
            Evidence::BinaryWitness(witness) => return Ok(BinarityReport::NotMember { witness }),
            Evidence::PosiCertificate(cert) => cert,
            _ => unreachable!("membership verdicts carry certificates or witnesses"),
        };
        let mut singletons = Vec::with_capacity(set.len());
        for u in set {
            let verdict = self.singleton_desirable(u)?;
            match verdict.evidence {
                Evidence::PosiCertificate(certificate) => {
                    return Ok(BinarityReport::Binary {
                        gamble: u.clone(),
                        certificate,
                    })
                }
                Evidence::BinaryWitness(witness) => singletons.push(SingletonWitness {
                    gamble: u.clone(),
                    witness,
                }),
                _ => unreachable!("membership verdicts carry certificates or witnesses"),
            }
        }
        Ok(BinarityReport::NonBinary {
            certificate,
            singletons,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(values: &[i64]) -> Gamble {
        Gamble::from_ints(values)
    }

    fn set(rows: &[&[i64]]) -> GambleSet {
        GambleSet::from_ints(rows).unwrap()
    }

    fn assess(sets: Vec<GambleSet>) -> Assessment {
        Assessment::with_dim(2, sets).unwrap()
    }

    fn both_ways() -> Vec<Engine> {
        vec![
            Engine::with_mode(ExecMode::Sequential),
            Engine::with_mode(ExecMode::Parallel),
        ]
    }

    #[test]
    fn consistency_examples() {
        for engine in both_ways() {
            let empty = assess(vec![]);
            let v = engine.consistent(&empty).unwrap();
            assert!(v.answer);
            v.verify_consistency(&empty).unwrap();

            let with_empty = assess(vec![GambleSet::empty(), set(&[&[1, 0]])]);
            let v = engine.consistent(&with_empty).unwrap();
            assert_eq!(v.evidence, Evidence::EmptySet { index: 0 });
            v.verify_consistency(&with_empty).unwrap();

            let either = assess(vec![set(&[&[1, -1], &[-1, 1]])]);
            let v = engine.consistent(&either).unwrap();
            assert!(v.answer);
            v.verify_consistency(&either).unwrap();

            let hopeless = assess(vec![set(&[&[-1, -1], &[-2, 0]])]);
            let v = engine.consistent(&hopeless).unwrap();
            assert!(!v.answer);
            assert!(matches!(v.evidence, Evidence::InconsistencyCertificate(_)));
            v.verify_consistency(&hopeless).unwrap();
        }
    }

    #[test]
    fn natex_examples() {
        let q = set(&[&[1, -1], &[-1, 1]]);
        let a = assess(vec![q.clone()]);
        for engine in both_ways() {
            let natex = engine.extend(&a).unwrap();
            let v = natex.contains(&q).unwrap();
            assert!(v.answer);
            v.verify_membership(&a, &q).unwrap();

            let b = set(&[&[1, -1]]);
            let v = natex.contains(&b).unwrap();
            assert!(!v.answer);
            assert_eq!(
                v.evidence,
                Evidence::BinaryWitness(BinaryWitness {
                    selection: vec![g(&[-1, 1])]
                })
            );
            v.verify_membership(&a, &b).unwrap();

            for b in [GambleSet::empty(), set(&[&[0, 0]])] {
                let v = natex.contains(&b).unwrap();
                assert!(!v.answer);
                v.verify_membership(&a, &b).unwrap();
            }
        }
    }

    #[test]
    fn inconsistent_queries_are_errors() {
        let a = assess(vec![set(&[&[-1, -1], &[-2, 0]])]);
        let engine = Engine::default();
        assert_eq!(
            engine.natex_contains(&a, &set(&[&[1, 0]])),
            Err(EngineError::Inconsistent)
        );
        let a = assess(vec![GambleSet::empty()]);
        assert_eq!(
            engine.natex_contains(&a, &set(&[&[1, 0]])).unwrap_err(),
            EngineError::Inconsistent
        );
    }

    #[test]
    fn reject_examples() {
        let engine = Engine::default();
        let a = assess(vec![]);
        let o = set(&[&[0, 0], &[1, 1], &[-1, -1]]);
        assert!(engine.reject(&a, &o, &g(&[-1, -1])).unwrap().answer);
        assert!(!engine.reject(&a, &o, &g(&[1, 1])).unwrap().answer);
        let single = set(&[&[3, -2]]);
        assert!(!engine.reject(&a, &single, &g(&[3, -2])).unwrap().answer);
        assert_eq!(
            engine.reject(&a, &o, &g(&[5, 5])),
            Err(EngineError::NotAnOption(g(&[5, 5])))
        );
    }

    #[test]
    fn choose_examples() {
        let engine = Engine::default();
        let out = engine
            .choose(&assess(vec![]), &set(&[&[0, 0], &[1, 1], &[-1, -1]]))
            .unwrap();
        assert_eq!(out.chosen, set(&[&[1, 1]]));
        assert_eq!(out.rejected, set(&[&[0, 0], &[-1, -1]]));

        let out = engine.choose(&assess(vec![]), &GambleSet::empty()).unwrap();
        assert!(out.chosen.is_empty() && out.rejected.is_empty());

        let a = assess(vec![set(&[&[1, -1], &[-1, 1]])]);
        let out = engine
            .choose(&a, &set(&[&[0, 0], &[1, -1], &[-1, 1]]))
            .unwrap();
        assert_eq!(out.chosen, set(&[&[1, -1], &[-1, 1]]));
        assert_eq!(out.rejected, set(&[&[0, 0]]));
    }

    #[test]
    fn singleton_examples() {
        let engine = Engine::default();
        assert!(
            engine
                .singleton_desirable(&assess(vec![]), &g(&[1, 0]))
                .unwrap()
                .answer
        );
        let a = assess(vec![set(&[&[1, -1], &[-1, 1]])]);
        assert!(!engine.singleton_desirable(&a, &g(&[1, -1])).unwrap().answer);
        assert!(!engine.singleton_desirable(&a, &g(&[0, 0])).unwrap().answer);
    }

    #[test]
    fn binarity_examples() {
        let engine = Engine::default();
        let q = set(&[&[1, -1], &[-1, 1]]);
        let report = engine
            .binarity_evidence(&assess(vec![q.clone()]), &q)
            .unwrap();
        assert_eq!(report.case(), "non-binary");

        let report = engine
            .binarity_evidence(&assess(vec![]), &set(&[&[1, 0], &[-1, -1]]))
            .unwrap();
        let BinarityReport::Binary { gamble, .. } = report else {
            panic!("expected binary explanation");
        };
        assert_eq!(gamble, g(&[1, 0]));

        let report = engine
            .binarity_evidence(&assess(vec![]), &set(&[&[-1, -1]]))
            .unwrap();
        assert_eq!(report.case(), "not-member");
    }

    #[test]
    fn selection_cap() {
        let engine = Engine::new(EngineConfig {
            cap: 3,
            mode: ExecMode::Sequential,
        });
        let a = assess(vec![set(&[&[1, 0], &[0, 1]]), set(&[&[2, 0], &[0, 2]])]);
        assert!(matches!(
            engine.consistent(&a),
            Err(EngineError::CapExceeded { cap: 3, .. })
        ));
    }

    #[test]
    fn dimension_errors() {
        let engine = Engine::default();
        let a = assess(vec![]);
        assert!(matches!(
            engine.natex_contains(&a, &GambleSet::from_ints(&[&[1, 0, 0]]).unwrap()),
            Err(EngineError::Gamble(GambleError::DimensionMismatch { .. }))
        ));
    }

    #[test]
    fn enumeration_order_is_lexicographic() {
        let a = assess(vec![
            set(&[&[1, 0], &[0, 1]]),
            set(&[&[2, 0], &[0, 2], &[3, 3]]),
        ]);
        let picks: Vec<Vec<usize>> = (0..6).map(|i| Selection::decode(&a, i).picks).collect();
        assert_eq!(
            picks,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![0, 2],
                vec![1, 0],
                vec![1, 1],
                vec![1, 2]
            ]
        );
    }

    #[test]
    fn verdict_json_shape() {
        let v = Verdict {
            answer: false,
            evidence: Evidence::BinaryWitness(BinaryWitness {
                selection: vec![g(&[-1, 1])],
            }),
        };
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"answer":false,"evidence":{"kind":"binary-witness","selection":[["-1","1"]]}}"#
        );
    }
}
