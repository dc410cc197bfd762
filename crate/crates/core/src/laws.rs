//! Randomized law suites over sampled micro-instances.
//!
//! Each suite draws its instances from a [`Sampler`] seeded by the caller
//! and records every check it makes. Every membership verdict produced on
//! the way is re-verified through its evidence, and kept so that runs in
//! different execution modes can be compared verdict by verdict.

use crate::choice::{Engine, EngineError, NaturalExtension, Verdict};
use crate::gambles::{Assessment, Gamble, GambleSet};
use crate::operators::{rn_member, rs_member, su_candidates, su_member};
use crate::sampling::Sampler;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LawReport {
    pub name: &'static str,
    pub instances: usize,
    pub checks: usize,
    pub violations: Vec<String>,
    pub certificates: usize,
    pub certificate_failures: Vec<String>,
    pub verdicts: Vec<Verdict>,
}

impl LawReport {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            ..Self::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.certificate_failures.is_empty()
    }

    fn check(&mut self, holds: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !holds {
            self.violations.push(describe());
        }
    }

    /// `B ∈ E(A)`, with the verdict's evidence re-checked and recorded.
    fn member(&mut self, natex: &NaturalExtension, set: &GambleSet) -> Result<bool, EngineError> {
        let verdict = natex.contains(set)?;
        self.certificates += 1;
        if let Err(defect) = verdict.verify_membership(natex.assessment(), set) {
            self.certificate_failures.push(format!(
                "{} in E({:?}): {defect}",
                set,
                natex.assessment().sets()
            ));
        }
        let answer = verdict.answer;
        self.verdicts.push(verdict);
        Ok(answer)
    }

    /// One-line summary without the verdict log.
    pub fn summary(&self) -> String {
        format!(
            "{}: {} instances, {} checks, {} violations, {} certificates, {} certificate failures",
            self.name,
            self.instances,
            self.checks,
            self.violations.len(),
            self.certificates,
            self.certificate_failures.len()
        )
    }
}

fn describe(a: &Assessment) -> String {
    let sets: Vec<String> = a.sets().iter().map(GambleSet::to_string).collect();
    format!("{{{}}}", sets.join(", "))
}

/// Draws assessments until one is consistent.
fn consistent_instance(
    engine: &Engine,
    sampler: &mut Sampler,
) -> Result<NaturalExtension, EngineError> {
    loop {
        let dim = sampler.dim();
        let assessment = sampler.assessment(dim);
        match engine.extend(&assessment) {
            Ok(natex) => return Ok(natex),
            Err(EngineError::Inconsistent) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// Member sets to seed the closure checks: the assessment itself plus
/// random sets that happen to be members.
fn member_pool(
    report: &mut LawReport,
    natex: &NaturalExtension,
    sampler: &mut Sampler,
) -> Result<Vec<GambleSet>, EngineError> {
    let dim = natex.assessment().dim();
    let mut pool = natex.assessment().sets().to_vec();
    for _ in 0..2 {
        let candidate = sampler.gamble_set(dim, 1, 3);
        if report.member(natex, &candidate)? {
            pool.push(candidate);
        }
    }
    Ok(pool)
}

fn pick<'a>(sampler: &mut Sampler, pool: &'a [GambleSet]) -> &'a GambleSet {
    &pool[sampler.below(pool.len())]
}

/// `{λ_{u,v} u + μ_{u,v} v : u ∈ B1, v ∈ B2}` with fresh `(λ, μ) > 0` per pair.
fn cone_combination(sampler: &mut Sampler, first: &GambleSet, second: &GambleSet) -> GambleSet {
    let mut out = Vec::with_capacity(first.len() * second.len());
    for u in first {
        for v in second {
            let (lambda, mu) = match sampler.below(4) {
                0 => (sampler.positive_rational(), Default::default()),
                1 => (Default::default(), sampler.positive_rational()),
                _ => (sampler.positive_rational(), sampler.positive_rational()),
            };
            out.push(&u.scale(&lambda) + &v.scale(&mu));
        }
    }
    GambleSet::new(out).expect("uniform dimension")
}

/// Axioms K0–K4 on the natural extension of `count` random consistent
/// assessments, plus the inclusion `A ⊆ E(A)`.
pub fn axioms(engine: &Engine, seed: u64, count: usize) -> Result<LawReport, EngineError> {
    let mut report = LawReport::new("axioms K0-K4");
    let mut sampler = Sampler::new(seed);
    for _ in 0..count {
        let natex = consistent_instance(engine, &mut sampler)?;
        let a = natex.assessment().clone();
        let dim = a.dim();
        let zero = Gamble::zero(dim);
        report.instances += 1;

        for q in a.sets() {
            let held = report.member(&natex, q)?;
            report.check(held, || {
                format!("inclusion: {q} not in E({})", describe(&a))
            });
        }

        let held = report.member(&natex, &GambleSet::empty())?;
        report.check(!held, || format!("K0: empty set in E({})", describe(&a)));

        let pool = member_pool(&mut report, &natex, &mut sampler)?;

        for _ in 0..2 {
            let base = if sampler.chance(0.5) {
                pick(&mut sampler, &pool).clone()
            } else {
                sampler.gamble_set(dim, 0, 3)
            };
            let with_zero = base.with(zero.clone())?;
            if report.member(&natex, &with_zero)? {
                let stripped = with_zero.without(&zero);
                let held = report.member(&natex, &stripped)?;
                report.check(held, || {
                    format!(
                        "K1: {with_zero} in E({}) but {stripped} is not",
                        describe(&a)
                    )
                });
            }
        }

        for _ in 0..2 {
            let u = sampler.strictly_positive(dim);
            let held = report.member(&natex, &GambleSet::singleton(u.clone()))?;
            report.check(held, || format!("K2: {{{u}}} not in E({})", describe(&a)));
        }

        for _ in 0..2 {
            let first = pick(&mut sampler, &pool).clone();
            let second = pick(&mut sampler, &pool).clone();
            let combined = cone_combination(&mut sampler, &first, &second);
            let held = report.member(&natex, &combined)?;
            report.check(held, || {
                format!(
                    "K3: {first} and {second} in E({}) but combination {combined} is not",
                    describe(&a)
                )
            });
        }

        for _ in 0..2 {
            let small = pick(&mut sampler, &pool).clone();
            let extra = sampler.gamble_set(dim, 1, 2);
            let large = small.union(&extra)?;
            let held = report.member(&natex, &large)?;
            report.check(held, || {
                format!(
                    "K4: {small} in E({}) but superset {large} is not",
                    describe(&a)
                )
            });
        }
    }
    Ok(report)
}

/// For singleton assessments `{{g} : g ∈ G}` with coherent `G`, natural
/// extension membership must coincide with `B ∩ posi(L>0 ∪ G) ≠ ∅`.
pub fn binary_collapse(
    engine: &Engine,
    seed: u64,
    count: usize,
    queries: usize,
) -> Result<LawReport, EngineError> {
    let mut report = LawReport::new("binary collapse");
    let mut sampler = Sampler::new(seed);
    for _ in 0..count {
        let dim = sampler.dim();
        let gens = sampler.coherent_generators(dim);
        let a = Assessment::with_dim(dim, gens.gens().iter().cloned().map(GambleSet::singleton))?;
        let natex = engine.extend(&a)?;
        report.instances += 1;
        for _ in 0..queries {
            let mut set = sampler.gamble_set(dim, 0, 3);
            if !gens.gens().is_empty() && sampler.chance(0.3) {
                let g = gens.gens()[sampler.below(gens.gens().len())].clone();
                let nudge = sampler.nonneg_gamble(dim);
                set = set.with(&g.scale(&sampler.positive_rational()) + &nudge)?;
            }
            let engine_says = report.member(&natex, &set)?;
            let cone_says = gens.kd_contains(&set)?;
            report.check(engine_says == cone_says, || {
                format!(
                    "G = {:?}, B = {set}: natural extension says {engine_says}, cone says {cone_says}",
                    gens.gens()
                )
            });
        }
    }
    Ok(report)
}

/// Replacing a member of a set in `E(A)` by a dominating gamble keeps it in.
pub fn dominating_replacement(
    engine: &Engine,
    seed: u64,
    count: usize,
) -> Result<LawReport, EngineError> {
    let mut report = LawReport::new("dominating-option replacement");
    let mut sampler = Sampler::new(seed);
    while report.instances < count {
        let natex = consistent_instance(engine, &mut sampler)?;
        let dim = natex.assessment().dim();
        let pool = member_pool(&mut report, &natex, &mut sampler)?;
        let set = pick(&mut sampler, &pool).clone();
        let v = set.members()[sampler.below(set.len())].clone();
        let better = &v + &sampler.nonneg_gamble(dim);
        let replaced = set.without(&v).with(better.clone())?;
        report.instances += 1;
        let held = report.member(&natex, &replaced)?;
        report.check(held, || {
            format!(
                "{set} in E({}) but replacing {v} by {better} gives {replaced}, not in",
                describe(natex.assessment())
            )
        });
    }
    Ok(report)
}

/// `B ∈ E(A)` iff `B \ L<=0 ∈ E(A)`, on sets with non-positive members.
pub fn nonpositive_removal(
    engine: &Engine,
    seed: u64,
    count: usize,
) -> Result<LawReport, EngineError> {
    let mut report = LawReport::new("Rn-stability");
    let mut sampler = Sampler::new(seed);
    while report.instances < count {
        let natex = consistent_instance(engine, &mut sampler)?;
        let dim = natex.assessment().dim();
        let core = if sampler.chance(0.5) {
            let sets = natex.assessment().sets();
            sets[sampler.below(sets.len())].clone()
        } else {
            sampler.gamble_set(dim, 0, 2)
        };
        let padding = GambleSet::new((0..1 + sampler.below(2)).map(|_| sampler.nonpositive(dim)))?;
        let set = core.union(&padding)?;
        let stripped = set.strip_nonpositive();
        if stripped == set {
            continue;
        }
        report.instances += 1;
        let full = report.member(&natex, &set)?;
        let positive_part = report.member(&natex, &stripped)?;
        report.check(full == positive_part, || {
            format!(
                "E({}): {set} member = {full}, {stripped} member = {positive_part}",
                describe(natex.assessment())
            )
        });
    }
    Ok(report)
}

/// Enlarging a consistent assessment can only add members.
pub fn monotone_inference(
    engine: &Engine,
    seed: u64,
    count: usize,
) -> Result<LawReport, EngineError> {
    let mut report = LawReport::new("monotone inference");
    let mut sampler = Sampler::new(seed);
    while report.instances < count {
        let natex = consistent_instance(engine, &mut sampler)?;
        let a = natex.assessment().clone();
        let dim = a.dim();
        let larger = a.with_set(sampler.gamble_set(dim, 1, 3))?;
        let larger_natex = match engine.extend(&larger) {
            Ok(n) => n,
            Err(EngineError::Inconsistent) => continue,
            Err(e) => return Err(e),
        };
        report.instances += 1;
        for _ in 0..3 {
            let set = if sampler.chance(0.3) {
                a.sets()[sampler.below(a.len())].clone()
            } else {
                sampler.gamble_set(dim, 1, 3)
            };
            if report.member(&natex, &set)? {
                let held = report.member(&larger_natex, &set)?;
                report.check(held, || {
                    format!(
                        "{set} in E({}) but not in E({})",
                        describe(&a),
                        describe(&larger)
                    )
                });
            }
        }
    }
    Ok(report)
}

/// `Rs(K) = Rn(Su(K))` on random finite base collections.
///
/// The composition side builds a finite slice of `Su(K)` (the supersets
/// `B' ∪ B` plus random extra supersets), keeps what `Su` admits, then
/// applies `Rn`.
pub fn operator_identity(seed: u64, count: usize) -> LawReport {
    let mut report = LawReport::new("Rs = Rn o Su");
    let mut sampler = Sampler::new(seed);
    for _ in 0..count {
        let dim = sampler.dim();
        let base: Vec<GambleSet> = (0..1 + sampler.below(3))
            .map(|_| {
                let len = sampler.below(4);
                GambleSet::new((0..len).map(|_| sampler.coarse_gamble(dim))).expect("uniform")
            })
            .collect();
        let mut query: Vec<Gamble> = (0..sampler.below(3))
            .map(|_| sampler.coarse_gamble(dim))
            .collect();
        if sampler.chance(0.6) {
            let b = &base[sampler.below(base.len())];
            query.extend(b.iter().filter(|_| sampler.chance(0.8)).cloned());
        }
        let query = GambleSet::new(query).expect("uniform");

        let mut layer = su_candidates(&base, &query);
        for b in &base {
            let extra = GambleSet::new((0..sampler.below(3)).map(|_| sampler.coarse_gamble(dim)))
                .expect("uniform");
            layer.push(b.union(&extra).expect("uniform"));
        }
        layer.retain(|c| su_member(&base, c));

        let direct = rs_member(&base, &query);
        let composed = rn_member(&layer, &query);
        report.instances += 1;
        report.check(direct == composed, || {
            format!("K = {base:?}, B = {query}: Rs says {direct}, Rn(Su) says {composed}")
        });
    }
    report
}
