//! The built-in self-test: a fixed micro-corpus of hand-checked cases and
//! the randomized law suites.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::choice::{Engine, EngineError};
use crate::desirability::DesirGenerators;
use crate::gambles::{parse_rational, Gamble, GambleSet};
use crate::laws::{self, LawReport};
use crate::operators::{rn_member, rs_step, su_member};
use crate::query::{run_query, Query, QueryDocument, QueryFile};
use crate::ratlp::{LinearProgram, LpStatus, Relation};

pub const DEFAULT_SEED: u64 = 1;

pub const EMBEDDED_CORPUS: &str = include_str!("corpus.json");

#[derive(Debug, Clone, Deserialize)]
pub struct CorpusCase {
    pub name: String,
    #[serde(flatten)]
    pub document: QueryDocument,
    pub query: Query,
    pub expect: Value,
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusCase>, serde_json::Error> {
    serde_json::from_str(text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteSizes {
    pub axioms: usize,
    pub collapse_generators: usize,
    pub collapse_queries: usize,
    pub stability: usize,
    pub operators: usize,
}

impl Default for SuiteSizes {
    fn default() -> Self {
        Self {
            axioms: 200,
            collapse_generators: 100,
            collapse_queries: 20,
            stability: 100,
            operators: 100,
        }
    }
}

/// Per-suite seed, so suites stay independent of each other's draws.
pub fn suite_seed(seed: u64, suite: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ suite.wrapping_mul(0xD1B5_4A32_D192_ED03)
}

#[derive(Debug, Clone, Default)]
pub struct SelftestReport {
    pub lines: Vec<String>,
    pub failures: Vec<String>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, name: &str, outcome: Result<(), String>) {
        match outcome {
            Ok(()) => self.lines.push(format!("ok   {name}")),
            Err(why) => {
                let line = format!("FAIL {name}: {why}");
                self.lines.push(line.clone());
                self.failures.push(line);
            }
        }
    }

    pub fn text(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}

fn run_case(engine: &Engine, case: &CorpusCase) -> Result<(), String> {
    let file = QueryFile::from_document(QueryDocument {
        assessment: case.document.assessment.clone(),
        queries: vec![case.query.clone()],
    })
    .map_err(|e| format!("bad case: {e}"))?;
    let natex = match engine.extend(&file.assessment) {
        Ok(n) => Some(n),
        Err(EngineError::Inconsistent) => None,
        Err(e) => return Err(e.to_string()),
    };
    let got = match run_query(engine, &file.assessment, natex.as_ref(), &case.query) {
        Ok(answer) => {
            answer
                .verify(&file.assessment, &case.query)
                .map_err(|e| format!("evidence rejected: {e}"))?;
            answer.summary()
        }
        Err(EngineError::Inconsistent) => json!({"error": "inconsistent"}),
        Err(e) => json!({"error": e.to_string()}),
    };
    if got == case.expect {
        Ok(())
    } else {
        Err(format!("expected {}, got {got}", case.expect))
    }
}

fn g(values: &[i64]) -> Gamble {
    Gamble::from_ints(values)
}

fn set(rows: &[&[i64]]) -> GambleSet {
    GambleSet::from_ints(rows).expect("uniform")
}

fn lp_status(build: impl FnOnce(&mut LinearProgram), vars: usize) -> LpStatus {
    let mut lp = LinearProgram::new(vars);
    build(&mut lp);
    lp.solve().expect("well-formed").status()
}

fn expect(holds: bool) -> Result<(), String> {
    if holds {
        Ok(())
    } else {
        Err("unexpected result".into())
    }
}

/// Hand-checked examples for the building blocks below the engine.
fn unit_checks() -> Vec<(&'static str, Result<(), String>)> {
    let one = || parse_rational("1").unwrap();
    let zero = || parse_rational("0").unwrap();
    let q = |v: i64| crate::gambles::integer(v);
    let gens =
        |rows: &[&[i64]]| DesirGenerators::new(2, rows.iter().map(|r| g(r))).expect("two states");
    vec![
        (
            "unit: strict positivity",
            expect(
                g(&[1, 0]).is_strictly_positive()
                    && !g(&[0, 0]).is_strictly_positive()
                    && !Gamble::parse(&["1", "-1/2"])
                        .unwrap()
                        .is_strictly_positive(),
            ),
        ),
        (
            "unit: non-positivity",
            expect(
                g(&[0, 0]).is_nonpositive()
                    && g(&[-1, -2]).is_nonpositive()
                    && !g(&[1, -1]).is_nonpositive(),
            ),
        ),
        (
            "unit: strip non-positive",
            expect(set(&[&[1, -1], &[-1, 0], &[0, 0]]).strip_nonpositive() == set(&[&[1, -1]])),
        ),
        (
            "unit: shift",
            expect(set(&[&[1, 1], &[0, 0]]).shift(&g(&[1, 1])) == Ok(set(&[&[0, 0], &[-1, -1]]))),
        ),
        (
            "unit: rationals",
            expect(
                parse_rational("3/4").map(|r| crate::gambles::format_rational(&r))
                    == Ok("3/4".into())
                    && parse_rational("1/0").is_err(),
            ),
        ),
        (
            "unit: lp bounded",
            expect(
                lp_status(
                    |lp| {
                        lp.constrain(vec![one()], Relation::Le, one()).unwrap();
                        lp.maximize(vec![one()]).unwrap();
                    },
                    1,
                ) == LpStatus::Optimal,
            ),
        ),
        (
            "unit: lp infeasible",
            expect(
                lp_status(
                    |lp| {
                        lp.constrain(vec![q(-1)], Relation::Ge, one()).unwrap();
                    },
                    1,
                ) == LpStatus::Infeasible,
            ),
        ),
        (
            "unit: lp unbounded",
            expect(
                lp_status(
                    |lp| {
                        lp.constrain(vec![one(), q(-1)], Relation::Le, zero())
                            .unwrap();
                        lp.constrain(vec![q(-1), one()], Relation::Le, zero())
                            .unwrap();
                        lp.maximize(vec![one(), one()]).unwrap();
                    },
                    2,
                ) == LpStatus::Unbounded,
            ),
        ),
        (
            "unit: cone membership",
            expect(
                gens(&[]).cone_contains(&g(&[1, 0])) == Ok(true)
                    && gens(&[&[1, -1]]).cone_contains(&g(&[2, -1])) == Ok(true)
                    && gens(&[&[1, -1]]).cone_contains(&g(&[1, -2])) == Ok(false),
            ),
        ),
        (
            "unit: coherence",
            expect(
                gens(&[]).is_coherent()
                    && !gens(&[&[-1, -1]]).is_coherent()
                    && !gens(&[&[1, -1], &[-1, 1]]).is_coherent(),
            ),
        ),
        (
            "unit: rs step",
            expect(
                rs_step(&set(&[&[1, 0], &[-1, -1]]), &set(&[&[1, 0]]))
                    && rs_step(&set(&[&[1, 0]]), &set(&[&[1, 0], &[5, 5]]))
                    && !rs_step(&set(&[&[1, 0], &[0, 1]]), &set(&[&[1, 0]])),
            ),
        ),
        (
            "unit: su and rn",
            expect(
                su_member(&[set(&[&[1, 0]])], &set(&[&[1, 0], &[5, 5]]))
                    && !su_member(&[], &GambleSet::empty())
                    && rn_member(&[set(&[&[1, 0], &[-1, -1]])], &set(&[&[1, 0]]))
                    && !rn_member(&[set(&[&[1, 0], &[-1, -1]])], &set(&[&[1, 0], &[5, 5]])),
            ),
        ),
    ]
}

fn suite_line(report: &LawReport) -> Result<(), String> {
    if report.passed() {
        return Ok(());
    }
    let first = report
        .violations
        .first()
        .or(report.certificate_failures.first())
        .cloned()
        .unwrap_or_default();
    Err(format!("{}; first: {first}", report.summary()))
}

/// Runs the corpus (the embedded one unless `corpus` is given), the unit
/// checks and the law suites. Output depends only on the inputs.
pub fn run(engine: &Engine, seed: u64, corpus: Option<&str>, sizes: SuiteSizes) -> SelftestReport {
    let mut report = SelftestReport::default();
    report.lines.push(format!("selftest seed {seed}"));

    match parse_corpus(corpus.unwrap_or(EMBEDDED_CORPUS)) {
        Ok(cases) => {
            for case in &cases {
                report.record(&format!("corpus: {}", case.name), run_case(engine, case));
            }
        }
        Err(e) => report.record("corpus", Err(format!("unreadable corpus: {e}"))),
    }

    for (name, outcome) in unit_checks() {
        report.record(name, outcome);
    }

    let suites: Vec<Result<LawReport, EngineError>> = vec![
        laws::axioms(engine, suite_seed(seed, 1), sizes.axioms),
        laws::binary_collapse(
            engine,
            suite_seed(seed, 2),
            sizes.collapse_generators,
            sizes.collapse_queries,
        ),
        laws::dominating_replacement(engine, suite_seed(seed, 3), sizes.stability),
        laws::nonpositive_removal(engine, suite_seed(seed, 4), sizes.stability),
        laws::monotone_inference(engine, suite_seed(seed, 5), sizes.stability),
        Ok(laws::operator_identity(
            suite_seed(seed, 6),
            sizes.operators,
        )),
    ];
    for suite in suites {
        match suite {
            Ok(r) => {
                let name = format!(
                    "suite: {} ({} instances, {} checks, {} certificates)",
                    r.name, r.instances, r.checks, r.certificates
                );
                report.record(&name, suite_line(&r));
            }
            Err(e) => report.record("suite", Err(e.to_string())),
        }
    }
    report
}
