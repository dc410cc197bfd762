//! Query files: an assessment plus a list of tagged queries, and the JSON
//! reports the engine produces for them.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::choice::{
    BinarityReport, ChoiceOutcome, Engine, EngineError, EvidenceDefect, NaturalExtension, Verdict,
};
use crate::gambles::{Assessment, AssessmentDocument, Gamble, GambleError, GambleSet};
use crate::operators::verify_membership_certificate;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Query {
    Consistent,
    Member { set: GambleSet },
    Choose { options: GambleSet },
    Reject { options: GambleSet, gamble: Gamble },
    Singleton { gamble: Gamble },
    Binarity { set: GambleSet },
}

impl Query {
    pub fn op(&self) -> &'static str {
        match self {
            Query::Consistent => "consistent",
            Query::Member { .. } => "member",
            Query::Choose { .. } => "choose",
            Query::Reject { .. } => "reject",
            Query::Singleton { .. } => "singleton",
            Query::Binarity { .. } => "binarity",
        }
    }

    fn check_dims(&self, assessment: &Assessment) -> Result<(), GambleError> {
        let space = assessment.space();
        match self {
            Query::Consistent => Ok(()),
            Query::Member { set } | Query::Binarity { set } => space.check_set(set),
            Query::Choose { options } => space.check_set(options),
            Query::Reject { options, gamble } => {
                space.check_set(options)?;
                space.check_gamble(gamble)
            }
            Query::Singleton { gamble } => space.check_gamble(gamble),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QueryDocument {
    #[serde(flatten)]
    pub assessment: AssessmentDocument,
    #[serde(default)]
    pub queries: Vec<Query>,
}

#[derive(Debug, Clone)]
pub struct QueryFile {
    pub assessment: Assessment,
    pub queries: Vec<Query>,
}

impl QueryFile {
    pub fn parse(text: &str) -> Result<Self, GambleError> {
        let doc: QueryDocument =
            serde_json::from_str(text).map_err(|e| GambleError::Json(e.to_string()))?;
        Self::from_document(doc)
    }

    pub fn from_document(doc: QueryDocument) -> Result<Self, GambleError> {
        let assessment = doc.assessment.into_assessment()?;
        for q in &doc.queries {
            q.check_dims(&assessment)?;
        }
        Ok(Self {
            assessment,
            queries: doc.queries,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    Verdict(Verdict),
    Choice(ChoiceOutcome),
    Binarity(BinarityReport),
}

/// Runs one query. Everything except `consistent` needs the prepared
/// natural extension, which the caller builds once per assessment.
pub fn run_query(
    engine: &Engine,
    assessment: &Assessment,
    natex: Option<&NaturalExtension>,
    query: &Query,
) -> Result<Answer, EngineError> {
    if let Query::Consistent = query {
        return engine.consistent(assessment).map(Answer::Verdict);
    }
    let natex = natex.ok_or(EngineError::Inconsistent)?;
    Ok(match query {
        Query::Consistent => unreachable!(),
        Query::Member { set } => Answer::Verdict(natex.contains(set)?),
        Query::Choose { options } => Answer::Choice(natex.choose(options)?),
        Query::Reject { options, gamble } => Answer::Verdict(natex.reject(options, gamble)?),
        Query::Singleton { gamble } => Answer::Verdict(natex.singleton_desirable(gamble)?),
        Query::Binarity { set } => Answer::Binarity(natex.binarity_evidence(set)?),
    })
}

impl Answer {
    /// The report object for one query.
    pub fn to_json(&self, query: &Query) -> Value {
        let mut out = match self {
            Answer::Verdict(v) => v.to_json(),
            Answer::Choice(c) => json!({
                "chosen": c.chosen,
                "rejected": c.rejected,
                "verdicts": c.verdicts.iter().map(|(u, v)| {
                    json!({"option": u, "answer": v.answer, "evidence": v.evidence})
                }).collect::<Vec<_>>(),
            }),
            Answer::Binarity(r) => {
                let mut v = serde_json::to_value(r).expect("report serializes");
                v["answer"] = Value::Bool(!matches!(r, BinarityReport::NotMember { .. }));
                v
            }
        };
        let mut tagged = serde_json::Map::new();
        tagged.insert("op".into(), Value::String(query.op().into()));
        if let Value::Object(fields) = &mut out {
            tagged.append(fields);
        }
        Value::Object(tagged)
    }

    /// The part of the answer a corpus case pins down.
    pub fn summary(&self) -> Value {
        match self {
            Answer::Verdict(v) => Value::Bool(v.answer),
            Answer::Choice(c) => json!({"chosen": c.chosen, "rejected": c.rejected}),
            Answer::Binarity(r) => Value::String(r.case().into()),
        }
    }

    pub fn to_text(&self, query: &Query) -> String {
        match self {
            Answer::Verdict(v) => format!("{}: {}", query.op(), v.answer),
            Answer::Choice(c) => format!("choose: chosen {} rejected {}", c.chosen, c.rejected),
            Answer::Binarity(r) => format!("binarity: {}", r.case()),
        }
    }

    /// Re-checks every piece of evidence in the answer.
    pub fn verify(&self, assessment: &Assessment, query: &Query) -> Result<(), EvidenceDefect> {
        match (query, self) {
            (Query::Consistent, Answer::Verdict(v)) => v.verify_consistency(assessment),
            (Query::Member { set }, Answer::Verdict(v)) => v.verify_membership(assessment, set),
            (Query::Singleton { gamble }, Answer::Verdict(v)) => {
                v.verify_membership(assessment, &GambleSet::singleton(gamble.clone()))
            }
            (Query::Reject { options, gamble }, Answer::Verdict(v)) => {
                let shifted = options
                    .shift(gamble)
                    .map_err(|_| EvidenceDefect::WrongKind)?;
                v.verify_membership(assessment, &shifted)
            }
            (Query::Choose { options }, Answer::Choice(c)) => {
                if c.verdicts.len() != options.len() {
                    return Err(EvidenceDefect::WrongKind);
                }
                for (u, v) in &c.verdicts {
                    let shifted = options.shift(u).map_err(|_| EvidenceDefect::WrongKind)?;
                    v.verify_membership(assessment, &shifted)?;
                    if c.rejected.contains(u) != v.answer || c.chosen.contains(u) == v.answer {
                        return Err(EvidenceDefect::WrongKind);
                    }
                }
                Ok(())
            }
            (Query::Binarity { set }, Answer::Binarity(r)) => verify_binarity(assessment, set, r),
            _ => Err(EvidenceDefect::WrongKind),
        }
    }
}

fn verify_binarity(
    assessment: &Assessment,
    set: &GambleSet,
    report: &BinarityReport,
) -> Result<(), EvidenceDefect> {
    match report {
        BinarityReport::NotMember { witness } => Ok(witness.check_excludes(assessment, set)?),
        BinarityReport::Binary {
            gamble,
            certificate,
        } => {
            if !set.contains(gamble) {
                return Err(EvidenceDefect::WrongKind);
            }
            let single = GambleSet::singleton(gamble.clone());
            Ok(verify_membership_certificate(
                assessment,
                &single,
                certificate,
            )?)
        }
        BinarityReport::NonBinary {
            certificate,
            singletons,
        } => {
            verify_membership_certificate(assessment, set, certificate)?;
            let covered: Vec<&Gamble> = singletons.iter().map(|s| &s.gamble).collect();
            if covered != set.iter().collect::<Vec<_>>() {
                return Err(EvidenceDefect::WrongKind);
            }
            for s in singletons {
                s.witness
                    .check_excludes(assessment, &GambleSet::singleton(s.gamble.clone()))?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FILE: &str = r#"{
        "space": ["a", "b"],
        "assessment": [[["1", "-1"], ["-1", "1"]]],
        "queries": [
            {"op": "consistent"},
            {"op": "member", "set": [["1", "-1"], ["-1", "1"]]},
            {"op": "choose", "options": [["0", "0"], ["1", "-1"], ["-1", "1"]]},
            {"op": "reject", "options": [["0", "0"], ["1", "-1"]], "gamble": ["0", "0"]},
            {"op": "singleton", "gamble": ["1", "-1"]},
            {"op": "binarity", "set": [["1", "-1"], ["-1", "1"]]}
        ]
    }"#;

    #[test]
    fn parse_and_run() {
        let file = QueryFile::parse(FILE).unwrap();
        assert_eq!(file.queries.len(), 6);
        let engine = Engine::default();
        let natex = engine.extend(&file.assessment).unwrap();
        let summaries: Vec<Value> = file
            .queries
            .iter()
            .map(|q| {
                let answer = run_query(&engine, &file.assessment, Some(&natex), q).unwrap();
                answer.verify(&file.assessment, q).unwrap();
                answer.summary()
            })
            .collect();
        assert_eq!(
            summaries,
            vec![
                json!(true),
                json!(true),
                json!({"chosen": [["-1", "1"], ["1", "-1"]], "rejected": [["0", "0"]]}),
                json!(false),
                json!(false),
                json!("non-binary"),
            ]
        );
    }

    #[test]
    fn report_objects_are_tagged() {
        let file = QueryFile::parse(FILE).unwrap();
        let engine = Engine::default();
        let natex = engine.extend(&file.assessment).unwrap();
        let q = &file.queries[4];
        let answer = run_query(&engine, &file.assessment, Some(&natex), q).unwrap();
        let v = answer.to_json(q);
        assert_eq!(v["op"], "singleton");
        assert_eq!(v["answer"], false);
        assert_eq!(v["evidence"]["kind"], "binary-witness");
    }

    #[test]
    fn rejects_bad_queries() {
        let wrong_dim = r#"{"space": ["a", "b"], "assessment": [],
            "queries": [{"op": "singleton", "gamble": ["1"]}]}"#;
        assert!(QueryFile::parse(wrong_dim).is_err());
        let unknown = r#"{"space": ["a"], "assessment": [], "queries": [{"op": "maximize"}]}"#;
        assert!(QueryFile::parse(unknown).is_err());
    }
}
