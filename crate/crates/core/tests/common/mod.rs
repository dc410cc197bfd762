//! Test helpers shared by the integration targets: a Fourier-Motzkin
//! oracle for small linear programs and a seeded program generator.

#![allow(dead_code)]

use cohere::gambles::{integer, Rational};
use cohere::ratlp::{LinearProgram, LpOutcome, LpStatus, Relation};
use cohere::sampling::Sampler;
use num_traits::{Signed, Zero};

/// Rows `a . x <= b`.
#[derive(Debug, Clone)]
struct Row {
    a: Vec<Rational>,
    b: Rational,
}

fn negate(a: &[Rational]) -> Vec<Rational> {
    a.iter().map(|v| -v).collect()
}

fn rows_of(lp: &LinearProgram, extra_vars: usize) -> Vec<Row> {
    let width = lp.num_vars + extra_vars;
    let pad = |c: &[Rational]| {
        let mut a = c.to_vec();
        a.resize(width, Rational::zero());
        a
    };
    let mut rows = Vec::new();
    for c in &lp.constraints {
        let a = pad(&c.coeffs);
        match c.relation {
            Relation::Le => rows.push(Row {
                a,
                b: c.rhs.clone(),
            }),
            Relation::Ge => rows.push(Row {
                a: negate(&a),
                b: -c.rhs.clone(),
            }),
            Relation::Eq => {
                rows.push(Row {
                    a: a.clone(),
                    b: c.rhs.clone(),
                });
                rows.push(Row {
                    a: negate(&a),
                    b: -c.rhs.clone(),
                });
            }
        }
    }
    for (i, &nn) in lp.nonneg.iter().enumerate() {
        if nn {
            let mut a = vec![Rational::zero(); width];
            a[i] = integer(-1);
            rows.push(Row {
                a,
                b: Rational::zero(),
            });
        }
    }
    rows
}

/// Projects out variable `k`.
fn eliminate(rows: Vec<Row>, k: usize) -> Vec<Row> {
    let (mut pos, mut neg, mut out) = (Vec::new(), Vec::new(), Vec::new());
    for r in rows {
        if r.a[k].is_positive() {
            pos.push(r);
        } else if r.a[k].is_negative() {
            neg.push(r);
        } else {
            out.push(r);
        }
    }
    for p in &pos {
        for n in &neg {
            let (sp, sn) = (-n.a[k].clone(), p.a[k].clone());
            let a: Vec<Rational> =
                p.a.iter()
                    .zip(&n.a)
                    .map(|(x, y)| x * &sp + y * &sn)
                    .collect();
            out.push(Row {
                a,
                b: &p.b * &sp + &n.b * &sn,
            });
        }
    }
    out
}

/// Either `Infeasible`, `FeasiblePoint` (no objective), `Unbounded`, or
/// `Optimal` with the optimal value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleAnswer {
    pub status: LpStatus,
    pub value: Option<Rational>,
}

pub fn fm_solve(lp: &LinearProgram) -> OracleAnswer {
    let n = lp.num_vars;
    let Some(c) = &lp.objective else {
        let mut rows = rows_of(lp, 0);
        for k in 0..n {
            rows = eliminate(rows, k);
        }
        let feasible = rows.iter().all(|r| !r.b.is_negative());
        return OracleAnswer {
            status: if feasible {
                LpStatus::FeasiblePoint
            } else {
                LpStatus::Infeasible
            },
            value: None,
        };
    };
    // Extra variable t with t = c . x, then project onto t.
    let mut rows = rows_of(lp, 1);
    let mut link = negate(c);
    link.push(integer(1));
    rows.push(Row {
        a: link.clone(),
        b: Rational::zero(),
    });
    rows.push(Row {
        a: negate(&link),
        b: Rational::zero(),
    });
    for k in 0..n {
        rows = eliminate(rows, k);
    }
    let mut upper: Option<Rational> = None;
    let mut lower: Option<Rational> = None;
    for r in &rows {
        let at = &r.a[n];
        if at.is_zero() {
            if r.b.is_negative() {
                return OracleAnswer {
                    status: LpStatus::Infeasible,
                    value: None,
                };
            }
        } else if at.is_positive() {
            let bound = &r.b / at;
            upper = Some(upper.map_or(bound.clone(), |u| u.min(bound)));
        } else {
            let bound = &r.b / at;
            lower = Some(lower.map_or(bound.clone(), |l| l.max(bound)));
        }
    }
    if let (Some(u), Some(l)) = (&upper, &lower) {
        if l > u {
            return OracleAnswer {
                status: LpStatus::Infeasible,
                value: None,
            };
        }
    }
    match upper {
        Some(u) => OracleAnswer {
            status: LpStatus::Optimal,
            value: Some(u),
        },
        None => OracleAnswer {
            status: LpStatus::Unbounded,
            value: None,
        },
    }
}

/// Checks the solver's outcome against the oracle and against the program
/// itself. Returns a description of the first disagreement.
pub fn disagreement(lp: &LinearProgram) -> Option<String> {
    let oracle = fm_solve(lp);
    let outcome = match lp.solve() {
        Ok(o) => o,
        Err(e) => return Some(format!("solver error: {e}")),
    };
    if outcome.status() != oracle.status {
        return Some(format!(
            "status {:?} vs oracle {:?}",
            outcome.status(),
            oracle.status
        ));
    }
    if let Some(point) = outcome.point() {
        if !lp.is_satisfied_by(point) {
            return Some("returned point is infeasible".into());
        }
    }
    match &outcome {
        LpOutcome::Optimal { point, value } => {
            if Some(value) != oracle.value.as_ref() {
                return Some(format!("value {value} vs oracle {:?}", oracle.value));
            }
            if lp.objective_value(point).as_ref() != Some(value) {
                return Some("reported value differs from objective at point".into());
            }
        }
        LpOutcome::Unbounded { ray, .. } if !ray_is_valid(lp, ray) => {
            return Some("ray is not an improving recession direction".into());
        }
        _ => {}
    }
    None
}

fn ray_is_valid(lp: &LinearProgram, ray: &[Rational]) -> bool {
    let dot = |a: &[Rational]| -> Rational { a.iter().zip(ray).map(|(x, y)| x * y).sum() };
    let rows_ok = lp.constraints.iter().all(|c| {
        let d = dot(&c.coeffs);
        match c.relation {
            Relation::Le => !d.is_positive(),
            Relation::Ge => !d.is_negative(),
            Relation::Eq => d.is_zero(),
        }
    });
    let signs_ok = lp
        .nonneg
        .iter()
        .zip(ray)
        .all(|(&nn, r)| !nn || !r.is_negative());
    let improving = lp.objective.as_ref().is_some_and(|c| dot(c).is_positive());
    rows_ok && signs_ok && improving
}

/// A random program with at most 3 variables and at most 4 constraints.
pub fn random_program(s: &mut Sampler) -> LinearProgram {
    let n = 1 + s.below(3);
    let mut lp = LinearProgram::new(n);
    for i in 0..n {
        if s.chance(0.3) {
            lp = lp.free(i);
        }
    }
    for _ in 0..s.below(5) {
        let coeffs = (0..n).map(|_| s.rational()).collect();
        let relation = [Relation::Le, Relation::Ge, Relation::Eq][s.below(3)];
        lp.constrain(coeffs, relation, s.rational()).unwrap();
    }
    if s.chance(0.85) {
        lp.maximize((0..n).map(|_| s.rational()).collect()).unwrap();
    }
    lp
}
