//! Small dense linear programs over exact rationals.
//!
//! Two-phase primal simplex on a full tableau with Bland's rule, which
//! guarantees termination on the degenerate programs cone-membership checks
//! produce. There is no presolve and no scaling; the programs this crate
//! builds have a handful of variables and one row per state.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::gambles::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn is_satisfied_by(&self, point: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().zip(point).map(|(a, x)| a * x).sum();
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("{what} has {found} coefficients, program has {expected} variables")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
}

/// `maximize objective . x` subject to `constraints`, with per-variable
/// sign restrictions. Without an objective the program is a pure
/// feasibility question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub constraints: Vec<Constraint>,
    pub objective: Option<Vec<Rational>>,
    pub nonneg: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Infeasible,
    Optimal,
    Unbounded,
    FeasiblePoint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Optimal {
        point: Vec<Rational>,
        value: Rational,
    },
    /// `point` is feasible; `point + t * ray` stays feasible for every
    /// `t >= 0` and the objective grows strictly along `ray`.
    Unbounded {
        point: Vec<Rational>,
        ray: Vec<Rational>,
    },
    FeasiblePoint {
        point: Vec<Rational>,
    },
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Infeasible => LpStatus::Infeasible,
            LpOutcome::Optimal { .. } => LpStatus::Optimal,
            LpOutcome::Unbounded { .. } => LpStatus::Unbounded,
            LpOutcome::FeasiblePoint { .. } => LpStatus::FeasiblePoint,
        }
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Infeasible => None,
            LpOutcome::Optimal { point, .. }
            | LpOutcome::Unbounded { point, .. }
            | LpOutcome::FeasiblePoint { point } => Some(point),
        }
    }
}

impl LinearProgram {
    /// A program over `num_vars` nonnegative variables with no constraints.
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            constraints: Vec::new(),
            objective: None,
            nonneg: vec![true; num_vars],
        }
    }

    pub fn free(mut self, var: usize) -> Self {
        self.nonneg[var] = false;
        self
    }

    pub fn constrain(
        &mut self,
        coeffs: Vec<Rational>,
        relation: Relation,
        rhs: Rational,
    ) -> Result<&mut Self, LpError> {
        self.check_len("constraint", coeffs.len())?;
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        Ok(self)
    }

    pub fn maximize(&mut self, objective: Vec<Rational>) -> Result<&mut Self, LpError> {
        self.check_len("objective", objective.len())?;
        self.objective = Some(objective);
        Ok(self)
    }

    fn check_len(&self, what: &'static str, found: usize) -> Result<(), LpError> {
        if found != self.num_vars {
            return Err(LpError::DimensionMismatch {
                what,
                expected: self.num_vars,
                found,
            });
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), LpError> {
        self.check_len("nonnegativity mask", self.nonneg.len())?;
        for c in &self.constraints {
            self.check_len("constraint", c.coeffs.len())?;
        }
        if let Some(obj) = &self.objective {
            self.check_len("objective", obj.len())?;
        }
        Ok(())
    }

    /// Every constraint and sign restriction holds at `point`, exactly.
    pub fn is_satisfied_by(&self, point: &[Rational]) -> bool {
        point.len() == self.num_vars
            && self
                .nonneg
                .iter()
                .zip(point)
                .all(|(&nn, x)| !nn || !x.is_negative())
            && self.constraints.iter().all(|c| c.is_satisfied_by(point))
    }

    pub fn objective_value(&self, point: &[Rational]) -> Option<Rational> {
        self.objective
            .as_ref()
            .map(|obj| obj.iter().zip(point).map(|(c, x)| c * x).sum())
    }

    pub fn solve(&self) -> Result<LpOutcome, LpError> {
        self.validate()?;
        Ok(Simplex::build(self).run(self))
    }
}

/// Column layout of the standard-form program.
struct Layout {
    /// For each original variable its positive column and, for free
    /// variables, the column of its negative part.
    columns: Vec<(usize, Option<usize>)>,
    first_artificial: usize,
    width: usize,
}

struct Simplex {
    layout: Layout,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    reduced: Vec<Rational>,
    neg_value: Rational,
    enterable: Vec<bool>,
}

impl Simplex {
    fn build(lp: &LinearProgram) -> Self {
        let mut columns = Vec::with_capacity(lp.num_vars);
        let mut next = 0;
        for &nn in &lp.nonneg {
            if nn {
                columns.push((next, None));
                next += 1;
            } else {
                columns.push((next, Some(next + 1)));
                next += 2;
            }
        }
        let structural = next;

        // Normalise right-hand sides to be nonnegative.
        let normalised: Vec<(Vec<Rational>, Relation, Rational)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let flipped = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Eq => Relation::Eq,
                        Relation::Ge => Relation::Le,
                    };
                    (c.coeffs.iter().map(|a| -a).collect(), flipped, -&c.rhs)
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs.clone())
                }
            })
            .collect();

        let slack_count = normalised
            .iter()
            .filter(|(_, rel, _)| *rel != Relation::Eq)
            .count();
        let artificial_count = normalised
            .iter()
            .filter(|(_, rel, _)| *rel != Relation::Le)
            .count();
        let first_slack = structural;
        let first_artificial = first_slack + slack_count;
        let width = first_artificial + artificial_count;

        let mut rows = Vec::with_capacity(normalised.len());
        let mut rhs = Vec::with_capacity(normalised.len());
        let mut basis = Vec::with_capacity(normalised.len());
        let (mut slack, mut artificial) = (first_slack, first_artificial);
        for (coeffs, relation, b) in normalised {
            let mut row = vec![Rational::zero(); width];
            for (var, a) in coeffs.into_iter().enumerate() {
                let (plus, minus) = columns[var];
                if let Some(minus) = minus {
                    row[minus] = -&a;
                }
                row[plus] = a;
            }
            match relation {
                Relation::Le => {
                    row[slack] = Rational::from_integer(1.into());
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = Rational::from_integer((-1).into());
                    row[artificial] = Rational::from_integer(1.into());
                    basis.push(artificial);
                    slack += 1;
                    artificial += 1;
                }
                Relation::Eq => {
                    row[artificial] = Rational::from_integer(1.into());
                    basis.push(artificial);
                    artificial += 1;
                }
            }
            rows.push(row);
            rhs.push(b);
        }

        Simplex {
            layout: Layout {
                columns,
                first_artificial,
                width,
            },
            rows,
            rhs,
            basis,
            reduced: vec![Rational::zero(); width],
            neg_value: Rational::zero(),
            enterable: vec![true; width],
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let width = self.layout.width;
        let first_artificial = self.layout.first_artificial;

        if first_artificial < width {
            let phase_one: Vec<Rational> = (0..width)
                .map(|j| {
                    if j >= first_artificial {
                        Rational::from_integer((-1).into())
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            self.price(&phase_one);
            if self.iterate().is_err() {
                unreachable!("phase one objective is bounded above by zero");
            }
            if self.neg_value.is_positive() {
                return LpOutcome::Infeasible;
            }
            self.expel_artificials();
        }
        for j in first_artificial..width {
            self.enterable[j] = false;
        }

        let Some(objective) = &lp.objective else {
            return LpOutcome::FeasiblePoint {
                point: self.point(),
            };
        };
        let mut costs = vec![Rational::zero(); width];
        for (var, c) in objective.iter().enumerate() {
            let (plus, minus) = self.layout.columns[var];
            costs[plus] = c.clone();
            if let Some(minus) = minus {
                costs[minus] = -c;
            }
        }
        self.price(&costs);
        match self.iterate() {
            Ok(()) => {
                let point = self.point();
                let value = lp.objective_value(&point).expect("objective present");
                LpOutcome::Optimal { point, value }
            }
            Err(entering) => LpOutcome::Unbounded {
                point: self.point(),
                ray: self.ray(entering),
            },
        }
    }

    /// Sets reduced costs for a new objective given the current basis.
    fn price(&mut self, costs: &[Rational]) {
        self.reduced = costs.to_vec();
        self.neg_value = Rational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (r, a) in self.reduced.iter_mut().zip(&self.rows[i]) {
                *r -= cb * a;
            }
            self.neg_value -= cb * &self.rhs[i];
        }
    }

    /// Pivots to optimality under Bland's rule. On unboundedness returns
    /// the entering column that has no blocking row.
    fn iterate(&mut self) -> Result<(), usize> {
        loop {
            let Some(entering) = (0..self.layout.width)
                .find(|&j| self.enterable[j] && self.reduced[j].is_positive())
            else {
                return Ok(());
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][entering];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leaving {
                    None => true,
                    Some((best, best_ratio)) => {
                        ratio < *best_ratio
                            || (ratio == *best_ratio && self.basis[i] < self.basis[*best])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            match leaving {
                Some((row, _)) => self.pivot(row, entering),
                None => return Err(entering),
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let pivot = self.rows[row][col].clone();
        for a in self.rows[row].iter_mut() {
            *a /= &pivot;
        }
        self.rhs[row] /= &pivot;
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for i in 0..self.rows.len() {
            if i == row {
                continue;
            }
            let factor = self.rows[i][col].clone();
            if factor.is_zero() {
                continue;
            }
            for (a, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *a -= &factor * p;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        let factor = self.reduced[col].clone();
        if !factor.is_zero() {
            for (r, p) in self.reduced.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *r -= &factor * p;
                }
            }
            self.neg_value -= &factor * &pivot_rhs;
        }
        self.basis[row] = col;
    }

    /// After a successful phase one every artificial still in the basis sits
    /// at zero. Pivot each out on any real column; rows with none are
    /// redundant and dropped.
    fn expel_artificials(&mut self) {
        let first_artificial = self.layout.first_artificial;
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < first_artificial {
                i += 1;
                continue;
            }
            match (0..first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.rhs.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }

    fn column_values(&self) -> Vec<Rational> {
        let mut values = vec![Rational::zero(); self.layout.width];
        for (i, &b) in self.basis.iter().enumerate() {
            values[b] = self.rhs[i].clone();
        }
        values
    }

    fn to_original(&self, values: &[Rational]) -> Vec<Rational> {
        self.layout
            .columns
            .iter()
            .map(|&(plus, minus)| match minus {
                Some(minus) => &values[plus] - &values[minus],
                None => values[plus].clone(),
            })
            .collect()
    }

    fn point(&self) -> Vec<Rational> {
        self.to_original(&self.column_values())
    }

    fn ray(&self, entering: usize) -> Vec<Rational> {
        let mut direction = vec![Rational::zero(); self.layout.width];
        direction[entering] = Rational::from_integer(1.into());
        for (i, &b) in self.basis.iter().enumerate() {
            direction[b] = -&self.rows[i][entering];
        }
        self.to_original(&direction)
    }
}
