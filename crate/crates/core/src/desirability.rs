//! Finitely generated sets of desirable gambles `posi(L>0 ∪ G)`.
//!
//! Membership is decided in two branches. A strictly positive gamble is a
//! member outright. Anything else is a member iff some `λ >= 0` with
//! `Σλ > 0` has `Σ λ_j g_j <= u`; the remainder `u - Σ λ_j g_j` is then a
//! nonnegative gamble that can be absorbed into the strictly positive part
//! (or vanishes). This is the LP `max Σλ s.t. Σ λ_j g_j <= u, λ >= 0`,
//! where an unbounded optimum counts as positive.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::gambles::{Gamble, GambleError, GambleSet, Rational};
use crate::ratlp::{LinearProgram, LpOutcome, Relation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesirError {
    #[error(transparent)]
    Gamble(#[from] GambleError),
    #[error("the generated set of desirable gambles is incoherent")]
    Incoherent,
}

/// `Σ weights_j gens_j` over `dim` states.
pub fn combination(dim: usize, gens: &[Gamble], weights: &[Rational]) -> Gamble {
    let mut total = vec![Rational::zero(); dim];
    for (g, w) in gens.iter().zip(weights) {
        if w.is_zero() {
            continue;
        }
        for (t, v) in total.iter_mut().zip(g.values()) {
            *t += w * v;
        }
    }
    Gamble::new(total)
}

/// Weights on the generators witnessing `u ∈ posi(L>0 ∪ G)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeEvidence {
    pub weights: Vec<Rational>,
}

impl ConeEvidence {
    /// `u - Σ weights_j g_j`, the part carried by strictly positive gambles.
    pub fn residual(&self, gens: &[Gamble], u: &Gamble) -> Gamble {
        u - &combination(u.dim(), gens, &self.weights)
    }

    /// Re-checks the evidence by substitution.
    pub fn certifies(&self, gens: &[Gamble], u: &Gamble) -> bool {
        if self.weights.len() != gens.len() || self.weights.iter().any(Signed::is_negative) {
            return false;
        }
        let residual = self.residual(gens, u);
        let weighted = self.weights.iter().any(Signed::is_positive);
        residual.dominates(&Gamble::zero(u.dim())) && (weighted || !residual.is_zero())
    }
}

/// Outcome of a coherence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coherence {
    Coherent,
    /// Nonnegative weights summing to one whose combination is `<= 0`.
    Incoherent {
        weights: Vec<Rational>,
    },
}

/// The generators `G` of `posi(L>0 ∪ G)` over a space of `dim` states.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DesirGenerators {
    dim: usize,
    gens: Vec<Gamble>,
}

impl DesirGenerators {
    pub fn new<I: IntoIterator<Item = Gamble>>(dim: usize, gens: I) -> Result<Self, DesirError> {
        let set = GambleSet::new(gens)?;
        if let Some(found) = set.dim() {
            if found != dim {
                return Err(GambleError::DimensionMismatch {
                    expected: dim,
                    found,
                }
                .into());
            }
        }
        Ok(Self {
            dim,
            gens: set.into(),
        })
    }

    /// `posi(L>0)`, no extra generators.
    pub fn vacuous(dim: usize) -> Self {
        Self {
            dim,
            gens: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[Gamble] {
        &self.gens
    }

    fn check(&self, u: &Gamble) -> Result<(), DesirError> {
        if u.dim() != self.dim {
            return Err(GambleError::DimensionMismatch {
                expected: self.dim,
                found: u.dim(),
            }
            .into());
        }
        Ok(())
    }

    pub fn cone_contains(&self, u: &Gamble) -> Result<bool, DesirError> {
        Ok(self.membership(u)?.is_some())
    }

    /// Decides membership and returns generator weights when `u` is in.
    pub fn membership(&self, u: &Gamble) -> Result<Option<ConeEvidence>, DesirError> {
        self.check(u)?;
        if u.is_strictly_positive() {
            return Ok(Some(ConeEvidence {
                weights: vec![Rational::zero(); self.gens.len()],
            }));
        }
        let n = self.gens.len();
        let mut lp = LinearProgram::new(n);
        for state in 0..self.dim {
            let row = self
                .gens
                .iter()
                .map(|g| g.values()[state].clone())
                .collect();
            lp.constrain(row, Relation::Le, u.values()[state].clone())
                .expect("row width matches generator count");
        }
        lp.maximize(vec![Rational::one(); n])
            .expect("objective width matches generator count");
        let weights = match lp.solve().expect("well-formed program") {
            LpOutcome::Optimal { point, value } if value.is_positive() => point,
            LpOutcome::Unbounded { point, ray } => {
                point.iter().zip(&ray).map(|(p, r)| p + r).collect()
            }
            _ => return Ok(None),
        };
        let evidence = ConeEvidence { weights };
        debug_assert!(evidence.certifies(&self.gens, u));
        Ok(Some(evidence))
    }

    /// `0 ∉ posi(L>0 ∪ G)`, decided as infeasibility of
    /// `{μ >= 0, Σμ = 1, Σ μ_j g_j <= 0}`.
    pub fn coherence(&self) -> Coherence {
        let n = self.gens.len();
        let mut lp = LinearProgram::new(n);
        lp.constrain(vec![Rational::one(); n], Relation::Eq, Rational::one())
            .expect("row width matches generator count");
        for state in 0..self.dim {
            let row = self
                .gens
                .iter()
                .map(|g| g.values()[state].clone())
                .collect();
            lp.constrain(row, Relation::Le, Rational::zero())
                .expect("row width matches generator count");
        }
        match lp.solve().expect("well-formed program") {
            LpOutcome::Infeasible => Coherence::Coherent,
            outcome => Coherence::Incoherent {
                weights: outcome.point().expect("feasible outcome").to_vec(),
            },
        }
    }

    pub fn is_coherent(&self) -> bool {
        self.coherence() == Coherence::Coherent
    }

    /// `B ∈ K_D`, i.e. `B` meets the cone. Only defined for coherent cones.
    pub fn kd_contains(&self, set: &GambleSet) -> Result<bool, DesirError> {
        if !self.is_coherent() {
            return Err(DesirError::Incoherent);
        }
        for b in set {
            if self.cone_contains(b)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// First member of `set`, in canonical order, that lies in the cone.
    pub fn first_member_in(
        &self,
        set: &GambleSet,
    ) -> Result<Option<(usize, ConeEvidence)>, DesirError> {
        for (i, b) in set.iter().enumerate() {
            if let Some(evidence) = self.membership(b)? {
                return Ok(Some((i, evidence)));
            }
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gambles::integer;

    fn g(values: &[i64]) -> Gamble {
        Gamble::from_ints(values)
    }

    fn gens(rows: &[&[i64]]) -> DesirGenerators {
        DesirGenerators::new(
            rows.first().map_or(2, |r| r.len()),
            rows.iter().map(|r| g(r)),
        )
        .unwrap()
    }

    #[test]
    fn membership_examples() {
        assert!(gens(&[]).cone_contains(&g(&[1, 0])).unwrap());
        let d = gens(&[&[1, -1]]);
        assert!(d.cone_contains(&g(&[2, -1])).unwrap());
        assert!(!d.cone_contains(&g(&[1, -2])).unwrap());
        assert!(!d.cone_contains(&g(&[0, 0])).unwrap());
    }

    #[test]
    fn membership_evidence_is_checkable() {
        let d = gens(&[&[1, -1]]);
        let u = g(&[2, -1]);
        let ev = d.membership(&u).unwrap().unwrap();
        assert!(ev.certifies(d.gens(), &u));
        // Any λ in [1, 2] works; the program maximizes Σλ.
        assert_eq!(ev.weights, vec![integer(2)]);
        assert_eq!(ev.residual(d.gens(), &u), g(&[0, 1]));
    }

    #[test]
    fn unbounded_membership_yields_positive_weights() {
        // λ(-1, -1) <= 0 for every λ >= 0, so the program is unbounded.
        let d = gens(&[&[-1, -1]]);
        let u = g(&[0, 0]);
        let ev = d.membership(&u).unwrap().unwrap();
        assert!(ev.certifies(d.gens(), &u));
        assert!(ev.weights[0].is_positive());
    }

    #[test]
    fn coherence_examples() {
        assert!(gens(&[]).is_coherent());
        assert!(!gens(&[&[-1, -1]]).is_coherent());
        let d = gens(&[&[1, -1], &[-1, 1]]);
        let Coherence::Incoherent { weights } = d.coherence() else {
            panic!("expected incoherent");
        };
        let total = combination(2, d.gens(), &weights);
        assert!(total.is_nonpositive());
        assert_eq!(weights.iter().sum::<Rational>(), integer(1));
    }

    #[test]
    fn kd_examples() {
        let d = gens(&[&[1, -1]]);
        let b = GambleSet::from_ints(&[&[-1, 1], &[2, -1]]).unwrap();
        assert!(d.kd_contains(&b).unwrap());
        assert!(!gens(&[]).kd_contains(&GambleSet::empty()).unwrap());
        let b = GambleSet::from_ints(&[&[-1, 1]]).unwrap();
        assert!(!d.kd_contains(&b).unwrap());
        assert_eq!(
            gens(&[&[-1, -1]]).kd_contains(&b),
            Err(DesirError::Incoherent)
        );
    }

    #[test]
    fn dimension_mismatch() {
        let d = gens(&[&[1, -1]]);
        assert!(matches!(
            d.cone_contains(&g(&[1, 0, 0])),
            Err(DesirError::Gamble(GambleError::DimensionMismatch { .. }))
        ));
        assert!(DesirGenerators::new(3, [g(&[1, 0])]).is_err());
    }
}
