//! Seeded generators for random micro-instances.
//!
//! Entries are rationals `p/q` with `p` in `[-4, 4]` and `q` in `[1, 4]`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::desirability::DesirGenerators;
use crate::gambles::{rational, Assessment, Gamble, GambleSet, Rational};

pub const DIMS: [usize; 3] = [2, 3, 4];

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn dim(&mut self) -> usize {
        *DIMS.choose(&mut self.rng).expect("non-empty")
    }

    pub fn rational(&mut self) -> Rational {
        rational(self.rng.gen_range(-4..=4), self.rng.gen_range(1..=4))
    }

    /// A rational in `[0, 4]`.
    pub fn nonneg_rational(&mut self) -> Rational {
        rational(self.rng.gen_range(0..=4), self.rng.gen_range(1..=4))
    }

    /// A rational in `(0, 4]`.
    pub fn positive_rational(&mut self) -> Rational {
        rational(self.rng.gen_range(1..=4), self.rng.gen_range(1..=4))
    }

    pub fn gamble(&mut self, dim: usize) -> Gamble {
        Gamble::new((0..dim).map(|_| self.rational()).collect())
    }

    pub fn nonneg_gamble(&mut self, dim: usize) -> Gamble {
        Gamble::new((0..dim).map(|_| self.nonneg_rational()).collect())
    }

    pub fn strictly_positive(&mut self, dim: usize) -> Gamble {
        let mut values: Vec<Rational> = (0..dim).map(|_| self.nonneg_rational()).collect();
        let bump = self.below(dim);
        values[bump] = self.positive_rational();
        Gamble::new(values)
    }

    pub fn nonpositive(&mut self, dim: usize) -> Gamble {
        Gamble::new((0..dim).map(|_| -self.nonneg_rational()).collect())
    }

    /// Entries in `{-1, 0, 1}`, so independent draws often coincide.
    pub fn coarse_gamble(&mut self, dim: usize) -> Gamble {
        Gamble::new(
            (0..dim)
                .map(|_| rational(self.rng.gen_range(-1..=1), 1))
                .collect(),
        )
    }

    /// A set of `min..=max` random gambles (fewer if duplicates collide).
    pub fn gamble_set(&mut self, dim: usize, min: usize, max: usize) -> GambleSet {
        let len = self.rng.gen_range(min..=max);
        GambleSet::new((0..len).map(|_| self.gamble(dim))).expect("uniform dimension")
    }

    /// Up to three non-empty sets of up to three gambles.
    pub fn assessment(&mut self, dim: usize) -> Assessment {
        let count = self.rng.gen_range(1..=3);
        Assessment::with_dim(dim, (0..count).map(|_| self.gamble_set(dim, 1, 3)))
            .expect("uniform dimension")
    }

    /// Up to three generators whose cone is coherent.
    pub fn coherent_generators(&mut self, dim: usize) -> DesirGenerators {
        loop {
            let count = self.rng.gen_range(0..=3);
            let gens = DesirGenerators::new(dim, (0..count).map(|_| self.gamble(dim)))
                .expect("uniform dimension");
            if gens.is_coherent() {
                return gens;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_streams_repeat() {
        let mut a = Sampler::new(7);
        let mut b = Sampler::new(7);
        for _ in 0..20 {
            let dim = a.dim();
            assert_eq!(dim, b.dim());
            assert_eq!(a.assessment(dim), b.assessment(dim));
        }
    }

    #[test]
    fn generators_respect_their_classes() {
        let mut s = Sampler::new(1);
        for _ in 0..200 {
            let dim = s.dim();
            assert!(s.strictly_positive(dim).is_strictly_positive());
            assert!(s.nonpositive(dim).is_nonpositive());
            let g = s.gamble(dim);
            for v in g.values() {
                assert!(v.numer().magnitude() <= &4u32.into());
                assert!(v.denom() <= &4.into());
            }
        }
    }
}
