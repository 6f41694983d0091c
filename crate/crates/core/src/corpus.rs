//! Inference corpora: an exhaustive small one and a seeded random one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::formula::{enumerate_formulas, Formula, Inference};

/// Shape of the random corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomCorpus {
    pub atoms: Vec<String>,
    pub max_depth: usize,
    pub max_premises: usize,
    /// Chance of stopping at an atom before the depth bound forces it.
    pub leaf_probability: f64,
    pub size: usize,
}

impl Default for RandomCorpus {
    fn default() -> Self {
        RandomCorpus {
            atoms: ["p", "q", "r"].map(String::from).to_vec(),
            max_depth: 3,
            max_premises: 3,
            leaf_probability: 0.3,
            size: 10_000,
        }
    }
}

impl RandomCorpus {
    pub fn with_size(mut self, size: usize) -> Self {
        self.size = size;
        self
    }

    /// Same seed, same corpus.
    pub fn generate(&self, seed: u64) -> Vec<Inference> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..self.size)
            .map(|_| {
                let n = rng.gen_range(0..=self.max_premises);
                let premises: Vec<Formula> = (0..n).map(|_| self.formula(&mut rng, self.max_depth)).collect();
                let conclusion = self.formula(&mut rng, self.max_depth);
                Inference::new(premises, conclusion)
            })
            .collect()
    }

    fn formula(&self, rng: &mut ChaCha8Rng, depth: usize) -> Formula {
        if depth == 0 || rng.gen_bool(self.leaf_probability) {
            return Formula::var(self.atoms[rng.gen_range(0..self.atoms.len())].clone());
        }
        match rng.gen_range(0..3) {
            0 => Formula::neg(self.formula(rng, depth - 1)),
            1 => Formula::and(self.formula(rng, depth - 1), self.formula(rng, depth - 1)),
            _ => Formula::or(self.formula(rng, depth - 1), self.formula(rng, depth - 1)),
        }
    }
}

/// Every inference over `atoms` with formulas of depth at most `depth` and at
/// most `max_premises` distinct premises, premise sets by size then
/// lexicographically by formula position.
pub fn exhaustive_corpus(atoms: &[&str], depth: usize, max_premises: usize) -> Result<Vec<Inference>> {
    let formulas = enumerate_formulas(atoms.iter().copied(), depth)?;
    let mut sets: Vec<Vec<usize>> = vec![vec![]];
    let mut frontier = sets.clone();
    for _ in 0..max_premises {
        let mut next = Vec::new();
        for s in &frontier {
            let from = s.last().map_or(0, |&l| l + 1);
            for i in from..formulas.len() {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        sets.extend(next.iter().cloned());
        frontier = next;
    }
    let mut out = Vec::with_capacity(sets.len() * formulas.len());
    for s in &sets {
        for c in &formulas {
            out.push(Inference::new(s.iter().map(|&i| formulas[i].clone()), c.clone()));
        }
    }
    Ok(out)
}

/// The exhaustive corpus over `{p, q}`, depth 1, at most two premises.
pub fn small_exhaustive_corpus() -> Vec<Inference> {
    exhaustive_corpus(&["p", "q"], 1, 2).expect("fixed small corpus")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn exhaustive_sizes() {
        let c = small_exhaustive_corpus();
        assert_eq!(c.len(), 948);
        let distinct: BTreeSet<&Inference> = c.iter().collect();
        assert_eq!(distinct.len(), 948);
        assert_eq!(exhaustive_corpus(&["p"], 0, 1).unwrap().len(), 2);
    }

    #[test]
    fn random_corpus_respects_bounds_and_seed() {
        let spec = RandomCorpus::default().with_size(2000);
        let a = spec.generate(42);
        assert_eq!(a, spec.generate(42));
        assert_ne!(a, spec.generate(43));
        assert_eq!(a.len(), 2000);
        let allowed: BTreeSet<String> = spec.atoms.iter().cloned().collect();
        for inf in &a {
            assert!(inf.premises.len() <= 3);
            assert!(inf.conclusion.depth() <= 3);
            assert!(inf.premises.iter().all(|f| f.depth() <= 3));
            assert!(inf.atoms().is_subset(&allowed));
        }
        assert!(a.iter().any(|i| i.premises.is_empty()));
        assert!(a.iter().any(|i| i.conclusion.depth() == 3));
    }
}
