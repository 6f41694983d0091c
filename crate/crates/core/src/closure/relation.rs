use crate::error::{Error, Result};
use crate::formula::Inference;

use super::universe::Universe;
use super::InferenceSet;

pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

pub(crate) fn set_bit(words: &mut [u64], i: usize) {
    words[i / 64] |= 1 << (i % 64);
}

pub(crate) fn get_bit(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (i % 64) & 1 == 1
}

pub(crate) fn is_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

pub(crate) fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

pub(crate) fn or_into(acc: &mut [u64], b: &[u64]) {
    for (x, y) in acc.iter_mut().zip(b) {
        *x |= y;
    }
}

pub(crate) fn count(a: &[u64]) -> usize {
    a.iter().map(|w| w.count_ones() as usize).sum()
}

pub(crate) fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * 64 + b)
        })
    })
}

fn transpose64(a: &mut [u64; 64]) {
    let mut j = 32;
    let mut m: u64 = 0x0000_0000_FFFF_FFFF;
    while j != 0 {
        let mut k = 0;
        while k < 64 {
            let t = ((a[k] >> j) ^ a[k + j]) & m;
            a[k] ^= t << j;
            a[k + j] ^= t;
            k = (k + j + 1) & !j;
        }
        j >>= 1;
        m ^= m << j;
    }
}

/// Transposes a bit matrix of `rows` rows, each `words_for(cols)` words, into
/// `cols` rows of `words_for(rows)` words.
pub(crate) fn transpose(src: &[u64], rows: usize, cols: usize) -> Vec<u64> {
    let (ws, wd) = (words_for(cols), words_for(rows));
    let mut dst = vec![0u64; cols * wd];
    let mut block = [0u64; 64];
    for rb in 0..wd {
        for cb in 0..ws {
            for (i, b) in block.iter_mut().enumerate() {
                let r = rb * 64 + i;
                *b = if r < rows { src[r * ws + cb] } else { 0 };
            }
            transpose64(&mut block);
            for (i, &b) in block.iter().enumerate() {
                let c = cb * 64 + i;
                if c < cols {
                    dst[c * wd + rb] = b;
                }
            }
        }
    }
    dst
}

/// A subset of a universe's inferences, stored as one formula bitset per
/// premise-set rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub(crate) words: usize,
    pub(crate) n_formulas: usize,
    pub(crate) bits: Vec<u64>,
}

impl Relation {
    pub fn empty(u: &Universe) -> Self {
        let words = words_for(u.len());
        Relation {
            words,
            n_formulas: u.len(),
            bits: vec![0; words * u.set_count()],
        }
    }

    pub fn full(u: &Universe) -> Self {
        Self::empty(u).complement()
    }

    /// Fails if some member lies outside the universe.
    pub fn from_set(u: &Universe, set: &InferenceSet) -> Result<Self> {
        let mut r = Self::empty(u);
        for inf in set.iter() {
            let (g, f) = u.locate(inf).ok_or_else(|| {
                Error::Universe(format!("`{inf}` is not expressible in the universe"))
            })?;
            r.insert(g, f);
        }
        Ok(r)
    }

    /// `members` draws of a uniformly random universe inference; repeats
    /// collapse.
    pub fn sample(u: &Universe, members: usize, rng: &mut impl rand::Rng) -> Self {
        let mut r = Self::empty(u);
        for _ in 0..members {
            r.insert(rng.gen_range(0..u.set_count()), rng.gen_range(0..u.len()));
        }
        r
    }

    pub fn to_set(&self, u: &Universe) -> InferenceSet {
        self.iter().map(|(g, f)| u.inference(g, f)).collect()
    }

    pub fn set_count(&self) -> usize {
        self.bits.len() / self.words.max(1)
    }

    pub fn row(&self, g: usize) -> &[u64] {
        &self.bits[g * self.words..(g + 1) * self.words]
    }

    pub(crate) fn row_mut(&mut self, g: usize) -> &mut [u64] {
        &mut self.bits[g * self.words..(g + 1) * self.words]
    }

    pub(crate) fn trim_row(&mut self, g: usize) {
        let extra = self.words * 64 - self.n_formulas;
        if extra > 0 {
            let last = (g + 1) * self.words - 1;
            self.bits[last] &= !0u64 >> extra;
        }
    }

    pub fn contains(&self, g: usize, f: usize) -> bool {
        get_bit(self.row(g), f)
    }

    pub fn contains_inference(&self, u: &Universe, inf: &Inference) -> bool {
        u.locate(inf).is_some_and(|(g, f)| self.contains(g, f))
    }

    pub fn insert(&mut self, g: usize, f: usize) {
        set_bit(self.row_mut(g), f);
    }

    pub fn len(&self) -> usize {
        count(&self.bits)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Members as `(premise rank, conclusion index)`, rank-major.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.words;
        ones(&self.bits).map(move |i| (i / (w * 64), i % (w * 64)))
    }

    pub fn complement(&self) -> Relation {
        let mut r = self.clone();
        for w in &mut r.bits {
            *w = !*w;
        }
        for g in 0..r.set_count() {
            r.trim_row(g);
        }
        r
    }

    pub fn union(&self, other: &Relation) -> Relation {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Relation) -> Relation {
        self.zip(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Relation) -> Relation {
        self.zip(other, |a, b| a & !b)
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        is_subset(&self.bits, &other.bits)
    }

    /// First member of `self` missing from `other`.
    pub fn first_outside(&self, other: &Relation) -> Option<(usize, usize)> {
        self.difference(other).iter().next()
    }

    fn zip(&self, other: &Relation, op: impl Fn(u64, u64) -> u64) -> Relation {
        assert_eq!(self.bits.len(), other.bits.len(), "relations over different universes");
        Relation {
            words: self.words,
            n_formulas: self.n_formulas,
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| op(*a, *b)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::UniverseSpec;
    use crate::formula::parse_inference;

    #[test]
    fn set_round_trip_and_algebra() {
        let u = UniverseSpec::default().build().unwrap();
        let set: InferenceSet = ["p => q", "p, q => r", "=> p | q"]
            .iter()
            .map(|s| parse_inference(s).unwrap())
            .collect();
        let r = Relation::from_set(&u, &set).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.to_set(&u), set);
        let c = r.complement();
        assert_eq!(c.len(), u.inference_count() - 3);
        assert!(c.intersection(&r).is_empty());
        assert_eq!(c.union(&r), Relation::full(&u));
        assert_eq!(Relation::full(&u).difference(&c), r);
        assert!(r.is_subset(&Relation::full(&u)));
        assert!(!Relation::full(&u).is_subset(&r));

        let outside: InferenceSet = [parse_inference("~~p => p").unwrap()].into_iter().collect();
        assert!(Relation::from_set(&u, &outside).is_err());
    }

    #[test]
    fn transpose_matches_naive() {
        let (rows, cols) = (131, 70);
        let (ws, wd) = (words_for(cols), words_for(rows));
        let mut src = vec![0u64; rows * ws];
        let mut state = 11u64;
        for r in 0..rows {
            for c in 0..cols {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                if state >> 62 == 0 {
                    set_bit(&mut src[r * ws..(r + 1) * ws], c);
                }
            }
        }
        let dst = transpose(&src, rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                assert_eq!(get_bit(&src[r * ws..], c), get_bit(&dst[c * wd..], r));
            }
        }
        assert_eq!(transpose(&dst, cols, rows), src);
    }

    #[test]
    fn bit_helpers() {
        let mut w = vec![0u64; 3];
        for i in [0, 63, 64, 130] {
            set_bit(&mut w, i);
        }
        assert_eq!(ones(&w).collect::<Vec<_>>(), vec![0, 63, 64, 130]);
        assert_eq!(count(&w), 4);
        assert!(get_bit(&w, 130) && !get_bit(&w, 129));
    }
}
