use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{enumerate_formulas, is_identifier, Formula, Inference};
use crate::semantics::{all_valuations, Logic, LogicSpec, Program, DEFAULT_ATOM_CAP};

use super::relation::{self, Relation};
use super::InferenceSet;

/// Largest number of inferences a universe may expose.
pub const DEFAULT_INFERENCE_CAP: u128 = 20_000_000;

/// Parameters of a generated universe, as written in set-file headers:
/// `atoms=p,q; depth=1; cap=2; reserve=r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniverseSpec {
    pub atoms: Vec<String>,
    pub depth: usize,
    pub cap: usize,
    pub reserve: Vec<String>,
}

impl Default for UniverseSpec {
    fn default() -> Self {
        UniverseSpec {
            atoms: vec!["p".into(), "q".into()],
            depth: 1,
            cap: 2,
            reserve: vec!["r".into()],
        }
    }
}

impl UniverseSpec {
    pub fn build(&self) -> Result<Universe> {
        Universe::new(&self.atoms, &self.reserve, self.depth, self.cap)
    }
}

impl fmt::Display for UniverseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "atoms={}; depth={}; cap={}; reserve={}",
            self.atoms.join(","),
            self.depth,
            self.cap,
            self.reserve.join(",")
        )
    }
}

impl std::str::FromStr for UniverseSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut atoms = None;
        let mut depth = None;
        let mut cap = None;
        let mut reserve = Vec::new();
        let list = |v: &str| -> Vec<String> {
            v.split(',')
                .map(str::trim)
                .filter(|a| !a.is_empty())
                .map(String::from)
                .collect()
        };
        let number = |key: &str, v: &str| -> Result<usize> {
            v.trim()
                .parse()
                .map_err(|_| Error::Universe(format!("`{key}` expects a number, got `{}`", v.trim())))
        };
        for field in s.split(';').map(str::trim).filter(|f| !f.is_empty()) {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Universe(format!("expected key=value, got `{field}`")))?;
            match key.trim() {
                "atoms" => atoms = Some(list(value)),
                "depth" => depth = Some(number("depth", value)?),
                "cap" => cap = Some(number("cap", value)?),
                "reserve" => reserve = list(value),
                other => return Err(Error::Universe(format!("unknown key `{other}`"))),
            }
        }
        Ok(UniverseSpec {
            atoms: atoms.ok_or_else(|| Error::Universe("missing `atoms`".into()))?,
            depth: depth.ok_or_else(|| Error::Universe("missing `depth`".into()))?,
            cap: cap.ok_or_else(|| Error::Universe("missing `cap`".into()))?,
            reserve,
        })
    }
}

/// A finite carrier for closure computations: a formula list, a premise-size
/// cap, and the atoms reserved as fresh.
///
/// Premise sets are ranked by size and then colexicographically over formula
/// positions, so rank 0 is the empty set and ranks `1..=n` are singletons.
#[derive(Debug, Clone)]
pub struct Universe {
    formulas: Vec<Formula>,
    index: HashMap<Formula, u32>,
    atoms: Vec<String>,
    reserve: BTreeSet<String>,
    cap: usize,
    binom: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    sets: Vec<Vec<u32>>,
    uses_reserve: Vec<bool>,
}

impl Universe {
    /// All formulas over `atoms ∪ reserve` up to `depth`.
    pub fn new<S: AsRef<str>>(atoms: &[S], reserve: &[S], depth: usize, cap: usize) -> Result<Self> {
        let atoms: BTreeSet<String> = atoms.iter().map(|a| a.as_ref().to_string()).collect();
        let reserve: BTreeSet<String> = reserve.iter().map(|a| a.as_ref().to_string()).collect();
        if let Some(a) = atoms.intersection(&reserve).next() {
            return Err(Error::Universe(format!("`{a}` is both an ordinary and a reserve atom")));
        }
        for a in atoms.iter().chain(&reserve) {
            if !is_identifier(a) {
                return Err(Error::Universe(format!("`{a}` is not a valid atom name")));
            }
        }
        if atoms.is_empty() && reserve.is_empty() {
            return Err(Error::Universe("no atoms".into()));
        }
        let formulas = enumerate_formulas(atoms.iter().chain(&reserve).cloned(), depth)?;
        Self::from_formulas(formulas, reserve, cap)
    }

    /// An explicit formula list; duplicates are dropped, first occurrence
    /// kept.
    pub fn from_formulas(
        formulas: impl IntoIterator<Item = Formula>,
        reserve: impl IntoIterator<Item = String>,
        cap: usize,
    ) -> Result<Self> {
        let mut list = Vec::new();
        let mut index = HashMap::new();
        for f in formulas {
            if !index.contains_key(&f) {
                index.insert(f.clone(), list.len() as u32);
                list.push(f);
            }
        }
        if list.is_empty() {
            return Err(Error::Universe("the formula set is empty".into()));
        }
        if cap == 0 {
            return Err(Error::Universe("premise cap must be at least 1".into()));
        }
        let atoms: Vec<String> = crate::formula::atoms_of(&list).into_iter().collect();
        let reserve: BTreeSet<String> = reserve.into_iter().collect();
        if let Some(r) = reserve.iter().find(|r| !atoms.contains(r)) {
            return Err(Error::Universe(format!("reserve atom `{r}` does not occur in the formulas")));
        }

        let n = list.len();
        let cap = cap.min(n);
        let count = inference_count(n as u128, cap);
        if count > DEFAULT_INFERENCE_CAP {
            return Err(Error::Resource {
                what: "universe inferences",
                count,
                cap: DEFAULT_INFERENCE_CAP,
            });
        }

        let binom = binomials(n, cap);
        let mut offsets = vec![0usize; cap + 2];
        for j in 0..=cap {
            offsets[j + 1] = offsets[j] + binom[n][j];
        }
        let mut sets = vec![Vec::new(); offsets[cap + 1]];
        let mut combo = Vec::with_capacity(cap);
        fill_sets(n as u32, cap, 0, &mut combo, &binom, &offsets, &mut sets);

        let uses_reserve = list
            .iter()
            .map(|f| f.atoms().iter().any(|a| reserve.contains(a)))
            .collect();
        Ok(Universe {
            formulas: list,
            index,
            atoms,
            reserve,
            cap,
            binom,
            offsets,
            sets,
            uses_reserve,
        })
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn reserve(&self) -> &BTreeSet<String> {
        &self.reserve
    }

    pub fn set_count(&self) -> usize {
        self.sets.len()
    }

    pub fn inference_count(&self) -> usize {
        self.sets.len() * self.formulas.len()
    }

    pub fn formula_index(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).map(|&i| i as usize)
    }

    pub fn formula(&self, i: usize) -> &Formula {
        &self.formulas[i]
    }

    /// Members of the premise set with the given rank, ascending.
    pub fn set(&self, rank: usize) -> &[u32] {
        &self.sets[rank]
    }

    /// Rank of a strictly ascending list of formula positions.
    pub fn rank(&self, sorted: &[u32]) -> usize {
        debug_assert!(sorted.len() <= self.cap);
        let mut r = self.offsets[sorted.len()];
        for (i, &c) in sorted.iter().enumerate() {
            r += self.binom[c as usize][i + 1];
        }
        r
    }

    pub(crate) fn singleton_rank(&self, f: usize) -> usize {
        1 + f
    }

    pub(crate) fn pair_rank(&self, a: usize, b: usize) -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.offsets[2] + a + self.binom[b][2]
    }

    pub fn premise_rank(&self, premises: &BTreeSet<Formula>) -> Option<usize> {
        if premises.len() > self.cap {
            return None;
        }
        let mut idx: Vec<u32> = premises
            .iter()
            .map(|p| self.index.get(p).copied())
            .collect::<Option<_>>()?;
        idx.sort_unstable();
        Some(self.rank(&idx))
    }

    /// Position of an inference as `(premise rank, conclusion index)`.
    pub fn locate(&self, inf: &Inference) -> Option<(usize, usize)> {
        Some((self.premise_rank(&inf.premises)?, self.formula_index(&inf.conclusion)?))
    }

    pub fn contains(&self, inf: &Inference) -> bool {
        self.locate(inf).is_some()
    }

    pub fn inference(&self, rank: usize, conclusion: usize) -> Inference {
        Inference::new(
            self.sets[rank].iter().map(|&i| self.formulas[i as usize].clone()),
            self.formulas[conclusion].clone(),
        )
    }

    /// True if the premise set or the conclusion mentions a reserve atom.
    pub fn uses_reserve(&self, rank: usize, conclusion: usize) -> bool {
        self.uses_reserve[conclusion] || self.sets[rank].iter().any(|&i| self.uses_reserve[i as usize])
    }

    pub fn universe_inferences(&self) -> InferenceSet {
        Relation::full(self).to_set(self)
    }

    /// Inferences that avoid every reserve atom.
    pub fn reserve_free(&self) -> Relation {
        let mut r = Relation::empty(self);
        for g in 0..self.set_count() {
            if self.sets[g].iter().any(|&i| self.uses_reserve[i as usize]) {
                continue;
            }
            for f in 0..self.len() {
                if !self.uses_reserve[f] {
                    r.insert(g, f);
                }
            }
        }
        r
    }

    /// The universe inferences valid in `logic`.
    pub fn valid(&self, logic: &Logic) -> Result<Relation> {
        match logic {
            Logic::Spec(l) => {
                let m = self.masks(l)?;
                let mut r = Relation::empty(self);
                let mut acc = vec![0u64; m.words];
                for g in 0..self.set_count() {
                    m.premise_mask(&self.sets[g], &mut acc);
                    let row = r.row_mut(g);
                    for f in 0..self.len() {
                        if relation::is_subset(&acc, m.conclusion(f)) {
                            relation::set_bit(row, f);
                        }
                    }
                }
                Ok(r)
            }
            Logic::Meet(a, b) => Ok(self.valid(a)?.intersection(&self.valid(b)?)),
        }
    }

    /// The universe inferences whose premise set is an antitheorem of
    /// `logic` or whose conclusion is one of its theorems.
    pub fn star(&self, logic: &Logic) -> Result<Relation> {
        let (anti, theorems) = self.star_parts(logic)?;
        let mut r = Relation::empty(self);
        for (g, &is_anti) in anti.iter().enumerate() {
            if is_anti {
                r.row_mut(g).iter_mut().for_each(|w| *w = !0);
                r.trim_row(g);
            } else {
                r.row_mut(g).copy_from_slice(&theorems);
            }
        }
        Ok(r)
    }

    fn star_parts(&self, logic: &Logic) -> Result<(Vec<bool>, Vec<u64>)> {
        match logic {
            Logic::Spec(l) => {
                let m = self.masks(l)?;
                let mut acc = vec![0u64; m.words];
                let anti = (0..self.set_count())
                    .map(|g| {
                        m.premise_mask(&self.sets[g], &mut acc);
                        acc.iter().all(|&w| w == 0)
                    })
                    .collect();
                let mut theorems = vec![0u64; relation::words_for(self.len())];
                for f in 0..self.len() {
                    if m.conclusion(f) == m.all.as_slice() {
                        relation::set_bit(&mut theorems, f);
                    }
                }
                Ok((anti, theorems))
            }
            Logic::Meet(a, b) => {
                let (aa, at) = self.star_parts(a)?;
                let (ba, bt) = self.star_parts(b)?;
                let anti = aa.iter().zip(&ba).map(|(x, y)| *x && *y).collect();
                let theorems = at.iter().zip(&bt).map(|(x, y)| x & y).collect();
                Ok((anti, theorems))
            }
        }
    }

    /// For each formula, the valuations (over the universe atoms) at which it
    /// meets the premise and the conclusion standard.
    fn masks(&self, l: &LogicSpec) -> Result<Masks> {
        if self.atoms.len() > DEFAULT_ATOM_CAP {
            return Err(Error::Resource {
                what: "atoms in universe valuation table",
                count: self.atoms.len() as u128,
                cap: DEFAULT_ATOM_CAP as u128,
            });
        }
        let vals = all_valuations(self.atoms.len());
        let words = relation::words_for(vals.len());
        let mut premise = vec![0u64; words * self.len()];
        let mut conclusion = vec![0u64; words * self.len()];
        let mut stack = Vec::new();
        for (fi, f) in self.formulas.iter().enumerate() {
            let prog = Program::compile(f, &self.atoms);
            for (vi, v) in vals.iter().enumerate() {
                let x = prog.eval3(&l.scheme, v, &mut stack);
                if l.standard.premise.contains(x) {
                    relation::set_bit(&mut premise[fi * words..(fi + 1) * words], vi);
                }
                if l.standard.conclusion.contains(x) {
                    relation::set_bit(&mut conclusion[fi * words..(fi + 1) * words], vi);
                }
            }
        }
        let mut all = vec![0u64; words];
        for vi in 0..vals.len() {
            relation::set_bit(&mut all, vi);
        }
        Ok(Masks {
            words,
            premise,
            conclusion,
            all,
        })
    }
}

struct Masks {
    words: usize,
    premise: Vec<u64>,
    conclusion: Vec<u64>,
    all: Vec<u64>,
}

impl Masks {
    fn conclusion(&self, f: usize) -> &[u64] {
        &self.conclusion[f * self.words..(f + 1) * self.words]
    }

    fn premise_mask(&self, set: &[u32], out: &mut [u64]) {
        out.copy_from_slice(&self.all);
        for &p in set {
            let p = p as usize;
            for (o, m) in out.iter_mut().zip(&self.premise[p * self.words..(p + 1) * self.words]) {
                *o &= m;
            }
        }
    }
}

/// `n · Σ_{j ≤ k} C(n, j)`, saturating.
pub fn inference_count(n: u128, k: usize) -> u128 {
    let mut sets: u128 = 0;
    let mut c: u128 = 1;
    for j in 0..=k as u128 {
        if j > n {
            break;
        }
        sets = sets.saturating_add(c);
        c = c.saturating_mul(n - j) / (j + 1);
    }
    sets.saturating_mul(n)
}

fn binomials(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut b = vec![vec![0usize; k + 1]; n + 1];
    for i in 0..=n {
        b[i][0] = 1;
        for j in 1..=k.min(i) {
            b[i][j] = b[i - 1][j - 1] + if j < i { b[i - 1][j] } else { 0 };
        }
    }
    b
}

fn fill_sets(
    n: u32,
    cap: usize,
    start: u32,
    combo: &mut Vec<u32>,
    binom: &[Vec<usize>],
    offsets: &[usize],
    sets: &mut [Vec<u32>],
) {
    let mut r = offsets[combo.len()];
    for (i, &c) in combo.iter().enumerate() {
        r += binom[c as usize][i + 1];
    }
    sets[r] = combo.clone();
    if combo.len() == cap {
        return;
    }
    for next in start..n {
        combo.push(next);
        fill_sets(n, cap, next + 1, combo, binom, offsets, sets);
        combo.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn inference_counts() {
        let one = Universe::from_formulas([parse("p").unwrap()], [], 1).unwrap();
        assert_eq!(one.inference_count(), 2);
        let pq = [parse("p").unwrap(), parse("q").unwrap()];
        assert_eq!(Universe::from_formulas(pq.clone(), [], 1).unwrap().inference_count(), 6);
        assert_eq!(Universe::from_formulas(pq, [], 2).unwrap().inference_count(), 8);
        assert_eq!(inference_count(24, 2), 24 * 301);
        assert_eq!(inference_count(302, 2), 302 * 45754);
    }

    #[test]
    fn ranks_are_a_bijection() {
        let u = Universe::new(&["p", "q"], &["r"], 1, 3).unwrap();
        assert_eq!(u.len(), 24);
        assert_eq!(u.set_count(), 1 + 24 + 276 + 2024);
        for g in 0..u.set_count() {
            let s = u.set(g);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(u.rank(s), g);
        }
        assert_eq!(u.set(0), &[] as &[u32]);
        for f in 0..u.len() {
            assert_eq!(u.set(u.singleton_rank(f)), &[f as u32]);
        }
        assert_eq!(u.set(u.pair_rank(7, 3)), &[3, 7]);
    }

    #[test]
    fn empty_and_malformed_universes_are_rejected() {
        assert!(matches!(
            Universe::from_formulas(Vec::new(), Vec::new(), 1),
            Err(Error::Universe(_))
        ));
        assert!(Universe::new(&["p"], &["p"], 1, 1).is_err());
        assert!(Universe::new::<&str>(&[], &[], 1, 1).is_err());
        assert!(Universe::from_formulas([parse("p").unwrap()], ["r".to_string()], 1).is_err());
        assert!(Universe::from_formulas([parse("p").unwrap()], [], 0).is_err());
    }

    #[test]
    fn oversized_universes_hit_the_cap() {
        let err = Universe::new(&["p", "q"], &["r"], 2, 3).unwrap_err();
        assert!(matches!(err, Error::Resource { .. }));
    }

    #[test]
    fn spec_round_trip() {
        let spec: UniverseSpec = "atoms=p,q; depth=1; cap=2; reserve=r".parse().unwrap();
        assert_eq!(spec, UniverseSpec::default());
        assert_eq!(spec.to_string().parse::<UniverseSpec>().unwrap(), spec);
        assert!("atoms=p; depth=x; cap=1".parse::<UniverseSpec>().is_err());
        assert!("atoms=p; cap=1".parse::<UniverseSpec>().is_err());
        assert!("atoms=p; depth=1; cap=1; colour=red".parse::<UniverseSpec>().is_err());
    }

    #[test]
    fn reserve_tracking() {
        let u = UniverseSpec::default().build().unwrap();
        let inf = crate::formula::parse_inference("p => q | r").unwrap();
        let (g, f) = u.locate(&inf).unwrap();
        assert!(u.uses_reserve(g, f));
        let inf = crate::formula::parse_inference("p, ~q => q & p").unwrap();
        let (g, f) = u.locate(&inf).unwrap();
        assert!(!u.uses_reserve(g, f));
        assert!(u.reserve_free().contains(g, f));
        assert!(!u.contains(&crate::formula::parse_inference("~~p => p").unwrap()));
    }
}
