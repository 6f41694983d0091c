//! Inference sets and their closures relative to a bounded [`Universe`].
//!
//! Every closure here is computed inside a finite universe: cut sets, premise
//! sets and substitution images must all be universe members. Results are
//! exact for that universe and approximate the unrestricted operators.

mod laws;
mod relation;
mod saturate;
mod tarski;
mod universe;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{parse_inference, Inference};

pub use laws::{check_operator_laws, check_relation_laws, LawFailure, LawReport, LAWS};
pub use relation::Relation;
pub use tarski::SUBSTITUTION_WORK_CAP;
pub use universe::{inference_count, Universe, UniverseSpec, DEFAULT_INFERENCE_CAP};

/// A finite, deduplicated set of inferences in canonical order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InferenceSet {
    members: BTreeSet<Inference>,
}

impl InferenceSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, inf: Inference) -> bool {
        self.members.insert(inf)
    }

    pub fn contains(&self, inf: &Inference) -> bool {
        self.members.contains(inf)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Inference> {
        self.members.iter()
    }

    pub fn union(&self, other: &InferenceSet) -> InferenceSet {
        self.members.union(&other.members).cloned().collect()
    }

    pub fn intersection(&self, other: &InferenceSet) -> InferenceSet {
        self.members.intersection(&other.members).cloned().collect()
    }

    pub fn difference(&self, other: &InferenceSet) -> InferenceSet {
        self.members.difference(&other.members).cloned().collect()
    }

    pub fn is_subset(&self, other: &InferenceSet) -> bool {
        self.members.is_subset(&other.members)
    }
}

impl FromIterator<Inference> for InferenceSet {
    fn from_iter<I: IntoIterator<Item = Inference>>(iter: I) -> Self {
        InferenceSet {
            members: iter.into_iter().collect(),
        }
    }
}

impl IntoIterator for InferenceSet {
    type Item = Inference;
    type IntoIter = std::collections::btree_set::IntoIter<Inference>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.into_iter()
    }
}

impl<'a> IntoIterator for &'a InferenceSet {
    type Item = &'a Inference;
    type IntoIter = std::collections::btree_set::Iter<'a, Inference>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

impl fmt::Display for InferenceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for inf in &self.members {
            writeln!(f, "{inf}")?;
        }
        Ok(())
    }
}

/// Contents of an inference-set file: an optional universe header and the
/// listed inferences.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SetFile {
    pub universe: Option<UniverseSpec>,
    pub set: InferenceSet,
}

impl SetFile {
    /// One inference per line, `#` starts a comment, and a line beginning
    /// with `atoms=` is the universe header.
    pub fn parse(text: &str) -> Result<SetFile> {
        let mut out = SetFile::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with("atoms=") || line.starts_with("atoms =") {
                if out.universe.is_some() {
                    return Err(Error::SetFormat {
                        line: line_no,
                        message: "second universe header".into(),
                    });
                }
                let spec = line.parse().map_err(|e: Error| Error::SetFormat {
                    line: line_no,
                    message: e.to_string(),
                })?;
                out.universe = Some(spec);
                continue;
            }
            let inf = parse_inference(line).map_err(|e| Error::SetFormat {
                line: line_no,
                message: e.to_string(),
            })?;
            out.set.insert(inf);
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(u) = &self.universe {
            s.push_str(&u.to_string());
            s.push('\n');
        }
        s.push_str(&self.set.to_string());
        s
    }
}

/// Least superset of `base` closed under cut within `u`.
pub fn transitive_closure(base: &InferenceSet, u: &Universe) -> Result<InferenceSet> {
    Ok(Relation::from_set(u, base)?.transitive_closure(u).to_set(u))
}

/// Greatest subset of `base` whose complement in `u` is closed under cut.
pub fn dual_transitive_closure(base: &InferenceSet, u: &Universe) -> Result<InferenceSet> {
    Ok(Relation::from_set(u, base)?.dual_transitive_closure(u).to_set(u))
}

/// Least superset of `base` closed under reflexivity, monotonicity, cut and
/// universe-preserving substitution.
pub fn tarskian_closure(base: &InferenceSet, u: &Universe) -> Result<InferenceSet> {
    Ok(Relation::from_set(u, base)?.tarskian_closure(u)?.to_set(u))
}

impl Relation {
    pub fn transitive_closure(&self, u: &Universe) -> Relation {
        let mut r = self.clone();
        saturate::saturate(&mut r, u, None);
        r
    }

    /// Same result as [`Relation::transitive_closure`]; rows are visited in
    /// the given order of premise-set ranks.
    pub fn transitive_closure_in_order(&self, u: &Universe, order: &[usize]) -> Relation {
        let mut r = self.clone();
        saturate::saturate(&mut r, u, Some(order));
        r
    }

    pub fn dual_transitive_closure(&self, u: &Universe) -> Relation {
        self.complement().transitive_closure(u).complement()
    }

    pub fn tarskian_closure(&self, u: &Universe) -> Result<Relation> {
        tarski::tarskian_closure(self, u)
    }

    /// True if no cut step within `u` leads outside the relation.
    pub fn is_transitively_closed(&self, u: &Universe) -> bool {
        self.transitive_closure(u) == *self
    }

    pub fn is_tarskian_closed(&self, u: &Universe) -> Result<bool> {
        Ok(self.tarskian_closure(u)? == *self)
    }
}
