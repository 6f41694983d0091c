//! Valuations, formula standards, and validity under a (scheme, standard) pair.
//!
//! Validity is decided by enumerating every valuation of the atoms that occur
//! in the inference; truth-functionality makes that sufficient. Valuations are
//! visited in canonical order: atoms sorted by name, the first atom most
//! significant, values ordered `0 < i < 1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{atoms_of, Formula, Inference};
use crate::scheme::{bnm_violation, Scheme, TruthValue, F, I, T};

pub const DEFAULT_ATOM_CAP: usize = 12;

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Valuation {
    assignment: BTreeMap<String, TruthValue>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, atom: impl Into<String>, v: TruthValue) -> Self {
        self.assignment.insert(atom.into(), v);
        self
    }

    pub fn set(&mut self, atom: impl Into<String>, v: TruthValue) {
        self.assignment.insert(atom.into(), v);
    }

    pub fn get(&self, atom: &str) -> Option<TruthValue> {
        self.assignment.get(atom).copied()
    }

    /// Every listed atom set to `i`.
    pub fn all_middle<'a>(atoms: impl IntoIterator<Item = &'a String>) -> Self {
        Valuation {
            assignment: atoms.into_iter().map(|a| (a.clone(), I)).collect(),
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.assignment.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, TruthValue)> {
        self.assignment.iter().map(|(k, v)| (k.as_str(), *v))
    }

    fn from_parts(atoms: &[String], values: &[TruthValue]) -> Self {
        Valuation {
            assignment: atoms.iter().cloned().zip(values.iter().copied()).collect(),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (a, v) in &self.assignment {
            if !first {
                f.write_str(", ")?;
            }
            write!(f, "{a}={v}")?;
            first = false;
        }
        Ok(())
    }
}

/// A set of designated values for judging one formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FormulaStandard {
    allowed: [bool; 3],
}

impl FormulaStandard {
    pub const STRICT: FormulaStandard = FormulaStandard {
        allowed: [false, false, true],
    };
    pub const TOLERANT: FormulaStandard = FormulaStandard {
        allowed: [false, true, true],
    };

    pub fn from_values(values: impl IntoIterator<Item = TruthValue>) -> Self {
        let mut allowed = [false; 3];
        for v in values {
            allowed[v.index()] = true;
        }
        FormulaStandard { allowed }
    }

    pub fn contains(self, v: TruthValue) -> bool {
        self.allowed[v.index()]
    }

    pub fn values(self) -> impl Iterator<Item = TruthValue> {
        TruthValue::ALL.into_iter().filter(move |v| self.contains(*v))
    }

    /// `s` or `t` for the two named standards, else the value list in braces.
    fn short(self) -> String {
        if self == Self::STRICT {
            "s".into()
        } else if self == Self::TOLERANT {
            "t".into()
        } else {
            let vals: Vec<&str> = self.values().map(TruthValue::symbol).collect();
            format!("{{{}}}", vals.join(","))
        }
    }

    /// `s`, `t`, or a string of value symbols such as `1i` or `01`.
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "s" => return Ok(Self::STRICT),
            "t" => return Ok(Self::TOLERANT),
            _ => {}
        }
        let mut vals = Vec::new();
        for c in text.chars() {
            let v = TruthValue::from_symbol(&c.to_string()).ok_or_else(|| {
                Error::Precondition(format!(
                    "formula standard `{text}` must be a subset of {{0, i, 1}}"
                ))
            })?;
            vals.push(v);
        }
        Ok(Self::from_values(vals))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Standard {
    pub premise: FormulaStandard,
    pub conclusion: FormulaStandard,
}

impl Standard {
    pub const SS: Standard = Standard {
        premise: FormulaStandard::STRICT,
        conclusion: FormulaStandard::STRICT,
    };
    pub const TT: Standard = Standard {
        premise: FormulaStandard::TOLERANT,
        conclusion: FormulaStandard::TOLERANT,
    };
    pub const ST: Standard = Standard {
        premise: FormulaStandard::STRICT,
        conclusion: FormulaStandard::TOLERANT,
    };
    pub const TS: Standard = Standard {
        premise: FormulaStandard::TOLERANT,
        conclusion: FormulaStandard::STRICT,
    };

    pub fn new(premise: FormulaStandard, conclusion: FormulaStandard) -> Self {
        Standard {
            premise,
            conclusion,
        }
    }
}

impl fmt::Display for Standard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, c) = (self.premise.short(), self.conclusion.short());
        if p.len() == 1 && c.len() == 1 {
            write!(f, "{p}{c}")
        } else {
            write!(f, "{p}/{c}")
        }
    }
}

impl std::str::FromStr for Standard {
    type Err = Error;

    /// `ss`, `tt`, `st`, `ts`, or `<premise>/<conclusion>` with each side as
    /// accepted by [`FormulaStandard::parse`] (e.g. `1i/1`).
    fn from_str(s: &str) -> Result<Self> {
        if let Some((p, c)) = s.split_once('/') {
            return Ok(Standard::new(FormulaStandard::parse(p)?, FormulaStandard::parse(c)?));
        }
        let mut chars = s.chars();
        match (chars.next(), chars.next(), chars.next()) {
            (Some(p), Some(c), None) if "st".contains(p) && "st".contains(c) => Ok(Standard::new(
                FormulaStandard::parse(&p.to_string())?,
                FormulaStandard::parse(&c.to_string())?,
            )),
            _ => Err(Error::Precondition(format!(
                "unknown standard `{s}` (expected ss, tt, st, ts or <premise>/<conclusion>)"
            ))),
        }
    }
}

/// A scheme and a standard: decides membership in the induced set of valid
/// inferences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicSpec {
    pub scheme: Scheme,
    pub standard: Standard,
    pub label: Option<String>,
    pub atom_cap: usize,
}

impl LogicSpec {
    /// Rejects schemes that are not Boolean normal monotonic.
    pub fn new(scheme: Scheme, standard: Standard) -> Result<Self> {
        if let Some(why) = bnm_violation(&scheme) {
            return Err(Error::NotBnm(why));
        }
        Ok(Self::new_unchecked(scheme, standard))
    }

    pub fn new_unchecked(scheme: Scheme, standard: Standard) -> Self {
        LogicSpec {
            scheme,
            standard,
            label: None,
            atom_cap: DEFAULT_ATOM_CAP,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn with_atom_cap(mut self, cap: usize) -> Self {
        self.atom_cap = cap;
        self
    }

    pub fn label(&self) -> String {
        self.label
            .clone()
            .unwrap_or_else(|| format!("{}/{}", self.scheme.label(), self.standard))
    }

    pub fn is_valid(&self, inf: &Inference) -> Result<bool> {
        is_valid(self, inf)
    }

    pub fn find_countervaluation(&self, inf: &Inference) -> Result<Option<Valuation>> {
        find_countervaluation(self, inf)
    }

    pub fn is_theorem(&self, f: &Formula) -> Result<bool> {
        is_theorem(self, f)
    }

    pub fn is_antitheorem(&self, gamma: &BTreeSet<Formula>) -> Result<bool> {
        is_antitheorem(self, gamma)
    }
}

impl Serialize for LogicSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

pub fn eval(s: &Scheme, v: &Valuation, f: &Formula) -> Result<TruthValue> {
    Ok(match f {
        Formula::Var(name) => v.get(name).ok_or_else(|| Error::MissingAtom(name.clone()))?,
        Formula::Neg(a) => s.neg(eval(s, v, a)?),
        Formula::And(a, b) => s.conj(eval(s, v, a)?, eval(s, v, b)?),
        Formula::Or(a, b) => s.disj(eval(s, v, a)?, eval(s, v, b)?),
    })
}

pub fn satisfies_inference(s: &Scheme, v: &Valuation, inf: &Inference, std: Standard) -> Result<bool> {
    let mut premises_hold = true;
    for p in &inf.premises {
        if !std.premise.contains(eval(s, v, p)?) {
            premises_hold = false;
        }
    }
    let conclusion = eval(s, v, &inf.conclusion)?;
    Ok(!premises_hold || std.conclusion.contains(conclusion))
}

pub fn is_valid(l: &LogicSpec, inf: &Inference) -> Result<bool> {
    Ok(find_countervaluation(l, inf)?.is_none())
}

/// First falsifying valuation in canonical order, if any.
pub fn find_countervaluation(l: &LogicSpec, inf: &Inference) -> Result<Option<Valuation>> {
    let atoms: Vec<String> = inf.atoms().into_iter().collect();
    check_cap(atoms.len(), l.atom_cap)?;
    let premises: Vec<Program> = inf
        .premises
        .iter()
        .map(|p| Program::compile(p, &atoms))
        .collect();
    let conclusion = Program::compile(&inf.conclusion, &atoms);
    let mut stack = Vec::new();
    let std = l.standard;
    let found = for_each_valuation(atoms.len(), |vals| {
        let all = premises
            .iter()
            .all(|p| std.premise.contains(p.eval3(&l.scheme, vals, &mut stack)));
        all && !std
            .conclusion
            .contains(conclusion.eval3(&l.scheme, vals, &mut stack))
    });
    Ok(found.map(|vals| Valuation::from_parts(&atoms, &vals)))
}

/// Conclusion-standard truth under every valuation.
pub fn is_theorem(l: &LogicSpec, f: &Formula) -> Result<bool> {
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    check_cap(atoms.len(), l.atom_cap)?;
    let prog = Program::compile(f, &atoms);
    let mut stack = Vec::new();
    let std = l.standard.conclusion;
    Ok(for_each_valuation(atoms.len(), |vals| {
        !std.contains(prog.eval3(&l.scheme, vals, &mut stack))
    })
    .is_none())
}

/// Under every valuation some member falls outside the premise standard.
pub fn is_antitheorem(l: &LogicSpec, gamma: &BTreeSet<Formula>) -> Result<bool> {
    let atoms: Vec<String> = atoms_of(gamma).into_iter().collect();
    check_cap(atoms.len(), l.atom_cap)?;
    let progs: Vec<Program> = gamma.iter().map(|g| Program::compile(g, &atoms)).collect();
    let mut stack = Vec::new();
    let std = l.standard.premise;
    Ok(for_each_valuation(atoms.len(), |vals| {
        progs
            .iter()
            .all(|p| std.contains(p.eval3(&l.scheme, vals, &mut stack)))
    })
    .is_none())
}

/// Validity over two-valued Boolean valuations, computed without any
/// three-valued table.
pub fn is_classically_valid(inf: &Inference) -> Result<bool> {
    is_classically_valid_capped(inf, DEFAULT_ATOM_CAP)
}

pub fn is_classically_valid_capped(inf: &Inference, cap: usize) -> Result<bool> {
    let atoms: Vec<String> = inf.atoms().into_iter().collect();
    check_cap(atoms.len(), cap)?;
    let premises: Vec<Program> = inf
        .premises
        .iter()
        .map(|p| Program::compile(p, &atoms))
        .collect();
    let conclusion = Program::compile(&inf.conclusion, &atoms);
    let mut stack = Vec::new();
    let mut vals = vec![false; atoms.len()];
    for bits in 0u64..(1u64 << atoms.len()) {
        for (i, v) in vals.iter_mut().enumerate() {
            *v = bits >> i & 1 == 1;
        }
        if premises.iter().all(|p| p.eval2(&vals, &mut stack)) && !conclusion.eval2(&vals, &mut stack)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Classical unsatisfiability of a premise set.
pub fn is_classical_antitheorem(gamma: &BTreeSet<Formula>) -> Result<bool> {
    let atoms: Vec<String> = atoms_of(gamma).into_iter().collect();
    check_cap(atoms.len(), DEFAULT_ATOM_CAP)?;
    let progs: Vec<Program> = gamma.iter().map(|g| Program::compile(g, &atoms)).collect();
    let mut stack = Vec::new();
    let mut vals = vec![false; atoms.len()];
    for bits in 0u64..(1u64 << atoms.len()) {
        for (i, v) in vals.iter_mut().enumerate() {
            *v = bits >> i & 1 == 1;
        }
        if progs.iter().all(|p| p.eval2(&vals, &mut stack)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Classical tautology.
pub fn is_classical_theorem(f: &Formula) -> Result<bool> {
    is_classically_valid(&Inference::new([], f.clone()))
}

fn check_cap(atoms: usize, cap: usize) -> Result<()> {
    if atoms > cap {
        return Err(Error::Resource {
            what: "atoms in validity check",
            count: atoms as u128,
            cap: cap as u128,
        });
    }
    Ok(())
}

/// Calls `stop` on each valuation (as a value slice indexed like the sorted
/// atom list) in canonical order; returns the first one for which it is true.
fn for_each_valuation(
    n: usize,
    mut stop: impl FnMut(&[TruthValue]) -> bool,
) -> Option<Vec<TruthValue>> {
    let mut vals = vec![F; n];
    loop {
        if stop(&vals) {
            return Some(vals);
        }
        // Odometer step, last atom fastest.
        let mut i = n;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            match vals[i] {
                F => {
                    vals[i] = I;
                    break;
                }
                I => {
                    vals[i] = T;
                    break;
                }
                T => vals[i] = F,
            }
        }
    }
}

/// Every valuation of `n` atoms in canonical order.
pub(crate) fn all_valuations(n: usize) -> Vec<Vec<TruthValue>> {
    let mut out = Vec::new();
    for_each_valuation(n, |v| {
        out.push(v.to_vec());
        false
    });
    out
}

#[derive(Debug, Clone, Copy)]
enum Op {
    Atom(usize),
    Neg,
    And,
    Or,
}

/// Postfix form of a formula with atoms resolved to slice positions.
#[derive(Debug, Clone)]
pub(crate) struct Program(Vec<Op>);

impl Program {
    /// `atoms` must contain every atom of `f`.
    pub(crate) fn compile(f: &Formula, atoms: &[String]) -> Program {
        fn go(f: &Formula, atoms: &[String], out: &mut Vec<Op>) {
            match f {
                Formula::Var(name) => {
                    let i = atoms
                        .iter()
                        .position(|a| a == name)
                        .expect("atom list covers the formula");
                    out.push(Op::Atom(i));
                }
                Formula::Neg(a) => {
                    go(a, atoms, out);
                    out.push(Op::Neg);
                }
                Formula::And(a, b) => {
                    go(a, atoms, out);
                    go(b, atoms, out);
                    out.push(Op::And);
                }
                Formula::Or(a, b) => {
                    go(a, atoms, out);
                    go(b, atoms, out);
                    out.push(Op::Or);
                }
            }
        }
        let mut ops = Vec::new();
        go(f, atoms, &mut ops);
        Program(ops)
    }

    pub(crate) fn eval3(&self, s: &Scheme, vals: &[TruthValue], stack: &mut Vec<TruthValue>) -> TruthValue {
        stack.clear();
        for op in &self.0 {
            match *op {
                Op::Atom(i) => stack.push(vals[i]),
                Op::Neg => {
                    let a = stack.pop().unwrap();
                    stack.push(s.neg(a));
                }
                Op::And => {
                    let b = stack.pop().unwrap();
                    let a = stack.pop().unwrap();
                    stack.push(s.conj(a, b));
                }
                Op::Or => {
                    let b = stack.pop().unwrap();
                    let a = stack.pop().unwrap();
                    stack.push(s.disj(a, b));
                }
            }
        }
        stack.pop().unwrap()
    }

    pub(crate) fn eval2(&self, vals: &[bool], stack: &mut Vec<TruthValue>) -> bool {
        // Reuses the three-valued stack type; only F/T ever appear.
        stack.clear();
        for op in &self.0 {
            match *op {
                Op::Atom(i) => stack.push(TruthValue::from_bool(vals[i])),
                Op::Neg => {
                    let a = stack.pop().unwrap() == T;
                    stack.push(TruthValue::from_bool(!a));
                }
                Op::And => {
                    let b = stack.pop().unwrap() == T;
                    let a = stack.pop().unwrap() == T;
                    stack.push(TruthValue::from_bool(a && b));
                }
                Op::Or => {
                    let b = stack.pop().unwrap() == T;
                    let a = stack.pop().unwrap() == T;
                    stack.push(TruthValue::from_bool(a || b));
                }
            }
        }
        stack.pop().unwrap() == T
    }
}

/// A consequence relation assembled from (scheme, standard) pairs by
/// intersection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Logic {
    Spec(LogicSpec),
    Meet(Box<Logic>, Box<Logic>),
}

impl Logic {
    pub fn meet(a: Logic, b: Logic) -> Logic {
        Logic::Meet(Box::new(a), Box::new(b))
    }

    pub fn label(&self) -> String {
        match self {
            Logic::Spec(l) => l.label(),
            Logic::Meet(a, b) => format!("({} ∩ {})", a.label(), b.label()),
        }
    }

    pub fn is_valid(&self, inf: &Inference) -> Result<bool> {
        match self {
            Logic::Spec(l) => is_valid(l, inf),
            Logic::Meet(a, b) => Ok(a.is_valid(inf)? && b.is_valid(inf)?),
        }
    }

    /// `gamma => p` is valid for a fresh `p` (and hence for every conclusion).
    pub fn is_antitheorem(&self, gamma: &BTreeSet<Formula>) -> Result<bool> {
        match self {
            Logic::Spec(l) => is_antitheorem(l, gamma),
            Logic::Meet(a, b) => Ok(a.is_antitheorem(gamma)? && b.is_antitheorem(gamma)?),
        }
    }

    pub fn is_theorem(&self, f: &Formula) -> Result<bool> {
        match self {
            Logic::Spec(l) => is_theorem(l, f),
            Logic::Meet(a, b) => Ok(a.is_theorem(f)? && b.is_theorem(f)?),
        }
    }

    /// Membership in the set of antitheorems and theorems.
    pub fn in_star(&self, inf: &Inference) -> Result<bool> {
        Ok(self.is_antitheorem(&inf.premises)? || self.is_theorem(&inf.conclusion)?)
    }
}

impl From<LogicSpec> for Logic {
    fn from(l: LogicSpec) -> Self {
        Logic::Spec(l)
    }
}
