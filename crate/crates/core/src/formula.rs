//! Propositional formulas over `~`, `&` and `|`, single-conclusion inferences
//! and substitutions.
//!
//! Concrete syntax: atoms are identifiers (`[A-Za-z_][A-Za-z0-9_']*`), `~` binds
//! tightest, then `&`, then `|`; both binary connectives associate to the left.
//! An inference is written `F1, ..., Fn => G`, where the premise list may be empty.
//! The Unicode forms `¬ ∧ ∨ ⇒` are accepted as aliases when parsing; printing
//! always uses ASCII.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default ceiling on the number of formulas [`enumerate_formulas`] will build.
pub const DEFAULT_FORMULA_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Var(String),
    Neg(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Formula::Var(name.into())
    }

    pub fn neg(child: Formula) -> Self {
        Formula::Neg(Box::new(child))
    }

    pub fn and(left: Formula, right: Formula) -> Self {
        Formula::And(Box::new(left), Box::new(right))
    }

    pub fn or(left: Formula, right: Formula) -> Self {
        Formula::Or(Box::new(left), Box::new(right))
    }

    /// `p | ~p` for the given atom.
    pub fn excluded_middle(atom: &str) -> Self {
        Formula::or(Formula::var(atom), Formula::neg(Formula::var(atom)))
    }

    /// Connective nesting depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::Neg(a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(name) => {
                if !out.contains(name) {
                    out.insert(name.clone());
                }
            }
            Formula::Neg(a) => a.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn substitute(&self, s: &Substitution) -> Formula {
        match self {
            Formula::Var(name) => match s.map.get(name) {
                Some(image) => image.clone(),
                None => self.clone(),
            },
            Formula::Neg(a) => Formula::neg(a.substitute(s)),
            Formula::And(a, b) => Formula::and(a.substitute(s), b.substitute(s)),
            Formula::Or(a, b) => Formula::or(a.substitute(s), b.substitute(s)),
        }
    }

    /// Binding strength used by the printer: 3 for atoms and negations.
    fn precedence(&self) -> u8 {
        match self {
            Formula::Var(_) | Formula::Neg(_) => 3,
            Formula::And(..) => 2,
            Formula::Or(..) => 1,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, c: &Formula, min: u8) -> fmt::Result {
            if c.precedence() < min {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        }
        match self {
            Formula::Var(name) => f.write_str(name),
            Formula::Neg(a) => {
                f.write_str("~")?;
                child(f, a, 3)
            }
            // Left operands may sit at the same level (left associativity);
            // right operands need strictly tighter binding.
            Formula::And(a, b) => {
                child(f, a, 2)?;
                f.write_str(" & ")?;
                child(f, b, 3)
            }
            Formula::Or(a, b) => {
                child(f, a, 1)?;
                f.write_str(" | ")?;
                child(f, b, 2)
            }
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

impl Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

/// A finite, duplicate-free premise set together with a single conclusion.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Inference {
    pub premises: BTreeSet<Formula>,
    pub conclusion: Formula,
}

impl Inference {
    pub fn new(premises: impl IntoIterator<Item = Formula>, conclusion: Formula) -> Self {
        Inference {
            premises: premises.into_iter().collect(),
            conclusion,
        }
    }

    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for p in &self.premises {
            p.collect_atoms(&mut out);
        }
        self.conclusion.collect_atoms(&mut out);
        out
    }

    pub fn substitute(&self, s: &Substitution) -> Inference {
        Inference {
            premises: self.premises.iter().map(|p| p.substitute(s)).collect(),
            conclusion: self.conclusion.substitute(s),
        }
    }
}

impl fmt::Display for Inference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.premises {
            if !first {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        if !first {
            f.write_str(" ")?;
        }
        write!(f, "=> {}", self.conclusion)
    }
}

impl std::str::FromStr for Inference {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_inference(s)
    }
}

impl Serialize for Inference {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Inference {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_inference(&text).map_err(serde::de::Error::custom)
    }
}

/// Atoms of a set of formulas.
pub fn atoms_of<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for f in formulas {
        f.collect_atoms(&mut out);
    }
    out
}

/// A finite map from atoms to formulas, identity elsewhere.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<String, Formula>,
}

impl Substitution {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn with(mut self, atom: impl Into<String>, image: Formula) -> Self {
        self.map.insert(atom.into(), image);
        self
    }

    pub fn insert(&mut self, atom: impl Into<String>, image: Formula) {
        self.map.insert(atom.into(), image);
    }

    pub fn get(&self, atom: &str) -> Option<&Formula> {
        self.map.get(atom)
    }

    pub fn domain(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(String::as_str)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &Substitution) -> Substitution {
        let mut map: BTreeMap<String, Formula> = first
            .map
            .iter()
            .map(|(k, v)| (k.clone(), v.substitute(self)))
            .collect();
        for (k, v) in &self.map {
            map.entry(k.clone()).or_insert_with(|| v.clone());
        }
        Substitution { map }
    }
}

impl FromIterator<(String, Formula)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (String, Formula)>>(iter: I) -> Self {
        Substitution {
            map: iter.into_iter().collect(),
        }
    }
}

pub fn substitute(f: &Formula, s: &Substitution) -> Formula {
    f.substitute(s)
}

/// All formulas over `atoms` of nesting depth at most `depth`.
///
/// Order: the atoms (sorted), then one block per depth `d = 1, 2, ...` holding
/// the formulas of depth exactly `d`: first the negations `~a` of depth `d - 1`
/// formulas, then every conjunction `a & b`, then every disjunction `a | b`, with
/// `(a, b)` ranging lexicographically over positions in the preceding output
/// and at least one of them of depth `d - 1`. Each block extends the previous
/// output, so depth `d` output is a prefix of depth `d + 1` output.
pub fn enumerate_formulas<I, S>(atoms: I, depth: usize) -> Result<Vec<Formula>>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    enumerate_formulas_capped(atoms, depth, DEFAULT_FORMULA_CAP)
}

pub fn enumerate_formulas_capped<I, S>(atoms: I, depth: usize, cap: u128) -> Result<Vec<Formula>>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let atoms: BTreeSet<String> = atoms.into_iter().map(Into::into).collect();
    if atoms.is_empty() {
        return Err(Error::Precondition("formula enumeration needs at least one atom".into()));
    }
    for a in &atoms {
        if !is_identifier(a) {
            return Err(Error::Precondition(format!("`{a}` is not a valid atom name")));
        }
    }
    let count = formula_count(atoms.len() as u128, depth);
    if count > cap {
        return Err(Error::Resource {
            what: "formula enumeration",
            count,
            cap,
        });
    }

    let mut out: Vec<Formula> = atoms.into_iter().map(Formula::Var).collect();
    // out[..prev_end] has depth < d - 1, out[prev_end..] has depth exactly d - 1.
    let mut prev_end = 0;
    for _ in 0..depth {
        let layer_start = prev_end;
        let layer_end = out.len();
        let mut next = Vec::new();
        for f in &out[layer_start..layer_end] {
            next.push(Formula::neg(f.clone()));
        }
        for make in [Formula::and as fn(Formula, Formula) -> Formula, Formula::or] {
            for i in 0..layer_end {
                for j in 0..layer_end {
                    if i >= layer_start || j >= layer_start {
                        next.push(make(out[i].clone(), out[j].clone()));
                    }
                }
            }
        }
        prev_end = layer_end;
        out.extend(next);
    }
    Ok(out)
}

/// Closed-form size of [`enumerate_formulas`] output, saturating.
pub fn formula_count(atoms: u128, depth: usize) -> u128 {
    let (mut below, mut upto) = (0u128, atoms);
    for _ in 0..depth {
        let exact = upto - below;
        let pairs = upto
            .saturating_mul(upto)
            .saturating_sub(below.saturating_mul(below));
        let next = upto
            .saturating_add(exact)
            .saturating_add(pairs.saturating_mul(2));
        below = upto;
        upto = next;
    }
    upto
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    LParen,
    RParen,
    Comma,
    Arrow,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("atom `{s}`"),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Arrow => "`=>`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '~' | '¬' | '!' => Tok::Not,
            '&' | '∧' => Tok::And,
            '|' | '∨' => Tok::Or,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '⇒' => Tok::Arrow,
            '=' => {
                if chars.get(i + 1) == Some(&'>') {
                    out.push((i, Tok::Arrow));
                    i += 2;
                    continue;
                }
                return Err(Error::Syntax {
                    pos: i,
                    message: "expected `=>`".into(),
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(chars[start..i].iter().collect())));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    pos: i,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((i, tok));
        i += 1;
    }
    out.push((chars.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> Error {
        Error::Syntax {
            pos: self.pos(),
            message: format!("expected {wanted}, found {}", self.peek().describe()),
        }
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::neg(self.unary()?))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Var(name))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.disjunction()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn expect_end(&self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: tokenize(text)?,
        at: 0,
    };
    let f = p.disjunction()?;
    p.expect_end()?;
    Ok(f)
}

/// Parses `F1, ..., Fn => G`; repeated premises collapse into one.
pub fn parse_inference(text: &str) -> Result<Inference> {
    let mut p = Parser {
        toks: tokenize(text)?,
        at: 0,
    };
    let mut premises = BTreeSet::new();
    if *p.peek() != Tok::Arrow {
        loop {
            premises.insert(p.disjunction()?);
            match p.peek() {
                Tok::Comma => {
                    p.bump();
                }
                Tok::Arrow => break,
                _ => return Err(p.unexpected("`,` or `=>`")),
            }
        }
    }
    p.bump();
    let conclusion = p.disjunction()?;
    p.expect_end()?;
    Ok(Inference {
        premises,
        conclusion,
    })
}
