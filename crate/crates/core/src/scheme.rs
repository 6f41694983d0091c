//! Three-valued truth tables for `~`, `&`, `|`.
//!
//! The Boolean normal monotonic (BNM) schemes are exactly sixteen: Boolean
//! normality fixes the corners of every table and monotonicity in the
//! information order forces every cell with a middle argument except four.
//! Those four free cells give each BNM scheme a 4-bit id:
//!
//! | bit | cell        | set   | clear |
//! |-----|-------------|-------|-------|
//! | 3   | `and(0, i)` | `0`   | `i`   |
//! | 2   | `and(i, 0)` | `0`   | `i`   |
//! | 1   | `or(1, i)`  | `1`   | `i`   |
//! | 0   | `or(i, 1)`  | `1`   | `i`   |
//!
//! Strong Kleene is `0b1111`, Weak Kleene `0b0000` and the left-sequential
//! Middle Kleene table used here is `0b1010`.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TruthValue {
    F,
    I,
    T,
}

pub use TruthValue::{F, I, T};

impl TruthValue {
    pub const ALL: [TruthValue; 3] = [F, I, T];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn from_index(i: usize) -> TruthValue {
        match i {
            0 => F,
            1 => I,
            _ => T,
        }
    }

    pub const fn from_bool(b: bool) -> TruthValue {
        if b {
            T
        } else {
            F
        }
    }

    pub const fn to_bool(self) -> Option<bool> {
        match self {
            F => Some(false),
            T => Some(true),
            I => None,
        }
    }

    pub const fn symbol(self) -> &'static str {
        match self {
            F => "0",
            I => "i",
            T => "1",
        }
    }

    pub fn from_symbol(s: &str) -> Option<TruthValue> {
        match s {
            "0" => Some(F),
            "i" | "1/2" => Some(I),
            "1" => Some(T),
            _ => None,
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl Serialize for TruthValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.symbol())
    }
}

impl<'de> Deserialize<'de> for TruthValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        TruthValue::from_symbol(&s)
            .ok_or_else(|| serde::de::Error::custom(format!("bad truth value `{s}`")))
    }
}

/// Information order: `i` sits below `0` and `1`, which are incomparable.
pub fn info_leq(a: TruthValue, b: TruthValue) -> bool {
    a == b || a == I
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scheme {
    pub neg: [TruthValue; 3],
    pub conj: [[TruthValue; 3]; 3],
    pub disj: [[TruthValue; 3]; 3],
    pub name: Option<String>,
}

impl Scheme {
    pub fn neg(&self, a: TruthValue) -> TruthValue {
        self.neg[a.index()]
    }

    pub fn conj(&self, a: TruthValue, b: TruthValue) -> TruthValue {
        self.conj[a.index()][b.index()]
    }

    pub fn disj(&self, a: TruthValue, b: TruthValue) -> TruthValue {
        self.disj[a.index()][b.index()]
    }

    /// Tables are equal; the label is ignored.
    pub fn same_tables(&self, other: &Scheme) -> bool {
        self.neg == other.neg && self.conj == other.conj && self.disj == other.disj
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// The BNM scheme with the given free-cell code (`0..16`).
    pub fn from_id(id: u8) -> Result<Scheme> {
        if id >= 16 {
            return Err(Error::UnknownScheme(format!("id:{id}")));
        }
        let bit = |b: u8, set: TruthValue| if id >> b & 1 == 1 { set } else { I };
        let mut conj = [[F, I, F], [I, I, I], [F, I, T]];
        let mut disj = [[F, I, T], [I, I, I], [T, I, T]];
        conj[F.index()][I.index()] = bit(3, F);
        conj[I.index()][F.index()] = bit(2, F);
        disj[T.index()][I.index()] = bit(1, T);
        disj[I.index()][T.index()] = bit(0, T);
        let scheme = Scheme {
            neg: [T, I, F],
            conj,
            disj,
            name: None,
        };
        Ok(match preset_name_for_id(id) {
            Some(n) => scheme.with_name(n),
            None => scheme,
        })
    }

    /// Free-cell code, if this is a BNM scheme.
    pub fn id(&self) -> Option<u8> {
        if !self.is_bnm() {
            return None;
        }
        let b = |v: TruthValue, set: TruthValue| u8::from(v == set);
        Some(
            b(self.conj(F, I), F) << 3
                | b(self.conj(I, F), F) << 2
                | b(self.disj(T, I), T) << 1
                | b(self.disj(I, T), T),
        )
    }

    pub fn is_bnm(&self) -> bool {
        is_boolean_normal(self) && is_monotonic(self)
    }

    /// Short label: preset name, else `id:0bXXXX`, else `custom`.
    pub fn label(&self) -> String {
        if let Some(n) = &self.name {
            return n.clone();
        }
        match self.id() {
            Some(id) => format!("id:{id:#06b}"),
            None => "custom".into(),
        }
    }

    /// The key/value text form read by [`Scheme::parse_text`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(n) = &self.name {
            out.push_str(&format!("name = {n}\n"));
        }
        for a in TruthValue::ALL {
            out.push_str(&format!("neg.{a} = {}\n", self.neg(a)));
        }
        for (key, table) in [("and", &self.conj), ("or", &self.disj)] {
            for a in TruthValue::ALL {
                for b in TruthValue::ALL {
                    out.push_str(&format!("{key}.{a}.{b} = {}\n", table[a.index()][b.index()]));
                }
            }
        }
        out
    }

    /// Reads the 21-entry key/value format (`neg.<a>`, `and.<a>.<b>`,
    /// `or.<a>.<b>` with values in `{0, i, 1}`, optional `name`, `#` comments).
    /// Non-BNM tables are rejected unless `allow_non_bnm` is set.
    pub fn parse_text(text: &str, allow_non_bnm: bool) -> Result<Scheme> {
        let mut neg = [None; 3];
        let mut conj = [[None; 3]; 3];
        let mut disj = [[None; 3]; 3];
        let mut name = None;
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let err = |message: String| Error::SchemeFormat {
                line: line_no,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err("expected `key = value`".into()))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "name" {
                name = Some(value.to_string());
                continue;
            }
            let value =
                TruthValue::from_symbol(value).ok_or_else(|| err(format!("bad value `{value}`")))?;
            let parts: Vec<&str> = key.split('.').collect();
            let arg = |s: &str| {
                TruthValue::from_symbol(s).ok_or_else(|| err(format!("bad argument `{s}`")))
            };
            let slot = match parts.as_slice() {
                ["neg", a] => &mut neg[arg(a)?.index()],
                ["and", a, b] => &mut conj[arg(a)?.index()][arg(b)?.index()],
                ["or", a, b] => &mut disj[arg(a)?.index()][arg(b)?.index()],
                _ => return Err(err(format!("unknown key `{key}`"))),
            };
            if slot.replace(value).is_some() {
                return Err(err(format!("duplicate key `{key}`")));
            }
        }
        let missing = |what: String| Error::SchemeFormat {
            line: 0,
            message: format!("missing entry `{what}`"),
        };
        let mut scheme = Scheme {
            neg: [F; 3],
            conj: [[F; 3]; 3],
            disj: [[F; 3]; 3],
            name,
        };
        for a in TruthValue::ALL {
            scheme.neg[a.index()] = neg[a.index()].ok_or_else(|| missing(format!("neg.{a}")))?;
            for b in TruthValue::ALL {
                let (i, j) = (a.index(), b.index());
                scheme.conj[i][j] = conj[i][j].ok_or_else(|| missing(format!("and.{a}.{b}")))?;
                scheme.disj[i][j] = disj[i][j].ok_or_else(|| missing(format!("or.{a}.{b}")))?;
            }
        }
        if !allow_non_bnm {
            if let Some(why) = bnm_violation(&scheme) {
                return Err(Error::NotBnm(why));
            }
        }
        Ok(scheme)
    }

    pub fn load(path: &Path, allow_non_bnm: bool) -> Result<Scheme> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::SchemeFormat {
            line: 0,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Scheme::parse_text(&text, allow_non_bnm)
    }
}

fn preset_name_for_id(id: u8) -> Option<&'static str> {
    match id {
        0b1111 => Some("strong"),
        0b0000 => Some("weak"),
        0b1010 => Some("middle"),
        _ => None,
    }
}

pub fn is_boolean_normal(s: &Scheme) -> bool {
    boolean_normality_violation(s).is_none()
}

pub fn boolean_normality_violation(s: &Scheme) -> Option<String> {
    for a in [false, true] {
        let got = s.neg(TruthValue::from_bool(a));
        if got != TruthValue::from_bool(!a) {
            return Some(format!("neg({}) = {got}", TruthValue::from_bool(a)));
        }
        for b in [false, true] {
            let (va, vb) = (TruthValue::from_bool(a), TruthValue::from_bool(b));
            let got = s.conj(va, vb);
            if got != TruthValue::from_bool(a && b) {
                return Some(format!("and({va}, {vb}) = {got}"));
            }
            let got = s.disj(va, vb);
            if got != TruthValue::from_bool(a || b) {
                return Some(format!("or({va}, {vb}) = {got}"));
            }
        }
    }
    None
}

pub fn is_monotonic(s: &Scheme) -> bool {
    monotonicity_violation(s).is_none()
}

/// First pair of argument tuples `a <= b` (componentwise) whose images are not
/// ordered, described as text.
pub fn monotonicity_violation(s: &Scheme) -> Option<String> {
    for a in TruthValue::ALL {
        for b in TruthValue::ALL {
            if info_leq(a, b) && !info_leq(s.neg(a), s.neg(b)) {
                return Some(format!(
                    "neg({a}) = {} but neg({b}) = {}",
                    s.neg(a),
                    s.neg(b)
                ));
            }
        }
    }
    for (name, table) in [("and", &s.conj), ("or", &s.disj)] {
        for a1 in TruthValue::ALL {
            for a2 in TruthValue::ALL {
                for b1 in TruthValue::ALL {
                    for b2 in TruthValue::ALL {
                        if !(info_leq(a1, b1) && info_leq(a2, b2)) {
                            continue;
                        }
                        let lo = table[a1.index()][a2.index()];
                        let hi = table[b1.index()][b2.index()];
                        if !info_leq(lo, hi) {
                            return Some(format!(
                                "{name}({a1}, {a2}) = {lo} but {name}({b1}, {b2}) = {hi}"
                            ));
                        }
                    }
                }
            }
        }
    }
    None
}

pub fn bnm_violation(s: &Scheme) -> Option<String> {
    boolean_normality_violation(s)
        .map(|w| format!("not Boolean normal: {w}"))
        .or_else(|| monotonicity_violation(s).map(|w| format!("not monotonic: {w}")))
}

/// All sixteen BNM schemes, ordered by id.
pub fn enumerate_bnm_schemes() -> Vec<Scheme> {
    (0..16).map(|id| Scheme::from_id(id).expect("id < 16")).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Strong,
    Weak,
    Middle,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Strong, Preset::Weak, Preset::Middle];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Strong => "strong",
            Preset::Weak => "weak",
            Preset::Middle => "middle",
        }
    }

    pub fn id(self) -> u8 {
        match self {
            Preset::Strong => 0b1111,
            Preset::Weak => 0b0000,
            Preset::Middle => 0b1010,
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Preset> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownScheme(s.to_string()))
    }
}

pub fn preset(p: Preset) -> Scheme {
    Scheme::from_id(p.id()).expect("preset ids are valid")
}

/// Looks up a preset by name.
pub fn preset_named(name: &str) -> Result<Scheme> {
    Ok(preset(name.parse()?))
}

/// Resolves a scheme selector: a preset name, `id:<code>` (decimal, `0b` or
/// `0x`), or a path to a scheme file.
pub fn resolve_selector(selector: &str, allow_non_bnm: bool) -> Result<Scheme> {
    if let Ok(p) = selector.parse::<Preset>() {
        return Ok(preset(p));
    }
    if let Some(code) = selector.strip_prefix("id:") {
        let parsed = if let Some(bin) = code.strip_prefix("0b") {
            u8::from_str_radix(bin, 2)
        } else if let Some(hex) = code.strip_prefix("0x") {
            u8::from_str_radix(hex, 16)
        } else {
            code.parse()
        };
        return parsed
            .map_err(|_| Error::UnknownScheme(selector.to_string()))
            .and_then(Scheme::from_id);
    }
    let path = Path::new(selector);
    if path.exists() {
        return Scheme::load(path, allow_non_bnm);
    }
    Err(Error::UnknownScheme(selector.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn info_order() {
        assert!(info_leq(I, F));
        assert!(!info_leq(F, T));
        assert!(!info_leq(T, F));
        assert!(info_leq(T, T));
        assert!(!info_leq(F, I));
    }

    #[test]
    fn strong_matches_printed_tables() {
        let s = preset(Preset::Strong);
        // Rows/columns in the printed order 1, i, 0.
        let order = [T, I, F];
        let conj = [[T, I, F], [I, I, F], [F, F, F]];
        let disj = [[T, T, T], [T, I, I], [T, I, F]];
        for (r, a) in order.iter().enumerate() {
            for (c, b) in order.iter().enumerate() {
                assert_eq!(s.conj(*a, *b), conj[r][c], "and({a},{b})");
                assert_eq!(s.disj(*a, *b), disj[r][c], "or({a},{b})");
            }
        }
        assert_eq!(s.neg, [T, I, F]);
        assert_eq!(s.conj(F, I), F);
    }

    #[test]
    fn weak_matches_printed_tables() {
        let s = preset(Preset::Weak);
        let order = [T, I, F];
        let conj = [[T, I, F], [I, I, I], [F, I, F]];
        let disj = [[T, I, T], [I, I, I], [T, I, F]];
        for (r, a) in order.iter().enumerate() {
            for (c, b) in order.iter().enumerate() {
                assert_eq!(s.conj(*a, *b), conj[r][c]);
                assert_eq!(s.disj(*a, *b), disj[r][c]);
            }
        }
        assert_eq!(s.conj(F, I), I);
    }

    #[test]
    fn middle_is_left_sequential() {
        let m = preset(Preset::Middle);
        assert_eq!(m.conj(F, I), F);
        assert_eq!(m.conj(I, F), I);
        assert_eq!(m.disj(T, I), T);
        assert_eq!(m.disj(I, T), I);
        assert!(enumerate_bnm_schemes().iter().any(|s| s.same_tables(&m)));
    }

    #[test]
    fn predicates_on_broken_tables() {
        let mut s = preset(Preset::Strong);
        s.neg[T.index()] = T;
        assert!(!is_boolean_normal(&s));

        let mut s = preset(Preset::Strong);
        s.conj[I.index()][T.index()] = T;
        assert!(is_boolean_normal(&s));
        assert!(!is_monotonic(&s));
        let why = monotonicity_violation(&s).unwrap();
        assert!(why.contains("and(i, 1) = 1"), "{why}");
        assert_eq!(s.id(), None);
    }

    #[test]
    fn sixteen_distinct_schemes() {
        let all = enumerate_bnm_schemes();
        assert_eq!(all.len(), 16);
        for (i, s) in all.iter().enumerate() {
            assert!(is_boolean_normal(s) && is_monotonic(s));
            assert_eq!(s.id(), Some(i as u8));
            assert_eq!(s.neg(I), I);
            assert_eq!(s.conj(I, I), I);
            assert_eq!(s.disj(I, I), I);
            for t in &all[..i] {
                assert!(!s.same_tables(t));
            }
        }
        for p in Preset::ALL {
            assert_eq!(all[p.id() as usize].name.as_deref(), Some(p.name()));
        }
    }

    #[test]
    fn text_round_trip_and_rejection() {
        for s in enumerate_bnm_schemes() {
            let back = Scheme::parse_text(&s.to_text(), false).unwrap();
            assert_eq!(back, s);
        }
        let mut bad = preset(Preset::Strong);
        bad.conj[I.index()][T.index()] = T;
        let text = bad.to_text();
        assert!(matches!(Scheme::parse_text(&text, false), Err(Error::NotBnm(_))));
        assert!(Scheme::parse_text(&text, true).is_ok());

        let truncated: String = text.lines().skip(2).map(|l| format!("{l}\n")).collect();
        assert!(matches!(
            Scheme::parse_text(&truncated, true),
            Err(Error::SchemeFormat { .. })
        ));
        let dup = format!("{text}neg.0 = 1\n");
        assert!(matches!(
            Scheme::parse_text(&dup, true),
            Err(Error::SchemeFormat { .. })
        ));
    }

    #[test]
    fn selectors() {
        assert_eq!(resolve_selector("strong", false).unwrap().id(), Some(15));
        assert_eq!(resolve_selector("id:0b0101", false).unwrap().id(), Some(5));
        assert_eq!(resolve_selector("id:10", false).unwrap().label(), "middle");
        assert_eq!(resolve_selector("id:0b0101", false).unwrap().label(), "id:0b0101");
        assert!(resolve_selector("id:16", false).is_err());
        assert!(resolve_selector("nonsense", false).is_err());
        assert!(preset_named("medium").is_err());
    }
}
