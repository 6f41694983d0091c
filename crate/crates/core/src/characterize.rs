//! Executable forms of the structural results: the two-step derivation of
//! classical inferences from tt and ss steps, star sets and their relation to
//! the dual closure, the strict/tolerant union gap, and the two four-element
//! lattices.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::closure::{InferenceSet, Relation, Universe};
use crate::error::{Error, Result};
use crate::formula::{atoms_of, parse_inference, Formula, Inference};
use crate::scheme::bnm_violation;
use crate::semantics::{
    find_countervaluation, is_antitheorem, is_classical_antitheorem, is_classical_theorem,
    is_classically_valid, is_theorem, Logic, LogicSpec, Standard, Valuation,
};

/// The inference on which strict-strict and tolerant-tolerant validity both
/// fail although it is classically valid.
pub const GAP_WITNESS: &str = "p | (q & ~q) => p & (r | ~r)";

/// One failed check, with whatever evidence is available.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inference: Option<Inference>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub valuation: Option<Valuation>,
    pub detail: String,
}

impl Finding {
    pub fn new(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Finding {
            check: check.into(),
            inference: None,
            valuation: None,
            detail: detail.into(),
        }
    }

    pub fn at(mut self, inf: Inference) -> Self {
        self.inference = Some(inf);
        self
    }

    pub fn with_valuation(mut self, v: Option<Valuation>) -> Self {
        self.valuation = v;
        self
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.check, self.detail)?;
        if let Some(i) = &self.inference {
            write!(f, " [{i}]")?;
        }
        if let Some(v) = &self.valuation {
            write!(f, " under {v}")?;
        }
        Ok(())
    }
}

/// Outcome of a batch of checks: how many instances were examined and which
/// failed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub instances: u64,
    pub failures: Vec<Finding>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn check(&mut self, ok: bool, failure: impl FnOnce() -> Finding) {
        self.instances += 1;
        if !ok {
            self.failures.push(failure());
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.instances += other.instances;
        self.failures.extend(other.failures);
    }
}

/// `Γ ∪ {p ∨ ¬p : p ∈ At(φ)}` for the inference `Γ ⇒ φ`.
pub fn delta_witness(inf: &Inference) -> BTreeSet<Formula> {
    let mut delta = inf.premises.clone();
    for a in inf.conclusion.atoms() {
        delta.insert(Formula::excluded_middle(&a));
    }
    delta
}

/// A two-step derivation of `Γ ⇒ φ`: each `Γ ⇒ δ` under the tt logic and
/// `Δ ⇒ φ` under the ss logic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivationWitness {
    pub inference: Inference,
    pub delta: BTreeSet<Formula>,
    pub tt_checks: Vec<(Inference, bool)>,
    pub ss_check: (Inference, bool),
    pub tt_logic: LogicSpec,
    pub ss_logic: LogicSpec,
}

impl DerivationWitness {
    pub fn is_accepted(&self) -> bool {
        self.ss_check.1 && self.tt_checks.iter().all(|(_, ok)| *ok)
    }

    /// The inferences the derivation starts from.
    pub fn base(&self) -> InferenceSet {
        self.tt_checks
            .iter()
            .map(|(i, _)| i.clone())
            .chain([self.ss_check.0.clone()])
            .collect()
    }
}

fn require(l: &LogicSpec, std: Standard, role: &str) -> Result<()> {
    if l.standard != std {
        return Err(Error::Precondition(format!(
            "the {role} logic must use the {std} standard, got {}",
            l.standard
        )));
    }
    if let Some(why) = bnm_violation(&l.scheme) {
        return Err(Error::Precondition(format!("the {role} scheme is not BNM: {why}")));
    }
    Ok(())
}

/// `None` when the inference is not classically valid. Otherwise the witness
/// built from [`delta_witness`], with every step checked; the schemes of the
/// two logics may differ.
pub fn derive_classical(
    inf: &Inference,
    tt: &LogicSpec,
    ss: &LogicSpec,
) -> Result<Option<DerivationWitness>> {
    require(tt, Standard::TT, "tt")?;
    require(ss, Standard::SS, "ss")?;
    if !is_classically_valid(inf)? {
        return Ok(None);
    }
    let delta = delta_witness(inf);
    let mut tt_checks = Vec::with_capacity(delta.len());
    for d in &delta {
        let step = Inference::new(inf.premises.iter().cloned(), d.clone());
        let ok = tt.is_valid(&step)?;
        tt_checks.push((step, ok));
    }
    let last = Inference::new(delta.iter().cloned(), inf.conclusion.clone());
    let ok = ss.is_valid(&last)?;
    Ok(Some(DerivationWitness {
        inference: inf.clone(),
        delta,
        tt_checks,
        ss_check: (last, ok),
        tt_logic: tt.clone(),
        ss_logic: ss.clone(),
    }))
}

/// Runs the cut closure on the witness steps inside the smallest universe
/// that contains them and reports whether the target inference appears.
pub fn replay_witness(w: &DerivationWitness) -> Result<bool> {
    let inf = &w.inference;
    let formulas: Vec<Formula> = inf
        .premises
        .iter()
        .chain(&w.delta)
        .chain([&inf.conclusion])
        .cloned()
        .collect();
    let cap = inf.premises.len().max(w.delta.len()).max(1);
    let u = Universe::from_formulas(formulas, [], cap)?;
    let closed = Relation::from_set(&u, &w.base())?.transitive_closure(&u);
    Ok(closed.contains_inference(&u, inf))
}

/// Universe inferences with an antitheorem premise set or a theorem
/// conclusion.
pub fn star_set(logic: &Logic, u: &Universe) -> Result<InferenceSet> {
    Ok(u.star(logic)?.to_set(u))
}

fn require_reserve(u: &Universe) -> Result<()> {
    if u.reserve().is_empty() {
        return Err(Error::Precondition(
            "the universe needs a reserve atom for this check".into(),
        ));
    }
    Ok(())
}

/// Compares the dual closure of the valid universe inferences with the star
/// set, on inferences that avoid the reserve atoms.
pub fn check_td_equals_star(logic: &Logic, u: &Universe) -> Result<CheckReport> {
    require_reserve(u)?;
    let free = u.reserve_free();
    let td = u.valid(logic)?.dual_transitive_closure(u).intersection(&free);
    let star = u.star(logic)?.intersection(&free);
    let mut report = CheckReport::default();
    let label = logic.label();
    for (g, f) in free.iter() {
        let (a, b) = (td.contains(g, f), star.contains(g, f));
        report.check(a == b, || {
            Finding::new(
                format!("td-equals-star {label}"),
                if a {
                    "in the dual closure but not in the star set"
                } else {
                    "in the star set but not in the dual closure"
                },
            )
            .at(u.inference(g, f))
        });
    }
    Ok(report)
}

/// The dual closure of the inferences valid under both logics is empty on
/// reserve-free inferences, while the intersection itself is not.
pub fn check_ts_collapse(ss: &LogicSpec, tt: &LogicSpec, u: &Universe) -> Result<CheckReport> {
    require(ss, Standard::SS, "ss")?;
    require(tt, Standard::TT, "tt")?;
    require_reserve(u)?;
    let meet = Logic::meet(ss.clone().into(), tt.clone().into());
    let free = u.reserve_free();
    let base = u.valid(&meet)?;
    let td = base.dual_transitive_closure(u).intersection(&free);
    let mut report = CheckReport::default();
    let label = meet.label();
    report.check(!base.intersection(&free).is_empty(), || {
        Finding::new(format!("ts-collapse {label}"), "the intersection is empty, check is vacuous")
    });
    for (g, f) in free.iter() {
        report.check(!td.contains(g, f), || {
            Finding::new(format!("ts-collapse {label}"), "survives the dual closure").at(u.inference(g, f))
        });
    }
    Ok(report)
}

/// Classical validity of the gap witness against its ss and tt invalidity,
/// the ts sanity case, and the incomparability of the two valid sets.
pub fn check_union_gap(ss: &LogicSpec, tt: &LogicSpec) -> Result<CheckReport> {
    require(ss, Standard::SS, "ss")?;
    require(tt, Standard::TT, "tt")?;
    let w = parse_inference(GAP_WITNESS)?;
    let mut report = CheckReport::default();
    let pair = format!("{} / {}", ss.label(), tt.label());
    report.check(is_classically_valid(&w)?, || {
        Finding::new(format!("gap-classical {pair}"), "witness is not classically valid").at(w.clone())
    });
    report.check(!ss.is_valid(&w)?, || {
        Finding::new(format!("gap-ss {pair}"), "witness is ss-valid").at(w.clone())
    });
    report.check(!tt.is_valid(&w)?, || {
        Finding::new(format!("gap-tt {pair}"), "witness is tt-valid").at(w.clone())
    });
    for scheme in [&ss.scheme, &tt.scheme] {
        let ts = LogicSpec::new_unchecked(scheme.clone(), Standard::TS);
        let cv = find_countervaluation(&ts, &w)?;
        report.check(cv.is_some(), || {
            Finding::new(format!("gap-ts {}", ts.label()), "witness is ts-valid").at(w.clone())
        });
    }

    let explosion = parse_inference("p & ~p => r")?;
    let lem = parse_inference("=> p | ~p")?;
    report.check(ss.is_valid(&explosion)? && !tt.is_valid(&explosion)?, || {
        Finding::new(format!("incomparable {pair}"), "expected ss-valid and tt-invalid").at(explosion.clone())
    });
    report.check(tt.is_valid(&lem)? && !ss.is_valid(&lem)?, || {
        Finding::new(format!("incomparable {pair}"), "expected tt-valid and ss-invalid").at(lem.clone())
    });
    Ok(report)
}

/// Elements of the four-element lattice of valid-inference sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Member {
    SsTt,
    Ss,
    Tt,
    St,
}

impl Member {
    pub const ALL: [Member; 4] = [Member::SsTt, Member::Ss, Member::Tt, Member::St];

    pub fn name(self) -> &'static str {
        match self {
            Member::SsTt => "SS∩TT",
            Member::Ss => "SS",
            Member::Tt => "TT",
            Member::St => "ST",
        }
    }

    /// The inclusion order of the family.
    pub fn leq(self, other: Member) -> bool {
        self == other || self == Member::SsTt || other == Member::St
    }

    fn glb(self, other: Member) -> Member {
        if self.leq(other) {
            self
        } else if other.leq(self) {
            other
        } else {
            Member::SsTt
        }
    }

    fn accepts(self, m: Membership) -> bool {
        match self {
            Member::SsTt => m.ss && m.tt,
            Member::Ss => m.ss,
            Member::Tt => m.tt,
            Member::St => m.st,
        }
    }
}

impl fmt::Display for Member {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A membership predicate: the conjunction of the listed members.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decider {
    members: BTreeSet<Member>,
}

impl Decider {
    pub fn of(m: Member) -> Self {
        Decider {
            members: [m].into(),
        }
    }

    /// The single family member this conjunction is expected to coincide
    /// with.
    pub fn as_member(&self) -> Member {
        self.members
            .iter()
            .copied()
            .reduce(Member::glb)
            .expect("deciders are never empty")
    }

    fn accepts(&self, m: Membership) -> bool {
        self.members.iter().all(|x| x.accepts(m))
    }
}

/// Join by the order identities: the larger element when comparable, and ST
/// for SS with TT.
pub fn lattice_join(a: &Decider, b: &Decider) -> Decider {
    let (x, y) = (a.as_member(), b.as_member());
    Decider::of(if x.leq(y) {
        y
    } else if y.leq(x) {
        x
    } else {
        Member::St
    })
}

/// Pointwise conjunction.
pub fn lattice_meet(a: &Decider, b: &Decider) -> Decider {
    Decider {
        members: a.members.union(&b.members).copied().collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Membership {
    ss: bool,
    tt: bool,
    st: bool,
}

/// The logics behind the lattice members, each over its own scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeFamily {
    pub ss: LogicSpec,
    pub tt: LogicSpec,
    pub st: LogicSpec,
}

impl LatticeFamily {
    pub fn new(ss: LogicSpec, tt: LogicSpec, st: LogicSpec) -> Result<Self> {
        require(&ss, Standard::SS, "ss")?;
        require(&tt, Standard::TT, "tt")?;
        require(&st, Standard::ST, "st")?;
        Ok(LatticeFamily { ss, tt, st })
    }

    pub fn label(&self) -> String {
        format!("ss={}, tt={}, st={}", self.ss.scheme.label(), self.tt.scheme.label(), self.st.scheme.label())
    }

    pub fn logic(&self, m: Member) -> Logic {
        match m {
            Member::SsTt => Logic::meet(self.ss.clone().into(), self.tt.clone().into()),
            Member::Ss => self.ss.clone().into(),
            Member::Tt => self.tt.clone().into(),
            Member::St => self.st.clone().into(),
        }
    }

    /// The ts logic over the ss scheme.
    pub fn ts(&self) -> LogicSpec {
        LogicSpec::new_unchecked(self.ss.scheme.clone(), Standard::TS)
    }

    pub fn accepts(&self, d: &Decider, inf: &Inference) -> Result<bool> {
        Ok(d.accepts(self.membership(inf)?))
    }

    fn membership(&self, inf: &Inference) -> Result<Membership> {
        Ok(Membership {
            ss: self.ss.is_valid(inf)?,
            tt: self.tt.is_valid(inf)?,
            st: self.st.is_valid(inf)?,
        })
    }
}

/// Membership-level lattice identities on each sampled inference, for every
/// choice of members.
pub fn verify_lattices(family: &LatticeFamily, sample: &InferenceSet) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    let d = |m: Member| Decider::of(m);
    for inf in sample {
        let m = family.membership(inf)?;
        let classical = is_classically_valid(inf)?;
        let mut check = |name: &str, ok: bool| {
            report.check(ok, || Finding::new(name, "identity fails").at(inf.clone()));
        };
        check("join-ss-tt-is-classical", lattice_join(&d(Member::Ss), &d(Member::Tt)).accepts(m) == classical);
        for x in Member::ALL {
            let dx = d(x);
            check("join-idempotent", lattice_join(&dx, &dx).accepts(m) == x.accepts(m));
            check("meet-idempotent", lattice_meet(&dx, &dx).accepts(m) == x.accepts(m));
            for y in Member::ALL {
                let dy = d(y);
                if x.leq(y) {
                    check("inclusion", !x.accepts(m) || y.accepts(m));
                }
                let meet = lattice_meet(&dx, &dy);
                check("meet-closed", meet.accepts(m) == meet.as_member().accepts(m));
                check(
                    "join-commutative",
                    lattice_join(&dx, &dy).accepts(m) == lattice_join(&dy, &dx).accepts(m),
                );
                check("meet-commutative", meet.accepts(m) == lattice_meet(&dy, &dx).accepts(m));
                check("absorption-join", lattice_join(&dx, &meet).accepts(m) == x.accepts(m));
                check(
                    "absorption-meet",
                    lattice_meet(&dx, &lattice_join(&dx, &dy)).accepts(m) == x.accepts(m),
                );
                for z in Member::ALL {
                    let dz = d(z);
                    check(
                        "join-associative",
                        lattice_join(&lattice_join(&dx, &dy), &dz).accepts(m)
                            == lattice_join(&dx, &lattice_join(&dy, &dz)).accepts(m),
                    );
                    check(
                        "meet-associative",
                        lattice_meet(&lattice_meet(&dx, &dy), &dz).accepts(m)
                            == lattice_meet(&dx, &lattice_meet(&dy, &dz)).accepts(m),
                    );
                }
            }
        }
    }
    Ok(report)
}

/// Elements of the lattice of star sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StarMember {
    Ts,
    Ss,
    Tt,
    Union,
}

impl StarMember {
    pub const ALL: [StarMember; 4] = [StarMember::Ts, StarMember::Ss, StarMember::Tt, StarMember::Union];

    pub fn name(self) -> &'static str {
        match self {
            StarMember::Ts => "TS★",
            StarMember::Ss => "SS★",
            StarMember::Tt => "TT★",
            StarMember::Union => "SS★∪TT★",
        }
    }
}

/// Star-lattice identities over a universe: join is union, meet is the dual
/// closure of the intersection. Also checks that the union equals the st and
/// the classical star sets, and the named membership examples.
pub fn verify_star_lattice(family: &LatticeFamily, u: &Universe) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    let ss = u.star(&family.ss.clone().into())?;
    let tt = u.star(&family.tt.clone().into())?;
    let st = u.star(&family.st.clone().into())?;
    let ts = u.star(&family.ts().into())?;
    let union = ss.union(&tt);
    let cl = classical_star(u)?;

    let mut set_eq = |name: &str, a: &Relation, b: &Relation| {
        let at = a.first_outside(b).or_else(|| b.first_outside(a));
        report.check(at.is_none(), || {
            let (g, f) = at.unwrap();
            Finding::new(name, "sets differ").at(u.inference(g, f))
        });
    };
    set_eq("union-equals-st-star", &union, &st);
    set_eq("st-star-equals-classical-star", &st, &cl);
    set_eq("ts-star-empty", &ts, &Relation::empty(u));
    set_eq("td-of-empty-is-ts-star", &Relation::empty(u).dual_transitive_closure(u), &ts);
    set_eq("td-meet-ss-tt-is-ts-star", &ss.intersection(&tt).dual_transitive_closure(u), &ts);

    let carrier: Vec<(StarMember, Relation)> = vec![
        (StarMember::Ts, ts),
        (StarMember::Ss, ss),
        (StarMember::Tt, tt),
        (StarMember::Union, union),
    ];
    for (m, r) in &carrier {
        set_eq(&format!("td-open {}", m.name()), &r.dual_transitive_closure(u), r);
    }
    // Members may coincide on a small universe, so the tables hold indices
    // and identities compare the underlying relations.
    let find = |r: &Relation| carrier.iter().position(|(_, x)| x == r);
    let rel = |i: usize| &carrier[i].1;
    let name = |i: usize| carrier[i].0.name();
    let n = carrier.len();
    let mut meet = vec![vec![None; n]; n];
    let mut join = vec![vec![None; n]; n];
    for x in 0..n {
        for y in 0..n {
            let m = rel(x).intersection(rel(y)).dual_transitive_closure(u);
            let j = rel(x).union(rel(y));
            meet[x][y] = find(&m);
            join[x][y] = find(&j);
            report.check(meet[x][y].is_some(), || {
                Finding::new("star-meet-closed", format!("{} ⊓ {} is not a family member", name(x), name(y)))
            });
            report.check(join[x][y].is_some(), || {
                Finding::new("star-join-closed", format!("{} ⊔ {} is not a family member", name(x), name(y)))
            });
            report.check(rel(x).is_subset(rel(y)) == (m == *rel(x)), || {
                Finding::new("star-order-by-meet", format!("{} vs {}", name(x), name(y)))
            });
        }
    }
    let closed = meet.iter().chain(&join).flatten().all(Option::is_some);
    if closed {
        let m = |a: usize, b: usize| meet[a][b].unwrap();
        let j = |a: usize, b: usize| join[a][b].unwrap();
        let same = |a: usize, b: usize| rel(a) == rel(b);
        for x in 0..n {
            report.check(same(m(x, x), x) && same(j(x, x), x), || Finding::new("star-idempotent", name(x)));
            for y in 0..n {
                report.check(same(m(x, y), m(y, x)) && same(j(x, y), j(y, x)), || {
                    Finding::new("star-commutative", format!("{} {}", name(x), name(y)))
                });
                report.check(same(j(x, m(x, y)), x) && same(m(x, j(x, y)), x), || {
                    Finding::new("star-absorption", format!("{} {}", name(x), name(y)))
                });
                for z in 0..n {
                    report.check(
                        same(m(m(x, y), z), m(x, m(y, z))) && same(j(j(x, y), z), j(x, j(y, z))),
                        || Finding::new("star-associative", format!("{} {} {}", name(x), name(y), name(z))),
                    );
                }
            }
        }
    }

    let ss_l: Logic = family.ss.clone().into();
    let tt_l: Logic = family.tt.clone().into();
    let ts_l: Logic = family.ts().into();
    let contra = parse_inference("p & ~p => q")?;
    let lem = parse_inference("p => q | ~q")?;
    let example = parse_inference("p & ~p => q | ~q")?;
    report.check(ss_l.in_star(&contra)? && !tt_l.in_star(&contra)?, || {
        Finding::new("star-incomparable", "expected in SS★ and not in TT★").at(contra.clone())
    });
    report.check(tt_l.in_star(&lem)? && !ss_l.in_star(&lem)?, || {
        Finding::new("star-incomparable", "expected in TT★ and not in SS★").at(lem.clone())
    });
    report.check(
        ss_l.in_star(&example)? && tt_l.in_star(&example)? && !ts_l.in_star(&example)?,
        || Finding::new("star-meet-gap", "expected in SS★ ∩ TT★ and not in TS★").at(example.clone()),
    );
    Ok(report)
}

/// Universe inferences with a classically unsatisfiable premise set or a
/// tautologous conclusion, decided with Boolean valuations only.
pub fn classical_star(u: &Universe) -> Result<Relation> {
    let mut theorem = vec![false; u.len()];
    for (i, f) in u.formulas().iter().enumerate() {
        theorem[i] = is_classical_theorem(f)?;
    }
    let mut r = Relation::empty(u);
    for g in 0..u.set_count() {
        let premises: BTreeSet<Formula> = u.set(g).iter().map(|&i| u.formula(i as usize).clone()).collect();
        let anti = is_classical_antitheorem(&premises)?;
        for (f, &thm) in theorem.iter().enumerate() {
            if anti || thm {
                r.insert(g, f);
            }
        }
    }
    Ok(r)
}

/// Sampled instances of reflexivity, monotonicity, cut and substitution for
/// one logic, drawn from consecutive corpus entries.
pub fn check_tarskian_instances(logic: &Logic, corpus: &[Inference]) -> Result<CheckReport> {
    let mut report = CheckReport::default();
    let label = logic.label();
    let n = corpus.len();
    for (i, inf) in corpus.iter().enumerate() {
        let next = &corpus[(i + 1) % n];
        let other = &corpus[(i + 2) % n];

        // (R)
        let refl = Inference::new(
            inf.premises.iter().cloned().chain([inf.conclusion.clone()]),
            inf.conclusion.clone(),
        );
        let ok = logic.is_valid(&refl)?;
        report.check(ok, || Finding::new(format!("reflexivity {label}"), "invalid").at(refl.clone()));

        let valid = logic.is_valid(inf)?;
        if valid {
            // (M)
            let wider = Inference::new(
                inf.premises.iter().cloned().chain([next.conclusion.clone()]),
                inf.conclusion.clone(),
            );
            report.check(logic.is_valid(&wider)?, || {
                Finding::new(format!("monotonicity {label}"), format!("weakening of `{inf}` fails")).at(wider.clone())
            });
            // (S)
            let sigma: crate::formula::Substitution = atoms_of([&inf.conclusion])
                .into_iter()
                .chain(atoms_of(&inf.premises))
                .zip(
                    [&next.conclusion, &other.conclusion]
                        .into_iter()
                        .chain(next.premises.iter())
                        .cycle(),
                )
                .map(|(a, f)| (a, f.clone()))
                .collect();
            let image = inf.substitute(&sigma);
            report.check(logic.is_valid(&image)?, || {
                Finding::new(format!("structurality {label}"), format!("instance of `{inf}` fails")).at(image.clone())
            });
        }

        // (T), with a single cut formula and with the next premise set.
        let target = Inference::new(inf.premises.iter().cloned(), next.conclusion.clone());
        let via = Inference::new([inf.conclusion.clone()], next.conclusion.clone());
        if valid && logic.is_valid(&via)? {
            report.check(logic.is_valid(&target)?, || {
                Finding::new(format!("transitivity {label}"), format!("cut on `{}` fails", inf.conclusion))
                    .at(target.clone())
            });
        }
        if !next.premises.is_empty() {
            let mut all = logic.is_valid(next)?;
            for d in &next.premises {
                if !all {
                    break;
                }
                all = logic.is_valid(&Inference::new(inf.premises.iter().cloned(), d.clone()))?;
            }
            if all {
                report.check(logic.is_valid(&target)?, || {
                    Finding::new(format!("transitivity {label}"), "cut on a premise set fails").at(target.clone())
                });
            }
        }
    }
    Ok(report)
}

/// Theorem and antitheorem deciders agree with their definitions through
/// fresh atoms: `Γ ⇒ p` valid for fresh `p` iff `Γ` is an antitheorem, and
/// `p ⇒ φ` valid iff `φ` is a theorem.
pub fn check_fresh_atom_characterization(l: &LogicSpec, inf: &Inference, fresh: &str) -> Result<bool> {
    let p = Formula::var(fresh);
    let anti = is_antitheorem(l, &inf.premises)?;
    let thm = is_theorem(l, &inf.conclusion)?;
    let to_fresh = l.is_valid(&Inference::new(inf.premises.iter().cloned(), p.clone()))?;
    let from_fresh = l.is_valid(&Inference::new([p], inf.conclusion.clone()))?;
    Ok(anti == to_fresh && thm == from_fresh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::UniverseSpec;
    use crate::formula::parse;
    use crate::scheme::{enumerate_bnm_schemes, preset, Preset};

    fn spec(p: Preset, std: Standard) -> LogicSpec {
        LogicSpec::new(preset(p), std).unwrap()
    }

    fn inf(s: &str) -> Inference {
        parse_inference(s).unwrap()
    }

    #[test]
    fn delta_examples() {
        let d = delta_witness(&inf(GAP_WITNESS));
        let expected: BTreeSet<Formula> = ["p | (q & ~q)", "p | ~p", "r | ~r"]
            .iter()
            .map(|s| parse(s).unwrap())
            .collect();
        assert_eq!(d, expected);
        assert_eq!(delta_witness(&inf("=> p | ~p")), [parse("p | ~p").unwrap()].into());
        assert_eq!(
            delta_witness(&inf("q => q")),
            [parse("q").unwrap(), parse("q | ~q").unwrap()].into()
        );
    }

    #[test]
    fn derive_examples() {
        let w = inf(GAP_WITNESS);
        let ss = spec(Preset::Strong, Standard::SS);
        for tt in [spec(Preset::Strong, Standard::TT), spec(Preset::Weak, Standard::TT)] {
            let witness = derive_classical(&w, &tt, &ss).unwrap().unwrap();
            assert!(witness.is_accepted());
            assert_eq!(witness.tt_checks.len(), 3);
            assert!(replay_witness(&witness).unwrap());
        }
        let tt = spec(Preset::Strong, Standard::TT);
        assert_eq!(derive_classical(&inf("p => q"), &tt, &ss).unwrap(), None);
        assert!(matches!(derive_classical(&w, &ss, &tt), Err(Error::Precondition(_))));
    }

    #[test]
    fn replay_needs_every_step() {
        let tt = spec(Preset::Strong, Standard::TT);
        let ss = spec(Preset::Strong, Standard::SS);
        let mut witness = derive_classical(&inf(GAP_WITNESS), &tt, &ss).unwrap().unwrap();
        witness.tt_checks.pop();
        assert!(!replay_witness(&witness).unwrap());
    }

    #[test]
    fn star_examples() {
        let u = Universe::new(&["p", "q", "r"], &[], 0, 1).unwrap();
        let ss: Logic = spec(Preset::Strong, Standard::SS).into();
        let tt: Logic = spec(Preset::Strong, Standard::TT).into();
        assert!(ss.in_star(&inf("p & ~p => q")).unwrap());
        assert!(tt.in_star(&inf("p => q | ~q")).unwrap());
        assert!(!tt.in_star(&inf("p & ~p => q")).unwrap());
        for s in enumerate_bnm_schemes() {
            let ts: Logic = LogicSpec::new(s, Standard::TS).unwrap().into();
            assert!(star_set(&ts, &u).unwrap().is_empty());
        }
    }

    #[test]
    fn td_matches_star_on_the_default_universe() {
        let u = UniverseSpec::default().build().unwrap();
        for std in [Standard::SS, Standard::TT, Standard::ST] {
            let l: Logic = spec(Preset::Strong, std).into();
            let r = check_td_equals_star(&l, &u).unwrap();
            assert!(r.passed(), "{std}: {:?}", r.failures.first());
            assert!(r.instances > 0);
        }
        let no_reserve = Universe::new(&["p"], &[], 1, 1).unwrap();
        let l: Logic = spec(Preset::Strong, Standard::SS).into();
        assert!(check_td_equals_star(&l, &no_reserve).is_err());
    }

    #[test]
    fn ts_collapse_examples() {
        let u = UniverseSpec::default().build().unwrap();
        let ss = spec(Preset::Strong, Standard::SS);
        for tt in [spec(Preset::Strong, Standard::TT), spec(Preset::Weak, Standard::TT)] {
            let r = check_ts_collapse(&ss, &tt, &u).unwrap();
            assert!(r.passed(), "{:?}", r.failures.first());
        }
    }

    #[test]
    fn union_gap_for_every_pair() {
        let schemes = enumerate_bnm_schemes();
        for a in &schemes {
            for b in &schemes {
                let ss = LogicSpec::new(a.clone(), Standard::SS).unwrap();
                let tt = LogicSpec::new(b.clone(), Standard::TT).unwrap();
                let r = check_union_gap(&ss, &tt).unwrap();
                assert!(r.passed(), "{:?}", r.failures);
            }
        }
    }

    #[test]
    fn join_and_meet_examples() {
        let d = Decider::of;
        assert_eq!(lattice_join(&d(Member::Ss), &d(Member::Tt)), d(Member::St));
        assert_eq!(lattice_join(&d(Member::SsTt), &d(Member::Tt)), d(Member::Tt));
        assert_eq!(lattice_join(&d(Member::Ss), &d(Member::Ss)), d(Member::Ss));
        let fam = LatticeFamily::new(
            spec(Preset::Strong, Standard::SS),
            spec(Preset::Strong, Standard::TT),
            spec(Preset::Strong, Standard::ST),
        )
        .unwrap();
        let meet = lattice_meet(&d(Member::Ss), &d(Member::Tt));
        assert!(fam.accepts(&meet, &inf("p => p")).unwrap());
        assert!(!fam.accepts(&meet, &inf("p & ~p => r")).unwrap());
        assert_eq!(lattice_meet(&d(Member::St), &d(Member::Ss)).as_member(), Member::Ss);
    }

    #[test]
    fn lattices_hold_for_strong_and_mixed_families() {
        let sample: InferenceSet = [
            GAP_WITNESS,
            "p & ~p => r",
            "=> p | ~p",
            "p => q",
            "p, q => p & q",
            "p & ~p => q | ~q",
        ]
        .iter()
        .map(|s| inf(s))
        .collect();
        let u = UniverseSpec::default().build().unwrap();
        for (s, t) in [(Preset::Strong, Preset::Strong), (Preset::Weak, Preset::Strong)] {
            let fam = LatticeFamily::new(
                spec(s, Standard::SS),
                spec(t, Standard::TT),
                spec(Preset::Middle, Standard::ST),
            )
            .unwrap();
            let r = verify_lattices(&fam, &sample).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
            let r = verify_star_lattice(&fam, &u).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
        }
    }

    #[test]
    fn tarskian_instances_and_fresh_atoms() {
        let corpus: Vec<Inference> = ["p => p | q", "q & r => q", "p, ~p => r", "=> q | ~q", "r => r"]
            .iter()
            .map(|s| inf(s))
            .collect();
        for std in [Standard::SS, Standard::TT, Standard::ST] {
            let l = spec(Preset::Weak, std);
            let r = check_tarskian_instances(&l.clone().into(), &corpus).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
            for i in &corpus {
                assert!(check_fresh_atom_characterization(&l, i, "z").unwrap());
            }
        }
    }
}
