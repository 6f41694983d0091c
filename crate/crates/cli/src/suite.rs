//! The verification suite behind `verify`: one function per claim, each
//! producing a [`ClaimReport`].

use std::cell::OnceCell;
use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trivalent::characterize::{
    check_tarskian_instances, check_td_equals_star, check_ts_collapse, check_union_gap, derive_classical,
    replay_witness, verify_lattices, verify_star_lattice, CheckReport, Finding, LatticeFamily, Member,
    GAP_WITNESS,
};
use trivalent::closure::{check_relation_laws, InferenceSet, Relation, Universe, LAWS};
use trivalent::corpus::{small_exhaustive_corpus, RandomCorpus};
use trivalent::formula::parse_inference;
use trivalent::scheme::{enumerate_bnm_schemes, preset, Preset};
use trivalent::semantics::{find_countervaluation, is_classically_valid, satisfies_inference};
use trivalent::{Error, Inference, Logic, LogicSpec, Result, Scheme, Standard, TruthValue, Valuation};

use crate::config::SchemeSet;
use crate::report::{ClaimReport, VerifyReport};

pub const CLAIMS: [&str; 10] = [
    "schemes",
    "theorem1",
    "theorem2",
    "theorem3",
    "theorem4",
    "theorem5",
    "operator-laws",
    "lattice",
    "star-lattice",
    "tarskian",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Size of the random corpus.
    pub sample: usize,
    /// Prefix of the random corpus used for every scheme pair.
    pub reduced: usize,
    /// Random sets per micro-universe for the operator laws.
    pub law_samples: usize,
    pub schemes: SchemeSet,
    /// Claims to run; empty means all.
    pub only: Vec<String>,
    pub timed: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 42,
            sample: 10_000,
            reduced: 500,
            law_samples: 100,
            schemes: SchemeSet::AllPairs,
            only: Vec::new(),
            timed: true,
        }
    }
}

/// Runs the selected claims in their fixed order.
pub fn run(cfg: &SuiteConfig, timestamp: Option<u64>) -> Result<VerifyReport> {
    for name in &cfg.only {
        if !CLAIMS.contains(&name.as_str()) {
            return Err(Error::Precondition(format!(
                "unknown claim `{name}`; expected one of {}",
                CLAIMS.join(", ")
            )));
        }
    }
    let ctx = Context::new(cfg);
    let mut claims = Vec::new();
    for name in CLAIMS {
        if !cfg.only.is_empty() && !cfg.only.iter().any(|o| o == name) {
            continue;
        }
        claims.push(run_claim(&ctx, name).unwrap_or_else(|e| ClaimReport::errored(name, &e)));
    }
    Ok(VerifyReport::new(cfg.seed, claims, timestamp))
}

pub fn run_claim(ctx: &Context, name: &str) -> Result<ClaimReport> {
    let start = Instant::now();
    let mut report = match name {
        "schemes" => schemes(ctx),
        "theorem1" => theorem1(ctx),
        "theorem2" => theorem2(ctx),
        "theorem3" => theorem3(ctx),
        "theorem4" => theorem4(ctx),
        "theorem5" => theorem5(ctx),
        "operator-laws" => operator_laws(ctx),
        "lattice" => lattice(ctx),
        "star-lattice" => star_lattice(ctx),
        "tarskian" => tarskian(ctx),
        other => Err(Error::Precondition(format!("unknown claim `{other}`"))),
    }?;
    report.claim = name.into();
    if ctx.cfg.timed {
        report.runtime_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// Corpora, universes and per-scheme verdicts shared between claims.
pub struct Context<'a> {
    cfg: &'a SuiteConfig,
    schemes: Vec<Scheme>,
    exhaustive: OnceCell<Vec<Inference>>,
    random: OnceCell<Vec<Inference>>,
    classical: OnceCell<Vec<bool>>,
    verdicts: OnceCell<Verdicts>,
    u1: OnceCell<Universe>,
    u2: OnceCell<Universe>,
}

/// ss and tt validity of every random-corpus inference, per scheme.
struct Verdicts {
    ss: Vec<Vec<bool>>,
    tt: Vec<Vec<bool>>,
}

impl<'a> Context<'a> {
    pub fn new(cfg: &'a SuiteConfig) -> Self {
        let schemes = match cfg.schemes {
            SchemeSet::AllPairs => enumerate_bnm_schemes(),
            SchemeSet::Presets => Preset::ALL.map(preset).to_vec(),
        };
        Context {
            cfg,
            schemes,
            exhaustive: OnceCell::new(),
            random: OnceCell::new(),
            classical: OnceCell::new(),
            verdicts: OnceCell::new(),
            u1: OnceCell::new(),
            u2: OnceCell::new(),
        }
    }

    fn exhaustive(&self) -> &[Inference] {
        self.exhaustive.get_or_init(small_exhaustive_corpus)
    }

    fn random(&self) -> &[Inference] {
        self.random
            .get_or_init(|| RandomCorpus::default().with_size(self.cfg.sample).generate(self.cfg.seed))
    }

    fn reduced(&self) -> &[Inference] {
        let r = self.random();
        &r[..self.cfg.reduced.min(r.len())]
    }

    /// Classical validity of the random corpus.
    fn classical(&self) -> Result<&[bool]> {
        if self.classical.get().is_none() {
            let v = self.random().iter().map(is_classically_valid).collect::<Result<_>>()?;
            let _ = self.classical.set(v);
        }
        Ok(self.classical.get().unwrap())
    }

    fn verdicts(&self) -> Result<&Verdicts> {
        if self.verdicts.get().is_none() {
            let table = |std: Standard| -> Result<Vec<Vec<bool>>> {
                self.schemes
                    .iter()
                    .map(|s| {
                        let l = LogicSpec::new(s.clone(), std)?;
                        self.random().iter().map(|i| l.is_valid(i)).collect()
                    })
                    .collect()
            };
            let v = Verdicts {
                ss: table(Standard::SS)?,
                tt: table(Standard::TT)?,
            };
            let _ = self.verdicts.set(v);
        }
        Ok(self.verdicts.get().unwrap())
    }

    /// Atoms `{p, q}`, reserve `{r}`, depth 1, cap 2.
    fn u1(&self) -> Result<&Universe> {
        if self.u1.get().is_none() {
            let _ = self.u1.set(Universe::new(&["p", "q"], &["r"], 1, 2)?);
        }
        Ok(self.u1.get().unwrap())
    }

    /// Atoms `{p}`, reserve `{q}`, depth 2, cap 2.
    fn u2(&self) -> Result<&Universe> {
        if self.u2.get().is_none() {
            let _ = self.u2.set(Universe::new(&["p"], &["q"], 2, 2)?);
        }
        Ok(self.u2.get().unwrap())
    }

    fn universes(&self) -> Result<[&Universe; 2]> {
        Ok([self.u1()?, self.u2()?])
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.schemes.len();
        (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)))
    }
}

fn spec(s: &Scheme, std: Standard) -> Result<LogicSpec> {
    LogicSpec::new(s.clone(), std)
}

fn universe_name(u: &Universe) -> String {
    format!("{} formulas, {} inferences", u.len(), u.inference_count())
}

/// The three scheme assignments `(ss, tt, st)` used by the universe claims.
fn assignments() -> Result<Vec<LatticeFamily>> {
    let fam = |ss, tt, st| {
        LatticeFamily::new(
            spec(&preset(ss), Standard::SS)?,
            spec(&preset(tt), Standard::TT)?,
            spec(&preset(st), Standard::ST)?,
        )
    };
    Ok(vec![
        fam(Preset::Strong, Preset::Strong, Preset::Strong)?,
        fam(Preset::Weak, Preset::Weak, Preset::Weak)?,
        fam(Preset::Weak, Preset::Strong, Preset::Middle)?,
    ])
}

fn schemes(ctx: &Context) -> Result<ClaimReport> {
    let mut r = CheckReport::default();
    let all = enumerate_bnm_schemes();
    r.check(all.len() == 16, || Finding::new("count", format!("{} schemes", all.len())));
    let ids: BTreeSet<Option<u8>> = all.iter().map(Scheme::id).collect();
    r.check(ids.len() == all.len() && !ids.contains(&None), || {
        Finding::new("ids", "ids are missing or repeated")
    });
    for s in &all {
        r.check(s.is_bnm(), || Finding::new("bnm", s.label()));
    }
    for p in Preset::ALL {
        r.check(all.iter().any(|s| s.same_tables(&preset(p))), || Finding::new("preset", p.name()));
    }
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            r.check(!a.same_tables(b), || Finding::new("distinct", format!("{} = {}", a.label(), b.label())));
        }
    }
    let _ = ctx;
    Ok(ClaimReport::from_checks("schemes", r))
}

fn theorem1(ctx: &Context) -> Result<ClaimReport> {
    let mut r = CheckReport::default();
    let classical_random = ctx.classical()?;
    let classical_small: Vec<bool> = ctx.exhaustive().iter().map(is_classically_valid).collect::<Result<_>>()?;
    for s in &ctx.schemes {
        let st = spec(s, Standard::ST)?;
        let corpora = [(ctx.exhaustive(), &classical_small[..]), (ctx.random(), classical_random)];
        for (corpus, classical) in corpora {
            for (inf, &cl) in corpus.iter().zip(classical) {
                let cv = find_countervaluation(&st, inf)?;
                r.check(cv.is_none() == cl, || {
                    Finding::new(
                        format!("st-equals-classical {}", st.label()),
                        if cl { "classically valid but st-invalid" } else { "st-valid but classically invalid" },
                    )
                    .at(inf.clone())
                    .with_valuation(cv.clone())
                });
            }
        }
    }
    Ok(ClaimReport::from_checks("theorem1", r))
}

fn theorem2(ctx: &Context) -> Result<ClaimReport> {
    let mut r = CheckReport::default();
    for s in &ctx.schemes {
        let ts = spec(s, Standard::TS)?;
        for inf in ctx.exhaustive().iter().chain(ctx.random()) {
            let middle = Valuation::all_middle(&inf.atoms());
            let refuted = !satisfies_inference(s, &middle, inf, Standard::TS)?;
            let invalid = !ts.is_valid(inf)?;
            r.check(refuted && invalid, || {
                Finding::new(format!("ts-empty {}", ts.label()), "not refuted by the all-i valuation")
                    .at(inf.clone())
                    .with_valuation(Some(middle.clone()))
            });
        }
    }
    Ok(ClaimReport::from_checks("theorem2", r))
}

fn theorem3(ctx: &Context) -> Result<ClaimReport> {
    let mut r = CheckReport::default();
    let schemes = &ctx.schemes;
    for (a, b) in ctx.pairs() {
        r.merge(check_union_gap(&spec(&schemes[a], Standard::SS)?, &spec(&schemes[b], Standard::TT)?)?);
    }

    let w = parse_inference(GAP_WITNESS)?;
    let strong = preset(Preset::Strong);
    let val = |p, q, rr| Valuation::new().with("p", p).with("q", q).with("r", rr);
    let printed = [
        (Standard::SS, val(TruthValue::T, TruthValue::F, TruthValue::I)),
        (Standard::TT, val(TruthValue::F, TruthValue::I, TruthValue::F)),
    ];
    for (std, v) in printed {
        r.check(!satisfies_inference(&strong, &v, &w, std)?, || {
            Finding::new(format!("printed-valuation strong/{std}"), "does not falsify the witness")
                .at(w.clone())
                .with_valuation(Some(v.clone()))
        });
    }

    let classical = ctx.classical()?;
    let verdicts = ctx.verdicts()?;
    let mut fewest = usize::MAX;
    for (a, b) in ctx.pairs() {
        let separating = (0..classical.len())
            .filter(|&i| classical[i] && !verdicts.ss[a][i] && !verdicts.tt[b][i])
            .count();
        fewest = fewest.min(separating);
        r.check(separating > 0, || {
            Finding::new(
                "corpus-separation",
                format!(
                    "no corpus inference separates ss={} tt={} from st",
                    schemes[a].label(),
                    schemes[b].label()
                ),
            )
        });
    }
    let mut claim = ClaimReport::from_checks("theorem3", r);
    claim
        .notes
        .push(format!("fewest separating corpus inferences for a scheme pair: {fewest}"));
    Ok(claim)
}

fn theorem4(ctx: &Context) -> Result<ClaimReport> {
    let mut r = CheckReport::default();
    let schemes = &ctx.schemes;
    let classical = ctx.classical()?;
    let strong = preset(Preset::Strong);
    let full_pairs = [(strong.clone(), strong)];
    let pair_runs = ctx
        .pairs()
        .map(|(t, s)| (schemes[t].clone(), schemes[s].clone(), ctx.reduced()))
        .chain(full_pairs.iter().map(|(t, s)| (t.clone(), s.clone(), ctx.random())));
    for (tt_s, ss_s, corpus) in pair_runs {
        let tt = spec(&tt_s, Standard::TT)?;
        let ss = spec(&ss_s, Standard::SS)?;
        for (inf, &cl) in corpus.iter().zip(classical) {
            if !cl {
                continue;
            }
            let w = derive_classical(inf, &tt, &ss)?;
            r.check(w.as_ref().is_some_and(|w| w.is_accepted()), || {
                Finding::new(
                    format!("derive tt={} ss={}", tt.label(), ss.label()),
                    "no accepted two-step witness",
                )
                .at(inf.clone())
            });
        }
    }

    // The witness steps do not depend on the schemes, so one replay per
    // inference covers every pair.
    let tt = spec(&preset(Preset::Strong), Standard::TT)?;
    let ss = spec(&preset(Preset::Strong), Standard::SS)?;
    let mut replayed = BTreeSet::new();
    for (inf, &cl) in ctx.random().iter().zip(classical) {
        if !cl || !replayed.insert(inf) {
            continue;
        }
        if let Some(w) = derive_classical(inf, &tt, &ss)? {
            r.check(replay_witness(&w)?, || {
                Finding::new("replay", "cut closure of the witness misses the target").at(inf.clone())
            });
        }
    }

    let u = ctx.u1()?;
    let ss_rel: Vec<Relation> = schemes.iter().map(|s| u.valid(&spec(s, Standard::SS)?.into())).collect::<Result<_>>()?;
    let tt_rel: Vec<Relation> = schemes.iter().map(|s| u.valid(&spec(s, Standard::TT)?.into())).collect::<Result<_>>()?;
    let st_rel = u.valid(&spec(&preset(Preset::Strong), Standard::ST)?.into())?;
    for (a, b) in ctx.pairs() {
        let closed = ss_rel[a].union(&tt_rel[b]).transitive_closure(u);
        let outside = closed.first_outside(&st_rel);
        r.check(outside.is_none(), || {
            let (g, f) = outside.unwrap();
            Finding::new(
                format!("closure-within-st ss={} tt={}", schemes[a].label(), schemes[b].label()),
                "cut closure leaves st",
            )
            .at(u.inference(g, f))
        });
    }
    let mut claim = ClaimReport::from_checks("theorem4", r);
    claim.notes.push(format!("replayed {} distinct witnesses", replayed.len()));
    Ok(claim)
}

fn theorem5(ctx: &Context) -> Result<ClaimReport> {
    let mut r = CheckReport::default();
    for u in ctx.universes()? {
        for fam in assignments()? {
            for m in Member::ALL {
                r.merge(check_td_equals_star(&fam.logic(m), u)?);
            }
            r.merge(check_ts_collapse(&fam.ss, &fam.tt, u)?);
        }
    }
    Ok(ClaimReport::from_checks("theorem5", r))
}

fn operator_laws(ctx: &Context) -> Result<ClaimReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed);
    let all = enumerate_bnm_schemes();
    let standards = [Standard::SS, Standard::TT, Standard::ST, Standard::TS];
    let mut r = CheckReport::default();
    let mut notes = Vec::new();
    for (which, u) in ctx.universes()?.into_iter().enumerate() {
        let mut samples = Vec::with_capacity(ctx.cfg.law_samples);
        for i in 0..ctx.cfg.law_samples {
            // On the small universe every other sample is a semantic
            // relation with noise added.
            let x = if which == 0 && i % 2 == 1 {
                let l = LogicSpec::new(all[rng.gen_range(0..all.len())].clone(), standards[rng.gen_range(0..4)])?;
                let noise = rng.gen_range(0..64);
                u.valid(&l.into())?.union(&Relation::sample(u, noise, &mut rng))
            } else {
                let size = rng.gen_range(1..=u.inference_count().min(20_000) / 10);
                Relation::sample(u, size, &mut rng)
            };
            samples.push((x, u));
        }
        let laws = check_relation_laws(&samples, rng.gen());
        r.instances += laws.checks as u64;
        for f in laws.failures {
            let mut finding = Finding::new(f.law, format!("sample {} on {}", f.sample, universe_name(u)));
            finding.inference = f.witness;
            r.failures.push(finding);
        }
        notes.push(format!("{} samples on {}", samples.len(), universe_name(u)));
    }
    let mut claim = ClaimReport::from_checks("operator-laws", r);
    notes.push(format!("laws: {}", LAWS.join(", ")));
    claim.notes = notes;
    Ok(claim)
}

fn lattice(ctx: &Context) -> Result<ClaimReport> {
    let sample: InferenceSet = ctx.random().iter().cloned().collect();
    let families = [assignments()?.swap_remove(0), assignments()?.swap_remove(2)];
    let mut r = CheckReport::default();
    for fam in &families {
        r.merge(verify_lattices(fam, &sample)?);
    }

    // Order by closure of the union, on the small universe.
    let u = ctx.u1()?;
    for fam in &families {
        let rels: Vec<(Member, Relation)> = Member::ALL
            .iter()
            .map(|&m| Ok((m, u.valid(&fam.logic(m))?)))
            .collect::<Result<_>>()?;
        for (x, rx) in &rels {
            for (y, ry) in &rels {
                let by_closure = rx.union(ry).transitive_closure(u) == *ry;
                r.check(rx.is_subset(ry) == by_closure, || {
                    Finding::new(format!("order-by-closure {}", fam.label()), format!("{x} vs {y}"))
                });
                if x.leq(*y) {
                    r.check(rx.is_subset(ry), || {
                        Finding::new(format!("inclusion {}", fam.label()), format!("{x} ⊆ {y} fails"))
                    });
                }
            }
        }
    }
    Ok(ClaimReport::from_checks("lattice", r))
}

fn star_lattice(ctx: &Context) -> Result<ClaimReport> {
    let mut r = CheckReport::default();
    let mut notes = Vec::new();
    let families = [assignments()?.swap_remove(0), assignments()?.swap_remove(2)];
    for u in ctx.universes()? {
        for fam in &families {
            r.merge(verify_star_lattice(fam, u)?);
            if u.star(&fam.tt.clone().into())?.is_empty() {
                notes.push(format!("TT★ is empty on {} ({})", universe_name(u), fam.label()));
            }
        }
    }
    let mut claim = ClaimReport::from_checks("star-lattice", r);
    claim.notes = notes;
    Ok(claim)
}

fn tarskian(ctx: &Context) -> Result<ClaimReport> {
    let mut r = CheckReport::default();
    let u = ctx.u1()?;
    let families = assignments()?;
    for fam in &families {
        let l1 = u.valid(&fam.ss.clone().into())?;
        let l2 = u.valid(&fam.tt.clone().into())?;
        for (name, l) in [("ss", &l1), ("tt", &l2)] {
            r.check(l.is_tarskian_closed(u)?, || {
                Finding::new(format!("tarskian-closed {}", fam.label()), format!("{name} is not closed"))
            });
        }
        let union = l1.union(&l2);
        let t = union.transitive_closure(u);
        let tar = union.tarskian_closure(u)?;
        let diff = tar.first_outside(&t).or_else(|| t.first_outside(&tar));
        r.check(diff.is_none(), || {
            let (g, f) = diff.unwrap();
            Finding::new(format!("tar-equals-t {}", fam.label()), "closures differ").at(u.inference(g, f))
        });
    }

    let corpus = ctx.random();
    for fam in [&families[0], &families[2]] {
        for m in Member::ALL {
            let logic: Logic = fam.logic(m);
            r.merge(check_tarskian_instances(&logic, corpus)?);
        }
    }
    let mut claim = ClaimReport::from_checks("tarskian", r);
    claim
        .notes
        .push("the meet of ss and tt over different schemes is included in the sampled checks".into());
    Ok(claim)
}
