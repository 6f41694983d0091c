use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::formula::Inference;

use super::relation::Relation;
use super::universe::Universe;
use super::InferenceSet;

pub const LAWS: [&str; 9] = [
    "t-extensive",
    "t-monotone",
    "t-idempotent",
    "td-contractive",
    "td-monotone",
    "td-idempotent",
    "t-order-independent",
    "duality-td",
    "duality-t",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawFailure {
    pub sample: usize,
    pub law: String,
    pub witness: Option<Inference>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub samples: usize,
    pub checks: usize,
    pub failures: Vec<LawFailure>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks every law in [`LAWS`] on each sample. Monotonicity compares a
/// sample with its union (and intersection) with the next sample over the
/// same universe. Row order for the order-independence law comes from `seed`.
pub fn check_operator_laws(samples: &[(InferenceSet, &Universe)], seed: u64) -> LawReport {
    let mut report = LawReport::default();
    let mut rels = Vec::with_capacity(samples.len());
    for (i, (set, u)) in samples.iter().enumerate() {
        match Relation::from_set(u, set) {
            Ok(r) => rels.push((i, r, *u)),
            Err(_) => report.failures.push(LawFailure {
                sample: i,
                law: "membership".into(),
                witness: set.iter().find(|inf| !u.contains(inf)).cloned(),
            }),
        }
    }
    run(&rels, seed, &mut report);
    report.samples = samples.len();
    report
}

/// [`check_operator_laws`] on samples already materialized as relations.
pub fn check_relation_laws(samples: &[(Relation, &Universe)], seed: u64) -> LawReport {
    let rels: Vec<(usize, Relation, &Universe)> = samples
        .iter()
        .enumerate()
        .map(|(i, (r, u))| (i, r.clone(), *u))
        .collect();
    let mut report = LawReport::default();
    run(&rels, seed, &mut report);
    report.samples = samples.len();
    report
}

fn run(samples: &[(usize, Relation, &Universe)], seed: u64, report: &mut LawReport) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (i, (sample, x, u)) in samples.iter().enumerate() {
        let z = (1..samples.len())
            .map(|d| (i + d) % samples.len())
            .find(|&j| std::ptr::eq(samples[j].2, *u))
            .map_or(x, |j| &samples[j].1);
        let mut order: Vec<usize> = (0..u.set_count()).collect();
        order.shuffle(&mut rng);
        for (law, outcome) in laws_on(x, z, u, &order) {
            report.checks += 1;
            if let Err(at) = outcome {
                report.failures.push(LawFailure {
                    sample: *sample,
                    law: law.into(),
                    witness: at.map(|(g, f)| u.inference(g, f)),
                });
            }
        }
    }
}

type Outcome = Result<(), Option<(usize, usize)>>;

fn subset(a: &Relation, b: &Relation) -> Outcome {
    match a.first_outside(b) {
        None => Ok(()),
        Some(at) => Err(Some(at)),
    }
}

fn equal(a: &Relation, b: &Relation) -> Outcome {
    subset(a, b).and(subset(b, a))
}

/// Outcome of each law for sample `x` with companion `z`.
pub(crate) fn laws_on(
    x: &Relation,
    z: &Relation,
    u: &Universe,
    order: &[usize],
) -> Vec<(&'static str, Outcome)> {
    let tx = x.transitive_closure(u);
    let dx = x.dual_transitive_closure(u);
    let comp_dx = dx.complement();
    vec![
        (LAWS[0], subset(x, &tx)),
        (LAWS[1], subset(&tx, &x.union(z).transitive_closure(u))),
        (LAWS[2], equal(&tx.transitive_closure(u), &tx)),
        (LAWS[3], subset(&dx, x)),
        (LAWS[4], subset(&x.intersection(z).dual_transitive_closure(u), &dx)),
        (LAWS[5], equal(&dx.dual_transitive_closure(u), &dx)),
        (LAWS[6], equal(&x.transitive_closure_in_order(u, order), &tx)),
        (LAWS[7], equal(&comp_dx.transitive_closure(u), &comp_dx).and(open_is_fixed(x, &dx, u))),
        (LAWS[8], equal(&tx, &x.complement().dual_transitive_closure(u).complement())),
    ]
}

/// A set whose complement is already closed is its own dual closure.
fn open_is_fixed(x: &Relation, dx: &Relation, u: &Universe) -> Outcome {
    let comp = x.complement();
    if comp.transitive_closure(u) == comp {
        equal(dx, x)
    } else {
        Ok(())
    }
}
