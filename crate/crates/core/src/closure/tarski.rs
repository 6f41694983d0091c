use crate::error::{Error, Result};
use crate::formula::Substitution;

use super::relation::{ones, or_into, Relation};
use super::saturate::saturate;
use super::universe::Universe;

/// Bound on substitutions times premise sets visited per substitution pass.
pub const SUBSTITUTION_WORK_CAP: u128 = 50_000_000;

const NONE: u32 = u32::MAX;

pub(crate) fn tarskian_closure(base: &Relation, u: &Universe) -> Result<Relation> {
    let images = substitution_images(u)?;
    let mut r = base.clone();
    loop {
        let before = r.clone();
        for f in 0..u.len() {
            r.insert(u.singleton_rank(f), f);
        }
        widen(&mut r, u);
        saturate(&mut r, u, None);
        for img in images.chunks(u.len()) {
            apply(&mut r, u, img);
        }
        if r == before {
            return Ok(r);
        }
    }
}

/// Propagates every row to the premise sets one larger.
fn widen(r: &mut Relation, u: &Universe) {
    let mut sup = Vec::with_capacity(u.cap());
    for g in 0..u.set_count() {
        let set = u.set(g);
        if set.len() >= u.cap() {
            break;
        }
        let row = r.row(g).to_vec();
        if row.iter().all(|&w| w == 0) {
            continue;
        }
        for x in 0..u.len() as u32 {
            if set.contains(&x) {
                continue;
            }
            sup.clear();
            sup.extend_from_slice(set);
            sup.push(x);
            sup.sort_unstable();
            let h = u.rank(&sup);
            or_into(r.row_mut(h), &row);
        }
    }
}

fn apply(r: &mut Relation, u: &Universe, img: &[u32]) {
    let mut mapped = Vec::with_capacity(u.cap());
    for g in 0..u.set_count() {
        if r.row(g).iter().all(|&w| w == 0) {
            continue;
        }
        mapped.clear();
        let mut ok = true;
        for &m in u.set(g) {
            let i = img[m as usize];
            if i == NONE {
                ok = false;
                break;
            }
            mapped.push(i);
        }
        if !ok {
            continue;
        }
        mapped.sort_unstable();
        mapped.dedup();
        let h = u.rank(&mapped);
        let row = r.row(g).to_vec();
        for phi in ones(&row) {
            let i = img[phi];
            if i != NONE {
                r.insert(h, i as usize);
            }
        }
    }
}

/// For every map from the universe atoms to universe formulas other than the
/// identity, the image position of each formula (or `NONE` when it leaves the
/// universe), concatenated.
fn substitution_images(u: &Universe) -> Result<Vec<u32>> {
    let n = u.len();
    let atoms = u.atoms();
    let count = (n as u128).saturating_pow(atoms.len() as u32);
    let work = count.saturating_mul(u.set_count() as u128);
    if work > SUBSTITUTION_WORK_CAP {
        return Err(Error::Resource {
            what: "substitution instances in Tarskian closure",
            count: work,
            cap: SUBSTITUTION_WORK_CAP,
        });
    }
    let atom_pos: Vec<Option<usize>> = atoms
        .iter()
        .map(|a| u.formula_index(&crate::formula::Formula::var(a.as_str())))
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; atoms.len()];
    loop {
        let identity = choice
            .iter()
            .zip(&atom_pos)
            .all(|(c, p)| Some(*c) == *p);
        if !identity {
            let sigma: Substitution = atoms
                .iter()
                .cloned()
                .zip(choice.iter().map(|&c| u.formula(c).clone()))
                .collect();
            for f in u.formulas() {
                let image = f.substitute(&sigma);
                out.push(u.formula_index(&image).map_or(NONE, |i| i as u32));
            }
        }
        let mut i = atoms.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < n {
                break;
            }
            choice[i] = 0;
        }
    }
}
