//! Least fixpoint of the cut rule over a dense relation.
//!
//! Rows are processed one premise set at a time. For a row `Γ` with current
//! conclusions `D`, every nonempty `Δ ⊆ D` within the cap contributes the row
//! of `Δ`. Two strategies find those contributions: pulling (enumerate the
//! small subsets of `D`) and probing (for each missing conclusion, look up the
//! cut sets that yield it). Probing wins on nearly saturated rows. Rounds
//! repeat until nothing changes, skipping rows none of whose possible cut sets
//! changed since they were last processed.

use super::relation::{count, intersects, ones, or_into, set_bit, transpose, Relation};
use super::universe::Universe;

/// For each conclusion `φ`: the singletons `{δ}` with `{δ} ⇒ φ`, and for
/// each `δ1` the partners `δ2` with `{δ1, δ2} ⇒ φ`.
struct Columns {
    n: usize,
    w: usize,
    single: Vec<u64>,
    pair_heads: Vec<u64>,
    pair: Vec<u64>,
    with_pairs: bool,
}

impl Columns {
    fn build(rel: &Relation, u: &Universe) -> Self {
        let n = u.len();
        let w = rel.words;
        let with_pairs = u.cap() >= 2;
        let singles: Vec<u64> = (0..n).flat_map(|d| rel.row(u.singleton_rank(d)).iter().copied()).collect();
        let mut c = Columns {
            n,
            w,
            single: transpose(&singles, n, n),
            pair_heads: vec![0; if with_pairs { n * w } else { 0 }],
            pair: vec![0; if with_pairs { n * n * w } else { 0 }],
            with_pairs,
        };
        if with_pairs {
            // For a fixed head `x`, row `y` of the gathered matrix is the row
            // of `{x, y}`; its transpose holds the partners of `x` per `φ`.
            let mut gathered = vec![0u64; n * w];
            for x in 0..n {
                for y in 0..n {
                    let dst = &mut gathered[y * w..(y + 1) * w];
                    if y == x {
                        dst.fill(0);
                    } else {
                        dst.copy_from_slice(rel.row(u.pair_rank(x, y)));
                    }
                }
                let t = transpose(&gathered, n, n);
                for phi in 0..n {
                    let col = &t[phi * w..(phi + 1) * w];
                    if col.iter().any(|&b| b != 0) {
                        set_bit(&mut c.pair_heads[phi * w..(phi + 1) * w], x);
                        c.pair[(phi * n + x) * w..(phi * n + x + 1) * w].copy_from_slice(col);
                    }
                }
            }
        }
        c
    }

    /// Registers `set ⇒ φ` for each `φ` in `added`.
    fn record(&mut self, set: &[u32], added: &[u64]) {
        match *set {
            [d] => {
                for phi in ones(added) {
                    set_bit(&mut self.single[phi * self.w..(phi + 1) * self.w], d as usize);
                }
            }
            [a, b] if self.with_pairs => {
                let (a, b) = (a as usize, b as usize);
                for phi in ones(added) {
                    let heads = &mut self.pair_heads[phi * self.w..(phi + 1) * self.w];
                    set_bit(heads, a);
                    set_bit(heads, b);
                    let base = phi * self.n;
                    set_bit(&mut self.pair[(base + a) * self.w..(base + a + 1) * self.w], b);
                    set_bit(&mut self.pair[(base + b) * self.w..(base + b + 1) * self.w], a);
                }
            }
            _ => {}
        }
    }

    fn single(&self, phi: usize) -> &[u64] {
        &self.single[phi * self.w..(phi + 1) * self.w]
    }

    /// Some `Δ ⊆ d` of size one or two yields `φ`.
    fn derives(&self, phi: usize, d: &[u64]) -> bool {
        if intersects(self.single(phi), d) {
            return true;
        }
        if !self.with_pairs {
            return false;
        }
        let heads = &self.pair_heads[phi * self.w..(phi + 1) * self.w];
        let base = phi * self.n;
        for (wi, (&h, &dw)) in heads.iter().zip(d).enumerate() {
            let mut x = h & dw;
            while x != 0 {
                let a = wi * 64 + x.trailing_zeros() as usize;
                x &= x - 1;
                if intersects(&self.pair[(base + a) * self.w..(base + a + 1) * self.w], d) {
                    return true;
                }
            }
        }
        false
    }
}

/// Which cut sets of size one or two changed during a round.
struct Changes {
    w: usize,
    singles: Vec<u64>,
    heads: Vec<u64>,
    partners: Vec<u64>,
}

impl Changes {
    fn new(n: usize, w: usize, with_pairs: bool) -> Self {
        Changes {
            w,
            singles: vec![0; w],
            heads: vec![0; w],
            partners: vec![0; if with_pairs { n * w } else { 0 }],
        }
    }

    fn record(&mut self, set: &[u32]) {
        match *set {
            [d] => set_bit(&mut self.singles, d as usize),
            [a, b] => {
                let (a, b) = (a as usize, b as usize);
                set_bit(&mut self.heads, a);
                set_bit(&mut self.heads, b);
                set_bit(&mut self.partners[a * self.w..(a + 1) * self.w], b);
                set_bit(&mut self.partners[b * self.w..(b + 1) * self.w], a);
            }
            _ => {}
        }
    }

    fn touches(&self, d: &[u64]) -> bool {
        if intersects(&self.singles, d) {
            return true;
        }
        for (wi, (&h, &dw)) in self.heads.iter().zip(d).enumerate() {
            let mut x = h & dw;
            while x != 0 {
                let a = wi * 64 + x.trailing_zeros() as usize;
                x &= x - 1;
                if intersects(&self.partners[a * self.w..(a + 1) * self.w], d) {
                    return true;
                }
            }
        }
        false
    }
}

/// Closes `rel` under cut within `u`, visiting rows in `order` (all ranks
/// ascending when `None`).
pub(crate) fn saturate(rel: &mut Relation, u: &Universe, order: Option<&[usize]>) {
    let n = u.len();
    let w = rel.words;
    let k = u.cap();
    let default_order: Vec<usize>;
    let order = match order {
        Some(o) => o,
        None => {
            default_order = (0..u.set_count()).collect();
            &default_order
        }
    };
    let full = Relation::full(u).row(0).to_vec();
    let mut cols = Columns::build(rel, u);
    let mut prev = Changes::new(n, w, k >= 2);
    let mut first = true;

    let mut d = vec![0u64; w];
    let mut acc = vec![0u64; w];
    let mut missing = vec![0u64; w];
    let mut combo = Vec::with_capacity(k);
    loop {
        let mut cur = Changes::new(n, w, k >= 2);
        let mut any = false;
        for &g in order {
            d.copy_from_slice(rel.row(g));
            if d.iter().all(|&x| x == 0) || d == full {
                continue;
            }
            if !first && k <= 2 && !prev.touches(&d) && !cur.touches(&d) {
                continue;
            }
            let mut changed = false;
            loop {
                acc.copy_from_slice(&d);
                let size = count(&d);
                let absent = n - size;
                if k <= 2 && absent < size {
                    for (m, (&f, &x)) in missing.iter_mut().zip(full.iter().zip(&d)) {
                        *m = f & !x;
                    }
                    for phi in ones(&missing) {
                        if cols.derives(phi, &d) {
                            set_bit(&mut acc, phi);
                        }
                    }
                } else {
                    for delta in ones(&d) {
                        or_into(&mut acc, rel.row(u.singleton_rank(delta)));
                    }
                    // Larger cut sets only once singletons stop adding.
                    if k >= 2 && acc == d {
                        let members: Vec<u32> = ones(&d).map(|x| x as u32).collect();
                        if k == 2 {
                            pull_pairs(rel, u, &members, &mut acc);
                        } else {
                            pull_subsets(rel, u, &members, k, &mut combo, 0, &mut acc);
                        }
                    }
                }
                if acc == d {
                    break;
                }
                let mut added = vec![0u64; w];
                for (a, (&x, &y)) in added.iter_mut().zip(acc.iter().zip(&d)) {
                    *a = x & !y;
                }
                rel.row_mut(g).copy_from_slice(&acc);
                cols.record(u.set(g), &added);
                d.copy_from_slice(&acc);
                changed = true;
                if d == full {
                    break;
                }
            }
            if changed {
                any = true;
                cur.record(u.set(g));
            }
        }
        if !any {
            break;
        }
        prev = cur;
        first = false;
    }
}

/// ORs into `acc` the rows of every two-element subset of `members`. The
/// pairs `{a, b}` with a fixed larger element `b` occupy consecutive ranks.
fn pull_pairs(rel: &Relation, u: &Universe, members: &[u32], acc: &mut [u64]) {
    let w = rel.words;
    for (j, &b) in members.iter().enumerate().skip(1) {
        let base = u.pair_rank(0, b as usize);
        for &a in &members[..j] {
            let start = (base + a as usize) * w;
            for (x, y) in acc.iter_mut().zip(&rel.bits[start..start + w]) {
                *x |= y;
            }
        }
    }
}

/// ORs into `acc` the rows of every subset of `members` with size in
/// `2..=k`.
fn pull_subsets(
    rel: &Relation,
    u: &Universe,
    members: &[u32],
    k: usize,
    combo: &mut Vec<u32>,
    start: usize,
    acc: &mut [u64],
) {
    if combo.len() >= 2 {
        or_into(acc, rel.row(u.rank(combo)));
    }
    if combo.len() == k {
        return;
    }
    for i in start..members.len() {
        combo.push(members[i]);
        pull_subsets(rel, u, members, k, combo, i + 1, acc);
        combo.pop();
    }
}
