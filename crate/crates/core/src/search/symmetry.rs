//! Row-permutation symmetry for orderly generation of column sets.
//!
//! A column set `S` (kept as an ascending id list) is canonical when no row
//! permutation `π` maps it to a set whose sorted id list is lexicographically
//! smaller. Removing the largest id from a canonical set leaves a canonical
//! set, so the search extends canonical sets by larger ids and tests only the
//! child. For each permutation we remember how `sorted π(S)` compares with `S`:
//! either equal (a stabilizer) or larger with first difference at position
//! `i`, stored as the threshold `S[i]`. Appending `x` with image `y = π(x)`:
//!
//! * stabilizer: `y < x` makes the child smaller; `y > x` sets threshold `x`;
//! * threshold `t`: `y < t` makes the child smaller, `y > t` changes nothing,
//!   and `y = t` needs an exact comparison.

use std::cmp::Ordering;

use crate::canon::canonical_form;
use crate::matrix::{ColumnId, Matrix};

/// Permutation tables are built when `n! · (l+1)^n` stays below this.
const TABLE_LIMIT: usize = 1 << 24;

/// Images of every column id under every non-identity row permutation.
pub(crate) struct PermTable {
    perms: usize,
    /// `image[x * perms + π]`.
    image: Vec<u16>,
}

impl PermTable {
    pub(crate) fn new(n: usize, alphabet: u8) -> Option<PermTable> {
        let universe = ColumnId::universe(n, alphabet)? as usize;
        if universe > u16::MAX as usize + 1 || n > 10 {
            return None;
        }
        let all = crate::engine::permutations(n);
        let perms = all.len() - 1;
        if perms.checked_mul(universe)? > TABLE_LIMIT {
            return None;
        }
        let mut image = vec![0u16; universe * perms];
        for x in 0..universe {
            let col = ColumnId(x as u64).decode(n, alphabet);
            // all[0] is the identity (permutations are sorted).
            for (p, perm) in all[1..].iter().enumerate() {
                let moved: Vec<u8> = perm.iter().map(|&r| col[r]).collect();
                image[x * perms + p] = ColumnId::encode(&moved, alphabet).0 as u16;
            }
        }
        Some(PermTable { perms, image })
    }

    fn row(&self, x: u16) -> &[u16] {
        let x = x as usize;
        &self.image[x * self.perms..(x + 1) * self.perms]
    }
}

/// Canonicity bookkeeping for the current prefix; one per worker.
pub(crate) enum Canon<'a> {
    /// No symmetry rejection (every ascending set is explored).
    Off,
    Table(TableCanon<'a>),
    /// Exact check through [`canonical_form`] for orders without a table.
    Direct { n: usize, alphabet: u8 },
}

pub(crate) struct TableCanon<'a> {
    table: &'a PermTable,
    /// Threshold per permutation; 0 for stabilizers, which never reject on
    /// the `y < t` test and are handled through `stabs`.
    threshold: Vec<u16>,
    stabilizer: Vec<bool>,
    stabs: Vec<u32>,
    /// Undo log: (permutation, old threshold, was stabilizer).
    log: Vec<(u32, u16, bool)>,
    marks: Vec<usize>,
    /// Stabilizer lists replaced by each push, `None` when unchanged.
    stab_history: Vec<Option<Vec<u32>>>,
    /// Scratch: permutations whose status changes when the pending child is
    /// accepted, with their new threshold (`None` = stays a stabilizer).
    pending: Vec<(u32, Option<u16>)>,
}

impl<'a> Canon<'a> {
    pub(crate) fn new(table: Option<&'a PermTable>, enabled: bool, n: usize, alphabet: u8) -> Canon<'a> {
        match (enabled, table) {
            (false, _) => Canon::Off,
            (true, Some(table)) => Canon::Table(TableCanon {
                table,
                threshold: vec![0; table.perms],
                stabilizer: vec![true; table.perms],
                stabs: (0..table.perms as u32).collect(),
                log: Vec::new(),
                marks: Vec::new(),
                stab_history: Vec::new(),
                pending: Vec::new(),
            }),
            (true, None) => Canon::Direct { n, alphabet },
        }
    }

    /// Resets the state to describe the ascending prefix `set`. Returns false
    /// when `set` itself is not canonical.
    pub(crate) fn load(&mut self, set: &[u16]) -> bool {
        match self {
            Canon::Off => true,
            Canon::Direct { n, alphabet } => set.is_empty() || is_canonical_direct(set, *n, *alphabet),
            Canon::Table(tc) => {
                tc.log.clear();
                tc.marks.clear();
                tc.stab_history.clear();
                tc.stabs.clear();
                for p in 0..tc.table.perms {
                    match compare_image(tc.table, p, set) {
                        Compare::Smaller => return false,
                        Compare::Equal => {
                            tc.threshold[p] = 0;
                            tc.stabilizer[p] = true;
                            tc.stabs.push(p as u32);
                        }
                        Compare::Larger(t) => {
                            tc.threshold[p] = t;
                            tc.stabilizer[p] = false;
                        }
                    }
                }
                true
            }
        }
    }

    /// Whether `set + [x]` is canonical, given that `set` is. On success the
    /// caller must follow with [`push`](Self::push) or discard via another
    /// `accepts` call.
    pub(crate) fn accepts(&mut self, set: &[u16], x: u16) -> bool {
        match self {
            Canon::Off => true,
            Canon::Direct { n, alphabet } => {
                let mut s = set.to_vec();
                s.push(x);
                is_canonical_direct(&s, *n, *alphabet)
            }
            Canon::Table(tc) => tc.accepts(set, x),
        }
    }

    /// Commits the child accepted by the last `accepts` call.
    pub(crate) fn push(&mut self) {
        if let Canon::Table(tc) = self {
            tc.push();
        }
    }

    pub(crate) fn pop(&mut self) {
        if let Canon::Table(tc) = self {
            tc.pop();
        }
    }
}

impl TableCanon<'_> {
    fn accepts(&mut self, set: &[u16], x: u16) -> bool {
        self.pending.clear();
        let images = self.table.row(x);
        let mut smaller = false;
        let mut ties = false;
        for (&y, &t) in images.iter().zip(&self.threshold) {
            smaller |= y < t;
            ties |= y == t;
        }
        if smaller {
            return false;
        }
        for &p in &self.stabs {
            let y = images[p as usize];
            match y.cmp(&x) {
                Ordering::Less => return false,
                Ordering::Greater => self.pending.push((p, Some(x))),
                Ordering::Equal => {}
            }
        }
        if ties {
            let mut child = set.to_vec();
            child.push(x);
            for p in 0..images.len() {
                if self.stabilizer[p] || images[p] != self.threshold[p] {
                    continue;
                }
                match compare_image(self.table, p, &child) {
                    Compare::Smaller => return false,
                    Compare::Equal => self.pending.push((p as u32, None)),
                    Compare::Larger(t) => {
                        if t != self.threshold[p] {
                            self.pending.push((p as u32, Some(t)));
                        }
                    }
                }
            }
        }
        true
    }

    fn push(&mut self) {
        self.marks.push(self.log.len());
        let mut stabs_changed = false;
        for &(p, change) in &self.pending {
            let pi = p as usize;
            self.log.push((p, self.threshold[pi], self.stabilizer[pi]));
            let now_stab = change.is_none();
            stabs_changed |= now_stab != self.stabilizer[pi];
            self.threshold[pi] = change.unwrap_or(0);
            self.stabilizer[pi] = now_stab;
        }
        if stabs_changed {
            let mut next: Vec<u32> = self.stabs.iter().copied().filter(|&p| self.stabilizer[p as usize]).collect();
            for &(p, c) in &self.pending {
                if c.is_none() && !next.contains(&p) {
                    next.push(p);
                }
            }
            next.sort_unstable();
            let old = std::mem::replace(&mut self.stabs, next);
            self.stab_history.push(Some(old));
        } else {
            self.stab_history.push(None);
        }
    }

    fn pop(&mut self) {
        let log_len = self.marks.pop().expect("pop without push");
        while self.log.len() > log_len {
            let (p, t, s) = self.log.pop().unwrap();
            self.threshold[p as usize] = t;
            self.stabilizer[p as usize] = s;
        }
        if let Some(old) = self.stab_history.pop().expect("pop without push") {
            self.stabs = old;
        }
    }
}

enum Compare {
    Smaller,
    Equal,
    Larger(u16),
}

/// Compares `sorted π(set)` with the ascending `set`.
fn compare_image(table: &PermTable, p: usize, set: &[u16]) -> Compare {
    let mut img: Vec<u16> = set.iter().map(|&x| table.row(x)[p]).collect();
    img.sort_unstable();
    for (i, (&a, &b)) in img.iter().zip(set).enumerate() {
        match a.cmp(&b) {
            Ordering::Less => return Compare::Smaller,
            Ordering::Greater => return Compare::Larger(set[i]),
            Ordering::Equal => {}
        }
    }
    Compare::Equal
}

fn is_canonical_direct(set: &[u16], n: usize, alphabet: u8) -> bool {
    let ids: Vec<ColumnId> = set.iter().map(|&x| ColumnId(x as u64)).collect();
    let m = Matrix::from_column_ids(n, alphabet, &ids);
    canonical_form(&m).column_ids() == ids
}
