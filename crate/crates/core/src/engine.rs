//! Incremental freeness tracking for a growing set of host columns.
//!
//! For every `k`-subset `R` of host rows and every pattern `p` over `R`, the
//! tracker keeps how many host columns restrict to `p`, stored as level masks
//! (`level[t]` holds the patterns seen at least `t` times). A member embeds
//! on `R` exactly when one of its row arrangements, written as the same kind
//! of level masks, is dominated level by level. Adding a column changes one
//! bit per subset, so `creates` only inspects arrangements that need it.

use crate::family::{Family, ForbiddenFamily};
use crate::matrix::{subsets, ColumnId, Matrix};

/// Largest number of patterns per subset the tracker handles (one `u64`).
const MAX_PATTERNS: usize = 64;
/// Pattern tables are precomputed when the column universe is this small.
const TABLE_LIMIT: u64 = 1 << 16;

#[derive(Clone)]
struct Group {
    subsets: Vec<Vec<usize>>,
    patterns: usize,
    levels: usize,
    /// `variants[v * levels + t]`: patterns needed at least `t + 1` times.
    variants: Vec<u64>,
    /// `by_bit[t * patterns + p]`: variants whose level `t` contains `p`.
    by_bit: Vec<Vec<u32>>,
    counts: Vec<u16>,
    masks: Vec<u64>,
    /// `table[id * subsets + s]`: pattern of column `id` on subset `s`.
    table: Option<Vec<u8>>,
}

#[derive(Clone)]
pub struct Tracker {
    rows: usize,
    alphabet: u8,
    groups: Vec<Group>,
}

impl Tracker {
    /// Builds a tracker for `n`-row hosts, or `None` when some member is out
    /// of the tracker's range (empty member order or too many patterns).
    pub fn new(fam: &Family, n: usize) -> Option<Tracker> {
        let alphabet = fam.alphabet();
        let base = alphabet as usize + 1;
        let mut by_order: Vec<(usize, Vec<&Matrix>)> = Vec::new();
        for f in fam.members() {
            if f.rows() == 0 {
                return None;
            }
            if f.rows() > n {
                continue;
            }
            match by_order.iter_mut().find(|(k, _)| *k == f.rows()) {
                Some((_, v)) => v.push(f),
                None => by_order.push((f.rows(), vec![f])),
            }
        }
        by_order.sort_by_key(|(k, _)| *k);
        let universe = ColumnId::universe(n, alphabet);
        let mut groups = Vec::new();
        for (k, members) in by_order {
            let patterns = base.checked_pow(k as u32).filter(|&p| p <= MAX_PATTERNS)?;
            let mut arrangements: Vec<Vec<u16>> = Vec::new();
            for f in members {
                for sigma in permutations(k) {
                    let mut req = vec![0u16; patterns];
                    for c in f.columns() {
                        let mut p = 0;
                        for &src in &sigma {
                            p = p * base + c[src] as usize;
                        }
                        req[p] += 1;
                    }
                    arrangements.push(req);
                }
            }
            arrangements.sort();
            arrangements.dedup();
            let levels = arrangements.iter().flatten().copied().max().unwrap_or(0).max(1) as usize;
            let mut variants = Vec::with_capacity(arrangements.len() * levels);
            let mut by_bit = vec![Vec::new(); levels * patterns];
            for (v, req) in arrangements.iter().enumerate() {
                for t in 0..levels {
                    let mut mask = 0u64;
                    for (p, &r) in req.iter().enumerate() {
                        if r as usize > t {
                            mask |= 1 << p;
                            by_bit[t * patterns + p].push(v as u32);
                        }
                    }
                    variants.push(mask);
                }
            }
            let subs = subsets(n, k);
            let table = universe.filter(|&u| u <= TABLE_LIMIT).map(|u| {
                let mut t = Vec::with_capacity(u as usize * subs.len());
                for id in 0..u {
                    let col = ColumnId(id).decode(n, alphabet);
                    t.extend(subs.iter().map(|r| pattern_of(&col, r, base) as u8));
                }
                t
            });
            groups.push(Group {
                counts: vec![0; subs.len() * patterns],
                masks: vec![0; subs.len() * levels],
                subsets: subs,
                patterns,
                levels,
                variants,
                by_bit,
                table,
            });
        }
        Some(Tracker {
            rows: n,
            alphabet,
            groups,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    /// Number of distinct member orders tracked.
    pub fn orders(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.subsets.first().map_or(0, Vec::len)).collect()
    }

    pub fn add(&mut self, col: &[u8]) {
        self.update(col, None, true);
    }

    pub fn remove(&mut self, col: &[u8]) {
        self.update(col, None, false);
    }

    pub fn add_id(&mut self, id: ColumnId) {
        self.update(&[], Some(id), true);
    }

    pub fn remove_id(&mut self, id: ColumnId) {
        self.update(&[], Some(id), false);
    }

    /// Loads every column of `m`.
    pub fn add_matrix(&mut self, m: &Matrix) {
        for c in m.columns() {
            self.add(c);
        }
    }

    fn update(&mut self, col: &[u8], id: Option<ColumnId>, add: bool) {
        let base = self.alphabet as usize + 1;
        let decoded;
        let col = match id {
            Some(id) if self.groups.iter().any(|g| g.table.is_none()) => {
                decoded = id.decode(self.rows, self.alphabet);
                &decoded[..]
            }
            _ => col,
        };
        for g in &mut self.groups {
            for s in 0..g.subsets.len() {
                let p = match (id, &g.table) {
                    (Some(id), Some(t)) => t[id.0 as usize * g.subsets.len() + s] as usize,
                    _ => pattern_of(col, &g.subsets[s], base),
                };
                let slot = &mut g.counts[s * g.patterns + p];
                if add {
                    *slot += 1;
                    if (*slot as usize) <= g.levels {
                        g.masks[s * g.levels + *slot as usize - 1] |= 1 << p;
                    }
                } else {
                    if (*slot as usize) <= g.levels {
                        g.masks[s * g.levels + *slot as usize - 1] &= !(1 << p);
                    }
                    *slot -= 1;
                }
            }
        }
    }

    /// Whether adding `col` completes a copy of some member. Meaningful when
    /// the current host is free.
    pub fn creates(&self, col: &[u8]) -> bool {
        self.creates_impl(col, None, None)
    }

    pub fn creates_id(&self, id: ColumnId) -> bool {
        self.creates_impl(&[], Some(id), None)
    }

    /// Like [`creates`](Self::creates) but only on subsets not flagged in
    /// `violated` (indexed as returned by [`violated_subsets`](Self::violated_subsets)).
    pub fn creates_on_free_subsets(&self, col: &[u8], violated: &[Vec<bool>]) -> bool {
        self.creates_impl(col, None, Some(violated))
    }

    fn creates_impl(&self, col: &[u8], id: Option<ColumnId>, skip: Option<&[Vec<bool>]>) -> bool {
        let base = self.alphabet as usize + 1;
        let decoded;
        let col = match id {
            Some(id) if self.groups.iter().any(|g| g.table.is_none()) => {
                decoded = id.decode(self.rows, self.alphabet);
                &decoded[..]
            }
            _ => col,
        };
        for (gi, g) in self.groups.iter().enumerate() {
            let lv = g.levels;
            for s in 0..g.subsets.len() {
                if skip.is_some_and(|v| v[gi][s]) {
                    continue;
                }
                let p = match (id, &g.table) {
                    (Some(id), Some(t)) => t[id.0 as usize * g.subsets.len() + s] as usize,
                    _ => pattern_of(col, &g.subsets[s], base),
                };
                let t = g.counts[s * g.patterns + p] as usize;
                if t >= lv {
                    continue;
                }
                let have = &g.masks[s * lv..(s + 1) * lv];
                for &v in &g.by_bit[t * g.patterns + p] {
                    let need = &g.variants[v as usize * lv..(v as usize + 1) * lv];
                    let ok = (0..lv).all(|u| {
                        let h = if u == t { have[u] | 1 << p } else { have[u] };
                        need[u] & !h == 0
                    });
                    if ok {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Per group and subset: whether some member already embeds there.
    pub fn violated_subsets(&self) -> Vec<Vec<bool>> {
        self.groups
            .iter()
            .map(|g| {
                let lv = g.levels;
                (0..g.subsets.len())
                    .map(|s| {
                        let have = &g.masks[s * lv..(s + 1) * lv];
                        g.variants.chunks(lv).any(|need| need.iter().zip(have).all(|(n, h)| n & !h == 0))
                    })
                    .collect()
            })
            .collect()
    }

    pub fn is_free(&self) -> bool {
        self.violated_subsets().iter().flatten().all(|&v| !v)
    }
}

fn pattern_of(col: &[u8], rows: &[usize], base: usize) -> usize {
    rows.iter().fold(0, |p, &r| p * base + col[r] as usize)
}

/// All permutations of `0..k` (as position → source row).
pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    heap(k, &mut cur, &mut out);
    out.sort();
    out
}

fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k {
        heap(k - 1, cur, out);
        if k.is_multiple_of(2) {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::parse_family;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn permutations_are_complete() {
        assert_eq!(permutations(0).len(), 1);
        let p = permutations(4);
        assert_eq!(p.len(), 24);
        let mut q = p.clone();
        q.dedup();
        assert_eq!(q.len(), 24);
    }

    fn check_against_generic(text: &str, n: usize, seed: u64) {
        let fam = parse_family(text).unwrap();
        let l = fam.alphabet();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let universe = ColumnId::universe(n, l).unwrap();
        for _ in 0..60 {
            let mut tracker = Tracker::new(&fam, n).unwrap();
            let mut host = Matrix::empty(n, l);
            let mut ids: Vec<u64> = (0..universe).collect();
            for i in (1..ids.len()).rev() {
                ids.swap(i, rng.gen_range(0..=i));
            }
            for &id in &ids {
                let col = ColumnId(id).decode(n, l);
                let want = fam.creates(&host, &col).unwrap();
                assert_eq!(tracker.creates(&col), want, "{text} {host:?} + {col:?}");
                assert_eq!(tracker.creates_id(ColumnId(id)), want);
                if !want {
                    tracker.add_id(ColumnId(id));
                    host = host.with_column(&col).unwrap();
                    if rng.gen_bool(0.2) {
                        tracker.remove(&col);
                        tracker.add(&col);
                    }
                }
            }
            assert!(tracker.is_free());
        }
    }

    #[test]
    fn agrees_with_containment() {
        check_against_generic("K3", 5, 1);
        check_against_generic("K2", 4, 2);
        check_against_generic("3*T:2:2", 5, 3);
        check_against_generic("T:3:0+T:3:2+T:3:3", 5, 4);
        check_against_generic("T:3:2; T:3:2+T:3:3", 5, 5);
        check_against_generic("K2^2", 3, 6);
        check_against_generic("C:01+T:2:2\n2*C:0+C:1\n", 4, 7);
    }

    #[test]
    fn violated_subsets_on_non_free_host() {
        let fam = parse_family("K2").unwrap();
        let mut tr = Tracker::new(&fam, 3).unwrap();
        for c in [[0, 0, 0], [1, 1, 0], [1, 0, 1], [0, 1, 1]] {
            tr.add(&c);
        }
        // Rows (0,1): 00 11 10 01 present; other pairs likewise.
        assert_eq!(tr.violated_subsets(), vec![vec![true, true, true]]);
        assert!(!tr.is_free());
    }
}
