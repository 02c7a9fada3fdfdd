//! `forb` for families of simple members through pattern hitting.
//!
//! A simple member `F` with `k` rows sits inside a simple host on the rows
//! `R` in arrangement `σ` exactly when every column pattern of `σ(F)` appears
//! in the host restricted to `R`. A host is therefore free iff, for every
//! such constraint `(R, V)`, some pattern of `V` is missing on `R`. The
//! search picks the missing pattern constraint by constraint and keeps the
//! columns that avoid every picked pattern.

use std::time::Instant;

use super::{ids_to_matrix, SearchOutcome, SearchProblem, Status};
use crate::engine::permutations;
use crate::error::Result;
use crate::family::{Family, ForbiddenFamily};
use crate::matrix::{subsets, ColumnId, Matrix};
use crate::saturation::{close, ColumnOrder};

/// Whether every member is simple and has at least one row and column.
pub(crate) fn applicable(fam: &Family) -> bool {
    fam.members().iter().all(|f| f.rows() > 0 && f.cols() > 0 && f.is_simple())
}

type Bits = Vec<u64>;

fn count(b: &[u64]) -> usize {
    b.iter().map(|w| w.count_ones() as usize).sum()
}

fn and_count(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

struct Hitting {
    /// Per constraint, the column masks of its patterns.
    constraints: Vec<Vec<Bits>>,
    best: usize,
    best_set: Bits,
    nodes: u64,
    node_limit: Option<u64>,
    deadline: Option<Instant>,
    interrupted: bool,
}

impl Hitting {
    fn dfs(&mut self, allowed: &Bits) {
        if self.interrupted {
            return;
        }
        if self.node_limit.is_some_and(|l| self.nodes >= l)
            || (self.nodes.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() >= d))
        {
            self.interrupted = true;
            return;
        }
        self.nodes += 1;
        let total = count(allowed);
        if total <= self.best {
            return;
        }
        // Unsatisfied constraint with the fewest patterns; the cheapest way to
        // satisfy any unsatisfied constraint bounds what can still be kept.
        let mut pick: Option<(usize, Vec<usize>)> = None;
        let mut forced_loss = 0;
        for (c, masks) in self.constraints.iter().enumerate() {
            let costs: Vec<usize> = masks.iter().map(|m| and_count(m, allowed)).collect();
            if costs.contains(&0) {
                continue;
            }
            forced_loss = forced_loss.max(*costs.iter().min().unwrap());
            if pick.as_ref().is_none_or(|(p, _)| self.constraints[*p].len() > masks.len()) {
                pick = Some((c, costs));
            }
        }
        let Some((c, costs)) = pick else {
            self.best = total;
            self.best_set = allowed.clone();
            return;
        };
        if total - forced_loss <= self.best {
            return;
        }
        let mut order: Vec<usize> = (0..costs.len()).collect();
        order.sort_by_key(|&i| (costs[i], i));
        for i in order {
            let mask = &self.constraints[c][i];
            let child: Bits = allowed.iter().zip(mask).map(|(a, m)| a & !m).collect();
            self.dfs(&child);
            if self.interrupted {
                return;
            }
        }
    }
}

pub(crate) fn max_free(problem: &SearchProblem) -> Result<SearchOutcome> {
    let started = Instant::now();
    let n = problem.n;
    let fam = &problem.family;
    let alphabet = fam.alphabet();
    let universe = problem.universe()? as usize;
    let base = alphabet as usize + 1;
    let words = universe.div_ceil(64);
    let columns: Vec<Vec<u8>> = (0..universe as u64).map(|x| ColumnId(x).decode(n, alphabet)).collect();

    let mut orders: Vec<usize> = fam.members().iter().map(|f| f.rows()).filter(|&k| k <= n).collect();
    orders.sort_unstable();
    orders.dedup();
    let mut constraints: Vec<Vec<Bits>> = Vec::new();
    for k in orders {
        // Pattern sets of every arrangement of every member of this order.
        let mut sets: Vec<Vec<usize>> = Vec::new();
        for f in fam.members().iter().filter(|f| f.rows() == k) {
            for sigma in permutations(k) {
                let mut v: Vec<usize> = f
                    .columns()
                    .map(|c| sigma.iter().fold(0, |p, &src| p * base + c[src] as usize))
                    .collect();
                v.sort_unstable();
                sets.push(v);
            }
        }
        sets.sort();
        sets.dedup();
        let subset_of = |a: &[usize], b: &[usize]| a.iter().all(|x| b.binary_search(x).is_ok());
        let minimal: Vec<&Vec<usize>> = sets
            .iter()
            .filter(|s| !sets.iter().any(|t| t != *s && t.len() <= s.len() && subset_of(t, s)))
            .collect();
        for rows in subsets(n, k) {
            let patterns = base.pow(k as u32);
            let mut by_pattern: Vec<Bits> = vec![vec![0; words]; patterns];
            for (x, col) in columns.iter().enumerate() {
                let p = rows.iter().fold(0, |p, &r| p * base + col[r] as usize);
                by_pattern[p][x / 64] |= 1 << (x % 64);
            }
            for s in &minimal {
                constraints.push(s.iter().map(|&p| by_pattern[p].clone()).collect());
            }
        }
    }

    let mut all: Bits = vec![u64::MAX; words];
    if !universe.is_multiple_of(64) {
        all[words - 1] = (1u64 << (universe % 64)) - 1;
    }
    // Start from a greedy saturated matrix so the bound prunes early.
    let closed = close(&Matrix::empty(n, alphabet), fam, &ColumnOrder::Ascending)?;
    let mut best_set: Bits = vec![0; words];
    for id in closed.column_ids() {
        best_set[id.0 as usize / 64] |= 1 << (id.0 % 64);
    }
    let mut h = Hitting {
        constraints,
        best: closed.cols(),
        best_set,
        nodes: 0,
        node_limit: problem.budget.node_limit,
        deadline: problem.budget.time_limit.map(|d| started + d),
        interrupted: false,
    };
    h.dfs(&all);
    let ids: Vec<u16> = (0..universe)
        .filter(|&x| h.best_set[x / 64] >> (x % 64) & 1 == 1)
        .map(|x| x as u16)
        .collect();
    let witness = Some(ids_to_matrix(n, alphabet, &ids));
    let status = if h.interrupted { Status::LowerBound } else { Status::Exact };
    Ok(SearchOutcome {
        status,
        lo: h.best,
        hi: if h.interrupted { universe } else { h.best },
        witness,
        nodes: h.nodes,
        elapsed: started.elapsed(),
        checkpoint: None,
    })
}
