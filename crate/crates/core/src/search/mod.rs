//! Exact `sat`, `m-sat` and `forb` by isomorph-free exhaustive search.
//!
//! Column sets are grown in increasing `ColumnId` order and only canonical
//! sets (see [`symmetry`]) are expanded, so each row-permutation class is
//! visited once. `sat` and `m-sat` try sizes in increasing order and stop at
//! the first size with a saturated leaf; `forb` is a branch-and-bound that
//! maximizes the size.
//!
//! The subtrees hanging at a fixed depth form independent tasks. Results are
//! merged in task order, so values, witnesses and node counts do not depend
//! on how many threads run the tasks.

mod checkpoint;
mod columns;
mod hitting;
mod record;
mod symmetry;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

pub use checkpoint::Checkpoint;
pub use record::{ResultRecord, ResultsCache};

use crate::error::{Error, Result};
use crate::family::Family;
use crate::matrix::{ColumnId, Matrix};

/// Search universes are limited to ids that fit in 16 bits.
pub const MAX_SEARCH_UNIVERSE: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchKind {
    Sat,
    MSat,
    Forb,
}

impl SearchKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchKind::Sat => "sat",
            SearchKind::MSat => "msat",
            SearchKind::Forb => "forb",
        }
    }
}

impl fmt::Display for SearchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SearchKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<SearchKind> {
        match s.to_ascii_lowercase().as_str() {
            "sat" => Ok(SearchKind::Sat),
            "msat" | "m-sat" => Ok(SearchKind::MSat),
            "forb" => Ok(SearchKind::Forb),
            _ => Err(Error::InvalidArgument(format!("unknown search kind {s:?}"))),
        }
    }
}

/// Limits after which a search stops and reports bounds.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Budget {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
}

#[derive(Debug, Clone)]
pub struct SearchProblem {
    pub kind: SearchKind,
    pub n: usize,
    pub family: Family,
    /// Smallest size tried by `sat`/`m-sat`.
    pub size_low: Option<usize>,
    /// Largest size tried by `sat`/`m-sat`. `forb` ignores both bounds.
    pub size_high: Option<usize>,
    pub budget: Budget,
}

impl SearchProblem {
    pub fn new(kind: SearchKind, n: usize, family: Family) -> SearchProblem {
        SearchProblem {
            kind,
            n,
            family,
            size_low: None,
            size_high: None,
            budget: Budget::default(),
        }
    }

    pub fn fingerprint(&self) -> String {
        self.family.fingerprint(self.kind.as_str(), self.n)
    }

    pub fn alphabet(&self) -> u8 {
        use crate::family::ForbiddenFamily;
        self.family.alphabet()
    }

    pub(crate) fn universe(&self) -> Result<u64> {
        ColumnId::universe(self.n, self.alphabet())
            .filter(|&u| u <= MAX_SEARCH_UNIVERSE)
            .ok_or_else(|| Error::Unsupported(format!("search on {} rows over [0,{}] is too large", self.n, self.alphabet())))
    }
}

/// How `forb` is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForbStrategy {
    /// Pattern hitting when every member is simple, column search otherwise.
    Auto,
    Columns,
    /// For families of simple members: pick, for every row subset and member
    /// arrangement, one pattern the matrix must miss; the largest matrix
    /// avoiding the picked patterns is optimal for that choice.
    PatternHitting,
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub jobs: usize,
    /// Depth at which subtrees are cut into independent tasks.
    pub split_depth: usize,
    /// Row-permutation rejection; switching it off explores every column set.
    pub symmetry: bool,
    pub forb_strategy: ForbStrategy,
    /// For `sat` of a single `K_k`: discard nodes where some row can no
    /// longer reach `2^{k−1}−1` ones and zeros.
    pub row_balance_cut: bool,
}

impl Default for SearchOptions {
    fn default() -> SearchOptions {
        SearchOptions {
            jobs: 1,
            split_depth: 2,
            symmetry: true,
            forb_strategy: ForbStrategy::Auto,
            row_balance_cut: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Exact,
    /// Budget ran out; the witness certifies the upper end (`sat`, `m-sat`).
    UpperBound,
    /// Budget ran out; the witness certifies the lower end (`forb`).
    LowerBound,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Exact => "EXACT",
            Status::UpperBound => "UPPER-BOUND",
            Status::LowerBound => "LOWER-BOUND",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub status: Status,
    /// Proven range of the answer; equal when exact.
    pub lo: usize,
    pub hi: usize,
    pub witness: Option<Matrix>,
    pub nodes: u64,
    pub elapsed: Duration,
    /// State to resume from when the budget ran out.
    pub checkpoint: Option<Checkpoint>,
}

impl SearchOutcome {
    pub fn value(&self) -> Option<usize> {
        (self.status == Status::Exact).then_some(self.lo)
    }

    /// `EXACT:10`, `UPPER-BOUND:9-12`, ...
    pub fn value_field(&self) -> String {
        match self.status {
            Status::Exact => format!("EXACT:{}", self.lo),
            s => format!("{}:{}-{}", s.as_str(), self.lo, self.hi),
        }
    }
}

/// Runs a search, optionally continuing from a checkpoint.
pub fn run(problem: &SearchProblem, options: &SearchOptions, resume: Option<&Checkpoint>) -> Result<SearchOutcome> {
    if options.jobs == 0 {
        return Err(Error::InvalidArgument("jobs must be at least 1".into()));
    }
    problem.universe()?;
    if let Some(ck) = resume {
        ck.check_matches(problem)?;
    }
    let hitting = match options.forb_strategy {
        ForbStrategy::Columns => false,
        ForbStrategy::PatternHitting => true,
        ForbStrategy::Auto => resume.is_none() && hitting::applicable(&problem.family),
    };
    if problem.kind == SearchKind::Forb && hitting {
        if resume.is_some() {
            return Err(Error::Unsupported("pattern hitting runs do not resume from checkpoints".into()));
        }
        return hitting::max_free(problem);
    }
    columns::run(problem, options, resume)
}

/// `sat(n, F)` (or `m-sat` for [`SearchKind::MSat`]) with default options.
pub fn min_saturated(problem: &SearchProblem) -> Result<SearchOutcome> {
    if problem.kind == SearchKind::Forb {
        return Err(Error::InvalidArgument("min_saturated needs a sat or msat problem".into()));
    }
    run(problem, &SearchOptions::default(), None)
}

/// `forb(n, F)` with default options.
pub fn max_free(problem: &SearchProblem) -> Result<SearchOutcome> {
    if problem.kind != SearchKind::Forb {
        return Err(Error::InvalidArgument("max_free needs a forb problem".into()));
    }
    run(problem, &SearchOptions::default(), None)
}

pub(crate) fn ids_to_matrix(n: usize, alphabet: u8, ids: &[u16]) -> Matrix {
    let ids: Vec<ColumnId> = ids.iter().map(|&x| ColumnId(x as u64)).collect();
    Matrix::from_column_ids(n, alphabet, &ids)
}

#[cfg(test)]
mod tests;
