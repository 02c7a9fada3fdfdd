//! Depth-first search over ascending column sets.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use super::checkpoint::Checkpoint;
use super::symmetry::{Canon, PermTable};
use super::{ids_to_matrix, SearchKind, SearchOptions, SearchOutcome, SearchProblem, Status};
use crate::error::{Error, Result};
use crate::matrix::{build_t, ColumnId};
use crate::saturation::{close, is_m_saturated, ColumnOrder, Oracle};

/// A point to continue the depth-first search from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Record {
    pub prefix: Vec<u16>,
    /// First child index still to explore (for entered nodes).
    pub next: usize,
    /// Whether the node itself was already counted and evaluated.
    pub entered: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TaskState {
    Open,
    Done,
    Accepted,
}

/// An independent piece of the search: records processed in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Task {
    pub records: Vec<Record>,
    pub nodes: u64,
    pub state: TaskState,
    /// `forb`: best size found inside this task (0 when none beat the bound).
    pub best: usize,
    pub witness: Option<Vec<u16>>,
}

impl Task {
    fn fresh(prefix: Vec<u16>) -> Task {
        Task {
            records: vec![Record {
                prefix,
                next: 0,
                entered: false,
            }],
            nodes: 0,
            state: TaskState::Open,
            best: 0,
            witness: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Goal {
    /// Find a saturated (or m-saturated) set of exactly this size.
    Level { m: usize },
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flow {
    Continue,
    Found,
    Interrupted,
}

struct Shared<'a> {
    problem: &'a SearchProblem,
    kind: SearchKind,
    n: usize,
    alphabet: u8,
    universe: usize,
    last_id: u16,
    table: Option<PermTable>,
    symmetry: bool,
    /// Required ones and zeros per row at a leaf.
    balance: Option<usize>,
    template: Oracle<'a>,
    node_limit: Option<u64>,
    deadline: Option<Instant>,
    nodes: AtomicU64,
    interrupted: AtomicBool,
    /// Lowest accepting task index at the current level.
    accepted: AtomicUsize,
}

impl Shared<'_> {
    fn budget_exceeded(&self, tick: &mut u32) -> bool {
        if self.interrupted.load(Ordering::Relaxed) {
            return true;
        }
        let over_nodes = self.node_limit.is_some_and(|l| self.nodes.load(Ordering::Relaxed) >= l);
        *tick = tick.wrapping_add(1);
        let over_time = (*tick).is_multiple_of(256) && self.deadline.is_some_and(|d| Instant::now() >= d);
        if over_nodes || over_time {
            self.interrupted.store(true, Ordering::Relaxed);
            return true;
        }
        false
    }
}

struct Worker<'s, 'a> {
    sh: &'s Shared<'a>,
    oracle: Oracle<'a>,
    canon: Canon<'s>,
    prefix: Vec<u16>,
    goal: Goal,
    nodes: u64,
    best: usize,
    best_set: Option<Vec<u16>>,
    found: Option<Vec<u16>>,
    records: Vec<Record>,
    /// Frontier generation: stop at this depth and collect prefixes.
    collect: Option<usize>,
    frontier: Vec<Vec<u16>>,
    task_idx: usize,
    tick: u32,
}

impl<'s, 'a> Worker<'s, 'a> {
    fn new(sh: &'s Shared<'a>, goal: Goal) -> Worker<'s, 'a> {
        Worker {
            sh,
            oracle: sh.template.clone(),
            canon: Canon::new(sh.table.as_ref(), sh.symmetry, sh.n, sh.alphabet),
            prefix: Vec::new(),
            goal,
            nodes: 0,
            best: 0,
            best_set: None,
            found: None,
            records: Vec::new(),
            collect: None,
            frontier: Vec::new(),
            task_idx: 0,
            tick: 0,
        }
    }

    fn load(&mut self, prefix: &[u16]) -> Result<()> {
        self.oracle = self.sh.template.clone();
        for &x in prefix {
            self.oracle.add_id(ColumnId(x as u64))?;
        }
        if !self.canon.load(prefix) {
            return Err(Error::Checkpoint("record prefix is not canonical".into()));
        }
        self.prefix = prefix.to_vec();
        Ok(())
    }

    fn filtering(&self) -> bool {
        self.sh.kind != SearchKind::MSat
    }

    fn candidates(&self) -> Result<Vec<u16>> {
        let start = self.prefix.last().map_or(0, |&x| x as usize + 1);
        let mut out = Vec::new();
        for x in start..self.sh.universe {
            if !self.filtering() || !self.oracle.creates_id(ColumnId(x as u64))? {
                out.push(x as u16);
            }
        }
        Ok(out)
    }

    fn stop_requested(&mut self) -> bool {
        if self.sh.budget_exceeded(&mut self.tick) {
            return true;
        }
        self.goal != Goal::Max && self.task_idx > self.sh.accepted.load(Ordering::Relaxed)
    }

    fn visit(&mut self, cands: Vec<u16>) -> Result<Flow> {
        let len = self.prefix.len();
        if self.collect == Some(len) {
            self.frontier.push(self.prefix.clone());
            return Ok(Flow::Continue);
        }
        if self.collect.is_none() && self.stop_requested() {
            self.records.push(Record {
                prefix: self.prefix.clone(),
                next: 0,
                entered: false,
            });
            return Ok(Flow::Interrupted);
        }
        self.nodes += 1;
        self.sh.nodes.fetch_add(1, Ordering::Relaxed);
        match self.goal {
            Goal::Level { m } => {
                if len == m {
                    return Ok(if self.leaf_accepts(&cands)? {
                        self.found = Some(self.prefix.clone());
                        Flow::Found
                    } else {
                        Flow::Continue
                    });
                }
                if len + cands.len() < m || !self.balance_reachable(m) {
                    return Ok(Flow::Continue);
                }
            }
            Goal::Max => {
                if len > self.best {
                    self.best = len;
                    self.best_set = Some(self.prefix.clone());
                }
                if len + cands.len() <= self.best {
                    return Ok(Flow::Continue);
                }
            }
        }
        self.children(&cands, 0)
    }

    fn children(&mut self, cands: &[u16], start: usize) -> Result<Flow> {
        let len = self.prefix.len();
        for idx in start..cands.len() {
            let remaining = cands.len() - idx;
            let hopeless = match self.goal {
                Goal::Level { m } => len + remaining < m,
                Goal::Max => len + remaining <= self.best,
            };
            if hopeless {
                break;
            }
            let x = cands[idx];
            if !self.canon.accepts(&self.prefix, x) {
                continue;
            }
            let id = ColumnId(x as u64);
            self.oracle.add_id(id)?;
            let child: Vec<u16> = if self.filtering() {
                let mut v = Vec::with_capacity(cands.len() - idx - 1);
                for &y in &cands[idx + 1..] {
                    if !self.oracle.creates_id(ColumnId(y as u64))? {
                        v.push(y);
                    }
                }
                v
            } else {
                cands[idx + 1..].to_vec()
            };
            self.canon.push();
            self.prefix.push(x);
            let flow = self.visit(child)?;
            if flow == Flow::Found {
                return Ok(flow);
            }
            self.prefix.pop();
            self.canon.pop();
            self.oracle.remove_id(id)?;
            if flow == Flow::Interrupted {
                self.records.push(Record {
                    prefix: self.prefix.clone(),
                    next: idx + 1,
                    entered: true,
                });
                return Ok(flow);
            }
        }
        Ok(Flow::Continue)
    }

    fn leaf_accepts(&self, cands: &[u16]) -> Result<bool> {
        match self.sh.kind {
            SearchKind::Sat => {
                // Candidates above the last id are exactly the non-creating ones.
                if !cands.is_empty() {
                    return Ok(false);
                }
                let mut present = self.prefix.iter().peekable();
                let last = self.prefix.last().copied().unwrap_or(0);
                for y in 0..last {
                    if present.peek() == Some(&&y) {
                        present.next();
                        continue;
                    }
                    if !self.oracle.creates_id(ColumnId(y as u64))? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            SearchKind::MSat => {
                let m = ids_to_matrix(self.sh.n, self.sh.alphabet, &self.prefix);
                Ok(is_m_saturated(&m, &self.sh.problem.family)?.is_saturated())
            }
            SearchKind::Forb => unreachable!("forb has no leaf test"),
        }
    }

    fn balance_reachable(&self, m: usize) -> bool {
        let Some(need) = self.sh.balance else { return true };
        let slack = m - self.prefix.len();
        let n = self.sh.n;
        (0..n).all(|i| {
            let bit = n - 1 - i;
            let ones = self.prefix.iter().filter(|&&x| x >> bit & 1 == 1).count();
            let zeros = self.prefix.len() - ones;
            ones + slack >= need && zeros + slack >= need
        })
    }

    fn run_task(&mut self, task: &mut Task, bound: usize) -> Result<()> {
        self.nodes = 0;
        self.found = None;
        self.best = bound.max(task.best);
        self.best_set = None;
        self.records.clear();
        let records = std::mem::take(&mut task.records);
        let mut rest = records.into_iter();
        let mut outcome = Flow::Continue;
        for rec in rest.by_ref() {
            self.load(&rec.prefix)?;
            let cands = self.candidates()?;
            outcome = if rec.entered {
                self.children(&cands, rec.next)?
            } else {
                self.visit(cands)?
            };
            if outcome != Flow::Continue {
                break;
            }
        }
        task.nodes += self.nodes;
        if let Some(set) = self.best_set.take() {
            task.best = self.best;
            task.witness = Some(set);
        }
        match outcome {
            Flow::Found => {
                task.state = TaskState::Accepted;
                task.witness = self.found.take();
            }
            Flow::Interrupted => {
                let mut recs = std::mem::take(&mut self.records);
                recs.extend(rest);
                task.records = recs;
            }
            Flow::Continue => task.state = TaskState::Done,
        }
        Ok(())
    }
}

/// Runs the open tasks with `jobs` threads.
fn run_tasks(sh: &Shared<'_>, tasks: Vec<Task>, goal: Goal, bound: usize, jobs: usize) -> Result<Vec<Task>> {
    let slots: Vec<Mutex<Task>> = tasks.into_iter().map(Mutex::new).collect();
    let next = AtomicUsize::new(0);
    let error: Mutex<Option<Error>> = Mutex::new(None);
    let work = || {
        let mut w = Worker::new(sh, goal);
        loop {
            let i = next.fetch_add(1, Ordering::Relaxed);
            if i >= slots.len() {
                break;
            }
            let mut task = slots[i].lock().unwrap();
            if task.state != TaskState::Open {
                continue;
            }
            if goal != Goal::Max && i > sh.accepted.load(Ordering::Relaxed) {
                continue;
            }
            if sh.interrupted.load(Ordering::Relaxed) {
                continue;
            }
            w.task_idx = i;
            if let Err(e) = w.run_task(&mut task, bound) {
                error.lock().unwrap().get_or_insert(e);
                sh.interrupted.store(true, Ordering::Relaxed);
                break;
            }
            if task.state == TaskState::Accepted {
                sh.accepted.fetch_min(i, Ordering::Relaxed);
            }
        }
    };
    if jobs <= 1 {
        work();
    } else {
        std::thread::scope(|s| {
            for _ in 0..jobs {
                s.spawn(work);
            }
        });
    }
    if let Some(e) = error.into_inner().unwrap() {
        return Err(e);
    }
    Ok(slots.into_iter().map(|m| m.into_inner().unwrap()).collect())
}

fn single_complete_family(problem: &SearchProblem) -> Option<usize> {
    let members = problem.family.members();
    let [f] = members else { return None };
    let k = f.rows();
    if k == 0 || k > 16 || !f.is_binary() || f.cols() != 1 << k || !f.is_simple() {
        return None;
    }
    (f.sorted_columns() == build_t(k, 0, k).ok()?.sorted_columns()).then_some(k)
}

pub(crate) fn run(problem: &SearchProblem, options: &SearchOptions, resume: Option<&Checkpoint>) -> Result<SearchOutcome> {
    let started = Instant::now();
    let universe = problem.universe()?;
    let n = problem.n;
    let alphabet = problem.alphabet();
    let balance = match problem.kind {
        SearchKind::Sat | SearchKind::MSat if options.row_balance_cut => single_complete_family(problem)
            .filter(|&k| n >= k)
            .map(|k| (1usize << (k - 1)) - 1),
        _ => None,
    };
    let sh = Shared {
        problem,
        kind: problem.kind,
        n,
        alphabet,
        universe: universe as usize,
        last_id: (universe - 1) as u16,
        table: if options.symmetry { PermTable::new(n, alphabet) } else { None },
        symmetry: options.symmetry,
        balance,
        template: Oracle::new(&problem.family, n),
        node_limit: problem.budget.node_limit,
        deadline: problem.budget.time_limit.map(|d| started + d),
        nodes: AtomicU64::new(0),
        interrupted: AtomicBool::new(false),
        accepted: AtomicUsize::new(usize::MAX),
    };
    let closed = close(&crate::matrix::Matrix::empty(n, alphabet), &problem.family, &ColumnOrder::Ascending)?;
    let closed_ids: Vec<u16> = closed.column_ids().iter().map(|c| c.0 as u16).collect();
    match problem.kind {
        SearchKind::Forb => run_forb(&sh, options, resume, closed_ids, started),
        _ => run_levels(&sh, options, resume, closed_ids, started),
    }
}

fn run_levels(
    sh: &Shared<'_>,
    options: &SearchOptions,
    resume: Option<&Checkpoint>,
    closed_ids: Vec<u16>,
    started: Instant,
) -> Result<SearchOutcome> {
    let problem = sh.problem;
    let closed_size = closed_ids.len();
    let high = problem.size_high.unwrap_or(closed_size);
    let low = problem.size_low.unwrap_or(0);
    if low > high {
        return Err(Error::InvalidArgument(format!("size bounds {low}..{high} are empty")));
    }
    let mut base_nodes = resume.map_or(0, |c| c.base_nodes);
    let first = resume.map_or(low, |c| c.level);
    let mut resumed_tasks = resume.map(|c| c.tasks.clone());
    for m in first..=high {
        let goal = Goal::Level { m };
        sh.accepted.store(usize::MAX, Ordering::Relaxed);
        let tasks = match resumed_tasks.take() {
            Some(t) => {
                if let Some(a) = t.iter().position(|t| t.state == TaskState::Accepted) {
                    sh.accepted.store(a, Ordering::Relaxed);
                }
                t
            }
            None => {
                let mut gen = Worker::new(sh, goal);
                gen.collect = Some(options.split_depth.min(m));
                gen.load(&[])?;
                let cands = gen.candidates()?;
                gen.visit(cands)?;
                base_nodes += gen.nodes;
                gen.frontier.into_iter().map(Task::fresh).collect()
            }
        };
        let tasks = run_tasks(sh, tasks, goal, 0, options.jobs)?;
        let accepted = tasks.iter().position(|t| t.state == TaskState::Accepted);
        let decided = accepted.unwrap_or(tasks.len());
        let open_before = tasks[..decided].iter().any(|t| t.state == TaskState::Open);
        let counted = |upto: usize| -> u64 { tasks[..upto].iter().map(|t| t.nodes).sum() };
        if open_before {
            let nodes = base_nodes + counted(tasks.len());
            let checkpoint = Checkpoint {
                fingerprint: problem.fingerprint(),
                kind: problem.kind,
                n: problem.n,
                bounds: (problem.size_low, problem.size_high),
                level: m,
                base_nodes,
                incumbent: None,
                tasks,
            };
            return Ok(SearchOutcome {
                status: Status::UpperBound,
                lo: m,
                hi: closed_size.max(m),
                witness: Some(ids_to_matrix(sh.n, sh.alphabet, &closed_ids)),
                nodes,
                elapsed: started.elapsed(),
                checkpoint: Some(checkpoint),
            });
        }
        if let Some(a) = accepted {
            let witness = tasks[a].witness.clone().expect("accepted task has a witness");
            return Ok(SearchOutcome {
                status: Status::Exact,
                lo: m,
                hi: m,
                witness: Some(ids_to_matrix(sh.n, sh.alphabet, &witness)),
                nodes: base_nodes + counted(a + 1),
                elapsed: started.elapsed(),
                checkpoint: None,
            });
        }
        base_nodes += counted(tasks.len());
    }
    // Nothing up to `high`: only bounds are known.
    Ok(SearchOutcome {
        status: Status::UpperBound,
        lo: high + 1,
        hi: closed_size.max(high + 1),
        witness: Some(ids_to_matrix(sh.n, sh.alphabet, &closed_ids)),
        nodes: base_nodes,
        elapsed: started.elapsed(),
        checkpoint: None,
    })
}

fn run_forb(
    sh: &Shared<'_>,
    options: &SearchOptions,
    resume: Option<&Checkpoint>,
    closed_ids: Vec<u16>,
    started: Instant,
) -> Result<SearchOutcome> {
    let problem = sh.problem;
    let goal = Goal::Max;
    let (bound, bound_set, base_nodes, tasks) = match resume {
        Some(c) => {
            let (b, set) = c
                .incumbent
                .clone()
                .ok_or_else(|| Error::Checkpoint("forb checkpoint without incumbent".into()))?;
            (b, set, c.base_nodes, c.tasks.clone())
        }
        None => {
            let mut gen = Worker::new(sh, goal);
            gen.best = closed_ids.len();
            gen.collect = Some(options.split_depth);
            gen.load(&[])?;
            let cands = gen.candidates()?;
            gen.visit(cands)?;
            let (b, set) = match gen.best_set.take() {
                Some(set) => (gen.best, set),
                None => (closed_ids.len(), closed_ids.clone()),
            };
            (b, set, gen.nodes, gen.frontier.into_iter().map(Task::fresh).collect())
        }
    };
    let tasks = run_tasks(sh, tasks, goal, bound, options.jobs)?;
    let nodes = base_nodes + tasks.iter().map(|t| t.nodes).sum::<u64>();
    let mut best = bound;
    let mut witness = bound_set.clone();
    for t in &tasks {
        if t.best > best {
            best = t.best;
            witness = t.witness.clone().expect("improving task has a witness");
        }
    }
    let witness_matrix = Some(ids_to_matrix(sh.n, sh.alphabet, &witness));
    if tasks.iter().any(|t| t.state == TaskState::Open) {
        let checkpoint = Checkpoint {
            fingerprint: problem.fingerprint(),
            kind: problem.kind,
            n: problem.n,
            bounds: (problem.size_low, problem.size_high),
            level: 0,
            base_nodes,
            incumbent: Some((bound, bound_set)),
            tasks,
        };
        return Ok(SearchOutcome {
            status: Status::LowerBound,
            lo: best,
            hi: sh.last_id as usize + 1,
            witness: witness_matrix,
            nodes,
            elapsed: started.elapsed(),
            checkpoint: Some(checkpoint),
        });
    }
    Ok(SearchOutcome {
        status: Status::Exact,
        lo: best,
        hi: best,
        witness: witness_matrix,
        nodes,
        elapsed: started.elapsed(),
        checkpoint: None,
    })
}
