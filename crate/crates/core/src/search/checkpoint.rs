//! Resumable search state as a line-based text file.
//!
//! ```text
//! SATKIT-CKPT 1
//! fingerprint <hex>
//! kind sat
//! n 5
//! bounds - -
//! level 9
//! nodes 1234
//! incumbent -
//! task 0 done 812 0 -
//! task 1 open 40 0 -
//! rec 1 1 3 0,5,9
//! ```

use std::fmt::Write as _;
use std::path::Path;

use super::columns::{Record, Task, TaskState};
use super::{SearchKind, SearchProblem};
use crate::error::{Error, Result};

const MAGIC: &str = "SATKIT-CKPT";
const VERSION: u32 = 1;

/// Search state saved when a budget runs out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub(crate) fingerprint: String,
    pub(crate) kind: SearchKind,
    pub(crate) n: usize,
    pub(crate) bounds: (Option<usize>, Option<usize>),
    /// Size being searched (`sat`, `m-sat`).
    pub(crate) level: usize,
    /// Nodes counted outside the tasks.
    pub(crate) base_nodes: u64,
    /// `forb`: the bound the tasks were started with and its witness.
    pub(crate) incumbent: Option<(usize, Vec<u16>)>,
    pub(crate) tasks: Vec<Task>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Checkpoint(msg.into())
}

fn ids_field(ids: Option<&[u16]>) -> String {
    match ids {
        None => "-".into(),
        Some([]) => "".into(),
        Some(v) => v.iter().map(u16::to_string).collect::<Vec<_>>().join(","),
    }
}

fn parse_ids(s: &str) -> Result<Option<Vec<u16>>> {
    match s {
        "-" => Ok(None),
        "" => Ok(Some(Vec::new())),
        _ => s
            .split(',')
            .map(|t| t.parse::<u16>().map_err(|_| bad(format!("bad column id {t:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(Some),
    }
}

fn opt_field(v: Option<usize>) -> String {
    v.map_or("-".into(), |x| x.to_string())
}

fn parse_opt(s: &str) -> Result<Option<usize>> {
    if s == "-" {
        return Ok(None);
    }
    num(s).map(Some)
}

fn num<T: std::str::FromStr>(s: &str) -> Result<T> {
    s.parse().map_err(|_| bad(format!("bad number {s:?}")))
}

impl Checkpoint {
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    pub fn kind(&self) -> SearchKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Nodes counted so far, including finished tasks.
    pub fn nodes(&self) -> u64 {
        self.base_nodes + self.tasks.iter().map(|t| t.nodes).sum::<u64>()
    }

    /// Errors unless this checkpoint was written for `problem`.
    pub fn check_matches(&self, problem: &SearchProblem) -> Result<()> {
        if self.fingerprint != problem.fingerprint() || self.kind != problem.kind || self.n != problem.n {
            return Err(bad("checkpoint fingerprint does not match the problem"));
        }
        if self.bounds != (problem.size_low, problem.size_high) {
            return Err(bad("checkpoint was written with different size bounds"));
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{MAGIC} {VERSION}");
        let _ = writeln!(out, "fingerprint {}", self.fingerprint);
        let _ = writeln!(out, "kind {}", self.kind);
        let _ = writeln!(out, "n {}", self.n);
        let _ = writeln!(out, "bounds {} {}", opt_field(self.bounds.0), opt_field(self.bounds.1));
        let _ = writeln!(out, "level {}", self.level);
        let _ = writeln!(out, "nodes {}", self.base_nodes);
        match &self.incumbent {
            None => out.push_str("incumbent -\n"),
            Some((b, ids)) => {
                let _ = writeln!(out, "incumbent {b} {}", ids_field(Some(ids)));
            }
        }
        for (i, t) in self.tasks.iter().enumerate() {
            let state = match t.state {
                TaskState::Open => "open",
                TaskState::Done => "done",
                TaskState::Accepted => "accepted",
            };
            let _ = writeln!(out, "task {i} {state} {} {} {}", t.nodes, t.best, ids_field(t.witness.as_deref()));
        }
        for (i, t) in self.tasks.iter().enumerate() {
            for r in &t.records {
                let _ = writeln!(out, "rec {i} {} {} {}", r.entered as u8, r.next, ids_field(Some(&r.prefix)));
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Checkpoint> {
        let mut lines = text.lines().map(str::trim_end).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| bad("empty checkpoint"))?;
        let version = header
            .strip_prefix(MAGIC)
            .map(str::trim)
            .ok_or_else(|| bad("not a checkpoint file"))?;
        if num::<u32>(version)? != VERSION {
            return Err(bad(format!("unsupported checkpoint version {version}")));
        }
        let mut field = |key: &str| -> Result<Vec<String>> {
            let line = lines.next().ok_or_else(|| bad(format!("missing {key} line")))?;
            let mut parts = line.split(' ');
            if parts.next() != Some(key) {
                return Err(bad(format!("expected {key} line, found {line:?}")));
            }
            Ok(parts.map(String::from).collect())
        };
        let one = |v: Vec<String>, key: &str| -> Result<String> {
            match <[String; 1]>::try_from(v) {
                Ok([s]) => Ok(s),
                Err(_) => Err(bad(format!("malformed {key} line"))),
            }
        };
        let fingerprint = one(field("fingerprint")?, "fingerprint")?;
        let kind: SearchKind = one(field("kind")?, "kind")?.parse().map_err(|_| bad("bad kind"))?;
        let n = num(&one(field("n")?, "n")?)?;
        let b = field("bounds")?;
        if b.len() != 2 {
            return Err(bad("malformed bounds line"));
        }
        let bounds = (parse_opt(&b[0])?, parse_opt(&b[1])?);
        let level = num(&one(field("level")?, "level")?)?;
        let base_nodes = num(&one(field("nodes")?, "nodes")?)?;
        let inc = field("incumbent")?;
        let incumbent = match inc.as_slice() {
            [d] if d == "-" => None,
            [b, ids] => Some((num(b)?, parse_ids(ids)?.ok_or_else(|| bad("incumbent without witness"))?)),
            [b] => Some((num(b)?, Vec::new())),
            _ => return Err(bad("malformed incumbent line")),
        };
        let mut tasks: Vec<Task> = Vec::new();
        for line in lines {
            let parts: Vec<&str> = line.split(' ').collect();
            match parts.as_slice() {
                ["task", idx, state, nodes, best, rest @ ..] => {
                    if num::<usize>(idx)? != tasks.len() {
                        return Err(bad("task lines out of order"));
                    }
                    let state = match *state {
                        "open" => TaskState::Open,
                        "done" => TaskState::Done,
                        "accepted" => TaskState::Accepted,
                        s => return Err(bad(format!("unknown task state {s:?}"))),
                    };
                    let witness = match rest {
                        [] => Some(Vec::new()),
                        [w] => parse_ids(w)?,
                        _ => return Err(bad("malformed task line")),
                    };
                    tasks.push(Task {
                        records: Vec::new(),
                        nodes: num(nodes)?,
                        state,
                        best: num(best)?,
                        witness,
                    });
                }
                ["rec", idx, entered, next, rest @ ..] => {
                    let idx: usize = num(idx)?;
                    let task = tasks.get_mut(idx).ok_or_else(|| bad("record for unknown task"))?;
                    let entered = match *entered {
                        "0" => false,
                        "1" => true,
                        _ => return Err(bad("bad record flag")),
                    };
                    let prefix = match rest {
                        [] => Vec::new(),
                        [p] => parse_ids(p)?.ok_or_else(|| bad("record without prefix"))?,
                        _ => return Err(bad("malformed record line")),
                    };
                    if prefix.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(bad("record prefix is not ascending"));
                    }
                    task.records.push(Record {
                        prefix,
                        next: num(next)?,
                        entered,
                    });
                }
                _ => return Err(bad(format!("unexpected line {line:?}"))),
            }
        }
        for t in &tasks {
            if (t.state == TaskState::Open) == t.records.is_empty() {
                return Err(bad("task records do not match task state"));
            }
            if t.state == TaskState::Accepted && t.witness.is_none() {
                return Err(bad("accepted task without witness"));
            }
        }
        if kind == SearchKind::Forb && incumbent.is_none() {
            return Err(bad("forb checkpoint without incumbent"));
        }
        Ok(Checkpoint {
            fingerprint,
            kind,
            n,
            bounds,
            level,
            base_nodes,
            incumbent,
            tasks,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.to_text())?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Checkpoint> {
        Checkpoint::parse(&std::fs::read_to_string(path)?)
    }
}
