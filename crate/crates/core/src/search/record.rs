//! One-line result records and the append-only results cache.
//!
//! A record is tab-separated:
//! `fingerprint kind n value witness nodes seconds`, where `value` is
//! `EXACT:10`, `UPPER-BOUND:9-12` or `LOWER-BOUND:14-64` and `witness` is a
//! path relative to the cache directory or `-`.

use std::fmt;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{SearchKind, SearchOutcome, SearchProblem, Status};
use crate::error::{Error, Result};
use crate::matrix::{format_matrix, parse_matrix, Matrix};

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub fingerprint: String,
    pub kind: SearchKind,
    pub n: usize,
    pub status: Status,
    pub lo: usize,
    pub hi: usize,
    pub witness: Option<String>,
    pub nodes: u64,
    pub seconds: f64,
}

impl ResultRecord {
    pub fn new(problem: &SearchProblem, outcome: &SearchOutcome, witness: Option<String>) -> ResultRecord {
        ResultRecord {
            fingerprint: problem.fingerprint(),
            kind: problem.kind,
            n: problem.n,
            status: outcome.status,
            lo: outcome.lo,
            hi: outcome.hi,
            witness,
            nodes: outcome.nodes,
            seconds: outcome.elapsed.as_secs_f64(),
        }
    }

    pub fn value(&self) -> Option<usize> {
        (self.status == Status::Exact).then_some(self.lo)
    }

    pub fn value_field(&self) -> String {
        match self.status {
            Status::Exact => format!("EXACT:{}", self.lo),
            s => format!("{}:{}-{}", s.as_str(), self.lo, self.hi),
        }
    }

    pub fn parse(line: &str) -> Result<ResultRecord> {
        let bad = || Error::InvalidArgument(format!("malformed result record {line:?}"));
        let f: Vec<&str> = line.trim_end_matches(['\r', '\n']).split('\t').collect();
        let [fingerprint, kind, n, value, witness, nodes, seconds] = f.as_slice() else {
            return Err(bad());
        };
        let (status, range) = value.split_once(':').ok_or_else(bad)?;
        let status = match status {
            "EXACT" => Status::Exact,
            "UPPER-BOUND" => Status::UpperBound,
            "LOWER-BOUND" => Status::LowerBound,
            _ => return Err(bad()),
        };
        let (lo, hi) = match (status, range.split_once('-')) {
            (Status::Exact, None) => {
                let v = range.parse().map_err(|_| bad())?;
                (v, v)
            }
            (Status::Exact, Some(_)) | (_, None) => return Err(bad()),
            (_, Some((a, b))) => (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?),
        };
        Ok(ResultRecord {
            fingerprint: fingerprint.to_string(),
            kind: kind.parse()?,
            n: n.parse().map_err(|_| bad())?,
            status,
            lo,
            hi,
            witness: (*witness != "-").then(|| witness.to_string()),
            nodes: nodes.parse().map_err(|_| bad())?,
            seconds: seconds.parse().map_err(|_| bad())?,
        })
    }
}

impl fmt::Display for ResultRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}\t{:.3}",
            self.fingerprint,
            self.kind,
            self.n,
            self.value_field(),
            self.witness.as_deref().unwrap_or("-"),
            self.nodes,
            self.seconds
        )
    }
}

/// Append-only file of result records with witnesses stored beside it.
#[derive(Debug, Clone)]
pub struct ResultsCache {
    path: PathBuf,
}

impl ResultsCache {
    pub fn new(path: impl Into<PathBuf>) -> ResultsCache {
        ResultsCache { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn dir(&self) -> PathBuf {
        self.path.parent().map(Path::to_path_buf).unwrap_or_default()
    }

    /// Every record in the file, oldest first. A missing file is empty.
    pub fn records(&self) -> Result<Vec<ResultRecord>> {
        match fs::read_to_string(&self.path) {
            Ok(text) => text.lines().filter(|l| !l.trim().is_empty()).map(ResultRecord::parse).collect(),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Vec::new()),
            Err(e) => Err(e.into()),
        }
    }

    /// The latest exact record for `fingerprint`.
    pub fn lookup_exact(&self, fingerprint: &str) -> Result<Option<ResultRecord>> {
        Ok(self
            .records()?
            .into_iter()
            .rev()
            .find(|r| r.fingerprint == fingerprint && r.status == Status::Exact))
    }

    /// Writes the witness (if any) and appends the record; returns it.
    pub fn store(&self, problem: &SearchProblem, outcome: &SearchOutcome) -> Result<ResultRecord> {
        let witness = match &outcome.witness {
            Some(m) => {
                let rel = format!("witnesses/{}.txt", problem.fingerprint());
                let full = self.dir().join(&rel);
                if let Some(parent) = full.parent() {
                    fs::create_dir_all(parent)?;
                }
                fs::write(&full, format_matrix(m))?;
                Some(rel)
            }
            None => None,
        };
        let record = ResultRecord::new(problem, outcome, witness);
        self.append(&record)?;
        Ok(record)
    }

    pub fn append(&self, record: &ResultRecord) -> Result<()> {
        if let Some(parent) = self.path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent)?;
        }
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(f, "{record}")?;
        Ok(())
    }

    /// Loads the witness a record points to.
    pub fn witness(&self, record: &ResultRecord) -> Result<Option<Matrix>> {
        match &record.witness {
            None => Ok(None),
            Some(rel) => parse_matrix(&fs::read_to_string(self.dir().join(rel))?).map(Some),
        }
    }
}
