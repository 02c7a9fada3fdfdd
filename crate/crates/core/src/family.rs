//! Forbidden families: the admissibility oracle every check and search uses.

use std::fmt;

use sha2::{Digest, Sha256};

use crate::canon::canonical_form;
use crate::containment::{contains, contains_using, ContainmentWitness};
use crate::error::{parse_err, Error, Result};
use crate::matrix::{build_k_l, build_t, format_matrix, looks_like_header, Lines, Matrix};

/// An admissibility predicate invariant under row and column permutations.
pub trait ForbiddenFamily: Send + Sync {
    /// Alphabet bound shared by the family and every matrix tested against it.
    fn alphabet(&self) -> u8;

    /// True when `m` is not free of the family.
    fn violates(&self, m: &Matrix) -> Result<bool>;

    /// True when `[m, column]` is not free. `m` is expected to be free and
    /// must not already contain `column`.
    fn creates(&self, m: &Matrix, column: &[u8]) -> Result<bool>;

    /// The explicit member list, if the family has one.
    fn as_explicit(&self) -> Option<&Family> {
        None
    }

    fn describe(&self) -> String;
}

pub fn family_free(m: &Matrix, fam: &dyn ForbiddenFamily) -> Result<bool> {
    Ok(!fam.violates(m)?)
}

/// Checks the shared preconditions of `creates`.
pub(crate) fn check_new_column(m: &Matrix, column: &[u8], alphabet: u8) -> Result<()> {
    if column.len() != m.rows() {
        return Err(Error::OrderMismatch(m.rows(), column.len()));
    }
    if m.alphabet() != alphabet {
        return Err(Error::AlphabetMismatch {
            host: m.alphabet(),
            pattern: alphabet,
        });
    }
    if m.has_column(column) {
        return Err(Error::ColumnPresent);
    }
    Ok(())
}

/// A finite list of forbidden matrices over a common alphabet. Repeated
/// columns inside a member are multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    members: Vec<Matrix>,
    alphabet: u8,
}

impl Family {
    pub fn new(members: Vec<Matrix>) -> Result<Family> {
        let alphabet = members.first().map_or(1, Matrix::alphabet);
        if let Some(m) = members.iter().find(|m| m.alphabet() != alphabet) {
            return Err(Error::AlphabetMismatch {
                host: alphabet,
                pattern: m.alphabet(),
            });
        }
        Ok(Family { members, alphabet })
    }

    pub fn single(member: Matrix) -> Family {
        let alphabet = member.alphabet();
        Family {
            members: vec![member],
            alphabet,
        }
    }

    pub fn members(&self) -> &[Matrix] {
        &self.members
    }

    /// Distinct member orders, ascending.
    pub fn member_orders(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.members.iter().map(Matrix::rows).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// First member found in `m`, with its witness.
    pub fn find_violation(&self, m: &Matrix) -> Result<Option<(usize, ContainmentWitness)>> {
        self.check_alphabet(m)?;
        for (idx, f) in self.members.iter().enumerate() {
            if let Some(w) = contains(m, f)? {
                return Ok(Some((idx, w)));
            }
        }
        Ok(None)
    }

    /// Sorted canonical encodings of the members; stable under member order
    /// and under row/column permutations of each member.
    pub fn canonical_encoding(&self) -> String {
        let mut parts: Vec<String> = self.members.iter().map(|m| format_matrix(&canonical_form(m))).collect();
        parts.sort();
        parts.dedup();
        parts.join("\n")
    }

    /// Stable hex digest identifying a problem on this family.
    pub fn fingerprint(&self, kind: &str, n: usize) -> String {
        let mut h = Sha256::new();
        h.update(format!("{kind}\n{n}\n{}\n", self.alphabet));
        h.update(self.canonical_encoding());
        hex::encode(&h.finalize()[..16])
    }

    fn check_alphabet(&self, m: &Matrix) -> Result<()> {
        if m.alphabet() != self.alphabet {
            return Err(Error::AlphabetMismatch {
                host: m.alphabet(),
                pattern: self.alphabet,
            });
        }
        Ok(())
    }
}

impl ForbiddenFamily for Family {
    fn alphabet(&self) -> u8 {
        self.alphabet
    }

    fn violates(&self, m: &Matrix) -> Result<bool> {
        Ok(self.find_violation(m)?.is_some())
    }

    fn creates(&self, m: &Matrix, column: &[u8]) -> Result<bool> {
        check_new_column(m, column, self.alphabet)?;
        let host = m.with_column(column)?;
        for f in &self.members {
            if contains_using(&host, f, m.cols())?.is_some() {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn as_explicit(&self) -> Option<&Family> {
        Some(self)
    }

    fn describe(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}x{}", m.rows(), m.cols())?;
            for r in 0..m.rows() {
                f.write_str(if r == 0 { ":" } else { "/" })?;
                for j in 0..m.cols() {
                    write!(f, "{}", m.entry(r, j))?;
                }
            }
        }
        write!(f, "}}")
    }
}

/// Parses a family file: items separated by blank lines, each either an
/// explicit matrix (header line first) or shorthand expressions, one member
/// per line or separated by `;`.
pub fn parse_family(text: &str) -> Result<Family> {
    let mut lines = Lines::new(text);
    let mut members = Vec::new();
    loop {
        while lines.peek().is_some_and(|l| l.trim().is_empty()) {
            lines.advance();
        }
        let Some(line) = lines.peek() else { break };
        if looks_like_header(line) {
            members.push(lines.matrix()?);
            if !lines.at_end() {
                let no = lines.line_no();
                match lines.advance() {
                    Some(sep) if sep.trim().is_empty() => {}
                    _ => return Err(parse_err(no, 1, "expected a blank line between matrices")),
                }
            }
        } else {
            let no = lines.line_no();
            lines.advance();
            for expr in line.split(';').map(str::trim).filter(|e| !e.is_empty()) {
                members.push(parse_shorthand(expr).map_err(|e| match e {
                    Error::Parse { pos, msg } => parse_err(no, pos.column, msg),
                    other => other,
                })?);
            }
        }
    }
    if members.is_empty() {
        return Err(parse_err(1, 1, "family has no members"));
    }
    Family::new(members).map_err(|e| parse_err(1, 1, e.to_string()))
}

/// Expands one shorthand member.
///
/// ```text
/// member := term ('+' term)*          concatenation [A,B]
/// term   := [count '*'] atom          repetition
/// atom   := 'K' k ['^' l]             all columns over {0..l}
///         | 'T:' k ':' weights        0/1 columns with the given weights
///         | 'C:' digits ['^' l]       a single column, top entry first
/// weights := w | a-b | weights ',' weights
/// ```
pub fn parse_shorthand(expr: &str) -> Result<Matrix> {
    let mut acc: Option<Matrix> = None;
    let mut offset = 0;
    for term in expr.split('+') {
        let col = offset + 1 + (term.len() - term.trim_start().len());
        let m = parse_term(term.trim()).map_err(|msg| parse_err(1, col, msg))?;
        acc = Some(match acc {
            None => m,
            Some(a) => a.concat(&m).map_err(|e| parse_err(1, col, e.to_string()))?,
        });
        offset += term.len() + 1;
    }
    acc.ok_or_else(|| parse_err(1, 1, "empty expression"))
}

fn parse_term(term: &str) -> std::result::Result<Matrix, String> {
    let (count, atom) = match term.split_once('*') {
        Some((c, a)) => (number(c.trim())?, a.trim()),
        None => (1, term),
    };
    if count == 0 {
        return Err("repetition count must be positive".into());
    }
    Ok(parse_atom(atom)?.repeat(count))
}

fn number(s: &str) -> std::result::Result<usize, String> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("expected a number, found {s:?}"));
    }
    s.parse().map_err(|e| format!("bad number {s:?}: {e}"))
}

fn split_alphabet(s: &str) -> std::result::Result<(&str, Option<u8>), String> {
    match s.split_once('^') {
        Some((body, l)) => {
            let l = number(l)?;
            if !(1..=9).contains(&l) {
                return Err(format!("alphabet bound {l} outside 1..=9"));
            }
            Ok((body, Some(l as u8)))
        }
        None => Ok((s, None)),
    }
}

fn parse_atom(atom: &str) -> std::result::Result<Matrix, String> {
    if let Some(rest) = atom.strip_prefix("T:") {
        let (k, weights) = rest.split_once(':').ok_or("expected T:k:weights")?;
        let k = number(k)?;
        if k > 16 {
            return Err(format!("order {k} too large"));
        }
        let mut acc = Matrix::empty(k, 1);
        for part in weights.split(',') {
            let (lo, hi) = match part.split_once('-') {
                Some((a, b)) => (number(a)?, number(b)?),
                None => {
                    let w = number(part)?;
                    (w, w)
                }
            };
            let t = build_t(k, lo, hi).map_err(|e| e.to_string())?;
            acc = acc.concat(&t).map_err(|e| e.to_string())?;
        }
        return Ok(acc);
    }
    if let Some(rest) = atom.strip_prefix("C:") {
        let (digits, l) = split_alphabet(rest)?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad column {digits:?}"));
        }
        let col: Vec<u8> = digits.bytes().map(|b| b - b'0').collect();
        let l = l.unwrap_or_else(|| col.iter().copied().max().unwrap_or(1).max(1));
        return Matrix::from_columns(col.len(), l, &[col]).map_err(|e| e.to_string());
    }
    if let Some(rest) = atom.strip_prefix('K') {
        let (k, l) = split_alphabet(rest)?;
        let k = number(k)?;
        let l = l.unwrap_or(1);
        if k == 0 || k > 16 {
            return Err(format!("order {k} outside 1..=16"));
        }
        return build_k_l(k, l).map_err(|e| e.to_string());
    }
    Err(format!("unknown family term {atom:?}"))
}
