//! The table of published values and invariants checked by `verify-paper`.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{f, sauer_forb_l, shift_fixpoint};
use crate::constructions::{gallery_with, rotation_closure, supported_instances, Assets, GalleryId};
use crate::containment::contains;
use crate::error::Result;
use crate::family::{family_free, parse_family, Family};
use crate::matrix::{build_k_l, ColumnId, Matrix};
use crate::saturation::{close, extend_by_duplication, is_saturated, pairs_equal_outside_row, row_balance_check, ColumnOrder};
use crate::search::{run, Checkpoint, SearchKind, SearchOptions, SearchOutcome, SearchProblem, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Quick,
    Full,
}

impl std::str::FromStr for Suite {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Suite> {
        match s {
            "quick" => Ok(Suite::Quick),
            "full" => Ok(Suite::Full),
            _ => Err(crate::Error::InvalidArgument(format!("unknown suite {s:?}"))),
        }
    }
}

/// Settings shared by every row.
#[derive(Debug, Clone)]
pub struct Context {
    pub assets: Assets,
    pub jobs: usize,
    /// Time budget of each full-suite search.
    pub full_budget: Duration,
}

impl Default for Context {
    fn default() -> Context {
        Context {
            assets: Assets::embedded(),
            jobs: 1,
            full_budget: Duration::from_secs(4 * 3600),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RowOutcome {
    pub pass: bool,
    pub detail: String,
}

/// One line of the report.
pub struct Row {
    pub criterion: u32,
    pub name: &'static str,
    pub suite: Suite,
    /// Wall-clock limit for the whole row.
    pub limit: Duration,
    run: fn(&Context) -> Result<RowOutcome>,
}

impl Row {
    /// Runs the row; errors and overtime count as failures.
    pub fn execute(&self, ctx: &Context) -> (RowOutcome, Duration) {
        let start = Instant::now();
        let mut out = match (self.run)(ctx) {
            Ok(o) => o,
            Err(e) => RowOutcome {
                pass: false,
                detail: format!("error: {e}"),
            },
        };
        let took = start.elapsed();
        if took > self.limit {
            out.pass = false;
            let _ = write!(out.detail, " (took {:.1}s, limit {}s)", took.as_secs_f64(), self.limit.as_secs());
        }
        (out, took)
    }
}

/// A tracked search instance with its expected value.
#[derive(Debug, Clone)]
pub struct Instance {
    pub kind: SearchKind,
    pub n: usize,
    pub family: &'static str,
    pub expected: usize,
    pub limit: Duration,
}

fn inst(kind: SearchKind, n: usize, family: &'static str, expected: usize, secs: u64) -> Instance {
    Instance {
        kind,
        n,
        family,
        expected,
        limit: Duration::from_secs(secs),
    }
}

const ONE_ROW: [(usize, usize, usize, &str); 5] = [
    (0, 2, 2, "2*C:1"),
    (0, 3, 4, "3*C:1"),
    (1, 2, 2, "C:0+2*C:1"),
    (2, 2, 3, "2*C:0+2*C:1"),
    (2, 3, 4, "2*C:0+3*C:1"),
];

/// Searches of one criterion of the quick suite.
pub fn quick_instances(criterion: u32) -> Vec<Instance> {
    use SearchKind::*;
    let mut v = Vec::new();
    match criterion {
        1 => {
            for n in 2..=6 {
                v.push(inst(Sat, n, "K2", n + 1, 10));
            }
        }
        2 => {
            v.push(inst(Sat, 3, "K3", 7, 60));
            v.push(inst(Sat, 4, "K3", 10, 60));
            v.push(inst(Sat, 5, "K3", 10, 1800));
        }
        4 => {
            for (n, e) in [(3, 7), (4, 10), (5, 10)] {
                v.push(inst(Sat, n, "T:3:0+T:3:3", e, 1800));
            }
            for (n, e) in [(3, 7), (4, 9), (5, 9)] {
                v.push(inst(Sat, n, "T:3:0+T:3:2+T:3:3", e, 1800));
            }
            for (n, e) in [(3, 7), (4, 10)] {
                v.push(inst(Sat, n, "T:3:0-2", e, 1800));
            }
            for n in 3..=4 {
                v.push(inst(Sat, n, "T:3:2", 3 * n - 2, 1800));
                v.push(inst(Sat, n, "T:3:2+T:3:3", 3 * n - 2, 1800));
            }
        }
        5 => {
            v.push(inst(Sat, 5, "3*T:2:2", 12, 1800));
            v.push(inst(Sat, 4, "3*T:2:2", 9, 1800));
            for n in 2..=5 {
                v.push(inst(Sat, n, "T:2:2", n + 1, 600));
                v.push(inst(Sat, n, "2*T:2:2", n + 2, 600));
            }
        }
        6 => {
            for n in 2..=5 {
                v.push(inst(Sat, n, "T:2:1", n + 1, 60));
                v.push(inst(Sat, n, "T:2:0+T:2:2", 3, 60));
                v.push(inst(Sat, n, "T:2:1-2", n + 1, 60));
                v.push(inst(Sat, n, "C:01+T:2:2", 2, 60));
            }
        }
        7 => {
            for (_, l, e, fam) in ONE_ROW {
                for n in l..=6 {
                    v.push(inst(Sat, n, fam, e, 60));
                }
            }
        }
        8 => {
            for n in 1..=5usize {
                for (k, fam) in [(1u64, "K1"), (2, "K2"), (3, "K3")] {
                    let e = f(n as u64, k - 1).try_into().expect("small value");
                    v.push(inst(Forb, n, fam, e, 600));
                }
            }
            for (n, k, l) in [(2u64, 1u64, 2u64), (3, 1, 2), (3, 2, 2), (4, 2, 2)] {
                let fam: &'static str = match k {
                    1 => "K1^2",
                    _ => "K2^2",
                };
                let e = sauer_forb_l(n, k, l).unwrap().try_into().expect("small value");
                v.push(inst(Forb, n as usize, fam, e, 600));
            }
        }
        _ => {}
    }
    v
}

fn problem(kind: SearchKind, n: usize, family: &str) -> Result<SearchProblem> {
    Ok(SearchProblem::new(kind, n, parse_family(family)?))
}

fn solve(ctx: &Context, kind: SearchKind, n: usize, family: &str, limit: Duration) -> Result<(SearchProblem, SearchOutcome)> {
    let mut p = problem(kind, n, family)?;
    p.budget.time_limit = Some(limit);
    let o = SearchOptions {
        jobs: ctx.jobs,
        ..SearchOptions::default()
    };
    let out = run(&p, &o, None)?;
    Ok((p, out))
}

/// Value check plus witness verification.
fn witness_ok(p: &SearchProblem, out: &SearchOutcome) -> Result<bool> {
    let Some(w) = &out.witness else { return Ok(false) };
    if w.cols() != out.lo && out.status == Status::Exact {
        return Ok(false);
    }
    match p.kind {
        SearchKind::Sat => Ok(is_saturated(w, &p.family)?.is_saturated()),
        SearchKind::MSat => Ok(crate::saturation::is_m_saturated(w, &p.family)?.is_saturated()),
        SearchKind::Forb => {
            // Free and maximal: no absent column keeps it free.
            if !family_free(w, &p.family)? {
                return Ok(false);
            }
            Ok(is_saturated(w, &p.family)?.is_saturated())
        }
    }
}

fn check_instances(ctx: &Context, list: &[Instance]) -> Result<RowOutcome> {
    let mut pass = true;
    let mut detail = String::new();
    for i in list {
        let (p, out) = solve(ctx, i.kind, i.n, i.family, i.limit)?;
        let ok = out.value() == Some(i.expected) && witness_ok(&p, &out)?;
        pass &= ok;
        if !ok {
            let _ = write!(
                detail,
                "{}({},{})={} expected {}; ",
                i.kind,
                i.n,
                i.family,
                out.value_field(),
                i.expected
            );
        }
    }
    if pass {
        detail = format!("{} instances", list.len());
    }
    Ok(RowOutcome { pass, detail })
}

fn criterion_searches(c: u32) -> fn(&Context) -> Result<RowOutcome> {
    match c {
        1 => |ctx| check_instances(ctx, &quick_instances(1)),
        2 => |ctx| check_instances(ctx, &quick_instances(2)),
        4 => |ctx| check_instances(ctx, &quick_instances(4)),
        5 => |ctx| {
            let mut r = check_instances(ctx, &quick_instances(5))?;
            // The 4-row design construction meets the lower bound 2n+1.
            let e = gallery_with(&ctx.assets, GalleryId::Lt22Sat, 4, &[3])?;
            let ok = e.verify()? && e.matrix.cols() == 9;
            r.pass &= ok;
            if !ok {
                r.detail.push_str("design construction for n=4 fails; ");
            }
            Ok(r)
        },
        6 => |ctx| check_instances(ctx, &quick_instances(6)),
        8 => |ctx| check_instances(ctx, &quick_instances(8)),
        _ => unreachable!(),
    }
}

fn one_row(ctx: &Context) -> Result<RowOutcome> {
    let mut r = check_instances(ctx, &quick_instances(7))?;
    for (m, l, _, _) in ONE_ROW {
        for n in l..=6 {
            let e = gallery_with(&ctx.assets, GalleryId::OneRow, n, &[m, l])?;
            if !e.verify()? {
                r.pass = false;
                let _ = write!(r.detail, "{} not saturated; ", e.label());
            }
        }
    }
    Ok(r)
}

fn k4_six_rows(ctx: &Context) -> Result<RowOutcome> {
    let _ = ctx;
    let k4 = parse_family("K4")?;
    let m = rotation_closure(6, &k4, 24)?;
    let ok = is_saturated(&m, &k4)?.is_saturated() && m.cols() <= 24 && row_balance_check(&m, 4);
    Ok(RowOutcome {
        pass: ok,
        detail: format!("close of a rotation-invariant seed has {} columns", m.cols()),
    })
}

fn gallery_all(ctx: &Context) -> Result<RowOutcome> {
    let mut count = 0;
    let mut failed = Vec::new();
    for id in GalleryId::ALL {
        for (n, params) in supported_instances(id, 12) {
            let e = gallery_with(&ctx.assets, id, n, &params);
            count += 1;
            match e {
                Ok(e) if e.verify()? => {}
                Ok(e) => failed.push(e.label()),
                Err(err) => failed.push(format!("{id}(n={n},{params:?}): {err}")),
            }
        }
    }
    Ok(RowOutcome {
        pass: failed.is_empty(),
        detail: if failed.is_empty() {
            format!("{count} entries")
        } else {
            format!("failed: {}", failed.join(", "))
        },
    })
}

/// Whether `pattern` embeds in `host`, by trying every injection.
fn contains_brute(host: &Matrix, pattern: &Matrix) -> bool {
    fn rows(
        host: &Matrix,
        pat: &Matrix,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if map.len() == pat.rows() {
            let mut cused = vec![false; host.cols()];
            return cols(host, pat, map, 0, &mut cused);
        }
        for r in 0..host.rows() {
            if !used[r] {
                used[r] = true;
                map.push(r);
                if rows(host, pat, map, used) {
                    return true;
                }
                map.pop();
                used[r] = false;
            }
        }
        false
    }
    fn cols(host: &Matrix, pat: &Matrix, map: &[usize], j: usize, used: &mut Vec<bool>) -> bool {
        if j == pat.cols() {
            return true;
        }
        for c in 0..host.cols() {
            if !used[c] && (0..pat.rows()).all(|i| host.entry(map[i], c) == pat.entry(i, j)) {
                used[c] = true;
                if cols(host, pat, map, j + 1, used) {
                    return true;
                }
                used[c] = false;
            }
        }
        false
    }
    if pattern.rows() > host.rows() || pattern.cols() > host.cols() {
        return false;
    }
    rows(host, pattern, &mut Vec::new(), &mut vec![false; host.rows()])
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, alphabet: u8) -> Matrix {
    let columns: Vec<Vec<u8>> = (0..cols)
        .map(|_| (0..rows).map(|_| rng.gen_range(0..=alphabet)).collect())
        .collect();
    Matrix::from_columns(rows, alphabet, &columns).expect("consistent shape")
}

fn properties(ctx: &Context) -> Result<RowOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut fails: Vec<String> = Vec::new();

    // Containment against brute force.
    let mut disagree = 0;
    for _ in 0..1000 {
        let alphabet = rng.gen_range(1..=2u8);
        let (hr, hc) = (rng.gen_range(1..=5), rng.gen_range(1..=6));
        let (pr, pc) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let host = random_matrix(&mut rng, hr, hc, alphabet);
        let pat = random_matrix(&mut rng, pr, pc, alphabet);
        let got = contains(&host, &pat)?;
        let valid = got.as_ref().is_none_or(|w| w.is_valid(&host, &pat));
        if got.is_some() != contains_brute(&host, &pat) || !valid {
            disagree += 1;
        }
    }
    if disagree > 0 {
        fails.push(format!("containment disagrees on {disagree} instances"));
    }

    // Shifting keeps K_k^l-freeness and size; fixpoint columns have < k entries equal to l.
    let mut shift_bad = 0;
    for _ in 0..500 {
        let n = rng.gen_range(2..=4);
        let l: u8 = rng.gen_range(1..=2);
        let k = rng.gen_range(1..=2.min(n));
        let fam = Family::single(build_k_l(k, l)?);
        let universe = ColumnId::universe(n, l).expect("small");
        let mut ids: Vec<ColumnId> = (0..universe).map(ColumnId).collect();
        ids.shuffle(&mut rng);
        ids.truncate(rng.gen_range(0..=universe as usize));
        let seed = Matrix::from_column_ids(n, l, &ids);
        // Greedy free subset of the random columns.
        let mut kept: Vec<ColumnId> = Vec::new();
        for id in seed.column_ids() {
            let mut next = kept.clone();
            next.push(id);
            if family_free(&Matrix::from_column_ids(n, l, &next), &fam)? {
                kept = next;
            }
        }
        let m = Matrix::from_column_ids(n, l, &kept);
        let i = rng.gen_range(0..n);
        let s1 = crate::bounds::shift_row(&m, i)?;
        let s = shift_fixpoint(&m)?;
        let ok = s1.cols() == m.cols()
            && s1.is_simple()
            && family_free(&s1, &fam)?
            && s.cols() == m.cols()
            && family_free(&s, &fam)?
            && s.columns().all(|c| c.iter().filter(|&&x| x == l).count() < k);
        shift_bad += usize::from(!ok);
    }
    if shift_bad > 0 {
        fails.push(format!("shifting fails on {shift_bad} instances"));
    }

    // m-sat ≤ sat on every quick instance where both finish.
    let mut compared = 0;
    for c in [1, 2, 4, 5, 6, 7] {
        for i in quick_instances(c) {
            let (_, m) = solve(ctx, SearchKind::MSat, i.n, i.family, Duration::from_secs(60))?;
            if let Some(b) = m.value() {
                compared += 1;
                if b > i.expected {
                    fails.push(format!("m-sat({},{}) = {b} exceeds sat = {}", i.n, i.family, i.expected));
                }
            }
        }
    }
    if compared == 0 {
        fails.push("no m-sat value was computed".into());
    }

    // Row balance on K3/K4 witnesses.
    for (n, fam, k) in [(4, "K3", 3), (5, "K3", 3), (5, "K4", 4)] {
        let (_, out) = solve(ctx, SearchKind::Sat, n, fam, Duration::from_secs(1800))?;
        match &out.witness {
            Some(w) if out.status == Status::Exact && row_balance_check(w, k) => {}
            _ => fails.push(format!("row balance fails for sat({n},{fam})")),
        }
    }

    // Row duplication adds at most 2d columns.
    let fams = ["K2", "K3", "T:2:1", "T:3:2", "T:3:0-2"];
    let mut dup_bad = 0;
    for _ in 0..100 {
        let fam = parse_family(fams[rng.gen_range(0..fams.len())])?;
        let n = rng.gen_range(3..=5);
        let m = close(&Matrix::empty(n, 1), &fam, &ColumnOrder::Shuffled(rng.gen()))?;
        let i = rng.gen_range(0..n);
        let e = extend_by_duplication(&m, &fam, i)?;
        let d = pairs_equal_outside_row(&m, i);
        let ok = e.cols() <= m.cols() + 2 * d && is_saturated(&e, &fam)?.is_saturated();
        dup_bad += usize::from(!ok);
    }
    if dup_bad > 0 {
        fails.push(format!("row duplication bound fails on {dup_bad} cases"));
    }

    // Interrupt sat(4,K3) halfway and resume.
    let p = problem(SearchKind::Sat, 4, "K3")?;
    let opts = SearchOptions {
        jobs: ctx.jobs,
        ..SearchOptions::default()
    };
    let full = run(&p, &opts, None)?;
    let mut half = p.clone();
    half.budget.node_limit = Some(full.nodes / 2);
    let cut = run(&half, &opts, None)?;
    let resumed = match cut.checkpoint {
        Some(ck) => {
            let ck = Checkpoint::parse(&ck.to_text())?;
            Some(run(&p, &opts, Some(&ck))?)
        }
        None => None,
    };
    match resumed {
        Some(r) if r.value() == full.value() && r.witness == full.witness && r.nodes == full.nodes => {}
        _ => fails.push("resumed sat(4,K3) differs from an uninterrupted run".into()),
    }

    // Four jobs reproduce the serial results.
    let mut diff = 0;
    for c in [1, 2, 4, 5, 6, 7, 8] {
        for i in quick_instances(c) {
            let p = problem(i.kind, i.n, i.family)?;
            let a = run(&p, &SearchOptions::default(), None)?;
            let b = run(&p, &SearchOptions { jobs: 4, ..SearchOptions::default() }, None)?;
            if a.value_field() != b.value_field() || a.witness != b.witness || a.nodes != b.nodes {
                diff += 1;
            }
        }
    }
    if diff > 0 {
        fails.push(format!("{diff} searches differ between 1 and 4 jobs"));
    }

    Ok(RowOutcome {
        pass: fails.is_empty(),
        detail: if fails.is_empty() { "all invariants hold".into() } else { fails.join("; ") },
    })
}

fn budgeted(ctx: &Context, n: usize, family: &str, expected: usize) -> Result<RowOutcome> {
    let (p, out) = solve(ctx, SearchKind::Sat, n, family, ctx.full_budget)?;
    let pass = match out.status {
        Status::Exact => out.lo == expected && witness_ok(&p, &out)?,
        _ => out.lo <= expected && expected <= out.hi,
    };
    Ok(RowOutcome {
        pass,
        detail: format!("sat({n},{family}) {} nodes={}", out.value_field(), out.nodes),
    })
}

const MINUTE: u64 = 60;

/// Every row, quick ones first.
pub fn rows() -> Vec<Row> {
    let row = |criterion, name, suite, secs: u64, run| Row {
        criterion,
        name,
        suite,
        limit: Duration::from_secs(secs),
        run,
    };
    vec![
        row(1, "sat(n,K2) = n+1 for n = 2..6", Suite::Quick, 50, criterion_searches(1)),
        row(2, "sat(3,K3) = 7, sat(4,K3) = sat(5,K3) = 10", Suite::Quick, 31 * MINUTE, criterion_searches(2)),
        row(3, "close-based bound sat(6,K4) <= 24", Suite::Quick, 10 * MINUTE, k4_six_rows),
        row(4, "3-row tables", Suite::Quick, 30 * MINUTE, criterion_searches(4)),
        row(5, "sat(n,lT22) values", Suite::Quick, 30 * MINUTE, criterion_searches(5)),
        row(6, "2-row families", Suite::Quick, MINUTE, criterion_searches(6)),
        row(7, "one-row families and their constructions", Suite::Quick, 10 * MINUTE, one_row),
        row(8, "forb of complete matrices", Suite::Quick, 10 * MINUTE, criterion_searches(8)),
        row(9, "gallery entries up to 12 rows", Suite::Quick, 2 * MINUTE, gallery_all),
        row(10, "property suites", Suite::Quick, 30 * MINUTE, properties),
        row(2, "sat(6,K3) = 10", Suite::Full, 5 * 3600, |ctx| budgeted(ctx, 6, "K3", 10)),
        row(2, "sat(7,K3) = 10", Suite::Full, 5 * 3600, |ctx| budgeted(ctx, 7, "K3", 10)),
        row(3, "sat(5,K4) = 22", Suite::Full, 5 * 3600, |ctx| budgeted(ctx, 5, "K4", 22)),
    ]
}

/// The rows a suite runs: quick rows, plus the full rows for `Suite::Full`.
pub fn suite_rows(suite: Suite) -> Vec<Row> {
    rows()
        .into_iter()
        .filter(|r| suite == Suite::Full || r.suite == Suite::Quick)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_containment_examples() {
        let k2 = build_k_l(2, 1).unwrap();
        assert!(contains_brute(&k2, &k2));
        let m = Matrix::from_row_strings(1, &["01", "01"]).unwrap();
        assert!(!contains_brute(&m, &k2));
    }

    #[test]
    fn instance_tables_are_populated() {
        assert_eq!(quick_instances(1).len(), 5);
        assert_eq!(quick_instances(8).len(), 19);
        assert_eq!(quick_instances(8)[14].expected, 16);
        assert_eq!(suite_rows(Suite::Quick).len(), 10);
        assert_eq!(suite_rows(Suite::Full).len(), 13);
    }

    #[test]
    fn gallery_tamper_fails_the_row() {
        let dir = tempfile::tempdir().unwrap();
        for name in Assets::names() {
            let m = Assets::embedded().load(name).unwrap();
            std::fs::write(dir.path().join(format!("{name}.txt")), crate::format_matrix(&m)).unwrap();
        }
        let ctx = Context {
            assets: Assets::from_dir(dir.path()),
            ..Context::default()
        };
        assert!(gallery_all(&ctx).unwrap().pass);
        std::fs::write(dir.path().join("k3_sat_6x10.txt"), "6 10 1\n0000110111\n0011000111\n0101001011\n1000011011\n1010001101\n0100101100\n").unwrap();
        let r = gallery_all(&ctx).unwrap();
        assert!(!r.pass);
        assert!(r.detail.contains("K3_SAT"));
    }
}
