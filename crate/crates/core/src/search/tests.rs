use super::*;
use crate::canon::canonical_form;
use crate::family::{family_free, parse_family, ForbiddenFamily};
use crate::saturation::{is_m_saturated, is_saturated};
use std::collections::HashSet;

fn fam(text: &str) -> Family {
    parse_family(text).unwrap()
}

fn problem(kind: SearchKind, n: usize, text: &str) -> SearchProblem {
    SearchProblem::new(kind, n, fam(text))
}

fn columns_only() -> SearchOptions {
    SearchOptions {
        forb_strategy: ForbStrategy::Columns,
        ..SearchOptions::default()
    }
}

/// Brute force over every subset of the universe.
fn brute(kind: SearchKind, n: usize, f: &Family) -> usize {
    let u = ColumnId::universe(n, f.alphabet()).unwrap() as usize;
    assert!(u <= 16);
    let mut best: Option<usize> = None;
    for mask in 0u32..1 << u {
        let ids: Vec<u16> = (0..u as u16).filter(|&x| mask >> x & 1 == 1).collect();
        let m = ids_to_matrix(n, f.alphabet(), &ids);
        let size = ids.len();
        let hit = match kind {
            SearchKind::Sat => is_saturated(&m, f).unwrap().is_saturated(),
            SearchKind::MSat => is_m_saturated(&m, f).unwrap().is_saturated(),
            SearchKind::Forb => family_free(&m, f).unwrap(),
        };
        if hit {
            best = Some(match (kind, best) {
                (_, None) => size,
                (SearchKind::Forb, Some(b)) => b.max(size),
                (_, Some(b)) => b.min(size),
            });
        }
    }
    best.unwrap()
}

#[test]
fn canonical_sets_match_orbit_count() {
    // Walk every canonical set for n = 3 with no forbidden members reachable
    // and compare with the number of row-permutation classes.
    for n in 2..=3usize {
        let table = symmetry::PermTable::new(n, 1).unwrap();
        let mut canon = symmetry::Canon::new(Some(&table), true, n, 1);
        let u = 1u16 << n;
        let mut found = 0usize;
        fn walk(c: &mut symmetry::Canon, set: &mut Vec<u16>, u: u16, found: &mut usize) {
            *found += 1;
            let start = set.last().map_or(0, |&x| x + 1);
            for x in start..u {
                if c.accepts(set, x) {
                    c.push();
                    set.push(x);
                    walk(c, set, u, found);
                    set.pop();
                    c.pop();
                }
            }
        }
        walk(&mut canon, &mut Vec::new(), u, &mut found);
        let mut classes = HashSet::new();
        for mask in 0u32..1 << u {
            let ids: Vec<u16> = (0..u).filter(|&x| mask >> x & 1 == 1).collect();
            classes.insert(canonical_form(&ids_to_matrix(n, 1, &ids)).column_ids());
        }
        assert_eq!(found, classes.len(), "n = {n}");
    }
}

#[test]
fn canonical_sets_are_lex_min_representatives() {
    let n = 3;
    let table = symmetry::PermTable::new(n, 2).unwrap();
    let mut canon = symmetry::Canon::new(Some(&table), true, n, 2);
    let mut direct = symmetry::Canon::new(None, true, n, 2);
    let mut rng = 12345u64;
    for _ in 0..300 {
        let mut set = Vec::new();
        for x in 0..27u16 {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            if rng >> 60 < 3 {
                set.push(x);
            }
        }
        assert_eq!(canon.load(&set), direct.load(&set), "{set:?}");
    }
}

#[test]
fn sat_matches_brute_force() {
    for (n, text) in [(2, "K2"), (3, "K2"), (3, "K3"), (3, "T:2:1"), (4, "K2"), (3, "C:10"), (3, "K1^2")] {
        let f = fam(text);
        let p = SearchProblem::new(SearchKind::Sat, n, f.clone());
        if ColumnId::universe(n, f.alphabet()).unwrap() > 16 {
            continue;
        }
        let out = run(&p, &SearchOptions::default(), None).unwrap();
        assert_eq!(out.status, Status::Exact);
        assert_eq!(out.lo, brute(SearchKind::Sat, n, &f), "sat({n}, {text})");
        assert!(is_saturated(out.witness.as_ref().unwrap(), &f).unwrap().is_saturated());
    }
}

#[test]
fn msat_matches_brute_force() {
    for (n, text) in [(3, "K2"), (3, "T:2:1"), (4, "K2"), (3, "K3")] {
        let f = fam(text);
        let p = SearchProblem::new(SearchKind::MSat, n, f.clone());
        let out = run(&p, &SearchOptions::default(), None).unwrap();
        assert_eq!(out.lo, brute(SearchKind::MSat, n, &f), "m-sat({n}, {text})");
    }
}

#[test]
fn forb_strategies_agree_with_brute_force() {
    for (n, text) in [(3, "K2"), (4, "K2"), (4, "K3"), (3, "T:2:1"), (4, "C:10"), (4, "2*C:1")] {
        let f = fam(text);
        let expect = brute(SearchKind::Forb, n, &f);
        let p = SearchProblem::new(SearchKind::Forb, n, f.clone());
        let a = run(&p, &columns_only(), None).unwrap();
        assert_eq!(a.lo, expect, "columns forb({n}, {text})");
        assert!(family_free(a.witness.as_ref().unwrap(), &f).unwrap());
        if hitting::applicable(&f) {
            let b = hitting::max_free(&p).unwrap();
            assert_eq!(b.lo, expect, "hitting forb({n}, {text})");
            assert!(family_free(b.witness.as_ref().unwrap(), &f).unwrap());
        }
    }
}

#[test]
fn symmetry_does_not_change_values() {
    for (kind, n, text) in [
        (SearchKind::Sat, 4, "K3"),
        (SearchKind::Sat, 3, "K2^2"),
        (SearchKind::Forb, 4, "K3"),
        (SearchKind::MSat, 4, "K2"),
    ] {
        let p = problem(kind, n, text);
        let on = run(&p, &columns_only(), None).unwrap();
        let off = SearchOptions {
            symmetry: false,
            row_balance_cut: false,
            ..columns_only()
        };
        let off = run(&p, &off, None).unwrap();
        assert_eq!(on.lo, off.lo, "{kind} {n} {text}");
        assert!(on.nodes <= off.nodes);
    }
}

#[test]
fn known_small_values() {
    assert_eq!(min_saturated(&problem(SearchKind::Sat, 2, "K2")).unwrap().value(), Some(3));
    assert_eq!(min_saturated(&problem(SearchKind::Sat, 5, "K2")).unwrap().value(), Some(6));
    assert_eq!(max_free(&problem(SearchKind::Forb, 4, "K2")).unwrap().value(), Some(5));
    assert_eq!(max_free(&problem(SearchKind::Forb, 5, "K3")).unwrap().value(), Some(16));
    assert_eq!(max_free(&problem(SearchKind::Forb, 3, "K1^2")).unwrap().value(), Some(8));
    assert_eq!(max_free(&problem(SearchKind::Forb, 3, "T:2:1")).unwrap().value(), Some(4));
}

#[test]
fn results_do_not_depend_on_jobs_or_split() {
    for (kind, n, text) in [(SearchKind::Sat, 4, "K3"), (SearchKind::Forb, 4, "K3"), (SearchKind::MSat, 4, "K2")] {
        let p = problem(kind, n, text);
        let base = run(&p, &columns_only(), None).unwrap();
        for jobs in [2, 4] {
            let o = SearchOptions { jobs, ..columns_only() };
            let r = run(&p, &o, None).unwrap();
            assert_eq!(r.lo, base.lo);
            assert_eq!(r.nodes, base.nodes, "{kind} jobs={jobs}");
            assert_eq!(r.witness, base.witness);
        }
        for split_depth in [0, 1, 3] {
            let o = SearchOptions {
                split_depth,
                ..columns_only()
            };
            assert_eq!(run(&p, &o, None).unwrap().lo, base.lo);
        }
    }
}

fn resume_to_end(p: &SearchProblem, opts: &SearchOptions, step: u64) -> (SearchOutcome, usize) {
    let mut limited = p.clone();
    limited.budget.node_limit = Some(step);
    let mut out = run(&limited, opts, None).unwrap();
    let mut rounds = 0;
    while let Some(ck) = out.checkpoint.take() {
        let text = ck.to_text();
        let ck = Checkpoint::parse(&text).unwrap();
        assert_eq!(ck.to_text(), text);
        limited.budget.node_limit = Some(step);
        out = run(&limited, opts, Some(&ck)).unwrap();
        rounds += 1;
    }
    (out, rounds)
}

#[test]
fn checkpoint_resume_reaches_the_same_answer() {
    for (kind, n, text) in [(SearchKind::Sat, 4, "K3"), (SearchKind::Forb, 4, "K3"), (SearchKind::MSat, 4, "K2")] {
        let p = problem(kind, n, text);
        let full = run(&p, &columns_only(), None).unwrap();
        let (resumed, rounds) = resume_to_end(&p, &columns_only(), 7);
        assert!(rounds > 0, "{kind}: budget never ran out");
        assert_eq!(resumed.status, Status::Exact);
        assert_eq!(resumed.lo, full.lo);
        assert_eq!(resumed.witness, full.witness);
        assert_eq!(resumed.nodes, full.nodes, "{kind} {n} {text}");
    }
}

#[test]
fn budget_miss_reports_bounds() {
    let mut p = problem(SearchKind::Sat, 4, "K3");
    p.budget.node_limit = Some(1);
    let out = run(&p, &SearchOptions::default(), None).unwrap();
    assert_eq!(out.status, Status::UpperBound);
    assert!(out.lo <= out.hi);
    let w = out.witness.clone().unwrap();
    assert!(is_saturated(&w, &p.family).unwrap().is_saturated());
    assert_eq!(w.cols(), out.hi);
    assert!(out.value_field().starts_with("UPPER-BOUND:"));
}

#[test]
fn checkpoint_rejects_other_problems_and_garbage() {
    let mut p = problem(SearchKind::Sat, 4, "K3");
    p.budget.node_limit = Some(3);
    let ck = run(&p, &SearchOptions::default(), None).unwrap().checkpoint.unwrap();
    let other = problem(SearchKind::Sat, 4, "K2");
    assert!(matches!(run(&other, &SearchOptions::default(), Some(&ck)), Err(Error::Checkpoint(_))));
    let text = ck.to_text();
    assert!(Checkpoint::parse(&text.replace("SATKIT-CKPT 1", "SATKIT-CKPT 9")).is_err());
    assert!(Checkpoint::parse(&text.replace("task 0", "task 5")).is_err());
    assert!(Checkpoint::parse("").is_err());
    assert!(Checkpoint::parse(&text[..text.len() / 2]).is_err() || text.len() < 40);
}

#[test]
fn result_records_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = ResultsCache::new(dir.path().join("results.tsv"));
    let p = problem(SearchKind::Forb, 4, "K2");
    let out = max_free(&p).unwrap();
    let rec = cache.store(&p, &out).unwrap();
    assert_eq!(rec.value_field(), "EXACT:5");
    let back = cache.lookup_exact(&p.fingerprint()).unwrap().unwrap();
    assert_eq!(back.fingerprint, rec.fingerprint);
    assert_eq!(back.value(), Some(5));
    assert_eq!(cache.witness(&back).unwrap(), out.witness);
    let parsed = ResultRecord::parse(&rec.to_string()).unwrap();
    assert_eq!(parsed.value_field(), rec.value_field());
    assert!(ResultRecord::parse("x\ty").is_err());
}
