use std::path::Path;
use std::process::{Command, Output};

fn satkit(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_satkit"))
        .args(args)
        .current_dir(dir)
        .env_remove("SATKIT_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Drops the trailing seconds field of result records.
fn strip_seconds(text: &str) -> String {
    text.lines()
        .map(|l| match l.rsplit_once('\t') {
            Some((head, tail)) if l.matches('\t').count() == 6 && tail.parse::<f64>().is_ok() => format!("{head}\t*"),
            _ => l.to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn search_output_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "K3.fam", "K3\n");
    write(dir.path(), "T32.fam", "T:3:2\n");
    let mut out = String::new();
    for args in [
        &["search", "sat", "4", "K3.fam"][..],
        &["search", "forb", "5", "K3.fam"],
        &["search", "sat", "3", "T32.fam"],
        &["search", "msat", "3", "K2"],
        &["search", "sat", "4", "K3", "--node-limit", "50"],
        &["search", "sat", "4", "K3", "--show-witness"],
    ] {
        let o = satkit(args, dir.path());
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        out.push_str(&stdout(&o));
    }
    let golden = include_str!("golden/search.txt");
    assert_eq!(strip_seconds(&out), golden);
}

#[test]
fn output_is_the_same_for_any_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let a = satkit(&["search", "sat", "5", "K3", "--jobs", "1"], dir.path());
    let b = satkit(&["search", "sat", "5", "K3", "--jobs", "3"], dir.path());
    assert_eq!(strip_seconds(&stdout(&a)), strip_seconds(&stdout(&b)));
}

#[test]
fn checkpoint_and_cache_flow() {
    let dir = tempfile::tempdir().unwrap();
    let o = satkit(&["search", "sat", "4", "K3", "--node-limit", "100", "--checkpoint", "ck.txt"], dir.path());
    assert!(stdout(&o).contains("UPPER-BOUND"));
    let o = satkit(&["search", "sat", "4", "K3", "--resume", "ck.txt", "--cache", "cache/results.tsv"], dir.path());
    assert!(stdout(&o).contains("EXACT:10\twitnesses/"));
    let cached = std::fs::read_to_string(dir.path().join("cache/results.tsv")).unwrap();
    assert_eq!(cached.lines().count(), 1);
    assert!(dir.path().join("cache/witnesses").read_dir().unwrap().count() == 1);

    // A second run is answered from the cache.
    let again = Command::new(env!("CARGO_BIN_EXE_satkit"))
        .args(["search", "sat", "4", "K3"])
        .current_dir(dir.path())
        .env("SATKIT_CACHE", "cache/results.tsv")
        .output()
        .unwrap();
    assert_eq!(stdout(&again).trim_end(), cached.trim_end());

    let o = satkit(&["search", "sat", "4", "K2", "--resume", "ck.txt"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    write(dir.path(), "junk.txt", "not a checkpoint\n");
    let o = satkit(&["search", "sat", "4", "K3", "--resume", "junk.txt"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn contain_and_check_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let m = satkit(&["construct", "K3_SAT", "6"], p);
    write(p, "k3.txt", &stdout(&m));
    let o = satkit(&["contain", "k3.txt", "K3"], p);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "FREE\n"));

    write(p, "k2.txt", "2 4 1\n0011\n0101\n");
    let o = satkit(&["contain", "k2.txt", "K2"], p);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "CONTAINS\nmember 1\nrows 1 2\ncols 1 2 3 4\n");
    let o = satkit(&["--machine", "contain", "k2.txt", "K2"], p);
    assert_eq!(stdout(&o), "CONTAINS\t1\t1 2\t1 2 3 4\n");
    let o = satkit(&["check-sat", "k2.txt", "K2"], p);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(1), "NOT-ADMISSIBLE\nmember 1\nrows 1 2\ncols 1 2 3 4\n"));

    let t = satkit(&["construct", "T30T33", "4"], p);
    write(p, "t.txt", &stdout(&t));
    let o = satkit(&["check-sat", "t.txt", "T:3:0+T:3:3"], p);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "SATURATED\n"));

    // T_4^{<=1} without the column with a single one in the last row.
    write(p, "t41.txt", "4 4 1\n0100\n0010\n0001\n0000\n");
    let o = satkit(&["check-sat", "t41.txt", "K2"], p);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(1), "EXTENDABLE 0001\n"));
    let o = satkit(&["check-msat", "t41.txt", "K2"], p);
    assert_eq!(o.status.code(), Some(1));

    let o = satkit(&["close", "t41.txt", "K2"], p);
    assert_eq!(stdout(&o), "4 5 1\n01000\n00100\n00010\n00001\n");
}

#[test]
fn shift_and_bound() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    write(p, "m.txt", "2 3 1\n011\n101\n");
    let o = satkit(&["shift", "m.txt", "--row", "1"], p);
    assert_eq!(stdout(&o), "2 3 1\n001\n101\n");
    let o = satkit(&["shift", "m.txt"], p);
    assert_eq!(stdout(&o), "2 3 1\n001\n100\n");
    let o = satkit(&["shift", "m.txt", "--row", "3"], p);
    assert_eq!(o.status.code(), Some(2));
    let o = satkit(&["--machine", "bound", "3", "2", "-l", "2"], p);
    assert!(stdout(&o).starts_with("forb-exact\t20\t"));
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    write(p, "ragged.txt", "2 2 1\n01\n0\n");
    let o = satkit(&["contain", "ragged.txt", "K2"], p);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 3, column 2"), "{err}");

    for args in [
        &["contain", "missing.txt", "K2"][..],
        &["search", "sat", "3", "Q7"],
        &["search", "sideways", "3", "K2"],
        &["search", "sat", "3", "K2", "--jobs", "0"],
        &["search", "sat", "3", "K2", "--min-size", "5", "--max-size", "2"],
        &["construct", "NOPE", "4"],
        &["construct", "K3_SAT", "2"],
        &["verify-paper", "--suite", "medium"],
        &[],
    ] {
        let o = satkit(args, p);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn tampered_asset_fails_its_row() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data");
    for entry in std::fs::read_dir(&data).unwrap() {
        let entry = entry.unwrap();
        std::fs::copy(entry.path(), p.join(entry.file_name())).unwrap();
    }
    let o = satkit(&["construct", "T30T33", "4", "--data-dir", ".", "--verify"], p);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(p.join("t30t33_m4.txt")).unwrap();
    let flipped: String = text
        .lines()
        .enumerate()
        .map(|(i, l)| if i == 1 { l.replacen('1', "0", 1) } else { l.to_string() })
        .collect::<Vec<_>>()
        .join("\n");
    write(p, "t30t33_m4.txt", &(flipped + "\n"));
    let o = satkit(&["construct", "T30T33", "4", "--data-dir", ".", "--verify"], p);
    assert_eq!(o.status.code(), Some(1));
}
