//! Submatrix containment up to row and column permutation.
//!
//! Row maps are enumerated in lexicographic order. For a partial row map the
//! columns of `F` fall into classes by their entries on the mapped rows, and
//! each class can only be matched by host columns with the same restricted
//! entries. Those host sets are disjoint across classes, so the matching
//! condition reduces to a count per class, evaluated with packed masks.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Certificate that `F ⊆ M`: `F(i,j) = M(row_map[i], col_map[j])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainmentWitness {
    pub row_map: Vec<usize>,
    pub col_map: Vec<usize>,
}

impl ContainmentWitness {
    /// Replays the witness against both matrices.
    pub fn is_valid(&self, host: &Matrix, pattern: &Matrix) -> bool {
        let injective = |v: &[usize], bound: usize| {
            let mut seen = vec![false; bound];
            v.iter().all(|&x| x < bound && !std::mem::replace(&mut seen[x], true))
        };
        self.row_map.len() == pattern.rows()
            && self.col_map.len() == pattern.cols()
            && injective(&self.row_map, host.rows())
            && injective(&self.col_map, host.cols())
            && (0..pattern.rows()).all(|i| {
                (0..pattern.cols()).all(|j| pattern.entry(i, j) == host.entry(self.row_map[i], self.col_map[j]))
            })
    }
}

/// Finds the lexicographically least witness of `pattern ⊆ host`, comparing
/// row maps first and column maps second.
pub fn contains(host: &Matrix, pattern: &Matrix) -> Result<Option<ContainmentWitness>> {
    Matcher::new(host, pattern, None)?.run()
}

/// Like [`contains`] but only accepts copies whose column map uses host
/// column `col`.
pub fn contains_using(host: &Matrix, pattern: &Matrix, col: usize) -> Result<Option<ContainmentWitness>> {
    if col >= host.cols() {
        return Err(Error::OutOfRange(format!("column {col} of a {}-column matrix", host.cols())));
    }
    Matcher::new(host, pattern, Some(col))?.run()
}

type Mask = Vec<u64>;

struct Matcher<'a> {
    host: &'a Matrix,
    pattern: &'a Matrix,
    must_use: Option<usize>,
    words: usize,
    /// `symbol_rows[i * (l+1) + s]`: host columns with entry `s` in row `i`.
    symbol_rows: Vec<Mask>,
    /// `fits[r][i]`: host row `i` has at least as many of each symbol as
    /// pattern row `r`.
    fits: Vec<Vec<bool>>,
    /// `groups[t]`: (representative column, class size) for the classes of
    /// pattern columns agreeing on rows `0..t`.
    groups: Vec<Vec<(usize, usize)>>,
}

impl<'a> Matcher<'a> {
    fn new(host: &'a Matrix, pattern: &'a Matrix, must_use: Option<usize>) -> Result<Matcher<'a>> {
        if host.alphabet() != pattern.alphabet() {
            return Err(Error::AlphabetMismatch {
                host: host.alphabet(),
                pattern: pattern.alphabet(),
            });
        }
        let sym = host.alphabet() as usize + 1;
        let words = host.cols().div_ceil(64).max(1);
        let mut symbol_rows = vec![vec![0u64; words]; host.rows() * sym];
        for j in 0..host.cols() {
            for i in 0..host.rows() {
                symbol_rows[i * sym + host.entry(i, j) as usize][j / 64] |= 1 << (j % 64);
            }
        }
        let counts = |m: &Matrix, i: usize| {
            let mut c = vec![0usize; sym];
            for j in 0..m.cols() {
                c[m.entry(i, j) as usize] += 1;
            }
            c
        };
        let host_counts: Vec<Vec<usize>> = (0..host.rows()).map(|i| counts(host, i)).collect();
        let fits = (0..pattern.rows())
            .map(|r| {
                let need = counts(pattern, r);
                host_counts.iter().map(|have| need.iter().zip(have).all(|(a, b)| a <= b)).collect()
            })
            .collect();
        let groups = (0..=pattern.rows())
            .map(|t| {
                let mut reps: Vec<(usize, usize)> = Vec::new();
                for j in 0..pattern.cols() {
                    let key = &pattern.column(j)[..t];
                    match reps.iter_mut().find(|(r, _)| &pattern.column(*r)[..t] == key) {
                        Some(g) => g.1 += 1,
                        None => reps.push((j, 1)),
                    }
                }
                reps
            })
            .collect();
        Ok(Matcher {
            host,
            pattern,
            must_use,
            words,
            symbol_rows,
            fits,
            groups,
        })
    }

    fn run(&self) -> Result<Option<ContainmentWitness>> {
        let (k, e) = (self.pattern.rows(), self.pattern.cols());
        if k > self.host.rows() || e > self.host.cols() {
            return Ok(None);
        }
        let mut full = vec![u64::MAX; self.words];
        let tail = self.host.cols() % 64;
        if tail != 0 {
            full[self.words - 1] = (1u64 << tail) - 1;
        }
        if self.host.cols() == 0 {
            full[0] = 0;
        }
        // masks[t * e + j]: host columns agreeing with pattern column j on rows 0..t.
        let mut masks = vec![Vec::new(); (k + 1) * e];
        for j in 0..e {
            masks[j] = full.clone();
        }
        let mut row_map = Vec::with_capacity(k);
        let mut used = vec![false; self.host.rows()];
        if !self.feasible(&masks, 0) {
            return Ok(None);
        }
        if self.extend(&mut row_map, &mut used, &mut masks) {
            let col_map = self.assign_columns(&masks[k * e..]);
            let w = ContainmentWitness { row_map, col_map };
            debug_assert!(w.is_valid(self.host, self.pattern));
            return Ok(Some(w));
        }
        Ok(None)
    }

    fn feasible(&self, masks: &[Mask], t: usize) -> bool {
        let e = self.pattern.cols();
        let layer = &masks[t * e..(t + 1) * e];
        let mut hits_required = self.must_use.is_none();
        for &(rep, size) in &self.groups[t] {
            let m = &layer[rep];
            let have: usize = m.iter().map(|w| w.count_ones() as usize).sum();
            if have < size {
                return false;
            }
            if let Some(c) = self.must_use {
                hits_required |= m[c / 64] >> (c % 64) & 1 == 1;
            }
        }
        hits_required
    }

    fn extend(&self, row_map: &mut Vec<usize>, used: &mut [bool], masks: &mut [Mask]) -> bool {
        let t = row_map.len();
        let (k, e) = (self.pattern.rows(), self.pattern.cols());
        if t == k {
            return true;
        }
        let sym = self.host.alphabet() as usize + 1;
        for i in 0..self.host.rows() {
            if used[i] || !self.fits[t][i] {
                continue;
            }
            for j in 0..e {
                let sel = &self.symbol_rows[i * sym + self.pattern.entry(t, j) as usize];
                let next: Mask = masks[t * e + j].iter().zip(sel).map(|(a, b)| a & b).collect();
                masks[(t + 1) * e + j] = next;
            }
            if !self.feasible(masks, t + 1) {
                continue;
            }
            used[i] = true;
            row_map.push(i);
            if self.extend(row_map, used, masks) {
                return true;
            }
            row_map.pop();
            used[i] = false;
        }
        false
    }

    /// Lowest unused host column per pattern column; the required column, if
    /// any, goes to the first pattern column of its class.
    fn assign_columns(&self, layer: &[Mask]) -> Vec<usize> {
        let e = self.pattern.cols();
        let mut taken = vec![false; self.host.cols()];
        let mut col_map = vec![usize::MAX; e];
        if let Some(c) = self.must_use {
            let j = (0..e).find(|&j| layer[j][c / 64] >> (c % 64) & 1 == 1).expect("checked by feasible");
            col_map[j] = c;
            taken[c] = true;
        }
        for j in 0..e {
            if col_map[j] != usize::MAX {
                continue;
            }
            let c = (0..self.host.cols())
                .find(|&c| !taken[c] && layer[j][c / 64] >> (c % 64) & 1 == 1)
                .expect("class counts checked by feasible");
            col_map[j] = c;
            taken[c] = true;
        }
        col_map
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{build_t, parse_matrix};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Every row injection in lexicographic order, then every column
    /// injection in lexicographic order.
    fn brute(host: &Matrix, pattern: &Matrix, must_use: Option<usize>) -> Option<ContainmentWitness> {
        fn injections(k: usize, n: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in injections(k - 1, n) {
                for x in 0..n {
                    if !p.contains(&x) {
                        let mut q = p.clone();
                        q.push(x);
                        out.push(q);
                    }
                }
            }
            out.sort();
            out
        }
        for rm in injections(pattern.rows(), host.rows()) {
            for cm in injections(pattern.cols(), host.cols()) {
                if must_use.is_some_and(|c| !cm.contains(&c)) {
                    continue;
                }
                let w = ContainmentWitness {
                    row_map: rm.clone(),
                    col_map: cm,
                };
                if w.is_valid(host, pattern) {
                    return Some(w);
                }
            }
        }
        None
    }

    fn random(rng: &mut ChaCha8Rng, n: usize, m: usize, l: u8) -> Matrix {
        let cols: Vec<Vec<u8>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(0..=l)).collect()).collect();
        Matrix::from_columns(n, l, &cols).unwrap()
    }

    #[test]
    fn agrees_with_exhaustive_injections() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let l = if rng.gen_bool(0.8) { 1 } else { 2 };
            let (hn, hm) = (rng.gen_range(0..=6), rng.gen_range(0..=8));
            let host = random(&mut rng, hn, hm, l);
            let (pn, pm) = (rng.gen_range(0..=3), rng.gen_range(0..=4));
            let pattern = random(&mut rng, pn, pm, l);
            let got = contains(&host, &pattern).unwrap();
            let want = brute(&host, &pattern, None);
            // The oracle enumerates column maps in full lexicographic order,
            // which for a fixed row map coincides with the greedy assignment.
            assert_eq!(got, want, "{host:?} {pattern:?}");
        }
    }

    #[test]
    fn must_use_agrees_with_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..500 {
            let (hn, hm) = (rng.gen_range(1..=5), rng.gen_range(1..=7));
            let host = random(&mut rng, hn, hm, 1);
            let (pn, pm) = (rng.gen_range(0..=3), rng.gen_range(1..=3));
            let pattern = random(&mut rng, pn, pm, 1);
            let c = rng.gen_range(0..host.cols());
            let got = contains_using(&host, &pattern, c).unwrap();
            assert_eq!(got.is_some(), brute(&host, &pattern, Some(c)).is_some());
            if let Some(w) = got {
                assert!(w.is_valid(&host, &pattern) && w.col_map.contains(&c));
            }
        }
    }

    #[test]
    fn examples() {
        let k2 = build_t(2, 0, 2).unwrap();
        let k3 = build_t(3, 0, 3).unwrap();
        assert!(contains(&k3, &k2).unwrap().is_some());
        let w = contains(&k2, &k2).unwrap().unwrap();
        assert_eq!(w.row_map, vec![0, 1]);
        assert_eq!(w.col_map, vec![0, 1, 2, 3]);

        let one = parse_matrix("1 1 1\n1\n").unwrap();
        let two = parse_matrix("1 2 1\n11\n").unwrap();
        assert!(contains(&one, &two).unwrap().is_none());
        assert!(contains(&two, &one).unwrap().is_some());

        let m6 = Matrix::from_row_strings(
            1,
            &["0000110111", "0011000111", "0101001011", "1000011011", "1010001101", "0100101101"],
        )
        .unwrap();
        assert!(contains(&m6, &k3).unwrap().is_none());
        let k22 = crate::matrix::build_k_l(2, 2).unwrap();
        assert!(matches!(contains(&k2, &k22), Err(Error::AlphabetMismatch { .. })));
    }

    #[test]
    fn degenerate_patterns() {
        let host = build_t(3, 1, 1).unwrap();
        let empty_rows = Matrix::from_columns::<Vec<u8>>(0, 1, &[vec![], vec![]]).unwrap();
        assert!(contains(&host, &empty_rows).unwrap().is_some());
        assert!(contains(&Matrix::empty(3, 1), &build_t(2, 1, 1).unwrap()).unwrap().is_none());
    }
}
