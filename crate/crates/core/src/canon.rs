//! Canonical representatives of row/column-permutation classes.
//!
//! The canonical form sorts columns by `ColumnId` and picks the row order
//! whose sorted column sequence is lexicographically least. The row order is
//! found by branch-and-bound: after fixing a prefix of rows, every column's
//! final id is at least its prefix followed by its remaining digits in
//! ascending order, and the sorted list of those bounds dominates the final
//! sorted sequence entrywise.

use std::cmp::Ordering;

use crate::matrix::Matrix;

pub fn canonical_form(m: &Matrix) -> Matrix {
    m.permute_rows(&canonical_row_order(m)).sorted_columns()
}

/// True when the two matrices agree up to row and column permutations.
pub fn isomorphic(a: &Matrix, b: &Matrix) -> bool {
    a.rows() == b.rows()
        && a.cols() == b.cols()
        && a.alphabet() == b.alphabet()
        && canonical_form(a) == canonical_form(b)
}

/// A row order attaining the canonical form: row `i` of the canonical matrix
/// is row `order[i]` of `m`.
pub fn canonical_row_order(m: &Matrix) -> Vec<usize> {
    let n = m.rows();
    if n <= 1 || m.cols() == 0 {
        return (0..n).collect();
    }
    let twin = twin_classes(m);
    let mut search = Search {
        m,
        twin,
        best: None,
        best_order: (0..n).collect(),
    };
    let mut chosen = Vec::with_capacity(n);
    let mut used = vec![false; n];
    search.descend(&mut chosen, &mut used);
    search.best_order
}

/// `class[i]` is the least row `j` such that swapping rows `i` and `j`
/// leaves the column multiset unchanged.
fn twin_classes(m: &Matrix) -> Vec<usize> {
    let n = m.rows();
    let base = m.sorted_columns();
    let mut class: Vec<usize> = (0..n).collect();
    for i in 0..n {
        if class[i] != i {
            continue;
        }
        for j in i + 1..n {
            if class[j] != j {
                continue;
            }
            let mut order: Vec<usize> = (0..n).collect();
            order.swap(i, j);
            if m.permute_rows(&order).sorted_columns() == base {
                class[j] = i;
            }
        }
    }
    class
}

struct Search<'a> {
    m: &'a Matrix,
    twin: Vec<usize>,
    best: Option<Vec<Vec<u8>>>,
    best_order: Vec<usize>,
}

impl Search<'_> {
    fn bound(&self, chosen: &[usize], used: &[bool]) -> Vec<Vec<u8>> {
        let rest: Vec<usize> = (0..used.len()).filter(|&i| !used[i]).collect();
        let mut keys: Vec<Vec<u8>> = self
            .m
            .columns()
            .map(|c| {
                let mut key: Vec<u8> = chosen.iter().map(|&i| c[i]).collect();
                let mut tail: Vec<u8> = rest.iter().map(|&i| c[i]).collect();
                tail.sort_unstable();
                key.extend(tail);
                key
            })
            .collect();
        keys.sort_unstable();
        keys
    }

    /// Whether every completion of a node with sorted bound `lo` is strictly
    /// worse than the incumbent.
    fn dominated(&self, lo: &[Vec<u8>]) -> bool {
        let Some(best) = &self.best else { return false };
        for (l, b) in lo.iter().zip(best) {
            match l.cmp(b) {
                Ordering::Less => return false,
                Ordering::Greater => return true,
                Ordering::Equal => {}
            }
        }
        false
    }

    fn descend(&mut self, chosen: &mut Vec<usize>, used: &mut [bool]) {
        let n = used.len();
        if chosen.len() == n {
            let exact = self.bound(chosen, used);
            if self.best.as_ref().is_none_or(|b| exact < *b) {
                self.best = Some(exact);
                self.best_order = chosen.clone();
            }
            return;
        }
        let mut children = Vec::new();
        for r in 0..n {
            if used[r] {
                continue;
            }
            // Twin rows give identical subtrees; expand one per class.
            if (0..r).any(|q| !used[q] && self.twin[q] == self.twin[r]) {
                continue;
            }
            chosen.push(r);
            used[r] = true;
            let lo = self.bound(chosen, used);
            used[r] = false;
            chosen.pop();
            children.push((lo, r));
        }
        children.sort();
        for (lo, r) in children {
            if self.dominated(&lo) {
                continue;
            }
            chosen.push(r);
            used[r] = true;
            self.descend(chosen, used);
            used[r] = false;
            chosen.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::build_t;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn brute_canonical(m: &Matrix) -> Matrix {
        permutations(m.rows())
            .into_iter()
            .map(|p| m.permute_rows(&p).sorted_columns())
            .min_by(|a, b| a.columns().cmp(b.columns()))
            .unwrap()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize, m: usize, l: u8) -> Matrix {
        let cols: Vec<Vec<u8>> = (0..m).map(|_| (0..n).map(|_| rng.gen_range(0..=l)).collect()).collect();
        Matrix::from_columns(n, l, &cols).unwrap()
    }

    #[test]
    fn matches_factorial_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..400 {
            let n = rng.gen_range(1..=5);
            let m = rng.gen_range(0..=7);
            let l = rng.gen_range(1..=2);
            let a = random_matrix(&mut rng, n, m, l);
            assert_eq!(canonical_form(&a), brute_canonical(&a), "{a:?}");
        }
    }

    #[test]
    fn class_invariant_and_idempotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let a = random_matrix(&mut rng, 6, 9, 1);
            let mut rows: Vec<usize> = (0..6).collect();
            let mut cols: Vec<usize> = (0..9).collect();
            for i in (1..6).rev() {
                rows.swap(i, rng.gen_range(0..=i));
            }
            for j in (1..9).rev() {
                cols.swap(j, rng.gen_range(0..=j));
            }
            let b = a.permute_rows(&rows).permute_columns(&cols);
            let ca = canonical_form(&a);
            assert_eq!(ca, canonical_form(&b));
            assert_eq!(canonical_form(&ca), ca);
        }
    }

    #[test]
    fn isomorphism_agrees_with_oracle_on_4x5() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ms: Vec<Matrix> = (0..1000).map(|_| random_matrix(&mut rng, 4, 5, 1)).collect();
        let canon: Vec<Matrix> = ms.iter().map(canonical_form).collect();
        let brute: Vec<Matrix> = ms.iter().map(brute_canonical).collect();
        for i in 0..ms.len() {
            for j in (i + 1..ms.len()).step_by(37) {
                assert_eq!(canon[i] == canon[j], brute[i] == brute[j]);
            }
        }
    }

    #[test]
    fn symmetric_matrix() {
        let t = build_t(3, 1, 1).unwrap();
        let c = canonical_form(&t);
        for p in permutations(3) {
            assert_eq!(canonical_form(&t.permute_rows(&p)), c);
        }
        let swapped = Matrix::from_row_strings(1, &["0101", "0011"]).unwrap();
        assert_eq!(canonical_form(&swapped), canonical_form(&build_t(2, 0, 2).unwrap()));
    }
}
