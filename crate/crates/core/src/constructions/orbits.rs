//! Saturated matrices closed from seeds invariant under cyclic row shifts.

use crate::error::{Error, Result};
use crate::family::{family_free, Family, ForbiddenFamily};
use crate::matrix::{ColumnId, Matrix};
use crate::saturation::{close, ColumnOrder};

/// Orbits of all columns under the row rotation `i → i+1 (mod n)`, each in
/// increasing id order, listed by smallest member.
pub fn rotation_orbits(n: usize, alphabet: u8) -> Result<Vec<Vec<ColumnId>>> {
    let universe = ColumnId::universe(n, alphabet)
        .filter(|&u| u <= 1 << 16)
        .ok_or_else(|| Error::Unsupported(format!("{n} rows over [0,{alphabet}] is too large")))?;
    let mut seen = vec![false; universe as usize];
    let mut out = Vec::new();
    for x in 0..universe {
        if seen[x as usize] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut col = ColumnId(x).decode(n, alphabet);
        loop {
            let id = ColumnId::encode(&col, alphabet);
            if seen[id.0 as usize] {
                break;
            }
            seen[id.0 as usize] = true;
            orbit.push(id);
            col.rotate_left(1);
        }
        orbit.sort();
        out.push(orbit);
    }
    Ok(out)
}

/// The smallest matrix `close(seed)` over seeds that are free unions of
/// rotation orbits with at most `max_seed` columns. Ties keep the seed that
/// comes first in orbit-mask order.
pub fn rotation_closure(n: usize, fam: &Family, max_seed: usize) -> Result<Matrix> {
    let alphabet = fam.alphabet();
    let orbits = rotation_orbits(n, alphabet)?;
    if orbits.len() > 24 {
        return Err(Error::Unsupported(format!("{} rotation orbits are too many to enumerate", orbits.len())));
    }
    let mut best: Option<Matrix> = None;
    for mask in 0u32..1 << orbits.len() {
        let chosen = || (0..orbits.len()).filter(move |&i| mask >> i & 1 == 1);
        let size: usize = chosen().map(|i| orbits[i].len()).sum();
        if size > max_seed {
            continue;
        }
        let mut ids: Vec<ColumnId> = chosen().flat_map(|i| orbits[i].iter().copied()).collect();
        ids.sort();
        let seed = Matrix::from_column_ids(n, alphabet, &ids);
        if !family_free(&seed, fam)? {
            continue;
        }
        let m = close(&seed, fam as &dyn ForbiddenFamily, &ColumnOrder::Ascending)?;
        if best.as_ref().is_none_or(|b| m.cols() < b.cols()) {
            best = Some(m);
        }
    }
    Ok(best.expect("the empty seed is always free"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::parse_family;
    use crate::saturation::is_saturated;

    #[test]
    fn orbits_partition_the_universe() {
        for n in 1..=7 {
            let orbits = rotation_orbits(n, 1).unwrap();
            let total: usize = orbits.iter().map(Vec::len).sum();
            assert_eq!(total, 1 << n);
            assert!(orbits.iter().all(|o| n % o.len() == 0));
        }
        assert_eq!(rotation_orbits(6, 1).unwrap().len(), 14);
    }

    #[test]
    fn closure_is_saturated() {
        let k3 = parse_family("K3").unwrap();
        let m = rotation_closure(5, &k3, 12).unwrap();
        assert!(is_saturated(&m, &k3).unwrap().is_saturated());
    }
}
