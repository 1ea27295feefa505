//! Minimal GF(2) linear algebra on u64 bit-vector rows.

/// Incremental echelon basis; rows keep distinct pivot (lowest set) bits.
#[derive(Debug, Clone, Default)]
pub(crate) struct Gf2Basis {
    rows: Vec<u64>,
}

impl Gf2Basis {
    pub fn reduce(&self, mut v: u64) -> u64 {
        for &row in &self.rows {
            let pivot = row & row.wrapping_neg();
            if v & pivot != 0 {
                v ^= row;
            }
        }
        v
    }

    /// Reduce and insert; true when the rank grew.
    pub fn insert(&mut self, v: u64) -> bool {
        let r = self.reduce(v);
        if r == 0 {
            return false;
        }
        self.rows.push(r);
        // keep rows sorted by pivot for stable reduction order
        self.rows.sort_by_key(|row| row & row.wrapping_neg());
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }
}

/// Basis of the solution space {x : parity(row & x) = 0 for all rows} in n
/// variables, via reduced row echelon form.
pub(crate) fn nullspace(rows: &[u64], n: usize) -> Vec<u64> {
    assert!(n <= 64);
    let mut echelon: Vec<u64> = Vec::new();
    for &row in rows {
        let mut r = row;
        for &e in &echelon {
            let pivot = e & e.wrapping_neg();
            if r & pivot != 0 {
                r ^= e;
            }
        }
        if r != 0 {
            echelon.push(r);
        }
    }
    // full reduction: clear pivot bits from all other rows
    let mut reduced = echelon.clone();
    reduced.sort_by_key(|row| row & row.wrapping_neg());
    for i in 0..reduced.len() {
        let pivot = reduced[i] & reduced[i].wrapping_neg();
        for j in 0..reduced.len() {
            if i != j && reduced[j] & pivot != 0 {
                reduced[j] ^= reduced[i];
            }
        }
    }
    let pivot_mask: u64 = reduced
        .iter()
        .map(|row| row & row.wrapping_neg())
        .fold(0, |a, b| a | b);
    let mut basis = Vec::new();
    for col in 0..n {
        let bit = 1u64 << col;
        if pivot_mask & bit != 0 {
            continue;
        }
        // free column: set it, then fix every pivot to satisfy its row
        let mut v = bit;
        for &row in &reduced {
            let pivot = row & row.wrapping_neg();
            if (row & v).count_ones() % 2 == 1 {
                v ^= pivot;
            }
        }
        debug_assert!(rows.iter().all(|&r| (r & v).count_ones().is_multiple_of(2)));
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_small_system() {
        // x0 + x2 = 0, x1 = 0 over 3 variables -> span{(1,0,1)}
        let rows = vec![0b101u64, 0b010];
        let basis = nullspace(&rows, 3);
        assert_eq!(basis, vec![0b101]);
    }

    #[test]
    fn nullspace_no_constraints_is_everything() {
        let basis = nullspace(&[], 4);
        assert_eq!(basis.len(), 4);
    }

    #[test]
    fn basis_rank_and_membership() {
        let mut b = Gf2Basis::default();
        assert!(b.insert(0b110));
        assert!(b.insert(0b011));
        assert!(!b.insert(0b101)); // dependent
        assert_eq!(b.rank(), 2);
        assert!(b.contains(0b101));
        assert!(!b.contains(0b001));
    }
}
