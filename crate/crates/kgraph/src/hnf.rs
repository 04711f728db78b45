//! Subgroups of `Z^k` presented by generators, canonicalised by row-style
//! Hermite normal form. Used for periodicity groups of boundary paths.

use crate::degree::ZVec;
use serde::{Deserialize, Serialize};

/// A subgroup of `Z^k`, stored as the rows of its Hermite normal form.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Lattice {
    pub rank_ambient: usize,
    /// HNF basis rows; empty for the trivial subgroup.
    pub basis: Vec<ZVec>,
}

impl Lattice {
    pub fn trivial(k: usize) -> Self {
        Lattice { rank_ambient: k, basis: Vec::new() }
    }

    pub fn full(k: usize) -> Self {
        let mut rows = Vec::new();
        for i in 0..k {
            let mut v = vec![0i64; k];
            v[i] = 1;
            rows.push(ZVec(v));
        }
        Lattice { rank_ambient: k, basis: rows }
    }

    /// Subgroup generated by the given vectors.
    pub fn from_generators(k: usize, gens: &[ZVec]) -> Self {
        let rows: Vec<Vec<i64>> = gens.iter().map(|g| g.0.clone()).collect();
        let h = hermite_normal_form(rows, k);
        Lattice { rank_ambient: k, basis: h.into_iter().map(ZVec).collect() }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    /// Membership test by back-substitution against the HNF rows.
    pub fn contains(&self, v: &ZVec) -> bool {
        let mut v = v.0.clone();
        for row in &self.basis {
            let pivot_col = row.0.iter().position(|&c| c != 0).expect("nonzero HNF row");
            let p = row.0[pivot_col];
            if v[pivot_col] % p != 0 {
                return false;
            }
            let q = v[pivot_col] / p;
            for j in 0..v.len() {
                v[j] -= q * row.0[j];
            }
        }
        v.iter().all(|&c| c == 0)
    }

    pub fn is_subgroup_of(&self, other: &Lattice) -> bool {
        self.basis.iter().all(|row| other.contains(row))
    }

    /// Image of this subgroup under a homomorphism given on basis rows.
    pub fn map<F: Fn(&ZVec) -> ZVec>(&self, target_rank: usize, f: F) -> Lattice {
        let gens: Vec<ZVec> = self.basis.iter().map(|b| f(b)).collect();
        Lattice::from_generators(target_rank, &gens)
    }
}

/// Row-style HNF: pivots positive, entries above a pivot reduced into `[0, pivot)`.
/// Zero rows are dropped; the result is a canonical basis of the row span.
pub fn hermite_normal_form(mut rows: Vec<Vec<i64>>, width: usize) -> Vec<Vec<i64>> {
    rows.retain(|r| r.iter().any(|&c| c != 0));
    for r in &rows {
        assert_eq!(r.len(), width, "generator width mismatch");
    }
    let mut out: Vec<Vec<i64>> = Vec::new();
    let mut col = 0;
    while col < width && !rows.is_empty() {
        // gcd-reduce the current column across remaining rows
        loop {
            rows.sort_by_key(|r| r[col].unsigned_abs());
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let pivot_idx = nz[0];
            let pivot_val = rows[pivot_idx][col];
            for &i in &nz[1..] {
                let q = rows[i][col] / pivot_val;
                for j in 0..width {
                    rows[i][j] -= q * rows[pivot_idx][j];
                }
            }
            rows.retain(|r| r.iter().any(|&c| c != 0));
            if rows.is_empty() {
                break;
            }
        }
        if let Some(i) = (0..rows.len()).find(|&i| rows[i][col] != 0) {
            let mut pivot = rows.remove(i);
            if pivot[col] < 0 {
                for c in pivot.iter_mut() {
                    *c = -*c;
                }
            }
            out.push(pivot);
        }
        col += 1;
    }
    // reduce entries above each pivot
    for i in (0..out.len()).rev() {
        let pivot_col = out[i].iter().position(|&c| c != 0).unwrap();
        let p = out[i][pivot_col];
        for j in 0..i {
            let v = out[j][pivot_col];
            let q = v.div_euclid(p);
            if q != 0 {
                for c in 0..width {
                    out[j][c] -= q * out[i][c];
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zv(v: &[i64]) -> ZVec {
        ZVec(v.to_vec())
    }

    #[test]
    fn full_lattice_from_skew_generators() {
        let l = Lattice::from_generators(2, &[zv(&[1, 1]), zv(&[0, 1])]);
        assert_eq!(l, Lattice::full(2));
        assert!(l.contains(&zv(&[-7, 3])));
    }

    #[test]
    fn canonical_under_generator_shuffles() {
        let a = Lattice::from_generators(2, &[zv(&[2, 0]), zv(&[0, 3]), zv(&[2, 3])]);
        let b = Lattice::from_generators(2, &[zv(&[-2, -3]), zv(&[0, 3]), zv(&[2, 0])]);
        assert_eq!(a, b);
    }

    #[test]
    fn membership_and_rank() {
        let l = Lattice::from_generators(3, &[zv(&[2, 0, 0]), zv(&[0, 0, 5])]);
        assert_eq!(l.rank(), 2);
        assert!(l.contains(&zv(&[4, 0, -5])));
        assert!(!l.contains(&zv(&[1, 0, 0])));
        assert!(!l.contains(&zv(&[0, 1, 0])));
    }

    #[test]
    fn closure_under_negation_and_addition() {
        let l = Lattice::from_generators(2, &[zv(&[3, 1])]);
        for a in &l.basis {
            assert!(l.contains(&a.neg()));
            for b in &l.basis {
                assert!(l.contains(&a.add(b)));
            }
        }
    }

    #[test]
    fn trivial_subgroup() {
        let l = Lattice::from_generators(2, &[zv(&[0, 0])]);
        assert!(l.is_trivial());
        assert!(l.contains(&zv(&[0, 0])));
        assert!(!l.contains(&zv(&[0, 1])));
    }
}
