use std::collections::BTreeMap;

use super::echelon::echelon;
use super::field::ScalarField;
use super::sparse::{row_reduce, Coordinates, SparseMatrix, SparseVec};
use crate::error::{Error, Result};

/// Homology at the middle spot of `V0 --f--> V1 --g--> V2`.
#[derive(Clone, Debug)]
pub struct Homology {
    pub dim: usize,
    /// Cycle representatives, independent modulo boundaries.
    pub basis: Vec<SparseVec>,
    boundaries: Vec<SparseVec>,
    coords: Coordinates,
}

impl Homology {
    /// Class of a cycle in terms of `basis`; `None` if `z` is not in
    /// `ker g` (the caller passed a non-cycle).
    pub fn classify(&self, field: &ScalarField, z: &SparseVec) -> Option<SparseVec> {
        let c = self.coords.solve(field, z)?;
        let nb = self.boundaries.len();
        Some(SparseVec::from_sorted(
            c.iter()
                .filter(|(k, _)| *k >= nb)
                .map(|(k, s)| (k - nb, s.clone()))
                .collect(),
        ))
    }

    pub fn is_boundary(&self, field: &ScalarField, z: &SparseVec) -> bool {
        self.classify(field, z).map_or(false, |c| c.is_zero())
    }

    pub fn boundary_basis(&self) -> &[SparseVec] {
        &self.boundaries
    }
}

/// Computes `ker g / im f`. Errors with `CompositionNonzero` if `g f != 0`.
pub fn complex_homology(field: &ScalarField, f: &SparseMatrix, g: &SparseMatrix) -> Result<Homology> {
    assert_eq!(f.rows(), g.cols(), "f and g are not composable");
    if !g.mul(field, f).is_zero() {
        return Err(Error::CompositionNonzero);
    }
    let n = f.rows();
    let ker = row_reduce(field, g).kernel_basis;
    let img = row_reduce(field, f).image_basis;
    let mut all = img.clone();
    all.extend(ker.iter().cloned());
    let ech = echelon(field, &all, usize::MAX, false);
    let basis: Vec<SparseVec> = ker
        .iter()
        .enumerate()
        .filter(|(k, _)| ech.created[img.len() + k].is_some())
        .map(|(_, v)| v.clone())
        .collect();
    let mut family = img.clone();
    family.extend(basis.iter().cloned());
    let coords = Coordinates::new(field, n, &family);
    Ok(Homology {
        dim: basis.len(),
        basis,
        boundaries: img,
        coords,
    })
}

/// A bounded chain complex `C_lo <- ... <- C_hi` given by its differentials,
/// `d[n]: C_n -> C_{n-1}` for `n` in `1..dims.len()`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub dims: Vec<usize>,
    /// `diffs[n]` is `d_n: C_n -> C_{n-1}`; `diffs[0]` is the zero map to nothing.
    pub diffs: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn new(dims: Vec<usize>, higher: Vec<SparseMatrix>) -> Self {
        assert_eq!(higher.len() + 1, dims.len());
        let mut diffs = vec![SparseMatrix::zero(0, dims[0])];
        for (n, d) in higher.into_iter().enumerate() {
            assert_eq!((d.rows(), d.cols()), (dims[n], dims[n + 1]), "bad shape of d_{}", n + 1);
            diffs.push(d);
        }
        ChainComplex { dims, diffs }
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    /// `d_{n} d_{n+1} = 0` for all stored `n`.
    pub fn squares_to_zero(&self, field: &ScalarField) -> bool {
        (1..self.top()).all(|n| self.diffs[n].mul(field, &self.diffs[n + 1]).is_zero())
    }

    fn incoming(&self, n: usize) -> SparseMatrix {
        if n < self.top() {
            self.diffs[n + 1].clone()
        } else {
            SparseMatrix::zero(self.dims[n], 0)
        }
    }

    /// Homology at degree `n`. Degrees at the top of the stored range have no
    /// incoming differential, so callers should build one extra degree.
    pub fn homology(&self, field: &ScalarField, n: usize) -> Result<Homology> {
        complex_homology(field, &self.incoming(n), &self.diffs[n])
    }

    pub fn betti(&self, field: &ScalarField, n: usize) -> usize {
        let out_rank = super::sparse::rank(field, &self.diffs[n]);
        let in_rank = super::sparse::rank(field, &self.incoming(n));
        self.dims[n] - out_rank - in_rank
    }
}

/// Homology dimensions per internal degree of a complex whose
/// differentials preserve a grading of the basis vectors.
///
/// `degrees[n]` grades the basis of `C_n` and `diffs[n]` is
/// `d_n: C_n -> C_{n-1}` (`diffs[0]` unused). Returns `H_0..H_top`.
pub fn graded_betti(
    field: &ScalarField,
    degrees: &[Vec<i64>],
    diffs: &[SparseMatrix],
    top: usize,
) -> Vec<BTreeMap<i64, usize>> {
    let rank_by_degree = |n: usize| -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        if n == 0 || n >= diffs.len() {
            return out;
        }
        let cols = diffs[n].transpose();
        let mut buckets: BTreeMap<i64, Vec<SparseVec>> = BTreeMap::new();
        for (j, &d) in degrees[n].iter().enumerate() {
            buckets.entry(d).or_default().push(cols.row(j).clone());
        }
        for (d, vs) in buckets {
            out.insert(d, super::sparse::rank_of_vectors(field, &vs));
        }
        out
    };
    let ranks: Vec<BTreeMap<i64, usize>> = (0..=top + 1).map(rank_by_degree).collect();
    (0..=top)
        .map(|n| {
            let mut count: BTreeMap<i64, usize> = BTreeMap::new();
            for &d in degrees.get(n).map_or(&[][..], |v| &v[..]) {
                *count.entry(d).or_default() += 1;
            }
            count
                .into_iter()
                .map(|(d, c)| {
                    let out = ranks[n].get(&d).copied().unwrap_or(0);
                    let inc = ranks[n + 1].get(&d).copied().unwrap_or(0);
                    (d, c - out - inc)
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_differentials() {
        let f = ScalarField::Rationals;
        let h = complex_homology(&f, &SparseMatrix::zero(3, 3), &SparseMatrix::zero(3, 3)).unwrap();
        assert_eq!(h.dim, 3);
    }

    #[test]
    fn identity_is_exact() {
        let f = ScalarField::Rationals;
        let h = complex_homology(&f, &SparseMatrix::identity(2), &SparseMatrix::zero(1, 2)).unwrap();
        assert_eq!(h.dim, 0);
    }

    #[test]
    fn nonzero_composition_rejected() {
        let f = ScalarField::Rationals;
        let e = complex_homology(&f, &SparseMatrix::identity(2), &SparseMatrix::identity(2));
        assert_eq!(e.unwrap_err(), Error::CompositionNonzero);
    }

    #[test]
    fn classify_cycles() {
        let f = ScalarField::Rationals;
        // C_1 = k^2 -> C_0 = 0, boundaries spanned by (1,1)
        let inc = SparseMatrix::from_i64(&f, &[vec![1], vec![1]]);
        let h = complex_homology(&f, &inc, &SparseMatrix::zero(0, 2)).unwrap();
        assert_eq!(h.dim, 1);
        let b = SparseVec::from_dense(&f, &[f.from_i64(2), f.from_i64(2)]);
        assert!(h.is_boundary(&f, &b));
        let z = SparseVec::unit(0);
        assert!(!h.is_boundary(&f, &z));
        let w = SparseVec::unit(1);
        let cz = h.classify(&f, &z).unwrap();
        let cw = h.classify(&f, &w).unwrap();
        assert_eq!(cz.scale(&f, &f.from_i64(-1)), cw);
    }
}
