//! Shuffle product on the level complex.

use super::finite::FiniteLevels;
use crate::error::{Error, Result};
use crate::exactlin::{rank_of_vectors, SparseVec};
use crate::logring::subsets;

/// `(p, q)`-shuffles as the sorted images of the first `p` positions, with
/// the sign of the permutation.
fn shuffles(p: usize, q: usize) -> Vec<(Vec<usize>, Vec<usize>, bool)> {
    subsets(p + q, p)
        .into_iter()
        .map(|a| {
            let a: Vec<usize> = a.into_iter().map(|i| i + 1).collect();
            let b: Vec<usize> = (1..=p + q).filter(|i| !a.contains(i)).collect();
            let inv: usize = a.iter().map(|&x| b.iter().filter(|&&y| y < x).count()).sum();
            (a, b, inv % 2 == 1)
        })
        .collect()
}

impl FiniteLevels {
    fn multiply(&self, n: usize, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let l = &self.levels[n];
        let r = l.ring();
        let basis = &self.bases[n];
        let px = basis.poly(r, x);
        let py = basis.poly(r, y);
        basis.coords(&self.field, &l.quotient.mul(&px, &py))
    }

    fn is_cycle(&self, n: usize, v: &SparseVec) -> bool {
        n == 0 || self.b(n).apply(&self.field, v).is_zero()
    }

    /// Whether `v ∈ C_n` is `b` of something in `C_{n+1}`.
    pub fn is_boundary(&self, n: usize, v: &SparseVec) -> Result<bool> {
        if n + 1 > self.top() {
            return Err(Error::CheckFailed(format!("level {} not built", n + 1)));
        }
        let mut cols = self.b(n + 1).columns();
        let before = rank_of_vectors(&self.field, &cols);
        cols.push(v.clone());
        Ok(rank_of_vectors(&self.field, &cols) == before)
    }
}

/// `x · y = Σ_σ sgn(σ) σ(x ⊗ y)` over `(p, q)`-shuffles, for cycles
/// `x ∈ C_p` and `y ∈ C_q`.
pub fn shuffle_product(fl: &FiniteLevels, p: usize, x: &SparseVec, q: usize, y: &SparseVec) -> Result<SparseVec> {
    let n = p + q;
    if n > fl.top() {
        return Err(Error::CheckFailed(format!("level {n} not built")));
    }
    if !fl.is_cycle(p, x) || !fl.is_cycle(q, y) {
        return Err(Error::CheckFailed("shuffle factors must be cycles".into()));
    }
    let f = &fl.field;
    let mut acc = SparseVec::new();
    for (a, b, odd) in shuffles(p, q) {
        let fa: Vec<usize> = std::iter::once(0).chain(a).collect();
        let fb: Vec<usize> = std::iter::once(0).chain(b).collect();
        let xa = fl.matrix(p, n, &fa).apply(f, x);
        let yb = fl.matrix(q, n, &fb).apply(f, y);
        let prod = fl.multiply(n, &xa, &yb);
        let s = if odd { f.from_i64(-1) } else { f.one() };
        acc = acc.axpy(f, &s, &prod);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::ScalarField;
    use crate::grobner::Budget;
    use crate::logring::fixtures::*;

    fn dual() -> FiniteLevels {
        let s = trivial(ScalarField::Rationals, &["x"], &[1], &["x^2"]);
        FiniteLevels::build(&s, 3, &Budget::default()).unwrap()
    }

    fn basis_vec(fl: &FiniteLevels, n: usize, name: &str) -> SparseVec {
        let l = &fl.levels[n];
        let p = crate::grobner::parse_poly(l.ring(), name).unwrap();
        fl.bases[n].coords(&fl.field, &l.quotient.nf(&p))
    }

    #[test]
    fn shuffle_signs() {
        let s = shuffles(1, 1);
        assert_eq!(s.len(), 2);
        assert_eq!(s.iter().filter(|t| t.2).count(), 1);
        assert_eq!(shuffles(2, 2).len(), 6);
    }

    #[test]
    fn unit_is_neutral() {
        let fl = dual();
        let one = basis_vec(&fl, 0, "1");
        for i in 0..fl.dim(1) {
            let z = SparseVec::unit(i);
            assert_eq!(shuffle_product(&fl, 0, &one, 1, &z).unwrap(), z);
        }
    }

    #[test]
    fn graded_commutative_on_homology() {
        let fl = dual();
        let f = fl.field;
        for i in 0..fl.dim(1) {
            for j in 0..fl.dim(1) {
                let a = SparseVec::unit(i);
                let b = SparseVec::unit(j);
                let ab = shuffle_product(&fl, 1, &a, 1, &b).unwrap();
                let ba = shuffle_product(&fl, 1, &b, 1, &a).unwrap();
                let c = ab.axpy(&f, &f.one(), &ba);
                assert!(fl.is_boundary(2, &c).unwrap());
            }
        }
    }

    #[test]
    fn square_of_dx_vanishes() {
        let fl = dual();
        let e = basis_vec(&fl, 1, "x_1 - x_0");
        let sq = shuffle_product(&fl, 1, &e, 1, &e).unwrap();
        assert!(sq.is_zero());
    }
}
