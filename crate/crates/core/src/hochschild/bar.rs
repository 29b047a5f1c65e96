//! `Tor^R(A, A)` from the normalized two-sided bar construction.

use super::diagonal::{log_diagonal_ring, Backend, HochschildClasses, LogDiagonalRing};
use crate::error::{Error, Result};
use crate::exactlin::{graded_betti, ScalarField, SparseMatrix, SparseVec};
use crate::grobner::{Budget, MonomialBasis};
use crate::logring::LogRingSpec;

/// Structure constants of a finite-dimensional algebra in a monomial basis.
#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    pub basis: MonomialBasis,
    pub degrees: Vec<i64>,
    /// `mul[i][j]` = coordinates of `b_i b_j`.
    pub mul: Vec<Vec<SparseVec>>,
    pub one: usize,
}

impl FiniteAlgebra {
    pub fn new(q: &crate::grobner::QuotientRing, basis: MonomialBasis) -> Result<Self> {
        let r = &q.ring;
        let one = basis
            .index_of(&r.one_exp())
            .ok_or_else(|| Error::CheckFailed("the unit is not a basis monomial".into()))?;
        let polys: Vec<_> = basis
            .monomials
            .iter()
            .map(|e| r.monomial(e.clone(), r.field.one()))
            .collect();
        let mul = polys
            .iter()
            .map(|a| polys.iter().map(|b| basis.coords(&r.field, &q.mul(a, b))).collect())
            .collect();
        Ok(FiniteAlgebra {
            degrees: basis.monomials.iter().map(|e| r.exp_weight(e)).collect(),
            basis,
            mul,
            one,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn not_finite(e: Error) -> Error {
    match e {
        Error::NotFiniteDimensional(m) => Error::NotFiniteDimensional(format!(
            "{m}; the bar backend needs a finite-dimensional diagonal ring, use the resolution backend"
        )),
        other => other,
    }
}

/// `A ⊗ R̄^{⊗n} ⊗ A` with the bar differential, for `n ≤ top`.
pub struct BarComplex {
    pub field: ScalarField,
    pub a: FiniteAlgebra,
    pub r: FiniteAlgebra,
    /// `ε` on basis elements of `R`, in coordinates of `A`.
    pub eps: Vec<SparseVec>,
    /// Indices of the basis of `R̄ = R / k`.
    pub rbar: Vec<usize>,
    rbar_pos: Vec<Option<usize>>,
}

impl BarComplex {
    pub fn new(d: &LogDiagonalRing) -> Result<Self> {
        let field = d.data.field();
        let rq = &d.ring.quotient;
        let aq = &d.base.quotient;
        let r = FiniteAlgebra::new(rq, d.ring.finite_basis().map_err(not_finite)?)?;
        let a = FiniteAlgebra::new(aq, d.base.finite_basis().map_err(not_finite)?)?;
        let eps_m = d.augmentation.matrix(&d.ring, &r.basis, &d.base, &a.basis);
        let eps = eps_m.columns();
        let rbar: Vec<usize> = (0..r.dim()).filter(|&i| i != r.one).collect();
        let mut rbar_pos = vec![None; r.dim()];
        for (k, &i) in rbar.iter().enumerate() {
            rbar_pos[i] = Some(k);
        }
        Ok(BarComplex {
            field,
            a,
            r,
            eps,
            rbar,
            rbar_pos,
        })
    }

    pub fn dim(&self, n: usize) -> usize {
        self.a.dim() * self.a.dim() * self.rbar.len().pow(n as u32)
    }

    fn decode(&self, n: usize, mut idx: usize) -> (usize, Vec<usize>, usize) {
        let da = self.a.dim();
        let dr = self.rbar.len();
        let right = idx % da;
        idx /= da;
        let mut mid = vec![0; n];
        for k in (0..n).rev() {
            mid[k] = idx % dr;
            idx /= dr;
        }
        (idx, mid, right)
    }

    fn encode(&self, left: usize, mid: &[usize], right: usize) -> usize {
        let dr = self.rbar.len();
        let mut idx = left;
        for &m in mid {
            idx = idx * dr + m;
        }
        idx * self.a.dim() + right
    }

    pub fn degrees(&self, n: usize) -> Vec<i64> {
        (0..self.dim(n))
            .map(|i| {
                let (l, mid, r) = self.decode(n, i);
                self.a.degrees[l]
                    + self.a.degrees[r]
                    + mid.iter().map(|&m| self.r.degrees[self.rbar[m]]).sum::<i64>()
            })
            .collect()
    }

    /// `r · a = ε(r) a`, in coordinates of `A`.
    fn act(&self, r: usize, a: usize) -> SparseVec {
        let f = &self.field;
        let mut acc = SparseVec::new();
        for (k, c) in self.eps[r].iter() {
            acc = acc.axpy(f, c, &self.a.mul[*k][a]);
        }
        acc
    }

    /// `d_n: B_n → B_{n-1}`.
    pub fn differential(&self, n: usize) -> SparseMatrix {
        let f = &self.field;
        let mut entries = Vec::new();
        for idx in 0..self.dim(n) {
            let (l, mid, r) = self.decode(n, idx);
            let rb = |k: usize| self.rbar[mid[k]];
            for (a, c) in self.act(rb(0), l).iter() {
                entries.push((self.encode(*a, &mid[1..], r), idx, c.clone()));
            }
            for i in 0..n - 1 {
                let s = if i % 2 == 0 { f.from_i64(-1) } else { f.one() };
                for (p, c) in self.r.mul[rb(i)][rb(i + 1)].iter() {
                    if let Some(pb) = self.rbar_pos[*p] {
                        let mut m = mid[..i].to_vec();
                        m.push(pb);
                        m.extend_from_slice(&mid[i + 2..]);
                        entries.push((self.encode(l, &m, r), idx, f.mul(&s, c)));
                    }
                }
            }
            let s = if n % 2 == 1 { f.from_i64(-1) } else { f.one() };
            for (a, c) in self.act(rb(n - 1), r).iter() {
                entries.push((self.encode(l, &mid[..n - 1], *a), idx, f.mul(&s, c)));
            }
        }
        SparseMatrix::from_triplets(f, self.dim(n - 1), self.dim(n), entries)
    }

    /// `B_n ⊗_R A` collapses `A ⊗ R̄^n ⊗ A`; the complex above already is the
    /// tensored one, so its homology is `Tor^R_n(A, A)`.
    pub fn homology(&self, top: usize) -> Vec<std::collections::BTreeMap<i64, usize>> {
        let degrees: Vec<Vec<i64>> = (0..=top + 1).map(|n| self.degrees(n)).collect();
        let mut diffs = vec![SparseMatrix::zero(0, self.dim(0))];
        diffs.extend((1..=top + 1).map(|n| self.differential(n)));
        graded_betti(&self.field, &degrees, &diffs, top)
    }
}

pub fn hh_bar(spec: &LogRingSpec, top: usize, budget: &Budget) -> Result<HochschildClasses> {
    let d = log_diagonal_ring(spec, budget)?;
    let bar = BarComplex::new(&d)?;
    Ok(HochschildClasses {
        backend: Backend::Bar,
        tables: bar.homology(top),
        verified: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logring::fixtures::*;

    fn dims(s: &LogRingSpec, top: usize) -> Vec<usize> {
        hh_bar(s, top, &Budget::default()).unwrap().dims()
    }

    #[test]
    fn kummer_bar() {
        assert_eq!(dims(&kummer(ScalarField::Rationals, 2), 3), vec![1, 0, 0, 0]);
        assert_eq!(dims(&kummer(ScalarField::Rationals, 3), 3), vec![1, 0, 0, 0]);
        assert_eq!(dims(&kummer(ScalarField::prime(2).unwrap(), 2), 4), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn dual_numbers_bar() {
        let s = trivial(ScalarField::Rationals, &["x"], &[1], &["x^2"]);
        assert_eq!(dims(&s, 3), vec![2, 1, 1, 1]);
    }

    #[test]
    fn bar_squares_to_zero() {
        let s = trivial(ScalarField::Rationals, &["x"], &[1], &["x^2"]);
        let d = log_diagonal_ring(&s, &Budget::default()).unwrap();
        let bar = BarComplex::new(&d).unwrap();
        for n in 2..4 {
            let f = &bar.field;
            assert!(bar.differential(n - 1).mul(f, &bar.differential(n)).is_zero());
        }
    }

    #[test]
    fn log_point_is_not_finite() {
        let e = hh_bar(&log_point(ScalarField::Rationals), 2, &Budget::default()).unwrap_err();
        assert!(matches!(e, Error::NotFiniteDimensional(_)));
    }
}
