//! Matrices of the cyclic structure on finite-dimensional level rings.

use std::collections::BTreeMap;

use super::levels::{
    degeneracy_coords, extra_degeneracy_coords, face_coords, rotation_coords, LevelData, LevelMap, LevelRing,
};
use crate::error::Result;
use crate::exactlin::{graded_betti, ScalarField, SparseMatrix, SparseVec, Subspace};
use crate::grobner::{Budget, MonomialBasis};
use crate::logring::LogRingSpec;

/// Levels `C_0..C_top` with monomial bases.
#[derive(Clone, Debug)]
pub struct FiniteLevels {
    pub data: LevelData,
    pub levels: Vec<LevelRing>,
    pub bases: Vec<MonomialBasis>,
    pub field: ScalarField,
}

fn sign(field: &ScalarField, odd: bool) -> crate::exactlin::Scalar {
    if odd {
        field.from_i64(-1)
    } else {
        field.one()
    }
}

impl FiniteLevels {
    pub fn build(spec: &LogRingSpec, top: usize, budget: &Budget) -> Result<Self> {
        let data = LevelData::new(spec, budget)?;
        let mut levels = Vec::new();
        let mut bases = Vec::new();
        for n in 0..=top {
            let l = LevelRing::build(&data, n, budget)?;
            bases.push(l.finite_basis()?);
            levels.push(l);
        }
        Ok(FiniteLevels {
            field: data.field(),
            data,
            levels,
            bases,
        })
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.bases[n].len()
    }

    pub fn degrees(&self, n: usize) -> Vec<i64> {
        let r = self.levels[n].ring();
        self.bases[n].monomials.iter().map(|e| r.exp_weight(e)).collect()
    }

    pub fn map(&self, src: usize, dst: usize, f: &[usize]) -> LevelMap {
        LevelMap::coordinate(&self.levels[src], &self.levels[dst], f)
    }

    pub fn matrix(&self, src: usize, dst: usize, f: &[usize]) -> SparseMatrix {
        self.map(src, dst, f)
            .matrix(&self.levels[src], &self.bases[src], &self.levels[dst], &self.bases[dst])
    }

    /// `d_i: C_n → C_{n-1}`.
    pub fn face(&self, n: usize, i: usize) -> SparseMatrix {
        self.matrix(n, n - 1, &face_coords(n, i))
    }

    /// `s_i: C_{n-1} → C_n`.
    pub fn degeneracy(&self, n: usize, i: usize) -> SparseMatrix {
        self.matrix(n - 1, n, &degeneracy_coords(n, i))
    }

    /// Unsigned rotation `τ_n`.
    pub fn rotation(&self, n: usize) -> SparseMatrix {
        self.matrix(n, n, &rotation_coords(n))
    }

    /// Signed cyclic operator `t_n = (-1)^n τ_n`.
    pub fn cyclic(&self, n: usize) -> SparseMatrix {
        self.rotation(n).scale(&self.field, &sign(&self.field, n % 2 == 1))
    }

    /// `s: C_n → C_{n+1}`, `a ↦ 1 ⊗ a`.
    pub fn extra_degeneracy(&self, n: usize) -> SparseMatrix {
        self.matrix(n, n + 1, &extra_degeneracy_coords(n))
    }

    fn alternating_faces(&self, n: usize, last: usize) -> SparseMatrix {
        let mut acc = SparseMatrix::zero(self.dim(n - 1), self.dim(n));
        for i in 0..=last {
            acc = acc.axpy(&self.field, &sign(&self.field, i % 2 == 1), &self.face(n, i));
        }
        acc
    }

    /// Hochschild boundary `b = Σ_{i≤n} (-1)^i d_i`.
    pub fn b(&self, n: usize) -> SparseMatrix {
        self.alternating_faces(n, n)
    }

    /// `b' = Σ_{i<n} (-1)^i d_i`.
    pub fn b_prime(&self, n: usize) -> SparseMatrix {
        self.alternating_faces(n, n - 1)
    }

    /// Norm `N = Σ_{i≤n} t^i`.
    pub fn norm(&self, n: usize) -> SparseMatrix {
        let t = self.cyclic(n);
        let mut power = SparseMatrix::identity(self.dim(n));
        let mut acc = power.clone();
        for _ in 0..n {
            power = t.mul(&self.field, &power);
            acc = acc.add(&self.field, &power);
        }
        acc
    }

    /// Connes' operator `(1 - t) s N: C_n → C_{n+1}`.
    pub fn connes(&self, n: usize) -> SparseMatrix {
        let f = &self.field;
        let sn = self.extra_degeneracy(n).mul(f, &self.norm(n));
        sn.sub(f, &self.cyclic(n + 1).mul(f, &sn))
    }

    /// Cyclic and simplicial identities as matrix equations up to `top`.
    pub fn check_cyclic_identities(&self) -> bool {
        let f = &self.field;
        for n in 1..=self.top() {
            let tau = self.rotation(n);
            let mut p = SparseMatrix::identity(self.dim(n));
            for _ in 0..=n {
                p = tau.mul(f, &p);
            }
            if p != SparseMatrix::identity(self.dim(n)) {
                return false;
            }
            let tau_prev = self.rotation(n - 1);
            for i in 1..=n {
                if self.face(n, i).mul(f, &tau) != tau_prev.mul(f, &self.face(n, i - 1)) {
                    return false;
                }
            }
            if self.face(n, 0).mul(f, &tau) != self.face(n, n) {
                return false;
            }
            if n >= 2 && !self.b(n - 1).mul(f, &self.b(n)).is_zero() {
                return false;
            }
        }
        for n in 1..self.top() {
            // s_i τ = τ s_{i-1} and s_0 τ = τ² s_n, as maps C_n → C_{n+1}
            let tau = self.rotation(n);
            let tau_up = self.rotation(n + 1);
            for i in 1..=n {
                if self.degeneracy(n + 1, i).mul(f, &tau) != tau_up.mul(f, &self.degeneracy(n + 1, i - 1)) {
                    return false;
                }
            }
            let lhs = self.degeneracy(n + 1, 0).mul(f, &tau);
            let rhs = tau_up.mul(f, &tau_up).mul(f, &self.degeneracy(n + 1, n));
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    pub fn normalized(&self) -> NormalizedComplex {
        NormalizedComplex::new(self)
    }

    /// `HH_n` for `n < top` from the unnormalized complex.
    pub fn homology(&self) -> Vec<BTreeMap<i64, usize>> {
        let degrees: Vec<Vec<i64>> = (0..=self.top()).map(|n| self.degrees(n)).collect();
        let mut diffs = vec![SparseMatrix::zero(0, self.dim(0))];
        diffs.extend((1..=self.top()).map(|n| self.b(n)));
        graded_betti(&self.field, &degrees, &diffs, self.top() - 1)
    }
}

/// `C̄_n = C_n / (degenerate elements)` with induced operators.
#[derive(Clone, Debug)]
pub struct NormalizedComplex {
    pub field: ScalarField,
    pub degenerate: Vec<Subspace>,
    pub proj: Vec<SparseMatrix>,
    pub lift: Vec<SparseMatrix>,
    /// `b̄_n: C̄_n → C̄_{n-1}`; entry 0 is the zero map.
    pub b: Vec<SparseMatrix>,
    pub degrees: Vec<Vec<i64>>,
}

impl NormalizedComplex {
    fn new(fl: &FiniteLevels) -> Self {
        let f = fl.field;
        let mut degenerate = Vec::new();
        let mut proj = Vec::new();
        let mut lift = Vec::new();
        let mut degrees = Vec::new();
        for n in 0..=fl.top() {
            let mut span: Vec<SparseVec> = Vec::new();
            for i in 0..n {
                span.extend(fl.degeneracy(n, i).columns());
            }
            let sub = Subspace::spanned_by(&f, fl.dim(n), &span);
            let l = sub.lift_matrix(&f);
            let full = fl.degrees(n);
            let degs = (0..sub.codim())
                .map(|k| full[sub.lift(&SparseVec::unit(k)).first_index().unwrap()])
                .collect();
            proj.push(sub.projection_matrix(&f));
            lift.push(l);
            degenerate.push(sub);
            degrees.push(degs);
        }
        let mut b = vec![SparseMatrix::zero(0, proj[0].rows())];
        for n in 1..=fl.top() {
            b.push(proj[n - 1].mul(&f, &fl.b(n)).mul(&f, &lift[n]));
        }
        NormalizedComplex {
            field: f,
            degenerate,
            proj,
            lift,
            b,
            degrees,
        }
    }

    pub fn top(&self) -> usize {
        self.proj.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.proj[n].rows()
    }

    /// Induced operator `P_dst ∘ m ∘ L_src`.
    pub fn induced(&self, m: &SparseMatrix, src: usize, dst: usize) -> SparseMatrix {
        self.proj[dst].mul(&self.field, m).mul(&self.field, &self.lift[src])
    }

    /// `HH_n` for `n < top`.
    pub fn homology(&self) -> Vec<BTreeMap<i64, usize>> {
        graded_betti(&self.field, &self.degrees, &self.b, self.top() - 1)
    }

    pub fn homology_at(&self, n: usize) -> Result<crate::exactlin::Homology> {
        let incoming = if n < self.top() {
            self.b[n + 1].clone()
        } else {
            SparseMatrix::zero(self.dim(n), 0)
        };
        crate::exactlin::complex_homology(&self.field, &incoming, &self.b[n])
    }
}

/// `B̄: C̄_n → C̄_{n+1}` for `n < top`.
pub fn connes_b(fl: &FiniteLevels, norm: &NormalizedComplex) -> Vec<SparseMatrix> {
    (0..fl.top()).map(|n| norm.induced(&fl.connes(n), n, n + 1)).collect()
}

/// `B² = 0` and `bB + Bb = 0` on the normalized complex.
pub fn check_connes(norm: &NormalizedComplex, bs: &[SparseMatrix]) -> bool {
    let f = &norm.field;
    for n in 0..bs.len() {
        if n + 1 < bs.len() && !bs[n + 1].mul(f, &bs[n]).is_zero() {
            return false;
        }
        // b_{n+1} B_n + B_{n-1} b_n on C̄_n
        let mut acc = norm.b[n + 1].mul(f, &bs[n]);
        if n > 0 {
            acc = acc.add(f, &bs[n - 1].mul(f, &norm.b[n]));
        }
        if !acc.is_zero() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logring::fixtures::*;

    fn fl(s: &LogRingSpec, top: usize) -> FiniteLevels {
        FiniteLevels::build(s, top, &Budget::default()).unwrap()
    }

    #[test]
    fn dual_numbers_hochschild() {
        let l = fl(&trivial(ScalarField::Rationals, &["x"], &[1], &["x^2"]), 4);
        assert!(l.check_cyclic_identities());
        let total = |t: &Vec<BTreeMap<i64, usize>>| t.iter().map(|m| m.values().sum()).collect::<Vec<usize>>();
        assert_eq!(total(&l.homology()), vec![2, 1, 1, 1]);
        let norm = l.normalized();
        assert_eq!(total(&norm.homology()), vec![2, 1, 1, 1]);
        let bs = connes_b(&l, &norm);
        assert!(check_connes(&norm, &bs));
        assert!(!bs[0].is_zero());
    }

    #[test]
    fn kummer_levels_cyclic() {
        let l = fl(&kummer(ScalarField::prime(2).unwrap(), 2), 4);
        assert!(l.check_cyclic_identities());
        let norm = l.normalized();
        let dims: Vec<usize> = norm.homology().iter().map(|m| m.values().sum()).collect();
        assert_eq!(dims, vec![1, 1, 1, 1]);
        assert!(check_connes(&norm, &connes_b(&l, &norm)));
    }

    #[test]
    fn kummer_over_q_levels() {
        let l = fl(&kummer(ScalarField::Rationals, 2), 4);
        let dims: Vec<usize> = l.homology().iter().map(|m| m.values().sum()).collect();
        assert_eq!(dims, vec![1, 0, 0, 0]);
    }
}
