//! Cyclic homology: the cyclic bicomplex, the SBI sequence, the de Rham
//! route in characteristic zero, and Adams operations.

use crate::error::{Error, Result};
use crate::exactlin::{ScalarField, SparseMatrix};
use crate::grobner::Budget;
use crate::hochschild::FiniteLevels;
use crate::logring::LogRingSpec;

mod adams;
mod bicomplex;
mod derham;
mod sbi;

pub use adams::{adams, AdamsDecomposition, AdamsOperators};
pub use bicomplex::{hc, CyclicBicomplex, CyclicHomology};
pub use derham::hc_de_rham;
pub use sbi::{sbi_sequence, SbiMaps, SbiSpot};

/// Levels `C_0..C_top` with `b`, `b'`, the signed cyclic operator and the norm.
#[derive(Clone, Debug)]
pub struct CyclicModule {
    pub levels: FiniteLevels,
    pub b: Vec<SparseMatrix>,
    pub b_prime: Vec<SparseMatrix>,
    pub t: Vec<SparseMatrix>,
    pub norm: Vec<SparseMatrix>,
}

impl CyclicModule {
    pub fn field(&self) -> ScalarField {
        self.levels.field
    }

    pub fn top(&self) -> usize {
        self.levels.top()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.levels.dim(n)
    }

    /// `t^{n+1} = 1`, `b² = b'² = 0`, `(1 − t) b' = b (1 − t)`, `b' N = N b`.
    pub fn check(&self) -> bool {
        let f = &self.field();
        if !self.levels.check_cyclic_identities() {
            return false;
        }
        for n in 0..=self.top() {
            let mut p = SparseMatrix::identity(self.dim(n));
            for _ in 0..=n {
                p = self.t[n].mul(f, &p);
            }
            if p != SparseMatrix::identity(self.dim(n)) {
                return false;
            }
        }
        for n in 1..=self.top() {
            if n >= 2
                && (!self.b[n - 1].mul(f, &self.b[n]).is_zero()
                    || !self.b_prime[n - 1].mul(f, &self.b_prime[n]).is_zero())
            {
                return false;
            }
            let one_minus = |k: usize| SparseMatrix::identity(self.dim(k)).sub(f, &self.t[k]);
            if one_minus(n - 1).mul(f, &self.b_prime[n]) != self.b[n].mul(f, &one_minus(n)) {
                return false;
            }
            if self.b_prime[n].mul(f, &self.norm[n]) != self.norm[n - 1].mul(f, &self.b[n]) {
                return false;
            }
        }
        true
    }
}

pub fn build_cyclic(spec: &LogRingSpec, top: usize, budget: &Budget) -> Result<CyclicModule> {
    let levels = FiniteLevels::build(spec, top, budget)?;
    let zero = |n: usize| SparseMatrix::zero(0, levels.dim(n));
    let mut b = vec![zero(0)];
    let mut b_prime = vec![zero(0)];
    for n in 1..=top {
        b.push(levels.b(n));
        b_prime.push(levels.b_prime(n));
    }
    let t = (0..=top).map(|n| levels.cyclic(n)).collect();
    let norm = (0..=top).map(|n| levels.norm(n)).collect();
    let cm = CyclicModule {
        levels,
        b,
        b_prime,
        t,
        norm,
    };
    if !cm.check() {
        return Err(Error::CheckFailed("cyclic identities on the level complex".into()));
    }
    Ok(cm)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::logring::fixtures::*;

    pub fn point() -> LogRingSpec {
        trivial(ScalarField::Rationals, &[], &[], &[])
    }

    pub fn two_points() -> LogRingSpec {
        trivial(ScalarField::Rationals, &["e"], &[0], &["e^2 - e"])
    }

    pub fn dual() -> LogRingSpec {
        trivial(ScalarField::Rationals, &["x"], &[1], &["x^2"])
    }

    #[test]
    fn point_levels_are_lines() {
        let c = build_cyclic(&point(), 4, &Budget::default()).unwrap();
        for n in 0..=4 {
            assert_eq!(c.dim(n), 1);
            assert_eq!(c.levels.rotation(n), SparseMatrix::identity(1));
        }
    }

    #[test]
    fn two_points_levels() {
        let c = build_cyclic(&two_points(), 3, &Budget::default()).unwrap();
        let dims: Vec<usize> = (0..=3).map(|n| c.dim(n)).collect();
        assert_eq!(dims, vec![2, 4, 8, 16]);
    }

    #[test]
    fn kummer_rotation_order() {
        let c = build_cyclic(&kummer(ScalarField::Rationals, 2), 2, &Budget::default()).unwrap();
        let f = c.field();
        let tau = c.levels.rotation(2);
        assert_eq!(tau.mul(&f, &tau).mul(&f, &tau), SparseMatrix::identity(c.dim(2)));
    }
}
