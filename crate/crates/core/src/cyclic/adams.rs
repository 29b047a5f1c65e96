//! Adams operations `ψ^k` as signed sums of shuffle permutations.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::exactlin::{rank_of_vectors, Homology, SparseMatrix};
use crate::grobner::Budget;
use crate::hochschild::{permutation_coords, FiniteLevels, NormalizedComplex};
use crate::logring::LogRingSpec;

/// Coefficient of each permutation of `1..=n` in `ψ^k`: the sum over weak
/// compositions `p_1 + ⋯ + p_k = n` of the signed `(p_1, …, p_k)`-shuffles.
/// A permutation is stored by the images of `1..=n`.
pub fn shuffle_coefficients(k: usize, n: usize) -> BTreeMap<Vec<usize>, i64> {
    let mut out: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
    // each position is assigned the segment it comes from; within a
    // segment the order is preserved
    let total = k.pow(n as u32);
    for code in 0..total {
        let mut label = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            label.push(c % k);
            c /= k;
        }
        // positions (1-based) receiving segment s, in increasing order
        let mut perm = vec![0; n];
        let mut next = 0;
        for s in 0..k {
            for (pos, &l) in label.iter().enumerate() {
                if l == s {
                    perm[next] = pos + 1;
                    next += 1;
                }
            }
        }
        let inv = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| perm[a] > perm[b]).count();
        *out.entry(perm).or_default() += if inv % 2 == 0 { 1 } else { -1 };
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `ψ^k` on the normalized level complex and on its homology.
pub struct AdamsOperators<'a> {
    pub levels: &'a FiniteLevels,
    pub normalized: NormalizedComplex,
    homology: HashMap<usize, Homology>,
    perm_cache: std::sync::Mutex<HashMap<Vec<usize>, SparseMatrix>>,
}

impl<'a> AdamsOperators<'a> {
    pub fn new(levels: &'a FiniteLevels) -> Result<Self> {
        let p = levels.field.characteristic();
        if p != 0 {
            return Err(Error::WrongCharacteristic(p));
        }
        let normalized = levels.normalized();
        let mut homology = HashMap::new();
        for n in 0..levels.top() {
            homology.insert(n, normalized.homology_at(n)?);
        }
        Ok(AdamsOperators {
            levels,
            normalized,
            homology,
            perm_cache: Default::default(),
        })
    }

    fn permutation(&self, perm: &[usize]) -> SparseMatrix {
        let mut cache = self.perm_cache.lock().expect("cache lock");
        cache
            .entry(perm.to_vec())
            .or_insert_with(|| {
                let n = perm.len();
                self.levels.matrix(n, n, &permutation_coords(perm))
            })
            .clone()
    }

    /// `ψ^k` on `C_n`.
    pub fn chain(&self, k: usize, n: usize) -> SparseMatrix {
        let f = &self.levels.field;
        let mut acc = SparseMatrix::zero(self.levels.dim(n), self.levels.dim(n));
        for (perm, c) in shuffle_coefficients(k, n) {
            acc = acc.axpy(f, &f.from_i64(c), &self.permutation(&perm));
        }
        acc
    }

    /// `ψ^k` on `C̄_n`.
    pub fn normalized_chain(&self, k: usize, n: usize) -> SparseMatrix {
        self.normalized.induced(&self.chain(k, n), n, n)
    }

    /// Whether `ψ^k` commutes with `b̄` on `C̄_n → C̄_{n-1}`.
    pub fn commutes_with_b(&self, k: usize, n: usize) -> bool {
        let f = &self.levels.field;
        let b = &self.normalized.b[n];
        b.mul(f, &self.normalized_chain(k, n)) == self.normalized_chain(k, n - 1).mul(f, b)
    }

    pub fn homology(&self, n: usize) -> Result<&Homology> {
        self.homology
            .get(&n)
            .ok_or_else(|| Error::CheckFailed(format!("HH_{n} needs level {}", n + 1)))
    }

    /// `ψ^k` on `HH_n` in the basis of homology representatives.
    pub fn on_homology(&self, k: usize, n: usize) -> Result<SparseMatrix> {
        let f = &self.levels.field;
        let h = self.homology(n)?;
        let psi = self.normalized_chain(k, n);
        let cols = h
            .basis
            .iter()
            .map(|z| {
                h.classify(f, &psi.apply(f, z))
                    .ok_or_else(|| Error::CheckFailed("ψ does not preserve cycles".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SparseMatrix::from_columns(f, h.dim, &cols))
    }

    pub fn decompose(&self, k: usize, n: usize) -> Result<AdamsDecomposition> {
        let f = &self.levels.field;
        let psi = self.on_homology(k, n)?;
        let dim = psi.rows();
        let id = SparseMatrix::identity(dim);
        let values: Vec<i64> = (0..=n as u32).map(|i| (k as i64).pow(i)).collect();
        let shifted: Vec<SparseMatrix> = values.iter().map(|&v| psi.sub(f, &id.scale(f, &f.from_i64(v)))).collect();
        let mut minimal = id.clone();
        for s in &shifted {
            minimal = s.mul(f, &minimal);
        }
        let mut projectors = Vec::new();
        for (i, &vi) in values.iter().enumerate() {
            let mut p = id.clone();
            for (j, &vj) in values.iter().enumerate() {
                if i != j {
                    let c = f.inv(&f.from_i64(vi - vj));
                    p = shifted[j].mul(f, &p).scale(f, &c);
                }
            }
            projectors.push(p);
        }
        let mut total = SparseMatrix::zero(dim, dim);
        let mut orthogonal = true;
        for (i, p) in projectors.iter().enumerate() {
            total = total.add(f, p);
            for (j, q) in projectors.iter().enumerate() {
                let pq = p.mul(f, q);
                orthogonal &= if i == j { pq == *p } else { pq.is_zero() };
            }
        }
        let eigen = projectors
            .iter()
            .enumerate()
            .map(|(i, p)| (i as u32, rank_of_vectors(f, &p.columns())))
            .collect();
        Ok(AdamsDecomposition {
            k,
            n,
            operator: psi,
            eigen,
            complete: minimal.is_zero() && total == id && orthogonal,
        })
    }
}

/// `HH_n = ⊕_i HH_n^{(i)}` where `ψ^k` acts on `HH_n^{(i)}` by `k^i`.
#[derive(Clone, Debug)]
pub struct AdamsDecomposition {
    pub k: usize,
    pub n: usize,
    pub operator: SparseMatrix,
    /// `i ↦ dim HH_n^{(i)}`.
    pub eigen: BTreeMap<u32, usize>,
    /// Projectors are idempotent, orthogonal and sum to the identity, and
    /// `Π_i (ψ − k^i) = 0`.
    pub complete: bool,
}

impl AdamsDecomposition {
    pub fn total(&self) -> usize {
        self.eigen.values().sum()
    }
}

pub fn adams(spec: &LogRingSpec, k: usize, n: usize, budget: &Budget) -> Result<AdamsDecomposition> {
    let levels = FiniteLevels::build(spec, n + 1, budget)?;
    let ops = AdamsOperators::new(&levels)?;
    for m in 1..=n + 1 {
        if !ops.commutes_with_b(k, m) {
            return Err(Error::CheckFailed(format!("ψ^{k} does not commute with b at level {m}")));
        }
    }
    ops.decompose(k, n)
}

#[cfg(test)]
mod tests {
    use super::super::tests::*;
    use super::*;
    use crate::exactlin::ScalarField;
    use crate::logring::fixtures::*;

    #[test]
    fn coefficient_counts() {
        // Σ over permutations of the coefficients counts signed k-shuffles
        let c = shuffle_coefficients(2, 1);
        assert_eq!(c.get(&vec![1]), Some(&2));
        let c = shuffle_coefficients(3, 2);
        assert_eq!(c.get(&vec![1, 2]), Some(&6));
        assert_eq!(c.get(&vec![2, 1]), Some(&-3));
    }

    #[test]
    fn dual_numbers_adams() {
        let levels = FiniteLevels::build(&dual(), 4, &Budget::default()).unwrap();
        let ops = AdamsOperators::new(&levels).unwrap();
        let f = levels.field;
        for n in 1..=4 {
            assert!(ops.commutes_with_b(2, n));
        }
        for n in 0..=3 {
            let p2 = ops.on_homology(2, n).unwrap();
            let p3 = ops.on_homology(3, n).unwrap();
            let p6 = ops.on_homology(6, n).unwrap();
            assert_eq!(p2.mul(&f, &p3), p6);
            let d = ops.decompose(2, n).unwrap();
            assert!(d.complete);
            assert_eq!(d.total(), ops.homology(n).unwrap().dim);
        }
    }

    #[test]
    fn dx_has_eigenvalue_two() {
        let levels = FiniteLevels::build(&dual(), 2, &Budget::default()).unwrap();
        let ops = AdamsOperators::new(&levels).unwrap();
        let f = levels.field;
        let l = &levels.levels[1];
        let p = crate::grobner::parse_poly(l.ring(), "x_1").unwrap();
        let dx = levels.bases[1].coords(&f, &p);
        let bar = ops.normalized.proj[1].apply(&f, &dx);
        let image = ops.normalized_chain(2, 1).apply(&f, &bar);
        assert_eq!(image, bar.scale(&f, &f.from_i64(2)));
    }

    #[test]
    fn shuffle_products_are_weight_two() {
        let levels = FiniteLevels::build(&dual(), 2, &Budget::default()).unwrap();
        let ops = AdamsOperators::new(&levels).unwrap();
        let f = levels.field;
        let psi = ops.chain(3, 2);
        for i in 0..levels.dim(1) {
            for j in 0..levels.dim(1) {
                let a = crate::exactlin::SparseVec::unit(i);
                let b = crate::exactlin::SparseVec::unit(j);
                let ab = crate::hochschild::shuffle_product(&levels, 1, &a, 1, &b).unwrap();
                assert_eq!(psi.apply(&f, &ab), ab.scale(&f, &f.from_i64(9)));
            }
        }
    }

    #[test]
    fn needs_characteristic_zero() {
        let s = kummer(ScalarField::prime(2).unwrap(), 2);
        assert!(matches!(adams(&s, 2, 1, &Budget::default()), Err(Error::WrongCharacteristic(2))));
    }

    #[test]
    fn kummer_rationals() {
        let d = adams(&kummer(ScalarField::Rationals, 2), 2, 1, &Budget::default()).unwrap();
        assert_eq!(d.total(), 0);
    }
}
