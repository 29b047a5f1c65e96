//! Level rings `C^n = Γ(X ×_Θ ⋯ ×_Θ X)` and the maps between them.

use std::sync::Arc;

use crate::error::Result;
use crate::exactlin::{ScalarField, SparseMatrix};
use crate::grobner::{Budget, Exp, MonomialBasis, MonomialOrder, Poly, PolyRing, QuotientRing};
use crate::logring::LogRingSpec;
use crate::monoidlat::FinAbGroup;

/// `A^{⊗(n+1)}` with one unit per generator of `G` in each of the `n` gaps,
/// modulo the chart twists `α(p)_j = u_j^{[p]} α(p)_{j-1}`.
#[derive(Clone, Debug)]
pub struct LevelRing {
    pub n: usize,
    pub quotient: Arc<QuotientRing>,
    per_copy: usize,
    orders: Vec<Option<u64>>,
    /// Partner variable of each free unit, indexed `[gap - 1][g]`.
    partners: Vec<Vec<Option<usize>>>,
}

/// Everything about a spec that level rings need, computed once.
#[derive(Clone, Debug)]
pub struct LevelData {
    pub spec: LogRingSpec,
    pub group: FinAbGroup,
    pub a: Arc<QuotientRing>,
}

impl LevelData {
    pub fn new(spec: &LogRingSpec, budget: &Budget) -> Result<Self> {
        spec.check(budget)?;
        Ok(LevelData {
            spec: spec.clone(),
            group: spec.group()?,
            a: spec.total_ring.quotient(budget)?,
        })
    }

    pub fn field(&self) -> ScalarField {
        self.spec.field
    }

    pub fn ngens(&self) -> usize {
        self.group.ngens()
    }
}

impl LevelRing {
    pub fn build(data: &LevelData, n: usize, budget: &Budget) -> Result<LevelRing> {
        let ar = &data.a.ring;
        let per_copy = ar.nvars();
        let ng = data.ngens();
        let orders: Vec<Option<u64>> = (0..ng).map(|g| data.group.order(g)).collect();
        let mut names = Vec::new();
        let mut weights = Vec::new();
        for j in 0..=n {
            for i in 0..per_copy {
                names.push(format!("{}_{}", ar.name(i), j));
                weights.push(ar.weights()[i]);
            }
        }
        let mut inverted = Vec::new();
        for gap in 1..=n {
            for (g, o) in orders.iter().enumerate() {
                let name = format!("u{}_{}", g + 1, gap);
                if o.is_none() {
                    inverted.push(name.clone());
                }
                names.push(name);
                weights.push(0);
            }
        }
        let ring = PolyRing::with_options(data.field(), names, &inverted, MonomialOrder::DegRevLex, Some(weights))?;
        let mut partners = vec![vec![None; ng]; n];
        for &(v, w) in ring.inverse_pairs() {
            let k = v - (n + 1) * per_copy;
            partners[k / ng][k % ng] = Some(w);
        }
        let mut level = LevelRing {
            n,
            quotient: QuotientRing::new(ring.clone(), Vec::new(), budget)?,
            per_copy,
            orders,
            partners,
        };
        let rels = level.relations(data);
        level.quotient = QuotientRing::new(ring, rels, budget)?;
        Ok(level)
    }

    fn relations(&self, data: &LevelData) -> Vec<Poly> {
        let r = self.ring();
        let spec = &data.spec;
        let ar = &data.a.ring;
        let mut a_rels = spec.total_ring.relations.clone();
        a_rels.extend(ar.pair_relations());
        let mut out = Vec::new();
        for j in 0..=self.n {
            let emb = self.copy_images(j);
            out.extend(a_rels.iter().map(|f| ar.substitute(f, r, &emb)));
            if j > 0 {
                let prev = self.copy_images(j - 1);
                for b in &spec.base_map {
                    out.push(r.sub(&ar.substitute(b, r, &emb), &ar.substitute(b, r, &prev)));
                }
            }
        }
        for gap in 1..=self.n {
            for (g, o) in self.orders.iter().enumerate() {
                if let Some(d) = o {
                    out.push(r.sub(&r.pow(&r.var(self.unit_var(gap, g)), *d as u32), &r.one()));
                }
            }
            let before = self.copy_images(gap - 1);
            let after = self.copy_images(gap);
            for (p, chart) in spec.total_chart.iter().enumerate() {
                let class: Vec<i64> = data.group.generator_images[p]
                    .iter()
                    .map(|c| i64::try_from(c).expect("class fits in i64"))
                    .collect();
                let twist = self.unit_monomial(gap, &class);
                let lhs = r.mul(&ar.substitute(chart, r, &before), &twist);
                out.push(r.sub(&lhs, &ar.substitute(chart, r, &after)));
            }
        }
        out.retain(|p| !p.is_zero());
        out
    }

    pub fn ring(&self) -> &PolyRing {
        &self.quotient.ring
    }

    pub fn copy_var(&self, j: usize, i: usize) -> usize {
        j * self.per_copy + i
    }

    pub fn unit_var(&self, gap: usize, g: usize) -> usize {
        (self.n + 1) * self.per_copy + (gap - 1) * self.orders.len() + g
    }

    pub fn ngens(&self) -> usize {
        self.orders.len()
    }

    /// Images of the variables of `A` in copy `j`.
    pub fn copy_images(&self, j: usize) -> Vec<Poly> {
        (0..self.per_copy).map(|i| self.ring().var(self.copy_var(j, i))).collect()
    }

    /// `u_{g,gap}^e`, with negative powers through the partner or the order.
    pub fn unit_power(&self, gap: usize, g: usize, e: i64) -> Poly {
        let r = self.ring();
        match self.orders[g] {
            Some(d) => r.pow(&r.var(self.unit_var(gap, g)), e.rem_euclid(d as i64) as u32),
            None if e >= 0 => r.pow(&r.var(self.unit_var(gap, g)), e as u32),
            None => r.pow(&r.var(self.partners[gap - 1][g].unwrap()), (-e) as u32),
        }
    }

    /// `Π_g u_{g,gap}^{c_g}`.
    pub fn unit_monomial(&self, gap: usize, class: &[i64]) -> Poly {
        let r = self.ring();
        class
            .iter()
            .enumerate()
            .fold(r.one(), |acc, (g, &c)| r.mul(&acc, &self.unit_power(gap, g, c)))
    }

    /// `V_a^{-1} V_b` restricted to generator `g`, where `V_a = u_1 ⋯ u_a`.
    fn transport(&self, g: usize, a: usize, b: usize) -> Poly {
        let r = self.ring();
        let (lo, hi, sign) = if a <= b { (a, b, 1) } else { (b, a, -1) };
        (lo + 1..=hi).fold(r.one(), |acc, gap| r.mul(&acc, &self.unit_power(gap, g, sign)))
    }

    /// A `k`-basis when `C^n` is finite-dimensional.
    pub fn finite_basis(&self) -> Result<MonomialBasis> {
        Ok(MonomialBasis::new(self.quotient.finite_basis()?))
    }
}

/// A ring map between level rings, stored by variable images.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelMap {
    pub images: Vec<Poly>,
}

impl LevelMap {
    /// The map induced by `f: {0..src.n} → {0..dst.n}` on coordinates: copy
    /// `j` goes to copy `f(j)` and the gap unit `u_j` to `V_{f(j-1)}^{-1} V_{f(j)}`.
    pub fn coordinate(src: &LevelRing, dst: &LevelRing, f: &[usize]) -> LevelMap {
        assert_eq!(f.len(), src.n + 1);
        let mut images = vec![Poly::zero(); src.ring().nvars()];
        for (j, &fj) in f.iter().enumerate() {
            for i in 0..src.per_copy {
                images[src.copy_var(j, i)] = dst.ring().var(dst.copy_var(fj, i));
            }
        }
        for gap in 1..=src.n {
            for g in 0..src.ngens() {
                let img = dst.transport(g, f[gap - 1], f[gap]);
                images[src.unit_var(gap, g)] = img;
                if let Some(p) = src.partners[gap - 1][g] {
                    images[p] = dst.transport(g, f[gap], f[gap - 1]);
                }
            }
        }
        LevelMap { images }
    }

    pub fn apply(&self, src: &LevelRing, dst: &LevelRing, p: &Poly) -> Poly {
        dst.quotient.nf(&src.ring().substitute(p, dst.ring(), &self.images))
    }

    /// `then ∘ self`.
    pub fn then(&self, mid: &LevelRing, dst: &LevelRing, then: &LevelMap) -> LevelMap {
        LevelMap {
            images: self.images.iter().map(|p| then.apply(mid, dst, p)).collect(),
        }
    }

    /// Equality as ring maps: images agree in the target.
    pub fn same_as(&self, other: &LevelMap, dst: &LevelRing) -> bool {
        self.images
            .iter()
            .zip(&other.images)
            .all(|(a, b)| dst.quotient.is_zero(&dst.ring().sub(a, b)))
    }

    /// Every defining relation of the source maps to zero.
    pub fn is_well_defined(&self, src: &LevelRing, dst: &LevelRing) -> bool {
        src.quotient
            .gb()
            .iter()
            .all(|g| self.apply(src, dst, g).is_zero())
    }

    /// Matrix in monomial bases of finite-dimensional levels.
    pub fn matrix(
        &self,
        src: &LevelRing,
        src_basis: &MonomialBasis,
        dst: &LevelRing,
        dst_basis: &MonomialBasis,
    ) -> SparseMatrix {
        let field = src.ring().field;
        let cols: Vec<_> = src_basis
            .monomials
            .iter()
            .map(|e| dst_basis.coords(&field, &self.apply_monomial(src, dst, e)))
            .collect();
        SparseMatrix::from_columns(&field, dst_basis.len(), &cols)
    }

    fn apply_monomial(&self, src: &LevelRing, dst: &LevelRing, e: &Exp) -> Poly {
        let r = dst.ring();
        let mut acc = r.one();
        for (v, &k) in e.iter().enumerate() {
            if k > 0 {
                acc = dst.quotient.nf(&r.mul(&acc, &r.pow(&self.images[v], k)));
            }
        }
        let _ = src;
        acc
    }
}

/// Face `d_i: C^n → C^{n-1}`.
pub fn face_coords(n: usize, i: usize) -> Vec<usize> {
    if i == n {
        (0..=n).map(|j| if j == n { 0 } else { j }).collect()
    } else {
        (0..=n).map(|j| if j <= i { j } else { j - 1 }).collect()
    }
}

/// Degeneracy `s_i: C^{n-1} → C^n` (`0 ≤ i < n`), inserting a unit factor
/// after position `i`.
pub fn degeneracy_coords(n: usize, i: usize) -> Vec<usize> {
    (0..n).map(|j| if j <= i { j } else { j + 1 }).collect()
}

/// Cyclic rotation `τ: C^n → C^n`, `a_0 ⊗ ⋯ ⊗ a_n ↦ a_n ⊗ a_0 ⊗ ⋯`.
pub fn rotation_coords(n: usize) -> Vec<usize> {
    (0..=n).map(|j| (j + 1) % (n + 1)).collect()
}

/// Extra degeneracy `C^n → C^{n+1}`, `a ↦ 1 ⊗ a`.
pub fn extra_degeneracy_coords(n: usize) -> Vec<usize> {
    (0..=n).map(|j| j + 1).collect()
}

/// Permutation of the positions `1..=n` (`perm[k-1]` is the image of `k`).
pub fn permutation_coords(perm: &[usize]) -> Vec<usize> {
    std::iter::once(0).chain(perm.iter().copied()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logring::fixtures::*;

    fn data(s: &LogRingSpec) -> LevelData {
        LevelData::new(s, &Budget::default()).unwrap()
    }

    fn levels(d: &LevelData, top: usize) -> Vec<LevelRing> {
        (0..=top).map(|n| LevelRing::build(d, n, &Budget::default()).unwrap()).collect()
    }

    #[test]
    fn kummer_levels_have_dimension_two_to_the_n() {
        let d = data(&kummer(ScalarField::Rationals, 2));
        for (n, l) in levels(&d, 3).iter().enumerate() {
            assert_eq!(l.finite_basis().unwrap().len(), 1 << n);
        }
    }

    #[test]
    fn dual_numbers_levels() {
        let d = data(&trivial(ScalarField::Rationals, &["x"], &[1], &["x^2"]));
        for (n, l) in levels(&d, 3).iter().enumerate() {
            assert_eq!(l.finite_basis().unwrap().len(), 1 << (n + 1));
        }
    }

    fn check_simplicial(s: &LogRingSpec, top: usize) {
        let d = data(s);
        let ls = levels(&d, top);
        for n in 1..=top {
            for i in 0..=n {
                let f = LevelMap::coordinate(&ls[n], &ls[n - 1], &face_coords(n, i));
                assert!(f.is_well_defined(&ls[n], &ls[n - 1]), "face {i} at level {n}");
            }
            let t = LevelMap::coordinate(&ls[n], &ls[n], &rotation_coords(n));
            assert!(t.is_well_defined(&ls[n], &ls[n]));
            let mut acc = t.clone();
            for _ in 0..n {
                acc = acc.then(&ls[n], &ls[n], &t);
            }
            let id = LevelMap::coordinate(&ls[n], &ls[n], &(0..=n).collect::<Vec<_>>());
            assert!(acc.same_as(&id, &ls[n]), "τ^(n+1) at level {n}");
        }
        for n in 2..=top {
            for j in 1..=n {
                for i in 0..j {
                    // d_i d_j = d_{j-1} d_i
                    let dj = LevelMap::coordinate(&ls[n], &ls[n - 1], &face_coords(n, j));
                    let di = LevelMap::coordinate(&ls[n - 1], &ls[n - 2], &face_coords(n - 1, i));
                    let di2 = LevelMap::coordinate(&ls[n], &ls[n - 1], &face_coords(n, i));
                    let dj1 = LevelMap::coordinate(&ls[n - 1], &ls[n - 2], &face_coords(n - 1, j - 1));
                    let lhs = dj.then(&ls[n - 1], &ls[n - 2], &di);
                    let rhs = di2.then(&ls[n - 1], &ls[n - 2], &dj1);
                    assert!(lhs.same_as(&rhs, &ls[n - 2]), "d{i} d{j} at level {n}");
                }
            }
        }
    }

    #[test]
    fn node_simplicial_identities() {
        check_simplicial(&node(ScalarField::Rationals), 3);
    }

    #[test]
    fn kummer_simplicial_identities() {
        check_simplicial(&kummer(ScalarField::prime(2).unwrap(), 2), 3);
    }

    #[test]
    fn log_point_diagonal() {
        let d = data(&log_point(ScalarField::Rationals));
        let l = LevelRing::build(&d, 1, &Budget::default()).unwrap();
        assert_eq!(l.ring().names(), &["u1_1".to_string(), "u1_1_inv".to_string()]);
        assert!(!l.quotient.is_zero_ring());
    }
}
