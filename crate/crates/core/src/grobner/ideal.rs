use std::collections::HashMap;
use std::sync::Arc;

use super::buchberger::{Budget, ModuleGb, ModuleOrder};
use super::poly::{divides, Exp, Poly, PolyRing};
use crate::error::{Error, Result};
use crate::exactlin::{SparseVec, ScalarField};

#[derive(Clone, Debug)]
pub struct Ideal {
    pub ring: PolyRing,
    pub gens: Vec<Poly>,
}

impl Ideal {
    pub fn new(ring: PolyRing, gens: Vec<Poly>) -> Self {
        Ideal { ring, gens }
    }

    /// Generators together with the partner relations of inverted variables.
    pub fn full_generators(&self) -> Vec<Poly> {
        let mut g = self.gens.clone();
        g.extend(self.ring.pair_relations());
        g
    }

    pub fn is_homogeneous(&self) -> bool {
        self.full_generators().iter().all(|g| self.ring.is_homogeneous(g))
    }
}

fn ideal_module_gb(ring: &PolyRing, gens: &[Poly], track: bool, budget: &Budget) -> Result<ModuleGb> {
    let v: Vec<Vec<Poly>> = gens.iter().map(|g| vec![g.clone()]).collect();
    ModuleGb::compute(ring, ModuleOrder::Top, 1, &v, &[], track, budget)
}

/// Reduced Gröbner basis (monic, sorted by increasing leading monomial).
pub fn groebner_basis(ideal: &Ideal, budget: &Budget) -> Result<Vec<Poly>> {
    let gb = ideal_module_gb(&ideal.ring, &ideal.full_generators(), false, budget)?;
    Ok(gb.elements().into_iter().map(|mut v| v.remove(0)).collect())
}

/// Remainder of `f` modulo a Gröbner basis.
pub fn normal_form(ring: &PolyRing, f: &Poly, gb: &[Poly]) -> Poly {
    let fld = &ring.field;
    let mut p = f.clone();
    let mut rem = Vec::new();
    while let Some((e, c)) = p.lead().cloned() {
        match gb.iter().find(|g| divides(g.lead_exp().unwrap(), &e)) {
            Some(g) => {
                let (ge, gc) = g.lead().unwrap();
                let q = fld.neg(&fld.div(&c, gc));
                p = ring.add_scaled(&p, &q, &super::poly::exp_sub(&e, ge), g);
            }
            None => {
                let mut t = p.into_terms();
                rem.push(t.remove(0));
                p = Poly::from_sorted_unchecked(t);
            }
        }
    }
    Poly::from_sorted_unchecked(rem)
}

/// `S / J` with a cached Gröbner basis of `J` (including partner relations).
#[derive(Clone, Debug)]
pub struct QuotientRing {
    pub ring: PolyRing,
    pub relations: Vec<Poly>,
    gb: ModuleGb,
}

impl QuotientRing {
    pub fn new(ring: PolyRing, relations: Vec<Poly>, budget: &Budget) -> Result<Arc<Self>> {
        let ideal = Ideal::new(ring.clone(), relations.clone());
        let gb = ideal_module_gb(&ring, &ideal.full_generators(), false, budget)?;
        Ok(Arc::new(QuotientRing { ring, relations, gb }))
    }

    pub fn field(&self) -> &ScalarField {
        &self.ring.field
    }

    pub fn gb(&self) -> Vec<Poly> {
        self.gb.elements().into_iter().map(|mut v| v.remove(0)).collect()
    }

    pub fn gb_len(&self) -> usize {
        self.gb.len()
    }

    pub fn nf(&self, f: &Poly) -> Poly {
        self.gb.normal_form(std::slice::from_ref(f)).remove(0)
    }

    pub fn is_zero(&self, f: &Poly) -> bool {
        self.nf(f).is_zero()
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.nf(&self.ring.mul(a, b))
    }

    /// True when the ideal contains 1.
    pub fn is_zero_ring(&self) -> bool {
        self.is_zero(&self.ring.one())
    }

    fn leads(&self) -> Vec<Exp> {
        (0..self.gb.len()).map(|k| self.gb.lead(k).1.clone()).collect()
    }

    pub fn is_standard(&self, e: &[u32]) -> bool {
        (0..self.gb.len()).all(|k| !divides(self.gb.lead(k).1, e))
    }

    /// For each variable, the smallest `k` such that `x^k` is a leading
    /// monomial of the basis, if any.
    pub fn pure_power_bounds(&self) -> Vec<Option<u32>> {
        let n = self.ring.nvars();
        let mut out = vec![None; n];
        for e in self.leads() {
            let support: Vec<usize> = (0..n).filter(|&i| e[i] > 0).collect();
            if support.len() == 1 {
                let i = support[0];
                out[i] = Some(out[i].map_or(e[i], |b: u32| b.min(e[i])));
            }
        }
        out
    }

    /// Standard monomials of every degree when the quotient is finite
    /// dimensional, sorted decreasingly in the monomial order.
    pub fn finite_basis(&self) -> Result<Vec<Exp>> {
        if self.is_zero_ring() {
            return Ok(Vec::new());
        }
        let bounds = self.pure_power_bounds();
        if let Some(i) = bounds.iter().position(|b| b.is_none()) {
            return Err(Error::NotFiniteDimensional(format!(
                "no power of `{}` is a leading monomial",
                self.ring.name(i)
            )));
        }
        let bounds: Vec<u32> = bounds.into_iter().map(|b| b.unwrap()).collect();
        let mut out = Vec::new();
        let mut cur = vec![0u32; bounds.len()];
        self.enumerate(0, &mut cur, &mut |e| bounds[e] , &mut out, None);
        out.sort_by(|a, b| self.ring.cmp(b, a));
        Ok(out)
    }

    fn enumerate(
        &self,
        i: usize,
        cur: &mut Vec<u32>,
        bound: &mut dyn FnMut(usize) -> u32,
        out: &mut Vec<Exp>,
        degree: Option<i64>,
    ) {
        let n = cur.len();
        if i == n {
            if degree.map_or(true, |d| self.ring.exp_weight(cur) == d) && self.is_standard(cur) {
                out.push(cur.clone());
            }
            return;
        }
        let b = bound(i);
        for k in 0..b {
            cur[i] = k;
            if !self.is_standard(cur) {
                break;
            }
            self.enumerate(i + 1, cur, bound, out, degree);
        }
        cur[i] = 0;
    }

    /// Standard monomials of weighted degree `d`.
    ///
    /// Variables of weight zero must have a pure-power leading monomial so
    /// that every graded piece is finite.
    pub fn standard_monomials(&self, d: i64) -> Result<Vec<Exp>> {
        if self.is_zero_ring() {
            return Ok(Vec::new());
        }
        let w = self.ring.weights().to_vec();
        let bounds = self.pure_power_bounds();
        for (i, &wi) in w.iter().enumerate() {
            if wi < 0 {
                return Err(Error::NotGraded(format!(
                    "variable `{}` has negative weight",
                    self.ring.name(i)
                )));
            }
            if wi == 0 && bounds[i].is_none() {
                return Err(Error::NotFiniteDimensional(format!(
                    "degree pieces are infinite: `{}` has weight 0 and is not nilpotent or torsion",
                    self.ring.name(i)
                )));
            }
        }
        if d < 0 {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut cur = vec![0u32; w.len()];
        self.enumerate_degree(0, &mut cur, d, &w, &bounds, &mut out);
        out.sort_by(|a, b| self.ring.cmp(b, a));
        Ok(out)
    }

    fn enumerate_degree(
        &self,
        i: usize,
        cur: &mut Vec<u32>,
        remaining: i64,
        w: &[i64],
        bounds: &[Option<u32>],
        out: &mut Vec<Exp>,
    ) {
        if i == cur.len() {
            if remaining == 0 && self.is_standard(cur) {
                out.push(cur.clone());
            }
            return;
        }
        let max = if w[i] == 0 {
            bounds[i].unwrap() as i64 - 1
        } else {
            let m = remaining / w[i];
            match bounds[i] {
                Some(b) => m.min(b as i64 - 1),
                None => m,
            }
        };
        for k in 0..=max {
            cur[i] = k as u32;
            if !self.is_standard(cur) {
                break;
            }
            self.enumerate_degree(i + 1, cur, remaining - k * w[i], w, bounds, out);
        }
        cur[i] = 0;
    }

    /// Dimension of the graded piece of degree `d`.
    pub fn hilbert_function(&self, d: i64) -> Result<usize> {
        Ok(self.standard_monomials(d)?.len())
    }

    /// Exact equality of ideals `J + (extra)` and `J + (other)`.
    pub fn same_ideal(&self, extra: &[Poly], other: &[Poly], budget: &Budget) -> Result<bool> {
        let mut a = self.relations.clone();
        a.extend(extra.iter().cloned());
        let mut b = self.relations.clone();
        b.extend(other.iter().cloned());
        let ga = groebner_basis(&Ideal::new(self.ring.clone(), a), budget)?;
        let gb = groebner_basis(&Ideal::new(self.ring.clone(), b), budget)?;
        Ok(ga == gb)
    }

    /// `S / (J + extra)`.
    pub fn extend(&self, extra: &[Poly], budget: &Budget) -> Result<Arc<QuotientRing>> {
        let mut rel = self.relations.clone();
        rel.extend(extra.iter().cloned());
        QuotientRing::new(self.ring.clone(), rel, budget)
    }
}

/// Coordinates of polynomials in a fixed list of monomials.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    pub monomials: Vec<Exp>,
    index: HashMap<Exp, usize>,
}

impl MonomialBasis {
    pub fn new(monomials: Vec<Exp>) -> Self {
        let index = monomials.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        MonomialBasis { monomials, index }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Panics if a monomial of `p` is outside the basis.
    pub fn coords(&self, field: &ScalarField, p: &Poly) -> SparseVec {
        SparseVec::from_entries(
            field,
            p.terms().iter().map(|(e, c)| {
                let i = self
                    .index_of(e)
                    .unwrap_or_else(|| panic!("monomial {e:?} outside the basis"));
                (i, c.clone())
            }),
        )
    }

    pub fn poly(&self, ring: &PolyRing, v: &SparseVec) -> Poly {
        ring.from_terms(v.iter().map(|(i, c)| (self.monomials[*i].clone(), c.clone())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grobner::parse::parse_poly;

    fn ring(names: &[&str]) -> PolyRing {
        PolyRing::new(ScalarField::Rationals, names.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    #[test]
    fn cusp_basis() {
        let r = ring(&["x", "y"]);
        let g = groebner_basis(&Ideal::new(r.clone(), vec![parse_poly(&r, "x^2 - y^3").unwrap()]), &Budget::default()).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(r.format(&g[0]), "y^3 - x^2");
    }

    #[test]
    fn reduction_step() {
        let r = ring(&["x", "y"]);
        let g = vec![parse_poly(&r, "x^2 - y").unwrap()];
        let nf = normal_form(&r, &parse_poly(&r, "x^3").unwrap(), &g);
        assert_eq!(r.format(&nf), "x*y");
    }

    #[test]
    fn monomial_curve_hilbert() {
        let mut r = ring(&["x", "y"]);
        r = PolyRing::with_options(r.field, r.names().to_vec(), &[], Default::default(), Some(vec![1, 1])).unwrap();
        let q = QuotientRing::new(r.clone(), vec![parse_poly(&r, "x*y").unwrap()], &Budget::default()).unwrap();
        let h: Vec<usize> = (0..4).map(|d| q.hilbert_function(d).unwrap()).collect();
        assert_eq!(h, vec![1, 2, 2, 2]);
    }

    #[test]
    fn inverted_variable_relation() {
        let r = PolyRing::with_options(ScalarField::Rationals, vec!["v".into()], &["v".into()], Default::default(), None).unwrap();
        let q = QuotientRing::new(r.clone(), vec![], &Budget::default()).unwrap();
        assert_eq!(q.nf(&parse_poly(&r, "v*v_inv").unwrap()), r.one());
    }
}
