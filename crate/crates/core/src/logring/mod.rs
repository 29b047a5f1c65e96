//! Charted affine log rings, log differentials and the log de Rham complex.

mod derham;
mod omega;

pub use derham::{de_rham_cohomology, log_de_rham, DeRhamComplex, Framing};
pub(crate) use omega::{subsets, wedge_one};
pub use omega::{exterior_power, log_differentials, LogDifferentials};

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::exactlin::ScalarField;
use crate::grobner::{Budget, Poly, PolyRing, QuotientRing};
use crate::monoidlat::{chart_cokernel, AffineMonoid, FinAbGroup, MonoidMap};

/// A polynomial ring (with optional inverted variables) modulo relations.
#[derive(Clone, Debug)]
pub struct AlgebraPresentation {
    pub ring: PolyRing,
    pub relations: Vec<Poly>,
}

impl AlgebraPresentation {
    pub fn new(ring: PolyRing, relations: Vec<Poly>) -> Self {
        AlgebraPresentation { ring, relations }
    }

    /// The ground field with no variables.
    pub fn field(field: ScalarField) -> Self {
        AlgebraPresentation {
            ring: PolyRing::new(field, Vec::new()).unwrap(),
            relations: Vec::new(),
        }
    }

    pub fn quotient(&self, budget: &Budget) -> Result<Arc<QuotientRing>> {
        QuotientRing::new(self.ring.clone(), self.relations.clone(), budget)
    }
}

/// Base chart `Q -> k_alg`, total chart `P -> A`, `θ: Q -> P`, and the
/// structure map `k_alg -> A`.
#[derive(Clone, Debug)]
pub struct LogRingSpec {
    pub field: ScalarField,
    pub base_monoid: AffineMonoid,
    pub base_ring: AlgebraPresentation,
    /// `β(q)` for each generator of `Q`, in the base ring.
    pub base_chart: Vec<Poly>,
    pub total_monoid: AffineMonoid,
    pub theta: MonoidMap,
    pub total_ring: AlgebraPresentation,
    /// Image in `A` of each base-ring variable.
    pub base_map: Vec<Poly>,
    /// `α(p)` for each generator of `P`, in `A`.
    pub total_chart: Vec<Poly>,
}

/// Product `Π f_i^{e_i}` in `ring`; exponents may be negative only when the
/// caller handles inverses, so they are rejected here.
fn chart_product(ring: &PolyRing, values: &[Poly], exps: &[BigInt]) -> Option<Poly> {
    let mut acc = ring.one();
    for (v, e) in values.iter().zip(exps) {
        if e.is_negative() {
            return None;
        }
        acc = ring.mul(&acc, &ring.pow(v, e.to_u32()?));
    }
    Some(acc)
}

fn split_relation(c: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let pos = c.iter().map(|x| if x.is_positive() { x.clone() } else { BigInt::from(0) }).collect();
    let neg = c.iter().map(|x| if x.is_negative() { -x.clone() } else { BigInt::from(0) }).collect();
    (pos, neg)
}

impl LogRingSpec {
    pub fn a_ring(&self) -> &PolyRing {
        &self.total_ring.ring
    }

    /// `α(θ(q))` as a polynomial of `A`.
    pub fn chart_of_theta(&self, q: usize) -> Poly {
        let exps: Vec<BigInt> = self.theta.images[q].iter().map(|&x| BigInt::from(x)).collect();
        chart_product(self.a_ring(), &self.total_chart, &exps).unwrap()
    }

    /// `β(q)` pushed into `A`.
    pub fn base_chart_in_a(&self, q: usize) -> Poly {
        self.base_ring
            .ring
            .substitute(&self.base_chart[q], self.a_ring(), &self.base_images())
    }

    /// Images of the base-ring variables in `A`.
    pub fn base_images(&self) -> Vec<Poly> {
        self.base_map.clone()
    }

    /// Checks every structural requirement; returns human-readable violations.
    pub fn validate(&self, budget: &Budget) -> Vec<String> {
        let mut issues = Vec::new();
        if self.base_chart.len() != self.base_monoid.len() {
            issues.push(format!(
                "base chart has {} values for {} monoid generators",
                self.base_chart.len(),
                self.base_monoid.len()
            ));
        }
        if self.total_chart.len() != self.total_monoid.len() {
            issues.push(format!(
                "total chart has {} values for {} monoid generators",
                self.total_chart.len(),
                self.total_monoid.len()
            ));
        }
        if self.base_map.len() != self.base_ring.ring.nvars() - self.base_ring.ring.inverse_pairs().len() {
            issues.push("base map must give one image per base variable".into());
        }
        if self.theta.source != self.base_monoid || self.theta.target != self.total_monoid {
            issues.push("theta does not go from the base monoid to the total monoid".into());
        }
        if !self.base_ring.ring.inverse_pairs().is_empty() {
            issues.push("inverted base variables are not supported".into());
        }
        if !issues.is_empty() {
            return issues;
        }
        let (kq, aq) = match (self.base_ring.quotient(budget), self.total_ring.quotient(budget)) {
            (Ok(k), Ok(a)) => (k, a),
            (Err(e), _) | (_, Err(e)) => return vec![format!("cannot build quotient rings: {e}")],
        };
        if aq.is_zero_ring() {
            issues.push("the total ring is the zero ring".into());
        }
        let a = self.a_ring();
        for (i, rel) in self.base_ring.relations.iter().enumerate() {
            let img = self.base_ring.ring.substitute(rel, a, &self.base_images());
            if !aq.is_zero(&img) {
                issues.push(format!("base relation {i} does not vanish in the total ring"));
            }
        }
        for c in self.base_monoid.relation_lattice() {
            let (p, n) = split_relation(&c);
            let br = &self.base_ring.ring;
            let lhs = chart_product(br, &self.base_chart, &p).unwrap();
            let rhs = chart_product(br, &self.base_chart, &n).unwrap();
            if !kq.is_zero(&br.sub(&lhs, &rhs)) {
                issues.push(format!("base chart violates the monoid relation {c:?}"));
            }
        }
        for c in self.total_monoid.relation_lattice() {
            let (p, n) = split_relation(&c);
            let lhs = chart_product(a, &self.total_chart, &p).unwrap();
            let rhs = chart_product(a, &self.total_chart, &n).unwrap();
            if !aq.is_zero(&a.sub(&lhs, &rhs)) {
                issues.push(format!("total chart violates the monoid relation {c:?}"));
            }
        }
        for q in 0..self.base_monoid.len() {
            let lhs = self.chart_of_theta(q);
            let rhs = self.base_chart_in_a(q);
            if !aq.is_zero(&a.sub(&lhs, &rhs)) {
                issues.push(format!(
                    "chart square fails for base generator {q}: alpha(theta(q)) = {} but beta(q) = {} in A",
                    a.format(&aq.nf(&lhs)),
                    a.format(&aq.nf(&rhs))
                ));
            }
        }
        for (i, rel) in aq.relations.iter().enumerate() {
            if !a.is_homogeneous(rel) {
                issues.push(format!("relation {i} of A is not homogeneous"));
            }
        }
        for (j, v) in self.total_chart.iter().enumerate() {
            if v.len() > 1 {
                issues.push(format!("chart value of generator {j} is not a monomial"));
            }
        }
        let bw = self.base_ring.ring.weights();
        for (i, img) in self.base_map.iter().enumerate() {
            match a.homogeneous_degree(img) {
                Ok(Some(d)) if d != bw[i] => issues.push(format!("base map of variable {i} changes degree")),
                Err(()) => issues.push(format!("base map of variable {i} is not homogeneous")),
                _ => {}
            }
        }
        if let Err(e) = chart_cokernel(&self.theta) {
            issues.push(e.to_string());
        }
        issues
    }

    pub fn check(&self, budget: &Budget) -> Result<()> {
        let issues = self.validate(budget);
        if issues.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSpec(issues))
        }
    }

    pub fn group(&self) -> Result<FinAbGroup> {
        chart_cokernel(&self.theta)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::grobner::{parse_poly, MonomialOrder};

    pub fn ring(field: ScalarField, names: &[&str], weights: &[i64]) -> PolyRing {
        PolyRing::with_options(
            field,
            names.iter().map(|s| s.to_string()).collect(),
            &[],
            MonomialOrder::DegRevLex,
            Some(weights.to_vec()),
        )
        .unwrap()
    }

    pub fn spec(
        field: ScalarField,
        base_gens: usize,
        p: AffineMonoid,
        theta: Vec<Vec<u64>>,
        names: &[&str],
        weights: &[i64],
        rels: &[&str],
        chart: &[&str],
    ) -> LogRingSpec {
        let q = AffineMonoid::free(base_gens);
        let kr = PolyRing::new(field, vec![]).unwrap();
        let ar = ring(field, names, weights);
        LogRingSpec {
            field,
            base_monoid: q.clone(),
            base_ring: AlgebraPresentation::new(kr.clone(), vec![]),
            base_chart: (0..base_gens).map(|_| kr.zero()).collect(),
            total_monoid: p.clone(),
            theta: MonoidMap::new(q, p, theta).unwrap(),
            total_ring: AlgebraPresentation::new(
                ar.clone(),
                rels.iter().map(|r| parse_poly(&ar, r).unwrap()).collect(),
            ),
            base_map: vec![],
            total_chart: chart.iter().map(|c| parse_poly(&ar, c).unwrap()).collect(),
        }
    }

    pub fn log_point(field: ScalarField) -> LogRingSpec {
        spec(field, 0, AffineMonoid::free(1), vec![], &[], &[], &[], &["0"])
    }

    pub fn kummer(field: ScalarField, n: u64) -> LogRingSpec {
        spec(field, 1, AffineMonoid::free(1), vec![vec![n]], &[], &[], &[], &["0"])
    }

    pub fn node(field: ScalarField) -> LogRingSpec {
        spec(field, 1, AffineMonoid::free(2), vec![vec![1, 1]], &["x", "y"], &[1, 1], &["x*y"], &["x", "y"])
    }

    pub fn trivial(field: ScalarField, names: &[&str], weights: &[i64], rels: &[&str]) -> LogRingSpec {
        spec(field, 0, AffineMonoid::trivial(), vec![], names, weights, rels, &[])
    }
}
