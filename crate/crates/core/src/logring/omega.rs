use std::sync::Arc;

use super::LogRingSpec;
use crate::error::Result;
use crate::grobner::buchberger::{vec_is_zero, zero_vec};
use crate::grobner::{Budget, FPModule, ModVec, Poly, QuotientRing};

/// `Ω¹` of a charted log ring as a presented `A`-module.
///
/// Generators are `d x` for every ring variable (partners included) followed
/// by `dlog p` for every generator of `P`.
#[derive(Clone, Debug)]
pub struct LogDifferentials {
    pub module: FPModule,
    pub names: Vec<String>,
    pub n_dx: usize,
    pub n_dlog: usize,
}

impl LogDifferentials {
    pub fn dx(&self, i: usize) -> usize {
        i
    }

    pub fn dlog(&self, j: usize) -> usize {
        self.n_dx + j
    }

    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.module.ring
    }
}

fn gradient(a: &QuotientRing, f: &Poly, rank: usize) -> ModVec {
    let r = &a.ring;
    let mut v = zero_vec(rank);
    for (i, slot) in v.iter_mut().enumerate().take(r.nvars()) {
        *slot = a.nf(&r.derivative(f, i));
    }
    v
}

pub fn log_differentials(spec: &LogRingSpec, budget: &Budget) -> Result<LogDifferentials> {
    spec.check(budget)?;
    let a = spec.total_ring.quotient(budget)?;
    let r = &a.ring;
    let n_dx = r.nvars();
    let n_dlog = spec.total_monoid.len();
    let rank = n_dx + n_dlog;
    let fld = r.field;
    let mut names: Vec<String> = r.names().iter().map(|n| format!("d{n}")).collect();
    names.extend((0..n_dlog).map(|j| format!("dlog p{}", j + 1)));
    let mut shifts: Vec<i64> = r.weights().to_vec();
    shifts.extend(std::iter::repeat(0).take(n_dlog));

    let mut rels: Vec<ModVec> = Vec::new();
    let mut ring_rels = spec.total_ring.relations.clone();
    ring_rels.extend(r.pair_relations());
    for f in &ring_rels {
        rels.push(gradient(&a, f, rank));
    }
    for img in &spec.base_map {
        rels.push(gradient(&a, img, rank));
    }
    for (j, v) in spec.total_chart.iter().enumerate() {
        let mut g = gradient(&a, v, rank);
        g[n_dx + j] = r.neg(&a.nf(v));
        rels.push(g);
    }
    for img in &spec.theta.images {
        let mut g = zero_vec(rank);
        for (j, &c) in img.iter().enumerate() {
            g[n_dx + j] = r.constant(fld.from_i64(c as i64));
        }
        rels.push(g);
    }
    for c in spec.total_monoid.relation_lattice() {
        let mut g = zero_vec(rank);
        for (j, x) in c.iter().enumerate() {
            g[n_dx + j] = r.constant(fld.from_bigint(x));
        }
        rels.push(g);
    }
    rels.retain(|v| !vec_is_zero(v));
    Ok(LogDifferentials {
        module: FPModule::new(a.clone(), rank, rels, shifts),
        names,
        n_dx,
        n_dlog,
    })
}

/// All `n`-element subsets of `0..k` in lexicographic order.
pub(crate) fn subsets(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(start: usize, k: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            if k - i < n - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, k, n, cur, out);
            cur.pop();
        }
    }
    rec(0, k, n, &mut cur, &mut out);
    out
}

/// `e_b ∧ e_I` as (sign, sorted set), or `None` if `b ∈ I`.
pub(crate) fn wedge_one(b: usize, set: &[usize]) -> Option<(bool, Vec<usize>)> {
    if set.contains(&b) {
        return None;
    }
    let below = set.iter().filter(|&&x| x < b).count();
    let mut out = set.to_vec();
    out.insert(below, b);
    Some((below % 2 == 1, out))
}

/// `Λ^n M` presented on the `n`-subsets of the generators of `M`.
pub fn exterior_power(m: &FPModule, n: usize) -> FPModule {
    let r = &m.ring.ring;
    let gens = subsets(m.rank, n);
    let index: std::collections::HashMap<Vec<usize>, usize> =
        gens.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let shifts = gens.iter().map(|s| s.iter().map(|&g| m.shifts[g]).sum()).collect();
    let mut rels = Vec::new();
    if n > 0 {
        for k in subsets(m.rank, n - 1) {
            for rel in &m.relations {
                let mut v = zero_vec(gens.len());
                for (g, c) in rel.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    if let Some((neg, s)) = wedge_one(g, &k) {
                        let i = index[&s];
                        v[i] = if neg { r.sub(&v[i], c) } else { r.add(&v[i], c) };
                    }
                }
                if !vec_is_zero(&v) {
                    rels.push(v);
                }
            }
        }
    }
    FPModule::new(m.ring.clone(), gens.len(), rels, shifts)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;
    use crate::exactlin::ScalarField;

    #[test]
    fn log_point_is_rank_one() {
        let s = log_point(ScalarField::Rationals);
        let o = log_differentials(&s, &Budget::default()).unwrap();
        assert_eq!(o.module.hilbert_at(0).unwrap(), 1);
        let l2 = exterior_power(&o.module, 2);
        assert_eq!(l2.hilbert_at(0).unwrap(), 0);
    }

    #[test]
    fn kummer_over_q_vanishes() {
        let s = kummer(ScalarField::Rationals, 3);
        let o = log_differentials(&s, &Budget::default()).unwrap();
        assert_eq!(o.module.hilbert_at(0).unwrap(), 0);
    }

    #[test]
    fn kummer_in_char_p_survives() {
        let s = kummer(ScalarField::prime(2).unwrap(), 2);
        let o = log_differentials(&s, &Budget::default()).unwrap();
        assert_eq!(o.module.hilbert_at(0).unwrap(), 1);
    }

    #[test]
    fn node_is_free_of_rank_one() {
        let s = node(ScalarField::Rationals);
        let o = log_differentials(&s, &Budget::default()).unwrap();
        let h = o.module.hilbert_function(&[0, 1, 2, 3, 4]).unwrap();
        let a = o.ring();
        for (d, v) in h {
            assert_eq!(v, a.hilbert_function(d).unwrap());
        }
    }

    #[test]
    fn exterior_square_of_free_plane() {
        let s = trivial(ScalarField::Rationals, &["x", "y"], &[1, 1], &[]);
        let o = log_differentials(&s, &Budget::default()).unwrap();
        let l2 = exterior_power(&o.module, 2);
        assert_eq!(l2.hilbert_at(2).unwrap(), 1);
        assert_eq!(l2.hilbert_at(3).unwrap(), 2);
    }

    #[test]
    fn subset_enumeration() {
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(wedge_one(1, &[0, 2]), Some((true, vec![0, 1, 2])));
    }
}
