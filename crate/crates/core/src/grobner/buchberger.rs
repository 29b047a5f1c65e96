//! Buchberger's algorithm for submodules of free modules `S^r`, with
//! optional cofactor tracking and Schreyer syzygies.
//!
//! Ideals are the rank-one case.

use std::cmp::Ordering;
use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::poly::{divides, exp_lcm, exp_sub, Exp, Poly, PolyRing};
use crate::error::{Error, Result};
use crate::exactlin::Scalar;

/// A vector of the free module `S^r`, stored densely by component.
pub type ModVec = Vec<Poly>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleOrder {
    /// Term over position, ties broken by the larger position index.
    Top,
    /// Position over term with the given rank per position (larger rank
    /// means larger position).
    Pot(Vec<usize>),
}

impl ModuleOrder {
    pub fn pot(rank: usize) -> Self {
        ModuleOrder::Pot((0..rank).collect())
    }

    fn rank(&self, p: usize) -> usize {
        match self {
            ModuleOrder::Top => p,
            ModuleOrder::Pot(r) => r[p],
        }
    }

    pub fn cmp(&self, ring: &PolyRing, a: (usize, &[u32]), b: (usize, &[u32])) -> Ordering {
        match self {
            ModuleOrder::Top => ring
                .cmp(a.1, b.1)
                .then_with(|| self.rank(a.0).cmp(&self.rank(b.0))),
            ModuleOrder::Pot(_) => self
                .rank(a.0)
                .cmp(&self.rank(b.0))
                .then_with(|| ring.cmp(a.1, b.1)),
        }
    }
}

/// Resource caps; exceeding any of them fails with `BudgetExceeded`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Budget {
    pub max_pairs: usize,
    pub max_terms: usize,
    pub max_degree: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_pairs: 200_000,
            max_terms: 200_000,
            max_degree: 400,
        }
    }
}

pub fn zero_vec(rank: usize) -> ModVec {
    vec![Poly::zero(); rank]
}

pub fn unit_vec(ring: &PolyRing, rank: usize, i: usize) -> ModVec {
    let mut v = zero_vec(rank);
    v[i] = ring.one();
    v
}

pub fn vec_is_zero(v: &[Poly]) -> bool {
    v.iter().all(|p| p.is_zero())
}

/// `a + s * m * b`, componentwise.
pub fn vec_add_scaled(ring: &PolyRing, a: &[Poly], s: &Scalar, m: &[u32], b: &[Poly]) -> ModVec {
    a.iter()
        .zip(b)
        .map(|(x, y)| ring.add_scaled(x, s, m, y))
        .collect()
}

pub fn vec_scale_poly(ring: &PolyRing, a: &[Poly], f: &Poly) -> ModVec {
    a.iter().map(|x| ring.mul(x, f)).collect()
}

pub fn vec_add(ring: &PolyRing, a: &[Poly], b: &[Poly]) -> ModVec {
    a.iter().zip(b).map(|(x, y)| ring.add(x, y)).collect()
}

/// Leading `(position, exponent, coefficient)` of `v`.
pub fn vec_lead<'a>(ring: &PolyRing, order: &ModuleOrder, v: &'a [Poly]) -> Option<(usize, &'a Exp, &'a Scalar)> {
    let mut best: Option<(usize, &Exp, &Scalar)> = None;
    for (p, f) in v.iter().enumerate() {
        if let Some((e, c)) = f.lead() {
            let better = match &best {
                None => true,
                Some((bp, be, _)) => order.cmp(ring, (p, e), (*bp, be)) == Ordering::Greater,
            };
            if better {
                best = Some((p, e, c));
            }
        }
    }
    best
}

#[derive(Clone, Debug)]
pub(crate) struct Elem {
    pub v: ModVec,
    pub pos: usize,
    pub lm: Exp,
    pub lc: Scalar,
    /// Expression as a combination of the tracked inputs.
    pub cof: ModVec,
}

/// A Gröbner basis of a submodule of `S^rank`.
#[derive(Clone, Debug)]
pub struct ModuleGb {
    pub ring: PolyRing,
    pub order: ModuleOrder,
    pub rank: usize,
    pub(crate) elems: Vec<Elem>,
    by_pos: Vec<Vec<usize>>,
    tracked: usize,
}

/// Quotients recorded during a reduction: `(basis index, monomial, scalar)`.
pub type Quotients = Vec<(usize, Exp, Scalar)>;

struct Reducer<'a> {
    ring: &'a PolyRing,
    order: &'a ModuleOrder,
    elems: &'a [Elem],
    by_pos: &'a [Vec<usize>],
    budget: Option<&'a Budget>,
}

impl Reducer<'_> {
    fn find(&self, pos: usize, e: &[u32], skip: Option<usize>) -> Option<usize> {
        self.by_pos[pos]
            .iter()
            .copied()
            .find(|&k| Some(k) != skip && divides(&self.elems[k].lm, e))
    }

    /// Full reduction. Returns the remainder; updates `cof` and `quot`.
    fn reduce(
        &self,
        mut p: ModVec,
        cof: &mut Option<&mut ModVec>,
        mut quot: Option<&mut Quotients>,
        skip: Option<usize>,
    ) -> Result<ModVec> {
        let f = &self.ring.field;
        let rank = p.len();
        let mut rem: Vec<Vec<(Exp, Scalar)>> = vec![Vec::new(); rank];
        loop {
            let Some((pos, e, c)) = vec_lead(self.ring, self.order, &p) else {
                break;
            };
            let (e, c) = (e.clone(), c.clone());
            match self.find(pos, &e, skip) {
                Some(k) => {
                    let g = &self.elems[k];
                    let q = f.neg(&f.div(&c, &g.lc));
                    let m = exp_sub(&e, &g.lm);
                    p = vec_add_scaled(self.ring, &p, &q, &m, &g.v);
                    if let Some(cv) = cof.as_deref_mut() {
                        if !vec_is_zero(&g.cof) {
                            *cv = vec_add_scaled(self.ring, cv, &q, &m, &g.cof);
                        }
                    }
                    if let Some(qs) = quot.as_deref_mut() {
                        qs.push((k, m, f.neg(&q)));
                    }
                    if let Some(b) = self.budget {
                        if p.iter().any(|x| x.len() > b.max_terms) {
                            return Err(Error::BudgetExceeded(format!(
                                "polynomial exceeded {} terms",
                                b.max_terms
                            )));
                        }
                    }
                }
                None => {
                    let mut terms = std::mem::take(&mut p[pos]).into_terms();
                    let lead = terms.remove(0);
                    p[pos] = Poly::from_sorted_unchecked(terms);
                    rem[pos].push(lead);
                }
            }
        }
        Ok(rem.into_iter().map(Poly::from_sorted_unchecked).collect())
    }
}

struct Pair {
    i: usize,
    j: usize,
    pos: usize,
    lcm: Exp,
}

impl ModuleGb {
    /// Computes a reduced Gröbner basis of the submodule generated by
    /// `tracked ∪ fixed`.
    ///
    /// Cofactors are recorded relative to `tracked`. `fixed` must already be
    /// a Gröbner basis of the submodule it generates; pairs inside it are
    /// skipped.
    pub fn compute(
        ring: &PolyRing,
        order: ModuleOrder,
        rank: usize,
        tracked: &[ModVec],
        fixed: &[ModVec],
        track: bool,
        budget: &Budget,
    ) -> Result<ModuleGb> {
        let ntrack = if track { tracked.len() } else { 0 };
        let mut gb = ModuleGb {
            ring: ring.clone(),
            order,
            rank,
            elems: Vec::new(),
            by_pos: vec![Vec::new(); rank],
            tracked: ntrack,
        };
        let mut is_fixed = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();
        let mut pending: HashSet<(usize, usize)> = HashSet::new();
        for v in fixed {
            assert_eq!(v.len(), rank);
            if vec_is_zero(v) {
                continue;
            }
            gb.push(v.clone(), zero_vec(ntrack));
            is_fixed.push(true);
            let k = gb.elems.len() - 1;
            gb.new_pairs(k, &is_fixed, &mut pairs, &mut pending);
        }
        for (l, v) in tracked.iter().enumerate() {
            assert_eq!(v.len(), rank);
            let mut cof = if track {
                unit_vec(ring, ntrack, l)
            } else {
                Vec::new()
            };
            let r = gb.reducer(Some(budget)).reduce(v.clone(), &mut Some(&mut cof), None, None)?;
            if vec_is_zero(&r) {
                continue;
            }
            gb.push(r, cof);
            is_fixed.push(false);
            let k = gb.elems.len() - 1;
            gb.new_pairs(k, &is_fixed, &mut pairs, &mut pending);
        }
        let mut processed = 0usize;
        while !pairs.is_empty() {
            let mut best = 0;
            for k in 1..pairs.len() {
                let (a, b) = (&pairs[k], &pairs[best]);
                let o = gb
                    .order
                    .cmp(ring, (a.pos, &a.lcm), (b.pos, &b.lcm))
                    .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)));
                if o == Ordering::Less {
                    best = k;
                }
            }
            let pair = pairs.swap_remove(best);
            pending.remove(&(pair.i, pair.j));
            if gb.chain_redundant(&pair, &pending) {
                continue;
            }
            processed += 1;
            if processed > budget.max_pairs {
                return Err(Error::BudgetExceeded(format!(
                    "more than {} S-pairs",
                    budget.max_pairs
                )));
            }
            if pair.lcm.iter().map(|&x| x as u64).sum::<u64>() > budget.max_degree as u64 {
                return Err(Error::BudgetExceeded(format!(
                    "S-pair degree above {}",
                    budget.max_degree
                )));
            }
            let (s, mut cof) = gb.spoly(pair.i, pair.j, &pair.lcm);
            let r = gb.reducer(Some(budget)).reduce(s, &mut Some(&mut cof), None, None)?;
            if vec_is_zero(&r) {
                continue;
            }
            gb.push(r, cof);
            is_fixed.push(false);
            let k = gb.elems.len() - 1;
            gb.new_pairs(k, &is_fixed, &mut pairs, &mut pending);
        }
        gb.interreduce()?;
        Ok(gb)
    }

    fn reducer<'a>(&'a self, budget: Option<&'a Budget>) -> Reducer<'a> {
        Reducer {
            ring: &self.ring,
            order: &self.order,
            elems: &self.elems,
            by_pos: &self.by_pos,
            budget,
        }
    }

    fn push(&mut self, v: ModVec, cof: ModVec) {
        let (pos, lm, lc) = {
            let (p, e, c) = vec_lead(&self.ring, &self.order, &v).unwrap();
            (p, e.clone(), c.clone())
        };
        self.by_pos[pos].push(self.elems.len());
        self.elems.push(Elem { v, pos, lm, lc, cof });
    }

    fn new_pairs(
        &self,
        k: usize,
        is_fixed: &[bool],
        pairs: &mut Vec<Pair>,
        pending: &mut HashSet<(usize, usize)>,
    ) {
        let g = &self.elems[k];
        for &i in &self.by_pos[g.pos] {
            if i == k || (is_fixed[i] && is_fixed[k]) {
                continue;
            }
            let h = &self.elems[i];
            let lcm = exp_lcm(&h.lm, &g.lm);
            if self.rank == 1 && super::poly::coprime(&h.lm, &g.lm) {
                continue;
            }
            pairs.push(Pair {
                i,
                j: k,
                pos: g.pos,
                lcm,
            });
            pending.insert((i, k));
        }
    }

    fn chain_redundant(&self, p: &Pair, pending: &HashSet<(usize, usize)>) -> bool {
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        self.by_pos[p.pos].iter().any(|&k| {
            k != p.i
                && k != p.j
                && divides(&self.elems[k].lm, &p.lcm)
                && !pending.contains(&key(p.i, k))
                && !pending.contains(&key(p.j, k))
        })
    }

    fn spoly(&self, i: usize, j: usize, lcm: &[u32]) -> (ModVec, ModVec) {
        let f = &self.ring.field;
        let (gi, gj) = (&self.elems[i], &self.elems[j]);
        let si = f.inv(&gi.lc);
        let sj = f.neg(&f.inv(&gj.lc));
        let mi = exp_sub(lcm, &gi.lm);
        let mj = exp_sub(lcm, &gj.lm);
        let z = zero_vec(self.rank);
        let s = vec_add_scaled(&self.ring, &vec_add_scaled(&self.ring, &z, &si, &mi, &gi.v), &sj, &mj, &gj.v);
        let zc = zero_vec(self.tracked);
        let c = vec_add_scaled(&self.ring, &vec_add_scaled(&self.ring, &zc, &si, &mi, &gi.cof), &sj, &mj, &gj.cof);
        (s, c)
    }

    fn interreduce(&mut self) -> Result<()> {
        let n = self.elems.len();
        let mut keep = vec![true; n];
        for a in 0..n {
            for b in 0..n {
                if a == b || !keep[b] || self.elems[a].pos != self.elems[b].pos {
                    continue;
                }
                if divides(&self.elems[b].lm, &self.elems[a].lm)
                    && (self.elems[b].lm != self.elems[a].lm || b < a)
                {
                    keep[a] = false;
                    break;
                }
            }
        }
        let mut kept: Vec<Elem> = self
            .elems
            .drain(..)
            .zip(keep)
            .filter(|(_, k)| *k)
            .map(|(e, _)| e)
            .collect();
        let order = self.order.clone();
        let ring = self.ring.clone();
        kept.sort_by(|a, b| order.cmp(&ring, (a.pos, &a.lm), (b.pos, &b.lm)));
        self.elems = kept;
        self.rebuild_index();
        let f = self.ring.field;
        for k in 0..self.elems.len() {
            let v = self.elems[k].v.clone();
            let mut cof = self.elems[k].cof.clone();
            let r = self.reducer(None).reduce(v, &mut Some(&mut cof), None, Some(k))?;
            let lc = self.elems[k].lc.clone();
            let inv = f.inv(&lc);
            let e = &mut self.elems[k];
            e.v = r.iter().map(|p| self.ring.scale(p, &inv)).collect();
            e.cof = cof.iter().map(|p| self.ring.scale(p, &inv)).collect();
            e.lc = f.one();
        }
        Ok(())
    }

    fn rebuild_index(&mut self) {
        self.by_pos = vec![Vec::new(); self.rank];
        for (k, e) in self.elems.iter().enumerate() {
            self.by_pos[e.pos].push(k);
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn element(&self, k: usize) -> &ModVec {
        &self.elems[k].v
    }

    pub fn elements(&self) -> Vec<ModVec> {
        self.elems.iter().map(|e| e.v.clone()).collect()
    }

    /// Leading `(position, exponent)` of basis element `k`.
    pub fn lead(&self, k: usize) -> (usize, &Exp) {
        (self.elems[k].pos, &self.elems[k].lm)
    }

    /// Cofactors of element `k` in terms of the tracked inputs.
    pub fn cofactors(&self, k: usize) -> &ModVec {
        &self.elems[k].cof
    }

    pub fn normal_form(&self, v: &[Poly]) -> ModVec {
        self.reducer(None)
            .reduce(v.to_vec(), &mut None, None, None)
            .expect("unbudgeted reduction cannot fail")
    }

    /// Remainder and quotients of the reduction of `v`.
    pub fn divide(&self, v: &[Poly]) -> (ModVec, Quotients) {
        let mut q = Vec::new();
        let r = self
            .reducer(None)
            .reduce(v.to_vec(), &mut None, Some(&mut q), None)
            .expect("unbudgeted reduction cannot fail");
        (r, q)
    }

    pub fn contains(&self, v: &[Poly]) -> bool {
        vec_is_zero(&self.normal_form(v))
    }

    /// Every S-vector of the basis reduces to zero.
    pub fn check_spolys(&self) -> bool {
        for a in 0..self.elems.len() {
            for b in a + 1..self.elems.len() {
                if self.elems[a].pos != self.elems[b].pos {
                    continue;
                }
                let lcm = exp_lcm(&self.elems[a].lm, &self.elems[b].lm);
                let (s, _) = self.spoly(a, b, &lcm);
                if !self.contains(&s) {
                    return false;
                }
            }
        }
        true
    }

    /// Generators of the syzygy module of the basis elements (vectors of
    /// length `len()`), from S-vector reductions. Pairs whose Schreyer
    /// leading term is a multiple of another pair's are omitted.
    pub fn schreyer_syzygies(&self) -> Vec<ModVec> {
        let ring = &self.ring;
        let f = &ring.field;
        let n = self.elems.len();
        let mut out = Vec::new();
        for i in 0..n {
            let cands: Vec<(usize, Exp)> = (0..n)
                .filter(|&j| j > i && self.elems[j].pos == self.elems[i].pos)
                .map(|j| {
                    let lcm = exp_lcm(&self.elems[i].lm, &self.elems[j].lm);
                    (j, exp_sub(&lcm, &self.elems[i].lm))
                })
                .collect();
            for (a, (j, m)) in cands.iter().enumerate() {
                let dominated = cands.iter().enumerate().any(|(b, (_, m2))| {
                    b != a && divides(m2, m) && (m2 != m || b < a)
                });
                if dominated {
                    continue;
                }
                let lcm = exp_lcm(&self.elems[i].lm, &self.elems[*j].lm);
                let (s, _) = self.spoly(i, *j, &lcm);
                let (r, quot) = self.divide(&s);
                debug_assert!(vec_is_zero(&r));
                let mut syz = zero_vec(n);
                let gi = &self.elems[i];
                let gj = &self.elems[*j];
                syz[i] = ring.monomial(exp_sub(&lcm, &gi.lm), f.inv(&gi.lc));
                syz[*j] = ring.monomial(exp_sub(&lcm, &gj.lm), f.neg(&f.inv(&gj.lc)));
                for (k, mono, c) in quot {
                    let t = ring.monomial(mono, f.neg(&c));
                    syz[k] = ring.add(&syz[k], &t);
                }
                out.push(syz);
            }
        }
        out
    }

    /// Combination of the tracked inputs given by basis coefficients `s`.
    pub fn pull_back(&self, s: &[Poly]) -> ModVec {
        let mut acc = zero_vec(self.tracked);
        for (k, c) in s.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (e, a) in c.terms() {
                acc = vec_add_scaled(&self.ring, &acc, a, e, &self.elems[k].cof);
            }
        }
        acc
    }

    /// Expresses `v` (which must lie in the module) through the tracked
    /// inputs. `None` when `v` is not a member.
    pub fn lift(&self, v: &[Poly]) -> Option<ModVec> {
        let (r, quot) = self.divide(v);
        if !vec_is_zero(&r) {
            return None;
        }
        let ring = &self.ring;
        let mut coeffs = zero_vec(self.elems.len());
        for (k, mono, c) in quot {
            coeffs[k] = ring.add(&coeffs[k], &ring.monomial(mono, c));
        }
        Some(self.pull_back(&coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::ScalarField;
    use crate::grobner::parse::parse_poly;

    fn ring(names: &[&str]) -> PolyRing {
        PolyRing::new(ScalarField::Rationals, names.iter().map(|s| s.to_string()).collect()).unwrap()
    }

    fn ideal_gb(r: &PolyRing, gens: &[&str]) -> ModuleGb {
        let v: Vec<ModVec> = gens.iter().map(|g| vec![parse_poly(r, g).unwrap()]).collect();
        ModuleGb::compute(r, ModuleOrder::Top, 1, &v, &[], true, &Budget::default()).unwrap()
    }

    #[test]
    fn twisted_cubic() {
        let r = ring(&["x", "y", "z", "w"]);
        let gb = ideal_gb(&r, &["x*z - y^2", "y*w - z^2", "x*w - y*z"]);
        assert_eq!(gb.len(), 3);
        assert!(gb.check_spolys());
    }

    #[test]
    fn cofactors_reproduce_elements() {
        let r = ring(&["x", "y"]);
        let inputs = ["x^2 - y", "x*y - 1"];
        let gb = ideal_gb(&r, &inputs);
        let polys: Vec<Poly> = inputs.iter().map(|g| parse_poly(&r, g).unwrap()).collect();
        for k in 0..gb.len() {
            let c = gb.cofactors(k);
            let mut acc = Poly::zero();
            for (a, p) in c.iter().zip(&polys) {
                acc = r.add(&acc, &r.mul(a, p));
            }
            assert_eq!(acc, gb.element(k)[0]);
        }
    }

    #[test]
    fn koszul_syzygy() {
        let r = ring(&["x", "y"]);
        let gb = ideal_gb(&r, &["x", "y"]);
        let syz = gb.schreyer_syzygies();
        assert_eq!(syz.len(), 1);
        let s = &syz[0];
        let ev = r.add(&r.mul(&s[0], &gb.element(0)[0]), &r.mul(&s[1], &gb.element(1)[0]));
        assert!(ev.is_zero());
    }
}
