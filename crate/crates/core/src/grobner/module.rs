use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use super::buchberger::{unit_vec, vec_is_zero, zero_vec, Budget, ModVec, ModuleGb, ModuleOrder};
use super::ideal::QuotientRing;
use super::poly::{Exp, Poly, PolyRing};
use crate::error::{Error, Result};
use crate::exactlin::{self, SparseMatrix, SparseVec};

/// A finitely presented graded module `R^rank / <relations>` over a
/// quotient ring `R`.
#[derive(Clone, Debug)]
pub struct FPModule {
    pub ring: Arc<QuotientRing>,
    pub rank: usize,
    /// Relation columns, each of length `rank`.
    pub relations: Vec<ModVec>,
    /// Degree of each free generator.
    pub shifts: Vec<i64>,
}

/// Degree of a homogeneous vector with respect to generator shifts.
pub fn vector_degree(ring: &PolyRing, v: &[Poly], shifts: &[i64]) -> Result<Option<i64>> {
    let mut d = None;
    for (p, f) in v.iter().enumerate() {
        for (e, _) in f.terms() {
            let w = ring.exp_weight(e) + shifts[p];
            match d {
                None => d = Some(w),
                Some(x) if x != w => {
                    return Err(Error::NotGraded(format!(
                        "vector mixes degrees {x} and {w}"
                    )))
                }
                _ => {}
            }
        }
    }
    Ok(d)
}

/// Basis of the degree-`d` piece of a graded free module `⊕ R(-shift_g)`:
/// pairs (generator, standard monomial).
#[derive(Clone, Debug)]
pub struct FreePiece {
    pub basis: Vec<(usize, Exp)>,
    index: HashMap<(usize, Exp), usize>,
}

impl FreePiece {
    pub fn new(ring: &QuotientRing, shifts: &[i64], d: i64) -> Result<Self> {
        let mut basis = Vec::new();
        for (g, &s) in shifts.iter().enumerate() {
            for e in ring.standard_monomials(d - s)? {
                basis.push((g, e));
            }
        }
        let index = basis.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Ok(FreePiece { basis, index })
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Coordinates of a vector whose components are already normal forms.
    pub fn coords(&self, ring: &QuotientRing, v: &[Poly]) -> SparseVec {
        SparseVec::from_entries(
            ring.field(),
            v.iter().enumerate().flat_map(|(g, p)| {
                p.terms().iter().map(move |(e, c)| {
                    let i = *self
                        .index
                        .get(&(g, e.clone()))
                        .unwrap_or_else(|| panic!("term outside degree piece"));
                    (i, c.clone())
                })
            }),
        )
    }

    pub fn vector(&self, ring: &QuotientRing, rank: usize, v: &SparseVec) -> ModVec {
        let mut out = zero_vec(rank);
        for (i, c) in v.iter() {
            let (g, e) = &self.basis[*i];
            out[*g] = ring.ring.add(&out[*g], &ring.ring.monomial(e.clone(), c.clone()));
        }
        out
    }
}

/// Span, inside the degree-`d` piece, of all multiples of the given
/// homogeneous columns.
pub fn image_in_degree(
    ring: &QuotientRing,
    piece: &FreePiece,
    shifts: &[i64],
    columns: &[ModVec],
    d: i64,
) -> Result<Vec<SparseVec>> {
    let r = &ring.ring;
    let mut out = Vec::new();
    for c in columns {
        let Some(dc) = vector_degree(r, c, shifts)? else {
            continue;
        };
        for m in ring.standard_monomials(d - dc)? {
            let v: Vec<Poly> = c
                .iter()
                .map(|p| ring.nf(&r.mul_term(p, &m, &r.field.one())))
                .collect();
            out.push(piece.coords(ring, &v));
        }
    }
    Ok(out)
}

impl FPModule {
    pub fn new(ring: Arc<QuotientRing>, rank: usize, relations: Vec<ModVec>, shifts: Vec<i64>) -> Self {
        assert_eq!(shifts.len(), rank);
        for r in &relations {
            assert_eq!(r.len(), rank);
        }
        FPModule {
            ring,
            rank,
            relations,
            shifts,
        }
    }

    pub fn free(ring: Arc<QuotientRing>, shifts: Vec<i64>) -> Self {
        let rank = shifts.len();
        FPModule::new(ring, rank, Vec::new(), shifts)
    }

    pub fn check_homogeneous(&self) -> Result<()> {
        for c in &self.relations {
            vector_degree(&self.ring.ring, c, &self.shifts)?;
        }
        Ok(())
    }

    /// Dimension of the degree-`d` piece.
    pub fn hilbert_at(&self, d: i64) -> Result<usize> {
        let piece = FreePiece::new(&self.ring, &self.shifts, d)?;
        let rel = image_in_degree(&self.ring, &piece, &self.shifts, &self.relations, d)?;
        Ok(piece.len() - exactlin::rank_of_vectors(self.ring.field(), &rel))
    }

    /// Degree-by-degree dimensions, computed in parallel and returned in
    /// ascending degree order.
    pub fn hilbert_function(&self, degrees: &[i64]) -> Result<BTreeMap<i64, usize>> {
        self.check_homogeneous()?;
        let vals: Vec<Result<(i64, usize)>> = degrees
            .par_iter()
            .map(|&d| self.hilbert_at(d).map(|h| (d, h)))
            .collect();
        vals.into_iter().collect()
    }

    /// Normal form of a vector modulo the relations (and the ring ideal).
    pub fn submodule_gb(&self, order: ModuleOrder, budget: &Budget) -> Result<ModuleGb> {
        let fixed = fixed_part(&self.ring, self.rank);
        ModuleGb::compute(&self.ring.ring, order, self.rank, &self.relations, &fixed, false, budget)
    }
}

/// `GB(J) · e_i` for every position: a Gröbner basis of `J S^rank`.
pub fn fixed_part(ring: &QuotientRing, rank: usize) -> Vec<ModVec> {
    let gb = ring.gb();
    let mut out = Vec::new();
    for i in 0..rank {
        for g in &gb {
            let mut v = zero_vec(rank);
            v[i] = g.clone();
            out.push(v);
        }
    }
    out
}

fn reduce_vec(ring: &QuotientRing, v: &[Poly]) -> ModVec {
    v.iter().map(|p| ring.nf(p)).collect()
}

/// Generators of the syzygies over `R = S/J` of the columns (each a vector
/// of `R^rank`): all `a` in `R^m` with `Σ a_l c_l = 0` in `R^rank`.
pub fn syzygies_over(ring: &QuotientRing, rank: usize, columns: &[ModVec], budget: &Budget) -> Result<Vec<ModVec>> {
    let m = columns.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let fixed = fixed_part(ring, rank);
    let gb = ModuleGb::compute(&ring.ring, ModuleOrder::Top, rank, columns, &fixed, true, budget)?;
    let r = &ring.ring;
    let mut out: Vec<ModVec> = Vec::new();
    let push = |v: ModVec, out: &mut Vec<ModVec>| {
        let v = reduce_vec(ring, &v);
        if !vec_is_zero(&v) && !out.contains(&v) {
            out.push(v);
        }
    };
    for s in gb.schreyer_syzygies() {
        push(gb.pull_back(&s), &mut out);
    }
    for (l, c) in columns.iter().enumerate() {
        let lifted = gb.lift(c).expect("input lies in its own span");
        let mut e = unit_vec(r, m, l);
        for (k, p) in lifted.iter().enumerate() {
            e[k] = r.sub(&e[k], p);
        }
        push(e, &mut out);
    }
    for v in &fixed {
        if let Some(lifted) = gb.lift(v) {
            let neg: ModVec = lifted.iter().map(|p| r.neg(p)).collect();
            push(neg, &mut out);
        }
    }
    Ok(out)
}

/// Syzygies by the elimination method: a Gröbner basis of the columns
/// stacked over the identity, in position-over-term order with the
/// original positions highest. Independent of the Schreyer route.
pub fn syzygies_by_elimination(
    ring: &QuotientRing,
    rank: usize,
    columns: &[ModVec],
    budget: &Budget,
) -> Result<Vec<ModVec>> {
    let m = columns.len();
    let r = &ring.ring;
    let total = rank + m;
    let stacked: Vec<ModVec> = columns
        .iter()
        .enumerate()
        .map(|(l, c)| {
            let mut v = c.clone();
            v.extend(unit_vec(r, m, l));
            v
        })
        .collect();
    let mut fixed = Vec::new();
    for g in ring.gb() {
        for i in 0..rank {
            let mut v = zero_vec(total);
            v[i] = g.clone();
            fixed.push(v);
        }
    }
    let ranks: Vec<usize> = (0..total).map(|p| if p < rank { m + p } else { p - rank }).collect();
    let gb = ModuleGb::compute(r, ModuleOrder::Pot(ranks), total, &stacked, &fixed, false, budget)?;
    let mut out = Vec::new();
    for v in gb.elements() {
        if vec_is_zero(&v[..rank]) {
            let s = reduce_vec(ring, &v[rank..]);
            if !vec_is_zero(&s) && !out.contains(&s) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// A free resolution `F_len -> ... -> F_1 -> F_0` over a quotient ring.
#[derive(Clone, Debug)]
pub struct FreeResolution {
    pub ring: Arc<QuotientRing>,
    /// `shifts[i]` are the generator degrees of `F_i`.
    pub shifts: Vec<Vec<i64>>,
    /// `maps[i]` holds the columns of `∂_{i+1}: F_{i+1} -> F_i`.
    pub maps: Vec<Vec<ModVec>>,
}

impl FreeResolution {
    pub fn ranks(&self) -> Vec<usize> {
        self.shifts.iter().map(|s| s.len()).collect()
    }

    pub fn length(&self) -> usize {
        self.maps.len()
    }

    /// `∂_i ∂_{i+1} = 0` in `R`.
    pub fn squares_to_zero(&self) -> bool {
        let r = &self.ring.ring;
        for i in 1..self.maps.len() {
            for col in &self.maps[i] {
                let mut acc = zero_vec(self.shifts[i - 1].len());
                for (j, a) in col.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (k, b) in self.maps[i - 1][j].iter().enumerate() {
                        acc[k] = r.add(&acc[k], &r.mul(a, b));
                    }
                }
                if !vec_is_zero(&reduce_vec(&self.ring, &acc)) {
                    return false;
                }
            }
        }
        true
    }

    /// Exactness at `F_i` for `1 <= i < length`: every syzygy of `∂_i`
    /// (computed independently by elimination) lies in the image of
    /// `∂_{i+1}`, decided by module membership.
    pub fn check_exactness(&self, budget: &Budget) -> Result<Vec<bool>> {
        let mut verdicts = Vec::new();
        for i in 1..self.maps.len() {
            let rank = self.shifts[i - 1].len();
            let kernel = syzygies_by_elimination(&self.ring, rank, &self.maps[i - 1], budget)?;
            let n = self.shifts[i].len();
            let fixed = fixed_part(&self.ring, n);
            let image = ModuleGb::compute(&self.ring.ring, ModuleOrder::Top, n, &self.maps[i], &fixed, false, budget)?;
            verdicts.push(kernel.iter().all(|k| image.contains(k)));
        }
        Ok(verdicts)
    }

    /// Applies a ring map `R -> T` entrywise (images of the variables of `R`
    /// as polynomials of `T`).
    pub fn tensor(&self, target: &Arc<QuotientRing>, images: &[Poly]) -> FreeComplex {
        let maps = self
            .maps
            .iter()
            .map(|cols| {
                cols.iter()
                    .map(|c| {
                        c.iter()
                            .map(|p| target.nf(&self.ring.ring.substitute(p, &target.ring, images)))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        FreeComplex {
            ring: target.clone(),
            shifts: self.shifts.clone(),
            maps,
        }
    }
}

fn invertible_constant(p: &Poly) -> bool {
    !p.is_zero() && p.is_constant()
}

/// Cancels every constant entry of the differentials (Gaussian elimination
/// of complexes). The result is homotopy equivalent to the input.
fn prune(ring: &QuotientRing, shifts: &mut [Vec<i64>], maps: &mut [Vec<ModVec>]) {
    let r = &ring.ring;
    let f = &r.field;
    loop {
        let mut found = None;
        'outer: for (k, cols) in maps.iter().enumerate() {
            for (c, col) in cols.iter().enumerate() {
                for (row, a) in col.iter().enumerate() {
                    if invertible_constant(a) {
                        found = Some((k, c, row));
                        break 'outer;
                    }
                }
            }
        }
        let Some((k, c, row)) = found else {
            return;
        };
        let pivot_col = maps[k][c].clone();
        let e_inv = f.inv(&pivot_col[row].constant_coef());
        let mut new_cols = Vec::new();
        for (j, col) in maps[k].iter().enumerate() {
            if j == c {
                continue;
            }
            let a = &col[row];
            let mut v = col.clone();
            if !a.is_zero() {
                let factor = r.scale(a, &f.neg(&e_inv));
                for (i, p) in pivot_col.iter().enumerate() {
                    v[i] = ring.nf(&r.add(&v[i], &r.mul(&factor, p)));
                }
            }
            v.remove(row);
            new_cols.push(v);
        }
        maps[k] = new_cols;
        if k + 1 < maps.len() {
            for col in maps[k + 1].iter_mut() {
                col.remove(c);
            }
        }
        if k > 0 {
            maps[k - 1].remove(row);
        }
        shifts[k + 1].remove(c);
        shifts[k].remove(row);
    }
}

/// Resolves `M` up to `F_len`. Constant entries are cancelled after each
/// step, so ranks are usually close to minimal.
pub fn free_resolution(m: &FPModule, len: usize, budget: &Budget) -> Result<FreeResolution> {
    let ring = &m.ring;
    let r = &ring.ring;
    let mut shifts = vec![m.shifts.clone()];
    let mut maps: Vec<Vec<ModVec>> = Vec::new();
    let mut current: Vec<ModVec> = m
        .relations
        .iter()
        .map(|c| reduce_vec(ring, c))
        .filter(|c| !vec_is_zero(c))
        .collect();
    for step in 0..len {
        let mut col_shifts = Vec::new();
        for c in &current {
            col_shifts.push(vector_degree(r, c, &shifts[step])?.expect("nonzero column"));
        }
        shifts.push(col_shifts);
        maps.push(current);
        prune(ring, &mut shifts, &mut maps);
        let last = maps.last().unwrap();
        if last.is_empty() {
            break;
        }
        if step + 1 == len {
            break;
        }
        let rank = shifts[step].len();
        current = syzygies_over(ring, rank, last, budget)?;
    }
    while maps.last().map_or(false, |c| c.is_empty()) && maps.len() > 0 {
        maps.pop();
        shifts.pop();
    }
    Ok(FreeResolution {
        ring: ring.clone(),
        shifts,
        maps,
    })
}

/// A complex of graded free modules over a quotient ring with degreewise
/// finite pieces.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    pub ring: Arc<QuotientRing>,
    pub shifts: Vec<Vec<i64>>,
    pub maps: Vec<Vec<ModVec>>,
}

impl FreeComplex {
    fn map_in_degree(&self, i: usize, d: i64, src: &FreePiece, dst: &FreePiece) -> SparseMatrix {
        let ring = &self.ring;
        let r = &ring.ring;
        let rank = self.shifts[i].len();
        let cols: Vec<SparseVec> = src
            .basis
            .iter()
            .map(|(g, e)| {
                let col = &self.maps[i][*g];
                let v: Vec<Poly> = (0..rank)
                    .map(|k| ring.nf(&r.mul_term(&col[k], e, &r.field.one())))
                    .collect();
                dst.coords(ring, &v)
            })
            .collect();
        let _ = d;
        SparseMatrix::from_columns(ring.field(), dst.len(), &cols)
    }

    /// Homology dimensions `H_i` in degree `d` for `0 <= i <= top`, where
    /// `top` is one less than the number of free modules.
    pub fn homology_in_degree(&self, d: i64, top: usize) -> Result<Vec<usize>> {
        let f = self.ring.field();
        let nmod = self.shifts.len();
        let pieces: Vec<FreePiece> = (0..nmod)
            .map(|i| FreePiece::new(&self.ring, &self.shifts[i], d))
            .collect::<Result<_>>()?;
        let mut ranks = vec![0usize; nmod + 1];
        for i in 0..self.maps.len() {
            let m = self.map_in_degree(i, d, &pieces[i + 1], &pieces[i]);
            ranks[i + 1] = exactlin::rank(f, &m);
        }
        Ok((0..=top)
            .map(|i| {
                if i >= nmod {
                    0
                } else {
                    pieces[i].len() - ranks[i] - ranks[i + 1]
                }
            })
            .collect())
    }

    /// `out[i][d]` = dim `H_i` in degree `d`, for `i <= top`.
    pub fn homology_table(&self, degrees: &[i64], top: usize) -> Result<Vec<BTreeMap<i64, usize>>> {
        let per_degree: Vec<Result<(i64, Vec<usize>)>> = degrees
            .par_iter()
            .map(|&d| self.homology_in_degree(d, top).map(|h| (d, h)))
            .collect();
        let mut out = vec![BTreeMap::new(); top + 1];
        for item in per_degree {
            let (d, h) = item?;
            for (i, v) in h.into_iter().enumerate() {
                out[i].insert(d, v);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::ScalarField;
    use crate::grobner::parse::parse_poly;
    use crate::grobner::poly::MonomialOrder;

    fn quotient(names: &[&str], weights: Vec<i64>, inverted: &[&str], rel: &[&str]) -> Arc<QuotientRing> {
        let r = PolyRing::with_options(
            ScalarField::Rationals,
            names.iter().map(|s| s.to_string()).collect(),
            &inverted.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            MonomialOrder::DegRevLex,
            Some(weights),
        )
        .unwrap();
        let rels = rel.iter().map(|s| parse_poly(&r, s).unwrap()).collect();
        QuotientRing::new(r, rels, &Budget::default()).unwrap()
    }

    #[test]
    fn residue_field_of_line() {
        let q = quotient(&["x"], vec![1], &[], &[]);
        let m = FPModule::new(q.clone(), 1, vec![vec![q.ring.var(0)]], vec![0]);
        let res = free_resolution(&m, 3, &Budget::default()).unwrap();
        assert_eq!(res.ranks(), vec![1, 1]);
    }

    #[test]
    fn laurent_point_resolution() {
        let q = quotient(&["u"], vec![0], &["u"], &[]);
        let gen = parse_poly(&q.ring, "u - 1").unwrap();
        let m = FPModule::new(q.clone(), 1, vec![vec![gen]], vec![0]);
        let res = free_resolution(&m, 3, &Budget::default()).unwrap();
        assert_eq!(res.ranks(), vec![1, 1]);
    }

    #[test]
    fn koszul_on_plane() {
        let q = quotient(&["x", "y"], vec![1, 1], &[], &[]);
        let m = FPModule::new(q.clone(), 1, vec![vec![q.ring.var(0)], vec![q.ring.var(1)]], vec![0]);
        let res = free_resolution(&m, 4, &Budget::default()).unwrap();
        assert_eq!(res.ranks(), vec![1, 2, 1]);
        assert!(res.squares_to_zero());
        assert!(res.check_exactness(&Budget::default()).unwrap().iter().all(|&b| b));
    }

    #[test]
    fn node_hilbert() {
        let q = quotient(&["x", "y"], vec![1, 1], &[], &["x*y"]);
        let m = FPModule::free(q, vec![0]);
        let h = m.hilbert_function(&[0, 1, 2, 3]).unwrap();
        assert_eq!(h.values().copied().collect::<Vec<_>>(), vec![1, 2, 2, 2]);
    }

    #[test]
    fn both_syzygy_routes_agree_on_span() {
        let q = quotient(&["x", "y"], vec![1, 1], &[], &["x*y"]);
        let cols = vec![vec![q.ring.var(0)], vec![q.ring.var(1)]];
        let a = syzygies_over(&q, 1, &cols, &Budget::default()).unwrap();
        let b = syzygies_by_elimination(&q, 1, &cols, &Budget::default()).unwrap();
        let fixed = fixed_part(&q, 2);
        let ga = ModuleGb::compute(&q.ring, ModuleOrder::Top, 2, &a, &fixed, false, &Budget::default()).unwrap();
        let gb = ModuleGb::compute(&q.ring, ModuleOrder::Top, 2, &b, &fixed, false, &Budget::default()).unwrap();
        assert!(b.iter().all(|v| ga.contains(v)));
        assert!(a.iter().all(|v| gb.contains(v)));
    }
}
