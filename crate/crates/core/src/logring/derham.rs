use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use super::omega::{log_differentials, subsets, wedge_one, LogDifferentials};
use super::LogRingSpec;
use crate::error::{Error, Result};
use crate::exactlin::{complex_homology, SparseMatrix};
use crate::grobner::buchberger::{unit_vec, vec_is_zero, zero_vec};
use crate::grobner::module::{fixed_part, FreePiece};
use crate::grobner::{Budget, ModVec, ModuleGb, ModuleOrder, QuotientRing};

/// A free basis of `Ω¹` chosen among its distinguished generators, with every
/// generator written in that basis.
#[derive(Clone, Debug)]
pub struct Framing {
    pub basis: Vec<usize>,
    pub names: Vec<String>,
    pub degrees: Vec<i64>,
    /// Frame coordinates of each distinguished generator of `Ω¹`.
    pub images: Vec<ModVec>,
}

impl Framing {
    /// Eliminates `dx` generators first (highest in a position-over-term
    /// order), keeping low-index `dlog` generators as the frame.
    pub fn detect(o: &LogDifferentials, budget: &Budget) -> Result<Framing> {
        let a = o.ring();
        let m = &o.module;
        let ranks: Vec<usize> = (0..m.rank)
            .map(|g| if g < o.n_dx { o.n_dlog + g } else { g - o.n_dx })
            .collect();
        let gb = ModuleGb::compute(
            &a.ring,
            ModuleOrder::Pot(ranks),
            m.rank,
            &m.relations,
            &fixed_part(a, m.rank),
            false,
            budget,
        )?;
        let mut eliminated = vec![false; m.rank];
        for k in 0..gb.len() {
            let (p, e) = gb.lead(k);
            if e.iter().all(|&x| x == 0) {
                eliminated[p] = true;
            }
        }
        let basis: Vec<usize> = (0..m.rank).filter(|&g| !eliminated[g]).collect();
        for k in 0..gb.len() {
            let (p, e) = gb.lead(k);
            if !eliminated[p] && a.is_standard(e) {
                return Err(Error::NotFramed(format!(
                    "generator `{}` satisfies a relation not coming from the ring",
                    o.names[p]
                )));
            }
        }
        let images = (0..m.rank)
            .map(|g| {
                let nf = gb.normal_form(&unit_vec(&a.ring, m.rank, g));
                basis.iter().map(|&b| nf[b].clone()).collect()
            })
            .collect();
        Ok(Framing {
            names: basis.iter().map(|&b| o.names[b].clone()).collect(),
            degrees: basis.iter().map(|&b| m.shifts[b]).collect(),
            basis,
            images,
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

/// `Ω⁰ → Ω¹ → … → Ω^top` on a framed `Ω¹`, with `Ω^n` free on the
/// `n`-subsets of the frame.
#[derive(Clone, Debug)]
pub struct DeRhamComplex {
    pub ring: Arc<QuotientRing>,
    pub framing: Framing,
    pub top: usize,
    /// Frame coordinates of `d x_i` for each ring variable.
    grad: Vec<ModVec>,
    subsets: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

pub fn log_de_rham(spec: &LogRingSpec, top: usize, budget: &Budget) -> Result<DeRhamComplex> {
    let o = log_differentials(spec, budget)?;
    let framing = Framing::detect(&o, budget)?;
    Ok(DeRhamComplex::new(o.ring().clone(), framing, o.n_dx, top))
}

impl DeRhamComplex {
    pub fn new(ring: Arc<QuotientRing>, framing: Framing, n_dx: usize, top: usize) -> Self {
        let grad = framing.images[..n_dx].to_vec();
        let r = framing.rank();
        let subsets: Vec<Vec<Vec<usize>>> = (0..=top + 1).map(|n| subsets(r, n)).collect();
        let index = subsets
            .iter()
            .map(|ss| ss.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();
        DeRhamComplex {
            ring,
            framing,
            top,
            grad,
            subsets,
            index,
        }
    }

    pub fn rank(&self, n: usize) -> usize {
        self.subsets.get(n).map_or(0, |s| s.len())
    }

    pub fn shifts(&self, n: usize) -> Vec<i64> {
        self.subsets[n]
            .iter()
            .map(|s| s.iter().map(|&b| self.framing.degrees[b]).sum())
            .collect()
    }

    /// `d` on an element of `Ω^n` given by coefficients on the `n`-subsets.
    pub fn apply(&self, n: usize, v: &[crate::grobner::Poly]) -> ModVec {
        let a = &self.ring;
        let r = &a.ring;
        let mut out = zero_vec(self.rank(n + 1));
        for (s, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let set = &self.subsets[n][s];
            for (i, g) in self.grad.iter().enumerate() {
                let dc = r.derivative(c, i);
                if dc.is_zero() {
                    continue;
                }
                for (b, gb) in g.iter().enumerate() {
                    if gb.is_zero() {
                        continue;
                    }
                    if let Some((neg, t)) = wedge_one(b, set) {
                        let k = self.index[n + 1][&t];
                        let term = r.mul(&dc, gb);
                        out[k] = if neg { r.sub(&out[k], &term) } else { r.add(&out[k], &term) };
                    }
                }
            }
        }
        out.iter().map(|p| a.nf(p)).collect()
    }

    /// `d(d x_i) = 0` in `Ω²` for every ring variable; frame generators are
    /// closed by construction.
    pub fn check_d_squared(&self) -> bool {
        self.grad.iter().all(|g| vec_is_zero(&self.apply(1, g)))
    }

    pub fn piece(&self, n: usize, d: i64) -> Result<FreePiece> {
        FreePiece::new(&self.ring, &self.shifts(n), d)
    }

    /// Matrix of `d: Ω^n_d → Ω^{n+1}_d`.
    pub fn differential(&self, n: usize, d: i64) -> Result<SparseMatrix> {
        let src = self.piece(n, d)?;
        let dst = self.piece(n + 1, d)?;
        let r = &self.ring.ring;
        let rank = self.rank(n);
        let cols: Vec<_> = src
            .basis
            .iter()
            .map(|(g, e)| {
                let mut v = zero_vec(rank);
                v[*g] = r.monomial(e.clone(), r.field.one());
                dst.coords(&self.ring, &self.apply(n, &v))
            })
            .collect();
        Ok(SparseMatrix::from_columns(&r.field, dst.len(), &cols))
    }

    /// `dim H^m` in internal degree `d`.
    pub fn cohomology(&self, m: usize, d: i64) -> Result<usize> {
        let g = self.differential(m, d)?;
        let f = if m == 0 {
            SparseMatrix::zero(g.cols(), 0)
        } else {
            self.differential(m - 1, d)?
        };
        Ok(complex_homology(&self.ring.ring.field, &f, &g)?.dim)
    }

    /// `dim Ω^m_d / dΩ^{m-1}_d`.
    pub fn cokernel_of_d(&self, m: usize, d: i64) -> Result<usize> {
        let dim = self.piece(m, d)?.len();
        if m == 0 {
            return Ok(dim);
        }
        let f = self.differential(m - 1, d)?;
        Ok(dim - crate::exactlin::rank(&self.ring.ring.field, &f))
    }
}

pub fn de_rham_cohomology(
    spec: &LogRingSpec,
    m: usize,
    degrees: &[i64],
    budget: &Budget,
) -> Result<BTreeMap<i64, usize>> {
    let c = log_de_rham(spec, m + 1, budget)?;
    let vals: Vec<Result<(i64, usize)>> = degrees
        .par_iter()
        .map(|&d| c.cohomology(m, d).map(|h| (d, h)))
        .collect();
    vals.into_iter().collect()
}
