//! The comparison map `Λⁿ Ω¹ → HH_n`.

use std::collections::HashMap;

use serde::Serialize;

use super::diagonal::{hh_resolution, log_diagonal_ring, LogDiagonalRing};
use crate::error::{Error, Result};
use crate::exactlin;
use crate::grobner::buchberger::zero_vec;
use crate::grobner::module::{image_in_degree, FreePiece};
use crate::grobner::{syzygies_over, Budget, FPModule, ModVec, ModuleOrder, Poly, QuotientRing};
use crate::logring::{exterior_power, log_differentials, subsets, wedge_one, LogDifferentials, LogRingSpec};

/// `I_Δ / I_Δ²` as an `A`-module on the recorded generators of `I_Δ`.
pub fn conormal_module(d: &LogDiagonalRing, budget: &Budget) -> Result<FPModule> {
    let q = &d.ring.quotient;
    let cols: Vec<ModVec> = d.ideal_gens.iter().map(|g| vec![g.clone()]).collect();
    let syz = syzygies_over(q, 1, &cols, budget)?;
    let a = &d.data.a;
    let rels = syz
        .iter()
        .map(|s| {
            s.iter()
                .map(|p| a.nf(&a.ring.adopt(&d.augmentation.apply(&d.ring, &d.base, p))))
                .collect::<ModVec>()
        })
        .filter(|v: &ModVec| v.iter().any(|p| !p.is_zero()))
        .collect();
    let ar = &a.ring;
    let mut shifts: Vec<i64> = ar.weights().to_vec();
    shifts.extend(std::iter::repeat(0).take(d.ring.ngens()));
    Ok(FPModule::new(a.clone(), d.ideal_gens.len(), rels, shifts))
}

/// Columns of `ε₁` on the generators of `Ω¹`: `dx ↦ 1⊗x − x⊗1` and
/// `dlog p ↦ Σ_g c_g (u_g − 1)` for `[p] = Σ c_g g`.
fn epsilon_one(d: &LogDiagonalRing, om: &LogDifferentials) -> Vec<ModVec> {
    let ar = &d.data.a.ring;
    let fld = ar.field;
    let k = d.ideal_gens.len();
    let mut cols = Vec::with_capacity(om.module.rank);
    for i in 0..om.n_dx {
        let mut v = zero_vec(k);
        v[i] = ar.one();
        cols.push(v);
    }
    for j in 0..om.n_dlog {
        let mut v = zero_vec(k);
        for (g, c) in d.data.group.generator_images[j].iter().enumerate() {
            v[om.n_dx + g] = ar.constant(fld.from_bigint(c));
        }
        cols.push(v);
    }
    cols
}

fn apply_columns(ring: &QuotientRing, cols: &[ModVec], v: &[Poly], rank: usize) -> ModVec {
    let r = &ring.ring;
    let mut out = zero_vec(rank);
    for (g, p) in v.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        for (t, c) in cols[g].iter().enumerate() {
            if !c.is_zero() {
                out[t] = r.add(&out[t], &r.mul(p, c));
            }
        }
    }
    out.iter().map(|p| ring.nf(p)).collect()
}

/// `Λⁿ` of a map given by columns, on the lexicographic `n`-subsets.
fn wedge_columns(ring: &QuotientRing, cols: &[ModVec], src_rank: usize, tgt_rank: usize, n: usize) -> Vec<ModVec> {
    let r = &ring.ring;
    let tgt: HashMap<Vec<usize>, usize> = subsets(tgt_rank, n).into_iter().enumerate().map(|(i, s)| (s, i)).collect();
    subsets(src_rank, n)
        .iter()
        .map(|s| {
            let mut acc: Vec<(Vec<usize>, Poly)> = vec![(Vec::new(), r.one())];
            for &g in s.iter().rev() {
                let mut next: HashMap<Vec<usize>, Poly> = HashMap::new();
                for (set, c) in &acc {
                    for (t, m) in cols[g].iter().enumerate() {
                        if m.is_zero() {
                            continue;
                        }
                        if let Some((neg, out)) = wedge_one(t, set) {
                            let mut term = r.mul(c, m);
                            if neg {
                                term = r.neg(&term);
                            }
                            let e = next.entry(out).or_insert_with(Poly::zero);
                            *e = r.add(e, &term);
                        }
                    }
                }
                acc = next.into_iter().filter(|(_, p)| !p.is_zero()).collect();
            }
            let mut v = zero_vec(tgt.len());
            for (set, c) in acc {
                v[tgt[&set]] = ring.nf(&c);
            }
            v
        })
        .collect()
}

/// Ranks of `Λⁿ ε₁` in one internal degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HkrDegree {
    pub degree: i64,
    pub source: usize,
    pub target: usize,
    pub rank: usize,
    /// `dim HH_n` in this degree from the resolution backend (`n ≥ 2`).
    pub hochschild: Option<usize>,
}

impl HkrDegree {
    pub fn injective(&self) -> bool {
        self.rank == self.source
    }

    pub fn surjective(&self) -> bool {
        self.rank == self.target && self.hochschild.map_or(true, |h| h == self.target)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HkrReport {
    pub n: usize,
    /// Number of `Ω¹` relations checked to land in the relations of `I_Δ/I_Δ²`.
    pub relations_checked: usize,
    pub degrees: Vec<HkrDegree>,
}

impl HkrReport {
    pub fn is_iso(&self) -> bool {
        self.degrees.iter().all(|d| d.injective() && d.surjective())
    }
}

fn degree_ranks(src: &FPModule, tgt: &FPModule, cols: &[ModVec], d: i64) -> Result<HkrDegree> {
    let ring = &src.ring;
    let fld = ring.field();
    let ps = FreePiece::new(ring, &src.shifts, d)?;
    let pt = FreePiece::new(ring, &tgt.shifts, d)?;
    let rs = image_in_degree(ring, &ps, &src.shifts, &src.relations, d)?;
    let rt = image_in_degree(ring, &pt, &tgt.shifts, &tgt.relations, d)?;
    let rank_rt = exactlin::rank_of_vectors(fld, &rt);
    let r = &ring.ring;
    let mut all = rt;
    for (g, e) in &ps.basis {
        let mut v = zero_vec(src.rank);
        v[*g] = r.monomial(e.clone(), fld.one());
        all.push(pt.coords(ring, &apply_columns(ring, cols, &v, tgt.rank)));
    }
    Ok(HkrDegree {
        degree: d,
        source: ps.len() - exactlin::rank_of_vectors(fld, &rs),
        target: pt.len() - rank_rt,
        rank: exactlin::rank_of_vectors(fld, &all) - rank_rt,
        hochschild: None,
    })
}

/// `εₙ = Λⁿ ε₁: Λⁿ Ω¹ → Λⁿ(I_Δ/I_Δ²)`, compared degreewise. For `n ≥ 2` the
/// target is also compared with `HH_n` from the resolution backend.
pub fn hkr_map(spec: &LogRingSpec, n: usize, degrees: &[i64], budget: &Budget) -> Result<HkrReport> {
    let om = log_differentials(spec, budget)?;
    let d = log_diagonal_ring(spec, budget)?;
    let conormal = conormal_module(&d, budget)?;
    let a = om.ring().clone();
    let cols = epsilon_one(&d, &om);

    let gb = conormal.submodule_gb(ModuleOrder::Top, budget)?;
    for (k, rel) in om.module.relations.iter().enumerate() {
        let img = apply_columns(&a, &cols, rel, conormal.rank);
        if !gb.contains(&img) {
            let r = &a.ring;
            let shown: Vec<String> = rel
                .iter()
                .enumerate()
                .filter(|(_, p)| !p.is_zero())
                .map(|(g, p)| format!("({})·{}", r.format(p), om.names[g]))
                .collect();
            return Err(Error::RelationNotKilled(format!("relation {k}: {}", shown.join(" + "))));
        }
    }

    let (src, tgt, ncols) = if n == 1 {
        (om.module.clone(), conormal.clone(), cols.clone())
    } else {
        let w = wedge_columns(&a, &cols, om.module.rank, conormal.rank, n);
        (exterior_power(&om.module, n), exterior_power(&conormal, n), w)
    };
    let mut rows = degrees
        .iter()
        .map(|&deg| degree_ranks(&src, &tgt, &ncols, deg))
        .collect::<Result<Vec<_>>>()?;
    if n >= 2 {
        let hh = hh_resolution(spec, n, degrees, budget)?;
        for row in &mut rows {
            row.hochschild = hh.tables[n].get(&row.degree).copied();
        }
    }
    Ok(HkrReport {
        n,
        relations_checked: om.module.relations.len(),
        degrees: rows,
    })
}
