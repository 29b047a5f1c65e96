//! `⋯ → HH_m →I HC_m →S HC_{m-2} →B HH_{m-1} → ⋯` from the inclusion of the
//! first two columns into the cyclic bicomplex.

use serde::Serialize;

use super::bicomplex::CyclicBicomplex;
use super::CyclicModule;
use crate::error::{Error, Result};
use crate::exactlin::{complex_homology, rank_of_vectors, Homology, SparseMatrix, SparseVec};

/// One position of the long exact sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SbiSpot {
    pub spot: String,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
}

impl SbiSpot {
    pub fn exact(&self) -> bool {
        self.rank_in + self.rank_out == self.dim
    }
}

/// Matrices of `I`, `S`, `B` in homology bases, indexed by `m`.
#[derive(Clone, Debug)]
pub struct SbiMaps {
    pub hh: Vec<usize>,
    pub hc: Vec<usize>,
    pub i: Vec<SparseMatrix>,
    /// `s[m]: HC_m → HC_{m-2}`, empty for `m < 2`.
    pub s: Vec<SparseMatrix>,
    /// `b[m]: HC_{m-2} → HH_{m-1}`, empty for `m < 2`.
    pub b: Vec<SparseMatrix>,
    pub spots: Vec<SbiSpot>,
}

impl SbiMaps {
    pub fn exact(&self) -> bool {
        self.spots.iter().all(SbiSpot::exact)
    }
}

fn classify_all(cm: &CyclicModule, h: &Homology, images: Vec<SparseVec>) -> Result<SparseMatrix> {
    let f = cm.field();
    let cols = images
        .iter()
        .map(|v| h.classify(&f, v).ok_or_else(|| Error::CheckFailed("image is not a cycle".into())))
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseMatrix::from_columns(&f, h.dim, &cols))
}

fn rank(cm: &CyclicModule, m: &SparseMatrix) -> usize {
    rank_of_vectors(&cm.field(), &m.columns())
}

/// Needs levels up to `m_max + 2`.
pub fn sbi_sequence(cm: &CyclicModule, m_max: usize) -> Result<SbiMaps> {
    if cm.top() < m_max + 2 {
        return Err(Error::CheckFailed(format!("levels up to {} are needed", m_max + 2)));
    }
    let f = cm.field();
    let top = m_max + 2;
    let tot = CyclicBicomplex::new(cm, 0..top + 1, top);
    let k = CyclicBicomplex::new(cm, 0..2, top);
    let homology = |c: &CyclicBicomplex, m: usize| complex_homology(&f, &c.diffs[m + 1], &c.diffs[m]);
    let hk = (0..=m_max + 1).map(|m| homology(&k, m)).collect::<Result<Vec<_>>>()?;
    let ht = (0..=m_max + 1).map(|m| homology(&tot, m)).collect::<Result<Vec<_>>>()?;

    let include = |m: usize, z: &SparseVec| {
        let mut v = SparseVec::new();
        for p in 0..2.min(m + 1) {
            v = v.add(&f, &tot.embed(m, p, &k.component(cm, m, p, z)));
        }
        v
    };
    let shift_down = |m: usize, z: &SparseVec| {
        let mut v = SparseVec::new();
        for p in 2..=m {
            v = v.add(&f, &tot.embed(m - 2, p - 2, &tot.component(cm, m, p, z)));
        }
        v
    };
    let connect = |m: usize, y: &SparseVec| -> Result<SparseVec> {
        let mut lifted = SparseVec::new();
        for p in 0..=m - 2 {
            lifted = lifted.add(&f, &tot.embed(m, p + 2, &tot.component(cm, m - 2, p, y)));
        }
        let dy = tot.diffs[m].apply(&f, &lifted);
        let mut out = SparseVec::new();
        for p in 0..=m - 1 {
            let c = tot.component(cm, m - 1, p, &dy);
            if p < 2 {
                out = out.add(&f, &k.embed(m - 1, p, &c));
            } else if !c.is_zero() {
                return Err(Error::CheckFailed("connecting map leaves the first two columns".into()));
            }
        }
        Ok(out)
    };

    let mut i_maps = Vec::new();
    let mut s_maps = Vec::new();
    let mut b_maps = Vec::new();
    for m in 0..=m_max + 1 {
        i_maps.push(classify_all(cm, &ht[m], hk[m].basis.iter().map(|z| include(m, z)).collect())?);
        if m >= 2 {
            s_maps.push(classify_all(cm, &ht[m - 2], ht[m].basis.iter().map(|z| shift_down(m, z)).collect())?);
            let imgs = ht[m - 2].basis.iter().map(|y| connect(m, y)).collect::<Result<Vec<_>>>()?;
            b_maps.push(classify_all(cm, &hk[m - 1], imgs)?);
        } else {
            s_maps.push(SparseMatrix::zero(0, ht[m].dim));
            b_maps.push(SparseMatrix::zero(0, 0));
        }
    }

    let mut spots = Vec::new();
    for m in 0..=m_max {
        spots.push(SbiSpot {
            spot: format!("HH_{m}"),
            dim: hk[m].dim,
            rank_in: if m + 1 >= 2 { rank(cm, &b_maps[m + 1]) } else { 0 },
            rank_out: rank(cm, &i_maps[m]),
        });
        spots.push(SbiSpot {
            spot: format!("HC_{m}"),
            dim: ht[m].dim,
            rank_in: rank(cm, &i_maps[m]),
            rank_out: rank(cm, &s_maps[m]),
        });
        if m >= 2 {
            spots.push(SbiSpot {
                spot: format!("HC_{} after S", m - 2),
                dim: ht[m - 2].dim,
                rank_in: rank(cm, &s_maps[m]),
                rank_out: rank(cm, &b_maps[m]),
            });
        }
    }
    Ok(SbiMaps {
        hh: hk[..=m_max].iter().map(|h| h.dim).collect(),
        hc: ht[..=m_max].iter().map(|h| h.dim).collect(),
        i: i_maps,
        s: s_maps,
        b: b_maps,
        spots,
    })
}

#[cfg(test)]
mod tests {
    use super::super::build_cyclic;
    use super::super::tests::*;
    use super::*;
    use crate::exactlin::ScalarField;
    use crate::grobner::Budget;
    use crate::logring::fixtures::*;

    fn sbi(s: &crate::logring::LogRingSpec, m: usize) -> SbiMaps {
        let cm = build_cyclic(s, m + 2, &Budget::default()).unwrap();
        sbi_sequence(&cm, m).unwrap()
    }

    #[test]
    fn point_s_is_iso() {
        let r = sbi(&point(), 4);
        assert!(r.exact(), "{:?}", r.spots);
        assert_eq!(r.hh, vec![1, 0, 0, 0, 0]);
        assert_eq!(rank_of_vectors(&ScalarField::Rationals, &r.s[2].columns()), 1);
    }

    #[test]
    fn dual_numbers_exact() {
        let r = sbi(&dual(), 4);
        assert!(r.exact(), "{:?}", r.spots);
        assert_eq!(r.hh, vec![2, 1, 1, 1, 1]);
    }

    #[test]
    fn two_points_b_vanishes() {
        let r = sbi(&two_points(), 4);
        assert!(r.exact());
        assert!(r.b.iter().all(|m| m.is_zero()));
        assert_eq!(r.hc, vec![2, 0, 2, 0, 2]);
    }

    #[test]
    fn kummer_f2_exact() {
        let r = sbi(&kummer(ScalarField::prime(2).unwrap(), 2), 4);
        assert!(r.exact(), "{:?}", r.spots);
        assert_eq!(r.hh, vec![1, 1, 1, 1, 1]);
    }
}
