use std::collections::BTreeMap;
use std::ops::Range;

use super::CyclicModule;
use crate::error::{Error, Result};
use crate::exactlin::{graded_betti, SparseMatrix, SparseVec};

/// Total complex of the cyclic bicomplex restricted to a range of columns.
///
/// Column `p` holds `C_q` in total degree `p + q`, with vertical `b` for even
/// `p` and `−b'` for odd `p`; the horizontal maps are `1 − t` out of odd
/// columns and `N` out of even ones.
#[derive(Clone, Debug)]
pub struct CyclicBicomplex {
    pub columns: Range<usize>,
    /// `blocks[m]`: `(p, offset)` for each column meeting total degree `m`.
    pub blocks: Vec<Vec<(usize, usize)>>,
    pub dims: Vec<usize>,
    /// `diffs[m]: Tot_m → Tot_{m-1}`; `diffs[0]` is the zero map.
    pub diffs: Vec<SparseMatrix>,
    pub degrees: Vec<Vec<i64>>,
}

impl CyclicBicomplex {
    /// Total degrees `0..=top`; needs `top ≤ cm.top()`.
    pub fn new(cm: &CyclicModule, columns: Range<usize>, top: usize) -> Self {
        assert!(top <= cm.top(), "levels up to {top} are needed");
        let f = cm.field();
        let mut blocks = Vec::new();
        let mut dims = Vec::new();
        let mut degrees = Vec::new();
        for m in 0..=top {
            let mut off = 0;
            let mut bl = Vec::new();
            let mut deg = Vec::new();
            for p in columns.clone().filter(|&p| p <= m) {
                bl.push((p, off));
                off += cm.dim(m - p);
                deg.extend(cm.levels.degrees(m - p));
            }
            blocks.push(bl);
            dims.push(off);
            degrees.push(deg);
        }
        let mut diffs = vec![SparseMatrix::zero(0, dims[0])];
        for m in 1..=top {
            let mut entries = Vec::new();
            let target = |p: usize| blocks[m - 1].iter().find(|b| b.0 == p).map(|b| b.1);
            for &(p, c0) in &blocks[m] {
                let q = m - p;
                if q >= 1 {
                    let r0 = target(p).expect("column present one degree lower");
                    let v = if p % 2 == 0 {
                        cm.b[q].clone()
                    } else {
                        cm.b_prime[q].scale(&f, &f.from_i64(-1))
                    };
                    v.push_block(r0, c0, &mut entries);
                }
                if p >= 1 {
                    if let Some(r0) = target(p - 1) {
                        let h = if p % 2 == 1 {
                            SparseMatrix::identity(cm.dim(q)).sub(&f, &cm.t[q])
                        } else {
                            cm.norm[q].clone()
                        };
                        h.push_block(r0, c0, &mut entries);
                    }
                }
            }
            diffs.push(SparseMatrix::from_triplets(&f, dims[m - 1], dims[m], entries));
        }
        CyclicBicomplex {
            columns,
            blocks,
            dims,
            diffs,
            degrees,
        }
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn squares_to_zero(&self, cm: &CyclicModule) -> bool {
        let f = cm.field();
        (2..=self.top()).all(|m| self.diffs[m - 1].mul(&f, &self.diffs[m]).is_zero())
    }

    pub fn offset(&self, m: usize, p: usize) -> Option<usize> {
        self.blocks[m].iter().find(|b| b.0 == p).map(|b| b.1)
    }

    /// The `C_{m-p}` component of `v ∈ Tot_m`.
    pub fn component(&self, cm: &CyclicModule, m: usize, p: usize, v: &SparseVec) -> SparseVec {
        match self.offset(m, p) {
            Some(o) => {
                let len = cm.dim(m - p);
                SparseVec::from_sorted(
                    v.iter()
                        .filter(|(i, _)| *i >= o && *i < o + len)
                        .map(|(i, c)| (i - o, c.clone()))
                        .collect(),
                )
            }
            None => SparseVec::new(),
        }
    }

    /// Places `x ∈ C_{m-p}` in column `p` of `Tot_m`.
    pub fn embed(&self, m: usize, p: usize, x: &SparseVec) -> SparseVec {
        let o = self.offset(m, p).expect("column present");
        SparseVec::from_sorted(x.iter().map(|(i, c)| (i + o, c.clone())).collect())
    }

    /// Homology per internal degree for total degrees `0..top`.
    pub fn homology(&self, cm: &CyclicModule) -> Vec<BTreeMap<i64, usize>> {
        graded_betti(&cm.field(), &self.degrees, &self.diffs, self.top() - 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicHomology {
    pub width: usize,
    pub tables: Vec<BTreeMap<i64, usize>>,
}

impl CyclicHomology {
    pub fn dims(&self) -> Vec<usize> {
        self.tables.iter().map(|t| t.values().sum()).collect()
    }
}

/// `HC_0..HC_{m_max}` from the bicomplex truncated to `width` columns, checked
/// against `width + 1`. Needs levels up to `m_max + 1`.
pub fn hc(cm: &CyclicModule, m_max: usize, width: usize) -> Result<CyclicHomology> {
    if width < m_max + 2 {
        return Err(Error::CheckFailed(format!("width {width} is below {}", m_max + 2)));
    }
    if cm.top() < m_max + 1 {
        return Err(Error::CheckFailed(format!("levels up to {} are needed", m_max + 1)));
    }
    let run = |w: usize| {
        let tot = CyclicBicomplex::new(cm, 0..w, m_max + 1);
        if !tot.squares_to_zero(cm) {
            return Err(Error::CompositionNonzero);
        }
        Ok(tot.homology(cm))
    };
    let tables = run(width)?;
    let wider = run(width + 1)?;
    if tables != wider {
        let m = (0..tables.len()).find(|&m| tables[m] != wider[m]).unwrap_or(0);
        return Err(Error::UnstableTruncation(format!("HC_{m} differs at widths {width} and {}", width + 1)));
    }
    Ok(CyclicHomology { width, tables })
}

#[cfg(test)]
mod tests {
    use super::super::tests::*;
    use super::super::build_cyclic;
    use super::*;
    use crate::exactlin::ScalarField;
    use crate::grobner::Budget;
    use crate::logring::fixtures::*;

    fn dims(s: &crate::logring::LogRingSpec, m: usize) -> Vec<usize> {
        let cm = build_cyclic(s, m + 1, &Budget::default()).unwrap();
        hc(&cm, m, m + 2).unwrap().dims()
    }

    #[test]
    fn point() {
        assert_eq!(dims(&super::super::tests::point(), 4), vec![1, 0, 1, 0, 1]);
    }

    #[test]
    fn two_points_hc() {
        assert_eq!(dims(&two_points(), 4), vec![2, 0, 2, 0, 2]);
    }

    #[test]
    fn kummer_f2_hc() {
        let d = dims(&kummer(ScalarField::prime(2).unwrap(), 2), 3);
        assert_eq!(d.len(), 4);
    }

    #[test]
    fn narrow_width_rejected() {
        let cm = build_cyclic(&dual(), 3, &Budget::default()).unwrap();
        assert!(hc(&cm, 2, 3).is_err());
    }

    #[test]
    fn total_differential_squares_to_zero() {
        let cm = build_cyclic(&dual(), 4, &Budget::default()).unwrap();
        assert!(CyclicBicomplex::new(&cm, 0..6, 4).squares_to_zero(&cm));
    }
}
