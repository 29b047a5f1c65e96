//! A dense cross-check of `HH` and `HC`.
//!
//! `HH` is recomputed from the unnormalized level complex with plain dense
//! elimination and compared with the Gröbner resolution backend. `HC` comes
//! from Connes' quotient complex `C/(1 − t)` in characteristic zero and from a
//! dense copy of the cyclic bicomplex otherwise, and is compared with the
//! sparse bicomplex (and with the de Rham route when it applies).

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cyclic::{build_cyclic, hc, hc_de_rham};
use crate::error::{Error, Result};
use crate::exactlin::{Scalar, ScalarField, SparseMatrix};
use crate::grobner::Budget;
use crate::hochschild::{hh_resolution, FiniteLevels};
use crate::logring::LogRingSpec;

type Dense = Vec<Vec<Scalar>>;

/// Rank by Gaussian elimination on a dense copy.
pub fn dense_rank(f: &ScalarField, mut m: Dense) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = f.inv(&m[rank][c]);
        let pivot: Vec<Scalar> = m[rank].iter().map(|x| f.mul(x, &inv)).collect();
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let k = m[r][c].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot).skip(c) {
                    *x = f.sub(x, &f.mul(&k, y));
                }
            }
        }
        m[rank] = pivot;
        rank += 1;
    }
    rank
}

fn block(m: &SparseMatrix, rows: &[usize], cols: &[usize]) -> Dense {
    rows.iter().map(|&r| cols.iter().map(|&c| m.get(r, c)).collect()).collect()
}

fn hstack(a: Dense, b: Dense) -> Dense {
    a.into_iter().zip(b).map(|(mut x, y)| {
        x.extend(y);
        x
    }).collect()
}

struct DenseLevels<'a> {
    fl: &'a FiniteLevels,
    by_degree: Vec<BTreeMap<i64, Vec<usize>>>,
}

impl<'a> DenseLevels<'a> {
    fn new(fl: &'a FiniteLevels) -> Self {
        let by_degree = (0..=fl.top())
            .map(|n| {
                let mut m: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
                for (i, d) in fl.degrees(n).into_iter().enumerate() {
                    m.entry(d).or_default().push(i);
                }
                m
            })
            .collect();
        DenseLevels { fl, by_degree }
    }

    fn idx(&self, n: usize, d: i64) -> Vec<usize> {
        self.by_degree[n].get(&d).cloned().unwrap_or_default()
    }

    fn degrees(&self) -> BTreeSet<i64> {
        self.by_degree.iter().flat_map(|m| m.keys().copied()).collect()
    }

    fn signed_sum(&self, n: usize, faces: usize) -> SparseMatrix {
        let f = &self.fl.field;
        let mut acc = SparseMatrix::zero(self.fl.dim(n - 1), self.fl.dim(n));
        for i in 0..faces {
            let s = if i % 2 == 0 { f.one() } else { f.from_i64(-1) };
            acc = acc.axpy(f, &s, &self.fl.face(n, i));
        }
        acc
    }

    /// Every map respects the internal grading.
    fn homogeneous(&self, m: &SparseMatrix, src: usize, dst: usize) -> bool {
        let ds = self.fl.degrees(src);
        let dt = self.fl.degrees(dst);
        (0..m.rows()).all(|r| m.row(r).iter().all(|(c, _)| dt[r] == ds[*c]))
    }

    fn t(&self, n: usize) -> SparseMatrix {
        let f = &self.fl.field;
        let s = if n % 2 == 0 { f.one() } else { f.from_i64(-1) };
        self.fl.rotation(n).scale(f, &s)
    }
}

fn sign(f: &ScalarField, neg: bool) -> Scalar {
    if neg {
        f.from_i64(-1)
    } else {
        f.one()
    }
}

/// `HH_0..=HH_n` from the unnormalized complex; needs levels up to `n + 1`.
pub fn dense_hochschild(fl: &FiniteLevels, n: usize) -> Result<Vec<BTreeMap<i64, usize>>> {
    let f = fl.field;
    let dl = DenseLevels::new(fl);
    let b: Vec<Option<SparseMatrix>> = (0..=n + 1).map(|m| (m > 0).then(|| dl.signed_sum(m, m + 1))).collect();
    for (m, bm) in b.iter().enumerate() {
        if let Some(bm) = bm {
            if !dl.homogeneous(bm, m, m - 1) {
                return Err(Error::NotGraded(format!("b_{m} mixes internal degrees")));
            }
        }
    }
    let mut out = vec![BTreeMap::new(); n + 1];
    for d in dl.degrees() {
        let rank = |m: usize| match &b[m] {
            None => 0,
            Some(bm) => dense_rank(&f, block(bm, &dl.idx(m - 1, d), &dl.idx(m, d))),
        };
        let ranks: Vec<usize> = (0..=n + 1).map(rank).collect();
        for (m, row) in out.iter_mut().enumerate() {
            let h = dl.idx(m, d).len() - ranks[m] - ranks[m + 1];
            if h > 0 {
                row.insert(d, h);
            }
        }
    }
    Ok(out)
}

/// `HC_n = H_n(C/(1 − t), b)`; characteristic zero only. Needs levels up to
/// `n + 1`.
pub fn connes_quotient(fl: &FiniteLevels, n: usize) -> Result<Vec<BTreeMap<i64, usize>>> {
    let f = fl.field;
    if f.characteristic() != 0 {
        return Err(Error::WrongCharacteristic(f.characteristic()));
    }
    let dl = DenseLevels::new(fl);
    let one_minus_t: Vec<SparseMatrix> = (0..=n + 1).map(|m| SparseMatrix::identity(fl.dim(m)).sub(&f, &dl.t(m))).collect();
    let b: Vec<Option<SparseMatrix>> = (0..=n + 1).map(|m| (m > 0).then(|| dl.signed_sum(m, m + 1))).collect();
    let mut out = vec![BTreeMap::new(); n + 1];
    for d in dl.degrees() {
        let image_t = |m: usize| dense_rank(&f, block(&one_minus_t[m], &dl.idx(m, d), &dl.idx(m, d)));
        let it: Vec<usize> = (0..=n + 1).map(image_t).collect();
        // rank of b̄_m: Q_m → Q_{m-1} is rank[b_m | 1 − t] − rank(1 − t)
        let induced = |m: usize| match &b[m] {
            None => 0,
            Some(bm) => {
                let rows = dl.idx(m - 1, d);
                let both = hstack(block(bm, &rows, &dl.idx(m, d)), block(&one_minus_t[m - 1], &rows, &rows));
                dense_rank(&f, both) - it[m - 1]
            }
        };
        let rb: Vec<usize> = (0..=n + 1).map(induced).collect();
        for (m, row) in out.iter_mut().enumerate() {
            let q = dl.idx(m, d).len() - it[m];
            let h = q - rb[m] - rb[m + 1];
            if h > 0 {
                row.insert(d, h);
            }
        }
    }
    Ok(out)
}

/// `HC_0..=HC_n` from a dense cyclic bicomplex with `n + 2` columns.
pub fn dense_bicomplex(fl: &FiniteLevels, n: usize) -> Result<Vec<BTreeMap<i64, usize>>> {
    let f = fl.field;
    let dl = DenseLevels::new(fl);
    let width = n + 2;
    let b: Vec<Option<SparseMatrix>> = (0..=n + 1).map(|m| (m > 0).then(|| dl.signed_sum(m, m + 1))).collect();
    let bp: Vec<Option<SparseMatrix>> = (0..=n + 1).map(|m| (m > 0).then(|| dl.signed_sum(m, m))).collect();
    let t: Vec<SparseMatrix> = (0..=n + 1).map(|m| dl.t(m)).collect();
    let norm: Vec<SparseMatrix> = (0..=n + 1)
        .map(|m| {
            let mut p = SparseMatrix::identity(fl.dim(m));
            let mut acc = p.clone();
            for _ in 0..m {
                p = t[m].mul(&f, &p);
                acc = acc.add(&f, &p);
            }
            acc
        })
        .collect();
    let mut out = vec![BTreeMap::new(); n + 1];
    for d in dl.degrees() {
        // total degree m: columns p = 0..min(m, width-1), each C_{m-p} in degree d
        let layout = |m: usize| -> Vec<(usize, Vec<usize>)> {
            (0..width.min(m + 1)).map(|p| (p, dl.idx(m - p, d))).collect()
        };
        let total_dim = |m: usize| layout(m).iter().map(|(_, v)| v.len()).sum::<usize>();
        let diff = |m: usize| -> Dense {
            let src = layout(m);
            let tgt = layout(m - 1);
            let rows = total_dim(m - 1);
            let cols = total_dim(m);
            let mut dense = vec![vec![f.zero(); cols]; rows];
            let mut roff = BTreeMap::new();
            let mut o = 0;
            for (p, v) in &tgt {
                roff.insert(*p, o);
                o += v.len();
            }
            let mut coff = 0;
            for (p, v) in &src {
                let q = m - p;
                let mut put = |mat: &SparseMatrix, tp: usize, s: &Scalar| {
                    if let Some(&r0) = roff.get(&tp) {
                        let rows_idx = dl.idx(q - (tp == *p) as usize, d);
                        for (ri, &r) in rows_idx.iter().enumerate() {
                            for (ci, &c) in v.iter().enumerate() {
                                let x = mat.get(r, c);
                                if !x.is_zero() {
                                    dense[r0 + ri][coff + ci] = f.add(&dense[r0 + ri][coff + ci], &f.mul(s, &x));
                                }
                            }
                        }
                    }
                };
                if q >= 1 {
                    if p % 2 == 0 {
                        put(b[q].as_ref().unwrap(), *p, &f.one());
                    } else {
                        put(bp[q].as_ref().unwrap(), *p, &sign(&f, true));
                    }
                }
                if *p >= 1 {
                    if p % 2 == 1 {
                        put(&SparseMatrix::identity(fl.dim(q)), p - 1, &f.one());
                        put(&t[q], p - 1, &sign(&f, true));
                    } else {
                        put(&norm[q], p - 1, &f.one());
                    }
                }
                coff += v.len();
            }
            dense
        };
        let ranks: Vec<usize> = (0..=n + 1).map(|m| if m == 0 { 0 } else { dense_rank(&f, diff(m)) }).collect();
        for (m, row) in out.iter_mut().enumerate() {
            let h = total_dim(m) - ranks[m] - ranks[m + 1];
            if h > 0 {
                row.insert(d, h);
            }
        }
    }
    Ok(out)
}

/// One comparison between the oracle and a main route.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub invariant: String,
    pub route: String,
    pub oracle: Vec<BTreeMap<i64, usize>>,
    pub main: Vec<BTreeMap<i64, usize>>,
    pub agree: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub comparisons: Vec<Comparison>,
    /// Routes that could not be run, with the reason.
    pub skipped: Vec<String>,
}

impl OracleReport {
    pub fn agree(&self) -> bool {
        !self.comparisons.is_empty() && self.comparisons.iter().all(|c| c.agree)
    }
}

fn restrict(tables: &[BTreeMap<i64, usize>], degrees: &[i64]) -> Vec<BTreeMap<i64, usize>> {
    tables
        .iter()
        .map(|t| degrees.iter().map(|d| (*d, t.get(d).copied().unwrap_or(0))).collect())
        .collect()
}

/// Runs the oracle for `HH_0..=HH_n` and `HC_0..=HC_{m_max}` on the degrees
/// in `degrees`. Fails when the level rings are not finite dimensional.
pub fn run_oracle(
    spec: &LogRingSpec,
    n: usize,
    m_max: Option<usize>,
    degrees: &[i64],
    budget: &Budget,
) -> Result<OracleReport> {
    let top = n.max(m_max.unwrap_or(0)) + 1;
    let fl = FiniteLevels::build(spec, top, budget)?;
    let mut report = OracleReport::default();
    let oracle_hh = restrict(&dense_hochschild(&fl, n)?, degrees);
    match hh_resolution(spec, n, degrees, budget) {
        Ok(h) => {
            let main = restrict(&h.tables, degrees);
            report.comparisons.push(Comparison {
                invariant: "HH".into(),
                route: "resolution".into(),
                agree: main == oracle_hh,
                oracle: oracle_hh,
                main,
            });
        }
        Err(e) => report.skipped.push(format!("HH resolution: {e}")),
    }
    if let Some(m) = m_max {
        let char0 = spec.field.characteristic() == 0;
        let oracle_hc = restrict(
            &if char0 { connes_quotient(&fl, m)? } else { dense_bicomplex(&fl, m)? },
            degrees,
        );
        let cm = build_cyclic(spec, m + 1, budget)?;
        let main = restrict(&hc(&cm, m, m + 2)?.tables, degrees);
        report.comparisons.push(Comparison {
            invariant: "HC".into(),
            route: "bicomplex".into(),
            agree: main == oracle_hc,
            oracle: oracle_hc.clone(),
            main,
        });
        if char0 {
            match hc_de_rham(spec, m, degrees, budget) {
                Ok(t) => {
                    let main = restrict(&t, degrees);
                    report.comparisons.push(Comparison {
                        invariant: "HC".into(),
                        route: "de_rham".into(),
                        agree: main == oracle_hc,
                        oracle: oracle_hc,
                        main,
                    });
                }
                Err(e) => report.skipped.push(format!("HC de Rham: {e}")),
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logring::fixtures::*;

    #[test]
    fn dense_rank_small() {
        let f = ScalarField::Rationals;
        let m = |r: &[&[i64]]| -> Dense { r.iter().map(|x| x.iter().map(|&v| f.from_i64(v)).collect()).collect() };
        assert_eq!(dense_rank(&f, m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(dense_rank(&f, m(&[&[0, 1], &[1, 0], &[1, 1]])), 2);
        let f2 = ScalarField::prime(2).unwrap();
        let m2: Dense = vec![vec![f2.one(), f2.one()], vec![f2.one(), f2.from_i64(3)]];
        assert_eq!(dense_rank(&f2, m2), 1);
    }

    #[test]
    fn dual_numbers_agree() {
        let s = trivial(ScalarField::Rationals, &["x"], &[1], &["x^2"]);
        let r = run_oracle(&s, 3, Some(3), &[0, 1, 2, 3, 4], &Budget::default()).unwrap();
        assert!(r.agree(), "{r:?}");
        assert_eq!(r.comparisons.len(), 2);
        assert!(r.skipped[0].starts_with("HC de Rham"), "{:?}", r.skipped);
    }

    #[test]
    fn kummer_f2_agree() {
        let s = kummer(ScalarField::prime(2).unwrap(), 2);
        let r = run_oracle(&s, 3, Some(3), &[0], &Budget::default()).unwrap();
        assert!(r.agree(), "{r:?}");
    }
}
