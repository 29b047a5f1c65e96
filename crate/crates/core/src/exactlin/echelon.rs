//! Row echelon engine shared by every linear-algebra routine.
//!
//! Over the rationals rows are kept as primitive integer vectors
//! (fraction-free elimination with content removal); over `F_p` rows are
//! machine words with the pivot normalised to one. Pivots are taken as the
//! first nonzero column of each row after reduction, processing rows in the
//! order given.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{mod_inverse, Scalar, ScalarField};
use super::sparse::SparseVec;

trait Engine {
    type E: Clone + PartialEq + std::fmt::Debug;

    fn load(&self, v: &SparseVec) -> Vec<(usize, Self::E)>;
    fn store(&self, row: &[(usize, Self::E)]) -> SparseVec;
    /// Clears entry `col` of `target` using `pivot` (whose pivot column is `col`).
    fn eliminate(
        &self,
        target: &[(usize, Self::E)],
        pivot: &[(usize, Self::E)],
        col: usize,
    ) -> Vec<(usize, Self::E)>;
    fn normalize(&self, row: &mut Vec<(usize, Self::E)>);
}

struct IntEngine;

impl Engine for IntEngine {
    type E = BigInt;

    fn load(&self, v: &SparseVec) -> Vec<(usize, BigInt)> {
        let mut l = BigInt::one();
        for (_, s) in v.iter() {
            l = l.lcm(s.denom());
        }
        let mut row: Vec<(usize, BigInt)> = v
            .iter()
            .map(|(i, s)| (*i, s.numer() * (&l / s.denom())))
            .collect();
        self.normalize(&mut row);
        row
    }

    fn store(&self, row: &[(usize, BigInt)]) -> SparseVec {
        let lead = row[0].1.clone();
        SparseVec::from_sorted(
            row.iter()
                .map(|(i, e)| {
                    (
                        *i,
                        Scalar::from_rational_unchecked(BigRational::new(e.clone(), lead.clone())),
                    )
                })
                .collect(),
        )
    }

    fn eliminate(
        &self,
        target: &[(usize, BigInt)],
        pivot: &[(usize, BigInt)],
        col: usize,
    ) -> Vec<(usize, BigInt)> {
        let a = &pivot[0].1;
        let b = &target.iter().find(|(c, _)| *c == col).unwrap().1;
        let g = a.gcd(b);
        let (sa, sb) = (a / &g, b / &g);
        let mut out = Vec::with_capacity(target.len() + pivot.len());
        let (mut i, mut j) = (0, 0);
        while i < target.len() || j < pivot.len() {
            let ci = target.get(i).map(|x| x.0).unwrap_or(usize::MAX);
            let cj = pivot.get(j).map(|x| x.0).unwrap_or(usize::MAX);
            if ci < cj {
                out.push((ci, &target[i].1 * &sa));
                i += 1;
            } else if cj < ci {
                out.push((cj, -(&pivot[j].1 * &sb)));
                j += 1;
            } else {
                let v = &target[i].1 * &sa - &pivot[j].1 * &sb;
                if !v.is_zero() {
                    out.push((ci, v));
                }
                i += 1;
                j += 1;
            }
        }
        self.normalize(&mut out);
        out
    }

    fn normalize(&self, row: &mut Vec<(usize, BigInt)>) {
        if row.is_empty() {
            return;
        }
        let mut g = BigInt::zero();
        for (_, e) in row.iter() {
            g = g.gcd(e);
            if g.is_one() {
                break;
            }
        }
        if row[0].1.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, e) in row.iter_mut() {
                *e = &*e / &g;
            }
        }
    }
}

struct ModEngine(u64);

impl Engine for ModEngine {
    type E = u64;

    fn load(&self, v: &SparseVec) -> Vec<(usize, u64)> {
        let mut row: Vec<(usize, u64)> = v
            .iter()
            .map(|(i, s)| (*i, s.numer().to_u64().unwrap() % self.0))
            .filter(|(_, e)| *e != 0)
            .collect();
        self.normalize(&mut row);
        row
    }

    fn store(&self, row: &[(usize, u64)]) -> SparseVec {
        SparseVec::from_sorted(
            row.iter()
                .map(|(i, e)| {
                    (
                        *i,
                        Scalar::from_rational_unchecked(BigRational::from_integer(BigInt::from(*e))),
                    )
                })
                .collect(),
        )
    }

    fn eliminate(
        &self,
        target: &[(usize, u64)],
        pivot: &[(usize, u64)],
        col: usize,
    ) -> Vec<(usize, u64)> {
        let p = self.0 as u128;
        let b = target.iter().find(|(c, _)| *c == col).unwrap().1 as u128;
        let mut out = Vec::with_capacity(target.len() + pivot.len());
        let (mut i, mut j) = (0, 0);
        while i < target.len() || j < pivot.len() {
            let ci = target.get(i).map(|x| x.0).unwrap_or(usize::MAX);
            let cj = pivot.get(j).map(|x| x.0).unwrap_or(usize::MAX);
            if ci < cj {
                out.push(target[i]);
                i += 1;
            } else if cj < ci {
                let v = ((p - (pivot[j].1 as u128 * b) % p) % p) as u64;
                if v != 0 {
                    out.push((cj, v));
                }
                j += 1;
            } else {
                let v = ((target[i].1 as u128 + p - (pivot[j].1 as u128 * b) % p) % p) as u64;
                if v != 0 {
                    out.push((ci, v));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }

    fn normalize(&self, row: &mut Vec<(usize, u64)>) {
        if let Some(&(_, lead)) = row.first() {
            if lead != 1 {
                let inv = mod_inverse(lead, self.0) as u128;
                for (_, e) in row.iter_mut() {
                    *e = ((*e as u128 * inv) % self.0 as u128) as u64;
                }
            }
        }
    }
}

/// Result of echelonising a list of rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Echelon rows (pivot entry one), sorted by pivot column.
    pub rows: Vec<SparseVec>,
    /// Pivot column of each row of `rows`.
    pub pivots: Vec<usize>,
    /// For every input row, the index into `rows` of the pivot it created, if any.
    pub created: Vec<Option<usize>>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

struct State<E> {
    rows: Vec<Vec<(usize, E)>>,
    by_col: BTreeMap<usize, usize>,
}

fn reduce_against<G: Engine>(
    eng: &G,
    st: &State<G::E>,
    mut row: Vec<(usize, G::E)>,
) -> Vec<(usize, G::E)> {
    let mut start = 0usize;
    loop {
        let hit = row
            .iter()
            .map(|(c, _)| *c)
            .filter(|c| *c >= start)
            .find(|c| st.by_col.contains_key(c));
        match hit {
            None => return row,
            Some(c) => {
                let p = &st.rows[st.by_col[&c]];
                row = eng.eliminate(&row, p, c);
                start = c + 1;
            }
        }
    }
}

fn run<G: Engine>(
    eng: &G,
    input: &[SparseVec],
    pivot_limit: usize,
    reduced: bool,
) -> Echelon {
    let mut st = State::<G::E> {
        rows: Vec::new(),
        by_col: BTreeMap::new(),
    };
    let mut created = Vec::with_capacity(input.len());
    for v in input {
        let row = reduce_against(eng, &st, eng.load(v));
        let first = row.iter().map(|(c, _)| *c).find(|c| *c < pivot_limit);
        match first {
            Some(c) if row[0].0 == c => {
                let mut row = row;
                eng.normalize(&mut row);
                if reduced {
                    for k in 0..st.rows.len() {
                        if st.rows[k].iter().any(|(cc, _)| *cc == c) {
                            let r = eng.eliminate(&st.rows[k], &row, c);
                            st.rows[k] = r;
                        }
                    }
                }
                st.by_col.insert(c, st.rows.len());
                st.rows.push(row);
                created.push(Some(st.rows.len() - 1));
            }
            Some(c) => {
                // Leading entries sit at columns >= pivot_limit only after all
                // earlier columns were cleared, so this cannot happen.
                unreachable!("row leads at {} but first admissible column is {c}", row[0].0)
            }
            None => created.push(None),
        }
    }
    let mut order: Vec<usize> = (0..st.rows.len()).collect();
    order.sort_by_key(|&k| st.rows[k].first().map(|x| x.0).unwrap_or(usize::MAX));
    let mut position = vec![0usize; st.rows.len()];
    for (new, &old) in order.iter().enumerate() {
        position[old] = new;
    }
    let rows: Vec<SparseVec> = order.iter().map(|&k| eng.store(&st.rows[k])).collect();
    let pivots = rows.iter().map(|r| r.first_index().unwrap()).collect();
    Echelon {
        rows,
        pivots,
        created: created.into_iter().map(|c| c.map(|k| position[k])).collect(),
    }
}

/// Echelonises `rows`, choosing pivots only among columns `< pivot_limit`.
/// With `reduced` the result is the reduced row echelon form.
///
/// Rows whose remainder is supported only on columns `>= pivot_limit` are
/// treated as dependent; callers using a pivot limit must make sure leading
/// entries cannot land there (true for augmented systems of independent rows).
pub fn echelon(field: &ScalarField, rows: &[SparseVec], pivot_limit: usize, reduced: bool) -> Echelon {
    match field {
        ScalarField::Rationals => run(&IntEngine, rows, pivot_limit, reduced),
        ScalarField::PrimeField(p) => run(&ModEngine(*p), rows, pivot_limit, reduced),
    }
}

/// Reduces `v` modulo the row space of a reduced echelon form (remainder is
/// canonical: zero at every pivot column).
pub fn reduce_vector(field: &ScalarField, ech: &Echelon, v: &SparseVec) -> SparseVec {
    let mut out = v.clone();
    for (k, &c) in ech.pivots.iter().enumerate() {
        let coef = out.get(c);
        if !coef.is_zero() {
            out = out.axpy(field, &field.neg(&coef), &ech.rows[k]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(f: &ScalarField, xs: &[i64]) -> SparseVec {
        SparseVec::from_dense(f, &xs.iter().map(|x| f.from_i64(*x)).collect::<Vec<_>>())
    }

    #[test]
    fn reduced_form_over_q() {
        let f = ScalarField::Rationals;
        let e = echelon(&f, &[v(&f, &[2, 4, 6]), v(&f, &[1, 1, 1])], usize::MAX, true);
        assert_eq!(e.pivots, vec![0, 1]);
        assert_eq!(e.rows[0], v(&f, &[1, 0, -1]));
        assert_eq!(e.rows[1], v(&f, &[0, 1, 2]));
    }

    #[test]
    fn dependent_rows_over_fp() {
        let f = ScalarField::prime(3).unwrap();
        let e = echelon(&f, &[v(&f, &[1, 2]), v(&f, &[2, 1])], usize::MAX, true);
        assert_eq!(e.rank(), 1);
        assert_eq!(e.created, vec![Some(0), None]);
    }
}
