use std::collections::BTreeMap;


use super::echelon::{echelon, reduce_vector};
use super::field::{Scalar, ScalarField};

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec(Vec<(usize, Scalar)>);

impl SparseVec {
    pub fn new() -> Self {
        SparseVec(Vec::new())
    }

    pub fn from_sorted(entries: Vec<(usize, Scalar)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|(_, s)| !s.is_zero()));
        SparseVec(entries)
    }

    /// Builds a vector from unsorted entries, summing duplicates.
    pub fn from_entries(field: &ScalarField, entries: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, s) in entries {
            let e = acc.entry(i).or_insert_with(Scalar::zero);
            *e = field.add(e, &s);
        }
        SparseVec(acc.into_iter().filter(|(_, s)| !s.is_zero()).collect())
    }

    pub fn from_dense(_field: &ScalarField, xs: &[Scalar]) -> Self {
        SparseVec(
            xs.iter()
                .enumerate()
                .filter(|(_, s)| !s.is_zero())
                .map(|(i, s)| (i, s.clone()))
                .collect(),
        )
    }

    pub fn unit(i: usize) -> Self {
        SparseVec(vec![(i, Scalar::one())])
    }

    pub fn to_dense(&self, len: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); len];
        for (i, s) in &self.0 {
            out[*i] = s.clone();
        }
        out
    }

    pub fn iter(&self) -> std::slice::Iter<'_, (usize, Scalar)> {
        self.0.iter()
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first_index(&self) -> Option<usize> {
        self.0.first().map(|x| x.0)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.last().map(|x| x.0)
    }

    pub fn get(&self, i: usize) -> Scalar {
        match self.0.binary_search_by_key(&i, |x| x.0) {
            Ok(k) => self.0[k].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    /// `self + a * other`
    pub fn axpy(&self, field: &ScalarField, a: &Scalar, other: &SparseVec) -> SparseVec {
        if a.is_zero() {
            return self.clone();
        }
        let (x, y) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(x.len() + y.len());
        let (mut i, mut j) = (0, 0);
        while i < x.len() || j < y.len() {
            let ci = x.get(i).map(|e| e.0).unwrap_or(usize::MAX);
            let cj = y.get(j).map(|e| e.0).unwrap_or(usize::MAX);
            if ci < cj {
                out.push(x[i].clone());
                i += 1;
            } else if cj < ci {
                out.push((cj, field.mul(a, &y[j].1)));
                j += 1;
            } else {
                let v = field.add(&x[i].1, &field.mul(a, &y[j].1));
                if !v.is_zero() {
                    out.push((ci, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec(out)
    }

    pub fn add(&self, field: &ScalarField, other: &SparseVec) -> SparseVec {
        self.axpy(field, &field.one(), other)
    }

    pub fn sub(&self, field: &ScalarField, other: &SparseVec) -> SparseVec {
        self.axpy(field, &field.neg(&field.one()), other)
    }

    pub fn scale(&self, field: &ScalarField, a: &Scalar) -> SparseVec {
        if a.is_zero() {
            return SparseVec::new();
        }
        SparseVec(self.0.iter().map(|(i, s)| (*i, field.mul(a, s))).collect())
    }

    pub fn dot(&self, field: &ScalarField, other: &SparseVec) -> Scalar {
        let mut acc = Scalar::zero();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc = field.add(&acc, &field.mul(&self.0[i].1, &other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    /// Re-indexes entries through `map`; entries mapped to `None` are dropped.
    pub fn reindex(&self, field: &ScalarField, map: impl Fn(usize) -> Option<usize>) -> SparseVec {
        SparseVec::from_entries(field, self.0.iter().filter_map(|(i, s)| map(*i).map(|j| (j, s.clone()))))
    }
}

/// Sparse matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            data: vec![SparseVec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            data: (0..n).map(SparseVec::unit).collect(),
        }
    }

    pub fn from_rows(cols: usize, data: Vec<SparseVec>) -> Self {
        debug_assert!(data.iter().all(|r| r.max_index().map_or(true, |m| m < cols)));
        SparseMatrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn from_columns(field: &ScalarField, rows: usize, columns: &[SparseVec]) -> Self {
        let mut buckets: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); rows];
        for (j, c) in columns.iter().enumerate() {
            for (i, s) in c.iter() {
                buckets[*i].push((j, s.clone()));
            }
        }
        let _ = field;
        SparseMatrix {
            rows,
            cols: columns.len(),
            data: buckets.into_iter().map(SparseVec::from_sorted).collect(),
        }
    }

    pub fn from_dense(field: &ScalarField, rows: &[Vec<Scalar>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        SparseMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().map(|r| SparseVec::from_dense(field, r)).collect(),
        }
    }

    pub fn from_i64(field: &ScalarField, rows: &[Vec<i64>]) -> Self {
        let dense: Vec<Vec<Scalar>> = rows
            .iter()
            .map(|r| r.iter().map(|x| field.from_i64(*x)).collect())
            .collect();
        Self::from_dense(field, &dense)
    }

    /// Builds from `(row, col, value)` triples, summing duplicates.
    pub fn from_triplets(
        field: &ScalarField,
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Self {
        let mut buckets: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); rows];
        for (i, j, s) in entries {
            assert!(i < rows && j < cols, "entry ({i},{j}) out of bounds {rows}x{cols}");
            buckets[i].push((j, s));
        }
        SparseMatrix {
            rows,
            cols,
            data: buckets
                .into_iter()
                .map(|b| SparseVec::from_entries(field, b))
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[SparseVec] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i].get(j)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_zero())
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut buckets: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for (j, s) in r.iter() {
                buckets[*j].push((i, s.clone()));
            }
        }
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            data: buckets.into_iter().map(SparseVec::from_sorted).collect(),
        }
    }

    pub fn columns(&self) -> Vec<SparseVec> {
        self.transpose().data
    }

    pub fn column(&self, j: usize) -> SparseVec {
        SparseVec::from_sorted(
            self.data
                .iter()
                .enumerate()
                .filter_map(|(i, r)| {
                    let v = r.get(j);
                    (!v.is_zero()).then_some((i, v))
                })
                .collect(),
        )
    }

    /// Matrix-vector product `self * v`.
    pub fn apply(&self, field: &ScalarField, v: &SparseVec) -> SparseVec {
        SparseVec::from_sorted(
            self.data
                .iter()
                .enumerate()
                .filter_map(|(i, r)| {
                    let d = r.dot(field, v);
                    (!d.is_zero()).then_some((i, d))
                })
                .collect(),
        )
    }

    pub fn mul(&self, field: &ScalarField, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let data = self
            .data
            .iter()
            .map(|r| {
                let mut acc = SparseVec::new();
                for (k, s) in r.iter() {
                    acc = acc.axpy(field, s, &other.data[*k]);
                }
                acc
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    pub fn add(&self, field: &ScalarField, other: &SparseMatrix) -> SparseMatrix {
        self.axpy(field, &field.one(), other)
    }

    pub fn sub(&self, field: &ScalarField, other: &SparseMatrix) -> SparseMatrix {
        self.axpy(field, &field.neg(&field.one()), other)
    }

    /// `self + a * other`
    pub fn axpy(&self, field: &ScalarField, a: &Scalar, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| x.axpy(field, a, y))
                .collect(),
        }
    }

    pub fn scale(&self, field: &ScalarField, a: &Scalar) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| r.scale(field, a)).collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        self.data.iter().map(|r| r.to_dense(self.cols)).collect()
    }

    /// Block matrix `[self | other]`.
    pub fn hstack(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.rows, other.rows);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut e = a.entries().to_vec();
                e.extend(b.iter().map(|(j, s)| (j + self.cols, s.clone())));
                SparseVec::from_sorted(e)
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    /// Block matrix with `self` above `other`.
    pub fn vstack(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        SparseMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Block-diagonal / block-placed assembly helper: writes `block` with its
    /// top-left corner at `(r0, c0)` into a triplet buffer.
    pub fn push_block(&self, r0: usize, c0: usize, out: &mut Vec<(usize, usize, Scalar)>) {
        for (i, r) in self.data.iter().enumerate() {
            for (j, s) in r.iter() {
                out.push((r0 + i, c0 + j, s.clone()));
            }
        }
    }
}

/// Output of [`row_reduce`].
#[derive(Clone, Debug)]
pub struct RowReduction {
    pub rank: usize,
    /// Basis of the null space (vectors of length `cols`), in reduced form:
    /// one vector per free column, with a one in that column.
    pub kernel_basis: Vec<SparseVec>,
    /// Basis of the column space (vectors of length `rows`): the columns of
    /// the input at the pivot positions.
    pub image_basis: Vec<SparseVec>,
    /// Pivot columns.
    pub pivots: Vec<usize>,
}

/// Rank, kernel and image of a sparse matrix.
pub fn row_reduce(field: &ScalarField, m: &SparseMatrix) -> RowReduction {
    let ech = echelon(field, m.row_vectors(), usize::MAX, true);
    let pivot_set: std::collections::BTreeSet<usize> = ech.pivots.iter().copied().collect();
    let mut kernel_basis = Vec::new();
    for free in (0..m.cols()).filter(|c| !pivot_set.contains(c)) {
        let mut entries = vec![(free, field.one())];
        for (k, &p) in ech.pivots.iter().enumerate() {
            let v = ech.rows[k].get(free);
            if !v.is_zero() {
                entries.push((p, field.neg(&v)));
            }
        }
        entries.sort_by_key(|e| e.0);
        kernel_basis.push(SparseVec::from_sorted(entries));
    }
    let cols = m.transpose();
    let image_basis = ech.pivots.iter().map(|&p| cols.row(p).clone()).collect();
    RowReduction {
        rank: ech.rank(),
        kernel_basis,
        image_basis,
        pivots: ech.pivots,
    }
}

pub fn rank(field: &ScalarField, m: &SparseMatrix) -> usize {
    if m.rows() <= m.cols() {
        echelon(field, m.row_vectors(), usize::MAX, false).rank()
    } else {
        echelon(field, m.transpose().row_vectors(), usize::MAX, false).rank()
    }
}

pub fn rank_of_vectors(field: &ScalarField, vs: &[SparseVec]) -> usize {
    echelon(field, vs, usize::MAX, false).rank()
}

/// A subspace of `k^n` in reduced echelon form, used for quotients and
/// membership tests.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub ambient: usize,
    ech: super::echelon::Echelon,
    complement: Vec<usize>,
    complement_pos: BTreeMap<usize, usize>,
}

impl Subspace {
    pub fn spanned_by(field: &ScalarField, ambient: usize, vs: &[SparseVec]) -> Self {
        let ech = echelon(field, vs, usize::MAX, true);
        let pivots: std::collections::BTreeSet<usize> = ech.pivots.iter().copied().collect();
        let complement: Vec<usize> = (0..ambient).filter(|c| !pivots.contains(c)).collect();
        let complement_pos = complement.iter().enumerate().map(|(k, c)| (*c, k)).collect();
        Subspace {
            ambient,
            ech,
            complement,
            complement_pos,
        }
    }

    pub fn dim(&self) -> usize {
        self.ech.rank()
    }

    pub fn codim(&self) -> usize {
        self.complement.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.ech.rows
    }

    pub fn reduce(&self, field: &ScalarField, v: &SparseVec) -> SparseVec {
        reduce_vector(field, &self.ech, v)
    }

    pub fn contains(&self, field: &ScalarField, v: &SparseVec) -> bool {
        self.reduce(field, v).is_zero()
    }

    /// Coordinates of the class of `v` in `k^n / self`, indexed by the
    /// non-pivot columns in increasing order.
    pub fn project(&self, field: &ScalarField, v: &SparseVec) -> SparseVec {
        let r = self.reduce(field, v);
        SparseVec::from_sorted(
            r.iter()
                .map(|(i, s)| (self.complement_pos[i], s.clone()))
                .collect(),
        )
    }

    /// Canonical lift of quotient coordinates back to `k^n`.
    pub fn lift(&self, coords: &SparseVec) -> SparseVec {
        SparseVec::from_sorted(
            coords
                .iter()
                .map(|(k, s)| (self.complement[*k], s.clone()))
                .collect(),
        )
    }

    /// Matrix of the quotient map `k^n -> k^n / self`.
    pub fn projection_matrix(&self, field: &ScalarField) -> SparseMatrix {
        let cols: Vec<SparseVec> = (0..self.ambient)
            .map(|i| self.project(field, &SparseVec::unit(i)))
            .collect();
        SparseMatrix::from_columns(field, self.codim(), &cols)
    }

    /// Matrix of the canonical section `k^n / self -> k^n`.
    pub fn lift_matrix(&self, field: &ScalarField) -> SparseMatrix {
        let cols: Vec<SparseVec> = (0..self.codim()).map(|k| self.lift(&SparseVec::unit(k))).collect();
        SparseMatrix::from_columns(field, self.ambient, &cols)
    }
}

/// Expresses vectors as combinations of a fixed linearly independent family.
#[derive(Clone, Debug)]
pub struct Coordinates {
    family_len: usize,
    ech: super::echelon::Echelon,
    ambient: usize,
}

impl Coordinates {
    /// Panics if `family` is linearly dependent.
    pub fn new(field: &ScalarField, ambient: usize, family: &[SparseVec]) -> Self {
        let aug: Vec<SparseVec> = family
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let mut e = v.entries().to_vec();
                e.push((ambient + k, field.one()));
                SparseVec::from_sorted(e)
            })
            .collect();
        let ech = echelon(field, &aug, ambient, true);
        assert_eq!(ech.rank(), family.len(), "family is linearly dependent");
        Coordinates {
            family_len: family.len(),
            ech,
            ambient,
        }
    }

    /// Returns `c` with `v = sum c_k family_k`, or `None` if `v` is outside the span.
    pub fn solve(&self, field: &ScalarField, v: &SparseVec) -> Option<SparseVec> {
        let mut coeffs = SparseVec::new();
        let mut rest = v.clone();
        for (k, &p) in self.ech.pivots.iter().enumerate() {
            let a = rest.get(p);
            if a.is_zero() {
                continue;
            }
            let row = &self.ech.rows[k];
            let (head, tail): (Vec<_>, Vec<_>) =
                row.iter().cloned().partition(|(i, _)| *i < self.ambient);
            rest = rest.axpy(field, &field.neg(&a), &SparseVec::from_sorted(head));
            let tail = SparseVec::from_sorted(tail.into_iter().map(|(i, s)| (i - self.ambient, s)).collect());
            coeffs = coeffs.axpy(field, &a, &tail);
        }
        debug_assert!(coeffs.max_index().map_or(true, |m| m < self.family_len));
        rest.is_zero().then_some(coeffs)
    }
}
