use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{Scalar, ScalarField};

/// Exponent vector of a monomial.
pub type Exp = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomialOrder {
    Lex,
    DegRevLex,
    /// Consecutive blocks of the given sizes, compared block by block with
    /// degrevlex inside each block. The first block is eliminated first.
    Block(Vec<usize>),
}

impl Default for MonomialOrder {
    fn default() -> Self {
        MonomialOrder::DegRevLex
    }
}

fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::DegRevLex => degrevlex(a, b),
            MonomialOrder::Block(sizes) => {
                let mut start = 0;
                for &s in sizes {
                    let end = (start + s).min(a.len());
                    match degrevlex(&a[start..end], &b[start..end]) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                    start = end;
                }
                degrevlex(&a[start..], &b[start..])
            }
        }
    }
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn exp_lcm(a: &[u32], b: &[u32]) -> Exp {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn exp_add(a: &[u32], b: &[u32]) -> Exp {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `a - b`; caller guarantees `b | a`.
pub fn exp_sub(a: &[u32], b: &[u32]) -> Exp {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// Polynomial with terms sorted strictly decreasing in the ring's order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: Vec<(Exp, Scalar)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[(Exp, Scalar)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Exp, Scalar)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn lead(&self) -> Option<&(Exp, Scalar)> {
        self.terms.first()
    }

    pub fn lead_exp(&self) -> Option<&Exp> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn lead_coef(&self) -> Option<&Scalar> {
        self.terms.first().map(|t| &t.1)
    }

    /// Constant term coefficient (zero if absent).
    pub fn constant_coef(&self) -> Scalar {
        match self.terms.last() {
            Some((e, c)) if e.iter().all(|&x| x == 0) => c.clone(),
            _ => Scalar::zero(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(e, _)| e.iter().all(|&x| x == 0))
    }

    pub(crate) fn from_sorted_unchecked(terms: Vec<(Exp, Scalar)>) -> Self {
        Poly { terms }
    }
}

/// Polynomial ring over a field, optionally with inverted variables.
///
/// Every inverted variable `v` gets a partner `v_inv` appended after the
/// user variables; the relation `v * v_inv - 1` is adjoined by every ideal
/// built in this ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    pub field: ScalarField,
    names: Vec<String>,
    pairs: Vec<(usize, usize)>,
    order: MonomialOrder,
    weights: Vec<i64>,
}

impl PolyRing {
    pub fn new(field: ScalarField, names: Vec<String>) -> Result<Self> {
        Self::with_options(field, names, &[], MonomialOrder::DegRevLex, None)
    }

    pub fn with_options(
        field: ScalarField,
        mut names: Vec<String>,
        inverted: &[String],
        order: MonomialOrder,
        weights: Option<Vec<i64>>,
    ) -> Result<Self> {
        let user = names.len();
        let mut weights = match weights {
            Some(w) if w.len() != user => {
                return Err(Error::Schema(format!(
                    "{} grading weights given for {} variables",
                    w.len(),
                    user
                )))
            }
            Some(w) => w,
            None => vec![0; user],
        };
        let mut pairs = Vec::new();
        for v in inverted {
            let i = names[..user]
                .iter()
                .position(|n| n == v)
                .ok_or_else(|| Error::Schema(format!("inverted variable `{v}` is not a ring variable")))?;
            pairs.push((i, names.len()));
            names.push(format!("{v}_inv"));
            weights.push(-weights[i]);
        }
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(Error::Schema(format!("duplicate variable name `{n}`")));
            }
        }
        if let MonomialOrder::Block(b) = &order {
            if b.iter().sum::<usize>() != names.len() {
                return Err(Error::Schema("block sizes do not cover the variables".into()));
            }
        }
        Ok(PolyRing {
            field,
            names,
            pairs,
            order,
            weights,
        })
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// `(variable, partner)` for each inverted variable.
    pub fn inverse_pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Same variables and field with a different order.
    pub fn reordered(&self, order: MonomialOrder) -> PolyRing {
        PolyRing {
            order,
            ..self.clone()
        }
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        self.order.cmp(a, b)
    }

    pub fn one_exp(&self) -> Exp {
        vec![0; self.nvars()]
    }

    pub fn exp_weight(&self, e: &[u32]) -> i64 {
        e.iter().zip(&self.weights).map(|(&x, &w)| x as i64 * w).sum()
    }

    pub fn zero(&self) -> Poly {
        Poly::zero()
    }

    pub fn constant(&self, c: Scalar) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(self.one_exp(), c)],
            }
        }
    }

    pub fn from_i64(&self, c: i64) -> Poly {
        self.constant(self.field.from_i64(c))
    }

    pub fn one(&self) -> Poly {
        self.constant(self.field.one())
    }

    pub fn var(&self, i: usize) -> Poly {
        let mut e = self.one_exp();
        e[i] = 1;
        Poly {
            terms: vec![(e, self.field.one())],
        }
    }

    pub fn monomial(&self, e: Exp, c: Scalar) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(e, c)] }
        }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Exp, Scalar)>) -> Poly {
        let mut m: BTreeMap<Exp, Scalar> = BTreeMap::new();
        for (e, c) in terms {
            let s = m.entry(e).or_insert_with(Scalar::zero);
            *s = self.field.add(s, &c);
        }
        let mut t: Vec<(Exp, Scalar)> = m.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        t.sort_by(|a, b| self.cmp(&b.0, &a.0));
        Poly { terms: t }
    }

    /// `a + s * m * b` for a scalar `s` and monomial `m`.
    pub fn add_scaled(&self, a: &Poly, s: &Scalar, m: &[u32], b: &Poly) -> Poly {
        if s.is_zero() || b.is_zero() {
            return a.clone();
        }
        let f = &self.field;
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let mut i = 0;
        let mut bt = b.terms.iter().map(|(e, c)| (exp_add(e, m), c)).peekable();
        while i < a.terms.len() || bt.peek().is_some() {
            let ord = match (a.terms.get(i), bt.peek()) {
                (Some(x), Some(y)) => self.cmp(&x.0, &y.0),
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (None, None) => unreachable!(),
            };
            match ord {
                Ordering::Greater => {
                    out.push(a.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (e, c) = bt.next().unwrap();
                    out.push((e, f.mul(s, c)));
                }
                Ordering::Equal => {
                    let (e, c) = bt.next().unwrap();
                    let v = f.add(&a.terms[i].1, &f.mul(s, c));
                    if !v.is_zero() {
                        out.push((e, v));
                    }
                    i += 1;
                }
            }
        }
        Poly { terms: out }
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        self.add_scaled(a, &self.field.one(), &self.one_exp(), b)
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.add_scaled(a, &self.field.from_i64(-1), &self.one_exp(), b)
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        self.scale(a, &self.field.from_i64(-1))
    }

    pub fn scale(&self, a: &Poly, s: &Scalar) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: a
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), self.field.mul(c, s)))
                .collect(),
        }
    }

    pub fn mul_term(&self, a: &Poly, m: &[u32], s: &Scalar) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: a
                .terms
                .iter()
                .map(|(e, c)| (exp_add(e, m), self.field.mul(c, s)))
                .collect(),
        }
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        let mut acc = Poly::zero();
        for (e, c) in &small.terms {
            acc = self.add_scaled(&acc, c, e, big);
        }
        acc
    }

    pub fn pow(&self, a: &Poly, n: u32) -> Poly {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self, a: &Poly) -> Poly {
        match a.lead_coef() {
            None => Poly::zero(),
            Some(c) if c.is_one() => a.clone(),
            Some(c) => self.scale(a, &self.field.inv(c)),
        }
    }

    /// Re-sorts a polynomial built in a ring with the same variables but a
    /// different order.
    pub fn adopt(&self, a: &Poly) -> Poly {
        let mut t = a.terms.clone();
        t.sort_by(|x, y| self.cmp(&y.0, &x.0));
        Poly { terms: t }
    }

    /// Weighted degree if homogeneous, `None` for zero, error otherwise.
    pub fn homogeneous_degree(&self, a: &Poly) -> std::result::Result<Option<i64>, ()> {
        let mut d = None;
        for (e, _) in &a.terms {
            let w = self.exp_weight(e);
            match d {
                None => d = Some(w),
                Some(x) if x != w => return Err(()),
                _ => {}
            }
        }
        Ok(d)
    }

    pub fn is_homogeneous(&self, a: &Poly) -> bool {
        self.homogeneous_degree(a).is_ok()
    }

    pub fn derivative(&self, a: &Poly, var: usize) -> Poly {
        let f = &self.field;
        self.from_terms(a.terms.iter().filter(|(e, _)| e[var] > 0).map(|(e, c)| {
            let mut e2 = e.clone();
            e2[var] -= 1;
            (e2, f.mul(c, &f.from_i64(e[var] as i64)))
        }))
    }

    /// Substitutes `images[i]` (polynomials of `target`) for variable `i`.
    pub fn substitute(&self, a: &Poly, target: &PolyRing, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars());
        let mut cache: BTreeMap<(usize, u32), Poly> = BTreeMap::new();
        let mut acc = Poly::zero();
        for (e, c) in &a.terms {
            let mut term = target.constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let p = cache
                    .entry((i, k))
                    .or_insert_with(|| target.pow(&images[i], k))
                    .clone();
                term = target.mul(&term, &p);
                if term.is_zero() {
                    break;
                }
            }
            acc = target.add(&acc, &term);
        }
        acc
    }

    /// `v * v_inv - 1` for every inverted pair.
    pub fn pair_relations(&self) -> Vec<Poly> {
        self.pairs
            .iter()
            .map(|&(v, w)| self.sub(&self.mul(&self.var(v), &self.var(w)), &self.one()))
            .collect()
    }

    pub fn format(&self, a: &Poly) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (e, c)) in a.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { self.field.neg(c) } else { c.clone() };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    if x == 1 {
                        self.names[i].clone()
                    } else {
                        format!("{}^{}", self.names[i], x)
                    }
                })
                .collect();
            if mono.is_empty() {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&mono.join("*"));
            } else {
                s.push_str(&format!("{}*{}", abs, mono.join("*")));
            }
        }
        s
    }

    pub fn display<'a>(&'a self, a: &'a Poly) -> PolyDisplay<'a> {
        PolyDisplay { ring: self, poly: a }
    }
}

pub struct PolyDisplay<'a> {
    ring: &'a PolyRing,
    poly: &'a Poly,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ring.format(self.poly))
    }
}
