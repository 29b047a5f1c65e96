//! Affine monoids in lattices, chart maps, the cokernel group `G` and
//! toric ideals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{hermite_rows, integer_kernel, smith_normal_form, solve_integer, IntMatrix, ScalarField};
use crate::grobner::{groebner_basis, Budget, Exp, Ideal, MonomialOrder, Poly, PolyRing};

/// The submonoid of `Z^d` generated by finitely many vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMonoid {
    pub ambient_rank: usize,
    pub generators: Vec<Vec<i64>>,
}

impl AffineMonoid {
    pub fn new(ambient_rank: usize, generators: Vec<Vec<i64>>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if g.len() != ambient_rank {
                return Err(Error::Schema(format!(
                    "monoid generator {i} has length {} but the lattice has rank {ambient_rank}",
                    g.len()
                )));
            }
        }
        Ok(AffineMonoid {
            ambient_rank,
            generators,
        })
    }

    /// `N^r` with its standard generators.
    pub fn free(r: usize) -> Self {
        let generators = (0..r)
            .map(|i| (0..r).map(|j| (i == j) as i64).collect())
            .collect();
        AffineMonoid {
            ambient_rank: r,
            generators,
        }
    }

    pub fn trivial() -> Self {
        AffineMonoid {
            ambient_rank: 0,
            generators: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `d x s` matrix whose columns are the generators.
    pub fn generator_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = self
            .generators
            .iter()
            .map(|g| g.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        IntMatrix::from_columns(self.ambient_rank, &cols)
    }

    /// Integer relations among the generators: a basis of
    /// `{c in Z^s : Σ c_i g_i = 0}`.
    pub fn relation_lattice(&self) -> Vec<Vec<BigInt>> {
        if self.generators.is_empty() {
            return Vec::new();
        }
        integer_kernel(&self.generator_matrix())
    }

    /// Image in `Z^d` of an integer combination of generators.
    pub fn evaluate(&self, coeffs: &[BigInt]) -> Vec<BigInt> {
        self.generator_matrix().apply(coeffs)
    }
}

/// Basis (rows) of the subgroup of `Z^d` generated by the monoid.
pub fn group_completion(p: &AffineMonoid) -> IntMatrix {
    let rows: Vec<Vec<BigInt>> = p
        .generators
        .iter()
        .map(|g| g.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    hermite_rows(&IntMatrix::from_rows(p.ambient_rank, &rows))
}

/// A monoid morphism `Q -> P` given on generators by `N`-combinations of
/// the target generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidMap {
    pub source: AffineMonoid,
    pub target: AffineMonoid,
    pub images: Vec<Vec<u64>>,
}

impl MonoidMap {
    pub fn new(source: AffineMonoid, target: AffineMonoid, images: Vec<Vec<u64>>) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::Schema(format!(
                "theta gives {} images for {} source generators",
                images.len(),
                source.len()
            )));
        }
        for (i, im) in images.iter().enumerate() {
            if im.len() != target.len() {
                return Err(Error::Schema(format!(
                    "theta image of generator {i} has {} entries, target has {} generators",
                    im.len(),
                    target.len()
                )));
            }
        }
        let m = MonoidMap {
            source,
            target,
            images,
        };
        if let Some(bad) = m.first_violated_relation() {
            return Err(Error::Schema(format!(
                "theta does not respect the source relation {bad:?}"
            )));
        }
        Ok(m)
    }

    /// Image of source generator `i` in the target lattice.
    pub fn image_vector(&self, i: usize) -> Vec<BigInt> {
        let c: Vec<BigInt> = self.images[i].iter().map(|&x| BigInt::from(x)).collect();
        self.target.evaluate(&c)
    }

    /// `d_P x s_Q` matrix of images.
    pub fn image_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = (0..self.source.len()).map(|i| self.image_vector(i)).collect();
        IntMatrix::from_columns(self.target.ambient_rank, &cols)
    }

    fn first_violated_relation(&self) -> Option<Vec<BigInt>> {
        if self.source.is_empty() {
            return None;
        }
        let m = self.image_matrix();
        self.source
            .relation_lattice()
            .into_iter()
            .find(|k| m.apply(k).iter().any(|x| !x.is_zero()))
    }

    /// Images expressed as `N`-combination of target generators of the
    /// combination `coeffs` of source generators.
    pub fn combination_image(&self, coeffs: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.target.len()];
        for (i, &c) in coeffs.iter().enumerate() {
            for (j, &x) in self.images[i].iter().enumerate() {
                out[j] += c * x;
            }
        }
        out
    }
}

/// A finitely generated abelian group `Z/d_1 ⊕ ... ⊕ Z/d_t ⊕ Z^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAbGroup {
    pub free_rank: usize,
    /// Nontrivial invariant factors, `d_1 | d_2 | ...`.
    pub torsion_orders: Vec<BigInt>,
    /// Class of each target generator: torsion coordinates (reduced into
    /// `0..d_i`) followed by free coordinates.
    pub generator_images: Vec<Vec<BigInt>>,
}

impl FinAbGroup {
    pub fn ngens(&self) -> usize {
        self.torsion_orders.len() + self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    /// Order of the `k`-th cyclic factor; `None` for free factors.
    pub fn order(&self, k: usize) -> Option<u64> {
        self.torsion_orders.get(k).map(|d| d.to_u64().expect("torsion order fits in u64"))
    }
}

/// `P^gp / θ(Q^gp)` with the class map of the generators of `P`.
pub fn chart_cokernel(theta: &MonoidMap) -> Result<FinAbGroup> {
    let p = &theta.target;
    let basis = group_completion(p);
    let rho = basis.rows();
    let bt = basis.transpose();
    let coords = |v: &[BigInt]| -> Vec<BigInt> {
        if rho == 0 {
            return Vec::new();
        }
        solve_integer(&bt, v).expect("vector lies in the group completion")
    };
    let q_rank = group_completion(&theta.source).rows();
    let cols: Vec<Vec<BigInt>> = (0..theta.source.len())
        .map(|i| coords(&theta.image_vector(i)))
        .collect();
    let m = IntMatrix::from_columns(rho, &cols);
    let snf = smith_normal_form(&m);
    let r = snf.rank();
    if r < q_rank {
        return Err(Error::NotInjective {
            rank: r,
            expected: q_rank,
        });
    }
    let factors = snf.invariant_factors();
    let kept: Vec<usize> = (0..r).filter(|&i| factors[i] != BigInt::from(1)).collect();
    let free: Vec<usize> = (r..rho).collect();
    let mut images: Vec<Vec<BigInt>> = Vec::new();
    for g in &p.generators {
        let v: Vec<BigInt> = g.iter().map(|&x| BigInt::from(x)).collect();
        let uc = snf.u.apply(&coords(&v));
        let mut img: Vec<BigInt> = kept.iter().map(|&i| uc[i].mod_floor(&factors[i])).collect();
        img.extend(free.iter().map(|&i| uc[i].clone()));
        images.push(img);
    }
    let t = kept.len();
    for k in 0..free.len() {
        let first = images.iter().map(|im| &im[t + k]).find(|x| !x.is_zero());
        if first.map_or(false, |x| x.is_negative()) {
            for im in images.iter_mut() {
                im[t + k] = -im[t + k].clone();
            }
        }
    }
    Ok(FinAbGroup {
        free_rank: free.len(),
        torsion_orders: kept.iter().map(|&i| factors[i].clone()).collect(),
        generator_images: images,
    })
}

/// Binomials `x^a - x^b` in variables indexed by monoid generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinomialIdeal {
    pub nvars: usize,
    pub binomials: Vec<(Exp, Exp)>,
}

impl BinomialIdeal {
    pub fn polys(&self, ring: &PolyRing, offset: usize) -> Vec<Poly> {
        let f = &ring.field;
        self.binomials
            .iter()
            .map(|(a, b)| {
                let lift = |e: &Exp| {
                    let mut x = ring.one_exp();
                    x[offset..offset + e.len()].copy_from_slice(e);
                    x
                };
                ring.from_terms([(lift(a), f.one()), (lift(b), f.from_i64(-1))])
            })
            .collect()
    }
}

/// Kernel of `k[x_1..x_s] -> k[P]`, `x_i -> generator_i`: the lattice ideal
/// of the relation lattice, saturated by the product of the variables.
pub fn toric_ideal(p: &AffineMonoid, field: ScalarField) -> Result<BinomialIdeal> {
    let s = p.len();
    let lattice = p.relation_lattice();
    if lattice.is_empty() {
        return Ok(BinomialIdeal {
            nvars: s,
            binomials: Vec::new(),
        });
    }
    let mut names = vec!["t".to_string()];
    names.extend((1..=s).map(|i| format!("x{i}")));
    let ring = PolyRing::with_options(field, names.clone(), &[], MonomialOrder::Block(vec![1, s]), None)?;
    let f = &ring.field;
    let mut gens = Vec::new();
    for v in &lattice {
        let mut pos = ring.one_exp();
        let mut neg = ring.one_exp();
        for (i, c) in v.iter().enumerate() {
            let e = c.abs().to_u32().expect("relation exponent fits in u32");
            if c.is_positive() {
                pos[i + 1] = e;
            } else {
                neg[i + 1] = e;
            }
        }
        gens.push(ring.from_terms([(pos, f.one()), (neg, f.from_i64(-1))]));
    }
    let mut all = ring.one_exp();
    all.iter_mut().for_each(|x| *x = 1);
    gens.push(ring.from_terms([(all, f.one()), (ring.one_exp(), f.from_i64(-1))]));
    let budget = Budget::default();
    let elim = groebner_basis(&Ideal::new(ring.clone(), gens), &budget)?;
    let target = PolyRing::new(field, names[1..].to_vec())?;
    let kept: Vec<Poly> = elim
        .into_iter()
        .filter(|g| g.terms().iter().all(|(e, _)| e[0] == 0))
        .map(|g| target.from_terms(g.into_terms().into_iter().map(|(e, c)| (e[1..].to_vec(), c))))
        .collect();
    let gb = groebner_basis(&Ideal::new(target.clone(), kept), &budget)?;
    let mut binomials = Vec::new();
    for g in gb {
        let t = g.terms();
        let ok = t.len() == 2 && t[0].1.is_one() && t[1].1 == f.from_i64(-1);
        if !ok {
            return Err(Error::CheckFailed(format!(
                "toric basis element {} is not a binomial",
                target.format(&g)
            )));
        }
        binomials.push((t[0].0.clone(), t[1].0.clone()));
    }
    Ok(BinomialIdeal { nvars: s, binomials })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn completion_of_two_and_three() {
        let p = AffineMonoid::new(1, vec![vec![2], vec![3]]).unwrap();
        assert_eq!(group_completion(&p), IntMatrix::from_i64(&[vec![1]]));
    }

    #[test]
    fn kummer_cokernel() {
        for n in 2..6 {
            let th = MonoidMap::new(AffineMonoid::free(1), AffineMonoid::free(1), vec![vec![n]]).unwrap();
            let g = chart_cokernel(&th).unwrap();
            assert_eq!(g.free_rank, 0);
            assert_eq!(g.torsion_orders, b(&[n as i64]));
        }
    }

    #[test]
    fn semistable_cokernel() {
        let th = MonoidMap::new(AffineMonoid::free(1), AffineMonoid::free(2), vec![vec![1, 1]]).unwrap();
        let g = chart_cokernel(&th).unwrap();
        assert_eq!(g.free_rank, 1);
        assert!(g.torsion_orders.is_empty());
        assert_eq!(g.generator_images, vec![b(&[1]), b(&[-1])]);
    }

    #[test]
    fn identity_cokernel_trivial() {
        let th = MonoidMap::new(AffineMonoid::free(1), AffineMonoid::free(1), vec![vec![1]]).unwrap();
        assert!(chart_cokernel(&th).unwrap().is_trivial());
    }

    #[test]
    fn non_injective_rejected() {
        let q = AffineMonoid::free(2);
        let p = AffineMonoid::free(1);
        let th = MonoidMap::new(q, p, vec![vec![1], vec![1]]).unwrap();
        assert!(matches!(chart_cokernel(&th), Err(Error::NotInjective { .. })));
    }

    #[test]
    fn cusp_and_cone() {
        let p = AffineMonoid::new(1, vec![vec![2], vec![3]]).unwrap();
        let t = toric_ideal(&p, ScalarField::Rationals).unwrap();
        let ring = PolyRing::new(ScalarField::Rationals, vec!["x1".into(), "x2".into()]).unwrap();
        let polys = t.polys(&ring, 0);
        assert_eq!(polys.len(), 1);
        assert_eq!(ring.format(&ring.monic(&polys[0])), "x1^3 - x2^2");

        let p = AffineMonoid::new(2, vec![vec![1, 0], vec![1, 1], vec![1, 2]]).unwrap();
        let t = toric_ideal(&p, ScalarField::Rationals).unwrap();
        let ring = PolyRing::new(ScalarField::Rationals, vec!["x1".into(), "x2".into(), "x3".into()]).unwrap();
        let polys = t.polys(&ring, 0);
        assert_eq!(polys.len(), 1);
        let g = &polys[0];
        let alt = ring.neg(g);
        let s = [ring.format(g), ring.format(&alt)];
        assert!(s.contains(&"x1*x3 - x2^2".to_string()) || s.contains(&"-x2^2 + x1*x3".to_string()), "{s:?}");
    }

    #[test]
    fn free_monoid_has_no_relations() {
        let t = toric_ideal(&AffineMonoid::free(2), ScalarField::Rationals).unwrap();
        assert!(t.binomials.is_empty());
    }
}
