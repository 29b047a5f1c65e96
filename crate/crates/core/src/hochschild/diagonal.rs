use std::collections::BTreeMap;

use serde::Serialize;

use super::levels::{face_coords, LevelData, LevelMap, LevelRing};
use crate::error::{Error, Result};
use crate::grobner::{free_resolution, Budget, FPModule, FreeResolution, Poly};
use crate::logring::{exterior_power, LogRingSpec};

/// `R = (A ⊗ A)[G]` modulo chart twists, with `ε: R → A`.
#[derive(Clone, Debug)]
pub struct LogDiagonalRing {
    pub data: LevelData,
    pub ring: LevelRing,
    /// `A` as the level-zero ring.
    pub base: LevelRing,
    pub augmentation: LevelMap,
    /// Generators of `I_Δ = ker ε`: `1⊗x − x⊗1` per variable of `A`, then
    /// `u_g − 1` per generator of `G`.
    pub ideal_gens: Vec<Poly>,
    pub gen_names: Vec<String>,
}

pub fn log_diagonal_ring(spec: &LogRingSpec, budget: &Budget) -> Result<LogDiagonalRing> {
    let data = LevelData::new(spec, budget)?;
    let ring = LevelRing::build(&data, 1, budget)?;
    let base = LevelRing::build(&data, 0, budget)?;
    let augmentation = LevelMap::coordinate(&ring, &base, &face_coords(1, 0));
    let r = ring.ring();
    let ar = &data.a.ring;
    let mut ideal_gens = Vec::new();
    let mut gen_names = Vec::new();
    for i in 0..ar.nvars() {
        ideal_gens.push(r.sub(&r.var(ring.copy_var(1, i)), &r.var(ring.copy_var(0, i))));
        gen_names.push(format!("d{}", ar.name(i)));
    }
    for g in 0..ring.ngens() {
        ideal_gens.push(r.sub(&r.var(ring.unit_var(1, g)), &r.one()));
        gen_names.push(format!("u{} - 1", g + 1));
    }
    let d = LogDiagonalRing {
        data,
        ring,
        base,
        augmentation,
        ideal_gens,
        gen_names,
    };
    if !d.check() {
        return Err(Error::CheckFailed("augmentation of the log diagonal ring".into()));
    }
    Ok(d)
}

impl LogDiagonalRing {
    /// `ε` is well defined, splits both copies, and kills `I_Δ`.
    pub fn check(&self) -> bool {
        let eps = &self.augmentation;
        if !eps.is_well_defined(&self.ring, &self.base) {
            return false;
        }
        let b = self.base.ring();
        for j in 0..2 {
            for (i, img) in self.ring.copy_images(j).iter().enumerate() {
                if eps.apply(&self.ring, &self.base, img) != self.base.quotient.nf(&b.var(i)) {
                    return false;
                }
            }
        }
        self.ideal_gens
            .iter()
            .all(|g| eps.apply(&self.ring, &self.base, g).is_zero())
    }

    /// `A` as the cyclic `R`-module `R / I_Δ`.
    pub fn diagonal_module(&self) -> FPModule {
        FPModule::new(
            self.ring.quotient.clone(),
            1,
            self.ideal_gens.iter().map(|g| vec![g.clone()]).collect(),
            vec![0],
        )
    }

    pub fn left(&self, p: &Poly) -> Poly {
        let r = self.ring.ring();
        self.ring.quotient.nf(&self.data.a.ring.substitute(p, r, &self.ring.copy_images(0)))
    }

    pub fn right(&self, p: &Poly) -> Poly {
        let r = self.ring.ring();
        self.ring.quotient.nf(&self.data.a.ring.substitute(p, r, &self.ring.copy_images(1)))
    }

    /// Free resolution of `A` over `R` of length `len`.
    pub fn resolve(&self, len: usize, budget: &Budget) -> Result<FreeResolution> {
        free_resolution(&self.diagonal_module(), len, budget)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Bar,
    Koszul,
    Resolution,
    Theta,
}

/// `HH_n` for `n = 0..=N` as dimensions per internal degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HochschildClasses {
    pub backend: Backend,
    pub tables: Vec<BTreeMap<i64, usize>>,
    /// False when a requested cross-check disagreed.
    pub verified: bool,
}

impl HochschildClasses {
    /// Total dimension of each `HH_n` over the reported degrees.
    pub fn dims(&self) -> Vec<usize> {
        self.tables.iter().map(|t| t.values().sum()).collect()
    }
}

/// `Tor^R_n(A, A)` through a Gröbner free resolution, degreewise in `degrees`.
pub fn hh_resolution(spec: &LogRingSpec, top: usize, degrees: &[i64], budget: &Budget) -> Result<HochschildClasses> {
    let d = log_diagonal_ring(spec, budget)?;
    let res = d.resolve(top + 1, budget)?;
    let complex = res.tensor(&d.base.quotient, &d.augmentation.images);
    Ok(HochschildClasses {
        backend: Backend::Resolution,
        tables: complex.homology_table(degrees, top)?,
        verified: true,
    })
}

/// `HH_n ≅ Λⁿ(A^r)` for a regular sequence generating `I_Δ`. The sequence is
/// given as polynomials of the diagonal ring.
pub fn hh_koszul(
    spec: &LogRingSpec,
    sequence: &[Poly],
    top: usize,
    degrees: &[i64],
    budget: &Budget,
) -> Result<HochschildClasses> {
    let d = log_diagonal_ring(spec, budget)?;
    let q = &d.ring.quotient;
    if !q.same_ideal(sequence, &d.ideal_gens, budget)? {
        return Err(Error::NotGenerating(
            "the sequence does not generate the diagonal ideal".into(),
        ));
    }
    let mut shifts = Vec::new();
    for s in sequence {
        match q.ring.homogeneous_degree(&q.nf(s)) {
            Ok(Some(w)) => shifts.push(w),
            Ok(None) => {
                return Err(Error::NotGenerating("the sequence contains zero".into()));
            }
            Err(()) => return Err(Error::NotGraded("sequence element is not homogeneous".into())),
        }
    }
    let free = FPModule::free(d.base.quotient.clone(), shifts);
    let tables = (0..=top)
        .map(|n| exterior_power(&free, n).hilbert_function(degrees))
        .collect::<Result<Vec<_>>>()?;
    Ok(HochschildClasses {
        backend: Backend::Koszul,
        tables,
        verified: true,
    })
}

/// Marks a Koszul answer unverified unless the resolution backend agrees.
pub fn cross_check_koszul(
    spec: &LogRingSpec,
    koszul: &mut HochschildClasses,
    degrees: &[i64],
    budget: &Budget,
) -> Result<bool> {
    let res = hh_resolution(spec, koszul.tables.len() - 1, degrees, budget)?;
    koszul.verified = res.tables == koszul.tables;
    Ok(koszul.verified)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::ScalarField;
    use crate::grobner::parse_poly;
    use crate::logring::fixtures::*;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn log_point_ring_and_tor() {
        let s = log_point(ScalarField::Rationals);
        let d = log_diagonal_ring(&s, &b()).unwrap();
        assert_eq!(d.ring.ring().nvars(), 2);
        let h = hh_resolution(&s, 3, &[0], &b()).unwrap();
        assert_eq!(h.dims(), vec![1, 1, 0, 0]);
        let seq = vec![parse_poly(d.ring.ring(), "u1_1 - 1").unwrap()];
        let k = hh_koszul(&s, &seq, 3, &[0], &b()).unwrap();
        assert_eq!(k.dims(), vec![1, 1, 0, 0]);
    }

    #[test]
    fn kummer_tor() {
        let q = hh_resolution(&kummer(ScalarField::Rationals, 2), 3, &[0], &b()).unwrap();
        assert_eq!(q.dims(), vec![1, 0, 0, 0]);
        let f2 = hh_resolution(&kummer(ScalarField::prime(2).unwrap(), 2), 3, &[0], &b()).unwrap();
        assert_eq!(f2.dims(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn node_tor_matches_omega() {
        let s = node(ScalarField::Rationals);
        let box_ = [0, 1, 2, 3, 4];
        let h = hh_resolution(&s, 3, &box_, &b()).unwrap();
        let v: Vec<usize> = h.tables[1].values().copied().collect();
        assert_eq!(v, vec![1, 2, 2, 2, 2]);
        assert!(h.tables[2].values().all(|&x| x == 0));
        assert!(h.tables[3].values().all(|&x| x == 0));
        let d = log_diagonal_ring(&s, &b()).unwrap();
        let seq = vec![parse_poly(d.ring.ring(), "u1_1 - 1").unwrap()];
        let mut k = hh_koszul(&s, &seq, 3, &box_, &b()).unwrap();
        assert!(cross_check_koszul(&s, &mut k, &box_, &b()).unwrap());
    }

    #[test]
    fn polynomial_line_koszul() {
        let s = trivial(ScalarField::Rationals, &["x"], &[1], &[]);
        let d = log_diagonal_ring(&s, &b()).unwrap();
        let seq = vec![parse_poly(d.ring.ring(), "x_0 - x_1").unwrap()];
        let k = hh_koszul(&s, &seq, 2, &[0, 1, 2], &b()).unwrap();
        assert_eq!(k.tables[1].values().copied().collect::<Vec<_>>(), vec![0, 1, 1]);
        let bad = vec![parse_poly(d.ring.ring(), "x_0^2 - x_1^2").unwrap()];
        assert!(matches!(hh_koszul(&s, &bad, 2, &[0], &b()), Err(Error::NotGenerating(_))));
    }
}
