use super::diagonal::{Backend, HochschildClasses};
use super::finite::FiniteLevels;
use super::levels::{degeneracy_coords, face_coords, rotation_coords, LevelData, LevelMap, LevelRing};
use crate::error::Result;
use crate::grobner::Budget;
use crate::logring::LogRingSpec;

/// Level rings `C^0..C^top` with symbolic face, degeneracy and rotation maps.
#[derive(Clone, Debug)]
pub struct ThetaComplex {
    pub data: LevelData,
    pub levels: Vec<LevelRing>,
}

pub fn theta_complex(spec: &LogRingSpec, top: usize, budget: &Budget) -> Result<ThetaComplex> {
    let data = LevelData::new(spec, budget)?;
    let levels = (0..=top)
        .map(|n| LevelRing::build(&data, n, budget))
        .collect::<Result<Vec<_>>>()?;
    Ok(ThetaComplex { data, levels })
}

/// Outcome of the symbolic identity checks; each entry names a failed identity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdentityReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl IdentityReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, holds: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !holds {
            self.failures.push(what());
        }
    }
}

impl ThetaComplex {
    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    fn face(&self, n: usize, i: usize) -> LevelMap {
        LevelMap::coordinate(&self.levels[n], &self.levels[n - 1], &face_coords(n, i))
    }

    fn degeneracy(&self, n: usize, j: usize) -> LevelMap {
        LevelMap::coordinate(&self.levels[n - 1], &self.levels[n], &degeneracy_coords(n, j))
    }

    fn identity(&self, n: usize) -> LevelMap {
        LevelMap::coordinate(&self.levels[n], &self.levels[n], &(0..=n).collect::<Vec<_>>())
    }

    /// Well-definedness of every map and the simplicial and cyclic identities,
    /// as equalities of ring maps on generators.
    pub fn verify(&self) -> IdentityReport {
        let mut rep = IdentityReport::default();
        let l = &self.levels;
        for n in 1..=self.top() {
            for i in 0..=n {
                rep.record(self.face(n, i).is_well_defined(&l[n], &l[n - 1]), || {
                    format!("d{i} well defined at level {n}")
                });
            }
            for j in 0..n {
                rep.record(self.degeneracy(n, j).is_well_defined(&l[n - 1], &l[n]), || {
                    format!("s{j} well defined at level {n}")
                });
            }
            let t = LevelMap::coordinate(&l[n], &l[n], &rotation_coords(n));
            let mut acc = t.clone();
            for _ in 0..n {
                acc = acc.then(&l[n], &l[n], &t);
            }
            rep.record(acc.same_as(&self.identity(n), &l[n]), || format!("τ^{} = 1", n + 1));
        }
        for n in 2..=self.top() {
            for j in 1..=n {
                for i in 0..j {
                    let lhs = self.face(n, j).then(&l[n - 1], &l[n - 2], &self.face(n - 1, i));
                    let rhs = self.face(n, i).then(&l[n - 1], &l[n - 2], &self.face(n - 1, j - 1));
                    rep.record(lhs.same_as(&rhs, &l[n - 2]), || format!("d{i} d{j} = d{} d{i} at level {n}", j - 1));
                }
            }
        }
        for n in 1..=self.top() {
            // d_i s_j on C^{n-1} → C^n → C^{n-1}
            for j in 0..n {
                for i in 0..=n {
                    let lhs = self.degeneracy(n, j).then(&l[n], &l[n - 1], &self.face(n, i));
                    let expected = if i == j || i == j + 1 {
                        Some(self.identity(n - 1))
                    } else if n >= 2 && i < j {
                        Some(self.face(n - 1, i).then(&l[n - 2], &l[n - 1], &self.degeneracy(n - 1, j - 1)))
                    } else if n >= 2 {
                        Some(self.face(n - 1, i - 1).then(&l[n - 2], &l[n - 1], &self.degeneracy(n - 1, j)))
                    } else {
                        None
                    };
                    if let Some(rhs) = expected {
                        rep.record(lhs.same_as(&rhs, &l[n - 1]), || format!("d{i} s{j} at level {n}"));
                    }
                }
            }
        }
        rep
    }
}

/// `HH_n` from the normalized level complex (finite-dimensional levels only).
pub fn hh_theta(spec: &LogRingSpec, top: usize, budget: &Budget) -> Result<HochschildClasses> {
    let fl = FiniteLevels::build(spec, top + 1, budget)?;
    Ok(HochschildClasses {
        backend: Backend::Theta,
        tables: fl.normalized().homology(),
        verified: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::ScalarField;
    use crate::hochschild::hh_bar;
    use crate::logring::fixtures::*;

    #[test]
    fn node_identities_at_level_three() {
        let t = theta_complex(&node(ScalarField::Rationals), 3, &Budget::default()).unwrap();
        let rep = t.verify();
        assert!(rep.ok(), "{:?}", rep.failures);
        assert!(rep.checked > 30);
    }

    #[test]
    fn kummer_theta_agrees_with_bar() {
        let s = kummer(ScalarField::prime(2).unwrap(), 2);
        let t = hh_theta(&s, 3, &Budget::default()).unwrap();
        let b = hh_bar(&s, 3, &Budget::default()).unwrap();
        assert_eq!(t.dims(), b.dims());
    }

    #[test]
    fn kummer3_theta_agrees_with_bar() {
        let s = kummer(ScalarField::Rationals, 3);
        let t = hh_theta(&s, 2, &Budget::default()).unwrap();
        assert_eq!(t.dims(), vec![1, 0, 0]);
    }
}
