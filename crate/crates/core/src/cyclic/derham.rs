use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::grobner::Budget;
use crate::logring::{log_de_rham, LogRingSpec};

/// `HC_m = Ω^m / dΩ^{m-1} ⊕ ⊕_{i≥1} H^{m-2i}` per internal degree, for
/// `m = 0..=m_max`.
pub fn hc_de_rham(
    spec: &LogRingSpec,
    m_max: usize,
    degrees: &[i64],
    budget: &Budget,
) -> Result<Vec<BTreeMap<i64, usize>>> {
    let p = spec.field.characteristic();
    if p != 0 {
        return Err(Error::WrongCharacteristic(p));
    }
    let c = log_de_rham(spec, m_max + 1, budget)?;
    let mut h = Vec::new();
    for m in 0..=m_max {
        let row = degrees
            .iter()
            .map(|&d| c.cohomology(m, d).map(|x| (d, x)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        h.push(row);
    }
    (0..=m_max)
        .map(|m| {
            degrees
                .iter()
                .map(|&d| {
                    let mut total = c.cokernel_of_d(m, d)?;
                    let mut k = m;
                    while k >= 2 {
                        k -= 2;
                        total += h[k][&d];
                    }
                    Ok((d, total))
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::tests::*;
    use super::*;
    use crate::exactlin::ScalarField;
    use crate::logring::fixtures::*;

    fn dims(t: &[BTreeMap<i64, usize>]) -> Vec<usize> {
        t.iter().map(|r| r.values().sum()).collect()
    }

    #[test]
    fn log_point_all_ones() {
        let t = hc_de_rham(&log_point(ScalarField::Rationals), 5, &[0], &Budget::default()).unwrap();
        assert_eq!(dims(&t), vec![1; 6]);
    }

    #[test]
    fn polynomial_line() {
        let s = trivial(ScalarField::Rationals, &["x"], &[1], &[]);
        let t = hc_de_rham(&s, 2, &[0, 1, 2, 3, 4], &Budget::default()).unwrap();
        assert_eq!(t[0].values().copied().collect::<Vec<_>>(), vec![1, 1, 1, 1, 1]);
        assert_eq!(t[1].values().copied().collect::<Vec<_>>(), vec![0, 0, 0, 0, 0]);
        assert_eq!(t[2].values().copied().collect::<Vec<_>>(), vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn two_points_alternate() {
        let t = hc_de_rham(&two_points(), 4, &[0], &Budget::default()).unwrap();
        assert_eq!(dims(&t), vec![2, 0, 2, 0, 2]);
    }

    #[test]
    fn positive_characteristic_rejected() {
        let s = kummer(ScalarField::prime(2).unwrap(), 2);
        assert!(matches!(hc_de_rham(&s, 2, &[0], &Budget::default()), Err(Error::WrongCharacteristic(2))));
    }
}
