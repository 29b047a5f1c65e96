//! JSON problem files.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::ScalarField;
use crate::grobner::{parse_poly, Budget, MonomialOrder, Poly, PolyRing};
use crate::logring::{AlgebraPresentation, LogRingSpec};
use crate::monoidlat::{AffineMonoid, MonoidMap};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub field: String,
    #[serde(default)]
    pub base: BaseBlock,
    pub total: TotalBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grading: Option<Grading>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<Budget>,
    pub tasks: Vec<Task>,
}

/// `{"free": r}` or `{"generators": [[...], ...]}` in a lattice of rank
/// `rank` (inferred from the generators when omitted).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingBlock {
    #[serde(default)]
    pub variables: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inverted: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseBlock {
    pub monoid: MonoidBlock,
    #[serde(default)]
    pub ring: RingBlock,
    #[serde(default)]
    pub chart: Vec<String>,
}

impl Default for BaseBlock {
    fn default() -> Self {
        BaseBlock {
            monoid: MonoidBlock {
                free: Some(0),
                ..Default::default()
            },
            ring: RingBlock::default(),
            chart: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TotalBlock {
    pub monoid: MonoidBlock,
    /// Image of each base generator as a vector of the lattice of `P`.
    #[serde(default)]
    pub theta: Vec<Vec<i64>>,
    #[serde(default)]
    pub ring: RingBlock,
    /// Image in `A` of each base-ring variable.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub base_map: Vec<String>,
    #[serde(default)]
    pub chart: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grading {
    pub weights: BTreeMap<String, i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendName {
    Bar,
    Koszul,
    Resolution,
    Theta,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HcRoute {
    #[default]
    Bicomplex,
    DeRham,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "snake_case", deny_unknown_fields)]
pub enum Task {
    Hh {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        backend: Option<BackendName>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        degrees: Option<Vec<i64>>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        regular_sequence: Vec<String>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        cross_check: bool,
    },
    Hc {
        m_max: usize,
        #[serde(default)]
        route: HcRoute,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        degrees: Option<Vec<i64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        width: Option<usize>,
    },
    Omega {
        #[serde(default = "one")]
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        degrees: Option<Vec<i64>>,
    },
    Derham {
        m_max: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        degrees: Option<Vec<i64>>,
    },
    Hkr {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        degrees: Option<Vec<i64>>,
    },
    Sbi {
        m_max: usize,
    },
    Adams {
        n: usize,
        k: Vec<usize>,
    },
    ThetaComplex {
        n: usize,
    },
    Oracle {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        m_max: Option<usize>,
    },
}

fn one() -> usize {
    1
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Hh { .. } => "hh",
            Task::Hc { .. } => "hc",
            Task::Omega { .. } => "omega",
            Task::Derham { .. } => "derham",
            Task::Hkr { .. } => "hkr",
            Task::Sbi { .. } => "sbi",
            Task::Adams { .. } => "adams",
            Task::ThetaComplex { .. } => "theta_complex",
            Task::Oracle { .. } => "oracle",
        }
    }
}

/// Line and column (1-based) of a byte offset.
fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let p: ProblemFile = serde_json::from_str(text).map_err(|e| {
        let msg = e.to_string();
        let msg = msg.split(" at line").next().unwrap_or(&msg).to_string();
        match e.classify() {
            serde_json::error::Category::Data => Error::Schema(format!("{msg} (line {}, column {})", e.line(), e.column())),
            _ => Error::Parse {
                line: e.line(),
                column: e.column(),
                message: msg,
                expected: "valid JSON".into(),
            },
        }
    })?;
    p.check_polynomials(text)?;
    Ok(p)
}

impl ProblemFile {
    pub fn field(&self) -> Result<ScalarField> {
        ScalarField::parse(&self.field)
    }

    pub fn budget(&self) -> Budget {
        self.budget.clone().unwrap_or_default()
    }

    fn weights(&self, names: &[String]) -> Result<Vec<i64>> {
        let w = match &self.grading {
            None => return Ok(vec![0; names.len()]),
            Some(g) => &g.weights,
        };
        Ok(names.iter().map(|n| w.get(n).copied().unwrap_or(0)).collect())
    }

    fn graded(&self) -> bool {
        self.grading.as_ref().map_or(false, |g| g.weights.values().any(|&w| w != 0))
    }

    /// The degree box used when a task does not give one.
    pub fn default_degrees(&self) -> Vec<i64> {
        if self.graded() {
            (0..=4).collect()
        } else {
            vec![0]
        }
    }

    fn polynomial_strings(&self) -> Vec<(String, &str)> {
        let groups: [(&str, &[String]); 5] = [
            ("base.ring.relations", &self.base.ring.relations),
            ("base.chart", &self.base.chart),
            ("total.ring.relations", &self.total.ring.relations),
            ("total.base_map", &self.total.base_map),
            ("total.chart", &self.total.chart),
        ];
        groups
            .iter()
            .flat_map(|(name, xs)| xs.iter().enumerate().map(move |(i, s)| (format!("{name}[{i}]"), s.as_str())))
            .collect()
    }

    /// Parses every polynomial string; grammar errors are reported at their
    /// position in the file.
    fn check_polynomials(&self, text: &str) -> Result<()> {
        for (path, s) in self.polynomial_strings() {
            if let Err(Error::Parse {
                line,
                column,
                message,
                expected,
            }) = crate::grobner::parse_expr(s)
            {
                let quoted = serde_json::to_string(s).expect("string serializes");
                let located = text.find(&quoted).map(|off| position(text, off + 1));
                let (line, column) = match located {
                    Some((l, c)) if line == 1 => (l, c + column - 1),
                    _ => (line, column),
                };
                return Err(Error::Parse {
                    line,
                    column,
                    message: format!("{path}: {message}"),
                    expected,
                });
            }
        }
        Ok(())
    }

    pub fn to_spec(&self) -> Result<LogRingSpec> {
        let field = self.field()?;
        let q = monoid(&self.base.monoid, "base")?;
        let p = monoid(&self.total.monoid, "total")?;
        let base_names = self.base.ring.variables.clone();
        let kr = PolyRing::with_options(
            field,
            base_names.clone(),
            &self.base.ring.inverted,
            MonomialOrder::DegRevLex,
            Some(self.weights(&base_names)?),
        )?;
        let names = self.total.ring.variables.clone();
        let ar = PolyRing::with_options(
            field,
            names.clone(),
            &self.total.ring.inverted,
            MonomialOrder::DegRevLex,
            Some(self.weights(&names)?),
        )?;
        if let Some(g) = &self.grading {
            for n in g.weights.keys() {
                if !names.contains(n) && !base_names.contains(n) {
                    return Err(Error::Schema(format!("grading names unknown variable `{n}`")));
                }
            }
        }
        let polys = |ring: &PolyRing, xs: &[String]| -> Result<Vec<Poly>> { xs.iter().map(|s| parse_poly(ring, s)).collect() };
        let mut images = Vec::new();
        for (i, v) in self.total.theta.iter().enumerate() {
            images.push(express(&p, v).ok_or_else(|| {
                Error::Schema(format!("theta image {v:?} of base generator {} does not lie in P", i + 1))
            })?);
        }
        if images.len() != q.len() {
            return Err(Error::Schema(format!(
                "theta gives {} images for {} base generators",
                images.len(),
                q.len()
            )));
        }
        Ok(LogRingSpec {
            field,
            base_monoid: q.clone(),
            base_ring: AlgebraPresentation::new(kr.clone(), polys(&kr, &self.base.ring.relations)?),
            base_chart: polys(&kr, &self.base.chart)?,
            total_monoid: p.clone(),
            theta: MonoidMap::new(q, p, images)?,
            total_ring: AlgebraPresentation::new(ar.clone(), polys(&ar, &self.total.ring.relations)?),
            base_map: polys(&ar, &self.total.base_map)?,
            total_chart: polys(&ar, &self.total.chart)?,
        })
    }
}

fn monoid(b: &MonoidBlock, which: &str) -> Result<AffineMonoid> {
    match (b.free, &b.generators) {
        (Some(r), None) if b.rank.map_or(true, |k| k == r) => Ok(AffineMonoid::free(r)),
        (None, Some(g)) => {
            let rank = match (b.rank, g.first()) {
                (Some(r), _) => r,
                (None, Some(v)) => v.len(),
                (None, None) => 0,
            };
            AffineMonoid::new(rank, g.clone())
        }
        _ => Err(Error::Schema(format!("{which}.monoid needs exactly one of `free` or `generators`"))),
    }
}

/// An `N`-combination of the generators of `p` equal to `v`, with the
/// smallest coefficient sum (first in lexicographic order among those).
pub fn express(p: &AffineMonoid, v: &[i64]) -> Option<Vec<u64>> {
    if v.len() != p.ambient_rank {
        return None;
    }
    let k = p.len();
    let gens = &p.generators;
    let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
    let r = p.ambient_rank;
    // a grading positive on every generator bounds the coefficient sum
    let mut phi = None;
    let box_size = 7i64.pow(r as u32).min(100_000);
    for code in 0..box_size {
        let mut c = code;
        let cand: Vec<i64> = (0..r)
            .map(|_| {
                let x = c % 7 - 3;
                c /= 7;
                x
            })
            .collect();
        if gens.iter().all(|g| dot(&cand, g) > 0) {
            phi = Some(cand);
            break;
        }
    }
    let max_total: u64 = match &phi {
        Some(f) => {
            let fv = dot(f, v);
            if fv < 0 {
                return None;
            }
            let least = gens.iter().map(|g| dot(f, g)).min().unwrap_or(1).max(1);
            (fv / least) as u64
        }
        None if k == 0 => 0,
        None => 64,
    };
    fn search(gens: &[Vec<i64>], j: usize, rest: &mut Vec<i64>, left: u64, c: &mut Vec<u64>) -> bool {
        if j == gens.len() {
            return left == 0 && rest.iter().all(|&x| x == 0);
        }
        if j + 1 == gens.len() {
            for (x, g) in rest.iter_mut().zip(&gens[j]) {
                *x -= g * left as i64;
            }
            c.push(left);
            let ok = rest.iter().all(|&x| x == 0);
            for (x, g) in rest.iter_mut().zip(&gens[j]) {
                *x += g * left as i64;
            }
            if ok {
                return true;
            }
            c.pop();
            return false;
        }
        for a in 0..=left {
            for (x, g) in rest.iter_mut().zip(&gens[j]) {
                *x -= g * a as i64;
            }
            c.push(a);
            if search(gens, j + 1, rest, left - a, c) {
                for (x, g) in rest.iter_mut().zip(&gens[j]) {
                    *x += g * a as i64;
                }
                return true;
            }
            c.pop();
            for (x, g) in rest.iter_mut().zip(&gens[j]) {
                *x += g * a as i64;
            }
        }
        false
    }
    for total in 0..=max_total {
        let mut rest = v.to_vec();
        let mut c = Vec::new();
        if search(gens, 0, &mut rest, total, &mut c) {
            return Some(c);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn express_prefers_short_combinations() {
        let p = AffineMonoid::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(express(&p, &[1, 1]), Some(vec![0, 0, 1]));
        assert_eq!(express(&p, &[2, 1]), Some(vec![1, 0, 1]));
        assert_eq!(express(&p, &[-1, 0]), None);
        assert_eq!(express(&AffineMonoid::free(1), &[3]), Some(vec![3]));
        assert_eq!(express(&AffineMonoid::trivial(), &[]), Some(vec![]));
    }

    #[test]
    fn positions() {
        assert_eq!(position("ab\ncd", 4), (2, 2));
        assert_eq!(position("ab", 0), (1, 1));
    }
}
