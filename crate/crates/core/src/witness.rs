//! Dual witnesses: signed functions on a promise domain whose high
//! orthogonal content and large correlation certify degree lower bounds.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::domain::DomainPoint;
use crate::error::{Error, Result};
use crate::poly::{for_each_subset, Monomial};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::zoo::PromiseFunction;

/// Orthogonal content: the least degree of a monomial with nonzero
/// correlation, or infinity when every moment vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orth {
    Finite(usize),
    Infinite,
}

impl Orth {
    pub fn at_least(&self, d: usize) -> bool {
        match self {
            Orth::Finite(o) => *o >= d,
            Orth::Infinite => true,
        }
    }
}

impl fmt::Display for Orth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Orth::Finite(d) => write!(f, "{d}"),
            Orth::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualWitness {
    n: usize,
    r: usize,
    values: BTreeMap<DomainPoint, Rational>,
    /// Degree bound this witness is meant to certify.
    pub claimed_orth: usize,
    /// Error level this witness is meant to beat.
    pub claimed_eps: Rational,
}

impl DualWitness {
    /// Zero entries are dropped.
    pub fn new(
        n: usize,
        r: usize,
        values: impl IntoIterator<Item = (DomainPoint, Rational)>,
        claimed_orth: usize,
        claimed_eps: Rational,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (x, v) in values {
            if x.rows() != n || x.as_slice().iter().any(|&c| c as usize >= r) {
                return Err(Error::Dimension(format!("witness point {x} is not in D_{{{n},{r}}}")));
            }
            if !v.is_zero() && map.insert(x.clone(), v).is_some() {
                return Err(Error::Format(format!("duplicate witness point {x}")));
            }
        }
        Ok(DualWitness {
            n,
            r,
            values: map,
            claimed_orth,
            claimed_eps,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Nonzero entries in lexicographic point order.
    pub fn values(&self) -> &BTreeMap<DomainPoint, Rational> {
        &self.values
    }

    pub fn value(&self, x: &DomainPoint) -> Rational {
        self.values.get(x).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support_len(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn l1_norm(&self) -> Rational {
        self.values.values().map(|v| v.abs()).sum()
    }

    /// `<f, psi>`; fails on the first support point outside `f`'s domain.
    pub fn correlation(&self, f: &PromiseFunction) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (x, v) in &self.values {
            if f.evaluate(x)? {
                acc += v;
            }
        }
        Ok(acc)
    }

    /// First support point outside `f`'s domain, if any.
    pub fn support_leak(&self, f: &PromiseFunction) -> Option<&DomainPoint> {
        self.values.keys().find(|x| !f.contains(x))
    }

    /// `<f,psi> / ||psi||_1`, or `None` for the zero witness.
    pub fn ratio(&self, f: &PromiseFunction) -> Result<Option<Rational>> {
        if self.is_zero() {
            return Ok(None);
        }
        Ok(Some(self.correlation(f)? / self.l1_norm()))
    }

    /// Rescaled to `||psi||_1 = 1` (the zero witness is returned unchanged).
    pub fn normalized(&self) -> DualWitness {
        let norm = self.l1_norm();
        if norm.is_zero() || norm.is_one() {
            return self.clone();
        }
        DualWitness {
            n: self.n,
            r: self.r,
            values: self.values.iter().map(|(x, v)| (x.clone(), v / &norm)).collect(),
            claimed_orth: self.claimed_orth,
            claimed_eps: self.claimed_eps.clone(),
        }
    }

    /// All degree-`t` moments `sum_x psi(x) m(x)`; monomials absent from the
    /// map have moment zero.
    pub fn moments(&self, t: usize) -> HashMap<Monomial, Rational> {
        let mut out: HashMap<Monomial, Rational> = HashMap::new();
        for (x, v) in &self.values {
            for_each_subset(self.n, t, |rows| {
                *out.entry(Monomial::on_rows(x, rows)).or_insert_with(Rational::zero) += v;
            });
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Smallest-in-canonical-order monomial of degree `< d` with nonzero
    /// moment, i.e. the obstruction to `orth >= d`.
    pub fn orth_violation(&self, d: usize) -> Option<(Monomial, Rational)> {
        (0..d.min(self.n + 1)).find_map(|t| self.moments(t).into_iter().min_by(|a, b| a.0.cmp(&b.0)))
    }

    pub fn orth_at_least(&self, d: usize) -> bool {
        self.orth_violation(d).is_none()
    }

    /// Exact orthogonal content.
    pub fn orth(&self) -> Orth {
        (0..=self.n)
            .find(|&t| !self.moments(t).is_empty())
            .map_or(Orth::Infinite, Orth::Finite)
    }

    pub fn to_json(&self) -> WitnessJson {
        WitnessJson {
            n: self.n,
            r: self.r,
            points: self.values.keys().map(DomainPoint::to_one_based).collect(),
            values: self.values.values().map(format_rational).collect(),
            orth: self.claimed_orth,
            eps: format_rational(&self.claimed_eps),
        }
    }

    pub fn from_json(json: &WitnessJson) -> Result<Self> {
        if json.points.len() != json.values.len() {
            return Err(Error::Format(format!(
                "{} points but {} values",
                json.points.len(),
                json.values.len()
            )));
        }
        let entries = json
            .points
            .iter()
            .zip(&json.values)
            .map(|(p, v)| {
                if p.len() != json.n {
                    return Err(Error::Dimension(format!("witness point {p:?} has wrong length")));
                }
                Ok((DomainPoint::from_one_based(p, json.r)?, parse_rational(v)?))
            })
            .collect::<Result<Vec<_>>>()?;
        DualWitness::new(json.n, json.r, entries, json.orth, parse_rational(&json.eps)?)
    }
}

/// `{"points":[[...]],"values":["p/q",...],"orth":int,"eps":"p/q"}` plus the
/// ambient dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub n: usize,
    pub r: usize,
    pub points: Vec<Vec<usize>>,
    pub values: Vec<String>,
    pub orth: usize,
    pub eps: String,
}
