//! Multilinear polynomials in the matrix variables `x_{i,j}`, restricted to
//! distinct-row monomials (a product of two variables from one row vanishes
//! on every `D_{n,r}` point unless they coincide).

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::domain::DomainPoint;
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

/// A product of variables `x_{i,j}` over pairwise distinct rows, kept sorted
/// by row. Pairs are 0-based.
///
/// Ordering is the canonical basis order: by degree, then lexicographically
/// by the sorted pair list.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(u16, u16)>);

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// Builds a monomial from arbitrary 0-based pairs. Returns `Ok(None)`
    /// when two pairs share a row with different columns: such a product is
    /// identically zero on the domain. Repeated identical pairs collapse
    /// (`x^2 = x` on 0/1 inputs).
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Option<Monomial> {
        let mut sorted: Vec<(u16, u16)> = pairs.iter().map(|&(i, j)| (i as u16, j as u16)).collect();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.windows(2).any(|w| w[0].0 == w[1].0) {
            return None;
        }
        Some(Monomial(sorted))
    }

    /// From pairs already sorted by strictly increasing row.
    pub(crate) fn from_sorted(pairs: Vec<(u16, u16)>) -> Monomial {
        debug_assert!(pairs.windows(2).all(|w| w[0].0 < w[1].0));
        Monomial(pairs)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn pairs(&self) -> &[(u16, u16)] {
        &self.0
    }

    pub fn eval(&self, x: &DomainPoint) -> bool {
        self.0.iter().all(|&(i, j)| x.as_slice()[i as usize] == j)
    }

    /// The monomial `prod_{i in rows} x_{i, x(i)}`, i.e. the one that `x`
    /// satisfies on exactly those rows.
    pub fn on_rows(x: &DomainPoint, rows: &[usize]) -> Monomial {
        Monomial(rows.iter().map(|&i| (i as u16, x.as_slice()[i])).collect())
    }

    pub fn fits(&self, n: usize, r: usize) -> bool {
        self.0.iter().all(|&(i, j)| (i as usize) < n && (j as usize) < r)
    }
}

/// Evaluates a raw product of variables straight from the one-hot matrix,
/// without any monomial normalization.
pub fn eval_raw_product(pairs: &[(usize, usize)], x: &DomainPoint, r: usize) -> bool {
    let matrix = x.one_hot(r);
    pairs.iter().all(|&(i, j)| matrix[i][j])
}

/// Calls `visit` with every `t`-subset of `0..n` in lexicographic order.
pub fn for_each_subset(n: usize, t: usize, mut visit: impl FnMut(&[usize])) {
    if t > n {
        return;
    }
    let mut idx: Vec<usize> = (0..t).collect();
    loop {
        visit(&idx);
        let Some(pos) = (0..t).rev().find(|&p| idx[p] < n - t + p) else {
            return;
        };
        idx[pos] += 1;
        for q in pos + 1..t {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// All distinct-row monomials of degree at most `d` on `n x r` matrices in
/// canonical order. There are `sum_t C(n,t) r^t` of them.
pub fn enumerate_monomials(n: usize, r: usize, d: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    for t in 0..=d.min(n) {
        let start = out.len();
        for_each_subset(n, t, |rows| {
            let mut cols = vec![0u16; t];
            loop {
                out.push(Monomial(
                    rows.iter().zip(&cols).map(|(&i, &j)| (i as u16, j)).collect(),
                ));
                let Some(pos) = (0..t).rev().find(|&p| (cols[p] as usize) + 1 < r) else {
                    break;
                };
                cols[pos] += 1;
                for c in &mut cols[pos + 1..] {
                    *c = 0;
                }
            }
        });
        out[start..].sort();
    }
    out
}

/// A polynomial with exact rational coefficients; zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePolynomial {
    n: usize,
    r: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl SparsePolynomial {
    pub fn zero(n: usize, r: usize) -> Self {
        SparsePolynomial {
            n,
            r,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, r: usize, c: Rational) -> Self {
        let mut p = Self::zero(n, r);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn monomial(n: usize, r: usize, m: Monomial) -> Self {
        let mut p = Self::zero(n, r);
        p.add_term(m, Rational::one());
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert!(m.fits(self.n, self.r));
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &SparsePolynomial, scale: &Rational) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * scale);
        }
    }

    /// Total degree; `None` stands for the `-inf` degree of the zero
    /// polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn eval(&self, x: &DomainPoint) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            if m.eval(x) {
                acc += c;
            }
        }
        acc
    }

    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            n: self.n,
            r: self.r,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    pairs: m
                        .pairs()
                        .iter()
                        .map(|&(i, j)| [i as usize + 1, j as usize + 1])
                        .collect(),
                    coeff: format_rational(c),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &PolynomialJson) -> Result<Self> {
        let mut p = SparsePolynomial::zero(json.n, json.r);
        for term in &json.terms {
            let pairs = term
                .pairs
                .iter()
                .map(|&[i, j]| {
                    if i == 0 || j == 0 || i > json.n || j > json.r {
                        Err(Error::Format(format!("pair ({i},{j}) out of range")))
                    } else {
                        Ok((i - 1, j - 1))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let coeff = parse_rational(&term.coeff)?;
            if let Some(m) = Monomial::from_pairs(&pairs) {
                p.add_term(m, coeff);
            }
        }
        Ok(p)
    }
}

/// `{"n","r","terms":[{"pairs":[[row,col],...],"coeff":"p/q"}]}`, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub n: usize,
    pub r: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub pairs: Vec<[usize; 2]>,
    pub coeff: String,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::enumerate;
    use crate::rational::{int, rat};

    fn pt(cols: &[usize], r: usize) -> DomainPoint {
        DomainPoint::from_one_based(cols, r).unwrap()
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(enumerate_monomials(2, 2, 1).len(), 5);
        assert_eq!(enumerate_monomials(3, 3, 2).len(), 37);
        assert_eq!(enumerate_monomials(2, 2, 2).len(), 9);
        assert_eq!(enumerate_monomials(4, 4, 4).len(), 625);
    }

    #[test]
    fn canonical_order_is_sorted_and_unique() {
        let ms = enumerate_monomials(3, 2, 3);
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(ms[0], Monomial::one());
    }

    #[test]
    fn evaluation_examples() {
        let m = Monomial::from_pairs(&[(0, 0)]).unwrap();
        let p = SparsePolynomial::monomial(2, 2, m);
        assert_eq!(p.eval(&pt(&[1, 2], 2)), int(1));
        let z = SparsePolynomial::zero(2, 2);
        assert_eq!(z.eval(&pt(&[1, 2], 2)), int(0));
        assert_eq!(z.degree(), None);
        let m2 = Monomial::from_pairs(&[(0, 0), (1, 0)]).unwrap();
        let p2 = SparsePolynomial::monomial(2, 2, m2);
        assert_eq!(p2.eval(&pt(&[1, 1], 2)), int(1));
        assert_eq!(p2.eval(&pt(&[1, 2], 2)), int(0));
        assert_eq!(p2.degree(), Some(2));
    }

    #[test]
    fn row_collisions_vanish() {
        for n in 1..=3 {
            for r in 2..=3 {
                let pts = enumerate(n, r).unwrap();
                for i in 0..n {
                    for j1 in 0..r {
                        for j2 in 0..r {
                            if j1 == j2 {
                                continue;
                            }
                            let pairs = [(i, j1), (i, j2)];
                            assert!(Monomial::from_pairs(&pairs).is_none());
                            assert!(pts.iter().all(|x| !eval_raw_product(&pairs, x, r)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cancelling_terms_are_dropped() {
        let mut p = SparsePolynomial::zero(2, 2);
        let m = Monomial::from_pairs(&[(1, 1)]).unwrap();
        p.add_term(m.clone(), rat(1, 2));
        p.add_term(m, rat(-1, 2));
        assert!(p.is_zero());
    }

    #[test]
    fn json_round_trip() {
        let mut p = SparsePolynomial::zero(3, 2);
        p.add_term(Monomial::one(), rat(-1, 4));
        p.add_term(Monomial::from_pairs(&[(0, 1), (2, 0)]).unwrap(), rat(3, 7));
        let text = serde_json::to_string(&p.to_json()).unwrap();
        assert!(text.contains("\"3/7\""));
        let q = SparsePolynomial::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn subsets_lexicographic() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, |s| seen.push(s.to_vec()));
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![0, 1]);
        assert_eq!(seen[5], vec![2, 3]);
        let mut empty = 0;
        for_each_subset(3, 0, |_| empty += 1);
        assert_eq!(empty, 1);
    }
}
