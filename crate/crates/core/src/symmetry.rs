//! Row/column permutation symmetry: exact group averaging of polynomials and
//! the orbit-sum basis used to shrink symmetric LPs.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::domain::DomainPoint;
use crate::error::{Error, Result};
use crate::poly::{enumerate_monomials, Monomial, SparsePolynomial};
use crate::rational::{factorial, Rational};
use crate::zoo::{permutations, PromiseFunction};

/// Which permutation group a function is invariant under: all row
/// permutations, all column permutations, or their product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Symmetry {
    pub rows: bool,
    pub cols: bool,
}

impl Symmetry {
    pub const NONE: Symmetry = Symmetry {
        rows: false,
        cols: false,
    };
    pub const FULL: Symmetry = Symmetry {
        rows: true,
        cols: true,
    };

    pub fn is_trivial(&self) -> bool {
        !self.rows && !self.cols
    }
}

/// Tests closure of the domain and invariance of the labels under the
/// transpositions `(1 i)` of rows and of columns, which generate the full
/// symmetric groups.
pub fn detect_symmetry(f: &PromiseFunction) -> Symmetry {
    let invariant = |act: &dyn Fn(&DomainPoint) -> DomainPoint| {
        f.iter()
            .all(|(x, label)| matches!(f.evaluate(&act(x)), Ok(l) if l == label))
    };
    let rows = (1..f.n()).all(|i| {
        invariant(&|x: &DomainPoint| {
            let mut v = x.as_slice().to_vec();
            v.swap(0, i);
            DomainPoint::new(v)
        })
    });
    let cols = (1..f.r()).all(|j| {
        invariant(&|x: &DomainPoint| {
            DomainPoint::new(
                x.as_slice()
                    .iter()
                    .map(|&c| match c as usize {
                        0 => j as u16,
                        c if c == j => 0,
                        _ => c,
                    })
                    .collect(),
            )
        })
    });
    Symmetry { rows, cols }
}

/// A pair `(sigma, tau)` of row and column permutations acting on monomials
/// by `x_{i,j} -> x_{sigma(i), tau(j)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    sigma: Vec<usize>,
    tau: Vec<usize>,
}

fn is_bijection(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&v| v < p.len() && !std::mem::replace(&mut seen[v], true))
}

impl GroupElement {
    pub fn new(sigma: Vec<usize>, tau: Vec<usize>) -> Result<Self> {
        if !is_bijection(&sigma) || !is_bijection(&tau) {
            return Err(Error::InvalidParameter("group element entries must be bijections".into()));
        }
        Ok(GroupElement { sigma, tau })
    }

    pub fn apply(&self, m: &Monomial) -> Monomial {
        let mut pairs: Vec<(u16, u16)> = m
            .pairs()
            .iter()
            .map(|&(i, j)| (self.sigma[i as usize] as u16, self.tau[j as usize] as u16))
            .collect();
        pairs.sort_unstable();
        Monomial::from_sorted(pairs)
    }

    /// The point `x'` with `x'_{sigma(i), tau(j)} = x_{i,j}`, so that
    /// `apply(m)` holds at `x'` iff `m` holds at `x`.
    pub fn apply_point(&self, x: &DomainPoint) -> DomainPoint {
        let mut out = vec![0u16; x.rows()];
        for (i, &c) in x.as_slice().iter().enumerate() {
            out[self.sigma[i]] = self.tau[c as usize] as u16;
        }
        DomainPoint::new(out)
    }
}

/// Largest square size for which [`symmetrize`] averages over the full group.
pub const SYMMETRIZE_MAX_N: usize = 5;

/// `p*(x) = E p(sigma x tau)` over uniformly random row and column
/// permutations, computed as an exact average over all `(n!)^2` group
/// elements.
pub fn symmetrize(p: &SparsePolynomial) -> Result<SparsePolynomial> {
    let n = p.n();
    if p.r() != n {
        return Err(Error::Dimension(format!(
            "symmetrization needs square matrices, got {}x{}",
            n,
            p.r()
        )));
    }
    if n > SYMMETRIZE_MAX_N {
        return Err(Error::SizeLimit {
            what: format!("group average over (S_{n})^2"),
            size: n as u128,
            limit: SYMMETRIZE_MAX_N as u128,
        });
    }
    let perms = permutations(n);
    let mut sums: HashMap<Monomial, Rational> = HashMap::new();
    for sigma in &perms {
        for tau in &perms {
            let g = GroupElement {
                sigma: sigma.clone(),
                tau: tau.clone(),
            };
            for (m, c) in p.terms() {
                *sums.entry(g.apply(m)).or_insert_with(Rational::zero) += c;
            }
        }
    }
    let order = Rational::from_integer(factorial(n) * factorial(n));
    let mut out = SparsePolynomial::zero(n, n);
    for (m, c) in sums {
        out.add_term(m, c / &order);
    }
    Ok(out)
}

/// Canonical label of a monomial's orbit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrbitKey {
    Exact(Monomial),
    /// Row permutations only: sorted multiset of columns.
    Rows(Vec<u16>),
    /// Column permutations only: rows kept, columns renamed by first use.
    Cols(Vec<(u16, u16)>),
    /// Both: sorted column-fiber sizes.
    Both(Vec<u16>),
}

fn first_use_relabel(cols: impl Iterator<Item = u16>) -> Vec<u16> {
    let mut names: Vec<u16> = Vec::new();
    cols.map(|c| match names.iter().position(|&x| x == c) {
        Some(p) => p as u16,
        None => {
            names.push(c);
            (names.len() - 1) as u16
        }
    })
    .collect()
}

fn fiber_sizes(cols: impl Iterator<Item = u16>) -> Vec<u16> {
    let mut counts: BTreeMap<u16, u16> = BTreeMap::new();
    for c in cols {
        *counts.entry(c).or_default() += 1;
    }
    let mut sizes: Vec<u16> = counts.into_values().collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

pub fn orbit_key(m: &Monomial, sym: Symmetry) -> OrbitKey {
    let cols = || m.pairs().iter().map(|&(_, j)| j);
    match (sym.rows, sym.cols) {
        (false, false) => OrbitKey::Exact(m.clone()),
        (true, false) => {
            let mut v: Vec<u16> = cols().collect();
            v.sort_unstable();
            OrbitKey::Rows(v)
        }
        (false, true) => OrbitKey::Cols(
            m.pairs()
                .iter()
                .map(|&(i, _)| i)
                .zip(first_use_relabel(cols()))
                .collect(),
        ),
        (true, true) => OrbitKey::Both(fiber_sizes(cols())),
    }
}

/// Canonical label of a domain point's orbit.
pub fn point_orbit_key(x: &DomainPoint, sym: Symmetry) -> Vec<u16> {
    let cols = || x.as_slice().iter().copied();
    match (sym.rows, sym.cols) {
        (false, false) => x.as_slice().to_vec(),
        (true, false) => {
            let mut v: Vec<u16> = cols().collect();
            v.sort_unstable();
            v
        }
        (false, true) => first_use_relabel(cols()),
        (true, true) => fiber_sizes(cols()),
    }
}

/// Indices of `f`'s points grouped into orbits, each group ascending, groups
/// ordered by their first index.
pub fn point_orbits(f: &PromiseFunction, sym: Symmetry) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut by_key: HashMap<Vec<u16>, usize> = HashMap::new();
    for (i, x) in f.points().iter().enumerate() {
        let slot = *by_key.entry(point_orbit_key(x, sym)).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[slot].push(i);
    }
    groups
}

/// The sum of all monomials in one orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSum {
    pub key: OrbitKey,
    /// Members in canonical order; the first is the representative.
    pub members: Vec<Monomial>,
}

impl OrbitSum {
    pub fn representative(&self) -> &Monomial {
        &self.members[0]
    }

    pub fn degree(&self) -> usize {
        self.members[0].degree()
    }

    pub fn polynomial(&self, n: usize, r: usize) -> SparsePolynomial {
        let mut p = SparsePolynomial::zero(n, r);
        for m in &self.members {
            p.add_term(m.clone(), Rational::from_integer(BigInt::from(1)));
        }
        p
    }
}

/// One orbit sum per orbit of degree-`<= d` monomials under `sym`, ordered by
/// representative.
pub fn orbit_basis(n: usize, r: usize, d: usize, sym: Symmetry) -> Vec<OrbitSum> {
    let mut orbits: BTreeMap<OrbitKey, Vec<Monomial>> = BTreeMap::new();
    for m in enumerate_monomials(n, r, d) {
        orbits.entry(orbit_key(&m, sym)).or_default().push(m);
    }
    let mut out: Vec<OrbitSum> = orbits
        .into_iter()
        .map(|(key, members)| OrbitSum { key, members })
        .collect();
    out.sort_by(|a, b| a.representative().cmp(b.representative()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::enumerate;
    use crate::rational::{int, rat};
    use crate::zoo::{make_and, make_ed, make_ptp, make_surj};
    use std::collections::HashSet;

    /// Orbits by closing each monomial under explicit group generators.
    fn brute_orbit_count(n: usize, r: usize, d: usize, sym: Symmetry) -> usize {
        let mut gens = Vec::new();
        let id_rows: Vec<usize> = (0..n).collect();
        let id_cols: Vec<usize> = (0..r).collect();
        if sym.rows {
            for i in 1..n {
                let mut s = id_rows.clone();
                s.swap(0, i);
                gens.push(GroupElement::new(s, id_cols.clone()).unwrap());
            }
        }
        if sym.cols {
            for j in 1..r {
                let mut t = id_cols.clone();
                t.swap(0, j);
                gens.push(GroupElement::new(id_rows.clone(), t).unwrap());
            }
        }
        let mut seen: HashSet<Monomial> = HashSet::new();
        let mut count = 0;
        for m in enumerate_monomials(n, r, d) {
            if seen.contains(&m) {
                continue;
            }
            count += 1;
            let mut stack = vec![m.clone()];
            seen.insert(m);
            while let Some(cur) = stack.pop() {
                for g in &gens {
                    let next = g.apply(&cur);
                    if seen.insert(next.clone()) {
                        stack.push(next);
                    }
                }
            }
        }
        count
    }

    #[test]
    fn orbit_counts_match_brute_force() {
        for (n, r) in [(2, 2), (3, 2), (3, 3), (4, 2), (4, 4)] {
            for d in 0..=n {
                for sym in [
                    Symmetry::NONE,
                    Symmetry::FULL,
                    Symmetry { rows: true, cols: false },
                    Symmetry { rows: false, cols: true },
                ] {
                    assert_eq!(
                        orbit_basis(n, r, d, sym).len(),
                        brute_orbit_count(n, r, d, sym),
                        "n={n} r={r} d={d} {sym:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn orbit_examples() {
        let deg1 = orbit_basis(2, 2, 1, Symmetry::FULL);
        assert_eq!(deg1.len(), 2);
        assert_eq!(deg1[1].members.len(), 4);
        assert_eq!(orbit_basis(3, 3, 0, Symmetry::FULL).len(), 1);
        // AND_3 under row permutations: t+1 orbits in degree t
        let rows_only = Symmetry { rows: true, cols: false };
        assert_eq!(orbit_basis(3, 2, 3, rows_only).len(), 10);
        assert_eq!(brute_orbit_count(3, 2, 3, rows_only), 10);
    }

    #[test]
    fn detects_family_symmetry() {
        assert_eq!(detect_symmetry(&make_ed(3, 3).unwrap()), Symmetry::FULL);
        assert_eq!(detect_symmetry(&make_ptp(3, &rat(1, 2)).unwrap()), Symmetry::FULL);
        assert_eq!(detect_symmetry(&make_surj(3, 2).unwrap()), Symmetry::FULL);
        assert_eq!(
            detect_symmetry(&make_and(3).unwrap()),
            Symmetry { rows: true, cols: false }
        );
        let composed =
            crate::zoo::compose_and(2, &make_ed(2, 2).unwrap()).unwrap();
        assert!(!detect_symmetry(&composed).rows);
    }

    #[test]
    fn symmetrize_examples() {
        let c = SparsePolynomial::constant(2, 2, rat(3, 5));
        assert_eq!(symmetrize(&c).unwrap(), c);

        let x11 = SparsePolynomial::monomial(2, 2, Monomial::from_pairs(&[(0, 0)]).unwrap());
        let s = symmetrize(&x11).unwrap();
        assert_eq!(s.terms().len(), 4);
        assert!(s.terms().values().all(|c| *c == rat(1, 4)));
        for x in enumerate(2, 2).unwrap() {
            assert_eq!(s.eval(&x), rat(1, 2));
        }
    }

    #[test]
    fn symmetrize_is_idempotent_and_degree_safe() {
        let mut p = SparsePolynomial::zero(3, 3);
        p.add_term(Monomial::from_pairs(&[(0, 1), (2, 2)]).unwrap(), rat(2, 3));
        p.add_term(Monomial::from_pairs(&[(1, 0)]).unwrap(), int(-1));
        let s = symmetrize(&p).unwrap();
        assert!(s.degree() <= p.degree());
        assert_eq!(symmetrize(&s).unwrap(), s);
    }

    #[test]
    fn group_action_on_points_matches_monomials() {
        let g = GroupElement::new(vec![2, 0, 1], vec![1, 2, 0]).unwrap();
        let m = Monomial::from_pairs(&[(0, 1), (1, 1)]).unwrap();
        for x in enumerate(3, 3).unwrap() {
            assert_eq!(m.eval(&x), g.apply(&m).eval(&g.apply_point(&x)));
        }
        assert!(GroupElement::new(vec![0, 0], vec![0, 1]).is_err());
    }

    #[test]
    fn rejects_non_square_and_oversized() {
        assert!(symmetrize(&SparsePolynomial::zero(2, 3)).is_err());
        assert!(symmetrize(&SparsePolynomial::zero(6, 6)).is_err());
    }
}
