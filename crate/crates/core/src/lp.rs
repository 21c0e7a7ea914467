//! Exact approximate-degree LPs.
//!
//! For a promise function `f` and degree `d` we solve the dual form
//!
//! ```text
//! maximize   sum_x f(x) psi(x)
//! subject to sum_x psi(x) m(x) = 0     for every basis function m of degree <= d
//!            sum_x |psi(x)| <= 1
//! ```
//!
//! with `psi = a - b`, `a, b >= 0`. The optimal multipliers of the moment rows
//! are the coefficients of a best degree-`d` approximant and the multiplier of
//! the norm row is the optimal error. When `f` is invariant under row and/or
//! column permutations, `psi` is restricted to be constant on point orbits and
//! the basis shrinks to orbit sums; the optimum is unchanged because averaging
//! any feasible `psi` over the group keeps it feasible with the same value.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::limits::DEFAULT_LP_CELL_LIMIT;
use crate::poly::{enumerate_monomials, for_each_subset, Monomial, SparsePolynomial};
use crate::rational::{format_rational, Rational};
use crate::simplex::{maximize, StandardForm};
use crate::symmetry::{detect_symmetry, orbit_key, point_orbits, OrbitKey, Symmetry};
use crate::witness::DualWitness;
use crate::zoo::PromiseFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sided {
    Two,
    One,
}

impl Sided {
    pub fn as_str(&self) -> &'static str {
        match self {
            Sided::Two => "two",
            Sided::One => "one",
        }
    }
}

#[derive(Clone, Debug)]
pub struct LpOptions {
    /// Use the orbit-sum basis when `f` has a nontrivial symmetry.
    pub use_orbit_basis: bool,
    /// Upper bound on `rows * columns` of the constraint matrix.
    pub cell_limit: u128,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            use_orbit_basis: true,
            cell_limit: DEFAULT_LP_CELL_LIMIT,
        }
    }
}

impl LpOptions {
    pub fn full_basis() -> Self {
        LpOptions {
            use_orbit_basis: false,
            ..LpOptions::default()
        }
    }
}

#[derive(Clone, Debug)]
pub struct LpResult {
    pub degree: usize,
    pub eps_star: Rational,
    /// Optimal approximant of degree `<= degree`.
    pub primal: SparsePolynomial,
    /// Optimal dual, normalized to `||psi||_1 = 1` unless it is zero (which
    /// only happens when `eps_star = 0`).
    pub dual: DualWitness,
    pub sided: Sided,
    pub pivots: usize,
}

struct Setup {
    groups: Vec<Vec<usize>>,
    basis: Vec<Vec<Monomial>>,
    /// `matrix[j][g] = sum_{x in group g} basis_j(x)`.
    matrix: Vec<Vec<i64>>,
}

fn build_setup(f: &PromiseFunction, d: usize, sym: Symmetry) -> Setup {
    let groups = point_orbits(f, sym);
    let mut index: HashMap<OrbitKey, usize> = HashMap::new();
    let mut basis: Vec<Vec<Monomial>> = Vec::new();
    for m in enumerate_monomials(f.n(), f.r(), d) {
        let slot = *index.entry(orbit_key(&m, sym)).or_insert_with(|| {
            basis.push(Vec::new());
            basis.len() - 1
        });
        basis[slot].push(m);
    }
    let mut matrix = vec![vec![0i64; groups.len()]; basis.len()];
    for (g, members) in groups.iter().enumerate() {
        for &i in members {
            let x = &f.points()[i];
            for t in 0..=d.min(f.n()) {
                for_each_subset(f.n(), t, |rows| {
                    let key = orbit_key(&Monomial::on_rows(x, rows), sym);
                    matrix[index[&key]][g] += 1;
                });
            }
        }
    }
    Setup {
        groups,
        basis,
        matrix,
    }
}

const PRIME: u128 = (1 << 61) - 1;

/// Greedy maximal set of rows independent modulo a large prime. Rows
/// independent mod p are independent over the rationals; the converse can
/// fail, which callers detect by checking the dual's moments afterwards.
fn independent_rows_mod_p(matrix: &[Vec<i64>]) -> Vec<usize> {
    let p = PRIME;
    let to_mod = |v: i64| (v.rem_euclid(p as i64)) as u128;
    let mul = |a: u128, b: u128| (a * b) % p;
    let inv = |a: u128| {
        let (mut base, mut e, mut acc) = (a, p - 2, 1u128);
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            e >>= 1;
        }
        acc
    };
    // Echelon rows stored with their pivot column, normalized to pivot 1.
    let mut echelon: Vec<(usize, Vec<u128>)> = Vec::new();
    let mut kept = Vec::new();
    for (j, row) in matrix.iter().enumerate() {
        let mut v: Vec<u128> = row.iter().map(|&x| to_mod(x)).collect();
        for (pc, e) in &echelon {
            let c = v[*pc];
            if c != 0 {
                for (a, b) in v.iter_mut().zip(e) {
                    *a = (*a + p - mul(c, *b)) % p;
                }
            }
        }
        if let Some(pc) = v.iter().position(|&x| x != 0) {
            let s = inv(v[pc]);
            for a in v.iter_mut() {
                *a = mul(*a, s);
            }
            echelon.push((pc, v));
            kept.push(j);
        }
    }
    kept
}

struct Solved {
    eps_star: Rational,
    /// Value of `psi` on each point group.
    psi: Vec<Rational>,
    coeffs: Vec<(usize, Rational)>,
    pivots: usize,
}

fn solve_rows(f: &PromiseFunction, setup: &Setup, rows: &[usize], sided: Sided) -> Result<Solved> {
    let groups = &setup.groups;
    let label: Vec<bool> = groups.iter().map(|g| f.labels()[g[0]]).collect();
    // Column layout: a_g for every group, then b_g for groups that keep it,
    // then the norm slack.
    let mut neg_col: Vec<Option<usize>> = Vec::with_capacity(groups.len());
    let mut cols = groups.len();
    for &l in &label {
        if sided == Sided::One && l {
            neg_col.push(None);
        } else {
            neg_col.push(Some(cols));
            cols += 1;
        }
    }
    let slack = cols;
    cols += 1;

    let mut lp_rows = Vec::with_capacity(rows.len() + 1);
    for &j in rows {
        let mut row = Vec::new();
        for (g, &v) in setup.matrix[j].iter().enumerate() {
            if v != 0 {
                let v = Rational::from_integer(v.into());
                if let Some(b) = neg_col[g] {
                    row.push((b, -v.clone()));
                }
                row.push((g, v));
            }
        }
        lp_rows.push(row);
    }
    let mut norm_row = Vec::new();
    for (g, members) in groups.iter().enumerate() {
        let size = Rational::from_integer(members.len().into());
        norm_row.push((g, size.clone()));
        if let Some(b) = neg_col[g] {
            norm_row.push((b, size));
        }
    }
    norm_row.push((slack, Rational::one()));
    lp_rows.push(norm_row);

    let mut objective = vec![Rational::zero(); cols];
    for (g, members) in groups.iter().enumerate() {
        if label[g] {
            let size = Rational::from_integer(members.len().into());
            objective[g] = size.clone();
            if let Some(b) = neg_col[g] {
                objective[b] = -size;
            }
        }
    }
    let mut rhs = vec![Rational::zero(); rows.len()];
    rhs.push(Rational::one());
    let mut unit_columns = vec![None; rows.len()];
    unit_columns.push(Some(slack));

    let sol = maximize(&StandardForm {
        cols,
        rows: lp_rows,
        rhs,
        objective,
        unit_columns,
    })?;
    let y_norm = sol.y[rows.len()].clone();
    if y_norm != sol.objective {
        return Err(Error::Internal(format!(
            "strong duality failed: {} vs {}",
            format_rational(&sol.objective),
            format_rational(&y_norm)
        )));
    }
    let psi = (0..groups.len())
        .map(|g| match neg_col[g] {
            Some(b) => &sol.x[g] - &sol.x[b],
            None => sol.x[g].clone(),
        })
        .collect();
    let coeffs = rows
        .iter()
        .zip(&sol.y)
        .filter(|(_, y)| !y.is_zero())
        .map(|(&j, y)| (j, y.clone()))
        .collect();
    Ok(Solved {
        eps_star: sol.objective,
        psi,
        coeffs,
        pivots: sol.pivots,
    })
}

fn primal_ok(f: &PromiseFunction, p: &SparsePolynomial, eps: &Rational, sided: Sided) -> bool {
    f.iter().all(|(x, label)| {
        let v = p.eval(x);
        let target = if label { Rational::one() } else { Rational::zero() };
        let diff = &v - &target;
        match (sided, label) {
            (Sided::One, true) => diff >= -eps.clone(),
            _ => diff.abs() <= *eps,
        }
    })
}

/// Smallest achievable error of a degree-`<= d` polynomial, with an optimal
/// approximant and an optimal dual.
pub fn min_error_at_degree(
    f: &PromiseFunction,
    d: usize,
    sided: Sided,
    opts: &LpOptions,
) -> Result<LpResult> {
    if f.is_empty() {
        return Err(Error::InvalidParameter("function has an empty domain".into()));
    }
    if d > f.n() {
        return Err(Error::InvalidParameter(format!("degree {d} exceeds n = {}", f.n())));
    }
    let sym = if opts.use_orbit_basis {
        detect_symmetry(f)
    } else {
        Symmetry::NONE
    };
    let setup = build_setup(f, d, sym);
    let width = 2 * setup.groups.len() as u128 + 1;
    let height = setup.basis.len() as u128 + 1;
    if width * height > opts.cell_limit {
        return Err(Error::SizeLimit {
            what: format!("LP for {} at degree {d}", f.family()),
            size: width * height,
            limit: opts.cell_limit,
        });
    }

    let selected = independent_rows_mod_p(&setup.matrix);
    let mut solved = solve_rows(f, &setup, &selected, sided)?;
    let mut dual = witness_from(f, &setup, &solved, d)?;
    if !dual.orth_at_least(d + 1) {
        // Rank dropped modulo p; every row is kept and the simplex discards
        // the redundant ones itself.
        let all: Vec<usize> = (0..setup.basis.len()).collect();
        solved = solve_rows(f, &setup, &all, sided)?;
        dual = witness_from(f, &setup, &solved, d)?;
        if !dual.orth_at_least(d + 1) {
            return Err(Error::Internal("dual violates the moment constraints".into()));
        }
    }

    let mut primal = SparsePolynomial::zero(f.n(), f.r());
    for (j, y) in &solved.coeffs {
        for m in &setup.basis[*j] {
            primal.add_term(m.clone(), y.clone());
        }
    }
    if !primal_ok(f, &primal, &solved.eps_star, sided) {
        return Err(Error::Internal("primal approximant misses the optimal error".into()));
    }
    if let Some(ratio) = dual.ratio(f)? {
        if ratio != solved.eps_star {
            return Err(Error::Internal("dual ratio differs from the optimum".into()));
        }
    } else if !solved.eps_star.is_zero() {
        return Err(Error::Internal("zero dual with a positive optimum".into()));
    }
    Ok(LpResult {
        degree: d,
        eps_star: solved.eps_star,
        primal,
        dual,
        sided,
        pivots: solved.pivots,
    })
}

fn witness_from(f: &PromiseFunction, setup: &Setup, solved: &Solved, d: usize) -> Result<DualWitness> {
    let values = setup.groups.iter().zip(&solved.psi).flat_map(|(members, v)| {
        members
            .iter()
            .map(move |&i| (f.points()[i].clone(), v.clone()))
    });
    let w = DualWitness::new(f.n(), f.r(), values, d + 1, solved.eps_star.clone())?;
    Ok(w.normalized())
}

/// The optimal dual of a solved LP. It has `orth >= degree + 1` and ratio
/// `eps_star`, so it certifies `deg_eps(f) > degree` for every `eps < eps_star`.
pub fn extract_dual(lp: &LpResult) -> DualWitness {
    lp.dual.clone()
}

#[derive(Clone, Debug)]
pub struct ApproxDegree {
    pub degree: usize,
    /// Solve at `degree`, where the error target is met.
    pub at: LpResult,
    /// Solve at `degree - 1`, whose dual shows the target is missed there.
    pub below: Option<LpResult>,
}

/// Least `d` whose optimal error is at most `eps` (equality counts).
pub fn approx_degree(
    f: &PromiseFunction,
    eps: &Rational,
    sided: Sided,
    opts: &LpOptions,
) -> Result<ApproxDegree> {
    if eps.is_negative() {
        return Err(Error::InvalidParameter("eps must be non-negative".into()));
    }
    let mut below = None;
    for d in 0..=f.n() {
        let lp = min_error_at_degree(f, d, sided, opts)?;
        if lp.eps_star <= *eps {
            return Ok(ApproxDegree {
                degree: d,
                at: lp,
                below,
            });
        }
        below = Some(lp);
    }
    Err(Error::Internal("degree n failed to interpolate".into()))
}

pub const CSV_HEADER: &str = "family,n,r,param,eps_num,eps_den,sided,degree,eps_star_num,eps_star_den";

/// One line of the degree CSV. `family` and `param` are caller-chosen
/// descriptors (for example `ptp` and `1/2`).
pub fn csv_row(
    family: &str,
    f: &PromiseFunction,
    param: &str,
    eps: &Rational,
    result: &ApproxDegree,
) -> String {
    let e = &result.at.eps_star;
    format!(
        "{family},{},{},{param},{},{},{},{},{},{}",
        f.n(),
        f.r(),
        eps.numer(),
        eps.denom(),
        result.at.sided.as_str(),
        result.degree,
        e.numer(),
        e.denom()
    )
}
