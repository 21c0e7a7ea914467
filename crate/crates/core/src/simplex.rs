//! Dense two-phase primal simplex over exact rationals with Bland's rule.
//!
//! Solves `maximize c.x  s.t.  A x = b, x >= 0` with `b >= 0`, returning an
//! optimal basic solution together with the optimal dual vector `y`
//! (`A^T y >= c`, `b.y = c.x`).

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct StandardForm {
    pub cols: usize,
    /// Sparse constraint rows: `(column, coefficient)`.
    pub rows: Vec<Vec<(usize, Rational)>>,
    pub rhs: Vec<Rational>,
    pub objective: Vec<Rational>,
    /// Optional per-row column that is already a unit vector for that row
    /// (coefficient 1 there, 0 in every other row); it seeds the initial basis
    /// in place of an artificial variable.
    pub unit_columns: Vec<Option<usize>>,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
    pub objective: Rational,
    pub pivots: usize,
}

struct Tableau {
    /// `m` rows over `real + artificial` columns.
    t: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    real: usize,
    pivots: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize, cost: &mut [Rational]) {
        let inv = self.t[row][col].recip();
        let nz: Vec<usize> = (0..self.t[row].len())
            .filter(|&j| !self.t[row][j].is_zero())
            .collect();
        for &j in &nz {
            self.t[row][j] *= &inv;
        }
        self.rhs[row] *= &inv;
        let (pivot_row, pivot_rhs) = (self.t[row].clone(), self.rhs[row].clone());
        for i in 0..self.t.len() {
            if i == row || self.t[i][col].is_zero() {
                continue;
            }
            let factor = self.t[i][col].clone();
            for &j in &nz {
                let delta = &factor * &pivot_row[j];
                self.t[i][j] -= delta;
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        if !cost[col].is_zero() {
            let factor = cost[col].clone();
            for &j in &nz {
                let delta = &factor * &pivot_row[j];
                cost[j] -= delta;
            }
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Reduced costs `c_j - c_B B^-1 A_j` for the current basis.
    fn reduced_costs(&self, c: &[Rational]) -> Vec<Rational> {
        let mut r = c.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            if c[b].is_zero() {
                continue;
            }
            for (j, v) in self.t[i].iter().enumerate() {
                if !v.is_zero() {
                    r[j] -= &c[b] * v;
                }
            }
        }
        r
    }

    /// Bland's rule iterations until optimal. `allowed` filters entering
    /// columns.
    fn optimize(&mut self, cost: &mut [Rational], allowed: impl Fn(usize) -> bool) -> Result<()> {
        loop {
            let Some(q) = (0..cost.len()).find(|&j| allowed(j) && cost[j].is_positive()) else {
                return Ok(());
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][q];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((p, _)) = best else {
                return Err(Error::Unbounded);
            };
            self.pivot(p, q, cost);
        }
    }
}

pub fn maximize(lp: &StandardForm) -> Result<Solution> {
    let m = lp.rows.len();
    let real = lp.cols;
    if lp.rhs.len() != m || lp.objective.len() != real || lp.unit_columns.len() != m {
        return Err(Error::Dimension("inconsistent LP dimensions".into()));
    }
    if lp.rhs.iter().any(|b| b.is_negative()) {
        return Err(Error::InvalidParameter("standard form needs b >= 0".into()));
    }
    let artificial_rows: Vec<usize> = (0..m).filter(|&i| lp.unit_columns[i].is_none()).collect();
    let width = real + artificial_rows.len();
    let mut t = vec![vec![Rational::zero(); width]; m];
    for (i, row) in lp.rows.iter().enumerate() {
        for (j, v) in row {
            t[i][*j] += v;
        }
    }
    let mut identity_col = vec![0; m];
    for (i, unit) in lp.unit_columns.iter().enumerate() {
        if let Some(j) = unit {
            identity_col[i] = *j;
        }
    }
    for (k, &i) in artificial_rows.iter().enumerate() {
        t[i][real + k] = Rational::from_integer(1.into());
        identity_col[i] = real + k;
    }
    let mut tab = Tableau {
        t,
        rhs: lp.rhs.clone(),
        basis: identity_col.clone(),
        real,
        pivots: 0,
    };

    if !artificial_rows.is_empty() {
        let mut phase1 = vec![Rational::zero(); width];
        for k in 0..artificial_rows.len() {
            phase1[real + k] = Rational::from_integer((-1).into());
        }
        let mut cost = tab.reduced_costs(&phase1);
        tab.optimize(&mut cost, |j| j < real)?;
        let infeasibility: Rational = tab
            .basis
            .iter()
            .zip(&tab.rhs)
            .filter(|(b, _)| **b >= real)
            .map(|(_, v)| v.clone())
            .sum();
        if !infeasibility.is_zero() {
            return Err(Error::Infeasible);
        }
        // Drive zero-level artificials out of the basis; rows where that is
        // impossible are redundant and keep their artificial.
        for i in 0..m {
            if tab.basis[i] < real {
                continue;
            }
            if let Some(j) = (0..real).find(|&j| !tab.t[i][j].is_zero()) {
                let mut scratch = vec![Rational::zero(); width];
                tab.pivot(i, j, &mut scratch);
            }
        }
    }

    let mut c = lp.objective.clone();
    c.resize(width, Rational::zero());
    let mut cost = tab.reduced_costs(&c);
    let real_cols = tab.real;
    tab.optimize(&mut cost, |j| j < real_cols)?;

    let mut x = vec![Rational::zero(); real];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < real {
            x[b] = tab.rhs[i].clone();
        }
    }
    let y: Vec<Rational> = identity_col.iter().map(|&j| &c[j] - &cost[j]).collect();
    let objective = x.iter().zip(&lp.objective).map(|(a, b)| a * b).sum();
    Ok(Solution {
        x,
        y,
        objective,
        pivots: tab.pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn row(entries: &[(usize, i64)]) -> Vec<(usize, Rational)> {
        entries.iter().map(|&(j, v)| (j, int(v))).collect()
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 2y  s.t. x + y + s1 = 4, x + 3y + s2 = 6
        let lp = StandardForm {
            cols: 4,
            rows: vec![row(&[(0, 1), (1, 1), (2, 1)]), row(&[(0, 1), (1, 3), (3, 1)])],
            rhs: vec![int(4), int(6)],
            objective: vec![int(3), int(2), int(0), int(0)],
            unit_columns: vec![Some(2), Some(3)],
        };
        let sol = maximize(&lp).unwrap();
        assert_eq!(sol.objective, int(12));
        assert_eq!(sol.x[0], int(4));
        // dual: min 4 y1 + 6 y2, y1 + y2 >= 3, y1 + 3 y2 >= 2, y >= 0
        assert_eq!(sol.y, vec![int(3), int(0)]);
    }

    #[test]
    fn phase_one_with_equalities_and_redundancy() {
        // x0 + x1 = 1, 2 x0 + 2 x1 = 2 (redundant), maximize x0 - x1/2
        let lp = StandardForm {
            cols: 2,
            rows: vec![row(&[(0, 1), (1, 1)]), row(&[(0, 2), (1, 2)])],
            rhs: vec![int(1), int(2)],
            objective: vec![int(1), rat(-1, 2)],
            unit_columns: vec![None, None],
        };
        let sol = maximize(&lp).unwrap();
        assert_eq!(sol.objective, int(1));
        let dual_obj = &sol.y[0] * int(1) + &sol.y[1] * int(2);
        assert_eq!(dual_obj, int(1));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let infeasible = StandardForm {
            cols: 1,
            rows: vec![row(&[(0, 1)]), row(&[(0, 1)])],
            rhs: vec![int(1), int(2)],
            objective: vec![int(0)],
            unit_columns: vec![None, None],
        };
        assert!(matches!(maximize(&infeasible), Err(Error::Infeasible)));
        let unbounded = StandardForm {
            cols: 2,
            rows: vec![row(&[(0, 1), (1, -1)])],
            rhs: vec![int(0)],
            objective: vec![int(1), int(0)],
            unit_columns: vec![None],
        };
        assert!(matches!(maximize(&unbounded), Err(Error::Unbounded)));
    }
}
