//! Dense two-phase simplex for small standard-form programs.
//!
//! Solves `min c·x  s.t.  A x = b, x >= 0` with Bland's rule, which cannot
//! cycle. Problem sizes here are tens of rows and a few hundred columns.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-11;

#[derive(Clone, Debug)]
pub struct StandardLp {
    /// Row-major constraint matrix, `m` rows of length `n`.
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<f64>,
        value: f64,
        /// Structural columns that are basic at the optimum, one per
        /// non-redundant row.
        basis: Vec<usize>,
    },
    /// Phase one could not drive the artificial sum below the feasibility tolerance.
    Infeasible {
        residual: f64,
    },
    Unbounded,
}

struct Tableau {
    m: usize,
    n_struct: usize,
    /// `m` constraint rows, each of width `n_struct + m + 1` (rhs last).
    rows: Vec<Vec<f64>>,
    /// Reduced-cost row, same width; last entry is `-objective`.
    cost: Vec<f64>,
    basis: Vec<usize>,
    active: Vec<bool>,
}

impl Tableau {
    fn width(&self) -> usize {
        self.n_struct + self.m + 1
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let w = self.width();
        let p = self.rows[r][col];
        for k in 0..w {
            self.rows[r][k] /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || !self.active[i] {
                continue;
            }
            let f = row[col];
            if f != 0.0 {
                for k in 0..w {
                    row[k] -= f * pivot_row[k];
                }
                row[col] = 0.0;
            }
        }
        let f = self.cost[col];
        if f != 0.0 {
            for k in 0..w {
                self.cost[k] -= f * pivot_row[k];
            }
            self.cost[col] = 0.0;
        }
        self.basis[r] = col;
    }

    /// Runs Bland's-rule pivots over columns `< allowed`. Returns false when unbounded.
    fn optimize(&mut self, allowed: usize, max_iter: usize) -> Result<bool> {
        let rhs = self.width() - 1;
        for _ in 0..max_iter {
            let Some(enter) = (0..allowed).find(|&j| self.cost[j] < -PIVOT_EPS) else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                if !self.active[i] {
                    continue;
                }
                let a = self.rows[i][enter];
                if a > PIVOT_EPS {
                    let ratio = self.rows[i][rhs] / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((j, best)) => {
                            if ratio < best - 1e-14
                                || (ratio <= best + 1e-14 && self.basis[i] < self.basis[j])
                            {
                                Some((i, ratio))
                            } else {
                                Some((j, best))
                            }
                        }
                    };
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return Ok(false),
            }
        }
        Err(Error::numeric(format!(
            "simplex did not terminate within {max_iter} pivots"
        )))
    }
}

impl StandardLp {
    fn validate(&self) -> Result<(usize, usize)> {
        let m = self.a.len();
        let n = self.c.len();
        if self.b.len() != m || self.a.iter().any(|r| r.len() != n) {
            return Err(Error::Internal("LP dimensions are inconsistent".into()));
        }
        Ok((m, n))
    }

    fn phase_one(&self, m: usize, n: usize) -> Result<Tableau> {
        let width = n + m + 1;
        let mut rows = Vec::with_capacity(m);
        for i in 0..m {
            let sign = if self.b[i] < 0.0 { -1.0 } else { 1.0 };
            let mut row = vec![0.0; width];
            for j in 0..n {
                row[j] = sign * self.a[i][j];
            }
            row[n + i] = 1.0;
            row[width - 1] = sign * self.b[i];
            rows.push(row);
        }
        let mut cost = vec![0.0; width];
        for row in &rows {
            for j in 0..n {
                cost[j] -= row[j];
            }
            cost[width - 1] -= row[width - 1];
        }
        let mut t = Tableau {
            m,
            n_struct: n,
            rows,
            cost,
            basis: (n..n + m).collect(),
            active: vec![true; m],
        };
        let max_iter = 50 * (n + m) + 1000;
        t.optimize(n + m, max_iter)?;
        Ok(t)
    }

    /// Minimum artificial sum of phase one; zero iff the system is feasible.
    pub fn feasibility_residual(&self) -> Result<f64> {
        let (m, n) = self.validate()?;
        let t = self.phase_one(m, n)?;
        Ok((-t.cost[n + m]).max(0.0))
    }

    pub fn solve(&self, feas_tol: f64) -> Result<LpOutcome> {
        let (m, n) = self.validate()?;
        let mut t = self.phase_one(m, n)?;
        let residual = (-t.cost[n + m]).max(0.0);
        if residual > feas_tol {
            return Ok(LpOutcome::Infeasible { residual });
        }
        // Drive zero-level artificials out of the basis; rows where that is
        // impossible are linearly dependent and get deactivated.
        for r in 0..m {
            if t.basis[r] >= n {
                match (0..n).find(|&j| t.rows[r][j].abs() > 1e-9) {
                    Some(j) => t.pivot(r, j),
                    None => t.active[r] = false,
                }
            }
        }
        let width = t.width();
        let mut cost = vec![0.0; width];
        cost[..n].copy_from_slice(&self.c);
        for r in 0..m {
            if !t.active[r] {
                continue;
            }
            let cb = self.c[t.basis[r]];
            if cb != 0.0 {
                for k in 0..width {
                    cost[k] -= cb * t.rows[r][k];
                }
            }
        }
        t.cost = cost;
        let max_iter = 50 * (n + m) + 1000;
        if !t.optimize(n, max_iter)? {
            return Ok(LpOutcome::Unbounded);
        }
        let mut x = vec![0.0; n];
        let mut basis = Vec::new();
        for r in 0..m {
            if t.active[r] {
                x[t.basis[r]] = t.rows[r][width - 1].max(0.0);
                basis.push(t.basis[r]);
            }
        }
        let value = self.c.iter().zip(&x).map(|(c, x)| c * x).sum();
        Ok(LpOutcome::Optimal { x, value, basis })
    }
}
