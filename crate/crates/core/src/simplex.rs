//! Small dense two-phase simplex solver using Bland's rule.
//!
//! Solves `maximize c.x` subject to row constraints (`<=`, `>=`, `=`) and
//! `x >= 0`. Sized for benchmark programs with a few dozen rows and up to
//! tens of thousands of columns.

use std::fmt;

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpError {
    /// `certificate` has one entry per constraint: nonnegative on `<=` rows,
    /// nonpositive on `>=` rows, with `certificate . A >= 0` on every column
    /// and `certificate . b < 0`.
    Infeasible { certificate: Vec<f64>, residual: f64 },
    Unbounded,
    IterationLimit,
}

impl fmt::Display for LpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpError::Infeasible { residual, .. } => write!(f, "infeasible (residual {residual:e})"),
            LpError::Unbounded => f.write_str("unbounded"),
            LpError::IterationLimit => f.write_str("iteration limit reached"),
        }
    }
}

impl std::error::Error for LpError {}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        Self {
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn add(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        debug_assert_eq!(coeffs.len(), self.objective.len());
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn solve(&self) -> Result<LpSolution, LpError> {
        Tableau::build(self).solve(&self.objective)
    }
}

struct Tableau {
    rows: usize,
    /// structural + slack + artificial columns (rhs kept separately)
    cols: usize,
    num_structural: usize,
    first_artificial: usize,
    a: Vec<f64>,
    b: Vec<f64>,
    basis: Vec<usize>,
    /// +1 when the original row was kept, -1 when it was negated so that
    /// the right-hand side is nonnegative.
    row_sign: Vec<f64>,
    max_iterations: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let rows = lp.constraints.len();
        let num_structural = lp.objective.len();
        let num_slack = lp
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        let first_artificial = num_structural + num_slack;
        let cols = first_artificial + rows;
        let mut a = vec![0.0; rows * cols];
        let mut b = vec![0.0; rows];
        let mut row_sign = vec![1.0; rows];
        let mut slack = num_structural;
        for (i, c) in lp.constraints.iter().enumerate() {
            let sign = if c.rhs < 0.0 { -1.0 } else { 1.0 };
            row_sign[i] = sign;
            let row = &mut a[i * cols..(i + 1) * cols];
            for (dst, &v) in row.iter_mut().zip(&c.coeffs) {
                *dst = sign * v;
            }
            match c.relation {
                Relation::Le => {
                    row[slack] = sign;
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = -sign;
                    slack += 1;
                }
                Relation::Eq => {}
            }
            row[first_artificial + i] = 1.0;
            b[i] = sign * c.rhs;
        }
        let basis = (0..rows).map(|i| first_artificial + i).collect();
        Self {
            rows,
            cols,
            num_structural,
            first_artificial,
            a,
            b,
            basis,
            row_sign,
            max_iterations: 50 * (rows + cols) + 10_000,
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.cols + j]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let cols = self.cols;
        let p = self.at(r, c);
        for v in &mut self.a[r * cols..(r + 1) * cols] {
            *v /= p;
        }
        self.b[r] /= p;
        let (pivot_row, pivot_b) = (self.a[r * cols..(r + 1) * cols].to_vec(), self.b[r]);
        for i in 0..self.rows {
            if i == r {
                continue;
            }
            let f = self.at(i, c);
            if f == 0.0 {
                continue;
            }
            let row = &mut self.a[i * cols..(i + 1) * cols];
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            row[c] = 0.0;
            self.b[i] -= f * pivot_b;
        }
        self.basis[r] = c;
    }

    /// Reduced costs `c_j - c_B B^-1 A_j` for a minimization objective.
    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut r = cost.to_vec();
        for i in 0..self.rows {
            let cb = cost[self.basis[i]];
            if cb == 0.0 {
                continue;
            }
            let row = &self.a[i * self.cols..(i + 1) * self.cols];
            for (rj, &aij) in r.iter_mut().zip(row) {
                *rj -= cb * aij;
            }
        }
        r
    }

    /// Bland's rule iterations minimizing `cost`; columns at or beyond
    /// `entering_limit` never enter.
    fn run(&mut self, cost: &[f64], entering_limit: usize) -> Result<(), LpError> {
        for _ in 0..self.max_iterations {
            let r = self.reduced_costs(cost);
            let Some(enter) = (0..entering_limit).find(|&j| r[j] < -COST_TOL) else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let aij = self.at(i, enter);
                if aij > PIVOT_TOL {
                    let ratio = self.b[i] / aij;
                    leave = match leave {
                        Some((l, lr))
                            if lr < ratio - 1e-13
                                || ((lr - ratio).abs() <= 1e-13 && self.basis[l] < self.basis[i]) =>
                        {
                            Some((l, lr))
                        }
                        _ => Some((i, ratio)),
                    };
                }
            }
            let Some((leave, _)) = leave else {
                return Err(LpError::Unbounded);
            };
            self.pivot(leave, enter);
        }
        Err(LpError::IterationLimit)
    }

    fn solve(mut self, objective: &[f64]) -> Result<LpSolution, LpError> {
        // Phase one: minimize the sum of artificials.
        let mut phase1 = vec![0.0; self.cols];
        for c in &mut phase1[self.first_artificial..] {
            *c = 1.0;
        }
        self.run(&phase1, self.first_artificial)?;
        let residual: f64 = self
            .basis
            .iter()
            .zip(&self.b)
            .filter(|(&j, _)| j >= self.first_artificial)
            .map(|(_, &v)| v)
            .sum();
        let scale = 1.0 + self.b.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if residual > 1e-9 * scale {
            let r = self.reduced_costs(&phase1);
            // y_i = 1 - r(artificial_i) satisfies y.A <= 0 and y.b > 0 on the
            // sign-normalized rows; flip into original orientation.
            let certificate = (0..self.rows)
                .map(|i| -(1.0 - r[self.first_artificial + i]) * self.row_sign[i])
                .collect();
            return Err(LpError::Infeasible {
                certificate,
                residual,
            });
        }

        // Drive zero-level artificials out of the basis where possible.
        for i in 0..self.rows {
            if self.basis[i] >= self.first_artificial {
                if let Some(j) = (0..self.first_artificial).find(|&j| self.at(i, j).abs() > 1e-9) {
                    self.pivot(i, j);
                }
            }
        }

        // Phase two.
        let mut cost = vec![0.0; self.cols];
        for (c, &o) in cost.iter_mut().zip(objective) {
            *c = -o;
        }
        self.run(&cost, self.first_artificial)?;

        let mut x = vec![0.0; self.num_structural];
        for (i, &j) in self.basis.iter().enumerate() {
            if j < self.num_structural {
                x[j] = self.b[i].max(0.0);
            }
        }
        let objective = x.iter().zip(objective).map(|(xi, ci)| xi * ci).sum();
        Ok(LpSolution { x, objective })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_maximization() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let mut lp = LinearProgram::new(vec![3.0, 5.0]);
        lp.add(vec![1.0, 0.0], Relation::Le, 4.0);
        lp.add(vec![0.0, 2.0], Relation::Le, 12.0);
        lp.add(vec![3.0, 2.0], Relation::Le, 18.0);
        let s = lp.solve().unwrap();
        assert!((s.objective - 36.0).abs() < 1e-12);
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn equality_and_ge_rows() {
        // max x + 2y, x + y = 1, x >= 0.25 -> (0.25, 0.75), 1.75
        let mut lp = LinearProgram::new(vec![1.0, 2.0]);
        lp.add(vec![1.0, 1.0], Relation::Eq, 1.0);
        lp.add(vec![1.0, 0.0], Relation::Ge, 0.25);
        let s = lp.solve().unwrap();
        assert!((s.objective - 1.75).abs() < 1e-12);
    }

    #[test]
    fn negative_rhs_rows() {
        // max -x, -x <= -2 (x >= 2) -> x = 2
        let mut lp = LinearProgram::new(vec![-1.0]);
        lp.add(vec![-1.0], Relation::Le, -2.0);
        let s = lp.solve().unwrap();
        assert!((s.x[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = LinearProgram::new(vec![1.0, 0.0]);
        lp.add(vec![0.0, 1.0], Relation::Le, 1.0);
        assert_eq!(lp.solve(), Err(LpError::Unbounded));
    }

    #[test]
    fn infeasible_with_certificate() {
        // x + y = 1, x >= 0.7, y >= 0.7
        let mut lp = LinearProgram::new(vec![1.0, 1.0]);
        lp.add(vec![1.0, 0.0], Relation::Ge, 0.7);
        lp.add(vec![0.0, 1.0], Relation::Ge, 0.7);
        lp.add(vec![1.0, 1.0], Relation::Eq, 1.0);
        let Err(LpError::Infeasible { certificate, residual }) = lp.solve() else {
            panic!("expected infeasible");
        };
        assert!(residual > 0.0);
        check_certificate(&lp, &certificate);
    }

    pub(crate) fn check_certificate(lp: &LinearProgram, z: &[f64]) {
        for (c, &zi) in lp.constraints.iter().zip(z) {
            match c.relation {
                Relation::Le => assert!(zi >= -1e-9),
                Relation::Ge => assert!(zi <= 1e-9),
                Relation::Eq => {}
            }
        }
        for j in 0..lp.objective.len() {
            let s: f64 = lp.constraints.iter().zip(z).map(|(c, zi)| zi * c.coeffs[j]).sum();
            assert!(s >= -1e-9, "column {j}: {s}");
        }
        let zb: f64 = lp.constraints.iter().zip(z).map(|(c, zi)| zi * c.rhs).sum();
        assert!(zb < -1e-12, "z.b = {zb}");
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example, which cycles under the textbook largest-coefficient rule.
        let mut lp = LinearProgram::new(vec![0.75, -150.0, 0.02, -6.0]);
        lp.add(vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0);
        lp.add(vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0);
        lp.add(vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0);
        let s = lp.solve().unwrap();
        assert!((s.objective - 0.05).abs() < 1e-12);
    }
}
