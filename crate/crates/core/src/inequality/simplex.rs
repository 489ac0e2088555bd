//! Dense two-phase simplex for small linear programs in standard form:
//! minimize `c·x` subject to `A x = b`, `x ≥ 0`. Bland's rule throughout.

const PIVOT_EPS: f64 = 1e-12;
const MAX_ITERATIONS: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub enum LpSolution {
    Optimal { x: Vec<f64>, objective: f64 },
    /// Phase 1 could not drive the artificial sum below the tolerance.
    Infeasible { residual: f64 },
    Unbounded,
}

struct Tableau {
    /// `rows × (cols + 1)`, last column is the right-hand side.
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> f64 {
        self.t[r][self.cols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.t[row][col];
        for v in self.t[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.t[row].clone();
        for (r, line) in self.t.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let f = line[col];
            if f != 0.0 {
                for (v, pv) in line.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    fn reduced_costs(&self, cost: &[f64], allowed: &dyn Fn(usize) -> bool) -> Vec<f64> {
        (0..self.cols)
            .map(|j| {
                if !allowed(j) {
                    return 0.0;
                }
                let z: f64 = self
                    .basis
                    .iter()
                    .enumerate()
                    .map(|(r, &bj)| cost[bj] * self.t[r][j])
                    .sum();
                cost[j] - z
            })
            .collect()
    }

    /// Minimize `cost` over the current basis. Returns false if unbounded.
    fn optimize(&mut self, cost: &[f64], allowed: &dyn Fn(usize) -> bool) -> bool {
        for _ in 0..MAX_ITERATIONS {
            let rc = self.reduced_costs(cost, allowed);
            let Some(enter) = (0..self.cols).find(|&j| allowed(j) && rc[j] < -1e-11) else {
                return true;
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.t.len() {
                let a = self.t[r][enter];
                if a > PIVOT_EPS {
                    let ratio = self.rhs(r) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            if ratio < lratio - 1e-14
                                || (ratio <= lratio + 1e-14 && self.basis[r] < self.basis[lr])
                            {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    };
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, enter),
                None => return false,
            }
        }
        true
    }
}

/// Solve `min c·x` s.t. `A x = b`, `x ≥ 0`. `feas_tol` bounds the phase-1
/// artificial sum accepted as feasible.
pub fn solve(a: &[Vec<f64>], b: &[f64], c: &[f64], feas_tol: f64) -> LpSolution {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m);
    assert!(a.iter().all(|row| row.len() == n));

    // columns: n originals, m artificials, rhs
    let cols = n + m;
    let mut t = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        let mut line: Vec<f64> = row.iter().map(|v| v * sign).collect();
        line.extend((0..m).map(|k| if k == i { 1.0 } else { 0.0 }));
        line.push(b[i] * sign);
        t.push(line);
    }
    let mut tab = Tableau {
        t,
        basis: (n..n + m).collect(),
        cols,
    };

    let phase1_cost: Vec<f64> = (0..cols).map(|j| if j >= n { 1.0 } else { 0.0 }).collect();
    tab.optimize(&phase1_cost, &|_| true);
    let residual: f64 = (0..m)
        .filter(|&r| tab.basis[r] >= n)
        .map(|r| tab.rhs(r))
        .sum();
    if residual > feas_tol {
        return LpSolution::Infeasible { residual };
    }

    // drive remaining artificials out of the basis; drop redundant rows
    let mut r = 0;
    while r < tab.t.len() {
        if tab.basis[r] >= n {
            if let Some(j) = (0..n).find(|&j| tab.t[r][j].abs() > 1e-9) {
                tab.pivot(r, j);
                r += 1;
            } else {
                tab.t.remove(r);
                tab.basis.remove(r);
            }
        } else {
            r += 1;
        }
    }

    let mut phase2_cost = c.to_vec();
    phase2_cost.extend(std::iter::repeat_n(0.0, m));
    if !tab.optimize(&phase2_cost, &|j| j < n) {
        return LpSolution::Unbounded;
    }
    let mut x = vec![0.0; n];
    for (r, &bj) in tab.basis.iter().enumerate() {
        if bj < n {
            x[bj] = tab.rhs(r).max(0.0);
        }
    }
    let objective = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    LpSolution::Optimal { x, objective }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_optimum() {
        // min -x1 - x2  s.t. x1 + 2x2 + s1 = 4, 3x1 + x2 + s2 = 6
        let a = vec![vec![1.0, 2.0, 1.0, 0.0], vec![3.0, 1.0, 0.0, 1.0]];
        let sol = solve(&a, &[4.0, 6.0], &[-1.0, -1.0, 0.0, 0.0], 1e-9);
        let LpSolution::Optimal { x, objective } = sol else { panic!("{sol:?}") };
        assert!((objective + 2.8).abs() < 1e-12);
        assert!((x[0] - 1.6).abs() < 1e-12 && (x[1] - 1.2).abs() < 1e-12);
    }

    #[test]
    fn detects_infeasible() {
        // x1 + x2 = 1 and x1 + x2 = 2
        let a = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        assert!(matches!(
            solve(&a, &[1.0, 2.0], &[0.0, 0.0], 1e-9),
            LpSolution::Infeasible { .. }
        ));
    }

    #[test]
    fn detects_unbounded() {
        // min -x1 s.t. x1 - x2 = 0
        let a = vec![vec![1.0, -1.0]];
        assert_eq!(solve(&a, &[0.0], &[-1.0, 0.0], 1e-9), LpSolution::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let a = vec![vec![1.0, 1.0], vec![2.0, 2.0], vec![1.0, 0.0]];
        let sol = solve(&a, &[1.0, 2.0, 0.25], &[0.0, 1.0], 1e-9);
        let LpSolution::Optimal { x, .. } = sol else { panic!("{sol:?}") };
        assert!((x[0] - 0.25).abs() < 1e-12 && (x[1] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn negative_rhs() {
        let a = vec![vec![-1.0, 1.0]];
        let sol = solve(&a, &[-2.0], &[1.0, 1.0], 1e-9);
        let LpSolution::Optimal { x, objective } = sol else { panic!("{sol:?}") };
        assert_eq!(x, vec![2.0, 0.0]);
        assert_eq!(objective, 2.0);
    }
}
