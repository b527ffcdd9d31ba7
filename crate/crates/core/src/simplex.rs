//! Dense two-phase simplex for `maximize c·x  s.t.  A x = b, x >= 0`,
//! generic over [`Scalar`] so the same code serves float and exact solves.
//! Bland's rule throughout, so it terminates on degenerate problems.

use crate::numeric::Scalar;

/// Pivot entries at or below this magnitude are treated as zero in float mode.
const PIVOT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<T> {
    /// Phase 1 ended with a positive artificial sum.
    Infeasible { residual: T },
    Optimal { value: T, x: Vec<T> },
    Unbounded,
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    /// Reduced costs `c_j - c_B B^-1 A_j`; entering columns have positive cost.
    cost: Vec<T>,
    value: T,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = T::one() / self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        self.rhs[r] = self.rhs[r].clone() * inv;
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for j in 0..self.rows[i].len() {
                let delta = f.clone() * self.rows[r][j].clone();
                self.rows[i][j] = self.rows[i][j].clone() - delta;
            }
            self.rhs[i] = self.rhs[i].clone() - f * self.rhs[r].clone();
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for j in 0..self.cost.len() {
                let delta = f.clone() * self.rows[r][j].clone();
                self.cost[j] = self.cost[j].clone() - delta;
            }
            self.value = self.value.clone() + f * self.rhs[r].clone();
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations over the columns `< n_active`. Returns `false`
    /// if the objective is unbounded.
    fn optimize(&mut self, n_active: usize) -> bool {
        loop {
            let entering = (0..n_active).find(|&j| {
                let c = &self.cost[j];
                *c > T::zero() && !c.is_negligible(PIVOT_TOL)
            });
            let Some(c) = entering else { return true };
            let mut best: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if *a <= T::zero() || a.is_negligible(PIVOT_TOL) {
                    continue;
                }
                let ratio = self.rhs[i].clone() / a.clone();
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else { return false };
            self.pivot(r, c);
        }
    }
}

/// Solves `maximize c·x  s.t.  A x = b, x >= 0`.
///
/// Infeasibility is declared when the phase-1 optimum leaves an artificial
/// sum above `feas_tol` (above zero in exact mode).
pub fn solve<T: Scalar>(a: &[Vec<T>], b: &[T], c: &[T], feas_tol: f64) -> LpOutcome<T> {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m, "rhs length");
    assert!(a.iter().all(|r| r.len() == n), "ragged constraint matrix");

    // rows with b >= 0, then artificial identity columns n..n+m
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (row, bi) in a.iter().zip(b) {
        let flip = *bi < T::zero();
        let mut full: Vec<T> = row
            .iter()
            .map(|x| if flip { -x.clone() } else { x.clone() })
            .collect();
        full.extend(std::iter::repeat_with(T::zero).take(m));
        rows.push(full);
        rhs.push(if flip { -bi.clone() } else { bi.clone() });
    }
    for (i, row) in rows.iter_mut().enumerate() {
        row[n + i] = T::one();
    }
    // phase 1: maximize -Σ artificials
    let mut cost = vec![T::zero(); n + m];
    let mut value = T::zero();
    for i in 0..m {
        for j in 0..n {
            cost[j] = cost[j].clone() + rows[i][j].clone();
        }
        value = value - rhs[i].clone();
    }
    let mut t = Tableau {
        rows,
        rhs,
        basis: (n..n + m).collect(),
        cost,
        value,
    };
    t.optimize(n + m);
    let residual = -t.value.clone();
    if !residual.is_negligible(feas_tol) {
        return LpOutcome::Infeasible { residual };
    }
    // drive remaining artificials out of the basis; drop redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_negligible(PIVOT_TOL)) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.rhs.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    // phase 2
    let mut cost: Vec<T> = c.to_vec();
    cost.extend(std::iter::repeat_with(T::zero).take(m));
    let mut value = T::zero();
    for (r, &bj) in t.basis.iter().enumerate() {
        let cb = c[bj].clone();
        if cb.is_zero() {
            continue;
        }
        for j in 0..n + m {
            let delta = cb.clone() * t.rows[r][j].clone();
            cost[j] = cost[j].clone() - delta;
        }
        value = value + cb * t.rhs[r].clone();
    }
    t.cost = cost;
    t.value = value;
    if !t.optimize(n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![T::zero(); n];
    for (r, &bj) in t.basis.iter().enumerate() {
        if bj < n {
            x[bj] = t.rhs[r].clone();
        }
    }
    LpOutcome::Optimal { value: t.value, x }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{ratio, Rational};

    #[test]
    fn small_float_lp() {
        // max x + y, x + 2y + s1 = 4, 3x + y + s2 = 6
        let a = vec![vec![1.0, 2.0, 1.0, 0.0], vec![3.0, 1.0, 0.0, 1.0]];
        let out = solve(&a, &[4.0, 6.0], &[1.0, 1.0, 0.0, 0.0], 1e-9);
        let LpOutcome::Optimal { value, x } = out else { panic!("{out:?}") };
        assert!((value - 2.8).abs() < 1e-12);
        assert!((x[0] - 1.6).abs() < 1e-12 && (x[1] - 1.2).abs() < 1e-12);
    }

    #[test]
    fn infeasible_and_unbounded() {
        // x + y = -1 with x, y >= 0
        let out = solve(&[vec![1.0, 1.0]], &[-1.0], &[0.0, 0.0], 1e-9);
        assert!(matches!(out, LpOutcome::Infeasible { .. }));
        // max x, x - y = 0
        let out = solve(&[vec![1.0, -1.0]], &[0.0], &[1.0, 0.0], 1e-9);
        assert_eq!(out, LpOutcome::Unbounded);
    }

    #[test]
    fn exact_lp_with_redundant_row() {
        let one = || ratio(1, 1);
        let zero = || ratio(0, 1);
        let a: Vec<Vec<Rational>> = vec![
            vec![one(), one(), zero()],
            vec![ratio(2, 1), ratio(2, 1), zero()],
            vec![one(), zero(), one()],
        ];
        let b = vec![ratio(1, 3), ratio(2, 3), ratio(1, 2)];
        let c = vec![zero(), one(), zero()];
        let out = solve(&a, &b, &c, 0.0);
        let LpOutcome::Optimal { value, x } = out else { panic!("{out:?}") };
        assert_eq!(value, ratio(1, 3));
        assert_eq!(x, vec![zero(), ratio(1, 3), ratio(1, 2)]);
    }
}
