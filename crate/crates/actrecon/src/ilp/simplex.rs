//! Dense bounded-variable primal simplex for the LP relaxations used by
//! the branch-and-bound search.
//!
//! Solves `max c.x` subject to `A x <= b` and `l <= x <= u`, with a
//! two-phase start (artificial columns for rows violated at the initial
//! point) and Bland's rule throughout, so runs are deterministic and
//! finite. Problem sizes here are tiny (tens of columns, a handful of
//! rows), so the basis is re-solved from scratch every iteration instead
//! of maintaining an incremental factorization.

const PIVOT_TOL: f64 = 1e-9;
const ZERO_TOL: f64 = 1e-11;
const PHASE1_TOL: f64 = 1e-7;
const MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal { objective: f64, point: Vec<f64> },
    Infeasible,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum VarState {
    Basic(usize),
    AtLower,
    AtUpper,
}

struct SimplexState<'a> {
    structural: &'a [Vec<f64>], // m rows, each of length n
    rhs: &'a [f64],
    n: usize,
    m: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
    state: Vec<VarState>,
    basis: Vec<usize>,           // column basic at each row position
    artificial_rows: Vec<usize>, // row owned by each artificial column
}

impl<'a> SimplexState<'a> {
    fn ncols(&self) -> usize {
        self.n + self.m + self.artificial_rows.len()
    }

    /// Entry of the full constraint matrix at (row, col): structural
    /// columns come from A, slack columns are +1 units, artificial
    /// columns are -1 units on their row.
    fn entry(&self, row: usize, col: usize) -> f64 {
        if col < self.n {
            self.structural[row][col]
        } else if col < self.n + self.m {
            if col - self.n == row {
                1.0
            } else {
                0.0
            }
        } else if self.artificial_rows[col - self.n - self.m] == row {
            -1.0
        } else {
            0.0
        }
    }

    fn nonbasic_value(&self, col: usize) -> f64 {
        match self.state[col] {
            VarState::AtLower => self.lower[col],
            VarState::AtUpper => self.upper[col],
            VarState::Basic(_) => unreachable!("basic column has no bound value"),
        }
    }

    fn basis_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.m)
            .map(|row| self.basis.iter().map(|&col| self.entry(row, col)).collect())
            .collect()
    }

    /// Values of the basic variables at the current nonbasic point.
    fn basic_values(&self) -> Vec<f64> {
        let mut rhs: Vec<f64> = self.rhs.to_vec();
        for col in 0..self.ncols() {
            if matches!(self.state[col], VarState::Basic(_)) {
                continue;
            }
            let value = self.nonbasic_value(col);
            if value != 0.0 {
                for (row, r) in rhs.iter_mut().enumerate() {
                    *r -= self.entry(row, col) * value;
                }
            }
        }
        lin_solve(self.basis_matrix(), rhs)
    }

    fn duals(&self, costs: &[f64]) -> Vec<f64> {
        // Solve B^T pi = c_B.
        let bt: Vec<Vec<f64>> = (0..self.m)
            .map(|i| (0..self.m).map(|j| self.entry(j, self.basis[i])).collect())
            .collect();
        let cb: Vec<f64> = self.basis.iter().map(|&col| costs[col]).collect();
        lin_solve(bt, cb)
    }

    fn column_in_basis_coords(&self, col: usize) -> Vec<f64> {
        let a_col: Vec<f64> = (0..self.m).map(|row| self.entry(row, col)).collect();
        lin_solve(self.basis_matrix(), a_col)
    }

    /// One bounded-simplex phase over the given cost vector (maximizing).
    /// Bland's rule picks the lowest eligible column, which guarantees
    /// termination and keeps runs deterministic.
    fn optimize(&mut self, costs: &[f64]) {
        for _ in 0..MAX_ITERATIONS {
            let xb = self.basic_values();
            let duals = self.duals(costs);

            let mut entering: Option<(usize, f64)> = None; // (col, direction)
            #[allow(clippy::needless_range_loop)] // col also feeds state/bounds lookups
            for col in 0..self.ncols() {
                if matches!(self.state[col], VarState::Basic(_)) {
                    continue;
                }
                if self.upper[col] - self.lower[col] <= ZERO_TOL {
                    continue; // pinned column, nothing to move
                }
                let mut reduced = costs[col];
                for (row, dual) in duals.iter().enumerate() {
                    reduced -= dual * self.entry(row, col);
                }
                let direction = match self.state[col] {
                    VarState::AtLower if reduced > PIVOT_TOL => 1.0,
                    VarState::AtUpper if reduced < -PIVOT_TOL => -1.0,
                    _ => continue,
                };
                entering = Some((col, direction));
                break;
            }
            let (enter, direction) = match entering {
                None => return, // optimal for this phase
                Some(e) => e,
            };

            let w = self.column_in_basis_coords(enter);

            // Ratio test: how far the entering variable can move before a
            // basic variable hits a bound, or it reaches its own opposite
            // bound (a bound flip). Ties go to the lowest column index.
            let flip_step = self.upper[enter] - self.lower[enter];
            let mut best_step = f64::INFINITY;
            let mut leaving: Option<(usize, VarState)> = None; // (basis position, exit state)
            for pos in 0..self.m {
                let rate = direction * w[pos];
                let col = self.basis[pos];
                let (step, exit_state) = if rate > ZERO_TOL {
                    (
                        (xb[pos] - self.lower[col]).max(0.0) / rate,
                        VarState::AtLower,
                    )
                } else if rate < -ZERO_TOL && self.upper[col].is_finite() {
                    (
                        (self.upper[col] - xb[pos]).max(0.0) / -rate,
                        VarState::AtUpper,
                    )
                } else {
                    continue;
                };
                let strictly_better = step < best_step - ZERO_TOL;
                let tied_lower_col = step < best_step + ZERO_TOL
                    && leaving.is_some_and(|(p, _)| col < self.basis[p]);
                if strictly_better || tied_lower_col {
                    best_step = step;
                    leaving = Some((pos, exit_state));
                }
            }

            if flip_step <= best_step {
                assert!(
                    flip_step.is_finite(),
                    "LP relaxation is unbounded, which box-constrained relaxations cannot be"
                );
                self.state[enter] = match self.state[enter] {
                    VarState::AtLower => VarState::AtUpper,
                    VarState::AtUpper => VarState::AtLower,
                    VarState::Basic(_) => unreachable!(),
                };
                continue;
            }

            let (pos, exit_state) = leaving.expect("bounded step implies a leaving variable");
            let leaving_col = self.basis[pos];
            self.state[leaving_col] = exit_state;
            self.state[enter] = VarState::Basic(pos);
            self.basis[pos] = enter;
        }
        panic!("simplex iteration limit exceeded");
    }

    fn structural_point(&self) -> Vec<f64> {
        let xb = self.basic_values();
        (0..self.n)
            .map(|col| {
                let raw = match self.state[col] {
                    VarState::Basic(pos) => xb[pos],
                    VarState::AtLower => self.lower[col],
                    VarState::AtUpper => self.upper[col],
                };
                raw.clamp(self.lower[col], self.upper[col])
            })
            .collect()
    }
}

/// Dense Gaussian elimination with partial pivoting. The basis matrix is
/// nonsingular by construction; a singular one means the search fed the
/// solver garbage, so fail loudly.
#[allow(clippy::needless_range_loop)] // rows of `a` are borrowed two at a time
fn lin_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let mut pivot_row = col;
        for row in col + 1..n {
            if a[row][col].abs() > a[pivot_row][col].abs() {
                pivot_row = row;
            }
        }
        assert!(
            a[pivot_row][col].abs() > ZERO_TOL,
            "singular basis matrix in simplex"
        );
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor != 0.0 {
                for k in col..n {
                    a[row][k] -= factor * a[col][k];
                }
                b[row] -= factor * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in col + 1..n {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    x
}

/// Maximizes `objective . x` over `rows[i].0 . x <= rows[i].1` and
/// `lower <= x <= upper`. Bounds with `lower == upper` pin a variable.
pub(crate) fn maximize_boxed(
    objective: &[f64],
    rows: &[(Vec<f64>, f64)],
    lower: &[f64],
    upper: &[f64],
) -> LpOutcome {
    let n = objective.len();
    let m = rows.len();
    debug_assert!(lower.iter().zip(upper).all(|(l, u)| l <= u));

    if m == 0 {
        let point: Vec<f64> = (0..n)
            .map(|j| {
                if objective[j] > 0.0 {
                    upper[j]
                } else {
                    lower[j]
                }
            })
            .collect();
        let value = objective.iter().zip(&point).map(|(c, x)| c * x).sum();
        return LpOutcome::Optimal {
            objective: value,
            point,
        };
    }

    let structural: Vec<Vec<f64>> = rows.iter().map(|(coeffs, _)| coeffs.clone()).collect();
    let rhs: Vec<f64> = rows.iter().map(|(_, bound)| *bound).collect();

    // Initial point: structurals at their lower bounds, slacks basic.
    // Rows violated there get an artificial column so phase 1 starts
    // feasible.
    let mut lower_full = lower.to_vec();
    let mut upper_full = upper.to_vec();
    lower_full.extend(std::iter::repeat_n(0.0, m));
    upper_full.extend(std::iter::repeat_n(f64::INFINITY, m));

    let mut state: Vec<VarState> = vec![VarState::AtLower; n + m];
    let mut basis = Vec::with_capacity(m);
    let mut artificial_rows = Vec::new();
    for row in 0..m {
        let residual = rhs[row]
            - structural[row]
                .iter()
                .zip(lower.iter())
                .map(|(a, l)| a * l)
                .sum::<f64>();
        if residual >= 0.0 {
            basis.push(n + row); // slack carries the row
        } else {
            artificial_rows.push(row);
            basis.push(n + m + artificial_rows.len() - 1);
            lower_full.push(0.0);
            upper_full.push(f64::INFINITY);
            state.push(VarState::AtLower);
        }
    }
    let n_artificial = artificial_rows.len();
    for (pos, &col) in basis.iter().enumerate() {
        state[col] = VarState::Basic(pos);
    }

    let mut sim = SimplexState {
        structural: &structural,
        rhs: &rhs,
        n,
        m,
        lower: lower_full,
        upper: upper_full,
        state,
        basis,
        artificial_rows,
    };

    if n_artificial > 0 {
        let mut phase1 = vec![0.0; sim.ncols()];
        for cost in phase1.iter_mut().skip(n + m) {
            *cost = -1.0;
        }
        sim.optimize(&phase1);

        let xb = sim.basic_values();
        let mut infeasibility = 0.0;
        for col in n + m..sim.ncols() {
            let value = match sim.state[col] {
                VarState::Basic(pos) => xb[pos],
                _ => sim.nonbasic_value(col),
            };
            infeasibility += value.max(0.0);
        }
        if infeasibility > PHASE1_TOL {
            return LpOutcome::Infeasible;
        }
        // Lock artificials at zero for phase 2.
        for col in n + m..sim.ncols() {
            sim.upper[col] = 0.0;
        }
    }

    let mut phase2 = vec![0.0; sim.ncols()];
    phase2[..n].copy_from_slice(objective);
    sim.optimize(&phase2);

    let point = sim.structural_point();
    let value = objective.iter().zip(&point).map(|(c, x)| c * x).sum();
    LpOutcome::Optimal {
        objective: value,
        point,
    }
}
