//! A small exact-rational simplex solver. Every region computation in this
//! crate is decided over `BigRational`, so LP answers are exact: no
//! tolerances, no floating point. Two-phase method with Bland's rule, dense
//! tableau. Problem sizes here are tiny (tens of rows, at most ~1000
//! columns), so simplicity wins over sparsity.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub cmp: Cmp,
    pub rhs: BigRational,
}

impl Constraint {
    pub fn new(coeffs: Vec<BigRational>, cmp: Cmp, rhs: BigRational) -> Self {
        Constraint { coeffs, cmp, rhs }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpResult {
    /// Maximum value and one optimal assignment of the structural variables.
    Optimal {
        value: BigRational,
        solution: Vec<BigRational>,
    },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>, // m x (ncols + 1), last entry is rhs
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &BigRational {
        &self.rows[r][self.ncols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v = &*v / &inv;
        }
        for r in 0..self.rows.len() {
            if r == row || self.rows[r][col].is_zero() {
                continue;
            }
            let factor = self.rows[r][col].clone();
            for c in 0..=self.ncols {
                let delta = &factor * &self.rows[row][c];
                self.rows[r][c] = &self.rows[r][c] - delta;
            }
        }
        self.basis[row] = col;
    }

    /// Maximize `objective` (length ncols) from the current basic feasible
    /// point. Returns false on unboundedness.
    fn maximize(&mut self, objective: &[BigRational], allowed: &[bool]) -> bool {
        loop {
            // reduced costs: c_j - c_B . column_j
            let basis_costs: Vec<BigRational> =
                self.basis.iter().map(|&b| objective[b].clone()).collect();
            let mut entering = None;
            for j in 0..self.ncols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut reduced = objective[j].clone();
                for (r, cost) in basis_costs.iter().enumerate() {
                    if !cost.is_zero() {
                        reduced -= cost * &self.rows[r][j];
                    }
                }
                if reduced.is_positive() {
                    entering = Some(j); // Bland: first improving index
                    break;
                }
            }
            let Some(col) = entering else {
                return true;
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for r in 0..self.rows.len() {
                if self.rows[r][col].is_positive() {
                    let ratio = self.rhs(r) / &self.rows[r][col];
                    let better = match &leave {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((row, _)) = leave else {
                return false;
            };
            self.pivot(row, col);
        }
    }
}

/// Maximize `objective . x` subject to the constraints and `x >= 0`.
pub fn solve_lp(
    num_vars: usize,
    objective: &[BigRational],
    constraints: &[Constraint],
) -> LpResult {
    assert_eq!(objective.len(), num_vars);
    let m = constraints.len();

    // column layout: structural | slack/surplus | artificial
    let mut aux_of_row = vec![None; m];
    let mut naux = 0usize;
    for (i, con) in constraints.iter().enumerate() {
        if matches!(con.cmp, Cmp::Le | Cmp::Ge) {
            aux_of_row[i] = Some(num_vars + naux);
            naux += 1;
        }
    }
    let mut art_of_row = vec![None; m];
    let mut nart = 0usize;

    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut basis = vec![usize::MAX; m];
    for (i, con) in constraints.iter().enumerate() {
        assert_eq!(con.coeffs.len(), num_vars, "constraint arity mismatch");
        let negate = con.rhs.is_negative();
        let sign = |v: &BigRational| if negate { -v.clone() } else { v.clone() };
        let mut row = vec![BigRational::zero(); num_vars + naux];
        for (j, c) in con.coeffs.iter().enumerate() {
            row[j] = sign(c);
        }
        let effective_cmp = match (con.cmp, negate) {
            (Cmp::Le, false) | (Cmp::Ge, true) => Cmp::Le,
            (Cmp::Ge, false) | (Cmp::Le, true) => Cmp::Ge,
            (Cmp::Eq, _) => Cmp::Eq,
        };
        if let Some(aux) = aux_of_row[i] {
            row[aux] = match effective_cmp {
                Cmp::Le => BigRational::one(),
                Cmp::Ge => -BigRational::one(),
                Cmp::Eq => unreachable!(),
            };
        }
        let rhs = sign(&con.rhs);
        if matches!(effective_cmp, Cmp::Le) {
            basis[i] = aux_of_row[i].expect("slack exists");
        } else {
            art_of_row[i] = Some(nart);
            nart += 1;
        }
        row.push(rhs);
        rows.push(row);
    }

    // append artificial columns
    let ncols = num_vars + naux + nart;
    for (i, row) in rows.iter_mut().enumerate() {
        let rhs = row.pop().expect("rhs present");
        row.resize(ncols, BigRational::zero());
        if let Some(a) = art_of_row[i] {
            row[num_vars + naux + a] = BigRational::one();
            basis[i] = num_vars + naux + a;
        }
        row.push(rhs);
    }

    let mut tab = Tableau { rows, basis, ncols };
    let allowed_all = vec![true; ncols];

    if nart > 0 {
        // phase 1: maximize -(sum of artificials)
        let mut phase1 = vec![BigRational::zero(); ncols];
        for a in 0..nart {
            phase1[num_vars + naux + a] = -BigRational::one();
        }
        let bounded = tab.maximize(&phase1, &allowed_all);
        debug_assert!(bounded, "phase 1 objective is bounded by construction");
        let infeasibility: BigRational = (0..m)
            .filter(|&r| tab.basis[r] >= num_vars + naux)
            .map(|r| tab.rhs(r).clone())
            .sum();
        if !infeasibility.is_zero() {
            return LpResult::Infeasible;
        }
        // drive remaining artificials out of the basis
        for r in 0..m {
            if tab.basis[r] >= num_vars + naux {
                if let Some(col) = (0..num_vars + naux).find(|&j| !tab.rows[r][j].is_zero()) {
                    tab.pivot(r, col);
                }
                // an all-zero row is redundant; its artificial stays basic at 0
            }
        }
    }

    // phase 2: original objective, artificial columns banned
    let mut full_obj = vec![BigRational::zero(); ncols];
    full_obj[..num_vars].clone_from_slice(objective);
    let mut allowed = vec![true; ncols];
    allowed[num_vars + naux..].fill(false);
    if !tab.maximize(&full_obj, &allowed) {
        return LpResult::Unbounded;
    }

    let mut solution = vec![BigRational::zero(); num_vars];
    for (r, &b) in tab.basis.iter().enumerate() {
        if b < num_vars {
            solution[b] = tab.rhs(r).clone();
        }
    }
    let value = objective
        .iter()
        .zip(solution.iter())
        .map(|(c, x)| c * x)
        .sum();
    LpResult::Optimal { value, solution }
}

/// Feasibility of `{x >= 0 : constraints}` via phase 1 alone.
pub fn feasible(num_vars: usize, constraints: &[Constraint]) -> bool {
    let objective = vec![BigRational::zero(); num_vars];
    !matches!(
        solve_lp(num_vars, &objective, constraints),
        LpResult::Infeasible
    )
}
