//! Dense two-phase simplex method for `min c·x  s.t.  Ax = b, x ≥ 0`.
//!
//! Small problems only (the oracle's systems have a few dozen rows). Bland's
//! rule picks both the entering and the leaving variable, so the method
//! terminates on degenerate vertices.

/// Feasibility tolerance.
pub const EPS_FEAS: f64 = 1e-9;

const PIVOT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible { phase_one: f64 },
    Unbounded,
}

impl LpOutcome {
    pub fn solution(&self) -> Option<&[f64]> {
        match self {
            Self::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }
}

/// Equality-form linear program with one row per constraint.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    vars: usize,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

impl LinearProgram {
    pub fn new(vars: usize) -> Self {
        Self {
            vars,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>, rhs: f64) {
        assert_eq!(row.len(), self.vars, "row length");
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn feasible(&self) -> LpOutcome {
        self.minimize(&vec![0.0; self.vars()])
    }

    pub fn minimize(&self, cost: &[f64]) -> LpOutcome {
        Tableau::new(self).solve(cost)
    }

    pub fn maximize(&self, gain: &[f64]) -> LpOutcome {
        let neg: Vec<f64> = gain.iter().map(|c| -c).collect();
        match self.minimize(&neg) {
            LpOutcome::Optimal { x, value } => LpOutcome::Optimal { x, value: -value },
            other => other,
        }
    }
}

struct Tableau {
    // m rows of n structural + m artificial columns, then the rhs
    a: Vec<Vec<f64>>,
    basis: Vec<usize>,
    n: usize,
    rhs: usize,
}

impl Tableau {
    fn new(lp: &LinearProgram) -> Self {
        let m = lp.rows.len();
        let n = lp.vars;
        let a = lp
            .rows
            .iter()
            .zip(&lp.rhs)
            .enumerate()
            .map(|(i, (row, &b))| {
                let s = if b < 0.0 { -1.0 } else { 1.0 };
                let mut t: Vec<f64> = row.iter().map(|x| s * x).collect();
                t.extend((0..m).map(|k| if k == i { 1.0 } else { 0.0 }));
                t.push(s * b);
                t
            })
            .collect();
        Self {
            a,
            basis: (n..n + m).collect(),
            n,
            rhs: n + m,
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c];
        self.a[r].iter_mut().for_each(|x| *x /= p);
        let pivot_row = self.a[r].clone();
        for (i, row) in self.a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                row.iter_mut().zip(&pivot_row).for_each(|(x, y)| *x -= f * y);
            }
        }
        self.basis[r] = c;
    }

    /// Runs the simplex method for `cost` over columns `< limit`.
    fn optimize(&mut self, cost: &[f64], limit: usize) -> bool {
        let rhs = self.rhs;
        loop {
            let reduced = |t: &Self, c: usize| -> f64 {
                cost[c] - t.a.iter().zip(&t.basis).map(|(row, &b)| cost[b] * row[c]).sum::<f64>()
            };
            let entering = (0..limit).find(|&c| !self.basis.contains(&c) && reduced(self, c) < -EPS_FEAS * 1e-3);
            let Some(c) = entering else {
                return true;
            };
            let leaving = (0..self.a.len())
                .filter(|&r| self.a[r][c] > PIVOT_TOL)
                .map(|r| (r, self.a[r][rhs] / self.a[r][c]))
                .min_by(|x, y| {
                    x.1.total_cmp(&y.1)
                        .then(self.basis[x.0].cmp(&self.basis[y.0]))
                });
            let Some((r, _)) = leaving else {
                return false;
            };
            self.pivot(r, c);
        }
    }

    fn solve(mut self, cost: &[f64]) -> LpOutcome {
        let (n, m, rhs) = (self.n, self.a.len(), self.rhs);
        let mut phase_one = vec![0.0; n + m];
        phase_one[n..].iter_mut().for_each(|c| *c = 1.0);
        self.optimize(&phase_one, n + m);
        let infeasibility: f64 = self
            .basis
            .iter()
            .zip(&self.a)
            .filter(|(&b, _)| b >= n)
            .map(|(_, row)| row[rhs])
            .sum();
        if infeasibility > EPS_FEAS {
            return LpOutcome::Infeasible {
                phase_one: infeasibility,
            };
        }
        // drive artificials out of the basis; rows with no structural entry are redundant
        let mut r = 0;
        while r < self.a.len() {
            if self.basis[r] >= n {
                match (0..n).find(|&c| self.a[r][c].abs() > PIVOT_TOL) {
                    Some(c) => self.pivot(r, c),
                    None => {
                        self.a.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        let mut full_cost = cost.to_vec();
        full_cost.resize(n + m, 0.0);
        if !self.optimize(&full_cost, n) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![0.0; n];
        for (row, &b) in self.a.iter().zip(&self.basis) {
            if b < n {
                x[b] = row[rhs].max(0.0);
            }
        }
        let value = cost.iter().zip(&x).map(|(c, v)| c * v).sum();
        LpOutcome::Optimal { x, value }
    }
}
