//! Dense two-phase simplex over exact rationals, with Bland's rule.

use crate::rational::Q;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub rel: Relation,
    pub rhs: Q,
}

/// Maximize `objective · x` subject to the constraints. Variables are
/// nonnegative unless marked free.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    num_vars: usize,
    free: Vec<bool>,
    objective: Vec<Q>,
    constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Q, point: Vec<Q> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            free: vec![false; num_vars],
            objective: vec![Q::zero(); num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn set_free(&mut self, var: usize) {
        self.free[var] = true;
    }

    pub fn set_objective(&mut self, objective: Vec<Q>) {
        assert_eq!(objective.len(), self.num_vars);
        self.objective = objective;
    }

    pub fn add(&mut self, coeffs: Vec<Q>, rel: Relation, rhs: Q) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.constraints.push(Constraint { coeffs, rel, rhs });
    }

    pub fn solve(&self) -> LpOutcome {
        // Column layout: split variables, slacks, artificials.
        let mut col_of = Vec::with_capacity(self.num_vars);
        let mut ncols = 0;
        for &f in &self.free {
            col_of.push(ncols);
            ncols += if f { 2 } else { 1 };
        }
        let structural = ncols;
        let m = self.constraints.len();
        let slack_count = self
            .constraints
            .iter()
            .filter(|c| c.rel != Relation::Eq)
            .count();
        let art_start = structural + slack_count;
        let mut art_rows = Vec::new();
        for c in &self.constraints {
            let rel = if c.rhs.is_negative() { flip(c.rel) } else { c.rel };
            if rel != Relation::Le {
                art_rows.push(());
            }
        }
        let total = art_start + art_rows.len();
        let mut tab: Vec<Vec<Q>> = vec![vec![Q::zero(); total + 1]; m];
        let mut basis = vec![0usize; m];
        let mut next_slack = structural;
        let mut next_art = art_start;
        for (i, c) in self.constraints.iter().enumerate() {
            let sign = if c.rhs.is_negative() { -Q::one() } else { Q::one() };
            let rel = if c.rhs.is_negative() { flip(c.rel) } else { c.rel };
            for (v, a) in c.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let a = a * &sign;
                tab[i][col_of[v]] = a.clone();
                if self.free[v] {
                    tab[i][col_of[v] + 1] = -a;
                }
            }
            tab[i][total] = &c.rhs * &sign;
            let slack_sign = match (c.rel, rel) {
                (Relation::Eq, _) => None,
                (_, Relation::Le) => Some(Q::one()),
                _ => Some(-Q::one()),
            };
            if let Some(s) = slack_sign {
                let positive = s.is_positive();
                tab[i][next_slack] = s;
                if positive {
                    basis[i] = next_slack;
                }
                next_slack += 1;
            }
            if rel != Relation::Le {
                tab[i][next_art] = Q::one();
                basis[i] = next_art;
                next_art += 1;
            }
        }

        let mut t = Tableau { tab, basis, total };
        if total > art_start {
            let mut cost = vec![Q::zero(); total];
            for c in cost.iter_mut().skip(art_start) {
                *c = Q::one();
            }
            match t.minimize(&cost, total) {
                Some(v) if v.is_zero() => {}
                _ => return LpOutcome::Infeasible,
            }
            t.expel_artificials(art_start);
        }
        let mut cost = vec![Q::zero(); total];
        for (v, c) in self.objective.iter().enumerate() {
            cost[col_of[v]] = -c;
            if self.free[v] {
                cost[col_of[v] + 1] = c.clone();
            }
        }
        match t.minimize(&cost, art_start) {
            None => LpOutcome::Unbounded,
            Some(v) => {
                let values = t.values();
                let point = (0..self.num_vars)
                    .map(|v| {
                        let mut x = values[col_of[v]].clone();
                        if self.free[v] {
                            x -= &values[col_of[v] + 1];
                        }
                        x
                    })
                    .collect();
                LpOutcome::Optimal { value: -v, point }
            }
        }
    }
}

fn flip(r: Relation) -> Relation {
    match r {
        Relation::Le => Relation::Ge,
        Relation::Ge => Relation::Le,
        Relation::Eq => Relation::Eq,
    }
}

struct Tableau {
    tab: Vec<Vec<Q>>,
    basis: Vec<usize>,
    total: usize,
}

impl Tableau {
    /// Minimize `cost · x` using only columns below `allowed`. Returns the
    /// optimum, or `None` if unbounded.
    fn minimize(&mut self, cost: &[Q], allowed: usize) -> Option<Q> {
        let rhs = self.total;
        let mut obj: Vec<Q> = cost.iter().cloned().chain(std::iter::once(Q::zero())).collect();
        for (i, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() {
                let f = cost[b].clone();
                for (o, x) in obj.iter_mut().zip(&self.tab[i]) {
                    if !x.is_zero() {
                        *o -= &f * x;
                    }
                }
            }
        }
        loop {
            let Some(enter) = (0..allowed).find(|&j| obj[j].is_negative()) else {
                return Some(-obj[rhs].clone());
            };
            let mut leave: Option<(usize, Q)> = None;
            for (i, row) in self.tab.iter().enumerate() {
                if row[enter].is_positive() {
                    let ratio = &row[rhs] / &row[enter];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let (row, _) = leave?;
            self.pivot(row, enter, &mut obj);
        }
    }

    fn pivot(&mut self, row: usize, col: usize, obj: &mut [Q]) {
        let p = self.tab[row][col].clone();
        for x in self.tab[row].iter_mut() {
            if !x.is_zero() {
                *x /= &p;
            }
        }
        let pivot_row = self.tab[row].clone();
        let eliminate = |target: &mut [Q]| {
            let f = target[col].clone();
            if f.is_zero() {
                return;
            }
            for (t, pr) in target.iter_mut().zip(&pivot_row) {
                if !pr.is_zero() {
                    *t -= &f * pr;
                }
            }
        };
        for (i, r) in self.tab.iter_mut().enumerate() {
            if i != row {
                eliminate(r);
            }
        }
        eliminate(obj);
        self.basis[row] = col;
    }

    fn expel_artificials(&mut self, art_start: usize) {
        let mut i = 0;
        while i < self.tab.len() {
            if self.basis[i] >= art_start {
                match (0..art_start).find(|&j| !self.tab[i][j].is_zero()) {
                    Some(j) => {
                        let mut dummy = vec![Q::zero(); self.total + 1];
                        self.pivot(i, j, &mut dummy);
                    }
                    None => {
                        self.tab.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    fn values(&self) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.total];
        for (i, &b) in self.basis.iter().enumerate() {
            v[b] = self.tab[i][self.total].clone();
        }
        v
    }
}
