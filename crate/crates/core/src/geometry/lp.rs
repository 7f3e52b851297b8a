//! Exact two-phase primal simplex with Bland's rule.
//!
//! Regions arrive as `h_i(x) >= 0` constraints over free variables. A
//! variable with a single-variable lower bound `c*x_j + b >= 0`, `c > 0`, is
//! shifted onto that bound; the others are split into positive and negative
//! parts. Rows already satisfied at the origin of the shifted system start
//! with their slack in the basis, so the cube-bounded problems that dominate
//! this crate usually need no artificial variables.

use super::{AffineFn, Point, Polyhedron};
use crate::rat::Rat;

/// Result of [`lp_min`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, argmin: Point },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rat> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

enum VarMap {
    /// x = lower + y
    Shifted { lower: Rat, col: usize },
    /// x = y⁺ - y⁻
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    basis: Vec<usize>,
    obj: Vec<Rat>,
    obj_rhs: Rat,
}

enum Step {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        if !inv.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
            self.rhs[r] *= &inv;
        }
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (j, pv) in prow.iter().enumerate() {
                if !pv.is_zero() {
                    let d = &f * pv;
                    self.rows[i][j] -= &d;
                }
            }
            let d = &f * &prhs;
            self.rhs[i] -= &d;
        }
        if !self.obj[c].is_zero() {
            let f = self.obj[c].clone();
            for (j, pv) in prow.iter().enumerate() {
                if !pv.is_zero() {
                    let d = &f * pv;
                    self.obj[j] -= &d;
                }
            }
            let d = &f * &prhs;
            self.obj_rhs -= &d;
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule over the columns `< active_cols`.
    fn run(&mut self, active_cols: usize) -> Step {
        loop {
            let Some(enter) = (0..active_cols).find(|&j| self.obj[j].is_negative()) else {
                return Step::Optimal;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                None => return Step::Unbounded,
                Some((r, _)) => self.pivot(r, enter),
            }
        }
    }
}

/// Exact minimum of `objective` over `region`.
///
/// Dimensions must agree; the caller checks this (see [`super::check_dim`]).
pub fn lp_min(objective: &AffineFn, region: &Polyhedron) -> LpOutcome {
    let n = region.dim();
    debug_assert_eq!(objective.dim(), n);

    let mut constraints: Vec<&AffineFn> = Vec::with_capacity(region.constraints().len());
    for h in region.constraints() {
        if h.is_constant() {
            if h.constant().is_negative() {
                return LpOutcome::Infeasible;
            }
            continue;
        }
        constraints.push(h);
    }

    // Pick a lower bound row for each variable, preferring the tightest.
    let mut lower: Vec<Option<(Rat, usize)>> = vec![None; n];
    for (idx, h) in constraints.iter().enumerate() {
        if let Some((j, c)) = h.single_variable() {
            if c.is_positive() {
                let bound = -(h.constant() / c);
                let tighter = match &lower[j] {
                    None => true,
                    Some((b, _)) => bound > *b,
                };
                if tighter {
                    lower[j] = Some((bound, idx));
                }
            }
        }
    }
    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0;
    for lj in &lower {
        match lj {
            Some((b, _)) => {
                maps.push(VarMap::Shifted { lower: b.clone(), col: ncols });
                ncols += 1;
            }
            None => {
                maps.push(VarMap::Split { pos: ncols, neg: ncols + 1 });
                ncols += 2;
            }
        }
    }
    let consumed: Vec<usize> = lower.iter().flatten().map(|(_, i)| *i).collect();
    let struct_cols = ncols;

    // Each remaining row a·y + b' >= 0 becomes a·y - s = -b'.
    let mut row_coeffs: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for (idx, h) in constraints.iter().enumerate() {
        if consumed.contains(&idx) {
            continue;
        }
        let mut coeffs = vec![Rat::zero(); struct_cols];
        let mut b = h.constant().clone();
        for (j, a) in h.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            match &maps[j] {
                VarMap::Shifted { lower, col } => {
                    b += a * lower;
                    coeffs[*col] = a.clone();
                }
                VarMap::Split { pos, neg } => {
                    coeffs[*pos] = a.clone();
                    coeffs[*neg] = -a;
                }
            }
        }
        row_coeffs.push((coeffs, b));
    }

    let m = row_coeffs.len();
    let slack0 = struct_cols;
    let art0 = slack0 + m;
    let needs_art: Vec<bool> = row_coeffs.iter().map(|(_, b)| b.is_negative()).collect();
    let n_art = needs_art.iter().filter(|&&x| x).count();
    let total = art0 + n_art;

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art = art0;
    for (i, (coeffs, b)) in row_coeffs.into_iter().enumerate() {
        let mut row = vec![Rat::zero(); total];
        // a·y - s = -b
        let r = -&b;
        if needs_art[i] {
            // r > 0: keep orientation, add artificial
            row[..struct_cols].clone_from_slice(&coeffs);
            row[slack0 + i] = -Rat::one();
            row[art] = Rat::one();
            basis.push(art);
            art += 1;
            rows.push(row);
            rhs.push(r);
        } else {
            // r <= 0: negate so the slack is basic with value -r >= 0
            for (j, a) in coeffs.iter().enumerate() {
                row[j] = -a;
            }
            row[slack0 + i] = Rat::one();
            basis.push(slack0 + i);
            rows.push(row);
            rhs.push(-r);
        }
    }

    let mut t = Tableau {
        rows,
        rhs,
        basis,
        obj: vec![Rat::zero(); total],
        obj_rhs: Rat::zero(),
    };

    if n_art > 0 {
        // Phase 1: minimize the sum of artificials.
        for r in 0..m {
            if t.basis[r] >= art0 {
                for j in 0..art0 {
                    let d = t.rows[r][j].clone();
                    if !d.is_zero() {
                        t.obj[j] -= &d;
                    }
                }
                t.obj_rhs -= &t.rhs[r].clone();
            }
        }
        t.run(total);
        if !t.obj_rhs.is_zero() {
            return LpOutcome::Infeasible;
        }
        // Drive remaining (zero-valued) artificials out of the basis.
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= art0 {
                match (0..art0).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(c) => t.pivot(r, c),
                    None => {
                        t.rows.remove(r);
                        t.rhs.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
        for row in t.rows.iter_mut() {
            row.truncate(art0);
        }
    }

    // Phase 2 costs in y-space.
    let mut cost = vec![Rat::zero(); art0];
    let mut cost_const = objective.constant().clone();
    for (j, a) in objective.coeffs().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        match &maps[j] {
            VarMap::Shifted { lower, col } => {
                cost_const += a * lower;
                cost[*col] = a.clone();
            }
            VarMap::Split { pos, neg } => {
                cost[*pos] = a.clone();
                cost[*neg] = -a;
            }
        }
    }
    t.obj = cost.clone();
    t.obj_rhs = Rat::zero();
    for r in 0..t.rows.len() {
        let cb = &cost[t.basis[r]];
        if cb.is_zero() {
            continue;
        }
        for j in 0..art0 {
            if !t.rows[r][j].is_zero() {
                let d = cb * &t.rows[r][j];
                t.obj[j] -= &d;
            }
        }
        let d = cb * &t.rhs[r];
        t.obj_rhs -= &d;
    }
    if let Step::Unbounded = t.run(art0) {
        return LpOutcome::Unbounded;
    }

    let mut y = vec![Rat::zero(); art0];
    for (r, &b) in t.basis.iter().enumerate() {
        y[b] = t.rhs[r].clone();
    }
    let argmin: Point = maps
        .iter()
        .map(|m| match m {
            VarMap::Shifted { lower, col } => lower + &y[*col],
            VarMap::Split { pos, neg } => &y[*pos] - &y[*neg],
        })
        .collect();
    let value = objective.eval(&argmin);
    debug_assert_eq!(value, cost_const - &t.obj_rhs);
    LpOutcome::Optimal { value, argmin }
}
