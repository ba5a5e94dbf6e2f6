//! Exact linear programming over the rationals.
//!
//! A dense two-phase tableau simplex with Bland's rule. Every optimal answer
//! carries a full dual solution, and [`certify`] re-checks that certificate
//! from scratch using nothing but the problem data.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    /// Sparse row, `(variable index, coefficient)`.
    pub coefficients: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Variable bounds; `None` means infinite in that direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bound {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl Bound {
    pub fn non_negative() -> Self {
        Bound { lower: Some(Rational::zero()), upper: None }
    }

    pub fn free() -> Self {
        Bound { lower: None, upper: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    pub num_vars: usize,
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<Bound>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvalidProblem {
    #[error("objective has {found} coefficients but the problem has {expected} variables")]
    ObjectiveLength { expected: usize, found: usize },
    #[error("bounds list has {found} entries but the problem has {expected} variables")]
    BoundsLength { expected: usize, found: usize },
    #[error("constraint {constraint} references variable {var} >= {num_vars}")]
    IndexOutOfRange { constraint: usize, var: usize, num_vars: usize },
    #[error("variable {var} has lower bound above upper bound")]
    InvertedBounds { var: usize },
}

impl LpProblem {
    /// All variables default to `[0, +inf)` with a zero objective.
    pub fn new(num_vars: usize, sense: Sense) -> Self {
        LpProblem {
            num_vars,
            sense,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
            bounds: vec![Bound::non_negative(); num_vars],
        }
    }

    /// Appends a constraint and returns its row index. Zero coefficients are
    /// dropped.
    pub fn add_constraint(
        &mut self,
        coefficients: Vec<(usize, Rational)>,
        relation: Relation,
        rhs: Rational,
    ) -> usize {
        let coefficients = coefficients.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        self.constraints.push(Constraint { coefficients, relation, rhs });
        self.constraints.len() - 1
    }

    pub fn set_bounds(&mut self, var: usize, bound: Bound) {
        self.bounds[var] = bound;
    }

    pub fn validate(&self) -> Result<(), InvalidProblem> {
        if self.objective.len() != self.num_vars {
            return Err(InvalidProblem::ObjectiveLength {
                expected: self.num_vars,
                found: self.objective.len(),
            });
        }
        if self.bounds.len() != self.num_vars {
            return Err(InvalidProblem::BoundsLength {
                expected: self.num_vars,
                found: self.bounds.len(),
            });
        }
        for (k, row) in self.constraints.iter().enumerate() {
            if let Some(&(var, _)) = row.coefficients.iter().find(|(v, _)| *v >= self.num_vars) {
                return Err(InvalidProblem::IndexOutOfRange {
                    constraint: k,
                    var,
                    num_vars: self.num_vars,
                });
            }
        }
        for (var, b) in self.bounds.iter().enumerate() {
            if let (Some(l), Some(u)) = (&b.lower, &b.upper) {
                if l > u {
                    return Err(InvalidProblem::InvertedBounds { var });
                }
            }
        }
        Ok(())
    }

    /// Evaluates `a_k . x` for constraint `k`.
    pub fn row_activity(&self, k: usize, x: &[Rational]) -> Rational {
        dot(&self.constraints[k].coefficients, x)
    }

    pub fn objective_at(&self, x: &[Rational]) -> Rational {
        self.objective
            .iter()
            .zip(x)
            .filter(|(c, _)| !c.is_zero())
            .fold(Rational::zero(), |acc, (c, v)| acc + c * v)
    }
}

fn dot(row: &[(usize, Rational)], x: &[Rational]) -> Rational {
    row.iter().fold(Rational::zero(), |acc, (j, a)| acc + a * &x[*j])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Result of [`solve`].
///
/// For an optimal solution, `dual[k]` is the shadow price of constraint `k`
/// (the rate of change of the optimal objective in its right-hand side), so
/// for a maximization `<=` rows carry non-negative duals and `>=` rows
/// non-positive ones; a minimization flips both signs. Equality rows are free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: Vec<Rational>,
    pub dual: Vec<Rational>,
    pub objective_value: Rational,
    pub pivots: usize,
}

impl LpSolution {
    fn without_solution(status: LpStatus, pivots: usize) -> Self {
        LpSolution {
            status,
            primal: Vec::new(),
            dual: Vec::new(),
            objective_value: Rational::zero(),
            pivots,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// How an original variable is expressed through non-negative tableau columns.
#[derive(Debug, Clone)]
enum VarMap {
    /// `x = offset + col`
    Shift { col: usize, offset: Rational },
    /// `x = offset - col`
    Reflect { col: usize, offset: Rational },
    /// `x = pos - neg`
    Split { pos: usize, neg: usize },
}

/// Sparse row, relation, right-hand side and origin after standardization.
type StdRow = (Vec<(usize, Rational)>, Relation, Rational, RowOrigin);

/// Where a tableau row came from.
#[derive(Debug, Clone, Copy)]
enum RowOrigin {
    Constraint(usize),
    UpperBound,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs of the current phase, `c_j - c_B B^-1 A_j`.
    reduced: Vec<Rational>,
    num_cols: usize,
    pivots: usize,
}

impl Tableau {
    fn pivot(&mut self, pr: usize, pc: usize) {
        let inv = self.rows[pr][pc].recip();
        if !num_traits::One::is_one(&inv) {
            for v in self.rows[pr].iter_mut().filter(|v| !v.is_zero()) {
                *v *= &inv;
            }
            self.rhs[pr] *= &inv;
        }
        let support: Vec<usize> = (0..self.num_cols).filter(|&j| !self.rows[pr][j].is_zero()).collect();
        let (pivot_row, pivot_rhs) = (self.rows[pr].clone(), self.rhs[pr].clone());

        for r in 0..self.rows.len() {
            if r == pr || self.rows[r][pc].is_zero() {
                continue;
            }
            let factor = self.rows[r][pc].clone();
            let row = &mut self.rows[r];
            for &j in &support {
                row[j] -= &factor * &pivot_row[j];
            }
            if !pivot_rhs.is_zero() {
                self.rhs[r] -= &factor * &pivot_rhs;
            }
        }
        if !self.reduced[pc].is_zero() {
            let factor = self.reduced[pc].clone();
            for &j in &support {
                self.reduced[j] -= &factor * &pivot_row[j];
            }
        }
        self.basis[pr] = pc;
        self.pivots += 1;
    }

    /// Runs Bland's rule until optimal. Returns `false` on unboundedness.
    fn optimize(&mut self, eligible: impl Fn(usize) -> bool) -> bool {
        loop {
            let entering = (0..self.num_cols).find(|&j| eligible(j) && self.reduced[j].is_positive());
            let Some(pc) = entering else { return true };

            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][pc];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &best {
                    None => true,
                    Some((br, bratio)) => {
                        ratio < *bratio || (ratio == *bratio && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((pr, _)) => self.pivot(pr, pc),
                None => return false,
            }
        }
    }

    fn set_costs(&mut self, costs: &[Rational]) {
        self.reduced = costs.to_vec();
        for r in 0..self.rows.len() {
            let cb = &costs[self.basis[r]];
            if cb.is_zero() {
                continue;
            }
            for j in 0..self.num_cols {
                if !self.rows[r][j].is_zero() {
                    self.reduced[j] -= cb * &self.rows[r][j];
                }
            }
        }
    }
}

/// Solves `p` exactly. Infeasibility and unboundedness are reported through
/// [`LpSolution::status`]; only a malformed problem is an error.
pub fn solve(p: &LpProblem) -> Result<LpSolution, InvalidProblem> {
    p.validate()?;

    // Rewrite every variable in terms of non-negative columns.
    let mut var_maps = Vec::with_capacity(p.num_vars);
    let mut num_struct = 0usize;
    let mut upper_rows: Vec<(usize, Rational)> = Vec::new();
    for b in &p.bounds {
        match (&b.lower, &b.upper) {
            (Some(l), upper) => {
                let col = num_struct;
                num_struct += 1;
                if let Some(u) = upper {
                    upper_rows.push((col, u - l));
                }
                var_maps.push(VarMap::Shift { col, offset: l.clone() });
            }
            (None, Some(u)) => {
                var_maps.push(VarMap::Reflect { col: num_struct, offset: u.clone() });
                num_struct += 1;
            }
            (None, None) => {
                var_maps.push(VarMap::Split { pos: num_struct, neg: num_struct + 1 });
                num_struct += 2;
            }
        }
    }

    let mut cost = vec![Rational::zero(); num_struct];
    let sign = match p.sense {
        Sense::Maximize => Rational::from_integer(1.into()),
        Sense::Minimize => Rational::from_integer((-1).into()),
    };
    for (j, c) in p.objective.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let c = c * &sign;
        match &var_maps[j] {
            VarMap::Shift { col, .. } => cost[*col] += c,
            VarMap::Reflect { col, .. } => cost[*col] -= c,
            VarMap::Split { pos, neg } => {
                cost[*pos] += &c;
                cost[*neg] -= c;
            }
        }
    }

    // Standardized rows over structural columns.
    let mut std_rows: Vec<StdRow> = Vec::new();
    for (k, con) in p.constraints.iter().enumerate() {
        let mut coeffs: Vec<(usize, Rational)> = Vec::with_capacity(con.coefficients.len());
        let mut rhs = con.rhs.clone();
        for (j, a) in &con.coefficients {
            match &var_maps[*j] {
                VarMap::Shift { col, offset } => {
                    rhs -= a * offset;
                    coeffs.push((*col, a.clone()));
                }
                VarMap::Reflect { col, offset } => {
                    rhs -= a * offset;
                    coeffs.push((*col, -a.clone()));
                }
                VarMap::Split { pos, neg } => {
                    coeffs.push((*pos, a.clone()));
                    coeffs.push((*neg, -a.clone()));
                }
            }
        }
        std_rows.push((coeffs, con.relation, rhs, RowOrigin::Constraint(k)));
    }
    for (col, width) in upper_rows {
        std_rows.push((
            vec![(col, Rational::from_integer(1.into()))],
            Relation::Le,
            width,
            RowOrigin::UpperBound,
        ));
    }

    let m = std_rows.len();
    let mut row_flip = vec![false; m];
    let mut relations = Vec::with_capacity(m);
    for (r, row) in std_rows.iter_mut().enumerate() {
        if row.2.is_negative() {
            row_flip[r] = true;
            for (_, a) in row.0.iter_mut() {
                *a = -a.clone();
            }
            row.2 = -row.2.clone();
            row.1 = match row.1 {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
        relations.push(row.1);
    }

    // Column layout: structural | slack/surplus | artificial.
    let num_slack = relations.iter().filter(|r| **r != Relation::Eq).count();
    let num_art = relations.iter().filter(|r| **r != Relation::Le).count();
    let num_cols = num_struct + num_slack + num_art;
    let art_start = num_struct + num_slack;

    let one = Rational::from_integer(1.into());
    let mut rows = vec![vec![Rational::zero(); num_cols]; m];
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut identity_col = Vec::with_capacity(m);
    let (mut next_slack, mut next_art) = (num_struct, art_start);
    for (r, (coeffs, relation, b, _)) in std_rows.iter().enumerate() {
        for (j, a) in coeffs {
            rows[r][*j] += a;
        }
        rhs.push(b.clone());
        match relation {
            Relation::Le => {
                rows[r][next_slack] = one.clone();
                basis.push(next_slack);
                identity_col.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                rows[r][next_slack] = -one.clone();
                next_slack += 1;
                rows[r][next_art] = one.clone();
                basis.push(next_art);
                identity_col.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                rows[r][next_art] = one.clone();
                basis.push(next_art);
                identity_col.push(next_art);
                next_art += 1;
            }
        }
    }

    let mut tab = Tableau { rows, rhs, basis, reduced: Vec::new(), num_cols, pivots: 0 };

    // Phase 1: maximize minus the sum of artificials.
    if num_art > 0 {
        let mut phase1 = vec![Rational::zero(); num_cols];
        for c in phase1.iter_mut().skip(art_start) {
            *c = -one.clone();
        }
        tab.set_costs(&phase1);
        tab.optimize(|_| true);
        let infeasibility = (0..m)
            .filter(|&r| tab.basis[r] >= art_start)
            .fold(Rational::zero(), |acc, r| acc + &tab.rhs[r]);
        if infeasibility.is_positive() {
            return Ok(LpSolution::without_solution(LpStatus::Infeasible, tab.pivots));
        }
        // Drive zero-level artificials out of the basis where possible; rows
        // where that fails are redundant and stay inert.
        for r in 0..m {
            if tab.basis[r] < art_start {
                continue;
            }
            if let Some(j) = (0..art_start).find(|&j| !tab.rows[r][j].is_zero()) {
                tab.pivot(r, j);
            }
        }
    }

    // Phase 2.
    let mut phase2 = cost.clone();
    phase2.resize(num_cols, Rational::zero());
    tab.set_costs(&phase2);
    if !tab.optimize(|j| j < art_start) {
        return Ok(LpSolution::without_solution(LpStatus::Unbounded, tab.pivots));
    }

    let mut columns = vec![Rational::zero(); num_cols];
    for r in 0..m {
        columns[tab.basis[r]] = tab.rhs[r].clone();
    }
    let primal: Vec<Rational> = var_maps
        .iter()
        .map(|vm| match vm {
            VarMap::Shift { col, offset } => offset + &columns[*col],
            VarMap::Reflect { col, offset } => offset - &columns[*col],
            VarMap::Split { pos, neg } => &columns[*pos] - &columns[*neg],
        })
        .collect();

    // Identity columns start as unit vectors with zero phase-2 cost, so their
    // negated reduced costs are the row prices of the standardized program.
    let mut dual = vec![Rational::zero(); p.constraints.len()];
    for r in 0..m {
        if let RowOrigin::Constraint(k) = std_rows[r].3 {
            let mut y = -tab.reduced[identity_col[r]].clone();
            if row_flip[r] {
                y = -y;
            }
            dual[k] = y * &sign;
        }
    }

    let objective_value = p.objective_at(&primal);
    Ok(LpSolution { status: LpStatus::Optimal, primal, dual, objective_value, pivots: tab.pivots })
}

/// Why a claimed optimal solution failed independent re-checking.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("solution status is {0:?}, not optimal")]
    NotOptimal(LpStatus),
    #[error("solution vectors have the wrong length")]
    Shape,
    #[error("variable {0} violates its bounds")]
    BoundViolated(usize),
    #[error("constraint {0} is violated by the primal")]
    RowViolated(usize),
    #[error("dual of constraint {0} has the wrong sign")]
    DualSign(usize),
    #[error("reduced cost of variable {0} is not supported by a finite active bound")]
    ReducedCost(usize),
    #[error("complementary slackness fails on constraint {0}")]
    Slackness(usize),
    #[error("reported objective {reported} differs from c.x = {primal}")]
    ObjectiveMismatch { reported: Rational, primal: Rational },
    #[error("duality gap: primal {primal} vs dual {dual}")]
    DualityGap { primal: Rational, dual: Rational },
}

/// Re-checks primal feasibility, dual feasibility and a zero duality gap
/// using only `p` and the numbers in `s`.
pub fn certify_detailed(p: &LpProblem, s: &LpSolution) -> Result<(), CertificateError> {
    if s.status != LpStatus::Optimal {
        return Err(CertificateError::NotOptimal(s.status));
    }
    if s.primal.len() != p.num_vars || s.dual.len() != p.constraints.len() || p.validate().is_err() {
        return Err(CertificateError::Shape);
    }
    let x = &s.primal;
    for (j, b) in p.bounds.iter().enumerate() {
        let below = b.lower.as_ref().is_some_and(|l| x[j] < *l);
        let above = b.upper.as_ref().is_some_and(|u| x[j] > *u);
        if below || above {
            return Err(CertificateError::BoundViolated(j));
        }
    }
    let activity: Vec<Rational> = (0..p.constraints.len()).map(|k| p.row_activity(k, x)).collect();
    for (k, con) in p.constraints.iter().enumerate() {
        let ok = match con.relation {
            Relation::Le => activity[k] <= con.rhs,
            Relation::Ge => activity[k] >= con.rhs,
            Relation::Eq => activity[k] == con.rhs,
        };
        if !ok {
            return Err(CertificateError::RowViolated(k));
        }
    }

    // Work in maximization form: flip objective and duals for minimization.
    let flip = p.sense == Sense::Minimize;
    let signed = |v: &Rational| if flip { -v.clone() } else { v.clone() };
    for (k, con) in p.constraints.iter().enumerate() {
        let y = signed(&s.dual[k]);
        let ok = match con.relation {
            Relation::Le => !y.is_negative(),
            Relation::Ge => !y.is_positive(),
            Relation::Eq => true,
        };
        if !ok {
            return Err(CertificateError::DualSign(k));
        }
        if !y.is_zero() && activity[k] != con.rhs {
            return Err(CertificateError::Slackness(k));
        }
    }

    let mut reduced: Vec<Rational> = p.objective.iter().map(signed).collect();
    for (k, con) in p.constraints.iter().enumerate() {
        let y = signed(&s.dual[k]);
        if y.is_zero() {
            continue;
        }
        for (j, a) in &con.coefficients {
            reduced[*j] -= &y * a;
        }
    }
    let mut dual_value = p
        .constraints
        .iter()
        .enumerate()
        .fold(Rational::zero(), |acc, (k, con)| acc + signed(&s.dual[k]) * &con.rhs);
    for (j, d) in reduced.iter().enumerate() {
        let bound = if d.is_positive() {
            p.bounds[j].upper.as_ref()
        } else if d.is_negative() {
            p.bounds[j].lower.as_ref()
        } else {
            continue;
        };
        match bound {
            Some(v) if *v == x[j] => dual_value += d * v,
            _ => return Err(CertificateError::ReducedCost(j)),
        }
    }

    let primal_value = p.objective_at(x);
    if primal_value != s.objective_value {
        return Err(CertificateError::ObjectiveMismatch {
            reported: s.objective_value.clone(),
            primal: primal_value,
        });
    }
    let primal_max = signed(&primal_value);
    if primal_max != dual_value {
        return Err(CertificateError::DualityGap { primal: primal_max, dual: dual_value });
    }
    Ok(())
}

pub fn certify(p: &LpProblem, s: &LpSolution) -> bool {
    certify_detailed(p, s).is_ok()
}

/// Failure of [`solve_certified`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error(transparent)]
    Invalid(#[from] InvalidProblem),
    #[error("solver produced an uncertifiable solution: {0}")]
    Certificate(#[from] CertificateError),
}

/// [`solve`], then [`certify_detailed`] whenever the status is optimal.
pub fn solve_certified(p: &LpProblem) -> Result<LpSolution, LpError> {
    let s = solve(p)?;
    if s.is_optimal() {
        certify_detailed(p, &s)?;
    }
    Ok(s)
}

impl fmt::Display for LpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
        };
        f.write_str(name)
    }
}
