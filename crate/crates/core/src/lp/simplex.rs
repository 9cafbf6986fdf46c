use std::collections::BTreeMap;

use super::{LinearProgram, LpResult, Relation, VarId};
use crate::error::Result;
use crate::rational::Rational;

/// How an original variable is expressed over the nonnegative tableau
/// columns.
enum VarMap {
    Fixed(Rational),
    /// x = offset + col
    Shift(Rational, usize),
    /// x = offset - col
    Mirror(Rational, usize),
    /// x = pos - neg
    Split(usize, usize),
}

const DEGENERATE_LIMIT: usize = 32;

struct Row {
    coefs: Vec<(usize, Rational)>,
    relation: Relation,
    rhs: Rational,
}

/// Solves `p` exactly. Free variables are split into two nonnegative
/// columns, finite bounds become shifts plus `<=` rows. Phase one minimises
/// the sum of artificials.
pub fn solve_lp(p: &LinearProgram) -> Result<LpResult> {
    p.check()?;

    let mut ncols = 0usize;
    let mut fresh = || {
        ncols += 1;
        ncols - 1
    };
    let mut rows: Vec<Row> = Vec::new();
    let maps: Vec<VarMap> = p
        .variables()
        .iter()
        .map(|v| match (&v.lower, &v.upper) {
            (Some(l), Some(u)) if l == u => VarMap::Fixed(l.clone()),
            (Some(l), Some(u)) => {
                let c = fresh();
                rows.push(Row { coefs: vec![(c, Rational::one())], relation: Relation::Le, rhs: u - l });
                VarMap::Shift(l.clone(), c)
            }
            (Some(l), None) => VarMap::Shift(l.clone(), fresh()),
            (None, Some(u)) => VarMap::Mirror(u.clone(), fresh()),
            (None, None) => {
                let pos = fresh();
                VarMap::Split(pos, fresh())
            }
        })
        .collect();
    let nstruct = ncols;

    // Substitutes the column expressions into a linear expression:
    // returns (column coefficients, constant).
    let substitute = |expr: &super::LinearExpr| {
        let mut coefs: BTreeMap<usize, Rational> = BTreeMap::new();
        let mut constant = Rational::zero();
        for (var, a) in expr.terms() {
            let i = p.var_index(var).expect("checked");
            match &maps[i] {
                VarMap::Fixed(x) => constant += a * x,
                VarMap::Shift(off, c) => {
                    constant += a * off;
                    *coefs.entry(*c).or_default() += a;
                }
                VarMap::Mirror(off, c) => {
                    constant += a * off;
                    *coefs.entry(*c).or_default() -= a;
                }
                VarMap::Split(pos, neg) => {
                    *coefs.entry(*pos).or_default() += a;
                    *coefs.entry(*neg).or_default() -= a;
                }
            }
        }
        let coefs: Vec<(usize, Rational)> = coefs.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        (coefs, constant)
    };

    for c in p.constraints() {
        let (coefs, constant) = substitute(&c.expr);
        let rhs = &c.rhs - constant;
        if coefs.is_empty() {
            if c.relation.holds(&Rational::zero(), &rhs) {
                continue;
            }
            return Ok(LpResult::Infeasible);
        }
        rows.push(Row { coefs, relation: c.relation, rhs });
    }
    let (obj_coefs, obj_constant) = substitute(p.objective());

    let mut tableau = Tableau::build(nstruct, rows);
    if !tableau.phase_one() {
        return Ok(LpResult::Infeasible);
    }
    let mut cost = vec![Rational::zero(); tableau.width()];
    for (c, a) in obj_coefs {
        cost[c] = a;
    }
    if !tableau.phase_two(&cost) {
        return Ok(LpResult::Unbounded);
    }

    let cols = tableau.column_values();
    let assignment: BTreeMap<VarId, Rational> = p
        .variables()
        .iter()
        .zip(&maps)
        .map(|(v, m)| {
            let x = match m {
                VarMap::Fixed(x) => x.clone(),
                VarMap::Shift(off, c) => off + &cols[*c],
                VarMap::Mirror(off, c) => off - &cols[*c],
                VarMap::Split(pos, neg) => &cols[*pos] - &cols[*neg],
            };
            (v.id.clone(), x)
        })
        .collect();
    let value = p.objective().eval(&assignment);
    debug_assert_eq!(value, obj_constant + tableau.objective_value());
    debug_assert!(p.is_feasible(&assignment));
    Ok(LpResult::Optimal { value, assignment })
}

struct Tableau {
    /// Each row holds `width` coefficients followed by the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Reduced costs followed by the negated objective value.
    obj: Vec<Rational>,
    first_artificial: usize,
    width: usize,
}

impl Tableau {
    fn build(nstruct: usize, mut rows: Vec<Row>) -> Tableau {
        for row in &mut rows {
            if row.rhs.is_negative() {
                row.rhs = -&row.rhs;
                for (_, a) in &mut row.coefs {
                    *a = -&*a;
                }
                row.relation = match row.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
        }
        let nslack = rows.iter().filter(|r| r.relation != Relation::Eq).count();
        let nart = rows.iter().filter(|r| r.relation != Relation::Le).count();
        let first_artificial = nstruct + nslack;
        let width = first_artificial + nart;

        let mut dense = Vec::with_capacity(rows.len());
        let mut basis = Vec::with_capacity(rows.len());
        let (mut slack, mut art) = (nstruct, first_artificial);
        for row in rows {
            let mut d = vec![Rational::zero(); width + 1];
            for (c, a) in row.coefs {
                d[c] = a;
            }
            d[width] = row.rhs;
            match row.relation {
                Relation::Le => {
                    d[slack] = Rational::one();
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    d[slack] = -Rational::one();
                    slack += 1;
                    d[art] = Rational::one();
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    d[art] = Rational::one();
                    basis.push(art);
                    art += 1;
                }
            }
            dense.push(d);
        }
        Tableau { rows: dense, basis, obj: vec![Rational::zero(); width + 1], first_artificial, width }
    }

    fn width(&self) -> usize {
        self.width
    }

    fn objective_value(&self) -> Rational {
        -&self.obj[self.width]
    }

    /// Loads `cost` (one entry per column) as the objective, priced out
    /// against the current basis.
    fn set_objective(&mut self, cost: &[Rational]) {
        let mut obj: Vec<Rational> = cost.to_vec();
        obj.push(Rational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (o, x) in obj.iter_mut().zip(row) {
                if !x.is_zero() {
                    *o -= cb * x;
                }
            }
        }
        self.obj = obj;
    }

    /// Returns false when the program is infeasible.
    fn phase_one(&mut self) -> bool {
        if self.first_artificial == self.width {
            return true;
        }
        let mut cost = vec![Rational::zero(); self.width];
        for c in &mut cost[self.first_artificial..] {
            *c = -Rational::one();
        }
        self.set_objective(&cost);
        let finished = self.iterate(self.width);
        debug_assert!(finished, "phase one is bounded");
        if self.objective_value().is_negative() {
            return false;
        }
        // drive zero-valued artificials out of the basis, dropping redundant rows
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.first_artificial {
                match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => {
                        self.pivot(i, j);
                        i += 1;
                    }
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
        true
    }

    /// Returns false when the objective is unbounded.
    fn phase_two(&mut self, cost: &[Rational]) -> bool {
        self.set_objective(cost);
        self.iterate(self.first_artificial)
    }

    /// Pivots over columns `< allowed` until optimal. Prices by largest
    /// reduced cost and falls back to Bland's rule for good after a run of
    /// degenerate pivots, which rules out cycling. Returns false on
    /// unboundedness.
    fn iterate(&mut self, allowed: usize) -> bool {
        let mut degenerate_run = 0;
        let mut bland = false;
        loop {
            let entering = if bland {
                (0..allowed).find(|&j| self.obj[j].is_positive())
            } else {
                (0..allowed)
                    .filter(|&j| self.obj[j].is_positive())
                    .max_by(|&a, &b| self.obj[a].cmp(&self.obj[b]).then(b.cmp(&a)))
            };
            let Some(col) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = &row[col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &row[self.width] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((row, ratio)) = best else {
                return false;
            };
            if ratio.is_zero() {
                degenerate_run += 1;
                bland |= degenerate_run > DEGENERATE_LIMIT;
            } else {
                degenerate_run = 0;
            }
            self.pivot(row, col);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let mut prow = std::mem::take(&mut self.rows[r]);
        let inv = prow[c].recip();
        for x in prow.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();
        let eliminate = |row: &mut Vec<Rational>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for &j in &nz {
                let delta = &f * &prow[j];
                row[j] -= delta;
            }
        };
        for row in self.rows.iter_mut() {
            if !row.is_empty() {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.rows[r] = prow;
        self.basis[r] = c;
    }

    fn column_values(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.width];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            x[b] = row[self.width].clone();
        }
        x
    }
}
