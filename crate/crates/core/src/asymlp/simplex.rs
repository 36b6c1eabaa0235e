//! Phase-1 simplex over an arbitrary ordered field.
//!
//! Free variables `x` are split as `x⁺ - x⁻`; each row `a·x ≤ b` gets a
//! slack, is sign-flipped so its right-hand side is non-negative, and gets
//! its own artificial variable. The sum of artificials is minimized with
//! Bland's rule; the system is feasible iff the optimum is zero.
//!
//! Every order decision goes through [`Tableau::probe`], which keeps the
//! largest [`OrderedField::stability_bound`] seen. Past that bound every
//! specialization of the field takes exactly the same decisions, so it is a
//! valid steady-state threshold for the run.

use super::SolveError;
use crate::ratfield::{OrderedField, Rational, Sign};

pub(crate) struct RawOutcome<F> {
    pub feasible: bool,
    /// Values of the original free variables, when feasible.
    pub point: Option<Vec<F>>,
    pub pivots: usize,
    pub bound: Option<Rational>,
}

struct Tableau<F> {
    rows: Vec<Vec<F>>,
    rhs: Vec<F>,
    basis: Vec<usize>,
    objective: Vec<F>,
    /// Negated objective value.
    objective_rhs: F,
    bound: Option<Rational>,
}

impl<F: OrderedField> Tableau<F> {
    fn probe(&mut self, v: &F) -> Sign {
        if let Some(b) = v.stability_bound() {
            if self.bound.as_ref().is_none_or(|cur| &b > cur) {
                self.bound = Some(b);
            }
        }
        v.sign()
    }

    fn entering(&mut self) -> Option<usize> {
        for j in 0..self.objective.len() {
            let r = self.objective[j].clone();
            if self.probe(&r) == Sign::Negative {
                return Some(j);
            }
        }
        None
    }

    fn leaving(&mut self, col: usize) -> Option<usize> {
        let mut best: Option<(usize, F)> = None;
        for i in 0..self.rows.len() {
            let a = self.rows[i][col].clone();
            if a.is_zero() || self.probe(&a) != Sign::Positive {
                continue;
            }
            let ratio = self.rhs[i].div(&a);
            best = match best {
                None => Some((i, ratio)),
                Some((bi, bratio)) => match self.probe(&ratio.sub(&bratio)) {
                    Sign::Negative => Some((i, ratio)),
                    Sign::Zero if self.basis[i] < self.basis[bi] => Some((i, ratio)),
                    _ => Some((bi, bratio)),
                },
            };
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        let pivot_row: Vec<F> = self.rows[row].iter().map(|v| v.div(&p)).collect();
        let pivot_rhs = self.rhs[row].div(&p);
        for i in 0..self.rows.len() {
            if i == row {
                continue;
            }
            let factor = self.rows[i][col].clone();
            if factor.is_zero() {
                continue;
            }
            for (dst, src) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !src.is_zero() {
                    *dst = dst.sub(&factor.mul(src));
                }
            }
            self.rhs[i] = self.rhs[i].sub(&factor.mul(&pivot_rhs));
        }
        let factor = self.objective[col].clone();
        if !factor.is_zero() {
            for (dst, src) in self.objective.iter_mut().zip(&pivot_row) {
                if !src.is_zero() {
                    *dst = dst.sub(&factor.mul(src));
                }
            }
            self.objective_rhs = self.objective_rhs.sub(&factor.mul(&pivot_rhs));
        }
        self.rows[row] = pivot_row;
        self.rhs[row] = pivot_rhs;
        self.basis[row] = col;
    }
}

/// Decides feasibility of `rows[i].0 · x ≤ rows[i].1` over free `x`.
pub(crate) fn phase_one<F: OrderedField>(
    n_vars: usize,
    rows: &[(Vec<F>, F)],
    pivot_ceiling: Option<usize>,
) -> Result<RawOutcome<F>, SolveError> {
    let mut t = Tableau {
        rows: Vec::new(),
        rhs: Vec::new(),
        basis: Vec::new(),
        objective: Vec::new(),
        objective_rhs: F::zero(),
        bound: None,
    };

    // rows with no variable are decided on the spot
    let mut kept: Vec<(&Vec<F>, &F)> = Vec::new();
    for (a, b) in rows {
        if a.iter().all(F::is_zero) {
            if t.probe(b) == Sign::Negative {
                return Ok(RawOutcome {
                    feasible: false,
                    point: None,
                    pivots: 0,
                    bound: t.bound,
                });
            }
        } else {
            kept.push((a, b));
        }
    }

    let m = kept.len();
    // columns: x⁺ (n), x⁻ (n), slacks (m), artificials (m)
    let slack0 = 2 * n_vars;
    let art0 = slack0 + m;
    let cols = art0 + m;
    for (i, (a, b)) in kept.iter().enumerate() {
        let flip = t.probe(b) == Sign::Negative;
        let orient = |v: &F| if flip { v.neg() } else { v.clone() };
        let mut row = vec![F::zero(); cols];
        for (j, aj) in a.iter().enumerate() {
            row[j] = orient(aj);
            row[n_vars + j] = orient(&aj.neg());
        }
        row[slack0 + i] = orient(&F::one());
        row[art0 + i] = F::one();
        t.rows.push(row);
        t.rhs.push(orient(b));
        t.basis.push(art0 + i);
    }
    t.objective = (0..cols)
        .map(|j| {
            if j >= art0 {
                F::zero()
            } else {
                t.rows.iter().fold(F::zero(), |acc, r| acc.sub(&r[j]))
            }
        })
        .collect();
    t.objective_rhs = t.rhs.iter().fold(F::zero(), |acc, b| acc.sub(b));

    let ceiling = pivot_ceiling.unwrap_or(10 * (m + cols) * (m + cols)).max(1);
    let mut pivots = 0;
    while let Some(col) = t.entering() {
        let row = t.leaving(col).ok_or(SolveError::UnboundedPhaseOne)?;
        if pivots >= ceiling {
            return Err(SolveError::PivotCeiling { limit: ceiling });
        }
        t.pivot(row, col);
        pivots += 1;
    }

    let objective = t.objective_rhs.neg();
    let feasible = t.probe(&objective) == Sign::Zero;
    let point = feasible.then(|| {
        let mut values = vec![F::zero(); cols];
        for (i, &b) in t.basis.iter().enumerate() {
            values[b] = t.rhs[i].clone();
        }
        (0..n_vars).map(|j| values[j].sub(&values[n_vars + j])).collect()
    });
    Ok(RawOutcome {
        feasible,
        point,
        pivots,
        bound: t.bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfield::{rat, ratio};

    fn rows(data: &[(&[i64], i64)]) -> Vec<(Vec<Rational>, Rational)> {
        data.iter()
            .map(|(a, b)| (a.iter().map(|&v| rat(v)).collect(), rat(*b)))
            .collect()
    }

    fn check_point(data: &[(Vec<Rational>, Rational)], point: &[Rational]) {
        for (a, b) in data {
            let lhs: Rational = a.iter().zip(point).map(|(x, y)| x * y).sum();
            assert!(lhs <= *b, "{lhs} > {b}");
        }
    }

    #[test]
    fn box_is_feasible() {
        let r = rows(&[(&[1, 0], 2), (&[-1, 0], -1), (&[0, 1], 3), (&[1, 1], 4)]);
        let out = phase_one(2, &r, None).unwrap();
        assert!(out.feasible);
        check_point(&r, out.point.as_ref().unwrap());
    }

    #[test]
    fn contradiction_is_infeasible() {
        let r = rows(&[(&[1], 1), (&[-1], -2)]);
        let out = phase_one(1, &r, None).unwrap();
        assert!(!out.feasible);
        assert!(out.point.is_none());
    }

    #[test]
    fn empty_rows() {
        let out = phase_one::<Rational>(2, &[], None).unwrap();
        assert!(out.feasible);
        assert_eq!(out.point.unwrap(), vec![rat(0), rat(0)]);
        let bad = rows(&[(&[0, 0], -1)]);
        assert!(!phase_one(2, &bad, None).unwrap().feasible);
        let ok = rows(&[(&[0, 0], 0)]);
        assert!(phase_one(2, &ok, None).unwrap().feasible);
    }

    #[test]
    fn degenerate_cycle_prone_instance_terminates() {
        // Beale-style degenerate rows; Bland's rule must not cycle.
        let r = vec![
            (vec![ratio(1, 4), rat(-60), ratio(-1, 25), rat(9)], rat(0)),
            (vec![ratio(1, 2), rat(-90), ratio(-1, 50), rat(3)], rat(0)),
            (vec![rat(0), rat(0), rat(1), rat(0)], rat(1)),
            (vec![rat(-1), rat(0), rat(0), rat(0)], rat(0)),
            (vec![rat(0), rat(-1), rat(0), rat(0)], rat(0)),
            (vec![rat(0), rat(0), rat(-1), rat(0)], rat(0)),
            (vec![rat(0), rat(0), rat(0), rat(-1)], rat(0)),
            (vec![ratio(-3, 4), rat(150), ratio(-1, 50), rat(-6)], rat(-1)),
        ];
        let out = phase_one(4, &r, None).unwrap();
        if let Some(p) = &out.point {
            check_point(&r, p);
        }
    }

    #[test]
    fn pivot_ceiling_is_enforced() {
        let r = rows(&[(&[1, 0], 2), (&[-1, 0], -1), (&[0, -1], -3)]);
        assert_eq!(
            phase_one(2, &r, Some(1)).err(),
            Some(SolveError::PivotCeiling { limit: 1 })
        );
    }
}
