//! Dense two-phase simplex over exact rationals.
//!
//! Problems are `maximize c·x  s.t.  A x = b, x >= 0`. Phase one starts from
//! an all-artificial basis; artificial columns are never stored and cannot
//! re-enter once they leave. The entering column has the largest reduced
//! cost; after a run of degenerate pivots Bland's rule (lowest eligible
//! column) takes over until the objective moves again. Ratio-test ties go to
//! the lowest basic variable, so runs are deterministic and terminate.
//!
//! The tableau is first run over `i64` fractions with checked arithmetic.
//! Any overflow restarts the solve over arbitrary-precision rationals; both
//! runs are exact, so they take the same pivots and return the same point.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl LpStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
        }
    }
}

/// Raw simplex result: status, objective value and primal point (empty
/// unless optimal).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexOutcome {
    pub status: LpStatus,
    pub value: Rational,
    pub point: Vec<Rational>,
    pub pivots: usize,
}

/// Exact ordered field used by the tableau. Fallible operations return
/// `None` on overflow.
trait Scalar: Clone + PartialOrd + Sized {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn from_rational(value: &Rational) -> Option<Self>;
    fn to_rational(&self) -> Rational;
    fn add(&self, other: &Self) -> Option<Self>;
    fn sub(&self, other: &Self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn div(&self, other: &Self) -> Option<Self>;
    fn neg(&self) -> Self;
}

type Small = Ratio<i64>;

impl Scalar for Small {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn from_rational(value: &Rational) -> Option<Self> {
        Some(Ratio::new_raw(
            value.numer().to_i64()?,
            value.denom().to_i64()?,
        ))
    }
    fn to_rational(&self) -> Rational {
        Rational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
    fn add(&self, other: &Self) -> Option<Self> {
        self.checked_add(other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        self.checked_sub(other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(other)
    }
    fn div(&self, other: &Self) -> Option<Self> {
        self.checked_div(other)
    }
    fn neg(&self) -> Self {
        // numerators stay within ±(i64::MAX) because every value comes from
        // a checked operation or a BigInt that fit
        -*self
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn from_rational(value: &Rational) -> Option<Self> {
        Some(value.clone())
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn div(&self, other: &Self) -> Option<Self> {
        Some(self / other)
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Consecutive degenerate pivots after which Bland's rule takes over.
const STALL_LIMIT: usize = 64;

/// Marker for an arithmetic overflow in the fast path.
struct Overflow;

struct Tableau<T> {
    /// Constraint rows, each `num_vars + 1` long; the last entry is the rhs.
    rows: Vec<Vec<T>>,
    /// Reduced costs followed by the negated objective value.
    objective: Vec<T>,
    /// Basic variable per row; `>= num_vars` marks an artificial.
    basis: Vec<usize>,
    num_vars: usize,
    pivots: usize,
}

impl<T: Scalar> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) -> Result<(), Overflow> {
        let width = self.num_vars + 1;
        let p = self.rows[r][c].clone();
        let mut support = Vec::new();
        for j in 0..width {
            if !self.rows[r][j].is_zero() {
                self.rows[r][j] = self.rows[r][j].div(&p).ok_or(Overflow)?;
                support.push(j);
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let eliminate = |row: &mut Vec<T>| -> Result<(), Overflow> {
            if row[c].is_zero() {
                return Ok(());
            }
            let f = row[c].clone();
            for &j in &support {
                let delta = f.mul(&pivot_row[j]).ok_or(Overflow)?;
                row[j] = row[j].sub(&delta).ok_or(Overflow)?;
            }
            Ok(())
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row)?;
            }
        }
        eliminate(&mut self.objective)?;
        self.rows[r] = pivot_row;
        self.basis[r] = c;
        self.pivots += 1;
        Ok(())
    }

    /// Entering column: steepest reduced cost, or the lowest eligible index
    /// once progress has stalled.
    fn entering(&self, bland: bool) -> Option<usize> {
        let mut eligible = (0..self.num_vars).filter(|&j| self.objective[j].is_positive());
        if bland {
            return eligible.next();
        }
        let mut best = eligible.next()?;
        for j in eligible {
            if self.objective[j] > self.objective[best] {
                best = j;
            }
        }
        Some(best)
    }

    /// Pivots until optimal; `Ok(false)` if unbounded.
    fn optimize(&mut self) -> Result<bool, Overflow> {
        let n = self.num_vars;
        let mut stalled = 0usize;
        loop {
            let Some(c) = self.entering(stalled >= STALL_LIMIT) else {
                return Ok(true);
            };
            let mut best: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = row[n].div(&row[c]).ok_or(Overflow)?;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, ratio)) => {
                    stalled = if ratio.is_zero() { stalled + 1 } else { 0 };
                    self.pivot(r, c)?;
                }
                None => return Ok(false),
            }
        }
    }

    fn value(&self) -> Rational {
        -self.objective[self.num_vars].to_rational()
    }
}

fn convert<T: Scalar>(values: &[Rational]) -> Result<Vec<T>, Overflow> {
    values
        .iter()
        .map(|v| T::from_rational(v).ok_or(Overflow))
        .collect()
}

fn run<T: Scalar>(
    objective: &[Rational],
    rows: &[Vec<Rational>],
    rhs: &[Rational],
) -> Result<SimplexOutcome, Overflow> {
    let n = objective.len();
    let mut tableau_rows = Vec::with_capacity(rows.len());
    for (row, b) in rows.iter().zip(rhs) {
        let mut full: Vec<T> = convert(row)?;
        full.push(T::from_rational(b).ok_or(Overflow)?);
        if b.is_negative() {
            full.iter_mut().for_each(|v| *v = v.neg());
        }
        tableau_rows.push(full);
    }
    let m = tableau_rows.len();

    // phase one: maximize -Σ artificials
    let mut phase_one = vec![T::zero(); n + 1];
    for row in &tableau_rows {
        for (acc, v) in phase_one.iter_mut().zip(row) {
            if !v.is_zero() {
                *acc = acc.add(v).ok_or(Overflow)?;
            }
        }
    }
    let mut t = Tableau {
        rows: tableau_rows,
        objective: phase_one,
        basis: (n..n + m).collect(),
        num_vars: n,
        pivots: 0,
    };
    let bounded = t.optimize()?;
    debug_assert!(bounded, "phase one is bounded by zero");
    if !Zero::is_zero(&t.value()) {
        return Ok(SimplexOutcome {
            status: LpStatus::Infeasible,
            value: crate::rational::zero(),
            point: Vec::new(),
            pivots: t.pivots,
        });
    }

    // drive remaining (zero-level) artificials out, dropping redundant rows
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] < n {
            r += 1;
            continue;
        }
        debug_assert!(t.rows[r][n].is_zero());
        match (0..n).find(|&j| !t.rows[r][j].is_zero()) {
            Some(c) => {
                t.pivot(r, c)?;
                r += 1;
            }
            None => {
                t.rows.swap_remove(r);
                t.basis.swap_remove(r);
            }
        }
    }

    // phase two objective in terms of the current basis
    let costs: Vec<T> = convert(objective)?;
    let mut reduced = costs.clone();
    reduced.push(T::zero());
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        let cb = &costs[bv];
        if cb.is_zero() {
            continue;
        }
        for (acc, v) in reduced.iter_mut().zip(row) {
            if !v.is_zero() {
                let delta = cb.mul(v).ok_or(Overflow)?;
                *acc = acc.sub(&delta).ok_or(Overflow)?;
            }
        }
    }
    t.objective = reduced;
    if !t.optimize()? {
        return Ok(SimplexOutcome {
            status: LpStatus::Unbounded,
            value: crate::rational::zero(),
            point: Vec::new(),
            pivots: t.pivots,
        });
    }

    let mut point = vec![crate::rational::zero(); n];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        point[bv] = row[n].to_rational();
    }
    Ok(SimplexOutcome {
        status: LpStatus::Optimal,
        value: t.value(),
        point,
        pivots: t.pivots,
    })
}

/// Maximizes `objective · x` subject to `rows[i] · x = rhs[i]`, `x >= 0`.
pub fn maximize(
    objective: &[Rational],
    rows: &[Vec<Rational>],
    rhs: &[Rational],
) -> SimplexOutcome {
    assert_eq!(rows.len(), rhs.len(), "one rhs per row");
    assert!(
        rows.iter().all(|r| r.len() == objective.len()),
        "rows must match the objective width"
    );
    match run::<Small>(objective, rows, rhs) {
        Ok(out) => out,
        Err(Overflow) => maximize_big(objective, rows, rhs),
    }
}

/// Same as [`maximize`] but always over arbitrary-precision rationals.
pub fn maximize_big(
    objective: &[Rational],
    rows: &[Vec<Rational>],
    rhs: &[Rational],
) -> SimplexOutcome {
    match run::<Rational>(objective, rows, rhs) {
        Ok(out) => out,
        Err(Overflow) => unreachable!("arbitrary-precision arithmetic cannot overflow"),
    }
}
