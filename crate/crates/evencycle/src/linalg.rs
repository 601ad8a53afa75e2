//! Dense linear algebra over `F_{2^d}`: determinants, univariate polynomial
//! matrices, and Lagrange interpolation.
//!
//! The polynomial-matrix determinant is computed deterministically by
//! evaluating at `D + 1` distinct field points and interpolating, where `D`
//! bounds the determinant degree. A fraction-free (Bareiss) elimination
//! backs the cases where the field is too small to supply the evaluation
//! points.

use crate::fields::{FieldCtx, FieldElem};
use crate::{Error, Result};

/// Dense square matrix over `F_{2^d}`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixF {
    n: usize,
    entries: Vec<FieldElem>,
}

impl MatrixF {
    pub fn new(n: usize, entries: Vec<FieldElem>) -> MatrixF {
        assert_eq!(entries.len(), n * n);
        MatrixF { n, entries }
    }

    pub fn zero(n: usize) -> MatrixF {
        MatrixF {
            n,
            entries: vec![FieldElem::ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> MatrixF {
        let mut m = MatrixF::zero(n);
        for i in 0..n {
            m.set(i, i, FieldElem::ONE);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.entries[i * self.n + j] = v;
    }
}

/// Determinant by Gaussian elimination; singular matrices return zero.
/// Row swaps need no sign bookkeeping in characteristic 2.
pub fn det_f(a: &MatrixF, ctx: &FieldCtx) -> FieldElem {
    let n = a.n;
    let mut m = a.clone();
    let mut det = FieldElem::ONE;
    for col in 0..n {
        let pivot_row = match (col..n).find(|&r| !m.get(r, col).is_zero()) {
            Some(r) => r,
            None => return FieldElem::ZERO,
        };
        if pivot_row != col {
            for j in 0..n {
                let tmp = m.get(col, j);
                m.set(col, j, m.get(pivot_row, j));
                m.set(pivot_row, j, tmp);
            }
        }
        let pivot = m.get(col, col);
        det = ctx.mul(det, pivot);
        let pivot_inv = ctx.inv(pivot).expect("pivot is nonzero");
        for r in col + 1..n {
            let factor = ctx.mul(m.get(r, col), pivot_inv);
            if factor.is_zero() {
                continue;
            }
            for j in col..n {
                let v = ctx.sub(m.get(r, j), ctx.mul(factor, m.get(col, j)));
                m.set(r, j, v);
            }
        }
    }
    det
}

/// Univariate polynomial over `F_{2^d}`, index `l` = coefficient of the
/// degree-`l` monomial. Trailing zeros are tolerated; `degree` ignores them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyF {
    pub coeffs: Vec<FieldElem>,
}

impl PolyF {
    pub fn zero() -> PolyF {
        PolyF { coeffs: Vec::new() }
    }

    pub fn constant(c: FieldElem) -> PolyF {
        PolyF { coeffs: vec![c] }
    }

    pub fn from_coeffs(coeffs: Vec<FieldElem>) -> PolyF {
        PolyF { coeffs }
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Coefficient of the degree-`l` monomial (zero past the stored length).
    pub fn coeff(&self, l: usize) -> FieldElem {
        self.coeffs.get(l).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn eval(&self, x: FieldElem, ctx: &FieldCtx) -> FieldElem {
        let mut acc = FieldElem::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = ctx.add(ctx.mul(acc, x), c);
        }
        acc
    }

    pub fn add(&self, other: &PolyF, ctx: &FieldCtx) -> PolyF {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| ctx.add(self.coeff(i), other.coeff(i)))
            .collect();
        PolyF { coeffs }
    }

    pub fn mul(&self, other: &PolyF, ctx: &FieldCtx) -> PolyF {
        if self.is_zero() || other.is_zero() {
            return PolyF::zero();
        }
        let mut coeffs = vec![FieldElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = ctx.add(coeffs[i + j], ctx.mul(a, b));
            }
        }
        PolyF { coeffs }
    }

    pub fn scale(&self, c: FieldElem, ctx: &FieldCtx) -> PolyF {
        PolyF {
            coeffs: self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect(),
        }
    }

    /// Quotient and remainder; the divisor must be nonzero.
    pub fn divrem(&self, divisor: &PolyF, ctx: &FieldCtx) -> (PolyF, PolyF) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lead_inv = ctx.inv(divisor.coeff(dd)).expect("leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![
            FieldElem::ZERO;
            self.coeffs.len().saturating_sub(dd).max(1)
        ];
        loop {
            let dr = match PolyF { coeffs: rem.clone() }.degree() {
                Some(d) if d >= dd => d,
                _ => break,
            };
            let factor = ctx.mul(rem[dr], lead_inv);
            quot[dr - dd] = factor;
            for i in 0..=dd {
                rem[dr - dd + i] = ctx.sub(rem[dr - dd + i], ctx.mul(factor, divisor.coeff(i)));
            }
        }
        (PolyF { coeffs: quot }, PolyF { coeffs: rem })
    }
}

/// The unique polynomial of degree `< points.len()` through the given
/// `(abscissa, value)` pairs. The abscissae must be pairwise distinct.
pub fn lagrange_interpolate(
    points: &[(FieldElem, FieldElem)],
    ctx: &FieldCtx,
) -> Result<PolyF> {
    assert!(!points.is_empty(), "interpolation needs at least one point");
    let mut seen = std::collections::HashSet::new();
    for &(x, _) in points {
        if !seen.insert(x.0) {
            return Err(Error::DuplicateAbscissa);
        }
    }
    // Master polynomial prod_j (y - x_j), then peel one root off per point by
    // synthetic division.
    let mut master = PolyF::constant(FieldElem::ONE);
    for &(x, _) in points {
        // (y + x) == (y - x) in characteristic 2.
        master = master.mul(&PolyF::from_coeffs(vec![x, FieldElem::ONE]), ctx);
    }
    let mut acc = PolyF::zero();
    for &(x, value) in points {
        let (basis, rem) = master.divrem(&PolyF::from_coeffs(vec![x, FieldElem::ONE]), ctx);
        debug_assert!(rem.is_zero());
        let denom = basis.eval(x, ctx);
        let scale = ctx.mul(value, ctx.inv(denom).expect("distinct abscissae"));
        acc = acc.add(&basis.scale(scale, ctx), ctx);
    }
    acc.coeffs.truncate(points.len());
    Ok(acc)
}

/// Dense square matrix over `F_{2^d}[r]`.
#[derive(Debug, Clone)]
pub struct PolyMatrixF {
    n: usize,
    entries: Vec<PolyF>,
}

impl PolyMatrixF {
    pub fn new(n: usize, entries: Vec<PolyF>) -> PolyMatrixF {
        assert_eq!(entries.len(), n * n);
        PolyMatrixF { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &PolyF {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: PolyF) {
        self.entries[i * self.n + j] = v;
    }

    /// Entrywise evaluation at `x`.
    pub fn eval(&self, x: FieldElem, ctx: &FieldCtx) -> MatrixF {
        MatrixF {
            n: self.n,
            entries: self.entries.iter().map(|p| p.eval(x, ctx)).collect(),
        }
    }

    pub fn max_entry_degree(&self) -> usize {
        self.entries
            .iter()
            .filter_map(|p| p.degree())
            .max()
            .unwrap_or(0)
    }
}

/// Exact determinant of a polynomial matrix whose determinant has degree at
/// most `degree_bound`, by evaluation at `degree_bound + 1` distinct field
/// points followed by interpolation. Correct even when the determinant is the
/// zero polynomial; fails if the field cannot supply enough points.
pub fn det_poly(b: &PolyMatrixF, degree_bound: usize, ctx: &FieldCtx) -> Result<PolyF> {
    assert!(
        b.max_entry_degree() <= degree_bound,
        "entry degree exceeds the declared bound"
    );
    let needed = degree_bound + 1;
    if ctx.degree() < 64 && ctx.order() < needed as u128 {
        return Err(Error::FieldTooSmall {
            degree: ctx.degree(),
            needed,
        });
    }
    let points: Vec<(FieldElem, FieldElem)> = (0..needed as u64)
        .map(|i| {
            let x = ctx.elem_from_index(i);
            (x, det_f(&b.eval(x, ctx), ctx))
        })
        .collect();
    lagrange_interpolate(&points, ctx)
}

/// Exact determinant over `F_{2^d}[r]` by fraction-free (Bareiss)
/// elimination. Slower than [`det_poly`], but needs no evaluation points, so
/// it works over fields of any size.
pub fn det_poly_bareiss(b: &PolyMatrixF, ctx: &FieldCtx) -> PolyF {
    let n = b.n;
    assert!(n >= 1);
    let mut m: Vec<PolyF> = b.entries.clone();
    let idx = |i: usize, j: usize| i * n + j;
    let mut prev = PolyF::constant(FieldElem::ONE);
    for k in 0..n - 1 {
        let pivot_row = match (k..n).find(|&r| !m[idx(r, k)].is_zero()) {
            Some(r) => r,
            None => return PolyF::zero(),
        };
        if pivot_row != k {
            for j in 0..n {
                m.swap(idx(k, j), idx(pivot_row, j));
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[idx(k, k)]
                    .mul(&m[idx(i, j)], ctx)
                    .add(&m[idx(i, k)].mul(&m[idx(k, j)], ctx), ctx);
                let (q, r) = num.divrem(&prev, ctx);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                m[idx(i, j)] = q;
            }
            m[idx(i, k)] = PolyF::zero();
        }
        prev = m[idx(k, k)].clone();
    }
    m.swap_remove(idx(n - 1, n - 1))
}
