//! Permanent and determinant of matrices over `E_{4^d}` by branching
//! odd-elimination.
//!
//! The permanent satisfies the branching row identity
//! `per M = per M' + per M''`, where `M'` subtracts `tau` times row `i1` from
//! row `i2` and `M''` replaces row `i2` by `tau` times row `i1`. Choosing
//! `tau` by odd-elimination makes the touched entry even in `M'`, and `M''`
//! has a similar pair of rows, so its permanent reduces to a polynomial
//! determinant over `F_{2^d}[r]`. The determinant needs no branches at all:
//! the `M''` side always cancels in the signed sum.
//!
//! Elimination marks one row and one column per round and maintains the
//! invariant that each marked column holds exactly one odd entry (its
//! *designated* entry) and each marked row holds exactly one odd entry among
//! the marked columns. Once no unmarked column has an odd entry in an
//! unmarked row, all unmarked rows are entirely even, and the few
//! permutations that touch at most one even entry can be summed directly.

use rand::RngCore;

use crate::fields::FieldElem;
use crate::linalg::{det_poly, det_poly_bareiss, MatrixF, PolyF, PolyMatrixF};
use crate::ring4::{RingCtx, RingElem};

/// Dense square matrix over `E_{4^d}`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixE {
    n: usize,
    entries: Vec<RingElem>,
}

impl MatrixE {
    pub fn new(n: usize, entries: Vec<RingElem>) -> MatrixE {
        assert_eq!(entries.len(), n * n);
        MatrixE { n, entries }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> RingElem) -> MatrixE {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        MatrixE { n, entries }
    }

    pub fn identity(n: usize) -> MatrixE {
        MatrixE::from_fn(n, |i, j| {
            if i == j {
                RingElem::ONE
            } else {
                RingElem::ZERO
            }
        })
    }

    pub fn random(n: usize, ctx: &RingCtx, rng: &mut impl RngCore) -> MatrixE {
        let entries = (0..n * n).map(|_| ctx.random_elem(rng)).collect();
        MatrixE { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> RingElem {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingElem) {
        self.entries[i * self.n + j] = v;
    }

    /// Entrywise projection to `F_{2^d}`.
    pub fn project(&self, ctx: &RingCtx) -> MatrixF {
        let mut out = MatrixF::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, ctx.project(self.get(i, j)));
            }
        }
        out
    }

    /// Entrywise lift of a field matrix.
    pub fn lift_of(a: &MatrixF, ctx: &RingCtx) -> MatrixE {
        MatrixE::from_fn(a.n(), |i, j| ctx.lift(a.get(i, j)))
    }

    /// Row operation of the `M'` branch: row `i2` minus `tau` times row `i1`.
    fn row_sub_scaled(&mut self, i2: usize, i1: usize, tau: RingElem, ctx: &RingCtx) {
        for j in 0..self.n {
            let v = ctx.sub(self.get(i2, j), ctx.mul(tau, self.get(i1, j)));
            self.set(i2, j, v);
        }
    }

    /// The `M''` branch: a copy with row `i2` replaced by `tau` times row
    /// `i1`, which makes rows `i1` and `i2` similar.
    fn with_row_scaled_copy(&self, i2: usize, i1: usize, tau: RingElem, ctx: &RingCtx) -> MatrixE {
        let mut out = self.clone();
        for j in 0..self.n {
            out.set(i2, j, ctx.mul(tau, self.get(i1, j)));
        }
        out
    }
}

/// Elimination bookkeeping: the working matrix plus the marked rows and
/// columns and each marked column's designated odd row.
#[derive(Debug)]
struct EliminationState {
    m: MatrixE,
    marked_row: Vec<bool>,
    marked_col: Vec<bool>,
    /// Column -> the row holding its unique odd entry.
    designated: Vec<Option<usize>>,
}

impl EliminationState {
    fn new(m: MatrixE) -> EliminationState {
        let n = m.n();
        EliminationState {
            m,
            marked_row: vec![false; n],
            marked_col: vec![false; n],
            designated: vec![None; n],
        }
    }

    /// Smallest unmarked column with an odd entry at an unmarked row and the
    /// smallest such row within it.
    fn find_pivot(&self) -> Option<(usize, usize)> {
        let n = self.m.n();
        for j in 0..n {
            if self.marked_col[j] {
                continue;
            }
            for i in 0..n {
                if !self.marked_row[i] && self.m.get(i, j).is_odd() {
                    return Some((j, i));
                }
            }
        }
        None
    }

    fn mark(&mut self, row: usize, col: usize) {
        self.marked_row[row] = true;
        self.marked_col[col] = true;
        self.designated[col] = Some(row);
    }

    fn check_invariants(&self) -> bool {
        let n = self.m.n();
        let rows = self.marked_row.iter().filter(|&&b| b).count();
        let cols = self.marked_col.iter().filter(|&&b| b).count();
        if rows != cols {
            return false;
        }
        for j in 0..n {
            if !self.marked_col[j] {
                continue;
            }
            let odd_rows: Vec<usize> =
                (0..n).filter(|&i| self.m.get(i, j).is_odd()).collect();
            if odd_rows.len() != 1 || Some(odd_rows[0]) != self.designated[j] {
                return false;
            }
            if !self.marked_row[odd_rows[0]] {
                return false;
            }
        }
        for i in 0..n {
            if !self.marked_row[i] {
                continue;
            }
            let odd_marked_cols = (0..n)
                .filter(|&j| self.marked_col[j] && self.m.get(i, j).is_odd())
                .count();
            if odd_marked_cols != 1 {
                return false;
            }
        }
        true
    }

    fn unmarked_rows(&self) -> Vec<usize> {
        (0..self.m.n()).filter(|&i| !self.marked_row[i]).collect()
    }

    fn unmarked_cols(&self) -> Vec<usize> {
        (0..self.m.n()).filter(|&j| !self.marked_col[j]).collect()
    }

    /// Marked-row -> designated-column inverse of `designated`.
    fn designated_col_of_row(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.m.n()];
        for (col, row) in self.designated.iter().enumerate() {
            if let Some(r) = *row {
                out[r] = Some(col);
            }
        }
        out
    }
}

/// Run the elimination walk. When `track_branches` is set, every `M''`
/// branch is resolved through [`per_similar`] and summed; the determinant
/// walk skips that work entirely.
fn eliminate(m0: &MatrixE, ctx: &RingCtx, track_branches: bool) -> (EliminationState, RingElem) {
    let n = m0.n();
    let mut st = EliminationState::new(m0.clone());
    let mut branch_sum = RingElem::ZERO;
    while let Some((j, i1)) = st.find_pivot() {
        for i2 in 0..n {
            if i2 == i1 || !st.m.get(i2, j).is_odd() {
                continue;
            }
            let tau = ctx
                .elim_coeff(st.m.get(i1, j), st.m.get(i2, j))
                .expect("pivot entry is odd");
            if track_branches {
                let branch = st.m.with_row_scaled_copy(i2, i1, tau, ctx);
                branch_sum = ctx.add(branch_sum, per_similar(&branch, i1, i2, ctx));
            }
            st.m.row_sub_scaled(i2, i1, tau, ctx);
            debug_assert!(st.m.get(i2, j).is_even());
            debug_assert!(st.check_invariants());
        }
        st.mark(i1, j);
        debug_assert!(st.check_invariants());
    }
    (st, branch_sum)
}

/// Sign of the permutation `perm` (row -> column) as a ring element.
fn permutation_sign(perm: &[usize], ctx: &RingCtx) -> RingElem {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut cycles = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut at = start;
        while !seen[at] {
            seen[at] = true;
            at = perm[at];
        }
    }
    if (n - cycles) % 2 == 0 {
        ctx.one()
    } else {
        ctx.neg(ctx.one())
    }
}

/// Exact permanent of the terminal matrix: the sum over all permutations
/// touching at most one even entry. With `u` unmarked rows: two or more even
/// rows force zero; zero leaves only the designated permutation; one leaves
/// the designated permutation extended into the unmarked row/column plus one
/// swap term per marked row holding an odd entry in the unmarked column.
fn base_case_per(st: &EliminationState, ctx: &RingCtx) -> RingElem {
    base_case(st, ctx, false)
}

/// Signed variant for the determinant: each surviving permutation's monomial
/// carries its permutation sign, so the swap terms enter with the opposite
/// sign of the main term.
fn base_case_det(st: &EliminationState, ctx: &RingCtx) -> RingElem {
    base_case(st, ctx, true)
}

fn base_case(st: &EliminationState, ctx: &RingCtx, signed: bool) -> RingElem {
    assert!(
        st.check_invariants(),
        "elimination invariants violated at the base case"
    );
    let m = &st.m;
    let n = m.n();
    let unmarked_rows = st.unmarked_rows();
    match unmarked_rows.len() {
        0 => {
            let mut prod = ctx.one();
            let mut perm = vec![0usize; n];
            for (col, row) in st.designated.iter().enumerate() {
                let row = row.expect("all columns marked");
                prod = ctx.mul(prod, m.get(row, col));
                perm[row] = col;
            }
            if signed {
                ctx.mul(permutation_sign(&perm, ctx), prod)
            } else {
                prod
            }
        }
        1 => {
            let i0 = unmarked_rows[0];
            let j0 = st.unmarked_cols()[0];
            let col_of_row = st.designated_col_of_row();
            let marked: Vec<usize> = (0..n).filter(|&i| st.marked_row[i]).collect();

            // Main term: every marked row on its designated entry, the
            // unmarked row on the unmarked column.
            let mut main = m.get(i0, j0);
            for &i in &marked {
                main = ctx.mul(main, m.get(i, col_of_row[i].unwrap()));
            }

            // Swap terms: marked row i takes the unmarked column, the
            // unmarked row takes i's designated column. Only one even factor
            // (from the all-even row i0) survives multiplication.
            let mut swaps = RingElem::ZERO;
            for &i in &marked {
                if !m.get(i, j0).is_odd() {
                    continue;
                }
                let mut term = ctx.mul(m.get(i, j0), m.get(i0, col_of_row[i].unwrap()));
                for &other in &marked {
                    if other != i {
                        term = ctx.mul(term, m.get(other, col_of_row[other].unwrap()));
                    }
                }
                swaps = ctx.add(swaps, term);
            }

            if signed {
                let mut perm = vec![0usize; n];
                for &i in &marked {
                    perm[i] = col_of_row[i].unwrap();
                }
                perm[i0] = j0;
                let sign = permutation_sign(&perm, ctx);
                ctx.mul(sign, ctx.sub(main, swaps))
            } else {
                ctx.add(main, swaps)
            }
        }
        _ => RingElem::ZERO,
    }
}

/// Permanent of `m` over `E_{4^d}`. Deterministic; exact for every input.
pub fn per_e(m: &MatrixE, ctx: &RingCtx) -> RingElem {
    let (st, branch_sum) = eliminate(m, ctx, true);
    ctx.add(branch_sum, base_case_per(&st, ctx))
}

/// Determinant of `m` over `E_{4^d}`. Same elimination walk as [`per_e`] but
/// with no branch work and a signed base case.
pub fn det_e(m: &MatrixE, ctx: &RingCtx) -> RingElem {
    let (st, _) = eliminate(m, ctx, false);
    base_case_det(&st, ctx)
}

/// Fused walk computing the permanent and determinant together. The two
/// eliminations trace identical `M'` branches, so one pass serves both; the
/// separate entry points remain the reference implementations.
pub fn per_det_e(m: &MatrixE, ctx: &RingCtx) -> (RingElem, RingElem) {
    let (st, branch_sum) = eliminate(m, ctx, true);
    (
        ctx.add(branch_sum, base_case_per(&st, ctx)),
        base_case_det(&st, ctx),
    )
}

/// Permanent of a matrix whose row `i2` is a ring multiple of row `i1`.
///
/// Projects the matrix to `F_{2^d}`, scales row `i1` entrywise by
/// `(1, r, ..., r^(n-1))` and row `i2` by `(r^(n-1), ..., r, 1)`, takes the
/// determinant of the resulting polynomial matrix (degree at most `2n - 2`),
/// and returns twice the lift of the sum of the coefficients of
/// `r^0 ... r^(n-2)`.
pub fn per_similar(m: &MatrixE, i1: usize, i2: usize, ctx: &RingCtx) -> RingElem {
    let n = m.n();
    assert!(i1 != i2 && i1 < n && i2 < n);
    let field = ctx.field();
    let mut b = PolyMatrixF::new(n, vec![PolyF::zero(); n * n]);
    for i in 0..n {
        for j in 0..n {
            let v = ctx.project(m.get(i, j));
            let shift = if i == i1 {
                j
            } else if i == i2 {
                n - 1 - j
            } else {
                0
            };
            let mut coeffs = vec![FieldElem::ZERO; shift + 1];
            coeffs[shift] = v;
            b.set(i, j, PolyF::from_coeffs(coeffs));
        }
    }
    let degree_bound = 2 * n - 2;
    // Evaluation-interpolation needs 2n - 1 distinct points; tiny fields
    // (they appear in the oracle suites, not in the main pipeline) fall back
    // to fraction-free elimination.
    let det = if field.degree() >= 64 || field.order() >= (degree_bound + 1) as u128 {
        det_poly(&b, degree_bound, field).expect("point count checked")
    } else {
        det_poly_bareiss(&b, field)
    };
    let mut sum = FieldElem::ZERO;
    for l in 0..=n - 2 {
        sum = field.add(sum, det.coeff(l));
    }
    let lifted = ctx.lift(sum);
    ctx.add(lifted, lifted)
}
