//! Tiny polynomial expression trees for the emulation test suites.
//!
//! Test support only; not part of the public API surface.

use rand::Rng;

use crate::fields::FieldElem;
use crate::ring4::{RingCtx, RingElem};

/// A multivariate polynomial expression with `E_{4^d}` coefficients.
#[derive(Debug, Clone)]
pub enum Expr {
    Const(RingElem),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Random expression in `vars` variables with total degree at most
    /// `degree_budget`.
    pub fn random(rng: &mut impl Rng, ctx: &RingCtx, vars: usize, degree_budget: usize) -> Expr {
        Self::gen(rng, ctx, vars, degree_budget, 4)
    }

    fn gen(
        rng: &mut impl Rng,
        ctx: &RingCtx,
        vars: usize,
        degree_budget: usize,
        depth: usize,
    ) -> Expr {
        let leaf_only = depth == 0;
        match rng.gen_range(0..if leaf_only { 2 } else { 4 }) {
            0 => Expr::Const(ctx.random_elem(rng)),
            1 if degree_budget >= 1 => Expr::Var(rng.gen_range(0..vars)),
            1 => Expr::Const(ctx.random_elem(rng)),
            2 => Expr::Add(
                Box::new(Self::gen(rng, ctx, vars, degree_budget, depth - 1)),
                Box::new(Self::gen(rng, ctx, vars, degree_budget, depth - 1)),
            ),
            _ => {
                let left = degree_budget / 2;
                Expr::Mul(
                    Box::new(Self::gen(rng, ctx, vars, left, depth - 1)),
                    Box::new(Self::gen(rng, ctx, vars, degree_budget - left, depth - 1)),
                )
            }
        }
    }

    /// Evaluate over `E_{4^d}` at the given points.
    pub fn eval_ring(&self, vars: &[RingElem], ctx: &RingCtx) -> RingElem {
        match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => vars[*i],
            Expr::Add(a, b) => ctx.add(a.eval_ring(vars, ctx), b.eval_ring(vars, ctx)),
            Expr::Mul(a, b) => ctx.mul(a.eval_ring(vars, ctx), b.eval_ring(vars, ctx)),
        }
    }

    /// Evaluate the coefficient-projected expression over `F_{2^d}`.
    pub fn eval_projected(&self, vars: &[FieldElem], ctx: &RingCtx) -> FieldElem {
        let f = ctx.field();
        match self {
            Expr::Const(c) => ctx.project(*c),
            Expr::Var(i) => vars[*i],
            Expr::Add(a, b) => f.add(a.eval_projected(vars, ctx), b.eval_projected(vars, ctx)),
            Expr::Mul(a, b) => f.mul(a.eval_projected(vars, ctx), b.eval_projected(vars, ctx)),
        }
    }
}
