//! Arithmetic in the characteristic-4 ring `E_{4^d} = Z_4[x]/<g4>` and the
//! lift/project bridge to `F_{2^d}`.
//!
//! `g4` is the lift of the field's `g2`: the same 0/1 coefficients read in
//! `Z_4`. An element stores its `d` coefficients in two packed bit planes
//! (low bits and high bits of each `Z_4` value), so addition, subtraction and
//! the parity test are word-parallel bit logic.
//!
//! Projection (coefficients mod 2) is a ring homomorphism onto `F_{2^d}`;
//! lifting is its right inverse. An element is *even* when every coefficient
//! is even, *odd* otherwise; the product of two even elements is zero, which
//! is what makes the permanent tractable over this ring.

use rand::RngCore;

use crate::fields::{FieldCtx, FieldElem};
use crate::{Error, Result};

/// An element of `E_{4^d}`: coefficient `i` equals `lo_i + 2 * hi_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RingElem {
    lo: u64,
    hi: u64,
}

impl RingElem {
    pub const ZERO: RingElem = RingElem { lo: 0, hi: 0 };
    pub const ONE: RingElem = RingElem { lo: 1, hi: 0 };

    /// The constant polynomial `c` for `c` in `0..=3`.
    pub fn from_int(c: u8) -> RingElem {
        assert!(c < 4);
        RingElem {
            lo: (c & 1) as u64,
            hi: (c >> 1) as u64,
        }
    }

    /// Build from `Z_4` coefficients, index `i` = coefficient of `x^i`.
    pub fn from_coeffs(coeffs: &[u8]) -> RingElem {
        assert!(coeffs.len() <= 64);
        let mut lo = 0u64;
        let mut hi = 0u64;
        for (i, &c) in coeffs.iter().enumerate() {
            assert!(c < 4, "coefficient {c} is not a Z_4 value");
            lo |= ((c & 1) as u64) << i;
            hi |= ((c >> 1) as u64) << i;
        }
        RingElem { lo, hi }
    }

    pub fn coeff(self, i: usize) -> u8 {
        ((self.lo >> i) & 1) as u8 | (((self.hi >> i) & 1) as u8) << 1
    }

    pub fn is_zero(self) -> bool {
        self.lo == 0 && self.hi == 0
    }

    /// True iff some coefficient is odd, equivalently the projection is
    /// nonzero.
    pub fn is_odd(self) -> bool {
        self.lo != 0
    }

    pub fn is_even(self) -> bool {
        !self.is_odd()
    }
}

fn mask(d: usize) -> u64 {
    if d == 64 {
        u64::MAX
    } else {
        (1u64 << d) - 1
    }
}

/// Coefficientwise mod-4 addition on 128-bit planes.
fn plane_add(a: (u128, u128), b: (u128, u128)) -> (u128, u128) {
    let lo = a.0 ^ b.0;
    let carry = a.0 & b.0;
    (lo, a.1 ^ b.1 ^ carry)
}

/// Multiply every coefficient by the scalar `c` in `Z_4`.
fn plane_scale(c: u8, p: (u128, u128)) -> (u128, u128) {
    match c {
        0 => (0, 0),
        1 => p,
        2 => (0, p.0),
        3 => (p.0, p.1 ^ p.0),
        _ => unreachable!("Z_4 scalar"),
    }
}

/// Context of `E_{4^d}`: the paired field context; `g4` is the lift of its
/// generator by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingCtx {
    field: FieldCtx,
}

impl RingCtx {
    pub fn new(field: FieldCtx) -> RingCtx {
        RingCtx { field }
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    /// The generator `g4` as `Z_4` coefficients, index `i` = coefficient of
    /// `x^i`; equals the 0/1 coefficients of `g2`.
    pub fn g4_coeffs(&self) -> Vec<u8> {
        let bits = self.field.g2().0;
        (0..=self.degree()).map(|i| ((bits >> i) & 1) as u8).collect()
    }

    pub fn zero(&self) -> RingElem {
        RingElem::ZERO
    }

    pub fn one(&self) -> RingElem {
        RingElem::ONE
    }

    pub fn add(&self, a: RingElem, b: RingElem) -> RingElem {
        let lo = a.lo ^ b.lo;
        let carry = a.lo & b.lo;
        RingElem {
            lo,
            hi: a.hi ^ b.hi ^ carry,
        }
    }

    pub fn neg(&self, a: RingElem) -> RingElem {
        RingElem {
            lo: a.lo,
            hi: a.hi ^ a.lo,
        }
    }

    pub fn sub(&self, a: RingElem, b: RingElem) -> RingElem {
        self.add(a, self.neg(b))
    }

    /// Schoolbook polynomial product over `Z_4` reduced modulo `g4`.
    pub fn mul(&self, a: RingElem, b: RingElem) -> RingElem {
        let d = self.degree();
        let mut acc = (0u128, 0u128);
        for i in 0..d {
            let c = b.coeff(i);
            if c != 0 {
                let shifted = ((a.lo as u128) << i, (a.hi as u128) << i);
                acc = plane_add(acc, plane_scale(c, shifted));
            }
        }
        // Reduce: clear coefficients from 2d-2 down to d by subtracting
        // c * x^(i-d) * g4. Since g4 is monic, each step zeroes position i.
        let g4_plane = self.field.g2().0;
        for i in (d..=2 * d.saturating_sub(1)).rev() {
            let c = ((acc.0 >> i) & 1) as u8 | (((acc.1 >> i) & 1) as u8) << 1;
            if c != 0 {
                let shifted = (g4_plane << (i - d), 0u128);
                // Adding (4 - c) * g4 subtracts c * g4 coefficientwise.
                acc = plane_add(acc, plane_scale(4 - c, shifted));
            }
        }
        debug_assert_eq!(acc.0 >> d, 0);
        debug_assert_eq!(acc.1 >> d, 0);
        RingElem {
            lo: acc.0 as u64,
            hi: acc.1 as u64,
        }
    }

    /// Reinterpret the 0/1 coefficients of a field element in `Z_4`.
    pub fn lift(&self, a: FieldElem) -> RingElem {
        RingElem { lo: a.0, hi: 0 }
    }

    /// Reduce every coefficient mod 2. This map is a ring homomorphism onto
    /// `F_{2^d}`, and `project(lift(a)) = a`.
    pub fn project(&self, s: RingElem) -> FieldElem {
        FieldElem(s.lo)
    }

    /// For odd `sigma`, the coefficient `tau = lift(project(sigma)^-1) * v`
    /// makes `v - sigma * tau` even.
    pub fn elim_coeff(&self, sigma: RingElem, v: RingElem) -> Result<RingElem> {
        if !sigma.is_odd() {
            return Err(Error::EvenMultiplier);
        }
        let inv = self
            .field
            .inv(self.project(sigma))
            .expect("odd element has nonzero projection");
        Ok(self.mul(self.lift(inv), v))
    }

    /// Invert the lift-times-2 operation: given `s` with every coefficient in
    /// `{0, 2}`, return the field element `a` with `2 * lift(a) = s`. An odd
    /// coefficient means the caller's per-minus-det identity broke; that is a
    /// hard error, not a recoverable condition.
    pub fn unlift2(&self, s: RingElem) -> Result<FieldElem> {
        if s.lo != 0 {
            let index = s.lo.trailing_zeros() as usize;
            return Err(Error::OddCoefficient {
                index,
                coeff: s.coeff(index),
            });
        }
        Ok(FieldElem(s.hi))
    }

    /// Uniform element of `E_{4^d}`: `2d` fresh bits.
    pub fn random_elem(&self, rng: &mut impl RngCore) -> RingElem {
        let m = mask(self.degree());
        RingElem {
            lo: rng.next_u64() & m,
            hi: rng.next_u64() & m,
        }
    }

    /// Uniform even element.
    pub fn random_even_elem(&self, rng: &mut impl RngCore) -> RingElem {
        RingElem {
            lo: 0,
            hi: rng.next_u64() & mask(self.degree()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Expr;
    use crate::fields::{make_field, GF2Poly};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    /// E_4: d = 1 over g2 = x + 1, so the ring is plain Z_4.
    fn e4() -> RingCtx {
        RingCtx::new(FieldCtx::from_g2(GF2Poly(0b11)))
    }

    fn ctx_of_degree(d: usize, seed: u64) -> RingCtx {
        RingCtx::new(make_field(d, &mut rng(seed)))
    }

    #[test]
    fn z4_arithmetic_in_e4() {
        let ctx = e4();
        let two = RingElem::from_int(2);
        let three = RingElem::from_int(3);
        assert_eq!(ctx.mul(two, two), RingElem::ZERO);
        assert_eq!(ctx.add(three, three), two);
        assert_eq!(ctx.sub(RingElem::ZERO, RingElem::ONE), three);
    }

    #[test]
    fn reduction_example_degree_3() {
        // d = 3, g4 = x^3 + x + 1 over Z_4: x * x^2 = -x - 1 = 3x + 3.
        let ctx = RingCtx::new(FieldCtx::from_g2(GF2Poly(0b1011)));
        let x = RingElem::from_coeffs(&[0, 1]);
        let x2 = RingElem::from_coeffs(&[0, 0, 1]);
        assert_eq!(ctx.mul(x, x2), RingElem::from_coeffs(&[3, 3, 0]));
    }

    #[test]
    fn lift_and_project_basics() {
        let ctx = ctx_of_degree(3, 1);
        assert_eq!(ctx.lift(FieldElem::ZERO), RingElem::ZERO);
        assert_eq!(ctx.lift(FieldElem::ONE), RingElem::ONE);
        // lift(x^2 + 1) has the same coefficients read in Z_4.
        assert_eq!(ctx.lift(FieldElem(0b101)), RingElem::from_coeffs(&[1, 0, 1]));
        assert_eq!(ctx.project(RingElem::from_int(2)), FieldElem::ZERO);
        assert_eq!(ctx.project(RingElem::from_int(3)), FieldElem::ONE);
    }

    #[test]
    fn project_inverts_lift() {
        let ctx = ctx_of_degree(8, 2);
        let mut r = rng(3);
        for _ in 0..100 {
            let a = ctx.field().random_elem(&mut r);
            assert_eq!(ctx.project(ctx.lift(a)), a);
        }
    }

    #[test]
    fn oddness() {
        let ctx = ctx_of_degree(2, 4);
        assert!(!RingElem::ZERO.is_odd());
        assert!(!RingElem::from_int(2).is_odd());
        assert!(RingElem::from_coeffs(&[1, 2]).is_odd()); // 2x + 1
        assert!(ctx.lift(FieldElem::ONE).is_odd());
    }

    #[test]
    fn elim_coeff_examples_in_e4() {
        let ctx = e4();
        let (one, two, three) = (
            RingElem::ONE,
            RingElem::from_int(2),
            RingElem::from_int(3),
        );
        let tau = ctx.elim_coeff(one, three).unwrap();
        assert_eq!(tau, three);
        assert_eq!(ctx.sub(three, ctx.mul(one, tau)), RingElem::ZERO);

        let tau = ctx.elim_coeff(three, two).unwrap();
        assert_eq!(tau, two);
        assert!(ctx.sub(two, ctx.mul(three, tau)).is_even());

        assert_eq!(ctx.elim_coeff(three, RingElem::ZERO).unwrap(), RingElem::ZERO);
        assert_eq!(ctx.elim_coeff(two, one), Err(Error::EvenMultiplier));
    }

    #[test]
    fn elim_coeff_makes_the_difference_even() {
        let ctx = ctx_of_degree(8, 5);
        let mut r = rng(6);
        for _ in 0..1_000 {
            let sigma = {
                let mut s = ctx.random_elem(&mut r);
                while !s.is_odd() {
                    s = ctx.random_elem(&mut r);
                }
                s
            };
            let v = ctx.random_elem(&mut r);
            let tau = ctx.elim_coeff(sigma, v).unwrap();
            assert!(ctx.sub(v, ctx.mul(sigma, tau)).is_even());
        }
    }

    #[test]
    fn unlift2_examples() {
        let ctx = ctx_of_degree(2, 7);
        assert_eq!(ctx.unlift2(RingElem::ZERO), Ok(FieldElem::ZERO));
        assert_eq!(ctx.unlift2(RingElem::from_int(2)), Ok(FieldElem::ONE));
        // 2x + 2 halves to x + 1.
        assert_eq!(ctx.unlift2(RingElem::from_coeffs(&[2, 2])), Ok(FieldElem(0b11)));
        assert_eq!(
            ctx.unlift2(RingElem::from_coeffs(&[2, 1])),
            Err(Error::OddCoefficient { index: 1, coeff: 1 })
        );
    }

    #[test]
    fn ring_axioms_hold_on_random_triples() {
        for d in [1usize, 2, 8] {
            let ctx = ctx_of_degree(d, 8);
            let mut r = rng(d as u64 + 20);
            for _ in 0..2_000 {
                let a = ctx.random_elem(&mut r);
                let b = ctx.random_elem(&mut r);
                let c = ctx.random_elem(&mut r);
                assert_eq!(ctx.add(a, b), ctx.add(b, a));
                assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
                assert_eq!(ctx.add(ctx.add(a, b), c), ctx.add(a, ctx.add(b, c)));
                assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
                assert_eq!(
                    ctx.mul(a, ctx.add(b, c)),
                    ctx.add(ctx.mul(a, b), ctx.mul(a, c))
                );
                assert_eq!(ctx.add(a, ctx.neg(a)), RingElem::ZERO);
                assert_eq!(ctx.mul(a, ctx.one()), a);
                let four = ctx.add(
                    ctx.add(ctx.one(), ctx.one()),
                    ctx.add(ctx.one(), ctx.one()),
                );
                assert_eq!(four, RingElem::ZERO); // characteristic 4
            }
        }
    }

    #[test]
    fn projection_is_a_ring_homomorphism() {
        for d in [1usize, 2, 8] {
            let ctx = ctx_of_degree(d, 9);
            let f = ctx.field().clone();
            let mut r = rng(d as u64 + 30);
            for _ in 0..2_000 {
                let s = ctx.random_elem(&mut r);
                let t = ctx.random_elem(&mut r);
                assert_eq!(
                    ctx.project(ctx.add(s, t)),
                    f.add(ctx.project(s), ctx.project(t))
                );
                assert_eq!(
                    ctx.project(ctx.mul(s, t)),
                    f.mul(ctx.project(s), ctx.project(t))
                );
            }
        }
    }

    #[test]
    fn product_of_even_elements_is_zero() {
        for d in [1usize, 2, 8] {
            let ctx = ctx_of_degree(d, 10);
            let mut r = rng(d as u64 + 40);
            for _ in 0..2_000 {
                let s = ctx.random_even_elem(&mut r);
                let t = ctx.random_even_elem(&mut r);
                assert_eq!(ctx.mul(s, t), RingElem::ZERO);
            }
        }
    }

    #[test]
    fn twice_any_element_is_twice_its_projection_lifted() {
        for d in [1usize, 2, 8] {
            let ctx = ctx_of_degree(d, 11);
            let mut r = rng(d as u64 + 50);
            let two = RingElem::from_int(2);
            for _ in 0..2_000 {
                let s = ctx.random_elem(&mut r);
                assert_eq!(
                    ctx.mul(two, s),
                    ctx.mul(two, ctx.lift(ctx.project(s)))
                );
            }
        }
    }

    #[test]
    fn emulation_identity_on_random_expressions() {
        let ctx = ctx_of_degree(8, 12);
        let two = RingElem::from_int(2);
        let mut r = rng(60);
        for _ in 0..1_000 {
            let e = Expr::random(&mut r, &ctx, 4, 3);
            let alphas: Vec<FieldElem> =
                (0..4).map(|_| ctx.field().random_elem(&mut r)).collect();
            let lifted: Vec<RingElem> = alphas.iter().map(|&a| ctx.lift(a)).collect();
            let over_field = e.eval_projected(&alphas, &ctx);
            let over_ring = e.eval_ring(&lifted, &ctx);
            assert_eq!(ctx.mul(two, ctx.lift(over_field)), ctx.mul(two, over_ring));
        }
    }

    #[test]
    fn reverse_emulation_identity_on_random_expressions() {
        let ctx = ctx_of_degree(8, 13);
        let two = RingElem::from_int(2);
        let mut r = rng(61);
        for _ in 0..1_000 {
            let e = Expr::random(&mut r, &ctx, 4, 3);
            let taus: Vec<RingElem> = (0..4).map(|_| ctx.random_elem(&mut r)).collect();
            let projected: Vec<FieldElem> = taus.iter().map(|&t| ctx.project(t)).collect();
            let over_ring = e.eval_ring(&taus, &ctx);
            let over_field = e.eval_projected(&projected, &ctx);
            assert_eq!(ctx.mul(two, over_ring), ctx.mul(two, ctx.lift(over_field)));
        }
    }
}
