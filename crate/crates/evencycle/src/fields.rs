//! Arithmetic in the finite field `F_{2^d} = Z_2[x]/<g2>`.
//!
//! Elements are residues of degree `< d`, stored as packed bit words with the
//! least-significant bit holding the coefficient of `x^0`. Addition is XOR,
//! multiplication is a schoolbook shift-and-XOR carryless product followed by
//! reduction modulo `g2`, and inverses come from the extended Euclidean
//! algorithm. The generator polynomial is found by drawing random monic
//! candidates until one passes the Rabin irreducibility test.

use rand::RngCore;

use crate::{Error, Result};

/// A polynomial over `Z_2`, bit `i` = coefficient of `x^i`.
///
/// The packed representation caps the degree at 127, which covers every
/// intermediate this crate produces for extension degrees `d <= 64` (products
/// of two residues reach degree at most `2d - 2`). The leading stored bit of
/// a nonzero value is its leading coefficient, so nonzero values are monic by
/// construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GF2Poly(pub u128);

impl GF2Poly {
    pub const ZERO: GF2Poly = GF2Poly(0);
    /// The polynomial `x`.
    pub const X: GF2Poly = GF2Poly(2);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Degree of the polynomial; zero polynomial reports 0.
    pub fn degree(self) -> usize {
        if self.0 == 0 {
            0
        } else {
            127 - self.0.leading_zeros() as usize
        }
    }

    /// Remainder of `self` divided by `divisor` (which must be nonzero).
    pub fn rem(self, divisor: GF2Poly) -> GF2Poly {
        assert!(divisor.0 != 0, "polynomial division by zero");
        let dd = divisor.degree();
        let mut r = self.0;
        while r != 0 {
            let dr = 127 - r.leading_zeros() as usize;
            if dr < dd {
                break;
            }
            r ^= divisor.0 << (dr - dd);
        }
        GF2Poly(r)
    }

    /// Quotient and remainder of `self` divided by `divisor`.
    pub fn divrem(self, divisor: GF2Poly) -> (GF2Poly, GF2Poly) {
        assert!(divisor.0 != 0, "polynomial division by zero");
        let dd = divisor.degree();
        let mut r = self.0;
        let mut q = 0u128;
        while r != 0 {
            let dr = 127 - r.leading_zeros() as usize;
            if dr < dd {
                break;
            }
            q |= 1 << (dr - dd);
            r ^= divisor.0 << (dr - dd);
        }
        (GF2Poly(q), GF2Poly(r))
    }

    pub fn gcd(self, other: GF2Poly) -> GF2Poly {
        let (mut a, mut b) = (self, other);
        while !b.is_zero() {
            let r = a.rem(b);
            a = b;
            b = r;
        }
        a
    }

    /// Square modulo `modulus`. Squaring over `Z_2` spreads bit `i` to `2i`.
    fn square_mod(self, modulus: GF2Poly) -> GF2Poly {
        debug_assert!(self.degree() < 64, "square would overflow the bit word");
        let mut spread = 0u128;
        let mut v = self.0 as u64;
        while v != 0 {
            let i = v.trailing_zeros();
            spread |= 1u128 << (2 * i);
            v &= v - 1;
        }
        GF2Poly(spread).rem(modulus)
    }
}

/// Carryless product of two bit-packed `Z_2` polynomials of degree `< 64`.
fn clmul(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let mut b = b;
    while b != 0 {
        let i = b.trailing_zeros();
        acc ^= (a as u128) << i;
        b &= b - 1;
    }
    acc
}

fn bit_mask(d: usize) -> u64 {
    if d == 64 {
        u64::MAX
    } else {
        (1u64 << d) - 1
    }
}

/// Rabin irreducibility test over `Z_2`.
///
/// `p` of degree `d >= 1` is irreducible iff `x^(2^d) = x (mod p)` and
/// `gcd(x^(2^(d/q)) - x, p) = 1` for every prime `q` dividing `d`. The zero
/// polynomial is rejected; nonzero packed polynomials are monic by
/// representation.
pub fn is_irreducible(p: GF2Poly) -> bool {
    assert!(!p.is_zero(), "is_irreducible: zero polynomial");
    let d = p.degree();
    if d == 0 {
        return false;
    }
    let x_mod_p = GF2Poly::X.rem(p);
    // x^(2^k) mod p for k = 1..d, via repeated squaring.
    let mut h = x_mod_p;
    let mut powers = Vec::with_capacity(d);
    for _ in 0..d {
        h = h.square_mod(p);
        powers.push(h);
    }
    for q in prime_divisors(d) {
        let g = GF2Poly(powers[d / q - 1].0 ^ x_mod_p.0).gcd(p);
        if g.degree() != 0 || g.is_zero() {
            return false;
        }
    }
    powers[d - 1] == x_mod_p
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An element of `F_{2^d}`: the residue's coefficient vector, bit `i` holding
/// the coefficient of `x^i`. Only the low `d` bits of the context's degree may
/// be set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FieldElem(pub u64);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The defining context of `F_{2^d}`: the extension degree and the
/// irreducible generator `g2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldCtx {
    d: usize,
    g2: GF2Poly,
}

/// Draw random monic degree-`d` candidates until one passes the
/// irreducibility test. The attempt count is bounded at `64 * d`; running out
/// is so unlikely for a sound RNG that it is treated as a bug and panics.
pub fn make_field(d: usize, rng: &mut impl RngCore) -> FieldCtx {
    assert!((1..=64).contains(&d), "extension degree must be in 1..=64");
    let attempts = 64 * d;
    for _ in 0..attempts {
        let low = (rng.next_u64() & bit_mask(d)) as u128;
        let candidate = GF2Poly(low | (1u128 << d));
        if is_irreducible(candidate) {
            return FieldCtx { d, g2: candidate };
        }
    }
    panic!("no irreducible polynomial of degree {d} found in {attempts} attempts; broken RNG?");
}

impl FieldCtx {
    /// Build a context from a caller-supplied generator, which must be monic
    /// of degree exactly `d` and irreducible.
    pub fn from_g2(g2: GF2Poly) -> FieldCtx {
        let d = g2.degree();
        assert!((1..=64).contains(&d), "generator degree must be in 1..=64");
        assert!(is_irreducible(g2), "generator is reducible");
        FieldCtx { d, g2 }
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn g2(&self) -> GF2Poly {
        self.g2
    }

    /// Number of field elements, saturating at `u128::MAX` is unnecessary
    /// since `d <= 64`.
    pub fn order(&self) -> u128 {
        1u128 << self.d
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    /// The element whose coefficient vector is the binary expansion of `i`.
    /// This is the canonical "distinct values" supply for interpolation
    /// abscissae; requires `i < 2^d`.
    pub fn elem_from_index(&self, i: u64) -> FieldElem {
        assert!(
            self.d == 64 || i < (1u64 << self.d),
            "index {i} out of range for F_2^{}",
            self.d
        );
        FieldElem(i)
    }

    pub fn contains(&self, a: FieldElem) -> bool {
        a.0 & !bit_mask(self.d) == 0
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(a.0 ^ b.0)
    }

    /// Subtraction coincides with addition in characteristic 2.
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, b)
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let prod = clmul(a.0, b.0);
        FieldElem(self.reduce(prod))
    }

    fn reduce(&self, mut v: u128) -> u64 {
        let d = self.d;
        while v >> d != 0 {
            let deg = 127 - v.leading_zeros() as usize;
            v ^= self.g2.0 << (deg - d);
        }
        v as u64
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero(self.d));
        }
        let (mut r0, mut r1) = (self.g2, GF2Poly(a.0 as u128));
        let (mut s0, mut s1) = (GF2Poly::ZERO, GF2Poly(1));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(r1);
            r0 = r1;
            r1 = r;
            let s_next = GF2Poly(s0.0 ^ clmul128(q.0, s1.0));
            s0 = s1;
            s1 = s_next;
        }
        debug_assert_eq!(r0.degree(), 0, "gcd with an irreducible must be 1");
        Ok(FieldElem(self.reduce(s0.0)))
    }

    /// Uniform element: `d` fresh bits from the stream.
    pub fn random_elem(&self, rng: &mut impl RngCore) -> FieldElem {
        FieldElem(rng.next_u64() & bit_mask(self.d))
    }
}

/// Carryless product where the inputs stay small enough that the result fits
/// 128 bits (true throughout the Euclidean computations used here).
fn clmul128(a: u128, b: u128) -> u128 {
    let mut acc = 0u128;
    let mut b = b;
    while b != 0 {
        let i = b.trailing_zeros();
        acc ^= a << i;
        b &= b - 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Trial-division irreducibility: divide by every polynomial of degree
    /// 1..=deg/2. Independent of the Rabin-criterion implementation.
    fn irreducible_by_trial_division(p: GF2Poly) -> bool {
        let d = p.degree();
        if d == 0 {
            return false;
        }
        for deg in 1..=d / 2 {
            for low in 0..(1u128 << deg) {
                let q = GF2Poly(low | (1u128 << deg));
                if p.rem(q).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn degree_one_polynomials_are_irreducible() {
        assert!(is_irreducible(GF2Poly(0b10))); // x
        assert!(is_irreducible(GF2Poly(0b11))); // x + 1
    }

    #[test]
    fn x2_plus_1_is_reducible() {
        // x^2 + 1 = (x + 1)^2 over Z_2.
        assert!(!is_irreducible(GF2Poly(0b101)));
        assert!(!irreducible_by_trial_division(GF2Poly(0b101)));
    }

    #[test]
    fn x3_plus_x_plus_1_is_irreducible() {
        assert!(is_irreducible(GF2Poly(0b1011)));
        assert!(irreducible_by_trial_division(GF2Poly(0b1011)));
    }

    #[test]
    #[should_panic(expected = "zero polynomial")]
    fn zero_polynomial_is_rejected() {
        is_irreducible(GF2Poly::ZERO);
    }

    #[test]
    fn rabin_matches_trial_division_up_to_degree_8() {
        for bits in 2u128..1 << 9 {
            let p = GF2Poly(bits);
            if p.degree() == 0 {
                continue;
            }
            assert_eq!(
                is_irreducible(p),
                irreducible_by_trial_division(p),
                "mismatch at {bits:#b}"
            );
        }
    }

    #[test]
    fn make_field_degree_1() {
        let ctx = make_field(1, &mut rng(1));
        assert!(ctx.g2() == GF2Poly(0b10) || ctx.g2() == GF2Poly(0b11));
    }

    #[test]
    fn make_field_degree_3_yields_a_known_irreducible() {
        // The only degree-3 irreducibles over Z_2.
        let ctx = make_field(3, &mut rng(7));
        assert!(ctx.g2() == GF2Poly(0b1011) || ctx.g2() == GF2Poly(0b1101));
        assert!(irreducible_by_trial_division(ctx.g2()));
    }

    #[test]
    fn make_field_is_deterministic_for_a_fixed_seed() {
        for d in [1, 2, 8, 20] {
            let a = make_field(d, &mut rng(42));
            let b = make_field(d, &mut rng(42));
            assert_eq!(a, b);
        }
    }

    #[test]
    fn addition_is_self_inverse() {
        let ctx = make_field(8, &mut rng(2));
        let mut r = rng(3);
        for _ in 0..100 {
            let a = ctx.random_elem(&mut r);
            assert_eq!(ctx.add(a, a), FieldElem::ZERO);
        }
    }

    #[test]
    fn f8_multiplication_example() {
        // In F_8 with g2 = x^3 + x + 1: x * x^2 = x + 1.
        let ctx = FieldCtx::from_g2(GF2Poly(0b1011));
        assert_eq!(ctx.mul(FieldElem(0b010), FieldElem(0b100)), FieldElem(0b011));
    }

    #[test]
    fn inverse_of_one_and_zero() {
        let ctx = make_field(5, &mut rng(4));
        assert_eq!(ctx.inv(FieldElem::ONE), Ok(FieldElem::ONE));
        assert_eq!(ctx.inv(FieldElem::ZERO), Err(Error::DivisionByZero(5)));
    }

    #[test]
    fn field_axioms_hold_on_random_triples() {
        for d in [1usize, 2, 8, 64] {
            let ctx = make_field(d, &mut rng(5));
            let mut r = rng(d as u64 + 10);
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
                assert_eq!(ctx.add(a, a), FieldElem::ZERO);
                if !a.is_zero() {
                    assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), FieldElem::ONE);
                }
            }
        }
    }

    #[test]
    fn no_zero_divisors() {
        let ctx = make_field(8, &mut rng(6));
        let mut r = rng(16);
        for _ in 0..2_000 {
            let a = ctx.random_elem(&mut r);
            let b = ctx.random_elem(&mut r);
            assert_eq!(
                ctx.mul(a, b).is_zero(),
                a.is_zero() || b.is_zero(),
                "zero divisor at {a:?} * {b:?}"
            );
        }
    }

    #[test]
    fn random_elem_is_roughly_uniform_at_d1() {
        let ctx = make_field(1, &mut rng(8));
        let mut r = rng(9);
        let zeros = (0..10_000)
            .filter(|_| ctx.random_elem(&mut r).is_zero())
            .count();
        let frac = zeros as f64 / 10_000.0;
        assert!((0.45..=0.55).contains(&frac), "zero fraction {frac}");
    }

    #[test]
    fn random_elem_is_deterministic_per_seed_and_draw() {
        let ctx = make_field(8, &mut rng(10));
        let draws_a: Vec<_> = {
            let mut r = rng(11);
            (0..50).map(|_| ctx.random_elem(&mut r)).collect()
        };
        let draws_b: Vec<_> = {
            let mut r = rng(11);
            (0..50).map(|_| ctx.random_elem(&mut r)).collect()
        };
        assert_eq!(draws_a, draws_b);
    }

    #[test]
    fn random_elem_spreads_over_the_field_at_d8() {
        let ctx = make_field(8, &mut rng(12));
        let mut r = rng(13);
        let distinct: std::collections::HashSet<u64> =
            (0..10_000).map(|_| ctx.random_elem(&mut r).0).collect();
        assert!(distinct.len() >= 200, "only {} distinct draws", distinct.len());
    }
}
