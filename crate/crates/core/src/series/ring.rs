//! Coefficient rings that are free of finite rank over `Z/p^N`.
//!
//! Elements are flat `u64` slices of length [`CoeffRing::dim`]. Products are
//! accumulated unreduced into `u128` buffers and reduced once, which is why
//! every modulus must stay below 2^32.

use crate::error::Result;
use crate::padic::PadicCtx;

pub trait CoeffRing: Send + Sync {
    fn padic(&self) -> &PadicCtx;

    fn dim(&self) -> usize;

    /// Length of the unreduced accumulator used by [`CoeffRing::mul_acc`].
    fn acc_len(&self) -> usize;

    /// `acc += a * b` without reduction.
    fn mul_acc(&self, a: &[u64], b: &[u64], acc: &mut [u128]);

    /// Reduce an accumulator into a ring element.
    fn finish(&self, acc: &[u128], out: &mut [u64]);

    fn one(&self) -> Vec<u64>;

    /// Image in the residue field is zero.
    fn in_max_ideal(&self, a: &[u64]) -> bool;

    fn inv(&self, a: &[u64]) -> Result<Vec<u64>>;

    /// Smallest `k` with `m^k = 0`, `m` the maximal ideal.
    fn adic_depth(&self) -> usize;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.dim()]
    }

    fn is_unit(&self, a: &[u64]) -> bool {
        !self.in_max_ideal(a)
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut acc = vec![0u128; self.acc_len()];
        self.mul_acc(a, b, &mut acc);
        let mut out = self.zero();
        self.finish(&acc, &mut out);
        out
    }

    #[allow(clippy::wrong_self_convention)]
    /// Embed an integer as a scalar multiple of the identity.
    fn from_int(&self, a: i64) -> Vec<u64> {
        let mut e = self.zero();
        e[0] = self.padic().from_i64(a);
        e
    }
}

pub fn vadd(ctx: &PadicCtx, a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x = ctx.add(*x, *y);
    }
}

pub fn vsub(ctx: &PadicCtx, a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x = ctx.sub(*x, *y);
    }
}

pub fn vneg(ctx: &PadicCtx, a: &mut [u64]) {
    for x in a.iter_mut() {
        *x = ctx.neg(*x);
    }
}

pub fn vscale(ctx: &PadicCtx, a: &mut [u64], s: u64) {
    for x in a.iter_mut() {
        *x = ctx.mul(*x, s);
    }
}

/// `a += s * b` for an integer scalar `s`.
pub fn vaxpy(ctx: &PadicCtx, a: &mut [u64], s: u64, b: &[u64]) {
    if s == 0 {
        return;
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x = ctx.add(*x, ctx.mul(s, *y));
    }
}

pub fn is_zero(a: &[u64]) -> bool {
    a.iter().all(|&x| x == 0)
}

/// Minimum p-adic valuation over the coordinates; `None` if all vanish.
pub fn vvaluation(ctx: &PadicCtx, a: &[u64]) -> Option<u32> {
    a.iter().filter_map(|&x| ctx.valuation(x).finite()).min()
}

/// Divide every coordinate by `p^k` exactly, or `None` if some coordinate is not divisible.
pub fn vdiv_p_pow(ctx: &PadicCtx, a: &[u64], k: u32) -> Option<Vec<u64>> {
    a.iter().map(|&x| ctx.div_p_pow(x, k)).collect()
}
