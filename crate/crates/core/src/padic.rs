//! Fixed-precision p-adic integers.
//!
//! Every value is a residue modulo `p^Nprec`; results are correct modulo
//! that power and nothing more.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Largest modulus a context may carry, so that sums of two residues fit.
const MAX_MODULUS: u128 = 1 << 63;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicCtx {
    p: u64,
    nprec: u32,
    modulus: u64,
}

/// Valuation of a residue: exact below the precision, otherwise "at least Nprec".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Exact(u32),
    AtLeast(u32),
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Exact(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }

    /// Lower bound usable in either case.
    pub fn lower(self) -> u32 {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

impl PadicCtx {
    pub fn new(p: u64, nprec: u32) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidInput(format!("p = {p} must be an odd prime")));
        }
        if nprec == 0 {
            return Err(Error::InvalidInput("Nprec must be at least 1".into()));
        }
        let mut m: u128 = 1;
        for _ in 0..nprec {
            m *= p as u128;
            if m >= MAX_MODULUS {
                return Err(Error::PrecisionExhausted(format!("p^{nprec} does not fit in 63 bits")));
            }
        }
        Ok(PadicCtx { p, nprec, modulus: m as u64 })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn nprec(&self) -> u32 {
        self.nprec
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Same prime, different number of digits.
    pub fn with_nprec(&self, nprec: u32) -> Result<Self> {
        PadicCtx::new(self.p, nprec)
    }

    pub fn p_pow(&self, k: u32) -> u64 {
        if k >= self.nprec {
            return 0;
        }
        self.p.pow(k)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    #[inline]
    pub fn reduce_u128(&self, a: u128) -> u64 {
        (a % self.modulus as u128) as u64
    }

    pub fn from_i128(&self, a: i128) -> u64 {
        a.rem_euclid(self.modulus as i128) as u64
    }

    pub fn from_i64(&self, a: i64) -> u64 {
        self.from_i128(a as i128)
    }

    /// Symmetric representative in (-m/2, m/2].
    pub fn signed(&self, a: u64) -> i128 {
        if a > self.modulus / 2 {
            a as i128 - self.modulus as i128
        } else {
            a as i128
        }
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a.is_multiple_of(self.p) {
            return Err(Error::NonUnit);
        }
        let (mut old_r, mut r) = (a as i128, self.modulus as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        debug_assert_eq!(old_r, 1);
        Ok(self.from_i128(old_s))
    }

    pub fn valuation(&self, a: u64) -> Valuation {
        if a == 0 {
            return Valuation::AtLeast(self.nprec);
        }
        let mut v = 0;
        let mut x = a;
        while x.is_multiple_of(self.p) {
            x /= self.p;
            v += 1;
        }
        Valuation::Exact(v)
    }

    /// Divide by `p^k`, failing if the residue is not divisible. The result is
    /// correct modulo `p^(Nprec-k)` and is returned as its least representative.
    pub fn div_p_pow(&self, a: u64, k: u32) -> Option<u64> {
        if k == 0 {
            return Some(a);
        }
        if k > self.nprec {
            return None;
        }
        let pk = self.p.pow(k);
        if !a.is_multiple_of(pk) {
            return None;
        }
        Some(a / pk)
    }

    /// Base-p digits, most significant first, without leading zeros ("0" for zero).
    pub fn digits(&self, a: u64) -> String {
        if a == 0 {
            return "0".into();
        }
        let mut ds = Vec::new();
        let mut x = a;
        while x > 0 {
            let d = (x % self.p) as u32;
            ds.push(std::char::from_digit(d, 36).unwrap_or('?'));
            x /= self.p;
        }
        ds.iter().rev().collect()
    }

    pub fn int(&self, a: i64) -> PadicInt {
        PadicInt { ctx: *self, residue: self.from_i64(a) }
    }

    pub fn elem(&self, residue: u64) -> PadicInt {
        PadicInt { ctx: *self, residue: residue % self.modulus }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicInt {
    ctx: PadicCtx,
    residue: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Inv,
}

impl PadicInt {
    pub fn ctx(&self) -> PadicCtx {
        self.ctx
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn val(&self) -> Valuation {
        self.ctx.valuation(self.residue)
    }

    pub fn is_unit(&self) -> bool {
        !self.residue.is_multiple_of(self.ctx.p)
    }

    fn same_ctx(&self, other: &PadicInt) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::CtxMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &PadicInt) -> Result<PadicInt> {
        self.same_ctx(other)?;
        Ok(self.ctx.elem(self.ctx.add(self.residue, other.residue)))
    }

    pub fn sub(&self, other: &PadicInt) -> Result<PadicInt> {
        self.same_ctx(other)?;
        Ok(self.ctx.elem(self.ctx.sub(self.residue, other.residue)))
    }

    pub fn mul(&self, other: &PadicInt) -> Result<PadicInt> {
        self.same_ctx(other)?;
        Ok(self.ctx.elem(self.ctx.mul(self.residue, other.residue)))
    }

    pub fn inv(&self) -> Result<PadicInt> {
        Ok(self.ctx.elem(self.ctx.inv(self.residue)?))
    }

    pub fn pow(&self, e: u64) -> PadicInt {
        self.ctx.elem(self.ctx.pow(self.residue, e))
    }

    pub fn digits(&self) -> String {
        self.ctx.digits(self.residue)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.residue, self.ctx.p, self.ctx.nprec)
    }
}

/// Binary arithmetic entry point; `b` is ignored for `Inv`.
pub fn padic_arith(a: &PadicInt, b: &PadicInt, op: ArithOp) -> Result<PadicInt> {
    match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Inv => {
            a.same_ctx(b)?;
            a.inv()
        }
    }
}

/// p-adic valuation of a nonzero machine integer.
pub fn vp_u128(p: u64, mut x: u128) -> u32 {
    assert!(x != 0, "valuation of zero");
    let p = p as u128;
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

fn check_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidInput(format!("p = {p} must be an odd prime")));
    }
    Ok(())
}

/// Order of `k` in `(Z/p)^x`.
pub fn mult_order_mod_p(p: u64, k: i64) -> Result<u64> {
    check_prime(p)?;
    let k = k.rem_euclid(p as i64) as u64;
    if k == 0 {
        return Err(Error::InvalidInput(format!("{k} is divisible by {p}")));
    }
    let mut a = 1;
    let mut x = k;
    while x != 1 {
        x = x * k % p;
        a += 1;
    }
    Ok(a)
}

/// `v_p(k^s - 1)` by the order/lifting formula, never expanding `k^s`.
pub fn vp_pow_minus_one(p: u64, k: i64, s: u64) -> Result<u32> {
    if s == 0 {
        return Err(Error::InvalidInput("s must be positive".into()));
    }
    let a = mult_order_mod_p(p, k)?;
    if !s.is_multiple_of(a) {
        return Ok(0);
    }
    let ka = BigInt::from(k).pow(a as u32) - BigInt::one();
    if ka.is_zero() {
        return Err(Error::InvalidInput(format!("{k}^{a} - 1 = 0 has infinite valuation")));
    }
    Ok(vp_bigint(p, &ka) + vp_u128(p, s as u128))
}

/// p-adic valuation of a nonzero big integer.
pub fn vp_bigint(p: u64, x: &BigInt) -> u32 {
    assert!(!x.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    while (&x % &p).is_zero() {
        x /= &p;
        v += 1;
    }
    v
}

pub fn digit_sum(p: u64, mut d: u64) -> u64 {
    let mut s = 0;
    while d > 0 {
        s += d % p;
        d /= p;
    }
    s
}

/// `v_p(d!) = (d - s_p(d)) / (p - 1)`.
pub fn vp_factorial(p: u64, d: u64) -> u64 {
    (d - digit_sum(p, d)) / (p - 1)
}

/// Teichmüller lift of `a` by iterating `a -> a^p` until stable.
pub fn teichmuller(a: i64, ctx: &PadicCtx) -> Result<PadicInt> {
    let p = ctx.p();
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return Err(Error::InvalidInput(format!("{a} is divisible by {p}")));
    }
    let mut x = r;
    loop {
        let next = ctx.pow(x, p);
        if next == x {
            return Ok(ctx.elem(x));
        }
        x = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_two_mod_81() {
        let ctx = PadicCtx::new(3, 4).unwrap();
        assert_eq!(ctx.int(2).inv().unwrap().residue(), 41);
    }

    #[test]
    fn valuation_past_precision() {
        let ctx = PadicCtx::new(3, 4).unwrap();
        let z = ctx.int(3).mul(&ctx.int(27)).unwrap();
        assert_eq!(z.residue(), 0);
        assert_eq!(z.val(), Valuation::AtLeast(4));
    }

    #[test]
    fn non_unit_inverse_fails() {
        let ctx = PadicCtx::new(5, 3).unwrap();
        assert_eq!(ctx.int(10).inv(), Err(Error::NonUnit));
    }

    #[test]
    fn mismatched_contexts() {
        let a = PadicCtx::new(3, 4).unwrap().int(1);
        let b = PadicCtx::new(3, 5).unwrap().int(1);
        assert_eq!(a.add(&b), Err(Error::CtxMismatch));
    }

    #[test]
    fn small_examples() {
        assert_eq!(vp_pow_minus_one(3, 4, 3).unwrap(), 2);
        assert_eq!(vp_pow_minus_one(3, 2, 1).unwrap(), 0);
        assert_eq!(vp_pow_minus_one(3, 2, 6).unwrap(), 2);
        assert!(vp_pow_minus_one(3, 6, 2).is_err());
        assert_eq!(vp_factorial(3, 9), 4);
        assert_eq!(vp_factorial(3, 2), 0);
        assert_eq!(vp_factorial(3, 10), 4);
        assert_eq!(mult_order_mod_p(3, 4).unwrap(), 1);
        assert_eq!(mult_order_mod_p(3, 2).unwrap(), 2);
        assert_eq!(mult_order_mod_p(7, 3).unwrap(), 6);
    }

    #[test]
    fn teichmuller_examples() {
        let ctx = PadicCtx::new(3, 2).unwrap();
        assert_eq!(teichmuller(2, &ctx).unwrap().residue(), 8);
        assert_eq!(teichmuller(1, &ctx).unwrap().residue(), 1);
        assert!(teichmuller(3, &ctx).is_err());
    }

    #[test]
    fn digits_base_p() {
        let ctx = PadicCtx::new(3, 4).unwrap();
        assert_eq!(ctx.digits(10), "101");
        assert_eq!(ctx.digits(0), "0");
    }
}
