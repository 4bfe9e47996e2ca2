//! Truncated power series in one variable over a [`CoeffRing`].

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::series::e0::E0Ring;
use crate::series::ring::{self, CoeffRing};

/// `Σ c_k x^k` for `k < len`, coefficients stored flat.
pub struct USeries<A: CoeffRing = E0Ring> {
    ring: Arc<A>,
    len: usize,
    c: Vec<u64>,
}

impl<A: CoeffRing> Clone for USeries<A> {
    fn clone(&self) -> Self {
        USeries { ring: self.ring.clone(), len: self.len, c: self.c.clone() }
    }
}

impl<A: CoeffRing> PartialEq for USeries<A> {
    fn eq(&self, o: &Self) -> bool {
        self.len == o.len && self.c == o.c
    }
}

impl<A: CoeffRing> fmt::Debug for USeries<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("USeries").field("len", &self.len).field("c", &self.c).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
}

/// Checked arithmetic: both operands must share ring and truncation.
pub fn series_arith<A: CoeffRing>(f: &USeries<A>, g: &USeries<A>, op: SeriesOp) -> Result<USeries<A>> {
    if f.len != g.len || (!Arc::ptr_eq(&f.ring, &g.ring) && f.ring.padic() != g.ring.padic()) {
        return Err(Error::CtxMismatch);
    }
    Ok(match op {
        SeriesOp::Add => f.add(g),
        SeriesOp::Sub => f.sub(g),
        SeriesOp::Mul => f.mul(g),
    })
}

impl<A: CoeffRing> USeries<A> {
    pub fn zero(ring: &Arc<A>, len: usize) -> Self {
        USeries { ring: ring.clone(), len, c: vec![0; len * ring.dim()] }
    }

    pub fn constant(ring: &Arc<A>, a: &[u64], len: usize) -> Self {
        let mut s = Self::zero(ring, len);
        if len > 0 {
            s.set_coeff(0, a);
        }
        s
    }

    pub fn one(ring: &Arc<A>, len: usize) -> Self {
        Self::constant(ring, &ring.one(), len)
    }

    pub fn monomial(ring: &Arc<A>, k: usize, a: &[u64], len: usize) -> Self {
        let mut s = Self::zero(ring, len);
        if k < len {
            s.set_coeff(k, a);
        }
        s
    }

    /// The series variable `x`.
    pub fn var(ring: &Arc<A>, len: usize) -> Self {
        Self::monomial(ring, 1, &ring.one(), len)
    }

    pub fn from_coeffs(ring: &Arc<A>, len: usize, coeffs: &[Vec<u64>]) -> Self {
        let mut s = Self::zero(ring, len);
        for (k, a) in coeffs.iter().enumerate().take(len) {
            s.set_coeff(k, a);
        }
        s
    }

    /// Integer coefficients, embedded as scalars.
    pub fn from_ints(ring: &Arc<A>, len: usize, coeffs: &[i64]) -> Self {
        let mut s = Self::zero(ring, len);
        for (k, &a) in coeffs.iter().enumerate().take(len) {
            s.set_coeff(k, &ring.from_int(a));
        }
        s
    }

    pub fn ring(&self) -> &Arc<A> {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn coeff(&self, k: usize) -> &[u64] {
        let d = self.ring.dim();
        &self.c[k * d..(k + 1) * d]
    }

    pub fn coeff_mut(&mut self, k: usize) -> &mut [u64] {
        let d = self.ring.dim();
        &mut self.c[k * d..(k + 1) * d]
    }

    pub fn set_coeff(&mut self, k: usize, a: &[u64]) {
        self.coeff_mut(k).copy_from_slice(a);
    }

    pub fn raw(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        ring::is_zero(&self.c)
    }

    /// Index of the first nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        (0..self.len).find(|&k| !ring::is_zero(self.coeff(k)))
    }

    /// Last nonzero index plus one.
    pub fn support_len(&self) -> usize {
        (0..self.len).rev().find(|&k| !ring::is_zero(self.coeff(k))).map_or(0, |k| k + 1)
    }

    /// Change truncation, padding with zeros or dropping terms.
    pub fn with_len(&self, len: usize) -> Self {
        let d = self.ring.dim();
        let mut c = vec![0; len * d];
        let m = len.min(self.len) * d;
        c[..m].copy_from_slice(&self.c[..m]);
        USeries { ring: self.ring.clone(), len, c }
    }

    pub fn add(&self, o: &Self) -> Self {
        let len = self.len.min(o.len);
        let mut r = self.with_len(len);
        let m = len * self.ring.dim();
        ring::vadd(self.ring.padic(), &mut r.c, &o.c[..m]);
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let len = self.len.min(o.len);
        let mut r = self.with_len(len);
        let m = len * self.ring.dim();
        ring::vsub(self.ring.padic(), &mut r.c, &o.c[..m]);
        r
    }

    pub fn neg(&self) -> Self {
        let mut r = self.clone();
        ring::vneg(self.ring.padic(), &mut r.c);
        r
    }

    pub fn scale_int(&self, s: i64) -> Self {
        let mut r = self.clone();
        let s = self.ring.padic().from_i64(s);
        ring::vscale(self.ring.padic(), &mut r.c, s);
        r
    }

    /// Multiply every coefficient by a ring element.
    pub fn scale(&self, a: &[u64]) -> Self {
        let mut r = Self::zero(&self.ring, self.len);
        for k in 0..self.len {
            let ck = self.coeff(k);
            if !ring::is_zero(ck) {
                let p = self.ring.mul(ck, a);
                r.set_coeff(k, &p);
            }
        }
        r
    }

    fn nonzero(&self, len: usize) -> Vec<usize> {
        (0..self.len.min(len)).filter(|&k| !ring::is_zero(self.coeff(k))).collect()
    }

    /// Product truncated at `len`.
    pub fn mul_len(&self, o: &Self, len: usize) -> Self {
        let r = &self.ring;
        let al = r.acc_len();
        let na = self.nonzero(len);
        let nb = o.nonzero(len);
        let mut acc = vec![0u128; len * al];
        for &i in &na {
            let a = self.coeff(i);
            for &j in &nb {
                if i + j >= len {
                    break;
                }
                r.mul_acc(a, o.coeff(j), &mut acc[(i + j) * al..(i + j + 1) * al]);
            }
        }
        let mut out = Self::zero(r, len);
        for k in 0..len {
            let d = r.dim();
            r.finish(&acc[k * al..(k + 1) * al], &mut out.c[k * d..(k + 1) * d]);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.mul_len(o, self.len.min(o.len))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(&self.ring, self.len);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Multiply by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let d = self.ring.dim();
        let mut r = Self::zero(&self.ring, self.len);
        if k < self.len {
            r.c[k * d..].copy_from_slice(&self.c[..(self.len - k) * d]);
        }
        r
    }

    /// Drop the first `k` terms and divide by `x^k`; the result has length `len - k`.
    pub fn shift_down(&self, k: usize) -> Self {
        let d = self.ring.dim();
        let k = k.min(self.len);
        USeries { ring: self.ring.clone(), len: self.len - k, c: self.c[k * d..].to_vec() }
    }

    /// Exact division by `x^k`; the result has length `len - k`.
    pub fn div_x_pow(&self, k: usize) -> Result<Self> {
        let d = self.ring.dim();
        if k > self.len || !ring::is_zero(&self.c[..k * d]) {
            return Err(Error::ExactDivisionFailure(format!("series not divisible by x^{k}")));
        }
        Ok(USeries { ring: self.ring.clone(), len: self.len - k, c: self.c[k * d..].to_vec() })
    }

    pub fn derivative(&self) -> Self {
        let mut r = Self::zero(&self.ring, self.len);
        for k in 1..self.len {
            let mut a = self.coeff(k).to_vec();
            ring::vscale(self.ring.padic(), &mut a, k as u64 % self.ring.padic().modulus());
            r.set_coeff(k - 1, &a);
        }
        r
    }

    /// `f(g)` for `g(0) = 0`, by Horner's rule.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if g.len > 0 && !ring::is_zero(g.coeff(0)) {
            return Err(Error::NonzeroConstant);
        }
        let len = self.len.min(g.len);
        let top = self.support_len().min(len);
        let mut r = Self::zero(&self.ring, len);
        for k in (0..top).rev() {
            r = r.mul_len(g, len);
            let mut c0 = r.coeff(0).to_vec();
            ring::vadd(self.ring.padic(), &mut c0, self.coeff(k));
            r.set_coeff(0, &c0);
        }
        Ok(r)
    }

    /// Multiplicative inverse when the constant term is a unit.
    pub fn unit_invert(&self) -> Result<Self> {
        let r = &self.ring;
        if self.len == 0 {
            return Ok(self.clone());
        }
        let inv0 = r.inv(self.coeff(0))?;
        let mut h = Self::zero(r, self.len);
        h.set_coeff(0, &inv0);
        let al = r.acc_len();
        let nz = self.nonzero(self.len);
        for k in 1..self.len {
            let mut acc = vec![0u128; al];
            for &i in nz.iter().filter(|&&i| i >= 1 && i <= k) {
                r.mul_acc(self.coeff(i), h.coeff(k - i), &mut acc);
            }
            let mut s = r.zero();
            r.finish(&acc, &mut s);
            let mut t = r.mul(&s, &inv0);
            ring::vneg(r.padic(), &mut t);
            h.set_coeff(k, &t);
        }
        Ok(h)
    }

    /// Compositional inverse for `f(0) = 0` with unit linear coefficient (Newton iteration).
    pub fn reversion(&self) -> Result<Self> {
        let r = &self.ring;
        if self.len < 2 {
            return Ok(self.clone());
        }
        if !ring::is_zero(self.coeff(0)) {
            return Err(Error::NonzeroConstant);
        }
        if !r.is_unit(self.coeff(1)) {
            return Err(Error::NonUnitLinearTerm);
        }
        let inv1 = r.inv(self.coeff(1))?;
        let x = Self::var(r, self.len);
        let mut g = Self::monomial(r, 1, &inv1, self.len);
        let df = self.derivative();
        let mut prec = 2usize;
        while prec < self.len {
            prec = (2 * prec).min(self.len);
            let fg = self.compose(&g)?;
            let dfg = df.compose(&g)?;
            let corr = fg.sub(&x).mul(&dfg.unit_invert()?);
            g = g.sub(&corr);
        }
        // Newton converges x-adically but the p-adic error needs extra rounds.
        for _ in 0..64 {
            let fg = self.compose(&g)?;
            if fg == x {
                return Ok(g);
            }
            let dfg = df.compose(&g)?;
            g = g.sub(&fg.sub(&x).mul(&dfg.unit_invert()?));
        }
        Err(Error::PrecisionExhausted("reversion did not converge".into()))
    }

    /// Same coefficients viewed over another ring with the same element layout.
    pub fn map_coeffs<B: CoeffRing>(&self, target: &Arc<B>, f: impl Fn(&[u64]) -> Vec<u64>) -> USeries<B> {
        let mut r = USeries::zero(target, self.len);
        for k in 0..self.len {
            let v = f(self.coeff(k));
            r.set_coeff(k, &v);
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicCtx;

    fn z(p: u64, n: u32) -> Arc<E0Ring> {
        Arc::new(E0Ring::new(PadicCtx::new(p, n).unwrap(), 1, 1).unwrap())
    }

    fn ints(s: &USeries) -> Vec<i64> {
        let ctx = *s.ring().padic();
        (0..s.len()).map(|k| ctx.signed(s.coeff(k)[0]) as i64).collect()
    }

    #[test]
    fn truncated_square() {
        let r = z(3, 4);
        let x = USeries::var(&r, 2);
        assert!(x.mul(&x).is_zero());
    }

    #[test]
    fn geometric_series() {
        let r = z(3, 4);
        let f = USeries::from_ints(&r, 8, &[1, -1]);
        assert_eq!(ints(&f.unit_invert().unwrap()), vec![1; 8]);
        let g = USeries::from_ints(&r, 8, &[1, 1]);
        let h = g.mul(&f.unit_invert().unwrap().pow(1).with_len(8));
        assert_eq!(ints(&h), vec![1, 2, 2, 2, 2, 2, 2, 2]);
    }

    #[test]
    fn compose_example() {
        let r = z(5, 6);
        let f = USeries::from_ints(&r, 6, &[0, 0, 1]);
        let g = USeries::from_ints(&r, 6, &[0, 1, 1]);
        assert_eq!(ints(&f.compose(&g).unwrap()), vec![0, 0, 1, 2, 1, 0]);
        let c = USeries::from_ints(&r, 6, &[1, 1]);
        assert_eq!(f.compose(&c), Err(Error::NonzeroConstant));
    }

    #[test]
    fn reversion_examples() {
        let r = z(5, 6);
        let f = USeries::from_ints(&r, 6, &[0, 1, 1]);
        assert_eq!(ints(&f.reversion().unwrap()), vec![0, 1, -1, 2, -5, 14]);
        let r3 = z(3, 4);
        let two_x = USeries::from_ints(&r3, 4, &[0, 2]);
        assert_eq!(two_x.reversion().unwrap().coeff(1)[0], 41);
        let bad = USeries::from_ints(&r3, 4, &[0, 3, 1]);
        assert_eq!(bad.reversion(), Err(Error::NonUnitLinearTerm));
    }

    #[test]
    fn division_by_x() {
        let r = z(3, 2);
        let f = USeries::from_ints(&r, 5, &[0, 0, 3, 1]);
        assert_eq!(ints(&f.div_x_pow(2).unwrap()), vec![3, 1, 0]);
        assert!(f.div_x_pow(3).is_err());
    }
}
