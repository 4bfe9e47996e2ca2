//! `A[x]/(m(x))` for a monic modulus `m` over a coefficient ring `A`.
//!
//! Elements are coefficient vectors on `{1, x, …, x^{D-1}}`. The modulus is
//! expected to be a Weierstrass polynomial (`m ≡ x^D` modulo the maximal
//! ideal), which makes the quotient local with nilpotent `x` modulo the
//! maximal ideal of `A`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::padic::PadicCtx;
use crate::series::ring::{self, CoeffRing};
use crate::series::useries::USeries;

pub struct PolyQuotient<A: CoeffRing> {
    base: Arc<A>,
    deg: usize,
    /// Coefficients `m_0..m_{D-1}` of the monic modulus.
    low: Vec<Vec<u64>>,
}

impl<A: CoeffRing> PolyQuotient<A> {
    /// `modulus` lists all coefficients up to and including the leading 1.
    pub fn new(base: &Arc<A>, modulus: &[Vec<u64>]) -> Result<Self> {
        let deg = modulus.len().checked_sub(1).ok_or_else(|| Error::InvalidInput("empty modulus".into()))?;
        if deg == 0 {
            return Err(Error::InvalidInput("modulus must have positive degree".into()));
        }
        if modulus[deg] != base.one() {
            return Err(Error::InvalidInput("modulus must be monic".into()));
        }
        Ok(PolyQuotient { base: base.clone(), deg, low: modulus[..deg].to_vec() })
    }

    pub fn base(&self) -> &Arc<A> {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.deg
    }

    /// Full modulus including the leading coefficient.
    pub fn modulus(&self) -> Vec<Vec<u64>> {
        let mut m = self.low.clone();
        m.push(self.base.one());
        m
    }

    pub fn modulus_is_weierstrass(&self) -> bool {
        self.low.iter().all(|c| self.base.in_max_ideal(c))
    }

    fn bd(&self) -> usize {
        self.base.dim()
    }

    pub fn coord<'a>(&self, a: &'a [u64], i: usize) -> &'a [u64] {
        let d = self.bd();
        &a[i * d..(i + 1) * d]
    }

    pub fn coords(&self, a: &[u64]) -> Vec<Vec<u64>> {
        (0..self.deg).map(|i| self.coord(a, i).to_vec()).collect()
    }

    pub fn from_coords(&self, c: &[Vec<u64>]) -> Vec<u64> {
        let mut out = self.zero();
        let d = self.bd();
        for (i, ci) in c.iter().enumerate().take(self.deg) {
            out[i * d..(i + 1) * d].copy_from_slice(ci);
        }
        out
    }

    /// The class of the generator.
    pub fn gen(&self) -> Vec<u64> {
        self.x_pow(1)
    }

    /// Embed a base element as a constant.
    pub fn embed(&self, a: &[u64]) -> Vec<u64> {
        let mut out = self.zero();
        out[..self.bd()].copy_from_slice(a);
        out
    }

    /// Reduce a polynomial of any degree (coefficients given low to high).
    pub fn reduce_poly(&self, poly: &[Vec<u64>]) -> Vec<u64> {
        let d = self.bd();
        let mut work: Vec<Vec<u64>> = poly.to_vec();
        for k in (self.deg..work.len()).rev() {
            let c = std::mem::replace(&mut work[k], self.base.zero());
            if ring::is_zero(&c) {
                continue;
            }
            for i in 0..self.deg {
                let t = self.base.mul(&c, &self.low[i]);
                ring::vsub(self.base.padic(), &mut work[k - self.deg + i], &t);
            }
        }
        let mut out = self.zero();
        for (i, c) in work.iter().enumerate().take(self.deg) {
            out[i * d..(i + 1) * d].copy_from_slice(c);
        }
        out
    }

    /// Multiply an element by the generator.
    pub fn mul_gen(&self, a: &[u64]) -> Vec<u64> {
        let d = self.bd();
        let top = self.coord(a, self.deg - 1).to_vec();
        let mut out = self.zero();
        out[d..].copy_from_slice(&a[..(self.deg - 1) * d]);
        if !ring::is_zero(&top) {
            for i in 0..self.deg {
                let t = self.base.mul(&top, &self.low[i]);
                ring::vsub(self.base.padic(), &mut out[i * d..(i + 1) * d], &t);
            }
        }
        out
    }

    pub fn x_pow(&self, k: usize) -> Vec<u64> {
        let mut a = self.one();
        for _ in 0..k {
            a = self.mul_gen(&a);
        }
        a
    }

    /// Image of a truncated series `Σ f_k x^k` (Horner from the top).
    pub fn reduce_series(&self, f: &USeries<A>) -> Vec<u64> {
        let top = f.support_len();
        let mut acc = self.zero();
        for k in (0..top).rev() {
            acc = self.mul_gen(&acc);
            ring::vadd(self.base.padic(), &mut acc[..self.bd()], f.coeff(k));
        }
        acc
    }

    /// `f(a)` for a series `f` and an element `a`, by Horner's rule.
    pub fn eval_series(&self, f: &USeries<A>, a: &[u64]) -> Vec<u64> {
        let top = f.support_len();
        let mut acc = self.zero();
        for k in (0..top).rev() {
            acc = self.mul(&acc, a);
            ring::vadd(self.base.padic(), &mut acc[..self.bd()], f.coeff(k));
        }
        acc
    }

    /// `poly(a)` for a polynomial with base coefficients.
    pub fn eval_poly(&self, poly: &[Vec<u64>], a: &[u64]) -> Vec<u64> {
        let mut acc = self.zero();
        for c in poly.iter().rev() {
            acc = self.mul(&acc, a);
            ring::vadd(self.base.padic(), &mut acc[..self.bd()], c);
        }
        acc
    }

    pub fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut result = self.one();
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        result
    }

    /// Matrix of multiplication by `a` on the basis, column `j` is `a·x^j`.
    pub fn mult_matrix(&self, a: &[u64]) -> Vec<Vec<Vec<u64>>> {
        let mut cols = Vec::with_capacity(self.deg);
        let mut cur = a.to_vec();
        for _ in 0..self.deg {
            cols.push(self.coords(&cur));
            cur = self.mul_gen(&cur);
        }
        (0..self.deg).map(|i| (0..self.deg).map(|j| cols[j][i].clone()).collect()).collect()
    }
}

impl<A: CoeffRing> CoeffRing for PolyQuotient<A> {
    fn padic(&self) -> &PadicCtx {
        self.base.padic()
    }

    fn dim(&self) -> usize {
        self.deg * self.base.dim()
    }

    fn acc_len(&self) -> usize {
        (2 * self.deg - 1) * self.base.acc_len()
    }

    fn mul_acc(&self, a: &[u64], b: &[u64], acc: &mut [u128]) {
        let d = self.bd();
        let al = self.base.acc_len();
        let nb: Vec<usize> = (0..self.deg).filter(|&j| !ring::is_zero(&b[j * d..(j + 1) * d])).collect();
        for i in 0..self.deg {
            let ai = &a[i * d..(i + 1) * d];
            if ring::is_zero(ai) {
                continue;
            }
            for &j in &nb {
                let k = i + j;
                self.base.mul_acc(ai, &b[j * d..(j + 1) * d], &mut acc[k * al..(k + 1) * al]);
            }
        }
    }

    fn finish(&self, acc: &[u128], out: &mut [u64]) {
        let al = self.base.acc_len();
        let poly: Vec<Vec<u64>> = (0..2 * self.deg - 1)
            .map(|k| {
                let mut c = self.base.zero();
                self.base.finish(&acc[k * al..(k + 1) * al], &mut c);
                c
            })
            .collect();
        out.copy_from_slice(&self.reduce_poly(&poly));
    }

    fn one(&self) -> Vec<u64> {
        self.embed(&self.base.one())
    }

    fn in_max_ideal(&self, a: &[u64]) -> bool {
        self.base.in_max_ideal(&a[..self.bd()])
    }

    fn adic_depth(&self) -> usize {
        self.deg * self.base.adic_depth()
    }

    fn inv(&self, a: &[u64]) -> Result<Vec<u64>> {
        if !self.is_unit(a) {
            return Err(Error::NonUnit);
        }
        let b0 = self.base.inv(&a[..self.bd()])?;
        let mut b = self.embed(&b0);
        let two = self.from_int(2);
        for _ in 0..64 {
            let ab = self.mul(a, &b);
            if ab == self.one() {
                return Ok(b);
            }
            let mut corr = two.clone();
            ring::vsub(self.padic(), &mut corr, &ab);
            b = self.mul(&b, &corr);
        }
        Err(Error::PrecisionExhausted("inverse iteration did not converge".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::e0::E0Ring;

    fn z(p: u64, n: u32) -> Arc<E0Ring> {
        Arc::new(E0Ring::new(PadicCtx::new(p, n).unwrap(), 1, 1).unwrap())
    }

    #[test]
    fn reduction_of_modulus_vanishes() {
        let r = z(3, 5);
        // x^3 + 3x + 3
        let m: Vec<Vec<u64>> = vec![vec![3], vec![3], vec![0], vec![1]];
        let q = PolyQuotient::new(&r, &m).unwrap();
        assert!(q.modulus_is_weierstrass());
        assert!(ring::is_zero(&q.reduce_poly(&m)));
        let x3 = q.x_pow(3);
        let ctx = *r.padic();
        assert_eq!(q.coords(&x3), vec![vec![ctx.from_i64(-3)], vec![ctx.from_i64(-3)], vec![0]]);
    }

    #[test]
    fn inverse_in_quotient() {
        let r = z(3, 5);
        let m: Vec<Vec<u64>> = vec![vec![3], vec![3], vec![0], vec![1]];
        let q = PolyQuotient::new(&r, &m).unwrap();
        let a = q.from_coords(&[vec![2], vec![1], vec![5]]);
        let b = q.inv(&a).unwrap();
        assert_eq!(q.mul(&a, &b), q.one());
        assert_eq!(q.inv(&q.gen()), Err(Error::NonUnit));
    }

    #[test]
    fn nested_quotient() {
        let r = z(3, 4);
        let inner = Arc::new(PolyQuotient::new(&r, &[vec![3], vec![0], vec![1]]).unwrap());
        let w = inner.gen();
        let mut m0 = w.clone();
        ring::vneg(r.padic(), &mut m0);
        let outer = PolyQuotient::new(&inner, &[m0, inner.one()]).unwrap();
        // x = w, so x^2 = w^2 = -3
        let x2 = outer.x_pow(2);
        assert_eq!(outer.coord(&x2, 0), inner.from_int(-3).as_slice());
    }
}
