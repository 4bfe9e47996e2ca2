//! `A[x_1..x_k]/(m_1(x_1), …, m_k(x_k))` for monic moduli over a common base.
//!
//! Coordinates are indexed by exponent vectors `e` with `e_i < deg m_i`, in
//! mixed radix with `x_1` least significant.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::padic::PadicCtx;
use crate::series::poly::Poly;
use crate::series::ring::{self, CoeffRing};

pub struct TensorQuotient<A: CoeffRing> {
    base: Arc<A>,
    degs: Vec<usize>,
    /// Low coefficients of each monic modulus.
    low: Vec<Poly>,
    /// Strides of the coordinate index and of the accumulator index.
    stride: Vec<usize>,
    acc_stride: Vec<usize>,
    size: usize,
    acc_size: usize,
}

impl<A: CoeffRing> TensorQuotient<A> {
    pub fn new(base: &Arc<A>, moduli: &[Poly]) -> Result<Self> {
        let mut degs = Vec::new();
        let mut low = Vec::new();
        for m in moduli {
            let d = m
                .len()
                .checked_sub(1)
                .filter(|&d| d > 0)
                .ok_or_else(|| Error::InvalidInput("modulus must have positive degree".into()))?;
            if m[d] != base.one() {
                return Err(Error::InvalidInput("modulus must be monic".into()));
            }
            degs.push(d);
            low.push(m[..d].to_vec());
        }
        let mut stride = Vec::new();
        let mut acc_stride = Vec::new();
        let (mut s, mut t) = (1usize, 1usize);
        for &d in &degs {
            stride.push(s);
            acc_stride.push(t);
            s = s.checked_mul(d).ok_or_else(|| Error::TooLarge("tensor rank overflow".into()))?;
            t = t.checked_mul(2 * d - 1).ok_or_else(|| Error::TooLarge("tensor rank overflow".into()))?;
        }
        if s.saturating_mul(base.dim()) > 1 << 24 {
            return Err(Error::TooLarge(format!("tensor rank {s} too large")));
        }
        Ok(TensorQuotient { base: base.clone(), degs, low, stride, acc_stride, size: s, acc_size: t })
    }

    pub fn base(&self) -> &Arc<A> {
        &self.base
    }

    pub fn arity(&self) -> usize {
        self.degs.len()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degs
    }

    /// Number of basis monomials.
    pub fn rank(&self) -> usize {
        self.size
    }

    pub fn index_of(&self, e: &[usize]) -> usize {
        e.iter().zip(&self.stride).map(|(a, s)| a * s).sum()
    }

    pub fn exponent(&self, mut idx: usize) -> Vec<usize> {
        self.degs
            .iter()
            .map(|&d| {
                let e = idx % d;
                idx /= d;
                e
            })
            .collect()
    }

    pub fn coord<'a>(&self, a: &'a [u64], idx: usize) -> &'a [u64] {
        let d = self.base.dim();
        &a[idx * d..(idx + 1) * d]
    }

    pub fn set_coord(&self, a: &mut [u64], idx: usize, c: &[u64]) {
        let d = self.base.dim();
        a[idx * d..(idx + 1) * d].copy_from_slice(c);
    }

    /// The class of `x_i` (0-based).
    pub fn var(&self, i: usize) -> Vec<u64> {
        let mut e = vec![0usize; self.arity()];
        e[i] = 1;
        self.monomial(&e)
    }

    /// `x^e` for arbitrary exponents, reduced.
    pub fn monomial(&self, e: &[usize]) -> Vec<u64> {
        let mut out = self.one();
        for (i, &k) in e.iter().enumerate() {
            for _ in 0..k {
                out = self.mul_var(&out, i);
            }
        }
        out
    }

    pub fn embed(&self, a: &[u64]) -> Vec<u64> {
        let mut out = self.zero();
        out[..self.base.dim()].copy_from_slice(a);
        out
    }

    /// Multiply by `x_i`.
    pub fn mul_var(&self, a: &[u64], i: usize) -> Vec<u64> {
        let bd = self.base.dim();
        let ctx = *self.base.padic();
        let d = self.degs[i];
        let mut out = self.zero();
        for idx in 0..self.size {
            let c = self.coord(a, idx);
            if ring::is_zero(c) {
                continue;
            }
            let ei = (idx / self.stride[i]) % d;
            if ei + 1 < d {
                let t = idx + self.stride[i];
                ring::vadd(&ctx, &mut out[t * bd..(t + 1) * bd], c);
            } else {
                let rest = idx - ei * self.stride[i];
                for (k, m) in self.low[i].iter().enumerate() {
                    let t = rest + k * self.stride[i];
                    let prod = self.base.mul(c, m);
                    ring::vsub(&ctx, &mut out[t * bd..(t + 1) * bd], &prod);
                }
            }
        }
        out
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

    /// Apply a permutation of the variables (all moduli must agree on permuted slots).
    pub fn permute(&self, a: &[u64], perm: &[usize]) -> Vec<u64> {
        let mut out = self.zero();
        for idx in 0..self.size {
            let c = self.coord(a, idx);
            if ring::is_zero(c) {
                continue;
            }
            let e = self.exponent(idx);
            let mut f = vec![0usize; e.len()];
            for (i, &k) in e.iter().enumerate() {
                f[perm[i]] = k;
            }
            self.set_coord(&mut out, self.index_of(&f), c);
        }
        out
    }
}

impl<A: CoeffRing> CoeffRing for TensorQuotient<A> {
    fn padic(&self) -> &PadicCtx {
        self.base.padic()
    }

    fn dim(&self) -> usize {
        self.size * self.base.dim()
    }

    fn acc_len(&self) -> usize {
        self.acc_size * self.base.acc_len()
    }

    fn mul_acc(&self, a: &[u64], b: &[u64], acc: &mut [u128]) {
        let al = self.base.acc_len();
        let spread = |idx: usize| -> usize {
            let mut t = 0;
            for (i, &d) in self.degs.iter().enumerate() {
                t += ((idx / self.stride[i]) % d) * self.acc_stride[i];
            }
            t
        };
        let nb: Vec<(usize, usize)> =
            (0..self.size).filter(|&j| !ring::is_zero(self.coord(b, j))).map(|j| (j, spread(j))).collect();
        for i in 0..self.size {
            let ai = self.coord(a, i);
            if ring::is_zero(ai) {
                continue;
            }
            let si = spread(i);
            for &(j, sj) in &nb {
                let k = si + sj;
                self.base.mul_acc(ai, self.coord(b, j), &mut acc[k * al..(k + 1) * al]);
            }
        }
    }

    fn finish(&self, acc: &[u128], out: &mut [u64]) {
        let al = self.base.acc_len();
        let bd = self.base.dim();
        let ctx = *self.base.padic();
        let mut work: Vec<Vec<u64>> = (0..self.acc_size)
            .map(|k| {
                let mut c = self.base.zero();
                self.base.finish(&acc[k * al..(k + 1) * al], &mut c);
                c
            })
            .collect();
        // reduce each variable from its top exponent down, in the accumulator layout
        for (i, &d) in self.degs.iter().enumerate() {
            let s = self.acc_stride[i];
            let w = 2 * d - 1;
            for k in 0..self.acc_size {
                let e = (k / s) % w;
                if e != 0 {
                    continue;
                }
                for top in (d..w).rev() {
                    let src = k + top * s;
                    let c = std::mem::replace(&mut work[src], self.base.zero());
                    if ring::is_zero(&c) {
                        continue;
                    }
                    for (j, m) in self.low[i].iter().enumerate() {
                        let t = self.base.mul(&c, m);
                        ring::vsub(&ctx, &mut work[k + (top - d + j) * s], &t);
                    }
                }
            }
        }
        for idx in 0..self.size {
            let mut k = 0;
            for (i, &d) in self.degs.iter().enumerate() {
                k += ((idx / self.stride[i]) % d) * self.acc_stride[i];
            }
            out[idx * bd..(idx + 1) * bd].copy_from_slice(&work[k]);
        }
    }

    fn one(&self) -> Vec<u64> {
        self.embed(&self.base.one())
    }

    fn in_max_ideal(&self, a: &[u64]) -> bool {
        self.base.in_max_ideal(&a[..self.base.dim()])
    }

    fn adic_depth(&self) -> usize {
        self.degs.iter().sum::<usize>() * self.base.adic_depth()
    }

    fn inv(&self, a: &[u64]) -> Result<Vec<u64>> {
        if !self.is_unit(a) {
            return Err(Error::NonUnit);
        }
        // a = c(1 - n) with n nilpotent: a^{-1} = c^{-1} Σ n^k
        let c = self.base.inv(&a[..self.base.dim()])?;
        let ce = self.embed(&c);
        let mut nil = self.mul(a, &ce);
        ring::vneg(self.padic(), &mut nil);
        ring::vadd(self.padic(), &mut nil[..self.base.dim()], &self.base.one());
        let mut sum = self.one();
        let mut term = self.one();
        for _ in 0..self.adic_depth() + 1 {
            term = self.mul(&term, &nil);
            if ring::is_zero(&term) {
                break;
            }
            ring::vadd(self.padic(), &mut sum, &term);
        }
        Ok(self.mul(&sum, &ce))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::e0::E0Ring;
    use crate::series::poly;
    use crate::series::quotient::PolyQuotient;

    #[test]
    fn one_variable_matches_poly_quotient() {
        let base = Arc::new(E0Ring::new(PadicCtx::new(3, 4).unwrap(), 1, 1).unwrap());
        let m = poly::from_ints(base.as_ref(), &[3, 0, 6, 1]);
        let t = TensorQuotient::new(&base, std::slice::from_ref(&m)).unwrap();
        let q = PolyQuotient::new(&base, &m).unwrap();
        let a = t.pow(&t.var(0), 7);
        assert_eq!(a, q.x_pow(7));
        let u = t.embed(&base.from_int(2));
        assert_eq!(t.mul(&t.inv(&u).unwrap(), &u), t.one());
    }

    #[test]
    fn two_variables_commute() {
        let base = Arc::new(E0Ring::new(PadicCtx::new(3, 4).unwrap(), 1, 1).unwrap());
        let m1 = poly::from_ints(base.as_ref(), &[3, 1, 1]);
        let m2 = poly::from_ints(base.as_ref(), &[0, 3, 0, 1]);
        let t = TensorQuotient::new(&base, &[m1, m2]).unwrap();
        let a = t.var(0);
        let b = t.var(1);
        let s = {
            let mut s = a.clone();
            ring::vadd(t.padic(), &mut s, &b);
            s
        };
        let lhs = t.pow(&s, 5);
        let mut rhs = t.zero();
        for k in 0..=5u64 {
            let binom = [1, 5, 10, 10, 5, 1][k as usize];
            let term = t.mul(&t.pow(&a, k), &t.pow(&b, 5 - k));
            ring::vaxpy(t.padic(), &mut rhs, binom, &term);
        }
        assert_eq!(lhs, rhs);
        assert_eq!(t.mul(&a, &b), t.monomial(&[1, 1]));
    }
}
