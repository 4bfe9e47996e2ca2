//! The truncated coefficient ring `Z/p^N [u_1..u_{n-1}] / (u)^Du`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::padic::{PadicCtx, PadicInt};
use crate::series::ring::{self, CoeffRing};

/// Precision parameters shared by every series computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionCtx {
    pub padic: PadicCtx,
    pub n: usize,
    pub du: usize,
    pub dx: usize,
}

impl PrecisionCtx {
    pub fn new(p: u64, nprec: u32, n: usize, du: usize, dx: usize) -> Result<Self> {
        let padic = PadicCtx::new(p, nprec)?;
        if n == 0 {
            return Err(Error::InvalidInput("height must be at least 1".into()));
        }
        if du == 0 || dx == 0 {
            return Err(Error::InvalidInput("Du and Dx must be at least 1".into()));
        }
        Ok(PrecisionCtx { padic, n, du: if n == 1 { 1 } else { du }, dx })
    }

    pub fn p(&self) -> u64 {
        self.padic.p()
    }

    pub fn nprec(&self) -> u32 {
        self.padic.nprec()
    }

    pub fn with_nprec(&self, nprec: u32) -> Result<Self> {
        PrecisionCtx::new(self.p(), nprec, self.n, self.du, self.dx)
    }

    pub fn with_dx(&self, dx: usize) -> Self {
        PrecisionCtx { dx, ..*self }
    }

    /// Smallest k with `m^k` inside `(p^Nprec, u^Du)`, m the maximal ideal of E0.
    pub fn adic_depth(&self) -> usize {
        let w = self.nprec() as usize;
        if self.n == 1 {
            w
        } else {
            w + self.du - 1
        }
    }
}

#[derive(Debug)]
pub struct E0Ring {
    padic: PadicCtx,
    n: usize,
    du: usize,
    monos: Vec<Vec<u32>>,
    degrees: Vec<u32>,
    index: HashMap<Vec<u32>, usize>,
    table: Vec<(u32, u32, u32)>,
}

fn monomials(nvars: usize, du: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for deg in 0..du as u32 {
        let mut cur = vec![0u32; nvars];
        compositions(nvars, deg, 0, &mut cur, &mut out);
    }
    out
}

// Exponent vectors of fixed total degree, lexicographically descending.
fn compositions(nvars: usize, deg: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if nvars == 0 {
        if deg == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if pos == nvars - 1 {
        cur[pos] = deg;
        out.push(cur.clone());
        return;
    }
    for e in (0..=deg).rev() {
        cur[pos] = e;
        compositions(nvars, deg - e, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

impl E0Ring {
    pub fn new(padic: PadicCtx, n: usize, du: usize) -> Result<Self> {
        if padic.modulus() >= 1 << 32 {
            return Err(Error::PrecisionExhausted(format!(
                "series engine needs p^N < 2^32, got {}^{}",
                padic.p(),
                padic.nprec()
            )));
        }
        if n == 0 {
            return Err(Error::InvalidInput("height must be at least 1".into()));
        }
        let du = if n == 1 { 1 } else { du.max(1) };
        let monos = monomials(n - 1, du);
        let degrees: Vec<u32> = monos.iter().map(|m| m.iter().sum()).collect();
        let index: HashMap<Vec<u32>, usize> = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let mut table = Vec::new();
        for (i, a) in monos.iter().enumerate() {
            for (j, b) in monos.iter().enumerate() {
                if degrees[i] + degrees[j] >= du as u32 {
                    continue;
                }
                let s: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                table.push((i as u32, j as u32, index[&s] as u32));
            }
        }
        Ok(E0Ring { padic, n, du, monos, degrees, index, table })
    }

    pub fn from_ctx(ctx: &PrecisionCtx) -> Result<Self> {
        E0Ring::new(ctx.padic, ctx.n, ctx.du)
    }

    /// Same monomial layout at another p-adic precision.
    pub fn with_padic(&self, padic: PadicCtx) -> Result<Self> {
        E0Ring::new(padic, self.n, self.du)
    }

    pub fn height(&self) -> usize {
        self.n
    }

    pub fn du(&self) -> usize {
        self.du
    }

    pub fn nvars(&self) -> usize {
        self.n - 1
    }

    pub fn monos(&self) -> &[Vec<u32>] {
        &self.monos
    }

    pub fn mono_degree(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    pub fn mono_index(&self, exp: &[u32]) -> Option<usize> {
        self.index.get(exp).copied()
    }

    pub fn constant(&self, c: u64) -> Vec<u64> {
        let mut e = self.zero();
        e[0] = c % self.padic.modulus();
        e
    }

    /// The monomial `u^exp`, or zero if it is truncated away.
    pub fn u_monomial(&self, exp: &[u32]) -> Vec<u64> {
        let mut e = self.zero();
        if let Some(i) = self.mono_index(exp) {
            e[i] = 1 % self.padic.modulus();
        }
        e
    }

    /// `u_i` for `1 <= i <= n-1`; `u_n` is the constant 1.
    pub fn u_var(&self, i: usize) -> Vec<u64> {
        if i == self.n {
            return self.one();
        }
        let mut exp = vec![0u32; self.n - 1];
        exp[i - 1] = 1;
        self.u_monomial(&exp)
    }

    /// Residues reduced to this ring's precision from a ring with the same layout.
    pub fn narrow(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| x % self.padic.modulus()).collect()
    }

    /// Image in `E0/(p, u_1, ..., u_{i-1})`, as residues mod p.
    pub fn reduce_mod_ideal(&self, a: &[u64], i: usize) -> Vec<u64> {
        let p = self.padic.p();
        a.iter()
            .zip(&self.monos)
            .map(|(&c, m)| if m.iter().take(i.saturating_sub(1)).any(|&e| e > 0) { 0 } else { c % p })
            .collect()
    }

    pub fn residue(&self, a: &[u64]) -> u64 {
        a[0] % self.padic.p()
    }

    pub fn scalar(&self, a: &[u64], s: u64) -> Vec<u64> {
        let mut out = a.to_vec();
        ring::vscale(&self.padic, &mut out, s);
        out
    }

    pub fn format(&self, a: &[u64]) -> String {
        let mut parts = Vec::new();
        for (i, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut s = format!("{}", self.padic.signed(c));
            for (v, &e) in self.monos[i].iter().enumerate() {
                if e == 1 {
                    s.push_str(&format!("*u{}", v + 1));
                } else if e > 1 {
                    s.push_str(&format!("*u{}^{}", v + 1, e));
                }
            }
            parts.push(s);
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl CoeffRing for E0Ring {
    fn padic(&self) -> &PadicCtx {
        &self.padic
    }

    fn dim(&self) -> usize {
        self.monos.len()
    }

    fn acc_len(&self) -> usize {
        self.monos.len()
    }

    #[inline]
    fn mul_acc(&self, a: &[u64], b: &[u64], acc: &mut [u128]) {
        if self.monos.len() == 1 {
            acc[0] += a[0] as u128 * b[0] as u128;
            return;
        }
        for &(i, j, k) in &self.table {
            let (x, y) = (a[i as usize], b[j as usize]);
            if x != 0 && y != 0 {
                acc[k as usize] += x as u128 * y as u128;
            }
        }
    }

    #[inline]
    fn finish(&self, acc: &[u128], out: &mut [u64]) {
        for (o, &a) in out.iter_mut().zip(acc) {
            *o = self.padic.reduce_u128(a);
        }
    }

    fn one(&self) -> Vec<u64> {
        self.constant(1)
    }

    fn in_max_ideal(&self, a: &[u64]) -> bool {
        a[0].is_multiple_of(self.padic.p())
    }

    fn adic_depth(&self) -> usize {
        self.padic.nprec() as usize + self.du - 1
    }

    fn inv(&self, a: &[u64]) -> Result<Vec<u64>> {
        let c = self.padic.inv(a[0])?;
        if self.dim() == 1 {
            return Ok(vec![c]);
        }
        // a = a0 (1 + t) with t nilpotent of order < Du.
        let mut t = self.scalar(a, c);
        t[0] = 0;
        ring::vneg(&self.padic, &mut t);
        let mut sum = self.one();
        let mut term = self.one();
        for _ in 1..self.du {
            term = self.mul(&term, &t);
            ring::vadd(&self.padic, &mut sum, &term);
        }
        Ok(self.scalar(&sum, c))
    }
}

/// An element of E0 bundled with its ring.
#[derive(Clone, Debug)]
pub struct E0Elem {
    ring: Arc<E0Ring>,
    c: Vec<u64>,
}

impl E0Elem {
    pub fn new(ring: Arc<E0Ring>, c: Vec<u64>) -> Self {
        assert_eq!(c.len(), ring.dim());
        E0Elem { ring, c }
    }

    pub fn from_int(ring: Arc<E0Ring>, a: i64) -> Self {
        let c = ring.from_int(a);
        E0Elem { ring, c }
    }

    pub fn ring(&self) -> &Arc<E0Ring> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    /// Coefficient of a u-monomial as a p-adic integer.
    pub fn coeff(&self, exp: &[u32]) -> PadicInt {
        let r = self.ring.mono_index(exp).map(|i| self.c[i]).unwrap_or(0);
        self.ring.padic().elem(r)
    }

    fn check(&self, o: &E0Elem) -> Result<()> {
        if !Arc::ptr_eq(&self.ring, &o.ring) && self.ring.padic() != o.ring.padic() {
            return Err(Error::CtxMismatch);
        }
        Ok(())
    }

    pub fn add(&self, o: &E0Elem) -> Result<E0Elem> {
        self.check(o)?;
        let mut c = self.c.clone();
        ring::vadd(self.ring.padic(), &mut c, &o.c);
        Ok(E0Elem { ring: self.ring.clone(), c })
    }

    pub fn sub(&self, o: &E0Elem) -> Result<E0Elem> {
        self.check(o)?;
        let mut c = self.c.clone();
        ring::vsub(self.ring.padic(), &mut c, &o.c);
        Ok(E0Elem { ring: self.ring.clone(), c })
    }

    pub fn mul(&self, o: &E0Elem) -> Result<E0Elem> {
        self.check(o)?;
        Ok(E0Elem { ring: self.ring.clone(), c: self.ring.mul(&self.c, &o.c) })
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(&self.c)
    }

    pub fn inv(&self) -> Result<E0Elem> {
        Ok(E0Elem { ring: self.ring.clone(), c: self.ring.inv(&self.c)? })
    }

    pub fn is_zero(&self) -> bool {
        ring::is_zero(&self.c)
    }
}

impl PartialEq for E0Elem {
    fn eq(&self, o: &E0Elem) -> bool {
        self.ring.padic() == o.ring.padic() && self.c == o.c
    }
}

impl fmt::Display for E0Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ring.format(&self.c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: usize, du: usize) -> Arc<E0Ring> {
        Arc::new(E0Ring::new(PadicCtx::new(3, 5).unwrap(), n, du).unwrap())
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(ring(1, 7).dim(), 1);
        assert_eq!(ring(2, 4).dim(), 4);
        // two variables, total degree < 3
        assert_eq!(ring(3, 3).dim(), 6);
    }

    #[test]
    fn truncation_in_u() {
        let r = ring(2, 3);
        let u = r.u_var(1);
        let u2 = r.mul(&u, &u);
        assert_eq!(u2, r.u_monomial(&[2]));
        assert!(ring::is_zero(&r.mul(&u2, &u)));
    }

    #[test]
    fn unit_inverse() {
        let r = ring(3, 4);
        let mut a = r.from_int(2);
        ring::vadd(r.padic(), &mut a, &r.u_var(1));
        ring::vadd(r.padic(), &mut a, &r.scalar(&r.u_var(2), 5));
        let b = r.inv(&a).unwrap();
        assert_eq!(r.mul(&a, &b), r.one());
        assert!(r.inv(&r.u_var(1)).is_err());
    }

    #[test]
    fn u_n_is_one() {
        let r = ring(2, 3);
        assert_eq!(r.u_var(2), r.one());
    }
}
