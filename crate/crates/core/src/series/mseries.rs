//! Truncated power series in several variables, total degree `< dx`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::series::e0::E0Ring;
use crate::series::ring::{self, CoeffRing};
use crate::series::useries::USeries;

/// Monomial layout for `arity` variables of total degree `< dx`, graded then
/// lexicographically descending.
#[derive(Debug)]
pub struct MLayout {
    arity: usize,
    dx: usize,
    monos: Vec<Vec<u32>>,
    degrees: Vec<u32>,
    keys: Vec<usize>,
    index: Vec<u32>,
}

const NO_INDEX: u32 = u32::MAX;

fn graded_monomials(arity: usize, dx: usize) -> Vec<Vec<u32>> {
    fn rec(arity: usize, deg: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == arity - 1 {
            cur[pos] = deg;
            out.push(cur.clone());
            return;
        }
        for e in (0..=deg).rev() {
            cur[pos] = e;
            rec(arity, deg - e, pos + 1, cur, out);
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![0; arity];
    for deg in 0..dx as u32 {
        rec(arity, deg, 0, &mut cur, &mut out);
    }
    out
}

impl MLayout {
    pub fn new(arity: usize, dx: usize) -> Result<Arc<Self>> {
        if arity == 0 || dx == 0 {
            return Err(Error::InvalidInput("arity and Dx must be positive".into()));
        }
        let table = (dx as u128).checked_pow(arity as u32).unwrap_or(u128::MAX);
        if table > 1 << 26 {
            return Err(Error::TooLarge(format!("{arity} variables at Dx={dx}")));
        }
        let monos = graded_monomials(arity, dx);
        let key = |m: &[u32]| m.iter().rev().fold(0usize, |acc, &e| acc * dx + e as usize);
        let keys: Vec<usize> = monos.iter().map(|m| key(m)).collect();
        let mut index = vec![NO_INDEX; table as usize];
        for (i, &k) in keys.iter().enumerate() {
            index[k] = i as u32;
        }
        let degrees = monos.iter().map(|m| m.iter().sum()).collect();
        Ok(Arc::new(MLayout { arity, dx, monos, degrees, keys, index }))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dx(&self) -> usize {
        self.dx
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn monos(&self) -> &[Vec<u32>] {
        &self.monos
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    /// Indices of the monomials of total degree `deg`.
    pub fn degree_range(&self, deg: usize) -> std::ops::Range<usize> {
        let start = self.degrees.partition_point(|&d| (d as usize) < deg);
        let end = self.degrees.partition_point(|&d| (d as usize) <= deg);
        start..end
    }

    pub fn key(&self, i: usize) -> usize {
        self.keys[i]
    }

    pub fn index_of_key(&self, key: usize) -> Option<usize> {
        self.index.get(key).and_then(|&i| (i != NO_INDEX).then_some(i as usize))
    }

    pub fn index_of(&self, exp: &[u32]) -> Option<usize> {
        if exp.len() != self.arity || exp.iter().sum::<u32>() as usize >= self.dx {
            return None;
        }
        let k = exp.iter().rev().fold(0usize, |acc, &e| acc * self.dx + e as usize);
        match self.index[k] {
            NO_INDEX => None,
            i => Some(i as usize),
        }
    }
}

pub struct MSeries<A: CoeffRing = E0Ring> {
    ring: Arc<A>,
    layout: Arc<MLayout>,
    c: Vec<u64>,
}

impl<A: CoeffRing> Clone for MSeries<A> {
    fn clone(&self) -> Self {
        MSeries { ring: self.ring.clone(), layout: self.layout.clone(), c: self.c.clone() }
    }
}

impl<A: CoeffRing> PartialEq for MSeries<A> {
    fn eq(&self, o: &Self) -> bool {
        self.layout.arity == o.layout.arity && self.layout.dx == o.layout.dx && self.c == o.c
    }
}

impl<A: CoeffRing> fmt::Debug for MSeries<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<_> = self.terms().map(|(e, c)| (e.to_vec(), c.to_vec())).collect();
        f.debug_struct("MSeries").field("arity", &self.layout.arity).field("terms", &terms).finish()
    }
}

impl<A: CoeffRing> MSeries<A> {
    pub fn zero(ring: &Arc<A>, layout: &Arc<MLayout>) -> Self {
        MSeries { ring: ring.clone(), layout: layout.clone(), c: vec![0; layout.len() * ring.dim()] }
    }

    pub fn monomial(ring: &Arc<A>, layout: &Arc<MLayout>, exp: &[u32], a: &[u64]) -> Self {
        let mut s = Self::zero(ring, layout);
        if let Some(i) = layout.index_of(exp) {
            s.set_at(i, a);
        }
        s
    }

    pub fn one(ring: &Arc<A>, layout: &Arc<MLayout>) -> Self {
        Self::monomial(ring, layout, &vec![0; layout.arity], &ring.one())
    }

    /// The variable `x_i`, zero-based.
    pub fn var(ring: &Arc<A>, layout: &Arc<MLayout>, i: usize) -> Self {
        let mut e = vec![0; layout.arity];
        e[i] = 1;
        Self::monomial(ring, layout, &e, &ring.one())
    }

    /// A univariate series placed in variable `i`.
    pub fn from_useries(f: &USeries<A>, layout: &Arc<MLayout>, i: usize) -> Self {
        let mut s = Self::zero(f.ring(), layout);
        let mut e = vec![0; layout.arity];
        for k in 0..f.len().min(layout.dx) {
            e[i] = k as u32;
            let idx = layout.index_of(&e).expect("in range");
            s.set_at(idx, f.coeff(k));
        }
        s
    }

    pub fn ring(&self) -> &Arc<A> {
        &self.ring
    }

    pub fn layout(&self) -> &Arc<MLayout> {
        &self.layout
    }

    pub fn arity(&self) -> usize {
        self.layout.arity
    }

    pub fn dx(&self) -> usize {
        self.layout.dx
    }

    pub fn at(&self, i: usize) -> &[u64] {
        let d = self.ring.dim();
        &self.c[i * d..(i + 1) * d]
    }

    pub fn set_at(&mut self, i: usize, a: &[u64]) {
        let d = self.ring.dim();
        self.c[i * d..(i + 1) * d].copy_from_slice(a);
    }

    /// Coefficient of `x^exp`; zero if truncated.
    pub fn coeff(&self, exp: &[u32]) -> Vec<u64> {
        match self.layout.index_of(exp) {
            Some(i) => self.at(i).to_vec(),
            None => self.ring.zero(),
        }
    }

    pub fn set_coeff(&mut self, exp: &[u32], a: &[u64]) -> Result<()> {
        let i = self.layout.index_of(exp).ok_or_else(|| Error::IndexOutOfRange(format!("{exp:?}")))?;
        self.set_at(i, a);
        Ok(())
    }

    /// Nonzero terms in layout order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &[u64])> + '_ {
        (0..self.layout.len()).filter_map(move |i| {
            let c = self.at(i);
            (!ring::is_zero(c)).then(|| (self.layout.monos[i].as_slice(), c))
        })
    }

    pub fn is_zero(&self) -> bool {
        ring::is_zero(&self.c)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        ring::vadd(self.ring.padic(), &mut r.c, &o.c);
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        ring::vsub(self.ring.padic(), &mut r.c, &o.c);
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

    pub fn scale(&self, a: &[u64]) -> Self {
        let mut r = Self::zero(&self.ring, &self.layout);
        for i in 0..self.layout.len() {
            let c = self.at(i);
            if !ring::is_zero(c) {
                let v = self.ring.mul(c, a);
                r.set_at(i, &v);
            }
        }
        r
    }

    fn nonzero(&self) -> Vec<usize> {
        (0..self.layout.len()).filter(|&i| !ring::is_zero(self.at(i))).collect()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let lay = &self.layout;
        let r = &self.ring;
        let al = r.acc_len();
        let dx = lay.dx as u32;
        let na = self.nonzero();
        let nb = o.nonzero();
        let mut acc = vec![0u128; lay.len() * al];
        let mut touched = vec![false; lay.len()];
        for &i in &na {
            let (di, ki, a) = (lay.degrees[i], lay.keys[i], self.at(i));
            for &j in &nb {
                if di + lay.degrees[j] >= dx {
                    break;
                }
                let k = lay.index[ki + lay.keys[j]] as usize;
                touched[k] = true;
                r.mul_acc(a, o.at(j), &mut acc[k * al..(k + 1) * al]);
            }
        }
        let mut out = Self::zero(r, lay);
        let d = r.dim();
        for k in 0..lay.len() {
            if touched[k] {
                r.finish(&acc[k * al..(k + 1) * al], &mut out.c[k * d..(k + 1) * d]);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(&self.ring, &self.layout);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        result
    }

    pub fn constant_term(&self) -> &[u64] {
        self.at(0)
    }

    /// `f(g_1, …, g_e)` where every `g_i` lives in `layout` and has zero constant term.
    pub fn substitute(&self, gs: &[MSeries<A>], layout: &Arc<MLayout>) -> Result<MSeries<A>> {
        if gs.len() != self.arity() {
            return Err(Error::InvalidInput("substitution arity mismatch".into()));
        }
        if gs.iter().any(|g| !ring::is_zero(g.constant_term())) {
            return Err(Error::NonzeroConstant);
        }
        let dx = layout.dx;
        // powers[i][k] = g_i^k, computed lazily up to the degrees needed
        let mut maxexp = vec![0u32; self.arity()];
        for (e, _) in self.terms() {
            for (m, &x) in maxexp.iter_mut().zip(e) {
                *m = (*m).max(x.min(dx as u32));
            }
        }
        let powers: Vec<Vec<MSeries<A>>> = gs
            .iter()
            .zip(&maxexp)
            .map(|(g, &m)| {
                let mut v = vec![MSeries::one(&self.ring, layout)];
                for k in 1..=m as usize {
                    let next = v[k - 1].mul(g);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = MSeries::zero(&self.ring, layout);
        for (e, c) in self.terms() {
            if e.iter().sum::<u32>() as usize >= dx {
                continue;
            }
            let mut term = MSeries::one(&self.ring, layout).scale(c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&powers[i][k as usize]);
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Restrict a series to a univariate one along `x_i` (other variables set to zero).
    pub fn restrict_to(&self, i: usize) -> USeries<A> {
        let mut f = USeries::zero(&self.ring, self.dx());
        let mut e = vec![0u32; self.arity()];
        for k in 0..self.dx() {
            e[i] = k as u32;
            let idx = self.layout.index_of(&e).expect("in range");
            f.set_coeff(k, self.at(idx));
        }
        f
    }

    /// Apply a permutation to variables: `x_i ↦ x_{perm[i]}`.
    pub fn permute(&self, perm: &[usize]) -> MSeries<A> {
        let mut out = MSeries::zero(&self.ring, &self.layout);
        let mut ne = vec![0u32; self.arity()];
        for (e, c) in self.terms() {
            for (i, &x) in e.iter().enumerate() {
                ne[perm[i]] = x;
            }
            let idx = self.layout.index_of(&ne).expect("degree preserved");
            out.set_at(idx, c);
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        let d = self.arity();
        if d < 2 {
            return true;
        }
        let swap: Vec<usize> = (0..d).map(|i| if i < 2 { 1 - i } else { i }).collect();
        let cycle: Vec<usize> = (0..d).map(|i| (i + 1) % d).collect();
        self.permute(&swap) == *self && self.permute(&cycle) == *self
    }
}

/// The k-th elementary symmetric polynomial in `layout.arity()` variables.
pub fn elementary_symmetric<A: CoeffRing>(ring: &Arc<A>, layout: &Arc<MLayout>, k: usize) -> Result<MSeries<A>> {
    let d = layout.arity();
    if k > d {
        return Err(Error::IndexOutOfRange(format!("sigma_{k} in {d} variables")));
    }
    let mut out = MSeries::zero(ring, layout);
    if k >= layout.dx() {
        return Ok(out);
    }
    for mask in 0u64..(1 << d) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let e: Vec<u32> = (0..d).map(|i| ((mask >> i) & 1) as u32).collect();
        out.set_coeff(&e, &ring.one())?;
    }
    Ok(out)
}

/// Express a symmetric series in the elementary symmetric functions.
///
/// The result `φ` has arity `d` in symbols `σ_1..σ_d`; only monomials of
/// weighted degree `Σ k β_k < dx` occur, and `φ(σ(x)) = s` exactly at
/// truncation.
pub fn symmetrize_to_elementary<A: CoeffRing>(s: &MSeries<A>) -> Result<MSeries<A>> {
    let d = s.arity();
    let lay = s.layout().clone();
    let ring = s.ring().clone();
    if !s.is_symmetric() {
        return Err(Error::NotSymmetric("not invariant under variable permutations".into()));
    }
    let sigmas: Vec<MSeries<A>> = (1..=d).map(|k| elementary_symmetric(&ring, &lay, k)).collect::<Result<_>>()?;
    let mut sigma_pows: Vec<Vec<MSeries<A>>> = sigmas.iter().map(|_| vec![MSeries::one(&ring, &lay)]).collect();
    let mut rem = s.clone();
    let mut phi = MSeries::zero(&ring, &lay);
    for i in 0..lay.len() {
        let c = rem.at(i).to_vec();
        if ring::is_zero(&c) {
            continue;
        }
        let a = lay.monos()[i].clone();
        if a.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotSymmetric(format!("leading monomial {a:?} is not a partition")));
        }
        let beta: Vec<u32> = (0..d).map(|k| a[k] - if k + 1 < d { a[k + 1] } else { 0 }).collect();
        let mut term = MSeries::one(&ring, &lay).scale(&c);
        for (k, &b) in beta.iter().enumerate() {
            while sigma_pows[k].len() <= b as usize {
                let next = sigma_pows[k].last().unwrap().mul(&sigmas[k]);
                sigma_pows[k].push(next);
            }
            if b > 0 {
                term = term.mul(&sigma_pows[k][b as usize]);
            }
        }
        rem = rem.sub(&term);
        phi.set_coeff(&beta, &c)?;
    }
    Ok(phi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymBasisKind {
    SigmaMonomial,
    OrbitSum,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymBasisIndex {
    pub d: usize,
    pub n: usize,
    pub kind: SymBasisKind,
    pub exponents: Vec<Vec<u32>>,
}

impl SymBasisIndex {
    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }
}

/// Index sets for the two standard bases of `(⊗_d R[x]/x^N)^{Σ_d}`.
///
/// Sigma monomials are ordered by total degree then lexicographically
/// descending; orbit sums are weakly increasing tuples in lexicographic order.
pub fn invariant_basis(d: usize, n: usize, kind: SymBasisKind) -> SymBasisIndex {
    let mut exps = Vec::new();
    match kind {
        SymBasisKind::SigmaMonomial => {
            if n > 0 {
                exps = graded_monomials(d, n);
            }
        }
        SymBasisKind::OrbitSum => {
            fn rec(d: usize, n: u32, lo: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
                if cur.len() == d {
                    out.push(cur.clone());
                    return;
                }
                for a in lo..n {
                    cur.push(a);
                    rec(d, n, a, cur, out);
                    cur.pop();
                }
            }
            rec(d, n as u32, 0, &mut Vec::new(), &mut exps);
        }
    }
    SymBasisIndex { d, n, kind, exponents: exps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicCtx;

    fn z() -> Arc<E0Ring> {
        Arc::new(E0Ring::new(PadicCtx::new(3, 6).unwrap(), 1, 1).unwrap())
    }

    #[test]
    fn layout_order() {
        let l = MLayout::new(2, 3).unwrap();
        assert_eq!(l.monos(), &[vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(l.index_of(&[1, 1]), Some(4));
        assert_eq!(l.index_of(&[2, 1]), None);
    }

    #[test]
    fn elementary_examples() {
        let r = z();
        let l = MLayout::new(3, 5).unwrap();
        let s3 = elementary_symmetric(&r, &l, 3).unwrap();
        assert_eq!(s3.terms().count(), 1);
        assert_eq!(s3.coeff(&[1, 1, 1]), vec![1]);
        assert!(elementary_symmetric(&r, &l, 4).is_err());
    }

    #[test]
    fn newton_identity() {
        let r = z();
        let l = MLayout::new(2, 6).unwrap();
        let x = MSeries::var(&r, &l, 0);
        let y = MSeries::var(&r, &l, 1);
        let s = x.mul(&x).add(&y.mul(&y));
        let phi = symmetrize_to_elementary(&s).unwrap();
        assert_eq!(phi.coeff(&[2, 0]), vec![1]);
        assert_eq!(phi.coeff(&[0, 1]), r.from_int(-2));
        assert_eq!(phi.terms().count(), 2);
        let asym = x.mul(&x).mul(&y);
        assert!(matches!(symmetrize_to_elementary(&asym), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn basis_counts() {
        assert_eq!(invariant_basis(3, 3, SymBasisKind::SigmaMonomial).len(), 10);
        assert_eq!(invariant_basis(3, 3, SymBasisKind::OrbitSum).len(), 10);
        assert_eq!(invariant_basis(3, 9, SymBasisKind::SigmaMonomial).len(), 165);
        assert_eq!(invariant_basis(3, 9, SymBasisKind::OrbitSum).len(), 165);
        assert_eq!(invariant_basis(1, 4, SymBasisKind::OrbitSum).len(), 4);
    }

    #[test]
    fn substitution() {
        let r = z();
        let l1 = MLayout::new(1, 6).unwrap();
        let x = MSeries::var(&r, &l1, 0);
        let f = x.mul(&x);
        let g = x.add(&x.mul(&x));
        let h = f.substitute(&[g], &l1).unwrap();
        let coeffs: Vec<u64> = (0..6).map(|k| h.coeff(&[k])[0]).collect();
        assert_eq!(coeffs, vec![0, 0, 1, 2, 1, 0]);
    }
}
