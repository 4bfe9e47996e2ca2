//! Logarithms of p-typical laws and the series solver built on them.
//!
//! The log is `l(x) = x + Σ_I u_I / p^{|I|} · x^{p^{‖I‖}}` where `I` runs over
//! sequences in `{1..n}` and `u_I = Π_k u_{i_k}^{p^{i_1+…+i_{k-1}}}` with
//! `u_n = 1`. Coefficients are carried as numerators over a common `p^V`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::padic::PadicCtx;
use crate::series::e0::E0Ring;
use crate::series::ring::{self, CoeffRing};
use crate::series::useries::USeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LawKind {
    /// All `u_i` free.
    PTypical,
    /// `u_1 = … = u_{n-1} = 0`.
    Honda,
}

/// One sequence `I`: contributes `u^uexp / p^len` to the coefficient of `x^{p^k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogTerm {
    pub k: u32,
    pub len: u32,
    pub uexp: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogData {
    pub p: u64,
    pub n: usize,
    pub du: usize,
    pub kind: LawKind,
}

impl LogData {
    pub fn new(p: u64, n: usize, du: usize, kind: LawKind) -> Self {
        LogData { p, n, du: if n == 1 { 1 } else { du }, kind }
    }

    /// All surviving sequences with `‖I‖ <= kmax`.
    pub fn terms(&self, kmax: u32) -> Vec<LogTerm> {
        let mut out = vec![LogTerm { k: 0, len: 0, uexp: vec![0; self.n - 1] }];
        let mut cur = LogTerm { k: 0, len: 0, uexp: vec![0; self.n - 1] };
        self.extend(&mut cur, kmax, &mut out);
        out
    }

    fn extend(&self, cur: &mut LogTerm, kmax: u32, out: &mut Vec<LogTerm>) {
        let lo = if self.kind == LawKind::Honda { self.n } else { 1 };
        for i in lo..=self.n {
            if cur.k + i as u32 > kmax {
                break;
            }
            let mut next = cur.clone();
            if i < self.n {
                let e = (self.p as u128).pow(cur.k);
                let deg: u128 = next.uexp.iter().map(|&x| x as u128).sum::<u128>() + e;
                if deg >= self.du as u128 {
                    continue;
                }
                next.uexp[i - 1] += e as u32;
            }
            next.k += i as u32;
            next.len += 1;
            out.push(next.clone());
            self.extend(&mut next, kmax, out);
        }
    }

    /// Largest `k` with `p^k < len`.
    pub fn kmax_for_len(&self, len: usize) -> u32 {
        let mut k = 0;
        while (self.p as u128).pow(k + 1) < len as u128 {
            k += 1;
        }
        k
    }

    /// Denominator exponent `V = max |I|` over terms with `‖I‖ <= kmax`.
    pub fn denominator_exponent(&self, kmax: u32) -> u32 {
        self.terms(kmax).iter().map(|t| t.len).max().unwrap_or(0)
    }

    /// Numerators `p^V · l_k` for `k = 0..=kmax`, as elements of `ring`.
    pub fn numerators(&self, ring: &E0Ring, kmax: u32, v: u32) -> Result<Vec<Vec<u64>>> {
        let ctx = ring.padic();
        let mut nums = vec![ring.zero(); kmax as usize + 1];
        for t in self.terms(kmax) {
            if t.len > v {
                return Err(Error::PrecisionExhausted(format!("log term needs p^{} > p^{v}", t.len)));
            }
            let Some(idx) = ring.mono_index(&t.uexp) else { continue };
            let c = ctx.p_pow(v - t.len);
            nums[t.k as usize][idx] = ctx.add(nums[t.k as usize][idx], c);
        }
        Ok(nums)
    }

    /// Rational coefficient of `x^{p^k}` as (numerator over `p^V`, `V`).
    pub fn coefficient(&self, ring: &E0Ring, k: u32) -> Result<(Vec<u64>, u32)> {
        let v = self.denominator_exponent(k);
        let nums = self.numerators(ring, k, v)?;
        Ok((nums[k as usize].clone(), v))
    }
}

/// A wide ring at precision `W + V` together with the narrowing modulus `p^W`.
pub struct SolverSetup<A: CoeffRing> {
    pub wide: Arc<A>,
    pub narrow: PadicCtx,
    pub v: u32,
    /// `p^V l_k` for `k = 0..=kmax`, embedded in `wide`.
    pub nums: Vec<Vec<u64>>,
}

/// Solve `l(G(x)) = m·l(x) + l(c)` for `G` with `G(0) = c` up to `x^len`.
///
/// Everything runs in the wide ring; the returned series has coefficients
/// reduced to `[0, p^W)` but still lives over the wide ring.
pub fn solve_endomorphism<A: CoeffRing>(setup: &SolverSetup<A>, m: u64, c: &[u64], len: usize) -> Result<USeries<A>> {
    let r = &setup.wide;
    let ctx = *r.padic();
    let p = ctx.p();
    let nmod = setup.narrow.modulus();
    let v = setup.v;
    let kmax = setup.nums.len() - 1;
    let has_const = !ring::is_zero(c);

    let narrow = |a: &mut [u64]| a.iter_mut().for_each(|x| *x %= nmod);

    // chain[0] = G; each step appends chain[a] * chain[b]; level[k] indexes G^{p^k}.
    let mut steps: Vec<(usize, usize)> = Vec::new();
    let mut level = vec![0usize];
    for _ in 1..=kmax {
        let base = *level.last().unwrap();
        let mut prev = base;
        for _ in 1..p {
            steps.push((prev, base));
            prev = steps.len();
        }
        level.push(prev);
    }
    let nchain = steps.len() + 1;
    let mut chain: Vec<USeries<A>> = (0..nchain).map(|_| USeries::zero(r, len)).collect();

    // constant terms: G(0) = c and powers of c
    if len > 0 {
        chain[0].set_coeff(0, c);
        for (s, &(a, b)) in steps.iter().enumerate() {
            let prod = r.mul(chain[a].coeff(0), chain[b].coeff(0));
            chain[s + 1].set_coeff(0, &prod);
        }
    }

    // p^V l'(c) = Σ_k nums_k p^k c^{p^k - 1}, then l'(c)^{-1}
    let lin_inv = if has_const {
        let mut acc = setup.nums[0].clone();
        for k in 1..level.len() {
            let e = (p as u128).pow(k as u32) - 1;
            let cp = pow_elem(r.as_ref(), c, e);
            let mut t = r.mul(&setup.nums[k], &cp);
            ring::vscale(&ctx, &mut t, ctx.p_pow(k as u32));
            ring::vadd(&ctx, &mut acc, &t);
        }
        let l1 = ring::vdiv_p_pow(&ctx, &acc, v)
            .ok_or_else(|| Error::IntegralityFailure("derivative of the log is not integral".into()))?;
        Some(r.inv(&l1)?)
    } else {
        None
    };

    let al = r.acc_len();
    let d = r.dim();
    let mut acc = vec![0u128; al];
    let mut tmp = vec![0u64; d];

    let chain_coeff = |chain: &mut Vec<USeries<A>>, deg: usize, acc: &mut Vec<u128>, tmp: &mut Vec<u64>| {
        for (s, &(a, b)) in steps.iter().enumerate() {
            acc.iter_mut().for_each(|x| *x = 0);
            let lo = if has_const { 0 } else { 1 };
            let hi = if has_const { deg } else { deg - 1 };
            for i in lo..=hi {
                let ca = chain[a].coeff(i);
                if ring::is_zero(ca) {
                    continue;
                }
                r.mul_acc(ca, chain[b].coeff(deg - i), acc);
            }
            r.finish(acc, tmp);
            chain[s + 1].set_coeff(deg, tmp);
        }
    };

    for deg in 1..len {
        chain_coeff(&mut chain, deg, &mut acc, &mut tmp);
        let mut numer = r.zero();
        if let Some(j) = p_power_index(p, deg) {
            if j <= kmax {
                let mut t = setup.nums[j].clone();
                ring::vscale(&ctx, &mut t, m);
                ring::vadd(&ctx, &mut numer, &t);
            }
        }
        for (k, &lk) in level.iter().enumerate().skip(1) {
            let t = r.mul(&setup.nums[k], chain[lk].coeff(deg));
            ring::vsub(&ctx, &mut numer, &t);
        }
        let mut gd = ring::vdiv_p_pow(&ctx, &numer, v)
            .ok_or_else(|| Error::IntegralityFailure(format!("coefficient of x^{deg} is not integral")))?;
        if let Some(li) = &lin_inv {
            gd = r.mul(&gd, li);
        }
        narrow(&mut gd);
        chain[0].set_coeff(deg, &gd);
        if has_const {
            chain_coeff(&mut chain, deg, &mut acc, &mut tmp);
        }
    }
    Ok(chain.swap_remove(0))
}

fn pow_elem<A: CoeffRing>(r: &A, a: &[u64], mut e: u128) -> Vec<u64> {
    let mut result = r.one();
    let mut b = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = r.mul(&result, &b);
        }
        e >>= 1;
        if e > 0 {
            b = r.mul(&b, &b);
        }
    }
    result
}

/// `Some(j)` when `deg = p^j`.
pub fn p_power_index(p: u64, deg: usize) -> Option<usize> {
    let mut x = 1usize;
    let mut j = 0;
    while x < deg {
        x = x.checked_mul(p as usize)?;
        j += 1;
    }
    (x == deg).then_some(j)
}

/// Build a solver over E0 for series up to `x^len`, at output precision `narrow`.
pub fn e0_setup(log: &LogData, narrow: &E0Ring, len: usize) -> Result<SolverSetup<E0Ring>> {
    let kmax = log.kmax_for_len(len);
    e0_setup_k(log, narrow, kmax)
}

pub fn e0_setup_k(log: &LogData, narrow: &E0Ring, kmax: u32) -> Result<SolverSetup<E0Ring>> {
    let v = log.denominator_exponent(kmax);
    let wctx = PadicCtx::new(narrow.padic().p(), narrow.padic().nprec() + v)?;
    let wide = Arc::new(narrow.with_padic(wctx)?);
    let nums = log.numerators(&wide, kmax, v)?;
    Ok(SolverSetup { wide, narrow: *narrow.padic(), v, nums })
}

/// `[m](x)` over E0 up to `x^len` via the logarithm, with `m` reduced mod the wide modulus.
pub fn endomorphism_series(log: &LogData, narrow: &Arc<E0Ring>, m: i128, len: usize) -> Result<USeries<E0Ring>> {
    let setup = e0_setup(log, narrow, len)?;
    let mres = setup.wide.padic().from_i128(m);
    let zero = setup.wide.zero();
    let g = solve_endomorphism(&setup, mres, &zero, len)?;
    Ok(g.map_coeffs(narrow, |c| c.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn height_one_log_terms() {
        let log = LogData::new(3, 1, 1, LawKind::PTypical);
        let t = log.terms(2);
        assert_eq!(t.len(), 3);
        assert_eq!(log.denominator_exponent(2), 2);
    }

    #[test]
    fn height_two_sequences() {
        let log = LogData::new(3, 2, 100, LawKind::PTypical);
        // ‖I‖ <= 2: (), (1), (2), (1,1)
        let t = log.terms(2);
        assert_eq!(t.len(), 4);
        let t11 = t.iter().find(|t| t.len == 2).unwrap();
        assert_eq!(t11.uexp, vec![4]);
        let honda = LogData::new(3, 2, 100, LawKind::Honda);
        assert_eq!(honda.terms(4).len(), 3);
    }

    #[test]
    fn multiplicative_like_three_series() {
        // n = 1, p = 3: l(x) = x + x^3/3 + x^9/9 + …, so [3](x) ≡ x^3 mod 3
        let ring = Arc::new(E0Ring::new(PadicCtx::new(3, 4).unwrap(), 1, 1).unwrap());
        let log = LogData::new(3, 1, 1, LawKind::PTypical);
        let f = endomorphism_series(&log, &ring, 3, 12).unwrap();
        assert_eq!(f.coeff(1)[0], 3);
        for k in [2, 4, 5, 6, 7, 8] {
            assert_eq!(f.coeff(k)[0] % 3, 0, "k={k}");
        }
        assert_eq!(f.coeff(3)[0] % 3, 1);
    }

    #[test]
    fn p_powers() {
        assert_eq!(p_power_index(3, 1), Some(0));
        assert_eq!(p_power_index(3, 9), Some(2));
        assert_eq!(p_power_index(3, 6), None);
    }
}
