//! Counting representations of `Z_p^n` in `GL_d(F_q)` and comparing with ring ranks.
//!
//! `Φ = (Q_p/Z_p)^n` with `Φ(p^m)` its `p^m`-torsion; `q` acts by multiplication.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::glp::{build_model, GLpParams};
use crate::padic::{is_prime, vp_u128};
use crate::series::e0::PrecisionCtx;
use crate::smallrings::torus_invariant_ring;

/// Largest number of multisets [`rep_count_bruteforce`] will walk.
pub const BRUTEFORCE_LIMIT: u128 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountParams {
    pub p: u64,
    pub n: u32,
    pub q: u64,
    pub v: u32,
}

impl CountParams {
    pub fn new(p: u64, n: u32, q: u64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidInput(format!("p = {p} must be an odd prime")));
        }
        if n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        if q < 2 || q.is_multiple_of(p) {
            return Err(Error::BadParams(format!("q = {q} is not coprime to p")));
        }
        let v = vp_u128(p, (q - 1) as u128);
        if v == 0 {
            return Err(Error::BadParams(format!("v_{p}({q} - 1) = 0 is not covered")));
        }
        Ok(CountParams { p, n, q, v })
    }

    /// Smallest `M` used by the enumeration oracle for dimension `d`.
    pub fn stable_precision(&self, d: u64) -> u32 {
        let mut c = 0;
        while self.p.pow(c) < d {
            c += 1;
        }
        self.v + c + 1
    }

    fn pk(&self, k: u32) -> BigUint {
        BigUint::from(self.p).pow(k)
    }
}

/// Number of irreducible representations of dimension `p^k`.
pub fn irr_count(c: &CountParams, k: u32) -> BigUint {
    let n = c.n;
    if k == 0 {
        return c.pk(n * c.v);
    }
    (c.pk(n * (c.v + k)) - c.pk(n * (c.v + k - 1))) / c.pk(k)
}

fn binom(n: &BigUint, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - BigUint::from(i)) / BigUint::from(i + 1);
    }
    acc
}

/// Coefficient of `z^d` in `Π_k (1 - z^{p^k})^{-irr_count(k)}`.
pub fn rep_count(c: &CountParams, d: u64) -> BigUint {
    let mut series = vec![BigUint::zero(); d as usize + 1];
    series[0] = BigUint::one();
    let mut k = 0;
    while c.p.pow(k) <= d {
        let m = c.p.pow(k) as usize;
        let irr = irr_count(c, k);
        // (1 - z^m)^{-irr} = Σ_j C(irr + j - 1, j) z^{mj}
        let factor: Vec<BigUint> = (0..=d as usize / m)
            .map(|j| if j == 0 { BigUint::one() } else { binom(&(&irr + BigUint::from(j as u64) - 1u32), j as u64) })
            .collect();
        let mut next = vec![BigUint::zero(); d as usize + 1];
        for (i, a) in series.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, f) in factor.iter().enumerate() {
                if i + m * j > d as usize {
                    break;
                }
                next[i + m * j] += a * f;
            }
        }
        series = next;
        k += 1;
    }
    series.swap_remove(d as usize)
}

fn multiset_count(points: u128, d: u64) -> Option<u128> {
    let mut acc: u128 = 1;
    for i in 0..d as u128 {
        acc = acc.checked_mul(points + i)? / (i + 1);
    }
    Some(acc)
}

/// Size-`d` multisets in `(Z/p^M)^n` that multiplication by `q` maps to themselves.
pub fn rep_count_bruteforce(c: &CountParams, d: u64, m: u32) -> Result<u64> {
    if d == 0 || m == 0 {
        return Err(Error::InvalidInput("need d >= 1 and M >= 1".into()));
    }
    let pm = c.p.pow(m);
    let points = (pm as u128).checked_pow(c.n).filter(|&x| x < u32::MAX as u128);
    let total = points.and_then(|pts| multiset_count(pts, d));
    let (Some(points), Some(total)) = (points, total) else {
        return Err(Error::TooLarge("enumeration space overflows".into()));
    };
    if total > BRUTEFORCE_LIMIT {
        return Err(Error::TooLarge(format!("{total} multisets exceed the enumeration limit")));
    }
    let points = points as usize;
    let qm = c.q % pm;
    // index of q·x, x read as n base-p^M digits
    let qmap: Vec<u32> = (0..points)
        .map(|mut x| {
            let mut out = 0;
            let mut place = 1;
            for _ in 0..c.n {
                out += ((x as u64 % pm) * qm % pm) as usize * place;
                x /= pm as usize;
                place *= pm as usize;
            }
            out as u32
        })
        .collect();
    let d = d as usize;
    let count = (0..points as u32)
        .into_par_iter()
        .map(|first| {
            let mut tuple = vec![first; d];
            let mut image = vec![0u32; d];
            let mut count = 0u64;
            loop {
                for (y, &x) in image.iter_mut().zip(&tuple) {
                    *y = qmap[x as usize];
                }
                image.sort_unstable();
                if image == tuple {
                    count += 1;
                }
                // next nondecreasing tuple with fixed leading entry
                let Some(i) = (1..d).rev().find(|&i| (tuple[i] as usize) < points - 1) else {
                    break;
                };
                let nv = tuple[i] + 1;
                for t in &mut tuple[i..] {
                    *t = nv;
                }
            }
            count
        })
        .sum();
    Ok(count)
}

#[derive(Clone, Debug)]
pub struct CrossCheck {
    pub d: u64,
    pub rep_count: BigUint,
    /// Rank of `E0(BT_d)^{Σ_d}`.
    pub torus_rank: usize,
    /// `N` when `d = p`, else 0.
    pub extra_rank: usize,
}

impl CrossCheck {
    pub fn rank(&self) -> usize {
        self.torus_rank + self.extra_rank
    }

    pub fn report(&self) -> Value {
        json!({
            "d": self.d,
            "rep_count": self.rep_count.to_string(),
            "rank": self.rank(),
            "torus_rank": self.torus_rank,
            "extra_rank": self.extra_rank,
            "agree": true,
        })
    }
}

/// Compares `rep_count(d)` with the rank of the ring model for `d ≤ p`.
///
/// `ctx` sets the precision of the law; ranks do not depend on it.
pub fn hkr_rank_crosscheck(c: &CountParams, d: u64, ctx: &PrecisionCtx) -> Result<CrossCheck> {
    if d == 0 || d > c.p {
        return Err(Error::InvalidInput(format!("need 1 <= d <= p, got d = {d}")));
    }
    if ctx.p() != c.p || ctx.n != c.n as usize {
        return Err(Error::CtxMismatch);
    }
    let params = GLpParams::new(*ctx, c.q)?;
    let (torus_rank, extra_rank) = if d < c.p {
        let law = params.law()?;
        (torus_invariant_ring(d as usize, c.v, &law)?.rank(), 0)
    } else {
        let m = build_model(&params)?;
        (m.n_sigma(), m.params.big_n)
    };
    let out = CrossCheck { d, rep_count: rep_count(c, d), torus_rank, extra_rank };
    if out.rep_count != BigUint::from(out.rank()) {
        return Err(Error::Mismatch(format!("rep_count({d}) = {} but rank = {}", out.rep_count, out.rank())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c311() -> CountParams {
        CountParams::new(3, 1, 4).unwrap()
    }

    #[test]
    fn irreducibles() {
        let c = c311();
        let got: Vec<u64> = (0..3).map(|k| irr_count(&c, k).try_into().unwrap()).collect();
        assert_eq!(got, vec![3, 2, 2]);
    }

    #[test]
    fn representations() {
        let c = c311();
        let got: Vec<u64> = (1..=3).map(|d| rep_count(&c, d).try_into().unwrap()).collect();
        assert_eq!(got, vec![3, 6, 12]);
        assert_eq!(rep_count_bruteforce(&c, 3, 2).unwrap(), 12);
        assert_eq!(rep_count_bruteforce(&c, 2, 2).unwrap(), 6);
        assert_eq!(rep_count_bruteforce(&c, 1, 1).unwrap(), 3);
    }

    #[test]
    fn too_large() {
        let c = CountParams::new(3, 2, 4).unwrap();
        assert!(matches!(rep_count_bruteforce(&c, 4, 4), Err(Error::TooLarge(_))));
    }
}
