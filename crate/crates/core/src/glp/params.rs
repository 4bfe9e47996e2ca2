use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fgl::{build_ptypical, Fgl};
use crate::padic::{is_prime, vp_u128};
use crate::series::e0::PrecisionCtx;

/// Parameters `(p, n, q)` with `v = v_p(q - 1) >= 1`.
#[derive(Clone, Debug)]
pub struct GLpParams {
    /// Output precision context.
    pub ctx: PrecisionCtx,
    pub q: u64,
    pub v: u32,
    /// `N = (p^{n(v+1)} - p^{nv}) / p`.
    pub big_n: usize,
    /// `p^{nv}`, the rank of `E0(BC_{p^v})`.
    pub nr: usize,
}

/// `Some((l, r))` if `q = l^r` with `l` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let l = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut r = 0;
    let mut m = q;
    while m.is_multiple_of(l) {
        m /= l;
        r += 1;
    }
    (m == 1 && is_prime(l)).then_some((l, r))
}

impl GLpParams {
    pub fn new(ctx: PrecisionCtx, q: u64) -> Result<Self> {
        let p = ctx.p();
        if prime_power(q).is_none() {
            return Err(Error::BadParams(format!("q = {q} is not a prime power")));
        }
        if q.is_multiple_of(p) {
            return Err(Error::BadParams(format!("q = {q} is not coprime to p = {p}")));
        }
        let v = vp_u128(p, (q - 1) as u128);
        if v == 0 {
            return Err(Error::BadParams(format!("v_{p}({q} - 1) = 0")));
        }
        let n = ctx.n as u32;
        let nr = (p as usize).pow(n * v);
        let big_n = ((p as usize).pow(n * (v + 1)) - nr) / p as usize;
        Ok(GLpParams { ctx, q, v, big_n, nr })
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    pub fn n(&self) -> usize {
        self.ctx.n
    }

    /// Digits lost dividing by `α(t)` through the witness `α(t)·s = p^p`, plus slack.
    pub fn division_loss(&self) -> u32 {
        self.p() as u32 + 2
    }

    /// Working precision: output precision plus the division loss.
    pub fn working_ctx(&self) -> Result<PrecisionCtx> {
        self.ctx.with_nprec(self.ctx.nprec() + self.division_loss())
    }

    pub fn law(&self) -> Result<Fgl> {
        let w = self.working_ctx()?;
        let dx = w.dx.max((self.p() as usize).pow(self.n() as u32) + 1);
        build_ptypical(&w.with_dx(dx))
    }

    /// `C(p^{nv} + p - 1, p) + N`.
    pub fn expected_rank(&self) -> usize {
        binomial(self.nr + self.p() as usize - 1, self.p() as usize) + self.big_n
    }

    pub fn report(&self) -> Value {
        json!({
            "p": self.p(),
            "n": self.n(),
            "q": self.q,
            "v": self.v,
            "N": self.big_n,
            "nprec": self.ctx.nprec(),
            "du": self.ctx.du,
        })
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let a = GLpParams::new(PrecisionCtx::new(3, 3, 1, 1, 10).unwrap(), 4).unwrap();
        assert_eq!((a.v, a.big_n, a.nr, a.expected_rank()), (1, 2, 3, 12));
        let b = GLpParams::new(PrecisionCtx::new(3, 3, 2, 1, 10).unwrap(), 4).unwrap();
        assert_eq!((b.big_n, b.nr, b.expected_rank()), (24, 9, 189));
        assert!(GLpParams::new(PrecisionCtx::new(3, 3, 1, 1, 10).unwrap(), 5).is_err());
        assert!(GLpParams::new(PrecisionCtx::new(3, 3, 1, 1, 10).unwrap(), 6).is_err());
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(12), None);
    }
}
