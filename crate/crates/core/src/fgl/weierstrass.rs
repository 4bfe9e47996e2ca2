//! Weierstrass preparation `f = u·g` over a complete local coefficient ring.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fgl::law::{Fgl, Height};
use crate::series::e0::E0Ring;
use crate::series::poly::{self, Poly};
use crate::series::ring::{self, CoeffRing};
use crate::series::useries::USeries;

pub struct WeierstrassFactorization<A: CoeffRing = E0Ring> {
    pub degree: usize,
    /// Monic, `degree + 1` coefficients.
    pub g: Poly,
    /// Unit factor, valid up to its length.
    pub u: USeries<A>,
}

impl<A: CoeffRing> Clone for WeierstrassFactorization<A> {
    fn clone(&self) -> Self {
        WeierstrassFactorization { degree: self.degree, g: self.g.clone(), u: self.u.clone() }
    }
}

impl<A: CoeffRing> std::fmt::Debug for WeierstrassFactorization<A> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WeierstrassFactorization").field("degree", &self.degree).field("g", &self.g).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrepMethod {
    /// Solve `x^D = q f + r` by fixed-point iteration on `q`.
    Division,
    /// Lift `(u, g)` from `(τ f, x^D)` by successive corrections.
    Hensel,
}

/// Index of the first unit coefficient.
pub fn weierstrass_degree<A: CoeffRing>(f: &USeries<A>) -> Option<usize> {
    (0..f.len()).find(|&k| f.ring().is_unit(f.coeff(k)))
}

/// Length of `f` needed to prepare a degree-`d` series exactly.
pub fn required_len<A: CoeffRing>(ring: &A, d: usize) -> usize {
    d * (ring.adic_depth() + 2)
}

pub fn weierstrass_prepare<A: CoeffRing>(f: &USeries<A>, d: usize) -> Result<WeierstrassFactorization<A>> {
    weierstrass_prepare_with(f, d, PrepMethod::Hensel)
}

pub fn weierstrass_prepare_with<A: CoeffRing>(
    f: &USeries<A>,
    d: usize,
    method: PrepMethod,
) -> Result<WeierstrassFactorization<A>> {
    let r = f.ring().clone();
    match weierstrass_degree(f) {
        Some(k) if k == d => {}
        Some(k) => return Err(Error::NotWeierstrass(format!("first unit coefficient at degree {k}, expected {d}"))),
        None => return Err(Error::NotWeierstrass("no unit coefficient below truncation".into())),
    }
    let k = r.adic_depth();
    let x = f.len();
    if x < d * (k + 2) {
        return Err(Error::PrecisionExhausted(format!("need {} terms to prepare degree {d}, have {x}", d * (k + 2))));
    }
    let valid = x - d * (k + 1);
    let (g, u) = match method {
        PrepMethod::Division => by_division(&r, f, d, k)?,
        PrepMethod::Hensel => by_hensel(&r, f, d, k)?,
    };
    Ok(WeierstrassFactorization { degree: d, g, u: u.with_len(valid) })
}

fn low_part<A: CoeffRing>(f: &USeries<A>, d: usize) -> Poly {
    (0..d.min(f.len())).map(|i| f.coeff(i).to_vec()).collect()
}

fn poly_series<A: CoeffRing>(r: &Arc<A>, p: &[Vec<u64>], len: usize) -> USeries<A> {
    USeries::from_coeffs(r, len, p)
}

fn tau<A: CoeffRing>(f: &USeries<A>, d: usize) -> USeries<A> {
    f.shift_down(d)
}

fn by_division<A: CoeffRing>(r: &Arc<A>, f: &USeries<A>, d: usize, k: usize) -> Result<(Poly, USeries<A>)> {
    let x = f.len();
    let flow = poly_series(r, &low_part(f, d), x);
    let finv = tau(f, d).unit_invert()?;
    let xd = USeries::monomial(r, d, &r.one(), x);
    let mut q = USeries::zero(r, x - d);
    for _ in 0..k + 8 {
        let t = xd.sub(&q.with_len(x).mul(&flow));
        let next = finv.mul(&tau(&t, d));
        if next == q {
            break;
        }
        q = next;
    }
    let qf = q.with_len(x).mul(&flow);
    let mut g: Poly = low_part(&qf, d);
    g.push(r.one());
    let u = q.unit_invert()?;
    Ok((g, u))
}

fn by_hensel<A: CoeffRing>(r: &Arc<A>, f: &USeries<A>, d: usize, k: usize) -> Result<(Poly, USeries<A>)> {
    let x = f.len();
    let mut g: Poly = vec![r.zero(); d];
    g.push(r.one());
    let mut u = tau(f, d).with_len(x);
    for _ in 0..k + 8 {
        let e = f.sub(&u.mul(&poly_series(r, &g, x)));
        if e.is_zero() {
            break;
        }
        let e1 = e.mul(&u.unit_invert()?);
        let dg = low_part(&e1, d);
        let du = u.mul(&tau(&e1, d).with_len(x));
        g = poly::add(r.as_ref(), &g, &dg);
        u = u.add(&du);
    }
    Ok((g, u))
}

/// `f - u·g` over the valid length of `u`.
pub fn residual<A: CoeffRing>(f: &USeries<A>, w: &WeierstrassFactorization<A>) -> USeries<A> {
    let len = w.u.len();
    let g = USeries::from_coeffs(f.ring(), len, &w.g);
    f.with_len(len).sub(&w.u.mul(&g))
}

/// The Weierstrass polynomial `g_r` of `[p^r](x)`, of degree `p^{nr}`.
pub fn pr_weierstrass(law: &Fgl, r: u32) -> Result<WeierstrassFactorization> {
    let n = match law.height()? {
        Height::Finite(n) => n,
        Height::InfiniteAtPrecision => return Err(Error::PrecisionExhausted("height not detected".into())),
    };
    let p = law.ctx().p();
    let d = (p as usize).pow((n as u32) * r);
    let len = required_len(law.ring().as_ref(), d).max(d + 1);
    let m = (p as i128).pow(r);
    let f = law.endomorphism(m, len)?;
    weierstrass_prepare(&f, d)
}

/// Exact division check `a | b` for monic polynomials.
pub fn divides<A: CoeffRing>(r: &A, a: &[Vec<u64>], b: &[Vec<u64>]) -> Result<(Poly, bool)> {
    let (q, rem) = poly::divrem_monic(r, b, a)?;
    Ok((q, poly::is_zero(&rem)))
}

/// Constant term valuation helper used in reports.
pub fn constant_valuation(ring: &E0Ring, g: &[Vec<u64>]) -> Option<u32> {
    ring::vvaluation(ring.padic(), &g[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::law::build_honda;
    use crate::padic::PadicCtx;
    use crate::series::e0::PrecisionCtx;

    fn z(p: u64, n: u32) -> Arc<E0Ring> {
        Arc::new(E0Ring::new(PadicCtx::new(p, n).unwrap(), 1, 1).unwrap())
    }

    #[test]
    fn polynomial_is_its_own_factor() {
        let r = z(3, 4);
        let f = USeries::from_ints(&r, 30, &[3, 1]);
        let w = weierstrass_prepare(&f, 1).unwrap();
        assert_eq!(w.g, vec![r.from_int(3), r.one()]);
        assert_eq!(w.u, USeries::one(&r, w.u.len()));
    }

    #[test]
    fn cyclotomic_like() {
        // (1+x)^3 - 1 = 3x + 3x^2 + x^3
        let r = z(3, 4);
        let f = USeries::from_ints(&r, 40, &[0, 3, 3, 1]);
        let w = weierstrass_prepare_with(&f, 3, PrepMethod::Division).unwrap();
        assert_eq!(w.g, poly::from_ints(r.as_ref(), &[0, 3, 3, 1]));
    }

    #[test]
    fn not_weierstrass() {
        let r = z(3, 4);
        let f = USeries::from_ints(&r, 30, &[3, 3, 3]);
        assert!(matches!(weierstrass_prepare(&f, 1), Err(Error::NotWeierstrass(_))));
    }

    #[test]
    fn honda_three_series() {
        let c = PrecisionCtx::new(3, 4, 1, 1, 20).unwrap();
        let law = build_honda(&c).unwrap();
        let w = pr_weierstrass(&law, 1).unwrap();
        assert_eq!(w.degree, 3);
        let ctx = c.padic;
        assert_eq!(ctx.valuation(w.g[0][0]).finite(), None);
        // [3](x) has no constant term, so g_1 = x·(monic quadratic)
        assert_eq!(ctx.valuation(w.g[1][0]).finite(), Some(1));
        let a = weierstrass_prepare_with(&law.endomorphism(3, 30).unwrap(), 3, PrepMethod::Division);
        assert_eq!(a.unwrap().g, w.g);
    }
}
