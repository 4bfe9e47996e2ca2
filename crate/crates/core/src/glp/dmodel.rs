//! `D = E0[[x]]/g(x)` with `g = g_{v+1}/g_v`, and its invariant subring `D^Γ = E0[[y]]/h(y)`.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fgl::{pr_weierstrass, Fgl, WeierstrassFactorization};
use crate::glp::params::GLpParams;
use crate::linalg::{self, Mat};
use crate::series::e0::E0Ring;
use crate::series::json::poly_json;
use crate::series::poly::{self, Poly};
use crate::series::quotient::PolyQuotient;
use crate::series::ring::{self, CoeffRing};

pub struct DModel {
    pub params: GLpParams,
    pub law: Fgl,
    pub g_v: WeierstrassFactorization,
    pub g_v1: WeierstrassFactorization,
    /// `g = g_{v+1}/g_v`, monic of degree `Np`.
    pub g: Poly,
    ring: Arc<PolyQuotient<E0Ring>>,
    pub x: Vec<u64>,
    pub y: Vec<u64>,
    /// Inverse of the matrix whose column `i + p j` is `x^i y^j`.
    basis_inv: Mat,
}

impl DModel {
    pub fn ring(&self) -> &Arc<PolyQuotient<E0Ring>> {
        &self.ring
    }

    pub fn base(&self) -> &Arc<E0Ring> {
        self.ring.base()
    }

    pub fn rank(&self) -> usize {
        self.ring.degree()
    }

    /// Series must be known below this degree to reduce into `D` exactly.
    pub fn series_len(&self) -> usize {
        self.rank() * self.base().adic_depth() + 1
    }

    /// `[m](x)` as an element of `D`.
    pub fn endo(&self, m: i128) -> Result<Vec<u64>> {
        let s = self.law.endomorphism(m, self.series_len())?;
        Ok(self.ring.reduce_series(&s))
    }

    /// Coordinates on `{x^i y^j}`, indexed `i + p j`.
    pub fn s_coords(&self, a: &[u64]) -> Vec<Vec<u64>> {
        linalg::mat_vec(self.base().as_ref(), &self.basis_inv, &self.ring.coords(a))
    }

    /// `Σ_j c_j y^j` if `a` has no `x^i y^j` component with `i > 0`.
    pub fn y_coords(&self, a: &[u64]) -> Option<Vec<Vec<u64>>> {
        let p = self.params.p() as usize;
        let c = self.s_coords(a);
        for (k, ck) in c.iter().enumerate() {
            if k % p != 0 && !ring::is_zero(ck) {
                return None;
            }
        }
        Some(c.into_iter().step_by(p).collect())
    }

    pub fn report(&self) -> Value {
        json!({
            "deg_g": self.g.len() - 1,
            "rank": self.rank(),
            "deg_g_v": self.g_v.degree,
            "deg_g_v1": self.g_v1.degree,
            "g": poly_json(self.base(), &self.g, "x"),
        })
    }
}

pub fn build_d(params: &GLpParams) -> Result<DModel> {
    let law = params.law()?;
    let p = params.p();
    let v = params.v;
    let g_v = pr_weierstrass(&law, v)?;
    let g_v1 = pr_weierstrass(&law, v + 1)?;
    let (g, rem) = poly::divrem_monic(law.ring().as_ref(), &g_v1.g, &g_v.g)?;
    if !poly::is_zero(&rem) {
        return Err(Error::ExactDivisionFailure("g_v does not divide g_{v+1} at this truncation".into()));
    }
    let base = law.ring().clone();
    let np = params.big_n * p as usize;
    if g.len() != np + 1 {
        return Err(Error::InvariantViolation(format!("deg g = {}, expected {np}", g.len() - 1)));
    }
    if g[..np].iter().any(|c| !base.in_max_ideal(c)) {
        return Err(Error::InvariantViolation("g is not congruent to x^{Np} mod the maximal ideal".into()));
    }
    if base.padic().valuation(g[0][0]).finite() != Some(1) {
        return Err(Error::InvariantViolation("v_p(g(0)) differs from 1".into()));
    }
    let ring = Arc::new(PolyQuotient::new(&base, &g)?);
    let mut d = DModel {
        params: params.clone(),
        law,
        g_v,
        g_v1,
        g,
        x: ring.gen(),
        y: ring.one(),
        ring: ring.clone(),
        basis_inv: Vec::new(),
    };
    let pv = (p as i128).pow(v);
    let mut y = ring.one();
    let mut y2 = ring.one();
    let mut qk: i128 = 1;
    for k in 0..p as i128 {
        y = ring.mul(&y, &d.endo(1 + k * pv)?);
        y2 = ring.mul(&y2, &d.endo(qk)?);
        qk *= params.q as i128;
    }
    if y != y2 {
        return Err(Error::InvariantViolation("Π[1+kp^v](x) differs from Π[q^k](x) in D".into()));
    }
    d.y = y;
    // columns x^i y^j, i < p, j < N
    let mut cols = Vec::with_capacity(np);
    let mut yj = ring.one();
    for _ in 0..params.big_n {
        let mut xi = yj.clone();
        for _ in 0..p {
            cols.push(ring.coords(&xi));
            xi = ring.mul_gen(&xi);
        }
        yj = ring.mul(&yj, &d.y);
    }
    let m: Mat = (0..np).map(|i| (0..np).map(|j| cols[j][i].clone()).collect()).collect();
    d.basis_inv = linalg::local_inverse(base.as_ref(), &m)
        .map_err(|e| Error::BasisFailure(format!("{{x^i y^j}} is not a basis of D: {e}")))?;
    Ok(d)
}

pub struct DGammaModel {
    /// Monic `h` of degree `N`, low coefficients first.
    pub h: Poly,
    ring: Arc<PolyQuotient<E0Ring>>,
}

impl DGammaModel {
    pub fn ring(&self) -> &Arc<PolyQuotient<E0Ring>> {
        &self.ring
    }

    pub fn base(&self) -> &Arc<E0Ring> {
        self.ring.base()
    }

    pub fn rank(&self) -> usize {
        self.ring.degree()
    }

    /// `Σ c_j y^j ↦ Σ c_j y^j` in `D`.
    pub fn lift_to_d(&self, d: &DModel, a: &[u64]) -> Vec<u64> {
        d.ring().eval_poly(&self.ring.coords(a), &d.y)
    }

    /// Re-express an element of `D` in powers of `y`.
    pub fn from_d(&self, d: &DModel, a: &[u64]) -> Result<Vec<u64>> {
        let c = d.y_coords(a).ok_or_else(|| Error::NotInGammaInvariants("element has x^i y^j terms with i > 0".into()))?;
        Ok(self.ring.from_coords(&c))
    }

    pub fn report(&self) -> Value {
        let ctx = self.base().padic();
        json!({
            "deg_h": self.h.len() - 1,
            "h": poly_json(self.base(), &self.h, "y"),
            "h_digits": self.h.iter().map(|c| ctx.digits(c[0])).collect::<Vec<_>>(),
        })
    }
}

pub fn build_d_gamma(d: &DModel) -> Result<DGammaModel> {
    let r = d.ring();
    let base = d.base();
    let big_n = d.params.big_n;
    let yn = r.pow(&d.y, big_n as u64);
    let a = d.y_coords(&yn).ok_or_else(|| Error::InvariantViolation("y^N has x-components in D".into()))?;
    let mut h: Poly = a
        .iter()
        .map(|c| {
            let mut c = c.clone();
            ring::vneg(base.padic(), &mut c);
            c
        })
        .collect();
    h.push(base.one());
    if h[..big_n].iter().any(|c| !base.in_max_ideal(c)) {
        return Err(Error::InvariantViolation("h is not congruent to y^N mod the maximal ideal".into()));
    }
    if base.padic().valuation(h[0][0]).finite() != Some(1) {
        return Err(Error::InvariantViolation("v_p(h(0)) differs from 1".into()));
    }
    let ring = Arc::new(PolyQuotient::new(base, &h)?);
    Ok(DGammaModel { h, ring })
}

/// `α(σ_i) = e_i(x, [q](x), …, [q^{p-1}](x))` in `D^Γ`, for `i = 1..=p`.
pub fn alpha_of_sigmas(d: &DModel, dg: &DGammaModel) -> Result<Vec<Vec<u64>>> {
    let r = d.ring();
    let p = d.params.p() as usize;
    let mut e = vec![r.zero(); p + 1];
    e[0] = r.one();
    let mut qk: i128 = 1;
    for _ in 0..p {
        let a = d.endo(qk)?;
        for j in (1..=p).rev() {
            let t = r.mul(&e[j - 1], &a);
            ring::vadd(r.padic(), &mut e[j], &t);
        }
        qk *= d.params.q as i128;
    }
    e[1..]
        .iter()
        .enumerate()
        .map(|(i, s)| {
            dg.from_d(d, s).map_err(|_| Error::NotInGammaInvariants(format!("α(σ_{}) is not a polynomial in y", i + 1)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::e0::PrecisionCtx;

    #[test]
    fn dimension_three_chain() {
        let params = GLpParams::new(PrecisionCtx::new(3, 3, 1, 1, 10).unwrap(), 4).unwrap();
        let d = build_d(&params).unwrap();
        assert_eq!(d.g.len() - 1, 6);
        let dg = build_d_gamma(&d).unwrap();
        assert_eq!(dg.rank(), 2);
        // h ≡ y^2 mod 3
        assert!(dg.h[..2].iter().all(|c| c[0] % 3 == 0));
        let a = alpha_of_sigmas(&d, &dg).unwrap();
        assert_eq!(a[2], dg.ring().gen());
        assert_eq!(dg.lift_to_d(&d, &a[2]), d.y);
    }
}
