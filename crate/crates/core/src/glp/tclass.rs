//! The class `t` and division by `α(t)` in `D^Γ`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::glp::dmodel::{DGammaModel, DModel};
use crate::linalg;
use crate::series::e0::E0Ring;
use crate::series::ring::{self, CoeffRing};
use crate::series::tensor::TensorQuotient;
use crate::series::useries::USeries;
use crate::smallrings::torus::TorusInvariants;

pub struct TClass {
    /// `β(t)` in the torus ring.
    pub left: Vec<u64>,
    /// `α(t)` in `D^Γ`.
    pub right: Vec<u64>,
    /// `z = [p^v](x)` in `D`.
    pub z: Vec<u64>,
    /// `s ∈ D^Γ` with `α(t)·s = p^p`.
    pub witness: Vec<u64>,
    /// `v_p(det M_t)` on the `u = 0` image, `None` if singular at precision.
    pub det_mt_valuation: Option<u32>,
}

impl TClass {
    pub fn report(&self, dg: &DGammaModel) -> Value {
        let ctx = dg.base().padic();
        json!({
            "beta_t_zero": ring::is_zero(&self.left),
            "alpha_t": dg.ring().coords(&self.right).iter().map(|c| ctx.digits(c[0])).collect::<Vec<_>>(),
            "det_mt_valuation": self.det_mt_valuation,
        })
    }
}

/// `Σ_j c_j x_i^j` in a tensor quotient.
pub fn embed_in_var(t: &TensorQuotient<E0Ring>, i: usize, c: &[Vec<u64>]) -> Vec<u64> {
    let mut out = t.zero();
    let mut e = vec![0usize; t.arity()];
    for (j, cj) in c.iter().enumerate() {
        e[i] = j;
        t.set_coord(&mut out, t.index_of(&e), cj);
    }
    out
}

/// `κ(x) = ([p](x) - p x) / x^2`, so that `⟨p⟩(x) = p + x κ(x)`.
pub fn kappa_series(d: &DModel) -> Result<USeries<E0Ring>> {
    let p = d.params.p() as i128;
    let len = d.series_len() + 2;
    let mut s = d.law.endomorphism(p, len)?;
    let mut lin = s.coeff(1).to_vec();
    ring::vsub(d.base().padic(), &mut lin, &d.base().from_int(p as i64));
    if !ring::is_zero(&lin) || !ring::is_zero(s.coeff(0)) {
        return Err(Error::InvariantViolation("[p](x) does not start with p x".into()));
    }
    s.set_coeff(1, &d.base().zero());
    s.div_x_pow(2)
}

/// `t` as the pair `(Π_i [p^v](x_i), Π_k [p^v q^k](x))`.
///
/// `φ(σ)` with `φ` the elementary-symmetric form of `Π_i [p^v](x_i)` is evaluated
/// at `e_i(x, [q](x), …)` by the identity `φ(e(a_1..a_p)) = Π [p^v](a_k)`.
pub fn build_t(d: &DModel, dg: &DGammaModel, torus: &TorusInvariants) -> Result<TClass> {
    let p = d.params.p();
    let pv = (p as i128).pow(d.params.v);
    let r = d.ring();
    let ctx = *r.padic();

    let fac = torus.factor.ring();
    let f_series = d.law.endomorphism(pv, torus.factor.vanishing_degree() + 1)?;
    let f_red = fac.coords(&fac.reduce_series(&f_series));
    let mut left = torus.ring().one();
    for i in 0..p as usize {
        left = torus.ring().mul(&left, &embed_in_var(torus.ring(), i, &f_red));
    }
    if !ring::is_zero(&left) {
        return Err(Error::InvariantViolation("β(t) is nonzero".into()));
    }

    let z = d.endo(pv)?;
    let mut prod = r.one();
    let mut qk: i128 = 1;
    for _ in 0..p {
        let zk = d.endo(pv * qk)?;
        if zk != z {
            return Err(Error::InvariantViolation(format!("[q^k]([p^v](x)) differs from [p^v](x) in D (q^k = {qk})")));
        }
        prod = r.mul(&prod, &zk);
        qk *= d.params.q as i128;
    }
    if prod != r.pow(&z, p) {
        return Err(Error::InvariantViolation("α(t) differs from [p^v](x)^p".into()));
    }
    let right = dg.from_d(d, &prod)?;

    let kappa = kappa_series(d)?;
    let mut mk = r.eval_series(&kappa, &z);
    ring::vneg(&ctx, &mut mk);
    if r.mul(&z, &mk) != r.from_int(p as i64) {
        return Err(Error::WitnessNotFound("-[p^v](x)·κ([p^v](x)) differs from p in D".into()));
    }
    let witness = dg.from_d(d, &r.pow(&mk, p))?;
    let pp = dg.ring().from_int((p as i64).pow(p as u32));
    if dg.ring().mul(&right, &witness) != pp {
        return Err(Error::WitnessNotFound("α(t)·s differs from p^p".into()));
    }
    let mt = dg.ring().mult_matrix(&right);
    let m0: Vec<Vec<u64>> = mt.iter().map(|row| row.iter().map(|c| c[0]).collect()).collect();
    let det_mt_valuation = linalg::det_valuation(&ctx, &m0);
    Ok(TClass { left, right, z, witness, det_mt_valuation })
}

/// Digits of precision lost by [`divide_by_alpha_t`].
pub fn division_loss(d: &DModel) -> u32 {
    d.params.p() as u32
}

/// Solve `α(t)·w = a` in `D^Γ`. The result is exact modulo `p^{N - p}`.
pub fn divide_by_alpha_t(dg: &DGammaModel, t: &TClass, a: &[u64]) -> Result<Vec<u64>> {
    let r = dg.ring();
    let ctx = *r.padic();
    let p = ctx.p();
    let k = p as u32;
    let prod = r.mul(a, &t.witness);
    let w =
        ring::vdiv_p_pow(&ctx, &prod, k).ok_or_else(|| Error::ReductionFailure("remainder is not divisible by α(t)".into()))?;
    let mut check = r.mul(&t.right, &w);
    ring::vsub(&ctx, &mut check, a);
    if check.iter().any(|&c| ctx.valuation(c).lower() < ctx.nprec() - k) {
        return Err(Error::ReductionFailure("α(t)·w differs from the remainder".into()));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glp::dmodel::{build_d, build_d_gamma};
    use crate::glp::params::GLpParams;
    use crate::series::e0::PrecisionCtx;
    use crate::smallrings::torus::torus_invariant_ring;

    #[test]
    fn t_at_dimension_three() {
        let params = GLpParams::new(PrecisionCtx::new(3, 3, 1, 1, 10).unwrap(), 4).unwrap();
        let d = build_d(&params).unwrap();
        let dg = build_d_gamma(&d).unwrap();
        let torus = torus_invariant_ring(3, 1, &d.law).unwrap();
        let t = build_t(&d, &dg, &torus).unwrap();
        assert!(t.det_mt_valuation.is_some());
        // α(t) lies in the maximal ideal
        assert!(dg.ring().in_max_ideal(&t.right));
        let a = dg.ring().mul(&t.right, &dg.ring().gen());
        let w = divide_by_alpha_t(&dg, &t, &a).unwrap();
        let ctx = dg.base().padic();
        let m = ctx.p_pow(ctx.nprec() - 3);
        let g = dg.ring().gen();
        assert!(w.iter().zip(&g).all(|(x, y)| x % m == y % m));
    }
}
