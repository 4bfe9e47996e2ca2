//! `E0(BΣ_p)` as the `Aut(C_p)`-invariants of `E0(BC_p)`, presented as `E0[[d]]/(d f(d))`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fgl::{weierstrass_prepare, Fgl};
use crate::series::json::poly_json;
use crate::series::poly::Poly;
use crate::series::ring::{self, CoeffRing};
use crate::series::useries::USeries;
use crate::smallrings::cyclic::{cyclic_ring, QuotientRing};

pub struct SigmaPModel {
    /// `E0(BC_p)` in the variable `w`.
    pub base: QuotientRing,
    /// `d = -w^{p-1}` in `base`.
    pub d_elem: Vec<u64>,
    /// `f` with `⟨p⟩(w) = f(d)`, as a series in `d`.
    pub f_series: USeries,
    /// Weierstrass polynomial of `f`; `E0(BΣ_p) = E0[d]/(d f_poly(d))`.
    pub f_poly: Poly,
    /// `tr_1^{C_p}(1) = ⟨p⟩(w)` in `base`.
    pub transfer_cp: Vec<u64>,
    /// `tr_1^{Σ_p}(1) = (p-1)! f(d)` in `base`.
    pub transfer_sigma: Vec<u64>,
}

impl SigmaPModel {
    pub fn f_degree(&self) -> usize {
        self.f_poly.len() - 1
    }

    pub fn rank(&self) -> usize {
        self.f_degree() + 1
    }

    /// `f(0)`, which should be `p`.
    pub fn f0(&self) -> &[u64] {
        self.f_series.coeff(0)
    }

    pub fn report(&self) -> Value {
        let r = self.base.base();
        json!({
            "rank": self.rank(),
            "f_degree": self.f_degree(),
            "f0": r.padic().digits(self.f0()[0]),
            "f_poly": poly_json(r, &self.f_poly, "d"),
            "basis": (0..self.rank()).map(|i| format!("d^{i}")).collect::<Vec<_>>(),
        })
    }
}

pub fn sigma_p_ring(law: &Fgl) -> Result<SigmaPModel> {
    let p = law.ctx().p();
    let pm1 = (p - 1) as usize;
    let base = cyclic_ring(p, law)?;
    let r = base.base().clone();
    let ctx = *r.padic();
    let q = base.ring().clone();
    let rank_base = base.rank();
    let len = (base.vanishing_degree() + 2).max(crate::fgl::weierstrass::required_len(r.as_ref(), rank_base) + 1);

    let bracket = law.endomorphism(p as i128, len + 1)?.div_x_pow(1)?;
    for k in 0..bracket.len() {
        if k % pm1 != 0 && !ring::is_zero(bracket.coeff(k)) {
            return Err(Error::InvariantViolation(format!("⟨p⟩(w) has a term in degree {k}, not divisible by p-1")));
        }
    }
    // f(d) with w^{(p-1)j} = (-d)^j
    let flen = bracket.len().div_ceil(pm1);
    let mut f_series = USeries::zero(&r, flen);
    for j in 0..flen {
        let mut c = bracket.coeff(j * pm1).to_vec();
        if j % 2 == 1 {
            ring::vneg(&ctx, &mut c);
        }
        f_series.set_coeff(j, &c);
    }
    if f_series.coeff(0) != r.from_int(p as i64).as_slice() {
        return Err(Error::InvariantViolation("f(0) differs from p".into()));
    }
    let wdeg = rank_base - 1;
    let wp = weierstrass_prepare(&bracket, wdeg)?;
    let mut f_poly = Vec::new();
    for (k, c) in wp.g.iter().enumerate() {
        if k % pm1 != 0 {
            if !ring::is_zero(c) {
                return Err(Error::InvariantViolation("Weierstrass factor of ⟨p⟩ is not invariant".into()));
            }
            continue;
        }
        let mut c = c.clone();
        if (k / pm1) % 2 == 1 {
            ring::vneg(&ctx, &mut c);
        }
        f_poly.push(c);
    }

    let w = base.gen();
    let mut d_elem = q.pow(&w, pm1 as u64);
    ring::vneg(&ctx, &mut d_elem);
    // d·f(d) = -w^{p-2}[p](w) vanishes in E0(BC_p)
    let fd = q.eval_series(&f_series, &d_elem);
    if !ring::is_zero(&q.mul(&d_elem, &fd)) {
        return Err(Error::InvariantViolation("d·f(d) is nonzero in E0(BC_p)".into()));
    }
    let fpd = q.eval_poly(&f_poly, &d_elem);
    if !ring::is_zero(&q.mul(&d_elem, &fpd)) {
        return Err(Error::InvariantViolation("d·f_W(d) is nonzero in E0(BC_p)".into()));
    }
    // d is fixed by the automorphisms w ↦ [k](w)
    for k in 2..p {
        let kw = q.reduce_series(&law.endomorphism(k as i128, len)?);
        let mut dk = q.pow(&kw, pm1 as u64);
        ring::vneg(&ctx, &mut dk);
        if dk != d_elem {
            return Err(Error::InvariantViolation(format!("d is not fixed by [{k}]")));
        }
    }
    let transfer_cp = base.reduce(&bracket);
    let fact: i64 = (1..p as i64).product();
    let mut transfer_sigma = fd.clone();
    ring::vscale(&ctx, &mut transfer_sigma, ctx.from_i64(fact));
    Ok(SigmaPModel { base, d_elem, f_series, f_poly, transfer_cp, transfer_sigma })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::build_ptypical;
    use crate::series::e0::PrecisionCtx;

    #[test]
    fn height_one_and_two() {
        for (n, rank) in [(1, 2), (2, 5)] {
            let law = build_ptypical(&PrecisionCtx::new(3, 4, n, 2, 12).unwrap()).unwrap();
            let s = sigma_p_ring(&law).unwrap();
            assert_eq!(s.rank(), rank);
            assert_eq!(s.f0(), law.ring().from_int(3).as_slice());
            assert_eq!(*s.f_poly.last().unwrap(), {
                let mut one = law.ring().one();
                if s.f_degree() % 2 == 1 {
                    ring::vneg(law.ring().padic(), &mut one);
                }
                one
            });
        }
    }
}
