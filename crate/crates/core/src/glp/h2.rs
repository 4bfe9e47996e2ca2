//! The two-variable series `h(d, y)` with `h(-w^{p-1}, Π_k (x +_F [k](w))) = [p^v](x)`.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fgl::log::{e0_setup_k, endomorphism_series, solve_endomorphism, SolverSetup};
use crate::fgl::weierstrass_prepare;
use crate::glp::dmodel::DModel;
use crate::linalg::{self, Mat};
use crate::padic::PadicCtx;
use crate::series::e0::E0Ring;
use crate::series::json::poly_json;
use crate::series::poly::{self, Poly};
use crate::series::quotient::PolyQuotient;
use crate::series::ring::{self, CoeffRing};
use crate::series::useries::USeries;

type RRing = PolyQuotient<E0Ring>;

pub struct H2 {
    /// p-adic precision of the coefficients.
    pub prec: u32,
    /// `h` is known modulo `y^J`.
    pub j_trunc: usize,
    /// `E0[d]/f(d)` is the ring of `(Z/p)^×`-invariants of `R = E0[w]/⟨p⟩(w)`.
    pub f_poly: Poly,
    /// `coeffs[j][m]` is the coefficient of `d^m y^j`.
    pub coeffs: Vec<Vec<Vec<u64>>>,
    /// Monic degree-`p` Weierstrass polynomial of `Π_k (x +_F [k](w))`, over `R`.
    pub p_poly: Poly,
    /// `h(0, s)` mod `(p, u)`, coefficients of `s^j`.
    pub h0s_residues: Vec<u64>,
    pub base: Arc<E0Ring>,
    pub r: Arc<RRing>,
    /// `Π_k (x +_F [k](w))` over `R`.
    pub y_series: USeries<RRing>,
}

impl H2 {
    /// `Σ_{j,m} h_{jm} d^m y^j` in any ring that receives `E0` through `embed`.
    pub fn eval<A: CoeffRing>(&self, ring: &A, embed: impl Fn(&[u64]) -> Vec<u64>, d: &[u64], y: &[u64]) -> Vec<u64> {
        let ctx = *ring.padic();
        let mut acc = ring.zero();
        for row in self.coeffs.iter().rev() {
            acc = ring.mul(&acc, y);
            let mut inner = ring.zero();
            for c in row.iter().rev() {
                inner = ring.mul(&inner, d);
                ring::vadd(&ctx, &mut inner, &embed(c));
            }
            ring::vadd(&ctx, &mut acc, &inner);
        }
        acc
    }

    /// `h(0, s) ≡ s^{p^{nv-1}}` mod `(p, u)`.
    pub fn h0s_check(&self, p: u64, n: usize, v: u32) -> bool {
        let e = (p as usize).pow(n as u32 * v - 1);
        self.h0s_residues.iter().enumerate().all(|(j, &c)| c == u64::from(j == e))
    }

    pub fn report(&self) -> Value {
        let ctx = self.base.padic();
        let terms: Vec<Value> = self
            .coeffs
            .iter()
            .enumerate()
            .flat_map(|(j, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, c)| !ring::is_zero(c))
                    .map(move |(m, c)| json!({ "d": m, "y": j, "coeff": self.base.format(c), "digits": ctx.digits(c[0]) }))
            })
            .collect();
        json!({
            "prec": self.prec,
            "y_truncation": self.j_trunc,
            "f": poly_json(&self.base, &self.f_poly, "d"),
            "terms": terms,
            "h0s_mod_p": self.h0s_residues,
        })
    }
}

/// Which quotient of `E0[[w]]` carries the translates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WRing {
    /// `E0[[w]]/⟨p⟩(w)`.
    Bracket,
    /// `E0[[w]]/[p](w) = E0(BC_p)`.
    Cyclic,
}

/// Weierstrass polynomial of `⟨p⟩(w)` (or of `[p](w)`) over `ring`.
fn w_modulus(d: &DModel, ring: &Arc<E0Ring>, which: WRing) -> Result<Poly> {
    let p = d.params.p();
    let deg = (p as usize).pow(d.params.n() as u32) - 1;
    let log = d.law.log_data().ok_or_else(|| Error::InvalidInput("law has no logarithm".into()))?;
    let len = crate::fgl::weierstrass::required_len(ring.as_ref(), deg) + 2;
    let s = endomorphism_series(log, ring, p as i128, len + 1)?.div_x_pow(1)?;
    let g = weierstrass_prepare(&s, deg)?.g;
    Ok(match which {
        WRing::Bracket => g,
        WRing::Cyclic => {
            let mut wg = vec![ring.zero()];
            wg.extend(g);
            wg
        }
    })
}

/// `E0[w]/m(w)` at precision `prec`.
pub fn w_ring(d: &DModel, prec: u32, which: WRing) -> Result<(Arc<E0Ring>, Arc<RRing>)> {
    let base = Arc::new(d.base().with_padic(PadicCtx::new(d.params.p(), prec)?)?);
    let m = w_modulus(d, &base, which)?;
    Ok((base.clone(), Arc::new(PolyQuotient::new(&base, &m)?)))
}

/// `Π_{k<p} (x +_F [k](w))` over `E0[w]/m(w)` at precision `prec`, up to `x^len`.
pub fn translate_product(d: &DModel, prec: u32, which: WRing, len: usize) -> Result<(Arc<RRing>, USeries<RRing>)> {
    let p = d.params.p();
    let pu = p as usize;
    let n = d.params.n();
    let du = d.base().du() as u32;
    let (base, r) = w_ring(d, prec, which)?;
    let log = d.law.log_data().ok_or_else(|| Error::InvalidInput("law has no logarithm".into()))?;
    // omitted log terms l_k G^{p^k} vanish once p^k >= len + (p^n - 1)(prec + k + Du)
    let bump = pu.pow(n as u32) as u128;
    let mut kmax = log.kmax_for_len(len);
    while (pu as u128).pow(kmax) < len as u128 + bump * (prec + kmax + du) as u128 {
        kmax += 1;
    }
    let e0_setup = e0_setup_k(log, &base, kmax)?;
    let wide_prec = e0_setup.wide.padic().nprec();
    let (_, r_wide) = w_ring(d, wide_prec, which)?;
    let setup = SolverSetup {
        wide: r_wide.clone(),
        narrow: *base.padic(),
        v: e0_setup.v,
        nums: e0_setup.nums.iter().map(|c| r_wide.embed(c)).collect(),
    };
    let wide_base = r_wide.base().clone();
    let modulus = base.padic().modulus();
    let mut y = USeries::var(&r, len);
    for k in 1..p {
        let kw_series = endomorphism_series(log, &wide_base, k as i128, r_wide.adic_depth() + 1)?;
        let kw = r_wide.reduce_series(&kw_series);
        let g = solve_endomorphism(&setup, 1, &kw, len)?;
        y = y.mul(&g.map_coeffs(&r, |a| a.iter().map(|&c| c % modulus).collect()));
    }
    Ok((r, y))
}

pub fn build_h2(d: &DModel, prec: u32) -> Result<H2> {
    let p = d.params.p();
    let pu = p as usize;
    let n = d.params.n();
    let v = d.params.v;
    let (base, r) = w_ring(d, prec, WRing::Bracket)?;
    let kb = base.adic_depth();
    let kr = r.adic_depth();
    let big_n = d.params.big_n;
    let nr = d.params.nr;
    let j_trunc = (big_n * kb).max((nr * kr).div_ceil(pu)).max(pu.pow(n as u32 * v - 1) + 1);
    let xlen = pu * j_trunc * kr + 1;
    let (_, y) = translate_product(d, prec, WRing::Bracket, xlen)?;
    let p_poly = weierstrass_prepare(&y, pu)?.g;

    // Q = R[x]/P^J with basis x^i y^j
    let mut pj: Poly = vec![r.one()];
    for _ in 0..j_trunc {
        pj = poly::mul(r.as_ref(), &pj, &p_poly);
    }
    let q = PolyQuotient::new(&r, &pj)?;
    let yq = q.reduce_series(&y);
    let pv = (p as i128).pow(v);
    let target = d.law.endomorphism(pv, xlen)?.map_coeffs(&r, |c| r.embed(&base.narrow(c)));
    let tq = q.reduce_series(&target);
    let dim = pu * j_trunc;
    let mut cols = Vec::with_capacity(dim);
    let mut yj = q.one();
    for _ in 0..j_trunc {
        let mut xi = yj.clone();
        for _ in 0..pu {
            cols.push(q.coords(&xi));
            xi = q.mul_gen(&xi);
        }
        yj = q.mul(&yj, &yq);
    }
    let m: Mat = (0..dim).map(|i| (0..dim).map(|j| cols[j][i].clone()).collect()).collect();
    let inv = linalg::local_inverse(r.as_ref(), &m)?;
    let digits = linalg::mat_vec(r.as_ref(), &inv, &q.coords(&tq));
    for (k, c) in digits.iter().enumerate() {
        if k % pu != 0 && !ring::is_zero(c) {
            return Err(Error::DigitNonvanishing(format!("digit x^{} y^{} is nonzero", k % pu, k / pu)));
        }
    }

    // coefficients in w^{(p-1)m} become (-d)^m
    let pm1 = pu - 1;
    let ctx = *base.padic();
    let mut coeffs = Vec::with_capacity(j_trunc);
    for c in digits.iter().step_by(pu) {
        let mut row = Vec::new();
        for (k, ck) in r.coords(c).into_iter().enumerate() {
            if k % pm1 != 0 {
                if !ring::is_zero(&ck) {
                    return Err(Error::InvariantViolation(format!("h has a w^{k} term, not invariant")));
                }
                continue;
            }
            let mut ck = ck;
            if (k / pm1) % 2 == 1 {
                ring::vneg(&ctx, &mut ck);
            }
            row.push(ck);
        }
        while row.len() > 1 && ring::is_zero(row.last().unwrap()) {
            row.pop();
        }
        coeffs.push(row);
    }
    let mut f_poly = Vec::new();
    for (k, c) in r.modulus().into_iter().enumerate() {
        if k % pm1 == 0 {
            let mut c = c;
            if (k / pm1) % 2 == 1 {
                ring::vneg(&ctx, &mut c);
            }
            f_poly.push(c);
        }
    }
    let h0s_residues = coeffs.iter().map(|row| base.residue(&row[0])).collect();
    Ok(H2 { prec, j_trunc, f_poly, coeffs, p_poly, h0s_residues, base, r, y_series: y })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glp::dmodel::build_d;
    use crate::glp::params::GLpParams;
    use crate::series::e0::PrecisionCtx;

    #[test]
    fn h_at_dimension_three() {
        let params = GLpParams::new(PrecisionCtx::new(3, 3, 1, 1, 10).unwrap(), 4).unwrap();
        let d = build_d(&params).unwrap();
        let h = build_h2(&d, 3).unwrap();
        assert!(h.h0s_check(3, 1, 1));
        assert_eq!(h.h0s_residues[1], 1);
    }
}
