//! Images of the generators `d, c_p, b_α, t` and the relation `t + d h(d, c_p) = 0`.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fgl::weierstrass_prepare;
use crate::glp::algebra::GlpModel;
use crate::glp::h2::{translate_product, WRing, H2};
use crate::glp::tclass::kappa_series;
use crate::series::e0::E0Ring;
use crate::series::poly;
use crate::series::quotient::PolyQuotient;
use crate::series::ring::{self, CoeffRing};
use crate::series::useries::USeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsiGen {
    D,
    Cp,
    B(Vec<u32>),
    T,
}

impl std::str::FromStr for PsiGen {
    type Err = Error;

    /// `d`, `c_p`, `t`, or `b:1,0,0`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "d" => Ok(PsiGen::D),
            "c_p" | "cp" => Ok(PsiGen::Cp),
            "t" => Ok(PsiGen::T),
            _ => {
                let rest = s.strip_prefix("b:").ok_or_else(|| Error::UnknownGenerator(s.to_string()))?;
                let alpha = rest
                    .split(',')
                    .map(|x| x.trim().parse::<u32>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::UnknownGenerator(s.to_string()))?;
                Ok(PsiGen::B(alpha))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsiTarget {
    /// `E0(BT)` with `T = (C_{p^v})^p`.
    Torus,
    /// `E0(B(C_p × C_{p^v})) = E0[w, x]/([p](w), [p^v](x))`.
    SigmaDelta,
    /// `E0(BC_{p^{v+1}})`.
    A,
}

impl std::str::FromStr for PsiTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" | "torus" => Ok(PsiTarget::Torus),
            "SigmaDelta" | "sigma-delta" => Ok(PsiTarget::SigmaDelta),
            "A" | "a" => Ok(PsiTarget::A),
            _ => Err(Error::InvalidInput(format!("unknown target {s}"))),
        }
    }
}

type WQuot = PolyQuotient<E0Ring>;

/// The three presented target rings.
pub struct PsiTargets {
    /// `E0[w]/g_1(w)`.
    pub w_ring: Arc<WQuot>,
    /// `E0[w]/g_1(w) [x]/g_v(x)`.
    pub sd: Arc<PolyQuotient<WQuot>>,
    sd_y: Vec<u64>,
    /// `⟨p⟩(w)` in `E0[w]/g_1(w)`.
    sd_f: Vec<u64>,
    /// `E0[x]/g_{v+1}(x)`.
    pub a: Arc<PolyQuotient<E0Ring>>,
}

pub fn psi_targets(m: &GlpModel) -> Result<PsiTargets> {
    let d = &m.d;
    let prec = d.base().padic().nprec();
    let w_probe = crate::glp::h2::w_ring(d, prec, WRing::Cyclic)?.1;
    let gv: Vec<Vec<u64>> = d.g_v.g.iter().map(|c| w_probe.embed(c)).collect();
    let depth = (gv.len() - 1) * w_probe.adic_depth() + 1;
    let (w_ring, y) = translate_product(d, prec, WRing::Cyclic, depth)?;
    let gv: Vec<Vec<u64>> = d.g_v.g.iter().map(|c| w_ring.embed(c)).collect();
    let sd = Arc::new(PolyQuotient::new(&w_ring, &gv)?);
    let sd_y = sd.reduce_series(&y);
    let p = d.params.p() as i128;
    let bracket = d.law.endomorphism(p, w_ring.adic_depth() + 2)?.div_x_pow(1)?;
    let sd_f = w_ring.reduce_series(&bracket);
    let a = Arc::new(PolyQuotient::new(d.base(), &d.g_v1.g)?);
    Ok(PsiTargets { w_ring, sd, sd_y, sd_f, a })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for perm in permutations(n - 1) {
        for pos in 0..n {
            let mut q = perm.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn psi_image(m: &GlpModel, targets: &PsiTargets, gen: &PsiGen, target: PsiTarget) -> Result<Vec<u64>> {
    let p = m.params.p();
    let pu = p as usize;
    let pv = (p as i128).pow(m.params.v);
    let fact: i64 = (1..p as i64).product();
    if let PsiGen::B(alpha) = gen {
        if alpha.len() != pu || alpha.iter().any(|&a| a as usize >= m.params.nr) {
            return Err(Error::BadParams(format!("b_α needs {pu} exponents below {}", m.params.nr)));
        }
    }
    match target {
        PsiTarget::Torus => {
            let t = m.torus.ring();
            Ok(match gen {
                PsiGen::D | PsiGen::T => t.zero(),
                PsiGen::Cp => m.torus.sigma(pu).to_vec(),
                PsiGen::B(alpha) => {
                    let mut acc = t.zero();
                    for perm in permutations(pu) {
                        let e: Vec<usize> = (0..pu).map(|i| alpha[perm[i]] as usize).collect();
                        ring::vadd(t.padic(), &mut acc, &t.monomial(&e));
                    }
                    acc
                }
            })
        }
        PsiTarget::SigmaDelta => {
            let r = &targets.sd;
            let w = targets.w_ring.gen();
            let mut dw = targets.w_ring.pow(&w, p - 1);
            ring::vneg(r.padic(), &mut dw);
            Ok(match gen {
                PsiGen::T => r.zero(),
                PsiGen::D => r.embed(&dw),
                PsiGen::Cp => targets.sd_y.clone(),
                PsiGen::B(alpha) => {
                    let s: u32 = alpha.iter().sum();
                    let mut c = targets.sd_f.clone();
                    ring::vscale(r.padic(), &mut c, r.padic().from_i64(fact));
                    r.mul(&r.embed(&c), &r.x_pow(s as usize))
                }
            })
        }
        PsiTarget::A => {
            let r = &targets.a;
            let len = r.adic_depth() + 1;
            let z = r.reduce_series(&m.d.law.endomorphism(pv, len)?);
            Ok(match gen {
                PsiGen::T => r.pow(&z, p),
                PsiGen::D => {
                    let mut e = r.pow(&z, p - 1);
                    ring::vneg(r.padic(), &mut e);
                    e
                }
                PsiGen::Cp => {
                    let mut y = r.one();
                    for k in 0..p as i128 {
                        y = r.mul(&y, &r.reduce_series(&m.d.law.endomorphism(1 + k * pv, len)?));
                    }
                    y
                }
                PsiGen::B(alpha) => {
                    let s: u32 = alpha.iter().sum();
                    let bracket = m.d.law.endomorphism(p as i128, len + 1)?.div_x_pow(1)?;
                    let mut e = r.mul(&r.eval_series(&bracket, &z), &r.x_pow(s as usize));
                    ring::vscale(r.padic(), &mut e, r.padic().from_i64(fact));
                    e
                }
            })
        }
    }
}

#[derive(Clone, Debug)]
pub struct TRelationReport {
    pub torus: bool,
    pub sigma_delta: bool,
    pub d_gamma: bool,
    /// `h(d, y) = [p^v](x)` in `R[x]/g_v`.
    pub defining_identity: bool,
}

impl TRelationReport {
    pub fn pass(&self) -> bool {
        self.torus && self.sigma_delta && self.d_gamma && self.defining_identity
    }

    pub fn report(&self) -> Value {
        json!({
            "torus": self.torus,
            "sigma_delta_mod_bracket": self.sigma_delta,
            "d_gamma": self.d_gamma,
            "defining_identity": self.defining_identity,
            "pass": self.pass(),
        })
    }
}

/// Images of `t + d·h(d, c_p)` in the three targets; all must vanish.
pub fn verify_t_relation(m: &GlpModel, h: &H2) -> Result<TRelationReport> {
    let p = m.params.p();
    let base = h.base.clone();
    let narrow = |a: &[u64]| base.narrow(a);

    // torus: t ↦ 0 and d ↦ 0
    let torus = ring::is_zero(&m.t.left);

    // E0(B(C_p × C_{p^v}))/⟨p⟩(w) = R[x]/g_v
    let r = h.r.clone();
    let gv: Vec<Vec<u64>> = m.d.g_v.g.iter().map(|c| r.embed(&narrow(c))).collect();
    let tq = PolyQuotient::new(&r, &gv)?;
    let y2 = tq.reduce_series(&h.y_series);
    let mut dw = r.pow(&r.gen(), p - 1);
    ring::vneg(r.padic(), &mut dw);
    let d2 = tq.embed(&dw);
    let h_val = h.eval(&tq, |c| tq.embed(&r.embed(c)), &d2, &y2);
    let pv_series = m.d.law.endomorphism((p as i128).pow(m.params.v), tq.adic_depth() + 1)?;
    let pv_val = tq.reduce_series(&pv_series.map_coeffs(&r, |c| r.embed(&narrow(c))));
    let defining_identity = h_val == pv_val;
    let sigma_delta = ring::is_zero(&tq.mul(&d2, &h_val));

    // D^Γ inside D: z^p - z^{p-1} h(-z^{p-1}, y)
    let g: Vec<Vec<u64>> = m.d.g.iter().map(|c| narrow(c)).collect();
    let dq = PolyQuotient::new(&base, &g)?;
    let z = narrow(&m.t.z);
    let y = narrow(&m.d.y);
    let zp1 = dq.pow(&z, p - 1);
    let mut d3 = zp1.clone();
    ring::vneg(dq.padic(), &mut d3);
    let hv = h.eval(&dq, |c| dq.embed(c), &d3, &y);
    let mut lhs = dq.pow(&z, p);
    ring::vadd(dq.padic(), &mut lhs, &dq.mul(&d3, &hv));
    let d_gamma = ring::is_zero(&lhs);

    let rep = TRelationReport { torus, sigma_delta, d_gamma, defining_identity };
    if !rep.pass() {
        return Err(Error::RelationFailure(rep.report().to_string()));
    }
    Ok(rep)
}

/// `A g_v + B g = p` in `E0[x]/g_{v+1}`.
pub struct CrtWitness {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub ring: Arc<PolyQuotient<E0Ring>>,
    /// `v_p` of the certificate evaluated at `x = 0`.
    pub slack: Option<u32>,
    pub verified: bool,
}

impl CrtWitness {
    pub fn report(&self) -> Value {
        let r = &self.ring;
        let c = |a: &[u64]| -> Vec<String> { r.coords(a).iter().map(|x| r.base().format(x)).collect() };
        json!({
            "A": c(&self.a),
            "B": c(&self.b),
            "valuation_slack": self.slack,
            "verified": self.verified,
        })
    }
}

pub fn crt_witness(m: &GlpModel) -> Result<CrtWitness> {
    let d = &m.d;
    let base = d.base().clone();
    let ctx = *base.padic();
    let p = m.params.p();
    let k = base.adic_depth();
    let deg_v = d.g_v.degree;
    let deg_v1 = d.g_v1.degree;
    let deg_g = d.g.len() - 1;
    let len = deg_v1 * k + 1;
    let long = len + deg_v1 * (k + 2);
    let z = d.law.endomorphism((p as i128).pow(m.params.v), long)?;
    let wz = weierstrass_prepare(&z, deg_v)?;
    if wz.g != d.g_v.g {
        return Err(Error::WitnessNotFound("Weierstrass factor of [p^v](x) differs from g_v".into()));
    }
    let kappa = kappa_series(d)?.with_len(long);
    let kz = kappa.compose(&z)?;
    let mut bracket_z = z.mul(&kz);
    let mut c0 = bracket_z.coeff(0).to_vec();
    ring::vadd(&ctx, &mut c0, &base.from_int(p as i64));
    bracket_z.set_coeff(0, &c0);
    let wb = weierstrass_prepare(&bracket_z, deg_g)?;
    if wb.g != d.g {
        return Err(Error::WitnessNotFound("Weierstrass factor of ⟨p⟩([p^v](x)) differs from g".into()));
    }
    let ring = Arc::new(PolyQuotient::new(&base, &d.g_v1.g)?);
    let mut a_series: USeries<E0Ring> = wz.u.with_len(len).mul(&kz.with_len(len));
    a_series = a_series.neg();
    let a = ring.reduce_series(&a_series);
    let b = ring.reduce_series(&wb.u.with_len(len));
    let gv = ring.reduce_poly(&d.g_v.g);
    let gg = ring.reduce_poly(&d.g);
    let mut lhs = ring.mul(&a, &gv);
    ring::vadd(&ctx, &mut lhs, &ring.mul(&b, &gg));
    let verified = lhs == ring.from_int(p as i64);
    // at x = 0: A(0) g_v(0) + B(0) g(0)
    let at0 = {
        let a0 = poly::mul(base.as_ref(), &[ring.coord(&a, 0).to_vec()], &[d.g_v.g[0].clone()]);
        let b0 = poly::mul(base.as_ref(), &[ring.coord(&b, 0).to_vec()], &[d.g[0].clone()]);
        let mut s = a0[0].clone();
        ring::vadd(&ctx, &mut s, &b0[0]);
        s
    };
    let slack = ring::vvaluation(&ctx, &at0);
    if !verified {
        return Err(Error::WitnessNotFound("A g_v + B g differs from p".into()));
    }
    Ok(CrtWitness { a, b, ring, slack, verified })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glp::algebra::build_model;
    use crate::glp::h2::build_h2;
    use crate::glp::params::GLpParams;
    use crate::series::e0::PrecisionCtx;

    fn model() -> GlpModel {
        build_model(&GLpParams::new(PrecisionCtx::new(3, 3, 1, 1, 10).unwrap(), 4).unwrap()).unwrap()
    }

    #[test]
    fn relation_in_all_targets() {
        let m = model();
        let h = build_h2(&m.d, 3).unwrap();
        let rep = verify_t_relation(&m, &h).unwrap();
        assert!(rep.pass(), "{:?}", rep);
    }

    #[test]
    fn psi_table_rows() {
        let m = model();
        let t = psi_targets(&m).unwrap();
        assert!(ring::is_zero(&psi_image(&m, &t, &PsiGen::D, PsiTarget::Torus).unwrap()));
        assert!(ring::is_zero(&psi_image(&m, &t, &PsiGen::T, PsiTarget::SigmaDelta).unwrap()));
        // ψ_2(d)·ψ_2(b_α) = (p-1)! d f(d) x^{|α|} = 0
        let d2 = psi_image(&m, &t, &PsiGen::D, PsiTarget::SigmaDelta).unwrap();
        let b2 = psi_image(&m, &t, &PsiGen::B(vec![1, 0, 0]), PsiTarget::SigmaDelta).unwrap();
        assert!(ring::is_zero(&t.sd.mul(&d2, &b2)));
        // ψ_3(t) = -[p^v](x) ψ_3(d)
        let a = &t.a;
        let t3 = psi_image(&m, &t, &PsiGen::T, PsiTarget::A).unwrap();
        let d3 = psi_image(&m, &t, &PsiGen::D, PsiTarget::A).unwrap();
        let z = a.reduce_series(&m.d.law.endomorphism(3, a.adic_depth() + 1).unwrap());
        let mut e = a.mul(&z, &d3);
        ring::vadd(a.padic(), &mut e, &t3);
        assert!(ring::is_zero(&e));
        assert!(matches!("q".parse::<PsiGen>(), Err(Error::UnknownGenerator(_))));
    }

    #[test]
    fn crt_certificate() {
        let w = crt_witness(&model()).unwrap();
        assert!(w.verified);
        assert_eq!(w.slack, Some(1));
    }
}
