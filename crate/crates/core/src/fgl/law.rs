use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fgl::log::{self, LawKind, LogData};
use crate::padic::{PadicCtx, PadicInt};
use crate::series::e0::{E0Ring, PrecisionCtx};
use crate::series::mseries::{MLayout, MSeries};
use crate::series::ring::{self, CoeffRing};
use crate::series::useries::USeries;

/// A formal group law `F(x, y)` truncated at total degree `< dx`.
#[derive(Clone)]
pub struct Fgl {
    ctx: PrecisionCtx,
    ring: Arc<E0Ring>,
    f: MSeries,
    log: Option<LogData>,
}

impl fmt::Debug for Fgl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fgl").field("ctx", &self.ctx).field("log", &self.log).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub pass: bool,
    /// First offending exponent and the coefficient found there.
    pub offending: Option<(Vec<u32>, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub identity: AxiomCheck,
    pub commutativity: AxiomCheck,
    pub associativity: AxiomCheck,
}

impl AxiomReport {
    pub fn pass(&self) -> bool {
        self.identity.pass && self.commutativity.pass && self.associativity.pass
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Height {
    Finite(usize),
    /// `[p](x)` vanishes modulo the maximal ideal below `x^dx`.
    InfiniteAtPrecision,
}

impl fmt::Display for Height {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Height::Finite(n) => write!(f, "{n}"),
            Height::InfiniteAtPrecision => write!(f, "inf"),
        }
    }
}

fn diff_check(a: &MSeries, b: &MSeries) -> AxiomCheck {
    let d = a.sub(b);
    let first = d.terms().next().map(|(e, c)| (e.to_vec(), a.ring().format(c)));
    AxiomCheck { pass: first.is_none(), offending: first }
}

impl Fgl {
    /// Wrap an explicit two-variable series.
    pub fn from_series(ctx: PrecisionCtx, f: MSeries) -> Result<Self> {
        if f.arity() != 2 {
            return Err(Error::MalformedFgl("a formal group law has two variables".into()));
        }
        Ok(Fgl { ctx, ring: f.ring().clone(), f, log: None })
    }

    pub fn additive(ctx: PrecisionCtx) -> Result<Self> {
        let ring = Arc::new(E0Ring::from_ctx(&ctx)?);
        let lay = MLayout::new(2, ctx.dx)?;
        let f = MSeries::var(&ring, &lay, 0).add(&MSeries::var(&ring, &lay, 1));
        Self::from_series(ctx, f)
    }

    pub fn multiplicative(ctx: PrecisionCtx) -> Result<Self> {
        let ring = Arc::new(E0Ring::from_ctx(&ctx)?);
        let lay = MLayout::new(2, ctx.dx)?;
        let x = MSeries::var(&ring, &lay, 0);
        let y = MSeries::var(&ring, &lay, 1);
        Self::from_series(ctx, x.add(&y).add(&x.mul(&y)))
    }

    pub fn ctx(&self) -> &PrecisionCtx {
        &self.ctx
    }

    pub fn ring(&self) -> &Arc<E0Ring> {
        &self.ring
    }

    pub fn series(&self) -> &MSeries {
        &self.f
    }

    pub fn log_data(&self) -> Option<&LogData> {
        self.log.as_ref()
    }

    pub fn dx(&self) -> usize {
        self.ctx.dx
    }

    /// Log coefficient of `x^{p^k}` as a numerator over `p^V`.
    pub fn log_coefficient(&self, k: u32) -> Result<(Vec<u64>, u32)> {
        let log = self.log.as_ref().ok_or_else(|| Error::Unsupported("law has no logarithm".into()))?;
        let v = log.denominator_exponent(k);
        let wide = self.ring.with_padic(PadicCtx::new(self.ctx.p(), self.ctx.nprec() + v)?)?;
        log.coefficient(&wide, k)
    }

    /// `F(a(x), b(x))` for univariate series without constant term.
    pub fn eval(&self, a: &USeries, b: &USeries) -> USeries {
        let len = a.len().min(b.len()).min(self.dx());
        let a = a.with_len(len);
        let b = b.with_len(len);
        let mut bpow = vec![USeries::one(&self.ring, len)];
        for j in 1..len {
            let next = bpow[j - 1].mul(&b);
            bpow.push(next);
        }
        let mut rows: Vec<USeries> = (0..len).map(|_| USeries::zero(&self.ring, len)).collect();
        for (e, c) in self.f.terms() {
            let (i, j) = (e[0] as usize, e[1] as usize);
            if i < len && j < len {
                let t = bpow[j].scale(c);
                rows[i] = rows[i].add(&t);
            }
        }
        let mut r = USeries::zero(&self.ring, len);
        for i in (0..len).rev() {
            r = r.mul(&a).add(&rows[i]);
        }
        r
    }

    pub fn check_axioms(&self) -> Result<AxiomReport> {
        let lay2 = self.f.layout().clone();
        let x = MSeries::var(&self.ring, &lay2, 0);
        let zero = MSeries::zero(&self.ring, &lay2);
        let fx0 = self.f.substitute(&[x.clone(), zero], &lay2)?;
        let identity = diff_check(&fx0, &x);
        let swapped = self.f.permute(&[1, 0]);
        let commutativity = diff_check(&self.f, &swapped);

        let lay3 = MLayout::new(3, self.dx())?;
        let v: Vec<MSeries> = (0..3).map(|i| MSeries::var(&self.ring, &lay3, i)).collect();
        let fxy = self.f.substitute(&[v[0].clone(), v[1].clone()], &lay3)?;
        let fyz = self.f.substitute(&[v[1].clone(), v[2].clone()], &lay3)?;
        let left = self.f.substitute(&[fxy, v[2].clone()], &lay3)?;
        let right = self.f.substitute(&[v[0].clone(), fyz], &lay3)?;
        let associativity = diff_check(&left, &right);
        Ok(AxiomReport { identity, commutativity, associativity })
    }

    /// `F(x, y) ≡ x + y mod (xy)`.
    pub fn check_linear_part(&self) -> bool {
        let one = self.ring.one();
        let pure: Vec<(&[u32], &[u64])> = self.f.terms().filter(|(e, _)| e[0] == 0 || e[1] == 0).collect();
        pure.len() == 2 && pure.iter().all(|(e, c)| e.iter().sum::<u32>() == 1 && *c == one.as_slice())
    }

    /// The unique `ι` with `F(x, ι(x)) = 0`, by inductive correction.
    pub fn formal_inverse(&self) -> USeries {
        let len = self.dx();
        let x = USeries::var(&self.ring, len);
        let mut iota = x.neg();
        for k in 2..len {
            let s = self.eval(&x, &iota);
            let a = s.coeff(k).to_vec();
            if !ring::is_zero(&a) {
                let corr = USeries::monomial(&self.ring, k, &a, len);
                iota = iota.sub(&corr);
            }
        }
        iota
    }

    /// `[m](x)` by binary formal addition.
    pub fn m_series(&self, m: i64) -> USeries {
        let len = self.dx();
        let x = USeries::var(&self.ring, len);
        let mut result = USeries::zero(&self.ring, len);
        let mut base = x;
        let mut e = m.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = self.eval(&result, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.eval(&base, &base);
            }
        }
        if m < 0 {
            result.compose(&self.formal_inverse()).expect("inverse has no constant term")
        } else {
            result
        }
    }

    /// `⟨m⟩(x) = [m](x)/x`.
    pub fn divided_m_series(&self, m: i64) -> Result<USeries> {
        self.m_series(m).div_x_pow(1)
    }

    /// `[m](x)` up to `x^len`, through the logarithm when one is attached.
    pub fn endomorphism(&self, m: i128, len: usize) -> Result<USeries> {
        match &self.log {
            Some(l) => log::endomorphism_series(l, &self.ring, m, len),
            None if len <= self.dx() => {
                let m = i64::try_from(m).map_err(|_| Error::InvalidInput("m out of range".into()))?;
                Ok(self.m_series(m).with_len(len))
            }
            None => Err(Error::PrecisionExhausted(format!("law is only known below degree {}", self.dx()))),
        }
    }

    /// `[a](x)` for a p-adic integer, accumulated digit by digit.
    pub fn padic_series(&self, a: &PadicInt) -> Result<USeries> {
        let len = self.dx();
        let p = self.ctx.p();
        if a.ctx().p() != p {
            return Err(Error::CtxMismatch);
        }
        let ps = self.m_series(p as i64);
        let mut pk = USeries::var(&self.ring, len);
        let mut acc = USeries::zero(&self.ring, len);
        let mut digits = Vec::new();
        let mut r = a.residue();
        for _ in 0..a.ctx().nprec() {
            digits.push((r % p) as i64);
            r /= p;
        }
        let small: Vec<USeries> = (0..p as i64).map(|d| self.m_series(d)).collect();
        for &d in &digits {
            if d != 0 {
                let term = small[d as usize].compose(&pk)?;
                acc = self.eval(&acc, &term);
            }
            pk = ps.compose(&pk)?;
        }
        // pk = [p^Na](x) must vanish for the digits to determine [a](x).
        if !pk.is_zero() {
            return Err(Error::PrecisionExhausted(format!("[p^{}](x) is nonzero at this truncation", a.ctx().nprec())));
        }
        Ok(acc)
    }

    /// `[p](x) ≡ u_i x^{p^i} mod (p, u_1..u_{i-1}, x^{p^{i+1}})`, for `1 <= i <= n`.
    pub fn pseries_congruence(&self, i: usize) -> Result<bool> {
        let n = self.ring.height();
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange(format!("congruence index {i} outside 1..={n}")));
        }
        let p = self.ctx.p() as usize;
        let top = p.pow(i as u32 + 1);
        if top > self.dx() {
            return Err(Error::PrecisionExhausted(format!("need dx >= {top}")));
        }
        let ps = self.endomorphism(p as i128, top)?;
        let ui = self.ring.reduce_mod_ideal(&self.ring.u_var(i), i);
        let zero = vec![0u64; self.ring.dim()];
        Ok((1..top).all(|k| {
            let got = self.ring.reduce_mod_ideal(ps.coeff(k), i);
            got == if k == p.pow(i as u32) { ui.clone() } else { zero.clone() }
        }))
    }

    pub fn height(&self) -> Result<Height> {
        let p = self.ctx.p();
        let ps = self.endomorphism(p as i128, self.dx())?;
        for k in 1..ps.len() {
            if ps.coeff(k)[0] % p != 0 {
                return match log::p_power_index(p, k) {
                    Some(j) => Ok(Height::Finite(j)),
                    None => Err(Error::MalformedFgl(format!("[p](x) has leading term of degree {k}"))),
                };
            }
        }
        Ok(Height::InfiniteAtPrecision)
    }
}

/// Standard height-n p-typical law with free parameters `u_1..u_{n-1}`.
pub fn build_ptypical(ctx: &PrecisionCtx) -> Result<Fgl> {
    build_with_log(ctx, LogData::new(ctx.p(), ctx.n, ctx.du, LawKind::PTypical))
}

/// The Honda law: all `u_i = 0` for `i < n`. Also checks `[p](x) = l^{-1}(p x) +_F x^{p^n}`.
pub fn build_honda(ctx: &PrecisionCtx) -> Result<Fgl> {
    let law = build_with_log(ctx, LogData::new(ctx.p(), ctx.n, ctx.du, LawKind::Honda))?;
    let p = ctx.p();
    let len = ctx.dx;
    let ps = law.endomorphism(p as i128, len)?;
    let lpx = honda_exp_of_px(&law, len)?;
    let pn = (p as usize).pow(ctx.n as u32);
    let xpn = USeries::monomial(law.ring(), pn, &law.ring().one(), len);
    let rhs = law.eval(&lpx, &xpn);
    if rhs != ps {
        return Err(Error::InvariantViolation("Honda p-series identity fails".into()));
    }
    Ok(law)
}

// l^{-1}(p x) for the Honda log, solved degree by degree from l(g) = p x.
fn honda_exp_of_px(law: &Fgl, len: usize) -> Result<USeries> {
    let logd = law.log.as_ref().expect("log attached");
    let setup = log::e0_setup(logd, law.ring(), len)?;
    let wide = setup.wide.clone();
    let ctx = *wide.padic();
    let kmax = setup.nums.len() - 1;
    let p = ctx.p() as usize;
    // l(g) = Σ_k a_k g^{p^k}; the target is p·x, so only degree 1 carries a right side.
    let mut g = USeries::zero(&wide, len);
    for deg in 1..len {
        let mut numer = wide.zero();
        if deg == 1 {
            numer = setup.nums[0].clone();
            ring::vscale(&ctx, &mut numer, ctx.p());
        }
        for k in 1..=kmax {
            let e = p.pow(k as u32);
            if e > deg {
                break;
            }
            let gp = g.pow(e as u64);
            let t = wide.mul(&setup.nums[k], gp.coeff(deg));
            ring::vsub(&ctx, &mut numer, &t);
        }
        let mut gd =
            ring::vdiv_p_pow(&ctx, &numer, setup.v).ok_or_else(|| Error::IntegralityFailure(format!("exp coefficient {deg}")))?;
        gd.iter_mut().for_each(|x| *x %= setup.narrow.modulus());
        g.set_coeff(deg, &gd);
    }
    Ok(g.map_coeffs(law.ring(), |c| c.to_vec()))
}

fn build_with_log(ctx: &PrecisionCtx, logd: LogData) -> Result<Fgl> {
    let ring = Arc::new(E0Ring::from_ctx(ctx)?);
    let dx = ctx.dx;
    let kmax = logd.kmax_for_len(dx);
    let v = logd.denominator_exponent(kmax);
    let wctx = PadicCtx::new(ctx.p(), ctx.nprec() + v)
        .map_err(|_| Error::PrecisionExhausted("working precision out of range".into()))?;
    let wide = Arc::new(ring.with_padic(wctx)?);
    let nums = logd.numerators(&wide, kmax, v)?;
    let wp = *wide.padic();
    let nmod = ctx.padic.modulus();
    let lay = MLayout::new(2, dx)?;
    let p = ctx.p();

    // chain of powers as in the univariate solver
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
    let mut chain: Vec<MSeries<E0Ring>> = (0..=steps.len()).map(|_| MSeries::zero(&wide, &lay)).collect();
    let al = wide.acc_len();
    let dim = wide.dim();

    for deg in 1..dx {
        let range = lay.degree_range(deg);
        for (s, &(a, b)) in steps.iter().enumerate() {
            let mut acc = vec![0u128; range.len() * al];
            for da in 1..deg {
                for i in lay.degree_range(da) {
                    let ca = chain[a].at(i);
                    if ring::is_zero(ca) {
                        continue;
                    }
                    for j in lay.degree_range(deg - da) {
                        let cb = chain[b].at(j);
                        if ring::is_zero(cb) {
                            continue;
                        }
                        let k = lay.index_of_key(lay.key(i) + lay.key(j)).expect("in layout") - range.start;
                        wide.mul_acc(ca, cb, &mut acc[k * al..(k + 1) * al]);
                    }
                }
            }
            let mut tmp = vec![0u64; dim];
            for (off, idx) in range.clone().enumerate() {
                wide.finish(&acc[off * al..(off + 1) * al], &mut tmp);
                chain[s + 1].set_at(idx, &tmp);
            }
        }
        for idx in range.clone() {
            let mut numer = wide.zero();
            if let Some(j) = log::p_power_index(p, deg) {
                let e = lay.monos()[idx].clone();
                if (e[0] == 0 || e[1] == 0) && j <= kmax as usize {
                    ring::vadd(&wp, &mut numer, &nums[j]);
                }
            }
            for (k, &lk) in level.iter().enumerate().skip(1) {
                let t = wide.mul(&nums[k], chain[lk].at(idx));
                ring::vsub(&wp, &mut numer, &t);
            }
            let mut c = ring::vdiv_p_pow(&wp, &numer, v)
                .ok_or_else(|| Error::IntegralityFailure(format!("coefficient of {:?} is not integral", lay.monos()[idx])))?;
            c.iter_mut().for_each(|x| *x %= nmod);
            chain[0].set_at(idx, &c);
        }
    }
    let mut f = MSeries::zero(&ring, &lay);
    for i in 0..lay.len() {
        f.set_at(i, chain[0].at(i));
    }
    Ok(Fgl { ctx: *ctx, ring, f, log: Some(logd) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, w: u32, n: usize, du: usize, dx: usize) -> PrecisionCtx {
        PrecisionCtx::new(p, w, n, du, dx).unwrap()
    }

    fn ints(s: &USeries) -> Vec<i64> {
        let c = *s.ring().padic();
        (0..s.len()).map(|k| c.signed(s.coeff(k)[0]) as i64).collect()
    }

    #[test]
    fn pseries_congruences_height_two() {
        let c = PrecisionCtx::new(3, 4, 2, 3, 30).unwrap();
        let law = build_ptypical(&c).unwrap();
        assert!(law.pseries_congruence(1).unwrap());
        assert!(law.pseries_congruence(2).unwrap());
        assert!(law.check_axioms().unwrap().pass());
    }

    #[test]
    fn standard_laws_pass_axioms() {
        let c = ctx(3, 4, 1, 1, 8);
        assert!(Fgl::additive(c).unwrap().check_axioms().unwrap().pass());
        assert!(Fgl::multiplicative(c).unwrap().check_axioms().unwrap().pass());
    }

    #[test]
    fn asymmetric_series_fails_commutativity() {
        let c = ctx(3, 4, 1, 1, 6);
        let ring = Arc::new(E0Ring::from_ctx(&c).unwrap());
        let lay = MLayout::new(2, 6).unwrap();
        let x = MSeries::var(&ring, &lay, 0);
        let y = MSeries::var(&ring, &lay, 1);
        let f = x.add(&y).add(&x.mul(&x).mul(&y));
        let r = Fgl::from_series(c, f).unwrap().check_axioms().unwrap();
        assert!(!r.commutativity.pass);
        assert_eq!(r.commutativity.offending.unwrap().0, vec![2, 1]);
    }

    #[test]
    fn multiplicative_series() {
        let c = ctx(3, 4, 1, 1, 6);
        let fm = Fgl::multiplicative(c).unwrap();
        assert_eq!(ints(&fm.m_series(2)), vec![0, 2, 1, 0, 0, 0]);
        assert_eq!(ints(&fm.formal_inverse()), vec![0, -1, 1, -1, 1, -1]);
        assert_eq!(fm.height().unwrap(), Height::Finite(1));
        let fa = Fgl::additive(c).unwrap();
        assert_eq!(fa.height().unwrap(), Height::InfiniteAtPrecision);
        assert_eq!(ints(&fa.formal_inverse()), vec![0, -1, 0, 0, 0, 0]);
    }

    #[test]
    fn height_one_law_low_degree() {
        let c = ctx(3, 4, 1, 1, 5);
        let f = build_ptypical(&c).unwrap();
        let s = f.series();
        let get = |i, j| c.padic.signed(s.coeff(&[i, j])[0]);
        assert_eq!((get(1, 0), get(0, 1)), (1, 1));
        assert_eq!((get(2, 1), get(1, 2)), (-1, -1));
        assert_eq!((get(2, 0), get(1, 1), get(3, 0)), (0, 0, 0));
    }

    #[test]
    fn log_solver_matches_binary_addition() {
        let c = ctx(3, 5, 2, 3, 14);
        let f = build_ptypical(&c).unwrap();
        for m in [2i64, 3, 5, -1, -4] {
            let a = f.m_series(m);
            let b = f.endomorphism(m as i128, 14).unwrap();
            assert_eq!(a, b, "m = {m}");
        }
    }

    #[test]
    fn honda_identity_holds() {
        let c = ctx(3, 4, 2, 1, 12);
        let f = build_honda(&c).unwrap();
        assert_eq!(f.height().unwrap(), Height::Finite(2));
    }
}
