//! `E0(BC_m)` and `E0(BA)` for finite abelian `A`.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::Result;
use crate::fgl::{pr_weierstrass, Fgl};
use crate::padic::vp_u128;
use crate::series::e0::E0Ring;
use crate::series::json::poly_json;
use crate::series::poly::Poly;
use crate::series::quotient::PolyQuotient;
use crate::series::ring::CoeffRing;
use crate::series::tensor::TensorQuotient;
use crate::series::useries::USeries;

/// `E0[[x]]/g(x)` with `g` a Weierstrass polynomial.
#[derive(Clone)]
pub struct QuotientRing {
    r: u32,
    q: Arc<PolyQuotient<E0Ring>>,
}

impl std::fmt::Debug for QuotientRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QuotientRing").field("r", &self.r).field("rank", &self.rank()).finish()
    }
}

impl QuotientRing {
    pub fn from_modulus(base: &Arc<E0Ring>, modulus: &[Vec<u64>], r: u32) -> Result<Self> {
        Ok(QuotientRing { r, q: Arc::new(PolyQuotient::new(base, modulus)?) })
    }

    /// `p^r` is the p-part of the group order.
    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn rank(&self) -> usize {
        self.q.degree()
    }

    pub fn modulus(&self) -> Poly {
        self.q.modulus()
    }

    pub fn ring(&self) -> &Arc<PolyQuotient<E0Ring>> {
        &self.q
    }

    pub fn base(&self) -> &Arc<E0Ring> {
        self.q.base()
    }

    pub fn gen(&self) -> Vec<u64> {
        self.q.gen()
    }

    /// Degree from which `x^k` vanishes; series must be known below it to reduce exactly.
    pub fn vanishing_degree(&self) -> usize {
        self.rank() * self.base().adic_depth()
    }

    pub fn reduce(&self, f: &USeries) -> Vec<u64> {
        self.q.reduce_series(f)
    }

    pub fn report(&self) -> Value {
        json!({
            "rank": self.rank(),
            "modulus": poly_json(self.base(), &self.modulus(), "x"),
            "basis": (0..self.rank()).map(|i| format!("x^{i}")).collect::<Vec<_>>(),
        })
    }
}

/// `E0(BC_m) = E0[[x]]/g_r` with `p^r` exactly dividing `m`.
pub fn cyclic_ring(m: u64, law: &Fgl) -> Result<QuotientRing> {
    let p = law.ctx().p();
    let r = vp_u128(p, m as u128);
    let base = law.ring().clone();
    if r == 0 {
        return QuotientRing::from_modulus(&base, &[base.zero(), base.one()], 0);
    }
    let w = pr_weierstrass(law, r)?;
    QuotientRing::from_modulus(&base, &w.g, r)
}

/// `E0(B(C_{m_1} × … × C_{m_k}))` as a tensor product of cyclic factors.
pub struct AbelianRing {
    pub factors: Vec<QuotientRing>,
    ring: Arc<TensorQuotient<E0Ring>>,
}

impl AbelianRing {
    pub fn rank(&self) -> usize {
        self.ring.rank()
    }

    pub fn ring(&self) -> &Arc<TensorQuotient<E0Ring>> {
        &self.ring
    }

    /// Image of `Π_i f_i(x_i)`, reducing one variable at a time.
    pub fn reduce_product(&self, fs: &[USeries]) -> Vec<u64> {
        let mut out = self.ring.one();
        for (i, (f, q)) in fs.iter().zip(&self.factors).enumerate() {
            let coords = q.ring().coords(&q.reduce(f));
            let mut elem = self.ring.zero();
            for (k, c) in coords.iter().enumerate() {
                let mut e = vec![0usize; self.factors.len()];
                e[i] = k;
                self.ring.set_coord(&mut elem, self.ring.index_of(&e), c);
            }
            out = self.ring.mul(&out, &elem);
        }
        out
    }

    pub fn report(&self) -> Value {
        json!({
            "rank": self.rank(),
            "factors": self.factors.iter().map(|f| f.report()).collect::<Vec<_>>(),
        })
    }
}

pub fn abelian_ring(orders: &[u64], law: &Fgl) -> Result<AbelianRing> {
    let factors = orders.iter().map(|&m| cyclic_ring(m, law)).collect::<Result<Vec<_>>>()?;
    let moduli: Vec<Poly> = factors.iter().map(|f| f.modulus()).collect();
    let ring = Arc::new(TensorQuotient::new(law.ring(), &moduli)?);
    Ok(AbelianRing { factors, ring })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::build_ptypical;
    use crate::series::e0::PrecisionCtx;
    use crate::series::ring;

    fn law(n: usize) -> Fgl {
        build_ptypical(&PrecisionCtx::new(3, 4, n, 2, 12).unwrap()).unwrap()
    }

    #[test]
    fn ranks() {
        let f = law(1);
        assert_eq!(cyclic_ring(5, &f).unwrap().rank(), 1);
        assert_eq!(cyclic_ring(9, &f).unwrap().rank(), 9);
        assert_eq!(cyclic_ring(6, &f).unwrap().rank(), 3);
        assert_eq!(cyclic_ring(3, &law(2)).unwrap().rank(), 9);
        assert_eq!(abelian_ring(&[3, 3], &f).unwrap().rank(), 9);
        assert_eq!(abelian_ring(&[4, 3], &f).unwrap().rank(), 3);
        assert_eq!(abelian_ring(&[7], &f).unwrap().rank(), 1);
    }

    #[test]
    fn modulus_reduces_to_zero() {
        let f = law(1);
        let c = cyclic_ring(9, &f).unwrap();
        let len = c.vanishing_degree() + 1;
        let s = f.endomorphism(9, len).unwrap();
        assert!(ring::is_zero(&c.reduce(&s)));
        let g = USeries::from_coeffs(c.base(), len, &c.modulus());
        assert!(ring::is_zero(&c.reduce(&g)));
        // [m](x) for m = 6 is a unit times [3](x), so it also dies in E0(BC_6)
        let c6 = cyclic_ring(6, &f).unwrap();
        let s6 = f.endomorphism(6, c6.vanishing_degree() + 1).unwrap();
        assert!(ring::is_zero(&c6.reduce(&s6)));
    }
}
