//! `E0(BT_d)^{Σ_d}` inside the d-fold tensor power of `E0(BC_{p^v})`.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fgl::Fgl;
use crate::linalg::{self, Mat};
use crate::series::e0::E0Ring;
use crate::series::mseries::{invariant_basis, SymBasisIndex, SymBasisKind};
use crate::series::ring::{self, CoeffRing};
use crate::series::tensor::TensorQuotient;
use crate::smallrings::cyclic::{cyclic_ring, QuotientRing};

pub struct TorusInvariants {
    pub d: usize,
    pub v: u32,
    pub factor: QuotientRing,
    ring: Arc<TensorQuotient<E0Ring>>,
    pub sigma_basis: SymBasisIndex,
    pub orbit_basis: SymBasisIndex,
    /// Column `j` holds the orbit-sum coordinates of the `j`-th sigma monomial.
    pub change: Mat,
    change_inv: Mat,
    sigmas: Vec<Vec<u64>>,
    sigma_cache: std::sync::Mutex<HashMap<Vec<u32>, Vec<u64>>>,
}

impl TorusInvariants {
    pub fn rank(&self) -> usize {
        self.sigma_basis.len()
    }

    pub fn ring(&self) -> &Arc<TensorQuotient<E0Ring>> {
        &self.ring
    }

    pub fn base(&self) -> &Arc<E0Ring> {
        self.factor.base()
    }

    /// `σ_i(x_1..x_d)`, `1 <= i <= d`.
    pub fn sigma(&self, i: usize) -> &[u64] {
        &self.sigmas[i - 1]
    }

    /// `σ^α`, cached.
    pub fn sigma_monomial(&self, alpha: &[u32]) -> Vec<u64> {
        if let Some(v) = self.sigma_cache.lock().unwrap().get(alpha) {
            return v.clone();
        }
        let out = match alpha.iter().position(|&a| a > 0) {
            None => self.ring.one(),
            Some(i) => {
                let mut prev = alpha.to_vec();
                prev[i] -= 1;
                let base = self.sigma_monomial(&prev);
                self.ring.mul(&base, &self.sigmas[i])
            }
        };
        self.sigma_cache.lock().unwrap().insert(alpha.to_vec(), out.clone());
        out
    }

    /// Coefficients at the orbit representatives (sorted exponents).
    pub fn orbit_coords(&self, a: &[u64]) -> Vec<Vec<u64>> {
        self.orbit_basis
            .exponents
            .iter()
            .map(|e| {
                let e: Vec<usize> = e.iter().map(|&k| k as usize).collect();
                self.ring.coord(a, self.ring.index_of(&e)).to_vec()
            })
            .collect()
    }

    pub fn is_symmetric(&self, a: &[u64]) -> bool {
        (0..self.d.saturating_sub(1)).all(|i| {
            let mut perm: Vec<usize> = (0..self.d).collect();
            perm.swap(i, i + 1);
            self.ring.permute(a, &perm) == a
        })
    }

    /// Coordinates of a symmetric element in the sigma-monomial basis.
    pub fn sigma_coords(&self, a: &[u64]) -> Vec<Vec<u64>> {
        linalg::mat_vec(self.base().as_ref(), &self.change_inv, &self.orbit_coords(a))
    }

    /// `Σ_j c_j σ^{β_j}`.
    pub fn from_sigma_coords(&self, c: &[Vec<u64>]) -> Vec<u64> {
        let mut out = self.ring.zero();
        let ctx = *self.ring.padic();
        for (cj, beta) in c.iter().zip(&self.sigma_basis.exponents) {
            if ring::is_zero(cj) {
                continue;
            }
            let s = self.sigma_monomial(beta);
            let emb = self.ring.embed(cj);
            let t = self.ring.mul(&s, &emb);
            ring::vadd(&ctx, &mut out, &t);
        }
        out
    }

    pub fn report(&self) -> Value {
        json!({
            "d": self.d,
            "v": self.v,
            "rank": self.rank(),
            "factor_rank": self.factor.rank(),
            "sigma_basis": self.sigma_basis.exponents,
            "orbit_basis": self.orbit_basis.exponents,
        })
    }
}

/// Build the invariants with both bases and check the change of basis is invertible.
pub fn torus_invariant_ring(d: usize, v: u32, law: &Fgl) -> Result<TorusInvariants> {
    if d == 0 || v == 0 {
        return Err(Error::InvalidInput("need d >= 1 and v >= 1".into()));
    }
    let p = law.ctx().p();
    let factor = cyclic_ring(p.pow(v), law)?;
    let nr = factor.rank();
    let ring = Arc::new(TensorQuotient::new(law.ring(), &vec![factor.modulus(); d])?);
    let sigmas: Vec<Vec<u64>> = (1..=d)
        .map(|k| {
            let mut s = ring.zero();
            for subset in subsets(d, k) {
                let mut e = vec![0usize; d];
                for i in subset {
                    e[i] = 1;
                }
                let idx = ring.index_of(&e);
                let mut c = ring.coord(&s, idx).to_vec();
                ring::vadd(ring.padic(), &mut c, &law.ring().one());
                ring.set_coord(&mut s, idx, &c);
            }
            s
        })
        .collect();
    let sigma_basis = invariant_basis(d, nr, SymBasisKind::SigmaMonomial);
    let orbit_basis = invariant_basis(d, nr, SymBasisKind::OrbitSum);
    let mut t = TorusInvariants {
        d,
        v,
        factor,
        ring,
        sigma_basis,
        orbit_basis,
        change: Vec::new(),
        change_inv: Vec::new(),
        sigmas,
        sigma_cache: std::sync::Mutex::new(HashMap::new()),
    };
    if t.sigma_basis.len() != t.orbit_basis.len() {
        return Err(Error::BasisFailure("sigma and orbit bases differ in size".into()));
    }
    let cols: Vec<Vec<Vec<u64>>> = t.sigma_basis.exponents.clone().iter().map(|b| t.orbit_coords(&t.sigma_monomial(b))).collect();
    let n = cols.len();
    t.change = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
    t.change_inv = linalg::local_inverse(t.base().as_ref(), &t.change)?;
    Ok(t)
}

fn subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << d) {
        if mask.count_ones() as usize == k {
            out.push((0..d).filter(|i| mask >> i & 1 == 1).collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgl::build_ptypical;
    use crate::series::e0::PrecisionCtx;

    #[test]
    fn ranks_and_roundtrip() {
        let law = build_ptypical(&PrecisionCtx::new(3, 4, 1, 1, 12).unwrap()).unwrap();
        let t = torus_invariant_ring(3, 1, &law).unwrap();
        assert_eq!(t.rank(), 10);
        assert_eq!(torus_invariant_ring(1, 1, &law).unwrap().rank(), 3);
        let s = t.sigma_monomial(&[2, 0, 1]);
        assert!(t.is_symmetric(&s));
        let c = t.sigma_coords(&s);
        assert_eq!(t.from_sigma_coords(&c), s);
        // an orbit sum is a combination of sigma monomials
        let m = {
            let mut a = t.ring().zero();
            for e in [[2usize, 1, 0], [2, 0, 1], [1, 2, 0], [0, 2, 1], [1, 0, 2], [0, 1, 2]] {
                let x = t.ring().monomial(&e);
                ring::vadd(t.ring().padic(), &mut a, &x);
            }
            a
        };
        assert_eq!(t.from_sigma_coords(&t.sigma_coords(&m)), m);
    }
}
