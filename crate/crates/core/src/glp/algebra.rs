//! Structure constants of `E0(BGL_p(F_q))` through its image under `(β, α)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::glp::dmodel::{alpha_of_sigmas, build_d, build_d_gamma, DGammaModel, DModel};
use crate::glp::params::GLpParams;
use crate::glp::tclass::{build_t, divide_by_alpha_t, TClass};
use crate::linalg;
use crate::series::e0::E0Ring;
use crate::series::ring::{self, CoeffRing};
use crate::smallrings::algebra::FiniteAlgebra;
use crate::smallrings::torus::{torus_invariant_ring, TorusInvariants};

/// Everything needed to multiply pairs `(β-image, α-image)`.
pub struct GlpModel {
    pub params: GLpParams,
    pub d: DModel,
    pub dg: DGammaModel,
    pub torus: TorusInvariants,
    pub t: TClass,
    /// `α(σ_i)` for `i = 1..=p`.
    pub alpha: Vec<Vec<u64>>,
    alpha_cache: Mutex<HashMap<Vec<u32>, Vec<u64>>>,
}

pub fn build_model(params: &GLpParams) -> Result<GlpModel> {
    let d = build_d(params)?;
    let dg = build_d_gamma(&d)?;
    let alpha = alpha_of_sigmas(&d, &dg)?;
    if alpha[alpha.len() - 1] != dg.ring().gen() {
        return Err(Error::InvariantViolation("α(σ_p) differs from y".into()));
    }
    let torus = torus_invariant_ring(params.p() as usize, params.v, &d.law)?;
    if torus.factor.rank() != params.nr {
        return Err(Error::InvariantViolation("torus factor rank differs from p^{nv}".into()));
    }
    let t = build_t(&d, &dg, &torus)?;
    Ok(GlpModel { params: params.clone(), d, dg, torus, t, alpha, alpha_cache: Mutex::new(HashMap::new()) })
}

impl GlpModel {
    pub fn n_sigma(&self) -> usize {
        self.torus.rank()
    }

    pub fn rank(&self) -> usize {
        self.n_sigma() + self.params.big_n
    }

    /// `α(σ)^β` in `D^Γ`.
    pub fn alpha_monomial(&self, beta: &[u32]) -> Vec<u64> {
        if let Some(v) = self.alpha_cache.lock().unwrap().get(beta) {
            return v.clone();
        }
        let r = self.dg.ring();
        let out = match beta.iter().position(|&a| a > 0) {
            None => r.one(),
            Some(i) => {
                let mut prev = beta.to_vec();
                prev[i] -= 1;
                r.mul(&self.alpha_monomial(&prev), &self.alpha[i])
            }
        };
        self.alpha_cache.lock().unwrap().insert(beta.to_vec(), out.clone());
        out
    }

    pub fn labels(&self) -> Vec<String> {
        let mut l: Vec<String> = self
            .torus
            .sigma_basis
            .exponents
            .iter()
            .map(|b| {
                let parts: Vec<String> = b
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| if e == 1 { format!("s{}", i + 1) } else { format!("s{}^{e}", i + 1) })
                    .collect();
                if parts.is_empty() {
                    "1".to_string()
                } else {
                    parts.join("*")
                }
            })
            .collect();
        l.extend((0..self.params.big_n).map(|i| if i == 0 { "t".to_string() } else { format!("t*c^{i}") }));
        l
    }

    /// Coordinates on `{t c_p^i}` of `α(t)·w`, read off `w ∈ D^Γ`.
    fn t_coords(&self, w: &[u64]) -> Vec<Vec<u64>> {
        self.dg.ring().coords(w)
    }

    /// Coordinates on `S` of a pair; the left side must be symmetric.
    pub fn decompose(&self, left: &[u64], right: &[u64]) -> Result<Vec<Vec<u64>>> {
        let ctx = *self.dg.ring().padic();
        let c = self.torus.sigma_coords(left);
        let mut rem = right.to_vec();
        for (cb, beta) in c.iter().zip(&self.torus.sigma_basis.exponents) {
            if ring::is_zero(cb) {
                continue;
            }
            let t = self.dg.ring().mul(&self.dg.ring().embed(cb), &self.alpha_monomial(beta));
            ring::vsub(&ctx, &mut rem, &t);
        }
        let w = divide_by_alpha_t(&self.dg, &self.t, &rem)?;
        let mut out = c;
        out.extend(self.t_coords(&w));
        Ok(out)
    }

    /// Preimage of an arbitrary pair over `Q ⊗ E0`: coordinates `c` and `k` with
    /// `Σ c_i e_i = p^k·(left, right)`, `k` minimal.
    pub fn rational_preimage(&self, left: &[u64], right: &[u64]) -> (Vec<Vec<u64>>, u32) {
        let ctx = *self.dg.ring().padic();
        let p = ctx.p() as u32;
        let c = self.torus.sigma_coords(left);
        let mut rem = right.to_vec();
        for (cb, beta) in c.iter().zip(&self.torus.sigma_basis.exponents) {
            let t = self.dg.ring().mul(&self.dg.ring().embed(cb), &self.alpha_monomial(beta));
            ring::vsub(&ctx, &mut rem, &t);
        }
        // α(t)·(rem·s) = p^p·rem
        let w = self.dg.ring().mul(&rem, &self.t.witness);
        let v = ring::vvaluation(&ctx, &w).unwrap_or(p).min(p);
        let k = p - v;
        let scale = ctx.p_pow(k);
        let mut out: Vec<Vec<u64>> = c
            .iter()
            .map(|x| {
                let mut x = x.clone();
                ring::vscale(&ctx, &mut x, scale);
                x
            })
            .collect();
        let w = ring::vdiv_p_pow(&ctx, &w, v).expect("valuation checked");
        out.extend(self.t_coords(&w));
        (out, k)
    }

    /// Coordinates of the product of basis elements `i` and `j`.
    fn basis_product(&self, i: usize, j: usize, sigma_prod: &HashMap<Vec<u32>, Vec<Vec<u64>>>) -> Vec<Vec<u64>> {
        let ns = self.n_sigma();
        let r = self.dg.ring();
        let exps = &self.torus.sigma_basis.exponents;
        match (i < ns, j < ns) {
            (true, true) => {
                let delta: Vec<u32> = exps[i].iter().zip(&exps[j]).map(|(a, b)| a + b).collect();
                sigma_prod[&delta].clone()
            }
            (false, false) => {
                let k = (i - ns) + (j - ns);
                let w = r.mul(&self.t.right, &r.x_pow(k));
                let mut out = vec![self.d.base().zero(); ns];
                out.extend(self.t_coords(&w));
                out
            }
            _ => {
                let (s, k) = if i < ns { (i, j - ns) } else { (j, i - ns) };
                let w = r.mul(&self.alpha_monomial(&exps[s]), &r.x_pow(k));
                let mut out = vec![self.d.base().zero(); ns];
                out.extend(self.t_coords(&w));
                out
            }
        }
    }
}

pub struct GLPAlgebra {
    pub model: GlpModel,
    pub labels: Vec<String>,
    /// Output-precision coefficient ring.
    pub out: Arc<E0Ring>,
    /// `consts[pair(i, j)]` flattens the coordinates of `e_i e_j`.
    consts: Vec<Vec<u64>>,
    /// `ker(α)·ker(β) = 0` on all products `(t c_p^j)·k_β`.
    pub kernel_product_zero: bool,
    /// `{α(t) y^i}` are linearly independent (`det M_t ≠ 0`).
    pub t_span_independent: bool,
}

fn pair(i: usize, j: usize) -> usize {
    let (a, b) = if i >= j { (i, j) } else { (j, i) };
    a * (a + 1) / 2 + b
}

impl GLPAlgebra {
    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn n_sigma(&self) -> usize {
        self.model.n_sigma()
    }

    pub fn big_n(&self) -> usize {
        self.model.params.big_n
    }

    /// Index of `c_p = σ_p`.
    pub fn cp_index(&self) -> usize {
        let p = self.model.params.p() as usize;
        let mut e = vec![0u32; p];
        e[p - 1] = 1;
        self.model.torus.sigma_basis.exponents.iter().position(|b| *b == e).expect("σ_p in basis")
    }

    /// Index of `t`.
    pub fn t_index(&self) -> usize {
        self.n_sigma()
    }

    /// Index of `σ_i`.
    pub fn sigma_index(&self, i: usize) -> usize {
        let p = self.model.params.p() as usize;
        let mut e = vec![0u32; p];
        e[i - 1] = 1;
        self.model.torus.sigma_basis.exponents.iter().position(|b| *b == e).expect("σ_i in basis")
    }

    /// `e_i e_j` as output-precision coordinates.
    pub fn product(&self, i: usize, j: usize) -> Vec<Vec<u64>> {
        self.consts[pair(i, j)].chunks(self.out.dim()).map(|c| c.to_vec()).collect()
    }

    pub fn mul(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let n = self.rank();
        let dim = self.out.dim();
        let ctx = *self.out.padic();
        let mut out = vec![vec![0u64; dim]; n];
        for (i, ai) in a.iter().enumerate() {
            if ring::is_zero(ai) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if ring::is_zero(bj) {
                    continue;
                }
                let s = self.out.mul(ai, bj);
                let row = &self.consts[pair(i, j)];
                for (k, ok) in out.iter_mut().enumerate() {
                    let c = &row[k * dim..(k + 1) * dim];
                    if !ring::is_zero(c) {
                        ring::vadd(&ctx, ok, &self.out.mul(&s, c));
                    }
                }
            }
        }
        out
    }

    pub fn basis(&self, i: usize) -> Vec<Vec<u64>> {
        let mut v = vec![self.out.zero(); self.rank()];
        v[i] = self.out.one();
        v
    }

    /// Structure constants mod `(p, u_1, …, u_{n-1})`.
    pub fn residue_table(&self) -> Vec<Vec<(usize, u64)>> {
        let n = self.rank();
        let dim = self.out.dim();
        let p = self.out.padic().p();
        let mut table = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                let row = &self.consts[pair(i, j)];
                table[i * n + j] = (0..n).map(|k| (k, row[k * dim] % p)).filter(|&(_, c)| c != 0).collect();
            }
        }
        table
    }

    pub fn report(&self) -> Value {
        let m = &self.model;
        json!({
            "params": m.params.report(),
            "degrees": { "g": m.d.g.len() - 1, "h": m.dg.h.len() - 1 },
            "ranks": {
                "algebra": self.rank(),
                "expected": m.params.expected_rank(),
                "torus_invariants": self.n_sigma(),
                "d_gamma": m.dg.rank(),
            },
            "h": m.dg.report(),
            "valuation_slack": {
                "det_mt": m.t.det_mt_valuation,
                "division_loss": m.params.p(),
                "working_minus_output": m.params.division_loss(),
            },
            "kernel_product_zero": self.kernel_product_zero,
            "t_span_independent": self.t_span_independent,
        })
    }
}

pub fn glp_algebra(params: &GLpParams) -> Result<GLPAlgebra> {
    let model = build_model(params)?;
    let ns = model.n_sigma();
    let rank = model.rank();
    if rank != params.expected_rank() {
        return Err(Error::InvariantViolation(format!("rank {rank} differs from {}", params.expected_rank())));
    }
    let out = Arc::new(model.d.base().with_padic(crate::padic::PadicCtx::new(params.p(), params.ctx.nprec())?)?);
    let exps = model.torus.sigma_basis.exponents.clone();

    // σ^δ for every sum δ of two basis exponents, built in order of total degree
    let mut deltas: Vec<Vec<u32>> = Vec::new();
    {
        let mut seen = std::collections::HashSet::new();
        for i in 0..ns {
            for j in 0..=i {
                let delta: Vec<u32> = exps[i].iter().zip(&exps[j]).map(|(a, b)| a + b).collect();
                if seen.insert(delta.clone()) {
                    deltas.push(delta);
                }
            }
        }
        deltas.sort_by_key(|d| (d.iter().sum::<u32>(), d.clone()));
    }
    for delta in &deltas {
        model.torus.sigma_monomial(delta);
        model.alpha_monomial(delta);
    }
    let sigma_prod: HashMap<Vec<u32>, Vec<Vec<u64>>> = deltas
        .par_iter()
        .map(|delta| {
            let left = model.torus.sigma_monomial(delta);
            let right = model.alpha_monomial(delta);
            model.decompose(&left, &right).map(|c| (delta.clone(), c))
        })
        .collect::<Result<_>>()?;

    let pairs: Vec<(usize, usize)> = (0..rank).flat_map(|i| (0..=i).map(move |j| (i, j))).collect();
    let consts: Vec<Vec<u64>> = pairs
        .par_iter()
        .map(|&(i, j)| model.basis_product(i, j, &sigma_prod).iter().flat_map(|c| out.narrow(c)).collect())
        .collect();

    let labels = model.labels();
    let t_span_independent = model.t.det_mt_valuation.is_some();
    let mut alg = GLPAlgebra { model, labels, out, consts, kernel_product_zero: false, t_span_independent };
    alg.kernel_product_zero = kernel_products_vanish(&alg);
    Ok(alg)
}

/// `k_β = p^p σ^β - Σ_i (α(σ^β) s)_i t c_p^i` lies in `ker α`; every `(t c_p^j)·k_β` must vanish.
fn kernel_products_vanish(alg: &GLPAlgebra) -> bool {
    let m = &alg.model;
    let ns = alg.n_sigma();
    let ctx = *alg.out.padic();
    let p = m.params.p();
    let pp = ctx.from_i64((p as i64).pow(p as u32));
    let exps = &m.torus.sigma_basis.exponents;
    (0..ns).into_par_iter().all(|b| {
        let mut k = vec![alg.out.zero(); alg.rank()];
        k[b] = alg.out.scalar(&alg.out.one(), pp);
        let w = m.dg.ring().mul(&m.alpha_monomial(&exps[b]), &m.t.witness);
        for (i, c) in m.dg.ring().coords(&w).iter().enumerate() {
            let mut c = alg.out.narrow(c);
            ring::vneg(&ctx, &mut c);
            k[ns + i] = c;
        }
        (0..alg.big_n()).all(|j| alg.mul(&alg.basis(ns + j), &k).iter().all(|c| ring::is_zero(c)))
    })
}

pub struct KReduction {
    pub algebra: FiniteAlgebra,
    /// Smallest `m` with `c_p^m = 0`.
    pub cp_nilpotency: Option<usize>,
    /// `F_p`-dimension of the ideal generated by `c_p^{p^{nv}}`.
    pub ideal_dim: usize,
    /// The ideal is spanned by `c_p^{p^{nv} + i}`, `i < N`.
    pub ideal_cyclic: bool,
    pub t_equals_cp_power: bool,
    pub expected_nonzero: usize,
}

impl KReduction {
    pub fn pass(&self) -> bool {
        self.cp_nilpotency == Some(self.expected_nonzero + 1) && self.ideal_cyclic && self.t_equals_cp_power
    }

    pub fn report(&self) -> Value {
        json!({
            "dim": self.algebra.dim(),
            "cp_first_vanishing_power": self.cp_nilpotency,
            "cp_last_nonzero_expected": self.expected_nonzero,
            "ideal_dim": self.ideal_dim,
            "ideal_cyclic": self.ideal_cyclic,
            "t_equals_cp_power": self.t_equals_cp_power,
            "pass": self.pass(),
        })
    }
}

pub fn k_reduce(alg: &GLPAlgebra) -> Result<KReduction> {
    let p = alg.out.padic().p();
    let n = alg.rank();
    let mut one = vec![0u64; n];
    one[alg.sigma_index_of_one()] = 1;
    let p_usize = p as usize;
    let mut gens: Vec<usize> = (1..=p_usize).map(|i| alg.sigma_index(i)).collect();
    gens.push(alg.t_index());
    let fa = FiniteAlgebra::with_checks(p, alg.labels.clone(), alg.residue_table(), one, &gens)?;
    let nr = alg.model.params.nr;
    let big_n = alg.big_n();
    let cp = fa.basis(alg.cp_index());
    let limit = n + 1;
    let mut powers = vec![fa.one().to_vec()];
    let mut nil = None;
    for m in 1..=limit {
        let next = fa.mul(powers.last().unwrap(), &cp);
        let zero = next.iter().all(|&c| c == 0);
        powers.push(next);
        if zero {
            nil = Some(m);
            break;
        }
    }
    let cpnr = if nr < powers.len() { powers[nr].clone() } else { vec![0; n] };
    let ideal: Vec<Vec<u64>> = (0..n).map(|k| fa.mul(&cpnr, &fa.basis(k))).collect();
    let ideal_dim = linalg::fp_rank(&ideal, p);
    let chain: Vec<Vec<u64>> = (0..big_n).map(|i| powers.get(nr + i).cloned().unwrap_or_else(|| vec![0; n])).collect();
    let chain_rank = linalg::fp_rank(&chain, p);
    let mut both = ideal.clone();
    both.extend(chain.iter().cloned());
    let ideal_cyclic = chain_rank == big_n && ideal_dim == big_n && linalg::fp_rank(&both, p) == ideal_dim;
    let t_equals_cp_power = fa.basis(alg.t_index()) == cpnr;
    if nil.is_none() {
        return Err(Error::PrecisionExhausted("c_p is not nilpotent in the reduced algebra".into()));
    }
    Ok(KReduction {
        algebra: fa,
        cp_nilpotency: nil,
        ideal_dim,
        ideal_cyclic,
        t_equals_cp_power,
        expected_nonzero: big_n + nr - 1,
    })
}

impl GLPAlgebra {
    fn sigma_index_of_one(&self) -> usize {
        self.model.torus.sigma_basis.exponents.iter().position(|b| b.iter().all(|&e| e == 0)).expect("1 in basis")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::e0::PrecisionCtx;

    #[test]
    fn rank_twelve_model() {
        let params = GLpParams::new(PrecisionCtx::new(3, 2, 1, 1, 10).unwrap(), 4).unwrap();
        let alg = glp_algebra(&params).unwrap();
        assert_eq!(alg.rank(), 12);
        assert!(alg.kernel_product_zero);
        assert!(alg.t_span_independent);
        let k = k_reduce(&alg).unwrap();
        assert_eq!(k.cp_nilpotency, Some(5));
        assert_eq!(k.ideal_dim, 2);
        assert!(k.pass());
    }
}
