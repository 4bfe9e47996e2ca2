//! The cyclic subgroup `A = ⟨a⟩ ⊂ GL_p(F_q)` of order `p^{v+1}` and its normalizer.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::glgroups::field::{Elem, Fq};
use crate::glgroups::matrix::{null_space, GLMat};
use crate::padic::is_prime;

/// Largest `q^{p^2}` for which `GL_p(F_q)` is scanned exhaustively.
pub const SCAN_LIMIT: u64 = 1 << 20;

#[derive(Clone, Debug)]
pub struct GeneratorA {
    pub field: Fq,
    pub p: u64,
    /// `p^v` is the p-part of `q - 1`.
    pub v: u32,
    /// Generator of the Sylow `p`-subgroup of `F_q^×`.
    pub a_v: Elem,
    /// Cyclic shift with `γ e_{i+1} = e_i`.
    pub gamma: GLMat,
    /// `γ · diag(a_v, 1, …, 1)`.
    pub a: GLMat,
}

impl GeneratorA {
    pub fn order(&self) -> u64 {
        self.p.pow(self.v + 1)
    }

    /// `a^s` for `s = 0..p^{v+1}`.
    pub fn powers(&self) -> Vec<GLMat> {
        let mut out = vec![GLMat::identity(self.p as usize)];
        for s in 1..self.order() as usize {
            out.push(out[s - 1].mul(&self.field, &self.a));
        }
        out
    }

    pub fn report(&self) -> Value {
        json!({
            "p": self.p,
            "q": self.field.q(),
            "v": self.v,
            "a_v": self.a_v,
            "a": self.a.rows(),
            "order": self.order(),
        })
    }
}

fn check_p(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidInput(format!("p = {p} must be an odd prime")));
    }
    Ok(())
}

pub fn build_generator_a(q: u64, p: u64) -> Result<GeneratorA> {
    check_p(p)?;
    let field = Fq::new(q)?;
    let (a_v, v) = field.sylow_generator(p);
    if v == 0 {
        return Err(Error::BadParams(format!("q = {q} is not 1 mod p = {p}")));
    }
    let d = p as usize;
    let mut gamma = GLMat::zero(d);
    for i in 0..d {
        gamma.set(i, (i + 1) % d, 1);
    }
    let mut dv = vec![1; d];
    dv[0] = a_v;
    let a = gamma.mul(&field, &GLMat::diag(&dv));
    let g = GeneratorA { field, p, v, a_v, gamma, a };
    let f = &g.field;
    if g.a.pow(f, p) != GLMat::scalar(d, a_v) {
        return Err(Error::InvariantViolation("a^p differs from a_v·Id".into()));
    }
    if !g.a.pow(f, g.order()).is_identity() || g.a.pow(f, g.order() / p).is_identity() {
        return Err(Error::InvariantViolation(format!("a does not have order p^{}", v + 1)));
    }
    Ok(g)
}

fn scan_size(g: &GeneratorA) -> Result<u64> {
    let n = (g.field.q() as u64).checked_pow((g.p * g.p) as u32).filter(|&n| n <= SCAN_LIMIT);
    n.ok_or_else(|| Error::TooLarge(format!("GL_{}(F_{}) has more than 2^20 candidate matrices", g.p, g.field.q())))
}

#[derive(Clone, Debug)]
pub struct NormalizerScan {
    /// `s mod p^{v+1}` with `g a g^{-1} = a^s` for some `g` normalizing `A`.
    pub exponents: BTreeSet<u64>,
    pub normalizer_order: u64,
    pub centralizer_order: u64,
    pub scanned: u64,
}

impl NormalizerScan {
    pub fn report(&self) -> Value {
        json!({
            "exponents": self.exponents,
            "normalizer_order": self.normalizer_order,
            "centralizer_order": self.centralizer_order,
            "scanned": self.scanned,
        })
    }
}

pub fn normalizer_exponents(g: &GeneratorA) -> Result<NormalizerScan> {
    let total = scan_size(g)?;
    let f = &g.field;
    let d = g.p as usize;
    let q = f.q();
    let pw = g.powers();
    let (set, norm) = (0..total)
        .into_par_iter()
        .fold(
            || (BTreeSet::new(), 0u64),
            |(mut set, mut count), idx| {
                let m = GLMat::from_index(d, q, idx);
                let ma = m.mul(f, &g.a);
                if let Some(s) = pw.iter().position(|x| x.mul(f, &m) == ma) {
                    if m.det(f) != 0 {
                        set.insert(s as u64);
                        count += 1;
                    }
                }
                (set, count)
            },
        )
        .reduce(
            || (BTreeSet::new(), 0),
            |(mut a, x), (b, y)| {
                a.extend(b);
                (a, x + y)
            },
        );
    let pv = g.p.pow(g.v);
    if let Some(s) = set.iter().find(|&&s| s % pv != 1 % pv) {
        return Err(Error::InvariantViolation(format!("normalizer exponent {s} is not 1 mod p^v")));
    }
    if set.iter().any(|s| s % g.p == 0) {
        return Err(Error::InvariantViolation("normalizer exponent divisible by p".into()));
    }
    // g a g^{-1} = a^s for the same number of g per exponent
    let centralizer_order = norm / set.len() as u64;
    Ok(NormalizerScan { exponents: set, normalizer_order: norm, centralizer_order, scanned: total })
}

/// Invertible `h` with `h m h^{-1} = t`, searched in the solution space of `h m = t h`.
pub fn find_conjugator(f: &Fq, m: &GLMat, t: &GLMat) -> Option<GLMat> {
    let d = m.dim();
    let n = d * d;
    let mut rows = Vec::with_capacity(n);
    for i in 0..d {
        for j in 0..d {
            let mut row = vec![0; n];
            for k in 0..d {
                row[i * d + k] = f.add(row[i * d + k], m.get(k, j));
                row[k * d + j] = f.sub(row[k * d + j], t.get(i, k));
            }
            rows.push(row);
        }
    }
    let basis = null_space(f, &rows, n);
    let q = f.q() as u64;
    let combos = q.checked_pow(basis.len() as u32)?;
    (1..combos.min(1 << 16)).find_map(|mut c| {
        let mut h = vec![0; n];
        for b in &basis {
            let coef = (c % q) as u32;
            c /= q;
            for (x, &y) in h.iter_mut().zip(b) {
                *x = f.add(*x, f.mul(coef, y));
            }
        }
        let h = GLMat::from_rows(&h.chunks(d).map(<[Elem]>::to_vec).collect::<Vec<_>>());
        (h.det(f) != 0).then_some(h)
    })
}

#[derive(Clone, Debug)]
pub struct ConjugacyReport {
    /// Elements of `GL_p(F_q)` of order `p^{v+1}`.
    pub elements: u64,
    /// Those with a conjugator found into `{a^s : p ∤ s}`.
    pub conjugated: u64,
}

impl ConjugacyReport {
    pub fn pass(&self) -> bool {
        self.elements > 0 && self.elements == self.conjugated
    }

    pub fn report(&self) -> Value {
        json!({ "elements": self.elements, "conjugated": self.conjugated, "pass": self.pass() })
    }
}

/// Every element of order `p^{v+1}` generates a conjugate of `A`.
pub fn conjugacy_check(g: &GeneratorA) -> Result<ConjugacyReport> {
    let total = scan_size(g)?;
    let f = &g.field;
    let d = g.p as usize;
    let q = f.q();
    let ord = g.order();
    let targets: Vec<GLMat> =
        g.powers().into_iter().enumerate().filter(|(s, _)| !(*s as u64).is_multiple_of(g.p)).map(|(_, m)| m).collect();
    let (elements, conjugated) = (0..total)
        .into_par_iter()
        .map(|idx| {
            let m = GLMat::from_index(d, q, idx);
            if !m.pow(f, ord).is_identity() || m.pow(f, ord / g.p).is_identity() {
                return (0, 0);
            }
            let found = targets.iter().any(|t| find_conjugator(f, &m, t).is_some());
            (1, u64::from(found))
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(ConjugacyReport { elements, conjugated })
}

#[derive(Clone, Debug)]
pub struct Diagonalization {
    /// Columns `v_k = (ω^{ik})_i`.
    pub g: GLMat,
    /// Primitive `p`-th root of unity `ω = a_v^{p^{v-1}}`.
    pub omega: Elem,
    /// Diagonal of `g^{-1} γ g`.
    pub eigenvalues: Vec<Elem>,
}

impl Diagonalization {
    pub fn report(&self) -> Value {
        json!({ "g": self.g.rows(), "omega": self.omega, "eigenvalues": self.eigenvalues })
    }
}

pub fn diagonalize_gamma(g: &GeneratorA) -> Result<Diagonalization> {
    let f = &g.field;
    let d = g.p as usize;
    let omega = f.pow(g.a_v, g.p.pow(g.v - 1));
    let rows: Vec<Vec<Elem>> = (0..d).map(|i| (0..d).map(|k| f.pow(omega, (i * k) as u64)).collect()).collect();
    let m = GLMat::from_rows(&rows);
    let inv = m.inverse(f).map_err(|_| Error::InvariantViolation("eigenvector matrix is singular".into()))?;
    let conj = inv.mul(f, &g.gamma).mul(f, &m);
    let eigenvalues: Vec<Elem> = (0..d).map(|k| f.pow(omega, k as u64)).collect();
    if conj != GLMat::diag(&eigenvalues) {
        return Err(Error::InvariantViolation("g^{-1} γ g is not diag(1, ω, …, ω^{p-1})".into()));
    }
    if eigenvalues.iter().collect::<BTreeSet<_>>().len() != d {
        return Err(Error::InvariantViolation("eigenvalues of γ are not distinct".into()));
    }
    if g.gamma.apply(f, &m.column(0)) != m.column(0) {
        return Err(Error::InvariantViolation("γ v_0 differs from v_0".into()));
    }
    Ok(Diagonalization { g: m, omega, eigenvalues })
}

/// `F_{q^p}` as `F_q[t]/m(t)` with `m` the first monic irreducible of degree `p` in
/// lexicographic order of its coefficients (constant term first).
#[derive(Clone, Debug)]
pub struct ExtField {
    pub base: Fq,
    pub modulus: Vec<Elem>,
}

impl ExtField {
    fn deg(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn one(&self) -> Vec<Elem> {
        let mut e = vec![0; self.deg()];
        e[0] = 1;
        e
    }

    pub fn mul(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let f = &self.base;
        let r = self.deg();
        let mut prod = vec![0; 2 * r];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = f.add(prod[i + j], f.mul(x, y));
            }
        }
        for k in (r..prod.len()).rev() {
            let c = prod[k];
            if c != 0 {
                for (i, &mi) in self.modulus.iter().enumerate() {
                    prod[k - r + i] = f.sub(prod[k - r + i], f.mul(c, mi));
                }
            }
        }
        prod.truncate(r);
        prod
    }

    pub fn pow(&self, a: &[Elem], mut e: u128) -> Vec<Elem> {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Number of elements.
    pub fn size(&self) -> u128 {
        (self.base.q() as u128).pow(self.deg() as u32)
    }

    pub fn from_index(&self, mut idx: u128) -> Vec<Elem> {
        let q = self.base.q() as u128;
        (0..self.deg())
            .map(|_| {
                let c = (idx % q) as Elem;
                idx /= q;
                c
            })
            .collect()
    }

    pub fn new(base: Fq, deg: usize) -> Result<Self> {
        let q = base.q() as u64;
        let candidates = q.checked_pow(deg as u32).ok_or_else(|| Error::TooLarge("extension search".into()))?;
        for low in 0..candidates {
            let mut m = Vec::with_capacity(deg + 1);
            let mut c = low;
            for _ in 0..deg {
                m.push((c % q) as Elem);
                c /= q;
            }
            m.push(1);
            if m[0] == 0 {
                continue;
            }
            let has_root = (0..q as Elem).any(|x| {
                let mut acc = 0;
                for &mi in m.iter().rev() {
                    acc = base.add(base.mul(acc, x), mi);
                }
                acc == 0
            });
            if has_root {
                continue;
            }
            let ext = ExtField { base: base.clone(), modulus: m };
            // for prime degree, no roots and t^{q^deg} = t forces irreducibility
            let mut t = vec![0; deg];
            t[1 % deg] = 1;
            let mut x = t.clone();
            for _ in 0..deg {
                x = ext.pow(&x, q as u128);
            }
            if x == t {
                return Ok(ext);
            }
        }
        Err(Error::InvariantViolation("no irreducible polynomial found".into()))
    }
}

#[derive(Clone, Debug)]
pub struct MuEmbedding {
    pub ext: ExtField,
    /// Generator of the Sylow `p`-subgroup of `F_{q^p}^×`.
    pub zeta: Vec<Elem>,
    /// `p^w` is the order of `zeta`.
    pub w: u32,
}

impl MuEmbedding {
    /// Matrix of multiplication by `a` on the basis `1, t, …, t^{p-1}`.
    pub fn matrix(&self, a: &[Elem]) -> GLMat {
        let d = self.ext.deg();
        let mut m = GLMat::zero(d);
        let mut tj = self.ext.one();
        let mut t = vec![0; d];
        t[1 % d] = 1;
        for j in 0..d {
            let col = self.ext.mul(a, &tj);
            for (i, &c) in col.iter().enumerate() {
                m.set(i, j, c);
            }
            tj = self.ext.mul(&tj, &t);
        }
        m
    }

    /// `N(a) = a^{(q^p - 1)/(q - 1)}`, computed in `F_{q^p}`.
    pub fn norm(&self, a: &[Elem]) -> Result<Elem> {
        let q = self.ext.base.q() as u128;
        let n = self.ext.pow(a, (self.ext.size() - 1) / (q - 1));
        if n[1..].iter().any(|&c| c != 0) {
            return Err(Error::InvariantViolation("norm does not lie in F_q".into()));
        }
        Ok(n[0])
    }
}

#[derive(Clone, Debug)]
pub struct MuReport {
    pub identity: bool,
    pub homomorphism_samples: usize,
    pub homomorphism: bool,
    pub zeta_order_exponent: u32,
    pub det_is_norm: bool,
}

impl MuReport {
    pub fn pass(&self) -> bool {
        self.identity && self.homomorphism && self.det_is_norm
    }

    pub fn report(&self) -> Value {
        json!({
            "identity": self.identity,
            "homomorphism_samples": self.homomorphism_samples,
            "homomorphism": self.homomorphism,
            "zeta_order": format!("p^{}", self.zeta_order_exponent),
            "det_is_norm": self.det_is_norm,
            "pass": self.pass(),
        })
    }
}

pub fn mu_embedding(q: u64, p: u64) -> Result<MuEmbedding> {
    check_p(p)?;
    let base = Fq::new(q)?;
    let ext = ExtField::new(base, p as usize)?;
    let n = ext.size() - 1;
    let w = crate::padic::vp_u128(p, n);
    let pw = (p as u128).pow(w);
    for idx in 1..ext.size() {
        let z = ext.pow(&ext.from_index(idx), n / pw);
        if w > 0 && ext.pow(&z, pw / p as u128) != ext.one() {
            return Ok(MuEmbedding { ext, zeta: z, w });
        }
    }
    Err(Error::BadParams(format!("F_{q}^{p} has no element of order p")))
}

/// Checks `μ(1) = Id`, `μ(ab) = μ(a)μ(b)` on `samples` seeded pairs, the order of `μ(ζ)`,
/// and `det μ(a) = N(a)`.
pub fn check_mu(mu: &MuEmbedding, samples: usize, seed: u64) -> Result<MuReport> {
    let f = &mu.ext.base;
    let d = mu.ext.deg();
    let identity = mu.matrix(&mu.ext.one()).is_identity();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = mu.ext.size();
    let mut homomorphism = true;
    let mut det_is_norm = true;
    for _ in 0..samples {
        let a = mu.ext.from_index(rng.gen_range(1..size));
        let b = mu.ext.from_index(rng.gen_range(1..size));
        homomorphism &= mu.matrix(&mu.ext.mul(&a, &b)) == mu.matrix(&a).mul(f, &mu.matrix(&b));
        det_is_norm &= mu.matrix(&a).det(f) == mu.norm(&a)?;
    }
    let zm = mu.matrix(&mu.zeta);
    let order = zm.order(f, (mu.ext.size() - 1) as u64).unwrap_or(0);
    let zeta_order_exponent = crate::padic::vp_u128(d as u64, order as u128);
    if (d as u64).pow(zeta_order_exponent) != order {
        return Err(Error::InvariantViolation(format!("μ(ζ) has order {order}, not a power of p")));
    }
    Ok(MuReport { identity, homomorphism_samples: samples, homomorphism, zeta_order_exponent, det_is_norm })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_at_four() {
        let g = build_generator_a(4, 3).unwrap();
        assert_eq!(g.v, 1);
        let f = &g.field;
        assert!(g.a.pow(f, 9).is_identity());
        let omega = g.a_v;
        assert_eq!(f.order(omega), 3);
        assert_eq!(g.a.pow(f, 3), GLMat::scalar(3, omega));
        assert!(matches!(build_generator_a(5, 3), Err(Error::BadParams(_))));
    }

    #[test]
    fn diagonal_form() {
        let g = build_generator_a(4, 3).unwrap();
        let dg = diagonalize_gamma(&g).unwrap();
        assert_eq!(dg.eigenvalues[0], 1);
        assert_eq!(g.field.order(dg.omega), 3);
    }

    #[test]
    fn mu_at_four() {
        let mu = mu_embedding(4, 3).unwrap();
        assert_eq!(mu.w, 2);
        let r = check_mu(&mu, 32, 7).unwrap();
        assert!(r.pass());
        assert_eq!(r.zeta_order_exponent, 2);
    }

    #[test]
    fn conjugator_search() {
        let g = build_generator_a(4, 3).unwrap();
        let f = &g.field;
        let h = GLMat::from_rows(&[vec![1, 2, 0], vec![0, 1, 3], vec![2, 0, 1]]);
        let m = h.inverse(f).unwrap().mul(f, &g.a).mul(f, &h);
        let c = find_conjugator(f, &m, &g.a).unwrap();
        assert_eq!(c.mul(f, &m), g.a.mul(f, &c));
    }
}

#[cfg(test)]
mod scan_tests {
    use super::*;

    #[test]
    fn normalizer_and_conjugacy_in_gl3_f4() {
        let g = build_generator_a(4, 3).unwrap();
        let scan = normalizer_exponents(&g).unwrap();
        assert!(scan.exponents.contains(&1));
        assert!(scan.exponents.iter().all(|s| s % 3 == 1));
        let c = conjugacy_check(&g).unwrap();
        assert!(c.pass(), "{c:?}");
    }
}
