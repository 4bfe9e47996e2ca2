//! Finite-dimensional commutative `F_p`-algebras given by structure constants.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::linalg;

/// Largest dimension accepted by [`FiniteAlgebra::new`].
pub const MAX_DIM: usize = 512;

#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    p: u64,
    labels: Vec<String>,
    /// `table[i * dim + j]` is `e_i e_j` as a sparse vector.
    table: Vec<Vec<(usize, u64)>>,
    one: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusReport {
    pub socle_dim: usize,
    pub socle: Vec<Vec<u64>>,
    pub pass: bool,
}

impl FiniteAlgebra {
    /// Checks commutativity, associativity and the unit.
    pub fn new(p: u64, labels: Vec<String>, table: Vec<Vec<(usize, u64)>>, one: Vec<u64>) -> Result<Self> {
        let n = labels.len();
        Self::with_checks(p, labels, table, one, &(0..n).collect::<Vec<_>>())
    }

    /// Like [`FiniteAlgebra::new`], but associativity `(e_i e_j) e_k = e_i (e_j e_k)`
    /// is only checked for `k` in `assoc`.
    pub fn with_checks(
        p: u64,
        labels: Vec<String>,
        table: Vec<Vec<(usize, u64)>>,
        one: Vec<u64>,
        assoc: &[usize],
    ) -> Result<Self> {
        let n = labels.len();
        if n > MAX_DIM {
            return Err(Error::TooLarge(format!("dimension {n} exceeds {MAX_DIM}")));
        }
        if table.len() != n * n || one.len() != n {
            return Err(Error::InvalidInput("structure constant table has the wrong shape".into()));
        }
        let a = FiniteAlgebra { p, labels, table, one };
        for i in 0..n {
            let ei = a.basis(i);
            if a.mul(&a.one, &ei) != ei {
                return Err(Error::InvariantViolation(format!("unit fails on {}", a.labels[i])));
            }
            for j in 0..i {
                if a.mul(&ei, &a.basis(j)) != a.mul(&a.basis(j), &ei) {
                    return Err(Error::InvariantViolation(format!("not commutative at ({i},{j})")));
                }
            }
        }
        for i in 0..n {
            for j in 0..=i {
                let eij = a.mul(&a.basis(i), &a.basis(j));
                for &k in assoc {
                    let ek = a.basis(k);
                    if a.mul(&eij, &ek) != a.mul(&a.basis(i), &a.mul(&a.basis(j), &ek)) {
                        return Err(Error::InvariantViolation(format!("not associative at ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(a)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn one(&self) -> &[u64] {
        &self.one
    }

    pub fn basis(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0; self.dim()];
        v[i] = 1;
        v
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let n = self.dim();
        let mut out = vec![0u64; n];
        let nb: Vec<(usize, u64)> = b.iter().copied().enumerate().filter(|&(_, y)| y != 0).collect();
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for &(j, y) in &nb {
                let s = x * y % self.p;
                for &(k, c) in &self.table[i * n + j] {
                    out[k] = (out[k] + s * c) % self.p;
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &[u64], e: u64) -> Vec<u64> {
        let mut r = self.one.clone();
        for _ in 0..e {
            r = self.mul(&r, a);
        }
        r
    }

    /// Nilradical, as the kernel of `a ↦ a^{p^k}` with `p^k >= dim`.
    pub fn radical(&self) -> Vec<Vec<u64>> {
        let n = self.dim();
        let mut e = 1u64;
        while (e as usize) < n.max(2) {
            e *= self.p;
        }
        // columns of the (linear) Frobenius power map
        let cols: Vec<Vec<u64>> = (0..n).map(|i| self.pow(&self.basis(i), e)).collect();
        let m: Vec<Vec<u64>> = (0..n).map(|r| (0..n).map(|c| cols[c][r]).collect()).collect();
        linalg::fp_nullspace(&m, n, self.p)
    }

    /// Local with residue field `F_p`: the radical has codimension one.
    pub fn is_local(&self) -> bool {
        self.radical().len() + 1 == self.dim()
    }

    /// `ann(m)` for the maximal ideal `m`.
    pub fn socle(&self) -> Result<Vec<Vec<u64>>> {
        let rad = self.radical();
        if rad.len() + 1 != self.dim() {
            return Err(Error::NotLocal(format!("radical has dimension {} in dimension {}", rad.len(), self.dim())));
        }
        let n = self.dim();
        let mut rows = Vec::new();
        for r in &rad {
            let cols: Vec<Vec<u64>> = (0..n).map(|i| self.mul(r, &self.basis(i))).collect();
            for k in 0..n {
                rows.push((0..n).map(|i| cols[i][k]).collect());
            }
        }
        if rows.is_empty() {
            return Ok((0..n).map(|i| self.basis(i)).collect());
        }
        Ok(linalg::fp_nullspace(&rows, n, self.p))
    }

    /// One-dimensional socle, and `(a, b) ↦ θ(ab)` nondegenerate for `θ` dual to the socle generator.
    pub fn frobenius_check(&self) -> Result<FrobeniusReport> {
        let soc = self.socle()?;
        if soc.len() != 1 {
            return Ok(FrobeniusReport { socle_dim: soc.len(), socle: soc, pass: false });
        }
        let s = &soc[0];
        let idx = s.iter().position(|&c| c != 0).expect("nonzero socle vector");
        let n = self.dim();
        let gram: Vec<Vec<u64>> =
            (0..n).map(|i| (0..n).map(|j| self.mul(&self.basis(i), &self.basis(j))[idx]).collect()).collect();
        let pass = linalg::fp_rank(&gram, self.p) == n;
        Ok(FrobeniusReport { socle_dim: 1, socle: soc, pass })
    }

    /// Fixed subalgebra of a group of basis permutations; requires `p ∤ |G|`.
    pub fn invariant_subalgebra(&self, perms: &[Vec<usize>]) -> Result<FiniteAlgebra> {
        let group = close_group(self.dim(), perms)?;
        if (group.len() as u64).is_multiple_of(self.p) {
            return Err(Error::BadGroupOrder(format!("p = {} divides |G| = {}", self.p, group.len())));
        }
        self.orbit_subalgebra(&group)
    }

    /// Span of orbit sums, with induced structure constants. No condition on the group order.
    pub fn orbit_subalgebra(&self, perms: &[Vec<usize>]) -> Result<FiniteAlgebra> {
        let group = close_group(self.dim(), perms)?;
        let n = self.dim();
        let mut orbit_of = vec![usize::MAX; n];
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            if orbit_of[i] != usize::MAX {
                continue;
            }
            let orb: BTreeSet<usize> = group.iter().map(|g| g[i]).collect();
            for &j in &orb {
                orbit_of[j] = orbits.len();
            }
            orbits.push(orb.into_iter().collect());
        }
        let sums: Vec<Vec<u64>> = orbits
            .iter()
            .map(|o| {
                let mut v = vec![0u64; n];
                for &j in o {
                    v[j] = 1;
                }
                v
            })
            .collect();
        let m = orbits.len();
        let mut table = Vec::with_capacity(m * m);
        for a in &sums {
            for b in &sums {
                let prod = self.mul(a, b);
                let mut coords = Vec::new();
                for (k, o) in orbits.iter().enumerate() {
                    let c = prod[o[0]];
                    if o.iter().any(|&j| prod[j] != c) {
                        return Err(Error::InvariantViolation("permutations are not algebra automorphisms".into()));
                    }
                    if c != 0 {
                        coords.push((k, c));
                    }
                }
                table.push(coords);
            }
        }
        let one: Vec<u64> = orbits.iter().map(|o| self.one[o[0]]).collect();
        let labels: Vec<String> =
            orbits.iter().map(|o| o.iter().map(|&j| self.labels[j].as_str()).collect::<Vec<_>>().join("+")).collect();
        FiniteAlgebra::new(self.p, labels, table, one)
    }
}

fn close_group(n: usize, gens: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    for g in gens {
        let mut seen = vec![false; n];
        if g.len() != n || g.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::InvalidInput("generator is not a permutation of the basis".into()));
        }
    }
    let id: Vec<usize> = (0..n).collect();
    let mut seen: HashMap<Vec<usize>, ()> = HashMap::new();
    seen.insert(id.clone(), ());
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y: Vec<usize> = x.iter().map(|&i| g[i]).collect();
            if seen.insert(y.clone(), ()).is_none() {
                if seen.len() > 1 << 16 {
                    return Err(Error::TooLarge("permutation group too large".into()));
                }
                frontier.push(y);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = seen.into_keys().collect();
    out.sort();
    Ok(out)
}

/// `F_p[x_1..x_d]/(x_1^e, …, x_d^e)` on the monomial basis.
pub fn truncated_polynomial_algebra(p: u64, d: usize, e: u32) -> Result<FiniteAlgebra> {
    let n = (e as usize).checked_pow(d as u32).filter(|&n| n <= MAX_DIM).ok_or_else(|| Error::TooLarge("dimension".into()))?;
    let exps: Vec<Vec<u32>> = (0..n)
        .map(|mut i| {
            (0..d)
                .map(|_| {
                    let a = (i % e as usize) as u32;
                    i /= e as usize;
                    a
                })
                .collect()
        })
        .collect();
    let index = |x: &[u32]| -> usize { x.iter().rev().fold(0, |acc, &a| acc * e as usize + a as usize) };
    let mut table = Vec::with_capacity(n * n);
    for a in &exps {
        for b in &exps {
            let s: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            table.push(if s.iter().all(|&k| k < e) { vec![(index(&s), 1)] } else { Vec::new() });
        }
    }
    let labels = exps
        .iter()
        .map(|x| {
            let parts: Vec<String> =
                x.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| format!("x{}^{k}", i + 1)).collect();
            if parts.is_empty() {
                "1".to_string()
            } else {
                parts.join("*")
            }
        })
        .collect();
    let mut one = vec![0u64; n];
    one[0] = 1;
    FiniteAlgebra::new(p, labels, table, one)
}

/// Basis permutations induced by permuting the variables of [`truncated_polynomial_algebra`].
pub fn variable_permutations(d: usize, e: u32, gens: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = (e as usize).pow(d as u32);
    gens.iter()
        .map(|sigma| {
            (0..n)
                .map(|mut i| {
                    let mut x = vec![0usize; d];
                    for xi in x.iter_mut() {
                        *xi = i % e as usize;
                        i /= e as usize;
                    }
                    let mut y = vec![0usize; d];
                    for (k, &s) in sigma.iter().enumerate() {
                        y[s] = x[k];
                    }
                    y.iter().rev().fold(0, |acc, &a| acc * e as usize + a)
                })
                .collect()
        })
        .collect()
}

/// Transpositions `(i, i+1)` generating `Σ_d`.
pub fn symmetric_generators(d: usize) -> Vec<Vec<usize>> {
    (0..d.saturating_sub(1))
        .map(|i| {
            let mut s: Vec<usize> = (0..d).collect();
            s.swap(i, i + 1);
            s
        })
        .collect()
}

/// `(F_p[x_1..x_d]/(x_i^e))^{Σ_d}`, built from orbit sums.
pub fn symmetric_invariants(p: u64, d: usize, e: u32) -> Result<FiniteAlgebra> {
    let a = truncated_polynomial_algebra(p, d, e)?;
    let perms = variable_permutations(d, e, &symmetric_generators(d));
    a.orbit_subalgebra(&perms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_line() {
        let a = truncated_polynomial_algebra(5, 1, 4).unwrap();
        let s = a.socle().unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0], vec![0, 0, 0, 1]);
        assert!(a.frobenius_check().unwrap().pass);
    }

    #[test]
    fn two_variables() {
        let a = truncated_polynomial_algebra(3, 2, 3).unwrap();
        let s = a.socle().unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0][8], 1);
        let inv = a.invariant_subalgebra(&variable_permutations(2, 3, &symmetric_generators(2))).unwrap();
        assert_eq!(inv.dim(), 6);
        assert!(inv.frobenius_check().unwrap().pass);
        assert_eq!(a.invariant_subalgebra(&[]).unwrap().dim(), 9);
    }

    #[test]
    fn swap_of_copies() {
        // two copies of F_3[x]/x^3 swapped: same count as the symmetric square
        let a = truncated_polynomial_algebra(3, 2, 3).unwrap();
        let swap = variable_permutations(2, 3, &[vec![1, 0]]);
        assert_eq!(a.invariant_subalgebra(&swap).unwrap().dim(), 6);
    }

    #[test]
    fn group_order_gate() {
        let a = truncated_polynomial_algebra(3, 3, 3).unwrap();
        let perms = variable_permutations(3, 3, &symmetric_generators(3));
        assert!(matches!(a.invariant_subalgebra(&perms), Err(Error::BadGroupOrder(_))));
    }

    #[test]
    fn not_local() {
        // F_3 × F_3
        let t = vec![vec![(0, 1)], vec![], vec![], vec![(1, 1)]];
        let a = FiniteAlgebra::new(3, vec!["e".into(), "f".into()], t, vec![1, 1]).unwrap();
        assert!(matches!(a.socle(), Err(Error::NotLocal(_))));
    }
}
