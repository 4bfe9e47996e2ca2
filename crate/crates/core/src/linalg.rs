//! Dense linear algebra over `F_p` and over local coefficient rings.

use crate::error::{Error, Result};
use crate::padic::PadicCtx;
use crate::series::ring::{self, CoeffRing};

/// Matrix over a coefficient ring: `m[i][j]` is a ring element.
pub type Mat = Vec<Vec<Vec<u64>>>;

fn inv_mod_p(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Row echelon form in place; returns pivot columns.
pub fn fp_echelon(m: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(k) = (r..rows).find(|&k| !m[k][c].is_multiple_of(p)) else { continue };
        m.swap(r, k);
        let iv = inv_mod_p(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = *x % p * iv % p;
        }
        for k in 0..rows {
            if k != r && !m[k][c].is_multiple_of(p) {
                let f = m[k][c] % p;
                for j in 0..cols {
                    m[k][j] = (m[k][j] % p + p * p - f * m[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn fp_rank(m: &[Vec<u64>], p: u64) -> usize {
    let mut w = m.to_vec();
    fp_echelon(&mut w, p).len()
}

/// Basis of `{v : M v = 0}`.
pub fn fp_nullspace(m: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut w = m.to_vec();
    let pivots = fp_echelon(&mut w, p);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - w[r][f] % p) % p;
            }
            v
        })
        .collect()
}

/// Solve `M z = b` over `F_p`, if solvable.
pub fn fp_solve(m: &[Vec<u64>], b: &[u64], p: u64) -> Option<Vec<u64>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<u64>> = m
        .iter()
        .zip(b)
        .map(|(r, &x)| {
            let mut r = r.clone();
            r.push(x % p);
            r
        })
        .collect();
    let pivots = fp_echelon(&mut aug, p);
    if pivots.contains(&cols) {
        return None;
    }
    let mut z = vec![0u64; cols];
    for (r, &pc) in pivots.iter().enumerate() {
        z[pc] = aug[r][cols];
    }
    Some(z)
}

pub fn identity<A: CoeffRing>(r: &A, n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| if i == j { r.one() } else { r.zero() }).collect()).collect()
}

/// Inverse over a local ring, pivoting on units. Fails if the matrix is singular mod the maximal ideal.
pub fn local_inverse<A: CoeffRing>(r: &A, m: &Mat) -> Result<Mat> {
    let n = m.len();
    let mut a = m.clone();
    let mut b = identity(r, n);
    let ctx = *r.padic();
    for c in 0..n {
        let k =
            (c..n).find(|&k| r.is_unit(&a[k][c])).ok_or_else(|| Error::BasisFailure(format!("no unit pivot in column {c}")))?;
        a.swap(c, k);
        b.swap(c, k);
        let iv = r.inv(&a[c][c])?;
        for j in 0..n {
            a[c][j] = r.mul(&a[c][j], &iv);
            b[c][j] = r.mul(&b[c][j], &iv);
        }
        for k in 0..n {
            if k == c || ring::is_zero(&a[k][c]) {
                continue;
            }
            let f = a[k][c].clone();
            for j in 0..n {
                let t = r.mul(&f, &a[c][j]);
                ring::vsub(&ctx, &mut a[k][j], &t);
                let t = r.mul(&f, &b[c][j]);
                ring::vsub(&ctx, &mut b[k][j], &t);
            }
        }
    }
    Ok(b)
}

pub fn mat_vec<A: CoeffRing>(r: &A, m: &Mat, v: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let al = r.acc_len();
    m.iter()
        .map(|row| {
            let mut acc = vec![0u128; al];
            for (a, b) in row.iter().zip(v) {
                if !ring::is_zero(a) && !ring::is_zero(b) {
                    r.mul_acc(a, b, &mut acc);
                }
            }
            let mut out = r.zero();
            r.finish(&acc, &mut out);
            out
        })
        .collect()
}

/// `v_p(det M)` for an integer matrix mod `p^N`, by elimination on minimal-valuation pivots.
/// `None` if the determinant vanishes at this precision.
pub fn det_valuation(ctx: &PadicCtx, m: &[Vec<u64>]) -> Option<u32> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut total = 0u32;
    for c in 0..n {
        let mut best: Option<(usize, usize, u32)> = None;
        for i in c..n {
            for j in c..n {
                if let Some(v) = ctx.valuation(a[i][j]).finite() {
                    if best.is_none_or(|b| v < b.2) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let (i, j, v) = best?;
        a.swap(c, i);
        for row in a.iter_mut() {
            row.swap(c, j);
        }
        total += v;
        // pivot = p^v·unit; clear below using exact division
        let unit = ctx.div_p_pow(a[c][c], v).expect("valuation");
        let uinv = ctx.inv(unit).ok()?;
        for k in c + 1..n {
            if a[k][c] == 0 {
                continue;
            }
            let f = ctx.mul(ctx.div_p_pow(a[k][c], v).expect("minimal valuation"), uinv);
            for jj in c..n {
                a[k][jj] = ctx.sub(a[k][jj], ctx.mul(f, a[c][jj]));
            }
        }
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_and_rank() {
        let m = vec![vec![1, 2, 0], vec![2, 1, 0]];
        assert_eq!(fp_rank(&m, 3), 1);
        let ns = fp_nullspace(&m, 3, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &m {
                let s: u64 = row.iter().zip(v).map(|(a, b)| a * b).sum();
                assert_eq!(s % 3, 0);
            }
        }
    }

    #[test]
    fn solve_fp() {
        let m = vec![vec![1, 1], vec![0, 1]];
        assert_eq!(fp_solve(&m, &[2, 1], 5), Some(vec![1, 1]));
        let s = vec![vec![1, 1], vec![1, 1]];
        assert_eq!(fp_solve(&s, &[0, 1], 5), None);
    }

    #[test]
    fn det_val() {
        let ctx = PadicCtx::new(3, 6).unwrap();
        let m = vec![vec![3, 1], vec![0, 9]];
        assert_eq!(det_valuation(&ctx, &m), Some(3));
        let z = vec![vec![3, 3], vec![3, 3]];
        assert_eq!(det_valuation(&ctx, &z), None);
    }
}
