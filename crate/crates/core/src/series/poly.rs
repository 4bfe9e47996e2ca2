//! Dense polynomials over a coefficient ring, coefficients low degree first.

use crate::error::{Error, Result};
use crate::series::ring::{self, CoeffRing};

pub type Poly = Vec<Vec<u64>>;

pub fn trim<A: CoeffRing>(_r: &A, a: &mut Poly) {
    while a.len() > 1 && ring::is_zero(a.last().unwrap()) {
        a.pop();
    }
}

pub fn mul<A: CoeffRing>(r: &A, a: &[Vec<u64>], b: &[Vec<u64>]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let al = r.acc_len();
    let n = a.len() + b.len() - 1;
    let mut acc = vec![0u128; n * al];
    for (i, ai) in a.iter().enumerate() {
        if ring::is_zero(ai) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r.mul_acc(ai, bj, &mut acc[(i + j) * al..(i + j + 1) * al]);
        }
    }
    (0..n)
        .map(|k| {
            let mut c = r.zero();
            r.finish(&acc[k * al..(k + 1) * al], &mut c);
            c
        })
        .collect()
}

pub fn add<A: CoeffRing>(r: &A, a: &[Vec<u64>], b: &[Vec<u64>]) -> Poly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| {
            let mut c = a.get(k).cloned().unwrap_or_else(|| r.zero());
            if let Some(bk) = b.get(k) {
                ring::vadd(r.padic(), &mut c, bk);
            }
            c
        })
        .collect()
}

pub fn sub<A: CoeffRing>(r: &A, a: &[Vec<u64>], b: &[Vec<u64>]) -> Poly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| {
            let mut c = a.get(k).cloned().unwrap_or_else(|| r.zero());
            if let Some(bk) = b.get(k) {
                ring::vsub(r.padic(), &mut c, bk);
            }
            c
        })
        .collect()
}

/// Division by a monic polynomial: `a = q·b + rem` with `deg rem < deg b`.
pub fn divrem_monic<A: CoeffRing>(r: &A, a: &[Vec<u64>], b: &[Vec<u64>]) -> Result<(Poly, Poly)> {
    let db = b.len().checked_sub(1).ok_or_else(|| Error::InvalidInput("empty divisor".into()))?;
    if b[db] != r.one() {
        return Err(Error::InvalidInput("divisor must be monic".into()));
    }
    let mut rem: Poly = a.to_vec();
    if rem.len() <= db {
        rem.resize(db.max(1), r.zero());
        return Ok((vec![r.zero()], rem));
    }
    let mut q = vec![r.zero(); rem.len() - db];
    for k in (db..rem.len()).rev() {
        let c = std::mem::replace(&mut rem[k], r.zero());
        if ring::is_zero(&c) {
            continue;
        }
        for (i, bi) in b.iter().enumerate().take(db) {
            let t = r.mul(&c, bi);
            ring::vsub(r.padic(), &mut rem[k - db + i], &t);
        }
        q[k - db] = c;
    }
    rem.truncate(db.max(1));
    Ok((q, rem))
}

pub fn is_zero(a: &[Vec<u64>]) -> bool {
    a.iter().all(|c| ring::is_zero(c))
}

/// Monic polynomial with integer-embedded coefficients, for tests and examples.
pub fn from_ints<A: CoeffRing>(r: &A, c: &[i64]) -> Poly {
    c.iter().map(|&x| r.from_int(x)).collect()
}
