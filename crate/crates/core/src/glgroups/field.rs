//! Finite fields `F_q`, `q = l^r`, with log/antilog tables.
//!
//! Elements are integers `0..q` read as base-`l` digit vectors of polynomials in the
//! generator `θ`, low digit first. The modulus of `θ` is the lexicographically first
//! monic irreducible of degree `r` over `F_l`, comparing coefficients from the
//! constant term upward (`x^2+x+1` for `F_4`, `x^2+1` for `F_9`, `x^2+2` for `F_25`).

use crate::error::{Error, Result};
use crate::padic::is_prime;

pub type Elem = u32;

#[derive(Clone, Debug)]
pub struct Fq {
    l: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<Elem>,
    log: Vec<u32>,
}

const MAX_Q: u64 = 1 << 16;

fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let l = (2..=q).find(|&d| q.is_multiple_of(d))?;
    let mut r = 0;
    let mut m = q;
    while m.is_multiple_of(l) {
        m /= l;
        r += 1;
    }
    (m == 1 && is_prime(l)).then_some((l as u32, r))
}

fn digits(mut a: u32, l: u32, r: u32) -> Vec<u32> {
    (0..r)
        .map(|_| {
            let d = a % l;
            a /= l;
            d
        })
        .collect()
}

fn undigits(d: &[u32], l: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * l + c)
}

/// Product of `a` and `b` mod the monic `m`, coefficients mod `l`.
fn polymulmod(a: &[u32], b: &[u32], m: &[u32], l: u32) -> Vec<u32> {
    let r = m.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % l;
        }
    }
    for k in (r..prod.len()).rev() {
        let c = prod[k];
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let idx = k - r + i;
                prod[idx] = (prod[idx] + (l - c) * mi) % l;
            }
        }
    }
    prod.truncate(r);
    prod
}

/// True if `f` (monic) has no monic factor of degree `1..=deg/2` over `F_l`.
fn is_irreducible(f: &[u32], l: u32) -> bool {
    let r = f.len() - 1;
    for dd in 1..=r / 2 {
        for low in 0..l.pow(dd as u32) {
            let mut g = digits(low, l, dd as u32);
            g.push(1);
            if poly_rem(f, &g, l).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(f: &[u32], g: &[u32], l: u32) -> Vec<u32> {
    let mut f = f.to_vec();
    let dg = g.len() - 1;
    while f.len() > dg {
        let c = f.pop().unwrap();
        let k = f.len() - dg;
        for i in 0..dg {
            f[k + i] = (f[k + i] + (l - c) * g[i] % l) % l;
        }
    }
    f
}

impl Fq {
    pub fn new(q: u64) -> Result<Self> {
        let (l, r) = prime_power(q).ok_or_else(|| Error::InvalidInput(format!("q = {q} is not a prime power")))?;
        if q > MAX_Q {
            return Err(Error::TooLarge(format!("q = {q} exceeds 2^16")));
        }
        let q = q as u32;
        let modulus = (0..l.pow(r))
            .map(|low| {
                let mut f = digits(low, l, r);
                f.push(1);
                f
            })
            .find(|f| is_irreducible(f, l))
            .expect("an irreducible polynomial exists in every degree");
        let mulp = |a: u32, b: u32| undigits(&polymulmod(&digits(a, l, r), &digits(b, l, r), &modulus, l), l);
        let gen = (2..q)
            .chain(std::iter::once(1))
            .find(|&g| {
                let mut x = g;
                let mut k = 1;
                while x != 1 {
                    x = mulp(x, g);
                    k += 1;
                }
                k == q - 1
            })
            .expect("the unit group is cyclic");
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let mut x = 1;
        for k in 0..q - 1 {
            exp.push(x);
            log[x as usize] = k;
            x = mulp(x, gen);
        }
        Ok(Fq { l, r, q, modulus, exp, log })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn char(&self) -> u32 {
        self.l
    }

    pub fn degree(&self) -> u32 {
        self.r
    }

    /// Modulus of `θ`, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The generator of `F_q^×` used for the tables.
    pub fn primitive(&self) -> Elem {
        self.exp[1 % self.exp.len()]
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.l == 2 {
            return a ^ b;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        while a > 0 || b > 0 {
            out += (a % self.l + b % self.l) % self.l * place;
            a /= self.l;
            b /= self.l;
            place *= self.l;
        }
        out
    }

    pub fn neg(&self, a: Elem) -> Elem {
        if self.l == 2 {
            return a;
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        while a > 0 {
            out += (self.l - a % self.l) % self.l * place;
            a /= self.l;
            place *= self.l;
        }
        out
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = (self.log[a as usize] + self.log[b as usize]) % (self.q - 1);
        self.exp[k as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::NonUnit);
        }
        let k = (self.q - 1 - self.log[a as usize]) % (self.q - 1);
        Ok(self.exp[k as usize])
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if a == 0 {
            return u32::from(e == 0);
        }
        let k = (self.log[a as usize] as u64 * (e % (self.q as u64 - 1))) % (self.q as u64 - 1);
        self.exp[k as usize]
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, a: i64) -> Elem {
        a.rem_euclid(self.l as i64) as u32
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Elem) -> u64 {
        let n = (self.q - 1) as u64;
        n / num_integer::gcd(n, self.log[a as usize] as u64)
    }

    /// A generator of the Sylow `p`-subgroup of `F_q^×`, and its order exponent.
    pub fn sylow_generator(&self, p: u64) -> (Elem, u32) {
        let n = (self.q - 1) as u64;
        let v = crate::padic::vp_u128(p, n as u128);
        (self.pow(self.primitive(), n / p.pow(v)), v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fields() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49, 81, 125, 256] {
            let f = Fq::new(q).unwrap();
            assert_eq!(f.order(f.primitive()), q - 1);
            for a in 0..q as u32 {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
            }
        }
        assert!(Fq::new(6).is_err());
    }

    #[test]
    fn modulus_table() {
        let table: &[(u64, &[u32])] = &[
            (4, &[1, 1, 1]),
            (8, &[1, 1, 0, 1]),
            (9, &[1, 0, 1]),
            (16, &[1, 1, 0, 0, 1]),
            (25, &[2, 0, 1]),
            (27, &[1, 2, 0, 1]),
            (32, &[1, 0, 1, 0, 0, 1]),
            (49, &[1, 0, 1]),
            (64, &[1, 1, 0, 0, 0, 0, 1]),
            (81, &[2, 1, 0, 0, 1]),
            (121, &[1, 0, 1]),
            (125, &[1, 1, 0, 1]),
            (169, &[2, 0, 1]),
            (243, &[1, 2, 0, 0, 0, 1]),
            (256, &[1, 1, 0, 1, 1, 0, 0, 0, 1]),
            (343, &[2, 0, 0, 1]),
            (625, &[2, 0, 0, 0, 1]),
            (729, &[2, 1, 0, 0, 0, 0, 1]),
        ];
        for &(q, m) in table {
            assert_eq!(Fq::new(q).unwrap().modulus(), m, "q={q}");
        }
    }

    #[test]
    fn distributive_in_f9() {
        let f = Fq::new(9).unwrap();
        for a in 0..9 {
            for b in 0..9 {
                for c in 0..9 {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}
