//! Orders of `GL_d(F_q)` and shapes of Sylow subgroups.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::padic::{is_prime, mult_order_mod_p, vp_bigint, vp_factorial, vp_pow_minus_one};

/// `|GL_d(F_q)| = Π_{i<d} (q^d - q^i)`.
pub fn gl_order(d: u32, q: u64) -> BigInt {
    let qd = BigInt::from(q).pow(d);
    (0..d).fold(BigInt::one(), |acc, i| acc * (&qd - BigInt::from(q).pow(i)))
}

fn check_coprime(q: u64, p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidInput(format!("p = {p} must be an odd prime")));
    }
    if q < 2 || q.is_multiple_of(p) {
        return Err(Error::InvalidInput(format!("q = {q} is not coprime to p = {p}")));
    }
    Ok(())
}

/// `v_p |GL_d(F_q)| = m v_p(q^a - 1) + v_p(m!)` with `a` the order of `q` mod `p`, `m = ⌊d/a⌋`.
pub fn vp_gl_order(d: u32, q: u64, p: u64) -> Result<u64> {
    check_coprime(q, p)?;
    let a = mult_order_mod_p(p, q as i64)?;
    let m = d as u64 / a;
    Ok(m * vp_pow_minus_one(p, q as i64, a)? as u64 + vp_factorial(p, m))
}

/// [`vp_gl_order`] by factoring the full order.
pub fn vp_gl_order_by_factoring(d: u32, q: u64, p: u64) -> Result<u64> {
    check_coprime(q, p)?;
    Ok(vp_bigint(p, &gl_order(d, q)) as u64)
}

/// A `p`-group built from cyclic groups by products and wreath products.
///
/// `Wreath(top, base)` is `base^m ⋊ top` with `top` acting on `m` points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SylowDescriptor {
    /// `C_{p^k}`, acting regularly on `p^k` points.
    Cyclic(u32),
    Product(Vec<SylowDescriptor>),
    Wreath(Box<SylowDescriptor>, Box<SylowDescriptor>),
}

impl SylowDescriptor {
    pub fn trivial() -> Self {
        SylowDescriptor::Product(Vec::new())
    }

    /// Exponent `e` with order `p^e`.
    pub fn order_exponent(&self, p: u64) -> u64 {
        match self {
            SylowDescriptor::Cyclic(k) => *k as u64,
            SylowDescriptor::Product(fs) => fs.iter().map(|f| f.order_exponent(p)).sum(),
            SylowDescriptor::Wreath(top, base) => top.degree(p) * base.order_exponent(p) + top.order_exponent(p),
        }
    }

    /// Number of points in the natural permutation action.
    pub fn degree(&self, p: u64) -> u64 {
        match self {
            SylowDescriptor::Cyclic(k) => p.pow(*k),
            SylowDescriptor::Product(fs) => fs.iter().map(|f| f.degree(p)).sum(),
            SylowDescriptor::Wreath(top, base) => top.degree(p) * base.degree(p),
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            SylowDescriptor::Cyclic(k) => *k == 0,
            SylowDescriptor::Product(fs) => fs.iter().all(Self::is_trivial),
            SylowDescriptor::Wreath(top, base) => top.is_trivial() && base.is_trivial(),
        }
    }

    /// Drop trivial factors, flatten products, and unfold wreaths over trivial tops.
    pub fn simplify(&self, p: u64) -> Self {
        match self {
            SylowDescriptor::Cyclic(_) => self.clone(),
            SylowDescriptor::Product(fs) => {
                let mut flat = Vec::new();
                for f in fs {
                    match f.simplify(p) {
                        SylowDescriptor::Product(inner) => flat.extend(inner),
                        g if g.is_trivial() => {}
                        g => flat.push(g),
                    }
                }
                if flat.len() == 1 {
                    flat.pop().unwrap()
                } else {
                    SylowDescriptor::Product(flat)
                }
            }
            SylowDescriptor::Wreath(top, base) => {
                // a product top acts on a disjoint union of points
                if let SylowDescriptor::Product(fs) = top.as_ref() {
                    let parts = fs.iter().map(|f| SylowDescriptor::Wreath(Box::new(f.clone()), base.clone())).collect();
                    return SylowDescriptor::Product(parts).simplify(p);
                }
                let base = base.simplify(p);
                if base.is_trivial() {
                    SylowDescriptor::trivial()
                } else if top.is_trivial() {
                    SylowDescriptor::Product(vec![base; top.degree(p) as usize]).simplify(p)
                } else {
                    SylowDescriptor::Wreath(Box::new(top.simplify(p)), Box::new(base))
                }
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            SylowDescriptor::Cyclic(k) => json!({ "cyclic": k }),
            SylowDescriptor::Product(fs) => json!({ "product": fs.iter().map(Self::to_json).collect::<Vec<_>>() }),
            SylowDescriptor::Wreath(t, b) => json!({ "wreath": [t.to_json(), b.to_json()] }),
        }
    }
}

/// Text form with cyclic factors written `C{p^k}`.
pub struct Display<'a>(&'a SylowDescriptor, u64);

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.1;
        match self.0 {
            SylowDescriptor::Cyclic(k) => write!(f, "C{}", p.pow(*k)),
            SylowDescriptor::Product(fs) if fs.is_empty() => write!(f, "1"),
            SylowDescriptor::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|g| Display(g, p).to_string()).collect();
                // equal factors collapse into a power
                if parts.windows(2).all(|w| w[0] == w[1]) && matches!(fs[0], SylowDescriptor::Cyclic(_)) {
                    write!(f, "{}^{}", parts[0], parts.len())
                } else {
                    write!(f, "{}", parts.join(" x "))
                }
            }
            SylowDescriptor::Wreath(t, b) => write!(f, "Wreath({}, {})", Display(t, p), Display(b, p)),
        }
    }
}

impl SylowDescriptor {
    pub fn display(&self, p: u64) -> Display<'_> {
        Display(self, p)
    }
}

/// `Syl_p(Σ_{p^i})`: the `i`-fold iterated wreath power of `C_p`.
fn sigma_prime_power(i: u32) -> SylowDescriptor {
    let mut g = SylowDescriptor::Cyclic(u32::from(i > 0));
    for _ in 1..i {
        g = SylowDescriptor::Wreath(Box::new(SylowDescriptor::Cyclic(1)), Box::new(g));
    }
    g
}

/// `Syl_p(Σ_d)` as a product over the base-`p` digits of `d`, unsimplified so that its
/// degree is `d`.
fn sigma_raw(d: u64, p: u64) -> SylowDescriptor {
    let mut factors = Vec::new();
    let mut m = d;
    let mut i = 0;
    while m > 0 {
        for _ in 0..m % p {
            factors.push(sigma_prime_power(i));
        }
        m /= p;
        i += 1;
    }
    SylowDescriptor::Product(factors)
}

pub fn sylow_sigma_descriptor(d: u64, p: u64) -> Result<SylowDescriptor> {
    if p < 2 || !is_prime(p) {
        return Err(Error::InvalidInput(format!("p = {p} is not prime")));
    }
    let raw = sigma_raw(d, p);
    let s = raw.simplify(p);
    if s.order_exponent(p) != vp_factorial(p, d) {
        return Err(Error::InvariantViolation(format!("Sylow order exponent differs from v_p({d}!)")));
    }
    Ok(s)
}

/// Sylow `p`-subgroup of `GL_d(F_q)`.
pub fn sylow_gl_descriptor(d: u32, q: u64, p: u64) -> Result<SylowDescriptor> {
    check_coprime(q, p)?;
    let v = vp_pow_minus_one(p, q as i64, 1)?;
    let out = if v > 0 {
        SylowDescriptor::Wreath(Box::new(sigma_raw(d as u64, p)), Box::new(SylowDescriptor::Cyclic(v)))
    } else if (d as u64) < p {
        let a = mult_order_mod_p(p, q as i64)?;
        let m = d as u64 / a;
        let k = vp_pow_minus_one(p, q as i64, a)?;
        SylowDescriptor::Product(vec![SylowDescriptor::Cyclic(k); m as usize])
    } else {
        return Err(Error::Unsupported(format!("q = {q} is not 1 mod p and d = {d} >= p")));
    };
    let out = out.simplify(p);
    if out.order_exponent(p) != vp_gl_order(d, q, p)? {
        return Err(Error::InvariantViolation("Sylow order differs from v_p |GL_d(F_q)|".into()));
    }
    Ok(out)
}

/// `C_p ≀ C_p` inside `Σ_{p^2}`: generators and the order of the group they generate.
pub fn wreath_permutation_order(p: usize) -> (Vec<Vec<usize>>, usize) {
    let n = p * p;
    // a p-cycle on the first block, and the block rotation
    let cycle: Vec<usize> = (0..n).map(|i| if i < p { (i + 1) % p } else { i }).collect();
    let rotate: Vec<usize> = (0..n).map(|i| (i + p) % n).collect();
    let gens = vec![cycle, rotate];
    let id: Vec<usize> = (0..n).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(g) = frontier.pop() {
        for s in &gens {
            let h: Vec<usize> = g.iter().map(|&i| s[i]).collect();
            if seen.insert(h.clone()) {
                frontier.push(h);
            }
        }
    }
    (gens, seen.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_orders() {
        assert_eq!(gl_order(3, 4), BigInt::from(181440));
        assert_eq!(vp_gl_order(3, 4, 3).unwrap(), 4);
        assert_eq!(gl_order(1, 7), BigInt::from(6));
        assert_eq!(vp_gl_order(2, 5, 3).unwrap(), 1);
        assert!(vp_gl_order(2, 9, 3).is_err());
    }

    #[test]
    fn sigma_sylows() {
        let s9 = sylow_sigma_descriptor(9, 3).unwrap();
        assert_eq!(s9, SylowDescriptor::Wreath(Box::new(SylowDescriptor::Cyclic(1)), Box::new(SylowDescriptor::Cyclic(1))));
        assert_eq!(s9.order_exponent(3), 4);
        assert!(sylow_sigma_descriptor(2, 3).unwrap().is_trivial());
        let s12 = sylow_sigma_descriptor(12, 3).unwrap();
        assert_eq!(s12.order_exponent(3), 5);
        assert_eq!(s12.display(3).to_string(), "C3 x Wreath(C3, C3)");
    }

    #[test]
    fn gl_sylows() {
        let g = sylow_gl_descriptor(3, 4, 3).unwrap();
        assert_eq!(g.order_exponent(3), 4);
        assert_eq!(g.display(3).to_string(), "Wreath(C3, C3)");
        assert_eq!(sylow_gl_descriptor(4, 4, 3).unwrap().display(3).to_string(), "C3 x Wreath(C3, C3)");
        let g2 = sylow_gl_descriptor(2, 4, 3).unwrap();
        assert_eq!(g2.display(3).to_string(), "C3^2");
        assert_eq!(g2.order_exponent(3), 2);
        assert_eq!(sylow_gl_descriptor(2, 2, 3).unwrap(), SylowDescriptor::Cyclic(1));
        assert!(matches!(sylow_gl_descriptor(3, 2, 3), Err(Error::Unsupported(_))));
    }

    #[test]
    fn wreath_in_s9() {
        assert_eq!(wreath_permutation_order(3).1, 81);
    }
}
