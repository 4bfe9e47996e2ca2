//! Canonical JSON form of series over E0.

use serde_json::{json, Value};

use crate::series::e0::E0Ring;
use crate::series::mseries::MSeries;
use crate::series::ring::CoeffRing;
use crate::series::useries::USeries;

fn push_terms(ring: &E0Ring, exp: &[u32], c: &[u64], out: &mut Vec<Value>) {
    for (j, &r) in c.iter().enumerate() {
        if r != 0 {
            out.push(json!({
                "exp": exp,
                "uexp": ring.monos()[j],
                "val": ring.padic().digits(r),
            }));
        }
    }
}

pub fn useries_json(f: &USeries<E0Ring>, var: &str) -> Value {
    let mut terms = Vec::new();
    for k in 0..f.len() {
        push_terms(f.ring(), &[k as u32], f.coeff(k), &mut terms);
    }
    json!({ "vars": [var], "terms": terms })
}

pub fn mseries_json(f: &MSeries<E0Ring>, vars: &[&str]) -> Value {
    let mut terms = Vec::new();
    for (e, c) in f.terms() {
        push_terms(f.ring(), e, c, &mut terms);
    }
    json!({ "vars": vars, "terms": terms })
}

/// Polynomial given by its coefficient list, low degree first.
pub fn poly_json(ring: &E0Ring, coeffs: &[Vec<u64>], var: &str) -> Value {
    let mut terms = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        push_terms(ring, &[k as u32], c, &mut terms);
    }
    json!({ "vars": [var], "terms": terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PadicCtx;
    use std::sync::Arc;

    #[test]
    fn shape() {
        let r = Arc::new(E0Ring::new(PadicCtx::new(3, 3).unwrap(), 2, 2).unwrap());
        let mut f = USeries::zero(&r, 3);
        f.set_coeff(1, &r.from_int(5));
        f.set_coeff(2, &r.u_var(1));
        let v = useries_json(&f, "x");
        assert_eq!(v["vars"][0], "x");
        assert_eq!(v["terms"][0]["exp"][0], 1);
        assert_eq!(v["terms"][0]["val"], "12");
        assert_eq!(v["terms"][1]["uexp"][0], 1);
    }
}
