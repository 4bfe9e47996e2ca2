use std::sync::Arc;

use morava_core::series::mseries::{elementary_symmetric, symmetrize_to_elementary, MLayout, MSeries};
use morava_core::series::ring::CoeffRing;
use morava_core::series::useries::USeries;
use morava_core::{E0Ring, PadicCtx};
use proptest::prelude::*;

fn ring(n: usize) -> Arc<E0Ring> {
    Arc::new(E0Ring::new(PadicCtx::new(3, 4).unwrap(), n, 2).unwrap())
}

fn elem(r: &E0Ring, raw: &[u64]) -> Vec<u64> {
    let m = r.padic().modulus();
    (0..r.dim()).map(|i| raw.get(i).copied().unwrap_or(0) % m).collect()
}

proptest! {
    #[test]
    fn reversion_is_an_involution(unit in 1u64..81, raw in prop::collection::vec(prop::collection::vec(0u64..81, 2), 10)) {
        prop_assume!(unit % 3 != 0);
        let r = ring(2);
        let len = 12;
        let mut coeffs = vec![r.zero(), r.constant(unit)];
        coeffs.extend(raw.iter().map(|c| elem(&r, c)));
        let f = USeries::from_coeffs(&r, len, &coeffs);
        let g = f.reversion().unwrap();
        prop_assert_eq!(g.reversion().unwrap(), f.clone());
        prop_assert_eq!(g.compose(&f).unwrap(), USeries::var(&r, len));
    }

    #[test]
    fn symmetrization_is_a_section(d in 1usize..=3, raw in prop::collection::vec(0u64..81, 40)) {
        let r = ring(1);
        let dx = 7;
        let lay = MLayout::new(d, dx).unwrap();
        // random φ in σ_1..σ_d of weighted degree < dx
        let mut phi = MSeries::zero(&r, &lay);
        for (i, e) in lay.monos().iter().enumerate() {
            let w: u32 = e.iter().enumerate().map(|(k, &b)| (k as u32 + 1) * b).sum();
            if (w as usize) < dx {
                phi.set_coeff(e, &r.constant(raw[i % raw.len()])).unwrap();
            }
        }
        let sigmas: Vec<_> = (1..=d).map(|k| elementary_symmetric(&r, &lay, k).unwrap()).collect();
        let s = phi.substitute(&sigmas, &lay).unwrap();
        let back = symmetrize_to_elementary(&s).unwrap();
        prop_assert_eq!(&back, &phi);
        prop_assert_eq!(back.substitute(&sigmas, &lay).unwrap(), s);
    }
}

/// σ_k(x, y) = Σ_{i+j=k} σ_i(x) σ_j(y) for a split of the variables.
#[test]
fn whitney_split() {
    let r = ring(1);
    for total in 2..=4usize {
        for d1 in 1..total {
            let d2 = total - d1;
            let lay = MLayout::new(total, 6).unwrap();
            let vars: Vec<_> = (0..total).map(|i| MSeries::var(&r, &lay, i)).collect();
            let part = |d: usize, off: usize, k: usize| {
                if k == 0 {
                    return MSeries::one(&r, &lay);
                }
                let sub = MLayout::new(d, 6).unwrap();
                elementary_symmetric(&r, &sub, k).unwrap().substitute(&vars[off..off + d], &lay).unwrap()
            };
            for k in 1..=total {
                let mut rhs = MSeries::zero(&r, &lay);
                for i in 0..=k.min(d1) {
                    if k - i <= d2 {
                        rhs = rhs.add(&part(d1, 0, i).mul(&part(d2, d1, k - i)));
                    }
                }
                assert_eq!(elementary_symmetric(&r, &lay, k).unwrap(), rhs, "d1={d1} d2={d2} k={k}");
            }
        }
    }
}
