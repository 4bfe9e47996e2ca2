use std::sync::OnceLock;

use morava_core::fgl::weierstrass::{required_len, residual};
use morava_core::fgl::{build_ptypical, weierstrass_prepare_with, Fgl, PrepMethod};
use morava_core::padic::teichmuller;
use morava_core::series::mseries::{MLayout, MSeries};
use morava_core::series::ring::{self, CoeffRing};
use morava_core::series::useries::USeries;
use morava_core::{PadicCtx, PrecisionCtx};
use proptest::prelude::*;

fn law(n: usize) -> &'static Fgl {
    static L1: OnceLock<Fgl> = OnceLock::new();
    static L2: OnceLock<Fgl> = OnceLock::new();
    let cell = if n == 1 { &L1 } else { &L2 };
    cell.get_or_init(|| build_ptypical(&PrecisionCtx::new(3, 3, n, 2, 16).unwrap()).unwrap())
}

#[test]
fn endomorphisms_add_and_compose() {
    for n in [1, 2] {
        let f = law(n);
        let m: Vec<USeries> = (-6..=6).map(|k| f.m_series(k)).collect();
        let at = |k: i64| &m[(k + 6) as usize];
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                if (a + b).abs() <= 6 {
                    assert_eq!(&f.eval(at(a), at(b)), at(a + b), "n={n} [{a}]+[{b}]");
                }
                if (a * b).abs() <= 6 {
                    assert_eq!(&at(a).compose(at(b)).unwrap(), at(a * b), "n={n} [{a}][{b}]");
                }
            }
        }
    }
}

#[test]
fn bracket_p_is_teichmuller_invariant() {
    for n in [1, 2] {
        let f = law(n);
        // [p^k](x) must vanish at the truncation, so the digits run past the ring precision
        let ctx = PadicCtx::new(3, 8).unwrap();
        let angle = f.divided_m_series(3).unwrap();
        for k in 1..3 {
            let w = teichmuller(k, &ctx).unwrap();
            let kx = f.padic_series(&w).unwrap();
            assert_eq!(angle.compose(&kx).unwrap(), angle, "n={n} k={k}");
        }
    }
}

/// `F(x, ι(y)) = (x - y)·Q(x, y)` with `Q(0, 0) = 1`.
#[test]
fn difference_is_unit_multiple() {
    for n in [1, 2] {
        let f = law(n);
        let r = f.ring().clone();
        let lay = MLayout::new(2, f.dx()).unwrap();
        let x = MSeries::var(&r, &lay, 0);
        let y = MSeries::var(&r, &lay, 1);
        let iy = MSeries::from_useries(&f.formal_inverse(), &lay, 1);
        let g = f.series().substitute(&[x.clone(), iy], &lay).unwrap();
        // (x - y)Q = G read along antidiagonals: q_{i,j} = g_{i+1,j} + q_{i+1,j-1}
        let dx = f.dx() as u32;
        let mut q = MSeries::zero(&r, &lay);
        for deg in 0..dx - 1 {
            for j in 0..=deg {
                let i = deg - j;
                let mut c = g.coeff(&[i + 1, j]);
                if j > 0 {
                    ring::vadd(r.padic(), &mut c, &q.coeff(&[i + 1, j - 1]));
                }
                q.set_coeff(&[i, j], &c).unwrap();
            }
        }
        assert_eq!(q.coeff(&[0, 0]), r.one());
        assert_eq!(x.sub(&y).mul(&q), g, "n={n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// log([a](x)) = a·log(x), with [a] from binary formal addition and log scaled by p^V.
    #[test]
    fn log_is_linear(n in 1usize..=2, a in 1i64..40) {
        let f = law(n);
        let r = f.ring();
        let len = f.dx();
        let ax = f.m_series(a);
        let x = USeries::var(r, len);
        let mut top = 0;
        while 3usize.pow(top + 1) < len {
            top += 1;
        }
        let coeffs: Vec<(Vec<u64>, u32)> = (0..=top).map(|k| f.log_coefficient(k).unwrap()).collect();
        let big_v = coeffs.iter().map(|c| c.1).max().unwrap();
        let mut lhs = USeries::zero(r, len);
        let mut rhs = USeries::zero(r, len);
        for (k, (num, v)) in coeffs.iter().enumerate() {
            let mut c = r.narrow(num);
            ring::vscale(r.padic(), &mut c, r.padic().p_pow(big_v - v));
            let e = 3u64.pow(k as u32);
            lhs = lhs.add(&ax.pow(e).scale(&c));
            rhs = rhs.add(&x.pow(e).scale(&c));
        }
        prop_assert_eq!(lhs, rhs.scale_int(a));
    }

    /// Division and Hensel preparation agree on random distinguished series.
    #[test]
    fn weierstrass_is_unique(
        n in 1usize..=2,
        deg in 1usize..=4,
        raw in prop::collection::vec((0u64..27, 0u64..27), 24),
    ) {
        let f = law(n);
        let r = f.ring().clone();
        let len = required_len(r.as_ref(), deg).max(deg + 1).min(raw.len());
        prop_assume!(len > deg);
        let coeffs: Vec<Vec<u64>> = raw[..len].iter().enumerate().map(|(k, &(a, b))| {
            let mut c = r.constant(a);
            if n == 2 {
                ring::vadd(r.padic(), &mut c, &r.scalar(&r.u_var(1), b));
            }
            if k < deg {
                // below the distinguished degree everything lies in the maximal ideal
                let mut m = r.constant(3 * (a % 9));
                if n == 2 {
                    ring::vadd(r.padic(), &mut m, &r.scalar(&r.u_var(1), b));
                }
                m
            } else if k == deg {
                let mut u = r.constant(1 + 3 * (a % 9));
                if n == 2 {
                    ring::vadd(r.padic(), &mut u, &r.scalar(&r.u_var(1), b));
                }
                u
            } else {
                c
            }
        }).collect();
        let s = USeries::from_coeffs(&r, len, &coeffs);
        let a = weierstrass_prepare_with(&s, deg, PrepMethod::Division).unwrap();
        let b = weierstrass_prepare_with(&s, deg, PrepMethod::Hensel).unwrap();
        prop_assert_eq!(&a.g, &b.g);
        prop_assert_eq!(&a.u, &b.u);
        let res = residual(&s, &a);
        prop_assert!((0..res.len()).all(|k| ring::is_zero(res.coeff(k))));
    }
}
