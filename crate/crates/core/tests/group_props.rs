use morava_core::glgroups::{
    gl_order, sylow_gl_descriptor, sylow_sigma_descriptor, vp_gl_order, vp_gl_order_by_factoring, Fq, GLMat,
};
use morava_core::padic::vp_factorial;
use morava_core::Error;
use proptest::prelude::*;

const PRIME_POWERS: &[u64] = &[2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37, 49, 64, 81, 125];

fn field() -> impl Strategy<Value = Fq> {
    prop::sample::select(PRIME_POWERS.to_vec()).prop_map(|q| Fq::new(q).unwrap())
}

proptest! {
    #[test]
    fn field_axioms(f in field(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let q = f.q();
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.pow(a, q as u64), a);
        let l = f.char() as u64;
        prop_assert_eq!(f.pow(f.add(a, b), l), f.add(f.pow(a, l), f.pow(b, l)));
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn matrix_inverse_and_det(q in prop::sample::select(vec![2u64, 3, 4, 5, 9]), d in 1usize..=4, i in any::<u64>(), j in any::<u64>()) {
        let f = Fq::new(q).unwrap();
        let space = q.pow((d * d) as u32);
        let a = GLMat::from_index(d, q as u32, i % space);
        let b = GLMat::from_index(d, q as u32, j % space);
        prop_assert_eq!(a.mul(&f, &b).det(&f), f.mul(a.det(&f), b.det(&f)));
        match a.inverse(&f) {
            Ok(inv) => prop_assert!(a.mul(&f, &inv).is_identity() && inv.mul(&f, &a).is_identity()),
            Err(_) => prop_assert_eq!(a.det(&f), 0),
        }
    }

    #[test]
    fn gl_valuation_matches_factoring(p in prop::sample::select(vec![3u64, 5, 7]), q in prop::sample::select(PRIME_POWERS.to_vec()), d in 1u32..=14) {
        prop_assume!(q % p != 0);
        prop_assert_eq!(vp_gl_order(d, q, p).unwrap(), vp_gl_order_by_factoring(d, q, p).unwrap());
    }

    #[test]
    fn gl_sylow_order(p in prop::sample::select(vec![3u64, 5, 7]), q in prop::sample::select(PRIME_POWERS.to_vec()), d in 1u32..=14) {
        prop_assume!(q % p != 0);
        match sylow_gl_descriptor(d, q, p) {
            Ok(s) => prop_assert_eq!(s.order_exponent(p), vp_gl_order(d, q, p).unwrap()),
            Err(e) => prop_assert!(matches!(e, Error::Unsupported(_))),
        }
    }

    #[test]
    fn sigma_sylow_order(p in prop::sample::select(vec![2u64, 3, 5, 7]), d in 1u64..=200) {
        let s = sylow_sigma_descriptor(d, p).unwrap();
        prop_assert_eq!(s.order_exponent(p), vp_factorial(p, d));
        prop_assert!(s.degree(p) <= d);
    }
}

#[test]
fn small_gl_orders_by_counting() {
    for q in [2u64, 3] {
        for d in 1..=2usize {
            let f = Fq::new(q).unwrap();
            let space = q.pow((d * d) as u32);
            let count = (0..space).filter(|&i| GLMat::from_index(d, q as u32, i).det(&f) != 0).count();
            assert_eq!(gl_order(d as u32, q), count.into(), "d={d} q={q}");
        }
    }
}
