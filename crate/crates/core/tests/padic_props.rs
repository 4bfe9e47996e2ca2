use morava_core::padic::{teichmuller, vp_bigint, vp_factorial, vp_pow_minus_one, PadicCtx, Valuation};
use num_bigint::{BigInt, BigUint};
use num_traits::One;
use proptest::prelude::*;

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 11, 13])
}

proptest! {
    #[test]
    fn valuation_is_additive(p in prime(), nprec in 1u32..8, a in any::<i64>(), b in any::<i64>()) {
        let ctx = PadicCtx::new(p, nprec).unwrap();
        let (x, y) = (ctx.int(a), ctx.int(b));
        let sum = x.val().lower() + y.val().lower();
        let want = if sum < nprec { Valuation::Exact(sum) } else { Valuation::AtLeast(nprec) };
        prop_assert_eq!(x.mul(&y).unwrap().val(), want);
    }

    #[test]
    fn unit_inverse(p in prime(), nprec in 1u32..8, a in any::<i64>()) {
        let ctx = PadicCtx::new(p, nprec).unwrap();
        let x = ctx.int(a);
        prop_assume!(x.is_unit());
        prop_assert_eq!(x.mul(&x.inv().unwrap()).unwrap(), ctx.int(1));
    }

    #[test]
    fn teichmuller_lift(p in prime(), nprec in 1u32..8, a in 1i64..1000) {
        prop_assume!(a % p as i64 != 0);
        let ctx = PadicCtx::new(p, nprec).unwrap();
        let w = teichmuller(a, &ctx).unwrap();
        prop_assert_eq!(w.pow(p - 1), ctx.int(1));
        prop_assert_eq!(w.residue() % p, a as u64 % p);
    }

    #[test]
    fn pow_minus_one_matches_bigint(p in prime(), k in 2i64..1_000_000, s in 1u64..60) {
        prop_assume!(k % p as i64 != 0);
        let brute = vp_bigint(p, &(BigInt::from(k).pow(s as u32) - BigInt::one()));
        prop_assert_eq!(vp_pow_minus_one(p, k, s).unwrap(), brute);
    }
}

#[test]
fn factorial_valuations_to_200() {
    for p in [3u64, 5, 7, 11] {
        let mut fact = BigUint::one();
        for d in 1..=200u64 {
            fact *= d;
            assert_eq!(vp_factorial(p, d), vp_bigint(p, &BigInt::from(fact.clone())) as u64, "p={p} d={d}");
        }
    }
}
