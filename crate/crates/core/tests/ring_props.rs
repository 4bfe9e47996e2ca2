use std::sync::OnceLock;

use morava_core::fgl::{build_ptypical, Fgl};
use morava_core::glp::{build_model, GLpParams, GlpModel};
use morava_core::series::ring::{self, CoeffRing};
use morava_core::series::useries::USeries;
use morava_core::smallrings::{cyclic_ring, torus_invariant_ring};
use morava_core::PrecisionCtx;
use proptest::prelude::*;

fn law() -> &'static Fgl {
    static L: OnceLock<Fgl> = OnceLock::new();
    L.get_or_init(|| build_ptypical(&PrecisionCtx::new(3, 3, 2, 2, 40).unwrap()).unwrap())
}

fn model() -> &'static GlpModel {
    static M: OnceLock<GlpModel> = OnceLock::new();
    M.get_or_init(|| build_model(&GLpParams::new(PrecisionCtx::new(3, 3, 1, 1, 10).unwrap(), 4).unwrap()).unwrap())
}

fn scaled(ctx: &morava_core::PadicCtx, a: &[u64], s: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    ring::vscale(ctx, &mut a, s);
    a
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn cyclic_reduction_is_linear_and_idempotent(
        m in prop::sample::select(vec![3u64, 6, 9]),
        s in 0u64..27,
        raw_f in prop::collection::vec(0u64..27, 40),
        raw_g in prop::collection::vec(0u64..27, 40),
    ) {
        let f = law();
        let q = cyclic_ring(m, f).unwrap();
        let r = q.base().clone();
        let len = q.vanishing_degree().min(f.dx());
        let series = |raw: &[u64]| {
            let c: Vec<Vec<u64>> = raw.iter().take(len).map(|&a| r.constant(a)).collect();
            USeries::from_coeffs(&r, len, &c)
        };
        let (a, b) = (series(&raw_f), series(&raw_g));
        let ra = q.reduce(&a);
        let again = USeries::from_coeffs(&r, len, &q.ring().coords(&ra));
        prop_assert_eq!(q.reduce(&again), ra.clone());
        let mut lin = scaled(r.padic(), &ra, s);
        ring::vadd(q.ring().padic(), &mut lin, &q.reduce(&b));
        prop_assert_eq!(q.reduce(&a.scale_int(s as i64).add(&b)), lin);
    }

    /// A random pair has a preimage in the span of the basis after scaling by p^k.
    #[test]
    fn rational_preimage(
        left_raw in prop::collection::vec(0u64..27, 10),
        right_raw in prop::collection::vec(0u64..27, 10),
    ) {
        let m = model();
        let torus = &m.torus;
        let dg = m.dg.ring();
        let base = dg.base().clone();
        let ctx = *base.padic();
        let ns = m.n_sigma();
        let lc: Vec<Vec<u64>> = (0..ns).map(|i| base.constant(left_raw[i % left_raw.len()])).collect();
        let left = torus.from_sigma_coords(&lc);
        let rc: Vec<Vec<u64>> = (0..dg.degree()).map(|i| base.constant(right_raw[i % right_raw.len()])).collect();
        let right = dg.from_coords(&rc);
        let (c, k) = m.rational_preimage(&left, &right);
        let slack = m.t.det_mt_valuation.expect("alpha(t) acts injectively");
        prop_assert!(k <= slack);
        let pk = ctx.p_pow(k);
        prop_assert_eq!(torus.from_sigma_coords(&c[..ns]), scaled(torus.ring().padic(), &left, pk));
        let mut got = dg.mul(&m.t.right, &dg.from_coords(&c[ns..]));
        for (ci, beta) in c[..ns].iter().zip(&torus.sigma_basis.exponents) {
            ring::vadd(&ctx, &mut got, &dg.mul(&dg.embed(ci), &m.alpha_monomial(beta)));
        }
        // the t-coordinates pass through a division by p^slack
        let trunc = ctx.p_pow(ctx.nprec() - slack);
        let cut = |a: &[u64]| a.iter().map(|x| x % trunc).collect::<Vec<_>>();
        prop_assert_eq!(cut(&got), cut(&scaled(&ctx, &right, pk)));
    }
}

/// The sigma-monomial and orbit-sum bases have equal size and an invertible change of basis.
#[test]
fn torus_bases_agree() {
    let f = law();
    for d in 1..=3 {
        let t = torus_invariant_ring(d, 1, f).unwrap();
        assert_eq!(t.sigma_basis.len(), t.orbit_basis.len());
        assert_eq!(t.change.len(), t.rank());
        let one = t.base().one();
        for (j, beta) in t.sigma_basis.exponents.iter().enumerate() {
            let mut e = vec![t.base().zero(); t.rank()];
            e[j] = one.clone();
            assert_eq!(t.sigma_coords(&t.sigma_monomial(beta)), e, "d={d} beta={beta:?}");
        }
    }
}
