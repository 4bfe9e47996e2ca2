use criterion::{black_box, criterion_group, criterion_main, Criterion};
use morava_core::charcount::{self, CountParams};
use morava_core::fgl::{build_ptypical, pr_weierstrass};
use morava_core::glgroups;
use morava_core::glp::{self, GLpParams};
use morava_core::PrecisionCtx;

fn law(c: &mut Criterion) {
    let ctx = PrecisionCtx::new(3, 3, 2, 2, 20).unwrap();
    c.bench_function("ptypical n=2", |b| b.iter(|| build_ptypical(black_box(&ctx)).unwrap()));
    let f = build_ptypical(&PrecisionCtx::new(3, 3, 1, 2, 20).unwrap()).unwrap();
    c.bench_function("weierstrass r=2", |b| b.iter(|| pr_weierstrass(&f, 2).unwrap()));
}

fn dimension_p(c: &mut Criterion) {
    let params = GLpParams::new(PrecisionCtx::new(3, 2, 1, 1, 10).unwrap(), 4).unwrap();
    c.bench_function("glp algebra (3,1,1,4)", |b| b.iter(|| glp::glp_algebra(&params).unwrap()));
    let params = GLpParams::new(PrecisionCtx::new(3, 3, 1, 1, 10).unwrap(), 4).unwrap();
    c.bench_function("model + h (3,1,1,4)", |b| {
        b.iter(|| {
            let m = glp::build_model(&params).unwrap();
            glp::build_h2(&m.d, 3).unwrap()
        })
    });
}

fn stretch(c: &mut Criterion) {
    let params = GLpParams::new(PrecisionCtx::new(3, 1, 2, 1, 10).unwrap(), 4).unwrap();
    let mut g = c.benchmark_group("stretch");
    g.sample_size(10);
    g.bench_function("glp algebra (3,2,1,4)", |b| b.iter(|| glp::glp_algebra(&params).unwrap()));
    g.finish();
}

fn groups(c: &mut Criterion) {
    let a = glgroups::build_generator_a(4, 3).unwrap();
    let mut g = c.benchmark_group("groups");
    g.sample_size(10);
    g.bench_function("normalizer scan q=4", |b| b.iter(|| glgroups::normalizer_exponents(&a).unwrap()));
    g.bench_function("vp GL_40(F_7), p=3", |b| b.iter(|| glgroups::vp_gl_order(40, 7, 3).unwrap()));
    g.finish();
}

fn counts(c: &mut Criterion) {
    let cp = CountParams::new(3, 1, 4).unwrap();
    c.bench_function("rep count d=50", |b| b.iter(|| charcount::rep_count(&cp, black_box(50))));
    let m = cp.stable_precision(4);
    c.bench_function("rep enumeration d=4", |b| b.iter(|| charcount::rep_count_bruteforce(&cp, 4, m).unwrap()));
}

criterion_group!(benches, law, dimension_p, stretch, groups, counts);
criterion_main!(benches);
