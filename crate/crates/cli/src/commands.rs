//! Subcommand definitions and dispatch.

use clap::{Subcommand, ValueEnum};
use morava_core::charcount::{self, CountParams};
use morava_core::fgl::{self, build_ptypical, Fgl, Height, PrepMethod};
use morava_core::glgroups;
use morava_core::glp::{self, GLpParams};
use morava_core::series::json::{poly_json, useries_json};
use morava_core::series::ring::CoeffRing;
use morava_core::smallrings;
use morava_core::suite::{self, SuiteOptions};
use morava_core::{Error, Result};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::output::{pass_word, poly_text, Outcome};

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Formal group laws.
    #[command(subcommand)]
    Fgl(FglCmd),
    /// Rings E0(BG) for small groups.
    #[command(subcommand)]
    Ring(RingCmd),
    /// The dimension-p model of E0(BGL_p(F_q)).
    #[command(subcommand)]
    Glp(GlpCmd),
    /// Finite fields and GL_d(F_q).
    #[command(subcommand)]
    Groups(GroupsCmd),
    /// Representation counts.
    #[command(subcommand)]
    Count(CountCmd),
    /// Check batteries.
    #[command(subcommand)]
    Suite(SuiteCmd),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Method {
    Division,
    Hensel,
}

#[derive(Subcommand, Debug)]
pub enum FglCmd {
    /// Build the p-typical law and check its axioms.
    Build,
    /// Coefficients of [m](x), m defaulting to p.
    Pseries {
        #[arg(long)]
        m: Option<i64>,
    },
    /// Height read off [p](x).
    Height,
    /// Weierstrass polynomial g_r of [p^r](x).
    Weierstrass {
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, value_enum, default_value_t = Method::Division)]
        method: Method,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SigmaCheck {
    F0,
    Rank,
    All,
}

#[derive(Subcommand, Debug)]
pub enum RingCmd {
    /// E0(BC_m).
    Cyclic {
        #[arg(long)]
        m: Option<u64>,
    },
    /// E0(BA) for A = C_{m_1} x ... x C_{m_k}.
    Abelian {
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<u64>,
    },
    /// Σ_d-invariants of E0(B(C_{p^r})^d).
    Torus {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// E0(BΣ_p).
    SigmaP {
        #[arg(long, value_enum, default_value_t = SigmaCheck::All)]
        check: SigmaCheck,
    },
}

#[derive(Subcommand, Debug)]
pub enum GlpCmd {
    /// D = E0[[x]]/g.
    D,
    /// D^Γ = E0[[y]]/h.
    DGamma,
    /// The series h(d, y).
    H2,
    /// The relation t + d·h(d, c_p) = 0 in its three targets.
    TRelation,
    /// Structure constants on the basis {σ^β} ∪ {t c_p^i}.
    Algebra {
        /// Include the structure constants mod (p, u).
        #[arg(long)]
        constants: bool,
    },
    /// Nilpotency of c_p in the reduction mod (p, u).
    KNilpotency,
    /// A g_v + B g = p in E0[x]/g_{v+1}.
    CrtWitness,
}

#[derive(Subcommand, Debug)]
pub enum GroupsCmd {
    /// |GL_d(F_q)| and its p-adic valuation.
    Order {
        #[arg(long)]
        d: u32,
    },
    /// Sylow p-subgroup of GL_d(F_q), or of Σ_d with --symmetric.
    Sylow {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        symmetric: bool,
    },
    /// The generator a of A ⊂ GL_p(F_q).
    GeneratorA,
    /// Exhaustive scan of the normalizer of A.
    NormalizerScan,
    /// Eigenbasis of the cyclic shift γ.
    Diagonalize,
}

#[derive(Subcommand, Debug)]
pub enum CountCmd {
    /// Irreducible representations of dimension p^k.
    Irr {
        #[arg(long)]
        k: u32,
    },
    /// Representations of dimension d.
    Rep {
        #[arg(long)]
        d: u64,
        /// Also count by enumerating multisets in (Z/p^m)^n.
        #[arg(long)]
        brute: bool,
        /// Torsion level m for --brute; defaults to the level where the count stabilizes.
        #[arg(long)]
        level: Option<u32>,
        /// Emit one row per dimension 1..=d.
        #[arg(long)]
        grid: bool,
    },
    /// Compare the count with the rank of the ring model (d <= p).
    Crosscheck {
        #[arg(long)]
        d: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum SuiteCmd {
    /// Run acceptance criteria 1-9.
    Acceptance {
        /// Skip the (3,2,1,4) structure-constant run.
        #[arg(long)]
        no_stretch: bool,
    },
}

impl Cmd {
    pub fn name(&self) -> String {
        let (a, b) = match self {
            Cmd::Fgl(c) => ("fgl", format!("{c:?}")),
            Cmd::Ring(c) => ("ring", format!("{c:?}")),
            Cmd::Glp(c) => ("glp", format!("{c:?}")),
            Cmd::Groups(c) => ("groups", format!("{c:?}")),
            Cmd::Count(c) => ("count", format!("{c:?}")),
            Cmd::Suite(c) => ("suite", format!("{c:?}")),
        };
        let head: String = b.chars().take_while(|c| c.is_alphanumeric()).collect();
        let mut kebab = String::new();
        for (i, ch) in head.chars().enumerate() {
            if ch.is_uppercase() && i > 0 {
                kebab.push('-');
            }
            kebab.push(ch.to_ascii_lowercase());
        }
        format!("{a} {kebab}")
    }
}

pub fn run(cmd: &Cmd, cfg: &RunConfig) -> Result<Outcome> {
    match cmd {
        Cmd::Fgl(c) => run_fgl(c, cfg),
        Cmd::Ring(c) => run_ring(c, cfg),
        Cmd::Glp(c) => run_glp(c, cfg),
        Cmd::Groups(c) => run_groups(c, cfg),
        Cmd::Count(c) => run_count(c, cfg),
        Cmd::Suite(c) => run_suite(c, cfg),
    }
}

fn law(cfg: &RunConfig) -> Result<Fgl> {
    build_ptypical(&cfg.ctx()?)
}

fn run_fgl(c: &FglCmd, cfg: &RunConfig) -> Result<Outcome> {
    let f = law(cfg)?;
    let ring = f.ring().clone();
    Ok(match c {
        FglCmd::Build => {
            let ax = f.check_axioms()?;
            let text = vec![
                format!("p-typical law, p={} n={} Dx={}", cfg.p, cfg.n, f.dx()),
                format!("identity {}", pass_word(ax.identity.pass)),
                format!("commutativity {}", pass_word(ax.commutativity.pass)),
                format!("associativity {}", pass_word(ax.associativity.pass)),
            ];
            let result = json!({
                "identity": ax.identity.pass,
                "commutativity": ax.commutativity.pass,
                "associativity": ax.associativity.pass,
                "offending": [ax.identity.offending, ax.commutativity.offending, ax.associativity.offending],
            });
            Outcome::new(result, text).checked(ax.pass())
        }
        FglCmd::Pseries { m } => {
            let m = m.unwrap_or(cfg.p as i64);
            let s = f.endomorphism(m as i128, f.dx())?;
            let text = (0..s.len())
                .filter(|&k| !s.coeff(k).iter().all(|&x| x == 0))
                .map(|k| format!("x^{k}: {}", ring.format(s.coeff(k))))
                .collect();
            Outcome::new(json!({ "m": m, "series": useries_json(&s, "x") }), text)
        }
        FglCmd::Height => {
            let (v, t) = match f.height()? {
                Height::Finite(h) => (json!(h), h.to_string()),
                Height::InfiniteAtPrecision => (Value::Null, "infinite at this precision".to_string()),
            };
            Outcome::new(json!({ "height": v }), vec![t])
        }
        FglCmd::Weierstrass { r, method } => {
            let w = fgl::pr_weierstrass(&f, *r)?;
            let g = match method {
                Method::Division => w.g.clone(),
                Method::Hensel => {
                    let len = fgl::weierstrass::required_len(ring.as_ref(), w.degree).max(w.degree + 1);
                    let s = f.endomorphism((cfg.p as i128).pow(*r), len)?;
                    fgl::weierstrass_prepare_with(&s, w.degree, PrepMethod::Hensel)?.g
                }
            };
            let text = vec![format!("degree {}", w.degree), format!("g_{r} = {}", poly_text(&ring, &g, "x"))];
            Outcome::new(json!({ "r": r, "degree": w.degree, "g": poly_json(&ring, &g, "x") }), text)
        }
    })
}

fn run_ring(c: &RingCmd, cfg: &RunConfig) -> Result<Outcome> {
    let f = law(cfg)?;
    Ok(match c {
        RingCmd::Cyclic { m } => {
            let r = smallrings::cyclic_ring(m.unwrap_or(cfg.p), &f)?;
            let text = vec![format!("rank {}", r.rank()), format!("modulus {}", poly_text(r.base(), &r.modulus(), "x"))];
            Outcome::new(r.report(), text)
        }
        RingCmd::Abelian { orders } => {
            let r = smallrings::abelian_ring(orders, &f)?;
            Outcome::new(r.report(), vec![format!("rank {}", r.rank())])
        }
        RingCmd::Torus { d, r } => {
            let t = smallrings::torus_invariant_ring(*d, *r, &f)?;
            Outcome::new(t.report(), vec![format!("rank {}", t.rank())])
        }
        RingCmd::SigmaP { check } => {
            let s = smallrings::sigma_p_ring(&f)?;
            let f0_ok = s.f0() == f.ring().from_int(cfg.p as i64).as_slice();
            let want_rank = ((cfg.p as usize).pow(cfg.n as u32) - 1) / (cfg.p as usize - 1) + 1;
            let rank_ok = s.rank() == want_rank;
            let (mut text, pass) = match check {
                SigmaCheck::F0 => {
                    (vec![if f0_ok { "f(0)=p".to_string() } else { format!("f(0)={}", f.ring().format(s.f0())) }], f0_ok)
                }
                SigmaCheck::Rank => (vec![format!("rank {}", s.rank())], rank_ok),
                SigmaCheck::All => (
                    vec![
                        if f0_ok { "f(0)=p".to_string() } else { format!("f(0)={}", f.ring().format(s.f0())) },
                        format!("rank {}", s.rank()),
                        format!("f = {}", poly_text(f.ring(), &s.f_poly, "d")),
                    ],
                    f0_ok && rank_ok,
                ),
            };
            text.push(pass_word(pass).to_string());
            let mut rep = s.report();
            rep["f0_is_p"] = json!(f0_ok);
            rep["rank_expected"] = json!(want_rank);
            Outcome::new(rep, text).checked(pass)
        }
    })
}

fn glp_params(cfg: &RunConfig) -> Result<GLpParams> {
    GLpParams::new(cfg.ctx()?, cfg.q)
}

fn run_glp(c: &GlpCmd, cfg: &RunConfig) -> Result<Outcome> {
    let params = glp_params(cfg)?;
    Ok(match c {
        GlpCmd::D => {
            let d = glp::build_d(&params)?;
            let text = vec![
                format!("deg g = {}", d.g.len() - 1),
                format!("rank {}", d.rank()),
                format!("g = {}", poly_text(d.base(), &d.g, "x")),
            ];
            Outcome::new(d.report(), text)
        }
        GlpCmd::DGamma => {
            let d = glp::build_d(&params)?;
            let dg = glp::build_d_gamma(&d)?;
            let text = vec![format!("N = {}", dg.rank()), format!("h = {}", poly_text(dg.base(), &dg.h, "y"))];
            Outcome::new(dg.report(), text)
        }
        GlpCmd::H2 => {
            let d = glp::build_d(&params)?;
            let h = glp::build_h2(&d, cfg.nprec)?;
            let ok = h.h0s_check(cfg.p, cfg.n, params.v);
            let mut text = vec![format!("h known mod y^{}", h.j_trunc)];
            for (j, row) in h.coeffs.iter().enumerate() {
                if row.iter().any(|c| c.iter().any(|&x| x != 0)) {
                    text.push(format!("y^{j}: {}", poly_text(&h.base, row, "d")));
                }
            }
            text.push(format!("h(0,s) = s^{} mod (p,u) {}", (cfg.p as usize).pow(cfg.n as u32 * params.v - 1), pass_word(ok)));
            Outcome::new(h.report(), text).checked(ok)
        }
        GlpCmd::TRelation => {
            let m = glp::build_model(&params)?;
            let h = glp::build_h2(&m.d, cfg.nprec)?;
            let r = glp::verify_t_relation(&m, &h)?;
            let text = vec![
                format!("torus {}", pass_word(r.torus)),
                format!("sigma_p x C_p^v {}", pass_word(r.sigma_delta)),
                format!("D^Gamma {}", pass_word(r.d_gamma)),
            ];
            Outcome::new(r.report(), text).checked(r.pass())
        }
        GlpCmd::Algebra { constants } => {
            let a = glp::glp_algebra(&params)?;
            let mut rep = a.report();
            rep["labels"] = json!(a.labels);
            if *constants {
                let n = a.rank();
                let table = a.residue_table();
                rep["constants_mod_p"] = json!((0..n)
                    .flat_map(|i| (i..n).map(move |j| (i, j)))
                    .map(|(i, j)| json!({ "i": i, "j": j, "terms": table[i * n + j] }))
                    .collect::<Vec<_>>());
            }
            let text = vec![
                format!("rank {} (expected {})", a.rank(), params.expected_rank()),
                format!("ker(alpha)*ker(beta) = 0 {}", pass_word(a.kernel_product_zero)),
                format!("alpha(t) y^i independent {}", pass_word(a.t_span_independent)),
            ];
            let ok = a.kernel_product_zero && a.t_span_independent;
            Outcome::new(rep, text).checked(ok)
        }
        GlpCmd::KNilpotency => {
            let a = glp::glp_algebra(&params)?;
            let k = glp::k_reduce(&a)?;
            let nil = k.cp_nilpotency.unwrap_or(0);
            let text = vec![
                format!("c_p^{} != 0, c_p^{} = 0", nil.saturating_sub(1), nil),
                format!("ideal (c_p^{}) has dimension {}", params.nr, k.ideal_dim),
                pass_word(k.pass()).to_string(),
            ];
            Outcome::new(k.report(), text).checked(k.pass())
        }
        GlpCmd::CrtWitness => {
            let m = glp::build_model(&params)?;
            let w = glp::crt_witness(&m)?;
            let text = vec![format!("verified {}", pass_word(w.verified)), format!("valuation slack {:?}", w.slack)];
            Outcome::new(w.report(), text).checked(w.verified)
        }
    })
}

fn run_groups(c: &GroupsCmd, cfg: &RunConfig) -> Result<Outcome> {
    let (p, q) = (cfg.p, cfg.q);
    Ok(match c {
        GroupsCmd::Order { d } => {
            let o = glgroups::gl_order(*d, q);
            let v = glgroups::vp_gl_order(*d, q, p)?;
            let vf = glgroups::vp_gl_order_by_factoring(*d, q, p)?;
            let text = vec![format!("|GL_{d}(F_{q})| = {o}"), format!("v_{p} = {v}")];
            Outcome::new(json!({ "order": o.to_string(), "vp": v, "vp_factoring": vf }), text).checked(v == vf)
        }
        GroupsCmd::Sylow { d, symmetric } => {
            let s = if *symmetric {
                glgroups::sylow_sigma_descriptor(*d as u64, p)?
            } else {
                glgroups::sylow_gl_descriptor(*d, q, p)?
            };
            let e = s.order_exponent(p);
            let text = vec![s.display(p).to_string(), format!("order {p}^{e}")];
            Outcome::new(json!({ "descriptor": s.to_json(), "text": s.display(p).to_string(), "order_exponent": e }), text)
        }
        GroupsCmd::GeneratorA => {
            let g = glgroups::build_generator_a(q, p)?;
            let mut text = vec![format!("a_v = {} (order {}^{})", g.a_v, p, g.v)];
            text.extend(g.a.rows().iter().map(|r| format!("{r:?}")));
            Outcome::new(g.report(), text)
        }
        GroupsCmd::NormalizerScan => {
            let g = glgroups::build_generator_a(q, p)?;
            let s = glgroups::normalizer_exponents(&g)?;
            let ex: Vec<String> = s.exponents.iter().map(|x| x.to_string()).collect();
            let text = vec![
                format!("exponents mod {}: {}", g.order(), ex.join(" ")),
                format!("|N(A)| = {}, |C(a)| = {}", s.normalizer_order, s.centralizer_order),
            ];
            Outcome::new(s.report(), text)
        }
        GroupsCmd::Diagonalize => {
            let g = glgroups::build_generator_a(q, p)?;
            let dg = glgroups::diagonalize_gamma(&g)?;
            let mut text = vec![format!("omega = {}, eigenvalues {:?}", dg.omega, dg.eigenvalues)];
            text.extend(dg.g.rows().iter().map(|r| format!("{r:?}")));
            Outcome::new(dg.report(), text)
        }
    })
}

fn run_count(c: &CountCmd, cfg: &RunConfig) -> Result<Outcome> {
    let n = u32::try_from(cfg.n).map_err(|_| Error::InvalidInput("n too large".into()))?;
    let cp = CountParams::new(cfg.p, n, cfg.q)?;
    Ok(match c {
        CountCmd::Irr { k } => {
            let v = charcount::irr_count(&cp, *k);
            Outcome::new(json!({ "k": k, "count": v.to_string() }), vec![v.to_string()])
        }
        CountCmd::Rep { d, brute, level, grid } => {
            let dims: Vec<u64> = if *grid { (1..=*d).collect() } else { vec![*d] };
            let mut rows = vec![vec!["p".into(), "n".into(), "q".into(), "d".into(), "count".into()]];
            let mut items = Vec::new();
            let mut text = Vec::new();
            let mut pass = true;
            for &dd in &dims {
                let v = charcount::rep_count(&cp, dd);
                let m = level.unwrap_or_else(|| cp.stable_precision(dd));
                let b = if *brute { Some(charcount::rep_count_bruteforce(&cp, dd, m)?) } else { None };
                if let Some(b) = b {
                    // below the stable level the enumeration undercounts
                    if m >= cp.stable_precision(dd) {
                        pass &= BigUint::from(b) == v;
                    }
                }
                rows.push(vec![cfg.p.to_string(), cfg.n.to_string(), cfg.q.to_string(), dd.to_string(), v.to_string()]);
                items.push(json!({ "d": dd, "count": v.to_string(), "enumeration": b }));
                text.push(match (grid, b) {
                    (false, None) => v.to_string(),
                    (false, Some(b)) => format!("{v} (enumeration {b})"),
                    (true, None) => format!("d={dd}: {v}"),
                    (true, Some(b)) => format!("d={dd}: {v} (enumeration {b})"),
                });
            }
            let result = if *grid { json!(items) } else { items.pop().unwrap_or(Value::Null) };
            let mut o = Outcome::new(result, text).checked(pass);
            o.csv = Some(rows);
            o
        }
        CountCmd::Crosscheck { d } => {
            let x = charcount::hkr_rank_crosscheck(&cp, *d, &cfg.ctx()?)?;
            let text = vec![if x.extra_rank > 0 {
                format!("{} = {}+{}", x.rep_count, x.torus_rank, x.extra_rank)
            } else {
                format!("{} = {}", x.rep_count, x.torus_rank)
            }];
            Outcome::new(x.report(), text)
        }
    })
}

fn run_suite(c: &SuiteCmd, cfg: &RunConfig) -> Result<Outcome> {
    let SuiteCmd::Acceptance { no_stretch } = c;
    let results = suite::run_acceptance(&SuiteOptions { stretch: !no_stretch, seed: cfg.seed });
    let bad = suite::unexpected(&results);
    let mut text: Vec<String> = results.iter().map(|r| r.line()).collect();
    text.push(format!("{}/{} criteria pass", results.iter().filter(|r| r.pass()).count(), results.len()));
    for b in &bad {
        text.push(format!("unexpected: {b}"));
    }
    let result = json!({
        "criteria": results.iter().map(|r| r.report()).collect::<Vec<_>>(),
        "expected_red": suite::EXPECTED_RED.iter().map(|(i, n)| json!({ "id": i, "check": n })).collect::<Vec<_>>(),
        "unexpected": bad,
    });
    Ok(Outcome::new(result, text).checked(bad.is_empty()))
}
