//! Desk-scale rerun of every acceptance check, reported as markdown.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use perc_core::analysis::{g_identity_residual, g_poly, minimize_f, MinCase};
use perc_core::dust::{compare_along_e, estimate_dust, PipePoint};
use perc_core::exact::{
    isolate_root, log_ratio_h, theta_closed_form, theta_peak_minus_middle, two_terminal_poly,
    RootBracket, ThetaTarget,
};
use perc_core::graph::{make_box, make_theta, make_tree_glued, Graph};
use perc_core::mc::rng::derive_seed;
use perc_core::mc::{
    bisect_tau_c, estimate_F, estimate_F_lattice, estimate_connection, estimate_triangle_AB,
    McConfig, PlanarLattice,
};

use crate::args::{Common, ReproduceArgs};
use crate::sink::{config_text, header};
use crate::Failure;

type Check = Result<String, String>;

struct Ctx {
    seed: u64,
    scale: f64,
    workers: usize,
}

impl Ctx {
    fn samples(&self, full: u64) -> u64 {
        ((full as f64 * self.scale).round() as u64).max(1_000)
    }

    fn cfg(&self, tag: u64, full: u64, radius: usize, p: f64) -> McConfig {
        McConfig::new(derive_seed(self.seed, tag), self.samples(full), radius, p)
            .with_workers(self.workers)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn verdict(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn theta_identities(_: &Ctx) -> Check {
    for n in 3..=10 {
        let g = make_theta(n).map_err(err)?;
        for (t, v) in [(ThetaTarget::Peak, n), (ThetaTarget::Middle, 1)] {
            if two_terminal_poly(&g, 0, v, &[]).map_err(err)?
                != theta_closed_form(n, t).map_err(err)?
            {
                return Err(format!("mismatch at n = {n}, {t:?}"));
            }
        }
    }
    Ok("enumeration equals closed forms for n = 3..10".into())
}

fn golden_ratio(_: &Ctx) -> Check {
    let diff = theta_peak_minus_middle(4).map_err(err)?;
    let root = isolate_root(
        &diff,
        &RootBracket::new(q(1, 2), q(7, 10)).map_err(err)?,
        1e-12,
    )
    .map_err(err)?;
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let above = (63..=99).all(|k| diff.sign_at(&q(k, 100)) > 0);
    verdict(
        (root - phi).abs() <= 1e-10 && above,
        format!("root {root:.10}; peak > middle on 0.63..0.99"),
    )
}

fn tree_glued(ctx: &Ctx) -> Check {
    let tg = make_tree_glued(4, 1).map_err(err)?;
    let theta = make_theta(4).map_err(err)?;
    let mut worst = 0.0f64;
    for (i, &p) in [0.5, 0.8].iter().enumerate() {
        for (c, copy) in tg.copies.iter().enumerate().take(3) {
            for (a, b) in [(0, 4), (0, 1), (1, 2)] {
                let exact = two_terminal_poly(&theta, a, b, &[])
                    .map_err(err)?
                    .eval_f64(p);
                let cfg = ctx.cfg(300 + 10 * i as u64 + c as u64, 100_000, 0, p);
                let e = estimate_connection(&tg.graph, copy[a], copy[b], &[], &cfg).map_err(err)?;
                worst = worst.max((e.mean - exact).abs() / e.ci_half_width);
            }
        }
    }
    verdict(
        worst <= 4.0,
        format!("worst deviation {worst:.2} half-widths over 18 pairs"),
    )
}

fn g_facts(_: &Ctx) -> Check {
    let g = g_poly();
    let ok = g.eval_rational(&BigRational::one()) == BigRational::one()
        && g.sign_at(&q(99, 100)) > 0
        && g_identity_residual().is_zero();
    verdict(
        ok,
        "g(1) = 1, g(0.99) > 0, identity residual is zero".into(),
    )
}

fn dust(ctx: &Ctx) -> (Check, Check) {
    let z = (-0.01f64).exp();
    let upper = z * (2.0 - z);
    let lower = 1.0 - (1.0 - z.powi(6)).powi(2) * (1.0 - z * z);
    let mut diff_ok = true;
    let mut bound_ok = true;
    let mut diffs = Vec::new();
    let mut bounds = Vec::new();
    for r in [6, 12] {
        let cfg = ctx
            .cfg(500 + r as u64, 1_000_000, r, 0.0)
            .with_confidence(0.99);
        let c = match compare_along_e(2, 0.02, 1.0, 0.5, &cfg) {
            Ok(c) => c,
            Err(e) => return (Err(e.to_string()), Err(e.to_string())),
        };
        diff_ok &= c.difference.mean > 0.0 && c.difference.excludes_zero();
        bound_ok &=
            c.b.mean <= upper + 4.0 * c.b.std_error() && c.a.mean >= lower - 4.0 * c.a.std_error();
        diffs.push(format!(
            "r={r}: {:.2e} ± {:.2e}",
            c.difference.mean, c.difference.ci_half_width
        ));
        bounds.push(format!("r={r}: {:.6} / {:.6}", c.b.mean, c.a.mean));
    }
    (
        verdict(diff_ok, diffs.join("; ")),
        verdict(
            bound_ok,
            format!(
                "mid <= {upper:.6}, vertex >= {lower:.6}; {}",
                bounds.join("; ")
            ),
        ),
    )
}

fn subcritical(ctx: &Ctx) -> Check {
    let f = estimate_F(2, &ctx.cfg(700, 1_000_000, 6, 0.2)).map_err(err)?;
    let b = make_box(2, 2, true).map_err(err)?;
    let at = |x: i32, y: i32| b.vertex_at(&[x, y]).expect("vertex in box");
    let (o, e) = (b.origin(), b.target());
    let path = [
        (o, at(0, 1)),
        (at(0, 1), at(1, 1)),
        (at(1, 1), e),
        (o, at(0, -1)),
        (at(0, -1), at(1, -1)),
        (at(1, -1), e),
    ];
    let sub = b.graph.edge_subgraph(&path).map_err(err)?;
    let p = q(99, 100);
    let value = two_terminal_poly(&sub, o, e, &[])
        .map_err(err)?
        .eval_rational(&p);
    let cube = &p * &p * &p;
    let bound = BigRational::one() - (BigRational::one() - &cube) * (BigRational::one() - &cube);
    verdict(
        f.mean < 0.2 && f.excludes(0.2) && value >= bound && value > p,
        format!(
            "F(0.2) = {:.5} ± {:.5}; two-path value at 0.99 = {:.6}",
            f.mean,
            f.ci_half_width,
            value.to_f64().unwrap_or(f64::NAN)
        ),
    )
}

fn crossing(ctx: &Ctx) -> Check {
    let bracket = bisect_tau_c(2, &ctx.cfg(800, 100_000, 32, 0.5), 0.3, 0.9, 4).map_err(err)?;
    let f = estimate_F(2, &ctx.cfg(801, 100_000, 64, 0.5)).map_err(err)?;
    verdict(
        bracket.contains(0.5) && bracket.width() <= 0.06 && (0.45..=0.50).contains(&f.mean),
        format!(
            "bracket [{:.4}, {:.4}]{}; F(0.5) at r=64 = {:.5}",
            bracket.lo,
            bracket.hi,
            if bracket.ambiguous {
                " (ambiguous stop)"
            } else {
                ""
            },
            f.mean
        ),
    )
}

fn planar(ctx: &Ctx) -> Check {
    let p = 2.0 * (std::f64::consts::PI / 18.0).sin();
    let (a, b) = estimate_triangle_AB(p, &ctx.cfg(900, 100_000, 32, p)).map_err(err)?;
    let tri = estimate_F_lattice(PlanarLattice::Triangular, p, &ctx.cfg(901, 100_000, 32, p))
        .map_err(err)?;
    let hex = estimate_F_lattice(
        PlanarLattice::Hexagonal,
        1.0 - p,
        &ctx.cfg(902, 100_000, 32, p),
    )
    .map_err(err)?;
    let sum = a.mean + b.mean;
    verdict(
        (0.95..=1.05).contains(&sum)
            && tri.mean > p
            && tri.excludes(p)
            && hex.mean < 1.0 - p
            && hex.excludes(1.0 - p),
        format!(
            "A+B = {sum:.4}; F_T = {:.4}; F_H(1-p) = {:.4}; p = {p:.6}",
            tri.mean, hex.mean
        ),
    )
}

fn log_ratio(_: &Ctx) -> Check {
    let edge = Graph::new(2, vec![(0, 1)], 0).map_err(err)?;
    let path = Graph::new(3, vec![(0, 1), (1, 2)], 0).map_err(err)?;
    let b = make_box(2, 2, true).map_err(err)?;
    for (g, u, v) in [
        (&edge, 0, 1),
        (&path, 0, 2),
        (&b.graph, b.origin(), b.target()),
    ] {
        let mut prev = f64::INFINITY;
        for k in 1..=19 {
            let h = log_ratio_h(g, u, v, &[], k as f64 * 0.05).map_err(err)?;
            if h > prev + 1e-12 {
                return Err(format!("h increases at p = {}", k as f64 * 0.05));
            }
            prev = h;
        }
    }
    Ok("non-increasing for edge, 2-path and box r=2 minus {o,e}".into())
}

fn minimisation(ctx: &Ctx) -> Check {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(derive_seed(ctx.seed, 1100));
    let mut cases = [0usize; 3];
    for _ in 0..1000 {
        let (a, b, c): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
        let lambda = rng.random_range(0.01..5.0);
        let r = minimize_f(a, b, c, lambda).map_err(err)?;
        let f = |t: f64| {
            a * (-t * lambda).exp() + b * (-(1.0 - t) * lambda).exp() - c * (-lambda).exp()
        };
        let grid = (0..=10_000)
            .map(|k| f(k as f64 / 1e4))
            .fold(f64::INFINITY, f64::min);
        if r.value > grid + 1e-12 || grid - r.value > 1e-6 {
            return Err(format!(
                "disagrees with grid search at a={a} b={b} c={c} lambda={lambda}"
            ));
        }
        match r.case {
            MinCase::MinAt0 => cases[0] += 1,
            MinCase::MinAt1 => cases[1] += 1,
            MinCase::Interior => cases[2] += 1,
            MinCase::Degenerate => {}
        }
    }
    verdict(
        cases.iter().all(|&c| c > 0),
        format!(
            "t=0: {}, t=1: {}, interior: {}",
            cases[0], cases[1], cases[2]
        ),
    )
}

fn equivalence(ctx: &Ctx) -> Check {
    let g = make_theta(4).map_err(err)?;
    let mut worst = 0.0f64;
    for (i, p) in [0.3f64, 0.6, 0.9].into_iter().enumerate() {
        for v in [4, 1] {
            let exact = two_terminal_poly(&g, 0, v, &[]).map_err(err)?.eval_f64(p);
            let cfg = ctx.cfg(1200 + 10 * i as u64 + v as u64, 100_000, 0, 0.0);
            let e = estimate_dust(
                &g,
                -p.ln(),
                PipePoint::Vertex(0),
                PipePoint::Vertex(v),
                &cfg,
            )
            .map_err(err)?;
            worst = worst.max((e.mean - exact).abs() / e.ci_half_width);
        }
    }
    verdict(
        worst <= 4.0,
        format!("worst deviation {worst:.2} half-widths"),
    )
}

pub fn run(common: &Common, a: &ReproduceArgs) -> Result<(), Failure> {
    if !(a.scale > 0.0 && a.scale <= 10.0) {
        return Err(Failure::usage("--scale must lie in (0, 10]"));
    }
    let ctx = Ctx {
        seed: a.seed,
        scale: a.scale,
        workers: common.workers,
    };
    let mut results: Vec<(usize, &str, Check)> = vec![
        (1, "Theta polynomials", theta_identities(&ctx)),
        (2, "Golden-ratio crossing", golden_ratio(&ctx)),
        (3, "Cut-vertex decomposition", tree_glued(&ctx)),
        (4, "g(z) facts", g_facts(&ctx)),
    ];
    let (five, six) = dust(&ctx);
    results.push((5, "Pipe-dust non-monotonicity", five));
    results.push((6, "Pipe-dust bounds", six));
    results.push((7, "Subcritical F and two-path bound", subcritical(&ctx)));
    results.push((8, "Square-lattice crossing", crossing(&ctx)));
    results.push((9, "Triangular and hexagonal lattices", planar(&ctx)));
    results.push((10, "Log-ratio monotonicity", log_ratio(&ctx)));
    results.push((11, "f_lambda minimisation", minimisation(&ctx)));
    results.push((12, "Dust/bond equivalence", equivalence(&ctx)));

    let fields = [("seed", a.seed.to_string()), ("scale", a.scale.to_string())];
    let mut md = String::from("# Reproduction report\n\n```\n");
    md.push_str(&config_text(&header("reproduce-paper", common, &fields)));
    md.push_str("```\n\n| # | Check | Result | Detail |\n|---|---|---|---|\n");
    let mut failed = 0;
    for (k, name, r) in &results {
        let (mark, detail) = match r {
            Ok(d) => ("pass", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        md.push_str(&format!(
            "| {k} | {name} | {mark} | {} |\n",
            detail.replace('|', "\\|")
        ));
    }
    md.push_str(&format!(
        "\n{} of {} checks passed.\n",
        results.len() - failed,
        results.len()
    ));
    match &common.out {
        Some(path) => std::fs::write(path, &md)?,
        None => print!("{md}"),
    }
    if failed > 0 {
        return Err(Failure::failed(format!("{failed} checks failed")));
    }
    Ok(())
}
