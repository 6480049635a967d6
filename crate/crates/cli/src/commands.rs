use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use perc_core::analysis::{theta_n_for_beta, theta_threshold};
use perc_core::dust::scan_t;
use perc_core::exact::{
    refine_root, theta_closed_form, theta_peak_minus_middle, two_terminal_poly, IntPoly,
    RootBracket, ThetaTarget,
};
use perc_core::graph::make_theta;
use perc_core::mc::{
    bisect_tau_c, estimate_F_lattice, estimate_triangle_AB, McConfig, PlanarLattice,
};
use perc_core::output::{dust_row, svg_curve, McRow, DUST_HEADER, MC_HEADER};
use perc_core::Error;

use crate::args::{
    Common, CounterexampleArgs, DustArgs, ExactArgs, ExactWhat, McArgs, TargetArg, TaucArgs,
    TriangleArgs,
};
use crate::sink::{config_text, emit, header};
use crate::Failure;

fn mc_config(common: &Common, mc: &McArgs, samples: u64, radius: usize, p: f64) -> McConfig {
    McConfig::new(
        mc.seed,
        mc.samples.unwrap_or(samples),
        mc.radius.unwrap_or(radius),
        p,
    )
    .with_workers(common.workers)
    .with_confidence(mc.confidence)
}

fn mc_fields(cfg: &McConfig) -> Vec<(&'static str, String)> {
    vec![
        ("seed", cfg.seed.to_string()),
        ("samples", cfg.samples.to_string()),
        ("radius", cfg.box_radius.to_string()),
        ("confidence", cfg.confidence.to_string()),
    ]
}

pub fn exact(common: &Common, a: &ExactArgs) -> Result<(), Failure> {
    let target = match a.target {
        TargetArg::Peak => ThetaTarget::Peak,
        TargetArg::Middle => ThetaTarget::Middle,
    };
    let line = match a.what {
        ExactWhat::Theta => theta_closed_form(a.n, target)?.to_string(),
        ExactWhat::Diff => theta_peak_minus_middle(a.n)?.to_string(),
        ExactWhat::Root => format!("{:.10}", crossing(&theta_peak_minus_middle(a.n)?, a.n)?),
    };
    match &common.out {
        None => println!("{line}"),
        Some(path) => {
            let mut fields = vec![
                ("what", format!("{:?}", a.what).to_lowercase()),
                ("n", a.n.to_string()),
            ];
            if a.what == ExactWhat::Theta {
                fields.push(("target", format!("{:?}", a.target).to_lowercase()));
            }
            let text = config_text(&header("exact", common, &fields)) + &line + "\n";
            std::fs::write(path, text)?;
        }
    }
    Ok(())
}

/// The sign change of `diff` strictly inside (0, 1).
fn crossing(diff: &IntPoly, n: usize) -> Result<f64, Failure> {
    const GRID: i64 = 1000;
    let at = |k: i64| BigRational::new(BigInt::from(k), BigInt::from(GRID));
    for k in 1..GRID - 1 {
        let (s0, s1) = (diff.sign_at(&at(k)), diff.sign_at(&at(k + 1)));
        if s0 == 0 {
            return Ok(k as f64 / GRID as f64);
        }
        if s0 * s1 < 0 {
            let b = refine_root(diff, &RootBracket::new(at(k), at(k + 1))?, 1e-13)?;
            return Ok(0.5 * (b.lo_f64() + b.hi_f64()));
        }
    }
    Err(Failure::failed(format!(
        "peak and middle do not cross inside (0, 1) for n = {n}"
    )))
}

pub fn tauc(common: &Common, a: &TaucArgs) -> Result<(), Failure> {
    let cfg = mc_config(common, &a.mc, 100_000, 32, a.lo);
    let mut fields = vec![("d", a.d.to_string())];
    fields.extend(mc_fields(&cfg));
    fields.extend([
        ("lo", a.lo.to_string()),
        ("hi", a.hi.to_string()),
        ("iterations", a.iterations.to_string()),
    ]);
    let head = config_text(&header("tauc", common, &fields));

    let bracket = bisect_tau_c(a.d, &cfg, a.lo, a.hi, a.iterations)?;
    let mut csv = format!("{head}{MC_HEADER}\n");
    for (i, step) in bracket.steps.iter().enumerate() {
        let row = McRow {
            tag: "tauc",
            d: a.d,
            lattice: "hypercubic",
            p: step.p,
            radius: cfg.box_radius,
            seed: perc_core::mc::rng::derive_seed(cfg.seed, i as u64),
            estimate: step.estimate,
        };
        csv.push_str(&row.to_csv());
        csv.push('\n');
    }
    csv.push_str(&format!(
        "# bracket={},{}\n# ambiguous={}\n",
        bracket.lo, bracket.hi, bracket.ambiguous
    ));

    let mut points: Vec<_> = bracket.steps.iter().map(|s| (s.p, s.estimate)).collect();
    points.sort_by(|x, y| x.0.total_cmp(&y.0));
    let svg = svg_curve(
        &format!("F(p) on the Z^{} box, radius {}", a.d, cfg.box_radius),
        "p",
        "F(p)",
        &points,
    );
    emit(common, &csv, Some(&svg))?;
    eprintln!("bracket [{}, {}]", bracket.lo, bracket.hi);
    if bracket.ambiguous {
        return Err(Failure::ambiguous(format!(
            "ambiguous bracket: F(p) - p not significant at p = {}",
            bracket.steps.last().map(|s| s.p).unwrap_or(f64::NAN)
        )));
    }
    Ok(())
}

pub fn parse_grid(text: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::usage(format!("--grid expects start:end:step, got {text:?}"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [start, end, step] = parts[..] else {
        return Err(bad());
    };
    if !(step > 0.0) || end < start {
        return Err(bad());
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(bad());
    }
    // Round away accumulated binary noise so 0.1:1.0:0.1 prints as 0.3, not 0.30000000000000004.
    Ok((0..count)
        .map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

pub fn dustpipe(common: &Common, a: &DustArgs) -> Result<(), Failure> {
    let grid = parse_grid(&a.grid)?;
    let cfg = mc_config(common, &a.mc, 100_000, 6, 0.0);
    let mut fields = vec![
        ("d", a.d.to_string()),
        ("lambda", a.lambda.to_string()),
        ("grid", a.grid.clone()),
    ];
    fields.extend(mc_fields(&cfg));
    let head = config_text(&header("dustpipe", common, &fields));

    let scan = scan_t(a.d, a.lambda, &grid, &cfg)?;
    let mut csv = format!("{head}{DUST_HEADER}\n");
    for (t, e) in &scan {
        csv.push_str(&dust_row(a.lambda, *t, cfg.box_radius, cfg.seed, e));
        csv.push('\n');
    }
    let svg = svg_curve(
        &format!("Pipe-dust, lambda = {}", a.lambda),
        "t",
        "P(o <-> t e)",
        &scan,
    );
    emit(common, &csv, Some(&svg))
}

pub fn triangle(common: &Common, a: &TriangleArgs) -> Result<(), Failure> {
    let cfg = mc_config(common, &a.mc, 100_000, 32, a.p);
    let mut fields = vec![("p", a.p.to_string())];
    fields.extend(mc_fields(&cfg));
    let head = config_text(&header("triangle", common, &fields));

    let (ea, eb) = estimate_triangle_AB(a.p, &cfg)?;
    let tri_cfg = cfg.with_seed(cfg.seed.wrapping_add(1));
    let hex_cfg = cfg.with_seed(cfg.seed.wrapping_add(2));
    let tri = estimate_F_lattice(PlanarLattice::Triangular, a.p, &tri_cfg)?;
    let hex = estimate_F_lattice(PlanarLattice::Hexagonal, 1.0 - a.p, &hex_cfg)?;
    let rows = [
        ("A", "triangular", a.p, cfg.seed, ea),
        ("B", "triangular", a.p, cfg.seed, eb),
        ("F", "triangular", a.p, tri_cfg.seed, tri),
        ("F", "hexagonal", 1.0 - a.p, hex_cfg.seed, hex),
    ];
    let mut csv = format!("{head}{MC_HEADER}\n");
    for (tag, lattice, p, seed, estimate) in rows {
        let row = McRow {
            tag,
            d: 2,
            lattice,
            p,
            radius: cfg.box_radius,
            seed,
            estimate,
        };
        csv.push_str(&row.to_csv());
        csv.push('\n');
    }
    csv.push_str(&format!(
        "# A+B={}\n# decomposition={}\n",
        ea.mean + eb.mean,
        perc_core::mc::triangle_decomposition(a.p, ea.mean, eb.mean)
    ));
    emit(common, &csv, None)
}

pub fn counterexample(common: &Common, a: &CounterexampleArgs) -> Result<(), Failure> {
    let n = theta_n_for_beta(a.beta)?;
    if n > a.max_n {
        return Err(Error::BudgetExceeded {
            requested: n as u128,
            budget: a.max_n,
        }
        .into());
    }
    let threshold = theta_threshold(n)?;
    // Enumerate the actual graph when it is small; the closed forms agree with it.
    let (peak, middle) = if 2 * (n - 1) <= 22 {
        let g = make_theta(n)?;
        (
            two_terminal_poly(&g, 0, n, &[])?,
            two_terminal_poly(&g, 0, 1, &[])?,
        )
    } else {
        (
            theta_closed_form(n, ThetaTarget::Peak)?,
            theta_closed_form(n, ThetaTarget::Middle)?,
        )
    };
    let fields = [
        ("beta", a.beta.to_string()),
        ("max_n", a.max_n.to_string()),
        ("n", n.to_string()),
        ("threshold", threshold.to_string()),
    ];
    let mut csv = config_text(&header("counterexample", common, &fields));
    csv.push_str("p,peak,middle,difference\n");
    let first = ((a.beta * 100.0) - 1e-9).ceil() as i64;
    let mut failures = Vec::new();
    for k in first.max(1)..100 {
        let p = BigRational::new(BigInt::from(k), BigInt::from(100));
        let (hi, lo) = (peak.eval_rational(&p), middle.eval_rational(&p));
        let diff = &hi - &lo;
        if diff <= BigRational::from_integer(0.into()) {
            failures.push(k);
        }
        let f = |x: &BigRational| x.to_f64().unwrap_or(f64::NAN);
        csv.push_str(&format!(
            "{},{},{},{}\n",
            k as f64 / 100.0,
            f(&hi),
            f(&lo),
            f(&diff)
        ));
    }
    emit(common, &csv, None)?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::failed(format!(
            "peak does not beat middle at p = {failures:?} / 100"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(
            parse_grid("0.1:1.0:0.1").unwrap(),
            vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
        );
        assert_eq!(parse_grid("0.5:0.5:0.1").unwrap(), vec![0.5]);
        assert!(parse_grid("0.1:1.0").is_err());
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn golden_crossing() {
        let r = crossing(&theta_peak_minus_middle(4).unwrap(), 4).unwrap();
        assert!((r - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);
        assert!(crossing(&theta_peak_minus_middle(3).unwrap(), 3).is_err());
    }
}
