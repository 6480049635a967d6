//! Closed-form helpers: the `f_lambda` minimisation, the pipe-dust bounds around
//! the origin edge, the polynomial `g(z)` behind them, theta-graph thresholds and
//! the `p = exp(-lambda)` correspondence.

use num_rational::BigRational;

use crate::error::{invalid, Result};
use crate::exact::{refine_root, IntPoly, RootBracket};

fn check_unit(name: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(invalid(format!("{name} must lie in [0, 1], got {x}")))
    }
}

fn check_rate(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!(
            "lambda must be positive and finite, got {lambda}"
        )))
    }
}

/// `a e^(-t λ) + b e^(-(1-t) λ) - c e^(-λ)`
pub fn f_lambda(a: f64, b: f64, c: f64, lambda: f64, t: f64) -> Result<f64> {
    check_unit("a", a)?;
    check_unit("b", b)?;
    check_unit("c", c)?;
    check_unit("t", t)?;
    check_rate(lambda)?;
    Ok(f_unchecked(a, b, c, lambda, t))
}

fn f_unchecked(a: f64, b: f64, c: f64, lambda: f64, t: f64) -> f64 {
    a * (-t * lambda).exp() + b * (-(1.0 - t) * lambda).exp() - c * (-lambda).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinCase {
    MinAt0,
    MinAt1,
    Interior,
    /// `a = 0`: `b/a` is undefined and `f` is monotone (or constant when `b = 0`).
    /// The minimum is reported at `t = 0`.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FMinResult {
    pub case: MinCase,
    pub t_star: f64,
    pub value: f64,
}

/// Minimum of `f_lambda` over `t ∈ [0, 1]`.
///
/// With `r = b/a`: at `t = 1` if `r <= e^(-λ)`, at `t = 0` if `r >= e^λ`, and
/// otherwise at the stationary point `1/2 - ln(r) / (2λ)`.
pub fn minimize_f(a: f64, b: f64, c: f64, lambda: f64) -> Result<FMinResult> {
    f_lambda(a, b, c, lambda, 0.0)?;
    let (case, t_star) = if a == 0.0 {
        (MinCase::Degenerate, 0.0)
    } else {
        let ratio = b / a;
        if ratio <= (-lambda).exp() {
            (MinCase::MinAt1, 1.0)
        } else if ratio >= lambda.exp() {
            (MinCase::MinAt0, 0.0)
        } else {
            (MinCase::Interior, 0.5 - ratio.ln() / (2.0 * lambda))
        }
    };
    Ok(FMinResult {
        case,
        t_star,
        value: f_unchecked(a, b, c, lambda, t_star),
    })
}

/// Upper bound on `P_λ(o <-> t·e)`: `e^(-λt) + e^(-λ(1-t)) - e^(-λ)`.
pub fn bound_mid(lambda: f64, t: f64) -> Result<f64> {
    check_rate(lambda)?;
    if !(t > 0.0 && t < 1.0) {
        return Err(invalid(format!("t must lie in (0, 1), got {t}")));
    }
    Ok(f_unchecked(1.0, 1.0, 1.0, lambda, t))
}

/// Lower bound on `P_λ(o <-> e)` from paths of at most three edges:
/// `1 - (1 - e^(-3λ))^(2(d-1)) (1 - e^(-λ))`.
pub fn bound_vertex(lambda: f64, d: usize) -> Result<f64> {
    check_rate(lambda)?;
    if d < 2 {
        return Err(invalid(format!("d must be at least 2, got {d}")));
    }
    let three = 1.0 - (-3.0 * lambda).exp();
    Ok(1.0 - three.powi(2 * (d as i32 - 1)) * (1.0 - (-lambda).exp()))
}

/// `g(z) = z^11 + 2(z^10 + z^9 + z^8 + z^7 + z^6 - z^4 - z^3 - z^2 - z - 1)`
pub fn g_poly() -> IntPoly {
    IntPoly::new([-2, -2, -2, -2, -2, 0, 2, 2, 2, 2, 2, 1])
}

/// `1 - (1 - z^6)^2 (1 - z^2) - z(2 - z) - z (z-1)^2 g(z)`, which should be the
/// zero polynomial.
pub fn g_identity_residual() -> IntPoly {
    let z = IntPoly::x();
    let one = IntPoly::one();
    let lower = &one - &(&(&one - &z.pow(6)).pow(2) * &(&one - &z.pow(2)));
    let upper = &z * &(&IntPoly::constant(2) - &z);
    let factored = &(&z * &(&z - &one).pow(2)) * &g_poly();
    &(&lower - &upper) - &factored
}

/// Bracket of width at most `2 * tol` around the largest root of `g` in `(0, 1)`;
/// `g > 0` on the whole interval above it.
pub fn z0_threshold(tol: f64) -> Result<RootBracket> {
    let g = g_poly();
    const GRID: i64 = 1000;
    let at = |k: i64| BigRational::new(k.into(), GRID.into());
    let last_change = (0..GRID)
        .rev()
        .find(|&k| g.sign_at(&at(k)) <= 0 && g.sign_at(&at(k + 1)) > 0)
        .ok_or_else(|| invalid("g has no sign change in (0, 1)"))?;
    refine_root(
        &g,
        &RootBracket::new(at(last_change), at(last_change + 1))?,
        tol,
    )
}

/// Smallest `p` at which `(1-p)^2 (1 - 2(1-p^2)^(n-3))` turns positive, i.e.
/// `(1 - 2^(-1/(n-3)))^(1/2)`.
pub fn theta_threshold(n: usize) -> Result<f64> {
    if n < 4 {
        return Err(invalid(format!("theta threshold needs n >= 4, got {n}")));
    }
    Ok((1.0 - 2f64.powf(-1.0 / (n as f64 - 3.0))).sqrt())
}

/// Smallest `n >= 4` with `theta_threshold(n) <= beta`.
pub fn theta_n_for_beta(beta: f64) -> Result<usize> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(invalid(format!("beta must lie in (0, 1), got {beta}")));
    }
    // threshold(n)^2 <= beta^2  <=>  n - 3 >= ln 2 / -ln(1 - beta^2)
    let bound = std::f64::consts::LN_2 / -(1.0 - beta * beta).ln();
    let mut n = 4usize.max(bound.floor() as usize + 3);
    while n > 4 && theta_threshold(n - 1)? <= beta {
        n -= 1;
    }
    while theta_threshold(n)? > beta {
        n += 1;
    }
    Ok(n)
}

fn check_dimension(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(invalid(format!("d must be at least 2, got {d}")));
    }
    Ok(2.0 * d as f64)
}

/// `(2d(2d-1))^(-1/2)`
pub fn p0(d: usize) -> Result<f64> {
    let k = check_dimension(d)?;
    Ok((k * (k - 1.0)).powf(-0.5))
}

/// `(2d)^(-1/2) (2d-1)^(-1)`: the solution of `2d(2d-1)^2 p^3 < p`.
pub fn p0_strict(d: usize) -> Result<f64> {
    let k = check_dimension(d)?;
    Ok(k.powf(-0.5) / (k - 1.0))
}

pub fn lambda_of_p(p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(invalid(format!("p must lie in (0, 1], got {p}")));
    }
    Ok(-p.ln())
}

pub fn p_of_lambda(lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(invalid(format!("lambda must be >= 0, got {lambda}")));
    }
    Ok((-lambda).exp())
}

/// `P_λ(o <-> t·e)` written through the conditional probability
/// `C = P(o <-> e | {o, e} blocked)`: `e^(-tλ) + C (e^(-(1-t)λ) - e^(-λ))`.
pub fn along_edge_probability(lambda: f64, t: f64, conditional: f64) -> f64 {
    (-t * lambda).exp() + conditional * ((-(1.0 - t) * lambda).exp() - (-lambda).exp())
}
