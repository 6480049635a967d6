use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::rational_to_f64;
use super::IntPoly;
use crate::error::{Error, Result};

/// An interval `[lo, hi] ⊆ [0, 1]` over which a polynomial changes sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootBracket {
    lo: BigRational,
    hi: BigRational,
}

impl RootBracket {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo < BigRational::zero() || hi > BigRational::one() || lo >= hi {
            return Err(Error::InvalidBracket(format!(
                "need 0 <= lo < hi <= 1, got [{lo}, {hi}]"
            )));
        }
        Ok(RootBracket { lo, hi })
    }

    /// Converts float endpoints exactly (every finite double is a dyadic rational).
    pub fn from_f64(lo: f64, hi: f64) -> Result<Self> {
        let conv = |x: f64| {
            BigRational::from_float(x)
                .ok_or_else(|| Error::InvalidBracket(format!("non-finite endpoint {x}")))
        };
        Self::new(conv(lo)?, conv(hi)?)
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn lo_f64(&self) -> f64 {
        rational_to_f64(&self.lo)
    }

    pub fn hi_f64(&self) -> f64 {
        rational_to_f64(&self.hi)
    }

    pub fn width_f64(&self) -> f64 {
        rational_to_f64(&(&self.hi - &self.lo))
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo_f64() <= x && x <= self.hi_f64()
    }
}

/// Bisects `poly` on `bracket` with exact sign evaluation until the bracket is
/// narrower than `2 * tol`.
pub fn refine_root(poly: &IntPoly, bracket: &RootBracket, tol: f64) -> Result<RootBracket> {
    if !(tol > 0.0) {
        return Err(Error::InvalidBracket(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let mut lo = bracket.lo.clone();
    let mut hi = bracket.hi.clone();
    let s_lo = poly.sign_at(&lo);
    let s_hi = poly.sign_at(&hi);
    if s_lo == 0 {
        return Ok(pinned(&lo));
    }
    if s_hi == 0 {
        return Ok(pinned(&hi));
    }
    if s_lo == s_hi {
        return Err(Error::InvalidBracket(format!(
            "no sign change on [{}, {}]",
            bracket.lo_f64(),
            bracket.hi_f64()
        )));
    }
    let two = BigRational::from_integer(2.into());
    while rational_to_f64(&(&hi - &lo)) > 2.0 * tol {
        let mid = (&lo + &hi) / &two;
        match poly.sign_at(&mid) {
            0 => return Ok(pinned(&mid)),
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    Ok(RootBracket { lo, hi })
}

/// Zero-width bracket at an exact root.
fn pinned(x: &BigRational) -> RootBracket {
    RootBracket {
        lo: x.clone(),
        hi: x.clone(),
    }
}

/// Root of `poly` inside `bracket`, within `±tol`.
pub fn isolate_root(poly: &IntPoly, bracket: &RootBracket, tol: f64) -> Result<f64> {
    let b = refine_root(poly, bracket, tol)?;
    Ok(rational_to_f64(
        &((&b.lo + &b.hi) / BigRational::from_integer(2.into())),
    ))
}
