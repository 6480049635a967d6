//! Exact connection polynomials, integer-coefficient polynomial arithmetic and
//! bisection root isolation.

mod enumerate;
mod poly;
mod root;

pub use enumerate::{
    log_ratio_h, log_ratio_of, two_terminal_counts, two_terminal_poly, ConnectionCounts,
    ENUMERATION_BOUND,
};
pub use poly::IntPoly;
pub use root::{isolate_root, refine_root, RootBracket};

use crate::error::{invalid, Result};

/// Which vertex of `P_n` is the far terminal, seen from the peak `v_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThetaTarget {
    /// The opposite peak `v_n`.
    Peak,
    /// Any middle vertex `v_i`, `1 <= i < n`.
    Middle,
}

/// Closed forms for `P_p(v_0 <-> target)` on `P_n`:
/// `1 - (1-p^2)^(n-1)` for the peak and `p + (1-p) p (1 - (1-p^2)^(n-2))` for a
/// middle vertex.
pub fn theta_closed_form(n: usize, target: ThetaTarget) -> Result<IntPoly> {
    if n < 3 {
        return Err(invalid(format!("theta graph needs n >= 3, got {n}")));
    }
    let p = IntPoly::x();
    let one = IntPoly::one();
    let q2 = &one - &p.pow(2);
    Ok(match target {
        ThetaTarget::Peak => &one - &q2.pow(n as u32 - 1),
        ThetaTarget::Middle => {
            let detour = &(&(&one - &p) * &p) * &(&one - &q2.pow(n as u32 - 2));
            &p + &detour
        }
    })
}

/// `P(v_0 <-> v_n) - P(v_0 <-> v_1)` on `P_n`.
pub fn theta_peak_minus_middle(n: usize) -> Result<IntPoly> {
    Ok(&theta_closed_form(n, ThetaTarget::Peak)? - &theta_closed_form(n, ThetaTarget::Middle)?)
}
