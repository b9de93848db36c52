//! Dimension `d(π)` of the simple abelian variety attached to a supersingular
//! Weil number, and enumeration of the Weil numbers of a given dimension.

use serde::Serialize;

pub use crate::arith::euler_phi;
use crate::arith::mult_order;
use crate::error::invalid;
use crate::weil::{enumerate_wss, MultipleWeil, PrimePower, WeilRep};
use crate::Result;

/// Which branch of the dimension formula applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseTag {
    /// `±√q` with `a` even: `K = Q`, `d = 1`.
    RealEven,
    /// `±√q` with `a` odd: `K = Q(√p)`, `d = 2`.
    RealOdd,
    /// CM field with endomorphism algebra equal to `K`: `d = [K:Q]/2`.
    CmF,
    /// CM field with a quaternion endomorphism algebra over `K`: `d = [K:Q]`.
    CmQ,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DimData {
    pub weil: WeilRep,
    pub dim: u64,
    pub case_tag: CaseTag,
    pub field_degree: u64,
}

/// Condition (F) for even exponent: `p | n`, or `p` has even order modulo `n`.
pub fn condition_f_even(n: u64, p: u64) -> bool {
    n % p == 0 || mult_order(p % n, n) % 2 == 0
}

pub fn dim_of(w: &WeilRep) -> DimData {
    let ctx = w.ctx();
    let (n, p) = (w.n(), ctx.p());
    let phi = euler_phi(n);
    let (dim, case_tag, field_degree) = if n == 1 {
        if ctx.is_even() {
            (1, CaseTag::RealEven, 1)
        } else {
            (2, CaseTag::RealOdd, 2)
        }
    } else if ctx.is_even() {
        if condition_f_even(n, p) {
            (phi / 2, CaseTag::CmF, phi)
        } else {
            (phi, CaseTag::CmQ, phi)
        }
    } else {
        let d = if n % 4 != 0 {
            if n % p == 0 && p % 4 == 1 {
                phi / 2
            } else {
                phi
            }
        } else if p % 4 != 1 && n % (4 * p) == 0 && n % (8 * p) != 0 {
            phi / 4
        } else {
            phi / 2
        };
        (d, CaseTag::CmF, 2 * d)
    };
    DimData {
        weil: *w,
        dim,
        case_tag,
        field_degree,
    }
}

/// Largest `n` needed to find every Weil number of dimension at most 4.
pub const SEARCH_BOUND_DIM4: u64 = 60;

/// `W^ss_q(d)`. For `d > 4` an explicit search bound must be supplied.
pub fn enumerate_simple(ctx: PrimePower, d: u64, n_max: Option<u64>) -> Result<Vec<WeilRep>> {
    if d == 0 {
        return Err(invalid("dimension must be positive"));
    }
    let bound = match n_max {
        Some(b) => b,
        None if d <= 4 => SEARCH_BOUND_DIM4,
        None => {
            return Err(invalid(format!(
                "dimension {d} > 4 needs an explicit n_max"
            )))
        }
    };
    Ok(enumerate_wss(ctx, bound)
        .into_iter()
        .filter(|w| dim_of(w).dim == d)
        .collect())
}

/// `MW^ss_q(d)`: all formal products of total dimension `d`.
pub fn enumerate_multiple(ctx: PrimePower, d: u64) -> Result<Vec<MultipleWeil>> {
    let bound = if d <= 4 {
        SEARCH_BOUND_DIM4
    } else {
        8 * d * d + 60
    };
    let parts: Vec<(WeilRep, u64)> = enumerate_wss(ctx, bound)
        .into_iter()
        .map(|w| (w, dim_of(&w).dim))
        .filter(|&(_, k)| k <= d)
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    compose(&parts, 0, d, &mut chosen, &mut out);
    let mut out: Vec<MultipleWeil> = out
        .into_iter()
        .map(|f| MultipleWeil::new(f).expect("parts are canonical and distinct"))
        .collect();
    out.sort();
    Ok(out)
}

fn compose(
    parts: &[(WeilRep, u64)],
    start: usize,
    remaining: u64,
    chosen: &mut Vec<(WeilRep, u32)>,
    out: &mut Vec<Vec<(WeilRep, u32)>>,
) {
    if remaining == 0 {
        out.push(chosen.clone());
        return;
    }
    for i in start..parts.len() {
        let (w, k) = parts[i];
        let mut m = 1;
        while m * k <= remaining {
            chosen.push((w, m as u32));
            compose(parts, i + 1, remaining - m * k, chosen, out);
            chosen.pop();
            m += 1;
        }
    }
}
