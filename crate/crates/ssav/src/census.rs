//! Counts of superspecial abelian varieties: `|Sp₁(F_q)|`, `H(√p)`, `H_sp(π)`,
//! `Δ(p)`, `|Sp₂(F_q)|` and the mass term of `H(√p)`.
//!
//! The small primes 2, 3, 5 are table-driven. For `p > 5` the surface counts
//! come from closed formulas in class numbers, with an independent bottom-up
//! path through the orders between `R_sp` and `O_K`.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::arith::{rat, ratio, rational_string, to_integer};
use crate::cm_quartic::class_number_cm;
use crate::dimension::{dim_of, enumerate_multiple, enumerate_simple};
use crate::error::invalid;
use crate::orders::hsp_by_orders;
use crate::quadratics::{class_number, class_number_imaginary, kronecker, varpi, zeta_minus_one};
use crate::weil::{transfer_to_prime_field, MultipleWeil, PrimePower, WeilRep};
use crate::{Error, Result};

/// Where a per-class count came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Published value for a small prime.
    Table,
    /// Closed formula in class numbers.
    Formula,
    /// Sum of `h(B)` over the orders `R_sp ⊆ B ⊆ O_K`.
    Orders,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassCount {
    pub weil: MultipleWeil,
    pub count: u64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusReport {
    pub ctx: PrimePower,
    pub dim: u64,
    pub per_class: Vec<ClassCount>,
    pub total: u64,
    #[serde(serialize_with = "opt_rational")]
    pub mass: Option<BigRational>,
    #[serde(serialize_with = "opt_rational")]
    pub mass_ratio: Option<BigRational>,
}

fn opt_rational<S: Serializer>(
    x: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(r) => s.serialize_str(&rational_string(r)),
        None => s.serialize_none(),
    }
}

fn leg(a: i64, p: u64) -> i64 {
    kronecker(a, p as i64) as i64
}

fn prime_ctx(p: u64) -> Result<PrimePower> {
    PrimePower::new(p, 1)
}

fn cm(m: u64, j: i64) -> Result<BigRational> {
    Ok(rat(class_number_cm(m as i64, j)? as i64))
}

fn h_imag(p: u64) -> Result<BigRational> {
    Ok(rat(class_number(-(p as i64))? as i64))
}

/// `H(√p)`.
pub fn h_sqrt_p(p: u64) -> Result<u64> {
    prime_ctx(p)?;
    match p {
        2 => return Ok(1),
        3 => return Ok(2),
        5 => return Ok(3),
        _ => {}
    }
    let pi = p as i64;
    let zeta = zeta_minus_one(pi)?;
    let hf = rat(class_number(pi)? as i64);
    let main = &zeta * &hf;
    let value = if p % 4 == 3 {
        let coeff1 = ratio(3, 8) + ratio(5, 8) * rat(2 - leg(2, p));
        main * ratio(1, 2) + coeff1 * cm(p, 1)? + ratio(1, 4) * cm(p, 2)? + ratio(1, 3) * cm(p, 3)?
    } else if p % 8 == 1 {
        main * rat(8) + cm(p, 1)? + ratio(4, 3) * cm(p, 3)?
    } else {
        let w = rat(varpi(pi)? as i64);
        main * (&w * rat(15) + rat(1)) * ratio(1, 2)
            + (&w * rat(3) + rat(1)) * ratio(1, 4) * cm(p, 1)?
            + ratio(4, 3) * cm(p, 3)?
    };
    positive(&value, &format!("H(√{p})"))
}

fn positive(x: &BigRational, what: &str) -> Result<u64> {
    let v = to_integer(x, what)?;
    if v <= 0 {
        return Err(Error::Integrality(format!("{what} = {v} is not positive")));
    }
    Ok(v as u64)
}

/// The mass part of `H(√p)` for `p > 5`.
pub fn mass(p: u64) -> Result<BigRational> {
    prime_ctx(p)?;
    if p <= 5 {
        return Err(invalid("the mass term is defined here for p > 5"));
    }
    let pi = p as i64;
    let main = zeta_minus_one(pi)? * rat(class_number(pi)? as i64);
    Ok(if p % 4 == 3 {
        main * ratio(1, 2)
    } else if p % 8 == 1 {
        main * rat(8)
    } else {
        main * (rat(15 * varpi(pi)? as i64) + rat(1)) * ratio(1, 2)
    })
}

/// `|Sp₂(F_p)| / Mass(p)`.
pub fn mass_ratio(p: u64) -> Result<BigRational> {
    Ok(rat(sp2_count(prime_ctx(p)?)? as i64) / mass(p)?)
}

fn self_product_count(w: &WeilRep) -> Result<(u64, Provenance)> {
    let p = w.ctx().p();
    match (p, w.n()) {
        (2, 4) => return Ok((1, Provenance::Table)),
        (3, 4) => return Ok((3, Provenance::Table)),
        (2, 8) | (3, 12) => return Ok((1, Provenance::Table)),
        (_, 4) => {}
        _ => {
            return Err(invalid(format!(
                "{w} is not a supersingular elliptic Weil number"
            )))
        }
    }
    let h = class_number(-(p as i64))?;
    Ok(if p % 4 == 1 {
        (h, Provenance::Formula)
    } else {
        ((4 - leg(2, p)) as u64 * h, Provenance::Formula)
    })
}

/// Published per-class values of `H_sp` for `p ≤ 5` (classes other than
/// `√p` and self-products), keyed by the sorted `(sign, n)` factors.
fn small_prime_table(pi: &MultipleWeil) -> Option<u64> {
    let key: Vec<(i64, u64)> = pi
        .factors()
        .iter()
        .map(|(w, _)| (w.sign().as_i64(), w.n()))
        .collect();
    let v = match (pi.ctx().p(), key.as_slice()) {
        (2, [(1, 3)]) | (2, [(1, 12)]) | (2, [(_, 24)]) => 1,
        (2, [(1, 4), (_, 8)]) => 2,
        (2, [(1, 8), (-1, 8)]) => 4,
        (3, [(1, 3)]) => 1,
        (3, [(1, 8)]) => 2,
        (3, [(1, 4), (_, 12)]) => 4,
        (3, [(1, 12), (-1, 12)]) => 4,
        (5, [(1, 3)]) => 1,
        (5, [(1, 8)]) | (5, [(1, 12)]) => 2,
        (5, [(_, 5)]) => 1,
        _ => return None,
    };
    Some(v)
}

fn check_surface_class(pi: &MultipleWeil) -> Result<()> {
    if pi.ctx().a() != 1 {
        return Err(invalid(
            "H_sp is evaluated over the prime field; transfer first",
        ));
    }
    let dim: u64 = pi
        .factors()
        .iter()
        .map(|(w, m)| dim_of(w).dim * *m as u64)
        .sum();
    if dim != 2 {
        return Err(invalid(format!("{pi} has dimension {dim}, expected 2")));
    }
    if pi.is_simple() && pi.factors()[0].0.is_real() {
        return Err(invalid("the class √p is counted by H(√p)"));
    }
    Ok(())
}

/// `H_sp(π)` for a two-dimensional class over `F_p` other than `√p`, with its provenance.
pub fn hsp_with_provenance(pi: &MultipleWeil) -> Result<(u64, Provenance)> {
    check_surface_class(pi)?;
    let f = pi.factors();
    let (count, prov) = if f.len() == 1 && f[0].1 == 2 {
        self_product_count(&f[0].0)?
    } else if let Some(v) = small_prime_table(pi) {
        (v, Provenance::Table)
    } else if pi.ctx().p() <= 5 {
        return Err(invalid(format!("no published value for {pi}")));
    } else {
        (hsp_by_orders(pi)?, Provenance::Orders)
    };
    if count == 0 {
        return Err(Error::Integrality(format!("H_sp({pi}) = 0")));
    }
    Ok((count, prov))
}

pub fn hsp_of(pi: &MultipleWeil) -> Result<u64> {
    Ok(hsp_with_provenance(pi)?.0)
}

/// `H_sp(π)` through orders only (self-products keep their closed form).
pub fn hsp_by_lattices(pi: &MultipleWeil) -> Result<u64> {
    check_surface_class(pi)?;
    let f = pi.factors();
    if f.len() == 1 && f[0].1 == 2 {
        return Ok(self_product_count(&f[0].0)?.0);
    }
    hsp_by_orders(pi)
}

/// `Δ(p) = |Sp₂(F_p)| − H(√p)` by the closed formulas.
pub fn delta(p: u64) -> Result<u64> {
    prime_ctx(p)?;
    match p {
        2 => return Ok(15),
        3 => return Ok(20),
        5 => return Ok(9),
        _ => {}
    }
    let hk1 = cm(2 * p, 1)?;
    let value = if p % 4 == 1 {
        let w = rat(varpi(p as i64)? as i64);
        (w + rat(1)) * cm(p, 3)? + hk1 + cm(3 * p, 3)? + h_imag(p)?
    } else {
        let w = rat(varpi(3 * p as i64)? as i64);
        cm(p, 3)? + hk1 + (w + rat(1)) * cm(3 * p, 3)? + rat(4 - leg(2, p)) * h_imag(p)?
    };
    positive(&value, &format!("Δ({p})"))
}

/// `Δ(p)` as `Σ H_sp(π)` over the two-dimensional classes `π ≠ √p`, every
/// non-self-product term computed through orders.
pub fn delta_bottom_up(p: u64) -> Result<u64> {
    let ctx = prime_ctx(p)?;
    let mut total = 0;
    for pi in enumerate_multiple(ctx, 2)? {
        if pi.is_simple() && pi.factors()[0].0.is_real() {
            continue;
        }
        total += hsp_by_lattices(&pi)?;
    }
    Ok(total)
}

/// `Δ(p)` with the two paths compared for `p > 5`.
pub fn delta_verified(p: u64) -> Result<u64> {
    let top = delta(p)?;
    if p <= 5 {
        return Ok(top);
    }
    let bottom = delta_bottom_up(p)?;
    if top != bottom {
        return Err(Error::Mismatch(format!(
            "Δ({p}): formula {top}, orders {bottom}"
        )));
    }
    Ok(top)
}

/// `|Sp₂(F_q)| = H(√p) + Δ(p)` for odd `a`.
pub fn sp2_count(ctx: PrimePower) -> Result<u64> {
    if ctx.is_even() {
        return Err(Error::Unsupported(
            "superspecial surfaces over fields of even exponent are deferred; no count is available".into(),
        ));
    }
    Ok(h_sqrt_p(ctx.p())? + delta(ctx.p())?)
}

/// Eichler class number of the maximal order in the quaternion algebra ramified at `p, ∞`.
fn eichler_class_number(p: u64) -> BigRational {
    ratio(p as i64 - 1, 12) + ratio(1, 3) * rat(1 - leg(-3, p)) + ratio(1, 4) * rat(1 - leg(-4, p))
}

fn sp1_class_count(w: &WeilRep) -> Result<BigRational> {
    let ctx = w.ctx();
    let p = ctx.p();
    if ctx.is_even() {
        return Ok(match w.n() {
            1 => eichler_class_number(p),
            3 => rat(1 - leg(-3, p)),
            4 => rat(1 - leg(-4, p)),
            _ => return Err(invalid(format!("{w} is not one-dimensional"))),
        });
    }
    let w = transfer_to_prime_field(w)?;
    let h = match (p, w.n()) {
        (2, 4) => class_number_imaginary(-8)?,
        (_, 4) if p % 4 == 1 => class_number(-(p as i64))?,
        // Z[√-p] and the maximal order both contribute
        (_, 4) => class_number_imaginary(-4 * p as i64)? + class_number(-(p as i64))?,
        (2, 8) | (3, 12) => 1,
        _ => return Err(invalid(format!("{w} is not one-dimensional"))),
    };
    Ok(rat(h as i64))
}

/// Per-class supersingular elliptic curve counts over `F_q`.
pub fn sp1_per_class(ctx: PrimePower) -> Result<Vec<ClassCount>> {
    let prov = if ctx.is_even() || ctx.p() > 3 {
        Provenance::Formula
    } else {
        Provenance::Table
    };
    enumerate_simple(ctx, 1, None)?
        .into_iter()
        .map(|w| {
            let count = to_integer(&sp1_class_count(&w)?, &format!("count for {w}"))? as u64;
            Ok(ClassCount {
                weil: MultipleWeil::simple(w),
                count,
                provenance: prov,
            })
        })
        .collect()
}

/// `|Sp₁(F_q)|`, the number of supersingular elliptic curves over `F_q` up to isomorphism.
pub fn sp1_count(ctx: PrimePower) -> Result<u64> {
    let p = ctx.p();
    if ctx.is_even() {
        let value = ratio(p as i64 - 1, 6)
            + ratio(8, 3) * rat(1 - leg(-3, p))
            + ratio(3, 2) * rat(1 - leg(-4, p));
        return positive(&value, &format!("|Sp₁(F_{{{p}^{}}})|", ctx.a()));
    }
    Ok(match p {
        2 => 3,
        3 => 4,
        _ if p % 4 == 1 => class_number(-(p as i64))?,
        _ => (3 - leg(2, p)) as u64 * class_number(-(p as i64))?,
    })
}

fn transfer_multiple(pi: &MultipleWeil) -> Result<MultipleWeil> {
    let factors = pi
        .factors()
        .iter()
        .map(|(w, m)| Ok((transfer_to_prime_field(w)?, *m)))
        .collect::<Result<Vec<_>>>()?;
    MultipleWeil::new(factors)
}

/// Full census in dimension 1 or 2, with the per-class sum checked against
/// the closed total.
pub fn census(ctx: PrimePower, dim: u64) -> Result<CensusReport> {
    let (per_class, total) = match dim {
        1 => {
            let per = sp1_per_class(ctx)?;
            (per, sp1_count(ctx)?)
        }
        2 => {
            let total = sp2_count(ctx)?;
            let mut per = Vec::new();
            for pi in enumerate_multiple(ctx, 2)? {
                let base = transfer_multiple(&pi)?;
                let (count, provenance) = if base.is_simple() && base.factors()[0].0.is_real() {
                    let p = ctx.p();
                    (
                        h_sqrt_p(p)?,
                        if p <= 5 {
                            Provenance::Table
                        } else {
                            Provenance::Formula
                        },
                    )
                } else {
                    hsp_with_provenance(&base)?
                };
                per.push(ClassCount {
                    weil: pi,
                    count,
                    provenance,
                });
            }
            (per, total)
        }
        _ => {
            return Err(invalid(format!(
                "census is available in dimensions 1 and 2, not {dim}"
            )))
        }
    };
    let sum: u64 = per_class.iter().map(|c| c.count).sum();
    if sum != total {
        return Err(Error::Mismatch(format!(
            "per-class sum {sum} differs from total {total} over {ctx}"
        )));
    }
    let (mass, mass_ratio) = if dim == 2 && ctx.p() > 5 {
        let m = mass(ctx.p())?;
        let r = rat(total as i64) / &m;
        (Some(m), Some(r))
    } else {
        (None, None)
    };
    Ok(CensusReport {
        ctx,
        dim,
        per_class,
        total,
        mass,
        mass_ratio,
    })
}

/// `|Sp₁(F_q)|` for even `a`, summed class by class.
pub fn sp1_even_by_classes(ctx: PrimePower) -> Result<BigRational> {
    if !ctx.is_even() {
        return Err(invalid("even exponent expected"));
    }
    let mut total = BigRational::zero();
    for w in enumerate_simple(ctx, 1, None)? {
        total += sp1_class_count(&w)?;
    }
    Ok(total)
}
