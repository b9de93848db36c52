//! Types `(n̄, m̄)` of finite-order conjugacy classes in `GL_d(O)` for fields of
//! even exponent, and the multiple Weil numbers they index.

use serde::Serialize;

use crate::dimension::dim_of;
use crate::error::invalid;
use crate::weil::{canonicalize, MultipleWeil, PrimePower, Sign};
use crate::Result;

/// Largest `n` considered; enough for `d ≤ 4`.
pub const TYPE_SEARCH_BOUND: u64 = 120;

/// A `d`-admissible pair: `Σ m_i·d(n_i) = d` with `n_1 < ⋯ < n_r`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AdmissibleType {
    pub n_bar: Vec<u64>,
    pub m_bar: Vec<u32>,
    pub ctx: PrimePower,
}

impl AdmissibleType {
    pub fn new(n_bar: Vec<u64>, m_bar: Vec<u32>, ctx: PrimePower) -> Result<Self> {
        if !ctx.is_even() {
            return Err(invalid("types are defined for even exponent"));
        }
        if n_bar.len() != m_bar.len() || n_bar.is_empty() {
            return Err(invalid("n̄ and m̄ must be non-empty and of equal length"));
        }
        if n_bar[0] == 0 || n_bar.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("n̄ must be strictly increasing and positive"));
        }
        if m_bar.contains(&0) {
            return Err(invalid("multiplicities must be positive"));
        }
        Ok(Self { n_bar, m_bar, ctx })
    }

    /// `Σ m_i·d(n_i)`.
    pub fn dimension(&self) -> u64 {
        self.n_bar
            .iter()
            .zip(&self.m_bar)
            .map(|(&n, &m)| m as u64 * d_of_n_even(n, self.ctx))
            .sum()
    }
}

/// `d(n)`, the dimension attached to `(-p)^{a/2}·ζ_n`.
pub fn d_of_n_even(n: u64, ctx: PrimePower) -> u64 {
    assert!(ctx.is_even(), "even exponent expected");
    match n {
        1 | 2 => 1,
        _ if n % 4 == 2 => d_of_n_even(n / 2, ctx),
        _ => dim_of(&canonicalize(Sign::Plus, n, ctx)).dim,
    }
}

/// All `d`-admissible types over `F_q`, sorted.
pub fn admissible_types(d: u64, ctx: PrimePower) -> Result<Vec<AdmissibleType>> {
    if !ctx.is_even() {
        return Err(invalid("types are defined for even exponent"));
    }
    if d == 0 {
        return Err(invalid("dimension must be positive"));
    }
    let parts: Vec<(u64, u64)> = (1..=TYPE_SEARCH_BOUND)
        .map(|n| (n, d_of_n_even(n, ctx)))
        .filter(|&(_, k)| k <= d)
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    extend(&parts, 0, d, &mut chosen, &mut |c: &[(u64, u32)]| {
        out.push(AdmissibleType {
            n_bar: c.iter().map(|x| x.0).collect(),
            m_bar: c.iter().map(|x| x.1).collect(),
            ctx,
        })
    });
    out.sort();
    Ok(out)
}

fn extend(
    parts: &[(u64, u64)],
    start: usize,
    remaining: u64,
    chosen: &mut Vec<(u64, u32)>,
    emit: &mut impl FnMut(&[(u64, u32)]),
) {
    if remaining == 0 {
        emit(chosen);
        return;
    }
    for i in start..parts.len() {
        let (n, k) = parts[i];
        let mut m = 1;
        while m * k <= remaining {
            chosen.push((n, m as u32));
            extend(parts, i + 1, remaining - m * k, chosen, emit);
            chosen.pop();
            m += 1;
        }
    }
}

/// The class `∏ ((-p)^{a/2}·ζ_{n_i})^{m_i}`.
pub fn multiple_weil_of_type(t: &AdmissibleType) -> Result<MultipleWeil> {
    let sign = if t.ctx.a() % 4 == 2 {
        Sign::Minus
    } else {
        Sign::Plus
    };
    MultipleWeil::new(
        t.n_bar
            .iter()
            .zip(&t.m_bar)
            .map(|(&n, &m)| (canonicalize(sign, n, t.ctx), m)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::enumerate_multiple;

    fn pp(p: u64, a: u32) -> PrimePower {
        PrimePower::new(p, a).unwrap()
    }

    #[test]
    fn dimension_of_index() {
        assert_eq!(d_of_n_even(2, pp(7, 2)), 1);
        assert_eq!(d_of_n_even(6, pp(7, 2)), 2);
        assert_eq!(d_of_n_even(8, pp(7, 2)), 2);
    }

    #[test]
    fn small_type_lists() {
        let n_bars = |d, p| -> Vec<(Vec<u64>, Vec<u32>)> {
            admissible_types(d, pp(p, 2))
                .unwrap()
                .into_iter()
                .map(|t| (t.n_bar, t.m_bar))
                .collect()
        };
        assert_eq!(
            n_bars(1, 7),
            vec![(vec![1], vec![1]), (vec![2], vec![1]), (vec![4], vec![1])]
        );
        assert_eq!(n_bars(1, 13), vec![(vec![1], vec![1]), (vec![2], vec![1])]);
        assert_eq!(n_bars(2, 7).len(), 12);
    }

    #[test]
    fn type_to_class() {
        let ctx = pp(7, 2);
        let t = AdmissibleType::new(vec![3, 6], vec![1, 1], ctx).unwrap();
        let pi = multiple_weil_of_type(&t).unwrap();
        let f = pi.factors();
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|(w, _)| w.n() == 3));
        assert_ne!(f[0].0.sign(), f[1].0.sign());
        assert!(AdmissibleType::new(vec![3, 3], vec![1, 1], ctx).is_err());
        assert!(AdmissibleType::new(vec![3], vec![1], pp(7, 1)).is_err());
    }

    #[test]
    fn bijection_with_multiple_weil_numbers() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for a in [2u32, 4] {
                let ctx = pp(p, a);
                for d in 1..=3 {
                    let mut from_types: Vec<MultipleWeil> = admissible_types(d, ctx)
                        .unwrap()
                        .iter()
                        .map(|t| {
                            assert_eq!(t.dimension(), d);
                            multiple_weil_of_type(t).unwrap()
                        })
                        .collect();
                    from_types.sort();
                    assert_eq!(
                        from_types,
                        enumerate_multiple(ctx, d).unwrap(),
                        "q={p}^{a}, d={d}"
                    );
                }
            }
        }
    }
}
