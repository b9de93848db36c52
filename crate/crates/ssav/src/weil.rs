//! Supersingular Weil q-numbers `±√q·ζ_n` in canonical form, and the rule
//! deciding when `√q·ζ_n` and `-√q·ζ_n` are Galois conjugate.
//!
//! Every supersingular Weil q-number is conjugate to one of `±√q·ζ_n` with
//! `n ≢ 2 (mod 4)`. The two signs give distinct classes exactly when `n` is
//! *critical* at `q`: `δ_q | n` and `2δ_q ∤ n`, where `δ_q` is the conductor of
//! `Q(√q)`. For even exponents `δ_q = 1`, so every odd `n` is critical; this is
//! consistent with `√q·ζ_n ~ -√q·ζ_n ⟺ 4 | n` in that case.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::arith::{inv_mod, is_prime, pow_mod};
use crate::error::invalid;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PrimePower {
    p: u64,
    a: u32,
}

impl PrimePower {
    pub fn new(p: u64, a: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(invalid(format!("{p} is not prime")));
        }
        if a == 0 {
            return Err(invalid("exponent must be at least 1"));
        }
        Ok(Self { p, a })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn is_even(&self) -> bool {
        self.a % 2 == 0
    }

    /// `q = p^a`, if it fits in 64 bits.
    pub fn q(&self) -> Option<u64> {
        self.p.checked_pow(self.a)
    }

    /// The same prime with exponent one: the field the odd-exponent counts reduce to.
    pub fn prime_field(&self) -> Self {
        Self { p: self.p, a: 1 }
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.a)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(s: i64) -> Self {
        if s < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// A canonical supersingular Weil number `sign·√q·ζ_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeilRep {
    sign: Sign,
    n: u64,
    ctx: PrimePower,
}

impl WeilRep {
    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn ctx(&self) -> PrimePower {
        self.ctx
    }

    pub fn negated(&self) -> WeilRep {
        canonicalize(self.sign.flip(), self.n, self.ctx)
    }

    /// `true` for the real classes `±√q`.
    pub fn is_real(&self) -> bool {
        self.n == 1
    }
}

impl Ord for WeilRep {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.sign, self.ctx).cmp(&(other.n, other.sign, other.ctx))
    }
}

impl PartialOrd for WeilRep {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for WeilRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}sqrt(q)*zeta_{}", self.sign.symbol(), self.n)
    }
}

impl Serialize for WeilRep {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The conductor of `Q(√q)`.
pub fn delta_q(ctx: PrimePower) -> u64 {
    if ctx.is_even() {
        1
    } else if ctx.p % 4 == 1 {
        ctx.p
    } else {
        4 * ctx.p
    }
}

pub fn is_critical(n: u64, ctx: PrimePower) -> bool {
    let d = delta_q(ctx);
    n % d == 0 && n % (2 * d) != 0
}

/// Whether `√q·ζ_n` and `-√q·ζ_n` are Galois conjugate.
pub fn are_conjugate_pm(n: u64, ctx: PrimePower) -> Result<bool> {
    if n == 0 || n % 4 == 2 {
        return Err(invalid(format!(
            "n = {n} is not in normal form (n ≢ 2 mod 4)"
        )));
    }
    Ok(!is_critical(n, ctx))
}

/// The case-by-case form of the conjugacy rule, kept as a cross-check on
/// [`are_conjugate_pm`].
pub fn are_conjugate_pm_by_cases(n: u64, ctx: PrimePower) -> bool {
    let p = ctx.p;
    if ctx.is_even() {
        n % 4 == 0
    } else if p == 2 {
        n % 8 != 0 || n % 16 == 0
    } else if p % 4 == 1 {
        n % p != 0 || n % (4 * p) == 0
    } else {
        n % (4 * p) != 0 || n % (8 * p) == 0
    }
}

/// Legendre symbol `(u/p)` for odd prime `p` by Euler's criterion.
fn legendre(u: u64, p: u64) -> i64 {
    match pow_mod(u % p, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Brings `sign·√q·ζ_n` to canonical form. Inputs with `n ≡ 2 (mod 4)` are
/// folded onto the odd index `n/2`.
pub fn canonicalize(sign: Sign, n: u64, ctx: PrimePower) -> WeilRep {
    assert!(n >= 1, "n must be positive");
    let (mut sign, n) = if n % 4 == 2 {
        // ζ_{2k} = -ζ_k^u with u = (k+1)/2, and σ: ζ_k^u ↦ ζ_k sends √q to χ(u)·√q,
        // where χ is the quadratic character attached to √q when √q ∈ Q(ζ_k).
        let k = n / 2;
        let u = ((k + 1) / 2) % k.max(1);
        let chi = if !ctx.is_even() && ctx.p % 4 == 1 && k % ctx.p == 0 {
            let u_inv = inv_mod(u as i64, k as i64).expect("u is a unit mod k") as u64;
            legendre(u_inv, ctx.p)
        } else {
            1
        };
        (Sign::from_i64(-sign.as_i64() * chi), k)
    } else {
        (sign, n)
    };
    if sign == Sign::Minus && !is_critical(n, ctx) {
        sign = Sign::Plus;
    }
    WeilRep { sign, n, ctx }
}

/// All canonical supersingular Weil q-numbers with `n ≤ n_max`, sorted.
pub fn enumerate_wss(ctx: PrimePower, n_max: u64) -> Vec<WeilRep> {
    let mut out = Vec::new();
    for n in (1..=n_max).filter(|n| n % 4 != 2) {
        out.push(WeilRep {
            sign: Sign::Plus,
            n,
            ctx,
        });
        if is_critical(n, ctx) {
            out.push(WeilRep {
                sign: Sign::Minus,
                n,
                ctx,
            });
        }
    }
    out
}

/// A formal product `π₁^{m₁} × ⋯ × π_r^{m_r}` of pairwise non-conjugate Weil numbers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultipleWeil {
    factors: Vec<(WeilRep, u32)>,
}

impl MultipleWeil {
    /// Canonicalizes, merges equal factors and sorts.
    pub fn new(factors: impl IntoIterator<Item = (WeilRep, u32)>) -> Result<Self> {
        let mut merged: Vec<(WeilRep, u32)> = Vec::new();
        let mut ctx = None;
        for (w, m) in factors {
            if m == 0 {
                return Err(invalid("multiplicities must be positive"));
            }
            let w = canonicalize(w.sign, w.n, w.ctx);
            if *ctx.get_or_insert(w.ctx) != w.ctx {
                return Err(invalid("factors over different fields"));
            }
            match merged.iter_mut().find(|(v, _)| *v == w) {
                Some(entry) => entry.1 += m,
                None => merged.push((w, m)),
            }
        }
        if merged.is_empty() {
            return Err(invalid("empty product"));
        }
        merged.sort();
        Ok(Self { factors: merged })
    }

    pub fn simple(w: WeilRep) -> Self {
        Self {
            factors: vec![(w, 1)],
        }
    }

    pub fn factors(&self) -> &[(WeilRep, u32)] {
        &self.factors
    }

    pub fn ctx(&self) -> PrimePower {
        self.factors[0].0.ctx
    }

    pub fn is_simple(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

impl fmt::Display for MultipleWeil {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (w, m)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            if *m == 1 {
                write!(f, "{w}")?;
            } else {
                write!(f, "({w})^{m}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for MultipleWeil {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parity transfer: over `F_{p^a}` with `a` odd, `π ↦ (-p)^{(1-a)/2}·π` matches the
/// classes with those over `F_p`. Only the sign changes, by `(-1)^{(a-1)/2}`.
pub fn transfer_to_prime_field(w: &WeilRep) -> Result<WeilRep> {
    if w.ctx.is_even() {
        return Err(invalid("parity transfer to F_p needs an odd exponent"));
    }
    let flip = (w.ctx.a - 1) / 2 % 2 == 1;
    let sign = if flip { w.sign.flip() } else { w.sign };
    Ok(canonicalize(sign, w.n, w.ctx.prime_field()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: u64, a: u32) -> PrimePower {
        PrimePower::new(p, a).unwrap()
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta_q(pp(5, 3)), 5);
        assert_eq!(delta_q(pp(7, 1)), 28);
        assert_eq!(delta_q(pp(7, 2)), 1);
        assert_eq!(delta_q(pp(2, 1)), 8);
    }

    #[test]
    fn criticality_examples() {
        assert!(is_critical(8, pp(2, 1)));
        assert!(!is_critical(16, pp(2, 1)));
        assert!(is_critical(5, pp(5, 1)));
        assert!(is_critical(3, pp(7, 2)));
        assert!(are_conjugate_pm(20, pp(5, 1)).unwrap());
        assert!(!are_conjugate_pm(12, pp(3, 1)).unwrap());
        assert!(are_conjugate_pm(4, pp(11, 2)).unwrap());
        assert!(are_conjugate_pm(6, pp(11, 2)).is_err());
    }

    #[test]
    fn canonical_examples() {
        let c = canonicalize(Sign::Minus, 16, pp(2, 1));
        assert_eq!((c.sign(), c.n()), (Sign::Plus, 16));
        let c = canonicalize(Sign::Minus, 8, pp(2, 1));
        assert_eq!((c.sign(), c.n()), (Sign::Minus, 8));
        let c = canonicalize(Sign::Plus, 7, pp(13, 2));
        assert_eq!((c.sign(), c.n()), (Sign::Plus, 7));
        // √q·ζ_2 = -√q
        let c = canonicalize(Sign::Plus, 2, pp(7, 2));
        assert_eq!((c.sign(), c.n()), (Sign::Minus, 1));
        // -√q·ζ_6 = √q·ζ_3^2 ~ √q·ζ_3 for even exponent
        let c = canonicalize(Sign::Minus, 6, pp(7, 2));
        assert_eq!((c.sign(), c.n()), (Sign::Plus, 3));
    }

    #[test]
    fn enumeration_examples() {
        let show = |v: Vec<WeilRep>| -> Vec<(i64, u64)> {
            v.iter().map(|w| (w.sign().as_i64(), w.n())).collect()
        };
        assert_eq!(
            show(enumerate_wss(pp(5, 1), 5)),
            vec![(1, 1), (1, 3), (1, 4), (1, 5), (-1, 5)]
        );
        assert_eq!(
            show(enumerate_wss(pp(7, 2), 4)),
            vec![(1, 1), (-1, 1), (1, 3), (-1, 3), (1, 4)]
        );
        assert_eq!(show(enumerate_wss(pp(2, 1), 1)), vec![(1, 1)]);
    }

    #[test]
    fn case_rule_matches_criticality() {
        for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
            for a in 1..=4 {
                let ctx = pp(p, a);
                for n in (1..=200).filter(|n| n % 4 != 2) {
                    assert_eq!(
                        are_conjugate_pm(n, ctx).unwrap(),
                        are_conjugate_pm_by_cases(n, ctx),
                        "p={p} a={a} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn multiple_weil_merges_and_sorts() {
        let ctx = pp(2, 1);
        let a = canonicalize(Sign::Minus, 8, ctx);
        let b = canonicalize(Sign::Plus, 4, ctx);
        let m = MultipleWeil::new([(a, 1), (b, 1), (a, 1)]).unwrap();
        assert_eq!(m.factors(), &[(b, 1), (a, 2)]);
        assert_eq!(m.to_string(), "+sqrt(q)*zeta_4 x (-sqrt(q)*zeta_8)^2");
    }

    #[test]
    fn transfer_flips_sign_for_a_3() {
        let w = canonicalize(Sign::Minus, 8, pp(2, 3));
        let t = transfer_to_prime_field(&w).unwrap();
        assert_eq!((t.sign(), t.n(), t.ctx().a()), (Sign::Plus, 8, 1));
        let w5 = canonicalize(Sign::Minus, 8, pp(2, 5));
        assert_eq!(transfer_to_prime_field(&w5).unwrap().sign(), Sign::Minus);
    }
}
