//! Quadratic fields: Kronecker symbols, class numbers by counting reduced
//! binary quadratic forms, fundamental units by continued fractions, the unit
//! index `ϖ_m`, and `ζ_F(-1)` through Siegel's finite sum.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{divisor_sum, gcd, is_squarefree, isqrt};
use crate::error::invalid;
use crate::{Error, Result};

/// Kronecker symbol `(a/n)`.
pub fn kronecker(a: i64, n: i64) -> i32 {
    const TAB: [i32; 8] = [0, 1, 0, -1, 0, -1, 0, 1];
    let (mut a, mut b) = (a, n);
    if b == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let mut v = 0;
    while b % 2 == 0 {
        v += 1;
        b /= 2;
    }
    let mut k = if v % 2 == 0 { 1 } else { TAB[(a & 7) as usize] };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    loop {
        if a == 0 {
            return if b > 1 { 0 } else { k };
        }
        let mut v = 0;
        while a % 2 == 0 {
            v += 1;
            a /= 2;
        }
        if v % 2 == 1 {
            k *= TAB[(b & 7) as usize];
        }
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}

/// Discriminant of `Q(√m)` for square-free `m`.
pub fn field_disc(m: i64) -> i64 {
    if m.rem_euclid(4) == 1 {
        m
    } else {
        4 * m
    }
}

fn check_squarefree(m: i64) -> Result<()> {
    if m == 0 || m == 1 || !is_squarefree(m) {
        return Err(invalid(format!(
            "{m} is not a square-free integer other than 0, 1"
        )));
    }
    Ok(())
}

/// The binary quadratic form `a·x² + b·xy + c·y²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Bqf {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl Bqf {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a, self.b), self.c) == 1
    }
}

impl fmt::Display for Bqf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// Reduced primitive positive definite forms of discriminant `disc < 0`:
/// `|b| ≤ a ≤ c`, with `b ≥ 0` when `|b| = a` or `a = c`.
pub fn reduced_forms_imaginary(disc: i64) -> Result<Vec<Bqf>> {
    if disc >= 0 || disc.rem_euclid(4) > 1 {
        return Err(invalid(format!("{disc} is not a negative discriminant")));
    }
    let mut out = Vec::new();
    let mut b = disc.rem_euclid(2);
    while 3 * b * b <= -disc {
        let n = (b * b - disc) / 4;
        let mut a = b.max(1);
        while a * a <= n {
            if n % a == 0 {
                let c = n / a;
                for bb in [b, -b] {
                    let f = Bqf::new(a, bb, c);
                    let boundary = b == 0 || a == b || a == c;
                    if (bb >= 0 || !boundary) && f.is_primitive() && !out.contains(&f) {
                        out.push(f);
                    }
                }
            }
            a += 1;
        }
        b += 2;
    }
    out.sort();
    Ok(out)
}

/// Class number of the order of discriminant `disc < 0` (maximal or not).
pub fn class_number_imaginary(disc: i64) -> Result<u64> {
    Ok(reduced_forms_imaginary(disc)?.len() as u64)
}

/// Number of roots of unity in `Q(√m)`.
pub fn roots_of_unity(m: i64) -> u64 {
    match m {
        -1 => 4,
        -3 => 6,
        _ => 2,
    }
}

/// The fundamental unit `ε = (x + y√m)/2 > 1` of the maximal order of `Q(√m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub m: i64,
    pub x: BigInt,
    pub y: BigInt,
    pub norm: i8,
}

impl FundamentalUnit {
    /// Whether `ε ∈ Z[√m]`.
    pub fn in_z_sqrt_m(&self) -> bool {
        self.x.is_even() && self.y.is_even()
    }

    /// Coordinates `(u, v)` with `ε = u + v·ω`, where `ω = (1+√m)/2` if
    /// `m ≡ 1 (mod 4)` and `ω = √m` otherwise.
    pub fn omega_coords(&self) -> (BigInt, BigInt) {
        if self.m.rem_euclid(4) == 1 {
            let v = self.y.clone();
            let u = (&self.x - &self.y) / 2;
            (u, v)
        } else {
            (&self.x / 2, &self.y / 2)
        }
    }

    /// Rational coordinates `(x/2, y/2)` over `{1, √m}`.
    pub fn coords(&self) -> (BigRational, BigRational) {
        let two = BigInt::from(2);
        (
            BigRational::new(self.x.clone(), two.clone()),
            BigRational::new(self.y.clone(), two),
        )
    }

    pub fn log(&self) -> f64 {
        let m = self.m as f64;
        let (x, y) = (big_to_f64(&self.x), big_to_f64(&self.y));
        if x.is_finite() && y.is_finite() && x < 1e150 {
            ((x + y * m.sqrt()) / 2.0).ln()
        } else {
            // ε ≈ x for large units, since ε' = ±1/ε is tiny
            let bits = self.x.bits();
            let shift = bits.saturating_sub(64);
            big_to_f64(&(&self.x >> shift)).ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

fn big_to_f64(x: &BigInt) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::INFINITY)
}

/// Fundamental unit of `Q(√m)`, `m > 1` square-free, from the period of the
/// continued fraction of the reduced number `ω = (P₀ + √m)/Q₀`.
pub fn fundamental_unit(m: i64) -> Result<FundamentalUnit> {
    check_squarefree(m)?;
    if m < 2 {
        return Err(invalid("fundamental units need a real quadratic field"));
    }
    let s = isqrt(m as u64) as i64;
    let (p0, q0) = if m % 4 == 1 {
        (if s % 2 == 1 { s } else { s - 1 }, 2i64)
    } else {
        (s, 1i64)
    };
    let (mut p, mut q) = (p0, q0);
    // q_{k-2}, q_{k-1} of the convergent denominators
    let (mut b_prev, mut b_cur) = (BigInt::one(), BigInt::zero());
    let mut len = 0u64;
    loop {
        let a = (p + s) / q;
        let b_next = BigInt::from(a) * &b_cur + &b_prev;
        b_prev = b_cur;
        b_cur = b_next;
        len += 1;
        p = a * q - p;
        q = (m - p * p) / q;
        if p == p0 && q == q0 {
            break;
        }
    }
    // ε = B_{l-1}·ω + B_{l-2}
    let (x, y) = if q0 == 2 {
        (&b_cur * p0 + &b_prev * 2, b_cur)
    } else {
        ((&b_cur * p0 + &b_prev) * 2, b_cur * 2)
    };
    let norm4: BigInt = &x * &x - &y * &y * m;
    let norm = if norm4 == BigInt::from(4) {
        1
    } else if norm4 == BigInt::from(-4) {
        -1
    } else {
        return Err(Error::Integrality(format!(
            "unit of Q(√{m}) has norm {norm4}/4"
        )));
    };
    debug_assert_eq!(norm, if len % 2 == 0 { 1 } else { -1 });
    Ok(FundamentalUnit { m, x, y, norm })
}

/// Reduced indefinite primitive forms of discriminant `disc > 0`:
/// `|√D - 2|a|| < b < √D`.
pub fn reduced_forms_indefinite(disc: i64) -> Vec<Bqf> {
    let s = isqrt(disc as u64) as i64;
    let mut out = Vec::new();
    let mut b = if disc % 2 == 0 { 2 } else { 1 };
    while b <= s {
        let n = (disc - b * b) / 4;
        let mut d = 1;
        while d * d <= n {
            if n % d == 0 {
                for &a_abs in &[d, n / d] {
                    let lo = 2 * a_abs - b;
                    let hi = 2 * a_abs + b;
                    if (lo < 0 || lo * lo < disc) && hi * hi > disc {
                        for sgn in [1, -1] {
                            let f = Bqf::new(sgn * a_abs, b, -sgn * n / a_abs);
                            if f.is_primitive() && !out.contains(&f) {
                                out.push(f);
                            }
                        }
                    }
                }
            }
            d += 1;
        }
        b += 2;
    }
    out.sort();
    out
}

/// One step of the reduction operator `ρ` on reduced indefinite forms.
pub fn rho(f: Bqf, disc: i64) -> Bqf {
    let s = isqrt(disc as u64) as i64;
    let c_abs = f.c.abs();
    let m2 = 2 * c_abs;
    let r = if c_abs * c_abs < disc {
        s - (s + f.b).rem_euclid(m2)
    } else {
        let r0 = (-f.b).rem_euclid(m2);
        if r0 > c_abs {
            r0 - m2
        } else {
            r0
        }
    };
    Bqf::new(f.c, r, (r * r - disc) / (4 * f.c))
}

/// Narrow class number of discriminant `disc > 0`: the number of `ρ`-cycles.
pub fn narrow_class_number(disc: i64) -> u64 {
    let forms = reduced_forms_indefinite(disc);
    let mut seen: HashSet<Bqf> = HashSet::new();
    let mut cycles = 0;
    for f in forms {
        if seen.contains(&f) {
            continue;
        }
        cycles += 1;
        let mut g = f;
        loop {
            seen.insert(g);
            g = rho(g, disc);
            if g == f {
                break;
            }
            assert!(seen.len() < 1 << 24, "ρ-cycle did not close");
        }
    }
    cycles
}

/// Class number of `Q(√m)` for square-free `m > 1`.
pub fn class_number_real(m: i64) -> Result<u64> {
    let unit = fundamental_unit(m)?;
    let hp = narrow_class_number(field_disc(m));
    if unit.norm == 1 {
        if hp % 2 != 0 {
            return Err(Error::Integrality(format!(
                "narrow class number {hp} of Q(√{m}) is odd although N(ε) = +1"
            )));
        }
        Ok(hp / 2)
    } else {
        Ok(hp)
    }
}

/// Class number of `Q(√m)` for any square-free `m ≠ 0, 1`.
pub fn class_number(m: i64) -> Result<u64> {
    check_squarefree(m)?;
    if m < 0 {
        class_number_imaginary(field_disc(m))
    } else {
        class_number_real(m)
    }
}

/// `ϖ_m = 3 / [O^× : Z[√m]^×]` for `m ≡ 1 (mod 4)`.
pub fn varpi(m: i64) -> Result<u64> {
    if m < 2 || m % 4 != 1 {
        return Err(invalid(format!("ϖ_m needs m ≡ 1 (mod 4), got {m}")));
    }
    let e = fundamental_unit(m)?;
    if e.in_z_sqrt_m() {
        return Ok(3);
    }
    // ε³ = (x³ + 3xy²m + (3x²y + y³m)√m)/8
    let (x, y) = (&e.x, &e.y);
    let c0: BigInt = x * x * x + x * y * y * (3 * m);
    let c1: BigInt = x * x * y * 3 + y * y * y * m;
    let eight = BigInt::from(8);
    if !(&c0 % &eight).is_zero() || !(&c1 % &eight).is_zero() {
        return Err(Error::Integrality(format!(
            "ε³ ∉ Z[√{m}], so the unit index of Z[√{m}] is not 3"
        )));
    }
    Ok(1)
}

/// `ζ_F(-1)` for `F = Q(√m)` by Siegel's formula
/// `(1/60)·Σ a` over `b² + 4ac = δ_F` with `a, c > 0`.
pub fn zeta_minus_one(m: i64) -> Result<BigRational> {
    check_squarefree(m)?;
    if m < 2 {
        return Err(invalid("ζ_F(-1) is only defined here for real quadratic F"));
    }
    let d = field_disc(m);
    let s = isqrt(d as u64) as i64;
    let mut total: u64 = 0;
    for b in -s..=s {
        if (b - d).rem_euclid(2) == 0 && b * b < d {
            total += divisor_sum(((d - b * b) / 4) as u64);
        }
    }
    Ok(BigRational::new(BigInt::from(total), BigInt::from(60)))
}

/// Arithmetic data of a quadratic field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadData {
    pub m: i64,
    pub disc: i64,
    pub h: u64,
    pub fund_unit: Option<FundamentalUnit>,
    pub unit_norm: Option<i8>,
    pub w: u64,
}

pub fn quad_data(m: i64) -> Result<QuadData> {
    check_squarefree(m)?;
    let disc = field_disc(m);
    if m < 0 {
        Ok(QuadData {
            m,
            disc,
            h: class_number_imaginary(disc)?,
            fund_unit: None,
            unit_norm: None,
            w: roots_of_unity(m),
        })
    } else {
        let unit = fundamental_unit(m)?;
        Ok(QuadData {
            m,
            disc,
            h: class_number_real(m)?,
            unit_norm: Some(unit.norm),
            fund_unit: Some(unit),
            w: 2,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(2, 7), 1);
        assert_eq!(kronecker(-4, 7), -1);
        assert_eq!(kronecker(5, 1), 1);
        assert_eq!(kronecker(-3, 2), -1);
        assert_eq!(kronecker(-4, 2), 0);
        assert_eq!(kronecker(2, 3), -1);
        assert_eq!(kronecker(-1, -1), -1);
    }

    #[test]
    fn imaginary_class_numbers() {
        assert_eq!(class_number_imaginary(-7).unwrap(), 1);
        assert_eq!(class_number_imaginary(-23).unwrap(), 3);
        assert_eq!(class_number_imaginary(-4).unwrap(), 1);
        assert_eq!(class_number_imaginary(-12).unwrap(), 1);
        assert_eq!(class_number_imaginary(-56).unwrap(), 4);
        assert_eq!(class_number_imaginary(-20).unwrap(), 2);
        assert_eq!(class_number_imaginary(-163).unwrap(), 1);
        assert!(class_number_imaginary(-5).is_err());
    }

    #[test]
    fn units() {
        let e = fundamental_unit(2).unwrap();
        assert_eq!((e.x.clone(), e.y.clone(), e.norm), (2.into(), 2.into(), -1));
        assert!(e.in_z_sqrt_m());
        let e = fundamental_unit(5).unwrap();
        assert_eq!((e.x.clone(), e.y.clone(), e.norm), (1.into(), 1.into(), -1));
        assert!(!e.in_z_sqrt_m());
        let e = fundamental_unit(21).unwrap();
        assert_eq!((e.x.clone(), e.y.clone(), e.norm), (5.into(), 1.into(), 1));
        let e = fundamental_unit(3).unwrap();
        assert_eq!((e.x, e.y, e.norm), (4.into(), 2.into(), 1));
        let e = fundamental_unit(94).unwrap();
        assert_eq!((e.x, e.y), (4286590.into(), 442128.into()));
    }

    #[test]
    fn real_class_numbers() {
        assert_eq!(class_number_real(5).unwrap(), 1);
        assert_eq!(class_number_real(10).unwrap(), 2);
        assert_eq!(class_number_real(2).unwrap(), 1);
        assert_eq!(class_number_real(79).unwrap(), 3);
        assert_eq!(class_number_real(229).unwrap(), 3);
        assert_eq!(class_number_real(15).unwrap(), 2);
    }

    #[test]
    fn varpi_values() {
        assert_eq!(varpi(17).unwrap(), 3);
        assert_eq!(varpi(5).unwrap(), 1);
        assert_eq!(varpi(21).unwrap(), 1);
        assert_eq!(varpi(13).unwrap(), 1);
        assert!(varpi(7).is_err());
    }

    #[test]
    fn siegel_sums() {
        assert_eq!(zeta_minus_one(5).unwrap(), ratio(1, 30));
        assert_eq!(zeta_minus_one(2).unwrap(), ratio(1, 12));
        assert_eq!(zeta_minus_one(13).unwrap(), ratio(1, 6));
        assert_eq!(zeta_minus_one(7).unwrap(), ratio(2, 3));
    }

    #[test]
    fn quad_data_fields() {
        let q = quad_data(-3).unwrap();
        assert_eq!((q.disc, q.h, q.w), (-3, 1, 6));
        let q = quad_data(-1).unwrap();
        assert_eq!((q.disc, q.w), (-4, 4));
        let q = quad_data(6).unwrap();
        assert_eq!((q.disc, q.h, q.unit_norm), (24, 1, Some(1)));
    }
}
