//! Biquadratic CM fields `K_{m,j} = Q(√m, √-j)`: roots of unity, the Hasse
//! unit index `Q`, and the class number from the relation
//! `h(K) = Q·w_K·h₁·h₂·h₃ / (w₁·w₂)`.
//!
//! Elements are held exactly as `x + y·√-j` with `x, y` in the real subfield
//! `k⁺ = Q(√m)`; the fixed complex embedding takes `√m > 0` and `√-j = i√j`.

use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{gcd, is_squarefree, rat, rational_sqrt};
use crate::error::invalid;
use crate::quadratics::{
    class_number_imaginary, class_number_real, field_disc, fundamental_unit, roots_of_unity,
};
use crate::{Error, Result};

/// An element `a + b·√m` of `Q(√m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadNum {
    pub m: i64,
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadNum {
    pub fn new(m: i64, a: BigRational, b: BigRational) -> Self {
        Self { m, a, b }
    }

    pub fn from_rational(m: i64, a: BigRational) -> Self {
        Self::new(m, a, BigRational::zero())
    }

    pub fn zero(m: i64) -> Self {
        Self::from_rational(m, BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.m, self.a.clone(), -self.b.clone())
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * rat(self.m)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.m, &self.a * c, &self.b * c)
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(self.conj().scale(&n.recip()))
    }

    /// An exact square root in `Q(√m)`, if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let m = self.m;
        if self.b.is_zero() {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(Self::from_rational(m, r));
            }
            if let Some(r) = rational_sqrt(&(&self.a / rat(m))) {
                return Some(Self::new(m, BigRational::zero(), r));
            }
            return None;
        }
        let n = rational_sqrt(&self.norm())?;
        let two = rat(2);
        for c in [n.clone(), -n] {
            let Some(alpha) = rational_sqrt(&((&self.a + &c) / &two)) else {
                continue;
            };
            if alpha.is_zero() {
                continue;
            }
            let beta = &self.b / (&two * &alpha);
            let cand = Self::new(m, alpha, beta);
            if &(&cand * &cand) == self {
                return Some(cand);
            }
        }
        None
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN)
            + self.b.to_f64().unwrap_or(f64::NAN) * (self.m as f64).sqrt()
    }
}

impl<'a> Add<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn add(self, o: &QuadNum) -> QuadNum {
        QuadNum::new(self.m, &self.a + &o.a, &self.b + &o.b)
    }
}

impl<'a> Sub<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn sub(self, o: &QuadNum) -> QuadNum {
        QuadNum::new(self.m, &self.a - &o.a, &self.b - &o.b)
    }
}

impl<'a> Mul<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn mul(self, o: &QuadNum) -> QuadNum {
        debug_assert_eq!(self.m, o.m);
        QuadNum::new(
            self.m,
            &self.a * &o.a + &self.b * &o.b * rat(self.m),
            &self.a * &o.b + &self.b * &o.a,
        )
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum::new(self.m, -self.a.clone(), -self.b.clone())
    }
}

/// An element `x + y·√-j` of `K_{m,j}` with `x, y ∈ Q(√m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CmNum {
    pub j: i64,
    pub x: QuadNum,
    pub y: QuadNum,
}

impl CmNum {
    pub fn new(j: i64, x: QuadNum, y: QuadNum) -> Self {
        Self { j, x, y }
    }

    pub fn from_real(j: i64, x: QuadNum) -> Self {
        let m = x.m;
        Self::new(j, x, QuadNum::zero(m))
    }

    pub fn one(m: i64, j: i64) -> Self {
        Self::from_real(j, QuadNum::from_rational(m, BigRational::one()))
    }

    pub fn m(&self) -> i64 {
        self.x.m
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    fn delta(&self) -> QuadNum {
        QuadNum::from_rational(self.m(), rat(-self.j))
    }

    /// An exact square root in `K`, if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let (m, j) = (self.m(), self.j);
        let delta = self.delta();
        let half = BigRational::new(1.into(), 2.into());
        let norm = &(&self.x * &self.x) - &(&delta * &(&self.y * &self.y));
        let c = norm.sqrt()?;
        for c in [c.clone(), -&c] {
            let Some(alpha) = (&self.x + &c).scale(&half).sqrt() else {
                continue;
            };
            let cand = if alpha.is_zero() {
                if !self.y.is_zero() {
                    continue;
                }
                let beta2 = self.x.scale(&rat(-j).recip());
                match beta2.sqrt() {
                    Some(beta) => CmNum::new(j, QuadNum::zero(m), beta),
                    None => continue,
                }
            } else {
                let beta = &self.y * &alpha.inv().expect("alpha is nonzero").scale(&half);
                CmNum::new(j, alpha, beta)
            };
            if &(&cand * &cand) == self {
                return Some(cand);
            }
        }
        None
    }

    /// The terms `(coefficient, radicand)` with square-free radicands in
    /// `{1, m, -j, -t}`, so that the element equals `Σ c·√r` (principal roots).
    pub fn to_terms(&self) -> Vec<(BigRational, i64)> {
        let (m, j) = (self.m(), self.j);
        let g = gcd(m, j);
        let t = m * j / (g * g);
        let mut out = Vec::new();
        let mut push = |c: BigRational, r: i64| {
            if !c.is_zero() {
                out.push((c, r));
            }
        };
        push(self.x.a.clone(), 1);
        push(self.x.b.clone(), m);
        push(self.y.a.clone(), -j);
        push(&self.y.b * rat(g), -t);
        out
    }

    /// Image under the fixed complex embedding.
    pub fn to_complex(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64() * (self.j as f64).sqrt())
    }
}

impl<'a> Mul<&'a CmNum> for &'a CmNum {
    type Output = CmNum;
    fn mul(self, o: &CmNum) -> CmNum {
        let delta = self.delta();
        CmNum::new(
            self.j,
            &(&self.x * &o.x) + &(&delta * &(&self.y * &o.y)),
            &(&self.x * &o.y) + &(&self.y * &o.x),
        )
    }
}

impl Neg for &CmNum {
    type Output = CmNum;
    fn neg(self) -> CmNum {
        CmNum::new(self.j, -&self.x, -&self.y)
    }
}

/// The three quadratic subfields of `K_{m,j}`, as square-free radicands
/// `(m, -j, -t)` with `t = mj / gcd(m, j)²`.
pub fn subfield_radicands(m: i64, j: i64) -> Result<(i64, i64, i64)> {
    if m < 2 || !is_squarefree(m) {
        return Err(invalid(format!("m = {m} must be square-free and > 1")));
    }
    if j < 1 || !is_squarefree(j) {
        return Err(invalid(format!("j = {j} must be square-free and ≥ 1")));
    }
    let g = gcd(m, j);
    Ok((m, -j, -(m * j / (g * g))))
}

/// Discriminants of `Q(√m)`, `Q(√-j)`, `Q(√-t)`.
pub fn subfields(m: i64, j: i64) -> Result<[i64; 3]> {
    let (r, i1, i2) = subfield_radicands(m, j)?;
    Ok([field_disc(r), field_disc(i1), field_disc(i2)])
}

/// `√-k` for `k ∈ {j, t}`, as an element of `K_{m,j}`.
fn sqrt_minus(m: i64, j: i64, k: i64) -> CmNum {
    let g = gcd(m, j);
    let t = m * j / (g * g);
    let zero = QuadNum::zero(m);
    if k == j {
        CmNum::new(j, zero, QuadNum::from_rational(m, BigRational::one()))
    } else {
        assert_eq!(k, t);
        // √-t = √m·√-j / g
        CmNum::new(
            j,
            zero,
            QuadNum::new(m, BigRational::zero(), rat(g).recip()),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiquadCm {
    pub m: i64,
    pub j: i64,
    pub t: i64,
    /// Discriminants of the real subfield and the two imaginary subfields.
    pub sub_discs: [i64; 3],
    pub w_k: u64,
    pub q_index: u64,
    /// A generator of the roots of unity, of order `w_k`.
    pub mu_generator: CmNum,
    /// A fundamental unit of `K` modulo roots of unity: `√(ζε)` when `Q = 2`, else `ε`.
    pub unit: CmNum,
}

impl BiquadCm {
    pub fn roots_of_unity(&self) -> Vec<CmNum> {
        let mut out = vec![CmNum::one(self.m, self.j)];
        for _ in 1..self.w_k {
            let next = out.last().unwrap() * &self.mu_generator;
            out.push(next);
        }
        out
    }
}

pub fn biquad_cm(m: i64, j: i64) -> Result<BiquadCm> {
    let (_, _, neg_t) = subfield_radicands(m, j)?;
    let t = -neg_t;
    let sub_discs = subfields(m, j)?;
    let has = |k: i64| j == k || t == k;
    let has_i = has(1);
    let has_zeta3 = has(3);
    let has_zeta8 = m == 2 && has(1) && has(2);
    let one = CmNum::one(m, j);
    let minus_one = -&one;
    let half = BigRational::new(1.into(), 2.into());
    let zeta3 = || {
        let s3 = sqrt_minus(m, j, 3);
        let mut z = s3.clone();
        z.x = QuadNum::from_rational(m, -half.clone());
        z.y = s3.y.scale(&half);
        z
    };
    let (w_k, mu_generator) = if has_zeta8 {
        let i = sqrt_minus(m, j, 1);
        let one_plus_i = CmNum::new(j, &one.x + &i.x, &one.y + &i.y);
        let s2_half = CmNum::from_real(j, QuadNum::new(m, BigRational::zero(), half.clone()));
        (8, &s2_half * &one_plus_i)
    } else if has_i && has_zeta3 {
        (12, &sqrt_minus(m, j, 1) * &zeta3())
    } else if has_zeta3 {
        (6, -&zeta3())
    } else if has_i {
        (4, sqrt_minus(m, j, 1))
    } else {
        (2, minus_one)
    };
    let mut cm = BiquadCm {
        m,
        j,
        t,
        sub_discs,
        w_k,
        q_index: 1,
        mu_generator,
        unit: one.clone(),
    };
    let roots = cm.roots_of_unity();
    debug_assert!(roots.iter().skip(1).all(|z| z != &one));
    debug_assert_eq!(&roots[w_k as usize - 1] * &cm.mu_generator, one);
    let e = fundamental_unit(m)?;
    let (ex, ey) = e.coords();
    let eps = CmNum::from_real(j, QuadNum::new(m, ex, ey));
    cm.unit = eps.clone();
    for z in &roots {
        if let Some(eta) = (z * &eps).sqrt() {
            cm.q_index = 2;
            cm.unit = eta;
            break;
        }
    }
    Ok(cm)
}

/// The Hasse unit index `[O_K^× : μ_K·O_{k⁺}^×]`.
pub fn hasse_unit_index(m: i64, j: i64) -> Result<u64> {
    Ok(biquad_cm(m, j)?.q_index)
}

/// Class number of `K_{m,j}`.
pub fn class_number_cm(m: i64, j: i64) -> Result<u64> {
    let cm = biquad_cm(m, j)?;
    let h_real = class_number_real(m)?;
    let h1 = class_number_imaginary(field_disc(-j))?;
    let h2 = class_number_imaginary(field_disc(-cm.t))?;
    let w1 = roots_of_unity(-j);
    let w2 = roots_of_unity(-cm.t);
    let num = cm.q_index * cm.w_k * h1 * h2 * h_real;
    let den = w1 * w2;
    if num % den != 0 {
        return Err(Error::Integrality(format!(
            "h(K_{{{m},{j}}}) = {num}/{den} is not an integer"
        )));
    }
    Ok(num / den)
}
