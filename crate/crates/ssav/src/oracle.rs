//! Brute-force ground truth: supersingular elliptic curve censuses over small
//! finite fields, exact Galois conjugacy tests in cyclotomic fields, and an
//! exhaustive reduced-form scan.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factor, gcd, is_prime, lcm};
use crate::error::invalid;
use crate::quadratics::Bqf;
use crate::{Error, Result};

/// Largest field size accepted by the curve census.
pub const MAX_CENSUS_Q: u64 = 512;
/// Largest field size in characteristic 2 or 3, where whole `(u, r, s, t)` orbits are enumerated.
pub const MAX_CENSUS_Q_SMALL_CHAR: u64 = 32;

/// `F_q` with elements encoded as integers whose base-`p` digits are the
/// coefficients of a polynomial in a primitive element.
#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u64,
    a: u32,
    q: usize,
    add: Vec<u16>,
    neg: Vec<u16>,
    exp: Vec<u16>,
    log: Vec<u32>,
}

impl FiniteField {
    pub fn new(p: u64, a: u32) -> Result<Self> {
        if !is_prime(p) || a == 0 {
            return Err(invalid(format!("{p}^{a} is not a prime power")));
        }
        let q = p
            .checked_pow(a)
            .filter(|&q| q <= 1 << 15)
            .ok_or_else(|| invalid("field too large"))? as usize;
        let pu = p as usize;
        let digits = |mut x: usize| -> Vec<usize> {
            (0..a)
                .map(|_| {
                    let d = x % pu;
                    x /= pu;
                    d
                })
                .collect()
        };
        let encode = |d: &[usize]| -> usize { d.iter().rev().fold(0, |acc, &c| acc * pu + c) };
        let mut add = vec![0u16; q * q];
        let mut neg = vec![0u16; q];
        for x in 0..q {
            let dx = digits(x);
            neg[x] = encode(&dx.iter().map(|&c| (pu - c) % pu).collect::<Vec<_>>()) as u16;
            for y in 0..q {
                let dy = digits(y);
                let s: Vec<usize> = dx.iter().zip(&dy).map(|(u, v)| (u + v) % pu).collect();
                add[x * q + y] = encode(&s) as u16;
            }
        }
        // search monic f = x^a + c_{a-1}x^{a-1} + ... + c_0 with x of order q - 1
        for low in 0..q {
            let c = digits(low);
            if c[0] == 0 {
                continue;
            }
            let mut exp = Vec::with_capacity(q - 1);
            let mut cur = vec![0usize; a as usize];
            cur[0] = 1;
            let mut ok = true;
            for k in 0..q - 1 {
                let e = encode(&cur);
                if k > 0 && e == 1 {
                    ok = false;
                    break;
                }
                exp.push(e as u16);
                // multiply by x, using x^a = -Σ c_i x^i
                let top = cur[a as usize - 1];
                for i in (1..a as usize).rev() {
                    cur[i] = cur[i - 1];
                }
                cur[0] = 0;
                for i in 0..a as usize {
                    cur[i] = (cur[i] + top * (pu - c[i])) % pu;
                }
            }
            if !ok || encode(&cur) != 1 {
                continue;
            }
            let mut log = vec![u32::MAX; q];
            for (k, &e) in exp.iter().enumerate() {
                log[e as usize] = k as u32;
            }
            return Ok(Self {
                p,
                a,
                q,
                add,
                neg,
                exp,
                log,
            });
        }
        Err(invalid(format!("no primitive polynomial found for F_{q}")))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn q(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        self.add[x as usize * self.q + y as usize] as u32
    }

    #[inline]
    pub fn neg(&self, x: u32) -> u32 {
        self.neg[x as usize] as u32
    }

    #[inline]
    pub fn sub(&self, x: u32, y: u32) -> u32 {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        if x == 0 || y == 0 {
            return 0;
        }
        let k = (self.log[x as usize] as usize + self.log[y as usize] as usize) % (self.q - 1);
        self.exp[k] as u32
    }

    pub fn inv(&self, x: u32) -> Option<u32> {
        if x == 0 {
            return None;
        }
        let k = (self.q - 1 - self.log[x as usize] as usize) % (self.q - 1);
        Some(self.exp[k] as u32)
    }

    /// `g^k` for the fixed primitive element `g`.
    #[inline]
    pub fn gen_pow(&self, k: usize) -> u32 {
        self.exp[k % (self.q - 1)] as u32
    }

    /// Discrete logarithm to the fixed primitive element.
    pub fn log(&self, x: u32) -> Option<usize> {
        (x != 0).then(|| self.log[x as usize] as usize)
    }

    /// The image of an integer.
    pub fn int(&self, k: i64) -> u32 {
        k.rem_euclid(self.p as i64) as u32
    }

    pub fn is_square(&self, x: u32) -> bool {
        x == 0 || self.p == 2 || self.log[x as usize] % 2 == 0
    }

    /// Quadratic character (odd `q`).
    #[inline]
    pub fn chi(&self, x: u32) -> i64 {
        if x == 0 {
            0
        } else if self.log[x as usize] % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// One isomorphism class of elliptic curves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveClass {
    pub q: u64,
    /// `[a1, a2, a3, a4, a6]` of a representative, in the field's integer encoding.
    pub coeffs: [u32; 5],
    pub j_invariant: u32,
    /// `t` with `#E(F_q) = q + 1 - t`.
    pub trace: i64,
    /// Ordinal among the supersingular classes sharing this `j`.
    pub twist_tag: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveCensus {
    pub q: u64,
    pub p: u64,
    /// Number of isomorphism classes of all elliptic curves.
    pub all_classes: u64,
    pub supersingular: Vec<CurveClass>,
}

impl CurveCensus {
    /// Number of supersingular classes per `j`.
    pub fn per_j(&self) -> Vec<(u32, u64)> {
        let mut m: Vec<(u32, u64)> = Vec::new();
        for c in &self.supersingular {
            match m.iter_mut().find(|e| e.0 == c.j_invariant) {
                Some(e) => e.1 += 1,
                None => m.push((c.j_invariant, 1)),
            }
        }
        m
    }
}

/// Number of `F_q`-isomorphism classes of supersingular elliptic curves.
pub fn brute_curve_census(q: u64) -> Result<u64> {
    Ok(curve_census(q)?.supersingular.len() as u64)
}

pub fn curve_census(q: u64) -> Result<CurveCensus> {
    let f = factor(q);
    if f.len() != 1 {
        return Err(invalid(format!("{q} is not a prime power")));
    }
    let (p, a) = f[0];
    if q > MAX_CENSUS_Q {
        return Err(invalid(format!(
            "q = {q} exceeds the census bound {MAX_CENSUS_Q}"
        )));
    }
    if p <= 3 && q > MAX_CENSUS_Q_SMALL_CHAR {
        return Err(Error::Unsupported(format!(
            "full Weierstrass orbits in characteristic {p} are enumerated only for q ≤ {MAX_CENSUS_Q_SMALL_CHAR}"
        )));
    }
    let field = FiniteField::new(p, a)?;
    let (all, mut classes) = if p >= 5 {
        short_census(&field)
    } else {
        general_census(&field)
    };
    for c in &classes {
        if c.trace * c.trace > 4 * q as i64 {
            return Err(Error::Mismatch(format!(
                "trace {} violates the Hasse bound over F_{q}",
                c.trace
            )));
        }
    }
    classes.retain(|c| c.trace.rem_euclid(p as i64) == 0);
    classes.sort_by_key(|c| (c.j_invariant, c.coeffs));
    let mut last = None;
    let mut tag = 0;
    for c in classes.iter_mut() {
        if last == Some(c.j_invariant) {
            tag += 1;
        } else {
            tag = 0;
            last = Some(c.j_invariant);
        }
        c.twist_tag = tag;
    }
    Ok(CurveCensus {
        q,
        p,
        all_classes: all,
        supersingular: classes,
    })
}

/// `y² = x³ + Ax + B` up to `(A, B) ↦ (u⁴A, u⁶B)`; returns every class with its trace.
fn short_census(f: &FiniteField) -> (u64, Vec<CurveClass>) {
    let q = f.q;
    let four = f.int(4);
    let tw7 = f.int(27);
    let disc = |a: u32, b: u32| {
        let a3 = f.mul(f.mul(a, a), a);
        f.add(f.mul(four, a3), f.mul(tw7, f.mul(b, b)))
    };
    let mut seen = vec![false; q * q];
    let mut reps = Vec::new();
    for a in 0..q as u32 {
        for b in 0..q as u32 {
            if seen[a as usize * q + b as usize] || disc(a, b) == 0 {
                continue;
            }
            for k in 0..q - 1 {
                let u4 = f.gen_pow(4 * k);
                let u6 = f.gen_pow(6 * k);
                let (a2, b2) = (f.mul(u4, a), f.mul(u6, b));
                seen[a2 as usize * q + b2 as usize] = true;
            }
            reps.push((a, b));
        }
    }
    let n1728 = f.int(1728);
    let classes: Vec<CurveClass> = reps
        .par_iter()
        .map(|&(a, b)| {
            let mut s = 0i64;
            for x in 0..q as u32 {
                let rhs = f.add(f.mul(f.add(f.mul(x, x), a), x), b);
                s += f.chi(rhs);
            }
            let a3 = f.mul(four, f.mul(f.mul(a, a), a));
            let j = f.mul(n1728, f.mul(a3, f.inv(disc(a, b)).expect("nonsingular")));
            CurveClass {
                q: q as u64,
                coeffs: [0, 0, 0, a, b],
                j_invariant: j,
                trace: -s,
                twist_tag: 0,
            }
        })
        .collect();
    (reps.len() as u64, classes)
}

struct Invariants {
    disc: u32,
    c4: u32,
}

fn invariants(f: &FiniteField, c: [u32; 5]) -> Invariants {
    let [a1, a2, a3, a4, a6] = c;
    let m = |x, y| f.mul(x, y);
    let ad = |x, y| f.add(x, y);
    let k = |n| f.int(n);
    let b2 = ad(m(a1, a1), m(k(4), a2));
    let b4 = ad(m(k(2), a4), m(a1, a3));
    let b6 = ad(m(a3, a3), m(k(4), a6));
    let b8 = f.sub(
        ad(ad(m(m(a1, a1), a6), m(m(k(4), a2), a6)), m(m(a2, a3), a3)),
        ad(m(m(a1, a3), a4), m(a4, a4)),
    );
    let b2sq = m(b2, b2);
    let disc = ad(
        f.neg(ad(
            ad(m(b2sq, b8), m(k(8), m(m(b4, b4), b4))),
            m(k(27), m(b6, b6)),
        )),
        m(k(9), m(m(b2, b4), b6)),
    );
    let c4 = f.sub(b2sq, m(k(24), b4));
    Invariants { disc, c4 }
}

/// Coefficients of the curve obtained by `x = u²x' + r`, `y = u³y' + su²x' + t`.
fn transform(f: &FiniteField, c: [u32; 5], u: u32, r: u32, s: u32, t: u32) -> [u32; 5] {
    let [a1, a2, a3, a4, a6] = c;
    let m = |x, y| f.mul(x, y);
    let ad = |x, y| f.add(x, y);
    let sb = |x, y| f.sub(x, y);
    let k = |n| f.int(n);
    let ui = f.inv(u).expect("u ≠ 0");
    let ui2 = m(ui, ui);
    let ui3 = m(ui2, ui);
    let ui4 = m(ui2, ui2);
    let ui6 = m(ui3, ui3);
    let n1 = ad(a1, m(k(2), s));
    let n2 = sb(ad(sb(a2, m(s, a1)), m(k(3), r)), m(s, s));
    let n3 = ad(ad(a3, m(r, a1)), m(k(2), t));
    let n4 = sb(
        ad(sb(a4, m(s, a3)), ad(m(k(2), m(r, a2)), m(k(3), m(r, r)))),
        ad(m(ad(t, m(r, s)), a1), m(k(2), m(s, t))),
    );
    let n6 = sb(
        ad(ad(a6, m(r, a4)), ad(m(m(r, r), a2), m(m(r, r), r))),
        ad(ad(m(t, a3), m(t, t)), m(m(r, t), a1)),
    );
    [m(ui, n1), m(ui2, n2), m(ui3, n3), m(ui4, n4), m(ui6, n6)]
}

fn curve_index(q: usize, c: [u32; 5]) -> usize {
    c.iter().rev().fold(0, |acc, &x| acc * q + x as usize)
}

/// Full Weierstrass equations up to the `(u, r, s, t)` action.
fn general_census(f: &FiniteField) -> (u64, Vec<CurveClass>) {
    let q = f.q;
    let total = q.pow(5);
    let mut seen = vec![false; total];
    let mut reps = Vec::new();
    for idx in 0..total {
        if seen[idx] {
            continue;
        }
        let mut c = [0u32; 5];
        let mut x = idx;
        for slot in c.iter_mut() {
            *slot = (x % q) as u32;
            x /= q;
        }
        if invariants(f, c).disc == 0 {
            continue;
        }
        let orbit: Vec<usize> = (1..q as u32)
            .into_par_iter()
            .flat_map_iter(|u| {
                let mut local = Vec::with_capacity(q * q * q);
                for r in 0..q as u32 {
                    for s in 0..q as u32 {
                        for t in 0..q as u32 {
                            local.push(curve_index(q, transform(f, c, u, r, s, t)));
                        }
                    }
                }
                local.sort_unstable();
                local.dedup();
                local
            })
            .collect();
        for i in orbit {
            seen[i] = true;
        }
        reps.push(c);
    }
    let classes = reps
        .par_iter()
        .map(|&c| {
            let [a1, a2, a3, a4, a6] = c;
            let mut points = 1i64;
            for x in 0..q as u32 {
                let rhs = f.add(f.mul(f.add(f.mul(f.add(x, a2), x), a4), x), a6);
                let lin = f.add(f.mul(a1, x), a3);
                for y in 0..q as u32 {
                    if f.add(f.mul(y, y), f.mul(lin, y)) == rhs {
                        points += 1;
                    }
                }
            }
            let inv = invariants(f, c);
            let c4 = inv.c4;
            let j = f.mul(
                f.mul(f.mul(c4, c4), c4),
                f.inv(inv.disc).expect("nonsingular"),
            );
            CurveClass {
                q: q as u64,
                coeffs: c,
                j_invariant: j,
                trace: q as i64 + 1 - points,
                twist_tag: 0,
            }
        })
        .collect();
    (reps.len() as u64, classes)
}

/// Parity of the exponent `a` in `q = p^a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

/// An element of `Q(ζ_N)` reduced modulo `Φ_N`, as coefficients on `ζ^0, …, ζ^{φ(N)-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycloVec {
    pub conductor: u64,
    pub coeffs: Vec<i64>,
}

/// Arithmetic in `Z[ζ_N]` via a table of the reductions of `ζ^k`.
#[derive(Debug, Clone)]
pub struct CycloField {
    n: usize,
    phi: usize,
    rows: Vec<Vec<i64>>,
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let mut quo = vec![0i64; num.len() - dd];
    for i in (0..quo.len()).rev() {
        let c = r[i + dd] / den[dd];
        quo[i] = c;
        for k in 0..=dd {
            r[i + k] -= c * den[k];
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    quo
}

fn cyclotomic_poly(n: usize, memo: &mut HashMap<usize, Vec<i64>>) -> Vec<i64> {
    if let Some(v) = memo.get(&n) {
        return v.clone();
    }
    let mut poly = vec![0i64; n + 1];
    poly[0] = -1;
    poly[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            let pd = cyclotomic_poly(d, memo);
            poly = poly_div_exact(&poly, &pd);
        }
    }
    memo.insert(n, poly.clone());
    poly
}

impl CycloField {
    pub fn new(n: u64) -> Self {
        let n = n.max(1) as usize;
        let phi_poly = cyclotomic_poly(n, &mut HashMap::new());
        let phi = phi_poly.len() - 1;
        let mut rows = Vec::with_capacity(n);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..n {
            rows.push(cur.clone());
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            for i in 0..phi {
                cur[i] -= top * phi_poly[i];
            }
        }
        Self { n, phi, rows }
    }

    pub fn conductor(&self) -> u64 {
        self.n as u64
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    /// `Σ c·ζ^k` from `(k, c)` pairs.
    pub fn from_terms(&self, terms: &[(i64, i64)]) -> CycloVec {
        let mut coeffs = vec![0i64; self.phi];
        for &(k, c) in terms {
            let row = &self.rows[k.rem_euclid(self.n as i64) as usize];
            for (x, r) in coeffs.iter_mut().zip(row) {
                *x += c * r;
            }
        }
        CycloVec {
            conductor: self.n as u64,
            coeffs,
        }
    }

    pub fn zeta(&self, k: i64) -> CycloVec {
        self.from_terms(&[(k, 1)])
    }

    fn terms(x: &CycloVec) -> Vec<(i64, i64)> {
        x.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (k as i64, c))
            .collect()
    }

    pub fn mul(&self, x: &CycloVec, y: &CycloVec) -> CycloVec {
        let (tx, ty) = (Self::terms(x), Self::terms(y));
        let mut prod = Vec::with_capacity(tx.len() * ty.len());
        for &(i, a) in &tx {
            for &(j, b) in &ty {
                prod.push((i + j, a * b));
            }
        }
        self.from_terms(&prod)
    }

    pub fn neg(&self, x: &CycloVec) -> CycloVec {
        CycloVec {
            conductor: x.conductor,
            coeffs: x.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// `σ_r: ζ ↦ ζ^r`.
    pub fn galois(&self, r: i64, x: &CycloVec) -> CycloVec {
        let t: Vec<(i64, i64)> = Self::terms(x)
            .into_iter()
            .map(|(k, c)| (k * r, c))
            .collect();
        self.from_terms(&t)
    }

    /// `√p` through the quadratic Gauss sum; needs `δ_p | N`.
    pub fn sqrt_p(&self, p: u64) -> Result<CycloVec> {
        let n = self.n as i64;
        let pi = p as i64;
        let v = if p == 2 {
            if n % 8 != 0 {
                return Err(invalid("√2 needs 8 | N"));
            }
            // ζ8 + ζ8⁻¹
            self.from_terms(&[(n / 8, 1), (-n / 8, 1)])
        } else {
            if n % pi != 0 || (p % 4 == 3 && n % (4 * pi) != 0) {
                return Err(invalid(format!("√{p} does not lie in Q(ζ_{n})")));
            }
            let step = n / pi;
            let gauss: Vec<(i64, i64)> = (1..pi)
                .map(|k| {
                    let e = crate::arith::pow_mod(k as u64, (p - 1) / 2, p);
                    (k * step, if e == 1 { 1 } else { -1 })
                })
                .collect();
            let g = self.from_terms(&gauss);
            if p % 4 == 1 {
                g
            } else {
                // g = i·√p, so √p = -i·g
                self.mul(&self.zeta(3 * n / 4), &g)
            }
        };
        let sq = self.mul(&v, &v);
        let expect = self.from_terms(&[(0, pi)]);
        if sq != expect {
            return Err(Error::Mismatch(format!(
                "Gauss sum for √{p} does not square to {p}"
            )));
        }
        Ok(v)
    }
}

/// Whether `√q·ζ_n` and `-√q·ζ_n` are Galois conjugate, decided by searching
/// `σ_r ∈ Gal(Q(ζ_N)/Q)` with `σ_r(√q·ζ_n) = -√q·ζ_n`.
pub fn galois_conjugate_test(n: u64, p: u64, parity: Parity) -> Result<bool> {
    if n == 0 || n % 4 == 2 {
        return Err(invalid(format!("n = {n} must be positive and not 2 mod 4")));
    }
    if !is_prime(p) {
        return Err(invalid(format!("{p} is not prime")));
    }
    let (field, x) = match parity {
        Parity::Even => {
            let field = CycloField::new(n);
            let x = field.zeta(1);
            (field, x)
        }
        Parity::Odd => {
            let delta = if p == 2 {
                8
            } else if p % 4 == 1 {
                p
            } else {
                4 * p
            };
            let big = lcm(n, delta);
            let field = CycloField::new(big);
            let root = field.sqrt_p(p)?;
            let x = field.mul(&root, &field.zeta((big / n) as i64));
            (field, x)
        }
    };
    let target = field.neg(&x);
    let big = field.conductor() as i64;
    Ok((1..big.max(2))
        .filter(|&r| gcd(r, big) == 1)
        .any(|r| field.galois(r, &x) == target))
}

/// Reduced primitive positive definite forms of discriminant `disc`, by scanning
/// `1 ≤ A ≤ √(|disc|/3)`, `-A < B ≤ A` and solving for `C`.
pub fn reduced_forms_oracle(disc: i64) -> Result<Vec<Bqf>> {
    if disc >= 0 || disc.rem_euclid(4) > 1 {
        return Err(invalid(format!("{disc} is not a negative discriminant")));
    }
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -disc {
        for b in (-a + 1)..=a {
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            let f = Bqf::new(a, b, c);
            if f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort();
    Ok(out)
}

/// Gauss reduction of a positive definite form to its reduced representative.
pub fn gauss_reduce(f: Bqf) -> Bqf {
    let Bqf {
        mut a,
        mut b,
        mut c,
    } = f;
    loop {
        if b > a || b <= -a {
            // translate x ↦ x + ky so that -a < b ≤ a
            let k = (a - b).div_euclid(2 * a);
            let nb = b + 2 * a * k;
            c += k * (b + a * k);
            b = nb;
        }
        if a > c || (a == c && b < 0) {
            // swap via (x, y) ↦ (-y, x)
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if b > -a && b <= a {
            return Bqf::new(a, b, c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small() {
        for (p, a) in [(2, 3), (3, 2), (5, 2), (2, 4), (7, 1)] {
            let f = FiniteField::new(p, a).unwrap();
            let q = f.q() as u32;
            for x in 0..q {
                assert_eq!(f.add(x, f.neg(x)), 0);
                if x != 0 {
                    assert_eq!(f.mul(x, f.inv(x).unwrap()), 1);
                }
                for y in 0..q {
                    for z in [0, 1, q - 1] {
                        assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
                    }
                }
            }
        }
    }

    #[test]
    fn census_examples() {
        assert_eq!(brute_curve_census(4).unwrap(), 7);
        assert_eq!(brute_curve_census(7).unwrap(), 2);
        assert_eq!(brute_curve_census(13).unwrap(), 2);
        assert_eq!(brute_curve_census(2).unwrap(), 3);
        assert_eq!(brute_curve_census(3).unwrap(), 4);
        assert!(brute_curve_census(1024).is_err());
        assert!(brute_curve_census(81).is_err());
    }

    #[test]
    fn all_curves_over_small_prime_fields() {
        // 2q + 6, 2q + 2, 2q + 4, 2q for q ≡ 1, 5, 7, 11 (mod 12)
        for q in [5u64, 7, 11, 13, 17, 19, 23] {
            let expect = 2 * q
                + match q % 12 {
                    1 => 6,
                    5 => 2,
                    7 => 4,
                    _ => 0,
                };
            assert_eq!(curve_census(q).unwrap().all_classes, expect, "q={q}");
        }
        assert_eq!(curve_census(2).unwrap().all_classes, 5);
        assert_eq!(curve_census(3).unwrap().all_classes, 8);
    }

    #[test]
    fn twist_structure() {
        for q in [11u64, 23, 25, 29, 47, 49, 59, 71, 83, 121] {
            let c = curve_census(q).unwrap();
            let f = FiniteField::new(c.p, factor(q)[0].1).unwrap();
            let j1728 = f.int(1728);
            for (j, n) in c.per_j() {
                if j != 0 && j != j1728 {
                    assert_eq!(n, 2, "q={q}, j={j}");
                }
            }
        }
    }

    #[test]
    fn gauss_sums_square_to_p() {
        for p in crate::arith::primes_in(2, 50) {
            let delta = if p == 2 {
                8
            } else if p % 4 == 1 {
                p
            } else {
                4 * p
            };
            let f = CycloField::new(delta * 3);
            f.sqrt_p(p).unwrap();
        }
    }

    #[test]
    fn galois_examples() {
        assert!(!galois_conjugate_test(8, 2, Parity::Odd).unwrap());
        assert!(galois_conjugate_test(20, 5, Parity::Odd).unwrap());
        assert!(galois_conjugate_test(4, 11, Parity::Even).unwrap());
        assert!(!galois_conjugate_test(3, 11, Parity::Even).unwrap());
        assert!(galois_conjugate_test(6, 11, Parity::Even).is_err());
    }

    #[test]
    fn form_scan_examples() {
        let show = |d| {
            reduced_forms_oracle(d)
                .unwrap()
                .iter()
                .map(|f| (f.a, f.b, f.c))
                .collect::<Vec<_>>()
        };
        assert_eq!(show(-3), vec![(1, 1, 1)]);
        assert_eq!(show(-20), vec![(1, 0, 5), (2, 2, 3)]);
        assert_eq!(show(-56).len(), 4);
    }

    #[test]
    fn gauss_reduction_lands_in_scan() {
        for d in [-23i64, -56, -84, -71, -199] {
            let forms = reduced_forms_oracle(d).unwrap();
            for f in &forms {
                assert_eq!(gauss_reduce(*f), *f);
            }
            // (a, b, c) ↦ (a, b + 2ak, ...) and swaps stay in the class set
            for f in &forms {
                let g = Bqf::new(f.c, -f.b + 2 * f.c * 3, 0);
                let g = Bqf::new(g.a, g.b, (g.b * g.b - d) / (4 * g.a));
                assert!(forms.contains(&gauss_reduce(g)), "d={d}, f={f}");
            }
        }
    }
}
