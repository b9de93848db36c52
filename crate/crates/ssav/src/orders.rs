//! Orders in étale algebras `K = ∏ K_i` of degree at most 4 built from the
//! fields of supersingular Weil numbers: the order `R_sp = Z[π₀, π₀²/p]`,
//! the orders between it and `O_K`, their class numbers
//! `h(B) = h(O_K)·[(O_K/𝔞)^× : (B/𝔞)^×] / [O_K^× : B^×]`, and the Bass test.
//!
//! Lattices are integer matrices in Hermite normal form whose rows are
//! coordinates over a Z-basis of `O_K`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{rat, ratio, square_decompose};
use crate::cm_quartic::{biquad_cm, class_number_cm};
use crate::error::invalid;
use crate::quadratics::{class_number, fundamental_unit};
use crate::weil::{MultipleWeil, WeilRep};
use crate::{Error, Result};

type Terms = Vec<(BigRational, i64)>;

/// A simple component `K_i` of the algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Component {
    /// `Q(√r)`, Q-basis `{1, √r}`.
    Quadratic { r: i64 },
    /// `Q(√r1, √r2)` with `r3` the square-free part of `r1·r2`; Q-basis `{1, √r1, √r2, √r3}`.
    Biquadratic { r1: i64, r2: i64, r3: i64 },
    /// `Q(ζ₅)`, Q-basis `{1, ζ, ζ², ζ³}`.
    Cyclotomic5,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Quadratic { r } => write!(f, "Q(sqrt({r}))"),
            Component::Biquadratic { r1, r2, .. } => write!(f, "Q(sqrt({r1}),sqrt({r2}))"),
            Component::Cyclotomic5 => write!(f, "Q(zeta_5)"),
        }
    }
}

impl Component {
    /// The multiquadratic field generated by the square roots of `radicands`.
    pub fn from_radicands(radicands: &[i64]) -> Result<Self> {
        let mut set: BTreeSet<i64> = BTreeSet::new();
        for &k in radicands {
            let (_, s) = square_decompose(k);
            if s != 1 {
                set.insert(s);
            }
        }
        let v: Vec<i64> = set.into_iter().collect();
        match v.len() {
            1 => Ok(Component::Quadratic { r: v[0] }),
            2 | 3 => {
                let (r1, r2) = (v[0], v[1]);
                let r3 = square_decompose(r1 * r2).1;
                let mut all = vec![r1, r2, r3];
                all.sort();
                if v.len() == 3 && all != v {
                    return Err(invalid(format!(
                        "radicands {v:?} generate a field of degree > 4"
                    )));
                }
                Ok(Component::Biquadratic {
                    r1: all[0],
                    r2: all[1],
                    r3: all[2],
                })
            }
            _ => Err(invalid(format!(
                "radicands {radicands:?} do not give a field of degree 2 or 4"
            ))),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Component::Quadratic { .. } => 2,
            _ => 4,
        }
    }

    fn radicand_basis(&self) -> Vec<i64> {
        match *self {
            Component::Quadratic { r } => vec![1, r],
            Component::Biquadratic { r1, r2, r3 } => vec![1, r1, r2, r3],
            Component::Cyclotomic5 => vec![],
        }
    }

    /// Integer structure constants `e_a·e_b = Σ_c t[a][b][c]·e_c` on the Q-basis.
    pub fn q_table(&self) -> Vec<Vec<Vec<i64>>> {
        let n = self.degree();
        let mut t = vec![vec![vec![0i64; n]; n]; n];
        match self {
            Component::Cyclotomic5 => {
                for a in 0..4 {
                    for b in 0..4 {
                        let k = (a + b) % 5;
                        if k < 4 {
                            t[a][b][k] = 1;
                        } else {
                            for c in 0..4 {
                                t[a][b][c] = -1;
                            }
                        }
                    }
                }
            }
            _ => {
                let rad = self.radicand_basis();
                for a in 0..n {
                    for b in 0..n {
                        let (ra, rb) = (rad[a], rad[b]);
                        if a == b {
                            t[a][b][0] = ra;
                            continue;
                        }
                        let (c, s) = square_decompose(ra * rb);
                        let sign = if ra < 0 && rb < 0 { -1 } else { 1 };
                        let idx = rad
                            .iter()
                            .position(|&r| r == s)
                            .expect("closed radicand set");
                        t[a][b][idx] = sign * c;
                    }
                }
            }
        }
        t
    }

    /// Q-coordinates of `Σ c·√k` (principal square roots).
    pub fn coords_of_terms(&self, terms: &[(BigRational, i64)]) -> Result<Vec<BigRational>> {
        let rad = self.radicand_basis();
        if rad.is_empty() {
            return Err(invalid("Q(ζ5) elements are not given by radicals here"));
        }
        let mut v = vec![BigRational::zero(); rad.len()];
        for (c, k) in terms {
            let (root, s) = square_decompose(*k);
            let idx = rad
                .iter()
                .position(|&r| r == s)
                .ok_or_else(|| invalid(format!("√{k} is not in {self}")))?;
            v[idx] += c * rat(root);
        }
        Ok(v)
    }

    pub fn class_number(&self) -> Result<u64> {
        match *self {
            Component::Quadratic { r } => class_number(r),
            Component::Biquadratic { .. } => {
                let (m, j) = self.cm_parameters()?;
                class_number_cm(m, j)
            }
            // Q(ζ5) has class number one
            Component::Cyclotomic5 => Ok(1),
        }
    }

    /// `(m, j)` with the component equal to `K_{m,j}`.
    pub fn cm_parameters(&self) -> Result<(i64, i64)> {
        match *self {
            Component::Biquadratic { r1, r2, r3 } => {
                let rs = [r1, r2, r3];
                let pos: Vec<i64> = rs.iter().copied().filter(|&r| r > 0).collect();
                if pos.len() != 1 {
                    return Err(Error::Unsupported(format!("{self} is not a CM field")));
                }
                let j = rs.iter().filter(|&&r| r < 0).map(|r| -r).min().unwrap();
                Ok((pos[0], j))
            }
            _ => Err(invalid(format!("{self} is not biquadratic"))),
        }
    }

    /// Generators of the unit group as Q-coordinates, each with its finite
    /// order (`None` for units of infinite order).
    pub fn unit_generators(&self) -> Result<Vec<(Vec<BigRational>, Option<u64>)>> {
        let half = ratio(1, 2);
        match *self {
            Component::Quadratic { r } if r < 0 => Ok(vec![match r {
                -1 => (vec![rat(0), rat(1)], Some(4)),
                -3 => (vec![half.clone(), half], Some(6)),
                _ => (vec![rat(-1), rat(0)], Some(2)),
            }]),
            Component::Quadratic { r } => {
                let e = fundamental_unit(r)?;
                let (x, y) = e.coords();
                Ok(vec![(vec![rat(-1), rat(0)], Some(2)), (vec![x, y], None)])
            }
            Component::Biquadratic { .. } => {
                let (m, j) = self.cm_parameters()?;
                let cm = biquad_cm(m, j)?;
                Ok(vec![
                    (
                        self.coords_of_terms(&cm.mu_generator.to_terms())?,
                        Some(cm.w_k),
                    ),
                    (self.coords_of_terms(&cm.unit.to_terms())?, None),
                ])
            }
            Component::Cyclotomic5 => Ok(vec![
                (vec![rat(0), rat(-1), rat(0), rat(0)], Some(10)),
                // (1+√5)/2 = -ζ² - ζ³
                (vec![rat(0), rat(0), rat(-1), rat(-1)], None),
            ]),
        }
    }

    /// Rows of a Z-basis of the maximal order, in Q-coordinates.
    fn maximal_order_rows(&self) -> Vec<Vec<BigRational>> {
        let n = self.degree();
        if *self == Component::Cyclotomic5 {
            return identity_rat(n);
        }
        // O_K ⊆ (1/4)·Z[√r1, √r2, √r3]; keep the cosets whose characteristic
        // polynomial is integral.
        let table = self.q_table();
        let mut gens: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|k| if k == i { 4 } else { 0 }).collect())
            .collect();
        let total = 4usize.pow(n as u32);
        for code in 1..total {
            let digits: Vec<i64> = (0..n).map(|i| ((code >> (2 * i)) & 3) as i64).collect();
            let x: Vec<BigRational> = digits.iter().map(|&d| ratio(d, 4)).collect();
            if is_integral(&x, &table) {
                gens.push(digits);
            }
        }
        hnf(&gens, n)
            .into_iter()
            .map(|row| row.into_iter().map(|c| ratio(c, 4)).collect())
            .collect()
    }
}

fn identity_rat(n: usize) -> Vec<Vec<BigRational>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|k| if k == i { rat(1) } else { rat(0) })
                .collect()
        })
        .collect()
}

/// Matrix of multiplication by `x`: row `a` holds the coordinates of `x·e_a`.
fn mult_matrix_rat(x: &[BigRational], table: &[Vec<Vec<i64>>]) -> Vec<Vec<BigRational>> {
    let n = x.len();
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for a in 0..n {
        for b in 0..n {
            if x[b].is_zero() {
                continue;
            }
            for c in 0..n {
                let t = table[b][a][c];
                if t != 0 {
                    m[a][c] += &x[b] * rat(t);
                }
            }
        }
    }
    m
}

/// Characteristic polynomial coefficients `c_0..c_{n-1}` (monic) by Faddeev–LeVerrier.
pub fn char_poly(m: &[Vec<BigRational>]) -> Vec<BigRational> {
    let n = m.len();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut mk = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k-1} + c_{n-k+1}·I
        let mut next = mat_mul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        mk = next;
        let am = mat_mul(m, &mk);
        let tr: BigRational = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - k] = -tr / rat(k as i64);
    }
    coeffs.truncate(n);
    coeffs
}

fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut out = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

fn is_integral(x: &[BigRational], table: &[Vec<Vec<i64>>]) -> bool {
    char_poly(&mult_matrix_rat(x, table))
        .iter()
        .all(|c| c.is_integer())
}

fn mat_inverse(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|k| if k == i { rat(1) } else { rat(0) }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("singular basis matrix");
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in 0..2 * n {
                    let delta = &f * &a[col][k];
                    a[r][k] -= delta;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// Echelon (Hermite) normal form of the lattice spanned by `rows` in `Z^n`:
/// pivots strictly to the right, positive, with entries above each pivot reduced.
pub fn hnf(rows: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .filter(|r: &Vec<i128>| r.iter().any(|&x| x != 0))
        .collect();
    let mut out: Vec<Vec<i128>> = Vec::new();
    let mut pivots = Vec::new();
    for col in 0..n {
        loop {
            let nz: Vec<usize> = (0..m.len()).filter(|&i| m[i][col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let best = *nz.iter().min_by_key(|&&i| m[i][col].abs()).unwrap();
            let pivot_row = m[best].clone();
            for &i in &nz {
                if i != best {
                    let q = Integer::div_floor(&m[i][col], &pivot_row[col]);
                    for k in 0..n {
                        m[i][k] -= q * pivot_row[k];
                    }
                }
            }
        }
        if let Some(i) = (0..m.len()).find(|&i| m[i][col] != 0) {
            let mut row = m.remove(i);
            if row[col] < 0 {
                row.iter_mut().for_each(|x| *x = -*x);
            }
            out.push(row);
            pivots.push(col);
        }
        m.retain(|r| r.iter().any(|&x| x != 0));
    }
    for i in 0..out.len() {
        let c = pivots[i];
        for r in 0..i {
            let q = Integer::div_floor(&out[r][c], &out[i][c]);
            if q != 0 {
                let row_i = out[i].clone();
                for k in 0..n {
                    out[r][k] -= q * row_i[k];
                }
            }
        }
    }
    out.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| i64::try_from(x).expect("lattice entry overflow"))
                .collect()
        })
        .collect()
}

fn pivot_of(row: &[i64]) -> usize {
    row.iter()
        .position(|&x| x != 0)
        .expect("nonzero echelon row")
}

/// Whether `v` lies in the lattice with echelon basis `h`.
pub fn lattice_contains(h: &[Vec<i64>], v: &[i64]) -> bool {
    let mut v: Vec<i64> = v.to_vec();
    for row in h {
        let c = pivot_of(row);
        if v[c] % row[c] != 0 {
            return false;
        }
        let q = v[c] / row[c];
        if q != 0 {
            for k in 0..v.len() {
                v[k] -= q * row[k];
            }
        }
    }
    v.iter().all(|&x| x == 0)
}

/// Canonical representative of `v` modulo a full-rank lattice in Hermite form.
pub fn reduce_mod(h: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    let mut v = v.to_vec();
    for (i, row) in h.iter().enumerate() {
        let q = Integer::div_floor(&v[i], &row[i]);
        if q != 0 {
            for k in 0..v.len() {
                v[k] -= q * row[k];
            }
        }
    }
    v
}

/// A finite étale Q-algebra `∏ K_i` with its maximal order.
#[derive(Debug)]
pub struct EtaleAlgebra {
    components: Vec<Component>,
    offsets: Vec<usize>,
    degree: usize,
    q_table: Vec<Vec<Vec<i64>>>,
    ok_rows: Vec<Vec<BigRational>>,
    ok_inverse: Vec<Vec<BigRational>>,
    table: Vec<Vec<Vec<i64>>>,
}

impl EtaleAlgebra {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        let degree: usize = components.iter().map(|c| c.degree()).sum();
        if components.is_empty() || degree > 4 {
            return Err(invalid(format!("algebra degree {degree} outside 1..=4")));
        }
        let mut offsets = Vec::new();
        let mut q_table = vec![vec![vec![0i64; degree]; degree]; degree];
        let mut ok_rows = Vec::new();
        let mut off = 0;
        for c in &components {
            offsets.push(off);
            let d = c.degree();
            let t = c.q_table();
            for a in 0..d {
                for b in 0..d {
                    for k in 0..d {
                        q_table[off + a][off + b][off + k] = t[a][b][k];
                    }
                }
            }
            for row in c.maximal_order_rows() {
                let mut full = vec![BigRational::zero(); degree];
                for (k, x) in row.into_iter().enumerate() {
                    full[off + k] = x;
                }
                ok_rows.push(full);
            }
            off += d;
        }
        let ok_inverse = mat_inverse(&ok_rows);
        let mut alg = EtaleAlgebra {
            components,
            offsets,
            degree,
            q_table,
            ok_rows,
            ok_inverse,
            table: Vec::new(),
        };
        let mut table = vec![vec![vec![0i64; degree]; degree]; degree];
        for a in 0..degree {
            for b in 0..degree {
                let prod = alg.q_mul(&alg.ok_rows[a], &alg.ok_rows[b]);
                table[a][b] = alg.integral_coords(&prod)?;
            }
        }
        alg.table = table;
        Ok(alg)
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Integer structure constants on the Z-basis of `O_K`.
    pub fn structure_constants(&self) -> &[Vec<Vec<i64>>] {
        &self.table
    }

    /// Rows of the Z-basis of `O_K` in Q-coordinates.
    pub fn maximal_order_basis(&self) -> &[Vec<BigRational>] {
        &self.ok_rows
    }

    pub fn q_mul(&self, x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
        let n = self.degree;
        let mut out = vec![BigRational::zero(); n];
        for a in 0..n {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if y[b].is_zero() {
                    continue;
                }
                let xy = &x[a] * &y[b];
                for c in 0..n {
                    let t = self.q_table[a][b][c];
                    if t != 0 {
                        out[c] += &xy * rat(t);
                    }
                }
            }
        }
        out
    }

    /// Coordinates over the basis of `O_K` of an element given in Q-coordinates.
    pub fn ok_coords(&self, x: &[BigRational]) -> Vec<BigRational> {
        let n = self.degree;
        (0..n)
            .map(|k| (0..n).map(|i| &x[i] * &self.ok_inverse[i][k]).sum())
            .collect()
    }

    fn integral_coords_big(&self, x: &[BigRational]) -> Result<Vec<BigInt>> {
        self.ok_coords(x)
            .into_iter()
            .map(|c| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::Integrality(format!(
                        "element is not in O_K (coordinate {c})"
                    )))
                }
            })
            .collect()
    }

    pub fn integral_coords(&self, x: &[BigRational]) -> Result<Vec<i64>> {
        self.integral_coords_big(x)?
            .into_iter()
            .map(|c| {
                c.to_i64()
                    .ok_or_else(|| Error::Integrality("coordinate overflow".into()))
            })
            .collect()
    }

    /// Product of two elements given in `O_K` coordinates.
    pub fn mul(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let n = self.degree;
        let mut out = vec![0i64; n];
        for a in 0..n {
            if x[a] == 0 {
                continue;
            }
            for b in 0..n {
                if y[b] == 0 {
                    continue;
                }
                for c in 0..n {
                    out[c] += x[a] * y[b] * self.table[a][b][c];
                }
            }
        }
        out
    }

    fn mul_mod(&self, x: &[i64], y: &[i64], e: i64) -> Vec<i64> {
        self.mul(x, y)
            .into_iter()
            .map(|c| c.rem_euclid(e))
            .collect()
    }

    pub fn one(&self) -> Vec<i64> {
        let mut v = vec![BigRational::zero(); self.degree];
        for &off in &self.offsets {
            v[off] = BigRational::one();
        }
        self.integral_coords(&v).expect("1 is integral")
    }

    /// Embeds a component element (Q-coordinates) with 1 in the other slots.
    fn embed_with_ones(&self, idx: usize, x: &[BigRational]) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.degree];
        for (i, &off) in self.offsets.iter().enumerate() {
            if i == idx {
                for (k, xk) in x.iter().enumerate() {
                    v[off + k] = xk.clone();
                }
            } else {
                v[off] = BigRational::one();
            }
        }
        v
    }

    /// `h(O_K) = ∏ h(O_{K_i})`.
    pub fn class_number(&self) -> Result<u64> {
        self.components.iter().map(|c| c.class_number()).product()
    }

    /// Unit group generators in `O_K` coordinates (arbitrary precision).
    pub fn unit_generators(&self) -> Result<Vec<Vec<BigInt>>> {
        let mut out = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            for (g, _) in c.unit_generators()? {
                out.push(self.integral_coords_big(&self.embed_with_ones(i, &g))?);
            }
        }
        Ok(out)
    }

    /// Discriminant of `O_K`: `det(Tr(ω_a·ω_b))`.
    pub fn discriminant(&self) -> BigInt {
        let n = self.degree;
        let trace = |x: &[i64]| -> i64 {
            (0..n)
                .map(|a| (0..n).map(|b| x[b] * self.table[b][a][a]).sum::<i64>())
                .sum()
        };
        let mut g = vec![vec![rat(0); n]; n];
        for a in 0..n {
            for b in 0..n {
                let mut ea = vec![0; n];
                ea[a] = 1;
                let mut eb = vec![0; n];
                eb[b] = 1;
                g[a][b] = rat(trace(&self.mul(&ea, &eb)));
            }
        }
        det_rat(g).to_integer()
    }

    /// Determinant of multiplication by `x` (O_K coordinates), reduced mod `e`.
    fn norm_mod(&self, x: &[i64], e: i64) -> i64 {
        let n = self.degree;
        let mut m = vec![vec![0i128; n]; n];
        for a in 0..n {
            for b in 0..n {
                if x[b] == 0 {
                    continue;
                }
                for c in 0..n {
                    m[a][c] += (x[b] * self.table[b][a][c]) as i128;
                }
            }
        }
        det_mod(m, e as i128) as i64
    }
}

fn det_rat(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = rat(1);
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return rat(0);
        };
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        det *= &a[col][col];
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for k in col..n {
                    let d = &f * &a[col][k];
                    a[r][k] -= d;
                }
            }
        }
    }
    det
}

/// Determinant modulo `e` by cofactor expansion (n ≤ 4).
fn det_mod(m: Vec<Vec<i128>>, e: i128) -> i128 {
    fn det(m: &[Vec<i128>]) -> i128 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        let mut acc = 0;
        for c in 0..n {
            if m[0][c] == 0 {
                continue;
            }
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != c)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let s = if c % 2 == 0 { 1 } else { -1 };
            acc += s * m[0][c] * det(&minor);
        }
        acc
    }
    let reduced: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|x| x.rem_euclid(e)).collect())
        .collect();
    det(&reduced).rem_euclid(e)
}

/// A full-rank subring of `O_K`, stored as a Hermite basis in `O_K` coordinates.
#[derive(Debug, Clone)]
pub struct ZOrder {
    algebra: Arc<EtaleAlgebra>,
    basis: Vec<Vec<i64>>,
    index_in_max: u64,
}

impl PartialEq for ZOrder {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) && self.basis == other.basis
    }
}

impl ZOrder {
    /// The ring generated by `gens` (O_K coordinates) over Z.
    pub fn generated_by(algebra: Arc<EtaleAlgebra>, gens: &[Vec<i64>]) -> Result<Self> {
        let n = algebra.degree();
        let mut rows = vec![algebra.one()];
        rows.extend(gens.iter().cloned());
        let mut basis = hnf(&rows, n);
        loop {
            let mut extra = Vec::new();
            for b in &basis {
                for g in rows.iter() {
                    let prod = algebra.mul(b, g);
                    if !lattice_contains(&basis, &prod) {
                        extra.push(prod);
                    }
                }
            }
            if extra.is_empty() {
                break;
            }
            rows.extend(basis.iter().cloned());
            rows.extend(extra);
            basis = hnf(&rows, n);
            rows = basis.clone();
        }
        Self::from_lattice(algebra, basis)
    }

    fn from_lattice(algebra: Arc<EtaleAlgebra>, basis: Vec<Vec<i64>>) -> Result<Self> {
        let n = algebra.degree();
        if basis.len() != n {
            return Err(invalid(format!("lattice has rank {} < {n}", basis.len())));
        }
        let index_in_max = (0..n).map(|i| basis[i][i] as u64).product();
        Ok(Self {
            algebra,
            basis,
            index_in_max,
        })
    }

    pub fn maximal(algebra: Arc<EtaleAlgebra>) -> Self {
        let n = algebra.degree();
        let basis = (0..n)
            .map(|i| (0..n).map(|k| (k == i) as i64).collect())
            .collect();
        Self {
            algebra,
            basis,
            index_in_max: 1,
        }
    }

    pub fn algebra(&self) -> &Arc<EtaleAlgebra> {
        &self.algebra
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// Basis rows in the fixed Q-basis of the algebra.
    pub fn basis_q(&self) -> Vec<Vec<BigRational>> {
        let n = self.algebra.degree();
        self.basis
            .iter()
            .map(|row| {
                (0..n)
                    .map(|k| {
                        (0..n)
                            .map(|i| rat(row[i]) * &self.algebra.ok_rows[i][k])
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }

    pub fn index_in_max(&self) -> u64 {
        self.index_in_max
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        lattice_contains(&self.basis, v)
    }

    pub fn is_ring(&self) -> bool {
        self.contains(&self.algebra.one())
            && self.basis.iter().all(|a| {
                self.basis
                    .iter()
                    .all(|b| self.contains(&self.algebra.mul(a, b)))
            })
    }

    /// Canonical representatives of all cosets of `O_K / self`.
    pub fn quotient_reps(&self) -> Vec<Vec<i64>> {
        let n = self.algebra.degree();
        let diag: Vec<i64> = (0..n).map(|i| self.basis[i][i]).collect();
        let mut out = vec![vec![0i64; n]];
        for i in 0..n {
            let mut next = Vec::new();
            for v in &out {
                for k in 0..diag[i] {
                    let mut w = v.clone();
                    w[i] = k;
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }

    fn reduce(&self, v: &[i64]) -> Vec<i64> {
        reduce_mod(&self.basis, v)
    }

    /// Exponent of the finite group `O_K / self`.
    pub fn exponent(&self) -> i64 {
        let n = self.algebra.degree();
        let mut e = 1i64;
        for i in 0..n {
            let mut k = 1i64;
            loop {
                let v: Vec<i64> = (0..n).map(|c| if c == i { k } else { 0 }).collect();
                if self.contains(&v) {
                    break;
                }
                k += 1;
            }
            e = e.lcm(&k);
        }
        e
    }

    pub fn label(&self) -> String {
        if self.index_in_max == 1 {
            "O_K".to_string()
        } else {
            format!("B_{}", self.index_in_max)
        }
    }
}

/// π₀ terms `(coefficient, radicand)` for `√p·ζ_n`, when the field is multiquadratic.
fn weil_terms(p: i64, n: u64) -> Option<Terms> {
    let q = |a, b| ratio(a, b);
    Some(match n {
        1 => vec![(q(1, 1), p)],
        3 => vec![(q(-1, 2), p), (q(1, 2), -3 * p)],
        4 => vec![(q(1, 1), -p)],
        8 => vec![(q(1, 2), 2 * p), (q(1, 2), -2 * p)],
        12 => vec![(q(1, 2), 3 * p), (q(1, 2), -p)],
        24 => vec![
            (q(1, 4), 6 * p),
            (q(1, 4), 2 * p),
            (q(1, 4), -6 * p),
            (q(-1, 4), -2 * p),
        ],
        _ => return None,
    })
}

/// The field `Q(π)` of a Weil p-number and `π` in its Q-coordinates.
pub fn weil_field(w: &WeilRep) -> Result<(Component, Vec<BigRational>)> {
    let ctx = w.ctx();
    if ctx.a() != 1 {
        return Err(Error::Unsupported(
            "orders are built over the prime field only".into(),
        ));
    }
    let p = ctx.p() as i64;
    let sign = rat(w.sign().as_i64());
    let (comp, coords) = if p == 5 && w.n() == 5 {
        // √5·ζ = ζ(1 + 2ζ + 2ζ⁴) = 2 + ζ + 2ζ²
        (Component::Cyclotomic5, vec![rat(2), rat(1), rat(2), rat(0)])
    } else {
        let terms = weil_terms(p, w.n()).ok_or_else(|| {
            Error::Unsupported(format!(
                "Q({w}) over F_{p} is not a field of degree ≤ 4 handled here"
            ))
        })?;
        let comp = Component::from_radicands(&terms.iter().map(|t| t.1).collect::<Vec<_>>())?;
        let coords = comp.coords_of_terms(&terms)?;
        (comp, coords)
    };
    let coords: Vec<BigRational> = coords.into_iter().map(|c| c * &sign).collect();
    // π must generate the whole component
    let table = comp.q_table();
    let mut powers = vec![{
        let mut one = vec![rat(0); comp.degree()];
        one[0] = rat(1);
        one
    }];
    for _ in 1..comp.degree() {
        let last = powers.last().unwrap().clone();
        let mut next = vec![rat(0); comp.degree()];
        for a in 0..comp.degree() {
            for b in 0..comp.degree() {
                for c in 0..comp.degree() {
                    if table[a][b][c] != 0 {
                        next[c] += &last[a] * &coords[b] * rat(table[a][b][c]);
                    }
                }
            }
        }
        powers.push(next);
    }
    if det_rat(powers).is_zero() {
        return Err(Error::Integrality(format!("{w} does not generate {comp}")));
    }
    Ok((comp, coords))
}

/// The algebra `Q[π]` and the coordinates of `π₀` and `π₀²/p` over `O_K`.
pub fn frobenius_data(pi: &MultipleWeil) -> Result<(Arc<EtaleAlgebra>, Vec<i64>, Vec<i64>)> {
    let p = pi.ctx().p() as i64;
    let mut comps = Vec::new();
    let mut elems = Vec::new();
    for (w, _) in pi.factors() {
        if w.is_real() {
            return Err(invalid(
                "real factors ±√p are counted by closed formulas, not lattices",
            ));
        }
        let (c, x) = weil_field(w)?;
        comps.push(c);
        elems.push(x);
    }
    let alg = Arc::new(EtaleAlgebra::new(comps)?);
    let mut pi0 = Vec::new();
    for x in &elems {
        pi0.extend(x.iter().cloned());
    }
    let sq = alg.q_mul(&pi0, &pi0);
    let sq_p: Vec<BigRational> = sq.iter().map(|c| c / rat(p)).collect();
    let a = alg.integral_coords(&pi0)?;
    let b = alg.integral_coords(&sq_p)?;
    Ok((alg, a, b))
}

/// `R_sp = Z[π₀, π₀²/p]` inside `O_K`.
pub fn build_rsp(pi: &MultipleWeil) -> Result<ZOrder> {
    let (alg, a, b) = frobenius_data(pi)?;
    ZOrder::generated_by(alg, &[a, b])
}

/// `R = Z[π₀, p/π₀]` inside `O_K`.
pub fn build_r(pi: &MultipleWeil) -> Result<ZOrder> {
    let (alg, a, _) = frobenius_data(pi)?;
    let p = pi.ctx().p() as i64;
    let inv = q_inverse(&alg, &to_q_coords(&alg, &a))?;
    let p_over = alg.integral_coords(&inv.iter().map(|c| c * rat(p)).collect::<Vec<_>>())?;
    ZOrder::generated_by(alg, &[a, p_over])
}

fn q_inverse(alg: &EtaleAlgebra, x: &[BigRational]) -> Result<Vec<BigRational>> {
    let m = mult_matrix_rat(x, &alg.q_table);
    if det_rat(m.clone()).is_zero() {
        return Err(invalid("zero divisor has no inverse"));
    }
    // x·y = 1 ⟺ y·M = e_one where row a of M is x·e_a
    let inv = mat_inverse(&m);
    let mut one = vec![BigRational::zero(); alg.degree];
    for &off in &alg.offsets {
        one[off] = BigRational::one();
    }
    Ok((0..alg.degree)
        .map(|k| (0..alg.degree).map(|a| &one[a] * &inv[a][k]).sum())
        .collect())
}

/// All orders `B` with `R ⊆ B ⊆ O_K`, by decreasing index.
pub fn suborders_between(r: &ZOrder) -> Vec<ZOrder> {
    let reps = r.quotient_reps();
    let zero = vec![0i64; r.algebra.degree()];
    let mut seen: HashSet<BTreeSet<Vec<i64>>> = HashSet::new();
    let start: BTreeSet<Vec<i64>> = [zero].into_iter().collect();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(s) = queue.pop_front() {
        for g in &reps {
            if s.contains(g) {
                continue;
            }
            let next = subgroup_join(r, &s, g);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let mut out: Vec<ZOrder> = Vec::new();
    for s in seen {
        let mut rows: Vec<Vec<i64>> = r.basis.clone();
        rows.extend(s.into_iter());
        let lat = hnf(&rows, r.algebra.degree());
        let b = ZOrder::from_lattice(r.algebra.clone(), lat).expect("full rank");
        if b.is_ring() {
            out.push(b);
        }
    }
    out.sort_by(|a, b| {
        b.index_in_max
            .cmp(&a.index_in_max)
            .then(a.basis.cmp(&b.basis))
    });
    out
}

fn subgroup_join(r: &ZOrder, s: &BTreeSet<Vec<i64>>, g: &[i64]) -> BTreeSet<Vec<i64>> {
    let mut out = s.clone();
    let mut frontier: Vec<Vec<i64>> = s.iter().cloned().collect();
    while let Some(x) = frontier.pop() {
        let y: Vec<i64> = x.iter().zip(g).map(|(a, b)| a + b).collect();
        let y = r.reduce(&y);
        if out.insert(y.clone()) {
            frontier.push(y);
        }
    }
    out
}

/// Ingredients of the class number formula for an order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderClassData {
    pub h_max: u64,
    pub modulus: i64,
    pub units_mod_max: u64,
    pub units_mod_order: u64,
    pub unit_image: u64,
    pub unit_image_in_order: u64,
    pub h: u64,
}

/// `h(B)` with `𝔞 = e·O_K`, `e` the exponent of `O_K/B`.
pub fn class_number_order(b: &ZOrder) -> Result<u64> {
    Ok(class_number_order_data(b)?.h)
}

pub fn class_number_order_data(b: &ZOrder) -> Result<OrderClassData> {
    let alg = b.algebra.clone();
    let h_max = alg.class_number()?;
    let e = b.exponent();
    if e == 1 {
        return Ok(OrderClassData {
            h_max,
            modulus: 1,
            units_mod_max: 1,
            units_mod_order: 1,
            unit_image: 1,
            unit_image_in_order: 1,
            h: h_max,
        });
    }
    let n = alg.degree();
    let mut units_mod_max = 0u64;
    let mut units_mod_order = 0u64;
    let mut x = vec![0i64; n];
    loop {
        if alg.norm_mod(&x, e).gcd(&e) == 1 {
            units_mod_max += 1;
            if b.contains(&x) {
                units_mod_order += 1;
            }
        }
        // next vector in (Z/e)^n
        let mut i = 0;
        while i < n {
            x[i] += 1;
            if x[i] < e {
                break;
            }
            x[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    let gens: Vec<Vec<i64>> = alg
        .unit_generators()?
        .into_iter()
        .map(|g| {
            let big_e = BigInt::from(e);
            g.into_iter()
                .map(|c| c.mod_floor(&big_e).to_i64().expect("small residue"))
                .collect()
        })
        .collect();
    let one: Vec<i64> = alg.one().into_iter().map(|c| c.rem_euclid(e)).collect();
    let mut group: HashSet<Vec<i64>> = [one.clone()].into_iter().collect();
    let mut frontier = vec![one];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y = alg.mul_mod(&x, g, e);
            if group.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    let unit_image = group.len() as u64;
    let unit_image_in_order = group.iter().filter(|u| b.contains(u)).count() as u64;
    let num = h_max * units_mod_max * unit_image_in_order;
    let den = units_mod_order * unit_image;
    if num % den != 0 {
        return Err(Error::Integrality(format!(
            "h(B) = {num}/{den} for the order of index {}",
            b.index_in_max
        )));
    }
    Ok(OrderClassData {
        h_max,
        modulus: e,
        units_mod_max,
        units_mod_order,
        unit_image,
        unit_image_in_order,
        h: num / den,
    })
}

/// A generator of `O_K/R` as an `R`-module, if the quotient is cyclic.
pub fn bass_generator(r: &ZOrder) -> Option<Vec<i64>> {
    let n = r.algebra.degree();
    for x in r.quotient_reps() {
        let mut rows = r.basis.clone();
        for b in &r.basis {
            rows.push(r.algebra.mul(b, &x));
        }
        let lat = hnf(&rows, n);
        if lat.len() == n && (0..n).all(|i| lat[i][i] == 1) {
            return Some(x);
        }
    }
    None
}

/// `O_K/R` is cyclic as an `R`-module.
pub fn is_bass(r: &ZOrder) -> bool {
    bass_generator(r).is_some()
}

/// `Σ h(B)` over the orders between `R_sp` and `O_K`.
pub fn hsp_by_orders(pi: &MultipleWeil) -> Result<u64> {
    let r = build_rsp(pi)?;
    let mut total = 0;
    for b in suborders_between(&r) {
        total += class_number_order(&b)?;
    }
    Ok(total)
}

/// Q-coordinates of an element given over the basis of `O_K`.
pub fn to_q_coords(alg: &EtaleAlgebra, x: &[i64]) -> Vec<BigRational> {
    let n = alg.degree();
    (0..n)
        .map(|k| (0..n).map(|i| rat(x[i]) * &alg.ok_rows[i][k]).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weil::{canonicalize, PrimePower, Sign};

    fn w(sign: i64, n: u64, p: u64) -> WeilRep {
        canonicalize(Sign::from_i64(sign), n, PrimePower::new(p, 1).unwrap())
    }

    fn simple(sign: i64, n: u64, p: u64) -> MultipleWeil {
        MultipleWeil::simple(w(sign, n, p))
    }

    fn pair(a: WeilRep, b: WeilRep) -> MultipleWeil {
        MultipleWeil::new([(a, 1), (b, 1)]).unwrap()
    }

    #[test]
    fn hnf_basics() {
        let h = hnf(&[vec![4, 0], vec![2, 2], vec![0, 4]], 2);
        assert_eq!(h, vec![vec![2, 2], vec![0, 4]]);
        assert!(lattice_contains(&h, &[6, 10]));
        assert!(!lattice_contains(&h, &[1, 1]));
        assert_eq!(reduce_mod(&h, &[3, 5]), vec![1, 3]);
    }

    #[test]
    fn maximal_order_discriminants() {
        for (r1, r2) in [
            (2, -3),
            (3, -1),
            (5, -3),
            (6, -1),
            (10, -1),
            (15, -3),
            (21, -3),
            (7, -2),
            (5, -1),
        ] {
            let c = Component::from_radicands(&[r1, r2]).unwrap();
            let alg = EtaleAlgebra::new(vec![c.clone()]).unwrap();
            let r3 = square_decompose(r1 * r2).1;
            let expected: i64 = [r1, r2, r3]
                .iter()
                .map(|&r| crate::quadratics::field_disc(r))
                .product();
            assert_eq!(alg.discriminant(), BigInt::from(expected), "{c}");
        }
        let alg = EtaleAlgebra::new(vec![Component::Cyclotomic5]).unwrap();
        assert_eq!(alg.discriminant(), BigInt::from(125));
    }

    #[test]
    fn rsp_indices_from_tables() {
        assert_eq!(build_rsp(&simple(1, 3, 3)).unwrap().index_in_max(), 3);
        assert_eq!(build_rsp(&simple(1, 3, 2)).unwrap().index_in_max(), 1);
        assert_eq!(build_rsp(&simple(1, 3, 5)).unwrap().index_in_max(), 4);
        assert_eq!(build_rsp(&simple(1, 3, 7)).unwrap().index_in_max(), 1);
        assert_eq!(build_rsp(&simple(1, 12, 7)).unwrap().index_in_max(), 4);
        assert_eq!(build_rsp(&simple(1, 12, 5)).unwrap().index_in_max(), 1);
        assert_eq!(build_rsp(&simple(1, 8, 3)).unwrap().index_in_max(), 1);
        assert_eq!(build_rsp(&simple(1, 5, 5)).unwrap().index_in_max(), 1);
        assert_eq!(build_rsp(&simple(-1, 24, 2)).unwrap().index_in_max(), 1);
        let pi = pair(w(1, 8, 2), w(-1, 8, 2));
        assert_eq!(build_rsp(&pi).unwrap().index_in_max(), 8);
    }

    #[test]
    fn rsp_contains_frobenius() {
        for pi in [
            simple(1, 3, 5),
            pair(w(1, 4, 3), w(1, 12, 3)),
            simple(1, 12, 11),
        ] {
            let (_, a, b) = frobenius_data(&pi).unwrap();
            let r = build_rsp(&pi).unwrap();
            assert!(r.contains(&a) && r.contains(&b) && r.is_ring());
        }
    }

    #[test]
    fn product_case_orders() {
        let cases = [
            (pair(w(1, 4, 2), w(1, 8, 2)), 2, vec![2, 1]),
            (pair(w(1, 4, 2), w(-1, 8, 2)), 2, vec![2, 1]),
            (pair(w(1, 8, 2), w(-1, 8, 2)), 8, vec![8, 4, 2, 1]),
            (pair(w(1, 4, 3), w(1, 12, 3)), 6, vec![6, 3, 2, 1]),
            (pair(w(1, 4, 3), w(-1, 12, 3)), 6, vec![6, 3, 2, 1]),
            (pair(w(1, 12, 3), w(-1, 12, 3)), 12, vec![12, 4, 3, 1]),
        ];
        for (pi, idx, chain) in cases {
            let r = build_rsp(&pi).unwrap();
            assert_eq!(r.index_in_max(), idx, "{pi}");
            let subs = suborders_between(&r);
            let got: Vec<u64> = subs.iter().map(|b| b.index_in_max()).collect();
            assert_eq!(got, chain, "{pi}");
            for b in &subs {
                assert_eq!(class_number_order(b).unwrap(), 1, "{pi} {}", b.label());
            }
            assert!(is_bass(&r));
        }
    }

    #[test]
    fn zeta3_orders_carry_varpi() {
        for p in [5u64, 13, 17, 29, 37, 41] {
            let pi = simple(1, 3, p);
            let r = build_rsp(&pi).unwrap();
            let subs = suborders_between(&r);
            assert_eq!(subs.len(), 2, "p={p}");
            let hk = class_number_cm(p as i64, 3).unwrap();
            let varpi = crate::quadratics::varpi(p as i64).unwrap();
            assert_eq!(class_number_order(&subs[0]).unwrap(), varpi * hk, "p={p}");
            assert_eq!(class_number_order(&subs[1]).unwrap(), hk, "p={p}");
        }
    }

    #[test]
    fn bass_generator_for_zeta6_case() {
        let r = build_rsp(&pair(w(1, 4, 3), w(1, 12, 3))).unwrap();
        assert!(bass_generator(&r).is_some());
        let ok = ZOrder::maximal(r.algebra().clone());
        assert!(is_bass(&ok));
        assert_eq!(suborders_between(&ok).len(), 1);
    }

    #[test]
    fn build_r_is_inside_rsp() {
        let pi = simple(1, 3, 5);
        let r = build_r(&pi).unwrap();
        let rsp = build_rsp(&pi).unwrap();
        assert!(r.basis().iter().all(|v| rsp.contains(v)));
    }

    #[test]
    fn char_poly_of_sqrt2() {
        let c = Component::Quadratic { r: 2 };
        let m = mult_matrix_rat(&[rat(0), rat(1)], &c.q_table());
        assert_eq!(char_poly(&m), vec![rat(-2), rat(0)]);
    }
}
