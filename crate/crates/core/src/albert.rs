//! Evaluation oracles: rational octonions, the Albert algebra of hermitian
//! 3×3 octonion matrices, and symmetric rational k×k matrices, each with
//! `A∘B = ½(AB + BA)`.
//!
//! A nonzero value at some point certifies that the evaluated polynomial is
//! nonzero in the free Jordan algebra. A zero value certifies nothing.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::magma::{JPoly, JTerm};
use crate::{fmt_rational, int, Rational};

pub const DEFAULT_SEED: u64 = 0xA1BE27;
/// Random coordinates are drawn from `-COORD_RANGE..=COORD_RANGE`.
pub const COORD_RANGE: i64 = 3;

type Quaternion = [Rational; 4];

fn quat_mul(a: &Quaternion, b: &Quaternion) -> Quaternion {
    let [a0, a1, a2, a3] = a;
    let [b0, b1, b2, b3] = b;
    [
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ]
}

fn quat_conj(a: &Quaternion) -> Quaternion {
    [a[0].clone(), -&a[1], -&a[2], -&a[3]]
}

fn quat_add(a: &Quaternion, b: &Quaternion) -> Quaternion {
    std::array::from_fn(|i| &a[i] + &b[i])
}

fn quat_sub(a: &Quaternion, b: &Quaternion) -> Quaternion {
    std::array::from_fn(|i| &a[i] - &b[i])
}

/// Rational octonion over the basis `e0..e7`; `e0..e3` span the quaternions
/// `1, i, j, k` and `e4..e7` is the second Cayley–Dickson half.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Octonion(pub [Rational; 8]);

/// `(sign, index)` with `e_a e_b = sign · e_index`.
pub type BasisProduct = (i8, usize);

impl Octonion {
    pub fn zero() -> Octonion {
        Octonion(std::array::from_fn(|_| Rational::zero()))
    }

    pub fn from_real(r: Rational) -> Octonion {
        let mut o = Octonion::zero();
        o.0[0] = r;
        o
    }

    pub fn basis(i: usize) -> Octonion {
        let mut o = Octonion::zero();
        o.0[i] = int(1);
        o
    }

    pub fn from_ints(c: [i64; 8]) -> Octonion {
        Octonion(c.map(int))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_real(&self) -> bool {
        self.0[1..].iter().all(Zero::is_zero)
    }

    pub fn real(&self) -> &Rational {
        &self.0[0]
    }

    pub fn conj(&self) -> Octonion {
        let mut o = self.clone();
        for c in &mut o.0[1..] {
            *c = -&*c;
        }
        o
    }

    /// Sum of squared coordinates.
    pub fn norm(&self) -> Rational {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn add(&self, other: &Octonion) -> Octonion {
        Octonion(std::array::from_fn(|i| &self.0[i] + &other.0[i]))
    }

    pub fn sub(&self, other: &Octonion) -> Octonion {
        Octonion(std::array::from_fn(|i| &self.0[i] - &other.0[i]))
    }

    pub fn scale(&self, c: &Rational) -> Octonion {
        Octonion(std::array::from_fn(|i| &self.0[i] * c))
    }

    fn halves(&self) -> (Quaternion, Quaternion) {
        (
            std::array::from_fn(|i| self.0[i].clone()),
            std::array::from_fn(|i| self.0[i + 4].clone()),
        )
    }

    /// `(a,b)(c,d) = (ac − d̄b, da + bc̄)` over quaternion halves.
    pub fn cayley_dickson_mul(&self, other: &Octonion) -> Octonion {
        let (a, b) = self.halves();
        let (c, d) = other.halves();
        let lo = quat_sub(&quat_mul(&a, &c), &quat_mul(&quat_conj(&d), &b));
        let hi = quat_add(&quat_mul(&d, &a), &quat_mul(&b, &quat_conj(&c)));
        Octonion(std::array::from_fn(|i| if i < 4 { lo[i].clone() } else { hi[i - 4].clone() }))
    }

    /// Product through the basis table derived from [`Octonion::cayley_dickson_mul`].
    pub fn mul(&self, other: &Octonion) -> Octonion {
        let table = basis_table();
        let mut out = Octonion::zero();
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let (sign, k) = table[i][j];
                let p = a * b;
                if sign > 0 {
                    out.0[k] += p;
                } else {
                    out.0[k] -= p;
                }
            }
        }
        out
    }
}

/// The 8×8 table of basis products, computed once from the doubling formula.
pub fn basis_table() -> &'static [[BasisProduct; 8]; 8] {
    static TABLE: OnceLock<[[BasisProduct; 8]; 8]> = OnceLock::new();
    TABLE.get_or_init(|| {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let p = Octonion::basis(i).cayley_dickson_mul(&Octonion::basis(j));
                let (k, c) = p
                    .0
                    .iter()
                    .enumerate()
                    .find(|(_, c)| !c.is_zero())
                    .expect("basis products are nonzero");
                (if c.is_positive() { 1 } else { -1 }, k)
            })
        })
    })
}

impl fmt::Display for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = fmt_rational(&c.abs());
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (i, mag.as_str()) {
                (0, _) => f.write_str(&mag)?,
                (_, "1") => write!(f, "e{i}")?,
                _ => write!(f, "{mag}e{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// An element of a Jordan algebra usable as an evaluation target.
pub trait JordanElement: Clone + PartialEq + fmt::Display + Send + Sync {
    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn scaled(&self, c: &Rational) -> Self;
    fn circle(&self, other: &Self) -> Self;
}

/// Hermitian 3×3 octonion matrix
/// `[[d0, c2, c̄1], [c̄2, d1, c0], [c1, c̄0, d2]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlbertElement {
    pub diag: [Rational; 3],
    pub off: [Octonion; 3],
}

type OctMatrix = [[Octonion; 3]; 3];

impl AlbertElement {
    pub fn zero() -> AlbertElement {
        AlbertElement {
            diag: std::array::from_fn(|_| Rational::zero()),
            off: std::array::from_fn(|_| Octonion::zero()),
        }
    }

    pub fn identity() -> AlbertElement {
        AlbertElement {
            diag: std::array::from_fn(|_| int(1)),
            off: std::array::from_fn(|_| Octonion::zero()),
        }
    }

    /// The 27 coordinates: diagonal first, then the three octonions.
    pub fn coordinates(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.diag.to_vec();
        for o in &self.off {
            v.extend(o.0.iter().cloned());
        }
        v
    }

    pub fn from_coordinates(c: &[Rational]) -> AlbertElement {
        assert_eq!(c.len(), 27);
        AlbertElement {
            diag: std::array::from_fn(|i| c[i].clone()),
            off: std::array::from_fn(|k| Octonion(std::array::from_fn(|i| c[3 + 8 * k + i].clone()))),
        }
    }

    fn matrix(&self) -> OctMatrix {
        let d = |i: usize| Octonion::from_real(self.diag[i].clone());
        let [c0, c1, c2] = &self.off;
        [
            [d(0), c2.clone(), c1.conj()],
            [c2.conj(), d(1), c0.clone()],
            [c1.clone(), c0.conj(), d(2)],
        ]
    }

    /// Reads back a hermitian matrix; the diagonal must be real.
    fn from_matrix(m: &OctMatrix) -> AlbertElement {
        debug_assert!((0..3).all(|i| m[i][i].is_real()));
        AlbertElement {
            diag: std::array::from_fn(|i| m[i][i].real().clone()),
            off: [m[1][2].clone(), m[2][0].clone(), m[0][1].clone()],
        }
    }
}

fn oct_matmul(a: &OctMatrix, b: &OctMatrix) -> OctMatrix {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            (0..3).fold(Octonion::zero(), |acc, k| acc.add(&a[i][k].mul(&b[k][j])))
        })
    })
}

impl JordanElement for AlbertElement {
    fn zero_like(&self) -> Self {
        AlbertElement::zero()
    }

    fn is_zero(&self) -> bool {
        self.diag.iter().all(Zero::is_zero) && self.off.iter().all(Octonion::is_zero)
    }

    fn plus(&self, other: &Self) -> Self {
        AlbertElement {
            diag: std::array::from_fn(|i| &self.diag[i] + &other.diag[i]),
            off: std::array::from_fn(|i| self.off[i].add(&other.off[i])),
        }
    }

    fn scaled(&self, c: &Rational) -> Self {
        AlbertElement {
            diag: std::array::from_fn(|i| &self.diag[i] * c),
            off: std::array::from_fn(|i| self.off[i].scale(c)),
        }
    }

    fn circle(&self, other: &Self) -> Self {
        if let Some(c) = albert_circle_small(self, other) {
            return c;
        }
        let (a, b) = (self.matrix(), other.matrix());
        let ab = oct_matmul(&a, &b);
        let ba = oct_matmul(&b, &a);
        let half = crate::rat(1, 2);
        let sum: OctMatrix =
            std::array::from_fn(|i| std::array::from_fn(|j| ab[i][j].add(&ba[i][j]).scale(&half)));
        AlbertElement::from_matrix(&sum)
    }
}

impl fmt::Display for AlbertElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.diag.iter().map(fmt_rational).collect();
        write!(
            f,
            "diag({}); c0 = {}; c1 = {}; c2 = {}",
            d.join(", "),
            self.off[0],
            self.off[1],
            self.off[2]
        )
    }
}

/// Symmetric k×k rational matrix, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymMatrix {
    k: usize,
    entries: Vec<Rational>,
}

impl SymMatrix {
    pub fn zero(k: usize) -> SymMatrix {
        SymMatrix {
            k,
            entries: vec![Rational::zero(); k * k],
        }
    }

    /// Builds from the upper triangle, row by row.
    pub fn from_upper(k: usize, upper: &[Rational]) -> SymMatrix {
        assert_eq!(upper.len(), k * (k + 1) / 2);
        let mut m = SymMatrix::zero(k);
        let mut it = upper.iter();
        for i in 0..k {
            for j in i..k {
                let v = it.next().unwrap().clone();
                m.entries[i * k + j] = v.clone();
                m.entries[j * k + i] = v;
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.k + j]
    }

    fn matmul(&self, other: &SymMatrix) -> Vec<Rational> {
        let k = self.k;
        let mut out = vec![Rational::zero(); k * k];
        for i in 0..k {
            for l in 0..k {
                let a = &self.entries[i * k + l];
                if a.is_zero() {
                    continue;
                }
                for j in 0..k {
                    out[i * k + j] += a * &other.entries[l * k + j];
                }
            }
        }
        out
    }
}

impl JordanElement for SymMatrix {
    fn zero_like(&self) -> Self {
        SymMatrix::zero(self.k)
    }

    fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    fn plus(&self, other: &Self) -> Self {
        SymMatrix {
            k: self.k,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    fn scaled(&self, c: &Rational) -> Self {
        SymMatrix {
            k: self.k,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    fn circle(&self, other: &Self) -> Self {
        if let Some(c) = sym_circle_small(self, other) {
            return c;
        }
        let ab = self.matmul(other);
        let k = self.k;
        let half = crate::rat(1, 2);
        let mut entries = vec![Rational::zero(); k * k];
        for i in 0..k {
            for j in 0..k {
                // (BA)_{ij} = (AB)_{ji} for symmetric A, B.
                entries[i * k + j] = (&ab[i * k + j] + &ab[j * k + i]) * &half;
            }
        }
        SymMatrix { k, entries }
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.k {
            if i > 0 {
                f.write_str("; ")?;
            }
            let row: Vec<String> = (0..self.k).map(|j| fmt_rational(self.get(i, j))).collect();
            f.write_str(&row.join(", "))?;
        }
        f.write_str("]")
    }
}

/// Numerators over a common denominator, if all fit in `i128`.
fn small_scaled(coords: &[Rational]) -> Option<(Vec<i128>, i128)> {
    let den = coords.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let nums = coords
        .iter()
        .map(|c| (c.numer() * (&den / c.denom())).to_i128())
        .collect::<Option<Vec<_>>>()?;
    Some((nums, den.to_i128()?))
}

fn small_to_rational(nums: &[i128], den: i128) -> Vec<Rational> {
    nums.iter()
        .map(|&n| Rational::new(BigInt::from(n), BigInt::from(den)))
        .collect()
}

type SmallOct = [i128; 8];

fn small_oct_mul_add(acc: &mut SmallOct, a: &SmallOct, b: &SmallOct) -> Option<()> {
    let table = basis_table();
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y == 0 {
                continue;
            }
            let (sign, k) = table[i][j];
            let p = x.checked_mul(y)?;
            acc[k] = if sign > 0 { acc[k].checked_add(p)? } else { acc[k].checked_sub(p)? };
        }
    }
    Some(())
}

fn small_albert_matrix(c: &[i128]) -> [[SmallOct; 3]; 3] {
    let real = |i: usize| {
        let mut o = [0i128; 8];
        o[0] = c[i];
        o
    };
    let oct = |k: usize| -> SmallOct { std::array::from_fn(|i| c[3 + 8 * k + i]) };
    let conj = |o: SmallOct| -> SmallOct { std::array::from_fn(|i| if i == 0 { o[0] } else { -o[i] }) };
    [
        [real(0), oct(2), conj(oct(1))],
        [conj(oct(2)), real(1), oct(0)],
        [oct(1), conj(oct(0)), real(2)],
    ]
}

/// `A∘B` in `i128` arithmetic; `None` on overflow.
fn albert_circle_small(a: &AlbertElement, b: &AlbertElement) -> Option<AlbertElement> {
    let (an, ad) = small_scaled(&a.coordinates())?;
    let (bn, bd) = small_scaled(&b.coordinates())?;
    let (ma, mb) = (small_albert_matrix(&an), small_albert_matrix(&bn));
    let entry = |i: usize, j: usize| -> Option<SmallOct> {
        let mut acc = [0i128; 8];
        for k in 0..3 {
            small_oct_mul_add(&mut acc, &ma[i][k], &mb[k][j])?;
            small_oct_mul_add(&mut acc, &mb[i][k], &ma[k][j])?;
        }
        Some(acc)
    };
    let mut out: Vec<i128> = Vec::with_capacity(27);
    for i in 0..3 {
        out.push(entry(i, i)?[0]);
    }
    for (i, j) in [(1, 2), (2, 0), (0, 1)] {
        out.extend_from_slice(&entry(i, j)?);
    }
    let den = ad.checked_mul(bd)?.checked_mul(2)?;
    Some(AlbertElement::from_coordinates(&small_to_rational(&out, den)))
}

/// `A∘B` in `i128` arithmetic; `None` on overflow.
fn sym_circle_small(a: &SymMatrix, b: &SymMatrix) -> Option<SymMatrix> {
    let k = a.k;
    let (an, ad) = small_scaled(&a.entries)?;
    let (bn, bd) = small_scaled(&b.entries)?;
    let mut out = vec![0i128; k * k];
    for i in 0..k {
        for j in i..k {
            let mut acc = 0i128;
            for l in 0..k {
                acc = acc.checked_add(an[i * k + l].checked_mul(bn[l * k + j])?)?;
                acc = acc.checked_add(bn[i * k + l].checked_mul(an[l * k + j])?)?;
            }
            out[i * k + j] = acc;
            out[j * k + i] = acc;
        }
    }
    let den = ad.checked_mul(bd)?.checked_mul(2)?;
    Some(SymMatrix {
        k,
        entries: small_to_rational(&out, den),
    })
}

/// Evaluates `f` with generator `i` sent to `point[i]`. The point must be
/// nonempty and cover every generator of `f`. Shared subtrees are evaluated
/// once.
pub fn evaluate<E: JordanElement>(f: &JPoly, point: &[E]) -> Result<E> {
    let Some(first) = point.first() else {
        return Err(Error::MissingAssignment("x".into()));
    };
    let mut memo: HashMap<JTerm, E> = HashMap::new();
    let mut acc = first.zero_like();
    for (t, c) in f.iter() {
        let v = eval_term(t, point, &mut memo)?;
        acc = acc.plus(&v.scaled(c));
    }
    Ok(acc)
}

fn eval_term<E: JordanElement>(t: &JTerm, point: &[E], memo: &mut HashMap<JTerm, E>) -> Result<E> {
    if let Some(g) = t.as_leaf() {
        return point
            .get(g.index())
            .cloned()
            .ok_or_else(|| Error::MissingAssignment(g.to_string()));
    }
    if let Some(v) = memo.get(t) {
        return Ok(v.clone());
    }
    let (a, b) = t.children().expect("non-leaf");
    let va = eval_term(a, point, memo)?;
    let vb = eval_term(b, point, memo)?;
    let v = va.circle(&vb);
    memo.insert(t.clone(), v.clone());
    Ok(v)
}

/// Evaluates `f` at every point, spreading points over threads.
pub fn evaluate_all<E: JordanElement>(f: &JPoly, points: &[Vec<E>]) -> Result<Vec<E>> {
    if points.is_empty() {
        return Ok(Vec::new());
    }
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(points.len());
    let chunk = points.len().div_ceil(threads);
    let parts: Vec<Result<Vec<E>>> = std::thread::scope(|s| {
        let handles: Vec<_> = points
            .chunks(chunk)
            .map(|ps| s.spawn(move || ps.iter().map(|p| evaluate(f, p)).collect::<Result<Vec<E>>>()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("evaluation thread panicked")).collect()
    });
    let mut out = Vec::with_capacity(points.len());
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

fn coord(rng: &mut ChaCha8Rng) -> Rational {
    int(rng.gen_range(-COORD_RANGE..=COORD_RANGE))
}

/// `count` points of `gens` random Albert elements each.
pub fn albert_points(seed: u64, count: usize, gens: usize) -> Vec<Vec<AlbertElement>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..gens)
                .map(|_| {
                    let c: Vec<Rational> = (0..27).map(|_| coord(&mut rng)).collect();
                    AlbertElement::from_coordinates(&c)
                })
                .collect()
        })
        .collect()
}

/// `count` points of `gens` random symmetric k×k matrices each.
pub fn sym_points(seed: u64, count: usize, gens: usize, k: usize) -> Vec<Vec<SymMatrix>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = k * (k + 1) / 2;
    (0..count)
        .map(|_| {
            (0..gens)
                .map(|_| {
                    let c: Vec<Rational> = (0..n).map(|_| coord(&mut rng)).collect();
                    SymMatrix::from_upper(k, &c)
                })
                .collect()
        })
        .collect()
}

pub fn random_octonions(seed: u64, count: usize) -> Vec<Octonion> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| Octonion(std::array::from_fn(|_| coord(&mut rng))))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Albert,
    Symmetric { k: usize },
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Albert => f.write_str("H3(O)"),
            Backend::Symmetric { k } => write!(f, "H{k}(Q)"),
        }
    }
}

/// Value of a polynomial at one seeded point.
#[derive(Clone, Debug, Serialize)]
pub struct PointValue {
    pub point: usize,
    pub zero: bool,
    pub value: String,
}

/// Evaluates `f` at `count` seeded points of `backend`, one random element
/// per generator of `f` (at least one).
pub fn seeded_values(f: &JPoly, backend: Backend, seed: u64, count: usize) -> Result<Vec<PointValue>> {
    let gens = f.alphabet_width().max(1);
    fn collect<E: JordanElement>(vals: Vec<E>) -> Vec<PointValue> {
        vals.into_iter()
            .enumerate()
            .map(|(point, v)| PointValue {
                point,
                zero: v.is_zero(),
                value: v.to_string(),
            })
            .collect()
    }
    Ok(match backend {
        Backend::Albert => collect(evaluate_all(f, &albert_points(seed, count, gens))?),
        Backend::Symmetric { k } => {
            if k == 0 {
                return Err(Error::InvalidArgument("matrix size must be positive".into()));
            }
            collect(evaluate_all(f, &sym_points(seed, count, gens, k))?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assoc::Generator;
    use crate::magma::jmul;

    #[test]
    fn table_matches_formula() {
        let t = basis_table();
        for i in 1..8 {
            assert_eq!(t[0][i], (1, i));
            assert_eq!(t[i][0], (1, i));
            assert_eq!(t[i][i], (-1, 0));
        }
        // i j = k in the quaternion half.
        assert_eq!(t[1][2], (1, 3));
        let xs = random_octonions(7, 40);
        for p in xs.chunks(2) {
            assert_eq!(p[0].mul(&p[1]), p[0].cayley_dickson_mul(&p[1]));
        }
    }

    #[test]
    fn octonion_laws() {
        let xs = random_octonions(DEFAULT_SEED, 200);
        for p in xs.chunks(2) {
            let (a, b) = (&p[0], &p[1]);
            let ab = a.mul(b);
            assert_eq!(ab.norm(), a.norm() * b.norm());
            assert_eq!(a.mul(a).mul(b), a.mul(&ab));
            assert_eq!(ab.mul(b), a.mul(&b.mul(b)));
            assert_eq!(Octonion::basis(0).mul(a), *a);
            assert_eq!(ab.conj(), b.conj().mul(&a.conj()));
        }
        let e = Octonion::basis;
        assert_ne!(e(1).mul(&e(2)).mul(&e(4)), e(1).mul(&e(2).mul(&e(4))));
    }

    #[test]
    fn small_products_match_exact() {
        for p in albert_points(11, 10, 2) {
            let (a, b) = (&p[0], &p[1].scaled(&crate::rat(1, 3)));
            let (ma, mb) = (a.matrix(), b.matrix());
            let ab = oct_matmul(&ma, &mb);
            let ba = oct_matmul(&mb, &ma);
            let sum: OctMatrix = std::array::from_fn(|i| {
                std::array::from_fn(|j| ab[i][j].add(&ba[i][j]).scale(&crate::rat(1, 2)))
            });
            assert_eq!(albert_circle_small(a, b).unwrap(), AlbertElement::from_matrix(&sum));
        }
        for p in sym_points(11, 10, 2, 4) {
            let (a, b) = (&p[0], &p[1].scaled(&crate::rat(-2, 5)));
            let ab = a.matmul(b);
            let ba = b.matmul(a);
            let want: Vec<Rational> = ab.iter().zip(&ba).map(|(x, y)| (x + y) * crate::rat(1, 2)).collect();
            assert_eq!(sym_circle_small(a, b).unwrap().entries, want);
        }
        let huge = AlbertElement::identity().scaled(&int(1i64 << 62)).scaled(&int(1i64 << 62));
        assert!(albert_circle_small(&huge, &huge).is_none());
        assert_eq!(huge.circle(&AlbertElement::identity()), huge);
    }

    #[test]
    fn albert_identity_and_closure() {
        let p = &albert_points(1, 1, 1)[0][0];
        assert_eq!(AlbertElement::identity().circle(p), *p);
        assert_eq!(AlbertElement::from_coordinates(&p.coordinates()), *p);
    }

    fn jordan_instance() -> JPoly {
        let x = JPoly::generator(Generator::X);
        let y = JPoly::generator(Generator::Y);
        let x2 = jmul(&x, &x);
        &jmul(&jmul(&x2, &y), &x) - &jmul(&x2, &jmul(&y, &x))
    }

    #[test]
    fn backends_are_jordan() {
        let f = jordan_instance();
        for v in evaluate_all(&f, &albert_points(DEFAULT_SEED, 20, 2)).unwrap() {
            assert!(v.is_zero());
        }
        for v in evaluate_all(&f, &sym_points(DEFAULT_SEED, 20, 2, 4)).unwrap() {
            assert!(v.is_zero());
        }
        for p in albert_points(3, 10, 2) {
            assert_eq!(p[0].circle(&p[1]), p[1].circle(&p[0]));
        }
    }

    #[test]
    fn nonassociative_products_are_visible() {
        let x = JPoly::generator(Generator::X);
        let y = JPoly::generator(Generator::Y);
        let f = &jmul(&jmul(&x, &x), &y) - &jmul(&x, &jmul(&x, &y));
        let vals = seeded_values(&f, Backend::Symmetric { k: 3 }, 5, 5).unwrap();
        assert!(vals.iter().any(|v| !v.zero));
    }

    #[test]
    fn missing_assignment() {
        let f = JPoly::generator(Generator::Z);
        let p = &sym_points(0, 1, 2, 2)[0];
        assert!(matches!(evaluate(&f, p), Err(Error::MissingAssignment(_))));
        assert!(matches!(evaluate::<SymMatrix>(&f, &[]), Err(Error::MissingAssignment(_))));
    }
}
