//! Free commutative nonassociative algebra: canonical commutative binary
//! trees, their rational linear combinations, the operators `R`, `U`, `D`,
//! and the homomorphism `γ` into the free associative algebra.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Neg, Sub};
use std::rc::Rc;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::assoc::{AssocPoly, Generator, MultiDegree, Word};
use crate::{fmt_rational, Rational};

#[derive(Debug)]
enum Node {
    Leaf(Generator),
    Pair {
        left: JTerm,
        right: JTerm,
        degree: u32,
    },
}

#[derive(Debug)]
struct Inner {
    node: Node,
    hash: u64,
}

/// A monomial of the free commutative magma: a binary tree whose children
/// satisfy `left ≤ right` at every node (degree first, then recursive
/// lexicographic on `(left, right)`, leaves by generator index).
#[derive(Clone, Debug)]
pub struct JTerm(Arc<Inner>);

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl JTerm {
    pub fn leaf(g: Generator) -> JTerm {
        JTerm(Arc::new(Inner {
            node: Node::Leaf(g),
            hash: mix(g.0 as u64 + 1),
        }))
    }

    /// The canonical product node of `a` and `b`.
    pub fn mul(a: &JTerm, b: &JTerm) -> JTerm {
        let (left, right) = if a <= b { (a, b) } else { (b, a) };
        let hash = mix(left.0.hash.rotate_left(17) ^ right.0.hash.wrapping_mul(31));
        JTerm(Arc::new(Inner {
            node: Node::Pair {
                left: left.clone(),
                right: right.clone(),
                degree: left.degree() + right.degree(),
            },
            hash,
        }))
    }

    pub fn degree(&self) -> u32 {
        match &self.0.node {
            Node::Leaf(_) => 1,
            Node::Pair { degree, .. } => *degree,
        }
    }

    pub fn as_leaf(&self) -> Option<Generator> {
        match &self.0.node {
            Node::Leaf(g) => Some(*g),
            Node::Pair { .. } => None,
        }
    }

    pub fn children(&self) -> Option<(&JTerm, &JTerm)> {
        match &self.0.node {
            Node::Leaf(_) => None,
            Node::Pair { left, right, .. } => Some((left, right)),
        }
    }

    /// Leaf generators in left-to-right tree order.
    pub fn leaves(&self) -> Vec<Generator> {
        let mut out = Vec::with_capacity(self.degree() as usize);
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Generator>) {
        match &self.0.node {
            Node::Leaf(g) => out.push(*g),
            Node::Pair { left, right, .. } => {
                left.collect_leaves(out);
                right.collect_leaves(out);
            }
        }
    }

    pub fn multidegree(&self) -> MultiDegree {
        let leaves = self.leaves();
        let w = leaves.iter().map(|g| g.index() + 1).max().unwrap_or(0);
        let mut v = vec![0u32; w];
        for g in leaves {
            v[g.index()] += 1;
        }
        MultiDegree::new(v)
    }

    /// Rebuilds the tree through the canonical constructor; the identity on
    /// every value of this type.
    pub fn canonical(&self) -> JTerm {
        match &self.0.node {
            Node::Leaf(g) => JTerm::leaf(*g),
            Node::Pair { left, right, .. } => JTerm::mul(&left.canonical(), &right.canonical()),
        }
    }

    /// Replaces every leaf by the term returned from `f`, re-canonicalizing.
    pub fn substitute(&self, f: &mut impl FnMut(Generator) -> JTerm) -> JTerm {
        match &self.0.node {
            Node::Leaf(g) => f(*g),
            Node::Pair { left, right, .. } => {
                let l = left.substitute(f);
                let r = right.substitute(f);
                JTerm::mul(&l, &r)
            }
        }
    }

    /// Replaces the leaves, in tree order, by `images[i]`.
    pub fn substitute_positions(&self, images: &[JTerm]) -> JTerm {
        let mut i = 0;
        self.substitute(&mut |_| {
            let t = images[i].clone();
            i += 1;
            t
        })
    }

    fn fmt_inner(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        match &self.0.node {
            Node::Leaf(g) => write!(f, "{g}"),
            Node::Pair { left, right, .. } => {
                if parens {
                    f.write_str("(")?;
                }
                left.fmt_inner(f, false)?;
                f.write_str("*")?;
                right.fmt_inner(f, right.as_leaf().is_none())?;
                if parens {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl PartialEq for JTerm {
    fn eq(&self, other: &JTerm) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.0.hash != other.0.hash {
            return false;
        }
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for JTerm {}

impl Hash for JTerm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl Ord for JTerm {
    fn cmp(&self, other: &JTerm) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        match (&self.0.node, &other.0.node) {
            (Node::Leaf(a), Node::Leaf(b)) => a.cmp(b),
            (
                Node::Pair {
                    left: l1,
                    right: r1,
                    ..
                },
                Node::Pair {
                    left: l2,
                    right: r2,
                    ..
                },
            ) => l1.cmp(l2).then_with(|| r1.cmp(r2)),
            // equal degree rules out leaf/pair mixtures
            (Node::Leaf(_), _) => Ordering::Less,
            (_, Node::Leaf(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for JTerm {
    fn partial_cmp(&self, other: &JTerm) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for JTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_inner(f, false)
    }
}

/// Rational linear combination of magma monomials.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct JPoly {
    terms: BTreeMap<JTerm, Rational>,
}

impl JPoly {
    pub fn zero() -> JPoly {
        JPoly::default()
    }

    pub fn generator(g: Generator) -> JPoly {
        JPoly::monomial(JTerm::leaf(g))
    }

    pub fn monomial(t: JTerm) -> JPoly {
        JPoly::term(t, Rational::one())
    }

    pub fn term(t: JTerm, c: Rational) -> JPoly {
        let mut p = JPoly::zero();
        p.add_term(t, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (JTerm, Rational)>) -> JPoly {
        let mut p = JPoly::zero();
        for (t, c) in terms {
            p.add_term(t, c);
        }
        p
    }

    pub fn add_term(&mut self, t: JTerm, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &JPoly, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (t, a) in &other.terms {
            self.add_term(t.clone(), a * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&JTerm, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, t: &JTerm) -> Rational {
        self.terms.get(t).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> JPoly {
        if c.is_zero() {
            return JPoly::zero();
        }
        JPoly {
            terms: self.terms.iter().map(|(t, a)| (t.clone(), a * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> JPoly {
        self.scale(&Rational::from_integer(BigInt::from(c)))
    }

    /// Multidegree shared by every term; `None` for zero or mixed input.
    pub fn multidegree(&self) -> Option<MultiDegree> {
        let mut it = self.terms.keys();
        let d = it.next()?.multidegree();
        it.all(|t| t.multidegree() == d).then_some(d)
    }

    /// Multihomogeneous slices keyed by multidegree.
    pub fn slices(&self) -> BTreeMap<MultiDegree, JPoly> {
        let mut out: BTreeMap<MultiDegree, JPoly> = BTreeMap::new();
        for (t, c) in &self.terms {
            out.entry(t.multidegree())
                .or_default()
                .add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn alphabet_width(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|t| t.leaves().into_iter().map(|g| g.index() + 1))
            .max()
            .unwrap_or(0)
    }

    /// Algebra endomorphism sending generator `i` to `images[i]`.
    pub fn substitute(&self, images: &[JPoly]) -> crate::Result<JPoly> {
        fn term_image(
            t: &JTerm,
            images: &[JPoly],
            memo: &mut HashMap<JTerm, JPoly>,
        ) -> crate::Result<JPoly> {
            if let Some(p) = memo.get(t) {
                return Ok(p.clone());
            }
            let p = match t.children() {
                None => {
                    let g = t.as_leaf().unwrap();
                    images
                        .get(g.index())
                        .cloned()
                        .ok_or_else(|| crate::Error::MissingAssignment(g.to_string()))?
                }
                Some((l, r)) => jmul(&term_image(l, images, memo)?, &term_image(r, images, memo)?),
            };
            memo.insert(t.clone(), p.clone());
            Ok(p)
        }
        let mut memo = HashMap::new();
        let mut out = JPoly::zero();
        for (t, c) in &self.terms {
            out.add_scaled(&term_image(t, images, &mut memo)?, c);
        }
        Ok(out)
    }
}

impl Add for &JPoly {
    type Output = JPoly;
    fn add(self, rhs: &JPoly) -> JPoly {
        let mut out = self.clone();
        for (t, c) in &rhs.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }
}

impl Sub for &JPoly {
    type Output = JPoly;
    fn sub(self, rhs: &JPoly) -> JPoly {
        let mut out = self.clone();
        for (t, c) in &rhs.terms {
            out.add_term(t.clone(), -c);
        }
        out
    }
}

impl Neg for &JPoly {
    type Output = JPoly;
    fn neg(self) -> JPoly {
        JPoly {
            terms: self.terms.iter().map(|(t, c)| (t.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for JPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            if !a.is_one() {
                write!(f, "{}*", fmt_rational(&a))?;
                if t.as_leaf().is_none() {
                    write!(f, "({t})")?;
                    continue;
                }
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Product `f•g`, the bilinear extension of the canonical node constructor.
pub fn jmul(f: &JPoly, g: &JPoly) -> JPoly {
    let mut out = JPoly::zero();
    for (a, c) in &f.terms {
        for (b, d) in &g.terms {
            out.add_term(JTerm::mul(a, b), c * d);
        }
    }
    out
}

/// Left-normed power `a^s = (a^{s-1})•a`; `s ≥ 1`.
pub fn jpow(a: &JPoly, s: u32) -> JPoly {
    assert!(s >= 1, "jpow exponent must be positive");
    let mut acc = a.clone();
    for _ in 1..s {
        acc = jmul(&acc, a);
    }
    acc
}

/// Power of a single generator as a monomial.
pub fn gen_pow(g: Generator, s: u32) -> JTerm {
    let x = JTerm::leaf(g);
    let mut acc = x.clone();
    for _ in 1..s {
        acc = JTerm::mul(&acc, &x);
    }
    acc
}

/// `f R_a = f•a`.
pub fn apply_r(f: &JPoly, a: &JPoly) -> JPoly {
    jmul(f, a)
}

/// Linearized quadratic operator `f U_{a,b} = (f•a)•b + (f•b)•a − f•(a•b)`.
pub fn apply_u(f: &JPoly, a: &JPoly, b: &JPoly) -> JPoly {
    let fa = jmul(f, a);
    let fb = jmul(f, b);
    let mut out = jmul(&fa, b);
    out = &out + &jmul(&fb, a);
    &out - &jmul(f, &jmul(a, b))
}

/// Inner derivation `f D_{a,b} = (f•a)•b − (f•b)•a`.
pub fn apply_d(f: &JPoly, a: &JPoly, b: &JPoly) -> JPoly {
    &jmul(&jmul(f, a), b) - &jmul(&jmul(f, b), a)
}

pub(crate) type IntImage = Rc<Vec<(Word, i64)>>;

thread_local! {
    static GAMMA_MEMO: RefCell<HashMap<JTerm, IntImage>> = RefCell::new(HashMap::new());
}

const GAMMA_MEMO_CAP: usize = 400_000;

/// `2^{deg−1} γ(t)`, an integer combination of words.
pub(crate) fn gamma_term_int(t: &JTerm) -> IntImage {
    if let Some(g) = t.as_leaf() {
        return Rc::new(vec![(Word::from_letters([g]), 1)]);
    }
    if let Some(hit) = GAMMA_MEMO.with(|m| m.borrow().get(t).cloned()) {
        return hit;
    }
    let (l, r) = t.children().unwrap();
    let gl = gamma_term_int(l);
    let gr = gamma_term_int(r);
    let mut acc: HashMap<Word, i64> = HashMap::with_capacity(2 * gl.len() * gr.len());
    for (u, a) in gl.iter() {
        for (v, b) in gr.iter() {
            *acc.entry(u.concat(v)).or_insert(0) += a * b;
            *acc.entry(v.concat(u)).or_insert(0) += a * b;
        }
    }
    let mut v: Vec<(Word, i64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
    v.sort();
    let img = Rc::new(v);
    GAMMA_MEMO.with(|m| {
        let mut m = m.borrow_mut();
        if m.len() > GAMMA_MEMO_CAP {
            m.clear();
        }
        m.insert(t.clone(), img.clone());
    });
    img
}

/// Image of a single monomial under `γ`.
pub fn gamma_term(t: &JTerm) -> AssocPoly {
    let den = Rational::from_integer(BigInt::one() << (t.degree() - 1));
    AssocPoly::from_terms(
        gamma_term_int(t)
            .iter()
            .map(|(w, c)| (w.clone(), Rational::from_integer(BigInt::from(*c)) / &den)),
    )
}

/// The canonical homomorphism `γ`: leaves map to generators and nodes to the
/// special product `a∘b = ½(ab + ba)`.
pub fn gamma(f: &JPoly) -> AssocPoly {
    let mut by_degree: BTreeMap<u32, Vec<(&JTerm, &Rational)>> = BTreeMap::new();
    for (t, c) in &f.terms {
        by_degree.entry(t.degree()).or_default().push((t, c));
    }
    let mut out = AssocPoly::zero();
    for (deg, group) in by_degree {
        let lcm = group
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let scaled: Option<Vec<i64>> = group
            .iter()
            .map(|(_, c)| (c.numer() * (&lcm / c.denom())).to_i64())
            .collect();
        let den = lcm << (deg - 1);
        match scaled {
            Some(ints) => {
                let mut acc: HashMap<Word, i128> = HashMap::new();
                for ((t, _), a) in group.iter().zip(ints) {
                    for (w, c) in gamma_term_int(t).iter() {
                        *acc.entry(w.clone()).or_insert(0) += a as i128 * *c as i128;
                    }
                }
                for (w, c) in acc {
                    if c != 0 {
                        out.add_term(w, Rational::new(BigInt::from(c), den.clone()));
                    }
                }
            }
            None => {
                let pow = Rational::from_integer(BigInt::one() << (deg - 1));
                for (t, c) in group {
                    for (w, k) in gamma_term_int(t).iter() {
                        out.add_term(w.clone(), c * Rational::from_integer(BigInt::from(*k)) / &pow);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assoc::circle;
    use crate::{int, rat};

    fn x() -> JPoly {
        JPoly::generator(Generator::X)
    }
    fn y() -> JPoly {
        JPoly::generator(Generator::Y)
    }
    fn z() -> JPoly {
        JPoly::generator(Generator::Z)
    }
    fn w(s: &str) -> Word {
        Word::from_xyz(s).unwrap()
    }

    #[test]
    fn jmul_commutes() {
        assert_eq!(jmul(&x(), &y()), jmul(&y(), &x()));
        assert_eq!(jmul(&x(), &y()).len(), 1);
        let f = jmul(&jmul(&x(), &y()), &z());
        assert_eq!(f.multidegree(), Some(MultiDegree::new(vec![1, 1, 1])));
    }

    #[test]
    fn jpow_left_normed() {
        assert_eq!(jpow(&x(), 1), x());
        assert_eq!(jpow(&x(), 3), jmul(&jmul(&x(), &x()), &x()));
        let x2 = jpow(&x(), 2);
        assert_ne!(jmul(&x2, &x2), jpow(&x(), 4));
    }

    #[test]
    fn r_u_d_definitions() {
        assert_eq!(apply_r(&x(), &y()), jmul(&x(), &y()));
        assert!(apply_r(&JPoly::zero(), &y()).is_zero());
        assert!(apply_d(&z(), &x(), &x()).is_zero());
        assert_eq!(
            apply_d(&x(), &y(), &z()),
            &jmul(&jmul(&x(), &y()), &z()) - &jmul(&jmul(&x(), &z()), &y())
        );
        let f = jmul(&y(), &z());
        let a = x();
        assert_eq!(
            apply_u(&f, &a, &a),
            &jmul(&jmul(&f, &a), &a).scale_int(2) - &jmul(&f, &jmul(&a, &a))
        );
    }

    #[test]
    fn gamma_examples() {
        let g = gamma(&jmul(&x(), &y()));
        assert_eq!(g.coeff(&w("xy")), rat(1, 2));
        assert_eq!(g.coeff(&w("yx")), rat(1, 2));
        // yU_{x,z} ↦ ½(xyz + zyx)
        let u = gamma(&apply_u(&y(), &x(), &z()));
        let expect = AssocPoly::from_terms([(w("xyz"), rat(1, 2)), (w("zyx"), rat(1, 2))]);
        assert_eq!(u, expect);
        // xU_{x,x} ↦ x³
        assert_eq!(gamma(&apply_u(&x(), &x(), &x())), AssocPoly::word(w("xxx")));
        // γ(x D_{y,z}) = ¼[[y,z],x]-type commutator action, brute-force expansion
        let d = gamma(&apply_d(&x(), &y(), &z()));
        let (gx, gy, gz) = (gamma(&x()), gamma(&y()), gamma(&z()));
        let brute = &circle(&circle(&gx, &gy), &gz) - &circle(&circle(&gx, &gz), &gy);
        assert_eq!(d, brute);
        let yz = AssocPoly::commutator(&gy, &gz);
        let quarter = rat(1, 4);
        assert_eq!(d, AssocPoly::commutator(&gx, &yz).scale(&quarter));
    }

    #[test]
    fn gamma_handles_rational_and_mixed_degree() {
        let f = &jmul(&x(), &y()).scale(&rat(2, 3)) + &x().scale(&int(5));
        let g = gamma(&f);
        assert_eq!(g.coeff(&w("xy")), rat(1, 3));
        assert_eq!(g.coeff(&w("x")), int(5));
    }

    #[test]
    fn display_round_trip_shape() {
        let t = jmul(&jmul(&x(), &y()), &jmul(&z(), &z()));
        assert_eq!(t.to_string(), "x*y*(z*z)");
        assert_eq!(jpow(&x(), 3).to_string(), "x*(x*x)");
        let p = &jmul(&x(), &y()).scale(&rat(-1, 2)) + &x();
        assert_eq!(p.to_string(), "x - 1/2*(x*y)");
    }
}
