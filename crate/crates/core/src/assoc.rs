//! Free associative algebra over an ordered alphabet, with the reversal
//! involution and the special Jordan product `a∘b = ½(ab + ba)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::{fmt_rational, Rational};

/// A generator of the free algebra. Indices 0, 1, 2 render as `x`, `y`, `z`;
/// larger indices render as `g3`, `g4`, ...
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Generator(pub u8);

impl Generator {
    pub const X: Generator = Generator(0);
    pub const Y: Generator = Generator(1);
    pub const Z: Generator = Generator(2);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => f.write_str("x"),
            1 => f.write_str("y"),
            2 => f.write_str("z"),
            n => write!(f, "g{n}"),
        }
    }
}

/// Per-generator exponent vector. Trailing zeros are not stored, so
/// `(2,1,0)` and `(2,1)` compare equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct MultiDegree(Vec<u32>);

impl MultiDegree {
    pub fn new(counts: impl Into<Vec<u32>>) -> Self {
        let mut v = counts.into();
        while v.last() == Some(&0) {
            v.pop();
        }
        MultiDegree(v)
    }

    pub fn zero() -> Self {
        MultiDegree(Vec::new())
    }

    pub fn unit(g: Generator) -> Self {
        let mut v = vec![0; g.index() + 1];
        v[g.index()] = 1;
        MultiDegree(v)
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Number of generator slots carrying data (index of the last nonzero + 1).
    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &MultiDegree) -> bool {
        (0..self.width()).all(|i| self.get(i) <= other.get(i))
    }

    /// Componentwise difference; `None` unless `other ≤ self`.
    pub fn checked_sub(&self, other: &MultiDegree) -> Option<MultiDegree> {
        if !other.le(self) {
            return None;
        }
        let w = self.width();
        Some(MultiDegree::new(
            (0..w).map(|i| self.get(i) - other.get(i)).collect::<Vec<_>>(),
        ))
    }

    /// Number of generators with a nonzero count.
    pub fn support(&self) -> usize {
        self.0.iter().filter(|&&c| c > 0).count()
    }

    /// All nonzero multidegrees `e` with `e ≤ self`, in lexicographic order.
    pub fn sub_degrees(&self) -> Vec<MultiDegree> {
        let mut out = vec![Vec::new()];
        for i in 0..self.width() {
            let mut next = Vec::new();
            for prefix in &out {
                for c in 0..=self.get(i) {
                    let mut p: Vec<u32> = prefix.clone();
                    p.push(c);
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter()
            .map(MultiDegree::new)
            .filter(|d| !d.is_zero())
            .collect()
    }

    /// Multinomial coefficient `total! / Π countᵢ!`: the number of words with
    /// this multidegree.
    pub fn word_count(&self) -> u128 {
        let mut acc: u128 = 1;
        let mut n: u128 = 0;
        for &c in &self.0 {
            for k in 1..=c as u128 {
                n += 1;
                acc = acc * n / k;
            }
        }
        acc
    }

    /// Renders with at least three slots, `2,1,0`.
    pub fn to_csv(&self) -> String {
        let w = self.width().max(3);
        (0..w)
            .map(|i| self.get(i).to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_csv(s: &str) -> Result<MultiDegree> {
        let counts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidArgument(format!("bad multidegree `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiDegree::new(counts))
    }
}

impl Add for &MultiDegree {
    type Output = MultiDegree;
    fn add(self, rhs: &MultiDegree) -> MultiDegree {
        let w = self.width().max(rhs.width());
        MultiDegree::new(
            (0..w)
                .map(|i| self.get(i) + rhs.get(i))
                .collect::<Vec<_>>(),
        )
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_csv())
    }
}

/// A monomial of the free associative algebra; the empty word is the unit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Word(SmallVec<[Generator; 16]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Generator>) -> Self {
        Word(letters.into_iter().collect())
    }

    /// Parses a flat string of `x`, `y`, `z` (no `g<n>` letters).
    pub fn from_xyz(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'x' => Ok(Generator::X),
                'y' => Ok(Generator::Y),
                'z' => Ok(Generator::Z),
                _ => Err(Error::InvalidArgument(format!("bad letter `{c}` in word `{s}`"))),
            })
            .collect::<Result<SmallVec<_>>>()
            .map(Word)
    }

    pub fn power(g: Generator, s: u32) -> Self {
        Word((0..s).map(|_| g).collect())
    }

    pub fn letters(&self) -> &[Generator] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn is_palindrome(&self) -> bool {
        let n = self.0.len();
        (0..n / 2).all(|i| self.0[i] == self.0[n - 1 - i])
    }

    /// `min(u, u*)` under the generator order.
    pub fn canonical(&self) -> Word {
        let r = self.reversed();
        if r < *self {
            r
        } else {
            self.clone()
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Run-length form `y₁^{s₁}…y_k^{s_k}` with adjacent letters distinct.
    pub fn runs(&self) -> Vec<(Generator, u32)> {
        let mut out: Vec<(Generator, u32)> = Vec::new();
        for &g in &self.0 {
            match out.last_mut() {
                Some((h, n)) if *h == g => *n += 1,
                _ => out.push((g, 1)),
            }
        }
        out
    }

    pub fn from_runs(runs: &[(Generator, u32)]) -> Word {
        Word(
            runs.iter()
                .flat_map(|&(g, n)| std::iter::repeat_n(g, n as usize))
                .collect(),
        )
    }

    pub fn multidegree(&self) -> MultiDegree {
        let w = self.0.iter().map(|g| g.index() + 1).max().unwrap_or(0);
        let mut v = vec![0u32; w];
        for g in &self.0 {
            v[g.index()] += 1;
        }
        MultiDegree::new(v)
    }
}

/// Number of maximal constant runs; zero for the empty word.
pub fn word_height(u: &Word) -> usize {
    if u.is_empty() {
        return 0;
    }
    1 + u.0.windows(2).filter(|w| w[0] != w[1]).count()
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for g in &self.0 {
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// All words of the given multidegree in lexicographic order.
pub fn words_of_degree(d: &MultiDegree) -> Vec<Word> {
    fn rec(rem: &mut Vec<u32>, cur: &mut Vec<Generator>, out: &mut Vec<Word>) {
        if rem.iter().all(|&c| c == 0) {
            out.push(Word::from_letters(cur.iter().copied()));
            return;
        }
        for i in 0..rem.len() {
            if rem[i] > 0 {
                rem[i] -= 1;
                cur.push(Generator(i as u8));
                rec(rem, cur, out);
                cur.pop();
                rem[i] += 1;
            }
        }
    }
    let mut rem = d.counts().to_vec();
    let mut out = Vec::new();
    rec(&mut rem, &mut Vec::new(), &mut out);
    out
}

/// All words of length `1..=max_len` over the first `alphabet` generators.
pub fn words_up_to(alphabet: u8, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet as usize);
        for w in &layer {
            for g in 0..alphabet {
                let mut v = w.0.clone();
                v.push(Generator(g));
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Finite linear combination of words with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct AssocPoly {
    terms: BTreeMap<Word, Rational>,
}

impl AssocPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::word(Word::empty())
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, Rational::one())
    }

    pub fn generator(g: Generator) -> Self {
        Self::word(Word::from_letters([g]))
    }

    pub fn term(w: Word, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Rational)>) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &Rational) -> AssocPoly {
        if c.is_zero() {
            return AssocPoly::zero();
        }
        AssocPoly {
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect(),
        }
    }

    /// Multidegree when every term shares one; `None` for zero or mixed input.
    pub fn multidegree(&self) -> Option<MultiDegree> {
        let mut it = self.terms.keys();
        let d = it.next()?.multidegree();
        it.all(|w| w.multidegree() == d).then_some(d)
    }

    /// Applies the reversal involution `*` to every word.
    pub fn involute(&self) -> AssocPoly {
        AssocPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.reversed(), c.clone()))
                .collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms
            .iter()
            .all(|(w, c)| self.terms.get(&w.reversed()) == Some(c))
    }

    pub fn is_skew(&self) -> bool {
        self.terms
            .iter()
            .all(|(w, c)| self.terms.get(&w.reversed()).map(|d| -d) == Some(c.clone()))
    }

    /// `p + p*`.
    pub fn symmetric_part(&self) -> AssocPoly {
        self + &self.involute()
    }

    /// `p − p*`.
    pub fn skew_part(&self) -> AssocPoly {
        self - &self.involute()
    }

    pub fn commutator(a: &AssocPoly, b: &AssocPoly) -> AssocPoly {
        &(a * b) - &(b * a)
    }

    pub fn pow(&self, n: u32) -> AssocPoly {
        let mut acc = AssocPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Largest letter index + 1 used by any word.
    pub fn alphabet_width(&self) -> usize {
        self.terms
            .keys()
            .flat_map(|w| w.letters().iter().map(|g| g.index() + 1))
            .max()
            .unwrap_or(0)
    }
}

/// `u + u*`; equals `2u` on palindromes.
pub fn symmetrize(u: &Word) -> AssocPoly {
    let mut p = AssocPoly::word(u.clone());
    p.add_term(u.reversed(), Rational::one());
    p
}

/// `p + p*`, the linear extension of [`symmetrize`].
pub fn symmetrize_poly(p: &AssocPoly) -> AssocPoly {
    p + &p.involute()
}

/// The skew part `[p] = p − p*`.
pub fn bracket_skew(p: &AssocPoly) -> AssocPoly {
    p.skew_part()
}

pub fn involute(p: &AssocPoly) -> AssocPoly {
    p.involute()
}

/// Special Jordan product `a∘b = ½(ab + ba)`.
pub fn circle(a: &AssocPoly, b: &AssocPoly) -> AssocPoly {
    let half = Rational::new(1.into(), 2.into());
    (&(a * b) + &(b * a)).scale(&half)
}

/// Expresses a symmetric polynomial over the basis `{u} = u + u*` indexed by
/// canonical words `min(u, u*)`. Palindromes carry half their coefficient.
pub fn sj_decompose(p: &AssocPoly) -> Result<Vec<(Word, Rational)>> {
    if !p.is_symmetric() {
        return Err(Error::NotSymmetric(p.to_string()));
    }
    let half = Rational::new(1.into(), 2.into());
    Ok(p.terms
        .iter()
        .filter(|(w, _)| w.canonical() == **w)
        .map(|(w, c)| {
            if w.is_palindrome() {
                (w.clone(), c * &half)
            } else {
                (w.clone(), c.clone())
            }
        })
        .collect())
}

impl Add for &AssocPoly {
    type Output = AssocPoly;
    fn add(self, rhs: &AssocPoly) -> AssocPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &AssocPoly {
    type Output = AssocPoly;
    fn sub(self, rhs: &AssocPoly) -> AssocPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl Neg for &AssocPoly {
    type Output = AssocPoly;
    fn neg(self) -> AssocPoly {
        AssocPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl Mul for &AssocPoly {
    type Output = AssocPoly;
    fn mul(self, rhs: &AssocPoly) -> AssocPoly {
        let mut out = AssocPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }
}

impl fmt::Display for AssocPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            if a.is_one() {
                write!(f, "{w}")?;
            } else if w.is_empty() {
                f.write_str(&fmt_rational(&a))?;
            } else {
                write!(f, "{} {w}", fmt_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl serde::Serialize for AssocPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.terms.len()))?;
        for (w, c) in &self.terms {
            m.serialize_entry(&w.to_string(), &fmt_rational(c))?;
        }
        m.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::from_xyz(s).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn p(terms: &[(&str, i64)]) -> AssocPoly {
        AssocPoly::from_terms(terms.iter().map(|(s, c)| (w(s), q(*c, 1))))
    }

    #[test]
    fn heights() {
        assert_eq!(word_height(&Word::empty()), 0);
        assert_eq!(word_height(&w("xxyx")), 3);
        assert_eq!(word_height(&w("xyzxyz")), 6);
        assert_eq!(w("xxyx").runs(), vec![(Generator::X, 2), (Generator::Y, 1), (Generator::X, 1)]);
    }

    #[test]
    fn involution_examples() {
        assert_eq!(involute(&p(&[("xyz", 1)])), p(&[("zyx", 1)]));
        assert_eq!(involute(&p(&[("xyx", 1)])), p(&[("xyx", 1)]));
    }

    #[test]
    fn symmetrize_examples() {
        assert_eq!(symmetrize(&w("xy")), p(&[("xy", 1), ("yx", 1)]));
        assert_eq!(symmetrize(&w("xyx")), p(&[("xyx", 2)]));
        assert_eq!(symmetrize(&w("xxyz")), p(&[("xxyz", 1), ("zyxx", 1)]));
    }

    #[test]
    fn circle_examples() {
        let x = AssocPoly::generator(Generator::X);
        let y = AssocPoly::generator(Generator::Y);
        let z = AssocPoly::generator(Generator::Z);
        assert_eq!(circle(&x, &x), p(&[("xx", 1)]));
        let xy = circle(&x, &y);
        assert_eq!(xy.coeff(&w("xy")), q(1, 2));
        assert_eq!(xy.coeff(&w("yx")), q(1, 2));
        let lhs = circle(&p(&[("xy", 1)]), &z);
        let rhs = p(&[("xyz", 1), ("zxy", 1)]).scale(&q(1, 2));
        assert!((&lhs - &rhs).is_zero());
        assert_eq!(circle(&x, &AssocPoly::one()), x);
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(bracket_skew(&p(&[("xy", 1)])), p(&[("xy", 1), ("yx", -1)]));
        assert!(bracket_skew(&p(&[("xyx", 1)])).is_zero());
        // ([x,y])^3 has 8 words and is skew
        let c = bracket_skew(&p(&[("xy", 1)]));
        let c3 = c.pow(3);
        assert_eq!(c3.len(), 8);
        assert!(c3.is_skew());
        assert_eq!(c3.involute(), -&c3);
    }

    #[test]
    fn sj_decompose_examples() {
        assert_eq!(
            sj_decompose(&p(&[("xy", 1), ("yx", 1)])).unwrap(),
            vec![(w("xy"), q(1, 1))]
        );
        assert_eq!(sj_decompose(&p(&[("xyx", 6)])).unwrap(), vec![(w("xyx"), q(3, 1))]);
        let s = p(&[("xyz", 1), ("zyx", 1), ("xzy", 2), ("yzx", 2)]);
        let dec = sj_decompose(&s).unwrap();
        assert_eq!(dec, vec![(w("xyz"), q(1, 1)), (w("xzy"), q(2, 1))]);
        // brute-force re-expansion
        let mut back = AssocPoly::zero();
        for (u, a) in &dec {
            back = &back + &symmetrize(u).scale(a);
        }
        assert_eq!(back, s);
        assert!(matches!(
            sj_decompose(&p(&[("xy", 1)])),
            Err(Error::NotSymmetric(_))
        ));
    }

    #[test]
    fn sj_round_trip_exhaustive() {
        for u in words_up_to(3, 6) {
            let s = symmetrize(&u);
            let dec = sj_decompose(&s).unwrap();
            let mut back = AssocPoly::zero();
            for (v, a) in &dec {
                back = &back + &symmetrize(v).scale(a);
            }
            assert_eq!(back, s, "{u}");
        }
    }

    #[test]
    fn multidegree_helpers() {
        let d = MultiDegree::new(vec![2, 1, 0]);
        assert_eq!(d, MultiDegree::new(vec![2, 1]));
        assert_eq!(d.total(), 3);
        assert_eq!(d.word_count(), 3);
        assert_eq!(MultiDegree::new(vec![3, 3, 2]).word_count(), 560);
        assert_eq!(words_of_degree(&MultiDegree::new(vec![3, 3, 2])).len(), 560);
        assert_eq!(d.to_csv(), "2,1,0");
        assert_eq!(MultiDegree::parse_csv("2,1,0").unwrap(), d);
        assert_eq!(d.sub_degrees().len(), 5);
        assert_eq!(words_up_to(3, 8).len(), 9840);
    }
}
