//! Shirshov–Cohn lifting: Jordan preimages `⟨u⟩` of the symmetric basis
//! elements `{u} = u + u*`, their linear extension, and s-errors.
//!
//! Words are handled in run-length form `a₁^{s₁}…a_k^{s_k}`; `k` is the
//! height. Each rule rewrites `⟨u⟩` through lifts of words that are either
//! of smaller height or resolve in one further step by a height-lowering
//! rule:
//!
//! | rule | shape | construction |
//! |------|-------|--------------|
//! | 1 | `a^s` | `2 a^s` |
//! | 2 | `a^s b^t` | `2 a^s • b^t` |
//! | 3a | `a^s b^t c^r`, `a ≠ c` | `2 b^t U_{a^s,c^r}` |
//! | 3b | `a^s b^t a^r` | `⟨a^s b^t⟩•a^r + ⟨b^t a^r⟩•a^s − ⟨b^t a^{s+r}⟩` |
//! | 4 | `a^s w a^r` | `⟨a^s w⟩•a^r + ⟨w a^r⟩•a^s − ⟨w⟩•a^{s+r}` |
//! | 5 | `u` not canonical | `⟨u*⟩` |
//! | 6 | `a^s w b^t`, `w` starts with `b` or ends with `a` | `2⟨w⟩U_{a^s,b^t} − ⟨b^t w a^s⟩` |
//! | 7 | `a^s w b^t`, second run of `w` is `a` | `2⟨w b^t⟩•a^s − ⟨w b^t a^s⟩` |
//! | 8 | `a^s w b^t`, penultimate run of `w` is `b` | `2⟨a^s w⟩•b^t − ⟨b^t a^s w⟩` |
//! | 9 | `a^s w b^t`, otherwise over three letters | `2⟨w⟩U_{a^s,b^t} − ⟨b^t w a^s⟩` (same height, resolved by 7 or 8) |
//!
//! Over more than three letters some words have no preimage (`{u}` need not
//! lie in the special subalgebra); those report [`Error::NoLiftRule`].

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::assoc::{sj_decompose, word_height, AssocPoly, Generator, Word};
use crate::error::{Error, Result};
use crate::magma::{apply_u, gamma, gen_pow, jmul, JPoly};

pub const DEFAULT_DEPTH_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LiftRule {
    Power,
    TwoRuns,
    Triple,
    Sandwich,
    SameEnds,
    Reverse,
    UFlip,
    StubLeft,
    StubRight,
    SameHeightFlip,
}

impl LiftRule {
    pub fn number(self) -> &'static str {
        match self {
            LiftRule::Power => "1",
            LiftRule::TwoRuns => "2",
            LiftRule::Triple => "3a",
            LiftRule::Sandwich => "3b",
            LiftRule::SameEnds => "4",
            LiftRule::Reverse => "5",
            LiftRule::UFlip => "6",
            LiftRule::StubLeft => "7",
            LiftRule::StubRight => "8",
            LiftRule::SameHeightFlip => "9",
        }
    }
}

impl fmt::Display for LiftRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {:?}", self.number(), self)
    }
}

/// Memo of lifts keyed on `min(u, u*)`, with the rule that produced each.
#[derive(Debug)]
pub struct LiftTable {
    memo: HashMap<Word, JPoly>,
    rule_trace: HashMap<Word, LiftRule>,
    depth_cap: usize,
}

impl Default for LiftTable {
    fn default() -> Self {
        Self::new()
    }
}

fn pw(g: Generator, s: u32) -> JPoly {
    JPoly::monomial(gen_pow(g, s))
}

impl LiftTable {
    pub fn new() -> Self {
        Self::with_depth_cap(DEFAULT_DEPTH_CAP)
    }

    pub fn with_depth_cap(depth_cap: usize) -> Self {
        LiftTable {
            memo: HashMap::new(),
            rule_trace: HashMap::new(),
            depth_cap,
        }
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    /// `⟨u⟩` for a nonempty word.
    pub fn sc_lift(&mut self, u: &Word) -> Result<JPoly> {
        if u.is_empty() {
            return Err(Error::MalformedWord("empty word has no lift".into()));
        }
        self.lift_at(u, 0)
    }

    /// Rule that fired for `u` (rule 5 when `u` is not its own canonical
    /// representative), followed by the rules of every word the recursion
    /// visited, in first-visit order.
    pub fn rule_trace(&mut self, u: &Word) -> Result<Vec<(Word, LiftRule)>> {
        self.sc_lift(u)?;
        let mut out = Vec::new();
        if u.canonical() != *u {
            out.push((u.clone(), LiftRule::Reverse));
        }
        let mut seen = std::collections::HashSet::new();
        self.collect_trace(&u.canonical(), &mut out, &mut seen);
        Ok(out)
    }

    fn collect_trace(
        &self,
        key: &Word,
        out: &mut Vec<(Word, LiftRule)>,
        seen: &mut std::collections::HashSet<Word>,
    ) {
        if !seen.insert(key.clone()) {
            return;
        }
        let Some(rule) = self.rule_trace.get(key).copied() else {
            return;
        };
        out.push((key.clone(), rule));
        for sub in dependencies(key, rule) {
            self.collect_trace(&sub.canonical(), out, seen);
        }
    }

    fn lift_at(&mut self, u: &Word, depth: usize) -> Result<JPoly> {
        let key = u.canonical();
        if let Some(p) = self.memo.get(&key) {
            return Ok(p.clone());
        }
        if depth > self.depth_cap {
            return Err(Error::RecursionCapExceeded {
                word: u.to_string(),
                cap: self.depth_cap,
            });
        }
        let (rule, value) = self.construct(&key, depth)?;
        self.rule_trace.insert(key.clone(), rule);
        self.memo.insert(key, value.clone());
        Ok(value)
    }

    fn sub(&mut self, runs: &[(Generator, u32)], depth: usize) -> Result<JPoly> {
        self.lift_at(&Word::from_runs(runs), depth + 1)
    }

    fn construct(&mut self, u: &Word, depth: usize) -> Result<(LiftRule, JPoly)> {
        let runs = u.runs();
        let k = runs.len();
        let (a, s) = runs[0];
        let (b, t) = runs[k - 1];
        match k {
            1 => return Ok((LiftRule::Power, pw(a, s).scale_int(2))),
            2 => return Ok((LiftRule::TwoRuns, jmul(&pw(a, s), &pw(b, t)).scale_int(2))),
            3 if a != b => {
                let (m, r) = runs[1];
                let v = apply_u(&pw(m, r), &pw(a, s), &pw(b, t)).scale_int(2);
                return Ok((LiftRule::Triple, v));
            }
            _ => {}
        }
        if a == b {
            let interior = &runs[1..k - 1];
            let left = self.sub(&runs[..k - 1], depth)?;
            let right = self.sub(&runs[1..], depth)?;
            let mut v = &jmul(&left, &pw(a, t)) + &jmul(&right, &pw(a, s));
            if k == 3 {
                let (m, r) = runs[1];
                let tail = self.sub(&[(m, r), (a, s + t)], depth)?;
                v = &v - &tail;
                return Ok((LiftRule::Sandwich, v));
            }
            let mid = self.sub(interior, depth)?;
            v = &v - &jmul(&mid, &pw(a, s + t));
            return Ok((LiftRule::SameEnds, v));
        }
        let rule = classify_distinct_ends(&runs)
            .ok_or_else(|| Error::NoLiftRule(u.to_string()))?;
        let interior = &runs[1..k - 1];
        let v = match rule {
            LiftRule::UFlip | LiftRule::SameHeightFlip => {
                let mid = self.sub(interior, depth)?;
                let mut flipped = vec![(b, t)];
                flipped.extend_from_slice(interior);
                flipped.push((a, s));
                let flipped = merge_runs(&flipped);
                &apply_u(&mid, &pw(a, s), &pw(b, t)).scale_int(2) - &self.sub(&flipped, depth)?
            }
            LiftRule::StubLeft => {
                let rest = &runs[1..];
                let mut aux = rest.to_vec();
                aux.push((a, s));
                &jmul(&self.sub(rest, depth)?, &pw(a, s)).scale_int(2) - &self.sub(&aux, depth)?
            }
            LiftRule::StubRight => {
                let rest = &runs[..k - 1];
                let mut aux = vec![(b, t)];
                aux.extend_from_slice(rest);
                &jmul(&self.sub(rest, depth)?, &pw(b, t)).scale_int(2) - &self.sub(&aux, depth)?
            }
            _ => unreachable!(),
        };
        Ok((rule, v))
    }
}

fn merge_runs(runs: &[(Generator, u32)]) -> Vec<(Generator, u32)> {
    let mut out: Vec<(Generator, u32)> = Vec::with_capacity(runs.len());
    for &(g, n) in runs {
        match out.last_mut() {
            Some((h, m)) if *h == g => *m += n,
            _ => out.push((g, n)),
        }
    }
    out
}

/// Dispatch for a word of height ≥ 4 whose end letters differ.
fn classify_distinct_ends(runs: &[(Generator, u32)]) -> Option<LiftRule> {
    let k = runs.len();
    let a = runs[0].0;
    let b = runs[k - 1].0;
    let w = &runs[1..k - 1];
    let first = w[0].0;
    let last = w[w.len() - 1].0;
    if first == b || last == a {
        return Some(LiftRule::UFlip);
    }
    if w.len() >= 2 {
        if w[1].0 == a {
            return Some(LiftRule::StubLeft);
        }
        if w[w.len() - 2].0 == b {
            return Some(LiftRule::StubRight);
        }
        if w[1].0 == b || w[w.len() - 2].0 == a {
            return Some(LiftRule::SameHeightFlip);
        }
    }
    None
}

/// Words whose lifts the given rule consumes.
fn dependencies(u: &Word, rule: LiftRule) -> Vec<Word> {
    let runs = u.runs();
    let k = runs.len();
    let (a, s) = runs[0];
    let (b, t) = runs[k - 1];
    let w = |r: &[(Generator, u32)]| Word::from_runs(&merge_runs(r));
    match rule {
        LiftRule::Power | LiftRule::TwoRuns | LiftRule::Triple | LiftRule::Reverse => vec![],
        LiftRule::Sandwich => vec![
            w(&runs[..2]),
            w(&runs[1..]),
            w(&[runs[1], (a, s + t)]),
        ],
        LiftRule::SameEnds => vec![w(&runs[..k - 1]), w(&runs[1..]), w(&runs[1..k - 1])],
        LiftRule::UFlip | LiftRule::SameHeightFlip => {
            let mut flipped = vec![(b, t)];
            flipped.extend_from_slice(&runs[1..k - 1]);
            flipped.push((a, s));
            vec![w(&runs[1..k - 1]), w(&flipped)]
        }
        LiftRule::StubLeft => {
            let mut aux = runs[1..].to_vec();
            aux.push((a, s));
            vec![w(&runs[1..]), w(&aux)]
        }
        LiftRule::StubRight => {
            let mut aux = vec![(b, t)];
            aux.extend_from_slice(&runs[..k - 1]);
            vec![w(&runs[..k - 1]), w(&aux)]
        }
    }
}

/// `Σ αᵢ⟨uᵢ⟩` for a symmetric `p = Σ αᵢ{uᵢ}`.
pub fn sc_lift_poly(table: &mut LiftTable, p: &AssocPoly) -> Result<JPoly> {
    let mut out = JPoly::zero();
    for (u, alpha) in sj_decompose(p)? {
        if u.is_empty() {
            return Err(Error::MalformedWord("unit word has no Jordan lift".into()));
        }
        out.add_scaled(&table.sc_lift(&u)?, &alpha);
    }
    Ok(out)
}

/// The s-error `δ(f) = f − lift(γ(f))`; always in the kernel of `γ`.
pub fn s_error(table: &mut LiftTable, f: &JPoly) -> Result<JPoly> {
    let lifted = sc_lift_poly(table, &gamma(f))?;
    Ok(f - &lifted)
}

/// Height of the canonical word, exposed for reports.
pub fn lift_height(u: &Word) -> usize {
    word_height(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assoc::{symmetrize, words_up_to};
    use crate::magma::jpow;
    use crate::{int, rat};

    fn w(s: &str) -> Word {
        Word::from_xyz(s).unwrap()
    }

    #[test]
    fn rule_one_and_two() {
        let mut t = LiftTable::new();
        let x = JPoly::generator(Generator::X);
        assert_eq!(t.sc_lift(&w("x")).unwrap(), x.scale_int(2));
        let y = JPoly::generator(Generator::Y);
        assert_eq!(t.sc_lift(&w("xy")).unwrap(), jmul(&x, &y).scale_int(2));
        assert_eq!(t.sc_lift(&w("xxx")).unwrap(), jpow(&x, 3).scale_int(2));
    }

    #[test]
    fn triple_and_sandwich() {
        let mut t = LiftTable::new();
        assert_eq!(gamma(&t.sc_lift(&w("xyz")).unwrap()), symmetrize(&w("xyz")));
        assert_eq!(t.rule_trace(&w("xyz")).unwrap()[0].1, LiftRule::Triple);
        assert_eq!(gamma(&t.sc_lift(&w("xyxx")).unwrap()), symmetrize(&w("xyxx")));
        assert_eq!(t.rule_trace(&w("xxyx")).unwrap()[0].1, LiftRule::Sandwich);
        assert_eq!(t.rule_trace(&w("xyxx")).unwrap()[0].1, LiftRule::Reverse);
    }

    #[test]
    fn every_rule_fires_and_checks() {
        let mut t = LiftTable::new();
        let mut fired = std::collections::HashSet::new();
        for u in words_up_to(3, 7) {
            let f = t.sc_lift(&u).unwrap();
            assert_eq!(gamma(&f), symmetrize(&u), "{u}");
            for (_, r) in t.rule_trace(&u).unwrap() {
                fired.insert(r);
            }
        }
        for r in [
            LiftRule::Power,
            LiftRule::TwoRuns,
            LiftRule::Triple,
            LiftRule::Sandwich,
            LiftRule::SameEnds,
            LiftRule::Reverse,
            LiftRule::UFlip,
            LiftRule::StubLeft,
            LiftRule::StubRight,
            LiftRule::SameHeightFlip,
        ] {
            assert!(fired.contains(&r), "rule {r} never fired");
        }
    }

    #[test]
    fn reversal_invariance() {
        let mut t = LiftTable::new();
        for u in words_up_to(3, 6) {
            assert_eq!(t.sc_lift(&u).unwrap(), t.sc_lift(&u.reversed()).unwrap());
        }
    }

    #[test]
    fn tetrad_has_no_lift() {
        let mut t = LiftTable::new();
        let u = Word::from_letters([Generator(0), Generator(1), Generator(2), Generator(3)]);
        assert!(matches!(t.sc_lift(&u), Err(Error::NoLiftRule(_))));
    }

    #[test]
    fn depth_cap_is_loud() {
        let mut t = LiftTable::with_depth_cap(0);
        assert!(matches!(
            t.sc_lift(&w("xyzxzy")),
            Err(Error::RecursionCapExceeded { .. })
        ));
    }

    #[test]
    fn lift_poly_and_s_error() {
        let mut t = LiftTable::new();
        let x = JPoly::generator(Generator::X);
        let y = JPoly::generator(Generator::Y);
        assert_eq!(
            sc_lift_poly(&mut t, &symmetrize(&w("xy"))).unwrap(),
            jmul(&x, &y).scale_int(2)
        );
        assert!(sc_lift_poly(&mut t, &AssocPoly::zero()).unwrap().is_zero());
        // [z,[x,y]] is symmetric of degree 3
        let g = |c| AssocPoly::generator(Generator(c));
        let p = AssocPoly::commutator(&g(2), &AssocPoly::commutator(&g(0), &g(1)));
        assert!(p.is_symmetric());
        let f = sc_lift_poly(&mut t, &p).unwrap();
        assert_eq!(gamma(&f), p);
        assert!(matches!(
            sc_lift_poly(&mut t, &AssocPoly::word(w("xy"))),
            Err(Error::NotSymmetric(_))
        ));

        assert!(s_error(&mut t, &jmul(&x, &y)).unwrap().is_zero());
        let lifted = t.sc_lift(&w("xzyxy")).unwrap();
        assert!(s_error(&mut t, &lifted).unwrap().is_zero());
        let x2 = jpow(&x, 2);
        let f = jmul(&x2, &x2);
        let d = s_error(&mut t, &f).unwrap();
        assert!(gamma(&d).is_zero());
        // γ(x²•x²) = x⁴ = ½{x⁴}, and ⟨x⁴⟩ = 2 x⁴ (left-normed)
        let expect = &f - &t.sc_lift(&w("xxxx")).unwrap().scale(&rat(1, 2));
        assert_eq!(d, expect);
        assert_eq!(s_error(&mut t, &d).unwrap(), d);
        let _ = int(0);
    }
}
