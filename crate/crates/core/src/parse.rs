//! Text grammars for associative and Jordan expressions.
//!
//! Associative: juxtaposition is the product; `+`, `-`, integer and `p/q`
//! literals, `^` powers, `~` involution prefix, `[a,b]` commutator, `{a}`
//! symmetrization, `1` for the unit word. Generators are `x`, `y`, `z` and
//! `g<n>`.
//!
//! Jordan: `*` is the Jordan product (and scalar multiplication), `^`
//! left-normed powers, `U(f;a,b)`, `R(f;a)`, `D(f;a,b)`, parentheses,
//! left-normed association, and `catalog:NAME` references.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::assoc::{symmetrize_poly, AssocPoly, Generator, Word};
use crate::magma::{apply_d, apply_r, apply_u, jmul, jpow, JPoly};
use crate::Rational;

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 32;
const MAX_NESTING: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
    pub message: Option<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at line {}, column {}: ", self.line, self.column)?;
        if let Some(m) = &self.message {
            return write!(f, "{m}");
        }
        write!(f, "expected {}, found {}", self.expected.join(" | "), self.found)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = Result<T, ParseError>;

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    depth: usize,
    expected: BTreeSet<&'a str>,
}

impl<'a> Cursor<'a> {
    fn new(text: &str) -> Self {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
            depth: 0,
            expected: BTreeSet::new(),
        }
    }

    fn location(&self, pos: usize) -> (usize, usize) {
        let mut line = 1;
        let mut col = 1;
        for &c in &self.chars[..pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn advance(&mut self, n: usize) {
        self.pos += n;
        self.expected.clear();
    }

    fn expect(&mut self, what: &'a str) {
        self.expected.insert(what);
    }

    fn eat(&mut self, c: char, label: &'a str) -> bool {
        if self.peek() == Some(c) {
            self.advance(1);
            true
        } else {
            self.expect(label);
            false
        }
    }

    fn require(&mut self, c: char, label: &'a str) -> PResult<()> {
        if self.eat(c, label) {
            Ok(())
        } else {
            Err(self.error())
        }
    }

    fn error(&mut self) -> ParseError {
        self.skip_ws();
        let (line, column) = self.location(self.pos);
        ParseError {
            line,
            column,
            expected: self.expected.iter().map(|s| s.to_string()).collect(),
            found: match self.chars.get(self.pos) {
                Some(c) => format!("`{c}`"),
                None => "end of input".to_string(),
            },
            message: None,
        }
    }

    fn fail_at(&self, pos: usize, message: String) -> ParseError {
        let (line, column) = self.location(pos);
        ParseError {
            line,
            column,
            expected: Vec::new(),
            found: String::new(),
            message: Some(message),
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(self.fail_at(self.pos, format!("nesting deeper than {MAX_NESTING}")));
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    fn end(&mut self) -> PResult<()> {
        if self.peek().is_some() {
            self.expect("end of input");
            return Err(self.error());
        }
        Ok(())
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    /// Integer or `p/q` literal at the cursor.
    fn number(&mut self) -> PResult<Option<Rational>> {
        self.skip_ws();
        let start = self.pos;
        let Some(n) = self.digits() else {
            self.expect("number");
            return Ok(None);
        };
        let mut q = Rational::from_integer(n.parse::<BigInt>().unwrap());
        let save = self.pos;
        if self.chars.get(self.pos) == Some(&'/') {
            self.pos += 1;
            match self.digits() {
                Some(d) => {
                    let d: BigInt = d.parse().unwrap();
                    if d.is_zero() {
                        return Err(self.fail_at(start, "zero denominator".into()));
                    }
                    q /= Rational::from_integer(d);
                }
                None => self.pos = save,
            }
        }
        self.expected.clear();
        Ok(Some(q))
    }

    fn exponent(&mut self) -> PResult<Option<u32>> {
        if !self.eat('^', "`^`") {
            return Ok(None);
        }
        self.skip_ws();
        let start = self.pos;
        let Some(d) = self.digits() else {
            self.expect("exponent");
            return Err(self.error());
        };
        self.expected.clear();
        match d.parse::<u32>() {
            Ok(e) if (1..=MAX_EXPONENT).contains(&e) => Ok(Some(e)),
            _ => Err(self.fail_at(start, format!("exponent must lie in 1..={MAX_EXPONENT}"))),
        }
    }

    /// `x`, `y`, `z` or `g<n>`.
    fn generator(&mut self) -> PResult<Option<Generator>> {
        self.skip_ws();
        let start = self.pos;
        let g = match self.chars.get(self.pos) {
            Some('x') => Some(Generator::X),
            Some('y') => Some(Generator::Y),
            Some('z') => Some(Generator::Z),
            Some('g') if self.chars.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit()) => {
                self.pos += 1;
                let d = self.digits().unwrap();
                match d.parse::<u8>() {
                    Ok(i) => {
                        self.pos = start;
                        self.advance(d.len() + 1);
                        return Ok(Some(Generator(i)));
                    }
                    Err(_) => return Err(self.fail_at(start, format!("generator index `{d}` out of range"))),
                }
            }
            _ => None,
        };
        match g {
            Some(g) => {
                self.advance(1);
                Ok(Some(g))
            }
            None => {
                self.expect("generator");
                Ok(None)
            }
        }
    }
}

/// Parses an associative expression.
pub fn parse_assoc(text: &str) -> PResult<AssocPoly> {
    let mut c = Cursor::new(text);
    let p = assoc_sum(&mut c)?;
    c.end()?;
    Ok(p)
}

fn assoc_sum(c: &mut Cursor) -> PResult<AssocPoly> {
    let mut acc = if c.eat('-', "`-`") {
        -&assoc_product(c)?
    } else {
        assoc_product(c)?
    };
    loop {
        if c.eat('+', "`+`") {
            acc = &acc + &assoc_product(c)?;
        } else if c.eat('-', "`-`") {
            acc = &acc - &assoc_product(c)?;
        } else {
            return Ok(acc);
        }
    }
}

fn assoc_product(c: &mut Cursor) -> PResult<AssocPoly> {
    let Some(mut acc) = assoc_factor(c)? else {
        return Err(c.error());
    };
    loop {
        c.eat('*', "`*`");
        match assoc_factor(c)? {
            Some(f) => acc = &acc * &f,
            None => return Ok(acc),
        }
    }
}

fn assoc_factor(c: &mut Cursor) -> PResult<Option<AssocPoly>> {
    let Some(a) = assoc_atom(c)? else {
        return Ok(None);
    };
    Ok(Some(match c.exponent()? {
        Some(e) => a.pow(e),
        None => a,
    }))
}

fn assoc_atom(c: &mut Cursor) -> PResult<Option<AssocPoly>> {
    c.enter()?;
    let out = assoc_atom_inner(c);
    c.leave();
    out
}

fn assoc_atom_inner(c: &mut Cursor) -> PResult<Option<AssocPoly>> {
    if let Some(q) = c.number()? {
        return Ok(Some(AssocPoly::one().scale(&q)));
    }
    if let Some(g) = c.generator()? {
        return Ok(Some(AssocPoly::generator(g)));
    }
    if c.eat('(', "`(`") {
        let p = assoc_sum(c)?;
        c.require(')', "`)`")?;
        return Ok(Some(p));
    }
    if c.eat('[', "`[`") {
        let a = assoc_sum(c)?;
        c.require(',', "`,`")?;
        let b = assoc_sum(c)?;
        c.require(']', "`]`")?;
        return Ok(Some(AssocPoly::commutator(&a, &b)));
    }
    if c.eat('{', "`{`") {
        let a = assoc_sum(c)?;
        c.require('}', "`}`")?;
        return Ok(Some(symmetrize_poly(&a)));
    }
    if c.eat('~', "`~`") {
        let Some(a) = assoc_factor(c)? else {
            return Err(c.error());
        };
        return Ok(Some(a.involute()));
    }
    Ok(None)
}

/// Parses a single word such as `xxyz` or `g3g4x`.
pub fn parse_word(text: &str) -> PResult<Word> {
    let mut c = Cursor::new(text);
    let mut letters = Vec::new();
    while let Some(g) = c.generator()? {
        letters.push(g);
    }
    if letters.is_empty() {
        return Err(c.error());
    }
    c.end()?;
    Ok(Word::from_letters(letters))
}

/// Value of a Jordan subexpression: scalars multiply, polynomials form the
/// (unit-free) free Jordan algebra.
enum JValue {
    Scalar(Rational),
    Poly(JPoly),
}

/// Resolves `catalog:NAME` references.
pub type Resolver<'r> = &'r dyn Fn(&str) -> Option<JPoly>;

/// Parses a Jordan expression; `catalog:` references fail without a resolver.
pub fn parse_jordan(text: &str) -> PResult<JPoly> {
    parse_jordan_with(text, &|_| None)
}

pub fn parse_jordan_with(text: &str, resolve: Resolver) -> PResult<JPoly> {
    let mut c = Cursor::new(text);
    let start = {
        c.skip_ws();
        c.pos
    };
    let v = jordan_sum(&mut c, resolve)?;
    c.end()?;
    match v {
        JValue::Poly(p) => Ok(p),
        JValue::Scalar(q) if q.is_zero() => Ok(JPoly::zero()),
        JValue::Scalar(_) => Err(c.fail_at(start, "a nonzero scalar is not a Jordan polynomial".into())),
    }
}

fn as_poly(c: &Cursor, v: JValue, pos: usize) -> PResult<JPoly> {
    match v {
        JValue::Poly(p) => Ok(p),
        JValue::Scalar(q) if q.is_zero() => Ok(JPoly::zero()),
        JValue::Scalar(_) => Err(c.fail_at(pos, "expected a polynomial, found a scalar".into())),
    }
}

fn add_values(c: &Cursor, a: JValue, b: JValue, pos: usize) -> PResult<JValue> {
    Ok(match (a, b) {
        (JValue::Scalar(p), JValue::Scalar(q)) => JValue::Scalar(p + q),
        (JValue::Poly(p), JValue::Poly(q)) => JValue::Poly(&p + &q),
        (JValue::Scalar(s), JValue::Poly(p)) | (JValue::Poly(p), JValue::Scalar(s)) => {
            if !s.is_zero() {
                return Err(c.fail_at(pos, "cannot add a scalar to a polynomial".into()));
            }
            JValue::Poly(p)
        }
    })
}

fn negate(v: JValue) -> JValue {
    match v {
        JValue::Scalar(q) => JValue::Scalar(-q),
        JValue::Poly(p) => JValue::Poly(-&p),
    }
}

fn jordan_sum(c: &mut Cursor, r: Resolver) -> PResult<JValue> {
    let mut acc = if c.eat('-', "`-`") {
        negate(jordan_product(c, r)?)
    } else {
        jordan_product(c, r)?
    };
    loop {
        c.skip_ws();
        let pos = c.pos;
        if c.eat('+', "`+`") {
            let rhs = jordan_product(c, r)?;
            acc = add_values(c, acc, rhs, pos)?;
        } else if c.eat('-', "`-`") {
            let rhs = negate(jordan_product(c, r)?);
            acc = add_values(c, acc, rhs, pos)?;
        } else {
            return Ok(acc);
        }
    }
}

fn jordan_product(c: &mut Cursor, r: Resolver) -> PResult<JValue> {
    let mut acc = jordan_power(c, r)?;
    while c.eat('*', "`*`") {
        let rhs = jordan_power(c, r)?;
        acc = match (acc, rhs) {
            (JValue::Scalar(p), JValue::Scalar(q)) => JValue::Scalar(p * q),
            (JValue::Scalar(s), JValue::Poly(p)) | (JValue::Poly(p), JValue::Scalar(s)) => {
                JValue::Poly(p.scale(&s))
            }
            (JValue::Poly(p), JValue::Poly(q)) => JValue::Poly(jmul(&p, &q)),
        };
    }
    Ok(acc)
}

fn jordan_power(c: &mut Cursor, r: Resolver) -> PResult<JValue> {
    let a = jordan_atom(c, r)?;
    Ok(match c.exponent()? {
        None => a,
        Some(e) => match a {
            JValue::Scalar(q) => {
                let mut acc = Rational::one();
                for _ in 0..e {
                    acc *= &q;
                }
                JValue::Scalar(acc)
            }
            JValue::Poly(p) => JValue::Poly(jpow(&p, e)),
        },
    })
}

fn jordan_atom(c: &mut Cursor, r: Resolver) -> PResult<JValue> {
    c.enter()?;
    let out = jordan_atom_inner(c, r);
    c.leave();
    out
}

fn operator_args(c: &mut Cursor, r: Resolver, n: usize) -> PResult<Vec<JPoly>> {
    c.require('(', "`(`")?;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        if i == 1 {
            c.require(';', "`;`")?;
        } else if i > 1 {
            c.require(',', "`,`")?;
        }
        c.skip_ws();
        let pos = c.pos;
        let v = jordan_sum(c, r)?;
        out.push(as_poly(c, v, pos)?);
    }
    c.require(')', "`)`")?;
    Ok(out)
}

fn jordan_atom_inner(c: &mut Cursor, r: Resolver) -> PResult<JValue> {
    if let Some(q) = c.number()? {
        return Ok(JValue::Scalar(q));
    }
    if c.eat('-', "`-`") {
        return Ok(negate(jordan_power(c, r)?));
    }
    if c.eat('(', "`(`") {
        let v = jordan_sum(c, r)?;
        c.require(')', "`)`")?;
        return Ok(v);
    }
    c.skip_ws();
    let start = c.pos;
    let word: String = c.chars[c.pos..]
        .iter()
        .take_while(|ch| ch.is_ascii_alphanumeric() || **ch == '_')
        .collect();
    match word.as_str() {
        "U" | "D" | "R" => {
            c.advance(1);
            let args = operator_args(c, r, if word == "R" { 2 } else { 3 })?;
            return Ok(JValue::Poly(match word.as_str() {
                "U" => apply_u(&args[0], &args[1], &args[2]),
                "D" => apply_d(&args[0], &args[1], &args[2]),
                _ => apply_r(&args[0], &args[1]),
            }));
        }
        "catalog" if c.chars.get(c.pos + word.len()) == Some(&':') => {
            c.advance(word.len() + 1);
            let name: String = c.chars[c.pos..]
                .iter()
                .take_while(|ch| ch.is_ascii_alphanumeric() || **ch == '_' || **ch == '-')
                .collect();
            if name.is_empty() {
                c.expect("catalog entry name");
                return Err(c.error());
            }
            return match r(&name) {
                Some(p) => {
                    c.advance(name.chars().count());
                    Ok(JValue::Poly(p))
                }
                None => Err(c.fail_at(start, format!("unknown catalog entry `{name}`"))),
            };
        }
        _ => {}
    }
    match c.generator()? {
        Some(g) => {
            if c.chars.get(c.pos).is_some_and(|ch| ch.is_ascii_alphanumeric()) {
                return Err(c.fail_at(start, format!("unknown identifier `{word}`")));
            }
            Ok(JValue::Poly(JPoly::generator(g)))
        }
        None => {
            for e in ["number", "`(`", "`-`", "`U(`", "`R(`", "`D(`", "`catalog:`"] {
                c.expect(e);
            }
            Err(c.error())
        }
    }
}

/// Parsed value of either grammar.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Jordan(JPoly),
    Assoc(AssocPoly),
}

/// Tries the Jordan grammar, then the associative one; reports the Jordan
/// error when both fail.
pub fn parse_expr(text: &str, resolve: Resolver) -> PResult<Expr> {
    match parse_jordan_with(text, resolve) {
        Ok(p) => Ok(Expr::Jordan(p)),
        Err(e) => parse_assoc(text).map(Expr::Assoc).map_err(|_| e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assoc::circle;
    use crate::rat;

    fn w(s: &str) -> Word {
        Word::from_xyz(s).unwrap()
    }

    #[test]
    fn jordan_examples() {
        assert!(parse_jordan("x*y - y*x").unwrap().is_zero());
        let x = JPoly::generator(Generator::X);
        let y = JPoly::generator(Generator::Y);
        let z = JPoly::generator(Generator::Z);
        assert_eq!(parse_jordan("U(y; x, z)").unwrap(), apply_u(&y, &x, &z));
        assert_eq!(parse_jordan("D(x;y,z)").unwrap(), apply_d(&x, &y, &z));
        assert_eq!(parse_jordan("R(x;y)").unwrap(), jmul(&x, &y));
        assert_eq!(parse_jordan("x^3").unwrap(), jpow(&x, 3));
        assert_eq!(parse_jordan("1/2*x*y").unwrap(), jmul(&x, &y).scale(&rat(1, 2)));
        assert_eq!(parse_jordan("-(x*y)").unwrap(), jmul(&x, &y).scale(&rat(-1, 1)));
        let e = parse_jordan("x*(y*").unwrap_err();
        assert_eq!((e.line, e.column), (1, 6));
        assert!(e.expected.contains(&"generator".to_string()));
        let e = parse_jordan("x +\n q").unwrap_err();
        assert_eq!((e.line, e.column), (2, 2));
        assert!(parse_jordan("x + 1").is_err());
        assert!(parse_jordan("xy").is_err());
        assert!(parse_jordan("catalog:nope").is_err());
        let found = parse_jordan_with("2*catalog:a", &|n| (n == "a").then(|| x.clone())).unwrap();
        assert_eq!(found, x.scale_int(2));
    }

    #[test]
    fn jordan_round_trip() {
        let x = JPoly::generator(Generator::X);
        let y = JPoly::generator(Generator::Y);
        let g = JPoly::generator(Generator(4));
        let p = &(&jmul(&jmul(&x, &y), &jpow(&y, 2)).scale(&rat(-3, 7)) + &x) + &jmul(&g, &x);
        assert_eq!(parse_jordan(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn assoc_examples() {
        let p = parse_assoc("2 xyz - 1/2 zyx").unwrap();
        assert_eq!(p.coeff(&w("xyz")), rat(2, 1));
        assert_eq!(p.coeff(&w("zyx")), rat(-1, 2));
        assert_eq!(parse_assoc(&p.to_string()).unwrap(), p);
        assert_eq!(parse_assoc("[x,y]").unwrap().to_string(), "xy - yx");
        assert_eq!(parse_assoc("{xy}").unwrap(), parse_assoc("xy + yx").unwrap());
        assert_eq!(parse_assoc("~(xyz)").unwrap(), AssocPoly::word(w("zyx")));
        assert_eq!(parse_assoc("x^2 y").unwrap(), AssocPoly::word(w("xxy")));
        assert_eq!(parse_assoc("1").unwrap(), AssocPoly::one());
        let xy = parse_assoc("x").unwrap();
        assert_eq!(parse_assoc("x*x").unwrap(), circle(&xy, &xy));
        assert!(parse_assoc("[x,").is_err());
        assert_eq!(parse_word("g3xg10").unwrap().letters(), &[Generator(3), Generator::X, Generator(10)]);
    }

    #[test]
    fn never_panics_on_junk() {
        for s in ["", "(", ")", "^", "x^", "x^0", "x^999", "1/0", "g", "g999", "catalog:", "U(x", "((((", "~", "{", "[x,y", "x**y", "∑"] {
            let _ = parse_jordan(s);
            let _ = parse_assoc(s);
        }
        let deep = "(".repeat(10_000);
        assert!(parse_jordan(&deep).is_err());
        assert!(parse_assoc(&deep).is_err());
    }
}
