//! Exact symbolic computation with Jordan s-identities in three variables.
//!
//! The crate models the free associative algebra ([`assoc`]), the free
//! commutative magma algebra hosting free-Jordan elements ([`magma`]),
//! Shirshov–Cohn lifting and s-errors ([`lift`]), multidegree components of
//! the free Jordan algebra as explicit quotients ([`component`]), T-ideal
//! components ([`tideal`]), the classical identity families
//! ([`identities`]) and evaluation oracles in the Albert algebra and in
//! symmetric rational matrices ([`albert`]).

pub mod albert;
pub mod assoc;
pub mod cache;
pub mod component;
pub mod error;
pub mod identities;
pub mod lift;
pub mod linalg;
pub mod magma;
pub mod modular;
pub mod parse;
pub mod tideal;
pub mod verify;

pub use assoc::{AssocPoly, Generator, MultiDegree, Word};
pub use error::{Error, Result};
pub use magma::{JPoly, JTerm};

use num_bigint::BigInt;
use num_traits::One;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.trim().parse().ok()?)),
    }
}
