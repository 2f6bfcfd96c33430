//! Constructed identity families: Shestakov's form `Sh` of the Glennie
//! identity, commutator identities `g_s`, and k-identities `f_n`.

use serde::Serialize;

use crate::assoc::{AssocPoly, Generator, Word};
use crate::error::{Error, Result};
use crate::lift::{sc_lift_poly, LiftTable};
use crate::magma::{gamma, jmul, JPoly};

/// `[x,y] = xy − yx`.
pub fn xy_commutator() -> AssocPoly {
    AssocPoly::commutator(&AssocPoly::generator(Generator::X), &AssocPoly::generator(Generator::Y))
}

/// `g_s = ⟨[z², s]⟩ − 2⟨[z, s]⟩•z` for a skew, `z`-free `s`.
pub fn commutator_identity(table: &mut LiftTable, s: &AssocPoly) -> Result<JPoly> {
    if !s.is_skew() {
        return Err(Error::NotSkew(s.to_string()));
    }
    if s.iter().any(|(w, _)| w.letters().contains(&Generator::Z)) {
        return Err(Error::InvalidArgument(format!("`{s}` must not involve z")));
    }
    let z = AssocPoly::generator(Generator::Z);
    let z2 = &z * &z;
    let outer = sc_lift_poly(table, &AssocPoly::commutator(&z2, s))?;
    let inner = sc_lift_poly(table, &AssocPoly::commutator(&z, s))?;
    Ok(&outer - &jmul(&inner, &JPoly::generator(Generator::Z)).scale_int(2))
}

/// `Sh = g_s` at `s = [x,y]³`, of multidegree (3,3,2).
pub fn sh(table: &mut LiftTable) -> Result<JPoly> {
    commutator_identity(table, &xy_commutator().pow(3))
}

/// `f_n = 2⟨z u⟩•z − ⟨z² u⟩ − ⟨z u z⟩` with `u = a₁b₁…a_nb_n`. Every entry
/// must be a positive power of one generator other than `z`, and
/// neighbouring entries must use different generators.
pub fn k_identity(table: &mut LiftTable, n: usize, assignment: &[Word]) -> Result<JPoly> {
    if n == 0 || assignment.len() != 2 * n {
        return Err(Error::MalformedWord(format!(
            "f_{n} needs {} entries, got {}",
            2 * n,
            assignment.len()
        )));
    }
    let mut letters: Vec<Generator> = Vec::new();
    let mut prev: Option<Generator> = None;
    for a in assignment {
        let runs = a.runs();
        let [(g, _)] = runs.as_slice() else {
            return Err(Error::MalformedWord(format!("`{a}` is not a power of one generator")));
        };
        if *g == Generator::Z {
            return Err(Error::MalformedWord(format!("entry `{a}` uses z")));
        }
        if prev == Some(*g) {
            return Err(Error::MalformedWord(format!("neighbouring entries share generator {g}")));
        }
        prev = Some(*g);
        letters.extend_from_slice(a.letters());
    }
    let z = Generator::Z;
    let with = |pre: &[Generator], post: &[Generator]| {
        let mut v = pre.to_vec();
        v.extend_from_slice(&letters);
        v.extend_from_slice(post);
        Word::from_letters(v)
    };
    let zu = table.sc_lift(&with(&[z], &[]))?;
    let zzu = table.sc_lift(&with(&[z, z], &[]))?;
    let zuz = table.sc_lift(&with(&[z], &[z]))?;
    Ok(&(&jmul(&zu, &JPoly::generator(z)).scale_int(2) - &zzu) - &zuz)
}

/// A named catalog polynomial with the properties it is expected to have.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub parameters: String,
    #[serde(skip)]
    pub value: JPoly,
    pub gamma_zero: bool,
    /// Expected verdict of the zero test in the free Jordan algebra, when known
    /// in advance.
    pub zero_in_j: Option<bool>,
    pub note: &'static str,
}

pub const CATALOG_NAMES: [&str; 8] = ["sh", "f1", "f2", "f3", "g_xy", "g_xxy", "jordan", "power4"];

fn words(ws: &[&str]) -> Vec<Word> {
    ws.iter().map(|w| Word::from_xyz(w).unwrap()).collect()
}

/// Builds one catalog entry; `None` for unknown names.
pub fn catalog_entry(table: &mut LiftTable, name: &str) -> Result<Option<CatalogEntry>> {
    let x = JPoly::generator(Generator::X);
    let y = JPoly::generator(Generator::Y);
    let entry = match name {
        "sh" => CatalogEntry {
            name: "sh",
            parameters: "s = [x,y]^3".into(),
            value: sh(table)?,
            gamma_zero: true,
            zero_in_j: Some(false),
            note: "Shestakov form of the Glennie identity, degree 8",
        },
        "f1" => CatalogEntry {
            name: "f1",
            parameters: "n = 1; x, y".into(),
            value: k_identity(table, 1, &words(&["x", "y"]))?,
            gamma_zero: true,
            zero_in_j: Some(true),
            note: "k-identity, vanishes in the free Jordan algebra",
        },
        "f2" => CatalogEntry {
            name: "f2",
            parameters: "n = 2; x^2, y^2, x, y".into(),
            value: k_identity(table, 2, &words(&["xx", "yy", "x", "y"]))?,
            gamma_zero: true,
            zero_in_j: Some(false),
            note: "k-identity of degree 8",
        },
        "f3" => CatalogEntry {
            name: "f3",
            parameters: "n = 3; x, y, x, y, x, y".into(),
            value: k_identity(table, 3, &words(&["x", "y", "x", "y", "x", "y"]))?,
            gamma_zero: true,
            zero_in_j: None,
            note: "k-identity of degree 8",
        },
        "g_xy" => CatalogEntry {
            name: "g_xy",
            parameters: "s = [x,y]".into(),
            value: commutator_identity(table, &xy_commutator())?,
            gamma_zero: true,
            zero_in_j: Some(true),
            note: "commutator identity of degree 4",
        },
        "g_xxy" => CatalogEntry {
            name: "g_xxy",
            parameters: "s = [xxy]".into(),
            value: commutator_identity(table, &AssocPoly::word(Word::from_xyz("xxy").unwrap()).skew_part())?,
            gamma_zero: true,
            zero_in_j: Some(true),
            note: "commutator identity of degree 5",
        },
        "jordan" => {
            let x2 = jmul(&x, &x);
            CatalogEntry {
                name: "jordan",
                parameters: "a = x, b = y".into(),
                value: &jmul(&jmul(&x2, &y), &x) - &jmul(&x2, &jmul(&y, &x)),
                gamma_zero: true,
                zero_in_j: Some(true),
                note: "the Jordan identity itself",
            }
        }
        "power4" => {
            let x2 = jmul(&x, &x);
            CatalogEntry {
                name: "power4",
                parameters: "x".into(),
                value: &jmul(&x2, &x2) - &jmul(&jmul(&x2, &x), &x),
                gamma_zero: true,
                zero_in_j: Some(true),
                note: "power associativity in degree 4",
            }
        }
        _ => return Ok(None),
    };
    if entry.gamma_zero && !gamma(&entry.value).is_zero() {
        return Err(Error::PropertyViolated(format!("gamma({}) is not zero", entry.name)));
    }
    Ok(Some(entry))
}

pub fn catalog(table: &mut LiftTable) -> Result<Vec<CatalogEntry>> {
    CATALOG_NAMES
        .iter()
        .map(|n| Ok(catalog_entry(table, n)?.expect("listed names exist")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assoc::MultiDegree;

    #[test]
    fn sh_shape() {
        let mut t = LiftTable::new();
        let s = sh(&mut t).unwrap();
        assert!(gamma(&s).is_zero());
        assert_eq!(s.multidegree(), Some(MultiDegree::new(vec![3, 3, 2])));
        assert_eq!(commutator_identity(&mut t, &xy_commutator().pow(3)).unwrap(), s);
    }

    #[test]
    fn commutator_identity_errors_and_zero() {
        let mut t = LiftTable::new();
        let xy = AssocPoly::word(Word::from_xyz("xy").unwrap());
        assert!(matches!(commutator_identity(&mut t, &xy), Err(Error::NotSkew(_))));
        assert!(commutator_identity(&mut t, &AssocPoly::zero()).unwrap().is_zero());
        let g = commutator_identity(&mut t, &xy_commutator()).unwrap();
        assert_eq!(g.multidegree(), Some(MultiDegree::new(vec![1, 1, 2])));
        let xz = AssocPoly::word(Word::from_xyz("xz").unwrap()).skew_part();
        assert!(commutator_identity(&mut t, &xz).is_err());
    }

    #[test]
    fn k_identities_vanish_under_gamma() {
        let mut t = LiftTable::new();
        for (n, a) in [(1, vec!["x", "y"]), (2, vec!["xx", "yy", "x", "y"]), (3, vec!["x", "y", "x", "y", "x", "y"])] {
            let f = k_identity(&mut t, n, &words(&a)).unwrap();
            assert!(!f.is_zero());
            assert!(gamma(&f).is_zero());
        }
        assert!(matches!(k_identity(&mut t, 1, &words(&["x", "x"])), Err(Error::MalformedWord(_))));
        assert!(matches!(k_identity(&mut t, 1, &words(&["xy", "x"])), Err(Error::MalformedWord(_))));
        assert!(matches!(k_identity(&mut t, 2, &words(&["x", "y"])), Err(Error::MalformedWord(_))));
    }

    #[test]
    fn catalog_builds() {
        let mut t = LiftTable::new();
        let c = catalog(&mut t).unwrap();
        assert_eq!(c.len(), CATALOG_NAMES.len());
        assert!(catalog_entry(&mut t, "nope").unwrap().is_none());
    }
}
