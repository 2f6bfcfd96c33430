//! The acceptance suite: eight exact checks over lifting, low-degree
//! components, the degree-8 identities, and the evaluation oracles.

use std::time::Instant;

use serde::Serialize;

use crate::albert::{
    albert_points, evaluate_all, sym_points, AlbertElement, Backend, JordanElement, DEFAULT_SEED,
};
use crate::assoc::{symmetrize, words_up_to, AssocPoly, Generator, MultiDegree, Word};
use crate::component::{enumerate_jterms, Engine};
use crate::error::Result;
use crate::identities::{catalog, catalog_entry, commutator_identity};
use crate::lift::{s_error, LiftTable};
use crate::magma::{gamma, jmul, JPoly};
use crate::tideal::{t_component, t_membership};

pub const CRITERIA: [(u8, &str); 8] = [
    (1, "lifting contract"),
    (2, "two-variable kernel"),
    (3, "low-degree kernel"),
    (4, "degree-8 centerpiece"),
    (5, "k-identities"),
    (6, "commutator family"),
    (7, "albert oracle"),
    (8, "cross-oracle coherence"),
];

/// Matrix size of the special oracle.
pub const SYM_K: usize = 4;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "criterion {} ({}): {} [{} ms] {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.elapsed_ms,
            self.detail
        )
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Oracle points for criterion 7.
    pub points: usize,
    /// Oracle points per backend for each corpus polynomial in criterion 8.
    pub corpus_points: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: DEFAULT_SEED,
            points: 100,
            corpus_points: 10,
        }
    }
}

/// Runs one criterion; errors count as failures and are reported in the
/// detail.
pub fn run_criterion(id: u8, engine: &mut Engine, table: &mut LiftTable, opts: &VerifyOptions) -> CriterionResult {
    let name = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map_or("unknown", |(_, n)| n);
    let start = Instant::now();
    let outcome = match id {
        1 => lifting_contract(table),
        2 => two_variable_kernel(engine),
        3 => low_degree_kernel(engine),
        4 => centerpiece(engine, table),
        5 => k_identities(engine, table),
        6 => commutator_family(engine, table),
        7 => albert_oracle(engine, table, opts),
        8 => cross_oracle(engine, table, opts),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult {
        id,
        name,
        passed,
        detail,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

pub fn run_all(engine: &mut Engine, opts: &VerifyOptions) -> Vec<CriterionResult> {
    let mut table = LiftTable::new();
    CRITERIA
        .iter()
        .map(|(id, _)| run_criterion(*id, engine, &mut table, opts))
        .collect()
}

type Outcome = Result<(bool, String)>;

fn lifting_contract(table: &mut LiftTable) -> Outcome {
    let words = words_up_to(3, 8);
    let mut bad = Vec::new();
    for u in &words {
        let lift = table.sc_lift(u)?;
        if gamma(&lift) != symmetrize(u) || table.sc_lift(&u.reversed())? != lift {
            bad.push(u.to_string());
        }
    }
    let ok = bad.is_empty() && words.len() == 9840;
    Ok((ok, format!("{} words checked, {} failures {:?}", words.len(), bad.len(), &bad[..bad.len().min(5)])))
}

fn check_zero_s_dims(engine: &mut Engine, degrees: &[MultiDegree]) -> Outcome {
    let mut bad = Vec::new();
    let mut largest = 0;
    for d in degrees {
        let space = engine.space(d)?;
        largest = largest.max(space.basis_size());
        if space.s_dim() != 0 {
            bad.push(format!("{d}: {}", space.s_dim()));
        }
    }
    Ok((
        bad.is_empty(),
        format!(
            "{} multidegrees, largest basis {largest}, nonzero s-dims {bad:?}",
            degrees.len()
        ),
    ))
}

/// Three-generator exponent vectors with `1 <= total <= max_total`.
fn degrees_up_to(max_total: u32, keep: impl Fn(&[u32; 3]) -> bool) -> Vec<MultiDegree> {
    let mut out = Vec::new();
    for total in 1..=max_total {
        for a in 0..=total {
            for b in 0..=total - a {
                let v = [a, b, total - a - b];
                if keep(&v) {
                    out.push(MultiDegree::new(v.to_vec()));
                }
            }
        }
    }
    out
}

fn two_variable_kernel(engine: &mut Engine) -> Outcome {
    check_zero_s_dims(engine, &degrees_up_to(8, |v| v.contains(&0)))
}

fn low_degree_kernel(engine: &mut Engine) -> Outcome {
    check_zero_s_dims(engine, &degrees_up_to(7, |v| !v.contains(&0)))
}

fn sh_gens(table: &mut LiftTable) -> Result<Vec<(String, JPoly)>> {
    let sh = catalog_entry(table, "sh")?.expect("sh is cataloged").value;
    Ok(vec![("sh".into(), sh)])
}

fn centerpiece(engine: &mut Engine, table: &mut LiftTable) -> Outcome {
    let d = MultiDegree::new(vec![3, 3, 2]);
    let gens = sh_gens(table)?;
    let sh = &gens[0].1;
    let gamma_zero = gamma(sh).is_zero();
    let sh_zero = engine.is_zero_in_j(sh)?.zero;
    let space = engine.space(&d)?;
    let s_dim = space.s_dim();
    let t = t_component(engine, &gens, &d)?;
    let f2 = catalog_entry(table, "f2")?.expect("f2 is cataloged").value;
    let member = t_membership(engine, &f2, &gens)?;
    let ok = gamma_zero
        && !sh_zero
        && s_dim >= 1
        && t.cert.dimension == s_dim
        && t.cert.verify()
        && t.in_s_space
        && member.member;
    Ok((
        ok,
        format!(
            "gamma(sh)=0: {gamma_zero}; sh zero in J: {sh_zero}; basis {}, rank {}, quotient {}, s_dim {s_dim}, t_dim {}; f2 in T(sh): {}",
            space.basis_size(),
            space.rank(),
            space.quotient_dim(),
            t.cert.dimension,
            member.member
        ),
    ))
}

fn k_identities(engine: &mut Engine, table: &mut LiftTable) -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for name in ["f1", "f2", "f3"] {
        let f = catalog_entry(table, name)?.expect("cataloged").value;
        let gz = gamma(&f).is_zero();
        ok &= gz;
        let zero = engine.is_zero_in_j(&f)?.zero;
        match name {
            "f1" => ok &= zero,
            "f2" => ok &= !zero,
            _ => {}
        }
        notes.push(format!("{name}: gamma zero {gz}, zero in J {zero}"));
    }
    let gens = sh_gens(table)?;
    let f2 = catalog_entry(table, "f2")?.expect("cataloged").value;
    let member = t_membership(engine, &f2, &gens)?.member;
    ok &= member;
    notes.push(format!("f2 in T(sh): {member}"));
    Ok((ok, notes.join("; ")))
}

/// Skew parts `[a]` for the words `a` over `{x, y}` of length at most 4.
fn skew_seeds() -> Vec<(Word, AssocPoly)> {
    words_up_to(2, 4)
        .into_iter()
        .map(|a| {
            let s = AssocPoly::word(a.clone()).skew_part();
            (a, s)
        })
        .collect()
}

fn commutator_family(engine: &mut Engine, table: &mut LiftTable) -> Outcome {
    let mut checked = 0;
    let mut tested = 0;
    let mut bad = Vec::new();
    for (a, s) in skew_seeds() {
        let g = commutator_identity(table, &s)?;
        checked += 1;
        if !gamma(&g).is_zero() {
            bad.push(format!("gamma(g_[{a}])"));
            continue;
        }
        let small = g.multidegree().is_none_or(|d| d.total() <= 7);
        if small {
            tested += 1;
            if !engine.is_zero_in_j(&g)?.zero {
                bad.push(format!("g_[{a}] nonzero in J"));
            }
        }
    }
    Ok((
        bad.is_empty(),
        format!("{checked} seeds, {tested} zero tests, failures {bad:?}"),
    ))
}

fn jordan_instance() -> JPoly {
    let x = JPoly::generator(Generator::X);
    let y = JPoly::generator(Generator::Y);
    let x2 = jmul(&x, &x);
    &jmul(&jmul(&x2, &y), &x) - &jmul(&x2, &jmul(&y, &x))
}

fn backend_sound<E: JordanElement>(points: &[Vec<E>]) -> Result<bool> {
    let jordan = evaluate_all(&jordan_instance(), points)?;
    let commutes = points.iter().all(|p| p[0].circle(&p[1]) == p[1].circle(&p[0]));
    Ok(commutes && jordan.iter().all(JordanElement::is_zero))
}

fn albert_oracle(engine: &mut Engine, table: &mut LiftTable, opts: &VerifyOptions) -> Outcome {
    let albert_ok = backend_sound(&albert_points(opts.seed, opts.points, 2))?;
    let sym_ok = backend_sound(&sym_points(opts.seed, opts.points, 2, SYM_K))?;
    let sh = &sh_gens(table)?[0].1;
    let sh_value: AlbertElement = evaluate_all(sh, &albert_points(opts.seed, 1, 3))?.remove(0);
    let sh_nonzero = !sh_value.is_zero();
    let space = engine.space(&MultiDegree::new(vec![3, 3, 2]))?;
    let points = sym_points(opts.seed, opts.points, 3, SYM_K);
    let mut s_vanish = true;
    let s_basis = space.s_space();
    for v in &s_basis.vectors {
        let f = space.from_coordinates(v);
        s_vanish &= evaluate_all(&f, &points)?.iter().all(JordanElement::is_zero);
    }
    Ok((
        albert_ok && sym_ok && sh_nonzero && s_vanish,
        format!(
            "{} points: H3(O) sound {albert_ok}, H{SYM_K}(Q) sound {sym_ok}; sh at seed {:#x} nonzero {sh_nonzero}; {} s-space vectors vanish on H{SYM_K}(Q) {s_vanish}",
            opts.points,
            opts.seed,
            s_basis.vectors.len()
        ),
    ))
}

/// Polynomials used for the cross-oracle check: the catalog, the commutator
/// family, s-errors of monomials at a few multidegrees, and the s-space basis
/// at (3,3,2).
pub fn corpus(engine: &mut Engine, table: &mut LiftTable) -> Result<Vec<(String, JPoly)>> {
    let mut out: Vec<(String, JPoly)> = catalog(table)?
        .into_iter()
        .map(|e| (e.name.to_string(), e.value))
        .collect();
    for (a, s) in skew_seeds() {
        if !s.is_zero() {
            out.push((format!("g_[{a}]"), commutator_identity(table, &s)?));
        }
    }
    for (counts, limit) in [(vec![2, 1, 1], usize::MAX), (vec![2, 2, 1], usize::MAX), (vec![3, 3, 2], 24)] {
        for t in enumerate_jterms(&MultiDegree::new(counts)).into_iter().take(limit) {
            let e = s_error(table, &JPoly::monomial(t.clone()))?;
            if !e.is_zero() {
                out.push((format!("s_error({t})"), e));
            }
        }
    }
    let space = engine.space(&MultiDegree::new(vec![3, 3, 2]))?;
    for (i, v) in space.s_space().vectors.iter().enumerate() {
        out.push((format!("s_space(3,3,2)[{i}]"), space.from_coordinates(v)));
    }
    Ok(out)
}

fn cross_oracle(engine: &mut Engine, table: &mut LiftTable, opts: &VerifyOptions) -> Outcome {
    let corpus = corpus(engine, table)?;
    let mut zero_verdicts = 0;
    let mut certified_nonzero = 0;
    let mut counterexamples = Vec::new();
    for (name, f) in &corpus {
        let gens = f.alphabet_width().max(1);
        let zero = engine.is_zero_in_j(f)?.zero;
        let albert = evaluate_all(f, &albert_points(opts.seed, opts.corpus_points, gens))?;
        let sym = evaluate_all(f, &sym_points(opts.seed, opts.corpus_points, gens, SYM_K))?;
        let oracle_nonzero = !albert.iter().all(JordanElement::is_zero) || !sym.iter().all(JordanElement::is_zero);
        if zero {
            zero_verdicts += 1;
        }
        if oracle_nonzero {
            certified_nonzero += 1;
            if zero {
                counterexamples.push(name.clone());
            }
        }
    }
    Ok((
        counterexamples.is_empty(),
        format!(
            "{} polynomials, {zero_verdicts} zero in J, {certified_nonzero} certified nonzero by {} or {}, counterexamples {counterexamples:?}",
            corpus.len(),
            Backend::Albert,
            Backend::Symmetric { k: SYM_K }
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_lists() {
        assert_eq!(degrees_up_to(2, |_| true).len(), 3 + 6);
        assert!(degrees_up_to(7, |v| !v.contains(&0)).iter().all(|d| d.support() == 3));
        assert_eq!(skew_seeds().len(), 30);
    }

    #[test]
    fn unknown_criterion_fails() {
        let mut e = Engine::default();
        let mut t = LiftTable::new();
        let r = run_criterion(9, &mut e, &mut t, &VerifyOptions::default());
        assert!(!r.passed);
    }
}
