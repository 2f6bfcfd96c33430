//! Multidegree components of the free Jordan algebra, presented as the
//! free commutative magma algebra component modulo the slice of the T-ideal
//! of the Jordan identity.
//!
//! Relations at multidegree `d` are the fully linearized Jordan identity
//! `L(a₁,a₂,a₃,b) = Σ_k ((aᵢ•aⱼ)•b)•a_k − (aᵢ•aⱼ)•(b•a_k)` at all monomial
//! substitutions of total multidegree `d`, together with `r•m` for every
//! relation basis row `r` at a smaller multidegree `e` and every monomial `m`
//! of multidegree `d − e`. Every row has at most six nonzero integer
//! entries.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::assoc::{words_of_degree, AssocPoly, MultiDegree, Word};
use crate::cache::{DiskCache, Lookup};
use crate::error::{Error, Result};
use crate::linalg::{
    exact_kernel, normalize_int_row, reconstruct_rref, reconstruction_primes, ExactRref, IntRow,
    ModRref, Role,
};
use crate::magma::{gamma_term_int, JPoly, JTerm};
use crate::modular::default_primes;
use crate::{fmt_rational, parse_rational, Rational};

pub const DEFAULT_MAX_COLS: usize = 20_000;
pub const DEFAULT_MAX_ROWS: usize = 400_000;

/// Number of canonical magma monomials of multidegree `d`.
pub fn count_jterms(d: &MultiDegree) -> u128 {
    fn rec(d: &MultiDegree, memo: &mut HashMap<MultiDegree, u128>) -> u128 {
        if d.total() == 1 {
            return 1;
        }
        if let Some(&n) = memo.get(d) {
            return n;
        }
        let mut n = 0u128;
        for e in d.sub_degrees() {
            let r = d.checked_sub(&e).unwrap();
            if r.is_zero() {
                continue;
            }
            match e.counts().cmp(r.counts()) {
                std::cmp::Ordering::Less => n += rec(&e, memo) * rec(&r, memo),
                std::cmp::Ordering::Equal => {
                    let s = rec(&e, memo);
                    n += s * (s + 1) / 2;
                }
                std::cmp::Ordering::Greater => {}
            }
        }
        memo.insert(d.clone(), n);
        n
    }
    if d.is_zero() {
        return 0;
    }
    rec(d, &mut HashMap::new())
}

fn build_terms(d: &MultiDegree, parts: &mut impl FnMut(&MultiDegree) -> Arc<TermSet>) -> Vec<JTerm> {
    if d.total() == 1 {
        let g = (0..d.width()).find(|&i| d.get(i) == 1).unwrap();
        return vec![JTerm::leaf(crate::Generator(g as u8))];
    }
    let mut out = Vec::new();
    for e in d.sub_degrees() {
        let r = d.checked_sub(&e).unwrap();
        if r.is_zero() {
            continue;
        }
        let (left, right) = (parts(&e), parts(&r));
        for a in &left.terms {
            for b in &right.terms {
                if a <= b {
                    out.push(JTerm::mul(a, b));
                }
            }
        }
    }
    out.sort();
    out
}

/// The canonical commutative trees with leaf multiset `d`, in term order.
pub fn enumerate_jterms(d: &MultiDegree) -> Vec<JTerm> {
    fn rec(d: &MultiDegree, memo: &mut HashMap<MultiDegree, Arc<TermSet>>) -> Arc<TermSet> {
        if let Some(t) = memo.get(d) {
            return t.clone();
        }
        let terms = build_terms(d, &mut |e| rec(e, memo));
        let set = Arc::new(TermSet::new(d.clone(), terms));
        memo.insert(d.clone(), set.clone());
        set
    }
    if d.is_zero() {
        return Vec::new();
    }
    rec(d, &mut HashMap::new()).terms.clone()
}

/// Ordered monomial basis of one component with a reverse index.
#[derive(Debug)]
pub struct TermSet {
    pub degree: MultiDegree,
    pub terms: Vec<JTerm>,
    index: HashMap<JTerm, u32>,
}

impl TermSet {
    fn new(degree: MultiDegree, terms: Vec<JTerm>) -> TermSet {
        let index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        TermSet {
            degree,
            terms,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn index_of(&self, t: &JTerm) -> Option<u32> {
        self.index.get(t).copied()
    }
}

/// Wall-clock milliseconds per stage of a component computation.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Timings {
    pub enumerate_ms: u64,
    pub relations_ms: u64,
    pub eliminate_ms: u64,
    pub reconstruct_ms: u64,
    pub verify_ms: u64,
    pub kernel_ms: u64,
}

fn ms(since: Instant) -> u64 {
    since.elapsed().as_millis() as u64
}

/// One multidegree component of the free Jordan algebra.
#[derive(Debug)]
pub struct ComponentSpace {
    pub degree: MultiDegree,
    pub terms: Arc<TermSet>,
    /// Distinct relation rows generated.
    pub relation_rows: usize,
    /// Exact reduced echelon form of the relation space.
    pub rref: ExactRref,
    roles: Vec<Role>,
    /// Generated rows whose pivots span the relation space.
    pub relation_basis: Vec<IntRow>,
    /// Whether every generated row (not only the basis rows) was checked to
    /// lie in the exact row space.
    pub all_rows_verified: bool,
    /// Words of this multidegree, sorted; rows of `gamma_matrix`.
    pub words: Vec<Word>,
    /// `2^{total−1}·γ` on quotient coordinates, words × quotient dimension.
    pub gamma_matrix: Vec<Vec<i64>>,
    /// Exact basis of `ker γ` in quotient coordinates.
    pub s_basis: Vec<Vec<Rational>>,
    pub primes: Vec<u64>,
    pub timings: Timings,
    pub from_cache: bool,
}

/// Summary record of a component, stable across runs.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    pub degree: String,
    pub basis_size: usize,
    pub relation_rows: usize,
    pub rank: usize,
    pub quotient_dim: usize,
    pub s_dim: usize,
    pub gamma_rank: usize,
    pub all_rows_verified: bool,
}

impl ComponentSpace {
    pub fn basis_size(&self) -> usize {
        self.terms.len()
    }

    pub fn rank(&self) -> usize {
        self.rref.rank()
    }

    pub fn quotient_dim(&self) -> usize {
        self.rref.free.len()
    }

    pub fn s_dim(&self) -> usize {
        self.s_basis.len()
    }

    /// Rank of γ on the quotient.
    pub fn gamma_rank(&self) -> usize {
        self.quotient_dim() - self.s_dim()
    }

    /// Monomial standing for quotient coordinate `j`.
    pub fn free_term(&self, j: usize) -> &JTerm {
        &self.terms.terms[self.rref.free[j] as usize]
    }

    pub fn report(&self) -> ComponentReport {
        ComponentReport {
            degree: self.degree.to_csv(),
            basis_size: self.basis_size(),
            relation_rows: self.relation_rows,
            rank: self.rank(),
            quotient_dim: self.quotient_dim(),
            s_dim: self.s_dim(),
            gamma_rank: self.gamma_rank(),
            all_rows_verified: self.all_rows_verified,
        }
    }

    /// Quotient coordinates of a polynomial homogeneous of this multidegree.
    pub fn coordinates(&self, f: &JPoly) -> Result<Vec<Rational>> {
        let mut v = Vec::with_capacity(f.len());
        for (t, c) in f.iter() {
            let i = self.terms.index_of(t).ok_or(Error::NotHomogeneous)?;
            v.push((i, c.clone()));
        }
        Ok(self.rref.reduce(&v, &self.roles))
    }

    /// Polynomial with the given quotient coordinates, over the free monomials.
    pub fn from_coordinates(&self, v: &[Rational]) -> JPoly {
        JPoly::from_terms(
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (self.free_term(j).clone(), c.clone())),
        )
    }

    /// `γ` of the class with quotient coordinates `v`.
    pub fn gamma_of(&self, v: &[Rational]) -> AssocPoly {
        let den = Rational::from_integer(BigInt::from(1u64) << (self.degree.total() - 1));
        let mut out = AssocPoly::zero();
        for (w, row) in self.words.iter().zip(&self.gamma_matrix) {
            let mut acc = Rational::zero();
            for (a, x) in row.iter().zip(v) {
                if *a != 0 && !x.is_zero() {
                    acc += x * Rational::from_integer(BigInt::from(*a));
                }
            }
            out.add_term(w.clone(), acc / &den);
        }
        out
    }

    pub fn s_space(&self) -> SubspaceCert {
        SubspaceCert {
            degree: self.degree.clone(),
            dimension: self.s_dim(),
            vectors: self.s_basis.clone(),
            certificates: Vec::new(),
        }
    }
}

/// A subspace of a component in quotient coordinates, with optional
/// membership certificates `target = Σ coefficients[i]·vectors[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceCert {
    pub degree: MultiDegree,
    pub dimension: usize,
    pub vectors: Vec<Vec<Rational>>,
    pub certificates: Vec<Certificate>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub label: String,
    pub target: Vec<Rational>,
    pub coefficients: Vec<Rational>,
}

impl Certificate {
    pub fn holds(&self, vectors: &[Vec<Rational>]) -> bool {
        if self.coefficients.len() != vectors.len() {
            return false;
        }
        let mut acc = vec![Rational::zero(); self.target.len()];
        for (c, v) in self.coefficients.iter().zip(vectors) {
            if c.is_zero() {
                continue;
            }
            for (a, x) in acc.iter_mut().zip(v) {
                *a += c * x;
            }
        }
        acc == self.target
    }
}

impl SubspaceCert {
    pub fn verify(&self) -> bool {
        self.certificates.iter().all(|c| c.holds(&self.vectors))
    }
}

/// Per-slice outcome of a zero test in the free Jordan algebra.
#[derive(Clone, Debug)]
pub struct SliceVerdict {
    pub degree: MultiDegree,
    pub zero: bool,
    /// Nonzero reduced coordinates, labelled by their free monomials.
    pub witness: Vec<(JTerm, Rational)>,
}

#[derive(Clone, Debug)]
pub struct ZeroVerdict {
    pub zero: bool,
    pub slices: Vec<SliceVerdict>,
}

#[derive(Clone, Debug)]
pub struct EngineConfig {
    pub max_cols: usize,
    pub max_rows: usize,
    /// Elimination primes; all must agree on rank and pivots.
    pub primes: Vec<u64>,
    pub cache: Option<DiskCache>,
    /// Components with at most this many monomials have every generated
    /// relation row checked exactly against the reconstructed row space.
    pub full_verify_cols: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_cols: DEFAULT_MAX_COLS,
            max_rows: DEFAULT_MAX_ROWS,
            primes: default_primes(),
            cache: None,
            full_verify_cols: usize::MAX,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct EngineStats {
    pub cache_hits: usize,
    pub computed: usize,
    pub warnings: Vec<String>,
}

/// Computes and memoizes components, reading and writing the disk cache.
pub struct Engine {
    pub config: EngineConfig,
    terms: HashMap<MultiDegree, Arc<TermSet>>,
    spaces: HashMap<MultiDegree, Arc<ComponentSpace>>,
    pub stats: EngineStats,
}

#[derive(Serialize, Deserialize)]
struct StoredSpace {
    degree: Vec<u32>,
    ncols: usize,
    relation_rows: usize,
    pivots: Vec<u32>,
    rref: Vec<Vec<(u32, String)>>,
    relation_basis: Vec<IntRow>,
    all_rows_verified: bool,
    s_basis: Vec<Vec<(u32, String)>>,
    primes: Vec<u64>,
    timings: Timings,
}

pub(crate) fn sparse_strings(v: &[Rational]) -> Vec<(u32, String)> {
    v.iter()
        .enumerate()
        .filter(|(_, q)| !q.is_zero())
        .map(|(i, q)| (i as u32, fmt_rational(q)))
        .collect()
}

pub(crate) fn parse_rat(s: &str) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| Error::CacheCorrupt {
        path: String::new(),
        reason: format!("bad rational `{s}`"),
    })
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new(EngineConfig::default())
    }
}

impl Engine {
    pub fn new(config: EngineConfig) -> Engine {
        Engine {
            config,
            terms: HashMap::new(),
            spaces: HashMap::new(),
            stats: EngineStats::default(),
        }
    }

    /// Monomial basis of `d`, subject to the column cap.
    pub fn terms(&mut self, d: &MultiDegree) -> Result<Arc<TermSet>> {
        if let Some(t) = self.terms.get(d) {
            return Ok(t.clone());
        }
        let n = count_jterms(d);
        if n > self.config.max_cols as u128 {
            return Err(Error::ResourceCap(format!(
                "{n} monomials at {d} exceed the column cap {}",
                self.config.max_cols
            )));
        }
        let mut subs: HashMap<MultiDegree, Arc<TermSet>> = HashMap::new();
        for e in d.sub_degrees() {
            if e != *d {
                subs.insert(e.clone(), self.terms(&e)?);
            }
        }
        let terms = build_terms(d, &mut |e| subs[e].clone());
        let set = Arc::new(TermSet::new(d.clone(), terms));
        self.terms.insert(d.clone(), set.clone());
        Ok(set)
    }

    /// Spanning rows of the relation space at `d`, over `terms(d)`.
    pub fn jordan_relations(&mut self, d: &MultiDegree) -> Result<Vec<IntRow>> {
        let target = self.terms(d)?;
        let mut rows: Vec<IntRow> = Vec::new();
        let mut seen: HashSet<IntRow> = HashSet::new();
        if d.total() < 4 {
            return Ok(rows);
        }
        let max_rows = self.config.max_rows;
        let mut push = |mut row: IntRow, rows: &mut Vec<IntRow>| -> Result<()> {
            normalize_int_row(&mut row);
            if !row.is_empty() && seen.insert(row.clone()) {
                rows.push(row);
                if rows.len() > max_rows {
                    return Err(Error::ResourceCap(format!(
                        "more than {max_rows} relation rows at {d}"
                    )));
                }
            }
            Ok(())
        };
        let idx = |t: &JTerm| target.index_of(t).expect("product lands in the target component");

        // contexts first: multiples of lower relation spaces
        let proper: Vec<MultiDegree> = d.sub_degrees().into_iter().filter(|e| e != d).collect();
        for e in &proper {
            if e.total() < 4 {
                continue;
            }
            let lower = self.space(e)?;
            let mult = self.terms(&d.checked_sub(e).unwrap())?;
            for r in &lower.relation_basis {
                for m in &mult.terms {
                    let row = r
                        .iter()
                        .map(|&(c, v)| (idx(&JTerm::mul(&lower.terms.terms[c as usize], m)), v))
                        .collect();
                    push(row, &mut rows)?;
                }
            }
        }

        // linearized identity instances at d
        let sets: Vec<(MultiDegree, Arc<TermSet>)> = proper
            .iter()
            .map(|e| Ok((e.clone(), self.terms(e)?)))
            .collect::<Result<_>>()?;
        for (e1, t1) in &sets {
            for (e2, t2) in &sets {
                let e12 = e1 + e2;
                if !e12.le(d) {
                    continue;
                }
                for (e3, t3) in &sets {
                    let e123 = &e12 + e3;
                    let Some(eb) = d.checked_sub(&e123) else {
                        continue;
                    };
                    if eb.is_zero() {
                        continue;
                    }
                    let tb = self.terms(&eb)?;
                    for a1 in &t1.terms {
                        for a2 in t2.terms.iter().filter(|a2| *a2 >= a1) {
                            for a3 in t3.terms.iter().filter(|a3| *a3 >= a2) {
                                for b in &tb.terms {
                                    push(linearized_instance([a1, a2, a3], b, &idx), &mut rows)?;
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(rows)
    }

    pub fn space(&mut self, d: &MultiDegree) -> Result<Arc<ComponentSpace>> {
        if let Some(s) = self.spaces.get(d) {
            return Ok(s.clone());
        }
        let key = format!("component:{}", d.to_csv());
        if let Some(cache) = self.config.cache.clone() {
            match cache.load::<StoredSpace>(&key)? {
                Lookup::Hit(stored) => {
                    let space = Arc::new(self.restore(d, stored, &cache)?);
                    self.stats.cache_hits += 1;
                    self.spaces.insert(d.clone(), space.clone());
                    return Ok(space);
                }
                Lookup::Stale { path, found } => self.stats.warnings.push(format!(
                    "discarding cache file {} written by format version {found}",
                    path.display()
                )),
                Lookup::Miss => {}
            }
        }
        let space = Arc::new(self.compute(d)?);
        self.stats.computed += 1;
        if let Some(cache) = &self.config.cache {
            cache.store(&key, &store(&space))?;
        }
        self.spaces.insert(d.clone(), space.clone());
        Ok(space)
    }

    fn restore(&mut self, d: &MultiDegree, s: StoredSpace, cache: &DiskCache) -> Result<ComponentSpace> {
        let terms = self.terms(d)?;
        let corrupt = |reason: &str| Error::CacheCorrupt {
            path: cache.path_for(&format!("component:{}", d.to_csv())).display().to_string(),
            reason: reason.to_string(),
        };
        if s.ncols != terms.len() || MultiDegree::new(s.degree.clone()) != *d {
            return Err(corrupt("component shape differs"));
        }
        let pivot_set: HashSet<u32> = s.pivots.iter().copied().collect();
        let rref = ExactRref {
            ncols: s.ncols,
            free: (0..s.ncols as u32).filter(|c| !pivot_set.contains(c)).collect(),
            pivots: s.pivots,
            rows: s
                .rref
                .iter()
                .map(|r| r.iter().map(|(j, q)| Ok((*j, parse_rat(q)?))).collect())
                .collect::<Result<_>>()?,
        };
        let q = rref.free.len();
        let s_basis = s
            .s_basis
            .iter()
            .map(|r| {
                let mut v = vec![Rational::zero(); q];
                for (j, x) in r {
                    *v.get_mut(*j as usize).ok_or_else(|| corrupt("kernel index"))? = parse_rat(x)?;
                }
                Ok(v)
            })
            .collect::<Result<_>>()?;
        let (words, gamma_matrix) = gamma_columns(d, &terms, &rref.free);
        Ok(ComponentSpace {
            degree: d.clone(),
            roles: rref.roles(),
            terms,
            relation_rows: s.relation_rows,
            rref,
            relation_basis: s.relation_basis,
            all_rows_verified: s.all_rows_verified,
            words,
            gamma_matrix,
            s_basis,
            primes: s.primes,
            timings: s.timings,
            from_cache: true,
        })
    }

    fn compute(&mut self, d: &MultiDegree) -> Result<ComponentSpace> {
        let mut timings = Timings::default();
        let t0 = Instant::now();
        let terms = self.terms(d)?;
        timings.enumerate_ms = ms(t0);
        let n = terms.len();

        let t0 = Instant::now();
        let rows = self.jordan_relations(d)?;
        timings.relations_ms = ms(t0);

        let t0 = Instant::now();
        check_relations_sound(d, &terms, &rows)?;
        let mut primes = self.config.primes.clone();
        if primes.is_empty() {
            return Err(Error::InvalidArgument("at least one elimination prime is required".into()));
        }
        let mut forms: Vec<ModRref> = std::thread::scope(|s| {
            let handles: Vec<_> = primes
                .iter()
                .map(|&p| {
                    let rows = &rows;
                    s.spawn(move || ModRref::compute(rows, n, p))
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for f in &forms[1..] {
            if f.pivots != forms[0].pivots {
                return Err(Error::PrimeDisagreement {
                    degree: d.to_csv(),
                    detail: format!(
                        "prime {} gives rank {}, prime {} gives rank {}",
                        forms[0].prime,
                        forms[0].rank(),
                        f.prime,
                        f.rank()
                    ),
                });
            }
        }
        timings.eliminate_ms = ms(t0);

        let t0 = Instant::now();
        let basis: Vec<IntRow> = forms[0].basis_rows.iter().map(|&i| rows[i].clone()).collect();
        let pivots = forms[0].pivots.clone();
        let mut extra = reconstruction_primes(64).into_iter();
        let rref = loop {
            if forms.len() >= 2 {
                let refs: Vec<&ModRref> = forms.iter().collect();
                if let Some(r) = reconstruct_rref(&refs) {
                    let roles = r.roles();
                    if basis.iter().all(|b| r.contains_int_row(b, &roles)) {
                        break r;
                    }
                }
            }
            let Some(p) = extra.next() else {
                return Err(Error::Reconstruction(d.to_csv()));
            };
            let f = ModRref::compute(&basis, n, p);
            // a prime dividing a pivot minor is skipped
            if f.pivots == pivots {
                primes.push(p);
                forms.push(f);
            }
        };
        drop(forms);
        timings.reconstruct_ms = ms(t0);

        let t0 = Instant::now();
        let roles = rref.roles();
        let all_rows_verified = n <= self.config.full_verify_cols;
        if all_rows_verified {
            if let Some(i) = rows.iter().position(|r| !rref.contains_int_row(r, &roles)) {
                return Err(Error::PrimeDisagreement {
                    degree: d.to_csv(),
                    detail: format!("relation row {i} lies outside the reconstructed row space"),
                });
            }
        }
        timings.verify_ms = ms(t0);

        let t0 = Instant::now();
        let (words, gamma_matrix) = gamma_columns(d, &terms, &rref.free);
        let big: Vec<Vec<BigInt>> = gamma_matrix
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let s_basis = exact_kernel(&big, rref.free.len())?;
        timings.kernel_ms = ms(t0);

        Ok(ComponentSpace {
            degree: d.clone(),
            terms,
            relation_rows: rows.len(),
            roles,
            rref,
            relation_basis: basis,
            all_rows_verified,
            words,
            gamma_matrix,
            s_basis,
            primes,
            timings,
            from_cache: false,
        })
    }

    /// Quotient coordinates of every multihomogeneous slice of `f`.
    pub fn coordinates(&mut self, f: &JPoly) -> Result<BTreeMap<MultiDegree, Vec<Rational>>> {
        let mut out = BTreeMap::new();
        for (d, slice) in f.slices() {
            let space = self.space(&d)?;
            out.insert(d, space.coordinates(&slice)?);
        }
        Ok(out)
    }

    /// Zero test in the free Jordan algebra, slice by slice.
    pub fn is_zero_in_j(&mut self, f: &JPoly) -> Result<ZeroVerdict> {
        let mut slices = Vec::new();
        for (d, slice) in f.slices() {
            let space = self.space(&d)?;
            let v = space.coordinates(&slice)?;
            let witness: Vec<(JTerm, Rational)> = v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (space.free_term(j).clone(), c.clone()))
                .collect();
            slices.push(SliceVerdict {
                degree: d,
                zero: witness.is_empty(),
                witness,
            });
        }
        Ok(ZeroVerdict {
            zero: slices.iter().all(|s| s.zero),
            slices,
        })
    }

    pub fn s_space(&mut self, d: &MultiDegree) -> Result<SubspaceCert> {
        Ok(self.space(d)?.s_space())
    }
}

fn store(space: &ComponentSpace) -> StoredSpace {
    StoredSpace {
        degree: space.degree.counts().to_vec(),
        ncols: space.terms.len(),
        relation_rows: space.relation_rows,
        pivots: space.rref.pivots.clone(),
        rref: space
            .rref
            .rows
            .iter()
            .map(|r| r.iter().map(|(j, q)| (*j, fmt_rational(q))).collect())
            .collect(),
        relation_basis: space.relation_basis.clone(),
        all_rows_verified: space.all_rows_verified,
        s_basis: space.s_basis.iter().map(|v| sparse_strings(v)).collect(),
        primes: space.primes.clone(),
        timings: space.timings.clone(),
    }
}

/// Row of `L(a₁,a₂,a₃,b)` over the target component.
fn linearized_instance(a: [&JTerm; 3], b: &JTerm, idx: &impl Fn(&JTerm) -> u32) -> IntRow {
    let mut row = Vec::with_capacity(6);
    for k in 0..3 {
        let (i, j) = match k {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let p = JTerm::mul(a[i], a[j]);
        row.push((idx(&JTerm::mul(&JTerm::mul(&p, b), a[k])), 1));
        row.push((idx(&JTerm::mul(&p, &JTerm::mul(b, a[k]))), -1));
    }
    row
}

/// Sorted words of multidegree `d` and the scaled γ-image of each listed
/// column, as a dense words × columns matrix.
fn gamma_columns(d: &MultiDegree, terms: &TermSet, cols: &[u32]) -> (Vec<Word>, Vec<Vec<i64>>) {
    let mut words = words_of_degree(d);
    words.sort();
    let widx: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut m = vec![vec![0i64; cols.len()]; words.len()];
    for (j, &c) in cols.iter().enumerate() {
        for (w, v) in gamma_term_int(&terms.terms[c as usize]).iter() {
            m[widx[w]][j] += v;
        }
    }
    (words, m)
}

/// Every relation row must vanish under γ.
fn check_relations_sound(d: &MultiDegree, terms: &TermSet, rows: &[IntRow]) -> Result<()> {
    if rows.is_empty() {
        return Ok(());
    }
    let words = words_of_degree(d);
    let widx: HashMap<&Word, u32> = words.iter().enumerate().map(|(i, w)| (w, i as u32)).collect();
    let images: Vec<Vec<(u32, i64)>> = terms
        .terms
        .iter()
        .map(|t| gamma_term_int(t).iter().map(|(w, v)| (widx[w], *v)).collect())
        .collect();
    let mut acc = vec![0i128; words.len()];
    let mut touched: Vec<u32> = Vec::new();
    for (ri, row) in rows.iter().enumerate() {
        for &(c, v) in row {
            for &(w, g) in &images[c as usize] {
                acc[w as usize] += v as i128 * g as i128;
                touched.push(w);
            }
        }
        let mut ok = true;
        for &w in &touched {
            if acc[w as usize] != 0 {
                ok = false;
            }
            acc[w as usize] = 0;
        }
        touched.clear();
        if !ok {
            return Err(Error::UnsoundRelation {
                degree: d.to_csv(),
                row: ri,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assoc::Generator;
    use crate::magma::{jmul, jpow};

    fn md(v: &[u32]) -> MultiDegree {
        MultiDegree::new(v.to_vec())
    }

    fn x() -> JPoly {
        JPoly::generator(Generator::X)
    }
    fn y() -> JPoly {
        JPoly::generator(Generator::Y)
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_jterms(&md(&[1, 1, 0])).len(), 1);
        let t = enumerate_jterms(&md(&[2, 1, 0]));
        assert_eq!(t.len(), 2);
        assert_eq!(enumerate_jterms(&md(&[1, 1, 1])).len(), 3);
        for d in [md(&[2, 2, 1]), md(&[3, 2, 0]), md(&[4, 0, 0]), md(&[1, 1, 1, 1])] {
            let t = enumerate_jterms(&d);
            assert_eq!(t.len() as u128, count_jterms(&d));
            assert!(t.windows(2).all(|w| w[0] < w[1]));
            assert!(t.iter().all(|m| m.multidegree() == d));
        }
    }

    #[test]
    fn small_components() {
        let mut e = Engine::default();
        let s = e.space(&md(&[2, 1])).unwrap();
        assert_eq!((s.quotient_dim(), s.s_dim()), (2, 0));
        let s = e.space(&md(&[4])).unwrap();
        assert_eq!(s.quotient_dim(), 1);
        let x2 = jpow(&x(), 2);
        let f = &jmul(&x2, &x2) - &jpow(&x(), 4);
        assert!(!f.is_zero());
        assert!(e.is_zero_in_j(&f).unwrap().zero);
        let comm = &jmul(&x(), &y()) - &jmul(&y(), &x());
        assert!(e.is_zero_in_j(&comm).unwrap().zero);
        let v = e.is_zero_in_j(&jmul(&x(), &y())).unwrap();
        assert!(!v.zero);
        assert_eq!(v.slices[0].witness.len(), 1);
        assert!(e.space(&md(&[1, 1, 1])).unwrap().relation_rows == 0);
    }

    #[test]
    fn jordan_identity_instance_vanishes() {
        let mut e = Engine::default();
        let s = e.space(&md(&[3, 1])).unwrap();
        // four monomials, and L(x,x,x,y), L(x,x,y,x) are independent
        assert_eq!((s.basis_size(), s.rank(), s.s_dim()), (4, 2, 0));
        let a = x();
        let b = y();
        let a2 = jmul(&a, &a);
        let f = &jmul(&jmul(&a2, &b), &a) - &jmul(&a2, &jmul(&b, &a));
        assert!(e.is_zero_in_j(&f).unwrap().zero);
        assert!(s.all_rows_verified);
    }

    #[test]
    fn caps_are_enforced() {
        let mut e = Engine::new(EngineConfig {
            max_cols: 5,
            ..EngineConfig::default()
        });
        assert!(matches!(e.space(&md(&[2, 2, 1])), Err(Error::ResourceCap(_))));
        let mut e = Engine::new(EngineConfig {
            max_rows: 3,
            ..EngineConfig::default()
        });
        assert!(matches!(e.space(&md(&[2, 2, 1])), Err(Error::ResourceCap(_))));
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let config = EngineConfig {
            cache: Some(DiskCache::new(dir.path())),
            ..EngineConfig::default()
        };
        let d = md(&[2, 2, 1]);
        let first = Engine::new(config.clone()).space(&d).unwrap();
        let mut e = Engine::new(config);
        let second = e.space(&d).unwrap();
        assert_eq!(e.stats.cache_hits, 1);
        assert!(second.from_cache);
        assert_eq!(first.rref, second.rref);
        assert_eq!(first.s_basis, second.s_basis);
        assert_eq!(first.gamma_matrix, second.gamma_matrix);
    }
}
