//! Exact linear algebra used by the component machinery.
//!
//! Large relation matrices are row-reduced modulo word-size primes
//! ([`ModRref`]); the reduced row echelon form is unique for a fixed column
//! order, so entries from several primes are combined by Chinese
//! remaindering and rational reconstruction ([`reconstruct_rref`]). Reported
//! facts are then re-checked in exact rational arithmetic by the callers.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::modular::{primes_descending_from, rational_reconstruct, Crt, Field};
use crate::Rational;

/// Sparse row with small integer entries, sorted by column, no zeros.
pub type IntRow = Vec<(u32, i64)>;

/// Sorts, merges and drops zeros; then divides by the content and fixes the
/// sign of the leading entry so equal spans give equal rows.
pub fn normalize_int_row(row: &mut IntRow) {
    row.sort_unstable_by_key(|e| e.0);
    let mut out: IntRow = Vec::with_capacity(row.len());
    for &(c, v) in row.iter() {
        match out.last_mut() {
            Some((d, w)) if *d == c => *w += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|e| e.1 != 0);
    let g = out
        .iter()
        .fold(0i64, |g, e| num_integer::gcd(g, e.1.abs()));
    if g > 1 {
        for e in out.iter_mut() {
            e.1 /= g;
        }
    }
    if out.first().is_some_and(|e| e.1 < 0) {
        for e in out.iter_mut() {
            e.1 = -e.1;
        }
    }
    *row = out;
}

/// Reduced row echelon form of a sparse integer matrix modulo one prime,
/// pivoting on the first nonzero column.
#[derive(Clone, Debug)]
pub struct ModRref {
    pub prime: u64,
    pub ncols: usize,
    /// Pivot columns, ascending.
    pub pivots: Vec<u32>,
    /// For each pivot, the index of the input row that produced it.
    pub basis_rows: Vec<usize>,
    /// Non-pivot columns, ascending.
    pub free: Vec<u32>,
    /// For each pivot, its row restricted to the free columns (standard
    /// residues): `e_pivot + Σ_j reduced[i][j] e_{free[j]}`.
    pub reduced: Vec<Vec<u64>>,
}

impl ModRref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn compute(rows: &[IntRow], ncols: usize, prime: u64) -> ModRref {
        let f = Field::new(prime);
        let none = u32::MAX;
        let mut pivot_of_col = vec![none; ncols];
        // echelon rows: (leading column, Montgomery entries after the leading 1)
        let mut echelon: Vec<(u32, Vec<(u32, u64)>)> = Vec::new();
        let mut source: Vec<usize> = Vec::new();
        let mut acc = vec![0u64; ncols];
        for (ri, row) in rows.iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            let mut lo = usize::MAX;
            for &(c, v) in row {
                acc[c as usize] = f.add(acc[c as usize], f.from_i64(v));
                lo = lo.min(c as usize);
            }
            let mut hi = row.iter().map(|e| e.0 as usize).max().unwrap();
            let mut rest: Vec<(u32, u64)> = Vec::new();
            let mut c = lo;
            while c <= hi {
                let a = acc[c];
                if a != 0 {
                    acc[c] = 0;
                    let p = pivot_of_col[c];
                    if p != none {
                        let (_, prow) = &echelon[p as usize];
                        for &(j, v) in prow {
                            let j = j as usize;
                            acc[j] = f.sub(acc[j], f.mul(a, v));
                            if j > hi {
                                hi = j;
                            }
                        }
                    } else {
                        rest.push((c as u32, a));
                    }
                }
                c += 1;
            }
            if let Some(&(lead, a)) = rest.first() {
                let inv = f.inv(a);
                let tail: Vec<(u32, u64)> = rest[1..]
                    .iter()
                    .map(|&(j, v)| (j, f.mul(v, inv)))
                    .collect();
                pivot_of_col[lead as usize] = echelon.len() as u32;
                echelon.push((lead, tail));
                source.push(ri);
            }
        }

        let mut pivots: Vec<u32> = echelon.iter().map(|e| e.0).collect();
        pivots.sort_unstable();
        let free: Vec<u32> = (0..ncols as u32)
            .filter(|&c| pivot_of_col[c as usize] == none)
            .collect();
        let mut free_pos = vec![none; ncols];
        for (i, &c) in free.iter().enumerate() {
            free_pos[c as usize] = i as u32;
        }
        let q = free.len();
        // back substitution, highest pivot first
        let mut dense: Vec<Option<Vec<u64>>> = vec![None; echelon.len()];
        for &pc in pivots.iter().rev() {
            let ei = pivot_of_col[pc as usize] as usize;
            let mut out = vec![0u64; q];
            for &(j, v) in &echelon[ei].1 {
                let fp = free_pos[j as usize];
                if fp != none {
                    out[fp as usize] = f.add(out[fp as usize], v);
                } else {
                    let other = dense[pivot_of_col[j as usize] as usize]
                        .as_ref()
                        .expect("higher pivots are reduced first");
                    for (o, &w) in out.iter_mut().zip(other) {
                        if w != 0 {
                            *o = f.sub(*o, f.mul(v, w));
                        }
                    }
                }
            }
            dense[ei] = Some(out);
        }
        let mut reduced = Vec::with_capacity(pivots.len());
        let mut basis_rows = Vec::with_capacity(pivots.len());
        for &pc in &pivots {
            let ei = pivot_of_col[pc as usize] as usize;
            let row = dense[ei].take().unwrap();
            reduced.push(row.into_iter().map(|v| f.from_mont(v)).collect());
            basis_rows.push(source[ei]);
        }
        ModRref {
            prime,
            ncols,
            pivots,
            basis_rows,
            free,
            reduced,
        }
    }
}

/// Exact reduced row echelon form: pivot rows restricted to free columns.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactRref {
    pub ncols: usize,
    pub pivots: Vec<u32>,
    pub free: Vec<u32>,
    /// Sparse over free positions (indices into `free`).
    pub rows: Vec<Vec<(u32, Rational)>>,
}

/// Role of each column in an [`ExactRref`]: pivot row index or position
/// among the free columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Pivot(u32),
    Free(u32),
}

impl ExactRref {
    /// Row space of an empty relation set.
    pub fn empty(ncols: usize) -> ExactRref {
        ExactRref {
            ncols,
            pivots: Vec::new(),
            free: (0..ncols as u32).collect(),
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn roles(&self) -> Vec<Role> {
        let mut out = vec![Role::Free(0); self.ncols];
        for (i, &c) in self.pivots.iter().enumerate() {
            out[c as usize] = Role::Pivot(i as u32);
        }
        for (j, &c) in self.free.iter().enumerate() {
            out[c as usize] = Role::Free(j as u32);
        }
        out
    }

    /// Coordinates of a vector modulo the row space, over the free columns.
    pub fn reduce(&self, v: &[(u32, Rational)], roles: &[Role]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.free.len()];
        for (c, a) in v {
            if a.is_zero() {
                continue;
            }
            match roles[*c as usize] {
                Role::Free(j) => out[j as usize] += a,
                Role::Pivot(i) => {
                    for (j, w) in &self.rows[i as usize] {
                        out[*j as usize] -= a * w;
                    }
                }
            }
        }
        out
    }

    /// Whether an integer row lies in the row space: it must equal the
    /// combination of pivot rows given by its own pivot-column entries.
    pub fn contains_int_row(&self, row: &IntRow, roles: &[Role]) -> bool {
        let mut acc: HashMap<u32, Rational> = HashMap::new();
        for &(c, v) in row {
            let a = Rational::from_integer(BigInt::from(v));
            match roles[c as usize] {
                Role::Free(j) => *acc.entry(j).or_insert_with(Rational::zero) -= a,
                Role::Pivot(i) => {
                    for (j, w) in &self.rows[i as usize] {
                        *acc.entry(*j).or_insert_with(Rational::zero) += &a * w;
                    }
                }
            }
        }
        acc.values().all(|v| v.is_zero())
    }
}

/// Fresh primes for reconstruction rounds, disjoint from the usual defaults.
pub fn reconstruction_primes(count: usize) -> Vec<u64> {
    primes_descending_from((1u64 << 61) - 1, count)
}

/// Combines modular forms with identical pivot structure into an exact
/// form. The last prime is held out as a consistency check on every entry;
/// returns `None` when more primes are needed.
pub fn reconstruct_rref(forms: &[&ModRref]) -> Option<ExactRref> {
    assert!(forms.len() >= 2);
    let (check, used) = forms.split_last().unwrap();
    let first = used[0];
    let mut crt = Crt::new();
    for f in used {
        crt.extend(f.prime);
    }
    let mut rows = Vec::with_capacity(first.rank());
    for i in 0..first.rank() {
        let mut row = Vec::new();
        for j in 0..first.free.len() {
            let q = reconstruct_entry(used, &crt, |f| f.reduced[i][j])?;
            let field = Field::new(check.prime);
            let expect = field.from_rational(&q)?;
            if field.from_mont(expect) != check.reduced[i][j] {
                return None;
            }
            if !q.is_zero() {
                row.push((j as u32, q));
            }
        }
        rows.push(row);
    }
    Some(ExactRref {
        ncols: first.ncols,
        pivots: first.pivots.clone(),
        free: first.free.clone(),
        rows,
    })
}

fn reconstruct_entry<T>(forms: &[&T], crt: &Crt, get: impl Fn(&T) -> u64) -> Option<Rational>
where
    T: HasPrime,
{
    if forms.iter().all(|f| get(f) == 0) {
        return Some(Rational::zero());
    }
    let mut acc = BigInt::zero();
    let mut partial = Crt::new();
    for f in forms {
        acc = partial.combine(&acc, get(f), f.prime());
        partial.extend(f.prime());
    }
    debug_assert_eq!(partial.modulus, crt.modulus);
    rational_reconstruct(&acc, &crt.modulus)
}

trait HasPrime {
    fn prime(&self) -> u64;
}

impl HasPrime for ModRref {
    fn prime(&self) -> u64 {
        self.prime
    }
}

impl HasPrime for DenseKernel {
    fn prime(&self) -> u64 {
        self.prime
    }
}

/// Dense matrix RREF modulo `p`, returning pivot columns; `rows` is reduced in
/// place and holds Montgomery residues.
fn dense_rref(rows: &mut Vec<Vec<u64>>, ncols: usize, f: &Field) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
            continue;
        };
        rows.swap(r, k);
        let inv = f.inv(rows[r][c]);
        for v in rows[r].iter_mut() {
            *v = f.mul(*v, inv);
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == r || row[c] == 0 {
                continue;
            }
            let a = row[c];
            for (v, &w) in row.iter_mut().zip(&pivot_row).skip(c) {
                if w != 0 {
                    *v = f.sub(*v, f.mul(a, w));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Rank of a rational matrix modulo `p`; a lower bound on its rank over
/// the rationals. `None` when some denominator vanishes modulo `p`.
pub fn rank_mod(rows: &[Vec<Rational>], ncols: usize, p: u64) -> Option<usize> {
    let f = Field::new(p);
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|q| f.from_rational(q)).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()?;
    Some(dense_rref(&mut m, ncols, &f).len())
}

/// Pivot columns of `rows` modulo `p` (for choosing independent subsets).
pub fn pivot_rows_mod(rows: &[Vec<Rational>], ncols: usize, p: u64) -> Option<Vec<usize>> {
    // transpose: pivots of the transposed matrix pick independent rows
    let f = Field::new(p);
    let mut t: Vec<Vec<u64>> = (0..ncols)
        .map(|c| rows.iter().map(|r| f.from_rational(&r[c])).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()?;
    Some(dense_rref(&mut t, rows.len(), &f))
}

#[derive(Clone, Debug)]
struct DenseKernel {
    prime: u64,
    pivots: Vec<usize>,
    free: Vec<usize>,
    /// basis vector for free column `free[k]`: entries at pivot columns
    entries: Vec<Vec<u64>>,
}

fn dense_kernel_mod(rows: &[Vec<BigInt>], ncols: usize, p: u64) -> DenseKernel {
    let f = Field::new(p);
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|v| f.from_bigint(v)).collect())
        .collect();
    let pivots = dense_rref(&mut m, ncols, &f);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let entries = free
        .iter()
        .map(|&fc| {
            (0..pivots.len())
                .map(|i| f.from_mont(f.neg(m[i][fc])))
                .collect()
        })
        .collect();
    DenseKernel {
        prime: p,
        pivots,
        free,
        entries,
    }
}

/// Exact kernel basis of an integer matrix, one vector per free column in
/// reduced form (1 at its free column, 0 at the other free columns). Each
/// vector is verified by exact multiplication before it is returned.
pub fn exact_kernel(rows: &[Vec<BigInt>], ncols: usize) -> Result<Vec<Vec<Rational>>> {
    let mut primes = reconstruction_primes(2);
    let mut forms: Vec<DenseKernel> = primes.iter().map(|&p| dense_kernel_mod(rows, ncols, p)).collect();
    loop {
        let max_rank = forms.iter().map(|k| k.pivots.len()).max().unwrap();
        let good: Vec<&DenseKernel> = forms
            .iter()
            .filter(|k| k.pivots.len() == max_rank)
            .collect();
        if good.len() >= 2 && good.iter().all(|k| k.pivots == good[0].pivots) {
            if let Some(basis) = try_kernel(&good, ncols) {
                if basis.iter().all(|v| mat_vec_is_zero(rows, v)) {
                    return Ok(basis);
                }
            }
        }
        if primes.len() > 200 {
            return Err(Error::Reconstruction("kernel".into()));
        }
        let next = reconstruction_primes(primes.len() + 1)[primes.len()];
        primes.push(next);
        forms.push(dense_kernel_mod(rows, ncols, next));
    }
}

fn try_kernel(forms: &[&DenseKernel], ncols: usize) -> Option<Vec<Vec<Rational>>> {
    let (check, used) = forms.split_last().unwrap();
    let mut crt = Crt::new();
    for f in used {
        crt.extend(f.prime);
    }
    let first = used[0];
    let mut out = Vec::new();
    for (k, &fc) in first.free.iter().enumerate() {
        let mut v = vec![Rational::zero(); ncols];
        v[fc] = Rational::one();
        for (i, &pc) in first.pivots.iter().enumerate() {
            let q = reconstruct_entry(used, &crt, |f| f.entries[k][i])?;
            let field = Field::new(check.prime);
            if field.from_mont(field.from_rational(&q)?) != check.entries[k][i] {
                return None;
            }
            v[pc] = q;
        }
        out.push(v);
    }
    Some(out)
}

fn mat_vec_is_zero(rows: &[Vec<BigInt>], v: &[Rational]) -> bool {
    rows.iter().all(|r| {
        r.iter()
            .zip(v)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(Rational::zero(), |acc, (a, b)| acc + b * Rational::from_integer(a.clone()))
            .is_zero()
    })
}

/// Exact solution `c` of `Σ c_i basis[i] = target` when `basis` is linearly
/// independent; found modulo primes, reconstructed, and verified exactly.
/// `Ok(None)` when `target` is outside the span.
pub fn exact_solve(basis: &[Vec<Rational>], target: &[Rational]) -> Result<Option<Vec<Rational>>> {
    let n = basis.len();
    let len = target.len();
    if n == 0 {
        return Ok(target.iter().all(|t| t.is_zero()).then(Vec::new));
    }
    let mut primes = reconstruction_primes(2);
    let mut sols: Vec<(u64, Option<Vec<u64>>)> = Vec::new();
    let solve_mod = |p: u64| -> Option<Option<Vec<u64>>> {
        let f = Field::new(p);
        // augmented system: rows are coordinates, columns the basis + target
        let mut m: Vec<Vec<u64>> = Vec::with_capacity(len);
        for j in 0..len {
            let mut row = Vec::with_capacity(n + 1);
            for b in basis {
                row.push(f.from_rational(&b[j])?);
            }
            row.push(f.from_rational(&target[j])?);
            m.push(row);
        }
        let piv = dense_rref(&mut m, n + 1, &f);
        // a prime where the basis drops rank proves nothing either way
        if piv.iter().filter(|&&c| c < n).count() < n {
            return None;
        }
        if piv.contains(&n) {
            return Some(None);
        }
        Some(Some((0..n).map(|i| f.from_mont(m[i][n])).collect()))
    };
    for &p in &primes {
        if let Some(s) = solve_mod(p) {
            sols.push((p, s));
        }
    }
    loop {
        if sols.len() >= 2 {
            if sols.iter().all(|(_, s)| s.is_none()) {
                return Ok(None);
            }
            let good: Vec<&(u64, Option<Vec<u64>>)> = sols.iter().filter(|s| s.1.is_some()).collect();
            if good.len() >= 2 {
                let (check, used) = good.split_last().unwrap();
                let mut crt = Crt::new();
                for u in used {
                    crt.extend(u.0);
                }
                let mut coeffs = Vec::with_capacity(n);
                let mut ok = true;
                for i in 0..n {
                    let mut acc = BigInt::zero();
                    let mut partial = Crt::new();
                    for (p, s) in used.iter().map(|u| (u.0, u.1.as_ref().unwrap())) {
                        acc = partial.combine(&acc, s[i], p);
                        partial.extend(p);
                    }
                    match rational_reconstruct(&acc, &crt.modulus) {
                        Some(q) => {
                            let field = Field::new(check.0);
                            let r = field.from_rational(&q).map(|v| field.from_mont(v));
                            if r != Some(check.1.as_ref().unwrap()[i]) {
                                ok = false;
                                break;
                            }
                            coeffs.push(q);
                        }
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    let mut acc = vec![Rational::zero(); len];
                    for (c, b) in coeffs.iter().zip(basis) {
                        for (a, x) in acc.iter_mut().zip(b) {
                            if !x.is_zero() {
                                *a += c * x;
                            }
                        }
                    }
                    if acc.as_slice() == target {
                        return Ok(Some(coeffs));
                    }
                }
            }
        }
        if primes.len() > 200 {
            return Err(Error::Reconstruction("linear solve".into()));
        }
        let next = reconstruction_primes(primes.len() + 1)[primes.len()];
        primes.push(next);
        if let Some(s) = solve_mod(next) {
            sols.push((next, s));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::default_primes;
    use crate::{int, rat};

    fn brute_rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
        let mut m: Vec<Vec<Rational>> = rows.to_vec();
        let mut r = 0;
        for c in 0..ncols {
            let Some(k) = (r..m.len()).find(|&k| !m[k][c].is_zero()) else {
                continue;
            };
            m.swap(r, k);
            let p = m[r][c].clone();
            for k in 0..m.len() {
                if k != r && !m[k][c].is_zero() {
                    let a = &m[k][c] / &p;
                    for j in 0..ncols {
                        let d = &a * &m[r][j];
                        m[k][j] -= d;
                    }
                }
            }
            r += 1;
        }
        r
    }

    #[test]
    fn sparse_rref_matches_dense_and_reconstructs() {
        let rows: Vec<IntRow> = vec![
            vec![(0, 2), (3, 1)],
            vec![(1, 1), (2, -3), (4, 2)],
            vec![(0, 4), (3, 2)],
            vec![(2, 6), (4, 5)],
            vec![(0, 1), (1, 1), (2, 1)],
        ];
        let ps = default_primes();
        let forms: Vec<ModRref> = ps.iter().map(|&p| ModRref::compute(&rows, 5, p)).collect();
        assert_eq!(forms[0].rank(), 4);
        assert_eq!(forms[0].pivots, vec![0, 1, 2, 3]);
        assert_eq!(forms[0].free, vec![4]);
        assert_eq!(forms[0].basis_rows, vec![0, 1, 3, 4]);
        let dense: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| {
                let mut v = vec![int(0); 5];
                for &(c, x) in r {
                    v[c as usize] = int(x);
                }
                v
            })
            .collect();
        assert_eq!(brute_rank(&dense, 5), 4);
        let refs: Vec<&ModRref> = forms.iter().collect();
        let exact = reconstruct_rref(&refs).unwrap();
        let roles = exact.roles();
        for r in &rows {
            assert!(exact.contains_int_row(r, &roles));
        }
        assert!(!exact.contains_int_row(&vec![(4, 1)], &roles));
        // e_4 is not in the span; its class is itself
        let red = exact.reduce(&[(4, int(1))], &roles);
        assert_eq!(red, vec![int(1)]);
        // row 0 reduces to zero
        let red0 = exact.reduce(&[(0, int(2)), (3, int(1))], &roles);
        assert!(red0.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn kernel_and_solve() {
        let m = vec![
            vec![BigInt::from(1), BigInt::from(2), BigInt::from(3)],
            vec![BigInt::from(2), BigInt::from(4), BigInt::from(6)],
        ];
        let k = exact_kernel(&m, 3).unwrap();
        assert_eq!(k.len(), 2);
        assert_eq!(k[0], vec![int(-2), int(1), int(0)]);
        assert_eq!(k[1], vec![int(-3), int(0), int(1)]);
        let basis = vec![vec![int(1), int(0)], vec![int(1), int(2)]];
        let sol = exact_solve(&basis, &[rat(1, 3), int(5)]).unwrap().unwrap();
        assert_eq!(sol, vec![rat(1, 3) - rat(5, 2), rat(5, 2)]);
        let b1 = vec![vec![int(1), int(1)]];
        assert_eq!(exact_solve(&b1, &[int(1), int(0)]).unwrap(), None);
        assert_eq!(rank_mod(&basis, 2, default_primes()[0]), Some(2));
        assert_eq!(pivot_rows_mod(&[vec![int(1), int(1)], vec![int(2), int(2)], vec![int(0), int(1)]], 2, default_primes()[0]), Some(vec![0, 2]));
    }

    #[test]
    fn normalize_rows() {
        let mut r = vec![(3, -4), (1, -2), (3, 2), (5, 0)];
        normalize_int_row(&mut r);
        assert_eq!(r, vec![(1, 1), (3, 1)]);
    }
}
