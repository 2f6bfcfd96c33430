//! Word-size prime field arithmetic (Montgomery form), deterministic prime
//! generation, Chinese remaindering and rational reconstruction.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// The `count` largest primes below `2^62`, descending.
pub fn primes_below_2_62(count: usize) -> Vec<u64> {
    primes_descending_from((1u64 << 62) - 1, count)
}

pub fn primes_descending_from(start: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = start | 1;
    while out.len() < count {
        if is_prime_u64(n) {
            out.push(n);
        }
        n -= 2;
    }
    out
}

/// Default triple of 62-bit elimination primes.
pub fn default_primes() -> Vec<u64> {
    primes_below_2_62(3)
}

/// Montgomery arithmetic modulo an odd prime `p < 2^62`.
#[derive(Clone, Copy, Debug)]
pub struct Field {
    pub p: u64,
    neg_pinv: u64,
    r2: u64,
}

impl Field {
    pub fn new(p: u64) -> Field {
        assert!(p % 2 == 1 && p < (1 << 62), "modulus must be odd and below 2^62");
        // Newton iteration for p^{-1} mod 2^64
        let mut inv: u64 = 1;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = mul_mod(r, r, p);
        Field {
            p,
            neg_pinv: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline(always)]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_pinv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    /// Product of two Montgomery-form residues.
    #[inline(always)]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline(always)]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    pub fn from_i64(&self, a: i64) -> u64 {
        let v = if a >= 0 {
            a as u64 % self.p
        } else {
            self.neg((a.unsigned_abs()) % self.p)
        };
        self.to_mont(v)
    }

    pub fn from_bigint(&self, a: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let r = a.mod_floor(&m);
        let (_, digits) = r.to_u64_digits();
        self.to_mont(digits.first().copied().unwrap_or(0))
    }

    /// `None` when the denominator vanishes modulo `p`.
    pub fn from_rational(&self, q: &Rational) -> Option<u64> {
        let d = self.from_bigint(q.denom());
        if d == 0 {
            return None;
        }
        Some(self.mul(self.from_bigint(q.numer()), self.inv(d)))
    }

    pub fn one(&self) -> u64 {
        self.to_mont(1)
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Inverse of a nonzero Montgomery-form residue.
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }
}

/// Incremental Chinese remaindering of many residues.
#[derive(Clone, Debug)]
pub struct Crt {
    pub modulus: BigInt,
}

impl Crt {
    pub fn new() -> Crt {
        Crt {
            modulus: BigInt::one(),
        }
    }

    /// Combines `acc (mod modulus)` with `r (mod p)`.
    pub fn combine(&self, acc: &BigInt, r: u64, p: u64) -> BigInt {
        let pb = BigInt::from(p);
        let acc_mod_p = acc.mod_floor(&pb);
        let diff = (BigInt::from(r) - acc_mod_p).mod_floor(&pb);
        let m_mod_p = self.modulus.mod_floor(&pb);
        let inv = mod_inverse(&m_mod_p, &pb).expect("moduli are coprime");
        let k = (diff * inv).mod_floor(&pb);
        acc + &self.modulus * k
    }

    pub fn extend(&mut self, p: u64) {
        self.modulus *= BigInt::from(p);
    }
}

impl Default for Crt {
    fn default() -> Self {
        Self::new()
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Smallest-height rational `n/d ≡ a (mod m)` with `|n|, d ≤ √(m/2)`.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let a = a.mod_floor(m);
    if a.is_zero() {
        return Some(Rational::zero());
    }
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if !r1.gcd(&t1).is_one() {
        return None;
    }
    let (n, d) = if t1.sign() == Sign::Minus {
        (-r1, -t1)
    } else {
        (r1, t1)
    };
    Some(Rational::new(n, d))
}

/// Signed lift of a residue into `(-p/2, p/2]`.
pub fn symmetric_lift(a: u64, p: u64) -> i128 {
    if a > p / 2 {
        a as i128 - p as i128
    } else {
        a as i128
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn default_primes_are_prime_and_distinct() {
        let ps = default_primes();
        assert_eq!(ps.len(), 3);
        for &p in &ps {
            assert!(is_prime_u64(p));
            assert!(p > 1 << 61 && p < 1 << 62);
        }
        assert!(ps[0] > ps[1] && ps[1] > ps[2]);
        assert!(!is_prime_u64(1 << 61));
        assert!(is_prime_u64(2305843009213693951)); // 2^61 - 1
        assert!(!is_prime_u64(3215031751)); // strong pseudoprime to 2,3,5,7
    }

    #[test]
    fn montgomery_round_trip() {
        let f = Field::new(default_primes()[0]);
        let a = f.from_i64(-7);
        let b = f.from_i64(3);
        assert_eq!(f.from_mont(f.mul(a, b)), f.p - 21);
        assert_eq!(f.mul(b, f.inv(b)), f.one());
        assert_eq!(f.from_mont(f.add(a, b)), f.p - 4);
        assert_eq!(f.from_rational(&rat(1, 2)).map(|h| f.mul(h, f.from_i64(2))), Some(f.one()));
    }

    #[test]
    fn reconstruct_small_fractions() {
        let ps = primes_below_2_62(2);
        for q in [rat(-3, 7), rat(5, 128), rat(0, 1), rat(123456789, 1000003)] {
            let mut crt = Crt::new();
            let mut acc = BigInt::zero();
            for &p in &ps {
                let f = Field::new(p);
                let r = f.from_mont(f.from_rational(&q).unwrap());
                acc = crt.combine(&acc, r, p);
                crt.extend(p);
            }
            assert_eq!(rational_reconstruct(&acc, &crt.modulus), Some(q));
        }
    }
}
