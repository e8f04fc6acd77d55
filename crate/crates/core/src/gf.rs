//! Finite fields GF(p^k) with runtime-chosen size.
//!
//! Elements are `u64` encodings: the polynomial c_0 + c_1 t + ... over F_p
//! is stored as the base-p integer c_0 + c_1 p + ... (so prime-field
//! elements are just residues, and the constants 0 and 1 encode themselves
//! in every field). Prime fields use direct modular arithmetic; proper
//! extensions multiply through discrete-log tables built once per field,
//! which keeps Gaussian elimination cheap for the table-sized fields
//! (size <= 2^20) this crate needs.

use crate::error::{Error, Result};
use rand::Rng;
use std::sync::Arc;

/// Largest extension-field size for which multiplication tables are built.
pub const MAX_TABLE_FIELD: u64 = 1 << 20;

#[derive(Debug)]
struct GfInner {
    p: u64,
    degree: u32,
    size: u64,
    /// Monic irreducible modulus for degree >= 2, coefficients little-endian.
    modulus: Vec<u64>,
    /// exp[i] = generator^i for i in [0, size-1); empty for prime fields.
    exp: Vec<u64>,
    /// log[enc] = discrete log of enc for enc in [1, size); log[0] unused.
    log: Vec<u32>,
}

/// A finite field handle; cheap to clone and compare.
#[derive(Clone, Debug)]
pub struct Gf(Arc<GfInner>);

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.degree == other.0.degree
    }
}
impl Eq for Gf {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= n) {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Write n as p^k with p prime, if possible.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 0u64;
    let mut d = 2u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= n) {
        if n.is_multiple_of(d) {
            p = d;
            break;
        }
        d += 1;
    }
    if p == 0 {
        return Some((n, 1));
    }
    let mut m = n;
    let mut k = 0u32;
    while m.is_multiple_of(p) {
        m /= p;
        k += 1;
    }
    if m == 1 {
        Some((p, k))
    } else {
        None
    }
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut fs = Vec::new();
    let mut d = 2u64;
    while d.checked_mul(d).is_some_and(|sq| sq <= n) {
        if n.is_multiple_of(d) {
            fs.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        fs.push(n);
    }
    fs
}

// Little-endian polynomial arithmetic over F_p, used only while building a
// field's tables.
fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let factor = (r[dr] * lead_inv) % p;
        for (i, &bi) in b.iter().enumerate().take(db + 1) {
            let idx = dr - db + i;
            let sub = (factor * bi) % p;
            r[idx] = (r[idx] + p - sub) % p;
        }
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn poly_mul_rem(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    poly_rem(&prod, modulus, p)
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Extended Euclid; a != 0 mod p.
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    debug_assert_eq!(old_r, 1);
    (old_s.rem_euclid(p as i128)) as u64
}

fn encode(poly: &[u64], p: u64) -> u64 {
    poly.iter().rev().fold(0u64, |acc, &c| acc * p + c)
}

fn decode(mut enc: u64, p: u64, degree: u32) -> Vec<u64> {
    let mut coeffs = Vec::with_capacity(degree as usize);
    for _ in 0..degree {
        coeffs.push(enc % p);
        enc /= p;
    }
    poly_trim(&mut coeffs);
    coeffs
}

/// First monic irreducible of the given degree over F_p, by trial division
/// against all lower-degree monic polynomials. Deterministic, so every run
/// builds the same field.
fn find_irreducible(p: u64, degree: u32) -> Vec<u64> {
    let tail_count = p.pow(degree);
    'candidates: for tail in 0..tail_count {
        let mut cand = decode(tail, p, degree);
        cand.resize(degree as usize + 1, 0);
        cand[degree as usize] = 1;
        if cand[0] == 0 {
            continue; // divisible by t
        }
        for div_deg in 1..=degree / 2 {
            for dtail in 0..p.pow(div_deg) {
                let mut div = decode(dtail, p, div_deg);
                div.resize(div_deg as usize + 1, 0);
                div[div_deg as usize] = 1;
                if poly_rem(&cand, &div, p).is_empty() {
                    continue 'candidates;
                }
            }
        }
        return cand;
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}

impl Gf {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Gf> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= (1 << 31) {
            return Err(Error::TooLarge(format!("prime field size {p} (max 2^31)")));
        }
        Ok(Gf(Arc::new(GfInner {
            p,
            degree: 1,
            size: p,
            modulus: Vec::new(),
            exp: Vec::new(),
            log: Vec::new(),
        })))
    }

    /// The field GF(p^degree).
    pub fn extension(p: u64, degree: u32) -> Result<Gf> {
        if degree == 0 {
            return Err(Error::NotPrimePower(1));
        }
        if degree == 1 {
            return Gf::prime(p);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let size = p
            .checked_pow(degree)
            .filter(|&s| s <= MAX_TABLE_FIELD)
            .ok_or_else(|| {
                Error::TooLarge(format!(
                    "extension field size {p}^{degree} (max {MAX_TABLE_FIELD})"
                ))
            })?;
        let modulus = find_irreducible(p, degree);
        // Find a generator of the multiplicative group, then lay out the
        // discrete-log tables.
        let order = size - 1;
        let factors = distinct_prime_factors(order);
        let pow = |base: &[u64], mut n: u64| -> Vec<u64> {
            let mut result = vec![1u64];
            let mut sq = base.to_vec();
            while n > 0 {
                if n & 1 == 1 {
                    result = poly_mul_rem(&result, &sq, &modulus, p);
                }
                sq = poly_mul_rem(&sq, &sq, &modulus, p);
                n >>= 1;
            }
            result
        };
        let mut generator = Vec::new();
        for g_enc in 1..size {
            let g = decode(g_enc, p, degree);
            if factors
                .iter()
                .all(|&f| encode(&pow(&g, order / f), p) != 1)
            {
                generator = g;
                break;
            }
        }
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; size as usize];
        let mut cur = vec![1u64];
        for i in 0..order {
            let enc = encode(&cur, p);
            exp.push(enc);
            log[enc as usize] = i as u32;
            cur = poly_mul_rem(&cur, &generator, &modulus, p);
        }
        debug_assert_eq!(encode(&cur, p), 1, "generator order must divide size - 1");
        Ok(Gf(Arc::new(GfInner {
            p,
            degree,
            size,
            modulus,
            exp,
            log,
        })))
    }

    /// Field of the given size, which must be a prime power.
    pub fn of_size(size: u64) -> Result<Gf> {
        let (p, k) = prime_power(size).ok_or(Error::NotPrimePower(size))?;
        Gf::extension(p, k)
    }

    /// Smallest field of characteristic p with at least `min_size` elements.
    pub fn of_char_with_min_size(p: u64, min_size: u64) -> Result<Gf> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut degree = 1u32;
        let mut size = p;
        while size < min_size {
            size = size.checked_mul(p).ok_or_else(|| {
                Error::TooLarge(format!("field of characteristic {p} above {min_size}"))
            })?;
            degree += 1;
        }
        Gf::extension(p, degree)
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    pub fn size(&self) -> u64 {
        self.0.size
    }

    /// The modulus polynomial for extensions (little-endian coefficients);
    /// empty for prime fields.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        1
    }

    /// Canonical embedding of an integer as a constant field element.
    pub fn from_int(&self, n: u64) -> u64 {
        n % self.0.p
    }

    pub fn from_signed(&self, n: i64) -> u64 {
        n.rem_euclid(self.0.p as i64) as u64
    }

    pub fn is_element(&self, a: u64) -> bool {
        // Every integer below the size is a valid base-p digit string.
        a < self.0.size
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let f = &*self.0;
        if f.degree == 1 {
            return (a + b) % f.p;
        }
        if f.p == 2 {
            return a ^ b;
        }
        // Digitwise addition base p.
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..f.degree {
            out += ((a % f.p + b % f.p) % f.p) * place;
            a /= f.p;
            b /= f.p;
            place *= f.p;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        let f = &*self.0;
        if f.degree == 1 {
            return if a == 0 { 0 } else { f.p - a };
        }
        if f.p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..f.degree {
            let d = a % f.p;
            out += (if d == 0 { 0 } else { f.p - d }) * place;
            a /= f.p;
            place *= f.p;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let f = &*self.0;
        if a == 0 || b == 0 {
            return 0;
        }
        if f.degree == 1 {
            return (a * b) % f.p;
        }
        let order = f.size - 1;
        let idx = (f.log[a as usize] as u64 + f.log[b as usize] as u64) % order;
        f.exp[idx as usize]
    }

    /// Multiplicative inverse; panics on zero, which is always a caller bug.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        let f = &*self.0;
        if f.degree == 1 {
            return mod_inv(a, f.p);
        }
        let order = f.size - 1;
        let idx = (order - f.log[a as usize] as u64) % order;
        f.exp[idx as usize]
    }

    pub fn pow(&self, a: u64, mut n: u64) -> u64 {
        let mut result = 1u64;
        let mut base = a;
        while n > 0 {
            if n & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        result
    }

    /// Uniformly random field element.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.0.size)
    }

    /// Uniformly random nonzero field element.
    pub fn sample_nonzero<R: Rng>(&self, rng: &mut R) -> u64 {
        rng.gen_range(1..self.0.size)
    }

    /// All field elements, in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.0.size
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn primality_and_prime_powers() {
        assert!(is_prime(2) && is_prime(3) && is_prime(101));
        assert!(!is_prime(1) && !is_prime(91) && !is_prime(0));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(243), Some((3, 5)));
        assert_eq!(prime_power(101), Some((101, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Gf::prime(7).unwrap();
        assert_eq!(f.add(5, 4), 2);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(3), 5);
        assert_eq!(f.neg(2), 5);
        assert_eq!(f.pow(3, 6), 1);
    }

    fn field_axioms_hold(f: &Gf) {
        let els: Vec<u64> = f.elements().collect();
        for &a in &els {
            assert_eq!(f.add(a, f.neg(a)), 0);
            assert_eq!(f.mul(a, 1), a);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1, "a={a}");
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in &els {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn small_extension_fields_satisfy_axioms() {
        field_axioms_hold(&Gf::extension(2, 3).unwrap());
        field_axioms_hold(&Gf::extension(3, 2).unwrap());
        field_axioms_hold(&Gf::prime(5).unwrap());
    }

    #[test]
    fn extension_field_has_right_characteristic() {
        let f = Gf::extension(5, 3).unwrap();
        assert_eq!(f.size(), 125);
        assert_eq!(f.characteristic(), 5);
        // 1 added to itself p times vanishes.
        let mut acc = 0;
        for _ in 0..5 {
            acc = f.add(acc, 1);
        }
        assert_eq!(acc, 0);
        // Frobenius fixes exactly the prime subfield: a^p = a has p roots.
        let fixed = f.elements().filter(|&a| f.pow(a, 5) == a).count();
        assert_eq!(fixed, 5);
    }

    #[test]
    fn of_char_with_min_size_rounds_up() {
        let f = Gf::of_char_with_min_size(2, 101).unwrap();
        assert_eq!(f.size(), 128);
        let g = Gf::of_char_with_min_size(101, 101).unwrap();
        assert_eq!(g.size(), 101);
        let h = Gf::of_char_with_min_size(3, 101).unwrap();
        assert_eq!(h.size(), 243);
    }

    #[test]
    fn sampling_stays_in_range_and_is_seeded() {
        let f = Gf::extension(3, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws: Vec<u64> = (0..50).map(|_| f.sample(&mut rng)).collect();
        assert!(draws.iter().all(|&a| f.is_element(a)));
        let mut rng2 = ChaCha8Rng::seed_from_u64(11);
        let draws2: Vec<u64> = (0..50).map(|_| f.sample(&mut rng2)).collect();
        assert_eq!(draws, draws2);
    }
}
