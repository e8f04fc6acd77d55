//! Frobenius decompositions on two-dimensional Veronese subrings.
//!
//! Fix a prime p not dividing n and let R be the n-th Veronese subring of a
//! power series ring in two variables. The indecomposable maximal
//! Cohen-Macaulay R-modules are the degree classes I_0 = R, I_1, ...,
//! I_{n-1} (I_l is spanned by the monomials of total degree congruent to l
//! mod n), and the canonical module is the class n - 2. The e-th Frobenius
//! pushforward of I_l splits as a direct sum of classes; writing q = p^e
//! and sorting the q^2 root-monomial cosets x^(a/q) y^(b/q), 0 <= a, b < q,
//! by degree class gives the multiplicity of I_i as
//!
//! ```text
//! a[i] = #{ (a, b) : 0 <= a, b < q,  a + b = l - q*i  (mod n) }
//! ```
//!
//! The module computes these counts in closed form (per-residue counts of
//! [0, q), no pair enumeration), so exponents e in the dozens stay cheap,
//! and derives from them the splitting number, two certified bounds for the
//! surjective (dual F-signature) number, and an equidistribution-based
//! certified interval for the limit.

use crate::error::{Error, Result};
use crate::gf::is_prime;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A degree class I_l on the n-th Veronese subring in characteristic p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VeroneseModule {
    n: u64,
    l: u64,
    p: u64,
}

/// Multiplicities of the classes in one Frobenius pushforward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobDecomposition {
    pub p: u64,
    pub e: u32,
    /// q = p^e, exact.
    pub q: BigUint,
    /// mult[i] = multiplicity of class I_i; the entries sum to q^2.
    pub mult: Vec<BigUint>,
}

impl VeroneseModule {
    pub fn new(n: u64, l: u64, p: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::DegreeTooSmall(n));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n.is_multiple_of(p) {
            return Err(Error::PrimeDividesDegree { p, n });
        }
        if l >= n {
            return Err(Error::ClassOutOfRange { l, n });
        }
        Ok(VeroneseModule { n, l, p })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn class(&self) -> u64 {
        self.l
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Class index of the canonical module.
    pub fn canonical_class(n: u64) -> Result<u64> {
        if n < 2 {
            return Err(Error::DegreeTooSmall(n));
        }
        Ok(n - 2)
    }

    /// Decompose the e-th Frobenius pushforward of this class.
    pub fn decompose(&self, e: u32) -> FrobDecomposition {
        let n = self.n;
        let q = BigUint::from(self.p).pow(e);
        // residue_counts[r] = #{ a in [0, q) : a = r (mod n) }.
        let n_big = BigUint::from(n);
        let residue_counts: Vec<BigUint> = (0..n)
            .map(|r| {
                let r_big = BigUint::from(r);
                if r_big >= q {
                    BigUint::zero()
                } else {
                    (&q - &r_big - BigUint::one()) / &n_big + BigUint::one()
                }
            })
            .collect();
        // pair_counts[c] = #{ (a, b) in [0, q)^2 : a + b = c (mod n) }.
        let mut pair_counts = vec![BigUint::zero(); n as usize];
        for r in 0..n {
            for s in 0..n {
                let c = ((r + s) % n) as usize;
                pair_counts[c] += &residue_counts[r as usize] * &residue_counts[s as usize];
            }
        }
        let q_mod_n = (&q % &n_big).try_into().unwrap_or(0u64);
        let mult = (0..n)
            .map(|i| {
                // c = (l - q*i) mod n, computed without signed arithmetic.
                let qi = (q_mod_n % n) * (i % n) % n;
                let c = ((self.l % n) + n - qi) % n;
                pair_counts[c as usize].clone()
            })
            .collect();
        FrobDecomposition {
            p: self.p,
            e,
            q,
            mult,
        }
    }

    /// Number of free summands (copies of I_0 = R) in the e-th pushforward;
    /// divided by q^2 this converges to the F-signature of the class.
    pub fn splitting_number(&self, e: u32) -> BigUint {
        self.decompose(e).mult[0].clone()
    }

    /// Certified achievable/ceiling bounds on the surjective number b_q.
    pub fn dual_bounds(&self, e: u32) -> (BigUint, BigUint) {
        let d = self.decompose(e);
        (
            dual_b_lower(&d.mult, self.l),
            dual_b_upper(&d.mult, self.l),
        )
    }

    /// Interval certified to contain the limit of b_q / q^2 (the dual
    /// F-signature of the class), computed from the level-e bounds plus the
    /// equidistribution slack; see [`certified_interval`].
    pub fn certified_interval(&self, e: u32) -> (BigRational, BigRational) {
        let d = self.decompose(e);
        certified_interval(&d, self.l)
    }
}

/// Largest number of copies of I_l that the decomposition provably
/// surjects onto, by direct accounting:
///
/// * each copy of I_l maps onto one target copy via the identity;
/// * each unordered pair of classes {k, l-1-k} with k < l-1-k jointly
///   surjects onto one copy (multiplication by complementary pure powers),
///   giving min(mult[k], mult[l-1-k]) disjoint pairs;
/// * when l is odd the middle class k = (l-1)/2 pairs with itself,
///   floor(mult[k] / 2) more times.
pub fn dual_b_lower(mult: &[BigUint], l: u64) -> BigUint {
    let l = l as usize;
    let mut total = mult[l].clone();
    let mut k = 0usize;
    while l >= 1 && k < l - 1 - k {
        total += std::cmp::min(&mult[k], &mult[l - 1 - k]).clone();
        k += 1;
    }
    if l % 2 == 1 {
        total += &mult[(l - 1) / 2] / 2u32;
    }
    total
}

/// Ceiling on the surjective number: a surjection onto I_l^m stays
/// surjective modulo the maximal ideal, classes above l map into m*I_l, and
/// a class-i block hits at most an (i+1)-dimensional slice of the
/// (l+1)-dimensional generator space of each target copy. Hence
/// m * (l+1) <= sum_{i <= l} mult[i] * (i+1).
pub fn dual_b_upper(mult: &[BigUint], l: u64) -> BigUint {
    let l = l as usize;
    let mut weighted = BigUint::zero();
    for (i, m) in mult.iter().enumerate().take(l + 1) {
        weighted += m * BigUint::from(i as u64 + 1);
    }
    weighted / BigUint::from(l as u64 + 1)
}

/// Equidistribution bound: every multiplicity satisfies
/// |mult[i] - q^2/n| <= min(n, q). Writing q = n*floor(q/n) + rho, each
/// residue class of [0, q) has floor(q/n) or floor(q/n)+1 members, and the
/// convolution of two such near-uniform distributions deviates from q^2/n
/// by at most max(rho(n-rho), (n-rho)^2)/n < min(n, q) + 1 in every class.
fn deviation_bound(n: u64, q: &BigUint) -> BigUint {
    BigUint::from(n).min(q.clone())
}

/// Interval certified to contain the dual F-signature lim b_q / q^2 of
/// class l, anchored at the computed level-e bounds:
///
///   [ lower/q^2 - slack_L,  upper/q^2 + slack_U ]
///
/// clipped to [0, 1], where the slacks absorb the worst-case deviation of
/// the multiplicities from q^2/n (see [`deviation_bound`]): the lower count
/// uses 1 + floor(l/2) full terms and possibly one halved term, the upper
/// count a weight-(l+1)(l+2)/2 sum plus one floor. Both endpoints converge
/// to the common limit (l+2)/(2n) at rate O(1/q^2) relative to q^2.
pub fn certified_interval(d: &FrobDecomposition, l: u64) -> (BigRational, BigRational) {
    let n = d.mult.len() as u64;
    let q2 = BigRational::from_integer(BigInt::from(&d.q * &d.q));
    let dev = BigRational::from_integer(BigInt::from(deviation_bound(n, &d.q)));
    let lower = BigRational::from_integer(BigInt::from(dual_b_lower(&d.mult, l)));
    let upper = BigRational::from_integer(BigInt::from(dual_b_upper(&d.mult, l)));
    let big = |v: u64| BigRational::from_integer(BigInt::from(v));
    // Full-weight terms: the identity term plus the l/2 distinct pairs;
    // when l is odd the halved middle term costs dev/2 plus 1 for its floor.
    let slack_lower = &dev * big(1 + l / 2)
        + if l % 2 == 1 {
            &dev / big(2) + BigRational::one()
        } else {
            BigRational::zero()
        };
    let slack_upper = &dev * big((l + 2) * (l + 1) / 2) / big(l + 1) + BigRational::one();
    let zero = BigRational::zero();
    let one = BigRational::one();
    let lo = ((lower / &q2) - slack_lower / &q2).max(zero);
    let hi = ((upper / &q2) + slack_upper / &q2).min(one);
    (lo, hi)
}

/// Brute-force decomposition for cross-checks: enumerate the root-monomial
/// cosets (a, b) in [0, q)^2 and grade each one by the smallest total
/// degree sigma with q*sigma + a + b in the class of l mod n. Independent
/// of the closed-form path (no residue counting, no modular inverse).
pub fn decompose_brute_force(n: u64, l: u64, p: u64, e: u32) -> Result<Vec<BigUint>> {
    VeroneseModule::new(n, l, p)?;
    let q_big = BigUint::from(p).pow(e);
    let q: u64 = (&q_big)
        .try_into()
        .map_err(|_| Error::TooLarge(format!("brute-force decomposition at q = {q_big}")))?;
    if q > 1 << 16 {
        return Err(Error::TooLarge(format!(
            "brute-force decomposition at q = {q}"
        )));
    }
    let mut counts = vec![BigUint::zero(); n as usize];
    for a in 0..q {
        for b in 0..q {
            let class = (0..n)
                .find(|sigma| (q % n * (sigma % n) + a % n + b % n) % n == l % n)
                .expect("q invertible mod n, so every coset lands in a class");
            counts[class as usize] += BigUint::one();
        }
    }
    Ok(counts)
}
