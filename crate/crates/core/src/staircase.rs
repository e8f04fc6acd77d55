//! Monomial ideals and exact Hilbert-Kunz data.
//!
//! A monomial ideal is stored as the minimal antichain of its generator
//! exponents. For a zero-dimensional ideal the complement of its staircase
//! region is a finite union of half-open unit boxes with integer corners, so
//! the region's volume equals its lattice-point count and Frobenius bracket
//! powers dilate it exactly: `colength(I^[q]) = colength(I) * q^d`. That
//! identity is what makes the Hilbert-Kunz multiplicity of a monomial ideal
//! an exactly computable integer rather than a limit to extrapolate.

use crate::error::{Error, Result};
use crate::gf::is_prime;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::RangeInclusive;

/// Exponent vector of a monomial; coordinates are arbitrary-precision to
/// keep bracket powers exact at any q = p^e.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent {
    coords: Vec<BigUint>,
}

impl Exponent {
    pub fn new(coords: Vec<BigUint>) -> Self {
        Exponent { coords }
    }

    pub fn from_u64s(coords: &[u64]) -> Self {
        Exponent {
            coords: coords.iter().map(|&c| BigUint::from(c)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigUint] {
        &self.coords
    }

    /// Componentwise comparison: does this exponent divide `other` as a
    /// monomial, i.e. is it <= in every coordinate?
    pub fn divides(&self, other: &Exponent) -> bool {
        self.coords
            .iter()
            .zip(&other.coords)
            .all(|(a, b)| a <= b)
    }

    /// Componentwise maximum; the exponent of the lcm monomial.
    pub fn join(&self, other: &Exponent) -> Exponent {
        Exponent {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.max(b).clone())
                .collect(),
        }
    }

    pub fn scale(&self, q: &BigUint) -> Exponent {
        Exponent {
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }

    fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Index of the unique nonzero coordinate, if this is a pure power.
    fn pure_axis(&self) -> Option<usize> {
        let mut axis = None;
        for (j, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                if axis.is_some() {
                    return None;
                }
                axis = Some(j);
            }
        }
        axis
    }
}

fn var_name(j: usize, dim: usize) -> String {
    if dim <= 3 {
        ["x", "y", "z"][j].to_string()
    } else {
        format!("x{}", j + 1)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "1");
        }
        let dim = self.dim();
        let mut first = true;
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if c.is_one() {
                write!(f, "{}", var_name(j, dim))?;
            } else {
                write!(f, "{}^{}", var_name(j, dim), c)?;
            }
        }
        Ok(())
    }
}

/// A monomial ideal in d variables, stored as the sorted minimal antichain
/// of generator exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    dim: usize,
    gens: Vec<Exponent>,
}

/// One sample of the Hilbert-Kunz function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HKPoint {
    pub e: u32,
    /// q = p^e, exact.
    pub q: BigUint,
    /// colength of the bracket power I^[q].
    pub colength: BigUint,
}

impl MonomialIdeal {
    /// Build an ideal from an arbitrary generating set by discarding
    /// generators divisible by another generator (minimalization).
    pub fn new(gens: Vec<Exponent>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroAmbientDimension);
        }
        if gens.is_empty() {
            return Err(Error::EmptyIdeal);
        }
        for g in &gens {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch {
                    gen: g.to_string(),
                    got: g.dim(),
                    expected: dim,
                });
            }
        }
        let mut minimal: Vec<Exponent> = gens
            .iter()
            .filter(|g| !gens.iter().any(|h| h.divides(g) && !g.divides(h)))
            .cloned()
            .collect();
        minimal.sort();
        minimal.dedup();
        Ok(MonomialIdeal { dim, gens: minimal })
    }

    pub fn from_u64s(gens: &[&[u64]], dim: usize) -> Result<Self> {
        MonomialIdeal::new(
            gens.iter().map(|g| Exponent::from_u64s(g)).collect(),
            dim,
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The minimal generating exponents, sorted.
    pub fn generators(&self) -> &[Exponent] {
        &self.gens
    }

    /// Does the monomial with this exponent lie in the ideal?
    pub fn contains(&self, m: &Exponent) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    /// Containment of ideals: every generator of `self` lies in `other`.
    pub fn is_contained_in(&self, other: &MonomialIdeal) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    /// Per-axis bounding box of the standard monomials: coordinate j of any
    /// standard monomial is < box[j], where box[j] is the least pure-power
    /// exponent on axis j. Errors if some axis has no pure power.
    pub(crate) fn bounding_box(&self) -> Result<Vec<BigUint>> {
        let mut bounds: Vec<Option<BigUint>> = vec![None; self.dim];
        for g in &self.gens {
            if g.is_zero() {
                // Unit ideal: every monomial lies in it; empty box.
                return Ok(vec![BigUint::zero(); self.dim]);
            }
            if let Some(j) = g.pure_axis() {
                let c = &g.coords()[j];
                if bounds[j].as_ref().is_none_or(|b| c < b) {
                    bounds[j] = Some(c.clone());
                }
            }
        }
        bounds
            .into_iter()
            .enumerate()
            .map(|(j, b)| {
                b.ok_or(Error::NotZeroDimensional {
                    var: var_name(j, self.dim),
                })
            })
            .collect()
    }

    /// True iff the quotient by the ideal is finite-dimensional, i.e. every
    /// axis carries a pure-power generator.
    pub fn is_zero_dimensional(&self) -> bool {
        self.bounding_box().is_ok()
    }

    /// Frobenius bracket power I^[q]: each generator exponent is scaled by
    /// q. Scaling preserves divisibility both ways, so the scaled antichain
    /// is already minimal.
    pub fn bracket_power(&self, q: &BigUint) -> MonomialIdeal {
        MonomialIdeal {
            dim: self.dim,
            gens: self.gens.iter().map(|g| g.scale(q)).collect(),
        }
    }

    /// Number of standard monomials (monomials outside the ideal), i.e. the
    /// k-dimension of the quotient. Exact count by inclusion-exclusion over
    /// generator subsets: the monomials inside the ideal within the bounding
    /// box form a union of shifted orthants, and the volume of each
    /// intersection is a clipped box with corner at the componentwise join.
    pub fn colength(&self) -> Result<BigUint> {
        let bounds = self.bounding_box()?;
        let mut total = BigUint::one();
        for b in &bounds {
            total *= b;
        }
        let mut union = BigInt::zero();
        // Depth-first over generator subsets carrying the running join and
        // alternating sign. A join that already leaves the box contributes
        // zero for every superset, so that branch is pruned.
        fn clipped_volume(join: &Exponent, bounds: &[BigUint]) -> Option<BigUint> {
            let mut vol = BigUint::one();
            for (c, b) in join.coords().iter().zip(bounds) {
                if c >= b {
                    return None;
                }
                vol *= b - c;
            }
            Some(vol)
        }
        fn walk(
            gens: &[Exponent],
            start: usize,
            join: &Exponent,
            sign: i32,
            bounds: &[BigUint],
            acc: &mut BigInt,
        ) {
            for i in start..gens.len() {
                let next = join.join(&gens[i]);
                if let Some(vol) = clipped_volume(&next, bounds) {
                    let v = BigInt::from(vol);
                    if sign > 0 {
                        *acc += v;
                    } else {
                        *acc -= v;
                    }
                    walk(gens, i + 1, &next, -sign, bounds, acc);
                }
            }
        }
        let origin = Exponent::new(vec![BigUint::zero(); self.dim]);
        walk(&self.gens, 0, &origin, 1, &bounds, &mut union);
        let total = BigInt::from(total);
        let standard = &total - &union;
        standard
            .try_into()
            .map_err(|_| Error::TooLarge("negative standard monomial count".into()))
    }

    /// Hilbert-Kunz function: colength of I^[p^e] for e over the range.
    pub fn hk_function(&self, p: u64, e_range: RangeInclusive<u32>) -> Result<Vec<HKPoint>> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut points = Vec::new();
        for e in e_range {
            let q = BigUint::from(p).pow(e);
            let colength = self.bracket_power(&q).colength()?;
            points.push(HKPoint { e, q, colength });
        }
        Ok(points)
    }

    /// Exact Hilbert-Kunz multiplicity. The staircase complement is a union
    /// of half-open unit boxes with integer corners, so its volume equals
    /// the lattice-point count and the limit of colength(I^[q]) / q^d is
    /// attained exactly at q = 1.
    pub fn hk_exact(&self) -> Result<BigRational> {
        Ok(BigRational::from_integer(BigInt::from(self.colength()?)))
    }

    /// Standard monomials sent into the ideal by every variable: these span
    /// the socle of the quotient. A socle exponent must have coordinate
    /// g_j - 1 on axis j for some generator g with positive j-coordinate,
    /// so only finitely many candidates need checking.
    pub fn socle_monomials(&self) -> Result<Vec<Exponent>> {
        // Zero-dimensionality is required for the socle to be computed from
        // finitely many candidates (and for the quotient to be Artinian).
        let _ = self.bounding_box()?;
        let one = BigUint::one();
        let mut axis_candidates: Vec<Vec<BigUint>> = vec![Vec::new(); self.dim];
        for g in &self.gens {
            for (j, c) in g.coords().iter().enumerate() {
                if !c.is_zero() {
                    let v = c - &one;
                    if !axis_candidates[j].contains(&v) {
                        axis_candidates[j].push(v);
                    }
                }
            }
        }
        for cands in &mut axis_candidates {
            if cands.is_empty() {
                // Unit ideal: no standard monomials, empty socle.
                return Ok(Vec::new());
            }
            cands.sort();
        }
        let mut socle = Vec::new();
        let mut pick = vec![0usize; self.dim];
        'outer: loop {
            let coords: Vec<BigUint> = pick
                .iter()
                .enumerate()
                .map(|(j, &i)| axis_candidates[j][i].clone())
                .collect();
            let m = Exponent::new(coords);
            if !self.contains(&m) {
                let in_socle = (0..self.dim).all(|j| {
                    let mut up = m.clone();
                    up.coords[j] += &one;
                    self.contains(&up)
                });
                if in_socle {
                    socle.push(m);
                }
            }
            for j in 0..self.dim {
                pick[j] += 1;
                if pick[j] < axis_candidates[j].len() {
                    continue 'outer;
                }
                pick[j] = 0;
            }
            break;
        }
        socle.sort();
        Ok(socle)
    }
}

/// Relative Hilbert-Kunz multiplicity e_HK(I) - e_HK(J) for I contained in
/// J; nonnegative because enlarging an ideal shrinks the staircase
/// complement.
pub fn relative_hk(inner: &MonomialIdeal, outer: &MonomialIdeal) -> Result<BigRational> {
    if inner.dim() != outer.dim() {
        return Err(Error::DimensionMismatch {
            gen: "second ideal".into(),
            got: outer.dim(),
            expected: inner.dim(),
        });
    }
    for g in inner.generators() {
        if !outer.contains(g) {
            return Err(Error::NotContained { gen: g.to_string() });
        }
    }
    Ok(inner.hk_exact()? - outer.hk_exact()?)
}

/// Minimum over socle monomials Delta of the relative multiplicity
/// e_HK(I) - e_HK(I + Delta), for a monomial parameter ideal I (pure powers
/// on every axis). The minimum over monomial socle representatives only, so
/// the returned value is an upper bound for the corresponding infimum over
/// all socle elements; it is reported as such.
pub fn r_estimate(ideal: &MonomialIdeal) -> Result<BigRational> {
    for g in ideal.generators() {
        if g.pure_axis().is_none() {
            return Err(Error::NotParameterIdeal { gen: g.to_string() });
        }
    }
    // Pure powers on every axis, otherwise the quotient is not Artinian.
    let _ = ideal.bounding_box()?;
    let socle = ideal.socle_monomials()?;
    let mut best: Option<BigRational> = None;
    for delta in socle {
        let mut gens = ideal.generators().to_vec();
        gens.push(delta);
        let enlarged = MonomialIdeal::new(gens, ideal.dim())?;
        let val = relative_hk(ideal, &enlarged)?;
        if best.as_ref().is_none_or(|b| &val < b) {
            best = Some(val);
        }
    }
    best.ok_or(Error::NotParameterIdeal {
        gen: "1".into(),
    })
}

/// Parse a comma-separated list of monomials: variables x, y, z (or
/// x1..xd), `^` for powers, `*` optional between factors. Examples:
/// `x^2,x*y,y^2` and `x1^3, x2 x3^2`.
pub fn parse_ideal(text: &str) -> Result<MonomialIdeal> {
    let mut monomials: Vec<Vec<(usize, BigUint)>> = Vec::new();
    let mut max_var = 0usize;
    for part in text.split(',') {
        let trimmed = part.trim();
        if trimmed.is_empty() {
            return Err(Error::MonomialSyntax {
                token: ",".into(),
                reason: "empty monomial between commas".into(),
            });
        }
        let factors = parse_monomial(trimmed)?;
        for &(v, _) in &factors {
            max_var = max_var.max(v + 1);
        }
        monomials.push(factors);
    }
    if monomials.is_empty() {
        return Err(Error::EmptyIdeal);
    }
    let dim = max_var.max(1);
    let gens = monomials
        .into_iter()
        .map(|factors| {
            let mut coords = vec![BigUint::zero(); dim];
            for (v, e) in factors {
                coords[v] += e;
            }
            Exponent::new(coords)
        })
        .collect();
    MonomialIdeal::new(gens, dim)
}

fn parse_monomial(text: &str) -> Result<Vec<(usize, BigUint)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0usize;
    let mut factors = Vec::new();
    let syntax = |token: &str, reason: &str| Error::MonomialSyntax {
        token: token.to_string(),
        reason: reason.to_string(),
    };
    let mut expect_factor = true;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '*' {
            if expect_factor {
                return Err(syntax("*", "expected a variable before `*`"));
            }
            expect_factor = true;
            i += 1;
            continue;
        }
        if c == '1' && factors.is_empty() && chars[i..].iter().all(|&d| d == '1' || d.is_whitespace())
        {
            // The unit monomial.
            return Ok(Vec::new());
        }
        match c {
            'x' | 'y' | 'z' => {
                i += 1;
                let var = if c == 'x' && i < chars.len() && chars[i].is_ascii_digit() {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let idx: usize = chars[start..i]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|_| syntax(&chars[start..i].iter().collect::<String>(), "bad variable index"))?;
                    if idx == 0 {
                        return Err(syntax("x0", "variable indices start at 1"));
                    }
                    idx - 1
                } else {
                    match c {
                        'x' => 0,
                        'y' => 1,
                        _ => 2,
                    }
                };
                let mut exp = BigUint::one();
                let mut j = i;
                while j < chars.len() && chars[j].is_whitespace() {
                    j += 1;
                }
                if j < chars.len() && chars[j] == '^' {
                    i = j + 1;
                    while i < chars.len() && chars[i].is_whitespace() {
                        i += 1;
                    }
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if start == i {
                        return Err(syntax("^", "expected digits after `^`"));
                    }
                    let digits: String = chars[start..i].iter().collect();
                    exp = digits
                        .parse()
                        .map_err(|_| syntax(&digits, "bad exponent"))?;
                }
                factors.push((var, exp));
                expect_factor = false;
            }
            other => {
                return Err(syntax(
                    &other.to_string(),
                    "expected a variable (x, y, z or x1..xd)",
                ));
            }
        }
    }
    if expect_factor {
        return Err(syntax("*", "dangling `*` at end of monomial"));
    }
    Ok(factors)
}
