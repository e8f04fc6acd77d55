//! Normalized limit estimation for characteristic-p invariant series.
//!
//! A series holds exact nonnegative counts indexed by Frobenius powers
//! q = p^e. Normalizing by q^delta and taking tail maxima produces
//! estimates of the limiting invariants (F-signature and its dual); the
//! growth-order fit recovers the exponent at which a count sequence
//! grows, which identifies the surjective dimension of a module and the
//! finite ratio at that exponent. The classifier turns certified interval
//! bounds on the two signatures into singularity verdicts; purely
//! numerical estimates without certified bounds never classify.

use crate::error::{Error, Result};
use crate::gf::is_prime;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

/// One exact sample: the count at q = p^e.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesPoint {
    pub e: u32,
    pub q: BigUint,
    pub count: BigUint,
}

/// A sequence of exact counts with a normalization exponent. Ingestion
/// enforces count <= q^delta, so normalized terms never exceed 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSeries {
    p: u64,
    delta: u32,
    points: Vec<SeriesPoint>,
}

impl InvariantSeries {
    pub fn new(p: u64, delta: u32) -> Result<InvariantSeries> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(InvariantSeries {
            p,
            delta,
            points: Vec::new(),
        })
    }

    /// Append the count at e; keeps the series sorted by e.
    pub fn push(&mut self, e: u32, count: BigUint) -> Result<()> {
        let q = BigUint::from(self.p).pow(e);
        let ceiling = q.pow(self.delta);
        if count > ceiling {
            return Err(Error::CountExceedsGrowth {
                count: count.to_string(),
                e,
                delta: self.delta,
            });
        }
        let point = SeriesPoint { e, q, count };
        let at = self
            .points
            .binary_search_by_key(&e, |pt| pt.e)
            .unwrap_or_else(|i| i);
        self.points.insert(at, point);
        Ok(())
    }

    pub fn from_counts(p: u64, delta: u32, counts: &[(u32, BigUint)]) -> Result<InvariantSeries> {
        let mut s = InvariantSeries::new(p, delta)?;
        for (e, c) in counts {
            s.push(*e, c.clone())?;
        }
        Ok(s)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn delta(&self) -> u32 {
        self.delta
    }

    pub fn points(&self) -> &[SeriesPoint] {
        &self.points
    }

    /// count / q^delta at the given index, exactly.
    pub fn normalized(&self, idx: usize) -> BigRational {
        let pt = &self.points[idx];
        BigRational::new(
            BigInt::from(pt.count.clone()),
            BigInt::from(pt.q.pow(self.delta)),
        )
    }

    /// The same points under a different normalization exponent. No
    /// ceiling check: renormalized diagnostics may exceed 1.
    fn renormalized(&self, delta: u32) -> InvariantSeries {
        InvariantSeries {
            p: self.p,
            delta,
            points: self.points.clone(),
        }
    }
}

/// A windowed tail estimate of a limiting value, with an optional
/// certified enclosure of the true limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Estimate {
    /// Maximum of the last `window` normalized terms.
    pub value: BigRational,
    pub window: usize,
    /// Max minus min over that window; small gaps indicate convergence.
    pub cauchy_gap: BigRational,
    pub lower: Option<BigRational>,
    pub upper: Option<BigRational>,
}

impl Estimate {
    pub fn exact(value: BigRational) -> Estimate {
        Estimate {
            value: value.clone(),
            window: 1,
            cauchy_gap: BigRational::zero(),
            lower: Some(value.clone()),
            upper: Some(value),
        }
    }

    /// Attach a certified enclosure of the limit. The finite-level value
    /// may fall outside a tight enclosure, so the bounds are widened to
    /// contain it: lower <= value <= upper always holds afterwards.
    pub fn attach_bounds(&mut self, lower: BigRational, upper: BigRational) {
        self.lower = Some(lower.min(self.value.clone()));
        self.upper = Some(upper.max(self.value.clone()));
    }
}

/// Tail maximum of the normalized series over the last `window` points.
pub fn limsup_estimate(series: &InvariantSeries, window: usize) -> Result<Estimate> {
    let len = series.points().len();
    if window == 0 || len < window {
        return Err(Error::InsufficientData {
            len,
            needed: window.max(1),
        });
    }
    let tail: Vec<BigRational> = (len - window..len).map(|i| series.normalized(i)).collect();
    let max = tail.iter().max().expect("window is nonempty").clone();
    let min = tail.iter().min().expect("window is nonempty").clone();
    Ok(Estimate {
        value: max.clone(),
        window,
        cauchy_gap: max - min,
        lower: None,
        upper: None,
    })
}

/// Growth diagnosis of a count series: the fitted exponent and the
/// normalized ratio at that exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthOrder {
    /// The fitted exponent rounded to an integer, reported only when the
    /// fit lands within 0.1 of it.
    pub order: Option<u32>,
    /// Raw least-squares slope of log_p(count) against e over the tail
    /// (up to the last 5 positive points); the residual diagnostic.
    pub slope: f64,
    /// Tail estimate of count / q^rounded.
    pub ratio: Estimate,
}

/// Natural log of a positive big integer, via the top 53 bits.
fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        (x.to_u64().expect("fits by bit count") as f64).ln()
    } else {
        let top: BigUint = x >> (bits - 53);
        (top.to_u64().expect("53 bits fit") as f64).ln()
            + (bits - 53) as f64 * std::f64::consts::LN_2
    }
}

/// Fit the growth exponent of the series and estimate the ratio at it.
/// All-zero series have undefined order and ratio zero; otherwise at
/// least 3 positive counts are required.
pub fn growth_order(series: &InvariantSeries) -> Result<GrowthOrder> {
    let positive: Vec<&SeriesPoint> = series
        .points()
        .iter()
        .filter(|pt| !pt.count.is_zero())
        .collect();
    if positive.is_empty() {
        return Ok(GrowthOrder {
            order: None,
            slope: 0.0,
            ratio: Estimate {
                value: BigRational::zero(),
                window: series.points().len().clamp(1, 3),
                cauchy_gap: BigRational::zero(),
                lower: None,
                upper: None,
            },
        });
    }
    if positive.len() < 3 {
        return Err(Error::InsufficientData {
            len: positive.len(),
            needed: 3,
        });
    }
    let tail = &positive[positive.len().saturating_sub(5)..];
    let ln_p = (series.p() as f64).ln();
    let xs: Vec<f64> = tail.iter().map(|pt| pt.e as f64).collect();
    let ys: Vec<f64> = tail.iter().map(|pt| ln_biguint(&pt.count) / ln_p).collect();
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let sxx: f64 = xs.iter().map(|x| (x - mean_x) * (x - mean_x)).sum();
    let slope = sxy / sxx;
    let rounded = slope.round().max(0.0) as u32;
    let order = ((slope - slope.round()).abs() <= 0.1).then_some(rounded);
    let window = series.points().len().min(3);
    let ratio = limsup_estimate(&series.renormalized(rounded), window)?;
    Ok(GrowthOrder {
        order,
        slope,
        ratio,
    })
}

/// Counts q^i normalized as a module over a d-dimensional regular ring:
/// the series of a regular quotient in codimension d - i.
pub fn regular_family_series(
    d: u32,
    i: u32,
    p: u64,
    e_range: std::ops::RangeInclusive<u32>,
) -> Result<InvariantSeries> {
    if i > d {
        return Err(Error::IndexExceedsDimension { i, d });
    }
    let mut s = InvariantSeries::new(p, d)?;
    for e in e_range {
        let q = BigUint::from(p).pow(e);
        s.push(e, q.pow(i))?;
    }
    Ok(s)
}

/// Three-valued certified verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    CertifiedYes,
    CertifiedNo,
    Undetermined,
}

/// Singularity verdicts derived from certified bounds on the F-signature
/// of the ring (sR) and of the canonical module (sOmega).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub regular: Flag,
    pub strongly_f_regular: Flag,
    pub f_rational: Flag,
    pub gorenstein: Flag,
    pub notes: Vec<String>,
}

fn bounds(e: &Estimate) -> Option<(&BigRational, &BigRational)> {
    match (&e.lower, &e.upper) {
        (Some(l), Some(u)) => Some((l, u)),
        _ => None,
    }
}

/// Classify from certified interval bounds. Estimates without bounds
/// yield undetermined flags; every yes/no is justified by an interval
/// comparison recorded in the notes.
pub fn classify(s_r: &Estimate, s_omega: &Estimate, epsilon: &BigRational) -> Classification {
    let one = BigRational::one();
    let zero = BigRational::zero();
    let mut notes = Vec::new();
    let r = bounds(s_r);
    let o = bounds(s_omega);

    let regular = match (r, o) {
        (Some((rl, _)), _) if *rl >= one => {
            notes.push("regular: the ring signature is certified to reach 1".into());
            Flag::CertifiedYes
        }
        (_, Some((ol, _))) if *ol >= one => {
            notes.push("regular: the canonical signature is certified to reach 1".into());
            Flag::CertifiedYes
        }
        (Some((_, ru)), _) if *ru < one => {
            notes.push("regular: the ring signature is certified below 1".into());
            Flag::CertifiedNo
        }
        (_, Some((_, ou))) if *ou < one => {
            notes.push("regular: the canonical signature is certified below 1".into());
            Flag::CertifiedNo
        }
        _ => Flag::Undetermined,
    };

    let strongly_f_regular = match r {
        Some((rl, _)) if *rl > zero => {
            notes.push("strongly F-regular: the ring signature is certified positive".into());
            Flag::CertifiedYes
        }
        Some((_, ru)) if *ru <= zero => {
            notes.push("strongly F-regular: the ring signature is certified zero".into());
            Flag::CertifiedNo
        }
        _ => Flag::Undetermined,
    };

    let f_rational = match o {
        Some((ol, _)) if *ol > zero => {
            notes.push("F-rational: the canonical signature is certified positive".into());
            Flag::CertifiedYes
        }
        Some((_, ou)) if *ou <= zero => {
            notes.push("F-rational: the canonical signature is certified zero".into());
            Flag::CertifiedNo
        }
        _ => Flag::Undetermined,
    };

    let gorenstein = match (r, o) {
        (Some((rl, ru)), Some((ol, ou))) if rl > ou || ol > ru => {
            notes.push(
                "Gorenstein: the two signature intervals are disjoint, so the \
                 signatures differ"
                    .into(),
            );
            Flag::CertifiedNo
        }
        (Some((rl, ru)), Some((ol, ou)))
            if f_rational == Flag::CertifiedYes
                && rl == ol
                && ru == ou
                && (ru - rl) <= *epsilon =>
        {
            notes.push(
                "Gorenstein: both signatures are certified positive and share a \
                 collapsed interval"
                    .into(),
            );
            Flag::CertifiedYes
        }
        _ => Flag::Undetermined,
    };

    let mut class = Classification {
        regular,
        strongly_f_regular,
        f_rational,
        gorenstein,
        notes,
    };
    if class.regular == Flag::CertifiedYes {
        // A certified-regular ring satisfies everything downstream.
        class.strongly_f_regular = Flag::CertifiedYes;
        class.f_rational = Flag::CertifiedYes;
        class.gorenstein = Flag::CertifiedYes;
        class
            .notes
            .push("regularity forces the remaining flags".into());
    }
    class
}
