//! Randomized surjectivity oracle for Frobenius pushforwards.
//!
//! Whether a direct sum of Veronese classes surjects onto I_l^m reduces,
//! by Nakayama, to a rank question on generator spaces: every homomorphism
//! I_i -> I_l is multiplication by a binary form of degree l - i (classes
//! above l land inside m*I_l and contribute nothing), and multiplication by
//! a form is a banded (l+1) x (i+1) matrix in the monomial bases. The
//! oracle samples the forms' coefficients from a large finite field of the
//! working characteristic and checks whether the assembled block matrix
//! has full row rank m*(l+1). Surjectivity for some choice of forms is a
//! Zariski-open condition on the coefficients, so random sampling over a
//! field of size >= 101 finds it with small one-sided failure probability:
//! the oracle can underreport, never overreport.

use crate::error::{Error, Result};
use crate::gf::Gf;
use crate::matrix::Matrix;
use crate::veronese::{dual_b_lower, dual_b_upper, FrobDecomposition};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Cap on the number of matrix entries an oracle instance may allocate.
const MAX_ENTRIES: usize = 1 << 26;

/// One surjectivity question: does the decomposition surject onto
/// `target_copies` copies of class `target_class`?
#[derive(Clone, Debug)]
pub struct SurjectionProblem {
    pub decomposition: FrobDecomposition,
    pub target_class: u64,
    pub target_copies: usize,
    pub field: Gf,
    pub seed: u64,
}

impl SurjectionProblem {
    pub fn new(
        decomposition: FrobDecomposition,
        target_class: u64,
        target_copies: usize,
        field_size: u64,
        seed: u64,
    ) -> Result<Self> {
        let field = Gf::of_size(field_size)?;
        Ok(SurjectionProblem {
            decomposition,
            target_class,
            target_copies,
            field,
            seed,
        })
    }

    fn class_counts(&self) -> Result<Vec<usize>> {
        let l = self.target_class as usize;
        if l >= self.decomposition.mult.len() {
            return Err(Error::ClassOutOfRange {
                l: self.target_class,
                n: self.decomposition.mult.len() as u64,
            });
        }
        self.decomposition
            .mult
            .iter()
            .map(|m| {
                usize::try_from(m)
                    .map_err(|_| Error::TooLarge(format!("multiplicity {m} in block map")))
            })
            .collect()
    }

    fn source_dim(counts: &[usize], l: usize) -> usize {
        counts
            .iter()
            .enumerate()
            .take(l + 1)
            .map(|(i, &c)| c * (i + 1))
            .sum()
    }
}

/// Deterministic seed mix so each trial draws an independent stream.
fn trial_seed(seed: u64, trial: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9e3779b97f4a7c15)
        .wrapping_add(trial.wrapping_mul(0xbf58476d1ce4e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Assemble the block matrix for given form coefficients. The map goes
/// from the direct sum over classes i <= l of (i+1)-dimensional generator
/// spaces (with the stated multiplicities) to `m` copies of the
/// (l+1)-dimensional generator space of the target class. `coeff_of` is
/// consulted once per (target copy, class, source copy) block and must
/// return the l - i + 1 coefficients of that block's form.
pub fn block_map_from_forms(
    field: &Gf,
    counts: &[usize],
    l: usize,
    m: usize,
    mut form_for: impl FnMut(usize, usize, usize) -> Vec<u64>,
) -> Matrix {
    let cols = SurjectionProblem::source_dim(counts, l);
    let rows = m * (l + 1);
    let mut mat = Matrix::zeros(field.clone(), rows, cols);
    for t in 0..m {
        let mut col_base = 0usize;
        for (i, &copies) in counts.iter().enumerate().take(l + 1) {
            for c in 0..copies {
                let form = form_for(t, i, c);
                debug_assert_eq!(form.len(), l - i + 1);
                // Multiplication by sum_d form[d] x^(l-i-d) y^d sends the
                // basis monomial x^(i-k) y^k to sum_d form[d] x^(l-k-d)
                // y^(k+d): row index j = k + d within the target copy.
                for k in 0..=i {
                    for (d, &fd) in form.iter().enumerate() {
                        let j = k + d;
                        let row = t * (l + 1) + j;
                        let col = col_base + k;
                        mat.set(row, col, fd);
                    }
                }
                col_base += i + 1;
            }
        }
    }
    mat
}

/// The block map for one randomized trial; deterministic in (seed, trial).
pub fn generic_block_map(problem: &SurjectionProblem, trial: u64) -> Result<Matrix> {
    let l = problem.target_class as usize;
    let m = problem.target_copies;
    let counts = problem.class_counts()?;
    let cols = SurjectionProblem::source_dim(&counts, l);
    let rows = m * (l + 1);
    if rows.saturating_mul(cols) > MAX_ENTRIES {
        return Err(Error::TooLarge(format!("{rows} x {cols} block map")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(problem.seed, trial));
    // Sample every form up front in a fixed order (target copy, class,
    // source copy, coefficient) so the layout code cannot perturb the
    // stream.
    let mut forms: Vec<Vec<u64>> = Vec::new();
    for _t in 0..m {
        for (i, &copies) in counts.iter().enumerate().take(l + 1) {
            for _c in 0..copies {
                forms.push(
                    (0..=l - i)
                        .map(|_| problem.field.sample(&mut rng))
                        .collect(),
                );
            }
        }
    }
    let mut next = 0usize;
    Ok(block_map_from_forms(
        &problem.field,
        &counts,
        l,
        m,
        move |_t, _i, _c| {
            let f = forms[next].clone();
            next += 1;
            f
        },
    ))
}

/// Monte Carlo surjectivity: true iff some trial's block map has full row
/// rank. One-sided: a true answer is a rank certificate; a false answer
/// may be a sampling miss with probability that decays with field size and
/// trial count.
pub fn is_surjective_generic(problem: &SurjectionProblem, trials: u64) -> Result<bool> {
    let l = problem.target_class as usize;
    let m = problem.target_copies;
    if m == 0 {
        return Ok(true);
    }
    let counts = problem.class_counts()?;
    let target_dim = m * (l + 1);
    if SurjectionProblem::source_dim(&counts, l) < target_dim {
        // Structural failure: too few columns for full row rank.
        return Ok(false);
    }
    for trial in 0..trials.max(1) {
        if generic_block_map(problem, trial)?.rank() == target_dim {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Largest verified number of target copies, searched upward from the
/// certified achievable bound and capped by the generator-count ceiling.
/// The result always lies in [dual_b_lower, dual_b_upper]: the lower bound
/// is a construction, so a sampling miss there is not allowed to shrink
/// the answer.
pub fn bq_oracle(
    decomposition: &FrobDecomposition,
    target_class: u64,
    field: Gf,
    trials: u64,
    seed: u64,
) -> Result<BigUint> {
    let lower = dual_b_lower(&decomposition.mult, target_class);
    let upper = dual_b_upper(&decomposition.mult, target_class);
    if lower == upper {
        return Ok(lower);
    }
    let lower_m: usize = (&lower)
        .try_into()
        .map_err(|_| Error::TooLarge(format!("oracle search from {lower}")))?;
    let upper_m: usize = (&upper)
        .try_into()
        .map_err(|_| Error::TooLarge(format!("oracle search up to {upper}")))?;
    let mut best = lower_m;
    for m in lower_m + 1..=upper_m {
        let problem = SurjectionProblem {
            decomposition: decomposition.clone(),
            target_class,
            target_copies: m,
            field: field.clone(),
            seed,
        };
        if is_surjective_generic(&problem, trials)? {
            best = m;
        } else {
            break;
        }
    }
    Ok(BigUint::from(best as u64))
}
