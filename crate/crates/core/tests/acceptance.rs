//! Acceptance suite: every numbered check below gates a release. Each
//! check prints one PASS/FAIL line (run with `--nocapture` to see them
//! all; failures are reported either way) and carries the runtime budget
//! it must meet on commodity hardware.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use frobkit_core::gf::Gf;
use frobkit_core::invariants::{
    classify, growth_order, limsup_estimate, regular_family_series, Flag, InvariantSeries,
};
use frobkit_core::matrix::Matrix;
use frobkit_core::socle::{monomial_algebra, random_module, random_problem};
use frobkit_core::staircase::{parse_ideal, MonomialIdeal};
use frobkit_core::surjectivity::bq_oracle;
use frobkit_core::veronese::{dual_b_lower, dual_b_upper, VeroneseModule};
use frobkit_core::Error;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ratio(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn frac(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// (n, p) grid used by the Veronese checks: 2 <= n <= 6, p in {5, 7}, p
/// coprime to n.
fn veronese_grid() -> Vec<(u64, u64)> {
    let mut grid = Vec::new();
    for n in 2u64..=6 {
        for p in [5u64, 7] {
            if n % p != 0 {
                grid.push((n, p));
            }
        }
    }
    grid
}

/// 1. The regular family has normalized splitting and surjective series
///    constantly equal to one, exactly.
fn regular_family_is_exactly_one() {
    for d in 1u32..=3 {
        for p in [2u64, 3] {
            let series = regular_family_series(d, d, p, 0..=8).unwrap();
            for idx in 0..series.points().len() {
                assert!(
                    series.normalized(idx).is_one(),
                    "d={d} p={p} idx={idx}: normalized value is not 1"
                );
            }
        }
    }
}

/// 2. For random zero-dimensional monomial ideals the bracket-power
///    colength equals the exact multiplicity times q^d, with zero
///    tolerance.
fn monomial_multiplicity_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6872_6b31);
    for _ in 0..20 {
        let d = rng.gen_range(1usize..=3);
        let mut gens: Vec<Vec<u64>> = (0..d)
            .map(|axis| {
                let mut g = vec![0u64; d];
                g[axis] = rng.gen_range(1..=4);
                g
            })
            .collect();
        for _ in 0..rng.gen_range(0usize..=2) {
            let extra: Vec<u64> = (0..d).map(|_| rng.gen_range(0..=4)).collect();
            if extra.iter().any(|&c| c > 0) {
                gens.push(extra);
            }
        }
        let refs: Vec<&[u64]> = gens.iter().map(|g| g.as_slice()).collect();
        let ideal = MonomialIdeal::from_u64s(&refs, d).unwrap();
        let mult = ideal.hk_exact().unwrap();
        for p in [2u64, 3] {
            for e in 1u32..=3 {
                let q = BigUint::from(p).pow(e);
                let got = ideal.bracket_power(&q).colength().unwrap();
                let expected = &mult
                    * BigRational::from_integer(BigInt::from(q.pow(d as u32)));
                assert_eq!(
                    BigRational::from_integer(BigInt::from(got)),
                    expected,
                    "ideal {gens:?}, p={p}, e={e}"
                );
            }
        }
    }
}

/// 3. Veronese splitting numbers track 1/n within 2/q at every level and
///    the windowed estimate lands within 1e-2 of 1/n.
fn veronese_splitting_tracks_one_over_n() {
    for (n, p) in veronese_grid() {
        let module = VeroneseModule::new(n, 0, p).unwrap();
        let mut series = InvariantSeries::new(p, 2).unwrap();
        for e in 0u32..=8 {
            let q = BigUint::from(p).pow(e);
            let a0 = module.splitting_number(e);
            let normalized = ratio(a0.clone(), &q * &q);
            let err = (&normalized - frac(1, n)).abs();
            assert!(
                err <= ratio(2u32.into(), q.clone()),
                "n={n} p={p} e={e}: splitting number strays from 1/n"
            );
            series.push(e, a0).unwrap();
        }
        let estimate = limsup_estimate(&series, 3).unwrap();
        let err = (&estimate.value - frac(1, n)).abs();
        assert!(err <= frac(1, 100), "n={n} p={p}: estimate off 1/n by {err}");
    }
}

/// 4. Dual-bound series track (l+2)/(2n) within 3(l+2)/q, the certified
///    interval at e=8 contains the limit, and for the canonical class the
///    interval tightens onto 1/2.
fn veronese_dual_bounds_track_the_limit() {
    for (n, p) in veronese_grid() {
        for l in 0..n {
            let module = VeroneseModule::new(n, l, p).unwrap();
            let limit = frac(l + 2, 2 * n);
            for e in 0u32..=8 {
                let q = BigUint::from(p).pow(e);
                let q2 = &q * &q;
                let (lo, hi) = module.dual_bounds(e);
                let tol = ratio((3 * (l + 2)).into(), q.clone());
                for bound in [lo, hi] {
                    let err = (ratio(bound, q2.clone()) - &limit).abs();
                    assert!(
                        err <= tol,
                        "n={n} p={p} l={l} e={e}: dual bound strays from (l+2)/(2n)"
                    );
                }
            }
            let (lo, hi) = module.certified_interval(8);
            assert!(
                lo <= limit && limit <= hi,
                "n={n} p={p} l={l}: certified interval misses the limit"
            );
            if l == n - 2 {
                assert!(lo <= frac(1, 2) && frac(1, 2) <= hi);
                assert!(
                    &hi - &lo <= frac(1, 100),
                    "n={n} p={p}: canonical interval too wide: {}",
                    &hi - &lo
                );
            }
        }
    }
}

/// 5. The randomized oracle always lands inside the certified bounds,
///    deterministically per seed; strict excess over the lower bound is
///    reported, never an error.
fn oracle_stays_inside_the_bounds() {
    for n in 2u64..=4 {
        for p in [3u64, 5] {
            if n % p == 0 {
                continue;
            }
            for e in 1u32.. {
                if p.pow(e) > 9 {
                    break;
                }
                for l in 0..n {
                    let d = VeroneseModule::new(n, l, p).unwrap().decompose(e);
                    let field = Gf::of_char_with_min_size(p, 101).unwrap();
                    let seed = (n << 24) ^ (l << 16) ^ (p << 8) ^ u64::from(e);
                    let b = bq_oracle(&d, l, field.clone(), 20, seed).unwrap();
                    let again = bq_oracle(&d, l, field, 20, seed).unwrap();
                    assert_eq!(b, again, "oracle must be deterministic per seed");
                    let lo = dual_b_lower(&d.mult, l);
                    let hi = dual_b_upper(&d.mult, l);
                    assert!(lo <= b && b <= hi, "n={n} p={p} e={e} l={l}: oracle out of bounds");
                    if b > lo {
                        println!(
                            "        oracle excess: n={n} p={p} e={e} l={l}: b_q={b} > lower={lo}"
                        );
                    }
                }
            }
        }
    }
}

/// 6. Finite-level inequalities: the canonical lower bound dominates the
///    splitting number, normalized series stay at most one, and at l=0
///    lower, upper, and oracle all collapse onto the splitting number.
fn finite_level_inequalities_hold() {
    for (n, p) in veronese_grid() {
        let ring = VeroneseModule::new(n, 0, p).unwrap();
        let canonical = VeroneseModule::new(n, n - 2, p).unwrap();
        for e in 0u32..=8 {
            let q = BigUint::from(p).pow(e);
            let q2 = &q * &q;
            let a0 = ring.splitting_number(e);
            let (can_lo, _) = canonical.dual_bounds(e);
            assert!(can_lo >= a0, "n={n} p={p} e={e}: canonical bound below a_0");
            assert!(ratio(a0.clone(), q2.clone()) <= BigRational::one());
            assert!(ratio(can_lo, q2.clone()) <= BigRational::one());

            let d = ring.decompose(e);
            let lo = dual_b_lower(&d.mult, 0);
            let hi = dual_b_upper(&d.mult, 0);
            let field = Gf::of_char_with_min_size(p, 101).unwrap();
            let b = bq_oracle(&d, 0, field, 4, 7).unwrap();
            assert!(
                lo == a0 && hi == a0 && b == a0,
                "n={n} p={p} e={e}: class-0 certificates disagree with a_0"
            );
        }
    }
}

/// 7. The classifier flags the whole grid: strongly F-regular and
///    F-rational everywhere, Gorenstein exactly when n=2, regular never.
fn classifier_matches_the_grid() {
    let epsilon = BigRational::new(BigInt::one(), BigInt::from(1_000_000u64));
    for (n, p) in veronese_grid() {
        let ring = VeroneseModule::new(n, 0, p).unwrap();
        let canonical = VeroneseModule::new(n, n - 2, p).unwrap();

        let mut ring_series = InvariantSeries::new(p, 2).unwrap();
        let mut canonical_series = InvariantSeries::new(p, 2).unwrap();
        for e in 1u32..=8 {
            ring_series.push(e, ring.splitting_number(e)).unwrap();
            let d = canonical.decompose(e);
            canonical_series.push(e, dual_b_lower(&d.mult, n - 2)).unwrap();
        }
        let mut s_r = limsup_estimate(&ring_series, 3).unwrap();
        let (lo, hi) = ring.certified_interval(8);
        s_r.attach_bounds(lo, hi);
        let mut s_omega = limsup_estimate(&canonical_series, 3).unwrap();
        let (lo, hi) = canonical.certified_interval(8);
        s_omega.attach_bounds(lo, hi);

        let verdict = classify(&s_r, &s_omega, &epsilon);
        assert_eq!(verdict.strongly_f_regular, Flag::CertifiedYes, "n={n} p={p}");
        assert_eq!(verdict.f_rational, Flag::CertifiedYes, "n={n} p={p}");
        let expected_gor = if n == 2 { Flag::CertifiedYes } else { Flag::CertifiedNo };
        assert_eq!(verdict.gorenstein, expected_gor, "n={n} p={p}");
        assert_eq!(verdict.regular, Flag::CertifiedNo, "n={n} p={p}");
    }
}

/// 8. Socle injection: 100 seeded problems satisfying the rank hypothesis
///    produce an element passing an independent rank check; problems
///    violating it are rejected with the dedicated error.
fn socle_injections_are_certified() {
    let mut satisfied = 0u32;
    let mut violated = 0u32;
    let mut seed = 0u64;
    while satisfied < 100 {
        let p = [2u64, 3, 5][(seed % 3) as usize];
        let problem = random_problem(p, seed);
        if problem.check_hypothesis(seed ^ 0x736f636c65).holds {
            let (m, field) = problem.socle_injection_extended(16, seed, 4).unwrap();
            let multiples: Vec<Vec<u64>> = problem
                .subspace
                .iter()
                .map(|delta| {
                    let action = problem.module.element_action(delta);
                    let rows: Vec<Vec<u64>> = (0..action.rows())
                        .map(|r| (0..action.cols()).map(|c| action.get(r, c)).collect())
                        .collect();
                    Matrix::from_rows(field.clone(), &rows).mul_vec(&m)
                })
                .collect();
            assert_eq!(
                Matrix::span_rank(&field, &multiples),
                problem.subspace.len(),
                "seed {seed}: independent rank check failed"
            );
            satisfied += 1;
        } else {
            let got = problem.socle_injection(16, seed);
            assert!(
                matches!(got, Err(Error::HypothesisViolated { .. })),
                "seed {seed}: expected a hypothesis rejection"
            );
            violated += 1;
        }
        seed += 1;
    }
    assert!(violated > 0, "the generator never produced a violating instance");
}

/// 9. Matlis duality preserves multiple dimensions: dim(x M) equals
///    dim(x M-dual) for every maximal-ideal basis vector and for random
///    elements.
fn matlis_lengths_agree() {
    let pool = ["x^2", "x^3", "x^2, y^2", "x^2, x*y, y^2", "x^3, x*y, y^2"];
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d61_746c);
    for trial in 0..50u64 {
        let p = [2u64, 3, 5][(trial % 3) as usize];
        let text = pool[(trial as usize) % pool.len()];
        let ideal = parse_ideal(text).unwrap();
        let (algebra, _) = monomial_algebra(Gf::prime(p).unwrap(), &ideal).unwrap();
        let module = random_module(&algebra, 1 + (trial as usize % 2), (trial as usize) % 3, trial);
        let dual = module.dual();
        let d = algebra.dim();
        let mut elements: Vec<Vec<u64>> = (1..d)
            .map(|i| {
                let mut x = vec![0u64; d];
                x[i] = 1;
                x
            })
            .collect();
        for _ in 0..20 {
            elements.push((0..d).map(|_| algebra.field().sample(&mut rng)).collect());
        }
        for x in &elements {
            assert_eq!(
                module.element_action(x).rank(),
                dual.element_action(x).rank(),
                "trial {trial}: dual rank mismatch for {x:?}"
            );
        }
    }
}

/// 10. Growth orders on the regular family: exponent i is recovered with
///     ratio exactly one, and every strictly smaller exponent normalizes
///     below 1e-2 by e=10.
fn growth_orders_are_recovered() {
    for i in 0u32..=3 {
        let series = regular_family_series(3, i, 2, 0..=10).unwrap();
        let order = growth_order(&series).unwrap();
        assert_eq!(order.order, Some(i), "order mismatch for exponent {i}");
        assert!(order.ratio.value.is_one(), "ratio mismatch for exponent {i}");
        if i < 3 {
            let last = series.points().len() - 1;
            assert!(
                series.normalized(last) < frac(1, 100),
                "exponent {i} does not vanish under full normalization"
            );
        }
    }
}

struct Criterion {
    name: &'static str,
    budget: Option<Duration>,
    run: fn(),
}

#[test]
fn acceptance_criteria() {
    let criteria: Vec<Criterion> = vec![
        Criterion {
            name: "regular family normalizes to one",
            budget: Some(Duration::from_secs(1)),
            run: regular_family_is_exactly_one,
        },
        Criterion {
            name: "monomial multiplicity is exact",
            budget: Some(Duration::from_secs(5)),
            run: monomial_multiplicity_is_exact,
        },
        Criterion {
            name: "splitting numbers track 1/n",
            budget: Some(Duration::from_secs(1)),
            run: veronese_splitting_tracks_one_over_n,
        },
        Criterion {
            name: "dual bounds track (l+2)/(2n)",
            budget: Some(Duration::from_secs(1)),
            run: veronese_dual_bounds_track_the_limit,
        },
        Criterion {
            name: "oracle stays inside the bounds",
            budget: Some(Duration::from_secs(30)),
            run: oracle_stays_inside_the_bounds,
        },
        Criterion {
            name: "finite-level inequalities hold",
            budget: None,
            run: finite_level_inequalities_hold,
        },
        Criterion {
            name: "classifier matches the grid",
            budget: None,
            run: classifier_matches_the_grid,
        },
        Criterion {
            name: "socle injections are certified",
            budget: Some(Duration::from_secs(10)),
            run: socle_injections_are_certified,
        },
        Criterion {
            name: "Matlis lengths agree",
            budget: None,
            run: matlis_lengths_agree,
        },
        Criterion {
            name: "growth orders are recovered",
            budget: None,
            run: growth_orders_are_recovered,
        },
    ];

    let mut failures = Vec::new();
    for (idx, criterion) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(criterion.run));
        let elapsed = start.elapsed();
        let mut problems = Vec::new();
        if let Err(payload) = outcome {
            let message = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic without message".to_string());
            problems.push(message);
        }
        if let Some(budget) = criterion.budget {
            if elapsed > budget {
                problems.push(format!(
                    "runtime {:.2}s exceeds the {:.0}s budget",
                    elapsed.as_secs_f64(),
                    budget.as_secs_f64()
                ));
            }
        }
        let verdict = if problems.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "[{:>2}] {}  {:<36} ({:.2}s)",
            idx + 1,
            verdict,
            criterion.name,
            elapsed.as_secs_f64()
        );
        for problem in problems {
            println!("       {problem}");
            failures.push(format!("criterion {}: {}", idx + 1, criterion.name));
        }
    }
    assert!(failures.is_empty(), "failed: {failures:?}");
}
