//! Python bindings: the monomial-ideal, Veronese, and socle machinery
//! exposed as one extension module. Exact rationals cross the boundary
//! as `fractions.Fraction`, counts as arbitrary-precision ints.

use std::path::PathBuf;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;

use frobkit_core::gf::Gf;
use frobkit_core::invariants::{growth_order, InvariantSeries};
use frobkit_core::socle;
use frobkit_core::staircase;
use frobkit_core::surjectivity;
use frobkit_core::veronese;

fn err(e: frobkit_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Exact rational as fractions.Fraction.
fn fraction(py: Python<'_>, value: &BigRational) -> PyResult<Py<PyAny>> {
    let cls = py.import("fractions")?.getattr("Fraction")?;
    let obj = cls.call1((value.numer().clone(), value.denom().clone()))?;
    Ok(obj.unbind())
}

/// A monomial ideal in a polynomial ring, given by generator exponents.
#[pyclass(frozen)]
struct MonomialIdeal {
    inner: staircase::MonomialIdeal,
}

#[pymethods]
impl MonomialIdeal {
    /// Build from generator exponent vectors in a d-variable ring.
    #[new]
    fn new(gens: Vec<Vec<u64>>, dim: usize) -> PyResult<Self> {
        let refs: Vec<&[u64]> = gens.iter().map(|g| g.as_slice()).collect();
        Ok(MonomialIdeal {
            inner: staircase::MonomialIdeal::from_u64s(&refs, dim).map_err(err)?,
        })
    }

    /// Parse generator text such as "x^2, x*y, y^2".
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(MonomialIdeal {
            inner: staircase::parse_ideal(text).map_err(err)?,
        })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn generators(&self) -> Vec<Vec<BigUint>> {
        self.inner
            .generators()
            .iter()
            .map(|g| g.coords().to_vec())
            .collect()
    }

    /// Number of standard monomials outside the ideal.
    fn colength(&self) -> PyResult<BigUint> {
        self.inner.colength().map_err(err)
    }

    fn bracket_power(&self, q: BigUint) -> MonomialIdeal {
        MonomialIdeal {
            inner: self.inner.bracket_power(&q),
        }
    }

    /// Colength series of bracket powers: list of (e, q, count).
    fn hk_function(&self, p: u64, emax: u32) -> PyResult<Vec<(u32, BigUint, BigUint)>> {
        let points = self.inner.hk_function(p, 1..=emax).map_err(err)?;
        Ok(points
            .into_iter()
            .map(|pt| (pt.e, pt.q, pt.colength))
            .collect())
    }

    /// Exact limiting multiplicity, as a Fraction.
    fn hk_exact(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        fraction(py, &self.inner.hk_exact().map_err(err)?)
    }

    /// Multiplicity drop toward a larger ideal containing this one.
    fn relative_hk(&self, py: Python<'_>, outer: &MonomialIdeal) -> PyResult<Py<PyAny>> {
        fraction(
            py,
            &staircase::relative_hk(&self.inner, &outer.inner).map_err(err)?,
        )
    }

    /// Standard monomials pushed into the ideal by every variable.
    fn socle_monomials(&self) -> PyResult<Vec<Vec<BigUint>>> {
        Ok(self
            .inner
            .socle_monomials()
            .map_err(err)?
            .into_iter()
            .map(|m| m.coords().to_vec())
            .collect())
    }

    /// Minimal multiplicity drop over socle representatives; requires a
    /// pure-power ideal.
    fn r_estimate(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        fraction(py, &staircase::r_estimate(&self.inner).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!(
            "MonomialIdeal(dim={}, generators={})",
            self.inner.dim(),
            self.inner.generators().len()
        )
    }
}

/// One divisor class of a Veronese ring in fixed characteristic.
#[pyclass(frozen)]
struct VeroneseModule {
    inner: veronese::VeroneseModule,
    n: u64,
    class_index: u64,
    p: u64,
}

#[pymethods]
impl VeroneseModule {
    #[new]
    fn new(n: u64, class_index: u64, p: u64) -> PyResult<Self> {
        Ok(VeroneseModule {
            inner: veronese::VeroneseModule::new(n, class_index, p).map_err(err)?,
            n,
            class_index,
            p,
        })
    }

    #[getter]
    fn n(&self) -> u64 {
        self.n
    }

    #[getter]
    fn class_index(&self) -> u64 {
        self.class_index
    }

    #[getter]
    fn p(&self) -> u64 {
        self.p
    }

    /// Class multiplicities of the e-th Frobenius pushforward.
    fn decompose(&self, e: u32) -> Vec<BigUint> {
        self.inner.decompose(e).mult
    }

    /// Free-summand count of the e-th pushforward.
    fn splitting_number(&self, e: u32) -> BigUint {
        self.inner.splitting_number(e)
    }

    /// Certified (achievable, ceiling) bounds on the surjective number.
    fn dual_bounds(&self, e: u32) -> (BigUint, BigUint) {
        self.inner.dual_bounds(e)
    }

    /// Interval certified to contain the limiting normalized value.
    fn certified_interval(&self, py: Python<'_>, e: u32) -> PyResult<(Py<PyAny>, Py<PyAny>)> {
        let (lo, hi) = self.inner.certified_interval(e);
        Ok((fraction(py, &lo)?, fraction(py, &hi)?))
    }

    /// Randomized maximal surjective count at level e.
    #[pyo3(signature = (e, trials=20, field_size=101, seed=0))]
    fn bq_oracle(&self, e: u32, trials: u64, field_size: u64, seed: u64) -> PyResult<BigUint> {
        let d = self.inner.decompose(e);
        let field = Gf::of_char_with_min_size(self.p, field_size).map_err(err)?;
        surjectivity::bq_oracle(&d, self.class_index, field, trials, seed).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "VeroneseModule(n={}, class_index={}, p={})",
            self.n, self.class_index, self.p
        )
    }
}

/// An Artinian algebra, a finite module, and a socle subspace to inject.
#[pyclass(frozen)]
struct SocleProblem {
    inner: socle::SocleProblem,
}

#[pymethods]
impl SocleProblem {
    /// Load the TOML problem format.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        Ok(SocleProblem {
            inner: socle::SocleProblem::load(&path).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        Ok(SocleProblem {
            inner: socle::SocleProblem::from_toml_str(text).map_err(err)?,
        })
    }

    /// Seeded random instance over F_p, used for demos and testing.
    #[staticmethod]
    fn random(p: u64, seed: u64) -> PyResult<Self> {
        if !frobkit_core::gf::is_prime(p) {
            return Err(err(frobkit_core::Error::NotPrime(p)));
        }
        Ok(SocleProblem {
            inner: socle::random_problem(p, seed),
        })
    }

    fn to_toml(&self) -> String {
        self.inner.to_toml_string()
    }

    #[getter]
    fn algebra_dim(&self) -> usize {
        self.inner.algebra.dim()
    }

    #[getter]
    fn module_dim(&self) -> usize {
        self.inner.module.dim()
    }

    #[getter]
    fn subspace_dim(&self) -> usize {
        self.inner.subspace.len()
    }

    /// (holds, exhaustive): whether every nonzero subspace element moves
    /// the module enough, and whether all classes were enumerated.
    fn check_hypothesis(&self, seed: u64) -> (bool, bool) {
        let check = self.inner.check_hypothesis(seed);
        (check.holds, check.exhaustive)
    }

    /// Find an element injective on the subspace, retrying over field
    /// extensions up to max_degree. Returns (coefficients, field_size).
    #[pyo3(signature = (trials=20, seed=0, max_degree=4))]
    fn socle_injection(&self, trials: u64, seed: u64, max_degree: u32) -> PyResult<(Vec<u64>, u64)> {
        let (element, field) = self
            .inner
            .socle_injection_extended(trials, seed, max_degree)
            .map_err(err)?;
        Ok((element, field.size()))
    }

    fn __repr__(&self) -> String {
        format!(
            "SocleProblem(algebra_dim={}, module_dim={}, subspace_dim={})",
            self.inner.algebra.dim(),
            self.inner.module.dim(),
            self.inner.subspace.len()
        )
    }
}

/// Fit the growth exponent of a count series over p: points are (e, count)
/// pairs. Returns (order, slope, ratio) with ratio a Fraction.
#[pyfunction]
#[pyo3(signature = (p, points, delta=None))]
fn series_growth_order(
    py: Python<'_>,
    p: u64,
    points: Vec<(u32, BigUint)>,
    delta: Option<u32>,
) -> PyResult<(Option<u32>, f64, Py<PyAny>)> {
    let delta = match delta {
        Some(d) => d,
        None => {
            let mut d = 0u32;
            for (e, count) in &points {
                let q = BigUint::from(p).pow(*e);
                if q <= BigUint::from(1u32) {
                    continue;
                }
                while &q.pow(d) < count {
                    d += 1;
                    if d > 256 {
                        return Err(PyValueError::new_err(
                            "count grows faster than q^256; pass delta explicitly",
                        ));
                    }
                }
            }
            d
        }
    };
    let mut series = InvariantSeries::new(p, delta).map_err(err)?;
    for (e, count) in points {
        series.push(e, count).map_err(err)?;
    }
    let order = growth_order(&series).map_err(err)?;
    Ok((order.order, order.slope, fraction(py, &order.ratio.value)?))
}

/// Certify singularity flags of a Veronese ring from level-emax data.
/// Returns a dict with the four flag strings and the two estimates as
/// (value, lower, upper) Fraction triples.
#[pyfunction]
#[pyo3(signature = (n, p, emax, window=3))]
fn classify_veronese(
    py: Python<'_>,
    n: u64,
    p: u64,
    emax: u32,
    window: usize,
) -> PyResult<Py<PyAny>> {
    use frobkit_core::invariants::{classify, limsup_estimate, Flag};
    use frobkit_core::veronese::dual_b_lower;

    let ring = veronese::VeroneseModule::new(n, 0, p).map_err(err)?;
    let canonical_class = n - 2;
    let canonical = veronese::VeroneseModule::new(n, canonical_class, p).map_err(err)?;
    let mut ring_series = InvariantSeries::new(p, 2).map_err(err)?;
    let mut canonical_series = InvariantSeries::new(p, 2).map_err(err)?;
    for e in 1..=emax {
        ring_series.push(e, ring.splitting_number(e)).map_err(err)?;
        let d = canonical.decompose(e);
        canonical_series
            .push(e, dual_b_lower(&d.mult, canonical_class))
            .map_err(err)?;
    }
    let eff_window = window.min(emax as usize).max(1);
    let mut s_r = limsup_estimate(&ring_series, eff_window).map_err(err)?;
    let (lo, hi) = ring.certified_interval(emax);
    s_r.attach_bounds(lo, hi);
    let mut s_omega = limsup_estimate(&canonical_series, eff_window).map_err(err)?;
    let (lo, hi) = canonical.certified_interval(emax);
    s_omega.attach_bounds(lo, hi);
    let epsilon = BigRational::new(BigInt::from(1), BigInt::from(1_000_000));
    let verdict = classify(&s_r, &s_omega, &epsilon);

    let flag = |f: Flag| match f {
        Flag::CertifiedYes => "certified-yes",
        Flag::CertifiedNo => "certified-no",
        Flag::Undetermined => "undetermined",
    };
    let estimate = |py: Python<'_>, e: &frobkit_core::invariants::Estimate| -> PyResult<Py<PyAny>> {
        let lower = e.lower.as_ref().expect("bounds attached above");
        let upper = e.upper.as_ref().expect("bounds attached above");
        Ok((fraction(py, &e.value)?, fraction(py, lower)?, fraction(py, upper)?).into_pyobject(py)?.unbind().into())
    };
    let dict = pyo3::types::PyDict::new(py);
    dict.set_item("regular", flag(verdict.regular))?;
    dict.set_item("strongly_f_regular", flag(verdict.strongly_f_regular))?;
    dict.set_item("f_rational", flag(verdict.f_rational))?;
    dict.set_item("gorenstein", flag(verdict.gorenstein))?;
    dict.set_item("s_r", estimate(py, &s_r)?)?;
    dict.set_item("s_omega", estimate(py, &s_omega)?)?;
    dict.set_item("notes", verdict.notes)?;
    Ok(dict.unbind().into())
}

#[pymodule]
fn frobkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<MonomialIdeal>()?;
    m.add_class::<VeroneseModule>()?;
    m.add_class::<SocleProblem>()?;
    m.add_function(wrap_pyfunction!(series_growth_order, m)?)?;
    m.add_function(wrap_pyfunction!(classify_veronese, m)?)?;
    Ok(())
}
