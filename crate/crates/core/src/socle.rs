//! Artinian local algebras over finite fields, given by structure
//! constants, together with finite modules over them.
//!
//! Conventions, shared with the on-disk problem format:
//! - basis vector 0 of an algebra is the unit; basis vectors 1..D-1 span
//!   the maximal ideal (validated nilpotent at construction);
//! - a module of dimension D_M is described by one D_M x D_M matrix per
//!   maximal-ideal basis element, acting on column vectors (the unit acts
//!   as the identity and is not stored);
//! - the socle of the algebra is the annihilator of the maximal ideal.
//!
//! The centerpiece is `socle_injection`: given a module M whose socle
//! multiplications are all large enough (every nonzero element Delta of a
//! chosen socle subspace V has dim(Delta*M) >= dim V), it constructs an
//! element m in M such that the evaluation map 1 -> m is injective on V,
//! by induction on a basis of V with randomized repair steps. The result
//! is verified post hoc by an independent rank check, so a returned value
//! is always correct; small fields can exhaust their scalars and ask for a
//! retry over an extension.

use crate::error::{Error, Result};
use crate::gf::Gf;
use crate::matrix::Matrix;
use crate::staircase::{Exponent, MonomialIdeal};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::path::Path;

/// Largest algebra dimension the monomial-quotient constructor accepts.
const MAX_MONOMIAL_DIM: usize = 128;
/// Projective enumeration budget for exhaustive hypothesis checks.
const EXHAUSTIVE_CAP: u64 = 100_000;
/// Sample count for the non-exhaustive hypothesis check.
const SAMPLED_CHECKS: u64 = 200;
/// Fields up to this size have every nonzero scalar tried during repair.
const FULL_SCALAR_SCAN: u64 = 4096;

fn vec_is_zero(v: &[u64]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// a += c * b, componentwise over the field.
fn vec_add_scaled(field: &Gf, a: &mut [u64], b: &[u64], c: u64) {
    for (ai, &bi) in a.iter_mut().zip(b) {
        *ai = field.add(*ai, field.mul(c, bi));
    }
}

/// A finite-dimensional commutative local algebra, as structure constants.
/// `mult[i][j][k]` is the coefficient of basis k in the product of basis i
/// and basis j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtinianAlgebra {
    field: Gf,
    dim: usize,
    mult: Vec<Vec<Vec<u64>>>,
}

impl ArtinianAlgebra {
    /// Validating constructor: checks shape, field membership, the unit
    /// law, commutativity, associativity, closure of the maximal ideal,
    /// and nilpotency of the maximal ideal. O(D^5); for large instances
    /// whose constants are correct by construction use `new_unchecked`.
    pub fn new(field: Gf, mult: Vec<Vec<Vec<u64>>>) -> Result<ArtinianAlgebra> {
        let a = ArtinianAlgebra::new_unchecked(field, mult);
        a.validate()?;
        Ok(a)
    }

    /// Constructor without the O(D^5) axiom checks.
    pub fn new_unchecked(field: Gf, mult: Vec<Vec<Vec<u64>>>) -> ArtinianAlgebra {
        let dim = mult.len();
        ArtinianAlgebra { field, dim, mult }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dim;
        if d == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        for (i, plane) in self.mult.iter().enumerate() {
            if plane.len() != d {
                return Err(Error::InvalidAlgebra(format!(
                    "mult[{i}] has {} rows, expected {d}",
                    plane.len()
                )));
            }
            for (j, row) in plane.iter().enumerate() {
                if row.len() != d {
                    return Err(Error::InvalidAlgebra(format!(
                        "mult[{i}][{j}] has {} entries, expected {d}",
                        row.len()
                    )));
                }
                for &v in row {
                    if !self.field.is_element(v) {
                        return Err(Error::InvalidAlgebra(format!(
                            "entry {v} in mult[{i}][{j}] is not a field element"
                        )));
                    }
                }
            }
        }
        for j in 0..d {
            for k in 0..d {
                let expected = if j == k { 1 } else { 0 };
                if self.mult[0][j][k] != expected {
                    return Err(Error::InvalidAlgebra(format!(
                        "basis 0 is not the unit: (e0*e{j}) has coefficient {} on e{k}",
                        self.mult[0][j][k]
                    )));
                }
            }
        }
        for i in 0..d {
            for j in 0..i {
                if self.mult[i][j] != self.mult[j][i] {
                    return Err(Error::InvalidAlgebra(format!(
                        "not commutative: e{i}*e{j} != e{j}*e{i}"
                    )));
                }
            }
        }
        for i in 1..d {
            for j in 1..d {
                if self.mult[i][j][0] != 0 {
                    return Err(Error::InvalidAlgebra(format!(
                        "maximal ideal not closed: e{i}*e{j} has a unit component"
                    )));
                }
            }
        }
        // Associativity via regular representations: left multiplication
        // by e_i*e_j must equal the composition of the two left
        // multiplications.
        let reg: Vec<Matrix> = (0..d).map(|i| self.regular_action(i)).collect();
        for i in 0..d {
            for j in 0..d {
                let composed = reg[i].mul(&reg[j]);
                let mut expanded = Matrix::zeros(self.field.clone(), d, d);
                for (k, rk) in reg.iter().enumerate() {
                    expanded = expanded.add(&rk.scale(self.mult[i][j][k]));
                }
                if composed != expanded {
                    return Err(Error::InvalidAlgebra(format!(
                        "not associative on (e{i}, e{j}, -)"
                    )));
                }
            }
        }
        // Nilpotency: powers of the maximal ideal must shrink to zero.
        let mut power: Vec<Vec<u64>> = (1..d)
            .map(|i| {
                let mut v = vec![0u64; d];
                v[i] = 1;
                v
            })
            .collect();
        let mut rank = Matrix::span_rank(&self.field, &power);
        while rank > 0 {
            let mut products = Vec::new();
            for v in &power {
                for r in reg.iter().skip(1) {
                    let w = r.mul_vec(v);
                    if !vec_is_zero(&w) {
                        products.push(w);
                    }
                }
            }
            let next_rank = Matrix::span_rank(&self.field, &products);
            if next_rank >= rank {
                return Err(Error::InvalidAlgebra(
                    "maximal ideal is not nilpotent".into(),
                ));
            }
            power = products;
            rank = next_rank;
        }
        Ok(())
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constants(&self) -> &Vec<Vec<Vec<u64>>> {
        &self.mult
    }

    /// Matrix of left multiplication by basis element i on the algebra.
    pub fn regular_action(&self, i: usize) -> Matrix {
        let mut m = Matrix::zeros(self.field.clone(), self.dim, self.dim);
        for c in 0..self.dim {
            for r in 0..self.dim {
                m.set(r, c, self.mult[i][c][r]);
            }
        }
        m
    }

    /// Matrix of multiplication by the element with coefficient vector x.
    pub fn multiplication_matrix(&self, x: &[u64]) -> Matrix {
        assert_eq!(x.len(), self.dim);
        let mut m = Matrix::zeros(self.field.clone(), self.dim, self.dim);
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0 {
                m = m.add(&self.regular_action(i).scale(xi));
            }
        }
        m
    }

    /// Product of two elements given as coefficient vectors.
    pub fn multiply(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.multiplication_matrix(a).mul_vec(b)
    }

    /// Basis of the annihilator of the maximal ideal. For the
    /// one-dimensional algebra (a field) this is the whole space.
    pub fn socle(&self) -> Vec<Vec<u64>> {
        if self.dim == 1 {
            return vec![vec![1]];
        }
        let actions: Vec<Matrix> = (1..self.dim).map(|i| self.regular_action(i)).collect();
        let refs: Vec<&Matrix> = actions.iter().collect();
        Matrix::vstack(&refs).kernel_basis()
    }
}

/// The quotient by a zero-dimensional monomial ideal, with the surviving
/// monomials as basis (unit first, then by degree and lexicographic
/// order). Returns the algebra and the monomial labels of its basis.
/// Structure constants are associative and commutative by construction,
/// so the axiom checks are skipped.
pub fn monomial_algebra(
    field: Gf,
    ideal: &MonomialIdeal,
) -> Result<(ArtinianAlgebra, Vec<Exponent>)> {
    let bounds = ideal.bounding_box()?;
    let mut limits = Vec::with_capacity(bounds.len());
    let mut cells = 1u64;
    for b in &bounds {
        let b: u64 = b
            .try_into()
            .map_err(|_| Error::TooLarge(format!("staircase bound {b}")))?;
        cells = cells
            .checked_mul(b)
            .filter(|&c| c <= 4096)
            .ok_or_else(|| Error::TooLarge("staircase box exceeds 4096 cells".into()))?;
        limits.push(b);
    }
    let mut points: Vec<Vec<u64>> = Vec::new();
    let mut cursor = vec![0u64; limits.len()];
    'enumerate: loop {
        if !ideal.contains(&Exponent::from_u64s(&cursor)) {
            points.push(cursor.clone());
        }
        for j in 0..limits.len() {
            cursor[j] += 1;
            if cursor[j] < limits[j] {
                continue 'enumerate;
            }
            cursor[j] = 0;
        }
        break;
    }
    if points.is_empty() {
        return Err(Error::InvalidAlgebra(
            "unit ideal leaves no monomial basis".into(),
        ));
    }
    if points.len() > MAX_MONOMIAL_DIM {
        return Err(Error::TooLarge(format!(
            "monomial algebra dimension {} exceeds {MAX_MONOMIAL_DIM}",
            points.len()
        )));
    }
    points.sort_by_key(|p| (p.iter().sum::<u64>(), p.clone()));
    let index: HashMap<Vec<u64>, usize> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let d = points.len();
    let mut mult = vec![vec![vec![0u64; d]; d]; d];
    for i in 0..d {
        for j in 0..d {
            let sum: Vec<u64> = points[i]
                .iter()
                .zip(&points[j])
                .map(|(a, b)| a + b)
                .collect();
            if let Some(&k) = index.get(&sum) {
                mult[i][j][k] = 1;
            }
        }
    }
    let labels = points.iter().map(|p| Exponent::from_u64s(p)).collect();
    Ok((ArtinianAlgebra::new_unchecked(field, mult), labels))
}

/// A finite module over an Artinian algebra: one action matrix per
/// maximal-ideal basis element, acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtinianModule {
    field: Gf,
    dim: usize,
    action: Vec<Matrix>,
}

impl ArtinianModule {
    /// Validating constructor: the matrices must be square of size `dim`
    /// over the algebra's field and satisfy the algebra's relations
    /// rho_i rho_j = sum_k mult[i][j][k] rho_k (with the unit acting as
    /// the identity). `dim` is explicit because a one-dimensional algebra
    /// has no action matrices to infer it from.
    pub fn new(
        algebra: &ArtinianAlgebra,
        dim: usize,
        action: Vec<Matrix>,
    ) -> Result<ArtinianModule> {
        if action.len() + 1 != algebra.dim() {
            return Err(Error::InvalidModule(format!(
                "{} action matrices given, algebra needs {}",
                action.len(),
                algebra.dim() - 1
            )));
        }
        for (i, m) in action.iter().enumerate() {
            if m.field() != algebra.field() {
                return Err(Error::InvalidModule(format!(
                    "action matrix {i} is over a different field"
                )));
            }
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::InvalidModule(format!(
                    "action matrix {i} is {}x{}, expected {dim}x{dim}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let module = ArtinianModule {
            field: algebra.field().clone(),
            dim,
            action,
        };
        let identity = Matrix::identity(module.field.clone(), dim);
        for i in 1..algebra.dim() {
            for j in 1..algebra.dim() {
                let composed = module.action[i - 1].mul(&module.action[j - 1]);
                let mut expanded = identity.scale(algebra.constants()[i][j][0]);
                for k in 1..algebra.dim() {
                    let c = algebra.constants()[i][j][k];
                    if c != 0 {
                        expanded = expanded.add(&module.action[k - 1].scale(c));
                    }
                }
                if composed != expanded {
                    return Err(Error::InvalidModule(format!(
                        "action violates the relation for (e{i}, e{j})"
                    )));
                }
            }
        }
        Ok(module)
    }

    /// The algebra acting on itself.
    pub fn regular(algebra: &ArtinianAlgebra) -> ArtinianModule {
        ArtinianModule {
            field: algebra.field().clone(),
            dim: algebra.dim(),
            action: (1..algebra.dim()).map(|i| algebra.regular_action(i)).collect(),
        }
    }

    /// The one-dimensional module killed by the maximal ideal.
    pub fn residue_field(algebra: &ArtinianAlgebra) -> ArtinianModule {
        ArtinianModule {
            field: algebra.field().clone(),
            dim: 1,
            action: (1..algebra.dim())
                .map(|_| Matrix::zeros(algebra.field().clone(), 1, 1))
                .collect(),
        }
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    pub fn direct_sum(&self, other: &ArtinianModule) -> ArtinianModule {
        assert_eq!(self.action.len(), other.action.len());
        let dim = self.dim + other.dim;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                let mut m = Matrix::zeros(self.field.clone(), dim, dim);
                for r in 0..a.rows() {
                    for c in 0..a.cols() {
                        m.set(r, c, a.get(r, c));
                    }
                }
                for r in 0..b.rows() {
                    for c in 0..b.cols() {
                        m.set(self.dim + r, self.dim + c, b.get(r, c));
                    }
                }
                m
            })
            .collect();
        ArtinianModule {
            field: self.field.clone(),
            dim,
            action,
        }
    }

    /// The linear dual with transposed action. For finite-length modules
    /// this is the Matlis dual, so lengths of multiples are preserved:
    /// dim(x * M) = dim(x * dual(M)) for every element x.
    pub fn dual(&self) -> ArtinianModule {
        ArtinianModule {
            field: self.field.clone(),
            dim: self.dim,
            action: self.action.iter().map(Matrix::transpose).collect(),
        }
    }

    /// Matrix of the action of an algebra element (full coefficient
    /// vector, unit coordinate included).
    pub fn element_action(&self, x: &[u64]) -> Matrix {
        assert_eq!(x.len(), self.action.len() + 1);
        let mut m = Matrix::identity(self.field.clone(), self.dim).scale(x[0]);
        for (i, &xi) in x.iter().enumerate().skip(1) {
            if xi != 0 {
                m = m.add(&self.action[i - 1].scale(xi));
            }
        }
        m
    }

    /// Quotient by the submodule generated by the given vectors. The
    /// quotient basis is the set of standard basis vectors at the
    /// non-pivot coordinates of the submodule's row echelon form.
    pub fn quotient_by(&self, generators: &[Vec<u64>]) -> ArtinianModule {
        let mut basis: Vec<Vec<u64>> = Vec::new();
        let mut pending: Vec<Vec<u64>> = generators.to_vec();
        while let Some(v) = pending.pop() {
            if vec_is_zero(&v) {
                continue;
            }
            let mut probe = basis.clone();
            probe.push(v.clone());
            if Matrix::span_rank(&self.field, &probe) > basis.len() {
                for a in &self.action {
                    pending.push(a.mul_vec(&v));
                }
                basis.push(v);
            }
        }
        if basis.is_empty() {
            return self.clone();
        }
        let mut reduced = Matrix::from_rows(self.field.clone(), &basis);
        let pivots = reduced.rref();
        let rank = pivots.len();
        let free: Vec<usize> = (0..self.dim).filter(|c| !pivots.contains(c)).collect();
        let reduce = |v: &[u64]| -> Vec<u64> {
            let mut w = v.to_vec();
            for (row, &p) in pivots.iter().enumerate() {
                let coeff = w[p];
                if coeff != 0 {
                    for (c, wc) in w.iter_mut().enumerate() {
                        let delta = self.field.mul(coeff, reduced.get(row, c));
                        *wc = self.field.sub(*wc, delta);
                    }
                }
            }
            free.iter().map(|&f| w[f]).collect()
        };
        let qdim = self.dim - rank;
        let action = self
            .action
            .iter()
            .map(|a| {
                let mut m = Matrix::zeros(self.field.clone(), qdim, qdim);
                for (ci, &f) in free.iter().enumerate() {
                    let mut e = vec![0u64; self.dim];
                    e[f] = 1;
                    let w = reduce(&a.mul_vec(&e));
                    for (ri, &val) in w.iter().enumerate() {
                        m.set(ri, ci, val);
                    }
                }
                m
            })
            .collect();
        ArtinianModule {
            field: self.field.clone(),
            dim: qdim,
            action,
        }
    }
}

/// Seeded test-instance generator: a quotient of the free module of the
/// given rank by the submodule generated by `relations` random elements.
/// Falls back toward the free module if the quotient collapses to zero.
pub fn random_module(
    algebra: &ArtinianAlgebra,
    copies: usize,
    relations: usize,
    seed: u64,
) -> ArtinianModule {
    let regular = ArtinianModule::regular(algebra);
    let mut free = regular.clone();
    for _ in 1..copies.max(1) {
        free = free.direct_sum(&regular);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens: Vec<Vec<u64>> = (0..relations)
        .map(|_| {
            (0..free.dim())
                .map(|_| algebra.field().sample(&mut rng))
                .collect()
        })
        .collect();
    loop {
        let quotient = free.quotient_by(&gens);
        if quotient.dim() > 0 || gens.is_empty() {
            return quotient;
        }
        gens.pop();
    }
}

/// Seeded generator of socle-injection instances: a random small
/// monomial algebra, a random nonempty slice of its socle as the
/// subspace, and one of several module shapes (free covers and their
/// duals, which always satisfy the multiple-dimension hypothesis; random
/// quotients, which may or may not; the residue field, which violates it
/// whenever the subspace is nonempty and the algebra is not a field).
pub fn random_problem(p: u64, seed: u64) -> SocleProblem {
    use rand::Rng;
    const IDEALS: &[&str] = &[
        "x^2",
        "x^3",
        "x^4",
        "x^2, y^2",
        "x^2, x*y, y^2",
        "x^3, x*y, y^2",
        "x^3, x*y, y^3",
        "x^2, y^3",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e3779b97f4a7c15) ^ p);
    let ideal = crate::staircase::parse_ideal(IDEALS[rng.gen_range(0..IDEALS.len())])
        .expect("pool ideals parse");
    let field = Gf::prime(p).expect("pool primes are prime");
    let (algebra, _) = monomial_algebra(field, &ideal).expect("pool ideals are small");
    let socle = algebra.socle();
    let take = rng.gen_range(1..=socle.len());
    let mut order: Vec<usize> = (0..socle.len()).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut picked: Vec<usize> = order.into_iter().take(take).collect();
    picked.sort_unstable();
    let subspace: Vec<Vec<u64>> = picked.into_iter().map(|i| socle[i].clone()).collect();
    let free_cover = |copies: usize| {
        let reg = ArtinianModule::regular(&algebra);
        let mut m = reg.clone();
        for _ in 1..copies.max(1) {
            m = m.direct_sum(&reg);
        }
        m
    };
    let module = match rng.gen_range(0..5u32) {
        0 => free_cover(take),
        1 => free_cover(take).dual(),
        2 => free_cover(take).direct_sum(&ArtinianModule::residue_field(&algebra)),
        3 => {
            let free = free_cover(take + 1);
            let relation: Vec<u64> = (0..free.dim())
                .map(|_| algebra.field().sample(&mut rng))
                .collect();
            let q = free.quotient_by(&[relation]);
            if q.dim() == 0 {
                free
            } else {
                q
            }
        }
        _ => ArtinianModule::residue_field(&algebra),
    };
    SocleProblem::new(algebra, module, subspace).expect("generated instances are valid")
}

/// Outcome of a socle hypothesis check. `exhaustive` reports whether
/// every scaling class of the subspace was enumerated or only the basis
/// plus random samples were tried (large fields / large subspaces).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisCheck {
    pub holds: bool,
    pub exhaustive: bool,
    /// Coefficients (in the subspace basis) of a violating element and
    /// the dimension of its multiple of the module.
    pub violation: Option<(Vec<u64>, usize)>,
}

/// A socle-injection instance: an algebra, a module over it, and a basis
/// of a subspace of the algebra's socle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SocleProblem {
    pub algebra: ArtinianAlgebra,
    pub module: ArtinianModule,
    pub subspace: Vec<Vec<u64>>,
}

impl SocleProblem {
    pub fn new(
        algebra: ArtinianAlgebra,
        module: ArtinianModule,
        subspace: Vec<Vec<u64>>,
    ) -> Result<SocleProblem> {
        if module.action().len() + 1 != algebra.dim() {
            return Err(Error::InvalidModule(format!(
                "module has {} action matrices, algebra needs {}",
                module.action().len(),
                algebra.dim() - 1
            )));
        }
        if module.field() != algebra.field() {
            return Err(Error::InvalidModule(
                "module and algebra fields differ".into(),
            ));
        }
        let d = algebra.dim();
        let field = algebra.field();
        for (i, v) in subspace.iter().enumerate() {
            if v.len() != d {
                return Err(Error::InvalidSubspace(format!(
                    "vector {i} has {} coordinates, expected {d}",
                    v.len()
                )));
            }
            if let Some(&bad) = v.iter().find(|&&x| !field.is_element(x)) {
                return Err(Error::InvalidSubspace(format!(
                    "entry {bad} in vector {i} is not a field element"
                )));
            }
            for j in 1..d {
                if !vec_is_zero(&algebra.regular_action(j).mul_vec(v)) {
                    return Err(Error::InvalidSubspace(format!(
                        "vector {i} is not annihilated by maximal-ideal basis {j}"
                    )));
                }
            }
        }
        if Matrix::span_rank(field, &subspace) != subspace.len() {
            return Err(Error::InvalidSubspace(
                "subspace vectors are linearly dependent".into(),
            ));
        }
        Ok(SocleProblem {
            algebra,
            module,
            subspace,
        })
    }

    fn subspace_element(&self, lambda: &[u64]) -> Vec<u64> {
        let field = self.algebra.field();
        let mut delta = vec![0u64; self.algebra.dim()];
        for (l, v) in lambda.iter().zip(&self.subspace) {
            vec_add_scaled(field, &mut delta, v, *l);
        }
        delta
    }

    fn multiple_dim(&self, lambda: &[u64]) -> usize {
        self.module.element_action(&self.subspace_element(lambda)).rank()
    }

    /// Does every nonzero element of the subspace multiply the module to
    /// dimension at least dim V? Scaling an element does not change that
    /// dimension, so one representative per scaling class suffices; all
    /// classes are enumerated when there are at most 10^5 of them,
    /// otherwise the basis plus seeded random combinations are tried.
    pub fn check_hypothesis(&self, seed: u64) -> HypothesisCheck {
        self.check_hypothesis_with_cap(seed, EXHAUSTIVE_CAP)
    }

    pub(crate) fn check_hypothesis_with_cap(&self, seed: u64, cap: u64) -> HypothesisCheck {
        let n = self.subspace.len();
        let needed = n;
        if n == 0 {
            return HypothesisCheck {
                holds: true,
                exhaustive: true,
                violation: None,
            };
        }
        let field = self.algebra.field();
        let size = field.size();
        let class_count = {
            let mut count = 0u64;
            let mut too_many = false;
            for _ in 0..n {
                count = match count.checked_mul(size).map(|c| c + 1) {
                    Some(c) if c <= cap => c,
                    _ => {
                        too_many = true;
                        break;
                    }
                };
            }
            if too_many {
                None
            } else {
                Some(count)
            }
        };
        let check = |lambda: &[u64]| -> Option<(Vec<u64>, usize)> {
            let got = self.multiple_dim(lambda);
            (got < needed).then(|| (lambda.to_vec(), got))
        };
        if class_count.is_some() {
            // One representative per scaling class: leading coefficient 1.
            for lead in 0..n {
                let tail = n - lead - 1;
                let mut digits = vec![0u64; tail];
                loop {
                    let mut lambda = vec![0u64; n];
                    lambda[lead] = 1;
                    lambda[lead + 1..].copy_from_slice(&digits);
                    if let Some(v) = check(&lambda) {
                        return HypothesisCheck {
                            holds: false,
                            exhaustive: true,
                            violation: Some(v),
                        };
                    }
                    let mut pos = 0;
                    while pos < tail {
                        digits[pos] += 1;
                        if digits[pos] < size {
                            break;
                        }
                        digits[pos] = 0;
                        pos += 1;
                    }
                    if pos == tail {
                        break;
                    }
                }
            }
            return HypothesisCheck {
                holds: true,
                exhaustive: true,
                violation: None,
            };
        }
        for i in 0..n {
            let mut lambda = vec![0u64; n];
            lambda[i] = 1;
            if let Some(v) = check(&lambda) {
                return HypothesisCheck {
                    holds: false,
                    exhaustive: false,
                    violation: Some(v),
                };
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..SAMPLED_CHECKS {
            let lambda: Vec<u64> = (0..n).map(|_| field.sample(&mut rng)).collect();
            if vec_is_zero(&lambda) {
                continue;
            }
            if let Some(v) = check(&lambda) {
                return HypothesisCheck {
                    holds: false,
                    exhaustive: false,
                    violation: Some(v),
                };
            }
        }
        HypothesisCheck {
            holds: true,
            exhaustive: false,
            violation: None,
        }
    }

    /// Construct m in M whose evaluation map is injective on the chosen
    /// socle subspace: the multiples of m by the subspace basis are
    /// linearly independent. Induction over the basis; when a new basis
    /// element lands in the span, the kernel combination Delta kills m,
    /// and m is repaired to m + c*m' for a candidate m' with Delta*m'
    /// nonzero and a scalar c that restores independence. Every candidate
    /// scalar is tried on small fields; larger fields are sampled
    /// `trials` times per candidate. The result is rank-checked before
    /// being returned.
    pub fn socle_injection(&self, trials: u64, seed: u64) -> Result<Vec<u64>> {
        let check = self.check_hypothesis(seed ^ 0x736f636c65);
        if !check.holds {
            let (lambda, got) = check.violation.expect("violation recorded");
            return Err(Error::HypothesisViolated {
                witness: format!("{lambda:?}"),
                got,
                needed: self.subspace.len(),
            });
        }
        let n = self.subspace.len();
        let dim_m = self.module.dim();
        if n == 0 {
            return Ok(vec![0u64; dim_m]);
        }
        let field = self.algebra.field().clone();
        let actions: Vec<Matrix> = self
            .subspace
            .iter()
            .map(|v| self.module.element_action(v))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scalars: Vec<u64> = if field.size() <= FULL_SCALAR_SCAN {
            (1..field.size()).collect()
        } else {
            (0..trials.max(1))
                .map(|_| field.sample_nonzero(&mut rng))
                .collect()
        };
        // Start with a basis vector not killed by the first socle element;
        // one exists because its multiple of M has positive dimension.
        let mut m = (0..dim_m)
            .map(|b| {
                let mut e = vec![0u64; dim_m];
                e[b] = 1;
                e
            })
            .find(|e| !vec_is_zero(&actions[0].mul_vec(e)))
            .ok_or(Error::VerificationFailed)?;
        for j in 2..=n {
            let multiples: Vec<Vec<u64>> = actions[..j].iter().map(|a| a.mul_vec(&m)).collect();
            if Matrix::span_rank(&field, &multiples) == j {
                continue;
            }
            // The first j-1 multiples are independent, so the kernel of
            // the stacked multiples is one-dimensional with a nonzero
            // last coefficient: that combination is the repair target.
            let columns = Matrix::from_rows(field.clone(), &multiples).transpose();
            let kernel = columns.kernel_basis();
            debug_assert_eq!(kernel.len(), 1);
            let lambda = &kernel[0];
            debug_assert_ne!(lambda[j - 1], 0);
            let delta = self.subspace_element(lambda);
            let delta_action = self.module.element_action(&delta);
            let mut candidates: Vec<Vec<u64>> = (0..dim_m)
                .map(|b| {
                    let mut e = vec![0u64; dim_m];
                    e[b] = 1;
                    e
                })
                .collect();
            for _ in 0..trials {
                candidates.push((0..dim_m).map(|_| field.sample(&mut rng)).collect());
            }
            let mut repaired = false;
            'search: for cand in &candidates {
                if vec_is_zero(&delta_action.mul_vec(cand)) {
                    continue;
                }
                for &c in &scalars {
                    let mut trial_m = m.clone();
                    vec_add_scaled(&field, &mut trial_m, cand, c);
                    let multiples: Vec<Vec<u64>> =
                        actions[..j].iter().map(|a| a.mul_vec(&trial_m)).collect();
                    if Matrix::span_rank(&field, &multiples) == j {
                        m = trial_m;
                        repaired = true;
                        break 'search;
                    }
                }
            }
            if !repaired {
                return Err(Error::NoGenericScalar {
                    field_size: field.size(),
                });
            }
        }
        let multiples: Vec<Vec<u64>> = actions.iter().map(|a| a.mul_vec(&m)).collect();
        if Matrix::span_rank(&field, &multiples) != n {
            return Err(Error::VerificationFailed);
        }
        Ok(m)
    }

    /// Like `socle_injection`, but on scalar exhaustion retries over
    /// field extensions of the same characteristic (degrees 2 up to
    /// `max_degree`), re-validating the hypothesis there. All problem
    /// data embeds unchanged because structure constants lie in the prime
    /// field. Returns the element together with the field it lives over.
    /// Only available when the base field is a prime field.
    pub fn socle_injection_extended(
        &self,
        trials: u64,
        seed: u64,
        max_degree: u32,
    ) -> Result<(Vec<u64>, Gf)> {
        let base = self.algebra.field().clone();
        let mut last = match self.socle_injection(trials, seed) {
            Ok(m) => return Ok((m, base)),
            Err(e @ Error::NoGenericScalar { .. }) if base.degree() == 1 => e,
            Err(e) => return Err(e),
        };
        for degree in 2..=max_degree.max(2) {
            let ext = Gf::extension(base.characteristic(), degree)?;
            let algebra =
                ArtinianAlgebra::new_unchecked(ext.clone(), self.algebra.constants().clone());
            let action = self
                .module
                .action()
                .iter()
                .map(|a| {
                    let rows: Vec<Vec<u64>> = (0..a.rows())
                        .map(|r| (0..a.cols()).map(|c| a.get(r, c)).collect())
                        .collect();
                    Matrix::from_rows(ext.clone(), &rows)
                })
                .collect();
            let module = ArtinianModule {
                field: ext.clone(),
                dim: self.module.dim(),
                action,
            };
            let problem = SocleProblem {
                algebra,
                module,
                subspace: self.subspace.clone(),
            };
            match problem.socle_injection(trials, seed) {
                Ok(m) => return Ok((m, ext)),
                Err(e @ Error::NoGenericScalar { .. }) => last = e,
                Err(e) => return Err(e),
            }
        }
        Err(last)
    }

    /// Parse from the on-disk TOML format (see the repository README):
    /// top-level `field` (a prime) and `socle_subspace`, an `[algebra]`
    /// table with `dim` and `mult`, a `[module]` table with `dim` and
    /// `action`.
    pub fn from_toml_str(text: &str) -> Result<SocleProblem> {
        let file: ProblemFile =
            toml::from_str(text).map_err(|e| Error::ProblemFile(e.to_string()))?;
        file.into_problem()
    }

    pub fn to_toml_string(&self) -> String {
        let file = ProblemFile {
            field: self.algebra.field().characteristic(),
            socle_subspace: self.subspace.clone(),
            algebra: AlgebraSection {
                dim: self.algebra.dim(),
                mult: self.algebra.constants().clone(),
            },
            module: ModuleSection {
                dim: self.module.dim(),
                action: self
                    .module
                    .action()
                    .iter()
                    .map(|a| {
                        (0..a.rows())
                            .map(|r| (0..a.cols()).map(|c| a.get(r, c)).collect())
                            .collect()
                    })
                    .collect(),
            },
        };
        toml::to_string(&file).expect("problem serializes")
    }

    pub fn load(path: &Path) -> Result<SocleProblem> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::ProblemFile(format!("{}: {e}", path.display())))?;
        SocleProblem::from_toml_str(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml_string())
            .map_err(|e| Error::ProblemFile(format!("{}: {e}", path.display())))
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraSection {
    dim: usize,
    mult: Vec<Vec<Vec<u64>>>,
}

#[derive(Serialize, Deserialize)]
struct ModuleSection {
    dim: usize,
    action: Vec<Vec<Vec<u64>>>,
}

#[derive(Serialize, Deserialize)]
struct ProblemFile {
    field: u64,
    socle_subspace: Vec<Vec<u64>>,
    algebra: AlgebraSection,
    module: ModuleSection,
}

impl ProblemFile {
    fn into_problem(self) -> Result<SocleProblem> {
        let field = Gf::prime(self.field)?;
        if self.algebra.mult.len() != self.algebra.dim {
            return Err(Error::ProblemFile(format!(
                "algebra.mult has {} planes, algebra.dim says {}",
                self.algebra.mult.len(),
                self.algebra.dim
            )));
        }
        let algebra = ArtinianAlgebra::new(field.clone(), self.algebra.mult)?;
        if self.module.action.len() + 1 != self.algebra.dim {
            return Err(Error::ProblemFile(format!(
                "module.action has {} matrices, algebra.dim needs {}",
                self.module.action.len(),
                self.algebra.dim - 1
            )));
        }
        let mut matrices = Vec::with_capacity(self.module.action.len());
        for (i, rows) in self.module.action.iter().enumerate() {
            if rows.len() != self.module.dim
                || rows.iter().any(|r| r.len() != self.module.dim)
            {
                return Err(Error::ProblemFile(format!(
                    "module.action[{i}] is not a {0}x{0} matrix",
                    self.module.dim
                )));
            }
            for v in rows.iter().flatten() {
                if !field.is_element(*v) {
                    return Err(Error::ProblemFile(format!(
                        "module.action[{i}] entry {v} is not a field element"
                    )));
                }
            }
            matrices.push(Matrix::from_rows(field.clone(), rows));
        }
        let module = ArtinianModule::new(&algebra, self.module.dim, matrices)?;
        SocleProblem::new(algebra, module, self.socle_subspace)
    }
}
