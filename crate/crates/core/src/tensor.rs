//! Projective tensor products of weighted free modules.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::normed::{ModuleMap, NormFlavor, WeightedFreeModule};
use crate::scalars::{serde_rational, BanachRing, NormValue, Rational, RingKind};

/// `M ⊗ N` with generators `e_i ⊗ f_j` at index `i·rank(N) + j`.
///
/// The weight of `e_i ⊗ f_j` is `s·w_i·v_j` for a ring rescaled by `s`, so
/// that the module norm of a generator is `‖e_i‖·‖f_j‖`.
pub fn tensor_modules(
    m: &WeightedFreeModule,
    n: &WeightedFreeModule,
    flavor: NormFlavor,
) -> Result<WeightedFreeModule> {
    if m.ring() != n.ring() {
        return Err(Error::RingMismatch);
    }
    let s = m.ring().scale();
    let weights = m
        .weights()
        .iter()
        .flat_map(|w| n.weights().iter().map(move |v| s * w * v))
        .collect();
    WeightedFreeModule::new(m.ring().clone(), weights, flavor)
}

/// `f ⊗ g` between the tensor modules of sources and targets.
pub fn tensor_maps(f: &ModuleMap, g: &ModuleMap, flavor: NormFlavor) -> Result<ModuleMap> {
    ModuleMap::new(
        tensor_modules(f.source(), g.source(), flavor)?,
        tensor_modules(f.target(), g.target(), flavor)?,
        f.matrix().kronecker(g.matrix()),
    )
}

/// An element `Σ m_k ⊗ n_k` of `M ⊗ N`, kept with its representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    left: WeightedFreeModule,
    right: WeightedFreeModule,
    terms: Vec<(Vec<Rational>, Vec<Rational>)>,
}

impl TensorElement {
    pub fn new(
        left: WeightedFreeModule,
        right: WeightedFreeModule,
        terms: Vec<(Vec<Rational>, Vec<Rational>)>,
    ) -> Result<Self> {
        if left.ring() != right.ring() {
            return Err(Error::RingMismatch);
        }
        for (m, n) in &terms {
            left.check_vector(m)?;
            right.check_vector(n)?;
        }
        Ok(TensorElement { left, right, terms })
    }

    pub fn zero(left: WeightedFreeModule, right: WeightedFreeModule) -> Result<Self> {
        Self::new(left, right, Vec::new())
    }

    /// `e_i ⊗ f_j`.
    pub fn generator(left: &WeightedFreeModule, right: &WeightedFreeModule, i: usize, j: usize) -> Result<Self> {
        let mut m = vec![Rational::zero(); left.rank()];
        let mut n = vec![Rational::zero(); right.rank()];
        m[i] = Rational::one();
        n[j] = Rational::one();
        Self::new(left.clone(), right.clone(), vec![(m, n)])
    }

    pub fn left(&self) -> &WeightedFreeModule {
        &self.left
    }

    pub fn right(&self) -> &WeightedFreeModule {
        &self.right
    }

    pub fn terms(&self) -> &[(Vec<Rational>, Vec<Rational>)] {
        &self.terms
    }

    fn ring(&self) -> &BanachRing {
        self.left.ring()
    }

    /// The coefficient matrix `X` with `x = Σ X_ij e_i ⊗ f_j`.
    pub fn coefficients(&self) -> Matrix {
        let mut x = Matrix::zeros(self.left.rank(), self.right.rank());
        for (m, n) in &self.terms {
            for (i, a) in m.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
                for (j, b) in n.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                    let v = x.get(i, j) + a * b;
                    x.set(i, j, v);
                }
            }
        }
        x
    }

    /// The element with `m_k` replaced by `λ m_k`.
    pub fn scaled(&self, lambda: &Rational) -> Result<Self> {
        self.ring().check_element(lambda)?;
        let terms = self
            .terms
            .iter()
            .map(|(m, n)| (m.iter().map(|a| a * lambda).collect(), n.clone()))
            .collect();
        Ok(TensorElement {
            terms,
            ..self.clone()
        })
    }
}

/// `Σ ‖m_k‖‖n_k‖` (sum flavor) or `max ‖m_k‖‖n_k‖` (max flavor) for the
/// stored representation.
pub fn tensor_norm_upper(x: &TensorElement, flavor: NormFlavor) -> Rational {
    x.terms.iter().fold(Rational::zero(), |acc, (m, n)| {
        let c = x.left.norm(m).unwrap() * x.right.norm(n).unwrap();
        flavor.combine(acc, c)
    })
}

/// Certified enclosure of the projective tensor norm.
///
/// The upper end is the best of the stored representation, the canonical
/// representation `Σ X_ij e_i ⊗ f_j` and, over ℤ, a bounded search over
/// representations with at most `term_bound` terms whose coordinates lie in
/// `[-coeff_bound, coeff_bound]`.
///
/// The lower end comes from bilinear forms `B` with `|B(m,n)| ≤ ‖m‖‖n‖`:
/// the single-entry forms give `max |X_ij| w_i v_j` for every ring, and for
/// the usual absolute value with both factors of sum flavor the sign
/// pattern of `X` gives `Σ |X_ij| w_i v_j`, which meets the canonical
/// representation.
pub fn tensor_norm_certified(
    x: &TensorElement,
    flavor: NormFlavor,
    coeff_bound: u32,
    term_bound: u32,
) -> Result<NormValue> {
    let ring = x.ring();
    if flavor == NormFlavor::Max && !ring.non_archimedean() {
        return Err(Error::FlavorMismatch);
    }
    let (p, q) = (x.left.rank(), x.right.rank());
    let coeffs = x.coefficients();
    let s2 = ring.scale() * ring.scale();
    let (w, v) = (x.left.weights(), x.right.weights());

    let mut single = Rational::zero();
    let mut signed = Rational::zero();
    let mut canonical = Rational::zero();
    for i in 0..p {
        for j in 0..q {
            let a = ring.raw_abs(coeffs.get(i, j)) * &w[i] * &v[j];
            single = single.max(a.clone());
            signed += &a;
            canonical = flavor.combine(canonical, a);
        }
    }
    let archimedean_sum = !ring.non_archimedean()
        && x.left.flavor() == NormFlavor::Sum
        && x.right.flavor() == NormFlavor::Sum;
    let lo_free = if archimedean_sum { signed } else { single };
    // the canonical representation measures each generator as ‖e_i‖‖f_j‖,
    // which is w_i v_j in either factor flavor
    let mut hi_free = canonical;
    let given = tensor_norm_upper(x, flavor) / &s2;
    if !x.terms.is_empty() && given < hi_free {
        hi_free = given;
    }
    if hi_free > lo_free && ring.is_lattice() && term_bound > 0 {
        let target = int_matrix(&coeffs);
        let mut search = RepresentationSearch::new(x, flavor, coeff_bound as i64, hi_free.clone());
        search.run(&target, term_bound as usize, Rational::zero());
        hi_free = search.best;
    }
    Ok(NormValue::new(lo_free * &s2, hi_free * &s2))
}

fn int_matrix(m: &Matrix) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x.to_integer()).collect())
        .collect()
}

const SEARCH_NODE_LIMIT: usize = 200_000;

/// Depth-first search for cheaper integer representations.
struct RepresentationSearch {
    flavor: NormFlavor,
    left: Vec<(Vec<BigInt>, Rational)>,
    right: Vec<(Vec<BigInt>, Rational)>,
    best: Rational,
    nodes: usize,
    trivial: bool,
    left_module: WeightedFreeModule,
    right_module: WeightedFreeModule,
}

fn box_vectors(dim: usize, bound: i64, module: &WeightedFreeModule, leading_positive: bool) -> Vec<(Vec<BigInt>, Rational)> {
    let total = (2 * bound + 1).checked_pow(dim as u32).unwrap_or(i64::MAX);
    if total > 20_000 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut x = vec![-bound; dim];
    loop {
        let first = x.iter().find(|a| **a != 0);
        if first.is_some_and(|f| !leading_positive || *f > 0) {
            let v: Vec<Rational> = x.iter().map(|&a| Rational::from_integer(a.into())).collect();
            let norm = module.scale_free_norm(&v);
            out.push((x.iter().map(|&a| BigInt::from(a)).collect(), norm));
        }
        let mut i = 0;
        while i < dim && x[i] == bound {
            x[i] = -bound;
            i += 1;
        }
        if i == dim {
            break;
        }
        x[i] += 1;
    }
    out.sort_by(|a, b| a.1.cmp(&b.1));
    out
}

impl RepresentationSearch {
    fn new(x: &TensorElement, flavor: NormFlavor, bound: i64, best: Rational) -> Self {
        RepresentationSearch {
            flavor,
            left: box_vectors(x.left.rank(), bound, &x.left, true),
            right: box_vectors(x.right.rank(), bound, &x.right, false),
            best,
            nodes: 0,
            trivial: x.ring().kind() == RingKind::IntegersTrivial,
            left_module: x.left.clone(),
            right_module: x.right.clone(),
        }
    }

    fn rank_one_cost(&self, r: &[Vec<BigInt>]) -> Option<Rational> {
        // r = u vᵀ with u primitive; cost ‖u‖‖v‖ (any other integer
        // factorization scales u up, which never helps)
        let row = r.iter().position(|row| row.iter().any(|a| !a.is_zero()))?;
        let col = r[row].iter().position(|a| !a.is_zero())?;
        let pivot = &r[row][col];
        for i in 0..r.len() {
            for j in 0..r[0].len() {
                if &r[i][j] * pivot != &r[i][col] * &r[row][j] {
                    return None;
                }
            }
        }
        let g = r.iter().map(|row| row[col].clone()).fold(BigInt::zero(), |g, a| num_integer::Integer::gcd(&g, &a));
        let u: Vec<Rational> = r.iter().map(|row| Rational::from_integer(&row[col] / &g)).collect();
        let uc = Rational::from_integer(&r[row][col] / &g);
        let v: Vec<Rational> = r[row].iter().map(|a| Rational::from_integer(a.clone()) / &uc).collect();
        if v.iter().any(|a| !a.is_integer()) {
            return None;
        }
        Some(self.left_module.scale_free_norm(&u) * self.right_module.scale_free_norm(&v))
    }

    fn run(&mut self, residual: &[Vec<BigInt>], depth: usize, cost: Rational) {
        self.nodes += 1;
        if self.nodes > SEARCH_NODE_LIMIT {
            return;
        }
        if residual.iter().all(|r| r.iter().all(Zero::is_zero)) {
            if cost < self.best {
                self.best = cost;
            }
            return;
        }
        if depth == 0 {
            return;
        }
        if let Some(c) = self.rank_one_cost(residual) {
            let total = self.flavor.combine(cost.clone(), c);
            if total < self.best {
                self.best = total;
            }
        }
        if depth == 1 {
            return;
        }
        let left = std::mem::take(&mut self.left);
        let right = std::mem::take(&mut self.right);
        'outer: for (m, cm) in &left {
            for (n, cn) in &right {
                let c = cm * cn;
                let total = self.flavor.combine(cost.clone(), c);
                if total >= self.best {
                    // vectors are sorted by norm, so later n only cost more
                    break;
                }
                if self.trivial && m.iter().zip(residual).all(|(a, row)| a.is_zero() || row.iter().all(Zero::is_zero)) {
                    continue;
                }
                let next: Vec<Vec<BigInt>> = residual
                    .iter()
                    .zip(m)
                    .map(|(row, a)| row.iter().zip(n).map(|(r, b)| r - a * b).collect())
                    .collect();
                self.run(&next, depth - 1, total);
                if self.nodes > SEARCH_NODE_LIMIT {
                    break 'outer;
                }
            }
        }
        self.left = left;
        self.right = right;
    }
}

/// Check that the representation-wise bound scales under `x ↦ λx`.
#[derive(Clone, Debug, Serialize)]
pub struct ScalarContraction {
    #[serde(with = "serde_rational")]
    pub abs_lambda: Rational,
    #[serde(with = "serde_rational")]
    pub bound: Rational,
    #[serde(with = "serde_rational")]
    pub scaled_bound: Rational,
    /// `scaled_bound ≤ C·|λ|·bound`.
    pub holds: bool,
}

pub fn scalar_contraction_bound(lambda: &Rational, x: &TensorElement, flavor: NormFlavor) -> Result<ScalarContraction> {
    let ring = x.ring();
    let abs_lambda = ring.abs(lambda)?;
    let bound = tensor_norm_upper(x, flavor);
    let scaled_bound = tensor_norm_upper(&x.scaled(lambda)?, flavor);
    let holds = scaled_bound <= ring.mul_constant() * &abs_lambda * &bound;
    Ok(ScalarContraction {
        abs_lambda,
        bound,
        scaled_bound,
        holds,
    })
}

/// A finite-rank normed algebra: a weighted basis with structure constants.
#[derive(Clone, Debug)]
pub struct NormedAlgebra {
    module: WeightedFreeModule,
    /// `table[i][j]` holds the coordinates of `e_i e_j`.
    table: Vec<Vec<Vec<Rational>>>,
}

impl NormedAlgebra {
    pub fn new(module: WeightedFreeModule, table: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        let n = module.rank();
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: table.len(),
            });
        }
        for row in &table {
            for v in row {
                module.check_vector(v)?;
            }
        }
        Ok(NormedAlgebra { module, table })
    }

    /// The base ring as a rank-one algebra.
    pub fn scalars(ring: BanachRing) -> Self {
        let flavor = NormFlavor::natural_for(&ring);
        let module = WeightedFreeModule::unit_weights(ring, 1, flavor).unwrap();
        NormedAlgebra::new(module, vec![vec![vec![Rational::one()]]]).unwrap()
    }

    /// `R[X]/(X^{D+1})` with basis `X^k` of weight `ρ^k`.
    pub fn truncated_polynomials(ring: BanachRing, rho: Rational, degree: usize, flavor: NormFlavor) -> Result<Self> {
        let weights: Vec<Rational> = (0..=degree).map(|k| num_traits::pow(rho.clone(), k)).collect();
        let module = WeightedFreeModule::new(ring, weights, flavor)?;
        let n = degree + 1;
        let table = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut v = vec![Rational::zero(); n];
                        if i + j < n {
                            v[i + j] = Rational::one();
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        NormedAlgebra::new(module, table)
    }

    pub fn module(&self) -> &WeightedFreeModule {
        &self.module
    }

    pub fn multiply(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.module.rank();
        let mut out = vec![Rational::zero(); n];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = a * b;
                for (k, c) in self.table[i][j].iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    out[k] += &ab * c;
                }
            }
        }
        out
    }

    /// A constant `K` with `‖xy‖ ≤ K‖x‖‖y‖`: the worst ratio on basis pairs,
    /// times the ring constant for each scalar product taken.
    pub fn constant(&self) -> Rational {
        let m = &self.module;
        let c = m.ring().mul_constant();
        let mut k = Rational::zero();
        for (i, row) in self.table.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let ratio = m.norm(v).unwrap() / (m.norm(&unit(m.rank(), i)).unwrap() * m.norm(&unit(m.rank(), j)).unwrap());
                k = k.max(ratio);
            }
        }
        k * c * c
    }

    /// `A ⊗ B` with the tensor weights and `(a⊗b)(a'⊗b') = aa' ⊗ bb'`.
    pub fn tensor(&self, other: &NormedAlgebra, flavor: NormFlavor) -> Result<NormedAlgebra> {
        let module = tensor_modules(&self.module, &other.module, flavor)?;
        let (p, q) = (self.module.rank(), other.module.rank());
        let mut table = vec![vec![Vec::new(); p * q]; p * q];
        for i in 0..p {
            for k in 0..q {
                for j in 0..p {
                    for l in 0..q {
                        let a = &self.table[i][j];
                        let b = &other.table[k][l];
                        table[i * q + k][j * q + l] = a
                            .iter()
                            .flat_map(|x| b.iter().map(move |y| x * y))
                            .collect();
                    }
                }
            }
        }
        NormedAlgebra::new(module, table)
    }
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

#[derive(Clone, Debug, Serialize)]
pub struct SubmultiplicativityReport {
    #[serde(with = "serde_rational")]
    pub constant_left: Rational,
    #[serde(with = "serde_rational")]
    pub constant_right: Rational,
    pub pairs_checked: usize,
    /// Indices of sample pairs with `‖xy‖ > C₁C₂‖x‖‖y‖`.
    pub violations: Vec<usize>,
}

/// Checks `‖xy‖ ≤ C_A·C_B·‖x‖‖y‖` in `A ⊗ B` on the given pairs.
pub fn algebra_tensor_submultiplicativity(
    a: &NormedAlgebra,
    b: &NormedAlgebra,
    flavor: NormFlavor,
    pairs: &[(Vec<Rational>, Vec<Rational>)],
) -> Result<SubmultiplicativityReport> {
    let ab = a.tensor(b, flavor)?;
    let (ca, cb) = (a.constant(), b.constant());
    let k = &ca * &cb;
    let mut violations = Vec::new();
    for (idx, (x, y)) in pairs.iter().enumerate() {
        let m = ab.module();
        let lhs = m.norm(&ab.multiply(x, y))?;
        let rhs = &k * m.norm(x)? * m.norm(y)?;
        if lhs > rhs {
            violations.push(idx);
        }
    }
    Ok(SubmultiplicativityReport {
        constant_left: ca,
        constant_right: cb,
        pairs_checked: pairs.len(),
        violations,
    })
}

/// Minimal cost `Σ |m_k||n_k|` of writing the integer `a` as `Σ m_k n_k`
/// with `|m_k|, |n_k| ≤ bound` and at most `terms` terms. Used as an
/// independent oracle for rank-one factors.
pub fn rank_one_representation_oracle(a: i64, bound: i64, terms: usize) -> Option<i64> {
    let mut best: HashMap<i64, i64> = HashMap::from([(0, 0)]);
    let products: Vec<(i64, i64)> = (-bound..=bound)
        .flat_map(|m| (-bound..=bound).map(move |n| (m * n, (m * n).abs())))
        .collect();
    let mut reach = best.clone();
    for _ in 0..terms {
        let mut next = reach.clone();
        for (&value, &cost) in &reach {
            for &(p, c) in &products {
                let e = next.entry(value + p).or_insert(i64::MAX);
                *e = (*e).min(cost + c);
            }
        }
        reach = next;
    }
    best.extend(reach);
    best.get(&a).copied()
}
