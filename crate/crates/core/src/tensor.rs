//! Symmetric tensors and Hankel tensors.
//!
//! Dense symmetric tensors store one value per sorted index tuple (the
//! combinadic layout of [`crate::combin`]), `C(n+m-1, m)` entries instead of
//! `n^m`. Index `0` plays the role of the homogenizing variable `x_0`;
//! indices `1..n-1` carry the multi-index frequencies. A Hankel tensor is
//! never stored densely: its entries are read off a generating vector as
//! `a_{i_1...i_m} = v_{i_1+...+i_m}`.

use crate::combin::{
    multinomial_coefficient as multinomial_parts, multiset_count, permutation_count,
    rank_sorted_tuple, sorted_tuples,
};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sequence::{
    multi_indices_up_to, GeneratingVector, MultiIndex, MultidimensionalSequence,
};

/// Default relative tolerance for structural equality checks on float data.
pub const STRUCTURE_EQ_TOL: f64 = 1e-12;

/// Multinomial coefficient `m! / (j_1! ... j_{n-1}! (m-|j|)!)` attached to a
/// multi-index in the homogeneous polynomial expansion.
pub fn multinomial_coefficient(m: usize, j: &MultiIndex) -> Result<u128> {
    multinomial_parts(m, j.entries())
}

fn scalar_from_count<T: Scalar>(count: u128) -> T {
    debug_assert!(count <= i64::MAX as u128, "count exceeds desk scale");
    T::from_int(count as i64)
}

/// Dense symmetric tensor of order `m` and dimension `n`.
///
/// Order `0` is permitted and represents a scalar (the result of a full
/// contraction).
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricTensor<T> {
    order: usize,
    dimension: usize,
    entries: Vec<T>,
}

impl<T: Scalar> SymmetricTensor<T> {
    pub fn zeros(order: usize, dimension: usize) -> Result<Self> {
        Self::validate_shape(order, dimension)?;
        Ok(Self {
            order,
            dimension,
            entries: vec![T::zero(); multiset_count(dimension, order)],
        })
    }

    /// Builds entry-by-entry from sorted index tuples, in rank order.
    pub fn try_from_fn(
        order: usize,
        dimension: usize,
        mut f: impl FnMut(&[usize]) -> Result<T>,
    ) -> Result<Self> {
        Self::validate_shape(order, dimension)?;
        let mut entries = Vec::with_capacity(multiset_count(dimension, order));
        for idx in sorted_tuples(dimension, order) {
            entries.push(f(&idx)?);
        }
        Ok(Self {
            order,
            dimension,
            entries,
        })
    }

    pub fn from_fn(
        order: usize,
        dimension: usize,
        mut f: impl FnMut(&[usize]) -> T,
    ) -> Result<Self> {
        Self::try_from_fn(order, dimension, |idx| Ok(f(idx)))
    }

    fn validate_shape(_order: usize, dimension: usize) -> Result<()> {
        if dimension < 2 {
            return Err(Error::Domain(format!(
                "tensor dimension must be >= 2, got {dimension}"
            )));
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    fn check_index(&self, idx: &[usize]) -> Result<()> {
        if idx.len() != self.order {
            return Err(Error::Domain(format!(
                "index tuple has length {}, tensor order is {}",
                idx.len(),
                self.order
            )));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.dimension) {
            return Err(Error::Domain(format!(
                "index {bad} out of range for dimension {}",
                self.dimension
            )));
        }
        Ok(())
    }

    /// Entry lookup; unsorted tuples are resolved through the sorted layout,
    /// so symmetry is structural.
    pub fn get(&self, idx: &[usize]) -> Result<&T> {
        self.check_index(idx)?;
        let mut sorted = idx.to_vec();
        sorted.sort_unstable();
        Ok(&self.entries[rank_sorted_tuple(&sorted)])
    }

    pub fn set(&mut self, idx: &[usize], value: T) -> Result<()> {
        self.check_index(idx)?;
        let mut sorted = idx.to_vec();
        sorted.sort_unstable();
        self.entries[rank_sorted_tuple(&sorted)] = value;
        Ok(())
    }

    /// Iterates `(sorted index tuple, entry)` in rank order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, &T)> {
        sorted_tuples(self.dimension, self.order).zip(self.entries.iter())
    }

    /// The scalar carried by an order-0 tensor.
    pub fn scalar_value(&self) -> Option<&T> {
        (self.order == 0).then(|| &self.entries[0])
    }

    pub fn max_abs(&self) -> f64 {
        self.entries
            .iter()
            .map(|v| v.to_f64().abs())
            .fold(0.0, f64::max)
    }

    /// True when entries agree on every equal-index-sum class (exactly in
    /// exact mode, within `tol` relative in float mode).
    pub fn is_hankel(&self, tol: f64) -> bool {
        let classes = self.order * (self.dimension - 1) + 1;
        let mut reps: Vec<Option<&T>> = vec![None; classes];
        for (idx, value) in self.iter() {
            let sum: usize = idx.iter().sum();
            match reps[sum] {
                None => reps[sum] = Some(value),
                Some(rep) => {
                    if !rep.eq_within(value, tol) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Contracts `times` slots against `x`, producing an order `m - times`
    /// tensor (order 0 carries the scalar `A x^m`).
    pub fn contract(&self, x: &[T], times: usize) -> Result<SymmetricTensor<T>> {
        if x.len() != self.dimension {
            return Err(Error::Domain(format!(
                "contraction vector has length {}, tensor dimension is {}",
                x.len(),
                self.dimension
            )));
        }
        if times > self.order {
            return Err(Error::Domain(format!(
                "cannot contract {times} slots of an order-{} tensor",
                self.order
            )));
        }
        let mut current = self.clone();
        for _ in 0..times {
            current = current.contract_once(x)?;
        }
        Ok(current)
    }

    fn contract_once(&self, x: &[T]) -> Result<SymmetricTensor<T>> {
        let out_order = self.order - 1;
        SymmetricTensor::try_from_fn(out_order, self.dimension, |idx| {
            let mut acc = T::zero();
            let mut full = Vec::with_capacity(self.order);
            for (i, xi) in x.iter().enumerate() {
                if xi.is_zero() {
                    continue;
                }
                full.clear();
                full.extend_from_slice(idx);
                let pos = full.partition_point(|&v| v <= i);
                full.insert(pos, i);
                acc = acc + self.entries[rank_sorted_tuple(&full)].clone() * xi.clone();
            }
            Ok(acc)
        })
    }

    /// Gradient-direction contraction `A x^{m-1}` in a single pass over
    /// `(m-1)`-tuples; equals `contract(x, m-1)` read out as a vector.
    pub fn contract_gradient(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.dimension {
            return Err(Error::Domain(format!(
                "contraction vector has length {}, tensor dimension is {}",
                x.len(),
                self.dimension
            )));
        }
        if self.order == 0 {
            return Err(Error::Domain("order-0 tensor has no gradient".into()));
        }
        let mut out = vec![T::zero(); self.dimension];
        let mut full = Vec::with_capacity(self.order);
        for idx in sorted_tuples(self.dimension, self.order - 1) {
            let weight: T = scalar_from_count(permutation_count(&idx));
            let mut term = weight;
            for &i in &idx {
                term = term * x[i].clone();
            }
            if term.is_zero() {
                continue;
            }
            for (i, slot) in out.iter_mut().enumerate() {
                full.clear();
                full.extend_from_slice(&idx);
                let pos = full.partition_point(|&v| v <= i);
                full.insert(pos, i);
                let entry = &self.entries[rank_sorted_tuple(&full)];
                *slot = slot.clone() + entry.clone() * term.clone();
            }
        }
        Ok(out)
    }

    /// Full contraction `A x^m` through the multiplicity weights; equals
    /// `contract(x, m)` but in a single pass.
    pub fn contract_scalar(&self, x: &[T]) -> Result<T> {
        if x.len() != self.dimension {
            return Err(Error::Domain(format!(
                "contraction vector has length {}, tensor dimension is {}",
                x.len(),
                self.dimension
            )));
        }
        let mut acc = T::zero();
        for (idx, value) in self.iter() {
            let weight: T = scalar_from_count(permutation_count(&idx));
            let mut term = value.clone() * weight;
            for &i in &idx {
                term = term * x[i].clone();
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Multiplicity-weighted inner product `<A, B>` over the full index
    /// space.
    pub fn inner(&self, other: &Self) -> Result<T> {
        if self.order != other.order || self.dimension != other.dimension {
            return Err(Error::Domain(
                "inner product requires identical tensor shapes".into(),
            ));
        }
        let mut acc = T::zero();
        for (r, (idx, value)) in self.iter().enumerate() {
            let weight: T = scalar_from_count(permutation_count(&idx));
            acc = acc + value.clone() * other.entries[r].clone() * weight;
        }
        Ok(acc)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.order != other.order || self.dimension != other.dimension {
            return Err(Error::Domain(
                "subtraction requires identical tensor shapes".into(),
            ));
        }
        Ok(Self {
            order: self.order,
            dimension: self.dimension,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    pub fn to_f64(&self) -> SymmetricTensor<f64> {
        SymmetricTensor {
            order: self.order,
            dimension: self.dimension,
            entries: self.entries.iter().map(Scalar::to_f64).collect(),
        }
    }
}

/// Implicit Hankel tensor: order `m`, dimension `n`, entries read off the
/// generating vector as `v_{i_1+...+i_m}`. Vectors longer than `m(n-1)+1`
/// are accepted; the tail is ignored for tensor entries but still counts for
/// Hankel-matrix checks elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelTensor<T> {
    order: usize,
    dimension: usize,
    generator: GeneratingVector<T>,
}

/// Builds an implicit Hankel tensor, requiring `L >= m(n-1)`.
pub fn hankel_tensor<T: Scalar>(
    generator: GeneratingVector<T>,
    dimension: usize,
    order: usize,
) -> Result<HankelTensor<T>> {
    HankelTensor::new(generator, dimension, order)
}

impl<T: Scalar> HankelTensor<T> {
    pub fn new(generator: GeneratingVector<T>, dimension: usize, order: usize) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::Domain(format!(
                "tensor dimension must be >= 2, got {dimension}"
            )));
        }
        if order < 1 {
            return Err(Error::Domain("tensor order must be >= 1".into()));
        }
        let needed = order * (dimension - 1);
        if generator.upper_index() < needed {
            return Err(Error::Length {
                needed,
                have: generator.upper_index(),
            });
        }
        Ok(Self {
            order,
            dimension,
            generator,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn generator(&self) -> &GeneratingVector<T> {
        &self.generator
    }

    /// Largest index sum a tensor entry can reach: `m(n-1)`.
    pub fn max_index_sum(&self) -> usize {
        self.order * (self.dimension - 1)
    }

    pub fn entry(&self, idx: &[usize]) -> Result<T> {
        if idx.len() != self.order {
            return Err(Error::Domain(format!(
                "index tuple has length {}, tensor order is {}",
                idx.len(),
                self.order
            )));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.dimension) {
            return Err(Error::Domain(format!(
                "index {bad} out of range for dimension {}",
                self.dimension
            )));
        }
        let sum: usize = idx.iter().sum();
        Ok(self.generator.get(sum)?.clone())
    }

    /// Materializes the dense symmetric tensor.
    pub fn densify(&self) -> SymmetricTensor<T> {
        SymmetricTensor::try_from_fn(self.order, self.dimension, |idx| {
            let sum: usize = idx.iter().sum();
            Ok(self.generator.get(sum)?.clone())
        })
        .expect("generator covers all index sums by construction")
    }

    /// Full contraction `A x^m` on demand, without materializing.
    pub fn contract_scalar(&self, x: &[T]) -> Result<T> {
        if x.len() != self.dimension {
            return Err(Error::Domain(format!(
                "contraction vector has length {}, tensor dimension is {}",
                x.len(),
                self.dimension
            )));
        }
        let mut acc = T::zero();
        for idx in sorted_tuples(self.dimension, self.order) {
            let sum: usize = idx.iter().sum();
            let weight: T = scalar_from_count(permutation_count(&idx));
            let mut term = self.generator.get(sum)?.clone() * weight;
            for &i in &idx {
                term = term * x[i].clone();
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Gradient-direction contraction `A x^{m-1}` on demand.
    pub fn contract_gradient(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.dimension {
            return Err(Error::Domain(format!(
                "contraction vector has length {}, tensor dimension is {}",
                x.len(),
                self.dimension
            )));
        }
        let mut out = vec![T::zero(); self.dimension];
        for idx in sorted_tuples(self.dimension, self.order - 1) {
            let sum: usize = idx.iter().sum();
            let weight: T = scalar_from_count(permutation_count(&idx));
            let mut term = weight;
            for &i in &idx {
                term = term * x[i].clone();
            }
            for (i, slot) in out.iter_mut().enumerate() {
                *slot = slot.clone() + self.generator.get(sum + i)?.clone() * term.clone();
            }
        }
        Ok(out)
    }
}

/// A weighted symmetric rank-one term `w * u^{(x)m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneTerm<T> {
    pub vector: Vec<T>,
    pub weight: T,
}

impl<T: Scalar> RankOneTerm<T> {
    pub fn new(vector: Vec<T>, weight: T) -> Self {
        Self { vector, weight }
    }

    pub fn from_vector(vector: Vec<T>) -> Self {
        Self {
            vector,
            weight: T::one(),
        }
    }

    /// The moment-curve vector `u(t) = (1, t, t^2, ..., t^{n-1})`.
    pub fn moment_curve(t: T, dimension: usize, weight: T) -> Self {
        let mut vector = Vec::with_capacity(dimension);
        let mut power = T::one();
        for _ in 0..dimension {
            vector.push(power.clone());
            power = power * t.clone();
        }
        Self { vector, weight }
    }
}

/// Entrywise sum of weighted rank-one powers `sum_k w_k u_k^{(x)m}`.
pub fn rank_one_sum<T: Scalar>(
    terms: &[RankOneTerm<T>],
    order: usize,
    dimension: usize,
) -> Result<SymmetricTensor<T>> {
    for term in terms {
        if term.vector.len() != dimension {
            return Err(Error::Domain(format!(
                "rank-one vector has length {}, tensor dimension is {dimension}",
                term.vector.len()
            )));
        }
    }
    SymmetricTensor::from_fn(order, dimension, |idx| {
        let mut acc = T::zero();
        for term in terms {
            let mut product = term.weight.clone();
            for &i in idx {
                product = product * term.vector[i].clone();
            }
            acc = acc + product;
        }
        acc
    })
}

/// Frequency rule: the entry at a sorted tuple is `b_j` where `j_k` counts
/// occurrences of `k` among the indices (index `0` absorbs the rest).
fn frequency_multi_index(idx: &[usize], dimension: usize) -> MultiIndex {
    let mut freq = vec![0usize; dimension - 1];
    for &i in idx {
        if i > 0 {
            freq[i - 1] += 1;
        }
    }
    MultiIndex::new(dimension, freq).expect("frequency vector has n-1 entries")
}

/// Moment tensor of a sequence: order-`m` symmetric tensor whose entries are
/// sequence values through the frequency rule.
pub fn moment_tensor_from_sequence<T: Scalar>(
    sequence: &MultidimensionalSequence<T>,
    order: usize,
) -> Result<SymmetricTensor<T>> {
    if order < 1 {
        return Err(Error::Domain("tensor order must be >= 1".into()));
    }
    let n = sequence.dimension();
    SymmetricTensor::try_from_fn(order, n, |idx| {
        sequence.value(&frequency_multi_index(idx, n))
    })
}

/// Direct evaluation of the homogeneous polynomial: sum over multi-indices
/// of `b_j * multinomial * x_1^{j_1}...x_{n-1}^{j_{n-1}} x_0^{m-|j|}`.
pub fn polynomial_eval_direct<T: Scalar>(
    sequence: &MultidimensionalSequence<T>,
    order: usize,
    x: &[T],
) -> Result<T> {
    let n = sequence.dimension();
    if x.len() != n {
        return Err(Error::Domain(format!(
            "evaluation point has length {}, need {n}",
            x.len()
        )));
    }
    let mut acc = T::zero();
    for j in multi_indices_up_to(n, order) {
        let coefficient: T = scalar_from_count(multinomial_coefficient(order, &j)?);
        let mut term = sequence.value(&j)? * coefficient;
        for (k, &e) in j.entries().iter().enumerate() {
            for _ in 0..e {
                term = term * x[k + 1].clone();
            }
        }
        for _ in 0..order - j.total_degree() {
            term = term * x[0].clone();
        }
        acc = acc + term;
    }
    Ok(acc)
}

/// Evaluation through the moment tensor: build the order-`m` tensor and
/// contract it `m` times against `x`. Agrees with
/// [`polynomial_eval_direct`] (exactly in exact mode).
pub fn polynomial_eval_contraction<T: Scalar>(
    sequence: &MultidimensionalSequence<T>,
    order: usize,
    x: &[T],
) -> Result<T> {
    moment_tensor_from_sequence(sequence, order)?.contract_scalar(x)
}
