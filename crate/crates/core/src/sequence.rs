//! Multidimensional sequences, the Hankel-sequence condition, and the
//! collapse to a one-dimensional generating sequence.
//!
//! A multidimensional sequence assigns a value `b_j` to every multi-index
//! `j = (j_1, ..., j_{n-1})`. The sequence is *Hankel* when `b_j` depends
//! only on the weighted degree `j_1 + 2 j_2 + ... + (n-1) j_{n-1}`; such a
//! sequence collapses to a one-dimensional [`GeneratingVector`], and an
//! atomic measure on the real line witnesses it through the moment curve
//! `t -> (t, t^2, ..., t^{n-1})`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Float-mode tolerance for the equal-weighted-degree equality checks.
/// Inputs are data, not computation results, so the tolerance is tight.
pub const SEQUENCE_EQ_TOL: f64 = 1e-12;

/// Relative node separation below which quadrature atoms are merged.
pub const NODE_MERGE_TOL: f64 = 1e-8;

/// A multi-index `(j_1, ..., j_{n-1})` in ambient dimension `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    dimension: usize,
    entries: Vec<usize>,
}

impl MultiIndex {
    pub fn new(dimension: usize, entries: Vec<usize>) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::Domain(format!(
                "ambient dimension must be >= 2, got {dimension}"
            )));
        }
        if entries.len() != dimension - 1 {
            return Err(Error::Domain(format!(
                "multi-index needs {} entries for dimension {}, got {}",
                dimension - 1,
                dimension,
                entries.len()
            )));
        }
        Ok(Self { dimension, entries })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// The weighted degree `j_1 + 2 j_2 + ... + (n-1) j_{n-1}`.
    pub fn weighted_degree(&self) -> usize {
        self.entries
            .iter()
            .enumerate()
            .map(|(k, &j)| (k + 1) * j)
            .sum()
    }

    /// The total degree `j_1 + ... + j_{n-1}`.
    pub fn total_degree(&self) -> usize {
        self.entries.iter().sum()
    }
}

/// All multi-indices of ambient dimension `n` with total degree exactly `d`,
/// in lexicographic order.
fn multi_indices_of_degree(n: usize, d: usize) -> Vec<MultiIndex> {
    let coords = n - 1;
    let mut out = Vec::new();
    let mut current = vec![0usize; coords];
    fn rec(current: &mut Vec<usize>, pos: usize, left: usize, n: usize, out: &mut Vec<MultiIndex>) {
        if pos + 1 == current.len() {
            current[pos] = left;
            out.push(MultiIndex::new(n, current.clone()).expect("valid by construction"));
            return;
        }
        for v in 0..=left {
            current[pos] = v;
            rec(current, pos + 1, left - v, n, out);
        }
    }
    if coords == 0 {
        return out;
    }
    rec(&mut current, 0, d, n, &mut out);
    out
}

/// All multi-indices with total degree `<= max_degree`, graded by total
/// degree then lexicographic. This is the canonical enumeration order, so
/// table checks do not depend on insertion order.
pub fn multi_indices_up_to(n: usize, max_degree: usize) -> Vec<MultiIndex> {
    (0..=max_degree)
        .flat_map(|d| multi_indices_of_degree(n, d))
        .collect()
}

/// All multi-indices with weighted degree exactly `k` (total degree is then
/// automatically `<= k`).
pub fn multi_indices_of_weighted_degree(n: usize, k: usize) -> Vec<MultiIndex> {
    multi_indices_up_to(n, k)
        .into_iter()
        .filter(|j| j.weighted_degree() == k)
        .collect()
}

/// The one-dimensional sequence `v_0, ..., v_L` a Hankel sequence collapses
/// to; also the generator of Hankel tensors and Hankel matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratingVector<T> {
    values: Vec<T>,
}

impl<T: Scalar> GeneratingVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain(
                "generating vector must contain at least v_0".into(),
            ));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite_value()) {
            return Err(Error::Domain(format!(
                "generating vector contains non-finite value {bad}"
            )));
        }
        Ok(Self { values })
    }

    /// Largest available index `L`.
    pub fn upper_index(&self) -> usize {
        self.values.len() - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, k: usize) -> Result<&T> {
        self.values.get(k).ok_or_else(|| {
            Error::Coverage(format!(
                "generating vector covers indices 0..={}, asked for {k}",
                self.upper_index()
            ))
        })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// The prefix `v_0..=v_upper`.
    pub fn truncated(&self, upper: usize) -> Result<Self> {
        if upper > self.upper_index() {
            return Err(Error::Coverage(format!(
                "cannot truncate to 0..={upper}, vector covers 0..={}",
                self.upper_index()
            )));
        }
        Ok(Self {
            values: self.values[..=upper].to_vec(),
        })
    }

    pub fn to_f64(&self) -> GeneratingVector<f64> {
        GeneratingVector {
            values: self.values.iter().map(Scalar::to_f64).collect(),
        }
    }
}

/// The Hilbert sequence `1, 1/2, 1/3, ...` truncated at `v_upper`; the
/// standard example of a generating vector whose Hankel matrices are all
/// positive definite.
pub fn hilbert_vector(upper: usize) -> GeneratingVector<BigRational> {
    let values = (0..=upper)
        .map(|k| BigRational::new(BigInt::from(1), BigInt::from(k as i64 + 1)))
        .collect();
    GeneratingVector::new(values).expect("hilbert values are finite")
}

#[derive(Debug, Clone)]
enum Backing<T> {
    Table {
        max_degree: usize,
        entries: BTreeMap<Vec<usize>, T>,
    },
    HankelRule {
        generator: GeneratingVector<T>,
    },
}

/// A multidimensional sequence, backed either by an explicit finite table
/// with a declared coverage degree or by a Hankel rule over a generating
/// vector (which satisfies the Hankel condition by construction).
#[derive(Debug, Clone)]
pub struct MultidimensionalSequence<T> {
    dimension: usize,
    backing: Backing<T>,
}

/// Outcome of the Hankel-condition check: the first violating pair, if any,
/// in canonical (representative, offender) order.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelSequenceCheck {
    pub holds: bool,
    pub violation: Option<(MultiIndex, MultiIndex)>,
}

impl<T: Scalar> MultidimensionalSequence<T> {
    /// Explicit table with declared total-degree coverage.
    pub fn from_table(
        dimension: usize,
        max_degree: usize,
        pairs: impl IntoIterator<Item = (MultiIndex, T)>,
    ) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::Domain(format!(
                "ambient dimension must be >= 2, got {dimension}"
            )));
        }
        let mut entries = BTreeMap::new();
        for (j, value) in pairs {
            if j.dimension() != dimension {
                return Err(Error::Domain(format!(
                    "table entry has dimension {}, sequence has {}",
                    j.dimension(),
                    dimension
                )));
            }
            if !value.is_finite_value() {
                return Err(Error::Domain(format!("non-finite table value {value}")));
            }
            entries.insert(j.entries().to_vec(), value);
        }
        Ok(Self {
            dimension,
            backing: Backing::Table {
                max_degree,
                entries,
            },
        })
    }

    /// Rule-backed sequence `b_j = v_{weighted_degree(j)}`.
    pub fn from_generating_vector(
        generator: GeneratingVector<T>,
        dimension: usize,
    ) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::Domain(format!(
                "ambient dimension must be >= 2, got {dimension}"
            )));
        }
        Ok(Self {
            dimension,
            backing: Backing::HankelRule { generator },
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Declared coverage: max total degree for tables, generator length for
    /// rule-backed sequences (weighted degree reachable as total degree).
    pub fn coverage_degree(&self) -> usize {
        match &self.backing {
            Backing::Table { max_degree, .. } => *max_degree,
            Backing::HankelRule { generator } => generator.upper_index(),
        }
    }

    pub fn is_rule_backed(&self) -> bool {
        matches!(self.backing, Backing::HankelRule { .. })
    }

    /// The table value `b_j`.
    pub fn value(&self, j: &MultiIndex) -> Result<T> {
        if j.dimension() != self.dimension {
            return Err(Error::Domain(format!(
                "multi-index dimension {} does not match sequence dimension {}",
                j.dimension(),
                self.dimension
            )));
        }
        match &self.backing {
            Backing::Table {
                max_degree,
                entries,
            } => {
                if j.total_degree() > *max_degree {
                    return Err(Error::Coverage(format!(
                        "table covers total degree <= {max_degree}, asked for degree {}",
                        j.total_degree()
                    )));
                }
                entries.get(j.entries()).cloned().ok_or_else(|| {
                    Error::Coverage(format!("table lacks entry for {:?}", j.entries()))
                })
            }
            Backing::HankelRule { generator } => {
                let k = j.weighted_degree();
                generator.get(k).cloned().map_err(|_| {
                    Error::Coverage(format!(
                        "hankel rule covers weighted degree <= {}, asked for {k}",
                        generator.upper_index()
                    ))
                })
            }
        }
    }

    /// Checks the Hankel condition on all multi-indices with total degree
    /// `<= max_total_degree`: equal weighted degrees must carry equal values.
    /// Rule-backed sequences satisfy the condition by construction.
    pub fn is_hankel_sequence(&self, max_total_degree: usize) -> Result<HankelSequenceCheck> {
        if self.is_rule_backed() {
            return Ok(HankelSequenceCheck {
                holds: true,
                violation: None,
            });
        }
        // canonical graded-lex scan; first member of each weighted-degree
        // class is the representative
        let mut representatives: BTreeMap<usize, (MultiIndex, T)> = BTreeMap::new();
        for j in multi_indices_up_to(self.dimension, max_total_degree) {
            let value = self.value(&j)?;
            let degree = j.weighted_degree();
            match representatives.get(&degree) {
                None => {
                    representatives.insert(degree, (j, value));
                }
                Some((rep, rep_value)) => {
                    if !rep_value.eq_within(&value, SEQUENCE_EQ_TOL) {
                        return Ok(HankelSequenceCheck {
                            holds: false,
                            violation: Some((rep.clone(), j)),
                        });
                    }
                }
            }
        }
        Ok(HankelSequenceCheck {
            holds: true,
            violation: None,
        })
    }

    /// Collapses a Hankel sequence to its generating vector `v_0..=v_L`,
    /// reading `v_k` off any representative of weighted degree `k` and
    /// re-checking representative consistency defensively.
    pub fn generating_vector(&self, upper: usize) -> Result<GeneratingVector<T>> {
        match &self.backing {
            Backing::HankelRule { generator } => generator.truncated(upper),
            Backing::Table { max_degree, .. } => {
                let mut values = Vec::with_capacity(upper + 1);
                for k in 0..=upper {
                    if k > *max_degree {
                        return Err(Error::Coverage(format!(
                            "weighted degree {k} needs representative of total degree {k}, \
                             table covers <= {max_degree}"
                        )));
                    }
                    let mut chosen: Option<(MultiIndex, T)> = None;
                    for j in multi_indices_of_weighted_degree(self.dimension, k) {
                        if j.total_degree() > *max_degree {
                            continue;
                        }
                        let value = self.value(&j)?;
                        match &chosen {
                            None => chosen = Some((j, value)),
                            Some((_, first)) => {
                                if !first.eq_within(&value, SEQUENCE_EQ_TOL) {
                                    return Err(Error::Inconsistent {
                                        degree: k,
                                        left: first.to_string(),
                                        right: value.to_string(),
                                    });
                                }
                            }
                        }
                    }
                    let (_, value) = chosen.ok_or_else(|| {
                        Error::Coverage(format!(
                            "no covered representative for weighted degree {k}"
                        ))
                    })?;
                    values.push(value);
                }
                GeneratingVector::new(values)
            }
        }
    }
}

/// A finitely supported nonnegative measure on the real line: atoms
/// `(t_k, w_k)` with `w_k > 0`, sorted by node.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure<T> {
    atoms: Vec<(T, T)>,
}

impl<T: Scalar> AtomicMeasure<T> {
    /// Drops zero-weight atoms, sorts by node, and merges nodes closer than
    /// `NODE_MERGE_TOL * (1 + max|t|)` (exactly equal nodes in exact mode).
    /// Negative weights are rejected.
    pub fn new(atoms: Vec<(T, T)>) -> Result<Self> {
        let zero = T::zero();
        for (t, w) in &atoms {
            if !t.is_finite_value() || !w.is_finite_value() {
                return Err(Error::Domain(format!("non-finite atom ({t}, {w})")));
            }
            if *w < zero {
                return Err(Error::Domain(format!("negative atom weight {w}")));
            }
        }
        let mut atoms: Vec<(T, T)> = atoms.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite nodes are comparable"));

        let merge_tol = if T::EXACT {
            0.0
        } else {
            let max_abs = atoms
                .iter()
                .map(|(t, _)| t.to_f64().abs())
                .fold(0.0f64, f64::max);
            NODE_MERGE_TOL * (1.0 + max_abs)
        };

        let mut merged: Vec<(T, T)> = Vec::with_capacity(atoms.len());
        for (t, w) in atoms {
            match merged.last_mut() {
                Some((last_t, last_w))
                    if (T::EXACT && *last_t == t)
                        || (!T::EXACT && (t.to_f64() - last_t.to_f64()) <= merge_tol) =>
                {
                    // weighted-average node keeps a split multiple node centered
                    let total = last_w.clone() + w.clone();
                    *last_t = (last_t.clone() * last_w.clone() + t * w.clone()) / total.clone();
                    *last_w = total;
                }
                _ => merged.push((t, w)),
            }
        }
        Ok(Self { atoms: merged })
    }

    pub fn empty() -> Self {
        Self { atoms: Vec::new() }
    }

    pub fn atoms(&self) -> &[(T, T)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> T {
        self.atoms
            .iter()
            .map(|(_, w)| w.clone())
            .fold(T::zero(), |a, b| a + b)
    }

    /// Power moments `v_k = sum_k w t^k` for `k = 0..=k_max`. This is the
    /// independent oracle used to validate decompositions.
    pub fn moments(&self, k_max: usize) -> GeneratingVector<T> {
        let mut values = vec![T::zero(); k_max + 1];
        for (t, w) in &self.atoms {
            let mut power = T::one();
            for value in values.iter_mut() {
                *value = value.clone() + w.clone() * power.clone();
                power = power * t.clone();
            }
        }
        GeneratingVector::new(values).expect("moment values are finite")
    }

    /// Pushes the atoms through the moment curve `t -> (t, t^2, ..., t^{n-1})`,
    /// producing the discrete measure on `R^{n-1}` that witnesses the
    /// multidimensional moment property.
    pub fn pushforward(&self, dimension: usize) -> Result<Vec<(Vec<T>, T)>> {
        if dimension < 2 {
            return Err(Error::Domain(format!(
                "ambient dimension must be >= 2, got {dimension}"
            )));
        }
        Ok(self
            .atoms
            .iter()
            .map(|(t, w)| {
                let mut point = Vec::with_capacity(dimension - 1);
                let mut power = t.clone();
                for _ in 0..dimension - 1 {
                    point.push(power.clone());
                    power = power * t.clone();
                }
                (point, w.clone())
            })
            .collect())
    }
}

/// Mixed moment `sum_atoms w * prod_k p_k^{j_k}` of a discrete measure on
/// `R^{n-1}` (as produced by [`AtomicMeasure::pushforward`]).
pub fn multidim_moment<T: Scalar>(atoms: &[(Vec<T>, T)], j: &MultiIndex) -> Result<T> {
    let coords = j.dimension() - 1;
    let mut total = T::zero();
    for (point, weight) in atoms {
        if point.len() != coords {
            return Err(Error::Domain(format!(
                "atom has {} coordinates, multi-index expects {coords}",
                point.len()
            )));
        }
        let mut term = weight.clone();
        for (p, &e) in point.iter().zip(j.entries()) {
            for _ in 0..e {
                term = term * p.clone();
            }
        }
        total = total + term;
    }
    Ok(total)
}
