//! Constructive moment witnesses.
//!
//! From a PSD moment prefix, a three-term recurrence (Jacobi matrix) is
//! built by factoring the Hankel matrix; its eigendecomposition yields Gauss
//! quadrature nodes and weights, i.e. an atomic measure reproducing the
//! moments. A strong Hankel tensor then decomposes as
//! `sum_k w_k u(t_k)^{(x)m} + c e^{(x)m}` where `u(t) = (1, t, ..., t^{n-1})`
//! is the moment curve and the augmented coefficient `c` absorbs the
//! top-degree surplus (the quadrature deliberately uses moments only up to
//! degree `D - 1`, reserving `v_D`; for even `D` a full-degree rule would
//! need the unavailable moment `v_{D+1}`).

use crate::eigen::tridiagonal_eigen;
use crate::error::{Error, Result};
use crate::psd::{psd_check, strong_hankel_check, HankelMatrix, PsdMode, PsdVerdict};
use crate::scalar::Scalar;
use crate::sequence::{AtomicMeasure, GeneratingVector};
use crate::tensor::{rank_one_sum, HankelTensor, RankOneTerm, SymmetricTensor};

/// A pivot this small relative to the first pivot deflates the recurrence:
/// Dirac-type measures give exactly singular moment matrices, and float
/// noise must not fabricate spurious atoms.
pub const DEFLATION_TOL: f64 = 1e-12;

/// Default relative tolerance for decomposition verification and for
/// clamping the augmented coefficient.
pub const DEFAULT_DECOMPOSE_TOL: f64 = 1e-8;

/// QL sweep budget per recurrence row.
const SWEEPS_PER_POINT: usize = 200;

/// Three-term recurrence of the orthonormal polynomials of a measure:
/// symmetric tridiagonal with diagonal `a_0..a_{q-1}`, positive off-diagonal
/// `b_1..b_{q-1}`, plus the total mass `v_0`.
///
/// Recurrence coefficients are always floats, even when derived from exact
/// pivots (the off-diagonals are square roots of pivot ratios).
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
    mass: f64,
}

impl JacobiMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>, mass: f64) -> Result<Self> {
        if diag.is_empty() && !offdiag.is_empty() {
            return Err(Error::Domain("off-diagonal without diagonal".into()));
        }
        if !diag.is_empty() && offdiag.len() + 1 != diag.len() {
            return Err(Error::Domain(format!(
                "recurrence needs {} off-diagonal entries for {} diagonal entries, got {}",
                diag.len() - 1,
                diag.len(),
                offdiag.len()
            )));
        }
        if diag.iter().any(|v| !v.is_finite()) || offdiag.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite recurrence coefficient".into()));
        }
        if offdiag.iter().any(|&b| b <= 0.0) {
            return Err(Error::Domain(
                "off-diagonal recurrence coefficients must be positive".into(),
            ));
        }
        if !mass.is_finite() || mass < 0.0 {
            return Err(Error::Domain(format!(
                "total mass must be >= 0, got {mass}"
            )));
        }
        Ok(Self {
            diag,
            offdiag,
            mass,
        })
    }

    pub fn empty(mass: f64) -> Self {
        Self {
            diag: Vec::new(),
            offdiag: Vec::new(),
            mass,
        }
    }

    /// Number of quadrature points the recurrence carries.
    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
}

/// Builds the `q`-point recurrence from the moments `v_0..v_{2q-1}` (the
/// last moment is optional: with data only up to `v_{2q-2}` the final
/// diagonal entry is an undetermined degree of freedom and is set to `0`).
///
/// Requires `v_0..v_{2q-2}` and a PSD `H_q` (checked; a refuted check is an
/// error, a float `Indeterminate` proceeds). Rank-deficient prefixes deflate
/// to an `r`-point recurrence; a rank-0 prefix returns the empty recurrence
/// with mass `v_0`.
pub fn jacobi_from_moments<T: PsdMode>(
    v: &GeneratingVector<T>,
    q: usize,
    psd_tol: f64,
) -> Result<JacobiMatrix> {
    if q == 0 {
        return Err(Error::Domain("quadrature needs q >= 1".into()));
    }
    if v.upper_index() < 2 * q - 2 {
        return Err(Error::Length {
            needed: 2 * q - 2,
            have: v.upper_index(),
        });
    }
    let matrix = HankelMatrix::from_generating_vector(v, q)?;
    let report = psd_check(&matrix, psd_tol);
    if report.verdict == PsdVerdict::NotPsd {
        return Err(Error::Precondition(format!(
            "H_{q} is not positive semidefinite; no quadrature exists"
        )));
    }

    let available = v.upper_index().min(2 * q - 1);
    // diagonal preconditioning t -> t/s balances the moment growth so the
    // float deflation test sees O(1) pivots; rationals need none
    let scale = if T::EXACT {
        1.0
    } else {
        moment_scale(v.values(), available)
    };
    let moments: Vec<T> = if scale == 1.0 {
        v.values()[..=available].to_vec()
    } else {
        v.values()[..=available]
            .iter()
            .enumerate()
            .map(|(k, value)| T::from_f64(value.to_f64() / scale.powi(k as i32)))
            .collect()
    };
    let factor = trapezoidal_ldl(&moments, q);

    let rank = factor.pivots.len();
    if rank == 0 {
        return Ok(JacobiMatrix::empty(v.get(0)?.to_f64().max(0.0)));
    }
    let mut diag = Vec::with_capacity(rank);
    for k in 0..rank {
        let a_k = match factor.subunit(k + 1, k) {
            Some(l_next) if k == 0 => l_next.to_f64(),
            Some(l_next) => (l_next - factor.subunit(k, k - 1).expect("computed column")).to_f64(),
            // moment v_{2q-1} unavailable: the last diagonal is a free
            // parameter of the truncated problem; 0 is the symmetric choice
            None => 0.0,
        };
        diag.push(a_k * scale);
    }
    let mut offdiag = Vec::with_capacity(rank.saturating_sub(1));
    for k in 1..rank {
        let ratio = (factor.pivots[k].clone() / factor.pivots[k - 1].clone()).to_f64();
        offdiag.push(ratio.max(0.0).sqrt() * scale);
    }
    JacobiMatrix::new(diag, offdiag, v.get(0)?.to_f64().max(0.0))
}

fn moment_scale<T: Scalar>(values: &[T], upper: usize) -> f64 {
    let mut s = 1.0f64;
    for (k, v) in values.iter().enumerate().take(upper + 1).skip(1) {
        let a = v.to_f64().abs();
        if a > 0.0 {
            s = s.max(a.powf(1.0 / k as f64));
        }
    }
    s
}

/// Unit-lower trapezoidal factor of the moment matrix, truncated at
/// numerical rank.
struct MomentFactor<T> {
    /// `sub[k]` holds the strictly-below-diagonal entries of column `k`
    /// (rows `k+1 ..= row_max(k)`).
    sub: Vec<Vec<T>>,
    pivots: Vec<T>,
}

impl<T: Scalar> MomentFactor<T> {
    fn subunit(&self, row: usize, col: usize) -> Option<T> {
        if row == col {
            return Some(T::one());
        }
        if row < col {
            return Some(T::zero());
        }
        self.sub.get(col)?.get(row - col - 1).cloned()
    }
}

/// LDL' of the moment matrix `H[j][k] = v_{j+k}` in natural order, rows
/// extended to `q` so the final recurrence diagonal can be read off.
/// Natural order is essential here: pivoting would permute the polynomial
/// basis. For a PSD moment matrix a zero pivot means the measure is
/// `k`-atomic and every later pivot vanishes too, so truncating at the
/// first tiny pivot is exactly the deflation the measure calls for.
fn trapezoidal_ldl<T: Scalar>(moments: &[T], q: usize) -> MomentFactor<T> {
    let available = moments.len() - 1;
    let mut factor = MomentFactor {
        sub: Vec::with_capacity(q),
        pivots: Vec::with_capacity(q),
    };
    let mut first_pivot = 0.0f64;

    for k in 0..q {
        // d_k = H_kk - sum_i L[k][i]^2 d_i
        let mut d = moments[2 * k].clone();
        for (i, pivot) in factor.pivots.iter().enumerate() {
            let l: T = factor.subunit(k, i).expect("computed column");
            d = d - l.clone() * l * pivot.clone();
        }
        if k == 0 {
            first_pivot = d.to_f64();
        }
        let deflate = if T::EXACT {
            d <= T::zero()
        } else {
            d.to_f64() <= DEFLATION_TOL * first_pivot
        };
        if deflate {
            break;
        }
        // column k of L, rows k+1 ..= min(q, available - k)
        let row_max = q.min(available.saturating_sub(k));
        let mut column = Vec::new();
        for j in k + 1..=row_max {
            let mut num = moments[j + k].clone();
            for (i, pivot) in factor.pivots.iter().enumerate() {
                let lj = factor.subunit(j, i).expect("computed column");
                let lk = factor.subunit(k, i).expect("computed column");
                num = num - lj * lk * pivot.clone();
            }
            column.push(num / d.clone());
        }
        factor.sub.push(column);
        factor.pivots.push(d);
    }
    factor
}

/// Gauss quadrature from a recurrence: nodes are the eigenvalues of the
/// Jacobi matrix, weights `mass * (first eigenvector component)^2`. Output
/// atoms are sorted by node; zero weights are dropped and split multiple
/// nodes are merged by the measure constructor.
pub fn gauss_quadrature(jacobi: &JacobiMatrix) -> Result<AtomicMeasure<f64>> {
    let q = jacobi.order();
    if q == 0 {
        return Ok(AtomicMeasure::empty());
    }
    let eig = tridiagonal_eigen(jacobi.diag(), jacobi.offdiag(), SWEEPS_PER_POINT * q)?;
    let atoms = eig
        .values
        .iter()
        .zip(&eig.vectors)
        .map(|(&node, vector)| (node, jacobi.mass() * vector[0] * vector[0]))
        .collect();
    AtomicMeasure::new(atoms)
}

/// Power moments of an atomic measure; the independent oracle for the
/// decomposition examples.
pub fn moments_of_measure<T: Scalar>(mu: &AtomicMeasure<T>, k_max: usize) -> GeneratingVector<T> {
    mu.moments(k_max)
}

/// Sum-of-mth-powers witness for a strong Hankel tensor: atoms on the moment
/// curve plus an augmented coefficient on the top-degree slot.
#[derive(Debug, Clone, PartialEq)]
pub struct VandermondeDecomposition {
    pub atoms: AtomicMeasure<f64>,
    pub augmented: f64,
    pub order: usize,
    pub dimension: usize,
}

impl VandermondeDecomposition {
    /// Materializes `sum_k w_k u(t_k)^{(x)m} + c e^{(x)m}`.
    pub fn reconstruct(&self) -> SymmetricTensor<f64> {
        let mut terms: Vec<RankOneTerm<f64>> = self
            .atoms
            .atoms()
            .iter()
            .map(|(t, w)| RankOneTerm::moment_curve(*t, self.dimension, *w))
            .collect();
        if self.augmented != 0.0 {
            let mut e = vec![0.0; self.dimension];
            e[self.dimension - 1] = 1.0;
            terms.push(RankOneTerm::new(e, self.augmented));
        }
        rank_one_sum(&terms, self.order, self.dimension).expect("shapes agree by construction")
    }
}

/// Decomposes a strong Hankel tensor.
///
/// Checks the strong-Hankel precondition on the prefix `v_0..v_D`
/// (`D = m(n-1)`), runs quadrature on moments up to degree `D - 1`, and sets
/// the augmented coefficient `c = v_D - sum_k w_k t_k^D`. A certified
/// refutation is a precondition error; a materially negative `c` (beyond
/// `clamp_tol` relative) is a numerical failure, and tiny negatives clamp
/// to zero.
pub fn strong_hankel_decompose<T: PsdMode>(
    tensor: &HankelTensor<T>,
    psd_tol: f64,
    clamp_tol: f64,
) -> Result<VandermondeDecomposition> {
    let n = tensor.dimension();
    let m = tensor.order();
    let top_degree = tensor.max_index_sum();
    let prefix = tensor.generator().truncated(top_degree)?;

    let certificate = strong_hankel_check(&prefix, n, m, psd_tol)?;
    if certificate.is_refuted() {
        return Err(Error::Precondition(format!(
            "generating vector is not strong: H_{} is not positive semidefinite",
            certificate.p_checked
        )));
    }

    let atoms = if top_degree == 0 {
        // order-m tensor in dimension... top_degree = m(n-1) >= 1 always
        unreachable!("m >= 1 and n >= 2 force a positive top degree")
    } else {
        let q = top_degree.div_ceil(2);
        let quad_prefix = prefix.truncated(top_degree - 1)?;
        let jacobi = jacobi_from_moments(&quad_prefix, q, psd_tol)?;
        gauss_quadrature(&jacobi)?
    };

    let reproduced: f64 = atoms
        .atoms()
        .iter()
        .map(|(t, w)| w * t.powi(top_degree as i32))
        .sum();
    let v_top = prefix.get(top_degree)?.to_f64();
    let mut c = v_top - reproduced;
    if c < 0.0 {
        let scale = 1f64.max(v_top.abs()).max(reproduced.abs());
        if -c <= clamp_tol * scale {
            c = 0.0;
        } else {
            return Err(Error::NegativeCoefficient { c, scale });
        }
    }

    Ok(VandermondeDecomposition {
        atoms,
        augmented: c,
        order: m,
        dimension: n,
    })
}

/// Entrywise comparison of a tensor against a decomposition's
/// reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    pub max_abs: f64,
    /// `max_abs / max(1, largest |entry| of the source tensor)`.
    pub max_rel: f64,
    pub pass: bool,
    pub tolerance: f64,
}

/// Verifies a decomposition against the Hankel tensor it came from.
pub fn verify_decomposition<T: Scalar>(
    tensor: &HankelTensor<T>,
    decomposition: &VandermondeDecomposition,
    tol: f64,
) -> Result<ResidualReport> {
    verify_decomposition_dense(&tensor.densify(), decomposition, tol)
}

/// Verifies a decomposition against a dense symmetric tensor.
pub fn verify_decomposition_dense<T: Scalar>(
    tensor: &SymmetricTensor<T>,
    decomposition: &VandermondeDecomposition,
    tol: f64,
) -> Result<ResidualReport> {
    if tensor.order() != decomposition.order || tensor.dimension() != decomposition.dimension {
        return Err(Error::Domain(format!(
            "decomposition shape ({}, {}) does not match tensor ({}, {})",
            decomposition.order,
            decomposition.dimension,
            tensor.order(),
            tensor.dimension()
        )));
    }
    let reconstruction = decomposition.reconstruct();
    let mut max_abs = 0.0f64;
    let mut max_entry = 0.0f64;
    for (idx, value) in tensor.iter() {
        let a = value.to_f64();
        let b = *reconstruction.get(&idx).expect("same shape");
        max_abs = max_abs.max((a - b).abs());
        max_entry = max_entry.max(a.abs());
    }
    let max_rel = max_abs / 1f64.max(max_entry);
    Ok(ResidualReport {
        max_abs,
        max_rel,
        pass: max_rel <= tol,
        tolerance: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psd::DEFAULT_PSD_TOL;
    use crate::scalar::rat;
    use crate::tensor::hankel_tensor;
    use num_rational::BigRational;

    fn gvf(values: &[f64]) -> GeneratingVector<f64> {
        GeneratingVector::new(values.to_vec()).unwrap()
    }

    fn gvr(values: &[i64]) -> GeneratingVector<BigRational> {
        GeneratingVector::new(values.iter().map(|&v| rat(v)).collect()).unwrap()
    }

    #[test]
    fn jacobi_two_point_symmetric() {
        // hand orthogonalization of {1, t} under the measure with atoms
        // (-1, 1) and (+1, 1): moments (2, 0, 2, 0)
        let j = jacobi_from_moments(&gvf(&[2.0, 0.0, 2.0, 0.0]), 2, DEFAULT_PSD_TOL).unwrap();
        assert_eq!(j.diag(), &[0.0, 0.0]);
        assert_eq!(j.offdiag(), &[1.0]);
        assert_eq!(j.mass(), 2.0);

        // exact route gives the same recurrence
        let j = jacobi_from_moments(&gvr(&[2, 0, 2, 0]), 2, DEFAULT_PSD_TOL).unwrap();
        assert_eq!(j.diag(), &[0.0, 0.0]);
        assert_eq!(j.offdiag(), &[1.0]);
        assert_eq!(j.mass(), 2.0);
    }

    #[test]
    fn jacobi_dirac_at_zero_deflates() {
        let j =
            jacobi_from_moments(&gvf(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]), 3, DEFAULT_PSD_TOL).unwrap();
        assert_eq!(j.order(), 1);
        assert_eq!(j.diag(), &[0.0]);
        assert_eq!(j.mass(), 1.0);
    }

    #[test]
    fn jacobi_dirac_at_one_deflates() {
        let j = jacobi_from_moments(&gvf(&[1.0, 1.0, 1.0, 1.0]), 2, DEFAULT_PSD_TOL).unwrap();
        assert_eq!(j.order(), 1);
        assert_eq!(j.diag(), &[1.0]);
        assert_eq!(j.mass(), 1.0);
    }

    #[test]
    fn jacobi_rejects_indefinite_prefix() {
        let err = jacobi_from_moments(&gvf(&[1.0, 0.0, -1.0]), 2, DEFAULT_PSD_TOL).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn jacobi_rank_zero() {
        let j = jacobi_from_moments(&gvf(&[0.0, 0.0, 0.0]), 2, DEFAULT_PSD_TOL).unwrap();
        assert_eq!(j.order(), 0);
        assert_eq!(j.mass(), 0.0);
        let mu = gauss_quadrature(&j).unwrap();
        assert!(mu.is_empty());
    }

    #[test]
    fn gauss_two_point_symmetric() {
        let j = JacobiMatrix::new(vec![0.0, 0.0], vec![1.0], 2.0).unwrap();
        let mu = gauss_quadrature(&j).unwrap();
        assert_eq!(mu.len(), 2);
        let atoms = mu.atoms();
        assert!((atoms[0].0 + 1.0).abs() < 1e-14);
        assert!((atoms[0].1 - 1.0).abs() < 1e-14);
        assert!((atoms[1].0 - 1.0).abs() < 1e-14);
        assert!((atoms[1].1 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_single_points() {
        let j = JacobiMatrix::new(vec![1.0], vec![], 1.0).unwrap();
        let mu = gauss_quadrature(&j).unwrap();
        assert_eq!(mu.atoms(), &[(1.0, 1.0)]);

        let j = JacobiMatrix::new(vec![0.0], vec![], 3.0).unwrap();
        let mu = gauss_quadrature(&j).unwrap();
        assert_eq!(mu.atoms(), &[(0.0, 3.0)]);
    }

    #[test]
    fn decompose_constant_vector() {
        let tensor = hankel_tensor(gvf(&[1.0; 9]), 3, 4).unwrap();
        let d = strong_hankel_decompose(&tensor, DEFAULT_PSD_TOL, DEFAULT_DECOMPOSE_TOL).unwrap();
        assert_eq!(d.atoms.len(), 1);
        let (t, w) = d.atoms.atoms()[0];
        assert!((t - 1.0).abs() < 1e-12);
        assert!((w - 1.0).abs() < 1e-12);
        assert_eq!(d.augmented, 0.0);
        let report = verify_decomposition(&tensor, &d, DEFAULT_DECOMPOSE_TOL).unwrap();
        assert!(report.pass);
        assert!(report.max_abs < 1e-12);
    }

    #[test]
    fn decompose_top_degree_only() {
        // v_2 = 1, everything else 0: tensor is the single entry a_{11}
        let tensor = hankel_tensor(gvf(&[0.0, 0.0, 1.0]), 2, 2).unwrap();
        let d = strong_hankel_decompose(&tensor, DEFAULT_PSD_TOL, DEFAULT_DECOMPOSE_TOL).unwrap();
        assert!(d.atoms.is_empty());
        assert_eq!(d.augmented, 1.0);
        let report = verify_decomposition(&tensor, &d, DEFAULT_DECOMPOSE_TOL).unwrap();
        assert!(report.pass);
        assert_eq!(report.max_abs, 0.0);
    }

    #[test]
    fn decompose_two_atoms() {
        let tensor =
            hankel_tensor(gvf(&[2.0, 0.0, 2.0, 0.0, 2.0, 0.0, 2.0, 0.0, 2.0]), 3, 4).unwrap();
        let d = strong_hankel_decompose(&tensor, DEFAULT_PSD_TOL, DEFAULT_DECOMPOSE_TOL).unwrap();
        assert_eq!(d.atoms.len(), 2);
        let atoms = d.atoms.atoms();
        assert!((atoms[0].0 + 1.0).abs() < 1e-10);
        assert!((atoms[1].0 - 1.0).abs() < 1e-10);
        assert!((atoms[0].1 - 1.0).abs() < 1e-10);
        assert!((atoms[1].1 - 1.0).abs() < 1e-10);
        assert!(d.augmented.abs() < 1e-10);
        let report = verify_decomposition(&tensor, &d, 1e-10).unwrap();
        assert!(report.pass, "residual {report:?}");
    }

    #[test]
    fn decompose_refuses_non_strong_vector() {
        let tensor = hankel_tensor(gvf(&[1.0, 0.0, -1.0, 0.0, 1.0]), 3, 2).unwrap();
        let err =
            strong_hankel_decompose(&tensor, DEFAULT_PSD_TOL, DEFAULT_DECOMPOSE_TOL).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn decompose_negative_top_moment_fails() {
        // H_2 = [[2,1],[1,1]] is PD, but v_3 = -5 cannot be matched by any
        // nonnegative augmented coefficient
        let tensor = hankel_tensor(gvf(&[2.0, 1.0, 1.0, -5.0]), 2, 3).unwrap();
        let err =
            strong_hankel_decompose(&tensor, DEFAULT_PSD_TOL, DEFAULT_DECOMPOSE_TOL).unwrap_err();
        assert!(matches!(err, Error::NegativeCoefficient { .. }));
    }

    #[test]
    fn decompose_odd_order() {
        // parity plays no role in the construction: the atoms fit any m,
        // and the top class is still a single entry
        let mu = AtomicMeasure::new(vec![
            (0.809016994374947_f64, 1.0),
            (-0.3090169943749474, 1.0),
        ])
        .unwrap();
        let v = moments_of_measure(&mu, 3);
        let tensor = hankel_tensor(v, 2, 3).unwrap();
        let d = strong_hankel_decompose(&tensor, DEFAULT_PSD_TOL, DEFAULT_DECOMPOSE_TOL).unwrap();
        let report = verify_decomposition(&tensor, &d, 1e-9).unwrap();
        assert!(report.pass, "{report:?}");
        assert!(d.augmented >= 0.0);

        // odd order with a positive surplus at the top
        let tensor = hankel_tensor(gvf(&[2.0, 1.0, 1.0, 1.0]), 2, 3).unwrap();
        let d = strong_hankel_decompose(&tensor, DEFAULT_PSD_TOL, DEFAULT_DECOMPOSE_TOL).unwrap();
        assert!((d.augmented - 0.25).abs() < 1e-10, "c = {}", d.augmented);
        let report = verify_decomposition(&tensor, &d, 1e-9).unwrap();
        assert!(report.pass, "{report:?}");
    }

    #[test]
    fn verify_detects_perturbed_weight() {
        let tensor = hankel_tensor(gvf(&[1.0; 9]), 3, 4).unwrap();
        let d = strong_hankel_decompose(&tensor, DEFAULT_PSD_TOL, DEFAULT_DECOMPOSE_TOL).unwrap();
        let (t, w) = d.atoms.atoms()[0];
        let perturbed = VandermondeDecomposition {
            atoms: AtomicMeasure::new(vec![(t, w + 0.1)]).unwrap(),
            ..d
        };
        let report = verify_decomposition(&tensor, &perturbed, DEFAULT_DECOMPOSE_TOL).unwrap();
        assert!(!report.pass);
        assert!((report.max_abs - 0.1).abs() < 1e-9);
    }

    #[test]
    fn quadrature_reproduces_moments() {
        // mixed-sign three-atom measure
        let mu = AtomicMeasure::new(vec![(-1.5, 0.7), (0.25, 1.2), (1.0, 0.4)]).unwrap();
        let v = moments_of_measure(&mu, 5);
        let j = jacobi_from_moments(&v, 3, DEFAULT_PSD_TOL).unwrap();
        let recovered = gauss_quadrature(&j).unwrap();
        let w = moments_of_measure(&recovered, 5);
        for (a, b) in v.values().iter().zip(w.values()) {
            assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{a} vs {b}");
        }
        // and the atoms themselves come back
        assert_eq!(recovered.len(), 3);
        for ((t0, w0), (t1, w1)) in mu.atoms().iter().zip(recovered.atoms()) {
            assert!((t0 - t1).abs() < 1e-9);
            assert!((w0 - w1).abs() < 1e-9);
        }
    }

    #[test]
    fn jacobi_matrix_validation() {
        assert!(JacobiMatrix::new(vec![0.0, 0.0], vec![0.0], 1.0).is_err());
        assert!(JacobiMatrix::new(vec![0.0], vec![1.0], 1.0).is_err());
        assert!(JacobiMatrix::new(vec![0.0], vec![], -1.0).is_err());
        assert!(JacobiMatrix::new(vec![], vec![], 2.0).is_ok());
    }
}
