//! Hankel moment kit.
//!
//! Decides, certifies, and constructively witnesses the moment property for
//! Hankel multidimensional sequences:
//!
//! - [`sequence`] — multidimensional sequences, the Hankel (weighted-degree)
//!   condition, generating vectors, atomic measures and their moments;
//! - [`tensor`] — dense symmetric tensors in the sorted-multi-index layout,
//!   implicit Hankel tensors, moment-tensor construction, rank-one sums, and
//!   homogeneous polynomial evaluation;
//! - [`psd`] — the Hankel matrix family `H_p`, positive-semidefinite
//!   certification (exact rational factorization or float eigensolve), and
//!   the strong-Hankel / truncated-moment-sequence checks;
//! - [`decomposition`] — Gauss quadrature from moments (Jacobi matrix route)
//!   and the sum-of-mth-powers decomposition of a strong Hankel tensor with
//!   an augmented top-degree atom;
//! - [`explorer`] — search harness over truncated generating vectors with a
//!   heuristic rank-one fitter (numerical, one-sided evidence only);
//! - [`json`] — the JSON document schemas shared with the CLI.
//!
//! Everything is generic over [`scalar::Scalar`], instantiated with `f64`
//! (float mode) or `num_rational::BigRational` (exact mode). All types are
//! immutable after construction and all operations are pure, so values can
//! be shared freely across threads.

pub mod combin;
pub mod decomposition;
pub mod error;
pub mod explorer;
pub mod json;
pub mod psd;
pub mod scalar;
pub mod sequence;
pub mod tensor;

mod eigen;

pub use decomposition::{
    gauss_quadrature, jacobi_from_moments, moments_of_measure, strong_hankel_decompose,
    verify_decomposition, JacobiMatrix, ResidualReport, VandermondeDecomposition,
};
pub use error::{Error, Result};
pub use explorer::{
    cd_fit, search_counterexample, truncated_vectors, CandidateOutcome, FitOptions, FitResult,
    SearchReport, TruncatedFamily, ValueSource,
};
pub use psd::{
    hankel_matrix, moment_sequence_check, psd_check, strong_hankel_check, HankelMatrix,
    MomentSequenceReport, PsdMode, PsdReport, PsdVerdict, StrongHankelCertificate,
};
pub use scalar::{parse_rational, rational_from_f64, Scalar};
pub use sequence::{
    hilbert_vector, multidim_moment, AtomicMeasure, GeneratingVector, HankelSequenceCheck,
    MultiIndex, MultidimensionalSequence,
};
pub use tensor::{
    hankel_tensor, moment_tensor_from_sequence, multinomial_coefficient,
    polynomial_eval_contraction, polynomial_eval_direct, rank_one_sum, HankelTensor, RankOneTerm,
    SymmetricTensor,
};

#[cfg(test)]
mod tests {
    fn shareable<T: Send + Sync>() {}

    #[test]
    fn values_transfer_between_threads() {
        shareable::<crate::GeneratingVector<f64>>();
        shareable::<crate::GeneratingVector<num_rational::BigRational>>();
        shareable::<crate::MultidimensionalSequence<num_rational::BigRational>>();
        shareable::<crate::SymmetricTensor<f64>>();
        shareable::<crate::HankelTensor<num_rational::BigRational>>();
        shareable::<crate::AtomicMeasure<f64>>();
        shareable::<crate::PsdReport<num_rational::BigRational>>();
        shareable::<crate::StrongHankelCertificate<f64>>();
        shareable::<crate::VandermondeDecomposition>();
        shareable::<crate::FitResult>();
        shareable::<crate::SearchReport>();
    }
}
