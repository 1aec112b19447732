//! Exact checks for total positivity (TP_k) and total non-negativity (TN_k)
//! of matrices, interval hulls and Pólya frequency sequences, with
//! independently re-checkable certificates.
//!
//! All user-facing indices are 1-based.

pub mod cli;
pub mod error;
pub mod generators;
pub mod interval;
pub mod io;
pub mod matrix;
pub mod minors;
pub mod polya;
pub mod positivity;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use interval::{hull_is_tn_k, hull_is_tp_k, HullVerdict, IntervalHull, TestMatrix};
pub use matrix::{AltVector, IndexPair, Matrix, MinorId, Window};
pub use minors::{adjugate, det, z_vector, ZVector};
pub use polya::{is_pf_k_window, pf_snr_check, PfMode, SeqWindow};
pub use positivity::{
    is_p_matrix, is_tn_k_bruteforce, is_tp_k_bruteforce, is_tp_k_contiguous, tn_certificate, tp_certificate,
    validate_certificate, Certificate, Location, Property, Stats, Verdict,
};
pub use scalar::{Exact, Mode, Scalar, Sign};
