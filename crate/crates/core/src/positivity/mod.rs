//! TP_k / TN_k decision procedures and their certificates.

mod bench;
mod certificate;
mod decide;
mod snr;

pub use bench::{bench_tp, BenchReport, MethodCost};
pub use certificate::{sign_products, validate_certificate, Certificate, Location, Property, Stats, Verdict};
pub use decide::{
    is_p_matrix, is_tn_k_bruteforce, is_tn_k_bruteforce_with, is_tp_k_bruteforce, is_tp_k_contiguous, tn_certificate,
    tn_certificate_with, tp_certificate, EnumerationBudget, DEFAULT_SUBMATRIX_CAP,
};
pub use snr::{
    random_alternating, random_nonzero, random_small_vector, sampled_snr_falsify, snr_nonstrict_at, snr_strict_at,
    variation_check, SamplingOptions, SnrMode, SnrOutcome, VariationOutcome,
};

pub(crate) use certificate::{check_kernel, check_minor_value, check_sign_reversal, check_weak_reversal};
