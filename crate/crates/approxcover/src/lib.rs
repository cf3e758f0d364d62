//! Exact and asymptotic covering numbers for finite sets of integers.
//!
//! A finite set `A` is covered `r`-fold by translates when the r-fold
//! iterated sumset `rA` fits inside `A + X` for some finite offset set
//! `X`. This crate computes the least such `|X|` exactly (an exact
//! set-cover search), evaluates its closed-form limit as `A` is
//! replaced by high iterates `hA`, decides whether those iterates
//! eventually become arithmetic progressions, and rechecks all of the
//! above by brute force on enumerated families.
//!
//! Quick tour:
//!
//! ```
//! use approxcover::{covering_number, asymptotic_covering_number, IntSet};
//!
//! let a: IntSet = "0, 1, 3".parse().unwrap();
//! let exact = covering_number(&a, 2).unwrap();
//! assert_eq!(exact.covering_number, 3);
//! // High iterates of {0, 1, 3} cover more easily, but the limit is
//! // r + 1 because the two endpoint gaps differ.
//! assert_eq!(asymptotic_covering_number(&a, 2).unwrap(), 3);
//! ```

pub mod asymptotic;
pub mod covering;
pub mod error;
pub mod exec;
pub mod intset;
pub mod sumsets;
pub mod verify;

pub use asymptotic::{
    asymptotic_covering_number, endpoint_gap_condition, is_asymptotic_ap, is_asymptotic_ap_with,
    normalize, stabilization_check, structure_constants, AsymptoticForm, AsymptoticReport,
    NormalForm, StabilizationOutcome, StabilizationRow, StructureConstants,
};
pub use covering::{
    ap_covering_number, covering_number, covering_number_with, is_approximate_group, lower_bound,
    CoverInstance, CoverResult, DEFAULT_NODE_BUDGET,
};
pub use error::{Error, Result};
pub use exec::{configure_threads, map_ordered, Parallelism};
pub use intset::IntSet;
pub use sumsets::{detect_ap, hfold, hfold_size_bound, hfold_upto, ApShape};
pub use verify::{
    binomial, normal_form_sets, run_suite, Bounds, BoundsOverride, Failure, Suite,
    VerificationSummary, VerifyConfig,
};
