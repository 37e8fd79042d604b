//! Independent verification of the conversions.
//!
//! [`sampling`] recovers any representation from raw signal records without
//! going through the transform matrix. [`closed_form`] holds a few textbook
//! formulas. [`printed`] keeps the published table as data, and [`verify`]
//! runs all of them against [`crate::transform`].

pub mod closed_form;
pub mod printed;
pub mod sampling;
pub mod verify;

pub use closed_form::{closed_form_convert, CLOSED_FORM_PAIRS};
pub use sampling::{fit_representation, sample_network, Fit, PortSignalSample};
pub use verify::{
    run_verification, verify_pair, verify_table_entry, PairReport, PrintedVerdict, VerificationPlan,
    VerificationReport,
};
