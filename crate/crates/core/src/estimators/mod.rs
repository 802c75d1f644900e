//! Monte Carlo experiments checking sampled geometry against closed forms.
//!
//! Each estimator draws from the ensembles, accumulates batched sufficient
//! statistics through [`crate::mc::run_mc`], and returns [`EstimateRecord`]s
//! pairing the empirical mean with its closed-form target. Degenerate draws
//! (rank-deficient gradients, roots at infinity, singular signatures) are
//! measure-zero events; they are resampled and counted.

pub mod algebra_checks;
pub mod crofton;
pub mod matrix_checks;
pub mod quadric;
pub mod rice;
pub mod tube;
pub mod univariate;

pub use crate::mc::EstimateRecord;

use crate::ensembles::PolynomialEnsemble;

/// Compact parameter label for an ensemble, used in record summaries.
pub(crate) fn ensemble_label(e: &PolynomialEnsemble) -> String {
    if e.is_kostlan() {
        format!("kostlan(d={})", e.degree())
    } else {
        let betas: Vec<String> = e.betas().iter().map(|b| format!("{b:.4}")).collect();
        format!("mixture(d={}, betas=[{}])", e.degree(), betas.join(","))
    }
}

pub(crate) fn system_label(ensembles: &[PolynomialEnsemble]) -> String {
    ensembles.iter().map(ensemble_label).collect::<Vec<_>>().join(" x ")
}
