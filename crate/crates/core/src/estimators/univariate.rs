//! Mean number of real projective zeros of random invariant binary forms.
//!
//! The restriction of an invariant ensemble to a projective line is an
//! invariant binary-form law with the same parameter δ, and the expected
//! number of its real projective zeros is exactly √δ.

use crate::ensembles::PolynomialEnsemble;
use crate::error::Result;
use crate::estimators::ensemble_label;
use crate::mc::{run_mc, EstimateRecord, McSettings};
use crate::roots::count_projective_roots;

pub fn estimate_univariate_roots(
    e: &PolynomialEnsemble,
    settings: &McSettings,
) -> Result<EstimateRecord> {
    let sampler = e.binary_sampler()?;
    let outcome = run_mc(settings, 0, 1, |rng, out| {
        let coeffs = sampler.sample(rng);
        match count_projective_roots(&coeffs) {
            Some(count) => {
                out[0] = count as f64;
                true
            }
            None => false,
        }
    });
    let target = e.delta().sqrt();
    Ok(EstimateRecord::from_outcome(
        "univariate_roots",
        ensemble_label(e),
        settings.seed,
        target,
        &outcome,
        0,
    ))
}
