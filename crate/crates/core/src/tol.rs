//! Numerical tolerances shared by every module.

/// Construction invariants: normalization, Hermiticity, probability sums of
/// closed-form results.
pub const INVARIANT: f64 = 1e-12;

/// Round trips through more than one formula (reconstruction, eigensolver).
pub const ROUND_TRIP: f64 = 1e-10;

/// Caller-supplied probability distributions.
pub const PROBABILITY_SUM: f64 = 1e-9;

/// Denominators at or below this are treated as the degenerate endpoints of
/// the decomposition family.
pub const DEGENERATE: f64 = 1e-14;

/// Clamp `value` into `[0, 1]` if it overshoots by less than
/// [`INVARIANT`]; anything further out is an error.
pub fn clamp_probability(value: f64) -> crate::Result<f64> {
    if value.is_nan() || !(-INVARIANT..=1.0 + INVARIANT).contains(&value) {
        return Err(crate::Error::ProbabilityOutOfRange(value));
    }
    Ok(value.clamp(0.0, 1.0))
}

pub(crate) fn check_unit_interval(name: &'static str, value: f64) -> crate::Result<()> {
    if value.is_nan() || !(0.0..=1.0).contains(&value) {
        return Err(crate::Error::out_of_range(name, value, 0.0, 1.0));
    }
    Ok(())
}

pub(crate) fn check_priors(p1: f64, p2: f64) -> crate::Result<()> {
    check_unit_interval("p1", p1)?;
    check_unit_interval("p2", p2)?;
    if ((p1 + p2) - 1.0).abs() > PROBABILITY_SUM {
        return Err(crate::Error::InvalidProbabilities(format!(
            "p1 + p2 = {} (expected 1)",
            p1 + p2
        )));
    }
    Ok(())
}
