//! The exponential expenditure distribution and its closed-form quantities.
//!
//! Visitation probability falls off exponentially with travel cost:
//! a resident spends `w` dollars or less with probability `1 - e^(-λw)`,
//! and the fitted level `A` times the survival curve gives the visitation
//! probability at a given cost. `A / λ` is the expected travel expenditure
//! per member of the general population.

use crate::error::{Error, Result};
use crate::ingestion::CostSchedule;

/// Fitted exponential demand model.
///
/// Carries both the per-mile rate (the scale the regression runs on) and
/// the per-dollar rate (the scale valuation runs on). The two are linked
/// through an effective cost per mile; storing both keeps the unit
/// conversion explicit and testable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentialDemand {
    prefactor_a: f64,
    rate_per_dollar: f64,
    rate_per_mile: f64,
}

impl ExponentialDemand {
    /// Build from a distance-scale fit plus the cost per mile that
    /// converts distance into dollars.
    pub fn from_mile_rate(prefactor_a: f64, rate_per_mile: f64, cost_per_mile: f64) -> Result<Self> {
        if cost_per_mile <= 0.0 || !cost_per_mile.is_finite() {
            return Err(Error::domain(format!(
                "cost per mile must be positive, got {cost_per_mile}"
            )));
        }
        Self::validate(prefactor_a, rate_per_mile / cost_per_mile, rate_per_mile)
    }

    /// Build from published dollar-scale constants plus the cost per mile.
    pub fn from_dollar_rate(
        prefactor_a: f64,
        rate_per_dollar: f64,
        cost_per_mile: f64,
    ) -> Result<Self> {
        if cost_per_mile <= 0.0 || !cost_per_mile.is_finite() {
            return Err(Error::domain(format!(
                "cost per mile must be positive, got {cost_per_mile}"
            )));
        }
        Self::validate(prefactor_a, rate_per_dollar, rate_per_dollar * cost_per_mile)
    }

    fn validate(prefactor_a: f64, rate_per_dollar: f64, rate_per_mile: f64) -> Result<Self> {
        for (name, v) in [
            ("prefactor_a", prefactor_a),
            ("rate_per_dollar", rate_per_dollar),
            ("rate_per_mile", rate_per_mile),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self {
            prefactor_a,
            rate_per_dollar,
            rate_per_mile,
        })
    }

    pub fn prefactor_a(&self) -> f64 {
        self.prefactor_a
    }

    /// λ, per dollar.
    pub fn rate_per_dollar(&self) -> f64 {
        self.rate_per_dollar
    }

    /// r, per one-way mile.
    pub fn rate_per_mile(&self) -> f64 {
        self.rate_per_mile
    }

    /// Probability that willingness to pay is at most `w` dollars.
    pub fn cdf(&self, w: f64) -> Result<f64> {
        if w < 0.0 || !w.is_finite() {
            return Err(Error::domain(format!("cdf argument must be >= 0, got {w}")));
        }
        // -expm1 keeps precision near zero
        Ok(-f64::exp_m1(-self.rate_per_dollar * w))
    }

    /// Proportion of the population willing to pay `t` dollars or more.
    pub fn survival(&self, t: f64) -> Result<f64> {
        if t < 0.0 || !t.is_finite() {
            return Err(Error::domain(format!(
                "survival argument must be >= 0, got {t}"
            )));
        }
        Ok((-self.rate_per_dollar * t).exp())
    }

    /// Mean expenditure per visitor, 1/λ.
    pub fn mean_expenditure(&self) -> f64 {
        1.0 / self.rate_per_dollar
    }

    /// Expected travel expenditure per member of the general population:
    /// the integral of A·e^(-λx) over all costs, which is A/λ.
    pub fn per_capita_rwtp(&self) -> f64 {
        self.prefactor_a / self.rate_per_dollar
    }

    /// Visitation probability at cost `x` dollars: A·e^(-λx).
    pub fn visit_probability_at_cost(&self, x: f64) -> Result<f64> {
        if x < 0.0 || !x.is_finite() {
            return Err(Error::domain(format!("cost must be >= 0, got {x}")));
        }
        Ok(self.prefactor_a * (-self.rate_per_dollar * x).exp())
    }

    /// Visitation probability at one-way distance `d` miles: A·e^(-r·d).
    pub fn visit_probability_at_distance(&self, d: f64) -> Result<f64> {
        if d < 0.0 || !d.is_finite() {
            return Err(Error::domain(format!("distance must be >= 0, got {d}")));
        }
        Ok(self.prefactor_a * (-self.rate_per_mile * d).exp())
    }

    /// Checks the unit link λ·c = r against a schedule.
    pub fn consistent_with(&self, schedule: &CostSchedule) -> bool {
        let c = schedule.cost_per_mile();
        let rel = (self.rate_per_dollar * c - self.rate_per_mile).abs() / self.rate_per_mile;
        rel <= 1e-12
    }
}
