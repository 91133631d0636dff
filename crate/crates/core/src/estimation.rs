//! Fitting the exponential demand curve to grouped visitation data and
//! estimating the rate from hypothetical-cost acceptance groups.

use statrs::distribution::{ContinuousCDF, FisherSnedecor};

use crate::error::{Error, Result};
use crate::ingestion::CostSchedule;
use crate::model::ExponentialDemand;

/// One (distance midpoint, visit probability) point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandObservation {
    pub distance_midpoint: f64,
    pub visit_probability: f64,
}

impl BandObservation {
    pub fn new(distance_midpoint: f64, visit_probability: f64) -> Result<Self> {
        if !(distance_midpoint > 0.0) || !distance_midpoint.is_finite() {
            return Err(Error::domain(format!(
                "distance midpoint must be positive, got {distance_midpoint}"
            )));
        }
        if !(visit_probability > 0.0 && visit_probability < 1.0) {
            return Err(Error::domain(format!(
                "visit probability must lie in (0,1), got {visit_probability}"
            )));
        }
        Ok(Self {
            distance_midpoint,
            visit_probability,
        })
    }
}

/// Goodness of fit on the log scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitDiagnostics {
    pub r_squared: f64,
    pub f_statistic: f64,
    pub p_value: f64,
    pub n_points: usize,
}

/// Distance-scale fit of p = A·e^(-r·x); dollars enter later through a
/// cost schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceFit {
    pub prefactor_a: f64,
    pub rate_per_mile: f64,
}

/// One distance group's answers to the hypothetical-cost question.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcceptanceGroup {
    pub n_respondents: u32,
    pub n_accepting: u32,
    pub delta_cost: f64,
}

impl AcceptanceGroup {
    pub fn new(n_respondents: u32, n_accepting: u32, delta_cost: f64) -> Result<Self> {
        if n_respondents == 0 {
            return Err(Error::domain("acceptance group needs at least one respondent"));
        }
        if n_accepting > n_respondents {
            return Err(Error::domain(format!(
                "acceptors ({n_accepting}) exceed respondents ({n_respondents})"
            )));
        }
        if !(delta_cost > 0.0) || !delta_cost.is_finite() {
            return Err(Error::domain(format!(
                "delta cost must be positive, got {delta_cost}"
            )));
        }
        Ok(Self {
            n_respondents,
            n_accepting,
            delta_cost,
        })
    }

    pub fn acceptance_probability(&self) -> f64 {
        self.n_accepting as f64 / self.n_respondents as f64
    }
}

/// Least-squares fit of ln(p) on distance.
///
/// This log-linear fit is what reproduces the published diagnostics on
/// the pilot data; nonlinear least squares on the natural scale does not.
pub fn fit_exponential(observations: &[BandObservation]) -> Result<(DistanceFit, FitDiagnostics)> {
    if observations.len() < 3 {
        return Err(Error::insufficient(format!(
            "need at least 3 band observations, got {}",
            observations.len()
        )));
    }
    let n = observations.len() as f64;
    let xs: Vec<f64> = observations.iter().map(|o| o.distance_midpoint).collect();
    let ys: Vec<f64> = observations
        .iter()
        .map(|o| o.visit_probability.ln())
        .collect();

    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(&ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
        syy += (y - mean_y) * (y - mean_y);
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateDesign(
            "all observations share one distance; slope is unidentified".to_string(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    if slope >= 0.0 {
        return Err(Error::DegenerateDesign(format!(
            "fitted slope {slope} is nonnegative; visitation does not decay with distance"
        )));
    }

    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    let df2 = observations.len() - 2;
    let f_statistic = if r_squared >= 1.0 {
        f64::INFINITY
    } else {
        r_squared / (1.0 - r_squared) * df2 as f64
    };
    let p_value = if f_statistic.is_infinite() {
        0.0
    } else {
        f_right_tail(f_statistic, 1, df2 as u32)?
    };

    Ok((
        DistanceFit {
            prefactor_a: intercept.exp(),
            rate_per_mile: -slope,
        },
        FitDiagnostics {
            r_squared,
            f_statistic,
            p_value,
            n_points: observations.len(),
        },
    ))
}

/// Convert a distance-scale fit to the dollar scale.
pub fn to_dollar_scale(fit: &DistanceFit, schedule: &CostSchedule) -> Result<ExponentialDemand> {
    ExponentialDemand::from_mile_rate(fit.prefactor_a, fit.rate_per_mile, schedule.cost_per_mile())
}

/// Result of the stated-preference rate estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatedEstimate {
    /// Weighted geometric mean of the group acceptance probabilities.
    pub geometric_mean_acceptance: f64,
    /// Respondent-weighted mean additional cost.
    pub mean_delta: f64,
    /// Mean willingness to pay the additional cost: Δ / (-ln G).
    pub stated_mean_wtp: f64,
}

/// A group expressed as (weight, acceptance probability, additional cost).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedAcceptance {
    pub weight: f64,
    pub acceptance_probability: f64,
    pub delta_cost: f64,
}

/// Core of the stated-side estimate: G = exp(Σ wᵢ ln pᵢ / W),
/// Δ = Σ wᵢΔᵢ / W, mean WTP = Δ / (-ln G).
///
/// The geometric mean multiplies one factor per respondent; the product
/// is accumulated in log space to avoid underflow.
pub fn stated_rate_weighted(entries: &[WeightedAcceptance]) -> Result<StatedEstimate> {
    if entries.is_empty() {
        return Err(Error::insufficient("no acceptance groups"));
    }
    let mut total_weight = 0.0;
    let mut log_sum = 0.0;
    let mut delta_sum = 0.0;
    for (i, e) in entries.iter().enumerate() {
        if !(e.weight > 0.0) || !e.weight.is_finite() {
            return Err(Error::domain(format!("group {i}: weight must be positive")));
        }
        if !(e.delta_cost > 0.0) || !e.delta_cost.is_finite() {
            return Err(Error::domain(format!("group {i}: delta cost must be positive")));
        }
        if e.acceptance_probability <= 0.0 {
            return Err(Error::DegenerateGroup {
                index: i,
                label: format!("delta {:.4}", e.delta_cost),
            });
        }
        if e.acceptance_probability > 1.0 {
            return Err(Error::domain(format!(
                "group {i}: acceptance probability {} exceeds 1",
                e.acceptance_probability
            )));
        }
        total_weight += e.weight;
        log_sum += e.weight * e.acceptance_probability.ln();
        delta_sum += e.weight * e.delta_cost;
    }
    let mean_log = log_sum / total_weight;
    let mean_delta = delta_sum / total_weight;
    if mean_log == 0.0 {
        return Err(Error::InfiniteWtp);
    }
    Ok(StatedEstimate {
        geometric_mean_acceptance: mean_log.exp(),
        mean_delta,
        stated_mean_wtp: mean_delta / (-mean_log),
    })
}

/// Stated-side estimate from survey acceptance groups.
pub fn stated_rate_from_groups(groups: &[AcceptanceGroup]) -> Result<StatedEstimate> {
    let entries: Vec<WeightedAcceptance> = groups
        .iter()
        .map(|g| WeightedAcceptance {
            weight: g.n_respondents as f64,
            acceptance_probability: g.acceptance_probability(),
            delta_cost: g.delta_cost,
        })
        .collect();
    stated_rate_weighted(&entries)
}

/// Mean WTP implied by a geometric-mean acceptance G at cost Δ.
/// Used when Δ is supplied directly instead of derived from the groups.
pub fn stated_wtp(mean_delta: f64, geometric_mean_acceptance: f64) -> Result<f64> {
    if !(mean_delta > 0.0) || !mean_delta.is_finite() {
        return Err(Error::domain(format!(
            "mean delta must be positive, got {mean_delta}"
        )));
    }
    if !(geometric_mean_acceptance > 0.0 && geometric_mean_acceptance <= 1.0) {
        return Err(Error::domain(format!(
            "geometric mean acceptance must lie in (0,1], got {geometric_mean_acceptance}"
        )));
    }
    if geometric_mean_acceptance == 1.0 {
        return Err(Error::InfiniteWtp);
    }
    Ok(mean_delta / (-geometric_mean_acceptance.ln()))
}

/// Right-tail probability of the F(d1, d2) distribution.
pub fn f_right_tail(f: f64, d1: u32, d2: u32) -> Result<f64> {
    if !(f >= 0.0) || !f.is_finite() {
        return Err(Error::domain(format!("F statistic must be >= 0, got {f}")));
    }
    if d1 == 0 || d2 == 0 {
        return Err(Error::domain(format!(
            "degrees of freedom must be >= 1, got ({d1}, {d2})"
        )));
    }
    let dist = FisherSnedecor::new(d1 as f64, d2 as f64)
        .map_err(|e| Error::domain(format!("F distribution: {e}")))?;
    Ok(dist.sf(f))
}
