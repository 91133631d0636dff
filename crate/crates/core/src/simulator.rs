//! Monte-Carlo generation of synthetic visitation and hypothetical-cost
//! data from a known ground-truth model, for estimator consistency checks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::estimation::{fit_exponential, stated_rate_from_groups, AcceptanceGroup};
use crate::ingestion::{band_observations, CostSchedule, DistanceBandRecord};

/// Identifier of the generator, recorded in every simulation report.
pub const GENERATOR: &str = "chacha8";

/// Ground truth for a synthetic study.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticScenario {
    pub true_rate_per_dollar: f64,
    pub true_prefactor: f64,
    /// (one-way midpoint miles, band population)
    pub band_layout: Vec<(f64, u64)>,
    pub cost_schedule: CostSchedule,
    pub price_increase: f64,
    /// Fraction of each band's population in the sampling frame.
    pub sampling_fraction: f64,
    pub seed: u64,
}

impl SyntheticScenario {
    fn validate(&self) -> Result<()> {
        if !(self.true_rate_per_dollar > 0.0) {
            return Err(Error::Scenario(format!(
                "true rate must be positive, got {}",
                self.true_rate_per_dollar
            )));
        }
        if self.true_prefactor < 0.0 || !self.true_prefactor.is_finite() {
            return Err(Error::Scenario(format!(
                "prefactor must be >= 0, got {}",
                self.true_prefactor
            )));
        }
        if !(self.sampling_fraction > 0.0 && self.sampling_fraction <= 1.0) {
            return Err(Error::Scenario(format!(
                "sampling fraction must lie in (0,1], got {}",
                self.sampling_fraction
            )));
        }
        Ok(())
    }

    pub fn rate_per_mile(&self) -> f64 {
        self.true_rate_per_dollar * self.cost_schedule.cost_per_mile()
    }

    /// Weight that undoes the sampling fraction when binning respondents.
    pub fn respondent_weight(&self) -> f64 {
        1.0 / self.sampling_fraction
    }
}

/// Each replication owns a generator stream derived from (seed, index),
/// so runs are reproducible and replications independent.
pub fn replication_rng(seed: u64, replication: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replication);
    rng
}

/// Draw respondents per band: Binomial(population, p·fraction) with
/// p = A·e^(-r·midpoint).
pub fn simulate_visits(
    scenario: &SyntheticScenario,
    replication: u64,
) -> Result<Vec<DistanceBandRecord>> {
    scenario.validate()?;
    if scenario.band_layout.is_empty() {
        return Err(Error::Scenario("band layout is empty".to_string()));
    }
    let mut rng = replication_rng(scenario.seed, replication);
    let rate = scenario.rate_per_mile();

    // contiguous bands centered on the midpoints
    let mids: Vec<f64> = scenario.band_layout.iter().map(|&(m, _)| m).collect();
    let min_gap = mids
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(f64::INFINITY, f64::min);

    let mut out = Vec::with_capacity(scenario.band_layout.len());
    for &(mid, population) in &scenario.band_layout {
        let half = if min_gap.is_finite() {
            (min_gap / 2.0).min(mid)
        } else {
            mid
        };
        let p = scenario.true_prefactor * (-rate * mid).exp() * scenario.sampling_fraction;
        if p > 1.0 {
            return Err(Error::Scenario(format!(
                "band at {mid} mi has sampled visit probability {p} > 1"
            )));
        }
        let respondents = Binomial::new(population, p)
            .map_err(|e| Error::Scenario(e.to_string()))?
            .sample(&mut rng) as u32;
        out.push(DistanceBandRecord {
            band_low: mid - half,
            band_high: mid + half,
            population,
            respondents,
        });
    }
    Ok(out)
}

/// Draw acceptances per group: Binomial(n_i, e^(-λΔ_i)).
pub fn simulate_acceptances(
    scenario: &SyntheticScenario,
    groups: &[(u32, f64)],
    replication: u64,
) -> Result<Vec<AcceptanceGroup>> {
    scenario.validate()?;
    let mut rng = replication_rng(scenario.seed, replication);
    let lambda = scenario.true_rate_per_dollar;
    let mut out = Vec::with_capacity(groups.len());
    for &(n, delta) in groups {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::Scenario(format!("delta must be positive, got {delta}")));
        }
        let p = (-lambda * delta).exp();
        let accepting = Binomial::new(n as u64, p)
            .map_err(|e| Error::Scenario(e.to_string()))?
            .sample(&mut rng) as u32;
        out.push(AcceptanceGroup::new(n, accepting, delta)?);
    }
    Ok(out)
}

/// One replication of the visit-side pipeline: simulate, bin, fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisitReplication {
    pub replication: u64,
    pub degenerate: bool,
    pub rate_per_mile: Option<f64>,
    pub prefactor_a: Option<f64>,
    pub r_squared: Option<f64>,
}

pub fn run_visit_replications(
    scenario: &SyntheticScenario,
    replications: u64,
) -> Result<Vec<VisitReplication>> {
    let weight = scenario.respondent_weight();
    let mut out = Vec::with_capacity(replications as usize);
    for rep in 0..replications {
        let bands = simulate_visits(scenario, rep)?;
        let row = match band_observations(&bands, weight).and_then(|obs| fit_exponential(&obs)) {
            Ok((fit, diag)) => VisitReplication {
                replication: rep,
                degenerate: false,
                rate_per_mile: Some(fit.rate_per_mile),
                prefactor_a: Some(fit.prefactor_a),
                r_squared: Some(diag.r_squared),
            },
            Err(Error::InsufficientData(_)) | Err(Error::DegenerateDesign(_)) | Err(Error::Domain(_)) => {
                VisitReplication {
                    replication: rep,
                    degenerate: true,
                    rate_per_mile: None,
                    prefactor_a: None,
                    r_squared: None,
                }
            }
            Err(e) => return Err(e),
        };
        out.push(row);
    }
    Ok(out)
}

/// One replication of the stated-side pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcceptanceReplication {
    pub replication: u64,
    /// A zero-acceptor group made the geometric mean undefined; the
    /// replication is excluded from bias statistics but counted.
    pub degenerate: bool,
    pub geometric_mean_acceptance: Option<f64>,
    pub stated_mean_wtp: Option<f64>,
}

pub fn run_acceptance_replications(
    scenario: &SyntheticScenario,
    groups: &[(u32, f64)],
    replications: u64,
) -> Result<Vec<AcceptanceReplication>> {
    let mut out = Vec::with_capacity(replications as usize);
    for rep in 0..replications {
        let drawn = simulate_acceptances(scenario, groups, rep)?;
        let row = match stated_rate_from_groups(&drawn) {
            Ok(est) => AcceptanceReplication {
                replication: rep,
                degenerate: false,
                geometric_mean_acceptance: Some(est.geometric_mean_acceptance),
                stated_mean_wtp: Some(est.stated_mean_wtp),
            },
            Err(Error::DegenerateGroup { .. }) | Err(Error::InfiniteWtp) => AcceptanceReplication {
                replication: rep,
                degenerate: true,
                geometric_mean_acceptance: None,
                stated_mean_wtp: None,
            },
            Err(e) => return Err(e),
        };
        out.push(row);
    }
    Ok(out)
}
