//! Aggregate revealed and stated willingness-to-pay, demographic
//! adjustments, and the reconciliation of the two measures.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::ExponentialDemand;

/// Population growth and turnover parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemographicParams {
    pub annual_growth_rate: f64,
    pub mortality_rate: f64,
    pub census_year: i32,
    pub survey_year: i32,
    pub total_population: u64,
}

impl DemographicParams {
    pub fn new(
        annual_growth_rate: f64,
        mortality_rate: f64,
        census_year: i32,
        survey_year: i32,
        total_population: u64,
    ) -> Result<Self> {
        for (name, v) in [
            ("annual_growth_rate", annual_growth_rate),
            ("mortality_rate", mortality_rate),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::domain(format!("{name} must lie in (0,1), got {v}")));
            }
        }
        if survey_year < census_year {
            return Err(Error::domain(format!(
                "survey year {survey_year} precedes census year {census_year}"
            )));
        }
        if total_population == 0 {
            return Err(Error::domain("total population must be positive"));
        }
        Ok(Self {
            annual_growth_rate,
            mortality_rate,
            census_year,
            survey_year,
            total_population,
        })
    }

    /// San Marcos study: 2.5% growth, 1.3% mortality, 2000 census,
    /// 2008 survey, 18,906,091 residents within 290 miles.
    pub fn san_marcos() -> Self {
        Self {
            annual_growth_rate: 0.025,
            mortality_rate: 0.013,
            census_year: 2000,
            survey_year: 2008,
            total_population: 18_906_091,
        }
    }
}

/// RWTP totals over the lifetime of the current population.
pub fn revealed_total(
    model: &ExponentialDemand,
    demo: &DemographicParams,
    time_multiplier: f64,
) -> Result<(f64, f64)> {
    if !(time_multiplier >= 1.0) || !time_multiplier.is_finite() {
        return Err(Error::domain(format!(
            "time multiplier must be >= 1, got {time_multiplier}"
        )));
    }
    let total = model.per_capita_rwtp() * demo.total_population as f64;
    Ok((total, total * time_multiplier))
}

/// Annual stated WTP across all visitors.
pub fn stated_total(swtp_per_visitor: f64, annual_visitors: f64) -> Result<f64> {
    for (name, v) in [
        ("swtp_per_visitor", swtp_per_visitor),
        ("annual_visitors", annual_visitors),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::domain(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(swtp_per_visitor * annual_visitors)
}

/// Compound population growth between the census and the survey.
pub fn growth_factor(demo: &DemographicParams) -> f64 {
    (1.0 + demo.annual_growth_rate).powi(demo.survey_year - demo.census_year)
}

/// Years until new residents match the current population:
/// ln 2 / ln(1 + growth + mortality).
pub fn turnover_years(demo: &DemographicParams) -> Result<f64> {
    let combined = demo.annual_growth_rate + demo.mortality_rate;
    if !(combined > 0.0) {
        return Err(Error::domain(format!(
            "combined growth + mortality must be positive, got {combined}"
        )));
    }
    Ok(2.0f64.ln() / (1.0 + combined).ln())
}

/// The reconciliation quantities of the stated-vs-revealed comparison.
///
/// The dispersion comparison reproduces the published heuristic verbatim,
/// in units of millions of dollars: sd_fraction = sqrt(SWTP_millions) /
/// RWTP_millions. It is a reported result, not an endorsed derivation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reconciliation {
    pub swtp_over_turnover: f64,
    pub ratio_swtp_rwtp: f64,
    pub sd_fraction: f64,
    pub diff_in_sd_units: f64,
}

pub fn reconcile(
    rwtp_total_with_time: f64,
    swtp_annual: f64,
    turnover: f64,
) -> Result<Reconciliation> {
    for (name, v) in [
        ("rwtp_total_with_time", rwtp_total_with_time),
        ("swtp_annual", swtp_annual),
        ("turnover", turnover),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::domain(format!("{name} must be positive, got {v}")));
        }
    }
    let swtp_over_turnover = swtp_annual * turnover;
    let ratio = swtp_over_turnover / rwtp_total_with_time;
    let sd_fraction = (swtp_over_turnover / 1e6).sqrt() / (rwtp_total_with_time / 1e6);
    Ok(Reconciliation {
        swtp_over_turnover,
        ratio_swtp_rwtp: ratio,
        sd_fraction,
        diff_in_sd_units: (1.0 - ratio).abs() / sd_fraction,
    })
}

/// The full valuation summary. Monetary keys carry their period label
/// (annual, turnover-period, lifetime) since the reconciliation rests on
/// that distinction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValuationReport {
    pub per_capita_rwtp: f64,
    pub rwtp_total: f64,
    pub rwtp_total_with_time: f64,
    pub swtp_per_visitor: f64,
    pub swtp_annual: f64,
    pub turnover_years: f64,
    pub swtp_over_turnover: f64,
    pub ratio_swtp_rwtp: f64,
    pub sd_fraction: f64,
    pub diff_in_sd_units: f64,
}

impl ValuationReport {
    pub fn assemble(
        model: &ExponentialDemand,
        demo: &DemographicParams,
        time_multiplier: f64,
        swtp_per_visitor: f64,
        annual_visitors: f64,
    ) -> Result<Self> {
        let (rwtp_total, rwtp_total_with_time) = revealed_total(model, demo, time_multiplier)?;
        let swtp_annual = stated_total(swtp_per_visitor, annual_visitors)?;
        let turnover = turnover_years(demo)?;
        let rec = reconcile(rwtp_total_with_time, swtp_annual, turnover)?;
        Ok(Self {
            per_capita_rwtp: model.per_capita_rwtp(),
            rwtp_total,
            rwtp_total_with_time,
            swtp_per_visitor,
            swtp_annual,
            turnover_years: turnover,
            swtp_over_turnover: rec.swtp_over_turnover,
            ratio_swtp_rwtp: rec.ratio_swtp_rwtp,
            sd_fraction: rec.sd_fraction,
            diff_in_sd_units: rec.diff_in_sd_units,
        })
    }

    /// Machine-readable key=value form.
    pub fn to_structured(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "per_capita_rwtp_dollars_per_resident={:.10}", self.per_capita_rwtp);
        let _ = writeln!(s, "rwtp_total_lifetime_dollars={:.2}", self.rwtp_total);
        let _ = writeln!(s, "rwtp_total_lifetime_with_time_dollars={:.2}", self.rwtp_total_with_time);
        let _ = writeln!(s, "swtp_per_visitor_annual_dollars={:.6}", self.swtp_per_visitor);
        let _ = writeln!(s, "swtp_annual_dollars_per_year={:.2}", self.swtp_annual);
        let _ = writeln!(s, "turnover_period_years={:.6}", self.turnover_years);
        let _ = writeln!(s, "swtp_turnover_period_dollars={:.2}", self.swtp_over_turnover);
        let _ = writeln!(s, "ratio_swtp_to_rwtp={:.6}", self.ratio_swtp_rwtp);
        let _ = writeln!(s, "sd_fraction_dispersion_heuristic={:.6}", self.sd_fraction);
        let _ = writeln!(s, "diff_in_sd_units_dispersion_heuristic={:.6}", self.diff_in_sd_units);
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "Valuation summary");
        let _ = writeln!(s, "  Revealed WTP per resident:          ${:.6}", self.per_capita_rwtp);
        let _ = writeln!(s, "  Revealed WTP, population lifetime:  ${:.2}", self.rwtp_total);
        let _ = writeln!(s, "  ... with travel-time value:         ${:.2}", self.rwtp_total_with_time);
        let _ = writeln!(s, "  Stated WTP per visitor (annual):    ${:.4}", self.swtp_per_visitor);
        let _ = writeln!(s, "  Stated WTP, all visitors (annual):  ${:.2}", self.swtp_annual);
        let _ = writeln!(s, "  Population turnover period:         {:.2} years", self.turnover_years);
        let _ = writeln!(s, "  Stated WTP over turnover period:    ${:.2}", self.swtp_over_turnover);
        let _ = writeln!(s, "  Ratio stated/revealed:              {:.4}", self.ratio_swtp_rwtp);
        let _ = writeln!(
            s,
            "  Dispersion heuristic (as published): {:.4} sd fraction, {:.4} sd difference",
            self.sd_fraction, self.diff_in_sd_units
        );
        s
    }
}
