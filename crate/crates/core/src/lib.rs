//! Travel-cost demand modeling for recreation sites.
//!
//! Fits an exponential demand-for-travel curve to observed visitation,
//! derives revealed willingness to pay (RWTP), estimates stated
//! willingness to pay (SWTP) from hypothetical fuel-price responses,
//! applies demographic adjustments, and reconciles the two measures.
//! Ships the San Marcos pilot-study fixtures and a Monte-Carlo simulator
//! for estimator consistency checks.

pub mod config;
pub mod error;
pub mod estimation;
pub mod ingestion;
pub mod model;
pub mod replicate;
pub mod simulator;
pub mod valuation;

pub use error::{Error, Result};
pub use estimation::{
    fit_exponential, stated_rate_from_groups, to_dollar_scale, AcceptanceGroup, BandObservation,
    DistanceFit, FitDiagnostics, StatedEstimate,
};
pub use ingestion::{CostSchedule, DistanceBandRecord, SeasonCalendar, SurveyResponse};
pub use model::ExponentialDemand;
pub use valuation::{DemographicParams, ValuationReport};
