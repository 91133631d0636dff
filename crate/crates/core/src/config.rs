//! Flat `key=value` configuration files. Keys carry their units so the
//! fixtures stay diff-friendly and unambiguous.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::ingestion::{CostSchedule, SeasonCalendar};
use crate::valuation::DemographicParams;

/// Raw parsed file: keys to string values, `#` comments and blank lines
/// ignored.
#[derive(Debug, Clone)]
pub struct ConfigFile {
    values: HashMap<String, String>,
    base_dir: PathBuf,
}

impl ConfigFile {
    pub fn parse(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let base_dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        Self::parse_str(&text, base_dir)
    }

    pub fn parse_str(text: &str, base_dir: PathBuf) -> Result<Self> {
        let mut values = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key=value, got {line:?}", i + 1))
            })?;
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values, base_dir })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str()).filter(|s| !s.is_empty())
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::Config(format!("missing required key {key}")))
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        self.require(key)?
            .parse()
            .map_err(|_| Error::Config(format!("key {key}: not a number")))
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.get(key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|_| Error::Config(format!("key {key}: not a number"))),
        }
    }

    pub fn f64_opt(&self, key: &str) -> Result<Option<f64>> {
        match self.get(key) {
            None => Ok(None),
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|_| Error::Config(format!("key {key}: not a number"))),
        }
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64> {
        match self.get(key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|_| Error::Config(format!("key {key}: not an integer"))),
        }
    }

    pub fn i32(&self, key: &str) -> Result<i32> {
        self.require(key)?
            .parse()
            .map_err(|_| Error::Config(format!("key {key}: not an integer")))
    }

    /// Path value resolved relative to the config file's directory.
    pub fn path(&self, key: &str) -> Result<PathBuf> {
        Ok(self.resolve(self.require(key)?))
    }

    pub fn path_opt(&self, key: &str) -> Option<PathBuf> {
        self.get(key).map(|s| self.resolve(s))
    }

    fn resolve(&self, s: &str) -> PathBuf {
        let p = Path::new(s);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }
}

/// Everything a pipeline run needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub population_csv: PathBuf,
    pub survey_csv: PathBuf,
    pub zip_distance_csv: Option<PathBuf>,
    pub cost_schedule: CostSchedule,
    pub calendar: SeasonCalendar,
    pub demographics: DemographicParams,
    pub price_increase: f64,
    pub season_visitors_override: Option<f64>,
    pub mean_delta_override: Option<f64>,
    pub min_acceptance_distance: f64,
    pub max_acceptance_distance: f64,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let file = ConfigFile::parse(path)?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &ConfigFile) -> Result<Self> {
        let population_csv = file.path("population_csv")?;
        let survey_csv = file.path("survey_csv")?;
        for (name, p) in [("population_csv", &population_csv), ("survey_csv", &survey_csv)] {
            if !p.exists() {
                return Err(Error::Config(format!("{name}: file {} does not exist", p.display())));
            }
        }
        let zip_distance_csv = file.path_opt("zip_distance_csv");

        let cost_schedule = CostSchedule::new(
            file.f64_or("gas_price_dollars_per_gallon", 4.0)?,
            file.f64_or("fuel_economy_miles_per_gallon", 20.8)?,
            file.f64_or("round_trip_multiplier", 1.0)?,
            file.f64_or("time_value_multiplier", 1.2)?,
            file.f64_opt("effective_cost_per_mile_dollars")?,
        )?;
        let calendar = SeasonCalendar::new(
            file.f64_or("weekday_count_days", 75.0)?,
            file.f64_or("weekend_holiday_count_days", 29.0)?,
            file.f64_or("active_hours_per_day", 10.0)?,
        )?;
        let demographics = DemographicParams::new(
            file.f64_or("annual_growth_rate_per_year", 0.025)?,
            file.f64_or("mortality_rate_per_year", 0.013)?,
            file.i32("census_year")?,
            file.i32("survey_year")?,
            file.u64_or("total_population_residents", 0)?,
        )?;

        Ok(Self {
            population_csv,
            survey_csv,
            zip_distance_csv,
            cost_schedule,
            calendar,
            demographics,
            price_increase: file.f64_or("price_increase_dollars_per_gallon", 1.0)?,
            season_visitors_override: file.f64_opt("season_visitors_override")?,
            mean_delta_override: file.f64_opt("mean_delta_override_dollars")?,
            min_acceptance_distance: file.f64_or("min_acceptance_distance_miles", 10.0)?,
            max_acceptance_distance: file.f64_or("max_acceptance_distance_miles", 290.0)?,
        })
    }
}

/// Scenario description for the Monte-Carlo subcommand.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub mode: ScenarioMode,
    pub true_rate_per_dollar: f64,
    pub true_prefactor: f64,
    /// midpoint:population pairs
    pub bands: Vec<(f64, u64)>,
    /// respondents:delta pairs, acceptance mode only
    pub groups: Vec<(u32, f64)>,
    pub cost_schedule: CostSchedule,
    pub price_increase: f64,
    pub sampling_fraction: f64,
    pub replications: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioMode {
    Visits,
    Acceptances,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let file = ConfigFile::parse(path)?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &ConfigFile) -> Result<Self> {
        let mode = match file.require("mode")? {
            "visits" => ScenarioMode::Visits,
            "acceptances" => ScenarioMode::Acceptances,
            other => {
                return Err(Error::Config(format!(
                    "mode must be visits or acceptances, got {other:?}"
                )))
            }
        };

        let mut bands = Vec::new();
        if let Some(spec) = file.get("bands") {
            for item in spec.split(',') {
                let (mid, pop) = item.split_once(':').ok_or_else(|| {
                    Error::Config(format!("bands: expected midpoint:population, got {item:?}"))
                })?;
                bands.push((
                    mid.trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("bands: bad midpoint {mid:?}")))?,
                    pop.trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("bands: bad population {pop:?}")))?,
                ));
            }
        }
        let mut groups = Vec::new();
        if let Some(spec) = file.get("groups") {
            for item in spec.split(',') {
                let (n, delta) = item.split_once(':').ok_or_else(|| {
                    Error::Config(format!("groups: expected respondents:delta, got {item:?}"))
                })?;
                groups.push((
                    n.trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("groups: bad count {n:?}")))?,
                    delta
                        .trim()
                        .parse()
                        .map_err(|_| Error::Config(format!("groups: bad delta {delta:?}")))?,
                ));
            }
        }
        match mode {
            ScenarioMode::Visits if bands.is_empty() => {
                return Err(Error::Config("visits mode requires bands".to_string()))
            }
            ScenarioMode::Acceptances if groups.is_empty() => {
                return Err(Error::Config("acceptances mode requires groups".to_string()))
            }
            _ => {}
        }

        let cost_schedule = CostSchedule::new(
            file.f64_or("gas_price_dollars_per_gallon", 4.0)?,
            file.f64_or("fuel_economy_miles_per_gallon", 20.8)?,
            file.f64_or("round_trip_multiplier", 1.0)?,
            file.f64_or("time_value_multiplier", 1.2)?,
            file.f64_opt("effective_cost_per_mile_dollars")?,
        )?;

        Ok(Self {
            mode,
            true_rate_per_dollar: file.f64("true_rate_per_dollar")?,
            true_prefactor: file.f64_or("true_prefactor", 0.02)?,
            bands,
            groups,
            cost_schedule,
            price_increase: file.f64_or("price_increase_dollars_per_gallon", 1.0)?,
            sampling_fraction: file.f64_or("sampling_fraction", 1.0)?,
            replications: file.u64_or("replications", 1000)?,
            seed: file.u64_or("seed", 0)?,
        })
    }
}
