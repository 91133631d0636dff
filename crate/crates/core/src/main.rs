use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use travelcost::config::{RunConfig, ScenarioConfig, ScenarioMode};
use travelcost::error::{Error, Result};
use travelcost::estimation::{
    fit_exponential, stated_rate_from_groups, stated_wtp, to_dollar_scale, DistanceFit,
    FitDiagnostics, StatedEstimate,
};
use travelcost::ingestion::{
    acceptance_groups, band_observations, estimate_season_visitors, load_bands, load_survey,
    respondent_weight, SurveyResponse,
};
use travelcost::replicate::replicate_paper;
use travelcost::simulator::{
    run_acceptance_replications, run_visit_replications, SyntheticScenario, GENERATOR,
};
use travelcost::valuation::{revealed_total, turnover_years, ValuationReport};

#[derive(Parser)]
#[command(name = "travelcost", version, about = "Travel-cost demand model: revealed and stated willingness to pay")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output directory for report files
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Which report form to print to stdout
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the exponential visitation curve to the population table
    Fit {
        #[arg(long)]
        config: PathBuf,
    },
    /// Revealed willingness-to-pay totals from the fitted curve
    Rwtp {
        #[arg(long)]
        config: PathBuf,
    },
    /// Stated willingness to pay from the hypothetical-cost responses
    Swtp {
        #[arg(long)]
        config: PathBuf,
    },
    /// Full revealed-vs-stated reconciliation report
    Reconcile {
        #[arg(long)]
        config: PathBuf,
    },
    /// Monte-Carlo estimator checks from a scenario file
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        /// Override the scenario's seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Replicate the San Marcos pilot study from the shipped fixtures
    ReplicatePaper,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Fit { config } => cmd_fit(config, cli),
        Command::Rwtp { config } => cmd_rwtp(config, cli),
        Command::Swtp { config } => cmd_swtp(config, cli),
        Command::Reconcile { config } => cmd_reconcile(config, cli),
        Command::Simulate { scenario, seed } => cmd_simulate(scenario, *seed, cli),
        Command::ReplicatePaper => cmd_replicate_paper(cli),
    }
}

/// Shared first stages: data, weight, band observations, fit.
struct FitStage {
    config: RunConfig,
    survey: Vec<SurveyResponse>,
    site_count: u32,
    season_visitors: f64,
    weight: f64,
    fit: DistanceFit,
    diagnostics: FitDiagnostics,
    bands: Vec<travelcost::DistanceBandRecord>,
}

fn run_fit_stage(config_path: &Path) -> Result<FitStage> {
    let config = RunConfig::load(config_path)?;
    let bands = load_bands(&config.population_csv)?;
    let survey = load_survey(&config.survey_csv)?;
    let site: Vec<SurveyResponse> = survey.iter().filter(|r| r.at_rvf_site).cloned().collect();
    if site.is_empty() {
        return Err(Error::insufficient("no on-site survey responses"));
    }
    let season_visitors = match config.season_visitors_override {
        Some(v) => v,
        None => estimate_season_visitors(&site, &config.calendar)?,
    };
    let weight = respondent_weight(season_visitors, site.len() as u32)?;
    let observations = band_observations(&bands, weight)?;
    let (fit, diagnostics) = fit_exponential(&observations)?;
    Ok(FitStage {
        site_count: site.len() as u32,
        config,
        survey,
        season_visitors,
        weight,
        fit,
        diagnostics,
        bands,
    })
}

fn stated_stage(stage: &FitStage) -> Result<(StatedEstimate, f64)> {
    let groups = acceptance_groups(
        &stage.survey,
        &stage.bands,
        stage.config.price_increase,
        &stage.config.cost_schedule,
        stage.config.min_acceptance_distance,
        stage.config.max_acceptance_distance,
    )?;
    let est = stated_rate_from_groups(&groups)?;
    let per_visitor = match stage.config.mean_delta_override {
        Some(delta) => stated_wtp(delta, est.geometric_mean_acceptance)?,
        None => est.stated_mean_wtp,
    };
    Ok((est, per_visitor))
}

fn cmd_fit(config_path: &Path, cli: &Cli) -> Result<()> {
    let stage = run_fit_stage(config_path)?;
    let mut kv = String::new();
    let _ = writeln!(kv, "rate_per_mile={:.10}", stage.fit.rate_per_mile);
    let _ = writeln!(kv, "prefactor_a={:.10}", stage.fit.prefactor_a);
    let _ = writeln!(kv, "r_squared={:.10}", stage.diagnostics.r_squared);
    let _ = writeln!(kv, "f_statistic={:.10}", stage.diagnostics.f_statistic);
    let _ = writeln!(kv, "p_value={:.10}", stage.diagnostics.p_value);
    let _ = writeln!(kv, "n_points={}", stage.diagnostics.n_points);
    let _ = writeln!(kv, "visitors_per_respondent={:.6}", stage.weight);
    let _ = writeln!(kv, "season_visitors={:.4}", stage.season_visitors);
    let _ = writeln!(kv, "site_respondents={}", stage.site_count);

    let mut text = String::new();
    let _ = writeln!(text, "Exponential visitation fit ({} bands)", stage.diagnostics.n_points);
    let _ = writeln!(text, "  p(x) = {:.8} * exp(-{:.8} * x miles)", stage.fit.prefactor_a, stage.fit.rate_per_mile);
    let _ = writeln!(text, "  R-squared: {:.5}", stage.diagnostics.r_squared);
    let _ = writeln!(
        text,
        "  F({}, {}) = {:.4}, p = {:.5}",
        1,
        stage.diagnostics.n_points - 2,
        stage.diagnostics.f_statistic,
        stage.diagnostics.p_value
    );
    let _ = writeln!(text, "  Weight: {:.4} visitors per respondent", stage.weight);

    emit(cli, "fit_report", &text, &kv)
}

fn cmd_rwtp(config_path: &Path, cli: &Cli) -> Result<()> {
    let stage = run_fit_stage(config_path)?;
    let model = to_dollar_scale(&stage.fit, &stage.config.cost_schedule)?;
    let multiplier = stage.config.cost_schedule.time_value_multiplier;
    let (total, with_time) = revealed_total(&model, &stage.config.demographics, multiplier)?;

    let mut kv = String::new();
    let _ = writeln!(kv, "rate_per_dollar={:.10}", model.rate_per_dollar());
    let _ = writeln!(kv, "per_capita_rwtp_dollars_per_resident={:.10}", model.per_capita_rwtp());
    let _ = writeln!(kv, "rwtp_total_lifetime_dollars={:.2}", total);
    let _ = writeln!(kv, "rwtp_total_lifetime_with_time_dollars={:.2}", with_time);

    let mut text = String::new();
    let _ = writeln!(text, "Revealed willingness to pay");
    let _ = writeln!(text, "  lambda: {:.7} per dollar", model.rate_per_dollar());
    let _ = writeln!(text, "  Per resident: ${:.6}", model.per_capita_rwtp());
    let _ = writeln!(text, "  Population lifetime total: ${:.2}", total);
    let _ = writeln!(text, "  With travel-time value (x{multiplier}): ${with_time:.2}");

    emit(cli, "rwtp_report", &text, &kv)
}

fn cmd_swtp(config_path: &Path, cli: &Cli) -> Result<()> {
    let stage = run_fit_stage(config_path)?;
    let (est, per_visitor) = stated_stage(&stage)?;
    let annual = per_visitor * stage.season_visitors;

    let mut kv = String::new();
    let _ = writeln!(kv, "geometric_mean_acceptance={:.10}", est.geometric_mean_acceptance);
    let _ = writeln!(kv, "mean_delta_dollars={:.10}", stage.config.mean_delta_override.unwrap_or(est.mean_delta));
    let _ = writeln!(kv, "swtp_per_visitor_annual_dollars={:.10}", per_visitor);
    let _ = writeln!(kv, "swtp_annual_dollars_per_year={:.2}", annual);
    let _ = writeln!(kv, "annual_visitors={:.4}", stage.season_visitors);

    let mut text = String::new();
    let _ = writeln!(text, "Stated willingness to pay");
    let _ = writeln!(text, "  Geometric mean acceptance: {:.7}", est.geometric_mean_acceptance);
    let _ = writeln!(text, "  Per visitor (annual): ${per_visitor:.4}");
    let _ = writeln!(text, "  All visitors (annual): ${annual:.2}");

    emit(cli, "swtp_report", &text, &kv)
}

fn cmd_reconcile(config_path: &Path, cli: &Cli) -> Result<()> {
    let stage = run_fit_stage(config_path)?;
    let model = to_dollar_scale(&stage.fit, &stage.config.cost_schedule)?;
    let (_, per_visitor) = stated_stage(&stage)?;
    let report = ValuationReport::assemble(
        &model,
        &stage.config.demographics,
        stage.config.cost_schedule.time_value_multiplier,
        per_visitor,
        stage.season_visitors,
    )?;
    let _ = turnover_years(&stage.config.demographics)?;
    emit(cli, "valuation_report", &report.to_text(), &report.to_structured())
}

fn cmd_simulate(scenario_path: &Path, seed_override: Option<u64>, cli: &Cli) -> Result<()> {
    let mut scenario_cfg = ScenarioConfig::load(scenario_path)?;
    if let Some(seed) = seed_override {
        scenario_cfg.seed = seed;
    }
    let scenario = SyntheticScenario {
        true_rate_per_dollar: scenario_cfg.true_rate_per_dollar,
        true_prefactor: scenario_cfg.true_prefactor,
        band_layout: scenario_cfg.bands.clone(),
        cost_schedule: scenario_cfg.cost_schedule,
        price_increase: scenario_cfg.price_increase,
        sampling_fraction: scenario_cfg.sampling_fraction,
        seed: scenario_cfg.seed,
    };

    let mut csv_text = String::new();
    let _ = writeln!(csv_text, "# generator={GENERATOR} seed={}", scenario.seed);
    let summary;
    match scenario_cfg.mode {
        ScenarioMode::Visits => {
            let rows = run_visit_replications(&scenario, scenario_cfg.replications)?;
            let _ = writeln!(csv_text, "replication,degenerate,rate_per_mile,prefactor_a,r_squared");
            for r in &rows {
                let _ = writeln!(
                    csv_text,
                    "{},{},{},{},{}",
                    r.replication,
                    r.degenerate as u8,
                    r.rate_per_mile.map_or(String::new(), |v| format!("{v:.10}")),
                    r.prefactor_a.map_or(String::new(), |v| format!("{v:.10}")),
                    r.r_squared.map_or(String::new(), |v| format!("{v:.10}")),
                );
            }
            let kept: Vec<f64> = rows.iter().filter_map(|r| r.rate_per_mile).collect();
            let mean = kept.iter().sum::<f64>() / kept.len().max(1) as f64;
            let truth = scenario.rate_per_mile();
            summary = format!(
                "visits: {} replications, {} degenerate, mean rate_per_mile {:.8} (truth {:.8}, bias {:+.3}%)",
                rows.len(),
                rows.iter().filter(|r| r.degenerate).count(),
                mean,
                truth,
                100.0 * (mean - truth) / truth,
            );
        }
        ScenarioMode::Acceptances => {
            let rows =
                run_acceptance_replications(&scenario, &scenario_cfg.groups, scenario_cfg.replications)?;
            let _ = writeln!(csv_text, "replication,degenerate,geometric_mean_acceptance,stated_mean_wtp");
            for r in &rows {
                let _ = writeln!(
                    csv_text,
                    "{},{},{},{}",
                    r.replication,
                    r.degenerate as u8,
                    r.geometric_mean_acceptance
                        .map_or(String::new(), |v| format!("{v:.10}")),
                    r.stated_mean_wtp.map_or(String::new(), |v| format!("{v:.10}")),
                );
            }
            let kept: Vec<f64> = rows.iter().filter_map(|r| r.stated_mean_wtp).collect();
            let mean = kept.iter().sum::<f64>() / kept.len().max(1) as f64;
            let truth = 1.0 / scenario.true_rate_per_dollar;
            summary = format!(
                "acceptances: {} replications, {} degenerate (excluded), mean stated WTP {:.6} (truth {:.6}, bias {:+.3}%)",
                rows.len(),
                rows.iter().filter(|r| r.degenerate).count(),
                mean,
                truth,
                100.0 * (mean - truth) / truth,
            );
        }
    }

    std::fs::create_dir_all(&cli.out)?;
    std::fs::write(cli.out.join("replications.csv"), &csv_text)?;
    println!("{summary}");
    println!("wrote {}", cli.out.join("replications.csv").display());
    Ok(())
}

fn cmd_replicate_paper(cli: &Cli) -> Result<()> {
    let rep = replicate_paper()?;
    emit(cli, "replication_report", &rep.to_text(), &rep.to_structured())
}

/// Write both report forms to the output directory and print the
/// selected one.
fn emit(cli: &Cli, stem: &str, text: &str, structured: &str) -> Result<()> {
    std::fs::create_dir_all(&cli.out)?;
    std::fs::write(cli.out.join(format!("{stem}.txt")), text)?;
    std::fs::write(cli.out.join(format!("{stem}.kv")), structured)?;
    match cli.format {
        Format::Text => print!("{text}"),
        Format::Structured => print!("{structured}"),
    }
    Ok(())
}
