//! Acceptance suite: every headline result of the pilot-study
//! replication, checked at its pinned tolerance. One pass/fail line is
//! printed per criterion.

use travelcost::estimation::{
    fit_exponential, stated_rate_from_groups, stated_rate_weighted, stated_wtp, to_dollar_scale,
    AcceptanceGroup, BandObservation, WeightedAcceptance,
};
use travelcost::ingestion::{band_observations, parse_bands, CostSchedule};
use travelcost::model::ExponentialDemand;
use travelcost::replicate::{published, replicate_paper, POPULATION_CSV};
use travelcost::simulator::{
    run_acceptance_replications, run_visit_replications, SyntheticScenario,
};
use travelcost::valuation::{
    growth_factor, revealed_total, stated_total, turnover_years, DemographicParams,
};

struct Criterion {
    name: &'static str,
    checks: Vec<(String, bool)>,
}

impl Criterion {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checks: Vec::new(),
        }
    }

    fn within(&mut self, label: &str, value: f64, expected: f64, tolerance: f64) -> &mut Self {
        let ok = (value - expected).abs() <= tolerance;
        self.checks.push((
            format!("{label}: {value:.8} vs {expected} ± {tolerance}"),
            ok,
        ));
        self
    }

    fn require(&mut self, label: &str, ok: bool) -> &mut Self {
        self.checks.push((label.to_string(), ok));
        self
    }

    fn finish(&self) {
        let all_ok = self.checks.iter().all(|(_, ok)| *ok);
        println!(
            "criterion {}: {}",
            self.name,
            if all_ok { "PASS" } else { "FAIL" }
        );
        for (label, ok) in &self.checks {
            println!("    [{}] {label}", if *ok { "ok" } else { "FAIL" });
        }
        assert!(all_ok, "criterion {} failed", self.name);
    }
}

fn table1_observations() -> Vec<BandObservation> {
    let bands = parse_bands(POPULATION_CSV).unwrap();
    band_observations(&bands, 78_160.0 / 172.0).unwrap()
}

fn section6_groups() -> Vec<AcceptanceGroup> {
    [(121u32, 82u32), (14, 10), (14, 9), (9, 4), (5, 4), (4, 3)]
        .iter()
        .map(|&(n, a)| AcceptanceGroup::new(n, a, published::MEAN_DELTA).unwrap())
        .collect()
}

#[test]
fn criterion_1_table1_fit() {
    let (fit, diag) = fit_exponential(&table1_observations()).unwrap();
    let mut c = Criterion::new("1 (Table 1 fit)");
    c.within("r_squared", diag.r_squared, 0.87734, 0.002)
        .within("p_value", diag.p_value, 0.00589, 0.0005)
        .within("rate_per_mile", fit.rate_per_mile, 0.013565, 2e-4)
        .within("prefactor_a", fit.prefactor_a, 0.0211, 3e-4)
        // frozen hand-OLS oracle on the six log-probability points
        .within("rate vs oracle", fit.rate_per_mile, 0.013564302705107148, 1e-12)
        .within("prefactor vs oracle", fit.prefactor_a, 0.021099083259352912, 1e-12)
        .within("r_squared vs oracle", diag.r_squared, 0.8773381117891439, 1e-12)
        .finish();
}

#[test]
fn criterion_2_dollar_scale() {
    let (fit, _) = fit_exponential(&table1_observations()).unwrap();
    let model = to_dollar_scale(&fit, &CostSchedule::san_marcos()).unwrap();
    Criterion::new("2 (dollar-scale model)")
        .within("rate_per_dollar", model.rate_per_dollar(), 0.027129, 3e-4)
        .within("vs published", model.rate_per_dollar(), 0.0271286, 3e-4)
        .finish();
}

#[test]
fn criterion_3_rwtp_totals() {
    let model = ExponentialDemand::from_dollar_rate(
        published::PREFACTOR_A,
        published::RATE_PER_DOLLAR,
        published::COST_PER_MILE,
    )
    .unwrap();
    let demo = DemographicParams::san_marcos();
    let (total, with_time) = revealed_total(&model, &demo, 1.2).unwrap();
    let quotient = published::PREFACTOR_A / published::RATE_PER_DOLLAR;
    let mut c = Criterion::new("3 (per-capita and total RWTP)");
    c.require(
        "per_capita equals the A/lambda quotient exactly",
        model.per_capita_rwtp() == quotient,
    )
    .within("per_capita", model.per_capita_rwtp(), 0.77946254901, 1e-9)
    .within("rwtp_total_millions", total / 1e6, 14.737, 0.01)
    .within("rwtp_with_time_millions", with_time / 1e6, 17.684, 0.01)
    .finish();
}

#[test]
fn criterion_4_stated_side() {
    let est = stated_rate_from_groups(&section6_groups()).unwrap();
    let wtp = stated_wtp(published::MEAN_DELTA, est.geometric_mean_acceptance).unwrap();
    let annual = stated_total(wtp, published::SEASON_VISITORS).unwrap();
    Criterion::new("4 (stated side)")
        .within("geometric_mean", est.geometric_mean_acceptance, 0.6673615, 1e-6)
        .within("swtp_per_visitor", wtp, 11.83, 0.01)
        .within(
            "vs published (2%, documented gap)",
            wtp,
            published::STATED_WTP,
            0.02 * published::STATED_WTP,
        )
        .within("annual vs published (2%)", annual, 935_803.16, 0.02 * 935_803.16)
        .finish();
}

#[test]
fn criterion_5_demographics() {
    let demo = DemographicParams::san_marcos();
    Criterion::new("5 (demographics)")
        .within("growth_factor", growth_factor(&demo), 1.21840, 1e-4)
        .within("turnover_years", turnover_years(&demo).unwrap(), 18.58, 0.05)
        .finish();
}

#[test]
fn criterion_6_reconciliation() {
    let rep = replicate_paper().unwrap();
    Criterion::new("6 (reconciliation)")
        .within(
            "swtp_over_turnover_millions",
            rep.reconciliation.swtp_over_turnover / 1e6,
            17.41,
            0.35,
        )
        .within("ratio", rep.reconciliation.ratio_swtp_rwtp, 0.985, 0.02)
        .within("sd_fraction", rep.reconciliation.sd_fraction, 0.236, 0.003)
        .within("diff_in_sd_units", rep.reconciliation.diff_in_sd_units, 0.065, 0.01)
        .finish();
}

#[test]
fn criterion_7_visitor_counting() {
    let rep = replicate_paper().unwrap();
    Criterion::new("7 (visitor counting)")
        .within("weekday_rate", rep.weekday_rate, 29.3, 0.1)
        .within("weekend_rate", rep.weekend_rate, 93.0, 0.2)
        .within(
            "documented-procedure season total",
            rep.season_total_documented,
            48_945.0,
            10.0,
        )
        .within("published override in use", rep.season_total_published, 78_160.0, 1e-9)
        .finish();
}

#[test]
fn criterion_8_property_suites() {
    let mut c = Criterion::new("8 (property suites)");

    // memorylessness and the conditional identity over a parameter grid
    let mut worst_memoryless = 0.0f64;
    let mut worst_conditional = 0.0f64;
    for &lambda in &[0.0271286f64, 0.0846, 0.5, 1.0] {
        let m = ExponentialDemand::from_dollar_rate(0.02, lambda, 1.0).unwrap();
        for i in 0..=20 {
            for j in 0..=20 {
                let t = i as f64 * 0.5 / lambda;
                let z = j as f64 * 0.5 / lambda;
                let s = m.survival(t).unwrap();
                let rel = (m.survival(t + z).unwrap() - s * m.survival(z).unwrap()).abs()
                    / (s * m.survival(z).unwrap()).max(f64::MIN_POSITIVE);
                worst_memoryless = worst_memoryless.max(rel);
                let cond = (s - m.survival(t + z).unwrap()) / s;
                let expect = m.cdf(z).unwrap();
                let diff = (cond - expect).abs() / expect.max(1e-12);
                if j > 0 {
                    worst_conditional = worst_conditional.max(diff);
                }
            }
        }
    }
    c.require(
        &format!("memorylessness <= 1e-12 (worst {worst_memoryless:.2e})"),
        worst_memoryless <= 1e-12,
    );
    c.require(
        &format!("conditional identity <= 1e-12 (worst {worst_conditional:.2e})"),
        worst_conditional <= 1e-12,
    );

    // exact recovery of 1/lambda from synthetic groups
    let mut worst_recovery = 0.0f64;
    for &lambda in &[0.02f64, 0.0846, 0.31] {
        let entries: Vec<WeightedAcceptance> = [(121.0, 2.1), (14.0, 7.8), (9.5, 13.5), (0.7, 19.2)]
            .iter()
            .map(|&(w, d)| WeightedAcceptance {
                weight: w,
                acceptance_probability: (-lambda * d).exp(),
                delta_cost: d,
            })
            .collect();
        let est = stated_rate_weighted(&entries).unwrap();
        let truth = 1.0 / lambda;
        worst_recovery = worst_recovery.max((est.stated_mean_wtp - truth).abs() / truth);
    }
    c.require(
        &format!("geometric-mean identity recovery <= 1e-10 (worst {worst_recovery:.2e})"),
        worst_recovery <= 1e-10,
    );

    // scale covariance of the fit
    let base = table1_observations();
    let (f0, d0) = fit_exponential(&base).unwrap();
    let mut scale_ok = true;
    for &s in &[0.25f64, 2.0, 7.5] {
        let scaled: Vec<BandObservation> = base
            .iter()
            .map(|o| BandObservation::new(o.distance_midpoint * s, o.visit_probability).unwrap())
            .collect();
        let (f1, d1) = fit_exponential(&scaled).unwrap();
        scale_ok &= (f1.rate_per_mile - f0.rate_per_mile / s).abs() / f0.rate_per_mile <= 1e-9;
        scale_ok &= (f1.prefactor_a - f0.prefactor_a).abs() / f0.prefactor_a <= 1e-9;
        scale_ok &= (d1.r_squared - d0.r_squared).abs() <= 1e-9;
    }
    c.require("fit scale covariance", scale_ok);

    // Monte-Carlo recovery of the rate within 3 standard errors,
    // 10^4 replications at two seeds
    let true_rate_per_dollar = 0.0272;
    let schedule = CostSchedule::san_marcos();
    for &seed in &[1u64, 2] {
        let scenario = SyntheticScenario {
            true_rate_per_dollar,
            true_prefactor: 0.02,
            band_layout: [30.0, 110.0, 150.0, 190.0, 230.0, 270.0]
                .iter()
                .map(|&m| (m, 10_000_000u64))
                .collect(),
            cost_schedule: schedule,
            price_increase: 1.0,
            sampling_fraction: 1.0,
            seed,
        };
        let rows = run_visit_replications(&scenario, 10_000).unwrap();
        let rates: Vec<f64> = rows.iter().filter_map(|r| r.rate_per_mile).collect();
        let n = rates.len() as f64;
        let mean = rates.iter().sum::<f64>() / n;
        let var = rates.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        let truth = scenario.rate_per_mile();
        c.require(
            &format!(
                "rate recovery seed {seed}: |{mean:.8} - {truth:.8}| = {:.2e} <= 3se = {:.2e}",
                (mean - truth).abs(),
                3.0 * se
            ),
            (mean - truth).abs() <= 3.0 * se,
        );
    }

    // stated-side Monte-Carlo bias below 2% of truth
    let lambda = 0.0846;
    for &seed in &[1u64, 2] {
        let scenario = SyntheticScenario {
            true_rate_per_dollar: lambda,
            true_prefactor: 0.02,
            band_layout: vec![(30.0, 1000)],
            cost_schedule: schedule,
            price_increase: 1.0,
            sampling_fraction: 1.0,
            seed,
        };
        let groups: Vec<(u32, f64)> = [121u32, 14, 14, 9, 5, 4]
            .iter()
            .map(|&n| (n, published::MEAN_DELTA))
            .collect();
        let rows = run_acceptance_replications(&scenario, &groups, 10_000).unwrap();
        let kept: Vec<f64> = rows.iter().filter_map(|r| r.stated_mean_wtp).collect();
        let mean = kept.iter().sum::<f64>() / kept.len() as f64;
        let truth = 1.0 / lambda;
        let bias = (mean - truth).abs() / truth;
        c.require(
            &format!(
                "stated recovery seed {seed}: bias {:.3}% < 2% ({} degenerate excluded)",
                100.0 * bias,
                rows.iter().filter(|r| r.degenerate).count()
            ),
            bias < 0.02,
        );
    }

    c.finish();
}
