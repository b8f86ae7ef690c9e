//! One-factor panel generator.
//!
//! Every counterparty `i`, day `t` and raw variable `v` gets a latent value
//!
//! ```text
//! z[i,t,v] = spacing * m[i,v] * g[i,v]
//!          + rho * (Q * q[i] + beta[i] * F[t])
//!          + sigma * sqrt(1 - rho^2) * e[i,t,v]
//! ```
//!
//! * `g[i,v]` is a standard normal signature drawn once per counterparty and
//!   variable. The mask `m[i,v]` is 1 for a random 30% of the variables and
//!   0.2 otherwise, so each counterparty stands out on a few variables only.
//! * `q[i]` is a credit quality spread evenly over `[-1, 1]` with weight `Q`.
//!   It shifts all sixteen variables together.
//! * `F[t]` is the common market factor: a standardized drift over the window
//!   plus daily Gaussian shocks. Its loading `beta[i] = 1 + q[i] / 2` makes
//!   weaker names more sensitive to the market.
//! * `e` is idiosyncratic noise.
//!
//! Quality and market both enter through `rho`, so `rho = 0` leaves only the
//! signatures and the noise and the variables decorrelate.
//!
//! Latents are mapped to market units: spreads and volatilities through
//! `level * exp(scale * z)`, and PDs through a cumulative hazard
//! `PD(T_k) = 1 - exp(-sum_{j<=k} h_j dt_j)` with positive hazards
//! `h_j = lambda_j * exp(z_j)`, which makes the PD term structure
//! non-decreasing on every row. The exponential maps give the skewed,
//! level-dependent spreads typical of credit data.

use chrono::{Duration, NaiveDate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::domain::{Categories, MarketPanel, PanelRecord};
use crate::error::{Error, Result};

/// Weight `Q` of the credit quality.
const QUALITY_WEIGHT: f64 = 4.0;
/// Spread of the market loadings around 1 across the quality range.
const LOADING_DISPERSION: f64 = 0.5;
/// Share of the market factor's standard deviation due to the drift.
const DRIFT_SHARE: f64 = 0.8;
/// Fraction of variables on which a signature is at full strength, and the
/// strength elsewhere.
const SIGNATURE_DENSITY: f64 = 0.3;
const FAINT_SIGNATURE: f64 = 0.2;
/// Share of its own signature a nonobservable adds to the one it borrows.
const OWN_SIGNATURE_SHARE: f64 = 0.25;

/// Log-scales of the exponential maps.
const SPREAD_SCALE: f64 = 1.0;
const VOL_SCALE: f64 = 0.6;
/// Median 5-year spread in basis points.
const SPREAD_LEVEL: f64 = 150.0;
/// Median hazard rate per PD segment, and the segment lengths in years.
const HAZARD_LEVELS: [f64; 6] = [0.0025, 0.003, 0.00375, 0.0045, 0.005, 0.0055];
const SEGMENT_YEARS: [f64; 6] = [0.5, 0.5, 1.0, 1.0, 1.0, 1.0];
/// Median implied (3m, 6m, 12m, 18m) and historical (1m..6m) volatilities.
const IMPLIED_VOL_LEVELS: [f64; 4] = [0.42, 0.40, 0.38, 0.37];
const HISTORICAL_VOL_LEVELS: [f64; 5] = [0.36, 0.35, 0.34, 0.34, 0.33];

const REGIONS: [&str; 2] = ["Americas", "Europe"];
const SECTORS: [&str; 3] = ["Banks", "Insurance", "Brokers"];
const RATINGS: [&str; 2] = ["A", "BBB"];
const SENIORITY: &str = "SNRFOR";

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    /// Number of observable counterparties (classes).
    pub n_counterparties: usize,
    /// Counterparties generated without a 5-year rate.
    pub n_nonobservables: usize,
    pub n_days: usize,
    /// Last observation date; the panel covers `n_days` consecutive days up to it.
    pub end_date: NaiveDate,
    /// Loading `rho` on the common components, in `[0, 1)`.
    pub factor_loading: f64,
    /// Scale `sigma` of the idiosyncratic noise.
    pub idiosyncratic_scale: f64,
    /// Scale of the counterparty signatures; larger is easier to classify.
    pub base_spacing: f64,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            n_counterparties: 8,
            n_nonobservables: 4,
            n_days: 100,
            end_date: NaiveDate::from_ymd_opt(2008, 9, 14).expect("valid date"),
            factor_loading: 0.95,
            idiosyncratic_scale: 0.5,
            base_spacing: 0.5,
            seed: 0,
        }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_counterparties < 2 {
            return Err(Error::BadConfig("need at least 2 observable counterparties".into()));
        }
        if self.n_days == 0 {
            return Err(Error::BadConfig("n_days must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.factor_loading) {
            return Err(Error::BadConfig(format!(
                "factor loading must lie in [0, 1), got {}",
                self.factor_loading
            )));
        }
        for (name, v) in [
            ("idiosyncratic scale", self.idiosyncratic_scale),
            ("base spacing", self.base_spacing),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::BadConfig(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Categories of observable `i`. Region, sector and rating cycle with
/// periods 2, 3 and 6, so the dummy design has full rank once `N >= 6`.
fn observable_categories(i: usize) -> Categories {
    Categories {
        region: REGIONS[i % 2].to_string(),
        sector: SECTORS[i % 3].to_string(),
        rating: RATINGS[(i / 3) % 2].to_string(),
        seniority: SENIORITY.to_string(),
    }
}

fn name_width(n: usize) -> usize {
    n.max(1).to_string().len().max(2)
}

/// Maps one latent row (16 values in [`crate::domain::RawFeature::ALL`] order)
/// into market units.
fn to_market(z: &[f64; 16]) -> (f64, [f64; 15]) {
    let s = SPREAD_LEVEL * (SPREAD_SCALE * z[0]).exp();
    let mut market = [0.0; 15];
    let mut cumulative = 0.0;
    for k in 0..6 {
        cumulative += HAZARD_LEVELS[k] * z[1 + k].exp() * SEGMENT_YEARS[k];
        market[k] = -(-cumulative).exp_m1();
    }
    for k in 0..4 {
        market[6 + k] = IMPLIED_VOL_LEVELS[k] * (VOL_SCALE * z[7 + k]).exp();
    }
    for k in 0..5 {
        market[10 + k] = HISTORICAL_VOL_LEVELS[k] * (VOL_SCALE * z[11 + k]).exp();
    }
    (s, market)
}

/// Market factor: a linear drift standardized to unit variance over the
/// window, mixed with independent daily shocks so the total has unit scale.
fn market_factor(n_days: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let shock_share = (1.0 - DRIFT_SHARE * DRIFT_SHARE).sqrt();
    (0..n_days)
        .map(|t| {
            let drift = if n_days > 1 {
                (t as f64 / (n_days - 1) as f64 - 0.5) * 12f64.sqrt()
            } else {
                0.0
            };
            let shock: f64 = rng.sample(StandardNormal);
            DRIFT_SHARE * drift + shock_share * shock
        })
        .collect()
}

/// Per-counterparty constants of the latent model.
struct Profile {
    /// `spacing * m * g` for each variable.
    base: [f64; 16],
    quality: f64,
    loading: f64,
}

/// Generates a panel of `n_counterparties` observables (`CP01`, `CP02`, ...)
/// and `n_nonobservables` counterparties without 5-year rates (`NX01`, ...).
///
/// Each random component has its own ChaCha stream, so for instance changing
/// `n_days` leaves the counterparty signatures untouched.
///
/// Nonobservables come in pairs sharing the category cell of one observable,
/// while nonobservable `j` borrows the quality and signature of observable
/// `j mod N`. Members of one cell therefore look like different observables.
pub fn generate_panel(config: &GeneratorConfig) -> Result<MarketPanel> {
    config.validate()?;
    let n_obs = config.n_counterparties;
    let n_all = n_obs + config.n_nonobservables;
    let rho = config.factor_loading;
    let noise = config.idiosyncratic_scale * (1.0 - rho * rho).sqrt();

    let mut base_rng = ChaCha8Rng::seed_from_u64(config.seed);
    base_rng.set_stream(0);
    let signatures: Vec<[f64; 16]> = (0..n_all)
        .map(|_| {
            std::array::from_fn(|_| {
                let g: f64 = base_rng.sample(StandardNormal);
                let strength = if base_rng.random::<f64>() < SIGNATURE_DENSITY { 1.0 } else { FAINT_SIGNATURE };
                config.base_spacing * strength * g
            })
        })
        .collect();
    let quality = |i: usize| 2.0 * i as f64 / (n_obs - 1) as f64 - 1.0;
    let profiles: Vec<Profile> = (0..n_all)
        .map(|i| {
            let (twin, base) = if i < n_obs {
                (i, signatures[i])
            } else {
                let twin = (i - n_obs) % n_obs;
                (twin, std::array::from_fn(|v| signatures[twin][v] + OWN_SIGNATURE_SHARE * signatures[i][v]))
            };
            Profile {
                base,
                quality: QUALITY_WEIGHT * quality(twin),
                loading: 1.0 + LOADING_DISPERSION * quality(twin),
            }
        })
        .collect();

    let mut factor_rng = ChaCha8Rng::seed_from_u64(config.seed);
    factor_rng.set_stream(1);
    let factor = market_factor(config.n_days, &mut factor_rng);

    let first_day = config.end_date - Duration::days(config.n_days as i64 - 1);
    let w_obs = name_width(n_obs);
    let w_non = name_width(config.n_nonobservables);
    let mut records = Vec::with_capacity(n_all * config.n_days);
    for (i, profile) in profiles.iter().enumerate() {
        let (name, categories, observable) = if i < n_obs {
            (format!("CP{:0w$}", i + 1, w = w_obs), observable_categories(i), true)
        } else {
            let j = i - n_obs;
            (
                format!("NX{:0w$}", j + 1, w = w_non),
                observable_categories((j / 2) % n_obs),
                false,
            )
        };
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(2 + i as u64);
        for (t, f) in factor.iter().enumerate() {
            let common = rho * (profile.quality + profile.loading * f);
            let z: [f64; 16] = std::array::from_fn(|v| {
                let e: f64 = rng.sample(StandardNormal);
                profile.base[v] + common + noise * e
            });
            let (s, market) = to_market(&z);
            records.push(PanelRecord {
                counterparty: name.clone(),
                date: first_day + Duration::days(t as i64),
                s: observable.then_some(s),
                market,
                categories: Some(categories.clone()),
            });
        }
    }
    MarketPanel::from_records(records)
}
