//! Side-by-side proxies for the nonobservable counterparties of a panel.

use crate::baselines::{curve_mapping_proxy, fit_cross_sectional, BucketStatistic, CdsContractRecord};
use crate::domain::{build_dataset, impute_five_year_rate, FeatureSelection, MarketPanel, TrainedClassifier};
use crate::error::{Error, Result};
use crate::registry::{ClassifierSpec, Learner};

/// Proxies for one nonobservable, all taken on the last panel date.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineRow {
    pub counterparty: String,
    pub categories: [String; 4],
    /// Bucket statistic over the observables of the same category cell.
    pub curve_mapping: f64,
    /// Cross-sectional regression prediction for the category cell.
    pub cross_sectional: f64,
    /// Observable chosen by majority vote of the daily classifications.
    pub proxy: String,
    /// 5-year rate of `proxy` on the last date.
    pub proxy_rate: f64,
    /// Share of days voting for `proxy`.
    pub vote_share: f64,
}

/// Curve mapping and the cross-sectional regression use the observables'
/// rates on the last date. The classifier is trained on every observable
/// day and then classifies every day of each nonobservable.
pub fn baseline_table(
    panel: &MarketPanel,
    statistic: BucketStatistic,
    spec: &ClassifierSpec,
    selection: FeatureSelection,
    seed: u64,
) -> Result<Vec<BaselineRow>> {
    if !panel.has_categories() {
        return Err(Error::MissingColumn("region".into()));
    }
    let observable: Vec<bool> = (0..panel.counterparties().len()).map(|c| panel.is_observable(c)).collect();
    if !observable.contains(&false) {
        return Err(Error::InvalidArgument("panel has no nonobservable counterparty".into()));
    }
    let last = *panel.dates().last().ok_or(Error::EmptyTrainingSet)?;

    let latest: Vec<(usize, f64)> = panel
        .rows()
        .iter()
        .filter(|r| r.date == last && observable[r.counterparty])
        .map(|r| (r.counterparty, r.s.expect("observable rows are quoted")))
        .collect();
    let contracts: Vec<CdsContractRecord> = latest
        .iter()
        .map(|&(c, s)| CdsContractRecord {
            spread: s,
            categories: panel.categories(c).expect("checked above").clone(),
        })
        .collect();
    let regression = fit_cross_sectional(&contracts)?;

    let observables = panel.observables();
    let train = build_dataset(&observables, selection)?;
    let model = spec.fit(&train, seed)?;
    let features = if selection.uses_five_year_rate() {
        impute_five_year_rate(panel, FeatureSelection::Fs4)?
    } else {
        panel.clone()
    };

    let mut out = Vec::new();
    for (c, name) in panel.counterparties().iter().enumerate() {
        if observable[c] {
            continue;
        }
        let cats = panel.categories(c).expect("checked above");
        let bucket: Vec<f64> = latest
            .iter()
            .filter(|&&(o, _)| panel.categories(o) == Some(cats))
            .map(|&(_, s)| s)
            .collect();
        let mut votes = vec![0usize; train.n_classes()];
        let mut days = 0usize;
        for row in features.rows_of(c) {
            let x = selection
                .columns()
                .iter()
                .map(|&f| row.value(f))
                .collect::<Option<Vec<f64>>>()
                .ok_or_else(|| Error::MissingFiveYearRate(selection.label().to_string()))?;
            votes[model.classify(&x)?] += 1;
            days += 1;
        }
        // first maximum, so ties go to the lowest class index
        let winner = (0..votes.len()).fold(0, |best, j| if votes[j] > votes[best] { j } else { best });
        let proxy = train.class_names()[winner].clone();
        let proxy_index = panel
            .counterparties()
            .iter()
            .position(|n| *n == proxy)
            .expect("class names come from the panel");
        let proxy_rate = latest
            .iter()
            .find(|&&(o, _)| o == proxy_index)
            .map(|&(_, s)| s)
            .ok_or_else(|| Error::InvalidArgument(format!("{proxy} has no quote on {last}")))?;
        out.push(BaselineRow {
            counterparty: name.clone(),
            categories: cats.levels().map(str::to_string),
            curve_mapping: curve_mapping_proxy(&bucket, statistic)?,
            cross_sectional: regression.predict(cats)?,
            proxy,
            proxy_rate,
            vote_share: votes[winner] as f64 / days as f64,
        });
    }
    Ok(out)
}

pub(super) fn baseline_csv(rows: &[BaselineRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "counterparty",
        "region",
        "sector",
        "rating",
        "seniority",
        "curve_mapping_bp",
        "cross_sectional_bp",
        "ml_proxy",
        "ml_proxy_bp",
        "ml_vote_share",
    ])?;
    for r in rows {
        let mut rec = vec![r.counterparty.clone()];
        rec.extend(r.categories.iter().cloned());
        rec.push(r.curve_mapping.to_string());
        rec.push(r.cross_sectional.to_string());
        rec.push(r.proxy.clone());
        rec.push(r.proxy_rate.to_string());
        rec.push(r.vote_share.to_string());
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(format!("csv buffer: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidArgument(e.to_string()))
}
