//! CSV layouts for evaluation outputs. Every table may be preceded by `#`
//! comment lines; readers skip them.

use super::correlation::{CorrelationHistogram, BIN_COUNT};
use super::cv::CvResult;
use super::pca_study::PcaStudy;
use super::ranking::RankingTable;
use crate::error::{Error, Result};
use crate::registry::Family;

/// `# key: value` lines.
pub fn comment_header(entries: &[(String, String)]) -> String {
    entries.iter().map(|(k, v)| format!("# {k}: {v}\n")).collect()
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(format!("csv buffer: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidArgument(e.to_string()))
}

/// One row per run: classifier, selection, K, seed, mean, sd and the per-fold
/// errors `eps_1..eps_K`.
pub fn cv_results_csv(results: &[CvResult]) -> Result<String> {
    let k = results.iter().map(|r| r.errors.len()).max().unwrap_or(0);
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    let mut header: Vec<String> = ["classifier", "fs", "k", "seed", "mu", "sigma"].iter().map(|s| s.to_string()).collect();
    header.extend((1..=k).map(|i| format!("eps_{i}")));
    w.write_record(&header)?;
    for r in results {
        let mut row = vec![
            r.classifier.clone(),
            r.selection.clone().unwrap_or_default(),
            r.k.to_string(),
            r.seed.to_string(),
            r.mean.to_string(),
            r.sd.to_string(),
        ];
        row.extend(r.errors.iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    finish(w)
}

fn parse_f64(field: &str, row: usize, column: &str) -> Result<f64> {
    field.parse().map_err(|_| Error::SchemaViolation {
        row,
        column: column.to_string(),
        message: format!("not a number: '{field}'"),
    })
}

/// Reads back [`cv_results_csv`] output.
pub fn parse_cv_results_csv(text: &str) -> Result<Vec<CvResult>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).flexible(true).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = i + 1;
        let get = |c: usize| rec.get(c).unwrap_or("");
        let k: usize = get(2).parse().map_err(|_| Error::SchemaViolation {
            row,
            column: "k".into(),
            message: "not an integer".into(),
        })?;
        let seed: u64 = get(3).parse().map_err(|_| Error::SchemaViolation {
            row,
            column: "seed".into(),
            message: "not an integer".into(),
        })?;
        let errors = (0..k).map(|f| parse_f64(get(6 + f), row, &format!("eps_{}", f + 1))).collect::<Result<Vec<_>>>()?;
        let mut r = CvResult::from_errors(get(0), Some(get(1).to_string()).filter(|s| !s.is_empty()), seed, errors);
        r.mean = parse_f64(get(4), row, "mu")?;
        r.sd = parse_f64(get(5), row, "sigma")?;
        out.push(r);
    }
    Ok(out)
}

/// Rank, classifier, accuracy per selection, mean and sd.
pub fn ranking_csv(table: &RankingTable) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["rank".to_string(), "classifier".to_string()];
    header.extend(table.selections.iter().cloned());
    header.push("mean_accuracy".into());
    header.push("sd_accuracy".into());
    w.write_record(&header)?;
    for (i, r) in table.rows.iter().enumerate() {
        let mut row = vec![(i + 1).to_string(), r.classifier.clone()];
        row.extend(r.accuracies.iter().map(f64::to_string));
        row.push(r.mean.to_string());
        row.push(r.sd.to_string());
        w.write_record(&row)?;
    }
    finish(w)
}

/// Per-family tables of mean and sd of the misclassification rate, one row per
/// classifier and a `mu`/`sigma` column pair per selection. Returned as
/// `(family group, csv)` in first-seen order.
pub fn family_tables(results: &[CvResult]) -> Result<Vec<(String, String)>> {
    let mut groups: Vec<String> = Vec::new();
    for r in results {
        let g = r.classifier.parse::<Family>().map(|f| f.group().to_string()).unwrap_or_else(|_| r.classifier.clone());
        if !groups.contains(&g) {
            groups.push(g);
        }
    }
    let mut out = Vec::new();
    for g in groups {
        let members: Vec<&CvResult> = results
            .iter()
            .filter(|r| r.classifier.parse::<Family>().map(|f| f.group().to_string()).unwrap_or_else(|_| r.classifier.clone()) == g)
            .collect();
        let mut selections: Vec<String> = Vec::new();
        let mut classifiers: Vec<String> = Vec::new();
        for r in &members {
            let s = r.selection.clone().unwrap_or_default();
            if !selections.contains(&s) {
                selections.push(s);
            }
            if !classifiers.contains(&r.classifier) {
                classifiers.push(r.classifier.clone());
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["classifier".to_string()];
        for s in &selections {
            header.push(format!("{s}_mu"));
            header.push(format!("{s}_sigma"));
        }
        w.write_record(&header)?;
        for c in &classifiers {
            let mut row = vec![c.clone()];
            for s in &selections {
                match members.iter().find(|r| &r.classifier == c && r.selection.clone().unwrap_or_default() == *s) {
                    Some(r) => {
                        row.push(r.mean.to_string());
                        row.push(r.sd.to_string());
                    }
                    None => {
                        row.push(String::new());
                        row.push(String::new());
                    }
                }
            }
            w.write_record(&row)?;
        }
        out.push((g, finish(w)?));
    }
    Ok(out)
}

/// One row per study: accuracy with 1..d components, on the raw features, and
/// the difference between all components and raw.
pub fn pca_study_csv(studies: &[PcaStudy]) -> Result<String> {
    let d = studies.iter().map(|s| s.by_components.len()).max().unwrap_or(0);
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    let raw_name = studies
        .first()
        .and_then(|s| s.selection.clone())
        .unwrap_or_else(|| "raw".to_string());
    let mut header = vec!["classifier".to_string()];
    header.extend((1..=d).map(|m| format!("PC{m}")));
    header.push(raw_name.clone());
    header.push(format!("A(PC) - A({raw_name})"));
    w.write_record(&header)?;
    for s in studies {
        let mut row = vec![s.classifier.clone()];
        row.extend(s.by_components.iter().map(|r| r.accuracy().to_string()));
        row.push(s.raw.accuracy().to_string());
        row.push(s.full_minus_raw().to_string());
        w.write_record(&row)?;
    }
    finish(w)
}

/// Bin edges, counts and shares of the correlation histogram.
pub fn histogram_csv(h: &CorrelationHistogram) -> Result<String> {
    let total: usize = h.counts.iter().sum();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["bin_lower", "bin_upper", "count", "fraction"])?;
    for i in 0..BIN_COUNT {
        let (lo, hi) = CorrelationHistogram::bin_edges(i);
        let frac = if total == 0 { 0.0 } else { h.counts[i] as f64 / total as f64 };
        w.write_record([format!("{lo:.1}"), format!("{hi:.1}"), h.counts[i].to_string(), frac.to_string()])?;
    }
    finish(w)
}
