use super::cv::{mean_and_population_sd, CvResult};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RankingRow {
    pub classifier: String,
    /// Accuracy per selection, in the order of [`RankingTable::selections`].
    pub accuracies: Vec<f64>,
    pub mean: f64,
    /// Population standard deviation over selections.
    pub sd: f64,
}

/// Classifiers ordered by mean accuracy over feature selections.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingTable {
    pub selections: Vec<String>,
    pub rows: Vec<RankingRow>,
}

impl RankingTable {
    /// 1-based rank of `classifier`, if present.
    pub fn rank_of(&self, classifier: &str) -> Option<usize> {
        self.rows.iter().position(|r| r.classifier == classifier).map(|p| p + 1)
    }

    pub fn row(&self, classifier: &str) -> Option<&RankingRow> {
        self.rows.iter().find(|r| r.classifier == classifier)
    }
}

fn selection_key(s: &str) -> (u32, String) {
    let n = s.strip_prefix("FS").and_then(|v| v.parse().ok()).unwrap_or(u32::MAX);
    (n, s.to_string())
}

/// Accuracy is `1 - mean error`. Rows are sorted by mean accuracy, highest
/// first, then by lower spread; remaining ties keep first-seen order.
pub fn rank_classifiers(results: &[CvResult]) -> Result<RankingTable> {
    let mut selections: Vec<String> = Vec::new();
    let mut classifiers: Vec<String> = Vec::new();
    for r in results {
        let s = r.selection.clone().unwrap_or_default();
        if !selections.contains(&s) {
            selections.push(s);
        }
        if !classifiers.contains(&r.classifier) {
            classifiers.push(r.classifier.clone());
        }
    }
    selections.sort_by_key(|s| selection_key(s));
    let mut rows = Vec::with_capacity(classifiers.len());
    for c in classifiers {
        let accuracies = selections
            .iter()
            .map(|s| {
                results
                    .iter()
                    .find(|r| r.classifier == c && r.selection.clone().unwrap_or_default() == *s)
                    .map(CvResult::accuracy)
                    .ok_or_else(|| Error::MissingCell {
                        classifier: c.clone(),
                        feature_selection: s.clone(),
                    })
            })
            .collect::<Result<Vec<f64>>>()?;
        let (mean, sd) = mean_and_population_sd(&accuracies);
        rows.push(RankingRow {
            classifier: c,
            accuracies,
            mean,
            sd,
        });
    }
    rows.sort_by(|a, b| b.mean.total_cmp(&a.mean).then(a.sd.total_cmp(&b.sd)));
    Ok(RankingTable { selections, rows })
}
