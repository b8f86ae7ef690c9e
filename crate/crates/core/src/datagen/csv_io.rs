//! Panel CSV: a header row, then one row per (counterparty, date).
//!
//! The eighteen columns of [`PANEL_COLUMNS`] come first; `s` may be empty
//! for a missing rate, or absent altogether. Four optional trailing columns
//! `region,sector,rating,seniority` carry the categories used by the
//! baselines. Lines starting with `#` are comments.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use chrono::NaiveDate;

use crate::domain::{Categories, MarketPanel, PanelRecord, RawFeature};
use crate::error::{Error, Result};

pub const PANEL_COLUMNS: [&str; 18] = [
    "counterparty",
    "date",
    "s",
    "pd_6m",
    "pd_1y",
    "pd_2y",
    "pd_3y",
    "pd_4y",
    "pd_5y",
    "iv_3m",
    "iv_6m",
    "iv_12m",
    "iv_18m",
    "hv_1m",
    "hv_2m",
    "hv_3m",
    "hv_4m",
    "hv_6m",
];

struct Layout {
    counterparty: usize,
    date: usize,
    s: Option<usize>,
    market: [usize; 15],
    categories: Option<[usize; 4]>,
}

fn schema(row: usize, column: &str, message: impl Into<String>) -> Error {
    Error::SchemaViolation {
        row,
        column: column.to_string(),
        message: message.into(),
    }
}

fn layout(header: &csv::StringRecord) -> Result<Layout> {
    let find = |name: &str| header.iter().position(|h| h.trim() == name);
    let require = |name: &str| find(name).ok_or_else(|| schema(0, name, "missing column"));
    for h in header.iter() {
        let h = h.trim();
        if !PANEL_COLUMNS.contains(&h) && !Categories::NAMES.contains(&h) {
            return Err(schema(0, h, "unknown column"));
        }
    }
    let mut market = [0; 15];
    for (slot, f) in market.iter_mut().zip(RawFeature::MARKET) {
        *slot = require(f.column_name())?;
    }
    let cats: Vec<Option<usize>> = Categories::NAMES.iter().map(|n| find(n)).collect();
    let categories = if cats.iter().all(Option::is_none) {
        None
    } else {
        let mut idx = [0; 4];
        for (k, c) in cats.iter().enumerate() {
            idx[k] = c.ok_or_else(|| schema(0, Categories::NAMES[k], "category columns must come as a set of four"))?;
        }
        Some(idx)
    };
    Ok(Layout {
        counterparty: require("counterparty")?,
        date: require("date")?,
        s: find("s"),
        market,
        categories,
    })
}

fn parse_number(row: usize, column: &str, text: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| schema(row, column, format!("'{text}' is not a number")))
}

/// Reads a panel from any reader; `row` numbers in errors count data rows from 1.
pub fn read_panel_from<R: Read>(reader: R) -> Result<MarketPanel> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(false)
        .from_reader(reader);
    let layout = layout(rdr.headers()?)?;
    let mut records = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec = rec?;
        let field = |k: usize| rec.get(k).unwrap_or("");
        let counterparty = field(layout.counterparty).trim().to_string();
        let date_text = field(layout.date).trim();
        let date = NaiveDate::parse_from_str(date_text, "%Y-%m-%d")
            .map_err(|_| schema(row, "date", format!("'{date_text}' is not an ISO-8601 date")))?;
        let s = match layout.s.map(field).map(str::trim) {
            None | Some("") => None,
            Some(text) => Some(parse_number(row, "s", text)?),
        };
        let mut market = [0.0; 15];
        for ((slot, &k), f) in market.iter_mut().zip(&layout.market).zip(RawFeature::MARKET) {
            *slot = parse_number(row, f.column_name(), field(k))?;
        }
        let categories = match layout.categories {
            None => None,
            Some(idx) => {
                let v: Vec<String> = idx.iter().map(|&k| field(k).trim().to_string()).collect();
                if let Some(k) = v.iter().position(String::is_empty) {
                    return Err(schema(row, Categories::NAMES[k], "empty category"));
                }
                let [region, sector, rating, seniority]: [String; 4] = v.try_into().expect("four columns");
                Some(Categories {
                    region,
                    sector,
                    rating,
                    seniority,
                })
            }
        };
        records.push(PanelRecord {
            counterparty,
            date,
            s,
            market,
            categories,
        });
    }
    MarketPanel::from_records(records)
}

pub fn read_panel(path: impl AsRef<Path>) -> Result<MarketPanel> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_panel_from(std::io::BufReader::new(file))
}

/// Writes `panel`, preceded by `comments` as `# ` lines. Numbers use the
/// shortest representation that parses back to the same `f64`.
pub fn write_panel_to<W: Write>(writer: W, panel: &MarketPanel, comments: &str) -> Result<()> {
    let mut writer = writer;
    let io = |e: std::io::Error| Error::Csv(e.into());
    writer.write_all(comments.as_bytes()).map_err(io)?;
    let with_categories = panel.has_categories();
    let mut wtr = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = PANEL_COLUMNS.to_vec();
    if with_categories {
        header.extend(Categories::NAMES);
    }
    wtr.write_record(&header)?;
    for row in panel.rows() {
        let mut fields = vec![
            panel.counterparties()[row.counterparty].clone(),
            row.date.format("%Y-%m-%d").to_string(),
            row.s.map(|s| s.to_string()).unwrap_or_default(),
        ];
        fields.extend(row.market.iter().map(f64::to_string));
        if with_categories {
            let c = panel.categories(row.counterparty).expect("checked above");
            fields.extend(c.levels().iter().map(|s| s.to_string()));
        }
        wtr.write_record(&fields)?;
    }
    wtr.flush().map_err(io)?;
    Ok(())
}

pub fn write_panel(panel: &MarketPanel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_panel_to(BufWriter::new(file), panel, "")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{generate_panel, GeneratorConfig};
    use crate::domain::{build_dataset, FeatureSelection};

    const HEADER: &str = "counterparty,date,s,pd_6m,pd_1y,pd_2y,pd_3y,pd_4y,pd_5y,iv_3m,iv_6m,iv_12m,iv_18m,hv_1m,hv_2m,hv_3m,hv_4m,hv_6m";

    #[test]
    fn round_trip_through_a_file() {
        let panel = generate_panel(&GeneratorConfig::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("panel.csv");
        write_panel(&panel, &path).unwrap();
        let back = read_panel(&path).unwrap();
        assert_eq!(back.counterparties(), panel.counterparties());
        for (a, b) in back.rows().iter().zip(panel.rows()) {
            assert_eq!(a.date, b.date);
            assert_eq!(a.s.is_some(), b.s.is_some());
            if let (Some(x), Some(y)) = (a.s, b.s) {
                assert!((x - y).abs() <= 1e-12 * y);
            }
            for (x, y) in a.market.iter().zip(&b.market) {
                assert!((x - y).abs() <= 1e-12 * y.abs());
            }
        }
        assert_eq!(back, panel);
    }

    #[test]
    fn comments_are_skipped() {
        let panel = generate_panel(&GeneratorConfig { n_days: 3, ..Default::default() }).unwrap();
        let mut buf = Vec::new();
        write_panel_to(&mut buf, &panel, "# seed: 0\n# n_days: 3\n").unwrap();
        assert_eq!(read_panel_from(&buf[..]).unwrap(), panel);
    }

    #[test]
    fn probability_above_one_is_rejected() {
        let text = format!("{HEADER}\nA,2008-07-01,100,0.01,0.02,0.03,0.04,0.05,0.06,0.3,0.3,0.3,0.3,0.2,0.2,0.2,0.2,0.2\nA,2008-07-02,100,0.01,0.02,1.5,0.04,0.05,0.06,0.3,0.3,0.3,0.3,0.2,0.2,0.2,0.2,0.2\n");
        match read_panel_from(text.as_bytes()) {
            Err(Error::RangeViolation { row, column, value }) => {
                assert_eq!((row, column.as_str(), value), (2, "pd_2y", 1.5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_rate_column_loads_as_missing() {
        let header = HEADER.replace(",s,", ",");
        let text = format!("{header}\nA,2008-07-01,0.01,0.02,0.03,0.04,0.05,0.06,0.3,0.3,0.3,0.3,0.2,0.2,0.2,0.2,0.2\nB,2008-07-01,0.02,0.03,0.04,0.05,0.06,0.07,0.4,0.4,0.4,0.4,0.3,0.3,0.3,0.3,0.3\n");
        let panel = read_panel_from(text.as_bytes()).unwrap();
        assert!(panel.rows().iter().all(|r| r.s.is_none()));
        assert!(matches!(
            build_dataset(&panel, FeatureSelection::Fs1),
            Err(Error::MissingFiveYearRate(_))
        ));
        assert!(build_dataset(&panel, FeatureSelection::Fs4).is_ok());
    }

    #[test]
    fn schema_errors_name_row_and_column() {
        let text = format!("{HEADER}\nA,2008-07-01,abc,0.01,0.02,0.03,0.04,0.05,0.06,0.3,0.3,0.3,0.3,0.2,0.2,0.2,0.2,0.2\n");
        match read_panel_from(text.as_bytes()) {
            Err(Error::SchemaViolation { row, column, .. }) => assert_eq!((row, column.as_str()), (1, "s")),
            other => panic!("{other:?}"),
        }
        let text = format!("{HEADER}\nA,07/01/2008,1,0.01,0.02,0.03,0.04,0.05,0.06,0.3,0.3,0.3,0.3,0.2,0.2,0.2,0.2,0.2\n");
        assert!(matches!(read_panel_from(text.as_bytes()), Err(Error::SchemaViolation { row: 1, .. })));
        let no_pd = HEADER.replace(",pd_3y", "");
        let text = format!("{no_pd}\n");
        match read_panel_from(text.as_bytes()) {
            Err(Error::SchemaViolation { column, .. }) => assert_eq!(column, "pd_3y"),
            other => panic!("{other:?}"),
        }
        let text = format!("{HEADER},region\n");
        assert!(matches!(read_panel_from(text.as_bytes()), Err(Error::SchemaViolation { .. })));
        assert!(matches!(read_panel("/nonexistent/panel.csv"), Err(Error::Io { .. })));
    }
}
