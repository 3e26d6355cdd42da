use std::fmt::Write as _;

use ndarray::Array2;

use super::{FeatureVector, RumourTimeSeries, WINDOWS};
use crate::learn::Design;
use crate::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct FeatureRow {
    pub rumour_id: String,
    /// Cumulative window index (1..=20), `None` for full-rumour rows.
    pub window: Option<usize>,
    pub values: Vec<f64>,
    pub label: bool,
}

/// A feature matrix with row identities, exported as CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureTable {
    pub catalog_version: String,
    pub names: Vec<String>,
    pub rows: Vec<FeatureRow>,
}

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("feature table has no header")]
    MissingHeader,
    #[error("feature table is empty")]
    Empty,
}

impl FeatureTable {
    fn from_vectors<'a>(
        rows: impl Iterator<Item = (&'a str, Option<usize>, &'a FeatureVector, bool)>,
    ) -> Self {
        let mut table = FeatureTable {
            catalog_version: String::new(),
            names: Vec::new(),
            rows: Vec::new(),
        };
        for (id, window, v, label) in rows {
            if table.names.is_empty() {
                table.names = v.names.clone();
                table.catalog_version = v.catalog_version.clone();
            }
            table.rows.push(FeatureRow {
                rumour_id: id.to_string(),
                window,
                values: v.values.clone(),
                label,
            });
        }
        table
    }

    /// One row per rumour from the final (full-duration) window.
    pub fn full(series: &[RumourTimeSeries]) -> Self {
        Self::from_vectors(series.iter().map(|s| (s.rumour_id.as_str(), None, s.full(), s.veracity)))
    }

    /// One row per rumour and window `k`.
    pub fn window(series: &[RumourTimeSeries], k: usize) -> Self {
        Self::from_vectors(
            series
                .iter()
                .map(|s| (s.rumour_id.as_str(), Some(k), s.window(k), s.veracity)),
        )
    }

    /// All 20 windows of every rumour.
    pub fn all_windows(series: &[RumourTimeSeries]) -> Self {
        Self::from_vectors(series.iter().flat_map(|s| {
            (1..=WINDOWS).map(move |k| (s.rumour_id.as_str(), Some(k), s.window(k), s.veracity))
        }))
    }

    pub fn labels(&self) -> Vec<bool> {
        self.rows.iter().map(|r| r.label).collect()
    }

    /// Feature matrix and labels for the learners.
    pub fn design<T: Scalar>(&self) -> Design<T> {
        let m = self.names.len();
        let x = Array2::from_shape_fn((self.rows.len(), m), |(i, j)| T::of(self.rows[i].values[j]));
        Design {
            names: self.names.clone(),
            catalog_version: self.catalog_version.clone(),
            x,
            y: self.labels(),
        }
    }

    /// CSV with header `rumour_id[,window],<feature names>,label`; a leading
    /// `# catalog_version=` comment records the catalog.
    pub fn to_csv(&self) -> String {
        let windowed = self.rows.iter().any(|r| r.window.is_some());
        let mut out = format!("# catalog_version={}\nrumour_id", self.catalog_version);
        if windowed {
            out.push_str(",window");
        }
        for n in &self.names {
            out.push(',');
            out.push_str(n);
        }
        out.push_str(",label\n");
        for r in &self.rows {
            out.push_str(&r.rumour_id);
            if windowed {
                let _ = write!(out, ",{}", r.window.unwrap_or(WINDOWS));
            }
            for v in &r.values {
                let _ = write!(out, ",{v}");
            }
            let _ = writeln!(out, ",{}", u8::from(r.label));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, TableError> {
        let mut catalog_version = String::new();
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = loop {
            match lines.next() {
                Some((_, l)) if l.starts_with('#') => {
                    if let Some(v) = l.trim_start_matches('#').trim().strip_prefix("catalog_version=") {
                        catalog_version = v.to_string();
                    }
                }
                Some(h) => break h,
                None => return Err(TableError::MissingHeader),
            }
        };
        let cols: Vec<&str> = header.split(',').collect();
        if cols.len() < 2 || cols[0] != "rumour_id" || cols[cols.len() - 1] != "label" {
            return Err(TableError::MissingHeader);
        }
        let windowed = cols.get(1) == Some(&"window");
        let first = if windowed { 2 } else { 1 };
        let names: Vec<String> = cols[first..cols.len() - 1].iter().map(|s| s.to_string()).collect();
        let mut rows = Vec::new();
        for (i, line) in lines {
            let err = |message: String| TableError::Parse { line: i + 1, message };
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != cols.len() {
                return Err(err(format!("expected {} fields, found {}", cols.len(), fields.len())));
            }
            let window = if windowed {
                Some(fields[1].parse::<usize>().map_err(|e| err(e.to_string()))?)
            } else {
                None
            };
            let values = fields[first..fields.len() - 1]
                .iter()
                .map(|f| f.parse::<f64>().map_err(|e| err(format!("{f:?}: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let label = match fields[fields.len() - 1] {
                "1" => true,
                "0" => false,
                other => return Err(err(format!("label must be 0 or 1, got {other:?}"))),
            };
            rows.push(FeatureRow {
                rumour_id: fields[0].to_string(),
                window,
                values,
                label,
            });
        }
        if rows.is_empty() {
            return Err(TableError::Empty);
        }
        Ok(Self {
            catalog_version,
            names,
            rows,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn csv_round_trip_is_exact(
            values in prop::collection::vec(prop::collection::vec(-1e6..1e6f64, 3), 1..6),
            windowed in any::<bool>(),
        ) {
            let table = FeatureTable {
                catalog_version: "v/1".into(),
                names: vec!["a".into(), "b".into(), "c".into()],
                rows: values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| FeatureRow {
                        rumour_id: format!("r{i}"),
                        window: windowed.then_some(i % 20 + 1),
                        values: v.clone(),
                        label: i % 2 == 0,
                    })
                    .collect(),
            };
            let back = FeatureTable::from_csv(&table.to_csv()).unwrap();
            prop_assert_eq!(back, table);
        }
    }

    #[test]
    fn rejects_ragged_rows() {
        let text = "rumour_id,a,label\nr1,1.0\n";
        assert!(matches!(FeatureTable::from_csv(text), Err(TableError::Parse { line: 2, .. })));
    }
}
