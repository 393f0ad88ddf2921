//! The results CSV: one row per (detector configuration, testing set) run.
//!
//! The header and column order are a stable contract consumed by the
//! `report` subcommand and by downstream plotting scripts; timings are in
//! seconds with full round-trip precision, confusion-matrix fields are left
//! empty when a run had no ground truth.

use std::fs::OpenOptions;
use std::path::Path;

use tegad_core::ConfusionMatrix;

use crate::error::CliError;

pub const RESULTS_HEADER: &str =
    "detector,n_bins,n_obs_per_period,alpha,testing_set,time2build,time2predict,tp,tn,fp,fn";

#[derive(Debug, Clone, PartialEq)]
pub struct ResultsRow {
    pub detector: String,
    pub n_bins: u32,
    pub n_obs_per_period: usize,
    pub alpha: u8,
    pub testing_set: String,
    pub time2build: f64,
    pub time2predict: f64,
    pub confusion: Option<ConfusionMatrix>,
}

impl ResultsRow {
    fn fields(&self) -> Vec<String> {
        let mut fields = vec![
            self.detector.clone(),
            self.n_bins.to_string(),
            self.n_obs_per_period.to_string(),
            self.alpha.to_string(),
            self.testing_set.clone(),
            self.time2build.to_string(),
            self.time2predict.to_string(),
        ];
        match &self.confusion {
            Some(cm) => fields.extend([
                cm.true_positives.to_string(),
                cm.true_negatives.to_string(),
                cm.false_positives.to_string(),
                cm.false_negatives.to_string(),
            ]),
            None => fields.extend([String::new(), String::new(), String::new(), String::new()]),
        }
        fields
    }
}

/// Appends rows to a results file, writing the header only when the file is
/// new (or empty).
pub struct ResultsWriter {
    writer: csv::Writer<std::fs::File>,
}

impl ResultsWriter {
    pub fn open<P: AsRef<Path>>(path: P) -> Result<Self, CliError> {
        let path = path.as_ref();
        let needs_header = std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| CliError::internal(format!("cannot open {}: {e}", path.display())))?;
        let mut writer = csv::Writer::from_writer(file);
        if needs_header {
            writer
                .write_record(RESULTS_HEADER.split(','))
                .map_err(|e| CliError::internal(format!("cannot write {}: {e}", path.display())))?;
        }
        Ok(Self { writer })
    }

    pub fn append(&mut self, row: &ResultsRow) -> Result<(), CliError> {
        self.writer
            .write_record(row.fields())
            .and_then(|()| self.writer.flush().map_err(csv::Error::from))
            .map_err(|e| CliError::internal(format!("cannot write results row: {e}")))
    }
}

/// Reads a whole results file back, validating the header and every row.
pub fn read_results<P: AsRef<Path>>(path: P) -> Result<Vec<ResultsRow>, CliError> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;

    let header = reader
        .headers()
        .map_err(|e| CliError::data(format!("{}: {e}", path.display())))?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if header != RESULTS_HEADER {
        return Err(CliError::data(format!(
            "{}: unexpected header {header:?}",
            path.display()
        )));
    }

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let bad = |what: &str| {
            CliError::data(format!("{}, line {line}: {what}", path.display()))
        };
        if record.len() != 11 {
            return Err(bad(&format!("expected 11 fields, found {}", record.len())));
        }

        let confusion = match (&record[7], &record[8], &record[9], &record[10]) {
            ("", "", "", "") => None,
            (tp, tn, fp, fn_) => Some(ConfusionMatrix {
                true_positives: tp.parse().map_err(|_| bad("bad tp field"))?,
                true_negatives: tn.parse().map_err(|_| bad("bad tn field"))?,
                false_positives: fp.parse().map_err(|_| bad("bad fp field"))?,
                false_negatives: fn_.parse().map_err(|_| bad("bad fn field"))?,
            }),
        };
        rows.push(ResultsRow {
            detector: record[0].to_string(),
            n_bins: record[1].parse().map_err(|_| bad("bad n_bins field"))?,
            n_obs_per_period: record[2]
                .parse()
                .map_err(|_| bad("bad n_obs_per_period field"))?,
            alpha: record[3].parse().map_err(|_| bad("bad alpha field"))?,
            testing_set: record[4].to_string(),
            time2build: record[5].parse().map_err(|_| bad("bad time2build field"))?,
            time2predict: record[6]
                .parse()
                .map_err(|_| bad("bad time2predict field"))?,
            confusion,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_row(confusion: Option<ConfusionMatrix>) -> ResultsRow {
        ResultsRow {
            detector: "Hamming".into(),
            n_bins: 30,
            n_obs_per_period: 336,
            alpha: 5,
            testing_set: "normal".into(),
            time2build: 0.1602308750152588,
            time2predict: 0.04300808906555176,
            confusion,
        }
    }

    #[test]
    fn rows_round_trip_and_header_is_written_once() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.csv");
        let with_cm = sample_row(Some(ConfusionMatrix {
            true_positives: 0,
            true_negatives: 14,
            false_positives: 1,
            false_negatives: 0,
        }));
        let without_cm = sample_row(None);

        let mut w = ResultsWriter::open(&path).unwrap();
        w.append(&with_cm).unwrap();
        drop(w);
        // Re-opening must append, not rewrite the header.
        let mut w = ResultsWriter::open(&path).unwrap();
        w.append(&without_cm).unwrap();
        drop(w);

        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], RESULTS_HEADER);
        assert_eq!(
            lines[1],
            "Hamming,30,336,5,normal,0.1602308750152588,0.04300808906555176,0,14,1,0"
        );
        assert!(lines[2].ends_with(",,,,"));

        let rows = read_results(&path).unwrap();
        assert_eq!(rows, vec![with_cm, without_cm]);
    }

    #[test]
    fn malformed_files_are_rejected() {
        let dir = tempfile::tempdir().unwrap();

        let bad_header = dir.path().join("bad_header.csv");
        std::fs::write(&bad_header, "a,b,c\n1,2,3\n").unwrap();
        assert!(read_results(&bad_header).is_err());

        let partial_cm = dir.path().join("partial.csv");
        std::fs::write(
            &partial_cm,
            format!("{RESULTS_HEADER}\nHamming,30,336,5,normal,0.1,0.1,3,,,\n"),
        )
        .unwrap();
        assert!(read_results(&partial_cm).is_err());

        let bad_number = dir.path().join("bad_number.csv");
        std::fs::write(
            &bad_number,
            format!("{RESULTS_HEADER}\nHamming,thirty,336,5,normal,0.1,0.1,1,2,3,4\n"),
        )
        .unwrap();
        assert!(read_results(&bad_number).is_err());
    }
}
