//! CSV ingestion of sequence-fitness tables and serialization of landscapes
//! and feature reports.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::features::FeatureReport;
use crate::landscape::{AlphabetChoice, Landscape, VariantRecord};
use crate::snapshot;

#[derive(Debug, Clone, Default)]
pub struct CsvOptions {
    /// Separator between alleles inside the sequence column. Without one,
    /// each character is an allele.
    pub allele_delimiter: Option<String>,
}

fn column(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers
        .iter()
        .position(|h| h.trim().eq_ignore_ascii_case(name))
}

/// Reads a table with columns `sequence`, `fitness` and optionally
/// `variance`. Other columns are ignored.
pub fn read_csv_from<R: Read>(reader: R, opts: &CsvOptions) -> Result<Vec<VariantRecord>> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let seq_col =
        column(&headers, "sequence").ok_or_else(|| Error::MissingColumn("sequence".into()))?;
    let fit_col =
        column(&headers, "fitness").ok_or_else(|| Error::MissingColumn("fitness".into()))?;
    let var_col = column(&headers, "variance");
    let delimiter = opts.allele_delimiter.as_deref();

    let mut records = Vec::new();
    let mut width = None;
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        if row.len() != headers.len() {
            return Err(Error::RaggedRow { line });
        }
        let alleles: Vec<String> = crate::genotype::split_sequence(row[seq_col].trim(), delimiter)
            .into_iter()
            .map(str::to_string)
            .collect();
        match width {
            None => width = Some(alleles.len()),
            Some(w) if w != alleles.len() => return Err(Error::RaggedRow { line }),
            _ => {}
        }
        let raw = row[fit_col].trim();
        let fitness: f64 = raw.parse().map_err(|_| Error::NonNumericFitness {
            line,
            value: raw.to_string(),
        })?;
        let variance = match var_col.map(|c| row[c].trim()) {
            None | Some("") => None,
            Some(v) => Some(v.parse().map_err(|_| Error::InvalidVariance {
                row: records.len() + 1,
            })?),
        };
        records.push(VariantRecord {
            alleles,
            fitness,
            variance,
        });
    }
    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(records)
}

pub fn read_csv(path: impl AsRef<Path>, opts: &CsvOptions) -> Result<Vec<VariantRecord>> {
    read_csv_from(BufReader::new(File::open(path)?), opts)
}

/// Loads a landscape from either a binary snapshot or a CSV table,
/// recognizing snapshots by their magic bytes.
pub fn load_landscape(
    path: impl AsRef<Path>,
    alphabet: &AlphabetChoice,
    opts: &CsvOptions,
) -> Result<Landscape> {
    let path = path.as_ref();
    let mut head = [0u8; 8];
    let n = File::open(path)?.read(&mut head)?;
    if n == 8 && head == snapshot::MAGIC {
        snapshot::load_snapshot(path)
    } else {
        Landscape::from_records(&read_csv(path, opts)?, alphabet)
    }
}

/// Writes a landscape as `sequence,fitness[,variance]` rows in node order.
/// Multi-character alleles are joined with `allele_delimiter`, which
/// defaults to `-`.
pub fn write_landscape_csv<W: Write>(
    landscape: &Landscape,
    writer: W,
    allele_delimiter: Option<&str>,
) -> Result<()> {
    let space = landscape.space();
    let delim = match allele_delimiter {
        Some(d) => d,
        None if space.single_char_symbols() => "",
        None => "-",
    };
    let with_variance = landscape.has_variance();
    let mut w = csv::Writer::from_writer(writer);
    if with_variance {
        w.write_record(["sequence", "fitness", "variance"])?;
    } else {
        w.write_record(["sequence", "fitness"])?;
    }
    for (i, &code) in landscape.codes().iter().enumerate() {
        let seq = space.format(code, delim);
        let fit = landscape.fitness()[i].to_string();
        if with_variance {
            let var = landscape.variances()[i].map_or(String::new(), |v| v.to_string());
            w.write_record([seq, fit, var])?;
        } else {
            w.write_record([seq, fit])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn save_landscape_csv(
    landscape: &Landscape,
    path: impl AsRef<Path>,
    allele_delimiter: Option<&str>,
) -> Result<()> {
    write_landscape_csv(landscape, BufWriter::new(File::create(path)?), allele_delimiter)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl ReportFormat {
    /// `Csv` for a `.csv` extension, `Json` otherwise.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => ReportFormat::Csv,
            _ => ReportFormat::Json,
        }
    }
}

/// Writes a report as a flat JSON object or as a `key,value` table whose
/// values are JSON literals, so `null` survives a round trip.
pub fn write_report<W: Write>(report: &FeatureReport, mut writer: W, format: ReportFormat) -> Result<()> {
    match format {
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut writer, report)?;
            writeln!(writer)?;
        }
        ReportFormat::Csv => {
            let Value::Object(map) = serde_json::to_value(report)? else {
                unreachable!("reports serialize to objects");
            };
            let mut w = csv::Writer::from_writer(writer);
            w.write_record(["key", "value"])?;
            for (k, v) in &map {
                w.write_record([k.as_str(), &v.to_string()])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn read_report<R: Read>(reader: R, format: ReportFormat) -> Result<FeatureReport> {
    match format {
        ReportFormat::Json => Ok(serde_json::from_reader(reader)?),
        ReportFormat::Csv => {
            let mut rdr = csv::Reader::from_reader(reader);
            let mut map = Map::new();
            for row in rdr.records() {
                let row = row?;
                if row.len() != 2 {
                    let line = row.position().map_or(0, |p| p.line() as usize);
                    return Err(Error::RaggedRow { line });
                }
                map.insert(row[0].to_string(), serde_json::from_str(&row[1])?);
            }
            Ok(serde_json::from_value(Value::Object(map))?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{analyze, AnalysisOptions};
    use crate::landscape::fixtures::*;
    use crate::landscape::AlphabetChoice;
    use crate::genotype::Alphabet;

    fn read(s: &str) -> Result<Vec<VariantRecord>> {
        read_csv_from(s.as_bytes(), &CsvOptions::default())
    }

    #[test]
    fn reads_l1() {
        let recs = read("sequence,fitness\n00,0\n01,1\n10,1\n11,0.5").unwrap();
        assert_eq!(recs.len(), 4);
        assert_eq!(recs[3].alleles, vec!["1", "1"]);
        assert_eq!(recs[3].fitness, 0.5);
        assert_eq!(recs[0].variance, None);
        let l = Landscape::from_records(&recs, &AlphabetChoice::Preset(Alphabet::Binary)).unwrap();
        assert_eq!(l.edge_count(), 4);
    }

    #[test]
    fn read_errors() {
        assert!(matches!(read("sequence,fitness\n"), Err(Error::EmptyInput)));
        assert!(matches!(
            read("sequence,fitness\n0A,1\n0,2"),
            Err(Error::RaggedRow { line: 3 })
        ));
        assert!(matches!(
            read("sequence,fitness\n00,1,3\n"),
            Err(Error::RaggedRow { line: 2 })
        ));
        assert!(matches!(read("seq,fitness\n00,1"), Err(Error::MissingColumn(c)) if c == "sequence"));
        assert!(matches!(read("sequence,score\n00,1"), Err(Error::MissingColumn(c)) if c == "fitness"));
        assert!(matches!(
            read("sequence,fitness\n00,abc"),
            Err(Error::NonNumericFitness { line: 2, .. })
        ));
    }

    #[test]
    fn variance_and_delimiter() {
        let opts = CsvOptions {
            allele_delimiter: Some(":".into()),
        };
        let recs = read_csv_from(
            "sequence,fitness,variance\nK12:A,1.5,0.25\nK13:A,2,\n".as_bytes(),
            &opts,
        )
        .unwrap();
        assert_eq!(recs[0].alleles, vec!["K12", "A"]);
        assert_eq!(recs[0].variance, Some(0.25));
        assert_eq!(recs[1].variance, None);
    }

    #[test]
    fn landscape_csv_round_trip() {
        let l = l7();
        let mut buf = Vec::new();
        write_landscape_csv(&l, &mut buf, None).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("sequence,fitness\n"));
        let back = Landscape::from_records(
            &read(&text).unwrap(),
            &AlphabetChoice::Space(l.space().clone()),
        )
        .unwrap();
        assert_eq!(back.fitness(), l.fitness());
        assert_eq!(back.edges(), l.edges());
    }

    #[test]
    fn report_round_trips() {
        let opts = AnalysisOptions {
            sigma: Some(0.1),
            ..Default::default()
        };
        for l in [l1(), l2(), constant()] {
            let r = analyze(&l, &opts).unwrap();
            for fmt in [ReportFormat::Json, ReportFormat::Csv] {
                let mut buf = Vec::new();
                write_report(&r, &mut buf, fmt).unwrap();
                let back = read_report(buf.as_slice(), fmt).unwrap();
                assert_eq!(back, r);
            }
        }
    }

    #[test]
    fn format_from_extension() {
        assert_eq!(ReportFormat::from_path(Path::new("a/r.CSV")), ReportFormat::Csv);
        assert_eq!(ReportFormat::from_path(Path::new("r.json")), ReportFormat::Json);
    }
}
