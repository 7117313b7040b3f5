//! CSV ingestion (`x1,..,xn,label`) and label output.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{ClassLabel, LabeledPoint};
use crate::peeling::Dataset;

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input)
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::Parse {
        line,
        msg: e.to_string(),
    }
}

fn parse_label(field: &str, line: u64) -> Result<ClassLabel> {
    match field.to_ascii_lowercase().as_str() {
        "pos" | "1" => Ok(ClassLabel::Pos),
        "neg" | "0" => Ok(ClassLabel::Neg),
        _ => Err(Error::UnknownLabel {
            line,
            label: field.to_string(),
        }),
    }
}

fn parse_coord(field: &str, line: u64) -> Result<f64> {
    let v: f64 = field.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid number {field:?}"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            line,
            msg: format!("non-finite coordinate {field:?}"),
        });
    }
    Ok(v)
}

fn header_width<R: Read>(rdr: &mut csv::Reader<R>) -> Result<usize> {
    let header = rdr.headers().map_err(csv_err)?;
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(Error::EmptyFile);
    }
    Ok(header.len())
}

/// Reads a labeled dataset; the dimension is the header width minus one.
///
/// Labels are `pos`/`neg` (any case) or `1`/`0`. The positive class is `Pos`.
pub fn load_dataset<R: Read>(input: R) -> Result<Dataset> {
    let mut rdr = reader(input);
    let width = header_width(&mut rdr)?;
    if width < 2 {
        return Err(Error::Parse {
            line: 1,
            msg: "header needs at least one coordinate and a label".into(),
        });
    }
    let n = width - 1;
    let mut points = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != width {
            return Err(Error::RaggedRow {
                line,
                expected: width,
                found: rec.len(),
            });
        }
        let coords = (0..n)
            .map(|i| parse_coord(&rec[i], line))
            .collect::<Result<Vec<_>>>()?;
        let label = parse_label(&rec[n], line)?;
        points.push(LabeledPoint::new(coords, label));
    }
    Dataset::new(points, n, ClassLabel::Pos)
}

pub fn load_dataset_path(path: impl AsRef<Path>) -> Result<Dataset> {
    load_dataset(File::open(path)?)
}

/// Reads unlabeled points of dimension `n`. A trailing `label` column is
/// accepted and ignored.
pub fn load_points<R: Read>(input: R, n: usize) -> Result<Vec<Vec<f64>>> {
    let mut rdr = reader(input);
    let width = header_width(&mut rdr)?;
    let has_label = rdr
        .headers()
        .map_err(csv_err)?
        .iter()
        .next_back()
        .is_some_and(|h| h.eq_ignore_ascii_case("label"));
    let expected = if has_label { n + 1 } else { n };
    if width != expected {
        return Err(Error::Dimension {
            expected: n,
            found: width - usize::from(has_label),
        });
    }
    let mut points = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != width {
            return Err(Error::RaggedRow {
                line,
                expected: width,
                found: rec.len(),
            });
        }
        points.push(
            (0..n)
                .map(|i| parse_coord(&rec[i], line))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok(points)
}

/// Writes `x1,..,xn,label` rows.
pub fn write_labels<W: Write>(out: W, points: &[Vec<f64>], labels: &[ClassLabel]) -> Result<()> {
    let n = points.first().map_or(0, Vec::len);
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    header.push("label".into());
    w.write_record(&header).map_err(csv_err)?;
    for (p, l) in points.iter().zip(labels) {
        let mut row: Vec<String> = p.iter().map(f64::to_string).collect();
        row.push(l.to_string());
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes a labeled dataset in the format [`load_dataset`] reads.
pub fn write_dataset<W: Write>(out: W, d: &Dataset) -> Result<()> {
    let points: Vec<Vec<f64>> = d.points.iter().map(|p| p.coords.clone()).collect();
    let labels: Vec<ClassLabel> = d.points.iter().map(|p| p.label).collect();
    if points.is_empty() {
        let mut out = out;
        let header: Vec<String> = (1..=d.dimension)
            .map(|i| format!("x{i}"))
            .chain(["label".into()])
            .collect();
        writeln!(out, "{}", header.join(","))?;
        return Ok(());
    }
    write_labels(out, &points, &labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let d = load_dataset("x1,x2,label\n0,0,pos\n1,1,neg\n".as_bytes()).unwrap();
        assert_eq!(d.dimension, 2);
        assert_eq!(d.points.len(), 2);
        assert_eq!(
            d.points[1],
            LabeledPoint::new(vec![1.0, 1.0], ClassLabel::Neg)
        );
    }

    #[test]
    fn label_spellings() {
        let d = load_dataset("x1,label\n0,POS\n1,Neg\n2,1\n3,0\n".as_bytes()).unwrap();
        let labels: Vec<_> = d.points.iter().map(|p| p.label).collect();
        use ClassLabel::*;
        assert_eq!(labels, vec![Pos, Neg, Pos, Neg]);
    }

    #[test]
    fn ragged_row() {
        let err = load_dataset("x1,x2,label\n0,0,pos\n1,2\n".as_bytes()).unwrap_err();
        assert_eq!(
            err,
            Error::RaggedRow {
                line: 3,
                expected: 3,
                found: 2
            }
        );
    }

    #[test]
    fn unknown_label() {
        let err = load_dataset("x1,x2,label\n0,0,maybe\n".as_bytes()).unwrap_err();
        assert_eq!(
            err,
            Error::UnknownLabel {
                line: 2,
                label: "maybe".into()
            }
        );
    }

    #[test]
    fn bad_number_reports_line() {
        let err = load_dataset("x1,x2,label\n0,0,pos\n0,abc,neg\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
        let err = load_dataset("x1,x2,label\nNaN,0,pos\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn empty_file() {
        assert_eq!(load_dataset("".as_bytes()).unwrap_err(), Error::EmptyFile);
    }

    #[test]
    fn points_with_and_without_label_column() {
        let p = load_points("x1,x2\n0.5,1\n".as_bytes(), 2).unwrap();
        assert_eq!(p, vec![vec![0.5, 1.0]]);
        let p = load_points("x1,x2,label\n0.5,1,pos\n".as_bytes(), 2).unwrap();
        assert_eq!(p, vec![vec![0.5, 1.0]]);
        assert!(matches!(
            load_points("x1\n0\n".as_bytes(), 2),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn labels_output() {
        let mut buf = Vec::new();
        write_labels(
            &mut buf,
            &[vec![0.2, 0.1], vec![1.0, 1.0]],
            &[ClassLabel::Pos, ClassLabel::Neg],
        )
        .unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "x1,x2,label\n0.2,0.1,pos\n1,1,neg\n"
        );
    }

    #[test]
    fn dataset_write_read() {
        let d =
            load_dataset("x1,x2,label\n0.1,0.30000000000000004,pos\n1e-300,-2,neg\n".as_bytes())
                .unwrap();
        let mut buf = Vec::new();
        write_dataset(&mut buf, &d).unwrap();
        assert_eq!(load_dataset(buf.as_slice()).unwrap(), d);
    }
}
