//! Text formats.
//!
//! - Point sets: CSV, one point per row, `n` followed by `2n` rationals `p/q`.
//! - Weyl elements: JSON list of `{point: [2n rational strings], re, im}`.
//! - Atomic measures: JSON `{d, atoms: [{x: [...], re, im}]}`.

use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{Atom, AtomicMeasure};
use crate::scalar::Rational;
use crate::symplectic::{PhasePoint, SymplecticSpace};
use crate::weyl::WeylElement;

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if let Some((_, den)) = t.split_once('/') {
        if den.trim().parse::<i128>().is_ok_and(|d| d == 0) {
            return Err(Error::Parse(format!("zero denominator in {t:?}")));
        }
    }
    Rational::from_str(t).map_err(|_| Error::Parse(format!("not a rational: {t:?}")))
}

pub fn read_points_csv(text: &str) -> Result<Vec<PhasePoint>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut points = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(format!("row {}: {e}", row + 1)))?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let n: usize = record[0]
            .parse()
            .map_err(|_| Error::Parse(format!("row {}: bad dimension {:?}", row + 1, &record[0])))?;
        if record.len() != 2 * n + 1 {
            return Err(Error::Parse(format!(
                "row {}: expected {} coordinates, found {}",
                row + 1,
                2 * n,
                record.len() - 1
            )));
        }
        let coords = record.iter().skip(1).map(parse_rational).collect::<Result<Vec<_>>>()?;
        points.push(PhasePoint::from_coords(coords)?);
    }
    Ok(points)
}

pub fn write_points_csv(points: &[PhasePoint]) -> Result<String> {
    let mut writer = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    for p in points {
        let mut row = vec![p.dim().to_string()];
        row.extend(p.coords().map(|r| r.to_string()));
        writer.write_record(&row).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Serialize, Deserialize)]
struct TermRecord {
    point: Vec<String>,
    re: f64,
    im: f64,
}

pub fn weyl_to_json(element: &WeylElement<f64>) -> Result<String> {
    let records: Vec<TermRecord> = element
        .terms()
        .map(|(z, c)| TermRecord { point: z.coords().map(|r| r.to_string()).collect(), re: c.re, im: c.im })
        .collect();
    serde_json::to_string_pretty(&records).map_err(|e| Error::Parse(e.to_string()))
}

pub fn weyl_from_json(space: SymplecticSpace, text: &str) -> Result<WeylElement<f64>> {
    let records: Vec<TermRecord> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let terms = records
        .into_iter()
        .map(|r| {
            let coords = r.point.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
            Ok((PhasePoint::from_coords(coords)?, Complex::new(r.re, r.im)))
        })
        .collect::<Result<Vec<_>>>()?;
    WeylElement::from_terms(space, terms)
}

#[derive(Serialize, Deserialize)]
struct AtomRecord {
    x: Vec<f64>,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct MeasureRecord {
    d: usize,
    atoms: Vec<AtomRecord>,
}

pub fn measure_to_json(mu: &AtomicMeasure<f64>) -> Result<String> {
    let rec = MeasureRecord {
        d: mu.dim(),
        atoms: mu.atoms().iter().map(|a| AtomRecord { x: a.x.clone(), re: a.weight.re, im: a.weight.im }).collect(),
    };
    serde_json::to_string_pretty(&rec).map_err(|e| Error::Parse(e.to_string()))
}

pub fn measure_from_json(text: &str) -> Result<AtomicMeasure<f64>> {
    let rec: MeasureRecord = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let atoms = rec.atoms.into_iter().map(|a| Atom { x: a.x, weight: Complex::new(a.re, a.im) }).collect();
    AtomicMeasure::new(rec.d, atoms)
}

/// Weights within `tol` of a probability measure.
pub fn is_probability(mu: &AtomicMeasure<f64>, tol: f64) -> bool {
    mu.is_positive() && (mu.total_mass() - Complex::new(1.0, 0.0)).norm() <= tol
}
