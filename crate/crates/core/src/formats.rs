//! File formats: matrix CSV (complete or partial), weights and criteria JSON,
//! and JSON documents for matrices.
//!
//! Matrix CSV: the first row holds a corner cell followed by the alternative
//! ids, every following row starts with an id and then `φ(row, col)`. Empty
//! cells or `NA` mark unknown pairs. A comment line `# phi_star = <v>` sets
//! the bound for partial matrices. Reals are written with 12 significant
//! digits.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::PartialSdMatrix;
use crate::relations::AlternativeSet;
use crate::superiority::{CriterionFamily, SdMatrix, WeightVector};

pub const SIGNIFICANT_DIGITS: usize = 12;

/// Decimal text with at most 12 significant digits, trailing zeros trimmed.
pub fn format_real(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { x.to_string() };
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    // Rounding can carry into a new leading digit (9.99… → 10.0…).
    let digits = s.chars().filter(char::is_ascii_digit).count();
    let leading_zeros = s
        .trim_start_matches('-')
        .chars()
        .take_while(|c| *c == '0' || *c == '.')
        .filter(|c| *c == '0')
        .count();
    if decimals > 0 && digits - leading_zeros > SIGNIFICANT_DIGITS {
        let decimals = decimals - 1;
        s = format!("{x:.decimals$}");
    }
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// `x` rounded to 12 significant digits.
pub fn round_real(x: f64) -> f64 {
    format_real(x).parse().unwrap_or(x)
}

/// A matrix CSV as read, before validation.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixCsv {
    pub ids: Vec<String>,
    /// Row-major, `None` for empty or `NA` cells.
    pub cells: Vec<Option<f64>>,
    pub phi_star: Option<f64>,
}

impl MatrixCsv {
    pub fn has_gaps(&self) -> bool {
        let n = self.ids.len();
        self.cells
            .iter()
            .enumerate()
            .any(|(k, c)| c.is_none() && k / n != k % n)
    }

    pub fn into_sd_matrix(self) -> Result<SdMatrix> {
        let base = AlternativeSet::new(self.ids)?;
        let n = base.len();
        let values = self
            .cells
            .into_iter()
            .enumerate()
            .map(|(k, c)| match c {
                Some(v) => Ok(v),
                None if k / n == k % n => Ok(0.0),
                None => Err(Error::parse(
                    k / n + 2,
                    k % n + 2,
                    "missing entry in a complete matrix",
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        SdMatrix::new(&base, values)
    }

    pub fn into_partial(self, phi_star: Option<f64>) -> Result<PartialSdMatrix> {
        let base = AlternativeSet::new(self.ids)?;
        PartialSdMatrix::new(&base, self.cells, phi_star.or(self.phi_star))
    }
}

fn parse_directive(line: &str, lineno: usize) -> Result<Option<f64>> {
    let body = line.trim_start_matches('#').trim();
    let Some((key, value)) = body.split_once('=') else {
        return Ok(None);
    };
    if key.trim() != "phi_star" {
        return Ok(None);
    }
    value
        .trim()
        .parse::<f64>()
        .map(Some)
        .map_err(|e| Error::parse(lineno, 1, format!("bad phi_star: {e}")))
}

pub fn parse_matrix_csv(text: &str) -> Result<MatrixCsv> {
    let mut phi_star = None;
    for (k, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('#') {
            if let Some(v) = parse_directive(line.trim_start(), k + 1)? {
                phi_star = Some(v);
            }
        }
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(line, 1, e.to_string())
        })?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        records.push(rec);
    }
    let (header, rows) = records
        .split_first()
        .ok_or_else(|| Error::parse(1, 1, "empty matrix file"))?;
    let line_of = |r: &csv::StringRecord| r.position().map_or(0, |p| p.line() as usize);
    let ids: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let n = ids.len();
    if n == 0 {
        return Err(Error::parse(line_of(header), 2, "no alternative ids in header"));
    }
    if rows.len() != n {
        return Err(Error::parse(
            line_of(header),
            1,
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    let mut cells = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let line = line_of(row);
        if row.len() != n + 1 {
            return Err(Error::parse(
                line,
                row.len().min(n + 1),
                format!("expected {} cells, found {}", n + 1, row.len()),
            ));
        }
        if row[0] != ids[i] {
            return Err(Error::parse(
                line,
                1,
                format!("row id `{}` does not match column id `{}`", &row[0], ids[i]),
            ));
        }
        for (j, cell) in row.iter().skip(1).enumerate() {
            if cell.is_empty() || cell.eq_ignore_ascii_case("na") {
                cells.push(None);
            } else {
                let v = cell
                    .parse::<f64>()
                    .map_err(|e| Error::parse(line, j + 2, format!("`{cell}`: {e}")))?;
                cells.push(Some(v));
            }
        }
    }
    Ok(MatrixCsv {
        ids,
        cells,
        phi_star,
    })
}

fn write_csv(ids: &[String], cell: impl Fn(usize, usize) -> String, comment: Option<String>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        out.push_str(&c);
        out.push('\n');
    }
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    let header: Vec<&str> = std::iter::once("").chain(ids.iter().map(String::as_str)).collect();
    writer.write_record(&header).expect("in-memory write");
    for (i, id) in ids.iter().enumerate() {
        let row: Vec<String> = std::iter::once(id.clone())
            .chain((0..ids.len()).map(|j| cell(i, j)))
            .collect();
        writer.write_record(&row).expect("in-memory write");
    }
    out.push_str(&String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input"));
    out
}

pub fn parse_sd_csv(text: &str) -> Result<SdMatrix> {
    parse_matrix_csv(text)?.into_sd_matrix()
}

pub fn write_sd_csv(m: &SdMatrix) -> String {
    write_csv(m.base().ids(), |i, j| format_real(m.get(i, j)), None)
}

/// `phi_star` overrides any bound declared in the file.
pub fn parse_partial_csv(text: &str, phi_star: Option<f64>) -> Result<PartialSdMatrix> {
    parse_matrix_csv(text)?.into_partial(phi_star)
}

pub fn write_partial_csv(p: &PartialSdMatrix) -> String {
    write_csv(
        p.base().ids(),
        |i, j| p.get(i, j).map(format_real).unwrap_or_else(|| "NA".into()),
        Some(format!("# phi_star = {}", format_real(p.phi_star()))),
    )
}

/// Weights as a JSON object `{"a": 0.5, ...}`.
pub fn parse_weights(base: &AlternativeSet, text: &str) -> Result<WeightVector> {
    let map: BTreeMap<String, f64> = serde_json::from_str(text).map_err(json_error)?;
    WeightVector::from_ids(base, map.iter().map(|(k, v)| (k.as_str(), *v)))
}

pub fn weights_to_json(w: &WeightVector) -> BTreeMap<String, f64> {
    w.base()
        .ids()
        .iter()
        .cloned()
        .zip(w.values().iter().map(|&v| round_real(v)))
        .collect()
}

pub fn json_error(e: serde_json::Error) -> Error {
    Error::parse(e.line(), e.column(), e.to_string())
}

/// `{"alternatives": [...], "matrix": [[...], ...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub alternatives: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
}

impl MatrixDoc {
    pub fn from_matrix(m: &SdMatrix) -> Self {
        Self {
            alternatives: m.base().ids().to_vec(),
            matrix: m
                .rows()
                .into_iter()
                .map(|r| r.into_iter().map(round_real).collect())
                .collect(),
        }
    }

    pub fn into_matrix(self) -> Result<SdMatrix> {
        let base = AlternativeSet::new(self.alternatives)?;
        SdMatrix::from_rows(&base, self.matrix)
    }
}

/// `{"alternatives": [...], "matrix": [[null | x, ...]], "phi_star": v}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialDoc {
    pub alternatives: Vec<String>,
    pub matrix: Vec<Vec<Option<f64>>>,
    pub phi_star: Option<f64>,
}

impl PartialDoc {
    pub fn from_partial(p: &PartialSdMatrix) -> Self {
        let n = p.len();
        Self {
            alternatives: p.base().ids().to_vec(),
            matrix: (0..n)
                .map(|i| (0..n).map(|j| p.get(i, j).map(round_real)).collect())
                .collect(),
            phi_star: Some(round_real(p.phi_star())),
        }
    }

    pub fn into_partial(self) -> Result<PartialSdMatrix> {
        let base = AlternativeSet::new(self.alternatives)?;
        let n = base.len();
        if self.matrix.len() != n || self.matrix.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.matrix.len(),
            });
        }
        PartialSdMatrix::new(&base, self.matrix.into_iter().flatten().collect(), self.phi_star)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionDoc {
    pub name: String,
    pub weight: f64,
    pub matrix: Vec<Vec<f64>>,
}

/// `{"alternatives": [...], "criteria": [{"name", "weight", "matrix"}]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriteriaDoc {
    pub alternatives: Vec<String>,
    pub criteria: Vec<CriterionDoc>,
}

impl CriteriaDoc {
    pub fn into_family(self) -> Result<(CriterionFamily, Vec<String>)> {
        let base = AlternativeSet::new(self.alternatives)?;
        let mut names = Vec::with_capacity(self.criteria.len());
        let mut matrices = Vec::with_capacity(self.criteria.len());
        let mut weights = Vec::with_capacity(self.criteria.len());
        for c in self.criteria {
            matrices.push(SdMatrix::from_rows(&base, c.matrix)?);
            weights.push(c.weight);
            names.push(c.name);
        }
        Ok((CriterionFamily::new(matrices, weights)?, names))
    }

    pub fn from_family(family: &CriterionFamily, names: &[String]) -> Self {
        Self {
            alternatives: family.base().ids().to_vec(),
            criteria: family
                .criteria()
                .iter()
                .zip(family.weights())
                .zip(names)
                .map(|((m, &w), name)| CriterionDoc {
                    name: name.clone(),
                    weight: round_real(w),
                    matrix: MatrixDoc::from_matrix(m).matrix,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(0.0), "0");
        assert_eq!(format_real(-0.0), "0");
        assert_eq!(format_real(2.0), "2");
        assert_eq!(format_real(-1.5), "-1.5");
        assert_eq!(format_real(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_real(-4.0 / 3.0), "-1.33333333333");
        assert_eq!(format_real(9.9999999999999), "10");
        assert_eq!(format_real(123456789.123456), "123456789.123");
        assert_eq!(format_real(1e-15), "0.000000000000001");
    }

    proptest! {
        #[test]
        fn rounding_is_idempotent(x in -1e6f64..1e6) {
            let once = round_real(x);
            prop_assert_eq!(round_real(once), once);
            prop_assert_eq!(format_real(once), format_real(x));
            prop_assert!((once - x).abs() <= x.abs() * 1e-11 + 1e-300);
        }
    }

    #[test]
    fn sd_csv_round_trip() {
        let text = write_sd_csv(&fixtures::fix_nt());
        assert_eq!(text, ",a,b,c\na,0,2,1\nb,-2,0,1\nc,-1,-1,0\n");
        assert_eq!(parse_sd_csv(&text).unwrap(), fixtures::fix_nt());
    }

    #[test]
    fn sd_csv_rejections() {
        let err = parse_sd_csv(",a,b\na,0,1\nb,1,0\n").unwrap_err();
        assert!(matches!(err, Error::NotSkewSymmetric { ref row, ref col, .. } if row == "a" && col == "b"));
        let err = parse_sd_csv(",a,b\na,0,x\nb,1,0\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse { line: 2, column: 3, message: "`x`: invalid float literal".into() }
        );
        assert!(parse_sd_csv(",a,b\nb,0,1\na,-1,0\n").unwrap_err().is_parse());
        assert!(parse_sd_csv(",a,b\na,0,1\n").unwrap_err().is_parse());
        assert!(parse_sd_csv("").unwrap_err().is_parse());
        assert!(parse_sd_csv(",a,b\na,0,NA\nb,NA,0\n").unwrap_err().is_parse());
    }

    #[test]
    fn partial_csv() {
        let text = "# phi_star = 1\n,a,b,c\na,0,1,NA\nb,-1,0,\nc,NA,,0\n";
        let csv = parse_matrix_csv(text).unwrap();
        assert!(csv.has_gaps());
        let p = csv.into_partial(None).unwrap();
        assert_eq!(p, fixtures::fix_part());
        let written = write_partial_csv(&p);
        assert_eq!(written, "# phi_star = 1\n,a,b,c\na,0,1,NA\nb,-1,0,NA\nc,NA,NA,0\n");
        assert_eq!(parse_partial_csv(&written, None).unwrap(), p);
        assert_eq!(parse_partial_csv(&written, Some(2.0)).unwrap().phi_star(), 2.0);
        assert!(parse_partial_csv("# phi_star = x\n,a\na,0\n", None).unwrap_err().is_parse());
    }

    #[test]
    fn weights_json() {
        let base = fixtures::abc();
        let w = parse_weights(&base, r#"{"a":0.6,"b":0.3,"c":0.1}"#).unwrap();
        assert_eq!(w.values(), &[0.6, 0.3, 0.1]);
        assert!(parse_weights(&base, r#"{"a":0.6,"b":0.3}"#).is_err());
        assert!(parse_weights(&base, r#"{"a":0.6,"b":0.3,"c":0.3}"#).is_err());
        assert!(parse_weights(&base, "{").unwrap_err().is_parse());
    }

    #[test]
    fn criteria_doc() {
        let json = r#"{"alternatives":["a","b","c"],"criteria":[
            {"name":"cost","weight":0.5,"matrix":[[0,2,3],[-2,0,1],[-3,-1,0]]},
            {"name":"risk","weight":0.5,"matrix":[[0,2,1],[-2,0,1],[-1,-1,0]]}]}"#;
        let doc: CriteriaDoc = serde_json::from_str(json).unwrap();
        let (family, names) = doc.clone().into_family().unwrap();
        assert_eq!(names, vec!["cost", "risk"]);
        assert_eq!(family.criteria()[0], fixtures::fix_t());
        assert_eq!(CriteriaDoc::from_family(&family, &names), doc);
    }

    #[test]
    fn matrix_docs() {
        let doc = MatrixDoc::from_matrix(&fixtures::fix_t());
        assert_eq!(doc.clone().into_matrix().unwrap(), fixtures::fix_t());
        let pdoc = PartialDoc::from_partial(&fixtures::fix_part());
        assert_eq!(pdoc.matrix[0], vec![Some(0.0), Some(1.0), None]);
        assert_eq!(pdoc.into_partial().unwrap(), fixtures::fix_part());
    }
}
