//! Input formats and the data a session can hold.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use sd_core::formats::{
    json_error, parse_matrix_csv, write_partial_csv, write_sd_csv, CriteriaDoc, MatrixDoc,
    PartialDoc,
};
use sd_core::group::{group_isd, tally, BallotFile, VectorPreferenceRelation};
use sd_core::interval::PartialSdMatrix;
use sd_core::superiority::CriterionFamily;
use sd_core::{AlternativeSet, SdMatrix};

use crate::error::{Error, Result};

/// On-disk formats. `Auto` sniffs the text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Auto,
    /// Complete matrix CSV.
    SdCsv,
    /// Matrix CSV with empty or `NA` cells.
    PartialCsv,
    /// `{"alternatives", "matrix"}`, optionally with `null` cells and `phi_star`.
    MatrixJson,
    Ballots,
    Criteria,
    Session,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => Format::Auto,
            "csv" | "sd-csv" => Format::SdCsv,
            "partial-csv" => Format::PartialCsv,
            "matrix-json" => Format::MatrixJson,
            "ballots" => Format::Ballots,
            "criteria" => Format::Criteria,
            "session" => Format::Session,
            other => return Err(Error::UnknownFormat(other.to_string())),
        })
    }
}

impl Format {
    /// Picks a concrete format from the text itself.
    pub fn detect(text: &str) -> Result<Format> {
        let body = text.trim_start();
        if !body.starts_with('{') {
            if body.is_empty() {
                return Err(Error::UndetectedFormat("empty input".into()));
            }
            return Ok(Format::SdCsv);
        }
        let value: serde_json::Value = serde_json::from_str(text).map_err(json_error)?;
        let has = |key: &str| value.get(key).is_some();
        if has("schema_version") {
            Ok(Format::Session)
        } else if has("experts") {
            Ok(Format::Ballots)
        } else if has("criteria") {
            Ok(Format::Criteria)
        } else if has("matrix") {
            Ok(Format::MatrixJson)
        } else {
            Err(Error::UndetectedFormat(
                "JSON object has none of `experts`, `criteria`, `matrix`, `schema_version`".into(),
            ))
        }
    }
}

/// What a session analyses.
#[derive(Debug, Clone, PartialEq)]
pub enum Data {
    Matrix(SdMatrix),
    Partial(PartialSdMatrix),
    /// Every expert compares every pair.
    Panel(VectorPreferenceRelation),
    /// Some expert abstains or leaves a pair out.
    Abstentions(VectorPreferenceRelation),
    Criteria {
        family: CriterionFamily,
        names: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataKind {
    Matrix,
    Partial,
    Panel,
    Abstention,
    Criteria,
}

impl DataKind {
    pub fn name(self) -> &'static str {
        match self {
            DataKind::Matrix => "matrix",
            DataKind::Partial => "partial",
            DataKind::Panel => "panel",
            DataKind::Abstention => "abstention",
            DataKind::Criteria => "criteria",
        }
    }
}

impl fmt::Display for DataKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Self-describing JSON form of [`Data`], embedded in session files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DataDoc {
    Matrix(MatrixDoc),
    Partial(PartialDoc),
    Panel(BallotFile),
    Abstention(BallotFile),
    Criteria(CriteriaDoc),
}

impl Data {
    pub fn kind(&self) -> DataKind {
        match self {
            Data::Matrix(_) => DataKind::Matrix,
            Data::Partial(_) => DataKind::Partial,
            Data::Panel(_) => DataKind::Panel,
            Data::Abstentions(_) => DataKind::Abstention,
            Data::Criteria { .. } => DataKind::Criteria,
        }
    }

    pub fn base(&self) -> &AlternativeSet {
        match self {
            Data::Matrix(m) => m.base(),
            Data::Partial(p) => p.base(),
            Data::Panel(v) | Data::Abstentions(v) => v.base(),
            Data::Criteria { family, .. } => family.base(),
        }
    }

    /// Splits a ballot panel by completeness.
    pub fn from_panel(vpr: VectorPreferenceRelation) -> Self {
        if vpr.is_complete() {
            Data::Panel(vpr)
        } else {
            Data::Abstentions(vpr)
        }
    }

    /// The matrix whose level relations form the ladder: the matrix
    /// itself, the group ISD of a panel, or the aggregate of a criterion
    /// family. Partial data qualifies once complete.
    pub fn ladder_source(&self) -> Result<SdMatrix> {
        match self {
            Data::Matrix(m) => Ok(m.clone()),
            Data::Panel(v) => Ok(group_isd(&tally(v)?)),
            Data::Criteria { family, .. } => Ok(family.aggregate()),
            Data::Partial(p) => p.to_complete().ok_or(Error::WrongKind {
                expected: "complete",
                found: "partial",
            }),
            Data::Abstentions(_) => Err(Error::WrongKind {
                expected: "matrix, panel or criteria",
                found: "abstention",
            }),
        }
    }

    pub fn to_doc(&self) -> DataDoc {
        match self {
            Data::Matrix(m) => DataDoc::Matrix(MatrixDoc::from_matrix(m)),
            Data::Partial(p) => DataDoc::Partial(PartialDoc::from_partial(p)),
            Data::Panel(v) => DataDoc::Panel(v.to_ballot_file()),
            Data::Abstentions(v) => DataDoc::Abstention(v.to_ballot_file()),
            Data::Criteria { family, names } => {
                DataDoc::Criteria(CriteriaDoc::from_family(family, names))
            }
        }
    }

    pub fn from_doc(doc: DataDoc) -> Result<Self> {
        Ok(match doc {
            DataDoc::Matrix(d) => Data::Matrix(d.into_matrix()?),
            DataDoc::Partial(d) => Data::Partial(d.into_partial()?),
            DataDoc::Panel(f) | DataDoc::Abstention(f) => Data::from_panel(f.into_panel()?),
            DataDoc::Criteria(d) => {
                let (family, names) = d.into_family()?;
                Data::Criteria { family, names }
            }
        })
    }

    /// Text in the data's native file format.
    pub fn save(&self) -> String {
        match self {
            Data::Matrix(m) => write_sd_csv(m),
            Data::Partial(p) => write_partial_csv(p),
            Data::Panel(v) | Data::Abstentions(v) => pretty(&v.to_ballot_file()),
            Data::Criteria { family, names } => pretty(&CriteriaDoc::from_family(family, names)),
        }
    }
}

pub(crate) fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// Parses `text` as data. `phi_star` overrides the bound of partial
/// matrices. Session documents are rejected here; see
/// [`crate::session::load_str`].
pub fn parse_data(text: &str, format: Format, phi_star: Option<f64>) -> Result<Data> {
    let format = match format {
        Format::Auto => Format::detect(text)?,
        f => f,
    };
    match format {
        Format::SdCsv | Format::PartialCsv => {
            let csv = parse_matrix_csv(text)?;
            if format == Format::PartialCsv || csv.has_gaps() || phi_star.is_some() {
                Ok(Data::Partial(csv.into_partial(phi_star)?))
            } else {
                Ok(Data::Matrix(csv.into_sd_matrix()?))
            }
        }
        Format::MatrixJson => {
            let doc: PartialDoc = serde_json::from_str(text).map_err(json_error)?;
            let gaps = doc.matrix.iter().flatten().any(Option::is_none);
            if gaps || doc.phi_star.is_some() || phi_star.is_some() {
                let doc = PartialDoc {
                    phi_star: phi_star.or(doc.phi_star),
                    ..doc
                };
                Ok(Data::Partial(doc.into_partial()?))
            } else {
                let doc = MatrixDoc {
                    alternatives: doc.alternatives,
                    matrix: doc.matrix.into_iter().map(|r| r.into_iter().flatten().collect()).collect(),
                };
                Ok(Data::Matrix(doc.into_matrix()?))
            }
        }
        Format::Ballots => {
            let file: BallotFile = serde_json::from_str(text).map_err(json_error)?;
            Ok(Data::from_panel(file.into_panel()?))
        }
        Format::Criteria => {
            let doc: CriteriaDoc = serde_json::from_str(text).map_err(json_error)?;
            let (family, names) = doc.into_family()?;
            Ok(Data::Criteria { family, names })
        }
        Format::Session => Err(Error::WrongKind {
            expected: "data file",
            found: "session",
        }),
        Format::Auto => unreachable!("resolved above"),
    }
}
