//! JSON document schemas shared with the CLI.
//!
//! Scalars serialize as plain numbers in float mode and as `"p/q"` decimal
//! strings in exact mode, so exact-mode round trips are bit-exact. Floats
//! are written with 17 significant digits in scientific notation through
//! [`to_canonical_json`], making reports byte-stable and losslessly
//! re-parseable.

use std::io;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::explorer::{SearchReport, TruncatedFamily, ValueSource};
use crate::psd::PsdReport;
use crate::scalar::{parse_rational, Scalar};
use crate::sequence::{GeneratingVector, MultiIndex, MultidimensionalSequence};
use crate::tensor::SymmetricTensor;

/// A scalar in a document: a JSON number, or a `"p/q"` string for exact
/// rationals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueDoc {
    Number(f64),
    Text(String),
}

impl ValueDoc {
    pub fn to_f64(&self) -> Result<f64> {
        match self {
            ValueDoc::Number(v) => Ok(*v),
            ValueDoc::Text(text) => Ok(parse_rational(text)?.to_f64()),
        }
    }

    /// Exact parse: `"p/q"` strings and integral numbers only. A non-integer
    /// plain number has no declared exact value and is rejected.
    pub fn to_rational(&self) -> Result<BigRational> {
        match self {
            ValueDoc::Text(text) => parse_rational(text),
            ValueDoc::Number(v) => {
                if v.fract() == 0.0 && v.abs() <= 2f64.powi(53) {
                    Ok(<BigRational as Scalar>::from_f64(*v))
                } else {
                    Err(Error::Parse(format!(
                        "exact mode requires rational inputs; {v} is not an integer \
                         (write it as a \"p/q\" string)"
                    )))
                }
            }
        }
    }

    pub fn from_scalar<T: Scalar>(value: &T) -> Self {
        if T::EXACT {
            ValueDoc::Text(value.to_string())
        } else {
            ValueDoc::Number(value.to_f64())
        }
    }
}

/// Scalar modes that can be read out of a [`ValueDoc`].
pub trait FromValueDoc: Scalar {
    fn from_value_doc(doc: &ValueDoc) -> Result<Self>;
}

impl FromValueDoc for f64 {
    fn from_value_doc(doc: &ValueDoc) -> Result<Self> {
        doc.to_f64()
    }
}

impl FromValueDoc for BigRational {
    fn from_value_doc(doc: &ValueDoc) -> Result<Self> {
        doc.to_rational()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SequenceKind {
    #[serde(rename = "table")]
    Table,
    #[serde(rename = "hankel-rule")]
    HankelRule,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceEntryDoc {
    pub j: Vec<usize>,
    pub value: ValueDoc,
}

/// A sequence document: either an explicit table with declared coverage or
/// a Hankel rule over a generating vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceDoc {
    pub n: usize,
    pub kind: SequenceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<SequenceEntryDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generating_vector: Option<Vec<ValueDoc>>,
}

impl SequenceDoc {
    pub fn from_generating_vector<T: Scalar>(v: &GeneratingVector<T>, n: usize) -> Self {
        Self {
            n,
            kind: SequenceKind::HankelRule,
            max_degree: None,
            entries: None,
            generating_vector: Some(v.values().iter().map(ValueDoc::from_scalar).collect()),
        }
    }

    pub fn to_sequence<T: FromValueDoc>(&self) -> Result<MultidimensionalSequence<T>> {
        match self.kind {
            SequenceKind::HankelRule => {
                let v = self.to_generating_vector()?;
                MultidimensionalSequence::from_generating_vector(v, self.n)
            }
            SequenceKind::Table => {
                let max_degree = self.max_degree.ok_or_else(|| {
                    Error::Parse("table document needs a max_degree field".into())
                })?;
                let entries = self
                    .entries
                    .as_ref()
                    .ok_or_else(|| Error::Parse("table document needs an entries field".into()))?;
                let pairs = entries
                    .iter()
                    .map(|e| {
                        Ok((
                            MultiIndex::new(self.n, e.j.clone())?,
                            T::from_value_doc(&e.value)?,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                MultidimensionalSequence::from_table(self.n, max_degree, pairs)
            }
        }
    }

    pub fn to_generating_vector<T: FromValueDoc>(&self) -> Result<GeneratingVector<T>> {
        let values = self
            .generating_vector
            .as_ref()
            .ok_or_else(|| Error::Parse("document carries no generating_vector field".into()))?;
        GeneratingVector::new(
            values
                .iter()
                .map(T::from_value_doc)
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorEntryDoc {
    pub idx: Vec<usize>,
    pub value: ValueDoc,
}

/// Dense symmetric tensor document (sorted index tuples only).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorDoc {
    pub m: usize,
    pub n: usize,
    pub mode: String,
    pub entries: Vec<TensorEntryDoc>,
}

impl TensorDoc {
    pub fn from_tensor<T: Scalar>(tensor: &SymmetricTensor<T>) -> Self {
        Self {
            m: tensor.order(),
            n: tensor.dimension(),
            mode: T::MODE_NAME.to_string(),
            entries: tensor
                .iter()
                .map(|(idx, value)| TensorEntryDoc {
                    idx,
                    value: ValueDoc::from_scalar(value),
                })
                .collect(),
        }
    }

    pub fn to_tensor<T: FromValueDoc>(&self) -> Result<SymmetricTensor<T>> {
        if self.m < 1 {
            return Err(Error::Parse("tensor document needs m >= 1".into()));
        }
        let mut tensor = SymmetricTensor::zeros(self.m, self.n)?;
        for entry in &self.entries {
            tensor.set(&entry.idx, T::from_value_doc(&entry.value)?)?;
        }
        Ok(tensor)
    }
}

/// PSD certificate document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub verdict: String,
    pub p: usize,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<ValueDoc>>,
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl CertificateDoc {
    pub fn from_report<T: Scalar>(report: &PsdReport<T>, p: usize) -> Self {
        Self {
            verdict: report.verdict.as_str().to_string(),
            p,
            rank: report.rank,
            witness: report
                .witness
                .as_ref()
                .map(|w| w.iter().map(ValueDoc::from_scalar).collect()),
            mode: T::MODE_NAME.to_string(),
            tolerance: report.tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomDoc {
    pub t: f64,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualDoc {
    pub max_abs: f64,
    pub max_rel: f64,
}

/// Decomposition document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionDoc {
    pub m: usize,
    pub n: usize,
    pub atoms: Vec<AtomDoc>,
    pub augmented_c: f64,
    pub residual: ResidualDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrongCheckDoc {
    pub p: usize,
    pub verdict: String,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_min: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitDoc {
    pub m: usize,
    pub r: usize,
    pub residual: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateDoc {
    pub id: usize,
    pub vector: Vec<f64>,
    pub strong_check: StrongCheckDoc,
    pub fits: Vec<FitDoc>,
}

/// Explorer report document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExploreReportDoc {
    pub evaluated: usize,
    pub qualifying: usize,
    pub candidates: Vec<CandidateDoc>,
}

impl ExploreReportDoc {
    pub fn from_report(report: &SearchReport) -> Self {
        Self {
            evaluated: report.evaluated,
            qualifying: report.qualifying,
            candidates: report
                .candidates
                .iter()
                .map(|c| CandidateDoc {
                    id: c.id,
                    vector: c.vector.clone(),
                    strong_check: StrongCheckDoc {
                        p: c.strong_check.p,
                        verdict: c.strong_check.verdict.clone(),
                        rank: c.strong_check.rank,
                        lambda_min: c.strong_check.lambda_min,
                    },
                    fits: c
                        .fits
                        .iter()
                        .map(|f| FitDoc {
                            m: f.order,
                            r: f.rank,
                            residual: f.residual,
                            converged: f.converged,
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FamilyValuesDoc {
    #[serde(rename = "grid")]
    Grid(Vec<Vec<f64>>),
    #[serde(rename = "random")]
    Random { count: usize, low: f64, high: f64 },
}

/// Truncated-family document for the explorer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub n: usize,
    pub m_max: usize,
    pub pattern: Vec<usize>,
    pub values: FamilyValuesDoc,
    #[serde(default)]
    pub seed: u64,
}

impl FamilyDoc {
    pub fn to_family(&self) -> TruncatedFamily {
        TruncatedFamily {
            dimension: self.n,
            max_order: self.m_max,
            pattern: self.pattern.clone(),
            values: match &self.values {
                FamilyValuesDoc::Grid(g) => ValueSource::Grid(g.clone()),
                FamilyValuesDoc::Random { count, low, high } => ValueSource::Random {
                    count: *count,
                    low: *low,
                    high: *high,
                },
            },
            seed: self.seed,
        }
    }

    pub fn from_family(family: &TruncatedFamily) -> Self {
        Self {
            n: family.dimension,
            m_max: family.max_order,
            pattern: family.pattern.clone(),
            values: match &family.values {
                ValueSource::Grid(g) => FamilyValuesDoc::Grid(g.clone()),
                ValueSource::Random { count, low, high } => FamilyValuesDoc::Random {
                    count: *count,
                    low: *low,
                    high: *high,
                },
            },
            seed: family.seed,
        }
    }
}

/// JSON formatter writing every float with 17 significant digits in
/// scientific notation; everything else follows the compact defaults.
pub struct SciFloatFormatter;

impl serde_json::ser::Formatter for SciFloatFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        debug_assert!(value.is_finite());
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.7e}")
    }
}

/// Canonical serialization: fixed field order (declaration order), floats at
/// 17 significant digits. Byte-identical for identical inputs.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut serializer = serde_json::Serializer::with_formatter(&mut out, SciFloatFormatter);
    value
        .serialize(&mut serializer)
        .map_err(|e| Error::Parse(format!("serialization failed: {e}")))?;
    String::from_utf8(out).map_err(|e| Error::Parse(format!("non-utf8 output: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn value_doc_parses_both_modes() {
        let doc = ValueDoc::Text("1/3".into());
        assert_eq!(doc.to_rational().unwrap(), ratio(1, 3));
        assert!((doc.to_f64().unwrap() - 1.0 / 3.0).abs() < 1e-16);

        let doc = ValueDoc::Number(5.0);
        assert_eq!(doc.to_rational().unwrap(), ratio(5, 1));
        assert_eq!(doc.to_f64().unwrap(), 5.0);
    }

    #[test]
    fn exact_mode_rejects_non_integer_numbers() {
        let doc = ValueDoc::Number(0.1);
        assert!(doc.to_rational().is_err());
    }

    #[test]
    fn rational_round_trip_is_bit_exact() {
        let value = ratio(-22, 7);
        let doc = ValueDoc::from_scalar(&value);
        assert_eq!(doc, ValueDoc::Text("-22/7".into()));
        assert_eq!(doc.to_rational().unwrap(), value);
    }

    #[test]
    fn sequence_doc_round_trip() {
        let text = r#"{
            "n": 2,
            "kind": "hankel-rule",
            "generating_vector": ["1", "1/2", "1/3", "1/4"]
        }"#;
        let doc: SequenceDoc = serde_json::from_str(text).unwrap();
        let v: GeneratingVector<BigRational> = doc.to_generating_vector().unwrap();
        assert_eq!(v.values()[3], ratio(1, 4));
        let s: MultidimensionalSequence<f64> = doc.to_sequence().unwrap();
        assert_eq!(s.dimension(), 2);
    }

    #[test]
    fn table_doc_parses() {
        let text = r#"{
            "n": 3,
            "kind": "table",
            "max_degree": 1,
            "entries": [
                {"j": [0, 0], "value": 1.5},
                {"j": [1, 0], "value": 2},
                {"j": [0, 1], "value": -0.25}
            ]
        }"#;
        let doc: SequenceDoc = serde_json::from_str(text).unwrap();
        let s: MultidimensionalSequence<f64> = doc.to_sequence().unwrap();
        let j = MultiIndex::new(3, vec![0, 1]).unwrap();
        assert_eq!(s.value(&j).unwrap(), -0.25);
    }

    #[test]
    fn table_doc_missing_fields_rejected() {
        let text = r#"{"n": 3, "kind": "table"}"#;
        let doc: SequenceDoc = serde_json::from_str(text).unwrap();
        assert!(doc.to_sequence::<f64>().is_err());
    }

    #[test]
    fn tensor_doc_round_trip() {
        let tensor =
            SymmetricTensor::from_fn(2, 2, |idx| (idx.iter().sum::<usize>() + 1) as f64).unwrap();
        let doc = TensorDoc::from_tensor(&tensor);
        assert_eq!(doc.mode, "float");
        let back: SymmetricTensor<f64> = doc.to_tensor().unwrap();
        assert_eq!(back, tensor);
    }

    #[test]
    fn canonical_float_formatting() {
        #[derive(Serialize)]
        struct Sample {
            x: f64,
            y: f64,
            k: usize,
        }
        let s = to_canonical_json(&Sample {
            x: 1.0,
            y: -0.5,
            k: 3,
        })
        .unwrap();
        assert_eq!(
            s,
            r#"{"x":1.0000000000000000e0,"y":-5.0000000000000000e-1,"k":3}"#
        );
        // round trip is lossless
        let parsed: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(parsed["y"].as_f64().unwrap(), -0.5);
    }

    #[test]
    fn canonical_json_is_deterministic() {
        let doc = DecompositionDoc {
            m: 4,
            n: 3,
            atoms: vec![AtomDoc { t: -1.0, w: 1.0 }, AtomDoc { t: 1.0, w: 1.0 }],
            augmented_c: 0.0,
            residual: ResidualDoc {
                max_abs: 1.1e-16,
                max_rel: 5.5e-17,
            },
        };
        assert_eq!(
            to_canonical_json(&doc).unwrap(),
            to_canonical_json(&doc).unwrap()
        );
    }

    #[test]
    fn family_doc_round_trip() {
        let family = TruncatedFamily::preset(3, 6);
        let doc = FamilyDoc::from_family(&family);
        assert_eq!(doc.to_family(), family);
        let text = to_canonical_json(&doc).unwrap();
        let back: FamilyDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
    }
}
