//! On-disk specification files.

use std::collections::BTreeMap;

use fibtree::shift::{spec_from_vertex_matrices, Alphabet, BinaryMatrix, MarkovFibSpec, Provenance};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// A shift given either by two direction matrices or by its allowed
/// `[parent, child1, child2]` label triples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub alphabet: Vec<String>,
    #[serde(rename = "A1", default, skip_serializing_if = "Option::is_none")]
    pub a1: Option<Vec<Vec<u8>>>,
    #[serde(rename = "A2", default, skip_serializing_if = "Option::is_none")]
    pub a2: Option<Vec<Vec<u8>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triples: Option<Vec<[String; 3]>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

enum Form<'a> {
    Matrices(&'a [Vec<u8>], &'a [Vec<u8>]),
    Triples(&'a [[String; 3]]),
}

impl SpecDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: SpecDocument = serde_json::from_str(text).map_err(|e| {
            CliError::Input(format!("spec file, line {} column {}: {e}", e.line(), e.column()))
        })?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents always serialize")
    }

    /// Hex SHA-256 of the compact serialization. Field order is fixed and
    /// metadata keys are sorted, so equal documents share a digest.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("documents always serialize");
        hex::encode(Sha256::digest(&canonical))
    }

    fn form(&self) -> Result<Form<'_>, CliError> {
        match (&self.a1, &self.a2, &self.triples) {
            (Some(a1), Some(a2), None) => Ok(Form::Matrices(a1, a2)),
            (None, None, Some(t)) => Ok(Form::Triples(t)),
            (Some(_), None, _) | (None, Some(_), _) => {
                Err(CliError::Input("spec file: A1 and A2 must be given together".into()))
            }
            (Some(_), Some(_), Some(_)) => Err(CliError::Input(
                "spec file: give either A1/A2 or triples, not both".into(),
            )),
            (None, None, None) => Err(CliError::Input("spec file: needs A1/A2 or triples".into())),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let alphabet = self.alphabet()?;
        let k = alphabet.len();
        match self.form()? {
            Form::Matrices(a1, a2) => {
                for (name, m) in [("A1", a1), ("A2", a2)] {
                    if m.len() != k {
                        return Err(CliError::Input(format!(
                            "spec file: {name} has {} rows, expected {k}",
                            m.len()
                        )));
                    }
                    for (r, row) in m.iter().enumerate() {
                        if row.len() != k {
                            return Err(CliError::Input(format!(
                                "spec file: {name} row {r} has {} entries, expected {k}",
                                row.len()
                            )));
                        }
                        if let Some(c) = row.iter().position(|&v| v > 1) {
                            return Err(CliError::Input(format!(
                                "spec file: {name}[{r}][{c}] = {} is not 0 or 1",
                                row[c]
                            )));
                        }
                    }
                }
            }
            Form::Triples(ts) => {
                for (n, t) in ts.iter().enumerate() {
                    for (f, label) in t.iter().enumerate() {
                        if alphabet.index_of(label).is_none() {
                            return Err(CliError::Input(format!(
                                "spec file: triples[{n}][{f}] names unknown symbol {label:?}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn alphabet(&self) -> Result<Alphabet, CliError> {
        Alphabet::new(self.alphabet.iter().cloned()).map_err(|e| CliError::Input(format!("spec file: alphabet: {e}")))
    }

    /// The specification without viability pruning.
    pub fn to_raw_spec(&self) -> Result<MarkovFibSpec, CliError> {
        let alphabet = self.alphabet()?;
        let (triples, provenance) = match self.form()? {
            Form::Matrices(a1, a2) => {
                let (m1, m2) = (matrix(a1)?, matrix(a2)?);
                let k = alphabet.len();
                let mut t = Vec::new();
                for i in 0..k {
                    for j1 in (0..k).filter(|&j| m1.get(i, j)) {
                        for j2 in (0..k).filter(|&j| m2.get(i, j)) {
                            t.push((i, j1, j2));
                        }
                    }
                }
                (t, Provenance::VertexMatrices { a1: m1, a2: m2 })
            }
            Form::Triples(ts) => (self.triple_indices(&alphabet, ts), Provenance::Raw),
        };
        MarkovFibSpec::unpruned(alphabet, triples, provenance).map_err(CliError::from)
    }

    /// The pruned specification. Fails with an empty-shift error when no
    /// symbol survives.
    pub fn to_spec(&self) -> Result<MarkovFibSpec, CliError> {
        let alphabet = self.alphabet()?;
        match self.form()? {
            Form::Matrices(a1, a2) => spec_from_vertex_matrices(alphabet, &matrix(a1)?, &matrix(a2)?),
            Form::Triples(ts) => {
                let t = self.triple_indices(&alphabet, ts);
                MarkovFibSpec::from_triples(alphabet, t, Provenance::Raw)
            }
        }
        .map_err(CliError::from)
    }

    fn triple_indices(&self, alphabet: &Alphabet, ts: &[[String; 3]]) -> Vec<(usize, usize, usize)> {
        let idx = |l: &str| alphabet.index_of(l).expect("validated labels");
        ts.iter().map(|[p, c1, c2]| (idx(p), idx(c1), idx(c2))).collect()
    }

    /// Document describing `spec`: matrices when it came from matrices,
    /// otherwise its triple set.
    pub fn from_spec(spec: &MarkovFibSpec) -> Self {
        let alphabet = spec.alphabet();
        let mut doc = SpecDocument {
            alphabet: alphabet.labels().to_vec(),
            a1: None,
            a2: None,
            triples: None,
            metadata: BTreeMap::new(),
        };
        match spec.provenance() {
            Provenance::VertexMatrices { a1, a2 } => {
                doc.a1 = Some(a1.to_rows());
                doc.a2 = Some(a2.to_rows());
            }
            Provenance::PatternSet | Provenance::Raw => {
                let l = |s: usize| alphabet.label(s).to_string();
                doc.triples = Some(spec.triples().iter().map(|&(i, a, b)| [l(i), l(a), l(b)]).collect());
            }
        }
        doc
    }
}

fn matrix(rows: &[Vec<u8>]) -> Result<BinaryMatrix, CliError> {
    BinaryMatrix::new(rows).map_err(CliError::from)
}
