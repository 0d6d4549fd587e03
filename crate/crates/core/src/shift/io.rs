//! JSON documents for presentations.
//!
//! Two input forms are accepted:
//! `{"alphabet": [...], "forbidden": [...]}` and
//! `{"vertices": [...], "edges": [["u", "sym", "v"], ...]}` (alphabet optional).
//! Output is always the graph form with alphabet and origin, which re-parses
//! to an identical presentation.

use serde::{Deserialize, Serialize};

use super::alphabet::{Alphabet, Word};
use super::forbidden::build_from_forbidden;
use super::presentation::{Origin, SftPresentation};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SftDocument {
    Forbidden {
        alphabet: Vec<String>,
        forbidden: Vec<String>,
    },
    Graph {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alphabet: Option<Vec<String>>,
        vertices: Vec<String>,
        edges: Vec<(String, String, String)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        origin: Option<Origin>,
    },
}

impl SftDocument {
    pub fn build(&self) -> Result<SftPresentation> {
        match self {
            SftDocument::Forbidden {
                alphabet,
                forbidden,
            } => {
                let alphabet = Alphabet::new(alphabet.iter().cloned())?;
                if alphabet.is_empty() {
                    return Err(Error::EmptyShift);
                }
                let words = forbidden
                    .iter()
                    .map(|w| {
                        let t = alphabet.tokenize(w)?;
                        if t.is_empty() {
                            Err(Error::EmptyWord)
                        } else {
                            Ok(t)
                        }
                    })
                    .collect::<Result<Vec<Word>>>()?;
                build_from_forbidden(alphabet, &words)
            }
            SftDocument::Graph {
                alphabet,
                vertices,
                edges,
                origin,
            } => {
                let names: Vec<String> = match alphabet {
                    Some(a) => a.clone(),
                    None => edges.iter().map(|(_, s, _)| s.clone()).collect(),
                };
                let alphabet = Alphabet::new(names)?;
                SftPresentation::from_named_edges(
                    alphabet,
                    vertices,
                    edges,
                    origin.clone().unwrap_or(Origin::EdgeShift),
                )
            }
        }
    }

    pub fn from_presentation(x: &SftPresentation) -> Self {
        SftDocument::Graph {
            alphabet: Some(x.alphabet().names().to_vec()),
            vertices: x.vertices().to_vec(),
            edges: x
                .edges()
                .iter()
                .map(|e| {
                    (
                        x.vertex_name(e.source).to_string(),
                        x.alphabet().name(e.symbol).to_string(),
                        x.vertex_name(e.target).to_string(),
                    )
                })
                .collect(),
            origin: Some(x.origin().clone()),
        }
    }
}

pub fn parse_sft(json: &str) -> Result<SftPresentation> {
    let doc: SftDocument = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    doc.build()
}

pub fn to_json(x: &SftPresentation) -> String {
    serde_json::to_string_pretty(&SftDocument::from_presentation(x)).expect("serializable")
}
