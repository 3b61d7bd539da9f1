//! JSON code documents.
//!
//! Two forms are accepted:
//!
//! ```json
//! {"n":40,"gens":[1,4],"code":[0,1,2,8]}
//! {"n":80,"gens":[1,44],"period":40,"residues":[0,1,2,8]}
//! ```
//!
//! The residue form means `{u : u mod period ∈ residues}` and is expanded on
//! load. Output is always the explicit sorted list.

use serde::{Deserialize, Serialize};

use crate::circulant::{CirculantGraph, Code};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    n: usize,
    #[serde(default)]
    gens: Option<Vec<i64>>,
    #[serde(default)]
    code: Option<Vec<i64>>,
    #[serde(default)]
    period: Option<usize>,
    #[serde(default)]
    residues: Option<Vec<usize>>,
}

/// A parsed code, optionally with the graph it was written for.
#[derive(Debug, Clone)]
pub struct CodeDocument {
    pub graph: Option<CirculantGraph>,
    pub code: Code,
}

#[derive(Serialize)]
struct OutDocument<'a> {
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    gens: Option<&'a [usize]>,
    code: Vec<usize>,
}

impl CodeDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawDocument =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        let n = raw.n;
        let code = match (raw.code, raw.period, raw.residues) {
            (Some(list), None, None) => {
                let mut vs = Vec::with_capacity(list.len());
                for v in list {
                    if v < 0 || v as usize >= n {
                        return Err(Error::VertexOutOfRange {
                            vertex: v.max(0) as usize,
                            n,
                        });
                    }
                    vs.push(v as usize);
                }
                Code::from_vertices(n, &vs)?
            }
            (None, Some(period), Some(residues)) => Code::periodic(n, period, &residues)?,
            _ => {
                return Err(Error::Format(
                    "expected either \"code\" or both \"period\" and \"residues\"".into(),
                ))
            }
        };
        let graph = raw.gens.map(|g| CirculantGraph::folded(n, &g)).transpose()?;
        Ok(CodeDocument { graph, code })
    }

    pub fn to_json(&self) -> String {
        let doc = OutDocument {
            n: self.code.order(),
            gens: self.graph.as_ref().map(|g| g.gens()),
            code: self.code.to_vec(),
        };
        serde_json::to_string(&doc).expect("serializable")
    }
}

/// Parses `"0,1,2"` (whitespace tolerated) into a code of order `n`.
pub fn parse_inline(n: usize, list: &str) -> Result<Code> {
    let mut vs = Vec::new();
    for tok in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let v: usize = tok
            .parse()
            .map_err(|_| Error::Format(format!("not a vertex: {tok:?}")))?;
        vs.push(v);
    }
    Code::from_vertices(n, &vs)
}
