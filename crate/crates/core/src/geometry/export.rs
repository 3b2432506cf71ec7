use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{CosetComplex, GeometryError, SimplicialComplex};
use crate::matgroup::ParamsSummary;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    #[serde(rename = "type")]
    pub ty: u8,
    pub rep_code: String,
}

/// JSON form of a complex: parameters, typed vertices with representative
/// codes, and the simplices of each dimension >= 1 as sorted vertex lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexExport {
    pub params: ParamsSummary,
    pub vertices: Vec<VertexRecord>,
    /// simplices[d - 1] holds the d-simplices.
    pub simplices: Vec<Vec<Vec<u32>>>,
}

impl ComplexExport {
    pub fn from_simplicial(params: ParamsSummary, x: &SimplicialComplex) -> Self {
        let vertices = x.vertex_types.iter().zip(&x.vertex_labels).map(|(&ty, l)| VertexRecord { ty, rep_code: l.clone() }).collect();
        ComplexExport { params, vertices, simplices: x.simplices.iter().skip(1).cloned().collect() }
    }

    pub fn from_complex(x: &CosetComplex) -> Self {
        Self::from_simplicial(x.system().params().summary(), &x.to_simplicial())
    }

    pub fn to_simplicial(&self) -> SimplicialComplex {
        let types = self.vertices.iter().map(|v| v.ty).collect();
        let labels = self.vertices.iter().map(|v| v.rep_code.clone()).collect();
        SimplicialComplex::from_simplices(types, labels, self.simplices.iter().flatten().cloned())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serialisable");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, GeometryError> {
        let out: Self = serde_json::from_str(s).map_err(|e| GeometryError::Format(e.to_string()))?;
        let nv = out.vertices.len() as u32;
        if out.simplices.iter().flatten().flatten().any(|&v| v >= nv) {
            return Err(GeometryError::Format("simplex refers to a missing vertex".into()));
        }
        Ok(out)
    }
}

/// The 1-skeleton in DOT, one `type` attribute per vertex.
pub fn to_dot(x: &SimplicialComplex) -> String {
    let mut s = String::from("graph skeleton {\n");
    for (v, ty) in x.vertex_types.iter().enumerate() {
        let _ = writeln!(s, "  v{v} [type={ty}];");
    }
    for e in x.simplices.get(1).map(|v| v.as_slice()).unwrap_or(&[]) {
        let _ = writeln!(s, "  v{} -- v{};", e[0], e[1]);
    }
    s.push_str("}\n");
    s
}

/// Parses the output of [`to_dot`] back into a 1-dimensional complex.
pub fn from_dot(s: &str) -> Result<SimplicialComplex, GeometryError> {
    let bad = |l: &str| GeometryError::Format(format!("unrecognised DOT line: {l}"));
    let vertex = |t: &str| t.trim().strip_prefix('v').and_then(|n| n.parse::<u32>().ok());
    let mut types = Vec::new();
    let mut edges = Vec::new();
    let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
    if lines.next().is_none_or(|l| !l.starts_with("graph")) {
        return Err(GeometryError::Format("missing graph header".into()));
    }
    for l in lines {
        if l == "}" {
            break;
        }
        let body = l.strip_suffix(';').ok_or_else(|| bad(l))?;
        if let Some((a, b)) = body.split_once("--") {
            edges.push(vec![vertex(a).ok_or_else(|| bad(l))?, vertex(b).ok_or_else(|| bad(l))?]);
        } else {
            let (v, attr) = body.split_once('[').ok_or_else(|| bad(l))?;
            let v = vertex(v).ok_or_else(|| bad(l))?;
            let ty = attr.trim_end_matches(']').strip_prefix("type=").and_then(|t| t.parse::<u8>().ok()).ok_or_else(|| bad(l))?;
            if v as usize != types.len() {
                return Err(bad(l));
            }
            types.push(ty);
        }
    }
    if edges.iter().flatten().any(|&v| v as usize >= types.len()) {
        return Err(GeometryError::Format("edge refers to a missing vertex".into()));
    }
    let labels = (0..types.len()).map(|v| v.to_string()).collect();
    Ok(SimplicialComplex::from_simplices(types, labels, edges))
}
