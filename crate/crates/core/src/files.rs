//! On-disk document formats: fault sets, paths, and covers as JSON, and
//! line-delimited sweep records.

use serde::{Deserialize, Serialize};

use crate::dpc::{Dpc, EndpointQuad, TraceEntry};
use crate::error::{Error, Result};
use crate::hampath::Path;
use crate::pef::FaultSet;
use crate::topology::{Dims, Edge, NodeId};

/// Self-describing fault-set document: embeds (n, k) so the edge strings can
/// be decoded without extra context.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FaultFile {
    pub n: u8,
    pub k: u8,
    pub edges: Vec<[String; 2]>,
}

impl FaultFile {
    pub fn from_fault_set(f: &FaultSet) -> Self {
        let dims = f.dims();
        FaultFile {
            n: dims.n(),
            k: dims.k(),
            edges: f
                .iter()
                .map(|e| [dims.format_node(e.a()), dims.format_node(e.b())])
                .collect(),
        }
    }

    pub fn to_fault_set(&self) -> Result<FaultSet> {
        let dims = Dims::new(self.n, self.k)?;
        let edges = self
            .edges
            .iter()
            .map(|[a, b]| {
                let u = dims.parse_node(a)?;
                let v = dims.parse_node(b)?;
                Edge::new(u, v).map_err(|_| Error::InvalidFaultEdge(format!("({a}, {b})")))
            })
            .collect::<Result<Vec<_>>>()?;
        FaultSet::new(dims, edges)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathDoc {
    pub n: u8,
    pub k: u8,
    pub path: Vec<String>,
}

impl PathDoc {
    pub fn new(dims: Dims, p: &Path) -> Self {
        PathDoc {
            n: dims.n(),
            k: dims.k(),
            path: p.nodes().iter().map(|u| dims.format_node(u)).collect(),
        }
    }

    pub fn decode(&self) -> Result<(Dims, Path)> {
        let dims = Dims::new(self.n, self.k)?;
        let nodes = self
            .path
            .iter()
            .map(|s| dims.parse_node(s))
            .collect::<Result<Vec<NodeId>>>()?;
        Ok((dims, Path::new(nodes)))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DpcDoc {
    pub n: u8,
    pub k: u8,
    pub p1: Vec<String>,
    pub p2: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub case_trace: Vec<TraceEntry>,
}

impl DpcDoc {
    pub fn new(dims: Dims, d: &Dpc, case_trace: Vec<TraceEntry>) -> Self {
        DpcDoc {
            n: dims.n(),
            k: dims.k(),
            p1: d.p1.nodes().iter().map(|u| dims.format_node(u)).collect(),
            p2: d.p2.nodes().iter().map(|u| dims.format_node(u)).collect(),
            case_trace,
        }
    }

    pub fn decode(&self) -> Result<(Dims, Dpc, EndpointQuad)> {
        let dims = Dims::new(self.n, self.k)?;
        let parse = |strings: &[String]| -> Result<Path> {
            let nodes = strings
                .iter()
                .map(|s| dims.parse_node(s))
                .collect::<Result<Vec<_>>>()?;
            Ok(Path::new(nodes))
        };
        let p1 = parse(&self.p1)?;
        let p2 = parse(&self.p2)?;
        if p1.is_empty() || p2.is_empty() {
            return Err(Error::InvalidQuad("empty path in document".into()));
        }
        let q = EndpointQuad::new(
            p1.first().clone(),
            p1.last().clone(),
            p2.first().clone(),
            p2.last().clone(),
        )?;
        Ok((dims, Dpc { p1, p2 }, q))
    }
}

/// One sweep trial, emitted as a line-delimited JSON record.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepRecord {
    pub trial: usize,
    pub n: u8,
    pub k: u8,
    pub fill: f64,
    pub seed: u64,
    pub fault_count: usize,
    pub endpoints: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub case_trace: Vec<TraceEntry>,
    pub verified: bool,
    pub elapsed_ms: f64,
}
