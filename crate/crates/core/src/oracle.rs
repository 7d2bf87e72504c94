//! Independent verification and brute-force ground truth.
//!
//! The verifiers check constructed paths and covers against the fault set
//! without sharing any code with the constructors. The brute searches give
//! definitive existence verdicts on small instances.

use std::collections::HashSet;

use serde::Serialize;

use crate::dpc::{Dpc, EndpointQuad};
use crate::error::{Error, Result};
use crate::hampath::Path;
use crate::pef::FaultSet;
use crate::topology::{self, Dims, NodeId};

/// Default node-count cap for exhaustive 2-DPC search.
pub const DEFAULT_DPC_CAP: u64 = 20;
/// Default node-count cap for exhaustive Hamiltonian path search.
pub const DEFAULT_HAM_CAP: u64 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    DuplicateNode,
    NonAdjacentStep,
    FaultyEdgeUsed,
    WrongEndpoint,
    NotDisjoint,
    IncompleteCover,
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub location: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        VerifyReport {
            ok: violations.is_empty(),
            violations,
        }
    }
}

/// Check endpoints, distinctness, adjacency, fault avoidance, and that the
/// path's node set equals `required_nodes`.
pub fn verify_path(
    p: &Path,
    f: &FaultSet,
    required_nodes: &[NodeId],
    s: &NodeId,
    t: &NodeId,
) -> VerifyReport {
    let mut violations = Vec::new();
    collect_path_violations(p, f, s, t, &mut violations);
    let covered: HashSet<&NodeId> = p.nodes().iter().collect();
    for u in required_nodes {
        if !covered.contains(u) {
            violations.push(Violation {
                kind: ViolationKind::IncompleteCover,
                location: format!("node {} not covered", f.dims().format_node(u)),
            });
        }
    }
    let required: HashSet<&NodeId> = required_nodes.iter().collect();
    for u in p.nodes() {
        if !required.contains(u) {
            violations.push(Violation {
                kind: ViolationKind::IncompleteCover,
                location: format!(
                    "node {} outside the required region",
                    f.dims().format_node(u)
                ),
            });
        }
    }
    VerifyReport::from_violations(violations)
}

fn collect_path_violations(
    p: &Path,
    f: &FaultSet,
    s: &NodeId,
    t: &NodeId,
    violations: &mut Vec<Violation>,
) {
    let dims = f.dims();
    if p.is_empty() {
        violations.push(Violation {
            kind: ViolationKind::WrongEndpoint,
            location: "empty path".into(),
        });
        return;
    }
    if p.first() != s {
        violations.push(Violation {
            kind: ViolationKind::WrongEndpoint,
            location: format!("starts at {}", dims.format_node(p.first())),
        });
    }
    if p.last() != t {
        violations.push(Violation {
            kind: ViolationKind::WrongEndpoint,
            location: format!("ends at {}", dims.format_node(p.last())),
        });
    }
    let mut seen = HashSet::new();
    for (i, u) in p.nodes().iter().enumerate() {
        if !seen.insert(u) {
            violations.push(Violation {
                kind: ViolationKind::DuplicateNode,
                location: format!("position {i}: {}", dims.format_node(u)),
            });
        }
    }
    for (i, (u, v)) in p.steps().enumerate() {
        match topology::Edge::new(u.clone(), v.clone()) {
            Ok(e) => {
                if f.contains(&e) {
                    violations.push(Violation {
                        kind: ViolationKind::FaultyEdgeUsed,
                        location: format!(
                            "step {i}: ({}, {})",
                            dims.format_node(u),
                            dims.format_node(v)
                        ),
                    });
                }
            }
            Err(_) => violations.push(Violation {
                kind: ViolationKind::NonAdjacentStep,
                location: format!(
                    "step {i}: ({}, {})",
                    dims.format_node(u),
                    dims.format_node(v)
                ),
            }),
        }
    }
}

/// Check both paths plus disjointness and whole-graph coverage.
pub fn verify_2dpc(d: &Dpc, f: &FaultSet, dims: Dims, q: &EndpointQuad) -> VerifyReport {
    let mut violations = Vec::new();
    collect_path_violations(&d.p1, f, &q.s1, &q.t1, &mut violations);
    collect_path_violations(&d.p2, f, &q.s2, &q.t2, &mut violations);
    let set1: HashSet<&NodeId> = d.p1.nodes().iter().collect();
    for u in d.p2.nodes() {
        if set1.contains(u) {
            violations.push(Violation {
                kind: ViolationKind::NotDisjoint,
                location: format!("node {} on both paths", dims.format_node(u)),
            });
        }
    }
    if (d.p1.len() + d.p2.len()) as u64 != dims.node_count()
        || dims
            .nodes()
            .any(|u| !set1.contains(&u) && !d.p2.nodes().contains(&u))
    {
        violations.push(Violation {
            kind: ViolationKind::IncompleteCover,
            location: format!(
                "paths cover {} of {} nodes",
                (d.p1.len() + d.p2.len()),
                dims.node_count()
            ),
        });
    }
    VerifyReport::from_violations(violations)
}

/// A small explicit graph for exhaustive search.
#[derive(Clone, Debug)]
pub struct SmallGraph {
    n: usize,
    adj: Vec<Vec<bool>>,
}

impl SmallGraph {
    pub fn new(n: usize) -> Self {
        SmallGraph {
            n,
            adj: vec![vec![false; n]; n],
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        self.adj[a][b] = true;
        self.adj[b][a] = true;
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        self.adj[a][b] = false;
        self.adj[b][a] = false;
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    /// K_n minus the given fault pairs.
    pub fn complete(n: usize, faults: &[(usize, usize)]) -> Self {
        let mut g = SmallGraph::new(n);
        for a in 0..n {
            for b in (a + 1)..n {
                g.add_edge(a, b);
            }
        }
        for &(a, b) in faults {
            g.remove_edge(a, b);
        }
        g
    }

    /// BC(n,k) minus F, nodes indexed by scalar code.
    pub fn from_bcube(f: &FaultSet) -> Self {
        let dims = f.dims();
        let n = dims.node_count() as usize;
        let mut g = SmallGraph::new(n);
        let nodes: Vec<NodeId> = dims.nodes().collect();
        for i in 0..n {
            for j in (i + 1)..n {
                if topology::are_adjacent(&nodes[i], &nodes[j]).unwrap() {
                    g.add_edge(i, j);
                }
            }
        }
        for e in f.iter() {
            g.remove_edge(e.a().code() as usize, e.b().code() as usize);
        }
        g
    }
}

/// Exhaustive (s,t)-Hamiltonian path search; None is a nonexistence verdict.
pub fn brute_ham(g: &SmallGraph, s: usize, t: usize, cap: u64) -> Result<Option<Vec<usize>>> {
    if g.n as u64 > cap {
        return Err(Error::TooLarge {
            nodes: g.n as u64,
            cap,
        });
    }
    let mut order = vec![s];
    let mut used = vec![false; g.n];
    used[s] = true;
    if ham_dfs(g, t, &mut order, &mut used) {
        Ok(Some(order))
    } else {
        Ok(None)
    }
}

fn ham_dfs(g: &SmallGraph, goal: usize, order: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
    let cur = *order.last().unwrap();
    if order.len() == g.n {
        return cur == goal;
    }
    // prune: the goal must stay reachable through unused nodes
    if !reachable(g, cur, goal, used) {
        return false;
    }
    for next in 0..g.n {
        if used[next] || !g.adj[cur][next] {
            continue;
        }
        if next == goal && order.len() + 1 != g.n {
            continue;
        }
        used[next] = true;
        order.push(next);
        if ham_dfs(g, goal, order, used) {
            return true;
        }
        order.pop();
        used[next] = false;
    }
    false
}

fn reachable(g: &SmallGraph, from: usize, to: usize, used: &[bool]) -> bool {
    let mut seen = vec![false; g.n];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(u) = stack.pop() {
        if u == to {
            return true;
        }
        for v in 0..g.n {
            if g.adj[u][v] && !seen[v] && (!used[v] || v == to) {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    false
}

/// Exhaustive paired 2-DPC search: grow p1 until t1, then p2, requiring full
/// coverage. None is a definitive nonexistence verdict.
pub fn brute_2dpc(
    g: &SmallGraph,
    (s1, t1, s2, t2): (usize, usize, usize, usize),
    cap: u64,
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    if g.n as u64 > cap {
        return Err(Error::TooLarge {
            nodes: g.n as u64,
            cap,
        });
    }
    let mut used = vec![false; g.n];
    for &v in &[s1, t1, s2, t2] {
        used[v] = true;
    }
    let mut p1 = vec![s1];
    let mut p2 = vec![s2];
    if dpc_dfs(g, t1, t2, &mut p1, &mut p2, &mut used, false) {
        Ok(Some((p1, p2)))
    } else {
        Ok(None)
    }
}

fn dpc_dfs(
    g: &SmallGraph,
    t1: usize,
    t2: usize,
    p1: &mut Vec<usize>,
    p2: &mut Vec<usize>,
    used: &mut Vec<bool>,
    first_done: bool,
) -> bool {
    if !first_done {
        let cur = *p1.last().unwrap();
        if g.adj[cur][t1] {
            p1.push(t1);
            if dpc_dfs(g, t1, t2, p1, p2, used, true) {
                return true;
            }
            p1.pop();
        }
        for next in 0..g.n {
            if used[next] || !g.adj[cur][next] {
                continue;
            }
            used[next] = true;
            p1.push(next);
            if dpc_dfs(g, t1, t2, p1, p2, used, false) {
                return true;
            }
            p1.pop();
            used[next] = false;
        }
        false
    } else {
        let cur = *p2.last().unwrap();
        let remaining = used.iter().filter(|&&u| !u).count();
        if remaining == 0 {
            if g.adj[cur][t2] {
                p2.push(t2);
                return true;
            }
            return false;
        }
        // prune: t2 must stay reachable from the p2 frontier
        if !reachable(g, cur, t2, used) {
            return false;
        }
        for next in 0..g.n {
            if used[next] || !g.adj[cur][next] {
                continue;
            }
            used[next] = true;
            p2.push(next);
            if dpc_dfs(g, t1, t2, p1, p2, used, true) {
                return true;
            }
            p2.pop();
            used[next] = false;
        }
        false
    }
}

/// Brute Hamiltonian path on BC(n,k) - F, returned in topology coordinates.
pub fn brute_ham_bcube(f: &FaultSet, s: &NodeId, t: &NodeId, cap: u64) -> Result<Option<Path>> {
    let dims = f.dims();
    let g = SmallGraph::from_bcube(f);
    let found = brute_ham(&g, s.code() as usize, t.code() as usize, cap)?;
    Ok(found.map(|order| {
        Path::new(
            order
                .into_iter()
                .map(|c| NodeId::from_code(dims, c as u64))
                .collect(),
        )
    }))
}

/// Brute 2-DPC on BC(n,k) - F, returned in topology coordinates.
pub fn brute_2dpc_bcube(f: &FaultSet, q: &EndpointQuad, cap: u64) -> Result<Option<Dpc>> {
    let dims = f.dims();
    let g = SmallGraph::from_bcube(f);
    let found = brute_2dpc(
        &g,
        (
            q.s1.code() as usize,
            q.t1.code() as usize,
            q.s2.code() as usize,
            q.t2.code() as usize,
        ),
        cap,
    )?;
    Ok(found.map(|(o1, o2)| Dpc {
        p1: Path::new(
            o1.into_iter()
                .map(|c| NodeId::from_code(dims, c as u64))
                .collect(),
        ),
        p2: Path::new(
            o2.into_iter()
                .map(|c| NodeId::from_code(dims, c as u64))
                .collect(),
        ),
    }))
}
