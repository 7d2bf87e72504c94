//! Fault-avoiding Hamiltonian path construction.
//!
//! The base case is exhaustive backtracking on a complete graph. For k >= 1
//! the graph is split along the fault-heaviest dimension, a Hamiltonian path
//! of the contracted label graph is found, and intra-subgraph paths are
//! stitched together across fault-free cross edges. A source and terminal
//! sharing a subgraph are handled by detouring one path edge through the
//! remaining subgraphs.

use crate::error::{Error, Result};
use crate::pef::{self, FaultSet};
use crate::topology::{self, Dims, Edge, NodeId};

/// A simple path as a node sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    nodes: Vec<NodeId>,
}

impl Path {
    pub fn new(nodes: Vec<NodeId>) -> Self {
        Path { nodes }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn first(&self) -> &NodeId {
        &self.nodes[0]
    }

    pub fn last(&self) -> &NodeId {
        self.nodes.last().unwrap()
    }

    pub fn reversed(&self) -> Path {
        let mut nodes = self.nodes.clone();
        nodes.reverse();
        Path::new(nodes)
    }

    /// Consecutive node pairs in path order.
    pub fn steps(&self) -> impl Iterator<Item = (&NodeId, &NodeId)> {
        self.nodes.windows(2).map(|w| (&w[0], &w[1]))
    }

    /// Append `other`, whose first node must be adjacent to our last.
    pub fn join(mut self, other: Path) -> Path {
        self.nodes.extend(other.nodes);
        Path::new(self.nodes)
    }

    /// Replace the step (nodes[i], nodes[i+1]) by the detour sequence.
    pub fn with_detour(&self, i: usize, detour: &Path) -> Path {
        let mut nodes = Vec::with_capacity(self.nodes.len() + detour.len());
        nodes.extend_from_slice(&self.nodes[..=i]);
        nodes.extend_from_slice(&detour.nodes);
        nodes.extend_from_slice(&self.nodes[i + 1..]);
        Path::new(nodes)
    }

    /// Split after position i: (nodes[..=i], nodes[i+1..]).
    pub fn split_after(&self, i: usize) -> (Path, Path) {
        (
            Path::new(self.nodes[..=i].to_vec()),
            Path::new(self.nodes[i + 1..].to_vec()),
        )
    }

    /// Index of the step whose endpoints are (u, v) in this order.
    pub fn step_index(&self, u: &NodeId, v: &NodeId) -> Option<usize> {
        self.nodes.windows(2).position(|w| &w[0] == u && &w[1] == v)
    }

    pub fn project(&self, dims: Dims, split_dim: u8) -> Result<Path> {
        let nodes = self
            .nodes
            .iter()
            .map(|u| topology::project_node(dims, u, split_dim))
            .collect::<Result<_>>()?;
        Ok(Path::new(nodes))
    }

    pub fn lift(&self, dims: Dims, split_dim: u8, m: u8) -> Result<Path> {
        let nodes = self
            .nodes
            .iter()
            .map(|u| topology::lift_node(dims, u, split_dim, m))
            .collect::<Result<_>>()?;
        Ok(Path::new(nodes))
    }
}

/// Label graph over a region: labels adjacent when their subgraphs retain at
/// least `threshold` fault-free cross edges (3 for regions, 2 for the four-
/// subgraph case).
#[derive(Clone, Debug)]
pub struct ContractedGraph {
    labels: Vec<u8>,
    threshold: u64,
    adjacent: Vec<(u8, u8)>,
}

impl ContractedGraph {
    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn is_adjacent(&self, i: u8, j: u8) -> bool {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.adjacent.contains(&(a, b))
    }
}

/// Build the contracted graph of a label region.
pub fn contracted_graph(
    omega: &[u8],
    f: &FaultSet,
    split_dim: u8,
    threshold: u64,
) -> Result<ContractedGraph> {
    let dims = f.dims();
    let cross_total = (dims.n() as u64).pow(u32::from(dims.k()));
    let mut labels = omega.to_vec();
    labels.sort_unstable();
    labels.dedup();
    let mut adjacent = Vec::new();
    for (idx, &a) in labels.iter().enumerate() {
        for &b in &labels[idx + 1..] {
            let faulty = pef::cross_fault_count(f, a, b, split_dim)?;
            if cross_total - faulty >= threshold {
                adjacent.push((a, b));
            }
        }
    }
    Ok(ContractedGraph {
        labels,
        threshold,
        adjacent,
    })
}

/// Hamiltonian path of the contracted graph from c_i to c_j, by backtracking.
pub fn ham_path_contracted(t: &ContractedGraph, c_i: u8, c_j: u8) -> Result<Vec<u8>> {
    if c_i == c_j {
        return Err(Error::SameLabel(c_i));
    }
    let mut path = vec![c_i];
    let mut used: Vec<bool> = t.labels.iter().map(|&l| l == c_i).collect();
    if dfs_labels(t, c_j, &mut path, &mut used) {
        Ok(path)
    } else {
        Err(Error::NoPath)
    }
}

fn dfs_labels(t: &ContractedGraph, goal: u8, path: &mut Vec<u8>, used: &mut Vec<bool>) -> bool {
    let cur = *path.last().unwrap();
    if path.len() == t.labels.len() {
        return cur == goal;
    }
    for (idx, &next) in t.labels.iter().enumerate() {
        if used[idx] || !t.is_adjacent(cur, next) {
            continue;
        }
        if next == goal && path.len() + 1 != t.labels.len() {
            continue;
        }
        used[idx] = true;
        path.push(next);
        if dfs_labels(t, goal, path, used) {
            return true;
        }
        path.pop();
        used[idx] = false;
    }
    false
}

/// Up to `limit` Hamiltonian label paths from c_i to c_j, in search order.
fn contracted_paths(t: &ContractedGraph, c_i: u8, c_j: u8, limit: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if c_i == c_j || limit == 0 {
        return out;
    }
    let mut path = vec![c_i];
    let mut used: Vec<bool> = t.labels.iter().map(|&l| l == c_i).collect();
    dfs_labels_all(t, c_j, &mut path, &mut used, &mut out, limit);
    out
}

fn dfs_labels_all(
    t: &ContractedGraph,
    goal: u8,
    path: &mut Vec<u8>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<u8>>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    let cur = *path.last().unwrap();
    if path.len() == t.labels.len() {
        if cur == goal {
            out.push(path.clone());
        }
        return;
    }
    for (idx, &next) in t.labels.iter().enumerate() {
        if used[idx] || !t.is_adjacent(cur, next) {
            continue;
        }
        if next == goal && path.len() + 1 != t.labels.len() {
            continue;
        }
        used[idx] = true;
        path.push(next);
        dfs_labels_all(t, goal, path, used, out, limit);
        path.pop();
        used[idx] = false;
        if out.len() >= limit {
            return;
        }
    }
}

/// (s,t)-Hamiltonian path of K_n - F by exhaustive backtracking over
/// canonical neighbor order. Guaranteed solvable for |F| <= n-4 and n >= 4.
pub fn ham_path_complete(n: u8, f: &FaultSet, s: &NodeId, t: &NodeId) -> Result<Path> {
    let dims = Dims::new(n, 0)?;
    if s == t {
        return Err(Error::InvalidQuad("s and t must differ".into()));
    }
    let faulty = fault_matrix(dims, f);
    let mut order = vec![s.code() as usize];
    let mut used = vec![false; n as usize];
    used[s.code() as usize] = true;
    if dfs_complete(
        n as usize,
        &faulty,
        t.code() as usize,
        &mut order,
        &mut used,
    ) {
        let nodes = order
            .into_iter()
            .map(|c| NodeId::from_code(dims, c as u64))
            .collect();
        Ok(Path::new(nodes))
    } else {
        Err(Error::NoPath)
    }
}

fn fault_matrix(dims: Dims, f: &FaultSet) -> Vec<Vec<bool>> {
    let n = dims.n() as usize;
    let mut faulty = vec![vec![false; n]; n];
    for e in f.iter() {
        let (a, b) = (e.a().code() as usize, e.b().code() as usize);
        faulty[a][b] = true;
        faulty[b][a] = true;
    }
    faulty
}

fn dfs_complete(
    n: usize,
    faulty: &[Vec<bool>],
    goal: usize,
    order: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    let cur = *order.last().unwrap();
    if order.len() == n {
        return cur == goal;
    }
    for next in 0..n {
        if used[next] || faulty[cur][next] {
            continue;
        }
        if next == goal && order.len() + 1 != n {
            continue;
        }
        used[next] = true;
        order.push(next);
        if dfs_complete(n, faulty, goal, order, used) {
            return true;
        }
        order.pop();
        used[next] = false;
    }
    false
}

fn cross_edge_ok(dims: Dims, f: &FaultSet, u: &NodeId, split_dim: u8, l: u8) -> Result<bool> {
    let v = topology::cross_neighbor(dims, u, split_dim, l)?;
    let e = Edge::new(u.clone(), v)?;
    Ok(!f.contains(&e))
}

/// Hamiltonian path entry -> exit inside BC[m], computed recursively on the
/// projected subgraph with inherited faults and lifted back.
fn intra_ham(
    dims: Dims,
    f: &FaultSet,
    split_dim: u8,
    m: u8,
    entry: &NodeId,
    exit: &NodeId,
) -> Result<Path> {
    let inner = dims.inner()?;
    let sub_f = pef::subgraph_faults(f, m, split_dim)?;
    let s = topology::project_node(dims, entry, split_dim)?;
    let t = topology::project_node(dims, exit, split_dim)?;
    let p = ham_path_bcube(inner, &sub_f, &s, &t)?;
    p.lift(dims, split_dim, m)
}

/// Concretize a label path over `omega` into an (s,t)-Hamiltonian path of
/// BC[omega] - F. Exit nodes are scanned in canonical order with
/// backtracking across subgraphs.
pub fn stitch_region(
    omega: &[u8],
    f: &FaultSet,
    split_dim: u8,
    s: &NodeId,
    t: &NodeId,
    label_path: &[u8],
) -> Result<Path> {
    let dims = f.dims();
    debug_assert_eq!(label_path.len(), omega.len());
    if label_path.len() == 1 {
        // single-subgraph region: plain intra-subgraph Hamiltonian path
        return intra_ham(dims, f, split_dim, label_path[0], s, t);
    }
    stitch_from(dims, f, split_dim, label_path, 0, s, t)
        .ok_or(Error::NoPath)
        .and_then(|p| p)
}

fn stitch_from(
    dims: Dims,
    f: &FaultSet,
    split_dim: u8,
    label_path: &[u8],
    idx: usize,
    entry: &NodeId,
    t: &NodeId,
) -> Option<Result<Path>> {
    let m = label_path[idx];
    if idx == label_path.len() - 1 {
        return Some(intra_ham(dims, f, split_dim, m, entry, t));
    }
    let next = label_path[idx + 1];
    let next_is_last = idx + 1 == label_path.len() - 1;
    for x in dims.nodes().filter(|u| u.label(split_dim) == m) {
        if &x == entry {
            continue;
        }
        match cross_edge_ok(dims, f, &x, split_dim, next) {
            Ok(true) => {}
            Ok(false) => continue,
            Err(e) => return Some(Err(e)),
        }
        let far = match topology::cross_neighbor(dims, &x, split_dim, next) {
            Ok(v) => v,
            Err(e) => return Some(Err(e)),
        };
        // the next subgraph's terminal must stay free as a path endpoint
        if next_is_last && &far == t {
            continue;
        }
        let head = match intra_ham(dims, f, split_dim, m, entry, &x) {
            Ok(p) => p,
            Err(Error::NoPath) => continue,
            Err(e) => return Some(Err(e)),
        };
        match stitch_from(dims, f, split_dim, label_path, idx + 1, &far, t) {
            Some(Ok(tail)) => return Some(Ok(head.join(tail))),
            Some(Err(e)) => return Some(Err(e)),
            None => continue,
        }
    }
    None
}

/// Collect up to `limit` distinct stitchings of one label path, varying the
/// exit node chosen in each intermediate subgraph.
#[allow(clippy::too_many_arguments)]
fn stitch_collect(
    dims: Dims,
    f: &FaultSet,
    split_dim: u8,
    label_path: &[u8],
    idx: usize,
    entry: &NodeId,
    t: &NodeId,
    out: &mut Vec<Path>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    let m = label_path[idx];
    if idx == label_path.len() - 1 {
        if let Ok(p) = intra_ham(dims, f, split_dim, m, entry, t) {
            out.push(p);
        }
        return;
    }
    let next = label_path[idx + 1];
    let next_is_last = idx + 1 == label_path.len() - 1;
    for x in dims.nodes().filter(|u| u.label(split_dim) == m) {
        if out.len() >= limit {
            return;
        }
        if &x == entry {
            continue;
        }
        match cross_edge_ok(dims, f, &x, split_dim, next) {
            Ok(true) => {}
            _ => continue,
        }
        let far = match topology::cross_neighbor(dims, &x, split_dim, next) {
            Ok(v) => v,
            Err(_) => continue,
        };
        if next_is_last && &far == t {
            continue;
        }
        let head = match intra_ham(dims, f, split_dim, m, entry, &x) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let mark = out.len();
        stitch_collect(dims, f, split_dim, label_path, idx + 1, &far, t, out, limit);
        for tail in out.split_off(mark) {
            out.push(head.clone().join(tail));
        }
    }
}

/// Up to `limit` distinct (s,t)-Hamiltonian paths of BC[omega] - F, produced
/// lazily over (contracted label path, exit-node choices) in canonical
/// order. The first element matches what [`ham_path_region`] returns.
pub fn region_ham_path_variants(
    omega: &[u8],
    f: &FaultSet,
    split_dim: u8,
    s: &NodeId,
    t: &NodeId,
    limit: usize,
) -> Result<Vec<Path>> {
    let l_s = s.label(split_dim);
    let l_t = t.label(split_dim);
    if l_s == l_t {
        return Err(Error::InvalidQuad(
            "region endpoints must lie in distinct subgraphs".into(),
        ));
    }
    let dims = f.dims();
    let contracted = contracted_graph(omega, f, split_dim, 3)?;
    let mut out = Vec::new();
    for label_path in contracted_paths(&contracted, l_s, l_t, limit) {
        stitch_collect(dims, f, split_dim, &label_path, 0, s, t, &mut out, limit);
        if out.len() >= limit {
            break;
        }
    }
    if out.is_empty() {
        Err(Error::NoPath)
    } else {
        Ok(out)
    }
}

/// (s,t)-Hamiltonian path of BC[omega] - F where s and t lie in distinct
/// labels of omega. Success is guaranteed for f-PEF faults and
/// |omega| >= n-2.
pub fn ham_path_region(
    omega: &[u8],
    f: &FaultSet,
    split_dim: u8,
    s: &NodeId,
    t: &NodeId,
) -> Result<Path> {
    let l_s = s.label(split_dim);
    let l_t = t.label(split_dim);
    if l_s == l_t {
        return Err(Error::InvalidQuad(
            "region endpoints must lie in distinct subgraphs".into(),
        ));
    }
    let contracted = contracted_graph(omega, f, split_dim, 3)?;
    let label_path = ham_path_contracted(&contracted, l_s, l_t)?;
    stitch_region(contracted.labels(), f, split_dim, s, t, &label_path)
}

/// (s,t)-Hamiltonian path of BC(n,k) - F for any f-PEF fault set.
pub fn ham_path_bcube(dims: Dims, f: &FaultSet, s: &NodeId, t: &NodeId) -> Result<Path> {
    if s == t {
        return Err(Error::InvalidQuad("s and t must differ".into()));
    }
    if dims.k() == 0 {
        return ham_path_complete(dims.n(), f, s, t);
    }
    let d = pef::split_dimension(f);
    let l_s = s.label(d);
    let l_t = t.label(d);
    let all: Vec<u8> = dims.labels().collect();
    if l_s != l_t {
        return ham_path_region(&all, f, d, s, t);
    }

    // same-subgraph endpoints: build the intra path, then detour one of its
    // edges through a Hamiltonian path of the remaining subgraphs
    let m = l_s;
    let intra = intra_ham(dims, f, d, m, s, t)?;
    let omega1: Vec<u8> = all.iter().copied().filter(|&l| l != m).collect();
    let (x, x_star, l1, l2) = crate::dpc::find_exit_pair(&[&intra], &omega1, f, d)?;
    let a = topology::cross_neighbor(dims, &x, d, l1)?;
    let b = topology::cross_neighbor(dims, &x_star, d, l2)?;
    let detour = ham_path_region(&omega1, f, d, &a, &b)?;
    let i = intra
        .step_index(&x, &x_star)
        .expect("exit pair lies on the intra path");
    Ok(intra.with_detour(i, &detour))
}
