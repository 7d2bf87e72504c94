//! The logical graph BC(n,k) of BCube.
//!
//! Nodes are (k+1)-digit base-n addresses; two nodes are adjacent when their
//! addresses differ in exactly one digit position. Switches are transparent
//! and not modeled. Graphs are generated lazily from `Dims`; no adjacency
//! structure is materialized.

use std::fmt::Write as _;
use std::io::Write;

use arrayvec::ArrayVec;

use crate::error::{Error, Result};

/// Maximum number of digit positions (k + 1) a node address may have.
pub const MAX_LEVELS: usize = 8;

/// The parameters (n, k) of BC(n,k): radix n >= 2 and level index k >= 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dims {
    n: u8,
    k: u8,
}

impl Dims {
    pub fn new(n: u8, k: u8) -> Result<Self> {
        if n < 2 {
            return Err(Error::RadixTooSmall { n, min: 2 });
        }
        if usize::from(k) + 1 > MAX_LEVELS {
            return Err(Error::TooManyLevels {
                k,
                max: (MAX_LEVELS - 1) as u8,
            });
        }
        Ok(Dims { n, k })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    /// Number of digit positions, k + 1.
    pub fn levels(&self) -> usize {
        usize::from(self.k) + 1
    }

    /// n^(k+1) nodes.
    pub fn node_count(&self) -> u64 {
        (self.n as u64).pow(self.levels() as u32)
    }

    /// n^(k+1) * (n-1) * (k+1) / 2 edges.
    pub fn edge_count(&self) -> u64 {
        self.node_count() * (self.n as u64 - 1) * self.levels() as u64 / 2
    }

    /// Dims of the subgraph BC(n,k-1) obtained by fixing one digit.
    pub fn inner(&self) -> Result<Dims> {
        if self.k == 0 {
            return Err(Error::NoSplit);
        }
        Dims::new(self.n, self.k - 1)
    }

    /// All nodes in canonical (scalar code) order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        let dims = *self;
        (0..self.node_count()).map(move |c| NodeId::from_code(dims, c))
    }

    /// All digit values 0..n, usable as subgraph labels.
    pub fn labels(&self) -> impl Iterator<Item = u8> {
        0..self.n
    }

    fn check_dim(&self, dim: u8) -> Result<()> {
        if dim > self.k {
            return Err(Error::DimOutOfRange { dim, k: self.k });
        }
        Ok(())
    }

    fn check_label(&self, label: u8) -> Result<()> {
        if label >= self.n {
            return Err(Error::DigitOutOfRange {
                digit: label,
                n: self.n,
            });
        }
        Ok(())
    }

    /// Canonical textual form: digits a_k..a_0 most significant first,
    /// contiguous for n <= 10, comma-separated otherwise.
    pub fn format_node(&self, u: &NodeId) -> String {
        let mut s = String::new();
        for i in (0..self.levels()).rev() {
            if self.n > 10 && i != self.levels() - 1 {
                s.push(',');
            }
            write!(s, "{}", u.digit(i as u8)).unwrap();
        }
        s
    }

    pub fn parse_node(&self, s: &str) -> Result<NodeId> {
        let msd_first: Vec<u8> = if self.n > 10 {
            s.split(',')
                .map(|p| {
                    p.trim()
                        .parse::<u8>()
                        .map_err(|_| Error::ParseNode(s.into()))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::ParseNode(s.into()))
                })
                .collect::<Result<_>>()?
        };
        if msd_first.len() != self.levels() {
            return Err(Error::ParseNode(s.into()));
        }
        let lsd_first: Vec<u8> = msd_first.into_iter().rev().collect();
        NodeId::from_digits(*self, &lsd_first)
    }
}

/// A server address: digits a_k..a_0 with a cached scalar code
/// sum(a_i * n^i), a bijection onto 0..n^(k+1).
#[derive(Clone, Debug)]
pub struct NodeId {
    digits: ArrayVec<u8, MAX_LEVELS>,
    code: u64,
}

impl NodeId {
    /// Build from digits given least significant first (digits[i] = a_i).
    pub fn from_digits(dims: Dims, digits: &[u8]) -> Result<Self> {
        if digits.len() != dims.levels() {
            return Err(Error::DimsMismatch);
        }
        let mut v = ArrayVec::new();
        let mut code = 0u64;
        for (i, &d) in digits.iter().enumerate() {
            if d >= dims.n() {
                return Err(Error::DigitOutOfRange {
                    digit: d,
                    n: dims.n(),
                });
            }
            code += d as u64 * (dims.n() as u64).pow(i as u32);
            v.push(d);
        }
        Ok(NodeId { digits: v, code })
    }

    /// Decode the scalar code, little-endian in base n.
    pub fn from_code(dims: Dims, code: u64) -> Self {
        debug_assert!(code < dims.node_count());
        let mut digits = ArrayVec::new();
        let mut c = code;
        for _ in 0..dims.levels() {
            digits.push((c % dims.n() as u64) as u8);
            c /= dims.n() as u64;
        }
        NodeId { digits, code }
    }

    pub fn code(&self) -> u64 {
        self.code
    }

    /// Digit a_i at dimension i (0 = least significant).
    pub fn digit(&self, i: u8) -> u8 {
        self.digits[usize::from(i)]
    }

    pub fn levels(&self) -> usize {
        self.digits.len()
    }

    /// Label of the subgraph containing this node for the given split dimension.
    pub fn label(&self, split_dim: u8) -> u8 {
        self.digit(split_dim)
    }

    /// The dimension where self and other differ, if they differ in exactly one.
    pub fn differing_dim(&self, other: &NodeId) -> Result<Option<u8>> {
        if self.digits.len() != other.digits.len() {
            return Err(Error::DimsMismatch);
        }
        let mut found = None;
        for i in 0..self.digits.len() {
            if self.digits[i] != other.digits[i] {
                if found.is_some() {
                    return Ok(None);
                }
                found = Some(i as u8);
            }
        }
        Ok(found)
    }

    /// Copy with digit at `dim` replaced by `value`.
    pub fn with_digit(&self, dims: Dims, dim: u8, value: u8) -> Result<NodeId> {
        dims.check_dim(dim)?;
        dims.check_label(value)?;
        let mut digits = self.digits.clone();
        digits[usize::from(dim)] = value;
        NodeId::from_digits(dims, &digits)
    }
}

impl PartialEq for NodeId {
    fn eq(&self, other: &Self) -> bool {
        self.digits == other.digits
    }
}

impl Eq for NodeId {}

impl std::hash::Hash for NodeId {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.digits.hash(state);
    }
}

impl PartialOrd for NodeId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NodeId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.digits.len(), self.code).cmp(&(other.digits.len(), other.code))
    }
}

/// An undirected BC(n,k) edge in canonical order (smaller code first),
/// tagged with the unique dimension where the endpoints differ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    a: NodeId,
    b: NodeId,
    dim_key: u8,
}

impl Edge {
    pub fn new(u: NodeId, v: NodeId) -> Result<Self> {
        let dim = match u.differing_dim(&v)? {
            Some(d) => d,
            None => {
                let diff = (0..u.levels())
                    .filter(|&i| u.digits[i] != v.digits[i])
                    .count();
                return Err(Error::NotAnEdge(diff));
            }
        };
        let (a, b) = if u.code() <= v.code() { (u, v) } else { (v, u) };
        Ok(Edge { dim_key: dim, a, b })
    }

    pub fn dim(&self) -> u8 {
        self.dim_key
    }

    pub fn a(&self) -> &NodeId {
        &self.a
    }

    pub fn b(&self) -> &NodeId {
        &self.b
    }

    /// The other endpoint, if `u` is an endpoint.
    pub fn other(&self, u: &NodeId) -> Option<&NodeId> {
        if *u == self.a {
            Some(&self.b)
        } else if *u == self.b {
            Some(&self.a)
        } else {
            None
        }
    }

    pub fn endpoints(&self) -> (&NodeId, &NodeId) {
        (&self.a, &self.b)
    }
}

/// A subgraph BC[m] of the partition along `split_dim`; isomorphic to BC(n,k-1).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubgraphRef {
    pub split_dim: u8,
    pub label: u8,
}

/// True iff the two addresses differ in exactly one digit.
pub fn are_adjacent(u: &NodeId, v: &NodeId) -> Result<bool> {
    Ok(u.differing_dim(v)?.is_some())
}

/// The dimension-i edge class E_i, in canonical order.
pub fn dimension_edges(dims: Dims, i: u8) -> Result<Vec<Edge>> {
    dims.check_dim(i)?;
    let mut edges = Vec::new();
    for u in dims.nodes() {
        let du = u.digit(i);
        for d in (du + 1)..dims.n() {
            let v = u.with_digit(dims, i, d)?;
            edges.push(Edge::new(u.clone(), v)?);
        }
    }
    edges.sort();
    Ok(edges)
}

/// The unique neighbor of u inside BC[m'] along `split_dim`.
pub fn cross_neighbor(dims: Dims, u: &NodeId, split_dim: u8, m_prime: u8) -> Result<NodeId> {
    dims.check_dim(split_dim)?;
    dims.check_label(m_prime)?;
    if u.digit(split_dim) == m_prime {
        return Err(Error::SameLabel(m_prime));
    }
    u.with_digit(dims, split_dim, m_prime)
}

/// The cross-edge set E(l1, l2) between BC[l1] and BC[l2]; exactly n^k edges.
pub fn cross_edges(dims: Dims, l1: u8, l2: u8, split_dim: u8) -> Result<Vec<Edge>> {
    dims.check_dim(split_dim)?;
    dims.check_label(l1)?;
    dims.check_label(l2)?;
    if l1 == l2 {
        return Err(Error::SameLabel(l1));
    }
    let mut edges = Vec::new();
    for u in dims.nodes() {
        if u.digit(split_dim) == l1 {
            let v = u.with_digit(dims, split_dim, l2)?;
            edges.push(Edge::new(u, v)?);
        }
    }
    edges.sort();
    Ok(edges)
}

/// Project a node of BC[m] into BC(n,k-1) by deleting digit `split_dim`.
pub fn project_node(dims: Dims, u: &NodeId, split_dim: u8) -> Result<NodeId> {
    let inner = dims.inner()?;
    dims.check_dim(split_dim)?;
    let mut digits = Vec::with_capacity(inner.levels());
    for i in 0..dims.levels() as u8 {
        if i != split_dim {
            digits.push(u.digit(i));
        }
    }
    NodeId::from_digits(inner, &digits)
}

/// Inverse of [`project_node`]: reinsert digit value m at position `split_dim`.
pub fn lift_node(dims: Dims, u: &NodeId, split_dim: u8, m: u8) -> Result<NodeId> {
    let inner = dims.inner()?;
    dims.check_dim(split_dim)?;
    dims.check_label(m)?;
    if u.levels() != inner.levels() {
        return Err(Error::DimsMismatch);
    }
    let mut digits = Vec::with_capacity(dims.levels());
    for i in 0..dims.levels() as u8 {
        if i == split_dim {
            digits.push(m);
        } else if i < split_dim {
            digits.push(u.digit(i));
        } else {
            digits.push(u.digit(i - 1));
        }
    }
    NodeId::from_digits(dims, &digits)
}

pub fn project_edge(dims: Dims, e: &Edge, split_dim: u8) -> Result<Edge> {
    Edge::new(
        project_node(dims, e.a(), split_dim)?,
        project_node(dims, e.b(), split_dim)?,
    )
}

/// Write a Graphviz DOT rendering with one color per dimension edge class.
pub fn write_dot<W: Write>(dims: Dims, w: &mut W) -> Result<()> {
    const PALETTE: [&str; 8] = [
        "black", "red", "blue", "green", "orange", "purple", "brown", "cyan",
    ];
    writeln!(w, "graph bcube_{}_{} {{", dims.n(), dims.k())?;
    for u in dims.nodes() {
        writeln!(w, "  \"{}\";", dims.format_node(&u))?;
    }
    for i in 0..dims.levels() as u8 {
        for e in dimension_edges(dims, i)? {
            writeln!(
                w,
                "  \"{}\" -- \"{}\" [color={}];",
                dims.format_node(e.a()),
                dims.format_node(e.b()),
                PALETTE[usize::from(i) % PALETTE.len()]
            )?;
        }
    }
    writeln!(w, "}}")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node(dims: Dims, s: &str) -> NodeId {
        dims.parse_node(s).unwrap()
    }

    #[test]
    fn node_counts() {
        assert_eq!(Dims::new(3, 1).unwrap().node_count(), 9);
        assert_eq!(Dims::new(2, 0).unwrap().node_count(), 2);
        assert_eq!(Dims::new(4, 2).unwrap().node_count(), 64);
        // enumeration agrees with the formula
        assert_eq!(Dims::new(4, 2).unwrap().nodes().count(), 64);
    }

    #[test]
    fn edge_counts() {
        assert_eq!(Dims::new(3, 1).unwrap().edge_count(), 18);
        assert_eq!(Dims::new(2, 0).unwrap().edge_count(), 1);
        assert_eq!(Dims::new(4, 1).unwrap().edge_count(), 48);
    }

    #[test]
    fn edge_count_matches_brute_enumeration() {
        let dims = Dims::new(4, 1).unwrap();
        let nodes: Vec<_> = dims.nodes().collect();
        let mut count = 0;
        for i in 0..nodes.len() {
            for j in (i + 1)..nodes.len() {
                if are_adjacent(&nodes[i], &nodes[j]).unwrap() {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 48);
    }

    #[test]
    fn adjacency() {
        let dims = Dims::new(3, 1).unwrap();
        assert!(are_adjacent(&node(dims, "00"), &node(dims, "10")).unwrap());
        assert!(!are_adjacent(&node(dims, "00"), &node(dims, "00")).unwrap());
        assert!(!are_adjacent(&node(dims, "00"), &node(dims, "11")).unwrap());
    }

    #[test]
    fn adjacency_dims_mismatch() {
        let d1 = Dims::new(3, 1).unwrap();
        let d2 = Dims::new(3, 2).unwrap();
        let u = node(d1, "00");
        let v = node(d2, "000");
        assert!(are_adjacent(&u, &v).is_err());
    }

    #[test]
    fn dimension_edge_classes_partition_edge_set() {
        let dims = Dims::new(3, 1).unwrap();
        let e0 = dimension_edges(dims, 0).unwrap();
        let e1 = dimension_edges(dims, 1).unwrap();
        assert_eq!(e0.len(), 9);
        assert_eq!(e1.len(), 9);
        let all: std::collections::HashSet<_> = e0.iter().chain(e1.iter()).collect();
        assert_eq!(all.len() as u64, dims.edge_count());
        assert!(dimension_edges(dims, 2).is_err());
    }

    #[test]
    fn dimension_edges_count_n4_k1() {
        let dims = Dims::new(4, 1).unwrap();
        assert_eq!(dimension_edges(dims, 1).unwrap().len(), 24);
    }

    #[test]
    fn cross_neighbor_examples() {
        let dims = Dims::new(3, 1).unwrap();
        let u = node(dims, "00");
        assert_eq!(cross_neighbor(dims, &u, 1, 2).unwrap(), node(dims, "20"));
        let u = node(dims, "01");
        assert_eq!(cross_neighbor(dims, &u, 1, 1).unwrap(), node(dims, "11"));
        // same label has no cross neighbor
        assert!(cross_neighbor(dims, &node(dims, "21"), 1, 2).is_err());

        let dims = Dims::new(4, 2).unwrap();
        let u = node(dims, "321");
        let v = cross_neighbor(dims, &u, 2, 0).unwrap();
        assert_eq!(v, node(dims, "021"));
        assert!(are_adjacent(&u, &v).unwrap());
        assert_eq!(v.label(2), 0);
    }

    #[test]
    fn cross_edges_examples() {
        let dims = Dims::new(3, 1).unwrap();
        let es = cross_edges(dims, 0, 1, 1).unwrap();
        let expect: Vec<(NodeId, NodeId)> = vec![
            (node(dims, "00"), node(dims, "10")),
            (node(dims, "01"), node(dims, "11")),
            (node(dims, "02"), node(dims, "12")),
        ];
        assert_eq!(es.len(), 3);
        for (a, b) in expect {
            assert!(es.iter().any(|e| e.other(&a) == Some(&b)));
        }
        assert!(cross_edges(dims, 1, 1, 1).is_err());

        let dims = Dims::new(4, 2).unwrap();
        assert_eq!(cross_edges(dims, 1, 3, 2).unwrap().len(), 16);
    }

    #[test]
    fn projection_round_trip() {
        let dims = Dims::new(3, 1).unwrap();
        let inner = dims.inner().unwrap();
        let u = node(dims, "21");
        assert_eq!(
            project_node(dims, &u, 1).unwrap(),
            inner.parse_node("1").unwrap()
        );

        let dims = Dims::new(4, 2).unwrap();
        let inner = dims.inner().unwrap();
        let u = node(dims, "132");
        assert_eq!(
            project_node(dims, &u, 2).unwrap(),
            inner.parse_node("32").unwrap()
        );

        // brute-force bijection check over BC(4,2)[1]
        let mut seen = std::collections::HashSet::new();
        for u in dims.nodes().filter(|u| u.label(2) == 1) {
            let p = project_node(dims, &u, 2).unwrap();
            assert_eq!(lift_node(dims, &p, 2, 1).unwrap(), u);
            seen.insert(p);
        }
        assert_eq!(seen.len() as u64, inner.node_count());
        assert!(project_node(
            Dims::new(4, 0).unwrap(),
            &Dims::new(4, 0).unwrap().parse_node("1").unwrap(),
            0
        )
        .is_err());
    }

    #[test]
    fn projection_preserves_adjacency() {
        let dims = Dims::new(4, 2).unwrap();
        let in_sub: Vec<_> = dims.nodes().filter(|u| u.label(1) == 2).collect();
        for u in &in_sub {
            for v in &in_sub {
                if u >= v {
                    continue;
                }
                let pu = project_node(dims, u, 1).unwrap();
                let pv = project_node(dims, v, 1).unwrap();
                assert_eq!(are_adjacent(u, v).unwrap(), are_adjacent(&pu, &pv).unwrap());
            }
        }
    }

    #[test]
    fn regularity() {
        let dims = Dims::new(4, 2).unwrap();
        let expected = (dims.n() as usize - 1) * dims.levels();
        let nodes: Vec<_> = dims.nodes().collect();
        let u = &nodes[17];
        let degree = nodes.iter().filter(|v| are_adjacent(u, v).unwrap()).count();
        assert_eq!(degree, expected);
    }

    #[test]
    fn cross_neighbor_involution() {
        let dims = Dims::new(5, 1).unwrap();
        let u = node(dims, "30");
        let v = cross_neighbor(dims, &u, 1, 1).unwrap();
        assert_eq!(cross_neighbor(dims, &v, 1, 3).unwrap(), u);
    }

    #[test]
    fn node_format_round_trip_wide_radix() {
        let dims = Dims::new(12, 1).unwrap();
        let u = NodeId::from_digits(dims, &[11, 4]).unwrap();
        let s = dims.format_node(&u);
        assert_eq!(s, "4,11");
        assert_eq!(dims.parse_node(&s).unwrap(), u);
    }

    #[test]
    fn edge_canonical_order() {
        let dims = Dims::new(3, 1).unwrap();
        let e1 = Edge::new(node(dims, "10"), node(dims, "00")).unwrap();
        let e2 = Edge::new(node(dims, "00"), node(dims, "10")).unwrap();
        assert_eq!(e1, e2);
        assert_eq!(e1.dim(), 1);
        assert!(Edge::new(node(dims, "00"), node(dims, "11")).is_err());
        assert!(Edge::new(node(dims, "00"), node(dims, "00")).is_err());
    }

    #[test]
    fn dot_export_contains_all_edges() {
        let dims = Dims::new(3, 1).unwrap();
        let mut buf = Vec::new();
        write_dot(dims, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.matches(" -- ").count() as u64, dims.edge_count());
    }
}
