//! The partitioned edge fault model.
//!
//! Faults are grouped by dimension; the sorted per-dimension counts
//! r_0 <= ... <= r_k must stay under the budget function f(j). The budget
//! vanishes for small configurations (all zero at n = 4, k = 1) but grows
//! exponentially with the dimension index.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::topology::{self, Dims, Edge};

/// Per-dimension fault budget f(i) for radix n.
///
/// f(0) is n-5 when n = 7 and n-4 otherwise. For i >= 1 it is
/// max(0, n^i - 5) when 4 <= n <= 9, and
/// floor(ceil((n^i - 1)/2) * (n-2) - 3n/2) when n >= 10.
pub fn budget(n: u8, i: u8) -> Result<u64> {
    if n < 4 {
        return Err(Error::RadixTooSmall { n, min: 4 });
    }
    let n64 = n as u64;
    if i == 0 {
        return Ok(if n == 7 { n64 - 5 } else { n64 - 4 });
    }
    let pow = n64.pow(u32::from(i));
    if n <= 9 {
        Ok(pow.saturating_sub(5))
    } else {
        // 3n/2 is halved before flooring; scale by 2 to stay in integers
        let scaled = (pow - 1).div_ceil(2) * (n64 - 2) * 2 - 3 * n64;
        Ok(scaled / 2)
    }
}

/// The full budget vector (f(0), ..., f(k)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PefBudget {
    n: u8,
    per_dim: Vec<u64>,
}

impl PefBudget {
    pub fn new(dims: Dims) -> Result<Self> {
        let per_dim = (0..dims.levels() as u8)
            .map(|i| budget(dims.n(), i))
            .collect::<Result<Vec<_>>>()?;
        Ok(PefBudget {
            n: dims.n(),
            per_dim,
        })
    }

    pub fn get(&self, i: u8) -> u64 {
        self.per_dim[usize::from(i)]
    }

    pub fn total(&self) -> u64 {
        self.per_dim.iter().sum()
    }
}

/// Maximum |F| any f-PEF on BC(n,k) can attain.
pub fn max_total_budget(dims: Dims) -> Result<u64> {
    Ok(PefBudget::new(dims)?.total())
}

/// Sorted per-dimension fault counts, ascending (r_0 smallest).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortedFaultProfile {
    pub r: Vec<u64>,
}

/// A set of faulty edges on BC(n,k) with cached per-dimension counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaultSet {
    dims: Dims,
    edges: BTreeSet<Edge>,
    per_dim: Vec<u64>,
}

impl FaultSet {
    pub fn empty(dims: Dims) -> Self {
        FaultSet {
            dims,
            edges: BTreeSet::new(),
            per_dim: vec![0; dims.levels()],
        }
    }

    pub fn new(dims: Dims, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut f = FaultSet::empty(dims);
        for e in edges {
            if e.a().levels() != dims.levels() {
                return Err(Error::DimsMismatch);
            }
            f.insert(e);
        }
        Ok(f)
    }

    fn insert(&mut self, e: Edge) {
        if self.edges.insert(e.clone()) {
            self.per_dim[usize::from(e.dim())] += 1;
        }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    /// |F_i| for each dimension i.
    pub fn per_dim_counts(&self) -> &[u64] {
        &self.per_dim
    }

    pub fn sorted_profile(&self) -> SortedFaultProfile {
        let mut r = self.per_dim.clone();
        r.sort_unstable();
        SortedFaultProfile { r }
    }
}

/// True iff the per-dimension counts fit under the budgets after sorting
/// both ascending. Sorting the budgets too matters: f(0) = n-4 can exceed
/// f(1) = 0 for n = 5, 6, and the model only constrains which counts are
/// achievable, not which dimension carries them.
pub fn is_f_pef(f: &FaultSet) -> Result<bool> {
    let budgets = PefBudget::new(f.dims())?;
    let mut caps = budgets.per_dim.clone();
    caps.sort_unstable();
    let profile = f.sorted_profile();
    Ok(profile.r.iter().zip(&caps).all(|(&rj, &fj)| rj <= fj))
}

/// The dimension carrying the most faults; ties go to the largest index.
pub fn split_dimension(f: &FaultSet) -> u8 {
    let mut best = 0u8;
    for (i, &c) in f.per_dim.iter().enumerate() {
        if c >= f.per_dim[usize::from(best)] {
            best = i as u8;
        }
    }
    best
}

/// Faults of F with both endpoints in BC[m], re-coordinatized onto BC(n,k-1).
pub fn subgraph_faults(f: &FaultSet, m: u8, split_dim: u8) -> Result<FaultSet> {
    let dims = f.dims();
    let inner = dims.inner()?;
    let mut edges = Vec::new();
    for e in f.iter() {
        if e.dim() != split_dim && e.a().label(split_dim) == m {
            edges.push(topology::project_edge(dims, e, split_dim)?);
        }
    }
    FaultSet::new(inner, edges)
}

/// |F ∩ E(l1, l2)| for the given split dimension.
pub fn cross_fault_count(f: &FaultSet, l1: u8, l2: u8, split_dim: u8) -> Result<u64> {
    if l1 == l2 {
        return Err(Error::SameLabel(l1));
    }
    let mut count = 0;
    for e in f.iter() {
        if e.dim() == split_dim {
            let (la, lb) = (e.a().label(split_dim), e.b().label(split_dim));
            if (la, lb) == (l1, l2) || (la, lb) == (l2, l1) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Deterministic random f-PEF filling each budget slot to round(fill * f).
///
/// Budget slots are sorted ascending and assigned to dimensions in index
/// order, so the largest count lands on the highest dimension, matching
/// the `split_dimension` tie-break.
pub fn gen_random_pef(dims: Dims, fill: f64, seed: u64) -> Result<FaultSet> {
    let budgets = PefBudget::new(dims)?;
    let mut caps = budgets.per_dim.clone();
    caps.sort_unstable();
    let fill = fill.clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = FaultSet::empty(dims);
    for i in 0..dims.levels() as u8 {
        let want = (fill * caps[usize::from(i)] as f64).round() as usize;
        if want == 0 {
            continue;
        }
        let mut pool = topology::dimension_edges(dims, i)?;
        pool.shuffle(&mut rng);
        for e in pool.into_iter().take(want) {
            out.insert(e);
        }
    }
    Ok(out)
}
