//! Circulant graphs `C_n(d_1, ..., d_k)`, codes and identifier sets.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::error::{Error, Result};

/// A vertex of `Z_n`, always reduced modulo `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Vertex(usize);

impl Vertex {
    /// Reduces `value` into `Z_n`.
    pub fn new(value: i64, n: usize) -> Self {
        Vertex(value.rem_euclid(n as i64) as usize)
    }

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The circulant graph on `Z_n` where `u ~ u ± d` for each generator `d`.
///
/// Generators are kept sorted and deduplicated. A generator equal to `n/2`
/// contributes a single neighbour, since `u + n/2 = u - n/2`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphDoc", into = "GraphDoc")]
pub struct CirculantGraph {
    n: usize,
    gens: Vec<usize>,
    /// Distinct nonzero neighbour offsets in `[1, n)`.
    offsets: Vec<usize>,
    closed: Vec<VertexSet>,
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    n: usize,
    gens: Vec<i64>,
}

impl TryFrom<GraphDoc> for CirculantGraph {
    type Error = Error;

    fn try_from(doc: GraphDoc) -> Result<Self> {
        CirculantGraph::new(doc.n, &doc.gens)
    }
}

impl From<CirculantGraph> for GraphDoc {
    fn from(g: CirculantGraph) -> Self {
        GraphDoc {
            n: g.n,
            gens: g.gens.iter().map(|&d| d as i64).collect(),
        }
    }
}

impl CirculantGraph {
    pub fn new(n: usize, gens: &[i64]) -> Result<Self> {
        if n < 3 {
            return Err(Error::OrderTooSmall(n));
        }
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        let max = n / 2;
        let mut sorted = Vec::with_capacity(gens.len());
        for &d in gens {
            if d < 1 || d as u64 > max as u64 {
                return Err(Error::GeneratorOutOfRange { gen: d, n, max });
            }
            sorted.push(d as usize);
        }
        sorted.sort_unstable();
        sorted.dedup();

        let mut offsets: Vec<usize> = sorted.iter().flat_map(|&d| [d, n - d]).collect();
        offsets.sort_unstable();
        offsets.dedup();

        let closed = (0..n)
            .map(|u| {
                let mut s = VertexSet::empty(n);
                s.insert(u);
                for &o in &offsets {
                    s.insert((u + o) % n);
                }
                s
            })
            .collect();

        Ok(CirculantGraph {
            n,
            gens: sorted,
            offsets,
            closed,
        })
    }

    /// Like [`CirculantGraph::new`], but a generator `d` with `n/2 < d < n`
    /// is replaced by `n - d`, which yields the same edge set.
    pub fn folded(n: usize, gens: &[i64]) -> Result<Self> {
        let folded: Vec<i64> = gens
            .iter()
            .map(|&d| {
                if d > 0 && (d as u64) < n as u64 && 2 * d as u64 > n as u64 {
                    n as i64 - d
                } else {
                    d
                }
            })
            .collect();
        Self::new(n, &folded)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[usize] {
        &self.gens
    }

    /// Number of neighbours of every vertex.
    pub fn degree(&self) -> usize {
        self.offsets.len()
    }

    pub fn vertex(&self, value: i64) -> Vertex {
        Vertex::new(value, self.n)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        (0..self.n).map(Vertex)
    }

    /// Distinct nonzero neighbour offsets, ascending.
    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// `N[u]`.
    pub fn closed_neighborhood(&self, u: Vertex) -> &VertexSet {
        &self.closed[u.0]
    }

    pub(crate) fn closed_at(&self, u: usize) -> &VertexSet {
        &self.closed[u]
    }

    /// `I(C; u) = N[u] ∩ C`.
    pub fn identifier_set(&self, code: &Code, u: Vertex) -> IdentifierSet {
        debug_assert_eq!(code.order(), self.n);
        IdentifierSet {
            owner: u,
            members: self.closed[u.0].intersection(code.members()),
        }
    }

    /// Breadth-first distance; `None` when `v` is unreachable from `u`.
    pub fn distance(&self, u: Vertex, v: Vertex) -> Option<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[u.0] = 0;
        let mut queue = VecDeque::from([u.0]);
        while let Some(x) = queue.pop_front() {
            if x == v.0 {
                return Some(dist[x]);
            }
            for &o in &self.offsets {
                let y = (x + o) % self.n;
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// Offsets `t` (in `[1, n)`) with `N[0] ∩ N[t] ≠ ∅`, i.e. vertices at
    /// distance 1 or 2 from 0.
    pub(crate) fn ball2_offsets(&self) -> Vec<usize> {
        let mut ball = VertexSet::empty(self.n);
        for a in self.closed[0].iter() {
            ball = ball.union(&self.closed[a]);
        }
        ball.remove(0);
        ball.to_vec()
    }

    /// Lowest closed-twin pair `u < v` with `N[u] = N[v]`, if any.
    pub fn closed_twins(&self) -> Option<(Vertex, Vertex)> {
        // Vertex-transitive: a twin pair exists iff 0 has a twin.
        let t = (1..self.n).find(|&t| self.closed[t] == self.closed[0])?;
        Some((Vertex(0), Vertex(t)))
    }

    /// The shape `{1, d}`, `{1, d-1, d}` or `{1, d-1, d, d+1}` this graph
    /// matches, if any.
    pub fn shape(&self) -> Option<Shape> {
        match self.gens.as_slice() {
            &[1, d] if d >= 2 => Some(Shape::Square { d }),
            &[1, a, d] if d >= 3 && a + 1 == d => Some(Shape::Triangular { d }),
            &[1, a, d, b] if d >= 3 && a + 1 == d && b == d + 1 => Some(Shape::King { d }),
            _ => None,
        }
    }
}

impl fmt::Debug for CirculantGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C_{}{:?}", self.n, self.gens)
    }
}

impl fmt::Display for CirculantGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.gens.iter().map(|d| d.to_string()).collect();
        write!(f, "C_{}({})", self.n, gens.join(","))
    }
}

/// Generator shapes that correspond to the square, triangular and king grids.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Square { d: usize },
    Triangular { d: usize },
    King { d: usize },
}

impl Shape {
    pub fn d(self) -> usize {
        match self {
            Shape::Square { d } | Shape::Triangular { d } | Shape::King { d } => d,
        }
    }

    /// The generator list of this shape.
    pub fn gens(self) -> Vec<i64> {
        let d = self.d() as i64;
        match self {
            Shape::Square { .. } => vec![1, d],
            Shape::Triangular { .. } => vec![1, d - 1, d],
            Shape::King { .. } => vec![1, d - 1, d, d + 1],
        }
    }
}

/// A nonempty subset of `Z_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Code {
    members: VertexSet,
}

impl Code {
    pub fn new(members: VertexSet) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyCode);
        }
        Ok(Code { members })
    }

    /// Builds a code from explicit vertices; values must lie in `[0, n)`.
    pub fn from_vertices(n: usize, vertices: &[usize]) -> Result<Self> {
        let mut s = VertexSet::empty(n);
        for &v in vertices {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            s.insert(v);
        }
        Code::new(s)
    }

    /// `{u in Z_n : u mod period ∈ residues}`.
    pub fn periodic(n: usize, period: usize, residues: &[usize]) -> Result<Self> {
        if period == 0 || n % period != 0 {
            return Err(Error::PeriodDoesNotDivide { period, n });
        }
        let mut s = VertexSet::empty(n);
        for &r in residues {
            if r >= period {
                return Err(Error::ResidueOutOfRange { residue: r, period });
            }
            for base in (0..n).step_by(period) {
                s.insert(base + r);
            }
        }
        Code::new(s)
    }

    pub fn full(n: usize) -> Self {
        Code {
            members: VertexSet::full(n),
        }
    }

    pub fn order(&self) -> usize {
        self.members.order()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.contains(v.0)
    }

    pub fn members(&self) -> &VertexSet {
        &self.members
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.members.to_vec()
    }

    /// The code rotated by `t`.
    pub fn translate(&self, t: i64) -> Self {
        Code {
            members: self.members.translate(t),
        }
    }

    /// The code reflected through 0.
    pub fn negate(&self) -> Self {
        Code {
            members: self.members.negate(),
        }
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.members.fmt(f)
    }
}

/// `I(C; owner) = N[owner] ∩ C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentifierSet {
    pub owner: Vertex,
    pub members: VertexSet,
}

impl IdentifierSet {
    pub fn to_vec(&self) -> Vec<usize> {
        self.members.to_vec()
    }
}
