//! Lifting circulant codes to periodic codes on the infinite square,
//! triangular and king grids.
//!
//! A grid vertex `(x, y)` maps to `x + y·m (mod n)`, where `m` is `d` for the
//! square and king grids and `d − 1` for the triangular grid. Under this map
//! the closed grid neighbourhood of a vertex lands on the closed circulant
//! neighbourhood of its image, so the lifted code is periodic with respect to
//! the kernel lattice spanned by `(n, 0)` and `(−m, 1)`. The `n` vertices
//! `(r, 0)`, `0 ≤ r < n`, form a fundamental domain.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::circulant::{CirculantGraph, Code, Shape};
use crate::error::{Error, Result};
use crate::verifier::CodeKind;

pub type Point = (i64, i64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Square,
    Triangular,
    King,
}

impl GridKind {
    /// Closed neighbourhood of the origin.
    pub fn closed_offsets(self) -> &'static [Point] {
        const SQUARE: [Point; 5] = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)];
        const TRI: [Point; 7] = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)];
        const KING: [Point; 9] = [
            (0, 0),
            (1, 0),
            (-1, 0),
            (0, 1),
            (0, -1),
            (1, 1),
            (-1, -1),
            (-1, 1),
            (1, -1),
        ];
        match self {
            GridKind::Square => &SQUARE,
            GridKind::Triangular => &TRI,
            GridKind::King => &KING,
        }
    }

    /// Offsets at grid distance 1 or 2 from the origin.
    pub fn ball2_offsets(self) -> Vec<Point> {
        let mut ball: Vec<Point> = self
            .closed_offsets()
            .iter()
            .flat_map(|&(a, b)| {
                self.closed_offsets()
                    .iter()
                    .map(move |&(c, e)| (a + c, b + e))
            })
            .filter(|&p| p != (0, 0))
            .collect();
        ball.sort_unstable();
        ball.dedup();
        ball
    }

    /// The circulant shape this grid corresponds to for parameter `d`.
    pub fn shape(self, d: usize) -> Shape {
        match self {
            GridKind::Square => Shape::Square { d },
            GridKind::Triangular => Shape::Triangular { d },
            GridKind::King => Shape::King { d },
        }
    }

    pub fn of_shape(shape: Shape) -> Self {
        match shape {
            Shape::Square { .. } => GridKind::Square,
            Shape::Triangular { .. } => GridKind::Triangular,
            Shape::King { .. } => GridKind::King,
        }
    }

    fn multiplier(self, d: usize) -> usize {
        match self {
            GridKind::Triangular => d - 1,
            GridKind::Square | GridKind::King => d,
        }
    }

    fn min_d(self) -> usize {
        match self {
            GridKind::Square => 2,
            GridKind::Triangular | GridKind::King => 3,
        }
    }
}

impl fmt::Display for GridKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GridKind::Square => "square",
            GridKind::Triangular => "triangular",
            GridKind::King => "king",
        })
    }
}

impl FromStr for GridKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(GridKind::Square),
            "tri" | "triangular" => Ok(GridKind::Triangular),
            "king" => Ok(GridKind::King),
            other => Err(Error::UnknownName { what: "grid", name: other.to_string() }),
        }
    }
}

/// An exact rational density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Density(pub Ratio<u64>);

impl Density {
    pub fn new(num: u64, den: u64) -> Self {
        Density(Ratio::new(num, den))
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for Density {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A circulant code lifted to a grid.
#[derive(Debug, Clone)]
pub struct PeriodicGridCode {
    grid: GridKind,
    n: usize,
    d: usize,
    source: Code,
}

impl PeriodicGridCode {
    pub fn grid(&self) -> GridKind {
        self.grid
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn source(&self) -> &Code {
        &self.source
    }

    /// The residue map to `Z_n`.
    pub fn project(&self, (x, y): Point) -> usize {
        let m = self.grid.multiplier(self.d) as i64;
        (x + y * m).rem_euclid(self.n as i64) as usize
    }

    pub fn contains(&self, p: Point) -> bool {
        self.source.members().contains(self.project(p))
    }

    /// Generators of the period lattice.
    pub fn lattice_basis(&self) -> [Point; 2] {
        let m = self.grid.multiplier(self.d) as i64;
        [(self.n as i64, 0), (-m, 1)]
    }

    /// Codewords among the closed neighbours of `p`, in absolute coordinates.
    pub fn identifier_set(&self, p: Point) -> Vec<Point> {
        let mut out: Vec<Point> = self
            .grid
            .closed_offsets()
            .iter()
            .map(|&(a, b)| (p.0 + a, p.1 + b))
            .filter(|&q| self.contains(q))
            .collect();
        out.sort_unstable();
        out
    }

    /// CSV rows `x,y,codeword` for the window `[0, width) × [0, height)`.
    pub fn to_csv(&self, width: usize, height: usize) -> String {
        let mut out = String::from("x,y,codeword\n");
        for y in 0..height as i64 {
            for x in 0..width as i64 {
                let _ = writeln!(out, "{x},{y},{}", u8::from(self.contains((x, y))));
            }
        }
        out
    }

    /// `x` for codewords and `.` otherwise; the top row is the largest `y`.
    pub fn to_ascii(&self, width: usize, height: usize) -> String {
        let mut out = String::new();
        for y in (0..height as i64).rev() {
            for x in 0..width as i64 {
                out.push(if self.contains((x, y)) { 'x' } else { '.' });
            }
            out.push('\n');
        }
        out
    }
}

/// Lifts `code` on `C_n` to `grid` using the residue map for parameter `d`.
pub fn lift(code: &Code, n: usize, d: usize, grid: GridKind) -> Result<PeriodicGridCode> {
    if code.order() != n {
        return Err(Error::OrderMismatch {
            code: code.order(),
            graph: n,
        });
    }
    if d < grid.min_d() {
        return Err(Error::Precondition(format!(
            "{grid} lift needs d ≥ {}, got d = {d}",
            grid.min_d()
        )));
    }
    if n < 2 * d {
        return Err(Error::Precondition(format!(
            "{grid} lift needs n ≥ 2d, got n = {n}, d = {d}"
        )));
    }
    // The source graph must exist with exactly this shape.
    let g = CirculantGraph::new(n, &grid.shape(d).gens())
        .map_err(|e| Error::Precondition(format!("{grid} lift: {e}")))?;
    if g.shape() != Some(grid.shape(d)) {
        return Err(Error::Precondition(format!(
            "{g} does not have the {grid} shape for d = {d}"
        )));
    }
    Ok(PeriodicGridCode {
        grid,
        n,
        d,
        source: code.clone(),
    })
}

/// Lifts a code given together with its graph, inferring the grid from the
/// generator shape.
pub fn lift_from_graph(g: &CirculantGraph, code: &Code) -> Result<PeriodicGridCode> {
    let shape = g
        .shape()
        .ok_or_else(|| Error::Precondition(format!("{g} matches no grid shape")))?;
    lift(code, g.order(), shape.d(), GridKind::of_shape(shape))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GridWitness {
    Uncovered { vertex: Point },
    Pair { u: Point, v: Point },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridReport {
    pub kind: CodeKind,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<GridWitness>,
}

/// Decides `kind` for the lifted code on the whole infinite grid.
///
/// Identifier sets translate with the period lattice, so it is enough to
/// check one representative per class against every vertex within grid
/// distance two; farther vertices have disjoint neighbourhoods.
pub fn grid_verify(p: &PeriodicGridCode, kind: CodeKind) -> GridReport {
    let reps: Vec<Point> = (0..p.n as i64).map(|r| (r, 0)).collect();
    let isets: Vec<Vec<Point>> = reps.iter().map(|&u| p.identifier_set(u)).collect();
    let fail = |witness| GridReport {
        kind,
        pass: false,
        witness: Some(witness),
    };
    if let Some(i) = isets.iter().position(Vec::is_empty) {
        return fail(GridWitness::Uncovered { vertex: reps[i] });
    }
    if kind != CodeKind::Dom {
        let ball = p.grid.ball2_offsets();
        for (&u, iu) in reps.iter().zip(&isets) {
            for &(a, b) in &ball {
                let v = (u.0 + a, u.1 + b);
                let iv = p.identifier_set(v);
                let bad = match kind {
                    CodeKind::Id => *iu == iv,
                    CodeKind::Ld => !p.contains(u) && !p.contains(v) && *iu == iv,
                    CodeKind::Sid => iu.iter().all(|c| iv.contains(c)),
                    CodeKind::Dom => unreachable!(),
                };
                if bad {
                    return fail(GridWitness::Pair { u, v });
                }
            }
        }
    }
    GridReport {
        kind,
        pass: true,
        witness: None,
    }
}

/// `|source| / n`, reduced.
pub fn grid_density(p: &PeriodicGridCode) -> Density {
    Density::new(p.source.len() as u64, p.n as u64)
}

/// Optimal densities on the infinite grids.
pub fn literature_density(grid: GridKind, kind: CodeKind) -> Result<Density> {
    let (num, den) = match (grid, kind) {
        (_, CodeKind::Dom) => {
            return Err(Error::Precondition(
                "no stored optimal density for domination".into(),
            ))
        }
        (GridKind::Square, CodeKind::Ld) => (3, 10),
        (GridKind::Square, CodeKind::Id) => (7, 20),
        (GridKind::Square, CodeKind::Sid) => (1, 2),
        (GridKind::Triangular, CodeKind::Ld) => (13, 57),
        (GridKind::Triangular, CodeKind::Id) => (1, 4),
        (GridKind::Triangular, CodeKind::Sid) => (1, 2),
        (GridKind::King, CodeKind::Ld) => (1, 5),
        (GridKind::King, CodeKind::Id) => (2, 9),
        (GridKind::King, CodeKind::Sid) => (1, 3),
    };
    Ok(Density::new(num, den))
}
