//! Lower bounds and exact values for `γ^LD`, `γ^ID` and `γ^SID` of circulant
//! graphs. All arithmetic is exact integer arithmetic.

use serde::Serialize;

use crate::circulant::{CirculantGraph, Shape};
use crate::error::{Error, Result};
use crate::verifier::CodeKind;

/// `⌈a·n / b⌉`.
fn ceil_frac(a: usize, n: usize, b: usize) -> usize {
    (a * n).div_ceil(b)
}

/// Smallest integer strictly greater than `n / b`.
fn strictly_above(n: usize, b: usize) -> usize {
    n / b + 1
}

fn not_applicable(bound: &'static str, reason: impl Into<String>) -> Error {
    Error::BoundNotApplicable {
        bound,
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub source: &'static str,
    pub value: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub kind: CodeKind,
    pub value: usize,
    /// A closed form pins `γ` to exactly `value`.
    pub exact: bool,
    pub provenance: &'static str,
    pub candidates: Vec<Candidate>,
    /// `γ` itself when a closed form gives it, even if it exceeds `value`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_value: Option<ExactValue>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExactValue {
    pub source: &'static str,
    pub value: usize,
}

/// Bounds transported from optimal densities of the infinite grids.
///
/// Square `{1,d}`: LD `3n/10`, ID `7n/20`, SID `n/2`. Triangular `{1,d-1,d}`:
/// LD `13n/57`, ID `n/4`, SID `n/2`. King `{1,d-1,d,d+1}`: LD `n/5`,
/// ID `2n/9`, SID `n/3`. Each is rounded up.
pub fn grid_lower_bound(g: &CirculantGraph, kind: CodeKind) -> Result<(&'static str, usize)> {
    let shape = g
        .shape()
        .ok_or_else(|| not_applicable("grid", format!("{g} matches no grid shape")))?;
    let n = g.order();
    let (source, [ld, id, sid]) = match shape {
        Shape::Square { .. } => ("grid-square", [(3, 10), (7, 20), (1, 2)]),
        Shape::Triangular { .. } => ("grid-triangular", [(13, 57), (1, 4), (1, 2)]),
        Shape::King { .. } => ("grid-king", [(1, 5), (2, 9), (1, 3)]),
    };
    let (a, b) = match kind {
        CodeKind::Ld => ld,
        CodeKind::Id => id,
        CodeKind::Sid => sid,
        CodeKind::Dom => return Err(not_applicable(source, "no grid bound for domination")),
    };
    Ok((source, ceil_frac(a, n, b)))
}

/// Double-counting bounds for `k`-regular graphs: `γ^ID ≥ ⌈2|V|/(k+2)⌉` and
/// `γ^SID ≥ ⌈2|V|/k⌉`, with `k` the actual degree.
pub fn regular_graph_lower_bound(g: &CirculantGraph, kind: CodeKind) -> Result<usize> {
    let k = g.degree();
    if k < 2 {
        return Err(not_applicable("regular-graph", format!("degree {k} < 2")));
    }
    let n = g.order();
    match kind {
        CodeKind::Id => Ok(ceil_frac(2, n, k + 2)),
        CodeKind::Sid => Ok(ceil_frac(2, n, k)),
        _ => Err(not_applicable("regular-graph", format!("kind {kind}"))),
    }
}

/// In `C_n(1, d_2, ..., d_r)` with `r ≥ 3`, no ID code has exactly
/// `n/(r+1)` codewords and no SID code has exactly `n/r`; combined with the
/// regular-graph bound this gives the next integer above each.
pub fn strict_nonattainment_bound(g: &CirculantGraph, kind: CodeKind) -> Result<usize> {
    let gens = g.gens();
    let r = gens.len();
    if r < 3 {
        return Err(not_applicable(
            "strict-nonattainment",
            format!("needs at least 3 generators, {g} has {r}"),
        ));
    }
    if gens[0] != 1 {
        return Err(not_applicable(
            "strict-nonattainment",
            format!("first generator of {g} is not 1"),
        ));
    }
    let n = g.order();
    match kind {
        CodeKind::Id => Ok(strictly_above(n, r + 1)),
        CodeKind::Sid => Ok(strictly_above(n, r)),
        _ => Err(not_applicable("strict-nonattainment", format!("kind {kind}"))),
    }
}

/// Every code is dominating, and each codeword covers `k+1` vertices.
pub fn domination_counting_bound(g: &CirculantGraph) -> usize {
    g.order().div_ceil(g.degree() + 1)
}

/// Optimal SID size in `C_n(1,3)`, valid for `n > 11`.
pub fn c13_sid_value(n: usize) -> usize {
    let k = n / 7;
    match n % 7 {
        0 => 4 * k,
        1 => 4 * k + 1,
        2 => 4 * k + 2,
        3 | 4 => 4 * k + 3,
        _ => 4 * k + 4,
    }
}

/// Optimal SID size in `C_{2k}(1,k)`, valid for `k ≥ 5`.
pub fn antipodal_sid_value(k: usize) -> usize {
    let base = (4 * k).div_ceil(3);
    if k % 3 == 2 {
        base + 1
    } else {
        base
    }
}

/// `γ^SID(g)` when one of the exact-value formulas covers `g`.
pub fn exact_sid_value(g: &CirculantGraph) -> Option<ExactValue> {
    exact_value(g, CodeKind::Sid)
}

/// `γ^kind(g)` when an exact-value formula covers `g`.
pub fn exact_value(g: &CirculantGraph, kind: CodeKind) -> Option<ExactValue> {
    let n = g.order();
    let exact = |source, value| Some(ExactValue { source, value });
    match (kind, g.gens()) {
        (CodeKind::Sid, [1, 3]) if n > 11 => return exact("exact-sid-c13", c13_sid_value(n)),
        (CodeKind::Sid, [1, 4]) if n % 2 == 1 && n / 2 > 5 => {
            return exact("exact-sid-c14-odd", n / 2 + 2)
        }
        (CodeKind::Sid, &[1, k]) if 2 * k == n && k >= 5 => {
            return exact("exact-sid-antipodal", antipodal_sid_value(k))
        }
        _ => {}
    }
    let shape = g.shape()?;
    let d = shape.d();
    // C_n(1,d) and C_n(1,n-d) are the same graph
    let square_d = |r: usize, m: usize| d % m == r || (n - d) % m == r;
    match (kind, shape) {
        (CodeKind::Sid, Shape::Square { .. }) if d % 2 == 0 && d >= 4 && n % 2 == 0 && n > 4 * d => {
            exact("exact-sid-square", n / 2)
        }
        (CodeKind::Sid, Shape::Triangular { .. }) if d >= 4 && n % 2 == 0 && n > 4 * d => {
            exact("exact-sid-triangular", n / 2)
        }
        (CodeKind::Sid, Shape::King { .. })
            if d % 3 == 1 && d >= 4 && n % 3 == 0 && n >= 4 * d + 5 =>
        {
            exact("exact-sid-king", n / 3)
        }
        (CodeKind::Id, Shape::Square { .. }) if n % 40 == 0 && square_d(4, 40) => {
            exact("exact-id-square-mod40", 7 * n / 20)
        }
        (CodeKind::Id, Shape::Square { .. }) if n % 20 == 0 && square_d(6, 20) => {
            exact("exact-id-square-mod20", 7 * n / 20)
        }
        (CodeKind::Ld, Shape::Square { .. }) if n % 20 == 0 && square_d(5, 20) => {
            exact("exact-ld-square-mod20", 3 * n / 10)
        }
        (CodeKind::Ld, Shape::Triangular { .. }) if d % 57 == 8 && n % 57 == 0 => {
            exact("exact-ld-triangular-mod57", 13 * n / 57)
        }
        (CodeKind::Ld, Shape::King { .. })
            if d % 10 == 8 && n >= 4 * d + 6 && n % 10 == 0 =>
        {
            exact("exact-ld-king-mod10", n / 5)
        }
        _ => None,
    }
}

/// The largest applicable lower bound for `γ^kind(g)`, with every candidate.
///
/// Ties go to the first source in the order grid, regular-graph,
/// strict-nonattainment, domination-counting.
pub fn best_lower_bound(g: &CirculantGraph, kind: CodeKind) -> BoundReport {
    let mut candidates = Vec::new();
    if let Ok((source, value)) = grid_lower_bound(g, kind) {
        candidates.push(Candidate { source, value });
    }
    if let Ok(value) = regular_graph_lower_bound(g, kind) {
        candidates.push(Candidate {
            source: "regular-graph",
            value,
        });
    }
    if let Ok(value) = strict_nonattainment_bound(g, kind) {
        candidates.push(Candidate {
            source: "strict-nonattainment",
            value,
        });
    }
    candidates.push(Candidate {
        source: "domination-counting",
        value: domination_counting_bound(g),
    });
    candidates.push(Candidate {
        source: "trivial",
        value: 1,
    });

    let best = candidates
        .iter()
        .fold(&candidates[0], |best, c| if c.value > best.value { c } else { best });
    let (value, provenance) = (best.value, best.source);
    let exact_value = exact_value(g, kind);
    BoundReport {
        kind,
        value,
        exact: exact_value.is_some_and(|e| e.value == value),
        provenance,
        candidates,
        exact_value,
    }
}
