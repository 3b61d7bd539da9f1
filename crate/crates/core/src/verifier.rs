//! Deciding whether a code is dominating, identifying, locating-dominating or
//! self-identifying, with deterministic witnesses on failure.
//!
//! The fast checks compare identifier sets only for pairs at distance at most
//! two, and only once domination is known to hold: two dominated vertices
//! whose closed neighbourhoods are disjoint always have distinct I-sets. The
//! `reference` functions implement the definitions over all pairs and serve
//! as the cross-check.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitset::VertexSet;
use crate::circulant::{CirculantGraph, Code};
use crate::error::{Error, Result};

/// The code properties this crate decides.
///
/// Ordered by strength: every SID code is ID, every ID code is LD and every
/// LD code is dominating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    Dom,
    Ld,
    Id,
    Sid,
}

impl CodeKind {
    pub const ALL: [CodeKind; 4] = [CodeKind::Dom, CodeKind::Ld, CodeKind::Id, CodeKind::Sid];

    pub fn as_str(self) -> &'static str {
        match self {
            CodeKind::Dom => "dom",
            CodeKind::Ld => "ld",
            CodeKind::Id => "id",
            CodeKind::Sid => "sid",
        }
    }

    /// Whether closed twins rule out every code of this kind.
    pub fn forbids_twins(self) -> bool {
        matches!(self, CodeKind::Id | CodeKind::Sid)
    }
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CodeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dom" => Ok(CodeKind::Dom),
            "ld" => Ok(CodeKind::Ld),
            "id" => Ok(CodeKind::Id),
            "sid" => Ok(CodeKind::Sid),
            other => Err(Error::UnknownName { what: "code kind", name: other.to_string() }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Witness {
    /// A vertex with an empty I-set.
    Uncovered { vertex: usize },
    /// For ID/LD: `I(u) = I(v)`. For SID: `I(u) ⊆ I(v)`.
    Pair {
        u: usize,
        v: usize,
        #[serde(rename = "Iu")]
        iu: Vec<usize>,
        #[serde(rename = "Iv")]
        iv: Vec<usize>,
    },
    /// `N[u] = N[v]`: no code of the requested kind exists in this graph.
    Twins { u: usize, v: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub kind: CodeKind,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

impl VerificationReport {
    fn pass(kind: CodeKind) -> Self {
        VerificationReport {
            kind,
            pass: true,
            witness: None,
        }
    }

    fn fail(kind: CodeKind, witness: Witness) -> Self {
        VerificationReport {
            kind,
            pass: false,
            witness: Some(witness),
        }
    }

    /// True when the failure is structural (closed twins) rather than a
    /// property of the code.
    pub fn no_code_exists(&self) -> bool {
        matches!(self.witness, Some(Witness::Twins { .. }))
    }
}

fn check_order(g: &CirculantGraph, c: &Code) {
    assert_eq!(
        g.order(),
        c.order(),
        "code over Z_{} checked against {}",
        c.order(),
        g
    );
}

fn isets(g: &CirculantGraph, c: &Code) -> Vec<VertexSet> {
    (0..g.order())
        .map(|u| g.closed_at(u).intersection(c.members()))
        .collect()
}

fn first_uncovered(isets: &[VertexSet]) -> Option<usize> {
    isets.iter().position(VertexSet::is_empty)
}

fn pair_witness(u: usize, v: usize, isets: &[VertexSet]) -> Witness {
    Witness::Pair {
        u,
        v,
        iu: isets[u].to_vec(),
        iv: isets[v].to_vec(),
    }
}

fn twin_witness(g: &CirculantGraph) -> Option<Witness> {
    g.closed_twins().map(|(u, v)| Witness::Twins {
        u: u.index(),
        v: v.index(),
    })
}

pub fn is_dominating(g: &CirculantGraph, c: &Code) -> VerificationReport {
    check_order(g, c);
    match g
        .vertices()
        .find(|&u| !g.closed_neighborhood(u).intersects(c.members()))
    {
        Some(u) => VerificationReport::fail(CodeKind::Dom, Witness::Uncovered { vertex: u.index() }),
        None => VerificationReport::pass(CodeKind::Dom),
    }
}

/// Smallest `(u, v)`, `u < v`, with `N[u] ∩ N[v] ≠ ∅`, both eligible, and
/// equal I-sets.
fn first_confusable(
    g: &CirculantGraph,
    isets: &[VertexSet],
    eligible: impl Fn(usize) -> bool,
) -> Option<(usize, usize)> {
    let n = g.order();
    let ball = g.ball2_offsets();
    for u in (0..n).filter(|&u| eligible(u)) {
        let v = ball
            .iter()
            .map(|&t| (u + t) % n)
            .filter(|&v| v > u && eligible(v) && isets[u] == isets[v])
            .min();
        if let Some(v) = v {
            return Some((u, v));
        }
    }
    None
}

pub fn is_identifying(g: &CirculantGraph, c: &Code) -> VerificationReport {
    check_order(g, c);
    let kind = CodeKind::Id;
    if let Some(w) = twin_witness(g) {
        return VerificationReport::fail(kind, w);
    }
    let is = isets(g, c);
    if let Some(u) = first_uncovered(&is) {
        return VerificationReport::fail(kind, Witness::Uncovered { vertex: u });
    }
    match first_confusable(g, &is, |_| true) {
        Some((u, v)) => VerificationReport::fail(kind, pair_witness(u, v, &is)),
        None => VerificationReport::pass(kind),
    }
}

pub fn is_locating_dominating(g: &CirculantGraph, c: &Code) -> VerificationReport {
    check_order(g, c);
    let kind = CodeKind::Ld;
    let is = isets(g, c);
    if let Some(u) = first_uncovered(&is) {
        return VerificationReport::fail(kind, Witness::Uncovered { vertex: u });
    }
    match first_confusable(g, &is, |u| !c.members().contains(u)) {
        Some((u, v)) => VerificationReport::fail(kind, pair_witness(u, v, &is)),
        None => VerificationReport::pass(kind),
    }
}

/// `⋂_{c ∈ I(u)} N[c]`; the caller guarantees `I(u)` is nonempty.
pub fn locator_intersection(g: &CirculantGraph, iset: &VertexSet) -> VertexSet {
    let mut acc = VertexSet::full(g.order());
    for c in iset.iter() {
        acc.intersect_with(g.closed_at(c));
    }
    acc
}

/// Self-identification via the characterisation: every I-set is nonempty and
/// the closed neighbourhoods of its codewords meet exactly in the owner.
pub fn is_self_identifying(g: &CirculantGraph, c: &Code) -> VerificationReport {
    check_order(g, c);
    let kind = CodeKind::Sid;
    if let Some(w) = twin_witness(g) {
        return VerificationReport::fail(kind, w);
    }
    let is = isets(g, c);
    if let Some(u) = first_uncovered(&is) {
        return VerificationReport::fail(kind, Witness::Uncovered { vertex: u });
    }
    for (u, iu) in is.iter().enumerate() {
        let mut common = locator_intersection(g, iu);
        common.remove(u);
        // Any v left over satisfies I(u) ⊆ N[v], hence I(u) ⊆ I(v).
        if let Some(v) = common.first() {
            return VerificationReport::fail(kind, pair_witness(u, v, &is));
        }
    }
    VerificationReport::pass(kind)
}

pub fn verify(g: &CirculantGraph, c: &Code, kind: CodeKind) -> VerificationReport {
    match kind {
        CodeKind::Dom => is_dominating(g, c),
        CodeKind::Ld => is_locating_dominating(g, c),
        CodeKind::Id => is_identifying(g, c),
        CodeKind::Sid => is_self_identifying(g, c),
    }
}

/// Definitional checks over all pairs of vertices. No twin shortcut, no
/// distance restriction, and SID uses `I(u) \ I(v) ≠ ∅` directly.
pub mod reference {
    use super::*;

    pub fn verify(g: &CirculantGraph, c: &Code, kind: CodeKind) -> VerificationReport {
        check_order(g, c);
        let n = g.order();
        let is = isets(g, c);
        if let Some(u) = first_uncovered(&is) {
            return VerificationReport::fail(kind, Witness::Uncovered { vertex: u });
        }
        let failing = match kind {
            CodeKind::Dom => None,
            CodeKind::Id => (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .find(|&(u, v)| is[u] == is[v]),
            CodeKind::Ld => {
                let free = |u: usize| !c.members().contains(u);
                (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .find(|&(u, v)| free(u) && free(v) && is[u] == is[v])
            }
            CodeKind::Sid => (0..n)
                .flat_map(|u| (0..n).map(move |v| (u, v)))
                .find(|&(u, v)| u != v && is[u].difference(&is[v]).is_empty()),
        };
        match failing {
            Some((u, v)) => VerificationReport::fail(kind, pair_witness(u, v, &is)),
            None => VerificationReport::pass(kind),
        }
    }
}

/// Runs the fast and reference checks and insists they agree on the verdict.
pub fn verify_cross_checked(
    g: &CirculantGraph,
    c: &Code,
    kind: CodeKind,
) -> Result<VerificationReport> {
    let fast = verify(g, c, kind);
    let slow = reference::verify(g, c, kind);
    if fast.pass != slow.pass {
        return Err(Error::Precondition(format!(
            "internal inconsistency on {g}: fast says {}, reference says {}",
            fast.pass, slow.pass
        )));
    }
    Ok(fast)
}

/// Outcome of the structural audit of a verified SID code in `C_n(d1, d2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SidAudit {
    /// Codewords with `|I(x)| < 3`.
    pub thin_codewords: Vec<usize>,
    /// Non-codewords with neither `{x ± d1}` nor `{x ± d2}` inside `I(x)`.
    pub unpaired_noncodewords: Vec<usize>,
    /// For `(1, 3)`: non-codewords with `|I(x)| = 2` but `I(x) ≠ {x-3, x+3}`.
    pub off_pattern_pairs: Vec<usize>,
}

impl SidAudit {
    pub fn holds(&self) -> bool {
        self.thin_codewords.is_empty()
            && self.unpaired_noncodewords.is_empty()
            && self.off_pattern_pairs.is_empty()
    }
}

/// Checks the necessary structure of SID codes in two-generator circulants
/// with `4·d2 − 1 < n`.
pub fn sid_structure_audit(g: &CirculantGraph, c: &Code) -> Result<SidAudit> {
    check_order(g, c);
    let &[d1, d2] = g.gens() else {
        return Err(Error::Precondition(format!(
            "SID audit needs exactly two generators, {g} has {}",
            g.gens().len()
        )));
    };
    let n = g.order();
    if 4 * d2 - 1 >= n {
        return Err(Error::Precondition(format!(
            "SID audit needs 4·d2 − 1 < n, got d2 = {d2}, n = {n}"
        )));
    }
    if !is_self_identifying(g, c).pass {
        return Err(Error::Precondition(format!(
            "SID audit needs a self-identifying code in {g}"
        )));
    }
    let mut audit = SidAudit {
        thin_codewords: vec![],
        unpaired_noncodewords: vec![],
        off_pattern_pairs: vec![],
    };
    for u in g.vertices() {
        let x = u.index();
        let iset = g.identifier_set(c, u).members;
        if c.contains(u) {
            if iset.len() < 3 {
                audit.thin_codewords.push(x);
            }
            continue;
        }
        let has_pair = |d: usize| iset.contains((x + d) % n) && iset.contains((x + n - d) % n);
        if !has_pair(d1) && !has_pair(d2) {
            audit.unpaired_noncodewords.push(x);
        }
        if (d1, d2) == (1, 3) && iset.len() == 2 && !has_pair(3) {
            audit.off_pattern_pairs.push(x);
        }
    }
    Ok(audit)
}
