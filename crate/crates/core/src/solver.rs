//! Exact minimum-size codes by branch and bound.
//!
//! Every code kind is a hitting-set condition on the vertex set:
//!
//! * DOM: `C` meets `N[v]` for every `v`;
//! * ID: additionally `C` meets `N[u] Δ N[v]` for `u ≠ v`;
//! * LD: additionally `C` meets `(N[u] Δ N[v]) ∪ {u, v}`;
//! * SID: additionally `C` meets `N[u] \ N[v]` for every ordered pair.
//!
//! Pairs at distance three or more are implied by the domination clauses, so
//! only pairs within distance two are generated. Clauses are `u128` masks,
//! which caps the order at 128.
//!
//! The search is layered on the code size, starting from the best proven
//! lower bound: the first layer that admits a code is the optimum. Inside a
//! layer, vertex 0 is forced into the code (every rotation of a valid code is
//! valid), and the solver branches on the unsatisfied clause with the fewest
//! live vertices, pruning with a greedy disjoint-clause packing bound.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::VertexSet;
use crate::bounds::best_lower_bound;
use crate::circulant::{CirculantGraph, Code};
use crate::constructions::constructions_for;
use crate::error::{Error, Result};
use crate::verifier::{verify, CodeKind};

pub const MAX_ORDER: usize = 128;

const CHECK_EVERY: u64 = 1024;

/// Progress snapshot handed to [`SolveRequest::progress`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Progress {
    pub nodes: u64,
    /// Size of the best code known so far.
    pub incumbent: Option<usize>,
    /// Size layer currently being searched; no smaller code exists.
    pub bound: usize,
}

pub type ProgressSink = Arc<dyn Fn(&Progress) + Send + Sync>;

#[derive(Clone)]
pub struct SolveRequest {
    pub graph: CirculantGraph,
    pub kind: CodeKind,
    /// Do not search layers above this size.
    pub max_size: Option<usize>,
    /// Single-threaded, lexicographically smallest witness.
    pub deterministic: bool,
    pub time_budget: Option<Duration>,
    /// Start the layered search at the best closed-form lower bound instead of 1.
    pub use_bounds: bool,
    /// Called roughly every `progress_interval` explored nodes.
    pub progress: Option<ProgressSink>,
    pub progress_interval: u64,
}

impl SolveRequest {
    pub fn new(graph: CirculantGraph, kind: CodeKind) -> Self {
        SolveRequest {
            graph,
            kind,
            max_size: None,
            deterministic: false,
            time_budget: None,
            use_bounds: true,
            progress: None,
            progress_interval: 1 << 20,
        }
    }

    pub fn deterministic(mut self, on: bool) -> Self {
        self.deterministic = on;
        self
    }

    pub fn max_size(mut self, size: usize) -> Self {
        self.max_size = Some(size);
        self
    }

    pub fn time_budget(mut self, budget: Duration) -> Self {
        self.time_budget = Some(budget);
        self
    }

    pub fn use_bounds(mut self, on: bool) -> Self {
        self.use_bounds = on;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    BudgetExceeded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exhausted {
    /// Every layer up to `max_size` was refuted.
    MaxSize,
    TimeLimit,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub size: Option<usize>,
    #[serde(serialize_with = "ser_code")]
    pub witness: Option<Code>,
    pub nodes_explored: u64,
    /// No code smaller than this exists.
    pub lower_bound: usize,
    /// Size of the best code known; `None` when infeasible.
    pub upper_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhausted: Option<Exhausted>,
}

fn ser_code<S: serde::Serializer>(
    c: &Option<Code>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    c.as_ref().map(Code::to_vec).serialize(s)
}

/// The hitting-set instance for one `(graph, kind)` pair.
#[derive(Debug, Clone)]
pub struct ClauseSet {
    n: usize,
    clauses: Vec<u128>,
}

impl ClauseSet {
    /// Returns `None` when some clause is empty, i.e. no code exists.
    pub fn build(g: &CirculantGraph, kind: CodeKind) -> Result<Option<Self>> {
        let n = g.order();
        if n > MAX_ORDER {
            return Err(Error::SolverOrderTooLarge { n, max: MAX_ORDER });
        }
        let nb: Vec<u128> = (0..n).map(|u| g.closed_at(u).to_u128()).collect();
        let bit = |v: usize| 1u128 << v;
        let mut clauses: Vec<u128> = nb.clone();
        let ball = g.ball2_offsets();
        for u in 0..n {
            for &t in &ball {
                let v = (u + t) % n;
                match kind {
                    CodeKind::Dom => {}
                    CodeKind::Id if u < v => clauses.push(nb[u] ^ nb[v]),
                    CodeKind::Ld if u < v => clauses.push((nb[u] ^ nb[v]) | bit(u) | bit(v)),
                    CodeKind::Sid => clauses.push(nb[u] & !nb[v]),
                    _ => {}
                }
            }
        }
        // Two generators with 4·d2 − 1 < n: a non-codeword x has both of
        // x ± d1 or both of x ± d2 in the code. In clause form that is
        // {x, x ± d1, x ± d2} for all four sign choices.
        if let (CodeKind::Sid, &[d1, d2]) = (kind, g.gens()) {
            if 4 * d2 - 1 < n {
                for x in 0..n {
                    for a in [(x + d1) % n, (x + n - d1) % n] {
                        for b in [(x + d2) % n, (x + n - d2) % n] {
                            clauses.push(bit(x) | bit(a) | bit(b));
                        }
                    }
                }
            }
        }
        if clauses.contains(&0) {
            return Ok(None);
        }
        // Drop duplicates and any clause containing another clause.
        clauses.sort_unstable_by_key(|c| (c.count_ones(), *c));
        clauses.dedup();
        let mut kept: Vec<u128> = Vec::with_capacity(clauses.len());
        for c in clauses {
            if !kept.iter().any(|&k| k & c == k) {
                kept.push(c);
            }
        }
        Ok(Some(ClauseSet { n, clauses: kept }))
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn is_hit_by(&self, code: u128) -> bool {
        self.clauses.iter().all(|&c| c & code != 0)
    }

    fn full(&self) -> u128 {
        if self.n == 128 {
            u128::MAX
        } else {
            (1u128 << self.n) - 1
        }
    }
}

enum Node {
    Dead,
    Satisfied,
    Branch(u128),
}

enum Outcome {
    Found(u128),
    Exhausted,
    Aborted,
}

struct Shared {
    nodes: AtomicU64,
    found: AtomicBool,
    aborted: AtomicBool,
    deadline: Option<Instant>,
    progress: Option<ProgressSink>,
    progress_interval: u64,
    next_report: AtomicU64,
    incumbent: Option<usize>,
    layer: usize,
}

struct Searcher<'a> {
    cs: &'a ClauseSet,
    target: usize,
    shared: &'a Shared,
    local: u64,
}

impl<'a> Searcher<'a> {
    fn new(cs: &'a ClauseSet, target: usize, shared: &'a Shared) -> Self {
        Searcher {
            cs,
            target,
            shared,
            local: 0,
        }
    }

    fn flush(&mut self) {
        let total = self.shared.nodes.fetch_add(self.local, Ordering::Relaxed) + self.local;
        self.local = 0;
        if let Some(sink) = &self.shared.progress {
            let due = self.shared.next_report.load(Ordering::Relaxed);
            if total >= due
                && self
                    .shared
                    .next_report
                    .compare_exchange(
                        due,
                        total + self.shared.progress_interval,
                        Ordering::Relaxed,
                        Ordering::Relaxed,
                    )
                    .is_ok()
            {
                sink(&Progress {
                    nodes: total,
                    incumbent: self.shared.incumbent,
                    bound: self.shared.layer,
                });
            }
        }
    }

    /// Counts a node; false when the search must stop.
    fn tick(&mut self) -> bool {
        self.local += 1;
        if self.local >= CHECK_EVERY {
            self.flush();
            if let Some(deadline) = self.shared.deadline {
                if Instant::now() >= deadline {
                    self.shared.aborted.store(true, Ordering::Relaxed);
                }
            }
        }
        !self.shared.aborted.load(Ordering::Relaxed) && !self.shared.found.load(Ordering::Relaxed)
    }

    fn analyze(&self, chosen: u128, excluded: u128, count: usize) -> Node {
        let mut best = 0u128;
        let mut best_pop = u32::MAX;
        let mut used = 0u128;
        let mut packing = 0usize;
        for &c in &self.cs.clauses {
            if c & chosen != 0 {
                continue;
            }
            let live = c & !excluded;
            if live == 0 {
                return Node::Dead;
            }
            let pop = live.count_ones();
            if pop < best_pop {
                best_pop = pop;
                best = live;
            }
            if live & used == 0 {
                used |= live;
                packing += 1;
            }
        }
        if best_pop == u32::MAX {
            Node::Satisfied
        } else if count + packing > self.target {
            Node::Dead
        } else {
            Node::Branch(best)
        }
    }

    fn stopped(&self) -> Outcome {
        if self.shared.aborted.load(Ordering::Relaxed) {
            Outcome::Aborted
        } else {
            Outcome::Exhausted
        }
    }

    /// Clause-branching search for a hitting set of size at most `target`.
    fn branch(&mut self, chosen: u128, excluded: u128, count: usize) -> Outcome {
        if !self.tick() {
            return self.stopped();
        }
        let live = match self.analyze(chosen, excluded, count) {
            Node::Dead => return Outcome::Exhausted,
            Node::Satisfied => return Outcome::Found(chosen),
            Node::Branch(live) => live,
        };
        let mut excluded = excluded;
        let mut rest = live;
        while rest != 0 {
            let v = 1u128 << rest.trailing_zeros();
            rest &= rest - 1;
            match self.branch(chosen | v, excluded, count + 1) {
                Outcome::Exhausted => {}
                other => return other,
            }
            excluded |= v;
        }
        Outcome::Exhausted
    }

    /// Vertex-order search, include before exclude; the first hit is the
    /// lexicographically smallest hitting set of size at most `target`.
    fn lexicographic(&mut self, pos: usize, chosen: u128, excluded: u128, count: usize) -> Outcome {
        if !self.tick() {
            return self.stopped();
        }
        let excluded = if count == self.target {
            excluded | (self.cs.full() & !chosen)
        } else {
            excluded
        };
        match self.analyze(chosen, excluded, count) {
            Node::Dead => return Outcome::Exhausted,
            Node::Satisfied => return Outcome::Found(chosen),
            Node::Branch(_) => {}
        }
        if pos >= self.cs.n {
            return Outcome::Exhausted;
        }
        let v = 1u128 << pos;
        if (chosen | excluded) & v != 0 {
            return self.lexicographic(pos + 1, chosen, excluded, count);
        }
        match self.lexicographic(pos + 1, chosen | v, excluded, count + 1) {
            Outcome::Exhausted => {}
            other => return other,
        }
        self.lexicographic(pos + 1, chosen, excluded | v, count)
    }
}

/// Root subproblems for parallel search: each is `(chosen, excluded, count)`.
fn split(cs: &ClauseSet, target: usize, shared: &Shared, want: usize) -> Vec<(u128, u128, usize)> {
    let probe = Searcher::new(cs, target, shared);
    let mut frontier = vec![(1u128, 0u128, 1usize)];
    for _ in 0..3 {
        if frontier.len() >= want {
            break;
        }
        let mut next = Vec::new();
        for (chosen, excluded, count) in frontier {
            match probe.analyze(chosen, excluded, count) {
                Node::Dead => {}
                Node::Satisfied => next.push((chosen, excluded, count)),
                Node::Branch(live) => {
                    let mut ex = excluded;
                    let mut rest = live;
                    while rest != 0 {
                        let v = 1u128 << rest.trailing_zeros();
                        rest &= rest - 1;
                        next.push((chosen | v, ex, count + 1));
                        ex |= v;
                    }
                }
            }
        }
        frontier = next;
    }
    frontier
}

fn search_layer(cs: &ClauseSet, target: usize, deterministic: bool, shared: &Shared) -> Outcome {
    shared.found.store(false, Ordering::Relaxed);
    if deterministic {
        let mut s = Searcher::new(cs, target, shared);
        let out = s.lexicographic(1, 1, 0, 1);
        s.flush();
        return out;
    }
    let tasks = split(cs, target, shared, 4 * rayon::current_num_threads());
    let hit = tasks.par_iter().find_map_any(|&(chosen, excluded, count)| {
        let mut s = Searcher::new(cs, target, shared);
        let out = s.branch(chosen, excluded, count);
        s.flush();
        match out {
            Outcome::Found(code) => {
                shared.found.store(true, Ordering::Relaxed);
                Some(code)
            }
            _ => None,
        }
    });
    match hit {
        Some(code) => Outcome::Found(code),
        None if shared.aborted.load(Ordering::Relaxed) => Outcome::Aborted,
        None => Outcome::Exhausted,
    }
}

/// Best verified construction for the graph, or the full vertex set.
fn initial_incumbent(g: &CirculantGraph, kind: CodeKind) -> Code {
    constructions_for(g, kind)
        .into_iter()
        .filter(|r| verify(g, &r.code, kind).pass)
        .map(|r| r.code)
        .min_by_key(Code::len)
        .unwrap_or_else(|| Code::full(g.order()))
}

pub fn min_code_size(req: &SolveRequest) -> Result<SolveResult> {
    let g = &req.graph;
    let n = g.order();
    let kind = req.kind;
    if let Some(m) = req.max_size {
        if m > n {
            return Err(Error::Precondition(format!("max_size {m} exceeds n = {n}")));
        }
    }
    let infeasible = SolveResult {
        status: SolveStatus::Infeasible,
        size: None,
        witness: None,
        nodes_explored: 0,
        lower_bound: n + 1,
        upper_bound: None,
        exhausted: None,
    };
    if kind.forbids_twins() && g.closed_twins().is_some() {
        return Ok(infeasible);
    }
    let Some(cs) = ClauseSet::build(g, kind)? else {
        return Ok(infeasible);
    };

    let lower = if req.use_bounds {
        best_lower_bound(g, kind).value
    } else {
        1
    };
    let incumbent = initial_incumbent(g, kind);
    let cap = req.max_size.unwrap_or(n).min(incumbent.len());

    let mut shared = Shared {
        nodes: AtomicU64::new(0),
        found: AtomicBool::new(false),
        aborted: AtomicBool::new(false),
        deadline: req.time_budget.map(|b| Instant::now() + b),
        progress: req.progress.clone(),
        progress_interval: req.progress_interval.max(1),
        next_report: AtomicU64::new(0),
        incumbent: Some(incumbent.len()),
        layer: lower,
    };

    let finish = |status, code: Option<u128>, lb: usize, ub: Option<usize>, shared: &Shared| {
        let witness = code.map(|m| Code::new(VertexSet::from_u128(n, m)).expect("nonempty"));
        SolveResult {
            status,
            size: witness.as_ref().map(Code::len),
            witness,
            nodes_explored: shared.nodes.load(Ordering::Relaxed),
            lower_bound: lb,
            upper_bound: ub,
            exhausted: None,
        }
    };

    let mut layer = lower;
    // Smallest code found so far; only set once a layer succeeds.
    let mut best: Option<u128> = None;
    loop {
        if best.is_none() && layer > cap {
            break;
        }
        shared.layer = layer;
        if best.is_none() && layer == incumbent.len() && !req.deterministic {
            // Every smaller layer is refuted and the incumbent fills this one.
            best = Some(incumbent.members().to_u128());
            break;
        }
        match search_layer(&cs, layer, req.deterministic, &shared) {
            Outcome::Found(code) => {
                let size = code.count_ones() as usize;
                best = Some(code);
                // A hit below the layer means the starting bound overshot;
                // keep refuting downwards until a layer is empty.
                if size < layer {
                    layer = size - 1;
                    if layer == 0 {
                        break;
                    }
                    continue;
                }
                break;
            }
            Outcome::Exhausted if best.is_some() => break,
            Outcome::Exhausted => layer += 1,
            Outcome::Aborted => {
                let ub = best
                    .map(|b| b.count_ones() as usize)
                    .unwrap_or(incumbent.len());
                let lb = if best.is_some() { 1 } else { layer };
                let mut r = finish(SolveStatus::BudgetExceeded, None, lb, Some(ub), &shared);
                r.exhausted = Some(Exhausted::TimeLimit);
                return Ok(r);
            }
        }
    }

    match best {
        Some(code) => {
            let size = code.count_ones() as usize;
            Ok(finish(SolveStatus::Optimal, Some(code), size, Some(size), &shared))
        }
        None => {
            let mut r = finish(
                SolveStatus::BudgetExceeded,
                None,
                layer,
                Some(incumbent.len()),
                &shared,
            );
            r.exhausted = Some(Exhausted::MaxSize);
            Ok(r)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Optimality {
    Optimal,
    NotOptimal,
    Indeterminate,
}

/// Whether `code`, which must be a valid code of `kind`, has minimum size.
pub fn is_optimal(
    g: &CirculantGraph,
    code: &Code,
    kind: CodeKind,
    time_budget: Option<Duration>,
) -> Result<Optimality> {
    if !verify(g, code, kind).pass {
        return Err(Error::Precondition(format!(
            "code is not a valid {kind} code in {g}"
        )));
    }
    let size = code.len();
    if size <= best_lower_bound(g, kind).value {
        return Ok(Optimality::Optimal);
    }
    let mut req = SolveRequest::new(g.clone(), kind).max_size(size - 1);
    req.time_budget = time_budget;
    let r = min_code_size(&req)?;
    Ok(match (r.status, r.exhausted) {
        (SolveStatus::Optimal, _) => Optimality::NotOptimal,
        (SolveStatus::BudgetExceeded, Some(Exhausted::MaxSize)) => Optimality::Optimal,
        _ => Optimality::Indeterminate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, gens: &[i64]) -> CirculantGraph {
        CirculantGraph::new(n, gens).unwrap()
    }

    fn solve(n: usize, gens: &[i64], kind: CodeKind) -> SolveResult {
        min_code_size(&SolveRequest::new(g(n, gens), kind)).unwrap()
    }

    #[test]
    fn sid_exact_values() {
        assert_eq!(solve(14, &[1, 3], CodeKind::Sid).size, Some(8));
        assert_eq!(solve(17, &[1, 4], CodeKind::Sid).size, Some(10));
    }

    #[test]
    fn twins_are_infeasible() {
        let r = solve(4, &[1, 2], CodeKind::Id);
        assert_eq!(r.status, SolveStatus::Infeasible);
        let r = solve(6, &[1, 2, 3], CodeKind::Sid);
        assert_eq!(r.status, SolveStatus::Infeasible);
        // LD always exists.
        assert_eq!(solve(4, &[1, 2], CodeKind::Ld).size, Some(3));
    }

    #[test]
    fn witness_verifies() {
        for kind in CodeKind::ALL {
            let r = solve(13, &[1, 3], kind);
            let w = r.witness.unwrap();
            assert!(verify(&g(13, &[1, 3]), &w, kind).pass);
            assert!(w.contains(g(13, &[1, 3]).vertex(0)));
        }
    }

    #[test]
    fn deterministic_matches_parallel_size() {
        for kind in CodeKind::ALL {
            let a = solve(15, &[1, 4], kind);
            let b = min_code_size(&SolveRequest::new(g(15, &[1, 4]), kind).deterministic(true))
                .unwrap();
            assert_eq!(a.size, b.size, "{kind}");
        }
    }

    #[test]
    fn max_size_reports_budget() {
        let r = min_code_size(&SolveRequest::new(g(14, &[1, 3]), CodeKind::Sid).max_size(7)).unwrap();
        assert_eq!(r.status, SolveStatus::BudgetExceeded);
        assert_eq!(r.exhausted, Some(Exhausted::MaxSize));
        assert_eq!(r.lower_bound, 8);
    }

    #[test]
    fn zero_time_budget_aborts_hard_instance() {
        let req = SolveRequest::new(g(120, &[1, 7]), CodeKind::Id)
            .use_bounds(false)
            .time_budget(Duration::ZERO);
        let r = min_code_size(&req).unwrap();
        assert_eq!(r.status, SolveStatus::BudgetExceeded);
        assert_eq!(r.exhausted, Some(Exhausted::TimeLimit));
    }

    #[test]
    fn large_order_rejected() {
        let req = SolveRequest::new(g(130, &[1, 4]), CodeKind::Id);
        assert!(matches!(min_code_size(&req), Err(Error::SolverOrderTooLarge { .. })));
    }

    #[test]
    fn optimality_checks() {
        let c14 = g(14, &[1, 3]);
        assert_eq!(
            is_optimal(&c14, &Code::full(14), CodeKind::Sid, None).unwrap(),
            Optimality::NotOptimal
        );
        let k = Code::from_vertices(14, &[0, 1, 2, 3, 7, 8, 9, 10]).unwrap();
        assert_eq!(is_optimal(&c14, &k, CodeKind::Sid, None).unwrap(), Optimality::Optimal);
        assert!(is_optimal(&c14, &Code::from_vertices(14, &[0]).unwrap(), CodeKind::Sid, None).is_err());
    }

    #[test]
    fn clause_reduction_keeps_minimal_clauses() {
        let cs = ClauseSet::build(&g(10, &[1, 3]), CodeKind::Id).unwrap().unwrap();
        for (i, &a) in cs.clauses.iter().enumerate() {
            for (j, &b) in cs.clauses.iter().enumerate() {
                assert!(i == j || a & b != a, "clause {a:b} contained in {b:b}");
            }
        }
    }
}
