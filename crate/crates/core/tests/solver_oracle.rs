//! The solver against a brute-force oracle written from the definitions,
//! sharing no code with the library's verifier.

use circulant_codes::bounds::{best_lower_bound, exact_sid_value};
use circulant_codes::constructions::{id_square_mod40, sid_antipodal};
use circulant_codes::{
    is_optimal, min_code_size, CirculantGraph, Code, CodeKind, Optimality, SolveRequest,
    SolveStatus,
};

/// Closed neighbourhoods as bitmasks, straight from `u ± d (mod n)`.
fn neighbourhoods(n: usize, gens: &[usize]) -> Vec<u32> {
    (0..n)
        .map(|u| {
            let mut m = 1u32 << u;
            for &d in gens {
                m |= 1 << ((u + d) % n);
                m |= 1 << ((u + n - d) % n);
            }
            m
        })
        .collect()
}

fn is_code(kind: CodeKind, nb: &[u32], code: u32) -> bool {
    let n = nb.len();
    let iset: Vec<u32> = nb.iter().map(|&m| m & code).collect();
    if iset.iter().any(|&i| i == 0) {
        return false;
    }
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let ok = match kind {
                CodeKind::Dom => true,
                CodeKind::Id => iset[u] != iset[v],
                CodeKind::Ld => code >> u & 1 == 1 || code >> v & 1 == 1 || iset[u] != iset[v],
                CodeKind::Sid => iset[u] & !iset[v] != 0,
            };
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Minimum size and the lexicographically smallest optimal code, as a sorted list.
fn oracle(kind: CodeKind, n: usize, gens: &[usize]) -> Option<(usize, Vec<usize>)> {
    let nb = neighbourhoods(n, gens);
    let list = |m: u32| -> Vec<usize> { (0..n).filter(|&v| m >> v & 1 == 1).collect() };
    for size in 1..=n {
        let best = (1u32..1 << n)
            .filter(|m| m.count_ones() as usize == size && is_code(kind, &nb, *m))
            .map(list)
            .min();
        if let Some(code) = best {
            return Some((size, code));
        }
    }
    None
}

fn graph(n: usize, gens: &[usize]) -> CirculantGraph {
    let g: Vec<i64> = gens.iter().map(|&d| d as i64).collect();
    CirculantGraph::new(n, &g).unwrap()
}

fn solve(g: &CirculantGraph, kind: CodeKind) -> circulant_codes::SolveResult {
    min_code_size(&SolveRequest::new(g.clone(), kind)).unwrap()
}

/// Every nonempty generator set of `C_n`, for `3 ≤ n ≤ max_n`.
fn all_generator_sets(max_n: usize) -> Vec<(usize, Vec<usize>)> {
    let mut out = Vec::new();
    for n in 3..=max_n {
        let half = n / 2;
        for mask in 1u32..1 << half {
            let gens: Vec<usize> = (1..=half).filter(|d| mask >> (d - 1) & 1 == 1).collect();
            out.push((n, gens));
        }
    }
    out
}

#[test]
fn agrees_with_oracle_on_every_small_circulant() {
    let mut mismatches = Vec::new();
    for (n, gens) in all_generator_sets(12) {
        let g = graph(n, &gens);
        for kind in CodeKind::ALL {
            let want = oracle(kind, n, &gens).map(|(s, _)| s);
            let got = solve(&g, kind);
            if got.size != want {
                mismatches.push(format!("{g} {kind}: solver {:?}, oracle {want:?}", got.size));
            }
            if want.is_none() {
                assert_eq!(got.status, SolveStatus::Infeasible, "{g} {kind}");
            }
        }
    }
    assert!(mismatches.is_empty(), "{mismatches:#?}");
}

#[test]
fn deterministic_witness_is_lexicographically_smallest() {
    for (n, gens) in [(10, vec![1, 3]), (11, vec![1, 2]), (12, vec![1, 3, 4]), (12, vec![1, 6])] {
        let g = graph(n, &gens);
        for kind in CodeKind::ALL {
            let Some((_, lexmin)) = oracle(kind, n, &gens) else {
                continue;
            };
            let req = SolveRequest::new(g.clone(), kind).deterministic(true);
            let a = min_code_size(&req).unwrap();
            let b = min_code_size(&req).unwrap();
            assert_eq!(a.witness.as_ref().unwrap().to_vec(), lexmin, "{g} {kind}");
            assert_eq!(a.witness, b.witness);
            assert_eq!(a.nodes_explored, b.nodes_explored);
        }
    }
}

#[test]
fn c13_identifying_value_in_band() {
    let (want, _) = oracle(CodeKind::Id, 13, &[1, 3]).unwrap();
    assert!(want == 5 || want == 6);
    assert_eq!(solve(&graph(13, &[1, 3]), CodeKind::Id).size, Some(want));
}

#[test]
fn triangular_twelve_exceeds_quarter() {
    let (id, _) = oracle(CodeKind::Id, 12, &[1, 3, 4]).unwrap();
    assert!(id >= 4);
    let g = graph(12, &[1, 3, 4]);
    assert_eq!(solve(&g, CodeKind::Id).size, Some(id));
    let (sid, _) = oracle(CodeKind::Sid, 12, &[1, 3, 4]).unwrap();
    assert!(sid >= 5);
    assert_eq!(solve(&g, CodeKind::Sid).size, Some(sid));
}

/// Graphs up to order 20 with two or three generators.
fn medium_graphs() -> Vec<CirculantGraph> {
    let mut out = Vec::new();
    for n in 6..=20usize {
        for d in 2..=n / 2 {
            out.push(graph(n, &[1, d]));
            if d >= 3 {
                out.push(graph(n, &[1, d - 1, d]));
            }
        }
    }
    out
}

#[test]
fn solver_respects_bounds_and_kind_order() {
    for g in medium_graphs() {
        let sizes = CodeKind::ALL.map(|k| solve(&g, k).size);
        for (kind, size) in CodeKind::ALL.into_iter().zip(sizes) {
            let Some(size) = size else { continue };
            let report = best_lower_bound(&g, kind);
            assert!(size >= report.value, "{g} {kind}: {size} < {report:?}");
            for c in &report.candidates {
                assert!(size >= c.value, "{g} {kind}: {size} < {c:?}");
            }
        }
        // DOM ≤ LD ≤ ID ≤ SID whenever defined.
        let [dom, ld, id, sid] = sizes;
        assert!(dom <= ld, "{g}");
        if let Some(id) = id {
            assert!(ld.unwrap() <= id, "{g}");
            if let Some(sid) = sid {
                assert!(id <= sid, "{g}");
            }
        }
    }
}

#[test]
fn exact_sid_values_up_to_twenty() {
    let mut checked = 0;
    for n in 5..=20usize {
        for gens in [vec![1, 3], vec![1, 4], vec![1, n / 2]]
            .into_iter()
            .chain((4..=n / 2).flat_map(|d| [vec![1, d], vec![1, d - 1, d], vec![1, d - 1, d, d + 1]]))
        {
            if gens.iter().any(|&d| d > n / 2) || gens.windows(2).any(|w| w[0] >= w[1]) {
                continue;
            }
            let g = graph(n, &gens);
            if let Some(exact) = exact_sid_value(&g) {
                assert_eq!(solve(&g, CodeKind::Sid).size, Some(exact.value), "{g} {exact:?}");
                checked += 1;
            }
        }
    }
    assert!(checked >= 20, "only {checked} exact instances");
}

#[test]
fn known_sid_values() {
    for (n, gens, want) in [(12, [1, 3], 8), (14, [1, 3], 8), (17, [1, 4], 10), (19, [1, 4], 11)] {
        assert_eq!(solve(&graph(n, &gens), CodeKind::Sid).size, Some(want), "C_{n}{gens:?}");
    }
}

#[test]
fn optimality_of_known_codes() {
    let b1 = id_square_mod40(40, 4).unwrap();
    assert_eq!(
        is_optimal(&b1.graph, &b1.code, CodeKind::Id, None).unwrap(),
        Optimality::Optimal
    );
    let k1 = sid_antipodal(15).unwrap();
    assert_eq!(
        is_optimal(&k1.graph, &k1.code, CodeKind::Sid, None).unwrap(),
        Optimality::Optimal
    );
    let g = graph(14, &[1, 3]);
    assert_eq!(
        is_optimal(&g, &Code::full(14), CodeKind::Sid, None).unwrap(),
        Optimality::NotOptimal
    );
}

#[test]
fn thread_count_does_not_change_size() {
    let g = graph(20, &[1, 3]);
    let sizes: Vec<_> = [1, 2, 4]
        .into_iter()
        .map(|threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| solve(&g, CodeKind::Id).size)
        })
        .collect();
    assert!(sizes.windows(2).all(|w| w[0] == w[1]), "{sizes:?}");
}
