use circulant_codes::grid::{grid_density, grid_verify, lift, literature_density, GridKind};
use circulant_codes::verifier::{is_self_identifying, reference, sid_structure_audit};
use circulant_codes::{CirculantGraph, Code, CodeDocument, CodeKind, VertexSet, verify};
use proptest::prelude::*;

fn graph_and_code(max_n: usize) -> impl Strategy<Value = (CirculantGraph, Code)> {
    (5..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::btree_set(1..=(n / 2) as i64, 1..=4),
                prop::collection::vec(any::<bool>(), n),
            )
        })
        .prop_filter_map("empty code", |(n, gens, bits)| {
            let gens: Vec<i64> = gens.into_iter().collect();
            let vs: Vec<usize> = (0..n).filter(|&v| bits[v]).collect();
            Some((CirculantGraph::new(n, &gens).ok()?, Code::from_vertices(n, &vs).ok()?))
        })
}

/// Two-generator graphs with `4·d2 − 1 < n` and dense codes.
fn audit_case() -> impl Strategy<Value = (CirculantGraph, Code)> {
    (9usize..=48)
        .prop_flat_map(|n| (Just(n), 2..=n / 4))
        .prop_flat_map(|(n, d2)| {
            (
                Just(n),
                1..d2,
                Just(d2),
                prop::collection::vec(prop::bool::weighted(0.8), n),
            )
        })
        .prop_filter_map("empty code", |(n, d1, d2, bits)| {
            let vs: Vec<usize> = (0..n).filter(|&v| bits[v]).collect();
            let g = CirculantGraph::new(n, &[d1 as i64, d2 as i64]).ok()?;
            Some((g, Code::from_vertices(n, &vs).ok()?))
        })
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 1000,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn owner_in_identifier_set_iff_codeword((g, c) in graph_and_code(60)) {
        for u in g.vertices() {
            let iset = g.identifier_set(&c, u);
            prop_assert_eq!(iset.members.contains(u.index()), c.contains(u));
        }
    }

    #[test]
    fn neighbourhoods_symmetric_and_translation_equivariant((g, _c) in graph_and_code(60), t in 0i64..60) {
        let n = g.order();
        let antipodal = g.gens().iter().filter(|&&d| 2 * d == n).count();
        for u in g.vertices() {
            let nu = g.closed_neighborhood(u);
            prop_assert_eq!(nu.len(), 2 * g.gens().len() + 1 - antipodal);
            for v in nu.iter() {
                prop_assert!(g.closed_neighborhood(g.vertex(v as i64)).contains(u.index()));
            }
            let shifted = g.closed_neighborhood(g.vertex(u.index() as i64 + t));
            prop_assert_eq!(shifted, &nu.translate(t));
        }
    }

    #[test]
    fn implication_chain((g, c) in graph_and_code(60)) {
        let [dom, ld, id, sid] = CodeKind::ALL.map(|k| verify(&g, &c, k).pass);
        prop_assert!(!sid || id);
        prop_assert!(!id || ld);
        prop_assert!(!ld || dom);
    }

    #[test]
    fn rotation_and_reflection_invariance((g, c) in graph_and_code(60), t in any::<i64>()) {
        for kind in CodeKind::ALL {
            let base = verify(&g, &c, kind).pass;
            prop_assert_eq!(base, verify(&g, &c.translate(t), kind).pass);
            prop_assert_eq!(base, verify(&g, &c.negate(), kind).pass);
        }
    }

    #[test]
    fn intersection_characterisation_matches_pairwise((g, c) in graph_and_code(60)) {
        prop_assert_eq!(
            is_self_identifying(&g, &c).pass,
            reference::verify(&g, &c, CodeKind::Sid).pass
        );
    }

    #[test]
    fn distance_two_pairs_match_all_pairs((g, c) in graph_and_code(60)) {
        let twins = g.closed_twins().is_some();
        for kind in CodeKind::ALL {
            let fast = verify(&g, &c, kind);
            let slow = reference::verify(&g, &c, kind);
            if twins && kind.forbids_twins() {
                prop_assert_eq!(fast.pass, slow.pass);
            } else {
                prop_assert_eq!(fast, slow);
            }
        }
    }

    #[test]
    fn sid_codes_pass_structure_audit((g, c) in audit_case()) {
        if verify(&g, &c, CodeKind::Sid).pass {
            let audit = sid_structure_audit(&g, &c).unwrap();
            prop_assert!(audit.holds(), "{:?}", audit);
        } else {
            prop_assert!(sid_structure_audit(&g, &c).is_err());
        }
    }

    #[test]
    fn document_round_trip((g, c) in graph_and_code(60)) {
        let doc = CodeDocument { graph: Some(g.clone()), code: c.clone() };
        let back = CodeDocument::parse(&doc.to_json()).unwrap();
        prop_assert_eq!(back.code, c);
        prop_assert_eq!(back.graph, Some(g));
    }
}

/// A lifted code for random `(grid, d, n)` with `n ≥ 2d`.
fn lifted_case() -> impl Strategy<Value = (GridKind, usize, usize, Vec<bool>)> {
    (
        prop_oneof![Just(GridKind::Square), Just(GridKind::Triangular), Just(GridKind::King)],
        3usize..=12,
    )
        .prop_flat_map(|(grid, d)| (Just(grid), Just(d), 2 * d + 2..=60))
        .prop_flat_map(|(grid, d, n)| {
            (Just(grid), Just(d), Just(n), prop::collection::vec(prop::bool::weighted(0.6), n))
        })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn lifted_codes_are_lattice_periodic((grid, d, n, bits) in lifted_case(), x in -50i64..50, y in -50i64..50) {
        let vs: Vec<usize> = (0..n).filter(|&v| bits[v]).collect();
        prop_assume!(!vs.is_empty());
        let code = Code::from_vertices(n, &vs).unwrap();
        let p = lift(&code, n, d, grid).unwrap();
        for (a, b) in p.lattice_basis() {
            prop_assert_eq!(p.contains((x, y)), p.contains((x + a, y + b)));
            prop_assert_eq!(p.contains((x, y)), p.contains((x - a, y - b)));
        }
    }

    #[test]
    fn residue_map_carries_neighbourhoods((grid, d, n, _bits) in lifted_case(), x in -50i64..50, y in -50i64..50) {
        let code = Code::full(n);
        let p = lift(&code, n, d, grid).unwrap();
        let g = CirculantGraph::new(n, &grid.shape(d).gens()).unwrap();
        let image = VertexSet::from_residues(
            n,
            grid.closed_offsets().iter().map(|&(a, b)| p.project((x + a, y + b)) as i64),
        );
        let centre = g.vertex(p.project((x, y)) as i64);
        prop_assert_eq!(&image, g.closed_neighborhood(centre));
    }

    #[test]
    fn transport_preserves_codes((grid, d, n, bits) in lifted_case()) {
        let vs: Vec<usize> = (0..n).filter(|&v| bits[v]).collect();
        prop_assume!(!vs.is_empty());
        let code = Code::from_vertices(n, &vs).unwrap();
        let g = CirculantGraph::new(n, &grid.shape(d).gens()).unwrap();
        let p = lift(&code, n, d, grid).unwrap();
        for kind in [CodeKind::Ld, CodeKind::Id, CodeKind::Sid] {
            if verify(&g, &code, kind).pass {
                prop_assert!(grid_verify(&p, kind).pass, "{} {}", g, kind);
                let best = literature_density(grid, kind).unwrap();
                prop_assert!(grid_density(&p).0 >= best.0);
            }
        }
    }
}
