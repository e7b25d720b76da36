mod common;

use std::collections::BTreeSet;

use common::{random_instance, Instance};
use nct::decomp::{decompose, Decomposition};
use nct::oracle::{validate_decomposition, PointerTree};
use nct::Error;
use proptest::prelude::*;

fn node_set(d: &Decomposition, p: usize) -> BTreeSet<usize> {
    let piece = d.piece(p);
    piece
        .members()
        .map(|u| u as usize)
        .chain([piece.root as usize])
        .collect()
}

fn path(pt: &PointerTree, a: usize, b: usize) -> Vec<usize> {
    let m = pt.lca(a, b);
    let mut out = Vec::new();
    for start in [a, b] {
        let mut u = start;
        while u != m {
            out.push(u);
            u = pt.parent(u).unwrap();
        }
    }
    out.push(m);
    out
}

fn check(inst: &Instance, max_size: usize) {
    let d = decompose(&inst.tree, max_size).unwrap();
    let pt = &inst.pt;
    let n = inst.n();
    let report = validate_decomposition(pt, d.pieces(), max_size);
    assert!(report.all_ok(), "L={max_size}: {:?}", report.problems);

    // map_node agrees with membership, local ranks round-trip
    for u in 2..=n {
        let p = d.map_node(u).unwrap();
        let piece = d.piece(p);
        assert!(piece.contains_member(u as u32));
        let r = piece.local_rank(u as u32).unwrap();
        assert_eq!(piece.node_at(r) as usize, u);
    }
    assert_eq!(d.map_node(1), Err(Error::NoOwningPiece(1)));

    // the macro tree: piece q hangs below the macro node owning q's root
    let mt = d.macro_tree();
    for q in 0..d.pieces().len() {
        let v = mt.node_of_piece(q);
        assert_eq!(mt.piece_of(v), Some(q));
        let root = d.piece(q).root as usize;
        let parent = mt.parent(v);
        if root == 1 {
            assert!(parent.is_none() || mt.piece_of(parent.unwrap()).is_none());
        } else {
            assert_eq!(parent, Some(mt.node_of_piece(d.map_node(root).unwrap())));
        }
    }

    // LCA transfer: the macro LCA of two nodes' pieces contains their LCA,
    // and a path leaving a piece crosses one of its boundary nodes
    let sample: Vec<usize> = (2..=n).step_by(n / 25 + 1).collect();
    for &a in &sample {
        for &b in &sample {
            let (pa, pb) = (d.map_node(a).unwrap(), d.map_node(b).unwrap());
            let m = mt.lca(mt.node_of_piece(pa), mt.node_of_piece(pb));
            let w = pt.lca(a, b);
            match mt.piece_of(m) {
                Some(q) => assert!(node_set(&d, q).contains(&w), "lca {w} of {a},{b}"),
                None => assert_eq!(w, 1),
            }
            if pa != pb {
                let piece = d.piece(pa);
                let boundary: Vec<usize> = [Some(piece.root), piece.boundary_leaf]
                    .into_iter()
                    .flatten()
                    .map(|u| u as usize)
                    .collect();
                let p = path(pt, a, b);
                assert!(p.iter().any(|u| boundary.contains(u)), "path {a}->{b}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn random_trees(
        seed in any::<u64>(),
        n in 2usize..300,
        window in prop_oneof![Just(1usize), 2usize..4, Just(1000)],
        max_size in 2usize..20,
    ) {
        check(&random_instance(seed, n, 1, window), max_size);
    }
}

#[test]
fn stars_paths_and_caterpillars() {
    let star = format!("({})", "()".repeat(30));
    let path = format!("{}{}", "(".repeat(30), ")".repeat(30));
    let caterpillar = format!("{}{}", "(()".repeat(20), ")".repeat(20));
    for shape in [star, path, caterpillar] {
        let n = shape.len() / 2;
        let inst = Instance::new(&shape, vec![1; n], 1);
        for l in [2, 3, 4, 7, n] {
            check(&inst, l);
        }
    }
}

#[test]
fn degenerate_and_invalid() {
    let one = Instance::new("()", vec![1], 1);
    assert_eq!(decompose(&one.tree, 3).unwrap_err(), Error::DegenerateTree);
    let two = Instance::new("(())", vec![1, 1], 1);
    assert!(decompose(&two.tree, 1).is_err());
    check(&two, 2);
}
