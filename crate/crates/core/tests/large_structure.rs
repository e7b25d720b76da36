mod common;

use std::collections::BTreeSet;

use common::{random_instance, skewed_instance, Instance};
use nct::large_sigma::FrequentColor;
use nct::oracle::{
    naive_weighted_distance, naive_y, naive_y_set, naive_z, validate_decomposition, PointerTree,
};
use nct::{Color, LargeParams, LargeSigmaIndex, NodeId};
use proptest::prelude::*;

fn index(inst: &Instance, threshold: usize) -> LargeSigmaIndex {
    LargeSigmaIndex::build(
        inst.tree.clone(),
        inst.colors.clone(),
        LargeParams { threshold },
    )
    .unwrap()
}

fn present(inst: &Instance) -> Vec<Color> {
    (1..=inst.sigma)
        .filter(|&a| inst.raw.contains(&a))
        .collect()
}

fn alpha_nodes(inst: &Instance, alpha: Color) -> Vec<usize> {
    (1..=inst.n())
        .filter(|&u| inst.pt.color(u) == alpha)
        .collect()
}

/// Oracle nearest (by distance from `from`) among `alpha`-nodes passing `keep`.
fn nearest_where(
    pt: &PointerTree,
    from: usize,
    alpha: Color,
    keep: impl Fn(usize) -> bool,
) -> Option<usize> {
    (1..=pt.len())
        .filter(|&u| pt.color(u) == alpha && keep(u))
        .map(|u| pt.distance(from, u))
        .min()
}

fn check_instance(inst: &Instance, threshold: usize) {
    let idx = index(inst, threshold);
    let pt = &inst.pt;
    for alpha in present(inst) {
        // z and y against their definitions
        for x in 1..=inst.n() {
            let z = idx.z_node(NodeId::new(x), alpha).unwrap().rank();
            if pt.color(x) != alpha {
                assert_eq!(z, naive_z(pt, x, alpha).unwrap_or(x), "z of {x}");
            }
            let y = idx.y_node(NodeId::new(z), alpha).unwrap().rank();
            assert_eq!(Some(y), naive_y(pt, z, alpha), "y of {z}");
        }

        // nearest alpha-descendant of every node
        for v in 1..=inst.n() {
            let sub: BTreeSet<usize> = pt.subtree(v).into_iter().collect();
            let got = idx.nearest_desc(NodeId::new(v), alpha).unwrap();
            let want = nearest_where(pt, v, alpha, |u| sub.contains(&u));
            assert_eq!(got.map(|g| g.1), want, "desc of {v}");
            if let Some((u, d)) = got {
                assert!(sub.contains(&u.rank()) && pt.distance(v, u.rank()) == d);
            }
        }

        let Some(fc) = idx.frequent(alpha) else {
            continue;
        };
        check_frequent(inst, &idx, fc, alpha);
    }
}

fn check_frequent(inst: &Instance, idx: &LargeSigmaIndex, fc: &FrequentColor, alpha: Color) {
    let pt = &inst.pt;
    let ys = naive_y_set(pt, alpha);
    let at = fc.alpha_tree();
    let got: BTreeSet<usize> = at.nodes().iter().map(|&u| u as usize).collect();
    assert_eq!(got, ys, "Y closure");
    for (i, &u) in at.nodes().iter().enumerate() {
        let lowest = std::iter::successors(pt.parent(u as usize), |&a| pt.parent(a))
            .find(|a| ys.contains(a));
        assert_eq!(at.parent(i).map(|p| at.nodes()[p] as usize), lowest);
    }

    // the decomposition of T_alpha satisfies the piece properties
    let local_parents: Vec<Option<usize>> = (0..at.len()).map(|i| at.parent(i)).collect();
    let local = PointerTree::from_parents(&local_parents, &vec![1; at.len()]);
    let report =
        validate_decomposition(&local, fc.decomposition().pieces(), idx.params().threshold);
    assert!(report.all_ok(), "{:?}", report.problems);

    // every alpha-node is owned by exactly one macro node
    let wm = fc.weighted();
    let m = wm.macro_tree().len();
    let mut owned: Vec<usize> = (0..m)
        .flat_map(|v| fc.alpha_members(&inst.colors, v))
        .map(|u| u.rank())
        .collect();
    owned.sort_unstable();
    assert_eq!(owned, alpha_nodes(inst, alpha));

    // weighted distance and the precomputed nearest macro nodes
    let raw = |w: &[nct::large_sigma::Weight]| w.iter().map(|w| w.raw()).collect::<Vec<u64>>();
    let (w1, w2, w3) = (raw(wm.w1()), raw(wm.w2()), raw(wm.w3()));
    let parents = wm.macro_tree().parents();
    let naive = |v: usize, t: usize| naive_weighted_distance(&parents, &w1, &w2, &w3, v, t);
    for v in 0..m {
        let mut best_desc = u64::MAX;
        let mut best_nondesc = u64::MAX;
        for t in (0..m).filter(|&t| t != v) {
            let d = naive(v, t);
            assert_eq!(
                wm.weighted_distance(v, t).raw(),
                d,
                "weighted distance {v}->{t}"
            );
            if wm.macro_tree().is_ancestor(v, t) {
                best_desc = best_desc.min(d);
            } else {
                best_nondesc = best_nondesc.min(d);
            }
        }
        let at_pointer = |p: Option<usize>| p.map_or(u64::MAX, |t| naive(v, t));
        assert_eq!(at_pointer(wm.nearest_desc(v)), best_desc, "N_d({v})");
        assert_eq!(at_pointer(wm.nearest_nondesc(v)), best_nondesc, "N_nd({v})");
        if let Some(t) = wm.nearest_desc(v) {
            assert!(wm.macro_tree().is_ancestor(v, t) && t != v);
        }
        if let Some(t) = wm.nearest_nondesc(v) {
            assert!(!wm.macro_tree().is_ancestor(v, t));
        }
    }

    // nearest non-descendant of y for every z with an alpha-descendant:
    // the candidate union contains an optimum
    for z in 1..=inst.n() {
        let z_id = NodeId::new(z);
        let Ok(y) = idx.y_node(z_id, alpha) else {
            continue;
        };
        let y = y.rank();
        let sub: BTreeSet<usize> = pt.subtree(y).into_iter().collect();
        let want = nearest_where(pt, y, alpha, |u| !sub.contains(&u));
        let cands = idx.nondesc_candidates(z_id, alpha).unwrap();
        assert!(cands
            .iter()
            .all(|u| !sub.contains(&u.rank()) && pt.color(u.rank()) == alpha));
        let best = cands.iter().map(|u| pt.distance(y, u.rank())).min();
        assert_eq!(best, want, "candidates for y={y}");
        assert_eq!(idx.nearest_nondesc(z_id, alpha).unwrap().map(|r| r.1), want);
    }

    // three-candidate sufficiency for every non-alpha query node
    for x in (1..=inst.n()).filter(|&x| pt.color(x) != alpha) {
        let want = nearest_where(pt, x, alpha, |_| true).unwrap();
        assert_eq!(idx.query(NodeId::new(x), alpha).unwrap().1, want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn structure_matches_definitions(
        seed in any::<u64>(),
        n in 2usize..90,
        sigma in 1u32..6,
        window in prop_oneof![Just(1usize), 2usize..4, Just(1000)],
        threshold in 2usize..6,
    ) {
        check_instance(&random_instance(seed, n, sigma, window), threshold);
        check_instance(&skewed_instance(seed, n, sigma + 3, window), threshold);
    }
}

#[test]
fn single_color_everywhere() {
    let inst = Instance::new("(((())(()))(()()))", vec![1; 9], 1);
    check_instance(&inst, 2);
}

#[test]
fn two_alpha_nodes_on_a_path() {
    // path 1-2-3-4-5 with alpha at both ends
    let inst = Instance::new("((((()))))", vec![1, 2, 2, 2, 1], 2);
    check_instance(&inst, 2);
    let idx = index(&inst, 2);
    assert_eq!(idx.query(NodeId::new(3), 1).unwrap().1, 2);
}
