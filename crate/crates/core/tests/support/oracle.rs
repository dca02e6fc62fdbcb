//! Reference solvers that share no code with the library's solvers. Graphs
//! are given as an argument count plus index pairs; argument `i` is named
//! `a{i:02}` so that name order matches index order.

#![allow(dead_code)]

use afmerge_core::{ArgumentId, AttackGraph, Label, Labeling};

pub fn name(i: usize) -> String {
    format!("a{i:02}")
}

pub fn build_graph(n: usize, edges: &[(usize, usize)]) -> AttackGraph {
    AttackGraph::from_parts(
        (0..n).map(|i| ArgumentId::new(name(i)).unwrap()),
        edges
            .iter()
            .map(|&(a, b)| (ArgumentId::new(name(a)).unwrap(), ArgumentId::new(name(b)).unwrap())),
    )
    .unwrap()
}

fn attacked_by_set(n: usize, edges: &[(usize, usize)], set: &[bool]) -> Vec<bool> {
    let mut hit = vec![false; n];
    for &(a, b) in edges {
        if set[a] {
            hit[b] = true;
        }
    }
    hit
}

/// Every IN set S with no internal attack that attacks every argument
/// outside S, found by checking all 2^n subsets. Sorted by IN names.
pub fn brute_force_stable(n: usize, edges: &[(usize, usize)]) -> Vec<Labeling> {
    let mut out: Vec<(Vec<String>, Labeling)> = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let set: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
        let conflict_free = edges.iter().all(|&(a, b)| !(set[a] && set[b]));
        if !conflict_free {
            continue;
        }
        let hit = attacked_by_set(n, edges, &set);
        if (0..n).all(|i| set[i] || hit[i]) {
            let ins: Vec<String> = (0..n).filter(|&i| set[i]).map(name).collect();
            let labeling = (0..n)
                .map(|i| {
                    let l = if set[i] { Label::In } else { Label::Out };
                    (ArgumentId::new(name(i)).unwrap(), l)
                })
                .collect();
            out.push((ins, labeling));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, l)| l).collect()
}

/// Well-founded model of `defeated(X) <- attacks(Y,X), not defeated(Y)` by
/// the alternating fixpoint: `possibly(D)` is the set of arguments with an
/// attacker outside D; the defeated set is the least fixpoint of
/// `possibly(possibly(.))`, and arguments outside `possibly(defeated)` are
/// accepted.
pub fn alternating_fixpoint_grounded(n: usize, edges: &[(usize, usize)]) -> Labeling {
    let possibly = |defeated: &[bool]| -> Vec<bool> {
        let mut out = vec![false; n];
        for &(y, x) in edges {
            if !defeated[y] {
                out[x] = true;
            }
        }
        out
    };
    let mut defeated = vec![false; n];
    loop {
        let next = possibly(&possibly(&defeated));
        if next == defeated {
            break;
        }
        defeated = next;
    }
    let maybe = possibly(&defeated);
    (0..n)
        .map(|i| {
            let l = if defeated[i] {
                Label::Out
            } else if !maybe[i] {
                Label::In
            } else {
                Label::Undec
            };
            (ArgumentId::new(name(i)).unwrap(), l)
        })
        .collect()
}

/// Expands an n*n adjacency bitmap into an edge list.
pub fn edges_from_bits(n: usize, bits: &[bool]) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| bits[a * n + b])
        .collect()
}
