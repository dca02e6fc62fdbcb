use super::graph::IndexedGraph;
use super::{grounded_labeling, ArgumentId, AttackGraph, Label, Labeling};

/// Result of a (possibly capped) stable enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableEnumeration {
    /// Labelings in canonical order (lexicographic by sorted IN set).
    pub labelings: Vec<Labeling>,
    /// False when the cap stopped the search; `labelings.len()` is then only
    /// a lower bound on the number of stable labelings.
    pub complete: bool,
}

/// All stable labelings of `graph`, in canonical order.
pub fn stable_labelings(graph: &AttackGraph) -> Vec<Labeling> {
    stable_labelings_capped(graph, usize::MAX).labelings
}

/// Enumerates stable labelings, stopping once `cap` have been found.
///
/// The search starts from the grounded labeling, branches on the first
/// undecided argument (IN before OUT) and propagates the legality
/// conditions after every choice. When the cap is hit the returned prefix
/// follows search order, then gets sorted.
pub fn stable_labelings_capped(graph: &AttackGraph, cap: usize) -> StableEnumeration {
    let g = graph.indexed();
    let grounded = grounded_labeling(graph);
    let mut state: Vec<Option<bool>> = g
        .ids
        .iter()
        .map(|id| match grounded.get(id.as_str()) {
            Some(Label::In) => Some(true),
            Some(Label::Out) => Some(false),
            _ => None,
        })
        .collect();

    let mut found: Vec<Vec<bool>> = Vec::new();
    let mut complete = true;
    if propagate(&g, &mut state) {
        complete = search(&g, state, cap, &mut found);
    }

    let mut labelings: Vec<(Vec<&ArgumentId>, Labeling)> = found
        .into_iter()
        .map(|assign| {
            let labeling: Labeling = g
                .ids
                .iter()
                .zip(&assign)
                .map(|(id, &inn)| ((*id).clone(), if inn { Label::In } else { Label::Out }))
                .collect();
            let key = g
                .ids
                .iter()
                .zip(&assign)
                .filter(|(_, &inn)| inn)
                .map(|(id, _)| *id)
                .collect();
            (key, labeling)
        })
        .collect();
    labelings.sort_by(|a, b| a.0.cmp(&b.0));
    StableEnumeration {
        labelings: labelings.into_iter().map(|(_, l)| l).collect(),
        complete,
    }
}

/// Depth-first search; returns false if the cap cut it short.
fn search(g: &IndexedGraph<'_>, state: Vec<Option<bool>>, cap: usize, found: &mut Vec<Vec<bool>>) -> bool {
    let Some(branch) = state.iter().position(Option::is_none) else {
        if found.len() >= cap {
            return false;
        }
        found.push(state.into_iter().map(|s| s.unwrap_or(false)).collect());
        return true;
    };
    for choice in [true, false] {
        let mut next = state.clone();
        next[branch] = Some(choice);
        if propagate(g, &mut next) && !search(g, next, cap, found) {
            return false;
        }
    }
    true
}

/// Applies the forced consequences of a partial two-valued assignment.
/// Returns false if the assignment cannot be extended to a stable labeling.
fn propagate(g: &IndexedGraph<'_>, state: &mut [Option<bool>]) -> bool {
    let mut changed = true;
    while changed {
        changed = false;
        for x in 0..g.len() {
            match state[x] {
                Some(true) => {
                    // Neighbours of an IN argument are OUT.
                    for &y in g.attackers[x].iter().chain(&g.targets[x]) {
                        match state[y] {
                            Some(true) => return false,
                            Some(false) => {}
                            None => {
                                state[y] = Some(false);
                                changed = true;
                            }
                        }
                    }
                }
                Some(false) => {
                    let mut open = None;
                    let mut open_count = 0;
                    let mut has_in = false;
                    for &y in &g.attackers[x] {
                        match state[y] {
                            Some(true) => has_in = true,
                            Some(false) => {}
                            None => {
                                open = Some(y);
                                open_count += 1;
                            }
                        }
                    }
                    if has_in {
                        continue;
                    }
                    match (open_count, open) {
                        (0, _) => return false,
                        (1, Some(y)) => {
                            state[y] = Some(true);
                            changed = true;
                        }
                        _ => {}
                    }
                }
                None => {
                    let attackers = &g.attackers[x];
                    if attackers.iter().all(|&y| state[y] == Some(false)) {
                        state[x] = Some(true);
                        changed = true;
                    } else if attackers.iter().any(|&y| state[y] == Some(true)) {
                        state[x] = Some(false);
                        changed = true;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::af::parse_apx;

    fn ins(l: &Labeling) -> Vec<&str> {
        l.in_set().into_iter().map(ArgumentId::as_str).collect()
    }

    #[test]
    fn self_attack_has_no_stable_labeling() {
        assert!(stable_labelings(&parse_apx("arg(a). att(a,a).").unwrap()).is_empty());
    }

    #[test]
    fn mutual_pair_with_free_argument() {
        let g = parse_apx("arg(a). arg(c). arg(d). att(c,d). att(d,c).").unwrap();
        let stable = stable_labelings(&g);
        assert_eq!(stable.len(), 2);
        assert_eq!(ins(&stable[0]), vec!["a", "c"]);
        assert_eq!(ins(&stable[1]), vec!["a", "d"]);
        assert_eq!(stable[0].get("d"), Some(Label::Out));
    }

    #[test]
    fn odd_cycle_has_none() {
        let g = parse_apx("arg(a). arg(b). arg(c). att(a,b). att(b,c). att(c,a).").unwrap();
        assert!(stable_labelings(&g).is_empty());
    }

    #[test]
    fn empty_graph_has_one_empty_labeling() {
        let stable = stable_labelings(&AttackGraph::new());
        assert_eq!(stable, vec![Labeling::new()]);
    }

    #[test]
    fn cap_reports_incomplete() {
        // Three independent mutual pairs: 8 stable labelings.
        let g = parse_apx(
            "arg(a). arg(b). arg(c). arg(d). arg(e). arg(f).
             att(a,b). att(b,a). att(c,d). att(d,c). att(e,f). att(f,e).",
        )
        .unwrap();
        assert_eq!(stable_labelings(&g).len(), 8);
        let capped = stable_labelings_capped(&g, 3);
        assert_eq!(capped.labelings.len(), 3);
        assert!(!capped.complete);
        let exact = stable_labelings_capped(&g, 8);
        assert!(exact.complete);
    }
}
