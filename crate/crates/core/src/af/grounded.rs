use super::{AttackGraph, Label, Labeling};

/// Computes the grounded labeling: the least fixpoint of the rule
/// `defeated(X) <- attacks(Y, X), not defeated(Y)`.
///
/// Worklist over per-argument counts of attackers not yet OUT. An argument
/// becomes IN once that count reaches zero; every target of an IN argument
/// becomes OUT. Whatever is left is UNDEC.
pub fn grounded_labeling(graph: &AttackGraph) -> Labeling {
    let g = graph.indexed();
    let n = g.len();
    let mut labels: Vec<Option<Label>> = vec![None; n];
    let mut live_attackers: Vec<usize> = g.attackers.iter().map(Vec::len).collect();

    let mut queue: Vec<usize> = (0..n).filter(|&i| live_attackers[i] == 0).collect();
    for &i in &queue {
        labels[i] = Some(Label::In);
    }

    while let Some(accepted) = queue.pop() {
        for &defeated in &g.targets[accepted] {
            if labels[defeated].is_some() {
                continue;
            }
            labels[defeated] = Some(Label::Out);
            for &t in &g.targets[defeated] {
                live_attackers[t] -= 1;
                if live_attackers[t] == 0 && labels[t].is_none() {
                    labels[t] = Some(Label::In);
                    queue.push(t);
                }
            }
        }
    }

    g.ids
        .iter()
        .zip(labels)
        .map(|(id, l)| ((*id).clone(), l.unwrap_or(Label::Undec)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::af::parse_apx;

    fn solve(apx: &str) -> Labeling {
        grounded_labeling(&parse_apx(apx).unwrap())
    }

    #[test]
    fn self_attack_is_undecided() {
        assert_eq!(solve("arg(a). att(a,a).").get("a"), Some(Label::Undec));
    }

    #[test]
    fn chain_alternates() {
        let l = solve("arg(a). arg(b). arg(c). att(a,b). att(b,c).");
        assert_eq!(l.get("a"), Some(Label::In));
        assert_eq!(l.get("b"), Some(Label::Out));
        assert_eq!(l.get("c"), Some(Label::In));
    }

    #[test]
    fn mutual_attack_stays_undecided() {
        let l = solve("arg(a). arg(b). arg(c). att(a,b). att(b,a). att(b,c).");
        assert_eq!(l.count(Label::Undec), 3);
    }

    #[test]
    fn self_attacker_defeated_by_accepted_argument() {
        let l = solve("arg(a). arg(b). arg(c). att(a,b). att(b,b). att(b,c).");
        assert_eq!(l.get("b"), Some(Label::Out));
        assert_eq!(l.get("c"), Some(Label::In));
    }

    #[test]
    fn empty_graph() {
        assert!(solve("").is_empty());
    }
}
