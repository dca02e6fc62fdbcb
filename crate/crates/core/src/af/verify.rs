use std::fmt;

use serde::Serialize;

use super::{grounded_labeling, AfError, ArgumentId, AttackGraph, Label, Labeling};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Two-valued and legal.
    Stable,
    /// Legal, has undecided arguments, and agrees with the grounded
    /// labeling on everything the grounded labeling decides.
    GroundedConsistent,
    Illegal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Two IN arguments attack one another.
    Conflict { attacker: ArgumentId, target: ArgumentId },
    /// IN argument with an attacker that is not OUT.
    InNotDefended { argument: ArgumentId, attacker: ArgumentId },
    /// OUT argument without an IN attacker.
    OutWithoutInAttacker { argument: ArgumentId },
    /// UNDEC argument that has an IN attacker.
    UndecAttackedByIn { argument: ArgumentId, attacker: ArgumentId },
    /// UNDEC argument whose attackers are all OUT.
    UndecUnchallenged { argument: ArgumentId },
    /// Disagrees with a decision of the grounded labeling.
    GroundedMismatch {
        argument: ArgumentId,
        grounded: Label,
        found: Label,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Conflict { attacker, target } => {
                write!(f, "{attacker} and {target} are both IN but {attacker} attacks {target}")
            }
            Violation::InNotDefended { argument, attacker } => {
                write!(f, "{argument} is IN but its attacker {attacker} is not OUT")
            }
            Violation::OutWithoutInAttacker { argument } => {
                write!(f, "{argument} is OUT but no attacker is IN")
            }
            Violation::UndecAttackedByIn { argument, attacker } => {
                write!(f, "{argument} is UNDEC but attacked by IN argument {attacker}")
            }
            Violation::UndecUnchallenged { argument } => {
                write!(f, "{argument} is UNDEC but all its attackers are OUT")
            }
            Violation::GroundedMismatch {
                argument,
                grounded,
                found,
            } => {
                write!(f, "{argument} is {found} but the grounded labeling says {grounded}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub verdict: Verdict,
    pub violations: Vec<Violation>,
}

/// Checks `labeling` against the legality conditions of `graph` and reports
/// every violation found.
pub fn verify_labeling(graph: &AttackGraph, labeling: &Labeling) -> Result<Verification, AfError> {
    labeling.check_total(graph)?;
    let label = |a: &ArgumentId| labeling.get(a.as_str()).expect("checked total");
    let mut violations = Vec::new();

    for arg in graph.arguments() {
        let attackers: Vec<&ArgumentId> = graph.attackers_of(arg).collect();
        match label(arg) {
            Label::In => {
                for att in &attackers {
                    match label(att) {
                        Label::In => violations.push(Violation::Conflict {
                            attacker: (*att).clone(),
                            target: arg.clone(),
                        }),
                        Label::Undec => violations.push(Violation::InNotDefended {
                            argument: arg.clone(),
                            attacker: (*att).clone(),
                        }),
                        Label::Out => {}
                    }
                }
            }
            Label::Out => {
                if !attackers.iter().any(|a| label(a) == Label::In) {
                    violations.push(Violation::OutWithoutInAttacker { argument: arg.clone() });
                }
            }
            Label::Undec => {
                if let Some(att) = attackers.iter().find(|a| label(a) == Label::In) {
                    violations.push(Violation::UndecAttackedByIn {
                        argument: arg.clone(),
                        attacker: (*att).clone(),
                    });
                }
                if attackers.iter().all(|a| label(a) == Label::Out) {
                    violations.push(Violation::UndecUnchallenged { argument: arg.clone() });
                }
            }
        }
    }

    let two_valued = labeling.is_two_valued();
    if !two_valued {
        let grounded = grounded_labeling(graph);
        for (arg, g) in grounded.iter() {
            let found = label(arg);
            if g != Label::Undec && g != found {
                violations.push(Violation::GroundedMismatch {
                    argument: arg.clone(),
                    grounded: g,
                    found,
                });
            }
        }
    }

    let verdict = match (violations.is_empty(), two_valued) {
        (false, _) => Verdict::Illegal,
        (true, true) => Verdict::Stable,
        (true, false) => Verdict::GroundedConsistent,
    };
    Ok(Verification { verdict, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::af::parse_apx;

    #[test]
    fn conflict_in_in_set_is_illegal() {
        let g = parse_apx("arg(a). arg(b). att(a,b).").unwrap();
        let l = Labeling::uniform(&g, Label::In);
        let v = verify_labeling(&g, &l).unwrap();
        assert_eq!(v.verdict, Verdict::Illegal);
        assert!(v.violations.contains(&Violation::Conflict {
            attacker: "a".into(),
            target: "b".into()
        }));
    }

    #[test]
    fn all_undec_consistent_only_when_grounded_is_all_undec() {
        let cyc = parse_apx("arg(a). arg(b). att(a,b). att(b,a).").unwrap();
        let v = verify_labeling(&cyc, &Labeling::uniform(&cyc, Label::Undec)).unwrap();
        assert_eq!(v.verdict, Verdict::GroundedConsistent);

        let chain = parse_apx("arg(a). arg(b). att(a,b).").unwrap();
        let v = verify_labeling(&chain, &Labeling::uniform(&chain, Label::Undec)).unwrap();
        assert_eq!(v.verdict, Verdict::Illegal);
    }

    #[test]
    fn non_total_labeling_is_an_error() {
        let g = parse_apx("arg(a). arg(b).").unwrap();
        let mut l = Labeling::new();
        l.set("a".into(), Label::In);
        assert_eq!(verify_labeling(&g, &l), Err(AfError::NotTotal(vec!["b".into()])));
    }

    #[test]
    fn stable_labeling_accepted() {
        let g = parse_apx("arg(a). arg(b). att(a,b). att(b,a).").unwrap();
        let l: Labeling = [("a".into(), Label::Out), ("b".into(), Label::In)]
            .into_iter()
            .collect();
        assert_eq!(verify_labeling(&g, &l).unwrap().verdict, Verdict::Stable);
    }

    #[test]
    fn out_without_attacker() {
        let g = parse_apx("arg(a).").unwrap();
        let v = verify_labeling(&g, &Labeling::uniform(&g, Label::Out)).unwrap();
        assert_eq!(
            v.violations,
            vec![Violation::OutWithoutInAttacker { argument: "a".into() }]
        );
    }
}
