//! The reconciliation pipeline shared by the CLI and the HTTP service, so
//! both produce byte-identical artifacts.

use afmerge_core::{
    apply_recipe, detect_conflicts_with, grounded_labeling, merge_with, save_csv, stable_labelings_capped, to_dot,
    ConflictGraph, Dataset, Labeling, MergedRecipe, Recipe, StableEnumeration,
};
use serde_json::{json, Value};

use crate::config::Settings;
use crate::error::ServiceError;

/// Derived state of a set of recipes.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub recipes: Vec<Recipe>,
    pub conflicts: ConflictGraph,
    pub grounded: Labeling,
    pub stable: StableEnumeration,
    pub settings: Settings,
}

impl Analysis {
    pub fn new(recipes: Vec<Recipe>, settings: &Settings) -> Result<Self, ServiceError> {
        let conflicts = detect_conflicts_with(&settings.matrix, &recipes)?;
        let grounded = grounded_labeling(&conflicts.graph);
        let stable = stable_labelings_capped(&conflicts.graph, settings.stable_cap);
        Ok(Analysis {
            recipes,
            conflicts,
            grounded,
            stable,
            settings: settings.clone(),
        })
    }

    /// The stable labeling at `index`, or the grounded labeling when no
    /// index is given.
    pub fn labeling(&self, index: Option<usize>) -> Result<&Labeling, ServiceError> {
        match index {
            None => Ok(&self.grounded),
            Some(i) => self.stable.labelings.get(i).ok_or_else(|| {
                ServiceError::Invalid(format!(
                    "stable index {i} out of range ({} stable labelings)",
                    self.stable.labelings.len()
                ))
            }),
        }
    }

    pub fn merge(&self, index: Option<usize>) -> Result<MergedRecipe, ServiceError> {
        Ok(merge_with(&self.recipes, self.labeling(index)?, self.settings.rules)?)
    }

    pub fn graph_json(&self) -> Value {
        let mut v = self.conflicts.sidecar_json();
        v["grounded"] = serde_json::to_value(&self.grounded).expect("labeling serializes");
        v
    }

    pub fn extensions_json(&self) -> Value {
        json!({
            "grounded": self.grounded,
            "stable_count": self.stable.labelings.len(),
            "complete": self.stable.complete,
            "stable": self.stable_page(0, self.stable.labelings.len()),
        })
    }

    pub fn stable_page(&self, start: usize, len: usize) -> Vec<Value> {
        self.stable
            .labelings
            .iter()
            .enumerate()
            .skip(start)
            .take(len)
            .map(|(index, labeling)| json!({"index": index, "labeling": labeling}))
            .collect()
    }

    /// `stable: N`, or `stable: >=N` when the cap cut enumeration short.
    pub fn count_line(&self) -> String {
        let n = self.stable.labelings.len();
        if self.stable.complete {
            format!("stable: {n}")
        } else {
            format!("stable: >={n}")
        }
    }

    pub fn dot(&self, labeling: &Labeling) -> String {
        to_dot(&self.conflicts.graph, Some(labeling), Some(&self.conflicts.order_edges))
    }
}

/// Runs `merged` over `dataset` and renders the CSV.
pub fn apply_merged(dataset: &Dataset, merged: &MergedRecipe) -> Result<(Dataset, String), ServiceError> {
    let (out, _) = apply_recipe(dataset, merged)?;
    let csv = save_csv(&out);
    Ok((out, csv))
}

/// Pretty JSON with a trailing newline; every JSON artifact goes through here.
pub fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON value serializes") + "\n"
}

#[cfg(test)]
mod tests {
    use afmerge_core::parse_recipe;

    use super::*;

    fn analysis(cap: usize) -> Analysis {
        let a = r#"{"curator":"A","steps":[{"label":"X","op":"del_col","args":["x"]}]}"#;
        let b = r#"{"curator":"B","steps":[{"label":"Y","op":"rename","args":["x","y"]}]}"#;
        let recipes = vec![parse_recipe(a).unwrap(), parse_recipe(b).unwrap()];
        Analysis::new(
            recipes,
            &Settings {
                stable_cap: cap,
                ..Settings::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn mutual_attack_has_two_choices() {
        let a = analysis(10);
        assert_eq!(a.count_line(), "stable: 2");
        assert_eq!(a.grounded.count(afmerge_core::Label::Undec), 2);
        assert!(matches!(a.merge(None), Err(ServiceError::Conflict(_))));
        assert_eq!(a.merge(Some(0)).unwrap().steps.len(), 1);
        assert!(matches!(a.merge(Some(2)), Err(ServiceError::Invalid(_))));
    }

    #[test]
    fn cap_makes_count_a_lower_bound() {
        let a = analysis(1);
        assert_eq!(a.count_line(), "stable: >=1");
        assert_eq!(a.extensions_json()["complete"], false);
    }

    #[test]
    fn pages_clip_at_the_end() {
        let a = analysis(10);
        assert_eq!(a.stable_page(1, 5).len(), 1);
        assert!(a.stable_page(7, 1).is_empty());
    }
}
