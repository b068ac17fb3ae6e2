use std::collections::HashMap;
use std::sync::Arc;

use super::{CharacterTable, TableError};
use crate::provider::{CoefficientProvider, CoefficientValue};
use crate::rademacher::RademacherError;

/// Subgroup coefficients read off the ambient group through class fusion.
pub struct FusedProvider {
    group: String,
    map: HashMap<String, String>,
    ambient: Arc<dyn CoefficientProvider>,
}

impl FusedProvider {
    pub fn ambient_class(&self, class: &str) -> Option<&str> {
        self.map.get(class).map(String::as_str)
    }
}

pub fn fuse_subgroup(
    sub: &CharacterTable,
    ambient: Arc<dyn CoefficientProvider>,
) -> Result<FusedProvider, TableError> {
    let mut map = HashMap::new();
    for c in &sub.classes {
        let target = c
            .fusion_target
            .as_ref()
            .ok_or_else(|| TableError::Fusion(format!("class {} has no fusion target", c.name)))?;
        if !ambient.has_class(target) {
            return Err(TableError::Fusion(format!(
                "class {} fuses to {target}, which {} does not have",
                c.name,
                ambient.group_name()
            )));
        }
        map.insert(c.name.clone(), target.clone());
    }
    Ok(FusedProvider {
        group: sub.group_name.clone(),
        map,
        ambient,
    })
}

/// Checks a fusion map against the ambient table: every target exists and has
/// the same element order and multiplier, and class sizes are compatible.
pub fn check_fusion(sub: &CharacterTable, ambient: &CharacterTable) -> Result<(), TableError> {
    if ambient.group_order % sub.group_order != 0 {
        return Err(TableError::Fusion(format!(
            "|{}| = {} does not divide |{}| = {}",
            sub.group_name, sub.group_order, ambient.group_name, ambient.group_order
        )));
    }
    for c in &sub.classes {
        let target = c
            .fusion_target
            .as_ref()
            .ok_or_else(|| TableError::Fusion(format!("class {} has no fusion target", c.name)))?;
        let a = ambient
            .class_index(target)
            .map(|i| &ambient.classes[i])
            .ok_or_else(|| TableError::Fusion(format!("class {} fuses to unknown class {target}", c.name)))?;
        if a.element_order != c.element_order || a.ng != c.ng || a.hg != c.hg {
            return Err(TableError::Fusion(format!(
                "class {} (order {}) fuses to {target} (order {}) with different data",
                c.name, c.element_order, a.element_order
            )));
        }
    }
    Ok(())
}

impl CoefficientProvider for FusedProvider {
    fn group_name(&self) -> &str {
        &self.group
    }

    fn has_class(&self, class: &str) -> bool {
        self.map.contains_key(class)
    }

    fn coefficient(&self, class: &str, n: i64) -> Result<CoefficientValue, RademacherError> {
        let target = self
            .map
            .get(class)
            .ok_or_else(|| RademacherError::UnknownClass(class.to_string()))?;
        self.ambient.coefficient(target, n)
    }

    fn prefetch(&self, classes: &[String], grades: &[i64], jobs: usize) -> Result<(), RademacherError> {
        let mut targets: Vec<String> = Vec::new();
        for c in classes {
            let t = self.map.get(c).ok_or_else(|| RademacherError::UnknownClass(c.clone()))?;
            if !targets.contains(t) {
                targets.push(t.clone());
            }
        }
        self.ambient.prefetch(&targets, grades, jobs)
    }
}
