use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ambient algebra: `Q[z]` together with base variables `x_i` (some of them
/// invertible), the operators `theta_i = z d/dx_i` and optionally `z^2 d/dz`.
///
/// With `classical` set, `z` is specialised to 1 (so `theta_i` is the plain
/// derivation) and `z^2 d/dz` is unavailable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OreSignature {
    base_vars: Vec<String>,
    invertible: Vec<String>,
    has_z2dz: bool,
    #[serde(default)]
    classical: bool,
}

impl OreSignature {
    pub fn new<S: AsRef<str>>(
        base_vars: &[S],
        invertible: &[S],
        has_z2dz: bool,
    ) -> Result<Arc<Self>> {
        Self::build(
            base_vars.iter().map(|s| s.as_ref().to_string()).collect(),
            invertible.iter().map(|s| s.as_ref().to_string()).collect(),
            has_z2dz,
            false,
        )
    }

    /// Weyl-algebra signature with `z = 1`.
    pub fn classical<S: AsRef<str>>(base_vars: &[S], invertible: &[S]) -> Result<Arc<Self>> {
        Self::build(
            base_vars.iter().map(|s| s.as_ref().to_string()).collect(),
            invertible.iter().map(|s| s.as_ref().to_string()).collect(),
            false,
            true,
        )
    }

    fn build(
        base_vars: Vec<String>,
        invertible: Vec<String>,
        has_z2dz: bool,
        classical: bool,
    ) -> Result<Arc<Self>> {
        let sig = OreSignature {
            base_vars,
            invertible,
            has_z2dz,
            classical,
        };
        sig.validate()?;
        Ok(Arc::new(sig.canonical()))
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for v in &self.base_vars {
            if v.is_empty() || !v.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::Signature(format!("bad variable name `{v}`")));
            }
            if v == "z" || v == "z2dz" {
                return Err(Error::Signature(format!("`{v}` is reserved")));
            }
            if !seen.insert(v) {
                return Err(Error::Signature(format!("duplicate variable `{v}`")));
            }
        }
        for v in &self.invertible {
            if !seen.contains(v) {
                return Err(Error::Signature(format!(
                    "invertible `{v}` is not a base variable"
                )));
            }
        }
        if self.classical && self.has_z2dz {
            return Err(Error::Signature(
                "classical signature cannot carry z^2 d_z".into(),
            ));
        }
        Ok(())
    }

    // invertible list kept in base order, deduplicated
    fn canonical(mut self) -> Self {
        let inv: BTreeSet<String> = self.invertible.iter().cloned().collect();
        self.invertible = self
            .base_vars
            .iter()
            .filter(|v| inv.contains(*v))
            .cloned()
            .collect();
        self
    }

    pub fn base_vars(&self) -> &[String] {
        &self.base_vars
    }

    pub fn invertible_vars(&self) -> &[String] {
        &self.invertible
    }

    pub fn nvars(&self) -> usize {
        self.base_vars.len()
    }

    pub fn has_z2dz(&self) -> bool {
        self.has_z2dz
    }

    pub fn is_classical(&self) -> bool {
        self.classical
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.base_vars.iter().position(|v| v == name)
    }

    pub fn is_invertible(&self, idx: usize) -> bool {
        self.invertible.iter().any(|v| *v == self.base_vars[idx])
    }

    /// Same variables with the `z^2 d_z` flag switched.
    pub fn with_z2dz(&self, flag: bool) -> Result<Arc<Self>> {
        Self::build(
            self.base_vars.clone(),
            self.invertible.clone(),
            flag,
            self.classical,
        )
    }

    /// `z`-homogenised counterpart of a classical signature.
    pub fn homogenized(&self) -> Result<Arc<Self>> {
        Self::build(
            self.base_vars.clone(),
            self.invertible.clone(),
            false,
            false,
        )
    }

    pub fn dehomogenized(&self) -> Result<Arc<Self>> {
        Self::build(self.base_vars.clone(), self.invertible.clone(), false, true)
    }

    /// Inserts `name` at position `at` of the base variables.
    pub fn with_var_inserted(&self, at: usize, name: &str, invertible: bool) -> Result<Arc<Self>> {
        let mut vars = self.base_vars.clone();
        vars.insert(at.min(vars.len()), name.to_string());
        let mut inv = self.invertible.clone();
        if invertible {
            inv.push(name.to_string());
        }
        Self::build(vars, inv, self.has_z2dz, self.classical)
    }

    pub fn without_vars(&self, drop: &[String]) -> Result<Arc<Self>> {
        let vars: Vec<String> = self
            .base_vars
            .iter()
            .filter(|v| !drop.contains(v))
            .cloned()
            .collect();
        let inv: Vec<String> = self
            .invertible
            .iter()
            .filter(|v| !drop.contains(v))
            .cloned()
            .collect();
        Self::build(vars, inv, self.has_z2dz, self.classical)
    }

    pub(crate) fn from_parts(
        base_vars: Vec<String>,
        invertible: Vec<String>,
        has_z2dz: bool,
        classical: bool,
    ) -> Result<Arc<Self>> {
        Self::build(base_vars, invertible, has_z2dz, classical)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_stray_invertibles() {
        assert!(OreSignature::new(&["t", "t"], &[], false).is_err());
        assert!(OreSignature::new(&["t"], &["w"], false).is_err());
        assert!(OreSignature::new(&["z"], &[], false).is_err());
    }

    #[test]
    fn invertible_follows_base_order() {
        let s = OreSignature::new(&["a", "b", "c"], &["c", "a"], true).unwrap();
        assert_eq!(s.invertible_vars(), &["a".to_string(), "c".to_string()]);
        assert!(s.is_invertible(2));
        assert!(!s.is_invertible(1));
    }
}
