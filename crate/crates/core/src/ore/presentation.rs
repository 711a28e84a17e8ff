use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::poly::{Exponents, OrePoly};
use super::signature::OreSignature;
use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q};

/// A cyclic module `R / R(g_1, ..., g_k)` given by its generator list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    signature: Arc<OreSignature>,
    generators: Vec<OrePoly>,
    meta: BTreeMap<String, String>,
}

/// Serialized monomial: `coeff * z^z * x^x * theta^theta * (z^2 d_z)^z2dz`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial {
    pub coeff: String,
    #[serde(default)]
    pub z: u32,
    #[serde(default)]
    pub x: BTreeMap<String, i32>,
    #[serde(default)]
    pub theta: BTreeMap<String, u32>,
    #[serde(default)]
    pub z2dz: u32,
}

#[derive(Serialize, Deserialize)]
struct PresentationDoc {
    signature: OreSignature,
    generators: Vec<Vec<Monomial>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    meta: BTreeMap<String, String>,
}

impl Presentation {
    pub fn new(signature: &Arc<OreSignature>, generators: Vec<OrePoly>) -> Result<Self> {
        for g in &generators {
            if **g.signature() != **signature {
                return Err(Error::SignatureMismatch);
            }
        }
        let generators = generators
            .into_iter()
            .map(|g| g.with_signature(signature))
            .collect::<Result<_>>()?;
        Ok(Presentation {
            signature: signature.clone(),
            generators,
            meta: BTreeMap::new(),
        })
    }

    pub fn signature(&self) -> &Arc<OreSignature> {
        &self.signature
    }

    pub fn generators(&self) -> &[OrePoly] {
        &self.generators
    }

    pub fn meta(&self) -> &BTreeMap<String, String> {
        &self.meta
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<String>) -> Self {
        self.meta.insert(key.to_string(), value.into());
        self
    }

    pub(crate) fn with_meta_from(mut self, other: &Presentation) -> Self {
        for (k, v) in &other.meta {
            self.meta.entry(k.clone()).or_insert_with(|| v.clone());
        }
        self
    }

    pub fn push(&mut self, g: OrePoly) -> Result<()> {
        self.generators.push(g.with_signature(&self.signature)?);
        Ok(())
    }

    /// Applies `f` to every generator, building the result in `target`.
    pub fn map_generators(
        &self,
        target: &Arc<OreSignature>,
        f: impl Fn(&OrePoly) -> Result<OrePoly>,
    ) -> Result<Self> {
        let gens = self.generators.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Presentation::new(target, gens)?.with_meta_from(self))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = PresentationDoc {
            signature: (*self.signature).clone(),
            generators: self.generators.iter().map(poly_to_monomials).collect(),
            meta: self.meta.clone(),
        };
        serde_json::to_value(doc).expect("presentation serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("value serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_value(&v)
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        let doc: PresentationDoc =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let s = doc.signature;
        let sig = OreSignature::from_parts(
            s.base_vars().to_vec(),
            s.invertible_vars().to_vec(),
            s.has_z2dz(),
            s.is_classical(),
        )?;
        let gens = doc
            .generators
            .iter()
            .map(|g| poly_from_monomials(&sig, g))
            .collect::<Result<Vec<_>>>()?;
        let mut p = Presentation::new(&sig, gens)?;
        p.meta = doc.meta;
        Ok(p)
    }
}

pub(crate) fn poly_to_monomials(p: &OrePoly) -> Vec<Monomial> {
    let vars = p.signature().base_vars();
    p.terms()
        .map(|(ex, c)| Monomial {
            coeff: fmt_q(c),
            z: ex.z,
            x: vars
                .iter()
                .zip(&ex.x)
                .filter(|(_, &b)| b != 0)
                .map(|(v, &b)| (v.clone(), b))
                .collect(),
            theta: vars
                .iter()
                .zip(&ex.theta)
                .filter(|(_, &c)| c != 0)
                .map(|(v, &c)| (v.clone(), c))
                .collect(),
            z2dz: ex.e,
        })
        .collect()
}

pub(crate) fn poly_from_monomials(sig: &Arc<OreSignature>, ms: &[Monomial]) -> Result<OrePoly> {
    let mut terms = Vec::with_capacity(ms.len());
    for m in ms {
        let mut ex = Exponents::one(sig.nvars());
        ex.z = m.z;
        ex.e = m.z2dz;
        for (v, &b) in &m.x {
            ex.x[sig
                .index_of(v)
                .ok_or_else(|| Error::UnmappedSymbol(v.clone()))?] = b;
        }
        for (v, &c) in &m.theta {
            ex.theta[sig
                .index_of(v)
                .ok_or_else(|| Error::UnmappedSymbol(v.clone()))?] = c;
        }
        terms.push((ex, parse_q(&m.coeff)?));
    }
    OrePoly::from_terms(sig, terms)
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "signature: vars [{}], invertible [{}], z2dz: {}{}",
            self.signature.base_vars().join(", "),
            self.signature.invertible_vars().join(", "),
            self.signature.has_z2dz(),
            if self.signature.is_classical() {
                ", classical"
            } else {
                ""
            }
        )?;
        for (i, g) in self.generators.iter().enumerate() {
            writeln!(f, "  g{}: {}", i + 1, g)?;
        }
        for (k, v) in &self.meta {
            writeln!(f, "  # {k} = {v}")?;
        }
        Ok(())
    }
}
