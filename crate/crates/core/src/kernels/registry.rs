//! Identity registry: each entry equates a rational combination of catalog integrals with a
//! rational combination of basis constants. The document ships in `data/identities.toml`.

use std::collections::HashSet;
use std::sync::OnceLock;

use rug::Rational;
use serde::{Deserialize, Serialize};

use super::KernelSpec;
use crate::constants::ConstantId;
use crate::error::{Error, Result};
use crate::exact::poly::parse_rational;

const DOCUMENT: &str = include_str!("../../data/identities.toml");

#[derive(Clone, Debug, PartialEq)]
pub struct IdentitySpec {
    pub id: String,
    pub description: String,
    pub lhs: Vec<(Rational, KernelSpec)>,
    pub rhs: Vec<(Rational, ConstantId)>,
}

/// Constants allowed on the right-hand side.
pub fn is_basis(c: &ConstantId) -> bool {
    matches!(
        c,
        ConstantId::ZetaOverPi(_)
            | ConstantId::BetaOverPi(_)
            | ConstantId::Gamma
            | ConstantId::Ln2
            | ConstantId::LnPi
            | ConstantId::Pi
    )
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelTerm {
    pub coeff: String,
    pub kernel: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisTerm {
    pub coeff: String,
    pub basis: String,
}

/// Wire form shared by the TOML document and JSON output.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub id: String,
    pub description: String,
    pub lhs: Vec<KernelTerm>,
    pub rhs: Vec<BasisTerm>,
}

#[derive(Deserialize)]
struct Document {
    version: u32,
    identity: Vec<IdentityRecord>,
}

impl IdentityRecord {
    pub fn compile(&self) -> Result<IdentitySpec> {
        let lhs = self
            .lhs
            .iter()
            .map(|t| Ok((parse_rational(&t.coeff)?, t.kernel.parse::<KernelSpec>()?)))
            .collect::<Result<Vec<_>>>()?;
        let rhs = self
            .rhs
            .iter()
            .map(|t| Ok((parse_rational(&t.coeff)?, t.basis.parse::<ConstantId>()?)))
            .collect::<Result<Vec<_>>>()?;
        let mut seen = HashSet::new();
        for (_, b) in &rhs {
            if !is_basis(b) {
                return Err(Error::Domain(format!("{}: {b} is not a basis constant", self.id)));
            }
            if !seen.insert(*b) {
                return Err(Error::Domain(format!("{}: basis {b} repeated", self.id)));
            }
        }
        if lhs.is_empty() {
            return Err(Error::Domain(format!("{}: empty left-hand side", self.id)));
        }
        Ok(IdentitySpec { id: self.id.clone(), description: self.description.clone(), lhs, rhs })
    }
}

impl From<&IdentitySpec> for IdentityRecord {
    fn from(s: &IdentitySpec) -> Self {
        IdentityRecord {
            id: s.id.clone(),
            description: s.description.clone(),
            lhs: s.lhs.iter().map(|(c, k)| KernelTerm { coeff: c.to_string(), kernel: k.to_string() }).collect(),
            rhs: s.rhs.iter().map(|(c, b)| BasisTerm { coeff: c.to_string(), basis: b.to_string() }).collect(),
        }
    }
}

/// Parse a registry document.
pub fn parse_registry(text: &str) -> Result<Vec<IdentitySpec>> {
    let doc: Document = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if doc.version != 1 {
        return Err(Error::Unsupported(format!("registry version {}", doc.version)));
    }
    let mut ids = HashSet::new();
    let mut out = Vec::with_capacity(doc.identity.len());
    for rec in &doc.identity {
        if !ids.insert(rec.id.clone()) {
            return Err(Error::Domain(format!("duplicate identity id {}", rec.id)));
        }
        out.push(rec.compile()?);
    }
    Ok(out)
}

/// The shipped registry, in document order.
pub fn identity_registry() -> &'static [IdentitySpec] {
    static REG: OnceLock<Vec<IdentitySpec>> = OnceLock::new();
    REG.get_or_init(|| parse_registry(DOCUMENT).expect("shipped registry is well formed"))
}

pub fn lookup_identity(id: &str) -> Result<&'static IdentitySpec> {
    identity_registry().iter().find(|s| s.id == id).ok_or_else(|| Error::UnknownId(id.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn required_entries() {
        let reg = identity_registry();
        assert!(reg.len() >= 40);
        let first = lookup_identity("sin4x-zeta3").unwrap();
        assert_eq!(first.rhs, vec![(Rational::from(-7), ConstantId::ZetaOverPi(1))]);
        let row = lookup_identity("sin20x").unwrap();
        let want: Vec<Rational> = ["-563/225", "178064/945", "-87376/15", "261632/3", "-524032"]
            .iter()
            .map(|s| parse_rational(s).unwrap())
            .collect();
        assert_eq!(row.rhs.iter().map(|(c, _)| c.clone()).collect::<Vec<_>>(), want);
        let li = lookup_identity("li-odd-n1").unwrap();
        assert_eq!(li.rhs[0].0, Rational::from((-7, 8)));
        assert!(matches!(lookup_identity("bogus-id"), Err(Error::UnknownId(_))));
    }

    #[test]
    fn duplicates_are_rejected() {
        let doc = r#"
version = 1
[[identity]]
id = "a"
description = ""
lhs = [{ coeff = "1", kernel = "F1" }]
rhs = [{ coeff = "1", basis = "gamma" }, { coeff = "2", basis = "gamma" }]
"#;
        assert!(parse_registry(doc).is_err());
        let doc = doc.replace("basis = \"gamma\" }]", "basis = \"zeta(3)\" }]");
        assert!(parse_registry(&doc).is_err());
    }
}
