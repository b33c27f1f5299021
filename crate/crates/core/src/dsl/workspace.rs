use std::collections::BTreeMap;
use std::sync::Arc;

use crate::category::FinCategory;
use crate::concrete::ConcreteCategory;
use crate::error::{Error, Result};
use crate::functor::{Functor, NatTrans};
use crate::signature::Signature;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatDecl {
    pub from: String,
    pub to: String,
    pub nat: NatTrans,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureDecl {
    pub over: String,
    pub signature: Signature,
}

/// Named declarations of every kind. Names are unique per kind, and every
/// functor, transformation and signature refers to declarations held here.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Workspace {
    categories: BTreeMap<String, Arc<FinCategory>>,
    concrete: BTreeMap<String, ConcreteCategory>,
    functors: BTreeMap<String, Functor>,
    nats: BTreeMap<String, NatDecl>,
    signatures: BTreeMap<String, SignatureDecl>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.categories.is_empty()
            && self.functors.is_empty()
            && self.nats.is_empty()
            && self.signatures.is_empty()
    }

    /// Register a category under its own name. Re-adding an equal category
    /// is a no-op; a different one under the same name is an error.
    pub fn add_category(&mut self, cat: Arc<FinCategory>) -> Result<Arc<FinCategory>> {
        match self.categories.get(cat.name()) {
            Some(existing) if **existing == *cat => Ok(existing.clone()),
            Some(_) => Err(Error::Structure(format!(
                "a different category named `{}` is already declared",
                cat.name()
            ))),
            None => {
                self.categories.insert(cat.name().to_string(), cat.clone());
                Ok(cat)
            }
        }
    }

    /// Register concrete structure, adding its category if needed.
    pub fn add_concrete(&mut self, k: ConcreteCategory) -> Result<()> {
        self.add_category(k.cat().clone())?;
        match self.concrete.get(k.name()) {
            Some(existing) if *existing == k => Ok(()),
            Some(_) => Err(Error::Structure(format!(
                "`{}` already carries different concrete structure",
                k.name()
            ))),
            None => {
                self.concrete.insert(k.name().to_string(), k);
                Ok(())
            }
        }
    }

    /// Register a functor; its source and target are added as categories.
    pub fn add_functor(&mut self, name: &str, f: Functor) -> Result<()> {
        if self.functors.contains_key(name) {
            return Err(Error::Structure(format!("functor `{name}` already declared")));
        }
        self.add_category(f.source().clone())?;
        self.add_category(f.target().clone())?;
        self.functors.insert(name.to_string(), f);
        Ok(())
    }

    pub fn add_nat(&mut self, name: &str, from: &str, to: &str, nat: NatTrans) -> Result<()> {
        if self.nats.contains_key(name) {
            return Err(Error::Structure(format!("transformation `{name}` already declared")));
        }
        for (fname, f) in [(from, nat.from()), (to, nat.to())] {
            match self.functors.get(fname) {
                Some(g) if g == f => {}
                Some(_) => {
                    return Err(Error::Mismatch(format!(
                        "functor `{fname}` differs from the one in `{name}`"
                    )))
                }
                None => self.add_functor(fname, f.clone())?,
            }
        }
        self.nats.insert(
            name.to_string(),
            NatDecl {
                from: from.to_string(),
                to: to.to_string(),
                nat,
            },
        );
        Ok(())
    }

    /// Register a signature over the concrete category `over`.
    pub fn add_signature(&mut self, name: &str, over: &str, signature: Signature) -> Result<()> {
        if self.signatures.contains_key(name) {
            return Err(Error::Structure(format!("signature `{name}` already declared")));
        }
        let k = self
            .concrete
            .get(over)
            .ok_or_else(|| Error::Structure(format!("`{over}` has no concrete structure")))?;
        if signature
            .symbols()
            .iter()
            .any(|s| s.interp.len() != k.cat().object_count())
        {
            return Err(Error::Mismatch(format!(
                "signature `{name}` does not match the objects of `{over}`"
            )));
        }
        self.signatures.insert(
            name.to_string(),
            SignatureDecl {
                over: over.to_string(),
                signature,
            },
        );
        Ok(())
    }

    /// Add every declaration of `other`, failing on conflicting names.
    pub fn merge(&mut self, other: &Workspace) -> Result<()> {
        for c in other.categories.values() {
            self.add_category(c.clone())?;
        }
        for k in other.concrete.values() {
            self.add_concrete(k.clone())?;
        }
        for (n, f) in &other.functors {
            match self.functors.get(n) {
                Some(g) if g == f => {}
                _ => self.add_functor(n, f.clone())?,
            }
        }
        for (n, d) in &other.nats {
            match self.nats.get(n) {
                Some(e) if e == d => {}
                _ => self.add_nat(n, &d.from, &d.to, d.nat.clone())?,
            }
        }
        for (n, d) in &other.signatures {
            match self.signatures.get(n) {
                Some(e) if e == d => {}
                _ => self.add_signature(n, &d.over, d.signature.clone())?,
            }
        }
        Ok(())
    }

    pub fn category(&self, name: &str) -> Option<&Arc<FinCategory>> {
        self.categories.get(name)
    }

    pub fn concrete(&self, name: &str) -> Option<&ConcreteCategory> {
        self.concrete.get(name)
    }

    pub fn functor(&self, name: &str) -> Option<&Functor> {
        self.functors.get(name)
    }

    pub fn nat(&self, name: &str) -> Option<&NatDecl> {
        self.nats.get(name)
    }

    pub fn signature(&self, name: &str) -> Option<&SignatureDecl> {
        self.signatures.get(name)
    }

    pub fn categories(&self) -> impl Iterator<Item = (&String, &Arc<FinCategory>)> {
        self.categories.iter()
    }

    pub fn concrete_categories(&self) -> impl Iterator<Item = (&String, &ConcreteCategory)> {
        self.concrete.iter()
    }

    pub fn functors(&self) -> impl Iterator<Item = (&String, &Functor)> {
        self.functors.iter()
    }

    pub fn nats(&self) -> impl Iterator<Item = (&String, &NatDecl)> {
        self.nats.iter()
    }

    pub fn signatures(&self) -> impl Iterator<Item = (&String, &SignatureDecl)> {
        self.signatures.iter()
    }

    /// Name under which `f` is declared, if any.
    pub fn functor_name(&self, f: &Functor) -> Option<&str> {
        self.functors
            .iter()
            .find(|(_, g)| *g == f)
            .map(|(n, _)| n.as_str())
    }

    pub fn declaration_count(&self) -> usize {
        self.categories.len()
            + self.concrete.len()
            + self.functors.len()
            + self.nats.len()
            + self.signatures.len()
    }
}
