use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    /// A search ran out of budget before it could decide.
    Unknown,
}

/// The first violated law of a check, with the morphisms, objects or
/// element maps that witness it. Witness order is fixed per law.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub law: String,
    pub witness: Vec<String>,
    pub message: String,
}

impl Violation {
    pub fn new(law: &str, witness: Vec<String>, message: impl Into<String>) -> Self {
        Violation {
            law: law.to_string(),
            witness,
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.law, self.witness.join(", "), self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub check: String,
    pub outcome: Outcome,
    pub violation: Option<Violation>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerdictReport {
    pub fn pass(check: &str) -> Self {
        VerdictReport {
            check: check.to_string(),
            outcome: Outcome::Pass,
            violation: None,
            notes: Vec::new(),
        }
    }

    pub fn fail(check: &str, violation: Violation) -> Self {
        VerdictReport {
            check: check.to_string(),
            outcome: Outcome::Fail,
            violation: Some(violation),
            notes: Vec::new(),
        }
    }

    pub fn unknown(check: &str, why: impl Into<String>) -> Self {
        VerdictReport {
            check: check.to_string(),
            outcome: Outcome::Unknown,
            violation: None,
            notes: vec![why.into()],
        }
    }

    pub fn from_result(check: &str, r: Result<(), Violation>) -> Self {
        match r {
            Ok(()) => Self::pass(check),
            Err(v) => Self::fail(check, v),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn failed(&self) -> bool {
        self.outcome == Outcome::Fail
    }

    /// Law name of the violation, if any.
    pub fn law(&self) -> Option<&str> {
        self.violation.as_ref().map(|v| v.law.as_str())
    }
}

impl fmt::Display for VerdictReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Unknown => "UNKNOWN",
        };
        write!(f, "{tag} {}", self.check)?;
        if let Some(v) = &self.violation {
            write!(f, ": {v}")?;
        }
        for n in &self.notes {
            write!(f, " ({n})")?;
        }
        Ok(())
    }
}
