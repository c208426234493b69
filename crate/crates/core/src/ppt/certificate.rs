use std::fmt;

use serde::Serialize;

use super::context::RingContext;
use crate::exact::Rat;
use crate::poly::json::PolyJson;
use crate::poly::MixedPoly;

/// One side of an interval. A strict lower bound means `ppt > value`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Bound {
    pub value: Rat,
    pub strict: bool,
}

impl Bound {
    pub fn closed(value: Rat) -> Self {
        Bound { value, strict: false }
    }

    pub fn open(value: Rat) -> Self {
        Bound { value, strict: true }
    }
}

/// A rule that produced at least one bound, with the hypotheses it checked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleRecord {
    pub id: &'static str,
    pub reference: &'static str,
    pub statement: &'static str,
    pub hypotheses: Vec<String>,
    pub lower: Option<Bound>,
    pub upper: Option<Bound>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateInput {
    #[serde(flatten)]
    pub poly: PolyJson,
    pub ctx: RingContext,
}

/// Certified bounds on the plus-pure threshold of one polynomial.
///
/// `lower_rule` and `upper_rule` name the rules that attain the combined
/// bounds. `exact` is set only when the two bounds meet and neither is strict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCertificate {
    pub input: CertificateInput,
    pub family: Option<String>,
    pub lower: Option<Bound>,
    pub upper: Option<Bound>,
    pub exact: Option<Rat>,
    pub lower_rule: Option<&'static str>,
    pub upper_rule: Option<&'static str>,
    pub rules: Vec<RuleRecord>,
    pub notes: Vec<String>,
}

impl BoundCertificate {
    pub(crate) fn empty(f: &MixedPoly, ctx: RingContext) -> Self {
        BoundCertificate {
            input: CertificateInput {
                poly: PolyJson::from(f),
                ctx,
            },
            family: None,
            lower: None,
            upper: None,
            exact: None,
            lower_rule: None,
            upper_rule: None,
            rules: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn lower_value(&self) -> Option<&Rat> {
        self.lower.as_ref().map(|b| &b.value)
    }

    pub fn upper_value(&self) -> Option<&Rat> {
        self.upper.as_ref().map(|b| &b.value)
    }

    pub fn lower_strict(&self) -> bool {
        self.lower.as_ref().is_some_and(|b| b.strict)
    }

    pub fn upper_strict(&self) -> bool {
        self.upper.as_ref().is_some_and(|b| b.strict)
    }

    pub fn fired(&self, id: &str) -> bool {
        self.rules.iter().any(|r| r.id == id)
    }

    pub fn rule(&self, id: &str) -> Option<&RuleRecord> {
        self.rules.iter().find(|r| r.id == id)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("certificates are always serializable")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates are always serializable")
    }
}

/// Interval notation: `(1/2, 3/4]`, `= 1`, `[1/3, ?)`.
impl fmt::Display for BoundCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(x) = &self.exact {
            return write!(f, "= {x}");
        }
        match &self.lower {
            Some(b) => write!(f, "{}{}", if b.strict { "(" } else { "[" }, b.value)?,
            None => write!(f, "(0")?,
        }
        write!(f, ", ")?;
        match &self.upper {
            Some(b) => write!(f, "{}{}", b.value, if b.strict { ")" } else { "]" }),
            None => write!(f, "?)"),
        }
    }
}
