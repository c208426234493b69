use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::mixed::{MixedPoly, Uniformizer};
use super::monomial::Monomial;
use crate::error::{Error, Result};
use crate::exact::Prime;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub pi: u64,
    pub exps: Vec<u32>,
    pub coeff: String,
}

/// Wire form of a [`MixedPoly`]. Terms appear in printing order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub p: u64,
    pub ram_level: u32,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub cyclotomic: bool,
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

impl From<&MixedPoly> for PolyJson {
    fn from(f: &MixedPoly) -> Self {
        PolyJson {
            p: f.p().get(),
            ram_level: f.ram_level(),
            cyclotomic: f.is_cyclotomic(),
            vars: f.vars().to_vec(),
            terms: f
                .ordered_terms()
                .into_iter()
                .map(|(k, c)| TermJson {
                    pi: k.pi,
                    exps: k.mono.exps().to_vec(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&PolyJson> for MixedPoly {
    type Error = Error;

    fn try_from(j: &PolyJson) -> Result<Self> {
        let p = Prime::new(j.p)?;
        let unif = match (j.cyclotomic, j.ram_level) {
            (false, level) => Uniformizer::Root { level },
            (true, 0) => Uniformizer::Cyclotomic,
            (true, _) => return Err(Error::invalid("a cyclotomic base cannot also be ramified")),
        };
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            if t.exps.len() != j.vars.len() {
                return Err(Error::invalid(format!(
                    "term has {} exponents for {} variables",
                    t.exps.len(),
                    j.vars.len()
                )));
            }
            let c: BigInt = t
                .coeff
                .parse()
                .map_err(|_| Error::invalid(format!("bad coefficient `{}`", t.coeff)))?;
            terms.push((t.pi, Monomial::from_exps(t.exps.clone()), c));
        }
        Ok(MixedPoly::from_terms(p, unif, j.vars.clone(), terms))
    }
}

pub fn to_json_string(f: &MixedPoly) -> String {
    serde_json::to_string(&PolyJson::from(f)).expect("polynomial JSON is always serializable")
}

pub fn from_json_str(s: &str) -> Result<MixedPoly> {
    let j: PolyJson = serde_json::from_str(s).map_err(|e| Error::invalid(format!("bad polynomial JSON: {e}")))?;
    MixedPoly::try_from(&j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wire_format() {
        let f = MixedPoly::from_terms(
            Prime::new(5).unwrap(),
            Uniformizer::Root { level: 1 },
            vec!["x".into(), "y".into()],
            [
                (3, Monomial::from_exps(vec![0, 0]), 1),
                (0, Monomial::from_exps(vec![3, 0]), 1),
                (0, Monomial::from_exps(vec![0, 3]), -2),
            ],
        );
        let s = to_json_string(&f);
        assert_eq!(
            s,
            r#"{"p":5,"ram_level":1,"vars":["x","y"],"terms":[{"pi":3,"exps":[0,0],"coeff":"1"},{"pi":0,"exps":[3,0],"coeff":"1"},{"pi":0,"exps":[0,3],"coeff":"-2"}]}"#
        );
        assert_eq!(from_json_str(&s).unwrap(), f);
    }

    #[test]
    fn rejects_malformed() {
        assert!(from_json_str(r#"{"p":4,"ram_level":0,"vars":[],"terms":[]}"#).is_err());
        assert!(
            from_json_str(r#"{"p":3,"ram_level":0,"vars":["x"],"terms":[{"pi":0,"exps":[],"coeff":"1"}]}"#).is_err()
        );
        assert!(from_json_str(r#"{"p":3,"ram_level":1,"cyclotomic":true,"vars":[],"terms":[]}"#).is_err());
    }
}
