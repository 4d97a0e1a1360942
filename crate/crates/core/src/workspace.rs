//! JSON workspaces: named modules, morphisms, conflations, batteries and
//! inflation sets over one ring.
//!
//! Matrix entries travel as decimal strings of any size and are reduced into
//! the ring on load. Plain JSON integers are accepted on input too.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactcat::Conflation;
use crate::hulls::{Battery, InflationSet};
use crate::linalg::{Matrix, RingSpec};
use crate::modcat::{Caps, FpModule, Morphism};

/// An integer written as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dec(pub BigInt);

impl Serialize for Dec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for Dec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Dec;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a decimal integer string or an integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Dec, E> {
                v.trim()
                    .parse::<BigInt>()
                    .map(Dec)
                    .map_err(|_| E::custom(format!("`{v}` is not a decimal integer")))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Dec, E> {
                Ok(Dec(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Dec, E> {
                Ok(Dec(v.into()))
            }
        }
        d.deserialize_any(V)
    }
}

impl Dec {
    fn reduce(&self, m: i64) -> i64 {
        let r = ((&self.0 % m) + m) % m;
        r.to_i64().expect("reduced below the modulus")
    }
}

pub(crate) fn dec_rows(m: &Matrix<i64>) -> Vec<Vec<Dec>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| Dec(x.into())).collect())
        .collect()
}

fn reduce_rows(rows: &[Vec<Dec>], m: i64) -> Vec<Vec<i64>> {
    rows.iter().map(|r| r.iter().map(|x| x.reduce(m)).collect()).collect()
}

/// A morphism written with explicit invariant factors on both sides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorphismDoc {
    pub source: Vec<i64>,
    pub target: Vec<i64>,
    pub matrix: Vec<Vec<Dec>>,
}

impl MorphismDoc {
    pub fn of(f: &Morphism) -> Self {
        MorphismDoc {
            source: f.source().factors().to_vec(),
            target: f.target().factors().to_vec(),
            matrix: dec_rows(f.matrix()),
        }
    }

    pub fn resolve(&self, modulus: i64) -> Result<Morphism> {
        let s = FpModule::new(modulus, self.source.clone())?;
        let t = FpModule::new(modulus, self.target.clone())?;
        morphism_from_rows(s, t, &self.matrix)
    }
}

fn morphism_from_rows(s: FpModule, t: FpModule, rows: &[Vec<Dec>]) -> Result<Morphism> {
    let m = s.modulus();
    if rows.len() != s.ngens() {
        return Err(Error::Dimension(format!(
            "matrix has {} rows, source {s:?} has {} generators",
            rows.len(),
            s.ngens()
        )));
    }
    if let Some(r) = rows.iter().find(|r| r.len() != t.ngens()) {
        return Err(Error::Dimension(format!(
            "matrix row has {} entries, target {t:?} has {} generators",
            r.len(),
            t.ngens()
        )));
    }
    let reduced: Vec<Vec<i64>> = reduce_rows(rows, m)
        .into_iter()
        .map(|r| r.iter().zip(t.factors()).map(|(&x, &d)| x % d).collect())
        .collect();
    Morphism::from_rows(s, t, reduced)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatteryDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<u128>,
    pub targets: Vec<Vec<i64>>,
}

impl BatteryDoc {
    pub fn of(b: &Battery) -> Self {
        BatteryDoc {
            max_order: b.max_order,
            targets: b.targets.iter().map(|t| t.factors().to_vec()).collect(),
        }
    }

    pub fn resolve(&self, modulus: i64) -> Result<Battery> {
        let targets = self
            .targets
            .iter()
            .map(|f| FpModule::new(modulus, f.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Battery {
            max_order: self.max_order,
            targets,
        })
    }
}

/// How a workspace battery is built.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum BatterySpec {
    /// Every module up to `max_order`, plus named extras.
    UpTo {
        max_order: u64,
        #[serde(default)]
        extra: Vec<String>,
    },
    Targets {
        targets: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InflationSpec {
    Baer,
    Members(Vec<String>),
    FreeSubmodules { max_rank: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedMorphism {
    pub source: String,
    pub target: String,
    pub morphism: Morphism,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedConflation {
    pub i: String,
    pub p: String,
    pub conflation: Conflation,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WsMorphism {
    source: String,
    target: String,
    matrix: Vec<Vec<Dec>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WsConflation {
    i: String,
    p: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WsDoc {
    ring: RingSpec,
    #[serde(default)]
    modules: BTreeMap<String, Vec<i64>>,
    #[serde(default)]
    morphisms: BTreeMap<String, WsMorphism>,
    #[serde(default)]
    conflations: BTreeMap<String, WsConflation>,
    #[serde(default)]
    batteries: BTreeMap<String, BatterySpec>,
    #[serde(default)]
    inflation_sets: BTreeMap<String, InflationSpec>,
}

/// Validated named objects over ℤ/m.
#[derive(Clone, Debug, PartialEq)]
pub struct Workspace {
    pub modulus: i64,
    pub modules: BTreeMap<String, FpModule>,
    pub morphisms: BTreeMap<String, NamedMorphism>,
    pub conflations: BTreeMap<String, NamedConflation>,
    pub batteries: BTreeMap<String, BatterySpec>,
    pub inflation_sets: BTreeMap<String, InflationSpec>,
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, kind: &str, name: &str) -> Result<&'a T> {
    map.get(name)
        .ok_or_else(|| Error::Input(format!("unknown {kind} `{name}`")))
}

impl Workspace {
    pub fn new(modulus: i64) -> Result<Self> {
        FpModule::new(modulus, vec![])?;
        Ok(Workspace {
            modulus,
            modules: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            conflations: BTreeMap::new(),
            batteries: BTreeMap::new(),
            inflation_sets: BTreeMap::new(),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: WsDoc = serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed workspace: {e}")))?;
        let modulus = match doc.ring {
            RingSpec::Modulus(m) => m,
            RingSpec::Integers => return Err(Error::Input("workspace ring must be Z/m".into())),
        };
        let mut ws = Workspace::new(modulus)?;
        for (name, factors) in doc.modules {
            let m = FpModule::new(modulus, factors).map_err(|e| Error::Input(format!("module `{name}`: {e}")))?;
            ws.modules.insert(name, m);
        }
        for (name, d) in doc.morphisms {
            let s = lookup(&ws.modules, "module", &d.source)?.clone();
            let t = lookup(&ws.modules, "module", &d.target)?.clone();
            let f = morphism_from_rows(s, t, &d.matrix).map_err(|e| Error::Input(format!("morphism `{name}`: {e}")))?;
            ws.morphisms.insert(
                name,
                NamedMorphism {
                    source: d.source,
                    target: d.target,
                    morphism: f,
                },
            );
        }
        for (name, c) in doc.conflations {
            let i = ws.morphism(&c.i)?.clone();
            let p = ws.morphism(&c.p)?.clone();
            let eta = Conflation::new(i, p).map_err(|e| Error::Input(format!("conflation `{name}`: {e}")))?;
            ws.conflations.insert(
                name,
                NamedConflation {
                    i: c.i,
                    p: c.p,
                    conflation: eta,
                },
            );
        }
        for (name, b) in &doc.batteries {
            let names = match b {
                BatterySpec::UpTo { extra, .. } => extra,
                BatterySpec::Targets { targets } => targets,
            };
            for n in names {
                lookup(&ws.modules, "module", n).map_err(|e| Error::Input(format!("battery `{name}`: {e}")))?;
            }
        }
        ws.batteries = doc.batteries;
        for (name, h) in &doc.inflation_sets {
            if let InflationSpec::Members(ms) = h {
                for n in ms {
                    ws.morphism(n)
                        .map_err(|e| Error::Input(format!("inflation set `{name}`: {e}")))?;
                }
            }
        }
        ws.inflation_sets = doc.inflation_sets;
        Ok(ws)
    }

    pub fn to_json(&self) -> String {
        let doc = WsDoc {
            ring: RingSpec::Modulus(self.modulus),
            modules: self
                .modules
                .iter()
                .map(|(k, m)| (k.clone(), m.factors().to_vec()))
                .collect(),
            morphisms: self
                .morphisms
                .iter()
                .map(|(k, f)| {
                    (
                        k.clone(),
                        WsMorphism {
                            source: f.source.clone(),
                            target: f.target.clone(),
                            matrix: dec_rows(f.morphism.matrix()),
                        },
                    )
                })
                .collect(),
            conflations: self
                .conflations
                .iter()
                .map(|(k, c)| {
                    (
                        k.clone(),
                        WsConflation {
                            i: c.i.clone(),
                            p: c.p.clone(),
                        },
                    )
                })
                .collect(),
            batteries: self.batteries.clone(),
            inflation_sets: self.inflation_sets.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("workspace serializes")
    }

    pub fn module(&self, name: &str) -> Result<&FpModule> {
        lookup(&self.modules, "module", name)
    }

    pub fn morphism(&self, name: &str) -> Result<&Morphism> {
        Ok(&lookup(&self.morphisms, "morphism", name)?.morphism)
    }

    pub fn conflation(&self, name: &str) -> Result<&Conflation> {
        Ok(&lookup(&self.conflations, "conflation", name)?.conflation)
    }

    /// Adds a module, reusing an existing name for the same factors.
    pub fn add_module(&mut self, name: &str, m: &FpModule) -> Result<String> {
        m.same_ring(&FpModule::zero(self.modulus))?;
        if let Some((k, _)) = self.modules.iter().find(|(_, v)| *v == m) {
            return Ok(k.clone());
        }
        self.modules.insert(name.to_string(), m.clone());
        Ok(name.to_string())
    }

    pub fn add_morphism(&mut self, name: &str, f: &Morphism) -> Result<()> {
        let s = self.add_module(&format!("{name}.source"), f.source())?;
        let t = self.add_module(&format!("{name}.target"), f.target())?;
        self.morphisms.insert(
            name.to_string(),
            NamedMorphism {
                source: s,
                target: t,
                morphism: f.clone(),
            },
        );
        Ok(())
    }

    /// The named battery, resolved against this workspace.
    pub fn battery(&self, name: &str) -> Result<Battery> {
        match lookup(&self.batteries, "battery", name)? {
            BatterySpec::UpTo { max_order, extra } => {
                let extra = extra
                    .iter()
                    .map(|n| self.module(n).cloned())
                    .collect::<Result<Vec<_>>>()?;
                Battery::up_to(self.modulus, *max_order as u128, &extra)
            }
            BatterySpec::Targets { targets } => Ok(Battery::explicit(
                targets
                    .iter()
                    .map(|n| self.module(n).cloned())
                    .collect::<Result<Vec<_>>>()?,
            )),
        }
    }

    /// The named inflation set. Membership is checked later against a structure.
    pub fn inflation_set(&self, name: &str, caps: &Caps) -> Result<InflationSet> {
        match lookup(&self.inflation_sets, "inflation set", name)? {
            InflationSpec::Baer => Ok(InflationSet::baer(self.modulus)),
            InflationSpec::Members(ms) => Ok(InflationSet {
                members: ms
                    .iter()
                    .map(|n| self.morphism(n).cloned())
                    .collect::<Result<Vec<_>>>()?,
            }),
            InflationSpec::FreeSubmodules { max_rank } => InflationSet::free_submodules(self.modulus, *max_rank, caps),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const RUNNING: &str = r#"{
        "ring": {"modulus": 4},
        "modules": {"X": [4], "U": [2]},
        "morphisms": {
            "u": {"source": "U", "target": "X", "matrix": [["2"]]},
            "f": {"source": "U", "target": "U", "matrix": [[1]]}
        },
        "batteries": {"small": {"max_order": 8, "extra": ["X"]}, "pick": {"targets": ["U"]}},
        "inflation_sets": {"H": "baer", "G": {"members": ["u"]}}
    }"#;

    #[test]
    fn loads_and_round_trips() {
        let ws = Workspace::from_json(RUNNING).unwrap();
        assert_eq!(ws.morphism("u").unwrap().row(0), &[2]);
        let again = Workspace::from_json(&ws.to_json()).unwrap();
        assert_eq!(ws, again);
        assert_eq!(ws.battery("pick").unwrap().targets.len(), 1);
        assert_eq!(ws.inflation_set("H", &Caps::default()).unwrap().members.len(), 1);
    }

    #[test]
    fn big_entries_reduce() {
        let text = RUNNING.replace(r#"[["2"]]"#, r#"[["100000000000000000000000000002"]]"#);
        let ws = Workspace::from_json(&text).unwrap();
        assert_eq!(ws.morphism("u").unwrap().row(0), &[2]);
    }

    #[test]
    fn rejects_bad_documents() {
        for bad in [
            RUNNING.replace(r#""target": "X""#, r#""target": "Q""#),
            RUNNING.replace("[4]", "[3]"),
            RUNNING.replace(r#"[["2"]]"#, r#"[["1"]]"#),
            RUNNING.replace(r#""extra": ["X"]"#, r#""extra": ["nope"]"#),
            "{not json".to_string(),
        ] {
            assert!(matches!(Workspace::from_json(&bad), Err(Error::Input(_))), "{bad}");
        }
    }
}
