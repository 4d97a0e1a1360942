//! Self-contained requests: every object, battery and cap a verdict depends on.
//!
//! A verdict is its request with the result fields merged in, so `verify` can
//! re-run any verdict without the workspace it came from.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::exactcat::{
    baer_sum, conflations_equivalent, ext_pullback, ext_pushout, in_substructure, is_pure_mono, pullback,
    pure_by_divisor_criterion, pure_by_hom_exactness, pushout, Conflation, ExactStructure,
};
use crate::hulls::{
    is_essential, is_injective_hull, is_small_over, is_weakly_essential, iterative_preenvelope, minimize_envelope,
    structural_injective_hull, Battery, BatteryWitness, HullReport, InflationSet, PreenvelopeTrace,
};
use crate::linalg::{smith_normal_form, IntMatrix};
use crate::modcat::{
    enumerate_hom, hom_generators, hom_size, is_mono, module_from_presentation, Caps, FpModule, Morphism,
};
use crate::partial::{check_partial, find_extension, is_cophantom, is_f_injective, system_witness, PartialMorphism};
use crate::workspace::{BatteryDoc, Dec, MorphismDoc};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Object {
    Module(Vec<i64>),
    Morphism(MorphismDoc),
    Conflation { i: MorphismDoc, p: MorphismDoc },
}

impl Object {
    pub fn of_module(m: &FpModule) -> Self {
        Object::Module(m.factors().to_vec())
    }

    pub fn of_morphism(f: &Morphism) -> Self {
        Object::Morphism(MorphismDoc::of(f))
    }

    pub fn of_conflation(c: &Conflation) -> Self {
        Object::Conflation {
            i: MorphismDoc::of(c.i()),
            p: MorphismDoc::of(c.p()),
        }
    }

    /// Modules this object mentions, for default batteries.
    pub fn modules(&self, modulus: i64) -> Result<Vec<FpModule>> {
        let raw: Vec<&Vec<i64>> = match self {
            Object::Module(f) => vec![f],
            Object::Morphism(d) => vec![&d.source, &d.target],
            Object::Conflation { i, p } => vec![&i.source, &i.target, &p.target],
        };
        raw.into_iter().map(|f| FpModule::new(modulus, f.clone())).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StructureDoc {
    Abelian,
    Pure,
    HomInto { class: Vec<Vec<i64>> },
    HomFrom { class: Vec<Vec<i64>> },
}

impl StructureDoc {
    pub fn of(sel: &ExactStructure) -> Self {
        let class = || sel.class().iter().map(|m| m.factors().to_vec()).collect();
        match sel {
            ExactStructure::Abelian => StructureDoc::Abelian,
            ExactStructure::Pure => StructureDoc::Pure,
            ExactStructure::HomInto(_) => StructureDoc::HomInto { class: class() },
            ExactStructure::HomFrom(_) => StructureDoc::HomFrom { class: class() },
        }
    }

    pub fn resolve(&self, modulus: i64) -> Result<ExactStructure> {
        let class = |c: &Vec<Vec<i64>>| -> Result<Vec<FpModule>> {
            c.iter().map(|f| FpModule::new(modulus, f.clone())).collect()
        };
        Ok(match self {
            StructureDoc::Abelian => ExactStructure::Abelian,
            StructureDoc::Pure => ExactStructure::Pure,
            StructureDoc::HomInto { class: c } => ExactStructure::HomInto(class(c)?),
            StructureDoc::HomFrom { class: c } => ExactStructure::HomFrom(class(c)?),
        })
    }
}

/// Everything a command reads.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Request {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<i64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub inputs: BTreeMap<String, Object>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub battery: Option<BatteryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inflations: Option<Vec<MorphismDoc>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, Value>,
    pub caps: Caps,
}

/// Commands whose verdict carries a battery.
pub const BATTERY_COMMANDS: &[&str] = &["cophantom", "essential", "small-over", "hull", "minimize"];

impl Request {
    pub fn new(command: &str, ring: Option<i64>, caps: Caps) -> Self {
        Request {
            command: command.to_string(),
            ring,
            inputs: BTreeMap::new(),
            structure: None,
            battery: None,
            inflations: None,
            params: BTreeMap::new(),
            caps,
        }
    }

    fn modulus(&self) -> Result<i64> {
        self.ring
            .ok_or_else(|| Error::Input(format!("`{}` needs a ring", self.command)))
    }

    fn object(&self, role: &str) -> Result<&Object> {
        self.inputs
            .get(role)
            .ok_or_else(|| Error::Input(format!("`{}` needs input `{role}`", self.command)))
    }

    pub fn module(&self, role: &str) -> Result<FpModule> {
        match self.object(role)? {
            Object::Module(f) => FpModule::new(self.modulus()?, f.clone()),
            _ => Err(Error::Input(format!("input `{role}` must be a module"))),
        }
    }

    pub fn morphism(&self, role: &str) -> Result<Morphism> {
        match self.object(role)? {
            Object::Morphism(d) => d.resolve(self.modulus()?),
            _ => Err(Error::Input(format!("input `{role}` must be a morphism"))),
        }
    }

    pub fn conflation(&self, role: &str) -> Result<Conflation> {
        match self.object(role)? {
            Object::Conflation { i, p } => {
                let m = self.modulus()?;
                Conflation::new(i.resolve(m)?, p.resolve(m)?)
            }
            _ => Err(Error::Input(format!("input `{role}` must be a conflation"))),
        }
    }

    pub fn structure(&self) -> Result<ExactStructure> {
        match &self.structure {
            Some(s) => s.resolve(self.modulus()?),
            None => Ok(ExactStructure::Abelian),
        }
    }

    pub fn battery(&self) -> Result<Battery> {
        match &self.battery {
            Some(b) => b.resolve(self.modulus()?),
            None => Err(Error::Input(format!("`{}` needs a battery", self.command))),
        }
    }

    pub fn inflation_set(&self) -> Result<InflationSet> {
        let m = self.modulus()?;
        match &self.inflations {
            Some(ms) => Ok(InflationSet {
                members: ms.iter().map(|d| d.resolve(m)).collect::<Result<_>>()?,
            }),
            None => Ok(InflationSet::baer(m)),
        }
    }

    fn flag(&self, key: &str) -> bool {
        self.params.get(key).and_then(Value::as_bool).unwrap_or(false)
    }

    fn usize_param(&self, key: &str, default: usize) -> Result<usize> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| Error::Input(format!("parameter `{key}` must be a nonnegative integer"))),
        }
    }

    /// The default battery over the instance's modules, when none was chosen.
    pub fn fill_default_battery(&mut self) -> Result<()> {
        if self.battery.is_some() || !BATTERY_COMMANDS.contains(&self.command.as_str()) {
            return Ok(());
        }
        let m = self.modulus()?;
        let mut instance = Vec::new();
        for o in self.inputs.values() {
            instance.extend(o.modules(m)?);
        }
        self.battery = Some(BatteryDoc::of(&Battery::default_for(m, &instance)?));
        Ok(())
    }
}

pub(crate) fn mor(f: &Morphism) -> Value {
    serde_json::to_value(MorphismDoc::of(f)).expect("serializable")
}

fn conf(c: &Conflation) -> Value {
    json!({"i": mor(c.i()), "p": mor(c.p())})
}

fn battery_witness(w: &Option<BatteryWitness>, b: &Battery) -> Value {
    match w {
        None => Value::Null,
        Some(w) => json!({
            "target": b.targets[w.target].factors(),
            "map": mor(&w.map),
        }),
    }
}

fn hull_report(r: &HullReport, b: &Battery) -> Value {
    json!({
        "essential_injective": r.essential_injective,
        "small_injective": r.small_injective,
        "split_condition": r.split_condition,
        "envelope": r.envelope,
        "weakly_essential_injective": r.weakly_essential_injective,
        "split_witness": battery_witness(&r.split_witness, b),
    })
}

pub(crate) fn trace_json(t: &PreenvelopeTrace) -> Value {
    json!({
        "start": t.start.factors(),
        "steps_used": t.steps_used,
        "final_map": mor(&t.final_map),
        "stages": t.stages.iter().map(|s| json!({
            "module": s.module.factors(),
            "step": mor(&s.step),
            "copies": s.copies.iter().map(|(i, g)| json!({"member": i, "map": mor(g)})).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

fn matrix_param(r: &Request) -> Result<IntMatrix> {
    let v = r
        .params
        .get("matrix")
        .ok_or_else(|| Error::Input("`snf` needs a matrix".into()))?;
    let rows: Vec<Vec<Dec>> =
        serde_json::from_value(v.clone()).map_err(|e| Error::Input(format!("malformed matrix: {e}")))?;
    let cols = rows.first().map_or(0, Vec::len);
    IntMatrix::from_rows(
        rows.into_iter().map(|r| r.into_iter().map(|d| d.0).collect()).collect(),
        cols,
    )
}

fn big_rows(m: &IntMatrix) -> Value {
    json!(m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

/// A failed command, with whatever was computed before the failure.
#[derive(Debug)]
pub struct CommandError {
    pub error: Error,
    pub partial: Option<Value>,
}

impl From<Error> for CommandError {
    fn from(error: Error) -> Self {
        CommandError { error, partial: None }
    }
}

/// Result fields of one request. Errors follow the exit-code contract.
pub fn execute(r: &Request) -> std::result::Result<Map<String, Value>, CommandError> {
    let out = match r.command.as_str() {
        "snf" => {
            let a = matrix_param(r)?;
            let s = smith_normal_form(&a);
            let mut v = json!({
                "diagonal": s.diagonal().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "rank": s.rank,
                "u": big_rows(&s.u),
                "v": big_rows(&s.v),
            });
            if let Some(m) = r.ring {
                let module = module_from_presentation(m, &a, a.cols())?;
                v["module"] = json!(module.factors());
            }
            v
        }
        "module info" => {
            let m = r.module("m")?;
            json!({
                "factors": m.factors(),
                "order": m.order().to_string(),
                "exponent": m.exponent(),
                "ngens": m.ngens(),
                "injective": crate::hulls::is_injective_closed_form(&m),
                "socle_generators": crate::hulls::socle_generators(&m),
            })
        }
        "hom" => {
            let (a, b) = (r.module("source")?, r.module("target")?);
            let mut v = json!({
                "size": hom_size(&a, &b).to_string(),
                "generators": hom_generators(&a, &b).iter().map(mor).collect::<Vec<_>>(),
            });
            if r.flag("list") {
                v["maps"] = json!(enumerate_hom(&a, &b, &r.caps)?.map(|f| mor(&f)).collect::<Vec<_>>());
            }
            v
        }
        "pushout" => {
            let po = pushout(&r.morphism("f")?, &r.morphism("g")?)?;
            json!({"object": po.object.factors(), "i1": mor(&po.i1), "i2": mor(&po.i2)})
        }
        "pullback" => {
            let pb = pullback(&r.morphism("f")?, &r.morphism("g")?)?;
            json!({"object": pb.object.factors(), "p1": mor(&pb.p1), "p2": mor(&pb.p2)})
        }
        "is-pure" => {
            let i = r.morphism("i")?;
            let c = is_pure_mono(&i)?;
            let eta = crate::exactcat::conflation_of_mono(&i)?;
            json!({
                "pure": c.pure,
                "witness": c.witness,
                "hom_exactness": pure_by_hom_exactness(&eta),
                "divisor_criterion": pure_by_divisor_criterion(&i),
            })
        }
        "substructure" => {
            let eta = r.conflation("eta")?;
            json!({"in_substructure": in_substructure(&eta, &r.structure()?)?})
        }
        "baer-sum" => {
            let s = baer_sum(&r.conflation("a")?, &r.conflation("b")?)?;
            let split = Conflation::split(s.left(), s.right())?;
            let splits = conflations_equivalent(&s, &split, &r.caps)?.is_some();
            json!({"sum": conf(&s), "splits": splits})
        }
        "ext push" => json!({"conflation": conf(&ext_pushout(&r.conflation("eta")?, &r.morphism("g")?)?)}),
        "ext pull" => json!({"conflation": conf(&ext_pullback(&r.conflation("eta")?, &r.morphism("f")?)?)}),
        "partial check" => {
            let pm = PartialMorphism::new(r.morphism("u")?, r.morphism("f")?)?;
            let v = check_partial(&pm, &r.structure()?)?;
            json!({
                "is_partial": v.is_partial,
                "is_partial_iso": v.is_partial_iso,
                "pushout": {"object": v.pushout_object.factors(), "u_bar": mor(&v.u_bar), "f_bar": mor(&v.f_bar)},
                "purity": v.purity.map(|(a, b)| json!({"u_bar": a, "f_bar": b})),
                "witness": v.system_witness,
            })
        }
        "partial witness" => {
            let pm = PartialMorphism::new(r.morphism("u")?, r.morphism("f")?)?;
            json!({"witness": system_witness(&pm)})
        }
        "partial extend" => {
            let pm = PartialMorphism::new(r.morphism("u")?, r.morphism("f")?)?;
            json!({"extension": find_extension(&pm).as_ref().map(mor)})
        }
        "cophantom" => {
            let f = r.morphism("f")?;
            let b = r.battery()?;
            let mut monos = Vec::new();
            for z in &b.targets {
                for g in enumerate_hom(f.source(), z, &r.caps)? {
                    if is_mono(&g) {
                        monos.push(g);
                    }
                }
            }
            let v = is_cophantom(&f, &r.structure()?, &monos)?;
            json!({
                "cophantom": v.cophantom,
                "embeddings_checked": monos.len(),
                "failing_embedding": v.failing.map(|i| mor(&monos[i])),
            })
        }
        "injective" => {
            let e = r.module("e")?;
            let h = r.inflation_set()?;
            let v = is_f_injective(&e, &r.structure()?, &h.members)?;
            json!({
                "injective": v.injective,
                "closed_form": v.closed_form,
                "witness": v.witness.map(|(i, g)| json!({"member": i, "map": mor(&g)})),
            })
        }
        "essential" => {
            let u = r.morphism("u")?;
            let b = r.battery()?;
            let sel = r.structure()?;
            let v = if r.flag("weak") {
                is_weakly_essential(&u, &sel, &b, &r.caps)?
            } else {
                is_essential(&u, &sel, &b, &r.caps)?
            };
            json!({
                "essential": v.essential,
                "missed_element": v.missed_element,
                "counterexample": battery_witness(&v.counterexample, &b),
                "battery_relative": v.battery_relative,
            })
        }
        "small-over" => {
            let b = r.battery()?;
            let v = is_small_over(&r.morphism("v")?, &r.morphism("u")?, &r.structure()?, &b, &r.caps)?;
            json!({"small": v.small, "counterexample": battery_witness(&v.counterexample, &b)})
        }
        "hull" => {
            let h = structural_injective_hull(&r.module("m")?)?;
            let b = r.battery()?;
            let rep = is_injective_hull(&h.embedding, &r.structure()?, &b, &r.caps)?;
            json!({"hull": h.module.factors(), "embedding": mor(&h.embedding), "conditions": hull_report(&rep, &b)})
        }
        "preenvelope" => {
            let m = r.module("m")?;
            let steps = r.usize_param("max_steps", 8)?;
            match iterative_preenvelope(&m, &r.inflation_set()?, &r.structure()?, steps) {
                Ok(t) => json!({"trace": trace_json(&t)}),
                Err(f) => {
                    return Err(CommandError {
                        error: f.error,
                        partial: Some(json!({"partial_trace": trace_json(&f.partial)})),
                    })
                }
            }
        }
        "minimize" => {
            let b = r.battery()?;
            let h = minimize_envelope(&r.morphism("u")?, &r.structure()?, &b, &r.caps)?;
            json!({"module": h.module.factors(), "embedding": mor(&h.embedding)})
        }
        other => return Err(Error::Input(format!("unknown command `{other}`")).into()),
    };
    match out {
        Value::Object(m) => Ok(m),
        _ => unreachable!("results are objects"),
    }
}

/// Request fields followed by the result, as one JSON object.
pub fn verdict(r: &Request, result: Map<String, Value>) -> Value {
    let mut v = serde_json::to_value(r).expect("serializable");
    let obj = v.as_object_mut().expect("request is an object");
    for (k, x) in result {
        obj.insert(k, x);
    }
    v
}

/// Splits a verdict back into its request and result.
pub fn split_verdict(v: &Value) -> Result<(Request, Map<String, Value>)> {
    let r: Request =
        serde_json::from_value(v.clone()).map_err(|e| Error::Input(format!("not a verdict document: {e}")))?;
    let keys: Vec<String> = serde_json::to_value(&r)
        .expect("serializable")
        .as_object()
        .expect("object")
        .keys()
        .cloned()
        .collect();
    let mut rest = v.as_object().cloned().unwrap_or_default();
    for k in keys {
        rest.remove(&k);
    }
    Ok((r, rest))
}
