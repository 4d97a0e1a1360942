//! Standalone re-check of a verdict: certificates are checked directly, then
//! the request is re-run and its result compared field by field.

use serde_json::{json, Map, Value};

use super::request::{execute, split_verdict, Request};
use crate::error::{Error, Result};
use crate::exactcat::{is_inflation, verify_purity_witness, Conflation, PurityWitness};
use crate::hulls::{is_injective, is_injective_closed_form};
use crate::modcat::{extend_along, is_mono, is_prime, FpModule, Morphism};
use crate::workspace::MorphismDoc;

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
}

fn morphism_at(v: &Value, m: i64) -> Result<Morphism> {
    let d: MorphismDoc =
        serde_json::from_value(v.clone()).map_err(|e| Error::Input(format!("malformed morphism: {e}")))?;
    d.resolve(m)
}

fn ints(v: &Value) -> Result<Vec<i64>> {
    serde_json::from_value(v.clone()).map_err(|e| Error::Input(format!("malformed element: {e}")))
}

/// Certificate checks that do not rerun the decision procedure.
fn certificate_checks(r: &Request, res: &Map<String, Value>) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let mut push = |name: &str, ok: bool| {
        out.push(Check {
            name: name.to_string(),
            ok,
        })
    };
    let Some(m) = r.ring else { return Ok(out) };
    let present = |k: &str| res.get(k).filter(|v| !v.is_null());
    match r.command.as_str() {
        "partial check" | "partial witness" => {
            let (u, f) = (r.morphism("u")?, r.morphism("f")?);
            if let Some(w) = present("witness") {
                let d = w["d"].as_i64().unwrap_or(0);
                let k = ints(&w["k"])?;
                let ok = d > 1
                    && u.source().is_valid_element(&k)
                    && u.target().in_multiple(&u.apply(&k), d)
                    && !f.target().in_multiple(&f.apply(&k), d);
                push("system-witness", ok);
            }
            if let Some(po) = present("pushout") {
                let (ub, fb) = (morphism_at(&po["u_bar"], m)?, morphism_at(&po["f_bar"], m)?);
                push("pushout-square-commutes", ub.after(&f)? == fb.after(&u)?);
            }
        }
        "partial extend" => {
            if let Some(g) = present("extension") {
                let g = morphism_at(g, m)?;
                push("extension-restricts", g.after(&r.morphism("u")?)? == r.morphism("f")?);
            }
        }
        "is-pure" => {
            if let Some(w) = present("witness") {
                let w = PurityWitness {
                    d: w["d"].as_i64().unwrap_or(0),
                    k: ints(&w["k"])?,
                    image: ints(&w["image"])?,
                };
                push("purity-witness", verify_purity_witness(&r.morphism("i")?, &w));
            }
        }
        "pushout" => {
            let (f, g) = (r.morphism("f")?, r.morphism("g")?);
            let (i1, i2) = (morphism_at(&res["i1"], m)?, morphism_at(&res["i2"], m)?);
            push("pushout-square-commutes", i1.after(&f)? == i2.after(&g)?);
        }
        "pullback" => {
            let (f, g) = (r.morphism("f")?, r.morphism("g")?);
            let (p1, p2) = (morphism_at(&res["p1"], m)?, morphism_at(&res["p2"], m)?);
            push("pullback-square-commutes", f.after(&p1)? == g.after(&p2)?);
        }
        "baer-sum" | "ext push" | "ext pull" => {
            let c = present("sum").or_else(|| present("conflation"));
            if let Some(c) = c {
                let ok = Conflation::new(morphism_at(&c["i"], m)?, morphism_at(&c["p"], m)?).is_ok();
                push("conflation-exact", ok);
            }
        }
        "injective" => {
            if let Some(w) = present("witness") {
                let idx = w["member"].as_u64().unwrap_or(u64::MAX) as usize;
                let h = r.inflation_set()?;
                let ok = match h.members.get(idx) {
                    Some(hm) => extend_along(hm, &morphism_at(&w["map"], m)?)?.is_none(),
                    None => false,
                };
                push("non-extending-map", ok);
            }
        }
        "essential" => {
            let u = r.morphism("u")?;
            if let Some(x) = present("missed_element") {
                let x = ints(x)?;
                let y = u.target();
                let outside = !crate::hulls::in_span(y, &image_rows(&u), &x);
                push(
                    "missed-element",
                    y.is_valid_element(&x) && is_prime(y.element_order(&x)) && outside,
                );
            }
            if let Some(w) = present("counterexample") {
                let g = morphism_at(&w["map"], m)?;
                let sel = r.structure()?;
                let ok = if r.params.get("weak").and_then(Value::as_bool).unwrap_or(false) {
                    is_mono(&g.after(&u)?) && !is_mono(&g)
                } else {
                    is_inflation(&g.after(&u)?, &sel)? && !is_inflation(&g, &sel)?
                };
                push("battery-counterexample", ok);
            }
        }
        "hull" | "minimize" => {
            let e = morphism_at(&res["embedding"], m)?;
            push("embedding-mono", is_mono(&e));
            push("target-injective", is_injective_closed_form(e.target()));
        }
        "preenvelope" => {
            let t = &res["trace"];
            let start = FpModule::new(m, ints(&t["start"])?)?;
            let mut acc = Morphism::identity(&start);
            for s in t["stages"].as_array().into_iter().flatten() {
                acc = morphism_at(&s["step"], m)?.after(&acc)?;
            }
            let fin = morphism_at(&t["final_map"], m)?;
            push("trace-composes", acc == fin);
            push("final-mono", is_mono(&fin));
            if matches!(
                r.structure()?,
                crate::exactcat::ExactStructure::Abelian | crate::exactcat::ExactStructure::Pure
            ) && r.inflations.is_none()
            {
                push("final-injective", is_injective(fin.target(), &r.structure()?)?);
            }
        }
        _ => {}
    }
    Ok(out)
}

fn image_rows(u: &Morphism) -> Vec<Vec<i64>> {
    (0..u.source().ngens()).map(|r| u.row(r).to_vec()).collect()
}

/// Re-checks one verdict document.
pub fn verify(doc: &Value) -> Result<(bool, Value)> {
    let (r, res) = split_verdict(doc)?;
    let mut checks = certificate_checks(&r, &res)?;
    let rerun = execute(&r).map_err(|e| e.error)?;
    checks.push(Check {
        name: "rerun-matches".into(),
        ok: rerun == res,
    });
    let ok = checks.iter().all(|c| c.ok);
    Ok((
        ok,
        json!({"command": "verify", "verified_command": r.command, "verified": ok, "checks": checks}),
    ))
}
