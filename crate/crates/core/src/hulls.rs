//! Essential and small extensions, injective hulls, and the preenvelope loop.

use crate::error::{Error, Result};
use crate::exactcat::{is_inflation, pushout, ExactStructure};
use crate::modcat::{
    cokernel, copair, direct_sum_many, divisors_above_one, enumerate_hom, enumerate_subgroups, extend_along,
    hom_generators, is_iso, is_mono, is_prime, lift_along, lift_element, minimal_subgroups, modules_up_to,
    subgroup_generated, subobject_leq, Caps, FpModule, IndexArith, Morphism,
};
use crate::partial::{check_partial, pure_partial_iso_by_systems, PartialMorphism};

/// Finite stand-in for "all objects": the targets quantified over.
#[derive(Clone, Debug, PartialEq)]
pub struct Battery {
    /// All modules up to this order were included, if generated.
    pub max_order: Option<u128>,
    pub targets: Vec<FpModule>,
}

impl Battery {
    pub const DEFAULT_ORDER: u128 = 16;

    /// Every module of order ≤ `max_order`, then `extra` (duplicates dropped).
    pub fn up_to(modulus: i64, max_order: u128, extra: &[FpModule]) -> Result<Self> {
        let mut targets = modules_up_to(modulus, max_order)?;
        for e in extra {
            e.same_ring(&FpModule::zero(modulus))?;
            if !targets.contains(e) {
                targets.push(e.clone());
            }
        }
        Ok(Battery {
            max_order: Some(max_order),
            targets,
        })
    }

    pub fn explicit(targets: Vec<FpModule>) -> Self {
        let mut out: Vec<FpModule> = Vec::new();
        for t in targets {
            if !out.contains(&t) {
                out.push(t);
            }
        }
        Battery {
            max_order: None,
            targets: out,
        }
    }

    /// The default: order ≤ 16 plus the modules of the instance.
    pub fn default_for(modulus: i64, instance: &[FpModule]) -> Result<Self> {
        Self::up_to(modulus, Self::DEFAULT_ORDER, instance)
    }
}

/// A set of inflations H = {hᵢ: Kᵢ → Hᵢ}.
#[derive(Clone, Debug, PartialEq)]
pub struct InflationSet {
    pub members: Vec<Morphism>,
}

impl InflationSet {
    pub fn new(members: Vec<Morphism>, sel: &ExactStructure) -> Result<Self> {
        for (i, h) in members.iter().enumerate() {
            if !is_inflation(h, sel)? {
                return Err(Error::Precondition(format!(
                    "member {i} is not an inflation of the selected structure"
                )));
            }
        }
        Ok(InflationSet { members })
    }

    /// {dℤ/m ↪ ℤ/m : 1 < d < m, d | m}.
    pub fn baer(modulus: i64) -> Self {
        let ring = FpModule::raw(modulus, vec![modulus]);
        let members = divisors_above_one(modulus)
            .into_iter()
            .filter(|&d| d < modulus)
            .map(|d| Morphism::raw(FpModule::raw(modulus, vec![modulus / d]), ring.clone(), single(d)))
            .collect();
        InflationSet { members }
    }

    /// Every submodule inclusion K ↪ (ℤ/m)ⁿ for 1 ≤ n ≤ `max_rank`.
    pub fn free_submodules(modulus: i64, max_rank: usize, caps: &Caps) -> Result<Self> {
        let mut members = Vec::new();
        for n in 1..=max_rank {
            let f = FpModule::free(modulus, n);
            for s in enumerate_subgroups(&f, None, caps)? {
                members.push(s.inclusion(&f));
            }
        }
        Ok(InflationSet { members })
    }
}

fn single(x: i64) -> crate::linalg::Matrix<i64> {
    crate::linalg::Matrix::from_vec(1, 1, vec![x]).expect("1x1")
}

/// Whether `y` lies in the subgroup generated by `gens`.
pub(crate) fn in_span(ambient: &FpModule, gens: &[Vec<i64>], y: &[i64]) -> bool {
    if y.iter().all(|&c| c == 0) {
        return true;
    }
    if gens.is_empty() {
        return false;
    }
    let free = FpModule::free(ambient.modulus(), gens.len());
    let p = Morphism::raw(
        free,
        ambient.clone(),
        crate::linalg::Matrix::from_rows(gens.to_vec(), ambient.ngens()).expect("rectangular"),
    );
    lift_element(&p, y, ambient.modulus()).is_some()
}

/// Generators of the socle: (dⱼ/p)·eⱼ for every prime p | dⱼ.
pub fn socle_generators(y: &FpModule) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for (j, &d) in y.factors().iter().enumerate() {
        for p in (2..=d).filter(|&p| d % p == 0 && is_prime(p)) {
            let mut e = vec![0; y.ngens()];
            e[j] = d / p;
            out.push(e);
        }
    }
    out
}

fn image_gens(u: &Morphism) -> Vec<Vec<i64>> {
    (0..u.source().ngens()).map(|r| u.row(r).to_vec()).collect()
}

fn prime_power(m: i64, p: i64) -> i64 {
    let mut q = 1;
    let mut r = m;
    while r % p == 0 {
        q *= p;
        r /= p;
    }
    q
}

/// Injective over ℤ/m: every p-part of every invariant factor is the full p-part of m.
pub fn is_injective_closed_form(e: &FpModule) -> bool {
    let m = e.modulus();
    e.factors().iter().all(|&d| {
        (2..=d)
            .filter(|&p| d % p == 0 && is_prime(p))
            .all(|p| prime_power(d, p) == prime_power(m, p))
    })
}

/// Injective relative to the Baer set, tested on Hom generators.
pub fn is_injective_baer(e: &FpModule) -> bool {
    InflationSet::baer(e.modulus()).members.iter().all(|h| {
        hom_generators(h.source(), e)
            .iter()
            .all(|g| extend_along(h, g).expect("shared source").is_some())
    })
}

/// Injectivity under the selector; only Abelian and Pure have an exact test.
pub fn is_injective(e: &FpModule, sel: &ExactStructure) -> Result<bool> {
    match sel {
        ExactStructure::Abelian => {
            let cf = is_injective_closed_form(e);
            if cf != is_injective_baer(e) {
                return Err(Error::Violation(format!("closed form and Baer test disagree on {e:?}")));
            }
            Ok(cf)
        }
        // finite modules are pure-injective
        ExactStructure::Pure => Ok(true),
        _ => Err(Error::Input(format!(
            "no injectivity test for the {} structure; use an explicit inflation set",
            sel.name()
        ))),
    }
}

/// Embedding of `a` into `z` when one exists: aᵢ must divide the aligned factor of z.
pub fn embedding_into(a: &FpModule, z: &FpModule) -> Option<Morphism> {
    let (af, zf) = (a.factors(), z.factors());
    if af.len() > zf.len() {
        return None;
    }
    let off = zf.len() - af.len();
    let mut m = crate::linalg::Matrix::zeros(af.len(), zf.len());
    for (i, &d) in af.iter().enumerate() {
        let b = zf[off + i];
        if b % d != 0 {
            return None;
        }
        m.set(i, off + i, b / d);
    }
    Some(Morphism::raw(a.clone(), z.clone(), m))
}

/// A battery target index and a map into it.
#[derive(Clone, Debug, PartialEq)]
pub struct BatteryWitness {
    pub target: usize,
    pub map: Morphism,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Conclusion {
    Inflation,
    Mono,
    SplitMono,
}

fn concludes(f: &Morphism, sel: &ExactStructure, c: Conclusion) -> Result<bool> {
    Ok(match c {
        Conclusion::Inflation => is_inflation(f, sel)?,
        Conclusion::Mono => is_mono(f),
        Conclusion::SplitMono => is_mono(f) && extend_along(f, &Morphism::identity(f.source()))?.is_some(),
    })
}

/// No nonzero subgroup of Y misses Img u: all of the socle lies in the image.
fn socle_in_image(u: &Morphism) -> bool {
    let y = u.target();
    let gens = image_gens(u);
    socle_generators(y).iter().all(|s| in_span(y, &gens, s))
}

/// Abelian case: maps `f` with `f u` mono and `f` not mono are Y → Y/K → Z for
/// K ≠ 0 with K ∩ Img u = 0 and Y/K embedding in Z.
fn kernel_class_search(u: &Morphism, battery: &Battery, caps: &Caps, prune: bool) -> Result<Option<BatteryWitness>> {
    let y = u.target();
    if prune && socle_in_image(u) {
        return Ok(None);
    }
    let subs = enumerate_subgroups(y, None, caps)?;
    let arith = IndexArith::new(y);
    let img = arith.generated(&image_gens(u));
    let candidates: Vec<_> = subs
        .iter()
        .filter(|k| k.order() > 1 && k.intersection_order(&img) == 1)
        .collect();
    if candidates.is_empty() {
        return Ok(None);
    }
    let quotients: Vec<(FpModule, Morphism)> = candidates.iter().map(|k| cokernel(&k.inclusion(y))).collect();
    for (t, z) in battery.targets.iter().enumerate() {
        for (q, pi) in &quotients {
            if let Some(e) = embedding_into(q, z) {
                return Ok(Some(BatteryWitness {
                    target: t,
                    map: e.after(pi)?,
                }));
            }
        }
    }
    Ok(None)
}

/// Abelian case: monos Y ↪ Z that do not split, via subgroups of Z isomorphic to Y.
fn nonsplit_mono_search(y: &FpModule, battery: &Battery, caps: &Caps) -> Result<Option<BatteryWitness>> {
    for (t, z) in battery.targets.iter().enumerate() {
        if z.order() <= y.order() {
            continue;
        }
        if embedding_into(y, z).is_none() {
            continue;
        }
        for s in enumerate_subgroups(z, None, caps)? {
            if s.order() as u128 != y.order() {
                continue;
            }
            let g = s.to_module(z);
            if g.module != *y {
                continue;
            }
            let inc = Morphism::raw(y.clone(), z.clone(), g.inclusion.matrix().clone());
            if extend_along(&inc, &Morphism::identity(y))?.is_none() {
                return Ok(Some(BatteryWitness { target: t, map: inc }));
            }
        }
    }
    Ok(None)
}

/// First `f: Y → Z` (Z in the battery) with `f u` an inflation and the conclusion failing.
fn battery_counterexample(
    u: &Morphism,
    sel: &ExactStructure,
    battery: &Battery,
    c: Conclusion,
    caps: &Caps,
    prune: bool,
) -> Result<Option<BatteryWitness>> {
    let y = u.target();
    for z in &battery.targets {
        z.same_ring(y)?;
    }
    if c != Conclusion::SplitMono && is_iso(u) {
        return Ok(None);
    }
    if *sel == ExactStructure::Abelian {
        if let Some(w) = kernel_class_search(u, battery, caps, prune)? {
            return Ok(Some(w));
        }
        if c == Conclusion::SplitMono {
            return nonsplit_mono_search(y, battery, caps);
        }
        return Ok(None);
    }
    // a retraction onto the source is the usual culprit
    if let Some(t) = battery.targets.iter().position(|z| z == u.source()) {
        if let Some(r) = extend_along(u, &Morphism::identity(u.source()))? {
            if !concludes(&r, sel, c)? {
                return Ok(Some(BatteryWitness { target: t, map: r }));
            }
        }
    }
    for (t, z) in battery.targets.iter().enumerate() {
        for f in enumerate_hom(y, z, caps)? {
            if is_inflation(&f.after(u)?, sel)? && !concludes(&f, sel, c)? {
                return Ok(Some(BatteryWitness { target: t, map: f }));
            }
        }
    }
    Ok(None)
}

fn require_inflation(u: &Morphism, sel: &ExactStructure) -> Result<()> {
    if !is_inflation(u, sel)? {
        return Err(Error::Precondition(format!(
            "the map is not an inflation of the {} structure",
            sel.name()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct EssentialVerdict {
    pub essential: bool,
    /// Abelian: a prime-order element of Y outside Img u.
    pub missed_element: Option<Vec<i64>>,
    /// Battery decisions: a map whose composite is an inflation but which is not.
    pub counterexample: Option<BatteryWitness>,
    /// False when decided exactly without the battery.
    pub battery_relative: bool,
}

/// First prime-order element of Y outside Img u, by enumeration of the atoms.
pub fn essential_by_cyclic_criterion(u: &Morphism, caps: &Caps) -> Result<Option<Vec<i64>>> {
    let y = u.target();
    let gens = image_gens(u);
    if y.order() <= caps.elements {
        let arith = IndexArith::new(y);
        let img = arith.generated(&gens);
        return Ok(minimal_subgroups(y).into_iter().find(|x| !img.contains(y, x)));
    }
    Ok(socle_generators(y).into_iter().find(|s| !in_span(y, &gens, s)))
}

/// Every nonzero subgroup of Y meets Img u.
pub fn essential_by_all_subobjects(u: &Morphism, caps: &Caps) -> Result<bool> {
    let y = u.target();
    let arith = IndexArith::new(y);
    let img = arith.generated(&image_gens(u));
    Ok(enumerate_subgroups(y, None, caps)?
        .iter()
        .all(|k| k.order() == 1 || k.intersection_order(&img) > 1))
}

/// Battery definition of essentiality, without shortcuts (used for cross-checks).
pub fn essential_by_battery(
    u: &Morphism,
    sel: &ExactStructure,
    battery: &Battery,
    caps: &Caps,
) -> Result<Option<BatteryWitness>> {
    require_inflation(u, sel)?;
    battery_counterexample(u, sel, battery, Conclusion::Inflation, caps, false)
}

pub fn is_essential(u: &Morphism, sel: &ExactStructure, battery: &Battery, caps: &Caps) -> Result<EssentialVerdict> {
    require_inflation(u, sel)?;
    if *sel == ExactStructure::Abelian {
        let missed = essential_by_cyclic_criterion(u, caps)?;
        return Ok(EssentialVerdict {
            essential: missed.is_none(),
            missed_element: missed,
            counterexample: None,
            battery_relative: false,
        });
    }
    let w = battery_counterexample(u, sel, battery, Conclusion::Inflation, caps, true)?;
    Ok(EssentialVerdict {
        essential: w.is_none(),
        missed_element: None,
        counterexample: w,
        battery_relative: true,
    })
}

pub fn is_weakly_essential(
    u: &Morphism,
    sel: &ExactStructure,
    battery: &Battery,
    caps: &Caps,
) -> Result<EssentialVerdict> {
    require_inflation(u, sel)?;
    let w = battery_counterexample(u, sel, battery, Conclusion::Mono, caps, true)?;
    Ok(EssentialVerdict {
        essential: w.is_none(),
        missed_element: None,
        counterexample: w,
        battery_relative: true,
    })
}

/// A proper direct summand of Y containing Img u, as its inclusion.
pub fn proper_summand_through(u: &Morphism, caps: &Caps) -> Result<Option<Morphism>> {
    let y = u.target();
    for s in enumerate_subgroups(y, Some(&image_gens(u)), caps)? {
        if s.order() as u128 == y.order() {
            continue;
        }
        let inc = s.inclusion(y);
        if extend_along(&inc, &Morphism::identity(inc.source()))?.is_some() {
            return Ok(Some(inc));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmallVerdict {
    pub small: bool,
    pub counterexample: Option<BatteryWitness>,
}

fn partial_iso(pm: &PartialMorphism, sel: &ExactStructure) -> Result<bool> {
    match sel {
        // u is an inflation here, so partial iso means f mono
        ExactStructure::Abelian => Ok(is_mono(pm.map())),
        ExactStructure::Pure => Ok(pure_partial_iso_by_systems(pm)),
        _ => Ok(check_partial(pm, sel)?.is_partial_iso),
    }
}

fn small_over_impl(
    v: &Morphism,
    u: &Morphism,
    sel: &ExactStructure,
    battery: &Battery,
    caps: &Caps,
    pushouts_only: bool,
) -> Result<SmallVerdict> {
    let w = subobject_leq(u, v)?.ok_or_else(|| Error::Precondition("U is not contained in V".into()))?;
    for z in &battery.targets {
        z.same_ring(v.target())?;
    }
    if *sel == ExactStructure::Abelian && !pushouts_only {
        let c = battery_counterexample(&w, sel, battery, Conclusion::Mono, caps, true)?;
        return Ok(SmallVerdict {
            small: c.is_none(),
            counterexample: c,
        });
    }
    let iso = |pm: &PartialMorphism| -> Result<bool> {
        if pushouts_only {
            Ok(check_partial(pm, sel)?.is_partial_iso)
        } else {
            partial_iso(pm, sel)
        }
    };
    for (t, z) in battery.targets.iter().enumerate() {
        for f in enumerate_hom(v.source(), z, caps)? {
            let restricted = PartialMorphism::new(u.clone(), f.after(&w)?)?;
            if iso(&restricted)? && !iso(&PartialMorphism::new(v.clone(), f.clone())?)? {
                return Ok(SmallVerdict {
                    small: false,
                    counterexample: Some(BatteryWitness { target: t, map: f }),
                });
            }
        }
    }
    Ok(SmallVerdict {
        small: true,
        counterexample: None,
    })
}

/// V small over U in X: restriction to U a partial iso forces f to be one.
pub fn is_small_over(
    v: &Morphism,
    u: &Morphism,
    sel: &ExactStructure,
    battery: &Battery,
    caps: &Caps,
) -> Result<SmallVerdict> {
    small_over_impl(v, u, sel, battery, caps, false)
}

/// Same decision, every partial iso decided through its pushout.
pub fn is_small_over_by_pushouts(
    v: &Morphism,
    u: &Morphism,
    sel: &ExactStructure,
    battery: &Battery,
    caps: &Caps,
) -> Result<SmallVerdict> {
    small_over_impl(v, u, sel, battery, caps, true)
}

/// Pure-small via one-equation systems: every `g: X → Z` with `g v` mono and
/// `g v(k) ∈ dZ ⇒ v(k) ∈ dX` must be a pure mono.
pub fn check_pure_small_extension(v: &Morphism, battery: &Battery, caps: &Caps) -> Result<SmallVerdict> {
    if !is_mono(v) {
        return Err(Error::NotMono("check_pure_small_extension".into()));
    }
    let x = v.target();
    let divisors = divisors_above_one(x.modulus());
    for (t, z) in battery.targets.iter().enumerate() {
        z.same_ring(x)?;
        for g in enumerate_hom(x, z, caps)? {
            let gv = g.after(v)?;
            if !is_mono(&gv) {
                continue;
            }
            let reflects = divisors.iter().all(|&d| {
                crate::partial::preimage_of_multiples(&gv, d)
                    .iter()
                    .all(|k| x.in_multiple(&v.apply(k), d))
            });
            if reflects && !is_inflation(&g, &ExactStructure::Pure)? {
                return Ok(SmallVerdict {
                    small: false,
                    counterexample: Some(BatteryWitness { target: t, map: g }),
                });
            }
        }
    }
    Ok(SmallVerdict {
        small: true,
        counterexample: None,
    })
}

/// An injective module with an embedding of M.
#[derive(Clone, Debug, PartialEq)]
pub struct Hull {
    pub module: FpModule,
    pub embedding: Morphism,
}

/// Each ℤ/d goes to ⊕_{p | d} ℤ/p^{v_p(m)}, 1 ↦ (p^{v_p(m) − v_p(d)})_p.
pub fn structural_injective_hull(m: &FpModule) -> Result<Hull> {
    let modulus = m.modulus();
    let mut pieces = Vec::new();
    let mut images = Vec::new();
    for (i, &d) in m.factors().iter().enumerate() {
        for p in (2..=d).filter(|&p| d % p == 0 && is_prime(p)) {
            let (full, part) = (prime_power(modulus, p), prime_power(d, p));
            pieces.push(FpModule::raw(modulus, vec![full]));
            images.push((i, full / part));
        }
    }
    let sum = direct_sum_many(&pieces, modulus)?;
    let e = sum.module.clone();
    let mut rows = vec![vec![0i64; e.ngens()]; m.ngens()];
    for (k, &(i, c)) in images.iter().enumerate() {
        let img = sum.injections[k].apply(&[c]);
        rows[i] = e.add(&rows[i], &img);
    }
    let u = Morphism::from_rows(m.clone(), e.clone(), rows)?;
    if !is_mono(&u) || !is_injective_closed_form(&e) || !socle_in_image(&u) {
        return Err(Error::Violation(format!(
            "structural hull of {m:?} fails its postconditions"
        )));
    }
    Ok(Hull {
        module: e,
        embedding: u,
    })
}

/// One successor step of the preenvelope loop.
#[derive(Clone, Debug, PartialEq)]
pub struct PreenvelopeStage {
    pub module: FpModule,
    /// previous stage → this stage
    pub step: Morphism,
    /// The (member index, map into the previous stage) pairs pushed out along.
    pub copies: Vec<(usize, Morphism)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PreenvelopeTrace {
    pub start: FpModule,
    pub stages: Vec<PreenvelopeStage>,
    /// M → last stage
    pub final_map: Morphism,
    pub steps_used: usize,
}

/// Step limit hit; carries what was built so far.
#[derive(Clone, Debug)]
pub struct PreenvelopeFailure {
    pub error: Error,
    pub partial: PreenvelopeTrace,
}

impl From<PreenvelopeFailure> for Error {
    fn from(f: PreenvelopeFailure) -> Error {
        f.error
    }
}

/// Pushes out along copies of the first member against which the current stage
/// is not injective, one copy per non-extending Hom generator, until none is left.
pub fn iterative_preenvelope(
    m: &FpModule,
    h: &InflationSet,
    sel: &ExactStructure,
    max_steps: usize,
) -> std::result::Result<PreenvelopeTrace, PreenvelopeFailure> {
    let fail = |error: Error, trace: PreenvelopeTrace| PreenvelopeFailure { error, partial: trace };
    let mut trace = PreenvelopeTrace {
        start: m.clone(),
        stages: Vec::new(),
        final_map: Morphism::identity(m),
        steps_used: 0,
    };
    for (i, hm) in h.members.iter().enumerate() {
        match hm.target().same_ring(m).and_then(|_| is_inflation(hm, sel)) {
            Ok(true) => {}
            Ok(false) => {
                return Err(fail(
                    Error::Precondition(format!("member {i} is not an inflation of the selected structure")),
                    trace,
                ))
            }
            Err(e) => return Err(fail(e, trace)),
        }
    }
    let mut p = m.clone();
    loop {
        let mut copies = Vec::new();
        for (i, hm) in h.members.iter().enumerate() {
            for g in hom_generators(hm.source(), &p) {
                if extend_along(hm, &g).expect("shared source").is_none() {
                    copies.push((i, g));
                }
            }
            if !copies.is_empty() {
                break;
            }
        }
        if copies.is_empty() {
            return Ok(trace);
        }
        if trace.steps_used == max_steps {
            return Err(fail(Error::MaxSteps(max_steps), trace));
        }
        let step = match pushout_copies(h, &copies, &p) {
            Ok(s) => s,
            Err(e) => return Err(fail(e, trace)),
        };
        trace.final_map = step.after(&trace.final_map).expect("composable");
        p = step.target().clone();
        trace.stages.push(PreenvelopeStage {
            module: p.clone(),
            step,
            copies,
        });
        trace.steps_used += 1;
    }
}

// Pushout of ⊕ hᵢ along the copair of the chosen maps into P; returns P → P'.
fn pushout_copies(h: &InflationSet, copies: &[(usize, Morphism)], p: &FpModule) -> Result<Morphism> {
    let modulus = p.modulus();
    let ks: Vec<FpModule> = copies.iter().map(|(i, _)| h.members[*i].source().clone()).collect();
    let hs: Vec<FpModule> = copies.iter().map(|(i, _)| h.members[*i].target().clone()).collect();
    let ksum = direct_sum_many(&ks, modulus)?;
    let hsum = direct_sum_many(&hs, modulus)?;
    let legs: Vec<Morphism> = copies
        .iter()
        .enumerate()
        .map(|(k, (i, _))| hsum.injections[k].after(&h.members[*i]))
        .collect::<Result<_>>()?;
    let big = copair(&ksum, &legs)?;
    let maps: Vec<Morphism> = copies.iter().map(|(_, g)| g.clone()).collect();
    let g = copair(&ksum, &maps)?;
    let po = pushout(&big, &g)?;
    Ok(po.i2)
}

/// Every `g: E → E` with `g u = u` is an automorphism. Such g are id + kπ for
/// π: E → coker u; a kernel vector y of prime order has y = −kπ(y), so it
/// suffices that no prime-order y lies in the span of {kπ(y)} over Hom generators k.
pub fn envelope_witness(u: &Morphism) -> Result<Option<Vec<i64>>> {
    let e = u.target();
    let (c, pi) = cokernel(u);
    let ks = hom_generators(&c, e);
    let soc = subgroup_generated(e, &socle_generators(e));
    for idx in 1..soc.module.order() as usize {
        let y = soc.inclusion.apply(&soc.module.element_at(idx));
        if !is_prime(e.element_order(&y)) {
            continue;
        }
        let py = pi.apply(&y);
        let span: Vec<Vec<i64>> = ks.iter().map(|k| k.apply(&py)).collect();
        if in_span(e, &span, &y) {
            return Ok(Some(y));
        }
    }
    Ok(None)
}

/// The envelope condition by enumerating End(E).
pub fn envelope_by_enumeration(u: &Morphism, caps: &Caps) -> Result<bool> {
    let e = u.target();
    for g in enumerate_hom(e, e, caps)? {
        if g.after(u)? == *u && !is_iso(&g) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest subgroup E' ⊆ E containing Img u with E' injective and X → E' essential.
pub fn minimize_envelope(u: &Morphism, sel: &ExactStructure, battery: &Battery, caps: &Caps) -> Result<Hull> {
    require_inflation(u, sel)?;
    let e = u.target();
    if !is_injective(e, sel)? {
        return Err(Error::Precondition(format!("{e:?} is not injective")));
    }
    for s in enumerate_subgroups(e, Some(&image_gens(u)), caps)? {
        let g = s.to_module(e);
        if !is_injective(&g.module, sel)? {
            continue;
        }
        let v = lift_along(&g.inclusion, u)?.expect("the subgroup contains the image");
        if !is_essential(&v, sel, battery, caps)?.essential {
            continue;
        }
        if envelope_witness(&v)?.is_some() {
            return Err(Error::Violation(format!(
                "minimal essential subobject of {e:?} is not an envelope"
            )));
        }
        return Ok(Hull {
            module: g.module,
            embedding: v,
        });
    }
    Err(Error::Violation(format!(
        "no injective essential subobject of {e:?} contains the image"
    )))
}

/// An isomorphism φ: E₁ → E₂ with φ v₁ = v₂, if one is found.
pub fn isomorphic_over(v1: &Morphism, v2: &Morphism, caps: &Caps) -> Result<Option<Morphism>> {
    if v1.source() != v2.source() || v1.target().order() != v2.target().order() {
        return Ok(None);
    }
    let Some(phi) = extend_along(v1, v2)? else {
        return Ok(None);
    };
    if is_iso(&phi) {
        return Ok(Some(phi));
    }
    // another extension differs by a map vanishing on Img v₁
    let (c, pi) = cokernel(v1);
    for k in enumerate_hom(&c, v2.target(), caps)? {
        let cand = phi.add(&k.after(&pi)?)?;
        if is_iso(&cand) {
            return Ok(Some(cand));
        }
    }
    Ok(None)
}

/// The five hull conditions for `u: X → Y`.
#[derive(Clone, Debug, PartialEq)]
pub struct HullReport {
    /// essential and Y injective
    pub essential_injective: bool,
    /// inflation, Y injective, Y small over Img u
    pub small_injective: bool,
    /// every battery f with f u an inflation is split mono
    pub split_condition: bool,
    /// Y injective and every endomorphism fixing u is an automorphism
    pub envelope: bool,
    /// weakly essential and Y injective
    pub weakly_essential_injective: bool,
    pub split_witness: Option<BatteryWitness>,
}

impl HullReport {
    pub fn all(&self) -> bool {
        self.essential_injective
            && self.small_injective
            && self.split_condition
            && self.envelope
            && self.weakly_essential_injective
    }
}

pub fn is_injective_hull(u: &Morphism, sel: &ExactStructure, battery: &Battery, caps: &Caps) -> Result<HullReport> {
    let y = u.target();
    let inj = is_injective(y, sel)?;
    if !is_inflation(u, sel)? {
        return Ok(HullReport {
            essential_injective: false,
            small_injective: false,
            split_condition: false,
            envelope: false,
            weakly_essential_injective: false,
            split_witness: None,
        });
    }
    let essential = is_essential(u, sel, battery, caps)?.essential;
    let id = Morphism::identity(y);
    let small = is_small_over(&id, u, sel, battery, caps)?.small;
    let split = battery_counterexample(u, sel, battery, Conclusion::SplitMono, caps, true)?;
    let envelope = envelope_witness(u)?.is_none();
    let weak = is_weakly_essential(u, sel, battery, caps)?.essential;
    Ok(HullReport {
        essential_injective: essential && inj,
        small_injective: small && inj,
        split_condition: split.is_none(),
        envelope: envelope && inj,
        weakly_essential_injective: weak && inj,
        split_witness: split,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: i64, f: &[i64]) -> FpModule {
        FpModule::new(m, f.to_vec()).unwrap()
    }

    fn mor(a: &FpModule, b: &FpModule, rows: Vec<Vec<i64>>) -> Morphism {
        Morphism::from_rows(a.clone(), b.clone(), rows).unwrap()
    }

    fn bat(m: i64, extra: &[FpModule]) -> Battery {
        Battery::default_for(m, extra).unwrap()
    }

    #[test]
    fn injectivity() {
        for (m, f, want) in [
            (4, vec![4], true),
            (4, vec![2], false),
            (12, vec![12, 12], true),
            (12, vec![3, 12], true),
            (12, vec![6], false),
            (12, vec![2], false),
        ] {
            let e = z(m, &f);
            assert_eq!(is_injective_closed_form(&e), want, "{e:?}");
            assert_eq!(is_injective_baer(&e), want, "{e:?}");
        }
    }

    #[test]
    fn essential_examples() {
        let caps = Caps::default();
        let sel = ExactStructure::Abelian;
        let u = mor(&z(4, &[2]), &z(4, &[4]), vec![vec![2]]);
        let b = bat(4, &[u.source().clone(), u.target().clone()]);
        assert!(is_essential(&u, &sel, &b, &caps).unwrap().essential);
        assert!(essential_by_all_subobjects(&u, &caps).unwrap());
        assert!(essential_by_battery(&u, &sel, &b, &caps).unwrap().is_none());

        let s = mor(&z(4, &[2]), &z(4, &[2, 2]), vec![vec![1, 0]]);
        let v = is_essential(&s, &sel, &b, &caps).unwrap();
        assert!(!v.essential);
        assert_eq!(v.missed_element, Some(vec![0, 1]));
        assert!(!essential_by_all_subobjects(&s, &caps).unwrap());
        let w = essential_by_battery(&s, &sel, &b, &caps).unwrap().unwrap();
        assert_eq!(w.map.matrix().to_rows(), vec![vec![1], vec![0]]);
    }

    #[test]
    fn small_over_examples() {
        let caps = Caps::default();
        let sel = ExactStructure::Abelian;
        let x = z(4, &[4]);
        let u = mor(&z(4, &[2]), &x, vec![vec![2]]);
        let b = bat(4, &[]);
        let id = Morphism::identity(&x);
        assert!(is_small_over(&id, &u, &sel, &b, &caps).unwrap().small);
        assert!(is_small_over_by_pushouts(&id, &u, &sel, &b, &caps).unwrap().small);
        assert!(is_small_over(&u, &u, &sel, &b, &caps).unwrap().small);

        let x2 = z(4, &[2, 2]);
        let u2 = mor(&z(4, &[2]), &x2, vec![vec![1, 0]]);
        let id2 = Morphism::identity(&x2);
        let v = is_small_over(&id2, &u2, &sel, &b, &caps).unwrap();
        assert!(!v.small);
        // the projection onto the first summand
        assert_eq!(v.counterexample.unwrap().map.matrix().to_rows(), vec![vec![1], vec![0]]);
        assert!(!is_small_over_by_pushouts(&id2, &u2, &sel, &b, &caps).unwrap().small);
        assert!(matches!(
            is_small_over(&u2, &id2, &sel, &b, &caps),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn pure_collapse_small() {
        let caps = Caps::default();
        let x2 = z(4, &[2, 2]);
        let u2 = mor(&z(4, &[2]), &x2, vec![vec![1, 0]]);
        let b = bat(4, &[x2.clone(), u2.source().clone()]);
        let sel = ExactStructure::Pure;
        assert!(!is_essential(&u2, &sel, &b, &caps).unwrap().essential);
        assert!(!is_weakly_essential(&u2, &sel, &b, &caps).unwrap().essential);
        let id = Morphism::identity(&x2);
        let a = is_small_over(&id, &u2, &sel, &b, &caps).unwrap().small;
        assert_eq!(a, is_small_over_by_pushouts(&id, &u2, &sel, &b, &caps).unwrap().small);
        assert_eq!(a, check_pure_small_extension(&u2, &b, &caps).unwrap().small);
        assert!(check_pure_small_extension(&id, &b, &caps).unwrap().small);
    }

    #[test]
    fn structural_hulls() {
        let h = structural_injective_hull(&z(4, &[2])).unwrap();
        assert_eq!(h.module.factors(), &[4]);
        assert_eq!(h.embedding.matrix().to_rows(), vec![vec![2]]);
        let h = structural_injective_hull(&z(12, &[6])).unwrap();
        assert_eq!(h.module.factors(), &[12]);
        let h = structural_injective_hull(&z(12, &[12, 12])).unwrap();
        assert!(is_iso(&h.embedding));
        let caps = Caps::default();
        let b = bat(12, &[]);
        let r = is_injective_hull(
            &structural_injective_hull(&z(12, &[2, 6])).unwrap().embedding,
            &ExactStructure::Abelian,
            &b,
            &caps,
        )
        .unwrap();
        assert!(r.all(), "{r:?}");
    }

    #[test]
    fn non_hull_report() {
        let caps = Caps::default();
        let y = z(4, &[4, 4]);
        let u = mor(&z(4, &[2]), &y, vec![vec![2, 0]]);
        let b = bat(4, &[y.clone(), u.source().clone()]);
        let r = is_injective_hull(&u, &ExactStructure::Abelian, &b, &caps).unwrap();
        assert!(!r.essential_injective && !r.split_condition && !r.small_injective && !r.envelope);
        assert!(!is_mono(&r.split_witness.unwrap().map));
        let v = mor(&z(4, &[2]), &z(4, &[2]), vec![vec![1]]);
        let r = is_injective_hull(&v, &ExactStructure::Abelian, &b, &caps).unwrap();
        assert!(!r.split_condition && !r.essential_injective);
    }

    #[test]
    fn envelope_methods_agree() {
        let caps = Caps::default();
        for (src, tgt, rows) in [
            (vec![2], vec![4, 4], vec![vec![2, 0]]),
            (vec![2], vec![4], vec![vec![2]]),
            (vec![2, 2], vec![4, 4], vec![vec![2, 0], vec![0, 2]]),
            (vec![2], vec![2, 4], vec![vec![0, 2]]),
            (vec![], vec![4], vec![]),
        ] {
            let u = mor(&z(4, &src), &z(4, &tgt), rows);
            assert_eq!(
                envelope_witness(&u).unwrap().is_none(),
                envelope_by_enumeration(&u, &caps).unwrap(),
                "{u:?}"
            );
        }
    }

    #[test]
    fn preenvelope_baer() {
        let caps = Caps::default();
        let m = z(4, &[2]);
        let t = iterative_preenvelope(&m, &InflationSet::baer(4), &ExactStructure::Abelian, 8).unwrap();
        assert!(t.steps_used >= 1);
        assert!(is_injective_closed_form(t.final_map.target()));
        assert!(is_mono(&t.final_map));
        let e = t.final_map.target().clone();
        let b = bat(4, &[m.clone(), e]);
        let min = minimize_envelope(&t.final_map, &ExactStructure::Abelian, &b, &caps).unwrap();
        let s = structural_injective_hull(&m).unwrap();
        assert!(isomorphic_over(&min.embedding, &s.embedding, &caps).unwrap().is_some());

        let done = iterative_preenvelope(&z(4, &[4]), &InflationSet::baer(4), &ExactStructure::Abelian, 8).unwrap();
        assert_eq!(done.steps_used, 0);
        assert_eq!(done.final_map, Morphism::identity(&z(4, &[4])));
        let err = iterative_preenvelope(&m, &InflationSet::baer(4), &ExactStructure::Abelian, 0).unwrap_err();
        assert_eq!(err.error, Error::MaxSteps(0));
        assert_eq!(err.partial.steps_used, 0);
    }

    #[test]
    fn minimize_wasteful() {
        let caps = Caps::default();
        let e = z(4, &[4, 4]);
        let u = mor(&z(4, &[2]), &e, vec![vec![2, 0]]);
        let b = bat(4, &[]);
        let h = minimize_envelope(&u, &ExactStructure::Abelian, &b, &caps).unwrap();
        assert_eq!(h.module.factors(), &[4]);
        let s = structural_injective_hull(&z(4, &[2])).unwrap();
        let again = minimize_envelope(&s.embedding, &ExactStructure::Abelian, &b, &caps).unwrap();
        assert_eq!(again.module, s.module);
    }

    #[test]
    fn summands() {
        let caps = Caps::default();
        let y = z(4, &[2, 4]);
        let u = mor(&z(4, &[2]), &y, vec![vec![1, 0]]);
        assert!(proper_summand_through(&u, &caps).unwrap().is_some());
        let e = mor(&z(4, &[2]), &z(4, &[4]), vec![vec![2]]);
        assert!(proper_summand_through(&e, &caps).unwrap().is_none());
    }
}
