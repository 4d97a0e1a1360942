//! Partial morphisms and partial isomorphisms relative to an exact substructure.

use crate::error::{Error, Result};
use crate::exactcat::{
    conflation_of_mono, ext_pushout, in_substructure, is_inflation, pure_by_divisor_criterion,
    pure_certificate_of_mono, pushout, Conflation, ExactStructure, PurityCertificate,
};
use crate::hulls::is_injective_closed_form;
use crate::modcat::{
    divisors_above_one, enumerate_hom, extend_along, hom_generators, is_mono, kernel, lift_along, Caps, FpModule,
    Morphism,
};

/// A map `f: U → Y` defined on a subobject `u: U → X`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialMorphism {
    inclusion: Morphism,
    map: Morphism,
}

impl PartialMorphism {
    pub fn new(inclusion: Morphism, map: Morphism) -> Result<Self> {
        if inclusion.source() != map.source() {
            return Err(Error::Dimension("inclusion and map have different domains".into()));
        }
        inclusion.target().same_ring(map.target())?;
        if !is_mono(&inclusion) {
            return Err(Error::NotMono("partial morphism inclusion".into()));
        }
        Ok(PartialMorphism { inclusion, map })
    }

    pub(crate) fn raw(inclusion: Morphism, map: Morphism) -> Self {
        PartialMorphism { inclusion, map }
    }

    pub fn ambient(&self) -> &FpModule {
        self.inclusion.target()
    }

    pub fn domain(&self) -> &FpModule {
        self.inclusion.source()
    }

    pub fn codomain(&self) -> &FpModule {
        self.map.target()
    }

    pub fn inclusion(&self) -> &Morphism {
        &self.inclusion
    }

    pub fn map(&self) -> &Morphism {
        &self.map
    }
}

/// Failure of a one-variable system: `u(k) ∈ dX` while `f(k) ∉ dY`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SystemWitness {
    pub d: i64,
    /// `k` in the coordinates of U.
    pub k: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct PartialVerdict {
    pub is_partial: bool,
    pub is_partial_iso: bool,
    pub pushout_object: FpModule,
    /// ū: Y → P
    pub u_bar: Morphism,
    /// f̄: X → P
    pub f_bar: Morphism,
    /// Purity of ū and of f̄ (the latter only when f̄ is mono); computed for Pure.
    pub purity: Option<(PurityCertificate, Option<PurityCertificate>)>,
    /// Single-equation witness, computed for Pure.
    pub system_witness: Option<SystemWitness>,
}

const SCAN_LIMIT: u128 = 1 << 16;

/// Generators of {k ∈ U : g(k) ∈ d·T} for `g: U → T`.
pub(crate) fn preimage_of_multiples(g: &Morphism, d: i64) -> Vec<Vec<i64>> {
    use num_integer::Integer;
    let t = g.target();
    let qf: Vec<i64> = t.factors().iter().map(|&f| f.gcd(&d)).collect();
    let keep: Vec<usize> = (0..qf.len()).filter(|&j| qf[j] > 1).collect();
    let u = g.source();
    if keep.is_empty() {
        return (0..u.ngens())
            .map(|x| {
                let mut k = vec![0; u.ngens()];
                k[x] = 1;
                k
            })
            .collect();
    }
    let quot = FpModule::raw(t.modulus(), keep.iter().map(|&j| qf[j]).collect());
    let rows: Vec<Vec<i64>> = (0..u.ngens())
        .map(|r| keep.iter().map(|&j| g.row(r)[j] % qf[j]).collect())
        .collect();
    let q = Morphism::from_rows(u.clone(), quot, rows).expect("reduction is well defined");
    let (_, inc) = kernel(&q);
    (0..inc.source().ngens()).map(|r| inc.row(r).to_vec()).collect()
}

/// First `(d, k)` (d ascending, k lexicographic) with `u(k) ∈ dX` and `f(k) ∉ dY`.
pub fn system_witness(pm: &PartialMorphism) -> Option<SystemWitness> {
    let (u, f) = (&pm.inclusion, &pm.map);
    let (x, y, dom) = (u.target(), f.target(), u.source());
    let divisors = divisors_above_one(x.modulus());
    if dom.order() <= SCAN_LIMIT {
        let n = dom.order() as usize;
        let elems: Vec<(Vec<i64>, Vec<i64>, Vec<i64>)> = (1..n)
            .map(|i| {
                let k = dom.element_at(i);
                (u.apply(&k), f.apply(&k), k)
            })
            .collect();
        for &d in &divisors {
            for (uk, fk, k) in &elems {
                if x.in_multiple(uk, d) && !y.in_multiple(fk, d) {
                    return Some(SystemWitness { d, k: k.clone() });
                }
            }
        }
        return None;
    }
    for &d in &divisors {
        for k in preimage_of_multiples(u, d) {
            if !y.in_multiple(&f.apply(&k), d) {
                return Some(SystemWitness { d, k });
            }
        }
    }
    None
}

/// Pure partial iso through one-equation systems: `f` mono and, for every d,
/// `f(k) ∈ dY ⇒ u(k) ∈ dX` on generators of the left side.
pub fn pure_partial_iso_by_systems(pm: &PartialMorphism) -> bool {
    let (u, f) = (&pm.inclusion, &pm.map);
    if !is_mono(f) || system_witness(pm).is_some() {
        return false;
    }
    let x = u.target();
    divisors_above_one(x.modulus()).into_iter().all(|d| {
        preimage_of_multiples(f, d)
            .iter()
            .all(|k| x.in_multiple(&u.apply(k), d))
    })
}

/// Decides partiality through the pushout of `f` along `u`.
pub fn check_partial(pm: &PartialMorphism, sel: &ExactStructure) -> Result<PartialVerdict> {
    let (u, f) = (&pm.inclusion, &pm.map);
    let po = pushout(u, f)?;
    let (u_bar, f_bar) = (po.i2, po.i1);
    let f_bar_mono = is_mono(&f_bar);
    let (is_partial, is_partial_iso, purity, witness) = match sel {
        ExactStructure::Pure => {
            // ū is mono by construction
            let cu = pure_certificate_of_mono(&u_bar)?;
            let cf = if f_bar_mono {
                Some(pure_certificate_of_mono(&f_bar)?)
            } else {
                None
            };
            let partial = cu.pure;
            let iso = partial && cf.as_ref().is_some_and(|c| c.pure);
            let w = system_witness(pm);
            if w.is_none() != partial {
                return Err(Error::Violation(format!(
                    "pushout verdict {partial} disagrees with the one-equation systems for {pm:?}"
                )));
            }
            (partial, iso, Some((cu, cf)), w)
        }
        _ => {
            let partial = in_substructure(&conflation_of_mono(&u_bar)?, sel)?;
            let iso = partial && f_bar_mono && in_substructure(&conflation_of_mono(&f_bar)?, sel)?;
            (partial, iso, None, None)
        }
    };
    Ok(PartialVerdict {
        is_partial,
        is_partial_iso,
        pushout_object: po.object,
        u_bar,
        f_bar,
        purity,
        system_witness: witness,
    })
}

/// Only the partiality half of [`check_partial`], without certificates.
pub fn is_partial(pm: &PartialMorphism, sel: &ExactStructure) -> Result<bool> {
    let u_bar = pushout(&pm.inclusion, &pm.map)?.i2;
    match sel {
        ExactStructure::Pure => Ok(pure_by_divisor_criterion(&u_bar)),
        _ => in_substructure(&conflation_of_mono(&u_bar)?, sel),
    }
}

/// `g: X → Y` with `g ∘ u = f`, if any.
pub fn find_extension(pm: &PartialMorphism) -> Option<Morphism> {
    extend_along(&pm.inclusion, &pm.map).expect("shared domain checked at construction")
}

/// Whether the selector's injectivity of `x` is known exactly.
fn known_injective(x: &FpModule, sel: &ExactStructure) -> Option<bool> {
    match sel {
        ExactStructure::Pure => Some(true),
        ExactStructure::Abelian => Some(is_injective_closed_form(x)),
        _ => None,
    }
}

/// Searches `h: Y → X` with `h ∘ f = u` and checks it against the iso verdict.
pub fn check_partial_iso_via_retraction(pm: &PartialMorphism, sel: &ExactStructure) -> Result<bool> {
    let v = check_partial(pm, sel)?;
    if !v.is_partial {
        return Err(Error::Precondition("the partial morphism is not partial".into()));
    }
    let h = extend_along(&pm.map, &pm.inclusion)?;
    if h.is_some() && !v.is_partial_iso {
        return Err(Error::Violation(format!(
            "retraction exists but {pm:?} is not a partial iso"
        )));
    }
    if v.is_partial_iso && h.is_none() && known_injective(pm.ambient(), sel) == Some(true) {
        return Err(Error::Violation(format!(
            "injective ambient but no retraction for the partial iso {pm:?}"
        )));
    }
    Ok(v.is_partial_iso)
}

/// Verdict for `(u, f + g)`.
pub fn check_sum_closure(pm1: &PartialMorphism, pm2: &PartialMorphism, sel: &ExactStructure) -> Result<PartialVerdict> {
    if pm1.inclusion != pm2.inclusion || pm1.codomain() != pm2.codomain() {
        return Err(Error::Dimension(
            "sum of partial morphisms with different domains".into(),
        ));
    }
    let s = pm1.map.add(&pm2.map)?;
    check_partial(&PartialMorphism::raw(pm1.inclusion.clone(), s), sel)
}

/// Verdict for `(u, g ∘ f)`.
pub fn compose_partial(pm: &PartialMorphism, g: &Morphism, sel: &ExactStructure) -> Result<PartialVerdict> {
    let gf = g.after(&pm.map)?;
    check_partial(&PartialMorphism::raw(pm.inclusion.clone(), gf), sel)
}

/// Verdict for `(v ∘ u, f)`; `v` must be an inflation of the selected structure.
pub fn enlarge_ambient(pm: &PartialMorphism, v: &Morphism, sel: &ExactStructure) -> Result<PartialVerdict> {
    if v.source() != pm.ambient() {
        return Err(Error::Dimension(
            "enlarge_ambient: v does not start at the ambient".into(),
        ));
    }
    if !is_inflation(v, sel)? {
        return Err(Error::Precondition(
            "v is not an inflation of the selected structure".into(),
        ));
    }
    let vu = v.after(&pm.inclusion)?;
    check_partial(&PartialMorphism::raw(vu, pm.map.clone()), sel)
}

/// `check_partial` expressed through the Ext action: push η = (u, coker u) along f.
pub fn partial_via_ext(pm: &PartialMorphism, sel: &ExactStructure) -> Result<bool> {
    let eta: Conflation = conflation_of_mono(&pm.inclusion)?;
    in_substructure(&ext_pushout(&eta, &pm.map)?, sel)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CophantomVerdict {
    pub cophantom: bool,
    /// Index of the first battery embedding along which `f` is not partial.
    pub failing: Option<usize>,
}

/// `f: B → Y` is partial along every battery mono out of B.
pub fn is_cophantom(f: &Morphism, sel: &ExactStructure, battery: &[Morphism]) -> Result<CophantomVerdict> {
    for (idx, u) in battery.iter().enumerate() {
        if u.source() != f.source() {
            return Err(Error::Dimension(format!(
                "battery member {idx} does not start at the source of f"
            )));
        }
        let pm = PartialMorphism::new(u.clone(), f.clone())?;
        if !check_partial(&pm, sel)?.is_partial {
            return Ok(CophantomVerdict {
                cophantom: false,
                failing: Some(idx),
            });
        }
    }
    Ok(CophantomVerdict {
        cophantom: true,
        failing: None,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct InjectivityVerdict {
    pub injective: bool,
    /// First battery member and map into E that does not extend.
    pub witness: Option<(usize, Morphism)>,
    /// Closed form over ℤ/m (Abelian only).
    pub closed_form: Option<bool>,
}

/// Extension of every map K → E along every battery inflation K → A.
pub fn is_f_injective(e: &FpModule, sel: &ExactStructure, battery: &[Morphism]) -> Result<InjectivityVerdict> {
    for (idx, u) in battery.iter().enumerate() {
        u.target().same_ring(e)?;
        if !is_inflation(u, sel)? {
            return Err(Error::Precondition(format!(
                "battery member {idx} is not an inflation of the selected structure"
            )));
        }
    }
    let mut witness = None;
    'outer: for (idx, u) in battery.iter().enumerate() {
        // maps that extend form a subgroup, so generators decide
        for g in hom_generators(u.source(), e) {
            if extend_along(u, &g)?.is_none() {
                witness = Some((idx, g));
                break 'outer;
            }
        }
    }
    let injective = witness.is_none();
    let closed_form = match sel {
        ExactStructure::Abelian => {
            let cf = is_injective_closed_form(e);
            let baer = crate::hulls::is_injective_baer(e);
            if cf != baer {
                return Err(Error::Violation(format!("closed form and Baer test disagree on {e:?}")));
            }
            if cf && !injective {
                return Err(Error::Violation(format!(
                    "{e:?} is injective but a battery map does not extend"
                )));
            }
            Some(cf)
        }
        _ => None,
    };
    Ok(InjectivityVerdict {
        injective,
        witness,
        closed_form,
    })
}

/// Condition: every `g: Y → Z` (Z in the class) has `h: X → Z` with `h u = g f`.
pub fn check_e_upper_characterization(pm: &PartialMorphism, class: &[FpModule], caps: &Caps) -> Result<bool> {
    for z in class {
        for g in enumerate_hom(pm.codomain(), z, caps)? {
            let gf = g.after(&pm.map)?;
            if extend_along(&pm.inclusion, &gf)?.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Condition: for every square `u φ₁ = φ₂ i` with `i: M → N`, coker i in the class,
/// there is `g: N → Y` with `g i = f φ₁`. Squares are drawn from the free
/// presentation K ↪ (ℤ/m)ⁿ ↠ X of each class member, with φ₂ ranging over Hom((ℤ/m)ⁿ, ambient).
pub fn check_e_lower_characterization(pm: &PartialMorphism, class: &[FpModule], caps: &Caps) -> Result<bool> {
    for x in class {
        let (i, _) = free_presentation(x);
        for phi2 in enumerate_hom(i.target(), pm.ambient(), caps)? {
            let Some(phi1) = lift_along(&pm.inclusion, &phi2.after(&i)?)? else {
                continue;
            };
            if extend_along(&i, &pm.map.after(&phi1)?)?.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// K ↪ (ℤ/m)ⁿ ↠ X for n the number of generators of X.
pub fn free_presentation(x: &FpModule) -> (Morphism, Morphism) {
    let f = FpModule::free(x.modulus(), x.ngens());
    let mut q = crate::linalg::Matrix::<i64>::identity(x.ngens());
    for j in 0..x.ngens() {
        q.set(j, j, 1);
    }
    let p = Morphism::raw(f.clone(), x.clone(), q);
    let (_, k) = kernel(&p);
    (k, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcat::cyclics;

    fn z(m: i64, f: &[i64]) -> FpModule {
        FpModule::new(m, f.to_vec()).unwrap()
    }

    fn mor(a: &FpModule, b: &FpModule, rows: Vec<Vec<i64>>) -> Morphism {
        Morphism::from_rows(a.clone(), b.clone(), rows).unwrap()
    }

    fn running() -> PartialMorphism {
        let u = mor(&z(4, &[2]), &z(4, &[4]), vec![vec![2]]);
        PartialMorphism::new(u, Morphism::identity(&z(4, &[2]))).unwrap()
    }

    #[test]
    fn running_example() {
        let pm = running();
        let v = check_partial(&pm, &ExactStructure::Pure).unwrap();
        assert!(!v.is_partial && !v.is_partial_iso);
        assert_eq!(v.system_witness, Some(SystemWitness { d: 2, k: vec![1] }));
        assert_eq!(v.pushout_object.factors(), &[4]);
        assert!(find_extension(&pm).is_none());
        // along the inclusion itself it is partial, with extension id
        let pm2 = PartialMorphism::new(pm.inclusion().clone(), pm.inclusion().clone()).unwrap();
        assert!(check_partial(&pm2, &ExactStructure::Pure).unwrap().is_partial);
        assert_eq!(find_extension(&pm2), Some(Morphism::identity(&z(4, &[4]))));
        let zero = PartialMorphism::new(pm.inclusion().clone(), Morphism::zero(&z(4, &[2]), &z(4, &[2]))).unwrap();
        assert_eq!(find_extension(&zero), Some(Morphism::zero(&z(4, &[4]), &z(4, &[2]))));
        assert!(check_partial(&pm, &ExactStructure::Abelian).unwrap().is_partial_iso);
    }

    #[test]
    fn split_domain_is_always_partial() {
        let x = z(12, &[2, 6]);
        let u = mor(&z(12, &[2]), &x, vec![vec![1, 0]]);
        for f in enumerate_hom(&z(12, &[2]), &z(12, &[4]), &Caps::default()).unwrap() {
            let pm = PartialMorphism::new(u.clone(), f).unwrap();
            assert!(check_partial(&pm, &ExactStructure::Pure).unwrap().is_partial);
        }
    }

    #[test]
    fn cophantom_and_injectivity() {
        let pm = running();
        let sel = ExactStructure::Pure;
        let f = pm.map().clone();
        let zero = Morphism::zero(f.source(), f.target());
        assert!(is_cophantom(&zero, &sel, &[pm.inclusion().clone()]).unwrap().cophantom);
        let v = is_cophantom(&f, &sel, &[pm.inclusion().clone()]).unwrap();
        assert_eq!(
            v,
            CophantomVerdict {
                cophantom: false,
                failing: Some(0)
            }
        );

        let baer = vec![pm.inclusion().clone()];
        let e4 = is_f_injective(&z(4, &[4]), &ExactStructure::Abelian, &baer).unwrap();
        assert!(e4.injective && e4.closed_form == Some(true));
        let e2 = is_f_injective(&z(4, &[2]), &ExactStructure::Abelian, &baer).unwrap();
        assert!(!e2.injective);
        assert_eq!(e2.witness.unwrap().1.row(0), &[1]);
        // the non-pure inclusion is not an admissible battery member for Pure
        assert!(is_f_injective(&z(4, &[2]), &sel, &baer).is_err());
    }

    #[test]
    fn characterizations() {
        let caps = Caps::default();
        let pm = running();
        assert!(check_e_upper_characterization(&pm, &[], &caps).unwrap());
        assert!(!check_e_upper_characterization(&pm, &[z(4, &[2])], &caps).unwrap());
        assert!(
            !check_partial(&pm, &ExactStructure::HomInto(vec![z(4, &[2])]))
                .unwrap()
                .is_partial
        );
        assert!(check_e_lower_characterization(&pm, &[], &caps).unwrap());
        assert!(!check_e_lower_characterization(&pm, &cyclics(4), &caps).unwrap());
    }

    #[test]
    fn retraction_check() {
        let pm = running();
        let pm2 = PartialMorphism::new(pm.inclusion().clone(), pm.inclusion().clone()).unwrap();
        assert!(check_partial_iso_via_retraction(&pm2, &ExactStructure::Pure).unwrap());
        assert!(matches!(
            check_partial_iso_via_retraction(&pm, &ExactStructure::Pure),
            Err(Error::Precondition(_))
        ));
    }
}
