//! Conflations, exact substructures, purity, and the Ext actions.

mod ext;
mod purity;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::modcat::{
    self, cokernel, divisors_above_one, is_epi, is_mono, kernel, lift_along, pair, quotient_of_generators, FpModule,
    Morphism, Quotient,
};

pub use ext::{baer_sum, conflations_equivalent, ext_pullback, ext_pushout, factor_check, FactorCheck, Ladder};
pub(crate) use purity::pure_certificate_of_mono;
pub use purity::{
    is_pure_mono, pure_by_divisor_criterion, pure_by_hom_exactness, purity_witness, verify_purity_witness,
    PurityCertificate, PurityWitness,
};

/// A kernel-cokernel pair A → B → C.
#[derive(Clone, Debug, PartialEq)]
pub struct Conflation {
    i: Morphism,
    p: Morphism,
}

impl Conflation {
    /// Validates that `i` is a kernel of `p` and `p` a cokernel of `i`.
    pub fn new(i: Morphism, p: Morphism) -> Result<Self> {
        if i.target() != p.source() {
            return Err(Error::Dimension("conflation legs do not compose".into()));
        }
        if !is_mono(&i) {
            return Err(Error::NotMono("conflation inflation".into()));
        }
        if !is_epi(&p) {
            return Err(Error::Input("conflation deflation is not epi".into()));
        }
        if !p.after(&i)?.is_zero() {
            return Err(Error::Input("conflation legs compose to a nonzero map".into()));
        }
        if i.source().order().saturating_mul(p.target().order()) != i.target().order() {
            return Err(Error::Input("conflation is not exact in the middle".into()));
        }
        Ok(Conflation { i, p })
    }

    pub(crate) fn raw(i: Morphism, p: Morphism) -> Self {
        debug_assert!(Conflation::new(i.clone(), p.clone()).is_ok());
        Conflation { i, p }
    }

    /// A → A ⊕ C → C.
    pub fn split(a: &FpModule, c: &FpModule) -> Result<Self> {
        let s = modcat::direct_sum(a, c)?;
        Ok(Conflation::raw(s.injections[0].clone(), s.projections[1].clone()))
    }

    pub fn i(&self) -> &Morphism {
        &self.i
    }

    pub fn p(&self) -> &Morphism {
        &self.p
    }

    pub fn left(&self) -> &FpModule {
        self.i.source()
    }

    pub fn middle(&self) -> &FpModule {
        self.i.target()
    }

    pub fn right(&self) -> &FpModule {
        self.p.target()
    }
}

/// The exact substructure in force.
#[derive(Clone, Debug, PartialEq)]
pub enum ExactStructure {
    Abelian,
    Pure,
    /// Conflations on which Hom(−, X) is exact for every X in the class.
    HomInto(Vec<FpModule>),
    /// Conflations on which Hom(X, −) is exact for every X in the class.
    HomFrom(Vec<FpModule>),
}

impl ExactStructure {
    pub fn name(&self) -> &'static str {
        match self {
            ExactStructure::Abelian => "abelian",
            ExactStructure::Pure => "pure",
            ExactStructure::HomInto(_) => "hom-into",
            ExactStructure::HomFrom(_) => "hom-from",
        }
    }

    pub fn class(&self) -> &[FpModule] {
        match self {
            ExactStructure::HomInto(c) | ExactStructure::HomFrom(c) => c,
            _ => &[],
        }
    }
}

/// All cyclic modules ℤ/d, d | m, d ≥ 2.
pub fn cyclics(modulus: i64) -> Vec<FpModule> {
    divisors_above_one(modulus)
        .into_iter()
        .map(|d| FpModule::raw(modulus, vec![d]))
        .collect()
}

/// (i, cokernel i).
pub fn conflation_of_mono(i: &Morphism) -> Result<Conflation> {
    if !is_mono(i) {
        return Err(Error::NotMono("conflation_of_mono".into()));
    }
    let (_, p) = cokernel(i);
    Ok(Conflation::raw(i.clone(), p))
}

/// Every map X → C (X in the class) lifts along p; checked on Hom generators.
pub(crate) fn hom_from_exact(eta: &Conflation, class: &[FpModule]) -> bool {
    let mut bounds: Vec<i64> = class.iter().flat_map(|x| x.factors().iter().copied()).collect();
    bounds.sort_unstable();
    bounds.dedup();
    lifts_for_bounds(eta, &bounds)
}

fn lifts_for_bounds(eta: &Conflation, bounds: &[i64]) -> bool {
    use num_integer::Integer;
    let c = eta.right().factors();
    for &beta in bounds {
        let mut lifter = None;
        for (j, &cj) in c.iter().enumerate() {
            let g = beta.gcd(&cj);
            if g == 1 {
                continue;
            }
            let mut z = vec![0i64; c.len()];
            z[j] = cj / g;
            let l = lifter.get_or_insert_with(|| modcat::Lifter::new(eta.p(), beta, false));
            if !l.liftable(&z) {
                return false;
            }
        }
    }
    true
}

/// Every map A → X (X in the class) extends along i; checked on Hom generators.
pub(crate) fn hom_into_exact(eta: &Conflation, class: &[FpModule]) -> bool {
    use num_integer::Integer;
    let a = eta.left().factors();
    let mut ext = modcat::Extender::new(eta.i(), false);
    let mut targets: Vec<i64> = class.iter().flat_map(|x| x.factors().iter().copied()).collect();
    targets.sort_unstable();
    targets.dedup();
    for &xj in &targets {
        for (k, &ak) in a.iter().enumerate() {
            let g = ak.gcd(&xj);
            if g == 1 {
                continue;
            }
            let mut col = vec![0i64; a.len()];
            col[k] = xj / g;
            if !ext.column_extends(xj, &col) {
                return false;
            }
        }
    }
    true
}

/// Membership of a conflation in the selected substructure.
pub fn in_substructure(eta: &Conflation, sel: &ExactStructure) -> Result<bool> {
    for x in sel.class() {
        eta.middle().same_ring(x)?;
    }
    Ok(match sel {
        ExactStructure::Abelian => true,
        ExactStructure::Pure => pure_by_hom_exactness(eta),
        ExactStructure::HomFrom(class) => hom_from_exact(eta, class),
        ExactStructure::HomInto(class) => hom_into_exact(eta, class),
    })
}

/// Is `i` an inflation of the selected structure?
pub fn is_inflation(i: &Morphism, sel: &ExactStructure) -> Result<bool> {
    if !is_mono(i) {
        return Ok(false);
    }
    in_substructure(&conflation_of_mono(i)?, sel)
}

/// Pushout of `f: K → M` and `g: K → N`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub object: FpModule,
    /// M → P
    pub i1: Morphism,
    /// N → P
    pub i2: Morphism,
    f: Morphism,
    g: Morphism,
    quotient: Quotient,
}

impl Pushout {
    /// The induced map P → Q from `j1: M → Q`, `j2: N → Q` with `j1 f = j2 g`.
    pub fn universal(&self, j1: &Morphism, j2: &Morphism) -> Result<Morphism> {
        if j1.source() != self.f.target() || j2.source() != self.g.target() || j1.target() != j2.target() {
            return Err(Error::Dimension("pushout cocone has the wrong shape".into()));
        }
        if j1.after(&self.f)? != j2.after(&self.g)? {
            return Err(Error::Input("cocone does not commute".into()));
        }
        let mut images: Vec<Vec<i64>> = (0..j2.source().ngens()).map(|r| j2.row(r).to_vec()).collect();
        images.extend((0..j1.source().ngens()).map(|r| j1.row(r).to_vec()));
        Ok(self.quotient.descend(j1.target(), &images))
    }
}

pub fn pushout(f: &Morphism, g: &Morphism) -> Result<Pushout> {
    if f.source() != g.source() {
        return Err(Error::Dimension("pushout of maps with different sources".into()));
    }
    let (m, n) = (f.target(), g.target());
    m.same_ring(n)?;
    let (nn, nm) = (n.ngens(), m.ngens());
    let k = f.source().ngens();
    let mut rel = Matrix::<i64>::zeros(k, nn + nm);
    for r in 0..k {
        for c in 0..nn {
            rel.set(r, c, *g.matrix().get(r, c));
        }
        for c in 0..nm {
            let v = *f.matrix().get(r, c);
            rel.set(r, nn + c, (m.factors()[c] - v) % m.factors()[c]);
        }
    }
    let mut orders = n.factors().to_vec();
    orders.extend_from_slice(m.factors());
    let q = quotient_of_generators(m.modulus(), &orders, &rel);
    let object = q.module.clone();
    let i2 = Morphism::raw(
        n.clone(),
        object.clone(),
        Matrix::from_rows(
            (0..nn).map(|j| q.to_canonical.row(j).to_vec()).collect(),
            object.ngens(),
        )?,
    );
    let i1 = Morphism::raw(
        m.clone(),
        object.clone(),
        Matrix::from_rows(
            (nn..nn + nm).map(|j| q.to_canonical.row(j).to_vec()).collect(),
            object.ngens(),
        )?,
    );
    Ok(Pushout {
        object,
        i1,
        i2,
        f: f.clone(),
        g: g.clone(),
        quotient: q,
    })
}

/// Pullback of `f: M → C` and `g: N → C`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub object: FpModule,
    /// Q → M
    pub p1: Morphism,
    /// Q → N
    pub p2: Morphism,
    sum: modcat::DirectSum,
    mono: Morphism,
}

impl Pullback {
    /// The induced map T → Q from `j1: T → M`, `j2: T → N` with `f j1 = g j2`.
    pub fn universal(&self, j1: &Morphism, j2: &Morphism) -> Result<Morphism> {
        let t = pair(&self.sum, &[j1.clone(), j2.clone()])?;
        lift_along(&self.mono, &t)?.ok_or_else(|| Error::Input("cone does not commute".into()))
    }
}

pub fn pullback(f: &Morphism, g: &Morphism) -> Result<Pullback> {
    if f.target() != g.target() {
        return Err(Error::Dimension("pullback of maps with different targets".into()));
    }
    let sum = modcat::direct_sum(f.source(), g.source())?;
    let h = f.after(&sum.projections[0])?.sub(&g.after(&sum.projections[1])?)?;
    let (q, k) = kernel(&h);
    let p1 = sum.projections[0].after(&k)?;
    let p2 = sum.projections[1].after(&k)?;
    Ok(Pullback {
        object: q,
        p1,
        p2,
        sum,
        mono: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modcat::{enumerate_elements, is_iso, Caps};

    pub(crate) fn z(m: i64, f: &[i64]) -> FpModule {
        FpModule::new(m, f.to_vec()).unwrap()
    }

    pub(crate) fn mor(a: &FpModule, b: &FpModule, rows: Vec<Vec<i64>>) -> Morphism {
        Morphism::from_rows(a.clone(), b.clone(), rows).unwrap()
    }

    #[test]
    fn conflation_validation() {
        let a = z(4, &[2]);
        let b = z(4, &[4]);
        let i = mor(&a, &b, vec![vec![2]]);
        let p = mor(&b, &a, vec![vec![1]]);
        assert!(Conflation::new(i.clone(), p.clone()).is_ok());
        assert!(Conflation::new(i.clone(), Morphism::zero(&b, &a)).is_err());
        let eta = conflation_of_mono(&i).unwrap();
        assert_eq!(eta.right().factors(), &[2]);
        assert!(conflation_of_mono(&Morphism::identity(&b)).unwrap().right().is_zero());
        let zero_in = Morphism::zero(&FpModule::zero(4), &b);
        assert_eq!(conflation_of_mono(&zero_in).unwrap().right(), &b);
    }

    #[test]
    fn pushout_examples() {
        let k = z(4, &[2]);
        let x = z(4, &[4]);
        let u = mor(&k, &x, vec![vec![2]]);
        let po = pushout(&u, &Morphism::identity(&k)).unwrap();
        assert_eq!(po.object.factors(), &[4]);
        assert_eq!(po.i1.after(&u).unwrap(), po.i2.after(&Morphism::identity(&k)).unwrap());
        // along zero: the cokernel
        let po = pushout(&u, &Morphism::zero(&k, &FpModule::zero(4))).unwrap();
        assert_eq!(po.object.factors(), &[2]);
        // along identity
        let g = mor(&k, &z(4, &[2, 4]), vec![vec![1, 2]]);
        let po = pushout(&Morphism::identity(&k), &g).unwrap();
        assert_eq!(&po.object, g.target());
        assert!(is_iso(&po.i2));
    }

    #[test]
    fn pushout_universal_property() {
        let caps = Caps::default();
        let k = z(4, &[2]);
        let x = z(4, &[2, 4]);
        let u = mor(&k, &x, vec![vec![0, 2]]);
        let f = mor(&k, &z(4, &[2]), vec![vec![1]]);
        let po = pushout(&u, &f).unwrap();
        for q in [z(4, &[4]), z(4, &[2, 4])] {
            for j1 in crate::modcat::enumerate_hom(&x, &q, &caps).unwrap() {
                for j2 in crate::modcat::enumerate_hom(f.target(), &q, &caps).unwrap() {
                    if j1.after(&u).unwrap() != j2.after(&f).unwrap() {
                        continue;
                    }
                    let h = po.universal(&j1, &j2).unwrap();
                    assert_eq!(h.after(&po.i1).unwrap(), j1);
                    assert_eq!(h.after(&po.i2).unwrap(), j2);
                    // uniqueness: no other map does it
                    let others = crate::modcat::enumerate_hom(&po.object, &q, &caps)
                        .unwrap()
                        .filter(|h2| h2.after(&po.i1).unwrap() == j1 && h2.after(&po.i2).unwrap() == j2)
                        .count();
                    assert_eq!(others, 1);
                }
            }
        }
    }

    #[test]
    fn pullback_examples() {
        let x = z(4, &[4]);
        let two = mor(&x, &x, vec![vec![2]]);
        let inc = mor(&z(4, &[2]), &x, vec![vec![2]]);
        let pb = pullback(&two, &inc).unwrap();
        // pairs (a, b) with 2a = 2b in Z/4, b ∈ Z/2: order 4·2/2·... count by enumeration
        let caps = Caps::default();
        let mut count = 0;
        for a in enumerate_elements(&x, &caps).unwrap() {
            for b in enumerate_elements(inc.source(), &caps).unwrap() {
                if two.apply(&a.coords) == inc.apply(&b.coords) {
                    count += 1;
                }
            }
        }
        assert_eq!(pb.object.order(), count);
        assert_eq!(pb.object.factors(), &[4]);
        assert_eq!(two.after(&pb.p1).unwrap(), inc.after(&pb.p2).unwrap());
        let pb = pullback(
            &Morphism::zero(&x, &FpModule::zero(4)),
            &Morphism::zero(&x, &FpModule::zero(4)),
        )
        .unwrap();
        assert_eq!(pb.object.factors(), &[4, 4]);
        let pb = pullback(&Morphism::identity(&x), &two).unwrap();
        assert_eq!(pb.object, x);
    }

    #[test]
    fn substructure_examples() {
        let a = z(4, &[2]);
        let b = z(4, &[4]);
        let eta = conflation_of_mono(&mor(&a, &b, vec![vec![2]])).unwrap();
        assert!(in_substructure(&eta, &ExactStructure::Abelian).unwrap());
        assert!(!in_substructure(&eta, &ExactStructure::Pure).unwrap());
        assert!(in_substructure(&eta, &ExactStructure::HomInto(vec![b.clone()])).unwrap());
        assert!(!in_substructure(&eta, &ExactStructure::HomInto(vec![a.clone()])).unwrap());
        assert!(!in_substructure(&eta, &ExactStructure::HomFrom(cyclics(4))).unwrap());
        let split = Conflation::split(&a, &a).unwrap();
        for sel in [
            ExactStructure::Abelian,
            ExactStructure::Pure,
            ExactStructure::HomInto(vec![a.clone(), b.clone()]),
            ExactStructure::HomFrom(vec![a.clone(), b.clone()]),
        ] {
            assert!(in_substructure(&split, &sel).unwrap());
        }
    }
}
