//! Ext actions on conflations, Baer sums, and the ladder lemma check.

use crate::error::{Error, Result};
use crate::modcat::{copair, direct_sum, enumerate_hom, extend_along, is_iso, lift_along, Caps, Morphism};

use super::{pullback, pushout, Conflation};

/// Pushout of η along `g: A → X`.
pub fn ext_pushout(eta: &Conflation, g: &Morphism) -> Result<Conflation> {
    if g.source() != eta.left() {
        return Err(Error::Dimension(
            "ext_pushout: map does not start at the left end".into(),
        ));
    }
    let po = pushout(eta.i(), g)?;
    let zero = Morphism::zero(g.target(), eta.right());
    let p = po.universal(eta.p(), &zero)?;
    Conflation::new(po.i2, p)
}

/// Pullback of η along `f: X → C`.
pub fn ext_pullback(eta: &Conflation, f: &Morphism) -> Result<Conflation> {
    if f.target() != eta.right() {
        return Err(Error::Dimension(
            "ext_pullback: map does not end at the right end".into(),
        ));
    }
    let pb = pullback(eta.p(), f)?;
    let zero = Morphism::zero(eta.left(), f.source());
    let i = pb.universal(eta.i(), &zero)?;
    Conflation::new(i, pb.p2)
}

fn same_ends(a: &Conflation, b: &Conflation) -> Result<()> {
    if a.left() != b.left() || a.right() != b.right() {
        return Err(Error::Dimension("conflations have different end objects".into()));
    }
    Ok(())
}

/// Baer sum: pull back along the diagonal of C, push out along the codiagonal of A.
pub fn baer_sum(eta1: &Conflation, eta2: &Conflation) -> Result<Conflation> {
    same_ends(eta1, eta2)?;
    let a = eta1.left();
    let pb = pullback(eta1.p(), eta2.p())?;
    let aa = direct_sum(a, a)?;
    let j1 = eta1.i().after(&aa.projections[0])?;
    let j2 = eta2.i().after(&aa.projections[1])?;
    let iota = pb.universal(&j1, &j2)?;
    let id = Morphism::identity(a);
    let nabla = copair(&aa, &[id.clone(), id])?;
    let po = pushout(&iota, &nabla)?;
    let down = eta1.p().after(&pb.p1)?;
    let p = po.universal(&down, &Morphism::zero(a, eta1.right()))?;
    Conflation::new(po.i2, p)
}

/// A middle isomorphism commuting with both legs, if one exists.
pub fn conflations_equivalent(eta1: &Conflation, eta2: &Conflation, caps: &Caps) -> Result<Option<Morphism>> {
    same_ends(eta1, eta2)?;
    if eta1.middle() != eta2.middle() {
        return Ok(None);
    }
    for phi in enumerate_hom(eta1.middle(), eta2.middle(), caps)? {
        if phi.after(eta1.i())? == *eta2.i() && eta2.p().after(&phi)? == *eta1.p() && is_iso(&phi) {
            return Ok(Some(phi));
        }
    }
    Ok(None)
}

/// Morphism of conflations: `top = (i: A → B, p: B → C)`,
/// `bottom = (i': A' → B', p': B' → C')`, with φ₁: A → A', φ₂: B → B', φ₃: C → C'.
#[derive(Clone, Debug)]
pub struct Ladder {
    pub top: Conflation,
    pub bottom: Conflation,
    pub phi1: Morphism,
    pub phi2: Morphism,
    pub phi3: Morphism,
}

#[derive(Clone, Debug)]
pub struct FactorCheck {
    /// α: C → B' with p'α = φ₃.
    pub alpha: Option<Morphism>,
    /// β: B → A' with βi = φ₁.
    pub beta: Option<Morphism>,
}

impl FactorCheck {
    pub fn verdict(&self) -> bool {
        self.alpha.is_some()
    }
}

/// Decides both factorizations independently; they must agree.
pub fn factor_check(l: &Ladder) -> Result<FactorCheck> {
    let (i, p) = (l.top.i(), l.top.p());
    let (i2, p2) = (l.bottom.i(), l.bottom.p());
    if l.phi2.after(i)? != i2.after(&l.phi1)? || p2.after(&l.phi2)? != l.phi3.after(p)? {
        return Err(Error::Input("ladder does not commute".into()));
    }
    let alpha = lift_along(p2, &l.phi3)?;
    let beta = extend_along(i, &l.phi1)?;
    if alpha.is_some() != beta.is_some() {
        return Err(Error::Violation(format!(
            "ladder factorizations disagree: alpha {}, beta {}",
            alpha.is_some(),
            beta.is_some()
        )));
    }
    Ok(FactorCheck { alpha, beta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcat::conflation_of_mono;
    use crate::exactcat::tests::{mor, z};

    fn nonsplit() -> Conflation {
        let i = mor(&z(4, &[2]), &z(4, &[4]), vec![vec![2]]);
        conflation_of_mono(&i).unwrap()
    }

    #[test]
    fn baer_sum_on_ext_z2_z2() {
        let caps = Caps::default();
        let eta = nonsplit();
        let split = Conflation::split(&z(4, &[2]), &z(4, &[2])).unwrap();
        let s = baer_sum(&eta, &eta).unwrap();
        assert!(conflations_equivalent(&s, &split, &caps).unwrap().is_some());
        let t = baer_sum(&eta, &split).unwrap();
        assert!(conflations_equivalent(&t, &eta, &caps).unwrap().is_some());
        assert!(conflations_equivalent(&eta, &split, &caps).unwrap().is_none());
        assert_eq!(
            conflations_equivalent(&eta, &eta, &caps).unwrap(),
            Some(Morphism::identity(eta.middle()))
        );
        let minus = ext_pushout(&eta, &Morphism::identity(eta.left()).neg()).unwrap();
        let u = baer_sum(&eta, &minus).unwrap();
        assert!(conflations_equivalent(&u, &split, &caps).unwrap().is_some());
    }

    #[test]
    fn ext_actions() {
        let caps = Caps::default();
        let eta = nonsplit();
        let a = eta.left().clone();
        let zero = ext_pushout(&eta, &Morphism::zero(&a, &z(4, &[2]))).unwrap();
        let split = Conflation::split(&z(4, &[2]), &z(4, &[2])).unwrap();
        assert!(conflations_equivalent(&zero, &split, &caps).unwrap().is_some());
        let same = ext_pushout(&eta, &Morphism::identity(&a)).unwrap();
        assert!(conflations_equivalent(&same, &eta, &caps).unwrap().is_some());
        let g = mor(&a, &z(4, &[2, 2]), vec![vec![1, 0]]);
        let pushed = ext_pushout(&eta, &g).unwrap();
        assert_eq!(pushed.middle().order(), 8);
        assert_eq!(pushed.middle().factors(), &[2, 4]);

        let c = eta.right().clone();
        let back = ext_pullback(&eta, &Morphism::identity(&c)).unwrap();
        assert!(conflations_equivalent(&back, &eta, &caps).unwrap().is_some());
        let zb = ext_pullback(&eta, &Morphism::zero(&c, &c)).unwrap();
        assert!(conflations_equivalent(&zb, &split, &caps).unwrap().is_some());
    }

    #[test]
    fn ladders() {
        let eta = nonsplit();
        let (a, b, c) = (eta.left().clone(), eta.middle().clone(), eta.right().clone());
        let zero_ladder = Ladder {
            top: eta.clone(),
            bottom: eta.clone(),
            phi1: Morphism::zero(&a, &a),
            phi2: Morphism::zero(&b, &b),
            phi3: Morphism::zero(&c, &c),
        };
        assert!(factor_check(&zero_ladder).unwrap().verdict());
        // identity ladder: β with β i = id_A would split η, so both fail
        let id_ladder = Ladder {
            top: eta.clone(),
            bottom: eta.clone(),
            phi1: Morphism::identity(&a),
            phi2: Morphism::identity(&b),
            phi3: Morphism::identity(&c),
        };
        let r = factor_check(&id_ladder).unwrap();
        assert!(!r.verdict() && r.beta.is_none());
        let bad = Ladder {
            phi2: Morphism::zero(&b, &b),
            ..id_ladder
        };
        assert!(factor_check(&bad).is_err());
    }
}
