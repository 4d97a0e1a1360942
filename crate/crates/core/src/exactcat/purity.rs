//! Purity of monomorphisms, decided three ways.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modcat::{divisors_above_one, is_mono, lift_element, Morphism};

use super::{conflation_of_mono, lifts_for_bounds, Conflation};

/// A one-variable equation `x·d = k` with a solution in the ambient module but
/// none in the subobject.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PurityWitness {
    pub d: i64,
    /// `k` in the subobject's coordinates.
    pub k: Vec<i64>,
    /// `k` in the ambient module's coordinates.
    pub image: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PurityCertificate {
    pub pure: bool,
    pub witness: Option<PurityWitness>,
}

/// Hom(ℤ/d, −)-exactness of the conflation for every d | m.
pub fn pure_by_hom_exactness(eta: &Conflation) -> bool {
    lifts_for_bounds(eta, &divisors_above_one(eta.middle().modulus()))
}

/// d·B ∩ Img i = d·Img i for every d | m, compared as element sets.
pub fn pure_by_divisor_criterion(i: &Morphism) -> bool {
    let (a, b) = (i.source(), i.target());
    let n = a.order() as usize;
    let image: Vec<Vec<i64>> = (0..n).map(|x| i.apply(&a.element_at(x))).collect();
    for d in divisors_above_one(b.modulus()) {
        let mut lhs: Vec<usize> = image
            .iter()
            .filter(|y| b.in_multiple(y, d))
            .map(|y| b.index_of(y))
            .collect();
        let mut rhs: Vec<usize> = image.iter().map(|y| b.index_of(&b.scale(d, y))).collect();
        lhs.sort_unstable();
        lhs.dedup();
        rhs.sort_unstable();
        rhs.dedup();
        if lhs != rhs {
            return false;
        }
    }
    true
}

const WITNESS_SCAN_LIMIT: u128 = 1 << 16;

/// First `(d, k)` in (d ascending, k lexicographic) order with `i(k) ∈ dB`, `k ∉ dA`.
pub fn purity_witness(i: &Morphism) -> Option<PurityWitness> {
    let (a, b) = (i.source(), i.target());
    let divisors = divisors_above_one(b.modulus());
    if a.order() <= WITNESS_SCAN_LIMIT {
        let n = a.order() as usize;
        for &d in &divisors {
            for x in 1..n {
                let k = a.element_at(x);
                let y = i.apply(&k);
                if b.in_multiple(&y, d) && !a.in_multiple(&k, d) {
                    return Some(PurityWitness { d, k, image: y });
                }
            }
        }
        return None;
    }
    // large domains: test generators of {k : i(k) ∈ dB} against dA
    for &d in &divisors {
        let qf: Vec<i64> = b.factors().iter().map(|&f| f.gcd(&d)).collect();
        let keep: Vec<usize> = (0..qf.len()).filter(|&j| qf[j] > 1).collect();
        if keep.is_empty() {
            // dB = B: every k qualifies, so look for a generator outside dA
            for x in 0..a.ngens() {
                let mut k = vec![0; a.ngens()];
                k[x] = 1;
                if !a.in_multiple(&k, d) {
                    return Some(PurityWitness {
                        d,
                        image: i.apply(&k),
                        k,
                    });
                }
            }
            continue;
        }
        let target = crate::modcat::FpModule::raw(b.modulus(), keep.iter().map(|&j| qf[j]).collect());
        let rows: Vec<Vec<i64>> = (0..a.ngens())
            .map(|r| keep.iter().map(|&j| i.row(r)[j] % qf[j]).collect())
            .collect();
        let q = Morphism::from_rows(a.clone(), target, rows).expect("reduction is well defined");
        let (_, inc) = crate::modcat::kernel(&q);
        for r in 0..inc.source().ngens() {
            let k = inc.row(r).to_vec();
            if !a.in_multiple(&k, d) {
                return Some(PurityWitness {
                    d,
                    image: i.apply(&k),
                    k,
                });
            }
        }
    }
    None
}

/// Re-checks a witness through the linear solver: `x·d = image` must solve in the
/// ambient module and `x·d = k` must not solve in the subobject.
pub fn verify_purity_witness(i: &Morphism, w: &PurityWitness) -> bool {
    let (a, b) = (i.source(), i.target());
    if !a.is_valid_element(&w.k) || i.apply(&w.k) != w.image {
        return false;
    }
    let m = b.modulus();
    let in_b = lift_element(&Morphism::scalar(b, w.d), &w.image, m).is_some();
    let in_a = lift_element(&Morphism::scalar(a, w.d), &w.k, m).is_some();
    in_b && !in_a
}

fn pure_mono_unchecked(i: &Morphism, eta: &Conflation) -> Result<PurityCertificate> {
    let pure = pure_by_hom_exactness(eta);
    let witness = if !pure || cfg!(debug_assertions) {
        purity_witness(i)
    } else {
        None
    };
    if cfg!(debug_assertions) {
        if witness.is_some() == pure {
            return Err(Error::Violation(format!(
                "purity: hom-exactness says {pure}, witness search disagrees for {i:?}"
            )));
        }
        if i.source().order() <= 4096 && pure_by_divisor_criterion(i) != pure {
            return Err(Error::Violation(format!(
                "purity: hom-exactness says {pure}, divisor criterion disagrees for {i:?}"
            )));
        }
    }
    Ok(PurityCertificate { pure, witness })
}

/// Purity certificate for a map already known to be mono.
pub(crate) fn pure_certificate_of_mono(i: &Morphism) -> Result<PurityCertificate> {
    let (_, p) = crate::modcat::cokernel(i);
    pure_mono_unchecked(i, &Conflation::raw(i.clone(), p))
}

/// Purity certificate of a monomorphism.
pub fn is_pure_mono(i: &Morphism) -> Result<PurityCertificate> {
    if !is_mono(i) {
        return Err(Error::NotMono("is_pure_mono".into()));
    }
    let eta = conflation_of_mono(i)?;
    pure_mono_unchecked(i, &eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcat::tests::{mor, z};
    use crate::modcat::{enumerate_subgroups, Caps, FpModule};

    #[test]
    fn examples() {
        let split = mor(&z(4, &[2]), &z(4, &[2, 4]), vec![vec![1, 0]]);
        assert!(is_pure_mono(&split).unwrap().pure);
        let inc = mor(&z(4, &[2]), &z(4, &[4]), vec![vec![2]]);
        let c = is_pure_mono(&inc).unwrap();
        assert!(!c.pure);
        let w = c.witness.unwrap();
        assert_eq!((w.d, w.k.clone(), w.image.clone()), (2, vec![1], vec![2]));
        assert!(verify_purity_witness(&inc, &w));
        assert!(is_pure_mono(&Morphism::identity(&z(12, &[2, 6]))).unwrap().pure);
        let two = mor(&z(4, &[4]), &z(4, &[4]), vec![vec![2]]);
        assert!(matches!(is_pure_mono(&two), Err(Error::NotMono(_))));
    }

    #[test]
    fn three_ways_agree_on_small_lattices() {
        for (m, f) in [
            (4, vec![2, 4]),
            (4, vec![4, 4]),
            (12, vec![2, 12]),
            (8, vec![2, 8]),
            (12, vec![6, 6]),
        ] {
            let b = FpModule::new(m, f).unwrap();
            for s in enumerate_subgroups(&b, None, &Caps::default()).unwrap() {
                let i = s.inclusion(&b);
                let eta = conflation_of_mono(&i).unwrap();
                let a = pure_by_hom_exactness(&eta);
                assert_eq!(a, pure_by_divisor_criterion(&i));
                let w = purity_witness(&i);
                assert_eq!(a, w.is_none());
                if let Some(w) = w {
                    assert!(verify_purity_witness(&i, &w));
                }
            }
        }
    }
}
