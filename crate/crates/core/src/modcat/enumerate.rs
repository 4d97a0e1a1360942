//! Exhaustive enumeration of elements and Hom-sets, and Hom-set generators.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;

use super::module::{FpModule, ModElement};
use super::morphism::Morphism;

/// Enumeration limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest Hom-set enumerated.
    pub hom: u128,
    /// Largest module whose elements are enumerated.
    pub elements: u128,
    /// Largest module whose subgroup lattice is searched.
    pub subgroup_order: u128,
    /// Largest number of subgroups produced by one search.
    pub subgroup_count: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            hom: 4096,
            elements: 4096,
            subgroup_order: 1024,
            subgroup_count: 200_000,
        }
    }
}

impl Caps {
    /// Defaults overridden by `ZPARTIAL_CAPS`, e.g. `hom=10000,subgroups=2048`.
    pub fn from_env() -> Result<Self> {
        let mut caps = Caps::default();
        if let Ok(spec) = std::env::var("ZPARTIAL_CAPS") {
            caps.apply_overrides(&spec)?;
        }
        Ok(caps)
    }

    pub fn apply_overrides(&mut self, spec: &str) -> Result<()> {
        for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Input(format!("cap override `{part}` is not key=value")))?;
            let n: u128 = v
                .trim()
                .parse()
                .map_err(|_| Error::Input(format!("cap value `{v}` is not a number")))?;
            match k.trim() {
                "hom" => self.hom = n,
                "elements" => self.elements = n,
                "subgroups" => self.subgroup_order = n,
                "subgroup-count" => self.subgroup_count = n as usize,
                other => return Err(Error::Input(format!("unknown cap `{other}`"))),
            }
        }
        Ok(())
    }

    pub fn check(&self, what: &str, cap: u128, size: u128) -> Result<()> {
        if size > cap {
            return Err(Error::Cap {
                what: what.to_string(),
                cap,
                size,
            });
        }
        Ok(())
    }
}

/// All elements in lexicographic order.
pub fn enumerate_elements<'a>(m: &'a FpModule, caps: &Caps) -> Result<impl Iterator<Item = ModElement<'a>> + 'a> {
    caps.check("module order", caps.elements, m.order())?;
    let n = m.order() as usize;
    Ok((0..n).map(move |i| ModElement {
        parent: m,
        coords: m.element_at(i),
    }))
}

/// |Hom(a, b)| = ∏ gcd(aᵢ, bⱼ), saturating.
pub fn hom_size(a: &FpModule, b: &FpModule) -> u128 {
    let mut acc: u128 = 1;
    for &x in a.factors() {
        for &y in b.factors() {
            acc = acc.saturating_mul(x.gcd(&y) as u128);
        }
    }
    acc
}

/// Every morphism, lexicographic on the row-major matrix.
pub fn enumerate_hom(a: &FpModule, b: &FpModule, caps: &Caps) -> Result<HomIter> {
    a.same_ring(b)?;
    let size = hom_size(a, b);
    caps.check(&format!("|Hom({a:?}, {b:?})|"), caps.hom, size)?;
    let (n, k) = (a.ngens(), b.ngens());
    let mut steps = Vec::with_capacity(n * k);
    let mut counts = Vec::with_capacity(n * k);
    for &x in a.factors() {
        for &y in b.factors() {
            let g = x.gcd(&y);
            steps.push(y / g);
            counts.push(g);
        }
    }
    Ok(HomIter {
        source: a.clone(),
        target: b.clone(),
        steps,
        counts,
        digits: vec![0; n * k],
        done: false,
    })
}

pub struct HomIter {
    source: FpModule,
    target: FpModule,
    steps: Vec<i64>,
    counts: Vec<i64>,
    digits: Vec<i64>,
    done: bool,
}

impl Iterator for HomIter {
    type Item = Morphism;

    fn next(&mut self) -> Option<Morphism> {
        if self.done {
            return None;
        }
        let data: Vec<i64> = self.digits.iter().zip(&self.steps).map(|(d, s)| d * s).collect();
        let m = Matrix::from_vec(self.source.ngens(), self.target.ngens(), data).expect("shape");
        let out = Morphism::raw(self.source.clone(), self.target.clone(), m);
        // advance, last entry fastest
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.counts[i] {
                break;
            }
            self.digits[i] = 0;
        }
        Some(out)
    }
}

/// Additive generators of Hom(a, b): one elementary map per nonzero gcd slot.
pub fn hom_generators(a: &FpModule, b: &FpModule) -> Vec<Morphism> {
    let mut out = Vec::new();
    for (i, &x) in a.factors().iter().enumerate() {
        for (j, &y) in b.factors().iter().enumerate() {
            let g = x.gcd(&y);
            if g > 1 {
                let mut m = Matrix::zeros(a.ngens(), b.ngens());
                m.set(i, j, y / g);
                out.push(Morphism::raw(a.clone(), b.clone(), m));
            }
        }
    }
    out
}

/// Positive divisors of `m` greater than one, ascending.
pub fn divisors_above_one(m: i64) -> Vec<i64> {
    (2..=m).filter(|d| m % d == 0).collect()
}

/// Every module of order at most `max_order`, as invariant-factor chains,
/// sorted by number of factors and then lexicographically.
pub fn modules_up_to(modulus: i64, max_order: u128) -> Result<Vec<FpModule>> {
    super::module::check_modulus(modulus)?;
    let divs = divisors_above_one(modulus);
    let mut out = Vec::new();
    let mut chain = Vec::new();
    fn walk(divs: &[i64], chain: &mut Vec<i64>, order: u128, max: u128, out: &mut Vec<Vec<i64>>) {
        out.push(chain.clone());
        for &d in divs {
            if chain.last().is_some_and(|&l| d % l != 0) {
                continue;
            }
            let next = order * d as u128;
            if next > max {
                continue;
            }
            chain.push(d);
            walk(divs, chain, next, max, out);
            chain.pop();
        }
    }
    walk(&divs, &mut chain, 1, max_order, &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out.into_iter().map(|f| FpModule::raw(modulus, f)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modcat::ops::is_mono;

    fn z(m: i64, f: &[i64]) -> FpModule {
        FpModule::new(m, f.to_vec()).unwrap()
    }

    #[test]
    fn hom_examples() {
        let caps = Caps::default();
        let homs: Vec<_> = enumerate_hom(&z(4, &[2]), &z(4, &[4]), &caps).unwrap().collect();
        assert_eq!(homs.len(), 2);
        assert_eq!(homs[1].row(0), &[2]);
        assert_eq!(
            enumerate_hom(&FpModule::zero(4), &z(4, &[2, 4]), &caps)
                .unwrap()
                .count(),
            1
        );
        assert_eq!(enumerate_elements(&z(4, &[2, 2]), &caps).unwrap().count(), 4);
    }

    #[test]
    fn hom_cardinality_formula() {
        let caps = Caps::default();
        let mods = [
            vec![],
            vec![2],
            vec![4],
            vec![2, 2],
            vec![2, 4],
            vec![4, 4],
            vec![2, 2, 4],
        ];
        for a in &mods {
            for b in &mods {
                let (a, b) = (z(4, a), z(4, b));
                if hom_size(&a, &b) > 4096 {
                    continue;
                }
                let all: Vec<_> = enumerate_hom(&a, &b, &caps).unwrap().collect();
                assert_eq!(all.len() as u128, hom_size(&a, &b));
                let set: std::collections::HashSet<_> = all.iter().cloned().collect();
                assert_eq!(set.len(), all.len());
                // each candidate is well defined
                for f in &all {
                    assert!(Morphism::new(a.clone(), b.clone(), f.matrix().clone()).is_ok());
                }
            }
        }
    }

    #[test]
    fn caps_are_enforced() {
        let caps = Caps {
            hom: 3,
            ..Caps::default()
        };
        let e = enumerate_hom(&z(4, &[4]), &z(4, &[4]), &caps).err().unwrap();
        assert!(matches!(e, Error::Cap { cap: 3, size: 4, .. }));
        let mut c = Caps::default();
        c.apply_overrides("hom=10, subgroups=64").unwrap();
        assert_eq!((c.hom, c.subgroup_order), (10, 64));
        assert!(c.apply_overrides("bogus=1").is_err());
    }

    #[test]
    fn monos_from_cyclic() {
        let caps = Caps::default();
        let monos = enumerate_hom(&z(4, &[2]), &z(4, &[2, 4]), &caps)
            .unwrap()
            .filter(is_mono)
            .count();
        assert_eq!(monos, 3);
    }

    #[test]
    fn module_lists() {
        let names: Vec<Vec<i64>> = modules_up_to(4, 16)
            .unwrap()
            .iter()
            .map(|m| m.factors().to_vec())
            .collect();
        let want: Vec<Vec<i64>> = vec![
            vec![],
            vec![2],
            vec![4],
            vec![2, 2],
            vec![2, 4],
            vec![4, 4],
            vec![2, 2, 2],
            vec![2, 2, 4],
            vec![2, 2, 2, 2],
        ];
        assert_eq!(names, want);
        assert_eq!(modules_up_to(12, 1).unwrap(), vec![FpModule::zero(12)]);
    }
}
