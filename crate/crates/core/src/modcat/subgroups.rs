//! Subgroup lattices of small modules, as element bitsets.

use std::collections::HashSet;

use crate::error::Result;

use super::enumerate::Caps;
use super::module::FpModule;
use super::morphism::Morphism;
use super::ops::{self, Generated};

/// A subgroup of a fixed ambient module, stored as the set of element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    bits: Vec<u64>,
    order: usize,
    /// A generating set, in ambient coordinates.
    pub gens: Vec<Vec<i64>>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn contains(&self, ambient: &FpModule, x: &[i64]) -> bool {
        self.contains_index(ambient.index_of(x))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .flat_map(|(w, &word)| (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b))
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection_order(&self, other: &Subgroup) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// The canonical module of this subgroup with its inclusion.
    pub fn to_module(&self, ambient: &FpModule) -> Generated {
        ops::subgroup_generated(ambient, &self.gens)
    }

    pub fn inclusion(&self, ambient: &FpModule) -> Morphism {
        self.to_module(ambient).inclusion
    }
}

/// Element-level arithmetic on indices.
pub(crate) struct IndexArith<'a> {
    m: &'a FpModule,
    n: usize,
}

impl<'a> IndexArith<'a> {
    pub fn new(m: &'a FpModule) -> Self {
        IndexArith {
            m,
            n: m.order() as usize,
        }
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.m.element_at(a), self.m.element_at(b));
        self.m.index_of(&self.m.add(&x, &y))
    }

    /// Closure of `base` together with `g`, assuming `base` is a subgroup.
    pub fn join(&self, base: &Subgroup, g: usize) -> Subgroup {
        let mut bits = base.bits.clone();
        let members: Vec<usize> = base.indices().collect();
        let mut order = base.order;
        let mut step = g;
        while bits[step / 64] >> (step % 64) & 1 == 0 {
            let coset: Vec<usize> = members.iter().map(|&s| self.add(s, step)).collect();
            for &c in &coset {
                bits[c / 64] |= 1 << (c % 64);
            }
            order += coset.len();
            step = self.add(step, g);
        }
        let mut gens = base.gens.clone();
        gens.push(self.m.element_at(g));
        Subgroup { bits, order, gens }
    }

    pub fn trivial(&self) -> Subgroup {
        let mut bits = vec![0u64; self.n.div_ceil(64).max(1)];
        bits[0] = 1;
        Subgroup {
            bits,
            order: 1,
            gens: vec![],
        }
    }

    pub fn generated(&self, gens: &[Vec<i64>]) -> Subgroup {
        let mut s = self.trivial();
        for g in gens {
            let gi = self.m.index_of(g);
            if !s.contains_index(gi) {
                s = self.join(&s, gi);
            }
        }
        s
    }
}

/// All subgroups of `m` containing `base` (or all subgroups), sorted by order
/// and then by element set.
pub fn enumerate_subgroups(m: &FpModule, base: Option<&[Vec<i64>]>, caps: &Caps) -> Result<Vec<Subgroup>> {
    caps.check(&format!("subgroup search in {m:?}"), caps.subgroup_order, m.order())?;
    let arith = IndexArith::new(m);
    let start = match base {
        Some(g) => arith.generated(g),
        None => arith.trivial(),
    };
    let n = m.order() as usize;
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    seen.insert(start.bits.clone());
    let mut all = vec![start];
    let mut next = 0;
    while next < all.len() {
        let s = all[next].clone();
        next += 1;
        let mut tried = s.bits.clone();
        for g in 0..n {
            if tried[g / 64] >> (g % 64) & 1 == 1 {
                continue;
            }
            let t = arith.join(&s, g);
            // every element of g + S generates the same join
            for c in s.indices() {
                let x = arith.add(c, g);
                tried[x / 64] |= 1 << (x % 64);
            }
            if seen.insert(t.bits.clone()) {
                all.push(t);
                caps.check(
                    &format!("number of subgroups of {m:?}"),
                    caps.subgroup_count as u128,
                    all.len() as u128,
                )?;
            }
        }
    }
    all.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.bits.cmp(&b.bits)));
    Ok(all)
}

/// Cyclic subgroups of prime order (the atoms of the lattice).
pub fn minimal_subgroups(m: &FpModule) -> Vec<Vec<i64>> {
    let n = m.order() as usize;
    let mut out = Vec::new();
    for i in 1..n {
        let x = m.element_at(i);
        let o = m.element_order(&x);
        if is_prime(o) {
            out.push(x);
        }
    }
    out
}

pub(crate) fn is_prime(n: i64) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| n % p != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(m: i64, f: &[i64]) -> usize {
        let md = FpModule::new(m, f.to_vec()).unwrap();
        enumerate_subgroups(&md, None, &Caps::default()).unwrap().len()
    }

    #[test]
    fn known_lattice_sizes() {
        assert_eq!(count(4, &[]), 1);
        assert_eq!(count(4, &[4]), 3);
        assert_eq!(count(4, &[2, 2]), 5);
        assert_eq!(count(4, &[2, 4]), 8);
        assert_eq!(count(4, &[4, 4]), 15);
        assert_eq!(count(2, &[2, 2, 2]), 16);
        assert_eq!(count(12, &[12]), 6);
    }

    #[test]
    fn overgroups_and_modules() {
        let m = FpModule::new(4, vec![4, 4]).unwrap();
        let subs = enumerate_subgroups(&m, Some(&[vec![2, 0]]), &Caps::default()).unwrap();
        assert!(subs.iter().all(|s| s.contains(&m, &[2, 0])));
        assert_eq!(subs.first().unwrap().order(), 2);
        assert_eq!(subs.last().unwrap().order(), 16);
        for s in &subs {
            let g = s.to_module(&m);
            assert_eq!(g.module.order() as usize, s.order());
        }
    }
}
