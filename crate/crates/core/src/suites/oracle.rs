//! Brute-force reference answers, computed from element sets only.

use std::collections::HashSet;

use crate::modcat::{divisors_above_one, FpModule, Morphism};

/// For each d | m (d ≥ 2), the set d·M as element indices, built by
/// multiplying every element.
#[derive(Clone, Debug)]
pub struct MultipleTable {
    module: FpModule,
    sets: Vec<(i64, Vec<bool>)>,
}

impl MultipleTable {
    pub fn new(m: &FpModule) -> Self {
        let n = m.order() as usize;
        let sets = divisors_above_one(m.modulus())
            .into_iter()
            .map(|d| {
                let mut hit = vec![false; n];
                for i in 0..n {
                    let x = m.element_at(i);
                    hit[m.index_of(&m.scale(d, &x))] = true;
                }
                (d, hit)
            })
            .collect();
        MultipleTable {
            module: m.clone(),
            sets,
        }
    }

    pub fn divisors(&self) -> impl Iterator<Item = i64> + '_ {
        self.sets.iter().map(|(d, _)| *d)
    }

    pub fn contains(&self, d_pos: usize, x: &[i64]) -> bool {
        self.sets[d_pos].1[self.module.index_of(x)]
    }
}

/// One-equation oracle for a partial morphism: there is no `k ∈ U` and d with
/// `x·d = u(k)` solvable in X but `x·d = f(k)` unsolvable in Y.
pub fn systems_partial(u: &Morphism, f: &Morphism, tx: &MultipleTable, ty: &MultipleTable) -> bool {
    let dom = u.source();
    for i in 1..dom.order() as usize {
        let k = dom.element_at(i);
        let (uk, fk) = (u.apply(&k), f.apply(&k));
        for pos in 0..tx.sets.len() {
            if tx.contains(pos, &uk) && !ty.contains(pos, &fk) {
                return false;
            }
        }
    }
    true
}

/// Purity of a mono by element sets: d·B ∩ i(A) = i(d·A) for every d.
/// Since i is mono, i(k) ∈ i(d·A) exactly when k ∈ d·A.
pub fn systems_pure(i: &Morphism, ta: &MultipleTable, tb: &MultipleTable) -> bool {
    let a = i.source();
    for i_idx in 0..a.order() as usize {
        let k = a.element_at(i_idx);
        let y = i.apply(&k);
        for pos in 0..tb.sets.len() {
            if tb.contains(pos, &y) && !ta.contains(pos, &k) {
                return false;
            }
        }
    }
    true
}

/// Subgroup generated by `gens`, by closure.
pub fn span(m: &FpModule, gens: &[Vec<i64>]) -> HashSet<Vec<i64>> {
    let mut set: HashSet<Vec<i64>> = HashSet::new();
    set.insert(vec![0; m.ngens()]);
    let mut frontier: Vec<Vec<i64>> = vec![vec![0; m.ngens()]];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = m.add(&x, g);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn running_example_oracle() {
        let x = FpModule::new(4, vec![4]).unwrap();
        let u2 = FpModule::new(4, vec![2]).unwrap();
        let u = Morphism::from_rows(u2.clone(), x.clone(), vec![vec![2]]).unwrap();
        let (tx, tu) = (MultipleTable::new(&x), MultipleTable::new(&u2));
        assert!(!systems_partial(&u, &Morphism::identity(&u2), &tx, &tu));
        assert!(systems_partial(&u, &u, &tx, &tx));
        assert!(!systems_pure(&u, &tu, &tx));
        assert_eq!(span(&x, &[vec![2]]).len(), 2);
    }
}
