use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, Matrix};

/// Largest supported ring modulus for modules.
pub const MAX_MODULUS: i64 = 1 << 31;

/// Presentation a module was built from, with the basis change to canonical
/// coordinates.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub relations: IntMatrix,
    /// Presentation generator `j` ↦ row `j`, in canonical coordinates.
    pub to_canonical: Matrix<i64>,
    /// Canonical generator `i` ↦ row `i`, in presentation coordinates.
    pub from_canonical: Matrix<i64>,
}

/// Finite ℤ/m-module ⊕ ℤ/dᵢ with d₁ | d₂ | … and every dᵢ | m, dᵢ ≥ 2.
#[derive(Clone)]
pub struct FpModule {
    modulus: i64,
    factors: Vec<i64>,
    presentation: Option<Arc<Presentation>>,
}

impl PartialEq for FpModule {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.factors == other.factors
    }
}

impl Eq for FpModule {}

impl Hash for FpModule {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.modulus.hash(state);
        self.factors.hash(state);
    }
}

impl fmt::Debug for FpModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}{:?}", self.modulus, self.factors)
    }
}

impl fmt::Display for FpModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub(crate) fn check_modulus(m: i64) -> Result<()> {
    if !(2..MAX_MODULUS).contains(&m) {
        return Err(Error::Input(format!(
            "ring modulus must satisfy 2 <= m < 2^31, got {m}"
        )));
    }
    Ok(())
}

impl FpModule {
    /// Module with the given invariant factors, which must already form a chain.
    pub fn new(modulus: i64, factors: Vec<i64>) -> Result<Self> {
        check_modulus(modulus)?;
        for &d in &factors {
            if d < 2 || modulus % d != 0 {
                return Err(Error::Input(format!(
                    "invariant factor {d} must be at least 2 and divide {modulus}"
                )));
            }
        }
        for w in factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::Input(format!(
                    "invariant factors {factors:?} do not form a divisibility chain"
                )));
            }
        }
        Ok(FpModule {
            modulus,
            factors,
            presentation: None,
        })
    }

    pub(crate) fn raw(modulus: i64, factors: Vec<i64>) -> Self {
        debug_assert!(
            FpModule::new(modulus, factors.clone()).is_ok(),
            "{factors:?} over {modulus}"
        );
        FpModule {
            modulus,
            factors,
            presentation: None,
        }
    }

    pub fn zero(modulus: i64) -> Self {
        FpModule::raw(modulus, vec![])
    }

    /// ℤ/d; `d = 1` gives the zero module.
    pub fn cyclic(modulus: i64, d: i64) -> Result<Self> {
        if d == 1 {
            check_modulus(modulus)?;
            return Ok(FpModule::zero(modulus));
        }
        FpModule::new(modulus, vec![d])
    }

    /// (ℤ/m)ⁿ.
    pub fn free(modulus: i64, n: usize) -> Self {
        FpModule::raw(modulus, vec![modulus; n])
    }

    pub(crate) fn with_presentation(mut self, p: Presentation) -> Self {
        self.presentation = Some(Arc::new(p));
        self
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn factors(&self) -> &[i64] {
        &self.factors
    }

    pub fn presentation(&self) -> Option<&Presentation> {
        self.presentation.as_deref()
    }

    pub fn ngens(&self) -> usize {
        self.factors.len()
    }

    pub fn is_zero(&self) -> bool {
        self.factors.is_empty()
    }

    /// Order, saturating at `u128::MAX`.
    pub fn order(&self) -> u128 {
        self.factors.iter().fold(1u128, |acc, &d| acc.saturating_mul(d as u128))
    }

    pub fn same_ring(&self, other: &FpModule) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::RingMismatch(self.modulus, other.modulus));
        }
        Ok(())
    }

    /// Reduces coordinates into `0 ≤ xᵢ < dᵢ`.
    pub fn reduce(&self, coords: &mut [i64]) {
        for (x, &d) in coords.iter_mut().zip(&self.factors) {
            *x = x.rem_euclid(d);
        }
    }

    pub fn is_valid_element(&self, coords: &[i64]) -> bool {
        coords.len() == self.factors.len() && coords.iter().zip(&self.factors).all(|(&x, &d)| (0..d).contains(&x))
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((&x, &y), &d)| (x + y) % d)
            .collect()
    }

    pub fn neg(&self, a: &[i64]) -> Vec<i64> {
        a.iter().zip(&self.factors).map(|(&x, &d)| (d - x) % d).collect()
    }

    pub fn scale(&self, k: i64, a: &[i64]) -> Vec<i64> {
        a.iter()
            .zip(&self.factors)
            .map(|(&x, &d)| ((k % d) * x).rem_euclid(d))
            .collect()
    }

    /// x ∈ d·M, decided coordinatewise: xᵢ must be a multiple of gcd(d, dᵢ).
    pub fn in_multiple(&self, coords: &[i64], d: i64) -> bool {
        coords.iter().zip(&self.factors).all(|(&x, &f)| x % d.gcd(&f) == 0)
    }

    /// Additive order of an element.
    pub fn element_order(&self, coords: &[i64]) -> i64 {
        coords
            .iter()
            .zip(&self.factors)
            .fold(1, |acc, (&x, &d)| acc.lcm(&(d / x.gcd(&d))))
    }

    /// Exponent: the largest invariant factor (1 for the zero module).
    pub fn exponent(&self) -> i64 {
        self.factors.last().copied().unwrap_or(1)
    }

    /// Position of an element in lexicographic order.
    pub fn index_of(&self, coords: &[i64]) -> usize {
        coords
            .iter()
            .zip(&self.factors)
            .fold(0usize, |acc, (&x, &d)| acc * d as usize + x as usize)
    }

    /// Inverse of [`FpModule::index_of`].
    pub fn element_at(&self, mut index: usize) -> Vec<i64> {
        let mut out = vec![0; self.factors.len()];
        for (o, &d) in out.iter_mut().zip(&self.factors).rev() {
            *o = (index % d as usize) as i64;
            index /= d as usize;
        }
        out
    }
}

/// An element together with the module it lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModElement<'a> {
    pub parent: &'a FpModule,
    pub coords: Vec<i64>,
}

impl<'a> ModElement<'a> {
    pub fn new(parent: &'a FpModule, mut coords: Vec<i64>) -> Result<Self> {
        if coords.len() != parent.ngens() {
            return Err(Error::Dimension(format!(
                "{} coordinates for a module with {} generators",
                coords.len(),
                parent.ngens()
            )));
        }
        parent.reduce(&mut coords);
        Ok(ModElement { parent, coords })
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(FpModule::new(4, vec![2, 4]).is_ok());
        assert!(FpModule::new(4, vec![4, 2]).is_err());
        assert!(FpModule::new(4, vec![3]).is_err());
        assert!(FpModule::new(4, vec![1]).is_err());
        assert!(FpModule::new(1, vec![]).is_err());
        assert_eq!(FpModule::zero(4).order(), 1);
        assert_eq!(FpModule::new(12, vec![2, 6]).unwrap().order(), 12);
    }

    #[test]
    fn index_round_trip() {
        let m = FpModule::new(12, vec![2, 6, 12]).unwrap();
        for i in 0..m.order() as usize {
            assert_eq!(m.index_of(&m.element_at(i)), i);
        }
        assert_eq!(m.element_at(1), vec![0, 0, 1]);
    }

    #[test]
    fn multiples_and_orders() {
        let m = FpModule::new(4, vec![2, 4]).unwrap();
        assert!(m.in_multiple(&[0, 2], 2));
        assert!(!m.in_multiple(&[1, 0], 2));
        assert!(!m.in_multiple(&[0, 1], 2));
        assert_eq!(m.element_order(&[1, 2]), 2);
        assert_eq!(m.element_order(&[1, 1]), 4);
    }
}
