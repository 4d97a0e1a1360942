use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

use super::module::FpModule;

/// Homomorphism between canonical modules; rows are source generators, columns
/// target generators, acting on row vectors `x ↦ x·M`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    source: FpModule,
    target: FpModule,
    matrix: Matrix<i64>,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} -> {:?} {}", self.source, self.target, self.matrix)
    }
}

impl Morphism {
    /// Checks dimensions and well-definedness; entries are reduced mod the target factors.
    pub fn new(source: FpModule, target: FpModule, matrix: Matrix<i64>) -> Result<Self> {
        source.same_ring(&target)?;
        if matrix.rows() != source.ngens() || matrix.cols() != target.ngens() {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for a map with {} source and {} target generators",
                matrix.rows(),
                matrix.cols(),
                source.ngens(),
                target.ngens()
            )));
        }
        let mut matrix = matrix;
        for i in 0..source.ngens() {
            for j in 0..target.ngens() {
                let b = target.factors()[j];
                let v = matrix.get(i, j).rem_euclid(b);
                let a = source.factors()[i] as i128;
                if (a * v as i128) % b as i128 != 0 {
                    return Err(Error::IllDefined(format!(
                        "generator {i} of order {a} sent to {v} in Z/{b}"
                    )));
                }
                matrix.set(i, j, v);
            }
        }
        Ok(Morphism { source, target, matrix })
    }

    /// Builds from nested rows.
    pub fn from_rows(source: FpModule, target: FpModule, rows: Vec<Vec<i64>>) -> Result<Self> {
        let cols = target.ngens();
        let m = Matrix::from_rows(rows, cols)?;
        Morphism::new(source, target, m)
    }

    /// Caller guarantees the matrix is reduced and well defined.
    pub(crate) fn raw(source: FpModule, target: FpModule, matrix: Matrix<i64>) -> Self {
        debug_assert!(
            Morphism::new(source.clone(), target.clone(), matrix.clone())
                .map(|f| f.matrix == matrix)
                .unwrap_or(false),
            "ill-formed raw morphism {source:?} -> {target:?} {matrix}"
        );
        Morphism { source, target, matrix }
    }

    pub fn zero(source: &FpModule, target: &FpModule) -> Self {
        Morphism {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zeros(source.ngens(), target.ngens()),
        }
    }

    pub fn identity(m: &FpModule) -> Self {
        Morphism {
            source: m.clone(),
            target: m.clone(),
            matrix: Matrix::identity(m.ngens()),
        }
    }

    /// Multiplication by a scalar on `m`.
    pub fn scalar(m: &FpModule, k: i64) -> Self {
        let mut mat = Matrix::zeros(m.ngens(), m.ngens());
        for (i, &d) in m.factors().iter().enumerate() {
            mat.set(i, i, k.rem_euclid(d));
        }
        Morphism::raw(m.clone(), m.clone(), mat)
    }

    pub fn source(&self) -> &FpModule {
        &self.source
    }

    pub fn target(&self) -> &FpModule {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix<i64> {
        &self.matrix
    }

    pub fn row(&self, i: usize) -> &[i64] {
        self.matrix.row(i)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.entries().iter().all(|&v| v == 0)
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        let t = self.target.factors();
        let mut out = vec![0i64; t.len()];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let v = *self.matrix.get(i, j);
                if v != 0 {
                    *o = ((*o as i128 + xi as i128 * v as i128).rem_euclid(t[j] as i128)) as i64;
                }
            }
        }
        out
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &Morphism) -> Result<Morphism> {
        if f.target != self.source {
            return Err(Error::Dimension(format!(
                "cannot compose {:?} after a map into {:?}",
                self.source, f.target
            )));
        }
        let rows: Vec<Vec<i64>> = (0..f.source.ngens()).map(|i| self.apply(f.row(i))).collect();
        let m = Matrix::from_rows(rows, self.target.ngens())?;
        Ok(Morphism::raw(f.source.clone(), self.target.clone(), m))
    }

    fn same_shape(&self, other: &Morphism) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::Dimension("morphisms have different source or target".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        self.same_shape(other)?;
        let t = self.target.factors();
        let mut m = self.matrix.clone();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                m.set(i, j, (m.get(i, j) + other.matrix.get(i, j)) % t[j]);
            }
        }
        Ok(Morphism::raw(self.source.clone(), self.target.clone(), m))
    }

    pub fn neg(&self) -> Morphism {
        let t = self.target.factors();
        let mut m = self.matrix.clone();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                m.set(i, j, (t[j] - m.get(i, j)) % t[j]);
            }
        }
        Morphism::raw(self.source.clone(), self.target.clone(), m)
    }

    pub fn sub(&self, other: &Morphism) -> Result<Morphism> {
        self.add(&other.neg())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: i64, f: &[i64]) -> FpModule {
        FpModule::new(m, f.to_vec()).unwrap()
    }

    #[test]
    fn well_definedness() {
        assert!(Morphism::from_rows(z(4, &[2]), z(4, &[4]), vec![vec![2]]).is_ok());
        assert!(matches!(
            Morphism::from_rows(z(4, &[2]), z(4, &[4]), vec![vec![1]]),
            Err(Error::IllDefined(_))
        ));
        let f = Morphism::from_rows(z(4, &[4]), z(4, &[2]), vec![vec![3]]).unwrap();
        assert_eq!(f.matrix().get(0, 0), &1);
    }

    #[test]
    fn composition_and_sums() {
        let a = z(12, &[2, 6]);
        let f = Morphism::from_rows(a.clone(), a.clone(), vec![vec![1, 3], vec![0, 5]]).unwrap();
        let id = Morphism::identity(&a);
        assert_eq!(f.after(&id).unwrap(), f);
        assert_eq!(id.after(&f).unwrap(), f);
        assert!(f.add(&f.neg()).unwrap().is_zero());
        let ff = f.after(&f).unwrap();
        assert_eq!(ff.apply(&[1, 1]), f.apply(&f.apply(&[1, 1])));
    }
}
