//! Exact integer matrices, Smith normal form and linear systems over ℤ and ℤ/m.
//!
//! The public surface works on [`IntMatrix`] (arbitrary precision). Internally the
//! same elimination runs on checked `i64` first and is redone on `BigInt` when an
//! intermediate overflows, see [`SmallSolver`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalar type the elimination engine can run on.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn nil() -> Self;
    fn unit() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_nil(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn cmp_abs(&self, other: &Self) -> Ordering;
    fn plus(&self, other: &Self) -> Option<Self>;
    fn minus(&self, other: &Self) -> Option<Self>;
    fn times(&self, other: &Self) -> Option<Self>;
    fn negated(&self) -> Option<Self>;
    /// Floor quotient, `other != 0`.
    fn floor_div(&self, other: &Self) -> Option<Self>;
    /// Exact division, `other` known to divide `self`.
    fn exact_div(&self, other: &Self) -> Option<Self>;
    fn multiple_of(&self, other: &Self) -> bool;
    /// Least nonnegative residue modulo a positive `n`.
    fn rem_i64(&self, n: i64) -> i64;
}

impl Coeff for i64 {
    fn nil() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.unsigned_abs().cmp(&other.unsigned_abs())
    }
    fn plus(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }
    fn minus(&self, other: &Self) -> Option<Self> {
        self.checked_sub(*other)
    }
    fn times(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn negated(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn floor_div(&self, other: &Self) -> Option<Self> {
        if *self == i64::MIN && *other == -1 {
            return None;
        }
        Some(Integer::div_floor(self, other))
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        self.checked_div(*other)
    }
    fn multiple_of(&self, other: &Self) -> bool {
        if *other == 0 {
            *self == 0
        } else {
            self.checked_rem(*other).is_none_or(|r| r == 0)
        }
    }
    fn rem_i64(&self, n: i64) -> i64 {
        self.rem_euclid(n)
    }
}

impl Coeff for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
    fn cmp_abs(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
    fn plus(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn minus(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn times(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn negated(&self) -> Option<Self> {
        Some(-self)
    }
    fn floor_div(&self, other: &Self) -> Option<Self> {
        Some(Integer::div_floor(self, other))
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        Some(self / other)
    }
    fn multiple_of(&self, other: &Self) -> bool {
        if Zero::is_zero(other) {
            Zero::is_zero(self)
        } else {
            Zero::is_zero(&(self % other))
        }
    }
    fn rem_i64(&self, n: i64) -> i64 {
        self.mod_floor(&BigInt::from(n)).to_i64().expect("residue fits")
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Arbitrary precision integer matrix.
pub type IntMatrix = Matrix<BigInt>;

impl<T: Coeff> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::nil(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::unit();
        }
        m
    }

    /// Builds from a flat row-major vector.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds from nested rows. An empty list gives a 0×`cols_if_empty` matrix.
    pub fn from_rows(rows: Vec<Vec<T>>, cols_if_empty: usize) -> Result<Self> {
        let cols = rows.first().map_or(cols_if_empty, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        let n = rows.len();
        Ok(Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Coeff::is_nil)
    }

    /// Product, `None` on overflow of the scalar type.
    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        assert_eq!(self.cols, other.rows, "matrix product dimensions");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_nil() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_nil() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = out.data[idx].plus(&a.times(b)?)?;
                }
            }
        }
        Some(out)
    }

    /// Row vector times matrix.
    pub fn checked_vec_mul(&self, v: &[T]) -> Option<Vec<T>> {
        assert_eq!(v.len(), self.rows, "vector-matrix dimensions");
        let mut out = vec![T::nil(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_nil() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_nil() {
                    *o = o.plus(&x.times(a)?)?;
                }
            }
        }
        Some(out)
    }

    // row[t] += q * row[s]
    fn add_row(&mut self, t: usize, s: usize, q: &T) -> Option<()> {
        for c in 0..self.cols {
            let v = self.data[s * self.cols + c].clone();
            if !v.is_nil() {
                let idx = t * self.cols + c;
                self.data[idx] = self.data[idx].plus(&q.times(&v)?)?;
            }
        }
        Some(())
    }

    // col[t] += q * col[s]
    fn add_col(&mut self, t: usize, s: usize, q: &T) -> Option<()> {
        for r in 0..self.rows {
            let v = self.data[r * self.cols + s].clone();
            if !v.is_nil() {
                let idx = r * self.cols + t;
                self.data[idx] = self.data[idx].plus(&q.times(&v)?)?;
            }
        }
        Some(())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    fn neg_row(&mut self, r: usize) -> Option<()> {
        for c in 0..self.cols {
            let idx = r * self.cols + c;
            self.data[idx] = self.data[idx].negated()?;
        }
        Some(())
    }

    // (row a, row b) <- (x*a + y*b, z*a + w*b)
    fn mix_rows(&mut self, a: usize, b: usize, x: &T, y: &T, z: &T, w: &T) -> Option<()> {
        for c in 0..self.cols {
            let va = self.data[a * self.cols + c].clone();
            let vb = self.data[b * self.cols + c].clone();
            self.data[a * self.cols + c] = x.times(&va)?.plus(&y.times(&vb)?)?;
            self.data[b * self.cols + c] = z.times(&va)?.plus(&w.times(&vb)?)?;
        }
        Some(())
    }

    // (col a, col b) <- (x*a + y*b, z*a + w*b)
    fn mix_cols(&mut self, a: usize, b: usize, x: &T, y: &T, z: &T, w: &T) -> Option<()> {
        for r in 0..self.rows {
            let va = self.data[r * self.cols + a].clone();
            let vb = self.data[r * self.cols + b].clone();
            self.data[r * self.cols + a] = x.times(&va)?.plus(&y.times(&vb)?)?;
            self.data[r * self.cols + b] = z.times(&va)?.plus(&w.times(&vb)?)?;
        }
        Some(())
    }
}

impl Matrix<i64> {
    pub fn to_big(&self) -> IntMatrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }
}

impl IntMatrix {
    /// Converts to `i64` entries when they all fit.
    pub fn to_small(&self) -> Option<Matrix<i64>> {
        let data = self.data.iter().map(ToPrimitive::to_i64).collect::<Option<Vec<_>>>()?;
        Some(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.checked_mul(other).expect("bigint products do not overflow")
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
            cols,
        )
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[r * self.cols + c])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `u · a · v = d` with `d` diagonal, nonnegative and a divisibility chain.
#[derive(Clone, Debug, PartialEq)]
pub struct SnfDecomposition<T = BigInt> {
    pub u: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
    /// Inverse of `v`, tracked alongside it.
    pub v_inv: Matrix<T>,
    pub rank: usize,
}

impl<T: Coeff> SnfDecomposition<T> {
    /// Diagonal entries, trailing zeros included.
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }
}

/// Which transforms the engine should accumulate.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Track {
    pub u: bool,
    pub v: bool,
    pub v_inv: bool,
}

impl Track {
    pub const ALL: Track = Track {
        u: true,
        v: true,
        v_inv: true,
    };
}

fn ext_gcd<T: Coeff>(a: &T, b: &T) -> Option<(T, T, T)> {
    // a, b > 0; returns (g, s, t) with s*a + t*b = g > 0
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (T::unit(), T::nil());
    let (mut t0, mut t1) = (T::nil(), T::unit());
    while !r1.is_nil() {
        let q = r0.floor_div(&r1)?;
        let r2 = r0.minus(&q.times(&r1)?)?;
        let s2 = s0.minus(&q.times(&s1)?)?;
        let t2 = t0.minus(&q.times(&t1)?)?;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    Some((r0, s0, t0))
}

pub(crate) fn snf_generic<T: Coeff>(a: &Matrix<T>, track: Track) -> Option<SnfDecomposition<T>> {
    let (rows, cols) = (a.rows, a.cols);
    let mut d = a.clone();
    let dummy = || Matrix::zeros(0, 0);
    let mut u = if track.u { Matrix::identity(rows) } else { dummy() };
    let mut v = if track.v { Matrix::identity(cols) } else { dummy() };
    let mut vi = if track.v_inv { Matrix::identity(cols) } else { dummy() };

    macro_rules! row_add {
        ($t:expr, $s:expr, $q:expr) => {{
            d.add_row($t, $s, $q)?;
            if track.u {
                u.add_row($t, $s, $q)?;
            }
        }};
    }
    macro_rules! col_add {
        ($t:expr, $s:expr, $q:expr) => {{
            d.add_col($t, $s, $q)?;
            if track.v {
                v.add_col($t, $s, $q)?;
            }
            if track.v_inv {
                // V ← V·E with E = I + q·e_{s,t}; V⁻¹ ← E⁻¹·V⁻¹
                let nq = $q.negated()?;
                vi.add_row($s, $t, &nq)?;
            }
        }};
    }
    macro_rules! row_swap {
        ($a:expr, $b:expr) => {{
            d.swap_rows($a, $b);
            if track.u {
                u.swap_rows($a, $b);
            }
        }};
    }
    macro_rules! col_swap {
        ($a:expr, $b:expr) => {{
            d.swap_cols($a, $b);
            if track.v {
                v.swap_cols($a, $b);
            }
            if track.v_inv {
                vi.swap_rows($a, $b);
            }
        }};
    }

    let mut t = 0;
    while t < rows.min(cols) {
        // minimal |entry| in the trailing block, first in row-major order on ties
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = d.get(i, j);
                if x.is_nil() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if x.cmp_abs(d.get(bi, bj)) != Ordering::Less => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        row_swap!(t, pi);
        col_swap!(t, pj);
        loop {
            let p = d.get(t, t).clone();
            for i in t + 1..rows {
                if !d.get(i, t).is_nil() {
                    let q = d.get(i, t).floor_div(&p)?.negated()?;
                    row_add!(i, t, &q);
                }
            }
            for j in t + 1..cols {
                if !d.get(t, j).is_nil() {
                    let q = d.get(t, j).floor_div(&p)?.negated()?;
                    col_add!(j, t, &q);
                }
            }
            // leftover remainders are strictly smaller than the pivot
            let mut next: Option<(bool, usize)> = None;
            let mut next_val: Option<T> = None;
            for i in t + 1..rows {
                let x = d.get(i, t);
                if !x.is_nil() && next_val.as_ref().is_none_or(|b| x.cmp_abs(b) == Ordering::Less) {
                    next = Some((true, i));
                    next_val = Some(x.clone());
                }
            }
            for j in t + 1..cols {
                let x = d.get(t, j);
                if !x.is_nil() && next_val.as_ref().is_none_or(|b| x.cmp_abs(b) == Ordering::Less) {
                    next = Some((false, j));
                    next_val = Some(x.clone());
                }
            }
            match next {
                None => break,
                Some((true, i)) => row_swap!(t, i),
                Some((false, j)) => col_swap!(t, j),
            }
        }
        if d.get(t, t).is_neg() {
            d.neg_row(t)?;
            if track.u {
                u.neg_row(t)?;
            }
        }
        t += 1;
    }
    let rank = t;

    // gcd fixup so that d_i | d_j for i < j
    for i in 0..rank {
        for j in i + 1..rank {
            let a_ = d.get(i, i).clone();
            let b_ = d.get(j, j).clone();
            if b_.multiple_of(&a_) {
                continue;
            }
            let (g, s, tt) = ext_gcd(&a_, &b_)?;
            let bg = b_.exact_div(&g)?;
            let ag = a_.exact_div(&g)?;
            let nbg = bg.negated()?;
            // rows: U2 = [[s, t], [-b/g, a/g]]
            d.mix_rows(i, j, &s, &tt, &nbg, &ag)?;
            if track.u {
                u.mix_rows(i, j, &s, &tt, &nbg, &ag)?;
            }
            // cols: V2 = [[1, -t b/g], [1, s a/g]]
            let x = tt.times(&bg)?.negated()?;
            let y = s.times(&ag)?;
            d.mix_cols(i, j, &T::unit(), &T::unit(), &x, &y)?;
            if track.v {
                v.mix_cols(i, j, &T::unit(), &T::unit(), &x, &y)?;
            }
            if track.v_inv {
                // V2⁻¹ = [[s a/g, t b/g], [-1, 1]]
                let tb = tt.times(&bg)?;
                let m1 = T::unit().negated()?;
                vi.mix_rows(i, j, &y, &tb, &m1, &T::unit())?;
            }
        }
    }
    Some(SnfDecomposition {
        u,
        d,
        v,
        v_inv: vi,
        rank,
    })
}

/// Smith normal form with full transforms.
pub fn smith_normal_form(a: &IntMatrix) -> SnfDecomposition<BigInt> {
    snf_generic(a, Track::ALL).expect("bigint elimination cannot overflow")
}

/// The ring a linear system is read over.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingSpec {
    /// ℤ itself; only meaningful inside this module.
    Integers,
    /// ℤ/m with m ≥ 2.
    Modulus(i64),
}

impl RingSpec {
    pub fn modulus(m: i64) -> Result<Self> {
        if m < 2 {
            return Err(Error::Input(format!("ring modulus must be at least 2, got {m}")));
        }
        Ok(RingSpec::Modulus(m))
    }
}

/// y·a = b over ℤ, generic engine. Outer `None` means overflow.
pub(crate) fn solve_integer_generic<T: Coeff>(a: &Matrix<T>, b: &[T]) -> Option<Option<Vec<T>>> {
    let snf = snf_generic(
        a,
        Track {
            u: true,
            v: true,
            v_inv: false,
        },
    )?;
    solve_with(&snf, b)
}

fn solve_with<T: Coeff>(snf: &SnfDecomposition<T>, b: &[T]) -> Option<Option<Vec<T>>> {
    let c = snf.v.checked_vec_mul(b)?;
    let rows = snf.u.rows;
    let mut w = vec![T::nil(); rows];
    for (j, cj) in c.iter().enumerate() {
        if j < snf.rank {
            let dj = snf.d.get(j, j);
            if !cj.multiple_of(dj) {
                return Some(None);
            }
            w[j] = cj.exact_div(dj)?;
        } else if !cj.is_nil() {
            return Some(None);
        }
    }
    Some(Some(snf.u.checked_vec_mul(&w)?))
}

fn solvable_with<T: Coeff>(snf: &SnfDecomposition<T>, b: &[T]) -> Option<bool> {
    let c = snf.v.checked_vec_mul(b)?;
    Some(c.iter().enumerate().all(|(j, cj)| {
        if j < snf.rank {
            cj.multiple_of(snf.d.get(j, j))
        } else {
            cj.is_nil()
        }
    }))
}

/// Solves `x·a ≡ b` over `ring`.
///
/// With `row_moduli`, variable `i` ranges over the cyclic subgroup of order
/// `row_moduli[i]` of ℤ/m, i.e. `x_i = (m / r_i)·t_i`; the returned `x` is in
/// those terms, reduced mod m.
pub fn solve_linear(
    a: &IntMatrix,
    b: &[BigInt],
    ring: &RingSpec,
    row_moduli: Option<&[BigInt]>,
) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.cols {
        return Err(Error::Dimension(format!(
            "right-hand side has {} entries, matrix has {} columns",
            b.len(),
            a.cols
        )));
    }
    let m = match ring {
        RingSpec::Integers => {
            if row_moduli.is_some() {
                return Err(Error::Input("row moduli need a modular ring".into()));
            }
            return Ok(solve_integer_generic(a, b).expect("no overflow"));
        }
        RingSpec::Modulus(m) => BigInt::from(*m),
    };
    let n = a.rows;
    let scale: Vec<BigInt> = match row_moduli {
        None => vec![BigInt::from(1); n],
        Some(r) => {
            if r.len() != n {
                return Err(Error::Dimension(format!("{} row moduli for {} variables", r.len(), n)));
            }
            r.iter()
                .map(|ri| {
                    if ri <= &BigInt::from(0) || !m.multiple_of(ri) {
                        Err(Error::Input(format!("row modulus {ri} does not divide {m}")))
                    } else {
                        Ok(&m / ri)
                    }
                })
                .collect::<Result<_>>()?
        }
    };
    // [diag(scale)·a ; m·I]
    let cols = a.cols;
    let mut aug = Matrix::<BigInt>::zeros(n + cols, cols);
    for i in 0..n {
        for j in 0..cols {
            aug.set(i, j, &scale[i] * a.get(i, j));
        }
    }
    for j in 0..cols {
        aug.set(n + j, j, m.clone());
    }
    let Some(y) = solve_integer_generic(&aug, b).expect("no overflow") else {
        return Ok(None);
    };
    Ok(Some((0..n).map(|i| (&scale[i] * &y[i]).mod_floor(&m)).collect()))
}

/// Solver for many right-hand sides against one `i64` matrix, with an exact
/// `BigInt` fallback. Solutions are reported reduced modulo per-variable moduli.
pub(crate) enum SmallSolver {
    Small(SnfDecomposition<i64>),
    Big(SnfDecomposition<BigInt>),
}

impl SmallSolver {
    pub fn new(a: &Matrix<i64>, want_u: bool) -> Self {
        let track = Track {
            u: want_u,
            v: true,
            v_inv: false,
        };
        match snf_generic(a, track) {
            Some(s) => SmallSolver::Small(s),
            None => SmallSolver::Big(snf_generic(&a.to_big(), track).expect("no overflow")),
        }
    }

    pub fn solvable(&self, b: &[i64]) -> bool {
        match self {
            SmallSolver::Small(s) => match solvable_with(s, b) {
                Some(r) => r,
                None => {
                    let bb: Vec<BigInt> = b.iter().map(|&x| BigInt::from(x)).collect();
                    solvable_with(&big_of(s), &bb).expect("no overflow")
                }
            },
            SmallSolver::Big(s) => {
                let bb: Vec<BigInt> = b.iter().map(|&x| BigInt::from(x)).collect();
                solvable_with(s, &bb).expect("no overflow")
            }
        }
    }

    /// First `moduli.len()` coordinates of a solution, each reduced mod its modulus.
    pub fn solve(&self, b: &[i64], moduli: &[i64]) -> Option<Vec<i64>> {
        let reduce_big = |y: Vec<BigInt>| -> Vec<i64> { moduli.iter().zip(y).map(|(&n, v)| v.rem_i64(n)).collect() };
        let bb = || b.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        match self {
            SmallSolver::Small(s) => match solve_with(s, b) {
                Some(r) => r.map(|y| moduli.iter().zip(y).map(|(&n, v)| v.rem_euclid(n)).collect()),
                None => solve_with(&big_of(s), &bb()).expect("no overflow").map(reduce_big),
            },
            SmallSolver::Big(s) => solve_with(s, &bb()).expect("no overflow").map(reduce_big),
        }
    }
}

fn big_of(s: &SnfDecomposition<i64>) -> SnfDecomposition<BigInt> {
    SnfDecomposition {
        u: s.u.to_big(),
        d: s.d.to_big(),
        v: s.v.to_big(),
        v_inv: s.v_inv.to_big(),
        rank: s.rank,
    }
}

/// SNF of an `i64` matrix with all transforms, falling back to `BigInt`.
pub(crate) fn snf_small_or_big(
    a: &Matrix<i64>,
) -> std::result::Result<SnfDecomposition<i64>, SnfDecomposition<BigInt>> {
    match snf_generic(a, Track::ALL) {
        Some(s) => Ok(s),
        None => Err(snf_generic(&a.to_big(), Track::ALL).expect("no overflow")),
    }
}

/// Rows of `u` from index `rank` on: a basis of the integer left kernel of `a`.
/// Each vector is truncated to the first `moduli.len()` entries, reduced mod those.
pub(crate) fn left_kernel_reduced(a: &Matrix<i64>, moduli: &[i64]) -> Vec<Vec<i64>> {
    let track = Track {
        u: true,
        v: false,
        v_inv: false,
    };
    let reduce = |row: &[i64]| -> Vec<i64> { moduli.iter().zip(row).map(|(&n, &v)| v.rem_euclid(n)).collect() };
    match snf_generic(a, track) {
        Some(s) => (s.rank..a.rows).map(|i| reduce(s.u.row(i))).collect(),
        None => {
            let s = snf_generic(&a.to_big(), track).expect("no overflow");
            (s.rank..a.rows)
                .map(|i| moduli.iter().zip(s.u.row(i)).map(|(&n, v)| v.rem_i64(n)).collect())
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows).unwrap()
    }

    fn det(m: &IntMatrix) -> BigInt {
        // Bareiss-free cofactor expansion, fine for tiny matrices
        let n = m.rows();
        if n == 0 {
            return BigInt::from(1);
        }
        if n == 1 {
            return m.get(0, 0).clone();
        }
        let mut total = BigInt::from(0);
        for c in 0..n {
            let minor_rows: Vec<Vec<BigInt>> = (1..n)
                .map(|r| (0..n).filter(|&k| k != c).map(|k| m.get(r, k).clone()).collect())
                .collect();
            let minor = IntMatrix::from_rows(minor_rows, 0).unwrap();
            let term = m.get(0, c) * det(&minor);
            if c % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    fn check_snf(a: &IntMatrix) -> SnfDecomposition {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(a.cols()));
        assert_eq!(det(&s.u).magnitude(), BigInt::from(1).magnitude());
        assert_eq!(det(&s.v).magnitude(), BigInt::from(1).magnitude());
        let diag = s.diagonal();
        for r in 0..s.d.rows() {
            for c in 0..s.d.cols() {
                if r != c {
                    assert!(Zero::is_zero(s.d.get(r, c)));
                }
            }
        }
        for w in diag.windows(2) {
            assert!(!Signed::is_negative(&w[0]));
            assert!(w[1].multiple_of(&w[0]), "{diag:?}");
        }
        s
    }

    #[test]
    fn snf_two_by_two() {
        let s = check_snf(&big(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn snf_identity_and_zero() {
        let s = check_snf(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
        let z = IntMatrix::zeros(2, 3);
        let s = check_snf(&z);
        assert!(s.d.is_zero());
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn snf_needs_gcd_fixup() {
        let s = check_snf(&big(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn snf_i64_falls_back_on_overflow() {
        let a = Matrix::from_rows(vec![vec![i64::MAX, 3], vec![5, i64::MAX - 1]], 2).unwrap();
        let s = snf_small_or_big(&a);
        let s = s.expect_err("this matrix should overflow i64 elimination");
        assert_eq!(s.u.mul(&a.to_big()).mul(&s.v), s.d);
    }

    #[test]
    fn solve_linear_examples() {
        let a = big(&[vec![2]]);
        let ring = RingSpec::Modulus(4);
        let x = solve_linear(&a, &[BigInt::from(2)], &ring, Some(&[BigInt::from(4)]))
            .unwrap()
            .unwrap();
        assert!(x == vec![BigInt::from(1)] || x == vec![BigInt::from(3)]);
        let none = solve_linear(&a, &[BigInt::from(2)], &ring, Some(&[BigInt::from(2)])).unwrap();
        assert!(none.is_none());
        let zero = solve_linear(&a, &[BigInt::from(0)], &ring, None).unwrap().unwrap();
        assert_eq!(zero, vec![BigInt::from(0)]);
    }

    #[test]
    fn solve_linear_rejects_bad_input() {
        let a = big(&[vec![2, 1]]);
        assert!(solve_linear(&a, &[BigInt::from(1)], &RingSpec::Modulus(4), None).is_err());
        assert!(solve_linear(
            &big(&[vec![2]]),
            &[BigInt::from(1)],
            &RingSpec::Integers,
            Some(&[BigInt::from(1)])
        )
        .is_err());
    }

    fn brute_force(a: &[Vec<i64>], b: &[i64], m: i64, moduli: &[i64]) -> bool {
        let n = a.len();
        let cols = b.len();
        let sizes: Vec<i64> = moduli.to_vec();
        let total: i64 = sizes.iter().product();
        for mut idx in 0..total {
            let mut x = vec![0i64; n];
            for i in (0..n).rev() {
                x[i] = (idx % sizes[i]) * (m / moduli[i]);
                idx /= sizes[i];
            }
            let ok = (0..cols).all(|j| {
                let s: i64 = (0..n).map(|i| x[i] * a[i][j]).sum();
                (s - b[j]).rem_euclid(m) == 0
            });
            if ok {
                return true;
            }
        }
        false
    }

    proptest! {
        #[test]
        fn snf_invariants(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-20i64..=20, 16)) {
            let data: Vec<BigInt> = seed.iter().take(rows * cols).map(|&v| BigInt::from(v)).collect();
            let a = IntMatrix::from_vec(rows, cols, data).unwrap();
            let s = check_snf(&a);
            let t = check_snf(&a.transpose());
            let mut d1 = s.diagonal();
            let mut d2 = t.diagonal();
            d1.sort();
            d2.sort();
            prop_assert_eq!(d1, d2);
        }

        #[test]
        fn solve_matches_enumeration(
            m in prop::sample::select(vec![4i64, 6, 8, 12]),
            n in 1usize..4,
            cols in 1usize..3,
            entries in proptest::collection::vec(0i64..12, 6),
            rhs in proptest::collection::vec(0i64..12, 2),
            pick in proptest::collection::vec(0usize..6, 3),
        ) {
            let divs: Vec<i64> = (1..=m).filter(|d| m % d == 0).collect();
            let moduli: Vec<i64> = (0..n).map(|i| divs[pick[i] % divs.len()]).collect();
            let a: Vec<Vec<i64>> = (0..n).map(|i| (0..cols).map(|j| entries[i * 2 + j] % m).collect()).collect();
            let b: Vec<i64> = rhs.iter().take(cols).map(|v| v % m).collect();
            let expected = brute_force(&a, &b, m, &moduli);
            let bm = big(&a);
            let bb: Vec<BigInt> = b.iter().map(|&v| BigInt::from(v)).collect();
            let bmod: Vec<BigInt> = moduli.iter().map(|&v| BigInt::from(v)).collect();
            let got = solve_linear(&bm, &bb, &RingSpec::Modulus(m), Some(&bmod)).unwrap();
            prop_assert_eq!(got.is_some(), expected);
            if let Some(x) = got {
                for j in 0..cols {
                    let s: BigInt = (0..n).map(|i| &x[i] * BigInt::from(a[i][j])).sum();
                    prop_assert!((s - BigInt::from(b[j])).mod_floor(&BigInt::from(m)).is_nil());
                }
                for i in 0..n {
                    prop_assert!(Coeff::multiple_of(&x[i], &BigInt::from(m / moduli[i])));
                }
            }
        }
    }
}
