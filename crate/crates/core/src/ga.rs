//! Dense geometric algebra over a positive-definite `R^m`, `m <= 6`.
//!
//! A [`Multivector`] stores all `2^m` coefficients, indexed by basis-blade
//! bitmask: bit `i` set means `e_{i+1}` is a factor, and the blade is taken
//! with its factors in ascending order. So index `0b011` is `e1∧e2` and
//! `0b101` is `e1∧e3`.

use std::fmt;
use std::ops::{Add, AddAssign, BitOr, BitXor, Div, Mul, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 6;
const MAX_BLADES: usize = 1 << MAX_DIM;

/// Threshold below which a norm is treated as zero.
pub const EPS: f64 = 1e-12;

/// Sign picked up when reordering the concatenation of blades `a` and `b`
/// into ascending order.
fn reorder_sign(a: usize, b: usize) -> f64 {
    let mut a = a >> 1;
    let mut swaps = 0;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn sign_table() -> &'static [[f64; MAX_BLADES]; MAX_BLADES] {
    static TABLE: OnceLock<Box<[[f64; MAX_BLADES]; MAX_BLADES]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Box::new([[0.0; MAX_BLADES]; MAX_BLADES]);
        for (a, row) in t.iter_mut().enumerate() {
            for (b, s) in row.iter_mut().enumerate() {
                *s = reorder_sign(a, b);
            }
        }
        t
    })
}

#[inline]
pub fn grade_of(blade: usize) -> usize {
    blade.count_ones() as usize
}

/// Element of `G_m`.
#[derive(Clone, Copy, PartialEq)]
pub struct Multivector {
    dim: usize,
    coeffs: [f64; MAX_BLADES],
}

impl Multivector {
    /// Zero element of `G_dim`.
    ///
    /// Panics if `dim` is 0 or larger than [`MAX_DIM`]; use
    /// [`Multivector::from_coeffs`] for untrusted input.
    pub fn zero(dim: usize) -> Self {
        assert!(
            (1..=MAX_DIM).contains(&dim),
            "unsupported algebra dimension {dim}"
        );
        Self {
            dim,
            coeffs: [0.0; MAX_BLADES],
        }
    }

    pub fn from_coeffs(dim: usize, coeffs: &[f64]) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if coeffs.len() != 1 << dim {
            return Err(Error::CoefficientCount {
                expected: 1 << dim,
                got: coeffs.len(),
            });
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut mv = Self::zero(dim);
        mv.coeffs[..coeffs.len()].copy_from_slice(coeffs);
        Ok(mv)
    }

    pub fn scalar(dim: usize, s: f64) -> Self {
        let mut mv = Self::zero(dim);
        mv.coeffs[0] = s;
        mv
    }

    /// Basis vector `e_i`, 1-based.
    pub fn e(dim: usize, i: usize) -> Self {
        assert!((1..=dim).contains(&i), "basis index {i} out of range");
        let mut mv = Self::zero(dim);
        mv.coeffs[1 << (i - 1)] = 1.0;
        mv
    }

    /// Blade `e_{i1} ∧ e_{i2} ∧ ...` from 1-based indices in any order.
    /// Repeated indices give zero.
    pub fn blade(dim: usize, indices: &[usize]) -> Self {
        indices
            .iter()
            .fold(Self::scalar(dim, 1.0), |acc, &i| acc ^ Self::e(dim, i))
    }

    pub fn vector(dim: usize, components: &[f64]) -> Self {
        assert_eq!(components.len(), dim, "vector needs {dim} components");
        let mut mv = Self::zero(dim);
        for (i, c) in components.iter().enumerate() {
            mv.coeffs[1 << i] = *c;
        }
        mv
    }

    pub fn pseudoscalar(dim: usize) -> Self {
        let mut mv = Self::zero(dim);
        mv.coeffs[(1 << dim) - 1] = 1.0;
        mv
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        1 << self.dim
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs[..self.len()]
    }

    pub fn get(&self, blade: usize) -> f64 {
        self.coeffs[blade]
    }

    pub fn set(&mut self, blade: usize, value: f64) {
        assert!(blade < self.len(), "blade index {blade} out of range");
        self.coeffs[blade] = value;
    }

    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    /// Components of the grade-1 part, `[x_1, ..., x_m]`.
    pub fn vector_part(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.coeffs[1 << i]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|c| c.is_finite())
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            })
        } else {
            Ok(())
        }
    }

    /// Shared kernel of the three products: accumulate `a_i b_j` into blade
    /// `i ^ j` for every pair of blades accepted by `keep`.
    fn product_by(&self, other: &Self, keep: impl Fn(usize, usize) -> bool) -> Self {
        let n = self.len();
        let signs = sign_table();
        let mut out = Self::zero(self.dim);
        for i in 0..n {
            let a = self.coeffs[i];
            if a == 0.0 {
                continue;
            }
            for j in 0..n {
                let b = other.coeffs[j];
                if b == 0.0 || !keep(i, j) {
                    continue;
                }
                out.coeffs[i ^ j] += signs[i][j] * a * b;
            }
        }
        out
    }

    pub fn geometric_product(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.product_by(other, |_, _| true))
    }

    pub fn outer_product(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.product_by(other, |i, j| i & j == 0))
    }

    /// Left contraction. On blades, `e_A · e_B` is the grade `|B|-|A|` part of
    /// `e_A e_B` when `A ⊆ B` and zero otherwise, except that a scalar
    /// contracts to zero onto any blade of positive grade (`1 · e_A = 0`).
    pub fn inner_product(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.product_by(other, |i, j| i & j == i && (i != 0 || j == 0)))
    }

    /// `A* = A I`.
    pub fn dual(&self) -> Self {
        *self * Self::pseudoscalar(self.dim)
    }

    pub fn reverse(&self) -> Self {
        let mut out = *self;
        for (blade, c) in out.coeffs[..self.len()].iter_mut().enumerate() {
            let r = grade_of(blade);
            if (r * (r.saturating_sub(1)) / 2) % 2 == 1 {
                *c = -*c;
            }
        }
        out
    }

    pub fn grade_project(&self, r: usize) -> Result<Self> {
        if r > self.dim {
            return Err(Error::GradeOutOfRange {
                grade: r,
                dim: self.dim,
            });
        }
        Ok(self.grade_part(r))
    }

    /// Unchecked grade projection; grades above `dim` give zero.
    pub(crate) fn grade_part(&self, r: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for blade in 0..self.len() {
            if grade_of(blade) == r {
                out.coeffs[blade] = self.coeffs[blade];
            }
        }
        out
    }

    /// Grades with a coefficient above `tol` in magnitude.
    pub fn grades(&self, tol: f64) -> Vec<usize> {
        let mut present = vec![false; self.dim + 1];
        for (blade, c) in self.coeffs().iter().enumerate() {
            if c.abs() > tol {
                present[grade_of(blade)] = true;
            }
        }
        (0..=self.dim).filter(|&r| present[r]).collect()
    }

    pub fn norm_squared(&self) -> f64 {
        self.coeffs().iter().map(|c| c * c).sum()
    }

    /// Euclidean norm on the orthonormal blade basis; equals
    /// `sqrt(A · Ã)` on blades.
    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > EPS) {
            return Err(Error::NearZeroNorm(n));
        }
        Ok(*self / n)
    }

    /// Coefficientwise ∞-norm of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.coeffs()
            .iter()
            .zip(other.coeffs())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs().iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// Blade name such as `"e13"`, or `"1"` for the scalar.
pub fn blade_name(blade: usize) -> String {
    if blade == 0 {
        return "1".to_string();
    }
    let digits: String = (0..MAX_DIM)
        .filter(|i| blade >> i & 1 == 1)
        .map(|i| char::from(b'1' + i as u8))
        .collect();
    format!("e{digits}")
}

/// Parses `"e13"`, `"e31"`, `"1"`, ... into `(bitmask, sign)`. Out-of-order
/// names carry the permutation sign, so `"e31"` is `(0b101, -1.0)`.
pub fn parse_blade_name(name: &str, dim: usize) -> Result<(usize, f64)> {
    if name == "1" || name == "s" {
        return Ok((0, 1.0));
    }
    let digits = name
        .strip_prefix('e')
        .filter(|d| !d.is_empty())
        .ok_or_else(|| Error::Parse(format!("bad blade name {name:?}")))?;
    let mut acc = Multivector::scalar(dim, 1.0);
    for ch in digits.chars() {
        let i = ch
            .to_digit(10)
            .map(|d| d as usize)
            .filter(|d| (1..=dim).contains(d))
            .ok_or_else(|| Error::Parse(format!("blade {name:?} is not in G_{dim}")))?;
        acc = acc ^ Multivector::e(dim, i);
    }
    acc.coeffs()
        .iter()
        .enumerate()
        .find(|(_, c)| **c != 0.0)
        .map(|(blade, c)| (blade, *c))
        .ok_or_else(|| Error::Parse(format!("blade {name:?} repeats an index")))
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G{}[{}]", self.dim, self)
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&b| (grade_of(b), b));
        let mut first = true;
        for blade in order {
            let c = self.coeffs[blade];
            if c == 0.0 {
                continue;
            }
            let (sign, mag) = if c < 0.0 { ("-", -c) } else { ("+", c) };
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match f.precision() {
                Some(p) => write!(f, "{mag:.p$}")?,
                None => write!(f, "{mag}")?,
            }
            if blade != 0 {
                write!(f, "{}", blade_name(blade))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for Multivector {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for Multivector {
    fn add_assign(&mut self, rhs: Self) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a += b;
        }
    }
}

impl Sub for Multivector {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl SubAssign for Multivector {
    fn sub_assign(&mut self, rhs: Self) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a -= b;
        }
    }
}

impl Neg for Multivector {
    type Output = Self;
    fn neg(mut self) -> Self {
        self.coeffs.iter_mut().for_each(|c| *c = -*c);
        self
    }
}

impl Mul<f64> for Multivector {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        self.coeffs.iter_mut().for_each(|c| *c *= rhs);
        self
    }
}

impl Mul<Multivector> for f64 {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        rhs * self
    }
}

impl Div<f64> for Multivector {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        self * (1.0 / rhs)
    }
}

/// Geometric product. Panics on dimension mismatch.
impl Mul for Multivector {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.geometric_product(&rhs).expect("geometric product")
    }
}

/// Outer product. Panics on dimension mismatch.
impl BitXor for Multivector {
    type Output = Self;
    fn bitxor(self, rhs: Self) -> Self {
        self.outer_product(&rhs).expect("outer product")
    }
}

/// Inner product (left contraction). Panics on dimension mismatch.
impl BitOr for Multivector {
    type Output = Self;
    fn bitor(self, rhs: Self) -> Self {
        self.inner_product(&rhs).expect("inner product")
    }
}

/// Even, unit multivector acting on `G_m` by `a ↦ R a R̃`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotor(Multivector);

impl Rotor {
    /// Accepted deviation of `R R̃` from 1 when validating a rotor.
    pub const UNIT_TOL: f64 = 1e-10;

    pub fn identity(dim: usize) -> Self {
        Self(Multivector::scalar(dim, 1.0))
    }

    /// Validates an existing multivector as a rotor.
    pub fn new(mv: Multivector) -> Result<Self> {
        if !mv.is_finite() {
            return Err(Error::NonFinite);
        }
        let odd = (0..mv.len())
            .filter(|&b| grade_of(b) % 2 == 1)
            .map(|b| mv.get(b).abs())
            .fold(0.0, f64::max);
        if odd > Self::UNIT_TOL {
            return Err(Error::NotARotor(format!("odd-grade part of size {odd:e}")));
        }
        let rotor = Self(mv);
        let err = rotor.unitality_error();
        if err > Self::UNIT_TOL {
            return Err(Error::NotARotor(format!("R R~ deviates from 1 by {err:e}")));
        }
        Ok(rotor)
    }

    /// Scales an even multivector to unit norm and validates it.
    pub fn normalized(mv: Multivector) -> Result<Self> {
        Self::new(mv.normalize()?)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_multivector(&self) -> &Multivector {
        &self.0
    }

    pub fn reverse(&self) -> Self {
        Self(self.0.reverse())
    }

    /// ∞-norm of `R R̃ - 1`.
    pub fn unitality_error(&self) -> f64 {
        let rr = self.0 * self.0.reverse();
        rr.max_abs_diff(&Multivector::scalar(self.dim(), 1.0))
    }

    /// `R a R̃`. Panics on dimension mismatch.
    pub fn sandwich(&self, a: &Multivector) -> Multivector {
        self.0 * *a * self.0.reverse()
    }

    /// Rotor applying `other` first, then `self` (`self · other`),
    /// rescaled to unit norm.
    pub fn compose(&self, other: &Rotor) -> Rotor {
        let prod = self.0 * other.0;
        Rotor(prod / prod.norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn e(i: usize) -> Multivector {
        Multivector::e(3, i)
    }

    #[test]
    fn basis_products() {
        assert_eq!(e(1) * e(1), Multivector::scalar(3, 1.0));
        assert_eq!(e(1) * e(2), Multivector::blade(3, &[1, 2]));
        assert_eq!(e(2) * e(1), -Multivector::blade(3, &[1, 2]));
    }

    #[test]
    fn rotor_remark_example() {
        // (1 + e2 e1) e1 (1 + e1 e2) = (2 + 2cos(pi/2)) e2
        let one = Multivector::scalar(3, 1.0);
        let lhs = (one + e(2) * e(1)) * e(1) * (one + e(1) * e(2));
        assert!(lhs.max_abs_diff(&(2.0 * e(2))) < 1e-15);
    }

    #[test]
    fn outer_examples() {
        assert_eq!(e(1) ^ e(1), Multivector::zero(3));
        assert_eq!(e(1) ^ (e(2) ^ e(3)), Multivector::pseudoscalar(3));
        let a = 2.0 * e(1) - e(2);
        let b = e(1) + 3.0 * e(3);
        // hand expansion: e1∧e2 + 6 e1∧e3 - 3 e2∧e3
        let expected = Multivector::blade(3, &[1, 2]) + 6.0 * Multivector::blade(3, &[1, 3])
            - 3.0 * Multivector::blade(3, &[2, 3]);
        assert!((a ^ b).max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn inner_examples() {
        assert_eq!(e(1) | e(1), Multivector::scalar(3, 1.0));
        assert_eq!(e(1) | Multivector::blade(3, &[1, 2]), e(2));
        assert_eq!(e(2) | Multivector::blade(3, &[1, 2]), -e(1));
        assert_eq!(e(3) | Multivector::blade(3, &[1, 2]), Multivector::zero(3));
        // scalar onto positive grade vanishes; scalar onto scalar multiplies
        assert_eq!(Multivector::scalar(3, 2.0) | e(1), Multivector::zero(3));
        assert_eq!(
            Multivector::scalar(3, 2.0) | Multivector::scalar(3, 3.0),
            Multivector::scalar(3, 6.0)
        );
        // bivector self-contraction is negative
        let b = Multivector::blade(3, &[1, 2]);
        assert_eq!((b | b).scalar_part(), -1.0);
    }

    #[test]
    fn dual_examples() {
        assert_eq!(Multivector::scalar(3, 1.0).dual(), Multivector::pseudoscalar(3));
        assert_eq!(Multivector::blade(3, &[1, 2]).dual(), -e(3));
        // u × v = -(u∧v) I
        assert_eq!(-(e(1) ^ e(2)).dual(), e(3));
    }

    #[test]
    fn reverse_examples() {
        let b = Multivector::blade(3, &[1, 2]);
        assert_eq!(b.reverse(), -b);
        let sv = Multivector::scalar(3, 2.0) + e(1) - 3.0 * e(3);
        assert_eq!(sv.reverse(), sv);
        assert_eq!(Multivector::pseudoscalar(3).reverse(), -Multivector::pseudoscalar(3));
        assert_eq!(Multivector::pseudoscalar(4).reverse(), Multivector::pseudoscalar(4));
    }

    #[test]
    fn norms() {
        assert_abs_diff_eq!((3.0 * e(1)).norm(), 3.0);
        let b = Multivector::blade(3, &[1, 2]) + Multivector::blade(3, &[2, 3]);
        assert_abs_diff_eq!(b.norm(), 2f64.sqrt(), epsilon = 1e-15);
        assert!(matches!(
            Multivector::zero(3).normalize(),
            Err(Error::NearZeroNorm(_))
        ));
        assert_abs_diff_eq!(b.normalize().unwrap().norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn grade_projection() {
        let a = Multivector::scalar(3, 1.0) + e(1) + Multivector::blade(3, &[1, 2]);
        assert_eq!(a.grade_project(1).unwrap(), e(1));
        assert!(matches!(
            a.grade_project(4),
            Err(Error::GradeOutOfRange { grade: 4, dim: 3 })
        ));
        let sum = (0..=3).fold(Multivector::zero(3), |acc, r| {
            acc + a.grade_project(r).unwrap()
        });
        assert_eq!(sum, a);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = Multivector::e(3, 1);
        let b = Multivector::e(4, 1);
        assert!(matches!(
            a.geometric_product(&b),
            Err(Error::DimensionMismatch { left: 3, right: 4 })
        ));
        assert!(a.outer_product(&b).is_err());
        assert!(a.inner_product(&b).is_err());
    }

    #[test]
    fn from_coeffs_validation() {
        assert!(Multivector::from_coeffs(3, &[0.0; 8]).is_ok());
        assert!(matches!(
            Multivector::from_coeffs(3, &[0.0; 7]),
            Err(Error::CoefficientCount { expected: 8, got: 7 })
        ));
        let mut c = [0.0; 8];
        c[3] = f64::NAN;
        assert!(matches!(Multivector::from_coeffs(3, &c), Err(Error::NonFinite)));
        assert!(matches!(
            Multivector::from_coeffs(7, &[0.0; 128]),
            Err(Error::UnsupportedDimension(7))
        ));
    }

    #[test]
    fn blade_names() {
        assert_eq!(blade_name(0b101), "e13");
        assert_eq!(parse_blade_name("e13", 3).unwrap(), (0b101, 1.0));
        assert_eq!(parse_blade_name("e31", 3).unwrap(), (0b101, -1.0));
        assert_eq!(parse_blade_name("e123", 3).unwrap(), (0b111, 1.0));
        assert!(parse_blade_name("e11", 3).is_err());
        assert!(parse_blade_name("e4", 3).is_err());
        assert!(parse_blade_name("x1", 3).is_err());
    }

    #[test]
    fn display() {
        let a = 2.0 * e(1) - e(2) + Multivector::blade(3, &[1, 3]);
        assert_eq!(a.to_string(), "2e1 - 1e2 + 1e13");
        assert_eq!(Multivector::zero(3).to_string(), "0");
    }

    #[test]
    fn rotor_validation() {
        assert!(Rotor::new(e(1)).is_err());
        assert!(Rotor::new(Multivector::scalar(3, 2.0)).is_err());
        let r = Rotor::normalized(Multivector::scalar(3, 1.0) + e(2) * e(1)).unwrap();
        assert!(r.unitality_error() < 1e-15);
        assert!(r.sandwich(&e(1)).max_abs_diff(&e(2)) < 1e-15);
        assert_eq!(Rotor::identity(3).sandwich(&e(2)), e(2));
    }
}
