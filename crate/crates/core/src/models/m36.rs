use serde::{Deserialize, Serialize};

use super::{check_shape, LEVEL_TOL};
use crate::error::{Error, Result};
use crate::ga::{Multivector, Rotor};

const E12: usize = 0b011;
const E13: usize = 0b101;
const E23: usize = 0b110;

/// Point `x + z` of the `(3,6)` group.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Model36Point(Multivector);

impl Model36Point {
    pub fn new(q: Multivector) -> Result<Self> {
        check_shape(&q, 3)?;
        Ok(Self(q.grade_part(1) + q.grade_part(2)))
    }

    pub fn origin() -> Self {
        Self(Multivector::zero(3))
    }

    /// From coordinates `(x1, x2, x3)` and `(z1, z2, z3)`.
    pub fn from_coords(x: [f64; 3], z: [f64; 3]) -> Self {
        let mut q = Multivector::vector(3, &x);
        q.set(E23, z[0]);
        q.set(E13, -z[1]);
        q.set(E12, z[2]);
        Self(q)
    }

    /// `(x1, x2, x3, z1, z2, z3)`.
    pub fn coords(&self) -> [f64; 6] {
        let q = &self.0;
        [
            q.get(0b001),
            q.get(0b010),
            q.get(0b100),
            q.get(E23),
            -q.get(E13),
            q.get(E12),
        ]
    }

    pub fn as_multivector(&self) -> &Multivector {
        &self.0
    }

    pub fn x(&self) -> Multivector {
        self.0.grade_part(1)
    }

    pub fn z(&self) -> Multivector {
        self.0.grade_part(2)
    }

    /// Group law `(x, z)(x', z') = (x + x', z + z' + ½ x∧x')`.
    pub fn product(&self, other: &Self) -> Self {
        let (x, xp) = (self.x(), other.x());
        Self(x + xp + self.z() + other.z() + 0.5 * (x ^ xp))
    }

    pub fn inverse(&self) -> Self {
        Self(-self.0)
    }

    pub fn invariants(&self) -> Invariants36 {
        let (x, z) = (self.x(), self.z());
        Invariants36 {
            xx: (x | x).scalar_part(),
            zz: (z | z).scalar_part(),
            xz_star: (x ^ z).dual().scalar_part(),
        }
    }

    /// `(x, z) ↦ (R x R̃, R z R̃)`.
    pub fn act(&self, rotor: &Rotor) -> Result<Self> {
        if rotor.dim() != 3 {
            return Err(Error::DimensionMismatch {
                left: 3,
                right: rotor.dim(),
            });
        }
        let q = rotor.sandwich(&self.0);
        Ok(Self(q.grade_part(1) + q.grade_part(2)))
    }
}

/// `(x·x, z·z, (x∧z)*)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Invariants36 {
    pub xx: f64,
    pub zz: f64,
    pub xz_star: f64,
}

impl Invariants36 {
    pub fn to_array(&self) -> [f64; 3] {
        [self.xx, self.zz, self.xz_star]
    }
}

/// Constants of the representative geodesic: frequency `k`, amplitude `d`,
/// drift `c3`, with `d² + c3² = 1`. `k = 0` is the straight line
/// `x = t (d e2 + c3 e3)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicParams36 {
    pub k: f64,
    pub d: f64,
    pub c3: f64,
    pub t_final: f64,
}

impl GeodesicParams36 {
    pub fn level_residual(&self) -> f64 {
        self.d * self.d + self.c3 * self.c3 - 1.0
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.k, self.d, self.c3, self.t_final];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if self.k < 0.0 {
            return Err(Error::InvalidParams(format!("K = {} must be >= 0", self.k)));
        }
        if self.k > 0.0 && self.d <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "D = {} must be > 0 (D = 0 is a constant control)",
                self.d
            )));
        }
        if self.t_final <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "t_final = {} must be > 0",
                self.t_final
            )));
        }
        let level = self.level_residual();
        if level.abs() > LEVEL_TOL {
            return Err(Error::InvalidParams(format!(
                "D^2 + C3^2 - 1 = {level:e}"
            )));
        }
        Ok(())
    }
}

/// Closed-form representative geodesic through the origin.
pub fn representative_geodesic_36(p: &GeodesicParams36, t: f64) -> Model36Point {
    Model36Point(geodesic_36(p.k, p.d, p.c3, t))
}

pub(crate) fn geodesic_36(k: f64, d: f64, c3: f64, t: f64) -> Multivector {
    if k == 0.0 {
        return Multivector::vector(3, &[0.0, d * t, c3 * t]);
    }
    let kt = k * t;
    let (s, c) = kt.sin_cos();
    let a = d / k;
    let b = c3 * d / (2.0 * k * k);
    let mut q = Multivector::vector(3, &[a * (1.0 - c), a * s, c3 * t]);
    q.set(E12, -d * d / (2.0 * k * k) * (kt - s));
    // stored on e1∧e3, the opposite orientation of e3∧e1
    q.set(E13, b * (kt - 2.0 * s + kt * c));
    q.set(E23, b * (2.0 - kt * s - 2.0 * c));
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn target() -> Model36Point {
        Model36Point::from_coords([2.0, -1.0, 3.0], [-2.0, 2.0, 1.0])
    }

    #[test]
    fn coordinate_embedding() {
        let q = target();
        let expected = Multivector::vector(3, &[2.0, -1.0, 3.0])
            + Multivector::blade(3, &[1, 2])
            - 2.0 * Multivector::blade(3, &[1, 3])
            - 2.0 * Multivector::blade(3, &[2, 3]);
        assert_eq!(*q.as_multivector(), expected);
        assert_eq!(q.coords(), [2.0, -1.0, 3.0, -2.0, 2.0, 1.0]);
    }

    #[test]
    fn worked_target_invariants() {
        let inv = target().invariants();
        assert_eq!(inv.to_array(), [14.0, -9.0, 3.0]);
        assert_eq!(Model36Point::origin().invariants().to_array(), [0.0; 3]);
    }

    #[test]
    fn group_identity_and_inverse() {
        let q = target();
        assert_eq!(Model36Point::origin().product(&q), q);
        assert_eq!(q.product(&Model36Point::origin()), q);
        assert_eq!(q.product(&q.inverse()), Model36Point::origin());
    }

    #[test]
    fn group_product_basis_vectors() {
        let p = Model36Point::from_coords([1.0, 0.0, 0.0], [0.0; 3]);
        let q = Model36Point::from_coords([0.0, 1.0, 0.0], [0.0; 3]);
        // ½ e1 × e2 = ½ e3 in z coordinates
        assert_eq!(p.product(&q).coords(), [1.0, 1.0, 0.0, 0.0, 0.0, 0.5]);
    }

    #[test]
    fn rejects_stray_grades() {
        let q = Multivector::scalar(3, 1.0) + Multivector::e(3, 1);
        assert!(matches!(Model36Point::new(q), Err(Error::InvalidPoint(_))));
        assert!(Model36Point::new(Multivector::e(4, 1)).is_err());
    }

    #[test]
    fn geodesic_starts_at_origin() {
        let p = GeodesicParams36 { k: 1.3, d: 0.6, c3: 0.8, t_final: 2.0 };
        assert_eq!(representative_geodesic_36(&p, 0.0), Model36Point::origin());
        let line = GeodesicParams36 { k: 0.0, d: 0.6, c3: 0.8, t_final: 2.0 };
        assert_eq!(representative_geodesic_36(&line, 0.0), Model36Point::origin());
        assert_eq!(
            representative_geodesic_36(&line, 2.0).coords(),
            [0.0, 1.2, 1.6, 0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn params_validation() {
        let ok = GeodesicParams36 { k: 1.0, d: 0.6, c3: 0.8, t_final: 1.0 };
        assert!(ok.validate().is_ok());
        assert!(GeodesicParams36 { d: 0.7, ..ok }.validate().is_err());
        assert!(GeodesicParams36 { k: -1.0, ..ok }.validate().is_err());
        assert!(GeodesicParams36 { t_final: 0.0, ..ok }.validate().is_err());
        assert!(GeodesicParams36 { d: 0.0, c3: 1.0, ..ok }.validate().is_err());
        assert!(GeodesicParams36 { k: 0.0, d: 0.0, c3: 1.0, ..ok }.validate().is_ok());
    }
}
