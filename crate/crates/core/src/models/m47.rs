use serde::{Deserialize, Serialize};

use super::{check_shape, E1_FIX_TOL, LEVEL_TOL, SHAPE_TOL};
use crate::error::{Error, Result};
use crate::ga::{Multivector, Rotor};

const E1: usize = 0b0001;
/// `e1∧e2`, `e1∧e3`, `e1∧e4`.
const Y_BLADES: [usize; 3] = [0b0011, 0b0101, 0b1001];
/// `e2`, `e3`, `e4`.
const L_BLADES: [usize; 3] = [0b0010, 0b0100, 0b1000];

/// Point `x e1 + ℓ + y` of the `(4,7)` group.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Model47Point(Multivector);

impl Model47Point {
    pub fn new(q: Multivector) -> Result<Self> {
        check_shape(&q, 4)?;
        let bivector = q.grade_part(2);
        for blade in [0b0110usize, 0b1010, 0b1100] {
            if bivector.get(blade).abs() > SHAPE_TOL {
                return Err(Error::InvalidPoint(format!(
                    "bivector part must lie in e1∧span(e2,e3,e4), found {} on blade {}",
                    bivector.get(blade),
                    crate::ga::blade_name(blade)
                )));
            }
        }
        let coords = Self(q).coords();
        Ok(Self::from_coords(
            coords[0],
            [coords[1], coords[2], coords[3]],
            [coords[4], coords[5], coords[6]],
        ))
    }

    pub fn origin() -> Self {
        Self(Multivector::zero(4))
    }

    pub fn from_coords(x: f64, l: [f64; 3], y: [f64; 3]) -> Self {
        let mut q = Multivector::zero(4);
        q.set(E1, x);
        for i in 0..3 {
            q.set(L_BLADES[i], l[i]);
            q.set(Y_BLADES[i], y[i]);
        }
        Self(q)
    }

    /// `(x, l1, l2, l3, y1, y2, y3)`.
    pub fn coords(&self) -> [f64; 7] {
        let q = &self.0;
        [
            q.get(E1),
            q.get(L_BLADES[0]),
            q.get(L_BLADES[1]),
            q.get(L_BLADES[2]),
            q.get(Y_BLADES[0]),
            q.get(Y_BLADES[1]),
            q.get(Y_BLADES[2]),
        ]
    }

    pub fn as_multivector(&self) -> &Multivector {
        &self.0
    }

    pub fn x(&self) -> f64 {
        self.0.get(E1)
    }

    pub fn ell(&self) -> Multivector {
        let mut l = self.0.grade_part(1);
        l.set(E1, 0.0);
        l
    }

    pub fn y(&self) -> Multivector {
        self.0.grade_part(2)
    }

    /// Group law `(x + x', ℓ + ℓ', y + y' + ½ (x e1∧ℓ' − x' e1∧ℓ))`, the law
    /// for which `Y0 = ∂x − ½ ℓ_i ∂y_i` and `Y_i = ∂ℓ_i + ½ x ∂y_i` are
    /// left-invariant.
    pub fn product(&self, other: &Self) -> Self {
        let e1 = Multivector::e(4, 1);
        let twist = 0.5 * (e1 ^ (self.x() * other.ell() - other.x() * self.ell()));
        Self(self.0 + other.0 + twist)
    }

    pub fn inverse(&self) -> Self {
        Self(-self.0)
    }

    pub fn invariants(&self) -> Invariants47 {
        let (l, y) = (self.ell(), self.y());
        Invariants47 {
            x: self.x(),
            ll: (l | l).scalar_part(),
            ly_e1: ((l | y) * Multivector::e(4, 1)).scalar_part(),
            yy: (y | y).scalar_part(),
        }
    }

    /// `(x, ℓ, y) ↦ (x, R ℓ R̃, R y R̃)` for a rotor fixing `e1`.
    pub fn act(&self, rotor: &Rotor) -> Result<Self> {
        if rotor.dim() != 4 {
            return Err(Error::DimensionMismatch {
                left: 4,
                right: rotor.dim(),
            });
        }
        let e1 = Multivector::e(4, 1);
        let moved = rotor.sandwich(&e1).max_abs_diff(&e1);
        if moved > E1_FIX_TOL {
            return Err(Error::RotorDomain(moved));
        }
        let c = Self(rotor.sandwich(&(self.ell() + self.y()))).coords();
        Ok(Self::from_coords(self.x(), [c[1], c[2], c[3]], [c[4], c[5], c[6]]))
    }
}

/// `(x, ℓ·ℓ, (ℓ·y)e1, y·y)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Invariants47 {
    pub x: f64,
    pub ll: f64,
    pub ly_e1: f64,
    pub yy: f64,
}

impl Invariants47 {
    pub fn to_array(&self) -> [f64; 4] {
        [self.x, self.ll, self.ly_e1, self.yy]
    }
}

/// Constants of the representative geodesic, `K²(C1² + C2²) + C² = 1`.
///
/// `k = 0` is the straight line with `h = (c2, c1, c, 0)`; there `(c1, c2)`
/// play the role of `(K C1, K C2)` and the level condition reads
/// `C1² + C2² + C² = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicParams47 {
    pub k: f64,
    pub c1: f64,
    pub c2: f64,
    pub c: f64,
    pub t_final: f64,
}

impl GeodesicParams47 {
    pub fn level_residual(&self) -> f64 {
        let amp = self.c1 * self.c1 + self.c2 * self.c2;
        if self.k == 0.0 {
            amp + self.c * self.c - 1.0
        } else {
            self.k * self.k * amp + self.c * self.c - 1.0
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.k, self.c1, self.c2, self.c, self.t_final];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if self.k < 0.0 {
            return Err(Error::InvalidParams(format!("K = {} must be >= 0", self.k)));
        }
        if self.k > 0.0 && self.c1 == 0.0 && self.c2 == 0.0 {
            return Err(Error::InvalidParams(
                "C1 = C2 = 0 is a constant control".to_string(),
            ));
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
                "level condition off by {level:e}"
            )));
        }
        Ok(())
    }
}

pub fn representative_geodesic_47(p: &GeodesicParams47, t: f64) -> Model47Point {
    Model47Point(geodesic_47(p.k, p.c1, p.c2, p.c, t))
}

pub(crate) fn geodesic_47(k: f64, c1: f64, c2: f64, c: f64, t: f64) -> Multivector {
    let mut q = Multivector::zero(4);
    if k == 0.0 {
        q.set(E1, c2 * t);
        q.set(L_BLADES[0], c1 * t);
        q.set(L_BLADES[1], c * t);
        return q;
    }
    let kt = k * t;
    let (s, co) = kt.sin_cos();
    q.set(E1, c1 * co + c2 * s - c1);
    q.set(L_BLADES[0], c1 * s - c2 * co + c2);
    q.set(L_BLADES[1], c * t);
    q.set(Y_BLADES[0], 0.5 * (c1 * c1 + c2 * c2) * (kt - s));
    q.set(
        Y_BLADES[1],
        c / (2.0 * k) * ((2.0 * c1 - c2 * kt) * s - (c1 * kt + 2.0 * c2) * co + 2.0 * c2 - c1 * kt),
    );
    q
}
