//! The two step-2 Carnot groups, seen as subsets of `G_3` and `G_4`.
//!
//! * `(3,6)`: points `q = x + z`, `x` a vector and `z` a bivector of `G_3`.
//!   Coordinates `(z1, z2, z3)` embed as `z1 e23 + z2 e31 + z3 e12`, i.e.
//!   `z = z_vec I`, which turns the group law into `z + z' + ½ x∧x'`.
//! * `(4,7)`: points `q = x e1 + ℓ + y` in `G_4` with `ℓ ∈ span(e2, e3, e4)`
//!   and `y = e1∧(y1 e2 + y2 e3 + y3 e4)`.
//!
//! `SO(3)` acts by rotor conjugation; for `(4,7)` only rotors fixing `e1`
//! are admissible.

mod closed_forms;
mod fiber;
mod m36;
mod m47;

pub use closed_forms::{audit_closed_forms, invariant_closed_forms, AuditReport, ComponentAudit};
pub use fiber::{fiber_basis_36, fiber_solution_36, fiber_solution_47, omega_matrix};
pub use m36::{representative_geodesic_36, GeodesicParams36, Invariants36, Model36Point};
pub use m47::{representative_geodesic_47, GeodesicParams47, Invariants47, Model47Point};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ga::{Multivector, Rotor};

/// Tolerance on level conditions and point-shape checks.
pub const LEVEL_TOL: f64 = 1e-9;
/// Largest coefficient allowed on blades a point type does not populate.
pub const SHAPE_TOL: f64 = 1e-12;
/// How far a `(4,7)` rotor may move `e1`.
pub const E1_FIX_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    #[serde(rename = "36")]
    M36,
    #[serde(rename = "47")]
    M47,
}

impl Model {
    /// Dimension of the geometric algebra hosting the model.
    pub fn algebra_dim(self) -> usize {
        match self {
            Model::M36 => 3,
            Model::M47 => 4,
        }
    }

    pub fn coordinate_names(self) -> &'static [&'static str] {
        match self {
            Model::M36 => &["x1", "x2", "x3", "z1", "z2", "z3"],
            Model::M47 => &["x", "l1", "l2", "l3", "y1", "y2", "y3"],
        }
    }

    pub fn invariant_names(self) -> &'static [&'static str] {
        match self {
            Model::M36 => &["x.x", "z.z", "(x^z)*"],
            Model::M47 => &["x", "l.l", "(l.y)e1", "y.y"],
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::M36 => "36",
            Model::M47 => "47",
        })
    }
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().trim_start_matches('(').trim_end_matches(')') {
            "36" | "3,6" | "M36" => Ok(Model::M36),
            "47" | "4,7" | "M47" => Ok(Model::M47),
            other => Err(Error::Parse(format!("unknown model {other:?} (use 36 or 47)"))),
        }
    }
}

/// A point of either group.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Point {
    M36(Model36Point),
    M47(Model47Point),
}

impl Point {
    pub fn from_multivector(model: Model, q: Multivector) -> Result<Self> {
        Ok(match model {
            Model::M36 => Point::M36(Model36Point::new(q)?),
            Model::M47 => Point::M47(Model47Point::new(q)?),
        })
    }

    pub fn model(&self) -> Model {
        match self {
            Point::M36(_) => Model::M36,
            Point::M47(_) => Model::M47,
        }
    }

    pub fn as_multivector(&self) -> &Multivector {
        match self {
            Point::M36(p) => p.as_multivector(),
            Point::M47(p) => p.as_multivector(),
        }
    }

    /// Coordinates in the order of [`Model::coordinate_names`].
    pub fn coords(&self) -> Vec<f64> {
        match self {
            Point::M36(p) => p.coords().to_vec(),
            Point::M47(p) => p.coords().to_vec(),
        }
    }

    pub fn invariants(&self) -> Invariants {
        match self {
            Point::M36(p) => Invariants::M36(p.invariants()),
            Point::M47(p) => Invariants::M47(p.invariants()),
        }
    }

    pub fn act(&self, rotor: &Rotor) -> Result<Self> {
        Ok(match self {
            Point::M36(p) => Point::M36(p.act(rotor)?),
            Point::M47(p) => Point::M47(p.act(rotor)?),
        })
    }
}

/// Moduli-space coordinates of a point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model")]
pub enum Invariants {
    #[serde(rename = "36")]
    M36(Invariants36),
    #[serde(rename = "47")]
    M47(Invariants47),
}

impl Invariants {
    pub fn model(&self) -> Model {
        match self {
            Invariants::M36(_) => Model::M36,
            Invariants::M47(_) => Model::M47,
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        match self {
            Invariants::M36(i) => i.to_array().to_vec(),
            Invariants::M47(i) => i.to_array().to_vec(),
        }
    }

    pub fn from_slice(model: Model, v: &[f64]) -> Result<Self> {
        match (model, v) {
            (Model::M36, &[xx, zz, xz_star]) => Ok(Invariants::M36(Invariants36 { xx, zz, xz_star })),
            (Model::M47, &[x, ll, ly_e1, yy]) => Ok(Invariants::M47(Invariants47 { x, ll, ly_e1, yy })),
            _ => Err(Error::Parse(format!(
                "model {model} expects {} invariants, got {}",
                model.invariant_names().len(),
                v.len()
            ))),
        }
    }

    pub fn max_abs_diff(&self, other: &Invariants) -> f64 {
        self.to_vec()
            .iter()
            .zip(other.to_vec())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Constants of a representative geodesic of either model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model")]
pub enum GeodesicParams {
    #[serde(rename = "36")]
    M36(GeodesicParams36),
    #[serde(rename = "47")]
    M47(GeodesicParams47),
}

impl GeodesicParams {
    pub fn model(&self) -> Model {
        match self {
            GeodesicParams::M36(_) => Model::M36,
            GeodesicParams::M47(_) => Model::M47,
        }
    }

    pub fn t_final(&self) -> f64 {
        match self {
            GeodesicParams::M36(p) => p.t_final,
            GeodesicParams::M47(p) => p.t_final,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GeodesicParams::M36(p) => p.validate(),
            GeodesicParams::M47(p) => p.validate(),
        }
    }

    pub fn level_residual(&self) -> f64 {
        match self {
            GeodesicParams::M36(p) => p.level_residual(),
            GeodesicParams::M47(p) => p.level_residual(),
        }
    }

    pub fn point_at(&self, t: f64) -> Point {
        match self {
            GeodesicParams::M36(p) => Point::M36(representative_geodesic_36(p, t)),
            GeodesicParams::M47(p) => Point::M47(representative_geodesic_47(p, t)),
        }
    }

    pub fn endpoint(&self) -> Point {
        self.point_at(self.t_final())
    }

    /// Unknown vector used by the moduli solver: `(K, D, C3, t)` or
    /// `(K, C1, C2, C, t)`.
    pub fn to_unknowns(&self) -> Vec<f64> {
        match self {
            GeodesicParams::M36(p) => vec![p.k, p.d, p.c3, p.t_final],
            GeodesicParams::M47(p) => vec![p.k, p.c1, p.c2, p.c, p.t_final],
        }
    }

    pub fn from_unknowns(model: Model, u: &[f64]) -> Self {
        match model {
            Model::M36 => GeodesicParams::M36(GeodesicParams36 {
                k: u[0],
                d: u[1],
                c3: u[2],
                t_final: u[3],
            }),
            Model::M47 => GeodesicParams::M47(GeodesicParams47 {
                k: u[0],
                c1: u[1],
                c2: u[2],
                c: u[3],
                t_final: u[4],
            }),
        }
    }
}

/// Checks that `q` lives in `G_dim` and has only grade 1 and 2 content.
fn check_shape(q: &Multivector, dim: usize) -> Result<()> {
    if q.dim() != dim {
        return Err(Error::InvalidPoint(format!(
            "expected an element of G_{dim}, got G_{}",
            q.dim()
        )));
    }
    if !q.is_finite() {
        return Err(Error::NonFinite);
    }
    for r in (0..=dim).filter(|r| *r != 1 && *r != 2) {
        let stray = q.grade_part(r).max_abs();
        if stray > SHAPE_TOL {
            return Err(Error::InvalidPoint(format!(
                "grade-{r} part of size {stray:e}; points carry only grades 1 and 2"
            )));
        }
    }
    Ok(())
}
