//! Classical Runge–Kutta integration of the coupled base and fiber systems,
//! an independent check on the closed-form geodesics.

use crate::error::{Error, Result};
use crate::models::{
    fiber_solution_36, fiber_solution_47, GeodesicParams, Model, Model36Point, Model47Point,
    Point,
};

/// Initial momentum `h(0)` together with the constant `K`-vector.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberInit {
    pub model: Model,
    pub k: [f64; 3],
    pub h0: Vec<f64>,
}

impl FiberInit {
    pub fn new(model: Model, k: [f64; 3], h0: Vec<f64>) -> Result<Self> {
        let n = match model {
            Model::M36 => 3,
            Model::M47 => 4,
        };
        if h0.len() != n {
            return Err(Error::CoefficientCount {
                expected: n,
                got: h0.len(),
            });
        }
        if k.iter().chain(&h0).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { model, k, h0 })
    }

    /// `h(0)` from the constants of the fiber solution.
    pub fn from_constants(model: Model, k: [f64; 3], c: &[f64]) -> Result<Self> {
        let h0 = match (model, c) {
            (Model::M36, &[c1, c2, c3]) => fiber_solution_36(k, [c1, c2, c3], 0.0).to_vec(),
            (Model::M47, &[c1, c2, c3, c4]) => fiber_solution_47(k, [c1, c2, c3, c4], 0.0).to_vec(),
            _ => {
                return Err(Error::CoefficientCount {
                    expected: model.algebra_dim(),
                    got: c.len(),
                })
            }
        };
        Self::new(model, k, h0)
    }

    /// Fiber data whose trajectory is the representative geodesic of `p`.
    pub fn aligned(p: &GeodesicParams) -> Self {
        match p {
            GeodesicParams::M36(p) => Self {
                model: Model::M36,
                k: [-p.k, 0.0, 0.0],
                h0: vec![0.0, p.d, p.c3],
            },
            GeodesicParams::M47(p) if p.k == 0.0 => Self {
                model: Model::M47,
                k: [0.0; 3],
                h0: vec![p.c2, p.c1, p.c, 0.0],
            },
            GeodesicParams::M47(p) => Self {
                model: Model::M47,
                k: [p.k, 0.0, 0.0],
                h0: vec![p.k * p.c2, p.k * p.c1, p.c, 0.0],
            },
        }
    }

    fn state_len(&self) -> usize {
        match self.model {
            Model::M36 => 9,
            Model::M47 => 11,
        }
    }
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// State `(x, z, h)` for `(3,6)`, `(x, ℓ, y, h0, h̄)` for `(4,7)`.
fn rhs(model: Model, k: [f64; 3], s: &[f64], out: &mut [f64]) {
    let [k1, k2, k3] = k;
    match model {
        Model::M36 => {
            let (x, h) = (&s[0..3], &s[6..9]);
            out[0..3].copy_from_slice(h);
            let c = cross(x, h);
            for i in 0..3 {
                out[3 + i] = 0.5 * c[i];
            }
            // ḣ = −Ω h
            out[6] = -(k1 * h[1] + k2 * h[2]);
            out[7] = k1 * h[0] - k3 * h[2];
            out[8] = k2 * h[0] + k3 * h[1];
        }
        Model::M47 => {
            let x = s[0];
            let l = &s[1..4];
            let h = &s[7..11];
            out[0] = h[0];
            out[1..4].copy_from_slice(&h[1..4]);
            for i in 0..3 {
                out[4 + i] = 0.5 * (x * h[1 + i] - h[0] * l[i]);
            }
            out[7] = -(k1 * h[1] + k2 * h[2] + k3 * h[3]);
            out[8] = k1 * h[0];
            out[9] = k2 * h[0];
            out[10] = k3 * h[0];
        }
    }
}

/// Integrates from the origin to `t_final` in `steps` equal steps.
pub fn rk4_endpoint(init: &FiberInit, t_final: f64, steps: usize) -> Result<Point> {
    if steps == 0 {
        return Err(Error::InvalidParams("steps must be >= 1".to_string()));
    }
    if !t_final.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = init.state_len();
    let mut s = vec![0.0; n];
    s[n - init.h0.len()..].copy_from_slice(&init.h0);
    let dt = t_final / steps as f64;
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    for _ in 0..steps {
        rhs(init.model, init.k, &s, &mut k1);
        for i in 0..n {
            tmp[i] = s[i] + 0.5 * dt * k1[i];
        }
        rhs(init.model, init.k, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = s[i] + 0.5 * dt * k2[i];
        }
        rhs(init.model, init.k, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = s[i] + dt * k3[i];
        }
        rhs(init.model, init.k, &tmp, &mut k4);
        for i in 0..n {
            s[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    Ok(match init.model {
        Model::M36 => Point::M36(Model36Point::from_coords(
            [s[0], s[1], s[2]],
            [s[3], s[4], s[5]],
        )),
        Model::M47 => Point::M47(Model47Point::from_coords(
            s[0],
            [s[1], s[2], s[3]],
            [s[4], s[5], s[6]],
        )),
    })
}
