//! Reference closed-form invariant curves, kept as a cross-check of the canonical GA-evaluated invariants.
//!
//! Several reference terms do not agree with the GA values (for example the
//! `(K − 1)` and `(−2K + 2)` factors in the `(3,6)` curves and the
//! `(Kt − cos Kt)` factors in the `(4,7)` curves), so nothing downstream
//! consumes these; [`audit_closed_forms`] measures the disagreement.

use serde::Serialize;

use super::{GeodesicParams, Invariants, Invariants36, Invariants47};

pub fn invariant_closed_forms(p: &GeodesicParams, t: f64) -> Invariants {
    match p {
        GeodesicParams::M36(p) => {
            let (k, d, c3) = (p.k, p.d, p.c3);
            let kt = k * t;
            let (s, c) = kt.sin_cos();
            let (d2, c32) = (d * d, c3 * c3);
            let xx = -2.0 * d2 / (k * k) * (c - 1.0) + c32 * t * t;
            let zz = -d2 / (4.0 * k.powi(4))
                * ((4.0 * c32 * k * k - 4.0 * c32 - d2) * c * c
                    + 2.0 * k * c32 * (2.0 * t * (k - 1.0) * s + t * t * k - 4.0) * c
                    - 2.0 * k * t * (4.0 * c32 + d2) * s
                    + t * t * (2.0 * c32 + d2) * k * k
                    + d2
                    + 8.0 * c32);
            let xz_star = d2 * c3 / (2.0 * k.powi(3))
                * ((-2.0 * k + 2.0) * c * c + (2.0 * k + 2.0) * c + k * k * t * t + kt * s
                    - 4.0);
            Invariants::M36(Invariants36 { xx, zz, xz_star })
        }
        GeodesicParams::M47(p) => {
            let (k, c1, c2, cc) = (p.k, p.c1, p.c2, p.c);
            let kt = k * t;
            let (s, co) = kt.sin_cos();
            let amp = c1 * c1 + c2 * c2;
            let swing = c1 * s + c2 * (1.0 - co);
            let drift = c1 * (2.0 * s - kt * co - kt) + c2 * (2.0 - 2.0 * co - kt * s);
            let x = c1 * (co - 1.0) + c2 * s;
            let ll = swing * swing + (cc * t).powi(2);
            let ly_e1 = 0.5 * (amp * swing * (kt - co) + cc * cc / k * t * drift);
            let yy = 0.25 * (amp * amp * (kt - co).powi(2) + cc * cc / (k * k) * drift * drift);
            Invariants::M47(Invariants47 { x, ll, ly_e1, yy })
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentAudit {
    pub name: String,
    pub max_abs_diff: f64,
    /// Fraction of grid points agreeing to `tolerance`.
    pub agreement: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub samples: usize,
    pub tolerance: f64,
    pub components: Vec<ComponentAudit>,
}

impl AuditReport {
    /// Components that disagree somewhere on the grid.
    pub fn discrepancies(&self) -> impl Iterator<Item = &ComponentAudit> {
        self.components.iter().filter(|c| c.agreement < 1.0)
    }
}

/// Compares the reference closed forms with GA invariants of the closed-form
/// geodesic on every `(params, t)` pair of the grid.
pub fn audit_closed_forms(grid: &[(GeodesicParams, f64)], tolerance: f64) -> AuditReport {
    let Some((first, _)) = grid.first() else {
        return AuditReport {
            samples: 0,
            tolerance,
            components: Vec::new(),
        };
    };
    let names = first.model().invariant_names();
    let mut max_diff = vec![0.0f64; names.len()];
    let mut agree = vec![0usize; names.len()];
    for (p, t) in grid {
        let reference = invariant_closed_forms(p, *t).to_vec();
        let canonical = p.point_at(*t).invariants().to_vec();
        for i in 0..names.len() {
            let diff = (reference[i] - canonical[i]).abs();
            max_diff[i] = max_diff[i].max(diff);
            if diff <= tolerance * canonical[i].abs().max(1.0) {
                agree[i] += 1;
            }
        }
    }
    AuditReport {
        samples: grid.len(),
        tolerance,
        components: names
            .iter()
            .enumerate()
            .map(|(i, name)| ComponentAudit {
                name: name.to_string(),
                max_abs_diff: max_diff[i],
                agreement: agree[i] as f64 / grid.len() as f64,
            })
            .collect(),
    }
}
