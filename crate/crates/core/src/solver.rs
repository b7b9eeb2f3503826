//! Inversion of the moduli map: find geodesic constants and an arrival time
//! whose closed-form endpoint has prescribed invariants.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{GeodesicParams, GeodesicParams36, GeodesicParams47, Invariants, Model, LEVEL_TOL};

const NEWTON_STOP: f64 = 1e-10;
const MAX_ITERS: usize = 100;
const MIN_DAMPING: f64 = 1.0 / (1u32 << 20) as f64;
const FD_STEP: f64 = 1e-7;
const ARMIJO: f64 = 1e-4;
const STALL_WINDOW: usize = 20;
const STALL_RATIO: f64 = 0.5;
const STALL_FLOOR: f64 = 1e-4;
const LM_MU_START: f64 = 1e-6;
const LM_MU_MAX: f64 = 1e8;
const K_FLOOR: f64 = 1e-6;
const K_SAMPLE_MIN: f64 = 1e-2;
const T_SAMPLE_MIN: f64 = 1e-3;
const DEDUP_RADIUS: f64 = 1e-6;
const ORBIT_GRID: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveRequest {
    pub model: Model,
    pub target: Invariants,
    pub k_max: f64,
    pub t_max: f64,
    /// Bound on the residual ∞-norm of accepted roots.
    pub tolerance: f64,
    pub max_starts: usize,
    pub seed: u64,
}

impl SolveRequest {
    pub fn new(target: Invariants) -> Self {
        Self {
            model: target.model(),
            target,
            k_max: 10.0,
            t_max: 20.0,
            tolerance: 1e-8,
            max_starts: 128,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.target.model() != self.model {
            return Err(Error::InvalidParams(format!(
                "target invariants are for model {}, request is for {}",
                self.target.model(),
                self.model
            )));
        }
        if self.target.to_vec().iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let positive = [self.k_max, self.t_max, self.tolerance];
        if positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidParams(
                "k_max, t_max and tolerance must be positive".to_string(),
            ));
        }
        if self.max_starts == 0 {
            return Err(Error::InvalidParams("max_starts must be >= 1".to_string()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub params: GeodesicParams,
    pub residual_norm: f64,
}

impl Solution {
    pub fn t_final(&self) -> f64 {
        self.params.t_final()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveDiagnostics {
    pub starts: usize,
    pub converged: usize,
    pub in_bounds: usize,
    pub distinct: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    /// Sorted by arrival time.
    pub solutions: Vec<Solution>,
    pub diagnostics: SolveDiagnostics,
}

impl SolveResult {
    pub fn first(&self) -> Option<&Solution> {
        self.solutions.first()
    }
}

/// Invariants of the closed-form endpoint minus `target`, followed by the
/// level-condition residual.
pub fn residual(params: &GeodesicParams, target: &Invariants) -> Result<Vec<f64>> {
    if params.model() != target.model() {
        return Err(Error::InvalidParams(format!(
            "params for model {} against target for model {}",
            params.model(),
            target.model()
        )));
    }
    Ok(raw_residual(params, target))
}

fn raw_residual(params: &GeodesicParams, target: &Invariants) -> Vec<f64> {
    let mut r: Vec<f64> = params
        .endpoint()
        .invariants()
        .to_vec()
        .iter()
        .zip(target.to_vec())
        .map(|(a, b)| a - b)
        .collect();
    r.push(params.level_residual());
    r
}

/// Indices of invariants that are squared norms.
fn quadratic_components(model: Model) -> [usize; 2] {
    match model {
        Model::M36 => [0, 1],
        Model::M47 => [1, 3],
    }
}

const CROSS: usize = 2;

fn signed_sqrt(v: f64) -> f64 {
    v.signum() * v.abs().sqrt()
}

/// Residual Newton works on: squared norms enter through their signed square
/// roots, which keeps short arcs well conditioned. Same roots as
/// [`raw_residual`].
fn scaled_residual(params: &GeodesicParams, target: &Invariants) -> Vec<f64> {
    let got = params.endpoint().invariants().to_vec();
    let want = target.to_vec();
    let quadratic = quadratic_components(params.model());
    let mut r: Vec<f64> = got
        .iter()
        .zip(&want)
        .enumerate()
        .map(|(i, (a, b))| {
            if quadratic.contains(&i) {
                signed_sqrt(*a) - signed_sqrt(*b)
            } else if i == CROSS {
                a.cbrt() - b.cbrt()
            } else {
                a - b
            }
        })
        .collect();
    r.push(params.level_residual());
    r
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Constants from search coordinates `(ln K, φ, t)` resp. `(ln K, θ, ψ, t)`,
/// which satisfy the level condition identically.
fn to_params(model: Model, v: &[f64]) -> GeodesicParams {
    let k = v[0].exp();
    match model {
        Model::M36 => GeodesicParams::M36(GeodesicParams36 {
            k,
            d: v[1].sin(),
            c3: v[1].cos(),
            t_final: v[2],
        }),
        Model::M47 => {
            let a = v[1].sin() / k;
            GeodesicParams::M47(GeodesicParams47 {
                k,
                c1: a * v[2].cos(),
                c2: a * v[2].sin(),
                c: v[1].cos(),
                t_final: v[3],
            })
        }
    }
}

fn eval(model: Model, v: &[f64], target: &Invariants) -> Vec<f64> {
    let mut r = scaled_residual(&to_params(model, v), target);
    r.pop();
    r
}

fn clamp(v: &mut [f64]) {
    v[0] = v[0].clamp(K_FLOOR.ln(), -K_FLOOR.ln());
    let t = v.len() - 1;
    v[t] = v[t].max(K_FLOOR);
}

fn jacobian(model: Model, u: &[f64], target: &Invariants) -> DMatrix<f64> {
    let n = u.len();
    let mut jac = DMatrix::zeros(n, n);
    let mut probe = u.to_vec();
    for j in 0..n {
        let h = FD_STEP * u[j].abs().max(1.0);
        probe[j] = u[j] + h;
        let plus = eval(model, &probe, target);
        probe[j] = u[j] - h;
        let minus = eval(model, &probe, target);
        probe[j] = u[j];
        for i in 0..n {
            jac[(i, j)] = (plus[i] - minus[i]) / (2.0 * h);
        }
    }
    jac
}

/// Full Newton step by LU, or `None` when the system is singular.
fn newton_direction(jac: &DMatrix<f64>, r: &[f64]) -> Option<DVector<f64>> {
    let rhs = -DVector::from_column_slice(r);
    let d = jac.clone().lu().solve(&rhs)?;
    d.iter().all(|v| v.is_finite()).then_some(d)
}

fn merit(r: &[f64]) -> f64 {
    0.5 * r.iter().map(|v| v * v).sum::<f64>()
}

struct Step {
    u: Vec<f64>,
    r: Vec<f64>,
    merit: f64,
}

fn trial(model: Model, u: &[f64], d: &DVector<f64>, scale: f64, target: &Invariants) -> Step {
    let mut next: Vec<f64> = u.iter().zip(d.iter()).map(|(a, b)| a + scale * b).collect();
    clamp(&mut next);
    let r = eval(model, &next, target);
    let merit = merit(&r);
    Step { u: next, r, merit: if merit.is_finite() { merit } else { f64::INFINITY } }
}

/// Halving line search on the Newton direction with an Armijo test on the
/// merit `½|r|²`.
fn newton_step(model: Model, u: &[f64], d: &DVector<f64>, phi: f64, target: &Invariants) -> Option<Step> {
    let mut lambda = 1.0;
    while lambda >= MIN_DAMPING {
        let s = trial(model, u, d, lambda, target);
        if s.merit <= (1.0 - 2.0 * ARMIJO * lambda) * phi {
            return Some(s);
        }
        lambda *= 0.5;
    }
    None
}

/// Levenberg–Marquardt step; raises `mu` until the merit decreases.
fn lm_step(
    model: Model,
    u: &[f64],
    jac: &DMatrix<f64>,
    r: &[f64],
    phi: f64,
    mu: &mut f64,
    target: &Invariants,
) -> Option<Step> {
    let jt = jac.transpose();
    let jtj = &jt * jac;
    let g = &jt * DVector::from_column_slice(r);
    let n = u.len();
    while *mu <= LM_MU_MAX * jtj.diagonal().max().max(1.0) {
        let a = &jtj + DMatrix::identity(n, n) * *mu;
        if let Some(d) = a.cholesky().map(|c| c.solve(&-&g)) {
            let s = trial(model, u, &d, 1.0, target);
            if s.merit < phi {
                *mu = (*mu / 3.0).max(f64::MIN_POSITIVE);
                return Some(s);
            }
        }
        *mu *= 4.0;
    }
    None
}

/// Damped Newton from `u` with a Levenberg–Marquardt fallback where the
/// Newton direction makes no sufficient progress; returns the final point and
/// residual ∞-norm.
fn newton(model: Model, mut u: Vec<f64>, target: &Invariants) -> (Vec<f64>, f64) {
    let mut r = eval(model, &u, target);
    let mut phi = merit(&r);
    let mut mu = LM_MU_START;
    let mut checkpoint = phi;
    for it in 0..MAX_ITERS {
        let norm = inf_norm(&r);
        if !phi.is_finite() || norm < NEWTON_STOP {
            break;
        }
        if it > 0 && it % STALL_WINDOW == 0 {
            if norm > STALL_FLOOR && phi > STALL_RATIO * checkpoint {
                break;
            }
            checkpoint = phi;
        }
        let jac = jacobian(model, &u, target);
        let step = newton_direction(&jac, &r)
            .and_then(|d| newton_step(model, &u, &d, phi, target))
            .or_else(|| lm_step(model, &u, &jac, &r, phi, &mut mu, target));
        let Some(step) = step else {
            break;
        };
        u = step.u;
        r = step.r;
        phi = step.merit;
    }
    let norm = inf_norm(&r);
    (u, norm)
}

/// Latin-hypercube samples of the unit cube, one row per start.
fn latin_hypercube(rng: &mut ChaCha8Rng, n: usize, dims: usize) -> Vec<Vec<f64>> {
    let mut rows = vec![vec![0.0; dims]; n];
    for d in 0..dims {
        let mut strata: Vec<usize> = (0..n).collect();
        strata.shuffle(rng);
        for (row, s) in rows.iter_mut().zip(strata) {
            row[d] = (s as f64 + rng.random::<f64>()) / n as f64;
        }
    }
    rows
}

/// Horizontal distance to the target, a lower bound on any arrival time.
fn min_arrival(target: &Invariants) -> f64 {
    match target {
        Invariants::M36(i) => i.xx.max(0.0).sqrt(),
        Invariants::M47(i) => (i.x * i.x + i.ll.max(0.0)).sqrt(),
    }
}

/// Maps a cube sample to search coordinates: `K` log-uniform on
/// `[K_SAMPLE_MIN, k_max]`, `t` log-uniform on `[min_arrival, t_max]`.
fn start_point(req: &SolveRequest, s: &[f64]) -> Vec<f64> {
    let k_min = K_SAMPLE_MIN.min(req.k_max);
    let ln_k = k_min.ln() + (req.k_max / k_min).ln() * s[0];
    let t_min = min_arrival(&req.target).clamp(T_SAMPLE_MIN, req.t_max);
    let t = t_min * (req.t_max / t_min).powf(s[1]);
    match req.model {
        Model::M36 => vec![ln_k, std::f64::consts::PI * s[2], t],
        Model::M47 => vec![ln_k, s[2].acos(), std::f64::consts::TAU * s[3], t],
    }
}

/// Representative of a root's sign orbit (`D > 0`, resp. `C ≥ 0`).
fn canonicalize(model: Model, u: &mut [f64]) {
    match model {
        Model::M36 => u[1] = u[1].abs(),
        Model::M47 => u[3] = u[3].abs(),
    }
}

fn in_bounds(req: &SolveRequest, params: &GeodesicParams) -> bool {
    let u = params.to_unknowns();
    let (k, t) = (u[0], u[u.len() - 1]);
    k > 0.0
        && k <= req.k_max
        && t > 0.0
        && t <= req.t_max
        && params.level_residual().abs() <= LEVEL_TOL
        && params.validate().is_ok()
}

fn same_orbit(a: &GeodesicParams, b: &GeodesicParams) -> bool {
    let (ta, tb) = (a.t_final(), b.t_final());
    if (ta - tb).abs() > DEDUP_RADIUS * ta.max(1.0) {
        return false;
    }
    (1..=ORBIT_GRID).all(|i| {
        let t = ta * i as f64 / ORBIT_GRID as f64;
        let (ia, ib) = (a.point_at(t).invariants(), b.point_at(t).invariants());
        let scale = ia.to_vec().iter().fold(1.0f64, |m, v| m.max(v.abs()));
        ia.max_abs_diff(&ib) <= DEDUP_RADIUS * scale
    })
}

/// Multistart damped Newton over the bounded parameter box.
pub fn solve(req: &SolveRequest) -> Result<SolveResult> {
    req.validate()?;
    let dims = req.target.to_vec().len();
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
    let samples = latin_hypercube(&mut rng, req.max_starts, dims);
    let target = req.target;
    let finished: Vec<(Vec<f64>, f64)> = samples
        .par_iter()
        .map(|s| newton(req.model, start_point(req, s), &target))
        .collect();

    let mut diagnostics = SolveDiagnostics {
        starts: req.max_starts,
        ..Default::default()
    };
    let mut roots = Vec::new();
    for (v, _) in finished {
        let mut u = to_params(req.model, &v).to_unknowns();
        canonicalize(req.model, &mut u);
        let params = GeodesicParams::from_unknowns(req.model, &u);
        let residual_norm = inf_norm(&raw_residual(&params, &target));
        if !(residual_norm <= req.tolerance) {
            continue;
        }
        diagnostics.converged += 1;
        if !in_bounds(req, &params) {
            continue;
        }
        diagnostics.in_bounds += 1;
        roots.push(Solution {
            params,
            residual_norm,
        });
    }
    if diagnostics.in_bounds == 0 {
        return Err(Error::InfeasibleTarget {
            starts: req.max_starts,
        });
    }
    roots.sort_by(|a, b| {
        a.params
            .to_unknowns()
            .iter()
            .rev()
            .zip(b.params.to_unknowns().iter().rev())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut solutions: Vec<Solution> = Vec::new();
    for root in roots {
        let duplicate = solutions.iter().any(|s| {
            let dist = inf_norm(
                &s.params
                    .to_unknowns()
                    .iter()
                    .zip(root.params.to_unknowns())
                    .map(|(a, b)| a - b)
                    .collect::<Vec<_>>(),
            );
            dist <= DEDUP_RADIUS || same_orbit(&s.params, &root.params)
        });
        if !duplicate {
            solutions.push(root);
        }
    }
    diagnostics.distinct = solutions.len();
    Ok(SolveResult {
        solutions,
        diagnostics,
    })
}
