//! End-to-end steering: invariants, moduli solve, representative geodesic,
//! flag alignment, rotated trajectory.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::align::{align_flags, frame_flag};
use crate::error::{Error, Result};
use crate::ga::{blade_name, Multivector, Rotor};
use crate::models::{GeodesicParams, Invariants, Model, Point, E1_FIX_TOL};
use crate::solver::{solve, SolveDiagnostics, SolveRequest};

/// Default endpoint acceptance bound.
pub const DEFAULT_ACCEPTANCE: f64 = 5e-2;
/// Agreement required between stored and recomputed report quantities.
pub const REPLAY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteerOptions {
    pub samples: usize,
    pub k_max: f64,
    pub t_max: f64,
    pub tolerance: f64,
    pub starts: usize,
    pub seed: u64,
    /// Largest accepted coefficient ∞-norm between endpoint and target.
    pub acceptance: f64,
}

impl Default for SteerOptions {
    fn default() -> Self {
        Self {
            samples: 200,
            k_max: 10.0,
            t_max: 20.0,
            tolerance: 1e-8,
            starts: 128,
            seed: 0,
            acceptance: DEFAULT_ACCEPTANCE,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub coords: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteerReport {
    pub model: Model,
    /// Target coefficients keyed by blade name.
    pub target: BTreeMap<String, f64>,
    pub invariants: Invariants,
    pub params: GeodesicParams,
    pub t_final: f64,
    /// Endpoint of the representative geodesic before rotation.
    pub q_o: BTreeMap<String, f64>,
    /// Alignment rotor, one coefficient per blade in bitmask order.
    pub rotor: Vec<f64>,
    pub samples: Vec<Sample>,
    pub endpoint_error: f64,
    pub acceptance: f64,
    pub diagnostics: SolveDiagnostics,
}

impl SteerReport {
    pub fn target_multivector(&self) -> Result<Multivector> {
        from_blade_map(self.model.algebra_dim(), &self.target)
    }

    pub fn rotor(&self) -> Result<Rotor> {
        Rotor::new(Multivector::from_coeffs(self.model.algebra_dim(), &self.rotor)?)
    }
}

/// Nonzero coefficients keyed by blade name (`"1"` for the scalar).
pub fn to_blade_map(mv: &Multivector) -> BTreeMap<String, f64> {
    (0..mv.len())
        .filter(|&b| mv.get(b) != 0.0)
        .map(|b| {
            let name = if b == 0 { "1".to_string() } else { blade_name(b) };
            (name, mv.get(b))
        })
        .collect()
}

pub fn from_blade_map(dim: usize, map: &BTreeMap<String, f64>) -> Result<Multivector> {
    let mut mv = Multivector::zero(dim);
    for (name, value) in map {
        let (blade, sign) = crate::ga::parse_blade_name(name, dim)?;
        mv.set(blade, mv.get(blade) + sign * value);
    }
    if !mv.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(mv)
}

fn sample_times(t_final: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                t_final
            } else {
                t_final * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Runs the pipeline for `target`, trying roots in order of arrival time
/// and returning the first whose rotated endpoint lands within
/// `opts.acceptance` of the target.
pub fn steer(target: &Point, opts: &SteerOptions) -> Result<SteerReport> {
    if opts.samples < 2 {
        return Err(Error::InvalidParams("samples must be >= 2".to_string()));
    }
    let model = target.model();
    let target_flag = frame_flag(target)?;
    let invariants = target.invariants();
    let req = SolveRequest {
        model,
        target: invariants,
        k_max: opts.k_max,
        t_max: opts.t_max,
        tolerance: opts.tolerance,
        max_starts: opts.starts,
        seed: opts.seed,
    };
    let result = solve(&req)?;
    if result.solutions.is_empty() {
        return Err(Error::InfeasibleTarget { starts: opts.starts });
    }

    let mut best: Option<(f64, Error)> = None;
    for sol in &result.solutions {
        let q_o = sol.params.endpoint();
        let rotor = match frame_flag(&q_o).and_then(|f| align_flags(&f, &target_flag)) {
            Ok(r) => r,
            Err(e) => {
                best.get_or_insert((f64::INFINITY, e));
                continue;
            }
        };
        let endpoint = match q_o.act(&rotor) {
            Ok(p) => p,
            Err(e) => {
                best.get_or_insert((f64::INFINITY, e));
                continue;
            }
        };
        let error = endpoint
            .as_multivector()
            .max_abs_diff(target.as_multivector());
        if error > opts.acceptance {
            if best.as_ref().map_or(true, |(b, _)| error < *b) {
                best = Some((
                    error,
                    Error::EndpointMismatch {
                        error,
                        bound: opts.acceptance,
                    },
                ));
            }
            continue;
        }
        let t_final = sol.params.t_final();
        let samples = sample_times(t_final, opts.samples)
            .into_iter()
            .map(|t| {
                let p = sol.params.point_at(t).act(&rotor)?;
                Ok(Sample { t, coords: p.coords() })
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(SteerReport {
            model,
            target: to_blade_map(target.as_multivector()),
            invariants,
            params: sol.params,
            t_final,
            q_o: to_blade_map(q_o.as_multivector()),
            rotor: rotor.as_multivector().coeffs().to_vec(),
            samples,
            endpoint_error: error,
            acceptance: opts.acceptance,
            diagnostics: result.diagnostics.clone(),
        });
    }
    Err(best.map(|(_, e)| e).unwrap_or(Error::InfeasibleTarget { starts: opts.starts }))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verification {
    pub checks: Vec<Check>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        name,
        passed,
        detail,
    }
}

/// Recomputes everything a report claims from its parameters and rotor.
pub fn verify(report: &SteerReport) -> Verification {
    let mut checks = Vec::new();
    let model = report.model;

    let target = report
        .target_multivector()
        .and_then(|q| Point::from_multivector(model, q));
    checks.push(check(
        "target",
        target.is_ok(),
        match &target {
            Ok(_) => "well-formed point".to_string(),
            Err(e) => e.to_string(),
        },
    ));

    let level = report.params.level_residual();
    let params_ok = report.params.model() == model && report.params.validate().is_ok();
    checks.push(check(
        "level condition",
        params_ok,
        format!("residual {level:e}"),
    ));

    let t_match = (report.params.t_final() - report.t_final).abs() <= REPLAY_TOL;
    checks.push(check(
        "arrival time",
        t_match,
        format!("params {} vs report {}", report.params.t_final(), report.t_final),
    ));

    let rotor = report.rotor();
    checks.push(check(
        "rotor unitality",
        rotor.is_ok(),
        match &rotor {
            Ok(r) => format!("|R R~ - 1| = {:e}", r.unitality_error()),
            Err(e) => e.to_string(),
        },
    ));

    if model == Model::M47 {
        if let Ok(r) = &rotor {
            let e1 = Multivector::e(4, 1);
            let moved = r.sandwich(&e1).max_abs_diff(&e1);
            checks.push(check(
                "rotor fixes e1",
                moved <= E1_FIX_TOL,
                format!("e1 moved by {moved:e}"),
            ));
        }
    }

    let endpoint = rotor
        .as_ref()
        .ok()
        .and_then(|r| report.params.point_at(report.params.t_final()).act(r).ok());
    match (&endpoint, &target) {
        (Some(end), Ok(tgt)) => {
            let err = end.as_multivector().max_abs_diff(tgt.as_multivector());
            checks.push(check(
                "endpoint",
                err <= report.acceptance,
                format!("error {err:e}, bound {:e}", report.acceptance),
            ));
            let inv = tgt.invariants().max_abs_diff(&report.invariants);
            checks.push(check(
                "invariants",
                inv <= REPLAY_TOL * 100.0,
                format!("stored vs target invariants differ by {inv:e}"),
            ));
        }
        _ => checks.push(check(
            "endpoint",
            false,
            "cannot recompute the endpoint".to_string(),
        )),
    }

    let n = report.samples.len();
    let increasing = report.samples.windows(2).all(|w| w[1].t > w[0].t);
    let spans = n >= 2
        && report.samples[0].t == 0.0
        && (report.samples[n - 1].t - report.t_final).abs() <= REPLAY_TOL;
    checks.push(check(
        "samples",
        increasing && spans,
        format!("{n} samples, increasing: {increasing}, span [0, t_final]: {spans}"),
    ));

    if let (Some(end), Some(last)) = (&endpoint, report.samples.last()) {
        let diff = end
            .coords()
            .iter()
            .zip(&last.coords)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let sized = last.coords.len() == model.coordinate_names().len();
        checks.push(check(
            "trajectory endpoint",
            sized && diff <= REPLAY_TOL,
            format!("last sample differs from recomputed endpoint by {diff:e}"),
        ));
    }

    Verification { checks }
}
