#![allow(dead_code)]

use carnot_steer::ga::{Multivector, Rotor};
use carnot_steer::models::{GeodesicParams36, GeodesicParams47, Model36Point, Model47Point};
use carnot_steer::{GeodesicParams, Model};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

pub fn target_36() -> Multivector {
    Multivector::vector(3, &[2.0, -1.0, 3.0]) + Multivector::blade(3, &[1, 2])
        - 2.0 * Multivector::blade(3, &[1, 3])
        - 2.0 * Multivector::blade(3, &[2, 3])
}

pub fn target_47() -> Multivector {
    Multivector::vector(4, &[1.0, 2.0, 1.0, 3.0]) - Multivector::blade(4, &[1, 2])
        + 2.0 * Multivector::blade(4, &[1, 3])
        + 2.0 * Multivector::blade(4, &[1, 4])
}

pub fn mv(dim: usize, terms: &[(&[usize], f64)]) -> Multivector {
    terms.iter().fold(Multivector::zero(dim), |acc, (idx, c)| {
        let b = if idx.is_empty() {
            Multivector::scalar(dim, 1.0)
        } else {
            Multivector::blade(dim, idx)
        };
        acc + *c * b
    })
}

pub fn random_vector(rng: &mut impl Rng, dim: usize) -> Multivector {
    let c: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    Multivector::vector(dim, &c)
}

pub fn random_unit_vector(rng: &mut impl Rng, dim: usize) -> Multivector {
    loop {
        let v = random_vector(rng, dim);
        if v.norm() > 0.1 {
            return v.normalize().unwrap();
        }
    }
}

/// Product of a few plane rotors; covers all of Spin(dim).
pub fn random_rotor(rng: &mut impl Rng, dim: usize) -> Rotor {
    let mut r = Rotor::identity(dim);
    for _ in 0..dim {
        let a = random_unit_vector(rng, dim);
        let b = random_unit_vector(rng, dim);
        let step = Rotor::normalized(Multivector::scalar(dim, 1.0) + b * a).unwrap();
        r = step.compose(&r);
    }
    r
}

/// Rotor of `G_4` acting only on `span(e2, e3, e4)`.
pub fn random_rotor_fixing_e1(rng: &mut impl Rng) -> Rotor {
    let mut r = Rotor::identity(4);
    for _ in 0..3 {
        let mut a = random_unit_vector(rng, 3).vector_part();
        let mut b = random_unit_vector(rng, 3).vector_part();
        a.insert(0, 0.0);
        b.insert(0, 0.0);
        let (a, b) = (Multivector::vector(4, &a), Multivector::vector(4, &b));
        let step = Rotor::normalized(Multivector::scalar(4, 1.0) + b * a).unwrap();
        r = step.compose(&r);
    }
    r
}

pub fn random_point_36(rng: &mut impl Rng) -> Model36Point {
    let mut c = [0.0; 6];
    c.iter_mut().for_each(|v| *v = rng.random_range(-3.0..3.0));
    Model36Point::from_coords([c[0], c[1], c[2]], [c[3], c[4], c[5]])
}

pub fn random_point_47(rng: &mut impl Rng) -> Model47Point {
    let mut c = [0.0; 7];
    c.iter_mut().for_each(|v| *v = rng.random_range(-3.0..3.0));
    Model47Point::from_coords(c[0], [c[1], c[2], c[3]], [c[4], c[5], c[6]])
}

/// Random valid constants with `K ∈ [0.2, 3]`.
pub fn random_params(rng: &mut impl Rng, model: Model, t_final: f64) -> GeodesicParams {
    let k = rng.random_range(0.2..3.0);
    match model {
        Model::M36 => {
            let phi = rng.random_range(0.1..3.0f64);
            GeodesicParams::M36(GeodesicParams36 { k, d: phi.sin(), c3: phi.cos(), t_final })
        }
        Model::M47 => {
            let c: f64 = rng.random_range(-0.95..0.95);
            let psi = rng.random_range(0.0..std::f64::consts::TAU);
            let r = (1.0 - c * c).sqrt() / k;
            GeodesicParams::M47(GeodesicParams47 {
                k,
                c1: r * psi.cos(),
                c2: r * psi.sin(),
                c,
                t_final,
            })
        }
    }
}

/// `exp(A)` by scaling and squaring of a truncated Taylor series.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let norm = a.iter().map(|v| v.abs()).sum::<f64>();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a / 2f64.powi(squarings as i32);
    let n = a.nrows();
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut sum = term.clone();
    for k in 1..30 {
        term = &term * &scaled / k as f64;
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

pub fn apply(m: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (m * DVector::from_column_slice(v)).iter().copied().collect()
}

/// Uniformly random rotation matrix with determinant +1.
pub fn random_rotation_matrix(rng: &mut impl Rng, dim: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(dim, dim, |_, _| rng.random_range(-1.0..1.0));
    let qr = a.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            let col = -q.column(j);
            q.set_column(j, &col);
        }
    }
    if q.determinant() < 0.0 {
        let col = -q.column(0);
        q.set_column(0, &col);
    }
    q
}

pub fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}
