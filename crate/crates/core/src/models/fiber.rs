//! Fiber (momentum) system `ḣ = −Ω h` with constant `w = K`.

use nalgebra::DMatrix;

use super::Model;

/// Skew matrix `Ω` built from `(K1, K2, K3)`.
pub fn omega_matrix(model: Model, k: [f64; 3]) -> DMatrix<f64> {
    let [k1, k2, k3] = k;
    match model {
        Model::M36 => DMatrix::from_row_slice(
            3,
            3,
            &[0.0, k1, k2, -k1, 0.0, k3, -k2, -k3, 0.0],
        ),
        Model::M47 => DMatrix::from_row_slice(
            4,
            4,
            &[
                0.0, k1, k2, k3, //
                -k1, 0.0, 0.0, 0.0, //
                -k2, 0.0, 0.0, 0.0, //
                -k3, 0.0, 0.0, 0.0,
            ],
        ),
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn norm(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// Right-handed orthonormal basis `(v1, v2, v3)` adapted to `Ω` for the
/// `(3,6)` model: `v3` spans `ker Ω` and `h` rotates in `span(v1, v2)` with
/// frequency `|K|`. `None` when `K = 0`.
pub fn fiber_basis_36(k: [f64; 3]) -> Option<[[f64; 3]; 3]> {
    let [k1, k2, k3] = k;
    let kn = norm(k);
    if kn == 0.0 {
        return None;
    }
    let v3 = [k3 / kn, -k2 / kn, k1 / kn];
    let s = (k2 * k2 + k3 * k3).sqrt();
    if s > 1e-12 * kn {
        let v1 = [-k1 * k3 / (kn * s), k1 * k2 / (kn * s), s / kn];
        let v2 = [-k2 / s, -k3 / s, 0.0];
        return Some([v1, v2, v3]);
    }
    // K2 = K3 = 0: any right-handed completion of v3 with the same v3
    // gives the same rotation sense.
    let axis = (0..3)
        .min_by(|&a, &b| v3[a].abs().total_cmp(&v3[b].abs()))
        .unwrap();
    let mut e = [0.0; 3];
    e[axis] = 1.0;
    let w = cross(v3, e);
    let v2 = scale(w, 1.0 / norm(w));
    let v1 = cross(v2, v3);
    Some([v1, v2, v3])
}

/// `h(t) = e^{−tΩ} h(0)` with `h(0) = C1 v1 + C2 v2 + C3 v3`. For `K = 0`
/// the constants are read in the standard basis and `h` is constant.
pub fn fiber_solution_36(k: [f64; 3], c: [f64; 3], t: f64) -> [f64; 3] {
    let Some([v1, v2, v3]) = fiber_basis_36(k) else {
        return c;
    };
    let kt = norm(k) * t;
    let (s, co) = kt.sin_cos();
    let a = c[0] * co - c[1] * s;
    let b = c[0] * s + c[1] * co;
    std::array::from_fn(|i| a * v1[i] + b * v2[i] + c[2] * v3[i])
}

/// `(h0, h1, h2, h3)(t)` for the `(4,7)` model:
///
/// `h0 = K (C2 cos Kt − C1 sin Kt)`,
/// `h̄ = K (C2 sin Kt + C1 cos Kt) r1 + C3 (−K3, 0, K1) + C4 (−K2, K1, 0)`,
///
/// with `r1 = K/|K|`. The last two terms span the kernel part, so no
/// normalization factor is divided out. For `K = 0` the constants
/// `(C1, C2, C3, C4)` are `h(0)` in the standard basis.
pub fn fiber_solution_47(k: [f64; 3], c: [f64; 4], t: f64) -> [f64; 4] {
    let kn = norm(k);
    if kn == 0.0 {
        return c;
    }
    let [k1, k2, k3] = k;
    let [c1, c2, c3, c4] = c;
    let kt = kn * t;
    let (s, co) = kt.sin_cos();
    let h0 = kn * (c2 * co - c1 * s);
    let along = c2 * s + c1 * co; // K (…) r1 = (…) K-vector
    let kernel = [-c3 * k3 - c4 * k2, c4 * k1, c3 * k1];
    [
        h0,
        along * k1 + kernel[0],
        along * k2 + kernel[1],
        along * k3 + kernel[2],
    ]
}
