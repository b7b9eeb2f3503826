//! Rotors between congruent frames, built from complete flags.

use crate::error::{Error, Result};
use crate::ga::{Multivector, Rotor, EPS};
use crate::models::{Model, Point};

/// Tolerance on unit norms, Gram matrices, pseudoscalars and flag nesting.
pub const FRAME_TOL: f64 = 1e-9;
/// `1 + x·y` at or below this value counts as antipodal.
pub const ANTIPODAL_TOL: f64 = 1e-8;
/// Relative size below which a flag stage of a point counts as degenerate.
pub const DEGENERATE_TOL: f64 = 1e-9;

/// Nested blades `V_1 ⊂ V_2 ⊂ …`, `V_i` of grade `i`, stored normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct Flag {
    blades: Vec<Multivector>,
}

impl Flag {
    pub fn new(blades: Vec<Multivector>) -> Result<Self> {
        let Some(first) = blades.first() else {
            return Err(Error::FlagMismatch("empty flag".to_string()));
        };
        let dim = first.dim();
        if blades.len() > dim {
            return Err(Error::FlagMismatch(format!(
                "{} stages in G_{dim}",
                blades.len()
            )));
        }
        let mut out = Vec::with_capacity(blades.len());
        for (i, b) in blades.iter().enumerate() {
            if b.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: b.dim(),
                });
            }
            let norm = b.norm();
            if norm <= EPS {
                return Err(Error::NearZeroNorm(norm));
            }
            let stray = (*b - b.grade_part(i + 1)).max_abs();
            if stray > EPS * norm.max(1.0) {
                return Err(Error::FlagMismatch(format!(
                    "stage {} is not of grade {}",
                    i + 1,
                    i + 1
                )));
            }
            out.push(b.grade_part(i + 1) / norm);
        }
        for i in 1..out.len() {
            // |A⌋B| = |A||B| exactly when the subspace of A lies in that of B
            let overlap = (out[i - 1] | out[i]).norm();
            if (overlap - 1.0).abs() > FRAME_TOL {
                return Err(Error::FlagMismatch(format!(
                    "stage {i} is not contained in stage {}",
                    i + 1
                )));
            }
        }
        Ok(Self { blades: out })
    }

    pub fn blades(&self) -> &[Multivector] {
        &self.blades
    }

    pub fn len(&self) -> usize {
        self.blades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blades.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.blades[0].dim()
    }

    pub fn is_complete(&self) -> bool {
        self.len() == self.dim()
    }

    /// The flag moved by `rotor`.
    pub fn rotated(&self, rotor: &Rotor) -> Flag {
        Flag {
            blades: self.blades.iter().map(|b| rotor.sandwich(b)).collect(),
        }
    }

    /// Largest coefficient deviation between corresponding stages.
    pub fn max_abs_diff(&self, other: &Flag) -> f64 {
        self.blades
            .iter()
            .zip(&other.blades)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

/// Two ordered lists of vectors with equal Gram matrices and equal
/// pseudoscalars.
#[derive(Clone, Debug, PartialEq)]
pub struct FramePair {
    xs: Vec<Multivector>,
    ys: Vec<Multivector>,
}

impl FramePair {
    pub fn new(xs: Vec<Multivector>, ys: Vec<Multivector>) -> Result<Self> {
        let Some(first) = xs.first() else {
            return Err(Error::FlagMismatch("empty frame".to_string()));
        };
        let dim = first.dim();
        if xs.len() != dim || ys.len() != dim {
            return Err(Error::FlagMismatch(format!(
                "frames of G_{dim} need {dim} vectors, got {} and {}",
                xs.len(),
                ys.len()
            )));
        }
        for v in xs.iter().chain(&ys) {
            check_vector(v, dim)?;
        }
        for i in 0..dim {
            for j in i..dim {
                let gx = (xs[i] | xs[j]).scalar_part();
                let gy = (ys[i] | ys[j]).scalar_part();
                if (gx - gy).abs() > FRAME_TOL {
                    return Err(Error::FlagMismatch(format!(
                        "Gram entry ({}, {}) differs: {gx} vs {gy}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let diff = wedge_all(&xs).max_abs_diff(&wedge_all(&ys));
        if diff > FRAME_TOL {
            return Err(Error::FlagMismatch(format!(
                "pseudoscalars differ by {diff:e}"
            )));
        }
        Ok(Self { xs, ys })
    }

    pub fn xs(&self) -> &[Multivector] {
        &self.xs
    }

    pub fn ys(&self) -> &[Multivector] {
        &self.ys
    }
}

fn check_vector(v: &Multivector, dim: usize) -> Result<()> {
    if v.dim() != dim {
        return Err(Error::DimensionMismatch {
            left: dim,
            right: v.dim(),
        });
    }
    if !v.is_finite() {
        return Err(Error::NonFinite);
    }
    let stray = (*v - v.grade_part(1)).max_abs();
    if stray > EPS {
        return Err(Error::FlagMismatch(format!(
            "expected a vector, found non-vector part of size {stray:e}"
        )));
    }
    Ok(())
}

fn wedge_all(vs: &[Multivector]) -> Multivector {
    vs.iter()
        .skip(1)
        .fold(vs[0], |acc, v| acc ^ *v)
}

/// `R = (1 + y x)^`, the rotor taking unit vector `x` to unit vector `y` in
/// the plane `x∧y`.
pub fn rotor_between_vectors(x: &Multivector, y: &Multivector) -> Result<Rotor> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    for v in [x, y] {
        check_vector(v, x.dim())?;
        let n = v.norm();
        if (n - 1.0).abs() > FRAME_TOL {
            return Err(Error::NotUnitVector(n));
        }
    }
    if 1.0 + (*x | *y).scalar_part() <= ANTIPODAL_TOL {
        return Err(Error::AntipodalVectors);
    }
    let one = Multivector::scalar(x.dim(), 1.0);
    Rotor::normalized(one + *y * *x)
}

/// `[x1, x1∧x2, …, x1∧…∧xk]`, normalized.
pub fn flag_from_basis(vectors: &[Multivector]) -> Result<Flag> {
    let Some(first) = vectors.first() else {
        return Err(Error::FlagMismatch("empty basis".to_string()));
    };
    let dim = first.dim();
    let mut blades = Vec::with_capacity(vectors.len());
    let mut acc = Multivector::scalar(dim, 1.0);
    let mut scale = 1.0;
    for (i, v) in vectors.iter().enumerate() {
        check_vector(v, dim)?;
        acc = acc ^ *v;
        scale *= v.norm();
        if acc.norm() <= EPS * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::DependentVectors { stage: i + 1 });
        }
        blades.push(acc);
    }
    Flag::new(blades)
}

/// Unit vector inside the subspace of a normalized blade.
fn vector_in(blade: &Multivector) -> Multivector {
    let dim = blade.dim();
    (1..=dim)
        .map(|k| {
            let e = Multivector::e(dim, k);
            ((e | *blade) * blade.reverse()).grade_part(1)
        })
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("nonempty")
        .normalize()
        .expect("a normalized blade contains some basis direction")
}

/// Rotor aligning `flag_v` with `flag_w` (`R V_i R̃ = W_i` for every `i`).
pub fn align_flags(flag_v: &Flag, flag_w: &Flag) -> Result<Rotor> {
    align_flags_with_steps(flag_v, flag_w).map(|(r, _)| r)
}

/// Like [`align_flags`], also returning the step rotors `R_{m−1}, …, R_1`
/// in the order they were applied.
pub fn align_flags_with_steps(flag_v: &Flag, flag_w: &Flag) -> Result<(Rotor, Vec<Rotor>)> {
    let m = flag_v.len();
    if flag_w.len() != m || flag_v.dim() != flag_w.dim() {
        return Err(Error::FlagMismatch(format!(
            "flags of length {m} in G_{} and {} in G_{}",
            flag_v.dim(),
            flag_w.len(),
            flag_w.dim()
        )));
    }
    if !flag_v.is_complete() {
        return Err(Error::FlagMismatch(format!(
            "flags must be complete ({} of {} stages)",
            m,
            flag_v.dim()
        )));
    }
    let top = flag_v.blades[m - 1].max_abs_diff(&flag_w.blades[m - 1]);
    if top > FRAME_TOL {
        return Err(Error::FlagMismatch(format!(
            "top blades differ by {top:e} (opposite orientation?)"
        )));
    }
    let v = &flag_v.blades;
    let w = &flag_w.blades;
    let mut rotor = Rotor::identity(flag_v.dim());
    let mut steps = Vec::with_capacity(m.saturating_sub(1));
    for i in (0..m - 1).rev() {
        let vi = rotor.sandwich(&v[i]);
        let w_next_star = w[i + 1].dual();
        let n_v = (vi ^ w_next_star).normalize()?.dual();
        let n_w = (w[i] ^ w_next_star).normalize()?.dual();
        let step = match rotor_between_vectors(&n_v, &n_w) {
            Ok(r) => r,
            Err(Error::AntipodalVectors) => {
                let u = vector_in(&vi);
                rotor_between_vectors(&u, &n_w)?.compose(&rotor_between_vectors(&n_v, &u)?)
            }
            Err(e) => return Err(e),
        };
        rotor = step.compose(&rotor);
        steps.push(step);
    }
    Ok((rotor, steps))
}

/// Rotor taking every `xs[i]` to `ys[i]`.
pub fn align_bases(pair: &FramePair) -> Result<Rotor> {
    align_flags(&flag_from_basis(&pair.xs)?, &flag_from_basis(&pair.ys)?)
}

fn stage(blade: Multivector, scale: f64, what: &str) -> Result<Multivector> {
    let n = blade.norm();
    if n <= DEGENERATE_TOL * scale.max(1.0) {
        return Err(Error::DegenerateConfiguration(format!(
            "{what} vanishes (norm {n:e}); perturb the target slightly"
        )));
    }
    Ok(blade / n)
}

/// `[x̂, (x∧z*)^, I]` for `q = x + z` in `G_3`.
pub fn frame_flag_36(q: &Multivector) -> Result<Flag> {
    if q.dim() != 3 {
        return Err(Error::DimensionMismatch {
            left: 3,
            right: q.dim(),
        });
    }
    let x = q.grade_part(1);
    let z = q.grade_part(2);
    let (nx, nz) = (x.norm(), z.norm());
    let x_hat = stage(x, 1.0, "vector part x")?;
    stage(z, 1.0, "bivector part z")?;
    let plane = stage(x ^ z.dual(), nx * nz, "x∧z* (x parallel to z*)")?;
    Flag::new(vec![x_hat, plane, Multivector::pseudoscalar(3)])
}

/// `[ℓ̂, (ℓ∧(ℓ·y))^, (ℓ∧y)^, I]` for `q = x e1 + ℓ + y` in `G_4`.
pub fn frame_flag_47(q: &Multivector) -> Result<Flag> {
    if q.dim() != 4 {
        return Err(Error::DimensionMismatch {
            left: 4,
            right: q.dim(),
        });
    }
    let mut l = q.grade_part(1);
    l.set(0b0001, 0.0);
    let y = q.grade_part(2);
    let (nl, ny) = (l.norm(), y.norm());
    let l_hat = stage(l, 1.0, "ℓ")?;
    stage(y, 1.0, "y")?;
    let ly = l | y;
    let plane = stage(l ^ ly, nl * nl * ny, "ℓ∧(ℓ·y)")?;
    let volume = stage(l ^ y, nl * ny, "ℓ∧y")?;
    Flag::new(vec![l_hat, plane, volume, Multivector::pseudoscalar(4)])
}

/// The model's flag for a point.
pub fn frame_flag(point: &Point) -> Result<Flag> {
    match point.model() {
        Model::M36 => frame_flag_36(point.as_multivector()),
        Model::M47 => frame_flag_47(point.as_multivector()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(dim: usize, i: usize) -> Multivector {
        Multivector::e(dim, i)
    }

    #[test]
    fn rotor_between_examples() {
        let r = rotor_between_vectors(&e(3, 1), &e(3, 1)).unwrap();
        assert!(r.as_multivector().max_abs_diff(&Multivector::scalar(3, 1.0)) < 1e-15);

        let r = rotor_between_vectors(&e(3, 1), &e(3, 2)).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = Multivector::scalar(3, h) - h * Multivector::blade(3, &[1, 2]);
        assert!(r.as_multivector().max_abs_diff(&expected) < 1e-15);
        assert!(r.sandwich(&e(3, 1)).max_abs_diff(&e(3, 2)) < 1e-15);
        // fixes (x∧y)* = ±e3
        assert!(r.sandwich(&e(3, 3)).max_abs_diff(&e(3, 3)) < 1e-15);

        assert!(matches!(
            rotor_between_vectors(&e(3, 1), &-e(3, 1)),
            Err(Error::AntipodalVectors)
        ));
        assert!(matches!(
            rotor_between_vectors(&(2.0 * e(3, 1)), &e(3, 2)),
            Err(Error::NotUnitVector(_))
        ));
    }

    #[test]
    fn flag_from_basis_examples() {
        let f = flag_from_basis(&[e(3, 1), e(3, 2), e(3, 3)]).unwrap();
        assert_eq!(f.blades()[1], Multivector::blade(3, &[1, 2]));
        assert_eq!(f.blades()[2], Multivector::pseudoscalar(3));

        let f = flag_from_basis(&[e(3, 2), e(3, 1), e(3, 3)]).unwrap();
        assert_eq!(f.blades()[0], e(3, 2));
        assert_eq!(f.blades()[1], -Multivector::blade(3, &[1, 2]));
        assert_eq!(f.blades()[2], -Multivector::pseudoscalar(3));

        let nearly = e(3, 1) + 1e-15 * e(3, 2);
        assert!(matches!(
            flag_from_basis(&[e(3, 1), nearly]),
            Err(Error::DependentVectors { stage: 2 })
        ));
    }

    #[test]
    fn flag_rejects_non_nested_stages() {
        let bad = Flag::new(vec![e(3, 3), Multivector::blade(3, &[1, 2])]);
        assert!(matches!(bad, Err(Error::FlagMismatch(_))));
    }

    #[test]
    fn identical_flags_give_identity() {
        let f = flag_from_basis(&[e(3, 1) + e(3, 2), e(3, 2), e(3, 3)]).unwrap();
        let r = align_flags(&f, &f).unwrap();
        assert!(r.as_multivector().max_abs_diff(&Multivector::scalar(3, 1.0)) < 1e-14);
    }

    #[test]
    fn quarter_turn_in_e12() {
        let xs = vec![e(3, 1), e(3, 2), e(3, 3)];
        let ys = vec![e(3, 2), -e(3, 1), e(3, 3)];
        let pair = FramePair::new(xs.clone(), ys.clone()).unwrap();
        let r = align_bases(&pair).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert!(r.sandwich(x).max_abs_diff(y) < 1e-12);
        }
    }

    #[test]
    fn antipodal_step_is_recovered() {
        // half turn about e3: every step of the flag walk is antipodal
        let xs = vec![e(3, 1), e(3, 2), e(3, 3)];
        let ys = vec![-e(3, 1), -e(3, 2), e(3, 3)];
        let r = align_bases(&FramePair::new(xs.clone(), ys.clone()).unwrap()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert!(r.sandwich(x).max_abs_diff(y) < 1e-12);
        }
        assert!(r.unitality_error() < 1e-12);
    }

    #[test]
    fn frame_pair_rejects_gram_mismatch() {
        let xs = vec![e(3, 1), e(3, 2), e(3, 3)];
        let ys = vec![e(3, 1), e(3, 1) + e(3, 2), e(3, 3)];
        assert!(matches!(FramePair::new(xs, ys), Err(Error::FlagMismatch(_))));
    }

    #[test]
    fn frame_pair_rejects_reflection() {
        let xs = vec![e(3, 1), e(3, 2), e(3, 3)];
        let ys = vec![e(3, 1), e(3, 2), -e(3, 3)];
        assert!(matches!(FramePair::new(xs, ys), Err(Error::FlagMismatch(_))));
    }

    #[test]
    fn flag_36_examples() {
        let q = e(3, 1) + Multivector::blade(3, &[1, 2]);
        let f = frame_flag_36(&q).unwrap();
        // (e12)* = e12 e123 = -e3
        assert_eq!(f.blades()[1], -Multivector::blade(3, &[1, 3]));

        let q = e(3, 1) + Multivector::blade(3, &[2, 3]);
        assert!(matches!(
            frame_flag_36(&q),
            Err(Error::DegenerateConfiguration(_))
        ));
        assert!(frame_flag_36(&e(3, 1)).is_err());
    }

    #[test]
    fn flag_47_degenerate_volume() {
        // y = -e1∧ℓ makes ℓ∧y vanish
        let l = 2.0 * e(4, 2) + e(4, 3);
        let q = l - (e(4, 1) ^ l);
        assert!(matches!(
            frame_flag_47(&q),
            Err(Error::DegenerateConfiguration(_))
        ));
    }
}
