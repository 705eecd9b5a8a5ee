//! Random configurations for tests, benches and the CLI.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::hermitian::{norm2, point, Point};
use crate::isometry::{Isometry, LieElement};
use crate::triples::SCoords;
use crate::linalg::{c, cr, form_adjoint};
use crate::{Mat3, Vector, C64};

pub fn gaussian_c<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R) -> Vector {
    Vector::new(gaussian_c(rng), gaussian_c(rng), gaussian_c(rng))
}

/// A random nonisotropic point, either sign, kept away from the null cone.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R) -> Point {
    loop {
        let v = random_vector(rng);
        if norm2(&v).abs() > 0.05 * v.norm_squared() {
            return point(v).unwrap();
        }
    }
}

/// Negative point `(w₁, w₂, 1)` with `|w| ≤ radius < 1`.
pub fn random_negative_point<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Point {
    loop {
        let w = Vector::new(gaussian_c(rng), gaussian_c(rng), cr(0.0));
        let r = radius * rng.random::<f64>().sqrt();
        let n = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
        if n < 1e-9 {
            continue;
        }
        let ph = C64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU);
        let v = Vector::new(w[0] * cr(r / n), w[1] * cr(r / n), cr(1.0)) * ph;
        return point(v).unwrap();
    }
}

/// Positive point kept away from the null cone.
pub fn random_positive_point<R: Rng + ?Sized>(rng: &mut R) -> Point {
    loop {
        let p = random_point(rng);
        if p.sign() > 0 {
            return p;
        }
    }
}

/// Random element of su(2,1) with entries of size about `scale`.
pub fn random_lie<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> LieElement {
    let a = Mat3::from_fn(|_, _| gaussian_c(rng) * cr(scale));
    let mut x = (a - form_adjoint(&a)) * cr(0.5);
    let t = x.trace() / cr(3.0);
    x -= Mat3::identity() * t;
    LieElement::new(x)
}

/// `exp` of a random algebra element.
pub fn random_isometry<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Isometry {
    random_lie(rng, scale).exp()
}

/// Random admissible coordinates with sign pattern `sigma`; `real` forces
/// `α = 0`.
pub fn random_scoords<R: Rng + ?Sized>(rng: &mut R, sigma: [i8; 3], real: bool) -> SCoords {
    let [s1, s2, s3] = sigma.map(|s| s as f64);
    loop {
        let a = (s1 * s2).max(0.0) + 0.2 + 3.0 * rng.random::<f64>();
        let b = (s2 * s3).max(0.0) + 0.2 + 3.0 * rng.random::<f64>();
        let (t1, t2) = (s1 * s2 * a, s2 * s3 * b);
        let alpha = if real { 0.0 } else { rng.random_range(-2.0..2.0) };
        let t = rng.random_range(-1.5..3.5);
        let c = SCoords::on_surface(t, t1, t2, sigma, alpha);
        if c.check(1e-9).is_ok() && c.beta.abs() > 1e-3 && (t - 1.0).abs() > 1e-3 {
            return c;
        }
    }
}
