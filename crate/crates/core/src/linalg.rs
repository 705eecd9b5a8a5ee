//! Small dense helpers for 3×3 complex matrices and tiny real systems.

use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;

use crate::{Mat3, Vector, C64};

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    Complex64::new(re, 0.0)
}

/// `J = diag(1, 1, -1)`.
pub fn j_mat() -> Mat3 {
    Mat3::from_diagonal(&Vector::new(cr(1.0), cr(1.0), cr(-1.0)))
}

/// Adjoint with respect to the form: `J m^H J`.
pub fn form_adjoint(m: &Mat3) -> Mat3 {
    let j = j_mat();
    j * m.adjoint() * j
}

/// The rank-one map `x ↦ ⟨x,p⟩ v`, i.e. `v p^H J`.
pub fn rank_one(v: &Vector, p: &Vector) -> Mat3 {
    let mut pj = p.adjoint();
    pj[(0, 2)] = -pj[(0, 2)];
    v * pj
}

/// Bilinear cross product (no conjugation).
pub fn cross(a: &Vector, b: &Vector) -> Vector {
    Vector::new(
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )
}

/// A vector spanning the (approximate) kernel of a rank-2 matrix.
///
/// Picks the largest cross product of two rows, then polishes with one
/// step of inverse-free refinement against the smallest singular vector.
pub fn null_vector(a: &Mat3) -> Vector {
    let rows: Vec<Vector> = (0..3).map(|i| a.row(i).transpose()).collect();
    let mut best = cross(&rows[0], &rows[1]);
    for (i, j) in [(0usize, 2usize), (1, 2)] {
        let cand = cross(&rows[i], &rows[j]);
        if cand.norm() > best.norm() {
            best = cand;
        }
    }
    if best.norm() > 1e-300 {
        return best / cr(best.norm());
    }
    // rank ≤ 1: fall back on the SVD
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let k = argmin(svd.singular_values.as_slice());
    vt.row(k).adjoint()
}

fn argmin(xs: &[f64]) -> usize {
    let mut k = 0;
    for (i, x) in xs.iter().enumerate() {
        if *x < xs[k] {
            k = i;
        }
    }
    k
}

/// Eigenvalues of a 3×3 complex matrix via complex Schur.
pub fn eigenvalues(m: &Mat3) -> [C64; 3] {
    let s = Schur::new(*m);
    let (_, t) = s.unpack();
    [t[(0, 0)], t[(1, 1)], t[(2, 2)]]
}

/// Eigen-decomposition for matrices with three distinct eigenvalues.
/// Returns the eigenvalues and unit eigenvectors as columns.
pub fn eigen(m: &Mat3) -> ([C64; 3], Mat3) {
    let lam = eigenvalues(m);
    let mut p = Mat3::zeros();
    for (k, l) in lam.iter().enumerate() {
        let a = m - Mat3::identity() * *l;
        let mut v = null_vector(&a);
        // one inverse-iteration polish
        let shifted = m - Mat3::identity() * (*l + cr(1e-12 * (1.0 + l.norm())));
        if let Some(inv) = shifted.try_inverse() {
            let w = inv * v;
            if w.norm().is_finite() && w.norm() > 0.0 {
                v = w / cr(w.norm());
            }
        }
        p.set_column(k, &v);
    }
    (lam, p)
}

/// Spectral norm.
pub fn op_norm(m: &Mat3) -> f64 {
    m.singular_values().max()
}

/// Spectral norm of an arbitrary complex matrix.
pub fn op_norm_d(m: &DMatrix<C64>) -> f64 {
    m.singular_values().max()
}

/// Principal cube root.
pub fn cbrt_c(z: C64) -> C64 {
    C64::from_polar(z.norm().cbrt(), z.arg() / 3.0)
}

/// The three cube roots of unity, `exp(2πik/3)`.
pub fn cube_roots_of_unity() -> [C64; 3] {
    let w = 2.0 * std::f64::consts::PI / 3.0;
    [cr(1.0), C64::from_polar(1.0, w), C64::from_polar(1.0, -w)]
}

/// Rescale by the principal cube root of the determinant so that `det = 1`.
pub fn unit_det(m: &Mat3) -> Mat3 {
    let d = m.determinant();
    m / cbrt_c(d)
}

/// Among `m·δ` for cube roots of unity δ, the one closest to the identity.
pub fn nearest_identity_lift(m: &Mat3) -> Mat3 {
    let mut best = *m;
    let mut dist = f64::INFINITY;
    for d in cube_roots_of_unity() {
        let cand = m * d;
        let e = (cand - Mat3::identity()).norm();
        if e < dist {
            dist = e;
            best = cand;
        }
    }
    best
}

/// Principal logarithm of a matrix close to the identity: square roots by
/// Denman–Beavers until `‖m − I‖ < 0.05`, then the Mercator series.
pub fn log_near_identity(m: &Mat3) -> Mat3 {
    let id = Mat3::identity();
    let mut y = *m;
    let mut k = 0;
    while (y - id).norm() >= 0.05 && k < 40 {
        let mut a = y;
        let mut z = id;
        for _ in 0..60 {
            let (Some(ai), Some(zi)) = (a.try_inverse(), z.try_inverse()) else { break };
            let an = (a + zi) * cr(0.5);
            let zn = (z + ai) * cr(0.5);
            let done = (an - a).norm() <= 1e-15 * an.norm();
            a = an;
            z = zn;
            if done {
                break;
            }
        }
        y = a;
        k += 1;
    }
    let x = y - id;
    let mut term = x;
    let mut out = Mat3::zeros();
    for n in 1..60 {
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        out += term * cr(sign / n as f64);
        term *= x;
        if term.norm() < 1e-18 {
            break;
        }
    }
    out * cr(2f64.powi(k))
}

/// One Newton–Schulz step towards the form-unitary group followed by a
/// determinant correction.
pub fn reproject_su(m: &Mat3) -> Mat3 {
    let x = *m;
    let g = form_adjoint(&x) * x;
    let y = x * (Mat3::identity() * cr(3.0) - g) * cr(0.5);
    unit_det(&y)
}

/// `‖m^H J m − J‖` (Frobenius).
pub fn form_defect(m: &Mat3) -> f64 {
    let j = j_mat();
    (m.adjoint() * j * m - j).norm()
}

/// Null space of a real matrix: right singular vectors whose singular
/// value is at most `rel_tol` times the largest one.
pub fn real_null_space(a: &DMatrix<f64>, rel_tol: f64) -> (Vec<DVector<f64>>, Vec<f64>) {
    let n = a.ncols();
    let padded = if a.nrows() < n {
        let mut p = DMatrix::<f64>::zeros(n, n);
        p.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let sv = svd.singular_values.clone();
    let smax = sv.max().max(f64::MIN_POSITIVE);
    let mut out = Vec::new();
    let mut svals: Vec<f64> = sv.iter().copied().collect();
    svals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    for k in 0..sv.len() {
        if sv[k] <= rel_tol * smax {
            out.push(vt.row(k).transpose());
        }
    }
    (out, svals)
}

/// Rotate `v` so its largest-modulus entry is real and nonnegative
/// (ties go to the lowest index).
pub fn phase_normalize(v: &Vector) -> Vector {
    let mut k = 0;
    let mut best = v[0].norm();
    for i in 1..3 {
        if v[i].norm() > best * (1.0 + 1e-12) {
            best = v[i].norm();
            k = i;
        }
    }
    if best == 0.0 {
        return *v;
    }
    let ph = v[k] / cr(v[k].norm());
    v * ph.conj()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_vector_of_rank_two() {
        let a = Mat3::new(
            cr(1.0), cr(2.0), cr(3.0),
            cr(4.0), cr(5.0), cr(6.0),
            cr(7.0), cr(8.0), cr(9.0),
        );
        let v = null_vector(&a);
        assert!((a * v).norm() < 1e-12);
    }

    #[test]
    fn eigen_of_diagonal_conjugate() {
        let d = Mat3::from_diagonal(&Vector::new(cr(2.0), c(0.0, 1.0), cr(-0.5)));
        let p = Mat3::new(
            cr(1.0), cr(0.5), c(0.0, 0.3),
            cr(0.0), cr(1.0), cr(0.2),
            c(0.1, 0.1), cr(0.0), cr(1.0),
        );
        let m = p * d * p.try_inverse().unwrap();
        let (lam, vecs) = eigen(&m);
        for k in 0..3 {
            let v = vecs.column(k).into_owned();
            assert!((m * v - v * lam[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn unit_det_and_reprojection() {
        let m = Mat3::identity() * c(0.0, 2.0);
        assert!((unit_det(&m).determinant() - cr(1.0)).norm() < 1e-14);
        let near = Mat3::identity() + Mat3::from_element(cr(1e-6));
        let r = reproject_su(&near);
        assert!(form_defect(&r) < 1e-10);
    }

    #[test]
    fn log_inverts_exp() {
        let x = Mat3::new(
            c(0.0, 0.3), cr(0.4), c(0.1, -0.2),
            cr(-0.4), c(0.0, -0.1), cr(0.25),
            c(0.1, 0.2), cr(0.25), c(0.0, -0.2),
        );
        // small and moderate sizes exercise the series alone and the square roots
        for scale in [0.01, 0.5, 2.0] {
            let xs = x * cr(scale);
            let l = log_near_identity(&xs.exp());
            assert!((l - xs).norm() < 1e-12 * (1.0 + xs.norm()), "scale {scale}");
        }
        assert!(log_near_identity(&Mat3::identity()).norm() == 0.0);
    }

    #[test]
    fn real_null_space_dimension() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 1.0]);
        let (ns, _) = real_null_space(&a, 1e-12);
        assert_eq!(ns.len(), 2);
    }
}
