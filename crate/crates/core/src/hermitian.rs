//! The hermitian space of signature (+,+,−): form, points, pairwise and
//! triple invariants, line classification and Gram realization.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cr, cross, phase_normalize};
use crate::{Vector, C64};

/// Tolerances used for degeneracy decisions. All are relative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Equality and degeneracy tests.
    pub tol: f64,
    /// `|⟨v,v⟩| ≤ isotropy · ‖v‖²` marks `v` as isotropic.
    pub isotropy: f64,
    /// Eigenvalue clustering.
    pub eigen: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tol: 1e-9, isotropy: 1e-9, eigen: 1e-7 }
    }
}

impl Tolerances {
    pub fn with_tol(tol: f64) -> Self {
        Tolerances { tol, isotropy: tol, ..Default::default() }
    }
}

/// `⟨u,v⟩ = u₁v̄₁ + u₂v̄₂ − u₃v̄₃`.
#[inline]
pub fn form(u: &Vector, v: &Vector) -> C64 {
    u[0] * v[0].conj() + u[1] * v[1].conj() - u[2] * v[2].conj()
}

/// `⟨v,v⟩` as a real number.
#[inline]
pub fn norm2(v: &Vector) -> f64 {
    v[0].norm_sqr() + v[1].norm_sqr() - v[2].norm_sqr()
}

/// A projective point with its canonical representative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::json::PointRepr", into = "crate::json::PointRepr")]
pub struct Point {
    rep: Vector,
    sign: i8,
}

impl Point {
    /// Canonical representative: `⟨rep,rep⟩ = sign`, largest entry real ≥ 0.
    pub fn rep(&self) -> &Vector {
        &self.rep
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn sigma(&self) -> f64 {
        self.sign as f64
    }

    pub fn is_negative(&self) -> bool {
        self.sign < 0
    }

    /// Projective equality, compared on canonical representatives.
    pub fn approx_eq(&self, other: &Point, tol: f64) -> bool {
        self.sign == other.sign && same_line_vectors(&self.rep, &other.rep, tol)
    }
}

/// Canonicalize a nonisotropic vector.
pub fn point(v: Vector) -> Result<Point> {
    point_tol(v, Tolerances::default().isotropy)
}

/// [`point`] with an explicit isotropy tolerance.
pub fn point_tol(v: Vector, isotropy_tol: f64) -> Result<Point> {
    let n2 = norm2(&v);
    let e2 = v.norm_squared();
    if !n2.is_finite() || e2 == 0.0 || n2.abs() <= isotropy_tol * e2 {
        return Err(Error::IsotropicVector);
    }
    let scaled = v / cr(n2.abs().sqrt());
    Ok(Point { rep: phase_normalize(&scaled), sign: if n2 > 0.0 { 1 } else { -1 } })
}

/// True when `u ∧ v` is negligible, i.e. both span the same complex line.
pub fn same_line_vectors(u: &Vector, v: &Vector, tol: f64) -> bool {
    cross(u, v).norm() <= tol * u.norm() * v.norm()
}

/// Gram matrix `g_jk = ⟨p_j,p_k⟩`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::json::GramRepr", into = "crate::json::GramRepr")]
pub struct Gram {
    pub entries: DMatrix<C64>,
}

impl Gram {
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::InvalidInput("gram matrix must be square".into()));
        }
        let scale = entries.norm().max(1.0);
        if (&entries - entries.adjoint()).norm() > 1e-9 * scale {
            return Err(Error::InvalidInput("gram matrix must be hermitian".into()));
        }
        Ok(Gram { entries })
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, j: usize, k: usize) -> C64 {
        self.entries[(j, k)]
    }
}

/// Gram matrix of a list of vectors.
pub fn gram_of(vs: &[Vector]) -> Gram {
    let n = vs.len();
    Gram { entries: DMatrix::from_fn(n, n, |j, k| form(&vs[j], &vs[k])) }
}

/// Gram matrix of points (canonical representatives).
pub fn gram_of_points(ps: &[Point]) -> Gram {
    let vs: Vec<Vector> = ps.iter().map(|p| *p.rep()).collect();
    gram_of(&vs)
}

/// `g₁₂g₂₁/(g₁₁g₂₂)` on representatives.
pub fn tance_v(u: &Vector, v: &Vector) -> f64 {
    form(u, v).norm_sqr() / (norm2(u) * norm2(v))
}

/// `Im(g₁₂g₂₃g₃₁)/(g₁₁g₂₂g₃₃)` on representatives.
pub fn alpha_v(u: &Vector, v: &Vector, w: &Vector) -> f64 {
    (form(u, v) * form(v, w) * form(w, u)).im / (norm2(u) * norm2(v) * norm2(w))
}

/// `det G/(g₁₁g₂₂g₃₃)` on representatives.
pub fn beta_v(u: &Vector, v: &Vector, w: &Vector) -> f64 {
    let g = gram_of(&[*u, *v, *w]).entries;
    let d = g.determinant().re;
    d / (g[(0, 0)].re * g[(1, 1)].re * g[(2, 2)].re)
}

/// Complex `g₁₃g₂₂/(g₁₂g₂₃)` on representatives; [`tau`] is its real part.
pub fn tau_complex_v(u: &Vector, v: &Vector, w: &Vector, tol: f64) -> Result<C64> {
    let g12 = form(u, v);
    let g23 = form(v, w);
    let scale = (norm2(u) * norm2(v)).abs().sqrt() * (norm2(v) * norm2(w)).abs().sqrt();
    if (g12 * g23).norm() <= tol * scale {
        return Err(Error::DegenerateTau);
    }
    Ok(form(u, w) * cr(norm2(v)) / (g12 * g23))
}

pub fn tance(p1: &Point, p2: &Point) -> f64 {
    tance_v(p1.rep(), p2.rep())
}

pub fn alpha(p1: &Point, p2: &Point, p3: &Point) -> f64 {
    alpha_v(p1.rep(), p2.rep(), p3.rep())
}

pub fn beta(p1: &Point, p2: &Point, p3: &Point) -> f64 {
    beta_v(p1.rep(), p2.rep(), p3.rep())
}

/// `Re(g₁₃g₂₂/(g₁₂g₂₃))`.
pub fn tau(p1: &Point, p2: &Point, p3: &Point) -> Result<f64> {
    Ok(tau_complex_v(p1.rep(), p2.rep(), p3.rep(), Tolerances::default().tol)?.re)
}

/// Signature type of the projective line through two points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LineType {
    Hyperbolic,
    Spherical,
    Euclidean,
}

pub fn line_type(p1: &Point, p2: &Point) -> Result<LineType> {
    line_type_v(p1.rep(), p2.rep(), Tolerances::default().tol)
}

/// Classify the span of two vectors by `det₂ = g₁₁g₂₂ − |g₁₂|²`.
pub fn line_type_v(u: &Vector, v: &Vector, tol: f64) -> Result<LineType> {
    if same_line_vectors(u, v, tol) {
        return Err(Error::SamePoint);
    }
    let g11 = norm2(u);
    let g22 = norm2(v);
    let g12 = form(u, v).norm_sqr();
    let det2 = g11 * g22 - g12;
    let scale = (g11 * g22).abs().max(g12);
    Ok(if det2 < -tol * scale {
        LineType::Hyperbolic
    } else if det2 > tol * scale {
        LineType::Spherical
    } else {
        LineType::Euclidean
    })
}

/// Vector orthogonal to both `u` and `v`.
pub fn orthogonal_complement(u: &Vector, v: &Vector) -> Vector {
    let ju = Vector::new(u[0].conj(), u[1].conj(), -u[2].conj());
    let jv = Vector::new(v[0].conj(), v[1].conj(), -v[2].conj());
    cross(&ju, &jv)
}

/// Polar point of a noneuclidean line.
pub fn polar_point(p1: &Point, p2: &Point) -> Result<Point> {
    match line_type(p1, p2)? {
        LineType::Euclidean => Err(Error::EuclideanLine),
        _ => point(orthogonal_complement(p1.rep(), p2.rep())),
    }
}

/// `v − (⟨v,p⟩/⟨p,p⟩) p`.
pub fn project_orthogonal(p: &Point, v: &Vector) -> Vector {
    project_orthogonal_v(p.rep(), v)
}

pub fn project_orthogonal_v(p: &Vector, v: &Vector) -> Vector {
    v - p * (form(v, p) / cr(norm2(p)))
}

/// Vectors `v_j` in the standard basis with `⟨v_j,v_k⟩ = g_jk`.
///
/// Representatives are returned as vectors because the Gram matrix fixes
/// their scale and phase, which a canonical [`Point`] would discard; rows
/// of `G` with isotropic diagonal are legitimate inputs as well.
pub fn realize_gram(g: &Gram) -> Result<Vec<Vector>> {
    realize_gram_tol(g, Tolerances::default().tol)
}

pub fn realize_gram_tol(g: &Gram, tol: f64) -> Result<Vec<Vector>> {
    let n = g.n();
    // ⟨v_j,v_k⟩ = v_k^H J v_j, so M^H J M = conj(G) for M = [v_1 … v_n].
    let h = g.entries.map(|z| z.conj());
    let h = (&h + h.adjoint()) * cr(0.5);
    let eig = SymmetricEigen::new(h);
    let scale = eig.eigenvalues.amax().max(f64::MIN_POSITIVE);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for &k in &order {
        let l = eig.eigenvalues[k];
        if l > tol * scale {
            pos.push(k);
        } else if l < -tol * scale {
            neg.push(k);
        }
    }
    if pos.len() > 2 || neg.len() > 1 {
        return Err(Error::IncompatibleInertia { pos: pos.len(), neg: neg.len() });
    }
    let mut rows: [Option<usize>; 3] = [None; 3];
    for (slot, &k) in pos.iter().enumerate() {
        rows[slot] = Some(k);
    }
    if let Some(&k) = neg.first() {
        rows[2] = Some(k);
    }
    let mut out = vec![Vector::zeros(); n];
    for (slot, row) in rows.iter().enumerate() {
        let Some(k) = *row else { continue };
        let l = eig.eigenvalues[k];
        let w = eig.eigenvectors.column(k).into_owned();
        // deterministic phase: largest entry real positive
        let mut idx = 0;
        for i in 1..n {
            if w[i].norm() > w[idx].norm() * (1.0 + 1e-12) {
                idx = i;
            }
        }
        let ph = w[idx] / cr(w[idx].norm());
        let w = w * ph.conj();
        let s = l.abs().sqrt();
        for j in 0..n {
            out[j][slot] = w[j].conj() * cr(s);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn e(k: usize) -> Vector {
        let mut v = Vector::zeros();
        v[k] = cr(1.0);
        v
    }

    #[test]
    fn form_on_basis() {
        assert_eq!(form(&e(0), &e(0)), cr(1.0));
        assert_eq!(form(&e(2), &e(2)), cr(-1.0));
        let ones = Vector::new(cr(1.0), cr(1.0), cr(1.0));
        assert_eq!(form(&ones, &e(2)), cr(-1.0));
    }

    #[test]
    fn point_canonicalization() {
        let p = point(e(2)).unwrap();
        assert_eq!(p.sign(), -1);
        assert_eq!(*p.rep(), e(2));
        let q = point(e(0) * cr(2.0)).unwrap();
        assert_eq!(q.sign(), 1);
        assert!((q.rep() - e(0)).norm() < 1e-15);
        let r = point(Vector::new(cr(0.0), cr(1f64.sinh()), cr(1f64.cosh()))).unwrap();
        assert_eq!(r.sign(), -1);
        assert!((norm2(r.rep()) + 1.0).abs() < 1e-14);
        let iso = Vector::new(cr(1.0), cr(0.0), cr(1.0));
        assert_eq!(point(iso), Err(Error::IsotropicVector));
    }

    #[test]
    fn tance_examples() {
        let p = point(e(2)).unwrap();
        assert!((tance(&p, &p) - 1.0).abs() < 1e-15);
        let q = point(Vector::new(cr(0.0), cr(1f64.sinh()), cr(1f64.cosh()))).unwrap();
        assert!((tance(&p, &q) - 1f64.cosh().powi(2)).abs() < 1e-13);
    }

    #[test]
    fn orthogonal_frame_invariants() {
        let (a, b, d) = (point(e(0)).unwrap(), point(e(1)).unwrap(), point(e(2)).unwrap());
        assert_eq!(alpha(&a, &b, &d), 0.0);
        assert!((beta(&a, &b, &d) - 1.0).abs() < 1e-15);
        assert_eq!(tau(&a, &b, &d), Err(Error::DegenerateTau));
    }

    #[test]
    fn line_types_and_polars() {
        let (a, b, d) = (point(e(0)).unwrap(), point(e(1)).unwrap(), point(e(2)).unwrap());
        assert_eq!(line_type(&a, &b).unwrap(), LineType::Spherical);
        assert_eq!(line_type(&a, &d).unwrap(), LineType::Hyperbolic);
        assert_eq!(line_type(&a, &a), Err(Error::SamePoint));
        let pol = polar_point(&a, &b).unwrap();
        assert_eq!(pol.sign(), -1);
        assert!((pol.rep() - e(2)).norm() < 1e-15);
        let pol = polar_point(&a, &d).unwrap();
        assert_eq!(pol.sign(), 1);
        assert!((pol.rep() - e(1)).norm() < 1e-15);
        let iso_line = point(Vector::new(cr(1.0), cr(1.0), cr(1.0))).unwrap();
        // span of e₂ and (1,1,1) contains the isotropic (1,0,1)
        assert_eq!(line_type(&b, &iso_line).unwrap(), LineType::Euclidean);
        assert_eq!(polar_point(&b, &iso_line), Err(Error::EuclideanLine));
    }

    #[test]
    fn projection_examples() {
        let p = point(e(2)).unwrap();
        assert_eq!(project_orthogonal(&p, &e(0)), e(0));
        assert_eq!(project_orthogonal(&p, &e(2)), Vector::zeros());
        assert_eq!(project_orthogonal(&p, &(e(0) + e(2))), e(0));
    }

    #[test]
    fn realize_standard_diagonal() {
        let g = Gram::new(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            cr(1.0),
            cr(1.0),
            cr(-1.0),
        ])))
        .unwrap();
        let vs = realize_gram(&g).unwrap();
        let back = gram_of(&vs);
        assert!((back.entries - g.entries).norm() < 1e-14);
        for (k, v) in vs.iter().enumerate() {
            assert!((v[k].norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn realize_rejects_bad_inertia() {
        let g = Gram::new(DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            cr(-1.0),
            cr(-1.0),
            cr(1.0),
        ])))
        .unwrap();
        assert_eq!(realize_gram(&g), Err(Error::IncompatibleInertia { pos: 1, neg: 2 }));
    }

    #[test]
    fn realize_isotropic_fixture_gram() {
        let z = c(0.125, 0.0);
        let g = DMatrix::from_row_slice(
            3,
            3,
            &[cr(0.0), cr(0.5), cr(1.0), cr(0.5), cr(0.0), z.conj(), cr(1.0), z, cr(1.0)],
        );
        let vs = realize_gram(&Gram::new(g.clone()).unwrap()).unwrap();
        assert!((gram_of(&vs).entries - g).norm() < 1e-12);
    }
}
