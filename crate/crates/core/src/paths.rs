//! Normalized lifts, the hat operator, path-following isometries and
//! bendings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{
    form, line_type_v, norm2, orthogonal_complement, point, same_line_vectors, tance_v, LineType,
    Point, Tolerances,
};
use crate::isometry::{Isometry, LieElement};
use crate::linalg::{cr, rank_one, reproject_su};
use crate::{Mat3, Vector, C64};

/// Largest projective angle allowed between adjacent samples.
pub const MAX_STEP_ANGLE: f64 = 0.2;

/// A sampled path of points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub params: Vec<f64>,
    pub points: Vec<Point>,
}

impl PathSample {
    pub fn new(params: Vec<f64>, points: Vec<Point>) -> Result<Self> {
        if params.len() != points.len() || params.is_empty() {
            return Err(Error::InvalidInput("params and points must have equal nonzero length".into()));
        }
        if params.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("params must be strictly increasing".into()));
        }
        Ok(PathSample { params, points })
    }

    /// Sample `f` on a uniform grid of `n` steps over `[a, b]`.
    pub fn from_fn<F: Fn(f64) -> Vector>(a: f64, b: f64, n: usize, f: F) -> Result<Self> {
        let params: Vec<f64> = (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect();
        let points = params.iter().map(|s| point(f(*s))).collect::<Result<Vec<_>>>()?;
        PathSample::new(params, points)
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }
}

/// The rank-one map `x ↦ ⟨x,p⟩v` based at `p`, with `⟨v,p⟩ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentAtPoint {
    pub base: Point,
    pub v: Vector,
}

impl TangentAtPoint {
    pub fn new(base: Point, v: Vector) -> Self {
        TangentAtPoint { base, v }
    }

    /// The map `⟨−,u⟩w` where `u` is any representative of the base point.
    pub fn from_rep(u: &Vector, w: &Vector) -> Result<Self> {
        let base = point(*u)?;
        let lambda = form(u, base.rep()) * cr(base.sigma());
        Ok(TangentAtPoint { base, v: w * lambda.conj() })
    }

    pub fn zero(base: Point) -> Self {
        TangentAtPoint { base, v: Vector::zeros() }
    }

    /// Matrix of `x ↦ ⟨x,p⟩v`.
    pub fn matrix(&self) -> Mat3 {
        rank_one(&self.v, self.base.rep())
    }

    /// `w` such that the map equals `⟨−,u⟩w` for the representative `u`.
    pub fn vector_for_rep(&self, u: &Vector) -> Vector {
        let lambda = form(u, self.base.rep()) * cr(self.base.sigma());
        self.v / lambda.conj()
    }
}

/// `t̂ = t − t*`, with `t* = ⟨−,v⟩p`.
pub fn hat(t: &TangentAtPoint) -> LieElement {
    LieElement::new(rank_one(&t.v, t.base.rep()) - rank_one(t.base.rep(), &t.v))
}

/// Representatives with `⟨c₀,c₀⟩ = σ` and `⟨c₀,ċ₀⟩ = 0` (discretely:
/// `⟨c_{k+1},c_k⟩` real with sign σ).
pub fn normalized_lift(path: &PathSample) -> Result<Vec<Vector>> {
    let sigma = path.points[0].sign();
    let mut out: Vec<Vector> = Vec::with_capacity(path.len());
    out.push(*path.points[0].rep());
    for p in &path.points[1..] {
        if p.sign() != sigma {
            return Err(Error::SignChange);
        }
        let prev = out.last().unwrap();
        let r = p.rep();
        let cosang = (r.dotc(prev)).norm() / (r.norm() * prev.norm());
        if cosang.min(1.0).acos() > MAX_STEP_ANGLE {
            return Err(Error::StepTooLarge);
        }
        let ip = form(r, prev);
        if ip.norm() <= 1e-12 {
            return Err(Error::StepTooLarge);
        }
        out.push(r * (ip.conj() / cr(ip.norm() * sigma as f64)));
    }
    Ok(out)
}

/// Increment `exp` of the midpoint hat over one step of a normalized lift.
fn step_generator(c0: &Vector, c1: &Vector, sigma: f64) -> Mat3 {
    let mid = (c0 + c1) * cr(0.5);
    let p = mid / cr(norm2(&mid).abs().sqrt());
    let d = (c1 - c0) * cr(sigma);
    rank_one(&d, &p) - rank_one(&p, &d)
}

/// Solve `Ḟ = ĉ̇ F`, `F(s₀) = F₀` along the sampled path.
pub fn follow_path(path: &PathSample, f0: &Isometry) -> Result<Vec<Isometry>> {
    let lift = normalized_lift(path)?;
    let sigma = path.points[0].sigma();
    let mut out = Vec::with_capacity(lift.len());
    let mut f = *f0.matrix();
    out.push(*f0);
    for w in lift.windows(2) {
        let x = step_generator(&w[0], &w[1], sigma);
        f = reproject_su(&(x.exp() * f));
        out.push(Isometry::from_matrix_unchecked(f));
    }
    Ok(out)
}

/// One-parameter subgroup moving two points along their geodesic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bending {
    pub kind: LineType,
    /// Adapted basis as columns: `(v₁, v₂, p)` for hyperbolic lines,
    /// `(p₁, p₁', p)` for spherical ones and `(b, p₁, p)` for euclidean ones.
    pub basis: Mat3,
    basis_inv: Mat3,
    pub rate: f64,
    pub sigma1: i8,
    pub sigma2: i8,
}

impl Bending {
    /// The normal-form matrix in the adapted basis.
    pub fn normal_form(&self, s: f64) -> Mat3 {
        let a = self.rate * s;
        match self.kind {
            LineType::Hyperbolic => Mat3::from_diagonal(&Vector::new(
                cr((-a).exp()),
                cr(a.exp()),
                cr(1.0),
            )),
            LineType::Spherical => {
                let (sn, cs) = a.sin_cos();
                Mat3::new(
                    cr(cs), cr(-sn), cr(0.0),
                    cr(sn), cr(cs), cr(0.0),
                    cr(0.0), cr(0.0), cr(1.0),
                )
            }
            LineType::Euclidean => Mat3::new(
                cr(1.0), cr(0.0), cr(0.0),
                cr(-a), cr(1.0), cr(0.0),
                cr(-a * a / 2.0), cr(a), cr(1.0),
            ),
        }
    }

    pub fn evaluate(&self, s: f64) -> Isometry {
        Isometry::from_matrix_unchecked(self.basis * self.normal_form(s) * self.basis_inv)
    }

    /// Derivative at `s = 0`.
    pub fn generator(&self) -> LieElement {
        let a = cr(self.rate);
        let z = cr(0.0);
        let d = match self.kind {
            LineType::Hyperbolic => Mat3::from_diagonal(&Vector::new(-a, a, z)),
            LineType::Spherical => Mat3::new(z, -a, z, a, z, z, z, z, z),
            LineType::Euclidean => Mat3::new(z, z, z, -a, z, z, z, a, z),
        };
        LieElement::new(self.basis * d * self.basis_inv)
    }

    /// Real basis `(e, f)` of the geodesic and its real Gram matrix.
    fn geodesic_frame(&self) -> Result<(Vector, Vector, [[f64; 2]; 2])> {
        let e = self.basis.column(0).into_owned();
        let f = self.basis.column(1).into_owned();
        match self.kind {
            LineType::Hyperbolic => Ok((e, f, [[0.0, 0.5], [0.5, 0.0]])),
            LineType::Spherical => Ok((e, f, [[1.0, 0.0], [0.0, 1.0]])),
            LineType::Euclidean => Err(Error::EuclideanGeodesic),
        }
    }
}

fn make_bending(kind: LineType, basis: Mat3, rate: f64, s1: i8, s2: i8) -> Result<Bending> {
    let basis_inv =
        basis.try_inverse().ok_or_else(|| Error::InvalidInput("degenerate adapted basis".into()))?;
    Ok(Bending { kind, basis, basis_inv, rate, sigma1: s1, sigma2: s2 })
}

/// The bending involving `p₁, p₂`, normalized so that `B(1)p₁ = p₂` for
/// points of equal sign.
pub fn bending(p1: &Point, p2: &Point) -> Result<Bending> {
    let tol = Tolerances::default().tol;
    let u = *p1.rep();
    let w = *p2.rep();
    if same_line_vectors(&u, &w, tol) {
        return Err(Error::EqualPoints);
    }
    if tance_v(&u, &w).abs() <= tol {
        return Err(Error::OrthogonalPoints);
    }
    let s1 = p1.sigma();
    let kind = line_type_v(&u, &w, tol)?;
    match kind {
        LineType::Hyperbolic => {
            let perp = w - u * (form(&w, &u) * cr(s1));
            let up = perp / cr(norm2(&perp).abs().sqrt());
            let a_coef = form(&w, &u) * cr(s1);
            let b_coef = form(&w, &up) * cr(-s1);
            // e^{iθ} chosen so that B e^{-iθ}/A is negative real
            let e_mi = -(a_coef / cr(a_coef.norm())) * (b_coef.conj() / cr(b_coef.norm()));
            let e_i = e_mi.conj();
            let v1 = (u + up * e_i) * cr(0.5);
            let v2 = (u - up * e_i) * cr(0.5 * s1);
            let z = b_coef * e_mi / a_coef;
            let ratio = ((cr(1.0) - z) / (cr(1.0) + z)).re * s1;
            let rate = 0.5 * ratio.abs().ln();
            let mut polar = orthogonal_complement(&u, &w);
            polar /= cr(norm2(&polar).sqrt());
            make_bending(kind, Mat3::from_columns(&[v1, v2, polar]), rate, p1.sign(), p2.sign())
        }
        LineType::Spherical => {
            let a_coef = form(&w, &u);
            let perp = w - u * a_coef;
            let up = perp / cr(norm2(&perp).sqrt());
            let b_coef = form(&w, &up);
            let ph = a_coef / cr(a_coef.norm());
            let bp = b_coef * ph.conj();
            let p1p = up * (bp / cr(bp.norm()));
            let rate = bp.norm().atan2(a_coef.norm());
            let mut polar = orthogonal_complement(&u, &w);
            polar /= cr(norm2(&polar).abs().sqrt());
            make_bending(kind, Mat3::from_columns(&[u, p1p, polar]), rate, p1.sign(), p2.sign())
        }
        LineType::Euclidean => {
            if p1.sign() < 0 {
                return Err(Error::InvalidInput("negative point on a euclidean line".into()));
            }
            let a_coef = form(&w, &u);
            let ph = a_coef / cr(a_coef.norm());
            let n = (w - u * a_coef) * ph.conj();
            let rate = n.norm();
            let p = n / cr(rate);
            let mut best: Option<(Vector, C64)> = None;
            for k in 0..3 {
                let mut e = Vector::zeros();
                e[k] = cr(1.0);
                let y = e - u * form(&e, &u);
                let yp = form(&y, &p);
                if best.map_or(true, |(_, b)| yp.norm() > b.norm()) {
                    best = Some((y, yp));
                }
            }
            let (y, yp) = best.unwrap();
            let c = cr(1.0) / yp;
            let d = (-1.0 - c.norm_sqr() * norm2(&y)) / 2.0;
            let b = y * c + p * cr(d);
            make_bending(kind, Mat3::from_columns(&[b, u, p]), rate, p1.sign(), p2.sign())
        }
    }
}

/// `(B(s)p₁, B(s)p₂)`.
pub fn bend_pair(p1: &Point, p2: &Point, s: f64) -> Result<(Point, Point)> {
    let b = bending(p1, p2)?;
    let g = b.evaluate(s);
    Ok((g.apply_point(p1), g.apply_point(p2)))
}

/// The point of the geodesic through `line` orthogonal to `q`.
pub fn orthogonal_partner(q: &Point, line: (&Point, &Point)) -> Result<Point> {
    let b = bending(line.0, line.1)?;
    let (e, f, g) = b.geodesic_frame()?;
    let r = *q.rep();
    let re = form(&r, &e);
    let rf = form(&r, &f);
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    let x = (re * cr(g[1][1]) - rf * cr(g[0][1])) / cr(det);
    let y = (rf * cr(g[0][0]) - re * cr(g[1][0])) / cr(det);
    let tol = 1e-8;
    if (r - e * x - f * y).norm() > tol * r.norm() {
        return Err(Error::NotOnGeodesic);
    }
    if (x * y.conj()).im.abs() > tol * (x.norm_sqr() + y.norm_sqr()) {
        return Err(Error::NotOnGeodesic);
    }
    let ph = if x.norm() >= y.norm() { x / cr(x.norm()) } else { y / cr(y.norm()) };
    let (xr, yr) = ((x * ph.conj()).re, (y * ph.conj()).re);
    let g0 = g[0][0] * xr + g[0][1] * yr;
    let g1 = g[1][0] * xr + g[1][1] * yr;
    point(e * cr(-g1) + f * cr(g0))
}

/// Bending parameter `s` for the pair `(p₁,p₂)` after which the line through
/// `B(s)p₂` and `p₃` is hyperbolic.
pub fn make_hyperbolic(p1: &Point, p2: &Point, p3: &Point) -> Result<f64> {
    let tol = Tolerances::default().tol;
    if line_type_v(p2.rep(), p3.rep(), tol)? == LineType::Hyperbolic {
        return Ok(0.0);
    }
    let kind = line_type_v(p1.rep(), p2.rep(), tol)?;
    let comp = orthogonal_complement(p1.rep(), p2.rep());
    match kind {
        LineType::Spherical => {
            return Err(Error::ExceptionalCase("the line through p1, p2 is spherical".into()))
        }
        LineType::Euclidean => {
            if form(p3.rep(), &comp).norm() <= 1e-9 * comp.norm() * p3.rep().norm() {
                return Err(Error::ExceptionalCase("euclidean line contains p3".into()));
            }
        }
        LineType::Hyperbolic => {
            if same_line_vectors(p3.rep(), &comp, 1e-9) {
                return Err(Error::ExceptionalCase("p3 is polar to the hyperbolic line".into()));
            }
        }
    }
    let b = bending(p1, p2)?;
    let ta = |s: f64| tance_v(&(b.evaluate(s).apply(p2.rep())), p3.rep());
    let target = 1.5;
    let mut prev = 0.0;
    let mut found = None;
    let mut s = 0.25;
    for _ in 0..60 {
        for cand in [s, -s] {
            if ta(cand) >= 2.0 {
                found = Some(cand);
                prev = cand / 2.0;
                break;
            }
        }
        if found.is_some() {
            break;
        }
        s *= 2.0;
    }
    let hi0 = found.ok_or_else(|| Error::ExceptionalCase("bending never makes the line hyperbolic".into()))?;
    if ta(prev) >= target {
        return Ok(prev);
    }
    let (mut lo, mut hi) = (prev, hi0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ta(mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
        if (hi - lo).abs() < 1e-12 * hi.abs().max(1.0) {
            break;
        }
    }
    Ok(hi)
}

/// Triple with two positive points where bending `(p₁,p₂)` turns the
/// hyperbolic line `L(p₂,p₃)` spherical.
///
/// `v₁, v₂` are isotropic and `p₃` positive with Gram
/// `[[0, ½, 1], [½, 0, z̄], [1, z, 1]]`; then `p₁ = 2v₁ − ½v₂`,
/// `p₂ = v₁ + v₂`, `p₁' = v₁ − v₂`, `p₂' = ½v₁ + 2v₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalBendFixture {
    pub z: [f64; 2],
    pub p1: Point,
    pub p2: Point,
    pub p3: Point,
    pub p1_prime: Point,
    pub p2_prime: Point,
}

impl SphericalBendFixture {
    pub fn new(z: C64) -> Result<Self> {
        let g = crate::hermitian::Gram::new(nalgebra::DMatrix::from_row_slice(
            3,
            3,
            &[cr(0.0), cr(0.5), cr(1.0), cr(0.5), cr(0.0), z.conj(), cr(1.0), z, cr(1.0)],
        ))?;
        let v = crate::hermitian::realize_gram(&g)?;
        let (v1, v2, p3) = (v[0], v[1], v[2]);
        Ok(SphericalBendFixture {
            z: [z.re, z.im],
            p1: point(v1 * cr(2.0) - v2 * cr(0.5))?,
            p2: point(v1 + v2)?,
            p3: point(p3)?,
            p1_prime: point(v1 - v2)?,
            p2_prime: point(v1 * cr(0.5) + v2 * cr(2.0))?,
        })
    }
}
