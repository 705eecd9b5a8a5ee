//! Strongly regular triples, the surface of their invariants, three-reflection
//! decompositions and bending programs between triples.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{
    alpha_v, beta_v, form, gram_of, norm2, point, realize_gram, same_line_vectors,
    tance_v, tau_complex_v, Gram, Point, Tolerances,
};
use crate::isometry::{conjugator, reflection_v, regularity, Isometry};
use crate::linalg::{cr, op_norm, rank_one, unit_det};
use crate::paths::{bending, hat, TangentAtPoint};
use crate::{Mat3, Vector, C64};

/// Three points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[Point; 3]", into = "[Point; 3]")]
pub struct Triple {
    pub p1: Point,
    pub p2: Point,
    pub p3: Point,
}

impl From<[Point; 3]> for Triple {
    fn from(p: [Point; 3]) -> Self {
        Triple { p1: p[0], p2: p[1], p3: p[2] }
    }
}

impl From<Triple> for [Point; 3] {
    fn from(t: Triple) -> Self {
        [t.p1, t.p2, t.p3]
    }
}

impl Triple {
    pub fn new(p1: Point, p2: Point, p3: Point) -> Self {
        Triple { p1, p2, p3 }
    }

    pub fn from_vectors(vs: &[Vector]) -> Result<Self> {
        if vs.len() != 3 {
            return Err(Error::InvalidInput("a triple needs three vectors".into()));
        }
        Ok(Triple { p1: point(vs[0])?, p2: point(vs[1])?, p3: point(vs[2])? })
    }

    pub fn points(&self) -> [Point; 3] {
        [self.p1, self.p2, self.p3]
    }

    pub fn reps(&self) -> [Vector; 3] {
        [*self.p1.rep(), *self.p2.rep(), *self.p3.rep()]
    }

    pub fn signs(&self) -> [i8; 3] {
        [self.p1.sign(), self.p2.sign(), self.p3.sign()]
    }

    /// `R(p₃)R(p₂)R(p₁)`.
    pub fn product(&self) -> Isometry {
        let [a, b, d] = self.reps();
        Isometry::from_matrix_unchecked(reflection_v(&d) * reflection_v(&b) * reflection_v(&a))
    }

    pub fn map(&self, g: &Isometry) -> Triple {
        Triple { p1: g.apply_point(&self.p1), p2: g.apply_point(&self.p2), p3: g.apply_point(&self.p3) }
    }
}

/// Regularity class of a triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TripleClass {
    NotRegular,
    Regular,
    StronglyRegular,
    RealStronglyRegular,
}

impl TripleClass {
    pub fn is_strongly_regular(&self) -> bool {
        matches!(self, TripleClass::StronglyRegular | TripleClass::RealStronglyRegular)
    }

    pub fn is_regular(&self) -> bool {
        !matches!(self, TripleClass::NotRegular)
    }
}

fn invariant_scale(u: &[Vector; 3]) -> f64 {
    1.0 + tance_v(&u[0], &u[1]).abs() + tance_v(&u[1], &u[2]).abs() + tance_v(&u[0], &u[2]).abs()
}

/// Whether the three representatives lie on one real geodesic: `u₃` is in
/// the span of `u₁, u₂` with coefficients of a common phase once `⟨u₁,u₂⟩`
/// is made real.
pub fn on_one_geodesic(u: &[Vector; 3], tol: f64) -> bool {
    let (a, b, d) = (u[0], u[1], u[2]);
    if same_line_vectors(&a, &b, tol) {
        return true;
    }
    let g12 = form(&a, &b);
    let b = if g12.norm() > 0.0 { b * (g12 / cr(g12.norm())) } else { b };
    // Euclidean least squares for d = x a + y b
    let m = nalgebra::Matrix3x2::from_columns(&[a, b]);
    let mh = m.adjoint();
    let Some(inv) = (mh * m).try_inverse() else { return false };
    let xy = inv * (mh * d);
    let resid = (m * xy - d).norm();
    if resid > 1e-7 * d.norm() {
        return false;
    }
    let (x, y) = (xy[0], xy[1]);
    (x * y.conj()).im.abs() <= 1e-7 * (x.norm_sqr() + y.norm_sqr())
}

/// Classify a triple.
pub fn classify_triple(t: &Triple) -> TripleClass {
    classify_triple_tol(t, Tolerances::default().tol)
}

pub fn classify_triple_tol(t: &Triple, tol: f64) -> TripleClass {
    let u = t.reps();
    if t.signs().iter().filter(|s| **s > 0).count() > 1 {
        return TripleClass::NotRegular;
    }
    if tance_v(&u[0], &u[1]).abs() <= tol || tance_v(&u[1], &u[2]).abs() <= tol {
        return TripleClass::NotRegular;
    }
    let scale = invariant_scale(&u);
    let a = alpha_v(&u[0], &u[1], &u[2]);
    let b = beta_v(&u[0], &u[1], &u[2]);
    let real = a.abs() <= tol * scale;
    let flat = b.abs() <= tol * scale;
    if (real && flat) || on_one_geodesic(&u, 1e-9) {
        return TripleClass::NotRegular;
    }
    if flat {
        return TripleClass::Regular;
    }
    if real {
        if t.signs().iter().all(|s| *s < 0) {
            TripleClass::RealStronglyRegular
        } else {
            TripleClass::Regular
        }
    } else {
        TripleClass::StronglyRegular
    }
}

/// Representatives with `⟨u_j,u_j⟩ = σ_j` and `g₁₂, g₂₃ > 0`.
pub fn standard_reps(t: &Triple) -> Result<[Vector; 3]> {
    if !classify_triple(t).is_strongly_regular() {
        return Err(Error::NotStronglyRegular);
    }
    Ok(standard_reps_unchecked(&t.reps()))
}

/// Rephase representatives so that `g₁₂, g₂₃ > 0`; inputs are rescaled to
/// `⟨u,u⟩ = ±1`.
pub fn standard_reps_unchecked(u: &[Vector; 3]) -> [Vector; 3] {
    let n = |v: &Vector| v / cr(norm2(v).abs().sqrt());
    let a = n(&u[0]);
    let mut b = n(&u[1]);
    let mut d = n(&u[2]);
    let g12 = form(&a, &b);
    b *= g12 / cr(g12.norm());
    let g23 = form(&b, &d);
    d *= g23 / cr(g23.norm());
    [a, b, d]
}

pub fn standard_gram(t: &Triple) -> Result<Gram> {
    Ok(gram_of(&standard_reps(t)?))
}

/// Coordinates of a triple on the surface of fixed `(σ, α, β)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SCoords {
    pub t: f64,
    pub t1: f64,
    pub t2: f64,
    pub sigma: [i8; 3],
    pub alpha: f64,
    pub beta: f64,
}

impl SCoords {
    /// Coordinates with `β` solved from the surface equation.
    pub fn on_surface(t: f64, t1: f64, t2: f64, sigma: [i8; 3], alpha: f64) -> Self {
        let beta = 1.0 - t1 - t2 + 2.0 * t * t1 * t2 - t1 * t2 * t * t - alpha * alpha / (t1 * t2);
        SCoords { t, t1, t2, sigma, alpha, beta }
    }

    /// `(t₁−1)(t₂−1) − t₁t₂(t−1)² − α²/(t₁t₂) − β`.
    pub fn residual(&self) -> f64 {
        let (t, t1, t2) = (self.t, self.t1, self.t2);
        (t1 - 1.0) * (t2 - 1.0)
            - t1 * t2 * (t - 1.0).powi(2)
            - self.alpha * self.alpha / (t1 * t2)
            - self.beta
    }

    fn scale(&self) -> f64 {
        1.0 + (self.t1 * self.t2).abs() * (1.0 + (self.t - 1.0).powi(2))
            + self.t1.abs()
            + self.t2.abs()
            + self.beta.abs()
            + self.alpha * self.alpha / (self.t1 * self.t2).abs()
    }

    /// Surface equation, inequalities and admissibility of `(σ, α, β)`.
    pub fn check(&self, tol: f64) -> Result<()> {
        let [s1, s2, s3] = self.sigma.map(|s| s as f64);
        if self.sigma.iter().any(|s| s.abs() != 1) {
            return Err(Error::InadmissibleCoords("signs must be ±1".into()));
        }
        let r = self.residual();
        if !(r.abs() <= tol * self.scale()) {
            return Err(Error::InadmissibleCoords(format!("surface residual {r:e}")));
        }
        let (a, b) = (s1 * s2 * self.t1, s2 * s3 * self.t2);
        if !(a > 0.0 && a > s1 * s2 && b > 0.0 && b > s2 * s3) {
            return Err(Error::InadmissibleCoords("inequalities on t1, t2 violated".into()));
        }
        if !(s1 * s2 * s3 * self.beta < 0.0) {
            return Err(Error::InadmissibleCoords("sign of beta".into()));
        }
        if self.sigma.iter().filter(|s| **s > 0).count() > 1 {
            return Err(Error::InadmissibleCoords("more than one positive point".into()));
        }
        if self.alpha.abs() <= tol * self.scale() && self.sigma.iter().any(|s| *s > 0) {
            return Err(Error::InadmissibleCoords("real triple with a positive point".into()));
        }
        Ok(())
    }

    pub fn sheet(&self) -> Sheet {
        if self.t >= 1.0 {
            Sheet::Above
        } else {
            Sheet::Below
        }
    }

    /// Largest difference in `(t, t₁, t₂)`.
    pub fn distance(&self, other: &SCoords) -> f64 {
        (self.t - other.t).abs().max((self.t1 - other.t1).abs()).max((self.t2 - other.t2).abs())
    }
}

/// Coordinates `(τ, ta(p₁,p₂), ta(p₂,p₃))` of a strongly regular triple.
pub fn s_coords(t: &Triple) -> Result<SCoords> {
    if !classify_triple(t).is_strongly_regular() {
        return Err(Error::NotStronglyRegular);
    }
    Ok(s_coords_unchecked(&t.reps(), t.signs()))
}

pub fn s_coords_unchecked(u: &[Vector; 3], sigma: [i8; 3]) -> SCoords {
    let tau = tau_complex_v(&u[0], &u[1], &u[2], 0.0).map(|z| z.re).unwrap_or(f64::NAN);
    SCoords {
        t: tau,
        t1: tance_v(&u[0], &u[1]),
        t2: tance_v(&u[1], &u[2]),
        sigma,
        alpha: alpha_v(&u[0], &u[1], &u[2]),
        beta: beta_v(&u[0], &u[1], &u[2]),
    }
}

/// Standard Gram matrix built from coordinates.
pub fn gram_from_coords(c: &SCoords) -> Result<Gram> {
    let [s1, s2, s3] = c.sigma.map(|s| s as f64);
    let g12 = (s1 * s2 * c.t1).sqrt();
    let g23 = (s2 * s3 * c.t2).sqrt();
    let g31 = C64::new(g12 * g23 / s2 * c.t, s1 * s2 * s3 / (g12 * g23) * c.alpha);
    let m = DMatrix::from_row_slice(
        3,
        3,
        &[
            cr(s1), cr(g12), g31.conj(),
            cr(g12), cr(s2), cr(g23),
            g31, cr(g23), cr(s3),
        ],
    );
    Gram::new(m)
}

/// Realize admissible coordinates as a triple with standard representatives.
pub fn triple_reps_from_coords(c: &SCoords) -> Result<[Vector; 3]> {
    c.check(Tolerances::default().tol)?;
    let vs = realize_gram(&gram_from_coords(c)?)?;
    Ok([vs[0], vs[1], vs[2]])
}

pub fn triple_from_coords(c: &SCoords) -> Result<Triple> {
    Triple::from_vectors(&triple_reps_from_coords(c)?)
}

/// Gram matrices `G` with signs `σ`, off-diagonal moduli `g₁₂, g₂₃` and
/// `det`-equation solved for `t`; `None` when no real `t` exists.
pub fn decomposition_grams(alpha: f64, beta: f64, sigma: [i8; 3], g12: f64, g23: f64) -> Option<[Gram; 2]> {
    let [s1, s2, s3] = sigma.map(|s| s as f64);
    let t1 = s1 * s2 * g12 * g12;
    let t2 = s2 * s3 * g23 * g23;
    let q = (t1 - 1.0) * (t2 - 1.0) - beta - alpha * alpha / (t1 * t2);
    let val = q / (t1 * t2);
    if !(val >= 0.0) {
        return None;
    }
    let r = val.sqrt();
    let mk = |t: f64| {
        gram_from_coords(&SCoords { t, t1, t2, sigma, alpha, beta }).expect("hermitian by construction")
    };
    Some([mk(1.0 + r), mk(1.0 - r)])
}

/// A triple with `R(p₃)R(p₂)R(p₁) = F` for regular `F` with `tr F ≠ −1`.
///
/// Candidate Gram matrices are realized and conjugated onto `F`; the
/// search runs over a grid of `g₁₂, g₂₃ > 1` and both roots `t`, since the
/// trace alone does not fix the conjugacy class of an elliptic `F`.
pub fn decompose_three_reflections(f: &Isometry) -> Result<Triple> {
    let tr = f.trace();
    let scale = f.matrix().norm().max(1.0);
    if (tr + cr(1.0)).norm() <= 1e-9 * scale {
        return Err(Error::TraceMinusOne);
    }
    if !regularity(f.matrix(), Tolerances::default().eigen).regular {
        return Err(Error::NotRegular);
    }
    let alpha = tr.im / 8.0;
    let beta = (tr.re + 1.0) / 4.0;
    let patterns: &[[i8; 3]] =
        if beta < 0.0 { &[[-1, 1, -1], [1, -1, -1], [-1, -1, 1]] } else { &[[-1, -1, -1]] };
    let moduli: Vec<f64> = (-12..=20)
        .map(|k| if k < 0 { 1.0 + 2f64.powi(k) } else { 2f64.powf(1.0 + k as f64 / 2.0) })
        .collect();
    let mut grid: Vec<(f64, f64)> = Vec::new();
    for &a in &moduli {
        for &b in &moduli {
            grid.push((a, b));
        }
    }
    grid.sort_by(|a, b| (a.0 * a.1).partial_cmp(&(b.0 * b.1)).unwrap());
    let mut best: Option<(f64, Triple)> = None;
    let mut last_err = Error::NotConjugate("no admissible gram".into());
    let mut tried = 0;
    'search: for sigma in patterns {
        for &(g12, g23) in &grid {
            let Some(grams) = decomposition_grams(alpha, beta, *sigma, g12, g23) else { continue };
            for gram in grams.iter() {
                tried += 1;
                match decompose_with_gram(f, gram) {
                    Ok((err, t)) => {
                        if best.as_ref().map_or(true, |b| err < b.0) {
                            best = Some((err, t));
                        }
                        if err <= 1e-11 * scale {
                            break 'search;
                        }
                    }
                    Err(e) => {
                        if !matches!(&last_err, Error::NotConjugate(m) if m.starts_with("eigenvector sign")) {
                            last_err = e;
                        }
                    }
                }
            }
            if tried >= 200 && best.is_some() {
                break 'search;
            }
        }
    }
    match best {
        Some((err, t)) if err <= 1e-8 * scale => Ok(t),
        Some((err, _)) => Err(Error::NotConjugate(format!("product residual {err:e}"))),
        None => Err(last_err),
    }
}

fn decompose_with_gram(f: &Isometry, gram: &Gram) -> Result<(f64, Triple)> {
    let vs = realize_gram(gram)?;
    let raw = Triple::from_vectors(&vs)?;
    let g = conjugator(&raw.product(), f)?;
    let mut t = raw.map(&g);
    let mut err = (t.product().matrix() - f.matrix()).norm();
    for _ in 0..4 {
        if err <= 1e-13 * f.matrix().norm() {
            break;
        }
        let Ok(h) = conjugator(&t.product(), f) else { break };
        let cand = t.map(&h);
        let e = (cand.product().matrix() - f.matrix()).norm();
        if e >= err {
            break;
        }
        t = cand;
        err = e;
    }
    if err > 1e-14 * f.matrix().norm() {
        if let Some((e, r)) = refine_decomposition(&t, f) {
            if e < err {
                t = r;
                err = e;
            }
        }
    }
    if !classify_triple(&t).is_regular() {
        return Err(Error::NotRegular);
    }
    Ok((err, t))
}

/// Derivative of `R(u)` in the direction `d`.
fn reflection_derivative(u: &Vector, d: &Vector) -> Mat3 {
    let n = norm2(u);
    let dn = 2.0 * form(d, u).re;
    (rank_one(d, u) + rank_one(u, d)) * cr(2.0 / n) - rank_one(u, u) * cr(2.0 * dn / (n * n))
}

/// Gauss–Newton on the representatives to reduce `‖R(u₃)R(u₂)R(u₁) − F‖`.
fn refine_decomposition(t: &Triple, f: &Isometry) -> Option<(f64, Triple)> {
    let mut u = t.reps();
    let target = f.matrix();
    let prod = |u: &[Vector; 3]| reflection_v(&u[2]) * reflection_v(&u[1]) * reflection_v(&u[0]);
    let flat = |m: &Mat3| DVector::from_iterator(18, m.iter().flat_map(|z| [z.re, z.im]));
    let mut err = (prod(&u) - target).norm();
    for _ in 0..8 {
        let r = [reflection_v(&u[0]), reflection_v(&u[1]), reflection_v(&u[2])];
        let mut cols = Vec::with_capacity(18);
        for j in 0..3 {
            for k in 0..3 {
                for unit in [cr(1.0), C64::new(0.0, 1.0)] {
                    let mut d = Vector::zeros();
                    d[k] = unit;
                    let dr = reflection_derivative(&u[j], &d);
                    let dp = match j {
                        0 => r[2] * r[1] * dr,
                        1 => r[2] * dr * r[0],
                        _ => dr * r[1] * r[0],
                    };
                    cols.push(flat(&dp));
                }
            }
        }
        let jac = DMatrix::from_columns(&cols);
        let rhs = flat(&(target - prod(&u)));
        let svd = jac.svd(true, true);
        let eps = 1e-10 * svd.singular_values.max();
        let step = svd.solve(&rhs, eps).ok()?;
        let mut cand = u;
        for j in 0..3 {
            for k in 0..3 {
                cand[j][k] += C64::new(step[6 * j + 2 * k], step[6 * j + 2 * k + 1]);
            }
        }
        let e = (prod(&cand) - target).norm();
        if !(e < err) {
            break;
        }
        u = cand;
        err = e;
        if err <= 1e-15 * target.norm() {
            break;
        }
    }
    let out = Triple::from_vectors(&u).ok()?;
    Some(((out.product().matrix() - target).norm(), out))
}

/// An adjacent pair of points that a bending acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pair {
    #[serde(rename = "12")]
    P12,
    #[serde(rename = "23")]
    P23,
    #[serde(rename = "34")]
    P34,
    #[serde(rename = "45")]
    P45,
    #[serde(rename = "51")]
    P51,
}

impl Pair {
    /// Zero-based indices of the pair.
    pub fn indices(&self) -> (usize, usize) {
        match self {
            Pair::P12 => (0, 1),
            Pair::P23 => (1, 2),
            Pair::P34 => (2, 3),
            Pair::P45 => (3, 4),
            Pair::P51 => (4, 0),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Pair::P12 => "12",
            Pair::P23 => "23",
            Pair::P34 => "34",
            Pair::P45 => "45",
            Pair::P51 => "51",
        }
    }
}

/// One bending move.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BendMove {
    pub pair: Pair,
    pub s: f64,
}

/// A sequence of bending moves.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BendProgram {
    pub moves: Vec<BendMove>,
}

impl BendProgram {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }
}

/// Apply a bending move to a list of points (cyclic indices).
pub fn apply_move_points(points: &mut [Point], mv: &BendMove) -> Result<()> {
    let (j, k) = mv.pair.indices();
    if j >= points.len() || k >= points.len() {
        return Err(Error::InvalidInput(format!("pair {} out of range", mv.pair.as_str())));
    }
    let b = bending(&points[j], &points[k])?;
    let g = b.evaluate(mv.s);
    points[j] = g.apply_point(&points[j]);
    points[k] = g.apply_point(&points[k]);
    Ok(())
}

pub fn apply_program(t: &Triple, prog: &BendProgram) -> Result<Triple> {
    let mut pts = t.points();
    for mv in &prog.moves {
        apply_move_points(&mut pts, mv)?;
    }
    Ok(Triple::from(pts))
}

/// Which side of the ramification curve `t = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sheet {
    Above,
    Below,
}

impl Sheet {
    pub fn of(t: f64) -> Sheet {
        if t >= 1.0 {
            Sheet::Above
        } else {
            Sheet::Below
        }
    }
}

/// Along a bending of `pair`, `σσ'·ta(m(s), o) = A e^{−2as} + B e^{2as} + C`
/// where `m` is the moving point shared with the measured pair and `o` is
/// the fixed one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineProfile {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub rate: f64,
    /// `σ_m σ_o`.
    pub sign: f64,
}

impl LineProfile {
    pub fn value(&self, s: f64) -> f64 {
        let x = (2.0 * self.rate * s).exp();
        self.a / x + self.b * x + self.c
    }

    /// Tance along the line.
    pub fn tance(&self, s: f64) -> f64 {
        self.sign * self.value(s)
    }

    pub fn argmin(&self) -> f64 {
        (self.a / self.b).ln() / (4.0 * self.rate)
    }

    pub fn min_value(&self) -> f64 {
        2.0 * (self.a * self.b).sqrt() + self.c
    }

    /// Both parameters where the profile equals `q`, smaller first.
    pub fn solve(&self, q: f64, tol: f64) -> Result<(f64, f64)> {
        let scale = q.abs().max(self.min_value().abs()).max(1.0);
        let qc = q - self.c;
        let disc = qc * qc - 4.0 * self.a * self.b;
        let m = self.min_value();
        if q < m - tol * scale {
            return Err(Error::Unreachable);
        }
        if (q - m).abs() <= tol * scale || disc <= 0.0 {
            return Err(Error::OnRamification { s: self.argmin() });
        }
        let x1 = (qc + disc.sqrt()) / (2.0 * self.b);
        let x2 = self.a / (self.b * x1);
        let s1 = x1.ln() / (2.0 * self.rate);
        let s2 = x2.ln() / (2.0 * self.rate);
        Ok((s2.min(s1), s2.max(s1)))
    }
}

/// Profile of `ta(p₂,p₃)` under bendings of `(p₁,p₂)` (`vertical`) or of
/// `ta(p₁,p₂)` under bendings of `(p₂,p₃)` (`horizontal`).
pub fn line_profile(t: &Triple, vertical: bool) -> Result<LineProfile> {
    let (b, m, o) = if vertical {
        (bending(&t.p1, &t.p2)?, t.p2, t.p3)
    } else {
        (bending(&t.p2, &t.p3)?, t.p2, t.p1)
    };
    let inv = b.basis.try_inverse().ok_or_else(|| Error::InvalidInput("degenerate basis".into()))?;
    let coef = inv * m.rep();
    let v1 = b.basis.column(0).into_owned();
    let v2 = b.basis.column(1).into_owned();
    let z1 = coef[0] * form(&v1, o.rep());
    let z2 = coef[1] * form(&v2, o.rep());
    Ok(LineProfile {
        a: z1.norm_sqr(),
        b: z2.norm_sqr(),
        c: 2.0 * (z1 * z2.conj()).re,
        rate: b.rate,
        sign: m.sigma() * o.sigma(),
    })
}

fn solve_line(t: &Triple, vertical: bool, target: f64, sheet: Sheet) -> Result<f64> {
    let prof = line_profile(t, vertical)?;
    let (lo, hi) = prof.solve(prof.sign * target, 1e-12)?;
    let pair = if vertical { Pair::P12 } else { Pair::P23 };
    let t_at = |s: f64| -> Result<f64> {
        let moved = apply_program(t, &BendProgram { moves: vec![BendMove { pair, s }] })?;
        Ok(s_coords_unchecked(&moved.reps(), moved.signs()).t)
    };
    let (tl, th) = (t_at(lo)?, t_at(hi)?);
    if Sheet::of(tl) == sheet {
        Ok(lo)
    } else if Sheet::of(th) == sheet {
        Ok(hi)
    } else {
        Err(Error::OnRamification { s: prof.argmin() })
    }
}

/// Bending parameter for `(p₁,p₂)` reaching `ta(p₂,p₃) = target` on `sheet`.
pub fn vertical_line(t: &Triple, target: f64, sheet: Sheet) -> Result<f64> {
    solve_line(t, true, target, sheet)
}

/// Bending parameter for `(p₂,p₃)` reaching `ta(p₁,p₂) = target` on `sheet`.
pub fn horizontal_line(t: &Triple, target: f64, sheet: Sheet) -> Result<f64> {
    solve_line(t, false, target, sheet)
}

/// [`vertical_line`] for coordinates: the triple is realized first.
pub fn vertical_line_coords(c: &SCoords, target: f64, sheet: Sheet) -> Result<f64> {
    vertical_line(&triple_from_coords(c)?, target, sheet)
}

/// [`horizontal_line`] for coordinates.
pub fn horizontal_line_coords(c: &SCoords, target: f64, sheet: Sheet) -> Result<f64> {
    horizontal_line(&triple_from_coords(c)?, target, sheet)
}

/// A bending program and the isometry identifying its endpoint with the
/// target.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    pub program: BendProgram,
    /// `g` with `g·A' = B` where `A'` is the program applied to `A`.
    pub conjugator: Isometry,
}

/// `g` with `g·from = to`, computed from standard representatives.
pub fn identify_triples(from: &Triple, to: &Triple) -> Result<Isometry> {
    let a = standard_reps_unchecked(&from.reps());
    let b = standard_reps_unchecked(&to.reps());
    let ma = Mat3::from_columns(&a);
    let mb = Mat3::from_columns(&b);
    let inv = ma.try_inverse().ok_or(Error::NotStronglyRegular)?;
    Ok(Isometry::from_matrix_unchecked(unit_det(&(mb * inv))))
}

fn same_invariants(a: &SCoords, b: &SCoords) -> Result<()> {
    if a.sigma != b.sigma {
        return Err(Error::IncompatibleInvariants("signs differ".into()));
    }
    let sc = 1.0 + a.alpha.abs().max(a.beta.abs());
    if (a.alpha - b.alpha).abs() > 1e-7 * sc || (a.beta - b.beta).abs() > 1e-7 * sc {
        return Err(Error::IncompatibleInvariants(format!(
            "alpha {} vs {}, beta {} vs {}",
            a.alpha, b.alpha, a.beta, b.beta
        )));
    }
    Ok(())
}

fn mv(pair: Pair, s: f64) -> BendMove {
    BendMove { pair, s }
}

fn try_program(a: &Triple, cb: &SCoords, steps: &[Step]) -> Result<BendProgram> {
    let mut cur = *a;
    let mut prog = BendProgram::default();
    for st in steps {
        let s = match *st {
            Step::V(target, sheet) => vertical_line(&cur, target, sheet),
            Step::H(target, sheet) => horizontal_line(&cur, target, sheet),
        };
        let s = match s {
            Ok(s) => s,
            Err(Error::OnRamification { s }) => s,
            Err(e) => return Err(e),
        };
        let m = mv(if matches!(st, Step::V(..)) { Pair::P12 } else { Pair::P23 }, s);
        cur = apply_program(&cur, &BendProgram { moves: vec![m] })?;
        prog.moves.push(m);
    }
    let got = s_coords_unchecked(&cur.reps(), cur.signs());
    if got.distance(cb) > 1e-8 * (1.0 + cb.t1.abs().max(cb.t2.abs()).max(cb.t.abs())) {
        return Err(Error::Unreachable);
    }
    Ok(prog)
}

#[derive(Debug, Clone, Copy)]
enum Step {
    V(f64, Sheet),
    H(f64, Sheet),
}

/// A program of at most three bendings carrying `a` to the class of `b`.
pub fn connect_triples(a: &Triple, b: &Triple) -> Result<Connection> {
    let ca = s_coords(a)?;
    let cb = s_coords(b)?;
    same_invariants(&ca, &cb)?;
    let sb = cb.sheet();
    let sa = ca.sheet();
    let other = |s: Sheet| if s == Sheet::Above { Sheet::Below } else { Sheet::Above };
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * (1.0 + x.abs());
    let mut plans: Vec<Vec<Step>> = Vec::new();
    if ca.distance(&cb) <= 1e-12 * (1.0 + cb.t1.abs().max(cb.t2.abs())) {
        plans.push(vec![]);
    }
    if close(ca.t1, cb.t1) {
        plans.push(vec![Step::V(cb.t2, sb)]);
    }
    if close(ca.t2, cb.t2) {
        plans.push(vec![Step::H(cb.t1, sb)]);
    }
    for s in [sa, other(sa)] {
        plans.push(vec![Step::H(cb.t1, s), Step::V(cb.t2, sb)]);
        plans.push(vec![Step::V(cb.t2, s), Step::H(cb.t1, sb)]);
    }
    let mut last = Error::Unreachable;
    for plan in &plans {
        match try_program(a, &cb, plan) {
            Ok(program) => return finish(a, b, program),
            Err(e) => last = e,
        }
    }
    // push t₂ out until the horizontal line through the new point reaches t₁(B)
    let base = ca.t2.abs().max(cb.t2.abs()).max(2.0);
    let sign2 = (ca.sigma[1] * ca.sigma[2]) as f64;
    for k in 1..60 {
        let q = base * 2f64.powi(k);
        let t2_star = sign2 * q;
        for s0 in [sa, other(sa)] {
            let plan = [Step::V(t2_star, s0), Step::H(cb.t1, sa), Step::V(cb.t2, sb)];
            match try_program(a, &cb, &plan) {
                Ok(program) => return finish(a, b, program),
                Err(e) => last = e,
            }
            let plan = [Step::V(t2_star, s0), Step::H(cb.t1, other(sa)), Step::V(cb.t2, sb)];
            if let Ok(program) = try_program(a, &cb, &plan) {
                return finish(a, b, program);
            }
        }
    }
    Err(last)
}

fn finish(a: &Triple, b: &Triple, program: BendProgram) -> Result<Connection> {
    let end = apply_program(a, &program)?;
    let g = identify_triples(&end, b)?;
    Ok(Connection { program, conjugator: g })
}

/// Operator norm of `−t̂₃ + t̂₂ + R(p₂)t̂₁R(p₂)`.
pub fn tangent_ef_residual(
    t: &Triple,
    t1: &TangentAtPoint,
    t2: &TangentAtPoint,
    t3: &TangentAtPoint,
) -> f64 {
    let r2 = reflection_v(t.p2.rep());
    let m = -hat(t3).m + hat(t2).m + r2 * hat(t1).m * r2;
    op_norm(&m)
}
