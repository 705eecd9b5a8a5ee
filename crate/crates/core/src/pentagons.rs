//! Pentagons: five points with `R(p₅)R(p₄)R(p₃)R(p₂)R(p₁) = δ`, `δ³ = 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{alpha, beta, form, same_line_vectors, tance, Point, Tolerances};
use crate::isometry::{reflection, split_two_reflections, CubeRoot, Isometry};
use crate::linalg::cr;
use crate::paths::bending;
use crate::triples::{
    apply_move_points, classify_triple, connect_triples, decompose_three_reflections,
    identify_triples, line_profile, s_coords, triple_from_coords, BendMove, BendProgram,
    Connection, Pair, SCoords, Sheet, Triple,
};
use crate::{Mat3, C64};

/// Default tolerance for the relation residual.
pub const RELATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pentagon {
    pub delta: CubeRoot,
    pub points: [Point; 5],
}

impl Pentagon {
    /// Validates the points and takes `δ` from the product.
    pub fn new(points: [Point; 5]) -> Result<Self> {
        let delta = verify_pentagon(&points)?;
        Ok(Pentagon { delta, points })
    }

    pub fn triple(&self) -> Triple {
        Triple::new(self.points[0], self.points[1], self.points[2])
    }

    pub fn signs(&self) -> [i8; 5] {
        self.points.map(|p| p.sign())
    }

    /// Index of the positive point, if any.
    pub fn positive_index(&self) -> Option<usize> {
        self.points.iter().position(|p| p.sign() > 0)
    }

    /// Cyclic relabeling `p'_j = p_{j+r}`; the relation and `δ` are kept.
    pub fn rotate(&self, r: usize) -> Pentagon {
        let points = std::array::from_fn(|j| self.points[(j + r) % 5]);
        Pentagon { delta: self.delta, points }
    }

    pub fn map(&self, g: &Isometry) -> Pentagon {
        Pentagon { delta: self.delta, points: self.points.map(|p| g.apply_point(&p)) }
    }

    /// `‖R(p₅)⋯R(p₁) − δI‖`.
    pub fn relation_residual(&self) -> f64 {
        relation_residual(&self.points, self.delta)
    }

    /// `|8iα + 4β − 1 − δ(4 ta(p₄,p₅) − 1)|` with `α, β` of `(p₁,p₂,p₃)`.
    pub fn trace_identity_residual(&self) -> f64 {
        let [p1, p2, p3, p4, p5] = self.points;
        let lhs = C64::new(4.0 * beta(&p1, &p2, &p3) - 1.0, 8.0 * alpha(&p1, &p2, &p3));
        let rhs = self.delta.value() * (4.0 * tance(&p4, &p5) - 1.0);
        (lhs - rhs).norm()
    }

    /// Moduli `(t₁, t₂, t₄, t)`.
    pub fn moduli(&self) -> Result<PentagonModuli> {
        let c = s_coords(&self.triple())?;
        Ok(PentagonModuli {
            t1: c.t1,
            t2: c.t2,
            t4: tance(&self.points[3], &self.points[4]),
            t: c.t,
        })
    }
}

fn product(points: &[Point; 5]) -> Mat3 {
    points.iter().fold(Mat3::identity(), |acc, p| *reflection(p).matrix() * acc)
}

pub fn relation_residual(points: &[Point; 5], delta: CubeRoot) -> f64 {
    (product(points) - Mat3::identity() * delta.value()).norm()
}

/// Checks the defining relation and the configuration constraints and
/// returns `δ`.
pub fn verify_pentagon(points: &[Point; 5]) -> Result<CubeRoot> {
    verify_pentagon_tol(points, RELATION_TOL)
}

pub fn verify_pentagon_tol(points: &[Point; 5], tol: f64) -> Result<CubeRoot> {
    let m = product(points);
    let delta = CubeRoot::nearest(m.trace() / cr(3.0));
    let res = relation_residual(points, delta);
    if !(res <= tol) {
        return Err(Error::NotAPentagon(format!("relation residual {res:e}")));
    }
    if points.iter().filter(|p| p.sign() > 0).count() > 1 {
        return Err(Error::NotAPentagon("more than one positive point".into()));
    }
    let eq_tol = Tolerances::default().tol;
    for j in 0..5 {
        let (a, b) = (&points[(j + 4) % 5], &points[j]);
        if same_line_vectors(a.rep(), b.rep(), eq_tol) {
            return Err(Error::NotAPentagon(format!("p{} equals p{}", (j + 4) % 5 + 1, j + 1)));
        }
        if tance(a, b).abs() <= eq_tol {
            return Err(Error::NotAPentagon(format!(
                "p{} is orthogonal to p{}",
                (j + 4) % 5 + 1,
                j + 1
            )));
        }
    }
    Ok(delta)
}

/// Solve `R(p₃)R(p₂)R(p₁) = δR(p₄)R(p₅)` for the triple.
pub fn build_pentagon(delta: CubeRoot, p4: &Point, p5: &Point) -> Result<Pentagon> {
    if !(p4.is_negative() && p5.is_negative()) {
        return Err(Error::InvalidInput("p4 and p5 must be negative".into()));
    }
    if same_line_vectors(p4.rep(), p5.rep(), Tolerances::default().tol) {
        return Err(Error::EqualPoints);
    }
    let f = Isometry::from_matrix_unchecked(
        *(reflection(p4) * reflection(p5)).matrix() * delta.value(),
    );
    let t = decompose_three_reflections(&f)?;
    let points = [t.p1, t.p2, t.p3, *p4, *p5];
    let got = verify_pentagon(&points)?;
    if got != delta {
        return Err(Error::NotAPentagon(format!("product is δ with k = {}", got.k)));
    }
    Ok(Pentagon { delta, points })
}

/// Coordinates `t₁ = ta(p₁,p₂)`, `t₂ = ta(p₂,p₃)`, `t₄ = ta(p₄,p₅)` and the
/// S-coordinate `t` of `(p₁,p₂,p₃)`, for pentagons with `p₁` positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PentagonModuli {
    pub t1: f64,
    pub t2: f64,
    pub t4: f64,
    pub t: f64,
}

impl PentagonModuli {
    /// `(α, β)` of `(p₁,p₂,p₃)` forced by the relation.
    pub fn alpha_beta(&self, delta: CubeRoot) -> (f64, f64) {
        let d = delta.value();
        let q = 4.0 * self.t4 - 1.0;
        (d.im * q / 8.0, (d.re * q + 1.0) / 4.0)
    }

    /// `(t₁−1)(t₂−1) − t₁t₂(t−1)² − 3(4t₄−1)²/(256t₁t₂) − (3−4t₄)/8`.
    pub fn residual(&self) -> f64 {
        let (t1, t2, t4, t) = (self.t1, self.t2, self.t4, self.t);
        let q = 4.0 * t4 - 1.0;
        (t1 - 1.0) * (t2 - 1.0)
            - t1 * t2 * (t - 1.0) * (t - 1.0)
            - 3.0 * q * q / (256.0 * t1 * t2)
            - (3.0 - 4.0 * t4) / 8.0
    }

    pub fn check(&self, tol: f64) -> Result<()> {
        if !(self.t1 < 0.0 && self.t2 > 1.0 && self.t4 > 1.0) {
            return Err(Error::InadmissibleModuli("need t1 < 0, 1 < t2, 1 < t4".into()));
        }
        let scale = 1.0 + (self.t1 * self.t2).abs() * (1.0 + (self.t - 1.0).powi(2)) + self.t4;
        let r = self.residual();
        if !(r.abs() <= tol * scale) {
            return Err(Error::InadmissibleModuli(format!("surface residual {r:e}")));
        }
        Ok(())
    }

    /// Solve the surface equation for `t` on `sheet`.
    pub fn with_t(t1: f64, t2: f64, t4: f64, sheet: Sheet) -> Result<Self> {
        let mut m = PentagonModuli { t1, t2, t4, t: 1.0 };
        let sq = m.residual() / (t1 * t2);
        if !(sq >= 0.0) {
            return Err(Error::InadmissibleModuli("no real t for these t1, t2, t4".into()));
        }
        m.t = match sheet {
            Sheet::Above => 1.0 + sq.sqrt(),
            Sheet::Below => 1.0 - sq.sqrt(),
        };
        Ok(m)
    }

    /// Largest difference in `(t₁, t₂, t₄, t)`.
    pub fn distance(&self, other: &PentagonModuli) -> f64 {
        [self.t1 - other.t1, self.t2 - other.t2, self.t4 - other.t4, self.t - other.t]
            .iter()
            .fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Pentagon with `p₁` positive and given moduli; `s5` picks the pair
/// `(p₄,p₅)` along its bending family.
pub fn pentagon_from_moduli(m: &PentagonModuli, delta: CubeRoot, s5: f64) -> Result<Pentagon> {
    if delta == CubeRoot::ONE {
        return Err(Error::InadmissibleModuli("delta must differ from 1".into()));
    }
    m.check(1e-9)?;
    let (a, b) = m.alpha_beta(delta);
    let c = SCoords { t: m.t, t1: m.t1, t2: m.t2, sigma: [1, -1, -1], alpha: a, beta: b };
    c.check(1e-9).map_err(|e| Error::InadmissibleModuli(e.to_string()))?;
    let t = triple_from_coords(&c)?;
    let g = Isometry::from_matrix_unchecked(*t.product().matrix() * delta.value().conj());
    let (p4, p5) = split_two_reflections(&g, s5)?;
    let points = [t.p1, t.p2, t.p3, p4, p5];
    let got = verify_pentagon(&points)?;
    if got != delta {
        return Err(Error::NotAPentagon(format!("product is δ with k = {}", got.k)));
    }
    Ok(Pentagon { delta, points })
}

/// Whether all five points lie in a common real plane.
///
/// Representatives are gauged along the chain so that every `⟨u_j,u_{j+1}⟩`
/// with `j < 5` is real positive; the points are then coplanar over `R` iff
/// every Gram entry is real.
pub fn is_real_pentagon(p: &Pentagon) -> bool {
    is_real_pentagon_tol(p, 1e-9)
}

pub fn is_real_pentagon_tol(p: &Pentagon, tol: f64) -> bool {
    let mut u: Vec<_> = p.points.iter().map(|q| *q.rep()).collect();
    for j in 1..5 {
        let z = form(&u[j - 1], &u[j]);
        if z.norm() == 0.0 {
            return false;
        }
        u[j] *= z / cr(z.norm());
    }
    for j in 0..5 {
        for k in (j + 1)..5 {
            let z = form(&u[j], &u[k]);
            if z.im.abs() > tol * z.norm().max(1.0) {
                return false;
            }
        }
    }
    true
}

/// Apply bending moves to the points of a pentagon.
pub fn apply_pentagon_program(p: &Pentagon, prog: &BendProgram) -> Result<Pentagon> {
    let mut pts = p.points;
    for mv in &prog.moves {
        apply_move_points(&mut pts, mv)?;
    }
    Ok(Pentagon { delta: p.delta, points: pts })
}

const PAIRS: [Pair; 5] = [Pair::P12, Pair::P23, Pair::P34, Pair::P45, Pair::P51];

fn rotate_move(mv: &BendMove, r: usize) -> BendMove {
    let k = PAIRS.iter().position(|q| *q == mv.pair).expect("pair listed");
    BendMove { pair: PAIRS[(k + r) % 5], s: mv.s }
}

/// Bending of `(p₃,p₄)` reaching `ta(p₄,p₅) = target`.
fn equalize_t4(p: &Pentagon, target: f64) -> Result<f64> {
    let [_, _, p3, p4, p5] = p.points;
    let prof = line_profile(&Triple::new(p3, p4, p5), true)?;
    let current = tance(&p4, &p5);
    if (current - target).abs() <= 1e-13 * target.abs().max(1.0) {
        return Ok(0.0);
    }
    let (lo, hi) = prof.solve(prof.sign * target, 1e-12)?;
    let s = if hi.abs() <= lo.abs() { hi } else { lo };
    Ok(s)
}

/// Bending parameter of the pair `(p, q)` that moves `p` to `target`.
fn bend_parameter_to(p: &Point, q: &Point, target: &Point) -> Result<f64> {
    let b = bending(p, q)?;
    let inv = b.basis.try_inverse().ok_or_else(|| Error::InvalidInput("degenerate basis".into()))?;
    let cp = inv * p.rep();
    let ct = inv * target.rep();
    let rp = cp[1].norm() / cp[0].norm();
    let rt = ct[1].norm() / ct[0].norm();
    Ok((rt / rp).ln() / (2.0 * b.rate))
}

/// Projective distance between normalized representatives.
fn point_mismatch(a: &Point, b: &Point) -> f64 {
    let u = a.rep() / cr(a.rep().norm());
    let v = b.rep() / cr(b.rep().norm());
    let z = v.dotc(&u);
    let ph = if z.norm() > 0.0 { z / cr(z.norm()) } else { cr(1.0) };
    (u - v * ph).norm()
}

/// Largest point mismatch between `g·a` and `b`.
pub fn pentagon_mismatch(a: &Pentagon, b: &Pentagon, g: &Isometry) -> f64 {
    (0..5).map(|j| point_mismatch(&g.apply_point(&a.points[j]), &b.points[j])).fold(0.0, f64::max)
}

/// Bending program carrying `a` to a pentagon congruent to `b`.
///
/// Both are relabeled cyclically so the positive point (if any) is `p₁`.
/// `ta(p₄,p₅)` is raised to the larger of the two values by a `(3,4)`
/// bending, the triples `(p₁,p₂,p₃)` are joined by [`connect_triples`],
/// `(p₄,p₅)` is slid along its geodesic, and the `(3,4)` bending applied
/// to `b` is undone.
pub fn connect_pentagons(a: &Pentagon, b: &Pentagon) -> Result<Connection> {
    if a.delta != b.delta {
        return Err(Error::DifferentDelta);
    }
    if a.signs() != b.signs() {
        return Err(Error::IncompatibleInvariants(
            "positive point at different positions".into(),
        ));
    }
    let r = a.positive_index().unwrap_or(0);
    let ra = a.rotate(r);
    let rb = b.rotate(r);
    let t4a = tance(&ra.points[3], &ra.points[4]);
    let t4b = tance(&rb.points[3], &rb.points[4]);
    let target = t4a.max(t4b);
    let sa = equalize_t4(&ra, target)?;
    let sb = equalize_t4(&rb, target)?;
    let mut prog = BendProgram::default();
    let mut cur = ra;
    if sa != 0.0 {
        prog.moves.push(BendMove { pair: Pair::P34, s: sa });
        cur = apply_pentagon_program(&ra, &BendProgram { moves: vec![prog.moves[0]] })?;
    }
    let b1 = apply_pentagon_program(&rb, &BendProgram { moves: vec![BendMove { pair: Pair::P34, s: sb }] })?;
    let conn = connect_triples(&cur.triple(), &b1.triple())?;
    cur = apply_pentagon_program(&cur, &conn.program)?;
    prog.moves.extend(conn.program.moves.iter().copied());
    let g = identify_triples(&cur.triple(), &b1.triple())?;
    let back = g.inverse().apply_point(&b1.points[3]);
    let s45 = bend_parameter_to(&cur.points[3], &cur.points[4], &back)?;
    if s45.abs() > 1e-14 {
        let mv = BendMove { pair: Pair::P45, s: s45 };
        cur = apply_pentagon_program(&cur, &BendProgram { moves: vec![mv] })?;
        prog.moves.push(mv);
    }
    if sb != 0.0 {
        let mv = BendMove { pair: Pair::P34, s: -sb };
        cur = apply_pentagon_program(&cur, &BendProgram { moves: vec![mv] })?;
        prog.moves.push(mv);
    }
    let g = identify_triples(&cur.triple(), &rb.triple())?;
    let miss = pentagon_mismatch(&cur, &rb, &g);
    if !(miss <= 1e-7) {
        return Err(Error::NotConjugate(format!("final point mismatch {miss:e}")));
    }
    let program = BendProgram { moves: prog.moves.iter().map(|m| rotate_move(m, r)).collect() };
    Ok(Connection { program, conjugator: g })
}

/// Sign law: `δ = 1` gives five negative points, `δ ≠ 1` exactly one
/// positive point.
pub fn sign_law_holds(p: &Pentagon) -> bool {
    let pos = p.points.iter().filter(|q| q.sign() > 0).count();
    if p.delta == CubeRoot::ONE {
        pos == 0
    } else {
        pos == 1
    }
}

/// Whether `(p₁,p₂,p₃)` is strongly regular.
pub fn triple_is_strongly_regular(p: &Pentagon) -> bool {
    classify_triple(&p.triple()).is_strongly_regular()
}
