//! The b-vector fields on triples with fixed product, vertical parts of
//! tangents, the curvature value `ω[b₁,b₂](p₁)` and rectangle holonomy.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{form, gram_of, norm2, orthogonal_complement, project_orthogonal_v};
use crate::isometry::{centralizer_basis, Isometry, LieElement};
use crate::linalg::{cr, log_near_identity, nearest_identity_lift};
use crate::paths::TangentAtPoint;
use crate::triples::{
    classify_triple, horizontal_line, identify_triples, s_coords, s_coords_unchecked,
    tangent_ef_residual, vertical_line, apply_program, BendMove, BendProgram, Pair, SCoords, Triple,
};
use crate::{Mat3, Vector, C64};

/// A tangent vector to the space of triples: one rank-one map per point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleTangent {
    pub t: [TangentAtPoint; 3],
}

impl TripleTangent {
    /// `(⟨−,u_j⟩q_j)` for representatives `u_j`.
    pub fn from_reps(u: &[Vector; 3], q: &[Vector; 3]) -> Result<Self> {
        Ok(TripleTangent {
            t: [
                TangentAtPoint::from_rep(&u[0], &q[0])?,
                TangentAtPoint::from_rep(&u[1], &q[1])?,
                TangentAtPoint::from_rep(&u[2], &q[2])?,
            ],
        })
    }

    pub fn zero(t: &Triple) -> Self {
        TripleTangent {
            t: [TangentAtPoint::zero(t.p1), TangentAtPoint::zero(t.p2), TangentAtPoint::zero(t.p3)],
        }
    }

    /// The vectors `q_j` with the maps equal to `⟨−,u_j⟩q_j`.
    pub fn vectors_for(&self, u: &[Vector; 3]) -> [Vector; 3] {
        [self.t[0].vector_for_rep(&u[0]), self.t[1].vector_for_rep(&u[1]), self.t[2].vector_for_rep(&u[2])]
    }

    /// Velocities `t_j(u_j)` of the representatives.
    pub fn velocities(&self, u: &[Vector; 3]) -> [Vector; 3] {
        let q = self.vectors_for(u);
        [q[0] * cr(norm2(&u[0])), q[1] * cr(norm2(&u[1])), q[2] * cr(norm2(&u[2]))]
    }

    /// `a·self + b·other`; both must be based at the same points.
    pub fn combine(&self, a: f64, other: &TripleTangent, b: f64) -> TripleTangent {
        let mut out = *self;
        for j in 0..3 {
            out.t[j].v = self.t[j].v * cr(a) + other.t[j].v * cr(b);
        }
        out
    }

    pub fn norm(&self) -> f64 {
        self.t.iter().map(|x| x.v.norm_squared()).sum::<f64>().sqrt()
    }

    pub fn ef_residual(&self, triple: &Triple) -> f64 {
        tangent_ef_residual(triple, &self.t[0], &self.t[1], &self.t[2])
    }
}

fn reps_and_gram(t: &Triple) -> ([Vector; 3], [[C64; 3]; 3]) {
    let u = t.reps();
    let g = gram_of(&u);
    let mut m = [[C64::new(0.0, 0.0); 3]; 3];
    for (j, row) in m.iter_mut().enumerate() {
        for (k, e) in row.iter_mut().enumerate() {
            *e = g.get(j, k);
        }
    }
    (u, m)
}

/// `τ = g₁₃g₂₂/(g₁₂g₂₃)`.
fn tau_of(g: &[[C64; 3]; 3]) -> C64 {
    g[0][2] * g[1][1] / (g[0][1] * g[1][2])
}

/// The fields tangent to the lifts of vertical and horizontal lines.
pub fn b_fields(t: &Triple) -> Result<(TripleTangent, TripleTangent)> {
    let (u, g) = reps_and_gram(t);
    let [p1, p2, p3] = u;
    let z = Vector::zeros();
    let b1 = TripleTangent::from_reps(
        &u,
        &[p1 / g[0][0] - p2 / g[1][0], p1 / g[0][1] - p2 / g[1][1], z],
    )?;
    let b2 = TripleTangent::from_reps(
        &u,
        &[z, p2 / g[1][1] - p3 / g[2][1], p2 / g[1][2] - p3 / g[2][2]],
    )?;
    Ok((b1, b2))
}

/// Closed form of `[b₁,b₂]`.
pub fn b_commutator(t: &Triple) -> Result<TripleTangent> {
    let (u, g) = reps_and_gram(t);
    let [p1, p2, p3] = u;
    let tau = tau_of(&g);
    let two = cr(2.0);
    let q1 = (p2 / g[1][0] - p3 / g[2][0]) * tau.conj();
    let q2 = p1 * ((two - tau) / g[0][1])
        + p2 * (C64::new(0.0, 2.0 * tau.im) / g[1][1])
        + p3 * ((tau.conj() - two) / g[2][1]);
    let q3 = (p1 / g[0][2] - p2 / g[1][2]) * tau;
    TripleTangent::from_reps(&u, &[q1, q2, q3])
}

/// The fibre tangent `(⟨−,p_j⟩π[p_j]l(p_j)/g_jj)` induced by `l`.
pub fn fibre_tangent(t: &Triple, l: &LieElement) -> Result<TripleTangent> {
    let (u, g) = reps_and_gram(t);
    let q = [0, 1, 2].map(|j| project_orthogonal_v(&u[j], &(l.m * u[j])) / g[j][j]);
    TripleTangent::from_reps(&u, &q)
}

/// Decomposition of a tangent into horizontal and fibre parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerticalDecomposition {
    /// Coefficient of `b₁`.
    pub c1: f64,
    /// Coefficient of `b₂`.
    pub c2: f64,
    pub a12: f64,
    pub a23: f64,
    pub a31: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    /// The algebra element `L` with `L(p_j) = T(p_j) − i d_j p_j`.
    pub lie: LieElement,
}

/// Coordinates of `T` (with `T(u_j) = g_jj q_j`) in the basis `u`.
fn t_matrix(u: &[Vector; 3], g: &[[C64; 3]; 3], tg: &TripleTangent) -> Result<Mat3> {
    let q = tg.vectors_for(u);
    let ub = Mat3::from_columns(u);
    let inv = ub.try_inverse().ok_or(Error::NotStronglyRegular)?;
    let images = Mat3::from_columns(&[q[0] * g[0][0], q[1] * g[1][1], q[2] * g[2][2]]);
    Ok(inv * images)
}

fn gram_mat(g: &[[C64; 3]; 3]) -> Mat3 {
    Mat3::from_fn(|j, k| g[j][k])
}

/// Real conditions for `T` to be fibre-tangent, as an affine function of `T`.
fn fibre_conditions(t: &Mat3, g: &[[C64; 3]; 3]) -> Vec<f64> {
    let gm = gram_mat(g);
    let h = t.transpose() * gm + gm * t.conjugate();
    let a = |j: usize, k: usize| (h[(j, k)] / g[j][k]).im;
    vec![
        t.trace().re,
        h[(0, 0)].re,
        h[(1, 1)].re,
        h[(2, 2)].re,
        (h[(0, 1)] / g[0][1]).re,
        (h[(1, 2)] / g[1][2]).re,
        (h[(2, 0)] / g[2][0]).re,
        a(0, 1) + a(1, 2) + a(2, 0),
    ]
}

/// Find `c₁, c₂` making `tg + c₁b₁ + c₂b₂` fibre-tangent and extract the
/// algebra element.
pub fn vertical_part(t: &Triple, tg: &TripleTangent) -> Result<VerticalDecomposition> {
    let (u, g) = reps_and_gram(t);
    let c = s_coords_unchecked(&u, t.signs());
    if (c.t - 1.0).abs() <= 1e-9 * (1.0 + c.t.abs()) {
        return Err(Error::OnRamification { s: 0.0 });
    }
    let (b1, b2) = b_fields(t)?;
    let m0 = t_matrix(&u, &g, tg)?;
    let m1 = t_matrix(&u, &g, &b1)?;
    let m2 = t_matrix(&u, &g, &b2)?;
    let f0 = fibre_conditions(&m0, &g);
    let zero = Mat3::zeros();
    let fz = fibre_conditions(&zero, &g);
    let f1: Vec<f64> = fibre_conditions(&m1, &g).iter().zip(&fz).map(|(a, b)| a - b).collect();
    let f2: Vec<f64> = fibre_conditions(&m2, &g).iter().zip(&fz).map(|(a, b)| a - b).collect();
    let n = f0.len();
    let a = DMatrix::from_fn(n, 2, |r, k| if k == 0 { f1[r] } else { f2[r] });
    let rhs = nalgebra::DVector::from_iterator(n, f0.iter().map(|x| -x));
    let svd = a.svd(true, true);
    let sol = svd
        .solve(&rhs, 1e-14 * svd.singular_values.max())
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let (c1, c2) = (sol[0], sol[1]);
    let m = m0 + m1 * cr(c1) + m2 * cr(c2);
    let gm = gram_mat(&g);
    let h = m.transpose() * gm + gm * m.conjugate();
    let a12 = (h[(0, 1)] / g[0][1]).im;
    let a23 = (h[(1, 2)] / g[1][2]).im;
    let a31 = (h[(2, 0)] / g[2][0]).im;
    let d = m.trace().im;
    let d1 = (d + a12 - a31) / 3.0;
    let d2 = (d + a23 - a12) / 3.0;
    let d3 = (d + a31 - a23) / 3.0;
    let dm = Mat3::from_diagonal(&Vector::new(cr(d1), cr(d2), cr(d3)));
    let ub = Mat3::from_columns(&u);
    let inv = ub.try_inverse().ok_or(Error::NotStronglyRegular)?;
    let lie = LieElement::new(ub * (m - dm * C64::new(0.0, 1.0)) * inv);
    Ok(VerticalDecomposition { c1, c2, a12, a23, a31, d1, d2, d3, lie })
}

fn coefficients(c: &SCoords) -> (f64, f64) {
    let (t1, t2) = (c.t1, c.t2);
    let den = t1 * t1 * t2 * t2 * (c.t - 1.0);
    let c1 = ((1.0 - c.beta - t2) * t1 * t2 - 2.0 * c.alpha * c.alpha) / den;
    let e = c.alpha * (1.0 - c.beta - 3.0 * t2 + 2.0 * t1 * t2) / (3.0 * den);
    (c1, e)
}

/// Closed form of `ω[b₁,b₂](p₁)` for the canonical representative of `p₁`.
pub fn omega_commutator(t: &Triple) -> Result<Vector> {
    let (u, g) = reps_and_gram(t);
    let c = s_coords(t)?;
    if (c.t - 1.0).abs() <= 1e-9 * (1.0 + c.t.abs()) {
        return Err(Error::OnRamification { s: 0.0 });
    }
    let [p1, p2, p3] = u;
    let tau = tau_of(&g);
    let (c1, e) = coefficients(&c);
    Ok((p1 / g[0][0] - p2 / g[1][0]) * (g[0][0] * c1)
        + (p2 / g[1][0] - p3 / g[2][0]) * (g[0][0] * tau.conj())
        + p1 * C64::new(0.0, e))
}

/// Both sides of the two pairing identities for `ω[b₁,b₂](p₁)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaPairings {
    /// `⟨ω, u₂⟩` from the vertical decomposition.
    pub u2_lhs: C64,
    /// `(2α² − (1−β−t₂)t₁t₂)/(t₁²t₂²(t−1))·g₁₁b`.
    pub u2_rhs: C64,
    /// `⟨ω, p₁⟩` from the vertical decomposition.
    pub p1_lhs: C64,
    /// `iα(1−β−3t₂+2t₁t₂)/(3t₁²t₂²(t−1))·g₁₁`.
    pub p1_rhs: C64,
    /// `b = ⟨p₂,u₂⟩/g₂₁`.
    pub b: C64,
}

impl OmegaPairings {
    pub fn max_error(&self) -> f64 {
        (self.u2_lhs - self.u2_rhs).norm().max((self.p1_lhs - self.p1_rhs).norm())
    }
}

/// `u₃ ∈ p₁^⊥ ∩ L(p₂,p₃)`, `u₂` polar to `L(p₁,u₃)`; pair `ω[b₁,b₂](p₁)`
/// computed by [`vertical_part`] against `u₂` and `p₁`.
pub fn omega_pairings(t: &Triple) -> Result<OmegaPairings> {
    let (u, g) = reps_and_gram(t);
    let c = s_coords(t)?;
    let [p1, p2, p3] = u;
    let u3 = p2 * g[2][0] - p3 * g[1][0];
    let u2 = orthogonal_complement(&p1, &u3);
    let b = form(&p2, &u2) / g[1][0];
    let omega = vertical_part(t, &b_commutator(t)?)?.lie.m * p1;
    let (c1, e) = coefficients(&c);
    Ok(OmegaPairings {
        u2_lhs: form(&omega, &u2),
        u2_rhs: b * g[0][0] * cr(-c1),
        p1_lhs: form(&omega, &p1),
        p1_rhs: g[0][0] * C64::new(0.0, e),
        b,
    })
}

fn flow_rhs(u: &[Vector; 3], which: usize) -> [Vector; 3] {
    let g = |j: usize, k: usize| form(&u[j], &u[k]);
    let (p1, p2, p3) = (u[0], u[1], u[2]);
    let z = Vector::zeros();
    if which == 1 {
        [
            (p1 / g(0, 0) - p2 / g(1, 0)) * g(0, 0),
            (p1 / g(0, 1) - p2 / g(1, 1)) * g(1, 1),
            z,
        ]
    } else {
        [
            z,
            (p2 / g(1, 1) - p3 / g(2, 1)) * g(1, 1),
            (p2 / g(1, 2) - p3 / g(2, 2)) * g(2, 2),
        ]
    }
}

fn flow(u: &[Vector; 3], which: usize, time: f64, steps: usize) -> [Vector; 3] {
    let h = time / steps as f64;
    let add = |a: &[Vector; 3], b: &[Vector; 3], s: f64| [0, 1, 2].map(|j| a[j] + b[j] * cr(s));
    let mut x = *u;
    for _ in 0..steps {
        let k1 = flow_rhs(&x, which);
        let k2 = flow_rhs(&add(&x, &k1, h / 2.0), which);
        let k3 = flow_rhs(&add(&x, &k2, h / 2.0), which);
        let k4 = flow_rhs(&add(&x, &k3, h), which);
        for j in 0..3 {
            x[j] += (k1[j] + k2[j] * cr(2.0) + k3[j] * cr(2.0) + k4[j]) * cr(h / 6.0);
        }
    }
    x
}

fn group_commutator(u: &[Vector; 3], eps: f64, steps: usize) -> [Vector; 3] {
    let mut x = flow(u, 1, eps, steps);
    x = flow(&x, 2, eps, steps);
    x = flow(&x, 1, -eps, steps);
    flow(&x, 2, -eps, steps)
}

/// Velocities of `(K(ε) + K(−ε) − 2p)/(2ε²)` projected off each `p_j`,
/// where `K(ε) = Φ₂^{−ε}Φ₁^{−ε}Φ₂^{ε}Φ₁^{ε}(p)` and `Φ_k` is the flow of
/// `b_k` on representatives. Averaging over the sign of `ε` cancels the
/// cubic term.
pub fn flow_commutator(t: &Triple, eps: f64) -> [Vector; 3] {
    let u = t.reps();
    let steps = 16;
    let a = group_commutator(&u, eps, steps);
    let b = group_commutator(&u, -eps, steps);
    [0, 1, 2].map(|j| {
        let d = (a[j] - u[j]) + (b[j] - u[j]);
        project_orthogonal_v(&u[j], &d) / cr(2.0 * eps * eps)
    })
}

/// Velocities of `(K(ε) − p)/ε²` without symmetrization.
pub fn flow_commutator_one_sided(t: &Triple, eps: f64) -> [Vector; 3] {
    let u = t.reps();
    let x = group_commutator(&u, eps, 16);
    [0, 1, 2].map(|j| project_orthogonal_v(&u[j], &(x[j] - u[j])) / cr(eps * eps))
}

/// Solve each leg of a closed vertical/horizontal loop in S-coordinates,
/// staying on the sheet of `t`, and return the isometry `g` with `g·T' = T`
/// where `T'` is the endpoint.
pub fn loop_holonomy(t: &Triple, waypoints: &[(f64, f64)]) -> Result<(Isometry, Triple)> {
    let start = s_coords(t)?;
    let sheet = start.sheet();
    let mut cur = *t;
    let mut at = (start.t1, start.t2);
    for &(w1, w2) in waypoints {
        let q = ((w1 - 1.0) * (w2 - 1.0) - start.beta - start.alpha * start.alpha / (w1 * w2)) / (w1 * w2);
        let probe = SCoords { t: 1.0 + q.max(0.0).sqrt(), t1: w1, t2: w2, ..start };
        if !(q >= 0.0) || probe.check(1e-8).is_err() {
            return Err(Error::LeavesAdmissibleRegion);
        }
        let mv = if w1 == at.0 && w2 == at.1 {
            continue;
        } else if w1 == at.0 {
            BendMove { pair: Pair::P12, s: vertical_line(&cur, w2, sheet)? }
        } else if w2 == at.1 {
            BendMove { pair: Pair::P23, s: horizontal_line(&cur, w1, sheet)? }
        } else {
            return Err(Error::InvalidInput("waypoints must change one coordinate at a time".into()));
        };
        cur = apply_program(&cur, &BendProgram { moves: vec![mv] })?;
        if !classify_triple(&cur).is_strongly_regular() {
            return Err(Error::LeavesAdmissibleRegion);
        }
        at = (w1, w2);
    }
    let end = s_coords(&cur)?;
    let sc = 1.0 + start.t1.abs().max(start.t2.abs());
    if end.distance(&start) > 1e-8 * sc {
        return Err(Error::InvalidInput("loop does not close in S".into()));
    }
    let g = identify_triples(&cur, t)?;
    Ok((Isometry::from_matrix_unchecked(nearest_identity_lift(g.matrix())), cur))
}

/// Rectangle loop: `t₁ → t₁+ds₁`, `t₂ → t₂+ds₂`, then back.
pub fn rectangle_holonomy(t: &Triple, ds1: f64, ds2: f64) -> Result<Isometry> {
    let c = s_coords(t)?;
    let (a, b) = (c.t1, c.t2);
    let pts = [(a + ds1, b), (a + ds1, b + ds2), (a, b + ds2), (a, b)];
    Ok(loop_holonomy(t, &pts)?.0)
}

/// Rectangle at the point reached by moving `(D₁, D₂)` in S-coordinates,
/// transported back to `t`.
pub fn lasso_holonomy(t: &Triple, d1: f64, d2: f64, ds1: f64, ds2: f64) -> Result<Isometry> {
    let c = s_coords(t)?;
    let (a, b) = (c.t1 + d1, c.t2 + d2);
    let pts = [
        (a, c.t2),
        (a, b),
        (a + ds1, b),
        (a + ds1, b + ds2),
        (a, b + ds2),
        (a, b),
        (a, c.t2),
        (c.t1, c.t2),
    ];
    Ok(loop_holonomy(t, &pts)?.0)
}

/// Coordinates of `log g` in [`centralizer_basis`] of `F`, and the norm of
/// the part of `log g` outside the centralizer.
pub fn centralizer_log_coords(f: &Isometry, g: &Isometry) -> Result<([f64; 2], f64)> {
    let (x1, x2) = centralizer_basis(f)?;
    let l = LieElement::new(log_near_identity(&nearest_identity_lift(g.matrix())));
    let c = [x1.dot(&l), x2.dot(&l)];
    let off = (l.m - x1.m * cr(c[0]) - x2.m * cr(c[1])).norm();
    Ok((c, off))
}

/// Numerical rank of a set of holonomy samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolonomyRank {
    pub dimension: usize,
    /// Singular values of the row-normalized matrix with rows
    /// `(c₁, c₂, off)`, largest first.
    pub singular_values: [f64; 3],
    /// `σ_k/σ_{k+1}` for `k` the dimension.
    pub gap: f64,
    pub conclusive: bool,
    /// Log-coordinates of each sample.
    pub samples: Vec<[f64; 2]>,
    /// Off-centralizer norm of each sample.
    pub off_centralizer: Vec<f64>,
}

/// Relative singular-value threshold for the rank.
pub const RANK_THRESHOLD: f64 = 1e-5;
/// Required ratio between consecutive singular values at the rank.
pub const RANK_GAP: f64 = 1e3;

pub fn rank_of_samples(samples: &[[f64; 2]], off: &[f64]) -> HolonomyRank {
    let rows: Vec<[f64; 3]> = samples
        .iter()
        .zip(off)
        .filter_map(|(s, o)| {
            let n = (s[0] * s[0] + s[1] * s[1] + o * o).sqrt();
            (n > 1e-13).then(|| [s[0] / n, s[1] / n, o / n])
        })
        .collect();
    let base = HolonomyRank {
        dimension: 0,
        singular_values: [0.0; 3],
        gap: f64::INFINITY,
        conclusive: true,
        samples: samples.to_vec(),
        off_centralizer: off.to_vec(),
    };
    if rows.is_empty() {
        return base;
    }
    let m = DMatrix::from_fn(rows.len(), 3, |r, k| rows[r][k]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv.resize(3, 0.0);
    let s = [sv[0], sv[1], sv[2]];
    let dimension = if s[1] > RANK_THRESHOLD * s[0] { 2 } else { 1 };
    let gap = if s[dimension] > 0.0 { s[dimension - 1] / s[dimension] } else { f64::INFINITY };
    let conclusive = gap >= RANK_GAP && s[2] <= RANK_THRESHOLD * s[0];
    HolonomyRank { dimension, singular_values: s, gap, conclusive, ..base }
}

/// The `k`-th loop of [`holonomy_probe`]: for `k = 0` a rectangle of size
/// `ds` (relative to the coordinates) at `t`, otherwise a lasso to a point
/// moved outward by a quasi-random offset.
pub fn holonomy_sample(t: &Triple, k: usize, ds: f64) -> Result<Isometry> {
    let c = s_coords(t)?;
    let out1 = c.t1.signum() * c.t1.abs().max(1.0);
    let out2 = c.t2.signum() * c.t2.abs().max(1.0);
    if k == 0 {
        return rectangle_holonomy(t, ds * out1, ds * out2);
    }
    let ang = std::f64::consts::FRAC_PI_2 * ((k as f64 * 0.618_033_988_749_895).fract());
    let r = 0.1 + 0.6 * ((k as f64 * 0.381_966_011_250_105).fract());
    lasso_holonomy(t, r * ang.cos() * out1, r * ang.sin() * out2, ds * out1, ds * out2)
}

/// Holonomy samples: rectangles of size `ds` at `t` and at points reached
/// by outward transports, with log-coordinates in the centralizer of `F`.
/// Samples are added until the rank is conclusive or `4·n_samples` have
/// been drawn.
pub fn holonomy_probe(t: &Triple, n_samples: usize, ds: f64) -> Result<HolonomyRank> {
    let f = t.product();
    let mut samples = Vec::new();
    let mut off = Vec::new();
    let max_tries = 32 * n_samples.max(1) + 8;
    let mut k = 0usize;
    while k < max_tries {
        let enough = samples.len() >= n_samples;
        if enough && (samples.len() >= 4 * n_samples || rank_of_samples(&samples, &off).conclusive) {
            break;
        }
        let g = holonomy_sample(t, k, ds);
        k += 1;
        if let Ok(g) = g {
            let (cc, o) = centralizer_log_coords(&f, &g)?;
            samples.push(cc);
            off.push(o);
        }
    }
    if samples.is_empty() && n_samples > 0 {
        return Err(Error::LeavesAdmissibleRegion);
    }
    let mut rank = rank_of_samples(&samples, &off);
    if ds == 0.0 {
        rank.dimension = 0;
    }
    Ok(rank)
}

/// Step used by [`holonomy_dimension`] for rectangles, relative to the
/// coordinates.
pub const DEFAULT_DS: f64 = 0.05;

/// Numerical dimension of the holonomy group at `t`.
pub fn holonomy_dimension(t: &Triple, n_samples: usize) -> Result<usize> {
    Ok(holonomy_probe(t, n_samples, DEFAULT_DS)?.dimension)
}

/// How far `g` is from preserving the real span of the standard
/// representatives: `‖Im(e^{−iφ}U⁻¹gU)‖` for the best phase `φ`.
pub fn real_plane_defect(t: &Triple, g: &Isometry) -> Result<f64> {
    let u = crate::triples::standard_reps_unchecked(&t.reps());
    let ub = Mat3::from_columns(&u);
    let inv = ub.try_inverse().ok_or(Error::NotStronglyRegular)?;
    let m = inv * g.matrix() * ub;
    let mut best = m[(0, 0)];
    for z in m.iter() {
        if z.norm() > best.norm() {
            best = *z;
        }
    }
    let ph = C64::from_polar(1.0, -best.arg());
    Ok((m * ph).map(|z| z.im).norm())
}

/// `‖gF − Fg‖`.
pub fn commutator_defect(g: &Isometry, f: &Isometry) -> f64 {
    (g.matrix() * f.matrix() - f.matrix() * g.matrix()).norm()
}
