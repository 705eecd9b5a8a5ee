//! Elements of SU(2,1): reflections, the trace formula, regularity,
//! centralizers, conjugators and two-reflection splittings.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{form, norm2, point, Gram, Point, Tolerances};
use crate::linalg::{
    cr, cube_roots_of_unity, eigen, eigenvalues, form_adjoint, form_defect, phase_normalize,
    rank_one, reproject_su, unit_det,
};
use crate::{Mat3, Vector, C64};

/// An element of SU(2,1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::json::IsometryRepr", into = "crate::json::IsometryRepr")]
pub struct Isometry {
    m: Mat3,
}

impl Isometry {
    /// Checks `m^H J m = J` and `det m = 1` within `tol` (relative).
    pub fn new(m: Mat3, tol: f64) -> Result<Self> {
        let scale = m.norm().powi(2).max(1.0);
        let fd = form_defect(&m);
        if !(fd <= tol * scale) {
            return Err(Error::NotAnIsometry(format!("form defect {fd:e}")));
        }
        let dd = (m.determinant() - cr(1.0)).norm();
        if !(dd <= tol * scale) {
            return Err(Error::NotAnIsometry(format!("determinant defect {dd:e}")));
        }
        Ok(Isometry { m })
    }

    /// Wraps a matrix already known to lie in SU(2,1).
    pub fn from_matrix_unchecked(m: Mat3) -> Self {
        Isometry { m }
    }

    pub fn identity() -> Self {
        Isometry { m: Mat3::identity() }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.m
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    /// Inverse via the form adjoint.
    pub fn inverse(&self) -> Self {
        Isometry { m: form_adjoint(&self.m) }
    }

    pub fn compose(&self, other: &Isometry) -> Self {
        Isometry { m: self.m * other.m }
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        self.m * v
    }

    pub fn apply_point(&self, p: &Point) -> Point {
        point(self.m * p.rep()).expect("isometries preserve nonisotropic points")
    }

    /// Conjugation `self · x · self⁻¹`.
    pub fn conjugate(&self, x: &Mat3) -> Mat3 {
        self.m * x * form_adjoint(&self.m)
    }
}

impl std::ops::Mul for Isometry {
    type Output = Isometry;
    fn mul(self, rhs: Isometry) -> Isometry {
        self.compose(&rhs)
    }
}

/// An element of the Lie algebra su(2,1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LieElement {
    pub m: Mat3,
}

impl LieElement {
    pub fn new(m: Mat3) -> Self {
        LieElement { m }
    }

    /// `|tr m| + ‖m* + m‖` where `*` is the form adjoint.
    pub fn defect(&self) -> f64 {
        self.m.trace().norm() + (form_adjoint(&self.m) + self.m).norm()
    }

    pub fn exp(&self) -> Isometry {
        Isometry { m: self.m.exp() }
    }

    /// Real inner product `Re tr(aᴴ b)`.
    pub fn dot(&self, other: &LieElement) -> f64 {
        (self.m.adjoint() * other.m).trace().re
    }
}

/// A cube root of unity `exp(2πik/3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CubeRoot {
    pub k: u8,
}

impl CubeRoot {
    pub const ONE: CubeRoot = CubeRoot { k: 0 };

    pub fn new(k: u8) -> Result<Self> {
        if k > 2 {
            return Err(Error::InvalidInput(format!("cube root index {k} not in 0..=2")));
        }
        Ok(CubeRoot { k })
    }

    pub fn value(&self) -> C64 {
        cube_roots_of_unity()[[0usize, 1, 2][self.k as usize]]
    }

    /// The cube root of unity closest to `z`.
    pub fn nearest(z: C64) -> Self {
        let mut best = 0u8;
        for k in 1..3u8 {
            if (CubeRoot { k }.value() - z).norm() < (CubeRoot { k: best }.value() - z).norm() {
                best = k;
            }
        }
        CubeRoot { k: best }
    }
}

/// `R(p): x ↦ 2⟨x,p⟩/⟨p,p⟩ p − x`.
pub fn reflection(p: &Point) -> Isometry {
    Isometry { m: reflection_v(p.rep()) }
}

/// Reflection in an arbitrary nonisotropic representative.
pub fn reflection_v(u: &Vector) -> Mat3 {
    rank_one(u, u) * cr(2.0 / norm2(u)) - Mat3::identity()
}

/// `R(p_n)⋯R(p_1)` for representatives listed as `p_1, …, p_n`.
pub fn reflection_product(vs: &[Vector]) -> Mat3 {
    vs.iter().fold(Mat3::identity(), |acc, v| reflection_v(v) * acc)
}

/// Closed-form trace of `R(p_n)⋯R(p_1)` from the Gram matrix.
pub fn trace_formula(g: &Gram) -> Result<C64> {
    let n = g.n();
    if n == 0 {
        return Ok(cr(3.0));
    }
    if n > 24 {
        return Err(Error::InvalidInput("trace formula limited to 24 points".into()));
    }
    let diag: Vec<f64> = (0..n).map(|j| g.get(j, j).re).collect();
    if diag.iter().any(|d| *d == 0.0) {
        return Err(Error::ZeroDiagonal);
    }
    let mut sum = cr(0.0);
    for mask in 1u32..(1u32 << n) {
        let t = mask.count_ones() as i32;
        if t < 2 {
            continue;
        }
        let idx: Vec<usize> = (0..n).filter(|j| mask & (1 << j) != 0).collect();
        let mut prod = cr(1.0);
        for w in 0..idx.len() {
            let a = idx[w];
            let b = idx[(w + 1) % idx.len()];
            prod *= g.get(a, b) / diag[a];
        }
        sum += prod * (-2f64).powi(t);
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok((sum + cr(3.0 - 2.0 * n as f64)) * sign)
}

/// Eigenvalue clusters and regularity verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regularity {
    pub regular: bool,
    /// Distance between the closest pair of eigenvalues.
    pub margin: f64,
}

pub fn regularity(f: &Mat3, eigen_tol: f64) -> Regularity {
    let lam = eigenvalues(f);
    let scale = f.norm().max(1.0);
    let mut margin = f64::INFINITY;
    for i in 0..3 {
        for j in (i + 1)..3 {
            margin = margin.min((lam[i] - lam[j]).norm());
        }
    }
    let mut regular = true;
    for i in 0..3 {
        let members: Vec<C64> =
            lam.iter().copied().filter(|l| (*l - lam[i]).norm() <= eigen_tol * scale).collect();
        if members.len() < 2 {
            continue;
        }
        let c = members.iter().sum::<C64>() / cr(members.len() as f64);
        let sv = (f - Mat3::identity() * c).singular_values();
        let deficiency = sv.iter().filter(|s| **s <= eigen_tol * scale).count();
        if deficiency >= 2 {
            regular = false;
        }
    }
    Regularity { regular, margin }
}

/// Every eigenspace has dimension at most one.
pub fn is_regular(f: &Isometry) -> bool {
    regularity(&f.m, Tolerances::default().eigen).regular
}

/// Two real-independent elements spanning the centralizer of `f` in su(2,1),
/// orthonormal for `Re tr(aᴴ b)`.
pub fn centralizer_basis(f: &Isometry) -> Result<(LieElement, LieElement)> {
    let reg = regularity(&f.m, Tolerances::default().eigen);
    if !reg.regular {
        return Err(Error::NotRegular);
    }
    let scale = f.m.norm().max(1.0);
    let gens: [Mat3; 3] = if reg.margin > 1e-6 * scale {
        let (_, p) = eigen(&f.m);
        let pinv = p.try_inverse().ok_or(Error::NotRegular)?;
        let mut out = [Mat3::zeros(); 3];
        for (k, o) in out.iter_mut().enumerate() {
            let mut d = Mat3::zeros();
            d[(k, k)] = cr(1.0);
            *o = p * d * pinv;
        }
        out
    } else {
        [Mat3::identity(), f.m, f.m * f.m]
    };
    // real-linear constraints on X = Σ c_k gens_k: tr X = 0 and X* + X = 0
    let mut basis_images = Vec::with_capacity(6);
    for k in 0..3 {
        for unit in [cr(1.0), C64::new(0.0, 1.0)] {
            let x = gens[k] * unit;
            let cons = form_adjoint(&x) + x;
            let mut col = Vec::with_capacity(20);
            let tr = x.trace();
            col.push(tr.re);
            col.push(tr.im);
            for z in cons.iter() {
                col.push(z.re);
                col.push(z.im);
            }
            basis_images.push(col);
        }
    }
    let rows = basis_images[0].len();
    let a = DMatrix::from_fn(rows, 6, |r, c| basis_images[c][r]);
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].partial_cmp(&svd.singular_values[j]).unwrap());
    let build = |row: usize| {
        let mut x = Mat3::zeros();
        for k in 0..3 {
            x += gens[k] * C64::new(vt[(row, 2 * k)], vt[(row, 2 * k + 1)]);
        }
        x
    };
    let mut x1 = build(order[0]);
    let mut x2 = build(order[1]);
    // Gram–Schmidt for determinism of scale, then a sign convention
    x1 /= cr(x1.norm());
    let d = (x1.adjoint() * x2).trace().re;
    x2 -= x1 * cr(d);
    x2 /= cr(x2.norm());
    Ok((LieElement { m: sign_fix(x1) }, LieElement { m: sign_fix(x2) }))
}

fn sign_fix(x: Mat3) -> Mat3 {
    let mut best = x[(0, 0)];
    for z in x.iter() {
        if z.norm() > best.norm() * (1.0 + 1e-9) {
            best = *z;
        }
    }
    let key = if best.re.abs() >= best.im.abs() { best.re } else { best.im };
    if key < 0.0 {
        -x
    } else {
        x
    }
}

/// Sign of `⟨v,v⟩` with isotropic vectors reported as 0.
fn eig_sign(v: &Vector) -> i8 {
    let n = norm2(v);
    if n.abs() <= 1e-6 * v.norm_squared() {
        0
    } else if n > 0.0 {
        1
    } else {
        -1
    }
}

/// Eigen-frame of a regular isometry with distinct eigenvalues, normalized
/// in the form: nonisotropic vectors to `⟨v,v⟩ = ±1`, an isotropic pair to
/// `⟨v_a,v_b⟩ = ½`.
fn normalized_eigenframe(f: &Mat3, order: &[usize; 3]) -> Result<([C64; 3], Mat3, [i8; 3])> {
    let (lam0, p0) = eigen(f);
    let lam = [lam0[order[0]], lam0[order[1]], lam0[order[2]]];
    let mut vs: Vec<Vector> = order.iter().map(|&k| p0.column(k).into_owned()).collect();
    let signs = [eig_sign(&vs[0]), eig_sign(&vs[1]), eig_sign(&vs[2])];
    let iso: Vec<usize> = (0..3).filter(|&k| signs[k] == 0).collect();
    match iso.len() {
        0 => {}
        2 => {
            let (a, b) = (iso[0], iso[1]);
            vs[a] = phase_normalize(&(vs[a] / cr(vs[a].norm())));
            let ip = form(&vs[a], &vs[b]);
            if ip.norm() < 1e-12 {
                return Err(Error::NotConjugate("degenerate isotropic eigenvectors".into()));
            }
            vs[b] *= (cr(0.5) / ip).conj();
        }
        _ => return Err(Error::NotConjugate("unsupported eigenvector pattern".into())),
    }
    for k in 0..3 {
        if signs[k] != 0 {
            let n = norm2(&vs[k]).abs().sqrt();
            vs[k] = phase_normalize(&(vs[k] / cr(n)));
        }
    }
    Ok((lam, Mat3::from_columns(&vs), signs))
}

fn sorted_order(lam: &[C64; 3]) -> [usize; 3] {
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| {
        let ka = (lam[a].arg(), lam[a].norm());
        let kb = (lam[b].arg(), lam[b].norm());
        ka.partial_cmp(&kb).unwrap()
    });
    idx
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// `g ∈ SU(2,1)` with `g F g⁻¹ = F'`.
pub fn conjugator(f: &Isometry, f2: &Isometry) -> Result<Isometry> {
    let tol = Tolerances::default();
    let r1 = regularity(&f.m, tol.eigen);
    let r2 = regularity(&f2.m, tol.eigen);
    if !r1.regular || !r2.regular {
        return Err(Error::NotRegular);
    }
    let scale = f.m.norm().max(f2.m.norm()).max(1.0);
    if (f.trace() - f2.trace()).norm() > 1e-7 * scale {
        return Err(Error::NotConjugate("traces differ".into()));
    }
    if r1.margin <= 1e-6 * scale || r2.margin <= 1e-6 * scale {
        return Err(Error::NotConjugate("repeated eigenvalue".into()));
    }
    let l1 = eigenvalues(&f.m);
    let o1 = sorted_order(&l1);
    let l2 = eigenvalues(&f2.m);
    let mut best = PERMS[0];
    let mut dist = f64::INFINITY;
    for perm in PERMS {
        let d: f64 = (0..3).map(|k| (l1[o1[k]] - l2[perm[k]]).norm()).sum();
        if d < dist {
            dist = d;
            best = perm;
        }
    }
    let (_, v, s1) = normalized_eigenframe(&f.m, &o1)?;
    let (_, w, s2) = normalized_eigenframe(&f2.m, &best)?;
    if s1 != s2 {
        return Err(Error::NotConjugate(format!("eigenvector sign patterns {s1:?} vs {s2:?}")));
    }
    let vinv = v.try_inverse().ok_or_else(|| Error::NotConjugate("singular frame".into()))?;
    let g = polish_conjugator(unit_det(&(w * vinv)), &f.m, &f2.m);
    let g = match centralizer_basis(f) {
        Ok((x1, x2)) => polish_conjugator(shortest_in_coset(g, &x1.m, &x2.m), &f.m, &f2.m),
        Err(_) => g,
    };
    let res = (g * f.m * form_adjoint(&g) - f2.m).norm();
    if res > 1e-6 * scale {
        return Err(Error::NotConjugate(format!("residual {res:e}")));
    }
    Ok(Isometry { m: g })
}

/// Real basis of su(2,1), orthonormal for `Re tr(XᴴY)`.
pub fn su21_basis() -> Vec<Mat3> {
    let mut out: Vec<Mat3> = Vec::with_capacity(8);
    for k in 0..18 {
        let mut a = Mat3::zeros();
        a[(k / 6, (k / 2) % 3)] = if k % 2 == 0 { cr(1.0) } else { C64::new(0.0, 1.0) };
        let mut x = (a - form_adjoint(&a)) * cr(0.5);
        let t = x.trace() / cr(3.0);
        x -= Mat3::identity() * t;
        for b in &out {
            let d = (b.adjoint() * x).trace().re;
            x -= b * cr(d);
        }
        let n = x.norm();
        if n > 1e-9 {
            out.push(x / cr(n));
        }
    }
    out
}

fn flatten(m: &Mat3) -> DVector<f64> {
    DVector::from_iterator(18, m.iter().flat_map(|z| [z.re, z.im]))
}

/// Gauss–Newton refinement of `g` towards `g F g⁻¹ = F'`, moving along
/// `g ↦ g·exp(Y)` with `Y ∈ su(2,1)`.
fn polish_conjugator(mut g: Mat3, f: &Mat3, f2: &Mat3) -> Mat3 {
    let basis = su21_basis();
    let resid = |g: &Mat3| (g * f * form_adjoint(g) - f2).norm();
    let mut r = resid(&g);
    let cols: Vec<DVector<f64>> = basis.iter().map(|y| flatten(&(y * f - f * y))).collect();
    let a = DMatrix::from_columns(&cols);
    let svd = a.svd(true, true);
    let eps = 1e-10 * svd.singular_values.max();
    for _ in 0..6 {
        if r <= 1e-15 * f.norm() {
            break;
        }
        let e = form_adjoint(&g) * (f2 - g * f * form_adjoint(&g)) * g;
        let Ok(c) = svd.solve(&flatten(&e), eps) else { break };
        let mut y = Mat3::zeros();
        for (k, b) in basis.iter().enumerate() {
            y += b * cr(c[k]);
        }
        let cand = reproject_su(&(g * LieElement { m: y }.exp().m));
        let rc = resid(&cand);
        if rc >= r {
            break;
        }
        g = cand;
        r = rc;
    }
    g
}

/// `g·exp(c₁X₁ + c₂X₂)` of smallest Frobenius norm; the norm squared is
/// convex in `c`, minimized by damped Newton steps.
fn shortest_in_coset(g: Mat3, x1: &Mat3, x2: &Mat3) -> Mat3 {
    let at = |c: [f64; 2]| g * LieElement { m: x1 * cr(c[0]) + x2 * cr(c[1]) }.exp().m;
    let phi = |c: [f64; 2]| at(c).norm_squared();
    let h = 1e-3;
    let mut c = [0.0f64; 2];
    let mut val = phi(c);
    for _ in 0..60 {
        let mut grad = [0.0; 2];
        let mut hess = [[0.0; 2]; 2];
        for i in 0..2 {
            let mut cp = c;
            let mut cm = c;
            cp[i] += h;
            cm[i] -= h;
            let (fp, fm) = (phi(cp), phi(cm));
            grad[i] = (fp - fm) / (2.0 * h);
            hess[i][i] = (fp - 2.0 * val + fm) / (h * h);
        }
        let mut cpp = c;
        cpp[0] += h;
        cpp[1] += h;
        let mut cmm = c;
        cmm[0] -= h;
        cmm[1] -= h;
        hess[0][1] = (phi(cpp) + phi(cmm) - 2.0 * val) / (2.0 * h * h)
            - (hess[0][0] + hess[1][1]) / 2.0;
        hess[1][0] = hess[0][1];
        let det = hess[0][0] * hess[1][1] - hess[0][1] * hess[1][0];
        let mut step = if det > 1e-12 * (hess[0][0].abs() + hess[1][1].abs()).powi(2)
            && hess[0][0] > 0.0
        {
            [
                -(hess[1][1] * grad[0] - hess[0][1] * grad[1]) / det,
                -(hess[0][0] * grad[1] - hess[1][0] * grad[0]) / det,
            ]
        } else {
            [-grad[0] / val, -grad[1] / val]
        };
        let mut moved = false;
        for _ in 0..30 {
            let cand = [c[0] + step[0], c[1] + step[1]];
            let v = phi(cand);
            if v < val {
                moved = (val - v) > 1e-14 * val;
                c = cand;
                val = v;
                break;
            }
            step = [step[0] / 2.0, step[1] / 2.0];
        }
        if !moved {
            break;
        }
    }
    reproject_su(&at(c))
}

/// Split a hyperbolic `G` into `R(p₄)R(p₅)` with negative `p₄, p₅` on its
/// axis. `s_param` moves the pair along the bending family.
pub fn split_two_reflections(g: &Isometry, s_param: f64) -> Result<(Point, Point)> {
    let lam = eigenvalues(&g.m);
    let scale = g.m.norm().max(1.0);
    if lam.iter().any(|l| l.im.abs() > 1e-8 * scale || l.re <= 0.0) {
        return Err(Error::NotTwoReflectionProduct);
    }
    let mut re: Vec<(f64, usize)> = lam.iter().enumerate().map(|(k, l)| (l.re, k)).collect();
    re.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let (lo, mid, hi) = (re[0].0, re[1].0, re[2].0);
    if (mid - 1.0).abs() > 1e-7 * scale || (lo * hi - 1.0).abs() > 1e-7 * scale || hi <= 1.0 + 1e-7
    {
        return Err(Error::NotTwoReflectionProduct);
    }
    let (_, p) = eigen(&g.m);
    let mut v1 = p.column(re[0].1).into_owned();
    let v2 = p.column(re[2].1).into_owned();
    let polar = p.column(re[1].1).into_owned();
    if eig_sign(&v1) != 0 || eig_sign(&v2) != 0 || eig_sign(&polar) != 1 {
        return Err(Error::NotTwoReflectionProduct);
    }
    v1 = phase_normalize(&(v1 / cr(v1.norm())));
    let ip = form(&v1, &v2);
    let v2 = v2 * (cr(0.5) / ip).conj();
    let a = 0.5 * hi.ln();
    let pt = |x: f64| point(v1 * cr((-x).exp()) - v2 * cr(x.exp()));
    let p5 = pt(s_param)?;
    let p4 = pt(s_param + a)?;
    Ok((p4, p5))
}
