//! JSON representations.
//!
//! Complex scalars are `[re, im]`, vectors are arrays of three scalars,
//! matrices are row-major arrays of scalars.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::hermitian::{point, Gram, Point};
use crate::isometry::Isometry;
use crate::{Mat3, Vector, C64};

pub type ScalarRepr = [f64; 2];
pub type VectorRepr = [ScalarRepr; 3];

pub fn scalar_to_repr(z: C64) -> ScalarRepr {
    [z.re, z.im]
}

pub fn scalar_from_repr(r: ScalarRepr) -> C64 {
    C64::new(r[0], r[1])
}

pub fn vector_to_repr(v: &Vector) -> VectorRepr {
    [scalar_to_repr(v[0]), scalar_to_repr(v[1]), scalar_to_repr(v[2])]
}

pub fn vector_from_repr(r: &VectorRepr) -> Vector {
    Vector::new(scalar_from_repr(r[0]), scalar_from_repr(r[1]), scalar_from_repr(r[2]))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointRepr {
    pub rep: VectorRepr,
    pub sign: i8,
}

impl From<Point> for PointRepr {
    fn from(p: Point) -> Self {
        PointRepr { rep: vector_to_repr(p.rep()), sign: p.sign() }
    }
}

impl TryFrom<PointRepr> for Point {
    type Error = Error;
    fn try_from(r: PointRepr) -> Result<Self, Error> {
        let p = point(vector_from_repr(&r.rep))?;
        if p.sign() != r.sign {
            return Err(Error::InvalidInput(format!(
                "declared sign {} disagrees with self-product sign {}",
                r.sign,
                p.sign()
            )));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GramRepr {
    pub n: usize,
    pub entries: Vec<ScalarRepr>,
}

impl From<Gram> for GramRepr {
    fn from(g: Gram) -> Self {
        let n = g.n();
        let mut entries = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                entries.push(scalar_to_repr(g.get(j, k)));
            }
        }
        GramRepr { n, entries }
    }
}

impl TryFrom<GramRepr> for Gram {
    type Error = Error;
    fn try_from(r: GramRepr) -> Result<Self, Error> {
        if r.entries.len() != r.n * r.n {
            return Err(Error::InvalidInput("gram entries must have n² elements".into()));
        }
        let m = DMatrix::from_fn(r.n, r.n, |j, k| scalar_from_repr(r.entries[j * r.n + k]));
        Gram::new(m)
    }
}

pub fn matrix_to_repr(m: &Mat3) -> Vec<ScalarRepr> {
    let mut out = Vec::with_capacity(9);
    for j in 0..3 {
        for k in 0..3 {
            out.push(scalar_to_repr(m[(j, k)]));
        }
    }
    out
}

pub fn matrix_from_repr(r: &[ScalarRepr]) -> Result<Mat3, Error> {
    if r.len() != 9 {
        return Err(Error::InvalidInput("matrix needs 9 entries".into()));
    }
    Ok(Mat3::from_fn(|j, k| scalar_from_repr(r[3 * j + k])))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsometryRepr {
    pub m: Vec<ScalarRepr>,
}

impl From<Isometry> for IsometryRepr {
    fn from(g: Isometry) -> Self {
        IsometryRepr { m: matrix_to_repr(g.matrix()) }
    }
}

impl TryFrom<IsometryRepr> for Isometry {
    type Error = Error;
    fn try_from(r: IsometryRepr) -> Result<Self, Error> {
        Isometry::new(matrix_from_repr(&r.m)?, 1e-8)
    }
}
