//! The `D = −4` spine: cube vertices from index-2 pairs `(r, s)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::HermitianForm;
use crate::lax::{Mat2A, Vec2};
use crate::ring::{Disc, RingElem};
use crate::spine::{self, spine, OceanGraph, Spine, UfGroup, Vertex};

fn disc4() -> Disc {
    Disc::new(-4).expect("valid")
}

fn sp() -> &'static Spine {
    spine(disc4()).expect("D = -4 spine")
}

fn gi() -> RingElem {
    RingElem::new(2, 1, disc4())
}

/// A cube vertex, given by lax vectors `r, s` with `det(r, s) ~ 1+i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GVertex {
    pub r: Vec2,
    pub s: Vec2,
}

impl GVertex {
    pub fn new(r: Vec2, s: Vec2) -> Result<Self> {
        if r.disc() != disc4() || s.disc() != disc4() {
            return Err(Error::UnsupportedDisc(r.disc().get(), "-4"));
        }
        if r.det(&s).norm() != 2 {
            return Err(Error::Invalid("det(r, s) must be an associate of 1+i".into()));
        }
        Ok(GVertex { r, s })
    }

    /// Basis `(u, v)` with `r = u + v`, `s = u + iv`.
    pub fn basis(&self) -> Result<Mat2A> {
        let d = disc4();
        let one = RingElem::one(d);
        let v = self
            .s
            .sub(&self.r)
            .div_exact(&(gi() - one))
            .ok_or(Error::NotIntegral)?;
        let u = self.r.sub(&v);
        Ok(Mat2A::from_cols(&u, &v))
    }

    pub fn from_basis(b: &Mat2A) -> Self {
        let (u, v) = (b.col0(), b.col1());
        GVertex {
            r: u.add(&v),
            s: u.add(&v.scale(&gi())),
        }
    }

    fn vertex(&self, f: &HermitianForm) -> Result<Vertex> {
        Ok(sp().vertex(f, self.basis()?))
    }
}

/// `r, s, w(r+s), w(r−s), w(r+is), w(r−is)` with `w = (1+i)/2`; opposite
/// pairs are consecutive.
pub fn vertex_vectors(r: &Vec2, s: &Vec2) -> Result<[Vec2; 6]> {
    GVertex::new(*r, *s)?;
    let d = disc4();
    let one = RingElem::one(d);
    let w = one + gi();
    let two = RingElem::int(2, d);
    let half = |x: Vec2| x.scale(&w).div_exact(&two).ok_or(Error::NotIntegral);
    let is = s.scale(&gi());
    let out = [
        *r,
        *s,
        half(r.add(s))?,
        half(r.sub(s))?,
        half(r.add(&is))?,
        half(r.sub(&is))?,
    ];
    if out.iter().any(|v| !v.is_primitive()) {
        return Err(Error::Invalid("derived vector is not primitive".into()));
    }
    Ok(out)
}

/// Values at the three opposite pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VertexLabelG {
    pub pairs: [(i64, i64); 3],
}

impl VertexLabelG {
    pub fn from_labels(l: &[i64]) -> Self {
        VertexLabelG {
            pairs: [(l[0], l[1]), (l[2], l[3]), (l[4], l[5])],
        }
    }

    pub fn inv(&self) -> i64 {
        self.pairs[0].0 + self.pairs[0].1
    }

    /// Pairs sorted within and across, for comparison up to symmetry.
    pub fn sorted(&self) -> [(i64, i64); 3] {
        let mut p = self.pairs.map(|(a, b)| (a.min(b), a.max(b)));
        p.sort();
        p
    }
}

pub fn vertex_labels(f: &HermitianForm, v: &GVertex) -> Result<VertexLabelG> {
    let vs = vertex_vectors(&v.r, &v.s)?;
    let l: Vec<i64> = vs.iter().map(|x| f.eval_vec(x)).collect();
    Ok(VertexLabelG::from_labels(&l))
}

/// `2f(r) + 2f(s)` equals the sum over the four regions `(1+i)/2·(r + iᵏs)`,
/// and the three opposite-pair sums agree.
pub fn cube_relation_check(f: &HermitianForm, v: &GVertex) -> bool {
    let Ok(l) = vertex_labels(f, v) else { return false };
    let inv = l.inv();
    let rest: i64 = l.pairs[1..].iter().map(|(a, b)| a + b).sum();
    2 * inv == rest && l.pairs.iter().all(|(a, b)| a + b == inv)
}

pub fn inv_g(f: &HermitianForm, v: &GVertex) -> i64 {
    f.eval_vec(&v.r) + f.eval_vec(&v.s)
}

/// A superbasis `{u, v, u+v}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GEdge {
    pub u: Vec2,
    pub v: Vec2,
}

impl GEdge {
    pub fn new(u: Vec2, v: Vec2) -> Result<Self> {
        if !u.det(&v).is_unit() {
            return Err(Error::NotInvertible);
        }
        Ok(GEdge { u, v })
    }

    pub fn inv(&self, f: &HermitianForm) -> i64 {
        f.eval_vec(&self.u) + f.eval_vec(&self.v) + f.eval_vec(&self.u.add(&self.v))
    }
}

/// The two cube vertices containing the edge.
pub fn edge_vertices(e: &GEdge) -> [GVertex; 2] {
    let s = sp();
    let b = Mat2A::from_cols(&e.u, &e.v);
    let f0 = HermitianForm::new(disc4(), 1, 1, 0, 0);
    let v = s.vertex(&f0, b);
    let k = (0..s.edges.len())
        .find(|&k| s.edges[k] == [0, 3, 4])
        .expect("edge {u+v, v, iu}");
    let w = s.across(&f0, &v, k);
    [GVertex::from_basis(&v.basis), GVertex::from_basis(&w.basis)]
}

/// `(f(u+iv) + f(u−iv), 2[f(u) + f(v)])`; equal for every form.
pub fn parallelogram_g(f: &HermitianForm, e: &GEdge) -> (i64, i64) {
    let iv = e.v.scale(&gi());
    (
        f.eval_vec(&e.u.add(&iv)) + f.eval_vec(&e.u.sub(&iv)),
        2 * (f.eval_vec(&e.u) + f.eval_vec(&e.v)),
    )
}

/// The vertex across `e` from `v`, with `inv(v) + inv(v′) = 2·inv(e)`.
pub fn edge_step_g(f: &HermitianForm, e: &GEdge, from: &GVertex) -> Result<(GVertex, VertexLabelG)> {
    let [a, b] = edge_vertices(e);
    let key = |x: &GVertex| -> Result<spine::VKey> { Ok(x.vertex(f)?.key) };
    let here = key(from)?;
    let to = if key(&a)? == here {
        b
    } else if key(&b)? == here {
        a
    } else {
        return Err(Error::Invalid("edge is not at this vertex".into()));
    };
    let l = vertex_labels(f, &to)?;
    Ok((to, l))
}

/// `Δ = 2a(a−z) + 2b(b−z) + 2c(c−z) + z²` for one value `a, b, c` from each
/// opposite pair at a vertex with `inv = z`.
pub fn delta_from_vertex(a: i64, b: i64, c: i64, z: i64) -> i64 {
    2 * a * (a - z) + 2 * b * (b - z) + 2 * c * (c - z) + z * z
}

fn require(f: &HermitianForm) -> Result<()> {
    if f.d != disc4() {
        return Err(Error::UnsupportedDisc(f.d.get(), "-4"));
    }
    Ok(())
}

pub fn ocean_graph_g(f: &HermitianForm, radius: usize) -> Result<OceanGraph> {
    require(f)?;
    spine::ocean_graph(f, radius)
}

pub fn uf_generators_g(f: &HermitianForm) -> Result<UfGroup> {
    require(f)?;
    spine::uf_group(f)
}
