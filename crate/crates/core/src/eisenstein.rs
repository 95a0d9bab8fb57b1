//! The `D = −3` spine: ultrabases `{u, v, u+v, u+ρv}` and their labels.

use serde::Serialize;

use crate::classify::{self, FormClass};
use crate::error::{Error, Result};
use crate::forms::HermitianForm;
use crate::lax::{Mat2A, Vec2};
use crate::par::Exec;
use crate::ring::{Disc, RingElem};
use crate::spine::{self, spine, OceanGraph, Spine, UfGroup, Vertex};

fn disc3() -> Disc {
    Disc::new(-3).expect("valid")
}

fn sp() -> &'static Spine {
    spine(disc3()).expect("D = -3 spine")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct UltraBasis {
    pub u: Vec2,
    pub v: Vec2,
}

impl UltraBasis {
    pub fn new(u: Vec2, v: Vec2) -> Result<Self> {
        if u.disc() != disc3() || v.disc() != disc3() {
            return Err(Error::UnsupportedDisc(u.disc().get(), "-3"));
        }
        if !u.det(&v).is_unit() {
            return Err(Error::NotInvertible);
        }
        Ok(UltraBasis { u, v })
    }

    pub fn standard() -> Self {
        let d = disc3();
        UltraBasis {
            u: Vec2::e1(d),
            v: Vec2::e2(d),
        }
    }

    pub fn basis(&self) -> Mat2A {
        Mat2A::from_cols(&self.u, &self.v)
    }

    /// `u, v, u+v, u+ρv`.
    pub fn vectors(&self) -> [Vec2; 4] {
        let r = sp().regions(&self.basis());
        [r[0], r[1], r[2], r[3]]
    }

    fn from_vertex(v: &Vertex) -> Self {
        UltraBasis {
            u: v.basis.col0(),
            v: v.basis.col1(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VertexLabelE {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl VertexLabelE {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        VertexLabelE { a, b, c, d }
    }

    pub fn to_array(self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn from_slice(l: &[i64]) -> Self {
        VertexLabelE::new(l[0], l[1], l[2], l[3])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GreekLabel {
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
    pub delta: i64,
}

pub fn greeks(l: VertexLabelE) -> GreekLabel {
    let s = inv_vertex(l);
    GreekLabel {
        alpha: s - 3 * l.a,
        beta: s - 3 * l.b,
        gamma: s - 3 * l.c,
        delta: s - 3 * l.d,
    }
}

pub fn disc_e(l: VertexLabelE) -> i64 {
    classify::disc_labels_e(&l.to_array())
}

pub fn inv_vertex(l: VertexLabelE) -> i64 {
    l.a + l.b + l.c + l.d
}

/// `f(xu + yv) = (1/3)[βN(x) + αN(y) + γN(x−y) + δN(ρx−y)]`.
pub fn eval_at_vertex(l: VertexLabelE, ub: &UltraBasis, w: &Vec2) -> Result<i64> {
    let inv = ub.basis().inverse()?;
    let xy = inv.apply(w);
    let (x, y) = (xy.x, xy.y);
    let rho = RingElem::new(2, 1, disc3());
    let g = greeks(l);
    let s = g.beta * x.norm() + g.alpha * y.norm() + g.gamma * (x - y).norm() + g.delta * (rho * x - y).norm();
    if s % 3 != 0 {
        return Err(Error::NotIntegral);
    }
    Ok(s / 3)
}

/// Cross the edge opposite label `k` (0 to 3); the new label is `inv − 2·label_k`.
pub fn climb(f: &HermitianForm, ub: &UltraBasis, k: usize) -> Result<(VertexLabelE, UltraBasis)> {
    if k > 3 {
        return Err(Error::BadIndex(k as i64));
    }
    let s = sp();
    let v = s.vertex(f, ub.basis());
    let e = s.edges.iter().position(|ed| !ed.contains(&k)).expect("edge");
    let w = s.across(f, &v, e);
    Ok((VertexLabelE::from_slice(&w.labels), UltraBasis::from_vertex(&w)))
}

/// Label change across the edge opposite `k`, from labels alone.
pub fn climb_value(l: VertexLabelE, k: usize) -> i64 {
    inv_vertex(l) - 2 * l.to_array()[k]
}

fn require(f: &HermitianForm) -> Result<()> {
    if f.d != disc3() {
        return Err(Error::UnsupportedDisc(f.d.get(), "-3"));
    }
    Ok(())
}

/// The well-set: one entry when all greeks are positive.
pub fn find_well(f: &HermitianForm) -> Result<Vec<(UltraBasis, VertexLabelE)>> {
    require(f)?;
    let w = spine::find_well(f)?;
    Ok(spine::well_set(f, &w)?
        .iter()
        .map(|v| (UltraBasis::from_vertex(v), VertexLabelE::from_slice(&v.labels)))
        .collect())
}

pub fn find_ocean_vertex(f: &HermitianForm) -> Result<(UltraBasis, VertexLabelE)> {
    require(f)?;
    let v = spine::find_ocean_vertex(f)?;
    Ok((UltraBasis::from_vertex(&v), VertexLabelE::from_slice(&v.labels)))
}

pub fn classify_disc_e(delta: i64, exec: Exec) -> Result<Vec<FormClass>> {
    classify::classify(disc3(), delta, exec)
}

pub fn ocean_graph_e(f: &HermitianForm, radius: usize) -> Result<OceanGraph> {
    require(f)?;
    spine::ocean_graph(f, radius)
}

pub fn uf_generators_e(f: &HermitianForm) -> Result<UfGroup> {
    require(f)?;
    spine::uf_group(f)
}
