//! Cusps and horoballs in upper half-space, the cell of the spine at the
//! infinite cusp, and horosphere tilings.
//!
//! Exact points of `C` are written `z = X + iY√|D|` with rational `X, Y`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::classify::elements_of_norm;
use crate::error::{Error, Result};
use crate::forms::{solve_rat, Cusp};
use crate::par::{self, Exec};
use crate::polygon::{self, HalfPlane, Polygon};
use crate::rat::{to_f64, Rat};
use crate::ring::{canonical_associate, module_norm, Disc, RingElem};

/// `(z, ζ)` in upper half-space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Point3 {
    pub re: f64,
    pub im: f64,
    pub zeta: f64,
}

/// `d_α(w) = N(b)/N(I)·(|z−α|² + ζ²)/ζ`, and `1/ζ` at `∞`.
pub fn cusp_distance(alpha: &Cusp, w: &Point3) -> f64 {
    if alpha.is_infinity() {
        return 1.0 / w.zeta;
    }
    let a = alpha.a.embed() / alpha.b.embed();
    let k = alpha.b.norm() as f64 / alpha.norm_n as f64;
    let dz = (w.re - a.re).powi(2) + (w.im - a.im).powi(2);
    k * (dz + w.zeta * w.zeta) / w.zeta
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Contact {
    Touch,
    Disjoint,
}

/// Compare `N(ad − bc)` with `N(I)·N(J)`.
pub fn horoballs_touch(alpha: &Cusp, beta: &Cusp) -> Result<Contact> {
    let det = alpha.a * beta.b - alpha.b * beta.a;
    if det.is_zero() {
        return Err(Error::Geometry("equal cusps"));
    }
    let lhs = det.norm();
    let rhs = alpha.norm_n * beta.norm_n;
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Equal => Ok(Contact::Touch),
        std::cmp::Ordering::Greater => Ok(Contact::Disjoint),
        std::cmp::Ordering::Less => Err(Error::HoroballOverlap(lhs, rhs)),
    }
}

/// Exact coordinates `(X, Y)` of `a/b`.
pub fn exact_point(a: &RingElem, b: &RingElem) -> (Rat, Rat) {
    let p = *a * b.conj();
    let n = b.norm() as i128;
    let d = a.d.get() as i128;
    (
        Rat::new(2 * p.x as i128 + d * p.y as i128, 2 * n),
        Rat::new(p.y as i128, 2 * n),
    )
}

/// Half-plane `tr(z·w) ≤ rhs` in `(X, Y)` coordinates, reduced by the gcd.
fn trace_half_plane(d: Disc, w: &RingElem, rhs: i64) -> (i64, i64, i64) {
    let a = 2 * w.x + d.get() * w.y;
    let b = -d.abs() * w.y;
    let g = num_integer::gcd(num_integer::gcd(a, b), rhs).max(1);
    (a / g, b / g, rhs / g)
}

fn box_exact() -> Polygon<Rat> {
    let t = Rat::from_integer(2);
    polygon::rect(-t, -t, t, t)
}

fn clip_exact(lines: &BTreeSet<(i64, i64, i64)>) -> Polygon<Rat> {
    let r = |v: i64| Rat::from_integer(v as i128);
    let hs: Vec<HalfPlane<Rat>> = lines.iter().map(|&(a, b, c)| HalfPlane::new(r(a), r(b), r(c))).collect();
    polygon::normalize(&polygon::clip_all(box_exact(), &hs))
}

/// Elements of `A` with `0 < N ≤ n`.
fn elements_up_to(d: Disc, n: i64) -> Vec<RingElem> {
    (1..=n).flat_map(|k| elements_of_norm(d, k)).collect()
}

fn max_ideal_norm(d: Disc) -> i64 {
    // 3·N(I)² ≤ |D|
    let mut n = 1;
    while 3 * (n + 1) * (n + 1) <= d.abs() {
        n += 1;
    }
    n
}

/// An exact convex polygon with its float image in `C`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellPolygon {
    pub d: i64,
    #[serde(serialize_with = "ser_exact")]
    pub vertices: Polygon<Rat>,
    pub complex: Vec<(f64, f64)>,
    #[serde(serialize_with = "crate::rat::serialize")]
    pub area_xy: Rat,
}

fn ser_exact<S: serde::Serializer>(p: &Polygon<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(p.len()))?;
    for (x, y) in p {
        seq.serialize_element(&serde_json::json!({
            "x": crate::rat::to_json(x),
            "y": crate::rat::to_json(y),
        }))?;
    }
    seq.end()
}

impl CellPolygon {
    fn new(d: Disc, vertices: Polygon<Rat>) -> Self {
        let s = (d.abs() as f64).sqrt();
        let complex = vertices.iter().map(|(x, y)| (to_f64(x), to_f64(y) * s)).collect();
        let area_xy = polygon::area(&vertices);
        CellPolygon {
            d: d.get(),
            vertices,
            complex,
            area_xy,
        }
    }

    /// Euclidean area in `C`.
    pub fn area(&self) -> f64 {
        to_f64(&self.area_xy) * (self.d.abs() as f64).sqrt()
    }

    /// `1 − |z|²` at each vertex: `ζ²` where the cell meets the hemisphere over 0.
    pub fn zeta_squared(&self) -> Vec<Rat> {
        let ad = Rat::from_integer(self.d.abs() as i128);
        self.vertices
            .iter()
            .map(|(x, y)| Rat::from_integer(1) - x * x - ad * y * y)
            .collect()
    }
}

/// Lines `tr(z·ā·b) = N(a) + N(b) − N(I)` for cusps `a/b ∉ {0, ∞}` with
/// `3N(I)² ≤ |D|` and `2N(a), 2N(b) ≤ N(I)·|D|`.
pub fn cell_lines(d: Disc) -> Result<BTreeSet<(i64, i64, i64)>> {
    let nmax = max_ideal_norm(d);
    let elems = elements_up_to(d, nmax * d.abs() / 2);
    let mut lines = BTreeSet::new();
    for a in &elems {
        for b in &elems {
            let ni = module_norm(a, b)?;
            if 3 * ni * ni > d.abs() || 2 * a.norm() > ni * d.abs() || 2 * b.norm() > ni * d.abs() {
                continue;
            }
            let w = a.conj() * *b;
            lines.insert(trace_half_plane(d, &w, a.norm() + b.norm() - ni));
        }
    }
    Ok(lines)
}

/// The face of the spine between the regions of `∞` and `0`, projected to `C`.
pub fn fundamental_cell(d: Disc) -> Result<CellPolygon> {
    Ok(CellPolygon::new(d, clip_exact(&cell_lines(d)?)))
}

/// Points of `C` closer to `0` than to any other element of `A`.
pub fn voronoi_cell(d: Disc) -> Result<CellPolygon> {
    let lines: BTreeSet<_> = elements_up_to(d, d.abs() + 2)
        .iter()
        .map(|a| trace_half_plane(d, &a.conj(), a.norm()))
        .collect();
    Ok(CellPolygon::new(d, clip_exact(&lines)))
}

/// Point equidistant from four cusps; `∞` may be one of them.
pub fn vertex_position(cusps: &[Cusp; 4]) -> Result<(Point3, Rat)> {
    let d = cusps[0].disc();
    let ad = Rat::from_integer(d.abs() as i128);
    let mut m = [[Rat::from_integer(0); 4]; 4];
    let mut rhs = [Rat::from_integer(0); 4];
    for (i, c) in cusps.iter().enumerate() {
        if c.is_infinity() {
            m[i] = [Rat::from_integer(0), Rat::from_integer(0), Rat::from_integer(0), Rat::from_integer(1)];
            rhs[i] = Rat::from_integer(1);
            continue;
        }
        // k·(W − 2Re(z·ᾱ) + |α|²) = t with W = |z|² + ζ²
        let k = Rat::new(c.b.norm() as i128, c.norm_n as i128);
        let (xa, ya) = exact_point(&c.a, &c.b);
        let two = Rat::from_integer(2);
        m[i] = [-two * k * xa, -two * k * ad * ya, k, Rat::from_integer(-1)];
        rhs[i] = -k * (xa * xa + ad * ya * ya);
    }
    let s = solve_rat(m, rhs).ok_or(Error::Geometry("degenerate cusp configuration"))?;
    let (x, y, w) = (s[0], s[1], s[2]);
    let z2 = w - x * x - ad * y * y;
    if z2 <= Rat::from_integer(0) {
        return Err(Error::Geometry("no common point above the plane"));
    }
    let p = Point3 {
        re: to_f64(&x),
        im: to_f64(&y) * (d.abs() as f64).sqrt(),
        zeta: to_f64(&z2).sqrt(),
    };
    Ok((p, z2))
}

/// A cusp with its power-diagram weight `N(I)/N(b)`.
#[derive(Clone, Debug, Serialize)]
pub struct PowerSite {
    pub cusp: Cusp,
    pub alpha: (f64, f64),
    pub weight: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Tile {
    pub site: PowerSite,
    pub polygon: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Tiling {
    pub d: i64,
    pub window: [f64; 4],
    pub tiles: Vec<Tile>,
}

impl Tiling {
    pub fn area(&self) -> f64 {
        self.tiles.iter().map(|t| polygon::area(&t.polygon)).sum()
    }
}

/// Cusps `a/b` in the rectangle with `3N(I)² ≤ |D|` and `2N(b) ≤ N(I)·|D|`.
pub fn power_sites(d: Disc, rect: [f64; 4]) -> Result<Vec<PowerSite>> {
    let nmax = max_ideal_norm(d);
    let bmax = nmax * d.abs() / 2;
    let s = (d.abs() as f64).sqrt();
    let mut seen: BTreeMap<(i64, i64, i64), PowerSite> = BTreeMap::new();
    let mut bs: Vec<RingElem> = elements_up_to(d, bmax).iter().map(|b| canonical_associate(b).0).collect();
    bs.sort_by_key(|b| (b.norm(), b.x, b.y));
    bs.dedup();
    let rmax = rect.iter().map(|v| v.abs()).fold(0.0, f64::max) * 2f64.sqrt();
    for b in &bs {
        let bz = b.embed();
        let lim = bz.norm() * rmax + 1.0;
        let ymax = (2.0 * lim / s).ceil() as i64;
        for y in -ymax..=ymax {
            let cx = -(d.get() as f64) * y as f64 / 2.0;
            let xmax = lim.ceil() as i64 + 1;
            for x in (cx.floor() as i64 - xmax)..=(cx.ceil() as i64 + xmax) {
                let a = RingElem::new(x, y, d);
                let al = a.embed() / bz;
                if al.re < rect[0] || al.re > rect[2] || al.im < rect[1] || al.im > rect[3] {
                    continue;
                }
                if a.is_zero() && b.norm() != 1 {
                    continue;
                }
                let ni = module_norm(&a, b)?;
                if 3 * ni * ni > d.abs() || 2 * b.norm() > ni * d.abs() {
                    continue;
                }
                let cusp = Cusp { a, b: *b, norm_n: ni };
                seen.entry(cusp.point_key()).or_insert(PowerSite {
                    cusp,
                    alpha: (al.re, al.im),
                    weight: ni as f64 / b.norm() as f64,
                });
            }
        }
    }
    Ok(seen.into_values().collect())
}

/// Power diagram of the cusps at the infinite cusp, clipped to `window`.
pub fn horosphere_tiling(d: Disc, window: [f64; 4], exec: Exec) -> Result<Tiling> {
    let [x0, y0, x1, y1] = window;
    if !(x1 > x0 && y1 > y0) || window.iter().any(|v| !v.is_finite()) {
        return Err(Error::Geometry("degenerate window"));
    }
    let sites = power_sites(d, [x0 - 3.0, y0 - 3.0, x1 + 3.0, y1 + 3.0])?;
    let inner: Vec<&PowerSite> = sites
        .iter()
        .filter(|p| p.alpha.0 >= x0 - 1.0 && p.alpha.0 <= x1 + 1.0 && p.alpha.1 >= y0 - 1.0 && p.alpha.1 <= y1 + 1.0)
        .collect();
    let win = polygon::rect(x0, y0, x1, y1);
    let cells = par::map(exec, &inner, |p| {
        let (ax, ay) = p.alpha;
        let hs: Vec<HalfPlane<f64>> = sites
            .iter()
            .filter(|q| {
                let (dx, dy) = (q.alpha.0 - ax, q.alpha.1 - ay);
                (dx != 0.0 || dy != 0.0) && dx * dx + dy * dy < 4.0 + 1e-9
            })
            .map(|q| {
                // |z−α|² − w_α ≤ |z−β|² − w_β
                let (bx, by) = q.alpha;
                HalfPlane::new(
                    2.0 * (bx - ax),
                    2.0 * (by - ay),
                    bx * bx + by * by - ax * ax - ay * ay - q.weight + p.weight,
                )
            })
            .collect();
        polygon::tidy(polygon::clip_all(win.clone(), &hs), 1e-9)
    });
    let tiles = inner
        .into_iter()
        .zip(cells)
        .filter(|(_, c)| polygon::area(c) > 1e-14)
        .map(|(p, c)| Tile {
            site: p.clone(),
            polygon: c,
        })
        .collect();
    Ok(Tiling {
        d: d.get(),
        window,
        tiles,
    })
}
