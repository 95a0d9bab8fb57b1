//! Projection of oceans to the hyperbolic plane of a form, and SVG output.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{transform_any, Cusp, HermitianForm};
use crate::lax::Mat2A;
use crate::polygon;
use crate::ring::RingElem;
use crate::spine::{spine, OceanGraph, Vertex};
use crate::spine_geom::{vertex_position, Point3, Tiling};
use crate::topograph::{explore, TopoVertex};
use crate::forms::QuadraticForm;

/// Center and radius of `{z : f(z, 1) = 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Circle {
    pub center: (f64, f64),
    pub radius: f64,
}

fn circle_raw(f: &HermitianForm) -> Circle {
    let nu = f.nu.embed();
    let c = -nu.conj() / f.a as f64;
    let r = (f.disc() as f64 / f.d.abs() as f64).sqrt() / (f.a as f64).abs();
    Circle {
        center: (c.re, c.im),
        radius: r,
    }
}

/// A change of basis `g` with `(f∘g)(e₁) ≠ 0`; the identity when `a ≠ 0`.
pub fn finite_frame(f: &HermitianForm) -> Result<Mat2A> {
    let d = f.d;
    let o = RingElem::one(d);
    let z = RingElem::zero(d);
    if f.a != 0 {
        return Ok(Mat2A::identity(d));
    }
    for t in 1..=4 {
        for y in 0..=1 {
            let g = Mat2A::new(o, z, RingElem::new(t, y, d), o);
            if transform_any(f, &g).a != 0 {
                return Ok(g);
            }
        }
    }
    Err(Error::Isotropic)
}

/// The circle of `f`, after moving `f` so that `a ≠ 0`.
pub fn circle_of_form(f: &HermitianForm) -> Result<(Circle, Mat2A)> {
    if f.disc() <= 0 {
        return Err(Error::NotIndefinite(f.disc()));
    }
    let g = finite_frame(f)?;
    Ok((circle_raw(&transform_any(f, &g)), g))
}

/// `z ↦ (az + b)/(cz + d)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobiusMap {
    pub m: [[Complex64; 2]; 2],
}

impl MobiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        if (a * d - b * c).norm() < 1e-300 {
            return Err(Error::Geometry("singular Möbius map"));
        }
        Ok(MobiusMap { m: [[a, b], [c, d]] })
    }

    /// `z ↦ (z − center)/radius`.
    pub fn normalizing(c: &Circle) -> Self {
        let one = Complex64::new(1.0, 0.0);
        MobiusMap {
            m: [[one, -Complex64::new(c.center.0, c.center.1)], [Complex64::new(0.0, 0.0), Complex64::new(c.radius, 0.0)]],
        }
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        let [[a, b], [c, d]] = self.m;
        (a * z + b) / (c * z + d)
    }

    /// Poincaré extension to upper half-space.
    pub fn extend(&self, w: &Point3) -> Point3 {
        let [[a, b], [c, d]] = self.m;
        let z = Complex64::new(w.re, w.im);
        let t2 = w.zeta * w.zeta;
        let czd = c * z + d;
        let den = czd.norm_sqr() + c.norm_sqr() * t2;
        let num = (a * z + b) * czd.conj() + a * c.conj() * t2;
        let det = (a * d - b * c).norm();
        Point3 {
            re: num.re / den,
            im: num.im / den,
            zeta: det * w.zeta / den,
        }
    }
}

/// Point of the Poincaré disk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DiskPoint {
    pub u: f64,
    pub v: f64,
}

impl DiskPoint {
    fn c(&self) -> Complex64 {
        Complex64::new(self.u, self.v)
    }

    /// Image in the Klein model.
    pub fn klein(&self) -> (f64, f64) {
        let s = 1.0 + self.u * self.u + self.v * self.v;
        (2.0 * self.u / s, 2.0 * self.v / s)
    }
}

/// Nearest point of the unit hemisphere, as a point of the disk.
///
/// The Cayley map sends the hemisphere to the vertical half-plane over the
/// real axis; nearest-point projection there is `(x, y, ζ) ↦ (x, √(y² + ζ²))`.
/// Also returns the hyperbolic distance to the hemisphere.
pub fn hemisphere_to_disk(p: &Point3) -> Result<(DiskPoint, f64)> {
    if p.zeta <= 0.0 || !p.zeta.is_finite() {
        return Err(Error::Geometry("point not above the plane"));
    }
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let cayley = MobiusMap { m: [[i, i], [-one, one]] };
    let q = cayley.extend(p);
    let eta = q.im.hypot(q.zeta);
    let w = Complex64::new(q.re, eta);
    let z = (w - i) / (w + i);
    let dist = (eta / q.zeta).acosh();
    Ok((DiskPoint { u: z.re, v: z.im }, dist))
}

/// Position in upper half-space of a spine vertex, from its regions.
pub fn spine_vertex_position(v: &Vertex) -> Result<Point3> {
    let cusps: Vec<Cusp> = v.regions.iter().map(Cusp::from_vec).collect::<Result<_>>()?;
    let n = cusps.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    if let Ok((p, _)) = vertex_position(&[cusps[i], cusps[j], cusps[k], cusps[l]]) {
                        return Ok(p);
                    }
                }
            }
        }
    }
    Err(Error::Geometry("vertex cusps are degenerate"))
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectedVertex {
    pub disk: DiskPoint,
    pub inv: i64,
    pub labels: Vec<i64>,
    /// Number of ocean cells at the vertex in the full ocean.
    pub ocean_cells: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectedCell {
    pub cycle: Vec<usize>,
    pub values: [i64; 2],
    /// Interior angle at each cycle vertex.
    pub angles: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OceanProjection {
    pub d: i64,
    pub disc: i64,
    pub circle: Circle,
    pub vertices: Vec<ProjectedVertex>,
    pub edges: Vec<[usize; 2]>,
    pub cells: Vec<ProjectedCell>,
}

/// Angle at `p` between the geodesics to `q0` and `q1`.
pub fn disk_angle(p: DiskPoint, q0: DiskPoint, q1: DiskPoint) -> f64 {
    let t = |q: DiskPoint| (q.c() - p.c()) / (Complex64::new(1.0, 0.0) - p.c().conj() * q.c());
    (t(q1) / t(q0)).arg().abs()
}

/// Project an explored ocean to the Poincaré disk.
pub fn project_ocean(graph: &OceanGraph) -> Result<OceanProjection> {
    let f = &graph.form;
    let sp = spine(f.d)?;
    let (circle, g) = circle_of_form(f)?;
    let h = g.inverse()?;
    let m = MobiusMap::normalizing(&circle);
    let mut vertices = Vec::with_capacity(graph.vertices.len());
    for v in &graph.vertices {
        let moved = sp.vertex(&transform_any(f, &g), h.mul(&v.basis));
        let p = m.extend(&spine_vertex_position(&moved)?);
        if p.zeta <= 0.0 {
            return Err(Error::Geometry("vertex below the plane after normalization"));
        }
        let (disk, _) = hemisphere_to_disk(&p)?;
        vertices.push(ProjectedVertex {
            disk,
            inv: sp.inv(&v.labels),
            labels: v.labels.clone(),
            ocean_cells: (0..sp.cells.len()).filter(|&c| sp.is_ocean_cell(v, c)).count(),
        });
    }
    let edges = graph.edges.iter().map(|e| e.ends).collect();
    let cells = graph
        .cells
        .iter()
        .map(|c| {
            let n = c.cycle.len();
            let angles = (0..n)
                .map(|i| {
                    let p = vertices[c.cycle[i]].disk;
                    let a = vertices[c.cycle[(i + n - 1) % n]].disk;
                    let b = vertices[c.cycle[(i + 1) % n]].disk;
                    disk_angle(p, a, b)
                })
                .collect();
            ProjectedCell {
                cycle: c.cycle.clone(),
                values: c.values,
                angles,
            }
        })
        .collect();
    Ok(OceanProjection {
        d: f.d.get(),
        disc: f.disc(),
        circle,
        vertices,
        edges,
        cells,
    })
}

impl OceanProjection {
    pub fn klein_polygon(&self, c: &ProjectedCell) -> Vec<(f64, f64)> {
        c.cycle.iter().map(|&i| self.vertices[i].disk.klein()).collect()
    }

    /// Explored cells at vertex `i`.
    pub fn cells_at(&self, i: usize) -> Vec<(usize, f64)> {
        self.cells
            .iter()
            .enumerate()
            .filter_map(|(k, c)| c.cycle.iter().position(|&x| x == i).map(|p| (k, c.angles[p])))
            .collect()
    }

    /// Angle sum at `i` when every ocean cell there was explored.
    pub fn angle_sum(&self, i: usize) -> Option<f64> {
        let cs = self.cells_at(i);
        (cs.len() == self.vertices[i].ocean_cells).then(|| cs.iter().map(|x| x.1).sum())
    }

    /// Largest pairwise overlap area of projected cells (Klein model).
    pub fn max_overlap(&self) -> f64 {
        let polys: Vec<Vec<(f64, f64)>> = self.cells.iter().map(|c| self.klein_polygon(c)).collect();
        let boxes: Vec<[f64; 4]> = polys
            .iter()
            .map(|p| {
                p.iter().fold([f64::MAX, f64::MAX, f64::MIN, f64::MIN], |b, q| {
                    [b[0].min(q.0), b[1].min(q.1), b[2].max(q.0), b[3].max(q.1)]
                })
            })
            .collect();
        let mut worst: f64 = 0.0;
        for i in 0..polys.len() {
            for j in i + 1..polys.len() {
                let (a, b) = (boxes[i], boxes[j]);
                if a[2] < b[0] || b[2] < a[0] || a[3] < b[1] || b[3] < a[1] {
                    continue;
                }
                worst = worst.max(polygon::area(&polygon::intersect(&polys[i], &polys[j])));
            }
        }
        worst
    }
}

fn fmt(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn svg_open(out: &mut String, view: [f64; 4]) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {} {}" width="800" height="800">"#,
        fmt(view[0]),
        fmt(view[1]),
        fmt(view[2]),
        fmt(view[3])
    );
}

/// Path segment along the geodesic from `p` to `q`.
fn geodesic_to(p: DiskPoint, q: DiskPoint) -> String {
    let (pc, qc) = (p.c(), q.c());
    let cross = p.u * q.v - p.v * q.u;
    if cross.abs() < 1e-4 || pc.norm() < 1e-9 {
        return format!("L {} {}", fmt(q.u), fmt(q.v));
    }
    // circle through p, q and the inverse of p
    let ps = pc / pc.norm_sqr();
    let (a, b, c) = (pc, qc, ps);
    let dd = 2.0 * (a.re * (b.im - c.im) + b.re * (c.im - a.im) + c.re * (a.im - b.im));
    let ux = (a.norm_sqr() * (b.im - c.im) + b.norm_sqr() * (c.im - a.im) + c.norm_sqr() * (a.im - b.im)) / dd;
    let uy = (a.norm_sqr() * (c.re - b.re) + b.norm_sqr() * (a.re - c.re) + c.norm_sqr() * (b.re - a.re)) / dd;
    let r = ((a.re - ux).powi(2) + (a.im - uy).powi(2)).sqrt();
    let side = (q.u - p.u) * (uy - p.v) - (q.v - p.v) * (ux - p.u);
    let sweep = if side > 0.0 { 1 } else { 0 };
    format!("A {} {} 0 0 {} {} {}", fmt(r), fmt(r), sweep, fmt(q.u), fmt(q.v))
}

fn inv_color(inv: i64) -> &'static str {
    match inv.signum() {
        1 => "#c0392b",
        -1 => "#2c5aa0",
        _ => "#555555",
    }
}

/// Ocean cells as geodesic polygons in the unit disk.
pub fn svg_ocean(p: &OceanProjection) -> String {
    let mut out = String::new();
    svg_open(&mut out, [-1.05, -1.05, 2.1, 2.1]);
    let _ = writeln!(out, r#"<g transform="scale(1,-1)">"#);
    let _ = writeln!(out, r##"<circle cx="0" cy="0" r="1" fill="#fbfbf8" stroke="#000" stroke-width="0.004"/>"##);
    let palette = ["#f6e3b4", "#cfe3f2", "#d9efd3", "#f2d0d5", "#e3d7f2", "#f1e7d0"];
    for c in &p.cells {
        if c.cycle.is_empty() {
            continue;
        }
        let pts: Vec<DiskPoint> = c.cycle.iter().map(|&i| p.vertices[i].disk).collect();
        let mut d = format!("M {} {}", fmt(pts[0].u), fmt(pts[0].v));
        for i in 0..pts.len() {
            d.push(' ');
            d.push_str(&geodesic_to(pts[i], pts[(i + 1) % pts.len()]));
        }
        let idx = (c.values[0].unsigned_abs() + 2 * c.values[1].unsigned_abs()) as usize
            + usize::from(c.values[0] < 0);
        let idx = idx % palette.len();
        let _ = writeln!(
            out,
            r##"<path d="{d} Z" fill="{}" stroke="#333" stroke-width="0.002"/>"##,
            palette[idx]
        );
    }
    for v in &p.vertices {
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{}" fill="{}"/>"#,
            fmt(v.disk.u),
            fmt(v.disk.v),
            fmt(0.006 * (1.0 - v.disk.u * v.disk.u - v.disk.v * v.disk.v).max(0.05)),
            inv_color(v.inv)
        );
    }
    let _ = writeln!(out, "</g>\n</svg>");
    out
}

/// Tiles of a horosphere tiling, colored by ideal norm and weight.
pub fn svg_tiling(t: &Tiling) -> String {
    let [x0, y0, x1, y1] = t.window;
    let mut out = String::new();
    svg_open(&mut out, [x0, -y1, x1 - x0, y1 - y0]);
    let _ = writeln!(out, r#"<g transform="scale(1,-1)">"#);
    let sw = (x1 - x0) / 800.0;
    for tile in &t.tiles {
        let pts: Vec<String> = tile.polygon.iter().map(|(x, y)| format!("{},{}", fmt(*x), fmt(*y))).collect();
        let hue = ((tile.site.cusp.norm_n * 67 + (tile.site.weight * 240.0) as i64) % 360) as f64;
        let light = 0.55 + 0.35 * tile.site.weight;
        let _ = writeln!(
            out,
            r##"<polygon points="{}" fill="{}" stroke="#222" stroke-width="{}"/>"##,
            pts.join(" "),
            hsl_hex(hue, 0.55, light),
            fmt(sw)
        );
    }
    let _ = writeln!(out, "</g>\n</svg>");
    out
}

fn hsl_hex(h: f64, s: f64, l: f64) -> String {
    let c = (1.0 - (2.0 * l - 1.0).abs()) * s;
    let hp = h / 60.0;
    let x = c * (1.0 - (hp % 2.0 - 1.0).abs());
    let (r, g, b) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = l - c / 2.0;
    let q = |v: f64| ((v + m).clamp(0.0, 1.0) * 255.0).round() as u8;
    format!("#{:02x}{:02x}{:02x}", q(r), q(g), q(b))
}

/// Point of the unit circle for the rational `m/n`.
fn farey_point(m: f64, n: f64) -> (f64, f64) {
    let s = m * m + n * n;
    ((m * m - n * n) / s, 2.0 * m * n / s)
}

/// Conway topograph drawn dually inside the Farey disk.
pub fn svg_topograph(f: &QuadraticForm, depth: usize) -> String {
    let tree: Vec<TopoVertex> = explore(f, depth);
    let mut out = String::new();
    svg_open(&mut out, [-1.25, -1.25, 2.5, 2.5]);
    let _ = writeln!(out, r#"<g transform="scale(1,-1)">"#);
    let _ = writeln!(out, r##"<circle cx="0" cy="0" r="1" fill="none" stroke="#bbb" stroke-width="0.003"/>"##);
    let pos = |v: &TopoVertex| -> Option<(f64, f64)> {
        let mut sx = 0.0;
        let mut sy = 0.0;
        for r in &v.regions {
            let (m, n) = r.to_i64()?;
            let (x, y) = farey_point(m as f64, n as f64);
            sx += x;
            sy += y;
        }
        Some((sx / 3.0, sy / 3.0))
    };
    let mut labels = std::collections::BTreeMap::new();
    let mut level = vec![0usize; tree.len()];
    for (i, v) in tree.iter().enumerate() {
        level[i] = v.parent.map_or(0, |p| level[p] + 1);
        if level[i] <= 3 {
            for (r, val) in v.regions.iter().zip(v.values) {
                if let Some(k) = r.to_i64() {
                    labels.insert(k, val);
                }
            }
        }
        let (Some(p), Some(q)) = (pos(v), v.parent.and_then(|i| pos(&tree[i]))) else {
            continue;
        };
        let parent = &tree[v.parent.expect("checked")];
        // shared regions of the two superbases bound the edge
        let shared: Vec<i64> = v
            .regions
            .iter()
            .zip(v.values)
            .filter(|(r, _)| parent.regions.contains(r))
            .map(|(_, x)| x)
            .collect();
        let river = shared.len() == 2 && (shared[0] > 0) != (shared[1] > 0);
        let (color, w) = if river { ("#1f6fb5", 0.012) } else { ("#333", 0.004) };
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="{}"/>"#,
            fmt(p.0),
            fmt(p.1),
            fmt(q.0),
            fmt(q.1),
            fmt(w)
        );
    }
    let _ = writeln!(out, "</g>");
    for ((m, n), val) in &labels {
        let (x, y) = farey_point(*m as f64, *n as f64);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="0.05" text-anchor="middle" fill="{}">{val}</text>"#,
            fmt(1.1 * x),
            fmt(-1.1 * y + 0.015),
            inv_color(*val)
        );
    }
    let _ = writeln!(out, "</svg>");
    out
}

/// Degrees, for reporting.
pub fn degrees(rad: f64) -> f64 {
    rad * 180.0 / PI
}
