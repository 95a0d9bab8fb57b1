//! Convex polygons by half-plane clipping, over `Rat` or `f64`.

use num_traits::{Num, Signed};

use crate::rat::Rat;

/// Scalars usable for clipping.
pub trait Scalar: Num + Signed + PartialOrd + Copy {}
impl Scalar for Rat {}
impl Scalar for f64 {}

/// `a·x + b·y ≤ c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlane<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Scalar> HalfPlane<T> {
    pub fn new(a: T, b: T, c: T) -> Self {
        HalfPlane { a, b, c }
    }

    fn excess(&self, p: &(T, T)) -> T {
        self.a * p.0 + self.b * p.1 - self.c
    }
}

pub type Polygon<T> = Vec<(T, T)>;

pub fn rect<T: Scalar>(x0: T, y0: T, x1: T, y1: T) -> Polygon<T> {
    vec![(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
}

/// Sutherland–Hodgman step; consecutive duplicates are dropped.
pub fn clip<T: Scalar>(poly: &[(T, T)], h: &HalfPlane<T>) -> Polygon<T> {
    let n = poly.len();
    let mut out: Polygon<T> = Vec::with_capacity(n + 1);
    let push = |p: (T, T), out: &mut Polygon<T>| {
        if out.last() != Some(&p) {
            out.push(p);
        }
    };
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let (ep, eq) = (h.excess(&p), h.excess(&q));
        let zero = T::zero();
        if ep <= zero {
            push(p, &mut out);
        }
        if (ep < zero && eq > zero) || (ep > zero && eq < zero) {
            let t = ep / (ep - eq);
            push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)), &mut out);
        }
    }
    if out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    if out.len() < 3 {
        out.clear();
    }
    out
}

pub fn clip_all<T: Scalar>(poly: Polygon<T>, hs: &[HalfPlane<T>]) -> Polygon<T> {
    hs.iter().fold(poly, |p, h| if p.is_empty() { p } else { clip(&p, h) })
}

/// Signed area (positive for counterclockwise order).
pub fn signed_area<T: Scalar>(poly: &[(T, T)]) -> T {
    let n = poly.len();
    let mut s = T::zero();
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        s = s + p.0 * q.1 - p.1 * q.0;
    }
    s / (T::one() + T::one())
}

pub fn area<T: Scalar>(poly: &[(T, T)]) -> T {
    signed_area(poly).abs()
}

/// Edges of a counterclockwise convex polygon as half-planes.
pub fn half_planes<T: Scalar>(poly: &[(T, T)]) -> Vec<HalfPlane<T>> {
    let n = poly.len();
    let orient = if signed_area(poly) >= T::zero() { T::one() } else { -T::one() };
    (0..n)
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % n]);
            // left of p→q: (q−p) × (z−p) ≥ 0
            let a = (q.1 - p.1) * orient;
            let b = (p.0 - q.0) * orient;
            HalfPlane::new(a, b, a * p.0 + b * p.1)
        })
        .collect()
}

/// Intersection of two convex polygons.
pub fn intersect<T: Scalar>(p: &[(T, T)], q: &[(T, T)]) -> Polygon<T> {
    clip_all(p.to_vec(), &half_planes(q))
}

/// Drops collinear vertices and rotates to start at the least vertex,
/// counterclockwise; exact polygons compare equal iff they are the same set.
pub fn normalize(poly: &[(Rat, Rat)]) -> Polygon<Rat> {
    let mut p: Polygon<Rat> = poly.to_vec();
    if signed_area(&p) < Rat::from_integer(0) {
        p.reverse();
    }
    let mut changed = true;
    while changed && p.len() >= 3 {
        changed = false;
        let n = p.len();
        for i in 0..n {
            let (a, b, c) = (p[(i + n - 1) % n], p[i], p[(i + 1) % n]);
            let cross = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
            if cross == Rat::from_integer(0) {
                p.remove(i);
                changed = true;
                break;
            }
        }
    }
    if let Some(k) = (0..p.len()).min_by(|&i, &j| p[i].cmp(&p[j])) {
        p.rotate_left(k);
    }
    p
}

/// Merges vertices closer than `eps` and drops vertices within `eps` of the
/// line through their neighbours; float clipping leaves both behind where
/// several boundary lines pass through one point.
pub fn tidy(poly: Polygon<f64>, eps: f64) -> Polygon<f64> {
    let mut p = poly;
    let mut changed = true;
    while changed && p.len() >= 3 {
        changed = false;
        let n = p.len();
        for i in 0..n {
            let (a, b, c) = (p[(i + n - 1) % n], p[i], p[(i + 1) % n]);
            let ac = (c.0 - a.0).hypot(c.1 - a.1);
            let cross = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
            let near = (b.0 - a.0).hypot(b.1 - a.1) < eps || (c.0 - b.0).hypot(c.1 - b.1) < eps;
            if near || cross.abs() < eps * ac {
                p.remove(i);
                changed = true;
                break;
            }
        }
    }
    if p.len() < 3 {
        p.clear();
    }
    p
}
