//! Vectors and 2×2 matrices over `A`, with lax (unit-normalized) keys.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{canonical_associate, module_norm, Disc, RingElem};

/// A column vector `(x, y)` in `A²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: RingElem,
    pub y: RingElem,
}

impl Vec2 {
    pub fn new(x: RingElem, y: RingElem) -> Self {
        Vec2 { x, y }
    }

    pub fn from_ints(d: Disc, x: (i64, i64), y: (i64, i64)) -> Self {
        Vec2::new(RingElem::new(x.0, x.1, d), RingElem::new(y.0, y.1, d))
    }

    pub fn e1(d: Disc) -> Self {
        Vec2::new(RingElem::one(d), RingElem::zero(d))
    }

    pub fn e2(d: Disc) -> Self {
        Vec2::new(RingElem::zero(d), RingElem::one(d))
    }

    pub fn disc(&self) -> Disc {
        self.x.d
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn add(&self, o: &Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }

    pub fn sub(&self, o: &Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }

    pub fn scale(&self, k: &RingElem) -> Vec2 {
        Vec2::new(*k * self.x, *k * self.y)
    }

    /// Componentwise exact division, `None` if not integral.
    pub fn div_exact(&self, k: &RingElem) -> Option<Vec2> {
        Some(Vec2::new(self.x.div_exact(k)?, self.y.div_exact(k)?))
    }

    /// `det(self, o) = x·o.y − y·o.x`.
    pub fn det(&self, o: &Vec2) -> RingElem {
        self.x * o.y - self.y * o.x
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_zero() && module_norm(&self.x, &self.y) == Ok(1)
    }

    /// The unit multiple whose `y` (or `x` when `y = 0`) is the canonical associate.
    pub fn lax(&self) -> Vec2 {
        let lead = if self.y.is_zero() { self.x } else { self.y };
        if lead.is_zero() {
            return *self;
        }
        let (_, u) = canonical_associate(&lead);
        self.scale(&u)
    }

    /// Hashable key of the lax class `±u·v`.
    pub fn key(&self) -> LaxKey {
        let l = self.lax();
        LaxKey([l.x.x, l.x.y, l.y.x, l.y.y])
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// τ-coordinates of a unit-normalized vector; orders lax vectors deterministically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LaxKey(pub [i64; 4]);

/// A 2×2 matrix `(p q; r s)` over `A`, acting on column vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2A {
    pub p: RingElem,
    pub q: RingElem,
    pub r: RingElem,
    pub s: RingElem,
}

impl Mat2A {
    pub fn new(p: RingElem, q: RingElem, r: RingElem, s: RingElem) -> Self {
        Mat2A { p, q, r, s }
    }

    /// Matrix with the given columns.
    pub fn from_cols(c0: &Vec2, c1: &Vec2) -> Self {
        Mat2A::new(c0.x, c1.x, c0.y, c1.y)
    }

    pub fn identity(d: Disc) -> Self {
        let (o, z) = (RingElem::one(d), RingElem::zero(d));
        Mat2A::new(o, z, z, o)
    }

    pub fn disc(&self) -> Disc {
        self.p.d
    }

    pub fn col0(&self) -> Vec2 {
        Vec2::new(self.p, self.r)
    }

    pub fn col1(&self) -> Vec2 {
        Vec2::new(self.q, self.s)
    }

    pub fn det(&self) -> RingElem {
        self.p * self.s - self.q * self.r
    }

    pub fn is_invertible(&self) -> bool {
        self.det().is_unit()
    }

    pub fn mul(&self, o: &Mat2A) -> Mat2A {
        Mat2A::new(
            self.p * o.p + self.q * o.r,
            self.p * o.q + self.q * o.s,
            self.r * o.p + self.s * o.r,
            self.r * o.q + self.s * o.s,
        )
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        Vec2::new(self.p * v.x + self.q * v.y, self.r * v.x + self.s * v.y)
    }

    pub fn scale(&self, k: &RingElem) -> Mat2A {
        Mat2A::new(*k * self.p, *k * self.q, *k * self.r, *k * self.s)
    }

    /// Inverse in `GL₂(A)`.
    pub fn inverse(&self) -> Result<Mat2A> {
        let det = self.det();
        if !det.is_unit() {
            return Err(Error::NotInvertible);
        }
        let di = det.conj();
        Ok(Mat2A::new(self.s, -self.q, -self.r, self.p).scale(&di))
    }

    /// Representative of the class modulo unit scalars.
    pub fn projective_key(&self) -> [i64; 8] {
        let lead = [self.p, self.q, self.r, self.s]
            .into_iter()
            .find(|e| !e.is_zero())
            .expect("nonzero matrix");
        let (_, u) = canonical_associate(&lead);
        let m = self.scale(&u);
        [m.p.x, m.p.y, m.q.x, m.q.y, m.r.x, m.r.y, m.s.x, m.s.y]
    }

    pub fn is_scalar(&self) -> bool {
        self.q.is_zero() && self.r.is_zero() && self.p == self.s
    }
}

impl fmt::Display for Mat2A {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.p, self.q, self.r, self.s)
    }
}
