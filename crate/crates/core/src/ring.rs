//! Arithmetic in the maximal order `A = Z[τ]` of an imaginary quadratic
//! field, `τ = (D + √D)/2`.
//!
//! Elements are stored in τ-coordinates `x + yτ`, so every structure
//! constant is an integer: `τ + τ̄ = D` and `ττ̄ = (D² − D)/4`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A negative fundamental discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Disc(i64);

fn squarefree(mut n: i64) -> bool {
    n = n.abs();
    let mut p = 2;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        if n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

impl Disc {
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 {
            return Err(Error::NotFundamental(d));
        }
        let ok = if d.rem_euclid(4) == 1 {
            squarefree(d)
        } else if d % 4 == 0 {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        } else {
            false
        };
        if ok {
            Ok(Disc(d))
        } else {
            Err(Error::NotFundamental(d))
        }
    }

    pub fn get(self) -> i64 {
        self.0
    }

    pub fn abs(self) -> i64 {
        -self.0
    }

    /// `N(τ) = (D² − D)/4`.
    pub fn norm_tau(self) -> i64 {
        (self.0 * self.0 - self.0) / 4
    }

    pub fn is_euclidean(self) -> bool {
        matches!(self.0, -3 | -4 | -7 | -8 | -11)
    }

    pub fn require_euclidean(self) -> Result<()> {
        if self.is_euclidean() {
            Ok(())
        } else {
            Err(Error::UnsupportedDisc(self.0, "-3, -4, -7, -8, -11"))
        }
    }
}

impl TryFrom<i64> for Disc {
    type Error = Error;
    fn try_from(d: i64) -> Result<Self> {
        Disc::new(d)
    }
}

impl From<Disc> for i64 {
    fn from(d: Disc) -> i64 {
        d.0
    }
}

impl fmt::Display for Disc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element `x + yτ` of `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingElem {
    pub x: i64,
    pub y: i64,
    pub d: Disc,
}

impl RingElem {
    pub fn new(x: i64, y: i64, d: Disc) -> Self {
        RingElem { x, y, d }
    }

    pub fn int(n: i64, d: Disc) -> Self {
        RingElem { x: n, y: 0, d }
    }

    pub fn zero(d: Disc) -> Self {
        Self::int(0, d)
    }

    pub fn one(d: Disc) -> Self {
        Self::int(1, d)
    }

    pub fn tau(d: Disc) -> Self {
        RingElem { x: 0, y: 1, d }
    }

    /// `√D = 2τ − D`.
    pub fn sqrt_d(d: Disc) -> Self {
        RingElem { x: -d.0, y: 2, d }
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0 && self.y == 0
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.d == o.d {
            Ok(())
        } else {
            Err(Error::DiscMismatch(self.d.0, o.d.0))
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(RingElem::new(self.x + o.x, self.y + o.y, self.d))
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(RingElem::new(self.x - o.x, self.y - o.y, self.d))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let d = self.d.0;
        let x = self.x * o.x - self.y * o.y * self.d.norm_tau();
        let y = self.x * o.y + self.y * o.x + d * self.y * o.y;
        Ok(RingElem::new(x, y, self.d))
    }

    pub fn scale(&self, k: i64) -> Self {
        RingElem::new(self.x * k, self.y * k, self.d)
    }

    pub fn conj(&self) -> Self {
        RingElem::new(self.x + self.d.0 * self.y, -self.y, self.d)
    }

    pub fn norm(&self) -> i64 {
        let (x, y) = (self.x as i128, self.y as i128);
        let n = x * x + self.d.0 as i128 * x * y + self.d.norm_tau() as i128 * y * y;
        i64::try_from(n).expect("norm overflow")
    }

    pub fn trace(&self) -> i64 {
        2 * self.x + self.d.0 * self.y
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == 1
    }

    /// Exact quotient `self / o`, or `None` when it is not in `A`.
    pub fn div_exact(&self, o: &Self) -> Option<Self> {
        if o.is_zero() {
            return None;
        }
        let n = o.norm();
        let p = *self * o.conj();
        if p.x % n == 0 && p.y % n == 0 {
            Some(RingElem::new(p.x / n, p.y / n, self.d))
        } else {
            None
        }
    }

    pub fn embed(&self) -> Complex64 {
        let d = self.d.0 as f64;
        let tau = Complex64::new(d / 2.0, (-d).sqrt() / 2.0);
        Complex64::new(self.x as f64, 0.0) + tau * self.y as f64
    }

    /// The associate chosen by [`canonical_associate`], and the unit that produces it.
    pub fn normalize(&self) -> (Self, Self) {
        canonical_associate(self)
    }
}

impl Add for RingElem {
    type Output = RingElem;
    fn add(self, o: Self) -> Self {
        self.try_add(&o).expect("discriminant mismatch")
    }
}

impl Sub for RingElem {
    type Output = RingElem;
    fn sub(self, o: Self) -> Self {
        self.try_sub(&o).expect("discriminant mismatch")
    }
}

impl Mul for RingElem {
    type Output = RingElem;
    fn mul(self, o: Self) -> Self {
        self.try_mul(&o).expect("discriminant mismatch")
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> Self {
        RingElem::new(-self.x, -self.y, self.d)
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.x, self.y) {
            (x, 0) => write!(f, "{x}"),
            (0, 1) => write!(f, "τ"),
            (0, -1) => write!(f, "-τ"),
            (0, y) => write!(f, "{y}τ"),
            (x, 1) => write!(f, "{x}+τ"),
            (x, -1) => write!(f, "{x}-τ"),
            (x, y) if y < 0 => write!(f, "{x}{y}τ"),
            (x, y) => write!(f, "{x}+{y}τ"),
        }
    }
}

/// The roots of unity of `A`: `{±1, ±ρ, ±ρ²}` with `ρ = 2 + τ` for `D = −3`,
/// `{±1, ±i}` with `i = 2 + τ` for `D = −4`, and `{±1}` otherwise.
pub fn units(d: Disc) -> Vec<RingElem> {
    let one = RingElem::one(d);
    let order = match d.0 {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    if order == 2 {
        return vec![one, -one];
    }
    let g = RingElem::new(2, 1, d);
    let mut out = Vec::with_capacity(order);
    let mut cur = one;
    for _ in 0..order {
        out.push(cur);
        cur = cur * g;
    }
    out
}

/// Deterministic representative of the associate class of `e`: largest
/// trace (always ≥ 0), ties broken by lexicographically smallest `(x, y)`.
/// Returns `(u·e, u)`.
pub fn canonical_associate(e: &RingElem) -> (RingElem, RingElem) {
    let mut best: Option<(RingElem, RingElem)> = None;
    for u in units(e.d) {
        let c = u * *e;
        let better = match &best {
            None => true,
            Some((b, _)) => match c.trace().cmp(&b.trace()) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => (c.x, c.y) < (b.x, b.y),
            },
        };
        if better {
            best = Some((c, u));
        }
    }
    best.expect("units are never empty")
}

fn floor_div(a: i128, b: i128) -> i128 {
    Integer::div_floor(&a, &b)
}

/// Division with remainder `a = q·b + r`, `N(r) < N(b)`, with `q` the
/// lattice point nearest to `a/b` (ties: smallest `x`, then `y`).
pub fn euclid_div(a: &RingElem, b: &RingElem) -> Result<(RingElem, RingElem)> {
    a.check(b)?;
    a.d.require_euclidean()?;
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let d = a.d;
    let n = b.norm() as i128;
    let p = *a * b.conj();
    let (px, py) = (p.x as i128, p.y as i128);
    let dd = d.0 as i128;
    // a/b = (px + py τ)/n; candidate y-coordinates around py/n.
    let y0 = floor_div(py, n);
    let mut best: Option<(i64, RingElem)> = None;
    for y in (y0 - 1)..=(y0 + 2) {
        // Real part of a/b − yτ is (2px + (py − y n) D) / (2n).
        let num = 2 * px + (py - y * n) * dd;
        let x0 = floor_div(num, 2 * n);
        for x in (x0 - 1)..=(x0 + 2) {
            let q = RingElem::new(x as i64, y as i64, d);
            let r = *a - q * *b;
            let nr = r.norm();
            let better = match &best {
                None => true,
                Some((bn, bq)) => nr < *bn || (nr == *bn && (q.x, q.y) < (bq.x, bq.y)),
            };
            if better {
                best = Some((nr, q));
            }
        }
    }
    let (nr, q) = best.expect("non-empty candidate set");
    let r = *a - q * *b;
    debug_assert!((nr as i128) < n);
    Ok((q, r))
}

/// Greatest common divisor, normalized by [`canonical_associate`].
pub fn gcd(a: &RingElem, b: &RingElem) -> Result<RingElem> {
    a.check(b)?;
    a.d.require_euclidean()?;
    let (mut x, mut y) = (*a, *b);
    while !y.is_zero() {
        let (_, r) = euclid_div(&x, &y)?;
        x = y;
        y = r;
    }
    if x.is_zero() {
        return Ok(x);
    }
    Ok(canonical_associate(&x).0)
}

/// Hermite normal form of the Z-span of integer row vectors in Z².
/// Returns the upper-triangular basis `[(h11, h12), (0, h22)]` with
/// positive diagonal, or `None` if the span has rank < 2.
pub fn hnf2(rows: &[(i128, i128)]) -> Option<[(i128, i128); 2]> {
    let mut rows: Vec<(i128, i128)> = rows.to_vec();
    // Column 0: gcd-reduce until a single row has a nonzero entry.
    loop {
        let piv = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.0 != 0)
            .min_by_key(|(_, r)| r.0.abs())
            .map(|(i, _)| i);
        let Some(pi) = piv else { return None };
        let p = rows[pi];
        let mut changed = false;
        for (i, r) in rows.iter_mut().enumerate() {
            if i != pi && r.0 != 0 {
                let k = Integer::div_floor(&r.0, &p.0);
                r.0 -= k * p.0;
                r.1 -= k * p.1;
                changed = true;
            }
        }
        if !changed {
            let mut top = rows.remove(pi);
            if top.0 < 0 {
                top = (-top.0, -top.1);
            }
            let h22 = rows.iter().fold(0i128, |g, r| g.gcd(&r.1));
            if h22 == 0 {
                return None;
            }
            top.1 = top.1.rem_euclid(h22);
            return Some([top, (0, h22)]);
        }
    }
}

/// Index `[A : I]` of the ideal `I = (a, b)`, from the Hermite normal form
/// of the Z-module spanned by `a, τa, b, τb`.
pub fn module_norm(a: &RingElem, b: &RingElem) -> Result<i64> {
    a.check(b)?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroPair);
    }
    let tau = RingElem::tau(a.d);
    let gens = [*a, tau * *a, *b, tau * *b];
    let rows: Vec<(i128, i128)> = gens.iter().map(|g| (g.x as i128, g.y as i128)).collect();
    let h = hnf2(&rows).expect("nonzero ideal has rank 2");
    Ok((h[0].0 * h[1].1) as i64)
}

/// An element `ν = num/√D` of the dual lattice `A*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DualElem {
    pub num: RingElem,
}

impl DualElem {
    pub fn new(num: RingElem) -> Self {
        DualElem { num }
    }

    /// `tr(ν·γ)`, an integer for every `γ ∈ A`.
    pub fn trace_with(&self, g: &RingElem) -> i64 {
        (self.num * *g).y
    }

    /// `|D|·N(ν) = N(num)`.
    pub fn norm_times_absd(&self) -> i64 {
        self.num.norm()
    }

    pub fn embed(&self) -> Complex64 {
        let sd = Complex64::new(0.0, (self.num.d.abs() as f64).sqrt());
        self.num.embed() / sd
    }

    pub fn conj(&self) -> Self {
        // conj(num/√D) = conj(num)/(−√D)
        DualElem::new(-self.num.conj())
    }
}
