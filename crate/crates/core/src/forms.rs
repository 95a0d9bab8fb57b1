//! Integral binary quadratic forms over Z and binary hermitian forms over `A`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::hilbert_symbol;
use crate::lax::{Mat2A, Vec2};
use crate::rat::Rat;
use crate::ring::{gcd, module_norm, Disc, DualElem, RingElem};

/// `a m² + b2·mn + c n²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub a: i64,
    pub b2: i64,
    pub c: i64,
}

impl QuadraticForm {
    pub fn new(a: i64, b2: i64, c: i64) -> Self {
        QuadraticForm { a, b2, c }
    }

    pub fn eval(&self, m: i64, n: i64) -> i64 {
        self.a * m * m + self.b2 * m * n + self.c * n * n
    }

    pub fn disc(&self) -> i64 {
        self.b2 * self.b2 - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        num_integer::gcd(num_integer::gcd(self.a, self.b2), self.c) == 1
    }
}

pub fn qeval(f: &QuadraticForm, m: i64, n: i64) -> i64 {
    f.eval(m, n)
}

pub fn qdisc(f: &QuadraticForm) -> i64 {
    f.disc()
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.a, self.b2, self.c)
    }
}

/// `f(x, y) = a N(x) + c N(y) + tr(ν x ȳ)` with Gram matrix `(a ν; ν̄ c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HermitianForm {
    pub d: Disc,
    pub a: i64,
    pub c: i64,
    pub nu: DualElem,
}

#[derive(Serialize, Deserialize)]
struct NuJson {
    x: i64,
    y: i64,
}

/// JSON shape of a hermitian form; `d` may be supplied separately.
#[derive(Serialize, Deserialize)]
pub struct FormJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<i64>,
    pub a: i64,
    pub c: i64,
    nu: NuJson,
}

impl HermitianForm {
    /// Form with `ν = num/√D`, where `num = nx + ny·τ`.
    pub fn new(d: Disc, a: i64, c: i64, nx: i64, ny: i64) -> Self {
        HermitianForm {
            d,
            a,
            c,
            nu: DualElem::new(RingElem::new(nx, ny, d)),
        }
    }

    pub fn num(&self) -> RingElem {
        self.nu.num
    }

    pub fn eval(&self, x: &RingElem, y: &RingElem) -> i64 {
        let w = *x * y.conj();
        self.a * x.norm() + self.c * y.norm() + self.nu.trace_with(&w)
    }

    pub fn eval_vec(&self, v: &Vec2) -> i64 {
        self.eval(&v.x, &v.y)
    }

    /// `Δ = D(ac − N(ν)) = D·a·c + N(num)`.
    pub fn disc(&self) -> i64 {
        self.d.get() * self.a * self.c + self.nu.norm_times_absd()
    }

    pub fn is_indefinite(&self) -> bool {
        self.disc() > 0
    }

    pub fn is_positive_definite(&self) -> bool {
        self.disc() < 0 && self.a > 0
    }

    pub fn neg(&self) -> Self {
        HermitianForm {
            d: self.d,
            a: -self.a,
            c: -self.c,
            nu: DualElem::new(-self.nu.num),
        }
    }

    /// Content: the largest `k` with `f/k` integral.
    pub fn content(&self) -> i64 {
        let n = self.nu.num;
        // num/k ∈ A iff k | x and k | y.
        [self.a, self.c, n.x, n.y]
            .into_iter()
            .fold(0, num_integer::gcd)
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    pub fn to_json(&self) -> FormJson {
        FormJson {
            d: Some(self.d.get()),
            a: self.a,
            c: self.c,
            nu: NuJson {
                x: self.nu.num.x,
                y: self.nu.num.y,
            },
        }
    }

    pub fn json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_json()).expect("plain struct")
    }

    /// Parse the JSON shape; `d_hint` is used when the object has no `d`.
    pub fn from_json_str(s: &str, d_hint: Option<i64>) -> Result<Self> {
        let j: FormJson =
            serde_json::from_str(s).map_err(|e| Error::Invalid(format!("form JSON: {e}")))?;
        let d = match (j.d, d_hint) {
            (Some(a), Some(b)) if a != b => return Err(Error::DiscMismatch(a, b)),
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => return Err(Error::Invalid("form JSON needs \"d\"".into())),
        };
        Ok(HermitianForm::new(Disc::new(d)?, j.a, j.c, j.nu.x, j.nu.y))
    }
}

impl Serialize for HermitianForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianForm {
    fn deserialize<De: serde::Deserializer<'de>>(de: De) -> std::result::Result<Self, De::Error> {
        let j = FormJson::deserialize(de)?;
        let d = j
            .d
            .ok_or_else(|| serde::de::Error::custom("missing field `d`"))?;
        let d = Disc::new(d).map_err(serde::de::Error::custom)?;
        Ok(HermitianForm::new(d, j.a, j.c, j.nu.x, j.nu.y))
    }
}

impl fmt::Display for HermitianForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[D={}; a={}, c={}, ν=({})/√D]",
            self.d, self.a, self.c, self.nu.num
        )
    }
}

pub fn heval(f: &HermitianForm, x: &RingElem, y: &RingElem) -> i64 {
    f.eval(x, y)
}

pub fn hdisc(f: &HermitianForm) -> i64 {
    f.disc()
}

/// The pullback `f∘g`, i.e. `(f∘g)(v) = f(g·v)`.
pub fn transform(f: &HermitianForm, g: &Mat2A) -> Result<HermitianForm> {
    if g.disc() != f.d {
        return Err(Error::DiscMismatch(f.d.get(), g.disc().get()));
    }
    if !g.is_invertible() {
        return Err(Error::NotInvertible);
    }
    Ok(transform_any(f, g))
}

/// Pullback for any matrix; `Δ` scales by `N(det g)`.
pub fn transform_any(f: &HermitianForm, g: &Mat2A) -> HermitianForm {
    let d = f.d;
    let (p, q, r, s) = (g.p, g.q, g.r, g.s);
    let a2 = f.eval(&p, &r);
    let c2 = f.eval(&q, &s);
    let num = f.nu.num;
    let ia = RingElem::int(f.a, d);
    let ic = RingElem::int(f.c, d);
    let n2 = RingElem::sqrt_d(d) * (ia * p * q.conj() + ic * r * s.conj()) + num * p * s.conj()
        - num.conj() * r * q.conj();
    HermitianForm {
        d,
        a: a2,
        c: c2,
        nu: DualElem::new(n2),
    }
}

/// A point `a/b` of `P¹(k)` with its generator pair and `N(I)`, `I = (a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cusp {
    pub a: RingElem,
    pub b: RingElem,
    pub norm_n: i64,
}

impl Cusp {
    /// Normalized cusp: primitive when `D` is Euclidean, then unit-normalized.
    pub fn new(a: RingElem, b: RingElem) -> Result<Self> {
        if a.d != b.d {
            return Err(Error::DiscMismatch(a.d.get(), b.d.get()));
        }
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroPair);
        }
        let mut v = Vec2::new(a, b);
        if a.d.is_euclidean() {
            let g = gcd(&a, &b)?;
            v = v.div_exact(&g).expect("gcd divides both");
        }
        let v = v.lax();
        Ok(Cusp {
            a: v.x,
            b: v.y,
            norm_n: module_norm(&v.x, &v.y)?,
        })
    }

    pub fn from_vec(v: &Vec2) -> Result<Self> {
        Cusp::new(v.x, v.y)
    }

    pub fn infinity(d: Disc) -> Self {
        Cusp {
            a: RingElem::one(d),
            b: RingElem::zero(d),
            norm_n: 1,
        }
    }

    pub fn zero(d: Disc) -> Self {
        Cusp {
            a: RingElem::zero(d),
            b: RingElem::one(d),
            norm_n: 1,
        }
    }

    /// An integer `n` as the cusp `n/1`.
    pub fn integer(e: RingElem) -> Self {
        Cusp {
            a: e,
            b: RingElem::one(e.d),
            norm_n: 1,
        }
    }

    pub fn is_infinity(&self) -> bool {
        self.b.is_zero()
    }

    pub fn disc(&self) -> Disc {
        self.a.d
    }

    pub fn vec(&self) -> Vec2 {
        Vec2::new(self.a, self.b)
    }

    /// Exact key of `a/b` as `(a·b̄, N(b))` reduced; `∞` maps to `(1, 0, 0)`.
    pub fn point_key(&self) -> (i64, i64, i64) {
        if self.b.is_zero() {
            return (1, 0, 0);
        }
        let n = self.b.norm();
        let p = self.a * self.b.conj();
        let g = num_integer::gcd(num_integer::gcd(p.x, p.y), n);
        (p.x / g, p.y / g, n / g)
    }
}

/// `F(α) = f(a, b)/N(I)`.
pub fn cusp_value(f: &HermitianForm, alpha: &Cusp) -> Rat {
    Rat::new(
        f.eval(&alpha.a, &alpha.b) as i128,
        alpha.norm_n as i128,
    )
}

/// Hermitian form with rational Gram data, `ν = (n1 + n2 τ)/√D`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalForm {
    pub d: i64,
    #[serde(with = "crate::rat")]
    pub a: Rat,
    #[serde(with = "crate::rat")]
    pub c: Rat,
    #[serde(with = "crate::rat")]
    pub n1: Rat,
    #[serde(with = "crate::rat")]
    pub n2: Rat,
}

impl RationalForm {
    pub fn to_integral(&self) -> Result<HermitianForm> {
        let all = [self.a, self.c, self.n1, self.n2];
        if all.iter().any(|r| !r.is_integer()) {
            return Err(Error::NotIntegral);
        }
        let i = |r: &Rat| i64::try_from(r.to_integer()).map_err(|_| Error::NotIntegral);
        Ok(HermitianForm::new(
            Disc::new(self.d)?,
            i(&self.a)?,
            i(&self.c)?,
            i(&self.n1)?,
            i(&self.n2)?,
        ))
    }

    pub fn eval(&self, x: &RingElem, y: &RingElem) -> Rat {
        let w = *x * y.conj();
        let r = |v: i64| Rat::from_integer(v as i128);
        self.a * r(x.norm())
            + self.c * r(y.norm())
            + self.n1 * r(w.y)
            + self.n2 * r(w.x + self.d * w.y)
    }
}

/// Solve a square system over Q by Gauss–Jordan elimination.
pub(crate) fn solve_rat<const N: usize>(
    mut m: [[Rat; N]; N],
    mut rhs: [Rat; N],
) -> Option<[Rat; N]> {
    for col in 0..N {
        let piv = (col..N).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        let inv = Rat::one() / m[col][col];
        for k in 0..N {
            m[col][k] *= inv;
        }
        rhs[col] *= inv;
        for r in 0..N {
            if r != col && !m[r][col].is_zero() {
                let t = m[r][col];
                for k in 0..N {
                    let v = m[col][k];
                    m[r][k] -= t * v;
                }
                let v = rhs[col];
                rhs[r] -= t * v;
            }
        }
    }
    Some(rhs)
}

/// The unique hermitian form with `F(αᵢ) = valsᵢ` at four cusps.
pub fn reconstruct_form(pts: &[Cusp; 4], vals: &[Rat; 4]) -> Result<RationalForm> {
    let d = pts[0].disc();
    if pts.iter().any(|p| p.disc() != d) {
        return Err(Error::DiscMismatch(d.get(), pts[1].disc().get()));
    }
    let r = |v: i64| Rat::from_integer(v as i128);
    let mut m = [[Rat::zero(); 4]; 4];
    let mut rhs = [Rat::zero(); 4];
    for (i, (p, v)) in pts.iter().zip(vals).enumerate() {
        let w = p.a * p.b.conj();
        m[i] = [r(p.a.norm()), r(p.b.norm()), r(w.y), r(w.x + d.get() * w.y)];
        rhs[i] = *v * r(p.norm_n);
    }
    let s = solve_rat(m, rhs).ok_or(Error::Singular("cusps lie on a common circle or line"))?;
    Ok(RationalForm {
        d: d.get(),
        a: s[0],
        c: s[1],
        n1: s[2],
        n2: s[3],
    })
}

/// Isotropy via Hilbert symbols: `f` represents 0 nontrivially iff
/// `(D, Δ)_v = 1` at every place `v`.
pub fn is_anisotropic(f: &HermitianForm) -> Result<bool> {
    disc_is_anisotropic(f.d, f.disc())
}

/// Anisotropy depends only on `(D, Δ)`.
pub fn disc_is_anisotropic(d: Disc, delta: i64) -> Result<bool> {
    if delta == 0 {
        return Err(Error::Degenerate);
    }
    if delta < 0 {
        return Ok(true);
    }
    let dd = d.get();
    let mut primes = prime_factors(2 * dd.abs() * delta.abs());
    primes.dedup();
    Ok(primes.into_iter().any(|p| hilbert_symbol(dd, delta, p) == -1))
}

pub fn is_indefinite(f: &HermitianForm) -> Result<bool> {
    match f.disc() {
        0 => Err(Error::Degenerate),
        x => Ok(x > 0),
    }
}

pub(crate) fn prime_factors(mut n: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
