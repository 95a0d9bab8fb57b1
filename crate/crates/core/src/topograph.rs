//! Conway's topograph for integral binary quadratic forms.
//!
//! A superbasis is stored as a signed triple `(u, v, w)` with `u + v + w = 0`;
//! the regions at that vertex are the lax classes `±u, ±v, ±w`.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::QuadraticForm;

pub const DEFAULT_STEP_LIMIT: usize = 1_000_000;

/// A primitive vector of Z² up to sign: `m > 0`, or `m = 0` and `n = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaxVec {
    pub m: BigInt,
    pub n: BigInt,
}

impl LaxVec {
    pub fn new(m: BigInt, n: BigInt) -> Self {
        if m.is_negative() || (m.is_zero() && n.is_negative()) {
            LaxVec { m: -m, n: -n }
        } else {
            LaxVec { m, n }
        }
    }

    pub fn from_i64(m: i64, n: i64) -> Self {
        LaxVec::new(m.into(), n.into())
    }

    pub fn to_i64(&self) -> Option<(i64, i64)> {
        Some((self.m.to_i64()?, self.n.to_i64()?))
    }
}

impl Serialize for LaxVec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [big_json(&self.m), big_json(&self.n)].serialize(s)
    }
}

/// Integer as a JSON number when it fits in `i64`, else as a decimal string.
pub fn big_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => v.into(),
        None => x.to_string().into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZVec {
    pub m: BigInt,
    pub n: BigInt,
}

impl ZVec {
    pub fn new(m: impl Into<BigInt>, n: impl Into<BigInt>) -> Self {
        ZVec {
            m: m.into(),
            n: n.into(),
        }
    }

    fn add(&self, o: &ZVec) -> ZVec {
        ZVec::new(&self.m + &o.m, &self.n + &o.n)
    }

    fn sub(&self, o: &ZVec) -> ZVec {
        ZVec::new(&self.m - &o.m, &self.n - &o.n)
    }

    fn neg(&self) -> ZVec {
        ZVec::new(-&self.m, -&self.n)
    }

    pub fn lax(&self) -> LaxVec {
        LaxVec::new(self.m.clone(), self.n.clone())
    }

    fn norm2(&self) -> BigInt {
        &self.m * &self.m + &self.n * &self.n
    }
}

pub fn eval_big(f: &QuadraticForm, v: &ZVec) -> BigInt {
    BigInt::from(f.a) * &v.m * &v.m + BigInt::from(f.b2) * &v.m * &v.n + BigInt::from(f.c) * &v.n * &v.n
}

fn eval_i64(f: &QuadraticForm, v: &ZVec) -> i64 {
    eval_big(f, v).to_i64().expect("form value exceeds i64")
}

/// Signed superbasis `u + v + w = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperBasis {
    pub v: [ZVec; 3],
}

impl SuperBasis {
    pub fn standard() -> Self {
        SuperBasis {
            v: [ZVec::new(1, 0), ZVec::new(0, 1), ZVec::new(-1, -1)],
        }
    }

    pub fn lax(&self) -> [LaxVec; 3] {
        [self.v[0].lax(), self.v[1].lax(), self.v[2].lax()]
    }
}

pub fn vertex_values(f: &QuadraticForm, sb: &SuperBasis) -> (i64, i64, i64) {
    (
        eval_i64(f, &sb.v[0]),
        eval_i64(f, &sb.v[1]),
        eval_i64(f, &sb.v[2]),
    )
}

/// `a² + b² + c² − 2ab − 2bc − 2ca`, the discriminant read off a vertex.
pub fn vertex_disc(a: i64, b: i64, c: i64) -> i64 {
    a * a + b * b + c * c - 2 * a * b - 2 * b * c - 2 * a * c
}

/// Cross the edge opposite region `k`; the replaced value becomes
/// `2f(u) + 2f(v) − f(old)` for the two kept regions `u, v`.
pub fn edge_step(sb: &SuperBasis, k: usize) -> SuperBasis {
    let (i, j) = match k {
        0 => (1, 2),
        1 => (2, 0),
        _ => (0, 1),
    };
    let mut v = sb.v.clone();
    v[k] = sb.v[j].sub(&sb.v[i]);
    v[j] = sb.v[j].neg();
    SuperBasis { v }
}

pub fn edge_step_value(vals: (i64, i64, i64), k: usize) -> i64 {
    let a = [vals.0, vals.1, vals.2];
    let (i, j) = ((k + 1) % 3, (k + 2) % 3);
    2 * a[i] + 2 * a[j] - a[k]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Turn {
    /// The positive region is replaced by `n + p`.
    Left,
    /// The negative region is replaced by `n + p`.
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RiverEdge {
    pub neg: i64,
    pub pos: i64,
    pub turn: Turn,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiverResult {
    pub disc: i64,
    pub period: Vec<RiverEdge>,
    pub automorph: [[BigInt; 2]; 2],
    pub min_abs: i64,
    pub min_vec: LaxVec,
    pub min_value: i64,
    pub descent_steps: usize,
}

impl RiverResult {
    pub fn to_json(&self) -> serde_json::Value {
        let a = &self.automorph;
        serde_json::json!({
            "disc": self.disc,
            "period": self.period,
            "period_length": self.period.len(),
            "automorph": [[big_json(&a[0][0]), big_json(&a[0][1])], [big_json(&a[1][0]), big_json(&a[1][1])]],
            "min_abs": self.min_abs,
            "min_value": self.min_value,
            "min_vec": self.min_vec,
            "descent_steps": self.descent_steps,
        })
    }
}

fn is_square(n: i64) -> bool {
    n >= 0 && {
        let r = n.sqrt();
        r * r == n
    }
}

/// Walk from the standard superbasis down to a vertex with mixed signs.
fn descend(f: &QuadraticForm, limit: usize) -> Result<(SuperBasis, [i64; 3], usize)> {
    let mut sb = SuperBasis::standard();
    let (a, b, c) = vertex_values(f, &sb);
    let mut vals = [a, b, c];
    let mut steps = 0;
    while vals.iter().all(|&x| x > 0) || vals.iter().all(|&x| x < 0) {
        if steps >= limit {
            return Err(Error::StepLimit(limit));
        }
        let lax = sb.lax();
        let k = (0..3)
            .max_by(|&i, &j| {
                vals[i]
                    .abs()
                    .cmp(&vals[j].abs())
                    .then_with(|| lax[j].cmp(&lax[i]))
            })
            .expect("three regions");
        let nv = edge_step_value((vals[0], vals[1], vals[2]), k);
        sb = edge_step(&sb, k);
        vals[k] = nv;
        steps += 1;
    }
    Ok((sb, vals, steps))
}

struct Witness {
    key: (i64, BigInt, bool, LaxVec),
    value: i64,
}

fn consider(best: &mut Option<Witness>, v: &ZVec, value: i64) {
    let lax = v.lax();
    let key = (value.abs(), v.norm2(), value < 0, lax);
    if best.as_ref().is_none_or(|b| key < b.key) {
        *best = Some(Witness { key, value });
    }
}

/// Trace the river of an indefinite anisotropic form through one period.
pub fn trace_river(f: &QuadraticForm) -> Result<RiverResult> {
    trace_river_limit(f, DEFAULT_STEP_LIMIT)
}

pub fn trace_river_limit(f: &QuadraticForm, limit: usize) -> Result<RiverResult> {
    let disc = f.disc();
    if disc <= 0 {
        return Err(Error::NotIndefinite(disc));
    }
    if is_square(disc) {
        return Err(Error::Isotropic);
    }
    let (sb, vals, descent_steps) = descend(f, limit)?;
    let ni = (0..3).find(|&i| vals[i] < 0).expect("mixed signs");
    let pi = (0..3).find(|&i| vals[i] > 0).expect("mixed signs");
    let ai = 3 - ni - pi;
    let (mut n, mut p) = (sb.v[ni].clone(), sb.v[pi].clone());
    let (mut fn_, mut fp, mut fa) = (vals[ni], vals[pi], vals[ai]);
    let (n0, p0) = (n.clone(), p.clone());
    let key0 = (fn_, fp, fa);
    let mut period = Vec::new();
    let mut best = None;
    consider(&mut best, &n, fn_);
    consider(&mut best, &p, fp);
    loop {
        if period.len() >= limit {
            return Err(Error::StepLimit(limit));
        }
        let ahead = n.add(&p);
        let turn = if fa > 0 {
            let nfa = 2 * (fn_ + fa) - fp;
            p = ahead;
            fp = fa;
            fa = nfa;
            Turn::Left
        } else {
            let nfa = 2 * (fa + fp) - fn_;
            n = ahead;
            fn_ = fa;
            fa = nfa;
            Turn::Right
        };
        period.push(RiverEdge {
            neg: fn_,
            pos: fp,
            turn,
        });
        consider(&mut best, &n, fn_);
        consider(&mut best, &p, fp);
        if (fn_, fp, fa) == key0 {
            break;
        }
    }
    // The step into the recurring state closes the cycle; report labels from the start edge.
    period.rotate_right(1);
    let automorph = map_basis(&(n0, p0), &(n, p));
    let w = best.expect("river visited");
    Ok(RiverResult {
        disc,
        period,
        automorph,
        min_abs: w.key.0,
        min_value: w.value,
        min_vec: w.key.3,
        descent_steps,
    })
}

/// The matrix `M′M⁻¹` carrying basis `(n, p)` to `(n′, p′)`.
fn map_basis(from: &(ZVec, ZVec), to: &(ZVec, ZVec)) -> [[BigInt; 2]; 2] {
    let (a, c, b, d) = (&from.0.m, &from.0.n, &from.1.m, &from.1.n);
    let det = a * d - b * c;
    debug_assert!(det.abs().is_one());
    // M⁻¹ = (d −b; −c a)/det
    let inv = [[d * &det, -b * &det], [-c * &det, a * &det]];
    let mp = [[&to.0.m, &to.1.m], [&to.0.n, &to.1.n]];
    let mut out: [[BigInt; 2]; 2] = Default::default();
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = mp[i][0] * &inv[0][j] + mp[i][1] * &inv[1][j];
        }
    }
    out
}

/// A generator of `SO(f) ≅ Z`.
pub fn so_generator(f: &QuadraticForm) -> Result<[[BigInt; 2]; 2]> {
    Ok(trace_river(f)?.automorph)
}

/// `f∘g` as a quadratic form; `None` when the coefficients leave `i64`.
pub fn pullback(f: &QuadraticForm, g: &[[BigInt; 2]; 2]) -> Option<QuadraticForm> {
    let c0 = ZVec::new(g[0][0].clone(), g[1][0].clone());
    let c1 = ZVec::new(g[0][1].clone(), g[1][1].clone());
    let a = eval_big(f, &c0);
    let c = eval_big(f, &c1);
    let b2 = eval_big(f, &c0.add(&c1)) - &a - &c;
    Some(QuadraticForm::new(a.to_i64()?, b2.to_i64()?, c.to_i64()?))
}

/// Brute-force minimum of `|f|` over `0 < max(|m|, |n|) ≤ r`.
pub fn brute_min_abs(f: &QuadraticForm, r: i64) -> i64 {
    let mut best = i64::MAX;
    for m in 0..=r {
        let lo = if m == 0 { 1 } else { -r };
        for n in lo..=r {
            best = best.min(f.eval(m, n).abs());
        }
    }
    best
}

/// Primitive indefinite anisotropic forms with `|a|, |c| ≤ ac_max`,
/// `|b2| ≤ b_max`, `0 < D ≤ d_max`.
pub fn sweep_forms(ac_max: i64, b_max: i64, d_max: i64) -> Vec<QuadraticForm> {
    let mut out = Vec::new();
    for a in -ac_max..=ac_max {
        for b2 in -b_max..=b_max {
            for c in -ac_max..=ac_max {
                let f = QuadraticForm::new(a, b2, c);
                let d = f.disc();
                if d > 0 && d <= d_max && !is_square(d) && f.is_primitive() {
                    out.push(f);
                }
            }
        }
    }
    out
}

/// A vertex of an explored topograph patch.
#[derive(Clone, Debug)]
pub struct TopoVertex {
    pub regions: [LaxVec; 3],
    pub values: [i64; 3],
    pub parent: Option<usize>,
}

/// Breadth-first patch of the topograph around the standard superbasis.
pub fn explore(f: &QuadraticForm, depth: usize) -> Vec<TopoVertex> {
    let sb = SuperBasis::standard();
    let (a, b, c) = vertex_values(f, &sb);
    let mut out = vec![TopoVertex {
        regions: sb.lax(),
        values: [a, b, c],
        parent: None,
    }];
    let mut frontier = vec![(sb, None::<usize>, 0usize)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (sb, came, idx) in frontier {
            for k in 0..3 {
                if came == Some(k) {
                    continue;
                }
                let nb = edge_step(&sb, k);
                let (a, b, c) = vertex_values(f, &nb);
                out.push(TopoVertex {
                    regions: nb.lax(),
                    values: [a, b, c],
                    parent: Some(idx),
                });
                next.push((nb, Some(k), out.len() - 1));
            }
        }
        frontier = next;
    }
    out
}
