//! Classes of hermitian forms of fixed discriminant over `Z[ρ]` and `Z[i]`.
//!
//! Definite classes come from well labels, indefinite ones from forms with
//! an ocean cell at the standard basis. Candidates are merged by a class
//! key: the least canonical vertex labelling over the well-set or over the
//! `U(f)`-orbit representatives of ocean vertices.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{disc_is_anisotropic, reconstruct_form, Cusp, HermitianForm};
use crate::par::{self, Exec};
use crate::rat::Rat;
use crate::ring::{Disc, RingElem};
use crate::spine::{self, find_ocean_vertex, find_well, ocean_representatives, spine, well_set, Kind, Spine};

#[derive(Clone, Debug, Serialize)]
pub struct FormClass {
    pub d: i64,
    pub disc: i64,
    /// Least canonical vertex labelling over the class.
    pub key: Vec<i64>,
    #[serde(serialize_with = "ser_form")]
    pub form: HermitianForm,
    pub primitive: bool,
    /// Minimum of `f` (definite) or of `|f|` (indefinite) over lax vectors.
    pub minimum: i64,
    /// Number of enumerated candidates merged into this class.
    pub merged: usize,
}

fn ser_form<S: serde::Serializer>(f: &HermitianForm, s: S) -> std::result::Result<S::Ok, S::Error> {
    f.json_value().serialize(s)
}

/// The form with the given labels at the standard vertex.
pub fn form_from_labels(sp: &Spine, labels: &[i64]) -> Result<HermitianForm> {
    let n = sp.n_regions();
    if labels.len() != n {
        return Err(Error::Invalid(format!("expected {n} labels")));
    }
    let cusps: Vec<Cusp> = sp
        .coeffs
        .iter()
        .map(Cusp::from_vec)
        .collect::<Result<_>>()?;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    let idx = [i, j, k, l];
                    let pts = idx.map(|t| cusps[t]);
                    let vals = idx.map(|t| Rat::from_integer(labels[t] as i128));
                    let Ok(rf) = reconstruct_form(&pts, &vals) else { continue };
                    let f = rf.to_integral()?;
                    if sp.standard(&f).labels != labels {
                        return Err(Error::Invalid("labels are not the values of a form".into()));
                    }
                    return Ok(f);
                }
            }
        }
    }
    Err(Error::Singular("standard regions"))
}

/// Class key and minimum of a form.
pub fn class_key(f: &HermitianForm) -> Result<(Vec<i64>, i64)> {
    let sp = spine(f.d)?;
    let delta = f.disc();
    if delta < 0 {
        let g = if f.a > 0 { *f } else { f.neg() };
        let w = find_well(&g)?;
        let ws = well_set(&g, &w)?;
        let key = ws.iter().map(|v| sp.canonical_labels(&v.labels)).min().expect("non-empty");
        let min = ws.iter().flat_map(|v| v.labels.iter().copied()).min().expect("labels");
        Ok((key, min))
    } else if delta > 0 {
        let seed = find_ocean_vertex(f)?;
        let (reps, _) = ocean_representatives(f, seed)?;
        // D = −3 keys range over vertices with two labels of each sign
        let balanced = |l: &[i64]| sp.kind == Kind::Gaussian || l.iter().filter(|&&x| x > 0).count() == 2;
        let key = reps
            .iter()
            .filter(|v| balanced(&v.labels))
            .map(|v| sp.canonical_labels(&v.labels))
            .min()
            .expect("seed vertex is balanced");
        let min = reps
            .iter()
            .flat_map(|v| v.labels.iter().map(|x| x.abs()))
            .min()
            .expect("labels");
        Ok((key, min))
    } else {
        Err(Error::Degenerate)
    }
}

/// Elements of `A` with norm `n`.
pub fn elements_of_norm(d: Disc, n: i64) -> Vec<RingElem> {
    // 4N = (2x + Dy)² + |D|y²
    let ad = d.abs();
    let mut out = Vec::new();
    let mut y = 0i64;
    while ad * y * y <= 4 * n {
        for sy in if y == 0 { vec![0] } else { vec![y, -y] } {
            let rest = 4 * n - ad * sy * sy;
            let t = num_integer::Roots::sqrt(&rest);
            if t * t != rest {
                continue;
            }
            for st in if t == 0 { vec![0] } else { vec![t, -t] } {
                let twice_x = st - d.get() * sy;
                if twice_x % 2 == 0 {
                    out.push(RingElem::new(twice_x / 2, sy, d));
                }
            }
        }
        y += 1;
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Well labellings at the standard vertex for a definite discriminant.
pub fn definite_candidates(d: Disc, delta: i64) -> Result<Vec<Vec<i64>>> {
    let sp = spine(d)?;
    let mut raw: Vec<Vec<i64>> = Vec::new();
    match sp.kind {
        Kind::Eisenstein => {
            // a ≤ b ≤ c ≤ d with nonnegative greeks; labels ≥ 1 bound the sum by −2Δ
            let s = -2 * delta;
            for a in 1..=s {
                for b in a..=s - a {
                    for c in b..=s - a - b {
                        for dd in c..=s - a - b - c {
                            let l = [a, b, c, dd];
                            let inv: i64 = l.iter().sum();
                            if l.iter().all(|&x| inv - 3 * x >= 0) && disc_labels_e(&l) == delta {
                                for p in permutations(4) {
                                    raw.push(p.iter().map(|&i| l[i]).collect());
                                }
                            }
                        }
                    }
                }
            }
        }
        Kind::Gaussian => {
            // pairs (pₖ, z − pₖ) with Σ min ≥ z; Δ = Σ 2pₖ(pₖ − z) + z²
            let zmax = (-delta + 4) / 2;
            for z in 2..=zmax {
                for a in 1..z {
                    for b in 1..z {
                        for c in 1..z {
                            let m = |p: i64| p.min(z - p);
                            if m(a) + m(b) + m(c) < z {
                                continue;
                            }
                            if 2 * a * (a - z) + 2 * b * (b - z) + 2 * c * (c - z) + z * z != delta {
                                continue;
                            }
                            let pairs = [[a, z - a], [b, z - b], [c, z - c]];
                            for p in permutations(3) {
                                raw.push(p.iter().flat_map(|&i| pairs[i]).collect());
                            }
                        }
                    }
                }
            }
        }
    }
    let mut seen = BTreeMap::new();
    for l in raw {
        seen.entry(sp.canonical_labels(&l)).or_insert(l);
    }
    Ok(seen.into_values().collect())
}

/// `Δ` from the four labels of a `D = −3` vertex.
pub fn disc_labels_e(l: &[i64; 4]) -> i64 {
    let sq: i64 = l.iter().map(|x| x * x).sum();
    let mut cross = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            cross += l[i] * l[j];
        }
    }
    sq - cross
}

/// Indefinite forms `f` with `f(e₁) > 0 > f(e₂)` and discriminant `Δ`.
pub fn indefinite_candidates(d: Disc, delta: i64) -> Vec<HermitianForm> {
    let ad = d.abs();
    let mut out = Vec::new();
    for a in 1..=delta / ad {
        for c in 1..=delta / (ad * a) {
            for num in elements_of_norm(d, delta - ad * a * c) {
                out.push(HermitianForm::new(d, a, -c, num.x, num.y));
            }
        }
    }
    out
}

/// All classes of discriminant `Δ`; empty when `Δ > 0` is isotropic.
pub fn classify(d: Disc, delta: i64, exec: Exec) -> Result<Vec<FormClass>> {
    let sp = spine(d)?;
    if delta == 0 {
        return Err(Error::Degenerate);
    }
    let forms: Vec<HermitianForm> = if delta < 0 {
        definite_candidates(d, delta)?
            .iter()
            .filter_map(|l| form_from_labels(sp, l).ok())
            .collect()
    } else {
        if !disc_is_anisotropic(d, delta)? {
            return Ok(Vec::new());
        }
        indefinite_candidates(d, delta)
    };
    let keyed = par::map(exec, &forms, |f| class_key(f).map(|k| (k, *f)));
    let mut classes: BTreeMap<Vec<i64>, FormClass> = BTreeMap::new();
    for r in keyed {
        let ((key, minimum), f) = r?;
        classes
            .entry(key.clone())
            .and_modify(|c| c.merged += 1)
            .or_insert(FormClass {
                d: d.get(),
                disc: delta,
                key,
                form: f,
                primitive: f.is_primitive(),
                minimum,
                merged: 1,
            });
    }
    Ok(classes.into_values().collect())
}

pub use spine::step_limit;

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: i64) -> Disc {
        Disc::new(n).unwrap()
    }

    #[test]
    fn norm_elements() {
        for dd in [-3, -4, -7, -20] {
            for n in 0..40 {
                let got = elements_of_norm(d(dd), n);
                for e in &got {
                    assert_eq!(e.norm(), n);
                }
                let mut brute = 0;
                for x in -80..=80 {
                    for y in -20..=20 {
                        if RingElem::new(x, y, d(dd)).norm() == n {
                            brute += 1;
                        }
                    }
                }
                assert_eq!(got.len(), brute, "D={dd} n={n}");
            }
        }
    }

    #[test]
    fn small_classifications() {
        let c = classify(d(-3), -2, Exec::Sequential).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].key, vec![1, 1, 1, 1]);
        let c = classify(d(-3), 6, Exec::Sequential).unwrap();
        assert_eq!(c.len(), 1);
        let mut k = c[0].key.clone();
        k.sort();
        assert_eq!(k, vec![-1, -1, 1, 1]);
        assert_eq!(c[0].minimum, 1);
        let c = classify(d(-4), 6, Exec::Sequential).unwrap();
        assert_eq!(c.len(), 1);
        assert!(classify(d(-3), 0, Exec::Sequential).is_err());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        for delta in [-12, -7, 15, 21] {
            let a = classify(d(-3), delta, Exec::Sequential).unwrap();
            let b = classify(d(-3), delta, Exec::Parallel).unwrap();
            let ka: Vec<_> = a.iter().map(|c| (&c.key, c.minimum)).collect();
            let kb: Vec<_> = b.iter().map(|c| (&c.key, c.minimum)).collect();
            assert_eq!(ka, kb);
        }
    }

    /// Every positive definite form of small discriminant with small
    /// coefficients lands in one of the enumerated classes.
    #[test]
    fn definite_classes_cover_brute_force() {
        for dd in [-3, -4] {
            let dsc = d(dd);
            for delta in -12..=-1 {
                let keys: Vec<Vec<i64>> =
                    classify(dsc, delta, Exec::Sequential).unwrap().into_iter().map(|c| c.key).collect();
                for a in 1..=8 {
                    for c in a..=8 {
                        for num in elements_of_norm(dsc, delta + dsc.abs() * a * c) {
                            let f = HermitianForm::new(dsc, a, c, num.x, num.y);
                            assert_eq!(f.disc(), delta);
                            let (k, _) = class_key(&f).unwrap();
                            assert!(keys.contains(&k), "D={dd} Δ={delta} missing {f:?}");
                        }
                    }
                }
            }
        }
    }

    /// Minimum at the well equals the brute-force minimum over a box.
    #[test]
    fn definite_minimum_brute_force() {
        for dd in [-3, -4] {
            let dsc = d(dd);
            for delta in -20..=-1 {
                for cl in classify(dsc, delta, Exec::Sequential).unwrap() {
                    let f = cl.form;
                    let mut m = i64::MAX;
                    for x1 in -4..=4 {
                        for x2 in -4..=4 {
                            for y1 in -4..=4 {
                                for y2 in -4..=4 {
                                    let x = RingElem::new(x1, x2, dsc);
                                    let y = RingElem::new(y1, y2, dsc);
                                    if !(x.is_zero() && y.is_zero()) {
                                        m = m.min(f.eval(&x, &y));
                                    }
                                }
                            }
                        }
                    }
                    assert_eq!(cl.minimum, m, "D={dd} Δ={delta}");
                }
            }
        }
    }
}
