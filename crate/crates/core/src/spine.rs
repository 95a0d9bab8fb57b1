//! Combinatorial spine for `D = −3` and `D = −4`, shared by the
//! Eisenstein and Gaussian modules.
//!
//! A vertex is given by a basis `B = [u v]` of `A²`; its regions are the
//! lax vectors `B·cₖ` for a fixed list of coefficient vectors `cₖ`.
//! Symmetries of the standard vertex (`B = 1`) modulo scalars are tabulated
//! once and transported to any vertex by `B`.

use std::collections::{BTreeSet, HashMap, VecDeque};

use once_cell::sync::Lazy;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{disc_is_anisotropic, transform_any, HermitianForm};
use crate::lax::{LaxKey, Mat2A, Vec2};
use crate::ring::{units, Disc, RingElem};

pub const DEFAULT_STEP_LIMIT: usize = 1_000_000;

/// Descent step limit; `HERMTOP_STEP_LIMIT` overrides the default.
pub fn step_limit() -> usize {
    std::env::var("HERMTOP_STEP_LIMIT")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_STEP_LIMIT)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Eisenstein,
    Gaussian,
}

/// A symmetry `P` of the standard vertex: region `k` of `B·P` is a unit
/// multiple of region `perm[k]` of `B`.
#[derive(Clone, Debug)]
pub struct Reparam {
    pub m: Mat2A,
    pub perm: Vec<usize>,
}

#[derive(Debug)]
pub struct Spine {
    pub d: Disc,
    pub kind: Kind,
    pub coeffs: Vec<Vec2>,
    pub edges: Vec<Vec<usize>>,
    pub cells: Vec<[usize; 2]>,
    pub reparams: Vec<Reparam>,
    across_q: Mat2A,
    /// For each edge, a reparam carrying the canonical edge onto it.
    edge_reparam: Vec<usize>,
}

pub type VKey = Vec<LaxKey>;

#[derive(Clone, Debug)]
pub struct Vertex {
    pub basis: Mat2A,
    pub regions: Vec<Vec2>,
    pub labels: Vec<i64>,
    pub key: VKey,
}

fn lax_index(list: &[LaxKey], v: &Vec2) -> Option<usize> {
    let k = v.key();
    list.iter().position(|x| *x == k)
}

impl Spine {
    fn build(d: Disc) -> Spine {
        let o = RingElem::one(d);
        let z = RingElem::zero(d);
        let g = RingElem::new(2, 1, d); // ρ or i
        let v = |x: RingElem, y: RingElem| Vec2::new(x, y);
        let (kind, coeffs, edges, cells, e0, q) = match d.get() {
            -3 => {
                let coeffs = vec![v(o, z), v(z, o), v(o, o), v(o, g)];
                let edges: Vec<Vec<usize>> = (0..4)
                    .rev()
                    .map(|k| (0..4).filter(|&i| i != k).collect())
                    .collect();
                let mut cells = Vec::new();
                for i in 0..4 {
                    for j in i + 1..4 {
                        cells.push([i, j]);
                    }
                }
                // across the edge {u, v, u+ρv}: (u, v) ↦ (u, ρv)
                (Kind::Eisenstein, coeffs, edges, cells, vec![0, 1, 3], Mat2A::new(o, z, z, g))
            }
            -4 => {
                // r = u+v, s = u+iv, then (1+i)/2 times r+s, r−s, r+is, r−is
                let coeffs = vec![
                    v(o, o),
                    v(o, g),
                    v(o + g, g),
                    v(z, o),
                    v(g, z),
                    v(o, o + g),
                ];
                let mut edges = Vec::new();
                for a in [0, 1] {
                    for b in [2, 3] {
                        for c in [4, 5] {
                            edges.push(vec![a, b, c]);
                        }
                    }
                }
                let mut cells = Vec::new();
                for i in 0..6 {
                    for j in i + 1..6 {
                        if i / 2 != j / 2 {
                            cells.push([i, j]);
                        }
                    }
                }
                // across {u, v, u+v}: (u, v) ↦ (u + (1−i)v, iv)
                let q = Mat2A::new(o, z, o - g, g);
                (Kind::Gaussian, coeffs, edges, cells, vec![0, 3, 4], q)
            }
            _ => unreachable!("spine tables exist for D = −3, −4 only"),
        };
        let std_keys: Vec<LaxKey> = coeffs.iter().map(|c| c.key()).collect();
        let us = units(d);
        let mut reparams: Vec<Reparam> = Vec::new();
        let mut seen = BTreeSet::new();
        for c0 in &coeffs {
            for c1 in &coeffs {
                for mu in &us {
                    let m = Mat2A::from_cols(c0, &c1.scale(mu));
                    if !m.is_invertible() {
                        continue;
                    }
                    let perm: Option<Vec<usize>> = coeffs
                        .iter()
                        .map(|c| lax_index(&std_keys, &m.apply(c)))
                        .collect();
                    let Some(perm) = perm else { continue };
                    if seen.insert(m.projective_key()) {
                        reparams.push(Reparam { m, perm });
                    }
                }
            }
        }
        reparams.sort_by_key(|r| (r.perm.clone(), r.m.projective_key()));
        let e0: BTreeSet<usize> = e0.into_iter().collect();
        let edge_reparam = edges
            .iter()
            .map(|e| {
                let target: BTreeSet<usize> = e.iter().copied().collect();
                reparams
                    .iter()
                    .position(|r| e0.iter().map(|&k| r.perm[k]).collect::<BTreeSet<_>>() == target)
                    .expect("vertex symmetries act transitively on edges")
            })
            .collect();
        Spine {
            d,
            kind,
            coeffs,
            edges,
            cells,
            reparams,
            across_q: q,
            edge_reparam,
        }
    }

    pub fn n_regions(&self) -> usize {
        self.coeffs.len()
    }

    pub fn regions(&self, basis: &Mat2A) -> Vec<Vec2> {
        self.coeffs.iter().map(|c| basis.apply(c)).collect()
    }

    pub fn key_of(regions: &[Vec2]) -> VKey {
        let mut k: Vec<LaxKey> = regions.iter().map(|r| r.key()).collect();
        k.sort();
        k
    }

    pub fn vertex(&self, f: &HermitianForm, basis: Mat2A) -> Vertex {
        let regions = self.regions(&basis);
        let labels = regions.iter().map(|r| f.eval_vec(r)).collect();
        let key = Self::key_of(&regions);
        Vertex {
            basis,
            regions,
            labels,
            key,
        }
    }

    pub fn standard(&self, f: &HermitianForm) -> Vertex {
        self.vertex(f, Mat2A::identity(self.d))
    }

    /// `inv(v)`: the label sum for `D = −3`, an opposite-pair sum for `D = −4`.
    pub fn inv(&self, labels: &[i64]) -> i64 {
        match self.kind {
            Kind::Eisenstein => labels.iter().sum(),
            Kind::Gaussian => labels[0] + labels[1],
        }
    }

    /// The vertex on the other side of edge `e`.
    pub fn across(&self, f: &HermitianForm, v: &Vertex, e: usize) -> Vertex {
        let p = &self.reparams[self.edge_reparam[e]].m;
        self.vertex(f, v.basis.mul(p).mul(&self.across_q))
    }

    /// Labels reordered by the symmetry `r`.
    pub fn permute(&self, labels: &[i64], r: &Reparam) -> Vec<i64> {
        r.perm.iter().map(|&k| labels[k]).collect()
    }

    /// Lexicographically least relabeling over the vertex symmetries.
    pub fn canonical_labels(&self, labels: &[i64]) -> Vec<i64> {
        self.reparams
            .iter()
            .map(|r| self.permute(labels, r))
            .min()
            .expect("identity symmetry")
    }

    pub fn edge_values(&self, v: &Vertex, e: usize) -> Vec<i64> {
        self.edges[e].iter().map(|&k| v.labels[k]).collect()
    }

    pub fn edge_key(&self, v: &Vertex, e: usize) -> VKey {
        let r: Vec<Vec2> = self.edges[e].iter().map(|&k| v.regions[k]).collect();
        Self::key_of(&r)
    }

    pub fn is_ocean_edge(&self, v: &Vertex, e: usize) -> bool {
        let vals = self.edge_values(v, e);
        vals.iter().any(|&x| x > 0) && vals.iter().any(|&x| x < 0)
    }

    pub fn is_ocean_cell(&self, v: &Vertex, c: usize) -> bool {
        let [i, j] = self.cells[c];
        (v.labels[i] > 0) != (v.labels[j] > 0)
    }

    pub fn is_ocean_vertex(&self, v: &Vertex) -> bool {
        (0..self.cells.len()).any(|c| self.is_ocean_cell(v, c))
    }

    /// Elements `g ∈ GL₂(A)` (mod scalars) with `g·v1 = v2` and `f∘g = sign·f`.
    pub fn matches(&self, f: &HermitianForm, v1: &Vertex, v2: &Vertex, sign: i64) -> Vec<Mat2A> {
        let mut l1: Vec<i64> = v1.labels.iter().map(|x| x * sign).collect();
        let mut l2 = v2.labels.clone();
        l1.sort_unstable();
        l2.sort_unstable();
        if l1 != l2 {
            return Vec::new();
        }
        let target = if sign > 0 { *f } else { f.neg() };
        let b1i = v1.basis.inverse().expect("vertex bases are invertible");
        self.reparams
            .iter()
            .filter_map(|r| {
                let g = v2.basis.mul(&r.m).mul(&b1i);
                (transform_any(f, &g) == target).then_some(g)
            })
            .collect()
    }

    pub fn apply(&self, f: &HermitianForm, g: &Mat2A, v: &Vertex) -> Vertex {
        self.vertex(f, g.mul(&v.basis))
    }

    /// Edges at `v` containing both regions of cell `c`.
    fn cell_edges(&self, v: &Vertex, pair: &[LaxKey; 2]) -> Vec<usize> {
        let keys: Vec<LaxKey> = v.regions.iter().map(|r| r.key()).collect();
        let pos: Vec<usize> = pair
            .iter()
            .map(|k| keys.iter().position(|x| x == k).expect("cell region at vertex"))
            .collect();
        (0..self.edges.len())
            .filter(|&e| self.edges[e].contains(&pos[0]) && self.edges[e].contains(&pos[1]))
            .collect()
    }

    /// Vertices around cell `c` of `v`, in cyclic order starting at `v`.
    pub fn cell_cycle(&self, f: &HermitianForm, v: &Vertex, c: usize) -> Vec<Vertex> {
        let [i, j] = self.cells[c];
        let pair = [v.regions[i].key(), v.regions[j].key()];
        let mut out = vec![v.clone()];
        let mut came: VKey = Vec::new();
        loop {
            let cur = out.last().expect("non-empty");
            let es = self.cell_edges(cur, &pair);
            let e = *es
                .iter()
                .find(|&&e| self.edge_key(cur, e) != came)
                .expect("two cell edges per vertex");
            came = self.edge_key(cur, e);
            let next = self.across(f, cur, e);
            if next.key == v.key {
                return out;
            }
            out.push(next);
            assert!(out.len() <= 12, "cell cycle did not close");
        }
    }

    pub fn cell_key(&self, v: &Vertex, c: usize) -> VKey {
        let [i, j] = self.cells[c];
        Self::key_of(&[v.regions[i], v.regions[j]])
    }
}

static EISENSTEIN: Lazy<Spine> = Lazy::new(|| Spine::build(Disc::new(-3).unwrap()));
static GAUSSIAN: Lazy<Spine> = Lazy::new(|| Spine::build(Disc::new(-4).unwrap()));

pub fn spine(d: Disc) -> Result<&'static Spine> {
    match d.get() {
        -3 => Ok(&EISENSTEIN),
        -4 => Ok(&GAUSSIAN),
        x => Err(Error::UnsupportedDisc(x, "-3, -4")),
    }
}

fn check_labels(v: &Vertex) -> Result<()> {
    if v.labels.contains(&0) {
        Err(Error::Isotropic)
    } else {
        Ok(())
    }
}

/// Neighbor with the smallest `sign·inv`, ties by smallest new label then key.
fn best_neighbor(sp: &Spine, f: &HermitianForm, v: &Vertex, sign: i64) -> Vertex {
    (0..sp.edges.len())
        .map(|e| sp.across(f, v, e))
        .min_by(|a, b| {
            let ka = (sign * sp.inv(&a.labels), a.labels.iter().map(|x| sign * x).min(), &a.key);
            let kb = (sign * sp.inv(&b.labels), b.labels.iter().map(|x| sign * x).min(), &b.key);
            ka.cmp(&kb)
        })
        .expect("edges exist")
}

/// Steepest descent on `inv` to a vertex whose neighbors all have `inv ≥ inv(v)`.
pub fn find_well(f: &HermitianForm) -> Result<Vertex> {
    let sp = spine(f.d)?;
    if !f.is_positive_definite() {
        return Err(Error::NoWell);
    }
    let limit = step_limit();
    let mut v = sp.standard(f);
    for _ in 0..limit {
        if v.labels.iter().any(|&x| x <= 0) {
            return Err(Error::NoWell);
        }
        let nb = best_neighbor(sp, f, &v, 1);
        if sp.inv(&nb.labels) >= sp.inv(&v.labels) {
            return Ok(v);
        }
        v = nb;
    }
    Err(Error::StepLimit(limit))
}

pub fn is_well(sp: &Spine, f: &HermitianForm, v: &Vertex) -> bool {
    let i = sp.inv(&v.labels);
    (0..sp.edges.len()).all(|e| sp.inv(&sp.across(f, v, e).labels) >= i)
}

/// All wells connected to `w` through wells of the same `inv`.
pub fn well_set(f: &HermitianForm, w: &Vertex) -> Result<Vec<Vertex>> {
    let sp = spine(f.d)?;
    let inv = sp.inv(&w.labels);
    let mut seen: HashMap<VKey, usize> = HashMap::new();
    let mut out = vec![w.clone()];
    seen.insert(w.key.clone(), 0);
    let mut i = 0;
    while i < out.len() {
        let v = out[i].clone();
        for e in 0..sp.edges.len() {
            let nb = sp.across(f, &v, e);
            if sp.inv(&nb.labels) == inv && !seen.contains_key(&nb.key) && is_well(sp, f, &nb) {
                seen.insert(nb.key.clone(), out.len());
                out.push(nb);
            }
        }
        i += 1;
    }
    out.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(out)
}

/// Descend to a vertex with labels of both signs; for `D = −3` continue
/// until exactly two labels are positive.
pub fn find_ocean_vertex(f: &HermitianForm) -> Result<Vertex> {
    let sp = spine(f.d)?;
    let delta = f.disc();
    if delta <= 0 {
        return Err(Error::NotIndefinite(delta));
    }
    if !disc_is_anisotropic(f.d, delta)? {
        return Err(Error::Isotropic);
    }
    let limit = step_limit();
    let mut v = sp.standard(f);
    let mut steps = 0;
    check_labels(&v)?;
    loop {
        let sign = if v.labels.iter().all(|&x| x > 0) {
            1
        } else if v.labels.iter().all(|&x| x < 0) {
            -1
        } else {
            break;
        };
        if steps >= limit {
            return Err(Error::StepLimit(limit));
        }
        let nb = best_neighbor(sp, f, &v, sign);
        if sign * sp.inv(&nb.labels) >= sign * sp.inv(&v.labels) {
            // a well of an indefinite form cannot exist
            return Err(Error::Invalid("descent stalled on an indefinite form".into()));
        }
        v = nb;
        check_labels(&v)?;
        steps += 1;
    }
    if sp.kind == Kind::Eisenstein {
        let min_abs = |v: &Vertex| v.labels.iter().map(|x| x.abs()).min().unwrap_or(0);
        loop {
            let pos = v.labels.iter().filter(|&&x| x > 0).count();
            if pos == 2 {
                break;
            }
            if steps >= limit {
                return Err(Error::StepLimit(limit));
            }
            let sign = if pos == 3 { 1 } else { -1 };
            // cross the edge opposite the largest majority-sign label
            let k = (0..4)
                .max_by_key(|&k| (sign * v.labels[k], std::cmp::Reverse(k)))
                .expect("four regions");
            let e = sp
                .edges
                .iter()
                .position(|ed| !ed.contains(&k))
                .expect("edge opposite a region");
            let before = min_abs(&v);
            v = sp.across(f, &v, e);
            check_labels(&v)?;
            debug_assert!(min_abs(&v) <= before);
            steps += 1;
        }
    }
    Ok(v)
}

#[derive(Clone, Debug, Serialize)]
pub struct OceanEdge {
    pub ends: [usize; 2],
    pub regions: Vec<Vec2>,
    pub values: Vec<i64>,
    pub inv: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OceanCell {
    pub pair: [Vec2; 2],
    pub values: [i64; 2],
    pub cycle: Vec<usize>,
}

/// A finite breadth-first patch of the ocean.
#[derive(Clone, Debug)]
pub struct OceanGraph {
    pub form: HermitianForm,
    pub radius: usize,
    pub vertices: Vec<Vertex>,
    pub depth: Vec<usize>,
    pub edges: Vec<OceanEdge>,
    pub cells: Vec<OceanCell>,
    pub index: HashMap<VKey, usize>,
}

pub fn ocean_graph(f: &HermitianForm, radius: usize) -> Result<OceanGraph> {
    let seed = find_ocean_vertex(f)?;
    ocean_graph_from(f, seed, radius)
}

pub fn ocean_graph_from(f: &HermitianForm, seed: Vertex, radius: usize) -> Result<OceanGraph> {
    let sp = spine(f.d)?;
    let mut g = OceanGraph {
        form: *f,
        radius,
        vertices: vec![],
        depth: vec![],
        edges: vec![],
        cells: vec![],
        index: HashMap::new(),
    };
    g.index.insert(seed.key.clone(), 0);
    g.vertices.push(seed);
    g.depth.push(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if g.depth[i] >= radius {
            continue;
        }
        let v = g.vertices[i].clone();
        for e in 0..sp.edges.len() {
            if !sp.is_ocean_edge(&v, e) {
                continue;
            }
            let w = sp.across(f, &v, e);
            check_labels(&w)?;
            if !g.index.contains_key(&w.key) {
                g.index.insert(w.key.clone(), g.vertices.len());
                g.vertices.push(w);
                g.depth.push(g.depth[i] + 1);
                queue.push_back(g.vertices.len() - 1);
            }
        }
    }
    let mut edge_seen = BTreeSet::new();
    let mut cell_seen = BTreeSet::new();
    for i in 0..g.vertices.len() {
        let v = g.vertices[i].clone();
        for e in 0..sp.edges.len() {
            if !sp.is_ocean_edge(&v, e) || !edge_seen.insert(sp.edge_key(&v, e)) {
                continue;
            }
            let w = sp.across(f, &v, e);
            if let Some(&j) = g.index.get(&w.key) {
                g.edges.push(OceanEdge {
                    ends: [i, j],
                    regions: sp.edges[e].iter().map(|&k| v.regions[k].lax()).collect(),
                    values: sp.edge_values(&v, e),
                    inv: sp.edge_values(&v, e).iter().sum(),
                });
            } else {
                edge_seen.remove(&sp.edge_key(&v, e));
            }
        }
        for c in 0..sp.cells.len() {
            if !sp.is_ocean_cell(&v, c) || cell_seen.contains(&sp.cell_key(&v, c)) {
                continue;
            }
            let cyc = sp.cell_cycle(f, &v, c);
            let idx: Option<Vec<usize>> = cyc.iter().map(|w| g.index.get(&w.key).copied()).collect();
            if let Some(cycle) = idx {
                cell_seen.insert(sp.cell_key(&v, c));
                let [a, b] = sp.cells[c];
                g.cells.push(OceanCell {
                    pair: [v.regions[a].lax(), v.regions[b].lax()],
                    values: [v.labels[a], v.labels[b]],
                    cycle,
                });
            }
        }
    }
    Ok(g)
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexOrbit {
    pub labels: Vec<i64>,
    pub inv: i64,
    pub stabilizer: usize,
    pub ocean_cells: usize,
    #[serde(skip)]
    pub rep: Vertex,
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeOrbit {
    pub values: Vec<i64>,
    pub inv: i64,
    pub stabilizer: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellOrbit {
    pub values: [i64; 2],
    pub sides: usize,
    pub stabilizer: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Presentation {
    pub exponents: Vec<usize>,
    pub text: String,
}

/// `U(f)` acting on the ocean: orbit representatives, stabilizer orders,
/// and a generating set.
#[derive(Clone, Debug, Serialize)]
pub struct UfGroup {
    pub disc: i64,
    pub generators: Vec<Mat2A>,
    pub vertex_orbits: Vec<VertexOrbit>,
    pub edge_orbits: Vec<EdgeOrbit>,
    pub cell_orbits: Vec<CellOrbit>,
    /// Orbit counts (vertices, edges, cells) under `g` with `f∘g = ±f`.
    pub signed_orbit_counts: [usize; 3],
    pub presentation: Option<Presentation>,
}

impl UfGroup {
    pub fn orbit_counts(&self) -> [usize; 3] {
        [
            self.vertex_orbits.len(),
            self.edge_orbits.len(),
            self.cell_orbits.len(),
        ]
    }
}

struct Reps<'a> {
    sp: &'a Spine,
    f: HermitianForm,
    reps: Vec<Vertex>,
}

impl Reps<'_> {
    /// Representative index of `v` and the elements carrying `v` onto it.
    fn locate(&self, v: &Vertex) -> Option<(usize, Vec<Mat2A>)> {
        self.reps.iter().enumerate().find_map(|(i, r)| {
            let m = self.sp.matches(&self.f, v, r, 1);
            (!m.is_empty()).then_some((i, m))
        })
    }
}

fn dedup_mats(ms: Vec<Mat2A>) -> Vec<Mat2A> {
    let mut seen = BTreeSet::new();
    let mut out: Vec<Mat2A> = ms
        .into_iter()
        .filter(|m| !m.is_scalar() && seen.insert(m.projective_key()))
        .collect();
    out.sort_by_key(|m| m.projective_key());
    out
}

fn apply_keys(g: &Mat2A, regions: &[Vec2]) -> VKey {
    let imgs: Vec<Vec2> = regions.iter().map(|r| g.apply(r)).collect();
    Spine::key_of(&imgs)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
    fn classes(&mut self) -> usize {
        (0..self.0.len()).filter(|&i| self.find(i) == i).count()
    }
}

/// Orbit structure of `U(f)` on the ocean of an indefinite anisotropic `f`.
pub fn uf_group(f: &HermitianForm) -> Result<UfGroup> {
    let seed = find_ocean_vertex(f)?;
    uf_group_from(f, seed)
}

/// One vertex per `U(f)`-orbit of ocean vertices, with the elements found
/// while identifying neighbors.
pub fn ocean_representatives(f: &HermitianForm, seed: Vertex) -> Result<(Vec<Vertex>, Vec<Mat2A>)> {
    let sp = spine(f.d)?;
    let limit = step_limit();
    let mut st = Reps {
        sp,
        f: *f,
        reps: vec![seed],
    };
    let mut gens: Vec<Mat2A> = Vec::new();
    let mut i = 0;
    while i < st.reps.len() {
        let r = st.reps[i].clone();
        gens.extend(sp.matches(f, &r, &r, 1));
        for e in 0..sp.edges.len() {
            if !sp.is_ocean_edge(&r, e) {
                continue;
            }
            let w = sp.across(f, &r, e);
            check_labels(&w)?;
            match st.locate(&w) {
                Some((_, ms)) => gens.push(ms[0]),
                None => {
                    st.reps.push(w);
                    if st.reps.len() > limit {
                        return Err(Error::StepLimit(limit));
                    }
                }
            }
        }
        i += 1;
    }
    Ok((st.reps, gens))
}

pub fn uf_group_from(f: &HermitianForm, seed: Vertex) -> Result<UfGroup> {
    let sp = spine(f.d)?;
    let (reps, gens) = ocean_representatives(f, seed)?;
    let st = Reps { sp, f: *f, reps };
    let generators = dedup_mats(gens);

    // vertex orbits
    let vertex_orbits: Vec<VertexOrbit> = st
        .reps
        .iter()
        .map(|r| VertexOrbit {
            labels: sp.canonical_labels(&r.labels),
            inv: sp.inv(&r.labels),
            stabilizer: sp.matches(f, r, r, 1).len(),
            ocean_cells: (0..sp.cells.len()).filter(|&c| sp.is_ocean_cell(r, c)).count(),
            rep: r.clone(),
        })
        .collect();

    // canonical keys: least image over elements carrying an incident vertex to its representative
    let canon = |verts: &[Vertex], regions: &[Vec2]| -> VKey {
        verts
            .iter()
            .flat_map(|w| st.locate(w).expect("every ocean vertex has a representative").1)
            .map(|g| apply_keys(&g, regions))
            .min()
            .expect("identity")
    };
    let edge_regions = |v: &Vertex, e: usize| -> Vec<Vec2> { sp.edges[e].iter().map(|&k| v.regions[k]).collect() };
    let canon_edge = |v: &Vertex, e: usize| canon(&[v.clone(), sp.across(f, v, e)], &edge_regions(v, e));
    let cell_regions = |v: &Vertex, c: usize| -> Vec<Vec2> { sp.cells[c].iter().map(|&k| v.regions[k]).collect() };
    let canon_cell = |v: &Vertex, c: usize| canon(&sp.cell_cycle(f, v, c), &cell_regions(v, c));

    let mut edge_orbits: Vec<(VKey, EdgeOrbit, usize, usize)> = Vec::new();
    for (ri, r) in st.reps.iter().enumerate() {
        for e in 0..sp.edges.len() {
            if !sp.is_ocean_edge(r, e) {
                continue;
            }
            let key = canon_edge(r, e);
            if edge_orbits.iter().any(|(k, ..)| *k == key) {
                continue;
            }
            let regions = edge_regions(r, e);
            let own = Spine::key_of(&regions);
            let w = sp.across(f, r, e);
            let stab = sp
                .matches(f, r, r, 1)
                .iter()
                .chain(sp.matches(f, r, &w, 1).iter())
                .filter(|g| apply_keys(g, &regions) == own)
                .count();
            let values = sp.edge_values(r, e);
            let inv = values.iter().sum();
            edge_orbits.push((key, EdgeOrbit { values, inv, stabilizer: stab }, ri, e));
        }
    }

    let mut cell_orbits: Vec<(VKey, CellOrbit, usize, usize)> = Vec::new();
    for (ri, r) in st.reps.iter().enumerate() {
        for c in 0..sp.cells.len() {
            if !sp.is_ocean_cell(r, c) {
                continue;
            }
            let key = canon_cell(r, c);
            if cell_orbits.iter().any(|(k, ..)| *k == key) {
                continue;
            }
            let regions = cell_regions(r, c);
            let own = Spine::key_of(&regions);
            let cyc = sp.cell_cycle(f, r, c);
            let stab = cyc
                .iter()
                .flat_map(|w| sp.matches(f, r, w, 1))
                .filter(|g| apply_keys(g, &regions) == own)
                .count();
            let [a, b] = sp.cells[c];
            cell_orbits.push((
                key,
                CellOrbit {
                    values: [r.labels[a], r.labels[b]],
                    sides: cyc.len(),
                    stabilizer: stab,
                },
                ri,
                c,
            ));
        }
    }

    // orbits under elements with f∘g = −f
    let nv = st.reps.len();
    let mut uv = UnionFind::new(nv);
    let mut ue = UnionFind::new(edge_orbits.len());
    let mut uc = UnionFind::new(cell_orbits.len());
    for a in 0..nv {
        for b in 0..nv {
            for g in sp.matches(f, &st.reps[a], &st.reps[b], -1) {
                uv.union(a, b);
                let img = sp.vertex(f, g.mul(&st.reps[a].basis));
                for (i, (_, _, ri, e)) in edge_orbits.iter().enumerate() {
                    if *ri == a && sp.is_ocean_edge(&img, *e) {
                        let k = canon_edge(&img, *e);
                        if let Some(j) = edge_orbits.iter().position(|x| x.0 == k) {
                            ue.union(i, j);
                        }
                    }
                }
                for (i, (_, _, ri, c)) in cell_orbits.iter().enumerate() {
                    if *ri == a && sp.is_ocean_cell(&img, *c) {
                        let k = canon_cell(&img, *c);
                        if let Some(j) = cell_orbits.iter().position(|x| x.0 == k) {
                            uc.union(i, j);
                        }
                    }
                }
            }
        }
    }
    let signed_orbit_counts = [uv.classes(), ue.classes(), uc.classes()];

    let edge_orbits: Vec<EdgeOrbit> = edge_orbits.into_iter().map(|x| x.1).collect();
    let cell_orbits: Vec<CellOrbit> = cell_orbits.into_iter().map(|x| x.1).collect();
    let presentation = triangle_presentation(&vertex_orbits, &edge_orbits, &cell_orbits);
    Ok(UfGroup {
        disc: f.disc(),
        generators,
        vertex_orbits,
        edge_orbits,
        cell_orbits,
        signed_orbit_counts,
        presentation,
    })
}

/// Presentation of a spherical quotient with one 2-cell orbit and free
/// edge and cell actions, read off the cone-point orders.
fn triangle_presentation(
    vs: &[VertexOrbit],
    es: &[EdgeOrbit],
    cs: &[CellOrbit],
) -> Option<Presentation> {
    let euler = vs.len() as i64 - es.len() as i64 + cs.len() as i64;
    if cs.len() != 1 || euler != 2 || es.iter().any(|e| e.stabilizer != 1) || cs[0].stabilizer != 1 {
        return None;
    }
    let mut exps: Vec<usize> = vs.iter().map(|v| v.stabilizer).filter(|&s| s > 1).collect();
    exps.sort_unstable();
    let names = ["r", "s", "t", "u", "v", "w"];
    if exps.is_empty() || exps.len() > names.len() {
        return None;
    }
    // the first generator carries the smallest exponent, as in ⟨r,s,t | t³=r⁴=s⁴=rst=1⟩
    let k = exps.len();
    let gens: Vec<&str> = names[..k].to_vec();
    let mut order: Vec<usize> = (0..k).collect();
    order.rotate_right(1);
    let powers: Vec<String> = order
        .iter()
        .zip(&exps)
        .map(|(&g, e)| format!("{}^{}", gens[g], e))
        .collect();
    let text = format!(
        "<{} | {}={}=1>",
        gens.join(","),
        powers.join("="),
        gens.concat()
    );
    Some(Presentation {
        exponents: exps,
        text,
    })
}
