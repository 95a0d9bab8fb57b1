//! Command-line front end. `run` returns the exit code and the text for stdout.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::classify::{class_key, classify};
use crate::error::{Error, Result};
use crate::forms::{HermitianForm, QuadraticForm};
use crate::par::{with_jobs, Exec};
use crate::render::{project_ocean, svg_ocean, svg_tiling, svg_topograph};
use crate::ring::Disc;
use crate::spine::{find_well, ocean_graph, spine, uf_group, well_set, OceanGraph};
use crate::spine_geom::{fundamental_cell, horosphere_tiling, voronoi_cell};
use crate::topograph::trace_river;
use crate::{eisenstein, gaussian};

#[derive(Parser, Debug)]
#[command(
    name = "hermtop",
    version,
    about = "Topographs, spines and oceans of binary quadratic and hermitian forms",
    after_help = "Forms are JSON objects {\"d\": D, \"a\": a, \"c\": c, \"nu\": {\"x\": x, \"y\": y}};\n\
                  \"d\" may be omitted when --d is given. HERMTOP_STEP_LIMIT overrides the descent step limit."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct FormArgs {
    /// Discriminant of the ring, -3 or -4.
    #[arg(long, allow_negative_numbers = true)]
    d: Option<i64>,
    /// Hermitian form as JSON.
    #[arg(long)]
    form: String,
}

impl FormArgs {
    fn parse(&self) -> Result<HermitianForm> {
        HermitianForm::from_json_str(&self.form, self.d)
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Trace the river of an indefinite quadratic form a·m² + b2·mn + c·n².
    River {
        /// Coefficients `a,b2,c`.
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        /// JSON output (default).
        #[arg(long, conflicts_with = "svg")]
        json: bool,
        /// Emit a topograph SVG instead of JSON.
        #[arg(long)]
        svg: bool,
        /// Topograph depth for --svg.
        #[arg(long, default_value_t = 6)]
        depth: usize,
    },
    /// Minimum of a hermitian form (well for definite, ocean for indefinite).
    Minimum(FormArgs),
    /// Well vertices of a positive definite form.
    Well(FormArgs),
    /// Breadth-first patch of the ocean of an indefinite form.
    Ocean {
        #[command(flatten)]
        f: FormArgs,
        /// Search radius in edges.
        #[arg(long, default_value_t = 3)]
        radius: usize,
    },
    /// Classes of primitive forms of a given discriminant.
    Classify {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long, allow_negative_numbers = true)]
        disc: i64,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Run sequentially.
        #[arg(long)]
        sequential: bool,
    },
    /// Orbits, stabilizers and generators of U(f) on the ocean.
    UfGroup(FormArgs),
    /// Fundamental cell of the spine over the cusp at infinity.
    SpineCell {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        /// Also compute the Voronoi cell of A and compare.
        #[arg(long)]
        voronoi: bool,
    },
    /// Horosphere tiling of a window of C.
    TileHorosphere {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        /// Window `x0,y0,x1,y1`.
        #[arg(long, allow_hyphen_values = true, default_value = "-1,-1,1,1")]
        window: String,
        /// Write the tiling as SVG to this path.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Ocean projected to the Poincaré disk, as SVG.
    RenderOcean {
        #[command(flatten)]
        f: FormArgs,
        #[arg(long, default_value_t = 4)]
        radius: usize,
        #[arg(long)]
        out: PathBuf,
        /// Print disk coordinates as JSON.
        #[arg(long)]
        coords: bool,
    },
}

fn parse_ints<const N: usize>(s: &str, what: &str) -> std::result::Result<[i64; N], String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| format!("{what}: {e}"))?;
    v.try_into().map_err(|_| format!("{what}: expected {N} comma-separated integers"))
}

fn parse_window(s: &str) -> std::result::Result<[f64; 4], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| format!("window: {e}"))?;
    let w: [f64; 4] = v.try_into().map_err(|_| "window: expected x0,y0,x1,y1".to_string())?;
    if !(w[0] < w[2] && w[1] < w[3]) || w.iter().any(|x| !x.is_finite()) {
        return Err("window: need x0 < x1 and y0 < y1".into());
    }
    Ok(w)
}

fn ocean_json(g: &OceanGraph) -> Result<Value> {
    let sp = spine(g.form.d)?;
    let vertices: Vec<Value> = g
        .vertices
        .iter()
        .zip(&g.depth)
        .map(|(v, depth)| {
            json!({
                "labels": v.labels,
                "inv": sp.inv(&v.labels),
                "depth": depth,
                "regions": v.regions,
            })
        })
        .collect();
    Ok(json!({
        "form": g.form.json_value(),
        "disc": g.form.disc(),
        "radius": g.radius,
        "vertices": vertices,
        "edges": g.edges,
        "cells": g.cells,
    }))
}

fn write_file(path: &PathBuf, body: &str) -> Result<()> {
    std::fs::write(path, body).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn dispatch(cmd: Cmd) -> std::result::Result<String, Failure> {
    match cmd {
        Cmd::River { form, svg, depth, .. } => {
            let [a, b, c] = parse_ints::<3>(&form, "form").map_err(Failure::Usage)?;
            let f = QuadraticForm::new(a, b, c);
            if svg {
                return Ok(svg_topograph(&f, depth));
            }
            Ok(pretty(&trace_river(&f)?.to_json()))
        }
        Cmd::Minimum(fa) => {
            let f = fa.parse()?;
            let (key, min) = class_key(&f)?;
            Ok(pretty(&json!({
                "form": f.json_value(),
                "disc": f.disc(),
                "definite": !f.is_indefinite(),
                "minimum": min,
                "labels": key,
            })))
        }
        Cmd::Well(fa) => {
            let f = fa.parse()?;
            let sp = spine(f.d)?;
            let w = find_well(&f)?;
            let set = well_set(&f, &w)?;
            let mut out = json!({
                "form": f.json_value(),
                "disc": f.disc(),
                "inv": sp.inv(&w.labels),
                "wells": set.iter().map(|v| json!({"labels": v.labels, "regions": v.regions})).collect::<Vec<_>>(),
            });
            if f.d.get() == -3 {
                let ws = eisenstein::find_well(&f)?;
                out["greeks"] = json!(ws.iter().map(|(_, l)| eisenstein::greeks(*l)).collect::<Vec<_>>());
            }
            Ok(pretty(&out))
        }
        Cmd::Ocean { f, radius } => {
            let f = f.parse()?;
            let g = match f.d.get() {
                -3 => eisenstein::ocean_graph_e(&f, radius)?,
                -4 => gaussian::ocean_graph_g(&f, radius)?,
                _ => ocean_graph(&f, radius)?,
            };
            Ok(pretty(&ocean_json(&g)?))
        }
        Cmd::Classify { d, disc, jobs, sequential } => {
            let d = Disc::new(d)?;
            let exec = if sequential { Exec::Sequential } else { Exec::Parallel };
            let classes = with_jobs(jobs, || classify(d, disc, exec))?;
            Ok(pretty(&json!({
                "d": d.get(),
                "disc": disc,
                "count": classes.len(),
                "classes": classes,
            })))
        }
        Cmd::UfGroup(fa) => {
            let f = fa.parse()?;
            let g = uf_group(&f)?;
            let mut v = serde_json::to_value(&g).expect("serializable");
            v["form"] = f.json_value();
            v["orbit_counts"] = json!(g.orbit_counts());
            Ok(pretty(&v))
        }
        Cmd::SpineCell { d, voronoi } => {
            let d = Disc::new(d)?;
            let cell = fundamental_cell(d)?;
            let mut v = json!({ "d": d.get(), "cell": cell });
            if voronoi {
                let vor = voronoi_cell(d)?;
                v["equal"] = json!(vor.vertices == cell.vertices);
                v["voronoi"] = json!(vor);
            }
            Ok(pretty(&v))
        }
        Cmd::TileHorosphere { d, window, svg } => {
            let d = Disc::new(d)?;
            let w = parse_window(&window).map_err(Failure::Usage)?;
            let t = horosphere_tiling(d, w, Exec::Parallel)?;
            if let Some(p) = &svg {
                write_file(p, &svg_tiling(&t))?;
            }
            let target = (w[2] - w[0]) * (w[3] - w[1]);
            Ok(pretty(&json!({
                "d": d.get(),
                "window": w,
                "tiles": t.tiles.len(),
                "area": t.area(),
                "defect": (t.area() - target).abs(),
                "sites": t.tiles.iter().map(|x| &x.site).collect::<Vec<_>>(),
            })))
        }
        Cmd::RenderOcean { f, radius, out, coords } => {
            let f = f.parse()?;
            let g = ocean_graph(&f, radius)?;
            let p = project_ocean(&g)?;
            write_file(&out, &svg_ocean(&p))?;
            if coords {
                Ok(pretty(&serde_json::to_value(&p).expect("serializable")))
            } else {
                Ok(pretty(&json!({
                    "out": out.display().to_string(),
                    "vertices": p.vertices.len(),
                    "cells": p.cells.len(),
                })))
            }
        }
    }
}

/// Parse `argv` (including the program name) and run the command.
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.render().to_string());
        }
    };
    match dispatch(cli.cmd) {
        Ok(s) => (0, s),
        Err(Failure::Usage(m)) => (2, format!("error: {m}\n")),
        Err(Failure::Domain(e)) => (1, format!("error: {e}\n")),
    }
}
