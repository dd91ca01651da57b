use std::thread;

use auxetic_core::geom::{classify_conic, fit_conic, is_pseudotriangle, ConicClass};
use auxetic_core::quad::*;
use auxetic_core::two_orbit::*;
use auxetic_core::Error;
use serde_json::{json, Value};

use crate::args::{ConicArgs, FrameworkArgs, QuadArgs};
use crate::error::Failure;
use crate::report::{config_columns, fmt_f64, Cell, Format, Report, Table};
use crate::spec_file::{is_quad_encoding, read_spec, SpecFile};

fn shape_cells(quad: Option<&Quadrilateral>) -> [Cell; 2] {
    let Some(q) = quad else { return [Cell::Empty, Cell::Empty] };
    let pseudo = is_pseudotriangle(&q.vertices()).map_or(Cell::Empty, Cell::Bool);
    let conic = five_point_conic(q).map_or(Cell::Empty, |(_, c)| Cell::Text(c.name().into()));
    [pseudo, conic]
}

fn config_cells(c: &LatticeConfig) -> Vec<Cell> {
    c.q.iter().chain(c.omega.upper()).map(|&x| Cell::Num(x)).collect()
}

fn path_header(d: usize, branch: bool) -> Vec<String> {
    let mut h = Vec::new();
    if branch {
        h.push("branch".to_string());
    }
    h.push("tau".into());
    h.extend(config_columns(d));
    h.extend(["minEig", "area", "pseudo", "conic"].map(String::from));
    h
}

struct Traced {
    branch: i32,
    path: DeformationPath,
    intervals: Vec<AuxeticInterval>,
}

/// Mirror images are dropped: branch `-1` of a two-loop linkage reflects
/// branch `+1`, and a single loop maps to itself under `τ ↦ τ + 1/2`.
fn representative(class: GrashofClass, branch: i32, iv: &AuxeticInterval) -> bool {
    match class {
        GrashofClass::TwoLoops => branch == 1,
        _ => iv.lo.rem_euclid(1.0) < 0.5,
    }
}

pub fn quad(args: &QuadArgs) -> Result<Report, Failure> {
    let c = &args.common;
    let lengths: [f64; 4] = args
        .lengths
        .as_slice()
        .try_into()
        .map_err(|_| Failure::Input(format!("--lengths needs 4 values, got {}", args.lengths.len())))?;
    let l = LinkLengths::new(lengths)?;
    let class = grashof_class(&l, c.tol)?;
    if class == GrashofClass::NonGeneric {
        return Err(Error::NonGeneric.into());
    }
    let branches: &[i32] = if class == GrashofClass::TwoLoops { &[1, -1] } else { &[1] };
    let traced: Vec<Result<Traced, Error>> = thread::scope(|s| {
        let handles: Vec<_> = branches
            .iter()
            .map(|&b| {
                s.spawn(move || {
                    let path = trace_deformation(&l, b, c.samples)?;
                    let intervals = auxetic_intervals(&path, c.tol)?;
                    Ok(Traced { branch: b, path, intervals })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("branch worker panicked")).collect()
    });
    let traced = traced.into_iter().collect::<Result<Vec<_>, _>>()?;

    let mut path_table = Table::new(&path_header(2, true));
    for t in &traced {
        for (i, (tau, q)) in t.path.params.iter().zip(&t.path.quads).enumerate() {
            let mut row = vec![Cell::Int(t.branch as i64), Cell::Num(*tau)];
            match lattice_config_from_quad(q) {
                Ok(cfg) => row.extend(config_cells(&cfg)),
                Err(_) => row.extend(std::iter::repeat_n(Cell::Empty, 5)),
            }
            row.push(Cell::opt(gram_velocity(&t.path, i).ok().map(|v| v.eigenvalues()[0])));
            row.push(Cell::opt(unit_cell_area(q).ok()));
            row.extend(shape_cells(Some(q)));
            path_table.push(row);
        }
    }

    let mut iv_table = Table::new(&["branch", "lo", "hi", "sign", "strict"]);
    for t in &traced {
        for iv in t.intervals.iter().filter(|iv| representative(class, t.branch, iv)) {
            iv_table.push(vec![
                Cell::Int(t.branch as i64),
                Cell::Num(iv.lo),
                Cell::Num(iv.hi),
                Cell::Int(iv.sign as i64),
                Cell::Bool(iv.strict_interior),
            ]);
        }
    }

    let spec = SpecFile { quad: Some(crate::spec_file::QuadBlock { lengths }), ..empty_spec() };
    let mut r = Report::default();
    r.set("mode", "quad");
    r.set("lengths", lengths.to_vec());
    r.set("class", class.name());
    r.set("branches", traced.len());
    r.set("samples", c.samples);
    r.set("tol", c.tol);
    r.set("spec_hash", spec.hash());
    r.set("excluded_points", traced[0].path.excluded_params.len());
    r.set("excluded_params", traced[0].path.excluded_params.clone());
    r.set("closed", traced.iter().all(|t| t.path.closed));
    r.set("intervals_per_branch", traced.iter().map(|t| t.intervals.len()).collect::<Vec<_>>());
    r.set("interval_rows", iv_table.rows.len());
    r.set(
        "reflection",
        match class {
            GrashofClass::TwoLoops => "branch -1 at 1 - tau mirrors branch +1 at tau",
            _ => "tau + 1/2 mirrors tau",
        },
    );
    r.table("path", path_table);
    r.table("intervals", iv_table);
    Ok(r)
}

fn empty_spec() -> SpecFile {
    SpecFile { dimension: None, offsets: None, squared_lengths: None, initial_config: None, quad: None }
}

/// A report that should still be written although the command failed.
pub struct Partial {
    pub report: Report,
    pub failure: Failure,
}

pub fn framework(args: &FrameworkArgs) -> Result<Report, Partial> {
    let fail = |failure: Failure| Partial { report: Report::default(), failure };
    let (file, resolved) = read_spec(&args.spec).map_err(fail)?;
    let spec = resolved.spec;
    let c = &args.common;
    let mut r = Report::default();
    r.set("mode", "framework");
    r.set("spec_hash", file.hash());
    r.set("dimension", spec.dim());
    r.set("edges", spec.edge_count());
    r.set("flexibility", spec.flexibility());
    r.set("tol", c.tol);
    let (config, seeded) = match resolved.config {
        Some(cfg) => (cfg, false),
        None => (seed_config(&spec).map_err(|e| fail(e.into()))?, true),
    };
    r.set("seeded", seeded);
    let quad_mode = is_quad_encoding(&spec);

    if spec.flexibility() != 1 {
        return point_report(r, &spec, &config, c.tol).map_err(fail);
    }

    let opts = ContinuationOptions {
        step: args.step,
        max_steps: args.max_steps,
        boundary_tol: args.boundary_tol,
        ..ContinuationOptions::default()
    };
    r.set("step", args.step);
    r.set("max_steps", args.max_steps);
    let (path, failure) = match continue_path(&spec, &config, &opts) {
        Ok(p) => (p, None),
        Err(Error::Continuation(f)) => {
            let reason = f.reason;
            (f.partial, Some(Failure::Numerical(format!("continuation failed: {reason}"))))
        }
        Err(e) => return Err(fail(e.into())),
    };
    let failure = failure.or_else(|| {
        (path.start == PathEnd::MaxSteps || path.end == PathEnd::MaxSteps)
            .then(|| Failure::Numerical(format!("path still open after {} steps per direction", args.max_steps)))
    });

    let d = spec.dim();
    let mut path_table = Table::new(&path_header(d, false));
    let g_len = (d + 1) * (d + 2) / 2;
    let mut g_header = vec!["tau".to_string()];
    for i in 0..=d {
        for j in i..=d {
            g_header.push(format!("g{i}{j}"));
        }
    }
    g_header.extend(["lambda0", "lambda1"].map(String::from));
    let mut g_table = Table::new(&g_header);
    let mut gram_failures = 0usize;
    for (i, cfg) in path.configs.iter().enumerate() {
        let s = path.params[i];
        let mut row = vec![Cell::Num(s)];
        row.extend(config_cells(cfg));
        row.push(Cell::Num(path.omega_velocity(i).eigenvalues()[0]));
        row.push(Cell::Num(cfg.omega.determinant().max(0.0).sqrt()));
        let quad = if quad_mode { quad_from_lattice_config(cfg).ok() } else { None };
        row.extend(shape_cells(quad.as_ref()));
        path_table.push(row);

        let mut g_row = vec![Cell::Num(s)];
        match to_gram_g(&spec, cfg) {
            Ok(g) => {
                g_row.extend(g.g.upper().iter().map(|&x| Cell::Num(x)));
                g_row.push(Cell::Num(g.min_eigenvalue()));
                g_row.push(Cell::Num(g.second_eigenvalue()));
            }
            Err(_) => {
                gram_failures += 1;
                g_row.extend(std::iter::repeat_n(Cell::Empty, g_len + 2));
            }
        }
        g_table.push(g_row);
    }

    let mut iv_table = Table::new(&["lo", "hi", "sign", "strict"]);
    if failure.is_none() {
        match path_auxetic_intervals(&spec, &path, c.tol) {
            Ok(ivs) => {
                for iv in ivs {
                    iv_table.push(vec![
                        Cell::Num(iv.lo),
                        Cell::Num(iv.hi),
                        Cell::Int(iv.sign as i64),
                        Cell::Bool(iv.strict_interior),
                    ]);
                }
            }
            Err(e) => return Err(fail(e.into())),
        }
    }

    let end_name = |e: PathEnd| match e {
        PathEnd::Closed => "closed",
        PathEnd::Boundary => "boundary",
        PathEnd::MaxSteps => "max_steps",
    };
    r.set("samples", path.len());
    r.set("closed", path.closed);
    r.set("start", end_name(path.start));
    r.set("end", end_name(path.end));
    r.set("length", path.length);
    r.set("singular_samples", path.singular_samples.clone());
    r.set("gram_failures", gram_failures);
    r.set("intervals", iv_table.rows.len());
    r.set(
        "verdict",
        match (&failure, path.closed) {
            (Some(_), _) => "failed",
            (None, true) => "closed",
            (None, false) => "boundary",
        },
    );
    if let Some(f) = &failure {
        r.set("failure", f.to_string());
    }
    r.table("path", path_table);
    r.table("intervals", iv_table);
    r.table("gramG", g_table);
    match failure {
        None => Ok(r),
        Some(failure) => Err(Partial { report: r, failure }),
    }
}

/// Rigid or over-flexible specs: a pointwise verdict, no path.
fn point_report(mut r: Report, spec: &FrameworkSpec, config: &LatticeConfig, tol: f64) -> Result<Report, Failure> {
    // No path to project onto, so the point itself has to be a realization.
    let worst = residuals(spec, config)?.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    if worst > 100.0 * residual_tol(spec) {
        return Err(Failure::Input(format!("initial_config misses the edge equations by {worst:e}")));
    }
    let opts = AuxeticTestOptions { tol, ..AuxeticTestOptions::default() };
    let rep = local_auxetic_test(spec, config, &opts)?;
    let tangent = tangent_space(spec, config)?;
    r.set("mode", "point");
    r.set("q", config.q.clone());
    r.set("omega", config.omega.upper().to_vec());
    r.set("status", rep.status.name());
    r.set("score", if rep.score.is_finite() { json!(rep.score) } else { Value::Null });
    r.set("tangent_dim", rep.tangent_dim);
    r.set("singular_point", rep.singular_point);
    r.set("direction", rep.direction.clone().map_or(Value::Null, |d| json!(d)));
    r.set("tangent_basis", tangent.basis.clone());
    let d = spec.dim();
    let mut g_header = vec!["tau".to_string()];
    for i in 0..=d {
        for j in i..=d {
            g_header.push(format!("g{i}{j}"));
        }
    }
    g_header.extend(["lambda0", "lambda1"].map(String::from));
    let mut g_table = Table::new(&g_header);
    if let Ok(g) = to_gram_g(spec, config) {
        let mut row = vec![Cell::Num(0.0)];
        row.extend(g.g.upper().iter().map(|&x| Cell::Num(x)));
        row.push(Cell::Num(g.min_eigenvalue()));
        row.push(Cell::Num(g.second_eigenvalue()));
        g_table.push(row);
    }
    r.table("gramG", g_table);
    Ok(r)
}

fn parse_points(text: &str) -> Result<[[f64; 2]; 5], Failure> {
    let t = text.trim();
    let values: Vec<f64> = if t.starts_with('[') {
        let pts: Vec<[f64; 2]> = serde_json::from_str(t).map_err(|e| Failure::Input(format!("points: {e}")))?;
        pts.into_iter().flatten().collect()
    } else {
        t.split(|ch: char| ch == ',' || ch == ';' || ch.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map_err(|e| Failure::Input(format!("points: {s:?}: {e}"))))
            .collect::<Result<_, _>>()?
    };
    if values.len() != 10 {
        return Err(Failure::Input(format!("expected 5 points (10 numbers), got {} numbers", values.len())));
    }
    Ok(std::array::from_fn(|i| [values[2 * i], values[2 * i + 1]]))
}

/// Returns the line to print.
pub fn conic(args: &ConicArgs) -> Result<String, Failure> {
    let text = match (&args.points, &args.file) {
        (Some(p), _) => p.clone(),
        (None, Some(f)) => std::fs::read_to_string(f).map_err(|e| Failure::Io(format!("{}: {e}", f.display())))?,
        (None, None) => return Err(Failure::Input("give --points or --file".into())),
    };
    let pts = parse_points(&text)?;
    let coeffs = fit_conic(&pts)?;
    let class: ConicClass = classify_conic(&coeffs, args.tol)?;
    let a = coeffs.as_array();
    Ok(match args.format {
        Format::Csv => {
            let names = ["a", "b", "c", "d", "e", "f"];
            let parts: Vec<String> = names.iter().zip(a).map(|(n, x)| format!("{n}={}", fmt_f64(x))).collect();
            format!("{} {}", class.name(), parts.join(" "))
        }
        Format::Json => json!({ "class": class.name(), "coefficients": a.to_vec() }).to_string(),
    })
}
