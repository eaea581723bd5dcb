//! JSON-in/JSON-out command-line front end for the library. Every
//! subcommand reads one JSON document (file path or `-` for stdin),
//! prints one JSON object with `op` and `version` fields, and exits 0 on
//! success, 1 on malformed input, 2 on domain failure.

use std::collections::BTreeMap;
use std::io::Read;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use tropglue::graph::automorphisms;
use tropglue::json::{
    int_vec, matrix_rows, rat_string, stratum_from_indices, JsonComplex, JsonCurve, JsonGraph,
    JsonPolyhedron, JsonRat, JsonRefinement,
};
use tropglue::lattice::{CokernelOrder, IntMatrix, LatticeVector};
use tropglue::moduli::{
    enumerate_assignments, gluing_data, moduli_presentation, solve_points, SolveFailure,
};
use tropglue::poly::{end_projection, tropical_completion, PathStep, RefinementViolation};
use tropglue::{Int, Rat};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "tropglue", version, disable_version_flag = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArg {
    /// Input JSON: a file path, or `-` for stdin.
    #[arg(default_value = "-")]
    input: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check the balancing condition of a tropical graph.
    Balance(InputArg),
    /// First Betti number of a tropical graph.
    Genus(InputArg),
    /// Automorphisms of a tropical graph fixing the labeled ends.
    Autos(InputArg),
    /// Moduli presentation of a combinatorial type.
    Moduli(InputArg),
    /// Gluing constant, genus splittings and gluing choices.
    Glue {
        /// Total genus to split over the vertices.
        #[arg(long)]
        genus: usize,
        #[command(flatten)]
        input: InputArg,
    },
    /// Tropical completion of a polyhedron at a stratum.
    Complete {
        /// Comma-separated indices of the tight inequalities; empty for
        /// the full-interior stratum.
        #[arg(long, value_delimiter = ',', default_value = "")]
        stratum: Vec<String>,
        #[command(flatten)]
        input: InputArg,
    },
    /// Projection of a polyhedron along an unbounded direction.
    End {
        /// Comma-separated integer direction, e.g. `0,2`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        dir: Vec<String>,
        #[command(flatten)]
        input: InputArg,
    },
    /// Continue a direction along a path of gluings of a charted complex.
    #[command(name = "continue")]
    Continue {
        /// JSON array of [chart, gluing] steps, e.g. `[[0,0],[1,1]]`.
        #[arg(long)]
        path: String,
        /// Comma-separated integer direction to continue.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        dir: Vec<String>,
        #[command(flatten)]
        input: InputArg,
    },
    /// Count curves of a combinatorial type through marked points.
    Solve {
        /// JSON map label -> rational point, e.g. `{"m1":["0","0"]}`.
        #[arg(long)]
        points: String,
        /// Optional JSON map label -> edge id; all assignments when absent.
        #[arg(long)]
        assignment: Option<String>,
        #[command(flatten)]
        input: InputArg,
    },
    /// Validate a polyhedral refinement.
    RefineCheck(InputArg),
}

enum Failure {
    /// Exit 1: the input does not parse or violates the schema.
    Malformed(String),
    /// Exit 2: structurally valid input outside the operation's domain.
    Domain(&'static str, String),
}

fn malformed<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Malformed(e.to_string())
}

fn domain<E: std::fmt::Display>(code: &'static str) -> impl Fn(E) -> Failure {
    move |e| Failure::Domain(code, e.to_string())
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(malformed)?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(malformed)
    }
}

fn parse_graph(path: &str) -> Result<tropglue::graph::TropicalGraph, Failure> {
    let text = read_input(path)?;
    let jg: JsonGraph = serde_json::from_str(&text).map_err(malformed)?;
    let g = jg.to_graph().map_err(malformed)?;
    let violations = g.validate();
    if !violations.is_empty() {
        return Err(Failure::Malformed(format!(
            "invalid graph: {}",
            violations
                .iter()
                .map(|v| format!("{v:?}"))
                .collect::<Vec<_>>()
                .join("; ")
        )));
    }
    Ok(g)
}

fn parse_polyhedron(path: &str) -> Result<tropglue::poly::RationalPolyhedron, Failure> {
    let text = read_input(path)?;
    let jp: JsonPolyhedron = serde_json::from_str(&text).map_err(malformed)?;
    jp.to_polyhedron().map_err(malformed)
}

fn parse_direction(parts: &[String]) -> Result<LatticeVector, Failure> {
    let entries = parts
        .iter()
        .map(|s| Int::from_str(s.trim()).map_err(malformed))
        .collect::<Result<Vec<_>, _>>()?;
    if entries.is_empty() {
        return Err(Failure::Malformed("empty direction".to_string()));
    }
    Ok(LatticeVector::new(entries))
}

fn threads() -> Result<usize, Failure> {
    match std::env::var("TROPGLUE_THREADS") {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .map_err(|_| Failure::Malformed(format!("bad TROPGLUE_THREADS value {s:?}")))
            .map(|t| t.max(1)),
        Err(_) => Ok(1),
    }
}

fn run(cmd: &Command) -> Result<Value, Failure> {
    match cmd {
        Command::Balance(input) => {
            let g = parse_graph(&input.input)?;
            let defects = g.balance().map_err(domain("GRAPH"))?;
            if defects.is_empty() {
                Ok(json!({"ok": true}))
            } else {
                let map: BTreeMap<String, Vec<_>> = defects
                    .iter()
                    .map(|(v, d)| (v.clone(), int_vec(d)))
                    .collect();
                Ok(json!({"ok": false, "defects": map}))
            }
        }
        Command::Genus(input) => {
            let g = parse_graph(&input.input)?;
            let genus = g.genus().map_err(domain("GRAPH"))?;
            Ok(json!({"genus": genus}))
        }
        Command::Autos(input) => {
            let g = parse_graph(&input.input)?;
            let autos = automorphisms(&g).map_err(domain("GRAPH"))?;
            let list: Vec<Value> = autos
                .iter()
                .map(|a| {
                    let vertex_map: BTreeMap<&str, &str> = a
                        .vertex_map
                        .iter()
                        .enumerate()
                        .map(|(i, &j)| (g.vertices[i].as_str(), g.vertices[j].as_str()))
                        .collect();
                    let edge_map: BTreeMap<&str, &str> = a
                        .edge_map
                        .iter()
                        .enumerate()
                        .map(|(i, &j)| (g.edges[i].id.as_str(), g.edges[j].id.as_str()))
                        .collect();
                    let reversed: BTreeMap<&str, bool> = a
                        .reversed
                        .iter()
                        .enumerate()
                        .map(|(i, &r)| (g.edges[i].id.as_str(), r))
                        .collect();
                    json!({
                        "vertex_map": vertex_map,
                        "edge_map": edge_map,
                        "reversed": reversed,
                    })
                })
                .collect();
            Ok(json!({"order": autos.len(), "automorphisms": list}))
        }
        Command::Moduli(input) => {
            let g = parse_graph(&input.input)?;
            let p = moduli_presentation(&g).map_err(domain("MODULI"))?;
            let components = match &p.component_count {
                CokernelOrder::Finite(k) => json!(tropglue::json::JsonInt(k.clone())),
                CokernelOrder::Infinite => json!("INFINITE"),
            };
            Ok(json!({
                "dimension": p.dimension,
                "surjective": p.surjective,
                "components": components,
                "kernel": p.kernel.iter().map(int_vec).collect::<Vec<_>>(),
                "positive_cell_nonempty": p.positive_cell_nonempty,
                "matrix": matrix_rows(&p.a),
            }))
        }
        Command::Glue { genus, input } => {
            let g = parse_graph(&input.input)?;
            let d = gluing_data(&g, *genus).map_err(domain("GLUE"))?;
            Ok(json!({
                "k_gamma": rat_string(&d.k_gamma),
                "aut_order": d.aut_order,
                "g_gamma": d.g_gamma,
                "gluing_choices": tropglue::json::JsonInt(d.gluing_choices.clone()),
                "genus_splits": d.genus_splits,
                "degenerate": d.gluing_choices == Int::from(0),
            }))
        }
        Command::Complete { stratum, input } => {
            let p = parse_polyhedron(&input.input)?;
            let tight = stratum
                .iter()
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse::<usize>().map_err(malformed))
                .collect::<Result<Vec<_>, _>>()?;
            let s = stratum_from_indices(tight);
            let out = tropical_completion(&p, &s).map_err(domain("COMPLETE"))?;
            Ok(json!({"polyhedron": JsonPolyhedron::from_polyhedron(&out)}))
        }
        Command::End { dir, input } => {
            let p = parse_polyhedron(&input.input)?;
            let v = parse_direction(dir)?;
            if v.is_zero() {
                // the zero direction names the identity component: the
                // end space is the polyhedron itself
                return Ok(json!({
                    "identity_component": true,
                    "projection": JsonPolyhedron::from_polyhedron(&p),
                    "u": matrix_rows(&IntMatrix::identity(p.ambient_dim())),
                }));
            }
            let (u, out) = end_projection(&p, &v).map_err(domain("END"))?;
            Ok(json!({
                "identity_component": false,
                "projection": JsonPolyhedron::from_polyhedron(&out),
                "u": matrix_rows(&u),
            }))
        }
        Command::Continue { path, dir, input } => {
            let text = read_input(&input.input)?;
            let jc: JsonComplex = serde_json::from_str(&text).map_err(malformed)?;
            let complex = jc.to_complex().map_err(malformed)?;
            complex.validate().map_err(domain("COMPLEX"))?;
            let steps: Vec<(usize, usize)> = serde_json::from_str(path).map_err(malformed)?;
            let steps: Vec<PathStep> = steps
                .iter()
                .map(|&(chart, gluing)| PathStep { chart, gluing })
                .collect();
            let v = parse_direction(dir)?;
            let out = complex
                .continue_direction(&steps, &v)
                .map_err(domain("PATH"))?;
            Ok(json!({"direction": int_vec(&out)}))
        }
        Command::Solve {
            points,
            assignment,
            input,
        } => {
            let g = parse_graph(&input.input)?;
            let points: BTreeMap<String, Vec<JsonRat>> =
                serde_json::from_str(points).map_err(malformed)?;
            let points: BTreeMap<String, Vec<Rat>> = points
                .into_iter()
                .map(|(k, v)| (k, v.into_iter().map(|r| r.0).collect()))
                .collect();
            match assignment {
                Some(a) => {
                    let assignment: BTreeMap<String, String> =
                        serde_json::from_str(a).map_err(malformed)?;
                    let out =
                        solve_points(&g, &assignment, &points).map_err(domain("SOLVE"))?;
                    if let Some(f) = &out.failure {
                        let (code, msg) = match f {
                            SolveFailure::Infeasible => (
                                "OVERDETERMINED_INFEASIBLE",
                                "no rational solution".to_string(),
                            ),
                            SolveFailure::NonPositiveLength { edge, length } => (
                                "NON_POSITIVE_LENGTH",
                                format!("edge {edge} has length {length}"),
                            ),
                            SolveFailure::PositiveDimensional { dim } => (
                                "POSITIVE_DIMENSIONAL",
                                format!("solution space has dimension {dim}"),
                            ),
                        };
                        return Err(Failure::Domain(code, msg));
                    }
                    if out.non_transverse {
                        return Err(Failure::Domain(
                            "NON_TRANSVERSE",
                            "augmented map is not surjective; no multiplicity".to_string(),
                        ));
                    }
                    Ok(json!({"curves": out
                        .curves
                        .iter()
                        .map(|sc| json!({
                            "curve": JsonCurve::from_curve(&sc.curve),
                            "multiplicity": sc.multiplicity.clone().map(tropglue::json::JsonInt),
                        }))
                        .collect::<Vec<_>>()}))
                }
                None => {
                    let report = enumerate_assignments(&g, &points, threads()?)
                        .map_err(domain("SOLVE"))?;
                    if report.positive_dimensional {
                        return Err(Failure::Domain(
                            "POSITIVE_DIMENSIONAL",
                            "unconstrained presentation is positive-dimensional".to_string(),
                        ));
                    }
                    Ok(json!({
                        "total": tropglue::json::JsonInt(report.total.clone()),
                        "non_transverse": report.any_non_transverse,
                        "solutions": report
                            .solutions
                            .iter()
                            .map(|s| json!({
                                "assignment": s.assignment,
                                "curve": JsonCurve::from_curve(&s.curve.curve),
                                "multiplicity": s.curve.multiplicity.clone().map(tropglue::json::JsonInt),
                            }))
                            .collect::<Vec<_>>(),
                    }))
                }
            }
        }
        Command::RefineCheck(input) => {
            let text = read_input(&input.input)?;
            let jr: JsonRefinement = serde_json::from_str(&text).map_err(malformed)?;
            let r = jr.to_refinement().map_err(malformed)?;
            let violations = tropglue::poly::refinement_check(&r);
            if violations.is_empty() {
                Ok(json!({"ok": true}))
            } else {
                Ok(json!({
                    "ok": false,
                    "violations": violations.iter().map(violation_value).collect::<Vec<_>>(),
                }))
            }
        }
    }
}

fn violation_value(v: &RefinementViolation) -> Value {
    match v {
        RefinementViolation::BadAssignment { fine } => {
            json!({"kind": "bad_assignment", "fine": fine})
        }
        RefinementViolation::NotContained { fine, coarse } => {
            json!({"kind": "not_contained", "fine": fine, "coarse": coarse})
        }
        RefinementViolation::CoverGap { coarse } => {
            json!({"kind": "cover_gap", "coarse": coarse})
        }
        RefinementViolation::InteriorOverlap { fine_a, fine_b } => {
            json!({"kind": "interior_overlap", "fine_a": fine_a, "fine_b": fine_b})
        }
    }
}

fn op_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Balance(_) => "balance",
        Command::Genus(_) => "genus",
        Command::Autos(_) => "autos",
        Command::Moduli(_) => "moduli",
        Command::Glue { .. } => "glue",
        Command::Complete { .. } => "complete",
        Command::End { .. } => "end",
        Command::Continue { .. } => "continue",
        Command::Solve { .. } => "solve",
        Command::RefineCheck(_) => "refine-check",
    }
}

fn emit(mut body: Value, op: &str) -> Value {
    let obj = body.as_object_mut().expect("object output");
    obj.insert("op".to_string(), json!(op));
    obj.insert("version".to_string(), json!(VERSION));
    body
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are not errors
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let op = op_name(&cli.command);
    match run(&cli.command) {
        Ok(body) => {
            println!("{}", emit(body, op));
            ExitCode::SUCCESS
        }
        Err(Failure::Malformed(msg)) => {
            let body = emit(json!({"error": {"code": "MALFORMED", "message": msg}}), op);
            println!("{body}");
            ExitCode::from(1)
        }
        Err(Failure::Domain(code, msg)) => {
            let body = emit(json!({"error": {"code": code, "message": msg}}), op);
            println!("{body}");
            ExitCode::from(2)
        }
    }
}
