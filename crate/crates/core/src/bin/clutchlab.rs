//! Command-line surface over the clutching-map library. Every subcommand
//! reads and writes the JSON document formats and prints one canonical
//! JSON report to stdout. Exit codes: 0 success, 1 domain invalidity,
//! 2 I/O or parse failure, 3 internal numerical failure.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use clutchlab_core::bundle::ValidationReport;
use clutchlab_core::error::Error;
use clutchlab_core::io::{self, Workspace};
use clutchlab_core::{clutch, extensions, fixtures, group, homotopy, relations, rep, Tol};

#[derive(Parser)]
#[command(
    name = "clutchlab",
    about = "Equivariant pointwise clutching maps over finite sets",
    version
)]
struct Cli {
    /// Seed for every randomized construction.
    #[arg(long, global = true, env = "CLUTCHLAB_SEED", default_value_t = 0)]
    seed: u64,

    /// Relative Frobenius tolerance for matrix identities.
    #[arg(long, global = true, default_value_t = 1e-8)]
    eps_mat: f64,

    /// Tolerance for character comparisons and integrality.
    #[arg(long, global = true, default_value_t = 1e-6)]
    eps_char: f64,

    /// Smallest singular value still treated as invertible.
    #[arg(long, global = true, default_value_t = 1e-8)]
    eps_sing: f64,

    /// Worker threads for per-extension construction.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Group,
    Action,
    Bundle,
    Clutch,
}

#[derive(Subcommand)]
enum Command {
    /// Validate documents against their structural and numeric invariants.
    Validate {
        #[arg(long, value_enum)]
        kind: Kind,
        paths: Vec<PathBuf>,
    },
    /// Enumerate the representation extensions of a bundle.
    Extensions { bundle: PathBuf },
    /// Path components of the space of equivariant clutching maps, with a
    /// representative map per component.
    Pi0 {
        bundle: PathBuf,
        /// Write each representative as a clutch file into this directory.
        #[arg(long)]
        reps_out: Option<PathBuf>,
    },
    /// Fundamental group of one component, by extension index.
    Pi1 {
        bundle: PathBuf,
        #[arg(long)]
        extension_index: usize,
    },
    /// Glue a clutching map into a representation at a basepoint.
    Glue {
        clutch: PathBuf,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
    },
    /// The equivariant fiberwise isomorphism onto the glued fiber.
    QuotientMap {
        clutch: PathBuf,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
    },
    /// Build the clutching map determined by a fiberwise isomorphism.
    ClutchFromIso { fiso: PathBuf },
    /// Average two equivariant maps into an intertwiner of their glued
    /// representations.
    Average {
        clutch0: PathBuf,
        clutch: PathBuf,
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
    },
    /// Smallest equivariant equivalence relation containing a relation.
    Closure { action: PathBuf, relation: PathBuf },
    /// Whether evaluation on a relation determines every equivariant map.
    Determines { action: PathBuf, relation: PathBuf },
    /// Values of a clutching map on the pairs of a relation.
    Evaluate { clutch: PathBuf, relation: PathBuf },
    /// Rebuild a clutching map from values on a determining relation.
    Reconstruct { bundle: PathBuf, data: PathBuf },
    /// Restrict an equivariant clutching map to a subset of the base.
    Restrict {
        clutch: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        points: Vec<usize>,
    },
    /// List built-in fixtures, or write one to disk.
    Catalog {
        name: Option<String>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) | Error::Json(_) => 2,
        Error::IntertwinerRetries { .. }
        | Error::CharacterTableDegenerate { .. }
        | Error::Overflow
        | Error::Internal(_) => 3,
        _ => 1,
    }
}

fn main() {
    let cli = Cli::parse();
    let tol = Tol {
        eps_mat: cli.eps_mat,
        eps_char: cli.eps_char,
        eps_sing: cli.eps_sing,
    };
    let (report, code) = match run(&cli, tol) {
        Ok((value, code)) => (value, code),
        Err(err) => (json!({ "error": err.to_string() }), exit_code(&err)),
    };
    match io::to_canonical_json(&report) {
        Ok(text) => print!("{text}"),
        Err(err) => {
            eprintln!("failed to serialize report: {err}");
            std::process::exit(3);
        }
    }
    std::process::exit(code);
}

fn run(cli: &Cli, tol: Tol) -> clutchlab_core::Result<(Value, i32)> {
    let mut ws = Workspace::new(tol, cli.seed)?;
    match &cli.command {
        Command::Validate { kind, paths } => cmd_validate(&mut ws, *kind, paths),
        Command::Extensions { bundle } => cmd_extensions(&mut ws, bundle),
        Command::Pi0 { bundle, reps_out } => {
            cmd_pi0(&mut ws, bundle, reps_out.as_deref(), cli.jobs)
        }
        Command::Pi1 {
            bundle,
            extension_index,
        } => cmd_pi1(&mut ws, bundle, *extension_index),
        Command::Glue { clutch, basepoint } => cmd_glue(&mut ws, clutch, *basepoint),
        Command::QuotientMap { clutch, basepoint } => {
            cmd_quotient_map(&mut ws, clutch, *basepoint)
        }
        Command::ClutchFromIso { fiso } => cmd_clutch_from_iso(&mut ws, fiso),
        Command::Average {
            clutch0,
            clutch,
            basepoint,
        } => cmd_average(&mut ws, clutch0, clutch, *basepoint),
        Command::Closure { action, relation } => cmd_closure(&mut ws, action, relation),
        Command::Determines { action, relation } => cmd_determines(&mut ws, action, relation),
        Command::Evaluate { clutch, relation } => cmd_evaluate(&mut ws, clutch, relation),
        Command::Reconstruct { bundle, data } => cmd_reconstruct(&mut ws, bundle, data),
        Command::Restrict { clutch, points } => cmd_restrict(&mut ws, clutch, points),
        Command::Catalog { name, out } => cmd_catalog(name.as_deref(), out),
    }
}

fn report_to_value(report: &ValidationReport) -> Value {
    serde_json::to_value(report).expect("reports serialize")
}

fn cmd_validate(
    ws: &mut Workspace,
    kind: Kind,
    paths: &[PathBuf],
) -> clutchlab_core::Result<(Value, i32)> {
    let mut entries = Vec::new();
    let mut worst = 0i32;
    for path in paths {
        let outcome: Result<ValidationReport, Error> = match kind {
            Kind::Group => ws.load_group(path).map(|_| ValidationReport::default()),
            Kind::Action => ws.load_action(path).map(|_| ValidationReport::default()),
            Kind::Bundle => ws.load_bundle(path).map(|b| b.validate(&ws.tol)),
            Kind::Clutch => ws.load_clutch(path).map(|c| c.validate(&ws.tol)),
        };
        let entry = match outcome {
            Ok(report) => {
                if !report.is_valid() {
                    worst = worst.max(1);
                }
                json!({
                    "path": path.display().to_string(),
                    "valid": report.is_valid(),
                    "violations": report_to_value(&report)["violations"],
                })
            }
            Err(err) => {
                let code = exit_code(&err);
                if code >= 2 {
                    return Err(err);
                }
                worst = worst.max(code);
                json!({
                    "path": path.display().to_string(),
                    "valid": false,
                    "violations": [{ "rule": "structure", "location": "", "residual": null,
                                     "message": err.to_string() }],
                })
            }
        };
        entries.push(entry);
    }
    Ok((json!({ "reports": entries, "valid": worst == 0 }), worst))
}

fn extensions_value(
    classes: &[extensions::ExtensionClass],
    table: &rep::CharacterTable,
) -> Value {
    let list: Vec<Value> = classes
        .iter()
        .map(|c| {
            let chi: Vec<(f64, f64)> = c
                .character(table)
                .iter()
                .map(|v| (v.re, v.im))
                .collect();
            json!({
                "multiplicities": c.mults,
                "dim": c.dim(table),
                "character": chi,
            })
        })
        .collect();
    json!({ "extensions": list, "count": classes.len() })
}

fn cmd_extensions(ws: &mut Workspace, bundle: &Path) -> clutchlab_core::Result<(Value, i32)> {
    let bundle = ws.load_bundle(bundle)?;
    let tol = ws.tol;
    let classes = extensions::enumerate_extensions(&bundle, &tol)?;
    let table = rep::character_table(&bundle.action.group)?;
    Ok((extensions_value(&classes, &table), 0))
}

fn cmd_pi0(
    ws: &mut Workspace,
    bundle: &Path,
    reps_out: Option<&Path>,
    jobs: usize,
) -> clutchlab_core::Result<(Value, i32)> {
    let bundle = ws.load_bundle(bundle)?;
    let tol = ws.tol;
    let seed = ws.seed;
    let table = rep::character_table(&bundle.action.group)?;
    let classes = extensions::enumerate_extensions(&bundle, &tol)?;
    let irreps = rep::irreducibles(&bundle.action.group, &table)?;

    let build = |(ci, class): (usize, &extensions::ExtensionClass)| {
        let w = class.realize(&irreps)?;
        let psi = extensions::representative_for_rep(
            &bundle,
            &w,
            rep::derive_seed(seed, ci as u64),
            &tol,
        )?;
        let glued = extensions::gl(&psi, &tol)?;
        if glued != *class {
            return Err(Error::Internal(
                "representative glued to the wrong class".into(),
            ));
        }
        Ok(io::clutch_to_doc(&psi))
    };
    let reps: Vec<io::ClutchDoc> = if jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?;
        pool.install(|| {
            use rayon::prelude::*;
            classes
                .par_iter()
                .enumerate()
                .map(build)
                .collect::<clutchlab_core::Result<Vec<_>>>()
        })?
    } else {
        classes
            .iter()
            .enumerate()
            .map(build)
            .collect::<clutchlab_core::Result<Vec<_>>>()?
    };

    let mut value = extensions_value(&classes, &table);
    if let Some(dir) = reps_out {
        std::fs::create_dir_all(dir)?;
        let mut files = Vec::new();
        for (ci, doc) in reps.iter().enumerate() {
            let path = dir.join(format!("representative_{ci}.json"));
            std::fs::write(&path, io::to_canonical_json(doc)?)?;
            files.push(path.display().to_string());
        }
        value["representative_files"] = json!(files);
    } else {
        value["representatives"] = serde_json::to_value(&reps)?;
    }
    Ok((value, 0))
}

fn cmd_pi1(
    ws: &mut Workspace,
    bundle: &Path,
    extension_index: usize,
) -> clutchlab_core::Result<(Value, i32)> {
    let bundle = ws.load_bundle(bundle)?;
    let tol = ws.tol;
    let classes = extensions::enumerate_extensions(&bundle, &tol)?;
    let Some(class) = classes.get(extension_index) else {
        return Err(Error::InvalidBundle(format!(
            "extension index {extension_index} out of range (count {})",
            classes.len()
        )));
    };
    let analysis = homotopy::pi1_analysis(&bundle, class, &tol)?;
    let certificate = homotopy::simply_connected_certificate(&bundle, class, &tol)?;
    Ok((
        json!({
            "pi1": {
                "free_rank": analysis.group.free_rank,
                "torsion": analysis.group.torsion,
            },
            "condition_I": analysis.condition_i,
            "matrix": analysis.matrix,
            "derivation": if analysis.transitive { "paper-transitive" } else { "derived-multi-orbit" },
            "certified_trivial": certificate == homotopy::Pi1Certificate::CertifiedTrivial,
            "extension": class.mults,
        }),
        0,
    ))
}

fn cmd_glue(
    ws: &mut Workspace,
    clutch: &Path,
    basepoint: usize,
) -> clutchlab_core::Result<(Value, i32)> {
    let psi = ws.load_clutch(clutch)?;
    let tol = ws.tol;
    let glued = psi.glued_representation(basepoint, &tol)?;
    let table = rep::character_table(&glued.rep.group)?;
    let mults = table.multiplicities(&glued.rep.character(), &tol)?;
    let chi: Vec<(f64, f64)> = glued
        .rep
        .character()
        .values
        .iter()
        .map(|v| (v.re, v.im))
        .collect();
    Ok((
        json!({
            "basepoint": basepoint,
            "dim": glued.rep.dim,
            "character": chi,
            "multiplicities": mults,
            "rep": serde_json::to_value(io::rep_to_doc(&glued.rep))?,
        }),
        0,
    ))
}

fn cmd_quotient_map(
    ws: &mut Workspace,
    clutch: &Path,
    basepoint: usize,
) -> clutchlab_core::Result<(Value, i32)> {
    let psi = ws.load_clutch(clutch)?;
    let tol = ws.tol;
    let p = psi.quotient_map(basepoint, &tol)?;
    let maps: std::collections::BTreeMap<String, io::MatrixData> = p
        .maps
        .iter()
        .enumerate()
        .map(|(x, m)| (x.to_string(), io::matrix_to_data(m)))
        .collect();
    Ok((json!({ "basepoint": basepoint, "maps": maps }), 0))
}

fn cmd_clutch_from_iso(ws: &mut Workspace, fiso: &Path) -> clutchlab_core::Result<(Value, i32)> {
    let (bundle, w, p) = ws.load_fiso(fiso)?;
    let tol = ws.tol;
    let psi = clutch::clutch_from_fiberwise_iso(bundle, &w, &p, &tol)?;
    Ok((serde_json::to_value(io::clutch_to_doc(&psi))?, 0))
}

fn cmd_average(
    ws: &mut Workspace,
    clutch0: &Path,
    clutch: &Path,
    basepoint: usize,
) -> clutchlab_core::Result<(Value, i32)> {
    let psi0 = ws.load_clutch(clutch0)?;
    let psi = ws.load_clutch(clutch)?;
    let tol = ws.tol;
    let avg = clutch::averaging(&psi0, &psi, basepoint, &tol)?;
    let invertible = avg.is_invertible(&tol);
    Ok((
        json!({
            "alpha": io::matrix_to_data(&avg.alpha),
            "sigma_min": avg.sigma_min,
            "invertible": invertible,
            "intertwining_residual": avg.intertwining_residual,
        }),
        if invertible { 0 } else { 1 },
    ))
}

fn cmd_closure(
    ws: &mut Workspace,
    action: &Path,
    relation: &Path,
) -> clutchlab_core::Result<(Value, i32)> {
    let action = ws.load_action(action)?;
    let rel = ws.load_relation(relation)?;
    let closure = relations::equivariant_closure(&action, &rel);
    Ok((serde_json::to_value(io::relation_to_doc(&closure))?, 0))
}

fn cmd_determines(
    ws: &mut Workspace,
    action: &Path,
    relation: &Path,
) -> clutchlab_core::Result<(Value, i32)> {
    let action = ws.load_action(action)?;
    let rel = ws.load_relation(relation)?;
    let closure = relations::equivariant_closure(&action, &rel);
    Ok((
        json!({
            "determines": closure.is_full(),
            "closure_size": closure.len(),
        }),
        0,
    ))
}

fn cmd_evaluate(
    ws: &mut Workspace,
    clutch: &Path,
    relation: &Path,
) -> clutchlab_core::Result<(Value, i32)> {
    let psi = ws.load_clutch(clutch)?;
    let rel = ws.load_relation(relation)?;
    let data = relations::evaluate(&psi, &rel)?;
    Ok((serde_json::to_value(io::partial_data_to_doc(&data))?, 0))
}

fn cmd_reconstruct(
    ws: &mut Workspace,
    bundle: &Path,
    data: &Path,
) -> clutchlab_core::Result<(Value, i32)> {
    let bundle = ws.load_bundle(bundle)?;
    let data = ws.load_partial_data(data)?;
    let tol = ws.tol;
    let psi = relations::reconstruct(&bundle, &data, &tol)?;
    Ok((serde_json::to_value(io::clutch_to_doc(&psi))?, 0))
}

fn cmd_restrict(
    ws: &mut Workspace,
    clutch: &Path,
    points: &[usize],
) -> clutchlab_core::Result<(Value, i32)> {
    let psi = ws.load_clutch(clutch)?;
    let tol = ws.tol;
    let restricted = relations::restrict_clutch(&psi, points, &tol)?;

    // the glued representation of the restriction matches the restricted
    // glued representation, as characters over the preserving subgroup
    let glued = psi.glued_representation(0, &tol)?;
    let sub = psi.bundle.preserving_subgroup(points)?;
    let res = glued.rep.restrict(&sub)?;
    let glued_small = restricted.glued_representation(0, &tol)?;
    let chi_res = res.character();
    let chi_small = glued_small.rep.character();
    let residual = chi_res
        .values
        .iter()
        .zip(&chi_small.values)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0f64, f64::max);
    Ok((
        json!({
            "clutch": serde_json::to_value(io::clutch_to_doc(&restricted))?,
            "character_identity": {
                "residual": residual,
                "holds": residual <= tol.eps_char,
            },
        }),
        if residual <= tol.eps_char { 0 } else { 1 },
    ))
}

struct Fixture {
    name: &'static str,
    description: &'static str,
}

const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "swap",
        description: "Z2 swapping two points, rank-one trivial fibers, plus both equivariant clutch maps",
    },
    Fixture {
        name: "s3-rotation",
        description: "order-6 dihedral group on three points, rank-one trivial fibers",
    },
    Fixture {
        name: "z4-two-point",
        description: "Z4 on two points through its order-two quotient, sign fibers",
    },
    Fixture {
        name: "tetra",
        description: "order-24 tetrahedral isometry group on twelve vertex preimages, rank-two pullback",
    },
    Fixture {
        name: "tetra-vertex",
        description: "the tetra bundle restricted to the three preimages of one vertex",
    },
    Fixture {
        name: "d2-four",
        description: "D2 on four points with the two-pair determining relation",
    },
    Fixture {
        name: "empty-ext",
        description: "trivial Z2 action with incompatible fibers: no extension exists",
    },
];

fn cmd_catalog(name: Option<&str>, out: &Path) -> clutchlab_core::Result<(Value, i32)> {
    let Some(name) = name else {
        let list: Vec<Value> = FIXTURES
            .iter()
            .map(|f| json!({ "name": f.name, "description": f.description }))
            .collect();
        return Ok((json!({ "fixtures": list }), 0));
    };
    let mut files: Vec<(String, Value)> = Vec::new();
    match name {
        "swap" => {
            let bundle = fixtures::swap_bundle();
            files.push((
                "swap_bundle.json".into(),
                serde_json::to_value(io::bundle_to_doc(&bundle))?,
            ));
            for (label, z) in [("plus", 1.0), ("minus", -1.0)] {
                let psi = fixtures::swap_clutch(clutchlab_core::cmatrix::C64::new(z, 0.0));
                files.push((
                    format!("swap_clutch_{label}.json"),
                    serde_json::to_value(io::clutch_to_doc(&psi))?,
                ));
            }
        }
        "s3-rotation" => {
            let bundle = fixtures::s3_rotation_bundle();
            files.push((
                "s3_bundle.json".into(),
                serde_json::to_value(io::bundle_to_doc(&bundle))?,
            ));
        }
        "z4-two-point" => {
            let bundle = fixtures::z4_two_point_bundle();
            files.push((
                "z4_bundle.json".into(),
                serde_json::to_value(io::bundle_to_doc(&bundle))?,
            ));
        }
        "tetra" => {
            let (g, action) = group::BuiltinGroup::Tetra.build()?;
            files.push((
                "tetra_group.json".into(),
                serde_json::to_value(io::group_to_doc(&g))?,
            ));
            files.push((
                "tetra_action.json".into(),
                serde_json::to_value(io::action_to_doc(&action))?,
            ));
            let bundle = fixtures::tetra_full_bundle();
            files.push((
                "tetra_bundle.json".into(),
                serde_json::to_value(io::bundle_to_doc(&bundle))?,
            ));
        }
        "tetra-vertex" => {
            let bundle = fixtures::tetra_vertex_bundle();
            files.push((
                "tetra_vertex_bundle.json".into(),
                serde_json::to_value(io::bundle_to_doc(&bundle))?,
            ));
        }
        "d2-four" => {
            let action = fixtures::d2_on_four_points();
            files.push((
                "d2_action.json".into(),
                serde_json::to_value(io::action_to_doc(&action))?,
            ));
            let relation =
                relations::BinaryRelation::new(4, [(0usize, 1usize), (0, 3)])?;
            files.push((
                "d2_relation.json".into(),
                serde_json::to_value(io::relation_to_doc(&relation))?,
            ));
            files.push((
                "d2_bundle.json".into(),
                serde_json::to_value(io::bundle_to_doc(&fixtures::d2_four_point_bundle()))?,
            ));
        }
        "empty-ext" => {
            files.push((
                "empty_ext_bundle.json".into(),
                serde_json::to_value(io::bundle_to_doc(&fixtures::empty_ext_bundle()))?,
            ));
        }
        other => return Err(Error::UnknownFixture(other.to_string())),
    }
    std::fs::create_dir_all(out)?;
    let mut written = Vec::new();
    for (file, value) in &files {
        let path = out.join(file);
        std::fs::write(&path, io::to_canonical_json(value)?)?;
        written.push(path.display().to_string());
    }
    Ok((json!({ "name": name, "files": written }), 0))
}
