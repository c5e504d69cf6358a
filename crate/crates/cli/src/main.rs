use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use laginv::digest::sha256_hex;
use laginv::forms::{self, FormField, Tolerances};
use laginv::io::{self, FormFile, MeshFile, PathFile, SphereMapFile};
use laginv::mesh::{standard_fixture, FixtureKind, SurfaceMesh};
use laginv::suspension::{build_suspension, homology_profile, HomologyProfile};
use laginv::{classifier, lambda, Error, Result};
use serde::Serialize;
use serde_json::{json, Value};

const SCHEMA_VERSION: u32 = 1;

/// Integer invariants of discretized Lagrangian surfaces.
#[derive(Debug, Parser)]
#[command(name = "laginv", version)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Debug, Args)]
struct Tol {
    /// Antisymmetry tolerance for form matrices.
    #[arg(long, default_value_t = 1e-12)]
    tol_antisym: f64,
    /// Tolerance on the vanishing base block.
    #[arg(long, default_value_t = 1e-12)]
    tol_lagrangian: f64,
}

impl Tol {
    fn get(&self) -> Tolerances {
        Tolerances { antisym: self.tol_antisym, lagrangian: self.tol_lagrangian }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a mesh file and print its statistics.
    Validate {
        #[arg(long)]
        mesh: PathBuf,
    },
    /// λ(L, ω′, ω), or the absolute torus invariant when --omega-prime is omitted.
    Lambda {
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long)]
        omega_prime: Option<PathBuf>,
        #[arg(long)]
        omega: PathBuf,
        #[command(flatten)]
        tol: Tol,
    },
    /// Write a form field realizing a winding vector.
    Realize {
        #[arg(long)]
        mesh: PathBuf,
        /// Comma-separated integers, one per basis cycle.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        winding: Vec<i64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Integer homology of the identified double cone over the mesh.
    SuspensionHomology {
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long, default_value_t = 3)]
        time_steps: usize,
    },
    /// Classify a map from the double cone to the sphere.
    Classify {
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// n-invariant of an isotopy path.
    NInvariant {
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long)]
        path: PathBuf,
        #[command(flatten)]
        tol: Tol,
    },
    /// Write a standard mesh fixture.
    Fixture {
        #[arg(long, value_parser = parse_kind)]
        kind: FixtureKind,
        /// Edge segments per quarter turn.
        #[arg(long)]
        resolution: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_kind(s: &str) -> std::result::Result<FixtureKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Lambda { .. } => "lambda",
            Command::Realize { .. } => "realize",
            Command::SuspensionHomology { .. } => "suspension-homology",
            Command::Classify { .. } => "classify",
            Command::NInvariant { .. } => "n-invariant",
            Command::Fixture { .. } => "fixture",
        }
    }
}

/// Input files read so far, keyed by flag name, with their SHA-256.
#[derive(Default)]
struct Inputs(BTreeMap<String, String>);

impl Inputs {
    fn read<T: serde::de::DeserializeOwned>(&mut self, name: &str, path: &Path) -> Result<T> {
        let bytes = io::read_bytes(path)?;
        self.0.insert(name.to_string(), sha256_hex(&bytes));
        io::parse(&bytes)
    }

    fn mesh(&mut self, path: &Path) -> Result<SurfaceMesh> {
        io::mesh_from_file(&self.read::<MeshFile>("mesh", path)?)
    }

    fn form(&mut self, name: &str, mesh: &SurfaceMesh, path: &Path, tol: Tolerances) -> Result<FormField> {
        io::form_from_file(mesh, &self.read::<FormFile>(name, path)?, tol)
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<String> {
    let text = io::to_json(value);
    io::write_bytes(path, text.as_bytes())?;
    Ok(sha256_hex(text.as_bytes()))
}

#[derive(Serialize)]
struct SuspensionSummary {
    time_steps: usize,
    vertices: usize,
    edges: usize,
    faces: usize,
    tetrahedra: usize,
    euler_characteristic: i64,
    profile: HomologyProfile,
}

fn run(command: &Command, inputs: &mut Inputs) -> Result<Value> {
    let value = match command {
        Command::Validate { mesh } => {
            let m = inputs.mesh(mesh)?;
            json!({
                "statistics": m.statistics(),
                "euler_characteristic": m.euler_characteristic(),
                "frame_source": m.frame_source().as_str(),
            })
        }
        Command::Lambda { mesh, omega_prime, omega, tol } => {
            let m = inputs.mesh(mesh)?;
            let w = inputs.form("omega", &m, omega, tol.get())?;
            let report = match omega_prime {
                Some(p) => {
                    let w1 = inputs.form("omega_prime", &m, p, tol.get())?;
                    lambda::lambda(&m, &w1, &w)?
                }
                None => lambda::lambda_absolute_torus(&m, &w)?,
            };
            serde_json::to_value(report).expect("serializable")
        }
        Command::Realize { mesh, winding, out } => {
            let m = inputs.mesh(mesh)?;
            let field = lambda::realization(&m, winding)?;
            let digest = write_json(out, &io::form_to_file(&field))?;
            let check = lambda::lambda(&m, &field, &forms::canonical_field(&m))?;
            json!({ "winding": winding, "lambda": check.lambda, "output_sha256": digest })
        }
        Command::SuspensionHomology { mesh, time_steps } => {
            let m = inputs.mesh(mesh)?;
            let x = build_suspension(&m, *time_steps)?;
            let summary = SuspensionSummary {
                time_steps: *time_steps,
                vertices: x.vertex_count(),
                edges: x.cells(1).len(),
                faces: x.cells(2).len(),
                tetrahedra: x.cells(3).len(),
                euler_characteristic: x.euler_characteristic(),
                profile: homology_profile(&x),
            };
            serde_json::to_value(summary).expect("serializable")
        }
        Command::Classify { mesh, map } => {
            let m = inputs.mesh(mesh)?;
            let (x, f) = io::sphere_map_from_file(&m, &inputs.read::<SphereMapFile>("map", map)?)?;
            serde_json::to_value(classifier::classify_on_mesh(&m, &x, &f)?).expect("serializable")
        }
        Command::NInvariant { mesh, path, tol } => {
            let m = inputs.mesh(mesh)?;
            let p = io::path_from_file(&m, &inputs.read::<PathFile>("path", path)?, tol.get())?;
            serde_json::to_value(classifier::n_invariant(&m, &p)?).expect("serializable")
        }
        Command::Fixture { kind, resolution, out } => {
            let m = standard_fixture(*kind, *resolution)?;
            let digest = write_json(out, &io::mesh_to_file(&m))?;
            json!({ "statistics": m.statistics(), "output_sha256": digest })
        }
    };
    Ok(value)
}

/// Variant name of an error, e.g. `NonManifold`.
fn error_kind(e: &Error) -> String {
    let debug = format!("{e:?}");
    debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Format::Json = cli.format;
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let outcome = run(&cli.command, &mut inputs);
    let mut report = json!({
        "schema_version": SCHEMA_VERSION,
        "command": cli.command.name(),
        "tool_version": env!("CARGO_PKG_VERSION"),
        "inputs": inputs.0,
    });
    let code = match outcome {
        Ok(result) => {
            report["result"] = result;
            0
        }
        Err(e) => {
            eprintln!("laginv: {e}");
            report["error"] = json!({ "kind": error_kind(&e), "message": e.to_string(), "exit_code": e.exit_code() });
            e.exit_code()
        }
    };
    report["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    ExitCode::from(code as u8)
}
