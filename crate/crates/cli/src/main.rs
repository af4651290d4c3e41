//! `looijenga`: command-line front end for the `looijenga` library.

mod document;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};

use looijenga::corpus;
use looijenga::lattice::{ClassVec, IntMatrix, LatticeIsometry};
use looijenga::pair::{ExceptionalConfiguration, PairModel};
use looijenga::period::{
    marked_period, model_lattice, mutate, phi_y, reconstruct, unmarked_period_with, GmElem,
    PeriodPoint,
};
use looijenga::roots::{default_bound, find_roots, reflection, RootDatum};
use looijenga::torelli::{check_global_torelli, mw_rank, torsor_group, weak_torelli};
use looijenga::toric::Fan2D;

use document::{canonical_json, PairDocument};

#[derive(Parser)]
#[command(
    name = "looijenga",
    version,
    about = "Exact computations with Looijenga pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summary report: ranks, boundary data, Euler number, roots, genericity, N′.
    Analyze {
        file: PathBuf,
        #[arg(long, env = "LOOIJENGA_BOUND")]
        bound: Option<i64>,
    },
    /// Height-bounded roots with their period values, Φ_Y and Δ_Y.
    Roots {
        file: PathBuf,
        #[arg(long, env = "LOOIJENGA_BOUND")]
        bound: Option<i64>,
    },
    /// Marked period point and its restriction to D^⊥.
    Period { file: PathBuf },
    /// Rebuild a pair from a fan, a list of blowup components and a period point.
    Reconstruct {
        #[arg(long)]
        fan: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        phi: PathBuf,
        /// Write the identification with the model lattice here.
        #[arg(long)]
        map_out: Option<PathBuf>,
    },
    /// Decide the Torelli conditions for a lattice map between two pairs.
    Torelli {
        a: PathBuf,
        b: PathBuf,
        /// JSON integer matrix (column j is the image of basis vector j) or "identity".
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        weak: bool,
        #[arg(long, env = "LOOIJENGA_BOUND")]
        bound: Option<i64>,
    },
    /// Re-present a pair through another exceptional configuration.
    Mutate {
        file: PathBuf,
        #[arg(long)]
        config: PathBuf,
        /// Write the lattice map from the new pair to the old one here.
        #[arg(long)]
        map_out: Option<PathBuf>,
    },
    /// Print a built-in example document.
    Examples { name: String },
}

enum Outcome {
    Ok,
    Negative,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load(path: &Path) -> Result<(PairDocument, PairModel)> {
    let doc: PairDocument = read_json(path)?;
    let pair = doc
        .pair()
        .with_context(|| format!("building pair from {}", path.display()))?;
    if let Some(m) = &doc.marking {
        if m.points.len() != pair.n() {
            bail!(
                "marking has {} points, the boundary has {} components",
                m.points.len(),
                pair.n()
            );
        }
    }
    Ok((doc, pair))
}

fn emit(v: &impl serde::Serialize) -> Result<()> {
    print!("{}", canonical_json(v)?);
    Ok(())
}

fn write_matrix(path: &Path, m: &LatticeIsometry) -> Result<()> {
    fs::write(path, canonical_json(&m.matrix)?)
        .with_context(|| format!("writing {}", path.display()))
}

fn labelled(p: &PairModel, vs: &[ClassVec]) -> Vec<Value> {
    vs.iter()
        .map(|v| json!({"class": v, "label": p.pic().label_of(v)}))
        .collect()
}

fn genericity(p: &PairModel, rd: &RootDatum) -> Result<&'static str> {
    if !rd.phi_y.is_empty() {
        return Ok("no");
    }
    for a in &rd.undetermined {
        if phi_y(p, a)?.is_one() {
            return Ok("undetermined");
        }
    }
    Ok("yes")
}

fn analyze(file: &Path, bound: Option<i64>) -> Result<Outcome> {
    let (doc, p) = load(file)?;
    let bound = bound.unwrap_or_else(|| default_bound(p.pic()));
    let rd = find_roots(&p, bound)?;
    let k = p.canonical();
    let mw = mw_rank(&p).ok();
    emit(&json!({
        "name": doc.name,
        "n": p.n(),
        "rank": p.rank(),
        "toric_rank": p.toric_rank(),
        "boundary_squares": p.boundary_squares(),
        "canonical_square": p.pic().square(k),
        "interior_euler": p.interior_euler(),
        "bound": bound,
        "roots": rd.roots.len(),
        "undetermined": rd.undetermined.len(),
        "phi_y": rd.phi_y.len(),
        "delta_y": rd.delta_y.len(),
        "generic": genericity(&p, &rd)?,
        "torsor": torsor_group(&p),
        "mw_rank": mw,
        "ample": p.pic().label_of(&p.certified_ample()?),
    }))?;
    Ok(Outcome::Ok)
}

fn roots(file: &Path, bound: Option<i64>) -> Result<Outcome> {
    let (_, p) = load(file)?;
    let bound = bound.unwrap_or_else(|| default_bound(p.pic()));
    let rd = find_roots(&p, bound)?;
    let mut list = Vec::new();
    for a in &rd.roots {
        list.push(json!({
            "class": a,
            "label": p.pic().label_of(a),
            "height": p.pic().inner(a, &rd.ample0),
            "period": phi_y(&p, a)?,
        }));
    }
    let reflections: Vec<IntMatrix> = rd
        .delta_y
        .iter()
        .map(|a| reflection(p.pic(), a).map(|s| s.matrix))
        .collect::<looijenga::Result<_>>()?;
    emit(&json!({
        "bound": bound,
        "ample0": rd.ample0,
        "roots": list,
        "undetermined": labelled(&p, &rd.undetermined),
        "phi_y": labelled(&p, &rd.phi_y),
        "delta_y": labelled(&p, &rd.delta_y),
        "delta_y_reflections": reflections,
    }))?;
    Ok(Outcome::Ok)
}

fn period(file: &Path) -> Result<Outcome> {
    let (doc, p) = load(file)?;
    let marking = doc.marking_or_standard();
    let phi = marked_period(&p, &marking, None)?;
    let un = unmarked_period_with(&p, &marking)?;
    emit(&json!({
        "marking": marking,
        "marked": phi,
        "unmarked": {
            "basis": labelled(&p, &un.basis),
            "values": un.values,
        },
    }))?;
    Ok(Outcome::Ok)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ComponentsFile {
    List(Vec<usize>),
    Object { components: Vec<usize> },
}

fn cmd_reconstruct(
    fan: &Path,
    config: &Path,
    phi: &Path,
    map_out: Option<&Path>,
) -> Result<Outcome> {
    let fan: Fan2D = read_json(fan)?;
    let components = match read_json::<ComponentsFile>(config)? {
        ComponentsFile::List(c) | ComponentsFile::Object { components: c } => c,
    };
    let lattice = model_lattice(&fan, &components)?;
    let values: BTreeMap<String, GmElem> = read_json(phi)?;
    let point = PeriodPoint::from_label_map(lattice, &values)?;
    let rec = reconstruct(&fan, &components, &point)?;
    if let Some(path) = map_out {
        write_matrix(path, &rec.identification)?;
    }
    emit(&PairDocument::from_pair(None, &rec.pair, Some(rec.marking)))?;
    Ok(Outcome::Ok)
}

fn read_map(path: &Path, p1: &PairModel, p2: &PairModel) -> Result<LatticeIsometry> {
    let v: Value = read_json(path)?;
    if v.as_str() == Some("identity") {
        return Ok(LatticeIsometry::new(
            LatticeIsometry::identity(p1.pic()).matrix,
            p1.pic().clone(),
            p2.pic().clone(),
        )?);
    }
    let m: IntMatrix =
        serde_json::from_value(v).context("map must be an integer matrix or \"identity\"")?;
    if m.len() != p2.rank() || m.iter().any(|r| r.len() != p1.rank()) {
        bail!(
            "map must be a {}x{} matrix (target rank x source rank)",
            p2.rank(),
            p1.rank()
        );
    }
    Ok(LatticeIsometry::new(m, p1.pic().clone(), p2.pic().clone())?)
}

fn torelli(a: &Path, b: &Path, map: &Path, weak: bool, bound: Option<i64>) -> Result<Outcome> {
    let (_, p1) = load(a)?;
    let (_, p2) = load(b)?;
    if p1.rank() != p2.rank() {
        bail!("lattice ranks differ: {} and {}", p1.rank(), p2.rank());
    }
    let mu = read_map(map, &p1, &p2)?;
    let bound = bound.unwrap_or_else(|| default_bound(p1.pic()).max(default_bound(p2.pic())));
    if weak {
        let w = weak_torelli(&p1, &p2, &mu, bound)?;
        let found = w.g.is_some();
        emit(&json!({"bound": bound, "weak": w}))?;
        return Ok(if found {
            Outcome::Ok
        } else {
            Outcome::Negative
        });
    }
    let v = check_global_torelli(&p1, &p2, &mu, bound)?;
    emit(&v)?;
    Ok(if v.is_yes() {
        Outcome::Ok
    } else {
        Outcome::Negative
    })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ConfigFile {
    Classes(Vec<ClassVec>),
    Full(ExceptionalConfiguration),
}

fn cmd_mutate(file: &Path, config: &Path, map_out: Option<&Path>) -> Result<Outcome> {
    let (doc, p) = load(file)?;
    let cfg = match read_json::<ConfigFile>(config)? {
        ConfigFile::Classes(c) => ExceptionalConfiguration::from_classes(&p, c)?,
        ConfigFile::Full(c) => c,
    };
    let m = mutate(&p, &doc.marking_or_standard(), &cfg)?;
    if let Some(path) = map_out {
        write_matrix(path, &m.theta)?;
    }
    emit(&PairDocument::from_pair(
        doc.name.clone(),
        &m.pair,
        Some(m.marking),
    ))?;
    Ok(Outcome::Ok)
}

fn examples(name: &str) -> Result<Outcome> {
    let p = corpus::example(name)?;
    emit(&PairDocument::from_pair(Some(name.to_string()), &p, None))?;
    Ok(Outcome::Ok)
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Analyze { file, bound } => analyze(&file, bound),
        Command::Roots { file, bound } => roots(&file, bound),
        Command::Period { file } => period(&file),
        Command::Reconstruct {
            fan,
            config,
            phi,
            map_out,
        } => cmd_reconstruct(&fan, &config, &phi, map_out.as_deref()),
        Command::Torelli {
            a,
            b,
            map,
            weak,
            bound,
        } => torelli(&a, &b, &map, weak, bound),
        Command::Mutate {
            file,
            config,
            map_out,
        } => cmd_mutate(&file, &config, map_out.as_deref()),
        Command::Examples { name } => examples(&name),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
