//! `nilcrystal`: exact computations on almost-crystallographic groups.
//!
//! Every command prints one JSON report (sorted keys, newline-terminated)
//! to stdout. Exit status: 0 on success, 1 on a computation error, 2 on a
//! usage or parse error. `catalog show` prints a catalog file instead, so
//! its output can be fed back to `group check`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use nilcrystal::acg::{catalog_group, ACGroup, MapSpec, CATALOG_GROUPS};
use nilcrystal::invariants::{averaging_invariants, classify_dynamics, is_orientable, verify_grading, GradingInput};
use nilcrystal::malcev::LatticeElement;
use nilcrystal::scalar::{format_rational, parse_rational};
use nilcrystal::unipotent::{bch_truncated, NilMatrix, UniMatrix, BCH_MAX_CLASS};
use nilcrystal::{Error, QMatrix, Rational};

#[derive(Parser)]
#[command(name = "nilcrystal", version, about = "Exact computations on almost-crystallographic groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Built-in groups
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Group files
    #[command(subcommand)]
    Group(GroupCmd),
    /// Order of an element given as lattice coordinates and a coset index
    Torsion {
        #[arg(long)]
        group: String,
        /// `x1,...,xk@coset`
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
    /// Bounded search for elements of finite order
    TorsionSearch {
        #[arg(long)]
        group: String,
        #[arg(long)]
        bound: u32,
    },
    /// Affine maps
    #[command(subcommand)]
    Map(MapCmd),
    /// Lefschetz and Nielsen numbers of an affine self-map
    Nielsen(MapArgs),
    /// Lie correspondence utilities on matrix files
    #[command(subcommand)]
    Lie(LieCmd),
    /// Gradings of nilpotent Lie algebras
    #[command(subcommand)]
    Grading(GradingCmd),
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    Show { name: String },
}

#[derive(Subcommand)]
enum GroupCmd {
    Check { file: PathBuf },
}

#[derive(Args)]
struct MapArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    map: PathBuf,
}

#[derive(Subcommand)]
enum MapCmd {
    Classify {
        #[command(flatten)]
        args: MapArgs,
        /// Also require (d,δ)Γ(d,δ)⁻¹ = Γ for hyperbolicity
        #[arg(long)]
        diffeomorphism: bool,
    },
    #[command(name = "self")]
    SelfMap(MapArgs),
}

#[derive(Subcommand)]
enum LieCmd {
    Exp { file: PathBuf },
    Log { file: PathBuf },
    Bch {
        x: PathBuf,
        y: PathBuf,
        #[arg(long, default_value_t = 2)]
        class: usize,
    },
    Power {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
}

#[derive(Subcommand)]
enum GradingCmd {
    Verify {
        file: PathBuf,
        /// Require all degrees to be positive
        #[arg(long)]
        positive: bool,
    },
}

/// What a command produced: verdicts and certificates for a report, or raw
/// text.
enum Output {
    Report(Value, Value),
    Raw(String),
}

type CmdResult = Result<Output, Error>;

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

/// A builtin name, or else a path to a catalog file.
fn load_group(spec: &str) -> Result<ACGroup, Error> {
    match catalog_group(spec) {
        Err(Error::Catalog(_)) if Path::new(spec).is_file() => ACGroup::from_catalog_json(&read_file(Path::new(spec))?),
        other => other,
    }
}

fn load_map(path: &Path) -> Result<MapSpec, Error> {
    MapSpec::from_json(&read_file(path)?)
}

fn load_matrix(path: &Path) -> Result<QMatrix, Error> {
    Ok(serde_json::from_str(&read_file(path)?)?)
}

fn text(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

fn path_text(p: &Path) -> Value {
    Value::String(p.display().to_string())
}

fn parse_element(s: &str) -> Result<(LatticeElement, usize), Error> {
    let (coords, coset) = s.split_once('@').ok_or_else(|| Error::Parse {
        token: s.to_string(),
        reason: "expected COORDS@COSET".into(),
    })?;
    let coset = coset.parse().map_err(|_| Error::Parse {
        token: coset.to_string(),
        reason: "coset index must be a non-negative integer".into(),
    })?;
    let coords = if coords.is_empty() {
        Vec::new()
    } else {
        coords.split(',').map(parse_rational).collect::<Result<_, _>>()?
    };
    Ok((LatticeElement(coords), coset))
}

/// Report name and echoed inputs of a command.
fn describe(cmd: &Command) -> (&'static str, Value) {
    let map_inputs = |a: &MapArgs| json!({"group": a.group, "map": path_text(&a.map)});
    match cmd {
        Command::Catalog(CatalogCmd::List) => ("catalog list", json!({})),
        Command::Catalog(CatalogCmd::Show { name }) => ("catalog show", json!({"name": name})),
        Command::Group(GroupCmd::Check { file }) => ("group check", json!({"file": path_text(file)})),
        Command::Torsion { group, element } => ("torsion", json!({"group": group, "element": element})),
        Command::TorsionSearch { group, bound } => ("torsion-search", json!({"group": group, "bound": bound})),
        Command::Map(MapCmd::Classify { args, diffeomorphism }) => {
            let mut v = map_inputs(args);
            v["diffeomorphism"] = json!(diffeomorphism);
            ("map classify", v)
        }
        Command::Map(MapCmd::SelfMap(args)) => ("map self", map_inputs(args)),
        Command::Nielsen(args) => ("nielsen", map_inputs(args)),
        Command::Lie(LieCmd::Exp { file }) => ("lie exp", json!({"file": path_text(file)})),
        Command::Lie(LieCmd::Log { file }) => ("lie log", json!({"file": path_text(file)})),
        Command::Lie(LieCmd::Bch { x, y, class }) => {
            ("lie bch", json!({"x": path_text(x), "y": path_text(y), "class": class}))
        }
        Command::Lie(LieCmd::Power { file, t }) => ("lie power", json!({"file": path_text(file), "t": t})),
        Command::Grading(GradingCmd::Verify { file, positive }) => {
            ("grading verify", json!({"file": path_text(file), "positive": positive}))
        }
    }
}

fn group_check(file: &Path) -> CmdResult {
    let g = ACGroup::from_catalog_json(&read_file(file)?)?;
    let verdicts = json!({
        "valid": true,
        "name": g.name(),
        "dimension": g.dimension(),
        "nilpotency_class": g.nilpotency_class(),
        "cosets": g.coset_count(),
        "holonomy_order": g.holonomy().order(),
        "orientable": is_orientable(&g)?,
    });
    Ok(Output::Report(verdicts, Value::Null))
}

fn torsion(group: &str, element: &str) -> CmdResult {
    let (lam, coset) = parse_element(element)?;
    let g = load_group(group)?;
    let e = g.element(&lam, coset)?;
    let m = g.membership(&e)?;
    let order = match g.torsion_test(&e)? {
        Some(n) => json!(n),
        None => json!("infinite"),
    };
    let verdicts = json!({"order": order, "coset": m.coset, "lattice_part": m.lattice_part});
    Ok(Output::Report(verdicts, json!({"embedded": e.embedded()})))
}

fn torsion_search(group: &str, bound: u32) -> CmdResult {
    let g = load_group(group)?;
    let verdicts = match g.torsion_witness_search(bound)? {
        Some(w) => json!({"result": "witness", "witness": w}),
        None => json!({"result": "none up to bound", "witness": null}),
    };
    Ok(Output::Report(verdicts, Value::Null))
}

fn map_classify(args: &MapArgs, diffeomorphism: bool) -> CmdResult {
    let g = load_group(&args.group)?;
    let map = load_map(&args.map)?;
    let c = classify_dynamics(&g, &map.translation, &map.differential, diffeomorphism)?;
    let verdicts = json!({
        "expanding": c.expanding,
        "hyperbolic": c.hyperbolic,
        "self_map_valid": c.self_map_valid,
        "diffeomorphism_valid": c.diffeomorphism_valid,
    });
    let certificates = json!({
        "char_poly": c.certificate.char_poly.coeff_text(),
        "char_poly_text": c.certificate.char_poly.to_string(),
        "unit_circle_root": c.certificate.has_unit_circle_root,
        "all_outside_unit_disk": c.certificate.all_outside_unit_disk,
        "witnesses": c.certificate.witnesses,
    });
    Ok(Output::Report(verdicts, certificates))
}

fn map_self(args: &MapArgs) -> CmdResult {
    let g = load_group(&args.group)?;
    let file = load_map(&args.map)?;
    let map = g.affine_map(&file.translation, &file.differential)?;
    let check = g.induces_self_map(&map)?;
    let verdicts = json!({"self_map": check.holds, "failing_generator": check.failure});
    Ok(Output::Report(verdicts, json!({"embedded": map.embedded()})))
}

fn nielsen(args: &MapArgs) -> CmdResult {
    let g = load_group(&args.group)?;
    let file = load_map(&args.map)?;
    let map = g.affine_map(&file.translation, &file.differential)?;
    let r = averaging_invariants(&g, &map)?;
    let verdicts = json!({
        "lefschetz": text(&r.lefschetz),
        "nielsen": text(&r.nielsen),
        "anosov_relation": r.anosov_relation,
        "orientable": r.orientable,
    });
    Ok(Output::Report(verdicts, json!({"per_holonomy_terms": r.per_holonomy_terms})))
}

fn lie(cmd: &LieCmd) -> CmdResult {
    match cmd {
        LieCmd::Exp { file } => {
            let x = NilMatrix::new(load_matrix(file)?)?;
            Ok(Output::Report(json!({"result": x.exp().matrix()}), Value::Null))
        }
        LieCmd::Log { file } => {
            let g = UniMatrix::new(load_matrix(file)?)?;
            Ok(Output::Report(json!({"result": g.log().matrix()}), Value::Null))
        }
        LieCmd::Bch { x, y, class } => {
            let xm = NilMatrix::new(load_matrix(x)?)?;
            let ym = NilMatrix::new(load_matrix(y)?)?;
            let z = bch_truncated(&xm, &ym, *class)?;
            let verdicts = json!({"result": z.matrix(), "max_class": BCH_MAX_CLASS});
            Ok(Output::Report(verdicts, json!({"exp_result": z.exp().matrix()})))
        }
        LieCmd::Power { file, t } => {
            let t = parse_rational(t)?;
            let g = UniMatrix::new(load_matrix(file)?)?;
            Ok(Output::Report(json!({"result": g.rational_power(&t).matrix()}), Value::Null))
        }
    }
}

fn grading(file: &Path, positive: bool) -> CmdResult {
    let input = GradingInput::from_json(&read_file(file)?)?;
    let require = positive || input.require_positive;
    let check = verify_grading(&input.algebra, &input.grading, require)?;
    let verdicts = json!({"valid": check.valid, "positive_required": require});
    Ok(Output::Report(verdicts, json!({"violation": check.violation})))
}

fn run(cmd: &Command) -> CmdResult {
    match cmd {
        Command::Catalog(CatalogCmd::List) => Ok(Output::Report(json!({"groups": CATALOG_GROUPS}), Value::Null)),
        Command::Catalog(CatalogCmd::Show { name }) => Ok(Output::Raw(catalog_group(name)?.to_catalog_json())),
        Command::Group(GroupCmd::Check { file }) => group_check(file),
        Command::Torsion { group, element } => torsion(group, element),
        Command::TorsionSearch { group, bound } => torsion_search(group, *bound),
        Command::Map(MapCmd::Classify { args, diffeomorphism }) => map_classify(args, *diffeomorphism),
        Command::Map(MapCmd::SelfMap(args)) => map_self(args),
        Command::Nielsen(args) => nielsen(args),
        Command::Lie(cmd) => lie(cmd),
        Command::Grading(GradingCmd::Verify { file, positive }) => grading(file, *positive),
    }
}

fn report(command: Value, inputs: Value, verdicts: Value, certificates: Value, status: Value) -> Value {
    json!({
        "command": command,
        "inputs": inputs,
        "verdicts": verdicts,
        "certificates": certificates,
        "status": status,
    })
}

fn error_status(code: &str, message: String) -> Value {
    json!({"error": {"code": code, "message": message}})
}

fn emit(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("reports serialize"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            let argv: Vec<String> = std::env::args().skip(1).collect();
            let status = error_status("usage", e.kind().to_string());
            emit(&report(Value::Null, json!({"argv": argv}), Value::Null, Value::Null, status));
            return ExitCode::from(2);
        }
    };
    let (name, inputs) = describe(&cli.command);
    match run(&cli.command) {
        Ok(Output::Report(verdicts, certificates)) => {
            emit(&report(json!(name), inputs, verdicts, certificates, json!("ok")));
            ExitCode::SUCCESS
        }
        Ok(Output::Raw(s)) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            let status = error_status(err.code(), err.to_string());
            emit(&report(json!(name), inputs, Value::Null, Value::Null, status));
            ExitCode::from(if matches!(err, Error::Parse { .. }) { 2 } else { 1 })
        }
    }
}
