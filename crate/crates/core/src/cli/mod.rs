//! The `zpartial` command line: resolves workspace names into a [`Request`],
//! runs it and prints one JSON document.
//!
//! Exit codes: 0 computed (the verdict may be false), 1 suite or verification
//! failure, 2 input error, 3 cap or step limit.

mod request;
mod verify;

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub use request::{execute, split_verdict, verdict, CommandError, Object, Request, StructureDoc};
pub use verify::verify;

use crate::error::{Error, Result};
use crate::exactcat::{cyclics, ExactStructure};
use crate::hulls::Battery;
use crate::modcat::{modules_up_to, Caps, FpModule};
use crate::workspace::{BatteryDoc, BatterySpec, InflationSpec, MorphismDoc, Workspace};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Largest corpus `corpus gen` builds.
pub const CORPUS_MAX_ORDER: u128 = 4096;

#[derive(Parser, Debug)]
#[command(
    name = "zpartial",
    version,
    about = "Partial morphisms, purity and injective hulls over Z/m"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Workspace JSON file.
    #[arg(short = 'w', long, global = true)]
    workspace: Option<String>,
    /// Ring modulus m (checked against the workspace when both are given).
    #[arg(long, global = true)]
    ring: Option<i64>,
    /// abelian, pure, hom-into:NAMES or hom-from:NAMES (comma separated; `cyclics` allowed).
    #[arg(long, global = true, default_value = "abelian")]
    structure: String,
    /// `default`, `order:N` or a workspace battery name.
    #[arg(long, global = true)]
    battery: Option<String>,
    #[arg(long, global = true, default_value_t = 16)]
    max_order: u128,
    #[arg(long, global = true, default_value_t = 8)]
    max_steps: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    cap_hom: Option<u128>,
    #[arg(long, global = true)]
    cap_subgroups: Option<u128>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smith normal form of an integer matrix.
    Snf {
        #[arg(long)]
        matrix: String,
    },
    /// Invariant factors, order and generators of a module.
    Module {
        #[command(subcommand)]
        cmd: ModuleCmd,
    },
    /// Size and generators of Hom(A, B).
    Hom {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        list: bool,
    },
    /// Pushout of f: A → B and g: A → C.
    Pushout {
        #[arg(short)]
        f: String,
        #[arg(short)]
        g: String,
    },
    /// Pullback of f: B → D and g: C → D.
    Pullback {
        #[arg(short)]
        f: String,
        #[arg(short)]
        g: String,
    },
    /// Purity of a mono, with a witness when it is not pure.
    IsPure {
        #[arg(short)]
        i: String,
    },
    /// Whether a conflation belongs to the selected structure.
    Substructure {
        #[arg(short)]
        c: String,
    },
    /// Baer sum of two conflations with equal ends.
    BaerSum {
        #[arg(short)]
        a: String,
        #[arg(short)]
        b: String,
    },
    /// Push or pull a conflation along a morphism.
    Ext {
        #[command(subcommand)]
        cmd: ExtCmd,
    },
    /// Partial morphisms given by an inclusion u and a map f.
    Partial {
        #[command(subcommand)]
        cmd: PartialCmd,
    },
    /// Whether f is partial along every battery embedding.
    Cophantom {
        #[arg(short)]
        f: String,
    },
    /// Injectivity of a module for the selected structure.
    Injective {
        #[arg(short)]
        m: String,
        /// Workspace inflation set; the Baer set by default.
        #[arg(long)]
        inflations: Option<String>,
    },
    /// Essentiality of an inflation (`--weak` for weak essentiality).
    Essential {
        #[arg(short)]
        u: String,
        #[arg(long)]
        weak: bool,
    },
    /// Whether V is small over U in X.
    SmallOver {
        /// V → X
        #[arg(short)]
        v: String,
        /// U → X
        #[arg(short)]
        u: String,
    },
    /// Injective hull of a module, with the five hull conditions.
    Hull {
        #[arg(short)]
        m: String,
    },
    /// Iterated pushout preenvelope for an inflation set.
    Preenvelope {
        #[arg(short)]
        m: String,
        #[arg(long)]
        inflations: Option<String>,
    },
    /// Smallest injective subobject through which an embedding stays essential.
    Minimize {
        #[arg(short)]
        u: String,
    },
    /// Deterministic workspace of modules and sampled morphisms.
    Corpus {
        #[command(subcommand)]
        cmd: CorpusCmd,
    },
    /// Property suites over a ring.
    Suite {
        #[command(subcommand)]
        cmd: SuiteCmd,
    },
    /// Re-check a verdict file (`-` for standard input).
    Verify { file: String },
}

#[derive(Subcommand, Debug)]
enum ModuleCmd {
    /// Invariant factors, order and generators.
    Info {
        #[arg(short)]
        m: String,
    },
}

#[derive(Subcommand, Debug)]
enum ExtCmd {
    /// Pushout of the conflation along g.
    Push {
        #[arg(short)]
        c: String,
        #[arg(short)]
        g: String,
    },
    /// Pullback of the conflation along f.
    Pull {
        #[arg(short)]
        c: String,
        #[arg(short)]
        f: String,
    },
}

#[derive(Subcommand, Debug)]
enum PartialCmd {
    /// Partial and partial-iso verdicts with the pushout.
    Check {
        #[arg(short)]
        u: String,
        #[arg(short)]
        f: String,
    },
    /// A one-equation system showing (u, f) is not partial.
    Witness {
        #[arg(short)]
        u: String,
        #[arg(short)]
        f: String,
    },
    /// An extension g with g u = f.
    Extend {
        #[arg(short)]
        u: String,
        #[arg(short)]
        f: String,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusCmd {
    Gen {
        /// Number of sampled morphisms.
        #[arg(long, default_value_t = 32)]
        morphisms: usize,
    },
}

#[derive(Subcommand, Debug)]
enum SuiteCmd {
    /// partial-sweep (alias thm-2-2), closure (alias prop-2-5), purity, ext, hulls,
    /// pure-collapse, essential or fp-injective.
    Run { name: String },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        e if e.is_resource() => EXIT_RESOURCE,
        Error::Violation(_) => EXIT_FAILED,
        _ => EXIT_INPUT,
    }
}

fn error_json(command: &str, e: &CommandError) -> Value {
    let kind = match exit_code(&e.error) {
        EXIT_RESOURCE => "resource",
        EXIT_FAILED => "violation",
        _ => "input",
    };
    let mut v = json!({"command": command, "error": {"kind": kind, "message": e.error.to_string()}});
    if let Some(Value::Object(extra)) = &e.partial {
        for (k, x) in extra {
            v[k] = x.clone();
        }
    }
    v
}

/// Caps: defaults, then `ZPARTIAL_CAPS`, then flags.
fn resolve_caps(base: Caps, g: &Global) -> Result<Caps> {
    let mut caps = base;
    if let Ok(spec) = std::env::var("ZPARTIAL_CAPS") {
        caps.apply_overrides(&spec)?;
    }
    if let Some(h) = g.cap_hom {
        caps.hom = h;
    }
    if let Some(s) = g.cap_subgroups {
        caps.subgroup_order = s;
    }
    Ok(caps)
}

fn load_workspace(g: &Global) -> Result<Workspace> {
    let path = g
        .workspace
        .as_ref()
        .ok_or_else(|| Error::Input("this command needs a workspace (-w FILE)".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {path}: {e}")))?;
    let ws = Workspace::from_json(&text)?;
    if let Some(r) = g.ring {
        if r != ws.modulus {
            return Err(Error::RingMismatch(r, ws.modulus));
        }
    }
    Ok(ws)
}

fn parse_structure(spec: &str, ws: &Workspace) -> Result<ExactStructure> {
    let class = |names: &str| -> Result<Vec<FpModule>> {
        let mut out = Vec::new();
        for n in names.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if n == "cyclics" {
                out.extend(cyclics(ws.modulus));
            } else {
                out.push(ws.module(n)?.clone());
            }
        }
        Ok(out)
    };
    match spec.split_once(':') {
        None if spec == "abelian" => Ok(ExactStructure::Abelian),
        None if spec == "pure" => Ok(ExactStructure::Pure),
        Some(("hom-into", names)) => Ok(ExactStructure::HomInto(class(names)?)),
        Some(("hom-from", names)) => Ok(ExactStructure::HomFrom(class(names)?)),
        _ => Err(Error::Input(format!(
            "unknown structure `{spec}`; use abelian, pure, hom-into:NAMES or hom-from:NAMES"
        ))),
    }
}

fn resolve_battery(spec: &Option<String>, ws: &Workspace, r: &Request) -> Result<Option<BatteryDoc>> {
    let instance = || -> Result<Vec<FpModule>> {
        let mut v = Vec::new();
        for o in r.inputs.values() {
            v.extend(o.modules(ws.modulus)?);
        }
        Ok(v)
    };
    let b = match spec.as_deref() {
        None | Some("default") => return Ok(None),
        Some(s) if s.starts_with("order:") => {
            let n: u128 = s[6..]
                .parse()
                .map_err(|_| Error::Input(format!("battery `{s}`: expected order:N")))?;
            Battery::up_to(ws.modulus, n, &instance()?)?
        }
        Some(name) => ws.battery(name)?,
    };
    Ok(Some(BatteryDoc::of(&b)))
}

/// Builds the request for a workspace command.
fn request_for(cmd: &Command, g: &Global, caps: Caps) -> Result<Request> {
    let ws = load_workspace(g)?;
    let mut r = Request::new("", Some(ws.modulus), caps);
    let module = |n: &str| -> Result<Object> { Ok(Object::of_module(ws.module(n)?)) };
    let morphism = |n: &str| -> Result<Object> { Ok(Object::of_morphism(ws.morphism(n)?)) };
    let conflation = |n: &str| -> Result<Object> { Ok(Object::of_conflation(ws.conflation(n)?)) };
    let mut inputs: Vec<(&str, Object)> = Vec::new();
    let mut uses_structure = false;
    let mut inflations: Option<&Option<String>> = None;
    let name = match cmd {
        Command::Module {
            cmd: ModuleCmd::Info { m },
        } => {
            inputs.push(("m", module(m)?));
            "module info"
        }
        Command::Hom { source, target, list } => {
            inputs.push(("source", module(source)?));
            inputs.push(("target", module(target)?));
            r.params.insert("list".into(), json!(list));
            "hom"
        }
        Command::Pushout { f, g: gg } => {
            inputs.push(("f", morphism(f)?));
            inputs.push(("g", morphism(gg)?));
            "pushout"
        }
        Command::Pullback { f, g: gg } => {
            inputs.push(("f", morphism(f)?));
            inputs.push(("g", morphism(gg)?));
            "pullback"
        }
        Command::IsPure { i } => {
            inputs.push(("i", morphism(i)?));
            "is-pure"
        }
        Command::Substructure { c } => {
            inputs.push(("eta", conflation(c)?));
            uses_structure = true;
            "substructure"
        }
        Command::BaerSum { a, b } => {
            inputs.push(("a", conflation(a)?));
            inputs.push(("b", conflation(b)?));
            "baer-sum"
        }
        Command::Ext {
            cmd: ExtCmd::Push { c, g: gg },
        } => {
            inputs.push(("eta", conflation(c)?));
            inputs.push(("g", morphism(gg)?));
            "ext push"
        }
        Command::Ext {
            cmd: ExtCmd::Pull { c, f },
        } => {
            inputs.push(("eta", conflation(c)?));
            inputs.push(("f", morphism(f)?));
            "ext pull"
        }
        Command::Partial { cmd } => {
            let (u, f, n) = match cmd {
                PartialCmd::Check { u, f } => (u, f, "partial check"),
                PartialCmd::Witness { u, f } => (u, f, "partial witness"),
                PartialCmd::Extend { u, f } => (u, f, "partial extend"),
            };
            inputs.push(("u", morphism(u)?));
            inputs.push(("f", morphism(f)?));
            uses_structure = n == "partial check";
            n
        }
        Command::Cophantom { f } => {
            inputs.push(("f", morphism(f)?));
            uses_structure = true;
            "cophantom"
        }
        Command::Injective { m, inflations: h } => {
            inputs.push(("e", module(m)?));
            uses_structure = true;
            inflations = Some(h);
            "injective"
        }
        Command::Essential { u, weak } => {
            inputs.push(("u", morphism(u)?));
            r.params.insert("weak".into(), json!(weak));
            uses_structure = true;
            "essential"
        }
        Command::SmallOver { v, u } => {
            inputs.push(("v", morphism(v)?));
            inputs.push(("u", morphism(u)?));
            uses_structure = true;
            "small-over"
        }
        Command::Hull { m } => {
            inputs.push(("m", module(m)?));
            uses_structure = true;
            "hull"
        }
        Command::Preenvelope { m, inflations: h } => {
            inputs.push(("m", module(m)?));
            r.params.insert("max_steps".into(), json!(g.max_steps));
            uses_structure = true;
            inflations = Some(h);
            "preenvelope"
        }
        Command::Minimize { u } => {
            inputs.push(("u", morphism(u)?));
            uses_structure = true;
            "minimize"
        }
        _ => unreachable!("not a workspace command"),
    };
    r.command = name.to_string();
    for (k, o) in inputs {
        r.inputs.insert(k.to_string(), o);
    }
    if uses_structure {
        r.structure = Some(StructureDoc::of(&parse_structure(&g.structure, &ws)?));
    }
    if let Some(Some(h)) = inflations {
        let set = ws.inflation_set(h, &r.caps)?;
        r.inflations = Some(set.members.iter().map(MorphismDoc::of).collect());
    }
    if request::BATTERY_COMMANDS.contains(&name) {
        r.battery = resolve_battery(&g.battery, &ws, &r)?;
        r.fill_default_battery()?;
    }
    Ok(r)
}

fn module_name(m: &FpModule) -> String {
    if m.is_zero() {
        return "m0".into();
    }
    let parts: Vec<String> = m.factors().iter().map(|d| d.to_string()).collect();
    format!("m{}", parts.join("_"))
}

/// Every module up to `max_order` and `count` morphisms sampled from `seed`.
pub fn corpus_generate(modulus: i64, max_order: u128, seed: u64, count: usize) -> Result<Workspace> {
    if max_order > CORPUS_MAX_ORDER {
        return Err(Error::Cap {
            what: "corpus max order".into(),
            cap: CORPUS_MAX_ORDER,
            size: max_order,
        });
    }
    let mut ws = Workspace::new(modulus)?;
    let modules = modules_up_to(modulus, max_order)?;
    for m in &modules {
        ws.modules.insert(module_name(m), m.clone());
    }
    let nonzero: Vec<&FpModule> = modules.iter().filter(|m| !m.is_zero()).collect();
    if !nonzero.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let width = count.to_string().len();
        for k in 0..count {
            let a = nonzero[rng.gen_range(0..nonzero.len())];
            let b = nonzero[rng.gen_range(0..nonzero.len())];
            let f = crate::suites::random_hom(a, b, &mut rng);
            ws.morphisms.insert(
                format!("f{k:0width$}"),
                crate::workspace::NamedMorphism {
                    source: module_name(a),
                    target: module_name(b),
                    morphism: f,
                },
            );
        }
    }
    ws.batteries.insert(
        "default".into(),
        BatterySpec::UpTo {
            max_order: Battery::DEFAULT_ORDER as u64,
            extra: vec![],
        },
    );
    ws.inflation_sets.insert("baer".into(), InflationSpec::Baer);
    Ok(ws)
}

fn read_source(file: &str) -> Result<String> {
    if file == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Error::Input(format!("cannot read standard input: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(file).map_err(|e| Error::Input(format!("cannot read {file}: {e}")))
}

fn need_ring(g: &Global) -> Result<i64> {
    g.ring.ok_or_else(|| Error::Input("this command needs --ring".into()))
}

/// Runs one command line, writing JSON to `out`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (doc, code) = match dispatch(&cli) {
        Ok(pair) => pair,
        Err((name, e)) => {
            eprintln!("zpartial: {}", e.error);
            (error_json(&name, &e), exit_code(&e.error))
        }
    };
    let text = render(&doc);
    let _ = writeln!(out, "{text}");
    code
}

/// Indented JSON with arrays of scalars kept on one line.
pub fn render(v: &Value) -> String {
    let mut s = String::new();
    render_into(v, 0, &mut s);
    s
}

fn render_into(v: &Value, depth: usize, s: &mut String) {
    let pad = |d: usize| "  ".repeat(d);
    let scalar = |x: &Value| !x.is_array() && !x.is_object();
    // scalars and matrices of scalars stay on one line
    let inline = |a: &[Value]| {
        a.iter()
            .all(|x| scalar(x) || x.as_array().is_some_and(|r| r.iter().all(scalar)))
    };
    match v {
        Value::Array(a) if inline(a) => s.push_str(&serde_json::to_string(v).expect("serializable")),
        Value::Array(a) => {
            s.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                s.push_str(&pad(depth + 1));
                render_into(x, depth + 1, s);
                s.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            s.push_str(&pad(depth));
            s.push(']');
        }
        Value::Object(o) if !o.is_empty() => {
            s.push_str("{\n");
            for (i, (k, x)) in o.iter().enumerate() {
                s.push_str(&pad(depth + 1));
                s.push_str(&serde_json::to_string(k).expect("serializable"));
                s.push_str(": ");
                render_into(x, depth + 1, s);
                s.push_str(if i + 1 < o.len() { ",\n" } else { "\n" });
            }
            s.push_str(&pad(depth));
            s.push('}');
        }
        _ => s.push_str(&serde_json::to_string(v).expect("serializable")),
    }
}

type Dispatch = std::result::Result<(Value, i32), (String, CommandError)>;

fn dispatch(cli: &Cli) -> Dispatch {
    let g = &cli.global;
    let fail = |name: &str| {
        let name = name.to_string();
        move |e: Error| (name.clone(), CommandError::from(e))
    };
    match &cli.command {
        Command::Snf { matrix } => {
            let caps = resolve_caps(Caps::default(), g).map_err(fail("snf"))?;
            let m: Value = serde_json::from_str(matrix)
                .map_err(|e| Error::Input(format!("malformed --matrix: {e}")))
                .map_err(fail("snf"))?;
            let mut r = Request::new("snf", g.ring, caps);
            r.params.insert("matrix".into(), m);
            run_request(&r)
        }
        Command::Corpus {
            cmd: CorpusCmd::Gen { morphisms },
        } => {
            let ws = need_ring(g)
                .and_then(|m| corpus_generate(m, g.max_order, g.seed, *morphisms))
                .map_err(fail("corpus gen"))?;
            let doc: Value = serde_json::from_str(&ws.to_json()).expect("workspace json");
            Ok((doc, EXIT_OK))
        }
        Command::Suite {
            cmd: SuiteCmd::Run { name },
        } => {
            let caps = resolve_caps(crate::suites::suite_caps(), g).map_err(fail("suite run"))?;
            let rep = need_ring(g)
                .and_then(|m| crate::suites::run_suite(name, m, g.seed, &caps))
                .map_err(fail("suite run"))?;
            let code = if rep.passed() { EXIT_OK } else { EXIT_FAILED };
            let mut doc = serde_json::to_value(&rep).expect("report serializes");
            doc["command"] = json!("suite run");
            doc["passed"] = json!(rep.passed());
            Ok((doc, code))
        }
        Command::Verify { file } => {
            let (ok, doc) = read_source(file)
                .and_then(|t| {
                    serde_json::from_str::<Value>(&t).map_err(|e| Error::Input(format!("malformed verdict: {e}")))
                })
                .and_then(|v| verify(&v))
                .map_err(fail("verify"))?;
            Ok((doc, if ok { EXIT_OK } else { EXIT_FAILED }))
        }
        other => {
            let name = command_name(other);
            let caps = resolve_caps(Caps::default(), g).map_err(fail(name))?;
            let r = request_for(other, g, caps).map_err(fail(name))?;
            run_request(&r)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Snf { .. } => "snf",
        Command::Module { .. } => "module info",
        Command::Hom { .. } => "hom",
        Command::Pushout { .. } => "pushout",
        Command::Pullback { .. } => "pullback",
        Command::IsPure { .. } => "is-pure",
        Command::Substructure { .. } => "substructure",
        Command::BaerSum { .. } => "baer-sum",
        Command::Ext {
            cmd: ExtCmd::Push { .. },
        } => "ext push",
        Command::Ext {
            cmd: ExtCmd::Pull { .. },
        } => "ext pull",
        Command::Partial {
            cmd: PartialCmd::Check { .. },
        } => "partial check",
        Command::Partial {
            cmd: PartialCmd::Witness { .. },
        } => "partial witness",
        Command::Partial {
            cmd: PartialCmd::Extend { .. },
        } => "partial extend",
        Command::Cophantom { .. } => "cophantom",
        Command::Injective { .. } => "injective",
        Command::Essential { .. } => "essential",
        Command::SmallOver { .. } => "small-over",
        Command::Hull { .. } => "hull",
        Command::Preenvelope { .. } => "preenvelope",
        Command::Minimize { .. } => "minimize",
        Command::Corpus { .. } => "corpus gen",
        Command::Suite { .. } => "suite run",
        Command::Verify { .. } => "verify",
    }
}

fn run_request(r: &Request) -> Dispatch {
    match execute(r) {
        Ok(res) => Ok((verdict(r, res), EXIT_OK)),
        Err(e) => Err((r.command.clone(), e)),
    }
}

/// Process entry point for the `zpartial` binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    run(std::env::args_os(), &mut lock)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, Value) {
        let mut buf = Vec::new();
        let code = run(std::iter::once("zpartial").chain(args.iter().copied()), &mut buf);
        let text = String::from_utf8(buf).unwrap();
        (code, serde_json::from_str(&text).unwrap_or(Value::Null))
    }

    #[test]
    fn snf_example() {
        let (code, v) = run_str(&["snf", "--matrix", "[[2,4],[6,8]]"]);
        assert_eq!(code, 0);
        assert_eq!(v["diagonal"], json!(["2", "4"]));
    }

    #[test]
    fn bad_inputs_exit_two() {
        assert_eq!(run_str(&["snf", "--matrix", "[[2,"]).0, EXIT_INPUT);
        assert_eq!(run_str(&["hull", "-m", "M"]).0, EXIT_INPUT);
        assert_eq!(run_str(&["no-such-command"]).0, EXIT_INPUT);
        assert_eq!(run_str(&["suite", "run", "nope", "--ring", "4"]).0, EXIT_INPUT);
    }

    #[test]
    fn corpus_is_deterministic() {
        let a = corpus_generate(4, 16, 3, 10).unwrap();
        let b = corpus_generate(4, 16, 3, 10).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.modules.len(), 9);
        assert_eq!(corpus_generate(4, 1, 3, 10).unwrap().modules.len(), 1);
        assert!(matches!(corpus_generate(4, 5000, 0, 1), Err(Error::Cap { .. })));
    }
}
