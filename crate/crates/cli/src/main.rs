mod render;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use gmbqc::analysis::{self, Options, Subject};
use gmbqc::ext::{self, GModule};
use gmbqc::fixtures::{self, Fixture, NAMES};
use gmbqc::hvm;
use gmbqc::instance::{InstanceFile, LoadedInstance};
use gmbqc::proofs::{self, CertificateJson};
use gmbqc::quasi;
use gmbqc::symgroup::FiniteGroup;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "gmbqc", version, about = "Analyze measurement-based computations with group-valued inputs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for sampled measurement runs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Omit environment-dependent fields (version, timing).
    #[arg(long, global = true)]
    canonical: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full analysis on a built-in fixture.
    Example {
        /// Fixture name; omit to list them.
        name: Option<String>,
        #[arg(long, default_value_t = 1000)]
        shots: usize,
        /// Print the fixture as an instance file instead of analyzing it.
        #[arg(long)]
        emit_instance: bool,
    },
    /// Run the full analysis on an instance file.
    Analyze {
        path: PathBuf,
        #[arg(long, default_value_t = 1000)]
        shots: usize,
    },
    /// Minimal distance of a target output function to ncHVM outputs.
    Delta {
        /// Fixture name or instance file.
        source: String,
        /// Target bits such as `0111`; defaults to the source's target.
        #[arg(long)]
        target: Option<String>,
    },
    /// Ideal outputs, witness value and sampled runs.
    Witness {
        source: String,
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value_t = 1000)]
        shots: usize,
    },
    /// Parity and symmetry-based contextuality proofs.
    ProofSearch {
        source: String,
        /// Restrict the symmetry search to this group element.
        #[arg(long)]
        element: Option<String>,
    },
    /// Quasi-probability over the phase space.
    Quasiprob { source: String },
    /// Second cohomology of a finite group with coefficients in a module.
    H2 {
        /// Group such as `Z2xZ2`; ignored for `fixture:` modules.
        #[arg(long, default_value = "Z2")]
        group: String,
        /// `trivial:<dim>` or `fixture:<name>` (the output-invisible flips).
        #[arg(long, default_value = "trivial:1")]
        module: String,
        /// Cross-check by enumerating all cochains.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Check a certificate file against a source's constraints.
    VerifyCertificate { source: String, certificate: PathBuf },
}

enum Failure {
    Usage(String),
    Core(gmbqc::Error),
}

impl From<gmbqc::Error> for Failure {
    fn from(e: gmbqc::Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

enum Source {
    Fixture(Box<Fixture>),
    Instance(Box<LoadedInstance>),
}

impl Source {
    fn open(spec: &str) -> Outcome<Source> {
        let path = Path::new(spec);
        if path.is_file() {
            return Ok(Source::Instance(Box::new(load_instance(path)?)));
        }
        match fixtures::builtin(spec) {
            Ok(f) => Ok(Source::Fixture(Box::new(f))),
            Err(_) => Err(Failure::Usage(format!("{spec:?} is neither a file nor a fixture ({})", NAMES.join(", ")))),
        }
    }

    fn subject(&self) -> Subject<'_> {
        match self {
            Source::Fixture(f) => Subject::from_fixture(f),
            Source::Instance(l) => Subject::from_loaded(l),
        }
    }

    fn b_e(&self) -> Option<usize> {
        match self {
            Source::Fixture(f) => f.b_e,
            Source::Instance(l) => Some(l.instance.b_e()),
        }
    }
}

fn load_instance(path: &Path) -> Outcome<LoadedInstance> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(InstanceFile::from_json(&text)?.load()?)
}

fn parse_bits(s: &str) -> Outcome<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Failure::Usage(format!("target {s:?} must be a string of 0 and 1"))),
        })
        .collect()
}

#[derive(Serialize)]
struct Meta {
    version: &'static str,
    elapsed_ms: u128,
}

#[derive(Serialize)]
struct WithMeta<'a, T: Serialize> {
    #[serde(flatten)]
    body: &'a T,
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<Meta>,
}

struct Printer {
    format: Format,
    canonical: bool,
    started: Instant,
}

impl Printer {
    fn json<T: Serialize>(&self, body: &T) -> String {
        let meta = (!self.canonical)
            .then(|| Meta { version: env!("CARGO_PKG_VERSION"), elapsed_ms: self.started.elapsed().as_millis() });
        serde_json::to_string_pretty(&WithMeta { body, meta }).expect("report serializes")
    }

    /// Text or JSON; CSV is a usage error unless the command supports it.
    fn emit<T: Serialize>(&self, body: &T, text: impl FnOnce() -> String) -> Outcome<()> {
        match self.format {
            Format::Json => write_stdout(&(self.json(body) + "\n")),
            Format::Text => write_stdout(&text()),
            Format::Csv => return Err(Failure::Usage("csv output is only available for quasiprob".into())),
        }
        Ok(())
    }
}

/// Ignores write errors such as a closed pipe.
fn write_stdout(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn target_for(subject: &Subject, flag: &Option<String>) -> Outcome<Vec<u8>> {
    let target = match flag {
        Some(bits) => parse_bits(bits)?,
        None => subject.target.clone().ok_or_else(|| Failure::Usage("source has no target; pass --target".into()))?,
    };
    if target.len() != subject.action.order() {
        return Err(Failure::Core(gmbqc::Error::DimensionMismatch {
            context: "target outputs",
            expected: subject.action.order(),
            found: target.len(),
        }));
    }
    Ok(target)
}

#[derive(Serialize)]
struct DeltaReport {
    target: Vec<u8>,
    b_e: usize,
    assignment_count: u128,
    delta: Option<hvm::DeltaResult>,
    classical_witness_bound: Option<usize>,
    parity_lower_bound: bool,
}

#[derive(Serialize)]
struct QuasiPoint {
    index: usize,
    v: Vec<u8>,
    value: f64,
}

#[derive(Serialize)]
struct QuasiDump {
    summary: analysis::QuasiReport,
    points: Vec<QuasiPoint>,
}

#[derive(Serialize)]
struct H2Report {
    group_order: usize,
    module_dim: usize,
    trivial_action: bool,
    #[serde(flatten)]
    result: ext::H2Result,
    exhaustive_dim: Option<usize>,
}

#[derive(Serialize)]
struct VerifyAll {
    valid: bool,
    certificates: Vec<VerifyReport>,
}

#[derive(Serialize)]
struct VerifyReport {
    kind: &'static str,
    valid: bool,
}

fn run(cli: Cli) -> Outcome<()> {
    let out = Printer { format: cli.format, canonical: cli.canonical, started: Instant::now() };
    let opts = |shots| Options { seed: cli.seed, shots };
    match cli.command {
        Command::Example { name: None, .. } => {
            out.emit(&serde_json::json!({ "fixtures": NAMES }), || NAMES.iter().map(|n| format!("{n}\n")).collect())?;
        }
        Command::Example { name: Some(name), shots, emit_instance } => {
            let f = fixtures::builtin(&name)
                .map_err(|_| Failure::Usage(format!("unknown fixture {name:?}; choose from {}", NAMES.join(", "))))?;
            if emit_instance {
                let inst = f.instance.as_ref().ok_or_else(|| Failure::Usage(format!("{name} has no computation")))?;
                write_stdout(&(InstanceFile::from_instance(inst, f.target.clone())?.to_json() + "\n"));
                return Ok(());
            }
            let report = analysis::analyze(&Subject::from_fixture(&f), &opts(shots))?;
            out.emit(&report, || render::report(&report))?;
        }
        Command::Analyze { path, shots } => {
            let loaded = load_instance(&path)?;
            let report = analysis::analyze(&Subject::from_loaded(&loaded), &opts(shots))?;
            out.emit(&report, || render::report(&report))?;
        }
        Command::Delta { source, target } => {
            let src = Source::open(&source)?;
            let subject = src.subject();
            let target = target_for(&subject, &target)?;
            let b_e = src.b_e().ok_or_else(|| Failure::Usage(format!("{source} has no output observable")))?;
            let space = hvm::enumerate(subject.set);
            let delta = hvm::delta(&space, subject.action, &target, b_e)?;
            let report = DeltaReport {
                classical_witness_bound: delta.as_ref().map(hvm::DeltaResult::classical_witness_bound),
                parity_lower_bound: hvm::parity_lower_bound(&space, subject.action, &target, b_e)?,
                assignment_count: space.count(),
                target,
                b_e,
                delta,
            };
            out.emit(&report, || render::delta(&report.target, &report.delta, report.parity_lower_bound))?;
        }
        Command::Witness { source, target, shots } => {
            let src = Source::open(&source)?;
            let subject = src.subject();
            let inst = subject.instance.ok_or_else(|| Failure::Usage(format!("{source} has no computation")))?;
            let target = target_for(&subject, &target)?;
            let report = analysis::computation(inst, &target, &opts(shots))?;
            out.emit(&report, || render::computation(&report))?;
        }
        Command::ProofSearch { source, element } => {
            let src = Source::open(&source)?;
            let subject = src.subject();
            let report = match element {
                None => analysis::proof_report(&subject)?,
                Some(name) => {
                    let group = subject.extended.unwrap_or(subject.action);
                    let g = group
                        .group()
                        .names()
                        .iter()
                        .position(|n| *n == name)
                        .ok_or_else(|| Failure::Usage(format!("no group element named {name:?}")))?;
                    let k = subject.set.constraints();
                    let cert = proofs::find_symmetry_proof_at(&k, group, g)?;
                    let related = cert.as_ref().map(|c| proofs::relate(c, &k, group)).transpose()?;
                    analysis::ProofReport {
                        parity: proofs::find_parity_proof(&k).map(|c| CertificateJson::from_parity(&c, &k)),
                        symmetry_element: cert.as_ref().map(|_| name.clone()),
                        symmetry: cert.map(|c| CertificateJson::from_symmetry(&c, &k, group)),
                        related_parity_valid: related.map(|b| b.verify(&k)),
                        lemma4_obstruction: proofs::check_lemma4(group),
                    }
                }
            };
            out.emit(&report, || {
                render::proofs(&report.parity, &report.symmetry, &report.symmetry_element, report.related_parity_valid, report.lemma4_obstruction)
            })?;
        }
        Command::Quasiprob { source } => {
            let src = Source::open(&source)?;
            let subject = src.subject();
            let state = subject.state.ok_or_else(|| Failure::Usage(format!("{source} has no state")))?;
            let module = subject.set.compute_v();
            if let Some((a, b)) = module.separation_failure() {
                return Err(Failure::Core(gmbqc::Error::SeparationFails(a, b)));
            }
            let q = quasi::quasiprob(state, subject.set, &module)?;
            let summary = analysis::quasi_report(&subject, &module, state)?
                .ok_or_else(|| Failure::Usage("phase space unavailable".into()))?;
            let points: Vec<QuasiPoint> = q
                .values
                .iter()
                .enumerate()
                .map(|(i, &value)| {
                    let v = module.element_at(i as u64);
                    QuasiPoint { index: i, v: (0..v.len()).map(|a| v.bit(a)).collect(), value }
                })
                .collect();
            let dump = QuasiDump { summary, points };
            if out.format == Format::Csv {
                write_stdout(&render::quasi_csv(&dump.points.iter().map(|p| (p.index, &p.v[..], p.value)).collect::<Vec<_>>()));
            } else {
                out.emit(&dump, || render::quasi(&dump.summary))?;
            }
        }
        Command::H2 { group, module, exhaustive } => {
            let gm = parse_module(&group, &module)?;
            let result = ext::h2(&gm)?;
            let exhaustive_dim = exhaustive.then(|| ext::h2_dimension_exhaustive(&gm)).transpose()?;
            let report = H2Report {
                group_order: gm.group().order(),
                module_dim: gm.dim(),
                trivial_action: gm.is_trivial(),
                result,
                exhaustive_dim,
            };
            out.emit(&report, || render::h2(report.group_order, report.module_dim, &report.result, report.exhaustive_dim))?;
        }
        Command::VerifyCertificate { source, certificate } => {
            let src = Source::open(&source)?;
            let subject = src.subject();
            let text = std::fs::read_to_string(&certificate)
                .map_err(|e| Failure::Usage(format!("{}: {e}", certificate.display())))?;
            let certs = read_certificates(&text)?;
            let k = subject.set.constraints();
            let group = subject.extended.unwrap_or(subject.action);
            let mut results = Vec::new();
            for cert in &certs {
                let kind = match cert {
                    CertificateJson::Parity { .. } => "parity",
                    CertificateJson::Symmetry { .. } => "symmetry",
                };
                results.push(VerifyReport { kind, valid: cert.verify(&k, Some(group))? });
            }
            let valid = results.iter().all(|r| r.valid);
            let report = VerifyAll { valid, certificates: results };
            out.emit(&report, || {
                report.certificates.iter().map(|r| format!("{} certificate: {}\n", r.kind, if r.valid { "valid" } else { "INVALID" })).collect()
            })?;
            if !valid {
                return Err(Failure::Core(gmbqc::Error::InvalidCertificate("certificate does not verify".into())));
            }
        }
    }
    Ok(())
}

/// A bare certificate, or a proof-search report holding `parity` and
/// `symmetry` entries.
fn read_certificates(text: &str) -> Outcome<Vec<CertificateJson>> {
    let schema = |e: serde_json::Error| Failure::Core(gmbqc::Error::InvalidCertificate(format!("schema: {e}")));
    let value: serde_json::Value = serde_json::from_str(text).map_err(schema)?;
    if value.get("type").is_some() {
        return Ok(vec![serde_json::from_value(value).map_err(schema)?]);
    }
    let certs = ["parity", "symmetry"]
        .iter()
        .filter_map(|key| value.get(key).filter(|v| !v.is_null()).cloned())
        .map(|v| serde_json::from_value(v).map_err(schema))
        .collect::<Outcome<Vec<_>>>()?;
    if certs.is_empty() {
        return Err(Failure::Core(gmbqc::Error::InvalidCertificate("no certificate in file".into())));
    }
    Ok(certs)
}

fn parse_module(group: &str, module: &str) -> Outcome<GModule> {
    match module.split_once(':') {
        Some(("trivial", dim)) => {
            let dim = dim.parse().map_err(|_| Failure::Usage(format!("bad module dimension {dim:?}")))?;
            Ok(GModule::trivial(FiniteGroup::parse_spec(group)?, dim))
        }
        Some(("fixture", name)) => {
            let f = fixtures::builtin(name).map_err(|_| Failure::Usage(format!("unknown fixture {name:?}")))?;
            let v = f.set.compute_v();
            let n = ext::compute_n(&f.set, &v)?;
            Ok(GModule::from_subgroup(&f.action, &n)?)
        }
        _ => Err(Failure::Usage(format!("module {module:?} must be trivial:<dim> or fixture:<name>"))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_size_guard() { 3 } else { 2 })
        }
    }
}
