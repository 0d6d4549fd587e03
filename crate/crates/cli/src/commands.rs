//! One function per subcommand.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use symchaos_core::classify::{classify, decompose_periodic, implication_audit, AuditResult, ChaosReport, Tri};
use symchaos_core::construct::{build_stages, verify_certificate, ConstructOptions, SFilter};
use symchaos_core::corpus::{gen_corpus, CorpusClass, CorpusOptions, ShiftStats};
use symchaos_core::criterion::{criterion_check, prox_density_check, verify_criterion, CriterionReport, ProxDensityReport};
use symchaos_core::decide::{analyze, filter_law_check, hitting_set, verify_report, FilterLawVerdict, HittingSet};
use symchaos_core::dot::to_dot;
use symchaos_core::ellis::{analyze_system, sweep, FiniteDynSys, SweepReport};
use symchaos_core::shift::to_json;
use symchaos_core::witness::{li_yorke_check, make_scrambled_pairs, strong_liyorke_check, PairWitness};
use symchaos_core::{Cylinder, Dist, SftPresentation};

use crate::report::{emit, parse_sft_bytes, read_input, sha256_hex, to_pretty, CmdResult, Envelope, Failure, Header};
use crate::verify::verify_document;
use crate::{Cli, Command};
use erased::Json;

/// `Ok(None)` when everything passed, `Ok(Some(_))` when a report was
/// written but a check failed.
pub fn run(cli: &Cli, header: &mut Header) -> CmdResult<Option<Failure>> {
    let out = cli.output.as_ref();
    let json = |header: &Header, result: &dyn Json| -> CmdResult<()> {
        emit(out, &result.render(header))
    };
    match &cli.command {
        Command::Analyze { sft } => {
            let x = load(sft, header)?;
            let reports = analyze(&x);
            json(header, &reports)?;
            let bad: Vec<&str> = reports
                .iter()
                .filter(|r| !verify_report(&x, r))
                .map(|r| r.property.as_str())
                .collect();
            Ok(check(bad.is_empty(), "VerificationFailed", || {
                format!("certificate check failed for {}", bad.join(", "))
            }))
        }
        Command::Hit(a) => {
            let x = load(&a.sft, header)?;
            let u = Cylinder::parse(&x, &a.u)?;
            let v = Cylinder::parse(&x, &a.v)?;
            let filter = match a.filter_n {
                Some(n) => Some(filter_law_check(&x, &u, &v, n, a.horizon)?),
                None => None,
            };
            let result = HitOutput {
                u: a.u.clone(),
                v: a.v.clone(),
                hitting_set: hitting_set(&x, &u, &v, a.horizon),
                filter_law: filter.clone(),
            };
            json(header, &result)?;
            Ok(check(filter.map_or(true, |f| f.holds), "FilterLawViolated", || {
                "N(U3,U3) is not contained in N(U1,U1) ∩ N(U2,U2)".to_string()
            }))
        }
        Command::Criterion(a) => {
            let x = load(&a.sft, header)?;
            let report = criterion_check(&x, a.budget)?;
            if let (Some(path), Some(y)) = (&a.emit_product, &report.witness_y) {
                write_file(path, &to_json(&x.product(&y.presentation)?))?;
            }
            let prox_density = if a.prox_n > 0 {
                header.seed = Some(a.seed);
                Some(prox_density_check(&x, a.prox_n, a.eps, a.horizon, a.samples, a.seed)?)
            } else {
                None
            };
            let ok = verify_criterion(&x, &report);
            json(header, &CriterionOutput { report, prox_density })?;
            Ok(check(ok, "VerificationFailed", || "criterion certificate does not re-check".into()))
        }
        Command::Construct(a) => {
            let x = load(&a.sft, header)?;
            let s: SFilter = a.s.parse().map_err(|e: symchaos_core::Error| Failure::usage(e.to_string()))?;
            let opts = ConstructOptions {
                proximal: a.proximal,
                transitive_leaves: a.transitive_leaves,
                s,
            };
            let cert = build_stages(&x, a.levels, &opts)?;
            json(header, &cert)?;
            let failing = failing_conditions(&verify_certificate(&x, &cert)?);
            Ok(check(failing.is_empty(), "VerificationFailed", || {
                format!("failing conditions: {}", failing.join("; "))
            }))
        }
        Command::Verify { cert, sft } => {
            let cert_bytes = read_input(cert)?;
            let sft_bytes = read_input(sft)?;
            header.input_sha256 = Some(sha256_hex(&[&cert_bytes, &sft_bytes]));
            let x = parse_sft_bytes(&sft_bytes)?;
            let doc: serde_json::Value =
                serde_json::from_slice(&cert_bytes).map_err(|e| Failure::parse(e.to_string()))?;
            let outcome = verify_document(&x, &doc)?;
            json(header, &outcome)?;
            Ok(check(outcome.pass, "VerificationFailed", || {
                format!("failing conditions: {}", outcome.failures.join("; "))
            }))
        }
        Command::Witness(a) => {
            let x = load(&a.sft, header)?;
            let delta = Dist::pow(a.delta);
            let pairs = make_scrambled_pairs(&x, a.pairs, a.eprox, delta, a.horizon)?;
            let result = WitnessOutput::new(pairs, a.eprox, a.delta, a.horizon);
            json(header, &result)?;
            let failed = result.pairs.iter().filter(|p| !p.li_yorke).count();
            Ok(check(failed == 0, "VerificationFailed", || format!("{failed} pair(s) fail the Li-Yorke check")))
        }
        Command::Ellis(a) => {
            if let Some(n) = a.sweep {
                if n == 0 {
                    return Err(Failure::usage("--sweep needs at least one point"));
                }
                let report = sweep(n, a.with_identity);
                let summary = sweep_summary(&report);
                eprintln!("{summary}");
                let ok = report.violations.is_empty();
                json(header, &SweepOutput { summary, report })?;
                return Ok(check(ok, "LawViolated", || "semigroup law violations found".into()));
            }
            let text = a.map.as_deref().unwrap_or_default();
            header.input_sha256 = Some(sha256_hex(&[text.as_bytes()]));
            let sys = FiniteDynSys::parse(text)?;
            let report = analyze_system(&sys, a.with_identity);
            let ok = report.laws.violations.is_empty();
            json(header, &report)?;
            Ok(check(ok, "LawViolated", || report.laws.violations.join("; ")))
        }
        Command::Classify(a) => {
            let x = load(&a.sft, header)?;
            let result = classify_output(&x, a.budget, a.emit_witnesses.as_deref(), header)?;
            json(header, &result)?;
            Ok(check(result.audit.ok, "AuditFailed", || result.audit.violations.join("; ")))
        }
        Command::GenCorpus(a) => {
            header.seed = Some(a.seed);
            let class = parse_class(&a.class)?;
            let manifest = write_corpus(a, class)?;
            let text = to_pretty(&Envelope {
                header,
                result: &manifest,
            });
            fs::write(a.out.join("manifest.json"), &text).map_err(|e| Failure::usage(e.to_string()))?;
            emit(out, &text)?;
            Ok(None)
        }
        Command::Dot(a) => {
            let bytes = read_input(&a.sft)?;
            let x = parse_sft_bytes(&bytes)?;
            let mut hashed = vec![bytes];
            let (graph, name) = if let Some(p) = &a.product {
                let other = read_input(p)?;
                let y = parse_sft_bytes(&other)?;
                hashed.push(other);
                (x.product(&y)?, "product")
            } else if a.self_product {
                (x.product(&x)?, "product")
            } else if a.decomposition {
                (decompose_periodic(&x)?.x0, "x0")
            } else {
                (x, "shift")
            };
            let parts: Vec<&[u8]> = hashed.iter().map(Vec::as_slice).collect();
            header.input_sha256 = Some(sha256_hex(&parts));
            let text = format!(
                "// {} {} {} input_sha256={}\n{}",
                header.tool,
                header.version,
                header.command,
                header.input_sha256.as_deref().unwrap_or(""),
                to_dot(&graph, name)
            );
            emit(out, &text)?;
            Ok(None)
        }
    }
}

fn check(ok: bool, reason: &str, message: impl FnOnce() -> String) -> Option<Failure> {
    (!ok).then(|| Failure::verification(reason, message()))
}

fn load(path: &Path, header: &mut Header) -> CmdResult<SftPresentation> {
    let bytes = read_input(path)?;
    header.input_sha256 = Some(sha256_hex(&[&bytes]));
    parse_sft_bytes(&bytes)
}

pub fn failing_conditions(checks: &[symchaos_core::construct::StageCheck]) -> Vec<String> {
    checks
        .iter()
        .flat_map(|s| {
            s.conditions.iter().filter(|c| !c.pass).map(move |c| {
                if c.detail.is_empty() {
                    format!("stage {} condition {}", s.n, c.condition)
                } else {
                    format!("stage {} condition {}: {}", s.n, c.condition, c.detail)
                }
            })
        })
        .collect()
}

fn sweep_summary(r: &SweepReport) -> String {
    let sizes: Vec<String> = r.per_size.iter().map(|(n, c)| format!("{c} of size {n}")).collect();
    let at_max = r.per_size.last().map_or(0, |&(_, c)| c);
    format!(
        "{at_max} systems, {} law violations (all sizes: {} systems = {})",
        r.violations.len(),
        r.systems,
        sizes.join(" + ")
    )
}

fn parse_class(s: &str) -> CmdResult<CorpusClass> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| Failure::usage(format!("unknown corpus class {s:?}")))
}

#[derive(Serialize)]
struct HitOutput {
    u: String,
    v: String,
    hitting_set: HittingSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    filter_law: Option<FilterLawVerdict>,
}

#[derive(Serialize)]
struct CriterionOutput {
    report: CriterionReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    prox_density: Option<ProxDensityReport>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairCheck {
    pub witness: PairWitness,
    pub li_yorke: bool,
    pub strong_li_yorke: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessOutput {
    pub e_prox: u32,
    pub delta_exponent: u32,
    pub horizon: usize,
    pub pairs: Vec<PairCheck>,
}

impl WitnessOutput {
    pub fn new(pairs: Vec<PairWitness>, e_prox: u32, delta_exponent: u32, horizon: usize) -> Self {
        let delta = Dist::pow(delta_exponent);
        WitnessOutput {
            e_prox,
            delta_exponent,
            horizon,
            pairs: pairs
                .into_iter()
                .map(|w| PairCheck {
                    li_yorke: li_yorke_check(&w, e_prox, delta),
                    strong_li_yorke: strong_liyorke_check(&w, e_prox),
                    witness: w,
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct SweepOutput {
    summary: String,
    report: SweepReport,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassifyOutput {
    pub budget: usize,
    pub report: ChaosReport,
    pub audit: AuditResult,
    /// Files written by `--emit-witnesses`, each verifiable on its own.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub emitted: Vec<String>,
}

pub const WITNESS_PAIRS: usize = 2;
pub const WITNESS_EPROX: u32 = 8;
pub const WITNESS_HORIZON: usize = 4096;
pub const WITNESS_LEVELS: usize = 3;

fn classify_output(
    x: &SftPresentation,
    budget: usize,
    emit_dir: Option<&Path>,
    header: &Header,
) -> CmdResult<ClassifyOutput> {
    let report = classify(x, budget)?;
    let audit = implication_audit(&report);
    let chaotic = report.flags.get("uniformly_chaotic") == Some(Tri::Yes);
    let mut emitted = Vec::new();
    if let Some(dir) = emit_dir.filter(|_| chaotic && report.infinite == Tri::Yes) {
        fs::create_dir_all(dir).map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?;
        let pairs = make_scrambled_pairs(x, WITNESS_PAIRS, WITNESS_EPROX, Dist::pow(1), WITNESS_HORIZON)?;
        let pairs = WitnessOutput::new(pairs, WITNESS_EPROX, 1, WITNESS_HORIZON);
        let opts = ConstructOptions {
            proximal: true,
            ..ConstructOptions::default()
        };
        let cert = build_stages(x, WITNESS_LEVELS, &opts)?;
        for (name, text) in [
            ("pairs.json", pairs.render(header)),
            ("construction.json", cert.render(header)),
        ] {
            let path = dir.join(name);
            write_file(&path, &text)?;
            emitted.push(path.display().to_string());
        }
    }
    Ok(ClassifyOutput {
        budget,
        report,
        audit,
        emitted,
    })
}

fn write_file(path: &Path, text: &str) -> CmdResult<()> {
    fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct ManifestEntry {
    file: String,
    sha256: String,
    stats: ShiftStats,
}

#[derive(Serialize)]
struct Manifest {
    options: CorpusOptions,
    transitive: usize,
    entries: Vec<ManifestEntry>,
}

fn write_corpus(a: &crate::GenCorpusArgs, class: CorpusClass) -> CmdResult<Manifest> {
    let options = CorpusOptions {
        seed: a.seed,
        count: a.count,
        alphabet_max: a.alphabet_max,
        vertex_max: a.vertex_max,
        class,
    };
    let corpus = gen_corpus(&options)?;
    fs::create_dir_all(&a.out).map_err(|e| Failure::usage(format!("{}: {e}", a.out.display())))?;
    let mut entries = Vec::new();
    for e in &corpus {
        let file = format!("{}.json", e.name);
        let mut text = to_json(&e.sft);
        text.push('\n');
        write_file(&a.out.join(&file), &text)?;
        entries.push(ManifestEntry {
            file,
            sha256: sha256_hex(&[text.as_bytes()]),
            stats: e.stats.clone(),
        });
    }
    Ok(Manifest {
        transitive: corpus.iter().filter(|e| e.stats.transitive).count(),
        options,
        entries,
    })
}

/// Lets one closure render results of different types.
mod erased {
    use serde::Serialize;

    use crate::report::{to_pretty, Envelope, Header};

    pub trait Json {
        fn render(&self, header: &Header) -> String;
    }

    impl<T: Serialize> Json for T {
        fn render(&self, header: &Header) -> String {
            to_pretty(&Envelope { header, result: self })
        }
    }
}
