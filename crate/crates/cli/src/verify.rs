//! Re-checks any report this tool writes, given the shift it was made for.

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;
use symchaos_core::classify::{classify, implication_audit, ChaosReport};
use symchaos_core::construct::{verify_certificate, ConstructionCertificate, StageCheck};
use symchaos_core::criterion::{verify_criterion, DEFAULT_BUDGET, verify_prox, CriterionReport, ProxDensityReport};
use symchaos_core::decide::{verify_report, DecisionReport};
use symchaos_core::witness::{li_yorke_check, verify_pair_witness};
use symchaos_core::{Dist, SftPresentation};

use crate::commands::{failing_conditions, ClassifyOutput, WitnessOutput};
use crate::report::{CmdResult, Failure};

#[derive(Debug, Serialize)]
pub struct VerifyOutcome {
    pub kind: &'static str,
    pub pass: bool,
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<StageCheck>>,
}

impl VerifyOutcome {
    fn new(kind: &'static str, failures: Vec<String>) -> Self {
        VerifyOutcome {
            kind,
            pass: failures.is_empty(),
            failures,
            checks: None,
        }
    }
}

fn decode<T: DeserializeOwned>(v: &Value) -> CmdResult<T> {
    serde_json::from_value(v.clone()).map_err(|e| Failure::parse(e.to_string()))
}

/// Accepts a full envelope or a bare result.
pub fn verify_document(x: &SftPresentation, doc: &Value) -> CmdResult<VerifyOutcome> {
    let body = match doc.get("result") {
        Some(r) if doc.get("header").is_some() => r,
        _ => doc,
    };
    let has = |v: &Value, k: &str| v.get(k).is_some();
    if body.is_array() {
        return Ok(decisions(x, &decode::<Vec<DecisionReport>>(body)?));
    }
    if has(body, "stages") {
        return Ok(construction(x, &decode(body)?));
    }
    if has(body, "pairs") && has(body, "e_prox") {
        return Ok(witnesses(x, &decode(body)?));
    }
    if has(body, "satisfied") {
        return Ok(criterion(x, &decode(body)?, None));
    }
    if let Some(r) = body.get("report") {
        if has(r, "satisfied") {
            let prox = body.get("prox_density").map(decode).transpose()?;
            return Ok(criterion(x, &decode(r)?, prox.as_ref()));
        }
        if has(r, "flags") {
            return Ok(classification(x, &decode(body)?));
        }
    }
    if has(body, "flags") {
        let report: ChaosReport = decode(body)?;
        return Ok(classification(
            x,
            &ClassifyOutput {
                budget: DEFAULT_BUDGET,
                audit: implication_audit(&report),
                report,
                emitted: Vec::new(),
            },
        ));
    }
    Err(Failure::parse("unrecognized certificate document"))
}

fn decisions(x: &SftPresentation, reports: &[DecisionReport]) -> VerifyOutcome {
    let failures = reports
        .iter()
        .filter(|r| !verify_report(x, r))
        .map(|r| format!("{}: certificate does not re-check", r.property))
        .collect();
    VerifyOutcome::new("decisions", failures)
}

fn construction(x: &SftPresentation, cert: &ConstructionCertificate) -> VerifyOutcome {
    match verify_certificate(x, cert) {
        Ok(checks) => {
            let mut out = VerifyOutcome::new("construction", failing_conditions(&checks));
            out.checks = Some(checks);
            out
        }
        Err(e) => VerifyOutcome::new("construction", vec![format!("certificate unreadable: {e}")]),
    }
}

fn witnesses(x: &SftPresentation, w: &WitnessOutput) -> VerifyOutcome {
    let delta = Dist::pow(w.delta_exponent);
    let mut failures = Vec::new();
    for (i, p) in w.pairs.iter().enumerate() {
        let pair = &p.witness;
        if !x.point_is_legal(&pair.x) || !x.point_is_legal(&pair.y) {
            failures.push(format!("pair {i}: point not in the shift"));
        }
        if !verify_pair_witness(pair) {
            failures.push(format!("pair {i}: recorded distances are wrong"));
        }
        if pair.horizon > w.horizon {
            failures.push(format!("pair {i}: horizon exceeds {}", w.horizon));
        }
        if p.li_yorke != li_yorke_check(pair, w.e_prox, delta) || !p.li_yorke {
            failures.push(format!("pair {i}: Li-Yorke check"));
        }
    }
    VerifyOutcome::new("witness", failures)
}

fn criterion(x: &SftPresentation, r: &CriterionReport, prox: Option<&ProxDensityReport>) -> VerifyOutcome {
    let mut failures = Vec::new();
    if !verify_criterion(x, r) {
        failures.push("subsystem or product certificate does not re-check".to_string());
    }
    if let Some(p) = prox {
        for s in &p.samples {
            let tuple: Option<Vec<_>> = s.tuple.iter().map(|w| x.parse_word(w).ok()).collect();
            if !tuple.is_some_and(|t| verify_prox(&t, p.eps_exponent, &s.outcome, x)) {
                failures.push(format!("prox sample {}", s.index));
            }
        }
    }
    VerifyOutcome::new("criterion", failures)
}

fn classification(x: &SftPresentation, out: &ClassifyOutput) -> VerifyOutcome {
    let mut failures: Vec<String> = implication_audit(&out.report)
        .violations
        .into_iter()
        .map(|v| format!("audit: {v}"))
        .collect();
    match classify(x, out.budget) {
        Ok(fresh) if fresh.flags != out.report.flags => failures.push("flags differ from a fresh classification".into()),
        Ok(_) => {}
        Err(e) => failures.push(format!("classification failed: {e}")),
    }
    VerifyOutcome::new("classify", failures)
}
