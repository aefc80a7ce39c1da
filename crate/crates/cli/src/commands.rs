//! `eval`, `pathology` and `select`.

use serde_json::{json, Value};
use subm_core::pathology::{integer_pathology_criterion, pathology_degree, subset_values, verify_hull_certificate, CriterionVerdict, LP_CAP};
use subm_core::rational::parse_rational;
use subm_core::selectors::{
    bp_select, c0like_selector, property_a_selector, schreier_selector, small_norm_selector, tall_selector, BpMode, BpSelection, SelectorCertificate, SelectorError,
};
use subm_core::{FinSet, SetStream};

use crate::report::{measure_json, q, set_json, Report, Status};
use crate::specfile::{parse_stream, LoadedSpec};
use crate::CliError;

/// Output flags shared by every command.
#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub json: bool,
    pub approx: bool,
}

pub fn verdict_string(v: &CriterionVerdict) -> String {
    match v {
        CriterionVerdict::Fired { value, size } => format!("FIRED (value {value} < size {size})"),
        CriterionVerdict::NotFired { reason } => format!("NOT FIRED ({reason})"),
        CriterionVerdict::Inapplicable { set, value } => format!("INAPPLICABLE (φ({set}) = {value})"),
    }
}

pub fn cmd_eval(spec: &LoadedSpec, set: &FinSet) -> Result<Report, CliError> {
    let set_text = set.to_string();
    let mut r = Report::new(format!("eval --set {set_text}"), &[&spec.bytes, set_text.as_bytes()]);
    let v = spec.spec.eval(set)?;
    r.field("spec", spec.label.clone()).field("set", set_json(set)).ext_rat("value", &v);
    if let subm_core::SubmeasureSpec::Cover(c) = &spec.spec {
        if let Some(parts) = c.cover(set)? {
            r.certificate = Some(json!({ "cover": parts.iter().map(set_json).collect::<Vec<_>>() }));
        }
    }
    Ok(r)
}

pub fn cmd_pathology(spec: &LoadedSpec, universe: Option<u64>, max_size: Option<usize>) -> Result<Report, CliError> {
    let u = universe.or(spec.universe).unwrap_or(8);
    if u > 63 {
        return Err(CliError::Usage(format!("--universe {u} exceeds 63")));
    }
    let s = max_size.unwrap_or((u as usize).min(6));
    if s > LP_CAP {
        return Err(CliError::Usage(format!("--max-size {s} exceeds the LP cap {LP_CAP}")));
    }
    let mut r = Report::new(format!("pathology --universe {u} --max-size {s}"), &[&spec.bytes, &u.to_le_bytes(), &(s as u64).to_le_bytes()]);
    let p = pathology_degree(&spec.spec, u, s)?;
    r.field("spec", spec.label.clone())
        .field("universe", u)
        .field("max_size", s as u64)
        .fraction("degree", &p.degree)
        .field("scanned", p.scanned)
        .field("skipped_infinite", p.skipped_infinite)
        .field("skipped_null", p.skipped_null);
    if p.empty_scan {
        r.field("note", "no set with finite value and nonzero hull; degree 1 by convention");
    }
    let mut cert = serde_json::Map::new();
    if let (Some(w), Some(v), Some(h)) = (&p.witness_set, &p.witness_value, &p.witness_hull) {
        r.field("witness_set", set_json(w)).rational("witness_value", v).rational("witness_hull", &h.value);
        let phi = subset_values(&spec.spec, w)?;
        let ok = verify_hull_certificate(w, &phi, h);
        r.check("hull certificate", "packing and cover agree", ok.map_or_else(|e| e.to_string(), |_| "verified".into()), Status::from_bool(ok.is_ok()));
        cert.insert("witness_measure".into(), measure_json(&h.witness));
        cert.insert("fractional_cover".into(), Value::Array(h.cover.iter().map(|(b, y)| json!([set_json(b), q(y)])).collect()));
        let verdict = integer_pathology_criterion(&spec.spec, w)?;
        r.field("criterion_on_witness", verdict_string(&verdict));
    }
    if let Some(tu) = spec.universe {
        let full = FinSet::range(tu);
        if full.len() >= 2 && full.len() <= LP_CAP {
            let verdict = integer_pathology_criterion(&spec.spec, &full)?;
            r.field("criterion_on_universe", verdict_string(&verdict));
        }
    }
    if !cert.is_empty() {
        r.certificate = Some(Value::Object(cert));
    }
    Ok(r)
}

/// Arguments of `select`.
#[derive(Debug, Clone)]
pub struct SelectArgs {
    pub selector: String,
    pub stream: String,
    pub length: usize,
    pub budget: u64,
    pub alpha: Option<String>,
    pub p: u32,
    pub heuristic: bool,
}

pub fn certificate_json(c: &SelectorCertificate) -> Value {
    json!({
        "route": c.route.name(),
        "selected": set_json(&c.selected),
        "M": q(&c.bound),
        "value": q(&c.value),
        "verified": c.verified,
        "certified": c.certified,
        "ledger": c.evidence.iter().map(|e| json!({
            "label": e.label,
            "lhs": q(&e.lhs),
            "rel": e.rel.to_string(),
            "rhs": q(&e.rhs),
            "holds": e.holds,
        })).collect::<Vec<_>>(),
    })
}

fn bp_json(s: &BpSelection) -> Value {
    json!({
        "alpha": q(&s.alpha),
        "b": s.b,
        "cuts": s.cuts,
        "blocks": s.blocks.iter().map(|v| v.entries().iter().map(|(k, r)| json!([k, q(r)])).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn cmd_select(spec: &LoadedSpec, args: &SelectArgs) -> Result<Report, CliError> {
    let mut stream = parse_stream(&args.stream)?;
    let command = format!(
        "select --selector {} --stream {} --length {} --budget {}{}{}{}",
        args.selector,
        args.stream,
        args.length,
        args.budget,
        args.alpha.as_ref().map_or(String::new(), |a| format!(" --alpha {a}")),
        if args.selector == "schreier" { format!(" --p {}", args.p) } else { String::new() },
        if args.heuristic { " --heuristic" } else { "" },
    );
    let mut r = Report::new(command.clone(), &[&spec.bytes, command.as_bytes()]);
    r.field("spec", spec.label.clone());
    let vectors = || {
        spec.vectors.clone().ok_or_else(|| CliError::Usage(format!("selector {} needs a vector_seq spec", args.selector)))
    };
    let with_modulus = |s: SetStream, m: &Option<subm_core::stream::ColumnModulus>| match m {
        Some(m) if !s.has_modulus() && args.stream == "naturals" => s.with_modulus(m.clone()),
        _ => s,
    };
    let mut extra = None;
    let result: Result<SelectorCertificate, SelectorError> = match args.selector.as_str() {
        "small-norm" => small_norm_selector(&spec.spec, &mut stream, args.length, args.budget),
        "property-a" => property_a_selector(&spec.spec, &mut stream, args.length, args.budget),
        "c0like" => c0like_selector(&vectors()?.0, &mut stream, args.length, args.budget),
        "schreier" => schreier_selector(&vectors()?.0, args.p, &mut stream, args.length, args.budget),
        "tall" => {
            let (x, m) = vectors()?;
            tall_selector(&x, &mut with_modulus(stream, &m), args.length, args.budget)
        }
        "bp" => {
            let (x, m) = vectors()?;
            let alpha = match &args.alpha {
                Some(a) => parse_rational(a).map_err(|e| CliError::Usage(format!("--alpha: {e}")))?,
                None => subm_core::rational::int(1),
            };
            let mut s = with_modulus(stream, &m);
            let mode = if args.heuristic { BpMode::Heuristic } else { BpMode::Certified };
            bp_select(&x, &mut s, &alpha, args.length, args.budget, mode).map(|(sel, c)| {
                extra = Some(bp_json(&sel));
                c
            })
        }
        other => return Err(CliError::Usage(format!("unknown selector {other:?} (known: small-norm, property-a, c0like, schreier, bp, tall)"))),
    };
    match result {
        Ok(c) => {
            r.field("route", c.route.name())
                .field("selected_size", c.selected.len() as u64)
                .rational("M", &c.bound)
                .rational("value", &c.value)
                .field("verified", c.verified)
                .field("certified", c.certified);
            let failed: Vec<String> = c.failed().map(|e| format!("{}: {} {} {}", e.label, q(&e.lhs), e.rel, q(&e.rhs))).collect();
            let holds = c.evidence.len() - failed.len();
            r.check(
                "ledger",
                format!("{} inequalities hold", c.evidence.len()),
                if failed.is_empty() { format!("{holds} hold") } else { format!("{holds} hold; failed: {}", failed.join("; ")) },
                Status::from_bool(c.verified),
            );
            if !c.certified && !args.heuristic {
                r.check("certified", "selection backed by a modulus or an exhausted stream", "budgeted scan only; rerun with --heuristic to accept", Status::Inconclusive);
            }
            let mut cert = certificate_json(&c);
            if let (Some(e), Value::Object(m)) = (extra, &mut cert) {
                m.insert("block_sequence".into(), e);
            }
            r.certificate = Some(cert);
        }
        Err(e) => {
            let status = match &e {
                SelectorError::Inconclusive { .. } | SelectorError::NoExtension { .. } | SelectorError::ShortStream { .. } => Status::Inconclusive,
                SelectorError::Eval(subm_core::EvalError::BudgetExhausted { .. }) => Status::Inconclusive,
                SelectorError::Coloring(subm_core::colorings::ColoringError::BudgetExhausted { .. } | subm_core::colorings::ColoringError::RamseyBudget { .. }) => {
                    Status::Inconclusive
                }
                SelectorError::AlphaNotPositive | SelectorError::MissingModulus => return Err(CliError::Usage(e.to_string())),
                _ => Status::Fail,
            };
            r.field("verified", false);
            r.check("selection", format!("a {} selection of length {}", args.selector, args.length), e.to_string(), status);
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfile::load_spec_str;

    const PHI0: &str = r#"{"kind":"table","universe":3,"values":[0,1,1,1,1,1,1,2]}"#;

    fn args(selector: &str, stream: &str, length: usize) -> SelectArgs {
        SelectArgs { selector: selector.into(), stream: stream.into(), length, budget: 10_000, alpha: None, p: 0, heuristic: false }
    }

    #[test]
    fn eval_examples() {
        let s = load_spec_str(PHI0).unwrap();
        assert_eq!(cmd_eval(&s, &FinSet::from([0, 1, 2])).unwrap().get("value").unwrap(), "2");
        assert_eq!(cmd_eval(&s, &FinSet::new()).unwrap().get("value").unwrap(), "0");
        let ed = load_spec_str(r#"{"kind":"named","ideal":"ED"}"#).unwrap();
        let r = cmd_eval(&ed, &FinSet::from([0, 1, 4])).unwrap();
        assert_eq!(r.get("value").unwrap(), "2");
        assert!(r.certificate.is_some());
    }

    #[test]
    fn pathology_examples() {
        let s = load_spec_str(PHI0).unwrap();
        let r = cmd_pathology(&s, None, None).unwrap();
        assert_eq!(r.get("degree").unwrap(), "4/3");
        assert!(r.get("criterion_on_universe").unwrap().as_str().unwrap().starts_with("FIRED"));
        assert_eq!(r.exit_code(), 0);
        let m = load_spec_str(r#"{"kind":"sup_measures","measures":[[[0,"1/2"],[1,1]],[[1,2],[2,"1/3"]]]}"#).unwrap();
        assert_eq!(cmd_pathology(&m, Some(4), Some(4)).unwrap().get("degree").unwrap(), "1/1");
        assert!(matches!(cmd_pathology(&s, Some(3), Some(20)), Err(CliError::Usage(_))));
    }

    #[test]
    fn select_examples() {
        let basis = load_spec_str(r#"{"kind":"vector_seq","generator":"basis"}"#).unwrap();
        let r = cmd_select(&basis, &args("bp", "naturals", 20)).unwrap();
        assert_eq!(r.get("M").unwrap(), "3/2");
        assert_eq!(r.exit_code(), 0);

        let bm = load_spec_str(r#"{"kind":"named","ideal":"block-multiples"}"#).unwrap();
        let r = cmd_select(&bm, &SelectArgs { budget: 400, ..args("tall", "diagonal", 10) }).unwrap();
        assert_eq!(r.exit_code(), 1);
        assert_eq!(r.get("verified").unwrap(), false);

        let c = load_spec_str(r#"{"kind":"vector_seq","generator":"c0like-blocks"}"#).unwrap();
        let r = cmd_select(&c, &args("c0like", "squares", 20)).unwrap();
        assert_eq!(r.get("M").unwrap(), "2");
        assert_eq!(r.exit_code(), 0);

        let flat = load_spec_str(r#"{"kind":"vector_seq","generator":"flat"}"#).unwrap();
        assert_eq!(cmd_select(&flat, &SelectArgs { budget: 50, ..args("small-norm", "naturals", 3) }).unwrap().exit_code(), 3);
        assert!(matches!(cmd_select(&flat, &args("bogus", "naturals", 3)), Err(CliError::Usage(_))));
    }
}
