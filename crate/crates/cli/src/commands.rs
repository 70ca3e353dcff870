use std::collections::BTreeMap;

use rug::Integer;
use serde_json::{json, Value};

use crownvol::crown::crown_volume_at_zero;
use crownvol::ngon::{ngon_volume_mc, ngon_volume_quadrature, ngon_volume_series, ngon_volume_u_mc, McEstimate, McSpec};
use crownvol::recognize::{available_digits, GUARD_DIGITS};
use crownvol::ring::precision::format_sig;
use crownvol::surface::parse_wp_polynomial;
use crownvol::verify::{run_suite, Suite};
use crownvol::{
    annulus_volume, annulus_volume_fixed_neck, crown_total_volume, crown_volume_fixed_neck, enumerate_basis,
    ngon_conjecture_volume, recognize_value, surface_volume_fixed, surface_volume_free, BasisFlags, PrecisionValue,
    SurfaceSpec, SymbolicValue,
};

use crate::output::Document;
use crate::{exact_input, usage, Failure, RunConfig};

const CONJECTURE_TAG: &str = "[CONJECTURE]";

fn numeric_json(v: &PrecisionValue) -> Value {
    json!({
        "value": v.to_decimal(v.display_digits()),
        "abs_error": format_sig(v.abs_error(), 3),
    })
}

fn short(v: &PrecisionValue, cfg: &RunConfig) -> String {
    v.to_decimal(cfg.digits.min(v.display_digits()))
}

fn symbolic(v: &SymbolicValue, fields: Value) -> Document {
    let mut doc = fields;
    doc["value"] = json!(v.render_plain());
    doc["terms"] = v.to_json();
    Document::record(doc, v.render_plain(), v.render_latex(), &[("value", v.render_plain())])
}

/// Numeric result of an exact evaluation, shown with `digits` digits.
fn evaluated(v: &PrecisionValue, exact: Option<&SymbolicValue>, cfg: &RunConfig, mut fields: Value) -> Document {
    let num = short(v, cfg);
    fields["numeric"] = numeric_json(v);
    let (plain, latex) = match exact {
        Some(e) => {
            fields["value"] = json!(e.render_plain());
            (format!("{} ≈ {num}", e.render_plain()), format!("{} \\approx {num}", e.render_latex()))
        }
        None => (num.clone(), num.clone()),
    };
    let mut row = vec![("numeric", v.to_decimal(v.display_digits()))];
    if let Some(e) = exact {
        row.insert(0, ("value", e.render_plain()));
    }
    Document::record(fields, plain, latex, &row)
}

pub fn crown(cfg: &RunConfig, n: u32, d: Option<&str>, total: bool) -> Result<Document, Failure> {
    let cv = crown_volume_fixed_neck(n)?;
    if total {
        return Ok(symbolic(&crown_total_volume(n)?, json!({"n": n, "neck": "free"})));
    }
    match d {
        Some(d) => {
            let bits = cfg.bits(128);
            let dv = exact_input(d, bits)?;
            let v = cv.eval(&dv, bits)?;
            let exact = if dv.value().is_zero() { Some(crown_volume_at_zero(n)?) } else { None };
            Ok(evaluated(&v, exact.as_ref(), cfg, json!({"n": n, "d": d})))
        }
        None => {
            let plain = cv.render_plain();
            let doc = json!({"n": n, "volume": plain, "latex": cv.render_latex(), "degree": cv.degree()});
            Ok(Document::record(doc, plain.clone(), cv.render_latex(), &[("volume", plain)]))
        }
    }
}

pub fn annulus(cfg: &RunConfig, a1: u32, a2: u32, d: Option<&str>, fixed: bool) -> Result<Document, Failure> {
    if let Some(d) = d {
        let bits = cfg.bits(128);
        let v = annulus_volume_fixed_neck(a1, a2)?.eval(&exact_input(d, bits)?, bits)?;
        return Ok(evaluated(&v, None, cfg, json!({"a1": a1, "a2": a2, "d": d})));
    }
    if fixed {
        let av = annulus_volume_fixed_neck(a1, a2)?;
        let plain = av.render_plain();
        let doc = json!({"a1": a1, "a2": a2, "volume": plain, "latex": av.render_latex()});
        return Ok(Document::record(doc, plain.clone(), av.render_latex(), &[("volume", plain)]));
    }
    Ok(symbolic(&annulus_volume(a1, a2)?, json!({"a1": a1, "a2": a2, "neck": "free"})))
}

pub enum NgonMethod {
    Quadrature,
    Series { cutoff: usize, extrapolate: bool },
    Mc { samples: u64, streams: u32 },
    UMc { samples: u64, streams: u32 },
    Conjecture,
}

fn estimate(v: &PrecisionValue, mut fields: Value) -> Document {
    let num = numeric_json(v);
    fields["value"] = num["value"].clone();
    fields["abs_error"] = num["abs_error"].clone();
    let latex = v.to_string().replace('±', "\\pm");
    let row = [("value", v.to_decimal(v.display_digits())), ("abs_error", format_sig(v.abs_error(), 3))];
    Document::record(fields, v.to_string(), latex, &row)
}

fn mc_fields(n: u32, method: &str, est: &McEstimate, spec: &McSpec) -> Value {
    json!({
        "n": n,
        "method": method,
        "samples": est.samples,
        "seed": spec.seed,
        "streams": spec.streams,
        "stderr": format_sig(&rug::Float::with_val(53, est.stderr), 3),
        "error_kind": "one standard error",
    })
}

pub fn ngon(cfg: &RunConfig, n: u32, method: NgonMethod) -> Result<Document, Failure> {
    match method {
        NgonMethod::Quadrature => {
            let est = ngon_volume_quadrature(n, &cfg.quadrature)?;
            let fields = json!({
                "n": n,
                "method": "quadrature",
                "nodes_per_panel": est.nodes_per_panel,
                "panels": est.panels,
                "levels": est.levels,
            });
            Ok(estimate(&est.value, fields))
        }
        NgonMethod::Series { cutoff, extrapolate } => {
            let est = ngon_volume_series(n, cutoff, extrapolate)?;
            let fields = json!({
                "n": n,
                "method": "series",
                "cutoff": est.cutoff,
                "extrapolated": est.extrapolated,
                "levels": est.levels,
            });
            Ok(estimate(&est.value, fields))
        }
        NgonMethod::Mc { samples, streams } => {
            let spec = McSpec { samples, seed: cfg.seed, streams };
            let est = ngon_volume_mc(n, &spec)?;
            Ok(estimate(&est.estimate, mc_fields(n, "mc", &est, &spec)))
        }
        NgonMethod::UMc { samples, streams } => {
            let spec = McSpec { samples, seed: cfg.seed, streams };
            let est = ngon_volume_u_mc(n, &spec)?;
            Ok(estimate(&est.estimate, mc_fields(n, "u-mc", &est, &spec)))
        }
        NgonMethod::Conjecture => {
            let c = ngon_conjecture_volume(n)?;
            let v = c.value.eval_const(cfg.bits(128))?;
            let plain = c.to_string();
            let latex = format!("{} \\quad \\text{{{CONJECTURE_TAG}}}", c.value.render_latex());
            let doc = json!({
                "n": n,
                "method": "conjecture",
                "status": "CONJECTURE",
                "value": c.value.render_plain(),
                "terms": c.value.to_json(),
                "numeric": numeric_json(&v),
            });
            let row = [
                ("value", c.value.render_plain()),
                ("status", "CONJECTURE".to_string()),
                ("numeric", v.to_decimal(v.display_digits())),
            ];
            Ok(Document::record(doc, plain, latex, &row))
        }
    }
}

fn assign(names: &[String], values: &[String], what: &str, bits: u32) -> Result<Vec<(String, PrecisionValue)>, Failure> {
    if names.len() != values.len() {
        return Err(usage(format!("expected {} {what}, got {}", names.len(), values.len())));
    }
    names.iter().zip(values).map(|(k, v)| Ok((k.clone(), exact_input(v, bits)?))).collect()
}

pub fn surface(
    cfg: &RunConfig,
    spec: &SurfaceSpec,
    text: &str,
    necks: Option<&[String]>,
    cuff_lengths: Option<&[String]>,
    fixed: bool,
) -> Result<Document, Failure> {
    let wp = parse_wp_polynomial(text)?;
    let fields = json!({"genus": spec.genus, "cuffs": spec.cuffs, "crowns": spec.crowns});
    if let Some(necks) = necks {
        let bits = cfg.bits(128);
        let fv = surface_volume_fixed(spec, &wp)?;
        let neck_names: Vec<String> = fv.necks.iter().map(|(v, _)| v.clone()).collect();
        let mut values: BTreeMap<String, PrecisionValue> = assign(&neck_names, necks, "neck lengths", bits)?.into_iter().collect();
        values.extend(assign(&fv.cuffs, cuff_lengths.unwrap_or(&[]), "cuff lengths", bits)?);
        let v = fv.eval(&values, bits)?;
        return Ok(evaluated(&v, None, cfg, fields));
    }
    if fixed {
        let fv = surface_volume_fixed(spec, &wp)?;
        let plain = fv.render_plain();
        let mut doc = fields;
        doc["volume"] = json!(plain);
        doc["latex"] = json!(fv.render_latex());
        doc["numerator"] = fv.numerator().to_json();
        return Ok(Document::record(doc, plain.clone(), fv.render_latex(), &[("volume", plain)]));
    }
    Ok(symbolic(&surface_volume_free(spec, &wp)?, fields))
}

pub fn verify(cfg: &RunConfig, suite: Suite) -> Result<Document, Failure> {
    let rows = run_suite(suite, cfg.bits(64))?;
    let json = serde_json::to_value(&rows).map_err(|e| usage(e.to_string()))?;
    let status = |i: usize| json[i]["status"].as_str().unwrap_or_default().to_string();
    let plain = rows
        .iter()
        .enumerate()
        .map(|(i, r)| format!("{:<12} {}: expected {}, got {} ({})", status(i), r.check, r.expected, r.got, r.tolerance))
        .collect::<Vec<_>>()
        .join("\n");
    let latex = rows
        .iter()
        .enumerate()
        .map(|(i, r)| format!("\\texttt{{{}}} & {} \\\\", r.check.replace('_', "\\_"), status(i)))
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Document {
        header: ["check", "status", "expected", "got", "tolerance"].map(String::from).to_vec(),
        rows: rows
            .iter()
            .enumerate()
            .map(|(i, r)| vec![r.check.clone(), status(i), r.expected.clone(), r.got.clone(), r.tolerance.clone()])
            .collect(),
        json,
        plain,
        latex: format!("\\begin{{tabular}}{{ll}}\n{latex}\n\\end{{tabular}}"),
    })
}

/// Name of the first failing check in a verify report.
pub fn first_failure(doc: &Document) -> Option<String> {
    doc.json
        .as_array()?
        .iter()
        .find(|r| r["status"] == "FAIL")
        .map(|r| r["check"].as_str().unwrap_or_default().to_string())
}

/// The numeric value in `text`: a JSON document with `value` and optional
/// `abs_error`, or the first non-empty line.
fn target(text: &str) -> Result<String, Failure> {
    let t = text.trim();
    if t.starts_with('{') {
        let doc: Value = serde_json::from_str(t).map_err(|e| usage(format!("input JSON: {e}")))?;
        let value = match &doc["value"] {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            _ => return Err(usage("input JSON has no numeric `value`")),
        };
        return Ok(match doc["abs_error"].as_str() {
            Some(e) => format!("{value} ± {e}"),
            None => value,
        });
    }
    t.lines().map(str::trim).find(|l| !l.is_empty()).map(String::from).ok_or_else(|| usage("empty value"))
}

pub fn recognize(
    cfg: &RunConfig,
    text: &str,
    degree: u32,
    flags: &BasisFlags,
    max_height: Option<&str>,
) -> Result<Document, Failure> {
    let input = target(text)?;
    let x = PrecisionValue::parse(&input, cfg.bits(64))?;
    let basis = enumerate_basis(degree, flags);
    if basis.is_empty() {
        return Err(usage(format!("no monomials of degree {degree} for these flags")));
    }
    let height = match max_height {
        Some(h) => {
            let h = Integer::parse(h.trim()).map_err(|_| usage(format!("not an integer: {h:?}")))?;
            Integer::from(h)
        }
        None => {
            let room = (available_digits(&x) - GUARD_DIGITS) / (basis.len() + 1) as f64;
            Integer::from(Integer::u_pow_u(10, room.floor().max(1.0) as u32))
        }
    };
    if height < 1 {
        return Err(usage("--max-height must be positive"));
    }
    let res = recognize_value(&x, &basis, &height)?;
    let value = res.found().then(|| res.value.render_plain());
    let doc = json!({
        "target": input,
        "status": if res.found() { "FOUND" } else { "NOT_FOUND" },
        "value": value,
        "terms": res.found().then(|| res.value.to_json()),
        "residual": res.residual.as_ref().map(|r| format_sig(r.value(), 3)),
        "digits_used": res.digits_used,
        "max_height": height.to_string(),
        "basis_size": basis.len(),
    });
    let plain = value.clone().unwrap_or_else(|| "NOT FOUND".into());
    let latex = if res.found() { res.value.render_latex() } else { "\\text{NOT FOUND}".into() };
    let row = [
        ("target", input.clone()),
        ("status", doc["status"].as_str().unwrap_or_default().to_string()),
        ("value", value.unwrap_or_default()),
        ("digits_used", res.digits_used.to_string()),
    ];
    Ok(Document::record(doc, plain, latex, &row))
}
