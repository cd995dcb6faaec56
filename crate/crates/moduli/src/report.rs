//! JSON and CSV rendering. All numbers are exact `p/q` strings; object keys
//! are sorted, so output is byte-stable across runs.

use moduli_core::campaigns::{
    AffineCoeff, CellRecord, DifvarReport, Expected, FmReport, Mismatch, TableReport, ThresholdReport,
};
use moduli_core::catalog::{CatalogEntry, Generator};
use moduli_core::certify::Certificate;
use moduli_core::rational::fmt_q;
use moduli_core::singularity::AgeRecord;
use moduli_core::{DivisorClass, SpaceContext, Q};
use serde_json::{json, Map, Value};

pub fn q(x: &Q) -> Value {
    Value::String(fmt_q(x))
}

fn opt_q(x: &Option<Q>) -> Value {
    x.as_ref().map_or(Value::Null, q)
}

fn opt_u(x: Option<u32>) -> Value {
    x.map_or(Value::Null, Value::from)
}

pub fn context(ctx: &SpaceContext) -> Value {
    json!({
        "space": ctx.to_string(),
        "g": ctx.g(),
        "n": ctx.n(),
        "level": ctx.level().to_string(),
    })
}

pub fn class(cls: &DivisorClass) -> Value {
    let terms: Map<String, Value> = cls.terms().map(|(s, c)| (s.to_string(), q(c))).collect();
    json!({ "context": context(cls.ctx()), "terms": terms })
}

pub fn generator(gen: &Generator) -> Value {
    json!({
        "name": gen.name,
        "mode": gen.mode().to_string(),
        "class": class(&gen.class),
        "known": gen.known.as_ref().map(|k| k.iter().map(|s| s.to_string()).collect::<Vec<_>>()),
        "assumptions": gen.assumptions,
        "citation": gen.citation,
    })
}

pub fn certificate(cert: &Certificate, citations: &[String]) -> Value {
    let multipliers: Map<String, Value> = cert
        .generators
        .iter()
        .zip(&cert.multipliers)
        .map(|(n, x)| (n.clone(), q(x)))
        .collect();
    let residual: Map<String, Value> = cert
        .coordinates
        .iter()
        .map(|c| (c.to_string(), q(&cert.residual.coeff(c))))
        .collect();
    json!({
        "context": context(&cert.context),
        "verdict": cert.verdict.to_string(),
        "epsilon": q(&cert.epsilon),
        "sup_epsilon": opt_q(&cert.sup_epsilon),
        "multipliers": multipliers,
        "residual": residual,
        "coordinates": cert.coordinates.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "mode": cert.mode.to_string(),
        "conditional": !cert.assumptions.is_empty(),
        "assumptions": cert.assumptions,
        "citations": citations,
    })
}

pub fn catalog(entries: &[CatalogEntry]) -> Value {
    Value::Array(
        entries
            .iter()
            .map(|e| {
                json!({
                    "name": e.name,
                    "context": e.context,
                    "validity": e.validity,
                    "mode": e.mode.to_string(),
                    "citation": e.citation,
                })
            })
            .collect(),
    )
}

fn expected(e: &Option<Expected>) -> Value {
    e.map_or(
        Value::Null,
        |e| json!({ "n_min": opt_u(e.n_min), "n_max": opt_u(e.n_max), "source": e.source }),
    )
}

fn mismatch(m: &Mismatch) -> Value {
    json!({
        "g": m.g,
        "field": m.field,
        "expected": opt_u(m.expected),
        "found": opt_u(m.found),
        "documented": m.documented,
        "note": m.note,
    })
}

fn cell(c: &CellRecord) -> Value {
    json!({
        "g": c.g,
        "n": c.n,
        "verdict": c.verdict.to_string(),
        "sup_epsilon": opt_q(&c.sup),
        "generators": c.generators,
        "conditional": c.conditional,
    })
}

/// `cells` adds every grid cell; otherwise only rows and mismatches.
pub fn table(report: &TableReport, cells: bool) -> Value {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            json!({
                "g": r.g,
                "n_min": opt_u(r.n_min),
                "n_max": opt_u(r.n_max),
                "expected": expected(&r.expected),
                "gaps": r.gaps,
                "conditional": r.conditional,
            })
        })
        .collect();
    let mut out = json!({
        "table": report.id,
        "rows": rows,
        "mismatches": report.mismatches.iter().map(mismatch).collect::<Vec<_>>(),
    });
    if cells {
        out["cells"] = Value::Array(report.cells.iter().map(cell).collect());
    }
    out
}

pub fn table_csv(report: &TableReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let _ = w.write_record([
        "g",
        "n_min",
        "n_max",
        "expected_n_min",
        "expected_n_max",
        "conditional",
        "gaps",
    ]);
    let s = |x: Option<u32>| x.map_or(String::new(), |v| v.to_string());
    for r in &report.rows {
        let gaps: Vec<String> = r.gaps.iter().map(|g| g.to_string()).collect();
        let _ = w.write_record([
            r.g.to_string(),
            s(r.n_min),
            s(r.n_max),
            s(r.expected.and_then(|e| e.n_min)),
            s(r.expected.and_then(|e| e.n_max)),
            r.conditional.to_string(),
            gaps.join(" "),
        ]);
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().unwrap_or_default()).unwrap_or_default()
}

pub fn fm(r: &FmReport) -> Value {
    json!({
        "g": r.g,
        "partition": r.partition,
        "choices": r.choices.iter().map(|c| format!("{c:?}")).collect::<Vec<_>>(),
        "epsilon": opt_q(&r.epsilon),
        "f_value": opt_q(&r.f_value),
        "slope": opt_q(&r.slope),
        "verdict": r.verdict.to_string(),
        "note": r.note,
        "certificate": r.certificate.as_ref().map(|c| certificate(c, &citations(&r.generators))),
    })
}

pub fn citations(gens: &[Generator]) -> Vec<String> {
    gens.iter().map(|g| format!("{}: {}", g.name, g.citation)).collect()
}

pub fn difvar(r: &DifvarReport) -> Value {
    json!({
        "table": "difvar",
        "rows": r.rows.iter().map(|row| json!({
            "g": row.g,
            "n_min": opt_u(row.n_min),
            "expected": opt_u(row.expected),
            "f_at_min": opt_q(&row.f_at_min),
        })).collect::<Vec<_>>(),
        "mismatches": r.mismatches.iter().map(mismatch).collect::<Vec<_>>(),
    })
}

pub fn difvar_csv(r: &DifvarReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let _ = w.write_record(["g", "n_min", "expected", "f_at_min"]);
    let s = |x: Option<u32>| x.map_or(String::new(), |v| v.to_string());
    for row in &r.rows {
        let f = row.f_at_min.as_ref().map_or(String::new(), fmt_q);
        let _ = w.write_record([row.g.to_string(), s(row.n_min), s(row.expected), f]);
    }
    finish(w)
}

fn affine(a: &AffineCoeff) -> Value {
    json!({
        "coordinate": a.coord.to_string(),
        "constant": q(&a.constant),
        "epsilon_coefficient": q(&a.slope),
        "vanishes_at": opt_q(&a.vanishes_at()),
    })
}

pub fn threshold(r: &ThresholdReport, residual: bool) -> Value {
    let mut out = json!({
        "g": r.g,
        "effective_at": opt_u(r.effective_at),
        "big_from": opt_u(r.big_from),
        "expected": [4 * r.g + 6, 4 * r.g + 7],
        "sup_epsilon_at_big_from": opt_q(&r.sup_epsilon),
    });
    if residual {
        out["residual"] = Value::Array(r.residual.iter().map(affine).collect());
    }
    out
}

pub fn threshold_csv(rows: &[ThresholdReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let _ = w.write_record([
        "g",
        "effective_at",
        "big_from",
        "expected_effective_at",
        "expected_big_from",
    ]);
    let s = |x: Option<u32>| x.map_or(String::new(), |v| v.to_string());
    for r in rows {
        let _ = w.write_record([
            r.g.to_string(),
            s(r.effective_at),
            s(r.big_from),
            (4 * r.g + 6).to_string(),
            (4 * r.g + 7).to_string(),
        ]);
    }
    finish(w)
}

pub fn reference(rows: &[Expected]) -> Value {
    json!({
        "table": "reference",
        "rows": rows.iter().map(|e| json!({ "g": e.g, "n_min": opt_u(e.n_min), "source": e.source })).collect::<Vec<_>>(),
    })
}

pub fn reference_csv(rows: &[Expected]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let _ = w.write_record(["g", "n_min"]);
    for e in rows {
        let _ = w.write_record([e.g.to_string(), e.n_min.map_or(String::new(), |v| v.to_string())]);
    }
    finish(w)
}

pub fn age_record(r: &AgeRecord) -> Value {
    json!({
        "g": r.g,
        "action": format!("{:?}", r.action),
        "found": r.found.to_string(),
        "expected": r.expected.to_string(),
        "min_age": r.min_age.as_ref().map(|(a, _)| fmt_q(a)),
        "unit": r.min_age.as_ref().map(|(_, u)| *u),
    })
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).unwrap_or_default();
    s.push('\n');
    s
}
