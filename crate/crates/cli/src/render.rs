use clap::ValueEnum;
use jtheta_core::combinatorics::ReconciliationReport;
use jtheta_core::moments::{rational_string, ConjectureRow};
use jtheta_core::verify::CellOutcome;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub type Rendered = String;

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialise");
    s.push('\n');
    s
}

fn csv_string(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

/// `indices[i]` labels `terms[i]` in CSV and text output.
pub fn sequence(
    format: Format,
    name: &str,
    params: Vec<(&str, String)>,
    indices: Vec<usize>,
    terms: Vec<String>,
) -> Rendered {
    match format {
        Format::Json => {
            let params: Map<String, Value> = params.into_iter().map(|(k, v)| (k.to_string(), Value::String(v))).collect();
            pretty(&json!({ "name": name, "params": params, "terms": terms }))
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = indices.iter().zip(terms).map(|(i, t)| vec![i.to_string(), t]).collect();
            csv_string(&["index", "value"], &rows)
        }
        Format::Text => {
            let mut out = String::new();
            for (i, t) in indices.iter().zip(&terms) {
                out.push_str(&format!("{name}({i}) = {t}\n"));
            }
            out
        }
    }
}

pub fn reports(format: Format, outcomes: &[CellOutcome]) -> Rendered {
    match format {
        Format::Json => pretty(&serde_json::to_value(outcomes).expect("reports serialise")),
        Format::Csv => {
            let rows: Vec<Vec<String>> = outcomes
                .iter()
                .map(|o| match o {
                    CellOutcome::Report(r) => vec![
                        r.identity.name().to_string(),
                        r.n.to_string(),
                        r.k.clone(),
                        r.digits.to_string(),
                        r.lhs.to_string(),
                        r.rhs.to_string(),
                        r.residual.to_string(),
                        r.tolerance.to_string(),
                        r.passed.to_string(),
                        String::new(),
                    ],
                    CellOutcome::Error { identity, n, k, error } => {
                        let mut row = vec![identity.name().to_string(), n.to_string(), k.clone()];
                        row.extend(std::iter::repeat_n(String::new(), 5));
                        row.push("false".into());
                        row.push(error.clone());
                        row
                    }
                })
                .collect();
            csv_string(
                &["identity", "n", "k", "digits", "lhs", "rhs", "residual", "tolerance", "passed", "error"],
                &rows,
            )
        }
        Format::Text => {
            let mut out = String::new();
            for o in outcomes {
                match o {
                    CellOutcome::Report(r) => out.push_str(&format!(
                        "{} {:<20} n={:<2} k={:<22} residual={} tolerance={}\n",
                        if r.passed { "PASS" } else { "FAIL" },
                        r.identity.name(),
                        r.n,
                        r.k,
                        r.residual.to_short_string(3),
                        r.tolerance.to_short_string(1),
                    )),
                    CellOutcome::Error { identity, n, k, error } => {
                        out.push_str(&format!("ERR  {:<20} n={:<2} k={:<22} {}\n", identity.name(), n, k, error))
                    }
                }
            }
            let passed = outcomes.iter().filter(|o| o.passed()).count();
            out.push_str(&format!("{passed}/{} cells passed\n", outcomes.len()));
            out
        }
    }
}

fn factors_string(row: &ConjectureRow) -> String {
    if row.denominator_factors.is_empty() {
        return "1".into();
    }
    row.denominator_factors
        .iter()
        .map(|(q, e)| if *e == 1 { q.clone() } else { format!("{q}^{e}") })
        .collect::<Vec<_>>()
        .join(" * ")
}

pub fn conjecture(format: Format, p: u32, rows: &[ConjectureRow], zeroth: &ConjectureRow) -> Rendered {
    let tabulated = zeroth.alpha.is_some();
    let all_integral = tabulated.then(|| rows.iter().all(|r| r.is_integer));
    match format {
        Format::Json => pretty(&json!({
            "p": p,
            "tabulated_alpha": tabulated,
            "all_integral": all_integral,
            "rows": rows,
            "m0": zeroth,
        })),
        Format::Csv => {
            let csv_rows: Vec<Vec<String>> = std::iter::once(zeroth)
                .chain(rows)
                .map(|r| {
                    vec![
                        r.m.to_string(),
                        rational_string(&r.value),
                        r.alpha.as_ref().map(rational_string).unwrap_or_default(),
                        rational_string(&r.scaled),
                        r.is_integer.to_string(),
                        factors_string(r),
                    ]
                })
                .collect();
            csv_string(&["m", "value", "alpha", "scaled", "is_integer", "denominator"], &csv_rows)
        }
        Format::Text => {
            let mut out = format!("k = 1/sqrt({p})\n");
            for r in rows {
                if tabulated {
                    out.push_str(&format!(
                        "m={:<3} {:>24}  {}\n",
                        r.m,
                        rational_string(&r.scaled),
                        if r.is_integer { "integer" } else { "NOT AN INTEGER" }
                    ));
                } else {
                    out.push_str(&format!(
                        "m={:<3} {:>40}  denominator {}\n",
                        r.m,
                        rational_string(&r.scaled),
                        factors_string(r)
                    ));
                }
            }
            match all_integral {
                Some(true) => out.push_str("all scaled terms are integers\n"),
                Some(false) => out.push_str("NON-INTEGRAL TERMS PRESENT\n"),
                None => out.push_str("no tabulated alpha_m for this p; denominators shown instead\n"),
            }
            if tabulated && !zeroth.is_integer {
                out.push_str(&format!("note: m=0 gives {}, not an integer\n", rational_string(&zeroth.scaled)));
            }
            out
        }
    }
}

pub fn reconciliation(format: Format, report: &ReconciliationReport) -> Rendered {
    match format {
        Format::Json => pretty(&serde_json::to_value(report).expect("report serialises")),
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .candidates
                .iter()
                .flat_map(|c| {
                    c.orders.iter().map(move |o| {
                        vec![c.description.clone(), o.n.to_string(), o.matches.to_string(), o.residual.clone()]
                    })
                })
                .collect();
            csv_string(&["convention", "n", "matches", "residual"], &rows)
        }
        Format::Text => {
            let mut out = String::new();
            for c in &report.candidates {
                let marks: String = c.orders.iter().map(|o| if o.matches { '+' } else { '-' }).collect();
                out.push_str(&format!("[{marks}] {}\n", c.description));
            }
            match &report.winner_description {
                Some(w) => out.push_str(&format!("unique match for n = 1..{}: {w}\n", report.max_n)),
                None => out.push_str(&format!("{} conventions match; no unique winner\n", report.matching_count)),
            }
            out.push_str(&format!(
                "printed convention at n = 1: {}\n",
                if report.printed_matches_n1 { "matches" } else { "mismatch" }
            ));
            for ((order, q), (_, exact)) in report.q_projection.iter().zip(&report.q_exact) {
                out.push_str(&format!("Q_{order}: projected {q}, exact {exact}\n"));
            }
            out
        }
    }
}
