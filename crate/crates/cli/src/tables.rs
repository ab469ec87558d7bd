//! Supersingular density rows for curves with and without CM.

use serde::Serialize;
use serde_json::json;

use cmcheck::algebra::ZPoly;
use cmcheck::classpoly::hilbert_class_poly_adaptive;
use cmcheck::cmtest::survey_ratio;
use cmcheck::{CurveNF, NumberField};

use crate::commands::CliError;

/// CM rows: End(E) discriminant, field degree, published ratio at 10⁵.
pub const CM_ROWS: [(i64, usize, f64); 9] = [
    (-4 * 53, 6, 0.5043),
    (-59, 3, 0.5073),
    (-4 * 61, 6, 0.5079),
    (-71, 7, 0.5113),
    (-4 * 73, 4, 0.5110),
    (-79, 5, 0.5107),
    (-83, 3, 0.5088),
    (-4 * 89, 12, 0.5234),
    (-4 * 97, 4, 0.5040),
];

/// Non-CM rows: the minimal polynomial of j (low-to-high) and the published ratio.
pub const NON_CM_ROWS: [([i64; 6], f64); 8] = [
    ([-51, -22, -33, -65, -12, 1], 0.0032),
    ([19, -92, 14, 28, -78, 1], 0.0036),
    ([92, 96, 25, 7, 25, 1], 0.0035),
    ([93, 61, 41, -71, 71, 1], 0.0034),
    ([62, -36, -17, 84, 23, 1], 0.0031),
    ([-10, 51, 78, -74, -94, 1], 0.0033),
    ([-39, -78, 5, 97, 79, 1], 0.0033),
    ([-93, -34, 99, -17, 68, 1], 0.0025),
];

#[derive(Serialize)]
struct Row {
    table: u8,
    label: String,
    degree: usize,
    numerator: u64,
    denominator: u64,
    ratio: f64,
    published: f64,
}

fn poly_label(cs: &[i64]) -> String {
    ZPoly::from_i64s(cs).to_string()
}

pub fn run(bound: u64, table: Option<u8>, csv: bool) -> Result<String, CliError> {
    if matches!(table, Some(t) if t != 1 && t != 2) {
        return Err(CliError::Usage("--table must be 1 or 2".into()));
    }
    let mut rows = Vec::new();
    if table.unwrap_or(1) == 1 || table.is_none() {
        for (d, degree, published) in CM_ROWS {
            let hp = hilbert_class_poly_adaptive(d)?;
            let field = NumberField::new(hp.to_zpoly())?;
            let r = survey_ratio(&CurveNF::from_j(&field.theta()), bound);
            rows.push(Row {
                table: 1,
                label: d.to_string(),
                degree,
                numerator: r.numerator,
                denominator: r.denominator,
                ratio: r.ratio,
                published,
            });
        }
    }
    if table.unwrap_or(2) == 2 || table.is_none() {
        for (cs, published) in NON_CM_ROWS {
            let field = NumberField::new(ZPoly::from_i64s(&cs))?;
            let r = survey_ratio(&CurveNF::from_j(&field.theta()), bound);
            rows.push(Row {
                table: 2,
                label: poly_label(&cs),
                degree: 5,
                numerator: r.numerator,
                denominator: r.denominator,
                ratio: r.ratio,
                published,
            });
        }
    }
    if csv {
        let mut out = String::from("table,label,degree,numerator,denominator,ratio,published");
        for r in &rows {
            out.push_str(&format!(
                "\n{},\"{}\",{},{},{},{:.4},{:.4}",
                r.table, r.label, r.degree, r.numerator, r.denominator, r.ratio, r.published
            ));
        }
        return Ok(out);
    }
    let report = json!({
        "command": "paper-tables",
        "version": env!("CARGO_PKG_VERSION"),
        "config": { "bound": bound, "table": table },
        "result": rows,
    });
    Ok(serde_json::to_string_pretty(&report).unwrap())
}
