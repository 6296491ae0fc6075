//! Deterministic JSON and CSV rendering of certifier results.

use std::fmt::Write as _;

use holonorm::linescan::{HartogsReport, LineScanReport};
use holonorm::{CPoint, SupEstimate, Verdict};
use serde_json::{Map, Number, Value};

/// A float with 17 significant digits. Non-finite values become strings.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        let text = format!("{x:.16e}");
        Value::Number(serde_json::from_str::<Number>(&text).expect("formatted float parses"))
    } else if x.is_nan() {
        Value::String("nan".into())
    } else if x > 0.0 {
        Value::String("inf".into())
    } else {
        Value::String("-inf".into())
    }
}

pub fn point(p: &CPoint) -> Value {
    Value::Array(
        p.coords()
            .iter()
            .map(|c| Value::Array(vec![num(c.re), num(c.im)]))
            .collect(),
    )
}

pub fn object(entries: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in entries {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

pub fn estimate(e: &SupEstimate) -> Value {
    object(vec![
        ("sup", num(e.sup_value)),
        ("argmax", point(&e.argmax_point)),
        ("samples", Value::from(e.samples)),
        (
            "growth",
            Value::Array(
                e.growth_series
                    .iter()
                    .map(|(p, s)| Value::Array(vec![num(*p), num(*s)]))
                    .collect(),
            ),
        ),
    ])
}

pub fn verdict(v: &Verdict) -> Value {
    object(vec![
        ("quantity", Value::from(v.quantity.as_str())),
        ("classification", Value::from(v.classification.as_str())),
        ("threshold", num(v.threshold)),
        ("trend_ratio", num(v.trend_ratio)),
        ("estimate", estimate(&v.estimate)),
    ])
}

pub fn line_scan(r: &LineScanReport) -> Value {
    object(vec![
        ("aggregate", verdict(&r.verdict)),
        (
            "lines",
            Value::Array(
                r.lines
                    .iter()
                    .map(|l| {
                        object(vec![
                            ("direction", point(&l.direction)),
                            ("verdict", verdict(&l.verdict)),
                        ])
                    })
                    .collect(),
            ),
        ),
    ])
}

pub fn hartogs(r: &HartogsReport) -> Value {
    object(vec![
        ("convergence", Value::from(r.convergence.as_str())),
        ("rmin", num(r.r_min)),
        ("min_radius", num(r.min_radius)),
        ("min_radius_half_degree", num(r.min_radius_half)),
        ("min_direction", point(&r.min_direction)),
        (
            "lines",
            Value::Array(
                r.lines
                    .iter()
                    .map(|l| {
                        object(vec![
                            ("direction", point(&l.direction)),
                            ("radius", num(l.radius)),
                            ("radius_half_degree", num(l.radius_half)),
                        ])
                    })
                    .collect(),
            ),
        ),
        ("partial_sum_ball_radius", num(r.marty_radius)),
        ("partial_sum_marty", estimate(&r.partial_sum_marty)),
    ])
}

/// A rendered report: the JSON tree plus flat `(section, parameter, value)`
/// rows for CSV.
pub struct Report {
    pub json: Value,
    pub rows: Vec<(String, f64, f64)>,
}

impl Report {
    pub fn new(json: Value) -> Self {
        Report {
            json,
            rows: Vec::new(),
        }
    }

    pub fn rows_from(mut self, section: &str, e: &SupEstimate) -> Self {
        self.rows.extend(
            e.growth_series
                .iter()
                .map(|(p, s)| (section.to_string(), *p, *s)),
        );
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["section", "parameter", "sup"])?;
        for (section, p, s) in &self.rows {
            w.write_record([section.clone(), fmt_float(*p), fmt_float(*s)])?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}

fn fmt_float(x: f64) -> String {
    let mut s = String::new();
    if x.is_finite() {
        write!(s, "{x:.16e}").unwrap();
    } else {
        s.push_str(if x.is_nan() {
            "nan"
        } else if x > 0.0 {
            "inf"
        } else {
            "-inf"
        });
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(
            serde_json::to_string(&num(0.1)).unwrap(),
            "1.0000000000000001e-1"
        );
        assert_eq!(
            serde_json::to_string(&num(1.0)).unwrap(),
            "1.0000000000000000e+0"
        );
        assert_eq!(num(f64::INFINITY), Value::String("inf".into()));
        let back: f64 = serde_json::to_string(&num(std::f64::consts::PI))
            .unwrap()
            .parse()
            .unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn object_keeps_insertion_order() {
        let o = object(vec![("b", Value::from(1)), ("a", Value::from(2))]);
        assert_eq!(serde_json::to_string(&o).unwrap(), r#"{"b":1,"a":2}"#);
    }
}
