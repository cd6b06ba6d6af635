use std::fmt::Write;

use serde_json::{json, Value};

use crate::bounds::{BoundRecord, Curve, SignMode};
use crate::optimizer::{Candidate, LandscapePoint};

pub const CURVE_HEADER: &str = "T,ratio_mt,ratio_sqsl,t_mt,t_sqsl,delta,gamma,r_integral,flags";

/// 17 significant digits; non-finite values as `inf`, `-inf`, `nan`.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn json_num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn flag_field(r: &BoundRecord, label: &str, sign: SignMode) -> String {
    let mut parts = vec![format!("ortho={label}"), format!("sign={sign}")];
    parts.extend(r.flags.iter().map(|f| f.token().to_string()));
    parts.join(";")
}

pub fn curves_csv(curves: &[Curve], labels: &[String]) -> String {
    let mut out = String::from(CURVE_HEADER);
    out.push('\n');
    for (c, label) in curves.iter().zip(labels) {
        for r in &c.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                num(r.t),
                num(r.ratio_mt()),
                num(r.ratio_sqsl()),
                num(r.mt),
                num(r.sqsl),
                num(r.delta),
                num(r.gamma),
                num(r.r_integral),
                flag_field(r, label, c.sign)
            );
        }
    }
    out
}

pub fn curves_json(model: &str, curves: &[Curve], labels: &[String]) -> String {
    let curves: Vec<Value> = curves
        .iter()
        .zip(labels)
        .map(|(c, label)| {
            let records: Vec<Value> = c
                .records
                .iter()
                .map(|r| {
                    json!({
                        "T": json_num(r.t),
                        "ratio_mt": json_num(r.ratio_mt()),
                        "ratio_sqsl": json_num(r.ratio_sqsl()),
                        "t_mt": json_num(r.mt),
                        "t_sqsl": json_num(r.sqsl),
                        "delta": json_num(r.delta),
                        "gamma": json_num(r.gamma),
                        "r_integral": json_num(r.r_integral),
                        "flags": r.flags.iter().map(|f| f.token()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            json!({
                "ortho": label,
                "sign": c.sign.label(),
                "degenerate_nodes": c.degenerate_nodes,
                "total_nodes": c.total_nodes,
                "records": records,
            })
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&json!({ "model": model, "curves": curves }))
        .expect("values serialize");
    s.push('\n');
    s
}

/// `theta,phi,objective`; excluded lattice points carry `nan`.
pub fn landscape_csv(points: &[LandscapePoint]) -> String {
    let mut out = String::from("theta,phi,objective\n");
    for p in points {
        let _ = writeln!(out, "{},{},{}", num(p.theta), num(p.phi), num(p.objective.unwrap_or(f64::NAN)));
    }
    out
}

pub fn landscape_json(points: &[LandscapePoint]) -> String {
    let v: Vec<Value> = points
        .iter()
        .map(|p| json!({ "theta": p.theta, "phi": p.phi, "objective": p.objective.map_or(Value::Null, json_num) }))
        .collect();
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

pub fn optima_json(c: &[Candidate]) -> String {
    let mut s = serde_json::to_string_pretty(c).expect("values serialize");
    s.push('\n');
    s
}
