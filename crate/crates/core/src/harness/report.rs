use std::fmt::Write as _;

use serde::Serialize;

use super::config::Mode;
use crate::{Rational, Scalar};

/// Header of every CSV report.
pub const CSV_HEADER: &str = "model,n,j,s,exact,estimate,stderr,z";
pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` with `digits` significant digits, plain decimal where that stays short.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = digits as i32 - 1 - exponent;
    let text = if (0..=20).contains(&decimals) && exponent < digits as i32 {
        format!("{:.*}", decimals as usize, x)
    } else if decimals < 0 && exponent < 21 {
        let unit = 10f64.powi(-decimals);
        format!("{:.0}", (x / unit).round() * unit)
    } else {
        return format!("{:.*e}", digits - 1, x);
    };
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        text
    }
}

/// An exact or reference value as shown in reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValueCell {
    pub decimal: String,
    /// `num/den` when the value is a known rational.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rational: Option<String>,
    #[serde(skip)]
    pub value: f64,
}

impl ValueCell {
    pub fn from_rational(r: &Rational) -> Self {
        let value = Scalar::to_f64(r);
        Self { decimal: format_sig(value, SIGNIFICANT_DIGITS), rational: Some(format!("{}/{}", r.numer(), r.denom())), value }
    }

    pub fn from_f64(value: f64) -> Self {
        Self { decimal: format_sig(value, SIGNIFICANT_DIGITS), rational: None, value }
    }
}

/// One `(part, s)` line of a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub model: String,
    pub n: u64,
    pub j: u64,
    pub s: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ValueCell>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScaleSummary {
    pub lambda: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_exact: Option<String>,
    pub mixing: String,
    pub regime: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PmfRow {
    pub ell: usize,
    pub empirical: f64,
    pub limit: f64,
}

/// `E (X/λ)^s` against the mixing moment `μ_s`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScaledMoment {
    pub s: u32,
    pub empirical: f64,
    pub mixing: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LimitSummary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tv: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pmf: Vec<PmfRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub scaled_moments: Vec<ScaledMoment>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass_at_zero: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub j: u64,
    pub s: u32,
    pub exact: String,
    pub oracle: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleSummary {
    pub comparisons: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub model: String,
    pub params: Vec<(String, String)>,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicates: Option<u64>,
    pub smax: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<ScaleSummary>,
    pub rows: Vec<Row>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<LimitSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("reports contain only finite numbers and strings");
        text.push('\n');
        text
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        let num = |v: Option<f64>| v.map(|x| format_sig(x, SIGNIFICANT_DIGITS)).unwrap_or_default();
        for r in &self.rows {
            let exact = r.exact.as_ref().map(|c| c.decimal.clone()).unwrap_or_default();
            writeln!(out, "{},{},{},{},{},{},{},{}", r.model, r.n, r.j, r.s, exact, num(r.estimate), num(r.stderr), num(r.z))
                .expect("writing to a String");
        }
        out
    }

    /// One-line verdicts for the terminal.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        if let Some(scale) = &self.scale {
            let _ = writeln!(out, "lambda = {} ({}), mixing {}", format_sig(scale.lambda, 6), scale.regime, scale.mixing);
        }
        if let Some(limit) = &self.limit {
            if let Some(tv) = limit.tv {
                let _ = writeln!(out, "total variation vs mixed Poisson limit: {}", format_sig(tv, 6));
            }
            for m in &limit.scaled_moments {
                let _ = writeln!(out, "scaled moment s={}: empirical {} vs mixing {} (ratio {})", m.s, format_sig(m.empirical, 6), format_sig(m.mixing, 6), format_sig(m.ratio, 6));
            }
            if let Some(p0) = limit.mass_at_zero {
                let _ = writeln!(out, "empirical mass at zero: {}", format_sig(p0, 6));
            }
        }
        if let Some(oracle) = &self.oracle {
            match &oracle.counterexample {
                None => {
                    let _ = writeln!(out, "oracle agrees on all {} comparisons", oracle.comparisons);
                }
                Some(c) => {
                    let _ = writeln!(out, "counterexample at j={} s={}: exact {} but oracle {}", c.j, c.s, c.exact, c.oracle);
                }
            }
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let _ = writeln!(out, "{}", if self.pass { "PASS" } else { "FAIL" });
        out
    }
}
