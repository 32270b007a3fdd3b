use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::write_atomic;

/// Mean and standard error of one method across trials, per axis point.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    pub method: String,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub experiment: String,
    pub axis: Vec<f64>,
    pub series: Vec<Series>,
    pub trial_count: usize,
    pub seed: u64,
    /// Wall-clock seconds; not part of the CSV so that reports stay byte-identical across runs.
    pub runtime: f64,
}

impl ExperimentReport {
    pub fn validate(&self) -> Result<()> {
        for s in &self.series {
            if s.mean.len() != self.axis.len() || s.stderr.len() != self.axis.len() {
                return Err(Error::Validation(format!("series `{}` length differs from the axis", s.method)));
            }
            if s.stderr.iter().any(|e| *e < 0.0) {
                return Err(Error::Validation(format!("series `{}` has a negative standard error", s.method)));
            }
        }
        Ok(())
    }

    pub fn series(&self, method: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.method == method)
    }

    /// `axis,method,mean,stderr`, one row per (method, axis point), LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("axis,method,mean,stderr\n");
        for s in &self.series {
            for (k, x) in self.axis.iter().enumerate() {
                let _ = writeln!(out, "{},{},{},{}", fmt_g(*x), s.method, fmt_g(s.mean[k]), fmt_g(s.stderr[k]));
            }
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_csv().as_bytes())
    }
}

/// `printf("%.12g")`: 12 significant digits, trailing zeros dropped, exponent form outside `[1e-4, 1e12)`.
pub fn fmt_g(v: f64) -> String {
    const SIG: i32 = 12;
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (SIG - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIG {
        let m = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        trim_fraction(&format!("{:.*}", (SIG - 1 - exp) as usize, v)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
