//! The reproducible record of one pipeline run.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use swrbd_core::exact::format_rational;
use swrbd_core::presets::preset_notes;
use swrbd_core::{serialize_config, ClassVector, SearchConfig, StageReport};

use crate::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Value reported for every basic class: the wall-crossing formula fixes the
/// magnitude but not the sign.
pub const SW_VALUE: &str = "±1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub label: String,
    pub tool_version: String,
    /// SHA-256 of the pretty-printed config document.
    pub config_digest: String,
    pub assumptions: Vec<String>,
    /// Candidates, characteristic, dimension, basic.
    pub stage_counts: [u64; 4],
    pub zero_pairing_diagnostics: u64,
    pub basic_classes: Vec<Vec<i64>>,
    pub ambient_squares: Vec<i64>,
    /// Exact rationals as `"n"` or `"n/d"`.
    pub blown_down_squares: Vec<String>,
    pub formal_dimensions: Vec<String>,
    pub h_pairings: Vec<i64>,
    pub h_prime_pairings: Vec<i64>,
    pub sw_values: Vec<String>,
    pub lemma_verified: bool,
    /// `null` when the basic-class list is not known to be complete.
    pub minimal: Option<bool>,
}

fn small<T: TryInto<i64>>(x: T, what: &str) -> Result<i64, CliError> {
    x.try_into()
        .map_err(|_| CliError::Overflow(what.to_string()))
}

pub fn config_digest(config: &SearchConfig) -> String {
    hex::encode(Sha256::digest(serialize_config(config).as_bytes()))
}

impl Certificate {
    pub fn new(config: &SearchConfig, report: &StageReport) -> Result<Self, CliError> {
        let form = config.form();
        let chain = config.chain();
        let classes = &report.basic_classes;
        let mut cert = Self {
            label: config.label().to_string(),
            tool_version: TOOL_VERSION.to_string(),
            config_digest: config_digest(config),
            assumptions: preset_notes(config.label())
                .iter()
                .map(ToString::to_string)
                .collect(),
            stage_counts: report.counts.as_array(),
            zero_pairing_diagnostics: report.zero_pairing_diagnostics,
            basic_classes: Vec::with_capacity(classes.len()),
            ambient_squares: Vec::with_capacity(classes.len()),
            blown_down_squares: Vec::with_capacity(classes.len()),
            formal_dimensions: Vec::with_capacity(classes.len()),
            h_pairings: Vec::with_capacity(classes.len()),
            h_prime_pairings: Vec::with_capacity(classes.len()),
            sw_values: vec![SW_VALUE.to_string(); classes.len()],
            lemma_verified: report.lemma_verified,
            minimal: report.minimal,
        };
        for k in classes {
            let coords = k
                .to_i64s()
                .ok_or_else(|| CliError::Overflow(format!("class {k}")))?;
            cert.basic_classes.push(coords);
            cert.ambient_squares
                .push(small(&form.square(k)?, "ambient square")?);
            cert.blown_down_squares
                .push(format_rational(&chain.blown_down_square(form, k)?));
            cert.formal_dimensions
                .push(format_rational(&chain.formal_dimension(form, k)?));
            cert.h_pairings
                .push(small(&form.pair(k, config.h())?, "pairing with H")?);
            cert.h_prime_pairings
                .push(small(&form.pair(k, config.h_prime())?, "pairing with H'")?);
        }
        Ok(cert)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = |v: Option<bool>| v.map_or("undetermined".to_string(), |b| b.to_string());
        let _ = writeln!(out, "label: {}", self.label);
        let _ = writeln!(out, "tool version: {}", self.tool_version);
        let _ = writeln!(out, "config digest: {}", self.config_digest);
        for a in &self.assumptions {
            let _ = writeln!(out, "assumption: {a}");
        }
        let _ = writeln!(out, "stage funnel:");
        let names = ["candidates", "characteristic", "dimension", "basic"];
        for (name, count) in names.iter().zip(self.stage_counts) {
            let _ = writeln!(out, "  {name:<16}{count:>10}");
        }
        let _ = writeln!(
            out,
            "zero-pairing diagnostics: {}",
            self.zero_pairing_diagnostics
        );
        let _ = writeln!(out, "lemma verified: {}", self.lemma_verified);
        let _ = writeln!(out, "minimal: {}", verdict(self.minimal));
        if !self.basic_classes.is_empty() {
            let _ = writeln!(out, "classes:");
        }
        for (i, k) in self.basic_classes.iter().enumerate() {
            let _ = writeln!(
                out,
                "  {}  K^2 = {}  K'^2 = {}  dim = {}  K.H = {}  K.H' = {}  SW = {}",
                ClassVector::from_i64s(k),
                self.ambient_squares[i],
                self.blown_down_squares[i],
                self.formal_dimensions[i],
                self.h_pairings[i],
                self.h_prime_pairings[i],
                self.sw_values[i],
            );
        }
        let _ = writeln!(out, "basic classes: {}", self.class_summary());
        out
    }

    /// `±v` for each class whose negative is also present, listed once.
    fn class_summary(&self) -> String {
        if self.basic_classes.is_empty() {
            return "none".to_string();
        }
        let mut parts = Vec::new();
        let mut used = vec![false; self.basic_classes.len()];
        for (i, k) in self.basic_classes.iter().enumerate() {
            if used[i] {
                continue;
            }
            used[i] = true;
            let neg: Vec<i64> = k.iter().map(|x| -x).collect();
            let partner = (i + 1..self.basic_classes.len())
                .find(|&j| !used[j] && self.basic_classes[j] == neg);
            let shown = ClassVector::from_i64s(k);
            match partner {
                Some(j) if neg != *k => {
                    used[j] = true;
                    parts.push(format!("±{shown}"));
                }
                _ => parts.push(shown.to_string()),
            }
        }
        parts.join(", ")
    }
}
