//! Built-in problem instances and the config document format.
//!
//! Both built-in instances live on `S²×S² # k m̄CP²` with basis
//! `(A, B, E_1, …, E_k)`, `A·B = 1`, `E_i² = -1`. Classes are written below
//! as expressions in that basis (`"10A+8B-6E1"`), which keeps the tables
//! directly comparable with their published form.

use serde::{Deserialize, Serialize};

use crate::blowdown::BlowdownChain;
use crate::lattice::{ClassVector, IntersectionForm};
use crate::search::{ConfigError, SearchConfig};

pub const PRESET_LABELS: [&str; 2] = ["park-p", "park-q"];

/// JSON-compatible description of a [`SearchConfig`].
///
/// Extension tuples are per-class evaluations: entry `i` is `⟨K, R_i⟩` for
/// the `i`-th chain class as listed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub label: String,
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    pub chain: ChainDocument,
    pub spheres: Vec<Vec<i64>>,
    #[serde(rename = "H")]
    pub h: Vec<i64>,
    #[serde(rename = "Hprime")]
    pub h_prime: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDocument {
    pub p: usize,
    pub classes: Vec<Vec<i64>>,
    pub extension_tuples: Vec<Vec<i64>>,
}

/// Coordinates of a class expression such as `"2E7+2E4-2A+E11"` in the basis
/// `(A, B, E_1, …, E_{rank-2})`.
pub fn parse_class(expr: &str, rank: usize) -> Result<Vec<i64>, String> {
    let mut coords = vec![0i64; rank];
    let s: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    let mut rest = s.as_str();
    if rest.is_empty() {
        return Err("empty class expression".into());
    }
    while !rest.is_empty() {
        let (sign, tail) = match rest.as_bytes()[0] {
            b'+' => (1, &rest[1..]),
            b'-' => (-1, &rest[1..]),
            _ => (1, rest),
        };
        let digits = tail.bytes().take_while(u8::is_ascii_digit).count();
        let coeff: i64 = if digits == 0 {
            1
        } else {
            tail[..digits].parse().map_err(|e| format!("{expr}: {e}"))?
        };
        let tail = &tail[digits..];
        let (index, consumed) = match tail.as_bytes().first() {
            Some(b'A') => (0, 1),
            Some(b'B') => (1, 1),
            Some(b'E') => {
                let n = tail[1..].bytes().take_while(u8::is_ascii_digit).count();
                let i: usize = tail[1..1 + n]
                    .parse()
                    .map_err(|_| format!("{expr}: E needs an index"))?;
                if i == 0 {
                    return Err(format!("{expr}: E indices start at 1"));
                }
                (i + 1, 1 + n)
            }
            _ => return Err(format!("{expr}: expected A, B or E<i> at {tail:?}")),
        };
        if index >= rank {
            return Err(format!(
                "{expr}: basis element out of range for rank {rank}"
            ));
        }
        coords[index] += sign * coeff;
        rest = &tail[consumed..];
    }
    Ok(coords)
}

struct PresetData {
    label: &'static str,
    exceptional: usize,
    chain: &'static [&'static str],
    /// Extension tuples written along the plumbing, central sphere first.
    plumbing_tuples: &'static [&'static [i64]],
    spheres: &'static [&'static str],
    h: &'static [i64],
    h_prime: &'static str,
}

const PARK_P: PresetData = PresetData {
    label: "park-p",
    exceptional: 12,
    chain: &[
        "10A+8B-6E1-4E2-4E3-4E4-4E5-4E6-3E7-4E8-4E9-2E10-2E11-2E12",
        "B-E1-E4",
        "A-E2-E3",
        "E3-E6",
        "E6-E9",
        "E4-E7",
    ],
    // Plumbing order is R0 - R5 - R1 - R2 - R3 - R4.
    plumbing_tuples: &[
        &[7, 0, 0, 0, 0, 0],
        &[-1, 0, -2, 0, 0, 0],
        &[5, 0, 0, 0, 0, -2],
        &[-3, -2, 0, 0, 0, 0],
        &[3, 0, 0, 0, -2, 0],
        &[-7, 0, 0, 0, 0, 0],
        &[1, 0, 0, -2, 0, 0],
    ],
    spheres: &[
        "E5-E8",
        "E12-E10",
        "E11-E12",
        "A-E1-E11",
        "A+B-E1-E2-E5-E8",
        "-E5+E10+E11",
        "2E7+2E4-2A+E11",
        "E6+E9+E3-E2-2E5",
    ],
    h: &[
        105, 92, -67, -51, -41, -38, -36, -41, -38, -36, -41, -18, -18, -18,
    ],
    h_prime: "A+B",
};

const PARK_Q: PresetData = PresetData {
    label: "park-q",
    exceptional: 11,
    chain: &[
        "7A+6B-4E1-3E2-3E3-3E4-3E5-3E6-2E7-3E8-3E9-2E10-2E11",
        "E4-E7",
        "B-E1-E4",
        "A-E2-E3",
    ],
    // Listed order is already the plumbing order.
    plumbing_tuples: &[
        &[5, 0, 0, 0],
        &[-1, -2, 0, 0],
        &[3, 0, 0, -2],
        &[-5, 0, 0, 0],
        &[1, 0, -2, 0],
    ],
    spheres: &[
        "E10-E11",
        "E5-E6",
        "E8-E9",
        "E5-E8",
        "E2-E3",
        "A-E1-E10",
        "A+B-E1-E2-E5-E8",
        "2A-2E4-2E7-E11",
        "2A+2B-E1-E2-E3-E4-E7-2E5-E6-E10",
    ],
    h: &[
        229, 226, -143, -113, -113, -86, -87, -87, -86, -87, -87, -58, -58,
    ],
    h_prime: "A+B",
};

fn preset_data(label: &str) -> Result<&'static PresetData, ConfigError> {
    match label {
        "park-p" => Ok(&PARK_P),
        "park-q" => Ok(&PARK_Q),
        _ => Err(ConfigError::UnknownPreset(label.to_string())),
    }
}

/// Assumptions baked into a preset that are worth carrying into output.
pub fn preset_notes(label: &str) -> &'static [&'static str] {
    match label {
        "park-p" => &[
            "H' = PD(A+B)",
            "extension tuples transcribed along the plumbing R0-R5-R1-R2-R3-R4 and stored per class",
        ],
        "park-q" => &["H' = PD(A+B), the same reference class as park-p"],
        _ => &[],
    }
}

/// The config document of a built-in instance.
pub fn preset_document(label: &str) -> Result<ConfigDocument, ConfigError> {
    let data = preset_data(label)?;
    let rank = data.exceptional + 2;
    let class = |e: &str| parse_class(e, rank).map_err(ConfigError::Schema);
    let form = IntersectionForm::blown_up_s2xs2(data.exceptional);
    let chain_classes = data
        .chain
        .iter()
        .map(|e| class(e))
        .collect::<Result<Vec<_>, _>>()?;
    let p = chain_classes.len() - 1;
    let chain = BlowdownChain::new(
        &form,
        p,
        chain_classes
            .iter()
            .map(|c| ClassVector::from_i64s(c))
            .collect(),
    )?;
    let rows: Vec<Vec<i64>> = data.plumbing_tuples.iter().map(|r| r.to_vec()).collect();
    let extension_tuples = chain.tuples_from_chain_order(&rows)?;
    let gram = form
        .gram()
        .iter_rows()
        .map(|r| {
            r.iter()
                .map(|x| i64::try_from(x).expect("unit entries"))
                .collect()
        })
        .collect();
    Ok(ConfigDocument {
        label: data.label.to_string(),
        rank,
        gram,
        chain: ChainDocument {
            p,
            classes: chain_classes,
            extension_tuples,
        },
        spheres: data
            .spheres
            .iter()
            .map(|e| class(e))
            .collect::<Result<_, _>>()?,
        h: data.h.to_vec(),
        h_prime: class(data.h_prime)?,
    })
}

pub fn load_preset(label: &str) -> Result<SearchConfig, ConfigError> {
    SearchConfig::from_document(&preset_document(label)?)
}

pub fn parse_document(text: &str) -> Result<ConfigDocument, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError::Schema(e.to_string()))
}

pub fn parse_config(text: &str) -> Result<SearchConfig, ConfigError> {
    SearchConfig::from_document(&parse_document(text)?)
}

pub fn serialize_config(config: &SearchConfig) -> String {
    serde_json::to_string_pretty(config.document()).expect("document serializes")
}
