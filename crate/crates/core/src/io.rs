//! Channel and state descriptions: JSON documents and `name:params`
//! shorthands such as `depolarizing:0.25`.
//!
//! Channel JSON comes in three kinds:
//!
//! ```json
//! {"kind": "kraus", "d_in": 2, "d_out": 2, "ops": [matrix, ...]}
//! {"kind": "measure_prepare", "povm": [matrix, ...], "states": [matrix, ...]}
//! {"kind": "named", "name": "depolarizing", "params": {"lambda": 0.25}}
//! ```
//!
//! Matrices are nested rows of `[re, im]` pairs.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::{
    bsc, dephasing, depolarizing, identity, ppt_boundary, replacement, Channel, EbVerdict, KrausChannel,
    MeasurePrepareChannel,
};
use crate::error::{Error, Result};
use crate::linalg::{Hermitian, Matrix};
use crate::state::{DensityOperator, Povm};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelSpec {
    Kraus {
        d_in: usize,
        d_out: usize,
        ops: Vec<Matrix<f64>>,
    },
    MeasurePrepare {
        povm: Vec<Matrix<f64>>,
        states: Vec<Matrix<f64>>,
    },
    Named {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
}

/// Parameter name and default (`None` means required).
type Param = (&'static str, Option<f64>);

/// A parametrized channel family known by name.
pub struct Family {
    pub name: &'static str,
    pub params: &'static [Param],
    /// Parameter bracket `[lo, hi]` with PPT at `lo` and not at `hi`, when
    /// the family crosses the entanglement-breaking boundary.
    pub eb_bracket: Option<(&'static str, f64, f64)>,
}

pub const FAMILIES: &[Family] = &[
    Family {
        name: "identity",
        params: &[("d", Some(2.0))],
        eb_bracket: None,
    },
    Family {
        name: "depolarizing",
        params: &[("lambda", None), ("d", Some(2.0))],
        eb_bracket: Some(("lambda", 0.0, 1.0)),
    },
    Family {
        name: "dephasing",
        params: &[("q", None)],
        eb_bracket: None,
    },
    Family {
        name: "bsc",
        params: &[("p", None)],
        eb_bracket: None,
    },
    Family {
        name: "replacement",
        params: &[("d_in", Some(2.0)), ("d_out", Some(2.0))],
        eb_bracket: None,
    },
];

pub fn family(name: &str) -> Result<&'static Family> {
    FAMILIES.iter().find(|f| f.name == name).ok_or_else(|| {
        let known: Vec<&str> = FAMILIES.iter().map(|f| f.name).collect();
        Error::InvalidParameter(format!("unknown channel family '{name}' (known: {})", known.join(", ")))
    })
}

fn dimension(v: f64, what: &str) -> Result<usize> {
    if v >= 1.0 && v.fract() == 0.0 && v <= 4096.0 {
        Ok(v as usize)
    } else {
        Err(Error::InvalidParameter(format!(
            "{what} must be a positive integer, got {v}"
        )))
    }
}

/// Fills defaults and rejects unknown or missing parameters.
fn resolve(f: &Family, params: &BTreeMap<String, f64>) -> Result<BTreeMap<&'static str, f64>> {
    if let Some(k) = params.keys().find(|k| !f.params.iter().any(|(n, _)| n == k)) {
        return Err(Error::InvalidParameter(format!("'{}' has no parameter '{k}'", f.name)));
    }
    f.params
        .iter()
        .map(|&(n, default)| {
            params
                .get(n)
                .copied()
                .or(default)
                .map(|v| (n, v))
                .ok_or_else(|| Error::InvalidParameter(format!("'{}' needs parameter '{n}'", f.name)))
        })
        .collect()
}

pub fn named_channel(name: &str, params: &BTreeMap<String, f64>) -> Result<KrausChannel<f64>> {
    let f = family(name)?;
    let p = resolve(f, params)?;
    match name {
        "identity" => Ok(identity(dimension(p["d"], "d")?)),
        "depolarizing" => depolarizing(dimension(p["d"], "d")?, p["lambda"]),
        "dephasing" => dephasing(p["q"]),
        "bsc" => bsc(p["p"]),
        "replacement" => {
            let d_out = dimension(p["d_out"], "d_out")?;
            replacement(&DensityOperator::maximally_mixed(d_out), dimension(p["d_in"], "d_in")?)
        }
        _ => unreachable!("family table and constructor list agree"),
    }
}

/// Splits `name:v1,v2` or `name:key=v,…` into a family name and parameters.
pub fn parse_shorthand(arg: &str) -> Result<(String, BTreeMap<String, f64>)> {
    let (name, rest) = arg.split_once(':').unwrap_or((arg, ""));
    let f = family(name)?;
    let mut params = BTreeMap::new();
    for (i, item) in rest.split(',').filter(|s| !s.is_empty()).enumerate() {
        let (key, value) = match item.split_once('=') {
            Some((k, v)) => (k.trim().to_string(), v),
            None => {
                let (k, _) = f
                    .params
                    .get(i)
                    .ok_or_else(|| Error::InvalidParameter(format!("too many parameters for '{name}'")))?;
                (k.to_string(), item)
            }
        };
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("parameter '{key}' = '{value}' is not a number")))?;
        params.insert(key, v);
    }
    Ok((name.to_string(), params))
}

impl ChannelSpec {
    pub fn build(&self) -> Result<Channel<f64>> {
        match self {
            ChannelSpec::Kraus { d_in, d_out, ops } => {
                Ok(Channel::Kraus(KrausChannel::from_parts(*d_in, *d_out, ops.clone())?))
            }
            ChannelSpec::MeasurePrepare { povm, states } => {
                let elements = povm
                    .iter()
                    .map(|m| Hermitian::with_tolerance(m.clone(), 1e-9))
                    .collect::<Result<Vec<_>>>()?;
                let states = states
                    .iter()
                    .map(|m| DensityOperator::new(m.clone()))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Channel::MeasurePrepare(MeasurePrepareChannel::new(
                    Povm::new(elements)?,
                    states,
                )?))
            }
            ChannelSpec::Named { name, params } => Ok(Channel::Kraus(named_channel(name, params)?)),
        }
    }
}

/// Parses a channel document. Every failure, syntactic or not, is reported
/// as `NotCptp` since the document does not describe a valid channel.
pub fn parse_channel_json(text: &str) -> Result<Channel<f64>> {
    let spec: ChannelSpec =
        serde_json::from_str(text).map_err(|e| Error::NotCptp(format!("malformed channel: {e}")))?;
    spec.build().map_err(|e| match e {
        Error::NotCptp(m) => Error::NotCptp(m),
        other => Error::NotCptp(other.to_string()),
    })
}

/// Where a channel argument points.
#[derive(Clone, Debug, PartialEq)]
pub enum ChannelSource {
    File(String),
    Named {
        name: String,
        params: BTreeMap<String, f64>,
    },
}

impl ChannelSource {
    /// An existing path wins; otherwise the argument must be a shorthand.
    pub fn parse(arg: &str) -> Result<Self> {
        if Path::new(arg).is_file() {
            return Ok(ChannelSource::File(arg.to_string()));
        }
        if arg.ends_with(".json") {
            return Err(Error::Io(format!("cannot open '{arg}'")));
        }
        let (name, params) = parse_shorthand(arg)?;
        Ok(ChannelSource::Named { name, params })
    }

    pub fn load(&self) -> Result<Channel<f64>> {
        match self {
            ChannelSource::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
                parse_channel_json(&text)
            }
            ChannelSource::Named { name, params } => Ok(Channel::Kraus(named_channel(name, params)?)),
        }
    }
}

pub fn load_channel(arg: &str) -> Result<Channel<f64>> {
    ChannelSource::parse(arg)?.load()
}

/// `mixed:d`, `basis:d,i` or a path to a JSON matrix.
pub fn load_state(arg: &str) -> Result<DensityOperator<f64>> {
    if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).map_err(|e| Error::Io(format!("{arg}: {e}")))?;
        let m: Matrix<f64> = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
        return DensityOperator::new(m);
    }
    let (kind, rest) = arg.split_once(':').unwrap_or((arg, ""));
    let nums: Vec<usize> = rest
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| s.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidParameter(format!("bad state shorthand '{arg}'")))?;
    match (kind, nums.as_slice()) {
        ("mixed", [d]) if *d >= 1 => Ok(DensityOperator::maximally_mixed(*d)),
        ("basis", [d, i]) if i < d => Ok(DensityOperator::basis(*d, *i)),
        _ if arg.ends_with(".json") => Err(Error::Io(format!("cannot open '{arg}'"))),
        _ => Err(Error::InvalidParameter(format!(
            "state '{arg}' is neither a file nor mixed:d / basis:d,i"
        ))),
    }
}

/// Entanglement-breaking verdict with the location of the EB boundary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EbSummary {
    pub verdict: String,
    pub min_eigenvalue: f64,
    /// Boundary of the named family's parameter or, for other channels, of
    /// the mixing weight `t` in `tN + (1−t)R_{I/d}`; `None` when there is no
    /// crossing in the searched range.
    pub boundary_estimate: Option<f64>,
    pub boundary_parameter: String,
}

pub fn verdict_label(v: EbVerdict) -> &'static str {
    match v {
        EbVerdict::EntanglementBreaking => "EB",
        EbVerdict::NotEntanglementBreaking => "NotEB",
        EbVerdict::Inconclusive => "Inconclusive",
    }
}

/// Bisection width for boundary searches.
pub const BOUNDARY_WIDTH: f64 = 1e-12;

/// `tN + (1−t)R_{I/d}` with Kraus operators `√t K_i` and `√(1−t)` times those
/// of the replacement channel.
fn mix_with_replacement(ch: &KrausChannel<f64>, t: f64) -> Result<KrausChannel<f64>> {
    let rep = replacement(&DensityOperator::maximally_mixed(ch.d_out()), ch.d_in())?;
    let mut ops: Vec<Matrix<f64>> = ch.kraus_ops().iter().map(|k| k.scale(t.sqrt())).collect();
    ops.extend(rep.kraus_ops().iter().map(|k| k.scale((1.0 - t).sqrt())));
    KrausChannel::new(ops)
}

/// Runs the PPT test and locates the boundary (PPT tolerance 0).
pub fn eb_summary(ch: &Channel<f64>, source: &ChannelSource, tol: f64) -> Result<EbSummary> {
    let report = ch.is_entanglement_breaking(tol);
    let (boundary_estimate, boundary_parameter) = match source {
        ChannelSource::Named { name, params } => match family(name)?.eb_bracket {
            Some((key, lo, hi)) => {
                let key_owned = key.to_string();
                let b = ppt_boundary(
                    |x| {
                        let mut p = params.clone();
                        p.insert(key_owned.clone(), x);
                        named_channel(name, &p)
                    },
                    lo,
                    hi,
                    0.0,
                    BOUNDARY_WIDTH,
                )?;
                (Some(b), key.to_string())
            }
            None => (None, "none".to_string()),
        },
        ChannelSource::File(_) => {
            let k = ch.kraus();
            let full_ppt = k.entanglement_breaking(0.0).min_eigenvalue >= 0.0;
            let b = if full_ppt {
                None
            } else {
                Some(ppt_boundary(
                    |t| mix_with_replacement(k, t),
                    0.0,
                    1.0,
                    0.0,
                    BOUNDARY_WIDTH,
                )?)
            };
            (b, "mixing".to_string())
        }
    };
    Ok(EbSummary {
        verdict: verdict_label(report.verdict).to_string(),
        min_eigenvalue: report.min_eigenvalue,
        boundary_estimate,
        boundary_parameter,
    })
}
