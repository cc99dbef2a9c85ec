use std::collections::{BTreeSet, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{Confusion, GateKind};

pub const SCHEMA_VERSION: u32 = 1;

/// Physical properties of one qubit (times in seconds).
#[derive(Debug, Clone, PartialEq)]
pub struct QubitProps {
    pub t1: f64,
    pub t2: f64,
    pub readout: Option<Confusion>,
}

/// Duration (seconds) and depolarizing error of a gate. `qubits == None`
/// makes the entry the default for every qubit or pair.
#[derive(Debug, Clone, PartialEq)]
pub struct GateProps {
    pub gate: GateKind,
    pub qubits: Option<Vec<usize>>,
    pub duration: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeviceSpec {
    pub name: String,
    pub n_qubits: usize,
    pub coupling_map: Vec<[usize; 2]>,
    pub native_gates: BTreeSet<GateKind>,
    pub qubit_props: Vec<QubitProps>,
    pub gate_props: Vec<GateProps>,
    adjacency: Vec<Vec<usize>>,
}

// On-disk schema.

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeviceFile {
    schema_version: u32,
    name: String,
    n_qubits: usize,
    coupling_map: Vec<[usize; 2]>,
    native_gates: Vec<String>,
    qubit_props: Vec<QubitPropsFile>,
    gate_props: Vec<GatePropsFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QubitPropsFile {
    t1_us: f64,
    t2_us: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    readout_confusion: Option<[[f64; 2]; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GatePropsFile {
    gate: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    qubits: Option<Vec<usize>>,
    duration_ns: f64,
    error: f64,
}

const BUNDLED: [(&str, &str); 4] = [
    ("all-to-all", include_str!("../../devices/all-to-all.json")),
    ("heavy-hex", include_str!("../../devices/heavy-hex.json")),
    (
        "full-depolarizing",
        include_str!("../../devices/full-depolarizing.json"),
    ),
    (
        "strong-relaxation",
        include_str!("../../devices/strong-relaxation.json"),
    ),
];

impl DeviceSpec {
    /// Validates and assembles a device.
    pub fn new(
        name: impl Into<String>,
        n_qubits: usize,
        coupling_map: Vec<[usize; 2]>,
        native_gates: BTreeSet<GateKind>,
        qubit_props: Vec<QubitProps>,
        gate_props: Vec<GateProps>,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::Device(m));
        if n_qubits == 0 {
            return bad("device has no qubits".into());
        }
        if qubit_props.len() != n_qubits {
            return bad(format!(
                "{} qubit_props entries for {n_qubits} qubits",
                qubit_props.len()
            ));
        }
        let mut adjacency = vec![Vec::new(); n_qubits];
        for &[a, b] in &coupling_map {
            if a >= n_qubits || b >= n_qubits {
                return bad(format!("edge ({a},{b}) outside {n_qubits} qubits"));
            }
            if a == b {
                return bad(format!("self-loop on qubit {a}"));
            }
            if !adjacency[a].contains(&b) {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        if !is_connected(&adjacency) {
            return bad("coupling map is disconnected".into());
        }
        for (q, p) in qubit_props.iter().enumerate() {
            if !(p.t1 > 0.0 && p.t2 > 0.0) || !p.t1.is_finite() || !p.t2.is_finite() {
                return bad(format!("qubit {q}: coherence times must be positive"));
            }
            if p.t2 > 2.0 * p.t1 {
                return Err(Error::Relaxation(format!(
                    "qubit {q}: t2 = {} exceeds 2·t1 = {}",
                    p.t2,
                    2.0 * p.t1
                )));
            }
        }
        for g in &gate_props {
            if !(0.0..=1.0).contains(&g.error) {
                return bad(format!("{} error {} outside [0,1]", g.gate, g.error));
            }
            if !(g.duration >= 0.0) || !g.duration.is_finite() {
                return bad(format!("{} duration must be non-negative", g.gate));
            }
            if let Some(qs) = &g.qubits {
                if qs.len() != g.gate.arity() || qs.iter().any(|&q| q >= n_qubits) {
                    return bad(format!("{} entry has invalid qubits {qs:?}", g.gate));
                }
            }
        }
        Ok(Self {
            name: name.into(),
            n_qubits,
            coupling_map,
            native_gates,
            qubit_props,
            gate_props,
            adjacency,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DeviceFile =
            serde_json::from_str(text).map_err(|e| Error::Device(format!("schema violation: {e}")))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::Device(format!(
                "unsupported schema_version {}",
                file.schema_version
            )));
        }
        let native_gates = file
            .native_gates
            .iter()
            .map(|g| g.parse())
            .collect::<Result<BTreeSet<GateKind>>>()?;
        let qubit_props = file
            .qubit_props
            .into_iter()
            .map(|p| {
                Ok(QubitProps {
                    t1: p.t1_us * 1e-6,
                    t2: p.t2_us * 1e-6,
                    readout: p.readout_confusion.map(Confusion::new).transpose()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let gate_props = file
            .gate_props
            .into_iter()
            .map(|g| {
                Ok(GateProps {
                    gate: g.gate.parse()?,
                    qubits: g.qubits,
                    duration: g.duration_ns * 1e-9,
                    error: g.error,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if file.n_qubits != qubit_props.len() {
            return Err(Error::Device(format!(
                "n_qubits = {} but {} qubit_props entries",
                file.n_qubits,
                qubit_props.len()
            )));
        }
        Self::new(
            file.name,
            file.n_qubits,
            file.coupling_map,
            native_gates,
            qubit_props,
            gate_props,
        )
    }

    pub fn to_json(&self) -> String {
        let file = DeviceFile {
            schema_version: SCHEMA_VERSION,
            name: self.name.clone(),
            n_qubits: self.n_qubits,
            coupling_map: self.coupling_map.clone(),
            native_gates: self.native_gates.iter().map(|g| g.name().to_string()).collect(),
            qubit_props: self
                .qubit_props
                .iter()
                .map(|p| QubitPropsFile {
                    t1_us: round_sig(p.t1 * 1e6),
                    t2_us: round_sig(p.t2 * 1e6),
                    readout_confusion: p.readout.map(|c| c.matrix()),
                })
                .collect(),
            gate_props: self
                .gate_props
                .iter()
                .map(|g| GatePropsFile {
                    gate: g.gate.name().to_string(),
                    qubits: g.qubits.clone(),
                    duration_ns: round_sig(g.duration * 1e9),
                    error: g.error,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("device serialises") + "\n"
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn bundled_names() -> impl Iterator<Item = &'static str> {
        BUNDLED.iter().map(|(n, _)| *n)
    }

    pub fn bundled(name: &str) -> Result<Self> {
        let (_, text) = BUNDLED
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::Device(format!("no bundled device named `{name}`")))?;
        Self::from_json(text)
    }

    /// A bundled device name or a path to a spec file.
    pub fn resolve(name_or_path: &str) -> Result<Self> {
        if BUNDLED.iter().any(|(n, _)| *n == name_or_path) {
            Self::bundled(name_or_path)
        } else {
            Self::load(name_or_path)
        }
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn are_coupled(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn degree(&self, q: usize) -> usize {
        self.adjacency[q].len()
    }

    /// Noise parameters for `gate` on `qubits`; exact entries win over defaults.
    pub fn gate_props(&self, gate: GateKind, qubits: &[usize]) -> Option<&GateProps> {
        let exact = self.gate_props.iter().find(|p| {
            p.gate == gate
                && p.qubits
                    .as_deref()
                    .is_some_and(|qs| qs == qubits || (qs.len() == 2 && qs[0] == qubits[1] && qs[1] == qubits[0]))
        });
        exact.or_else(|| self.gate_props.iter().find(|p| p.gate == gate && p.qubits.is_none()))
    }

    /// True when no gate carries error or duration.
    pub fn is_noiseless(&self) -> bool {
        self.gate_props.iter().all(|g| g.error == 0.0 && g.duration == 0.0)
            && self
                .qubit_props
                .iter()
                .all(|q| q.readout.is_none_or(|c| c == Confusion::identity()))
    }
}

fn is_connected(adjacency: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adjacency.len()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(q) = queue.pop_front() {
        for &n in &adjacency[q] {
            if !seen[n] {
                seen[n] = true;
                queue.push_back(n);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Rounds to 12 significant digits so unit conversions print cleanly.
fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let digits = 12 - x.abs().log10().ceil() as i32;
    let scale = 10f64.powi(digits);
    (x * scale).round() / scale
}
