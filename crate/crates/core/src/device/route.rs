//! Greedy SWAP routing onto a coupling map.

use std::collections::VecDeque;

use rand::seq::IndexedRandom;
use serde::{Deserialize, Serialize};

use super::spec::DeviceSpec;
use crate::circuit::{Circuit, Instruction};
use crate::error::{Error, Result};
use crate::rng;
use crate::sim::Gate;

/// Injective map from virtual qubit `v` to physical qubit `self[v]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Layout(Vec<usize>);

impl Layout {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = map.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Layout(format!("layout {map:?} is not injective")));
        }
        Ok(Self(map))
    }

    pub fn trivial(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn physical(&self, virt: usize) -> usize {
        self.0[virt]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Checks that every image is a qubit of a `n_physical`-qubit device.
    pub fn check_within(&self, n_physical: usize) -> Result<()> {
        match self.0.iter().find(|&&p| p >= n_physical) {
            Some(p) => Err(Error::Layout(format!(
                "physical qubit {p} outside a {n_physical}-qubit device"
            ))),
            None => Ok(()),
        }
    }
}

impl TryFrom<Vec<usize>> for Layout {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Layout> for Vec<usize> {
    fn from(l: Layout) -> Self {
        l.0
    }
}

/// Output of [`route`]: a circuit over physical qubits plus layouts.
#[derive(Debug, Clone, PartialEq)]
pub struct Routed {
    pub circuit: Circuit,
    pub initial_layout: Layout,
    pub final_layout: Layout,
    pub swaps: usize,
}

/// A simple path of `n` device qubits (DFS from each start in index order),
/// falling back to breadth-first order from qubit 0.
pub fn auto_layout(device: &DeviceSpec, n: usize) -> Result<Layout> {
    if n > device.n_qubits {
        return Err(Error::Layout(format!(
            "{n} virtual qubits exceed the {}-qubit device",
            device.n_qubits
        )));
    }
    if n == 0 {
        return Ok(Layout(Vec::new()));
    }
    for start in 0..device.n_qubits {
        let mut path = vec![start];
        let mut on_path = vec![false; device.n_qubits];
        on_path[start] = true;
        let mut budget = 100_000usize;
        if extend_path(device, n, &mut path, &mut on_path, &mut budget) {
            return Ok(Layout(path));
        }
    }
    let mut seen = vec![false; device.n_qubits];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(q) = queue.pop_front() {
        order.push(q);
        if order.len() == n {
            break;
        }
        for &m in device.neighbors(q) {
            if !seen[m] {
                seen[m] = true;
                queue.push_back(m);
            }
        }
    }
    Ok(Layout(order))
}

fn extend_path(device: &DeviceSpec, n: usize, path: &mut Vec<usize>, on: &mut [bool], budget: &mut usize) -> bool {
    if path.len() == n {
        return true;
    }
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    let last = *path.last().unwrap();
    for &m in device.neighbors(last) {
        if !on[m] {
            on[m] = true;
            path.push(m);
            if extend_path(device, n, path, on, budget) {
                return true;
            }
            path.pop();
            on[m] = false;
        }
    }
    false
}

/// Maps `circuit` onto `device`, inserting SWAPs so every two-qubit gate acts
/// on a coupled pair. For each uncoupled gate the first operand walks along a
/// shortest path (ties broken by `seed`) until it neighbours the second.
///
/// The returned circuit spans all device qubits.
pub fn route(circuit: &Circuit, device: &DeviceSpec, initial: Option<&Layout>, seed: u64) -> Result<Routed> {
    let n_virt = circuit.n_qubits();
    if n_virt > device.n_qubits {
        return Err(Error::Layout(format!(
            "circuit of {n_virt} qubits is wider than the {}-qubit device",
            device.n_qubits
        )));
    }
    let layout = match initial {
        Some(l) => {
            if l.len() != n_virt {
                return Err(Error::Layout(format!(
                    "layout covers {} qubits, circuit has {n_virt}",
                    l.len()
                )));
            }
            l.check_within(device.n_qubits)?;
            l.clone()
        }
        None => auto_layout(device, n_virt)?,
    };
    let mut v2p = layout.0.clone();
    let mut p2v: Vec<Option<usize>> = vec![None; device.n_qubits];
    for (v, &p) in v2p.iter().enumerate() {
        p2v[p] = Some(v);
    }
    let mut rng = rng::stream(seed, 0);
    let mut out = Circuit::new(device.n_qubits);
    let mut swaps = 0;

    for ins in circuit.instructions() {
        match ins {
            Instruction::Gate(g) => {
                if g.arity() == 2 {
                    let (a, b) = (v2p[g.targets[0]], v2p[g.targets[1]]);
                    if !device.are_coupled(a, b) {
                        let dist = distances_to(device, b);
                        let mut cur = a;
                        while dist[cur] > 1 {
                            let steps: Vec<usize> = device
                                .neighbors(cur)
                                .iter()
                                .copied()
                                .filter(|&m| dist[m] + 1 == dist[cur])
                                .collect();
                            let next = *steps.choose(&mut rng).expect("connected device");
                            out.push(Gate::swap(cur, next))?;
                            swaps += 1;
                            p2v.swap(cur, next);
                            for p in [cur, next] {
                                if let Some(v) = p2v[p] {
                                    v2p[v] = p;
                                }
                            }
                            cur = next;
                        }
                    }
                }
                let targets = g.targets.iter().map(|&v| v2p[v]).collect();
                out.push(Gate { targets, ..g.clone() })?;
            }
            Instruction::Channel { channel, targets } => {
                out.push_channel(channel.clone(), targets.iter().map(|&v| v2p[v]).collect())?;
            }
        }
    }
    for (&v, &c) in circuit.readout() {
        out.set_readout(v2p[v], c);
    }
    Ok(Routed {
        circuit: out,
        initial_layout: layout,
        final_layout: Layout(v2p),
        swaps,
    })
}

fn distances_to(device: &DeviceSpec, target: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; device.n_qubits];
    dist[target] = 0;
    let mut queue = VecDeque::from([target]);
    while let Some(q) = queue.pop_front() {
        for &m in device.neighbors(q) {
            if dist[m] == usize::MAX {
                dist[m] = dist[q] + 1;
                queue.push_back(m);
            }
        }
    }
    dist
}
