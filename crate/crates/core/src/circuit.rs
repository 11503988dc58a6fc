//! Circuits as ordered lists of parametrized Pauli rotations
//! `exp(-i s θ_k P / 2)` applied to `|+⟩^N`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arrangement::{arrange_round_with, stagger_arrangement, ArrangedRound, RootPick};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// `exp(-i · sign · θ[param] · P / 2)` for the Pauli string `P` on `support`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GateJson", into = "GateJson")]
pub struct PauliRotation {
    support: Vec<(usize, Pauli)>,
    pub param: usize,
    pub sign: i8,
}

#[derive(Serialize, Deserialize)]
struct GateJson {
    q: BTreeMap<usize, Pauli>,
    p: usize,
    s: i8,
}

impl TryFrom<GateJson> for PauliRotation {
    type Error = Error;

    fn try_from(g: GateJson) -> Result<Self> {
        PauliRotation::new(g.q.into_iter().collect(), g.p, g.s)
    }
}

impl From<PauliRotation> for GateJson {
    fn from(g: PauliRotation) -> Self {
        GateJson { q: g.support.into_iter().collect(), p: g.param, s: g.sign }
    }
}

impl PauliRotation {
    pub fn new(mut support: Vec<(usize, Pauli)>, param: usize, sign: i8) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::Parameter("rotation needs a nonempty support".into()));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::Parameter(format!("rotation sign {sign} is not ±1")));
        }
        support.sort_unstable();
        if support.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Parameter("rotation acts twice on one qubit".into()));
        }
        Ok(PauliRotation { support, param, sign })
    }

    pub fn single(q: usize, letter: Pauli, param: usize, sign: i8) -> Self {
        PauliRotation { support: vec![(q, letter)], param, sign }
    }

    /// Two-qubit rotation with `la` on `a` and `lb` on `b` (`a != b`).
    pub fn pair(a: usize, la: Pauli, b: usize, lb: Pauli, param: usize, sign: i8) -> Self {
        assert_ne!(a, b, "two-qubit rotation on a single qubit");
        let mut support = vec![(a, la), (b, lb)];
        support.sort_unstable();
        PauliRotation { support, param, sign }
    }

    /// `(qubit, letter)` pairs in ascending qubit order.
    pub fn support(&self) -> &[(usize, Pauli)] {
        &self.support
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.support.iter().map(|&(q, _)| q)
    }

    pub fn letter(&self, qubit: usize) -> Option<Pauli> {
        self.support.iter().find(|&&(q, _)| q == qubit).map(|&(_, l)| l)
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn count(&self, letter: Pauli) -> usize {
        self.support.iter().filter(|&&(_, l)| l == letter).count()
    }

    /// Bits flipped by the string (X and Y positions).
    pub fn x_mask(&self) -> u64 {
        self.mask(|l| l != Pauli::Z)
    }

    /// Bits that pick up a sign (Z and Y positions).
    pub fn z_mask(&self) -> u64 {
        self.mask(|l| l != Pauli::X)
    }

    fn mask(&self, keep: impl Fn(Pauli) -> bool) -> u64 {
        self.support
            .iter()
            .filter(|&&(_, l)| keep(l))
            .fold(0, |m, &(q, _)| m | (1 << q))
    }

    /// Label such as `Z0Y3`.
    pub fn label(&self) -> String {
        self.support.iter().map(|(q, l)| format!("{l}{q}")).collect()
    }
}

/// True iff the string commutes with `X⊗…⊗X` and has an odd number of `Y`.
pub fn check_relevant_series(gate: &PauliRotation) -> bool {
    let anticommuting = gate.count(Pauli::Y) + gate.count(Pauli::Z);
    anticommuting % 2 == 0 && gate.count(Pauli::Y) % 2 == 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnsatzKind {
    IhvaTree,
    IhvaStagger,
    MaQaoa,
    EqualAngleIhvaTree,
    EqualAngleQaoa,
    Custom,
}

impl AnsatzKind {
    pub fn name(self) -> &'static str {
        match self {
            AnsatzKind::IhvaTree => "ihva-tree",
            AnsatzKind::IhvaStagger => "ihva-stagger",
            AnsatzKind::MaQaoa => "ma-qaoa",
            AnsatzKind::EqualAngleIhvaTree => "equal-angle-ihva-tree",
            AnsatzKind::EqualAngleQaoa => "equal-angle-qaoa",
            AnsatzKind::Custom => "custom",
        }
    }

    /// Every generator has an odd number of `Y`, so states stay real.
    pub fn is_ihva(self) -> bool {
        matches!(
            self,
            AnsatzKind::IhvaTree | AnsatzKind::IhvaStagger | AnsatzKind::EqualAngleIhvaTree
        )
    }
}

impl fmt::Display for AnsatzKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which equal-angle ansatz [`build_equal_angle`] produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqualAngle {
    IhvaTree,
    Qaoa,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<PauliRotation>,
    n_params: usize,
    pub kind: AnsatzKind,
    pub rounds: usize,
    pub graph_hash: u64,
}

#[derive(Serialize, Deserialize)]
struct CircuitJson {
    n: usize,
    params: usize,
    gates: Vec<PauliRotation>,
}

impl Circuit {
    /// Checks widths and that the parameter indices cover `0..n_params`.
    pub fn new(n_qubits: usize, gates: Vec<PauliRotation>, n_params: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > 63 {
            return Err(Error::Parameter(format!("circuit width {n_qubits} outside 1..=63")));
        }
        let mut used = vec![false; n_params];
        for g in &gates {
            if let Some(q) = g.qubits().find(|&q| q >= n_qubits) {
                return Err(Error::Parameter(format!("gate {} uses qubit {q} of {n_qubits}", g.label())));
            }
            match used.get_mut(g.param) {
                Some(u) => *u = true,
                None => {
                    return Err(Error::Parameter(format!(
                        "gate {} uses parameter {} of {n_params}",
                        g.label(),
                        g.param
                    )))
                }
            }
        }
        if let Some(k) = used.iter().position(|&u| !u) {
            return Err(Error::Parameter(format!("parameter {k} drives no gate")));
        }
        Ok(Circuit { n_qubits, gates, n_params, kind: AnsatzKind::Custom, rounds: 1, graph_hash: 0 })
    }

    fn tagged(mut self, kind: AnsatzKind, rounds: usize, graph: &Graph) -> Self {
        self.kind = kind;
        self.rounds = rounds;
        self.graph_hash = graph.fingerprint();
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[PauliRotation] {
        &self.gates
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    /// True when every gate has an odd number of `Y` letters.
    pub fn is_real(&self) -> bool {
        self.gates.iter().all(|g| g.count(Pauli::Y) % 2 == 1)
    }

    pub fn to_json(&self) -> String {
        let mirror = CircuitJson { n: self.n_qubits, params: self.n_params, gates: self.gates.clone() };
        serde_json::to_string(&mirror).expect("circuit serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mirror: CircuitJson = serde_json::from_str(text)?;
        Circuit::new(mirror.n, mirror.gates, mirror.params)
    }
}

fn check_rounds(p: usize) -> Result<()> {
    if p == 0 {
        return Err(Error::Parameter("at least one round is required".into()));
    }
    Ok(())
}

/// Odd rounds `Z` on the first node of each pair, even rounds the same list
/// with the letters swapped; one parameter per gate, round-major.
fn alternating_rounds(graph: &Graph, round: &ArrangedRound, p: usize) -> Result<Circuit> {
    let m = round.len();
    let mut gates = Vec::with_capacity(p * m);
    for l in 0..p {
        let (first, second) = if l % 2 == 0 { (Pauli::Z, Pauli::Y) } else { (Pauli::Y, Pauli::Z) };
        for (k, &(a, b)) in round.gates.iter().enumerate() {
            let w = graph.weight(a, b).expect("arranged pair is an edge");
            gates.push(PauliRotation::pair(a, first, b, second, l * m + k, w));
        }
    }
    Circuit::new(graph.n(), gates, p * m)
}

/// iHVA with the tree arrangement in every round.
pub fn build_ihva_tree(graph: &Graph, p: usize) -> Result<Circuit> {
    build_ihva_tree_with(graph, p, RootPick::Lowest)
}

pub fn build_ihva_tree_with(graph: &Graph, p: usize, pick: RootPick) -> Result<Circuit> {
    check_rounds(p)?;
    let round = arrange_round_with(graph, pick)?;
    Ok(alternating_rounds(graph, &round, p)?.tagged(AnsatzKind::IhvaTree, p, graph))
}

/// iHVA with the edge-coloring arrangement in every round.
pub fn build_ihva_stagger(graph: &Graph, p: usize) -> Result<Circuit> {
    check_rounds(p)?;
    crate::arrangement::bfs_spanning_tree(graph, 0)?;
    let round = stagger_arrangement(graph);
    Ok(alternating_rounds(graph, &round, p)?.tagged(AnsatzKind::IhvaStagger, p, graph))
}

/// Multi-angle QAOA: per round one `ZZ` angle per edge, then one `X` angle
/// per node. `ZZ` parameters follow canonical edge order; the gates follow
/// the stagger layers.
pub fn build_ma_qaoa(graph: &Graph, p: usize) -> Result<Circuit> {
    check_rounds(p)?;
    let (m, n) = (graph.n_edges(), graph.n());
    let layers = stagger_arrangement(graph);
    let mut gates = Vec::with_capacity(p * (m + n));
    for l in 0..p {
        let base = l * (m + n);
        for &(a, b) in &layers.gates {
            let k = graph.edge_index(a, b).expect("layer pair is an edge");
            let w = graph.edges()[k].w;
            gates.push(PauliRotation::pair(a, Pauli::Z, b, Pauli::Z, base + k, w));
        }
        for i in 0..n {
            gates.push(PauliRotation::single(i, Pauli::X, base + m + i, 1));
        }
    }
    Ok(Circuit::new(n, gates, p * (m + n))?.tagged(AnsatzKind::MaQaoa, p, graph))
}

/// One-round ansatz with shared angles; edge weights enter as gate signs.
pub fn build_equal_angle(graph: &Graph, kind: EqualAngle) -> Result<Circuit> {
    match kind {
        EqualAngle::IhvaTree => {
            let round = arrange_round_with(graph, RootPick::Lowest)?;
            let gates = round
                .gates
                .iter()
                .map(|&(z, y)| {
                    let w = graph.weight(z, y).expect("arranged pair is an edge");
                    PauliRotation::pair(z, Pauli::Z, y, Pauli::Y, 0, w)
                })
                .collect();
            Ok(Circuit::new(graph.n(), gates, 1)?.tagged(AnsatzKind::EqualAngleIhvaTree, 1, graph))
        }
        EqualAngle::Qaoa => {
            let mut gates: Vec<PauliRotation> = stagger_arrangement(graph)
                .gates
                .iter()
                .map(|&(a, b)| {
                    let w = graph.weight(a, b).expect("layer pair is an edge");
                    PauliRotation::pair(a, Pauli::Z, b, Pauli::Z, 0, w)
                })
                .collect();
            let n_params = if gates.is_empty() { 1 } else { 2 };
            gates.extend((0..graph.n()).map(|i| PauliRotation::single(i, Pauli::X, n_params - 1, 1)));
            Ok(Circuit::new(graph.n(), gates, n_params)?.tagged(AnsatzKind::EqualAngleQaoa, 1, graph))
        }
    }
}

/// ASAP depth in units of two-qubit gates.
pub fn circuit_depth(circuit: &Circuit) -> usize {
    circuit_depth_with(circuit, false)
}

/// ASAP depth; single-qubit gates add a layer only if `count_single_qubit`.
pub fn circuit_depth_with(circuit: &Circuit, count_single_qubit: bool) -> usize {
    let mut level = vec![0usize; circuit.n_qubits()];
    for g in circuit.gates() {
        let cost = usize::from(g.weight() > 1 || count_single_qubit);
        let d = g.qubits().map(|q| level[q]).max().unwrap_or(0) + cost;
        for q in g.qubits() {
            level[q] = d;
        }
    }
    level.into_iter().max().unwrap_or(0)
}

/// Qubits that can influence an observable supported on `qubits`.
pub fn backward_light_cone(circuit: &Circuit, qubits: &[usize]) -> BTreeSet<usize> {
    let mut cone: BTreeSet<usize> = qubits.iter().copied().collect();
    for g in circuit.gates().iter().rev() {
        if g.qubits().any(|q| cone.contains(&q)) {
            cone.extend(g.qubits());
        }
    }
    cone
}
