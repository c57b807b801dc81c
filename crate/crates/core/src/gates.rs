//! Pulse unitaries (Raman, Ramsey, cavity pass), temporal-sequence
//! composition on the 9-dimensional {0,1,a} x {0,1,a} space, ideal gate
//! targets, and normalized Frobenius fidelities.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::effective::TwoQubitOperator;
use crate::error::{Error, Result};

/// Per-atom level ordering |0>, |1>, |a>; composite index 3 * atom1 + atom2.
pub const DIM: usize = 9;

const LEVEL_ZERO: usize = 0;
const LEVEL_ONE: usize = 1;
const LEVEL_A: usize = 2;

/// Composite indices of the four hyperfine basis states |0,0>, |0,1>,
/// |1,0>, |1,1>.
pub const HYPERFINE_INDICES: [usize; 4] = [0, 1, 3, 4];

const IDX_A1: usize = 3 * LEVEL_A + LEVEL_ONE; // |a,1>
const IDX_1A: usize = 3 * LEVEL_ONE + LEVEL_A; // |1,a>

/// A pure state of the two-atom {0,1,a} x {0,1,a} space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NineState {
    pub amps: [C64; DIM],
}

impl NineState {
    pub fn zero() -> Self {
        NineState {
            amps: [C64::new(0.0, 0.0); DIM],
        }
    }

    /// Basis state |atom1, atom2> with levels in {0, 1, 2=a}.
    pub fn basis(atom1: usize, atom2: usize) -> Self {
        let mut s = Self::zero();
        s.amps[3 * atom1 + atom2] = C64::new(1.0, 0.0);
        s
    }

    /// The i-th hyperfine basis state (i in 0..4).
    pub fn hyperfine(i: usize) -> Self {
        let mut s = Self::zero();
        s.amps[HYPERFINE_INDICES[i]] = C64::new(1.0, 0.0);
        s
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Amplitudes on the hyperfine basis and the squared amplitude left
    /// outside it.
    pub fn project_hyperfine(&self) -> ([C64; 4], f64) {
        let mut proj = [C64::new(0.0, 0.0); 4];
        for (i, &idx) in HYPERFINE_INDICES.iter().enumerate() {
            proj[i] = self.amps[idx];
        }
        let kept: f64 = proj.iter().map(|c| c.norm_sqr()).sum();
        (proj, self.norm_sq() - kept)
    }
}

/// Which atoms a pulse addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Targets {
    pub atom1: bool,
    pub atom2: bool,
}

impl Targets {
    pub const BOTH: Targets = Targets {
        atom1: true,
        atom2: true,
    };
    pub const FIRST: Targets = Targets {
        atom1: true,
        atom2: false,
    };
    pub const SECOND: Targets = Targets {
        atom1: false,
        atom2: true,
    };
}

/// The pulse vocabulary of the temporal diagrams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseSpec {
    /// Ideal Raman map |0> <-> |a| on the targeted atoms (identity on |1>).
    Raman(Targets),
    /// Ramsey rotation by eta on the hyperfine pair of the targeted atoms.
    Ramsey(Targets, f64),
    /// Cavity transit: rotation by theta on span{|a,1>, |1,a>}, identity
    /// elsewhere.
    CavityPass(f64),
}

fn apply_single_atom(state: &NineState, atom1: bool, map: impl Fn(usize) -> [C64; 3]) -> NineState {
    // map(level) gives the column of the 3x3 single-atom unitary
    let mut out = NineState::zero();
    for (idx, &amp) in state.amps.iter().enumerate() {
        if amp == C64::new(0.0, 0.0) {
            continue;
        }
        let (l1, l2) = (idx / 3, idx % 3);
        let (level, other) = if atom1 { (l1, l2) } else { (l2, l1) };
        let col = map(level);
        for (new_level, &coef) in col.iter().enumerate() {
            if coef == C64::new(0.0, 0.0) {
                continue;
            }
            let new_idx = if atom1 {
                3 * new_level + other
            } else {
                3 * other + new_level
            };
            out.amps[new_idx] += amp * coef;
        }
    }
    out
}

fn raman_column(level: usize) -> [C64; 3] {
    let mut col = [C64::new(0.0, 0.0); 3];
    match level {
        LEVEL_ZERO => col[LEVEL_A] = C64::new(1.0, 0.0),
        LEVEL_A => col[LEVEL_ZERO] = C64::new(1.0, 0.0),
        _ => col[LEVEL_ONE] = C64::new(1.0, 0.0),
    }
    col
}

fn ramsey_column(level: usize, eta: f64) -> [C64; 3] {
    let (c, s) = ((eta / 2.0).cos(), (eta / 2.0).sin());
    let mut col = [C64::new(0.0, 0.0); 3];
    match level {
        // |0> -> cos |0> - sin |1>
        LEVEL_ZERO => {
            col[LEVEL_ZERO] = C64::new(c, 0.0);
            col[LEVEL_ONE] = C64::new(-s, 0.0);
        }
        // |1> -> sin |0> + cos |1>
        LEVEL_ONE => {
            col[LEVEL_ZERO] = C64::new(s, 0.0);
            col[LEVEL_ONE] = C64::new(c, 0.0);
        }
        _ => col[LEVEL_A] = C64::new(1.0, 0.0),
    }
    col
}

/// Apply one pulse; unitary on the 9-dimensional space.
pub fn apply_pulse(state: &NineState, pulse: &PulseSpec) -> NineState {
    match *pulse {
        PulseSpec::Raman(targets) => {
            let mut s = *state;
            if targets.atom1 {
                s = apply_single_atom(&s, true, raman_column);
            }
            if targets.atom2 {
                s = apply_single_atom(&s, false, raman_column);
            }
            s
        }
        PulseSpec::Ramsey(targets, eta) => {
            let mut s = *state;
            if targets.atom1 {
                s = apply_single_atom(&s, true, |l| ramsey_column(l, eta));
            }
            if targets.atom2 {
                s = apply_single_atom(&s, false, |l| ramsey_column(l, eta));
            }
            s
        }
        PulseSpec::CavityPass(theta) => {
            let mut s = *state;
            let a1 = state.amps[IDX_A1];
            let oa = state.amps[IDX_1A];
            let c = C64::new(theta.cos(), 0.0);
            let ms = C64::new(0.0, -theta.sin());
            s.amps[IDX_A1] = c * a1 + ms * oa;
            s.amps[IDX_1A] = c * oa + ms * a1;
            s
        }
    }
}

/// The temporal diagrams realizable with the setup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diagram {
    /// Raman on both atoms, cavity pass, Raman on both atoms.
    Entangler,
    /// Same pulse list as the entangler; named for the theta = 3pi/2 target.
    ISwap,
    /// Raman pulses on atom 1 only.
    ControlledZ,
    /// Ramsey pi/2, Raman on atom 2 only, cavity pass, Raman on atom 2
    /// only, Ramsey 3pi/2.
    ControlledNotBar,
}

impl Diagram {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "entangler" => Ok(Diagram::Entangler),
            "i-swap" | "iswap" => Ok(Diagram::ISwap),
            "controlled-z" | "cz" => Ok(Diagram::ControlledZ),
            "controlled-not-bar" | "cnotbar" => Ok(Diagram::ControlledNotBar),
            _ => Err(Error::UnknownName {
                what: "diagram",
                name: name.to_string(),
            }),
        }
    }

    pub fn pulses(&self, theta: f64) -> Vec<PulseSpec> {
        use std::f64::consts::PI;
        match self {
            Diagram::Entangler | Diagram::ISwap => vec![
                PulseSpec::Raman(Targets::BOTH),
                PulseSpec::CavityPass(theta),
                PulseSpec::Raman(Targets::BOTH),
            ],
            Diagram::ControlledZ => vec![
                PulseSpec::Raman(Targets::FIRST),
                PulseSpec::CavityPass(theta),
                PulseSpec::Raman(Targets::FIRST),
            ],
            Diagram::ControlledNotBar => vec![
                PulseSpec::Ramsey(Targets::SECOND, PI / 2.0),
                PulseSpec::Raman(Targets::SECOND),
                PulseSpec::CavityPass(theta),
                PulseSpec::Raman(Targets::SECOND),
                PulseSpec::Ramsey(Targets::SECOND, 3.0 * PI / 2.0),
            ],
        }
    }
}

/// The hyperfine-projected operator of a sequence together with per-column
/// leakage and the fidelity against the diagram's ideal gate.
#[derive(Debug, Clone)]
pub struct GateResult {
    pub operator: TwoQubitOperator,
    pub column_leakage: [f64; 4],
    pub fidelity: f64,
}

/// Compose a diagram's pulse list, apply it to the four hyperfine basis
/// inputs, and project the outputs back onto the hyperfine basis.
pub fn run_sequence(diagram: Diagram, theta: f64) -> GateResult {
    let pulses = diagram.pulses(theta);
    let mut matrix = Array2::from_elem((4, 4), C64::new(0.0, 0.0));
    let mut column_leakage = [0.0; 4];
    for col in 0..4 {
        let mut state = NineState::hyperfine(col);
        for pulse in &pulses {
            state = apply_pulse(&state, pulse);
        }
        let (proj, leak) = state.project_hyperfine();
        for row in 0..4 {
            matrix[[row, col]] = proj[row];
        }
        column_leakage[col] = leak;
    }
    let leakage_norm = column_leakage.iter().sum();
    let operator = TwoQubitOperator {
        matrix,
        leakage_norm,
    };
    let fidelity = match diagram {
        Diagram::Entangler => 1.0 - normalized_distance(&operator, &evolution_target(theta), GateKind::ISwap.max_distance(), false),
        Diagram::ISwap => fidelity_from_operator(GateKind::ISwap, &operator),
        Diagram::ControlledZ => fidelity_from_operator(GateKind::ControlledZ, &operator),
        Diagram::ControlledNotBar => fidelity_from_operator(GateKind::ControlledNotBar, &operator),
    };
    GateResult {
        operator,
        column_leakage,
        fidelity,
    }
}

fn evolution_target(theta: f64) -> TwoQubitOperator {
    crate::effective::evolution_matrix(theta)
}

/// The three named gates with exact target matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateKind {
    ISwap,
    ControlledZ,
    ControlledNotBar,
}

impl GateKind {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "i-swap" | "iswap" => Ok(GateKind::ISwap),
            "controlled-z" | "cz" => Ok(GateKind::ControlledZ),
            "controlled-not-bar" | "cnotbar" => Ok(GateKind::ControlledNotBar),
            _ => Err(Error::UnknownName {
                what: "gate",
                name: name.to_string(),
            }),
        }
    }

    pub fn diagram(&self) -> Diagram {
        match self {
            GateKind::ISwap => Diagram::ISwap,
            GateKind::ControlledZ => Diagram::ControlledZ,
            GateKind::ControlledNotBar => Diagram::ControlledNotBar,
        }
    }

    /// Whether the comparison removes the best global phase first.
    fn phase_free(&self) -> bool {
        matches!(self, GateKind::ControlledNotBar)
    }

    /// Maximum of the Frobenius distance over theta, used to normalize the
    /// fidelity onto [0, 1]: 2 sqrt(2) for i-swap, 2 for the others.
    pub fn max_distance(&self) -> f64 {
        match self {
            GateKind::ISwap => 2.0 * 2.0f64.sqrt(),
            GateKind::ControlledZ | GateKind::ControlledNotBar => 2.0,
        }
    }

    /// The analytic fidelity: 1 - sqrt((1 + sin theta)/2) for i-swap,
    /// 1 - sqrt((1 + cos theta)/2) for controlled-Z and controlled-NOT-bar.
    pub fn fidelity_closed_form(&self, theta: f64) -> f64 {
        match self {
            GateKind::ISwap => 1.0 - ((1.0 + theta.sin()) / 2.0).sqrt(),
            GateKind::ControlledZ | GateKind::ControlledNotBar => {
                1.0 - ((1.0 + theta.cos()) / 2.0).sqrt()
            }
        }
    }
}

/// The exact target matrix of a named gate.
pub fn ideal_gate(kind: GateKind) -> TwoQubitOperator {
    let mut m = Array2::from_elem((4, 4), C64::new(0.0, 0.0));
    match kind {
        GateKind::ISwap => {
            m[[0, 0]] = C64::new(1.0, 0.0);
            m[[1, 2]] = C64::new(0.0, 1.0);
            m[[2, 1]] = C64::new(0.0, 1.0);
            m[[3, 3]] = C64::new(1.0, 0.0);
        }
        GateKind::ControlledZ => {
            m[[0, 0]] = C64::new(1.0, 0.0);
            m[[1, 1]] = C64::new(-1.0, 0.0);
            m[[2, 2]] = C64::new(1.0, 0.0);
            m[[3, 3]] = C64::new(1.0, 0.0);
        }
        GateKind::ControlledNotBar => {
            m[[0, 0]] = C64::new(1.0, 0.0);
            m[[1, 1]] = C64::new(1.0, 0.0);
            m[[2, 3]] = C64::new(-1.0, 0.0);
            m[[3, 2]] = C64::new(-1.0, 0.0);
        }
    }
    TwoQubitOperator {
        matrix: m,
        leakage_norm: 0.0,
    }
}

/// Frobenius distance between the physical operator (leakage included as
/// column-norm deficit) and an ideal unitary, divided by `max_distance`.
/// With `phase_free` the best global phase is removed first.
fn normalized_distance(
    actual: &TwoQubitOperator,
    ideal: &TwoQubitOperator,
    max_distance: f64,
    phase_free: bool,
) -> f64 {
    let dist_sq = if phase_free {
        // |U_a - e^{i phi} U_i|^2 minimized over phi: the actual operator
        // has unit column norms on the full space, so |U_a|^2 = 4
        let mut tr = C64::new(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                tr += ideal.matrix[[j, i]].conj() * actual.matrix[[j, i]];
            }
        }
        8.0 - 2.0 * tr.norm()
    } else {
        let mut d = actual.leakage_norm;
        for i in 0..4 {
            for j in 0..4 {
                d += (actual.matrix[[i, j]] - ideal.matrix[[i, j]]).norm_sqr();
            }
        }
        d
    };
    dist_sq.max(0.0).sqrt() / max_distance
}

fn fidelity_from_operator(kind: GateKind, actual: &TwoQubitOperator) -> f64 {
    1.0 - normalized_distance(
        actual,
        &ideal_gate(kind),
        kind.max_distance(),
        kind.phase_free(),
    )
}

/// Brute-force normalized Frobenius fidelity of the named gate at a given
/// coupling angle, computed from the composed pulse sequence.
pub fn gate_fidelity(kind: GateKind, theta: f64) -> f64 {
    let result = run_sequence(kind.diagram(), theta);
    result.fidelity
}
