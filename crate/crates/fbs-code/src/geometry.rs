//! Layout of the 3x3 data grid, its two-body checks, the four stabilizers,
//! and the static/dynamical logical operators.
//!
//! Data qubits are indexed 0..9 in row-major order:
//!
//! ```text
//!   0 1 2
//!   3 4 5
//!   6 7 8
//! ```
//!
//! Check labels follow the conventional 1-based grid naming (`z12` is the
//! ZZ pair on grid sites 1 and 2, which are indices 0 and 1 here). The
//! labels are used verbatim in measurement tags, so they are part of the
//! output format.
//!
//! Operator constructors unwrap internally: the layout is fixed data, so a
//! failure is a bug in the caller's register size, not a runtime condition.

use floqsim_core::{Pauli, PauliString};

/// Number of data qubits.
pub const N_DATA: usize = 9;

/// Ancilla index reserved for check `CHECKS[i]` in hardware-shaped circuits.
pub const fn check_ancilla(index: usize) -> usize {
    N_DATA + index
}

/// First qubit index available for one-shot helper ancillas.
pub const FIRST_FRESH: usize = N_DATA + 12;

/// Wall-clock duration of one stabilization round in seconds: readout plus
/// the gate layer. Used when converting per-round error rates to physical
/// coherence baselines.
pub const ROUND_DURATION_S: f64 = 920e-9;

/// A weight-two check operator between data qubits `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Check {
    pub index: usize,
    pub name: &'static str,
    pub a: usize,
    pub b: usize,
    pub x_type: bool,
}

impl Check {
    pub fn letter(&self) -> Pauli {
        if self.x_type {
            Pauli::X
        } else {
            Pauli::Z
        }
    }

    /// The check as an operator on `n` qubits.
    pub fn op(&self, n: usize) -> PauliString {
        let sites = [self.a, self.b];
        let built = if self.x_type {
            PauliString::x_on(n, &sites)
        } else {
            PauliString::z_on(n, &sites)
        };
        built.expect("check sites fit any data register")
    }

    pub fn ancilla(&self) -> usize {
        check_ancilla(self.index)
    }
}

/// All twelve checks in canonical order. Z pairs run along rows, X pairs
/// along columns. The order fixes the ancilla assignment.
pub const CHECKS: [Check; 12] = [
    Check { index: 0, name: "z12", a: 0, b: 1, x_type: false },
    Check { index: 1, name: "z23", a: 1, b: 2, x_type: false },
    Check { index: 2, name: "z45", a: 3, b: 4, x_type: false },
    Check { index: 3, name: "z56", a: 4, b: 5, x_type: false },
    Check { index: 4, name: "z78", a: 6, b: 7, x_type: false },
    Check { index: 5, name: "z89", a: 7, b: 8, x_type: false },
    Check { index: 6, name: "x14", a: 0, b: 3, x_type: true },
    Check { index: 7, name: "x25", a: 1, b: 4, x_type: true },
    Check { index: 8, name: "x36", a: 2, b: 5, x_type: true },
    Check { index: 9, name: "x47", a: 3, b: 6, x_type: true },
    Check { index: 10, name: "x58", a: 4, b: 7, x_type: true },
    Check { index: 11, name: "x69", a: 5, b: 8, x_type: true },
];

pub fn check(name: &str) -> &'static Check {
    CHECKS
        .iter()
        .find(|c| c.name == name)
        .unwrap_or_else(|| panic!("unknown check {name}"))
}

/// The four stabilizers of the code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StabId {
    SxA,
    SzB,
    SxC,
    SzD,
}

impl StabId {
    pub const ALL: [StabId; 4] = [StabId::SxA, StabId::SzB, StabId::SxC, StabId::SzD];

    pub fn label(self) -> &'static str {
        match self {
            StabId::SxA => "sxa",
            StabId::SzB => "szb",
            StabId::SxC => "sxc",
            StabId::SzD => "szd",
        }
    }

    pub fn x_type(self) -> bool {
        matches!(self, StabId::SxA | StabId::SxC)
    }

    pub fn support(self) -> [usize; 6] {
        match self {
            StabId::SxA => [3, 4, 5, 6, 7, 8],
            StabId::SzB => [1, 2, 4, 5, 7, 8],
            StabId::SxC => [0, 1, 2, 3, 4, 5],
            StabId::SzD => [0, 1, 3, 4, 6, 7],
        }
    }

    pub fn op(self, n: usize) -> PauliString {
        let s = self.support();
        let built = if self.x_type() {
            PauliString::x_on(n, &s)
        } else {
            PauliString::z_on(n, &s)
        };
        built.expect("stabilizer support fits any data register")
    }

    /// Round type whose forming checks multiply to this stabilizer.
    pub fn formed_by(self) -> RoundType {
        match self {
            StabId::SxA => RoundType::A,
            StabId::SzB => RoundType::B,
            StabId::SxC => RoundType::C,
            StabId::SzD => RoundType::D,
        }
    }
}

/// Stabilization round types. Rounds cycle A, B, C, D with round index
/// r = 1, 2, 3, 0 (mod 4). The encoding step is assigned type D so that
/// round 1 continues the cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RoundType {
    A,
    B,
    C,
    D,
}

impl RoundType {
    pub const ALL: [RoundType; 4] = [RoundType::A, RoundType::B, RoundType::C, RoundType::D];

    /// Type of stabilization round `r` (1-based; 0 is the encoding step).
    pub fn of_round(r: usize) -> RoundType {
        match r % 4 {
            1 => RoundType::A,
            2 => RoundType::B,
            3 => RoundType::C,
            _ => RoundType::D,
        }
    }

    pub fn x_type(self) -> bool {
        matches!(self, RoundType::A | RoundType::C)
    }

    /// The four checks measured in a round of this type, in circuit order.
    /// The first three multiply to the formed stabilizer; the fourth is the
    /// central check whose outcome is determined by the previous same-axis
    /// round together with the formed product.
    pub fn schedule(self) -> [&'static Check; 4] {
        match self {
            RoundType::A => [check("x47"), check("x58"), check("x69"), check("x25")],
            RoundType::B => [check("z23"), check("z56"), check("z89"), check("z45")],
            RoundType::C => [check("x14"), check("x25"), check("x36"), check("x58")],
            RoundType::D => [check("z12"), check("z45"), check("z78"), check("z56")],
        }
    }

    pub fn forming(self) -> [&'static Check; 3] {
        let s = self.schedule();
        [s[0], s[1], s[2]]
    }

    pub fn formed_stabilizer(self) -> StabId {
        match self {
            RoundType::A => StabId::SxA,
            RoundType::B => StabId::SzB,
            RoundType::C => StabId::SxC,
            RoundType::D => StabId::SzD,
        }
    }
}

/// Static logical operator for the given axis. The static qubit is fixed
/// for the whole experiment: X is the middle row, Z the middle column.
pub fn static_op(n: usize, p: Pauli) -> PauliString {
    match p {
        Pauli::X => PauliString::x_on(n, &[3, 4, 5]).expect("fixed support"),
        Pauli::Z => PauliString::z_on(n, &[1, 4, 7]).expect("fixed support"),
        Pauli::Y => {
            // i X_s Z_s, works out to a phase-free five-body operator
            let y = static_op(n, Pauli::X)
                .mul(&static_op(n, Pauli::Z))
                .expect("same register")
                .times_i_power(1);
            debug_assert_eq!(y.phase_exponent(), 0);
            y
        }
        Pauli::I => PauliString::identity(n).expect("small register"),
    }
}

/// Dynamical logical operator representative after a round of type `t`.
/// The representatives move every round; Y is fixed as i X Z and is
/// phase-free for every type.
pub fn dynamical_op(n: usize, p: Pauli, t: RoundType) -> PauliString {
    let (xs, zs): (&[usize], &[usize]) = match t {
        RoundType::A => (&[0, 3], &[0, 2]),
        RoundType::B => (&[0, 6], &[6, 7]),
        RoundType::C => (&[3, 6], &[6, 8]),
        RoundType::D => (&[2, 8], &[7, 8]),
    };
    match p {
        Pauli::X => PauliString::x_on(n, xs).expect("fixed support"),
        Pauli::Z => PauliString::z_on(n, zs).expect("fixed support"),
        Pauli::Y => {
            let y = dynamical_op(n, Pauli::X, t)
                .mul(&dynamical_op(n, Pauli::Z, t))
                .expect("same register")
                .times_i_power(1);
            debug_assert_eq!(y.phase_exponent(), 0);
            y
        }
        Pauli::I => PauliString::identity(n).expect("small register"),
    }
}
