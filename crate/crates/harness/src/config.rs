//! TOML run configs and their resolution into a validated `RunConfig`.
//!
//! Configs are flat `key = value` files. Unknown keys are rejected. Every
//! key is optional; defaults depend on the experiment. CLI `--seed` and
//! `--shots` override the file.
//!
//! Key reference:
//!
//! * `state` / `states`: logical state labels. Floquet experiments use the
//!   four-character pair labels (`"x+z-"`); static-mode experiments use
//!   `"0" "1" "+" "-" "+i" "-i"`. `states = ["all"]` expands to every
//!   encodable state, `["ft"]` to the fault-tolerant subset.
//! * `rounds`: stabilization rounds; sweeps run `1..=rounds`.
//! * `round_step`: stride of the round sweep.
//! * `shots`: total sampling budget for the experiment, split across its
//!   runs. For `error-budget` it is the budget per gradient evaluation.
//! * `seed`: master RNG seed; every run derives per-shot seeds from it.
//! * `backend`: `"tableau"`, `"vector"`, or `"auto"` (vector when a
//!   non-Clifford rotation is present, tableau otherwise).
//! * `post`: `"raw"`, `"detect"`, or `"correct"`; `correct` is only
//!   meaningful for `bs-memory` / `bs-gates` and is rejected elsewhere.
//! * `lowering`: `"ancilla"`, `"direct"`, or `"auto"` (ancilla on the
//!   tableau backend, direct on the vector backend to save qubits).
//! * `noiseless`: zero all noise rates (individual `p_*` keys still apply
//!   on top).
//! * `p_1q`, `p_cz`, `p_m`, `p_dd`: noise rate overrides.
//! * `setting`: final measurement axes as two letters, e.g. `"ZX"`
//!   (static then dynamical). Defaults to the state's own eigenbasis.
//! * `gates`: logical gate placements. Floquet experiments accept
//!   `"xs@2"`-style tokens (`xs ys zs xd yd zd cnot`); static-mode
//!   experiments accept `"x@1"`, `"y2@3"` (`x y z y2`). The number is the
//!   round after which the gate acts.
//! * `rotation`: `"rz"` or `"rx"` for `rotation-sweep`.
//! * `target`: `"s"` or `"d"`, which logical qubit the rotation drives.
//! * `angle_points`: sample count of the angle sweep (inclusive of both
//!   endpoints).
//! * `angle_max`: sweep upper limit in radians (default one full turn).
//! * `gate_round`: round after which the placed gate acts (rotation and
//!   CNOT experiments).
//! * `cptp`: project the reconstructed process onto the CPTP cone.

use crate::HarnessError;
use floqsim_core::Pauli;
use floqsim_fbs::bs::{BsGate, BsState};
use floqsim_fbs::gates::LogicalGate;
use floqsim_fbs::lower::Lowering;
use floqsim_fbs::plan::StateSpec;
use floqsim_noise::NoiseModel;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    EncodeFidelity,
    FbsMemory,
    PauliGates,
    RotationSweep,
    CnotBell,
    LqptCnot,
    BsMemory,
    BsGates,
    ErrorBudget,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 9] = [
        ExperimentKind::EncodeFidelity,
        ExperimentKind::FbsMemory,
        ExperimentKind::PauliGates,
        ExperimentKind::RotationSweep,
        ExperimentKind::CnotBell,
        ExperimentKind::LqptCnot,
        ExperimentKind::BsMemory,
        ExperimentKind::BsGates,
        ExperimentKind::ErrorBudget,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::EncodeFidelity => "encode-fidelity",
            ExperimentKind::FbsMemory => "fbs-memory",
            ExperimentKind::PauliGates => "pauli-gates",
            ExperimentKind::RotationSweep => "rotation-sweep",
            ExperimentKind::CnotBell => "cnot-bell",
            ExperimentKind::LqptCnot => "lqpt-cnot",
            ExperimentKind::BsMemory => "bs-memory",
            ExperimentKind::BsGates => "bs-gates",
            ExperimentKind::ErrorBudget => "error-budget",
        }
    }

    pub fn from_name(name: &str) -> Result<ExperimentKind, HarnessError> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| {
                let names: Vec<&str> = ExperimentKind::ALL.iter().map(|k| k.name()).collect();
                HarnessError::Config(format!(
                    "unknown experiment {name:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }

    fn is_static_mode(self) -> bool {
        matches!(self, ExperimentKind::BsMemory | ExperimentKind::BsGates)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Tableau,
    Vector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PostKind {
    Raw,
    Detect,
    Correct,
}

impl PostKind {
    pub fn name(self) -> &'static str {
        match self {
            PostKind::Raw => "raw",
            PostKind::Detect => "detect",
            PostKind::Correct => "correct",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LoweringKind {
    Ancilla,
    Direct,
}

impl LoweringKind {
    pub fn to_fbs(self) -> Lowering {
        match self {
            LoweringKind::Ancilla => Lowering::Ancilla,
            LoweringKind::Direct => Lowering::Direct,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RotationKind {
    Rz,
    Rx,
}

/// Raw deserialization target for the TOML file. Every field optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub state: Option<String>,
    pub states: Option<Vec<String>>,
    pub rounds: Option<usize>,
    pub round_step: Option<usize>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub backend: Option<String>,
    pub post: Option<String>,
    pub lowering: Option<String>,
    pub noiseless: Option<bool>,
    pub p_1q: Option<f64>,
    pub p_cz: Option<f64>,
    pub p_m: Option<f64>,
    pub p_dd: Option<f64>,
    pub setting: Option<String>,
    pub gates: Option<Vec<String>>,
    pub rotation: Option<String>,
    pub target: Option<String>,
    pub angle_points: Option<usize>,
    pub angle_max: Option<f64>,
    pub gate_round: Option<usize>,
    pub cptp: Option<bool>,
}

pub fn parse_raw(text: &str) -> Result<RawConfig, HarnessError> {
    toml::from_str(text).map_err(|e| HarnessError::Config(format!("bad config: {e}")))
}

pub fn load_raw(path: &Path) -> Result<RawConfig, HarnessError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_raw(&text)
}

/// Fully resolved and validated description of one experiment run.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub experiment: ExperimentKind,
    pub states: Vec<String>,
    pub rounds: usize,
    pub round_step: usize,
    pub shots: u64,
    pub seed: u64,
    pub backend: BackendKind,
    pub post: PostKind,
    pub lowering: LoweringKind,
    pub noise: NoiseModel,
    /// Final measurement axes ("ZX" style); `None` means the state's own
    /// eigenbasis.
    pub setting: Option<String>,
    pub gates: Vec<String>,
    pub rotation: RotationKind,
    pub target: String,
    pub angle_points: usize,
    pub angle_max: f64,
    pub gate_round: usize,
    pub cptp: bool,
}

fn default_rounds(kind: ExperimentKind) -> usize {
    match kind {
        ExperimentKind::EncodeFidelity => 4,
        ExperimentKind::FbsMemory => 16,
        ExperimentKind::PauliGates => 8,
        ExperimentKind::RotationSweep => 2,
        ExperimentKind::CnotBell => 4,
        ExperimentKind::LqptCnot => 4,
        ExperimentKind::BsMemory => 8,
        ExperimentKind::BsGates => 8,
        ExperimentKind::ErrorBudget => 4,
    }
}

fn expand_states(kind: ExperimentKind, given: &[String]) -> Result<Vec<String>, HarnessError> {
    let mut out = Vec::new();
    for token in given {
        match token.as_str() {
            "all" if kind.is_static_mode() => {
                out.extend(BsState::ALL.iter().map(|s| s.label().to_string()));
            }
            "all" => out.extend(StateSpec::all().iter().map(|s| s.label())),
            "ft" if kind.is_static_mode() => out.extend(
                BsState::ALL
                    .iter()
                    .filter(|s| s.fault_tolerant())
                    .map(|s| s.label().to_string()),
            ),
            "ft" => out.extend(
                StateSpec::all()
                    .iter()
                    .filter(|s| s.fault_tolerant())
                    .map(|s| s.label()),
            ),
            other => {
                // validate the label eagerly so a typo is a config error
                if kind.is_static_mode() {
                    BsState::from_label(other)
                        .map_err(|e| HarnessError::Config(e.to_string()))?;
                } else {
                    StateSpec::from_label(other)
                        .map_err(|e| HarnessError::Config(e.to_string()))?;
                }
                out.push(other.to_string());
            }
        }
    }
    if out.is_empty() {
        return Err(HarnessError::Config("empty state list".into()));
    }
    Ok(out)
}

pub fn parse_pauli(c: char) -> Result<Pauli, HarnessError> {
    match c.to_ascii_uppercase() {
        'X' => Ok(Pauli::X),
        'Y' => Ok(Pauli::Y),
        'Z' => Ok(Pauli::Z),
        other => Err(HarnessError::Config(format!(
            "bad measurement axis {other:?}; expected X, Y, or Z"
        ))),
    }
}

/// Parse a `"ZX"`-style setting into (static axis, dynamical axis).
pub fn parse_setting(s: &str) -> Result<(Pauli, Pauli), HarnessError> {
    let chars: Vec<char> = s.trim().chars().collect();
    if chars.len() != 2 {
        return Err(HarnessError::Config(format!(
            "bad setting {s:?}; expected two axis letters like \"ZX\""
        )));
    }
    Ok((parse_pauli(chars[0])?, parse_pauli(chars[1])?))
}

fn split_gate_token(token: &str) -> Result<(&str, usize), HarnessError> {
    let (name, round) = token.split_once('@').ok_or_else(|| {
        HarnessError::Config(format!("bad gate token {token:?}; expected \"name@round\""))
    })?;
    let round: usize = round
        .parse()
        .map_err(|_| HarnessError::Config(format!("bad gate round in {token:?}")))?;
    Ok((name, round))
}

/// Parse Floquet-mode gate tokens such as `"xs@2"` or `"cnot@2"`.
pub fn parse_fbs_gates(tokens: &[String]) -> Result<Vec<(usize, LogicalGate)>, HarnessError> {
    let mut out = Vec::with_capacity(tokens.len());
    for token in tokens {
        let (name, round) = split_gate_token(token)?;
        let gate = match name.to_ascii_lowercase().as_str() {
            "xs" => LogicalGate::PauliS(Pauli::X),
            "ys" => LogicalGate::PauliS(Pauli::Y),
            "zs" => LogicalGate::PauliS(Pauli::Z),
            "xd" => LogicalGate::PauliD(Pauli::X),
            "yd" => LogicalGate::PauliD(Pauli::Y),
            "zd" => LogicalGate::PauliD(Pauli::Z),
            "cnot" => LogicalGate::CnotSD,
            other => {
                return Err(HarnessError::Config(format!(
                    "unknown gate {other:?}; expected xs ys zs xd yd zd cnot"
                )))
            }
        };
        out.push((round, gate));
    }
    Ok(out)
}

/// Parse static-mode gate tokens such as `"x@1"` or `"y2@3"`.
pub fn parse_bs_gates(tokens: &[String]) -> Result<Vec<(usize, BsGate)>, HarnessError> {
    let mut out = Vec::with_capacity(tokens.len());
    for token in tokens {
        let (name, round) = split_gate_token(token)?;
        let gate = BsGate::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(name))
            .ok_or_else(|| {
                HarnessError::Config(format!("unknown gate {name:?}; expected x y z y2"))
            })?;
        out.push((round, gate));
    }
    Ok(out)
}

/// Resolve a raw config against an experiment kind, applying defaults and
/// CLI overrides, and validate every cross-field constraint that can be
/// checked before simulation.
pub fn resolve(
    kind: ExperimentKind,
    raw: &RawConfig,
    seed_override: Option<u64>,
    shots_override: Option<u64>,
) -> Result<RunConfig, HarnessError> {
    let rotation = match raw.rotation.as_deref() {
        None | Some("rz") => RotationKind::Rz,
        Some("rx") => RotationKind::Rx,
        Some(other) => {
            return Err(HarnessError::Config(format!(
                "unknown rotation {other:?}; expected rz or rx"
            )))
        }
    };

    let target = match raw.target.as_deref() {
        None => "d".to_string(),
        Some(t @ ("s" | "d")) => t.to_string(),
        Some(other) => {
            return Err(HarnessError::Config(format!(
                "unknown target {other:?}; expected s or d"
            )))
        }
    };

    let states = match (&raw.states, &raw.state) {
        (Some(list), _) => expand_states(kind, list)?,
        (None, Some(one)) => expand_states(kind, std::slice::from_ref(one))?,
        (None, None) => match kind {
            ExperimentKind::BsMemory | ExperimentKind::BsGates => vec!["0".to_string()],
            ExperimentKind::RotationSweep => {
                let d_axis = match rotation {
                    RotationKind::Rz => "x+",
                    RotationKind::Rx => "z+",
                };
                vec![if target == "s" {
                    format!("{}z+", d_axis)
                } else {
                    format!("z+{}", d_axis)
                }]
            }
            _ => vec!["x+z+".to_string()],
        },
    };

    let rounds = raw.rounds.unwrap_or_else(|| default_rounds(kind));
    if rounds == 0 {
        return Err(HarnessError::Config("rounds must be at least 1".into()));
    }
    let round_step = raw.round_step.unwrap_or(1);
    if round_step == 0 {
        return Err(HarnessError::Config("round_step must be at least 1".into()));
    }

    let shots = shots_override.or(raw.shots).unwrap_or(100_000);
    if shots == 0 {
        return Err(HarnessError::Config("shots must be at least 1".into()));
    }
    let seed = seed_override.or(raw.seed).unwrap_or(1);

    let uses_rotation = kind == ExperimentKind::RotationSweep;
    let backend = match raw.backend.as_deref() {
        None | Some("auto") => {
            if uses_rotation {
                BackendKind::Vector
            } else {
                BackendKind::Tableau
            }
        }
        Some("tableau") => {
            if uses_rotation {
                return Err(HarnessError::Config(
                    "rotation-sweep needs the vector backend for arbitrary angles".into(),
                ));
            }
            BackendKind::Tableau
        }
        Some("vector") => BackendKind::Vector,
        Some(other) => {
            return Err(HarnessError::Config(format!(
                "unknown backend {other:?}; expected tableau, vector, or auto"
            )))
        }
    };

    let post = match raw.post.as_deref() {
        Some("raw") => PostKind::Raw,
        Some("detect") => PostKind::Detect,
        Some("correct") => PostKind::Correct,
        Some(other) => {
            return Err(HarnessError::Config(format!(
                "unknown post {other:?}; expected raw, detect, or correct"
            )))
        }
        None => {
            if kind.is_static_mode() {
                PostKind::Correct
            } else {
                PostKind::Detect
            }
        }
    };
    if post == PostKind::Correct && !kind.is_static_mode() {
        return Err(HarnessError::Config(
            "post = \"correct\" needs a decoder and is only available for bs-memory and bs-gates"
                .into(),
        ));
    }

    let lowering = match raw.lowering.as_deref() {
        None | Some("auto") => {
            if backend == BackendKind::Vector {
                LoweringKind::Direct
            } else {
                LoweringKind::Ancilla
            }
        }
        Some("ancilla") => LoweringKind::Ancilla,
        Some("direct") => LoweringKind::Direct,
        Some(other) => {
            return Err(HarnessError::Config(format!(
                "unknown lowering {other:?}; expected ancilla, direct, or auto"
            )))
        }
    };

    let mut noise = if raw.noiseless.unwrap_or(false) {
        NoiseModel::zero()
    } else {
        NoiseModel::default()
    };
    if let Some(p) = raw.p_1q {
        noise.p_1q = p;
    }
    if let Some(p) = raw.p_cz {
        noise.p_cz = p;
    }
    if let Some(p) = raw.p_m {
        noise.p_m = p;
    }
    if let Some(p) = raw.p_dd {
        noise.p_dd = p;
    }
    noise
        .validate()
        .map_err(|e| HarnessError::Config(e.to_string()))?;

    if let Some(s) = &raw.setting {
        parse_setting(s)?;
    }

    let gates = raw.gates.clone().unwrap_or_default();
    if kind.is_static_mode() {
        parse_bs_gates(&gates)?;
    } else {
        parse_fbs_gates(&gates)?;
    }

    let angle_points = raw.angle_points.unwrap_or(13);
    if angle_points < 2 {
        return Err(HarnessError::Config(
            "angle_points must be at least 2".into(),
        ));
    }
    let angle_max = raw.angle_max.unwrap_or(std::f64::consts::TAU);
    if !(angle_max.is_finite() && angle_max > 0.0) {
        return Err(HarnessError::Config("angle_max must be positive".into()));
    }

    let gate_round = raw.gate_round.unwrap_or(2);
    match kind {
        ExperimentKind::CnotBell | ExperimentKind::LqptCnot => {
            if gate_round % 4 != 2 {
                return Err(HarnessError::Config(format!(
                    "gate_round {gate_round} is not a CNOT-compatible round (needs round % 4 == 2)"
                )));
            }
            if gate_round > rounds {
                return Err(HarnessError::Config(format!(
                    "gate_round {gate_round} exceeds rounds {rounds}"
                )));
            }
        }
        ExperimentKind::RotationSweep => {
            if gate_round > rounds {
                return Err(HarnessError::Config(format!(
                    "gate_round {gate_round} exceeds rounds {rounds}"
                )));
            }
        }
        _ => {}
    }

    Ok(RunConfig {
        experiment: kind,
        states,
        rounds,
        round_step,
        shots,
        seed,
        backend,
        post,
        lowering,
        noise,
        setting: raw.setting.clone(),
        gates,
        rotation,
        target,
        angle_points,
        angle_max,
        gate_round,
        cptp: raw.cptp.unwrap_or(true),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve_for_every_experiment() {
        for kind in ExperimentKind::ALL {
            let cfg = resolve(kind, &RawConfig::default(), None, None).unwrap();
            assert!(cfg.rounds >= 1);
            assert!(cfg.shots >= 1);
            assert!(!cfg.states.is_empty());
            assert_eq!(ExperimentKind::from_name(kind.name()).unwrap(), kind);
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_raw("state = \"x+z+\"\nshotz = 5\n").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("shotz"));
    }

    #[test]
    fn correct_post_is_static_mode_only() {
        let raw = RawConfig {
            post: Some("correct".into()),
            ..RawConfig::default()
        };
        assert!(resolve(ExperimentKind::FbsMemory, &raw, None, None).is_err());
        assert!(resolve(ExperimentKind::BsMemory, &raw, None, None).is_ok());
    }

    #[test]
    fn auto_backend_tracks_rotation_use() {
        let cfg = resolve(ExperimentKind::RotationSweep, &RawConfig::default(), None, None)
            .unwrap();
        assert_eq!(cfg.backend, BackendKind::Vector);
        assert_eq!(cfg.lowering, LoweringKind::Direct);
        let cfg = resolve(ExperimentKind::FbsMemory, &RawConfig::default(), None, None).unwrap();
        assert_eq!(cfg.backend, BackendKind::Tableau);
        assert_eq!(cfg.lowering, LoweringKind::Ancilla);

        let raw = RawConfig {
            backend: Some("tableau".into()),
            ..RawConfig::default()
        };
        assert!(resolve(ExperimentKind::RotationSweep, &raw, None, None).is_err());
    }

    #[test]
    fn noise_overrides_stack_on_the_noiseless_base() {
        let raw = RawConfig {
            noiseless: Some(true),
            p_m: Some(0.25),
            ..RawConfig::default()
        };
        let cfg = resolve(ExperimentKind::FbsMemory, &raw, None, None).unwrap();
        assert_eq!(cfg.noise.p_1q, 0.0);
        assert_eq!(cfg.noise.p_m, 0.25);

        let raw = RawConfig {
            p_cz: Some(1.5),
            ..RawConfig::default()
        };
        assert!(resolve(ExperimentKind::FbsMemory, &raw, None, None).is_err());
    }

    #[test]
    fn state_expansion_tokens_cover_the_families() {
        let raw = RawConfig {
            states: Some(vec!["all".into()]),
            ..RawConfig::default()
        };
        let cfg = resolve(ExperimentKind::EncodeFidelity, &raw, None, None).unwrap();
        assert_eq!(cfg.states.len(), 36);
        let raw = RawConfig {
            states: Some(vec!["ft".into()]),
            ..RawConfig::default()
        };
        let cfg = resolve(ExperimentKind::EncodeFidelity, &raw, None, None).unwrap();
        assert_eq!(cfg.states.len(), 16);
        let cfg = resolve(ExperimentKind::BsMemory, &raw, None, None).unwrap();
        assert_eq!(cfg.states, vec!["0", "1", "+", "-"]);
    }

    #[test]
    fn gate_tokens_parse_both_families() {
        let fbs = parse_fbs_gates(&["xs@2".into(), "cnot@6".into()]).unwrap();
        assert_eq!(fbs.len(), 2);
        assert_eq!(fbs[1], (6, LogicalGate::CnotSD));
        assert!(parse_fbs_gates(&["q@1".into()]).is_err());
        assert!(parse_fbs_gates(&["xs".into()]).is_err());

        let bs = parse_bs_gates(&["x@1".into(), "y2@3".into()]).unwrap();
        assert_eq!(bs[1], (3, BsGate::Y2));
        assert!(parse_bs_gates(&["h@1".into()]).is_err());
    }

    #[test]
    fn cnot_gate_round_must_sit_on_the_right_phase() {
        let raw = RawConfig {
            gate_round: Some(3),
            ..RawConfig::default()
        };
        assert!(resolve(ExperimentKind::CnotBell, &raw, None, None).is_err());
        let raw = RawConfig {
            gate_round: Some(6),
            rounds: Some(8),
            ..RawConfig::default()
        };
        assert!(resolve(ExperimentKind::CnotBell, &raw, None, None).is_ok());
    }

    #[test]
    fn rotation_sweep_default_state_follows_axis_and_target() {
        let raw = RawConfig {
            rotation: Some("rx".into()),
            ..RawConfig::default()
        };
        let cfg = resolve(ExperimentKind::RotationSweep, &raw, None, None).unwrap();
        assert_eq!(cfg.states, vec!["z+z+"]);
        let raw = RawConfig {
            target: Some("s".into()),
            ..RawConfig::default()
        };
        let cfg = resolve(ExperimentKind::RotationSweep, &raw, None, None).unwrap();
        assert_eq!(cfg.states, vec!["x+z+"]);
    }
}
