//! Error-budget decomposition by finite-difference gradient weights.
//!
//! For each noise component k the infidelity gradient is measured at half
//! the physical rate (others held at full rates) with a central difference
//! of step +-25% of the evaluation point. contribution_k = p_k * weight_k;
//! whatever the contributions do not explain of the total infidelity is
//! the residual. The fidelity functional is supplied by the caller and
//! must use common random numbers across calls for stable gradients.

use crate::{NoiseError, NoiseModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    OneQubit,
    Cz,
    Measurement,
    IdleDd,
}

impl Component {
    pub const ALL: [Component; 4] = [
        Component::OneQubit,
        Component::Cz,
        Component::Measurement,
        Component::IdleDd,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Component::OneQubit => "1Q",
            Component::Cz => "CZ",
            Component::Measurement => "M",
            Component::IdleDd => "DD",
        }
    }

    fn rate(self, m: &NoiseModel) -> f64 {
        match self {
            Component::OneQubit => m.p_1q,
            Component::Cz => m.p_cz,
            Component::Measurement => m.p_m,
            Component::IdleDd => m.p_dd,
        }
    }

    fn with_rate(self, m: &NoiseModel, value: f64) -> NoiseModel {
        let mut out = *m;
        match self {
            Component::OneQubit => out.p_1q = value,
            Component::Cz => out.p_cz = value,
            Component::Measurement => out.p_m = value,
            Component::IdleDd => out.p_dd = value,
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ComponentBudget {
    pub component: Component,
    /// dimensionless infidelity gradient d(infidelity)/d(rate)
    pub weight: f64,
    /// rate x weight
    pub contribution: f64,
    /// contribution as a percentage of the total infidelity
    pub percent: f64,
}

#[derive(Debug, Clone)]
pub struct ErrorBudget {
    pub total_infidelity: f64,
    pub components: Vec<ComponentBudget>,
    pub residual: f64,
    pub residual_percent: f64,
}

/// Decompose the infidelity of a simulated experiment into per-component
/// contributions. `infidelity` evaluates the full experiment at a given
/// model; it is called once at the full model and twice per component.
pub fn error_budget<F>(model: &NoiseModel, mut infidelity: F) -> Result<ErrorBudget, NoiseError>
where
    F: FnMut(&NoiseModel) -> Result<f64, NoiseError>,
{
    model.validate()?;
    let mut eval = |m: &NoiseModel, what: &str| -> Result<f64, NoiseError> {
        let v = infidelity(m)?;
        if !v.is_finite() {
            return Err(NoiseError::NonFiniteEvaluation(what.to_string()));
        }
        Ok(v)
    };
    let total = eval(model, "full model")?;
    let mut components = Vec::with_capacity(4);
    for comp in Component::ALL {
        let rate = comp.rate(model);
        let weight = if rate == 0.0 {
            0.0
        } else {
            let center = rate / 2.0;
            let h = 0.25 * center;
            let hi = eval(&comp.with_rate(model, center + h), comp.label())?;
            let lo = eval(&comp.with_rate(model, center - h), comp.label())?;
            let w = (hi - lo) / (2.0 * h);
            if !w.is_finite() {
                return Err(NoiseError::NonFiniteEvaluation(comp.label().to_string()));
            }
            w
        };
        let contribution = rate * weight;
        let percent = if total != 0.0 {
            100.0 * contribution / total
        } else {
            0.0
        };
        components.push(ComponentBudget {
            component: comp,
            weight,
            contribution,
            percent,
        });
    }
    let explained: f64 = components.iter().map(|c| c.contribution).sum();
    let residual = total - explained;
    let residual_percent = if total != 0.0 {
        100.0 * residual / total
    } else {
        0.0
    };
    Ok(ErrorBudget {
        total_infidelity: total,
        components,
        residual,
        residual_percent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_functional_recovers_exact_weights() {
        let model = NoiseModel::default();
        let budget = error_budget(&model, |m| {
            Ok(2.0 * m.p_1q + 3.0 * m.p_cz + 5.0 * m.p_m + 7.0 * m.p_dd)
        })
        .unwrap();
        let want = [2.0, 3.0, 5.0, 7.0];
        for (c, w) in budget.components.iter().zip(want) {
            assert!((c.weight - w).abs() < 1e-9, "{:?}", c);
            assert!((c.contribution - c.weight * Component::rate(c.component, &model)).abs() < 1e-12);
        }
        assert!(budget.residual.abs() < 1e-9);
        let pct: f64 = budget.components.iter().map(|c| c.percent).sum();
        assert!((pct + budget.residual_percent - 100.0).abs() < 1e-6);
    }

    #[test]
    fn zero_rates_give_zero_budget() {
        let budget = error_budget(&NoiseModel::zero(), |_| Ok(0.0)).unwrap();
        assert_eq!(budget.total_infidelity, 0.0);
        for c in &budget.components {
            assert_eq!(c.weight, 0.0);
            assert_eq!(c.contribution, 0.0);
        }
    }

    #[test]
    fn nonfinite_evaluation_is_reported() {
        let err = error_budget(&NoiseModel::default(), |m| {
            if m.p_cz < 0.0097 {
                Ok(f64::NAN)
            } else {
                Ok(0.1)
            }
        });
        assert!(matches!(err, Err(NoiseError::NonFiniteEvaluation(_))));
    }

    #[test]
    fn evaluation_points_bracket_half_rate() {
        let model = NoiseModel::default();
        let mut seen = Vec::new();
        let _ = error_budget(&model, |m| {
            seen.push(m.p_m);
            Ok(m.p_m)
        })
        .unwrap();
        let half = 0.0158 / 2.0;
        assert!(seen.contains(&(half * 1.25)));
        assert!(seen.contains(&(half * 0.75)));
    }
}
