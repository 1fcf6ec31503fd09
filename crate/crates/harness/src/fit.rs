//! Least-squares fits for the emitted series: exponential logical decay,
//! leakage saturation, and sinusoidal rotation response.
//!
//! All fits are deterministic: linear subproblems are solved in closed
//! form and one-dimensional searches use a fixed grid plus golden-section
//! refinement, so re-fitting stored points reproduces the stored fit bit
//! for bit.

use crate::HarnessError;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitParam {
    pub name: String,
    pub value: f64,
    pub std_err: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitResult {
    pub model: String,
    pub params: Vec<FitParam>,
    pub residual_norm: f64,
    /// Set when the data could not constrain the model (for example a
    /// constant series fit by a decay), and the returned parameters are a
    /// canonical choice rather than a unique optimum.
    pub degenerate: bool,
}

impl FitResult {
    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|p| p.name == name).map(|p| p.value)
    }
}

fn golden_min(mut lo: f64, mut hi: f64, tol: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut a = hi - INV_PHI * (hi - lo);
    let mut b = lo + INV_PHI * (hi - lo);
    let mut fa = f(a);
    let mut fb = f(b);
    while hi - lo > tol {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - INV_PHI * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + INV_PHI * (hi - lo);
            fb = f(b);
        }
    }
    0.5 * (lo + hi)
}

fn solve2(m: [[f64; 2]; 2], v: [f64; 2]) -> Option<[f64; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.abs() < 1e-300 || !det.is_finite() {
        return None;
    }
    Some([
        (v[0] * m[1][1] - v[1] * m[0][1]) / det,
        (m[0][0] * v[1] - m[1][0] * v[0]) / det,
    ])
}

fn inv3(m: [[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    let c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    let c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    let det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
    if det.abs() < 1e-300 || !det.is_finite() {
        return None;
    }
    let inv = |a: f64| a / det;
    Some([
        [
            inv(c00),
            inv(m[0][2] * m[2][1] - m[0][1] * m[2][2]),
            inv(m[0][1] * m[1][2] - m[0][2] * m[1][1]),
        ],
        [
            inv(c01),
            inv(m[0][0] * m[2][2] - m[0][2] * m[2][0]),
            inv(m[0][2] * m[1][0] - m[0][0] * m[1][2]),
        ],
        [
            inv(c02),
            inv(m[0][1] * m[2][0] - m[0][0] * m[2][1]),
            inv(m[0][0] * m[1][1] - m[0][1] * m[1][0]),
        ],
    ])
}

fn powi_signed(b: f64, r: f64) -> f64 {
    // round counts are integer-valued; powf would NaN on negative bases
    b.powi(r.round() as i32)
}

/// Fit `y = A (1 - 2 eps)^r` over integer-valued `r`. Needs at least 3
/// points. A constant series is flagged degenerate and returns `eps = 0`
/// exactly. `eps` is confined to [0, 1].
pub fn fit_exp_decay(points: &[(f64, f64)]) -> Result<FitResult, HarnessError> {
    if points.len() < 3 {
        return Err(HarnessError::Fit(format!(
            "exp-decay fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    let flat = points
        .iter()
        .all(|&(_, y)| (y - points[0].1).abs() <= 1e-12);
    if flat {
        return Ok(FitResult {
            model: "exp-decay".into(),
            params: vec![
                FitParam {
                    name: "amplitude".into(),
                    value: points[0].1,
                    std_err: 0.0,
                },
                FitParam {
                    name: "epsilon".into(),
                    value: 0.0,
                    std_err: 0.0,
                },
            ],
            residual_norm: 0.0,
            degenerate: true,
        });
    }

    // best amplitude for a given decay base, and the resulting SSE
    let amp_sse = |b: f64| -> (f64, f64) {
        let mut num = 0.0;
        let mut den = 0.0;
        for &(r, y) in points {
            let br = powi_signed(b, r);
            num += y * br;
            den += br * br;
        }
        let a = if den > 0.0 { num / den } else { 0.0 };
        let sse: f64 = points
            .iter()
            .map(|&(r, y)| {
                let e = y - a * powi_signed(b, r);
                e * e
            })
            .sum();
        (a, sse)
    };

    const GRID: usize = 4001;
    let mut best_i = 0;
    let mut best_sse = f64::INFINITY;
    for i in 0..GRID {
        let b = -1.0 + 2.0 * i as f64 / (GRID - 1) as f64;
        let (_, sse) = amp_sse(b);
        if sse < best_sse {
            best_sse = sse;
            best_i = i;
        }
    }
    if !best_sse.is_finite() {
        return Err(HarnessError::Fit("exp-decay fit diverged".into()));
    }
    let step = 2.0 / (GRID - 1) as f64;
    let lo = (-1.0 + best_i.saturating_sub(1) as f64 * step).max(-1.0);
    let hi = (-1.0 + (best_i + 1) as f64 * step).min(1.0);
    let b = golden_min(lo, hi, 1e-12, |b| amp_sse(b).1);
    let (a, sse) = amp_sse(b);
    let eps = (1.0 - b) / 2.0;

    // Gauss-Newton covariance at the optimum
    let mut jtj = [[0.0f64; 2]; 2];
    for &(r, _) in points {
        let ri = r.round() as i32;
        let c1 = powi_signed(b, r);
        let c2 = if ri == 0 {
            0.0
        } else {
            -2.0 * a * r * b.powi(ri - 1)
        };
        jtj[0][0] += c1 * c1;
        jtj[0][1] += c1 * c2;
        jtj[1][0] += c1 * c2;
        jtj[1][1] += c2 * c2;
    }
    let dof = points.len().saturating_sub(2).max(1) as f64;
    let sigma2 = sse / dof;
    let (se_a, se_eps) = match solve2(jtj, [1.0, 0.0]) {
        Some(col0) => {
            let col1 = solve2(jtj, [0.0, 1.0]).unwrap_or([0.0, 0.0]);
            (
                (sigma2 * col0[0]).max(0.0).sqrt(),
                (sigma2 * col1[1]).max(0.0).sqrt(),
            )
        }
        None => (0.0, 0.0),
    };

    Ok(FitResult {
        model: "exp-decay".into(),
        params: vec![
            FitParam {
                name: "amplitude".into(),
                value: a,
                std_err: se_a,
            },
            FitParam {
                name: "epsilon".into(),
                value: eps,
                std_err: se_eps,
            },
        ],
        residual_norm: sse.sqrt(),
        degenerate: false,
    })
}

/// Fit the leakage saturation curve
/// `y = eps_leak/eps_d + (p0 - eps_leak/eps_d) exp(-eps_d r)`.
/// Needs at least 4 points. Flat data returns the plateau with
/// `eps_leak = 0`, flagged degenerate.
pub fn fit_leakage(points: &[(f64, f64)]) -> Result<FitResult, HarnessError> {
    if points.len() < 4 {
        return Err(HarnessError::Fit(format!(
            "leakage fit needs at least 4 points, got {}",
            points.len()
        )));
    }
    let flat = points
        .iter()
        .all(|&(_, y)| (y - points[0].1).abs() <= 1e-12);
    if flat {
        let level = points[0].1;
        return Ok(FitResult {
            model: "leakage-saturation".into(),
            params: vec![
                FitParam {
                    name: "epsilon_leak".into(),
                    value: 0.0,
                    std_err: 0.0,
                },
                FitParam {
                    name: "epsilon_d".into(),
                    value: 0.0,
                    std_err: 0.0,
                },
                FitParam {
                    name: "p0".into(),
                    value: level,
                    std_err: 0.0,
                },
                FitParam {
                    name: "plateau".into(),
                    value: level,
                    std_err: 0.0,
                },
            ],
            residual_norm: 0.0,
            degenerate: true,
        });
    }

    // linear subproblem: y = plateau + c exp(-eps_d r)
    let linfit = |eps_d: f64| -> Option<([f64; 2], f64)> {
        let mut m = [[0.0f64; 2]; 2];
        let mut v = [0.0f64; 2];
        for &(r, y) in points {
            let u = (-eps_d * r).exp();
            m[0][0] += 1.0;
            m[0][1] += u;
            m[1][0] += u;
            m[1][1] += u * u;
            v[0] += y;
            v[1] += y * u;
        }
        let sol = solve2(m, v)?;
        let sse: f64 = points
            .iter()
            .map(|&(r, y)| {
                let e = y - sol[0] - sol[1] * (-eps_d * r).exp();
                e * e
            })
            .sum();
        Some((sol, sse))
    };

    const GRID: usize = 481;
    let (log_lo, log_hi) = (-5.0f64, 0.5f64);
    let mut best_i = 0;
    let mut best_sse = f64::INFINITY;
    for i in 0..GRID {
        let eps_d = 10f64.powf(log_lo + (log_hi - log_lo) * i as f64 / (GRID - 1) as f64);
        if let Some((_, sse)) = linfit(eps_d) {
            if sse < best_sse {
                best_sse = sse;
                best_i = i;
            }
        }
    }
    if !best_sse.is_finite() {
        return Err(HarnessError::Fit(
            "leakage fit did not converge on any decay rate".into(),
        ));
    }
    let step = (log_hi - log_lo) / (GRID - 1) as f64;
    let lo = log_lo + best_i.saturating_sub(1) as f64 * step;
    let hi = (log_lo + (best_i + 1) as f64 * step).min(log_hi);
    let log_eps = golden_min(lo, hi, 1e-13, |le| {
        linfit(10f64.powf(le)).map_or(f64::INFINITY, |(_, s)| s)
    });
    let eps_d = 10f64.powf(log_eps);
    let (sol, sse) = linfit(eps_d)
        .ok_or_else(|| HarnessError::Fit("leakage fit is singular at the optimum".into()))?;
    let plateau = sol[0];
    let p0 = sol[0] + sol[1];
    let eps_leak = plateau * eps_d;

    // covariance in (eps_leak, eps_d, p0)
    let mut jtj = [[0.0f64; 3]; 3];
    for &(r, _) in points {
        let u = (-eps_d * r).exp();
        let j = [
            (1.0 - u) / eps_d,
            -plateau / eps_d * (1.0 - u) - (p0 - plateau) * r * u,
            u,
        ];
        for (a, ja) in j.iter().enumerate() {
            for (b, jb) in j.iter().enumerate() {
                jtj[a][b] += ja * jb;
            }
        }
    }
    let dof = points.len().saturating_sub(3).max(1) as f64;
    let sigma2 = sse / dof;
    let se = if eps_d > 1e-12 {
        inv3(jtj).map_or([0.0; 3], |inv| {
            [
                (sigma2 * inv[0][0]).max(0.0).sqrt(),
                (sigma2 * inv[1][1]).max(0.0).sqrt(),
                (sigma2 * inv[2][2]).max(0.0).sqrt(),
            ]
        })
    } else {
        [0.0; 3]
    };

    Ok(FitResult {
        model: "leakage-saturation".into(),
        params: vec![
            FitParam {
                name: "epsilon_leak".into(),
                value: eps_leak,
                std_err: se[0],
            },
            FitParam {
                name: "epsilon_d".into(),
                value: eps_d,
                std_err: se[1],
            },
            FitParam {
                name: "p0".into(),
                value: p0,
                std_err: se[2],
            },
            FitParam {
                name: "plateau".into(),
                value: plateau,
                std_err: 0.0,
            },
        ],
        residual_norm: sse.sqrt(),
        degenerate: false,
    })
}

/// Fit `y = a cos x + b sin x + c` by linear least squares. Reports the
/// derived amplitude `hypot(a, b)` and phase `atan2(b, a)` as well.
pub fn fit_trig(points: &[(f64, f64)]) -> Result<FitResult, HarnessError> {
    if points.len() < 3 {
        return Err(HarnessError::Fit(format!(
            "trig fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    let mut m = [[0.0f64; 3]; 3];
    let mut v = [0.0f64; 3];
    for &(x, y) in points {
        let row = [x.cos(), x.sin(), 1.0];
        for (a, ra) in row.iter().enumerate() {
            for (b, rb) in row.iter().enumerate() {
                m[a][b] += ra * rb;
            }
            v[a] += ra * y;
        }
    }
    let inv = inv3(m)
        .ok_or_else(|| HarnessError::Fit("trig fit design matrix is singular".into()))?;
    let mut sol = [0.0f64; 3];
    for a in 0..3 {
        for b in 0..3 {
            sol[a] += inv[a][b] * v[b];
        }
    }
    let sse: f64 = points
        .iter()
        .map(|&(x, y)| {
            let e = y - sol[0] * x.cos() - sol[1] * x.sin() - sol[2];
            e * e
        })
        .sum();
    let dof = points.len().saturating_sub(3).max(1) as f64;
    let sigma2 = sse / dof;
    let se = [
        (sigma2 * inv[0][0]).max(0.0).sqrt(),
        (sigma2 * inv[1][1]).max(0.0).sqrt(),
        (sigma2 * inv[2][2]).max(0.0).sqrt(),
    ];
    let amplitude = sol[0].hypot(sol[1]);
    let phase = sol[1].atan2(sol[0]);
    let se_amp = if amplitude > 1e-12 {
        ((sol[0] * se[0]).powi(2) + (sol[1] * se[1]).powi(2)).sqrt() / amplitude
    } else {
        se[0].max(se[1])
    };

    Ok(FitResult {
        model: "trig".into(),
        params: vec![
            FitParam {
                name: "cos_amp".into(),
                value: sol[0],
                std_err: se[0],
            },
            FitParam {
                name: "sin_amp".into(),
                value: sol[1],
                std_err: se[1],
            },
            FitParam {
                name: "offset".into(),
                value: sol[2],
                std_err: se[2],
            },
            FitParam {
                name: "amplitude".into(),
                value: amplitude,
                std_err: se_amp,
            },
            FitParam {
                name: "phase".into(),
                value: phase,
                std_err: 0.0,
            },
        ],
        residual_norm: sse.sqrt(),
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_decay_recovers_synthetic_rates_exactly() {
        let eps = 0.03f64;
        let amp = 0.94f64;
        let points: Vec<(f64, f64)> = (1..=16)
            .map(|r| (r as f64, amp * (1.0 - 2.0 * eps).powi(r)))
            .collect();
        let fit = fit_exp_decay(&points).unwrap();
        assert!(!fit.degenerate);
        assert!((fit.param("epsilon").unwrap() - eps).abs() < 1e-6);
        assert!((fit.param("amplitude").unwrap() - amp).abs() < 1e-6);
        assert!(fit.residual_norm < 1e-9);
    }

    #[test]
    fn constant_series_is_flagged_degenerate_with_zero_rate() {
        let points: Vec<(f64, f64)> = (1..=8).map(|r| (r as f64, 0.875)).collect();
        let fit = fit_exp_decay(&points).unwrap();
        assert!(fit.degenerate);
        assert_eq!(fit.param("epsilon").unwrap(), 0.0);
        assert_eq!(fit.param("amplitude").unwrap(), 0.875);
    }

    #[test]
    fn oscillating_decay_uses_the_negative_base_branch() {
        // eps > 1/2 means an alternating sign curve
        let eps = 0.9;
        let points: Vec<(f64, f64)> = (1..=10)
            .map(|r| (r as f64, (1.0f64 - 2.0 * eps).powi(r)))
            .collect();
        let fit = fit_exp_decay(&points).unwrap();
        assert!((fit.param("epsilon").unwrap() - eps).abs() < 1e-6);
    }

    #[test]
    fn leakage_curve_recovers_the_reference_parameters() {
        let (eps_leak, eps_d, p0) = (0.0022, 0.05, 0.0);
        let a = eps_leak / eps_d;
        let points: Vec<(f64, f64)> = (1..=20)
            .map(|r| {
                let r = r as f64;
                (r, a + (p0 - a) * (-eps_d * r).exp())
            })
            .collect();
        let fit = fit_leakage(&points).unwrap();
        let rel = |name: &str, want: f64| (fit.param(name).unwrap() - want).abs() / want;
        assert!(rel("epsilon_leak", eps_leak) < 0.01);
        assert!(rel("epsilon_d", eps_d) < 0.01);
        assert!(fit.param("p0").unwrap().abs() < 1e-6);
    }

    #[test]
    fn flat_zero_leakage_data_returns_zero_leak_rate() {
        let points: Vec<(f64, f64)> = (1..=10).map(|r| (r as f64, 0.0)).collect();
        let fit = fit_leakage(&points).unwrap();
        assert!(fit.degenerate);
        assert_eq!(fit.param("epsilon_leak").unwrap(), 0.0);
    }

    #[test]
    fn trig_fit_is_exact_on_noiseless_samples() {
        let (a, b, c) = (0.7, -0.2, 0.05);
        let points: Vec<(f64, f64)> = (0..13)
            .map(|i| {
                let x = i as f64 * std::f64::consts::TAU / 12.0;
                (x, a * x.cos() + b * x.sin() + c)
            })
            .collect();
        let fit = fit_trig(&points).unwrap();
        assert!((fit.param("cos_amp").unwrap() - a).abs() < 1e-12);
        assert!((fit.param("sin_amp").unwrap() - b).abs() < 1e-12);
        assert!((fit.param("offset").unwrap() - c).abs() < 1e-12);
        assert!((fit.param("amplitude").unwrap() - a.hypot(b)).abs() < 1e-12);
    }

    #[test]
    fn too_few_points_is_a_fit_error() {
        assert!(fit_exp_decay(&[(1.0, 0.5), (2.0, 0.4)]).is_err());
        assert!(fit_leakage(&[(1.0, 0.5), (2.0, 0.4), (3.0, 0.3)]).is_err());
        let err = fit_trig(&[(0.0, 1.0)]).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
