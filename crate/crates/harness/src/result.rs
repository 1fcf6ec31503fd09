//! The JSON result document every experiment emits, plus a flat CSV
//! projection of the plotted series.
//!
//! Documents are fully self-describing: the resolved config is echoed so a
//! result can be reproduced from the file alone, and all x/y series carry
//! enough columns to re-run the fits offline. Serialization is
//! deterministic (sorted maps, fixed field order), so identical runs give
//! byte-identical files.

use crate::config::RunConfig;
use crate::fit::FitResult;
use crate::HarnessError;
use floqsim_tomo::BasisCounts;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

/// One plotted sample. Which value columns are present depends on the
/// experiment; absent columns are omitted from the JSON.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Point {
    pub series: String,
    pub x: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub raw: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detected: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub corrected: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub retention: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub expected: Option<f64>,
}

impl Point {
    pub fn new(series: impl Into<String>, x: f64) -> Point {
        Point {
            series: series.into(),
            x,
            ..Point::default()
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedFit {
    pub series: String,
    pub fit: FitResult,
}

/// Fraction of shots in which each detector round fired at least once.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectionPoint {
    pub series: String,
    /// 0 is the encoding consistency layer, `rounds + 1` the final
    /// data-derived layer.
    pub round: usize,
    pub fraction: f64,
}

/// State tomography block for one reconstructed logical state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateTomo {
    pub label: String,
    pub fidelity_raw: f64,
    pub fidelity_detected: f64,
    pub retention: f64,
    pub counts_raw: BasisCounts,
    pub counts_detected: BasisCounts,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProcessTomo {
    pub f_p: f64,
    pub f_g: f64,
    pub input_fidelities: BTreeMap<String, f64>,
    /// Reconstructed Pauli transfer matrix, row major.
    pub matrix: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TomoSection {
    pub states: Vec<StateTomo>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub process: Option<ProcessTomo>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BudgetComponent {
    pub component: String,
    pub weight: f64,
    pub contribution: f64,
    pub percent: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BudgetSection {
    pub total_infidelity: f64,
    pub components: Vec<BudgetComponent>,
    pub residual: f64,
    pub residual_percent: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultDoc {
    pub experiment: String,
    pub seed: u64,
    /// The resolved configuration this run used.
    pub config: serde_json::Value,
    /// Headline numbers, keyed by name. What lands here follows the `post`
    /// selection where one applies.
    #[serde(default)]
    pub summary: BTreeMap<String, f64>,
    #[serde(default)]
    pub points: Vec<Point>,
    #[serde(default)]
    pub fits: Vec<NamedFit>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub detection: Vec<DetectionPoint>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tomography: Option<TomoSection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub budget: Option<BudgetSection>,
}

impl ResultDoc {
    pub fn new(cfg: &RunConfig) -> Result<ResultDoc, HarnessError> {
        let config = serde_json::to_value(cfg)
            .map_err(|e| HarnessError::Sim(format!("config echo failed: {e}")))?;
        Ok(ResultDoc {
            experiment: cfg.experiment.name().to_string(),
            seed: cfg.seed,
            config,
            summary: BTreeMap::new(),
            points: Vec::new(),
            fits: Vec::new(),
            detection: Vec::new(),
            tomography: None,
            budget: None,
        })
    }

    pub fn to_json_string(&self) -> Result<String, HarnessError> {
        serde_json::to_string_pretty(self)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| HarnessError::Sim(format!("result serialization failed: {e}")))
    }

    pub fn from_json_str(text: &str) -> Result<ResultDoc, HarnessError> {
        serde_json::from_str(text)
            .map_err(|e| HarnessError::Sim(format!("bad result document: {e}")))
    }

    pub fn write_json(&self, path: &Path) -> Result<(), HarnessError> {
        std::fs::write(path, self.to_json_string()?)
            .map_err(|e| HarnessError::Sim(format!("cannot write {}: {e}", path.display())))
    }

    pub fn read_json(path: &Path) -> Result<ResultDoc, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Sim(format!("cannot read {}: {e}", path.display())))?;
        ResultDoc::from_json_str(&text)
    }

    /// Flat CSV of the point series, one row per point.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("series,x,raw,detected,corrected,retention,expected\n");
        let cell = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                p.series,
                p.x,
                cell(p.raw),
                cell(p.detected),
                cell(p.corrected),
                cell(p.retention),
                cell(p.expected),
            ));
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), HarnessError> {
        std::fs::write(path, self.to_csv_string())
            .map_err(|e| HarnessError::Sim(format!("cannot write {}: {e}", path.display())))
    }

    /// The points of one named series, as (x, column) pairs ready for a
    /// fit. Points missing the column are skipped.
    pub fn series(&self, name: &str, column: Column) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .filter(|p| p.series == name)
            .filter_map(|p| column.get(p).map(|y| (p.x, y)))
            .collect()
    }

    pub fn fit(&self, series: &str) -> Option<&FitResult> {
        self.fits.iter().find(|f| f.series == series).map(|f| &f.fit)
    }
}

/// Value column selector for [`ResultDoc::series`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    Raw,
    Detected,
    Corrected,
    Retention,
}

impl Column {
    fn get(self, p: &Point) -> Option<f64> {
        match self {
            Column::Raw => p.raw,
            Column::Detected => p.detected,
            Column::Corrected => p.corrected,
            Column::Retention => p.retention,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{resolve, ExperimentKind, RawConfig};

    fn sample_doc() -> ResultDoc {
        let cfg = resolve(ExperimentKind::FbsMemory, &RawConfig::default(), None, None).unwrap();
        let mut doc = ResultDoc::new(&cfg).unwrap();
        for r in 1..=4 {
            let mut p = Point::new("joint", r as f64);
            p.raw = Some(0.9f64.powi(r));
            p.detected = Some(0.95f64.powi(r));
            p.retention = Some(0.8);
            doc.points.push(p);
        }
        doc.summary.insert("joint_detected".into(), 0.81450625);
        doc.detection.push(DetectionPoint {
            series: "joint".into(),
            round: 1,
            fraction: 0.25,
        });
        doc
    }

    #[test]
    fn json_round_trip_preserves_everything() {
        let doc = sample_doc();
        let text = doc.to_json_string().unwrap();
        let back = ResultDoc::from_json_str(&text).unwrap();
        assert_eq!(back.to_json_string().unwrap(), text);
        assert_eq!(back.points.len(), 4);
        assert_eq!(back.summary["joint_detected"], 0.81450625);
    }

    #[test]
    fn series_extraction_feeds_fits() {
        let doc = sample_doc();
        let pts = doc.series("joint", Column::Raw);
        assert_eq!(pts.len(), 4);
        assert_eq!(pts[0], (1.0, 0.9));
        assert!(doc.series("nope", Column::Corrected).is_empty());
    }

    #[test]
    fn csv_projects_the_point_table() {
        let doc = sample_doc();
        let csv = doc.to_csv_string();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "series,x,raw,detected,corrected,retention,expected");
        assert!(lines[1].starts_with("joint,1,0.9,0.95,,0.8,"));
    }
}
