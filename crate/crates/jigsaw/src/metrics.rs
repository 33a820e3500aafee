//! Metrics document. Accuracies are written with four decimals.

use std::fmt::Write as _;
use std::path::Path;

use jigsaw_core::Metrics;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::manifest::Manifest;

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct MetricsDoc {
    pub neighbor_accuracy: f64,
    pub perfect: bool,
    pub solution_bounding_box: [usize; 2],
    pub explicit_relation_count: usize,
    pub per_source: Vec<SourceMetricsDoc>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct SourceMetricsDoc {
    pub image_id: String,
    pub neighbor_accuracy: f64,
    pub perfect: bool,
    pub matched: usize,
    pub total: usize,
}

pub fn to_toml(metrics: &Metrics, manifest: &Manifest) -> String {
    let mut s = String::new();
    let (rows, cols) = metrics.solution_bounding_box;
    writeln!(s, "neighbor_accuracy = {:.4}", metrics.neighbor_accuracy).unwrap();
    writeln!(s, "perfect = {}", metrics.perfect).unwrap();
    writeln!(s, "solution_bounding_box = [{rows}, {cols}]").unwrap();
    writeln!(s, "explicit_relation_count = {}", metrics.explicit_relation_count).unwrap();
    for src in &metrics.per_source {
        s.push_str("\n[[per_source]]\n");
        writeln!(s, "image_id = {:?}", manifest.sources[src.source].image_id).unwrap();
        writeln!(s, "neighbor_accuracy = {:.4}", src.neighbor_accuracy).unwrap();
        writeln!(s, "perfect = {}", src.perfect).unwrap();
        writeln!(s, "matched = {}", src.matched).unwrap();
        writeln!(s, "total = {}", src.total).unwrap();
    }
    s
}

pub fn read(path: &Path) -> Result<MetricsDoc> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    toml::from_str(&text).map_err(|e| Error::parse(path, e))
}

/// `"94.8800% perfect=false"`
pub fn summary_line(metrics: &Metrics) -> String {
    format!("{:.4}% perfect={}", 100.0 * metrics.neighbor_accuracy, metrics.perfect)
}
