//! Repeatability over whole dataset directories.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::datasets::{load_dataset, Sequence};
use crate::detector::detect;
use crate::error::{Error, Result};
use crate::evaluation::{
    filter_min_length, match_segments, EvalConfig, MatchReport, EVAL_MIN_LENGTH,
};
use crate::imaging::load_grayscale;
use crate::params::DetectorParams;

#[derive(Clone, Debug, PartialEq)]
pub struct PairResult {
    pub test_image: String,
    pub report: MatchReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceResult {
    pub name: String,
    pub transformation: String,
    pub pairs: Vec<PairResult>,
}

impl SequenceResult {
    pub fn mean_rep(&self) -> f64 {
        mean(self.pairs.iter().map(|p| p.report.rep))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchTable {
    pub sequences: Vec<SequenceResult>,
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Detects on the reference and every test image of `seq` and matches each
/// test against the reference.
pub fn evaluate_sequence(
    seq: &Sequence,
    params: &DetectorParams,
    cfg: &EvalConfig,
) -> Result<SequenceResult> {
    let reference = filter_min_length(
        &detect(&load_grayscale(&seq.ref_image)?, params)?,
        EVAL_MIN_LENGTH,
    );
    let pairs = seq
        .tests
        .iter()
        .map(|(path, h)| {
            let test = filter_min_length(&detect(&load_grayscale(path)?, params)?, EVAL_MIN_LENGTH);
            Ok(PairResult {
                test_image: path.display().to_string(),
                report: match_segments(&reference, &test, h, cfg)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SequenceResult {
        name: seq.name.clone(),
        transformation: seq.transformation.clone(),
        pairs,
    })
}

/// Benchmarks every sequence under `root`. Sequences that fail to load or
/// evaluate are skipped with a warning; it is an error if none succeed.
pub fn run_bench(
    root: impl AsRef<Path>,
    params: &DetectorParams,
    cfg: &EvalConfig,
) -> Result<BenchTable> {
    let root = root.as_ref();
    let loaded = load_dataset(root)?;
    let mut sequences: Vec<SequenceResult> = loaded
        .into_par_iter()
        .filter_map(
            |(dir, seq)| match seq.and_then(|s| evaluate_sequence(&s, params, cfg)) {
                Ok(r) => Some(r),
                Err(e) => {
                    log::warn!("skipping {}: {e}", dir.display());
                    None
                }
            },
        )
        .collect();
    if sequences.is_empty() {
        return Err(Error::Load(format!(
            "no usable sequence under {}",
            root.display()
        )));
    }
    sequences.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(BenchTable { sequences })
}

impl BenchTable {
    /// Mean repeatability per transformation label, over all pairs.
    pub fn by_transformation(&self) -> BTreeMap<String, (usize, f64)> {
        let mut groups: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for s in &self.sequences {
            groups
                .entry(s.transformation.clone())
                .or_default()
                .extend(s.pairs.iter().map(|p| p.report.rep));
        }
        groups
            .into_iter()
            .map(|(k, v)| (k, (v.len(), mean(v.into_iter()))))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("kind,name,transformation,pairs,mean_rep\n");
        for q in &self.sequences {
            let _ = writeln!(
                s,
                "sequence,{},{},{},{}",
                q.name,
                q.transformation,
                q.pairs.len(),
                q.mean_rep()
            );
        }
        for (t, (n, rep)) in self.by_transformation() {
            let _ = writeln!(s, "transformation,,{t},{n},{rep}");
        }
        s
    }

    pub fn to_text(&self) -> String {
        let width = self
            .sequences
            .iter()
            .map(|q| q.name.len())
            .chain(self.by_transformation().keys().map(String::len))
            .chain(["sequence".len()])
            .max()
            .unwrap_or(8);
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<width$}  {:<16}  {:>5}  {:>8}",
            "sequence", "transformation", "pairs", "rep"
        );
        for q in &self.sequences {
            let _ = writeln!(
                s,
                "{:<width$}  {:<16}  {:>5}  {:>8.4}",
                q.name,
                q.transformation,
                q.pairs.len(),
                q.mean_rep()
            );
        }
        s.push('\n');
        let _ = writeln!(
            s,
            "{:<width$}  {:>5}  {:>8}",
            "transformation", "pairs", "rep"
        );
        for (t, (n, rep)) in self.by_transformation() {
            let _ = writeln!(s, "{t:<width$}  {n:>5}  {rep:>8.4}");
        }
        s
    }
}
