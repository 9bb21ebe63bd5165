//! Seeded batch runs over generated cacti.
//!
//! Instance `i` draws everything from its own ChaCha stream `i` under the
//! master seed, so results do not depend on thread scheduling and a single
//! instance can be reproduced in isolation.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cactus::{cactus_oracle, generate_cactus_with, tree_cover_oracle, CactusClass, CYCLE_ORACLE_LIMIT, TREE_COVER_ORACLE_LIMIT};
use crate::cert::{gcc_check, CertifyOptions, GccReport, Verdict};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::ortho::DimPolicy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchConfig {
    pub count: usize,
    pub min_n: usize,
    pub max_n: usize,
    pub seed: u64,
    pub dim: DimPolicy,
    pub oracle: bool,
}

impl Default for BatchConfig {
    fn default() -> Self {
        BatchConfig { count: 100, min_n: 6, max_n: 40, seed: 0, dim: DimPolicy::Auto, oracle: false }
    }
}

/// Generated graph for instance `id`, plus the seed its build will use.
pub fn batch_instance(config: &BatchConfig, id: usize) -> Result<(Graph, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(id as u64);
    let n = rng.gen_range(config.min_n..=config.max_n);
    let max_cycles = n.saturating_sub(1) / 2;
    let cycles = match id % 3 {
        0 => 0,
        1 => max_cycles.min(1),
        _ if max_cycles >= 2 => rng.gen_range(2..=max_cycles),
        _ => max_cycles,
    };
    let g = generate_cactus_with(n, cycles, &mut rng)?;
    Ok((g, rng.gen()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub tree_cover: Option<usize>,
    /// 1 for trees, 2 for unicyclic graphs, at least 3 otherwise.
    pub tree_cover_ok: Option<bool>,
    pub cactus_oracle_ok: Option<bool>,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.tree_cover_ok != Some(false) && self.cactus_oracle_ok != Some(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceResult {
    pub id: usize,
    pub n: usize,
    pub edges: usize,
    pub class: Option<CactusClass>,
    pub dim: Option<usize>,
    pub fallback_from: Option<usize>,
    pub msr_g: Option<usize>,
    pub msr_comp_bound: Option<usize>,
    pub verdict: Option<Verdict>,
    pub error: Option<String>,
    pub oracle: Option<OracleCheck>,
}

impl InstanceResult {
    pub fn is_failure(&self) -> bool {
        self.verdict != Some(Verdict::Certified) || self.oracle.as_ref().is_some_and(|o| !o.passed())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassStats {
    pub count: usize,
    pub certified: usize,
    /// Number of instances per representation dimension.
    pub dims: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub instance: InstanceResult,
    pub report: Option<GccReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub config: BatchConfig,
    pub count: usize,
    pub certified_count: usize,
    pub fallback_count: usize,
    pub oracle_checks: usize,
    pub oracle_failures: usize,
    pub by_class: BTreeMap<String, ClassStats>,
    pub failures: Vec<Failure>,
    pub instances: Vec<InstanceResult>,
    pub version: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_ms: f64,
    pub p50_ms: f64,
    pub p90_ms: f64,
    pub p99_ms: f64,
    pub max_ms: f64,
}

impl Timing {
    fn from_samples(mut ms: Vec<f64>, total_ms: f64) -> Self {
        ms.sort_by(f64::total_cmp);
        let pick = |q: f64| {
            if ms.is_empty() {
                0.0
            } else {
                ms[((ms.len() - 1) as f64 * q).round() as usize]
            }
        };
        Timing { total_ms, p50_ms: pick(0.5), p90_ms: pick(0.9), p99_ms: pick(0.99), max_ms: pick(1.0) }
    }
}

fn check_config(config: &BatchConfig) -> Result<()> {
    if config.min_n == 0 || config.min_n > config.max_n {
        return Err(Error::Infeasible(format!(
            "vertex range [{}, {}] is empty or contains 0",
            config.min_n, config.max_n
        )));
    }
    Ok(())
}

fn run_instance(config: &BatchConfig, id: usize) -> Result<(InstanceResult, Option<GccReport>)> {
    let (g, build_seed) = batch_instance(config, id)?;
    let options = CertifyOptions { dim: config.dim, seed: build_seed, oracle: config.oracle };
    let mut res = InstanceResult {
        id,
        n: g.n(),
        edges: g.edge_count(),
        class: None,
        dim: None,
        fallback_from: None,
        msr_g: None,
        msr_comp_bound: None,
        verdict: None,
        error: None,
        oracle: None,
    };
    let report = match gcc_check(&g, &options) {
        Ok(r) => {
            res.class = Some(r.class);
            res.dim = Some(r.dim);
            res.fallback_from = r.fallback_from;
            res.msr_g = r.msr_g.as_ref().map(|m| m.value);
            res.msr_comp_bound = r.msr_comp_bound;
            res.verdict = Some(r.verdict);
            Some(r)
        }
        Err(e) => {
            res.error = Some(e.to_string());
            None
        }
    };
    if config.oracle {
        let tree_cover = (g.n() <= TREE_COVER_ORACLE_LIMIT).then(|| tree_cover_oracle(&g)).transpose()?;
        let tree_cover_ok = match (tree_cover.as_ref(), res.class) {
            (Some(t), Some(CactusClass::Tree)) => Some(t.value == 1),
            (Some(t), Some(CactusClass::Unicyclic)) => Some(t.value == 2),
            (Some(t), Some(CactusClass::Multicyclic)) => Some(t.value >= 3),
            _ => None,
        };
        let cactus_oracle_ok = (g.n() <= CYCLE_ORACLE_LIMIT).then(|| cactus_oracle(&g)).transpose()?;
        res.oracle = Some(OracleCheck { tree_cover: tree_cover.map(|t| t.value), tree_cover_ok, cactus_oracle_ok });
    }
    Ok((res, report))
}

/// Generates and certifies `config.count` cacti in parallel. The summary is
/// a function of the configuration alone; wall-clock timing is returned
/// separately.
pub fn run_batch(config: &BatchConfig) -> Result<(BatchSummary, Timing)> {
    check_config(config)?;
    let start = Instant::now();
    let results: Vec<(InstanceResult, Option<GccReport>, f64)> = (0..config.count)
        .into_par_iter()
        .map(|id| {
            let t = Instant::now();
            let (res, report) = run_instance(config, id)?;
            Ok((res, report, t.elapsed().as_secs_f64() * 1e3))
        })
        .collect::<Result<_>>()?;
    let total_ms = start.elapsed().as_secs_f64() * 1e3;

    let mut by_class: BTreeMap<String, ClassStats> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut instances = Vec::with_capacity(results.len());
    let mut times = Vec::with_capacity(results.len());
    for (res, report, ms) in results {
        times.push(ms);
        if let Some(class) = res.class {
            let key = serde_json::to_value(class).expect("class serializes").as_str().unwrap_or("?").to_string();
            let stats = by_class.entry(key).or_default();
            stats.count += 1;
            stats.certified += (res.verdict == Some(Verdict::Certified)) as usize;
            if let Some(d) = res.dim {
                *stats.dims.entry(d).or_default() += 1;
            }
        }
        if res.is_failure() {
            failures.push(Failure { instance: res.clone(), report });
        }
        instances.push(res);
    }
    let summary = BatchSummary {
        config: *config,
        count: instances.len(),
        certified_count: instances.iter().filter(|r| r.verdict == Some(Verdict::Certified)).count(),
        fallback_count: instances.iter().filter(|r| r.fallback_from.is_some()).count(),
        oracle_checks: instances.iter().filter(|r| r.oracle.is_some()).count(),
        oracle_failures: instances.iter().filter(|r| r.oracle.as_ref().is_some_and(|o| !o.passed())).count(),
        by_class,
        failures,
        instances,
        version: crate::cert::report::VERSION.to_string(),
    };
    Ok((summary, Timing::from_samples(times, total_ms)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_reproducible_and_span_classes() {
        let cfg = BatchConfig { count: 9, min_n: 6, max_n: 12, ..Default::default() };
        let (a, _) = batch_instance(&cfg, 4).unwrap();
        let (b, _) = batch_instance(&cfg, 4).unwrap();
        assert_eq!(a, b);
        let (summary, _) = run_batch(&cfg).unwrap();
        assert_eq!(summary.by_class.len(), 3);
        assert_eq!(summary.certified_count, 9);
        assert!(summary.failures.is_empty());
    }

    #[test]
    fn summary_is_deterministic() {
        let cfg = BatchConfig { count: 12, min_n: 4, max_n: 10, seed: 5, oracle: true, ..Default::default() };
        let (a, _) = run_batch(&cfg).unwrap();
        let (b, _) = run_batch(&cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.oracle_checks, 12);
        assert_eq!(a.oracle_failures, 0);
    }

    #[test]
    fn empty_range_is_infeasible() {
        let cfg = BatchConfig { min_n: 9, max_n: 3, ..Default::default() };
        assert!(matches!(run_batch(&cfg), Err(Error::Infeasible(_))));
    }

    #[test]
    fn timing_percentiles() {
        let t = Timing::from_samples(vec![3.0, 1.0, 2.0], 6.0);
        assert_eq!((t.p50_ms, t.max_ms), (2.0, 3.0));
    }
}
