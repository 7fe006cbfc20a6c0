//! Experiment orchestration: graph sources, experiment configuration, the
//! statistical runners behind each CLI subcommand, and report emission.

pub mod report;
pub mod runs;
pub mod stats;

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::{gen, WeightedGraph};
use crate::rng::RngStream;
use crate::sparsifier::SparsifierConfig;
use crate::vimatch::VimatchParams;
use crate::Result;

pub use report::{
    emit_report, read_report, CriterionResult, IndependenceSummary, RatioPoint, Report,
    TrialRow, SCHEMA_VERSION,
};
pub use runs::{
    run_independence_test, run_ratio_sweep, run_sparsify, run_validity_audit, run_vimatch_demo,
    AuditOptions,
};

/// Random-graph generator shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GenKind {
    Er { n: usize, m: usize },
    Path { n: usize },
    Cycle { n: usize },
    Clique { n: usize },
    DisjointPaths { count: usize, len: usize },
}

/// Parsed generator spec, e.g. `er:n=16,m=32,wmin=1,wmax=10,decimals=2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub kind: GenKind,
    pub w_min: i64,
    pub w_max: i64,
    pub decimals: u32,
}

impl GenSpec {
    pub fn generate(&self, stream: &RngStream) -> Result<WeightedGraph> {
        match self.kind {
            GenKind::Er { n, m } => {
                gen::erdos_renyi(n, m, self.w_min, self.w_max, self.decimals, stream)
            }
            GenKind::Path { n } => gen::path(n, self.w_min, self.w_max, self.decimals, stream),
            GenKind::Cycle { n } => gen::cycle(n, self.w_min, self.w_max, self.decimals, stream),
            GenKind::Clique { n } => gen::clique(n, self.w_min, self.w_max, self.decimals, stream),
            GenKind::DisjointPaths { count, len } => {
                gen::disjoint_paths(count, len, self.w_min, self.w_max, self.decimals, stream)
            }
        }
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GenKind::Er { n, m } => write!(f, "er:n={n},m={m}")?,
            GenKind::Path { n } => write!(f, "path:n={n}")?,
            GenKind::Cycle { n } => write!(f, "cycle:n={n}")?,
            GenKind::Clique { n } => write!(f, "clique:n={n}")?,
            GenKind::DisjointPaths { count, len } => write!(f, "paths:count={count},len={len}")?,
        }
        write!(
            f,
            ",wmin={},wmax={},decimals={}",
            self.w_min, self.w_max, self.decimals
        )
    }
}

impl FromStr for GenSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind_str, rest) = s.split_once(':').unwrap_or((s, ""));
        let mut kv: HashMap<&str, &str> = HashMap::new();
        for part in rest.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("generator spec: expected k=v in {part:?}")))?;
            if kv.insert(k, v).is_some() {
                return Err(Error::invalid(format!("generator spec: duplicate key {k}")));
            }
        }
        fn take<T: FromStr>(kv: &mut HashMap<&str, &str>, key: &str) -> Result<Option<T>> {
            match kv.remove(key) {
                None => Ok(None),
                Some(v) => v
                    .parse::<T>()
                    .map(Some)
                    .map_err(|_| Error::invalid(format!("generator spec: bad value for {key}: {v}"))),
            }
        }
        fn require<T: FromStr>(kv: &mut HashMap<&str, &str>, key: &str, kind: &str) -> Result<T> {
            take(kv, key)?
                .ok_or_else(|| Error::invalid(format!("generator spec: {kind} needs {key}=")))
        }
        let mut kv = kv;
        let kind = match kind_str {
            "er" => GenKind::Er {
                n: require(&mut kv, "n", "er")?,
                m: require(&mut kv, "m", "er")?,
            },
            "path" => GenKind::Path {
                n: require(&mut kv, "n", "path")?,
            },
            "cycle" => GenKind::Cycle {
                n: require(&mut kv, "n", "cycle")?,
            },
            "clique" => GenKind::Clique {
                n: require(&mut kv, "n", "clique")?,
            },
            "paths" => GenKind::DisjointPaths {
                count: require(&mut kv, "count", "paths")?,
                len: require(&mut kv, "len", "paths")?,
            },
            other => {
                return Err(Error::invalid(format!(
                    "unknown generator kind {other:?} (expected er|path|cycle|clique|paths)"
                )))
            }
        };
        let spec = GenSpec {
            kind,
            w_min: take(&mut kv, "wmin")?.unwrap_or(1),
            w_max: take(&mut kv, "wmax")?.unwrap_or(10),
            decimals: take(&mut kv, "decimals")?.unwrap_or(2),
        };
        if let Some(stray) = kv.keys().next() {
            return Err(Error::invalid(format!("generator spec: unknown key {stray}")));
        }
        if spec.w_min > spec.w_max || spec.w_min < 0 {
            return Err(Error::invalid("generator spec: need 0 <= wmin <= wmax"));
        }
        Ok(spec)
    }
}

/// Where the experiment graph comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphSource {
    File(PathBuf),
    Generated(GenSpec),
}

impl GraphSource {
    /// Loads or generates the graph. Generated sources draw from `stream`,
    /// so per-trial streams give per-trial graphs while a file source is
    /// identical every time.
    pub fn load(&self, stream: &RngStream) -> Result<WeightedGraph> {
        match self {
            GraphSource::File(path) => WeightedGraph::from_file(path),
            GraphSource::Generated(spec) => spec.generate(stream),
        }
    }
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSource::File(p) => write!(f, "file:{}", p.display()),
            GraphSource::Generated(spec) => write!(f, "{spec}"),
        }
    }
}

/// Everything a runner needs: graph source, both parameter sets, trial
/// counts, and the root seed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub source: GraphSource,
    pub cfg: SparsifierConfig,
    pub vparams: VimatchParams,
    /// Full-pipeline trials for the audit.
    pub trials: usize,
    /// Paired evaluation realizations for ratio estimation.
    pub t_eval: usize,
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::invalid("trials must be at least 1"));
        }
        if self.t_eval == 0 {
            return Err(Error::invalid("t_eval must be at least 1"));
        }
        self.cfg.validate()?;
        self.vparams.validate()?;
        Ok(())
    }

    /// Configuration echo embedded in every report.
    pub fn config_echo(&self) -> serde_json::Value {
        serde_json::json!({
            "source": self.source.to_string(),
            "sparsifier": self.cfg,
            "vimatch": self.vparams,
            "trials": self.trials,
            "t_eval": self.t_eval,
            "seed": self.seed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::ratio;

    #[test]
    fn gen_spec_parses_and_round_trips() {
        let spec: GenSpec = "er:n=16,m=32,wmin=1,wmax=10,decimals=2".parse().unwrap();
        assert_eq!(
            spec.kind,
            GenKind::Er { n: 16, m: 32 },
        );
        assert_eq!(spec.to_string(), "er:n=16,m=32,wmin=1,wmax=10,decimals=2");
        let again: GenSpec = spec.to_string().parse().unwrap();
        assert_eq!(again, spec);

        let defaults: GenSpec = "path:n=5".parse().unwrap();
        assert_eq!(defaults.w_min, 1);
        assert_eq!(defaults.w_max, 10);
        assert_eq!(defaults.decimals, 2);

        let paths: GenSpec = "paths:count=2,len=5".parse().unwrap();
        assert_eq!(paths.kind, GenKind::DisjointPaths { count: 2, len: 5 });
    }

    #[test]
    fn gen_spec_rejects_garbage() {
        assert!("er:n=16".parse::<GenSpec>().is_err(), "missing m");
        assert!("er:n=16,m=4,bogus=1".parse::<GenSpec>().is_err());
        assert!("blob:n=4".parse::<GenSpec>().is_err());
        assert!("er:n=16,m=4,n=5".parse::<GenSpec>().is_err(), "duplicate");
        assert!("er:n=x,m=4".parse::<GenSpec>().is_err());
        assert!("path:n=5,wmin=9,wmax=2".parse::<GenSpec>().is_err());
    }

    #[test]
    fn generated_source_depends_on_stream_and_file_source_does_not() {
        let spec: GenSpec = "er:n=8,m=10".parse().unwrap();
        let s1 = GraphSource::Generated(spec.clone());
        let a = s1.load(&RngStream::from_root(1)).unwrap();
        let b = s1.load(&RngStream::from_root(2)).unwrap();
        assert_ne!(a.to_text(), b.to_text());

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        std::fs::write(&path, a.to_text()).unwrap();
        let s2 = GraphSource::File(path);
        let c = s2.load(&RngStream::from_root(1)).unwrap();
        let d = s2.load(&RngStream::from_root(2)).unwrap();
        assert_eq!(c.to_text(), d.to_text());
        assert_eq!(c.to_text(), a.to_text());
    }

    #[test]
    fn experiment_spec_validates_counts() {
        let spec = ExperimentSpec {
            source: GraphSource::Generated("path:n=4".parse().unwrap()),
            cfg: SparsifierConfig::new(ratio(3, 10), ratio(1, 2)).unwrap(),
            vparams: VimatchParams::desk(ratio(3, 10)),
            trials: 0,
            t_eval: 10,
            seed: 1,
        };
        assert!(spec.validate().is_err());
        let ok = ExperimentSpec { trials: 1, ..spec };
        assert!(ok.validate().is_ok());
        let echo = ok.config_echo();
        assert_eq!(echo["source"], "path:n=4,wmin=1,wmax=10,decimals=2");
        assert_eq!(echo["seed"], 1);
    }
}
