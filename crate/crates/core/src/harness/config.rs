//! Experiment configuration, parsed from flat `key=value` text or from a
//! JSON object with the same keys.
//!
//! ```text
//! graph = kregular        # tree | kregular | circulant | file
//! n = 100
//! k = 4
//! # diameter = 12         # optional, tree only
//! # path = graph.txt      # graph = file
//! algorithms = urwbpc:opt, metropolis
//! trials = 100
//! iterations = 100
//! seed = 42
//! init = normal           # normal | file:PATH
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Where the experiment graph comes from. `Fixed` carries a prebuilt graph
/// for programmatic callers; the parsers never produce it.
#[derive(Debug, Clone)]
pub enum GraphSource {
    Tree { n: usize, diameter: Option<usize> },
    KRegular { n: usize, k: usize },
    Circulant { n: usize, k: usize },
    File(PathBuf),
    Fixed(Graph),
}

impl GraphSource {
    /// True when a fresh graph is drawn for every trial rather than once.
    pub fn redraws_per_trial(&self) -> bool {
        matches!(self, GraphSource::KRegular { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhoChoice {
    Fixed(f64),
    /// rho = 1 on trees, the closed-form optimum on regular graphs.
    Optimal,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AlgoSpec {
    Metropolis,
    Uniform { xi: f64 },
    Laplacian { eps: f64 },
    UrwBpc { rho: RhoChoice },
}

impl AlgoSpec {
    /// Canonical token, also used as the CSV column name.
    pub fn name(&self) -> String {
        match self {
            AlgoSpec::Metropolis => "metropolis".into(),
            AlgoSpec::Uniform { xi } => format!("uniform:{xi}"),
            AlgoSpec::Laplacian { eps } => format!("laplacian:{eps}"),
            AlgoSpec::UrwBpc { rho: RhoChoice::Optimal } => "urwbpc:opt".into(),
            AlgoSpec::UrwBpc { rho: RhoChoice::Fixed(r) } => format!("urwbpc:{r}"),
        }
    }

    pub fn parse(token: &str) -> Result<Self> {
        let token = token.trim();
        let (kind, arg) = match token.split_once(':') {
            Some((k, a)) => (k.trim(), Some(a.trim())),
            None => (token, None),
        };
        let num = |what: &str, a: Option<&str>| -> Result<f64> {
            a.ok_or_else(|| Error::Parse(format!("{kind} needs a parameter, e.g. {kind}:{what}")))?
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad {kind} parameter in {token:?}")))
        };
        match kind {
            "metropolis" => Ok(AlgoSpec::Metropolis),
            "uniform" => Ok(AlgoSpec::Uniform { xi: num("0.1", arg)? }),
            "laplacian" => Ok(AlgoSpec::Laplacian { eps: num("0.25", arg)? }),
            "urwbpc" => match arg {
                None | Some("opt") => Ok(AlgoSpec::UrwBpc { rho: RhoChoice::Optimal }),
                Some(v) => {
                    let rho = v
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad rho in {token:?}")))?;
                    Ok(AlgoSpec::UrwBpc { rho: RhoChoice::Fixed(rho) })
                }
            },
            _ => Err(Error::Parse(format!("unknown algorithm {token:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitSpec {
    StandardNormal,
    FromFile(PathBuf),
}

impl InitSpec {
    fn parse(token: &str) -> Result<Self> {
        let token = token.trim();
        if token == "normal" {
            return Ok(InitSpec::StandardNormal);
        }
        if let Some(path) = token.strip_prefix("file:") {
            return Ok(InitSpec::FromFile(PathBuf::from(path.trim())));
        }
        Err(Error::Parse(format!("unknown init {token:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub graph: GraphSource,
    pub algorithms: Vec<AlgoSpec>,
    pub trials: usize,
    pub iterations: usize,
    pub master_seed: u64,
    pub init: InitSpec,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_kv(text)
        }
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    fn from_kv(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!("line {}: expected key=value, got {raw:?}", idx + 1))
            })?;
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        Self::from_map(map)
    }

    fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad JSON config: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("JSON config must be an object".into()))?;
        let mut map = BTreeMap::new();
        for (key, v) in obj {
            let s = match v {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Number(n) => n.to_string(),
                serde_json::Value::Array(items) => items
                    .iter()
                    .map(|i| match i {
                        serde_json::Value::String(s) => Ok(s.clone()),
                        other => Err(Error::Parse(format!("bad algorithms entry {other}"))),
                    })
                    .collect::<Result<Vec<_>>>()?
                    .join(","),
                other => return Err(Error::Parse(format!("bad value for {key}: {other}"))),
            };
            map.insert(key.clone(), s);
        }
        Self::from_map(map)
    }

    fn from_map(mut map: BTreeMap<String, String>) -> Result<Self> {
        let mut take = |k: &str| map.remove(k);
        let graph_kind = take("graph")
            .ok_or_else(|| Error::Parse("config is missing `graph`".into()))?;
        let parse_usize = |k: &str, v: Option<String>| -> Result<Option<usize>> {
            v.map(|s| {
                s.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad integer for {k}: {s:?}")))
            })
            .transpose()
        };
        let n = parse_usize("n", take("n"))?;
        let k = parse_usize("k", take("k"))?;
        let diameter = parse_usize("diameter", take("diameter"))?;
        let need_n = || n.ok_or_else(|| Error::Parse("config is missing `n`".into()));
        let need_k = || k.ok_or_else(|| Error::Parse("config is missing `k`".into()));
        let graph = match graph_kind.as_str() {
            "tree" => GraphSource::Tree { n: need_n()?, diameter },
            "kregular" => GraphSource::KRegular { n: need_n()?, k: need_k()? },
            "circulant" => GraphSource::Circulant { n: need_n()?, k: need_k()? },
            "file" => GraphSource::File(PathBuf::from(take("path").ok_or_else(|| {
                Error::Parse("graph = file needs `path`".into())
            })?)),
            other => return Err(Error::Parse(format!("unknown graph kind {other:?}"))),
        };
        let algorithms = take("algorithms")
            .ok_or_else(|| Error::Parse("config is missing `algorithms`".into()))?
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(AlgoSpec::parse)
            .collect::<Result<Vec<_>>>()?;
        if algorithms.is_empty() {
            return Err(Error::Parse("config lists no algorithms".into()));
        }
        let trials = parse_usize("trials", take("trials"))?.unwrap_or(1);
        let iterations = parse_usize("iterations", take("iterations").or_else(|| take("iters")))?
            .unwrap_or(100);
        if trials < 1 || iterations < 1 {
            return Err(Error::Parse("trials and iterations must be >= 1".into()));
        }
        let master_seed = match take("seed") {
            None => 0,
            Some(s) => s
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad seed {s:?}")))?,
        };
        let init = match take("init") {
            None => InitSpec::StandardNormal,
            Some(s) => InitSpec::parse(&s)?,
        };
        if let Some(stray) = map.keys().next() {
            return Err(Error::Parse(format!("unknown config key {stray:?}")));
        }
        Ok(ExperimentConfig {
            graph,
            algorithms,
            trials,
            iterations,
            master_seed,
            init,
        })
    }
}

/// Parses generator specs of the form `circulant:n=10,k=4`,
/// `tree:n=100,diameter=12`, `kregular:n=100,k=4`.
pub fn parse_gen_spec(spec: &str) -> Result<GraphSource> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("generator spec {spec:?} needs parameters")))?;
    let mut n = None;
    let mut k = None;
    let mut diameter = None;
    for part in rest.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad generator parameter {part:?}")))?;
        let v: usize = value
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer in {part:?}")))?;
        match key.trim() {
            "n" => n = Some(v),
            "k" => k = Some(v),
            "diameter" => diameter = Some(v),
            other => return Err(Error::Parse(format!("unknown generator key {other:?}"))),
        }
    }
    let need_n = n.ok_or_else(|| Error::Parse(format!("{kind} spec needs n")));
    let need_k = k.ok_or_else(|| Error::Parse(format!("{kind} spec needs k")));
    match kind.trim() {
        "tree" => Ok(GraphSource::Tree { n: need_n?, diameter }),
        "kregular" => Ok(GraphSource::KRegular { n: need_n?, k: need_k? }),
        "circulant" => Ok(GraphSource::Circulant { n: need_n?, k: need_k? }),
        other => Err(Error::Parse(format!("unknown generator {other:?}"))),
    }
}
