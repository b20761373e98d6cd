//! Two-group synthetic instances.
//!
//! Vertices `0..n/2` form group 1 and `n/2..n` group 2. A group-1 vertex draws
//! each feature as 1 with probability `p_c`, a group-2 vertex with probability
//! `1 - p_c`. Same-group pairs are joined with probability `p_in`, cross-group
//! pairs with `p_out`. The stream is a `ChaCha8Rng` seeded from `seed`:
//! features row by row, then pairs `(i, j)`, `i < j`, in lexicographic order.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{AttributedGraph, GraphError};

/// Name of the generator recorded in instance files.
pub const RNG_NAME: &str = "chacha8";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub n: usize,
    pub m: usize,
    pub p_c: f64,
    pub p_in: f64,
    pub p_out: f64,
    pub seed: u64,
}

impl GeneratorConfig {
    /// Default layout: `m = 10`, `p_c = 0.9`, `p_in = 0.5`, `p_out = 0.1`.
    pub fn new(n: usize, seed: u64) -> Self {
        GeneratorConfig {
            n,
            m: 10,
            p_c: 0.9,
            p_in: 0.5,
            p_out: 0.1,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (name, p) in [("p_c", self.p_c), ("p_in", self.p_in), ("p_out", self.p_out)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(ConfigError::Probability { name, value: p });
            }
        }
        if self.p_c < 0.5 {
            return Err(ConfigError::Separation(self.p_c));
        }
        if self.p_in <= self.p_out {
            return Err(ConfigError::EdgeOrder {
                p_in: self.p_in,
                p_out: self.p_out,
            });
        }
        if self.n == 0 || self.n % 2 != 0 {
            return Err(ConfigError::OddSize(self.n));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("{name} = {value} is not a probability")]
    Probability { name: &'static str, value: f64 },
    #[error("p_c = {0} must lie in [0.5, 1]")]
    Separation(f64),
    #[error("p_in = {p_in} must exceed p_out = {p_out}")]
    EdgeOrder { p_in: f64, p_out: f64 },
    #[error("n = {0} must be positive and even")]
    OddSize(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A graph together with its planted group labels (1 or 2) and the
/// configuration that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledInstance {
    pub graph: AttributedGraph,
    pub truth: Vec<u8>,
    pub config: GeneratorConfig,
}

pub fn generate(config: &GeneratorConfig) -> Result<LabeledInstance, ConfigError> {
    config.validate()?;
    let n = config.n;
    let half = n / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let truth: Vec<u8> = (0..n).map(|v| if v < half { 1 } else { 2 }).collect();
    let features: Vec<Vec<u8>> = truth
        .iter()
        .map(|&g| {
            let p = if g == 1 { config.p_c } else { 1.0 - config.p_c };
            (0..config.m).map(|_| u8::from(rng.gen_bool(p))).collect()
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let p = if truth[i] == truth[j] {
                config.p_in
            } else {
                config.p_out
            };
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    let graph = AttributedGraph::from_features(features, &edges)?;
    Ok(LabeledInstance {
        graph,
        truth,
        config: *config,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separated_extreme() {
        let cfg = GeneratorConfig {
            n: 4,
            m: 2,
            p_c: 1.0,
            p_in: 1.0,
            p_out: 0.0,
            seed: 3,
        };
        let inst = generate(&cfg).unwrap();
        let g = &inst.graph;
        assert_eq!(g.features()[0], [1, 1]);
        assert_eq!(g.features()[3], [0, 0]);
        assert_eq!(g.cost(0, 1), -2);
        assert_eq!(g.cost(2, 3), -2);
        assert_eq!(g.cost(0, 2), 2);
        assert_eq!(g.edges(), &[(0, 1), (2, 3)]);
        assert_eq!(inst.truth, [1, 1, 2, 2]);
    }

    #[test]
    fn two_cliques_when_edges_are_certain() {
        let cfg = GeneratorConfig { p_in: 1.0, p_out: 0.0, ..GeneratorConfig::new(8, 11) };
        let g = generate(&cfg).unwrap().graph;
        assert_eq!(g.edges().len(), 2 * 6);
        for &(a, b) in g.edges() {
            assert_eq!(a < 4, b < 4);
        }
    }

    #[test]
    fn deterministic() {
        let cfg = GeneratorConfig::new(20, 42);
        assert_eq!(generate(&cfg).unwrap(), generate(&cfg).unwrap());
        let other = GeneratorConfig::new(20, 43);
        assert_ne!(generate(&cfg).unwrap().graph, generate(&other).unwrap().graph);
    }

    #[test]
    fn invalid_configs() {
        let base = GeneratorConfig::new(10, 0);
        assert!(matches!(
            generate(&GeneratorConfig { p_in: 1.5, ..base }),
            Err(ConfigError::Probability { name: "p_in", .. })
        ));
        assert!(matches!(
            generate(&GeneratorConfig { p_out: 0.6, ..base }),
            Err(ConfigError::EdgeOrder { .. })
        ));
        assert!(matches!(generate(&GeneratorConfig { n: 7, ..base }), Err(ConfigError::OddSize(7))));
        assert!(matches!(
            generate(&GeneratorConfig { p_c: 0.3, ..base }),
            Err(ConfigError::Separation(_))
        ));
    }
}
