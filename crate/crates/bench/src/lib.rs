//! Shared workloads for the criterion benchmarks.

use fixtrace_core::synth::{gen_comb, gen_eshape, gen_star, SyntheticInstance};
use fixtrace_core::{build_graph, AngularGraph, Result};

/// A named instance with its angular graph already built.
pub struct Workload {
    pub name: String,
    pub instance: SyntheticInstance,
    pub graph: AngularGraph,
}

impl Workload {
    pub fn new(name: impl Into<String>, instance: SyntheticInstance) -> Result<Self> {
        let graph = build_graph(&instance.fragments, instance.query)?;
        Ok(Self { name: name.into(), instance, graph })
    }
}

/// Stars, E shapes and combs, each plain and with clutter.
pub fn standard_workloads() -> Result<Vec<Workload>> {
    Ok(vec![
        Workload::new("star", gen_star(8, 40.0, 60.0, 2, 1)?)?,
        Workload::new("star+clutter", gen_star(8, 40.0, 60.0, 2, 1)?.with_clutter(300, 1))?,
        Workload::new("eshape", gen_eshape(1)?)?,
        Workload::new("comb", gen_comb(4, 1)?)?,
        Workload::new("comb+clutter", gen_comb(4, 1)?.with_clutter(300, 1))?,
    ])
}

/// Star workloads with growing clutter, for scaling curves.
pub fn clutter_ladder(steps: &[usize]) -> Result<Vec<Workload>> {
    steps
        .iter()
        .map(|&n| Workload::new(format!("clutter-{n}"), gen_star(8, 40.0, 60.0, 2, 3)?.with_clutter(n, 3)))
        .collect()
}
