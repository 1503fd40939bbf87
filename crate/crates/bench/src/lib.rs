//! Shared workloads for the benchmarks under `benches/`.

#![forbid(unsafe_code)]

use nonloc_core::certifier::StateSet;
use nonloc_core::fixtures;

/// Named state sets, smallest first.
pub fn workloads() -> Vec<(&'static str, StateSet)> {
    vec![("s5", fixtures::s5()), ("s8", fixtures::s8()), ("s10", fixtures::s10())]
}
