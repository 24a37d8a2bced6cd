//! Reachability between tainting producers and sensitive consumers.
//!
//! Taint moves along def-use links: a node that defines a variable taints
//! every node that reads that definition. A sanitizer node stops
//! propagation when it sits strictly between source and sink; source and
//! sink positions themselves are exempt, so a sanitizer can still *be*
//! either endpoint.

use std::collections::VecDeque;

use super::cfg::CfgFunction;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaintPath {
    pub source: usize,
    pub source_kind: String,
    pub sink: usize,
    pub sink_kind: String,
    /// Node-id chain from source to sink; consecutive entries are joined
    /// by def-use links. A self-pair has a single-element witness.
    pub witness: Vec<usize>,
}

/// Find every (source, sink) pair connected by def-use links without an
/// intervening sanitizer, one path per pair. A node that is both source and
/// sink pairs with itself.
pub fn taint_reach(
    cfg: &CfgFunction<'_>,
    sources: &dyn Fn(usize) -> Option<String>,
    sinks: &dyn Fn(usize) -> Option<String>,
    sanitizers: &dyn Fn(usize) -> bool,
) -> Vec<TaintPath> {
    let n = cfg.nodes.len();
    let adjacency = cfg.def_use_adjacency();
    let mut paths = Vec::new();

    for source in 0..n {
        let Some(source_kind) = sources(source) else {
            continue;
        };

        // BFS over def-use links. A node is expanded only when it may sit
        // in the interior of a path: the source always may; sanitizers
        // never may.
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            if u != source && sanitizers(u) {
                continue;
            }
            for &v in &adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }

        for (sink, _) in seen.iter().enumerate().filter(|(_, s)| **s) {
            let Some(sink_kind) = sinks(sink) else {
                continue;
            };
            let mut witness = vec![sink];
            let mut cur = sink;
            while let Some(p) = parent[cur] {
                witness.push(p);
                cur = p;
            }
            witness.reverse();
            debug_assert_eq!(witness.first(), Some(&source));
            paths.push(TaintPath {
                source,
                source_kind: source_kind.clone(),
                sink,
                sink_kind,
                witness,
            });
        }
    }

    paths
}
