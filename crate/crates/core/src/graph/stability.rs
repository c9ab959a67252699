use serde::{Deserialize, Serialize};

use super::HalfEdgeGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StabilityFlavor {
    MarkedStable,
    OrientedStable,
}

/// Per-vertex admissibility rules. Marking hairs count toward valence and
/// toward the out-degree of their vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StabilityProfile {
    pub flavor: StabilityFlavor,
    /// Minimum valence of a weight-zero vertex.
    pub min_weight_zero_valence: usize,
    /// Reject weight-zero vertices with exactly one incoming and one outgoing half-edge.
    pub forbid_passing: bool,
    /// Every vertex needs an outgoing half-edge or a marking.
    pub require_outgoing: bool,
    /// Literal reading of the oriented conditions: every vertex carries a marking.
    pub require_marking_everywhere: bool,
}

impl StabilityProfile {
    pub const fn marked() -> Self {
        StabilityProfile {
            flavor: StabilityFlavor::MarkedStable,
            min_weight_zero_valence: 3,
            forbid_passing: false,
            require_outgoing: false,
            require_marking_everywhere: false,
        }
    }

    pub const fn oriented() -> Self {
        StabilityProfile {
            flavor: StabilityFlavor::OrientedStable,
            min_weight_zero_valence: 2,
            forbid_passing: true,
            require_outgoing: true,
            require_marking_everywhere: false,
        }
    }

    pub const fn oriented_strict() -> Self {
        StabilityProfile {
            require_marking_everywhere: true,
            ..Self::oriented()
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "marked" => Some(Self::marked()),
            "oriented" => Some(Self::oriented()),
            "oriented-strict" => Some(Self::oriented_strict()),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match (self.flavor, self.require_marking_everywhere) {
            (StabilityFlavor::MarkedStable, _) => "marked",
            (StabilityFlavor::OrientedStable, false) => "oriented",
            (StabilityFlavor::OrientedStable, true) => "oriented-strict",
        }
    }

    pub(crate) fn accepts(&self, g: &HalfEdgeGraph) -> bool {
        (0..g.num_vertices()).all(|v| self.vertex_ok(g, v))
    }

    fn vertex_ok(&self, g: &HalfEdgeGraph, v: usize) -> bool {
        let hairs = g.marking_count(v);
        if self.require_marking_everywhere && hairs == 0 {
            return false;
        }
        let weight_zero = g.weight(v) == 0;
        if weight_zero && g.valence(v) < self.min_weight_zero_valence {
            return false;
        }
        let (inc, out) = (g.in_degree(v), g.out_degree(v));
        if self.forbid_passing && weight_zero && inc == 1 && out == 1 {
            return false;
        }
        if self.require_outgoing && out == 0 {
            return false;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn marked_examples() {
        let p = StabilityProfile::marked();
        let g = HalfEdgeGraph::undirected(1, &[(0, 0)], &[(1, 0)]).unwrap();
        assert!(g.is_stable(&p));
        let g = HalfEdgeGraph::new(vec![1], &[], false, [(1, 0)].into()).unwrap();
        assert!(g.is_stable(&p));
        let g = HalfEdgeGraph::undirected(2, &[(0, 1)], &[(1, 0), (2, 1)]).unwrap();
        assert!(!g.is_stable(&p));
    }

    #[test]
    fn passing_vertex_is_unstable() {
        let p = StabilityProfile::oriented();
        let path =
            HalfEdgeGraph::directed(3, &[(0, 1), (1, 2)], &[(1, 0), (2, 2), (3, 2)]).unwrap();
        assert!(!path.is_stable(&p));
        let marked_middle =
            HalfEdgeGraph::directed(3, &[(0, 1), (1, 2)], &[(1, 0), (2, 2), (3, 2), (4, 1)])
                .unwrap();
        assert!(marked_middle.is_stable(&p));
    }

    #[test]
    fn oriented_loop_is_stable() {
        let g = HalfEdgeGraph::directed(2, &[(0, 1), (0, 1)], &[(1, 1)]).unwrap();
        assert!(g.is_stable(&StabilityProfile::oriented()));
        assert!(!g.is_stable(&StabilityProfile::oriented_strict()));
        // unmarked sink has no outgoing half-edge
        let g = HalfEdgeGraph::directed(2, &[(0, 1), (0, 1)], &[(1, 0)]).unwrap();
        assert!(!g.is_stable(&StabilityProfile::oriented()));
    }
}
