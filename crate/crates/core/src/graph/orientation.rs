use serde::{Deserialize, Serialize};

use super::{Automorphism, GraphError, HalfEdgeGraph};

/// Which finite set an orientation orders: edges for the marked complex,
/// vertices for the oriented complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrientationKind {
    EdgeOrder,
    VertexOrder,
}

/// An element of `det` of the edge or vertex set: an ordering of the set
/// together with a sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    pub kind: OrientationKind,
    pub reference: Vec<usize>,
    pub sign: i8,
}

impl Orientation {
    /// The identity ordering of the edges or vertices of `g`.
    pub fn standard(kind: OrientationKind, g: &HalfEdgeGraph) -> Self {
        let len = match kind {
            OrientationKind::EdgeOrder => g.num_edges(),
            OrientationKind::VertexOrder => g.num_vertices(),
        };
        Orientation {
            kind,
            reference: (0..len).collect(),
            sign: 1,
        }
    }

    /// Sign relative to the identity ordering.
    pub fn relative_sign(&self) -> i8 {
        self.sign * permutation_sign(&self.reference)
    }

    /// Pushes the orientation forward along a bijection of the ordered set.
    pub fn transport(&self, map: &[usize]) -> Orientation {
        Orientation {
            kind: self.kind,
            reference: self.reference.iter().map(|&x| map[x]).collect(),
            sign: self.sign,
        }
    }
}

/// Sign of the permutation induced by `aut` on the set ordered by `or`.
pub fn orientation_sign(
    g: &HalfEdgeGraph,
    or: &Orientation,
    aut: &Automorphism,
) -> Result<i8, GraphError> {
    let expected = match or.kind {
        OrientationKind::EdgeOrder => g.num_edges(),
        OrientationKind::VertexOrder => g.num_vertices(),
    };
    if or.reference.len() != expected || aut.vertex_perm.len() != g.num_vertices() {
        return Err(GraphError::Invalid(
            "orientation or automorphism does not match the graph".into(),
        ));
    }
    Ok(aut.sign(or.kind))
}

/// Sign of a permutation given in one-line notation.
pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i8;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}
