use crate::diagram::{DiagramPoint, PersistenceDiagram};

use super::filtration::FilteredComplex;

/// Disjoint sets whose representative is always the oldest member, i.e. the
/// element with the smallest filtration index.
struct ElderForest {
    parent: Vec<usize>,
}

impl ElderForest {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }
}

/// Zero-dimensional persistence by union-find over vertices and edges in
/// filtration order. When an edge merges two components, the one whose oldest
/// vertex entered later dies at the edge value (elder rule).
pub fn compute_persistence_dim0(complex: &FilteredComplex) -> PersistenceDiagram {
    let cells = complex.cells();
    let mut forest = ElderForest::new(cells.len());
    let mut points = Vec::new();
    for cell in cells.iter().filter(|c| c.dimension == 1) {
        let a = forest.find(cell.boundary[0]);
        let b = forest.find(cell.boundary[1]);
        if a == b {
            continue;
        }
        let (elder, younger) = if a < b { (a, b) } else { (b, a) };
        forest.parent[younger] = elder;
        let birth = cells[younger].value;
        if birth < cell.value {
            points.push(DiagramPoint { birth, death: cell.value });
        }
    }
    PersistenceDiagram::new(0, points)
}
