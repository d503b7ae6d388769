//! Sublevel-set filtrations of 1D signals, grayscale images and triangle
//! meshes. Every cell enters at the maximum of its vertex values.

use std::collections::BTreeMap;

use super::PersistenceError;

/// Samples of a function on a path graph.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField1D {
    values: Vec<f64>,
}

impl ScalarField1D {
    pub fn new(values: Vec<f64>) -> Result<Self, PersistenceError> {
        if values.is_empty() {
            return Err(PersistenceError::EmptyInput);
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(PersistenceError::NonFinite { index: i });
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Row-major grayscale image.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayscaleImage {
    rows: usize,
    cols: usize,
    pixels: Vec<f64>,
}

impl GrayscaleImage {
    pub fn new(rows: usize, cols: usize, pixels: Vec<f64>) -> Result<Self, PersistenceError> {
        if rows == 0 || cols == 0 {
            return Err(PersistenceError::EmptyInput);
        }
        if pixels.len() != rows * cols {
            return Err(PersistenceError::ShapeMismatch { expected: rows * cols, found: pixels.len() });
        }
        if let Some(i) = pixels.iter().position(|v| !v.is_finite()) {
            return Err(PersistenceError::NonFinite { index: i });
        }
        Ok(Self { rows, cols, pixels })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.pixels[r * self.cols + c]
    }
}

/// Triangle mesh with one function value per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshWithFunction {
    triangles: Vec<[usize; 3]>,
    values: Vec<f64>,
}

impl MeshWithFunction {
    pub fn new(values: Vec<f64>, triangles: Vec<[usize; 3]>) -> Result<Self, PersistenceError> {
        let n = values.len();
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(PersistenceError::NonFinite { index: i });
        }
        for (t, tri) in triangles.iter().enumerate() {
            if let Some(&v) = tri.iter().find(|&&v| v >= n) {
                return Err(PersistenceError::BadIndex { triangle: t, vertex: v, n_vertices: n });
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(PersistenceError::DegenerateTriangle { triangle: t });
            }
        }
        Ok(Self { triangles, values })
    }

    pub fn n_vertices(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }
}

/// One cell of a filtered complex. `boundary` holds indices into the
/// complex's cell list.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub dimension: usize,
    pub value: f64,
    pub boundary: Vec<usize>,
}

/// Cells sorted by `(value, dimension, original index)` with boundaries
/// pointing to earlier cells.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredComplex {
    cells: Vec<Cell>,
    max_homology_dim: usize,
}

impl FilteredComplex {
    /// Validates an already ordered cell list. Homology is reported up to one
    /// below the top cell dimension.
    pub fn new(cells: Vec<Cell>) -> Result<Self, PersistenceError> {
        let top = cells.iter().map(|c| c.dimension).max().unwrap_or(0);
        let complex = Self { cells, max_homology_dim: top.saturating_sub(1) };
        complex.validate()?;
        Ok(complex)
    }

    /// Sorts cells given in an arbitrary order and remaps their boundaries.
    pub fn from_unordered(cells: Vec<Cell>, max_homology_dim: usize) -> Result<Self, PersistenceError> {
        let mut order: Vec<usize> = (0..cells.len()).collect();
        order.sort_by(|&a, &b| {
            cells[a].value.total_cmp(&cells[b].value).then(cells[a].dimension.cmp(&cells[b].dimension)).then(a.cmp(&b))
        });
        let mut rank = vec![0usize; cells.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new;
        }
        let mut sorted: Vec<Cell> = Vec::with_capacity(cells.len());
        for &old in &order {
            let c = &cells[old];
            let mut boundary = Vec::with_capacity(c.boundary.len());
            for &b in &c.boundary {
                if b >= cells.len() {
                    return Err(PersistenceError::InvalidComplex(format!(
                        "cell {old} references missing boundary cell {b}"
                    )));
                }
                boundary.push(rank[b]);
            }
            boundary.sort_unstable();
            sorted.push(Cell { dimension: c.dimension, value: c.value, boundary });
        }
        let complex = Self { cells: sorted, max_homology_dim };
        complex.validate()?;
        Ok(complex)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Highest homology dimension for which a diagram is reported.
    pub fn max_homology_dim(&self) -> usize {
        self.max_homology_dim
    }

    pub fn count_dim(&self, dim: usize) -> usize {
        self.cells.iter().filter(|c| c.dimension == dim).count()
    }

    /// Values of all cells of the given dimension, in filtration order.
    pub fn values_of_dim(&self, dim: usize) -> Vec<f64> {
        self.cells.iter().filter(|c| c.dimension == dim).map(|c| c.value).collect()
    }

    fn validate(&self) -> Result<(), PersistenceError> {
        let invalid = |msg: String| Err(PersistenceError::InvalidComplex(msg));
        for (i, c) in self.cells.iter().enumerate() {
            if !c.value.is_finite() {
                return invalid(format!("cell {i} has a non-finite value"));
            }
            if c.dimension == 0 && !c.boundary.is_empty() {
                return invalid(format!("vertex {i} has a nonempty boundary"));
            }
            if c.dimension > 0 && c.boundary.is_empty() {
                return invalid(format!("cell {i} of dimension {} has no boundary", c.dimension));
            }
            if c.boundary.windows(2).any(|w| w[0] >= w[1]) {
                return invalid(format!("boundary of cell {i} is not strictly sorted"));
            }
            for &b in &c.boundary {
                if b >= i {
                    return invalid(format!("cell {i} has boundary cell {b} that does not precede it"));
                }
                let face = &self.cells[b];
                if face.dimension + 1 != c.dimension {
                    return invalid(format!("cell {i} has boundary cell {b} of wrong dimension"));
                }
                if face.value > c.value {
                    return invalid(format!("boundary cell {b} enters after its coface {i}"));
                }
            }
            if i > 0 {
                let prev = &self.cells[i - 1];
                let ordered = prev.value.total_cmp(&c.value).then(prev.dimension.cmp(&c.dimension)).is_le();
                if !ordered {
                    return invalid(format!("cells {} and {i} are out of order", i - 1));
                }
            }
        }
        Ok(())
    }
}

fn vertex(value: f64) -> Cell {
    Cell { dimension: 0, value, boundary: Vec::new() }
}

/// Path graph: vertex `i` carries `f[i]`, edge `(i, i+1)` the larger of the two.
pub fn build_path_filtration(f: &ScalarField1D) -> FilteredComplex {
    let v = f.values();
    let mut cells: Vec<Cell> = v.iter().map(|&x| vertex(x)).collect();
    for i in 0..v.len().saturating_sub(1) {
        cells.push(Cell { dimension: 1, value: v[i].max(v[i + 1]), boundary: vec![i, i + 1] });
    }
    FilteredComplex::from_unordered(cells, 0).expect("path filtration is valid by construction")
}

/// V-construction cubical complex: pixels are vertices, edges join 4-neighbours,
/// and each 2x2 block of pixels spans a square.
pub fn build_cubical_filtration(img: &GrayscaleImage) -> FilteredComplex {
    let (rows, cols) = (img.rows(), img.cols());
    let mut cells: Vec<Cell> = img.pixels().iter().map(|&x| vertex(x)).collect();
    let px = |r: usize, c: usize| r * cols + c;

    let mut horizontal = vec![usize::MAX; rows * cols];
    for r in 0..rows {
        for c in 0..cols.saturating_sub(1) {
            horizontal[px(r, c)] = cells.len();
            let value = img.get(r, c).max(img.get(r, c + 1));
            cells.push(Cell { dimension: 1, value, boundary: vec![px(r, c), px(r, c + 1)] });
        }
    }
    let mut vertical = vec![usize::MAX; rows * cols];
    for r in 0..rows.saturating_sub(1) {
        for c in 0..cols {
            vertical[px(r, c)] = cells.len();
            let value = img.get(r, c).max(img.get(r + 1, c));
            cells.push(Cell { dimension: 1, value, boundary: vec![px(r, c), px(r + 1, c)] });
        }
    }
    for r in 0..rows.saturating_sub(1) {
        for c in 0..cols.saturating_sub(1) {
            let value = img.get(r, c).max(img.get(r, c + 1)).max(img.get(r + 1, c)).max(img.get(r + 1, c + 1));
            let boundary =
                vec![horizontal[px(r, c)], horizontal[px(r + 1, c)], vertical[px(r, c)], vertical[px(r, c + 1)]];
            cells.push(Cell { dimension: 2, value, boundary });
        }
    }
    FilteredComplex::from_unordered(cells, 1).expect("cubical filtration is valid by construction")
}

/// Lower-star filtration of a triangle mesh. Shared edges appear once, as do
/// repeated triangles.
pub fn build_lower_star_filtration(m: &MeshWithFunction) -> FilteredComplex {
    let values = m.values();
    let mut cells: Vec<Cell> = values.iter().map(|&x| vertex(x)).collect();
    let mut edges: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut seen_triangles = std::collections::BTreeSet::new();
    let mut triangles = Vec::new();
    for tri in m.triangles() {
        let mut t = *tri;
        t.sort_unstable();
        if seen_triangles.insert(t) {
            triangles.push(t);
        }
    }
    let mut edge_id = |a: usize, b: usize, cells: &mut Vec<Cell>| -> usize {
        *edges.entry((a, b)).or_insert_with(|| {
            cells.push(Cell { dimension: 1, value: values[a].max(values[b]), boundary: vec![a, b] });
            cells.len() - 1
        })
    };
    let mut tri_boundaries = Vec::with_capacity(triangles.len());
    for t in &triangles {
        let e01 = edge_id(t[0], t[1], &mut cells);
        let e02 = edge_id(t[0], t[2], &mut cells);
        let e12 = edge_id(t[1], t[2], &mut cells);
        tri_boundaries.push((t, vec![e01, e02, e12]));
    }
    for (t, boundary) in tri_boundaries {
        let value = values[t[0]].max(values[t[1]]).max(values[t[2]]);
        cells.push(Cell { dimension: 2, value, boundary });
    }
    FilteredComplex::from_unordered(cells, 1).expect("lower-star filtration is valid by construction")
}
