//! Persistence diagrams: finite multisets of `(birth, death)` points above the
//! diagonal, tagged with the homology dimension they were computed in.
//!
//! Diagrams are always kept in canonical order (lexicographic by birth, then
//! death), so two diagrams are equal exactly when their point sequences are.
//! Essential classes (death at infinity) cannot be represented.
//!
//! The text format is one point per line, `<birth> <death>`, with `#`
//! starting a comment. A header comment `# dim: <k>` sets the dimension tag.

use std::cmp::Ordering;
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagramError {
    #[error("line {line}: expected two numeric tokens `<birth> <death>`, got `{content}`")]
    MalformedLine { line: usize, content: String },
    #[error("line {line}: death {death} is smaller than birth {birth}")]
    DeathBeforeBirth { line: usize, birth: f64, death: f64 },
    #[error("line {line}: non-finite coordinate")]
    NonFinite { line: usize },
    #[error("cannot combine diagrams of dimension {left} and {right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// A point of a persistence diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagramPoint {
    pub birth: f64,
    pub death: f64,
}

/// An arbitrary point of the plane, used where a value may leave the region
/// above the diagonal (mirror images, feature-map evaluation sites).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePoint {
    pub x1: f64,
    pub x2: f64,
}

impl PlanePoint {
    pub const fn new(x1: f64, x2: f64) -> Self {
        Self { x1, x2 }
    }

    /// Reflection across the diagonal `x1 = x2`.
    pub const fn mirror(self) -> Self {
        Self { x1: self.x2, x2: self.x1 }
    }

    pub fn dist_sq(self, other: PlanePoint) -> f64 {
        let a = self.x1 - other.x1;
        let b = self.x2 - other.x2;
        a * a + b * b
    }
}

impl From<DiagramPoint> for PlanePoint {
    fn from(p: DiagramPoint) -> Self {
        PlanePoint::new(p.birth, p.death)
    }
}

impl DiagramPoint {
    /// Builds a point, rejecting non-finite coordinates and `death < birth`.
    pub fn new(birth: f64, death: f64) -> Result<Self, DiagramError> {
        Self::checked(birth, death, 0)
    }

    fn checked(birth: f64, death: f64, line: usize) -> Result<Self, DiagramError> {
        if !birth.is_finite() || !death.is_finite() {
            return Err(DiagramError::NonFinite { line });
        }
        if death < birth {
            return Err(DiagramError::DeathBeforeBirth { line, birth, death });
        }
        Ok(Self { birth, death })
    }

    /// `death - birth`; zero for points on the diagonal.
    pub fn persistence(self) -> f64 {
        self.death - self.birth
    }

    /// The point reflected across the diagonal, `(b, d) -> (d, b)`.
    pub fn mirror(self) -> PlanePoint {
        PlanePoint::from(self).mirror()
    }

    pub fn is_diagonal(self) -> bool {
        self.death == self.birth
    }

    /// The closest diagonal point in the sup-norm, `((b+d)/2, (b+d)/2)`.
    pub fn diagonal_projection(self) -> DiagramPoint {
        let mid = 0.5 * (self.birth + self.death);
        DiagramPoint { birth: mid, death: mid }
    }

    /// Sup-norm distance to the diagonal, `(d - b) / 2`.
    pub fn diagonal_distance(self) -> f64 {
        0.5 * self.persistence()
    }

    pub fn linf(self, other: DiagramPoint) -> f64 {
        (self.birth - other.birth).abs().max((self.death - other.death).abs())
    }

    pub(crate) fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.birth.total_cmp(&other.birth).then(self.death.total_cmp(&other.death))
    }
}

/// Free-function form of [`DiagramPoint::persistence`].
pub fn persistence(p: DiagramPoint) -> f64 {
    p.persistence()
}

/// Free-function form of [`DiagramPoint::mirror`].
pub fn mirror(p: DiagramPoint) -> PlanePoint {
    p.mirror()
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PersistenceDiagram {
    points: Vec<DiagramPoint>,
    dimension: usize,
}

impl PersistenceDiagram {
    pub fn empty(dimension: usize) -> Self {
        Self { points: Vec::new(), dimension }
    }

    /// Canonicalizes the given points. Points are already validated by
    /// [`DiagramPoint::new`].
    pub fn new(dimension: usize, points: Vec<DiagramPoint>) -> Self {
        let mut d = Self { points, dimension };
        d.canonicalize();
        d
    }

    /// Convenience constructor from raw pairs; validates every pair.
    pub fn from_pairs(dimension: usize, pairs: &[(f64, f64)]) -> Result<Self, DiagramError> {
        let points = pairs
            .iter()
            .enumerate()
            .map(|(i, &(b, d))| DiagramPoint::checked(b, d, i + 1))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(dimension, points))
    }

    pub fn points(&self) -> &[DiagramPoint] {
        &self.points
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points with strictly positive persistence.
    pub fn off_diagonal(&self) -> impl Iterator<Item = DiagramPoint> + '_ {
        self.points.iter().copied().filter(|p| !p.is_diagonal())
    }

    pub fn canonicalize(&mut self) {
        self.points.sort_by(DiagramPoint::canonical_cmp);
    }

    /// Multiset union. Both diagrams must carry the same dimension tag.
    pub fn union(&self, other: &PersistenceDiagram) -> Result<PersistenceDiagram, DiagramError> {
        if self.dimension != other.dimension {
            return Err(DiagramError::DimensionMismatch { left: self.dimension, right: other.dimension });
        }
        let mut points = Vec::with_capacity(self.len() + other.len());
        points.extend_from_slice(&self.points);
        points.extend_from_slice(&other.points);
        Ok(PersistenceDiagram::new(self.dimension, points))
    }

    /// The `n`-fold union of the diagram with itself.
    pub fn repeated(&self, n: usize) -> PersistenceDiagram {
        let mut points = Vec::with_capacity(self.len() * n);
        for _ in 0..n {
            points.extend_from_slice(&self.points);
        }
        PersistenceDiagram::new(self.dimension, points)
    }
}

/// Total order on diagrams by their stored point sequences; symmetric
/// functions evaluate in this order so that swapping arguments is exact.
pub(crate) fn canonical_order(f: &PersistenceDiagram, g: &PersistenceDiagram) -> Ordering {
    f.points()
        .iter()
        .zip(g.points())
        .map(|(a, b)| a.canonical_cmp(b))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| f.len().cmp(&g.len()))
}

pub fn multiset_union(f: &PersistenceDiagram, g: &PersistenceDiagram) -> Result<PersistenceDiagram, DiagramError> {
    f.union(g)
}

fn parse_dim_header(comment: &str) -> Option<&str> {
    let rest = comment.trim().strip_prefix("dim")?;
    Some(rest.trim_start().strip_prefix(':')?.trim())
}

/// Parses the diagram text format.
pub fn parse_diagram(text: &str) -> Result<PersistenceDiagram, DiagramError> {
    let mut dimension = 0usize;
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let (content, comment) = match raw.find('#') {
            Some(pos) => (&raw[..pos], Some(&raw[pos + 1..])),
            None => (raw, None),
        };
        if let Some(value) = comment.and_then(parse_dim_header) {
            dimension = value.parse().map_err(|_| DiagramError::MalformedLine { line, content: raw.to_string() })?;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let malformed = || DiagramError::MalformedLine { line, content: raw.to_string() };
        if tokens.len() != 2 {
            return Err(malformed());
        }
        let birth: f64 = tokens[0].parse().map_err(|_| malformed())?;
        let death: f64 = tokens[1].parse().map_err(|_| malformed())?;
        points.push(DiagramPoint::checked(birth, death, line)?);
    }
    Ok(PersistenceDiagram::new(dimension, points))
}

/// Writes the diagram text format. Coordinates use the shortest decimal
/// representation that parses back to the same `f64`.
pub fn write_diagram(d: &PersistenceDiagram) -> String {
    let mut out = String::new();
    if d.dimension != 0 {
        let _ = writeln!(out, "# dim: {}", d.dimension);
    }
    for p in &d.points {
        let _ = writeln!(out, "{} {}", p.birth, p.death);
    }
    out
}
