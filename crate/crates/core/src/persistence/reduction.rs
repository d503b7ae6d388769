use crate::diagram::{DiagramPoint, PersistenceDiagram};

use super::filtration::FilteredComplex;

/// Z/2 sum of two sorted index columns.
fn add_columns(target: &mut Vec<usize>, source: &[usize]) {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() && j < source.len() {
        match target[i].cmp(&source[j]) {
            std::cmp::Ordering::Less => {
                out.push(target[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(source[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&target[i..]);
    out.extend_from_slice(&source[j..]);
    *target = out;
}

/// Persistence pairs `(birth cell, death cell)` from left-to-right column
/// reduction with clearing. Columns are processed from the top dimension down
/// so that every column known to be a pivot row can be skipped.
pub fn persistence_pairs(complex: &FilteredComplex) -> Vec<(usize, usize)> {
    let cells = complex.cells();
    let n = cells.len();
    let top = cells.iter().map(|c| c.dimension).max().unwrap_or(0);

    let mut pivot_col: Vec<Option<usize>> = vec![None; n];
    let mut reduced: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut cleared = vec![false; n];
    let mut pairs = Vec::new();

    for dim in (1..=top).rev() {
        for j in 0..n {
            if cells[j].dimension != dim || cleared[j] {
                continue;
            }
            let mut col = cells[j].boundary.clone();
            while let Some(&low) = col.last() {
                match pivot_col[low] {
                    Some(k) => add_columns(&mut col, &reduced[k]),
                    None => break,
                }
            }
            if let Some(&low) = col.last() {
                pivot_col[low] = Some(j);
                cleared[low] = true;
                pairs.push((low, j));
                reduced[j] = col;
            }
        }
    }
    pairs.sort_unstable();
    pairs
}

/// One diagram per dimension `0..=max_homology_dim`. Pairs of zero
/// persistence and unpaired (essential) cells are dropped.
pub fn compute_persistence(complex: &FilteredComplex) -> Vec<PersistenceDiagram> {
    let max_dim = complex.max_homology_dim();
    let cells = complex.cells();
    let mut points: Vec<Vec<DiagramPoint>> = vec![Vec::new(); max_dim + 1];
    for (birth, death) in persistence_pairs(complex) {
        let dim = cells[birth].dimension;
        if dim > max_dim {
            continue;
        }
        let (b, d) = (cells[birth].value, cells[death].value);
        if b < d {
            points[dim].push(DiagramPoint { birth: b, death: d });
        }
    }
    points.into_iter().enumerate().map(|(dim, pts)| PersistenceDiagram::new(dim, pts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_addition_is_symmetric_difference() {
        let mut a = vec![1, 3, 5, 7];
        add_columns(&mut a, &[3, 4, 7, 9]);
        assert_eq!(a, vec![1, 4, 5, 9]);
        let mut b = vec![2];
        add_columns(&mut b, &[2]);
        assert!(b.is_empty());
    }
}
