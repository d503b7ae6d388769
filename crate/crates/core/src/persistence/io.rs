//! Readers for scalar-field inputs: 1D signals, ASCII PGM / CSV images, and
//! OFF meshes with a separate per-vertex values file.

use super::filtration::{GrayscaleImage, MeshWithFunction, ScalarField1D};
use super::PersistenceError;

fn parse_real(token: &str, line: usize) -> Result<f64, PersistenceError> {
    let v: f64 =
        token.parse().map_err(|_| PersistenceError::Parse { line, message: format!("`{token}` is not a number") })?;
    if !v.is_finite() {
        return Err(PersistenceError::Parse { line, message: "non-finite value".into() });
    }
    Ok(v)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

/// Reals separated by whitespace, commas or newlines (one per line is typical).
fn read_reals(text: &str) -> Result<Vec<f64>, PersistenceError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        for tok in strip_comment(raw).split(|c: char| c == ',' || c.is_whitespace()) {
            if !tok.is_empty() {
                out.push(parse_real(tok, idx + 1)?);
            }
        }
    }
    Ok(out)
}

pub fn read_signal(text: &str) -> Result<ScalarField1D, PersistenceError> {
    ScalarField1D::new(read_reals(text)?)
}

/// Per-vertex values for a mesh, one real per line.
pub fn read_values(text: &str) -> Result<Vec<f64>, PersistenceError> {
    read_reals(text)
}

/// ASCII PGM (`P2`) when the text starts with the magic, CSV rows otherwise.
pub fn read_image(text: &str) -> Result<GrayscaleImage, PersistenceError> {
    if text.trim_start().starts_with("P2") {
        read_pgm(text)
    } else {
        read_csv_image(text)
    }
}

fn read_csv_image(text: &str) -> Result<GrayscaleImage, PersistenceError> {
    let mut rows = 0;
    let mut cols = None;
    let mut pixels = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let row = line.split(',').map(|t| parse_real(t.trim(), idx + 1)).collect::<Result<Vec<_>, _>>()?;
        match cols {
            None => cols = Some(row.len()),
            Some(c) if c != row.len() => {
                return Err(PersistenceError::Parse {
                    line: idx + 1,
                    message: format!("expected {c} columns, found {}", row.len()),
                })
            }
            _ => {}
        }
        pixels.extend(row);
        rows += 1;
    }
    GrayscaleImage::new(rows, cols.unwrap_or(0), pixels)
}

fn read_pgm(text: &str) -> Result<GrayscaleImage, PersistenceError> {
    let mut tokens = text
        .lines()
        .enumerate()
        .flat_map(|(idx, raw)| strip_comment(raw).split_whitespace().map(move |t| (idx + 1, t)));
    let mut next = |what: &str| {
        tokens.next().ok_or_else(|| PersistenceError::Parse { line: 0, message: format!("PGM ended before {what}") })
    };
    let (line, magic) = next("magic")?;
    if magic != "P2" {
        return Err(PersistenceError::Parse { line, message: "expected P2 magic".into() });
    }
    let mut header = [0usize; 3];
    for (slot, name) in header.iter_mut().zip(["width", "height", "maxval"]) {
        let (line, tok) = next(name)?;
        *slot =
            tok.parse().map_err(|_| PersistenceError::Parse { line, message: format!("bad PGM {name} `{tok}`") })?;
    }
    let [width, height, _] = header;
    let mut pixels = Vec::with_capacity(width * height);
    for _ in 0..width * height {
        let (line, tok) = next("all pixels")?;
        pixels.push(parse_real(tok, line)?);
    }
    GrayscaleImage::new(height, width, pixels)
}

/// Object File Format mesh; only triangular faces are accepted.
pub fn read_off(text: &str, values: Vec<f64>) -> Result<MeshWithFunction, PersistenceError> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, strip_comment(l).trim())).filter(|(_, l)| !l.is_empty());
    let parse_err = |line: usize, message: String| PersistenceError::Parse { line, message };

    let (line, first) = lines.next().ok_or_else(|| parse_err(0, "empty OFF file".into()))?;
    let counts_line = if first == "OFF" {
        lines.next().ok_or_else(|| parse_err(line, "missing OFF counts".into()))?
    } else if let Some(rest) = first.strip_prefix("OFF") {
        (line, rest.trim())
    } else {
        return Err(parse_err(line, "missing OFF header".into()));
    };
    let counts: Vec<usize> = counts_line
        .1
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(counts_line.0, format!("bad count `{t}`"))))
        .collect::<Result<_, _>>()?;
    if counts.len() < 2 {
        return Err(parse_err(counts_line.0, "expected vertex and face counts".into()));
    }
    let (n_vertices, n_faces) = (counts[0], counts[1]);
    if values.len() != n_vertices {
        return Err(PersistenceError::ShapeMismatch { expected: n_vertices, found: values.len() });
    }
    for _ in 0..n_vertices {
        lines.next().ok_or_else(|| parse_err(0, "OFF ended inside vertex list".into()))?;
    }
    let mut triangles = Vec::with_capacity(n_faces);
    for _ in 0..n_faces {
        let (line, l) = lines.next().ok_or_else(|| parse_err(0, "OFF ended inside face list".into()))?;
        let idx: Vec<usize> = l
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse_err(line, format!("bad face index `{t}`"))))
            .collect::<Result<_, _>>()?;
        if idx.first() != Some(&3) || idx.len() < 4 {
            return Err(parse_err(line, "only triangular faces are supported".into()));
        }
        triangles.push([idx[1], idx[2], idx[3]]);
    }
    MeshWithFunction::new(values, triangles)
}
