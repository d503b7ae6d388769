//! Independent reference computations shared by the integration tests and
//! the acceptance runner. Nothing here calls into the library's numerics.

#![allow(dead_code)]

use std::f64::consts::PI;

use pssk::diagram::PersistenceDiagram;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to `max_points` points with `lo <= birth < death <= hi`.
pub fn random_pairs(rng: &mut impl Rng, min_points: usize, max_points: usize, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let n = rng.gen_range(min_points..=max_points);
    (0..n)
        .map(|_| loop {
            let a = rng.gen_range(lo..hi);
            let b = rng.gen_range(lo..hi);
            if a != b {
                break (a.min(b), a.max(b));
            }
        })
        .collect()
}

pub fn diagram(pairs: &[(f64, f64)]) -> PersistenceDiagram {
    PersistenceDiagram::from_pairs(0, pairs).unwrap()
}

pub fn random_diagram(rng: &mut impl Rng, min_points: usize, max_points: usize) -> PersistenceDiagram {
    diagram(&random_pairs(rng, min_points, max_points, 0.0, 1.0))
}

pub fn pairs_of(d: &PersistenceDiagram) -> Vec<(f64, f64)> {
    d.points().iter().map(|p| (p.birth, p.death)).collect()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Feature map at `(x, y)`: heat diffusion of the diagram with a sign-flipped
/// mirror copy, evaluated directly from the Gaussian kernel.
pub fn feature_map(pairs: &[(f64, f64)], sigma: f64, x: f64, y: f64) -> f64 {
    let g = |dx: f64, dy: f64| (-(dx * dx + dy * dy) / (4.0 * sigma)).exp();
    pairs.iter().map(|&(b, d)| g(x - b, y - d) - g(x - d, y - b)).sum::<f64>() / (4.0 * PI * sigma)
}

fn simpson_weights(n: usize) -> Vec<f64> {
    (0..=n)
        .map(|i| {
            if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            }
        })
        .collect()
}

/// `integral over {y > x}` of the product of two feature maps, by composite
/// Simpson quadrature in rotated coordinates `u = (y - x)/sqrt 2` (distance
/// to the diagonal) and `v = (x + y)/sqrt 2`, on a box truncated where the
/// integrand is below `exp(-50)` of its peak.
pub fn pssk_quadrature(f: &[(f64, f64)], g: &[(f64, f64)], sigma: f64) -> f64 {
    let s2 = std::f64::consts::SQRT_2;
    let rot = |&(b, d): &(f64, f64)| ((d - b) / s2, (b + d) / s2);
    let (fr, gr): (Vec<_>, Vec<_>) = (f.iter().map(rot).collect(), g.iter().map(rot).collect());
    let all = fr.iter().chain(gr.iter());
    let margin = 10.0 * sigma.sqrt();
    let umax = all.clone().map(|p| p.0).fold(0.0, f64::max) + margin;
    let vmin = all.clone().map(|p| p.1).fold(f64::INFINITY, f64::min) - margin;
    let vmax = all.map(|p| p.1).fold(f64::NEG_INFINITY, f64::max) + margin;
    let target = sigma.sqrt() / 24.0;
    let even = |len: f64| (((len / target).ceil() as usize) + 1) & !1;
    let (nu, nv) = (even(umax), even(vmax - vmin));
    let (hu, hv) = (umax / nu as f64, (vmax - vmin) / nv as f64);
    let gauss = |r: f64| (-r * r / (4.0 * sigma)).exp();
    // per-point factors of the separable Gaussian pair
    let tables = |pts: &[(f64, f64)]| -> Vec<(Vec<f64>, Vec<f64>)> {
        pts.iter()
            .map(|&(pu, pv)| {
                let tu = (0..=nu).map(|i| {
                    let u = i as f64 * hu;
                    gauss(u - pu) - gauss(u + pu)
                });
                let tv = (0..=nv).map(|j| gauss(vmin + j as f64 * hv - pv));
                (tu.collect(), tv.collect())
            })
            .collect()
    };
    let (tf, tg) = (tables(&fr), tables(&gr));
    let (wu, wv) = (simpson_weights(nu), simpson_weights(nv));
    let mut total = 0.0;
    for i in 0..=nu {
        let mut row = 0.0;
        for j in 0..=nv {
            let a: f64 = tf.iter().map(|(tu, tv)| tu[i] * tv[j]).sum();
            let b: f64 = tg.iter().map(|(tu, tv)| tu[i] * tv[j]).sum();
            row += wv[j] * a * b;
        }
        total += wu[i] * row;
    }
    total * hu * hv / 9.0 / (4.0 * PI * sigma).powi(2)
}

/// Heat equation `u_t = u_xx + u_yy` on the half-plane above the diagonal
/// with zero boundary values, started from a unit point mass at each diagram
/// point, solved by explicit finite differences on a truncated square of
/// mesh `h`. Returns the solution at time `t` sampled at grid point `(x, y)`,
/// which must lie on the mesh.
pub fn heat_fd(pairs: &[(f64, f64)], t: f64, h: f64, lo: f64, hi: f64, x: f64, y: f64) -> f64 {
    let n = ((hi - lo) / h).round() as usize + 1;
    let idx = |v: f64| ((v - lo) / h).round() as usize;
    let mut u = vec![0.0; n * n];
    for &(b, d) in pairs {
        u[idx(b) * n + idx(d)] += 1.0 / (h * h);
    }
    let dt_max = 0.2 * h * h;
    let steps = (t / dt_max).ceil() as usize;
    let dt = t / steps as f64;
    let r = dt / (h * h);
    let mut next = u.clone();
    for _ in 0..steps {
        for i in 1..n - 1 {
            for j in 1..n - 1 {
                // interior of the truncated domain lies strictly above the diagonal
                if j <= i {
                    continue;
                }
                let k = i * n + j;
                next[k] = u[k] + r * (u[k - n] + u[k + n] + u[k - 1] + u[k + 1] - 4.0 * u[k]);
            }
        }
        std::mem::swap(&mut u, &mut next);
    }
    u[idx(x) * n + idx(y)]
}

/// p-Wasserstein distance (`p = None` for the bottleneck) by enumerating
/// every partial injection from `f` into `g`; unmatched points go to the
/// diagonal at sup-norm cost `persistence / 2`.
pub fn wasserstein_oracle(f: &[(f64, f64)], g: &[(f64, f64)], p: Option<f64>) -> f64 {
    fn rec(
        i: usize,
        f: &[(f64, f64)],
        g: &[(f64, f64)],
        used: &mut Vec<bool>,
        acc: Vec<f64>,
        best: &mut f64,
        p: Option<f64>,
    ) {
        if i == f.len() {
            let mut costs = acc;
            for (j, &(b, d)) in g.iter().enumerate() {
                if !used[j] {
                    costs.push((d - b) / 2.0);
                }
            }
            let v = match p {
                None => costs.iter().copied().fold(0.0, f64::max),
                Some(p) => costs.iter().map(|c| c.powf(p)).sum(),
            };
            *best = best.min(v);
            return;
        }
        let (b, d) = f[i];
        let mut diag = acc.clone();
        diag.push((d - b) / 2.0);
        rec(i + 1, f, g, used, diag, best, p);
        for j in 0..g.len() {
            if !used[j] {
                used[j] = true;
                let mut with = acc.clone();
                with.push((b - g[j].0).abs().max((d - g[j].1).abs()));
                rec(i + 1, f, g, used, with, best, p);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    rec(0, f, g, &mut vec![false; g.len()], Vec::new(), &mut best, p);
    match p {
        None => best,
        Some(p) => best.powf(1.0 / p),
    }
}

/// Finite dim-0 sublevel pairs of a path graph, by recomputing the connected
/// runs of `{i : values[i] <= t}` at every distinct threshold `t` and letting
/// the younger component die at each merge. Sorted, zero-length pairs omitted.
pub fn sublevel_dim0(values: &[f64]) -> Vec<(f64, f64)> {
    let mut thresholds = values.to_vec();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();
    // component representative: the (value, index)-minimal member
    let components = |t: f64| -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < values.len() {
            if values[i] > t {
                i += 1;
                continue;
            }
            let start = i;
            while i < values.len() && values[i] <= t {
                i += 1;
            }
            let rep = (start..i).min_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b))).unwrap();
            out.push((start, i, rep));
        }
        out
    };
    let mut pairs = Vec::new();
    let mut prev: Vec<(usize, usize, usize)> = Vec::new();
    for &t in &thresholds {
        let now = components(t);
        for &(s, _, rep) in &prev {
            let (_, _, new_rep) = *now.iter().find(|c| c.0 <= s && s < c.1).unwrap();
            if new_rep != rep && values[rep] < t {
                pairs.push((values[rep], t));
            }
        }
        prev = now;
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pairs
}

/// `k`-th largest (1-based) tent value at `t`.
pub fn landscape_oracle(pairs: &[(f64, f64)], k: usize, t: f64) -> f64 {
    let mut v: Vec<f64> = pairs.iter().map(|&(b, d)| (t - b).min(d - t).max(0.0)).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v.get(k - 1).copied().unwrap_or(0.0)
}

/// Whether `a + shift * I` admits a Cholesky factorization.
pub fn cholesky_ok(a: &[Vec<f64>], shift: f64) -> bool {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j] + if i == j { shift } else { 0.0 };
            s -= l[i][..j].iter().zip(&l[j][..j]).map(|(x, y)| x * y).sum::<f64>();
            if i == j {
                if s <= 0.0 {
                    return false;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    true
}

/// Number of eigenvalues below `s`: the negative pivots of an unpivoted
/// `LDL^T` factorization of `a - s I` (Sylvester's law of inertia). Valid
/// when no leading minor of `a - s I` vanishes.
pub fn eigen_count_below(a: &[Vec<f64>], s: f64) -> usize {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= s;
    }
    let mut negatives = 0;
    for k in 0..n {
        let pivot = m[k][k];
        assert!(pivot != 0.0, "vanishing pivot");
        if pivot < 0.0 {
            negatives += 1;
        }
        let (head, tail) = m.split_at_mut(k + 1);
        let pivot_row = &head[k];
        for row in tail {
            let factor = row[k] / pivot;
            for (x, &y) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                *x -= factor * y;
            }
        }
    }
    negatives
}

pub fn fixture(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// One recorded indefiniteness witness.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessRecord {
    pub p: String,
    pub trial: u32,
    pub certifying_xi: f64,
    pub positive: usize,
    pub negative: usize,
    pub kept: Vec<usize>,
}

/// Seed and per-exponent records of `witness.txt`.
pub fn witness_fixture() -> (u64, Vec<WitnessRecord>) {
    let text = fixture("witness.txt");
    let mut seed = None;
    let mut records = Vec::new();
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f[0] == "seed" {
            seed = Some(f[1].parse().unwrap());
            continue;
        }
        records.push(WitnessRecord {
            p: f[0].to_string(),
            trial: f[1].parse().unwrap(),
            certifying_xi: f[2].parse().unwrap(),
            positive: f[3].parse().unwrap(),
            negative: f[4].parse().unwrap(),
            kept: f[5].split(',').map(|v| v.parse().unwrap()).collect(),
        });
    }
    (seed.expect("seed line"), records)
}

/// Independent check of a witness: inertia of `-d` and a negative eigenvalue
/// of `exp(-xi d)`, with `d` recomputed by the injection oracle.
/// Returns `(positive, negative, exp_has_negative)` at relative threshold `tol`.
pub fn verify_witness(pairs: &[Vec<(f64, f64)>], p: Option<f64>, xi: f64, tol: f64) -> (usize, usize, bool) {
    let n = pairs.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = wasserstein_oracle(&pairs[i], &pairs[j], p);
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    let minus_d: Vec<Vec<f64>> = d.iter().map(|r| r.iter().map(|v| -v).collect()).collect();
    // Frobenius norm bounds the spectral radius from above
    let scale = |m: &[Vec<f64>]| m.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
    let s = tol * scale(&minus_d);
    let negative = eigen_count_below(&minus_d, -s);
    let positive = n - eigen_count_below(&minus_d, s);
    let k: Vec<Vec<f64>> = d.iter().map(|r| r.iter().map(|v| (-xi * v).exp()).collect()).collect();
    let exp_negative = eigen_count_below(&k, -1e-12 * scale(&k)) > 0;
    (positive, negative, exp_negative)
}

pub fn exponent_value(p: &str) -> Option<f64> {
    if p == "inf" {
        None
    } else {
        Some(p.parse().unwrap())
    }
}

/// Runs the `pssk` binary in `dir`; returns `(exit code, stdout, stderr)`.
pub fn pssk(dir: &std::path::Path, args: &[&str]) -> (i32, String, String) {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_pssk"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn pssk");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

/// Input files for a run of every subcommand.
pub fn write_cli_inputs(dir: &std::path::Path) {
    let w = |name: &str, text: &str| std::fs::write(dir.join(name), text).unwrap();
    w("signal.csv", "2\n0\n3\n1\n4\n");
    w("ring.csv", "0,0,0\n0,1,0\n0,0,0\n");
    // square annulus: 8 outer vertices, 4 inner ones
    let mut off = String::from("OFF\n12 16 0\n");
    for (x, y) in [(0, 0), (1, 0), (2, 0), (3, 0), (3, 1), (3, 2), (3, 3), (2, 3)] {
        off += &format!("{x} {y} 0\n");
    }
    for (x, y) in [(1, 1), (2, 1), (2, 2), (1, 2)] {
        off += &format!("{x} {y} 0\n");
    }
    for t in [
        [0, 1, 8],
        [1, 2, 9],
        [1, 9, 8],
        [2, 3, 4],
        [2, 4, 9],
        [4, 5, 10],
        [4, 10, 9],
        [5, 6, 10],
        [6, 7, 10],
        [7, 11, 10],
        [0, 8, 11],
        [0, 11, 7],
        [8, 9, 11],
        [9, 10, 11],
        [0, 7, 6],
        [0, 6, 5],
    ] {
        off += &format!("3 {} {} {}\n", t[0], t[1], t[2]);
    }
    w("mesh.off", &off);
    w("mesh_values.txt", "0\n0\n0\n0\n0\n0\n0\n0\n1\n2\n3\n2\n");
    w("a.dgm", "0 1\n");
    w("b.dgm", "0 2\n0.5 1.5\n");
    w("ten.dgm", "0 10\n");
    w("empty.dgm", "");
    let mut manifest = String::new();
    for i in 0..6 {
        let (label, pairs) = if i % 2 == 0 {
            (0, format!("0 {}\n", 1.0 + 0.05 * i as f64))
        } else {
            (1, format!("0 {}\n0.2 {}\n", 5.0 + 0.1 * i as f64, 2.0 + 0.05 * i as f64))
        };
        w(&format!("item{i}.dgm"), &pairs);
        manifest += &format!("item{i}.dgm {label}\n");
    }
    w("items.txt", &manifest);
    w("labels.txt", "0\n1\n0\n1\n0\n1\n");
}

/// Every subcommand once; outputs land next to the inputs.
pub const CLI_RUNS: &[&[&str]] = &[
    &["diagram", "--input", "signal.csv", "--kind", "signal1d", "--out", "signal.dgm"],
    &["diagram", "--input", "ring.csv", "--kind", "image", "--out", "ring.dgm"],
    &["diagram", "--input", "mesh.off", "--kind", "mesh", "--values", "mesh_values.txt", "--out", "mesh.dgm"],
    &["kernel", "--a", "a.dgm", "--b", "b.dgm", "--sigma", "0.5"],
    &["kernel", "--a", "a.dgm", "--b", "b.dgm", "--kind", "landscape"],
    &["gram", "--list", "items.txt", "--sigma", "0.5", "--out", "gram.csv", "--export", "gram.txt"],
    &["gram", "--list", "items.txt", "--kernel", "landscape"],
    &["distance", "--a", "ten.dgm", "--b", "empty.dgm", "--p", "inf"],
    &["distance", "--list", "items.txt", "--p", "2", "--out", "w2.csv"],
    &["distance", "--list", "items.txt", "--metric", "pssk", "--sigma", "0.5"],
    &["landscape", "--input", "b.dgm", "--out", "b_landscape.csv"],
    &["feature-map", "--input", "b.dgm", "--sigma", "0.1", "--grid", "16", "--format", "pgm", "--out", "b.pgm"],
    &["feature-map", "--input", "b.dgm", "--sigma", "0.1", "--grid", "8", "--bounds", "0,2,0,2"],
    &["definiteness", "check", "--matrix", "w2.csv", "--negate"],
    &["definiteness", "check", "--matrix", "gram.csv"],
    &["--seed", "7", "definiteness", "search", "--p", "1", "--items", "30", "--out-dir", "witness"],
    &[
        "--seed",
        "3",
        "classify",
        "--list",
        "items.txt",
        "--folds",
        "3",
        "--sigma-grid",
        "0.1,1",
        "--curve-out",
        "curve.csv",
    ],
    &["--seed", "3", "classify", "--precomputed", "gram.txt", "--folds", "3"],
    &["--precision", "6", "retrieval", "--matrix", "w2.csv", "--labels", "labels.txt"],
];

/// Runs [`CLI_RUNS`] in a fresh directory and returns a transcript of every
/// exit code, stream and output file, in a fixed order.
pub fn cli_transcript() -> Vec<u8> {
    let dir = tempfile::tempdir().unwrap();
    write_cli_inputs(dir.path());
    let mut out = Vec::new();
    for args in CLI_RUNS {
        let (code, stdout, stderr) = pssk(dir.path(), args);
        out.extend(format!("$ {}\n{code}\n{stdout}{stderr}", args.join(" ")).into_bytes());
    }
    let mut files: Vec<_> = walk(dir.path());
    files.sort();
    for f in files {
        out.extend(format!("== {}\n", f.strip_prefix(dir.path()).unwrap().display()).into_bytes());
        out.extend(std::fs::read(&f).unwrap());
    }
    out
}

fn walk(dir: &std::path::Path) -> Vec<std::path::PathBuf> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.is_dir() {
            files.extend(walk(&path));
        } else {
            files.push(path);
        }
    }
    files
}
