//! Numerical spectra of blocks at sampled frequencies.
//!
//! Frequencies enter through the exact characteristic polynomial's variables:
//! `x_i = xi_i` and `y_i = sqrt(xi_i)`, so everything here requires a strictly
//! positive frequency vector. Eigenvalues come from a dense nonsymmetric
//! solver written in this file (balancing, a Gaussian similarity reduction to
//! Hessenberg form, and Francis double-shift QR); blocks stay tiny, so a
//! self-contained kernel beats a numerical-library dependency. Every computed
//! eigenvalue is cross-checked as a root of the exact characteristic
//! polynomial before it is reported.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::blocks::{build_matrix, build_matrix_marked, BlockMatrix};
use crate::error::SpectralError;
use crate::graphs::{ColoredGraph, MarkedGraph};
use crate::poly::MultiPoly;

/// An eigenvalue counts as real when `|Im| <= REAL_IM_TOL * (1 + |lambda|)`.
pub const REAL_IM_TOL: f64 = 1e-8;

/// Eigenvalues count as pairwise distinct when every gap exceeds this.
pub const DISTINCT_GAP: f64 = 1e-6;

/// Accepted relative residual of an eigenvalue against the exact polynomial.
pub const RESIDUAL_REL: f64 = 1e-6;

/// Coordinate floor for interior simplex samples.
const SIMPLEX_FLOOR: f64 = 1e-4;

/// Spectrum of one block at one frequency sample.
#[derive(Serialize, Clone, Debug)]
pub struct SpectrumSample {
    /// One-line id of the graph the block came from.
    pub graph: String,
    pub xi: Vec<f64>,
    /// `(re, im)` pairs sorted lexicographically.
    pub eigenvalues: Vec<(f64, f64)>,
    pub n_real: usize,
    /// True when all pairwise gaps exceed [`DISTINCT_GAP`].
    pub distinct: bool,
    /// Smallest pairwise eigenvalue distance (infinite below dimension 2).
    pub min_gap: f64,
}

impl SpectrumSample {
    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn all_real(&self) -> bool {
        self.n_real == self.eigenvalues.len()
    }

    /// Ellipticity margin: the smallest pairwise gap when every eigenvalue is
    /// real, otherwise minus the largest imaginary magnitude.
    pub fn margin(&self) -> f64 {
        if self.all_real() {
            self.min_gap
        } else {
            -self
                .eigenvalues
                .iter()
                .map(|&(_, im)| im.abs())
                .fold(0.0, f64::max)
        }
    }
}

/// Outcome of a grid scan for a common real-and-separated frequency point.
#[derive(Serialize, Clone, Debug)]
pub struct EllipticReport {
    pub found: bool,
    /// The first grid point meeting the margin, or the best candidate seen.
    pub point: Vec<f64>,
    /// Overall margin at `point` (minimum over the family).
    pub margin: f64,
    /// Per-graph margins at `point`, in family order.
    pub margins: Vec<f64>,
    /// One-line graph ids, in family order.
    pub graphs: Vec<String>,
    pub n_samples: usize,
    pub required_margin: f64,
}

/// Eigenvalues of an explicit block against a caller-supplied exact
/// polynomial. The lower-level entry point behind [`eigenvalues_at`]; the
/// polynomial must be the block's characteristic polynomial or the residual
/// guard rejects the result.
pub fn eigenvalues_of(
    block: &BlockMatrix,
    chi: &MultiPoly,
    graph_id: String,
    xi: &[f64],
) -> Result<SpectrumSample, SpectralError> {
    if xi.iter().any(|&v| !(v > 0.0)) {
        return Err(SpectralError::NonPositiveFrequency);
    }
    let mat = numeric_matrix(block, xi)?;
    let mut eigenvalues = dense_eigenvalues(mat)?;
    for lambda in &eigenvalues {
        let residual = chi.eval_complex(xi, *lambda)?.norm();
        let allowed = RESIDUAL_REL * chi.eval_majorant(xi, lambda.norm())?;
        if residual > allowed {
            return Err(SpectralError::ResidualCheck {
                value: format!("{}+{}i", lambda.re, lambda.im),
                residual,
                allowed,
            });
        }
    }
    eigenvalues.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let n_real = eigenvalues
        .iter()
        .filter(|l| l.im.abs() <= REAL_IM_TOL * (1.0 + l.norm()))
        .count();
    let mut min_gap = f64::INFINITY;
    for i in 0..eigenvalues.len() {
        for j in i + 1..eigenvalues.len() {
            min_gap = min_gap.min((eigenvalues[i] - eigenvalues[j]).norm());
        }
    }
    Ok(SpectrumSample {
        graph: graph_id,
        xi: xi.to_vec(),
        eigenvalues: eigenvalues.iter().map(|l| (l.re, l.im)).collect(),
        n_real,
        distinct: min_gap > DISTINCT_GAP,
        min_gap,
    })
}

/// Spectrum of a combinatorial graph's block at a positive frequency vector.
pub fn eigenvalues_at(g: &ColoredGraph, xi: &[f64]) -> Result<SpectrumSample, SpectralError> {
    let block = build_matrix(g);
    let chi = block.charpoly()?;
    eigenvalues_of(&block, &chi, g.to_line(), xi)
}

/// Spectrum of an explicitly colored graph's block.
pub fn eigenvalues_marked(g: &MarkedGraph, xi: &[f64]) -> Result<SpectrumSample, SpectralError> {
    let block = build_matrix_marked(g);
    let chi = block.charpoly()?;
    eigenvalues_of(&block, &chi, format!("{:?}", g.vertices), xi)
}

/// Checks that the spectrum scales linearly with the frequencies: the
/// eigenvalues at `lambda * xi` must equal `lambda` times the eigenvalues at
/// `xi`, matched after sorting, within `tol * (1 + |scaled eigenvalue|)`.
pub fn homogeneity_check(
    g: &ColoredGraph,
    xi: &[f64],
    lambda: f64,
    tol: f64,
) -> Result<bool, SpectralError> {
    assert!(lambda > 0.0, "the scaling factor must be positive");
    let base = eigenvalues_at(g, xi)?;
    let scaled_xi: Vec<f64> = xi.iter().map(|v| v * lambda).collect();
    let scaled = eigenvalues_at(g, &scaled_xi)?;
    // Positive scaling preserves the lexicographic eigenvalue order.
    let ok = base
        .eigenvalues
        .iter()
        .zip(&scaled.eigenvalues)
        .all(|(&(re, im), &(sre, sim))| {
            let expect = Complex64::new(lambda * re, lambda * im);
            let diff = (Complex64::new(sre, sim) - expect).norm();
            diff <= tol * (1.0 + expect.norm())
        });
    Ok(ok)
}

/// Deterministic frequency samples on the open unit simplex.
///
/// The grid starts with a scale ladder (normalized permutations of powers of
/// a small ratio) because separated frequency scales are where fully real
/// spectra live, then fills up to `samples` points with a Halton sequence
/// mapped to the simplex through sorted spacings. For a single frequency the
/// only direction is `[1.0]`.
pub fn simplex_grid(m: usize, samples: usize) -> Vec<Vec<f64>> {
    assert!(m >= 1, "at least one frequency");
    if m == 1 {
        return vec![vec![1.0]];
    }
    const BASES: [usize; 6] = [2, 3, 5, 7, 11, 13];
    assert!(m - 1 <= BASES.len(), "grid supports up to 7 frequencies");
    let mut points = Vec::new();
    for &eps in &[0.25_f64, 0.0625, 0.015625, 0.00390625, 0.0009765625] {
        let rungs: Vec<f64> = (0..m).map(|k| eps.powi(k as i32)).collect();
        for perm in permutations(m) {
            let p: Vec<f64> = perm.iter().map(|&k| rungs[k]).collect();
            let total: f64 = p.iter().sum();
            points.push(p.iter().map(|v| v / total).collect());
        }
    }
    let mut index = 1usize;
    while points.len() < samples && index <= 64 * samples.max(1) {
        let mut cuts: Vec<f64> =
            (0..m - 1).map(|i| radical_inverse(index, BASES[i])).collect();
        index += 1;
        cuts.sort_by(f64::total_cmp);
        let mut point = Vec::with_capacity(m);
        let mut prev = 0.0;
        for &c in &cuts {
            point.push(c - prev);
            prev = c;
        }
        point.push(1.0 - prev);
        if point.iter().all(|&v| v > SIMPLEX_FLOOR) {
            points.push(point);
        }
    }
    points
}

/// Scans the simplex grid for a frequency point where every block in the
/// family has an all-real, pairwise-separated spectrum with margin at least
/// `required_margin`. Scale is irrelevant by homogeneity, so the unit simplex
/// covers the whole positive orthant. Reports the first grid point that
/// succeeds, or the best candidate when none does.
pub fn search_elliptic(
    gs: &[ColoredGraph],
    m: usize,
    samples: usize,
    required_margin: f64,
) -> Result<EllipticReport, SpectralError> {
    let mut family = Vec::with_capacity(gs.len());
    for g in gs {
        assert_eq!(g.m(), m, "family members must share the frequency count");
        let block = build_matrix(g);
        let chi = block.charpoly()?;
        family.push((g.to_line(), block, chi));
    }
    let grid = simplex_grid(m, samples);
    let evaluated: Vec<Result<Vec<f64>, SpectralError>> = grid
        .par_iter()
        .map(|xi| {
            family
                .iter()
                .map(|(id, block, chi)| {
                    eigenvalues_of(block, chi, id.clone(), xi).map(|s| s.margin())
                })
                .collect()
        })
        .collect();
    let graphs: Vec<String> = family.iter().map(|(id, _, _)| id.clone()).collect();
    let mut best: Option<(usize, f64, Vec<f64>)> = None;
    for (idx, result) in evaluated.into_iter().enumerate() {
        let margins = result?;
        let overall = margins.iter().copied().fold(f64::INFINITY, f64::min);
        if overall >= required_margin {
            return Ok(EllipticReport {
                found: true,
                point: grid[idx].clone(),
                margin: overall,
                margins,
                graphs,
                n_samples: grid.len(),
                required_margin,
            });
        }
        if best.as_ref().is_none_or(|(_, b, _)| overall > *b) {
            best = Some((idx, overall, margins));
        }
    }
    let (idx, margin, margins) =
        best.expect("the grid always contains at least one point");
    Ok(EllipticReport {
        found: false,
        point: grid[idx].clone(),
        margin,
        margins,
        graphs,
        n_samples: grid.len(),
        required_margin,
    })
}

/// Evaluates the exact block entries at `x_i = xi_i`, `y_i = sqrt(xi_i)`.
fn numeric_matrix(block: &BlockMatrix, xi: &[f64]) -> Result<Vec<Vec<f64>>, SpectralError> {
    let zero = Complex64::new(0.0, 0.0);
    block
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|entry| Ok(entry.eval_complex(xi, zero)?.re))
                .collect()
        })
        .collect()
}

/// All eigenvalues of a small dense real matrix.
pub fn dense_eigenvalues(mut mat: Vec<Vec<f64>>) -> Result<Vec<Complex64>, SpectralError> {
    let n = mat.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    for row in &mat {
        assert_eq!(row.len(), n, "eigenvalue input must be square");
    }
    balance(&mut mat);
    hessenberg(&mut mat);
    hqr(&mut mat)
}

/// Parlett--Reinsch balancing: diagonal similarity by powers of two until row
/// and column norms agree, reducing the error of the QR iteration.
fn balance(a: &mut [Vec<f64>]) {
    let n = a.len();
    const RADIX: f64 = 2.0;
    let sqrdx = RADIX * RADIX;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[j][i].abs();
                    r += a[i][j].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / RADIX;
                let mut f = 1.0;
                let s = c + r;
                let mut col = c;
                while col < g {
                    f *= RADIX;
                    col *= sqrdx;
                }
                g = r * RADIX;
                while col > g {
                    f /= RADIX;
                    col /= sqrdx;
                }
                if (col + r) / f < 0.95 * s {
                    done = false;
                    let ginv = 1.0 / f;
                    for j in 0..n {
                        a[i][j] *= ginv;
                    }
                    for j in 0..n {
                        a[j][i] *= f;
                    }
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Reduction to upper Hessenberg form by pivoted Gaussian similarity
/// transformations.
fn hessenberg(a: &mut Vec<Vec<f64>>) {
    let n = a.len();
    if n < 3 {
        return;
    }
    for k in 1..n - 1 {
        let mut pivot = k;
        for i in k + 1..n {
            if a[i][k - 1].abs() > a[pivot][k - 1].abs() {
                pivot = i;
            }
        }
        if a[pivot][k - 1] == 0.0 {
            continue;
        }
        if pivot != k {
            a.swap(pivot, k);
            for row in a.iter_mut() {
                row.swap(pivot, k);
            }
        }
        let lead = a[k][k - 1];
        for i in k + 1..n {
            let mult = a[i][k - 1] / lead;
            if mult != 0.0 {
                for j in k - 1..n {
                    a[i][j] -= mult * a[k][j];
                }
                for r in 0..n {
                    let add = mult * a[r][i];
                    a[r][k] += add;
                }
            }
        }
    }
    for i in 2..n {
        for j in 0..i - 1 {
            a[i][j] = 0.0;
        }
    }
}

/// Francis double-shift QR iteration on an upper Hessenberg matrix, following
/// the classic EISPACK `hqr` routine. Destroys the input.
fn hqr(a: &mut [Vec<f64>]) -> Result<Vec<Complex64>, SpectralError> {
    let n = a.len();
    let mut wr = vec![0.0f64; n];
    let mut wi = vec![0.0f64; n];
    let mut anorm = 0.0f64;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += a[i][j].abs();
        }
    }
    if anorm == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); n]);
    }
    let mut nn: isize = n as isize - 1;
    let mut shift_total = 0.0f64;
    while nn >= 0 {
        let mut its = 0usize;
        loop {
            // Look for a negligible subdiagonal entry from the bottom up.
            let mut l = nn;
            while l >= 1 {
                let lu = l as usize;
                let mut s = a[lu - 1][lu - 1].abs() + a[lu][lu].abs();
                if s == 0.0 {
                    s = anorm;
                }
                if a[lu][lu - 1].abs() <= f64::EPSILON * s {
                    a[lu][lu - 1] = 0.0;
                    break;
                }
                l -= 1;
            }
            let nnu = nn as usize;
            let mut x = a[nnu][nnu];
            if l == nn {
                // One real eigenvalue deflates.
                wr[nnu] = x + shift_total;
                wi[nnu] = 0.0;
                nn -= 1;
                break;
            }
            let mut y = a[nnu - 1][nnu - 1];
            let mut w = a[nnu][nnu - 1] * a[nnu - 1][nnu];
            if l == nn - 1 {
                // A 2x2 trailing block deflates: real pair or conjugate pair.
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                let xs = x + shift_total;
                if q >= 0.0 {
                    let zz = p + if p >= 0.0 { z } else { -z };
                    wr[nnu - 1] = xs + zz;
                    wr[nnu] = if zz != 0.0 { xs - w / zz } else { wr[nnu - 1] };
                    wi[nnu - 1] = 0.0;
                    wi[nnu] = 0.0;
                } else {
                    wr[nnu - 1] = xs + p;
                    wr[nnu] = xs + p;
                    wi[nnu - 1] = -z;
                    wi[nnu] = z;
                }
                nn -= 2;
                break;
            }
            if its == 30 {
                return Err(SpectralError::NoConvergence);
            }
            if its == 10 || its == 20 {
                // Exceptional shift to break cycling.
                shift_total += x;
                for i in 0..=nnu {
                    a[i][i] -= x;
                }
                let s = a[nnu][nnu - 1].abs() + a[nnu - 1][nnu - 2].abs();
                y = 0.75 * s;
                x = y;
                w = -0.4375 * s * s;
            }
            its += 1;
            // Find two consecutive small subdiagonals for the implicit start.
            let mut m = nn - 2;
            let mut p = 0.0f64;
            let mut q = 0.0f64;
            let mut r = 0.0f64;
            while m >= l {
                let mu = m as usize;
                let z = a[mu][mu];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / a[mu + 1][mu] + a[mu][mu + 1];
                q = a[mu + 1][mu + 1] - z - rr - ss;
                r = a[mu + 2][mu + 1];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = a[mu][mu - 1].abs() * (q.abs() + r.abs());
                let v = p.abs() * (a[mu - 1][mu - 1].abs() + z.abs() + a[mu + 1][mu + 1].abs());
                if u <= f64::EPSILON * v {
                    break;
                }
                m -= 1;
            }
            for i in (m + 2)..=nn {
                a[i as usize][(i - 2) as usize] = 0.0;
            }
            for i in (m + 3)..=nn {
                a[i as usize][(i - 3) as usize] = 0.0;
            }
            // Double QR sweep on rows and columns m..nn.
            for kk in m..=(nn - 1) {
                let k = kk as usize;
                if kk != m {
                    p = a[k][k - 1];
                    q = a[k + 1][k - 1];
                    r = if kk != nn - 1 { a[k + 2][k - 1] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let mag = (p * p + q * q + r * r).sqrt();
                let s = if p >= 0.0 { mag } else { -mag };
                if s == 0.0 {
                    continue;
                }
                if kk == m {
                    if l != m {
                        a[k][k - 1] = -a[k][k - 1];
                    }
                } else {
                    a[k][k - 1] = -s * x;
                }
                p += s;
                x = p / s;
                y = q / s;
                let z = r / s;
                q /= p;
                r /= p;
                for j in k..=nnu {
                    let mut pp = a[k][j] + q * a[k + 1][j];
                    if kk != nn - 1 {
                        pp += r * a[k + 2][j];
                        a[k + 2][j] -= pp * z;
                    }
                    a[k + 1][j] -= pp * y;
                    a[k][j] -= pp * x;
                }
                let mmin = if nnu < k + 3 { nnu } else { k + 3 };
                for i in (l as usize)..=mmin {
                    let mut pp = x * a[i][k] + y * a[i][k + 1];
                    if kk != nn - 1 {
                        pp += z * a[i][k + 2];
                        a[i][k + 2] -= pp * r;
                    }
                    a[i][k + 1] -= pp * q;
                    a[i][k] -= pp;
                }
            }
        }
    }
    Ok(wr.into_iter().zip(wi).map(|(re, im)| Complex64::new(re, im)).collect())
}

/// Van der Corput radical inverse of `index` in the given base.
fn radical_inverse(mut index: usize, base: usize) -> f64 {
    let mut inv = 0.0;
    let mut scale = 1.0 / base as f64;
    while index > 0 {
        inv += scale * (index % base) as f64;
        index /= base;
        scale /= base as f64;
    }
    inv
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn heap(arr: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(arr.clone());
            return;
        }
        for i in 0..k {
            heap(arr, k - 1, out);
            if k % 2 == 0 {
                arr.swap(i, k - 1);
            } else {
                arr.swap(0, k - 1);
            }
        }
    }
    let mut idx: Vec<usize> = (0..m).collect();
    let mut out = Vec::new();
    heap(&mut idx, m, &mut out);
    out
}
